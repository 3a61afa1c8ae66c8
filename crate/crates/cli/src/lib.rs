//! Command-line driver for `catnf`.
//!
//! The binary is a thin wrapper around [`run`], which parses arguments,
//! dispatches to a command and returns the process exit status:
//! 0 for success (valid, convertible, all laws hold), 1 for a negative
//! result and 2 for usage, parse or JSON syntax errors. Failures print a
//! one-line JSON diagnostic on stderr.

pub mod error;
pub mod surface;

use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use catnf::json::{ctxt_from_json, ctxt_to_json, tm_from_json, tm_to_json, Certificate};
use catnf::pcatlab::{self, LawBounds, LawReport};
use catnf::{alpha_eq, decide_conv, nf4, nf4_subst, Ctxt, NfResult, Subst, Ty};

pub use error::CliError;
pub use surface::{default_names, parse_surface, parse_term, parse_ty, parse_var_decl, print_term, SurfaceTerm};

#[derive(Debug, Parser)]
#[command(name = "catnf", version, about = "Certified βη-normalization for the simply typed λ-calculus")]
pub struct CliConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Normalize a term to long βη-normal form.
    Nf(NfArgs),
    /// Validate a certificate or normalization result.
    Check(CheckArgs),
    /// Decide βη-convertibility of two terms.
    Eq(EqArgs),
    /// Run the law-check suites.
    Laws(LawsArgs),
}

#[derive(Debug, Args)]
pub struct CtxArgs {
    /// Declare a free variable, outermost first.
    #[arg(long = "var", value_name = "NAME:TYPE")]
    pub vars: Vec<String>,
}

impl CtxArgs {
    fn decls(&self) -> Result<Vec<(String, Ty)>, CliError> {
        self.vars.iter().map(|v| parse_var_decl(v)).collect()
    }
}

#[derive(Debug, Args)]
pub struct NfArgs {
    /// The term, unless --file or --batch is given.
    #[arg(conflicts_with_all = ["file", "batch"], required_unless_present_any = ["file", "batch"])]
    pub term: Option<String>,
    /// Read the term from a file (`-` for stdin).
    #[arg(long, conflicts_with = "batch")]
    pub file: Option<PathBuf>,
    /// Normalize every entry of a JSON substitution `{src, tgt, entries}`.
    #[arg(long, value_name = "FILE")]
    pub batch: Option<PathBuf>,
    /// Emit the full normalization result with its three derivations.
    #[arg(long)]
    pub cert: bool,
    #[arg(long)]
    pub json: bool,
    #[command(flatten)]
    pub ctx: CtxArgs,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// Certificate `{ctxt, lhs, rhs, deriv}` or normalization result (`-` for stdin).
    pub cert: PathBuf,
    /// Expected left endpoint, in surface syntax.
    #[arg(long)]
    pub lhs: Option<String>,
    /// Expected right endpoint, in surface syntax.
    #[arg(long)]
    pub rhs: Option<String>,
    /// Names for the certificate's context; defaults to x0, x1, ….
    #[command(flatten)]
    pub ctx: CtxArgs,
}

#[derive(Debug, Args)]
pub struct EqArgs {
    pub left: String,
    pub right: String,
    #[arg(long)]
    pub json: bool,
    #[command(flatten)]
    pub ctx: CtxArgs,
}

#[derive(Debug, Args)]
pub struct LawsArgs {
    /// Override a bound, e.g. `term_depth=2`; may be comma separated.
    #[arg(long, value_name = "KEY=VALUE", value_delimiter = ',')]
    pub bounds: Vec<String>,
    /// Restrict to the named suites.
    #[arg(long, value_name = "NAME")]
    pub suite: Vec<String>,
    #[arg(long)]
    pub json: bool,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cfg = match CliConfig::try_parse_from(args) {
        Ok(cfg) => cfg,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let diag = json!({ "error": "usage", "message": e.to_string().trim_end() });
                    let _ = writeln!(err, "{diag}");
                    2
                }
            };
        }
    };
    match execute(&cfg, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "{}", e.to_json());
            e.exit_code()
        }
    }
}

/// Runs a parsed configuration, returning the exit status of a completed
/// command or the error that stopped it.
pub fn execute(cfg: &CliConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    match &cfg.command {
        Command::Nf(a) => cmd_nf(a, out),
        Command::Check(a) => cmd_check(a, out),
        Command::Eq(a) => cmd_eq(a, out),
        Command::Laws(a) => cmd_laws(a, out),
    }
}

fn emit(out: &mut dyn Write, text: impl std::fmt::Display) -> Result<(), CliError> {
    writeln!(out, "{text}").map_err(|e| CliError::Io { path: "<stdout>".into(), reason: e.to_string() })
}

fn read_input(path: &PathBuf) -> Result<String, CliError> {
    let io = |e: std::io::Error| CliError::Io { path: path.display().to_string(), reason: e.to_string() };
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(io)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(io)
    }
}

fn read_json(path: &PathBuf) -> Result<Value, CliError> {
    serde_json::from_str(&read_input(path)?).map_err(|e| CliError::JsonSyntax(e.to_string()))
}

fn cmd_nf(a: &NfArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    if let Some(batch) = &a.batch {
        let results = nf4_subst(&subst_from_json(&read_json(batch)?)?)?;
        let docs: Vec<Value> = if a.cert {
            results.iter().map(NfResult::to_json).collect()
        } else {
            results.iter().map(|r| tm_to_json(&r.nf)).collect()
        };
        emit(out, Value::Array(docs))?;
        return Ok(0);
    }
    let src = match (&a.term, &a.file) {
        (Some(t), _) => t.clone(),
        (None, Some(f)) => read_input(f)?,
        (None, None) => return Err(CliError::Usage("no term given".into())),
    };
    let t = parse_term(&src, &a.ctx.decls()?)?;
    let r = nf4(&t)?;
    if a.cert {
        emit(out, r.to_json())?;
    } else if a.json {
        let doc = json!({
            "ctxt": ctxt_to_json(t.ctxt()),
            "input": tm_to_json(&t),
            "nf": tm_to_json(&r.nf),
            "text": print_term(&r.nf),
        });
        emit(out, doc)?;
    } else {
        emit(out, print_term(&r.nf))?;
    }
    Ok(0)
}

/// Decodes `{src, tgt, entries}` with terms over `src` aligned with `tgt`.
pub fn subst_from_json(v: &Value) -> Result<Subst, CliError> {
    let schema = |path: &str, reason: &str| catnf::Error::Json { path: path.into(), reason: reason.into() };
    let obj = v.as_object().ok_or_else(|| schema("$", "substitution must be an object"))?;
    let field = |k: &str| obj.get(k).ok_or_else(|| schema(&format!("$/{k}"), "missing field"));
    let src = ctxt_from_json(field("src")?)?;
    let tgt = ctxt_from_json(field("tgt")?)?;
    let entries = field("entries")?
        .as_array()
        .ok_or_else(|| schema("$/entries", "expected an array"))?
        .iter()
        .map(|e| tm_from_json(&src, e))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Subst::new(src, tgt, entries)?)
}

fn names_for(ctx: &CtxArgs, g: &Ctxt) -> Result<Vec<(String, Ty)>, CliError> {
    if ctx.vars.is_empty() {
        return Ok(default_names(g));
    }
    let decls = ctx.decls()?;
    let declared: Vec<Ty> = decls.iter().map(|(_, t)| t.clone()).collect();
    if declared != g.types() {
        return Err(CliError::Usage(format!("declared variables do not match the certificate context {g}")));
    }
    Ok(decls)
}

fn cmd_check(a: &CheckArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let doc = read_json(&a.cert)?;
    let (g, lhs, rhs) = if doc.get("deriv").is_some() {
        let c = Certificate::from_json(&doc)?;
        c.verify()?;
        (c.ctxt, c.lhs, c.rhs)
    } else if doc.get("cert").is_some() {
        let r = NfResult::from_json(&doc)?;
        r.verify()?;
        (r.input.ctxt().clone(), r.input, r.nf)
    } else {
        return Err(catnf::Error::Json {
            path: "$".into(),
            reason: "expected a certificate (with `deriv`) or a normalization result (with `cert`)".into(),
        }
        .into());
    };
    let names = names_for(&a.ctx, &g)?;
    for (side, claim, actual) in [("lhs", &a.lhs, &lhs), ("rhs", &a.rhs, &rhs)] {
        if let Some(src) = claim {
            let expected = parse_term(src, &names)?;
            if !alpha_eq(&expected, actual) {
                return Err(catnf::Error::BadNode {
                    path: format!("$/{side}"),
                    reason: format!("certificate relates `{}`, not `{}`", print_term(actual), print_term(&expected)),
                }
                .into());
            }
        }
    }
    emit(out, format!("valid: {} ~ {}", print_term(&lhs), print_term(&rhs)))?;
    Ok(0)
}

fn cmd_eq(a: &EqArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let decls = a.ctx.decls()?;
    let t = parse_term(&a.left, &decls)?;
    let u = parse_term(&a.right, &decls)?;
    let conv = decide_conv(&t, &u)?;
    if a.json {
        emit(out, json!({ "convertible": conv }))?;
    } else {
        emit(out, if conv { "convertible" } else { "not convertible" })?;
    }
    Ok(if conv { 0 } else { 1 })
}

const SUITES: [&str; 7] = ["rnm_category", "subst_category", "actions", "cartesian", "ccc", "qu_naturality", "oracle"];

fn cmd_laws(a: &LawsArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let mut b = LawBounds::default();
    for kv in &a.bounds {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("bound `{kv}` is not of the form key=value")))?;
        let v: usize = v.trim().parse().map_err(|_| CliError::Usage(format!("bound `{kv}` needs a non-negative integer")))?;
        b.set(k.trim(), v).map_err(|e| CliError::Usage(e.to_string()))?;
    }
    for s in &a.suite {
        if !SUITES.contains(&s.as_str()) {
            return Err(CliError::Usage(format!("unknown suite `{s}`; known suites: {}", SUITES.join(", "))));
        }
    }
    let wanted = |s: &str| a.suite.is_empty() || a.suite.iter().any(|w| w == s);
    let mut reports: Vec<(LawReport, Option<usize>)> = Vec::new();
    for name in SUITES.iter().copied().filter(|s| wanted(s)) {
        let rep = match name {
            "rnm_category" => (pcatlab::laws_rnm_category(&b)?, None),
            "subst_category" => (pcatlab::laws_subst_category(&b)?, None),
            "actions" => (pcatlab::laws_actions(&b)?, None),
            "cartesian" => (pcatlab::laws_cartesian(&b)?, None),
            "ccc" => (pcatlab::laws_ccc(&b)?, None),
            "qu_naturality" => (pcatlab::laws_qu_naturality(&b)?, None),
            _ => {
                let (r, inconclusive) = pcatlab::laws_oracle(&b)?;
                (r, Some(inconclusive))
            }
        };
        reports.push(rep);
    }
    let ok = reports.iter().all(|(r, _)| r.passed());
    if a.json {
        let docs: Vec<Value> = reports
            .iter()
            .map(|(r, inc)| {
                let mut d = r.to_json();
                if let Some(n) = inc {
                    d["inconclusive"] = json!(n);
                }
                d
            })
            .collect();
        emit(out, Value::Array(docs))?;
    } else {
        for (r, inc) in &reports {
            let extra = inc.map(|n| format!(", {n} inconclusive")).unwrap_or_default();
            emit(out, format!("{}: {} cases, {} failures{extra}", r.suite, r.cases, r.failures.len()))?;
            for f in r.failures.iter().take(3) {
                emit(out, format!("  {}: {}", f.law, f.counterexample))?;
            }
        }
    }
    Ok(if ok { 0 } else { 1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("catnf").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn nf_of_one() {
        let (code, out, _) = call(&["nf", "\\f:o->o. f"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), "\\x0:o->o. \\x1:o. x0 x1");
    }

    #[test]
    fn nf_with_free_variables() {
        let (code, out, _) = call(&["nf", "--var", "g:o->o", "(\\h:o->o. h) g"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), "\\x1:o. x0 x1");
    }

    #[test]
    fn nf_json_output() {
        let (code, out, _) = call(&["nf", "--json", "\\x:o. x"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["text"], "\\x0:o. x0");
        assert_eq!(v["ctxt"], json!([]));
    }

    #[test]
    fn parse_errors_exit_two() {
        let (code, _, err) = call(&["nf", "\\x:o. y"]);
        assert_eq!(code, 2);
        let v: Value = serde_json::from_str(err.trim()).unwrap();
        assert_eq!(v["error"], "unbound_variable");
        let (code, _, err) = call(&["nf", "(x"]);
        assert_eq!(code, 2);
        assert!(err.contains("\"col\""));
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(call(&[]).0, 2);
        assert_eq!(call(&["nf"]).0, 2);
        assert_eq!(call(&["laws", "--bounds", "fuel"]).0, 2);
        assert_eq!(call(&["laws", "--bounds", "colour=3"]).0, 2);
        assert_eq!(call(&["laws", "--suite", "nope"]).0, 2);
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn eq_is_symmetric_and_signals_by_exit_code() {
        let succ_one = "(\\n:(o->o)->o->o. \\f:o->o. \\x:o. f (n f x)) (\\f:o->o. f)";
        let two = "\\f:o->o. \\x:o. f (f x)";
        assert_eq!(call(&["eq", succ_one, two]).0, 0);
        assert_eq!(call(&["eq", two, succ_one]).0, 0);
        assert_eq!(call(&["eq", "\\f:o->o. f", two]).0, 1);
        assert_eq!(call(&["eq", two, "\\f:o->o. f"]).0, 1);
        let (code, _, err) = call(&["eq", "\\x:o. x", two]);
        assert_eq!(code, 1);
        assert!(err.contains("type_mismatch"));
    }

    #[test]
    fn substitution_batch() {
        let dir = std::env::temp_dir().join(format!("catnf-batch-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("s.json");
        let g = Ctxt::nil().snoc(Ty::arr(Ty::Iota, Ty::Iota));
        let s = Subst::id(&g);
        let doc = json!({ "src": ctxt_to_json(&g), "tgt": ctxt_to_json(&g), "entries": [tm_to_json(&s.entries()[0])] });
        std::fs::write(&path, doc.to_string()).unwrap();
        let (code, out, _) = call(&["nf", "--batch", path.to_str().unwrap()]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v, json!([["abs", ["iota"], ["app", ["var", 1], ["var", 0]]]]));
        let (code, out, _) = call(&["nf", "--batch", path.to_str().unwrap(), "--cert"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        NfResult::from_json(&v[0]).unwrap().verify().unwrap();
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn laws_at_small_bounds() {
        let (code, out, _) = call(&["laws", "--bounds", "type_depth=1,ctxt_len=1,term_depth=2,triple_ctxt_len=1"]);
        assert_eq!(code, 0, "{out}");
        assert_eq!(out.lines().count(), SUITES.len());
        let (code, out, _) = call(&["laws", "--json", "--suite", "oracle", "--bounds", "type_depth=1,ctxt_len=1,term_depth=2"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v[0]["suite"], "oracle");
        assert!(v[0]["inconclusive"].is_u64());
    }
}
