//! Named surface syntax: `o` is the base type, `->` associates to the right,
//! application is left-associative juxtaposition and `\x:T. body` binds `x`.

use std::fmt;

use catnf::{Ctxt, Idx, Tm, TmNode, Ty};

use crate::error::CliError;

/// Named-variable terms as written by users.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SurfaceTerm {
    Var { name: String, line: usize, col: usize },
    App(Box<SurfaceTerm>, Box<SurfaceTerm>),
    Lam(String, Ty, Box<SurfaceTerm>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Lambda,
    Colon,
    Dot,
    Arrow,
    LParen,
    RParen,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Lambda => f.write_str("`\\`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

struct Lexer {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

impl Lexer {
    fn new(src: &str) -> Result<Lexer, CliError> {
        let mut toks = Vec::new();
        let (mut line, mut col) = (1, 1);
        let mut chars = src.chars().peekable();
        while let Some(&c) = chars.peek() {
            let (l, k) = (line, col);
            let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
                let c = chars.next();
                if c == Some('\n') {
                    line += 1;
                    col = 1;
                } else {
                    col += 1;
                }
                c
            };
            let tok = match c {
                c if c.is_whitespace() => {
                    bump(&mut chars);
                    continue;
                }
                '\\' | 'λ' => Tok::Lambda,
                ':' => Tok::Colon,
                '.' => Tok::Dot,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '-' => {
                    bump(&mut chars);
                    if chars.peek() != Some(&'>') {
                        return Err(CliError::Parse { line: l, col: k, msg: "expected `->`".into() });
                    }
                    Tok::Arrow
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let mut s = String::new();
                    while let Some(&c) = chars.peek() {
                        if c.is_ascii_alphanumeric() || c == '_' || c == '\'' {
                            s.push(c);
                            bump(&mut chars);
                        } else {
                            break;
                        }
                    }
                    toks.push((Tok::Ident(s), l, k));
                    continue;
                }
                other => {
                    return Err(CliError::Parse { line: l, col: k, msg: format!("unexpected character `{other}`") });
                }
            };
            bump(&mut chars);
            toks.push((tok, l, k));
        }
        toks.push((Tok::Eof, line, col));
        Ok(Lexer { toks, pos: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn here(&self) -> (usize, usize) {
        (self.toks[self.pos].1, self.toks[self.pos].2)
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> CliError {
        let (line, col) = self.here();
        CliError::Parse { line, col, msg: format!("expected {expected}, found {}", self.peek()) }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), CliError> {
        if *self.peek() == tok {
            self.next();
            Ok(())
        } else {
            Err(self.error(what))
        }
    }

    fn ty(&mut self) -> Result<Ty, CliError> {
        let dom = match self.next() {
            Tok::Ident(s) if s == "o" => Ty::Iota,
            Tok::LParen => {
                let t = self.ty()?;
                self.expect(Tok::RParen, "`)`")?;
                t
            }
            _ => {
                self.pos -= 1;
                return Err(self.error("a type"));
            }
        };
        if *self.peek() == Tok::Arrow {
            self.next();
            Ok(Ty::arr(dom, self.ty()?))
        } else {
            Ok(dom)
        }
    }

    fn term(&mut self) -> Result<SurfaceTerm, CliError> {
        let mut head: Option<SurfaceTerm> = None;
        loop {
            let arg = match self.peek() {
                Tok::Lambda => {
                    self.next();
                    let name = match self.next() {
                        Tok::Ident(s) => s,
                        _ => {
                            self.pos -= 1;
                            return Err(self.error("a binder name"));
                        }
                    };
                    self.expect(Tok::Colon, "`:`")?;
                    let ty = self.ty()?;
                    self.expect(Tok::Dot, "`.`")?;
                    let body = self.term()?;
                    let lam = SurfaceTerm::Lam(name, ty, Box::new(body));
                    return Ok(match head {
                        None => lam,
                        Some(h) => SurfaceTerm::App(Box::new(h), Box::new(lam)),
                    });
                }
                Tok::Ident(_) => {
                    let (line, col) = self.here();
                    let Tok::Ident(name) = self.next() else { unreachable!() };
                    SurfaceTerm::Var { name, line, col }
                }
                Tok::LParen => {
                    self.next();
                    let t = self.term()?;
                    self.expect(Tok::RParen, "`)`")?;
                    t
                }
                _ => break,
            };
            head = Some(match head {
                None => arg,
                Some(h) => SurfaceTerm::App(Box::new(h), Box::new(arg)),
            });
        }
        head.ok_or_else(|| self.error("a term"))
    }
}

/// Parses a type such as `(o->o)->o`.
pub fn parse_ty(src: &str) -> Result<Ty, CliError> {
    let mut lx = Lexer::new(src)?;
    let t = lx.ty()?;
    lx.expect(Tok::Eof, "end of input")?;
    Ok(t)
}

/// Parses a term into its named syntax tree.
pub fn parse_surface(src: &str) -> Result<SurfaceTerm, CliError> {
    let mut lx = Lexer::new(src)?;
    let t = lx.term()?;
    lx.expect(Tok::Eof, "end of input")?;
    Ok(t)
}

/// Parses and elaborates a term over the named context `ctx` (leftmost
/// entry outermost). The innermost binding of a name wins.
pub fn parse_term(src: &str, ctx: &[(String, Ty)]) -> Result<Tm, CliError> {
    let st = parse_surface(src)?;
    let g = Ctxt::from_types(ctx.iter().map(|(_, t)| t.clone()));
    let mut names: Vec<String> = ctx.iter().map(|(n, _)| n.clone()).collect();
    elaborate(&st, &g, &mut names)
}

fn elaborate(st: &SurfaceTerm, g: &Ctxt, names: &mut Vec<String>) -> Result<Tm, CliError> {
    match st {
        SurfaceTerm::Var { name, .. } => {
            let pos = names.iter().rposition(|n| n == name).ok_or_else(|| CliError::UnboundVariable(name.clone()))?;
            let depth = names.len() - 1 - pos;
            Ok(Tm::var(Idx::new(g, depth)?))
        }
        SurfaceTerm::App(f, a) => {
            let tf = elaborate(f, g, names)?;
            let ta = elaborate(a, g, names)?;
            let (ftext, atext) = (render(f), render(a));
            Tm::app(tf.clone(), ta.clone()).map_err(|_| {
                CliError::Type(format!(
                    "cannot apply `{ftext}` : {} to `{atext}` : {}",
                    tf.ty(),
                    ta.ty()
                ))
            })
        }
        SurfaceTerm::Lam(name, ty, body) => {
            names.push(name.clone());
            let b = elaborate(body, &g.snoc(ty.clone()), names);
            names.pop();
            Ok(Tm::abs(b?)?)
        }
    }
}

fn render(st: &SurfaceTerm) -> String {
    fn go(st: &SurfaceTerm, out: &mut String, arg: bool, head: bool) {
        match st {
            SurfaceTerm::Var { name, .. } => out.push_str(name),
            SurfaceTerm::App(f, a) => {
                if arg {
                    out.push('(');
                }
                go(f, out, false, true);
                out.push(' ');
                go(a, out, true, false);
                if arg {
                    out.push(')');
                }
            }
            SurfaceTerm::Lam(n, ty, b) => {
                let wrap = arg || head;
                if wrap {
                    out.push('(');
                }
                out.push_str(&format!("\\{n}:{ty}. "));
                go(b, out, false, false);
                if wrap {
                    out.push(')');
                }
            }
        }
    }
    let mut s = String::new();
    go(st, &mut s, false, false);
    s
}

/// Prints `t` with context variables named `x0, x1, …` from the left and
/// binders continuing the numbering by nesting depth.
pub fn print_term(t: &Tm) -> String {
    fn go(t: &Tm, out: &mut String, arg: bool, head: bool) {
        let level = t.ctxt().len();
        match t.node() {
            TmNode::Var(i) => out.push_str(&format!("x{}", level - 1 - i.depth())),
            TmNode::App(f, a) => {
                if arg {
                    out.push('(');
                }
                go(f, out, false, true);
                out.push(' ');
                go(a, out, true, false);
                if arg {
                    out.push(')');
                }
            }
            TmNode::Abs(b) => {
                let wrap = arg || head;
                if wrap {
                    out.push('(');
                }
                let dom = t.ty().as_arr().expect("abstraction has arrow type").0;
                out.push_str(&format!("\\x{level}:{dom}. "));
                go(b, out, false, false);
                if wrap {
                    out.push(')');
                }
            }
        }
    }
    let mut s = String::new();
    go(t, &mut s, false, false);
    s
}

/// The names [`print_term`] uses for a context.
pub fn default_names(g: &Ctxt) -> Vec<(String, Ty)> {
    g.types().into_iter().enumerate().map(|(k, t)| (format!("x{k}"), t)).collect()
}

/// Parses `name:TYPE`.
pub fn parse_var_decl(decl: &str) -> Result<(String, Ty), CliError> {
    let (name, ty) = decl
        .split_once(':')
        .ok_or_else(|| CliError::Usage(format!("variable declaration `{decl}` is not of the form name:TYPE")))?;
    let name = name.trim();
    let valid = name.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'');
    if !valid {
        return Err(CliError::Usage(format!("`{name}` is not a valid variable name")));
    }
    Ok((name.to_string(), parse_ty(ty)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use catnf::church;

    fn ii() -> Ty {
        Ty::arr(Ty::Iota, Ty::Iota)
    }

    #[test]
    fn types_associate_right() {
        assert_eq!(parse_ty("o->o->o").unwrap(), Ty::arr(Ty::Iota, ii()));
        assert_eq!(parse_ty("(o->o)->o").unwrap(), Ty::arr(ii(), Ty::Iota));
        assert!(matches!(parse_ty("o->"), Err(CliError::Parse { .. })));
    }

    #[test]
    fn church_one_parses() {
        assert_eq!(parse_term("\\f:o->o. f", &[]).unwrap(), church::one());
        assert_eq!(*parse_term("\\f:o->o. f", &[]).unwrap().ty(), Ty::arr(ii(), ii()));
    }

    #[test]
    fn context_variable() {
        let t = parse_term("x", &[("x".into(), Ty::Iota)]).unwrap();
        assert_eq!(t, Tm::var_at(&Ctxt::nil().snoc(Ty::Iota), 0).unwrap());
        assert_eq!(print_term(&t), "x0");
    }

    #[test]
    fn unbound_variable() {
        assert_eq!(parse_term("\\x:o. y", &[]), Err(CliError::UnboundVariable("y".into())));
    }

    #[test]
    fn ill_typed_application_names_the_culprit() {
        let err = parse_term("\\x:o. x x", &[]).unwrap_err();
        match err {
            CliError::Type(msg) => assert!(msg.contains("`x` : o to `x`"), "{msg}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn innermost_binding_wins() {
        let t = parse_term("\\x:o->o. \\x:o. x", &[]).unwrap();
        assert_eq!(print_term(&t), "\\x0:o->o. \\x1:o. x1");
    }

    #[test]
    fn printing_long_one() {
        assert_eq!(print_term(&church::numeral(1)), "\\x0:o->o. \\x1:o. x0 x1");
        assert_eq!(print_term(&church::numeral(2)), "\\x0:o->o. \\x1:o. x0 (x0 x1)");
    }

    #[test]
    fn printing_redexes_and_lambda_arguments() {
        let succ_one = Tm::app(church::succ(), church::one()).unwrap();
        let text = print_term(&succ_one);
        assert_eq!(
            text,
            "(\\x0:(o->o)->o->o. \\x1:o->o. \\x2:o. x1 (x0 x1 x2)) (\\x0:o->o. x0)"
        );
        assert_eq!(parse_term(&text, &[]).unwrap(), succ_one);
    }

    #[test]
    fn trailing_lambda_argument() {
        let g = [("f".to_string(), Ty::arr(ii(), Ty::Iota))];
        let t = parse_term("f \\y:o. y", &g).unwrap();
        assert_eq!(print_term(&t), "x0 (\\x1:o. x1)");
    }

    #[test]
    fn parse_errors_have_positions() {
        match parse_term("\\x:o.\n  (x", &[]) {
            Err(CliError::Parse { line, col, .. }) => assert_eq!((line, col), (2, 5)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn var_declarations() {
        assert_eq!(parse_var_decl("f:o->o").unwrap(), ("f".to_string(), ii()));
        assert!(parse_var_decl("f").is_err());
        assert!(parse_var_decl("1x:o").is_err());
    }
}
