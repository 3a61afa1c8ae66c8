//! The glued normalizer.
//!
//! A glued value pairs a syntactic representative `syn` (the codomain track)
//! with the canonical data of the evaluator (the domain track). At the base
//! type the canonical data is a normal term together with a derivation
//! `syn ~ nf`; at arrow types the closure returns, along with its result, a
//! step derivation `App (syn[s]) (arg.syn) ~ result.syn`. Evaluation threads
//! these derivations, and every run of [`nf4`] ends with a checkable
//! certificate `input ~ nf`.
//!
//! The domain track performs exactly the computation of [`crate::nbe`], so
//! `nf4(t).nf` and `nf3(t)` coincide. The codomain output (`witness`) is the
//! β-reduced but not η-expanded representative the evaluator reaches before
//! read-back; e.g. the witness of `one` is `one` itself and the witness of
//! `succ one` is `\f. \x. f (one f x)`-shaped with the outer redex fired.

use std::fmt;
use std::sync::Arc;

use serde_json::Value;

use crate::conversion::{check_deriv, deriv_refl, deriv_subst_unchecked, Deriv};
use crate::error::{Error, Result};
use crate::json::{ctxt_to_json, deriv_to_json, sorted_object, tm_to_json};
use crate::substitution::{subst_fast, subst_unchecked, Subst};
use crate::syntax::{alpha_eq, Ctxt, Idx, Tm, TmNode, Ty};

type GClosure = dyn Fn(&Subst, GVal) -> Result<(GVal, Deriv)> + Send + Sync;

#[derive(Clone)]
pub struct GFun {
    dom: Ty,
    apply: Arc<GClosure>,
}

#[derive(Clone)]
enum Canon {
    Base { nf: Tm, cert: Deriv },
    Fun(GFun),
}

/// A glued value at world `syn.ctxt()` and type `syn.ty()`.
#[derive(Clone)]
pub struct GVal {
    syn: Tm,
    canon: Canon,
}

impl GVal {
    pub fn syn(&self) -> &Tm {
        &self.syn
    }

    pub fn world(&self) -> &Ctxt {
        self.syn.ctxt()
    }

    pub fn ty(&self) -> &Ty {
        self.syn.ty()
    }

    /// The canonical term and its certificate, at the base type.
    pub fn base(&self) -> Option<(&Tm, &Deriv)> {
        match &self.canon {
            Canon::Base { nf, cert } => Some((nf, cert)),
            Canon::Fun(_) => None,
        }
    }

    /// Applies a function value at the world reached along `s`, returning the
    /// result and the step derivation `App (syn[s]) (arg.syn) ~ result.syn`.
    pub fn apply(&self, s: &Subst, arg: GVal) -> Result<(GVal, Deriv)> {
        let Canon::Fun(f) = &self.canon else {
            return Err(Error::TypeMismatch(format!("applying a glued value of type {}", self.ty())));
        };
        if s.tgt() != self.world() {
            return Err(Error::CtxtMismatch(format!(
                "world map into {} applied to a value at {}",
                s.tgt(),
                self.world()
            )));
        }
        if arg.world() != s.src() || *arg.ty() != f.dom {
            return Err(Error::TypeMismatch(format!(
                "argument {} at {} for a function expecting {} at {}",
                arg.ty(),
                arg.world(),
                f.dom,
                s.src()
            )));
        }
        (f.apply)(s, arg)
    }

    fn apply_unchecked(&self, s: &Subst, arg: GVal) -> Result<(GVal, Deriv)> {
        match &self.canon {
            Canon::Fun(f) => (f.apply)(s, arg),
            Canon::Base { .. } => unreachable!("well-typed function evaluates to a closure"),
        }
    }
}

impl fmt::Debug for GVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.canon {
            Canon::Base { nf, .. } => write!(f, "GVal({} ~> {nf})", self.syn),
            Canon::Fun(_) => write!(f, "GVal({} ~> <closure>)", self.syn),
        }
    }
}

/// One glued value per entry of `tgt`, all at `world`.
#[derive(Clone, Debug)]
pub struct GEnv {
    world: Ctxt,
    tgt: Ctxt,
    values: Vec<GVal>,
}

impl GEnv {
    pub fn new(world: Ctxt, tgt: Ctxt, values: Vec<GVal>) -> Result<GEnv> {
        let tys = tgt.types();
        if tys.len() != values.len() {
            return Err(Error::CtxtMismatch(format!(
                "environment for {tgt} needs {} values, got {}",
                tys.len(),
                values.len()
            )));
        }
        for (k, (ty, v)) in tys.iter().zip(&values).enumerate() {
            if *v.world() != world || v.ty() != ty {
                return Err(Error::TypeMismatch(format!("environment entry {k} does not match {ty} at {world}")));
            }
        }
        Ok(GEnv { world, tgt, values })
    }

    pub fn lookup(&self, depth: usize) -> &GVal {
        &self.values[self.values.len() - 1 - depth]
    }

    /// The codomain track of the environment, as a substitution.
    pub fn syn_subst(&self) -> Subst {
        Subst::from_parts_unchecked(
            self.world.clone(),
            self.tgt.clone(),
            self.values.iter().map(|v| v.syn.clone()).collect(),
        )
    }

    fn restrict(&self, s: &Subst) -> GEnv {
        GEnv {
            world: s.src().clone(),
            tgt: self.tgt.clone(),
            values: self.values.iter().map(|v| grestrict_unchecked(v, s)).collect(),
        }
    }

    fn push(mut self, v: GVal) -> GEnv {
        self.tgt = self.tgt.snoc(v.ty().clone());
        self.values.push(v);
        self
    }
}

/// Moves a glued value along `s : Δ →sub Γ`; both tracks substitute in
/// lockstep and the base certificate is transported along `s`.
pub fn grestrict(v: &GVal, s: &Subst) -> Result<GVal> {
    if s.tgt() != v.world() {
        return Err(Error::CtxtMismatch(format!(
            "cannot restrict a value at {} along a map into {}",
            v.world(),
            s.tgt()
        )));
    }
    Ok(grestrict_unchecked(v, s))
}

fn grestrict_unchecked(v: &GVal, s: &Subst) -> GVal {
    if s.is_identity() {
        return v.clone();
    }
    let syn = subst_unchecked(&v.syn, s);
    let canon = match &v.canon {
        Canon::Base { nf, cert } => Canon::Base {
            nf: subst_unchecked(nf, s),
            cert: deriv_subst_unchecked(cert, s),
        },
        Canon::Fun(f) => {
            let inner = f.apply.clone();
            let s0 = s.clone();
            Canon::Fun(GFun {
                dom: f.dom.clone(),
                apply: Arc::new(move |s1: &Subst, a: GVal| inner(&s0.compose(s1)?, a)),
            })
        }
    };
    GVal { syn, canon }
}

/// Reflection: `syn = t`, canonical data by reflexivity.
pub fn greflect(t: &Tm) -> GVal {
    let canon = match t.ty() {
        Ty::Iota => Canon::Base {
            nf: t.clone(),
            cert: deriv_refl(t),
        },
        Ty::Arr(dom, _) => {
            let t0 = t.clone();
            Canon::Fun(GFun {
                dom: (**dom).clone(),
                apply: Arc::new(move |s: &Subst, a: GVal| {
                    let (arg_nf, arg_cert) = greify(&a)?;
                    let head = subst_fast(&t0, s);
                    let step = Deriv::app(deriv_refl(&head), arg_cert);
                    Ok((greflect(&Tm::app(head, arg_nf)?), step))
                }),
            })
        }
    };
    GVal { syn: t.clone(), canon }
}

/// Read-back: the canonical term and a derivation `v.syn ~ nf`.
pub fn greify(v: &GVal) -> Result<(Tm, Deriv)> {
    match &v.canon {
        Canon::Base { nf, cert } => Ok((nf.clone(), cert.clone())),
        Canon::Fun(f) => {
            let world = v.world();
            let wk = Subst::wk(world, f.dom.clone());
            let x = greflect(&Tm::var(Idx::zero(world, f.dom.clone())));
            let (r, step) = v.apply_unchecked(&wk, x)?;
            let (body, c) = greify(&r)?;
            let cert = Deriv::trans(
                Deriv::eta(v.syn.clone(), f.dom.clone()),
                Deriv::abs(Deriv::trans(step, c)),
            );
            Ok((Tm::abs(body)?, cert))
        }
    }
}

/// Evaluates `t : Δ ⊢ T` in a glued environment for `Δ`, returning the value
/// and a derivation `t[e.syn] ~ value.syn`.
pub fn geval(t: &Tm, e: &GEnv) -> Result<(GVal, Deriv)> {
    if *t.ctxt() != e.tgt {
        return Err(Error::CtxtMismatch(format!(
            "evaluating a term over {} in an environment for {}",
            t.ctxt(),
            e.tgt
        )));
    }
    geval_unchecked(t, e)
}

fn geval_unchecked(t: &Tm, e: &GEnv) -> Result<(GVal, Deriv)> {
    match t.node() {
        TmNode::Var(i) => {
            let v = e.lookup(i.depth()).clone();
            let d = deriv_refl(&v.syn);
            Ok((v, d))
        }
        TmNode::App(f, a) => {
            let (fv, fc) = geval_unchecked(f, e)?;
            let (av, ac) = geval_unchecked(a, e)?;
            let (r, step) = fv.apply_unchecked(&Subst::id(&e.world), av)?;
            Ok((r, Deriv::trans(Deriv::app(fc, ac), step)))
        }
        TmNode::Abs(b) => {
            let syn = subst_unchecked(t, &e.syn_subst());
            let dom = t.ty().as_arr().expect("abstraction has arrow type").0.clone();
            let body = b.clone();
            let env = e.clone();
            let syn0 = syn.clone();
            let apply = move |s: &Subst, a: GVal| -> Result<(GVal, Deriv)> {
                let TmNode::Abs(redex_body) = subst_fast(&syn0, s).node().clone() else {
                    unreachable!("substitution preserves abstractions")
                };
                let beta = Deriv::beta(redex_body, a.syn.clone());
                let (r, bc) = geval_unchecked(&body, &env.restrict(s).push(a))?;
                Ok((r, Deriv::trans(beta, bc)))
            };
            let cert = deriv_refl(&syn);
            Ok((
                GVal {
                    syn,
                    canon: Canon::Fun(GFun {
                        dom,
                        apply: Arc::new(apply),
                    }),
                },
                cert,
            ))
        }
    }
}

/// The environment reflecting every variable of `g`.
pub fn greflect_env(g: &Ctxt) -> GEnv {
    GEnv {
        world: g.clone(),
        tgt: g.clone(),
        values: Subst::id(g).entries().iter().map(greflect).collect(),
    }
}

/// The outcome of the glued normalizer on one term.
#[derive(Clone, Debug)]
pub struct NfResult {
    pub input: Tm,
    /// Canonical normal form (domain track).
    pub nf: Tm,
    /// Syntactic representative reached by evaluation (codomain track).
    pub witness: Tm,
    /// `input ~ witness`
    pub cert_in_wit: Deriv,
    /// `witness ~ nf`
    pub cert_wit_nf: Deriv,
    /// `input ~ nf`, the composite of the two above.
    pub cert: Deriv,
}

impl NfResult {
    pub fn to_json(&self) -> Value {
        sorted_object([
            ("ctxt", ctxt_to_json(self.input.ctxt())),
            ("input", tm_to_json(&self.input)),
            ("nf", tm_to_json(&self.nf)),
            ("witness", tm_to_json(&self.witness)),
            ("cert", deriv_to_json(&self.cert)),
            ("cert_in_wit", deriv_to_json(&self.cert_in_wit)),
            ("cert_wit_nf", deriv_to_json(&self.cert_wit_nf)),
        ])
    }

    pub fn from_json(v: &Value) -> Result<NfResult> {
        use crate::json::{ctxt_from_json, decode_field, deriv_from_json, tm_from_json};
        let obj = v.as_object().ok_or_else(|| Error::Json {
            path: "$".into(),
            reason: "normalization result must be an object".into(),
        })?;
        let ctxt = decode_field(obj, "ctxt", ctxt_from_json)?;
        let tm = |k: &str| decode_field(obj, k, |v| tm_from_json(&ctxt, v));
        let dv = |k: &str| decode_field(obj, k, |v| deriv_from_json(&ctxt, v));
        Ok(NfResult {
            input: tm("input")?,
            nf: tm("nf")?,
            witness: tm("witness")?,
            cert: dv("cert")?,
            cert_in_wit: dv("cert_in_wit")?,
            cert_wit_nf: dv("cert_wit_nf")?,
        })
    }

    /// Checks all three derivations against the recorded endpoints.
    pub fn verify(&self) -> Result<()> {
        let expect = |name: &str, d: &Deriv, lhs: &Tm, rhs: &Tm| -> Result<()> {
            let (l, r) = check_deriv(d).map_err(|e| match e {
                Error::BadNode { path, reason } => Error::BadNode {
                    path: path.replacen('$', &format!("$/{name}"), 1),
                    reason,
                },
                other => other,
            })?;
            if !alpha_eq(&l, lhs) || !alpha_eq(&r, rhs) {
                return Err(Error::BadNode {
                    path: format!("$/{name}"),
                    reason: format!("derivation relates {l} and {r}, not the recorded endpoints"),
                });
            }
            Ok(())
        };
        expect("cert_in_wit", &self.cert_in_wit, &self.input, &self.witness)?;
        expect("cert_wit_nf", &self.cert_wit_nf, &self.witness, &self.nf)?;
        expect("cert", &self.cert, &self.input, &self.nf)
    }
}

/// Runs the glued normalizer without validating the certificates.
pub fn nf4_unverified(t: &Tm) -> Result<NfResult> {
    let (val, cert_in_wit) = geval_unchecked(t, &greflect_env(t.ctxt()))?;
    let (nf, cert_wit_nf) = greify(&val)?;
    Ok(NfResult {
        input: t.clone(),
        witness: val.syn.clone(),
        cert: Deriv::trans(cert_in_wit.clone(), cert_wit_nf.clone()),
        nf,
        cert_in_wit,
        cert_wit_nf,
    })
}

/// Normalizes `t` and validates the emitted certificates.
pub fn nf4(t: &Tm) -> Result<NfResult> {
    let res = nf4_unverified(t)?;
    let fail = |what: &str, detail: String| Error::InvalidCert(format!("{what}: {detail}"));
    let (a, w) = check_deriv(&res.cert_in_wit).map_err(|e| fail("input ~ witness", e.to_string()))?;
    if !alpha_eq(&a, t) || !alpha_eq(&w, &res.witness) {
        return Err(fail("input ~ witness", "endpoints differ from the run".into()));
    }
    let (w2, n) = check_deriv(&res.cert_wit_nf).map_err(|e| fail("witness ~ nf", e.to_string()))?;
    if !alpha_eq(&w2, &res.witness) || !alpha_eq(&n, &res.nf) {
        return Err(fail("witness ~ nf", "endpoints differ from the run".into()));
    }
    // The composite is a single Trans node over the two checked halves, whose
    // middle endpoints were both just compared with the witness.
    Ok(res)
}

/// Entrywise [`nf4`].
pub fn nf4_subst(s: &Subst) -> Result<Vec<NfResult>> {
    s.entries().iter().map(nf4).collect()
}

/// Decides βη-convertibility by comparing normal forms.
pub fn decide_conv(t: &Tm, u: &Tm) -> Result<bool> {
    if t.ctxt() != u.ctxt() || t.ty() != u.ty() {
        return Err(Error::TypeMismatch(format!(
            "comparing {} ⊢ {} with {} ⊢ {}",
            t.ctxt(),
            t.ty(),
            u.ctxt(),
            u.ty()
        )));
    }
    Ok(alpha_eq(&nf4(t)?.nf, &nf4(u)?.nf))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::church;
    use crate::conversion::DerivNode;
    use crate::nbe::nf3;
    use crate::renaming::shift;

    #[test]
    fn base_reflection_is_reflexive() {
        let g = Ctxt::from_types([Ty::Iota]);
        let x = Tm::var_at(&g, 0).unwrap();
        let v = greflect(&x);
        let (nf, cert) = v.base().unwrap();
        assert!(nf.ptr_eq(&x));
        assert!(matches!(cert.node(), DerivNode::Var(_)));
    }

    #[test]
    fn reify_of_reflected_variable() {
        let g = Ctxt::from_types([church::endo()]);
        let v = Tm::var_at(&g, 0).unwrap();
        let (nf, cert) = greify(&greflect(&v)).unwrap();
        let g1 = g.snoc(Ty::Iota);
        let expected = Tm::abs(Tm::app(Tm::var_at(&g1, 1).unwrap(), Tm::var_at(&g1, 0).unwrap()).unwrap()).unwrap();
        assert_eq!(nf, expected);
        let (l, r) = check_deriv(&cert).unwrap();
        assert_eq!(l, v);
        assert_eq!(r, expected);
    }

    #[test]
    fn church_examples() {
        let r = nf4(&church::one()).unwrap();
        assert_eq!(r.nf, church::numeral(1));
        assert_eq!(r.witness, church::one());
        r.verify().unwrap();
        let two = Tm::app(church::succ(), church::one()).unwrap();
        let r = nf4(&two).unwrap();
        assert_eq!(r.nf, church::numeral(2));
        r.verify().unwrap();
        assert!(!alpha_eq(&nf4(&church::one()).unwrap().nf, &church::one()));
    }

    #[test]
    fn one_beta_node_for_identity_redex() {
        let g = Ctxt::from_types([Ty::Iota]);
        let id = Tm::abs(Tm::var_at(&g.snoc(Ty::Iota), 0).unwrap()).unwrap();
        let u = Tm::var_at(&g, 0).unwrap();
        let t = Tm::app(id, u.clone()).unwrap();
        let (val, cert) = geval(&t, &greflect_env(&g)).unwrap();
        assert_eq!(cert.beta_count(), 1);
        assert_eq!(*val.syn(), u);
        let (l, r) = check_deriv(&cert).unwrap();
        assert_eq!(l, t);
        assert_eq!(r, u);
    }

    #[test]
    fn agrees_with_nf3_on_fixtures() {
        for t in [church::one(), church::succ(), church::succ_chain(3), church::numeral(2)] {
            assert_eq!(nf4(&t).unwrap().nf, nf3(&t).unwrap());
        }
    }

    #[test]
    fn grestrict_tracks_move_together() {
        let g = Ctxt::from_types([church::endo(), Ty::Iota]);
        let t = Tm::app(Tm::var_at(&g, 1).unwrap(), Tm::var_at(&g, 0).unwrap()).unwrap();
        let (v, _) = geval(&t, &greflect_env(&g)).unwrap();
        let s = Subst::wk(&g, Ty::Iota);
        let w = grestrict(&v, &s).unwrap();
        assert_eq!(*w.syn(), shift(v.syn(), Ty::Iota));
        let (nf, cert) = w.base().unwrap();
        assert_eq!(*nf, shift(v.base().unwrap().0, Ty::Iota));
        let (l, r) = check_deriv(cert).unwrap();
        assert_eq!(l, *w.syn());
        assert_eq!(r, *nf);
        assert!(grestrict(&v, &Subst::id(&Ctxt::nil())).is_err());
        assert_eq!(*grestrict(&v, &Subst::id(&g)).unwrap().syn(), *v.syn());
    }

    #[test]
    fn decide_conv_examples() {
        assert!(decide_conv(&church::one(), &church::numeral(1)).unwrap());
        let two = Tm::app(church::succ(), church::one()).unwrap();
        assert!(decide_conv(&two, &church::numeral(2)).unwrap());
        assert!(!decide_conv(&two, &church::numeral(1)).unwrap());
        assert!(decide_conv(&two, &church::succ()).is_err());

        let g = Ctxt::nil().snoc(Ty::Iota);
        let id = Tm::abs(Tm::var_at(&g, 0).unwrap()).unwrap();
        let id_redex = Tm::abs(Tm::app(shift(&id, Ty::Iota), Tm::var_at(&g, 0).unwrap()).unwrap()).unwrap();
        assert!(decide_conv(&id, &id_redex).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let r = nf4(&Tm::app(church::succ(), church::one()).unwrap()).unwrap();
        let s = r.to_json().to_string();
        let back = NfResult::from_json(&serde_json::from_str(&s).unwrap()).unwrap();
        back.verify().unwrap();
        assert_eq!(back.to_json().to_string(), s);
    }
}
