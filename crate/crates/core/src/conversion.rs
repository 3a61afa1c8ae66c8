//! βη-conversion derivations, used as normalization certificates.
//!
//! A [`Deriv`] stores only the data of each rule; [`check_deriv`] recomputes
//! both endpoints bottom-up and rejects the first node whose side condition
//! fails. Reflexivity is not a rule: [`deriv_refl`] derives it by congruence.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::renaming::shift;
use crate::substitution::{beta_subst, subst_unchecked, Subst};
use crate::syntax::{alpha_eq, Ctxt, Idx, Tm, TmNode, Ty};

#[derive(Clone)]
pub enum DerivNode {
    /// `Var i ~ Var i`
    Var(Idx),
    /// `App t₁ t₂ ~ App t₁′ t₂′`
    App(Deriv, Deriv),
    /// `Abs t ~ Abs t′`
    Abs(Deriv),
    /// `App (Abs body) arg ~ body[arg/0]`
    Beta { body: Tm, arg: Tm },
    /// `t ~ Abs (App (shift t) (Var 0))`
    Eta { term: Tm, dom: Ty },
    Symm(Deriv),
    /// Chains two derivations whose middle endpoints are α-equal.
    Trans(Deriv, Deriv),
}

/// A βη-conversion derivation tree.
#[derive(Clone)]
pub struct Deriv(Arc<DerivNode>);

impl Deriv {
    pub fn var(i: Idx) -> Deriv {
        Deriv(Arc::new(DerivNode::Var(i)))
    }

    pub fn app(fun: Deriv, arg: Deriv) -> Deriv {
        Deriv(Arc::new(DerivNode::App(fun, arg)))
    }

    pub fn abs(body: Deriv) -> Deriv {
        Deriv(Arc::new(DerivNode::Abs(body)))
    }

    pub fn beta(body: Tm, arg: Tm) -> Deriv {
        Deriv(Arc::new(DerivNode::Beta { body, arg }))
    }

    pub fn eta(term: Tm, dom: Ty) -> Deriv {
        Deriv(Arc::new(DerivNode::Eta { term, dom }))
    }

    pub fn symm(d: Deriv) -> Deriv {
        Deriv(Arc::new(DerivNode::Symm(d)))
    }

    pub fn trans(first: Deriv, second: Deriv) -> Deriv {
        Deriv(Arc::new(DerivNode::Trans(first, second)))
    }

    pub fn node(&self) -> &DerivNode {
        &self.0
    }

    /// The context both endpoints live in, read off without checking.
    pub fn ctxt(&self) -> Ctxt {
        match self.node() {
            DerivNode::Var(i) => i.ctxt().clone(),
            DerivNode::App(d, _) | DerivNode::Symm(d) | DerivNode::Trans(d, _) => d.ctxt(),
            DerivNode::Abs(d) => {
                let inner = d.ctxt();
                inner.split_last().map(|(g, _)| g.clone()).unwrap_or_default()
            }
            DerivNode::Beta { arg, .. } => arg.ctxt().clone(),
            DerivNode::Eta { term, .. } => term.ctxt().clone(),
        }
    }

    /// Number of rule nodes.
    pub fn size(&self) -> usize {
        match self.node() {
            DerivNode::Var(_) | DerivNode::Beta { .. } | DerivNode::Eta { .. } => 1,
            DerivNode::Abs(d) | DerivNode::Symm(d) => 1 + d.size(),
            DerivNode::App(a, b) | DerivNode::Trans(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Number of `Beta` nodes.
    pub fn beta_count(&self) -> usize {
        match self.node() {
            DerivNode::Beta { .. } => 1,
            DerivNode::Var(_) | DerivNode::Eta { .. } => 0,
            DerivNode::Abs(d) | DerivNode::Symm(d) => d.beta_count(),
            DerivNode::App(a, b) | DerivNode::Trans(a, b) => a.beta_count() + b.beta_count(),
        }
    }
}

impl fmt::Debug for Deriv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node() {
            DerivNode::Var(i) => write!(f, "Var(#{})", i.depth()),
            DerivNode::App(a, b) => write!(f, "App({a:?}, {b:?})"),
            DerivNode::Abs(d) => write!(f, "Abs({d:?})"),
            DerivNode::Beta { body, arg } => write!(f, "Beta({body}, {arg})"),
            DerivNode::Eta { term, dom } => write!(f, "Eta({term}, {dom})"),
            DerivNode::Symm(d) => write!(f, "Symm({d:?})"),
            DerivNode::Trans(a, b) => write!(f, "Trans({a:?}, {b:?})"),
        }
    }
}

#[derive(Clone, Default)]
struct Path(Vec<&'static str>);

impl Path {
    fn push(&self, seg: &'static str) -> Path {
        let mut p = self.0.clone();
        p.push(seg);
        Path(p)
    }

    fn bad(&self, reason: impl Into<String>) -> Error {
        Error::BadNode {
            path: self.to_string(),
            reason: reason.into(),
        }
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "$")?;
        for seg in &self.0 {
            write!(f, "/{seg}")?;
        }
        Ok(())
    }
}

/// Validates `d` and returns its endpoints `(lhs, rhs)`.
pub fn check_deriv(d: &Deriv) -> Result<(Tm, Tm)> {
    check_at(d, &Path::default())
}

fn check_at(d: &Deriv, path: &Path) -> Result<(Tm, Tm)> {
    match d.node() {
        DerivNode::Var(i) => {
            // An `Idx` can only be built well scoped, so this cannot fail.
            let v = Tm::var(i.clone());
            Ok((v.clone(), v))
        }
        DerivNode::App(df, da) => {
            let (f, f2) = check_at(df, &path.push("app.fun"))?;
            let (a, a2) = check_at(da, &path.push("app.arg"))?;
            let lhs = Tm::app(f, a).map_err(|e| path.bad(e.to_string()))?;
            let rhs = Tm::app(f2, a2).map_err(|e| path.bad(e.to_string()))?;
            Ok((lhs, rhs))
        }
        DerivNode::Abs(db) => {
            let (b, b2) = check_at(db, &path.push("abs"))?;
            let lhs = Tm::abs(b).map_err(|e| path.bad(e.to_string()))?;
            let rhs = Tm::abs(b2).map_err(|e| path.bad(e.to_string()))?;
            Ok((lhs, rhs))
        }
        DerivNode::Beta { body, arg } => {
            let redex = Tm::abs(body.clone())
                .and_then(|f| Tm::app(f, arg.clone()))
                .map_err(|e| path.bad(format!("beta redex is ill-formed: {e}")))?;
            let reduct = beta_subst(body, arg).map_err(|e| path.bad(e.to_string()))?;
            Ok((redex, reduct))
        }
        DerivNode::Eta { term, dom } => match term.ty().as_arr() {
            Some((d0, _)) if d0 == dom => {
                let g2 = term.ctxt().snoc(dom.clone());
                let v0 = Tm::var(Idx::zero(term.ctxt(), dom.clone()));
                let body = Tm::app(shift(term, dom.clone()), v0).map_err(|e| path.bad(e.to_string()))?;
                debug_assert!(*body.ctxt() == g2);
                let expanded = Tm::abs(body).map_err(|e| path.bad(e.to_string()))?;
                Ok((term.clone(), expanded))
            }
            _ => Err(path.bad(format!(
                "eta-expansion of a term of type {} at domain {dom}",
                term.ty()
            ))),
        },
        DerivNode::Symm(inner) => {
            let (a, b) = check_at(inner, &path.push("symm"))?;
            Ok((b, a))
        }
        DerivNode::Trans(d1, d2) => {
            let (a, b) = check_at(d1, &path.push("trans.left"))?;
            let (b2, c) = check_at(d2, &path.push("trans.right"))?;
            if !alpha_eq(&b, &b2) {
                return Err(path.bad(format!("middle endpoints differ: {b} vs {b2}")));
            }
            Ok((a, c))
        }
    }
}

/// The reflexivity derivation `t ~ t`, by congruence on the term structure.
pub fn deriv_refl(t: &Tm) -> Deriv {
    match t.node() {
        TmNode::Var(i) => Deriv::var(i.clone()),
        TmNode::App(f, a) => Deriv::app(deriv_refl(f), deriv_refl(a)),
        TmNode::Abs(b) => Deriv::abs(deriv_refl(b)),
    }
}

/// Transports `d : a ~ b` over `Δ` along `s : Γ →sub Δ`, yielding a
/// derivation of `a[s] ~ b[s]` over `Γ`.
pub fn deriv_subst(d: &Deriv, s: &Subst) -> Result<Deriv> {
    if d.ctxt() != *s.tgt() {
        return Err(Error::CtxtMismatch(format!(
            "derivation over {} cannot be substituted along a map into {}",
            d.ctxt(),
            s.tgt()
        )));
    }
    Ok(deriv_subst_unchecked(d, s))
}

pub(crate) fn deriv_subst_unchecked(d: &Deriv, s: &Subst) -> Deriv {
    match d.node() {
        DerivNode::Var(i) => deriv_refl(s.lookup(i.depth())),
        DerivNode::App(a, b) => Deriv::app(deriv_subst_unchecked(a, s), deriv_subst_unchecked(b, s)),
        DerivNode::Abs(b) => {
            let inner = b.ctxt();
            let dom = inner.split_last().expect("abstraction body has a binder").1.clone();
            Deriv::abs(deriv_subst_unchecked(b, &s.lift(dom)))
        }
        DerivNode::Beta { body, arg } => Deriv::beta(
            subst_unchecked(body, &s.lift(arg.ty().clone())),
            subst_unchecked(arg, s),
        ),
        DerivNode::Eta { term, dom } => Deriv::eta(subst_unchecked(term, s), dom.clone()),
        DerivNode::Symm(a) => Deriv::symm(deriv_subst_unchecked(a, s)),
        DerivNode::Trans(a, b) => Deriv::trans(deriv_subst_unchecked(a, s), deriv_subst_unchecked(b, s)),
    }
}

/// Pointwise derivations between two substitutions `src →sub tgt`.
#[derive(Clone, Debug)]
pub struct SubstDeriv {
    pub src: Ctxt,
    pub tgt: Ctxt,
    /// Aligned with `tgt.types()`.
    pub entries: Vec<Deriv>,
}

impl SubstDeriv {
    pub fn refl(s: &Subst) -> SubstDeriv {
        SubstDeriv {
            src: s.src().clone(),
            tgt: s.tgt().clone(),
            entries: s.entries().iter().map(deriv_refl).collect(),
        }
    }
}

/// Validates every entry and assembles the two endpoint substitutions.
pub fn check_subst_deriv(d: &SubstDeriv) -> Result<(Subst, Subst)> {
    let tys = d.tgt.types();
    if tys.len() != d.entries.len() {
        return Err(Error::BadNode {
            path: "$".into(),
            reason: format!(
                "{} entry derivations for a target context of length {}",
                d.entries.len(),
                tys.len()
            ),
        });
    }
    let mut lhs = Vec::with_capacity(tys.len());
    let mut rhs = Vec::with_capacity(tys.len());
    for (k, (ty, e)) in tys.iter().zip(&d.entries).enumerate() {
        let at = |reason: String| Error::BadNode {
            path: format!("$/entry[{k}]"),
            reason,
        };
        let (a, b) = check_deriv(e).map_err(|err| match err {
            Error::BadNode { path, reason } => Error::BadNode {
                path: path.replacen('$', &format!("$/entry[{k}]"), 1),
                reason,
            },
            other => other,
        })?;
        if *a.ctxt() != d.src {
            return Err(at(format!("entry lives over {}, expected {}", a.ctxt(), d.src)));
        }
        if a.ty() != ty {
            return Err(at(format!("entry has type {}, expected {ty}", a.ty())));
        }
        lhs.push(a);
        rhs.push(b);
    }
    Ok((
        Subst::new(d.src.clone(), d.tgt.clone(), lhs)?,
        Subst::new(d.src.clone(), d.tgt.clone(), rhs)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ii() -> Ty {
        Ty::arr(Ty::Iota, Ty::Iota)
    }

    fn one() -> Tm {
        Tm::abs(Tm::var_at(&Ctxt::nil().snoc(ii()), 0).unwrap()).unwrap()
    }

    #[test]
    fn identity_redex() {
        let g = Ctxt::from_types([Ty::Iota]);
        let u = Tm::var_at(&g, 0).unwrap();
        let body = Tm::var_at(&g.snoc(Ty::Iota), 0).unwrap();
        let (l, r) = check_deriv(&Deriv::beta(body.clone(), u.clone())).unwrap();
        assert_eq!(l, Tm::app(Tm::abs(body).unwrap(), u.clone()).unwrap());
        assert_eq!(r, u);
    }

    #[test]
    fn eta_of_one() {
        let (l, r) = check_deriv(&Deriv::eta(one(), ii())).unwrap();
        assert_eq!(l, one());
        let g = Ctxt::nil().snoc(ii());
        let expected = Tm::abs(Tm::app(shift(&one(), ii()), Tm::var_at(&g, 0).unwrap()).unwrap()).unwrap();
        assert_eq!(r, expected);
    }

    #[test]
    fn eta_at_wrong_domain_is_rejected() {
        let err = check_deriv(&Deriv::eta(one(), Ty::Iota)).unwrap_err();
        assert!(matches!(err, Error::BadNode { ref path, .. } if path == "$"));
    }

    #[test]
    fn mismatched_middle_is_rejected() {
        let g = Ctxt::from_types([ii(), Ty::Iota]);
        let u = Tm::var_at(&g, 1).unwrap();
        let body = Tm::var_at(&g.snoc(ii()), 0).unwrap();
        let v = Tm::abs(Tm::var_at(&g.snoc(Ty::Iota), 0).unwrap()).unwrap();
        let d = Deriv::trans(Deriv::beta(body, u), Deriv::eta(v, Ty::Iota));
        let err = check_deriv(&d).unwrap_err();
        match err {
            Error::BadNode { path, reason } => {
                assert_eq!(path, "$");
                assert!(reason.contains("middle"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bad_node_path_points_inside() {
        let g = Ctxt::from_types([ii(), Ty::Iota]);
        let f = Tm::var_at(&g, 1).unwrap();
        let bad = Deriv::eta(Tm::var_at(&g, 0).unwrap(), Ty::Iota);
        let d = Deriv::symm(Deriv::app(deriv_refl(&f), bad));
        match check_deriv(&d).unwrap_err() {
            Error::BadNode { path, .. } => assert_eq!(path, "$/symm/app.arg"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn refl_shapes() {
        let g = Ctxt::nil().snoc(Ty::Iota);
        let v = Tm::var_at(&g, 0).unwrap();
        assert!(matches!(deriv_refl(&v).node(), DerivNode::Var(i) if i.depth() == 0));
        let d = deriv_refl(&one());
        match d.node() {
            DerivNode::Abs(inner) => assert!(matches!(inner.node(), DerivNode::Var(_))),
            _ => panic!("expected Abs"),
        }
        let (l, r) = check_deriv(&d).unwrap();
        assert_eq!(l, one());
        assert_eq!(r, one());
    }

    #[test]
    fn symm_swaps() {
        let d = Deriv::symm(Deriv::eta(one(), ii()));
        let (l, r) = check_deriv(&d).unwrap();
        assert_eq!(r, one());
        assert_ne!(l, one());
    }

    #[test]
    fn subst_deriv_cases() {
        let g = Ctxt::from_types([Ty::Iota]);
        let empty = SubstDeriv {
            src: g.clone(),
            tgt: Ctxt::nil(),
            entries: vec![],
        };
        let (a, b) = check_subst_deriv(&empty).unwrap();
        assert!(a.is_empty() && b.is_empty());

        let u = Tm::var_at(&g, 0).unwrap();
        let body = Tm::var_at(&g.snoc(Ty::Iota), 0).unwrap();
        let single = SubstDeriv {
            src: g.clone(),
            tgt: Ctxt::from_types([Ty::Iota]),
            entries: vec![Deriv::beta(body.clone(), u.clone())],
        };
        let (a, b) = check_subst_deriv(&single).unwrap();
        assert_eq!(a.entries()[0], Tm::app(Tm::abs(body.clone()).unwrap(), u.clone()).unwrap());
        assert_eq!(b.entries()[0], u);

        let mismatched = SubstDeriv {
            src: g.clone(),
            tgt: Ctxt::from_types([Ty::Iota, Ty::Iota]),
            entries: vec![Deriv::beta(body, u)],
        };
        assert!(matches!(check_subst_deriv(&mismatched), Err(Error::BadNode { .. })));
    }

    #[test]
    fn subst_deriv_reports_entry() {
        let g = Ctxt::from_types([Ty::Iota]);
        let bad = SubstDeriv {
            src: g.clone(),
            tgt: Ctxt::from_types([Ty::Iota]),
            entries: vec![Deriv::eta(Tm::var_at(&g, 0).unwrap(), Ty::Iota)],
        };
        match check_subst_deriv(&bad).unwrap_err() {
            Error::BadNode { path, .. } => assert_eq!(path, "$/entry[0]"),
            other => panic!("unexpected {other:?}"),
        }
    }
}
