//! Cartesian structure of the context categories (concatenation,
//! projections, pairing) and the Cartesian pre-exponential of contexts.
//!
//! Pre-abstraction ([`curry`]) and pre-evaluation ([`uncurry`]) are built
//! from the type-level maps [`abs1`] / [`ev1`] applied entrywise, iterating
//! over the exponent context Δ: `curry` peels Δ from its innermost entry
//! outwards, and `uncurry` consumes Δ from its outermost entry inwards. They
//! are not mutually inverse on the nose, only up to βη, and the certificate
//! builders here produce the pointwise derivations that witness this.

use crate::conversion::{deriv_subst_unchecked, Deriv, SubstDeriv};
use crate::error::{Error, Result};
use crate::renaming::{shift, Rnm};
use crate::substitution::Subst;
use crate::syntax::{Ctxt, Idx, Tm, TmNode, Ty};

/// `Γ ++ Δ`: the types of `d` appended after those of `g`.
pub fn ctxt_concat(g: &Ctxt, d: &Ctxt) -> Ctxt {
    d.types().into_iter().fold(g.clone(), |acc, t| acc.snoc(t))
}

/// Projection `Γ ++ Δ →ren Γ`.
pub fn proj1(g: &Ctxt, d: &Ctxt) -> Rnm {
    let gd = ctxt_concat(g, d);
    let n = g.len();
    let entries = (0..n)
        .map(|k| Idx::new(&gd, n - 1 - k + d.len()).expect("left block in range"))
        .collect();
    Rnm::new(gd, g.clone(), entries).expect("projection is well typed")
}

/// Projection `Γ ++ Δ →ren Δ`.
pub fn proj2(g: &Ctxt, d: &Ctxt) -> Rnm {
    let gd = ctxt_concat(g, d);
    let m = d.len();
    let entries = (0..m)
        .map(|k| Idx::new(&gd, m - 1 - k).expect("right block in range"))
        .collect();
    Rnm::new(gd, d.clone(), entries).expect("projection is well typed")
}

/// `⟨s₁, s₂⟩ : Γ →sub Θ₁ ++ Θ₂`.
pub fn pair(s1: &Subst, s2: &Subst) -> Result<Subst> {
    if s1.src() != s2.src() {
        return Err(Error::CtxtMismatch(format!(
            "pairing substitutions out of {} and {}",
            s1.src(),
            s2.src()
        )));
    }
    let mut entries = s1.entries().to_vec();
    entries.extend(s2.entries().iter().cloned());
    Subst::new(s1.src().clone(), ctxt_concat(s1.tgt(), s2.tgt()), entries)
}

/// `⟨r₁, r₂⟩ : Γ →ren Θ₁ ++ Θ₂`.
pub fn rnm_pair(r1: &Rnm, r2: &Rnm) -> Result<Rnm> {
    if r1.src() != r2.src() {
        return Err(Error::CtxtMismatch(format!(
            "pairing renamings out of {} and {}",
            r1.src(),
            r2.src()
        )));
    }
    let mut entries = r1.entries().to_vec();
    entries.extend(r2.entries().iter().cloned());
    Rnm::new(r1.src().clone(), ctxt_concat(r1.tgt(), r2.tgt()), entries)
}

/// `Γ^T`: every type `T′` of `g` becomes `T → T′`.
pub fn exp_ty(g: &Ctxt, t: &Ty) -> Ctxt {
    match g.split_last() {
        None => Ctxt::nil(),
        Some((rest, last)) => exp_ty(rest, t).snoc(Ty::arr(t.clone(), last.clone())),
    }
}

/// `Γ^Δ`, with `Γ^(Δ′, T) = (Γ^T)^Δ′`.
pub fn exp_ctxt(g: &Ctxt, d: &Ctxt) -> Ctxt {
    match d.split_last() {
        None => g.clone(),
        Some((rest, t)) => exp_ctxt(&exp_ty(g, t), rest),
    }
}

/// Pre-abstraction at one type: `(Γ, T) ⊢ t : S` to `Γ ⊢ Abs t : T → S`.
pub fn abs1(t: &Tm) -> Result<Tm> {
    Tm::abs(t.clone())
}

/// Pre-evaluation at one type: `Γ ⊢ t : T → S` to `(Γ, T) ⊢ App (t[(id)_T]) (Var 0) : S`.
pub fn ev1(t: &Tm) -> Result<Tm> {
    let dom = t
        .ty()
        .as_arr()
        .ok_or_else(|| Error::TypeMismatch(format!("pre-evaluation of a term of type {}", t.ty())))?
        .0
        .clone();
    let v0 = Tm::var(Idx::zero(t.ctxt(), dom.clone()));
    Tm::app(shift(t, dom), v0)
}

fn strip_suffix<'g>(g: &'g Ctxt, d: &Ctxt) -> Result<&'g Ctxt> {
    let gamma = g.drop_last(d.len()).ok_or_else(|| {
        Error::CtxtMismatch(format!("{g} is too short to end with {d}"))
    })?;
    if ctxt_concat(gamma, d) != *g {
        return Err(Error::CtxtMismatch(format!("{g} does not end with {d}")));
    }
    Ok(gamma)
}

/// `Subst((Γ, T), Θ) → Subst(Γ, Θ^T)`, entrywise [`abs1`].
pub fn curry_ty(s: &Subst) -> Result<Subst> {
    let (gamma, t) = s
        .src()
        .split_last()
        .ok_or_else(|| Error::CtxtMismatch("pre-abstraction out of the empty context".into()))?;
    let entries = s.entries().iter().map(abs1).collect::<Result<Vec<_>>>()?;
    Subst::new(gamma.clone(), exp_ty(s.tgt(), t), entries)
}

/// `Subst(Γ, Θ^T) → Subst((Γ, T), Θ)`, entrywise [`ev1`].
pub fn uncurry_ty(u: &Subst, t: &Ty) -> Result<Subst> {
    let theta = unexp_ty(u.tgt(), t)?;
    let entries = u.entries().iter().map(ev1).collect::<Result<Vec<_>>>()?;
    Subst::new(u.src().snoc(t.clone()), theta, entries)
}

/// Inverts [`exp_ty`] on its image.
fn unexp_ty(g: &Ctxt, t: &Ty) -> Result<Ctxt> {
    match g.split_last() {
        None => Ok(Ctxt::nil()),
        Some((rest, Ty::Arr(dom, cod))) if **dom == *t => Ok(unexp_ty(rest, t)?.snoc((**cod).clone())),
        Some((_, other)) => Err(Error::CtxtMismatch(format!(
            "context entry {other} is not an exponential by {t}"
        ))),
    }
}

/// Pre-abstraction `Subst(Γ ++ Δ, Θ) → Subst(Γ, Θ^Δ)`.
pub fn curry(s: &Subst, delta: &Ctxt) -> Result<Subst> {
    strip_suffix(s.src(), delta)?;
    let mut cur = s.clone();
    for _ in 0..delta.len() {
        cur = curry_ty(&cur)?;
    }
    Ok(cur)
}

/// Pre-evaluation `Subst(Γ, Θ^Δ) → Subst(Γ ++ Δ, Θ)`.
pub fn uncurry(u: &Subst, delta: &Ctxt) -> Result<Subst> {
    let mut cur = u.clone();
    for t in delta.types() {
        cur = uncurry_ty(&cur, &t)?;
    }
    Ok(cur)
}

fn abs_n(d: Deriv, n: usize) -> Deriv {
    (0..n).fold(d, |acc, _| Deriv::abs(acc))
}

fn trans_pointwise(a: SubstDeriv, b: SubstDeriv) -> SubstDeriv {
    SubstDeriv {
        src: a.src,
        tgt: a.tgt,
        entries: a.entries.into_iter().zip(b.entries).map(|(x, y)| Deriv::trans(x, y)).collect(),
    }
}

/// Pointwise derivations `uncurry(curry(s)) ~ s`.
pub fn uncurry_curry_cert(s: &Subst, delta: &Ctxt) -> Result<SubstDeriv> {
    strip_suffix(s.src(), delta)?;
    uc_cert(s, delta)
}

fn uc_cert(s: &Subst, delta: &Ctxt) -> Result<SubstDeriv> {
    let Some((delta0, t)) = delta.split_last() else {
        return Ok(SubstDeriv::refl(s));
    };
    // x = curry_ty(s); y = uncurry_Δ′(curry_Δ′(x)) ~ x by induction
    let x = curry_ty(s)?;
    let inner = uc_cert(&x, delta0)?;
    let wk = Subst::wk(x.src(), t.clone());
    let v0 = Idx::zero(x.src(), t.clone());
    let entries = inner
        .entries
        .iter()
        .zip(x.entries())
        .map(|(dk, xk)| {
            // App (shift y_k) 0  ~  App (shift x_k) 0  ~  s_k
            let cong = Deriv::app(deriv_subst_unchecked(dk, &wk), Deriv::var(v0.clone()));
            let body = match shift(xk, t.clone()).node() {
                TmNode::Abs(b) => b.clone(),
                _ => unreachable!("curried entries are abstractions"),
            };
            Deriv::trans(cong, Deriv::beta(body, Tm::var(v0.clone())))
        })
        .collect();
    Ok(SubstDeriv {
        src: s.src().clone(),
        tgt: s.tgt().clone(),
        entries,
    })
}

/// Pointwise derivations `curry(uncurry(u)) ~ u`.
pub fn curry_uncurry_cert(u: &Subst, delta: &Ctxt) -> Result<SubstDeriv> {
    let Some((delta0, t)) = delta.split_last() else {
        return Ok(SubstDeriv::refl(u));
    };
    // y = uncurry_Δ′(u); curry_ty(uncurry_ty(y)) ~ y entrywise by η
    let y = uncurry(u, delta0)?;
    let eta = y.entries().iter().map(|yk| Deriv::symm(Deriv::eta(yk.clone(), t.clone())));
    let lifted = SubstDeriv {
        src: u.src().clone(),
        tgt: u.tgt().clone(),
        entries: eta.map(|d| abs_n(d, delta0.len())).collect(),
    };
    let rest = curry_uncurry_cert(u, delta0)?;
    Ok(trans_pointwise(lifted, rest))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conversion::{check_deriv, check_subst_deriv};
    use crate::substitution::{hcomp_rs, subst};
    use crate::syntax::alpha_eq;

    fn ii() -> Ty {
        Ty::arr(Ty::Iota, Ty::Iota)
    }

    #[test]
    fn concat_units() {
        let g = Ctxt::from_types([Ty::Iota, ii()]);
        assert_eq!(ctxt_concat(&g, &Ctxt::nil()), g);
        assert_eq!(ctxt_concat(&Ctxt::nil(), &g), g);
        assert_eq!(
            ctxt_concat(&g, &Ctxt::from_types([Ty::Iota])).types(),
            vec![Ty::Iota, ii(), Ty::Iota]
        );
    }

    #[test]
    fn pairing_with_projections() {
        let g = Ctxt::from_types([ii(), Ty::Iota]);
        let s1 = Subst::new(g.clone(), Ctxt::from_types([Ty::Iota]), vec![Tm::var_at(&g, 0).unwrap()]).unwrap();
        let s2 = Subst::new(g.clone(), Ctxt::from_types([ii()]), vec![Tm::var_at(&g, 1).unwrap()]).unwrap();
        let p = pair(&s1, &s2).unwrap();
        assert_eq!(hcomp_rs(&proj1(s1.tgt(), s2.tgt()), &p).unwrap(), s1);
        assert_eq!(hcomp_rs(&proj2(s1.tgt(), s2.tgt()), &p).unwrap(), s2);
        let empty = Subst::new(g.clone(), Ctxt::nil(), vec![]).unwrap();
        assert_eq!(pair(&s1, &empty).unwrap(), s1);
    }

    #[test]
    fn exponential_contexts() {
        let t = Ty::Iota;
        assert_eq!(exp_ty(&Ctxt::nil(), &t), Ctxt::nil());
        assert_eq!(exp_ty(&Ctxt::from_types([Ty::Iota]), &t), Ctxt::from_types([ii()]));
        assert_eq!(
            exp_ty(&Ctxt::from_types([Ty::Iota, Ty::Iota]), &t),
            Ctxt::from_types([ii(), ii()])
        );
        let g = Ctxt::from_types([Ty::Iota]);
        assert_eq!(exp_ctxt(&g, &Ctxt::nil()), g);
        assert_eq!(exp_ctxt(&g, &g), Ctxt::from_types([ii()]));
        assert_eq!(exp_ctxt(&Ctxt::nil(), &Ctxt::from_types([ii(), Ty::Iota])), Ctxt::nil());
        // Γ^(T1, T2) = (Γ^T2)^T1: each A becomes T1 → T2 → A
        let d = Ctxt::from_types([ii(), Ty::Iota]);
        assert_eq!(
            exp_ctxt(&g, &d),
            Ctxt::from_types([Ty::arr(ii(), Ty::arr(Ty::Iota, Ty::Iota))])
        );
    }

    #[test]
    fn one_step_maps() {
        let g = Ctxt::from_types([Ty::Iota]);
        let v = Tm::var_at(&g, 0).unwrap();
        assert_eq!(abs1(&v).unwrap(), Tm::abs(v.clone()).unwrap());
        let one = crate::church::one();
        let e = ev1(&one).unwrap();
        let g1 = Ctxt::from_types([ii()]);
        assert_eq!(e, Tm::app(shift(&one, ii()), Tm::var_at(&g1, 0).unwrap()).unwrap());
        assert!(ev1(&v).is_err());
    }

    #[test]
    fn ev_after_abs_is_one_beta_step() {
        let g = Ctxt::from_types([ii(), Ty::Iota]);
        let t = Tm::app(Tm::var_at(&g, 1).unwrap(), Tm::var_at(&g, 0).unwrap()).unwrap();
        let e = ev1(&abs1(&t).unwrap()).unwrap();
        let body = match e.node() {
            TmNode::App(f, _) => match f.node() {
                TmNode::Abs(b) => b.clone(),
                _ => panic!(),
            },
            _ => panic!(),
        };
        let v0 = Tm::var_at(&g, 0).unwrap();
        let (l, r) = check_deriv(&Deriv::beta(body, v0)).unwrap();
        assert_eq!(l, e);
        assert_eq!(r, t);
    }

    #[test]
    fn curry_round_trips_with_certificates() {
        let gamma = Ctxt::from_types([ii()]);
        let delta = Ctxt::from_types([Ty::Iota, ii()]);
        let src = ctxt_concat(&gamma, &delta);
        // Θ = (o, o): entries f x and g (f x) style terms
        let f = Tm::var_at(&src, 2).unwrap();
        let x = Tm::var_at(&src, 1).unwrap();
        let g = Tm::var_at(&src, 0).unwrap();
        let e1 = Tm::app(f.clone(), x.clone()).unwrap();
        let e2 = Tm::app(g, Tm::app(f, x).unwrap()).unwrap();
        let s = Subst::new(src.clone(), Ctxt::from_types([Ty::Iota, Ty::Iota]), vec![e1, e2]).unwrap();
        let c = curry(&s, &delta).unwrap();
        assert_eq!(*c.src(), gamma);
        assert_eq!(*c.tgt(), exp_ctxt(s.tgt(), &delta));
        let back = uncurry(&c, &delta).unwrap();
        assert_eq!(*back.src(), src);

        let cert = uncurry_curry_cert(&s, &delta).unwrap();
        let (l, r) = check_subst_deriv(&cert).unwrap();
        assert_eq!(l, back);
        assert_eq!(r, s);

        let cert = curry_uncurry_cert(&c, &delta).unwrap();
        let (l, r) = check_subst_deriv(&cert).unwrap();
        assert_eq!(l, curry(&uncurry(&c, &delta).unwrap(), &delta).unwrap());
        assert_eq!(r, c);
    }

    #[test]
    fn degenerate_curry_cases() {
        let g = Ctxt::from_types([Ty::Iota]);
        let s = Subst::id(&g);
        assert_eq!(curry(&s, &Ctxt::nil()).unwrap(), s);
        assert_eq!(uncurry(&s, &Ctxt::nil()).unwrap(), s);
        let empty = Subst::new(g.clone(), Ctxt::nil(), vec![]).unwrap();
        let c = curry(&empty, &g).unwrap();
        assert!(c.is_empty());
        assert!(c.src().is_empty());
        assert!(curry(&s, &Ctxt::from_types([ii()])).is_err());
    }

    #[test]
    fn uncurry_entry_is_ev1() {
        let gamma = Ctxt::from_types([ii()]);
        let u = Subst::id(&gamma);
        let back = uncurry(&u, &Ctxt::from_types([Ty::Iota])).unwrap();
        let e = back.entries()[0].clone();
        let expected = ev1(&Tm::var_at(&gamma, 0).unwrap()).unwrap();
        assert!(alpha_eq(&e, &expected));
        let _ = subst(&e, &Subst::id(back.src())).unwrap();
    }
}
