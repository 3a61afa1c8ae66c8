//! A brute-force conversion oracle independent of the normalizers.
//!
//! The rewrite system is single-step β-reduction together with restricted
//! η-expansion: an arrow-typed subterm may be expanded to `\x. t x` unless it
//! is already an abstraction or sits in the function position of an
//! application. Both rules fire anywhere under congruence. The system is
//! terminating and its normal forms are the long βη-normal forms, so two
//! terms are convertible iff their reachable sets meet; once both sets are
//! saturated, failure to meet is a definite negative.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::renaming::shift;
use crate::substitution::beta_subst_unchecked;
use crate::syntax::{Idx, Tm, TmNode};

/// Upper bound on the size of a single reachable set.
pub const MAX_CLOSURE: usize = 20_000;

/// All terms one rewrite step away from `t`.
pub fn one_step(t: &Tm) -> Vec<Tm> {
    let mut out = Vec::new();
    steps(t, false, &mut out);
    out
}

fn steps(t: &Tm, head: bool, out: &mut Vec<Tm>) {
    if let Some((dom, _)) = t.ty().as_arr() {
        if !head && !matches!(t.node(), TmNode::Abs(_)) {
            let v0 = Tm::var(Idx::zero(t.ctxt(), dom.clone()));
            let body = Tm::app_unchecked(shift(t, dom.clone()), v0);
            out.push(Tm::abs_unchecked(t.ctxt(), body));
        }
    }
    match t.node() {
        TmNode::Var(_) => {}
        TmNode::App(f, a) => {
            if let TmNode::Abs(b) = f.node() {
                out.push(beta_subst_unchecked(b, a));
            }
            let mut fs = Vec::new();
            steps(f, true, &mut fs);
            out.extend(fs.into_iter().map(|f2| Tm::app_unchecked(f2, a.clone())));
            let mut xs = Vec::new();
            steps(a, false, &mut xs);
            out.extend(xs.into_iter().map(|a2| Tm::app_unchecked(f.clone(), a2)));
        }
        TmNode::Abs(b) => {
            let mut bs = Vec::new();
            steps(b, false, &mut bs);
            out.extend(bs.into_iter().map(|b2| Tm::abs_unchecked(t.ctxt(), b2)));
        }
    }
}

/// The terms reachable from a start term within some number of steps.
#[derive(Clone, Debug)]
pub struct Reachable {
    pub terms: HashSet<Tm>,
    /// No further term is reachable.
    pub saturated: bool,
}

/// Breadth-first closure of `t` under [`one_step`], at most `fuel` layers.
pub fn reachable(t: &Tm, fuel: usize) -> Reachable {
    let mut terms = HashSet::from([t.clone()]);
    let mut frontier = vec![t.clone()];
    for _ in 0..fuel {
        let mut next = Vec::new();
        for u in &frontier {
            for v in one_step(u) {
                if terms.insert(v.clone()) {
                    next.push(v);
                }
            }
        }
        if next.is_empty() {
            return Reachable { terms, saturated: true };
        }
        if terms.len() > MAX_CLOSURE {
            return Reachable { terms, saturated: false };
        }
        frontier = next;
    }
    let saturated = frontier.iter().all(|u| one_step(u).iter().all(|v| terms.contains(v)));
    Reachable { terms, saturated }
}

/// Verdict from two reachable sets: meet, separated, or inconclusive.
pub fn meet(a: &Reachable, b: &Reachable) -> Result<bool> {
    let (small, large) = if a.terms.len() <= b.terms.len() { (a, b) } else { (b, a) };
    if small.terms.iter().any(|t| large.terms.contains(t)) {
        Ok(true)
    } else if a.saturated && b.saturated {
        Ok(false)
    } else {
        Err(Error::FuelExhausted)
    }
}

/// Bounded βη-convertibility search; [`Error::FuelExhausted`] means unknown.
pub fn conv_oracle(t: &Tm, u: &Tm, fuel: usize) -> Result<bool> {
    if t.ctxt() != u.ctxt() || t.ty() != u.ty() {
        return Err(Error::TypeMismatch(format!(
            "oracle on {} ⊢ {} and {} ⊢ {}",
            t.ctxt(),
            t.ty(),
            u.ctxt(),
            u.ty()
        )));
    }
    meet(&reachable(t, fuel), &reachable(u, fuel))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::church;
    use crate::syntax::{Ctxt, Ty};

    #[test]
    fn one_beta_step() {
        let g = Ctxt::nil().snoc(Ty::Iota);
        let id = Tm::abs(Tm::var_at(&g.snoc(Ty::Iota), 0).unwrap()).unwrap();
        let u = Tm::var_at(&g, 0).unwrap();
        assert_eq!(conv_oracle(&Tm::app(id, u.clone()).unwrap(), &u, 1), Ok(true));
    }

    #[test]
    fn one_eta_step_under_binder() {
        assert_eq!(conv_oracle(&church::one(), &church::numeral(1), 2), Ok(true));
        assert_eq!(conv_oracle(&church::numeral(1), &church::one(), 2), Ok(true));
    }

    #[test]
    fn separated_normal_forms() {
        assert_eq!(conv_oracle(&church::numeral(1), &church::numeral(2), 1), Ok(false));
    }

    #[test]
    fn fuel_exhaustion_is_inconclusive() {
        let two = Tm::app(church::succ(), church::one()).unwrap();
        assert_eq!(conv_oracle(&two, &church::numeral(3), 1), Err(Error::FuelExhausted));
        assert_eq!(conv_oracle(&two, &church::numeral(2), 8), Ok(true));
    }

    #[test]
    fn long_forms_do_not_step() {
        assert!(one_step(&church::numeral(3)).is_empty());
        let g = Ctxt::nil().snoc(church::endo());
        let f = Tm::var_at(&g, 0).unwrap();
        assert_eq!(one_step(&f).len(), 1);
    }
}
