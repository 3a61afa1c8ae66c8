//! Context renamings `Γ →ren Δ`: one index of `Γ` per entry of `Δ`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::syntax::{Ctxt, Idx, Tm, TmNode, Ty};

/// A renaming from `src` (Γ) to `tgt` (Δ). `entries` is aligned with
/// `tgt.types()`, so the entry for depth `d` of Δ sits at `len - 1 - d`.
#[derive(Clone, PartialEq, Eq)]
pub struct Rnm {
    src: Ctxt,
    tgt: Ctxt,
    entries: Arc<[Idx]>,
}

impl Rnm {
    pub fn new(src: Ctxt, tgt: Ctxt, entries: Vec<Idx>) -> Result<Rnm> {
        let tys = tgt.types();
        if tys.len() != entries.len() {
            return Err(Error::CtxtMismatch(format!(
                "renaming into {tgt} needs {} entries, got {}",
                tys.len(),
                entries.len()
            )));
        }
        for (k, (ty, e)) in tys.iter().zip(&entries).enumerate() {
            if *e.ctxt() != src {
                return Err(Error::CtxtMismatch(format!("renaming entry {k} does not live in {src}")));
            }
            if e.ty() != ty {
                return Err(Error::TypeMismatch(format!(
                    "renaming entry {k} has type {}, expected {ty}",
                    e.ty()
                )));
            }
        }
        Ok(Rnm {
            src,
            tgt,
            entries: entries.into(),
        })
    }

    /// The identity renaming on `g`.
    pub fn id(g: &Ctxt) -> Rnm {
        let n = g.len();
        let entries = g
            .types()
            .into_iter()
            .enumerate()
            .map(|(k, ty)| Idx::in_ctxt_unchecked(g.clone(), ty, n - 1 - k))
            .collect();
        Rnm {
            src: g.clone(),
            tgt: g.clone(),
            entries,
        }
    }

    /// The weakening `(id)_T : (Γ, T) →ren Γ`.
    pub fn wk(g: &Ctxt, ty: Ty) -> Rnm {
        Rnm::id(g).weaken(ty)
    }

    /// `ρ_T : (Γ, T) →ren Δ`, every entry shifted past the new variable.
    pub fn weaken(&self, ty: Ty) -> Rnm {
        let src = self.src.snoc(ty);
        let entries = self
            .entries
            .iter()
            .map(|i| Idx::in_ctxt_unchecked(src.clone(), i.ty().clone(), i.depth() + 1))
            .collect();
        Rnm {
            src,
            tgt: self.tgt.clone(),
            entries,
        }
    }

    /// `(Γ, T) →ren (Δ, T)`: weaken, then map the new variable to itself.
    pub fn lift(&self, ty: Ty) -> Rnm {
        let weak = self.weaken(ty.clone());
        let mut entries: Vec<Idx> = weak.entries.to_vec();
        entries.push(Idx::in_ctxt_unchecked(weak.src.clone(), ty.clone(), 0));
        Rnm {
            src: weak.src,
            tgt: self.tgt.snoc(ty),
            entries: entries.into(),
        }
    }

    /// `self ∘ other`, where `self : Δ → Θ` and `other : Γ → Δ`.
    pub fn compose(&self, other: &Rnm) -> Result<Rnm> {
        if self.src != other.tgt {
            return Err(Error::CtxtMismatch(format!(
                "cannot compose renamings: {} vs {}",
                self.src, other.tgt
            )));
        }
        let entries = self.entries.iter().map(|i| other.lookup(i.depth()).clone()).collect();
        Ok(Rnm {
            src: other.src.clone(),
            tgt: self.tgt.clone(),
            entries,
        })
    }

    /// Entry for the variable at `depth` of the target context.
    pub fn lookup(&self, depth: usize) -> &Idx {
        &self.entries[self.entries.len() - 1 - depth]
    }

    pub fn src(&self) -> &Ctxt {
        &self.src
    }

    pub fn tgt(&self) -> &Ctxt {
        &self.tgt
    }

    pub fn entries(&self) -> &[Idx] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl fmt::Debug for Rnm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, i) in self.entries.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "#{}", i.depth())?;
        }
        write!(f, "] : {} → {}", self.src, self.tgt)
    }
}

/// `t[ρ]`: renames `t : Δ ⊢ T` along `ρ : Γ →ren Δ`.
pub fn rename(t: &Tm, r: &Rnm) -> Result<Tm> {
    if *t.ctxt() != r.tgt {
        return Err(Error::CtxtMismatch(format!(
            "renaming expects a term over {}, got one over {}",
            r.tgt,
            t.ctxt()
        )));
    }
    Ok(rename_unchecked(t, r))
}

pub(crate) fn rename_unchecked(t: &Tm, r: &Rnm) -> Tm {
    rename_under(t, r, 0, &r.src)
}

fn rename_under(t: &Tm, r: &Rnm, k: usize, g: &Ctxt) -> Tm {
    match t.node() {
        TmNode::Var(i) => {
            let d = if i.depth() < k { i.depth() } else { r.lookup(i.depth() - k).depth() + k };
            Tm::var(Idx::in_ctxt_unchecked(g.clone(), i.ty().clone(), d))
        }
        TmNode::App(f, a) => Tm::app_unchecked(rename_under(f, r, k, g), rename_under(a, r, k, g)),
        TmNode::Abs(b) => {
            let dom = t.ty().as_arr().expect("abstraction has arrow type").0.clone();
            Tm::abs_unchecked(g, rename_under(b, r, k + 1, &g.snoc(dom)))
        }
    }
}

/// Weakens `t : Γ ⊢ T` to `(Γ, ty) ⊢ T`.
pub fn shift(t: &Tm, ty: Ty) -> Tm {
    crate::substitution::weaken_by(t, 1, 0, &t.ctxt().snoc(ty))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g1() -> Ctxt {
        Ctxt::nil().snoc(Ty::Iota)
    }

    #[test]
    fn identity_on_empty_and_singleton() {
        assert!(Rnm::id(&Ctxt::nil()).is_empty());
        let r = Rnm::id(&g1());
        assert_eq!(r.entries().len(), 1);
        assert_eq!(r.entries()[0].depth(), 0);
    }

    #[test]
    fn weakening_shifts_entries() {
        let r = Rnm::id(&Ctxt::nil()).weaken(Ty::Iota);
        assert!(r.is_empty());
        assert_eq!(*r.src(), g1());

        let r = Rnm::id(&g1()).weaken(Ty::Iota);
        assert_eq!(r.entries()[0].depth(), 1);
        assert_eq!(*r.src(), Ctxt::from_types([Ty::Iota, Ty::Iota]));
        assert_eq!(*r.tgt(), g1());
    }

    #[test]
    fn single_shift_of_a_variable() {
        let v = Tm::var_at(&g1(), 0).unwrap();
        let r = Rnm::id(&g1()).weaken(Ty::Iota);
        let w = rename(&v, &r).unwrap();
        assert_eq!(w, Tm::var_at(&Ctxt::from_types([Ty::Iota, Ty::Iota]), 1).unwrap());
        assert_eq!(shift(&v, Ty::Iota), w);
    }

    #[test]
    fn shift_of_closed_term_keeps_structure() {
        let ii = Ty::arr(Ty::Iota, Ty::Iota);
        let id = Tm::abs(Tm::var_at(&g1(), 0).unwrap()).unwrap();
        let s = shift(&id, ii.clone());
        assert_eq!(s.to_string(), id.to_string());
        assert_eq!(*s.ctxt(), Ctxt::nil().snoc(ii));
    }

    #[test]
    fn compose_rejects_mismatched_contexts() {
        let a = Rnm::id(&g1());
        let b = Rnm::id(&Ctxt::nil());
        assert!(matches!(a.compose(&b), Err(Error::CtxtMismatch(_))));
    }

    #[test]
    fn rename_rejects_wrong_context() {
        let v = Tm::var_at(&g1(), 0).unwrap();
        let r = Rnm::id(&Ctxt::nil());
        assert!(rename(&v, &r).is_err());
    }

    #[test]
    fn new_validates_entries() {
        let g = g1();
        let ii = Ty::arr(Ty::Iota, Ty::Iota);
        let i0 = Idx::new(&g, 0).unwrap();
        assert!(Rnm::new(g.clone(), Ctxt::nil().snoc(ii), vec![i0.clone()]).is_err());
        assert!(Rnm::new(g.clone(), Ctxt::nil(), vec![i0.clone()]).is_err());
        assert_eq!(Rnm::new(g.clone(), g.clone(), vec![i0]).unwrap(), Rnm::id(&g));
    }
}
