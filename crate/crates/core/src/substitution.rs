//! Context substitutions `Γ →sub Δ`: one term over `Γ` per entry of `Δ`.
//!
//! Besides the substitution category itself this module carries the lifting
//! of renamings, the two hetero-compositions, and the `beta_subst` helper
//! used by βη-conversion.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::renaming::{rename_unchecked, Rnm};
use crate::syntax::{Ctxt, Idx, Tm, TmNode, Ty};

/// A substitution from `src` (Γ) to `tgt` (Δ). `entries` is aligned with
/// `tgt.types()`: the entry for depth `d` of Δ sits at `len - 1 - d`.
#[derive(Clone, PartialEq, Eq)]
pub struct Subst {
    src: Ctxt,
    tgt: Ctxt,
    entries: Arc<[Tm]>,
}

impl Subst {
    pub fn new(src: Ctxt, tgt: Ctxt, entries: Vec<Tm>) -> Result<Subst> {
        let tys = tgt.types();
        if tys.len() != entries.len() {
            return Err(Error::CtxtMismatch(format!(
                "substitution into {tgt} needs {} entries, got {}",
                tys.len(),
                entries.len()
            )));
        }
        for (k, (ty, e)) in tys.iter().zip(&entries).enumerate() {
            if *e.ctxt() != src {
                return Err(Error::CtxtMismatch(format!("substitution entry {k} does not live in {src}")));
            }
            if e.ty() != ty {
                return Err(Error::TypeMismatch(format!(
                    "substitution entry {k} has type {}, expected {ty}",
                    e.ty()
                )));
            }
        }
        Ok(Subst {
            src,
            tgt,
            entries: entries.into(),
        })
    }

    pub(crate) fn from_parts_unchecked(src: Ctxt, tgt: Ctxt, entries: Vec<Tm>) -> Subst {
        debug_assert!(Subst::new(src.clone(), tgt.clone(), entries.clone()).is_ok());
        Subst {
            src,
            tgt,
            entries: entries.into(),
        }
    }

    /// The identity substitution: every variable of `g` mapped to itself.
    pub fn id(g: &Ctxt) -> Subst {
        let n = g.len();
        let entries = g
            .types()
            .into_iter()
            .enumerate()
            .map(|(k, ty)| Tm::var(Idx::in_ctxt_unchecked(g.clone(), ty, n - 1 - k)))
            .collect();
        Subst {
            src: g.clone(),
            tgt: g.clone(),
            entries,
        }
    }

    /// The weakening substitution `(Γ, T) →sub Γ`.
    pub fn wk(g: &Ctxt, ty: Ty) -> Subst {
        lift_rnm(&Rnm::wk(g, ty))
    }

    /// `(Γ, T) →sub Δ`: every entry renamed under `(id)_T`.
    pub fn weaken(&self, ty: Ty) -> Subst {
        let src = self.src.snoc(ty);
        let entries = self.entries.iter().map(|e| weaken_by(e, 1, 0, &src)).collect();
        Subst {
            src,
            tgt: self.tgt.clone(),
            entries,
        }
    }

    /// `(Γ, T) →sub (Δ, T)`: weaken, then map the new variable to `Var 0`.
    pub fn lift(&self, ty: Ty) -> Subst {
        let weak = self.weaken(ty.clone());
        let mut entries = weak.entries.to_vec();
        entries.push(Tm::var(Idx::in_ctxt_unchecked(weak.src.clone(), ty.clone(), 0)));
        Subst {
            src: weak.src,
            tgt: self.tgt.snoc(ty),
            entries: entries.into(),
        }
    }

    /// Extends the substitution with one more entry (`CtxtSubstSnoc`).
    pub fn snoc(&self, t: Tm) -> Result<Subst> {
        if *t.ctxt() != self.src {
            return Err(Error::CtxtMismatch(format!(
                "entry over {} cannot extend a substitution from {}",
                t.ctxt(),
                self.src
            )));
        }
        let mut entries = self.entries.to_vec();
        let tgt = self.tgt.snoc(t.ty().clone());
        entries.push(t);
        Ok(Subst {
            src: self.src.clone(),
            tgt,
            entries: entries.into(),
        })
    }

    /// `self ∘ other`, where `self : Δ → Θ` and `other : Γ → Δ`.
    pub fn compose(&self, other: &Subst) -> Result<Subst> {
        if self.src != other.tgt {
            return Err(Error::CtxtMismatch(format!(
                "cannot compose substitutions: {} vs {}",
                self.src, other.tgt
            )));
        }
        let entries = self.entries.iter().map(|e| subst_unchecked(e, other)).collect();
        Ok(Subst {
            src: other.src.clone(),
            tgt: self.tgt.clone(),
            entries,
        })
    }

    /// Entry for the variable at `depth` of the target context.
    pub fn lookup(&self, depth: usize) -> &Tm {
        &self.entries[self.entries.len() - 1 - depth]
    }

    /// True when every entry is the variable it replaces.
    pub fn is_identity(&self) -> bool {
        let n = self.entries.len();
        self.src == self.tgt
            && self
                .entries
                .iter()
                .enumerate()
                .all(|(k, e)| matches!(e.node(), TmNode::Var(i) if i.depth() == n - 1 - k))
    }

    pub fn src(&self) -> &Ctxt {
        &self.src
    }

    pub fn tgt(&self) -> &Ctxt {
        &self.tgt
    }

    pub fn entries(&self) -> &[Tm] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl fmt::Debug for Subst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, e) in self.entries.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "] : {} → {}", self.src, self.tgt)
    }
}

/// `t[σ]`: substitutes `t : Δ ⊢ T` along `σ : Γ →sub Δ`.
pub fn subst(t: &Tm, s: &Subst) -> Result<Tm> {
    if *t.ctxt() != s.tgt {
        return Err(Error::CtxtMismatch(format!(
            "substitution expects a term over {}, got one over {}",
            s.tgt,
            t.ctxt()
        )));
    }
    Ok(subst_unchecked(t, s))
}

pub(crate) fn subst_unchecked(t: &Tm, s: &Subst) -> Tm {
    subst_under(t, s, 0, &s.src)
}

/// Substitutes under `k` binders; `g` is `s.src` extended by those binders.
/// Entries are weakened only where a variable actually reaches them.
fn subst_under(t: &Tm, s: &Subst, k: usize, g: &Ctxt) -> Tm {
    match t.node() {
        TmNode::Var(i) if i.depth() < k => Tm::var(Idx::in_ctxt_unchecked(g.clone(), i.ty().clone(), i.depth())),
        TmNode::Var(i) => weaken_by(s.lookup(i.depth() - k), k, 0, g),
        TmNode::App(f, a) => Tm::app_unchecked(subst_under(f, s, k, g), subst_under(a, s, k, g)),
        TmNode::Abs(b) => {
            let dom = t.ty().as_arr().expect("abstraction has arrow type").0.clone();
            Tm::abs_unchecked(g, subst_under(b, s, k + 1, &g.snoc(dom)))
        }
    }
}

/// Inserts `k` fresh variables below the `cut` innermost ones; `g` is the
/// resulting context.
pub(crate) fn weaken_by(t: &Tm, k: usize, cut: usize, g: &Ctxt) -> Tm {
    if k == 0 {
        return t.clone();
    }
    match t.node() {
        TmNode::Var(i) => {
            let d = if i.depth() < cut { i.depth() } else { i.depth() + k };
            Tm::var(Idx::in_ctxt_unchecked(g.clone(), i.ty().clone(), d))
        }
        TmNode::App(f, a) => Tm::app_unchecked(weaken_by(f, k, cut, g), weaken_by(a, k, cut, g)),
        TmNode::Abs(b) => {
            let dom = t.ty().as_arr().expect("abstraction has arrow type").0.clone();
            Tm::abs_unchecked(g, weaken_by(b, k, cut + 1, &g.snoc(dom)))
        }
    }
}

/// Substitution with an identity short-cut, for the evaluators' hot paths.
/// The law suites exercise [`subst`], which never short-cuts.
pub(crate) fn subst_fast(t: &Tm, s: &Subst) -> Tm {
    if s.is_identity() {
        t.clone()
    } else {
        subst_unchecked(t, s)
    }
}

/// The substitution with the same action as `r`.
pub fn lift_rnm(r: &Rnm) -> Subst {
    Subst {
        src: r.src().clone(),
        tgt: r.tgt().clone(),
        entries: r.entries().iter().map(|i| Tm::var(i.clone())).collect(),
    }
}

/// `σ ∘ ρ` for `σ : Δ →sub Θ` and `ρ : Γ →ren Δ`: rename every entry of `σ`.
pub fn hcomp_sr(s: &Subst, r: &Rnm) -> Result<Subst> {
    if s.src != *r.tgt() {
        return Err(Error::CtxtMismatch(format!(
            "cannot compose substitution from {} with renaming into {}",
            s.src,
            r.tgt()
        )));
    }
    Ok(Subst {
        src: r.src().clone(),
        tgt: s.tgt.clone(),
        entries: s.entries.iter().map(|e| rename_unchecked(e, r)).collect(),
    })
}

/// `ρ ∘ σ` for `ρ : Δ →ren Θ` and `σ : Γ →sub Δ`: select entries of `σ`.
pub fn hcomp_rs(r: &Rnm, s: &Subst) -> Result<Subst> {
    if *r.src() != s.tgt {
        return Err(Error::CtxtMismatch(format!(
            "cannot compose renaming from {} with substitution into {}",
            r.src(),
            s.tgt
        )));
    }
    Ok(Subst {
        src: s.src.clone(),
        tgt: r.tgt().clone(),
        entries: r.entries().iter().map(|i| s.lookup(i.depth()).clone()).collect(),
    })
}

/// Substitutes `arg` for index zero of `body`.
pub fn beta_subst(body: &Tm, arg: &Tm) -> Result<Tm> {
    match body.ctxt().split_last() {
        Some((outer, dom)) if outer == arg.ctxt() && dom == arg.ty() => Ok(beta_subst_unchecked(body, arg)),
        Some((outer, dom)) => Err(Error::TypeMismatch(format!(
            "cannot substitute {} ⊢ {} for index zero of a body over {outer}, {dom}",
            arg.ctxt(),
            arg.ty()
        ))),
        None => Err(Error::CtxtMismatch("body has no index zero".into())),
    }
}

pub(crate) fn beta_subst_unchecked(body: &Tm, arg: &Tm) -> Tm {
    let s = Subst::id(arg.ctxt()).snoc(arg.clone()).expect("same context");
    subst_unchecked(body, &s)
}
