//! Complete, deterministic enumerations of small syntax.
//!
//! Type depth counts arrows along the longest path (`o` has depth 0). Term
//! depth counts constructors along the longest path (a variable has depth 1).
//! The argument types of applications range over the types of depth at most
//! `arg_type_depth` together with every domain occurring in the context and
//! the target type. Every term of the bounded depth whose intermediate types
//! stay within that range is produced exactly once.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::renaming::Rnm;
use crate::substitution::Subst;
use crate::syntax::{Ctxt, Idx, Tm, Ty};

/// Hard ceiling on the size of any single enumeration.
pub const MAX_ITEMS: usize = 2_000_000;

fn budget(n: usize, what: &str) -> Result<()> {
    if n > MAX_ITEMS {
        Err(Error::BudgetExceeded(format!("{what}: more than {MAX_ITEMS} items")))
    } else {
        Ok(())
    }
}

/// All types of depth at most `depth`, ordered by depth, then by domain and
/// codomain position in the previous level.
pub fn enum_types(depth: usize) -> Result<Vec<Ty>> {
    let mut all = vec![Ty::Iota];
    let mut level_start = 0;
    for _ in 0..depth {
        let n = all.len();
        budget(n * n, "types")?;
        let mut next = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i >= level_start || j >= level_start {
                    next.push(Ty::arr(all[i].clone(), all[j].clone()));
                }
            }
        }
        level_start = n;
        all.extend(next);
    }
    Ok(all)
}

/// All contexts of length at most `max_len` over types of depth at most
/// `depth`, shortest first.
pub fn enum_ctxts(max_len: usize, depth: usize) -> Result<Vec<Ctxt>> {
    let tys = enum_types(depth)?;
    let mut level = vec![Ctxt::nil()];
    let mut all = level.clone();
    for _ in 0..max_len {
        level = level.iter().flat_map(|g| tys.iter().map(move |t| g.snoc(t.clone()))).collect();
        budget(all.len() + level.len(), "contexts")?;
        all.extend(level.iter().cloned());
    }
    Ok(all)
}

/// Memoizing term enumerator over one context family.
pub struct TermEnum {
    arg_type_depth: usize,
    memo: HashMap<(Ctxt, Ty, usize), Vec<Tm>>,
}

impl TermEnum {
    pub fn new(arg_type_depth: usize) -> TermEnum {
        TermEnum {
            arg_type_depth,
            memo: HashMap::new(),
        }
    }

    fn arg_types(&self, g: &Ctxt, target: &Ty) -> Result<Vec<Ty>> {
        fn domains(t: &Ty, out: &mut Vec<Ty>) {
            if let Ty::Arr(a, b) = t {
                out.push((**a).clone());
                domains(a, out);
                domains(b, out);
            }
        }
        let mut out = enum_types(self.arg_type_depth)?;
        let mut extra = Vec::new();
        for t in g.types().iter().chain(std::iter::once(target)) {
            domains(t, &mut extra);
        }
        for t in extra {
            if !out.contains(&t) {
                out.push(t);
            }
        }
        Ok(out)
    }

    /// All terms `g ⊢ _ : t` of depth at most `depth`: variables, then
    /// abstractions, then applications.
    pub fn terms(&mut self, g: &Ctxt, t: &Ty, depth: usize) -> Result<Vec<Tm>> {
        if depth == 0 {
            return Ok(Vec::new());
        }
        let key = (g.clone(), t.clone(), depth);
        if let Some(v) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        let mut out = Vec::new();
        for (k, ty) in g.types().iter().rev().enumerate() {
            if ty == t {
                out.push(Tm::var(Idx::new(g, k)?));
            }
        }
        if let Ty::Arr(a, b) = t {
            for body in self.terms(&g.snoc((**a).clone()), b, depth - 1)? {
                out.push(Tm::abs(body)?);
            }
        }
        if depth >= 2 {
            for a in self.arg_types(g, t)? {
                let funs = self.terms(g, &Ty::arr(a.clone(), t.clone()), depth - 1)?;
                if funs.is_empty() {
                    continue;
                }
                let args = self.terms(g, &a, depth - 1)?;
                budget(out.len() + funs.len() * args.len(), "terms")?;
                for f in &funs {
                    for x in &args {
                        out.push(Tm::app(f.clone(), x.clone())?);
                    }
                }
            }
        }
        self.memo.insert(key, out.clone());
        Ok(out)
    }
}

/// All terms `g ⊢ _ : t` of depth at most `depth`, with application
/// arguments at types of depth at most 2 (plus context domains).
pub fn enum_terms(g: &Ctxt, t: &Ty, depth: usize) -> Result<Vec<Tm>> {
    TermEnum::new(2).terms(g, t, depth)
}

fn product<T: Clone>(choices: Vec<Vec<T>>, what: &str) -> Result<Vec<Vec<T>>> {
    let mut acc: Vec<Vec<T>> = vec![Vec::new()];
    for opts in choices {
        budget(acc.len() * opts.len(), what)?;
        acc = acc
            .into_iter()
            .flat_map(|prefix| {
                opts.iter().map(move |o| {
                    let mut p = prefix.clone();
                    p.push(o.clone());
                    p
                })
            })
            .collect();
    }
    Ok(acc)
}

/// All renamings `g →ren d`.
pub fn enum_rnms(g: &Ctxt, d: &Ctxt) -> Result<Vec<Rnm>> {
    let choices = d
        .types()
        .iter()
        .map(|t| {
            (0..g.len())
                .rev()
                .filter(|&k| g.lookup(k) == Some(t))
                .map(|k| Idx::new(g, k).expect("in range"))
                .collect()
        })
        .collect();
    product(choices, "renamings")?
        .into_iter()
        .map(|es| Rnm::new(g.clone(), d.clone(), es))
        .collect()
}

/// All substitutions `g →sub d` whose entries have depth at most `depth`.
pub fn enum_substs(g: &Ctxt, d: &Ctxt, depth: usize) -> Result<Vec<Subst>> {
    enum_substs_with(&mut TermEnum::new(2), g, d, depth)
}

pub fn enum_substs_with(te: &mut TermEnum, g: &Ctxt, d: &Ctxt, depth: usize) -> Result<Vec<Subst>> {
    let choices = d
        .types()
        .iter()
        .map(|t| te.terms(g, t, depth))
        .collect::<Result<Vec<_>>>()?;
    product(choices, "substitutions")?
        .into_iter()
        .map(|es| Subst::new(g.clone(), d.clone(), es))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ii() -> Ty {
        Ty::arr(Ty::Iota, Ty::Iota)
    }

    #[test]
    fn small_type_enumerations() {
        assert_eq!(enum_types(0).unwrap(), vec![Ty::Iota]);
        assert_eq!(enum_types(1).unwrap(), vec![Ty::Iota, ii()]);
        let t2 = enum_types(2).unwrap();
        assert_eq!(t2.len(), 5);
        assert!(t2.iter().all(|t| t.depth() <= 2));
        assert_eq!(enum_types(3).unwrap().len(), 26);
    }

    #[test]
    fn context_counts() {
        assert_eq!(enum_ctxts(0, 2).unwrap(), vec![Ctxt::nil()]);
        assert_eq!(enum_ctxts(2, 1).unwrap().len(), 1 + 2 + 4);
    }

    #[test]
    fn no_closed_base_terms() {
        for d in 0..5 {
            assert!(enum_terms(&Ctxt::nil(), &Ty::Iota, d).unwrap().is_empty());
        }
    }

    #[test]
    fn closed_identity_is_the_only_small_endo() {
        let ts = enum_terms(&Ctxt::nil(), &ii(), 2).unwrap();
        assert_eq!(ts.len(), 1);
        assert_eq!(ts[0].to_string(), "(\\:o. #0)");
    }

    #[test]
    fn enumeration_is_duplicate_free() {
        let g = Ctxt::from_types([ii(), Ty::Iota]);
        let ts = enum_terms(&g, &Ty::Iota, 3).unwrap();
        let set: std::collections::HashSet<_> = ts.iter().cloned().collect();
        assert_eq!(set.len(), ts.len());
        assert!(ts.iter().all(|t| t.depth() <= 3 && t.validate().is_ok()));
    }

    #[test]
    fn single_index_gives_identity_renaming() {
        let g = Ctxt::nil().snoc(Ty::Iota);
        let rs = enum_rnms(&g, &g).unwrap();
        assert_eq!(rs, vec![Rnm::id(&g)]);
        assert_eq!(enum_rnms(&g, &Ctxt::nil()).unwrap().len(), 1);
        assert!(enum_rnms(&Ctxt::nil(), &g).unwrap().is_empty());
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(enum_types(6), Err(Error::BudgetExceeded(_))));
    }
}
