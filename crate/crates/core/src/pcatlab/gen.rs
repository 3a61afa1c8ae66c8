//! Seeded random generation of well-typed terms and of βη-rewrite
//! derivations starting from them.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use crate::conversion::{deriv_refl, Deriv};
use crate::renaming::shift;
use crate::substitution::beta_subst;
use crate::syntax::{Ctxt, Idx, Tm, TmNode, Ty};

#[derive(Clone, Debug)]
pub struct GenConfig {
    pub max_depth: usize,
    pub max_ctxt: usize,
    pub type_depth: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            max_depth: 6,
            max_ctxt: 3,
            type_depth: 2,
        }
    }
}

/// A deterministic generator of typed terms.
pub struct TermGen {
    rng: ChaCha8Rng,
    cfg: GenConfig,
}

impl TermGen {
    pub fn new(seed: u64, cfg: GenConfig) -> TermGen {
        TermGen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            cfg,
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn ty(&mut self, depth: usize) -> Ty {
        if depth == 0 || self.rng.gen_bool(0.4) {
            Ty::Iota
        } else {
            let a = self.ty(depth - 1);
            let b = self.ty(depth - 1);
            Ty::arr(a, b)
        }
    }

    pub fn ctxt(&mut self) -> Ctxt {
        let n = self.rng.gen_range(0..=self.cfg.max_ctxt);
        let d = self.cfg.type_depth;
        (0..n).fold(Ctxt::nil(), |g, _| {
            let t = self.ty(d);
            g.snoc(t)
        })
    }

    /// A random term, retrying until one exists for the drawn context and
    /// type.
    pub fn term(&mut self) -> Tm {
        loop {
            let g = self.ctxt();
            let t = self.ty(self.cfg.type_depth);
            let d = self.rng.gen_range(1..=self.cfg.max_depth);
            if let Some(tm) = self.term_at(&g, &t, d) {
                return tm;
            }
        }
    }

    /// A random term `g ⊢ _ : t` of depth at most `depth`, if one is found.
    pub fn term_at(&mut self, g: &Ctxt, t: &Ty, depth: usize) -> Option<Tm> {
        if depth == 0 {
            return None;
        }
        let mut options = vec![0u8, 1, 2, 3, 4];
        options.shuffle(&mut self.rng);
        for opt in options {
            let found = match opt {
                0 => self.variable(g, t),
                1 => self.abstraction(g, t, depth),
                2 => self.spine(g, t, depth),
                3 => self.redex(g, t, depth),
                _ => self.application(g, t, depth),
            };
            if found.is_some() {
                return found;
            }
        }
        None
    }

    fn variable(&mut self, g: &Ctxt, t: &Ty) -> Option<Tm> {
        let hits: Vec<usize> = (0..g.len()).filter(|&k| g.lookup(k) == Some(t)).collect();
        let k = *hits.choose(&mut self.rng)?;
        Some(Tm::var(Idx::new(g, k).ok()?))
    }

    fn abstraction(&mut self, g: &Ctxt, t: &Ty, depth: usize) -> Option<Tm> {
        let (a, b) = t.as_arr()?;
        if depth < 2 {
            return None;
        }
        let body = self.term_at(&g.snoc(a.clone()), b, depth - 1)?;
        Tm::abs(body).ok()
    }

    /// A variable applied to enough arguments to reach `t`.
    fn spine(&mut self, g: &Ctxt, t: &Ty, depth: usize) -> Option<Tm> {
        let mut heads = Vec::new();
        for k in 0..g.len() {
            let mut ty = g.lookup(k)?.clone();
            let mut args = Vec::new();
            while let Some((a, b)) = ty.as_arr().map(|(a, b)| (a.clone(), b.clone())) {
                args.push(a);
                ty = b;
                if ty == *t {
                    heads.push((k, args.clone()));
                }
            }
        }
        let (k, args) = heads.choose(&mut self.rng)?.clone();
        if args.len() + 1 > depth {
            return None;
        }
        let mut acc = Tm::var(Idx::new(g, k).ok()?);
        let budget = depth - args.len();
        for a in &args {
            let x = self.term_at(g, a, budget)?;
            acc = Tm::app(acc, x).ok()?;
        }
        Some(acc)
    }

    fn redex(&mut self, g: &Ctxt, t: &Ty, depth: usize) -> Option<Tm> {
        if depth < 3 {
            return None;
        }
        let a = self.ty(self.cfg.type_depth.min(1));
        let body = self.term_at(&g.snoc(a.clone()), t, depth - 2)?;
        let arg = self.term_at(g, &a, depth - 1)?;
        Tm::app(Tm::abs(body).ok()?, arg).ok()
    }

    fn application(&mut self, g: &Ctxt, t: &Ty, depth: usize) -> Option<Tm> {
        if depth < 2 {
            return None;
        }
        let a = self.ty(self.cfg.type_depth.min(1));
        let f = self.term_at(g, &Ty::arr(a.clone(), t.clone()), depth - 1)?;
        let x = self.term_at(g, &a, depth - 1)?;
        Tm::app(f, x).ok()
    }

    /// Applies `steps` random rewrites to `t`, returning the endpoint and a
    /// derivation `t ~ endpoint`.
    pub fn rewrite(&mut self, t: &Tm, steps: usize) -> (Tm, Deriv) {
        let mut cur = t.clone();
        let mut d = deriv_refl(t);
        for _ in 0..steps {
            if let Some((next, step)) = self.rewrite_once(&cur) {
                d = Deriv::trans(d, step);
                cur = next;
            }
        }
        (cur, d)
    }

    /// One rewrite at a uniformly chosen position, if any rule applies there.
    pub fn rewrite_once(&mut self, t: &Tm) -> Option<(Tm, Deriv)> {
        let pos = self.rng.gen_range(0..t.size());
        self.rewrite_at(t, pos)
    }

    fn rewrite_at(&mut self, t: &Tm, pos: usize) -> Option<(Tm, Deriv)> {
        if pos == 0 {
            return self.rewrite_here(t);
        }
        match t.node() {
            TmNode::Var(_) => None,
            TmNode::App(f, a) => {
                if pos - 1 < f.size() {
                    let (f2, d) = self.rewrite_at(f, pos - 1)?;
                    Some((Tm::app(f2, a.clone()).ok()?, Deriv::app(d, deriv_refl(a))))
                } else {
                    let (a2, d) = self.rewrite_at(a, pos - 1 - f.size())?;
                    Some((Tm::app(f.clone(), a2).ok()?, Deriv::app(deriv_refl(f), d)))
                }
            }
            TmNode::Abs(b) => {
                let (b2, d) = self.rewrite_at(b, pos - 1)?;
                Some((Tm::abs(b2).ok()?, Deriv::abs(d)))
            }
        }
    }

    fn rewrite_here(&mut self, t: &Tm) -> Option<(Tm, Deriv)> {
        let mut rules = vec![0u8, 1, 2, 3];
        rules.shuffle(&mut self.rng);
        for r in rules {
            let found = match r {
                0 => beta_reduce(t),
                1 => eta_expand(t),
                2 => eta_reduce(t),
                _ => self.beta_expand(t),
            };
            if found.is_some() {
                return found;
            }
        }
        None
    }

    /// `t ~ (\_. t) u` for a small random `u`.
    fn beta_expand(&mut self, t: &Tm) -> Option<(Tm, Deriv)> {
        if t.size() > 40 {
            return None;
        }
        let a = self.ty(1);
        let u = self.term_at(t.ctxt(), &a, 2)?;
        let body = shift(t, a);
        let redex = Tm::app(Tm::abs(body.clone()).ok()?, u.clone()).ok()?;
        Some((redex, Deriv::symm(Deriv::beta(body, u))))
    }
}

fn beta_reduce(t: &Tm) -> Option<(Tm, Deriv)> {
    let TmNode::App(f, a) = t.node() else { return None };
    let TmNode::Abs(b) = f.node() else { return None };
    Some((beta_subst(b, a).ok()?, Deriv::beta(b.clone(), a.clone())))
}

fn eta_expand(t: &Tm) -> Option<(Tm, Deriv)> {
    let (dom, _) = t.ty().as_arr()?;
    let v0 = Tm::var(Idx::zero(t.ctxt(), dom.clone()));
    let expanded = Tm::abs(Tm::app(shift(t, dom.clone()), v0).ok()?).ok()?;
    Some((expanded, Deriv::eta(t.clone(), dom.clone())))
}

/// `\x. f x ~ f` when `x` is not free in `f`.
fn eta_reduce(t: &Tm) -> Option<(Tm, Deriv)> {
    let TmNode::Abs(b) = t.node() else { return None };
    let TmNode::App(f, x) = b.node() else { return None };
    match x.node() {
        TmNode::Var(i) if i.depth() == 0 => {}
        _ => return None,
    }
    let (outer, dom) = b.ctxt().split_last()?;
    let g = strengthen(f, 0, outer)?;
    Some((g.clone(), Deriv::symm(Deriv::eta(g, dom.clone()))))
}

/// Removes the variable at `cut` from the context of `t`, if it is unused.
pub fn strengthen(t: &Tm, cut: usize, target: &Ctxt) -> Option<Tm> {
    match t.node() {
        TmNode::Var(i) => {
            let k = i.depth();
            match k.cmp(&cut) {
                std::cmp::Ordering::Less => Tm::var_at(target, k).ok(),
                std::cmp::Ordering::Equal => None,
                std::cmp::Ordering::Greater => Tm::var_at(target, k - 1).ok(),
            }
        }
        TmNode::App(f, a) => Tm::app(strengthen(f, cut, target)?, strengthen(a, cut, target)?).ok(),
        TmNode::Abs(b) => {
            let (_, dom) = b.ctxt().split_last()?;
            Tm::abs(strengthen(b, cut + 1, &target.snoc(dom.clone()))?).ok()
        }
    }
}
