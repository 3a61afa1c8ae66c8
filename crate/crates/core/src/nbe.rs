//! Kripke-style normalization by evaluation.
//!
//! Semantic values live at a world (a context) and can be restricted along
//! substitutions into that world. At the base type a value is just a term;
//! at an arrow type it is a closure that, for every later world `Δ`, map
//! `Δ →sub Γ` and argument at `Δ`, yields a result at `Δ`. [`reify`] and
//! [`reflect`] convert between values and terms and are identities at the
//! base type. Reflection works on arbitrary terms, not just neutral ones.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::substitution::{subst_fast, Subst};
use crate::syntax::{Ctxt, Idx, Tm, TmNode, Ty};

type Closure = dyn Fn(&Subst, Sem) -> Result<Sem> + Send + Sync;

/// A semantic function value at world `world`.
#[derive(Clone)]
pub struct SemFun {
    world: Ctxt,
    dom: Ty,
    cod: Ty,
    apply: Arc<Closure>,
}

impl SemFun {
    /// Applies the closure at the world `s.src()` reached along `s`.
    pub fn apply(&self, s: &Subst, arg: Sem) -> Result<Sem> {
        if *s.tgt() != self.world {
            return Err(Error::CtxtMismatch(format!(
                "world map into {} applied to a value at {}",
                s.tgt(),
                self.world
            )));
        }
        if arg.world() != *s.src() || arg.ty() != self.dom {
            return Err(Error::TypeMismatch(format!(
                "argument {} at {} for a function expecting {} at {}",
                arg.ty(),
                arg.world(),
                self.dom,
                s.src()
            )));
        }
        (self.apply)(s, arg)
    }
}

/// A semantic value.
#[derive(Clone)]
pub enum Sem {
    Base(Tm),
    Fun(SemFun),
}

impl Sem {
    pub fn ty(&self) -> Ty {
        match self {
            Sem::Base(t) => t.ty().clone(),
            Sem::Fun(f) => Ty::arr(f.dom.clone(), f.cod.clone()),
        }
    }

    pub fn world(&self) -> Ctxt {
        match self {
            Sem::Base(t) => t.ctxt().clone(),
            Sem::Fun(f) => f.world.clone(),
        }
    }
}

impl fmt::Debug for Sem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sem::Base(t) => write!(f, "Base({t})"),
            Sem::Fun(g) => write!(f, "<closure {} at {}>", Ty::arr(g.dom.clone(), g.cod.clone()), g.world),
        }
    }
}

/// An environment: one value at `world` per entry of `tgt`.
#[derive(Clone, Debug)]
pub struct Env {
    world: Ctxt,
    tgt: Ctxt,
    /// Aligned with `tgt.types()`.
    values: Vec<Sem>,
}

impl Env {
    pub fn new(world: Ctxt, tgt: Ctxt, values: Vec<Sem>) -> Result<Env> {
        let tys = tgt.types();
        if tys.len() != values.len() {
            return Err(Error::CtxtMismatch(format!(
                "environment for {tgt} needs {} values, got {}",
                tys.len(),
                values.len()
            )));
        }
        for (k, (ty, v)) in tys.iter().zip(&values).enumerate() {
            if v.world() != world || v.ty() != *ty {
                return Err(Error::TypeMismatch(format!("environment entry {k} does not match {ty} at {world}")));
            }
        }
        Ok(Env { world, tgt, values })
    }

    pub fn lookup(&self, depth: usize) -> &Sem {
        &self.values[self.values.len() - 1 - depth]
    }

    pub fn world(&self) -> &Ctxt {
        &self.world
    }

    pub fn tgt(&self) -> &Ctxt {
        &self.tgt
    }

    fn restrict(&self, s: &Subst) -> Env {
        Env {
            world: s.src().clone(),
            tgt: self.tgt.clone(),
            values: self.values.iter().map(|v| restrict_unchecked(v, s)).collect(),
        }
    }

    fn push(mut self, v: Sem) -> Env {
        self.tgt = self.tgt.snoc(v.ty());
        self.values.push(v);
        self
    }
}

/// Moves `v` from world `Γ` to world `Δ` along `s : Δ →sub Γ`.
pub fn restrict(v: &Sem, s: &Subst) -> Result<Sem> {
    if *s.tgt() != v.world() {
        return Err(Error::CtxtMismatch(format!(
            "cannot restrict a value at {} along a map into {}",
            v.world(),
            s.tgt()
        )));
    }
    Ok(restrict_unchecked(v, s))
}

fn restrict_unchecked(v: &Sem, s: &Subst) -> Sem {
    match v {
        Sem::Base(t) => Sem::Base(subst_fast(t, s)),
        Sem::Fun(f) => {
            if s.is_identity() {
                return v.clone();
            }
            let inner = f.apply.clone();
            let s0 = s.clone();
            Sem::Fun(SemFun {
                world: s.src().clone(),
                dom: f.dom.clone(),
                cod: f.cod.clone(),
                apply: Arc::new(move |s1: &Subst, a: Sem| inner(&s0.compose(s1)?, a)),
            })
        }
    }
}

/// `ũ`: embeds any term as a semantic value.
pub fn reflect(t: &Tm) -> Sem {
    match t.ty() {
        Ty::Iota => Sem::Base(t.clone()),
        Ty::Arr(dom, cod) => {
            let t0 = t.clone();
            Sem::Fun(SemFun {
                world: t.ctxt().clone(),
                dom: (**dom).clone(),
                cod: (**cod).clone(),
                apply: Arc::new(move |s: &Subst, a: Sem| {
                    let arg = reify(&a)?;
                    Ok(reflect(&Tm::app(subst_fast(&t0, s), arg)?))
                }),
            })
        }
    }
}

/// `q̃`: reads a semantic value back as a term.
pub fn reify(v: &Sem) -> Result<Tm> {
    match v {
        Sem::Base(t) => Ok(t.clone()),
        Sem::Fun(f) => {
            let wk = Subst::wk(&f.world, f.dom.clone());
            let x = reflect(&Tm::var(Idx::zero(&f.world, f.dom.clone())));
            let body = reify(&f.apply(&wk, x)?)?;
            Tm::abs(body)
        }
    }
}

/// Interprets `t : Δ ⊢ T` in an environment for `Δ` at world `Γ`.
pub fn eval(t: &Tm, e: &Env) -> Result<Sem> {
    if *t.ctxt() != e.tgt {
        return Err(Error::CtxtMismatch(format!(
            "evaluating a term over {} in an environment for {}",
            t.ctxt(),
            e.tgt
        )));
    }
    eval_unchecked(t, e)
}

fn eval_unchecked(t: &Tm, e: &Env) -> Result<Sem> {
    match t.node() {
        TmNode::Var(i) => Ok(e.lookup(i.depth()).clone()),
        TmNode::App(f, a) => {
            let fv = eval_unchecked(f, e)?;
            let av = eval_unchecked(a, e)?;
            match fv {
                Sem::Fun(g) => g.apply(&Subst::id(&e.world), av),
                Sem::Base(_) => unreachable!("well-typed function evaluates to a closure"),
            }
        }
        TmNode::Abs(b) => {
            let (dom, cod) = t.ty().as_arr().expect("abstraction has arrow type");
            let body = b.clone();
            let env = e.clone();
            Ok(Sem::Fun(SemFun {
                world: e.world.clone(),
                dom: dom.clone(),
                cod: cod.clone(),
                apply: Arc::new(move |s: &Subst, a: Sem| eval_unchecked(&body, &env.restrict(s).push(a))),
            }))
        }
    }
}

/// The environment sending every variable of `g` to its reflection.
pub fn reflect_env(g: &Ctxt) -> Env {
    let values = Subst::id(g).entries().iter().map(reflect).collect();
    Env {
        world: g.clone(),
        tgt: g.clone(),
        values,
    }
}

/// Normal form of `t` in its own context.
pub fn nf3(t: &Tm) -> Result<Tm> {
    reify(&eval_unchecked(t, &reflect_env(t.ctxt()))?)
}

/// Entrywise normal form of a substitution.
pub fn nf3_subst(s: &Subst) -> Result<Subst> {
    let entries = s.entries().iter().map(nf3).collect::<Result<Vec<_>>>()?;
    Subst::new(s.src().clone(), s.tgt().clone(), entries)
}
