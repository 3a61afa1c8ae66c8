//! Simple types, contexts, and intrinsically scoped-and-typed de Bruijn terms.
//!
//! Every [`Tm`] node carries its context and type. The smart constructors are
//! the only way to build terms and they compute both annotations, so any
//! value of type `Tm` is well typed. De Bruijn depth 0 names the most
//! recently bound (Snoc-most) variable.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Simple types: a single base type and arrows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Ty {
    Iota,
    Arr(Arc<Ty>, Arc<Ty>),
}

impl Ty {
    pub fn arr(dom: Ty, cod: Ty) -> Ty {
        Ty::Arr(Arc::new(dom), Arc::new(cod))
    }

    /// Splits an arrow into domain and codomain.
    pub fn as_arr(&self) -> Option<(&Ty, &Ty)> {
        match self {
            Ty::Iota => None,
            Ty::Arr(dom, cod) => Some((dom, cod)),
        }
    }

    pub fn is_iota(&self) -> bool {
        matches!(self, Ty::Iota)
    }

    /// Arrow nesting depth: `o` has depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Ty::Iota => 0,
            Ty::Arr(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    fn fingerprint(&self) -> u64 {
        match self {
            Ty::Iota => 0x9e37_79b9_7f4a_7c15,
            Ty::Arr(a, b) => mix(mix(0x2545_f491_4f6c_dd1d, a.fingerprint()), b.fingerprint()),
        }
    }
}

impl fmt::Display for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ty::Iota => write!(f, "o"),
            Ty::Arr(a, b) if a.as_arr().is_some() => write!(f, "({a})->{b}"),
            Ty::Arr(a, b) => write!(f, "{a}->{b}"),
        }
    }
}

impl fmt::Debug for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A typing context, extended on the right.
///
/// A persistent snoc list: extending and popping share structure with the
/// original context.
#[derive(Clone, Default)]
pub struct Ctxt(Option<Arc<CtxtNode>>);

struct CtxtNode {
    rest: Ctxt,
    ty: Ty,
    len: usize,
}

impl Ctxt {
    pub fn nil() -> Ctxt {
        Ctxt(None)
    }

    pub fn snoc(&self, ty: Ty) -> Ctxt {
        Ctxt(Some(Arc::new(CtxtNode {
            rest: self.clone(),
            len: self.len() + 1,
            ty,
        })))
    }

    /// Builds a context from its types listed left to right.
    pub fn from_types<I: IntoIterator<Item = Ty>>(types: I) -> Ctxt {
        types.into_iter().fold(Ctxt::nil(), |g, t| g.snoc(t))
    }

    pub fn len(&self) -> usize {
        self.0.as_ref().map_or(0, |n| n.len)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_none()
    }

    /// The context without its last entry, and that entry.
    pub fn split_last(&self) -> Option<(&Ctxt, &Ty)> {
        self.0.as_ref().map(|n| (&n.rest, &n.ty))
    }

    /// Type of the variable at de Bruijn `depth`.
    pub fn lookup(&self, depth: usize) -> Option<&Ty> {
        let mut cur = self;
        let mut d = depth;
        loop {
            let node = cur.0.as_ref()?;
            if d == 0 {
                return Some(&node.ty);
            }
            d -= 1;
            cur = &node.rest;
        }
    }

    /// The context with its `n` innermost entries removed.
    pub fn drop_last(&self, n: usize) -> Option<&Ctxt> {
        let mut cur = self;
        for _ in 0..n {
            cur = &cur.0.as_ref()?.rest;
        }
        Some(cur)
    }

    /// Types listed left to right (depth `len - 1` first).
    pub fn types(&self) -> Vec<Ty> {
        let mut out = Vec::with_capacity(self.len());
        let mut cur = self;
        while let Some(node) = &cur.0 {
            out.push(node.ty.clone());
            cur = &node.rest;
        }
        out.reverse();
        out
    }

    pub fn ptr_eq(&self, other: &Ctxt) -> bool {
        match (&self.0, &other.0) {
            (None, None) => true,
            (Some(a), Some(b)) => Arc::ptr_eq(a, b),
            _ => false,
        }
    }
}

impl PartialEq for Ctxt {
    fn eq(&self, other: &Ctxt) -> bool {
        if self.len() != other.len() {
            return false;
        }
        let (mut a, mut b) = (self, other);
        loop {
            if a.ptr_eq(b) {
                return true;
            }
            match (&a.0, &b.0) {
                (Some(x), Some(y)) => {
                    if x.ty != y.ty {
                        return false;
                    }
                    a = &x.rest;
                    b = &y.rest;
                }
                _ => return false,
            }
        }
    }
}

impl Eq for Ctxt {}

impl Hash for Ctxt {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.len().hash(state);
        for t in self.types() {
            t.hash(state);
        }
    }
}

impl fmt::Display for Ctxt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(•")?;
        for t in self.types() {
            write!(f, ", {t}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Ctxt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A well-scoped, well-typed de Bruijn index.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Idx {
    ctxt: Ctxt,
    ty: Ty,
    depth: usize,
}

impl Idx {
    pub fn new(ctxt: &Ctxt, depth: usize) -> Result<Idx> {
        let ty = ctxt.lookup(depth).ok_or(Error::IndexOutOfRange {
            depth,
            len: ctxt.len(),
        })?;
        Ok(Idx {
            ty: ty.clone(),
            ctxt: ctxt.clone(),
            depth,
        })
    }

    /// Index zero in `(ctxt, ty)`.
    pub fn zero(ctxt: &Ctxt, ty: Ty) -> Idx {
        Idx {
            ctxt: ctxt.snoc(ty.clone()),
            ty,
            depth: 0,
        }
    }

    /// The same variable seen in `ctxt` extended by one more type.
    pub fn succ(&self, ty: Ty) -> Idx {
        Idx {
            ctxt: self.ctxt.snoc(ty),
            ty: self.ty.clone(),
            depth: self.depth + 1,
        }
    }

    pub(crate) fn in_ctxt_unchecked(ctxt: Ctxt, ty: Ty, depth: usize) -> Idx {
        debug_assert_eq!(ctxt.lookup(depth), Some(&ty));
        Idx { ctxt, ty, depth }
    }

    pub fn ctxt(&self) -> &Ctxt {
        &self.ctxt
    }

    pub fn ty(&self) -> &Ty {
        &self.ty
    }

    pub fn depth(&self) -> usize {
        self.depth
    }
}

impl fmt::Debug for Idx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.depth)
    }
}

/// Term constructors.
#[derive(Clone)]
pub enum TmNode {
    Var(Idx),
    App(Tm, Tm),
    Abs(Tm),
}

struct TmData {
    ctxt: Ctxt,
    ty: Ty,
    node: TmNode,
    fingerprint: u64,
    size: usize,
}

/// An intrinsically typed term `ctxt ⊢ t : ty`.
#[derive(Clone)]
pub struct Tm(Arc<TmData>);

fn mix(a: u64, b: u64) -> u64 {
    (a.rotate_left(5) ^ b).wrapping_mul(0x517c_c1b7_2722_0a95)
}

impl Tm {
    fn build(ctxt: Ctxt, ty: Ty, node: TmNode) -> Tm {
        let (fingerprint, size) = match &node {
            TmNode::Var(i) => (mix(1, i.depth as u64), 1),
            TmNode::App(f, a) => (mix(mix(2, f.0.fingerprint), a.0.fingerprint), 1 + f.size() + a.size()),
            TmNode::Abs(b) => {
                let dom = ty.as_arr().map_or(0, |(d, _)| d.fingerprint());
                (mix(mix(3, dom), b.0.fingerprint), 1 + b.size())
            }
        };
        Tm(Arc::new(TmData {
            ctxt,
            ty,
            node,
            fingerprint,
            size,
        }))
    }

    pub fn var(i: Idx) -> Tm {
        Tm::build(i.ctxt.clone(), i.ty.clone(), TmNode::Var(i))
    }

    /// The variable at `depth` in `ctxt`.
    pub fn var_at(ctxt: &Ctxt, depth: usize) -> Result<Tm> {
        Ok(Tm::var(Idx::new(ctxt, depth)?))
    }

    pub fn app(fun: Tm, arg: Tm) -> Result<Tm> {
        if fun.ctxt() != arg.ctxt() {
            return Err(Error::TypeMismatch(format!(
                "application across contexts {} and {}",
                fun.ctxt(),
                arg.ctxt()
            )));
        }
        let cod = match fun.ty().as_arr() {
            Some((dom, cod)) if dom == arg.ty() => cod.clone(),
            Some((dom, _)) => {
                return Err(Error::TypeMismatch(format!(
                    "function expects {dom} but argument has type {}",
                    arg.ty()
                )))
            }
            None => {
                return Err(Error::TypeMismatch(format!(
                    "applying a term of non-function type {}",
                    fun.ty()
                )))
            }
        };
        Ok(Tm::build(fun.ctxt().clone(), cod, TmNode::App(fun, arg)))
    }

    /// Abstracts the innermost variable of `body`'s context.
    pub fn abs(body: Tm) -> Result<Tm> {
        let (outer, dom) = body
            .ctxt()
            .split_last()
            .ok_or_else(|| Error::CtxtMismatch("abstraction over an empty context".into()))?;
        let ty = Ty::arr(dom.clone(), body.ty().clone());
        Ok(Tm::build(outer.clone(), ty, TmNode::Abs(body)))
    }

    pub(crate) fn app_unchecked(fun: Tm, arg: Tm) -> Tm {
        debug_assert!(fun.ctxt() == arg.ctxt());
        let cod = match fun.ty() {
            Ty::Arr(dom, cod) => {
                debug_assert!(**dom == *arg.ty());
                (**cod).clone()
            }
            Ty::Iota => unreachable!("app_unchecked on a non-function"),
        };
        Tm::build(fun.ctxt().clone(), cod, TmNode::App(fun, arg))
    }

    /// `outer` must be `body.ctxt()` without its last entry; passing it keeps
    /// context sharing intact.
    pub(crate) fn abs_unchecked(outer: &Ctxt, body: Tm) -> Tm {
        let (rest, dom) = body.ctxt().split_last().expect("abs_unchecked over an empty context");
        debug_assert!(rest == outer);
        let ty = Ty::arr(dom.clone(), body.ty().clone());
        Tm::build(outer.clone(), ty, TmNode::Abs(body))
    }

    pub fn ctxt(&self) -> &Ctxt {
        &self.0.ctxt
    }

    pub fn ty(&self) -> &Ty {
        &self.0.ty
    }

    pub fn node(&self) -> &TmNode {
        &self.0.node
    }

    /// Number of constructor nodes.
    pub fn size(&self) -> usize {
        self.0.size
    }

    /// Constructor nesting depth; a variable has depth 1.
    pub fn depth(&self) -> usize {
        match self.node() {
            TmNode::Var(_) => 1,
            TmNode::App(f, a) => 1 + f.depth().max(a.depth()),
            TmNode::Abs(b) => 1 + b.depth(),
        }
    }

    pub fn ptr_eq(&self, other: &Tm) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// Re-checks every typing invariant recursively.
    pub fn validate(&self) -> Result<()> {
        match self.node() {
            TmNode::Var(i) => {
                if i.ctxt != *self.ctxt() || i.ty != *self.ty() {
                    return Err(Error::TypeMismatch(format!("variable #{} is mis-annotated", i.depth)));
                }
                if i.ctxt.lookup(i.depth) != Some(&i.ty) {
                    return Err(Error::TypeMismatch(format!("variable #{} has the wrong type", i.depth)));
                }
            }
            TmNode::App(f, a) => {
                f.validate()?;
                a.validate()?;
                if f.ctxt() != self.ctxt() || a.ctxt() != self.ctxt() {
                    return Err(Error::CtxtMismatch("application operands live elsewhere".into()));
                }
                if *f.ty() != Ty::arr(a.ty().clone(), self.ty().clone()) {
                    return Err(Error::TypeMismatch("application is mis-annotated".into()));
                }
            }
            TmNode::Abs(b) => {
                b.validate()?;
                let (dom, cod) = self
                    .ty()
                    .as_arr()
                    .ok_or_else(|| Error::TypeMismatch("abstraction at base type".into()))?;
                if *b.ctxt() != self.ctxt().snoc(dom.clone()) || b.ty() != cod {
                    return Err(Error::TypeMismatch("abstraction body is mis-annotated".into()));
                }
            }
        }
        Ok(())
    }
}

/// Structural identity of de Bruijn terms, which is α-equivalence.
pub fn alpha_eq(t: &Tm, u: &Tm) -> bool {
    t == u
}

fn node_eq(t: &Tm, u: &Tm) -> bool {
    if t.ptr_eq(u) {
        return true;
    }
    if t.0.fingerprint != u.0.fingerprint || t.size() != u.size() {
        return false;
    }
    match (t.node(), u.node()) {
        (TmNode::Var(i), TmNode::Var(j)) => i.depth == j.depth,
        (TmNode::App(f, a), TmNode::App(g, b)) => node_eq(f, g) && node_eq(a, b),
        // Below a shared context, an abstraction's domain is the only
        // annotation not determined by its subterms.
        (TmNode::Abs(b), TmNode::Abs(c)) => {
            t.ty().as_arr().map(|p| p.0) == u.ty().as_arr().map(|p| p.0) && node_eq(b, c)
        }
        _ => false,
    }
}

impl PartialEq for Tm {
    fn eq(&self, other: &Tm) -> bool {
        self.ptr_eq(other) || (self.ty() == other.ty() && self.ctxt() == other.ctxt() && node_eq(self, other))
    }
}

impl Eq for Tm {}

impl Hash for Tm {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.fingerprint);
    }
}

impl fmt::Display for Tm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node() {
            TmNode::Var(i) => write!(f, "#{}", i.depth),
            TmNode::App(g, a) => write!(f, "({g} {a})"),
            TmNode::Abs(b) => {
                let dom = self.ty().as_arr().map(|p| p.0.clone()).unwrap_or(Ty::Iota);
                write!(f, "(\\:{dom}. {b})")
            }
        }
    }
}

impl fmt::Debug for Tm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} : {} ⊢ {}", self.ctxt(), self.ty())
    }
}
