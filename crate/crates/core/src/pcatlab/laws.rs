//! Exhaustive finite-instance law suites for the context categories, their
//! actions on terms, the Cartesian and pre-exponential structure, and the
//! renaming naturality of reify/reflect.
//!
//! Laws for the βη-quotient compare substitutions entrywise with
//! [`decide_conv`]; that makes them consistency checks of the normalizer
//! against the structure, not independent proofs.

use std::collections::HashMap;

use serde_json::json;

use super::enumerate::{enum_ctxts, enum_rnms, enum_substs_with, enum_types, TermEnum};
use super::oracle::{meet, reachable, Reachable};
use super::report::{ctxts_json, rnm_json, subst_json, tms_json, LawReport};
use crate::conversion::check_subst_deriv;
use crate::error::{Error, Result};
use crate::glue::{decide_conv, nf4};
use crate::nbe::{nf3, reflect, reify, restrict, Sem};
use crate::preclosure::{
    ctxt_concat, curry, curry_uncurry_cert, exp_ctxt, pair, proj1, proj2, rnm_pair, uncurry,
    uncurry_curry_cert,
};
use crate::renaming::{rename, Rnm};
use crate::substitution::{hcomp_rs, hcomp_sr, lift_rnm, subst, Subst};
use crate::syntax::{alpha_eq, Ctxt, Tm, Ty};

/// Bounds of the exhaustive enumerations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawBounds {
    /// Maximal depth of context entries and term types.
    pub type_depth: usize,
    /// Maximal context length.
    pub ctxt_len: usize,
    /// Maximal depth of the terms acted upon.
    pub term_depth: usize,
    /// Maximal depth of substitution entries.
    pub subst_depth: usize,
    /// Maximal context length for laws quantifying over three morphisms.
    pub triple_ctxt_len: usize,
    /// Oracle search depth.
    pub fuel: usize,
}

impl Default for LawBounds {
    fn default() -> Self {
        LawBounds {
            type_depth: 2,
            ctxt_len: 2,
            term_depth: 3,
            subst_depth: 2,
            triple_ctxt_len: 2,
            fuel: 8,
        }
    }
}

impl LawBounds {
    /// Overrides one field from a `key=value` pair.
    pub fn set(&mut self, key: &str, value: usize) -> Result<()> {
        if value == 0 && key != "type_depth" {
            return Err(Error::BudgetExceeded(format!("bound {key} must be positive")));
        }
        match key {
            "type_depth" => self.type_depth = value,
            "ctxt_len" => self.ctxt_len = value,
            "term_depth" => self.term_depth = value,
            "subst_depth" => self.subst_depth = value,
            "triple_ctxt_len" => self.triple_ctxt_len = value,
            "fuel" => self.fuel = value,
            other => return Err(Error::BudgetExceeded(format!("unknown bound {other}"))),
        }
        Ok(())
    }
}

/// Shared enumerations for one run of the suites.
struct Universe {
    b: LawBounds,
    types: Vec<Ty>,
    ctxts: Vec<Ctxt>,
    te: TermEnum,
    substs: HashMap<(Ctxt, Ctxt), Vec<Subst>>,
}

impl Universe {
    fn new(b: &LawBounds) -> Result<Universe> {
        Ok(Universe {
            b: b.clone(),
            types: enum_types(b.type_depth)?,
            ctxts: enum_ctxts(b.ctxt_len, b.type_depth)?,
            te: TermEnum::new(b.type_depth),
            substs: HashMap::new(),
        })
    }

    fn small_ctxts(&self) -> Vec<Ctxt> {
        let n = self.b.triple_ctxt_len;
        self.ctxts.iter().filter(|g| g.len() <= n).cloned().collect()
    }

    /// All terms over `g` of every enumerated type.
    fn terms(&mut self, g: &Ctxt) -> Result<Vec<Tm>> {
        let mut out = Vec::new();
        for t in self.types.clone() {
            out.extend(self.te.terms(g, &t, self.b.term_depth)?);
        }
        Ok(out)
    }

    /// Hom tables between the small contexts, indexed by position.
    fn homs(&mut self) -> Result<Homs> {
        let ctxts = self.small_ctxts();
        let n = ctxts.len();
        let mut rn = Vec::with_capacity(n * n);
        let mut sb = Vec::with_capacity(n * n);
        for g in &ctxts {
            for d in &ctxts {
                rn.push(enum_rnms(g, d)?);
                sb.push(self.substs(g, d)?);
            }
        }
        Ok(Homs { ctxts, rn, sb })
    }

    fn substs(&mut self, g: &Ctxt, d: &Ctxt) -> Result<Vec<Subst>> {
        let key = (g.clone(), d.clone());
        if let Some(v) = self.substs.get(&key) {
            return Ok(v.clone());
        }
        let v = enum_substs_with(&mut self.te, g, d, self.b.subst_depth)?;
        self.substs.insert(key, v.clone());
        Ok(v)
    }
}

struct Homs {
    ctxts: Vec<Ctxt>,
    rn: Vec<Vec<Rnm>>,
    sb: Vec<Vec<Subst>>,
}

impl Homs {
    fn len(&self) -> usize {
        self.ctxts.len()
    }

    fn rnms(&self, src: usize, tgt: usize) -> &[Rnm] {
        &self.rn[src * self.len() + tgt]
    }

    fn substs(&self, src: usize, tgt: usize) -> &[Subst] {
        &self.sb[src * self.len() + tgt]
    }
}

/// Composition of substitutions, replaceable for negative controls.
pub type SubstCompose = fn(&Subst, &Subst) -> Result<Subst>;

fn compose_subst(s: &Subst, t: &Subst) -> Result<Subst> {
    s.compose(t)
}

/// A deliberately wrong composition: every entry is read from the next
/// position of the correct result whenever the types allow it.
pub fn off_by_one_compose(s: &Subst, t: &Subst) -> Result<Subst> {
    let good = s.compose(t)?;
    let es = good.entries();
    let n = es.len();
    let entries = (0..n)
        .map(|k| {
            let j = (k + 1) % n;
            if es[j].ty() == es[k].ty() {
                es[j].clone()
            } else {
                es[k].clone()
            }
        })
        .collect();
    Subst::new(good.src().clone(), good.tgt().clone(), entries)
}

fn entrywise_conv(a: &Subst, b: &Subst) -> Result<bool> {
    for (x, y) in a.entries().iter().zip(b.entries()) {
        if !decide_conv(x, y)? {
            return Ok(false);
        }
    }
    Ok(a.len() == b.len())
}

/// Unit and associativity laws for renamings, plus functoriality of lifting.
pub fn laws_rnm_category(b: &LawBounds) -> Result<LawReport> {
    let u = Universe::new(b)?;
    let mut rep = LawReport::new("rnm_category");
    let mut hom: HashMap<(usize, usize), Vec<Rnm>> = HashMap::new();
    for (i, g) in u.ctxts.iter().enumerate() {
        for (j, d) in u.ctxts.iter().enumerate() {
            hom.insert((i, j), enum_rnms(g, d)?);
        }
    }
    for ((i, j), rs) in &hom {
        let (g, d) = (&u.ctxts[*i], &u.ctxts[*j]);
        for r in rs {
            rep.check("left_unit", Rnm::id(d).compose(r)? == *r, || rnm_json(r));
            rep.check("right_unit", r.compose(&Rnm::id(g))? == *r, || rnm_json(r));
        }
        rep.check("terminal", hom[&(*i, 0)].len() == 1, || ctxts_json(&[g]));
        if i == j {
            for t in &u.types {
                let lifted = Rnm::id(g).lift(t.clone());
                rep.check("lift_unit", lifted == Rnm::id(&g.snoc(t.clone())), || ctxts_json(&[g]));
            }
        }
    }
    let small: Vec<usize> = (0..u.ctxts.len()).filter(|&i| u.ctxts[i].len() <= b.triple_ctxt_len).collect();
    for &a in &small {
        for &c in &small {
            for r1 in &hom[&(a, c)] {
                for &d in &small {
                    for r2 in &hom[&(c, d)] {
                        let r21 = r2.compose(r1)?;
                        for t in &u.types {
                            let lhs = r21.lift(t.clone());
                            let rhs = r2.lift(t.clone()).compose(&r1.lift(t.clone()))?;
                            rep.check("lift_functorial", lhs == rhs, || json!([rnm_json(r1), rnm_json(r2)]));
                        }
                        for &e in &small {
                            for r3 in &hom[&(d, e)] {
                                let lhs = r3.compose(&r21)?;
                                let rhs = r3.compose(r2)?.compose(r1)?;
                                rep.check("associativity", lhs == rhs, || {
                                    json!([rnm_json(r1), rnm_json(r2), rnm_json(r3)])
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(rep)
}

/// Unit and associativity laws for substitutions, and the embedding of
/// renamings with both mixed compositions.
pub fn laws_subst_category(b: &LawBounds) -> Result<LawReport> {
    let mut u = Universe::new(b)?;
    let mut rep = LawReport::new("subst_category");
    for g in u.ctxts.clone() {
        for d in u.ctxts.clone() {
            for s in u.substs(&g, &d)? {
                rep.check("left_unit", Subst::id(&d).compose(&s)? == s, || subst_json(&s));
                rep.check("right_unit", s.compose(&Subst::id(&g))? == s, || subst_json(&s));
            }
            rep.check("terminal", u.substs(&g, &Ctxt::nil())?.len() == 1, || ctxts_json(&[&g]));
        }
        rep.check("embed_unit", lift_rnm(&Rnm::id(&g)) == Subst::id(&g), || ctxts_json(&[&g]));
    }
    let h = u.homs()?;
    let n = h.len();
    for a in 0..n {
        for c in 0..n {
            for d in 0..n {
                for r1 in h.rnms(a, c) {
                    for r2 in h.rnms(c, d) {
                        let lhs = lift_rnm(&r2.compose(r1)?);
                        let rhs = lift_rnm(r2).compose(&lift_rnm(r1))?;
                        rep.check("embed_functorial", lhs == rhs, || json!([rnm_json(r1), rnm_json(r2)]));
                    }
                    for s2 in h.substs(c, d) {
                        let lhs = hcomp_sr(s2, r1)?;
                        rep.check("hcomp_sr", lhs == s2.compose(&lift_rnm(r1))?, || {
                            json!([rnm_json(r1), subst_json(s2)])
                        });
                    }
                }
                for s1 in h.substs(a, c) {
                    for r2 in h.rnms(c, d) {
                        let lhs = hcomp_rs(r2, s1)?;
                        rep.check("hcomp_rs", lhs == lift_rnm(r2).compose(s1)?, || {
                            json!([subst_json(s1), rnm_json(r2)])
                        });
                    }
                }
            }
        }
    }
    for c in 0..n {
        for d in 0..n {
            let s1s = h.substs(c, d);
            if s1s.is_empty() {
                continue;
            }
            for a in 0..n {
                let s0s = h.substs(a, c);
                if s0s.is_empty() {
                    continue;
                }
                for e in 0..n {
                    let s2s = h.substs(d, e);
                    for s1 in s1s {
                        let s21: Vec<Subst> = s2s.iter().map(|s2| s2.compose(s1)).collect::<Result<_>>()?;
                        for s0 in s0s {
                            let s10 = s1.compose(s0)?;
                            for (s2, s21) in s2s.iter().zip(&s21) {
                                let lhs = s2.compose(&s10)?;
                                let rhs = s21.compose(s0)?;
                                rep.check("associativity", lhs == rhs, || {
                                    json!([subst_json(s0), subst_json(s1), subst_json(s2)])
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(rep)
}

/// The action laws of renamings and substitutions on terms.
pub fn laws_actions(b: &LawBounds) -> Result<LawReport> {
    laws_actions_with(b, compose_subst)
}

/// [`laws_actions`] with a caller-supplied substitution composition.
pub fn laws_actions_with(b: &LawBounds, compose: SubstCompose) -> Result<LawReport> {
    let mut u = Universe::new(b)?;
    let mut rep = LawReport::new("actions");
    for g in u.ctxts.clone() {
        for t in u.terms(&g)? {
            rep.check("rename_id", rename(&t, &Rnm::id(&g))? == t, || tms_json(&[&t]));
            rep.check("subst_id", subst(&t, &Subst::id(&g))? == t, || tms_json(&[&t]));
        }
    }
    let h = u.homs()?;
    let n = h.len();
    for c in 0..n {
        let ts = u.terms(&h.ctxts[c])?;
        for d in 0..n {
            let r1s = h.rnms(d, c);
            let s1s = h.substs(d, c);
            for r1 in r1s {
                let embedded = lift_rnm(r1);
                for t in &ts {
                    let lhs = rename(t, r1)?;
                    rep.check("rename_is_subst", lhs == subst(t, &embedded)?, || {
                        json!({ "term": tms_json(&[t]), "rnm": rnm_json(r1) })
                    });
                }
            }
            if s1s.is_empty() {
                continue;
            }
            for e in 0..n {
                for r1 in r1s {
                    for r2 in h.rnms(e, d) {
                        let r12 = r1.compose(r2)?;
                        for t in &ts {
                            let lhs = rename(&rename(t, r1)?, r2)?;
                            rep.check("rename_compose", lhs == rename(t, &r12)?, || {
                                json!({ "term": tms_json(&[t]), "first": rnm_json(r1), "second": rnm_json(r2) })
                            });
                        }
                    }
                }
                let s2s = h.substs(e, d);
                for s1 in s1s {
                    let s12: Vec<Subst> = s2s.iter().map(|s2| compose(s1, s2)).collect::<Result<_>>()?;
                    let t1s: Vec<Tm> = ts.iter().map(|t| subst(t, s1)).collect::<Result<_>>()?;
                    for (t, t1) in ts.iter().zip(&t1s) {
                        for (s2, s12) in s2s.iter().zip(&s12) {
                            let lhs = subst(t1, s2)?;
                            let rhs = subst(t, s12)?;
                            rep.check("subst_compose", lhs == rhs, || {
                                json!({
                                    "term": tms_json(&[t]),
                                    "first": subst_json(s1),
                                    "second": subst_json(s2),
                                    "lhs": tms_json(&[&lhs]),
                                    "rhs": tms_json(&[&rhs]),
                                })
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(rep)
}

/// Concatenation with projections and pairing as a product, for
/// renamings and substitutions (exact) and for substitutions up to βη.
pub fn laws_cartesian(b: &LawBounds) -> Result<LawReport> {
    let mut u = Universe::new(b)?;
    let mut rep = LawReport::new("cartesian");
    let small = u.small_ctxts();
    for g in &u.ctxts.clone() {
        for t1 in &small {
            for t2 in &small {
                let (p1, p2) = (proj1(t1, t2), proj2(t1, t2));
                let (q1, q2) = (lift_rnm(&p1), lift_rnm(&p2));
                let cat = ctxt_concat(t1, t2);
                let r1s = enum_rnms(g, t1)?;
                let r2s = enum_rnms(g, t2)?;
                for r1 in &r1s {
                    for r2 in &r2s {
                        let pr = rnm_pair(r1, r2)?;
                        rep.check("rnm_beta1", p1.compose(&pr)? == *r1, || json!([rnm_json(r1), rnm_json(r2)]));
                        rep.check("rnm_beta2", p2.compose(&pr)? == *r2, || json!([rnm_json(r1), rnm_json(r2)]));
                    }
                }
                for r in enum_rnms(g, &cat)? {
                    let back = rnm_pair(&p1.compose(&r)?, &p2.compose(&r)?)?;
                    rep.check("rnm_eta", back == r, || rnm_json(&r));
                }
                let s1s = u.substs(g, t1)?;
                let s2s = u.substs(g, t2)?;
                for s1 in &s1s {
                    for s2 in &s2s {
                        let ps = pair(s1, s2)?;
                        let l1 = q1.compose(&ps)?;
                        let l2 = q2.compose(&ps)?;
                        rep.check("subst_beta1", l1 == *s1, || json!([subst_json(s1), subst_json(s2)]));
                        rep.check("subst_beta2", l2 == *s2, || json!([subst_json(s1), subst_json(s2)]));
                        rep.check("subst_beta1_conv", entrywise_conv(&l1, s1)?, || json!([subst_json(s1)]));
                        rep.check("subst_beta2_conv", entrywise_conv(&l2, s2)?, || json!([subst_json(s2)]));
                    }
                }
                for s in u.substs(g, &cat)? {
                    let back = pair(&q1.compose(&s)?, &q2.compose(&s)?)?;
                    rep.check("subst_eta", back == s, || subst_json(&s));
                }
            }
        }
    }
    Ok(rep)
}

/// The pre-exponential round trips `uncurry ∘ curry` and `curry ∘ uncurry`:
/// certificates validate entrywise with the expected endpoints, and the
/// round trips are identities up to βη.
pub fn laws_ccc(b: &LawBounds) -> Result<LawReport> {
    let mut u = Universe::new(b)?;
    let mut rep = LawReport::new("ccc");
    let small = u.small_ctxts();
    for g in &small {
        for delta in &small {
            let gd = ctxt_concat(g, delta);
            if gd.len() > b.ctxt_len {
                continue;
            }
            for theta in &small {
                for s in u.substs(&gd, theta)? {
                    let round = uncurry(&curry(&s, delta)?, delta)?;
                    rep.check("uncurry_curry_conv", entrywise_conv(&round, &s)?, || subst_json(&s));
                    let ok = match check_subst_deriv(&uncurry_curry_cert(&s, delta)?) {
                        Ok((l, r)) => l == round && r == s,
                        Err(_) => false,
                    };
                    rep.check("uncurry_curry_cert", ok, || json!({ "subst": subst_json(&s), "delta": ctxts_json(&[delta]) }));
                }
                let exp = exp_ctxt(theta, delta);
                for v in u.substs(g, &exp)? {
                    let round = curry(&uncurry(&v, delta)?, delta)?;
                    rep.check("curry_uncurry_conv", entrywise_conv(&round, &v)?, || subst_json(&v));
                    let ok = match check_subst_deriv(&curry_uncurry_cert(&v, delta)?) {
                        Ok((l, r)) => l == round && r == v,
                        Err(_) => false,
                    };
                    rep.check("curry_uncurry_cert", ok, || json!({ "subst": subst_json(&v), "delta": ctxts_json(&[delta]) }));
                }
            }
        }
    }
    Ok(rep)
}

/// Renaming naturality of reify and reflect, of both normalizers, and
/// strictness of reify/reflect at the base type.
pub fn laws_qu_naturality(b: &LawBounds) -> Result<LawReport> {
    let mut u = Universe::new(b)?;
    let mut rep = LawReport::new("qu_naturality");
    for g in u.ctxts.clone() {
        let ts = u.terms(&g)?;
        for t in &ts {
            let reflected = reflect(t);
            if t.ty().is_iota() {
                let strict = matches!(&reflected, Sem::Base(x) if x.ptr_eq(t));
                rep.check("reflect_base_identity", strict, || tms_json(&[t]));
                rep.check("reify_base_identity", reify(&reflected)?.ptr_eq(t), || tms_json(&[t]));
            }
            let qt = reify(&reflected)?;
            let n3 = nf3(t)?;
            for d in u.ctxts.clone() {
                for r in enum_rnms(&d, &g)? {
                    let moved = restrict(&reflected, &lift_rnm(&r))?;
                    rep.check("reflect_natural", reify(&moved)? == rename(&qt, &r)?, || {
                        json!({ "term": tms_json(&[t]), "rnm": rnm_json(&r) })
                    });
                    let tr = rename(t, &r)?;
                    rep.check("reflect_rename", reify(&reflect(&tr))? == rename(&qt, &r)?, || {
                        json!({ "term": tms_json(&[t]), "rnm": rnm_json(&r) })
                    });
                    rep.check("nf3_natural", nf3(&tr)? == rename(&n3, &r)?, || {
                        json!({ "term": tms_json(&[t]), "rnm": rnm_json(&r) })
                    });
                    rep.check("nf4_natural", nf4(&tr)?.nf == rename(&nf4(t)?.nf, &r)?, || {
                        json!({ "term": tms_json(&[t]), "rnm": rnm_json(&r) })
                    });
                }
            }
        }
    }
    Ok(rep)
}

/// Agreement of [`decide_conv`] with the rewrite oracle on all pairs of
/// same-typed terms over contexts of length at most one, counting only the
/// pairs on which the oracle is conclusive.
pub fn laws_oracle(b: &LawBounds) -> Result<(LawReport, usize)> {
    let types = enum_types(b.type_depth)?;
    let mut te = TermEnum::new(b.type_depth);
    let mut rep = LawReport::new("oracle");
    let mut inconclusive = 0;
    for g in enum_ctxts(1.min(b.ctxt_len), b.type_depth)? {
        for ty in &types {
            let ts = te.terms(&g, ty, b.term_depth)?;
            let closures: Vec<Reachable> = ts.iter().map(|t| reachable(t, b.fuel)).collect();
            let nfs: Vec<Tm> = ts.iter().map(|t| nf4(t).map(|r| r.nf)).collect::<Result<_>>()?;
            for i in 0..ts.len() {
                for j in 0..ts.len() {
                    let decided = alpha_eq(&nfs[i], &nfs[j]);
                    match meet(&closures[i], &closures[j]) {
                        Ok(o) => rep.check("decide_conv_matches_oracle", o == decided, || {
                            json!({ "pair": tms_json(&[&ts[i], &ts[j]]), "oracle": o, "decided": decided })
                        }),
                        Err(Error::FuelExhausted) => inconclusive += 1,
                        Err(e) => return Err(e),
                    }
                }
            }
        }
    }
    Ok((rep, inconclusive))
}

/// Comparison of pointwise substitution normalization with the curried
/// route through the pre-exponential.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubstForms {
    /// Substitutions compared.
    pub cases: usize,
    /// Curried output α-equal to the pointwise output.
    pub alpha_equal: usize,
    /// Curried output α-equal to the pointwise output after renormalizing.
    pub renormalized_equal: usize,
    /// Curried output certified βη-equal to the pointwise output, entrywise.
    pub certified: usize,
}

/// `uncurry(nf3_subst(curry(s, Γ)), Γ)` for `s : Γ →sub Δ`: the entries are
/// closed off over the whole source, normalized, and evaluated back.
pub fn nf3_subst_curried(s: &Subst) -> Result<Subst> {
    let g = s.src().clone();
    let closed = crate::nbe::nf3_subst(&curry(s, &g)?)?;
    uncurry(&closed, &g)
}

/// Runs [`nf3_subst_curried`] against [`crate::nbe::nf3_subst`] on every
/// enumerated substitution between small contexts.
pub fn compare_subst_forms(b: &LawBounds) -> Result<SubstForms> {
    let mut u = Universe::new(b)?;
    let mut out = SubstForms {
        cases: 0,
        alpha_equal: 0,
        renormalized_equal: 0,
        certified: 0,
    };
    for g in u.small_ctxts() {
        for d in u.small_ctxts() {
            for s in u.substs(&g, &d)? {
                out.cases += 1;
                let pointwise = crate::nbe::nf3_subst(&s)?;
                let curried = nf3_subst_curried(&s)?;
                if curried == pointwise {
                    out.alpha_equal += 1;
                }
                if crate::nbe::nf3_subst(&curried)? == pointwise {
                    out.renormalized_equal += 1;
                }
                let mut ok = true;
                for (c, p) in curried.entries().iter().zip(pointwise.entries()) {
                    let r = nf4(c)?;
                    ok &= match crate::conversion::check_deriv(&r.cert) {
                        Ok((l, n)) => l == *c && n == *p,
                        Err(_) => false,
                    };
                }
                if ok {
                    out.certified += 1;
                }
            }
        }
    }
    Ok(out)
}

/// Every suite at the given bounds.
pub fn run_all(b: &LawBounds) -> Result<Vec<LawReport>> {
    Ok(vec![
        laws_rnm_category(b)?,
        laws_subst_category(b)?,
        laws_actions(b)?,
        laws_cartesian(b)?,
        laws_ccc(b)?,
        laws_qu_naturality(b)?,
        laws_oracle(b)?.0,
    ])
}
