//! Finite partial equivalence relations and their combinators.

use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

use super::report::LawReport;

/// Elements of finite carriers. Function elements are explicit tables
/// indexed by the position of the argument in the domain carrier.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    Atom(u32),
    Unit,
    Pair(Box<Elem>, Box<Elem>),
    Table(Vec<Elem>),
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elem::Atom(n) => write!(f, "{n}"),
            Elem::Unit => f.write_str("()"),
            Elem::Pair(a, b) => write!(f, "({a}, {b})"),
            Elem::Table(xs) => {
                f.write_str("[")?;
                for (k, x) in xs.iter().enumerate() {
                    if k > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str("]")
            }
        }
    }
}

type Rel = dyn Fn(&Elem, &Elem) -> bool + Send + Sync;

/// A binary relation on a finite carrier, intended to be a PER.
#[derive(Clone)]
pub struct PerRel {
    name: String,
    carrier: Vec<Elem>,
    rel: Arc<Rel>,
}

impl PerRel {
    /// An arbitrary relation; [`check_per`] decides whether it is a PER.
    pub fn new<F>(name: impl Into<String>, carrier: Vec<Elem>, rel: F) -> PerRel
    where
        F: Fn(&Elem, &Elem) -> bool + Send + Sync + 'static,
    {
        PerRel {
            name: name.into(),
            carrier,
            rel: Arc::new(rel),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn carrier(&self) -> &[Elem] {
        &self.carrier
    }

    pub fn related(&self, a: &Elem, b: &Elem) -> bool {
        (self.rel)(a, b)
    }

    /// Elements related to themselves.
    pub fn domain(&self) -> Vec<Elem> {
        self.carrier.iter().filter(|a| self.related(a, a)).cloned().collect()
    }
}

impl fmt::Debug for PerRel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PerRel({}, |carrier| = {})", self.name, self.carrier.len())
    }
}

/// Atoms `0..n`.
pub fn atoms(n: u32) -> Vec<Elem> {
    (0..n).map(Elem::Atom).collect()
}

/// Identity on the carrier.
pub fn per_discrete(carrier: Vec<Elem>) -> PerRel {
    let name = format!("discrete[{}]", carrier.len());
    PerRel::new(name, carrier, |a, b| a == b)
}

pub fn per_unit() -> PerRel {
    PerRel::new("unit", vec![Elem::Unit], |_, _| true)
}

/// Componentwise relation on pairs.
pub fn per_prod(a: &PerRel, b: &PerRel) -> PerRel {
    let carrier = a
        .carrier
        .iter()
        .flat_map(|x| b.carrier.iter().map(move |y| Elem::Pair(Box::new(x.clone()), Box::new(y.clone()))))
        .collect();
    let (ra, rb) = (a.rel.clone(), b.rel.clone());
    PerRel::new(format!("({} x {})", a.name, b.name), carrier, move |p, q| match (p, q) {
        (Elem::Pair(x, y), Elem::Pair(x2, y2)) => ra(x, x2) && rb(y, y2),
        _ => false,
    })
}

/// All tables `a.carrier → b.carrier`; `f ~ g` iff related arguments go to
/// related results. The carrier has `|b|^|a|` elements.
pub fn per_arrow(a: &PerRel, b: &PerRel) -> PerRel {
    let mut tables: Vec<Vec<Elem>> = vec![Vec::new()];
    for _ in &a.carrier {
        tables = tables
            .into_iter()
            .flat_map(|t| {
                b.carrier.iter().map(move |y| {
                    let mut t = t.clone();
                    t.push(y.clone());
                    t
                })
            })
            .collect();
    }
    let carrier = tables.into_iter().map(Elem::Table).collect();
    let dom = a.carrier.clone();
    let (ra, rb) = (a.rel.clone(), b.rel.clone());
    let related_args: Vec<(usize, usize)> = (0..dom.len())
        .flat_map(|i| (0..dom.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| ra(&dom[i], &dom[j]))
        .collect();
    PerRel::new(format!("({} -> {})", a.name, b.name), carrier, move |f, g| match (f, g) {
        (Elem::Table(f), Elem::Table(g)) => related_args.iter().all(|&(i, j)| rb(&f[i], &g[j])),
        _ => false,
    })
}

/// Restriction of `a` to the elements satisfying `pred`.
pub fn per_sub<P>(a: &PerRel, name: &str, pred: P) -> PerRel
where
    P: Fn(&Elem) -> bool + Send + Sync + 'static,
{
    let ra = a.rel.clone();
    PerRel::new(format!("{{{} | {name}}}", a.name), a.carrier.clone(), move |x, y| {
        ra(x, y) && pred(x) && pred(y)
    })
}

/// Every PER on `carrier`, as partial partitions in a fixed order.
pub fn enum_pers(carrier: &[Elem]) -> Vec<PerRel> {
    // class[k] = None (outside the domain) or Some(block), blocks numbered
    // in order of first appearance
    fn go(n: usize, acc: &mut Vec<Option<usize>>, blocks: usize, out: &mut Vec<Vec<Option<usize>>>) {
        if acc.len() == n {
            out.push(acc.clone());
            return;
        }
        acc.push(None);
        go(n, acc, blocks, out);
        acc.pop();
        for b in 0..=blocks {
            acc.push(Some(b));
            go(n, acc, blocks.max(b + 1), out);
            acc.pop();
        }
    }
    let mut labelings = Vec::new();
    go(carrier.len(), &mut Vec::new(), 0, &mut labelings);
    labelings
        .into_iter()
        .map(|lab| {
            let name = lab
                .iter()
                .map(|c| c.map_or("_".to_string(), |b| b.to_string()))
                .collect::<String>();
            let elems = carrier.to_vec();
            PerRel::new(format!("per<{name}>"), carrier.to_vec(), move |x, y| {
                let pos = |e: &Elem| elems.iter().position(|z| z == e);
                match (pos(x), pos(y)) {
                    (Some(i), Some(j)) => lab[i].is_some() && lab[i] == lab[j],
                    _ => false,
                }
            })
        })
        .collect()
}

/// Exhaustively checks symmetry and transitivity on the carrier.
pub fn check_per(r: &PerRel) -> LawReport {
    let mut report = LawReport::new(format!("per:{}", r.name));
    let c = &r.carrier;
    let n = c.len();
    let mut rel = vec![false; n * n];
    for i in 0..n {
        for j in 0..n {
            rel[i * n + j] = r.related(&c[i], &c[j]);
        }
    }
    for i in 0..n {
        for j in 0..n {
            report.case();
            if rel[i * n + j] && !rel[j * n + i] {
                report.fail("symmetry", json!({ "pair": [c[i].to_string(), c[j].to_string()] }));
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if !rel[i * n + j] {
                report.cases += n;
                continue;
            }
            for k in 0..n {
                report.case();
                if rel[j * n + k] && !rel[i * n + k] {
                    report.fail(
                        "transitivity",
                        json!({ "triple": [c[i].to_string(), c[j].to_string(), c[k].to_string()] }),
                    );
                }
            }
        }
    }
    report
}

/// Summary of a PER for reports: carrier size and domain size.
pub fn describe(r: &PerRel) -> Value {
    json!({ "name": r.name, "carrier": r.carrier.len(), "domain": r.domain().len() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discrete_relates_only_identical_atoms() {
        let d = per_discrete(atoms(2));
        assert!(d.related(&Elem::Atom(0), &Elem::Atom(0)));
        assert!(!d.related(&Elem::Atom(0), &Elem::Atom(1)));
        assert!(check_per(&d).passed());
    }

    #[test]
    fn unit_has_one_self_related_element() {
        let u = per_unit();
        assert_eq!(u.domain(), vec![Elem::Unit]);
    }

    #[test]
    fn arrow_over_booleans_is_pointwise_equality() {
        let b = per_discrete(atoms(2));
        let f = per_arrow(&b, &b);
        assert_eq!(f.carrier().len(), 4);
        for x in f.carrier() {
            for y in f.carrier() {
                assert_eq!(f.related(x, y), x == y);
            }
        }
    }

    #[test]
    fn sub_is_partial() {
        let s = per_sub(&per_discrete(atoms(3)), "even", |e| matches!(e, Elem::Atom(n) if n % 2 == 0));
        assert!(!s.related(&Elem::Atom(1), &Elem::Atom(1)));
        assert!(s.related(&Elem::Atom(2), &Elem::Atom(2)));
        assert_eq!(s.domain(), vec![Elem::Atom(0), Elem::Atom(2)]);
        assert!(check_per(&s).passed());
    }

    #[test]
    fn asymmetric_relation_is_reported() {
        let lt = PerRel::new("lt", atoms(2), |a, b| a < b);
        let rep = check_per(&lt);
        assert!(!rep.passed());
        assert_eq!(rep.failures[0].law, "symmetry");
        assert_eq!(rep.failures[0].counterexample, json!({ "pair": ["0", "1"] }));
    }

    #[test]
    fn counts_of_pers() {
        // sum of Bell numbers over subsets: B(n + 1)
        assert_eq!(enum_pers(&atoms(1)).len(), 2);
        assert_eq!(enum_pers(&atoms(2)).len(), 5);
        assert_eq!(enum_pers(&atoms(3)).len(), 15);
        assert!(enum_pers(&atoms(3)).iter().all(|r| check_per(r).passed()));
    }
}
