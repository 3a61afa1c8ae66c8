use catnf::church;
use catnf::pcatlab::per::{atoms, enum_pers, Elem};
use catnf::pcatlab::*;
use catnf::{decide_conv, nf4, Ctxt, Tm, Ty};

fn bounds() -> LawBounds {
    LawBounds {
        type_depth: 2,
        ctxt_len: 1,
        term_depth: 3,
        subst_depth: 2,
        triple_ctxt_len: 1,
        fuel: 12,
    }
}

#[test]
fn no_closed_base_terms_exhaustively() {
    for depth in 0..=6 {
        assert!(enum_terms(&Ctxt::nil(), &Ty::Iota, depth).unwrap().is_empty());
    }
}

#[test]
fn arrow_of_pers_is_a_per() {
    for n in 1..=3 {
        for m in 1..=3 {
            for a in enum_pers(&atoms(n)) {
                for b in enum_pers(&atoms(m)) {
                    let rep = check_per(&per_arrow(&a, &b));
                    assert!(rep.passed(), "{:?} -> {:?}: {}", a, b, rep.to_json());
                }
            }
        }
    }
}

#[test]
fn sub_per_is_partial() {
    let even = per_sub(&per_discrete(atoms(3)), "even", |e| matches!(e, Elem::Atom(k) if k % 2 == 0));
    assert!(!even.related(&Elem::Atom(1), &Elem::Atom(1)));
    assert!(check_per(&even).passed());
    assert!(check_per(&per_prod(&even, &per_unit())).passed());
}

#[test]
fn renaming_category_at_length_two() {
    let mut b = bounds();
    b.ctxt_len = 2;
    b.triple_ctxt_len = 2;
    let rep = laws_rnm_category(&b).unwrap();
    assert!(rep.passed() && rep.cases > 1000, "{}", rep.to_json());
}

#[test]
fn exponential_laws_via_decide_conv() {
    let rep = laws_ccc(&bounds()).unwrap();
    assert!(rep.passed() && rep.cases > 0, "{}", rep.to_json());
}

#[test]
fn decide_conv_matches_the_oracle() {
    let (rep, inconclusive) = laws_oracle(&bounds()).unwrap();
    assert!(rep.passed(), "{}", rep.to_json());
    assert_eq!(inconclusive, 0);
}

#[test]
fn eta_redex_under_binder() {
    let g = Ctxt::nil().snoc(Ty::Iota);
    let id = Tm::abs(Tm::var_at(&g, 0).unwrap()).unwrap();
    let body = Tm::app(catnf::shift(&id, Ty::Iota), Tm::var_at(&g, 0).unwrap()).unwrap();
    let expanded = Tm::abs(body).unwrap();
    assert!(decide_conv(&id, &expanded).unwrap());
    assert_eq!(conv_oracle(&id, &expanded, 4), Ok(true));
}

#[test]
fn church_successor_chain() {
    for n in 1..6 {
        let r = nf4(&church::succ_chain(n)).unwrap();
        assert_eq!(r.nf, church::numeral(n));
        r.verify().unwrap();
    }
}

#[test]
fn mutated_composition_yields_counterexample() {
    let mut b = bounds();
    b.ctxt_len = 2;
    b.triple_ctxt_len = 2;
    b.term_depth = 2;
    let rep = laws_actions_with(&b, off_by_one_compose).unwrap();
    assert!(!rep.passed());
    assert!(rep.failures.iter().all(|f| f.law == "subst_compose"));
}
