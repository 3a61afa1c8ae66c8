//! Church numerals over the base type, used as fixtures.

use crate::syntax::{Ctxt, Tm, Ty};

/// `o -> o`
pub fn endo() -> Ty {
    Ty::arr(Ty::Iota, Ty::Iota)
}

/// `(o -> o) -> o -> o`
pub fn nat() -> Ty {
    Ty::arr(endo(), endo())
}

fn var(g: &Ctxt, depth: usize) -> Tm {
    Tm::var_at(g, depth).expect("fixture variable in scope")
}

fn app(f: Tm, a: Tm) -> Tm {
    Tm::app(f, a).expect("fixture application is well typed")
}

fn abs(b: Tm) -> Tm {
    Tm::abs(b).expect("fixture abstraction has a binder")
}

/// `\f. f`, the numeral one before η-expansion.
pub fn one() -> Tm {
    abs(var(&Ctxt::nil().snoc(endo()), 0))
}

/// `\n. \f. \x. f (n f x)`
pub fn succ() -> Tm {
    let g = Ctxt::from_types([nat(), endo(), Ty::Iota]);
    let inner = app(app(var(&g, 2), var(&g, 1)), var(&g, 0));
    abs(abs(abs(app(var(&g, 1), inner))))
}

/// `\f. \x. f (f (... (f x)))` with `n` applications: the η-long numeral.
pub fn numeral(n: usize) -> Tm {
    let g = Ctxt::from_types([endo(), Ty::Iota]);
    let mut body = var(&g, 0);
    for _ in 0..n {
        body = app(var(&g, 1), body);
    }
    abs(abs(body))
}

/// `succ` applied `n - 1` times to `one`.
pub fn succ_chain(n: usize) -> Tm {
    let mut t = one();
    for _ in 1..n {
        t = app(succ(), t);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_well_typed() {
        one().validate().unwrap();
        succ().validate().unwrap();
        assert_eq!(*succ().ty(), Ty::arr(nat(), nat()));
        assert_eq!(*succ_chain(3).ty(), nat());
        assert_eq!(numeral(2).to_string(), "(\\:o->o. (\\:o. (#1 (#1 #0))))");
    }
}
