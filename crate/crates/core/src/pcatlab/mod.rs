//! Finite-instance laboratory: PER combinators, exhaustive enumerators, a
//! rewrite-based conversion oracle, random generators and law suites.

pub mod enumerate;
pub mod gen;
pub mod oracle;
pub mod per;
pub mod report;

pub use enumerate::{enum_ctxts, enum_rnms, enum_substs, enum_terms, enum_types};
pub use oracle::conv_oracle;
pub use per::{check_per, per_arrow, per_discrete, per_prod, per_sub, per_unit, Elem, PerRel};
pub use report::{Failure, LawReport};
pub mod laws;

pub use laws::{
    laws_actions, laws_actions_with, laws_ccc, laws_cartesian, laws_oracle, laws_qu_naturality,
    laws_rnm_category, laws_subst_category, nf3_subst_curried, compare_subst_forms, off_by_one_compose,
    run_all, LawBounds, SubstForms,
};
