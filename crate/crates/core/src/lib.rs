//! Certified normalization by evaluation for the simply typed λ-calculus.
//!
//! Terms are intrinsically scoped and typed de Bruijn terms ([`syntax`]).
//! Renamings and substitutions are explicit lists ([`renaming`],
//! [`substitution`]); the Cartesian pre-closed structure of contexts lives in
//! [`preclosure`]. Two normalizers are provided: the Kripke-style evaluator
//! in [`nbe`], and the glued evaluator in [`glue`], which additionally emits
//! a βη-conversion certificate ([`conversion`]) linking every input to its
//! normal form. [`pcatlab`] contains the law-check harness, enumerators,
//! generators, and an independent rewrite-based conversion oracle.

pub mod church;
pub mod conversion;
pub mod error;
pub mod glue;
pub mod json;
pub mod nbe;
pub mod pcatlab;
pub mod preclosure;
pub mod renaming;
pub mod substitution;
pub mod syntax;

pub use conversion::{check_deriv, check_subst_deriv, deriv_refl, Deriv, DerivNode, SubstDeriv};
pub use error::{Error, Result};
pub use glue::{decide_conv, nf4, nf4_subst, NfResult};
pub use nbe::{nf3, nf3_subst};
pub use renaming::{rename, shift, Rnm};
pub use substitution::{beta_subst, hcomp_rs, hcomp_sr, lift_rnm, subst, Subst};
pub use syntax::{alpha_eq, Ctxt, Idx, Tm, TmNode, Ty};
