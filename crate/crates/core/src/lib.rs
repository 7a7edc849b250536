//! Exact computation with multivariate polynomial matrices: minors and their
//! gcd chains, reduced minors, Smith forms, and a decision procedure for
//! equivalence of a matrix to its Smith form when the determinant (or the
//! rank-order gcd) falls in the first variable alone.
//!
//! Coefficients live in an exact field, the rationals or GF(p), so every
//! result is exact; nothing here is numerical. All randomized pieces take
//! explicit seeds and are deterministic.

pub mod cli;
pub mod context;
pub mod equivalence;
pub mod error;
pub mod ideal;
pub mod matrix;
pub mod parse;
pub mod poly;
pub mod scalar;
pub mod smith;

pub use cli::{parse_matrix_file, parse_matrix_str, run_command, CommandOutput, MatrixDocument};
pub use context::{Monomial, MonomialOrder, VarContext};
pub use equivalence::{
    check_equivalence_invariants, decide, decide_with, random_matrix, random_smith_instance,
    random_smith_instance_with, random_unimodular, verify_cauchy_binet, verify_multiplicativity,
    EquivalenceReport, InvariantReport, MismatchKind, MultOrderCheck, Multiplicativity,
    OrderRecord, Verdict,
};
pub use error::{Error, Result};
pub use ideal::{groebner, is_unit_ideal, normal_form, unit_cofactors, IdealBasis};
pub use matrix::{ElementaryOp, MinorProfile, PolyMatrix};
pub use parse::parse_polynomial;
pub use poly::{gcd, gcd_many, Polynomial};
pub use scalar::{Field, Scalar};
pub use smith::{
    factor_univariate, factor_univariate_with, smith_candidate, smith_univariate,
    smith_wrt_prime, FactorOptions, PrimeFactorization, PrimeSmithProfile, SmithForm,
    TransformPair,
};
