//! Exact rational scalar and matrix arithmetic: Hermite and Smith normal
//! forms, inversion, determinants, kernels, LDL^T factorization, Schur
//! complements, and a small exact-rational simplex solver.
//!
//! No floating point anywhere; every equality downstream is checked
//! bit-exactly on normalized rationals.

mod lp;
mod matrix;
mod rat;

pub use lp::{solve_standard_lp, LpOutcome};
pub use matrix::{hnf, kernel_basis, ldlt, schur_complement, snf, IntMatrix, RatMatrix};
pub use rat::{
    ball_volume_lb, format_rat, hermite_pow_ub, int, int_sqrt_floor, is_perfect_square,
    parse_rat, rat, rat_i, sqrt_lower, sqrt_upper, Int, Rat, PI_LB, PI_UB,
};
