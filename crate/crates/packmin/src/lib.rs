//! Exact-arithmetic computation of packing minima, successive minima, lattice
//! width and lattice point counts of convex bodies with respect to lattices.
//!
//! All values are arbitrary-precision rationals. Euclidean lengths under a
//! Gram form, which are square roots of rationals, are carried in squared
//! form and compared exactly; nothing is ever rounded to floating point.

pub mod bodies;
pub mod counting;
pub mod families;
pub mod lattices;
pub mod minima;
pub mod ratlin;

use std::sync::atomic::{AtomicU64, Ordering};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("columns are linearly dependent")]
    RankDeficient,
    #[error("rank out of range: {0}")]
    RankOutOfRange(usize),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("origin is not interior to the body")]
    OriginNotInterior,
    #[error("unsupported body representation for this operation")]
    UnsupportedRepresentation,
    #[error("dimension too large for this operation: {0}")]
    DimensionTooLarge(usize),
    #[error("enumeration node budget exceeded")]
    BudgetExceeded,
    #[error("incompatible body/lattice kinds: {0}")]
    IncompatibleKinds(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Shared node budget for branch-and-bound enumeration. Exceeding the budget
/// is a reported error, never a silent truncation.
#[derive(Debug)]
pub struct Budget {
    limit: u64,
    used: AtomicU64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget { limit, used: AtomicU64::new(0) }
    }

    /// Charge `n` nodes against the budget.
    pub fn charge(&self, n: u64) -> Result<()> {
        let prev = self.used.fetch_add(n, Ordering::Relaxed);
        if prev.saturating_add(n) > self.limit {
            return Err(Error::BudgetExceeded);
        }
        Ok(())
    }

    pub fn used(&self) -> u64 {
        self.used.load(Ordering::Relaxed)
    }
}

pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;

/// Execution context: enumeration budget and worker count. Results are
/// identical for every thread count; workers only split independent subtree
/// evaluations whose reduction is an associative, deterministically
/// tie-broken max.
#[derive(Debug)]
pub struct Ctx {
    pub budget: Budget,
    pub threads: usize,
}

impl Ctx {
    pub fn new(budget_limit: u64, threads: usize) -> Self {
        Ctx { budget: Budget::new(budget_limit), threads: threads.max(1) }
    }
}

impl Default for Ctx {
    fn default() -> Self {
        Ctx::new(DEFAULT_NODE_BUDGET, 1)
    }
}
