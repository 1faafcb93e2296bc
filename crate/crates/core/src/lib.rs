//! Exact computations and machine-checkable certificates for (g,k)-Fermat
//! pairs: closed Riemann surfaces `S` with a group `H ≅ Z_k^{2g}` acting
//! freely with quotient of genus `g`.
//!
//! - [`zk`]: linear algebra over Z/k (Howell forms, intersections, invariant subgroups)
//! - [`presentations`]: surface and orbifold group presentations, abelian invariants
//! - [`arith`]: genus formulas, Hurwitz bound, Sylow and hyperelliptic certificates
//! - [`fields`]: prime fields, square roots, splitting-prime search
//! - [`curve`]: the generalized Fermat curve of type (2, 2g+1) and its involutions
//! - [`covers`]: intermediate covers, Gilman action matrices, Galois closures

pub mod arith;
pub(crate) mod bigjson;
pub mod covers;
pub mod curve;
mod error;
pub mod fields;
pub mod ntheory;
pub mod presentations;
pub mod smith;
pub mod zk;

pub use error::{Error, Result};

use serde::Serialize;

/// Limits on exhaustive work. Exceeding any of them is reported as an error,
/// never as a truncated result.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Budget {
    /// Largest ambient group `k^m` that may be enumerated.
    pub max_ambient: u64,
    /// Largest number of subgroups an invariant-lattice enumeration may produce.
    pub max_subgroups: usize,
    /// Largest matrix order searched for.
    pub max_order: u64,
    /// Largest field size for full point enumeration.
    pub max_field: u64,
    /// Upper end of any prime search.
    pub max_prime: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            max_ambient: 1 << 20,
            max_subgroups: 200_000,
            max_order: 1_000_000,
            max_field: 200,
            max_prime: 10_000_000,
        }
    }
}
