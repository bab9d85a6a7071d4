//! Permutation groups for monodromy analysis.
//!
//! Points are 0-indexed internally and 1-indexed in cycle notation. Products
//! apply the left factor first.

mod affine;
mod blocks;
mod group;
mod monodromy;
mod perm;

pub use affine::{affine_identification, AffineAction};
pub use blocks::{
    all_block_systems, decompose_covering, induced_piece, is_primitive, minimal_block_system,
    BlockSystem, Decomposition, DecompositionChain, CHAIN_CAP,
};
pub use group::{PermGroup, ORDER_CAP};
pub use monodromy::{
    check_local_orders, galois_closure_genus, genus_from_monodromy, local_pullback, MonodromyDatum,
};
pub use perm::Permutation;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PermError {
    #[error("images {0:?} do not form a bijection")]
    NotBijection(Vec<usize>),
    #[error("point {} is outside a permutation of degree {degree}", point + 1)]
    PointOutOfRange { point: usize, degree: usize },
    #[error("cannot parse permutation: {0}")]
    Parse(String),
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("no points or no permutations given")]
    EmptyDegree,
    #[error("group order exceeds the enumeration cap {0}")]
    OrderCap(usize),
    #[error("the group is not transitive")]
    Intransitive,
    #[error("degree {0} is not prime")]
    NotPrime(usize),
    #[error("the group is not primitive")]
    NotPrimitive,
    #[error("the group is not solvable")]
    NotSolvable,
    #[error("generator {0} is not affine in the translation labelling")]
    NotAffine(String),
    #[error("inconsistent monodromy datum: {0}")]
    BadDatum(String),
}
