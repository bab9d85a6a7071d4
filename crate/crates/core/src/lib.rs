//! Prime-degree rational functions whose inverses are expressible in radicals.
//!
//! The crate is organised around the objects these functions are built from:
//!
//! * [`lattice`]: complex lattices, their index-`n` sublattices and the cosets
//!   of a sublattice grouped under multiplication by roots of unity.
//! * [`elliptic`]: the Weierstrass `℘` function, its derivatives and the
//!   case-dependent generator `S_Λ` of the `W`-invariant function field.
//! * [`ritt`]: the rational functions `R` with `S_Λ'(z) = R(S_Λ(z))`, in
//!   partial-fraction form, plus numerical verification.
//! * [`permgroup`]: monodromy analysis (orbits, blocks, solvability, genus,
//!   affine identification, decomposition into primitive pieces).
//! * [`enumerate`]: admissible branching data.
//! * [`classify`]: counts of equivalence classes.
//! * [`radical`]: radical expressions with explicit branch semantics, and the
//!   inverses of power maps, Chebyshev polynomials and quartics.
//! * [`cli`]: the `ritt` command-line front end.

pub mod classify;
pub mod cli;
pub mod elliptic;
pub mod enumerate;
pub mod lattice;
pub mod permgroup;
pub mod poly;
pub mod radical;
pub mod ritt;
pub mod sampling;

mod case;
mod cx;

pub use case::{CaseTag, UnknownCase};
pub use cx::{parse_complex, Complex, ParseComplexError, Show};
