//! Expressions in radicals with explicit branch semantics, and radical
//! inverses of power maps, Chebyshev polynomials, linear maps and quartics.

mod expr;
mod invert;
mod text;

pub use expr::{Branch, Builder, Evaluation, Node, NodeId, RadicalExpr, MAX_BRANCHES};
pub use invert::{
    apply_composition, chebyshev_sample, chebyshev_t, invert_chebyshev, invert_composition,
    invert_linear, invert_power, solve_quartic, verify_inverse, ForwardMap, InverseCheck,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RadicalError {
    #[error("malformed expression: {0}")]
    Malformed(String),
    #[error("cannot parse expression: {0}")]
    Parse(String),
    #[error("more than {max} branch assignments ({0})", max = MAX_BRANCHES)]
    TooManyBranches(usize),
    #[error("leading coefficient is zero")]
    LeadingZero,
    #[error("map is not invertible: {0}")]
    NotInvertible(String),
    #[error("expected {expected} branch values, got {found}: {diagnostics:?}")]
    BranchesLost {
        expected: usize,
        found: usize,
        diagnostics: Vec<String>,
    },
}

/// Values of `expr` at `w` over all admissible branch assignments.
pub fn eval_radical(expr: &RadicalExpr, w: crate::Complex) -> Result<Evaluation, RadicalError> {
    expr.eval(w)
}
