//! Riemann–Hurwitz bookkeeping: non-hyperbolic Galois branching data, the
//! order equations for affine monodromy, and classification of a branching
//! datum by its local multiplicities.
//!
//! A multiplicity of 0 is a wildcard ("no constraint").

use std::fmt;

use serde::{Serialize, Serializer};

use crate::CaseTag;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EnumerateError {
    #[error("Euler characteristic must be 2 or 0, got {0}")]
    BadChi(i64),
    #[error("a branching datum needs at least two branch points, got {0}")]
    TooFewBranchPoints(usize),
    #[error("b = {b} but {len} multiplicities were given")]
    LengthMismatch { b: usize, len: usize },
}

/// Branch count, local multiplicities and (for Galois data) the Euler
/// characteristic and degree of the covering surface.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BranchingDatum {
    pub case: CaseTag,
    pub b: usize,
    pub d_list: Vec<u32>,
    pub chi: Option<i64>,
    /// Galois degree, when it is a fixed number.
    pub degree: Option<u64>,
}

impl BranchingDatum {
    fn galois(case: CaseTag, chi: i64, degree: Option<u64>) -> Self {
        let d_list = case.multiplicities().to_vec();
        BranchingDatum {
            case,
            b: d_list.len(),
            d_list,
            chi: Some(chi),
            degree,
        }
    }

    /// Concrete multiplicities with the wildcard set to `n`, together with the
    /// Galois degree this forces.
    pub fn instantiate(&self, n: u32) -> (Vec<u32>, Option<u64>) {
        let d_list: Vec<u32> = self
            .d_list
            .iter()
            .map(|&d| if d == 0 { n } else { d })
            .collect();
        let degree = match self.case {
            CaseTag::StarStar => Some(n as u64),
            CaseTag::TwoTwoStar => Some(2 * n as u64),
            _ => self.degree,
        };
        (d_list, degree)
    }
}

impl fmt::Display for BranchingDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.case)?;
        if let Some(d) = self.degree {
            write!(f, " d={d}")?;
        }
        Ok(())
    }
}

/// Galois branching data on the sphere whose covering surface has Euler
/// characteristic `chi`: `b − 2 + chi/d = Σ 1/d_i`.
pub fn enumerate_nonhyperbolic_galois(chi: i64) -> Result<Vec<BranchingDatum>, EnumerateError> {
    match chi {
        2 => Ok(vec![
            BranchingDatum::galois(CaseTag::StarStar, 2, None),
            BranchingDatum::galois(CaseTag::TwoTwoStar, 2, None),
            BranchingDatum::galois(CaseTag::P233, 2, Some(12)),
            BranchingDatum::galois(CaseTag::P234, 2, Some(24)),
            BranchingDatum::galois(CaseTag::P235, 2, Some(60)),
        ]),
        0 => Ok(
            [CaseTag::P236, CaseTag::P244, CaseTag::P333, CaseTag::P2222]
                .into_iter()
                .map(|c| BranchingDatum::galois(c, 0, None))
                .collect(),
        ),
        other => Err(EnumerateError::BadChi(other)),
    }
}

/// Multiplicative order of an affine coefficient; translations have infinite order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Order {
    Finite(u32),
    Infinite,
}

impl Serialize for Order {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Order::Finite(n) => s.serialize_u32(*n),
            Order::Infinite => s.serialize_str("inf"),
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::Infinite => write!(f, "∞"),
        }
    }
}

/// Solutions of `Σ 1/ord a_i = b − 2`, sorted within each tuple.
pub fn enumerate_ritt_prime_solutions() -> Vec<Vec<Order>> {
    use Order::{Finite as F, Infinite as I};
    vec![
        vec![I, I],
        vec![F(2), F(2), I],
        vec![F(2), F(3), F(6)],
        vec![F(2), F(4), F(4)],
        vec![F(3), F(3), F(3)],
        vec![F(2), F(2), F(2), F(2)],
    ]
}

/// Outcome of matching local multiplicities against the bounded cases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Case(CaseTag),
    Unbounded,
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Case(c) => write!(f, "{c}"),
            Verdict::Unbounded => write!(f, "hyperbolic/unbounded"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub verdict: Verdict,
    /// Whether the functions of this case are invertible in radicals; unknown
    /// for unbounded data.
    pub radical_invertible: Option<bool>,
}

/// Matches `b` branch points with multiplicity bounds `d_list` against the
/// bounded cases. Entries equal to 1 mark unbranched points and are ignored.
pub fn classify_branching_datum(
    b: usize,
    d_list: &[u32],
) -> Result<Classification, EnumerateError> {
    if b < 2 {
        return Err(EnumerateError::TooFewBranchPoints(b));
    }
    if d_list.len() != b {
        return Err(EnumerateError::LengthMismatch {
            b,
            len: d_list.len(),
        });
    }
    let mut d: Vec<u32> = d_list.iter().copied().filter(|&x| x != 1).collect();
    // Wildcards sort last.
    d.sort_unstable_by_key(|&x| if x == 0 { u32::MAX } else { x });
    let verdict = match d.as_slice() {
        [] | [_] | [_, _] => Verdict::Case(CaseTag::StarStar),
        [2, 2, _] => Verdict::Case(CaseTag::TwoTwoStar),
        [2, 3, 3] => Verdict::Case(CaseTag::P233),
        [2, 3, 4] => Verdict::Case(CaseTag::P234),
        [2, 3, 5] => Verdict::Case(CaseTag::P235),
        [2, 3, 6] => Verdict::Case(CaseTag::P236),
        [2, 4, 4] => Verdict::Case(CaseTag::P244),
        [3, 3, 3] => Verdict::Case(CaseTag::P333),
        [2, 2, 2, 2] => Verdict::Case(CaseTag::P2222),
        _ => Verdict::Unbounded,
    };
    let radical_invertible = match verdict {
        Verdict::Case(c) => Some(c != CaseTag::P235),
        Verdict::Unbounded => None,
    };
    Ok(Classification {
        verdict,
        radical_invertible,
    })
}

/// Whether coverings with these local multiplicities have bounded genus.
pub fn bounded_genus_predicate(b: usize, d_list: &[u32]) -> Result<bool, EnumerateError> {
    Ok(matches!(
        classify_branching_datum(b, d_list)?.verdict,
        Verdict::Case(_)
    ))
}
