//! Counting equivalence classes of prime-degree functions.
//!
//! Left classes correspond to `W`-invariant index-`p` sublattices. At the
//! special `j`-invariants the extra lattice automorphism permutes those
//! classes, which is modelled as a matrix acting on `P¹(F_p)`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::lattice::{enumerate_index_sublattices, is_prime, IntMatrix, LatticeError};
use crate::ritt::{default_parent, RittError};
use crate::{CaseTag, Complex};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ClassifyError {
    #[error("case {0} is not a torus case")]
    NotTorusCase(CaseTag),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("cross ratio {0} is degenerate")]
    DegenerateCrossRatio(Complex),
}

impl From<RittError> for ClassifyError {
    fn from(e: RittError) -> Self {
        match e {
            RittError::NotTorusCase(c) => ClassifyError::NotTorusCase(c),
            RittError::Lattice(l) => ClassifyError::Lattice(l),
            other => unreachable!("default lattices are always valid: {other}"),
        }
    }
}

/// Number of left-equivalence classes of degree-`p` functions in `case`,
/// counted as `W`-invariant index-`p` sublattices of the case's lattice.
pub fn count_left_classes(case: CaseTag, p: u64) -> Result<u64, ClassifyError> {
    let order = case.w_order().ok_or(ClassifyError::NotTorusCase(case))?;
    if !is_prime(p) {
        return Err(ClassifyError::NotPrime(p));
    }
    let action = default_parent(case)?.unit_action(order)?;
    Ok(enumerate_index_sublattices(p)
        .iter()
        .filter(|s| s.is_invariant_under(&action))
        .count() as u64)
}

/// Cross ratio of the four branch points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    /// Cross ratio −1; extra automorphism `i`.
    Harmonic,
    /// Cross ratio `e^{±iπ/3}`; extra automorphism `ω`.
    Equianharmonic,
    Generic,
}

impl std::str::FromStr for Shape {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "harmonic" => Ok(Shape::Harmonic),
            "equianharmonic" => Ok(Shape::Equianharmonic),
            "generic" => Ok(Shape::Generic),
            other => Err(format!(
                "unknown shape {other:?}; expected harmonic, equianharmonic or generic"
            )),
        }
    }
}

impl Shape {
    fn matrix(self) -> IntMatrix {
        match self {
            Shape::Harmonic => [[0, -1], [1, 0]],
            Shape::Equianharmonic => [[0, -1], [1, -1]],
            Shape::Generic => [[1, 0], [0, 1]],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartitionSummary {
    pub total: u64,
    /// Orbit size → number of orbits of that size.
    pub orbit_size_histogram: BTreeMap<u64, u64>,
}

impl PartitionSummary {
    pub fn count(&self, size: u64) -> u64 {
        self.orbit_size_histogram.get(&size).copied().unwrap_or(0)
    }
}

impl std::fmt::Display for PartitionSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = |size: u64, n: u64| {
            let word = match size {
                1 => "singleton",
                2 => "pair",
                3 => "triple",
                _ => return format!("{n} orbit(s) of size {size}"),
            };
            format!("{n} {word}{}", if n == 1 { "" } else { "s" })
        };
        let parts: Vec<String> = self
            .orbit_size_histogram
            .iter()
            .rev()
            .map(|(&s, &n)| name(s, n))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Orbits of the extra automorphism on the `p + 1` left classes.
pub fn left_right_partition(p: u64, shape: Shape) -> Result<PartitionSummary, ClassifyError> {
    if !is_prime(p) {
        return Err(ClassifyError::NotPrime(p));
    }
    let [[a, b], [c, d]] = shape.matrix();
    let p_i = p as i64;
    let m = |x: i64| x.rem_euclid(p_i);
    // Points of P¹(F_p): 0..p stand for [x : 1], p for [1 : 0].
    let normalize = |x: i64, y: i64| -> usize {
        if m(y) == 0 {
            p as usize
        } else {
            (m(x) * inverse_mod(m(y), p_i)).rem_euclid(p_i) as usize
        }
    };
    let act = |pt: usize| -> usize {
        let (x, y) = if pt == p as usize {
            (1, 0)
        } else {
            (pt as i64, 1)
        };
        normalize(a * x + b * y, c * x + d * y)
    };
    let n = p as usize + 1;
    let mut seen = vec![false; n];
    let mut histogram = BTreeMap::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut size = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            size += 1;
            x = act(x);
        }
        *histogram.entry(size).or_insert(0) += 1;
    }
    Ok(PartitionSummary {
        total: n as u64,
        orbit_size_histogram: histogram,
    })
}

fn inverse_mod(x: i64, p: i64) -> i64 {
    // Fermat: x^{p−2}.
    let mut result = 1i64;
    let mut base = x.rem_euclid(p);
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

/// `j = (4/27)(τ² − τ + 1)³ / (τ²(τ − 1)²)`, normalised so that harmonic
/// quadruples give 1 and equianharmonic ones give 0.
pub fn j_from_cross_ratio(tau: Complex) -> Result<Complex, ClassifyError> {
    let one = Complex::new(1.0, 0.0);
    if tau.norm() < 1e-14 || (tau - one).norm() < 1e-14 || !tau.is_finite() {
        return Err(ClassifyError::DegenerateCrossRatio(tau));
    }
    let num = (tau * tau - tau + one).powu(3);
    let den = tau * tau * (tau - one) * (tau - one);
    Ok(num / den * (4.0 / 27.0))
}

/// Left classes of degree-3 functions with four simple branch points.
pub fn degree3_class_count() -> u64 {
    let n =
        count_left_classes(CaseTag::P2222, 3).expect("3 is prime and (2,2,2,2) is a torus case");
    assert_eq!(n, 4, "degree-3 count must be 4");
    n
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn left_classes() {
        assert_eq!(count_left_classes(CaseTag::P2222, 5).unwrap(), 6);
        assert_eq!(count_left_classes(CaseTag::P244, 13).unwrap(), 2);
        assert_eq!(count_left_classes(CaseTag::P244, 7).unwrap(), 0);
        assert_eq!(count_left_classes(CaseTag::P244, 2).unwrap(), 1);
        assert_eq!(count_left_classes(CaseTag::P333, 5).unwrap(), 0);
        assert_eq!(count_left_classes(CaseTag::P236, 3).unwrap(), 1);
        assert_eq!(count_left_classes(CaseTag::P333, 2).unwrap(), 0);
        assert_eq!(
            count_left_classes(CaseTag::P235, 5),
            Err(ClassifyError::NotTorusCase(CaseTag::P235))
        );
        assert_eq!(
            count_left_classes(CaseTag::P2222, 4),
            Err(ClassifyError::NotPrime(4))
        );
        assert_eq!(degree3_class_count(), 4);
    }

    #[test]
    fn partitions() {
        let h5 = left_right_partition(5, Shape::Harmonic).unwrap();
        assert_eq!((h5.count(2), h5.count(1), h5.total), (2, 2, 6));
        assert_eq!(h5.to_string(), "2 pairs + 2 singletons");
        let h3 = left_right_partition(3, Shape::Harmonic).unwrap();
        assert_eq!((h3.count(2), h3.count(1)), (2, 0));
        let h2 = left_right_partition(2, Shape::Harmonic).unwrap();
        assert_eq!((h2.count(2), h2.count(1)), (1, 1));
        let e2 = left_right_partition(2, Shape::Equianharmonic).unwrap();
        assert_eq!(e2.orbit_size_histogram, BTreeMap::from([(3, 1)]));
        let e3 = left_right_partition(3, Shape::Equianharmonic).unwrap();
        assert_eq!(e3.orbit_size_histogram, BTreeMap::from([(1, 1), (3, 1)]));
        let g = left_right_partition(7, Shape::Generic).unwrap();
        assert_eq!(g.orbit_size_histogram, BTreeMap::from([(1, 8)]));
    }

    #[test]
    fn j_invariant() {
        let omega = Complex::from_polar(1.0, std::f64::consts::FRAC_PI_3);
        assert!(j_from_cross_ratio(omega).unwrap().norm() < 1e-14);
        assert!((j_from_cross_ratio(Complex::new(-1.0, 0.0)).unwrap() - 1.0).norm() < 1e-14);
        assert!((j_from_cross_ratio(Complex::new(2.0, 0.0)).unwrap() - 1.0).norm() < 1e-14);
        assert!(j_from_cross_ratio(Complex::new(0.0, 0.0)).is_err());
        assert!(j_from_cross_ratio(Complex::new(1.0, 0.0)).is_err());
    }
}
