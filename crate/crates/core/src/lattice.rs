//! Rank-2 lattices in `ℂ`, their finite-index sublattices and coset orbits.
//!
//! A sublattice of index `n` in `⟨ω₁, ω₂⟩` is stored as the column-style Hermite
//! normal form `[[a, b], [0, d]]` with `a·d = n` and `0 ≤ b < a`: its basis is
//! `a·ω₁` and `b·ω₁ + d·ω₂`. All of the combinatorics (membership, invariance,
//! coset reduction) runs on integer coordinates; floating point only appears
//! when cosets are emitted as points of `ℂ`.

use std::f64::consts::{FRAC_PI_3, PI};

use serde::{Deserialize, Serialize};

use crate::Complex;

/// 2×2 integer matrix, row-major.
pub type IntMatrix = [[i64; 2]; 2];

pub const IDENTITY: IntMatrix = [[1, 0], [0, 1]];

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LatticeError {
    #[error("degenerate or negatively oriented basis ({omega1}, {omega2}): need Im(ω₂/ω₁) > 0")]
    BadBasis { omega1: Complex, omega2: Complex },
    #[error("period ratio must lie in the upper half plane, got {0}")]
    NotUpperHalfPlane(Complex),
    #[error("root-of-unity order must be one of 2, 3, 4, 6 (got {0})")]
    InvalidOrder(u32),
    #[error(
        "the parent lattice is not carried to itself by a primitive root of unity of order {0}"
    )]
    ParentNotInvariant(u32),
    #[error("the sublattice is not invariant under a primitive root of unity of order {0}")]
    NotInvariant(u32),
    #[error("sublattice index {0} is not prime")]
    NonPrimeIndex(u64),
    #[error("invalid Hermite normal form [[{a}, {b}], [0, {d}]]")]
    InvalidHnf { a: i64, b: i64, d: i64 },
}

/// A lattice `ω₁ℤ + ω₂ℤ` with a positively oriented basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lattice {
    #[serde(with = "crate::cx::pair")]
    omega1: Complex,
    #[serde(with = "crate::cx::pair")]
    omega2: Complex,
}

impl Lattice {
    pub fn new(omega1: Complex, omega2: Complex) -> Result<Self, LatticeError> {
        let bad = || LatticeError::BadBasis { omega1, omega2 };
        if !(omega1.is_finite() && omega2.is_finite())
            || omega1.norm() == 0.0
            || omega2.norm() == 0.0
        {
            return Err(bad());
        }
        let tau = omega2 / omega1;
        // Reject bases that are numerically collinear.
        if tau.im <= 1e-12 * tau.norm().max(1.0) {
            return Err(bad());
        }
        Ok(Lattice { omega1, omega2 })
    }

    /// The lattice `⟨1, τ⟩`.
    pub fn from_tau(tau: Complex) -> Result<Self, LatticeError> {
        if !(tau.im > 0.0) {
            return Err(LatticeError::NotUpperHalfPlane(tau));
        }
        Lattice::new(Complex::new(1.0, 0.0), tau)
    }

    /// Gaussian integers `⟨1, i⟩`.
    pub fn square() -> Self {
        Lattice {
            omega1: Complex::new(1.0, 0.0),
            omega2: Complex::i(),
        }
    }

    /// Eisenstein integers `⟨1, ω⟩`, `ω = e^{2πi/3}`.
    pub fn hexagonal() -> Self {
        Lattice {
            omega1: Complex::new(1.0, 0.0),
            omega2: Complex::from_polar(1.0, 2.0 * PI / 3.0),
        }
    }

    pub fn omega1(&self) -> Complex {
        self.omega1
    }

    pub fn omega2(&self) -> Complex {
        self.omega2
    }

    pub fn tau(&self) -> Complex {
        self.omega2 / self.omega1
    }

    pub fn scaled(&self, lambda: Complex) -> Result<Self, LatticeError> {
        // Multiplying both periods by λ preserves orientation.
        Lattice::new(lambda * self.omega1, lambda * self.omega2)
    }

    /// Real coordinates `(x, y)` with `z = x·ω₁ + y·ω₂`.
    pub fn coordinates(&self, z: Complex) -> (f64, f64) {
        let t = z / self.omega1;
        let tau = self.tau();
        let y = t.im / tau.im;
        (t.re - y * tau.re, y)
    }

    pub fn point(&self, x: f64, y: f64) -> Complex {
        self.omega1 * x + self.omega2 * y
    }

    /// Distance from `z` to the nearest lattice point.
    pub fn distance_to_lattice(&self, z: Complex) -> f64 {
        let (x, y) = self.coordinates(z);
        let (m, n) = (x.floor(), y.floor());
        let mut best = f64::INFINITY;
        for dm in -1..=2 {
            for dn in -1..=2 {
                let p = self.point(m + dm as f64, n + dn as f64);
                best = best.min((z - p).norm());
            }
        }
        best
    }

    /// The sublattice described by an HNF spec.
    pub fn sublattice(&self, spec: &SublatticeSpec) -> Lattice {
        let v1 = self.omega1 * spec.a as f64;
        let v2 = self.omega1 * spec.b as f64 + self.omega2 * spec.d as f64;
        Lattice {
            omega1: v1,
            omega2: v2,
        }
    }

    /// Integer matrix of multiplication by a primitive root of unity of the
    /// given order, acting on coordinate columns in the basis `(ω₁, ω₂)`.
    pub fn unit_action(&self, order: u32) -> Result<IntMatrix, LatticeError> {
        let xi = primitive_root_of_unity(order)?;
        let column = |z: Complex| -> Option<[i64; 2]> {
            let (x, y) = self.coordinates(xi * z);
            let (rx, ry) = (x.round(), y.round());
            ((x - rx).abs() < 1e-8 && (y - ry).abs() < 1e-8).then_some([rx as i64, ry as i64])
        };
        let c1 = column(self.omega1).ok_or(LatticeError::ParentNotInvariant(order))?;
        let c2 = column(self.omega2).ok_or(LatticeError::ParentNotInvariant(order))?;
        Ok([[c1[0], c2[0]], [c1[1], c2[1]]])
    }
}

/// `e^{2πi/order}` for `order ∈ {2, 3, 4, 6}`.
pub fn primitive_root_of_unity(order: u32) -> Result<Complex, LatticeError> {
    match order {
        2 => Ok(Complex::new(-1.0, 0.0)),
        3 => Ok(Complex::from_polar(1.0, 2.0 * PI / 3.0)),
        4 => Ok(Complex::i()),
        6 => Ok(Complex::from_polar(1.0, FRAC_PI_3)),
        other => Err(LatticeError::InvalidOrder(other)),
    }
}

/// An index-`a·d` sublattice in Hermite normal form `[[a, b], [0, d]]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SublatticeSpec {
    a: i64,
    b: i64,
    d: i64,
}

impl SublatticeSpec {
    pub fn new(a: i64, b: i64, d: i64) -> Result<Self, LatticeError> {
        if a < 1 || d < 1 || b < 0 || b >= a {
            return Err(LatticeError::InvalidHnf { a, b, d });
        }
        Ok(SublatticeSpec { a, b, d })
    }

    pub fn identity() -> Self {
        SublatticeSpec { a: 1, b: 0, d: 1 }
    }

    pub fn index(&self) -> u64 {
        (self.a * self.d) as u64
    }

    pub fn transform(&self) -> IntMatrix {
        [[self.a, self.b], [0, self.d]]
    }

    /// Canonical representative `(i, j)`, `0 ≤ i < a`, `0 ≤ j < d`, of the
    /// coset of `x` modulo the sublattice.
    pub fn reduce(&self, x: [i64; 2]) -> [i64; 2] {
        let j = x[1].rem_euclid(self.d);
        let k = (x[1] - j) / self.d;
        let i = (x[0] - k * self.b).rem_euclid(self.a);
        [i, j]
    }

    pub fn contains(&self, x: [i64; 2]) -> bool {
        self.reduce(x) == [0, 0]
    }

    /// Whether `m` maps the sublattice into itself.
    pub fn is_invariant_under(&self, m: &IntMatrix) -> bool {
        let t = self.transform();
        (0..2).all(|col| {
            let v = [t[0][col], t[1][col]];
            self.contains(apply(m, v))
        })
    }

    /// All coset representatives in canonical order, the zero coset first.
    pub fn cosets(&self) -> impl Iterator<Item = [i64; 2]> + '_ {
        (0..self.d).flat_map(move |j| (0..self.a).map(move |i| [i, j]))
    }
}

pub fn apply(m: &IntMatrix, v: [i64; 2]) -> [i64; 2] {
    [
        m[0][0] * v[0] + m[0][1] * v[1],
        m[1][0] * v[0] + m[1][1] * v[1],
    ]
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let mut out = [[0; 2]; 2];
    for (r, row) in out.iter_mut().enumerate() {
        for (c, cell) in row.iter_mut().enumerate() {
            *cell = a[r][0] * b[0][c] + a[r][1] * b[1][c];
        }
    }
    out
}

/// All index-`n` sublattices of a rank-2 lattice, ordered by `(a, b)`.
///
/// There are `σ₁(n)` of them; for a prime `p` that is `p + 1`.
pub fn enumerate_index_sublattices(n: u64) -> Vec<SublatticeSpec> {
    let n = n as i64;
    let mut out = Vec::new();
    for a in (1..=n).filter(|a| n % a == 0) {
        for b in 0..a {
            out.push(SublatticeSpec { a, b, d: n / a });
        }
    }
    out
}

pub fn is_root_of_unity_invariant(
    parent: &Lattice,
    spec: &SublatticeSpec,
    order: u32,
) -> Result<bool, LatticeError> {
    let m = parent.unit_action(order)?;
    Ok(spec.is_invariant_under(&m))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

/// A nonzero coset of `Λ` in `Λ'`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coset {
    /// Canonical integer coordinates in the parent basis.
    pub coords: [i64; 2],
    /// The coset as a point of the half-open fundamental parallelogram of `Λ`.
    pub point: Complex,
}

/// One orbit of nonzero cosets under `u ↦ ξu`, `ξ ∈ W`.
#[derive(Debug, Clone, PartialEq)]
pub struct CosetOrbit {
    /// Members sorted by coordinates; the first one is the representative.
    pub members: Vec<Coset>,
    /// Order of the stabilizer in `W` of any member.
    pub stabilizer: u32,
}

impl CosetOrbit {
    pub fn representative(&self) -> &Coset {
        &self.members[0]
    }
}

/// Nonzero cosets of a prime-index sublattice, grouped into `W`-orbits.
pub fn coset_representatives(
    parent: &Lattice,
    spec: &SublatticeSpec,
    w_order: u32,
) -> Result<Vec<CosetOrbit>, LatticeError> {
    if !is_prime(spec.index()) {
        return Err(LatticeError::NonPrimeIndex(spec.index()));
    }
    let generator = parent.unit_action(w_order)?;
    if !spec.is_invariant_under(&generator) {
        return Err(LatticeError::NotInvariant(w_order));
    }
    let sub = parent.sublattice(spec);
    let to_point = |c: [i64; 2]| {
        let z = parent.point(c[0] as f64, c[1] as f64);
        let (x, y) = sub.coordinates(z);
        sub.point(x - x.floor(), y - y.floor())
    };

    let mut seen = std::collections::HashSet::new();
    let mut orbits = Vec::new();
    for start in spec.cosets().skip(1) {
        if !seen.insert(start) {
            continue;
        }
        let mut members = vec![start];
        let mut current = spec.reduce(apply(&generator, start));
        while current != start {
            if !seen.insert(current) {
                // The orbit ran into another orbit: the action is not a permutation.
                return Err(LatticeError::NotInvariant(w_order));
            }
            members.push(current);
            current = spec.reduce(apply(&generator, current));
        }
        let size = members.len() as u32;
        if w_order % size != 0 {
            return Err(LatticeError::NotInvariant(w_order));
        }
        members.sort();
        orbits.push(CosetOrbit {
            members: members
                .into_iter()
                .map(|c| Coset {
                    coords: c,
                    point: to_point(c),
                })
                .collect(),
            stabilizer: w_order / size,
        });
    }
    Ok(orbits)
}

/// Element `[[a, b], [c, d]]` of `SL₂(ℤ)` acting by `τ ↦ (aτ + b)/(cτ + d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Modular(pub IntMatrix);

impl Modular {
    pub fn apply(&self, tau: Complex) -> Complex {
        let [[a, b], [c, d]] = self.0;
        (tau * a as f64 + b as f64) / (tau * c as f64 + d as f64)
    }

    /// New basis `(ω₁', ω₂')` spanning the same lattice with ratio `apply(τ)`.
    pub fn transform_basis(&self, omega1: Complex, omega2: Complex) -> (Complex, Complex) {
        let [[a, b], [c, d]] = self.0;
        (
            omega2 * c as f64 + omega1 * d as f64,
            omega2 * a as f64 + omega1 * b as f64,
        )
    }
}

/// Moves `τ` into the standard fundamental domain `|Re τ| ≤ 1/2, |τ| ≥ 1`.
pub fn reduce_to_fundamental_domain(tau: Complex) -> Result<(Complex, Modular), LatticeError> {
    if !(tau.im > 0.0) || !tau.is_finite() {
        return Err(LatticeError::NotUpperHalfPlane(tau));
    }
    let mut t = tau;
    let mut m = IDENTITY;
    for _ in 0..10_000 {
        let shift = t.re.round();
        if shift != 0.0 {
            t.re -= shift;
            m = mat_mul(&[[1, -(shift as i64)], [0, 1]], &m);
        }
        if t.norm_sqr() < 1.0 - 1e-15 {
            t = -t.inv();
            m = mat_mul(&[[0, -1], [1, 0]], &m);
        } else {
            break;
        }
    }
    // Recompute from the integer matrix so the returned value matches it exactly.
    let modular = Modular(m);
    let mut reduced = modular.apply(tau);
    if reduced.re > 0.5 && reduced.re - 0.5 < 1e-12 {
        reduced.re = 0.5;
    }
    Ok((reduced, modular))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force_count(n: i64) -> usize {
        // All HNF matrices with determinant n, generated without the divisor shortcut.
        let mut count = 0;
        for a in 1..=n {
            for d in 1..=n {
                if a * d == n {
                    count += (0..a).count();
                }
            }
        }
        count
    }

    #[test]
    fn sublattice_counts() {
        assert_eq!(enumerate_index_sublattices(5).len(), 6);
        assert_eq!(
            enumerate_index_sublattices(1),
            vec![SublatticeSpec::identity()]
        );
        assert_eq!(enumerate_index_sublattices(4).len(), 7);
        for n in 1..=30 {
            assert_eq!(
                enumerate_index_sublattices(n).len(),
                brute_force_count(n as i64)
            );
        }
    }

    #[test]
    fn hnf_validation() {
        assert!(SublatticeSpec::new(3, 3, 1).is_err());
        assert!(SublatticeSpec::new(0, 0, 1).is_err());
        assert!(SublatticeSpec::new(3, 2, 5).is_ok());
    }

    #[test]
    fn gaussian_index_two_is_i_invariant() {
        // ⟨1+i, 1−i⟩: columns (1,1) and (1,−1); its HNF is [[2,1],[0,1]].
        let sq = Lattice::square();
        let spec = SublatticeSpec::new(2, 1, 1).unwrap();
        assert!(spec.contains([1, 1]) && spec.contains([1, -1]));
        assert!(is_root_of_unity_invariant(&sq, &spec, 4).unwrap());
        // Brute-force: i maps every small lattice vector of the sublattice into it.
        for x in -4..=4 {
            for y in -4..=4 {
                if spec.contains([x, y]) {
                    assert!(spec.contains([-y, x]));
                }
            }
        }
    }

    #[test]
    fn invariance_examples() {
        let sq = Lattice::square();
        let generic = Lattice::from_tau(Complex::new(0.31, 1.27)).unwrap();
        for spec in enumerate_index_sublattices(7) {
            assert!(is_root_of_unity_invariant(&generic, &spec, 2).unwrap());
        }
        let s = SublatticeSpec::new(1, 0, 3).unwrap();
        assert!(!is_root_of_unity_invariant(&sq, &s, 4).unwrap());
        assert!(enumerate_index_sublattices(3)
            .iter()
            .all(|s| !is_root_of_unity_invariant(&sq, s, 4).unwrap()));
        assert_eq!(
            is_root_of_unity_invariant(&sq, &s, 5),
            Err(LatticeError::InvalidOrder(5))
        );
        assert_eq!(
            is_root_of_unity_invariant(&generic, &s, 4),
            Err(LatticeError::ParentNotInvariant(4))
        );
    }

    #[test]
    fn unit_action_matrices() {
        assert_eq!(Lattice::square().unit_action(4).unwrap(), [[0, -1], [1, 0]]);
        assert_eq!(
            Lattice::hexagonal().unit_action(3).unwrap(),
            [[0, -1], [1, -1]]
        );
        assert_eq!(
            Lattice::hexagonal().unit_action(6).unwrap(),
            [[1, -1], [1, 0]]
        );
        let m = Lattice::hexagonal().unit_action(6).unwrap();
        let mut power = IDENTITY;
        for _ in 0..6 {
            power = mat_mul(&m, &power);
        }
        assert_eq!(power, IDENTITY);
    }

    #[test]
    fn invariant_counts_match_residue_rules() {
        let sq = Lattice::square();
        let hex = Lattice::hexagonal();
        for p in (2..=50).filter(|&p| is_prime(p)) {
            let subs = enumerate_index_sublattices(p);
            assert_eq!(subs.len() as u64, p + 1);
            let gauss = subs
                .iter()
                .filter(|s| is_root_of_unity_invariant(&sq, s, 4).unwrap())
                .count();
            let expected = if p == 2 {
                1
            } else if p % 4 == 1 {
                2
            } else {
                0
            };
            assert_eq!(gauss, expected, "p = {p}");
            let eis = subs
                .iter()
                .filter(|s| is_root_of_unity_invariant(&hex, s, 3).unwrap())
                .count();
            let expected = if p == 3 {
                1
            } else if p % 6 == 1 {
                2
            } else {
                0
            };
            assert_eq!(eis, expected, "p = {p}");
        }
    }

    #[test]
    fn coset_orbits_for_negation() {
        let parent = Lattice::from_tau(Complex::new(0.31, 1.27)).unwrap();
        let spec = SublatticeSpec::new(5, 0, 1).unwrap();
        let orbits = coset_representatives(&parent, &spec, 2).unwrap();
        let coords: Vec<Vec<[i64; 2]>> = orbits
            .iter()
            .map(|o| o.members.iter().map(|c| c.coords).collect())
            .collect();
        assert_eq!(coords, vec![vec![[1, 0], [4, 0]], vec![[2, 0], [3, 0]]]);
        assert!((orbits[0].representative().point - Complex::new(1.0, 0.0)).norm() < 1e-14);
        assert!((orbits[1].representative().point - Complex::new(2.0, 0.0)).norm() < 1e-14);

        let two =
            coset_representatives(&parent, &SublatticeSpec::new(2, 0, 1).unwrap(), 2).unwrap();
        assert_eq!(two.len(), 1);
        assert_eq!(two[0].members.len(), 1);
        assert_eq!(two[0].stabilizer, 2);
    }

    #[test]
    fn gaussian_index_five_single_orbit() {
        let sq = Lattice::square();
        let inv: Vec<_> = enumerate_index_sublattices(5)
            .into_iter()
            .filter(|s| is_root_of_unity_invariant(&sq, s, 4).unwrap())
            .collect();
        assert_eq!(inv.len(), 2);
        for spec in inv {
            let orbits = coset_representatives(&sq, &spec, 4).unwrap();
            assert_eq!(orbits.len(), 1);
            assert_eq!(orbits[0].members.len(), 4);
            assert_eq!(orbits[0].stabilizer, 1);
        }
    }

    #[test]
    fn coset_errors() {
        let sq = Lattice::square();
        assert_eq!(
            coset_representatives(&sq, &SublatticeSpec::new(2, 0, 2).unwrap(), 2),
            Err(LatticeError::NonPrimeIndex(4))
        );
        assert_eq!(
            coset_representatives(&sq, &SublatticeSpec::new(1, 0, 3).unwrap(), 4),
            Err(LatticeError::NotInvariant(4))
        );
    }

    #[test]
    fn coset_points_lie_in_parallelogram() {
        let hex = Lattice::hexagonal();
        for spec in enumerate_index_sublattices(13) {
            if !is_root_of_unity_invariant(&hex, &spec, 6).unwrap() {
                continue;
            }
            let sub = hex.sublattice(&spec);
            let orbits = coset_representatives(&hex, &spec, 6).unwrap();
            assert_eq!(orbits.iter().map(|o| o.members.len()).sum::<usize>(), 12);
            for c in orbits.iter().flat_map(|o| &o.members) {
                let (x, y) = sub.coordinates(c.point);
                assert!((-1e-12..1.0).contains(&x) && (-1e-12..1.0).contains(&y));
            }
        }
    }

    #[test]
    fn fundamental_domain_reduction() {
        let (t, m) = reduce_to_fundamental_domain(Complex::i()).unwrap();
        assert_eq!(t, Complex::i());
        assert_eq!(m.0, IDENTITY);

        let (t, m) = reduce_to_fundamental_domain(Complex::new(5.0, 1.0)).unwrap();
        assert!((t - Complex::i()).norm() < 1e-15);
        assert_eq!(m.0, [[1, -5], [0, 1]]);

        let tau = Complex::new(0.1, 0.1);
        let (t, m) = reduce_to_fundamental_domain(tau).unwrap();
        assert!(t.norm() >= 1.0 - 1e-12 && t.re.abs() <= 0.5 + 1e-12);
        let [[a, b], [c, d]] = m.0;
        assert_eq!(a * d - b * c, 1);
        assert!((m.apply(tau) - t).norm() < 1e-12);

        assert!(reduce_to_fundamental_domain(Complex::new(0.3, -1.0)).is_err());
    }

    #[test]
    fn basis_transform_spans_same_lattice() {
        let lat = Lattice::new(Complex::new(1.3, 0.2), Complex::new(0.4, 2.1)).unwrap();
        let (_, m) = reduce_to_fundamental_domain(lat.tau()).unwrap();
        let (w1, w2) = m.transform_basis(lat.omega1(), lat.omega2());
        for w in [w1, w2] {
            let (x, y) = lat.coordinates(w);
            assert!((x - x.round()).abs() < 1e-10 && (y - y.round()).abs() < 1e-10);
        }
        assert!(((w2 / w1) - m.apply(lat.tau())).norm() < 1e-12);
    }

    #[test]
    fn rejects_bad_bases() {
        assert!(Lattice::new(Complex::new(1.0, 0.0), Complex::new(2.0, 0.0)).is_err());
        assert!(Lattice::new(Complex::new(1.0, 0.0), Complex::new(0.0, -1.0)).is_err());
        assert!(Lattice::from_tau(Complex::new(0.5, 0.0)).is_err());
    }
}
