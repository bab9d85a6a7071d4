//! Weierstrass `℘` and its derivatives on an arbitrary lattice.
//!
//! The period ratio is first moved into the standard fundamental domain, which
//! bounds the nome by `|q| ≤ e^{−π√3}`. `℘` and `℘'` are then summed from their
//! `q`-expansions and every higher derivative follows from the differential
//! equation `℘'' = 6℘² − g₂/2`, differentiated as often as needed.

use std::f64::consts::PI;

use crate::lattice::{reduce_to_fundamental_domain, Lattice, LatticeError};
use crate::{CaseTag, Complex};

/// Highest derivative order the evaluator hands out.
pub const MAX_DERIVATIVE: usize = 16;

/// Arguments closer than this fraction of the shortest period to a lattice
/// point are rejected as poles.
pub const POLE_GUARD: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EllipticError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("tolerance {0} outside [1e-14, 1e-4]")]
    BadTolerance(f64),
    #[error("degenerate lattice: discriminant underflows")]
    Degenerate,
    #[error("{z} is within the pole guard of a lattice point")]
    Pole { z: Complex },
    #[error("derivative order {0} exceeds the supported maximum")]
    DerivativeOrder(usize),
    #[error("case {0} has no elliptic generator (not a torus case)")]
    NotTorusCase(CaseTag),
}

/// `℘` evaluator for one lattice. Immutable once built.
#[derive(Debug, Clone)]
pub struct EllipticEvaluator {
    lattice: Lattice,
    /// Reduced basis of the same lattice.
    omega1: Complex,
    omega2: Complex,
    tau: Complex,
    q: Complex,
    /// Constant part of `℘` on `⟨1, τ⟩`.
    unit_constant: Complex,
    unit_g2: Complex,
    discriminant: Complex,
    g2: Complex,
    g3: Complex,
    tol: f64,
}

const SERIES_CAP: usize = 200;

impl EllipticEvaluator {
    pub fn new(lattice: Lattice, tol: f64) -> Result<Self, EllipticError> {
        if !(1e-14..=1e-4).contains(&tol) {
            return Err(EllipticError::BadTolerance(tol));
        }
        let (_, modular) = reduce_to_fundamental_domain(lattice.tau())?;
        let (omega1, omega2) = modular.transform_basis(lattice.omega1(), lattice.omega2());
        let tau = omega2 / omega1;
        let q = (Complex::i() * 2.0 * PI * tau).exp();

        // Lambert series Σ n^k qⁿ/(1 − qⁿ) for k = 1, 3, 5.
        let (mut s1, mut s3, mut s5) = (
            Complex::new(0.0, 0.0),
            Complex::new(0.0, 0.0),
            Complex::new(0.0, 0.0),
        );
        let mut qn = q;
        for n in 1..SERIES_CAP {
            let nf = n as f64;
            let lambert = qn / (1.0 - qn);
            let t5 = lambert * nf.powi(5);
            s1 += lambert * nf;
            s3 += lambert * nf.powi(3);
            s5 += t5;
            if t5.norm() < 1e-18 * (1.0 + s5.norm()) {
                break;
            }
            qn *= q;
        }
        let two_pi_i = Complex::new(0.0, 2.0 * PI);
        let unit_constant = two_pi_i * two_pi_i * (Complex::new(1.0 / 12.0, 0.0) - s1 * 2.0);
        let unit_g2 = (1.0 + s3 * 240.0) * (4.0 * PI.powi(4) / 3.0);
        let unit_g3 = (1.0 - s5 * 504.0) * (8.0 * PI.powi(6) / 27.0);

        // Δ = (2π)¹² q Π (1 − qⁿ)²⁴ avoids the cancellation in g2³ − 27g3² when Im τ is large.
        let mut eta = Complex::new(1.0, 0.0);
        let mut qn = q;
        while qn.norm() > 1e-18 {
            eta *= 1.0 - qn;
            qn *= q;
        }
        let unit_disc = q * eta.powi(24) * (2.0 * PI).powi(12);
        if !(unit_disc.norm() > 1e-250) || !unit_disc.is_finite() {
            return Err(EllipticError::Degenerate);
        }

        let g2 = unit_g2 / omega1.powi(4);
        let g3 = unit_g3 / omega1.powi(6);
        let discriminant = unit_disc / omega1.powi(12);
        Ok(EllipticEvaluator {
            lattice,
            omega1,
            omega2,
            tau,
            q,
            unit_constant,
            unit_g2,
            g2,
            g3,
            discriminant,
            tol,
        })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    /// The reduced basis `(ω₁, ω₂)` used internally.
    pub fn reduced_basis(&self) -> (Complex, Complex) {
        (self.omega1, self.omega2)
    }

    pub fn g2(&self) -> Complex {
        self.g2
    }

    pub fn g3(&self) -> Complex {
        self.g3
    }

    /// `g2³ − 27g3²`, from the product formula.
    pub fn discriminant(&self) -> Complex {
        self.discriminant
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// `℘^{(k)}(z)`.
    pub fn wp(&self, z: Complex, k: usize) -> Result<Complex, EllipticError> {
        Ok(self.wp_derivatives(z, k)?[k])
    }

    /// `[℘(z), ℘'(z), …, ℘^{(n)}(z)]`.
    pub fn wp_derivatives(&self, z: Complex, n: usize) -> Result<Vec<Complex>, EllipticError> {
        if n > MAX_DERIVATIVE {
            return Err(EllipticError::DerivativeOrder(n));
        }
        let x = self.reduce_unit(z / self.omega1, z)?;
        let (p0, p1) = self.unit_series(x);
        let mut d = Vec::with_capacity(n.max(1) + 1);
        d.push(p0);
        d.push(p1);
        // ℘^{(k+2)} = 6 Σ_j C(k, j) ℘^{(j)} ℘^{(k−j)}, with ℘'' = 6℘² − g₂/2.
        for k in 0..n.saturating_sub(1) {
            let mut acc = Complex::new(0.0, 0.0);
            let mut binom = 1.0;
            for j in 0..=k {
                acc += d[j] * d[k - j] * binom;
                binom = binom * (k - j) as f64 / (j + 1) as f64;
            }
            let mut next = acc * 6.0;
            if k == 0 {
                next -= self.unit_g2 / 2.0;
            }
            d.push(next);
        }
        d.truncate(n + 1);
        // ℘^{(k)}(z; ω₁Λ₀) = ω₁^{−2−k} ℘^{(k)}(z/ω₁; Λ₀)
        let inv = self.omega1.inv();
        let mut factor = inv * inv;
        for v in d.iter_mut() {
            *v *= factor;
            factor *= inv;
        }
        Ok(d)
    }

    /// `S_Λ(z)` for a torus case.
    pub fn s_value(&self, case: CaseTag, z: Complex) -> Result<Complex, EllipticError> {
        let s = case
            .s_derivative_order()
            .ok_or(EllipticError::NotTorusCase(case))?;
        self.wp(z, s)
    }

    /// `[S_Λ(z), S_Λ'(z), …, S_Λ^{(n)}(z)]`.
    pub fn s_derivatives(
        &self,
        case: CaseTag,
        z: Complex,
        n: usize,
    ) -> Result<Vec<Complex>, EllipticError> {
        let s = case
            .s_derivative_order()
            .ok_or(EllipticError::NotTorusCase(case))?;
        let mut all = self.wp_derivatives(z, s + n)?;
        Ok(all.split_off(s))
    }

    /// Constant term of the Laurent expansion of `S_Λ` at 0.
    pub fn laurent_constant(&self, case: CaseTag) -> Result<Complex, EllipticError> {
        let s = case
            .s_derivative_order()
            .ok_or(EllipticError::NotTorusCase(case))?;
        if s % 2 == 1 {
            return Ok(Complex::new(0.0, 0.0));
        }
        // z^s term of ℘ is c_{s/2+1} z^s; differentiating s times leaves c·s!.
        let k = s / 2 + 1;
        if k < 2 {
            return Ok(Complex::new(0.0, 0.0));
        }
        let c = laurent_coefficients(self.g2, self.g3, k);
        let factorial: f64 = (1..=s).map(|i| i as f64).product();
        Ok(c[k] * factorial)
    }

    /// Reduces `x` modulo `⟨1, τ⟩` into the centred parallelogram.
    fn reduce_unit(&self, mut x: Complex, original: Complex) -> Result<Complex, EllipticError> {
        let n = (x.im / self.tau.im).round();
        x -= self.tau * n;
        x.re -= x.re.round();
        let mut nearest = f64::INFINITY;
        for m in -1..=1 {
            for k in -1..=1 {
                nearest = nearest.min((x - (self.tau * k as f64 + m as f64)).norm());
            }
        }
        if nearest < POLE_GUARD {
            return Err(EllipticError::Pole { z: original });
        }
        Ok(x)
    }

    /// `(℘(x), ℘'(x))` on `⟨1, τ⟩` for a reduced argument.
    fn unit_series(&self, x: Complex) -> (Complex, Complex) {
        let pi_x = x * PI;
        let (s, c) = (pi_x.sin(), pi_x.cos());
        let s2 = s * s;
        let mut p0 = PI * PI / s2;
        let mut p1 = -2.0 * PI.powi(3) * c / (s2 * s);

        let u = (Complex::i() * 2.0 * PI * x).exp();
        let u_inv = u.inv();
        let two_pi_i = Complex::new(0.0, 2.0 * PI);
        let c2 = two_pi_i * two_pi_i;
        let c3 = c2 * two_pi_i;
        let (mut sum0, mut sum1) = (Complex::new(0.0, 0.0), Complex::new(0.0, 0.0));
        let mut qn = self.q;
        for _ in 1..SERIES_CAP {
            let a = qn * u;
            let b = qn * u_inv;
            let (ia, ib) = ((1.0 - a).inv(), (1.0 - b).inv());
            let t0 = a * ia * ia + b * ib * ib;
            let t1 = a * (1.0 + a) * ia * ia * ia - b * (1.0 + b) * ib * ib * ib;
            sum0 += t0;
            sum1 += t1;
            if t0.norm() + t1.norm() < 1e-18 * (1.0 + sum0.norm() + sum1.norm()) {
                break;
            }
            qn *= self.q;
        }
        p0 += c2 * sum0 + self.unit_constant;
        p1 += c3 * sum1;
        (p0, p1)
    }
}

/// Laurent coefficients `c₂, …, c_n` of `℘(z) = z⁻² + Σ_{k≥2} c_k z^{2k−2}`
/// (entries 0 and 1 are zero).
pub fn laurent_coefficients(g2: Complex, g3: Complex, n: usize) -> Vec<Complex> {
    let mut c = vec![Complex::new(0.0, 0.0); n.max(3) + 1];
    c[2] = g2 / 20.0;
    c[3] = g3 / 28.0;
    for k in 4..=n {
        let mut acc = Complex::new(0.0, 0.0);
        for m in 2..=k - 2 {
            acc += c[m] * c[k - m];
        }
        c[k] = acc * (3.0 / (((2 * k + 1) * (k - 3)) as f64));
    }
    c.truncate(n + 1);
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    /// Direct Eisenstein sums over a square window, the oracle for g2 and g3.
    fn eisenstein_direct(lat: &Lattice, radius: i64) -> (Complex, Complex) {
        let (mut g4, mut g6) = (c(0.0, 0.0), c(0.0, 0.0));
        for m in -radius..=radius {
            for n in -radius..=radius {
                if m == 0 && n == 0 {
                    continue;
                }
                let w = lat.point(m as f64, n as f64);
                let w2 = w * w;
                g4 += (w2 * w2).inv();
                g6 += (w2 * w2 * w2).inv();
            }
        }
        (g4 * 60.0, g6 * 140.0)
    }

    #[test]
    fn special_lattices() {
        let tol = 1e-10;
        let sq = EllipticEvaluator::new(Lattice::square(), tol).unwrap();
        assert!(sq.g3().norm() <= tol, "g3 = {}", sq.g3());
        let hex = EllipticEvaluator::new(Lattice::hexagonal(), tol).unwrap();
        assert!(hex.g2().norm() <= tol, "g2 = {}", hex.g2());

        let rect = Lattice::from_tau(c(0.0, 2.0)).unwrap();
        let ev = EllipticEvaluator::new(rect, tol).unwrap();
        let (g2, g3) = (ev.g2(), ev.g3());
        assert!(g2.norm() > 1.0 && g3.norm() > 1.0);
        assert!(g2.im.abs() < 1e-9 && g3.im.abs() < 1e-9);
        let (d2, d3) = eisenstein_direct(&rect, 400);
        assert!((g2 - d2).norm() / g2.norm() < 1e-4, "{g2} vs {d2}");
        assert!((g3 - d3).norm() / g3.norm() < 1e-4, "{g3} vs {d3}");
    }

    #[test]
    fn tolerance_and_degeneracy_checks() {
        assert_eq!(
            EllipticEvaluator::new(Lattice::square(), 1e-2).unwrap_err(),
            EllipticError::BadTolerance(1e-2)
        );
        let thin = Lattice::from_tau(c(0.0, 200.0)).unwrap();
        assert_eq!(
            EllipticEvaluator::new(thin, 1e-10).unwrap_err(),
            EllipticError::Degenerate
        );
        let long =
            EllipticEvaluator::new(Lattice::from_tau(c(1.55, 6.35)).unwrap(), 1e-10).unwrap();
        let naive = long.g2().powi(3) - long.g3() * long.g3() * 27.0;
        assert!((naive - long.discriminant()).norm() < 1e-6 * long.g2().norm().powi(3));
    }

    #[test]
    fn half_period_is_critical() {
        let ev = EllipticEvaluator::new(Lattice::from_tau(c(0.31, 1.27)).unwrap(), 1e-10).unwrap();
        for half in [c(0.5, 0.0), c(0.155, 0.635), c(0.655, 0.635)] {
            assert!(ev.wp(half, 1).unwrap().norm() < 1e-9);
        }
        // The three half-period values are the roots of 4t³ − g2 t − g3.
        let e: Vec<Complex> = [c(0.5, 0.0), c(0.155, 0.635), c(0.655, 0.635)]
            .iter()
            .map(|&h| ev.wp(h, 0).unwrap())
            .collect();
        for &ei in &e {
            let cubic = ei * ei * ei * 4.0 - ev.g2() * ei - ev.g3();
            assert!(cubic.norm() < 1e-8 * (1.0 + ei.norm().powi(3)));
        }
        assert!((e[0] + e[1] + e[2]).norm() < 1e-9);
    }

    #[test]
    fn poles_are_rejected() {
        let ev = EllipticEvaluator::new(Lattice::square(), 1e-10).unwrap();
        assert!(matches!(
            ev.wp(c(0.0, 0.0), 0),
            Err(EllipticError::Pole { .. })
        ));
        assert!(matches!(
            ev.wp(c(1.0, 1.0 + 1e-9), 0),
            Err(EllipticError::Pole { .. })
        ));
        assert!(ev.wp(c(1e-3, 0.0), 0).is_ok());
        assert_eq!(
            ev.wp(c(0.3, 0.2), 17).unwrap_err(),
            EllipticError::DerivativeOrder(17)
        );
    }

    #[test]
    fn laurent_behaviour_near_zero() {
        let ev = EllipticEvaluator::new(Lattice::from_tau(c(0.2, 1.1)).unwrap(), 1e-10).unwrap();
        let z = c(0.01, 0.004);
        let d = ev.wp_derivatives(z, 2).unwrap();
        let predicted = z.powi(-2) + ev.g2() / 20.0 * z * z + ev.g3() / 28.0 * z.powi(4);
        assert!((d[0] - predicted).norm() < 1e-8);
        // ℘'' − 6z⁻⁴ → g2/10.
        let limit = d[2] - z.powi(-4) * 6.0;
        assert!((limit - ev.g2() / 10.0).norm() < 1e-2 * ev.g2().norm().max(1.0));
        assert!((ev.laurent_constant(CaseTag::P244).unwrap() - ev.g2() / 10.0).norm() < 1e-12);
    }

    #[test]
    fn laurent_constants_by_case() {
        let ev = EllipticEvaluator::new(Lattice::from_tau(c(0.2, 1.1)).unwrap(), 1e-10).unwrap();
        assert_eq!(ev.laurent_constant(CaseTag::P2222).unwrap(), c(0.0, 0.0));
        assert_eq!(ev.laurent_constant(CaseTag::P333).unwrap(), c(0.0, 0.0));
        let k4 = ev.laurent_constant(CaseTag::P236).unwrap();
        assert!((k4 - ev.g3() * (6.0 / 7.0)).norm() < 1e-12 * ev.g3().norm());
        assert!(ev.laurent_constant(CaseTag::P235).is_err());
    }

    #[test]
    fn laurent_recursion_values() {
        // c4 = c2²/3 and c5 = 3c2c3/11.
        let (g2, g3) = (c(1.7, 0.3), c(-0.4, 2.2));
        let cs = laurent_coefficients(g2, g3, 5);
        let (c2, c3) = (g2 / 20.0, g3 / 28.0);
        assert!((cs[4] - c2 * c2 / 3.0).norm() < 1e-15);
        assert!((cs[5] - c2 * c3 * (3.0 / 11.0)).norm() < 1e-15);
    }

    #[test]
    fn s_value_symmetries() {
        let sq = EllipticEvaluator::new(Lattice::square(), 1e-10).unwrap();
        let z = c(0.23, 0.41);
        let a = sq.s_value(CaseTag::P244, z).unwrap();
        let b = sq.s_value(CaseTag::P244, Complex::i() * z).unwrap();
        assert!((a - b).norm() < 1e-9 * a.norm());
        assert!((sq.wp(Complex::i() * z, 0).unwrap() + sq.wp(z, 0).unwrap()).norm() < 1e-9);

        let hex = EllipticEvaluator::new(Lattice::hexagonal(), 1e-10).unwrap();
        let a = hex.s_value(CaseTag::P333, z).unwrap();
        assert!((hex.s_value(CaseTag::P333, -z).unwrap() + a).norm() < 1e-9 * a.norm());
        let omega = Complex::from_polar(1.0, 2.0 * PI / 3.0);
        assert!((hex.s_value(CaseTag::P333, omega * z).unwrap() - a).norm() < 1e-9 * a.norm());
        let a6 = hex.s_value(CaseTag::P236, z).unwrap();
        let zeta = Complex::from_polar(1.0, PI / 3.0);
        assert!((hex.s_value(CaseTag::P236, zeta * z).unwrap() - a6).norm() < 1e-9 * a6.norm());

        let generic =
            EllipticEvaluator::new(Lattice::from_tau(c(0.31, 1.27)).unwrap(), 1e-10).unwrap();
        assert!(
            (generic.s_value(CaseTag::P2222, z).unwrap() - generic.wp(z, 0).unwrap()).norm() == 0.0
        );
        assert!(generic.s_value(CaseTag::TwoTwoStar, z).is_err());
    }

    #[test]
    fn basis_choice_does_not_matter() {
        let tau = c(0.31, 1.27);
        let a = EllipticEvaluator::new(Lattice::from_tau(tau).unwrap(), 1e-10).unwrap();
        let b =
            EllipticEvaluator::new(Lattice::new(c(1.0, 0.0), tau + 3.0).unwrap(), 1e-10).unwrap();
        let cc = EllipticEvaluator::new(Lattice::new(-tau, c(1.0, 0.0)).unwrap(), 1e-10).unwrap();
        for z in [c(0.1, 0.2), c(0.77, -0.3), c(2.4, 3.1)] {
            for k in 0..=4 {
                let va = a.wp(z, k).unwrap();
                assert!((va - b.wp(z, k).unwrap()).norm() < 1e-9 * va.norm().max(1.0));
                assert!((va - cc.wp(z, k).unwrap()).norm() < 1e-9 * va.norm().max(1.0));
            }
        }
    }
}
