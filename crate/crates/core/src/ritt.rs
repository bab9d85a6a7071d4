//! Prime-degree rational functions `R` with `S_Λ'(z) = R(S_Λ(z))`.
//!
//! For a sublattice `Λ ⊂ Λ'` of prime index `p`, both invariant under the root
//! of unity group `W`, the nonzero cosets `u ∈ Λ'/Λ` fall into `W`-orbits and
//!
//! ```text
//! R(w) = w + S_Λ'[0] − S_Λ[0] + (−1)^{|W|+1} Σ_orbits (1/|Stab u|) ∂_u^{|W|} log(S_Λ(u) − w)
//! ```
//!
//! Each `∂^{|W|} log(S_Λ(u) − w)` is a polynomial in `1/(S_Λ(u) − w)` whose
//! coefficients are partial Bell polynomials in the derivatives of `S_Λ` at
//! `u`, so `R` comes out directly in partial-fraction form with a pole of
//! order `|orbit|` at every `S_Λ(u)`.

use serde::{Deserialize, Serialize};

use crate::elliptic::{EllipticError, EllipticEvaluator};
use crate::lattice::{
    coset_representatives, enumerate_index_sublattices, is_prime, reduce_to_fundamental_domain,
    Lattice, LatticeError, SublatticeSpec,
};
use crate::poly::{aberth, Poly};
use crate::radical::chebyshev_t;
use crate::sampling::{self, SampleRng};
use crate::{CaseTag, Complex};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RittError {
    #[error(transparent)]
    Elliptic(#[from] EllipticError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("case {0} is not a torus case")]
    NotTorusCase(CaseTag),
    #[error("no index-{p} sublattice of the parent lattice is invariant under W for case {case}")]
    NoInvariantSublattice { case: CaseTag, p: u64 },
    #[error("ill-conditioned expansion at u = {u}: {detail}")]
    IllConditioned { u: Complex, detail: String },
    #[error("pole locations {0} and {1} coincide numerically")]
    PoleCollision(Complex, Complex),
    #[error("assembled constant {assembled} disagrees with lim (S_Λ' − S_Λ) = {measured}")]
    ConstantMismatch {
        assembled: Complex,
        measured: Complex,
    },
    #[error("w = {0} is at a pole of R")]
    AtPole(Complex),
    #[error("sampling kept hitting the pole guard ({0} rejections)")]
    Sampling(usize),
}

/// `Σ_k coeffs[k−1] / (location − w)^k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoleTerm {
    #[serde(with = "crate::cx::pair")]
    pub location: Complex,
    #[serde(with = "crate::cx::pair::vec")]
    pub coeffs: Vec<Complex>,
}

impl PoleTerm {
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn eval(&self, w: Complex) -> Complex {
        let x = (self.location - w).inv();
        self.coeffs
            .iter()
            .rev()
            .fold(Complex::new(0.0, 0.0), |acc, &c| (acc + c) * x)
    }
}

/// `linear·w + constant + Σ_j PoleTerm_j(w)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "RationalWire", try_from = "RationalWire")]
pub struct PartialFractionRational {
    pub case: Option<CaseTag>,
    pub linear: Complex,
    pub constant: Complex,
    pub poles: Vec<PoleTerm>,
}

/// Separation below which `w` counts as sitting on a pole.
const EVAL_POLE_GUARD: f64 = 1e-12;

impl PartialFractionRational {
    pub fn identity() -> Self {
        PartialFractionRational {
            case: None,
            linear: Complex::new(1.0, 0.0),
            constant: Complex::new(0.0, 0.0),
            poles: Vec::new(),
        }
    }

    /// Degree as a map of the sphere, read off the pole orders.
    pub fn degree(&self) -> usize {
        let poles: usize = self.poles.iter().map(PoleTerm::order).sum();
        let at_infinity = usize::from(self.linear != Complex::new(0.0, 0.0));
        (poles + at_infinity).max(1)
    }

    pub fn eval(&self, w: Complex) -> Result<Complex, RittError> {
        let mut acc = self.linear * w + self.constant;
        for pole in &self.poles {
            if (pole.location - w).norm() <= EVAL_POLE_GUARD * (1.0 + pole.location.norm()) {
                return Err(RittError::AtPole(w));
            }
            acc += pole.eval(w);
        }
        Ok(acc)
    }

    /// `(N, D)` with `R = N/D` and `D = Π (a_j − w)^{K_j}`.
    pub fn to_polynomials(&self) -> (Poly, Poly) {
        let one = Complex::new(1.0, 0.0);
        let factors: Vec<Poly> = self
            .poles
            .iter()
            .map(|p| Poly::linear(p.location, -one))
            .collect();
        let den = self
            .poles
            .iter()
            .zip(&factors)
            .fold(Poly::constant(one), |acc, (p, f)| &acc * &f.pow(p.order()));
        let mut num = &Poly::linear(self.constant, self.linear) * &den;
        for (j, pole) in self.poles.iter().enumerate() {
            let others = self
                .poles
                .iter()
                .zip(&factors)
                .enumerate()
                .filter(|(i, _)| *i != j)
                .fold(Poly::constant(one), |acc, (_, (p, f))| {
                    &acc * &f.pow(p.order())
                });
            for (k, &c) in pole.coeffs.iter().enumerate() {
                let term = &factors[j].pow(pole.order() - (k + 1)) * &others;
                num = &num + &term.scale(c);
            }
        }
        (num, den)
    }

    /// Images under `R` of the finite critical points away from the poles.
    ///
    /// The critical points are the zeros of `f = R'·Π (a_j − w)^{K_j+1}`. The
    /// iteration only needs `f/f' = 1/(R''/R' − Σ (K_j+1)/(a_j − w))`, which is
    /// evaluated from the partial fractions; expanding `f` into monomials
    /// would lose the roots to cancellation when the coefficients are large.
    pub fn critical_values(&self) -> Vec<Complex> {
        let zeros = self.poles.iter().map(|p| p.order() + 1).sum::<usize>();
        let n = if self.linear.norm() > 0.0 {
            zeros
        } else {
            zeros.saturating_sub(2)
        };
        if n == 0 {
            return Vec::new();
        }
        let center =
            self.poles.iter().map(|p| p.location).sum::<Complex>() / self.poles.len() as f64;
        let spread = self
            .poles
            .iter()
            .map(|p| (p.location - center).norm())
            .fold(0.0, f64::max);
        let reach = self
            .poles
            .iter()
            .flat_map(|p| p.coeffs.iter().enumerate())
            .map(|(k, c)| (n as f64 * (k + 1) as f64 * c.norm()).powf(1.0 / (k + 2) as f64))
            .fold(1.0, f64::max);
        let newton = |w: Complex| {
            let mut d1 = self.linear;
            let mut d2 = Complex::new(0.0, 0.0);
            let mut q = Complex::new(0.0, 0.0);
            for pole in &self.poles {
                let x = (pole.location - w).inv();
                for (k, &c) in pole.coeffs.iter().enumerate() {
                    let k = k as f64;
                    d1 += c * (k + 1.0) * x.powf(k + 2.0);
                    d2 += c * (k + 1.0) * (k + 2.0) * x.powf(k + 3.0);
                }
                q += x * (pole.order() + 1) as f64;
            }
            d1 / (d2 - d1 * q)
        };
        aberth(n, center, spread + reach, newton)
            .into_iter()
            .filter_map(|w| self.eval(w).ok())
            .collect()
    }
}

#[derive(Serialize, Deserialize)]
struct RationalWire {
    degree: usize,
    case: Option<String>,
    #[serde(with = "crate::cx::pair")]
    linear: Complex,
    #[serde(with = "crate::cx::pair")]
    constant: Complex,
    poles: Vec<PoleTerm>,
}

impl From<PartialFractionRational> for RationalWire {
    fn from(r: PartialFractionRational) -> Self {
        RationalWire {
            degree: r.degree(),
            case: r.case.map(|c| c.short_name().to_string()),
            linear: r.linear,
            constant: r.constant,
            poles: r.poles,
        }
    }
}

impl TryFrom<RationalWire> for PartialFractionRational {
    type Error = String;

    fn try_from(w: RationalWire) -> Result<Self, Self::Error> {
        let case = w
            .case
            .map(|c| c.parse::<CaseTag>())
            .transpose()
            .map_err(|e| e.to_string())?;
        let r = PartialFractionRational {
            case,
            linear: w.linear,
            constant: w.constant,
            poles: w.poles,
        };
        if r.degree() != w.degree {
            return Err(format!(
                "declared degree {} but pole data gives {}",
                w.degree,
                r.degree()
            ));
        }
        Ok(r)
    }
}

/// Partial Bell polynomials `B_{n,k}(x_1, …, x_{n−k+1})` for `0 ≤ k ≤ n`;
/// `xs[i]` holds `x_{i+1}`.
fn partial_bell(xs: &[Complex]) -> Vec<Vec<Complex>> {
    let n = xs.len();
    let zero = Complex::new(0.0, 0.0);
    let mut b = vec![vec![zero; n + 1]; n + 1];
    b[0][0] = Complex::new(1.0, 0.0);
    for m in 1..=n {
        for k in 1..=m {
            let mut acc = zero;
            let mut binom = 1.0; // C(m−1, i−1)
            for i in 1..=m - k + 1 {
                acc += b[m - i][k - 1] * xs[i - 1] * binom;
                binom = binom * (m - i) as f64 / i as f64;
            }
            b[m][k] = acc;
        }
    }
    b
}

/// Coefficients `c_1..c_n` of `dⁿ/duⁿ log(f(u) − w) = Σ_k c_k / (f(u) − w)^k`,
/// given `derivs = [f'(u), …, f⁽ⁿ⁾(u)]`.
pub fn log_derivative_coefficients(derivs: &[Complex]) -> Vec<Complex> {
    let n = derivs.len();
    let bell = partial_bell(derivs);
    let mut factorial = 1.0;
    (1..=n)
        .map(|k| {
            if k > 1 {
                factorial *= (k - 1) as f64;
            }
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            bell[n][k] * (sign * factorial)
        })
        .collect()
}

/// Coefficients of `∂_u^{|W|} log(S_Λ(u) − w)` as a polynomial in
/// `1/(S_Λ(u) − w)`, indexed from the `k = 1` term.
pub fn log_derivative_partial_fractions(
    ev: &EllipticEvaluator,
    case: CaseTag,
    u: Complex,
) -> Result<Vec<Complex>, RittError> {
    let n = case.w_order().ok_or(RittError::NotTorusCase(case))? as usize;
    let s = ev.s_derivatives(case, u, n)?;
    Ok(log_derivative_coefficients(&s[1..]))
}

/// Natural magnitude of `℘^{(k)}` at half a period from the nearest pole,
/// `(k+1)!·(2/L)^{k+2}`.
fn natural_scale(shortest_period: f64, k: usize) -> f64 {
    let factorial: f64 = (1..=k + 1).map(|i| i as f64).product();
    factorial * (2.0 / shortest_period).powi(k as i32 + 2)
}

/// The lattice each case is built on when the caller supplies none.
pub fn default_parent(case: CaseTag) -> Result<Lattice, RittError> {
    match case {
        CaseTag::P244 => Ok(Lattice::square()),
        CaseTag::P333 | CaseTag::P236 => Ok(Lattice::hexagonal()),
        CaseTag::P2222 => Ok(Lattice::from_tau(Complex::new(0.31, 1.27))?),
        other => Err(RittError::NotTorusCase(other)),
    }
}

/// First index-`p` sublattice (in HNF order) invariant under `W`.
pub fn first_invariant_sublattice(
    case: CaseTag,
    parent: &Lattice,
    p: u64,
) -> Result<SublatticeSpec, RittError> {
    let order = case.w_order().ok_or(RittError::NotTorusCase(case))?;
    let action = parent.unit_action(order)?;
    enumerate_index_sublattices(p)
        .into_iter()
        .find(|s| s.is_invariant_under(&action))
        .ok_or(RittError::NoInvariantSublattice { case, p })
}

/// Index-`p` sublattice invariant under `W` whose reduced period ratio has the
/// smallest imaginary part, i.e. the one closest to square or hexagonal.
/// Long thin sublattices push `S_Λ'` below double precision at some cosets.
pub fn best_invariant_sublattice(
    case: CaseTag,
    parent: &Lattice,
    p: u64,
) -> Result<SublatticeSpec, RittError> {
    let order = case.w_order().ok_or(RittError::NotTorusCase(case))?;
    let action = parent.unit_action(order)?;
    let mut best: Option<(f64, SublatticeSpec)> = None;
    for s in enumerate_index_sublattices(p)
        .into_iter()
        .filter(|s| s.is_invariant_under(&action))
    {
        let (tau, _) = reduce_to_fundamental_domain(parent.sublattice(&s).tau())?;
        if best.as_ref().is_none_or(|(b, _)| tau.im < *b - 1e-12) {
            best = Some((tau.im, s));
        }
    }
    best.map(|(_, s)| s)
        .ok_or(RittError::NoInvariantSublattice { case, p })
}

/// Builds `R` with `S_Λ'(z) = R(S_Λ(z))`, where `Λ' = parent` and `Λ` is the
/// sublattice described by `spec` (of prime index, or index 1 for the identity).
pub fn build_ritt_function(
    case: CaseTag,
    parent: &Lattice,
    spec: &SublatticeSpec,
    tol: f64,
) -> Result<PartialFractionRational, RittError> {
    let n = case.w_order().ok_or(RittError::NotTorusCase(case))?;
    let s_order = case.s_derivative_order().unwrap_or(0);
    let ev_parent = EllipticEvaluator::new(*parent, tol)?;
    if spec.index() == 1 {
        return Ok(PartialFractionRational {
            case: Some(case),
            ..PartialFractionRational::identity()
        });
    }
    if !is_prime(spec.index()) {
        return Err(LatticeError::NonPrimeIndex(spec.index()).into());
    }
    let orbits = coset_representatives(parent, spec, n)?;
    let sub = parent.sublattice(spec);
    let ev_sub = EllipticEvaluator::new(sub, tol)?;
    let shortest = ev_sub.reduced_basis().0.norm();
    let sign = if n % 2 == 0 { -1.0 } else { 1.0 };

    let mut poles = Vec::with_capacity(orbits.len());
    for orbit in &orbits {
        let u = orbit.representative().point;
        let derivs = ev_sub.s_derivatives(case, u, n as usize)?;
        let raw = log_derivative_coefficients(&derivs[1..]);
        let scaled_derivs: Vec<Complex> = derivs[1..]
            .iter()
            .enumerate()
            .map(|(j, d)| Complex::new(d.norm().max(natural_scale(shortest, s_order + j + 1)), 0.0))
            .collect();
        let yardstick = log_derivative_coefficients(&scaled_derivs);

        let order = orbit.members.len();
        let factor = sign / orbit.stabilizer as f64;
        let coeffs: Vec<Complex> = raw[..order].iter().map(|&c| c * factor).collect();
        for k in order..raw.len() {
            if raw[k].norm() > 1e-6 * yardstick[k].norm() {
                return Err(RittError::IllConditioned {
                    u,
                    detail: format!(
                        "coefficient of order {} should vanish but is {}",
                        k + 1,
                        raw[k]
                    ),
                });
            }
        }
        // With a trivial stabilizer the leading coefficient is a multiple of
        // S'(u)^order, and it vanishes exactly when S'(u) is lost in the
        // evaluation error. Otherwise compare against the yardstick.
        let vanishes = if orbit.stabilizer == 1 {
            !(derivs[1].norm() > tol.max(f64::EPSILON) * natural_scale(shortest, s_order + 1))
        } else {
            !(raw[order - 1].norm() > 1e-10 * yardstick[order - 1].norm())
        };
        if vanishes {
            return Err(RittError::IllConditioned {
                u,
                detail: format!("leading coefficient of order {order} vanishes"),
            });
        }
        poles.push(PoleTerm {
            location: derivs[0],
            coeffs,
        });
    }
    for (i, a) in poles.iter().enumerate() {
        for b in &poles[i + 1..] {
            let scale = a.location.norm().max(b.location.norm()).max(1.0);
            if (a.location - b.location).norm() < 1e-9 * scale {
                return Err(RittError::PoleCollision(a.location, b.location));
            }
        }
    }

    let constant = ev_parent.laurent_constant(case)? - ev_sub.laurent_constant(case)?;
    check_constant(case, &ev_parent, &ev_sub, constant)?;
    Ok(PartialFractionRational {
        case: Some(case),
        linear: Complex::new(1.0, 0.0),
        constant,
        poles,
    })
}

/// Compares the assembled constant with the mean of `S_Λ'(z) − S_Λ(z)` over a
/// small circle around 0: the principal parts cancel and the mean of the
/// remaining power series is its constant term.
fn check_constant(
    case: CaseTag,
    ev_parent: &EllipticEvaluator,
    ev_sub: &EllipticEvaluator,
    assembled: Complex,
) -> Result<(), RittError> {
    let shortest = ev_parent.reduced_basis().0.norm();
    let radius = 0.15 * shortest;
    let points = 16;
    let mut mean = Complex::new(0.0, 0.0);
    let mut magnitude = 0.0f64;
    for k in 0..points {
        let z = Complex::from_polar(
            radius,
            std::f64::consts::TAU * (k as f64 + 0.5) / points as f64,
        );
        let a = ev_parent.s_value(case, z)?;
        let b = ev_sub.s_value(case, z)?;
        magnitude = magnitude.max(a.norm());
        mean += a - b;
    }
    mean /= points as f64;
    if (mean - assembled).norm() > 1e-7 * magnitude.max(1.0) {
        return Err(RittError::ConstantMismatch {
            assembled,
            measured: mean,
        });
    }
    Ok(())
}

/// Largest deviation `|S_Λ'(z) − R(S_Λ(z))|` over random `z`, relative when
/// `|S_Λ'(z)| > 1`.
pub fn verify_identity(
    r: &PartialFractionRational,
    case: CaseTag,
    parent: &Lattice,
    spec: &SublatticeSpec,
    n_samples: usize,
    rng: &mut SampleRng,
    tol: f64,
) -> Result<f64, RittError> {
    let ev_parent = EllipticEvaluator::new(*parent, tol)?;
    let ev_sub = EllipticEvaluator::new(parent.sublattice(spec), tol)?;
    let guard = 0.02 * ev_parent.reduced_basis().0.norm();
    let mut worst = 0.0f64;
    let mut taken = 0;
    let mut rejected = 0;
    while taken < n_samples {
        let (s, t) = sampling::unit_square(rng);
        let z = parent.point(s, t);
        if parent.distance_to_lattice(z) < guard {
            rejected += 1;
            if rejected > 100 * n_samples.max(1) {
                return Err(RittError::Sampling(rejected));
            }
            continue;
        }
        let lhs = ev_parent.s_value(case, z)?;
        let rhs = r.eval(ev_sub.s_value(case, z)?)?;
        worst = worst.max((lhs - rhs).norm() / lhs.norm().max(1.0));
        taken += 1;
    }
    Ok(worst)
}

/// Largest `|T_n((z+1/z)/2) − (zⁿ+z⁻ⁿ)/2|` over random `z` with `1/2 ≤ |z| ≤ 2`.
pub fn chebyshev_semiconjugacy_check(n: u32, n_samples: usize, rng: &mut SampleRng) -> f64 {
    let mut worst = 0.0f64;
    for _ in 0..n_samples {
        let z = sampling::annulus(rng, 0.5, 2.0);
        let zi = z.inv();
        let x = (z + zi) / 2.0;
        let rhs = (z.powu(n) + zi.powu(n)) / 2.0;
        worst = worst.max((chebyshev_t(n, x) - rhs).norm());
    }
    worst
}
