use serde::Serialize;

use super::expr::{Branch, Builder, NodeId, RadicalExpr};
use super::RadicalError;
use crate::sampling::SampleRng;
use crate::Complex;

/// `T_n(x)` by `T_{k+1} = 2x·T_k − T_{k−1}`.
pub fn chebyshev_t(n: u32, x: Complex) -> Complex {
    let (mut prev, mut cur) = (Complex::new(1.0, 0.0), x);
    if n == 0 {
        return prev;
    }
    for _ in 1..n {
        let next = x * cur * 2.0 - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// A polynomial map whose inverse is written in radicals.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ForwardMap {
    /// `z ↦ z^d`.
    Power { d: u32 },
    /// `z ↦ T_n(z)`.
    Chebyshev { n: u32 },
    /// `z ↦ a·z + b`.
    Linear {
        #[serde(with = "crate::cx::pair")]
        a: Complex,
        #[serde(with = "crate::cx::pair")]
        b: Complex,
    },
    /// `z ↦ c0 + c1·z + … + c4·z⁴`.
    Quartic {
        #[serde(with = "crate::cx::pair::vec")]
        coeffs: Vec<Complex>,
    },
}

impl ForwardMap {
    pub fn apply(&self, z: Complex) -> Complex {
        match self {
            ForwardMap::Power { d } => z.powu(*d),
            ForwardMap::Chebyshev { n } => chebyshev_t(*n, z),
            ForwardMap::Linear { a, b } => a * z + b,
            ForwardMap::Quartic { coeffs } => coeffs
                .iter()
                .rev()
                .fold(Complex::new(0.0, 0.0), |acc, &c| acc * z + c),
        }
    }

    fn validate(&self) -> Result<(), RadicalError> {
        match self {
            ForwardMap::Power { d: 0 } | ForwardMap::Chebyshev { n: 0 } => {
                Err(RadicalError::NotInvertible("degree 0 map".into()))
            }
            ForwardMap::Linear { a, .. } if a.norm() == 0.0 => {
                Err(RadicalError::NotInvertible("constant linear map".into()))
            }
            ForwardMap::Quartic { coeffs } if coeffs.len() != 5 => {
                Err(RadicalError::NotInvertible(format!(
                    "quartic needs 5 coefficients, got {}",
                    coeffs.len()
                )))
            }
            ForwardMap::Quartic { coeffs } if coeffs[4].norm() == 0.0 => {
                Err(RadicalError::LeadingZero)
            }
            _ => Ok(()),
        }
    }

    /// Appends `f⁻¹(w)` to `b`, reading `w` from node `w`.
    fn build_inverse(&self, b: &mut Builder, w: NodeId) -> Result<NodeId, RadicalError> {
        self.validate()?;
        match self {
            ForwardMap::Power { d: 1 } | ForwardMap::Chebyshev { n: 1 } => Ok(w),
            ForwardMap::Power { d } => b.root(*d, w, Branch::Principal),
            ForwardMap::Chebyshev { n } => chebyshev_inverse(b, *n, w),
            ForwardMap::Linear { a, b: shift } => {
                let shift = b.constant(*shift);
                let a = b.constant(*a);
                let num = b.sub(w, shift);
                Ok(b.div(num, a))
            }
            ForwardMap::Quartic { coeffs } => {
                let c: Vec<NodeId> = coeffs.iter().map(|&c| b.constant(c)).collect();
                let c0 = b.sub(c[0], w);
                quartic_roots(b, [c0, c[1], c[2], c[3], c[4]], coeffs)
            }
        }
    }

    pub fn inverse(&self) -> Result<RadicalExpr, RadicalError> {
        invert_composition(std::slice::from_ref(self))
    }
}

/// `w^{1/d}`, principal branch.
pub fn invert_power(d: u32) -> Result<RadicalExpr, RadicalError> {
    ForwardMap::Power { d }.inverse()
}

/// `z = (u + v)/2` with `u = ⁿ√(w + √(w²−1))` over all branches and
/// `v = ⁿ√(w − √(w²−1))` coupled by `u·v = 1`.
pub fn invert_chebyshev(n: u32) -> Result<RadicalExpr, RadicalError> {
    ForwardMap::Chebyshev { n }.inverse()
}

/// `(w − b)/a`.
pub fn invert_linear(a: Complex, b: Complex) -> Result<RadicalExpr, RadicalError> {
    ForwardMap::Linear { a, b }.inverse()
}

fn chebyshev_inverse(b: &mut Builder, n: u32, w: NodeId) -> Result<NodeId, RadicalError> {
    let one = b.real(1.0);
    let w2 = b.mul(w, w);
    let disc = b.sub(w2, one);
    let s = b.root(2, disc, Branch::Principal)?;
    let plus = b.add(w, s);
    let minus = b.sub(w, s);
    let u = b.root(n, plus, Branch::Any)?;
    let v = b.root(
        n,
        minus,
        Branch::Coupled {
            partner: u,
            product: one,
        },
    )?;
    let sum = b.add(u, v);
    Ok(b.scale(sum, 0.5))
}

/// Relative size below which the depressed quartic counts as biquadratic.
const BIQUADRATIC_EPS: f64 = 1e-12;

/// Roots of `c0 + c1·z + … + c4·z⁴` by Ferrari's method, with the resolvent
/// cubic solved by Cardano. `numeric` carries the coefficient values at
/// construction time, which fix whether the biquadratic path applies.
fn quartic_roots(
    b: &mut Builder,
    c: [NodeId; 5],
    numeric: &[Complex],
) -> Result<NodeId, RadicalError> {
    let a3 = b.div(c[3], c[4]);
    let a2 = b.div(c[2], c[4]);
    let a1 = b.div(c[1], c[4]);
    let a0 = b.div(c[0], c[4]);

    // z = y − a3/4 gives y⁴ + p·y² + q·y + r.
    let a3sq = b.mul(a3, a3);
    let a3cu = b.mul(a3sq, a3);
    let a3qu = b.mul(a3sq, a3sq);
    let p = {
        let t = b.scale(a3sq, 3.0 / 8.0);
        b.sub(a2, t)
    };
    let q = {
        let a2a3 = b.mul(a2, a3);
        let t1 = b.scale(a2a3, 0.5);
        let t2 = b.scale(a3cu, 1.0 / 8.0);
        let s = b.sub(a1, t1);
        b.add(s, t2)
    };
    let r = {
        let a1a3 = b.mul(a1, a3);
        let t1 = b.scale(a1a3, 0.25);
        let a2a3sq = b.mul(a2, a3sq);
        let t2 = b.scale(a2a3sq, 1.0 / 16.0);
        let t3 = b.scale(a3qu, 3.0 / 256.0);
        let s = b.sub(a0, t1);
        let s = b.add(s, t2);
        b.sub(s, t3)
    };
    let shift = b.scale(a3, 0.25);

    let [_, n1, n2, n3, n4] = [numeric[0], numeric[1], numeric[2], numeric[3], numeric[4]];
    let (m3, m2, m1) = (n3 / n4, n2 / n4, n1 / n4);
    let q_value = m1 - m2 * m3 / 2.0 + m3 * m3 * m3 / 8.0;
    let q_scale = m1.norm() + (m2 * m3).norm() / 2.0 + m3.norm().powi(3) / 8.0;

    let y = if q_value.norm() <= BIQUADRATIC_EPS * q_scale.max(1.0) {
        // y² = (−p ± √(p² − 4r))/2.
        let psq = b.mul(p, p);
        let r4 = b.scale(r, 4.0);
        let disc = b.sub(psq, r4);
        let s = b.root(2, disc, Branch::Any)?;
        let t = b.sub(s, p);
        let half = b.scale(t, 0.5);
        b.root(2, half, Branch::Any)?
    } else {
        let m = resolvent_root(b, p, q, r)?;
        // (y² + p/2 + m)² = 2m·(y − q/(4m))², so y² − t·y + p/2 + m + q/(2t) = 0 with t² = 2m.
        let m2x = b.scale(m, 2.0);
        let t = b.root(2, m2x, Branch::Any)?;
        let q_over_t = b.div(q, t);
        let p2 = b.scale(p, 2.0);
        let s = b.add(p2, m2x);
        let qt2 = b.scale(q_over_t, 2.0);
        let s = b.add(s, qt2);
        let zero = b.real(0.0);
        let neg = b.sub(zero, s);
        let inner = b.root(2, neg, Branch::Any)?;
        let sum = b.add(t, inner);
        b.scale(sum, 0.5)
    };
    Ok(b.sub(y, shift))
}

/// One root of `m³ + p·m² + (p²/4 − r)·m − q²/8`.
fn resolvent_root(
    b: &mut Builder,
    p: NodeId,
    q: NodeId,
    r: NodeId,
) -> Result<NodeId, RadicalError> {
    let psq = b.mul(p, p);
    let quarter = b.scale(psq, 0.25);
    let coeff_b = b.sub(quarter, r);
    let qsq = b.mul(q, q);
    let coeff_c = b.scale(qsq, -1.0 / 8.0);

    // m = x − p/3 gives x³ + P·x + Q.
    let big_p = {
        let t = b.scale(psq, 1.0 / 3.0);
        b.sub(coeff_b, t)
    };
    let big_q = {
        let pcu = b.mul(psq, p);
        let t1 = b.scale(pcu, 2.0 / 27.0);
        let pb = b.mul(p, coeff_b);
        let t2 = b.scale(pb, 1.0 / 3.0);
        let s = b.sub(t1, t2);
        b.add(s, coeff_c)
    };
    let half_q = b.scale(big_q, -0.5);
    let disc = {
        let qsq = b.mul(big_q, big_q);
        let t1 = b.scale(qsq, 0.25);
        let pcu = {
            let sq = b.mul(big_p, big_p);
            b.mul(sq, big_p)
        };
        let t2 = b.scale(pcu, 1.0 / 27.0);
        b.add(t1, t2)
    };
    let s = b.root(2, disc, Branch::Aligned(half_q))?;
    let d_arg = b.add(half_q, s);
    let e_arg = b.sub(half_q, s);
    let d = b.root(3, d_arg, Branch::Principal)?;
    let product = b.scale(big_p, -1.0 / 3.0);
    let e = b.root(
        3,
        e_arg,
        Branch::Coupled {
            partner: d,
            product,
        },
    )?;
    let x = b.add(d, e);
    let shift = b.scale(p, 1.0 / 3.0);
    Ok(b.sub(x, shift))
}

/// Roots of `c[0] + c[1]·z + … + c[4]·z⁴`, with multiplicity.
pub fn solve_quartic(c: [Complex; 5]) -> Result<Vec<Complex>, RadicalError> {
    let expr = ForwardMap::Quartic { coeffs: c.to_vec() }.inverse()?;
    let ev = expr.eval(Complex::new(0.0, 0.0))?;
    if ev.values.len() != 4 {
        return Err(RadicalError::BranchesLost {
            expected: 4,
            found: ev.values.len(),
            diagnostics: ev.diagnostics,
        });
    }
    Ok(ev.values)
}

/// Inverse of `parts[n−1] ∘ … ∘ parts[0]` (so `parts[0]` is applied first).
pub fn invert_composition(parts: &[ForwardMap]) -> Result<RadicalExpr, RadicalError> {
    let mut b = Builder::new();
    let mut node = b.var();
    for part in parts.iter().rev() {
        node = part.build_inverse(&mut b, node)?;
    }
    b.finish(node)
}

/// Applies `parts[0]` first.
pub fn apply_composition(parts: &[ForwardMap], z: Complex) -> Complex {
    parts.iter().fold(z, |acc, f| f.apply(acc))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InverseCheck {
    pub max_error: f64,
    pub samples: usize,
    pub values_checked: usize,
    pub dropped_branches: usize,
}

/// Largest `|forward(z) − w| / max(1, |w|)` over sampled `w` and every branch
/// value `z` of `expr` at `w`.
pub fn verify_inverse(
    forward: impl Fn(Complex) -> Complex,
    expr: &RadicalExpr,
    n_samples: usize,
    rng: &mut SampleRng,
    mut sample: impl FnMut(&mut SampleRng) -> Complex,
) -> Result<InverseCheck, RadicalError> {
    let mut check = InverseCheck {
        max_error: 0.0,
        samples: n_samples,
        values_checked: 0,
        dropped_branches: 0,
    };
    for _ in 0..n_samples {
        let w = sample(rng);
        let ev = expr.eval(w)?;
        check.dropped_branches += ev.diagnostics.len();
        if ev.values.is_empty() {
            return Err(RadicalError::BranchesLost {
                expected: 1,
                found: 0,
                diagnostics: ev.diagnostics,
            });
        }
        for z in ev.values {
            check.values_checked += 1;
            let err = (forward(z) - w).norm() / w.norm().max(1.0);
            check.max_error = check.max_error.max(err);
        }
    }
    Ok(check)
}

/// Samples from the disc of radius 2, avoiding the Chebyshev critical values ±1.
pub fn chebyshev_sample(rng: &mut SampleRng) -> Complex {
    loop {
        let w = crate::sampling::disc(rng, 2.0);
        if (w * w - 1.0).norm() >= 1e-8 {
            return w;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn close_multiset(mut a: Vec<Complex>, b: &[Complex], tol: f64) -> bool {
        b.iter()
            .all(|t| match a.iter().position(|x| (x - t).norm() < tol) {
                Some(i) => {
                    a.swap_remove(i);
                    true
                }
                None => false,
            })
    }

    #[test]
    fn chebyshev_polynomials() {
        let x = c(0.3, -0.4);
        assert_eq!(chebyshev_t(0, x), c(1.0, 0.0));
        assert_eq!(chebyshev_t(1, x), x);
        assert!((chebyshev_t(2, x) - (x * x * 2.0 - 1.0)).norm() < 1e-15);
        assert!((chebyshev_t(3, x) - (x * x * x * 4.0 - x * 3.0)).norm() < 1e-15);
    }

    #[test]
    fn power_inverse() {
        assert_eq!(invert_power(1).unwrap(), RadicalExpr::identity());
        assert_eq!(
            invert_power(2).unwrap().eval(c(4.0, 0.0)).unwrap().values,
            vec![c(2.0, 0.0)]
        );
        let w = Complex::from_polar(1.0, std::f64::consts::FRAC_PI_4);
        let z = invert_power(5).unwrap().eval(w).unwrap().values[0];
        assert!((z.powu(5) - w).norm() < 1e-12);
        assert!(invert_power(0).is_err());
    }

    #[test]
    fn chebyshev_inverse_special_points() {
        for n in 1..8 {
            let values = invert_chebyshev(n)
                .unwrap()
                .eval(c(1.0, 0.0))
                .unwrap()
                .values;
            assert!(values.iter().any(|z| (z - 1.0).norm() < 1e-12));
            assert!(values
                .iter()
                .all(|z| (chebyshev_t(n, *z) - 1.0).norm() < 1e-9));
        }
        let values = invert_chebyshev(2)
            .unwrap()
            .eval(c(-1.0, 0.0))
            .unwrap()
            .values;
        assert!(values.iter().all(|z| z.norm() < 1e-15));
        let w = c((7.0f64 * 0.3).cos(), 0.0);
        let ev = invert_chebyshev(7).unwrap().eval(w).unwrap();
        assert!(ev.values.len() <= 7);
        assert!(ev.values.iter().any(|z| (z - 0.3f64.cos()).norm() < 1e-10));
    }

    #[test]
    fn quartic_examples() {
        let one = c(1.0, 0.0);
        let zero = c(0.0, 0.0);
        let roots = solve_quartic([-one, zero, zero, zero, one]).unwrap();
        assert!(close_multiset(
            roots,
            &[one, -one, c(0.0, 1.0), c(0.0, -1.0)],
            1e-12
        ));

        let roots = solve_quartic([one, c(-4.0, 0.0), c(6.0, 0.0), c(-4.0, 0.0), one]).unwrap();
        assert!(roots.iter().all(|z| (z - 1.0).norm() < 1e-12));

        let coeffs = [one, one, zero, zero, one];
        let roots = solve_quartic(coeffs).unwrap();
        let f = ForwardMap::Quartic {
            coeffs: coeffs.to_vec(),
        };
        assert!(roots.iter().all(|&z| f.apply(z).norm() < 1e-12));
        assert!(matches!(
            solve_quartic([one, one, one, one, zero]),
            Err(RadicalError::LeadingZero)
        ));
    }

    #[test]
    fn compositions() {
        let parts = [ForwardMap::Power { d: 2 }, ForwardMap::Power { d: 3 }];
        let e = invert_composition(&parts).unwrap();
        let w = c(64.0, 0.0);
        assert!((e.eval(w).unwrap().values[0] - 2.0).norm() < 1e-12);
        assert_eq!(invert_composition(&[]).unwrap(), RadicalExpr::identity());

        let parts = [
            ForwardMap::Chebyshev { n: 3 },
            ForwardMap::Linear {
                a: c(2.0, 1.0),
                b: c(-0.5, 0.0),
            },
        ];
        let e = invert_composition(&parts).unwrap();
        let mut rng = sampling::rng(3);
        let check = verify_inverse(
            |z| apply_composition(&parts, z),
            &e,
            50,
            &mut rng,
            chebyshev_sample,
        )
        .unwrap();
        assert!(check.max_error < 1e-9, "{check:?}");
    }

    #[test]
    fn quartic_inverse_round_trip() {
        let f = ForwardMap::Quartic {
            coeffs: vec![
                c(0.5, 0.0),
                c(-1.0, 2.0),
                c(0.0, 0.3),
                c(1.5, 0.0),
                c(1.0, -1.0),
            ],
        };
        let e = f.inverse().unwrap();
        let mut rng = sampling::rng(4);
        let check =
            verify_inverse(|z| f.apply(z), &e, 50, &mut rng, |r| sampling::disc(r, 2.0)).unwrap();
        assert_eq!(check.values_checked, 200);
        assert!(check.max_error < 1e-9, "{check:?}");
    }
}
