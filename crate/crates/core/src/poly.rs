//! Dense complex polynomials, just enough to clear denominators of a rational
//! function and locate its critical points.

use std::ops::{Add, Mul, Neg, Sub};

use crate::Complex;

/// Coefficients from the constant term upwards.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly(pub Vec<Complex>);

impl Poly {
    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn constant(c: Complex) -> Self {
        Poly(vec![c]).trimmed()
    }

    /// `a + b·w`.
    pub fn linear(a: Complex, b: Complex) -> Self {
        Poly(vec![a, b]).trimmed()
    }

    pub fn trimmed(mut self) -> Self {
        while self.0.last().is_some_and(|c| *c == Complex::new(0.0, 0.0)) {
            self.0.pop();
        }
        self
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.0.iter().rposition(|c| *c != Complex::new(0.0, 0.0))
    }

    /// Degree ignoring leading coefficients below `eps` times the largest one.
    pub fn numerical_degree(&self, eps: f64) -> Option<usize> {
        let scale = self.0.iter().map(|c| c.norm()).fold(0.0, f64::max);
        self.0.iter().rposition(|c| c.norm() > eps * scale)
    }

    pub fn eval(&self, w: Complex) -> Complex {
        self.0
            .iter()
            .rev()
            .fold(Complex::new(0.0, 0.0), |acc, &c| acc * w + c)
    }

    pub fn derivative(&self) -> Poly {
        Poly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    pub fn pow(&self, n: usize) -> Poly {
        (0..n).fold(Poly::constant(Complex::new(1.0, 0.0)), |acc, _| &acc * self)
    }

    pub fn scale(&self, s: Complex) -> Poly {
        Poly(self.0.iter().map(|&c| c * s).collect())
    }

    /// All roots by Aberth–Ehrlich iteration.
    pub fn roots(&self) -> Vec<Complex> {
        let Some(n) = self.numerical_degree(1e-14) else {
            return Vec::new();
        };
        if n == 0 {
            return Vec::new();
        }
        let lead = self.0[n];
        let monic: Vec<Complex> = self.0[..=n].iter().map(|&c| c / lead).collect();
        let p = Poly(monic);
        let dp = p.derivative();
        // Cauchy bound for the initial circle.
        let radius = 1.0 + p.0[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
        aberth(n, Complex::new(0.0, 0.0), radius * 0.5, |z| {
            p.eval(z) / dp.eval(z)
        })
    }
}

/// Aberth–Ehrlich iteration for the `n` zeros of a function known through its
/// Newton ratio `f/f'`, starting from a circle around `center`.
pub fn aberth(
    n: usize,
    center: Complex,
    radius: f64,
    newton: impl Fn(Complex) -> Complex,
) -> Vec<Complex> {
    let mut z: Vec<Complex> = (0..n)
        .map(|k| {
            center + Complex::from_polar(radius, 0.4 + std::f64::consts::TAU * k as f64 / n as f64)
        })
        .collect();
    for _ in 0..1000 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let ratio = newton(z[i]);
            if ratio.norm() == 0.0 || !ratio.is_finite() {
                continue;
            }
            let repulsion: Complex = (0..n)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let step = ratio / (1.0 - ratio * repulsion);
            if step.is_finite() {
                z[i] -= step;
                moved = moved.max(step.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.0.len().max(rhs.0.len());
        let zero = Complex::new(0.0, 0.0);
        Poly(
            (0..n)
                .map(|k| *self.0.get(k).unwrap_or(&zero) + *rhs.0.get(k).unwrap_or(&zero))
                .collect(),
        )
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly(self.0.iter().map(|&c| -c).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.0.is_empty() || rhs.0.is_empty() {
            return Poly::zero();
        }
        let mut out = vec![Complex::new(0.0, 0.0); self.0.len() + rhs.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            for (j, &b) in rhs.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out)
    }
}
