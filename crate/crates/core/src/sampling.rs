//! Seeded sampling shared by the verification routines.
//!
//! Every random draw in the crate flows from a [`ChaCha8Rng`] built here, so a
//! run is reproducible from its seed alone.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::Complex;

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform point in the disc `|z| ≤ radius`.
pub fn disc(rng: &mut SampleRng, radius: f64) -> Complex {
    let r = radius * rng.random::<f64>().sqrt();
    let theta = std::f64::consts::TAU * rng.random::<f64>();
    Complex::from_polar(r, theta)
}

/// Uniform point in the annulus `inner ≤ |z| ≤ outer`.
pub fn annulus(rng: &mut SampleRng, inner: f64, outer: f64) -> Complex {
    let u: f64 = rng.random();
    let r = (inner * inner + u * (outer * outer - inner * inner)).sqrt();
    let theta = std::f64::consts::TAU * rng.random::<f64>();
    Complex::from_polar(r, theta)
}

/// Uniform pair of unit-interval coordinates.
pub fn unit_square(rng: &mut SampleRng) -> (f64, f64) {
    (rng.random(), rng.random())
}
