use serde::Serialize;

use super::{blocks::is_primitive, PermError, PermGroup};
use crate::lattice::is_prime;

/// Labelling of the points by `F_p` under which every generator acts as
/// `x ↦ a·x + b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AffineAction {
    pub prime: u64,
    /// `labeling[point]` is the field element attached to `point`.
    pub labeling: Vec<u64>,
    /// `(a_i, b_i)` per generator.
    pub generator_images: Vec<(u64, u64)>,
}

impl AffineAction {
    /// Multiplicative order of `a_i`, or `None` for a translation.
    pub fn multiplier_order(&self, i: usize) -> Option<u64> {
        let a = self.generator_images[i].0;
        if a == 1 {
            return None;
        }
        let mut x = a;
        let mut k = 1;
        while x != 1 {
            x = x * a % self.prime;
            k += 1;
        }
        Some(k)
    }

    /// Point with label `x`.
    pub fn point(&self, x: u64) -> usize {
        self.labeling
            .iter()
            .position(|&l| l == x)
            .expect("labeling is a bijection")
    }
}

/// Identifies a solvable primitive group of prime degree with a group of
/// affine maps of `F_p`.
///
/// The last nontrivial term of the derived series is the translation
/// subgroup; its element sending 0 to 1 fixes the labelling.
pub fn affine_identification(group: &PermGroup) -> Result<AffineAction, PermError> {
    let p = group.degree() as u64;
    if !is_prime(p) {
        return Err(PermError::NotPrime(group.degree()));
    }
    if !is_primitive(group) {
        return Err(PermError::NotPrimitive);
    }
    let series = group.derived_series()?;
    let Some(translations) = series.iter().rev().find(|g| g.order().is_ok_and(|n| n > 1)) else {
        return Err(PermError::NotSolvable);
    };
    if series.last().expect("nonempty").order()? != 1 {
        return Err(PermError::NotSolvable);
    }
    let t = translations
        .elements()?
        .into_iter()
        .find(|t| t.apply(0) == 1)
        .ok_or(PermError::NotSolvable)?;
    let mut labeling = vec![u64::MAX; group.degree()];
    let mut x = 0;
    for k in 0..p {
        labeling[x] = k;
        x = t.apply(x);
    }
    if labeling.contains(&u64::MAX) {
        return Err(PermError::NotSolvable);
    }

    let mut generator_images = Vec::with_capacity(group.gens().len());
    for g in group.gens() {
        let b = labeling[g.apply(0)];
        let a = (labeling[g.apply(t.apply(0))] + p - b) % p;
        let affine = a != 0
            && (0..group.degree()).all(|x| labeling[g.apply(x)] == (a * labeling[x] + b) % p);
        if !affine {
            return Err(PermError::NotAffine(g.to_string()));
        }
        generator_images.push((a, b));
    }
    Ok(AffineAction {
        prime: p,
        labeling,
        generator_images,
    })
}
