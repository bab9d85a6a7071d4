use serde::Serialize;

use super::{PermError, PermGroup, Permutation};

/// Local monodromies `σ_1, …, σ_b` of a branched covering of the sphere.
///
/// The product `σ_1·σ_2·…·σ_b`, applying `σ_1` first, is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonodromyDatum {
    degree: usize,
    branch_points: Vec<String>,
    perms: Vec<Permutation>,
    exponents: Option<Vec<u32>>,
}

impl MonodromyDatum {
    pub fn new(perms: Vec<Permutation>, exponents: Option<Vec<u32>>) -> Result<Self, PermError> {
        let labels = (1..=perms.len()).map(|i| format!("w{i}")).collect();
        Self::with_labels(labels, perms, exponents)
    }

    pub fn with_labels(
        branch_points: Vec<String>,
        perms: Vec<Permutation>,
        exponents: Option<Vec<u32>>,
    ) -> Result<Self, PermError> {
        let degree = perms
            .first()
            .map(Permutation::degree)
            .ok_or(PermError::EmptyDegree)?;
        if let Some(p) = perms.iter().find(|p| p.degree() != degree) {
            return Err(PermError::DegreeMismatch {
                expected: degree,
                found: p.degree(),
            });
        }
        if branch_points.len() != perms.len() {
            return Err(PermError::BadDatum(format!(
                "{} branch labels for {} permutations",
                branch_points.len(),
                perms.len()
            )));
        }
        if let Some(e) = &exponents {
            if e.len() != perms.len() {
                return Err(PermError::BadDatum(format!(
                    "{} exponents for {} permutations",
                    e.len(),
                    perms.len()
                )));
            }
        }
        Ok(MonodromyDatum {
            degree,
            branch_points,
            perms,
            exponents,
        })
    }

    /// Parses `"(1 2 3);(1 3 2)"`; all permutations share the largest degree named.
    pub fn parse(text: &str, exponents: Option<Vec<u32>>) -> Result<Self, PermError> {
        let parts: Vec<&str> = text.split(';').map(str::trim).collect();
        let loose = parts
            .iter()
            .map(|p| Permutation::parse(p, None))
            .collect::<Result<Vec<_>, _>>()?;
        let degree = loose.iter().map(Permutation::degree).max().unwrap_or(1);
        let perms = parts
            .iter()
            .map(|p| Permutation::parse(p, Some(degree)))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(perms, exponents)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn branch_points(&self) -> &[String] {
        &self.branch_points
    }

    pub fn perms(&self) -> &[Permutation] {
        &self.perms
    }

    pub fn exponents(&self) -> Option<&[u32]> {
        self.exponents.as_deref()
    }

    pub fn product(&self) -> Permutation {
        self.perms
            .iter()
            .fold(Permutation::identity(self.degree), |acc, p| acc.then(p))
    }

    pub fn product_is_identity(&self) -> bool {
        self.product().is_identity()
    }

    pub fn group(&self) -> PermGroup {
        PermGroup::new(self.degree, self.perms.clone()).expect("degrees checked on construction")
    }

    pub fn is_transitive(&self) -> bool {
        self.group().is_transitive()
    }

    /// Product identity and transitivity.
    pub fn validate(&self) -> Result<(), PermError> {
        if !self.product_is_identity() {
            return Err(PermError::BadDatum(format!(
                "product of the local monodromies is {}",
                self.product()
            )));
        }
        if !self.is_transitive() {
            return Err(PermError::Intransitive);
        }
        Ok(())
    }

    /// Same datum relabelled by `g`.
    pub fn conjugate_by(&self, g: &Permutation) -> MonodromyDatum {
        MonodromyDatum {
            perms: self.perms.iter().map(|p| p.conjugate_by(g)).collect(),
            ..self.clone()
        }
    }
}

/// Genus of the covering surface, from `2 − 2g = 2d − Σ (d − #cycles(σ_i))`.
pub fn genus_from_monodromy(datum: &MonodromyDatum) -> Result<u64, PermError> {
    datum.validate()?;
    let d = datum.degree as i64;
    let ramification: i64 = datum.perms.iter().map(|p| d - p.cycle_count() as i64).sum();
    genus_from_euler(2 * d - ramification)
}

/// Order of the monodromy group and genus of the Galois closure, whose Euler
/// characteristic is `2N − Σ (N − N/ord σ_i)`.
pub fn galois_closure_genus(datum: &MonodromyDatum) -> Result<(u64, u64), PermError> {
    datum.validate()?;
    let n = datum.group().order()? as i64;
    let ramification: i64 = datum.perms.iter().map(|p| n - n / p.order() as i64).sum();
    Ok((n as u64, genus_from_euler(2 * n - ramification)?))
}

fn genus_from_euler(chi: i64) -> Result<u64, PermError> {
    if chi > 2 || (2 - chi) % 2 != 0 {
        return Err(PermError::BadDatum(format!(
            "Euler characteristic {chi} gives no valid genus"
        )));
    }
    Ok(((2 - chi) / 2) as u64)
}

/// Pull-back of `z ↦ zⁿ` along `z ↦ zᵐ` over a disc: `(components, f-multiplicity, g-multiplicity)`.
pub fn local_pullback(n: u64, m: u64) -> (u64, u64, u64) {
    let g = gcd(n, m);
    (g, n / g, m / g)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `σ_i^{d_i} = 1` for every constrained exponent.
pub fn check_local_orders(datum: &MonodromyDatum) -> bool {
    match &datum.exponents {
        None => true,
        Some(e) => datum
            .perms
            .iter()
            .zip(e)
            .all(|(p, &d)| d == 0 || p.pow(d as u64).is_identity()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_map_is_rational() {
        for d in 2..8 {
            let cycle = Permutation::new((0..d).map(|i| (i + 1) % d).collect()).unwrap();
            let datum = MonodromyDatum::new(vec![cycle.clone(), cycle.inverse()], None).unwrap();
            assert_eq!(genus_from_monodromy(&datum).unwrap(), 0);
            assert_eq!(galois_closure_genus(&datum).unwrap(), (d as u64, 0));
        }
        let datum = MonodromyDatum::parse("(1 2 3);(1 3 2)", None).unwrap();
        assert_eq!(genus_from_monodromy(&datum).unwrap(), 0);
    }

    #[test]
    fn torus_double_cover() {
        let datum =
            MonodromyDatum::parse("(1 2);(1 2);(1 2);(1 2)", Some(vec![2, 2, 2, 2])).unwrap();
        assert_eq!(genus_from_monodromy(&datum).unwrap(), 1);
        assert!(check_local_orders(&datum));
    }

    #[test]
    fn symmetric_group_on_three() {
        let datum = MonodromyDatum::parse("(1 2);(2 3);(1 2 3)", None).unwrap();
        assert!(datum.product_is_identity());
        assert_eq!(galois_closure_genus(&datum).unwrap(), (6, 0));
    }

    #[test]
    fn invalid_data() {
        let bad = MonodromyDatum::parse("(1 2);(2 3)", None).unwrap();
        assert!(matches!(
            genus_from_monodromy(&bad),
            Err(PermError::BadDatum(_))
        ));
        let split = MonodromyDatum::parse("(1 2);(1 2);(3 4);(3 4)", None).unwrap();
        assert!(matches!(
            genus_from_monodromy(&split),
            Err(PermError::Intransitive)
        ));
        assert!(MonodromyDatum::parse("(1 2);(1 2)", Some(vec![2])).is_err());
    }

    #[test]
    fn local_data() {
        assert_eq!(local_pullback(4, 6), (2, 2, 3));
        assert_eq!(local_pullback(1, 9), (1, 1, 9));
        assert_eq!(local_pullback(7, 7), (7, 1, 1));
        let four = MonodromyDatum::parse("(1 2 3 4);(1 4 3 2)", Some(vec![4, 0])).unwrap();
        assert!(check_local_orders(&four));
        let two = MonodromyDatum::parse("(1 2 3 4);(1 4 3 2)", Some(vec![2, 4])).unwrap();
        assert!(!check_local_orders(&two));
    }
}
