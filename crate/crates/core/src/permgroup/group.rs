use std::collections::{HashSet, VecDeque};

use super::{PermError, Permutation};

/// Largest group the closure enumeration will build.
pub const ORDER_CAP: usize = 10_000_000;

/// A permutation group given by generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermGroup {
    degree: usize,
    gens: Vec<Permutation>,
}

impl PermGroup {
    pub fn new(degree: usize, gens: Vec<Permutation>) -> Result<Self, PermError> {
        if degree == 0 {
            return Err(PermError::EmptyDegree);
        }
        if let Some(g) = gens.iter().find(|g| g.degree() != degree) {
            return Err(PermError::DegreeMismatch {
                expected: degree,
                found: g.degree(),
            });
        }
        Ok(PermGroup { degree, gens })
    }

    /// Group on the common degree of `gens`.
    pub fn generated_by(gens: &[Permutation]) -> Result<Self, PermError> {
        let degree = gens
            .first()
            .map(Permutation::degree)
            .ok_or(PermError::EmptyDegree)?;
        Self::new(degree, gens.to_vec())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn gens(&self) -> &[Permutation] {
        &self.gens
    }

    pub fn identity(&self) -> Permutation {
        Permutation::identity(self.degree)
    }

    /// Every element, by breadth-first closure from the identity.
    pub fn elements(&self) -> Result<Vec<Permutation>, PermError> {
        let id = self.identity();
        let mut seen: HashSet<Permutation> = HashSet::from([id.clone()]);
        let mut out = vec![id.clone()];
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in &self.gens {
                let y = x.then(g);
                if seen.insert(y.clone()) {
                    if seen.len() > ORDER_CAP {
                        return Err(PermError::OrderCap(ORDER_CAP));
                    }
                    out.push(y.clone());
                    queue.push_back(y);
                }
            }
        }
        Ok(out)
    }

    pub fn order(&self) -> Result<usize, PermError> {
        Ok(self.elements()?.len())
    }

    pub fn orbit(&self, point: usize) -> Vec<usize> {
        let mut seen = vec![false; self.degree];
        let mut out = vec![point];
        seen[point] = true;
        let mut i = 0;
        while i < out.len() {
            let x = out[i];
            for g in &self.gens {
                let y = g.apply(x);
                if !std::mem::replace(&mut seen[y], true) {
                    out.push(y);
                }
            }
            i += 1;
        }
        out.sort_unstable();
        out
    }

    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree];
        let mut out = Vec::new();
        for x in 0..self.degree {
            if !seen[x] {
                let orbit = self.orbit(x);
                for &y in &orbit {
                    seen[y] = true;
                }
                out.push(orbit);
            }
        }
        out
    }

    pub fn is_transitive(&self) -> bool {
        self.orbit(0).len() == self.degree
    }

    /// Commutator subgroup: the normal closure of the generator commutators.
    pub fn derived_subgroup(&self) -> Result<PermGroup, PermError> {
        let mut gens: Vec<Permutation> = Vec::new();
        for (i, a) in self.gens.iter().enumerate() {
            for b in &self.gens[i + 1..] {
                let c = a.inverse().then(&b.inverse()).then(a).then(b);
                if !c.is_identity() && !gens.contains(&c) {
                    gens.push(c);
                }
            }
        }
        self.normal_closure(gens)
    }

    fn normal_closure(&self, mut gens: Vec<Permutation>) -> Result<PermGroup, PermError> {
        loop {
            let sub = PermGroup {
                degree: self.degree,
                gens: gens.clone(),
            };
            let members: HashSet<Permutation> = sub.elements()?.into_iter().collect();
            let missing: Vec<Permutation> = gens
                .iter()
                .flat_map(|h| self.gens.iter().map(move |g| h.conjugate_by(g)))
                .filter(|c| !members.contains(c))
                .collect();
            if missing.is_empty() {
                return Ok(sub);
            }
            for c in missing {
                if !gens.contains(&c) {
                    gens.push(c);
                }
            }
        }
    }

    /// `G = G⁽⁰⁾ ⊇ G⁽¹⁾ ⊇ …`, stopping at the first repeated order.
    pub fn derived_series(&self) -> Result<Vec<PermGroup>, PermError> {
        let mut series = vec![self.clone()];
        let mut order = self.order()?;
        while order > 1 {
            let next = series.last().expect("nonempty").derived_subgroup()?;
            let next_order = next.order()?;
            if next_order == order {
                break;
            }
            order = next_order;
            series.push(next);
        }
        Ok(series)
    }

    pub fn is_solvable(&self) -> Result<bool, PermError> {
        let series = self.derived_series()?;
        Ok(series.last().expect("nonempty").order()? == 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(text: &str, d: usize) -> Permutation {
        Permutation::parse(text, Some(d)).unwrap()
    }

    #[test]
    fn orders() {
        let c5 = PermGroup::new(5, vec![perm("(1 2 3 4 5)", 5)]).unwrap();
        assert_eq!(c5.order().unwrap(), 5);
        let trivial = PermGroup::new(3, vec![Permutation::identity(3)]).unwrap();
        assert_eq!(trivial.order().unwrap(), 1);
        let s4 = PermGroup::new(4, vec![perm("(1 2)", 4), perm("(1 2 3 4)", 4)]).unwrap();
        assert_eq!(s4.order().unwrap(), 24);
    }

    #[test]
    fn orbits_and_transitivity() {
        assert!(!PermGroup::new(3, vec![Permutation::identity(3)])
            .unwrap()
            .is_transitive());
        assert!(PermGroup::new(3, vec![perm("(1 2 3)", 3)])
            .unwrap()
            .is_transitive());
        let g = PermGroup::new(4, vec![perm("(1 2)(3 4)", 4)]).unwrap();
        assert!(!g.is_transitive());
        assert_eq!(g.orbits(), vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn derived_series_orders() {
        let s4 = PermGroup::new(4, vec![perm("(1 2)", 4), perm("(1 2 3 4)", 4)]).unwrap();
        let orders: Vec<usize> = s4
            .derived_series()
            .unwrap()
            .iter()
            .map(|g| g.order().unwrap())
            .collect();
        assert_eq!(orders, vec![24, 12, 4, 1]);
        assert!(s4.is_solvable().unwrap());

        let a5 = PermGroup::new(5, vec![perm("(1 2 3)", 5), perm("(1 2 3 4 5)", 5)]).unwrap();
        let series = a5.derived_series().unwrap();
        assert_eq!(series.len(), 1);
        assert_eq!(series[0].order().unwrap(), 60);
        assert!(!a5.is_solvable().unwrap());

        assert!(PermGroup::new(2, vec![]).unwrap().is_solvable().unwrap());
    }

    #[test]
    fn degree_checks() {
        assert!(PermGroup::new(3, vec![perm("(1 2)", 2)]).is_err());
        assert!(PermGroup::generated_by(&[]).is_err());
    }
}
