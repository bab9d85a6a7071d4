use crate::Complex;

use super::RadicalError;

pub type NodeId = usize;

/// Which of the `k` values of a `k`-th root a node takes.
#[derive(Debug, Clone, PartialEq)]
pub enum Branch {
    /// `exp(log(x)/k)` with the principal logarithm.
    Principal,
    /// `j`-th branch: the principal value times `e^{2πij/k}`.
    Index(u32),
    /// Every branch; evaluation forks once per value.
    Any,
    /// The value is `product / partner`, where `partner` is another root
    /// node. When both vanish the principal root is taken.
    Coupled { partner: NodeId, product: NodeId },
    /// The branch closest in direction to `reference`.
    Aligned(NodeId),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Const(Complex),
    Var,
    Add(NodeId, NodeId),
    Sub(NodeId, NodeId),
    Mul(NodeId, NodeId),
    Div(NodeId, NodeId),
    Root { k: u32, arg: NodeId, branch: Branch },
}

impl Node {
    fn children(&self) -> Vec<NodeId> {
        match *self {
            Node::Const(_) | Node::Var => vec![],
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => vec![a, b],
            Node::Root {
                arg, ref branch, ..
            } => {
                let mut v = vec![arg];
                match *branch {
                    Branch::Coupled { partner, product } => v.extend([partner, product]),
                    Branch::Aligned(r) => v.push(r),
                    _ => {}
                }
                v
            }
        }
    }
}

/// An expression in one variable `w` built from constants, field operations
/// and roots. Nodes live in an arena so that a root shared by several
/// subexpressions takes the same branch everywhere.
#[derive(Debug, Clone, PartialEq)]
pub struct RadicalExpr {
    nodes: Vec<Node>,
    root: NodeId,
}

/// Appends nodes to an arena; every node may only refer to earlier ones.
#[derive(Debug, Default)]
pub struct Builder {
    nodes: Vec<Node>,
}

impl Builder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, node: Node) -> Result<NodeId, RadicalError> {
        let id = self.nodes.len();
        if let Some(&bad) = node.children().iter().find(|&&c| c >= id) {
            return Err(RadicalError::Malformed(format!(
                "node {id} refers forward to {bad}"
            )));
        }
        match &node {
            Node::Root { k, .. } if *k < 2 => {
                return Err(RadicalError::Malformed(format!("root of index {k}")));
            }
            Node::Root {
                k,
                branch: Branch::Index(j),
                ..
            } if j >= k => {
                return Err(RadicalError::Malformed(format!(
                    "branch {j} of a {k}-th root"
                )));
            }
            Node::Root {
                branch: Branch::Coupled { partner, .. },
                ..
            } if !matches!(self.nodes[*partner], Node::Root { .. }) => {
                return Err(RadicalError::Malformed(format!(
                    "coupling partner {partner} is not a root"
                )));
            }
            _ => {}
        }
        self.nodes.push(node);
        Ok(id)
    }

    fn push_ok(&mut self, node: Node) -> NodeId {
        self.push(node).expect("operands come from this builder")
    }

    pub fn constant(&mut self, c: Complex) -> NodeId {
        self.push_ok(Node::Const(c))
    }

    pub fn real(&mut self, x: f64) -> NodeId {
        self.constant(Complex::new(x, 0.0))
    }

    pub fn var(&mut self) -> NodeId {
        self.push_ok(Node::Var)
    }

    pub fn add(&mut self, a: NodeId, b: NodeId) -> NodeId {
        self.push_ok(Node::Add(a, b))
    }

    pub fn sub(&mut self, a: NodeId, b: NodeId) -> NodeId {
        self.push_ok(Node::Sub(a, b))
    }

    pub fn mul(&mut self, a: NodeId, b: NodeId) -> NodeId {
        self.push_ok(Node::Mul(a, b))
    }

    pub fn div(&mut self, a: NodeId, b: NodeId) -> NodeId {
        self.push_ok(Node::Div(a, b))
    }

    pub fn scale(&mut self, a: NodeId, s: f64) -> NodeId {
        let c = self.real(s);
        self.mul(a, c)
    }

    pub fn root(&mut self, k: u32, arg: NodeId, branch: Branch) -> Result<NodeId, RadicalError> {
        self.push(Node::Root { k, arg, branch })
    }

    pub fn finish(self, root: NodeId) -> Result<RadicalExpr, RadicalError> {
        if root >= self.nodes.len() {
            return Err(RadicalError::Malformed(format!(
                "root {root} is not a node"
            )));
        }
        Ok(RadicalExpr {
            nodes: self.nodes,
            root,
        })
    }
}

/// Values of an expression over all admissible branch assignments.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Evaluation {
    /// One value per surviving assignment, multiplicities kept.
    pub values: Vec<Complex>,
    /// Why assignments were dropped.
    pub diagnostics: Vec<String>,
}

impl Evaluation {
    /// Values with near-duplicates (within `tol` relative) merged.
    pub fn distinct(&self, tol: f64) -> Vec<Complex> {
        let mut out: Vec<Complex> = Vec::new();
        for &v in &self.values {
            if !out.iter().any(|u| (u - v).norm() <= tol * (1.0 + v.norm())) {
                out.push(v);
            }
        }
        out
    }
}

/// Cap on simultaneously tracked branch assignments.
pub const MAX_BRANCHES: usize = 4096;

fn zero() -> Complex {
    Complex::new(0.0, 0.0)
}

fn principal_root(x: Complex, k: u32) -> Complex {
    if x == zero() {
        zero()
    } else {
        x.powf(1.0 / k as f64)
    }
}

fn all_roots(x: Complex, k: u32) -> Vec<Complex> {
    let r = principal_root(x, k);
    (0..k)
        .map(|j| r * Complex::from_polar(1.0, std::f64::consts::TAU * j as f64 / k as f64))
        .collect()
}

impl RadicalExpr {
    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    /// The expression `w`.
    pub fn identity() -> Self {
        RadicalExpr {
            nodes: vec![Node::Var],
            root: 0,
        }
    }

    /// Number of `k`-th root nodes.
    pub fn root_count(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n, Node::Root { .. }))
            .count()
    }

    /// Evaluates at `w`, forking at every [`Branch::Any`] root.
    pub fn eval(&self, w: Complex) -> Result<Evaluation, RadicalError> {
        let mut worlds: Vec<Vec<Complex>> = vec![Vec::with_capacity(self.nodes.len())];
        let mut diagnostics = Vec::new();
        // Nodes the root does not depend on neither fork nor drop branches.
        let mut live = vec![false; self.nodes.len()];
        live[self.root] = true;
        for id in (0..self.nodes.len()).rev() {
            if live[id] {
                for c in self.nodes[id].children() {
                    live[c] = true;
                }
            }
        }
        for (id, node) in self.nodes.iter().enumerate() {
            if !live[id] {
                for vals in &mut worlds {
                    vals.push(Complex::new(f64::NAN, f64::NAN));
                }
                continue;
            }
            let mut next = Vec::with_capacity(worlds.len());
            for mut vals in worlds {
                let choices: Vec<Complex> = match *node {
                    Node::Const(c) => vec![c],
                    Node::Var => vec![w],
                    Node::Add(a, b) => vec![vals[a] + vals[b]],
                    Node::Sub(a, b) => vec![vals[a] - vals[b]],
                    Node::Mul(a, b) => vec![vals[a] * vals[b]],
                    Node::Div(a, b) => {
                        if vals[b] == zero() || !(vals[a] / vals[b]).is_finite() {
                            diagnostics
                                .push(format!("node {id}: division by zero, branch dropped"));
                            continue;
                        }
                        vec![vals[a] / vals[b]]
                    }
                    Node::Root { k, arg, ref branch } => {
                        let x = vals[arg];
                        match *branch {
                            Branch::Principal => vec![principal_root(x, k)],
                            Branch::Index(j) => vec![all_roots(x, k)[j as usize]],
                            Branch::Any => all_roots(x, k),
                            Branch::Aligned(r) => {
                                let reference = vals[r];
                                let best = all_roots(x, k)
                                    .into_iter()
                                    .max_by(|a, b| {
                                        let sa = (reference.conj() * a).re;
                                        let sb = (reference.conj() * b).re;
                                        sa.total_cmp(&sb)
                                    })
                                    .expect("k ≥ 2");
                                vec![best]
                            }
                            Branch::Coupled { partner, product } => {
                                let (pv, prod) = (vals[partner], vals[product]);
                                match coupled_value(x, k, pv, prod) {
                                    Ok(v) => vec![v],
                                    Err(msg) => {
                                        diagnostics
                                            .push(format!("node {id}: {msg}, branch dropped"));
                                        continue;
                                    }
                                }
                            }
                        }
                    }
                };
                let last = choices.len() - 1;
                for (i, v) in choices.into_iter().enumerate() {
                    if i == last {
                        vals.push(v);
                        next.push(std::mem::take(&mut vals));
                    } else {
                        let mut fork = vals.clone();
                        fork.push(v);
                        next.push(fork);
                    }
                }
            }
            if next.len() > MAX_BRANCHES {
                return Err(RadicalError::TooManyBranches(next.len()));
            }
            worlds = next;
        }
        Ok(Evaluation {
            values: worlds.iter().map(|v| v[self.root]).collect(),
            diagnostics,
        })
    }
}

fn coupled_value(
    x: Complex,
    k: u32,
    partner: Complex,
    product: Complex,
) -> Result<Complex, String> {
    let scale = x
        .norm()
        .max(product.norm().powi(k as i32).sqrt())
        .max(1e-300);
    if partner.norm() <= 1e-300 {
        if product.norm() <= 1e-12 * scale.max(1.0) {
            return Ok(principal_root(x, k));
        }
        return Err(format!("coupled partner vanishes but product is {product}"));
    }
    let v = product / partner;
    let vk = v.powu(k);
    if (vk - x).norm() > 1e-6 * x.norm().max(vk.norm()).max(1e-12) {
        return Err(format!("coupled value {v} is not a {k}-th root of {x}"));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn basic_values() {
        assert_eq!(
            RadicalExpr::identity().eval(c(2.0, 3.0)).unwrap().values,
            vec![c(2.0, 3.0)]
        );
        let mut b = Builder::new();
        let w = b.var();
        let r = b.root(2, w, Branch::Principal).unwrap();
        let e = b.finish(r).unwrap();
        assert_eq!(e.eval(c(4.0, 0.0)).unwrap().values, vec![c(2.0, 0.0)]);
    }

    #[test]
    fn shared_root_takes_one_branch() {
        let mut b = Builder::new();
        let w = b.var();
        let r = b.root(2, w, Branch::Any).unwrap();
        let diff = b.sub(r, r);
        let e = b.finish(diff).unwrap();
        let ev = e.eval(c(3.0, 1.0)).unwrap();
        assert_eq!(ev.values.len(), 2);
        assert!(ev.values.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn indexed_and_aligned() {
        let mut b = Builder::new();
        let w = b.var();
        let r = b.root(4, w, Branch::Index(1)).unwrap();
        let e = b.finish(r).unwrap();
        let v = e.eval(c(16.0, 0.0)).unwrap().values[0];
        assert!((v - c(0.0, 2.0)).norm() < 1e-14);

        let mut b = Builder::new();
        let w = b.var();
        let reference = b.constant(c(-1.0, 0.1));
        let r = b.root(2, w, Branch::Aligned(reference)).unwrap();
        let e = b.finish(r).unwrap();
        let v = e.eval(c(9.0, 0.0)).unwrap().values[0];
        assert!((v - c(-3.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn coupled_roots() {
        let mut b = Builder::new();
        let w = b.var();
        let inv = {
            let one = b.real(1.0);
            b.div(one, w)
        };
        let u = b.root(3, w, Branch::Any).unwrap();
        let one = b.real(1.0);
        let v = b
            .root(
                3,
                inv,
                Branch::Coupled {
                    partner: u,
                    product: one,
                },
            )
            .unwrap();
        let prod = b.mul(u, v);
        let e = b.finish(prod).unwrap();
        let ev = e.eval(c(0.3, 2.0)).unwrap();
        assert_eq!(ev.values.len(), 3);
        assert!(ev.values.iter().all(|x| (x - c(1.0, 0.0)).norm() < 1e-14));
    }

    #[test]
    fn division_by_zero_drops_branch() {
        let mut b = Builder::new();
        let w = b.var();
        let one = b.real(1.0);
        let q = b.div(one, w);
        let e = b.finish(q).unwrap();
        let ev = e.eval(c(0.0, 0.0)).unwrap();
        assert!(ev.values.is_empty());
        assert_eq!(ev.diagnostics.len(), 1);
    }

    #[test]
    fn malformed_nodes() {
        let mut b = Builder::new();
        assert!(b.push(Node::Add(0, 1)).is_err());
        let w = b.var();
        assert!(b.root(1, w, Branch::Principal).is_err());
        assert!(b.root(3, w, Branch::Index(3)).is_err());
        assert!(b
            .root(
                3,
                w,
                Branch::Coupled {
                    partner: w,
                    product: w
                }
            )
            .is_err());
        assert!(b.finish(5).is_err());
    }
}
