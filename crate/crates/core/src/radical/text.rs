//! Parenthesised text form.
//!
//! ```text
//! expr   := w | NUMBER | (c RE IM) | (OP expr expr) | (root K branch expr)
//!         | (def N expr) | @N
//! OP     := + | - | * | /
//! branch := principal | any | (index J) | (coupled expr expr) | (aligned expr)
//! ```
//!
//! A node used more than once is written as `(def N …)` where it first
//! appears and as `@N` afterwards, so shared roots keep a single branch.

use std::collections::HashMap;
use std::fmt::Write as _;

use super::expr::{Branch, Builder, Node, NodeId, RadicalExpr};
use super::RadicalError;
use crate::Complex;

impl RadicalExpr {
    pub fn to_text(&self) -> String {
        let mut uses = vec![0usize; self.nodes().len()];
        let mut stack = vec![self.root()];
        let mut visited = vec![false; self.nodes().len()];
        while let Some(id) = stack.pop() {
            if std::mem::replace(&mut visited[id], true) {
                continue;
            }
            for c in children(&self.nodes()[id]) {
                uses[c] += 1;
                stack.push(c);
            }
        }
        let mut printer = Printer {
            expr: self,
            uses,
            labels: HashMap::new(),
            out: String::new(),
        };
        printer.node(self.root());
        printer.out
    }

    pub fn parse(text: &str) -> Result<RadicalExpr, RadicalError> {
        let tokens = tokenize(text);
        let mut parser = Parser {
            tokens,
            pos: 0,
            builder: Builder::new(),
            labels: HashMap::new(),
            var: None,
        };
        let root = parser.expr()?;
        if parser.pos != parser.tokens.len() {
            return Err(RadicalError::Parse(format!(
                "trailing input at token {}",
                parser.pos
            )));
        }
        parser.builder.finish(root)
    }
}

impl std::fmt::Display for RadicalExpr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl std::str::FromStr for RadicalExpr {
    type Err = RadicalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RadicalExpr::parse(s)
    }
}

fn children(node: &Node) -> Vec<NodeId> {
    match *node {
        Node::Const(_) | Node::Var => vec![],
        Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => vec![a, b],
        Node::Root {
            arg, ref branch, ..
        } => {
            let mut v = match *branch {
                Branch::Coupled { partner, product } => vec![partner, product],
                Branch::Aligned(r) => vec![r],
                _ => vec![],
            };
            v.push(arg);
            v
        }
    }
}

struct Printer<'a> {
    expr: &'a RadicalExpr,
    uses: Vec<usize>,
    labels: HashMap<NodeId, usize>,
    out: String,
}

impl Printer<'_> {
    fn node(&mut self, id: NodeId) {
        if let Some(label) = self.labels.get(&id) {
            let _ = write!(self.out, "@{label}");
            return;
        }
        let shared = self.uses[id] > 1 && !matches!(self.expr.nodes()[id], Node::Var);
        if shared {
            let label = self.labels.len() + 1;
            self.labels.insert(id, label);
            let _ = write!(self.out, "(def {label} ");
        }
        match self.expr.nodes()[id] {
            Node::Var => self.out.push('w'),
            Node::Const(c) if c.im == 0.0 => {
                let _ = write!(self.out, "{:?}", c.re);
            }
            Node::Const(c) => {
                let _ = write!(self.out, "(c {:?} {:?})", c.re, c.im);
            }
            Node::Add(a, b) => self.binary("+", a, b),
            Node::Sub(a, b) => self.binary("-", a, b),
            Node::Mul(a, b) => self.binary("*", a, b),
            Node::Div(a, b) => self.binary("/", a, b),
            Node::Root { k, arg, ref branch } => {
                let _ = write!(self.out, "(root {k} ");
                match *branch {
                    Branch::Principal => self.out.push_str("principal"),
                    Branch::Any => self.out.push_str("any"),
                    Branch::Index(j) => {
                        let _ = write!(self.out, "(index {j})");
                    }
                    Branch::Coupled { partner, product } => {
                        self.out.push_str("(coupled ");
                        self.node(partner);
                        self.out.push(' ');
                        self.node(product);
                        self.out.push(')');
                    }
                    Branch::Aligned(r) => {
                        self.out.push_str("(aligned ");
                        self.node(r);
                        self.out.push(')');
                    }
                }
                self.out.push(' ');
                self.node(arg);
                self.out.push(')');
            }
        }
        if shared {
            self.out.push(')');
        }
    }

    fn binary(&mut self, op: &str, a: NodeId, b: NodeId) {
        let _ = write!(self.out, "({op} ");
        self.node(a);
        self.out.push(' ');
        self.node(b);
        self.out.push(')');
    }
}

fn tokenize(text: &str) -> Vec<String> {
    text.replace('(', " ( ")
        .replace(')', " ) ")
        .split_whitespace()
        .map(str::to_string)
        .collect()
}

struct Parser {
    tokens: Vec<String>,
    pos: usize,
    builder: Builder,
    labels: HashMap<usize, NodeId>,
    var: Option<NodeId>,
}

impl Parser {
    fn next(&mut self) -> Result<String, RadicalError> {
        let t = self
            .tokens
            .get(self.pos)
            .cloned()
            .ok_or_else(|| RadicalError::Parse("unexpected end of input".into()))?;
        self.pos += 1;
        Ok(t)
    }

    fn expect(&mut self, want: &str) -> Result<(), RadicalError> {
        let t = self.next()?;
        if t != want {
            return Err(RadicalError::Parse(format!(
                "expected {want:?}, found {t:?}"
            )));
        }
        Ok(())
    }

    fn number<T: std::str::FromStr>(&mut self) -> Result<T, RadicalError> {
        let t = self.next()?;
        t.parse()
            .map_err(|_| RadicalError::Parse(format!("bad number {t:?}")))
    }

    fn expr(&mut self) -> Result<NodeId, RadicalError> {
        let t = self.next()?;
        if t == "w" {
            // One variable node per expression.
            return Ok(match self.var {
                Some(v) => v,
                None => *self.var.insert(self.builder.var()),
            });
        }
        if let Some(label) = t.strip_prefix('@') {
            let label: usize = label
                .parse()
                .map_err(|_| RadicalError::Parse(format!("bad reference {t:?}")))?;
            return self.labels.get(&label).copied().ok_or_else(|| {
                RadicalError::Parse(format!("reference @{label} before its definition"))
            });
        }
        if t != "(" {
            let x: f64 = t
                .parse()
                .map_err(|_| RadicalError::Parse(format!("unexpected token {t:?}")))?;
            return Ok(self.builder.real(x));
        }
        let head = self.next()?;
        let id = match head.as_str() {
            "c" => {
                let re = self.number()?;
                let im = self.number()?;
                self.builder.constant(Complex::new(re, im))
            }
            "+" | "-" | "*" | "/" => {
                let a = self.expr()?;
                let b = self.expr()?;
                let node = match head.as_str() {
                    "+" => Node::Add(a, b),
                    "-" => Node::Sub(a, b),
                    "*" => Node::Mul(a, b),
                    _ => Node::Div(a, b),
                };
                self.builder.push(node)?
            }
            "root" => {
                let k: u32 = self.number()?;
                let branch = self.branch()?;
                let arg = self.expr()?;
                self.builder.root(k, arg, branch)?
            }
            "def" => {
                let label: usize = self.number()?;
                let id = self.expr()?;
                if self.labels.insert(label, id).is_some() {
                    return Err(RadicalError::Parse(format!("label {label} defined twice")));
                }
                id
            }
            other => return Err(RadicalError::Parse(format!("unknown form {other:?}"))),
        };
        self.expect(")")?;
        Ok(id)
    }

    fn branch(&mut self) -> Result<Branch, RadicalError> {
        let t = self.next()?;
        match t.as_str() {
            "principal" => Ok(Branch::Principal),
            "any" => Ok(Branch::Any),
            "(" => {
                let head = self.next()?;
                let b = match head.as_str() {
                    "index" => Branch::Index(self.number()?),
                    "coupled" => {
                        let partner = self.expr()?;
                        let product = self.expr()?;
                        Branch::Coupled { partner, product }
                    }
                    "aligned" => Branch::Aligned(self.expr()?),
                    other => {
                        return Err(RadicalError::Parse(format!(
                            "unknown branch policy {other:?}"
                        )))
                    }
                };
                self.expect(")")?;
                Ok(b)
            }
            other => Err(RadicalError::Parse(format!(
                "unknown branch policy {other:?}"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_shared_root() {
        let text = "(+ (def 1 (root 3 any w)) (root 3 (coupled @1 1.0) (/ 1.0 w)))";
        let e = RadicalExpr::parse(text).unwrap();
        assert_eq!(e.to_text(), text);
        assert_eq!(e.eval(Complex::new(2.0, 0.0)).unwrap().values.len(), 3);
    }

    #[test]
    fn constants_and_policies() {
        let text = "(* (c 1.5 -2.0) (root 4 (index 3) (- w -1e-20)))";
        assert_eq!(RadicalExpr::parse(text).unwrap().to_text(), text);
        let text = "(root 2 (aligned (c 0.0 1.0)) w)";
        assert_eq!(RadicalExpr::parse(text).unwrap().to_text(), text);
    }

    #[test]
    fn parse_errors() {
        for bad in [
            "",
            "(+ w)",
            "(root 1 any w)",
            "@1",
            "(foo w)",
            "(root 2 sideways w)",
            "w w",
            "(def 1 w",
        ] {
            assert!(RadicalExpr::parse(bad).is_err(), "{bad:?} should fail");
        }
    }
}
