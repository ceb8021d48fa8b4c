use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_complex::Complex64;

use super::{postorder, Expr, Kind, Var};
use crate::error::{Error, Result};

/// Bindings for named real parameters.
pub type Params = BTreeMap<String, f64>;

/// A point (x, ξ) of the cotangent bundle with ξ ≠ 0.
#[derive(Clone, Debug, PartialEq)]
pub struct PhasePoint {
    pub x: Vec<f64>,
    pub xi: Vec<f64>,
}

impl PhasePoint {
    pub fn new(x: Vec<f64>, xi: Vec<f64>) -> Result<Self> {
        if x.len() != xi.len() {
            return Err(Error::InvalidPoint(format!(
                "x has {} entries but xi has {}",
                x.len(),
                xi.len()
            )));
        }
        if xi.iter().all(|v| *v == 0.0) {
            return Err(Error::InvalidPoint("xi must be nonzero".into()));
        }
        Ok(PhasePoint { x, xi })
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    pub fn coord(&self, v: Var) -> Option<f64> {
        match v {
            Var::X(a) => self.x.get(a as usize).copied(),
            Var::Xi(a) => self.xi.get(a as usize).copied(),
        }
    }

    /// Same point with momentum scaled by `t`.
    pub fn scaled(&self, t: f64) -> PhasePoint {
        PhasePoint {
            x: self.x.clone(),
            xi: self.xi.iter().map(|v| v * t).collect(),
        }
    }
}

#[derive(Clone, Debug)]
enum Op {
    Const(Complex64),
    Var(Var),
    Param(Arc<str>),
    Add(u32, u32),
    Mul(u32, u32),
    Pow(u32, i32),
    Sqrt(u32),
    Sin(u32),
    Cos(u32),
    Exp(u32),
}

/// A batch of expressions flattened into a straight-line program.
///
/// Shared subtrees are evaluated once per point, which is what makes sampling
/// the large symbol ladders affordable.
#[derive(Clone, Debug)]
pub struct Tape {
    ops: Vec<Op>,
    args: Vec<u32>,
    roots: Vec<u32>,
    nodes: Vec<Expr>,
}

impl Tape {
    pub fn compile(roots: &[Expr]) -> Tape {
        let order = postorder(roots, |_| false);
        let mut slot: HashMap<u64, u32> = HashMap::with_capacity(order.len());
        let mut ops = Vec::with_capacity(order.len());
        let mut args = Vec::new();
        for (i, node) in order.iter().enumerate() {
            let at = |e: &Expr| slot[&e.id()];
            let op = match node.kind() {
                Kind::Const(c) => Op::Const(*c),
                Kind::Var(v) => Op::Var(*v),
                Kind::Param(p) => Op::Param(p.clone()),
                Kind::Add(ch) | Kind::Mul(ch) => {
                    let start = args.len() as u32;
                    args.extend(ch.iter().map(at));
                    let end = args.len() as u32;
                    if matches!(node.kind(), Kind::Add(_)) {
                        Op::Add(start, end)
                    } else {
                        Op::Mul(start, end)
                    }
                }
                Kind::Pow(b, n) => Op::Pow(at(b), *n),
                Kind::Sqrt(u) => Op::Sqrt(at(u)),
                Kind::Sin(u) => Op::Sin(at(u)),
                Kind::Cos(u) => Op::Cos(at(u)),
                Kind::Exp(u) => Op::Exp(at(u)),
            };
            ops.push(op);
            slot.insert(node.id(), i as u32);
        }
        let roots = roots.iter().map(|r| slot[&r.id()]).collect();
        Tape {
            ops,
            args,
            roots,
            nodes: order,
        }
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn num_roots(&self) -> usize {
        self.roots.len()
    }

    /// Evaluates every root at `p`.
    pub fn eval(&self, p: &PhasePoint, params: &Params) -> Result<Vec<Complex64>> {
        let mut vals: Vec<Complex64> = Vec::with_capacity(self.ops.len());
        for (i, op) in self.ops.iter().enumerate() {
            let v = match op {
                Op::Const(c) => *c,
                Op::Var(v) => match p.coord(*v) {
                    Some(c) => Complex64::new(c, 0.0),
                    None => {
                        return Err(Error::VariableOutOfRange {
                            var: v.to_string(),
                            dim: p.dim(),
                        })
                    }
                },
                Op::Param(name) => match params.get(name.as_ref()) {
                    Some(c) => Complex64::new(*c, 0.0),
                    None => return Err(Error::UnboundParameter(name.to_string())),
                },
                Op::Add(s, e) => self.args[*s as usize..*e as usize]
                    .iter()
                    .map(|&k| vals[k as usize])
                    .sum(),
                Op::Mul(s, e) => self.args[*s as usize..*e as usize]
                    .iter()
                    .map(|&k| vals[k as usize])
                    .product(),
                Op::Pow(b, n) => {
                    let base = vals[*b as usize];
                    if *n < 0 && base == Complex64::new(0.0, 0.0) {
                        return Err(self.domain("reciprocal", i));
                    }
                    base.powi(*n)
                }
                Op::Sqrt(u) => {
                    let a = vals[*u as usize];
                    if a.im == 0.0 && a.re < 0.0 {
                        return Err(self.domain("sqrt", i));
                    }
                    a.sqrt()
                }
                Op::Sin(u) => vals[*u as usize].sin(),
                Op::Cos(u) => vals[*u as usize].cos(),
                Op::Exp(u) => vals[*u as usize].exp(),
            };
            vals.push(v);
        }
        Ok(self.roots.iter().map(|&r| vals[r as usize]).collect())
    }

    fn domain(&self, op: &'static str, at: usize) -> Error {
        let mut subtree = self.nodes[at].to_string();
        if subtree.len() > 200 {
            subtree.truncate(200);
            subtree.push_str("...");
        }
        Error::Domain { op, subtree }
    }
}

impl Expr {
    /// Numeric value at a phase-space point.
    pub fn eval(&self, p: &PhasePoint, params: &Params) -> Result<Complex64> {
        Ok(Tape::compile(std::slice::from_ref(self)).eval(p, params)?[0])
    }

    /// Shorthand for parameter-free expressions.
    pub fn eval_at(&self, p: &PhasePoint) -> Result<Complex64> {
        self.eval(p, &Params::new())
    }
}
