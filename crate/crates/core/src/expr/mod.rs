//! Immutable scalar expression trees over phase-space variables.
//!
//! Nodes are hash-consed: two structurally identical trees built anywhere in
//! the process share one allocation, so equality is pointer equality and
//! derivative/conjugate caches can be keyed on node ids. Construction goes
//! through smart constructors that flatten sums and products, fold
//! constants, collect like terms and merge integer powers. The raw
//! constructors ([`Expr::raw`]) skip all of that and exist mainly so tests can
//! build unsimplified trees for [`simplify`].

mod diff;
mod display;
mod eval;
mod homogeneity;

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, LazyLock};

use dashmap::DashMap;
use num_complex::Complex64;

pub use display::render_shared;
pub use eval::{Params, PhasePoint, Tape};
pub use homogeneity::{
    check_homogeneity, check_homogeneity_with, euler_residual, HomogeneityCheck, HOMOGENEITY_TOL,
};

/// Maximum chart dimension supported by the dependency bitmask.
pub const MAX_DIM: usize = 8;

const FLATTEN_LIMIT: usize = 48;

/// A phase-space coordinate: `X(α)` is the chart coordinate x^{α+1} and
/// `Xi(α)` the momentum ξ_{α+1}. Indices are zero-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X(u8),
    Xi(u8),
}

impl Var {
    pub fn index(self) -> usize {
        match self {
            Var::X(a) | Var::Xi(a) => a as usize,
        }
    }

    fn bit(self) -> u16 {
        match self {
            Var::X(a) => 1 << a,
            Var::Xi(a) => 1 << (MAX_DIM as u8 + a),
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::X(a) => write!(f, "x{}", a + 1),
            Var::Xi(a) => write!(f, "xi{}", a + 1),
        }
    }
}

/// Node payload. Sums and products are n-ary.
#[derive(Clone, Debug)]
pub enum Kind {
    Const(Complex64),
    Var(Var),
    Param(Arc<str>),
    Add(Box<[Expr]>),
    Mul(Box<[Expr]>),
    Pow(Expr, i32),
    Sqrt(Expr),
    Sin(Expr),
    Cos(Expr),
    Exp(Expr),
}

impl Kind {
    pub fn children(&self) -> &[Expr] {
        match self {
            Kind::Const(_) | Kind::Var(_) | Kind::Param(_) => &[],
            Kind::Add(c) | Kind::Mul(c) => c,
            Kind::Pow(b, _) => std::slice::from_ref(b),
            Kind::Sqrt(u) | Kind::Sin(u) | Kind::Cos(u) | Kind::Exp(u) => std::slice::from_ref(u),
        }
    }

    fn tag(&self) -> u64 {
        match self {
            Kind::Const(_) => 1,
            Kind::Var(_) => 2,
            Kind::Param(_) => 3,
            Kind::Add(_) => 4,
            Kind::Mul(_) => 5,
            Kind::Pow(..) => 6,
            Kind::Sqrt(_) => 7,
            Kind::Sin(_) => 8,
            Kind::Cos(_) => 9,
            Kind::Exp(_) => 10,
        }
    }

    /// Shallow equality: children compared by identity.
    fn shallow_eq(&self, other: &Kind) -> bool {
        match (self, other) {
            (Kind::Const(a), Kind::Const(b)) => {
                a.re.to_bits() == b.re.to_bits() && a.im.to_bits() == b.im.to_bits()
            }
            (Kind::Var(a), Kind::Var(b)) => a == b,
            (Kind::Param(a), Kind::Param(b)) => a == b,
            (Kind::Add(a), Kind::Add(b)) | (Kind::Mul(a), Kind::Mul(b)) => {
                a.len() == b.len() && a.iter().zip(b.iter()).all(|(x, y)| x.ptr_eq(y))
            }
            (Kind::Pow(a, n), Kind::Pow(b, k)) => n == k && a.ptr_eq(b),
            (Kind::Sqrt(a), Kind::Sqrt(b))
            | (Kind::Sin(a), Kind::Sin(b))
            | (Kind::Cos(a), Kind::Cos(b))
            | (Kind::Exp(a), Kind::Exp(b)) => a.ptr_eq(b),
            _ => false,
        }
    }

    fn structural_hash(&self) -> u64 {
        let mut h = mix(0x9e37_79b9_7f4a_7c15, self.tag());
        match self {
            Kind::Const(c) => {
                h = mix(h, c.re.to_bits());
                h = mix(h, c.im.to_bits());
            }
            Kind::Var(v) => h = mix(h, v.bit() as u64),
            Kind::Param(name) => {
                for b in name.bytes() {
                    h = mix(h, b as u64);
                }
            }
            Kind::Pow(b, n) => {
                h = mix(h, b.shash());
                h = mix(h, *n as i64 as u64);
            }
            _ => {
                for c in self.children() {
                    h = mix(h, c.shash());
                }
            }
        }
        h
    }
}

fn mix(h: u64, v: u64) -> u64 {
    // splitmix64 finaliser over the running state
    let mut z = h ^ v
        .wrapping_add(0x9e37_79b9_7f4a_7c15)
        .wrapping_add(h << 6)
        .wrapping_add(h >> 2);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub(crate) struct Node {
    kind: Kind,
    shash: u64,
    id: u64,
    deps: u16,
}

/// A hash-consed, immutable expression handle. Cloning is an `Arc` bump.
#[derive(Clone)]
pub struct Expr(Arc<Node>);

static NEXT_ID: AtomicU64 = AtomicU64::new(1);
static INTERN: LazyLock<DashMap<u64, Vec<Expr>>> = LazyLock::new(DashMap::new);

fn normalize_const(c: Complex64) -> Complex64 {
    // collapse -0.0 so that hashing and equality agree
    Complex64::new(c.re + 0.0, c.im + 0.0)
}

impl Expr {
    fn intern(kind: Kind) -> Expr {
        let kind = match kind {
            Kind::Const(c) => Kind::Const(normalize_const(c)),
            k => k,
        };
        let shash = kind.structural_hash();
        if let Some(bucket) = INTERN.get(&shash) {
            if let Some(e) = bucket.iter().find(|e| e.0.kind.shallow_eq(&kind)) {
                return e.clone();
            }
        }
        let mut bucket = INTERN.entry(shash).or_default();
        if let Some(e) = bucket.iter().find(|e| e.0.kind.shallow_eq(&kind)) {
            return e.clone();
        }
        let deps = match &kind {
            Kind::Var(v) => v.bit(),
            k => k.children().iter().fold(0, |acc, c| acc | c.0.deps),
        };
        let e = Expr(Arc::new(Node {
            kind,
            shash,
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            deps,
        }));
        bucket.push(e.clone());
        e
    }

    /// Builds a node verbatim, without any simplification.
    pub fn raw(kind: Kind) -> Expr {
        if let Kind::Add(c) | Kind::Mul(c) = &kind {
            assert!(!c.is_empty(), "n-ary node needs at least one child");
        }
        Expr::intern(kind)
    }

    pub fn kind(&self) -> &Kind {
        &self.0.kind
    }

    pub fn id(&self) -> u64 {
        self.0.id
    }

    pub(crate) fn shash(&self) -> u64 {
        self.0.shash
    }

    pub fn ptr_eq(&self, other: &Expr) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub fn depends_on(&self, v: Var) -> bool {
        self.0.deps & v.bit() != 0
    }

    /// True when the tree contains no phase-space variables.
    pub fn is_phase_constant(&self) -> bool {
        self.0.deps == 0
    }

    /// Largest chart dimension referenced by any variable in the tree.
    pub fn max_dim(&self) -> usize {
        let x = self.0.deps & 0xff;
        let xi = self.0.deps >> 8;
        let bits = x | xi;
        if bits == 0 {
            0
        } else {
            16 - bits.leading_zeros() as usize
        }
    }

    pub fn as_const(&self) -> Option<Complex64> {
        match self.kind() {
            Kind::Const(c) => Some(*c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.as_const(), Some(c) if c == Complex64::new(0.0, 0.0))
    }

    pub fn is_one(&self) -> bool {
        matches!(self.as_const(), Some(c) if c == Complex64::new(1.0, 0.0))
    }

    // ----- leaves -----

    pub fn constant(c: Complex64) -> Expr {
        Expr::intern(Kind::Const(c))
    }

    pub fn real(v: f64) -> Expr {
        Expr::constant(Complex64::new(v, 0.0))
    }

    pub fn zero() -> Expr {
        Expr::real(0.0)
    }

    pub fn one() -> Expr {
        Expr::real(1.0)
    }

    /// The imaginary unit.
    pub fn i() -> Expr {
        Expr::constant(Complex64::new(0.0, 1.0))
    }

    pub fn var(v: Var) -> Expr {
        assert!(v.index() < MAX_DIM, "variable index out of range");
        Expr::intern(Kind::Var(v))
    }

    /// Chart coordinate x^{α+1}.
    pub fn x(alpha: usize) -> Expr {
        Expr::var(Var::X(alpha as u8))
    }

    /// Momentum ξ_{α+1}.
    pub fn xi(alpha: usize) -> Expr {
        Expr::var(Var::Xi(alpha as u8))
    }

    pub fn param(name: &str) -> Expr {
        Expr::intern(Kind::Param(Arc::from(name)))
    }

    // ----- smart constructors -----

    pub fn sum<I: IntoIterator<Item = Expr>>(terms: I) -> Expr {
        let zero = Complex64::new(0.0, 0.0);
        let mut constant = zero;
        let mut order: Vec<Expr> = Vec::new();
        let mut coeffs: HashMap<u64, (usize, Complex64)> = HashMap::new();
        let mut push = |rest: Expr, c: Complex64, order: &mut Vec<Expr>| {
            let slot = coeffs.entry(rest.id()).or_insert_with(|| {
                order.push(rest.clone());
                (order.len() - 1, zero)
            });
            slot.1 += c;
        };
        let mut visit = |t: &Expr, constant: &mut Complex64, order: &mut Vec<Expr>| match t.kind() {
            Kind::Const(c) => *constant += c,
            _ => {
                let (c, rest) = t.split_coefficient();
                push(rest, c, order);
            }
        };
        for t in terms {
            match t.kind() {
                // large sums stay shared rather than being copied into every parent
                Kind::Add(children) if children.len() <= FLATTEN_LIMIT => {
                    for c in children.iter() {
                        visit(c, &mut constant, &mut order);
                    }
                }
                _ => visit(&t, &mut constant, &mut order),
            }
        }
        let mut out: Vec<Expr> = order
            .into_iter()
            .filter_map(|rest| {
                let c = coeffs[&rest.id()].1;
                (c != zero).then(|| rest.scale(c))
            })
            .collect();
        if constant != zero {
            out.push(Expr::constant(constant));
        }
        match out.len() {
            0 => Expr::zero(),
            1 => out.pop().unwrap(),
            _ => {
                out.sort_by_key(|e| (e.shash(), e.id()));
                Expr::intern(Kind::Add(out.into_boxed_slice()))
            }
        }
    }

    pub fn product<I: IntoIterator<Item = Expr>>(factors: I) -> Expr {
        let mut coef = Complex64::new(1.0, 0.0);
        let mut bases: Vec<(Expr, i64)> = Vec::new();
        let mut index: HashMap<u64, usize> = HashMap::new();
        let mut add_base = |b: Expr, n: i64, bases: &mut Vec<(Expr, i64)>| {
            if let Some(&k) = index.get(&b.id()) {
                bases[k].1 += n;
            } else {
                index.insert(b.id(), bases.len());
                bases.push((b, n));
            }
        };
        let mut visit =
            |f: &Expr, coef: &mut Complex64, bases: &mut Vec<(Expr, i64)>| match f.kind() {
                Kind::Const(c) => *coef *= c,
                Kind::Pow(b, n) => add_base(b.clone(), *n as i64, bases),
                _ => add_base(f.clone(), 1, bases),
            };
        for f in factors {
            match f.kind() {
                Kind::Mul(children) => {
                    for c in children.iter() {
                        visit(c, &mut coef, &mut bases);
                    }
                }
                _ => visit(&f, &mut coef, &mut bases),
            }
        }
        if coef == Complex64::new(0.0, 0.0) {
            return Expr::zero();
        }
        let mut out: Vec<Expr> = Vec::with_capacity(bases.len());
        for (b, n) in bases {
            if n == 0 {
                continue;
            }
            let p = b.pow(n as i32);
            match p.kind() {
                Kind::Const(c) => coef *= c,
                Kind::Mul(children) => {
                    for c in children.iter() {
                        match c.kind() {
                            Kind::Const(k) => coef *= k,
                            _ => out.push(c.clone()),
                        }
                    }
                }
                _ => out.push(p),
            }
        }
        if coef == Complex64::new(0.0, 0.0) {
            return Expr::zero();
        }
        out.sort_by_key(|e| (e.shash(), e.id()));
        let unit = coef == Complex64::new(1.0, 0.0);
        match (out.len(), unit) {
            (0, _) => Expr::constant(coef),
            (1, true) => out.pop().unwrap(),
            _ => {
                if !unit {
                    out.insert(0, Expr::constant(coef));
                }
                Expr::intern(Kind::Mul(out.into_boxed_slice()))
            }
        }
    }

    /// Splits `c·rest` with `c` a numeric coefficient.
    fn split_coefficient(&self) -> (Complex64, Expr) {
        if let Kind::Mul(children) = self.kind() {
            if let Some(c) = children[0].as_const() {
                let rest = if children.len() == 2 {
                    children[1].clone()
                } else {
                    Expr::intern(Kind::Mul(children[1..].to_vec().into_boxed_slice()))
                };
                return (c, rest);
            }
        }
        (Complex64::new(1.0, 0.0), self.clone())
    }

    /// Multiplies by a numeric constant.
    pub fn scale(&self, c: Complex64) -> Expr {
        if c == Complex64::new(1.0, 0.0) {
            return self.clone();
        }
        Expr::product([Expr::constant(c), self.clone()])
    }

    pub fn pow(&self, n: i32) -> Expr {
        if n == 0 {
            return Expr::one();
        }
        if n == 1 {
            return self.clone();
        }
        match self.kind() {
            Kind::Const(c) => {
                if *c == Complex64::new(0.0, 0.0) && n < 0 {
                    // leave 0^(-n) for the evaluator to reject
                    Expr::intern(Kind::Pow(self.clone(), n))
                } else {
                    Expr::constant(c.powi(n))
                }
            }
            Kind::Pow(b, k) => b.pow(k * n),
            Kind::Sqrt(u) if n % 2 == 0 => u.pow(n / 2),
            Kind::Mul(children) => Expr::product(children.iter().map(|c| c.pow(n))),
            _ => Expr::intern(Kind::Pow(self.clone(), n)),
        }
    }

    pub fn recip(&self) -> Expr {
        self.pow(-1)
    }

    pub fn sqrt(&self) -> Expr {
        if let Some(c) = self.as_const() {
            if c.im != 0.0 || c.re >= 0.0 {
                return Expr::constant(c.sqrt());
            }
        }
        Expr::intern(Kind::Sqrt(self.clone()))
    }

    pub fn sin(&self) -> Expr {
        match self.as_const() {
            Some(c) => Expr::constant(c.sin()),
            None => Expr::intern(Kind::Sin(self.clone())),
        }
    }

    pub fn cos(&self) -> Expr {
        match self.as_const() {
            Some(c) => Expr::constant(c.cos()),
            None => Expr::intern(Kind::Cos(self.clone())),
        }
    }

    pub fn exp(&self) -> Expr {
        match self.as_const() {
            Some(c) => Expr::constant(c.exp()),
            None => Expr::intern(Kind::Exp(self.clone())),
        }
    }

    /// Total number of nodes in the shared DAG reachable from `self`.
    pub fn dag_size(&self) -> usize {
        postorder(std::slice::from_ref(self), |_| false).len()
    }

    /// Complex conjugate, assuming every variable and parameter is real.
    pub fn conj(&self) -> Expr {
        if self.is_phase_constant() && !self.has_complex_const() {
            return self.clone();
        }
        if let Some(e) = CONJ_CACHE.get(&self.id()) {
            return e.clone();
        }
        for node in postorder(std::slice::from_ref(self), |n| {
            CONJ_CACHE.contains_key(&n.id())
        }) {
            let c = |e: &Expr| -> Expr {
                CONJ_CACHE
                    .get(&e.id())
                    .map(|r| r.clone())
                    .unwrap_or_else(|| e.clone())
            };
            let out = match node.kind() {
                Kind::Const(v) => Expr::constant(v.conj()),
                Kind::Var(_) | Kind::Param(_) => node.clone(),
                Kind::Add(ch) => Expr::sum(ch.iter().map(c)),
                Kind::Mul(ch) => Expr::product(ch.iter().map(c)),
                Kind::Pow(b, n) => c(b).pow(*n),
                Kind::Sqrt(u) => c(u).sqrt(),
                Kind::Sin(u) => c(u).sin(),
                Kind::Cos(u) => c(u).cos(),
                Kind::Exp(u) => c(u).exp(),
            };
            CONJ_CACHE.insert(node.id(), out);
        }
        CONJ_CACHE.get(&self.id()).unwrap().clone()
    }

    fn has_complex_const(&self) -> bool {
        postorder(std::slice::from_ref(self), |_| false)
            .iter()
            .any(|n| matches!(n.kind(), Kind::Const(c) if c.im != 0.0))
    }

    /// Largest polynomial degree in ξ when the tree is a polynomial in ξ with
    /// ξ-independent coefficients; `None` when that cannot be certified
    /// structurally.
    pub fn xi_poly_degree(&self) -> Option<u32> {
        const XI_MASK: u16 = 0xff00;
        let mut memo: HashMap<u64, Option<u32>> = HashMap::new();
        for node in postorder(std::slice::from_ref(self), |_| false) {
            let deg = if node.0.deps & XI_MASK == 0 {
                Some(0)
            } else {
                let get = |e: &Expr| memo[&e.id()];
                match node.kind() {
                    Kind::Var(Var::Xi(_)) => Some(1),
                    Kind::Add(ch) => ch.iter().try_fold(0, |acc, c| get(c).map(|d| acc.max(d))),
                    Kind::Mul(ch) => ch.iter().try_fold(0, |acc, c| get(c).map(|d| acc + d)),
                    Kind::Pow(b, n) if *n > 0 => get(b).map(|d| d * *n as u32),
                    _ => None,
                }
            };
            memo.insert(node.id(), deg);
        }
        memo[&self.id()]
    }
}

static CONJ_CACHE: LazyLock<DashMap<u64, Expr>> = LazyLock::new(DashMap::new);

/// Children-first traversal of the DAG below `roots`, each node once.
/// Nodes for which `skip` returns true are neither visited nor descended into.
pub(crate) fn postorder(roots: &[Expr], skip: impl Fn(&Expr) -> bool) -> Vec<Expr> {
    let mut seen: std::collections::HashSet<u64> = std::collections::HashSet::new();
    let mut out = Vec::new();
    let mut stack: Vec<(Expr, bool)> = roots.iter().rev().map(|r| (r.clone(), false)).collect();
    while let Some((e, expanded)) = stack.pop() {
        if expanded {
            out.push(e);
            continue;
        }
        if seen.contains(&e.id()) || skip(&e) {
            continue;
        }
        seen.insert(e.id());
        stack.push((e.clone(), true));
        for c in e.kind().children().iter().rev() {
            if !seen.contains(&c.id()) {
                stack.push((c.clone(), false));
            }
        }
    }
    out
}

/// Rebuilds `e` bottom-up through the smart constructors.
pub fn simplify(e: &Expr) -> Expr {
    let mut done: HashMap<u64, Expr> = HashMap::new();
    for node in postorder(std::slice::from_ref(e), |_| false) {
        let s = |c: &Expr| done[&c.id()].clone();
        let out = match node.kind() {
            Kind::Const(_) | Kind::Var(_) | Kind::Param(_) => node.clone(),
            Kind::Add(ch) => Expr::sum(ch.iter().map(s)),
            Kind::Mul(ch) => Expr::product(ch.iter().map(s)),
            Kind::Pow(b, n) => s(b).pow(*n),
            Kind::Sqrt(u) => s(u).sqrt(),
            Kind::Sin(u) => s(u).sin(),
            Kind::Cos(u) => s(u).cos(),
            Kind::Exp(u) => s(u).exp(),
        };
        done.insert(node.id(), out);
    }
    done[&e.id()].clone()
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.ptr_eq(other)
    }
}

impl Eq for Expr {}

impl Hash for Expr {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.id.hash(state)
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<f64> for Expr {
    fn from(v: f64) -> Self {
        Expr::real(v)
    }
}

impl From<Complex64> for Expr {
    fn from(c: Complex64) -> Self {
        Expr::constant(c)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl std::ops::$trait<Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                let f: fn(&Expr, &Expr) -> Expr = $body;
                f(&self, &rhs)
            }
        }
        impl std::ops::$trait<&Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                let f: fn(&Expr, &Expr) -> Expr = $body;
                f(&self, rhs)
            }
        }
        impl std::ops::$trait<Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                let f: fn(&Expr, &Expr) -> Expr = $body;
                f(self, &rhs)
            }
        }
        impl std::ops::$trait<&Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                let f: fn(&Expr, &Expr) -> Expr = $body;
                f(self, rhs)
            }
        }
        impl std::ops::$trait<f64> for Expr {
            type Output = Expr;
            fn $method(self, rhs: f64) -> Expr {
                let f: fn(&Expr, &Expr) -> Expr = $body;
                f(&self, &Expr::real(rhs))
            }
        }
        impl std::ops::$trait<f64> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: f64) -> Expr {
                let f: fn(&Expr, &Expr) -> Expr = $body;
                f(self, &Expr::real(rhs))
            }
        }
    };
}

binop!(Add, add, |a, b| Expr::sum([a.clone(), b.clone()]));
binop!(Sub, sub, |a, b| Expr::sum([
    a.clone(),
    b.scale(Complex64::new(-1.0, 0.0))
]));
binop!(Mul, mul, |a, b| Expr::product([a.clone(), b.clone()]));
binop!(Div, div, |a, b| Expr::product([a.clone(), b.recip()]));

impl std::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl std::ops::Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl std::iter::Sum for Expr {
    fn sum<I: Iterator<Item = Expr>>(iter: I) -> Expr {
        Expr::sum(iter)
    }
}

impl std::iter::Product for Expr {
    fn product<I: Iterator<Item = Expr>>(iter: I) -> Expr {
        Expr::product(iter)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interning_shares_nodes() {
        let a = Expr::x(0).sin() * Expr::xi(1);
        let b = Expr::xi(1) * Expr::x(0).sin();
        assert!(a.ptr_eq(&b));
    }

    #[test]
    fn like_terms_collect() {
        let x = Expr::x(0);
        let e = &x + &x * 2.0 - &x * 3.0;
        assert!(e.is_zero());
        let p = &x * &x.recip();
        assert!(p.is_one());
    }

    #[test]
    fn sqrt_squared_collapses() {
        let u = Expr::xi(0) * Expr::xi(0) + Expr::xi(1) * Expr::xi(1);
        assert!(u.sqrt().pow(2).ptr_eq(&u));
        assert!((u.sqrt() * u.sqrt()).ptr_eq(&u));
    }

    #[test]
    fn poly_degree() {
        let e = Expr::x(0).sin() * Expr::xi(0) * Expr::xi(1) + Expr::xi(0);
        assert_eq!(e.xi_poly_degree(), Some(2));
        let h = (Expr::xi(0) * Expr::xi(0)).sqrt();
        assert_eq!(h.xi_poly_degree(), None);
        assert_eq!(Expr::x(1).cos().xi_poly_degree(), Some(0));
    }

    #[test]
    fn conj_distributes() {
        let e = Expr::i() * Expr::x(0) + Expr::real(2.0);
        let c = e.conj();
        let expect = -(Expr::i() * Expr::x(0)) + Expr::real(2.0);
        assert!(c.ptr_eq(&expect));
    }

    #[test]
    fn max_dim_from_deps() {
        assert_eq!((Expr::x(2) + Expr::xi(0)).max_dim(), 3);
        assert_eq!(Expr::real(1.0).max_dim(), 0);
    }
}
