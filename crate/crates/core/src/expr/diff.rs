use std::sync::LazyLock;

use dashmap::DashMap;

use super::{postorder, Expr, Kind, Var};

static DIFF_CACHE: LazyLock<DashMap<(u64, Var), Expr>> = LazyLock::new(DashMap::new);

impl Expr {
    /// Exact partial derivative with respect to `v`.
    ///
    /// Results are memoised per (node, variable) for the life of the process,
    /// so repeated and mixed higher derivatives of shared subtrees are cheap.
    pub fn diff(&self, v: Var) -> Expr {
        if !self.depends_on(v) {
            return Expr::zero();
        }
        if let Some(d) = DIFF_CACHE.get(&(self.id(), v)) {
            return d.clone();
        }
        let order = postorder(std::slice::from_ref(self), |n| {
            !n.depends_on(v) || DIFF_CACHE.contains_key(&(n.id(), v))
        });
        for node in order {
            let d = derivative_of_node(&node, v);
            DIFF_CACHE.insert((node.id(), v), d);
        }
        DIFF_CACHE.get(&(self.id(), v)).unwrap().clone()
    }

    /// Applies `diff` once for every entry of `vars`, in order.
    pub fn diff_many(&self, vars: &[Var]) -> Expr {
        vars.iter().fold(self.clone(), |e, &v| e.diff(v))
    }
}

fn cached(e: &Expr, v: Var) -> Expr {
    if !e.depends_on(v) {
        return Expr::zero();
    }
    DIFF_CACHE
        .get(&(e.id(), v))
        .map(|d| d.clone())
        .expect("children are differentiated before their parents")
}

fn derivative_of_node(node: &Expr, v: Var) -> Expr {
    match node.kind() {
        Kind::Const(_) | Kind::Param(_) => Expr::zero(),
        Kind::Var(w) => {
            if *w == v {
                Expr::one()
            } else {
                Expr::zero()
            }
        }
        Kind::Add(ch) => Expr::sum(ch.iter().map(|c| cached(c, v))),
        Kind::Mul(ch) => {
            let mut terms = Vec::new();
            for (i, c) in ch.iter().enumerate() {
                if !c.depends_on(v) {
                    continue;
                }
                let dc = cached(c, v);
                let rest = ch
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != i)
                    .map(|(_, e)| e.clone());
                terms.push(Expr::product(std::iter::once(dc).chain(rest)));
            }
            Expr::sum(terms)
        }
        Kind::Pow(b, n) => {
            let db = cached(b, v);
            Expr::product([Expr::real(*n as f64), b.pow(n - 1), db])
        }
        Kind::Sqrt(u) => {
            let du = cached(u, v);
            Expr::product([Expr::real(0.5), node.recip(), du])
        }
        Kind::Sin(u) => Expr::product([u.cos(), cached(u, v)]),
        Kind::Cos(u) => Expr::product([Expr::real(-1.0), u.sin(), cached(u, v)]),
        Kind::Exp(u) => Expr::product([node.clone(), cached(u, v)]),
    }
}
