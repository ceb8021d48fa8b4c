use std::collections::HashMap;
use std::fmt::{self, Write};

use num_complex::Complex64;

use super::{postorder, Expr, Kind};

const DISPLAY_LIMIT: usize = 20_000;

fn fmt_const(c: Complex64) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else if c.re == 0.0 {
        format!("{}i", c.im)
    } else {
        format!("({}{:+}i)", c.re, c.im)
    }
}

fn is_atomic(e: &Expr) -> bool {
    match e.kind() {
        Kind::Var(_) | Kind::Param(_) => true,
        Kind::Const(c) => c.im == 0.0 && c.re >= 0.0,
        Kind::Sqrt(_) | Kind::Sin(_) | Kind::Cos(_) | Kind::Exp(_) => true,
        _ => false,
    }
}

/// Renders one node given already-rendered children.
fn render_node(e: &Expr, child: &mut dyn FnMut(&Expr, &mut String), out: &mut String) {
    match e.kind() {
        Kind::Const(c) => out.push_str(&fmt_const(*c)),
        Kind::Var(v) => {
            let _ = write!(out, "{v}");
        }
        Kind::Param(p) => out.push_str(p),
        Kind::Add(ch) => {
            for (k, c) in ch.iter().enumerate() {
                if k > 0 {
                    out.push_str(" + ");
                }
                child(c, out);
            }
        }
        Kind::Mul(ch) => {
            let mut rest: &[Expr] = ch;
            if let Some(c) = ch[0].as_const() {
                if c == Complex64::new(-1.0, 0.0) && ch.len() > 1 {
                    out.push('-');
                    rest = &ch[1..];
                }
            }
            for (k, c) in rest.iter().enumerate() {
                if k > 0 {
                    out.push('*');
                }
                let wrap = matches!(c.kind(), Kind::Add(_));
                if wrap {
                    out.push('(');
                }
                child(c, out);
                if wrap {
                    out.push(')');
                }
            }
        }
        Kind::Pow(b, n) => {
            let wrap = !is_atomic(b);
            if wrap {
                out.push('(');
            }
            child(b, out);
            if wrap {
                out.push(')');
            }
            let _ = write!(out, "^{n}");
        }
        Kind::Sqrt(u) | Kind::Sin(u) | Kind::Cos(u) | Kind::Exp(u) => {
            let name = match e.kind() {
                Kind::Sqrt(_) => "sqrt",
                Kind::Sin(_) => "sin",
                Kind::Cos(_) => "cos",
                _ => "exp",
            };
            out.push_str(name);
            out.push('(');
            child(u, out);
            out.push(')');
        }
    }
}

fn render_limited(e: &Expr, out: &mut String, limit: usize) {
    if out.len() > limit {
        return;
    }
    render_node(e, &mut |c, o| render_limited(c, o, limit), out);
}

/// Renders `e` as an infix string, truncated after roughly `limit` bytes.
pub fn render_truncated(e: &Expr, limit: usize) -> String {
    let mut s = String::new();
    render_limited(e, &mut s, limit);
    if s.len() > limit {
        let mut cut = limit;
        while !s.is_char_boundary(cut) {
            cut -= 1;
        }
        s.truncate(cut);
        s.push_str("...");
    }
    s
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_truncated(self, DISPLAY_LIMIT))
    }
}

/// Renders a batch of expressions with common subexpressions named.
///
/// Every non-leaf node used by two or more parents becomes a definition
/// `tN = ...`; the returned entries refer to those names. The output is linear
/// in the size of the shared DAG and deterministic for a given structure.
pub fn render_shared(roots: &[Expr], prefix: &str) -> (Vec<(String, String)>, Vec<String>) {
    let order = postorder(roots, |_| false);
    let mut uses: HashMap<u64, usize> = HashMap::new();
    for node in &order {
        for c in node.kind().children() {
            *uses.entry(c.id()).or_default() += 1;
        }
    }
    let mut repr: HashMap<u64, String> = HashMap::with_capacity(order.len());
    let mut defs = Vec::new();
    for node in &order {
        let mut s = String::new();
        render_node(node, &mut |c, o| o.push_str(&repr[&c.id()]), &mut s);
        let leaf = node.kind().children().is_empty();
        if !leaf && uses.get(&node.id()).copied().unwrap_or(0) >= 2 {
            let name = format!("{prefix}{}", defs.len() + 1);
            defs.push((name.clone(), s));
            repr.insert(node.id(), name);
        } else {
            repr.insert(node.id(), s);
        }
    }
    let entries = roots.iter().map(|r| repr[&r.id()].clone()).collect();
    (defs, entries)
}
