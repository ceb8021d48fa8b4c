//! Construction of the pseudodifferential projections P_j to finite depth.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::degree::Degree;
use crate::error::{Error, Result};
use crate::expr::{Params, PhasePoint};
use crate::models::ModelSpec;
use crate::report::{index_label, pair_label, CheckRow, RowBatch};
use crate::symbol::{
    adjoint, commutator_order, compose, compose_order, half_mixed_trace, poisson, symmetrize,
    MatrixFn, Sampled, SymbolExpansion,
};

/// Which construction is run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// Each P_j built on its own; the free term is taken to be zero.
    Single,
    /// Orthonormal basis without commutation; the free Z term is zero.
    Basis,
    /// Full algorithm including commutation with A.
    CommutingFull,
    /// Simplified algorithm for commuting projections.
    CommutingSimplified,
}

impl Variant {
    pub fn commutes(self) -> bool {
        matches!(self, Variant::CommutingFull | Variant::CommutingSimplified)
    }

    pub fn name(self) -> &'static str {
        match self {
            Variant::Single => "single",
            Variant::Basis => "basis",
            Variant::CommutingFull => "commuting-full",
            Variant::CommutingSimplified => "commuting-simplified",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "single" => Ok(Variant::Single),
            "basis" => Ok(Variant::Basis),
            "commuting-full" | "full" => Ok(Variant::CommutingFull),
            "commuting-simplified" | "simplified" => Ok(Variant::CommutingSimplified),
            _ => Err(Error::InvalidParameter(format!("unknown variant `{s}`"))),
        }
    }
}

/// An intermediate quantity recorded during a step.
#[derive(Clone, Debug)]
pub struct TraceEntry {
    pub k: usize,
    pub name: &'static str,
    pub index: String,
    pub value: MatrixFn,
}

/// The current ladders P_{j,k−1} and everything computed on the way.
pub struct ProjectionState<'a> {
    pub model: &'a ModelSpec,
    pub variant: Variant,
    pub depth: usize,
    /// Next step to run; steps 1..k−1 are done.
    pub k: usize,
    pub projections: Vec<SymbolExpansion>,
    /// (X_{j,k})_prin per step, indexed [k−1][j].
    pub corrections: Vec<Vec<MatrixFn>>,
    pub trace: Vec<TraceEntry>,
}

fn zero_degree() -> Degree {
    Degree::from_integer(0)
}

/// P_{j,0}: principal part `p`, vanishing subprincipal symbol, self-adjoint
/// through depth `k`. An optional `tail` is added at relative order 2 before
/// the adjoint defect is removed order by order.
pub fn init_base_projection(
    p: &MatrixFn,
    k: usize,
    tail: Option<&MatrixFn>,
) -> Result<SymbolExpansion> {
    let m = p.m();
    let mut comps = vec![p.clone()];
    if k >= 1 {
        comps.push(-half_mixed_trace(p));
    }
    if k >= 2 {
        comps.push(tail.cloned().unwrap_or_else(|| MatrixFn::zero(m)));
    }
    let mut cur = SymbolExpansion::truncated(zero_degree(), comps, k)?;
    for n in 2..=k {
        // the leading adjoint defect is skew-Hermitian, so half of it fixes order n
        let defect = &adjoint(&cur, n).extract_component(n)? - &cur.extract_component(n)?;
        let mut comps = cur.components_through(k)?;
        comps[n] = &comps[n] + &defect.scale_re(0.5);
        cur = SymbolExpansion::truncated(zero_degree(), comps, k)?;
    }
    Ok(cur)
}

impl<'a> ProjectionState<'a> {
    /// Initial ladders P_{j,0}, one per signed index, with optional tails.
    pub fn new(
        model: &'a ModelSpec,
        variant: Variant,
        depth: usize,
        tails: Option<&[MatrixFn]>,
    ) -> Result<Self> {
        let mut projections = Vec::new();
        for (n, e) in model.spectral.entries().iter().enumerate() {
            projections.push(init_base_projection(
                &e.projection,
                depth,
                tails.map(|t| &t[n]),
            )?);
        }
        Ok(ProjectionState {
            model,
            variant,
            depth,
            k: 1,
            projections,
            corrections: Vec::new(),
            trace: Vec::new(),
        })
    }

    fn record(&mut self, name: &'static str, index: String, value: &MatrixFn) {
        self.trace.push(TraceEntry {
            k: self.k,
            name,
            index,
            value: value.clone(),
        });
    }

    fn label(&self, n: usize) -> String {
        index_label(self.model.spectral.entries()[n].index)
    }

    fn pair(&self, n: usize, l: usize) -> String {
        let e = self.model.spectral.entries();
        pair_label(e[n].index, e[l].index)
    }

    fn proj(&self, n: usize) -> &MatrixFn {
        &self.model.spectral.entries()[n].projection
    }

    fn check_k(&self) -> Result<()> {
        if self.k > self.depth {
            return Err(Error::TruncationExceeded {
                requested: self.k,
                depth: self.depth,
            });
        }
        Ok(())
    }

    /// R_{j,k} and S_{j,k} for every j.
    fn r_and_s(&mut self) -> Result<(Vec<MatrixFn>, Vec<MatrixFn>)> {
        let k = self.k;
        let mut rs = Vec::new();
        let mut ss = Vec::new();
        for n in 0..self.projections.len() {
            let pj = &self.projections[n];
            let sq = compose_order(pj, pj, k)?;
            let r = -(&sq - &pj.extract_component(k)?);
            let ph = self.proj(n);
            let s = &(&(-&r) + &(ph * &r)) + &(&r * ph);
            let lab = self.label(n);
            self.record("R", lab.clone(), &r);
            self.record("S", lab, &s);
            rs.push(r);
            ss.push(s);
        }
        Ok((rs, ss))
    }

    /// Appends X_{j,k} = symmetrize(single component `x[j]` at order k).
    fn apply(&mut self, x: Vec<MatrixFn>) -> Result<()> {
        let k = self.k;
        for (n, xp) in x.iter().enumerate() {
            let lab = self.label(n);
            self.record("X", lab, xp);
            let single = SymbolExpansion::single(zero_degree(), k, xp.clone(), Some(self.depth));
            let xk = symmetrize(&single, self.depth);
            self.projections[n] = self.projections[n].add(&xk)?;
        }
        self.corrections.push(x);
        self.k += 1;
        Ok(())
    }

    /// One step of the full algorithm (variants single, basis, commuting-full).
    pub fn step_full(&mut self) -> Result<()> {
        if self.variant == Variant::CommutingSimplified {
            return Err(Error::Validation(
                "step_full does not run the simplified variant".into(),
            ));
        }
        self.check_k()?;
        let k = self.k;
        let m = self.projections.len();
        let (_, ss) = self.r_and_s()?;
        let mut x: Vec<MatrixFn> = ss.clone();
        if self.variant == Variant::Single {
            return self.apply(x);
        }
        // V_{j,l,k} for l ≠ j
        let mut v = vec![vec![MatrixFn::zero(m); m]; m];
        for j in 0..m {
            for l in 0..m {
                if l == j {
                    continue;
                }
                let pjl = compose_order(&self.projections[j], &self.projections[l], k)?;
                let t = &(&pjl + &(self.proj(j) * &ss[l])) + &(&ss[j] * self.proj(l));
                v[j][l] = t.scale_re(-0.5);
                let lab = self.pair(j, l);
                let val = v[j][l].clone();
                self.record("V", lab, &val);
            }
        }
        for j in 0..m {
            let terms: Vec<&MatrixFn> = (0..m)
                .filter(|&l| l != j)
                .flat_map(|l| [&v[j][l], &v[l][j]])
                .collect();
            x[j] = MatrixFn::sum_all(m, std::iter::once(&x[j]).chain(terms));
        }
        if self.variant == Variant::Basis {
            return self.apply(x);
        }
        // Z_{j,l,k}
        let a = &self.model.a;
        let a_prin = a.principal().clone();
        let mut z = vec![vec![MatrixFn::zero(m); m]; m];
        for j in 0..m {
            let comm = commutator_order(a, &self.projections[j], k)?;
            // x[j] currently holds S_j + Σ_{n≠j}(V_{jn} + V_{nj})
            let inner = &comm + &a_prin.commutator(&x[j]);
            let hj = &self.model.spectral.entries()[j].eigenvalue;
            for l in 0..m {
                if l == j {
                    continue;
                }
                let hl = &self.model.spectral.entries()[l].eigenvalue;
                let w = (hl - hj).recip();
                z[j][l] = (&(self.proj(j) * &inner) * self.proj(l)).scale(&w);
                let lab = self.pair(j, l);
                let val = z[j][l].clone();
                self.record("Z", lab, &val);
            }
        }
        for j in 0..m {
            let mut terms = vec![x[j].clone()];
            for l in 0..m {
                if l != j {
                    terms.push(z[j][l].clone());
                    terms.push(-&z[l][j]);
                }
            }
            x[j] = MatrixFn::sum_all(m, &terms);
        }
        self.apply(x)
    }

    /// One step of the simplified algorithm.
    pub fn step_simplified(&mut self) -> Result<()> {
        if self.variant != Variant::CommutingSimplified {
            return Err(Error::Validation(
                "step_simplified needs the commuting-simplified variant".into(),
            ));
        }
        self.check_k()?;
        let k = self.k;
        let m = self.projections.len();
        let (_, ss) = self.r_and_s()?;
        let a = &self.model.a;
        let a_prin = a.principal().clone();
        let mut x = Vec::with_capacity(m);
        for j in 0..m {
            let t = &commutator_order(&self.projections[j], a, k)? + &ss[j].commutator(&a_prin);
            let lab = self.label(j);
            self.record("T", lab, &t);
            let hj = &self.model.spectral.entries()[j].eigenvalue;
            let mut terms = vec![ss[j].clone()];
            for l in 0..m {
                if l == j {
                    continue;
                }
                let hl = &self.model.spectral.entries()[l].eigenvalue;
                let w = (hj - hl).recip();
                let pj = self.proj(j);
                let pl = self.proj(l);
                let num = &(&(pj * &t) * pl) - &(&(pl * &t) * pj);
                terms.push(num.scale(&w));
            }
            x.push(MatrixFn::sum_all(m, &terms));
        }
        self.apply(x)
    }

    pub fn step(&mut self) -> Result<()> {
        match self.variant {
            Variant::CommutingSimplified => self.step_simplified(),
            _ => self.step_full(),
        }
    }

    /// Runs the remaining steps through the depth.
    pub fn run(mut self) -> Result<Self> {
        while self.k <= self.depth {
            self.step()?;
        }
        Ok(self)
    }

    pub fn trace_of(&self, name: &str) -> impl Iterator<Item = &TraceEntry> {
        let name = name.to_string();
        self.trace.iter().filter(move |t| t.name == name)
    }
}

/// Runs initialisation and `k` steps; returns P_j in increasing order of j.
pub fn build_projections(
    model: &ModelSpec,
    k: usize,
    variant: Variant,
) -> Result<Vec<SymbolExpansion>> {
    Ok(ProjectionState::new(model, variant, k, None)?
        .run()?
        .projections)
}

/// Closed form of (P_j)_sub from the principal and subprincipal symbols of A.
pub fn subprincipal_closed_form(model: &ModelSpec) -> Result<Vec<MatrixFn>> {
    let sd = &model.spectral;
    let m = sd.m();
    let a_prin = model.a.principal();
    let a_sub = crate::symbol::subprincipal(&model.a)?;
    let i = Complex64::new(0.0, 1.0);
    let mut out = Vec::with_capacity(m);
    for ej in sd.entries() {
        let p = &ej.projection;
        let pp = poisson(p, p)?;
        let q = (&poisson(a_prin, p)? - &poisson(p, a_prin)?).scale_re(0.5);
        let mut terms = vec![pp.scale_c(i * 0.5), (&(p * &pp) * p).scale_c(-i)];
        for el in sd.entries() {
            if el.index == ej.index {
                continue;
            }
            let pl = &el.projection;
            let w = (&ej.eigenvalue - &el.eigenvalue).recip();
            let left = &(p * &(&a_sub - &q.scale_c(i))) * pl;
            let right = &(pl * &(&a_sub + &q.scale_c(i))) * p;
            terms.push((&left + &right).scale(&w));
        }
        out.push(MatrixFn::sum_all(m, &terms));
    }
    Ok(out)
}

fn push_orders(
    batch: &mut RowBatch,
    check: &str,
    index: &str,
    e: &SymbolExpansion,
    orders: std::ops::RangeInclusive<usize>,
    tol: f64,
) -> Result<()> {
    for n in orders {
        batch.push(check, index, Some(n), tol, e.extract_component(n)?);
    }
    Ok(())
}

/// Componentwise check of the defining identities through depth `k`:
/// P_j² − P_j, P_j* − P_j, P_j P_l (j ≠ l), Σ P_j − Id, [A, P_j], and
/// (P_j)_prin = P^(j).
pub fn verify_projection_axioms(
    projections: &[SymbolExpansion],
    model: &ModelSpec,
    variant: Variant,
    k: usize,
    points: &[PhasePoint],
    params: &Params,
    tol: f64,
) -> Result<Vec<CheckRow>> {
    let sd = &model.spectral;
    let mut batch = RowBatch::new();
    let mut rows = Vec::new();
    for (n, pj) in projections.iter().enumerate() {
        let j = sd.entries()[n].index;
        let lab = index_label(j);
        batch.push(
            "axiom.principal",
            lab.clone(),
            Some(0),
            tol,
            &pj.extract_component(0)? - &sd.entries()[n].projection,
        );
        let sq = compose(pj, pj, k)?.sub(pj)?;
        push_orders(&mut batch, "axiom.idempotent", &lab, &sq, 0..=k, tol)?;
        let adj = adjoint(pj, k).sub(pj)?;
        push_orders(&mut batch, "axiom.self-adjoint", &lab, &adj, 0..=k, tol)?;
        for (l, pl) in projections.iter().enumerate() {
            if l == n {
                continue;
            }
            let lab2 = pair_label(j, sd.entries()[l].index);
            let prod = compose(pj, pl, k)?;
            push_orders(&mut batch, "axiom.orthogonal", &lab2, &prod, 0..=k, tol)?;
        }
        // [A, P_j] has top degree s; its order-s part vanishes identically
        if variant.commutes() {
            let c = crate::symbol::commutator(&model.a, pj, k)?;
            push_orders(&mut batch, "axiom.commutes", &lab, &c, 0..=k, tol)?;
        } else {
            for n in 0..=k {
                rows.push(CheckRow::not_applicable(
                    "axiom.commutes",
                    lab.clone(),
                    Some(n),
                ));
            }
        }
    }
    let total = SymbolExpansion::sum_all(projections)?.sub(&SymbolExpansion::identity(sd.m()))?;
    push_orders(&mut batch, "axiom.partition", "", &total, 0..=k, tol)?;
    rows.extend(batch.finish(points, params)?);
    Ok(rows)
}

/// Largest sampled difference between two families of expansions through
/// relative order `k`, per order.
pub fn compare_ladders(
    a: &[SymbolExpansion],
    b: &[SymbolExpansion],
    k: usize,
    points: &[PhasePoint],
    params: &Params,
) -> Result<Vec<Sampled>> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} expansions against {}",
            a.len(),
            b.len()
        )));
    }
    let mut diffs = Vec::with_capacity((k + 1) * a.len());
    for n in 0..=k {
        for (x, y) in a.iter().zip(b) {
            diffs.push(&x.extract_component(n)? - &y.extract_component(n)?);
        }
    }
    let each = crate::symbol::max_abs_each(&diffs, points, params)?;
    Ok(each
        .chunks(a.len().max(1))
        .map(|c| c.iter().fold(c[0], |acc, s| acc.merge(*s)))
        .collect())
}
