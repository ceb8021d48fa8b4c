//! Runs every check on one model and collects the rows.

use std::time::Instant;

use crate::degree::{to_f64, Degree};
use crate::error::Result;
use crate::expr::{euler_residual, Params, PhasePoint, HOMOGENEITY_TOL};
use crate::functional::{
    heaviside_symbol, modulus_sub_closed_form, modulus_symbol, signdef_principal_check,
};
use crate::models::{random_tail, Expected, ModelSpec, Quantity};
use crate::projections::{
    compare_ladders, subprincipal_closed_form, verify_projection_axioms, ProjectionState, Variant,
};
use crate::report::{index_label, sort_rows, CheckRow, RowBatch};
use crate::symbol::{
    adjoint, commutator, compose, dilation_residual_each, subprincipal, MatrixBatch, MatrixFn,
    Sampled, SymbolExpansion,
};

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub order: usize,
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    /// The first entry drives the functional calculus and reference checks.
    pub variants: Vec<Variant>,
    /// Rebuild with two random initial tails and compare.
    pub tail_uniqueness: bool,
    pub homogeneity_samples: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            order: 3,
            samples: 50,
            seed: 1,
            tol: 1e-8,
            variants: vec![Variant::CommutingFull, Variant::CommutingSimplified],
            tail_uniqueness: true,
            homogeneity_samples: 20,
        }
    }
}

pub struct SuiteOutput {
    pub rows: Vec<CheckRow>,
    pub projections: Vec<(Variant, Vec<SymbolExpansion>)>,
    /// Wall-clock seconds per stage.
    pub timings: Vec<(String, f64)>,
}

impl SuiteOutput {
    pub fn primary(&self) -> Option<&[SymbolExpansion]> {
        self.projections.first().map(|(_, p)| p.as_slice())
    }
}

fn push_homogeneity(
    batch: &mut RowBatch,
    check: &str,
    index: &str,
    order: Option<usize>,
    mat: &MatrixFn,
    degree: Degree,
    d: usize,
) {
    batch.push(
        check,
        index,
        order,
        HOMOGENEITY_TOL,
        mat.map(|e| euler_residual(e, degree, d)),
    );
}

fn push_orders(
    batch: &mut RowBatch,
    check: &str,
    index: &str,
    e: &SymbolExpansion,
    k: usize,
    tol: f64,
) -> Result<()> {
    for n in 0..=k {
        batch.push(check, index, Some(n), tol, e.extract_component(n)?);
    }
    Ok(())
}

/// Number of samples where a 1×1 quantity fails to be positive.
fn positivity(value: &MatrixFn, points: &[PhasePoint]) -> Result<Sampled> {
    let vals = MatrixBatch::new(std::slice::from_ref(value)).eval_many(points, &Params::new())?;
    let mut s = Sampled::default();
    let mut bad = 0usize;
    for v in vals {
        match v {
            Some(v) => {
                s.tested += 1;
                bad += (v[0][(0, 0)].re <= 0.0) as usize;
            }
            None => s.skipped += 1,
        }
    }
    s.max = bad as f64;
    Ok(s)
}

fn prefixed(mut rows: Vec<CheckRow>, variant: Variant) -> Vec<CheckRow> {
    for r in &mut rows {
        r.check = format!("{}/{}", variant.name(), r.check);
    }
    rows
}

/// Runs the whole suite: spectral validation, model sanity, projection
/// axioms per variant, uniqueness, closed forms, functional calculus and
/// the model's reference values.
pub fn run_suite(model: &ModelSpec, opts: &SuiteOptions) -> Result<SuiteOutput> {
    let k = opts.order;
    let tol = opts.tol;
    let d = model.d;
    let params = Params::new();
    let points = model.sample_points(opts.samples, opts.seed);
    let hom_points = model.sample_points(opts.homogeneity_samples, opts.seed ^ 0x5eed);
    let mut rows = Vec::new();
    let mut timings = Vec::new();
    let mut clock = Instant::now();
    let mut lap = |name: &str, timings: &mut Vec<(String, f64)>| {
        timings.push((name.to_string(), clock.elapsed().as_secs_f64()));
        clock = Instant::now();
    };

    rows.extend(model.validate(&points, tol)?);

    // the model itself
    let mut hom = RowBatch::new();
    let mut batch = RowBatch::new();
    let a_depth = model.a.depth().map_or(k, |n| n.min(k));
    for n in 0..=a_depth.min(model.a.last_order()) {
        let c = model.a.extract_component(n)?;
        push_homogeneity(
            &mut hom,
            "model.homogeneity",
            "A",
            Some(n),
            &c,
            model.a.degree_of(n),
            d,
        );
    }
    for e in model.spectral.entries() {
        let lab = index_label(e.index);
        let h = MatrixFn::scalar(1, &e.eigenvalue);
        push_homogeneity(
            &mut hom,
            "model.homogeneity",
            &format!("h{lab}"),
            None,
            &h,
            model.order,
            d,
        );
        let p = &e.projection;
        push_homogeneity(
            &mut hom,
            "model.homogeneity",
            &format!("P{lab}"),
            None,
            p,
            Degree::from_integer(0),
            d,
        );
    }
    let sa = adjoint(&model.a, a_depth).sub(&model.a.with_depth(a_depth))?;
    push_orders(&mut batch, "model.self-adjoint", "", &sa, a_depth, tol)?;
    rows.extend(batch.finish(&points, &params)?);
    lap("model", &mut timings);

    let mut built: Vec<(Variant, Vec<SymbolExpansion>)> = Vec::new();
    for &v in &opts.variants {
        let state = ProjectionState::new(model, v, k, None)?.run()?;
        lap(&format!("build {v}"), &mut timings);
        let ax = verify_projection_axioms(&state.projections, model, v, k, &points, &params, tol)?;
        rows.extend(prefixed(ax, v));
        // dilation test: symbolic ξ-derivatives of the deep components are costly
        let mut mats = Vec::new();
        let mut degs = Vec::new();
        let mut meta = Vec::new();
        for (e, p) in model.spectral.entries().iter().zip(&state.projections) {
            for n in 0..=k {
                mats.push(p.extract_component(n)?);
                degs.push(to_f64(p.degree_of(n)));
                meta.push((index_label(e.index), n));
            }
        }
        let check = format!("{}/projection.homogeneity", v.name());
        let res = dilation_residual_each(&mats, &degs, &hom_points, &params)?;
        for ((lab, n), s) in meta.into_iter().zip(res) {
            rows.push(CheckRow::new(&check, lab, Some(n), s, HOMOGENEITY_TOL));
        }
        lap(&format!("axioms {v}"), &mut timings);
        built.push((v, state.projections));
    }
    rows.extend(hom.finish(&hom_points, &params)?);
    lap("homogeneity", &mut timings);

    // uniqueness across variants and initial tails
    if let Some((v0, p0)) = built.first() {
        for (v, p) in &built[1..] {
            for (n, s) in compare_ladders(p0, p, k, &points, &params)?
                .into_iter()
                .enumerate()
            {
                rows.push(CheckRow::new(
                    "uniqueness.variants",
                    format!("{v0}~{v}"),
                    Some(n),
                    s,
                    tol,
                ));
            }
        }
    }
    let primary = built.first().cloned();
    if let (true, Some((v0, p0))) = (opts.tail_uniqueness && k >= 2, primary.as_ref()) {
        for (t, seed) in [
            (1, opts.seed.wrapping_add(101)),
            (2, opts.seed.wrapping_add(202)),
        ] {
            let tails: Vec<MatrixFn> = (0..model.spectral.m())
                .map(|n| random_tail(model.m, d, seed + n as u64))
                .collect();
            let state = ProjectionState::new(model, *v0, k, Some(&tails))?.run()?;
            for (n, s) in compare_ladders(p0, &state.projections, k, &points, &params)?
                .into_iter()
                .enumerate()
            {
                rows.push(CheckRow::new(
                    "uniqueness.tails",
                    format!("tail{t}"),
                    Some(n),
                    s,
                    tol,
                ));
            }
        }
        lap("tails", &mut timings);
    }

    let mut batch = RowBatch::new();
    // closed-form subprincipal symbols of the projections
    let closed = subprincipal_closed_form(model)?;
    if let Some((_, p0)) = primary.as_ref() {
        for ((e, p), c) in model.spectral.entries().iter().zip(p0).zip(&closed) {
            batch.push(
                "projections.sub-closed-form",
                index_label(e.index),
                Some(1),
                tol,
                &subprincipal(p)? - c,
            );
        }
    }

    // functional calculus
    let commuting = primary.as_ref().filter(|(v, _)| v.commutes());
    let mut modulus = None;
    if let Some((v0, p0)) = commuting {
        let md = modulus_symbol(model, p0, k)?;
        let prin = &md.extract_component(0)? - &model.spectral.modulus_principal();
        batch.push("modulus.principal", "", Some(0), tol, prin);
        let sq = compose(&md, &md, k)?.sub(&compose(&model.a, &model.a, k)?)?;
        push_orders(&mut batch, "modulus.square", "", &sq, k, tol)?;
        push_orders(
            &mut batch,
            "modulus.commutes",
            "",
            &commutator(&model.a, &md, k)?,
            k,
            tol,
        )?;
        let sub = &subprincipal(&md)? - &modulus_sub_closed_form(model)?;
        batch.push("modulus.sub-closed-form", "", Some(1), tol, sub);

        let th = heaviside_symbol(model, p0)?;
        let pos: Vec<&MatrixFn> = model
            .spectral
            .entries()
            .iter()
            .filter(|e| e.index > 0)
            .map(|e| &e.projection)
            .collect();
        let th_prin = MatrixFn::sum_all(model.m, pos);
        batch.push(
            "heaviside.principal",
            "",
            Some(0),
            tol,
            &th.extract_component(0)? - &th_prin,
        );
        push_orders(
            &mut batch,
            "heaviside.idempotent",
            "",
            &compose(&th, &th, k)?.sub(&th)?,
            k,
            tol,
        )?;
        push_orders(
            &mut batch,
            "heaviside.self-adjoint",
            "",
            &adjoint(&th, k).sub(&th)?,
            k,
            tol,
        )?;
        let neg = model.negated();
        let pn = ProjectionState::new(&neg, *v0, k, None)?.run()?.projections;
        let thn = heaviside_symbol(&neg, &pn)?;
        let total = th.add(&thn)?.sub(&SymbolExpansion::identity(model.m))?;
        push_orders(&mut batch, "heaviside.complement", "", &total, k, tol)?;
        rows.extend(signdef_principal_check(model, p0, &points, &params, tol)?);
        modulus = Some(md);
    }

    // reference values
    for r in &model.references {
        let value = match &r.quantity {
            Quantity::Principal => Some(model.a.principal().clone()),
            Quantity::Subprincipal => Some(subprincipal(&model.a)?),
            Quantity::ProjectionSub(j) => {
                let n = model.spectral.entries().iter().position(|e| e.index == *j);
                match (primary.as_ref(), n) {
                    (Some((_, p0)), Some(n)) => Some(subprincipal(&p0[n])?),
                    _ => None,
                }
            }
            Quantity::ModulusSub => modulus.as_ref().map(subprincipal).transpose()?,
            Quantity::ModulusSubClosedForm => Some(modulus_sub_closed_form(model)?),
            Quantity::Given(m) => Some(m.clone()),
        };
        let Some(value) = value else {
            rows.push(CheckRow::not_applicable(&r.check, r.index.clone(), None));
            continue;
        };
        match &r.expected {
            Expected::Equals(target) => {
                batch.push(&r.check, r.index.clone(), None, tol, &value - target)
            }
            Expected::Positive => {
                let s = positivity(&value, &points)?;
                rows.push(CheckRow::new(&r.check, r.index.clone(), None, s, 0.0));
            }
        }
    }
    rows.extend(batch.finish(&points, &params)?);
    lap("functional and references", &mut timings);

    sort_rows(&mut rows);
    Ok(SuiteOutput {
        rows,
        projections: built,
        timings,
    })
}
