//! Acceptance run: every criterion at its stated tolerance, one PASS/FAIL
//! line per criterion on stderr.
//!
//!     cargo test -p psproj-core --test acceptance

mod common;

use std::io::Write;
use std::time::Instant;

use num_complex::Complex64;
use psproj_core::geometry::to_matrix;
use psproj_core::models::{build_model, ModelName, ModelParams, ModelSpec};
use psproj_core::projections::{build_projections, subprincipal_closed_form, Variant};
use psproj_core::report::{CheckRow, Status};
use psproj_core::suite::{run_suite, SuiteOptions, SuiteOutput};
use psproj_core::symbol::{
    adjoint, compose, max_abs, max_abs_each, poisson, subprincipal, MatrixFn,
};
use psproj_core::Params;

const MODELS: [ModelName; 4] = [
    ModelName::DiracS3,
    ModelName::DiracT3,
    ModelName::LameT2,
    ModelName::Random2x2,
];

struct Run {
    name: ModelName,
    model: ModelSpec,
    out: SuiteOutput,
}

#[derive(Default)]
struct Verdict {
    worst: f64,
    rows: usize,
    failures: Vec<String>,
}

impl Verdict {
    fn value(&mut self, what: &str, residual: f64, tol: f64) {
        self.rows += 1;
        if residual.is_nan() || residual > tol {
            self.failures
                .push(format!("{what}: {residual:.3e} > {tol:.0e}"));
        }
        if residual.is_finite() {
            self.worst = self.worst.max(residual);
        }
    }

    /// Every applicable row matching `pred` must be at most `tol`.
    fn rows(&mut self, run: &Run, pred: impl Fn(&CheckRow) -> bool, tol: f64) -> usize {
        let mut n = 0;
        for r in run.out.rows.iter().filter(|r| pred(r)) {
            if r.status == Status::NotApplicable {
                continue;
            }
            n += 1;
            let what = format!("{} {} [{}] order {:?}", run.name, r.check, r.index, r.order);
            if r.samples == 0 {
                self.rows += 1;
                self.failures.push(format!("{what}: no samples"));
            } else {
                self.value(&what, r.residual, tol);
            }
        }
        n
    }

    fn require(&mut self, what: &str, ok: bool) {
        if !ok {
            self.failures.push(what.to_string());
        }
    }

    fn report(&self, n: usize, title: &str, extra: &str) -> bool {
        let pass = self.failures.is_empty() && self.rows > 0;
        let mut err = std::io::stderr().lock();
        let _ = writeln!(
            err,
            "criterion {n} {}: {title}: {} checks, worst residual {:.3e}{extra}",
            if pass { "PASS" } else { "FAIL" },
            self.rows,
            self.worst
        );
        for f in self.failures.iter().take(10) {
            let _ = writeln!(err, "    {f}");
        }
        pass
    }
}

fn check_is(r: &CheckRow, suffix: &str) -> bool {
    r.check == suffix || r.check.ends_with(&format!("/{suffix}"))
}

#[test]
fn acceptance() {
    let params = ModelParams::default();
    let opts = SuiteOptions::default();
    let mut runs = Vec::new();
    for name in MODELS {
        let model = build_model(name, &params, opts.order).unwrap();
        let t = Instant::now();
        let out = run_suite(&model, &opts).unwrap();
        let _ = writeln!(
            std::io::stderr().lock(),
            "suite {name}: {:.1}s, {} rows",
            t.elapsed().as_secs_f64(),
            out.rows.len()
        );
        runs.push(Run { name, model, out });
    }
    let mut all = true;

    // 1. projection axioms
    let mut v = Verdict::default();
    let mut seconds = 0.0;
    for run in &runs {
        let n = v.rows(run, |r| r.check.contains("/axiom."), 1e-8);
        v.require(&format!("{}: no axiom rows", run.name), n > 0);
        for (stage, s) in &run.out.timings {
            if stage.starts_with("build ") || stage.starts_with("axioms ") {
                seconds += s;
            }
        }
    }
    v.require("construction and axioms took over 300 s", seconds < 300.0);
    all &= v.report(
        1,
        "projection axioms, K=3, N=50",
        &format!(", {seconds:.1}s"),
    );

    // 2. uniqueness
    let mut v = Verdict::default();
    for run in &runs {
        let a = v.rows(run, |r| r.check == "uniqueness.variants", 1e-9);
        let b = v.rows(run, |r| r.check == "uniqueness.tails", 1e-9);
        v.require(
            &format!("{}: uniqueness rows missing", run.name),
            a == 4 && b == 8,
        );
    }
    all &= v.report(2, "full vs simplified, two tails", "");

    // 3. closed-form subprincipal, from a k=1 run of each variant
    let mut v = Verdict::default();
    for run in &runs {
        v.rows(run, |r| r.check == "projections.sub-closed-form", 1e-9);
        let closed = subprincipal_closed_form(&run.model).unwrap();
        let points = run.model.sample_points(50, 1);
        for variant in [Variant::CommutingFull, Variant::CommutingSimplified] {
            let ps = build_projections(&run.model, 1, variant).unwrap();
            let diffs: Vec<MatrixFn> = ps
                .iter()
                .zip(&closed)
                .map(|(p, c)| &subprincipal(p).unwrap() - c)
                .collect();
            for (j, s) in max_abs_each(&diffs, &points, &Params::new())
                .unwrap()
                .into_iter()
                .enumerate()
            {
                v.value(&format!("{} {variant} k=1 P#{j}", run.name), s.max, 1e-9);
            }
        }
    }
    all &= v.report(3, "closed-form subprincipal", "");

    // 4. Lamé
    let mut v = Verdict::default();
    let lame = runs.iter().find(|r| r.name == ModelName::LameT2).unwrap();
    let a = v.rows(lame, |r| r.check == "lame.projection-sub", 1e-9);
    let b = v.rows(lame, |r| r.check == "lame.principal", 1e-9);
    let c = v.rows(lame, |r| r.check == "lame.subprincipal", 1e-9);
    v.require("lame reference rows missing", a == 2 && b == 1 && c == 1);
    all &= v.report(4, "Lamé on T² with rotating framing", "");

    // 5. Dirac on S³
    let mut v = Verdict::default();
    let s3 = runs.iter().find(|r| r.name == ModelName::DiracS3).unwrap();
    let geo = s3.model.geometry.as_ref().unwrap();
    let gate = &to_matrix(geo.dual_contorsion.as_ref().unwrap()) + &to_matrix(&geo.metric);
    let chart = s3.model.sample_points(20, 2024);
    let s = max_abs(&[gate], &chart, &Params::new()).unwrap();
    v.require("K* gate sampled no points", s.tested == 20);
    v.value("K* + g at 20 chart points", s.max, 1e-8);
    let names = [
        "dirac.subprincipal",
        "dirac.subprincipal-s3",
        "dirac.modulus-sub",
        "dirac.modulus-sub-s3",
        "dirac.modulus-sub-closed-form",
        "dirac.modulus-sub-closed-form-s3",
    ];
    for name in names {
        let n = v.rows(s3, |r| r.check == name, 1e-8);
        v.require(&format!("{name} missing"), n == 1);
    }
    all &= v.report(5, "Dirac on S³", "");

    // 6. functional calculus
    let mut v = Verdict::default();
    for run in &runs {
        for name in [
            "modulus.square",
            "heaviside.idempotent",
            "heaviside.self-adjoint",
            "heaviside.complement",
        ] {
            let n = v.rows(run, |r| r.check == name, 1e-8);
            v.require(&format!("{} {name}: expected 4 orders", run.name), n == 4);
        }
        let n = v.rows(run, |r| r.check == "signdef.principal", 1e-8);
        v.require(
            &format!("{} signdef rows missing", run.name),
            n == run.model.m,
        );
        v.rows(run, |r| r.check == "signdef.sign", 0.0);
    }
    all &= v.report(6, "modulus, Heaviside, sign-definite pieces", "");

    // 7. calculus self-consistency
    let mut v = Verdict::default();
    let pts = common::points(50, 77);
    let p = Params::new();
    let mut rng = common::rng(2718);
    let i2 = Complex64::new(0.0, 0.5);
    let mut law = Vec::new();
    for _ in 0..20 {
        let b = common::random_first_order(&mut rng);
        let c = common::random_first_order(&mut rng);
        let lhs = subprincipal(&compose(&b, &c, 1).unwrap()).unwrap();
        let (bp, cp) = (b.principal(), c.principal());
        let (bs, cs) = (subprincipal(&b).unwrap(), subprincipal(&c).unwrap());
        let rhs = MatrixFn::sum_all(
            2,
            &[bp * &cs, &bs * cp, poisson(bp, cp).unwrap().scale_c(i2)],
        );
        law.push(&lhs - &rhs);
    }
    for (n, s) in max_abs_each(&law, &pts, &p)
        .unwrap()
        .into_iter()
        .enumerate()
    {
        v.value(&format!("composition law pair {n}"), s.max, 1e-9);
    }
    for t in 0..5 {
        let b = common::random_first_order(&mut rng);
        let back = adjoint(&adjoint(&b, 3), 3).sub(&b.with_depth(3)).unwrap();
        let mats = back.components_through(3).unwrap();
        v.value(
            &format!("adjoint involution {t}"),
            max_abs(&mats, &pts, &p).unwrap().max,
            1e-9,
        );
        let c = common::random_zero_order(&mut rng, 3);
        let d = common::random_first_order(&mut rng);
        let left = compose(&compose(&b, &c, 3).unwrap(), &d, 3).unwrap();
        let right = compose(&b, &compose(&c, &d, 3).unwrap(), 3).unwrap();
        let mats = left.sub(&right).unwrap().components_through(3).unwrap();
        v.value(
            &format!("associativity {t}"),
            max_abs(&mats, &pts, &p).unwrap().max,
            1e-9,
        );
    }
    for run in &runs {
        let n = v.rows(run, |r| check_is(r, "model.homogeneity"), 1e-10);
        v.require(&format!("{}: no homogeneity rows", run.name), n > 0);
    }
    all &= v.report(7, "calculus self-consistency", "");

    assert!(all, "acceptance criteria failed; see the lines above");
}
