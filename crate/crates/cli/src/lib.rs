//! Driver for the `psproj` command: configuration, verification reports and
//! symbol dumps.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use psproj_core::expr::render_shared;
use psproj_core::models::{build_model, ModelName, ModelParams, ModelSpec};
use psproj_core::projections::{build_projections, Variant};
use psproj_core::report::{index_label, CheckRow, Status};
use psproj_core::suite::{run_suite, SuiteOptions};
use psproj_core::{Params, PhasePoint};

pub const ENGINE_VERSION: &str = concat!("psproj ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("model error: {0}")]
    Model(#[from] psproj_core::Error),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Model(_) | CliError::Io { .. } => 3,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Full,
    Simplified,
    Both,
}

impl Algorithm {
    pub fn variants(self) -> Vec<Variant> {
        match self {
            Algorithm::Full => vec![Variant::CommutingFull],
            Algorithm::Simplified => vec![Variant::CommutingSimplified],
            Algorithm::Both => vec![Variant::CommutingFull, Variant::CommutingSimplified],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelName,
    pub params: ModelParams,
    pub order: usize,
    pub samples: usize,
    pub tolerance: f64,
    pub algorithm: Algorithm,
    /// Also rebuild from perturbed initial symbols and compare.
    pub tail_uniqueness: bool,
    pub report: Option<PathBuf>,
    pub markdown: Option<PathBuf>,
    pub dump: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            model: ModelName::ScalarTrivial,
            params: ModelParams::default(),
            order: 3,
            samples: 50,
            tolerance: 1e-8,
            algorithm: Algorithm::Both,
            tail_uniqueness: true,
            report: None,
            markdown: None,
            dump: None,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig =
            serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        RunConfig::from_json(&text)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.order < 1 {
            return Err(CliError::Config("order must be at least 1".into()));
        }
        if self.samples < 1 {
            return Err(CliError::Config("samples must be at least 1".into()));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(CliError::Config("tolerance must be positive".into()));
        }
        let p = &self.params;
        if !(p.lambda.is_finite() && p.mu.is_finite() && p.twist.is_finite()) {
            return Err(CliError::Config("model parameters must be finite".into()));
        }
        Ok(())
    }

    fn suite_options(&self) -> SuiteOptions {
        SuiteOptions {
            order: self.order,
            samples: self.samples,
            seed: self.params.seed,
            tol: self.tolerance,
            variants: self.algorithm.variants(),
            tail_uniqueness: self.tail_uniqueness,
            ..SuiteOptions::default()
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub not_applicable: usize,
}

impl Summary {
    pub fn of(rows: &[CheckRow]) -> Self {
        let mut s = Summary {
            total: rows.len(),
            ..Summary::default()
        };
        for r in rows {
            match r.status {
                Status::Pass => s.passed += 1,
                Status::Fail => s.failed += 1,
                Status::NotApplicable => s.not_applicable += 1,
            }
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub engine: String,
    pub config: RunConfig,
    pub summary: Summary,
    pub rows: Vec<CheckRow>,
    /// Set when the run stopped early; the rows are then partial.
    pub error: Option<String>,
}

impl VerificationReport {
    fn new(config: &RunConfig, rows: Vec<CheckRow>, error: Option<String>) -> Self {
        VerificationReport {
            engine: ENGINE_VERSION.to_string(),
            config: config.clone(),
            summary: Summary::of(&rows),
            rows,
            error,
        }
    }

    /// 0 if every row passed, 1 on failures, 3 if the run was cut short.
    pub fn exit_code(&self) -> i32 {
        if self.error.is_some() {
            3
        } else if self.summary.failed > 0 {
            1
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn to_markdown(&self) -> String {
        let c = &self.config;
        let mut s = String::new();
        let _ = writeln!(s, "# Verification report: {}\n", c.model);
        let _ = writeln!(
            s,
            "order {}, {} samples, seed {}, tolerance {:e}, algorithm {:?}\n",
            c.order, c.samples, c.params.seed, c.tolerance, c.algorithm
        );
        let m = &self.summary;
        let _ = writeln!(
            s,
            "{} checks: {} passed, {} failed, {} not applicable\n",
            m.total, m.passed, m.failed, m.not_applicable
        );
        if let Some(e) = &self.error {
            let _ = writeln!(s, "**stopped early:** {e}\n");
        }
        s.push_str(
            "| check | index | order | residual | tolerance | status | samples | skipped |\n",
        );
        s.push_str("|---|---|---|---|---|---|---|---|\n");
        for r in &self.rows {
            let order = r.order.map_or("-".into(), |o| o.to_string());
            let status = match r.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::NotApplicable => "n/a",
            };
            let _ = writeln!(
                s,
                "| {} | {} | {} | {:.3e} | {:.1e} | {} | {} | {} |",
                r.check, r.index, order, r.residual, r.tolerance, status, r.samples, r.skipped
            );
        }
        s
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn build(cfg: &RunConfig) -> Result<ModelSpec, CliError> {
    Ok(build_model(cfg.model, &cfg.params, cfg.order)?)
}

/// Builds the model and runs every check. Model errors still produce a
/// (partial) report.
pub fn run_verify(cfg: &RunConfig) -> Result<VerificationReport, CliError> {
    cfg.validate()?;
    let report = match build(cfg).and_then(|m| Ok(run_suite(&m, &cfg.suite_options())?)) {
        Ok(out) => VerificationReport::new(cfg, out.rows, None),
        Err(e) => VerificationReport::new(cfg, Vec::new(), Some(e.to_string())),
    };
    if let Some(p) = &cfg.report {
        write_file(p, &report.to_json())?;
    }
    if let Some(p) = &cfg.markdown {
        write_file(p, &report.to_markdown())?;
    }
    Ok(report)
}

/// Fixed evaluation points for dumps: x along the diagonal of the sample box,
/// ξ on the unit circle of the first two momenta.
pub fn dump_grid(model: &ModelSpec) -> Vec<PhasePoint> {
    (0..4)
        .map(|i| {
            let t = (i + 1) as f64 / 5.0;
            let x = model
                .sample_box
                .iter()
                .map(|(lo, hi)| lo + (hi - lo) * t)
                .collect();
            let ang = std::f64::consts::PI * (0.3 + 0.5 * i as f64);
            let mut xi = vec![0.0; model.d];
            xi[0] = ang.cos();
            if model.d > 1 {
                xi[1] = ang.sin();
            }
            PhasePoint::new(x, xi).expect("grid points are finite")
        })
        .collect()
}

fn fmt_c(c: num_complex::Complex64) -> String {
    format!("{:+.12e}{:+.12e}i", c.re, c.im)
}

/// Text dump of every component of every P_j: shared-subexpression
/// rendering of each entry, then values on [`dump_grid`].
pub fn run_dump(cfg: &RunConfig) -> Result<String, CliError> {
    cfg.validate()?;
    let model = build(cfg)?;
    let variant = cfg.algorithm.variants()[0];
    let ps = build_projections(&model, cfg.order, variant)?;
    let grid = dump_grid(&model);
    let params = Params::new();
    let mut s = String::new();
    let _ = writeln!(s, "# {} symbol dump", ENGINE_VERSION);
    let _ = writeln!(
        s,
        "model {}  chart: {}\nvariant {}  order {}  lambda {} mu {} twist {} seed {}\n",
        model.name,
        model.chart,
        variant,
        cfg.order,
        cfg.params.lambda,
        cfg.params.mu,
        cfg.params.twist,
        cfg.params.seed
    );
    let _ = writeln!(s, "grid:");
    for (g, p) in grid.iter().enumerate() {
        let _ = writeln!(s, "  g{g}: x = {:?}, xi = {:?}", p.x, p.xi);
    }
    for (e, p) in model.spectral.entries().iter().zip(&ps) {
        let lab = index_label(e.index);
        for n in 0..=cfg.order {
            let c = p.extract_component(n)?;
            let _ = writeln!(s, "\n## P{lab} order {n} (degree {})", p.degree_of(n));
            let (defs, entries) = render_shared(c.entries(), "t");
            for (name, def) in &defs {
                let _ = writeln!(s, "  {name} = {def}");
            }
            for (k, ent) in entries.iter().enumerate() {
                let _ = writeln!(s, "  [{},{}] = {ent}", k / c.m(), k % c.m());
            }
            for (g, pt) in grid.iter().enumerate() {
                let v = c.eval(pt, &params)?;
                let vals: Vec<String> = v.transpose().iter().map(|z| fmt_c(*z)).collect();
                let _ = writeln!(s, "  g{g}: {}", vals.join("  "));
            }
        }
    }
    if let Some(path) = &cfg.dump {
        write_file(path, &s)?;
    }
    Ok(s)
}
