use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use super::MatrixFn;
use crate::error::{Error, Result};
use crate::expr::{Params, PhasePoint, Tape};

/// Maximum of a sampled quantity, with the number of points used and skipped.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Sampled {
    pub max: f64,
    pub tested: usize,
    pub skipped: usize,
}

impl Sampled {
    pub fn merge(self, other: Sampled) -> Sampled {
        Sampled {
            max: self.max.max(other.max),
            tested: self.tested.max(other.tested),
            skipped: self.skipped.max(other.skipped),
        }
    }
}

/// A batch of matrix functions compiled into one tape.
pub struct MatrixBatch {
    tape: Tape,
    m: Vec<usize>,
}

impl MatrixBatch {
    pub fn new(mats: &[MatrixFn]) -> Self {
        let roots: Vec<_> = mats
            .iter()
            .flat_map(|a| a.entries().iter().cloned())
            .collect();
        MatrixBatch {
            tape: Tape::compile(&roots),
            m: mats.iter().map(MatrixFn::m).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.m.len()
    }

    pub fn is_empty(&self) -> bool {
        self.m.is_empty()
    }

    pub fn eval(&self, p: &PhasePoint, params: &Params) -> Result<Vec<DMatrix<Complex64>>> {
        let v = self.tape.eval(p, params)?;
        let mut out = Vec::with_capacity(self.m.len());
        let mut at = 0;
        for &m in &self.m {
            out.push(DMatrix::from_row_slice(m, m, &v[at..at + m * m]));
            at += m * m;
        }
        Ok(out)
    }

    /// Evaluates at every point in parallel. `Ok(None)` marks a point where
    /// some entry hit a domain error.
    pub fn eval_many(
        &self,
        points: &[PhasePoint],
        params: &Params,
    ) -> Result<Vec<Option<Vec<DMatrix<Complex64>>>>> {
        points
            .par_iter()
            .map(|p| match self.eval(p, params) {
                Ok(v) => Ok(Some(v)),
                Err(Error::Domain { .. }) => Ok(None),
                Err(e) => Err(e),
            })
            .collect()
    }
}

fn max_entry(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Largest |entry| of `f(values)` over the sample points.
pub fn sampled_max(
    mats: &[MatrixFn],
    points: &[PhasePoint],
    params: &Params,
    f: impl Fn(&[DMatrix<Complex64>]) -> f64 + Sync,
) -> Result<Sampled> {
    let batch = MatrixBatch::new(mats);
    let vals = batch.eval_many(points, params)?;
    let mut out = Sampled::default();
    for v in vals {
        match v {
            Some(v) => {
                out.tested += 1;
                out.max = out.max.max(f(&v));
            }
            None => out.skipped += 1,
        }
    }
    Ok(out)
}

/// Largest entry modulus over all matrices and points.
pub fn max_abs(mats: &[MatrixFn], points: &[PhasePoint], params: &Params) -> Result<Sampled> {
    sampled_max(mats, points, params, |v| {
        v.iter().map(max_entry).fold(0.0, f64::max)
    })
}

/// Largest entry modulus of each matrix separately, from one shared tape.
pub fn max_abs_each(
    mats: &[MatrixFn],
    points: &[PhasePoint],
    params: &Params,
) -> Result<Vec<Sampled>> {
    let batch = MatrixBatch::new(mats);
    let vals = batch.eval_many(points, params)?;
    let mut out = vec![Sampled::default(); mats.len()];
    for v in vals {
        match v {
            Some(v) => {
                for (o, m) in out.iter_mut().zip(&v) {
                    o.tested += 1;
                    o.max = o.max.max(max_entry(m));
                }
            }
            None => out.iter_mut().for_each(|o| o.skipped += 1),
        }
    }
    Ok(out)
}

/// Homogeneity by dilation: the largest entry of
/// m(x, tξ) − t^degree m(x, ξ) for t = 2 and t = 1/2, per matrix.
pub fn dilation_residual_each(
    mats: &[MatrixFn],
    degrees: &[f64],
    points: &[PhasePoint],
    params: &Params,
) -> Result<Vec<Sampled>> {
    let batch = MatrixBatch::new(mats);
    let per_point: Vec<Option<Vec<f64>>> = points
        .par_iter()
        .map(|p| {
            let base = match batch.eval(p, params) {
                Ok(v) => v,
                Err(Error::Domain { .. }) => return Ok(None),
                Err(e) => return Err(e),
            };
            let mut worst = vec![0.0f64; mats.len()];
            for t in [2.0, 0.5] {
                let v = match batch.eval(&p.scaled(t), params) {
                    Ok(v) => v,
                    Err(Error::Domain { .. }) => return Ok(None),
                    Err(e) => return Err(e),
                };
                for (i, w) in worst.iter_mut().enumerate() {
                    let f = t.powf(degrees[i]);
                    *w = w.max(max_entry(&(&v[i] - base[i].scale(f))));
                }
            }
            Ok(Some(worst))
        })
        .collect::<Result<_>>()?;
    let mut out = vec![Sampled::default(); mats.len()];
    for v in per_point {
        match v {
            Some(v) => {
                for (o, r) in out.iter_mut().zip(v) {
                    o.tested += 1;
                    o.max = o.max.max(r);
                }
            }
            None => out.iter_mut().for_each(|o| o.skipped += 1),
        }
    }
    Ok(out)
}

/// Largest entry modulus of `a[i] − b[i]`, evaluated numerically on each side.
pub fn max_abs_diff(
    a: &[MatrixFn],
    b: &[MatrixFn],
    points: &[PhasePoint],
    params: &Params,
) -> Result<Sampled> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} matrices against {}",
            a.len(),
            b.len()
        )));
    }
    let n = a.len();
    let all: Vec<MatrixFn> = a.iter().chain(b).cloned().collect();
    sampled_max(&all, points, params, |v| {
        (0..n)
            .map(|k| max_entry(&(&v[k] - &v[n + k])))
            .fold(0.0, f64::max)
    })
}
