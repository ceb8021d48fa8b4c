//! Verification rows shared by every checker.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::expr::{Params, PhasePoint};
use crate::symbol::{max_abs_each, MatrixFn, Sampled};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
}

/// One verified quantity: the largest sampled residual of an identity that
/// should vanish, for one index (or index pair) and relative order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRow {
    pub check: String,
    pub index: String,
    pub order: Option<usize>,
    pub residual: f64,
    pub tolerance: f64,
    pub status: Status,
    pub samples: usize,
    pub skipped: usize,
}

/// Residual reported when every sample point was skipped.
pub const NO_SAMPLES: f64 = f64::MAX;

impl CheckRow {
    pub fn new(
        check: &str,
        index: impl Into<String>,
        order: Option<usize>,
        s: Sampled,
        tolerance: f64,
    ) -> Self {
        let residual = if s.tested == 0 { NO_SAMPLES } else { s.max };
        CheckRow {
            check: check.to_string(),
            index: index.into(),
            order,
            residual,
            tolerance,
            status: if residual <= tolerance {
                Status::Pass
            } else {
                Status::Fail
            },
            samples: s.tested,
            skipped: s.skipped,
        }
    }

    /// A row that does not apply to the chosen variant or model.
    pub fn not_applicable(check: &str, index: impl Into<String>, order: Option<usize>) -> Self {
        CheckRow {
            check: check.to_string(),
            index: index.into(),
            order,
            residual: 0.0,
            tolerance: 0.0,
            status: Status::NotApplicable,
            samples: 0,
            skipped: 0,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }
}

struct Pending {
    check: String,
    index: String,
    order: Option<usize>,
    tolerance: f64,
}

/// Rows whose residual is the largest entry of a matrix that should vanish.
/// All matrices are compiled into one tape, so shared subexpressions are
/// evaluated once per point.
#[derive(Default)]
pub struct RowBatch {
    meta: Vec<Pending>,
    mats: Vec<MatrixFn>,
}

impl RowBatch {
    pub fn new() -> Self {
        RowBatch::default()
    }

    pub fn push(
        &mut self,
        check: &str,
        index: impl Into<String>,
        order: Option<usize>,
        tolerance: f64,
        residual: MatrixFn,
    ) {
        self.meta.push(Pending {
            check: check.to_string(),
            index: index.into(),
            order,
            tolerance,
        });
        self.mats.push(residual);
    }

    pub fn len(&self) -> usize {
        self.mats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mats.is_empty()
    }

    pub fn finish(self, points: &[PhasePoint], params: &Params) -> Result<Vec<CheckRow>> {
        if self.mats.is_empty() {
            return Ok(Vec::new());
        }
        let s = max_abs_each(&self.mats, points, params)?;
        Ok(self
            .meta
            .into_iter()
            .zip(s)
            .map(|(p, s)| CheckRow::new(&p.check, p.index, p.order, s, p.tolerance))
            .collect())
    }
}

/// Stable order: by check id, then index, then relative order.
pub fn sort_rows(rows: &mut [CheckRow]) {
    rows.sort_by(|a, b| {
        (a.check.as_str(), a.index.as_str(), a.order).cmp(&(
            b.check.as_str(),
            b.index.as_str(),
            b.order,
        ))
    });
}

/// Label for a signed index j.
pub fn index_label(j: i32) -> String {
    if j > 0 {
        format!("+{j}")
    } else {
        j.to_string()
    }
}

pub fn pair_label(j: i32, l: i32) -> String {
    format!("{},{}", index_label(j), index_label(l))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_follows_threshold() {
        let s = Sampled {
            max: 1e-9,
            tested: 5,
            skipped: 0,
        };
        assert!(CheckRow::new("a", "", None, s, 1e-8).passed());
        assert!(CheckRow::new("a", "", None, s, 1e-10).failed());
        let none = Sampled::default();
        assert!(CheckRow::new("a", "", None, none, 1.0).failed());
    }

    #[test]
    fn labels() {
        assert_eq!(index_label(2), "+2");
        assert_eq!(index_label(-1), "-1");
        assert_eq!(pair_label(-1, 1), "-1,+1");
    }
}
