//! Eigenvalues and eigenprojections of the principal symbol, with pointwise
//! numeric oracles.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::degree::Degree;
use crate::error::{Error, Result};
use crate::expr::{Expr, Params, PhasePoint, Var};
use crate::report::{index_label, pair_label, CheckRow};
use crate::symbol::{scalar1, MatrixBatch, MatrixFn, Sampled};

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralEntry {
    pub index: i32,
    pub eigenvalue: Expr,
    pub projection: MatrixFn,
}

/// h^(j) and P^(j) for the signed indices j = −m⁻..−1, 1..m⁺, listed in
/// increasing order of j.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralData {
    order: Degree,
    entries: Vec<SpectralEntry>,
    m_plus: usize,
    m_minus: usize,
}

impl SpectralData {
    /// `negative` and `positive` are given in increasing order of eigenvalue.
    pub fn new(
        order: Degree,
        negative: Vec<(Expr, MatrixFn)>,
        positive: Vec<(Expr, MatrixFn)>,
    ) -> Result<Self> {
        let m_minus = negative.len();
        let m_plus = positive.len();
        let m = m_minus + m_plus;
        let mut entries = Vec::with_capacity(m);
        for (k, (h, p)) in negative.into_iter().enumerate() {
            entries.push(SpectralEntry {
                index: k as i32 - m_minus as i32,
                eigenvalue: h,
                projection: p,
            });
        }
        for (k, (h, p)) in positive.into_iter().enumerate() {
            entries.push(SpectralEntry {
                index: k as i32 + 1,
                eigenvalue: h,
                projection: p,
            });
        }
        if m == 0 {
            return Err(Error::InvalidSpectralData("no eigenvalues".into()));
        }
        if let Some(e) = entries.iter().find(|e| e.projection.m() != m) {
            return Err(Error::InvalidSpectralData(format!(
                "projection {} is {}x{} but there are {m} eigenvalues",
                index_label(e.index),
                e.projection.m(),
                e.projection.m()
            )));
        }
        Ok(SpectralData {
            order,
            entries,
            m_plus,
            m_minus,
        })
    }

    pub fn order(&self) -> Degree {
        self.order
    }

    pub fn m(&self) -> usize {
        self.entries.len()
    }

    pub fn m_plus(&self) -> usize {
        self.m_plus
    }

    pub fn m_minus(&self) -> usize {
        self.m_minus
    }

    pub fn entries(&self) -> &[SpectralEntry] {
        &self.entries
    }

    pub fn indices(&self) -> Vec<i32> {
        self.entries.iter().map(|e| e.index).collect()
    }

    pub fn get(&self, j: i32) -> Option<&SpectralEntry> {
        self.entries.iter().find(|e| e.index == j)
    }

    /// Σ_j h^(j) P^(j).
    pub fn reconstruct(&self) -> MatrixFn {
        let terms: Vec<MatrixFn> = self
            .entries
            .iter()
            .map(|e| e.projection.scale(&e.eigenvalue))
            .collect();
        MatrixFn::sum_all(self.m(), &terms)
    }

    /// Σ_j |h^(j)| P^(j), using the sign fixed by the index.
    pub fn modulus_principal(&self) -> MatrixFn {
        let terms: Vec<MatrixFn> = self
            .entries
            .iter()
            .map(|e| {
                let h = if e.index > 0 {
                    e.eigenvalue.clone()
                } else {
                    -&e.eigenvalue
                };
                e.projection.scale(&h)
            })
            .collect();
        MatrixFn::sum_all(self.m(), &terms)
    }

    /// Spectral data of −A_prin: eigenvalues negated, indices mirrored.
    pub fn negated(&self) -> SpectralData {
        let flip = |e: &SpectralEntry| (-&e.eigenvalue, e.projection.clone());
        let negative = self
            .entries
            .iter()
            .rev()
            .filter(|e| e.index > 0)
            .map(flip)
            .collect();
        let positive = self
            .entries
            .iter()
            .rev()
            .filter(|e| e.index < 0)
            .map(flip)
            .collect();
        SpectralData::new(self.order, negative, positive).expect("same sizes")
    }
}

/// Hermitian-defect and gap threshold of the numeric oracle, relative to the
/// size of the matrix. Independent of the reporting tolerance.
pub const ORACLE_TOL: f64 = 1e-9;

/// (eigenvalue, orthogonal projection onto its eigenline), eigenvalues ascending.
pub type EigenPair = (f64, DMatrix<Complex64>);

fn hermitian_defect(m: &DMatrix<Complex64>) -> f64 {
    (m - m.adjoint())
        .iter()
        .map(|c| c.norm())
        .fold(0.0, f64::max)
}

/// Pointwise eigendecomposition of a Hermitian matrix with simple spectrum.
pub fn numeric_eigendecomposition(mval: &DMatrix<Complex64>, tol: f64) -> Result<Vec<EigenPair>> {
    let n = mval.nrows();
    if n != mval.ncols() {
        return Err(Error::DimensionMismatch("matrix is not square".into()));
    }
    let defect = hermitian_defect(mval);
    if defect > tol {
        return Err(Error::NotHermitian(defect));
    }
    let herm = (mval + mval.adjoint()).scale(0.5);
    let eig = herm.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let mut out = Vec::with_capacity(n);
    for (k, &i) in order.iter().enumerate() {
        let lam = eig.eigenvalues[i];
        if k > 0 {
            let gap = lam - out.last().map(|p: &EigenPair| p.0).unwrap();
            if gap <= tol {
                return Err(Error::SimplicityViolation { gap, tol });
            }
        }
        let v = eig.eigenvectors.column(i);
        let norm2 = v.dotc(&v);
        out.push((lam, (&v * v.adjoint()).unscale(norm2.re)));
    }
    Ok(out)
}

/// Directional derivative of P^(j) at `p` from first-order perturbation
/// theory, dP^(j) = Σ_{l≠j} (P^(l) dA P^(j) + P^(j) dA P^(l)) / (h^(j) − h^(l)),
/// using a numeric eigendecomposition of A_prin and the exact derivative of
/// A_prin along `direction`.
pub fn projection_derivative_oracle(
    sd: &SpectralData,
    a_prin: &MatrixFn,
    j: i32,
    p: &PhasePoint,
    params: &Params,
    direction: Var,
    tol: f64,
) -> Result<DMatrix<Complex64>> {
    let entry = sd
        .get(j)
        .ok_or_else(|| Error::InvalidSpectralData(format!("no index {}", index_label(j))))?;
    let a = a_prin.eval(p, params)?;
    let da = a_prin.diff(direction).eval(p, params)?;
    let pairs = numeric_eigendecomposition(&a, tol)?;
    let hj = scalar1(entry.eigenvalue.clone()).eval(p, params)?[(0, 0)].re;
    let at = pairs
        .iter()
        .enumerate()
        .min_by(|x, y| (x.1 .0 - hj).abs().total_cmp(&(y.1 .0 - hj).abs()))
        .map(|(k, _)| k)
        .unwrap();
    let (lj, pj) = &pairs[at];
    let m = a.nrows();
    let mut out = DMatrix::<Complex64>::zeros(m, m);
    for (k, (ll, pl)) in pairs.iter().enumerate() {
        if k == at {
            continue;
        }
        let t = pl * &da * pj + pj * &da * pl;
        out += t.unscale(lj - ll);
    }
    Ok(out)
}

fn sampled(s: &mut Sampled, v: f64) {
    s.max = s.max.max(v);
}

/// Numerically checks the spectral invariants at `points`: real, correctly
/// signed and increasing eigenvalues; Hermitian rank-1 idempotent mutually
/// orthogonal projections summing to I; Σ h P = A_prin; agreement with the
/// numeric eigendecomposition oracle.
pub fn validate_spectral(
    sd: &SpectralData,
    a_prin: &MatrixFn,
    points: &[PhasePoint],
    params: &Params,
    tol: f64,
) -> Result<Vec<CheckRow>> {
    let m = sd.m();
    if a_prin.m() != m {
        return Err(Error::DimensionMismatch(format!(
            "principal symbol is {}x{} but there are {m} eigenvalues",
            a_prin.m(),
            a_prin.m()
        )));
    }
    let mut mats: Vec<MatrixFn> = vec![a_prin.clone()];
    for e in sd.entries() {
        mats.push(scalar1(e.eigenvalue.clone()));
        mats.push(e.projection.clone());
    }
    let batch = MatrixBatch::new(&mats);
    let values = batch.eval_many(points, params)?;

    let idx = sd.indices();
    let mut real = vec![Sampled::default(); m];
    let mut sign = vec![Sampled::default(); m];
    let mut herm = vec![Sampled::default(); m];
    let mut idem = vec![Sampled::default(); m];
    let mut rank = vec![Sampled::default(); m];
    let mut ortho = vec![vec![Sampled::default(); m]; m];
    let mut order = Sampled::default();
    let mut partition = Sampled::default();
    let mut recon = Sampled::default();
    let mut oracle = Sampled::default();
    let norm = |x: &DMatrix<Complex64>| x.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let id = DMatrix::<Complex64>::identity(m, m);
    let mut tested = 0;
    let mut skipped = 0;
    for v in values {
        let Some(v) = v else {
            skipped += 1;
            continue;
        };
        tested += 1;
        let a = &v[0];
        let h: Vec<Complex64> = (0..m).map(|k| v[1 + 2 * k][(0, 0)]).collect();
        let ps: Vec<&DMatrix<Complex64>> = (0..m).map(|k| &v[2 + 2 * k]).collect();
        let mut sum_p = DMatrix::<Complex64>::zeros(m, m);
        let mut sum_hp = DMatrix::<Complex64>::zeros(m, m);
        for k in 0..m {
            sampled(&mut real[k], h[k].im.abs());
            // violation counts: a wrong sign or a zero eigenvalue
            if !(h[k].re * idx[k] as f64 > 0.0) {
                sign[k].max += 1.0;
            }
            if k + 1 < m && !(h[k].re < h[k + 1].re) {
                order.max += 1.0;
            }
            sampled(&mut herm[k], hermitian_defect(ps[k]));
            sampled(&mut idem[k], norm(&(ps[k] * ps[k] - ps[k])));
            sampled(
                &mut rank[k],
                (ps[k].trace() - Complex64::new(1.0, 0.0)).norm(),
            );
            for l in 0..m {
                if l != k {
                    sampled(&mut ortho[k][l], norm(&(ps[k] * ps[l])));
                }
            }
            sum_p += ps[k];
            sum_hp += ps[k] * h[k];
        }
        sampled(&mut partition, norm(&(sum_p - &id)));
        sampled(&mut recon, norm(&(sum_hp - a)));
        match numeric_eigendecomposition(a, ORACLE_TOL * (1.0 + norm(a))) {
            Ok(pairs) => {
                let mut worst: f64 = 0.0;
                for (k, (lam, proj)) in pairs.iter().enumerate() {
                    worst = worst.max((lam - h[k].re).abs()).max(norm(&(proj - ps[k])));
                }
                sampled(&mut oracle, worst);
            }
            Err(_) => oracle.max = f64::MAX,
        }
    }
    let fin = |s: Sampled| Sampled {
        max: s.max,
        tested,
        skipped,
    };
    let mut rows = Vec::new();
    for k in 0..m {
        let j = index_label(idx[k]);
        rows.push(CheckRow::new(
            "spectral.eigenvalue-real",
            j.clone(),
            None,
            fin(real[k]),
            tol,
        ));
        rows.push(CheckRow::new(
            "spectral.eigenvalue-sign",
            j.clone(),
            None,
            fin(sign[k]),
            0.0,
        ));
        rows.push(CheckRow::new(
            "spectral.projection-hermitian",
            j.clone(),
            None,
            fin(herm[k]),
            tol,
        ));
        rows.push(CheckRow::new(
            "spectral.projection-idempotent",
            j.clone(),
            None,
            fin(idem[k]),
            tol,
        ));
        rows.push(CheckRow::new(
            "spectral.projection-rank-one",
            j.clone(),
            None,
            fin(rank[k]),
            tol,
        ));
        for l in 0..m {
            if l != k {
                let pl = pair_label(idx[k], idx[l]);
                rows.push(CheckRow::new(
                    "spectral.projection-orthogonal",
                    pl,
                    None,
                    fin(ortho[k][l]),
                    tol,
                ));
            }
        }
    }
    rows.push(CheckRow::new(
        "spectral.eigenvalue-order",
        "",
        None,
        fin(order),
        0.0,
    ));
    rows.push(CheckRow::new(
        "spectral.partition-of-unity",
        "",
        None,
        fin(partition),
        tol,
    ));
    rows.push(CheckRow::new(
        "spectral.reconstruction",
        "",
        None,
        fin(recon),
        tol,
    ));
    rows.push(CheckRow::new(
        "spectral.eigen-oracle",
        "",
        None,
        fin(oracle),
        tol,
    ));
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::pauli;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn diagonal_eigendecomposition() {
        let m = DMatrix::from_row_slice(2, 2, &[c(-1.0), c(0.0), c(0.0), c(2.0)]);
        let pairs = numeric_eigendecomposition(&m, 1e-12).unwrap();
        assert!((pairs[0].0 + 1.0).abs() < 1e-14);
        assert!((pairs[1].0 - 2.0).abs() < 1e-14);
        let e11 = DMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(0.0)]);
        assert!((&pairs[0].1 - e11).norm() < 1e-14);
    }

    #[test]
    fn pauli_three_eigendecomposition() {
        let [_, _, s3] = pauli();
        let p = PhasePoint::new(vec![0.0; 3], vec![0.0, 0.0, 1.0]).unwrap();
        let m = s3.eval_at(&p).unwrap();
        let pairs = numeric_eigendecomposition(&m, 1e-12).unwrap();
        let lower = DMatrix::from_row_slice(2, 2, &[c(0.0), c(0.0), c(0.0), c(1.0)]);
        assert!((pairs[0].0 + 1.0).abs() < 1e-14);
        assert!((&pairs[0].1 - lower).norm() < 1e-14);
    }

    #[test]
    fn degenerate_spectrum_is_rejected() {
        let m = DMatrix::<Complex64>::identity(2, 2);
        assert!(matches!(
            numeric_eigendecomposition(&m, 1e-10),
            Err(Error::SimplicityViolation { .. })
        ));
        let skew = DMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(0.0), c(0.0)]);
        assert!(matches!(
            numeric_eigendecomposition(&skew, 1e-10),
            Err(Error::NotHermitian(_))
        ));
    }

    #[test]
    fn negation_mirrors_indices() {
        let h = Expr::xi(0);
        let sd = SpectralData::new(
            Degree::from_integer(1),
            vec![(
                -&h,
                MatrixFn::constant(&[&[c(1.0), c(0.0)], &[c(0.0), c(0.0)]]),
            )],
            vec![(
                h.clone(),
                MatrixFn::constant(&[&[c(0.0), c(0.0)], &[c(0.0), c(1.0)]]),
            )],
        )
        .unwrap();
        let n = sd.negated();
        assert_eq!(n.indices(), vec![-1, 1]);
        assert_eq!(n.get(1).unwrap().projection, sd.get(-1).unwrap().projection);
        assert_eq!(n.get(1).unwrap().eigenvalue, h);
    }
}
