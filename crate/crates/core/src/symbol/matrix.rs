use std::fmt;
use std::ops;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::expr::{Expr, Params, PhasePoint, Tape, Var};

/// An m×m matrix of expressions with no declared homogeneity.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MatrixFn {
    m: usize,
    entries: Vec<Expr>,
}

impl MatrixFn {
    /// Row-major entries.
    pub fn new(m: usize, entries: Vec<Expr>) -> Result<Self> {
        if m == 0 || entries.len() != m * m {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {m}x{m} matrix",
                entries.len()
            )));
        }
        Ok(MatrixFn { m, entries })
    }

    pub fn from_fn(m: usize, mut f: impl FnMut(usize, usize) -> Expr) -> Self {
        assert!(m > 0);
        let mut entries = Vec::with_capacity(m * m);
        for i in 0..m {
            for j in 0..m {
                entries.push(f(i, j));
            }
        }
        MatrixFn { m, entries }
    }

    pub fn zero(m: usize) -> Self {
        MatrixFn::from_fn(m, |_, _| Expr::zero())
    }

    pub fn identity(m: usize) -> Self {
        MatrixFn::from_fn(m, |i, j| if i == j { Expr::one() } else { Expr::zero() })
    }

    /// `e` times the identity.
    pub fn scalar(m: usize, e: &Expr) -> Self {
        MatrixFn::from_fn(m, |i, j| if i == j { e.clone() } else { Expr::zero() })
    }

    /// Constant matrix from complex rows.
    pub fn constant(rows: &[&[Complex64]]) -> Self {
        let m = rows.len();
        MatrixFn::from_fn(m, |i, j| Expr::constant(rows[i][j]))
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn get(&self, i: usize, j: usize) -> &Expr {
        &self.entries[i * self.m + j]
    }

    pub fn entries(&self) -> &[Expr] {
        &self.entries
    }

    pub fn map(&self, f: impl FnMut(&Expr) -> Expr) -> Self {
        MatrixFn {
            m: self.m,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn is_structurally_zero(&self) -> bool {
        self.entries.iter().all(Expr::is_zero)
    }

    /// Largest chart dimension referenced by any entry.
    pub fn max_dim(&self) -> usize {
        self.entries.iter().map(Expr::max_dim).max().unwrap_or(0)
    }

    pub fn check_dims(&self, other: &MatrixFn) -> Result<()> {
        if self.m != other.m {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} against {}x{}",
                self.m, self.m, other.m, other.m
            )));
        }
        Ok(())
    }

    pub fn scale(&self, e: &Expr) -> Self {
        self.map(|x| x * e)
    }

    pub fn scale_c(&self, c: Complex64) -> Self {
        self.map(|x| x.scale(c))
    }

    pub fn scale_re(&self, c: f64) -> Self {
        self.scale_c(Complex64::new(c, 0.0))
    }

    pub fn conj_transpose(&self) -> Self {
        MatrixFn::from_fn(self.m, |i, j| self.get(j, i).conj())
    }

    pub fn transpose(&self) -> Self {
        MatrixFn::from_fn(self.m, |i, j| self.get(j, i).clone())
    }

    pub fn trace(&self) -> Expr {
        Expr::sum((0..self.m).map(|i| self.get(i, i).clone()))
    }

    pub fn diff(&self, v: Var) -> Self {
        self.map(|e| e.diff(v))
    }

    pub fn diff_many(&self, vars: &[Var]) -> Self {
        self.map(|e| e.diff_many(vars))
    }

    /// Sum of many matrices, collected entrywise in one pass.
    pub fn sum_all<'a>(m: usize, items: impl IntoIterator<Item = &'a MatrixFn>) -> Self {
        let mut cols: Vec<Vec<Expr>> = vec![Vec::new(); m * m];
        for it in items {
            assert_eq!(it.m, m, "matrix dimension mismatch in sum");
            for (c, e) in cols.iter_mut().zip(&it.entries) {
                if !e.is_zero() {
                    c.push(e.clone());
                }
            }
        }
        MatrixFn {
            m,
            entries: cols.into_iter().map(Expr::sum).collect(),
        }
    }

    pub fn commutator(&self, other: &MatrixFn) -> Self {
        &(self * other) - &(other * self)
    }

    /// Numeric value at one point.
    pub fn eval(&self, p: &PhasePoint, params: &Params) -> Result<DMatrix<Complex64>> {
        let tape = Tape::compile(&self.entries);
        let v = tape.eval(p, params)?;
        Ok(DMatrix::from_row_slice(self.m, self.m, &v))
    }

    pub fn eval_at(&self, p: &PhasePoint) -> Result<DMatrix<Complex64>> {
        self.eval(p, &Params::new())
    }
}

impl fmt::Debug for MatrixFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.m {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.m {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

impl ops::Add for &MatrixFn {
    type Output = MatrixFn;
    fn add(self, rhs: &MatrixFn) -> MatrixFn {
        assert_eq!(self.m, rhs.m, "matrix dimension mismatch");
        MatrixFn {
            m: self.m,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| match (a.is_zero(), b.is_zero()) {
                    (_, true) => a.clone(),
                    (true, false) => b.clone(),
                    _ => a + b,
                })
                .collect(),
        }
    }
}

impl ops::Sub for &MatrixFn {
    type Output = MatrixFn;
    fn sub(self, rhs: &MatrixFn) -> MatrixFn {
        assert_eq!(self.m, rhs.m, "matrix dimension mismatch");
        MatrixFn {
            m: self.m,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl ops::Mul for &MatrixFn {
    type Output = MatrixFn;
    fn mul(self, rhs: &MatrixFn) -> MatrixFn {
        assert_eq!(self.m, rhs.m, "matrix dimension mismatch");
        let m = self.m;
        MatrixFn::from_fn(m, |i, j| {
            Expr::sum((0..m).filter_map(|k| {
                let a = self.get(i, k);
                let b = rhs.get(k, j);
                (!a.is_zero() && !b.is_zero()).then(|| a * b)
            }))
        })
    }
}

impl ops::Neg for &MatrixFn {
    type Output = MatrixFn;
    fn neg(self) -> MatrixFn {
        self.scale_re(-1.0)
    }
}

macro_rules! owned_ops {
    ($($tr:ident $method:ident),*) => {$(
        impl ops::$tr for MatrixFn {
            type Output = MatrixFn;
            fn $method(self, rhs: MatrixFn) -> MatrixFn { ops::$tr::$method(&self, &rhs) }
        }
        impl ops::$tr<&MatrixFn> for MatrixFn {
            type Output = MatrixFn;
            fn $method(self, rhs: &MatrixFn) -> MatrixFn { ops::$tr::$method(&self, rhs) }
        }
        impl ops::$tr<MatrixFn> for &MatrixFn {
            type Output = MatrixFn;
            fn $method(self, rhs: MatrixFn) -> MatrixFn { ops::$tr::$method(self, &rhs) }
        }
    )*};
}

owned_ops!(Add add, Sub sub, Mul mul);

impl ops::Neg for MatrixFn {
    type Output = MatrixFn;
    fn neg(self) -> MatrixFn {
        -&self
    }
}

/// The Pauli matrices s₁, s₂, s₃.
pub fn pauli() -> [MatrixFn; 3] {
    let o = Complex64::new(0.0, 0.0);
    let l = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    [
        MatrixFn::constant(&[&[o, l], &[l, o]]),
        MatrixFn::constant(&[&[o, -i], &[i, o]]),
        MatrixFn::constant(&[&[l, o], &[o, -l]]),
    ]
}
