use num_complex::Complex64;

use super::MatrixFn;
use crate::degree::Degree;
use crate::error::{Error, Result};
use crate::expr::{check_homogeneity, HomogeneityCheck};

/// One homogeneous term of a symbol.
#[derive(Clone, Debug, PartialEq)]
pub struct HomogeneousComponent {
    pub degree: Degree,
    pub matrix: MatrixFn,
}

impl HomogeneousComponent {
    /// Euler check of every entry; reports the worst entry.
    pub fn check_homogeneity(&self, samples: usize, seed: u64) -> HomogeneityCheck {
        let mut worst = HomogeneityCheck {
            pass: true,
            max_residual: 0.0,
            tested: samples,
            skipped: 0,
        };
        for e in self.matrix.entries() {
            if e.is_zero() {
                continue;
            }
            let c = check_homogeneity(e, self.degree, samples, seed);
            worst.pass &= c.pass;
            worst.max_residual = worst.max_residual.max(c.max_residual);
            worst.tested = worst.tested.min(c.tested);
            worst.skipped = worst.skipped.max(c.skipped);
        }
        worst
    }
}

/// A truncated classical symbol c₀ + c₁ + … with c_k homogeneous of degree
/// `top − k`.
///
/// `depth` is the last relative order that is trustworthy: `Some(K)` means
/// components past K are unknown, `None` means the stored list is exact and
/// everything beyond it vanishes. Stored components may stop short of the
/// depth; the missing ones are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolExpansion {
    m: usize,
    top: Degree,
    components: Vec<MatrixFn>,
    depth: Option<usize>,
}

pub(crate) fn min_depth(a: Option<usize>, b: Option<usize>) -> Option<usize> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl SymbolExpansion {
    pub fn new(top: Degree, components: Vec<MatrixFn>, depth: Option<usize>) -> Result<Self> {
        let m = components
            .first()
            .map(MatrixFn::m)
            .ok_or_else(|| Error::DimensionMismatch("expansion needs a component".into()))?;
        if let Some(c) = components.iter().find(|c| c.m() != m) {
            return Err(Error::DimensionMismatch(format!(
                "component of size {} in a {m}x{m} expansion",
                c.m()
            )));
        }
        let mut s = SymbolExpansion {
            m,
            top,
            components,
            depth,
        };
        s.trim();
        Ok(s)
    }

    /// Exact expansion: components past the list are zero.
    pub fn exact(top: Degree, components: Vec<MatrixFn>) -> Result<Self> {
        SymbolExpansion::new(top, components, None)
    }

    /// Trusted through relative order `depth`.
    pub fn truncated(top: Degree, components: Vec<MatrixFn>, depth: usize) -> Result<Self> {
        SymbolExpansion::new(top, components, Some(depth))
    }

    pub fn identity(m: usize) -> Self {
        SymbolExpansion {
            m,
            top: Degree::from_integer(0),
            components: vec![MatrixFn::identity(m)],
            depth: None,
        }
    }

    pub fn zero(m: usize, top: Degree, depth: Option<usize>) -> Self {
        SymbolExpansion {
            m,
            top,
            components: vec![MatrixFn::zero(m)],
            depth,
        }
    }

    /// Expansion whose only nonzero entry is `c` at relative order `k`.
    pub fn single(top: Degree, k: usize, c: MatrixFn, depth: Option<usize>) -> Self {
        let m = c.m();
        let mut components = vec![MatrixFn::zero(m); k];
        components.push(c);
        SymbolExpansion::new(top, components, depth).expect("consistent sizes")
    }

    fn trim(&mut self) {
        if let Some(d) = self.depth {
            self.components.truncate(d + 1);
        }
        while self.components.len() > 1 && self.components.last().unwrap().is_structurally_zero() {
            self.components.pop();
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn top_degree(&self) -> Degree {
        self.top
    }

    pub fn depth(&self) -> Option<usize> {
        self.depth
    }

    /// Number of stored components.
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn components(&self) -> &[MatrixFn] {
        &self.components
    }

    /// Highest relative order that can be extracted.
    pub fn last_order(&self) -> usize {
        self.depth.unwrap_or(self.components.len() - 1)
    }

    pub fn degree_of(&self, k: usize) -> Degree {
        self.top - Degree::from_integer(k as i64)
    }

    /// Component of degree `top − k`; zero when not stored but within depth.
    pub fn extract_component(&self, k: usize) -> Result<MatrixFn> {
        if let Some(d) = self.depth {
            if k > d {
                return Err(Error::TruncationExceeded {
                    requested: k,
                    depth: d,
                });
            }
        }
        Ok(self
            .components
            .get(k)
            .cloned()
            .unwrap_or_else(|| MatrixFn::zero(self.m)))
    }

    pub fn component(&self, k: usize) -> Result<HomogeneousComponent> {
        Ok(HomogeneousComponent {
            degree: self.degree_of(k),
            matrix: self.extract_component(k)?,
        })
    }

    pub fn principal(&self) -> &MatrixFn {
        &self.components[0]
    }

    /// Same symbol, trusted only through `k`.
    pub fn with_depth(&self, k: usize) -> Self {
        let mut s = self.clone();
        s.depth = min_depth(s.depth, Some(k));
        s.trim();
        s
    }

    /// Components `0..=k`, zero-filled; fails beyond the depth.
    pub fn components_through(&self, k: usize) -> Result<Vec<MatrixFn>> {
        (0..=k).map(|n| self.extract_component(n)).collect()
    }

    fn check_compatible(&self, other: &SymbolExpansion) -> Result<()> {
        if self.m != other.m {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} against {}x{} expansion",
                self.m, self.m, other.m, other.m
            )));
        }
        if self.top != other.top {
            return Err(Error::DegreeMismatch(format!(
                "top degrees {} and {}",
                self.top, other.top
            )));
        }
        Ok(())
    }

    fn zip_with(
        &self,
        other: &SymbolExpansion,
        f: impl Fn(&MatrixFn, &MatrixFn) -> MatrixFn,
    ) -> Result<Self> {
        self.check_compatible(other)?;
        let depth = min_depth(self.depth, other.depth);
        let n = self.components.len().max(other.components.len());
        let n = depth.map_or(n, |d| n.min(d + 1));
        let zero = MatrixFn::zero(self.m);
        let components = (0..n)
            .map(|k| {
                let a = self.components.get(k).unwrap_or(&zero);
                let b = other.components.get(k).unwrap_or(&zero);
                f(a, b)
            })
            .collect();
        SymbolExpansion::new(self.top, components, depth)
    }

    pub fn add(&self, other: &SymbolExpansion) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &SymbolExpansion) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        SymbolExpansion {
            m: self.m,
            top: self.top,
            components: self.components.iter().map(|a| a.scale_c(c)).collect(),
            depth: self.depth,
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(Complex64::new(-1.0, 0.0))
    }

    /// Sum of several expansions of equal size and top degree.
    pub fn sum_all(items: &[SymbolExpansion]) -> Result<Self> {
        let first = items
            .first()
            .ok_or_else(|| Error::DimensionMismatch("empty sum of expansions".into()))?;
        for it in &items[1..] {
            first.check_compatible(it)?;
        }
        let depth = items
            .iter()
            .fold(first.depth, |d, it| min_depth(d, it.depth));
        let n = items.iter().map(|it| it.components.len()).max().unwrap();
        let n = depth.map_or(n, |d| n.min(d + 1));
        let components = (0..n)
            .map(|k| MatrixFn::sum_all(first.m, items.iter().filter_map(|it| it.components.get(k))))
            .collect();
        SymbolExpansion::new(first.top, components, depth)
    }
}
