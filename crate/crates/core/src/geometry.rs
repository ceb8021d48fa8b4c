//! Riemannian and Weitzenböck geometry of a framed chart, as exact
//! expressions in the chart coordinates.

use crate::error::{Error, Result};
use crate::expr::{Expr, Params, PhasePoint, Var};
use crate::symbol::{max_abs, MatrixFn, Sampled};

/// Row-major d×d matrix of expressions.
pub type Mat = Vec<Vec<Expr>>;
/// `t[a][b][c]`.
pub type Tensor3 = Vec<Vec<Vec<Expr>>>;

/// A global framing `e_j` on a chart with metric `g`.
#[derive(Clone, Debug)]
pub struct Framing {
    pub d: usize,
    /// `e[j][α]` is the α-th component of the j-th vector field.
    pub e: Mat,
    pub metric: Mat,
}

fn det(m: &Mat) -> Expr {
    match m.len() {
        1 => m[0][0].clone(),
        2 => &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0],
        3 => {
            let c = |i: usize, j: usize| {
                &m[(i + 1) % 3][(j + 1) % 3] * &m[(i + 2) % 3][(j + 2) % 3]
                    - &m[(i + 1) % 3][(j + 2) % 3] * &m[(i + 2) % 3][(j + 1) % 3]
            };
            Expr::sum((0..3).map(|j| &m[0][j] * c(0, j)))
        }
        n => panic!("determinant of a {n}x{n} matrix is not supported"),
    }
}

fn inverse(m: &Mat) -> Mat {
    let d = m.len();
    let di = det(m).recip();
    match d {
        1 => vec![vec![di]],
        2 => vec![
            vec![&m[1][1] * &di, -(&m[0][1] * &di)],
            vec![-(&m[1][0] * &di), &m[0][0] * &di],
        ],
        3 => {
            // cyclic cofactors give the adjugate directly
            let c = |i: usize, j: usize| {
                &m[(i + 1) % 3][(j + 1) % 3] * &m[(i + 2) % 3][(j + 2) % 3]
                    - &m[(i + 1) % 3][(j + 2) % 3] * &m[(i + 2) % 3][(j + 1) % 3]
            };
            (0..3)
                .map(|i| (0..3).map(|j| c(j, i) * &di).collect())
                .collect()
        }
        n => panic!("inverse of a {n}x{n} matrix is not supported"),
    }
}

/// Totally antisymmetric symbol with ε_{12…d} = +1.
pub fn levi_civita(idx: &[usize]) -> f64 {
    let mut sign = 1.0;
    for a in 0..idx.len() {
        for b in a + 1..idx.len() {
            if idx[a] == idx[b] {
                return 0.0;
            }
            if idx[a] > idx[b] {
                sign = -sign;
            }
        }
    }
    sign
}

fn x(a: usize) -> Var {
    Var::X(a as u8)
}

/// Everything derived from a framing.
#[derive(Clone, Debug)]
pub struct GeometryData {
    pub d: usize,
    pub metric: Mat,
    pub inverse_metric: Mat,
    pub density: Expr,
    /// `christoffel[α][β][γ]` = Γ^α_{βγ}.
    pub christoffel: Tensor3,
    /// `coframe[j][α]` = e^j_α.
    pub coframe: Mat,
    /// `weitzenbock[α][β][γ]` = Υ^α_{βγ}.
    pub weitzenbock: Tensor3,
    /// `contorsion[α][β][γ]` = K^α_{βγ}.
    pub contorsion: Tensor3,
    /// K*_{αβ}, only for d = 3.
    pub dual_contorsion: Option<Mat>,
    /// t_α, only for d = 2.
    pub torsion_covector: Option<Vec<Expr>>,
}

impl Framing {
    pub fn new(e: Mat, metric: Mat) -> Result<Self> {
        let d = metric.len();
        if d == 0 || e.len() != d || e.iter().chain(&metric).any(|r| r.len() != d) {
            return Err(Error::DimensionMismatch(
                "framing and metric must be d×d".into(),
            ));
        }
        Ok(Framing { d, e, metric })
    }

    pub fn flat_metric(d: usize) -> Mat {
        (0..d)
            .map(|a| (0..d).map(|b| Expr::real((a == b) as u8 as f64)).collect())
            .collect()
    }

    /// g_{αβ} e_j^α e_k^β − δ_jk as a d×d matrix.
    pub fn orthonormality_defect(&self) -> MatrixFn {
        let d = self.d;
        MatrixFn::from_fn(d, |j, k| {
            let s = Expr::sum(
                (0..d)
                    .flat_map(|a| (0..d).map(move |b| (a, b)))
                    .map(|(a, b)| &self.metric[a][b] * &self.e[j][a] * &self.e[k][b]),
            );
            s - Expr::real((j == k) as u8 as f64)
        })
    }

    /// det[e_j^α] as a 1×1 matrix.
    pub fn orientation(&self) -> Expr {
        det(&self.e)
    }

    /// Samples orthonormality and positive orientation; fails with a
    /// validation error otherwise.
    pub fn validate(&self, points: &[PhasePoint], tol: f64) -> Result<Sampled> {
        let s = max_abs(&[self.orthonormality_defect()], points, &Params::new())?;
        if s.max > tol {
            return Err(Error::Validation(format!(
                "framing is not orthonormal (defect {:e})",
                s.max
            )));
        }
        let o = MatrixFn::scalar(1, &self.orientation());
        for p in points {
            let v = o.eval_at(p)?[(0, 0)];
            if v.re <= 0.0 {
                return Err(Error::Validation(format!(
                    "framing is not positively oriented at x = {:?}",
                    p.x
                )));
            }
        }
        Ok(s)
    }
}

/// All connection data for a framing (which should already be validated).
pub fn geometry_from_framing(fr: &Framing) -> GeometryData {
    let d = fr.d;
    let g = &fr.metric;
    let gi = inverse(g);
    let density = det(g).sqrt();
    let dg: Vec<Mat> = (0..d)
        .map(|c| {
            (0..d)
                .map(|a| (0..d).map(|b| g[a][b].diff(x(c))).collect())
                .collect()
        })
        .collect();
    // Γ^α_{βγ} = ½ g^{αμ}(∂_β g_{μγ} + ∂_γ g_{μβ} − ∂_μ g_{βγ})
    let christoffel: Tensor3 = (0..d)
        .map(|a| {
            (0..d)
                .map(|b| {
                    (0..d)
                        .map(|c| {
                            Expr::sum((0..d).map(|mu| {
                                &gi[a][mu] * (&dg[b][mu][c] + &dg[c][mu][b] - &dg[mu][b][c]) * 0.5
                            }))
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let coframe: Mat = (0..d)
        .map(|j| {
            (0..d)
                .map(|a| Expr::sum((0..d).map(|b| &g[a][b] * &fr.e[j][b])))
                .collect()
        })
        .collect();
    // Υ^α_{βγ} = −e^j_γ ∂_β e_j^α
    let weitzenbock: Tensor3 = (0..d)
        .map(|a| {
            (0..d)
                .map(|b| {
                    (0..d)
                        .map(|c| -Expr::sum((0..d).map(|j| &coframe[j][c] * fr.e[j][a].diff(x(b)))))
                        .collect()
                })
                .collect()
        })
        .collect();
    let contorsion: Tensor3 = (0..d)
        .map(|a| {
            (0..d)
                .map(|b| {
                    (0..d)
                        .map(|c| &weitzenbock[a][b][c] - &christoffel[a][b][c])
                        .collect()
                })
                .collect()
        })
        .collect();
    let dual_contorsion = (d == 3).then(|| {
        // K*_{αβ} = ½ K^μ_α^ν E_{μνβ}, K^μ_α^ν = g^{νκ} K^μ_{ακ}
        (0..d)
            .map(|a| {
                (0..d)
                    .map(|b| {
                        let mut terms = Vec::new();
                        for mu in 0..d {
                            for nu in 0..d {
                                let eps = levi_civita(&[mu, nu, b]);
                                if eps == 0.0 {
                                    continue;
                                }
                                let up =
                                    Expr::sum((0..d).map(|k| &gi[nu][k] * &contorsion[mu][a][k]));
                                terms.push(up * &density * (0.5 * eps));
                            }
                        }
                        Expr::sum(terms)
                    })
                    .collect()
            })
            .collect()
    });
    let torsion_covector = (d == 2).then(|| {
        // t_α = ½ T_α^{βγ} E_{βγ}, T^α_{βγ} = Υ^α_{βγ} − Υ^α_{γβ}
        let torsion = |a: usize, b: usize, c: usize| &weitzenbock[a][b][c] - &weitzenbock[a][c][b];
        (0..d)
            .map(|a| {
                let mut terms = Vec::new();
                for b in 0..d {
                    for c in 0..d {
                        let eps = levi_civita(&[b, c]);
                        if eps == 0.0 {
                            continue;
                        }
                        // raise β, γ and lower the first index
                        let t = Expr::sum(
                            (0..d)
                                .flat_map(|mu| {
                                    (0..d).flat_map(move |nu| (0..d).map(move |ka| (mu, nu, ka)))
                                })
                                .map(|(mu, nu, ka)| {
                                    &g[a][mu] * &gi[b][nu] * &gi[c][ka] * torsion(mu, nu, ka)
                                }),
                        );
                        terms.push(t * &density * (0.5 * eps));
                    }
                }
                Expr::sum(terms)
            })
            .collect()
    });
    GeometryData {
        d,
        metric: g.clone(),
        inverse_metric: gi,
        density,
        christoffel,
        coframe,
        weitzenbock,
        contorsion,
        dual_contorsion,
        torsion_covector,
    }
}

impl GeometryData {
    /// Raises the first index of a (0,2) tensor: A^α_β = g^{αμ} A_{μβ}.
    pub fn raise_first(&self, a: &Mat) -> Mat {
        let d = self.d;
        (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| Expr::sum((0..d).map(|mu| &self.inverse_metric[i][mu] * &a[mu][j])))
                    .collect()
            })
            .collect()
    }

    /// g^{αβ} A_{αβ}.
    pub fn trace(&self, a: &Mat) -> Expr {
        let r = self.raise_first(a);
        Expr::sum((0..self.d).map(|i| r[i][i].clone()))
    }

    /// Lowered contorsion K_{αβγ} + K_{γβα}, which must vanish.
    pub fn contorsion_antisymmetry_defect(&self) -> Vec<MatrixFn> {
        let d = self.d;
        let low = |a: usize, b: usize, c: usize| {
            Expr::sum((0..d).map(|mu| &self.metric[a][mu] * &self.contorsion[mu][b][c]))
        };
        (0..d)
            .map(|b| MatrixFn::from_fn(d, |a, c| low(a, b, c) + low(c, b, a)))
            .collect()
    }

    /// ∂_γ g_{αβ} − Γ^μ_{γα} g_{μβ} − Γ^μ_{γβ} g_{αμ}, one matrix per γ.
    pub fn metric_compatibility_defect(&self) -> Vec<MatrixFn> {
        let d = self.d;
        let g = &self.metric;
        let gam = &self.christoffel;
        (0..d)
            .map(|c| {
                MatrixFn::from_fn(d, |a, b| {
                    g[a][b].diff(x(c))
                        - Expr::sum(
                            (0..d)
                                .map(|mu| &gam[mu][c][a] * &g[mu][b] + &gam[mu][c][b] * &g[a][mu]),
                        )
                })
            })
            .collect()
    }

    /// Γ^α_{βγ} − Γ^α_{γβ}, one matrix per α.
    pub fn christoffel_symmetry_defect(&self) -> Vec<MatrixFn> {
        let d = self.d;
        (0..d)
            .map(|a| {
                MatrixFn::from_fn(d, |b, c| {
                    &self.christoffel[a][b][c] - &self.christoffel[a][c][b]
                })
            })
            .collect()
    }

    /// t^α = g^{αβ} t_β (d = 2).
    pub fn torsion_vector(&self) -> Option<Vec<Expr>> {
        let t = self.torsion_covector.as_ref()?;
        Some(
            (0..self.d)
                .map(|a| Expr::sum((0..self.d).map(|b| &self.inverse_metric[a][b] * &t[b])))
                .collect(),
        )
    }

    /// ∂₁t₂ − ∂₂t₁ (d = 2).
    pub fn torsion_curl(&self) -> Option<Expr> {
        let t = self.torsion_covector.as_ref()?;
        Some(t[1].diff(x(0)) - t[0].diff(x(1)))
    }
}

/// Converts a d×d expression grid to a matrix function.
pub fn to_matrix(a: &Mat) -> MatrixFn {
    MatrixFn::from_fn(a.len(), |i, j| a[i][j].clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: &[f64]) -> PhasePoint {
        let mut xi = vec![0.0; x.len()];
        xi[0] = 1.0;
        PhasePoint::new(x.to_vec(), xi).unwrap()
    }

    #[test]
    fn constant_framing_is_flat() {
        let fr = Framing::new(Framing::flat_metric(2), Framing::flat_metric(2)).unwrap();
        let geo = geometry_from_framing(&fr);
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    assert!(geo.christoffel[a][b][c].is_zero());
                    assert!(geo.weitzenbock[a][b][c].is_zero());
                    assert!(geo.contorsion[a][b][c].is_zero());
                }
            }
        }
        assert!(geo.torsion_covector.unwrap().iter().all(Expr::is_zero));
    }

    #[test]
    fn inverse_three_by_three() {
        let m: Mat = (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| {
                        Expr::x(0).sin() * ((i + 2 * j) as f64)
                            + Expr::real((i == j) as u8 as f64 * 3.0)
                    })
                    .collect()
            })
            .collect();
        let inv = inverse(&m);
        let prod = MatrixFn::from_fn(3, |i, j| Expr::sum((0..3).map(|k| &m[i][k] * &inv[k][j])));
        let v = prod.eval_at(&pt(&[0.4, 0.0, 0.0])).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((v[(i, j)].re - expect).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn levi_civita_signs() {
        assert_eq!(levi_civita(&[0, 1, 2]), 1.0);
        assert_eq!(levi_civita(&[1, 0, 2]), -1.0);
        assert_eq!(levi_civita(&[2, 0, 1]), 1.0);
        assert_eq!(levi_civita(&[0, 0, 1]), 0.0);
        assert_eq!(levi_civita(&[1, 0]), -1.0);
    }
}
