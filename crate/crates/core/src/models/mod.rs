//! Built-in operators with closed-form spectral data and known results.

mod dirac;
mod lame;
mod simple;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::degree::Degree;
use crate::error::{Error, Result};
use crate::expr::{Params, PhasePoint};
use crate::geometry::{Framing, GeometryData};
use crate::report::CheckRow;
use crate::sampling::Sampler;
use crate::spectral::{validate_spectral, SpectralData};
use crate::symbol::{MatrixFn, SymbolExpansion};

pub use dirac::{dirac_model, s3_framing, t3_framing};
pub use lame::{lame_model, rotating_framing_2d};
pub use simple::{
    random_first_order_model, random_hermitian_zero_order, random_tail, scalar_trivial_model,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelName {
    #[serde(rename = "dirac-s3")]
    DiracS3,
    #[serde(rename = "dirac-t3")]
    DiracT3,
    #[serde(rename = "lame-t2")]
    LameT2,
    #[serde(rename = "random2x2")]
    Random2x2,
    #[serde(rename = "scalar-trivial")]
    ScalarTrivial,
}

impl ModelName {
    pub const ALL: [ModelName; 5] = [
        ModelName::DiracS3,
        ModelName::DiracT3,
        ModelName::LameT2,
        ModelName::Random2x2,
        ModelName::ScalarTrivial,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ModelName::DiracS3 => "dirac-s3",
            ModelName::DiracT3 => "dirac-t3",
            ModelName::LameT2 => "lame-t2",
            ModelName::Random2x2 => "random2x2",
            ModelName::ScalarTrivial => "scalar-trivial",
        }
    }
}

impl fmt::Display for ModelName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ModelName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown model `{s}`")))
    }
}

/// Numeric model parameters. Each model reads the ones it needs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ModelParams {
    pub lambda: f64,
    pub mu: f64,
    /// Rotation rate of twisted framings; zero gives a constant framing.
    pub twist: f64,
    pub seed: u64,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams {
            lambda: 1.0,
            mu: 1.0,
            twist: 1.0,
            seed: 7,
        }
    }
}

/// What a reference value is compared against.
#[derive(Clone, Debug)]
pub enum Quantity {
    /// A_prin.
    Principal,
    /// A_sub.
    Subprincipal,
    /// (P_j)_sub from the constructed projections.
    ProjectionSub(i32),
    /// |A|_sub from the constructed modulus.
    ModulusSub,
    /// The double-sum formula for |A|_sub.
    ModulusSubClosedForm,
    /// A fixed matrix built with the model.
    Given(MatrixFn),
}

#[derive(Clone, Debug)]
pub enum Expected {
    /// Entrywise agreement with this matrix.
    Equals(MatrixFn),
    /// The 1×1 quantity has positive real part at every sample; the
    /// residual counts violations.
    Positive,
}

/// A known value the model must reproduce.
#[derive(Clone, Debug)]
pub struct Reference {
    pub check: String,
    pub index: String,
    pub quantity: Quantity,
    pub expected: Expected,
}

impl Reference {
    pub fn equals(check: &str, index: &str, quantity: Quantity, expected: MatrixFn) -> Self {
        Reference {
            check: check.into(),
            index: index.into(),
            quantity,
            expected: Expected::Equals(expected),
        }
    }

    pub fn vanishes(check: &str, index: &str, value: MatrixFn) -> Self {
        let m = value.m();
        Reference::equals(check, index, Quantity::Given(value), MatrixFn::zero(m))
    }

    /// Whether evaluating it needs the constructed projections.
    pub fn needs_projections(&self) -> bool {
        matches!(
            self.quantity,
            Quantity::ProjectionSub(_) | Quantity::ModulusSub
        )
    }
}

/// An operator A with its spectral data and reference values.
#[derive(Clone, Debug)]
pub struct ModelSpec {
    pub name: String,
    pub d: usize,
    pub m: usize,
    pub order: Degree,
    pub a: SymbolExpansion,
    pub spectral: SpectralData,
    pub params: ModelParams,
    pub chart: String,
    pub sample_box: Vec<(f64, f64)>,
    pub framing: Option<Framing>,
    pub geometry: Option<GeometryData>,
    pub references: Vec<Reference>,
}

impl ModelSpec {
    pub fn sampler(&self, seed: u64) -> Sampler {
        Sampler::new(self.sample_box.clone(), seed)
    }

    pub fn sample_points(&self, n: usize, seed: u64) -> Vec<PhasePoint> {
        self.sampler(seed).points(n)
    }

    /// Spectral data checked against the principal symbol.
    pub fn validate(&self, points: &[PhasePoint], tol: f64) -> Result<Vec<CheckRow>> {
        validate_spectral(
            &self.spectral,
            self.a.principal(),
            points,
            &Params::new(),
            tol,
        )
    }

    /// The same model for −A. Reference values are dropped.
    pub fn negated(&self) -> ModelSpec {
        ModelSpec {
            name: format!("-{}", self.name),
            a: self.a.neg(),
            spectral: self.spectral.negated(),
            references: Vec::new(),
            ..self.clone()
        }
    }
}

/// Builds a model by name. `depth` bounds the expansion of models whose
/// full symbol is not exact.
pub fn build_model(name: ModelName, params: &ModelParams, depth: usize) -> Result<ModelSpec> {
    match name {
        ModelName::DiracS3 => dirac_model(s3_framing()?, "dirac-s3", params),
        ModelName::DiracT3 => dirac_model(t3_framing(params.twist)?, "dirac-t3", params),
        ModelName::LameT2 => lame_model(&rotating_framing_2d(params.twist)?, params),
        ModelName::Random2x2 => random_first_order_model(params, depth),
        ModelName::ScalarTrivial => scalar_trivial_model(params),
    }
}

/// Framing and connection identities every framed model must satisfy.
pub(crate) fn geometry_references(fr: &Framing, geo: &GeometryData) -> Vec<Reference> {
    let mut refs = vec![Reference::vanishes(
        "geometry.orthonormal",
        "",
        fr.orthonormality_defect(),
    )];
    for (a, m) in geo.christoffel_symmetry_defect().into_iter().enumerate() {
        refs.push(Reference::vanishes(
            "geometry.christoffel-symmetric",
            &a.to_string(),
            m,
        ));
    }
    for (c, m) in geo.metric_compatibility_defect().into_iter().enumerate() {
        refs.push(Reference::vanishes(
            "geometry.metric-compatible",
            &c.to_string(),
            m,
        ));
    }
    for (b, m) in geo.contorsion_antisymmetry_defect().into_iter().enumerate() {
        refs.push(Reference::vanishes(
            "geometry.contorsion-antisymmetric",
            &b.to_string(),
            m,
        ));
    }
    refs.push(Reference {
        check: "geometry.orientation".into(),
        index: String::new(),
        quantity: Quantity::Given(MatrixFn::scalar(1, &fr.orientation())),
        expected: Expected::Positive,
    });
    refs
}
