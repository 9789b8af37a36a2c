//! Job descriptions read from JSON.

use serde::{Deserialize, Serialize};
use stablequartic::bitangents::Quartic;
use stablequartic::padic::TowerSpec;
use stablequartic::poly::{monomials, MultiPoly};
use stablequartic::ring::{parse_rational, rat};

pub const SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Bitangents, Aronhold set, valuation pattern and relabeling.
    Classify,
    /// Everything through the special fiber.
    Full,
    BitangentsOnly,
    CountAronhold,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Classify => "classify",
            Mode::Full => "full",
            Mode::BitangentsOnly => "bitangents-only",
            Mode::CountAronhold => "count-aronhold",
        }
    }
}

/// The tower above `Q_p`, as integer coefficient lists (ascending, monic).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tower {
    pub unram_degree: usize,
    pub unram_poly: Vec<i64>,
    /// Each coefficient is a vector of `τ`-coordinates.
    pub eis_poly: Vec<Vec<i64>>,
}

/// A rational coefficient, written as a JSON integer or as `"a/b"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coefficient {
    Int(i64),
    Text(String),
}

/// Reproduction hooks: indices refer to the bitangents in the order of the
/// report's bitangent list.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fixtures {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pinned_aronhold: Option<[usize; 7]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pinned_signs: Option<[i8; 3]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JobSpec {
    pub schema: u32,
    pub p: u64,
    pub tower: Tower,
    pub precision: i64,
    pub guard: i64,
    /// Fifteen coefficients on the quartic monomials in lexicographically
    /// decreasing order: `x1^4, x1^3 x2, x1^3 x3, x1^2 x2^2, …, x3^4`.
    pub quartic: Vec<Coefficient>,
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixtures: Option<Fixtures>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum JobError {
    #[error("unsupported schema version {0}")]
    Schema(u32),
    #[error("p = 2 is not supported")]
    EvenPrime,
    #[error("tower: {0}")]
    Tower(String),
    #[error("precision must be positive and exceed the guard (N = {0}, guard = {1})")]
    Precision(i64, i64),
    #[error("expected 15 quartic coefficients, got {0}")]
    CoefficientCount(usize),
    #[error("cannot parse coefficient {0:?}")]
    Coefficient(String),
    #[error("the quartic is zero")]
    ZeroQuartic,
    #[error("malformed JSON: {0}")]
    Json(String),
}

impl Coefficient {
    fn value(&self) -> Result<num_rational::BigRational, JobError> {
        match self {
            Coefficient::Int(n) => Ok(rat(*n)),
            Coefficient::Text(s) => parse_rational(s).ok_or_else(|| JobError::Coefficient(s.clone())),
        }
    }
}

impl JobSpec {
    pub fn from_json(s: &str) -> Result<Self, JobError> {
        serde_json::from_str(s).map_err(|e| JobError::Json(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("job serializes")
    }

    /// Builds a job from a quartic over `Q`, listing every monomial.
    pub fn new(p: u64, tower: Tower, precision: i64, guard: i64, f: &Quartic, mode: Mode) -> Self {
        let quartic = monomials(3, 4)
            .into_iter()
            .map(|e| {
                let c = f.coeff(&e);
                if c.is_integer() {
                    if let Ok(n) = i64::try_from(c.numer()) {
                        return Coefficient::Int(n);
                    }
                }
                Coefficient::Text(stablequartic::ring::format_rational(&c))
            })
            .collect();
        Self { schema: SCHEMA, p, tower, precision, guard, quartic, mode, fixtures: None }
    }

    pub fn validate(&self) -> Result<(), JobError> {
        if self.schema != SCHEMA {
            return Err(JobError::Schema(self.schema));
        }
        if self.p == 2 {
            return Err(JobError::EvenPrime);
        }
        if self.tower.unram_poly.len() != self.tower.unram_degree + 1 {
            return Err(JobError::Tower(format!(
                "unramified polynomial has {} coefficients for degree {}",
                self.tower.unram_poly.len(),
                self.tower.unram_degree
            )));
        }
        if self.tower.eis_poly.iter().any(|c| c.len() > self.tower.unram_degree) {
            return Err(JobError::Tower("Eisenstein coefficient longer than the unramified degree".into()));
        }
        if self.precision <= 0 || self.guard < 0 || self.guard >= self.precision {
            return Err(JobError::Precision(self.precision, self.guard));
        }
        if self.quartic.len() != 15 {
            return Err(JobError::CoefficientCount(self.quartic.len()));
        }
        let f = self.quartic_poly()?;
        if f.is_zero() {
            return Err(JobError::ZeroQuartic);
        }
        Ok(())
    }

    pub fn tower_spec(&self) -> TowerSpec {
        let d = self.tower.unram_degree;
        let eis_poly = self
            .tower
            .eis_poly
            .iter()
            .map(|c| {
                let mut c = c.clone();
                c.resize(d, 0);
                c
            })
            .collect();
        TowerSpec { p: self.p, unram_poly: self.tower.unram_poly.clone(), eis_poly }
    }

    pub fn quartic_poly(&self) -> Result<Quartic, JobError> {
        let mut f = MultiPoly::zero(3, rat(0));
        for (e, c) in monomials(3, 4).into_iter().zip(&self.quartic) {
            f.add_term(e, c.value()?);
        }
        Ok(f)
    }
}
