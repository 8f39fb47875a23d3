//! JSON session configuration (`"schema": "lieflag/1"`).
//!
//! Indices in the file are 1-based. Parsing and resolution are kept apart so
//! callers can tell a malformed file from a well-formed but invalid one.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finsler::{AlphaBetaMetric, Family};
use crate::lie_algebra::{catalog, CatalogSpec, FamilyTag, LieAlgebra, StructureEntry};
use crate::riemannian::Metric;

pub const SCHEMA: &str = "lieflag/1";

/// A structure constant as written in a config file (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigEntry {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub c: f64,
}

/// Family tag with 1-based basis indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ConfigTag {
    Heisenberg { n: usize },
    G1 { b: usize, ideal: Vec<usize> },
    G2 { e: usize, a: Vec<f64>, f: Vec<Vec<f64>> },
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub catalog: Option<CatalogSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constants: Option<Vec<ConfigEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis_names: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tag: Option<ConfigTag>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlagConfig {
    pub y: Vec<f64>,
    pub v: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    pub samples: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SessionConfig {
    pub schema: String,
    pub algebra: AlgebraConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub drift: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<Family>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<FlagConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scan: Option<ScanConfig>,
}

/// Failure to read a config: the text is not a `lieflag/1` document.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{0}")]
pub struct ParseError(pub String);

impl SessionConfig {
    pub fn from_json(text: &str) -> std::result::Result<Self, ParseError> {
        let cfg: SessionConfig = serde_json::from_str(text)
            .map_err(|e| ParseError(format!("line {}, column {}: {e}", e.line(), e.column())))?;
        if cfg.schema != SCHEMA {
            return Err(ParseError(format!(
                "schema: expected \"{SCHEMA}\", got \"{}\"",
                cfg.schema
            )));
        }
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Minimal config around a catalog entry.
    pub fn for_catalog(spec: CatalogSpec) -> Self {
        Self {
            schema: SCHEMA.into(),
            algebra: AlgebraConfig {
                catalog: Some(spec),
                ..Default::default()
            },
            metric: None,
            drift: None,
            family: None,
            flags: Vec::new(),
            scan: None,
        }
    }

    pub fn resolve(&self) -> Result<Session> {
        let algebra = self.algebra.resolve()?;
        let n = algebra.dim();
        let metric = match &self.metric {
            None => Metric::identity(n),
            Some(rows) => Metric::new(square_matrix("metric", rows, n)?)?,
        };
        let family = self.family.unwrap_or(Family::Riemannian);
        let drift = match &self.drift {
            None => DVector::zeros(n),
            Some(x) => vector("drift", x, n)?,
        };
        let flags = self
            .flags
            .iter()
            .enumerate()
            .map(|(idx, f)| {
                Ok((
                    vector(&format!("flags[{idx}].y"), &f.y, n)?,
                    vector(&format!("flags[{idx}].v"), &f.v, n)?,
                ))
            })
            .collect::<Result<_>>()?;
        Ok(Session {
            algebra,
            metric,
            family,
            drift,
            flags,
            scan: self.scan,
        })
    }
}

impl AlgebraConfig {
    pub fn resolve(&self) -> Result<LieAlgebra> {
        if let Some(spec) = &self.catalog {
            if self.dim.is_some() || self.constants.is_some() || self.tag.is_some() {
                return Err(Error::BadSpec(
                    "algebra: give either a catalog entry or inline constants, not both".into(),
                ));
            }
            let alg = catalog(spec)?;
            return match &self.basis_names {
                Some(names) => alg.with_basis_names(names.clone()),
                None => Ok(alg),
            };
        }
        let dim = self
            .dim
            .ok_or_else(|| Error::BadSpec("algebra.dim is required for inline constants".into()))?;
        let mut entries = Vec::new();
        for (idx, e) in self.constants.iter().flatten().enumerate() {
            let shift = |name: &str, v: usize| {
                if v == 0 || v > dim {
                    Err(Error::BadSpec(format!(
                        "algebra.constants[{idx}].{name} = {v} outside 1..={dim}"
                    )))
                } else {
                    Ok(v - 1)
                }
            };
            entries.push(StructureEntry::new(shift("i", e.i)?, shift("j", e.j)?, shift("k", e.k)?, e.c));
        }
        let tag = self.tag.as_ref().map(|t| t.to_internal(dim)).transpose()?;
        let alg = LieAlgebra::build(dim, &entries, None)?.with_tag(tag)?;
        match &self.basis_names {
            Some(names) => alg.with_basis_names(names.clone()),
            None => Ok(alg),
        }
    }
}

impl ConfigTag {
    fn to_internal(&self, dim: usize) -> Result<FamilyTag> {
        let shift = |v: usize| {
            if v == 0 || v > dim {
                Err(Error::BadSpec(format!("algebra.tag index {v} outside 1..={dim}")))
            } else {
                Ok(v - 1)
            }
        };
        Ok(match self {
            ConfigTag::Heisenberg { n } => FamilyTag::Heisenberg { n: *n },
            ConfigTag::G1 { b, ideal } => FamilyTag::G1 {
                b: shift(*b)?,
                ideal: ideal.iter().map(|&u| shift(u)).collect::<Result<_>>()?,
            },
            ConfigTag::G2 { e, a, f } => FamilyTag::G2 {
                e: shift(*e)?,
                a: a.clone(),
                f: f.clone(),
            },
        })
    }
}

fn vector(field: &str, x: &[f64], n: usize) -> Result<DVector<f64>> {
    if x.len() != n {
        return Err(Error::BadSpec(format!("{field}: expected {n} entries, got {}", x.len())));
    }
    if let Some(bad) = x.iter().find(|v| !v.is_finite()) {
        return Err(Error::BadSpec(format!("{field}: non-finite entry {bad}")));
    }
    Ok(DVector::from_column_slice(x))
}

fn square_matrix(field: &str, rows: &[Vec<f64>], n: usize) -> Result<DMatrix<f64>> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Error::BadSpec(format!("{field}: expected a {n}x{n} matrix")));
    }
    Ok(DMatrix::from_fn(n, n, |r, c| rows[r][c]))
}

/// Validated domain objects from a config.
#[derive(Debug, Clone)]
pub struct Session {
    pub algebra: LieAlgebra,
    pub metric: Metric,
    pub family: Family,
    pub drift: DVector<f64>,
    /// Raw `(y, v)` pairs; canonicalized by the consumer.
    pub flags: Vec<(DVector<f64>, DVector<f64>)>,
    pub scan: Option<ScanConfig>,
}

impl Session {
    /// The (alpha, beta)-metric; admissibility is not checked here.
    pub fn finsler(&self) -> Result<AlphaBetaMetric<'_>> {
        AlphaBetaMetric::new(self.family, &self.algebra, &self.metric, self.drift.clone())
    }
}
