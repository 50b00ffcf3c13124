//! Structured set families for growth experiments.
//!
//! Family descriptors mirror the set grammar with the length left out,
//! since the size is chosen per experiment row:
//! `interval:start` | `ap:start,step` | `gp:gen` | `rand:seed` | `rand` |
//! `union:F1|F2`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fieldset::{mix_seed, parse_u64, split_args, FpSet, PrimeField};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum FamilySpec {
    Interval {
        start: u64,
    },
    Ap {
        start: u64,
        step: u64,
    },
    Gp {
        gen: u64,
    },
    /// `seed: None` defers to the run seed.
    Random {
        seed: Option<u64>,
    },
    /// First `⌈n/2⌉` elements from the left family, `⌊n/2⌋` from the right.
    Union(Box<FamilySpec>, Box<FamilySpec>),
}

impl FamilySpec {
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if spec == "rand" {
            return Ok(FamilySpec::Random { seed: None });
        }
        let (kind, body) = spec.split_once(':').ok_or_else(|| Error::syntax(spec, "missing `kind:` prefix"))?;
        match kind {
            "interval" => Ok(FamilySpec::Interval { start: parse_u64(spec, body)? }),
            "ap" => {
                let a = split_args(spec, body, 2)?;
                Ok(FamilySpec::Ap { start: parse_u64(spec, a[0])?, step: parse_u64(spec, a[1])? })
            }
            "gp" => Ok(FamilySpec::Gp { gen: parse_u64(spec, body)? }),
            "rand" => Ok(FamilySpec::Random { seed: Some(parse_u64(spec, body)?) }),
            "union" => {
                let (l, r) = body
                    .split_once('|')
                    .ok_or_else(|| Error::syntax(spec, "union needs two families separated by `|`"))?;
                Ok(FamilySpec::Union(Box::new(Self::parse(l)?), Box::new(Self::parse(r)?)))
            }
            other => Err(Error::syntax(spec, format!("unknown family kind `{other}`"))),
        }
    }

    /// Fills unseeded random families with `seed`.
    pub fn with_default_seed(&self, seed: u64) -> Self {
        match self {
            FamilySpec::Random { seed: None } => FamilySpec::Random { seed: Some(seed) },
            FamilySpec::Union(l, r) => {
                FamilySpec::Union(Box::new(l.with_default_seed(seed)), Box::new(r.with_default_seed(seed)))
            }
            other => other.clone(),
        }
    }

    /// Derives independent random streams for task `index`.
    pub fn for_task(&self, index: u64) -> Self {
        match self {
            FamilySpec::Random { seed } => FamilySpec::Random { seed: Some(mix_seed(seed.unwrap_or(0), index)) },
            FamilySpec::Union(l, r) => FamilySpec::Union(Box::new(l.for_task(index)), Box::new(r.for_task(index))),
            other => other.clone(),
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Interval { start } => write!(f, "interval:{start}"),
            FamilySpec::Ap { start, step } => write!(f, "ap:{start},{step}"),
            FamilySpec::Gp { gen } => write!(f, "gp:{gen}"),
            FamilySpec::Random { seed: Some(s) } => write!(f, "rand:{s}"),
            FamilySpec::Random { seed: None } => write!(f, "rand"),
            FamilySpec::Union(l, r) => write!(f, "union:{l}|{r}"),
        }
    }
}

/// The member of `spec` with exactly `size` elements, or an error.
pub fn generate(spec: &FamilySpec, field: PrimeField, size: u64) -> Result<FpSet> {
    if size > field.p() {
        return Err(Error::SizeExceedsField { size, p: field.p() });
    }
    match spec {
        FamilySpec::Interval { start } => FpSet::interval(field, *start, size),
        FamilySpec::Ap { start, step } => FpSet::progression(field, *start, *step, size),
        FamilySpec::Gp { gen } => FpSet::geometric(field, *gen, size),
        FamilySpec::Random { seed } => FpSet::random(field, size, seed.unwrap_or(0)),
        FamilySpec::Union(l, r) => {
            let left = generate(l, field, size.div_ceil(2))?;
            let right = generate(r, field, size / 2)?;
            let joined = left.union(&right)?;
            if joined.len() as u64 != size {
                return Err(Error::UnionOverlap { size, got: joined.len() as u64 });
            }
            Ok(joined)
        }
    }
}
