//! Point-plane incidences in F_p³.
//!
//! The bound checked here is Vinh's spectral estimate for points and
//! hyperplanes in F_q^d,
//!
//! ```text
//! | I(P, Π) − |P||Π|/q | ≤ q^{(d−1)/2} · sqrt(|P||Π|),
//! ```
//!
//! specialised to d = 3, so the multiplier on the square root is `p`.
//! The sharper multiplier `sqrt(p)` (the planar point-line exponent) is
//! evaluated alongside it and recorded in the report context; it fails
//! on concentrated configurations such as one plane with all its points.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::fieldset::PrimeField;
use crate::inequality::{Holds, IneqReport, Quantity};
use crate::rational::rational;

/// Deduplicated points of F_p³, sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PointSet3 {
    #[serde(skip)]
    field: PrimeField,
    points: Vec<[u64; 3]>,
}

impl PointSet3 {
    pub fn new(field: PrimeField, points: impl IntoIterator<Item = [u64; 3]>) -> Result<Self> {
        let mut pts = Vec::new();
        for q in points {
            if let Some(&v) = q.iter().find(|&&v| v >= field.p()) {
                return Err(Error::ElementOutOfRange { value: v, p: field.p() });
            }
            pts.push(q);
        }
        pts.sort_unstable();
        pts.dedup();
        Ok(PointSet3 { field, points: pts })
    }

    /// All p³ points.
    pub fn full(field: PrimeField) -> Self {
        let p = field.p();
        let points = (0..p).flat_map(|x| (0..p).flat_map(move |y| (0..p).map(move |z| [x, y, z]))).collect();
        PointSet3 { field, points }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn points(&self) -> &[[u64; 3]] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// The plane `n·x = offset`, scaled so the first nonzero normal coordinate is 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Plane {
    normal: [u64; 3],
    offset: u64,
}

impl Plane {
    pub fn new(field: &PrimeField, normal: [u64; 3], offset: u64) -> Result<Self> {
        let normal = normal.map(|v| field.reduce(v));
        let offset = field.reduce(offset);
        let lead = *normal.iter().find(|&&v| v != 0).ok_or(Error::ZeroNormal)?;
        let s = field.inv(lead).expect("nonzero");
        Ok(Plane { normal: normal.map(|v| field.mul(v, s)), offset: field.mul(offset, s) })
    }

    pub fn normal(&self) -> [u64; 3] {
        self.normal
    }

    pub fn offset(&self) -> u64 {
        self.offset
    }

    pub fn contains(&self, field: &PrimeField, q: &[u64; 3]) -> bool {
        let n = &self.normal;
        let lhs = field.add(field.add(field.mul(n[0], q[0]), field.mul(n[1], q[1])), field.mul(n[2], q[2]));
        lhs == self.offset
    }
}

/// Deduplicated canonical planes of F_p³, sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlaneSet {
    #[serde(skip)]
    field: PrimeField,
    planes: Vec<Plane>,
}

impl PlaneSet {
    pub fn new(field: PrimeField, planes: impl IntoIterator<Item = Plane>) -> Self {
        let mut planes: Vec<Plane> = planes.into_iter().collect();
        planes.sort_unstable();
        planes.dedup();
        PlaneSet { field, planes }
    }

    /// All p(p²+p+1) affine planes.
    pub fn full(field: PrimeField) -> Self {
        let p = field.p();
        let mut normals = Vec::new();
        for y in 0..p {
            for z in 0..p {
                normals.push([1, y, z]);
            }
        }
        for z in 0..p {
            normals.push([0, 1, z]);
        }
        normals.push([0, 0, 1]);
        let planes: Vec<Plane> =
            normals.into_iter().flat_map(|normal| (0..p).map(move |offset| Plane { normal, offset })).collect();
        Self::new(field, planes)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn planes(&self) -> &[Plane] {
        &self.planes
    }

    pub fn len(&self) -> usize {
        self.planes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.planes.is_empty()
    }
}

/// `#{(q, π) : q ∈ π}` by direct enumeration.
pub fn incidences(points: &PointSet3, planes: &PlaneSet) -> Result<u64> {
    if points.field != planes.field {
        return Err(Error::FieldMismatch { left: points.field.p(), right: planes.field.p() });
    }
    let field = points.field;
    Ok(planes.planes.par_iter().map(|pl| points.points.iter().filter(|q| pl.contains(&field, q)).count() as u64).sum())
}

/// Exact test of `I ≤ N/p + sqrt(k2 · N)` with `N = |P||Π|`.
fn bound_holds(i: u64, n: u128, p: u64, k2: u128) -> bool {
    // p·I − N ≤ p·sqrt(k2·N)  ⇔  x ≤ 0 or x² ≤ p²·k2·N
    let x = p as i128 * i as i128 - n as i128;
    if x <= 0 {
        return true;
    }
    let x = x as u128;
    let rhs = (p as u128).checked_mul(p as u128).and_then(|v| v.checked_mul(k2)).and_then(|v| v.checked_mul(n));
    match (x.checked_mul(x), rhs) {
        (Some(l), Some(r)) => l <= r,
        _ => (x as f64) <= (p as f64) * ((k2 as f64) * (n as f64)).sqrt(),
    }
}

/// Counts incidences and compares them with Vinh's bound in F_p³.
pub fn vinh_check(points: &PointSet3, planes: &PlaneSet) -> Result<IneqReport> {
    let i = incidences(points, planes)?;
    let p = points.field.p();
    let n = points.len() as u128 * planes.len() as u128;
    let main = n as f64 / p as f64;
    let root = (n as f64).sqrt();
    let rhs = main + p as f64 * root;
    let rhs_sqrt_p = main + (p as f64).sqrt() * root;
    let holds = bound_holds(i, n, p, (p as u128) * (p as u128));
    let mut context = BTreeMap::new();
    context.insert("points".into(), json!(points.len()));
    context.insert("planes".into(), json!(planes.len()));
    context.insert("p".into(), json!(p));
    context.insert("expected_incidences".into(), json!(main));
    context.insert("error_multiplier".into(), json!("p"));
    context.insert("rhs_sqrt_p_form".into(), json!(rhs_sqrt_p));
    context.insert("holds_sqrt_p_form".into(), json!(bound_holds(i, n, p, p as u128)));
    Ok(IneqReport::new(
        "vinh",
        Quantity::Exact(rational(i as u128, 1)),
        Quantity::Real(rhs),
        if holds { Holds::True } else { Holds::False },
        context,
    ))
}
