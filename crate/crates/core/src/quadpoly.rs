//! Quadratic polynomials in two and three variables over F_p.
//!
//! A two-variable quadratic is *degenerate* when it factors through a
//! linear form, `f = Q(αx + βy)` with `Q` univariate. Over an odd prime
//! field this happens exactly when
//!
//! ```text
//! c² − 4ab = 0,   2ae − cd = 0,   2bd − ce = 0
//! ```
//!
//! for `f = ax² + by² + cxy + dx + ey + g0`: the quadratic part must be a
//! scalar times a square `λ(αx+βy)²` and the linear part a multiple of the
//! same form. The three-variable analogue decides whether `F` can be written
//! `g(h(x) + k(y) + l(z))`.

use std::fmt;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fieldset::{parse_residue, seeded_rng, split_args, PrimeField};

/// Witness checks evaluate on the full grid up to this modulus.
const FULL_GRID_LIMIT: u64 = 31;
const WITNESS_SAMPLES: usize = 1000;
const WITNESS_SEED: u64 = 0x5157_4e45_5353;

/// `f(x,y) = ax² + by² + cxy + dx + ey + g0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct QuadPoly2 {
    #[serde(skip)]
    field: PrimeField,
    a: u64,
    b: u64,
    c: u64,
    d: u64,
    e: u64,
    g0: u64,
}

impl QuadPoly2 {
    /// Coefficients in the order `a, b, c, d, e, g0`, reduced modulo p.
    pub fn new(field: PrimeField, coeffs: [i128; 6]) -> Self {
        let r = |v: i128| field.reduce_signed(v);
        QuadPoly2 {
            field,
            a: r(coeffs[0]),
            b: r(coeffs[1]),
            c: r(coeffs[2]),
            d: r(coeffs[3]),
            e: r(coeffs[4]),
            g0: r(coeffs[5]),
        }
    }

    pub fn from_residues(field: PrimeField, coeffs: [u64; 6]) -> Self {
        Self::new(field, coeffs.map(|v| v as i128))
    }

    /// Parses `quad2:a,b,c,d,e,g0`.
    pub fn parse(field: PrimeField, spec: &str) -> Result<Self> {
        let body =
            spec.trim().strip_prefix("quad2:").ok_or_else(|| Error::syntax(spec, "expected `quad2:a,b,c,d,e,g0`"))?;
        let args = split_args(spec, body, 6)?;
        let mut c = [0u64; 6];
        for (slot, tok) in c.iter_mut().zip(&args) {
            *slot = parse_residue(field, spec, tok)?;
        }
        Ok(Self::from_residues(field, c))
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn a(&self) -> u64 {
        self.a
    }
    pub fn b(&self) -> u64 {
        self.b
    }
    pub fn c(&self) -> u64 {
        self.c
    }
    pub fn d(&self) -> u64 {
        self.d
    }
    pub fn e(&self) -> u64 {
        self.e
    }
    pub fn g0(&self) -> u64 {
        self.g0
    }

    pub fn coefficients(&self) -> [u64; 6] {
        [self.a, self.b, self.c, self.d, self.e, self.g0]
    }

    /// True iff the degree-two part is nonzero.
    pub fn is_quadratic(&self) -> bool {
        (self.a, self.b, self.c) != (0, 0, 0)
    }

    pub fn descriptor(&self) -> String {
        let c = self.coefficients().map(|v| v.to_string());
        format!("quad2:{}", c.join(","))
    }

    pub fn eval(&self, x: u64, y: u64) -> u64 {
        let f = &self.field;
        let quad = f.add(f.add(f.mul(self.a, f.mul(x, x)), f.mul(self.b, f.mul(y, y))), f.mul(self.c, f.mul(x, y)));
        let lin = f.add(f.mul(self.d, x), f.mul(self.e, y));
        f.add(f.add(quad, lin), self.g0)
    }

    /// Swaps the variables when that makes the x² coefficient nonzero.
    pub fn swap_normalize(&self) -> Self {
        if self.a == 0 && self.b != 0 {
            QuadPoly2 { a: self.b, b: self.a, d: self.e, e: self.d, ..*self }
        } else {
            *self
        }
    }

    /// Expands `f(u+v, w)`.
    pub fn lift_to_three(&self) -> QuadPoly3 {
        let f = &self.field;
        let mut k = [0u64; 10];
        k[QuadPoly3::XX] = self.a;
        k[QuadPoly3::YY] = self.a;
        k[QuadPoly3::XY] = f.add(self.a, self.a);
        k[QuadPoly3::ZZ] = self.b;
        k[QuadPoly3::XZ] = self.c;
        k[QuadPoly3::YZ] = self.c;
        k[QuadPoly3::X] = self.d;
        k[QuadPoly3::Y] = self.d;
        k[QuadPoly3::Z] = self.e;
        k[QuadPoly3::ONE] = self.g0;
        QuadPoly3 { field: self.field, coeffs: k }
    }

    /// Decides whether `f = Q(αx + βy)` for a univariate `Q`.
    pub fn classify_degenerate(&self) -> DegeneracyVerdict {
        let fld = &self.field;
        let (a, b, c, d, e) = (self.a, self.b, self.c, self.d, self.e);
        let two = 2 % fld.p();
        let disc = fld.sub(fld.mul(c, c), fld.mul(4 % fld.p(), fld.mul(a, b)));
        let cond_x = fld.sub(fld.mul(two, fld.mul(a, e)), fld.mul(c, d));
        let cond_y = fld.sub(fld.mul(two, fld.mul(b, d)), fld.mul(c, e));
        if disc != 0 || cond_x != 0 || cond_y != 0 {
            return DegeneracyVerdict::NonDegenerate;
        }

        let (outer, form) = if !self.is_quadratic() {
            if (d, e) == (0, 0) {
                (UniQuad::new(0, 0, self.g0), LinearForm2 { alpha: 1, beta: 0 })
            } else {
                (UniQuad::new(0, 1, self.g0), LinearForm2 { alpha: d, beta: e })
            }
        } else if a != 0 {
            // a(x + βy)² + d(x + βy) + g0 with β = c / 2a
            let beta = fld.mul(c, fld.inv(fld.mul(two, a)).expect("a is a unit"));
            (UniQuad::new(a, d, self.g0), LinearForm2 { alpha: 1, beta })
        } else {
            // c² = 4ab forces c = 0, and 2bd = ce forces d = 0
            (UniQuad::new(b, e, self.g0), LinearForm2 { alpha: 0, beta: 1 })
        };
        let verdict = DegeneracyVerdict::Degenerate { outer, form };
        debug_assert!(verdict.reproduces(self));
        verdict
    }
}

impl fmt::Display for QuadPoly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = [(self.a, "x^2"), (self.b, "y^2"), (self.c, "xy"), (self.d, "x"), (self.e, "y"), (self.g0, "")];
        write_terms(f, &terms)
    }
}

fn write_terms(f: &mut fmt::Formatter<'_>, terms: &[(u64, &str)]) -> fmt::Result {
    let mut first = true;
    for &(coef, mono) in terms {
        if coef == 0 {
            continue;
        }
        if !first {
            write!(f, " + ")?;
        }
        first = false;
        match (coef, mono) {
            (_, "") => write!(f, "{coef}")?,
            (1, m) => write!(f, "{m}")?,
            (c, m) => write!(f, "{c}{m}")?,
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

/// A general quadratic in three variables; coefficient order is
/// `x², y², z², xy, xz, yz, x, y, z, 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct QuadPoly3 {
    #[serde(skip)]
    field: PrimeField,
    coeffs: [u64; 10],
}

impl QuadPoly3 {
    pub const XX: usize = 0;
    pub const YY: usize = 1;
    pub const ZZ: usize = 2;
    pub const XY: usize = 3;
    pub const XZ: usize = 4;
    pub const YZ: usize = 5;
    pub const X: usize = 6;
    pub const Y: usize = 7;
    pub const Z: usize = 8;
    pub const ONE: usize = 9;

    pub fn new(field: PrimeField, coeffs: [i128; 10]) -> Self {
        QuadPoly3 { field, coeffs: coeffs.map(|v| field.reduce_signed(v)) }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn coefficients(&self) -> [u64; 10] {
        self.coeffs
    }

    pub fn coefficient(&self, idx: usize) -> u64 {
        self.coeffs[idx]
    }

    pub fn eval(&self, x: u64, y: u64, z: u64) -> u64 {
        let f = &self.field;
        let k = &self.coeffs;
        let monos = [f.mul(x, x), f.mul(y, y), f.mul(z, z), f.mul(x, y), f.mul(x, z), f.mul(y, z), x, y, z];
        monos.iter().zip(k.iter()).fold(k[Self::ONE], |acc, (&m, &c)| f.add(acc, f.mul(c, m)))
    }

    /// True iff every variable occurs in some monomial with nonzero coefficient.
    pub fn depends_on_each_variable(&self) -> bool {
        let k = &self.coeffs;
        let uses = |idx: [usize; 4]| idx.iter().any(|&i| k[i] != 0);
        uses([Self::XX, Self::XY, Self::XZ, Self::X])
            && uses([Self::YY, Self::XY, Self::YZ, Self::Y])
            && uses([Self::ZZ, Self::XZ, Self::YZ, Self::Z])
    }

    /// Decides whether `F = g(h(x) + k(y) + l(z))` for univariate `g, h, k, l`.
    ///
    /// Without cross terms `F` splits as a sum of univariate pieces. With
    /// cross terms, `g` must be quadratic and `h, k, l` linear, so the
    /// quadratic part has to be `λM²` and the linear part a multiple of `M`.
    pub fn classify_form3(&self) -> Form3Verdict {
        let fld = &self.field;
        let k = &self.coeffs;
        let verdict = if k[Self::XY] == 0 && k[Self::XZ] == 0 && k[Self::YZ] == 0 {
            Form3Verdict::OfForm {
                outer: UniQuad::new(0, 1, k[Self::ONE]),
                inner: [
                    UniQuad::new(k[Self::XX], k[Self::X], 0),
                    UniQuad::new(k[Self::YY], k[Self::Y], 0),
                    UniQuad::new(k[Self::ZZ], k[Self::Z], 0),
                ],
            }
        } else {
            match self.rank_one_factor() {
                None => Form3Verdict::NotOfForm,
                Some((lambda, m, pivot)) => {
                    let mu = k[Self::X + pivot];
                    let linear = [k[Self::X], k[Self::Y], k[Self::Z]];
                    if (0..3).any(|i| linear[i] != fld.mul(mu, m[i])) {
                        Form3Verdict::NotOfForm
                    } else {
                        Form3Verdict::OfForm {
                            outer: UniQuad::new(lambda, mu, k[Self::ONE]),
                            inner: m.map(|mi| UniQuad::new(0, mi, 0)),
                        }
                    }
                }
            }
        };
        debug_assert!(verdict.reproduces(self));
        verdict
    }

    /// Writes the quadratic part as `λ(m·v)²` with `m[pivot] = 1`, if possible.
    fn rank_one_factor(&self) -> Option<(u64, [u64; 3], usize)> {
        let fld = &self.field;
        let k = &self.coeffs;
        let diag = [k[Self::XX], k[Self::YY], k[Self::ZZ]];
        let cross = |i: usize, j: usize| match (i.min(j), i.max(j)) {
            (0, 1) => k[Self::XY],
            (0, 2) => k[Self::XZ],
            (1, 2) => k[Self::YZ],
            _ => unreachable!(),
        };
        let pivot = (0..3).find(|&i| diag[i] != 0)?;
        let lambda = diag[pivot];
        let half_inv = fld.inv(fld.mul(2, lambda)).expect("λ is a unit");
        let mut m = [0u64; 3];
        for (j, mj) in m.iter_mut().enumerate() {
            *mj = if j == pivot { 1 } else { fld.mul(cross(pivot, j), half_inv) };
        }
        for i in 0..3 {
            if diag[i] != fld.mul(lambda, fld.mul(m[i], m[i])) {
                return None;
            }
            for j in (i + 1)..3 {
                if cross(i, j) != fld.mul(fld.mul(2, lambda), fld.mul(m[i], m[j])) {
                    return None;
                }
            }
        }
        Some((lambda, m, pivot))
    }
}

impl fmt::Display for QuadPoly3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const NAMES: [&str; 10] = ["x^2", "y^2", "z^2", "xy", "xz", "yz", "x", "y", "z", ""];
        let terms: Vec<(u64, &str)> = self.coeffs.iter().copied().zip(NAMES).collect();
        write_terms(f, &terms)
    }
}

/// Univariate `q2·t² + q1·t + q0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct UniQuad {
    pub q2: u64,
    pub q1: u64,
    pub q0: u64,
}

impl UniQuad {
    pub fn new(q2: u64, q1: u64, q0: u64) -> Self {
        UniQuad { q2, q1, q0 }
    }

    pub fn eval(&self, field: &PrimeField, t: u64) -> u64 {
        field.add(field.mul(field.add(field.mul(self.q2, t), self.q1), t), self.q0)
    }
}

/// `αx + βy`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct LinearForm2 {
    pub alpha: u64,
    pub beta: u64,
}

impl LinearForm2 {
    pub fn eval(&self, field: &PrimeField, x: u64, y: u64) -> u64 {
        field.add(field.mul(self.alpha, x), field.mul(self.beta, y))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "tag")]
pub enum DegeneracyVerdict {
    /// `f = outer(form(x, y))`.
    Degenerate {
        outer: UniQuad,
        form: LinearForm2,
    },
    NonDegenerate,
}

impl DegeneracyVerdict {
    pub fn is_degenerate(&self) -> bool {
        matches!(self, DegeneracyVerdict::Degenerate { .. })
    }

    /// Checks the witness against `f` on the full grid (p <= 31) or at
    /// 1000 seeded random points. `NonDegenerate` trivially passes.
    pub fn reproduces(&self, f: &QuadPoly2) -> bool {
        let DegeneracyVerdict::Degenerate { outer, form } = self else {
            return true;
        };
        let fld = f.field();
        let check = |x: u64, y: u64| outer.eval(&fld, form.eval(&fld, x, y)) == f.eval(x, y);
        let p = fld.p();
        if p <= FULL_GRID_LIMIT {
            (0..p).all(|x| (0..p).all(|y| check(x, y)))
        } else {
            let mut rng = seeded_rng(WITNESS_SEED, p);
            (0..WITNESS_SAMPLES).all(|_| check(rng.gen_range(0..p), rng.gen_range(0..p)))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "tag")]
pub enum Form3Verdict {
    /// `F = outer(inner[0](x) + inner[1](y) + inner[2](z))`; inner constants are zero.
    OfForm {
        outer: UniQuad,
        inner: [UniQuad; 3],
    },
    NotOfForm,
}

impl Form3Verdict {
    pub fn is_of_form(&self) -> bool {
        matches!(self, Form3Verdict::OfForm { .. })
    }

    /// Same evaluation policy as [`DegeneracyVerdict::reproduces`], on F_p³.
    pub fn reproduces(&self, poly: &QuadPoly3) -> bool {
        let Form3Verdict::OfForm { outer, inner } = self else {
            return true;
        };
        let fld = poly.field();
        let check = |x: u64, y: u64, z: u64| {
            let s = fld.add(fld.add(inner[0].eval(&fld, x), inner[1].eval(&fld, y)), inner[2].eval(&fld, z));
            outer.eval(&fld, s) == poly.eval(x, y, z)
        };
        let p = fld.p();
        if p <= FULL_GRID_LIMIT {
            (0..p).all(|x| (0..p).all(|y| (0..p).all(|z| check(x, y, z))))
        } else {
            let mut rng = seeded_rng(WITNESS_SEED, p);
            (0..WITNESS_SAMPLES).all(|_| check(rng.gen_range(0..p), rng.gen_range(0..p), rng.gen_range(0..p)))
        }
    }
}
