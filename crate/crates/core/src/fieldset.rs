//! Prime-field arithmetic and the canonical finite-set type every other
//! module consumes.
//!
//! Residues are plain `u64` values in `[0, p)`. The modulus is capped at
//! 2^61-1 so sums never overflow and products fit a 128-bit intermediate.

use std::collections::HashSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest accepted modulus (the Mersenne prime 2^61-1).
pub const MAX_MODULUS: u64 = (1 << 61) - 1;

/// Fields up to this size get dense indicator and counting arrays.
pub const DENSE_LIMIT: u64 = 1 << 20;

/// Name recorded in run manifests for the random-set generator.
pub const GENERATOR_NAME: &str = "chacha8 (rand_chacha 0.3, seed_from_u64) + splitmix64 seed mixing + Floyd sampling";

/// An odd prime modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct PrimeField {
    p: u64,
}

impl TryFrom<u64> for PrimeField {
    type Error = Error;

    fn try_from(p: u64) -> Result<Self> {
        PrimeField::new(p)
    }
}

impl From<PrimeField> for u64 {
    fn from(f: PrimeField) -> u64 {
        f.p
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

impl PrimeField {
    /// Accepts `p` iff it is an odd prime no larger than [`MAX_MODULUS`].
    pub fn new(p: u64) -> Result<Self> {
        if p == 2 {
            return Err(Error::EvenModulus(p));
        }
        if p > MAX_MODULUS {
            return Err(Error::ModulusTooLarge(p));
        }
        if !is_prime(p) {
            return Err(Error::CompositeModulus(p));
        }
        Ok(PrimeField { p })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    /// True when dense `p`-sized scratch arrays are affordable.
    #[inline]
    pub fn is_dense(&self) -> bool {
        self.p <= DENSE_LIMIT
    }

    #[inline]
    pub fn reduce(&self, x: u64) -> u64 {
        x % self.p
    }

    #[inline]
    pub fn reduce_signed(&self, x: i128) -> u64 {
        x.rem_euclid(self.p as i128) as u64
    }

    #[inline]
    pub fn add(&self, x: u64, y: u64) -> u64 {
        let s = x + y;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, x: u64, y: u64) -> u64 {
        if x >= y {
            x - y
        } else {
            x + self.p - y
        }
    }

    #[inline]
    pub fn neg(&self, x: u64) -> u64 {
        if x == 0 {
            0
        } else {
            self.p - x
        }
    }

    #[inline]
    pub fn mul(&self, x: u64, y: u64) -> u64 {
        ((x as u128 * y as u128) % self.p as u128) as u64
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, x: u64) -> Option<u64> {
        let x = x % self.p;
        if x == 0 {
            return None;
        }
        // extended Euclid on signed 128-bit values
        let (mut r0, mut r1) = (self.p as i128, x as i128);
        let (mut s0, mut s1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        debug_assert_eq!(r0, 1);
        Some(self.reduce_signed(s0))
    }

    /// Iterator over every residue of the field.
    pub fn residues(&self) -> impl Iterator<Item = u64> {
        0..self.p
    }

    /// The whole field as a set.
    pub fn full_set(&self) -> FpSet {
        FpSet { field: *self, elements: (0..self.p).collect() }
    }

    fn check_same(&self, other: &PrimeField) -> Result<()> {
        if self.p != other.p {
            return Err(Error::FieldMismatch { left: self.p, right: other.p });
        }
        Ok(())
    }
}

/// Convenience wrapper around [`PrimeField::new`].
pub fn make_field(p: u64) -> Result<PrimeField> {
    PrimeField::new(p)
}

/// Deterministic Miller-Rabin; the base set is exact for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &SMALL {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a stream seed from a base seed and a stream index.
pub fn mix_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ splitmix64(index))
}

/// The generator behind every seeded random choice in the crate.
pub fn seeded_rng(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix_seed(seed, index))
}

/// A finite subset of F_p, stored sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FpSet {
    field: PrimeField,
    elements: Vec<u64>,
}

impl FpSet {
    pub fn empty(field: PrimeField) -> Self {
        FpSet { field, elements: Vec::new() }
    }

    /// Builds a set from values that must already be residues.
    pub fn from_residues(field: PrimeField, values: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut elements = Vec::new();
        for v in values {
            if v >= field.p {
                return Err(Error::ElementOutOfRange { value: v, p: field.p });
            }
            elements.push(v);
        }
        Ok(Self::from_sorted_unchecked(field, elements))
    }

    /// Builds a set from arbitrary integers, reducing each modulo p.
    pub fn from_reduced(field: PrimeField, values: impl IntoIterator<Item = u64>) -> Self {
        let elements = values.into_iter().map(|v| field.reduce(v)).collect();
        Self::from_sorted_unchecked(field, elements)
    }

    /// Sorts and deduplicates; every value must already be `< p`.
    pub(crate) fn from_sorted_unchecked(field: PrimeField, mut elements: Vec<u64>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        debug_assert!(elements.last().is_none_or(|&x| x < field.p));
        FpSet { field, elements }
    }

    /// Builds a set from a dense 0/1 indicator of length p.
    pub(crate) fn from_indicator(field: PrimeField, hit: &[bool]) -> Self {
        let elements = hit.iter().enumerate().filter_map(|(i, &h)| h.then_some(i as u64)).collect();
        FpSet { field, elements }
    }

    /// `{start, start+1, ..., start+len-1}`.
    pub fn interval(field: PrimeField, start: u64, len: u64) -> Result<Self> {
        Self::progression(field, start, 1, len)
    }

    /// `{start + i*step : 0 <= i < len}`; a zero step is rejected.
    pub fn progression(field: PrimeField, start: u64, step: u64, len: u64) -> Result<Self> {
        if len > field.p {
            return Err(Error::SizeExceedsField { size: len, p: field.p });
        }
        let step = field.reduce(step);
        if step == 0 {
            return Err(Error::ProgressionCollision { size: len });
        }
        let mut x = field.reduce(start);
        let mut elements = Vec::with_capacity(len as usize);
        for _ in 0..len {
            elements.push(x);
            x = field.add(x, step);
        }
        Ok(Self::from_sorted_unchecked(field, elements))
    }

    /// `{gen^1, ..., gen^len}`; fails if the powers repeat before `len` terms.
    pub fn geometric(field: PrimeField, gen: u64, len: u64) -> Result<Self> {
        if len > field.p {
            return Err(Error::SizeExceedsField { size: len, p: field.p });
        }
        let gen = field.reduce(gen);
        if gen == 0 {
            return Err(Error::GeneratorNotUnit(gen));
        }
        let mut elements = Vec::with_capacity(len as usize);
        let mut x = gen;
        for i in 0..len {
            // the orbit of a unit is a cycle through 1, so a repeat shows up as 1
            if x == 1 && i + 1 < len {
                return Err(Error::ProgressionCollision { size: len });
            }
            elements.push(x);
            x = field.mul(x, gen);
        }
        Ok(Self::from_sorted_unchecked(field, elements))
    }

    /// `len` distinct residues drawn uniformly without replacement.
    pub fn random(field: PrimeField, len: u64, seed: u64) -> Result<Self> {
        Self::random_stream(field, len, seed, 0)
    }

    /// As [`FpSet::random`], on the stream identified by `(seed, index)`.
    pub fn random_stream(field: PrimeField, len: u64, seed: u64, index: u64) -> Result<Self> {
        if len > field.p {
            return Err(Error::SizeExceedsField { size: len, p: field.p });
        }
        let mut rng = seeded_rng(seed, index);
        Ok(Self::from_sorted_unchecked(field, floyd_sample(&mut rng, field.p, len)))
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    #[inline]
    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.elements.iter().copied()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn is_subset(&self, other: &FpSet) -> bool {
        self.field == other.field && self.iter().all(|x| other.contains(x))
    }

    /// Dense membership array, available when p <= 2^20.
    pub fn indicator(&self) -> Option<Vec<bool>> {
        if !self.field.is_dense() {
            return None;
        }
        let mut hit = vec![false; self.field.p as usize];
        for &x in &self.elements {
            hit[x as usize] = true;
        }
        Some(hit)
    }

    pub fn union(&self, other: &FpSet) -> Result<FpSet> {
        self.field.check_same(&other.field)?;
        let mut elements = self.elements.clone();
        elements.extend_from_slice(&other.elements);
        Ok(Self::from_sorted_unchecked(self.field, elements))
    }

    /// Canonical descriptor; `parse_set(render(S)) == S`.
    pub fn render(&self) -> String {
        let body: Vec<String> = self.elements.iter().map(u64::to_string).collect();
        format!("list:{}", body.join(","))
    }

    pub(crate) fn same_field(&self, other: &FpSet) -> Result<()> {
        self.field.check_same(&other.field)
    }
}

impl fmt::Display for FpSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

/// Floyd's algorithm: `len` distinct values from `[0, n)`, O(len) draws.
fn floyd_sample<R: Rng>(rng: &mut R, n: u64, len: u64) -> Vec<u64> {
    let mut chosen = HashSet::with_capacity(len as usize);
    let mut out = Vec::with_capacity(len as usize);
    for j in (n - len)..n {
        let t = rng.gen_range(0..=j);
        let pick = if chosen.contains(&t) { j } else { t };
        chosen.insert(pick);
        out.push(pick);
    }
    out
}

pub(crate) fn parse_u64(input: &str, token: &str) -> Result<u64> {
    token
        .trim()
        .parse::<u64>()
        .map_err(|_| Error::syntax(input, format!("`{}` is not a nonnegative decimal integer", token.trim())))
}

/// Parses a possibly negative decimal integer and reduces it modulo p.
pub(crate) fn parse_residue(field: PrimeField, input: &str, token: &str) -> Result<u64> {
    let v = token
        .trim()
        .parse::<i128>()
        .map_err(|_| Error::syntax(input, format!("`{}` is not a decimal integer", token.trim())))?;
    Ok(field.reduce_signed(v))
}

pub(crate) fn split_args<'a>(input: &str, body: &'a str, arity: usize) -> Result<Vec<&'a str>> {
    let args: Vec<&str> = body.split(',').collect();
    if args.len() != arity {
        return Err(Error::syntax(input, format!("expected {arity} comma-separated arguments, found {}", args.len())));
    }
    Ok(args)
}

/// Parses a set descriptor:
///
/// `list:v1,v2,...` | `interval:start,len` | `ap:start,step,len` |
/// `gp:gen,len` | `rand:len,seed`
///
/// `list` values must already be residues; every other integer is reduced
/// modulo p.
pub fn parse_set(field: PrimeField, spec: &str) -> Result<FpSet> {
    let (kind, body) = spec.split_once(':').ok_or_else(|| Error::syntax(spec, "missing `kind:` prefix"))?;
    match kind.trim() {
        "list" => {
            if body.trim().is_empty() {
                return Ok(FpSet::empty(field));
            }
            let values = body.split(',').map(|t| parse_u64(spec, t)).collect::<Result<Vec<_>>>()?;
            FpSet::from_residues(field, values)
        }
        "interval" => {
            let a = split_args(spec, body, 2)?;
            FpSet::interval(field, parse_residue(field, spec, a[0])?, parse_u64(spec, a[1])?)
        }
        "ap" => {
            let a = split_args(spec, body, 3)?;
            FpSet::progression(
                field,
                parse_residue(field, spec, a[0])?,
                parse_residue(field, spec, a[1])?,
                parse_u64(spec, a[2])?,
            )
        }
        "gp" => {
            let a = split_args(spec, body, 2)?;
            FpSet::geometric(field, parse_residue(field, spec, a[0])?, parse_u64(spec, a[1])?)
        }
        "rand" => {
            let a = split_args(spec, body, 2)?;
            FpSet::random(field, parse_u64(spec, a[0])?, parse_u64(spec, a[1])?)
        }
        other => Err(Error::syntax(spec, format!("unknown set kind `{other}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn field_construction() {
        assert_eq!(make_field(7).unwrap().p(), 7);
        assert_eq!(make_field(9), Err(Error::CompositeModulus(9)));
        assert_eq!(make_field(2), Err(Error::EvenModulus(2)));
        assert_eq!(make_field(1), Err(Error::CompositeModulus(1)));
        assert_eq!(make_field(0), Err(Error::CompositeModulus(0)));
        assert!(make_field(MAX_MODULUS).is_ok());
        assert!(make_field(2_147_483_647).is_ok());
        assert!(make_field(1_000_003).is_ok());
        assert!(matches!(make_field(u64::MAX), Err(Error::ModulusTooLarge(_))));
    }

    #[test]
    fn primality_matches_trial_division() {
        let naive = |n: u64| n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d));
        for n in 0..5000 {
            assert_eq!(is_prime(n), naive(n), "n={n}");
        }
        // strong pseudoprimes to several small bases
        for n in [3_215_031_751u64, 2_152_302_898_747, 3_474_749_660_383, 341_550_071_728_321] {
            assert!(!is_prime(n));
        }
    }

    #[test]
    fn inverse_and_pow() {
        let fld = f(101);
        for x in 1..101 {
            assert_eq!(fld.mul(x, fld.inv(x).unwrap()), 1);
        }
        assert_eq!(fld.inv(0), None);
        assert_eq!(fld.pow(3, 100), 1);
        assert_eq!(fld.neg(0), 0);
        assert_eq!(fld.add(fld.neg(5), 5), 0);
    }

    #[test]
    fn random_arithmetic_identities() {
        for p in [3u64, 7, 101, 1_000_003, 2_147_483_647, MAX_MODULUS] {
            let fld = f(p);
            let mut rng = seeded_rng(11, p);
            for _ in 0..10_000 {
                let x = rng.gen_range(0..p);
                let y = rng.gen_range(0..p);
                assert_eq!(fld.sub(fld.add(x, y), y), x);
                if y != 0 {
                    assert_eq!(fld.mul(fld.mul(x, y), fld.inv(y).unwrap()), x);
                }
                assert!(fld.add(x, y) < p && fld.mul(x, y) < p && fld.sub(x, y) < p);
            }
        }
    }

    #[test]
    fn descriptor_examples() {
        let f7 = f(7);
        assert_eq!(parse_set(f7, "list:3,1,1,2").unwrap().elements(), &[1, 2, 3]);
        assert_eq!(parse_set(f(101), "ap:1,3,5").unwrap().elements(), &[1, 4, 7, 10, 13]);
        assert_eq!(parse_set(f7, "list:9"), Err(Error::ElementOutOfRange { value: 9, p: 7 }));
        assert_eq!(parse_set(f7, "interval:5,4").unwrap().elements(), &[0, 1, 5, 6]);
        assert_eq!(parse_set(f7, "gp:2,3").unwrap().elements(), &[1, 2, 4]);
        assert!(parse_set(f7, "list:").unwrap().is_empty());
        assert_eq!(parse_set(f7, "interval:0,8"), Err(Error::SizeExceedsField { size: 8, p: 7 }));
        assert_eq!(parse_set(f7, "gp:2,4"), Err(Error::ProgressionCollision { size: 4 }));
        assert_eq!(parse_set(f7, "gp:7,1"), Err(Error::GeneratorNotUnit(0)));
        assert_eq!(parse_set(f7, "ap:1,-1,3").unwrap().elements(), &[0, 1, 6]);
    }

    #[test]
    fn malformed_descriptors() {
        let f7 = f(7);
        for bad in ["", "list", "foo:1", "interval:1", "ap:1,2", "list:1,,2", "list:-1", "rand:3", "gp:x,2"] {
            assert!(matches!(parse_set(f7, bad), Err(Error::SpecSyntax { .. })), "{bad}");
        }
    }

    #[test]
    fn random_sets_are_deterministic_and_exact() {
        let fld = f(10007);
        let a = parse_set(fld, "rand:32,5").unwrap();
        assert_eq!(a.len(), 32);
        assert_eq!(a, parse_set(fld, "rand:32,5").unwrap());
        assert_ne!(a, parse_set(fld, "rand:32,6").unwrap());
        assert_eq!(parse_set(f(7), "rand:7,1").unwrap().elements(), &[0, 1, 2, 3, 4, 5, 6]);
    }

    #[test]
    fn indicator_only_for_small_fields() {
        let s = parse_set(f(7), "list:1,5").unwrap();
        assert_eq!(s.indicator().unwrap(), vec![false, true, false, false, false, true, false]);
        assert!(parse_set(f(2_147_483_647), "list:1").unwrap().indicator().is_none());
    }
}
