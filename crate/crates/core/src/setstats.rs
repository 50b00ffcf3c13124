//! Exact set statistics: sumsets and images, the representation function
//! `r_{A−B}`, its moments (additive energies), dyadic level sets, the
//! normalized fourth energy `d₄⁺`, and three-variable polynomial energies.

use std::collections::HashMap;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fieldset::{seeded_rng, FpSet, PrimeField};
use crate::quadpoly::{QuadPoly2, QuadPoly3};
use crate::rational::{rational, serialize_rational, Rational};

/// Hard cap on polynomial evaluations for [`energy3`] and [`count_solutions`].
pub const ENERGY3_BUDGET: u128 = 1_000_000_000;

/// Largest universe [`d4_exact`] enumerates (2^20 subsets).
pub const D4_EXACT_MAX_UNIVERSE: usize = 20;

const PAR_SORT_THRESHOLD: usize = 1 << 16;

fn pairwise(a: &FpSet, b: &FpSet, op: impl Fn(u64, u64) -> u64 + Sync) -> Result<FpSet> {
    a.same_field(b)?;
    let field = a.field();
    if field.is_dense() {
        let mut hit = vec![false; field.p() as usize];
        for x in a.iter() {
            for y in b.iter() {
                hit[op(x, y) as usize] = true;
            }
        }
        Ok(FpSet::from_indicator(field, &hit))
    } else {
        let mut out: Vec<u64> = Vec::with_capacity(a.len() * b.len());
        for x in a.iter() {
            out.extend(b.iter().map(|y| op(x, y)));
        }
        if out.len() >= PAR_SORT_THRESHOLD {
            out.par_sort_unstable();
        }
        Ok(FpSet::from_sorted_unchecked(field, out))
    }
}

/// `A + B`.
pub fn sumset(a: &FpSet, b: &FpSet) -> Result<FpSet> {
    let f = a.field();
    pairwise(a, b, |x, y| f.add(x, y))
}

/// `A − B`.
pub fn difference_set(a: &FpSet, b: &FpSet) -> Result<FpSet> {
    let f = a.field();
    pairwise(a, b, |x, y| f.sub(x, y))
}

/// `A · B`.
pub fn product_set(a: &FpSet, b: &FpSet) -> Result<FpSet> {
    let f = a.field();
    pairwise(a, b, |x, y| f.mul(x, y))
}

/// `f(A, B) = {f(a, b) : a ∈ A, b ∈ B}`.
pub fn image2(f: &QuadPoly2, a: &FpSet, b: &FpSet) -> Result<FpSet> {
    if f.field() != a.field() {
        return Err(Error::FieldMismatch { left: f.field().p(), right: a.field().p() });
    }
    pairwise(a, b, |x, y| f.eval(x, y))
}

/// The representation function `r_{A−B}(x) = #{(a, b) : a − b = x}`,
/// stored as its nonzero entries sorted by residue.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RepProfile {
    #[serde(skip)]
    field: PrimeField,
    counts: Vec<(u64, u64)>,
    a_size: usize,
    b_size: usize,
}

impl RepProfile {
    pub fn get(&self, x: u64) -> u64 {
        self.counts.binary_search_by_key(&x, |&(k, _)| k).map_or(0, |i| self.counts[i].1)
    }

    /// Nonzero `(x, r(x))` pairs in increasing `x`.
    pub fn entries(&self) -> &[(u64, u64)] {
        &self.counts
    }

    pub fn source_sizes(&self) -> (usize, usize) {
        (self.a_size, self.b_size)
    }

    pub fn max(&self) -> u64 {
        self.counts.iter().map(|&(_, r)| r).max().unwrap_or(0)
    }

    /// `Σ_x r(x)^k`.
    pub fn moment(&self, k: u32) -> u128 {
        self.counts.iter().map(|&(_, r)| (r as u128).pow(k)).sum()
    }

    /// `{x : r(x) ≥ t}`.
    pub fn level_set(&self, t: u64) -> FpSet {
        let elems = self.counts.iter().filter(|&&(_, r)| r >= t).map(|&(x, _)| x).collect();
        FpSet::from_sorted_unchecked(self.field, elems)
    }

    pub fn support(&self) -> FpSet {
        self.level_set(1)
    }

    pub fn dyadic_profile(&self) -> DyadicProfile {
        let max = self.max();
        let mut rows = Vec::new();
        let mut t = 1u64;
        while t <= max {
            let size = self.counts.iter().filter(|&&(_, r)| r >= t).count() as u64;
            rows.push(DyadicRow { t, size, mass: size as u128 * (t as u128).pow(4) });
            t *= 2;
        }
        // strict comparison keeps the smallest t on ties
        let argmax = rows.iter().enumerate().fold(None::<usize>, |best, (i, row)| match best {
            Some(j) if rows[j].mass >= row.mass => Some(j),
            _ => Some(i),
        });
        DyadicProfile { rows, argmax }
    }
}

/// Computes `r_{A−B}` by direct pair counting.
pub fn rep_function(a: &FpSet, b: &FpSet) -> Result<RepProfile> {
    a.same_field(b)?;
    let field = a.field();
    let pairs = a.len() * b.len();
    let counts = if field.is_dense() && pairs as u64 >= field.p() / 16 {
        let mut dense = vec![0u64; field.p() as usize];
        for x in a.iter() {
            for y in b.iter() {
                dense[field.sub(x, y) as usize] += 1;
            }
        }
        dense.into_iter().enumerate().filter(|&(_, r)| r > 0).map(|(x, r)| (x as u64, r)).collect()
    } else {
        let mut diffs: Vec<u64> = Vec::with_capacity(pairs);
        for x in a.iter() {
            diffs.extend(b.iter().map(|y| field.sub(x, y)));
        }
        if diffs.len() >= PAR_SORT_THRESHOLD {
            diffs.par_sort_unstable();
        } else {
            diffs.sort_unstable();
        }
        run_lengths(&diffs)
    };
    Ok(RepProfile { field, counts, a_size: a.len(), b_size: b.len() })
}

fn run_lengths(sorted: &[u64]) -> Vec<(u64, u64)> {
    let mut out: Vec<(u64, u64)> = Vec::new();
    for &x in sorted {
        match out.last_mut() {
            Some((k, n)) if *k == x => *n += 1,
            _ => out.push((x, 1)),
        }
    }
    out
}

/// `E₂⁺(A, B) = Σ r_{A−B}(x)²`.
pub fn energy2(a: &FpSet, b: &FpSet) -> Result<u128> {
    Ok(rep_function(a, b)?.moment(2))
}

/// `E₄⁺(A, B) = Σ r_{A−B}(x)⁴`.
pub fn energy4(a: &FpSet, b: &FpSet) -> Result<u128> {
    Ok(rep_function(a, b)?.moment(4))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DyadicRow {
    pub t: u64,
    /// `|D_t|`
    pub size: u64,
    /// `|D_t| · t⁴`
    pub mass: u128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DyadicProfile {
    pub rows: Vec<DyadicRow>,
    /// Index of the row with the largest mass; `None` when `r ≡ 0`.
    pub argmax: Option<usize>,
}

impl DyadicProfile {
    pub fn best(&self) -> Option<DyadicRow> {
        self.argmax.map(|i| self.rows[i])
    }
}

pub fn dyadic_profile(a: &FpSet, b: &FpSet) -> Result<DyadicProfile> {
    Ok(rep_function(a, b)?.dyadic_profile())
}

/// `D_t = {x : r_{A−B}(x) ≥ t}` for `t ≥ 1`.
pub fn level_set(a: &FpSet, b: &FpSet, t: u64) -> Result<FpSet> {
    if t == 0 {
        return Err(Error::InvalidThreshold);
    }
    Ok(rep_function(a, b)?.level_set(t))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum D4Mode {
    Exact,
    HeuristicLowerBound,
}

/// A value of `E₄⁺(A, B) / (|A||B|³)` together with the `B` attaining it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct D4Result {
    #[serde(serialize_with = "serialize_rational")]
    pub value: Rational,
    pub value_approx: f64,
    pub maximizer: FpSet,
    pub mode: D4Mode,
}

/// The exact ratio `E₄⁺(A, B) / (|A||B|³)`.
pub fn d4_ratio(a: &FpSet, b: &FpSet) -> Result<Rational> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    let e4 = energy4(a, b)?;
    Ok(rational(e4, a.len() as u128 * (b.len() as u128).pow(3)))
}

/// Is the index sequence of `m1` lexicographically before that of `m2`?
fn mask_lex_less(m1: u32, m2: u32) -> bool {
    let diff = m1 ^ m2;
    if diff == 0 {
        return false;
    }
    let k = diff.trailing_zeros();
    let (holder_is_m1, other) = if m1 & (1 << k) != 0 { (true, m2) } else { (false, m1) };
    let other_continues = (other >> k) != 0;
    // the side holding bit k is smaller unless the other side ends first
    if other_continues {
        holder_is_m1
    } else {
        !holder_is_m1
    }
}

#[derive(Clone, Copy)]
struct Candidate {
    num: u128,
    den: u128,
    mask: u32,
}

impl Candidate {
    fn better_than(&self, other: &Candidate) -> bool {
        let lhs = self.num * other.den;
        let rhs = other.num * self.den;
        lhs > rhs || (lhs == rhs && mask_lex_less(self.mask, other.mask))
    }
}

/// Exact `max_B E₄⁺(A, B)/(|A||B|³)` over all nonempty `B ⊆ universe`;
/// ties go to the lexicographically smallest `B`.
pub fn d4_exact(a: &FpSet, universe: &FpSet) -> Result<D4Result> {
    a.same_field(universe)?;
    let n = universe.len();
    if n > D4_EXACT_MAX_UNIVERSE {
        return Err(Error::UniverseTooLarge(n));
    }
    if a.is_empty() || universe.is_empty() {
        return Err(Error::EmptySet);
    }
    let field = a.field();
    // compact indices for the differences a − u so counting uses a small array
    let mut diff_values: Vec<u64> = Vec::with_capacity(n * a.len());
    for u in universe.iter() {
        diff_values.extend(a.iter().map(|x| field.sub(x, u)));
    }
    let mut distinct = diff_values.clone();
    distinct.sort_unstable();
    distinct.dedup();
    let index: Vec<u32> = diff_values.iter().map(|v| distinct.binary_search(v).expect("present") as u32).collect();
    let a_len = a.len();
    let a_size = a_len as u128;

    let best = (1u32..(1u32 << n))
        .into_par_iter()
        .map_init(
            || (vec![0u32; distinct.len()], Vec::<u32>::new()),
            |(counts, touched), mask| {
                let mut bits = mask;
                while bits != 0 {
                    let i = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    for &slot in &index[i * a_len..(i + 1) * a_len] {
                        if counts[slot as usize] == 0 {
                            touched.push(slot);
                        }
                        counts[slot as usize] += 1;
                    }
                }
                let mut e4 = 0u128;
                for &slot in touched.iter() {
                    e4 += (counts[slot as usize] as u128).pow(4);
                    counts[slot as usize] = 0;
                }
                touched.clear();
                let b = mask.count_ones() as u128;
                Candidate { num: e4, den: a_size * b * b * b, mask }
            },
        )
        .reduce_with(|x, y| if y.better_than(&x) { y } else { x })
        .expect("at least one subset");

    let elems: Vec<u64> = (0..n).filter(|i| best.mask & (1 << i) != 0).map(|i| universe.elements()[i]).collect();
    let value = rational(best.num, best.den);
    Ok(D4Result {
        value_approx: crate::rational::to_f64(&value),
        value,
        maximizer: FpSet::from_sorted_unchecked(field, elems),
        mode: D4Mode::Exact,
    })
}

/// Candidate families tried by [`d4_search`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum D4Strategy {
    /// `B = A`
    SelfSet,
    /// `B = A + A`
    Sumset,
    /// `B = A − A`
    Difference,
    /// `B = D_t` of `r_{A−A}` for every dyadic `t`
    LevelSets,
    /// `B = {k·s : 0 ≤ k < L}` for the four most popular nonzero differences
    /// `s` of `A` and `L ∈ {|A|, ⌊|A|^{3/2}⌋}`
    Progressions,
    /// random subsets of `A ∪ (A + A)` with sizes up to `|A|^{3/2}`
    RandomSubsets { count: usize, seed: u64 },
}

impl D4Strategy {
    pub fn all(seed: u64) -> Vec<D4Strategy> {
        vec![
            D4Strategy::SelfSet,
            D4Strategy::Sumset,
            D4Strategy::Difference,
            D4Strategy::LevelSets,
            D4Strategy::Progressions,
            D4Strategy::RandomSubsets { count: 16, seed },
        ]
    }
}

fn search_candidates(a: &FpSet, strategy: D4Strategy) -> Result<Vec<FpSet>> {
    let field = a.field();
    let p = field.p();
    let three_halves = ((a.len() as f64).powf(1.5).floor() as u64).max(1);
    Ok(match strategy {
        D4Strategy::SelfSet => vec![a.clone()],
        D4Strategy::Sumset => vec![sumset(a, a)?],
        D4Strategy::Difference => vec![difference_set(a, a)?],
        D4Strategy::LevelSets => {
            let rep = rep_function(a, a)?;
            rep.dyadic_profile().rows.iter().map(|row| rep.level_set(row.t)).collect()
        }
        D4Strategy::Progressions => {
            let rep = rep_function(a, a)?;
            let mut popular: Vec<(u64, u64)> = rep.entries().iter().copied().filter(|&(x, _)| x != 0).collect();
            popular.sort_by(|l, r| r.1.cmp(&l.1).then(l.0.cmp(&r.0)));
            let mut out = Vec::new();
            for &(step, _) in popular.iter().take(4) {
                for len in [a.len() as u64, three_halves] {
                    out.push(FpSet::progression(field, 0, step, len.min(p))?);
                }
            }
            out
        }
        D4Strategy::RandomSubsets { count, seed } => {
            let pool = a.union(&sumset(a, a)?)?;
            let mut rng = seeded_rng(seed, a.len() as u64);
            let cap = (three_halves as usize).min(pool.len());
            (0..count)
                .map(|_| {
                    let size = rng.gen_range(1..=cap);
                    let picked = rand::seq::index::sample(&mut rng, pool.len(), size);
                    FpSet::from_sorted_unchecked(field, picked.into_iter().map(|i| pool.elements()[i]).collect())
                })
                .collect()
        }
    })
}

/// Lower bound for `d₄⁺(A)`: the best ratio over the candidate sets the
/// strategies produce. Ties go to the lexicographically smallest `B`.
pub fn d4_search(a: &FpSet, strategies: &[D4Strategy]) -> Result<D4Result> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut candidates = Vec::new();
    for &s in strategies {
        candidates.extend(search_candidates(a, s)?);
    }
    if candidates.is_empty() {
        candidates.push(a.clone());
    }
    let scored = candidates
        .par_iter()
        .filter(|b| !b.is_empty())
        .map(|b| d4_ratio(a, b).map(|r| (r, b)))
        .collect::<Result<Vec<_>>>()?;
    let (value, maximizer) = scored
        .into_iter()
        .reduce(|best, cand| {
            if cand.0 > best.0 || (cand.0 == best.0 && cand.1.elements() < best.1.elements()) {
                cand
            } else {
                best
            }
        })
        .expect("nonempty candidates");
    Ok(D4Result {
        value_approx: crate::rational::to_f64(&value),
        value,
        maximizer: maximizer.clone(),
        mode: D4Mode::HeuristicLowerBound,
    })
}

/// Value distribution of a three-variable polynomial on `A × B × C`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Energy3Result {
    /// `(t, N(t))` with `N(t) > 0`, increasing in `t`.
    pub histogram: Vec<(u64, u64)>,
    /// `Σ_t N(t)²`
    pub energy: u128,
    pub sizes: [usize; 3],
}

impl Energy3Result {
    pub fn count(&self, t: u64) -> u64 {
        self.histogram.binary_search_by_key(&t, |&(k, _)| k).map_or(0, |i| self.histogram[i].1)
    }

    pub fn total(&self) -> u64 {
        self.histogram.iter().map(|&(_, n)| n).sum()
    }
}

fn check_poly_field(f: &QuadPoly3, sets: [&FpSet; 3]) -> Result<()> {
    for s in sets {
        if s.field() != f.field() {
            return Err(Error::FieldMismatch { left: f.field().p(), right: s.field().p() });
        }
    }
    Ok(())
}

/// Histogram of `F(a, b, c)` over all triples, and `E = Σ N(t)²`.
pub fn energy3(f: &QuadPoly3, a: &FpSet, b: &FpSet, c: &FpSet) -> Result<Energy3Result> {
    check_poly_field(f, [a, b, c])?;
    let needed = a.len() as u128 * b.len() as u128 * c.len() as u128;
    if needed > ENERGY3_BUDGET {
        return Err(Error::BudgetExceeded { needed, budget: ENERGY3_BUDGET });
    }
    let field = f.field();
    let histogram = if needed <= 1 << 24 {
        let mut values: Vec<u64> = a
            .elements()
            .par_iter()
            .flat_map_iter(|&x| b.iter().flat_map(move |y| c.iter().map(move |z| f.eval(x, y, z))).collect::<Vec<_>>())
            .collect();
        values.par_sort_unstable();
        run_lengths(&values)
    } else if field.is_dense() {
        let p = field.p() as usize;
        let dense = a
            .elements()
            .par_iter()
            .fold(
                || vec![0u64; p],
                |mut acc, &x| {
                    for y in b.iter() {
                        for z in c.iter() {
                            acc[f.eval(x, y, z) as usize] += 1;
                        }
                    }
                    acc
                },
            )
            .reduce(
                || vec![0u64; p],
                |mut l, r| {
                    l.iter_mut().zip(r).for_each(|(x, y)| *x += y);
                    l
                },
            );
        dense.into_iter().enumerate().filter(|&(_, n)| n > 0).map(|(t, n)| (t as u64, n)).collect()
    } else {
        let map = a
            .elements()
            .par_iter()
            .fold(HashMap::<u64, u64>::new, |mut acc, &x| {
                for y in b.iter() {
                    for z in c.iter() {
                        *acc.entry(f.eval(x, y, z)).or_default() += 1;
                    }
                }
                acc
            })
            .reduce(HashMap::new, |mut l, r| {
                for (k, v) in r {
                    *l.entry(k).or_default() += v;
                }
                l
            });
        let mut hist: Vec<(u64, u64)> = map.into_iter().collect();
        hist.sort_unstable();
        hist
    };
    let energy = histogram.iter().map(|&(_, n)| (n as u128) * (n as u128)).sum();
    Ok(Energy3Result { histogram, energy, sizes: [a.len(), b.len(), c.len()] })
}

/// `#{(u, v, w, t) ∈ U×V×W×T : F(u, v, w) = t}`.
pub fn count_solutions(f: &QuadPoly3, u: &FpSet, v: &FpSet, w: &FpSet, targets: &FpSet) -> Result<u64> {
    Ok(solutions_from(&energy3(f, u, v, w)?, targets))
}

pub(crate) fn solutions_from(e3: &Energy3Result, targets: &FpSet) -> u64 {
    e3.histogram.iter().filter(|&&(t, _)| targets.contains(t)).map(|&(_, n)| n).sum()
}
