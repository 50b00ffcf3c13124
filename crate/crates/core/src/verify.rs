//! Invariant suites run by `sumprod verify`.
//!
//! Each suite checks a library property against a brute-force oracle or an
//! algebraic identity on seeded random (or exhaustive) instances. The
//! oracles here enumerate tuples and compositions literally and never call
//! the counting routines they check.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::families::{generate, FamilySpec};
use crate::fieldset::{parse_set, seeded_rng, FpSet, PrimeField};
use crate::fit::fit_power_law;
use crate::incidence::{vinh_check, Plane, PlaneSet, PointSet3};
use crate::inequality::{check_cs_step, Holds};
use crate::quadpoly::{QuadPoly2, QuadPoly3};
use crate::rational::rational;
use crate::setstats::{d4_exact, d4_search, energy2, energy3, energy4, rep_function, D4Strategy};

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub seed: u64,
    pub trials: usize,
    /// Perturbs one checked value so the run must fail. Test hook.
    pub inject_fault: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { seed: 0, trials: 200, inject_fault: false }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub cases: u64,
    pub failures: u64,
    pub first_failure: Option<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifySummary {
    pub seed: u64,
    pub trials: usize,
    pub suites: Vec<SuiteResult>,
    pub warnings: Vec<String>,
}

impl VerifySummary {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteResult::passed)
    }
}

struct Suite {
    name: &'static str,
    cases: u64,
    failures: u64,
    first_failure: Option<String>,
}

impl Suite {
    fn new(name: &'static str) -> Self {
        Suite { name, cases: 0, failures: 0, first_failure: None }
    }

    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(detail());
            }
        }
    }

    fn finish(self) -> SuiteResult {
        SuiteResult { name: self.name, cases: self.cases, failures: self.failures, first_failure: self.first_failure }
    }
}

fn field(p: u64) -> PrimeField {
    PrimeField::new(p).expect("suite moduli are prime")
}

fn random_set(rng: &mut ChaCha8Rng, f: PrimeField, min: usize, max: usize) -> FpSet {
    let max = max.min(f.p() as usize);
    let size = rng.gen_range(min..=max) as u64;
    FpSet::random(f, size, rng.gen()).expect("size within field")
}

fn random_quad2(rng: &mut ChaCha8Rng, f: PrimeField) -> QuadPoly2 {
    QuadPoly2::from_residues(f, std::array::from_fn(|_| rng.gen_range(0..f.p())))
}

fn random_nondegenerate(rng: &mut ChaCha8Rng, f: PrimeField) -> QuadPoly2 {
    loop {
        let poly = random_quad2(rng, f);
        if poly.is_quadratic() && !poly.classify_degenerate().is_degenerate() {
            return poly;
        }
    }
}

pub mod oracle {
    //! Literal enumerations.

    use std::collections::HashSet;

    use crate::fieldset::{FpSet, PrimeField};
    use crate::quadpoly::QuadPoly3;

    /// `#{(a₁..a_k, b₁..b_k) : a₁−b₁ = … = a_k−b_k}` by enumerating all
    /// `(|A||B|)^k` tuples.
    pub fn tuple_energy(a: &FpSet, b: &FpSet, k: u32) -> u128 {
        let f = a.field();
        let pairs: Vec<u64> = a.iter().flat_map(|x| b.iter().map(move |y| f.sub(x, y))).collect();
        let n = pairs.len();
        let total = n.pow(k);
        let mut count = 0u128;
        for mut idx in 0..total {
            let first = pairs[idx % n];
            let mut all = true;
            for _ in 0..k {
                all &= pairs[idx % n] == first;
                idx /= n;
            }
            count += all as u128;
        }
        count
    }

    /// `#{(a,b,c,a',b',c') : F(a,b,c) = F(a',b',c')}` by enumerating 6-tuples.
    pub fn tuple_energy3(f: &QuadPoly3, a: &FpSet, b: &FpSet, c: &FpSet) -> u128 {
        let triples: Vec<(u64, u64, u64)> =
            a.iter().flat_map(|x| b.iter().flat_map(move |y| c.iter().map(move |z| (x, y, z)))).collect();
        let mut count = 0u128;
        for &(x, y, z) in &triples {
            for &(x2, y2, z2) in &triples {
                count += (f.eval(x, y, z) == f.eval(x2, y2, z2)) as u128;
            }
        }
        count
    }

    /// Coefficient tuples `(a,b,c,d,e,g0)` of every `Q(αx+βy)` over F_p,
    /// expanded term by term for all univariate `Q` of degree ≤ 2.
    pub fn degenerate_compositions(field: PrimeField) -> HashSet<[u64; 6]> {
        let p = field.p();
        let f = &field;
        let mut out = HashSet::new();
        for q2 in 0..p {
            for q1 in 0..p {
                for q0 in 0..p {
                    for al in 0..p {
                        for be in 0..p {
                            // q2(αx+βy)² + q1(αx+βy) + q0
                            out.insert([
                                f.mul(q2, f.mul(al, al)),
                                f.mul(q2, f.mul(be, be)),
                                f.mul(f.add(q2, q2), f.mul(al, be)),
                                f.mul(q1, al),
                                f.mul(q1, be),
                                q0,
                            ]);
                        }
                    }
                }
            }
        }
        out
    }

    /// Dense polynomial in x, y, z with per-variable degree below 5.
    type Dense3 = [[[u64; 5]; 5]; 5];

    fn dense_mul(f: &PrimeField, l: &Dense3, r: &Dense3) -> Dense3 {
        let mut out = [[[0u64; 5]; 5]; 5];
        for (i1, l1) in l.iter().enumerate() {
            for (j1, l2) in l1.iter().enumerate() {
                for (k1, &lc) in l2.iter().enumerate() {
                    if lc == 0 {
                        continue;
                    }
                    for (i2, r1) in r.iter().enumerate() {
                        for (j2, r2) in r1.iter().enumerate() {
                            for (k2, &rc) in r2.iter().enumerate() {
                                if rc == 0 || i1 + i2 > 4 || j1 + j2 > 4 || k1 + k2 > 4 {
                                    continue;
                                }
                                let slot = &mut out[i1 + i2][j1 + j2][k1 + k2];
                                *slot = f.add(*slot, f.mul(lc, rc));
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Every quadratic `g(h(x)+k(y)+l(z))` over F_5 with `g, h, k, l` of
    /// degree ≤ 2, as coefficient tuples in [`QuadPoly3`] order.
    /// Compositions of total degree above 2 are discarded.
    pub fn form3_compositions_f5() -> HashSet<[u64; 10]> {
        let field = PrimeField::new(5).expect("prime");
        let f = &field;
        let mut out = HashSet::new();
        let unis: Vec<(u64, u64)> = (0..5).flat_map(|c2| (0..5).map(move |c1| (c2, c1))).collect();
        for &(h2, h1) in &unis {
            for &(k2, k1) in &unis {
                for &(l2, l1) in &unis {
                    let mut s: Dense3 = [[[0; 5]; 5]; 5];
                    s[2][0][0] = h2;
                    s[1][0][0] = h1;
                    s[0][2][0] = k2;
                    s[0][1][0] = k1;
                    s[0][0][2] = l2;
                    s[0][0][1] = l1;
                    let sq = dense_mul(f, &s, &s);
                    for g2 in 0..5 {
                        for g1 in 0..5 {
                            for g0 in 0..5 {
                                let mut poly: Dense3 = [[[0; 5]; 5]; 5];
                                for i in 0..5 {
                                    for j in 0..5 {
                                        for k in 0..5 {
                                            poly[i][j][k] = f.add(f.mul(g2, sq[i][j][k]), f.mul(g1, s[i][j][k]));
                                        }
                                    }
                                }
                                poly[0][0][0] = f.add(poly[0][0][0], g0);
                                let high =
                                    (0..5).any(|i| (0..5).any(|j| (0..5).any(|k| i + j + k > 2 && poly[i][j][k] != 0)));
                                if high {
                                    continue;
                                }
                                out.insert([
                                    poly[2][0][0],
                                    poly[0][2][0],
                                    poly[0][0][2],
                                    poly[1][1][0],
                                    poly[1][0][1],
                                    poly[0][1][1],
                                    poly[1][0][0],
                                    poly[0][1][0],
                                    poly[0][0][1],
                                    poly[0][0][0],
                                ]);
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

fn suite_field_arithmetic(opts: &VerifyOptions) -> SuiteResult {
    let mut s = Suite::new("fieldset.arithmetic");
    for p in [3u64, 7, 101, 1_000_003, 2_147_483_647, (1 << 61) - 1] {
        let f = field(p);
        let mut rng = seeded_rng(opts.seed, p);
        for _ in 0..opts.trials * 50 {
            let (x, y) = (rng.gen_range(0..p), rng.gen_range(0..p));
            let mut ok = f.sub(f.add(x, y), y) == x;
            if y != 0 {
                ok &= f.inv(y).is_some_and(|iy| f.mul(f.mul(x, y), iy) == x);
            }
            s.check(ok, || format!("p={p} x={x} y={y}"));
        }
    }
    s.finish()
}

fn suite_render_round_trip(opts: &VerifyOptions) -> SuiteResult {
    let mut s = Suite::new("fieldset.render_round_trip");
    let mut rng = seeded_rng(opts.seed, 1);
    for _ in 0..opts.trials {
        let f = field([7u64, 101, 1_000_003][rng.gen_range(0..3)]);
        let a = random_set(&mut rng, f, 0, 7);
        s.check(parse_set(f, &a.render()).as_ref() == Ok(&a), || a.render());
    }
    s.finish()
}

fn for_each_f5_poly(mut visit: impl FnMut(QuadPoly2, [u64; 6])) {
    let f5 = field(5);
    for idx in 0..5u64.pow(6) {
        let mut c = [0u64; 6];
        let mut r = idx;
        for slot in c.iter_mut() {
            *slot = r % 5;
            r /= 5;
        }
        visit(QuadPoly2::from_residues(f5, c), c);
    }
}

fn suite_degeneracy_oracle() -> SuiteResult {
    let mut s = Suite::new("quadpoly.degeneracy_oracle_f5");
    let oracle = oracle::degenerate_compositions(field(5));
    for_each_f5_poly(|poly, c| {
        let v = poly.classify_degenerate();
        s.check(v.is_degenerate() == oracle.contains(&c) && v.reproduces(&poly), || format!("{c:?}"));
    });
    s.finish()
}

fn suite_lift_consistency() -> SuiteResult {
    let mut s = Suite::new("quadpoly.lift_consistency_f5");
    for_each_f5_poly(|poly, c| {
        if !poly.is_quadratic() {
            return;
        }
        let lifted = poly.swap_normalize().lift_to_three();
        let form = lifted.classify_form3();
        s.check(form.is_of_form() == poly.classify_degenerate().is_degenerate() && form.reproduces(&lifted), || {
            format!("{c:?}")
        });
    });
    s.finish()
}

fn suite_form3_oracle(opts: &VerifyOptions) -> SuiteResult {
    let mut s = Suite::new("quadpoly.form3_oracle_f5");
    let reachable = oracle::form3_compositions_f5();
    let mut sorted: Vec<[u64; 10]> = reachable.iter().copied().collect();
    sorted.sort_unstable();
    let f5 = field(5);
    let mut rng = seeded_rng(opts.seed, 2);
    for i in 0..opts.trials * 5 {
        // half arbitrary, half drawn from the reachable set
        let coeffs: [u64; 10] = if i % 2 == 0 {
            std::array::from_fn(|_| rng.gen_range(0..5))
        } else {
            sorted[rng.gen_range(0..sorted.len())]
        };
        let poly = QuadPoly3::new(f5, coeffs.map(|v| v as i128));
        let v = poly.classify_form3();
        s.check(v.is_of_form() == reachable.contains(&coeffs) && v.reproduces(&poly), || format!("{coeffs:?}"));
    }
    s.finish()
}

fn suite_witnesses(opts: &VerifyOptions) -> SuiteResult {
    let mut s = Suite::new("quadpoly.witnesses");
    let mut rng = seeded_rng(opts.seed, 3);
    for _ in 0..opts.trials {
        let f = field([5u64, 7, 101, 1_000_003][rng.gen_range(0..4)]);
        let p = f.p();
        let (q2, q1, q0, al, be) =
            (rng.gen_range(0..p), rng.gen_range(0..p), rng.gen_range(0..p), rng.gen_range(0..p), rng.gen_range(0..p));
        let composed = QuadPoly2::from_residues(
            f,
            [
                f.mul(q2, f.mul(al, al)),
                f.mul(q2, f.mul(be, be)),
                f.mul(2, f.mul(q2, f.mul(al, be))),
                f.mul(q1, al),
                f.mul(q1, be),
                q0,
            ],
        );
        let v = composed.classify_degenerate();
        s.check(v.is_degenerate() && v.reproduces(&composed), || composed.descriptor());
        let m: [u64; 3] = std::array::from_fn(|_| rng.gen_range(0..p));
        let lam = rng.gen_range(0..p);
        let mu = rng.gen_range(0..p);
        let mut k = [0i128; 10];
        let idx = [
            [QuadPoly3::XX, QuadPoly3::XY, QuadPoly3::XZ],
            [QuadPoly3::XY, QuadPoly3::YY, QuadPoly3::YZ],
            [QuadPoly3::XZ, QuadPoly3::YZ, QuadPoly3::ZZ],
        ];
        for i in 0..3 {
            for j in 0..3 {
                k[idx[i][j]] += f.mul(lam, f.mul(m[i], m[j])) as i128;
            }
            k[QuadPoly3::X + i] = f.mul(mu, m[i]) as i128;
        }
        k[QuadPoly3::ONE] = q0 as i128;
        let poly3 = QuadPoly3::new(f, k);
        let v = poly3.classify_form3();
        s.check(v.is_of_form() && v.reproduces(&poly3), || poly3.to_string());
    }
    s.finish()
}

fn suite_swap_and_lift(opts: &VerifyOptions) -> SuiteResult {
    let mut s = Suite::new("quadpoly.swap_and_lift");
    let mut rng = seeded_rng(opts.seed, 4);
    for _ in 0..opts.trials {
        let f = field([5u64, 7, 101, 1_000_003][rng.gen_range(0..4)]);
        let poly = random_quad2(&mut rng, f);
        let swapped = poly.swap_normalize();
        s.check(swapped.classify_degenerate().is_degenerate() == poly.classify_degenerate().is_degenerate(), || {
            poly.descriptor()
        });
        let lifted = poly.lift_to_three();
        let (u, v, w) = (rng.gen_range(0..f.p()), rng.gen_range(0..f.p()), rng.gen_range(0..f.p()));
        s.check(lifted.eval(u, v, w) == poly.eval(f.add(u, v), w), || poly.descriptor());
    }
    s.finish()
}

fn suite_energy_oracles(opts: &VerifyOptions) -> SuiteResult {
    let mut s = Suite::new("setstats.energy_oracles");
    let f7 = field(7);
    let mut rng = seeded_rng(opts.seed, 5);
    for _ in 0..opts.trials {
        let a = random_set(&mut rng, f7, 1, 3);
        let b = random_set(&mut rng, f7, 1, 3);
        let c = random_set(&mut rng, f7, 1, 3);
        let mut e4 = energy4(&a, &b).expect("same field");
        if opts.inject_fault {
            e4 += 1;
        }
        s.check(energy2(&a, &b).ok() == Some(oracle::tuple_energy(&a, &b, 2)), || format!("E2 {a} {b}"));
        s.check(e4 == oracle::tuple_energy(&a, &b, 4), || format!("E4 {a} {b}"));
        let poly = QuadPoly3::new(f7, std::array::from_fn(|_| rng.gen_range(0..7)));
        let e3 = energy3(&poly, &a, &b, &c).expect("small").energy;
        s.check(e3 == oracle::tuple_energy3(&poly, &a, &b, &c), || format!("E3 {poly} {a} {b} {c}"));
    }
    s.finish()
}

fn suite_symmetry(opts: &VerifyOptions) -> SuiteResult {
    let mut s = Suite::new("setstats.symmetry");
    let mut rng = seeded_rng(opts.seed, 6);
    for _ in 0..opts.trials {
        let f = field([7u64, 101, 10007][rng.gen_range(0..3)]);
        let a = random_set(&mut rng, f, 1, 12);
        let b = random_set(&mut rng, f, 1, 12);
        s.check(energy4(&a, &b).ok() == energy4(&b, &a).ok(), || format!("{a} {b}"));
        let ab = rep_function(&a, &b).expect("same field");
        let ba = rep_function(&b, &a).expect("same field");
        s.check(ab.entries().iter().all(|&(x, r)| ba.get(f.neg(x)) == r), || format!("{a} {b}"));
    }
    s.finish()
}

fn suite_trivial_bounds(opts: &VerifyOptions) -> SuiteResult {
    let mut s = Suite::new("setstats.trivial_bounds");
    let f7 = field(7);
    let mut rng = seeded_rng(opts.seed, 7);
    for _ in 0..opts.trials {
        let a = random_set(&mut rng, f7, 2, 7);
        let b = random_set(&mut rng, f7, 1, 7);
        let (x, y) = (a.len() as u128, b.len() as u128);
        let e4 = energy4(&a, &b).expect("same field");
        let mut ok = e4 <= x.pow(4) * y && e4 <= x * y * x.min(y).pow(3);
        // |B| ≥ |A|^{3/2} ⇔ |B|² ≥ |A|³
        if y * y >= x.pow(3) {
            ok &= e4 <= x * y.pow(3);
        }
        s.check(ok, || format!("{a} {b}"));
    }
    s.finish()
}

fn suite_dyadic_sandwich(opts: &VerifyOptions) -> SuiteResult {
    let mut s = Suite::new("setstats.dyadic_sandwich");
    let mut rng = seeded_rng(opts.seed, 8);
    for _ in 0..opts.trials {
        let f = field([7u64, 101, 10007][rng.gen_range(0..3)]);
        let max = (f.p() as usize).min(40);
        let a = random_set(&mut rng, f, 1, max);
        let b = random_set(&mut rng, f, 1, max);
        let rep = rep_function(&a, &b).expect("same field");
        let e4 = rep.moment(4);
        let best = rep.dyadic_profile().best().expect("nonempty").mass;
        let levels = 64 - rep.max().leading_zeros() as u128;
        s.check(best <= e4 && e4 <= 16 * levels * best, || format!("{a} {b}"));
    }
    s.finish()
}

fn suite_d4(opts: &VerifyOptions) -> SuiteResult {
    let mut s = Suite::new("setstats.d4");
    let f13 = field(13);
    let universe = f13.full_set();
    let mut rng = seeded_rng(opts.seed, 9);
    for _ in 0..opts.trials.div_ceil(4) {
        let a = random_set(&mut rng, f13, 1, 6);
        let exact = d4_exact(&a, &universe).expect("small universe");
        s.check(exact.value >= rational(1, 1), || format!("{a}"));
        let search = d4_search(&a, &D4Strategy::all(rng.gen())).expect("nonempty");
        s.check(search.value <= exact.value, || format!("search above exact for {a}"));
    }
    s.finish()
}

fn suite_cs_step(opts: &VerifyOptions) -> SuiteResult {
    let mut s = Suite::new("inequality.cs_step");
    let mut rng = seeded_rng(opts.seed, 10);
    for _ in 0..opts.trials {
        let f = field([101u64, 1009][rng.gen_range(0..2)]);
        let a = random_set(&mut rng, f, 1, 12);
        let b = random_set(&mut rng, f, 1, 12);
        let poly = random_nondegenerate(&mut rng, f);
        let t = 1u64 << rng.gen_range(0..3);
        let r = check_cs_step(&poly, &a, &b, t).expect("within budget");
        s.check(r.holds == Holds::True, || format!("{} {a} {b} t={t}", poly.descriptor()));
    }
    s.finish()
}

fn suite_incidence(opts: &VerifyOptions) -> SuiteResult {
    let mut s = Suite::new("incidence.planes_and_vinh");
    for p in [3u64, 5, 7] {
        let f = field(p);
        let pts = PointSet3::full(f);
        for pl in PlaneSet::full(f).planes() {
            let on = pts.points().iter().filter(|q| pl.contains(&f, q)).count() as u64;
            s.check(on == p * p, || format!("p={p} plane {pl:?}"));
        }
    }
    let mut rng = seeded_rng(opts.seed, 11);
    for _ in 0..opts.trials {
        let f = field([5u64, 7, 11, 13][rng.gen_range(0..4)]);
        let (pts, planes) = random_configuration(&mut rng, f);
        let r = vinh_check(&pts, &planes).expect("same field");
        s.check(r.holds == Holds::True, || format!("p={} |P|={} |Π|={}", f.p(), pts.len(), planes.len()));
    }
    s.finish()
}

/// Random point and plane sets of random sizes.
pub fn random_configuration(rng: &mut ChaCha8Rng, f: PrimeField) -> (PointSet3, PlaneSet) {
    let p = f.p();
    let n_pts = rng.gen_range(1..=p * p * p) as usize;
    let n_planes = rng.gen_range(1..=p * p * p) as usize;
    let pts = PointSet3::new(f, (0..n_pts).map(|_| std::array::from_fn(|_| rng.gen_range(0..p)))).expect("in range");
    let planes = (0..n_planes)
        .filter_map(|_| {
            let normal: [u64; 3] = std::array::from_fn(|_| rng.gen_range(0..p));
            Plane::new(&f, normal, rng.gen_range(0..p)).ok()
        })
        .collect::<Vec<_>>();
    (pts, PlaneSet::new(f, planes))
}

fn suite_families(opts: &VerifyOptions) -> SuiteResult {
    let mut s = Suite::new("families.determinism");
    let mut rng = seeded_rng(opts.seed, 12);
    let f = field(10007);
    for _ in 0..opts.trials {
        let spec = match rng.gen_range(0..4) {
            0 => FamilySpec::Interval { start: rng.gen_range(0..10007) },
            1 => FamilySpec::Ap { start: rng.gen_range(0..10007), step: rng.gen_range(1..10007) },
            2 => FamilySpec::Random { seed: Some(rng.gen()) },
            _ => FamilySpec::Union(
                Box::new(FamilySpec::Interval { start: 0 }),
                Box::new(FamilySpec::Interval { start: 5000 }),
            ),
        };
        let size = rng.gen_range(0..200);
        let x = generate(&spec, f, size);
        let y = generate(&spec, f, size);
        s.check(x == y && x.as_ref().is_ok_and(|a| a.len() as u64 == size), || format!("{spec} n={size}"));
    }
    s.finish()
}

fn suite_fit(opts: &VerifyOptions) -> SuiteResult {
    let mut s = Suite::new("fit.exact_power_law");
    let mut rng = seeded_rng(opts.seed, 13);
    for _ in 0..opts.trials {
        let exponent: f64 = rng.gen_range(0.5..2.5);
        let scale: f64 = rng.gen_range(0.1..10.0);
        let n = rng.gen_range(3..10);
        let data: Vec<(f64, f64)> = (0..n).map(|i| 2f64.powi(i + 2)).map(|x| (x, scale * x.powf(exponent))).collect();
        let fit = fit_power_law(&data);
        s.check(fit.is_ok_and(|f| ((f.slope - exponent) / exponent).abs() < 1e-12), || format!("{exponent}"));
    }
    s.finish()
}

/// Runs every suite. With `trials == 0` nothing runs and a warning is recorded.
pub fn run_all(opts: &VerifyOptions) -> VerifySummary {
    let mut warnings = Vec::new();
    if opts.trials == 0 {
        warnings.push("trials=0: every suite passes vacuously".to_string());
        return VerifySummary { seed: opts.seed, trials: 0, suites: Vec::new(), warnings };
    }
    let suites = vec![
        suite_field_arithmetic(opts),
        suite_render_round_trip(opts),
        suite_degeneracy_oracle(),
        suite_lift_consistency(),
        suite_form3_oracle(opts),
        suite_witnesses(opts),
        suite_swap_and_lift(opts),
        suite_energy_oracles(opts),
        suite_symmetry(opts),
        suite_trivial_bounds(opts),
        suite_dyadic_sandwich(opts),
        suite_d4(opts),
        suite_cs_step(opts),
        suite_incidence(opts),
        suite_families(opts),
        suite_fit(opts),
    ];
    VerifySummary { seed: opts.seed, trials: opts.trials, suites, warnings }
}
