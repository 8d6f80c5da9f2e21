//! Rational point search on `y^2 = F(x, z)` up to a height bound.
//!
//! The fast path is a quadratic-residue sieve: for every sieve modulus `m`
//! and every residue of `b` a 64-bit word records which `a` (mod `m`) give a
//! square value of `F(a, b)` mod `m`. Candidates for a fixed `b` are scanned
//! 64 at a time by AND-ing those words; survivors get an exact square test.
//! Before sieving, the `a`-range of each `b` is cut down to the real
//! intervals where `F(x, 1)` can be nonnegative.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::form::{
    integer_sqrt_if_square, isqrt_i128_if_square, CurveStats, PrimitiveXCoord, RationalPoint,
    SexticForm,
};

/// Moduli applied to every word before the per-word early-exit loop.
const HEAD_MODULI: usize = 6;

/// Odd primes below 64.
pub const DEFAULT_SIEVE_PRIMES: [u32; 17] =
    [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Largest `H(P)` searched.
    pub height_bound: u64,
    pub sieve_primes: Vec<u32>,
    pub use_sieve: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            height_bound: (1 << 14) - 1,
            sieve_primes: DEFAULT_SIEVE_PRIMES.to_vec(),
            use_sieve: true,
        }
    }
}

impl SearchConfig {
    pub fn with_height_bound(height_bound: u64) -> Self {
        SearchConfig { height_bound, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.height_bound < 1 {
            return Err(Error::Config("height_bound must be at least 1".into()));
        }
        if self.height_bound > (1 << 40) {
            return Err(Error::Config("height_bound above 2^40 is not supported".into()));
        }
        let mut seen = Vec::new();
        for &p in &self.sieve_primes {
            if p < 3 || p % 2 == 0 || !is_prime(p as u64) {
                return Err(Error::Config(format!("sieve prime {p} is not an odd prime")));
            }
            if p > 1000 {
                return Err(Error::Config(format!("sieve prime {p} is too large")));
            }
            if seen.contains(&p) {
                return Err(Error::Config(format!("sieve prime {p} listed twice")));
            }
            seen.push(p);
        }
        Ok(())
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Finds every rational point of height at most `cfg.height_bound`.
pub fn search_points(form: &SexticForm, cfg: &SearchConfig) -> CurveStats {
    let mut counters = Counters::default();
    let pts = if cfg.use_sieve {
        let sieve = Sieve::new(form, cfg);
        sieve.run(1, cfg.height_bound as i64, &mut counters)
    } else {
        exhaustive_range(form, cfg.height_bound as i64, 1, cfg.height_bound as i64)
    };
    finish(form, cfg, pts)
}

/// Same as [`search_points`], with the `b`-range split into shards that are
/// searched on the current rayon pool and merged in order.
pub fn search_points_sharded(form: &SexticForm, cfg: &SearchConfig, shards: usize) -> CurveStats {
    let h = cfg.height_bound as i64;
    let shards = shards.max(1) as i64;
    // Work per b is roughly constant, so equal-length ranges balance well.
    let step = (h + shards - 1) / shards;
    let ranges: Vec<(i64, i64)> = (0..shards)
        .map(|s| (1 + s * step, ((s + 1) * step).min(h)))
        .filter(|(lo, hi)| lo <= hi)
        .collect();
    let sieve = cfg.use_sieve.then(|| Sieve::new(form, cfg));
    let parts: Vec<Vec<RationalPoint>> = ranges
        .par_iter()
        .map(|&(lo, hi)| match &sieve {
            Some(s) => s.run(lo, hi, &mut Counters::default()),
            None => exhaustive_range(form, h, lo, hi),
        })
        .collect();
    finish(form, cfg, parts.into_iter().flatten().collect())
}

/// Reference search: every coprime `(a, b)` with an exact square test.
pub fn naive_search(form: &SexticForm, height_bound: u64) -> CurveStats {
    let h = height_bound as i64;
    let mut pts = points_at_infinity(form);
    pts.extend(exhaustive_range(form, h, 1, h));
    CurveStats::from_points(*form, pts, height_bound)
}

fn finish(form: &SexticForm, cfg: &SearchConfig, mut pts: Vec<RationalPoint>) -> CurveStats {
    pts.extend(points_at_infinity(form));
    CurveStats::from_points(*form, pts, cfg.height_bound)
}

fn points_at_infinity(form: &SexticForm) -> Vec<RationalPoint> {
    push_pair(Vec::new(), PrimitiveXCoord::INFINITY, &BigInt::from(form.coeff(6)))
}

pub(crate) fn push_pair(mut out: Vec<RationalPoint>, x: PrimitiveXCoord, value: &BigInt) -> Vec<RationalPoint> {
    if let Some(r) = integer_sqrt_if_square(value) {
        let y = BigInt::from(r);
        if y.bits() == 0 {
            out.push(RationalPoint::new(x, y));
        } else {
            out.push(RationalPoint::new(x, -y.clone()));
            out.push(RationalPoint::new(x, y));
        }
    }
    out
}

fn exhaustive_range(form: &SexticForm, h: i64, b_lo: i64, b_hi: i64) -> Vec<RationalPoint> {
    let mut out = Vec::new();
    for b in b_lo..=b_hi {
        for a in -h..=h {
            if a.gcd(&b) != 1 {
                continue;
            }
            let v = form.evaluate_i64(a, b);
            out = push_pair(out, PrimitiveXCoord::new_unchecked(a, b), &v);
        }
    }
    out
}

#[derive(Clone, Copy, Debug, Default)]
struct Counters {
    words: u64,
    candidates: u64,
}

/// Per-modulus residue tables for one form.
struct ResidueTable {
    prime: u32,
    modulus: usize,
    /// `rows[rb * modulus + phase]`: bit `k` is set when `a = phase + k`
    /// (mod `modulus`) can give a square.
    rows: Vec<u64>,
    /// Number of allowed `a` residues for each `b` residue.
    density: Vec<u32>,
}

/// The sieve for one form and one height bound.
struct Sieve {
    form: SexticForm,
    height: i64,
    a_lo: i64,
    nwords: usize,
    /// `a_lo` is a multiple of 64, so the 2-adic word depends only on `b`.
    two_adic: [u64; 64],
    tables: Vec<ResidueTable>,
    /// `phases[t][i] = (a_lo + 64 i) mod m_t`.
    phases: Vec<Vec<u16>>,
    intervals: Vec<(f64, f64)>,
    fast_eval: bool,
}

fn squares_mod(m: usize) -> Vec<bool> {
    let mut sq = vec![false; m];
    for y in 0..m {
        sq[(y * y) % m] = true;
    }
    sq
}

/// `F(a, b) mod m` for all `a` in `0..m`, fixed `b`.
fn column_mod(form: &SexticForm, rb: u64, m: u64) -> Vec<u64> {
    let mut cb = [0u64; 7];
    let mut bpow = 1u64;
    for j in (0..7).rev() {
        cb[j] = (form.coeff(j).rem_euclid(m as i64) as u64) * bpow % m;
        bpow = bpow * rb % m;
    }
    (0..m)
        .map(|ra| {
            let mut acc = cb[6];
            for j in (0..6).rev() {
                acc = (acc * ra + cb[j]) % m;
            }
            acc
        })
        .collect()
}

impl ResidueTable {
    fn new(form: &SexticForm, prime: u32) -> Self {
        let p = prime as usize;
        let modulus = if p * p <= 64 { p * p } else { p };
        let m = modulus;
        let sq = squares_mod(m);
        let mut rows = vec![0u64; m * m];
        let mut density = vec![0u32; m];
        let mut allowed = vec![false; m];
        for rb in 0..m {
            let col = column_mod(form, rb as u64, m as u64);
            for ra in 0..m {
                allowed[ra] = sq[col[ra] as usize] && !(ra % p == 0 && rb % p == 0);
            }
            density[rb] = allowed.iter().filter(|&&x| x).count() as u32;
            let row = &mut rows[rb * m..(rb + 1) * m];
            if m <= 64 {
                let mut ext = 0u128;
                for i in 0..128 {
                    if allowed[i % m] {
                        ext |= 1 << i;
                    }
                }
                for (phase, w) in row.iter_mut().enumerate() {
                    *w = (ext >> phase) as u64;
                }
            } else {
                for (phase, w) in row.iter_mut().enumerate() {
                    let mut word = 0u64;
                    for k in 0..64 {
                        if allowed[(phase + k) % m] {
                            word |= 1 << k;
                        }
                    }
                    *w = word;
                }
            }
        }
        ResidueTable { prime, modulus, rows, density }
    }

    /// Fraction of residue pairs `(a, b)` mod `m` that survive.
    fn survival(&self) -> f64 {
        let total: u32 = self.density.iter().sum();
        total as f64 / (self.modulus * self.modulus) as f64
    }
}

fn two_adic_words(form: &SexticForm) -> [u64; 64] {
    let sq = squares_mod(64);
    let mut words = [0u64; 64];
    for (rb, w) in words.iter_mut().enumerate() {
        let col = column_mod(form, rb as u64, 64);
        for ra in 0..64 {
            if sq[col[ra] as usize] && !(ra % 2 == 0 && rb % 2 == 0) {
                *w |= 1 << ra;
            }
        }
    }
    words
}

impl Sieve {
    fn new(form: &SexticForm, cfg: &SearchConfig) -> Self {
        let height = cfg.height_bound as i64;
        let a_lo = -((height + 63) / 64) * 64;
        let nwords = ((height - a_lo) / 64 + 1) as usize;
        let tables: Vec<ResidueTable> =
            cfg.sieve_primes.iter().map(|&p| ResidueTable::new(form, p)).collect();
        let phases = tables
            .iter()
            .map(|t| {
                let m = t.modulus as i64;
                (0..nwords)
                    .map(|i| (a_lo + 64 * i as i64).rem_euclid(m) as u16)
                    .collect()
            })
            .collect();
        Sieve {
            form: *form,
            height,
            a_lo,
            nwords,
            two_adic: two_adic_words(form),
            tables,
            phases,
            intervals: nonnegative_intervals(form),
            fast_eval: form.fits_i128(cfg.height_bound),
        }
    }

    /// Word ranges (inclusive) covering the `a` that can give `F(a, b) >= 0`.
    fn word_ranges(&self, b: i64, out: &mut Vec<(usize, usize)>) {
        out.clear();
        let h = self.height;
        let bf = b as f64;
        for &(lo, hi) in &self.intervals {
            let a_min = if lo == f64::NEG_INFINITY {
                -h
            } else {
                ((bf * lo).floor() as i64 - 1).max(-h)
            };
            let a_max = if hi == f64::INFINITY {
                h
            } else {
                ((bf * hi).ceil() as i64 + 1).min(h)
            };
            if a_min > a_max {
                continue;
            }
            let w0 = ((a_min - self.a_lo) / 64) as usize;
            let w1 = (((a_max - self.a_lo) / 64) as usize).min(self.nwords - 1);
            match out.last_mut() {
                Some(last) if last.1 + 1 >= w0 => last.1 = last.1.max(w1),
                _ => out.push((w0, w1)),
            }
        }
    }

    fn run(&self, b_lo: i64, b_hi: i64, counters: &mut Counters) -> Vec<RationalPoint> {
        let mut out = Vec::new();
        let mut ranges = Vec::new();
        let mut active: Vec<(u32, &[u64], &[u16])> = Vec::with_capacity(self.tables.len());
        let mut buf = vec![0u64; self.nwords];
        'b: for b in b_lo..=b_hi {
            let w2 = self.two_adic[(b & 63) as usize];
            if w2 == 0 {
                continue;
            }
            active.clear();
            for (t, ph) in self.tables.iter().zip(&self.phases) {
                let rb = (b as usize) % t.modulus;
                let d = t.density[rb];
                if d == 0 {
                    continue 'b;
                }
                let row = &t.rows[rb * t.modulus..(rb + 1) * t.modulus];
                active.push((d * 4096 / t.modulus as u32, row, ph.as_slice()));
            }
            active.sort_unstable_by_key(|e| e.0);
            self.word_ranges(b, &mut ranges);
            if ranges.is_empty() {
                continue;
            }
            let cb = self.scaled_coeffs(b);
            // The densest-filtering moduli are applied to the whole range in
            // branch-free passes; the rest only to words still alive.
            let (head, tail) = active.split_at(HEAD_MODULI.min(active.len()));
            for &(w0, w1) in &ranges {
                counters.words += (w1 - w0 + 1) as u64;
                let words = &mut buf[..w1 - w0 + 1];
                words.fill(w2);
                for &(_, row, ph) in head {
                    for (w, &p) in words.iter_mut().zip(&ph[w0..=w1]) {
                        // SAFETY: every phase is reduced modulo the table's
                        // modulus, and each row holds exactly `modulus` words.
                        *w &= unsafe { *row.get_unchecked(p as usize) };
                    }
                }
                for (j, &w) in words.iter().enumerate() {
                    if w == 0 {
                        continue;
                    }
                    let i = w0 + j;
                    let mut w = w;
                    for &(_, row, ph) in tail {
                        w &= row[ph[i] as usize];
                        if w == 0 {
                            break;
                        }
                    }
                    while w != 0 {
                        let k = w.trailing_zeros() as i64;
                        w &= w - 1;
                        let a = self.a_lo + 64 * i as i64 + k;
                        if a.abs() > self.height {
                            continue;
                        }
                        counters.candidates += 1;
                        if gcd_u64(a.unsigned_abs(), b as u64) != 1 {
                            continue;
                        }
                        self.test(a, b, &cb, &mut out);
                    }
                }
            }
        }
        out
    }

    fn scaled_coeffs(&self, b: i64) -> Option<[i128; 7]> {
        if !self.fast_eval {
            return None;
        }
        let mut cb = [0i128; 7];
        let mut bpow = 1i128;
        for j in (0..7).rev() {
            cb[j] = self.form.coeff(j) as i128 * bpow;
            bpow *= b as i128;
        }
        Some(cb)
    }

    #[inline]
    fn test(&self, a: i64, b: i64, cb: &Option<[i128; 7]>, out: &mut Vec<RationalPoint>) {
        let x = PrimitiveXCoord::new_unchecked(a, b);
        match cb {
            Some(cb) => {
                let a = a as i128;
                let mut acc = cb[6];
                for j in (0..6).rev() {
                    acc = acc * a + cb[j];
                }
                if let Some(r) = isqrt_i128_if_square(acc) {
                    if r == 0 {
                        out.push(RationalPoint::new(x, BigInt::from(0)));
                    } else {
                        out.push(RationalPoint::new(x, -BigInt::from(r)));
                        out.push(RationalPoint::new(x, BigInt::from(r)));
                    }
                }
            }
            None => {
                let v = self.form.evaluate_big(&BigInt::from(a), &BigInt::from(b));
                let pts = push_pair(Vec::new(), x, &v);
                out.extend(pts);
            }
        }
    }
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

/// Intervals of `x` (possibly unbounded) outside of which `F(x, 1) < 0`.
///
/// The region is computed for `F(x,1) + eps * S * (1 + x^2)^3` with
/// `S = sum |f_j|`, which dominates the floating-point error of evaluating
/// `F`, and each endpoint is then widened.
pub(crate) fn nonnegative_intervals(form: &SexticForm) -> Vec<(f64, f64)> {
    let s: f64 = form.coeffs().iter().map(|&c| (c as f64).abs()).sum();
    let eps = 1e-9 * s;
    let mut g: Vec<f64> = form.coeffs().iter().map(|&c| c as f64).collect();
    for (j, w) in [(0, 1.0), (2, 3.0), (4, 3.0), (6, 1.0)] {
        g[j] += eps * w;
    }
    let roots = real_roots(&g);
    let mut cuts = vec![f64::NEG_INFINITY];
    cuts.extend(roots.iter().copied());
    cuts.push(f64::INFINITY);
    let sample = |lo: f64, hi: f64| -> f64 {
        match (lo.is_finite(), hi.is_finite()) {
            (true, true) => 0.5 * (lo + hi),
            (false, true) => hi - 1.0 - hi.abs(),
            (true, false) => lo + 1.0 + lo.abs(),
            (false, false) => 0.0,
        }
    };
    let mut out: Vec<(f64, f64)> = Vec::new();
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if horner(&g, sample(lo, hi)) < 0.0 {
            continue;
        }
        let lo = if lo.is_finite() { lo - 1e-6 * (1.0 + lo.abs()) } else { lo };
        let hi = if hi.is_finite() { hi + 1e-6 * (1.0 + hi.abs()) } else { hi };
        match out.last_mut() {
            Some(last) if last.1 >= lo => last.1 = hi,
            _ => out.push((lo, hi)),
        }
    }
    out
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ci| acc * x + ci)
}

/// Sorted real roots of the polynomial with ascending coefficients `c`.
fn real_roots(c: &[f64]) -> Vec<f64> {
    let Some(deg) = c.iter().rposition(|&x| x != 0.0) else {
        return Vec::new();
    };
    let c = &c[..=deg];
    match deg {
        0 => Vec::new(),
        1 => vec![-c[0] / c[1]],
        _ => {
            let deriv: Vec<f64> = (1..=deg).map(|j| j as f64 * c[j]).collect();
            let bound = 1.0 + c[..deg].iter().map(|x| (x / c[deg]).abs()).fold(0.0, f64::max);
            let mut knots = vec![-bound];
            knots.extend(real_roots(&deriv).into_iter().filter(|x| x.abs() < bound));
            knots.push(bound);
            let mut roots: Vec<f64> = Vec::new();
            for w in knots.windows(2) {
                let (mut lo, mut hi) = (w[0], w[1]);
                let (flo, fhi) = (horner(c, lo), horner(c, hi));
                if flo == 0.0 {
                    roots.push(lo);
                    continue;
                }
                if fhi == 0.0 || (flo < 0.0) == (fhi < 0.0) {
                    continue;
                }
                let neg_lo = flo < 0.0;
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    if (horner(c, mid) < 0.0) == neg_lo {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                roots.push(0.5 * (lo + hi));
            }
            if horner(c, bound) == 0.0 {
                roots.push(bound);
            }
            roots.sort_by(f64::total_cmp);
            roots.dedup();
            roots
        }
    }
}

/// Survival rate of one sieve modulus.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModulusSurvival {
    pub prime: u32,
    pub modulus: u32,
    /// Fraction of residue classes `(a, b)` mod `modulus` kept by the sieve.
    pub survival: f64,
}

/// Diagnostics from one sieved search.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SieveProfile {
    pub two_adic_survival: f64,
    pub moduli: Vec<ModulusSurvival>,
    /// Fraction of `(a, b)` with `|a| <= H` inside the nonnegativity region.
    pub real_fraction: f64,
    pub words_scanned: u64,
    pub candidates_tested: u64,
    pub num_points: usize,
    pub elapsed: Duration,
}

pub fn sieve_profile(form: &SexticForm, cfg: &SearchConfig) -> SieveProfile {
    let start = Instant::now();
    let sieve = Sieve::new(form, cfg);
    let mut counters = Counters::default();
    let pts = sieve.run(1, cfg.height_bound as i64, &mut counters);
    let stats = finish(form, cfg, pts);
    let elapsed = start.elapsed();
    let two_adic_survival =
        sieve.two_adic.iter().map(|w| w.count_ones()).sum::<u32>() as f64 / 4096.0;
    let mut ranges = Vec::new();
    let mut covered = 0u64;
    for b in 1..=sieve.height {
        sieve.word_ranges(b, &mut ranges);
        covered += ranges.iter().map(|(lo, hi)| (hi - lo + 1) as u64).sum::<u64>();
    }
    let all = sieve.nwords as u64 * sieve.height as u64;
    SieveProfile {
        two_adic_survival,
        moduli: sieve
            .tables
            .iter()
            .map(|t| ModulusSurvival {
                prime: t.prime,
                modulus: t.modulus as u32,
                survival: t.survival(),
            })
            .collect(),
        real_fraction: covered as f64 / all as f64,
        words_scanned: counters.words,
        candidates_tested: counters.candidates,
        num_points: stats.num_points,
        elapsed,
    }
}

/// The residue-class filter for one prime, exposed for checking: whether
/// `(a, b)` survives the table for `prime`.
pub fn sieve_keeps(form: &SexticForm, prime: u32, a: i64, b: i64) -> bool {
    let t = ResidueTable::new(form, prime);
    let m = t.modulus as i64;
    let (ra, rb) = (a.rem_euclid(m) as usize, b.rem_euclid(m) as usize);
    t.rows[rb * t.modulus + ra] & 1 == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn point_set(s: &CurveStats) -> Vec<String> {
        s.points.iter().map(|p| p.to_string()).collect()
    }

    #[test]
    fn finds_record_point() {
        let f = SexticForm::new([3, 0, 3, -1, -3, 0, 1]);
        let s = search_points(&f, &SearchConfig::with_height_bound(209_040));
        assert!(s.points.iter().any(|p| p.x.a() == -58189 && p.x.b() == 209040));
        assert_eq!(s.max_point_height, 209_040);
        assert!(s.points.iter().all(|p| p.lies_on(&f)));
    }

    #[test]
    fn point_at_infinity_pair() {
        let f = SexticForm::new([-1, 0, 0, 0, 0, 0, 4]);
        let s = search_points(&f, &SearchConfig::with_height_bound(1));
        let inf: Vec<_> = s.points.iter().filter(|p| p.x.is_infinity()).collect();
        assert_eq!(inf.len(), 2);
        assert_eq!(inf[0].y, BigInt::from(-2));
        assert_eq!(inf[1].y, BigInt::from(2));
    }

    #[test]
    fn naive_simple_cases() {
        let f = SexticForm::new([1, 0, 0, 0, 0, 0, 1]);
        let s = naive_search(&f, 10);
        let pts = point_set(&s);
        for want in ["0/1 : 1", "0/1 : -1", "1/0 : 1", "1/0 : -1"] {
            assert!(pts.contains(&want.to_string()), "{want} missing");
        }
        let neg = SexticForm::new([-1, 0, 0, 0, 0, 0, -1]);
        assert_eq!(naive_search(&neg, 100).num_points, 0);
    }

    #[test]
    fn sieve_matches_naive_on_random_forms() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..60 {
            let c: [i64; 7] = std::array::from_fn(|_| rng.gen_range(-10..=10));
            let f = SexticForm::new(c);
            if f.is_zero() {
                continue;
            }
            let h = 120;
            let fast = search_points(&f, &SearchConfig::with_height_bound(h));
            let slow = naive_search(&f, h);
            assert_eq!(fast.points, slow.points, "form {f}");
        }
    }

    #[test]
    fn sharded_equals_single() {
        let f = SexticForm::new([1, -1, 0, 1, -1, 0, 1]);
        let cfg = SearchConfig::with_height_bound(2000);
        assert_eq!(search_points(&f, &cfg), search_points_sharded(&f, &cfg, 7));
    }

    #[test]
    fn disabling_sieve_keeps_point_set() {
        let f = SexticForm::new([4, 4, 0, -1, -4, 0, 1]);
        let mut cfg = SearchConfig::with_height_bound(300);
        let on = search_points(&f, &cfg);
        cfg.use_sieve = false;
        assert_eq!(on.points, search_points(&f, &cfg).points);
    }

    #[test]
    fn nonresidue_form_has_zero_survival() {
        // F(a, b) = 2 mod 3 at every point of P^1(F_3).
        let f = SexticForm::new([2, 0, 1, 0, 0, 0, 2]);
        let prof = sieve_profile(&f, &SearchConfig::with_height_bound(200));
        assert_eq!(prof.moduli[0].prime, 3);
        assert_eq!(prof.moduli[0].survival, 0.0);
        assert_eq!(prof.num_points, 0);
        assert_eq!(prof.candidates_tested, 0);
    }

    #[test]
    fn sieve_only_removes_nonsquares() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let c: [i64; 7] = std::array::from_fn(|_| rng.gen_range(-10..=10));
            let f = SexticForm::new(c);
            for &p in &[3u32, 5, 7, 11, 13] {
                let m = if p * p <= 64 { p * p } else { p } as i64;
                let sq = squares_mod(m as usize);
                let pp = p as i64;
                for b in 0..m {
                    for a in 0..m {
                        let v = f.evaluate_i64(a, b);
                        let r = (v % BigInt::from(m) + BigInt::from(m)) % BigInt::from(m);
                        let r: usize = r.try_into().unwrap();
                        let coprime_mod_p = a % pp != 0 || b % pp != 0;
                        assert_eq!(sieve_keeps(&f, p, a, b), sq[r] && coprime_mod_p);
                    }
                }
            }
        }
    }

    #[test]
    fn nonnegative_region_contains_all_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let c: [i64; 7] = std::array::from_fn(|_| rng.gen_range(-10..=10));
            let f = SexticForm::new(c);
            if f.is_zero() {
                continue;
            }
            let iv = nonnegative_intervals(&f);
            for b in 1..40i64 {
                for a in -200..=200i64 {
                    if f.evaluate_i64(a, b) >= BigInt::from(0) {
                        let x = a as f64 / b as f64;
                        assert!(iv.iter().any(|&(lo, hi)| lo <= x && x <= hi), "{f} at {a}/{b}");
                    }
                }
            }
        }
    }

    #[test]
    fn real_roots_of_known_polynomial() {
        // (x - 1)(x + 2)(x - 0.5) = x^3 + 0.5x^2 - 2.5x + 1
        let r = real_roots(&[1.0, -2.5, 0.5, 1.0]);
        assert_eq!(r.len(), 3);
        for (got, want) in r.iter().zip([-2.0, 0.5, 1.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn config_validation() {
        assert!(SearchConfig::default().validate().is_ok());
        let mut c = SearchConfig::default();
        c.sieve_primes = vec![3, 3];
        assert!(c.validate().is_err());
        c.sieve_primes = vec![9];
        assert!(c.validate().is_err());
        c.sieve_primes = vec![2];
        assert!(c.validate().is_err());
    }
}
