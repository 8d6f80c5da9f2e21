//! Looking for curves with many points.
//!
//! Three tools live here. [`constrained_enumerate`] walks the forms that
//! already have points above a few fixed x-coordinates. [`fp_filter_score`]
//! ranks curves by how many points they have modulo small primes. And
//! [`chord_extend`] finds new points from old ones: five points on a cubic
//! `y = c(x, z)` force a sixth.

use std::collections::{BTreeSet, HashSet};
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curvespace::{canonicalize, is_squarefree_form};
use crate::error::{Error, Result};
use crate::form::{PrimitiveXCoord, RationalPoint, SexticForm};
use crate::heuristics::bareiss_determinant;
use crate::pointsearch::{is_prime, search_points, SearchConfig};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HuntConfig {
    pub n_max: u64,
    /// x-coordinates at which `F` must take a square value.
    pub required_square_xs: Vec<PrimitiveXCoord>,
    /// Primes below this bound enter the `F_p` product.
    pub fp_bound: u32,
    /// Curves scoring below this are dropped before any search.
    pub fp_threshold: f64,
    /// `(height bound, minimum number of points to continue)`, ascending.
    pub stages: Vec<(u64, u64)>,
}

impl Default for HuntConfig {
    fn default() -> Self {
        HuntConfig {
            n_max: 10,
            required_square_xs: default_required_xs(),
            fp_bound: 200,
            fp_threshold: 1.0,
            stages: vec![(2047, 24), (16383, 30), (131071, 0)],
        }
    }
}

/// `(1:0), (0:1), (1:1), (-1:1)`.
pub fn default_required_xs() -> Vec<PrimitiveXCoord> {
    vec![
        PrimitiveXCoord::INFINITY,
        PrimitiveXCoord::ZERO,
        PrimitiveXCoord::new_unchecked(1, 1),
        PrimitiveXCoord::new_unchecked(-1, 1),
    ]
}

impl HuntConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_max == 0 || self.n_max > 1 << 20 {
            return Err(Error::Config("n_max must be in 1..=2^20".into()));
        }
        if self.fp_bound < 3 {
            return Err(Error::Config("fp_bound must be at least 3".into()));
        }
        if !(self.fp_threshold > 0.0) || !self.fp_threshold.is_finite() {
            return Err(Error::Config("fp_threshold must be positive".into()));
        }
        if self.stages.is_empty() {
            return Err(Error::Config("at least one search stage is needed".into()));
        }
        if self.stages.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::Config("stage height bounds must be ascending".into()));
        }
        SearchConfig::with_height_bound(self.stages.last().map(|s| s.0).unwrap_or(1)).validate()?;
        Ok(())
    }

    /// Whether the required set is closed under `x -> -x` and `x -> 1/x`,
    /// in which case one form per symmetry orbit suffices.
    fn symmetric_requirements(&self) -> bool {
        let set: HashSet<PrimitiveXCoord> = self.required_square_xs.iter().copied().collect();
        set.iter().all(|x| {
            let neg = PrimitiveXCoord::new(-x.a(), x.b()).expect("nonzero");
            let inv = PrimitiveXCoord::new(x.b(), x.a()).expect("nonzero");
            set.contains(&neg) && set.contains(&inv)
        })
    }
}

fn squares_up_to(n: i64) -> Vec<i64> {
    (0..).map(|k: i64| k * k).take_while(|&s| s <= n).collect()
}

fn is_square_i64(v: i64) -> bool {
    v >= 0 && {
        let r = (v as f64).sqrt() as i64;
        (r.saturating_sub(1)..=r + 1).any(|s| s * s == v)
    }
}

/// A block of the constrained search with `f6` and `f0` fixed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct HuntShard {
    pub f6: i64,
    pub f0: i64,
}

impl HuntShard {
    pub fn id(&self) -> String {
        format!("{},{}", self.f6, self.f0)
    }
}

struct Pruning {
    inf: bool,
    zero: bool,
    one: bool,
    minus_one: bool,
}

impl Pruning {
    fn new(cfg: &HuntConfig) -> Self {
        let has = |a, b| cfg.required_square_xs.contains(&PrimitiveXCoord::new_unchecked(a, b));
        Pruning { inf: has(1, 0), zero: has(0, 1), one: has(1, 1), minus_one: has(-1, 1) }
    }
}

/// The shards of [`constrained_enumerate`], in stream order.
pub fn hunt_shards(cfg: &HuntConfig) -> Vec<HuntShard> {
    let n = cfg.n_max as i64;
    let prune = Pruning::new(cfg);
    let range = |square: bool| -> Vec<i64> {
        if square { squares_up_to(n) } else { (-n..=n).collect() }
    };
    let f6s = range(prune.inf);
    let f0s = range(prune.zero);
    f6s.iter()
        .flat_map(|&f6| f0s.iter().map(move |&f0| HuntShard { f6, f0 }))
        .collect()
}

/// Forms of one shard whose values at all required x-coordinates are
/// squares. The values at `(1:1)` and `(-1:1)` are `E + O` and `E - O`
/// with `E`, `O` the sums of the even and odd coefficients, so `O` is
/// picked from the few values that make both squares before `f1, f3, f5`
/// are split out.
pub fn constrained_enumerate_shard(
    cfg: &HuntConfig,
    shard: HuntShard,
) -> impl Iterator<Item = SexticForm> + '_ {
    let n = cfg.n_max as i64;
    let prune = Pruning::new(cfg);
    let HuntShard { f6, f0 } = shard;
    (-n..=n)
        .flat_map(move |f2| (-n..=n).map(move |f4| (f2, f4)))
        .flat_map(move |(f2, f4)| {
            let e = f0 + f2 + f4 + f6;
            let odd: Vec<i64> = (-3 * n..=3 * n)
                .filter(|&o| {
                    (!prune.one || is_square_i64(e + o)) && (!prune.minus_one || is_square_i64(e - o))
                })
                .collect();
            odd.into_iter().flat_map(move |o| {
                (-n..=n).flat_map(move |f1| {
                    (-n..=n).filter_map(move |f3| {
                        let f5 = o - f1 - f3;
                        (f5.abs() <= n).then(|| SexticForm::new([f0, f1, f2, f3, f4, f5, f6]))
                    })
                })
            })
        })
        .filter(move |f| {
            cfg.required_square_xs.iter().all(|x| {
                let v = f.evaluate(x);
                crate::form::integer_sqrt_if_square(&v).is_some()
            })
        })
}

/// All forms with `|f_j| <= n_max` that are squares at every required
/// x-coordinate, shard by shard.
pub fn constrained_enumerate(cfg: &HuntConfig) -> impl Iterator<Item = SexticForm> + '_ {
    hunt_shards(cfg)
        .into_iter()
        .flat_map(move |s| constrained_enumerate_shard(cfg, s))
}

fn legendre_euler(v: i64, p: u64) -> i64 {
    let v = v.rem_euclid(p as i64) as u64;
    if v == 0 {
        return 0;
    }
    let mut result = 1u64;
    let mut base = v;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    if result == 1 { 1 } else { -1 }
}

fn check_odd_prime(p: u64) -> Result<()> {
    if p == 2 {
        return Err(Error::Domain("p = 2 is not supported".into()));
    }
    if !is_prime(p) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    Ok(())
}

/// `#C(F_p)`: each `(a:b)` in `P^1(F_p)` contributes `1 + chi(F(a, b))`.
pub fn count_points_mod_p(form: &SexticForm, p: u64) -> Result<u64> {
    check_odd_prime(p)?;
    if p > 1 << 31 {
        return Err(Error::Domain("p must be below 2^31".into()));
    }
    let pi = p as i64;
    let c: Vec<i64> = form.coeffs().iter().map(|&f| f.rem_euclid(pi)).collect();
    let mut total = (p + 1) as i64 + legendre_euler(c[6], p);
    for x in 0..pi {
        let mut v = 0i64;
        for j in (0..7).rev() {
            v = (v * x + c[j]) % pi;
        }
        total += legendre_euler(v, p);
    }
    Ok(total as u64)
}

/// `prod_{odd p < fp_bound} #C(F_p) / p`, computed prime by prime with
/// [`count_points_mod_p`].
pub fn fp_filter_score(form: &SexticForm, cfg: &HuntConfig) -> Result<f64> {
    let mut score = 1.0;
    for p in (3..cfg.fp_bound as u64).filter(|&p| is_prime(p)) {
        score *= count_points_mod_p(form, p)? as f64 / p as f64;
    }
    Ok(score)
}

/// Primes at most this size get a table keyed by the whole form mod `p`.
const FULL_TABLE_MAX_PRIME: u64 = 7;

struct PrimeTable {
    p: u64,
    chi: Vec<i8>,
    /// `#C(F_p)` for every form mod p, indexed by `sum_j (f_j mod p) p^j`.
    by_form: Option<Vec<u16>>,
}

/// Precomputed tables for repeated [`fp_filter_score`] evaluation.
pub struct FpTables {
    primes: Vec<PrimeTable>,
}

impl FpTables {
    pub fn new(fp_bound: u32) -> Result<Self> {
        if fp_bound < 3 {
            return Err(Error::Config("fp_bound must be at least 3".into()));
        }
        let primes = (3..fp_bound as u64)
            .filter(|&p| is_prime(p))
            .map(|p| {
                let mut chi = vec![-1i8; p as usize];
                chi[0] = 0;
                for x in 1..p {
                    chi[(x * x % p) as usize] = 1;
                }
                let by_form = (p <= FULL_TABLE_MAX_PRIME).then(|| {
                    let size = (p as usize).pow(7);
                    (0..size)
                        .into_par_iter()
                        .map(|idx| {
                            let mut c = [0i64; 7];
                            let mut r = idx;
                            for cj in c.iter_mut() {
                                *cj = (r % p as usize) as i64;
                                r /= p as usize;
                            }
                            count_with_chi(&c, p, &chi) as u16
                        })
                        .collect()
                });
                PrimeTable { p, chi, by_form }
            })
            .collect();
        Ok(FpTables { primes })
    }

    pub fn score(&self, form: &SexticForm) -> f64 {
        let mut score = 1.0;
        for t in &self.primes {
            let pi = t.p as i64;
            let c: [i64; 7] = form.coeffs().map(|f| f.rem_euclid(pi));
            let count = match &t.by_form {
                Some(table) => {
                    let idx = c.iter().rev().fold(0usize, |acc, &cj| acc * t.p as usize + cj as usize);
                    table[idx] as i64
                }
                None => count_with_chi(&c, t.p, &t.chi),
            };
            score *= count as f64 / t.p as f64;
        }
        score
    }
}

fn count_with_chi(c: &[i64; 7], p: u64, chi: &[i8]) -> i64 {
    let pi = p as i64;
    let mut total = (p + 1) as i64 + chi[c[6] as usize] as i64;
    for x in 0..pi {
        let mut v = 0i64;
        for j in (0..7).rev() {
            v = (v * x + c[j]) % pi;
        }
        total += chi[v as usize] as i64;
    }
    total
}

/// One curve that survived every stage of a hunt.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HuntRecord {
    pub form: SexticForm,
    pub fp_score: f64,
    /// Points found at each stage's height bound.
    pub stage_points: Vec<u64>,
    pub num_points: u64,
    pub max_point_height: u64,
}

/// Filters and searches one shard. Records come out in enumeration order.
pub fn hunt_shard(cfg: &HuntConfig, tables: &FpTables, shard: HuntShard) -> Vec<HuntRecord> {
    let canonical_only = cfg.symmetric_requirements();
    let forms: Vec<SexticForm> = constrained_enumerate_shard(cfg, shard)
        .filter(|f| !canonical_only || canonicalize(f).representative == *f)
        .collect();
    forms
        .par_iter()
        .filter_map(|f| {
            if !is_squarefree_form(f).map(|s| s.is_squarefree()).unwrap_or(false) {
                return None;
            }
            let fp_score = tables.score(f);
            if fp_score < cfg.fp_threshold {
                return None;
            }
            let mut stage_points = Vec::with_capacity(cfg.stages.len());
            let mut last = None;
            for &(bound, min_points) in &cfg.stages {
                let stats = search_points(f, &SearchConfig::with_height_bound(bound));
                stage_points.push(stats.num_points as u64);
                if (stats.num_points as u64) < min_points {
                    return None;
                }
                last = Some(stats);
            }
            let stats = last?;
            Some(HuntRecord {
                form: *f,
                fp_score,
                stage_points,
                num_points: stats.num_points as u64,
                max_point_height: stats.max_point_height,
            })
        })
        .collect()
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HuntSummary {
    pub shards_total: usize,
    pub shards_skipped: usize,
    pub shards_run: usize,
    pub records_written: usize,
}

/// The sidecar file that tracks completed shards of a hunt writing to
/// `out`.
pub fn progress_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".progress");
    out.with_file_name(name)
}

/// Reads `(shard id, output length after that shard)` lines.
fn read_progress(path: &Path) -> Result<Vec<(String, u64)>> {
    if !path.exists() {
        return Ok(Vec::new());
    }
    let mut done = Vec::new();
    for line in BufReader::new(File::open(path)?).lines() {
        let line = line?;
        let Some((id, len)) = line.rsplit_once(' ') else {
            continue;
        };
        let len = len
            .parse()
            .map_err(|_| Error::Parse(format!("bad progress line `{line}`")))?;
        done.push((id.to_string(), len));
    }
    Ok(done)
}

/// Runs a hunt, appending one JSON record per line to `out`. After each
/// shard the output length is logged to the sidecar file, so a resumed run
/// drops any partial output of an interrupted shard and skips the
/// completed ones.
pub fn run_hunt(cfg: &HuntConfig, out: &Path, resume: bool) -> Result<HuntSummary> {
    cfg.validate()?;
    let tables = FpTables::new(cfg.fp_bound)?;
    let progress = progress_path(out);
    let (done, keep_len) = if resume {
        let done = read_progress(&progress)?;
        let len = done.last().map(|d| d.1).unwrap_or(0);
        (done.into_iter().map(|d| d.0).collect::<BTreeSet<_>>(), len)
    } else {
        (BTreeSet::new(), 0)
    };
    let file = OpenOptions::new().create(true).write(true).truncate(false).open(out)?;
    file.set_len(keep_len)?;
    drop(file);
    if !resume {
        File::create(&progress)?;
    }
    let mut writer = OpenOptions::new().append(true).open(out)?;
    let mut log = OpenOptions::new().append(true).create(true).open(&progress)?;
    let shards = hunt_shards(cfg);
    let mut summary = HuntSummary { shards_total: shards.len(), ..Default::default() };
    let mut len = keep_len;
    for shard in shards {
        if done.contains(&shard.id()) {
            summary.shards_skipped += 1;
            continue;
        }
        let mut buf = Vec::new();
        for rec in hunt_shard(cfg, &tables, shard) {
            serde_json::to_writer(&mut buf, &rec)?;
            buf.push(b'\n');
            summary.records_written += 1;
        }
        writer.write_all(&buf)?;
        writer.flush()?;
        len += buf.len() as u64;
        writeln!(log, "{} {}", shard.id(), len)?;
        log.flush()?;
        summary.shards_run += 1;
    }
    Ok(summary)
}

/// Possibly-zero test for a 5x5 integer determinant, with the entries
/// given modulo `2^64`. A `false` answer is definite.
pub fn determinant_prefilter(rows: &[[u64; 5]; 5]) -> bool {
    det5_wrapping(rows) == 0
}

/// Determinant modulo `2^64` by expansion along the last column.
fn det5_wrapping(rows: &[[u64; 5]; 5]) -> u64 {
    let minors = last_column_cofactors(rows);
    (0..5).fold(0u64, |acc, i| acc.wrapping_add(minors[i].wrapping_mul(rows[i][4])))
}

/// Signed cofactors of the last column, modulo `2^64`.
fn last_column_cofactors(rows: &[[u64; 5]; 5]) -> [u64; 5] {
    let mut out = [0u64; 5];
    for (i, slot) in out.iter_mut().enumerate() {
        let mut m = [[0u64; 4]; 4];
        for (r, src) in (0..5).filter(|&r| r != i).enumerate() {
            m[r].copy_from_slice(&rows[src][..4]);
        }
        let d = det4_wrapping(&m);
        // sign (-1)^(i + 4)
        *slot = if i % 2 == 0 { d } else { d.wrapping_neg() };
    }
    out
}

fn det4_wrapping(m: &[[u64; 4]; 4]) -> u64 {
    let det3 = |r: [usize; 3], c: [usize; 3]| -> u64 {
        let e = |i: usize, j: usize| m[r[i]][c[j]];
        let t1 = e(0, 0).wrapping_mul(e(1, 1).wrapping_mul(e(2, 2)).wrapping_sub(e(1, 2).wrapping_mul(e(2, 1))));
        let t2 = e(0, 1).wrapping_mul(e(1, 0).wrapping_mul(e(2, 2)).wrapping_sub(e(1, 2).wrapping_mul(e(2, 0))));
        let t3 = e(0, 2).wrapping_mul(e(1, 0).wrapping_mul(e(2, 1)).wrapping_sub(e(1, 1).wrapping_mul(e(2, 0))));
        t1.wrapping_sub(t2).wrapping_add(t3)
    };
    let mut acc = 0u64;
    for j in 0..4 {
        let cols: Vec<usize> = (0..4).filter(|&c| c != j).collect();
        let minor = det3([1, 2, 3], [cols[0], cols[1], cols[2]]);
        let term = m[0][j].wrapping_mul(minor);
        acc = if j % 2 == 0 { acc.wrapping_add(term) } else { acc.wrapping_sub(term) };
    }
    acc
}

/// Exact 5x5 determinant.
pub fn exact_determinant(rows: &[[BigInt; 5]; 5]) -> BigInt {
    bareiss_determinant(rows.iter().map(|r| r.to_vec()).collect())
}

/// The residue of `v` modulo `2^64`.
pub fn reduce_mod_2_64(v: &BigInt) -> u64 {
    let digits = v.magnitude().iter_u64_digits().next().unwrap_or(0);
    if v.is_negative() { digits.wrapping_neg() } else { digits }
}

/// Matrix row `(b^3, a b^2, a^2 b, a^3, y)` of a point `(a : y : b)`.
pub fn chord_row(p: &RationalPoint) -> [BigInt; 5] {
    let a = BigInt::from(p.x.a());
    let b = BigInt::from(p.x.b());
    [&b * &b * &b, &a * &b * &b, &a * &a * &b, &a * &a * &a, p.y.clone()]
}

#[derive(Clone, Debug)]
pub struct ChordConfig {
    /// Largest number of 5-sets of x-coordinates examined.
    pub max_subsets: u64,
}

impl Default for ChordConfig {
    fn default() -> Self {
        ChordConfig { max_subsets: 10_000_000 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ChordReport {
    /// New points, sorted, both signs of `y`.
    pub new_points: Vec<RationalPoint>,
    pub subsets_examined: u64,
    /// Sign choices that passed the modular determinant test.
    pub prefilter_hits: u64,
    /// Sign choices whose determinant is exactly zero.
    pub cubics_found: u64,
    /// Cubics whose sixth intersection could not be turned into a point
    /// (coordinates beyond 64 bits, or an inexact division).
    pub degenerate: u64,
    /// Whether `max_subsets` cut the scan short.
    pub truncated: bool,
}

/// What one cubic through five points yields.
enum SixthPoint {
    Point(PrimitiveXCoord, BigInt),
    Degenerate,
}

/// Looks for new points from every 5-set of known x-coordinates and every
/// choice of `y` signs. 5-sets are visited in colexicographic order of the
/// height-sorted x-coordinates, so the smallest points are combined first.
/// Every returned point has been checked against `F` exactly.
pub fn chord_extend(form: &SexticForm, known: &[RationalPoint], cfg: &ChordConfig) -> Result<ChordReport> {
    if let Some(p) = known.iter().find(|p| !p.lies_on(form)) {
        return Err(Error::Domain(format!("{p} is not on the curve")));
    }
    // one representative y per x-coordinate, sorted by height
    let mut reps: Vec<RationalPoint> = Vec::new();
    let mut seen = HashSet::new();
    let mut sorted: Vec<&RationalPoint> = known.iter().collect();
    sorted.sort_by(|p, q| (p.height(), p.x, &p.y).cmp(&(q.height(), q.x, &q.y)));
    for p in sorted {
        if seen.insert(p.x) {
            let mut r = p.clone();
            if r.y.is_negative() {
                r.y = -r.y;
            }
            reps.push(r);
        }
    }
    let mut report = ChordReport::default();
    if reps.len() < 5 {
        return Ok(report);
    }
    let rows: Vec<[BigInt; 5]> = reps.iter().map(chord_row).collect();
    let rows_mod: Vec<[u64; 5]> = rows.iter().map(|r| r.clone().map(|v| reduce_mod_2_64(&v))).collect();

    let known_set: HashSet<(PrimitiveXCoord, BigInt)> =
        known.iter().map(|p| (p.x, p.y.clone())).collect();
    let mut found: BTreeSet<(u64, PrimitiveXCoord, BigInt)> = BTreeSet::new();

    const BLOCK: usize = 1 << 14;
    let mut combos = Colex::new(reps.len(), 5);
    let mut block = Vec::with_capacity(BLOCK);
    loop {
        block.clear();
        while block.len() < BLOCK && report.subsets_examined < cfg.max_subsets {
            match combos.next() {
                Some(c) => {
                    block.push(c);
                    report.subsets_examined += 1;
                }
                None => break,
            }
        }
        if block.is_empty() {
            break;
        }
        let results: Vec<(u64, u64, u64, Vec<(PrimitiveXCoord, BigInt)>)> = block
            .par_iter()
            .map(|idx| examine_subset(form, idx, &reps, &rows, &rows_mod))
            .collect();
        for (hits, cubics, degenerate, pts) in results {
            report.prefilter_hits += hits;
            report.cubics_found += cubics;
            report.degenerate += degenerate;
            for (x, y) in pts {
                found.insert((x.height(), x, y));
            }
        }
        if report.subsets_examined >= cfg.max_subsets {
            report.truncated = combos.next().is_some();
            break;
        }
    }
    let mut new_points = Vec::new();
    for (_, x, y) in found {
        for yy in [-y.clone(), y] {
            if !known_set.contains(&(x, yy.clone())) {
                let p = RationalPoint::new(x, yy);
                if !new_points.contains(&p) {
                    new_points.push(p);
                }
            }
        }
    }
    new_points.sort_by(|p, q| (p.x.b(), p.x.a(), &p.y).cmp(&(q.x.b(), q.x.a(), &q.y)));
    report.new_points = new_points;
    Ok(report)
}

fn examine_subset(
    form: &SexticForm,
    idx: &[usize; 5],
    reps: &[RationalPoint],
    rows: &[[BigInt; 5]],
    rows_mod: &[[u64; 5]],
) -> (u64, u64, u64, Vec<(PrimitiveXCoord, BigInt)>) {
    let m: [[u64; 5]; 5] = idx.map(|i| rows_mod[i]);
    let cof = last_column_cofactors(&m);
    let (mut hits, mut cubics, mut degenerate) = (0, 0, 0);
    let mut out = Vec::new();
    // flipping all signs at once gives the same cubic up to sign
    for mask in 0u32..16 {
        let sign = |k: usize| k > 0 && mask >> (k - 1) & 1 == 1;
        let det = (0..5).fold(0u64, |acc, k| {
            let y = if sign(k) { m[k][4].wrapping_neg() } else { m[k][4] };
            acc.wrapping_add(cof[k].wrapping_mul(y))
        });
        if det != 0 {
            continue;
        }
        hits += 1;
        let pts: Vec<RationalPoint> = (0..5)
            .map(|k| {
                let p = &reps[idx[k]];
                RationalPoint::new(p.x, if sign(k) { -p.y.clone() } else { p.y.clone() })
            })
            .collect();
        let exact: [[BigInt; 5]; 5] = std::array::from_fn(|k| {
            let mut r = rows[idx[k]].clone();
            r[4] = pts[k].y.clone();
            r
        });
        if !exact_determinant(&exact).is_zero() {
            continue;
        }
        cubics += 1;
        match sixth_point(form, &pts) {
            SixthPoint::Point(x, y) => out.push((x, y)),
            SixthPoint::Degenerate => degenerate += 1,
        }
    }
    (hits, cubics, degenerate, out)
}

/// Binary form coefficients, index = power of `x`.
fn poly_mul(p: &[BigInt], q: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        for (j, b) in q.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

/// The cubic through the points, scaled to integer coefficients `C` with
/// `c = C / d`. Expects five points on a common cubic; the interpolation
/// uses the first four.
fn interpolate_cubic(pts: &[RationalPoint]) -> (Vec<BigInt>, BigInt) {
    let ab: Vec<(BigInt, BigInt)> = pts[..4]
        .iter()
        .map(|p| (BigInt::from(p.x.a()), BigInt::from(p.x.b())))
        .collect();
    let mut coeffs = vec![BigRational::zero(); 4];
    for i in 0..4 {
        let mut num = vec![BigInt::one()];
        let mut den = BigInt::one();
        for j in (0..4).filter(|&j| j != i) {
            // linear factor b_j x - a_j z
            num = poly_mul(&num, &[-ab[j].0.clone(), ab[j].1.clone()]);
            den *= &ab[j].1 * &ab[i].0 - &ab[j].0 * &ab[i].1;
        }
        for (k, c) in num.into_iter().enumerate() {
            coeffs[k] += BigRational::new(c * &pts[i].y, den.clone());
        }
    }
    let d = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints = coeffs
        .iter()
        .map(|c| (c * BigRational::from_integer(d.clone())).to_integer())
        .collect();
    (ints, d)
}

fn eval_binary(c: &[BigInt], a: &BigInt, b: &BigInt) -> BigInt {
    let deg = c.len() - 1;
    let mut acc = BigInt::zero();
    let mut bpow = BigInt::one();
    // Horner in x with explicit powers of z.
    let mut terms = vec![BigInt::zero(); c.len()];
    for k in (0..=deg).rev() {
        terms[k] = bpow.clone();
        bpow *= b;
    }
    let mut apow = BigInt::one();
    for k in 0..=deg {
        acc += &c[k] * &apow * &terms[k];
        apow *= a;
    }
    acc
}

fn sixth_point(form: &SexticForm, pts: &[RationalPoint]) -> SixthPoint {
    let (c, d) = interpolate_cubic(pts);
    let fifth = &pts[4];
    let (a5, b5) = (BigInt::from(fifth.x.a()), BigInt::from(fifth.x.b()));
    if eval_binary(&c, &a5, &b5) != &fifth.y * &d {
        return SixthPoint::Degenerate;
    }
    // G = C^2 - d^2 F vanishes at the five x-coordinates.
    let d2 = &d * &d;
    let mut g = poly_mul(&c, &c);
    for (j, &f) in form.coeffs().iter().enumerate() {
        g[j] -= &d2 * f;
    }
    let mut p5 = vec![BigInt::one()];
    for p in pts {
        p5 = poly_mul(&p5, &[-BigInt::from(p.x.a()), BigInt::from(p.x.b())]);
    }
    // G = (l1 x + l0 z) P5; read l0, l1 off the extreme coefficients.
    let lo = p5.iter().position(|v| !v.is_zero()).expect("nonzero product");
    let hi = p5.iter().rposition(|v| !v.is_zero()).expect("nonzero product");
    let l0 = BigRational::new(g[lo].clone(), p5[lo].clone());
    let l1 = BigRational::new(g[hi + 1].clone(), p5[hi].clone());
    if l0.is_zero() && l1.is_zero() {
        return SixthPoint::Degenerate;
    }
    let scale = l0.denom().lcm(l1.denom());
    let n0 = (&l0 * BigRational::from_integer(scale.clone())).to_integer();
    let n1 = (&l1 * BigRational::from_integer(scale)).to_integer();
    let check = poly_mul(&[n0.clone(), n1.clone()], &p5);
    let lhs: Vec<BigInt> = g.iter().map(|v| v * l0.denom().lcm(l1.denom())).collect();
    if check != lhs {
        return SixthPoint::Degenerate;
    }
    // root of n1 x + n0 z is (-n0 : n1)
    let (Some(a), Some(b)) = ((-n0).to_i64(), n1.to_i64()) else {
        return SixthPoint::Degenerate;
    };
    let Ok(x) = PrimitiveXCoord::new(a, b) else {
        return SixthPoint::Degenerate;
    };
    let (ab, bb) = (BigInt::from(x.a()), BigInt::from(x.b()));
    let (y, rem) = eval_binary(&c, &ab, &bb).div_rem(&d);
    if !rem.is_zero() {
        return SixthPoint::Degenerate;
    }
    let p = RationalPoint::new(x, y.abs());
    if !p.lies_on(form) {
        return SixthPoint::Degenerate;
    }
    SixthPoint::Point(x, y.abs())
}

/// k-subsets of `0..n` in colexicographic order.
struct Colex {
    n: usize,
    cur: Option<[usize; 5]>,
}

impl Colex {
    fn new(n: usize, k: usize) -> Self {
        assert_eq!(k, 5);
        Colex { n, cur: (n >= 5).then_some([0, 1, 2, 3, 4]) }
    }
}

impl Iterator for Colex {
    type Item = [usize; 5];

    fn next(&mut self) -> Option<[usize; 5]> {
        let cur = self.cur?;
        let mut nxt = cur;
        let mut i = 0;
        while i < 5 {
            let limit = if i == 4 { self.n } else { nxt[i + 1] };
            if nxt[i] + 1 < limit {
                nxt[i] += 1;
                for (j, slot) in nxt.iter_mut().enumerate().take(i) {
                    *slot = j;
                }
                break;
            }
            i += 1;
        }
        self.cur = (i < 5).then_some(nxt);
        Some(cur)
    }
}
