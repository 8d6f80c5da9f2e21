//! Census runs over all curves of a given size and verification of known
//! record curves.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curvespace::{enumerate_curves, is_squarefree_form};
use crate::error::{Error, Result};
use crate::form::{CurveStats, PrimitiveXCoord, RationalPoint, SexticForm};
use crate::heuristics::{expected_bracket_count, predicted_pair_fractions};
use crate::pointsearch::{push_pair, search_points, search_points_sharded, SearchConfig};

/// How many record curves a census report keeps.
pub const RECORDS_KEPT: usize = 10;

/// How the census counts forms related by `x -> -x` and `x -> 1/x`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Weighting {
    /// One curve per symmetry class, through its canonical representative.
    /// This is how the published averages were tabulated.
    #[default]
    Orbits,
    /// Every form separately, so averages are over all of `C_N`.
    Forms,
}

impl std::fmt::Display for Weighting {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Weighting::Orbits => "orbits",
            Weighting::Forms => "forms",
        })
    }
}

impl std::str::FromStr for Weighting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "orbits" => Ok(Weighting::Orbits),
            "forms" => Ok(Weighting::Forms),
            _ => Err(Error::Parse(format!("unknown weighting {s:?}, expected orbits or forms"))),
        }
    }
}

/// Which curves a census counts and how.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusOptions {
    /// Also count forms with a repeated factor. Such a form can have points
    /// over a positive share of all x (a square times a quadratic, say), so
    /// keep the height bound small.
    pub include_singular: bool,
    pub weighting: Weighting,
}

impl CensusOptions {
    fn weight(&self, orbit_size: u32) -> u64 {
        match self.weighting {
            Weighting::Orbits => 1,
            Weighting::Forms => orbit_size as u64,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    #[serde(rename = "N")]
    pub n: u64,
    pub height_bound: u64,
    pub include_singular: bool,
    pub weighting: Weighting,
    pub num_curves: u64,
    pub total_points: u64,
    pub avg_points: f64,
    #[serde(rename = "avg_times_sqrtN")]
    pub avg_times_sqrt_n: f64,
    /// Points with height in `[2^n, 2^(n+1))`, keyed by `n`.
    pub bracket_counts: BTreeMap<u32, u64>,
    /// Curves with at least `m` distinct x-coordinates, keyed by `m`.
    pub r_m_counts: BTreeMap<usize, u64>,
    pub max_point_height: u64,
    #[serde(rename = "lambda_N")]
    pub lambda_n: f64,
    /// Curves with the most points, best first, ties broken by the form.
    pub record_curves: Vec<(SexticForm, u64)>,
}

/// Additive census state. Merging is commutative and associative so the
/// final report does not depend on how the work was split.
#[derive(Clone, Debug, Default)]
struct Tally {
    num_curves: u64,
    total_points: u64,
    brackets: BTreeMap<u32, u64>,
    /// curves with exactly k x-coordinates
    x_histogram: BTreeMap<usize, u64>,
    max_height: u64,
    records: Vec<(SexticForm, u64)>,
}

impl Tally {
    fn add(&mut self, stats: &CurveStats, weight: u64) {
        self.num_curves += weight;
        self.total_points += weight * stats.num_points as u64;
        for p in &stats.points {
            *self.brackets.entry(height_bracket(p.height())).or_default() += weight;
        }
        *self.x_histogram.entry(stats.num_x_coords).or_default() += weight;
        self.max_height = self.max_height.max(stats.max_point_height);
        self.records.push((stats.form, stats.num_points as u64));
        self.trim_records();
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.num_curves += other.num_curves;
        self.total_points += other.total_points;
        for (k, v) in other.brackets {
            *self.brackets.entry(k).or_default() += v;
        }
        for (k, v) in other.x_histogram {
            *self.x_histogram.entry(k).or_default() += v;
        }
        self.max_height = self.max_height.max(other.max_height);
        self.records.extend(other.records);
        self.trim_records();
        self
    }

    fn trim_records(&mut self) {
        self.records.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        self.records.truncate(RECORDS_KEPT);
    }

    fn into_report(self, n: u64, height_bound: u64, opts: &CensusOptions) -> ExperimentReport {
        let avg = if self.num_curves == 0 {
            0.0
        } else {
            self.total_points as f64 / self.num_curves as f64
        };
        let max_x = self.x_histogram.keys().copied().max().unwrap_or(0);
        let mut r_m_counts = BTreeMap::new();
        let mut at_least = self.num_curves;
        for m in 0..=max_x {
            r_m_counts.insert(m, at_least);
            at_least -= self.x_histogram.get(&m).copied().unwrap_or(0);
        }
        ExperimentReport {
            n,
            height_bound,
            include_singular: opts.include_singular,
            weighting: opts.weighting,
            num_curves: self.num_curves,
            total_points: self.total_points,
            avg_points: avg,
            avg_times_sqrt_n: avg * (n as f64).sqrt(),
            bracket_counts: self.brackets,
            r_m_counts,
            max_point_height: self.max_height,
            lambda_n: self.max_height as f64 / (n as f64).powf(6.5),
            record_curves: self.records,
        }
    }
}

/// `n` with `2^n <= h < 2^(n+1)`.
pub fn height_bracket(h: u64) -> u32 {
    debug_assert!(h > 0);
    63 - h.leading_zeros()
}

/// Census over the curves of size `N`: squarefree forms only, or every
/// nonzero form when `opts.include_singular` is set.
pub fn run_census(n: u64, cfg: &SearchConfig, opts: &CensusOptions) -> Result<ExperimentReport> {
    Ok(run_census_multi(n, cfg, opts, &[cfg.height_bound])?.remove(0))
}

/// Runs one search per curve at `cfg.height_bound` and reports the census
/// truncated at each of `bounds` (each at most `cfg.height_bound`).
pub fn run_census_multi(
    n: u64,
    cfg: &SearchConfig,
    opts: &CensusOptions,
    bounds: &[u64],
) -> Result<Vec<ExperimentReport>> {
    cfg.validate()?;
    if let Some(&b) = bounds.iter().find(|&&b| b == 0 || b > cfg.height_bound) {
        return Err(Error::Config(format!(
            "report bound {b} outside 1..={}",
            cfg.height_bound
        )));
    }
    let curves: Vec<_> = enumerate_curves(n, true, !opts.include_singular)?.collect();
    let tallies = curves
        .par_iter()
        .fold(
            || vec![Tally::default(); bounds.len()],
            |mut acc, c| {
                let stats = search_points(&c.form, cfg);
                let w = opts.weight(c.orbit_size);
                for (t, &b) in acc.iter_mut().zip(bounds) {
                    if b == cfg.height_bound {
                        t.add(&stats, w);
                    } else {
                        t.add(&stats.truncated(b), w);
                    }
                }
                acc
            },
        )
        .reduce(
            || vec![Tally::default(); bounds.len()],
            |a, b| a.into_iter().zip(b).map(|(x, y)| x.merge(y)).collect(),
        );
    Ok(tallies
        .into_iter()
        .zip(bounds)
        .map(|(t, &b)| t.into_report(n, b, opts))
        .collect())
}

/// Census over every form one by one, without the symmetry reduction.
/// Only sensible for tiny `N`; used to check `Weighting::Forms`.
pub fn run_census_unreduced(n: u64, cfg: &SearchConfig, include_singular: bool) -> Result<ExperimentReport> {
    cfg.validate()?;
    let curves: Vec<_> = enumerate_curves(n, false, !include_singular)?.collect();
    let tally = curves
        .par_iter()
        .fold(Tally::default, |mut t, c| {
            t.add(&search_points(&c.form, cfg), 1);
            t
        })
        .reduce(Tally::default, Tally::merge);
    let opts = CensusOptions { include_singular, weighting: Weighting::Forms };
    Ok(tally.into_report(n, cfg.height_bound, &opts))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BracketRow {
    pub n: u32,
    pub observed: u64,
    pub predicted: f64,
}

/// Observed points per height bracket against the main-term prediction.
/// Only brackets lying entirely below the search bound are listed.
pub fn height_histogram(report: &ExperimentReport) -> Result<Vec<BracketRow>> {
    let top = height_bracket(report.height_bound + 1);
    (0..top)
        .map(|n| {
            Ok(BracketRow {
                n,
                observed: report.bracket_counts.get(&n).copied().unwrap_or(0),
                predicted: expected_bracket_count(n, report.n, report.num_curves)?,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairRow {
    pub m: usize,
    pub observed_fraction: f64,
    pub predicted_fraction: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairProfile {
    pub rows: Vec<PairRow>,
    /// `exp` of the least-squares slope of `ln(observed_fraction)` against
    /// `m`, over the rows with `m >= 1` backed by at least
    /// [`ALPHA_MIN_CURVES`] curves.
    pub alpha: Option<f64>,
}

pub const ALPHA_MIN_CURVES: u64 = 20;

/// Height cutoff for the `(a:b)` product behind the predicted fractions.
const PAIR_PREDICTION_CUTOFF: u64 = 300;

pub fn pair_count_profile(report: &ExperimentReport) -> Result<PairProfile> {
    if report.num_curves == 0 {
        return Err(Error::Domain("empty census".into()));
    }
    let max_m = report.r_m_counts.keys().copied().max().unwrap_or(0);
    let predicted = predicted_pair_fractions(report.n, max_m, PAIR_PREDICTION_CUTOFF)?;
    let total = report.num_curves as f64;
    let rows: Vec<PairRow> = report
        .r_m_counts
        .iter()
        .map(|(&m, &count)| PairRow {
            m,
            observed_fraction: count as f64 / total,
            predicted_fraction: predicted[m],
        })
        .collect();
    let pts: Vec<(f64, f64)> = report
        .r_m_counts
        .iter()
        .filter(|(&m, &count)| m >= 1 && count >= ALPHA_MIN_CURVES)
        .map(|(&m, &count)| (m as f64, (count as f64 / total).ln()))
        .collect();
    let alpha = (pts.len() >= 2).then(|| least_squares_slope(&pts).exp());
    Ok(PairProfile { rows, alpha })
}

fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// One row of a table of curves with many points: the curve size, the
/// listed coefficients and the claimed number of points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordRow {
    #[serde(rename = "N")]
    pub n: u64,
    pub coeffs: [i64; 7],
    pub expected: u64,
}

const fn row(n: u64, coeffs: [i64; 7], expected: u64) -> RecordRow {
    RecordRow { n, coeffs, expected }
}

/// Curves with more point pairs than all smaller curves, each with the
/// number of points found up to height `2^17 - 1`.
pub const RECORD_TABLE: [RecordRow; 29] = [
    row(1, [1, -1, 0, 1, -1, 0, 1], 18),
    row(2, [1, 2, 0, -2, 2, 0, 1], 24),
    row(3, [1, -3, 2, 3, 0, 0, 1], 26),
    row(4, [4, 4, 0, -1, -4, 0, 1], 36),
    row(5, [4, 4, 0, -5, -4, 1, 1], 38),
    row(6, [1, 6, -1, -5, 0, -1, 1], 44),
    row(7, [4, -7, -5, 5, 1, 2, 1], 52),
    row(11, [9, 2, -11, -5, 3, 9, 9], 56),
    row(13, [9, -12, -4, 13, -4, 3, 4], 62),
    row(16, [4, 1, -16, -13, 16, 8, 1], 68),
    row(19, [1, -18, -19, 6, 11, 12, 16], 72),
    row(20, [4, 3, 20, 5, -3, -20, 16], 74),
    row(21, [4, 3, 19, -21, -19, 14, 1], 78),
    row(24, [9, 24, -10, -20, 2, -12, 16], 80),
    row(36, [9, 3, -35, 5, 27, -20, 36], 82),
    row(42, [4, -13, 23, 7, -42, 0, 25], 88),
    row(47, [9, -21, 23, -7, -47, 28, 16], 98),
    row(54, [9, -54, 3, -2, -36, 32, 49], 104),
    row(66, [25, -30, -37, -46, 66, 34, 4], 106),
    row(67, [1, -46, 67, 38, 32, -32, 4], 114),
    row(70, [49, -60, -28, -70, -9, 70, 49], 118),
    row(72, [1, 2, 63, -38, -72, 36, 9], 120),
    row(110, [25, -32, 80, 110, -105, -78, 49], 124),
    row(117, [1, -26, 87, 83, -43, -117, 64], 126),
    row(125, [49, 42, -85, -125, 77, 69, 9], 130),
    row(132, [81, -132, -16, 71, 76, -71, 16], 138),
    row(143, [81, -120, -28, -54, 143, 90, 9], 140),
    row(184, [1, 98, -59, -184, 161, 46, 1], 142),
    row(191, [4, -4, 156, -191, -159, 171, 144], 146),
];

/// Default search bound for [`verify_record_table`].
pub const RECORD_HEIGHT_BOUND: u64 = (1 << 17) - 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    /// The count matches.
    Exact,
    /// Fewer points than listed; the missing ones may lie above the bound.
    Short,
    /// More points than listed.
    Excess,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecordCheck {
    pub row: RecordRow,
    /// Every variant searched, in order, with its point count. The listed
    /// order comes first; the other symmetry variants are only tried when
    /// it does not match.
    pub tried: Vec<(SexticForm, u64)>,
    /// The variant whose count matched, if any.
    pub matched: Option<SexticForm>,
    pub found: u64,
    pub size_matches: bool,
    pub status: RowStatus,
    pub quotient: f64,
}

impl RecordCheck {
    pub fn passed(&self) -> bool {
        self.status == RowStatus::Exact && self.size_matches
    }
}

/// Searches every listed curve, reading the coefficients as `f0, ..., f6`.
/// When the count is off, the remaining symmetry variants are searched
/// too; reading the list in the other order is the reversal, one of them.
pub fn verify_record_table(rows: &[RecordRow], cfg: &SearchConfig) -> Result<Vec<RecordCheck>> {
    cfg.validate()?;
    rows.par_iter()
        .map(|r| {
            let form = SexticForm::new(r.coeffs);
            let mut tried = Vec::new();
            let mut matched = None;
            for v in form.symmetry_orbit() {
                if tried.iter().any(|(t, _)| *t == v) {
                    continue;
                }
                let count = search_points(&v, cfg).num_points as u64;
                tried.push((v, count));
                if count == r.expected {
                    matched = Some(v);
                    break;
                }
            }
            let found = match matched {
                Some(_) => r.expected,
                None => tried.iter().map(|t| t.1).max().unwrap_or(0),
            };
            let status = match found.cmp(&r.expected) {
                std::cmp::Ordering::Equal => RowStatus::Exact,
                std::cmp::Ordering::Less => RowStatus::Short,
                std::cmp::Ordering::Greater => RowStatus::Excess,
            };
            Ok(RecordCheck {
                row: r.clone(),
                tried,
                matched,
                found,
                size_matches: form.size() == r.n,
                status,
                quotient: found as f64 / ((2 * r.n + 1) as f64).log10(),
            })
        })
        .collect()
}

/// The 642-point curve, coefficients `f6, ..., f0`.
pub const ELKIES_642_DESC: [i64; 7] =
    [82342800, -470135160, 52485681, 2396040466, 567207969, -985905640, 247747600];

/// x-coordinates of the points of height above `10^5` on the 642-point
/// curve, as `(a, b)` for `x = a/b`.
pub const ELKIES_642_LARGE_X: [(i64, i64); 44] = [
    (15121, 102391),
    (130190, 93793),
    (-141665, 55186),
    (39628, 153245),
    (30145, 169333),
    (-140047, 169734),
    (61203, 171017),
    (148451, 182305),
    (86648, 195399),
    (-199301, 54169),
    (11795, 225434),
    (-84639, 266663),
    (283567, 143436),
    (-291415, 171792),
    (-314333, 195860),
    (289902, 322289),
    (405523, 327188),
    (-342731, 523857),
    (24960, 630287),
    (-665281, 83977),
    (-688283, 82436),
    (199504, 771597),
    (233305, 795263),
    (-799843, 183558),
    (-867313, 1008993),
    (1142044, 157607),
    (1399240, 322953),
    (-1418023, 463891),
    (1584712, 90191),
    (726821, 2137953),
    (2224780, 807321),
    (-2849969, 629081),
    (-3198658, 3291555),
    (675911, 3302518),
    (-5666740, 2779443),
    (1526015, 5872096),
    (13402625, 4101272),
    (12027943, 13799424),
    (-71658936, 86391295),
    (148596731, 35675865),
    (58018579, 158830656),
    (208346440, 37486601),
    (-1455780835, 761431834),
    (-3898675687, 2462651894),
];

/// The curve with the best known ratio of points to `log10(2N + 1)`,
/// coefficients `f6, ..., f0`.
pub const RATIO_452_DESC: [i64; 7] = [37665, -220086, 212355, 268462, -209622, -69166, 49036];

pub const BIG_CURVE_HEIGHT_BOUND: u64 = 100_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ListedCoordinate {
    pub x: PrimitiveXCoord,
    pub height: u64,
    pub is_square: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BigCurveSummary {
    pub form: SexticForm,
    pub size: u64,
    pub search_bound: u64,
    pub searched_points: u64,
    /// Points from the search together with the listed ones.
    pub total_points: u64,
    pub quotient: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BigCurveReport {
    pub listed: Vec<ListedCoordinate>,
    pub elkies: BigCurveSummary,
    pub ratio_curve: Option<BigCurveSummary>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BigCurveConfig {
    pub elkies_bound: u64,
    /// `None` skips the search on the second curve.
    pub ratio_bound: Option<u64>,
}

impl Default for BigCurveConfig {
    fn default() -> Self {
        BigCurveConfig {
            elkies_bound: BIG_CURVE_HEIGHT_BOUND,
            ratio_bound: Some(BIG_CURVE_HEIGHT_BOUND),
        }
    }
}

impl BigCurveReport {
    pub fn all_listed_square(&self) -> bool {
        self.listed.iter().all(|l| l.is_square)
    }
}

fn summarize(form: SexticForm, stats: &CurveStats, extra: &[RationalPoint]) -> BigCurveSummary {
    let mut pts = stats.points.clone();
    pts.extend_from_slice(extra);
    let merged = CurveStats::from_points(form, pts, stats.search_height_bound);
    let size = form.size();
    BigCurveSummary {
        form,
        size,
        search_bound: stats.search_height_bound,
        searched_points: stats.num_points as u64,
        total_points: merged.num_points as u64,
        quotient: merged.num_points as f64 / ((2 * size + 1) as f64).log10(),
    }
}

/// Points on `form` above the listed x-coordinates, with a flag per
/// coordinate telling whether `F(a, b)` is a square.
pub fn check_listed_coordinates(
    form: &SexticForm,
    xs: &[(i64, i64)],
) -> Result<(Vec<ListedCoordinate>, Vec<RationalPoint>)> {
    let mut listed = Vec::with_capacity(xs.len());
    let mut points = Vec::new();
    for &(a, b) in xs {
        let x = PrimitiveXCoord::new(a, b)?;
        let found = push_pair(Vec::new(), x, &form.evaluate(&x));
        let is_square = !found.is_empty();
        points.extend(found);
        listed.push(ListedCoordinate { x, height: x.height(), is_square });
    }
    Ok((listed, points))
}

/// Checks the listed large points on the 642-point curve and runs the
/// bounded searches.
pub fn verify_big_curves(cfg: &BigCurveConfig) -> Result<BigCurveReport> {
    let elkies = SexticForm::from_descending(ELKIES_642_DESC);
    let (listed, extra) = check_listed_coordinates(&elkies, &ELKIES_642_LARGE_X)?;
    let shards = rayon::current_num_threads() * 4;
    let run = |form: &SexticForm, bound: u64| -> Result<CurveStats> {
        let sc = SearchConfig::with_height_bound(bound);
        sc.validate()?;
        Ok(search_points_sharded(form, &sc, shards))
    };
    let es = run(&elkies, cfg.elkies_bound)?;
    let ratio_curve = match cfg.ratio_bound {
        Some(bound) => {
            let form = SexticForm::from_descending(RATIO_452_DESC);
            Some(summarize(form, &run(&form, bound)?, &[]))
        }
        None => None,
    };
    Ok(BigCurveReport {
        listed,
        elkies: summarize(elkies, &es, &extra),
        ratio_curve,
    })
}

/// Flat `N,metric,key,value` rows for a census report.
pub fn report_csv(report: &ExperimentReport) -> Result<String> {
    let mut out = String::from("N,metric,key,value\n");
    let n = report.n;
    let mut line = |metric: &str, key: &str, value: String| {
        let _ = writeln!(out, "{n},{metric},{key},{value}");
    };
    line("height_bound", "", report.height_bound.to_string());
    line("weighting", "", report.weighting.to_string());
    line("num_curves", "", report.num_curves.to_string());
    line("total_points", "", report.total_points.to_string());
    line("avg_points", "", format!("{:.17}", report.avg_points));
    line("avg_times_sqrtN", "", format!("{:.17}", report.avg_times_sqrt_n));
    line("max_point_height", "", report.max_point_height.to_string());
    line("lambda_N", "", format!("{:.17}", report.lambda_n));
    for (k, v) in &report.bracket_counts {
        line("bracket_count", &k.to_string(), v.to_string());
    }
    for (k, v) in &report.r_m_counts {
        line("r_m_count", &k.to_string(), v.to_string());
    }
    for row in height_histogram(report)? {
        line("bracket_predicted", &row.n.to_string(), format!("{:.17}", row.predicted));
    }
    for (i, (form, pts)) in report.record_curves.iter().enumerate() {
        line("record_curve", &i.to_string(), format!("\"{form}\""));
        line("record_points", &i.to_string(), pts.to_string());
    }
    Ok(out)
}

/// Whether `form` is one the census would count.
pub fn census_includes(form: &SexticForm, include_singular: bool) -> bool {
    !form.is_zero()
        && (include_singular || is_squarefree_form(form).map(|s| s.is_squarefree()).unwrap_or(false))
}
