//! Acceptance checks, one line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so the verdict lines always
//! reach the terminal. The N = 2 census at height 2^15 dominates the
//! runtime. Set `GENUS2_EXTENDED=1` to add the N = 3 census, which takes
//! hours on one core.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::OnceLock;
use std::time::Instant;

use genus2::curvespace::enumerate_curves;
use genus2::experiments::{
    run_census, run_census_multi, verify_big_curves, verify_record_table, BigCurveConfig, CensusOptions,
    ExperimentReport, RecordRow, RowStatus, RECORD_HEIGHT_BOUND, RECORD_TABLE,
};
use genus2::heuristics::{
    expected_points_at_infinity_exact, gamma_ab, gamma_h, gamma_m_all, gamma_total,
    lambda_for_probability, lattice_geometry, lemma_int, phi, phi_derivative,
    phi_series_branch, phi_series_coefficients, phi_sum_branch, plus_power_integral,
    tail_constant_c, HeuristicConfig, DEFAULT_SERIES_TERMS,
};
use genus2::hunt::{chord_extend, count_points_mod_p, ChordConfig};
use genus2::pointsearch::{naive_search, search_points, SearchConfig};
use genus2::{integer_sqrt_if_square, PrimitiveXCoord, RationalPoint, SexticForm};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn close(x: f64, target: f64, tol: f64, what: &str) -> Result<(), String> {
    ensure((x - target).abs() <= tol, || format!("{what} = {x}, expected {target} +- {tol}"))
}

fn run(id: u32, name: &str, f: impl FnOnce() -> Check) -> bool {
    let t = Instant::now();
    let outcome = match catch_unwind(AssertUnwindSafe(f)) {
        Ok(r) => r,
        Err(p) => Err(p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panicked".into())),
    };
    let secs = t.elapsed().as_secs_f64();
    match &outcome {
        Ok(detail) => println!("criterion {id:>2} [{name}]: PASS ({detail}) [{secs:.1}s]"),
        Err(why) => println!("criterion {id:>2} [{name}]: FAIL ({why}) [{secs:.1}s]"),
    }
    outcome.is_ok()
}

const H14: u64 = (1 << 14) - 1;
const H15: u64 = (1 << 15) - 1;

fn census_n1() -> &'static ExperimentReport {
    static R: OnceLock<ExperimentReport> = OnceLock::new();
    R.get_or_init(|| run_census(1, &SearchConfig::with_height_bound(H14), &CensusOptions::default()).expect("census N=1"))
}

/// The N = 2 census at `2^15 - 1` and its truncation at `2^14 - 1`.
fn census_n2() -> &'static (ExperimentReport, ExperimentReport) {
    static R: OnceLock<(ExperimentReport, ExperimentReport)> = OnceLock::new();
    R.get_or_init(|| {
        let mut v = run_census_multi(2, &SearchConfig::with_height_bound(H15), &CensusOptions::default(), &[H15, H14])
            .expect("census N=2");
        let r14 = v.pop().unwrap();
        let r15 = v.pop().unwrap();
        (r15, r14)
    })
}

fn constants() -> Check {
    let cfg = HeuristicConfig::default();
    let p1 = phi(1.0);
    // (7^(13/2) - 7*5^(13/2) + 21*3^(13/2) - 35) / 135135
    let closed = (7f64.powf(6.5) - 7.0 * 5f64.powf(6.5) + 21.0 * 3f64.powf(6.5) - 35.0) / 135135.0;
    close(p1, 0.689540287634369059265, 1e-15, "phi(1)")?;
    close(p1, closed, 1e-13, "phi(1) vs closed form in f64")?;
    let g = gamma_total(&cfg).map_err(|e| e.to_string())?;
    close(g, 4.79991101188445, 1e-6, "gamma")?;
    let c = tail_constant_c(&cfg).map_err(|e| e.to_string())?;
    close(c, 2.282536722599, 1e-6, "c")?;
    Ok(format!("phi(1)={p1:.17} gamma={g:.12} c={c:.12}"))
}

fn phi_suite() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let t = rng.gen_range(-4.0f64..4.0).exp();
        let err = (phi(1.0 / t) - t.powi(3) * phi(t)).abs();
        worst = worst.max(err);
    }
    ensure(worst <= 1e-12, || format!("functional equation off by {worst:e}"))?;
    let mut branch = 0.0f64;
    for i in 0..=200 {
        let t = 0.3 + 0.2 * i as f64 / 200.0;
        let s = phi_series_branch(t, DEFAULT_SERIES_TERMS).map_err(|e| e.to_string())?;
        let d = phi_sum_branch(t).map_err(|e| e.to_string())?;
        branch = branch.max((s - d).abs());
    }
    ensure(branch <= 1e-12, || format!("branches differ by {branch:e}"))?;
    let c = phi_series_coefficients(10);
    let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    let printed = [(0, r(1, 1)), (2, r(-1, 24)), (4, r(-19, 384)), (6, r(-217, 3072)), (8, r(-9583, 98304)), (10, r(-40125, 262144))];
    for (k, v) in &printed {
        ensure(&c[*k] == v, || format!("coefficient of t^{k} is {}, expected {v}", c[*k]))?;
    }
    let d1 = phi_derivative(1, 1.0).map_err(|e| e.to_string())?;
    close(d1, -1.5 * phi(1.0), 1e-10, "phi'(1)")?;
    Ok(format!("functional eq {worst:.1e}, branches {branch:.1e}, 6 coefficients exact"))
}

/// Independent value of the cube integral: the last coordinate is
/// integrated by hand, the others by composite Gauss-Legendre.
fn cube_quadrature(a: &[f64], c: f64, r: f64) -> f64 {
    let (last, rest) = a.split_last().unwrap();
    let inner = |s: f64| {
        let up = (s + last).max(0.0).powf(r + 1.0);
        let lo = (s - last).max(0.0).powf(r + 1.0);
        (up - lo) / ((r + 1.0) * last)
    };
    const PANELS: usize = 40;
    // 5-point rule on [-1, 1]
    let nodes = [0.0, 0.5384693101056831, -0.5384693101056831, 0.906179845938664, -0.906179845938664];
    let weights = [0.5688888888888889, 0.47862867049936647, 0.47862867049936647, 0.23692688505618908, 0.23692688505618908];
    let mut grid = Vec::new();
    let h = 2.0 / PANELS as f64;
    for p in 0..PANELS {
        let mid = -1.0 + h * (p as f64 + 0.5);
        for (x, w) in nodes.iter().zip(&weights) {
            grid.push((mid + x * h / 2.0, w * h / 2.0));
        }
    }
    fn rec(rest: &[f64], s: f64, grid: &[(f64, f64)], inner: &dyn Fn(f64) -> f64) -> f64 {
        match rest.split_first() {
            None => inner(s),
            Some((ai, tail)) => grid.iter().map(|(x, w)| w * rec(tail, s + ai * x, grid, inner)).sum(),
        }
    }
    rec(rest, c, &grid, &inner)
}

fn lemma_int_checks() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst_q = 0.0f64;
    for _ in 0..100 {
        let m = rng.gen_range(1..=4);
        let a: Vec<f64> = (0..m).map(|_| rng.gen_range(0.2..2.0)).collect();
        let total: f64 = a.iter().sum();
        let c = rng.gen_range(-0.5 * total..total);
        let r = rng.gen_range(0.0..3.0);
        let closed = plus_power_integral(&a, c, r).map_err(|e| e.to_string())?;
        let quad = cube_quadrature(&a, c, r);
        let rel = ((closed - quad) / quad).abs();
        worst_q = worst_q.max(rel);
        ensure(rel <= 1e-3, || format!("a={a:?} c={c} r={r}: {closed} vs quadrature {quad}"))?;
    }
    let mut worst_l = 0.0f64;
    for _ in 0..100 {
        let (a, b) = loop {
            let a = rng.gen_range(-500i64..=500);
            let b = rng.gen_range(1i64..=500);
            if a != 0 && num_integer::gcd(a, b) == 1 {
                break (a, b);
            }
        };
        let x = PrimitiveXCoord::new(a, b).unwrap();
        let li = lemma_int(&x).map_err(|e| e.to_string())?;
        let target = 128.0 * gamma_ab(&x);
        let rel = ((li - target) / target).abs();
        worst_l = worst_l.max(rel);
        ensure(rel <= 1e-10, || format!("{x}: lemma {li} vs 2^7 gamma {target}"))?;
    }
    Ok(format!("quadrature rel err <= {worst_q:.1e}, lemma rel err <= {worst_l:.1e}"))
}

fn lattice_checks() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..1000 {
        let (a, b) = loop {
            let a = rng.gen_range(-3000i64..=3000);
            let b = rng.gen_range(0i64..=3000);
            if (a, b) != (0, 0) && num_integer::gcd(a, b) == 1 && (b > 0 || a == 1) {
                break (a, b);
            }
        };
        let x = PrimitiveXCoord::new(a, b).unwrap();
        let g = lattice_geometry(&x);
        let (ba, bb) = (BigInt::from(a), BigInt::from(b));
        let closed: BigInt = (0..=6u32).map(|k| ba.pow(2 * k) * bb.pow(12 - 2 * k)).sum();
        ensure(g.gram_determinant() == closed, || format!("{x}: det(Gram) != closed form"))?;
        let h = x.height() as f64;
        ensure(g.diameter <= 22f64.sqrt() * h * (1.0 + 1e-12), || format!("{x}: diameter {} too large", g.diameter))?;
        let hb = BigInt::from(x.height());
        let h12 = hb.pow(12);
        ensure(h12 <= closed && closed <= &h12 * 7, || format!("{x}: covolume outside [H^6, sqrt7 H^6]"))?;
        let d6 = g.covolume / h.powi(6);
        ensure((1.0 - 1e-12..=7f64.sqrt() + 1e-12).contains(&d6), || format!("{x}: Delta/H^6 = {d6}"))?;
    }
    Ok("1000 random (a:b)".into())
}

fn infinity_counts() -> Check {
    let mut details = Vec::new();
    for n in [1i64, 2] {
        let side = (2 * n + 1) as usize;
        let mut count = 0u64;
        for idx in 0..side.pow(7) {
            let mut c = [0i64; 7];
            let mut r = idx;
            for cj in c.iter_mut() {
                *cj = (r % side) as i64 - n;
                r /= side;
            }
            let stats = naive_search(&SexticForm::new(c), 1);
            count += stats.points.iter().filter(|p| p.x.is_infinity()).count() as u64;
        }
        let root = (n as f64).sqrt().floor() as u64;
        let expected = (2 * root + 1) * (side as u64).pow(6);
        ensure(count == expected, || format!("N={n}: {count} points at infinity, expected {expected}"))?;
        let ratio = expected_points_at_infinity_exact(n as u64).map_err(|e| e.to_string())?;
        ensure(
            *ratio.numer() * (side as u64).pow(7) == count * *ratio.denom(),
            || format!("N={n}: per-curve ratio {ratio} disagrees"),
        )?;
        details.push(format!("N={n}: {count}"));
    }
    Ok(details.join(", "))
}

fn census_averages() -> Check {
    let r1 = census_n1();
    let (_, r2) = census_n2();
    close(r1.avg_points, 3.94, 0.02, "avg N=1")?;
    close(r2.avg_points, 2.70, 0.02, "avg N=2")?;
    close(r1.avg_times_sqrt_n, 3.94, 0.05, "avg*sqrt(N) N=1")?;
    close(r2.avg_times_sqrt_n, 3.82, 0.05, "avg*sqrt(N) N=2")?;
    let mut detail = format!(
        "one curve per symmetry class; N=1 avg {:.4} over {} curves; N=2 avg {:.4} (x sqrt2 = {:.4}) over {} curves",
        r1.avg_points, r1.num_curves, r2.avg_points, r2.avg_times_sqrt_n, r2.num_curves
    );
    if std::env::var("GENUS2_EXTENDED").is_ok() {
        let r3 = run_census(3, &SearchConfig::with_height_bound(H14), &CensusOptions::default()).map_err(|e| e.to_string())?;
        close(r3.avg_points, 2.19, 0.02, "avg N=3")?;
        detail.push_str(&format!("; N=3 avg {:.4}", r3.avg_points));
    } else {
        detail.push_str("; N=3 not run (set GENUS2_EXTENDED=1)");
    }
    Ok(detail)
}

fn max_heights() -> Check {
    let r1 = census_n1();
    let (r2, _) = census_n2();
    ensure(r1.max_point_height == 145, || format!("N=1 max height {}", r1.max_point_height))?;
    ensure(r2.max_point_height == 10711, || format!("N=2 max height {}", r2.max_point_height))?;
    close(r1.lambda_n, 145.00, 145.00 * 0.005, "lambda(1)")?;
    close(r2.lambda_n, 118.34, 118.34 * 0.005, "lambda(2)")?;
    Ok(format!(
        "N=1: 145, lambda {:.2}; N=2: 10711, lambda {:.2}",
        r1.lambda_n, r2.lambda_n
    ))
}

fn record_point() -> Check {
    let form = SexticForm::from_descending([1, 0, -3, -1, 3, 0, 3]);
    let x = PrimitiveXCoord::new(-58189, 209040).map_err(|e| e.to_string())?;
    let value = form.evaluate(&x);
    let y = integer_sqrt_if_square(&value).ok_or("F(-58189, 209040) is not a square")?;
    let p = RationalPoint::new(x, BigInt::from(y.clone()));
    ensure(p.lies_on(&form), || "point not on curve".into())?;
    Ok(format!("y = {y}"))
}

fn record_rows() -> Check {
    let rows: Vec<RecordRow> = RECORD_TABLE.iter().filter(|r| [1, 2, 3, 7].contains(&r.n)).cloned().collect();
    let checks = verify_record_table(&rows, &SearchConfig::with_height_bound(RECORD_HEIGHT_BOUND))
        .map_err(|e| e.to_string())?;
    let mut parts = Vec::new();
    for c in &checks {
        ensure(c.status == RowStatus::Exact, || {
            format!("N={}: found {} expected {}", c.row.n, c.found, c.row.expected)
        })?;
        parts.push(format!("N={}: {}", c.row.n, c.found));
    }
    Ok(parts.join(", "))
}

fn elkies_curve() -> Check {
    let report = verify_big_curves(&BigCurveConfig { elkies_bound: 100_000, ratio_bound: None })
        .map_err(|e| e.to_string())?;
    ensure(report.listed.len() == 44, || format!("{} listed coordinates", report.listed.len()))?;
    let bad: Vec<String> = report.listed.iter().filter(|l| !l.is_square).map(|l| l.x.to_string()).collect();
    ensure(bad.is_empty(), || format!("not squares: {bad:?}"))?;
    let e = &report.elkies;
    ensure(e.total_points >= 642, || format!("only {} points", e.total_points))?;
    Ok(format!("44/44 squares, {} searched + 88 listed = {}", e.searched_points, e.total_points))
}

fn pair_constants() -> Check {
    let g = gamma_m_all(4, 1000).map_err(|e| e.to_string())?;
    let g1000 = gamma_h(1000, &HeuristicConfig::default()).map_err(|e| e.to_string())?;
    close(g[1], g1000 / 2.0, 1e-9, "gamma^(1) vs gamma_1000/2")?;
    for (m, target) in [(1, 2.399), (2, 2.499), (3, 1.504), (4, 0.591)] {
        close(g[m], target, 0.01, &format!("gamma^({m})"))?;
    }
    Ok(format!("{:.4}, {:.4}, {:.4}, {:.4}", g[1], g[2], g[3], g[4]))
}

fn poisson() -> Check {
    let l5 = lambda_for_probability(0.5).map_err(|e| e.to_string())?;
    let l8 = lambda_for_probability(0.8).map_err(|e| e.to_string())?;
    close(l5, 53.0, 1.0, "lambda(0.5)")?;
    close(l8, 164.0, 1.0, "lambda(0.8)")?;
    Ok(format!("lambda(0.5) = {l5:.2}, lambda(0.8) = {l8:.2}"))
}

fn brute_mod_p(form: &SexticForm, p: i64) -> u64 {
    let mut n = 0;
    for x in 0..p {
        let v = form.coeffs().iter().rev().fold(0i64, |acc, &f| (acc * x + f).rem_euclid(p));
        n += (0..p).filter(|y| y * y % p == v).count() as u64;
    }
    let top = form.coeff(6).rem_euclid(p);
    n + (0..p).filter(|y| y * y % p == top).count() as u64
}

fn oracles() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut curves = 0;
    while curves < 1000 {
        let f = SexticForm::new(std::array::from_fn(|_| rng.gen_range(-10..=10)));
        if f.is_zero() {
            continue;
        }
        let fast = search_points(&f, &SearchConfig::with_height_bound(200));
        let slow = naive_search(&f, 200);
        ensure(fast.points == slow.points, || format!("{f}: sieve {} vs naive {}", fast.num_points, slow.num_points))?;
        curves += 1;
    }
    // y = x^3 meets y^2 = x^6 - (x+2)(x+1)x(x-1)(x-2)(x-3) at x = -2..3
    let form = SexticForm::new([0, 12, -4, -15, 5, 3, 0]);
    let pts: Vec<RationalPoint> = (-2i64..=3)
        .map(|x| RationalPoint::new(PrimitiveXCoord::new(x, 1).unwrap(), BigInt::from(x.pow(3))))
        .collect();
    for skip in 0..6 {
        let five: Vec<RationalPoint> = pts.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, p)| p.clone()).collect();
        let report = chord_extend(&form, &five, &ChordConfig::default()).map_err(|e| e.to_string())?;
        ensure(report.new_points.contains(&pts[skip]), || format!("sixth point {} not recovered", pts[skip]))?;
        ensure(report.new_points.iter().all(|p| p.lies_on(&form)), || "chord point off the curve".into())?;
    }
    for _ in 0..500 {
        let f = SexticForm::new(std::array::from_fn(|_| rng.gen_range(-100..=100)));
        for p in [3u64, 5, 7, 11, 13] {
            let fast = count_points_mod_p(&f, p).map_err(|e| e.to_string())?;
            ensure(fast == brute_mod_p(&f, p as i64), || format!("{f} mod {p}"))?;
        }
    }
    Ok("1000 curves sieve == naive; sixth point recovered from each 5-subset; #C(F_p) for p <= 13".into())
}

fn performance() -> Check {
    let curves: Vec<_> = enumerate_curves(2, true, true).map_err(|e| e.to_string())?.step_by(10).collect();
    let cfg = SearchConfig::with_height_bound(H14);
    let t = Instant::now();
    for c in &curves {
        search_points(&c.form, &cfg);
    }
    let ms = t.elapsed().as_secs_f64() * 1e3 / curves.len() as f64;
    ensure(ms <= 50.0, || format!("{ms:.2} ms per curve"))?;
    Ok(format!("{ms:.2} ms per curve over {} N=2 curves, one thread", curves.len()))
}

fn main() {
    // The timing criterion is per curve on one core; keep everything else
    // on the same footing.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(1).build_global();
    let results = [
        run(1, "constants", constants),
        run(2, "phi properties", phi_suite),
        run(3, "cube integrals", lemma_int_checks),
        run(4, "lattice formulas", lattice_checks),
        run(5, "points at infinity", infinity_counts),
        run(6, "census averages", census_averages),
        run(7, "max point heights", max_heights),
        run(8, "record point", record_point),
        run(9, "record table rows", record_rows),
        run(10, "642-point curve", elkies_curve),
        run(11, "pair-count constants", pair_constants),
        run(12, "Poisson model", poisson),
        run(13, "oracle equivalence", oracles),
        run(14, "sieve performance", performance),
    ];
    let passed = results.iter().filter(|&&ok| ok).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
