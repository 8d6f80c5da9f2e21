//! Command-line front end. The binary only calls [`run`].

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::curvespace::{count_bad, count_orbits, count_reducible};
use crate::error::{Error, Result};
use crate::experiments::{
    height_histogram, pair_count_profile, report_csv, run_census_multi, verify_big_curves, CensusOptions, Weighting,
    verify_record_table, BigCurveConfig, RecordRow, RowStatus, BIG_CURVE_HEIGHT_BOUND,
    RECORD_HEIGHT_BOUND, RECORD_TABLE,
};
use crate::form::{PrimitiveXCoord, RationalPoint, SexticForm};
use crate::heuristics::{
    gamma_h, gamma_m_all, gamma_total, lambda_for_probability, phi, tail_constant_c,
    HeuristicConfig,
};
use crate::hunt::{chord_extend, run_hunt, ChordConfig, HuntConfig};
use crate::pointsearch::{search_points_sharded, SearchConfig, DEFAULT_SIEVE_PRIMES};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub const THREADS_ENV: &str = "GENUS2_THREADS";

#[derive(Debug, Parser, Serialize)]
#[command(name = "genus2", version, about = "Rational points on genus-2 curves", args_override_self = true)]
pub struct Cli {
    /// Worker threads; defaults to $GENUS2_THREADS, then to all cores.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// File of `key = value` lines that override command-line flags.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Seed recorded in run manifests.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
pub enum Command {
    /// Print the heuristic constants.
    Constants(ConstantsArgs),
    /// Search one curve for points.
    Search(SearchArgs),
    /// Count and classify the forms of a given size.
    Scan(ScanArgs),
    /// Point census over all curves of a given size.
    Census(CensusArgs),
    /// Check the table of curves with many points.
    VerifyRecords(VerifyRecordsArgs),
    /// Check the two large record curves.
    VerifyBig(VerifyBigArgs),
    /// Constrained search for curves with many points.
    Hunt(HuntArgs),
    /// Derive new points from known ones with cubics through five points.
    Chords(ChordsArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Constants(_) => "constants",
            Command::Search(_) => "search",
            Command::Scan(_) => "scan",
            Command::Census(_) => "census",
            Command::VerifyRecords(_) => "verify-records",
            Command::VerifyBig(_) => "verify-big",
            Command::Hunt(_) => "hunt",
            Command::Chords(_) => "chords",
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct ConstantsArgs {
    #[arg(long, default_value_t = HeuristicConfig::default().series_terms)]
    pub series_terms: usize,
    #[arg(long, default_value_t = HeuristicConfig::default().farey_cutoff)]
    pub farey_cutoff: u64,
    #[arg(long, default_value_t = HeuristicConfig::default().em_cutoff)]
    pub em_cutoff: u64,
    #[arg(long, default_value_t = HeuristicConfig::default().quadrature_points)]
    pub quadrature_points: usize,
    #[arg(long, default_value_t = HeuristicConfig::default().working_precision_bits)]
    pub working_precision_bits: u32,
    /// Height cutoff for the pair-count constants.
    #[arg(long, default_value_t = 1000)]
    pub pair_cutoff: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct SearchArgs {
    /// Coefficients `f0,...,f6`.
    #[arg(long, allow_hyphen_values = true)]
    pub curve: String,
    #[arg(long, default_value_t = (1 << 14) - 1)]
    pub height_bound: u64,
    /// Test every coprime pair instead of sieving.
    #[arg(long)]
    pub no_sieve: bool,
    /// Comma-separated odd sieve primes.
    #[arg(long)]
    pub primes: Option<String>,
}

#[derive(Debug, Args, Serialize)]
pub struct ScanArgs {
    #[arg(long = "N")]
    pub n: u64,
    /// Also count singular and reducible forms.
    #[arg(long)]
    pub classify: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct CensusArgs {
    #[arg(long = "N")]
    pub n: u64,
    #[arg(long, default_value_t = (1 << 14) - 1)]
    pub height_bound: u64,
    /// Extra, smaller bounds reported from the same search.
    #[arg(long, value_delimiter = ',')]
    pub also_bounds: Vec<u64>,
    /// Count forms that are not squarefree too.
    #[arg(long)]
    pub include_singular: bool,
    /// `orbits` counts each symmetry class once, `forms` counts every form.
    #[arg(long, default_value_t = Weighting::Orbits)]
    pub weighting: Weighting,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyRecordsArgs {
    #[arg(long, default_value_t = RECORD_HEIGHT_BOUND)]
    pub height_bound: u64,
    /// Only the rows with these sizes.
    #[arg(long = "N", value_delimiter = ',')]
    pub sizes: Vec<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyBigArgs {
    #[arg(long, default_value_t = BIG_CURVE_HEIGHT_BOUND)]
    pub height_bound: u64,
    /// Skip the search on the second curve.
    #[arg(long)]
    pub skip_ratio_curve: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct HuntArgs {
    #[arg(long, default_value_t = 10)]
    pub n_max: u64,
    /// x-coordinates where F must be a square, e.g. `inf,0,1,-1,2,-2`.
    #[arg(long, default_value = "inf,0,1,-1", allow_hyphen_values = true)]
    pub require_x: String,
    #[arg(long, default_value_t = 200)]
    pub fp_bound: u32,
    #[arg(long, default_value_t = 1.0)]
    pub fp_threshold: f64,
    /// `bound:min_points` pairs, ascending.
    #[arg(long, default_value = "2047:24,16383:30,131071:0")]
    pub stages: String,
    #[arg(long)]
    pub out: PathBuf,
    /// Continue an interrupted run.
    #[arg(long)]
    pub resume: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct ChordsArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub curve: String,
    /// File with one point `a/b : y` per line.
    #[arg(long, conflicts_with = "search_bound")]
    pub points: Option<PathBuf>,
    /// Take the known points from a search up to this height instead.
    #[arg(long)]
    pub search_bound: Option<u64>,
    #[arg(long, default_value_t = ChordConfig::default().max_subsets)]
    pub max_subsets: u64,
}

/// What was run, with which settings. Written next to every output file as
/// `<file>.manifest.json` so that the outputs themselves stay free of
/// timestamps.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub config_snapshot: serde_json::Value,
    pub seed: u64,
    pub version: String,
    pub threads: usize,
    pub started_unix: f64,
    pub finished_unix: f64,
}

fn now_unix() -> f64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs_f64()).unwrap_or(0.0)
}

/// Formats a double with 17 significant digits.
pub fn sig17(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..=16).contains(&exp) {
        format!("{:.*}", (16 - exp).max(0) as usize, x)
    } else {
        format!("{:.16e}", x)
    }
}

/// Reads `key = value` lines (`#` starts a comment) into extra flags.
fn config_flags(path: &Path) -> Result<Vec<OsString>> {
    let text = fs::read_to_string(path)?;
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            Error::Config(format!("{}:{}: expected `key = value`", path.display(), lineno + 1))
        })?;
        let key = k.trim().replace('_', "-");
        let flag = if key == "N" { "--N".to_string() } else { format!("--{key}") };
        match v.trim() {
            "true" => out.push(flag.into()),
            "false" => {}
            v => {
                out.push(flag.into());
                out.push(v.into());
            }
        }
    }
    Ok(out)
}

fn find_config(args: &[OsString]) -> Option<PathBuf> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(PathBuf::from(p));
        }
    }
    None
}

/// Parses `argv`, runs the command and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let mut args: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    if let Some(path) = find_config(&args) {
        match config_flags(&path) {
            Ok(extra) => args.extend(extra),
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_USAGE;
            }
        }
    }
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let threads = cli
        .threads
        .or_else(|| std::env::var(THREADS_ENV).ok().and_then(|v| v.parse().ok()))
        .unwrap_or(0);
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start thread pool: {e}");
            return EXIT_USAGE;
        }
    };
    let mut manifest = RunManifest {
        subcommand: cli.command.name().to_string(),
        config_snapshot: serde_json::to_value(&cli.command).unwrap_or_default(),
        seed: cli.seed,
        version: env!("CARGO_PKG_VERSION").to_string(),
        threads: pool.current_num_threads(),
        started_unix: now_unix(),
        finished_unix: 0.0,
    };
    let mut out = std::io::stdout();
    match pool.install(|| dispatch(&cli.command, &mut manifest, &mut out)) {
        Ok(true) => EXIT_OK,
        Ok(false) => {
            let _ = writeln!(out, "VERIFICATION FAILED");
            EXIT_VERIFY_FAILED
        }
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e}");
            match e {
                Error::Parse(_) | Error::Domain(_) | Error::Config(_) => EXIT_USAGE,
                _ => EXIT_VERIFY_FAILED,
            }
        }
    }
}

fn manifest_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".manifest.json");
    path.with_file_name(name)
}

fn write_output(path: &Path, contents: &str, manifest: &mut RunManifest) -> Result<()> {
    fs::write(path, contents)?;
    manifest.finished_unix = now_unix();
    fs::write(manifest_path(path), serde_json::to_string_pretty(manifest)?)?;
    Ok(())
}

/// Returns `Ok(false)` when a verification did not pass.
fn dispatch(cmd: &Command, manifest: &mut RunManifest, out: &mut dyn Write) -> Result<bool> {
    match cmd {
        Command::Constants(a) => constants(a, out),
        Command::Search(a) => search(a, out),
        Command::Scan(a) => scan(a, out),
        Command::Census(a) => census(a, manifest, out),
        Command::VerifyRecords(a) => verify_records(a, manifest, out),
        Command::VerifyBig(a) => verify_big(a, manifest, out),
        Command::Hunt(a) => hunt(a, manifest, out),
        Command::Chords(a) => chords(a, out),
    }
}

fn constants(a: &ConstantsArgs, out: &mut dyn Write) -> Result<bool> {
    let cfg = HeuristicConfig {
        series_terms: a.series_terms,
        farey_cutoff: a.farey_cutoff,
        em_cutoff: a.em_cutoff,
        quadrature_points: a.quadrature_points,
        working_precision_bits: a.working_precision_bits,
    };
    cfg.validate()?;
    writeln!(out, "phi1={}", sig17(phi(1.0)))?;
    writeln!(out, "gamma={}", sig17(gamma_total(&cfg)?))?;
    writeln!(out, "c={}", sig17(tail_constant_c(&cfg)?))?;
    writeln!(out, "gamma_{}={}", cfg.farey_cutoff, sig17(gamma_h(cfg.farey_cutoff, &cfg)?))?;
    for p in [0.5, 0.8] {
        writeln!(out, "lambda({p})={}", sig17(lambda_for_probability(p)?))?;
    }
    let gm = gamma_m_all(4, a.pair_cutoff)?;
    for (m, g) in gm.iter().enumerate().skip(1) {
        writeln!(out, "gamma^({m})={}", sig17(*g))?;
    }
    Ok(true)
}

fn search_config(bound: u64, no_sieve: bool, primes: Option<&str>) -> Result<SearchConfig> {
    let sieve_primes = match primes {
        Some(list) => list
            .split(',')
            .map(|p| p.trim().parse().map_err(|_| Error::Parse(format!("bad prime `{p}`"))))
            .collect::<Result<Vec<u32>>>()?,
        None => DEFAULT_SIEVE_PRIMES.to_vec(),
    };
    let cfg = SearchConfig { height_bound: bound, sieve_primes, use_sieve: !no_sieve };
    cfg.validate()?;
    Ok(cfg)
}

fn search(a: &SearchArgs, out: &mut dyn Write) -> Result<bool> {
    let form: SexticForm = a.curve.parse()?;
    if form.is_zero() {
        return Err(Error::Domain("the zero form is not a curve".into()));
    }
    let cfg = search_config(a.height_bound, a.no_sieve, a.primes.as_deref())?;
    let stats = search_points_sharded(&form, &cfg, rayon::current_num_threads() * 4);
    for p in &stats.points {
        writeln!(out, "{p}")?;
    }
    let footer = json!({
        "curve": form.to_string(),
        "height_bound": stats.search_height_bound,
        "num_points": stats.num_points,
        "num_x_coords": stats.num_x_coords,
        "max_point_height": stats.max_point_height,
    });
    writeln!(out, "{footer}")?;
    Ok(true)
}

fn scan(a: &ScanArgs, out: &mut dyn Write) -> Result<bool> {
    if a.n == 0 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    let total = (2 * a.n as u128 + 1).pow(7);
    let mut v = json!({ "N": a.n, "total": total.to_string(), "canonical": count_orbits(a.n).to_string() });
    if a.classify {
        v["bad"] = json!(count_bad(a.n)?);
        if a.n <= 2 {
            v["reducible"] = json!(count_reducible(a.n)?);
        }
    }
    writeln!(out, "{v}")?;
    Ok(true)
}

fn census(a: &CensusArgs, manifest: &mut RunManifest, out: &mut dyn Write) -> Result<bool> {
    let cfg = SearchConfig::with_height_bound(a.height_bound);
    let mut bounds = vec![a.height_bound];
    bounds.extend(a.also_bounds.iter().copied().filter(|&b| b != a.height_bound));
    let opts = CensusOptions { include_singular: a.include_singular, weighting: a.weighting };
    let reports = run_census_multi(a.n, &cfg, &opts, &bounds)?;
    let mut docs = Vec::new();
    let mut csv = String::new();
    for (i, r) in reports.iter().enumerate() {
        docs.push(json!({
            "report": r,
            "histogram": height_histogram(r)?,
            "pair_profile": pair_count_profile(r)?,
        }));
        let part = report_csv(r)?;
        csv.push_str(if i == 0 { &part } else { part.split_once('\n').map(|p| p.1).unwrap_or("") });
    }
    let doc = if docs.len() == 1 { docs.remove(0) } else { json!(docs) };
    let text = serde_json::to_string_pretty(&doc)?;
    match &a.out {
        Some(path) => {
            write_output(path, &text, manifest)?;
            for r in &reports {
                writeln!(
                    out,
                    "N={} H={} curves={} avg_points={} avg_times_sqrtN={} max_height={}",
                    r.n,
                    r.height_bound,
                    r.num_curves,
                    sig17(r.avg_points),
                    sig17(r.avg_times_sqrt_n),
                    r.max_point_height
                )?;
            }
        }
        None => writeln!(out, "{text}")?,
    }
    if let Some(path) = &a.csv {
        write_output(path, &csv, manifest)?;
    }
    Ok(true)
}

fn verify_records(a: &VerifyRecordsArgs, manifest: &mut RunManifest, out: &mut dyn Write) -> Result<bool> {
    let rows: Vec<RecordRow> = RECORD_TABLE
        .iter()
        .filter(|r| a.sizes.is_empty() || a.sizes.contains(&r.n))
        .cloned()
        .collect();
    if rows.is_empty() {
        return Err(Error::Domain("no table rows match the requested sizes".into()));
    }
    let cfg = SearchConfig::with_height_bound(a.height_bound);
    let mut all_ok = true;
    let mut checks = Vec::new();
    // row by row so that partial results reach the output early
    for row in &rows {
        let check = verify_record_table(std::slice::from_ref(row), &cfg)?.remove(0);
        let verdict = match check.status {
            RowStatus::Exact => "ok",
            RowStatus::Short => "SHORT",
            RowStatus::Excess => "EXCESS",
        };
        all_ok &= check.passed();
        writeln!(
            out,
            "N={} expected={} found={} {} variants_tried={} quotient={:.2}",
            row.n,
            row.expected,
            check.found,
            verdict,
            check.tried.len(),
            check.quotient
        )?;
        out.flush()?;
        checks.push(check);
    }
    if let Some(path) = &a.out {
        write_output(path, &serde_json::to_string_pretty(&checks)?, manifest)?;
    }
    Ok(all_ok)
}

/// Points the 642-point curve is known to have.
const ELKIES_POINTS: u64 = 642;

fn verify_big(a: &VerifyBigArgs, manifest: &mut RunManifest, out: &mut dyn Write) -> Result<bool> {
    let cfg = BigCurveConfig {
        elkies_bound: a.height_bound,
        ratio_bound: (!a.skip_ratio_curve).then_some(a.height_bound),
    };
    let report = verify_big_curves(&cfg)?;
    for l in &report.listed {
        writeln!(out, "{} {}", l.x, if l.is_square { "square" } else { "NOT SQUARE" })?;
    }
    let e = &report.elkies;
    writeln!(
        out,
        "elkies: searched={} total={} quotient={:.2}",
        e.searched_points, e.total_points, e.quotient
    )?;
    if let Some(r) = &report.ratio_curve {
        writeln!(out, "ratio curve: searched={} quotient={:.2}", r.searched_points, r.quotient)?;
    }
    if let Some(path) = &a.out {
        write_output(path, &serde_json::to_string_pretty(&report)?, manifest)?;
    }
    Ok(report.all_listed_square() && e.total_points >= ELKIES_POINTS)
}

fn parse_stages(s: &str) -> Result<Vec<(u64, u64)>> {
    s.split(',')
        .map(|part| {
            let bad = || Error::Parse(format!("bad stage `{part}`, expected bound:min_points"));
            let (b, k) = part.trim().split_once(':').ok_or_else(bad)?;
            Ok((b.trim().parse().map_err(|_| bad())?, k.trim().parse().map_err(|_| bad())?))
        })
        .collect()
}

fn hunt(a: &HuntArgs, manifest: &mut RunManifest, out: &mut dyn Write) -> Result<bool> {
    let cfg = HuntConfig {
        n_max: a.n_max,
        required_square_xs: a
            .require_x
            .split(',')
            .map(str::parse)
            .collect::<Result<Vec<PrimitiveXCoord>>>()?,
        fp_bound: a.fp_bound,
        fp_threshold: a.fp_threshold,
        stages: parse_stages(&a.stages)?,
    };
    cfg.validate()?;
    let summary = run_hunt(&cfg, &a.out, a.resume)?;
    manifest.finished_unix = now_unix();
    fs::write(manifest_path(&a.out), serde_json::to_string_pretty(manifest)?)?;
    writeln!(out, "{}", serde_json::to_string(&summary)?)?;
    Ok(true)
}

fn chords(a: &ChordsArgs, out: &mut dyn Write) -> Result<bool> {
    let form: SexticForm = a.curve.parse()?;
    let known: Vec<RationalPoint> = match (&a.points, a.search_bound) {
        (Some(path), _) => fs::read_to_string(path)?
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('{'))
            .map(str::parse)
            .collect::<Result<_>>()?,
        (None, Some(h)) => {
            search_points_sharded(&form, &search_config(h, false, None)?, rayon::current_num_threads()).points
        }
        (None, None) => return Err(Error::Config("give --points or --search-bound".into())),
    };
    let report = chord_extend(&form, &known, &ChordConfig { max_subsets: a.max_subsets })?;
    for p in &report.new_points {
        writeln!(out, "{p}")?;
    }
    let footer: BTreeMap<&str, serde_json::Value> = [
        ("known", json!(known.len())),
        ("new", json!(report.new_points.len())),
        ("subsets_examined", json!(report.subsets_examined)),
        ("cubics_found", json!(report.cubics_found)),
        ("degenerate", json!(report.degenerate)),
        ("truncated", json!(report.truncated)),
    ]
    .into_iter()
    .collect();
    writeln!(out, "{}", serde_json::to_string(&footer)?)?;
    Ok(true)
}
