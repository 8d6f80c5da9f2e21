//! Sums and integrals of `phi`: `gamma(a:b)`, `gamma_H`, `gamma`, the tail
//! constant `c`, and the elementary symmetric constants `gamma^(m)`.

use std::sync::OnceLock;

use num_integer::Integer;
use rayon::prelude::*;
use twofloat::{consts::PI, TwoFloat};

use super::phi::{phi_derivative_dd, phi_dd, phi_fast, DEFAULT_SERIES_TERMS};
use super::HeuristicConfig;
use crate::error::{Error, Result};
use crate::form::PrimitiveXCoord;

/// Apery's constant `zeta(3)` as a double-double.
fn zeta3_dd() -> TwoFloat {
    // 1.2020569031595942853997381615114499907649862923405 split into hi + lo
    TwoFloat::new_add(1.2020569031595942, 4.875891010379532e-17)
}

pub fn zeta3() -> f64 {
    zeta3_dd().hi()
}

fn zeta_even(k: u32) -> TwoFloat {
    let pi2 = PI * PI;
    match k {
        2 => pi2 / 6.0,
        4 => pi2 * pi2 / 90.0,
        6 => pi2 * pi2 * pi2 / 945.0,
        _ => unreachable!("only zeta(2), zeta(4), zeta(6) are needed"),
    }
}

fn dd(x: f64) -> TwoFloat {
    TwoFloat::from(x)
}

fn ratio_dd(num: u64, den: u64) -> TwoFloat {
    TwoFloat::from(num) / TwoFloat::from(den)
}

/// `gamma(a:b) = phi(l/h) / h^3` with `h = max(|a|,|b|)`, `l = min(|a|,|b|)`.
pub fn gamma_ab(x: &PrimitiveXCoord) -> f64 {
    let (a, b) = (x.a().unsigned_abs(), x.b().unsigned_abs());
    let (l, h) = (a.min(b), a.max(b));
    let hd = TwoFloat::from(h);
    (phi_dd(ratio_dd(l, h), DEFAULT_SERIES_TERMS) / (hd * hd * hd)).hi()
}

/// Sum of `phi(l/h)` over `1 <= l < h` coprime to `h`.
fn coprime_phi_sum(h: u64, cfg: &HeuristicConfig) -> TwoFloat {
    if cfg.double_double() {
        (1..h)
            .filter(|l| l.gcd(&h) == 1)
            .map(|l| phi_dd(ratio_dd(l, h), cfg.series_terms))
            .fold(dd(0.0), |acc, v| acc + v)
    } else {
        let s: f64 = (1..h)
            .filter(|l| l.gcd(&h) == 1)
            .map(|l| phi_fast(l as f64 / h as f64))
            .sum();
        dd(s)
    }
}

/// `gamma_H`, the sum of `gamma(a:b)` over all `(a:b)` in `P^1(Q)` with
/// height at most `H`.
///
/// Each coprime `0 < l < h` stands for the four points `(+-l : h)` and
/// `(+-h : l)`; height 1 contributes `(0:1)`, `(1:0)` and `(+-1 : 1)`.
pub fn gamma_h(height: u64, cfg: &HeuristicConfig) -> Result<f64> {
    if height == 0 {
        return Err(Error::Domain("H must be at least 1".into()));
    }
    cfg.validate()?;
    let phi1 = phi_dd(dd(1.0), cfg.series_terms);
    let per_h: Vec<TwoFloat> = (2..=height)
        .into_par_iter()
        .map(|h| {
            let hd = TwoFloat::from(h);
            coprime_phi_sum(h, cfg) * 4.0 / (hd * hd * hd)
        })
        .collect();
    let total = per_h.into_iter().fold(phi1 * 2.0 + 2.0, |acc, v| acc + v);
    Ok(total.hi())
}

/// `sum' phi(a/H)` over `0 <= a <= H`, end terms weighted by 1/2.
pub fn phi_riemann_sum(height: u64, cfg: &HeuristicConfig) -> Result<f64> {
    if height == 0 {
        return Err(Error::Domain("H must be at least 1".into()));
    }
    Ok(riemann_dd(height, cfg).hi())
}

fn riemann_dd(h: u64, cfg: &HeuristicConfig) -> TwoFloat {
    let ends = (dd(1.0) + phi_dd(dd(1.0), cfg.series_terms)) * 0.5;
    if cfg.double_double() {
        (1..h).fold(ends, |acc, a| acc + phi_dd(ratio_dd(a, h), cfg.series_terms))
    } else {
        let s: f64 = (1..h).map(|a| phi_fast(a as f64 / h as f64)).sum();
        ends + s
    }
}

/// Euler-Maclaurin approximation of [`phi_riemann_sum`]:
/// `H I + phi'(1) / (12 H) - phi'''(1) / (720 H^3)` with `I` the integral of
/// `phi` over `[0, 1]`. Odd derivatives of `phi` vanish at 0.
pub fn euler_maclaurin_estimate(height: u64, cfg: &HeuristicConfig) -> Result<f64> {
    if height == 0 {
        return Err(Error::Domain("H must be at least 1".into()));
    }
    cfg.validate()?;
    let h = TwoFloat::from(height);
    let (i, d1, d3) = (phi_integral_dd(cfg), phi_derivative_dd(1, dd(1.0)), phi_derivative_dd(3, dd(1.0)));
    Ok((h * i + d1 / (h * 12.0) - d3 / (h * h * h * 720.0)).hi())
}

/// `gamma`, the sum of `gamma(a:b)` over all of `P^1(Q)`.
///
/// Grouping by height with all (not only coprime) numerators gives
/// `gamma = 4 / zeta(3) * sum_H T(H) / H^3` with `T(H) = sum' phi(a/H)`.
/// `T(H)` is summed exactly for `H <= em_cutoff`; beyond that each `T(H)` is
/// replaced by its Euler-Maclaurin expansion, whose sums over `H` are tails
/// of `zeta(2)`, `zeta(4)` and `zeta(6)`.
pub fn gamma_total(cfg: &HeuristicConfig) -> Result<f64> {
    cfg.validate()?;
    let k = cfg.em_cutoff;
    let per_h: Vec<TwoFloat> = (1..=k)
        .into_par_iter()
        .map(|h| {
            let hd = TwoFloat::from(h);
            riemann_dd(h, cfg) / (hd * hd * hd)
        })
        .collect();
    let exact = per_h.into_iter().fold(dd(0.0), |acc, v| acc + v);

    let mut partial = [dd(0.0); 3];
    for h in (1..=k).rev() {
        let inv2 = TwoFloat::from(h).powi(2).recip();
        partial[0] += inv2;
        partial[1] += inv2 * inv2;
        partial[2] += inv2 * inv2 * inv2;
    }
    let integral = phi_integral_dd(cfg);
    let d1 = phi_derivative_dd(1, dd(1.0));
    let d3 = phi_derivative_dd(3, dd(1.0));
    let tail = integral * (zeta_even(2) - partial[0]) + d1 / 12.0 * (zeta_even(4) - partial[1])
        - d3 / 720.0 * (zeta_even(6) - partial[2]);
    Ok(((exact + tail) * 4.0 / zeta3_dd()).hi())
}

/// `c = 4 / zeta(2) * integral of phi over [0, 1]`, so that
/// `gamma - gamma_H ~ c / H`.
pub fn tail_constant_c(cfg: &HeuristicConfig) -> Result<f64> {
    cfg.validate()?;
    Ok((phi_integral_dd(cfg) * 4.0 / zeta_even(2)).hi())
}

/// [`tail_constant_c`] with the default configuration, computed once.
pub fn default_tail_constant() -> f64 {
    static C: OnceLock<f64> = OnceLock::new();
    *C.get_or_init(|| {
        tail_constant_c(&HeuristicConfig::default()).expect("default config is valid")
    })
}

/// Integral of `phi` over `[0, 1]`.
pub fn phi_integral(cfg: &HeuristicConfig) -> Result<f64> {
    cfg.validate()?;
    Ok(phi_integral_dd(cfg).hi())
}

fn phi_integral_dd(cfg: &HeuristicConfig) -> TwoFloat {
    let (nodes, weights) = gauss_legendre(cfg.quadrature_points);
    let breaks = panel_breaks();
    let mut total = dd(0.0);
    for w in breaks.windows(2) {
        let (lo, hi) = (dd(w[0]), dd(w[1]));
        let half = (hi - lo) * 0.5;
        let mid = (hi + lo) * 0.5;
        let mut acc = dd(0.0);
        for (x, wt) in nodes.iter().zip(&weights) {
            acc += phi_dd(mid + half * *x, cfg.series_terms) * *wt;
        }
        total += acc * half;
    }
    total
}

/// Panel boundaries on `[0, 1]`: a uniform grid plus every point in
/// `[1/2, 1]` where one of the polynomials `e0 + e1 t + ... + e6 t^6`
/// changes sign. `phi` is only finitely smooth there.
fn panel_breaks() -> Vec<f64> {
    let mut pts: Vec<f64> = (0..=40).map(|i| i as f64 / 40.0).collect();
    const GRID: usize = 4000;
    for mask in 0u32..128 {
        let f = |t: f64| {
            (0..7).fold(0.0, |acc, i| {
                let e = if mask >> i & 1 == 1 { -1.0 } else { 1.0 };
                acc + e * t.powi(i)
            })
        };
        let mut prev = f(0.5);
        for g in 1..=GRID {
            let t = 0.5 + 0.5 * g as f64 / GRID as f64;
            let cur = f(t);
            if prev != 0.0 && cur != 0.0 && (prev < 0.0) != (cur < 0.0) {
                let (mut lo, mut hi) = (t - 0.5 / GRID as f64, t);
                for _ in 0..100 {
                    let m = 0.5 * (lo + hi);
                    if (f(m) < 0.0) == (prev < 0.0) {
                        lo = m;
                    } else {
                        hi = m;
                    }
                }
                pts.push(0.5 * (lo + hi));
            }
            prev = cur;
        }
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|a, b| (*a - *b).abs() < 1e-13);
    pts
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub(crate) fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 1 { x } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * p - pm) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-17 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// `gamma^(m)` for `m = 0..=max_m`: the elementary symmetric functions of
/// the numbers `gamma(a:b) / 2` over all `(a:b)` of height at most `cutoff`.
///
/// Terms are streamed in decreasing order through
/// `e_k <- e_k + x e_(k-1)`, so the full product is never expanded.
pub fn gamma_m_all(max_m: usize, cutoff: u64) -> Result<Vec<f64>> {
    if cutoff == 0 {
        return Err(Error::Domain("cutoff must be at least 1".into()));
    }
    let mut terms: Vec<f64> = (2..=cutoff)
        .into_par_iter()
        .flat_map_iter(|h| {
            let h3 = (h as f64).powi(3);
            (1..h)
                .filter(move |l| l.gcd(&h) == 1)
                .map(move |l| phi_fast(l as f64 / h as f64) / h3 / 2.0)
        })
        .collect();
    let phi1 = phi_fast(1.0) / 2.0;
    terms.extend([0.5, 0.5]);
    terms.sort_by(|a, b| b.total_cmp(a));
    let mut e = vec![0.0; max_m + 1];
    e[0] = 1.0;
    let push = |x: f64, e: &mut Vec<f64>| {
        for k in (1..=max_m).rev() {
            e[k] += x * e[k - 1];
        }
    };
    // the two height-1 values phi(1)/2 sit between 1/2 and the rest
    let mut it = terms.into_iter().peekable();
    while let Some(&x) = it.peek() {
        if x < phi1 {
            break;
        }
        push(x, &mut e);
        it.next();
    }
    push(phi1, &mut e);
    push(phi1, &mut e);
    for x in it {
        // each coprime (l, h) stands for four points of equal weight
        for _ in 0..4 {
            push(x, &mut e);
        }
    }
    Ok(e)
}

/// Predicted fraction of curves of size `N` with at least `m` point pairs,
/// for `m = 0..=max_m`.
///
/// Each `(a:b)` of height at most `cutoff` independently carries a point
/// pair with probability `gamma(a:b) / (2 sqrt N)`; the number of pairs is
/// then distributed like the coefficients of the product of
/// `1 - p + p T` over all `(a:b)`. Equivalently the `m`-th value is
/// `gamma^(m)(N) N^(-m/2)`.
pub fn predicted_pair_fractions(n: u64, max_m: usize, cutoff: u64) -> Result<Vec<f64>> {
    if n == 0 || cutoff == 0 {
        return Err(Error::Domain("N and cutoff must be positive".into()));
    }
    let scale = 1.0 / (2.0 * (n as f64).sqrt());
    let mut probs: Vec<(f64, u32)> = (2..=cutoff)
        .into_par_iter()
        .flat_map_iter(|h| {
            let h3 = (h as f64).powi(3);
            (1..h)
                .filter(move |l| l.gcd(&h) == 1)
                .map(move |l| (phi_fast(l as f64 / h as f64) / h3 * scale, 4))
        })
        .collect();
    probs.push((scale, 2));
    probs.push((phi_fast(1.0) * scale, 2));
    probs.sort_by(|a, b| b.0.total_cmp(&a.0));
    // exact[k] = probability of exactly k pairs, k <= max_m
    let mut exact = vec![0.0; max_m + 1];
    exact[0] = 1.0;
    for (p, mult) in probs {
        for _ in 0..mult {
            for k in (1..=max_m).rev() {
                exact[k] = exact[k] * (1.0 - p) + exact[k - 1] * p;
            }
            exact[0] *= 1.0 - p;
        }
    }
    let mut out = Vec::with_capacity(max_m + 1);
    let mut below = 0.0f64;
    for e in &exact {
        out.push((1.0 - below).max(0.0));
        below += e;
    }
    Ok(out)
}

/// Single `gamma^(m)`; see [`gamma_m_all`].
pub fn gamma_m(m: usize, cutoff: u64) -> Result<f64> {
    Ok(gamma_m_all(m, cutoff)?[m])
}
