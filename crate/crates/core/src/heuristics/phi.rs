//! The point-density function `phi` and its derivatives.
//!
//! For `t > 0`,
//!
//! ```text
//! phi(t) = 1/(135135 t^21) * sum over e in {+-1}^7 of
//!          e0 e1 ... e6 * max(e0 + e1 t + ... + e6 t^6, 0)^(13/2)
//! ```
//!
//! with `phi(0) = 1` and `phi(-t) = phi(t)`. The signed sum cancels badly for
//! small `t`, so three branches are used: the Taylor series at 0 on
//! `[0, 1/2)`, the sum itself on `[1/2, 2)`, and `phi(t) = phi(1/t) / t^3`
//! from 2 upwards.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use twofloat::TwoFloat;

use crate::error::{Error, Result};

/// `3 * 5 * 7 * 9 * 11 * 13`.
pub(crate) const ODD_PRODUCT: f64 = 135135.0;

/// The series branch is used for `|t|` strictly below this value.
pub const SERIES_LIMIT: f64 = 0.5;

/// From this value on, `phi` is reduced to the series branch via `1/t`.
pub const REFLECT_LIMIT: f64 = 2.0;

/// Number of series coefficients used by default.
pub const DEFAULT_SERIES_TERMS: usize = 400;

/// Largest truncation order the cached coefficient table supports.
pub const MAX_SERIES_TERMS: usize = 640;

/// Exact Taylor coefficients `[c_0, ..., c_order]` of `phi` at 0.
///
/// For `|t| <= 1/2` only the `e0 = +1` half of the sum is nonzero, and each
/// `(1 + e1 t + ... + e6 t^6)^(13/2)` is expanded by the standard recurrence
/// for powers of a power series. To stay in integers the recurrence runs on
/// `Q_n = q_n 2^n n!`:
///
/// ```text
/// Q_n = sum_{i=1..6} e_i (15 i - 2 n) 2^(i-1) (n-1)!/(n-i)! Q_(n-i)
/// ```
///
/// The signed sum of `q_(m+21)` over all 64 patterns, divided by 135135,
/// is `c_m`; lower orders cancel exactly.
pub fn phi_series_coefficients(order: usize) -> Vec<BigRational> {
    let top = order + 21;
    let mut total = vec![BigInt::zero(); top + 1];
    let mut q: Vec<BigInt> = Vec::with_capacity(top + 1);
    for mask in 0u32..64 {
        let eps: [i64; 6] = std::array::from_fn(|i| if mask >> i & 1 == 1 { -1 } else { 1 });
        let sign = if mask.count_ones() % 2 == 0 { 1 } else { -1 };
        q.clear();
        q.push(BigInt::one());
        for n in 1..=top {
            let mut acc = BigInt::zero();
            let mut falling: i64 = 1;
            for i in 1..=n.min(6) {
                if i > 1 {
                    falling *= (n - i + 1) as i64;
                }
                let k = eps[i - 1] * (15 * i as i64 - 2 * n as i64) * (1i64 << (i - 1)) * falling;
                acc += &q[n - i] * k;
            }
            q.push(acc);
        }
        for n in 21..=top {
            if sign > 0 {
                total[n] += &q[n];
            } else {
                total[n] -= &q[n];
            }
        }
    }
    let mut denom = BigInt::from(135135u32) << 21u32;
    for j in 2..=21u32 {
        denom *= j;
    }
    let mut out = Vec::with_capacity(order + 1);
    for m in 0..=order {
        let n = m + 21;
        if m > 0 {
            denom *= 2u32 * n as u32;
        }
        out.push(BigRational::new(total[n].clone(), denom.clone()));
    }
    out
}

fn rational_to_dd(r: &BigRational) -> TwoFloat {
    let hi = r.to_f64().unwrap_or(f64::NAN);
    let lo = match BigRational::from_float(hi) {
        Some(h) => (r - h).to_f64().unwrap_or(0.0),
        None => 0.0,
    };
    TwoFloat::new_add(hi, lo)
}

/// Even-index coefficients `c_0, c_2, ...` as double-doubles.
fn series_table() -> &'static [TwoFloat] {
    static TABLE: OnceLock<Vec<TwoFloat>> = OnceLock::new();
    TABLE.get_or_init(|| {
        phi_series_coefficients(MAX_SERIES_TERMS)
            .iter()
            .step_by(2)
            .map(rational_to_dd)
            .collect()
    })
}

fn series_hi_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| series_table().iter().map(|c| c.hi()).collect())
}

pub(crate) fn check_series_terms(terms: usize) -> Result<()> {
    if terms == 0 || terms > MAX_SERIES_TERMS {
        return Err(Error::Config(format!(
            "series_terms must lie in 1..={MAX_SERIES_TERMS}, got {terms}"
        )));
    }
    Ok(())
}

/// The series branch, truncated after `t^terms`.
pub(crate) fn series_dd(t: TwoFloat, terms: usize) -> TwoFloat {
    let coeffs = &series_table()[..=terms.min(MAX_SERIES_TERMS) / 2];
    let u = t * t;
    let mut acc = TwoFloat::from(0.0);
    for c in coeffs.iter().rev() {
        acc = acc * u + *c;
    }
    acc
}

fn series_f64(t: f64) -> f64 {
    let coeffs = &series_hi_table()[..=DEFAULT_SERIES_TERMS / 2];
    let u = t * t;
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * u + c)
}

#[inline]
fn pow13_2(v: TwoFloat) -> TwoFloat {
    let v2 = v * v;
    let v6 = v2 * v2 * v2;
    v6 * v.sqrt()
}

/// The signed sum branch, for any `t > 0`.
pub(crate) fn sum_dd(t: TwoFloat) -> TwoFloat {
    let mut pw = [t; 6];
    for i in 1..6 {
        pw[i] = pw[i - 1] * t;
    }
    let mut acc = TwoFloat::from(0.0);
    for mask in 0u32..64 {
        let mut s = TwoFloat::from(0.0);
        for (i, p) in pw.iter().enumerate() {
            if mask >> i & 1 == 1 {
                s -= *p;
            } else {
                s += *p;
            }
        }
        let odd = mask.count_ones() % 2 == 1;
        let hi = s + 1.0;
        let lo = s - 1.0;
        let mut term = TwoFloat::from(0.0);
        if hi > 0.0 {
            term += pow13_2(hi);
        }
        if lo > 0.0 {
            term -= pow13_2(lo);
        }
        if odd {
            acc -= term;
        } else {
            acc += term;
        }
    }
    let t21 = pw[5].powi(3) * pw[2];
    acc / (t21 * ODD_PRODUCT)
}

fn sum_f64(t: f64) -> f64 {
    let mut pw = [t; 6];
    for i in 1..6 {
        pw[i] = pw[i - 1] * t;
    }
    let mut acc = 0.0;
    for mask in 0u32..64 {
        let mut s = 0.0;
        for (i, p) in pw.iter().enumerate() {
            s += if mask >> i & 1 == 1 { -p } else { *p };
        }
        let mut term = 0.0;
        if s + 1.0 > 0.0 {
            term += (s + 1.0).powi(6) * (s + 1.0).sqrt();
        }
        if s - 1.0 > 0.0 {
            term -= (s - 1.0).powi(6) * (s - 1.0).sqrt();
        }
        acc += if mask.count_ones() % 2 == 1 { -term } else { term };
    }
    acc / (pw[5].powi(3) * pw[2] * ODD_PRODUCT)
}

/// `phi(t)` in double-double precision with the given series order.
pub(crate) fn phi_dd(t: TwoFloat, terms: usize) -> TwoFloat {
    let t = t.abs();
    if t < SERIES_LIMIT {
        series_dd(t, terms)
    } else if t < REFLECT_LIMIT {
        sum_dd(t)
    } else {
        let r = t.recip();
        series_dd(r, terms) * r.powi(3)
    }
}

/// Double-precision `phi`, accurate to roughly `1e-12` relative. Meant for
/// bulk sums over hundreds of thousands of arguments.
pub(crate) fn phi_fast(t: f64) -> f64 {
    let t = t.abs();
    if t < SERIES_LIMIT {
        series_f64(t)
    } else if t < REFLECT_LIMIT {
        sum_f64(t)
    } else {
        let r = 1.0 / t;
        series_f64(r) * r * r * r
    }
}

/// The density function `phi`. Even, with `phi(0) = 1`, decreasing on
/// `[0, inf)` and tending to 0.
pub fn phi(t: f64) -> f64 {
    if t.is_nan() {
        return f64::NAN;
    }
    if t.is_infinite() {
        return 0.0;
    }
    phi_dd(TwoFloat::from(t), DEFAULT_SERIES_TERMS).hi()
}

/// `phi(t)` evaluated with the series branch only (`|t| < rho ~ 0.504`).
pub fn phi_series_branch(t: f64, terms: usize) -> Result<f64> {
    check_series_terms(terms)?;
    if !(t.abs() < 0.504) {
        return Err(Error::Domain(format!("series branch diverges at t = {t}")));
    }
    Ok(series_dd(TwoFloat::from(t.abs()), terms).hi())
}

/// `phi(t)` evaluated with the signed sum only.
pub fn phi_sum_branch(t: f64) -> Result<f64> {
    if !(t.is_finite() && t != 0.0) {
        return Err(Error::Domain(format!("sum branch needs finite nonzero t, got {t}")));
    }
    Ok(sum_dd(TwoFloat::from(t.abs())).hi())
}

/// `phi(t)` through the functional equation, `phi(1/t) / t^3`, with the
/// inner value taken from whichever branch covers `1/t`.
pub fn phi_reflected(t: f64) -> Result<f64> {
    if !(t.is_finite() && t != 0.0) {
        return Err(Error::Domain(format!("reflection needs finite nonzero t, got {t}")));
    }
    let t = TwoFloat::from(t.abs());
    let r = t.recip();
    Ok((phi_dd(r, DEFAULT_SERIES_TERMS) * r.powi(3)).hi())
}

/// Values and first three derivatives of `S(t) = sum e0..e6 v(t)_+^(13/2)`.
fn sum_derivatives(t: TwoFloat) -> [TwoFloat; 4] {
    const ALPHA: f64 = 6.5;
    let zero = TwoFloat::from(0.0);
    // pw[i] = t^i
    let mut pw = [TwoFloat::from(1.0); 7];
    for i in 1..7 {
        pw[i] = pw[i - 1] * t;
    }
    let mut out = [zero; 4];
    for mask in 0u32..128 {
        let eps = |i: usize| if mask >> i & 1 == 1 { -1.0 } else { 1.0 };
        let mut v = zero;
        let mut d1 = zero;
        let mut d2 = zero;
        let mut d3 = zero;
        for i in 0..7 {
            let e = eps(i);
            let fi = i as f64;
            v += pw[i] * e;
            if i >= 1 {
                d1 += pw[i - 1] * (e * fi);
            }
            if i >= 2 {
                d2 += pw[i - 2] * (e * fi * (fi - 1.0));
            }
            if i >= 3 {
                d3 += pw[i - 3] * (e * fi * (fi - 1.0) * (fi - 2.0));
            }
        }
        if v <= 0.0 {
            continue;
        }
        // v^(alpha - 3) = v^3 sqrt(v)
        let base = v * v * v * v.sqrt();
        let p3 = base;
        let p2 = base * v;
        let p1 = p2 * v;
        let p0 = p1 * v;
        let a1 = ALPHA;
        let a2 = ALPHA * (ALPHA - 1.0);
        let a3 = a2 * (ALPHA - 2.0);
        let terms = [
            p0,
            p1 * d1 * a1,
            p2 * d1 * d1 * a2 + p1 * d2 * a1,
            p3 * d1 * d1 * d1 * a3 + p2 * d1 * d2 * (3.0 * a2) + p1 * d3 * a1,
        ];
        let sign = if mask.count_ones() % 2 == 1 { -1.0 } else { 1.0 };
        for k in 0..4 {
            out[k] += terms[k] * sign;
        }
    }
    out
}

/// The `k`-th derivative of `phi` at `t` for `k` in `0..=3`, in
/// double-double. Only valid on `(1/2, 2)`, where the sum is used and every
/// summand is smooth at the points that matter.
pub(crate) fn phi_derivative_dd(k: usize, t: TwoFloat) -> TwoFloat {
    let s = sum_derivatives(t);
    // w(t) = t^-21, w^(j) = (-21)(-22)...(-21-j+1) t^(-21-j)
    let inv = t.recip();
    let mut w = [TwoFloat::from(0.0); 4];
    w[0] = inv.powi(21);
    let mut fall = 1.0;
    for j in 1..4 {
        fall *= -(20.0 + j as f64);
        w[j] = inv.powi(21 + j as i32) * fall;
    }
    const BINOM: [[f64; 4]; 4] = [
        [1.0, 0.0, 0.0, 0.0],
        [1.0, 1.0, 0.0, 0.0],
        [1.0, 2.0, 1.0, 0.0],
        [1.0, 3.0, 3.0, 1.0],
    ];
    let mut acc = TwoFloat::from(0.0);
    for j in 0..=k {
        acc += w[k - j] * s[j] * BINOM[k][j];
    }
    acc / ODD_PRODUCT
}

/// `d^k phi / dt^k` at `t` for `k` in `{1, 2, 3}`, by differentiating the
/// signed sum term by term. Requires `1/2 < t < 2`.
pub fn phi_derivative(k: usize, t: f64) -> Result<f64> {
    if !(1..=3).contains(&k) {
        return Err(Error::Domain(format!("derivative order must be 1, 2 or 3, got {k}")));
    }
    if !(t > SERIES_LIMIT && t < REFLECT_LIMIT) {
        return Err(Error::Domain(format!("phi_derivative needs 1/2 < t < 2, got {t}")));
    }
    Ok(phi_derivative_dd(k, TwoFloat::from(t)).hi())
}

/// The positive root of `1 - t - t^2 - ... - t^6`, which is the radius of
/// convergence of the series at 0.
pub fn series_radius() -> f64 {
    let f = |t: f64| 1.0 - (1..=6).map(|i| t.powi(i)).sum::<f64>();
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn phi1_closed_form() -> f64 {
        let p = |x: f64| x.powi(6) * x.sqrt();
        (p(7.0) - 7.0 * p(5.0) + 21.0 * p(3.0) - 35.0) / 135135.0
    }

    #[test]
    fn phi_at_one_and_zero() {
        assert_eq!(phi(0.0), 1.0);
        assert!((phi(1.0) - 0.689540287634369059265).abs() < 1e-15);
        assert!((phi(1.0) - phi1_closed_form()).abs() < 1e-13);
    }

    #[test]
    fn printed_coefficients() {
        let c = phi_series_coefficients(12);
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(c[0], r(1, 1));
        assert_eq!(c[2], r(-1, 24));
        assert_eq!(c[4], r(-19, 128 * 3));
        assert_eq!(c[6], r(-217, 1024 * 3));
        assert_eq!(c[8], r(-9583, (1 << 15) * 3));
        assert_eq!(c[10], r(-40125, 1 << 18));
        for m in (1..=11).step_by(2) {
            assert!(c[m].is_zero(), "odd coefficient {m} is nonzero");
        }
    }

    #[test]
    fn branches_agree() {
        for i in 0..=100 {
            let t = 0.3 + 0.2 * i as f64 / 100.0;
            let s = phi_series_branch(t, DEFAULT_SERIES_TERMS).unwrap();
            let d = phi_sum_branch(t).unwrap();
            assert!((s - d).abs() < 1e-12, "t={t}: {s} vs {d}");
        }
        for i in 0..=100 {
            let t = 1.8 + 0.4 * i as f64 / 100.0;
            let d = phi_sum_branch(t).unwrap();
            let r = phi_reflected(t).unwrap();
            assert!((r - d).abs() < 1e-12, "t={t}: {r} vs {d}");
        }
    }

    #[test]
    fn functional_equation() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..2000 {
            let t: f64 = rng.gen_range(1e-3..50.0);
            let lhs = phi(1.0 / t);
            let rhs = t.powi(3) * phi(t);
            assert!((lhs - rhs).abs() <= 1e-12 * t.powi(3).max(1.0), "t={t}");
        }
    }

    #[test]
    fn decreasing() {
        let mut prev = phi(0.0);
        for i in 1..=5000 {
            let v = phi(i as f64 * 1e-3);
            assert!(v < prev, "not decreasing at {}", i as f64 * 1e-3);
            prev = v;
        }
    }

    #[test]
    fn fast_path_is_close() {
        for i in 0..=400 {
            let t = i as f64 * 0.01;
            assert!((phi_fast(t) - phi(t)).abs() < 1e-11, "t={t}");
        }
    }

    #[test]
    fn first_derivative_at_one() {
        let d = phi_derivative(1, 1.0).unwrap();
        assert!((d + 1.5 * phi(1.0)).abs() < 1e-12);
    }

    /// One Richardson step on a central difference with `h^2` error.
    fn richardson(d: impl Fn(f64) -> f64, h: f64) -> f64 {
        (4.0 * d(h / 2.0) - d(h)) / 3.0
    }

    #[test]
    fn derivatives_match_finite_differences() {
        for &t in &[0.6, 0.8, 1.0, 1.3, 1.7] {
            let d1 = |h: f64| (phi(t + h) - phi(t - h)) / (2.0 * h);
            let d2 = |h: f64| (phi(t + h) - 2.0 * phi(t) + phi(t - h)) / (h * h);
            let d3 = |h: f64| {
                (phi(t + 2.0 * h) - 2.0 * phi(t + h) + 2.0 * phi(t - h) - phi(t - 2.0 * h))
                    / (2.0 * h * h * h)
            };
            let e1 = (phi_derivative(1, t).unwrap() - richardson(d1, 1e-3)).abs();
            let e2 = (phi_derivative(2, t).unwrap() - richardson(d2, 1e-3)).abs();
            let e3 = (phi_derivative(3, t).unwrap() - richardson(d3, 4e-3)).abs();
            assert!(e1 < 1e-8 && e2 < 1e-6 && e3 < 1e-4, "t={t}: {e1} {e2} {e3}");
        }
    }

    #[test]
    fn third_derivative_relation_at_one() {
        // Differentiating t^3 phi(t) = phi(1/t) three times at t = 1 gives
        // phi'''(1) = 15 phi(1) - (15/2) phi''(1).
        let p = phi(1.0);
        let d2 = phi_derivative(2, 1.0).unwrap();
        let d3 = phi_derivative(3, 1.0).unwrap();
        assert!((d3 - (15.0 * p - 7.5 * d2)).abs() < 1e-10, "{d3}");
    }

    #[test]
    fn derivative_domain() {
        assert!(phi_derivative(1, 0.5).is_err());
        assert!(phi_derivative(4, 1.0).is_err());
        assert!(phi_derivative(0, 1.0).is_err());
    }

    #[test]
    fn radius() {
        assert!((series_radius() - 0.504138).abs() < 1e-5);
        // successive ratios of the nonzero coefficients approach rho^2
        let c = phi_series_coefficients(400);
        let ratio = (&c[398] / &c[400]).to_f64().unwrap();
        let rho = series_radius();
        assert!((ratio.sqrt() - rho).abs() < 0.02, "{}", ratio.sqrt());
    }
}
