//! Integrals over cubes of powers of linear forms.
//!
//! Everything here rests on one closed form. For `a_1, ..., a_m > 0`,
//! `r > -1` and real `c`,
//!
//! ```text
//! int_{[-1,1]^m} (a.x + c)_+^r dx
//!   = 1/(a_1...a_m (r+1)...(r+m)) * sum_e e_1...e_m (e.a + c)_+^(r+m)
//! ```
//!
//! where `x_+^r` is `x^r` for `x > 0` and 0 otherwise. It follows by
//! integrating out one coordinate at a time.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use twofloat::TwoFloat;

use crate::error::{Error, Result};
use crate::form::{isqrt_big, PrimitiveXCoord};

fn plus_pow(x: f64, e: f64) -> f64 {
    if x > 0.0 {
        x.powf(e)
    } else {
        0.0
    }
}

/// The cube integral of `(a.x + c)_+^r` over `[-1, 1]^m`, `m = a.len()`.
pub fn plus_power_integral(a: &[f64], c: f64, r: f64) -> Result<f64> {
    if a.is_empty() {
        return Err(Error::Domain("need at least one coefficient".into()));
    }
    if let Some(bad) = a.iter().find(|&&ai| !(ai > 0.0 && ai.is_finite())) {
        return Err(Error::Domain(format!("coefficients must be positive, got {bad}")));
    }
    if !(r > -1.0) {
        return Err(Error::Domain(format!("exponent must exceed -1, got {r}")));
    }
    let m = a.len();
    let exp = r + m as f64;
    let mut sum = 0.0;
    for mask in 0u64..(1 << m) {
        let mut s = c;
        for (i, ai) in a.iter().enumerate() {
            s += if mask >> i & 1 == 1 { -ai } else { *ai };
        }
        let v = plus_pow(s, exp);
        sum += if mask.count_ones() % 2 == 1 { -v } else { v };
    }
    let denom: f64 = a.iter().product::<f64>() * (1..=m).map(|j| r + j as f64).product::<f64>();
    Ok(sum / denom)
}

/// `|a_vec|` for `(a:b)`: the entries `|a|^i |b|^(6-i)`, `i = 0..=6`.
pub(crate) fn abs_a_vec(x: &PrimitiveXCoord) -> [BigInt; 7] {
    let a = BigInt::from(x.a().unsigned_abs());
    let b = BigInt::from(x.b().unsigned_abs());
    std::array::from_fn(|i| num_traits::pow(a.clone(), i) * num_traits::pow(b.clone(), 6 - i))
}

/// The integral of `(a_vec . x)_+^(-1/2)` over `[-1, 1]^7`, where
/// `a_vec = (b^6, a b^5, ..., a^6)`. It equals `2^7 gamma(a:b)`.
///
/// The closed form with `r = -1/2` is a signed sum of `s^(13/2)` over 128
/// integers `s`, which cancels to about `H^-3` relative to its terms. The
/// sum is therefore formed exactly: `s^(13/2) 2^k` is replaced by
/// `s^6 isqrt(s 4^k)`, whose error is below `s^6`, and `k` grows until the
/// accumulated error bound is negligible.
pub fn lemma_int(x: &PrimitiveXCoord) -> Result<f64> {
    if x.a() == 0 || x.b() == 0 {
        return Err(Error::Domain(format!("lemma_int needs ab != 0, got {}", x)));
    }
    let av = abs_a_vec(x);
    let mut positives: Vec<(bool, BigInt)> = Vec::new();
    for mask in 0u32..128 {
        let mut s = BigInt::zero();
        for (i, ai) in av.iter().enumerate() {
            if mask >> i & 1 == 1 {
                s -= ai;
            } else {
                s += ai;
            }
        }
        if s.sign() == Sign::Plus {
            positives.push((mask.count_ones() % 2 == 1, s));
        }
    }
    let error_bound: BigInt = positives.iter().map(|(_, s)| num_traits::pow(s.clone(), 6)).sum();
    let mut k: u64 = 64;
    let total = loop {
        let mut total = BigInt::zero();
        for (neg, s) in &positives {
            let root = isqrt_big(&(s << (2 * k)));
            let term = num_traits::pow(s.clone(), 6) * root;
            if *neg {
                total -= term;
            } else {
                total += term;
            }
        }
        // accept once |total| > 1e13 * error_bound
        if total.abs() > &error_bound * BigInt::from(10_000_000_000_000u64) {
            break total;
        }
        k += 64;
        if k > 1 << 16 {
            return Err(Error::Domain("lemma_int failed to converge".into()));
        }
    };
    let prod: BigInt = av.iter().product();
    // 128 / 135135 = 1 / ((1/2)(3/2)...(13/2))
    let num = total * 128;
    let den = (prod * 135135u32) << k;
    BigRational::new(num, den)
        .to_f64()
        .ok_or_else(|| Error::Domain("lemma_int overflow".into()))
}

/// `f_(a:b)(t)`: the 6-dimensional volume of the slice
/// `{x in [-1,1]^7 : a_vec . x = t}` of the cube.
///
/// With `Delta = |a_vec|` this is `Delta` times the density at `t` of
/// `a_vec . x`, so the two pinned identities are
///
/// * `int f(t) dt / Delta = 2^7` (slices stacked along the unit normal
///   fill the cube), and
/// * `int_0^inf f(t) t^(-1/2) dt = Delta * lemma_int(a:b)`.
///
/// The density is the `t`-derivative of the `r = 0` cube integral. Zero
/// entries of `a_vec` (only at `(1:0)` and `(0:1)`) contribute a factor 2
/// each. Arithmetic is double-double after scaling by `H^6`, which is ample
/// for heights up to a few hundred.
pub fn slice_volume(x: &PrimitiveXCoord, t: f64) -> f64 {
    let av = abs_a_vec(x);
    let scale = (x.height() as f64).powi(6);
    let nonzero: Vec<TwoFloat> = av
        .iter()
        .filter(|v| !v.is_zero())
        .map(|v| TwoFloat::from(v.to_f64().unwrap_or(f64::INFINITY)) / scale)
        .collect();
    let zeros = 7 - nonzero.len() as i32;
    let m = nonzero.len();
    let ts = TwoFloat::from(t) / scale;
    let mut sum = TwoFloat::from(0.0);
    for mask in 0u32..(1 << m) {
        let mut s = -ts;
        for (i, ai) in nonzero.iter().enumerate() {
            if mask >> i & 1 == 1 {
                s -= *ai;
            } else {
                s += *ai;
            }
        }
        if s > 0.0 {
            let v = s.powi(m as i32 - 1);
            if mask.count_ones() % 2 == 1 {
                sum -= v;
            } else {
                sum += v;
            }
        }
    }
    let fact: f64 = (1..m).map(|j| j as f64).product();
    let prod = nonzero.iter().fold(TwoFloat::from(1.0), |acc, v| acc * *v);
    let density = sum / (prod * fact * scale);
    let delta2: BigInt = av.iter().map(|v| v * v).sum();
    let delta = delta2.to_f64().unwrap_or(f64::INFINITY).sqrt();
    (density * delta).hi() * 2f64.powi(zeros)
}

/// The cube integral computed by peeling off the last coordinate with the
/// one-dimensional identity
/// `int_{-1}^{1} (a x + c)_+^r dx = ((c + a)_+^(r+1) - (c - a)_+^(r+1)) / (a (r+1))`
/// and recursing on the remaining coordinates.
#[cfg(test)]
pub(crate) fn plus_power_recursive(a: &[f64], c: f64, r: f64) -> f64 {
    match a.split_last() {
        None => plus_pow(c, r),
        Some((&last, rest)) => {
            let up = plus_power_recursive(rest, c + last, r + 1.0);
            let down = plus_power_recursive(rest, c - last, r + 1.0);
            (up - down) / (last * (r + 1.0))
        }
    }
}
