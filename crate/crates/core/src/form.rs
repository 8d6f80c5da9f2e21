//! Sextic forms, primitive x-coordinates and rational points.
//!
//! A curve is `y^2 = F(x, z)` in the weighted projective plane with weights
//! (1, 3, 1). Coefficients are indexed so that `f_j` multiplies `x^j z^(6-j)`,
//! and the text form lists them in ascending index: `f0,f1,f2,f3,f4,f5,f6`.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::{Integer, Roots};
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;

/// The integral binary sextic `F(x,z) = f6 x^6 + f5 x^5 z + ... + f0 z^6`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SexticForm {
    coeffs: [i64; 7],
}

impl SexticForm {
    /// Builds a form from `[f0, f1, ..., f6]`.
    pub const fn new(coeffs: [i64; 7]) -> Self {
        SexticForm { coeffs }
    }

    /// Builds a form from the coefficient list in descending order
    /// `[f6, f5, ..., f0]`, the way polynomials are usually written.
    pub fn from_descending(desc: [i64; 7]) -> Self {
        let mut coeffs = desc;
        coeffs.reverse();
        SexticForm { coeffs }
    }

    pub fn coeffs(&self) -> &[i64; 7] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> i64 {
        self.coeffs[j]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// `max |f_j|`, the size of the form.
    pub fn size(&self) -> u64 {
        self.coeffs.iter().map(|c| c.unsigned_abs()).max().unwrap_or(0)
    }

    /// The form with `x -> -x`: odd-index coefficients change sign.
    pub fn negate_x(&self) -> Self {
        let mut c = self.coeffs;
        for j in (1..7).step_by(2) {
            c[j] = -c[j];
        }
        SexticForm { coeffs: c }
    }

    /// The form with `x <-> z`, i.e. `x^6 F(1/x)`.
    pub fn reversed(&self) -> Self {
        let mut c = self.coeffs;
        c.reverse();
        SexticForm { coeffs: c }
    }

    /// The four forms `f(x), f(-x), x^6 f(1/x), x^6 f(-1/x)`.
    pub fn symmetry_orbit(&self) -> [SexticForm; 4] {
        let r = self.reversed();
        [*self, self.negate_x(), r, r.negate_x()]
    }

    /// Exact value `sum_j f_j a^j b^(6-j)` for arbitrary integers.
    pub fn evaluate_big(&self, a: &BigInt, b: &BigInt) -> BigInt {
        // Horner in a with running powers of b.
        let mut acc = BigInt::from(self.coeffs[6]);
        let mut bpow = BigInt::from(1);
        for j in (0..6).rev() {
            bpow *= b;
            acc = acc * a + BigInt::from(self.coeffs[j]) * &bpow;
        }
        acc
    }

    /// Exact value at integer arguments that fit in 64 bits.
    pub fn evaluate_i64(&self, a: i64, b: i64) -> BigInt {
        match self.evaluate_i128(a, b) {
            Some(v) => BigInt::from(v),
            None => self.evaluate_big(&BigInt::from(a), &BigInt::from(b)),
        }
    }

    /// Fixed-width evaluation; `None` on overflow.
    pub fn evaluate_i128(&self, a: i64, b: i64) -> Option<i128> {
        let a = a as i128;
        let b = b as i128;
        let mut acc = self.coeffs[6] as i128;
        let mut bpow: i128 = 1;
        for j in (0..6).rev() {
            bpow = bpow.checked_mul(b)?;
            acc = acc
                .checked_mul(a)?
                .checked_add((self.coeffs[j] as i128).checked_mul(bpow)?)?;
        }
        Some(acc)
    }

    /// Whether `|a|, |b| <= height` can never overflow `i128` evaluation.
    pub fn fits_i128(&self, height: u64) -> bool {
        let bits = 64 - self.size().leading_zeros() as u32 + 3;
        let hbits = 64 - height.leading_zeros();
        bits + 6 * hbits < 126
    }

    pub fn evaluate(&self, p: &PrimitiveXCoord) -> BigInt {
        self.evaluate_i64(p.a, p.b)
    }
}

impl fmt::Display for SexticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, c) in self.coeffs.iter().enumerate() {
            if j > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for SexticForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 7 {
            return Err(Error::Parse(format!(
                "expected 7 comma-separated coefficients f0..f6, got {}",
                parts.len()
            )));
        }
        let mut coeffs = [0i64; 7];
        for (c, p) in coeffs.iter_mut().zip(&parts) {
            *c = p
                .parse()
                .map_err(|_| Error::Parse(format!("bad coefficient `{p}`")))?;
        }
        Ok(SexticForm { coeffs })
    }
}

/// A point `(a : b)` of the projective line in lowest terms, with the sign
/// normalized so that `b > 0`, or `(a : b) = (1 : 0)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PrimitiveXCoord {
    a: i64,
    b: i64,
}

impl PrimitiveXCoord {
    pub const INFINITY: PrimitiveXCoord = PrimitiveXCoord { a: 1, b: 0 };
    pub const ZERO: PrimitiveXCoord = PrimitiveXCoord { a: 0, b: 1 };

    /// Reduces `(a : b)` to lowest terms and canonical sign.
    pub fn new(a: i64, b: i64) -> Result<Self, Error> {
        if a == 0 && b == 0 {
            return Err(Error::Domain("(0 : 0) is not a point of P^1".into()));
        }
        let g = a.gcd(&b);
        let (mut a, mut b) = (a / g, b / g);
        if b < 0 || (b == 0 && a < 0) {
            a = -a;
            b = -b;
        }
        Ok(PrimitiveXCoord { a, b })
    }

    /// Assumes `gcd(a, b) = 1` and canonical sign.
    pub(crate) const fn new_unchecked(a: i64, b: i64) -> Self {
        PrimitiveXCoord { a, b }
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    /// `H(a : b) = max(|a|, |b|)`.
    pub fn height(&self) -> u64 {
        self.a.unsigned_abs().max(self.b.unsigned_abs())
    }

    pub fn is_infinity(&self) -> bool {
        self.b == 0
    }
}

impl fmt::Display for PrimitiveXCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.a, self.b)
    }
}

impl FromStr for PrimitiveXCoord {
    type Err = Error;

    /// Accepts `a/b`, a bare integer `a`, or `inf`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s == "∞" {
            return Ok(PrimitiveXCoord::INFINITY);
        }
        let bad = || Error::Parse(format!("bad x-coordinate `{s}`"));
        let (a, b) = match s.split_once('/') {
            Some((a, b)) => (
                a.trim().parse::<i64>().map_err(|_| bad())?,
                b.trim().parse::<i64>().map_err(|_| bad())?,
            ),
            None => (s.parse::<i64>().map_err(|_| bad())?, 1),
        };
        PrimitiveXCoord::new(a, b)
    }
}

/// A rational point `(a : y : b)` on `y^2 = F(x, z)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RationalPoint {
    pub x: PrimitiveXCoord,
    pub y: BigInt,
}

impl RationalPoint {
    pub fn new(x: PrimitiveXCoord, y: BigInt) -> Self {
        RationalPoint { x, y }
    }

    pub fn lies_on(&self, form: &SexticForm) -> bool {
        form.evaluate(&self.x) == &self.y * &self.y
    }

    pub fn height(&self) -> u64 {
        self.x.height()
    }

    /// The image under the hyperelliptic involution.
    pub fn negated(&self) -> Self {
        RationalPoint { x: self.x, y: -&self.y }
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} : {}", self.x, self.y)
    }
}

impl FromStr for RationalPoint {
    type Err = Error;

    /// Parses `a/b : y`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let (x, y) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected `a/b : y`, got `{s}`")))?;
        let x: PrimitiveXCoord = x.parse()?;
        let y: BigInt = y
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad y-coordinate in `{s}`")))?;
        Ok(RationalPoint { x, y })
    }
}

/// Result of a point search on one curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveStats {
    pub form: SexticForm,
    /// Sorted by `(b, a, y)`.
    pub points: Vec<RationalPoint>,
    pub num_points: usize,
    /// Number of distinct x-coordinates, i.e. point pairs.
    pub num_x_coords: usize,
    pub max_point_height: u64,
    pub search_height_bound: u64,
}

impl CurveStats {
    pub fn from_points(
        form: SexticForm,
        mut points: Vec<RationalPoint>,
        search_height_bound: u64,
    ) -> Self {
        points.sort_by(|p, q| {
            (p.x.b, p.x.a, &p.y).cmp(&(q.x.b, q.x.a, &q.y))
        });
        points.dedup();
        let mut num_x_coords = 0;
        let mut last = None;
        for p in &points {
            if last != Some(p.x) {
                num_x_coords += 1;
                last = Some(p.x);
            }
        }
        let max_point_height = points.iter().map(RationalPoint::height).max().unwrap_or(0);
        CurveStats {
            form,
            num_points: points.len(),
            num_x_coords,
            max_point_height,
            search_height_bound,
            points,
        }
    }

    /// The sub-result for points of height at most `bound`.
    pub fn truncated(&self, bound: u64) -> Self {
        let pts = self
            .points
            .iter()
            .filter(|p| p.height() <= bound)
            .cloned()
            .collect();
        CurveStats::from_points(self.form, pts, bound.min(self.search_height_bound))
    }
}

/// Exact square root of `n` if `n` is a perfect square.
pub fn integer_sqrt_if_square(n: &BigInt) -> Option<BigUint> {
    match n.sign() {
        Sign::Minus => None,
        Sign::NoSign => Some(BigUint::zero()),
        Sign::Plus => {
            if let Some(small) = n.to_u128() {
                return isqrt_u128_if_square(small).map(BigUint::from);
            }
            let m = n.magnitude();
            if !residue_may_be_square_u64((m & BigUint::from(u64::MAX)).to_u64().unwrap_or(0), m)
            {
                return None;
            }
            let r = m.sqrt();
            if &r * &r == *m {
                Some(r)
            } else {
                None
            }
        }
    }
}

/// Square test for a signed 128-bit value.
pub fn isqrt_i128_if_square(n: i128) -> Option<u128> {
    if n < 0 {
        None
    } else {
        isqrt_u128_if_square(n as u128)
    }
}

// Quadratic residues modulo 64, 63, 65 and 11 as bit masks.
const SQ64: u64 = {
    let mut m = 0u64;
    let mut i = 0;
    while i < 64 {
        m |= 1 << ((i * i) % 64);
        i += 1;
    }
    m
};

const fn residue_mask(modulus: u64) -> u128 {
    let mut m = 0u128;
    let mut i = 0;
    while i < modulus {
        m |= 1 << ((i * i) % modulus);
        i += 1;
    }
    m
}

const SQ63: u128 = residue_mask(63);
const SQ65: u128 = residue_mask(65);
const SQ11: u128 = residue_mask(11);

#[inline]
fn low_bits_may_be_square(low: u64) -> bool {
    SQ64 >> (low & 63) & 1 == 1
}

fn residue_may_be_square_u64(low: u64, m: &BigUint) -> bool {
    if !low_bits_may_be_square(low) {
        return false;
    }
    let r = (m % 45045u32).to_u32().unwrap_or(0) as u128; // 63 * 65 * 11
    SQ63 >> (r % 63) & 1 == 1 && SQ65 >> (r % 65) & 1 == 1 && SQ11 >> (r % 11) & 1 == 1
}

/// Exact square test for `u128`.
pub fn isqrt_u128_if_square(n: u128) -> Option<u128> {
    if !low_bits_may_be_square(n as u64) {
        return None;
    }
    let r = (n % 45045) as u32;
    if SQ63 >> (r % 63) & 1 == 0 || SQ65 >> (r % 65) & 1 == 0 || SQ11 >> (r % 11) & 1 == 0 {
        return None;
    }
    let r = isqrt_u128(n);
    if r * r == n {
        Some(r)
    } else {
        None
    }
}

/// `floor(sqrt(n))`.
pub fn isqrt_u128(n: u128) -> u128 {
    if n < (1u128 << 104) {
        let mut r = (n as f64).sqrt() as u128;
        while r * r > n {
            r -= 1;
        }
        while (r + 1) * (r + 1) <= n {
            r += 1;
        }
        r
    } else {
        n.sqrt()
    }
}

/// Integer square root of a nonnegative big integer (floor).
pub fn isqrt_big(n: &BigInt) -> BigInt {
    debug_assert!(!n.is_negative());
    n.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use proptest::prelude::*;

    const RECORD: SexticForm = SexticForm::new([3, 0, 3, -1, -3, 0, 1]);

    #[test]
    fn evaluate_at_zero_and_infinity() {
        let f = SexticForm::new([3, 3, 3, -1, -3, 0, 1]);
        assert_eq!(f.evaluate(&PrimitiveXCoord::ZERO), BigInt::from(3));
        assert_eq!(f.evaluate(&PrimitiveXCoord::INFINITY), BigInt::from(1));
    }

    #[test]
    fn record_point_is_on_curve() {
        let x = PrimitiveXCoord::new(-58189, 209040).unwrap();
        let v = RECORD.evaluate(&x);
        let r = integer_sqrt_if_square(&v).expect("record value must be a square");
        assert_eq!(BigInt::from(r.clone()) * BigInt::from(r), v);
    }

    #[test]
    fn small_square_cases() {
        assert_eq!(integer_sqrt_if_square(&BigInt::zero()), Some(BigUint::zero()));
        assert_eq!(integer_sqrt_if_square(&BigInt::from(2)), None);
        assert_eq!(integer_sqrt_if_square(&BigInt::from(-4)), None);
        assert_eq!(integer_sqrt_if_square(&BigInt::one()), Some(BigUint::one()));
    }

    #[test]
    fn huge_square() {
        let k: BigInt = BigInt::from(3).pow(700) + 12345;
        let n = &k * &k;
        assert!(n.bits() > 1000);
        assert_eq!(integer_sqrt_if_square(&n).map(BigInt::from), Some(k));
        assert_eq!(integer_sqrt_if_square(&(n + 1)), None);
    }

    #[test]
    fn random_squares_round_trip() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let k: u128 = rng.gen_range(0..1_000_000_000_000_000_000_000_000_000_000u128);
            let n = BigInt::from(k) * BigInt::from(k);
            assert_eq!(integer_sqrt_if_square(&n), Some(BigUint::from(k)));
        }
    }

    #[test]
    fn primitive_normalization() {
        let p = PrimitiveXCoord::new(4, -6).unwrap();
        assert_eq!((p.a(), p.b()), (-2, 3));
        let q = PrimitiveXCoord::new(-5, 0).unwrap();
        assert_eq!(q, PrimitiveXCoord::INFINITY);
        assert!(PrimitiveXCoord::new(0, 0).is_err());
        assert_eq!(PrimitiveXCoord::new(0, -7).unwrap(), PrimitiveXCoord::ZERO);
    }

    #[test]
    fn text_round_trip() {
        let f: SexticForm = "3,0,3,-1,-3,0,1".parse().unwrap();
        assert_eq!(f, RECORD);
        assert_eq!(f.to_string(), "3,0,3,-1,-3,0,1");
        let p: RationalPoint = "-58189/209040 : 12".parse().unwrap();
        assert_eq!(p.to_string(), "-58189/209040 : 12");
        assert!("1,2,3".parse::<SexticForm>().is_err());
    }

    #[test]
    fn stats_invariants() {
        let f = SexticForm::new([1, 0, 0, 0, 0, 0, 1]);
        let pts = vec![
            RationalPoint::new(PrimitiveXCoord::ZERO, BigInt::from(1)),
            RationalPoint::new(PrimitiveXCoord::ZERO, BigInt::from(-1)),
            RationalPoint::new(PrimitiveXCoord::INFINITY, BigInt::from(1)),
        ];
        let s = CurveStats::from_points(f, pts, 10);
        assert_eq!(s.num_points, 3);
        assert_eq!(s.num_x_coords, 2);
        assert_eq!(s.max_point_height, 1);
    }

    proptest! {
        #[test]
        fn scaling_is_sixth_power(c in prop::array::uniform7(-50i64..=50), a in -300i64..=300, b in -300i64..=300, t in -20i64..=20) {
            let f = SexticForm::new(c);
            let base = f.evaluate_i64(a, b);
            let scaled = f.evaluate_i64(t * a, t * b);
            prop_assert_eq!(scaled, base * BigInt::from(t).pow(6));
        }

        #[test]
        fn reversal_swaps_arguments(c in prop::array::uniform7(-50i64..=50), a in -1000i64..=1000, b in -1000i64..=1000) {
            let f = SexticForm::new(c);
            prop_assert_eq!(f.reversed().evaluate_i64(a, b), f.evaluate_i64(b, a));
            prop_assert_eq!(f.negate_x().evaluate_i64(a, b), f.evaluate_i64(-a, b));
        }

        #[test]
        fn fast_and_big_evaluation_agree(c in prop::array::uniform7(-1000i64..=1000), a in -200_000i64..=200_000, b in -200_000i64..=200_000) {
            let f = SexticForm::new(c);
            let big = f.evaluate_big(&BigInt::from(a), &BigInt::from(b));
            if let Some(v) = f.evaluate_i128(a, b) {
                prop_assert_eq!(BigInt::from(v), big);
            }
        }

        #[test]
        fn rejects_between_squares(k in 1u64..u64::MAX / 2, d in 1u64..1000) {
            let k = BigInt::from(k);
            let n = &k * &k;
            let gap = BigInt::from(2u32) * &k;
            let d = BigInt::from(d) % &gap + 1;
            prop_assert!(integer_sqrt_if_square(&(&n + d)).is_none());
        }
    }
}
