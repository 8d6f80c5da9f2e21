//! Geometry of the lattice of integral sextics vanishing at `(a:b)`.
//!
//! The forms with `F(a, b) = 0` form a rank-6 sublattice of `Z^7` with basis
//! `v_i = -a e_i + b e_(i+1)`, `i = 0..6`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::form::PrimitiveXCoord;

#[derive(Clone, Debug, PartialEq)]
pub struct LatticeGeometry {
    pub x: PrimitiveXCoord,
    /// Gram matrix of the basis `v_0, ..., v_5`: tridiagonal with
    /// `a^2 + b^2` on the diagonal and `-ab` beside it.
    pub gram: [[BigInt; 6]; 6],
    /// Six-dimensional covolume `Delta = sqrt(det gram)`.
    pub covolume: f64,
    /// Length of the longest diagonal of the fundamental parallelotope.
    pub diameter: f64,
    /// `(b^6, a b^5, ..., a^6)`, the normal vector of the lattice's span.
    pub a_vec: [BigInt; 7],
    /// `a_vec / Delta^2`, so that `a_vec . e_vec = 1`.
    pub e_vec: [BigRational; 7],
}

impl LatticeGeometry {
    /// The basis vectors as rows.
    pub fn basis(&self) -> [[BigInt; 7]; 6] {
        let a = BigInt::from(self.x.a());
        let b = BigInt::from(self.x.b());
        std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                if j == i {
                    -a.clone()
                } else if j == i + 1 {
                    b.clone()
                } else {
                    BigInt::zero()
                }
            })
        })
    }

    /// `Delta^2 = a^12 + a^10 b^2 + ... + b^12`.
    pub fn covolume_squared(&self) -> BigInt {
        self.a_vec.iter().map(|v| v * v).sum()
    }

    /// Exact determinant of the Gram matrix by fraction-free elimination.
    pub fn gram_determinant(&self) -> BigInt {
        bareiss_determinant(self.gram.iter().map(|r| r.to_vec()).collect())
    }
}

/// Determinant of a square integer matrix (Bareiss elimination).
pub(crate) fn bareiss_determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = 1;
    let mut prev = BigInt::from(1);
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    if n == 0 {
        return BigInt::from(1);
    }
    m[n - 1][n - 1].clone() * sign
}

/// All lattice invariants of `(a:b)` from their closed forms.
pub fn lattice_geometry(x: &PrimitiveXCoord) -> LatticeGeometry {
    let a = BigInt::from(x.a());
    let b = BigInt::from(x.b());
    let diag = &a * &a + &b * &b;
    let off = -(&a * &b);
    let gram = std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            if i == j {
                diag.clone()
            } else if i.abs_diff(j) == 1 {
                off.clone()
            } else {
                BigInt::zero()
            }
        })
    });
    let a_vec: [BigInt; 7] =
        std::array::from_fn(|i| num_traits::pow(a.clone(), i) * num_traits::pow(b.clone(), 6 - i));
    let delta2: BigInt = a_vec.iter().map(|v| v * v).sum();
    let e_vec = std::array::from_fn(|i| BigRational::new(a_vec[i].clone(), delta2.clone()));
    let covolume = delta2.to_f64().unwrap_or(f64::INFINITY).sqrt();
    let (fa, fb) = (x.a() as f64, x.b() as f64);
    let diameter = (6.0 * fa * fa + 10.0 * (fa * fb).abs() + 6.0 * fb * fb).sqrt();
    LatticeGeometry { x: *x, gram, covolume, diameter, a_vec, e_vec }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(a: i64, b: i64) -> PrimitiveXCoord {
        PrimitiveXCoord::new(a, b).unwrap()
    }

    #[test]
    fn infinity_and_one_one() {
        let g = lattice_geometry(&PrimitiveXCoord::INFINITY);
        assert_eq!(g.covolume, 1.0);
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(g.gram[i][j], BigInt::from((i == j) as i32));
            }
        }
        let g = lattice_geometry(&p(1, 1));
        assert_eq!(g.gram_determinant(), BigInt::from(7));
        assert!((g.covolume - 7f64.sqrt()).abs() < 1e-15);
        assert!((g.diameter - 22f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn gram_is_basis_gram() {
        let g = lattice_geometry(&p(-3, 5));
        let basis = g.basis();
        for i in 0..6 {
            for j in 0..6 {
                let dot: BigInt = (0..7).map(|k| &basis[i][k] * &basis[j][k]).sum();
                assert_eq!(dot, g.gram[i][j]);
            }
            // every basis vector lies in the hyperplane a_vec . v = 0
            let dot: BigInt = (0..7).map(|k| &basis[i][k] * &g.a_vec[k]).sum();
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn random_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..300 {
            let x = match PrimitiveXCoord::new(rng.gen_range(-10_000..=10_000), rng.gen_range(-10_000..=10_000)) {
                Ok(x) => x,
                Err(_) => continue,
            };
            let g = lattice_geometry(&x);
            assert_eq!(g.gram_determinant(), g.covolume_squared());
            let dot: BigRational = g.a_vec.iter().zip(&g.e_vec).map(|(a, e)| e * a).sum();
            assert!(dot.is_one());
            let h = x.height() as f64;
            assert!(g.diameter <= 22f64.sqrt() * h * (1.0 + 1e-12));
            let h6 = h.powi(6);
            assert!(g.covolume >= h6 * (1.0 - 1e-12) && g.covolume <= 7f64.sqrt() * h6 * (1.0 + 1e-12));
        }
    }

    #[test]
    fn diameter_is_longest_diagonal() {
        for (a, b) in [(1, 0), (1, 1), (2, -3), (7, 4), (-5, 9)] {
            let g = lattice_geometry(&p(a, b));
            let basis = g.basis();
            let mut best = 0i64;
            for mask in 0u32..64 {
                let mut v = [0i64; 7];
                for (i, row) in basis.iter().enumerate() {
                    let s = if mask >> i & 1 == 1 { -1 } else { 1 };
                    for k in 0..7 {
                        v[k] += s * row[k].to_i64().unwrap();
                    }
                }
                best = best.max(v.iter().map(|c| c * c).sum());
            }
            assert!(((best as f64).sqrt() - g.diameter).abs() < 1e-12, "({a}:{b})");
        }
    }

    #[test]
    fn bareiss_small() {
        let m = |rows: &[[i64; 3]]| rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
        assert_eq!(bareiss_determinant(m(&[[0, 1, 2], [3, 4, 5], [6, 7, 9]])), BigInt::from(-3));
        assert_eq!(bareiss_determinant(m(&[[1, 2, 3], [2, 4, 6], [1, 0, 1]])), BigInt::zero());
    }
}
