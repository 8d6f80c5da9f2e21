//! Heuristic constants for the number of rational points on genus-2 curves.
//!
//! The model: a primitive `x = (a:b)` contributes `gamma(a:b) / sqrt(N)` points
//! on average over curves of size `N`, where `gamma(a:b)` is built from the
//! density `phi`. Summing over `P^1(Q)` gives the constant `gamma` in
//! `avg #C(Q) ~ gamma / sqrt(N)`.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::form::PrimitiveXCoord;

mod cube;
mod lattice;
mod phi;
mod sums;

pub use cube::{lemma_int, plus_power_integral, slice_volume};
pub use lattice::{lattice_geometry, LatticeGeometry};
pub(crate) use lattice::bareiss_determinant;
pub use phi::{
    phi, phi_derivative, phi_reflected, phi_series_branch, phi_series_coefficients,
    phi_sum_branch, series_radius, DEFAULT_SERIES_TERMS, MAX_SERIES_TERMS, REFLECT_LIMIT,
    SERIES_LIMIT,
};
pub use sums::{
    default_tail_constant, euler_maclaurin_estimate, gamma_ab, gamma_h, gamma_m, gamma_m_all,
    gamma_total, phi_integral, phi_riemann_sum, predicted_pair_fractions, tail_constant_c, zeta3,
};

/// Numerical knobs for the heuristic constants.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeuristicConfig {
    /// Truncation order of the series for `phi` at 0.
    pub series_terms: usize,
    /// Height up to which `gamma_H` is reported alongside the constants.
    pub farey_cutoff: u64,
    /// Heights `H <= em_cutoff` are summed exactly in `gamma_total`; the rest
    /// of the series is replaced by its Euler-Maclaurin expansion.
    pub em_cutoff: u64,
    /// Gauss-Legendre nodes per panel in the integral of `phi`.
    pub quadrature_points: usize,
    /// 64 selects plain doubles for the bulk sums, anything larger selects
    /// double-double (106 significant bits).
    pub working_precision_bits: u32,
}

impl Default for HeuristicConfig {
    fn default() -> Self {
        HeuristicConfig {
            series_terms: DEFAULT_SERIES_TERMS,
            farey_cutoff: 100,
            em_cutoff: 128,
            quadrature_points: 24,
            working_precision_bits: 106,
        }
    }
}

impl HeuristicConfig {
    pub fn validate(&self) -> Result<()> {
        phi::check_series_terms(self.series_terms)?;
        if self.farey_cutoff == 0 || self.em_cutoff == 0 {
            return Err(Error::Config("farey_cutoff and em_cutoff must be positive".into()));
        }
        if self.em_cutoff < self.farey_cutoff {
            return Err(Error::Config(format!(
                "em_cutoff ({}) must be at least farey_cutoff ({})",
                self.em_cutoff, self.farey_cutoff
            )));
        }
        if !(2..=200).contains(&self.quadrature_points) {
            return Err(Error::Config("quadrature_points must lie in 2..=200".into()));
        }
        if self.working_precision_bits < 64 {
            return Err(Error::Config("working_precision_bits must be at least 64".into()));
        }
        Ok(())
    }

    pub(crate) fn double_double(&self) -> bool {
        self.working_precision_bits > 64
    }
}

/// Main term `gamma(a:b) / sqrt(N)` of the expected number of points with
/// x-coordinate `x` on a random curve of size `N`.
pub fn expected_points_at(x: &PrimitiveXCoord, n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("N must be positive".into()));
    }
    Ok(gamma_ab(x) / (n as f64).sqrt())
}

/// Exact average number of points over `x = (1:0)` (or `(0:1)`) on all
/// `(2N+1)^7` forms of size `<= N`: `(2 floor(sqrt N) + 1) / (2N + 1)`.
pub fn expected_points_at_infinity_exact(n: u64) -> Result<Ratio<u64>> {
    if n == 0 {
        return Err(Error::Domain("N must be positive".into()));
    }
    Ok(Ratio::new(2 * n.isqrt() + 1, 2 * n + 1))
}

/// Probability `exp(-16 c / lambda)` that no point pair of height above
/// `lambda N^(13/2)` exists.
pub fn poisson_size_model(lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::Domain(format!("lambda must be positive, got {lambda}")));
    }
    Ok((-16.0 * default_tail_constant() / lambda).exp())
}

/// Inverse of [`poisson_size_model`]: the `lambda` at which the probability
/// of no larger point equals `p`.
pub fn lambda_for_probability(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain(format!("probability must lie in (0, 1), got {p}")));
    }
    Ok(16.0 * default_tail_constant() / -p.ln())
}

/// Expected number of points with height in `[2^n, 2^(n+1))` summed over
/// `num_curves` curves of size `<= N`: `2^-(n+1) c num_curves / sqrt(N)`.
pub fn expected_bracket_count(n: u32, size: u64, num_curves: u64) -> Result<f64> {
    if size == 0 {
        return Err(Error::Domain("N must be positive".into()));
    }
    Ok(default_tail_constant() * num_curves as f64
        / (size as f64).sqrt()
        / 2f64.powi(n as i32 + 1))
}

/// The exponent `(4g + 5) / (2g - 2)` in the conjectured height bound
/// `H << N^(exponent + eps)` for curves of genus `g`.
pub fn genus_height_exponent(g: u64) -> Result<Ratio<u64>> {
    if g < 2 {
        return Err(Error::Domain(format!("genus must be at least 2, got {g}")));
    }
    Ok(Ratio::new(4 * g + 5, 2 * g - 2))
}
