use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical and model parameters shared by the estimators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Config {
    /// Order of the linear invariant family; at least 2.
    pub alpha: f64,
    /// Quasiconformality constant `K >= 1`.
    #[serde(rename = "K")]
    pub big_k: f64,
    pub radial_count: usize,
    pub angular_count: usize,
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Offset of the sampling ring from the unit circle.
    pub eps: f64,
    /// Relative slack below zero tolerated by a passing check.
    pub slack: f64,
    /// Largest modulus any grid reaches.
    pub boundary_cap: f64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            alpha: 3.0,
            big_k: 1.0,
            radial_count: 48,
            angular_count: 64,
            abs_tol: 1e-12,
            rel_tol: 1e-12,
            eps: 1e-3,
            slack: 1e-9,
            boundary_cap: 0.999,
        }
    }
}

impl Config {
    /// The classical analytic setting `alpha = 2`, `K = 1`.
    pub fn classical() -> Self {
        Config {
            alpha: 2.0,
            big_k: 1.0,
            ..Config::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha >= 2.0) || !self.alpha.is_finite() {
            return Err(Error::Parameter(format!("alpha must be >= 2, got {}", self.alpha)));
        }
        if !(self.big_k >= 1.0) || !self.big_k.is_finite() {
            return Err(Error::Parameter(format!("K must be >= 1, got {}", self.big_k)));
        }
        if !(self.eps > 0.0 && self.eps <= 0.5) {
            return Err(Error::Parameter(format!("eps must lie in (0, 0.5], got {}", self.eps)));
        }
        if self.radial_count < 2 || self.angular_count < 2 {
            return Err(Error::Parameter("grid densities must be at least 2".into()));
        }
        if !(self.abs_tol > 0.0 && self.rel_tol >= 0.0) {
            return Err(Error::Parameter("quadrature tolerances must be positive".into()));
        }
        if !(self.slack >= 0.0) {
            return Err(Error::Parameter("slack must be nonnegative".into()));
        }
        if !(self.boundary_cap > 0.0 && self.boundary_cap < 1.0) {
            return Err(Error::Parameter("boundary cap must lie in (0, 1)".into()));
        }
        Ok(())
    }
}
