//! Special functions needed by the closed-form link metrics.
//!
//! Everything here is pure and allocation-free apart from the occasional
//! lazily built coefficient table. Each function has an independent
//! verification route in the test suite (quadrature, power series, or a
//! recursion), so no function is validated only against itself.

mod bessel;
pub(crate) mod gamma;
mod hyper;
mod laguerre;
mod marcum;

pub use bessel::{bessel_i0, bessel_i0_scaled};
pub use gamma::{gaussian_q, ln_gamma, reg_lower_gamma, reg_upper_gamma};
pub use hyper::{humbert_phi1, hyp1f1, hyp2f1_ratio, hyp2f1_ratio_scaled};
pub use laguerre::laguerre;
pub use marcum::{marcum_p1, marcum_q1};

use crate::error::{Error, Result};

/// Truncation policy for infinite series.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SeriesControl {
    pub max_terms: usize,
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for SeriesControl {
    fn default() -> Self {
        SeriesControl {
            max_terms: 10_000,
            abs_tol: 1e-300,
            rel_tol: 1e-12,
        }
    }
}

impl SeriesControl {
    pub fn new(max_terms: usize, abs_tol: f64, rel_tol: f64) -> Result<Self> {
        let ctl = SeriesControl {
            max_terms,
            abs_tol,
            rel_tol,
        };
        ctl.validate()?;
        Ok(ctl)
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_terms == 0 {
            return Err(Error::domain("SeriesControl", "max_terms must be at least 1"));
        }
        if !(self.abs_tol >= 0.0 && self.rel_tol >= 0.0) {
            return Err(Error::domain("SeriesControl", "tolerances must be non-negative"));
        }
        if self.abs_tol == 0.0 && self.rel_tol == 0.0 {
            return Err(Error::domain(
                "SeriesControl",
                "at least one tolerance must be positive",
            ));
        }
        Ok(())
    }

    /// True once `term` is negligible against the running `sum`.
    #[inline]
    pub(crate) fn negligible(&self, term: f64, sum: f64) -> bool {
        term.abs() <= self.abs_tol.max(self.rel_tol * sum.abs())
    }
}
