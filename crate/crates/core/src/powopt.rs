//! Split of a total transmit budget E_T between the source (E_s) and the
//! UAV (E_u) that minimizes the high-SNR outage
//! c1·E_s^{−M/2} + c2·E_u^{−1}.
//!
//! The constants span hundreds of decades for large surfaces, so c1 and d
//! are carried as logarithms.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::snrstats::{A2gLink, G2aLink};
use crate::specfun::gamma::ln_gamma_unchecked;

const MAX_ITERATIONS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ObjectiveConstants {
    /// M = Σ a_k.
    pub m_sum: f64,
    pub ln_c1: f64,
    pub c2: f64,
    /// ln d, where the optimum solves E_s = d·(E_T − E_s)^{4/(M+2)}.
    pub ln_d: f64,
}

impl ObjectiveConstants {
    pub fn new(m_sum: f64, ln_c1: f64, c2: f64) -> Result<Self> {
        if !(m_sum > 0.0 && c2 > 0.0) || !(m_sum.is_finite() && ln_c1.is_finite() && c2.is_finite()) {
            return Err(Error::domain(
                "ObjectiveConstants",
                format!("need M > 0, finite ln c1 and c2 > 0; got {m_sum}, {ln_c1}, {c2}"),
            ));
        }
        let ln_d = -((2.0 * c2).ln() - m_sum.ln() - ln_c1) / (0.5 * m_sum + 1.0);
        Ok(ObjectiveConstants {
            m_sum,
            ln_c1,
            c2,
            ln_d,
        })
    }

    /// Constants of a deployment. The link SNRs are ignored; only the fits,
    /// the Rician factor and the A2G loss matter, with noise powers n0 (at
    /// the UAV) and nu (at the destination).
    pub fn from_links(a: &G2aLink, b: &A2gLink, n0: f64, nu: f64, gamma_out: f64) -> Result<Self> {
        if !(n0 > 0.0 && nu > 0.0 && gamma_out > 0.0) {
            return Err(Error::domain(
                "ObjectiveConstants",
                format!("noise powers and threshold must be positive; got {n0}, {nu}, {gamma_out}"),
            ));
        }
        let m_sum = a.shape_sum();
        let ln_c1 = 0.5 * m_sum * n0.ln()
            + a.fits
                .iter()
                .map(|f| {
                    -0.5 * f.a
                        * (2.0 * f.b.ln() - gamma_out.ln() - f.path_loss.ln() + 2.0 / f.a * ln_gamma_unchecked(f.a))
                })
                .sum::<f64>();
        let c2 = nu * (-b.k0).exp() * (1.0 + b.k0) * gamma_out * b.loss;
        Self::new(m_sum, ln_c1, c2)
    }

    pub fn c1(&self) -> f64 {
        self.ln_c1.exp()
    }

    pub fn d(&self) -> f64 {
        self.ln_d.exp()
    }

    fn exponent(&self) -> f64 {
        4.0 / (self.m_sum + 2.0)
    }

    /// g(x) = x − d·(E_T − x)^{4/(M+2)}; increasing, with a single root in (0, E_T).
    pub fn g(&self, x: f64, e_total: f64) -> f64 {
        x - (self.ln_d + self.exponent() * (e_total - x).ln()).exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerSplit {
    pub e_s: f64,
    pub e_u: f64,
    pub op_asymptotic: f64,
    pub iterations: usize,
    /// The bracket collapsed to adjacent floats before |g| reached `tol`.
    pub machine_precision: bool,
}

fn check_powers(e_s: f64, e_u: f64) -> Result<()> {
    if !(e_s > 0.0 && e_u > 0.0) {
        return Err(Error::domain("objective", format!("powers must be positive, got {e_s}, {e_u}")));
    }
    Ok(())
}

/// ln(c1·e_s^{−M/2} + c2·e_u^{−1}).
pub fn ln_objective(c: &ObjectiveConstants, e_s: f64, e_u: f64) -> Result<f64> {
    check_powers(e_s, e_u)?;
    let s = c.ln_c1 - 0.5 * c.m_sum * e_s.ln();
    let u = c.c2.ln() - e_u.ln();
    let (hi, lo) = if s > u { (s, u) } else { (u, s) };
    Ok(hi + (lo - hi).exp().ln_1p())
}

pub fn objective(c: &ObjectiveConstants, e_s: f64, e_u: f64) -> Result<f64> {
    Ok(ln_objective(c, e_s, e_u)?.exp())
}

/// Bisection brackets visited while solving, for inspection.
pub fn bisection_brackets(c: &ObjectiveConstants, e_total: f64, tol: f64) -> Result<Vec<(f64, f64)>> {
    let mut out = Vec::new();
    bisect(c, e_total, tol, |lo, hi| out.push((lo, hi)))?;
    Ok(out)
}

fn bisect(c: &ObjectiveConstants, e_total: f64, tol: f64, mut visit: impl FnMut(f64, f64)) -> Result<(f64, usize, bool)> {
    if !(e_total > 0.0 && e_total.is_finite() && tol > 0.0) {
        return Err(Error::domain("solve_split", format!("need E_T > 0 and tol > 0, got {e_total}, {tol}")));
    }
    let (mut lo, mut hi) = (0.0, e_total);
    for it in 1..=MAX_ITERATIONS {
        visit(lo, hi);
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            // Adjacent floats: return the endpoint with the smaller |g|.
            let best = if c.g(lo, e_total).abs() <= c.g(hi, e_total).abs() && lo > 0.0 { lo } else { hi };
            return Ok((best, it, true));
        }
        let g = c.g(mid, e_total);
        if g.abs() <= tol {
            return Ok((mid, it, false));
        }
        if g < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NonConvergence {
        func: "solve_split",
        iterations: MAX_ITERATIONS,
        partial: 0.5 * (lo + hi),
    })
}

pub fn solve_split(c: &ObjectiveConstants, e_total: f64, tol: f64) -> Result<PowerSplit> {
    let (x, iterations, machine_precision) = bisect(c, e_total, tol, |_, _| {})?;
    let e_u = e_total - x;
    // A root pinned against E_T leaves no power for the second hop.
    if !(x > 0.0 && e_u > 0.0) {
        return Err(Error::domain("solve_split", format!("degenerate split e_s = {x} of {e_total}")));
    }
    Ok(PowerSplit {
        e_s: x,
        e_u,
        op_asymptotic: objective(c, x, e_u)?,
        iterations,
        machine_precision,
    })
}

/// Imbalance of the marginal returns, |∂f/∂e_s − ∂f/∂e_u| divided by
/// |∂f/∂e_s| + |∂f/∂e_u|: zero at the optimum, dimensionless, and monotone
/// in e_s along the constraint.
pub fn kkt_residual(c: &ObjectiveConstants, split: &PowerSplit) -> Result<f64> {
    check_powers(split.e_s, split.e_u)?;
    let ln_s = (0.5 * c.m_sum).ln() + c.ln_c1 - (0.5 * c.m_sum + 1.0) * split.e_s.ln();
    let ln_u = c.c2.ln() - 2.0 * split.e_u.ln();
    Ok((0.5 * (ln_s - ln_u)).tanh().abs())
}

/// Brute-force minimizer of the objective over the interior points
/// E_T·i/n, i = 1..n−1.
pub fn grid_search(c: &ObjectiveConstants, e_total: f64, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::domain("grid_search", "need at least two intervals"));
    }
    let step = e_total / n as f64;
    let mut best = (f64::INFINITY, step);
    for i in 1..n {
        let x = step * i as f64;
        let v = ln_objective(c, x, e_total - x)?;
        if v < best.0 {
            best = (v, x);
        }
    }
    Ok(best.1)
}
