//! SNR distributions of the two hops: the best-of-K RIS-assisted G2A link
//! and the Rician A2G link.

use crate::channel::GammaFit;
use crate::error::{Error, Result};
use crate::series::{shell_series, SeriesOutcome};
use crate::specfun::gamma::{gamma_pq, ln_gamma_unchecked};
use crate::specfun::{bessel_i0_scaled, marcum_p1, marcum_q1, SeriesControl};

/// Distribution of an instantaneous SNR.
pub trait SnrDistribution: Sync {
    fn cdf(&self, gamma: f64) -> f64;
    /// 1 − cdf, computed without cancellation where possible.
    fn ccdf(&self, gamma: f64) -> f64 {
        1.0 - self.cdf(gamma)
    }
    fn pdf(&self, gamma: f64) -> f64;
    /// Rough magnitude of the SNR, used to place quadrature breakpoints.
    fn scale(&self) -> f64;
}

/// Transmit and noise powers (linear).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    pub e_s: f64,
    pub e_u: f64,
    pub n0: f64,
    pub nu: f64,
}

impl LinkBudget {
    pub fn avg_snr_a(&self) -> f64 {
        self.e_s / self.n0
    }
    pub fn avg_snr_b(&self) -> f64 {
        self.e_u / self.nu
    }
}

/// Ground-to-air hop: the best of K independent RIS paths.
#[derive(Debug, Clone, PartialEq)]
pub struct G2aLink {
    pub fits: Vec<GammaFit>,
    pub avg_snr: f64,
}

impl G2aLink {
    pub fn new(fits: Vec<GammaFit>, avg_snr: f64) -> Result<Self> {
        if fits.is_empty() {
            return Err(Error::domain("G2aLink", "at least one RIS is required"));
        }
        if !(avg_snr > 0.0) || !avg_snr.is_finite() {
            return Err(Error::domain("G2aLink", format!("average SNR must be positive, got {avg_snr}")));
        }
        Ok(G2aLink { fits, avg_snr })
    }

    // √(P_L γ / γ̄) / b, the Gamma-variate argument for RIS k.
    fn arg(&self, fit: &GammaFit, gamma: f64) -> f64 {
        (fit.path_loss * gamma / self.avg_snr).sqrt() / fit.b
    }

    /// Per-RIS (P, Q) of the Gamma law at SNR `gamma`.
    fn per_ris(&self, gamma: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.fits.iter().map(move |f| {
            gamma_pq(f.a, self.arg(f, gamma)).unwrap_or((f64::NAN, f64::NAN))
        })
    }

    /// CDF as the truncated K-fold alternating series, shell by shell.
    /// Only trustworthy while the arguments stay small.
    pub fn cdf_series(&self, gamma: f64, ctl: &SeriesControl) -> SeriesOutcome {
        let shapes: Vec<f64> = self.fits.iter().map(|f| f.a).collect();
        let ys: Vec<f64> = self.fits.iter().map(|f| self.arg(f, gamma)).collect();
        shell_series(&shapes, &ys, |_| (0.0, 1.0), ctl)
    }

    /// Σ_k a_k, the diversity sum of the hop.
    pub fn shape_sum(&self) -> f64 {
        self.fits.iter().map(|f| f.a).sum()
    }
}

impl SnrDistribution for G2aLink {
    fn cdf(&self, gamma: f64) -> f64 {
        if gamma <= 0.0 {
            return 0.0;
        }
        self.per_ris(gamma).map(|(p, _)| p).product()
    }

    fn ccdf(&self, gamma: f64) -> f64 {
        if gamma <= 0.0 {
            return 1.0;
        }
        // 1 − Π(1 − Q_k) without forming the product near one.
        let ln_cdf: f64 = self.per_ris(gamma).map(|(p, q)| if q < 0.5 { (-q).ln_1p() } else { p.ln() }).sum();
        -ln_cdf.exp_m1()
    }

    fn pdf(&self, gamma: f64) -> f64 {
        if gamma <= 0.0 {
            return 0.0;
        }
        let cdfs: Vec<f64> = self.per_ris(gamma).map(|(p, _)| p).collect();
        let mut total = 0.0;
        for (j, f) in self.fits.iter().enumerate() {
            let c = (f.path_loss / self.avg_snr).sqrt() / f.b;
            let x = c * gamma.sqrt();
            // d/dγ P(a, c√γ) = c^a γ^{a/2−1} e^{−c√γ} / (2Γ(a))
            let ln_f = f.a * c.ln() + (0.5 * f.a - 1.0) * gamma.ln() - x
                - std::f64::consts::LN_2
                - ln_gamma_unchecked(f.a);
            let others: f64 = cdfs
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != j)
                .map(|(_, &p)| p)
                .product();
            total += ln_f.exp() * others;
        }
        total
    }

    fn scale(&self) -> f64 {
        self.fits
            .iter()
            .map(|f| self.avg_snr * f.second_moment() / f.path_loss)
            .fold(0.0, f64::max)
    }
}

/// Air-to-ground hop with Rician fading.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct A2gLink {
    pub k0: f64,
    pub loss: f64,
    pub avg_snr: f64,
}

impl A2gLink {
    pub fn new(k0: f64, loss: f64, avg_snr: f64) -> Result<Self> {
        if !(k0 > 0.0 && loss > 0.0 && avg_snr > 0.0) || !(k0.is_finite() && loss.is_finite() && avg_snr.is_finite()) {
            return Err(Error::domain(
                "A2gLink",
                format!("K0, L and average SNR must be positive; got {k0}, {loss}, {avg_snr}"),
            ));
        }
        Ok(A2gLink { k0, loss, avg_snr })
    }

    /// β = (1+K0)·L/γ̄_b, the inverse scattered-power scale.
    pub fn beta(&self) -> f64 {
        (1.0 + self.k0) * self.loss / self.avg_snr
    }

    fn marcum_args(&self, gamma: f64) -> (f64, f64) {
        ((2.0 * self.k0).sqrt(), (2.0 * self.beta() * gamma).sqrt())
    }
}

impl SnrDistribution for A2gLink {
    fn cdf(&self, gamma: f64) -> f64 {
        if gamma <= 0.0 {
            return 0.0;
        }
        let (a, b) = self.marcum_args(gamma);
        // Take the complement of whichever tail is small; summing a
        // near-one value directly is not monotone to the last ulp.
        let q = marcum_q1(a, b);
        if q < 0.5 {
            1.0 - q
        } else {
            marcum_p1(a, b)
        }
    }

    fn ccdf(&self, gamma: f64) -> f64 {
        if gamma <= 0.0 {
            return 1.0;
        }
        let (a, b) = self.marcum_args(gamma);
        marcum_q1(a, b)
    }

    fn pdf(&self, gamma: f64) -> f64 {
        if gamma < 0.0 {
            return 0.0;
        }
        let beta = self.beta();
        let z = 2.0 * (self.k0 * beta * gamma).sqrt();
        beta * (-self.k0 - beta * gamma + z).exp() * bessel_i0_scaled(z)
    }

    fn scale(&self) -> f64 {
        self.avg_snr / self.loss
    }
}
