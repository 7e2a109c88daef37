//! Outage probability, average symbol error probability and ergodic
//! capacity of the two hops and of the decode-and-forward end-to-end link.

mod asep;
mod capacity;

pub use asep::{asep_hop_a, asep_hop_a_series, asep_hop_b, asep_quadrature, AsepMethod};
pub use capacity::{
    appendix_a_identity, capacity_hop_a, capacity_hop_a_cosecant, capacity_hop_a_hyp2f1,
    capacity_hop_b, capacity_hop_b_series, capacity_quadrature, upper_limit, UpperLimit,
};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::snrstats::{A2gLink, G2aLink, SnrDistribution};
use crate::specfun::gamma::ln_gamma_unchecked;
use crate::specfun::SeriesControl;

/// ASEP constants for error rates of the form E[p·Q(√(2qγ))].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Modulation {
    pub p: f64,
    pub q: f64,
    pub label: String,
}

impl Modulation {
    pub fn new(p: f64, q: f64, label: impl Into<String>) -> Result<Self> {
        if !(p > 0.0 && q > 0.0) || !(p.is_finite() && q.is_finite()) {
            return Err(Error::domain("Modulation", format!("p and q must be positive, got {p}, {q}")));
        }
        Ok(Modulation {
            p,
            q,
            label: label.into(),
        })
    }

    pub fn bpsk() -> Self {
        Modulation {
            p: 1.0,
            q: 1.0,
            label: "bpsk".into(),
        }
    }

    /// M-PSK with q = sin(2π/M), as some references state it.
    pub fn mpsk_sin(m: u32) -> Result<Self> {
        check_order(m)?;
        Self::new(2.0, (2.0 * std::f64::consts::PI / m as f64).sin(), format!("{m}psk-sin"))
    }

    /// M-PSK with the usual high-SNR constants p = 2, q = sin²(π/M).
    pub fn mpsk(m: u32) -> Result<Self> {
        check_order(m)?;
        Self::new(2.0, (std::f64::consts::PI / m as f64).sin().powi(2), format!("{m}psk"))
    }
}

fn check_order(m: u32) -> Result<()> {
    if m < 3 {
        return Err(Error::domain("Modulation", format!("M-PSK needs M >= 3, got {m}")));
    }
    Ok(())
}

/// Which evaluator produced a metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    ClosedForm,
    Quadrature,
    Series,
    /// The series was requested but could not be trusted.
    QuadratureFallback,
}

impl Route {
    pub fn as_str(&self) -> &'static str {
        match self {
            Route::ClosedForm => "closed_form",
            Route::Quadrature => "quadrature",
            Route::Series => "series",
            Route::QuadratureFallback => "quadrature_fallback",
        }
    }
}

/// A metric value tagged with the route that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Evaluated {
    pub value: f64,
    pub route: Route,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricPoint {
    pub avg_snr_a: f64,
    pub avg_snr_b: f64,
    pub op: f64,
    pub op_asymptotic: f64,
    pub asep: f64,
    pub capacity: f64,
    pub asep_route: Route,
    pub capacity_route: Route,
}

/// Evaluation choices shared by every point of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricOptions {
    pub gamma_out: f64,
    pub asep_method: AsepMethod,
    pub upper_limit: UpperLimit,
    pub series: SeriesControl,
}

impl Default for MetricOptions {
    fn default() -> Self {
        MetricOptions {
            gamma_out: 1.0,
            asep_method: AsepMethod::Quadrature,
            upper_limit: UpperLimit::Auto,
            series: SeriesControl::default(),
        }
    }
}

pub fn evaluate(
    a: &G2aLink,
    b: &A2gLink,
    modulation: &Modulation,
    opts: &MetricOptions,
) -> Result<MetricPoint> {
    let op = outage_total(outage_hop(a, opts.gamma_out), outage_hop(b, opts.gamma_out));
    let op_asymptotic = outage_asymptotic(a, b, opts.gamma_out);
    let pa = asep_hop_a(a, modulation, opts.asep_method, &opts.series)?;
    let pb = asep_hop_b(b, modulation)?;
    let ca = capacity_hop_a(a, opts.upper_limit)?;
    let cb = capacity_hop_b(b, opts.upper_limit)?;
    Ok(MetricPoint {
        avg_snr_a: a.avg_snr,
        avg_snr_b: b.avg_snr,
        op,
        op_asymptotic,
        asep: asep_total(pa.value, pb),
        capacity: capacity_total(ca, cb),
        asep_route: pa.route,
        capacity_route: Route::Quadrature,
    })
}

/// Outage of one hop: P(γ < γ_out).
pub fn outage_hop<D: SnrDistribution + ?Sized>(dist: &D, gamma_out: f64) -> f64 {
    dist.cdf(gamma_out)
}

/// End-to-end outage of a DF link: P(min(γa, γb) < γ_out).
pub fn outage_total(p_a: f64, p_b: f64) -> f64 {
    p_a + p_b - p_a * p_b
}

/// High-SNR outage: the leading term of each hop's expansion, summed.
/// The first-hop constant uses Γ(a_k), not Γ(a_k + 1).
pub fn outage_asymptotic(a: &G2aLink, b: &A2gLink, gamma_out: f64) -> f64 {
    let first: f64 = a
        .fits
        .iter()
        .map(|f| {
            let ln_base = 2.0 * f.b.ln() - gamma_out.ln() - f.path_loss.ln()
                + 2.0 / f.a * ln_gamma_unchecked(f.a)
                + a.avg_snr.ln();
            -0.5 * f.a * ln_base
        })
        .sum::<f64>()
        .exp();
    let second = (-b.k0).exp() * (1.0 + b.k0) * gamma_out * b.loss / b.avg_snr;
    first + second
}

/// DF end-to-end symbol error probability.
pub fn asep_total(p_a: f64, p_b: f64) -> f64 {
    p_a + p_b - 2.0 * p_a * p_b
}

/// DF end-to-end capacity in bits/s/Hz (half-duplex).
pub fn capacity_total(c_a: f64, c_b: f64) -> f64 {
    0.5 * c_a.min(c_b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combiners() {
        assert_eq!(outage_total(0.0, 0.3), 0.3);
        assert_eq!(outage_total(1.0, 0.3), 1.0);
        assert!((outage_total(0.1, 0.2) - 0.28).abs() < 1e-15);
        assert_eq!(asep_total(0.5, 0.5), 0.5);
        assert!((asep_total(0.1, 0.2) - 0.26).abs() < 1e-15);
        assert_eq!(capacity_total(2.0, 6.0), 1.0);
        assert_eq!(capacity_total(0.0, 3.0), 0.0);
    }

    #[test]
    fn modulation_presets() {
        let b = Modulation::bpsk();
        assert_eq!((b.p, b.q), (1.0, 1.0));
        assert!((Modulation::mpsk(4).unwrap().q - 0.5).abs() < 1e-15);
        assert!((Modulation::mpsk_sin(4).unwrap().q - 1.0).abs() < 1e-15);
        assert!(Modulation::mpsk_sin(2).is_err());
    }

    #[test]
    fn asymptote_second_term() {
        let fit = crate::channel::GammaFit::new(8.0, 0.5, 10.0).unwrap();
        let a = G2aLink::new(vec![fit], 1e30).unwrap();
        let b = A2gLink::new(1e-300, 20.0, 1e4).unwrap();
        let v = outage_asymptotic(&a, &b, 1.0);
        assert!((v - 20.0 / 1e4).abs() < 1e-12);
    }
}
