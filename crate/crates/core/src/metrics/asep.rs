use std::f64::consts::PI;

use super::{Evaluated, Modulation, Route};
use crate::error::Result;
use crate::quad::{integrate, QuadControl};
use crate::series::{shell_series, SeriesOutcome};
use crate::snrstats::{A2gLink, G2aLink, SnrDistribution};
use crate::specfun::gamma::ln_gamma_unchecked;
use crate::specfun::{humbert_phi1, hyp1f1, SeriesControl};

/// How the first-hop ASEP is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AsepMethod {
    Quadrature,
    /// The K-fold series, falling back to quadrature when it is unreliable.
    Series,
}

/// E[p·Q(√(2qγ))] = (p√q/√π)·∫_0^∞ e^{−qt²}·F(t²) dt for any SNR law.
pub fn asep_quadrature<D: SnrDistribution + ?Sized>(dist: &D, modulation: &Modulation) -> Result<f64> {
    let (p, q) = (modulation.p, modulation.q);
    let ctl = QuadControl {
        abs_tol: 0.0,
        rel_tol: 1e-11,
        max_subdivisions: 4000,
    };
    // e^{−qt²} is below 1e-300 past this point.
    let t_max = (700.0 / q).sqrt();
    // Break where the Gaussian kernel and the CDF rise each matter.
    let mut cuts = vec![0.0, 1.0 / q.sqrt(), dist.scale().sqrt(), t_max];
    cuts.retain(|&c| c <= t_max);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut total = 0.0;
    for w in cuts.windows(2) {
        total += integrate(|t| (-q * t * t).exp() * dist.cdf(t * t), w[0], w[1], &ctl)?.value;
    }
    Ok(p * q.sqrt() / PI.sqrt() * total)
}

/// First-hop ASEP as the truncated K-fold series
/// (p/(2√π))·Σ_s e_s·Γ(r_s + ½) with y_k = √(P_L,k/(qγ̄))/b_k and
/// r_s = (Σa_k + s)/2.
pub fn asep_hop_a_series(link: &G2aLink, modulation: &Modulation, ctl: &SeriesControl) -> SeriesOutcome {
    let shapes: Vec<f64> = link.fits.iter().map(|f| f.a).collect();
    let ys: Vec<f64> = link
        .fits
        .iter()
        .map(|f| (f.path_loss / (modulation.q * link.avg_snr)).sqrt() / f.b)
        .collect();
    let a_sum: f64 = shapes.iter().sum();
    let ln_pre = modulation.p.ln() - (2.0 * PI.sqrt()).ln();
    shell_series(
        &shapes,
        &ys,
        |s| (ln_pre + ln_gamma_unchecked(0.5 * (a_sum + s as f64) + 0.5), 1.0),
        ctl,
    )
}

pub fn asep_hop_a(
    link: &G2aLink,
    modulation: &Modulation,
    method: AsepMethod,
    ctl: &SeriesControl,
) -> Result<Evaluated> {
    if method == AsepMethod::Series {
        let out = asep_hop_a_series(link, modulation, ctl);
        if out.is_reliable() && (0.0..=modulation.p * 0.5).contains(&out.value) {
            return Ok(Evaluated {
                value: out.value,
                route: Route::Series,
            });
        }
        return Ok(Evaluated {
            value: asep_quadrature(link, modulation)?,
            route: Route::QuadratureFallback,
        });
    }
    Ok(Evaluated {
        value: asep_quadrature(link, modulation)?,
        route: Route::Quadrature,
    })
}

/// Second-hop ASEP in closed form through Humbert's Φ1 and Kummer's ₁F₁.
pub fn asep_hop_b(link: &A2gLink, modulation: &Modulation) -> Result<f64> {
    let (p, q, k) = (modulation.p, modulation.q, link.k0);
    let s = link.avg_snr / link.loss;
    let d = q * s + k + 1.0;
    let x = (k + 1.0) / d;
    let y = k * (k + 1.0) / d;
    let bracket = humbert_phi1(0.5, 1.0, 1.0, x, y)? - hyp1f1(0.5, 1.0, y)?;
    Ok(0.5 * p * q.sqrt() * (s / d).sqrt() * (-k).exp() * bracket)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::GammaFit;

    #[test]
    fn rayleigh_limit_of_second_hop() {
        let m = Modulation::bpsk();
        for &snr in &[0.5, 10.0, 1000.0] {
            let link = A2gLink::new(1e-9, 20.0, snr).unwrap();
            let g = snr / 20.0;
            let exact = 0.5 * (1.0 - (g / (1.0 + g)).sqrt());
            let v = asep_hop_b(&link, &m).unwrap();
            assert!((v / exact - 1.0).abs() < 1e-7, "snr={snr}: {v} vs {exact}");
        }
    }

    #[test]
    fn closed_form_matches_quadrature() {
        let m = Modulation::bpsk();
        for &snr in &[1.0, 30.0, 1000.0] {
            let link = A2gLink::new(3.0, 1.0, snr).unwrap();
            let cf = asep_hop_b(&link, &m).unwrap();
            let qd = asep_quadrature(&link, &m).unwrap();
            assert!((cf / qd - 1.0).abs() < 1e-8, "snr={snr}: {cf} vs {qd}");
        }
    }

    #[test]
    fn low_snr_limit() {
        let m = Modulation::bpsk();
        let link = A2gLink::new(3.0, 1.0, 1e-8).unwrap();
        assert!((asep_hop_b(&link, &m).unwrap() - 0.5).abs() < 1e-3);
        let fit = GammaFit::new(8.0, 0.5, 1.0).unwrap();
        let a = G2aLink::new(vec![fit], 1e-8).unwrap();
        assert!((asep_quadrature(&a, &m).unwrap() - 0.5).abs() < 1e-3);
    }

    #[test]
    fn series_matches_quadrature_at_high_snr() {
        let m = Modulation::bpsk();
        let fits = vec![
            GammaFit::new(8.05, 0.488, 17.5).unwrap(),
            GammaFit::new(8.05, 0.488, 17.5).unwrap(),
        ];
        let link = G2aLink::new(fits, 100.0).unwrap();
        let s = asep_hop_a_series(&link, &m, &SeriesControl::default());
        assert!(s.is_reliable(), "{s:?}");
        let q = asep_quadrature(&link, &m).unwrap();
        assert!((s.value - q).abs() < 1e-10 + 1e-8 * q, "{} vs {q}", s.value);
    }
}
