use std::f64::consts::{LN_2, PI};

use crate::error::{Error, Result};
use crate::quad::{integrate, QuadControl};
use crate::series::{shell_series, SeriesOutcome, SeriesStatus};
use crate::snrstats::{A2gLink, G2aLink, SnrDistribution};
use crate::specfun::{hyp2f1_ratio_scaled, laguerre, SeriesControl};

/// Upper limit φ of the truncated capacity integral ∫_0^φ (1−F)/(1+γ) dγ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UpperLimit {
    /// γ̄², or further out if the CDF has not yet saturated there.
    Auto,
    /// Exactly γ̄².
    SnrSquared,
    /// factor·γ̄².
    Scaled(f64),
    Fixed(f64),
}

const TAIL_CCDF: f64 = 1e-16;

pub fn upper_limit<D: SnrDistribution + ?Sized>(dist: &D, avg_snr: f64, mode: UpperLimit) -> f64 {
    let squared = avg_snr * avg_snr;
    match mode {
        UpperLimit::SnrSquared => squared,
        UpperLimit::Scaled(f) => f * squared,
        UpperLimit::Fixed(t) => t,
        UpperLimit::Auto => {
            let mut t = dist.scale().max(1.0);
            while dist.ccdf(t) > TAIL_CCDF && t < 1e300 {
                t *= 2.0;
            }
            squared.max(t)
        }
    }
}

/// (1/ln2)·∫_0^φ (1 − F(γ))/(1+γ) dγ, integrated in s = ln(1+γ).
pub fn capacity_quadrature<D: SnrDistribution + ?Sized>(dist: &D, upper: f64) -> Result<f64> {
    if !(upper >= 0.0) {
        return Err(Error::domain("capacity_quadrature", format!("upper limit must be >= 0, got {upper}")));
    }
    let s_max = upper.ln_1p();
    let scale = dist.scale();
    let mut cuts = vec![0.0, (0.1 * scale).ln_1p(), scale.ln_1p(), (10.0 * scale).ln_1p(), s_max];
    cuts.retain(|&c| c <= s_max);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let ctl = QuadControl::default();
    let mut total = 0.0;
    for w in cuts.windows(2) {
        total += integrate(|s| dist.ccdf(s.exp_m1()), w[0], w[1], &ctl)?.value;
    }
    Ok(total / LN_2)
}

pub fn capacity_hop_a(link: &G2aLink, limit: UpperLimit) -> Result<f64> {
    capacity_quadrature(link, upper_limit(link, link.avg_snr, limit))
}

pub fn capacity_hop_b(link: &A2gLink, limit: UpperLimit) -> Result<f64> {
    capacity_quadrature(link, upper_limit(link, link.avg_snr, limit))
}

fn check_upper(t: f64, func: &'static str) -> Result<()> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::domain(func, format!("upper limit must be positive, got {t}")));
    }
    Ok(())
}

// Shell series with y_k = √(P_L,k·t/γ̄)/b_k, turned into a capacity:
// (1/ln2)·[ln(1+t) − Σ_s w(s)·e_s].
fn g2a_capacity_series<W>(link: &G2aLink, t: f64, weight: W, ctl: &SeriesControl) -> SeriesOutcome
where
    W: FnMut(usize) -> (f64, f64),
{
    let shapes: Vec<f64> = link.fits.iter().map(|f| f.a).collect();
    let ys: Vec<f64> = link
        .fits
        .iter()
        .map(|f| (f.path_loss * t / link.avg_snr).sqrt() / f.b)
        .collect();
    let mut out = shell_series(&shapes, &ys, weight, ctl);
    out.value = (t.ln_1p() - out.value) / LN_2;
    out.max_term /= LN_2;
    out
}

/// First-hop capacity from the K-fold series with the ₂F₁ integrals
/// ∫_0^t x^r/(1+x) dx evaluated by [`hyp2f1_ratio_scaled`].
pub fn capacity_hop_a_hyp2f1(link: &G2aLink, t: f64, ctl: &SeriesControl) -> Result<SeriesOutcome> {
    check_upper(t, "capacity_hop_a_hyp2f1")?;
    let a_sum = link.shape_sum();
    Ok(g2a_capacity_series(
        link,
        t,
        |s| {
            let r = 0.5 * (a_sum + s as f64);
            match hyp2f1_ratio_scaled(r + 1.0, t) {
                Ok(v) => (t.ln() + v.ln(), 1.0),
                Err(_) => (f64::NAN, 1.0),
            }
        },
        ctl,
    ))
}

/// First-hop capacity with the same integrals expanded through the
/// series-minus-cosecant identity; needs t > 1 and non-integer Σa_k.
pub fn capacity_hop_a_cosecant(link: &G2aLink, t: f64, ctl: &SeriesControl) -> Result<SeriesOutcome> {
    check_upper(t, "capacity_hop_a_cosecant")?;
    if t <= 1.0 {
        return Err(Error::domain("capacity_hop_a_cosecant", "upper limit must exceed 1"));
    }
    let a_sum = link.shape_sum();
    // r_s = (A + s)/2 hits an integer for some s iff A itself is an integer.
    if (a_sum - a_sum.round()).abs() < INTEGER_GUARD {
        return Err(Error::domain(
            "capacity_hop_a_cosecant",
            format!("shape sum {a_sum} is too close to an integer"),
        ));
    }
    let mut failed = None;
    let out = g2a_capacity_series(
        link,
        t,
        |s| {
            let r = 0.5 * (a_sum + s as f64);
            match appendix_a_scaled(r, t, ctl) {
                Ok(v) => (v.abs().ln(), v.signum()),
                Err(e) => {
                    failed.get_or_insert(e);
                    (f64::NAN, 1.0)
                }
            }
        },
        ctl,
    );
    match failed {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

const INTEGER_GUARD: f64 = 1e-6;

fn check_identity_args(r: f64, t: f64) -> Result<()> {
    if !(r > 0.0) || !r.is_finite() || (r - r.round()).abs() < INTEGER_GUARD {
        return Err(Error::domain(
            "appendix_a_identity",
            format!("r must be positive and not within {INTEGER_GUARD} of an integer, got {r}"),
        ));
    }
    if !(t > 1.0) || !t.is_finite() {
        return Err(Error::domain("appendix_a_identity", format!("t must exceed 1, got {t}")));
    }
    Ok(())
}

// t^{−r}·[Σ_k (−1)^k t^{r−k}/(r−k) − π·csc(πr)]
fn appendix_a_scaled(r: f64, t: f64, ctl: &SeriesControl) -> Result<f64> {
    check_identity_args(r, t)?;
    let mut sum = 0.0;
    let mut pw = 1.0;
    for k in 0..ctl.max_terms {
        let kf = k as f64;
        let term = if k % 2 == 0 { pw } else { -pw } / (r - kf);
        sum += term;
        if kf > r && ctl.negligible(term, sum) {
            return Ok(sum - PI / (PI * r).sin() * (-r * t.ln()).exp());
        }
        pw /= t;
    }
    Err(Error::NonConvergence {
        func: "appendix_a_identity",
        iterations: ctl.max_terms,
        partial: sum,
    })
}

/// Σ_{k≥0} (−1)^k t^{r−k}/(r−k) − π·csc(πr), which equals ∫_0^t x^r/(1+x) dx
/// for non-integer r > 0 and t > 1.
pub fn appendix_a_identity(r: f64, t: f64, ctl: &SeriesControl) -> Result<f64> {
    check_identity_args(r, t)?;
    let mut sum = 0.0;
    let mut pw = t.powf(r);
    for k in 0..ctl.max_terms {
        let kf = k as f64;
        let term = if k % 2 == 0 { pw } else { -pw } / (r - kf);
        sum += term;
        if kf > r && ctl.negligible(term, sum) {
            return Ok(sum - PI / (PI * r).sin());
        }
        pw /= t;
    }
    Err(Error::NonConvergence {
        func: "appendix_a_identity",
        iterations: ctl.max_terms,
        partial: sum,
    })
}

/// Second-hop capacity from the Laguerre expansion of the Rician CDF:
/// (1/ln2)·[ln(1+t)·R1 + Σ_n c_n·Σ_{i=1}^{n+1} (−1)^i t^i/i] with
/// c_n = e^{−K}·L_n(K)·β^{n+1}/(n+1)! and R1 = 1 + Σ_n c_n.
pub fn capacity_hop_b_series(link: &A2gLink, t: f64, ctl: &SeriesControl) -> Result<SeriesOutcome> {
    check_upper(t, "capacity_hop_b_series")?;
    let k = link.k0;
    let beta = link.beta();
    let ln_t1 = t.ln_1p();
    let mut sum = ln_t1;
    let mut max_term: f64 = 0.0;
    // ln(β^{n+1}/(n+1)!) and the running inner alternating sum.
    let mut ln_pow = -k;
    let mut inner = 0.0;
    let mut t_pow = 1.0;
    let mut quiet = 0;
    for n in 0..ctl.max_terms {
        let m = (n + 1) as f64;
        ln_pow += beta.ln() - m.ln();
        t_pow *= -t;
        inner += t_pow / m;
        let c = laguerre(n, 0.0, k) * ln_pow.exp();
        let term = c * (ln_t1 + inner);
        sum += term;
        max_term = max_term.max(term.abs());
        if !sum.is_finite() {
            return Ok(SeriesOutcome {
                value: sum / LN_2,
                terms: n + 1,
                max_term: max_term / LN_2,
                status: SeriesStatus::Diverged,
            });
        }
        if ctl.negligible(term, sum) {
            quiet += 1;
            if quiet >= 3 {
                let status = if max_term > 1e6 * sum.abs() {
                    SeriesStatus::Cancellation
                } else {
                    SeriesStatus::Converged
                };
                return Ok(SeriesOutcome {
                    value: sum / LN_2,
                    terms: n + 1,
                    max_term: max_term / LN_2,
                    status,
                });
            }
        } else {
            quiet = 0;
        }
    }
    Ok(SeriesOutcome {
        value: sum / LN_2,
        terms: ctl.max_terms,
        max_term: max_term / LN_2,
        status: SeriesStatus::Truncated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::GammaFit;

    #[test]
    fn identity_half_integer() {
        let ctl = SeriesControl::default();
        let v = appendix_a_identity(0.5, 4.0, &ctl).unwrap();
        let exact = 2.0 * (2.0 - 2f64.atan());
        assert!((v - exact).abs() < 1e-12, "{v} vs {exact}");
        assert!(appendix_a_identity(2.0, 4.0, &ctl).is_err());
        assert!(appendix_a_identity(0.5, 0.9, &ctl).is_err());
        let scaled = appendix_a_scaled(0.5, 4.0, &ctl).unwrap();
        assert!((scaled * 2.0 - exact).abs() < 1e-12);
    }

    #[test]
    fn deterministic_channel_bound() {
        // A step CDF at γ0 gives log2(1+γ0) once φ passes γ0.
        struct Step(f64);
        impl SnrDistribution for Step {
            fn cdf(&self, g: f64) -> f64 {
                if g < self.0 { 0.0 } else { 1.0 }
            }
            fn pdf(&self, _: f64) -> f64 {
                0.0
            }
            fn scale(&self) -> f64 {
                self.0
            }
        }
        let c = capacity_quadrature(&Step(100.0), 1e4).unwrap();
        assert!((c - 101f64.log2()).abs() < 1e-9, "{c}");
    }

    #[test]
    fn cosecant_and_hyp2f1_routes_agree() {
        let ctl = SeriesControl::default();
        let fit = GammaFit::new(1.61, 0.488, 1.61 * 0.488 * 0.488 * 2.61).unwrap();
        let link = G2aLink::new(vec![fit], 1.0).unwrap();
        let a = capacity_hop_a_hyp2f1(&link, 4.0, &ctl).unwrap();
        let b = capacity_hop_a_cosecant(&link, 4.0, &ctl).unwrap();
        assert!(a.is_reliable() && b.is_reliable(), "{a:?} {b:?}");
        assert!((a.value - b.value).abs() < 1e-10);
        let q = capacity_quadrature(&link, 4.0).unwrap();
        assert!((a.value - q).abs() < 1e-9, "{} vs {q}", a.value);
    }

    #[test]
    fn laguerre_series_low_snr() {
        let ctl = SeriesControl {
            max_terms: 200,
            ..Default::default()
        };
        let link = A2gLink::new(3.0, 1.0, 3.0).unwrap();
        let t = 9.0;
        let s = capacity_hop_b_series(&link, t, &ctl).unwrap();
        let q = capacity_quadrature(&link, t).unwrap();
        assert!((s.value - q).abs() < 1e-8, "{s:?} vs {q}");
    }
}
