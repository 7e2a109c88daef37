use std::f64::consts::PI;

use super::gamma::ln_gamma_unchecked;
use super::SeriesControl;
use crate::error::{Error, Result};
use crate::quad::{integrate, integrate_pieces, QuadControl};

/// Kummer's confluent hypergeometric function ₁F₁(a; b; x).
///
/// Negative arguments go through Kummer's transformation so the series
/// always has terms of one sign when `a` and `b` are positive.
pub fn hyp1f1(a: f64, b: f64, x: f64) -> Result<f64> {
    if !(b > 0.0) || !a.is_finite() || !x.is_finite() {
        return Err(Error::domain(
            "hyp1f1",
            format!("need b > 0 and finite a, x; got a={a}, b={b}, x={x}"),
        ));
    }
    if x < 0.0 {
        return Ok(x.exp() * hyp1f1_series(b - a, b, -x)?);
    }
    hyp1f1_series(a, b, x)
}

fn hyp1f1_series(a: f64, b: f64, x: f64) -> Result<f64> {
    let ctl = SeriesControl::default();
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 0..ctl.max_terms {
        let nf = n as f64;
        let ratio = (a + nf) * x / ((b + nf) * (nf + 1.0));
        term *= ratio;
        sum += term;
        if term.abs() <= 0.5 * f64::EPSILON * sum.abs() && ratio.abs() < 1.0 {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergence {
        func: "hyp1f1",
        iterations: ctl.max_terms,
        partial: sum,
    })
}

const EULER_SERIES_LIMIT: f64 = 3.0;
const INTEGER_GUARD: f64 = 1e-6;

/// ∫_0^u x^{μ−1}/(1+x) dx, i.e. (u^μ/μ)·₂F₁(1, μ; 1+μ; −u).
pub fn hyp2f1_ratio(mu: f64, u: f64) -> Result<f64> {
    if u == 0.0 {
        check(mu, u)?;
        return Ok(0.0);
    }
    let scaled = hyp2f1_ratio_scaled(mu, u)?;
    Ok((mu * u.ln()).exp() * scaled)
}

/// u^{−μ}·∫_0^u x^{μ−1}/(1+x) dx = ₂F₁(1, μ; 1+μ; −u)/μ, which stays finite
/// for large u^μ.
pub fn hyp2f1_ratio_scaled(mu: f64, u: f64) -> Result<f64> {
    check(mu, u)?;
    if u == 0.0 {
        return Ok(1.0 / mu);
    }
    if u <= EULER_SERIES_LIMIT {
        return euler_scaled(mu, u);
    }
    if let Some(v) = appendix_scaled(mu, u) {
        return Ok(v);
    }
    split_quadrature_scaled(mu, u)
}

fn check(mu: f64, u: f64) -> Result<()> {
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(Error::domain("hyp2f1_ratio", format!("mu must be positive, got {mu}")));
    }
    if !(u >= 0.0) || !u.is_finite() {
        return Err(Error::domain(
            "hyp2f1_ratio",
            format!("u must be finite and non-negative, got {u}"),
        ));
    }
    Ok(())
}

// Pfaff: ₂F₁(1,μ;1+μ;−u) = (1+u)^{-1}·₂F₁(1,1;1+μ;z), z = u/(1+u);
// the transformed series has positive terms with ratio below z.
fn euler_scaled(mu: f64, u: f64) -> Result<f64> {
    let ctl = SeriesControl::default();
    let z = u / (1.0 + u);
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 0..ctl.max_terms {
        let nf = n as f64;
        term *= z * (nf + 1.0) / (mu + 1.0 + nf);
        sum += term;
        if term < 1e-17 * sum {
            return Ok(sum / (mu * (1.0 + u)));
        }
    }
    Err(Error::NonConvergence {
        func: "hyp2f1_ratio",
        iterations: ctl.max_terms,
        partial: sum / (mu * (1.0 + u)),
    })
}

// Σ_k (−1)^k u^{μ−1−k}/(μ−1−k) + π·csc(πμ), scaled by u^{−μ}. Declines
// (returns None) near integer μ or when cancellation would cost more than
// six digits.
fn appendix_scaled(mu: f64, u: f64) -> Option<f64> {
    if (mu - mu.round()).abs() < INTEGER_GUARD {
        return None;
    }
    let mut sum = 0.0;
    let mut biggest: f64 = 0.0;
    let mut pw = 1.0 / u;
    for k in 0..2000 {
        let term = pw / (mu - 1.0 - k as f64);
        let term = if k % 2 == 0 { term } else { -term };
        sum += term;
        biggest = biggest.max(term.abs());
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
        pw /= u;
    }
    let csc = PI / (PI * mu).sin() * (-mu * u.ln()).exp();
    biggest = biggest.max(csc.abs());
    let value = sum + csc;
    if !(value > 0.0) || biggest > 1e6 * value {
        return None;
    }
    Some(value)
}

// I(μ,1) by the Euler series plus ∫_1^u on a log grid.
fn split_quadrature_scaled(mu: f64, u: f64) -> Result<f64> {
    let ln_u = u.ln();
    let head = euler_scaled(mu, 1.0)? * (-mu * ln_u).exp();
    let tail = integrate(
        |s| (mu * (s - ln_u)).exp() / (1.0 + s.exp()),
        0.0,
        ln_u,
        &QuadControl::relative(1e-13),
    )?;
    Ok(head + tail.value)
}

/// Humbert's confluent function Φ1(a, b; c; x, y) through its Euler integral,
/// taken in the variable t = sin²θ so that endpoint powers stay integrable.
pub fn humbert_phi1(a: f64, b: f64, c: f64, x: f64, y: f64) -> Result<f64> {
    if !(a > 0.0 && c > a) || !b.is_finite() || !c.is_finite() {
        return Err(Error::domain(
            "humbert_phi1",
            format!("integral form needs c > a > 0, got a={a}, c={c}"),
        ));
    }
    if !(x < 1.0) || !y.is_finite() {
        return Err(Error::domain(
            "humbert_phi1",
            format!("need x < 1 and finite y, got x={x}, y={y}"),
        ));
    }
    let ln_norm = ln_gamma_unchecked(c) - ln_gamma_unchecked(a) - ln_gamma_unchecked(c - a);
    let p = 2.0 * a - 1.0;
    let r = 2.0 * (c - a) - 1.0;
    // Pull e^{max(y,0)} out so the integrand stays O(1).
    let shift = y.max(0.0);
    let f = |theta: f64| {
        let (s, co) = theta.sin_cos();
        let t = s * s;
        // 1 − x·sin²θ, written to stay accurate as x → 1 and θ → π/2
        let base = (1.0 - x) + x * co * co;
        let mut v = 2.0 * base.powf(-b) * (y * t - shift).exp();
        if p != 0.0 {
            v *= s.powf(p);
        }
        if r != 0.0 {
            v *= co.powf(r);
        }
        v
    };
    // As x → 1 the factor (1 − x sin²θ)^{−b} peaks in a window of width
    // ~√(1−x) below π/2; lay breakpoints out geometrically across it.
    let mut cuts = vec![0.0];
    if x > 0.9 {
        let w = (1.0 - x).sqrt();
        let mut c = w;
        let mut inner = Vec::new();
        while c < 0.5 {
            inner.push(0.5 * PI - c);
            c *= 8.0;
        }
        cuts.extend(inner.into_iter().rev());
    }
    cuts.push(0.5 * PI);
    let q = integrate_pieces(f, &cuts, &QuadControl::relative(1e-12))?;
    Ok(q.value * (ln_norm + shift).exp())
}
