use std::f64::consts::PI;

const SERIES_LIMIT: f64 = 30.0;

fn i0_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    loop {
        term *= q / (k * k);
        sum += term;
        if term < sum * 1e-17 {
            return sum;
        }
        k += 1.0;
    }
}

// √(2πx)·e^{−x}·I0(x) by the Hankel asymptotic expansion, x > 30.
fn i0_asymptotic_core(x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..60 {
        let kf = k as f64;
        let next = term * (2.0 * kf - 1.0).powi(2) / (8.0 * kf * x);
        if next.abs() > term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term < sum * 1e-17 {
            break;
        }
    }
    sum
}

/// Modified Bessel function I0(x). Overflows to +∞ past x ≈ 713.
pub fn bessel_i0(x: f64) -> f64 {
    let x = x.abs();
    if x <= SERIES_LIMIT {
        i0_series(x)
    } else {
        // Split the exponential so the prefactor does not overflow early.
        let half = (0.5 * x).exp();
        half * (half * i0_asymptotic_core(x) / (2.0 * PI * x).sqrt())
    }
}

/// Exponentially scaled e^{−x}·I0(x), finite for every x ≥ 0.
pub fn bessel_i0_scaled(x: f64) -> f64 {
    let x = x.abs();
    if x <= SERIES_LIMIT {
        (-x).exp() * i0_series(x)
    } else {
        i0_asymptotic_core(x) / (2.0 * PI * x).sqrt()
    }
}
