//! First-order Marcum Q as a Poisson mixture of incomplete gamma tails:
//! Q1(a,b) = Σ_j Pois(j; a²/2) · Q(j+1, b²/2). Both Q1 and its complement
//! are accumulated directly from positive terms, so neither suffers
//! cancellation in its own tail.

use super::gamma::gamma_pq;

fn truncation(lambda: f64) -> usize {
    (lambda + 12.0 * lambda.sqrt() + 40.0).ceil() as usize
}

// ln(e^{-λ} λ^j / j!) for j = 0..=n.
fn ln_poisson(lambda: f64, n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    if lambda == 0.0 {
        out.push(0.0);
        out.resize(n + 1, f64::NEG_INFINITY);
        return out;
    }
    let ll = lambda.ln();
    let mut acc = -lambda;
    out.push(acc);
    for j in 1..=n {
        acc += ll - (j as f64).ln();
        out.push(acc);
    }
    out
}

fn check(a: f64, b: f64) -> Option<f64> {
    if a.is_nan() || b.is_nan() {
        return Some(f64::NAN);
    }
    None
}

/// Marcum Q-function Q1(a, b) for a, b ≥ 0.
pub fn marcum_q1(a: f64, b: f64) -> f64 {
    if let Some(v) = check(a, b) {
        return v;
    }
    let (a, b) = (a.abs(), b.abs());
    if b == 0.0 {
        return 1.0;
    }
    if b.is_infinite() {
        return 0.0;
    }
    let lambda = 0.5 * a * a;
    let x = 0.5 * b * b;
    let n = truncation(lambda);
    let w = ln_poisson(lambda, n);
    let lx = x.ln();

    // Q(j+1, x) = Σ_{i=0..j} e^{-x} x^i / i!, built upward.
    let mut ln_term = -x;
    let mut q = ln_term.exp();
    let mut sum = w[0].exp() * q;
    for (j, wj) in w.iter().enumerate().skip(1) {
        ln_term += lx - (j as f64).ln();
        q += ln_term.exp();
        sum += (wj.exp() * q.min(1.0)).min(1.0);
    }
    sum.clamp(0.0, 1.0)
}

/// Complement 1 − Q1(a, b), accurate when Q1 is close to one.
pub fn marcum_p1(a: f64, b: f64) -> f64 {
    if let Some(v) = check(a, b) {
        return v;
    }
    let (a, b) = (a.abs(), b.abs());
    if b == 0.0 {
        return 0.0;
    }
    if b.is_infinite() {
        return 1.0;
    }
    let lambda = 0.5 * a * a;
    let x = 0.5 * b * b;
    let n = truncation(lambda);
    let w = ln_poisson(lambda, n);
    let lx = x.ln();

    // P(n+1, x) directly, then P(j, x) = P(j+1, x) + e^{-x} x^j / j! downward.
    let Ok((mut p, _)) = gamma_pq((n + 1) as f64, x) else {
        return f64::NAN;
    };
    let ln_fact_n: f64 = (1..=n).map(|i| (i as f64).ln()).sum();
    let mut ln_term = -x + n as f64 * lx - ln_fact_n;
    let mut sum = 0.0;
    for j in (0..=n).rev() {
        // p currently holds P(j+1, x)
        sum += w[j].exp() * p;
        p += ln_term.exp();
        if j > 0 {
            ln_term -= lx - (j as f64).ln();
        }
    }
    sum.clamp(0.0, 1.0)
}
