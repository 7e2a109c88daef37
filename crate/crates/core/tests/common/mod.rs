//! Independent reference implementations used as oracles. None of these
//! share code with the library: quadrature is double-exponential rather
//! than Gauss–Kronrod, and special functions come from plain series.
#![allow(dead_code)]

use std::f64::consts::{FRAC_PI_2, PI};

/// Tanh-sinh quadrature on a finite interval. Endpoint singularities are
/// fine as long as the integrand is never evaluated exactly at an endpoint.
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> f64 {
    let c = 0.5 * (a + b);
    let hw = 0.5 * (b - a);
    let t_max = 6.0;
    let eval = |t: f64| -> f64 {
        let s = FRAC_PI_2 * t.sinh();
        let ch = s.cosh();
        let w = hw * FRAC_PI_2 * t.cosh() / (ch * ch);
        if w == 0.0 || !w.is_finite() {
            return 0.0;
        }
        // Distance from the nearer endpoint, formed without cancellation.
        let d = hw * 2.0 / ((2.0 * s.abs()).exp() + 1.0);
        if d == 0.0 {
            return 0.0;
        }
        let x = if s >= 0.0 { b - d } else { a + d };
        let x = if s.abs() < 0.5 { c + hw * s.tanh() } else { x };
        if x <= a || x >= b {
            return 0.0;
        }
        w * f(x)
    };
    let mut h = 1.0;
    let mut sum = eval(0.0);
    let mut k = 1.0;
    while k * h <= t_max {
        sum += eval(k * h) + eval(-k * h);
        k += 1.0;
    }
    let mut prev = sum * h;
    for level in 1..=14 {
        h *= 0.5;
        let mut t = h;
        while t <= t_max {
            sum += eval(t) + eval(-t);
            t += 2.0 * h;
        }
        let cur = sum * h;
        if level >= 3 && (cur - prev).abs() <= rel_tol * cur.abs() {
            return cur;
        }
        prev = cur;
    }
    prev
}

/// ∫_a^∞ f via x = a + u/(1−u).
pub fn tanh_sinh_inf<F: Fn(f64) -> f64>(f: F, a: f64, rel_tol: f64) -> f64 {
    tanh_sinh(
        |u| {
            let v = 1.0 - u;
            let g = f(a + u / v) / (v * v);
            if g.is_finite() {
                g
            } else {
                0.0
            }
        },
        0.0,
        1.0,
        rel_tol,
    )
}

/// ln Γ by upward shift to x ≥ 30 and the Stirling series there.
pub fn ln_gamma_oracle(x: f64) -> f64 {
    let mut shift = 0.0;
    let mut z = x;
    while z < 30.0 {
        shift += z.ln();
        z += 1.0;
    }
    // Bernoulli coefficients B_{2k}/(2k(2k−1)).
    const C: [f64; 8] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360360.0,
        1.0 / 156.0,
        -3617.0 / 122400.0,
    ];
    let z2 = z * z;
    let mut corr = 0.0;
    let mut zp = z;
    for c in C {
        corr += c / zp;
        zp *= z2;
    }
    (z - 0.5) * z.ln() - z + 0.5 * (2.0 * PI).ln() + corr - shift
}

pub fn gamma_oracle(x: f64) -> f64 {
    ln_gamma_oracle(x).exp()
}

/// I_0 by its power series.
pub fn bessel_i0_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..400 {
        term *= q / (k as f64 * k as f64);
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    sum
}

/// L_n^(α)(x) by the explicit binomial sum.
pub fn laguerre_binomial(n: usize, alpha: f64, x: f64) -> f64 {
    let mut total = 0.0;
    for i in 0..=n {
        // C(n+α, n−i) = Π_{j=1}^{n−i} (α+i+j)/j
        let binom: f64 = (1..=n - i).map(|j| (alpha + (i + j) as f64) / j as f64).product();
        let fact: f64 = (1..=i).map(|j| j as f64).product();
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        total += sign * binom * x.powi(i as i32) / fact;
    }
    total
}

/// Φ1(a, b, c; x, y) by its double power series.
pub fn phi1_series(a: f64, b: f64, c: f64, x: f64, y: f64) -> f64 {
    let mut total = 0.0;
    // Outer over m: (a)_m (b)_m x^m / ((c)_m m!), inner over n with shifted
    // Pochhammers (a+m)_n / ((c+m)_n n!) y^n.
    let mut outer = 1.0;
    for m in 0..2000 {
        let mf = m as f64;
        let mut inner_term = 1.0;
        let mut inner = 1.0;
        for n in 0..2000 {
            let nf = n as f64;
            inner_term *= (a + mf + nf) / ((c + mf + nf) * (nf + 1.0)) * y;
            inner += inner_term;
            if inner_term.abs() < 1e-18 * inner.abs() {
                break;
            }
        }
        let contrib = outer * inner;
        total += contrib;
        if m > 5 && contrib.abs() < 1e-17 * total.abs() {
            break;
        }
        outer *= (a + mf) * (b + mf) / ((c + mf) * (mf + 1.0)) * x;
    }
    total
}

/// Mean of the Nakagami-m amplitude with spread Ω, by quadrature.
pub fn nakagami_mean(m: f64, omega: f64) -> f64 {
    let ln_norm = std::f64::consts::LN_2 + m * (m / omega).ln() - ln_gamma_oracle(m);
    tanh_sinh_inf(
        |x| {
            if x <= 0.0 {
                return 0.0;
            }
            (ln_norm + 2.0 * m * x.ln() - m * x * x / omega).exp()
        },
        0.0,
        1e-13,
    )
}

/// Q_1(a, b) as the tail integral of the Rice density.
pub fn marcum_q1_quadrature(a: f64, b: f64) -> f64 {
    tanh_sinh_inf(
        |x| {
            let ax = a * x;
            // x·e^{−(x−a)²/2}·e^{−ax}I_0(ax)
            x * (-0.5 * (x - a) * (x - a)).exp() * bessel_i0_series(ax) * (-ax).exp()
        },
        b,
        1e-13,
    )
}

/// Tiny deterministic generator for picking random test parameters.
pub struct SplitMix(pub u64);

impl SplitMix {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
}

pub fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs()
}
