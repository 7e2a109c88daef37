//! Shell-ordered evaluation of the K-fold alternating series that appear in
//! the literal closed forms.
//!
//! The multi-index sums all share the per-RIS coefficient
//! c_k(n) = (−1)^n y_k^{a_k+n} / (n!·(a_k+n)·Γ(a_k)) and a weight that
//! depends only on the total degree s = Σ n_k. Summing shell by shell over s
//! lets the weight be applied once per shell and gives a natural truncation
//! order. These forms are kept for cross-checking; they cancel badly once
//! the y_k grow, which the returned status reports.

use serde::Serialize;

use crate::specfun::gamma::ln_gamma_unchecked;
use crate::specfun::SeriesControl;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesStatus {
    Converged,
    /// Converged, but the largest term dwarfs the sum; digits were lost.
    Cancellation,
    /// Ran out of terms before the tail became negligible.
    Truncated,
    /// Produced a non-finite partial sum.
    Diverged,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesOutcome {
    pub value: f64,
    pub terms: usize,
    pub max_term: f64,
    pub status: SeriesStatus,
}

impl SeriesOutcome {
    pub fn is_reliable(&self) -> bool {
        self.status == SeriesStatus::Converged
    }
}

// Terms larger than this multiple of the result mean ~6 lost digits.
const CANCELLATION_RATIO: f64 = 1e6;
const QUIET_SHELLS: usize = 3;

/// Σ_s w(s)·e_s where e_s sums Π_k c_k(n_k) over Σn_k = s.
///
/// `shapes` and `ys` hold a_k and y_k > 0. `ln_weight(s)` returns
/// (ln|w(s)|, sign of w(s)); it may be huge, since the Π y^a/Γ(a) prefactor
/// is folded into the same exponent before leaving log space.
fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

pub(crate) fn shell_series<W>(
    shapes: &[f64],
    ys: &[f64],
    mut ln_weight: W,
    ctl: &SeriesControl,
) -> SeriesOutcome
where
    W: FnMut(usize) -> (f64, f64),
{
    debug_assert_eq!(shapes.len(), ys.len());
    let k = shapes.len();
    let ln_prefactor: f64 = shapes
        .iter()
        .zip(ys)
        .map(|(&a, &y)| a * y.ln() - ln_gamma_unchecked(a))
        .sum();

    // d[k][n] = (−y_k)^n / (n!·(a_k+n)) and conv[j][s] = (d_0 * … * d_j)[s].
    // Every summand of shell s carries the sign (−1)^s, so both are kept as
    // logarithms of magnitudes: no cancellation, and no underflow of y^n/n!
    // while the weights are still astronomically large.
    let mut ln_d: Vec<Vec<f64>> = vec![Vec::new(); k];
    let mut ln_pw: Vec<f64> = vec![0.0; k];
    let mut ln_conv: Vec<Vec<f64>> = vec![Vec::new(); k];
    let ln_ys: Vec<f64> = ys.iter().map(|y| y.ln()).collect();

    let mut sum = 0.0;
    let mut max_term: f64 = 0.0;
    // Σ|term|, the scale against which cancellation is judged.
    let mut magnitude = 0.0;
    let mut quiet = 0;
    let mut scratch = Vec::new();

    for s in 0..ctl.max_terms {
        for i in 0..k {
            if s > 0 {
                ln_pw[i] += ln_ys[i] - (s as f64).ln();
            }
            ln_d[i].push(ln_pw[i] - (shapes[i] + s as f64).ln());
        }
        ln_conv[0].push(ln_d[0][s]);
        for j in 1..k {
            let (lo, hi) = ln_conv.split_at_mut(j);
            let prev = &lo[j - 1];
            scratch.clear();
            scratch.extend((0..=s).map(|n| prev[s - n] + ln_d[j][n]));
            hi[0].push(log_sum_exp(&scratch));
        }
        let ln_e = ln_conv[k - 1][s];
        let e_sign = if s % 2 == 0 { 1.0 } else { -1.0 };

        let (lw, sign) = ln_weight(s);
        let term = if sign == 0.0 || ln_e == f64::NEG_INFINITY {
            0.0
        } else {
            sign * e_sign * (ln_prefactor + lw + ln_e).exp()
        };
        magnitude += term.abs();
        sum += term;
        max_term = max_term.max(term.abs());

        if !sum.is_finite() {
            return SeriesOutcome {
                value: sum,
                terms: s + 1,
                max_term,
                status: SeriesStatus::Diverged,
            };
        }
        if ctl.negligible(term, sum) {
            quiet += 1;
            if quiet >= QUIET_SHELLS {
                let status = if magnitude > CANCELLATION_RATIO * sum.abs() {
                    SeriesStatus::Cancellation
                } else {
                    SeriesStatus::Converged
                };
                return SeriesOutcome {
                    value: sum,
                    terms: s + 1,
                    max_term,
                    status,
                };
            }
        } else {
            quiet = 0;
        }
    }
    SeriesOutcome {
        value: sum,
        terms: ctl.max_terms,
        max_term,
        status: SeriesStatus::Truncated,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::reg_lower_gamma;

    #[test]
    fn single_factor_is_incomplete_gamma() {
        let ctl = SeriesControl::default();
        for &(a, x) in &[(1.0, 0.5), (2.7, 1.3), (8.05, 3.0)] {
            let out = shell_series(&[a], &[x], |_| (0.0, 1.0), &ctl);
            assert!(out.is_reliable());
            let p = reg_lower_gamma(a, x).unwrap();
            assert!((out.value / p - 1.0).abs() < 1e-10, "a={a} x={x}");
        }
    }

    #[test]
    fn product_of_factors() {
        let ctl = SeriesControl::default();
        let a = [1.6, 4.0, 2.5];
        let y = [0.4, 1.1, 0.9];
        let out = shell_series(&a, &y, |_| (0.0, 1.0), &ctl);
        let p: f64 = a
            .iter()
            .zip(&y)
            .map(|(&a, &y)| reg_lower_gamma(a, y).unwrap())
            .product();
        assert!(out.is_reliable());
        assert!((out.value / p - 1.0).abs() < 1e-10);
    }

    #[test]
    fn cancellation_is_flagged() {
        let ctl = SeriesControl::default();
        let out = shell_series(&[2.0], &[40.0], |_| (0.0, 1.0), &ctl);
        assert_ne!(out.status, SeriesStatus::Converged);
    }
}
