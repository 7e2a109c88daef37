//! Scene geometry, path loss, the A2G environment model, and the Gamma
//! moment fit for each RIS-assisted path.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::ln_gamma;

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Wavelength in meters for a carrier frequency in Hz.
pub fn wavelength(fc_hz: f64) -> f64 {
    SPEED_OF_LIGHT / fc_hz
}

/// Physical description of one RIS-assisted path.
#[derive(Debug, Clone, PartialEq)]
pub struct RisSpec {
    pub n_elements: u32,
    pub m1: f64,
    pub m2: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub d1: f64,
    pub d2: f64,
    pub g1_dbi: f64,
    pub g2_dbi: f64,
    pub efficiency: f64,
}

impl RisSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::domain("RisSpec", what.to_string()));
        if self.n_elements == 0 {
            return bad("n_elements must be at least 1");
        }
        if !(self.m1 >= 0.5 && self.m2 >= 0.5) || !self.m1.is_finite() || !self.m2.is_finite() {
            return bad("Nakagami shapes must be finite and >= 0.5");
        }
        if !(self.omega1 > 0.0 && self.omega2 > 0.0) {
            return bad("spread parameters must be positive");
        }
        if !(self.d1 > 0.0 && self.d2 > 0.0) {
            return bad("distances must be positive");
        }
        if !(self.efficiency > 0.0 && self.efficiency <= 1.0) {
            return bad("efficiency must lie in (0, 1]");
        }
        if !(self.g1_dbi.is_finite() && self.g2_dbi.is_finite()) {
            return bad("gains must be finite");
        }
        Ok(())
    }
}

/// Gamma approximation of the cascaded amplitude sum Z_k ≈ Gamma(a, b),
/// together with the path loss that scales it into SNR.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GammaFit {
    pub a: f64,
    pub b: f64,
    pub path_loss: f64,
}

impl GammaFit {
    pub fn new(a: f64, b: f64, path_loss: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0 && path_loss > 0.0) || !(a.is_finite() && b.is_finite()) {
            return Err(Error::domain(
                "GammaFit",
                format!("need positive a, b, path_loss; got {a}, {b}, {path_loss}"),
            ));
        }
        Ok(GammaFit { a, b, path_loss })
    }

    /// E[Z²] under the fit.
    pub fn second_moment(&self) -> f64 {
        self.a * self.b * self.b * (1.0 + self.a)
    }
}

/// Path loss of one RIS path as a linear attenuation (≥ 1 in the far field).
pub fn path_loss(spec: &RisSpec, wavelength: f64) -> Result<f64> {
    if !(wavelength > 0.0) {
        return Err(Error::domain("path_loss", "wavelength must be positive"));
    }
    if !(spec.d1 > 0.0 && spec.d2 > 0.0 && spec.efficiency > 0.0) {
        return Err(Error::domain("path_loss", "distances and efficiency must be positive"));
    }
    let ln_gain = (wavelength / (4.0 * PI)).ln() * 4.0
        + (spec.g1_dbi + spec.g2_dbi) / 10.0 * std::f64::consts::LN_10
        + spec.efficiency.ln()
        - 2.0 * (spec.d1.ln() + spec.d2.ln());
    Ok((-ln_gain).exp())
}

/// Moment-matched (a, b) for the sum of `n` products of Nakagami amplitudes.
pub fn moment_fit(n: u32, m1: f64, m2: f64, omega1: f64, omega2: f64) -> Result<(f64, f64)> {
    // ρ = (E[αβ])² / E[(αβ)²] = Γ(m1+½)²Γ(m2+½)² / (m1 m2 Γ(m1)²Γ(m2)²)
    let ln_rho = 2.0 * (ln_gamma(m1 + 0.5)? + ln_gamma(m2 + 0.5)? - ln_gamma(m1)? - ln_gamma(m2)?)
        - m1.ln()
        - m2.ln();
    let one_minus_rho = -ln_rho.exp_m1();
    if !(one_minus_rho > 0.0) {
        return Err(Error::domain(
            "gamma_fit",
            format!("degenerate moment ratio for m1={m1}, m2={m2}"),
        ));
    }
    let rho = ln_rho.exp();
    let a = n as f64 * rho / one_minus_rho;
    let b = (omega1 * omega2).sqrt() * one_minus_rho / rho.sqrt();
    Ok((a, b))
}

pub fn gamma_fit(spec: &RisSpec, wavelength: f64) -> Result<GammaFit> {
    spec.validate()?;
    let (a, b) = moment_fit(spec.n_elements, spec.m1, spec.m2, spec.omega1, spec.omega2)?;
    GammaFit::new(a, b, path_loss(spec, wavelength)?)
}

/// How the A2G Rician factor is obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum K0Mode {
    /// Fixed linear value.
    Fixed(f64),
    /// a2·exp(b2·atan(h/r0)).
    Model,
}

/// How the A2G loss expression `10·log10(L0^α) + A` is turned into a divisor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LossConvention {
    /// The dB-valued expression is used directly as the linear divisor.
    Literal,
    /// The expression is read as dB and converted: L0^α·10^{A/10}.
    Physical,
}

#[derive(Debug, Clone, PartialEq)]
pub struct A2gEnvironment {
    pub h: f64,
    pub r0: f64,
    pub a1: f64,
    pub b1: f64,
    pub a2: f64,
    pub b2: f64,
    pub excess_loss_db: f64,
    pub k0_mode: K0Mode,
    pub loss_convention: LossConvention,
}

impl A2gEnvironment {
    pub fn validate(&self) -> Result<()> {
        if !(self.h > 0.0) {
            return Err(Error::domain("A2gEnvironment", "height must be positive"));
        }
        if !(self.r0 >= 0.0) {
            return Err(Error::domain("A2gEnvironment", "r0 must be non-negative"));
        }
        if let K0Mode::Fixed(k) = self.k0_mode {
            if !(k > 0.0) || !k.is_finite() {
                return Err(Error::domain("A2gEnvironment", "fixed K0 must be positive"));
            }
        }
        Ok(())
    }

    pub fn los_probability(&self) -> f64 {
        los_probability(self.h, self.r0)
    }

    /// Path-loss exponent α = a1·P_LoS + b1.
    pub fn exponent(&self) -> f64 {
        self.a1 * self.los_probability() + self.b1
    }
}

/// LoS probability as a product over the obstruction rows between UAV and
/// destination; an empty product gives 1.
pub fn los_probability(h: f64, r0: f64) -> f64 {
    let m = (r0 / 200.0 * 6f64.sqrt() - 1.0).floor();
    if m < 0.0 {
        return 1.0;
    }
    let m = m as u64;
    let h2 = h * h;
    (0..=m)
        .map(|n| {
            let f = 1.0 - (n as f64 + 0.5) / (m as f64 + 1.0);
            -(-h2 * f * f / 450.0).exp_m1()
        })
        .product()
}

pub fn rician_factor(env: &A2gEnvironment) -> f64 {
    match env.k0_mode {
        K0Mode::Fixed(k) => k,
        K0Mode::Model => {
            let angle = if env.r0 == 0.0 {
                FRAC_PI_2
            } else {
                (env.h / env.r0).atan()
            };
            env.a2 * (env.b2 * angle).exp()
        }
    }
}

pub fn a2g_loss(env: &A2gEnvironment) -> Result<f64> {
    let l0 = env.h.hypot(env.r0);
    let alpha = env.exponent();
    match env.loss_convention {
        LossConvention::Literal => {
            let l = 10.0 * alpha * l0.log10() + env.excess_loss_db;
            if !(l > 0.0) {
                return Err(Error::domain(
                    "a2g_loss",
                    format!("literal loss {l} is not a positive divisor (L0 = {l0} m)"),
                ));
            }
            Ok(l)
        }
        LossConvention::Physical => Ok(l0.powf(alpha) * db_to_linear(env.excess_loss_db)),
    }
}

/// Source at the origin, destination at `d_sd` along the baseline, RISs on a
/// line perpendicular to the baseline at `ris_baseline`.
#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub d_sd: f64,
    pub ris_baseline: f64,
    pub ris_offsets: Vec<f64>,
    pub uav_x: f64,
    pub uav_h: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SceneDistances {
    /// (source→RIS, RIS→UAV) per RIS, meters.
    pub ris: Vec<(f64, f64)>,
    /// UAV–destination horizontal distance.
    pub r0: f64,
}

pub fn scene_distances(scene: &Scene) -> Result<SceneDistances> {
    let dx = scene.uav_x - scene.ris_baseline;
    let mut ris = Vec::with_capacity(scene.ris_offsets.len());
    for &off in &scene.ris_offsets {
        let d1 = scene.ris_baseline.hypot(off);
        let d2 = (dx * dx + off * off + scene.uav_h * scene.uav_h).sqrt();
        if !(d1 > 0.0 && d2 > 0.0) {
            return Err(Error::domain(
                "scene_distances",
                format!("degenerate RIS distance at offset {off}"),
            ));
        }
        ris.push((d1, d2));
    }
    Ok(SceneDistances {
        ris,
        r0: (scene.d_sd - scene.uav_x).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(n: u32) -> RisSpec {
        RisSpec {
            n_elements: n,
            m1: 1.0,
            m2: 1.0,
            omega1: 1.0,
            omega2: 1.0,
            d1: 40.0,
            d2: 40.0,
            g1_dbi: 5.0,
            g2_dbi: 5.0,
            efficiency: 1.0,
        }
    }

    #[test]
    fn unit_path_loss() {
        let lambda = 0.2;
        let d = lambda / (4.0 * PI);
        let s = RisSpec {
            d1: d,
            d2: d,
            g1_dbi: 0.0,
            g2_dbi: 0.0,
            ..spec(1)
        };
        assert!((path_loss(&s, lambda).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reference_path_loss() {
        let pl = path_loss(&spec(1), wavelength(2e9)).unwrap();
        assert!((pl / 1.264e13 - 1.0).abs() < 1e-3, "{pl:e}");
        let far = RisSpec { d1: 80.0, ..spec(1) };
        let ratio = path_loss(&far, wavelength(2e9)).unwrap() / pl;
        assert!((ratio - 4.0).abs() < 1e-12);
    }

    #[test]
    fn rayleigh_fit() {
        let f = gamma_fit(&spec(5), 0.15).unwrap();
        let r = PI * PI / 16.0;
        assert!((f.a / (5.0 * r / (1.0 - r)) - 1.0).abs() < 1e-13);
        assert!((f.b / ((1.0 - r) / (PI / 4.0)) - 1.0).abs() < 1e-13);
        let g = gamma_fit(&spec(10), 0.15).unwrap();
        assert!((g.a / f.a - 2.0).abs() < 1e-13);
        assert_eq!(g.b, f.b);
    }

    #[test]
    fn los_model() {
        assert_eq!(los_probability(50.0, 50.0), 1.0);
        let p = los_probability(50.0, 100.0);
        assert!((p - (1.0 - (-2500.0f64 * 0.25 / 450.0).exp())).abs() < 1e-15);
        assert!((los_probability(1e6, 1500.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn loss_conventions() {
        let mut env = A2gEnvironment {
            h: 6.0,
            r0: 8.0,
            a1: 0.0,
            b1: 2.0,
            a2: 1.0,
            b2: 0.0,
            excess_loss_db: 0.0,
            k0_mode: K0Mode::Model,
            loss_convention: LossConvention::Literal,
        };
        assert!((a2g_loss(&env).unwrap() - 20.0).abs() < 1e-12);
        assert_eq!(rician_factor(&env), 1.0);
        env.loss_convention = LossConvention::Physical;
        assert!((a2g_loss(&env).unwrap() - 100.0).abs() < 1e-10);
        env.h = 0.3;
        env.r0 = 0.4;
        env.loss_convention = LossConvention::Literal;
        assert!(a2g_loss(&env).is_err());
    }

    #[test]
    fn fixed_k0_from_db() {
        let k = db_to_linear(4.77);
        assert!((k - 3.0).abs() < 2e-3);
    }

    #[test]
    fn geometry() {
        let scene = Scene {
            d_sd: 100.0,
            ris_baseline: 40.0,
            ris_offsets: vec![0.0],
            uav_x: 40.0,
            uav_h: 30.0,
        };
        let d = scene_distances(&scene).unwrap();
        assert_eq!(d.ris[0], (40.0, 30.0));
        assert_eq!(d.r0, 60.0);
        let at_dest = Scene {
            uav_x: 100.0,
            ..scene
        };
        assert_eq!(scene_distances(&at_dest).unwrap().r0, 0.0);
    }
}
