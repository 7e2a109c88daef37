//! Experiment configuration: a JSON file, dB at the boundary, validated with
//! dotted field paths in every error.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::channel::{
    self, db_to_linear, A2gEnvironment, GammaFit, K0Mode, LossConvention, RisSpec, Scene, SceneDistances,
};
use crate::error::{Error, Result};
use crate::mcsim::{McConfig, NakagamiCascade};
use crate::metrics::{AsepMethod, MetricOptions, Modulation, UpperLimit};
use crate::snrstats::{A2gLink, G2aLink};
use crate::specfun::SeriesControl;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub name: String,
    #[serde(default = "default_carrier")]
    pub carrier_hz: f64,
    #[serde(default)]
    pub gamma_out_db: f64,
    #[serde(default)]
    pub modulation: ModulationConfig,
    pub ris: Vec<RisConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scene: Option<SceneConfig>,
    #[serde(default)]
    pub a2g: A2gConfig,
    #[serde(default)]
    pub link: LinkConfig,
    pub sweep: SweepConfig,
    /// Families of curves sharing the sweep; each overrides a few settings.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub curves: Vec<CurveConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mc: Option<McSettings>,
    #[serde(default)]
    pub series: SeriesControl,
    #[serde(default)]
    pub asep_method: AsepMethodConfig,
    #[serde(default)]
    pub capacity_upper: UpperLimitConfig,
}

fn default_carrier() -> f64 {
    2e9
}
fn one() -> f64 {
    1.0
}
fn five() -> f64 {
    5.0
}
fn default_baseline() -> f64 {
    40.0
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ModulationConfig {
    #[default]
    Bpsk,
    /// p = 2, q = sin²(π/M).
    Mpsk(u32),
    /// p = 2, q = sin(2π/M).
    MpskSin(u32),
    Custom { p: f64, q: f64 },
}

impl ModulationConfig {
    pub fn build(&self) -> Result<Modulation> {
        match *self {
            ModulationConfig::Bpsk => Ok(Modulation::bpsk()),
            ModulationConfig::Mpsk(m) => Modulation::mpsk(m),
            ModulationConfig::MpskSin(m) => Modulation::mpsk_sin(m),
            ModulationConfig::Custom { p, q } => Modulation::new(p, q, "custom"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum PathLossConfig {
    /// From the scene distances, carrier and gains.
    #[default]
    Geometry,
    /// P_L = E[Z²], so the configured SNR is the mean per-path SNR.
    MeanNormalized,
    FixedDb(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RisConfig {
    pub n_elements: u32,
    #[serde(default = "one")]
    pub m1: f64,
    #[serde(default = "one")]
    pub m2: f64,
    #[serde(default = "one")]
    pub omega1: f64,
    #[serde(default = "one")]
    pub omega2: f64,
    #[serde(default = "five")]
    pub g1_dbi: f64,
    #[serde(default = "five")]
    pub g2_dbi: f64,
    #[serde(default = "one")]
    pub efficiency: f64,
    /// Position along the RIS line, perpendicular to the S–D baseline.
    #[serde(default)]
    pub offset: f64,
    #[serde(default)]
    pub path_loss: PathLossConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneConfig {
    pub d_sd: f64,
    #[serde(default = "default_baseline")]
    pub ris_baseline: f64,
    pub uav_x: f64,
    pub uav_h: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum K0Config {
    Db(f64),
    /// a2·exp(b2·θ) with θ the elevation angle seen from the destination.
    Model,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum A2gLossConfig {
    Geometry,
    FixedDb(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct A2gConfig {
    pub k0: K0Config,
    pub a1: f64,
    pub b1: f64,
    pub a2: f64,
    pub b2: f64,
    pub excess_loss_db: f64,
    pub loss: A2gLossConfig,
    pub loss_convention: LossConvention,
}

impl Default for A2gConfig {
    fn default() -> Self {
        A2gConfig {
            k0: K0Config::Db(4.77),
            a1: 1.0,
            b1: 2.0,
            a2: 1.0,
            b2: 2.0 * 15f64.ln() / std::f64::consts::PI,
            excess_loss_db: 0.0,
            loss: A2gLossConfig::Geometry,
            loss_convention: LossConvention::Literal,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LinkConfig {
    /// Joint average SNR, γ̄_a = γ̄_b.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub avg_snr_db: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub avg_snr_a_db: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub avg_snr_b_db: Option<f64>,
    /// Noise powers used when splitting a total budget.
    pub n0_db: f64,
    pub nu_db: f64,
}

impl Default for LinkConfig {
    fn default() -> Self {
        LinkConfig {
            avg_snr_db: None,
            avg_snr_a_db: None,
            avg_snr_b_db: None,
            n0_db: 0.0,
            nu_db: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    AvgSnrDb,
    NElements,
    NRis,
    UavHeight,
    UavX,
    TotalPower,
}

impl SweepVariable {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepVariable::AvgSnrDb => "avg_snr_db",
            SweepVariable::NElements => "n_elements",
            SweepVariable::NRis => "n_ris",
            SweepVariable::UavHeight => "uav_height",
            SweepVariable::UavX => "uav_x",
            SweepVariable::TotalPower => "total_power",
        }
    }

    fn is_integer(&self) -> bool {
        matches!(self, SweepVariable::NElements | SweepVariable::NRis)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub variable: SweepVariable,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl SweepConfig {
    /// Evenly spaced values from start to stop inclusive.
    pub fn values(&self) -> Vec<f64> {
        let n = self.steps.max(2);
        let span = self.stop - self.start;
        (0..n)
            .map(|i| {
                let v = self.start + span * i as f64 / (n - 1) as f64;
                if self.variable.is_integer() {
                    v.round()
                } else {
                    v
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_ris: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_elements: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub avg_snr_db: Option<f64>,
}

impl CurveConfig {
    pub fn label(&self) -> String {
        if let Some(l) = &self.label {
            return l.clone();
        }
        let mut parts = Vec::new();
        if let Some(k) = self.n_ris {
            parts.push(format!("K={k}"));
        }
        if let Some(n) = self.n_elements {
            parts.push(format!("N={n}"));
        }
        if let Some(s) = self.avg_snr_db {
            parts.push(format!("snr={s}dB"));
        }
        parts.join(" ")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct McSettings {
    pub trials: u64,
    pub seed: u64,
    pub streams: usize,
    pub batch: u64,
}

impl Default for McSettings {
    fn default() -> Self {
        let d = McConfig::default();
        McSettings {
            trials: d.trials,
            seed: d.seed,
            streams: d.streams,
            batch: d.batch,
        }
    }
}

impl From<McSettings> for McConfig {
    fn from(s: McSettings) -> Self {
        McConfig {
            trials: s.trials,
            seed: s.seed,
            streams: s.streams,
            batch: s.batch,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AsepMethodConfig {
    #[default]
    Quadrature,
    Series,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum UpperLimitConfig {
    #[default]
    Auto,
    SnrSquared,
    Scaled(f64),
}

/// Read, parse and validate a configuration file.
pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let cfg: ExperimentConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        Error::config(path, e.into_inner().to_string())
    })?;
    cfg.validate()?;
    Ok(cfg)
}

fn positive(path: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::config(path, format!("must be positive and finite, got {v}")))
    }
}

fn finite(path: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::config(path, format!("must be finite, got {v}")))
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        positive("carrier_hz", self.carrier_hz)?;
        finite("gamma_out_db", self.gamma_out_db)?;
        self.modulation
            .build()
            .map_err(|e| Error::config("modulation", e.to_string()))?;
        if self.ris.is_empty() {
            return Err(Error::config("ris", "at least one RIS is required"));
        }
        let mut needs_scene = false;
        for (i, r) in self.ris.iter().enumerate() {
            let spec = r.spec(1.0, 1.0);
            spec.validate()
                .map_err(|e| Error::config(format!("ris[{i}]"), e.to_string()))?;
            finite(&format!("ris[{i}].offset"), r.offset)?;
            match r.path_loss {
                PathLossConfig::Geometry => needs_scene = true,
                PathLossConfig::FixedDb(v) => finite(&format!("ris[{i}].path_loss.fixed_db"), v)?,
                PathLossConfig::MeanNormalized => {}
            }
        }
        let a = &self.a2g;
        match a.k0 {
            K0Config::Db(v) => finite("a2g.k0.db", v)?,
            K0Config::Model => {
                needs_scene = true;
                finite("a2g.a2", a.a2)?;
                finite("a2g.b2", a.b2)?;
                positive("a2g.a2", a.a2)?;
            }
        }
        match a.loss {
            A2gLossConfig::Geometry => {
                needs_scene = true;
                finite("a2g.a1", a.a1)?;
                finite("a2g.b1", a.b1)?;
                finite("a2g.excess_loss_db", a.excess_loss_db)?;
            }
            A2gLossConfig::FixedDb(v) => finite("a2g.loss.fixed_db", v)?,
        }
        if let Some(s) = &self.scene {
            positive("scene.d_sd", s.d_sd)?;
            positive("scene.ris_baseline", s.ris_baseline)?;
            finite("scene.uav_x", s.uav_x)?;
            positive("scene.uav_h", s.uav_h)?;
        }
        let var = self.sweep.variable;
        if needs_scene && self.scene.is_none() {
            return Err(Error::config("scene", "required by geometric path loss or the K0 model"));
        }
        if matches!(var, SweepVariable::UavHeight | SweepVariable::UavX) && self.scene.is_none() {
            return Err(Error::config("scene", format!("required by a {} sweep", var.as_str())));
        }

        let l = &self.link;
        finite("link.n0_db", l.n0_db)?;
        finite("link.nu_db", l.nu_db)?;
        for (p, v) in [
            ("link.avg_snr_db", l.avg_snr_db),
            ("link.avg_snr_a_db", l.avg_snr_a_db),
            ("link.avg_snr_b_db", l.avg_snr_b_db),
        ] {
            if let Some(v) = v {
                finite(p, v)?;
            }
        }
        if l.avg_snr_db.is_some() && (l.avg_snr_a_db.is_some() || l.avg_snr_b_db.is_some()) {
            return Err(Error::config("link", "give either avg_snr_db or the per-hop values, not both"));
        }
        if l.avg_snr_a_db.is_some() != l.avg_snr_b_db.is_some() {
            return Err(Error::config("link", "avg_snr_a_db and avg_snr_b_db go together"));
        }
        let sweeps_snr = matches!(var, SweepVariable::AvgSnrDb | SweepVariable::TotalPower);
        let has_snr = l.avg_snr_db.is_some() || l.avg_snr_a_db.is_some();
        for (i, c) in self.curves.iter().enumerate() {
            if c.avg_snr_db.is_some() && sweeps_snr {
                return Err(Error::config(
                    format!("curves[{i}].avg_snr_db"),
                    format!("conflicts with the {} sweep", var.as_str()),
                ));
            }
            if let Some(v) = c.avg_snr_db {
                finite(&format!("curves[{i}].avg_snr_db"), v)?;
            }
            if let Some(k) = c.n_ris {
                if k == 0 || k > self.ris.len() {
                    return Err(Error::config(
                        format!("curves[{i}].n_ris"),
                        format!("must lie in 1..={}", self.ris.len()),
                    ));
                }
            }
            if c.n_elements == Some(0) {
                return Err(Error::config(format!("curves[{i}].n_elements"), "must be at least 1"));
            }
        }
        if !sweeps_snr && !has_snr && !self.curves.iter().all(|c| c.avg_snr_db.is_some()) {
            return Err(Error::config("link.avg_snr_db", "an average SNR is required"));
        }

        let s = &self.sweep;
        if s.steps < 2 {
            return Err(Error::config("sweep.steps", format!("need at least 2 steps, got {}", s.steps)));
        }
        finite("sweep.start", s.start)?;
        finite("sweep.stop", s.stop)?;
        for v in self.sweep.values() {
            let bad = |msg: String| Err(Error::config("sweep", msg));
            match var {
                SweepVariable::NElements if v < 1.0 => return bad(format!("n_elements {v} must be at least 1")),
                SweepVariable::NRis if v < 1.0 || v > self.ris.len() as f64 => {
                    return bad(format!("n_ris {v} must lie in 1..={}", self.ris.len()));
                }
                SweepVariable::UavHeight if v <= 0.0 => return bad(format!("height {v} must be positive")),
                _ => {}
            }
        }
        if var.is_integer() {
            let exact = (s.stop - s.start) / (s.steps - 1) as f64;
            if s.start.fract() != 0.0 || exact.fract() != 0.0 {
                return Err(Error::config("sweep", "integer sweeps need an integer start and step"));
            }
        }
        if let Some(mc) = &self.mc {
            McConfig::from(*mc)
                .validate()
                .map_err(|e| Error::config("mc", e.to_string()))?;
        }
        self.series
            .validate()
            .map_err(|e| Error::config("series", e.to_string()))?;
        if let UpperLimitConfig::Scaled(f) = self.capacity_upper {
            positive("capacity_upper.scaled", f)?;
        }
        Ok(())
    }

    pub fn metric_options(&self) -> MetricOptions {
        MetricOptions {
            gamma_out: db_to_linear(self.gamma_out_db),
            asep_method: match self.asep_method {
                AsepMethodConfig::Quadrature => AsepMethod::Quadrature,
                AsepMethodConfig::Series => AsepMethod::Series,
            },
            upper_limit: match self.capacity_upper {
                UpperLimitConfig::Auto => UpperLimit::Auto,
                UpperLimitConfig::SnrSquared => UpperLimit::SnrSquared,
                UpperLimitConfig::Scaled(f) => UpperLimit::Scaled(f),
            },
            series: self.series,
        }
    }
}

impl RisConfig {
    fn spec(&self, d1: f64, d2: f64) -> RisSpec {
        RisSpec {
            n_elements: self.n_elements,
            m1: self.m1,
            m2: self.m2,
            omega1: self.omega1,
            omega2: self.omega2,
            d1,
            d2,
            g1_dbi: self.g1_dbi,
            g2_dbi: self.g2_dbi,
            efficiency: self.efficiency,
        }
    }
}

/// Values that fix one operating point apart from the link SNRs.
#[derive(Debug, Clone, Default)]
pub struct PointOverrides {
    pub n_ris: Option<usize>,
    pub n_elements: Option<u32>,
    pub uav_h: Option<f64>,
    pub uav_x: Option<f64>,
}

/// Everything derived from the configuration at one operating point.
#[derive(Debug, Clone)]
pub struct Derived {
    pub specs: Vec<RisSpec>,
    pub fits: Vec<GammaFit>,
    pub paths: Vec<NakagamiCascade>,
    pub k0: f64,
    pub loss: f64,
    pub p_los: Option<f64>,
    pub distances: Option<SceneDistances>,
}

impl Derived {
    pub fn g2a(&self, avg_snr: f64) -> Result<G2aLink> {
        G2aLink::new(self.fits.clone(), avg_snr)
    }

    pub fn a2g(&self, avg_snr: f64) -> Result<A2gLink> {
        A2gLink::new(self.k0, self.loss, avg_snr)
    }
}

impl ExperimentConfig {
    /// Geometry → distances → path losses → fits, and the A2G link constants.
    pub fn derive(&self, ov: &PointOverrides) -> Result<Derived> {
        let k = ov.n_ris.unwrap_or(self.ris.len());
        let ris = &self.ris[..k.min(self.ris.len())];
        let scene = self.scene.as_ref().map(|s| Scene {
            d_sd: s.d_sd,
            ris_baseline: s.ris_baseline,
            ris_offsets: ris.iter().map(|r| r.offset).collect(),
            uav_x: ov.uav_x.unwrap_or(s.uav_x),
            uav_h: ov.uav_h.unwrap_or(s.uav_h),
        });
        let distances = scene.as_ref().map(channel::scene_distances).transpose()?;
        let lambda = channel::wavelength(self.carrier_hz);

        let mut specs = Vec::with_capacity(k);
        let mut fits = Vec::with_capacity(k);
        let mut paths = Vec::with_capacity(k);
        for (i, r) in ris.iter().enumerate() {
            let (d1, d2) = distances.as_ref().map_or((1.0, 1.0), |d| d.ris[i]);
            let mut spec = r.spec(d1, d2);
            if let Some(n) = ov.n_elements {
                spec.n_elements = n;
            }
            let (a, b) = channel::moment_fit(spec.n_elements, spec.m1, spec.m2, spec.omega1, spec.omega2)?;
            let pl = match r.path_loss {
                PathLossConfig::Geometry => channel::path_loss(&spec, lambda)?,
                PathLossConfig::MeanNormalized => a * b * b * (1.0 + a),
                PathLossConfig::FixedDb(v) => db_to_linear(v),
            };
            let fit = GammaFit::new(a, b, pl)?;
            paths.push(NakagamiCascade::with_path_loss(&spec, pl));
            fits.push(fit);
            specs.push(spec);
        }

        let a = &self.a2g;
        let env = scene.as_ref().map(|s| A2gEnvironment {
            h: s.uav_h,
            r0: (s.d_sd - s.uav_x).abs(),
            a1: a.a1,
            b1: a.b1,
            a2: a.a2,
            b2: a.b2,
            excess_loss_db: a.excess_loss_db,
            k0_mode: match a.k0 {
                K0Config::Db(v) => K0Mode::Fixed(db_to_linear(v)),
                K0Config::Model => K0Mode::Model,
            },
            loss_convention: a.loss_convention,
        });
        if let Some(e) = &env {
            e.validate()?;
        }
        let k0 = match (a.k0, &env) {
            (K0Config::Db(v), _) => db_to_linear(v),
            (K0Config::Model, Some(e)) => channel::rician_factor(e),
            (K0Config::Model, None) => return Err(Error::config("scene", "required by the K0 model")),
        };
        let loss = match (a.loss, &env) {
            (A2gLossConfig::FixedDb(v), _) => db_to_linear(v),
            (A2gLossConfig::Geometry, Some(e)) => channel::a2g_loss(e)?,
            (A2gLossConfig::Geometry, None) => return Err(Error::config("scene", "required by the A2G loss")),
        };
        Ok(Derived {
            specs,
            fits,
            paths,
            k0,
            loss,
            p_los: env.as_ref().map(|e| e.los_probability()),
            distances,
        })
    }

    /// The curves to run; a config without any runs a single unlabeled one.
    pub fn curve_list(&self) -> Vec<CurveConfig> {
        if self.curves.is_empty() {
            vec![CurveConfig::default()]
        } else {
            self.curves.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "ris": [{"n_elements": 5, "path_loss": "mean_normalized"}],
        "a2g": {"loss": {"fixed_db": 0}},
        "sweep": {"variable": "avg_snr_db", "start": 0, "stop": 30, "steps": 4}
    }"#;

    #[test]
    fn minimal_config_gets_defaults() {
        let c = parse_config(MINIMAL).unwrap();
        assert_eq!(c.carrier_hz, 2e9);
        assert_eq!(c.gamma_out_db, 0.0);
        assert_eq!(c.ris[0].g1_dbi, 5.0);
        assert_eq!(c.a2g.k0, K0Config::Db(4.77));
        assert_eq!(c.sweep.values(), vec![0.0, 10.0, 20.0, 30.0]);
    }

    #[test]
    fn negative_n_names_the_field() {
        let text = MINIMAL.replace("\"n_elements\": 5", "\"n_elements\": -5");
        match parse_config(&text) {
            Err(Error::Config { path, .. }) => assert_eq!(path, "ris[0].n_elements"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn validation_paths() {
        let text = MINIMAL.replace("\"steps\": 4", "\"steps\": 1");
        assert!(matches!(parse_config(&text), Err(Error::Config { path, .. }) if path == "sweep.steps"));
        let text = MINIMAL.replace("\"mean_normalized\"", "\"geometry\"");
        assert!(matches!(parse_config(&text), Err(Error::Config { path, .. }) if path == "scene"));
        let text = MINIMAL.replace("\"n_elements\": 5", "\"n_elements\": 5, \"m1\": 0.1");
        assert!(matches!(parse_config(&text), Err(Error::Config { path, .. }) if path == "ris[0]"));
    }

    #[test]
    fn unknown_fields_rejected() {
        let text = MINIMAL.replace("\"ris\"", "\"rsi\": 1, \"ris\"");
        assert!(matches!(parse_config(&text), Err(Error::Config { .. })));
    }

    #[test]
    fn mean_normalization() {
        let c = parse_config(MINIMAL).unwrap();
        let d = c.derive(&PointOverrides::default()).unwrap();
        assert!((d.fits[0].second_moment() / d.fits[0].path_loss - 1.0).abs() < 1e-12);
        assert_eq!(d.loss, 1.0);
    }
}
