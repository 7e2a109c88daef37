//! Monte-Carlo oracle. Both hops are sampled at amplitude level and reduced
//! to per-batch moments; batches draw from their own ChaCha stream and are
//! merged in batch order, so results depend only on (seed, trials, batch)
//! and never on the thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::channel::{path_loss, RisSpec};
use crate::error::{Error, Result};
use crate::metrics::{asep_total, Modulation};
use crate::snrstats::A2gLink;
use crate::specfun::gaussian_q;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McConfig {
    pub trials: u64,
    pub seed: u64,
    /// Worker threads; 0 uses the ambient rayon pool.
    pub streams: usize,
    /// Trials per RNG stream.
    pub batch: u64,
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig {
            trials: 100_000,
            seed: 1,
            streams: 0,
            batch: 65_536,
        }
    }
}

impl McConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::domain("McConfig", "trials must be at least 1"));
        }
        if self.batch == 0 {
            return Err(Error::domain("McConfig", "batch must be at least 1"));
        }
        Ok(())
    }

    /// Independent configuration for the `index`-th point of a sweep.
    pub fn for_point(&self, index: u64) -> McConfig {
        McConfig {
            seed: splitmix64(self.seed ^ splitmix64(index.wrapping_add(0x5EED))),
            ..*self
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub trials: u64,
}

/// Fading and path-loss description of one RIS path for sampling.
#[derive(Debug, Clone, PartialEq)]
pub struct NakagamiCascade {
    pub n_elements: u32,
    pub m1: f64,
    pub m2: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub path_loss: f64,
}

impl NakagamiCascade {
    pub fn from_spec(spec: &RisSpec, wavelength: f64) -> Result<Self> {
        spec.validate()?;
        Ok(Self::with_path_loss(spec, path_loss(spec, wavelength)?))
    }

    pub fn with_path_loss(spec: &RisSpec, path_loss: f64) -> Self {
        NakagamiCascade {
            n_elements: spec.n_elements,
            m1: spec.m1,
            m2: spec.m2,
            omega1: spec.omega1,
            omega2: spec.omega2,
            path_loss,
        }
    }
}

struct CascadeSampler {
    n: u32,
    g1: Gamma<f64>,
    g2: Gamma<f64>,
    inv_path_loss: f64,
}

fn samplers(paths: &[NakagamiCascade]) -> Result<Vec<CascadeSampler>> {
    if paths.is_empty() {
        return Err(Error::domain("sample_g2a", "at least one RIS path is required"));
    }
    paths
        .iter()
        .map(|p| {
            let mk = |m: f64, o: f64| {
                Gamma::new(m, o / m).map_err(|e| Error::domain("sample_g2a", format!("Nakagami({m}, {o}): {e}")))
            };
            Ok(CascadeSampler {
                n: p.n_elements,
                g1: mk(p.m1, p.omega1)?,
                g2: mk(p.m2, p.omega2)?,
                inv_path_loss: 1.0 / p.path_loss,
            })
        })
        .collect()
}

#[inline]
fn draw_g2a<R: Rng + ?Sized>(s: &[CascadeSampler], avg_snr: f64, rng: &mut R) -> f64 {
    let mut best: f64 = 0.0;
    for c in s {
        let mut z = 0.0;
        for _ in 0..c.n {
            z += (c.g1.sample(rng) * c.g2.sample(rng)).sqrt();
        }
        best = best.max(avg_snr * c.inv_path_loss * z * z);
    }
    best
}

#[inline]
fn draw_a2g<R: Rng + ?Sized>(nu: f64, sigma: f64, snr_scale: f64, rng: &mut R) -> f64 {
    let x: f64 = nu + sigma * rng.sample::<f64, _>(StandardNormal);
    let y: f64 = sigma * rng.sample::<f64, _>(StandardNormal);
    (x * x + y * y) * snr_scale
}

fn rician_params(link: &A2gLink) -> (f64, f64, f64) {
    let k = link.k0;
    ((k / (1.0 + k)).sqrt(), (0.5 / (1.0 + k)).sqrt(), link.avg_snr / link.loss)
}

/// `n` draws of the best-of-K G2A SNR.
pub fn sample_g2a<R: Rng + ?Sized>(paths: &[NakagamiCascade], avg_snr: f64, n: usize, rng: &mut R) -> Result<Vec<f64>> {
    let s = samplers(paths)?;
    Ok((0..n).map(|_| draw_g2a(&s, avg_snr, rng)).collect())
}

/// `n` draws of the Rician A2G SNR.
pub fn sample_a2g<R: Rng + ?Sized>(link: &A2gLink, n: usize, rng: &mut R) -> Vec<f64> {
    let (nu, sigma, scale) = rician_params(link);
    (0..n).map(|_| draw_a2g(nu, sigma, scale, rng)).collect()
}

// Running mean and sum of squared deviations, mergeable in a fixed order.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    fn merge(&mut self, o: &Moments) {
        if o.n == 0 {
            return;
        }
        let n = self.n + o.n;
        let d = o.mean - self.mean;
        self.mean += d * o.n as f64 / n as f64;
        self.m2 += o.m2 + d * d * (self.n as f64 * o.n as f64 / n as f64);
        self.n = n;
    }

    fn estimate(&self) -> McEstimate {
        let var = if self.n > 1 { self.m2 / (self.n - 1) as f64 } else { 0.0 };
        McEstimate {
            mean: self.mean,
            std_error: (var / self.n as f64).sqrt(),
            trials: self.n,
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Accumulator {
    op: Moments,
    op_a: Moments,
    op_b: Moments,
    asep_a: Moments,
    asep_b: Moments,
    cap_a: Moments,
    cap_b: Moments,
}

impl Accumulator {
    fn push(&mut self, ga: f64, gb: f64, gamma_out: f64, m: &Modulation) {
        let ind = |c: bool| if c { 1.0 } else { 0.0 };
        self.op.push(ind(ga.min(gb) < gamma_out));
        self.op_a.push(ind(ga < gamma_out));
        self.op_b.push(ind(gb < gamma_out));
        self.asep_a.push(m.p * gaussian_q((2.0 * m.q * ga).sqrt()));
        self.asep_b.push(m.p * gaussian_q((2.0 * m.q * gb).sqrt()));
        self.cap_a.push(ga.ln_1p() / std::f64::consts::LN_2);
        self.cap_b.push(gb.ln_1p() / std::f64::consts::LN_2);
    }

    fn merge(&mut self, o: &Accumulator) {
        self.op.merge(&o.op);
        self.op_a.merge(&o.op_a);
        self.op_b.merge(&o.op_b);
        self.asep_a.merge(&o.asep_a);
        self.asep_b.merge(&o.asep_b);
        self.cap_a.merge(&o.cap_a);
        self.cap_b.merge(&o.cap_b);
    }

    fn finish(&self) -> McMetrics {
        let n = self.op.n;
        // Indicator variables get the textbook binomial standard error.
        let binomial = |m: &Moments| {
            let p = m.mean;
            McEstimate {
                mean: p,
                std_error: (p * (1.0 - p) / n as f64).sqrt(),
                trials: n,
            }
        };
        let (pa, pb) = (self.asep_a.estimate(), self.asep_b.estimate());
        let asep = McEstimate {
            mean: asep_total(pa.mean, pb.mean),
            std_error: ((1.0 - 2.0 * pb.mean).powi(2) * pa.std_error.powi(2)
                + (1.0 - 2.0 * pa.mean).powi(2) * pb.std_error.powi(2))
            .sqrt(),
            trials: n,
        };
        let (ca, cb) = (self.cap_a.estimate(), self.cap_b.estimate());
        let tighter = if ca.mean <= cb.mean { ca } else { cb };
        let capacity = McEstimate {
            mean: 0.5 * tighter.mean,
            std_error: 0.5 * tighter.std_error,
            trials: n,
        };
        McMetrics {
            op: binomial(&self.op),
            op_a: binomial(&self.op_a),
            op_b: binomial(&self.op_b),
            asep,
            asep_a: pa,
            asep_b: pb,
            capacity,
            capacity_a: ca,
            capacity_b: cb,
        }
    }
}

/// Empirical end-to-end and per-hop metrics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McMetrics {
    pub op: McEstimate,
    pub op_a: McEstimate,
    pub op_b: McEstimate,
    pub asep: McEstimate,
    pub asep_a: McEstimate,
    pub asep_b: McEstimate,
    pub capacity: McEstimate,
    pub capacity_a: McEstimate,
    pub capacity_b: McEstimate,
}

/// Reduce paired per-hop SNR samples to metric estimates.
pub fn estimate_metrics(samples_a: &[f64], samples_b: &[f64], gamma_out: f64, modulation: &Modulation) -> Result<McMetrics> {
    if samples_a.is_empty() || samples_a.len() != samples_b.len() {
        return Err(Error::domain(
            "estimate_metrics",
            format!("need equal, non-empty sample lists (got {} and {})", samples_a.len(), samples_b.len()),
        ));
    }
    let mut acc = Accumulator::default();
    for (&a, &b) in samples_a.iter().zip(samples_b) {
        acc.push(a, b, gamma_out, modulation);
    }
    Ok(acc.finish())
}

/// Everything the sampler needs for one operating point.
#[derive(Debug, Clone, PartialEq)]
pub struct McScenario {
    pub paths: Vec<NakagamiCascade>,
    pub avg_snr_a: f64,
    pub a2g: A2gLink,
    pub gamma_out: f64,
    pub modulation: Modulation,
}

pub fn run_mc(scn: &McScenario, cfg: &McConfig) -> Result<McMetrics> {
    cfg.validate()?;
    let s = samplers(&scn.paths)?;
    let (nu, sigma, scale) = rician_params(&scn.a2g);
    let batches = cfg.trials.div_ceil(cfg.batch);

    let run_batch = |i: u64| {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(i);
        let n = cfg.batch.min(cfg.trials - i * cfg.batch);
        let mut acc = Accumulator::default();
        for _ in 0..n {
            let ga = draw_g2a(&s, scn.avg_snr_a, &mut rng);
            let gb = draw_a2g(nu, sigma, scale, &mut rng);
            acc.push(ga, gb, scn.gamma_out, &scn.modulation);
        }
        acc
    };
    let collect = || (0..batches).into_par_iter().map(run_batch).collect::<Vec<_>>();
    let parts = if cfg.streams == 0 {
        collect()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.streams)
            .build()
            .map_err(|e| Error::domain("run_mc", e.to_string()))?
            .install(collect)
    };

    let mut total = Accumulator::default();
    for p in &parts {
        total.merge(p);
    }
    Ok(total.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scenario() -> McScenario {
        let path = NakagamiCascade {
            n_elements: 5,
            m1: 1.0,
            m2: 1.0,
            omega1: 1.0,
            omega2: 1.0,
            path_loss: 17.5,
        };
        McScenario {
            paths: vec![path.clone(), path],
            avg_snr_a: 10.0,
            a2g: A2gLink::new(3.0, 1.0, 10.0).unwrap(),
            gamma_out: 1.0,
            modulation: Modulation::bpsk(),
        }
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let scn = scenario();
        let cfg = McConfig {
            trials: 20_000,
            seed: 7,
            streams: 1,
            batch: 3_000,
        };
        let one = run_mc(&scn, &cfg).unwrap();
        let four = run_mc(&scn, &McConfig { streams: 4, ..cfg }).unwrap();
        assert_eq!(one, four);
        assert_eq!(one, run_mc(&scn, &cfg).unwrap());
        assert_eq!(one.op.trials, 20_000);
    }

    #[test]
    fn std_error_scales() {
        let scn = scenario();
        let cfg = McConfig {
            trials: 20_000,
            seed: 3,
            streams: 0,
            batch: 4_096,
        };
        let small = run_mc(&scn, &cfg).unwrap();
        let big = run_mc(&scn, &McConfig { trials: 80_000, ..cfg }).unwrap();
        let ratio = small.capacity_a.std_error / big.capacity_a.std_error;
        assert!((ratio - 2.0).abs() < 0.2, "{ratio}");
    }

    #[test]
    fn trivial_estimates() {
        let m = Modulation::bpsk();
        let est = estimate_metrics(&[5.0, 6.0], &[7.0, 8.0], 1.0, &m).unwrap();
        assert_eq!(est.op.mean, 0.0);
        let est = estimate_metrics(&[0.0; 4], &[0.0; 4], 1.0, &m).unwrap();
        assert_eq!(est.asep_a.mean, 0.5);
        assert!(estimate_metrics(&[], &[], 1.0, &m).is_err());
        assert!(estimate_metrics(&[1.0], &[1.0, 2.0], 1.0, &m).is_err());
    }

    #[test]
    fn rician_mean_power() {
        let link = A2gLink::new(3.0, 20.0, 100.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let s = sample_a2g(&link, 200_000, &mut rng);
        let mean = s.iter().sum::<f64>() / s.len() as f64;
        let var = s.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (s.len() - 1) as f64;
        let se = (var / s.len() as f64).sqrt();
        assert!((mean - 5.0).abs() < 4.0 * se, "{mean} ± {se}");
    }

    #[test]
    fn rayleigh_product_mean() {
        let path = NakagamiCascade {
            n_elements: 1,
            m1: 1.0,
            m2: 1.0,
            omega1: 1.0,
            omega2: 1.0,
            path_loss: 1.0,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let s = sample_g2a(&[path], 1.0, 200_000, &mut rng).unwrap();
        // γ = Z², so E[√γ] = E[Z] = π/4
        let z: Vec<f64> = s.iter().map(|g| g.sqrt()).collect();
        let mean = z.iter().sum::<f64>() / z.len() as f64;
        let var = z.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (z.len() - 1) as f64;
        let se = (var / z.len() as f64).sqrt();
        assert!((mean - std::f64::consts::PI / 4.0).abs() < 4.0 * se);
    }
}
