//! Adaptive Gauss–Kronrod quadrature.
//!
//! A global adaptive scheme on the 10-point Gauss / 21-point Kronrod pair:
//! the segment with the largest error estimate is bisected until the summed
//! estimate falls under `max(abs_tol, rel_tol * |I|)` or the subdivision
//! budget runs out. Error estimates follow the QUADPACK `qk21` heuristics.
//! Endpoints are never evaluated, so integrable endpoint singularities are
//! tolerated.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Tolerances and budget for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadControl {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadControl {
    fn default() -> Self {
        QuadControl {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_subdivisions: 2000,
        }
    }
}

impl QuadControl {
    /// Purely relative control, for integrals whose magnitude may be tiny.
    pub fn relative(rel_tol: f64) -> Self {
        QuadControl {
            abs_tol: 0.0,
            rel_tol,
            ..Default::default()
        }
    }
}

/// Result of a converged integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub abs_error: f64,
    pub subdivisions: usize,
}

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_175_168_745,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for the nodes XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod21<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Result<Segment> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let abs_half = half.abs();

    let fc = f(center);
    let mut res_g = 0.0;
    let mut res_k = WGK[10] * fc;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];

    for (j, (x, w)) in XGK[..10].iter().zip(&WGK[..10]).enumerate() {
        let dx = half * x;
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += w * (f1 + f2);
        res_abs += w * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let value = res_k * half;
    res_abs *= abs_half;
    res_asc *= abs_half;
    let mut error = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }

    if !value.is_finite() || !error.is_finite() {
        return Err(Error::domain(
            "integrate",
            format!("non-finite integrand on [{a:e}, {b:e}]"),
        ));
    }
    Ok(Segment { a, b, value, error })
}

/// Integrate `f` over the finite interval `[a, b]`.
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    ctl: &QuadControl,
) -> Result<Quadrature> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::domain("integrate", "interval endpoints must be finite"));
    }
    if a == b {
        return Ok(Quadrature {
            value: 0.0,
            abs_error: 0.0,
            subdivisions: 0,
        });
    }

    let first = kronrod21(&mut f, a, b)?;
    let mut total = first.value;
    let mut total_err = first.error;
    let mut heap = BinaryHeap::new();
    // Segments too narrow to split are parked here; their error is final.
    let mut frozen_value = 0.0;
    let mut frozen_err = 0.0;
    heap.push(first);
    let mut subdivisions = 1;

    loop {
        let tol = ctl.abs_tol.max(ctl.rel_tol * total.abs());
        if total_err <= tol {
            break;
        }
        let Some(worst) = heap.pop() else {
            break;
        };
        let mid = 0.5 * (worst.a + worst.b);
        let width = (worst.b - worst.a).abs();
        if width <= 1e3 * f64::EPSILON * worst.a.abs().max(worst.b.abs()).max(f64::MIN_POSITIVE)
            || mid == worst.a
            || mid == worst.b
        {
            frozen_value += worst.value;
            frozen_err += worst.error;
            continue;
        }
        if subdivisions >= ctl.max_subdivisions {
            heap.push(worst);
            return Err(Error::NonConvergence {
                func: "integrate",
                iterations: subdivisions,
                partial: total,
            });
        }
        let left = kronrod21(&mut f, worst.a, mid)?;
        let right = kronrod21(&mut f, mid, worst.b)?;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        subdivisions += 1;
    }

    // Resum to shed the drift of the running update.
    let value = heap.iter().map(|s| s.value).sum::<f64>() + frozen_value;
    let abs_error = heap.iter().map(|s| s.error).sum::<f64>() + frozen_err;
    let tol = ctl.abs_tol.max(ctl.rel_tol * value.abs());
    if abs_error > tol && abs_error > 1e3 * f64::EPSILON * value.abs() {
        return Err(Error::NonConvergence {
            func: "integrate",
            iterations: subdivisions,
            partial: value,
        });
    }
    Ok(Quadrature {
        value,
        abs_error,
        subdivisions,
    })
}

/// Integrate over consecutive pieces of a sorted breakpoint list, so that
/// known features of the integrand sit on segment boundaries.
pub fn integrate_pieces<F: FnMut(f64) -> f64>(
    mut f: F,
    cuts: &[f64],
    ctl: &QuadControl,
) -> Result<Quadrature> {
    let mut out = Quadrature {
        value: 0.0,
        abs_error: 0.0,
        subdivisions: 0,
    };
    for w in cuts.windows(2) {
        let q = integrate(&mut f, w[0], w[1], ctl)?;
        out.value += q.value;
        out.abs_error += q.abs_error;
        out.subdivisions += q.subdivisions;
    }
    Ok(out)
}

/// Integrate `f` over `[a, ∞)` via the map `x = a + t / (1 - t)`.
pub fn integrate_to_infinity<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    ctl: &QuadControl,
) -> Result<Quadrature> {
    integrate(
        |t| {
            let s = 1.0 - t;
            let x = a + t / s;
            let v = f(x);
            if v == 0.0 {
                0.0
            } else {
                v / (s * s)
            }
        },
        0.0,
        1.0,
        ctl,
    )
}
