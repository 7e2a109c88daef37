use rayon::prelude::*;
use serde::Serialize;

use super::config::{CurveConfig, ExperimentConfig, PointOverrides, SweepVariable};
use crate::channel::{db_to_linear, linear_to_db};
use crate::error::{Error, Result};
use crate::mcsim::{run_mc, McConfig, McMetrics, McScenario};
use crate::metrics::{evaluate, outage_hop, outage_total, Modulation};
use crate::powopt::{solve_split, ObjectiveConstants};

/// Column names, in output order. Every row fills every column; values a
/// run does not compute are left empty.
pub const COLUMNS: [&str; 23] = [
    "curve",
    "x",
    "avg_snr_a_db",
    "avg_snr_b_db",
    "op",
    "op_a",
    "op_b",
    "op_asymptotic",
    "asep",
    "capacity",
    "asep_route",
    "capacity_route",
    "mc_op",
    "mc_op_se",
    "mc_asep",
    "mc_asep_se",
    "mc_capacity",
    "mc_capacity_se",
    "mc_trials",
    "e_s",
    "e_u",
    "e_u_share",
    "op_equal",
];

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct SweepRow {
    pub curve: String,
    pub x: f64,
    pub avg_snr_a_db: f64,
    pub avg_snr_b_db: f64,
    pub op: Option<f64>,
    pub op_a: Option<f64>,
    pub op_b: Option<f64>,
    pub op_asymptotic: Option<f64>,
    pub asep: Option<f64>,
    pub capacity: Option<f64>,
    pub asep_route: Option<String>,
    pub capacity_route: Option<String>,
    pub mc_op: Option<f64>,
    pub mc_op_se: Option<f64>,
    pub mc_asep: Option<f64>,
    pub mc_asep_se: Option<f64>,
    pub mc_capacity: Option<f64>,
    pub mc_capacity_se: Option<f64>,
    pub mc_trials: Option<u64>,
    pub e_s: Option<f64>,
    pub e_u: Option<f64>,
    pub e_u_share: Option<f64>,
    pub op_equal: Option<f64>,
}

/// One cell of a row, before formatting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell<'a> {
    Text(Option<&'a str>),
    Num(Option<f64>),
}

impl SweepRow {
    /// Cells in `COLUMNS` order.
    pub fn cells(&self) -> [Cell<'_>; 23] {
        use Cell::{Num, Text};
        [
            Text(Some(&self.curve)),
            Num(Some(self.x)),
            Num(Some(self.avg_snr_a_db)),
            Num(Some(self.avg_snr_b_db)),
            Num(self.op),
            Num(self.op_a),
            Num(self.op_b),
            Num(self.op_asymptotic),
            Num(self.asep),
            Num(self.capacity),
            Text(self.asep_route.as_deref()),
            Text(self.capacity_route.as_deref()),
            Num(self.mc_op),
            Num(self.mc_op_se),
            Num(self.mc_asep),
            Num(self.mc_asep_se),
            Num(self.mc_capacity),
            Num(self.mc_capacity_se),
            Num(self.mc_trials.map(|t| t as f64)),
            Num(self.e_s),
            Num(self.e_u),
            Num(self.e_u_share),
            Num(self.op_equal),
        ]
    }

    fn set_mc(&mut self, m: &McMetrics) {
        self.mc_op = Some(m.op.mean);
        self.mc_op_se = Some(m.op.std_error);
        self.mc_asep = Some(m.asep.mean);
        self.mc_asep_se = Some(m.asep.std_error);
        self.mc_capacity = Some(m.capacity.mean);
        self.mc_capacity_se = Some(m.capacity.std_error);
        self.mc_trials = Some(m.op.trials);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub variable: SweepVariable,
    pub rows: Vec<SweepRow>,
}

struct Point<'a> {
    curve: &'a CurveConfig,
    label: String,
    x: f64,
    index: u64,
}

fn points<'a>(cfg: &ExperimentConfig, curves: &'a [CurveConfig]) -> Vec<Point<'a>> {
    let values = cfg.sweep.values();
    let mut out = Vec::with_capacity(curves.len() * values.len());
    for (ci, c) in curves.iter().enumerate() {
        let label = c.label();
        for (i, &x) in values.iter().enumerate() {
            out.push(Point {
                curve: c,
                label: label.clone(),
                x,
                index: (ci * values.len() + i) as u64,
            });
        }
    }
    out
}

fn overrides(var: SweepVariable, curve: &CurveConfig, x: f64) -> PointOverrides {
    let mut ov = PointOverrides {
        n_ris: curve.n_ris,
        n_elements: curve.n_elements,
        ..Default::default()
    };
    match var {
        SweepVariable::NElements => ov.n_elements = Some(x as u32),
        SweepVariable::NRis => ov.n_ris = Some(x as usize),
        SweepVariable::UavHeight => ov.uav_h = Some(x),
        SweepVariable::UavX => ov.uav_x = Some(x),
        SweepVariable::AvgSnrDb | SweepVariable::TotalPower => {}
    }
    ov
}

fn avg_snrs_db(cfg: &ExperimentConfig, curve: &CurveConfig, x: f64) -> (f64, f64) {
    if cfg.sweep.variable == SweepVariable::AvgSnrDb {
        return (x, x);
    }
    let l = &cfg.link;
    match (curve.avg_snr_db.or(l.avg_snr_db), l.avg_snr_a_db, l.avg_snr_b_db) {
        (Some(s), _, _) => (s, s),
        (None, Some(a), Some(b)) => (a, b),
        // Rejected by validation.
        _ => (f64::NAN, f64::NAN),
    }
}

fn mc_for(cfg: &ExperimentConfig, index: u64) -> Option<McConfig> {
    cfg.mc.map(|m| McConfig::from(m).for_point(index))
}

fn at_point<T>(var: SweepVariable, x: f64, r: Result<T>) -> Result<T> {
    r.map_err(|e| Error::AtPoint {
        variable: var.as_str(),
        value: x,
        source: Box::new(e),
    })
}

fn collect_rows<'a, F>(pts: Vec<Point<'a>>, var: SweepVariable, f: F) -> Result<Vec<SweepRow>>
where
    F: Fn(&Point<'a>) -> Result<SweepRow> + Sync,
{
    pts.par_iter().map(|p| at_point(var, p.x, f(p))).collect()
}

/// Evaluate every point of every curve. Rows come out in curve-major,
/// sweep-index order regardless of how the work is scheduled.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<SweepResult> {
    let var = cfg.sweep.variable;
    if var == SweepVariable::TotalPower {
        return run_optimize(cfg);
    }
    let modulation = cfg.modulation.build()?;
    let opts = cfg.metric_options();
    let curves = cfg.curve_list();
    let rows = collect_rows(points(cfg, &curves), var, |p| {
        let derived = cfg.derive(&overrides(var, p.curve, p.x))?;
        let (sa_db, sb_db) = avg_snrs_db(cfg, p.curve, p.x);
        let a = derived.g2a(db_to_linear(sa_db))?;
        let b = derived.a2g(db_to_linear(sb_db))?;
        let m = evaluate(&a, &b, &modulation, &opts)?;
        let mut row = SweepRow {
            curve: p.label.clone(),
            x: p.x,
            avg_snr_a_db: sa_db,
            avg_snr_b_db: sb_db,
            op: Some(m.op),
            op_a: Some(outage_hop(&a, opts.gamma_out)),
            op_b: Some(outage_hop(&b, opts.gamma_out)),
            op_asymptotic: Some(m.op_asymptotic),
            asep: Some(m.asep),
            capacity: Some(m.capacity),
            asep_route: Some(m.asep_route.as_str().to_string()),
            capacity_route: Some(m.capacity_route.as_str().to_string()),
            ..Default::default()
        };
        if let Some(mc) = mc_for(cfg, p.index) {
            let scn = McScenario {
                paths: derived.paths.clone(),
                avg_snr_a: a.avg_snr,
                a2g: b,
                gamma_out: opts.gamma_out,
                modulation: modulation.clone(),
            };
            row.set_mc(&run_mc(&scn, &mc)?);
        }
        Ok(row)
    })?;
    Ok(SweepResult { variable: var, rows })
}

/// For each total budget (the sweep value, E_T/N0 in dB), split power to
/// minimize the high-SNR outage and report the exact outage there and at
/// the equal split.
pub fn run_optimize(cfg: &ExperimentConfig) -> Result<SweepResult> {
    let var = cfg.sweep.variable;
    if var != SweepVariable::TotalPower {
        return Err(Error::config(
            "sweep.variable",
            format!("optimization needs a total_power sweep, got {}", var.as_str()),
        ));
    }
    let modulation: Modulation = cfg.modulation.build()?;
    let gamma_out = db_to_linear(cfg.gamma_out_db);
    let n0 = db_to_linear(cfg.link.n0_db);
    let nu = db_to_linear(cfg.link.nu_db);
    let curves = cfg.curve_list();
    let rows = collect_rows(points(cfg, &curves), var, |p| {
        let derived = cfg.derive(&overrides(var, p.curve, p.x))?;
        let consts = ObjectiveConstants::from_links(&derived.g2a(1.0)?, &derived.a2g(1.0)?, n0, nu, gamma_out)?;
        let e_total = n0 * db_to_linear(p.x);
        let split = solve_split(&consts, e_total, 1e-12 * e_total)?;
        let exact = |e_s: f64, e_u: f64| -> Result<(f64, f64, f64)> {
            let pa = outage_hop(&derived.g2a(e_s / n0)?, gamma_out);
            let pb = outage_hop(&derived.a2g(e_u / nu)?, gamma_out);
            Ok((outage_total(pa, pb), pa, pb))
        };
        let (op, op_a, op_b) = exact(split.e_s, split.e_u)?;
        let (op_equal, _, _) = exact(0.5 * e_total, 0.5 * e_total)?;
        let mut row = SweepRow {
            curve: p.label.clone(),
            x: p.x,
            avg_snr_a_db: linear_to_db(split.e_s / n0),
            avg_snr_b_db: linear_to_db(split.e_u / nu),
            op: Some(op),
            op_a: Some(op_a),
            op_b: Some(op_b),
            op_asymptotic: Some(split.op_asymptotic),
            e_s: Some(split.e_s),
            e_u: Some(split.e_u),
            e_u_share: Some(split.e_u / e_total),
            op_equal: Some(op_equal),
            ..Default::default()
        };
        if let Some(mc) = mc_for(cfg, p.index) {
            let scn = McScenario {
                paths: derived.paths.clone(),
                avg_snr_a: split.e_s / n0,
                a2g: derived.a2g(split.e_u / nu)?,
                gamma_out,
                modulation: modulation.clone(),
            };
            row.set_mc(&run_mc(&scn, &mc)?);
        }
        Ok(row)
    })?;
    Ok(SweepResult { variable: var, rows })
}

/// Largest closed-form vs Monte-Carlo discrepancies over a result.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct McDeviation {
    /// max |op − mc_op| / s.e.
    pub op_sigmas: f64,
    /// max |asep − mc_asep| / s.e.
    pub asep_sigmas: f64,
    /// max |capacity − mc_capacity| in bits/s/Hz.
    pub capacity_abs: f64,
    pub rows: usize,
}

/// `modulation` bounds each ASEP sample to [0, p/2], which gives a floor on
/// its s.e. at rare-event points where the empirical one collapses.
pub fn mc_deviation(result: &SweepResult, modulation: &Modulation) -> McDeviation {
    let mut d = McDeviation::default();
    for r in &result.rows {
        let (Some(n), Some(op), Some(mc_op)) = (r.mc_trials, r.op, r.mc_op) else {
            continue;
        };
        d.rows += 1;
        // With no observed outages the empirical s.e. is zero; the binomial
        // s.e. at the closed-form value is the honest yardstick then.
        let se = r.mc_op_se.unwrap_or(0.0).max((op * (1.0 - op) / n as f64).sqrt());
        if se > 0.0 {
            d.op_sigmas = d.op_sigmas.max((op - mc_op).abs() / se);
        }
        if let (Some(a), Some(m), Some(se)) = (r.asep, r.mc_asep, r.mc_asep_se) {
            let se = se.max((0.5 * modulation.p * a / n as f64).sqrt());
            if se > 0.0 {
                d.asep_sigmas = d.asep_sigmas.max((a - m).abs() / se);
            }
        }
        if let (Some(c), Some(m)) = (r.capacity, r.mc_capacity) {
            d.capacity_abs = d.capacity_abs.max((c - m).abs());
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::config::parse_config;

    const NORMALIZED: &str = r#"{
        "ris": [{"n_elements": 5, "path_loss": "mean_normalized"},
                {"n_elements": 5, "path_loss": "mean_normalized"}],
        "a2g": {"loss": {"fixed_db": 0}},
        "sweep": {"variable": "avg_snr_db", "start": 0, "stop": 30, "steps": 4},
        "curves": [{"n_ris": 1}, {"n_ris": 2}]
    }"#;

    #[test]
    fn rows_in_order_and_monotone() {
        let cfg = parse_config(NORMALIZED).unwrap();
        let r = run_sweep(&cfg).unwrap();
        assert_eq!(r.rows.len(), 8);
        assert_eq!(r.rows[0].curve, "K=1");
        assert_eq!(r.rows[4].curve, "K=2");
        for c in r.rows.chunks(4) {
            assert!(c.windows(2).all(|w| w[1].op.unwrap() <= w[0].op.unwrap()));
        }
        for i in 0..4 {
            assert!(r.rows[4 + i].op.unwrap() <= r.rows[i].op.unwrap());
        }
    }

    #[test]
    fn optimize_requires_total_power() {
        let cfg = parse_config(NORMALIZED).unwrap();
        assert!(matches!(run_optimize(&cfg), Err(Error::Config { .. })));
    }

    #[test]
    fn optimize_rows() {
        let text = NORMALIZED.replace("\"avg_snr_db\", \"start\": 0", "\"total_power\", \"start\": 10");
        let cfg = parse_config(&text).unwrap();
        let r = run_sweep(&cfg).unwrap();
        for row in &r.rows {
            let e_t = db_to_linear(row.x);
            assert!((row.e_s.unwrap() + row.e_u.unwrap() - e_t).abs() <= 1e-9 * e_t);
        }
    }
}
