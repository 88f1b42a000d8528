//! Subcommand implementations. Each returns a rendered document.

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde_json::{json, Value};
use unruh_kinetics::fermion::{
    coarse_graining_diagnostic, evolve_fermion, fermion_energy_rate, fermion_rates, BathMode, BathSpectrum,
};
use unruh_kinetics::kernels::{g_thermal_accelerated, g_thermal_inertial, KernelValue};
use unruh_kinetics::master::{closed_form, decay_rate, evolve, steady_state, PopulationState};
use unruh_kinetics::rates::{atom_total_rate, derivative_coupling_rates, field_rates};
use unruh_kinetics::response::{
    accelerated_response_oracle, inertial_response_oracle, response_accelerated, response_inertial,
};
use unruh_kinetics::verify::{run_suite, VerifyReport};
use unruh_kinetics::{AtomState, OrderingParam, Trajectory};

use crate::config::{ConfigDoc, ConfigError, RunConfig, SweepTarget};
use crate::output::{num, Table};

/// One grid point: the axis values and the config they produce.
pub struct Point {
    pub values: Vec<f64>,
    pub cfg: RunConfig,
}

/// Cartesian product of the sweep axes, first axis outermost. With no axes
/// this is the single base configuration.
pub fn grid(doc: &ConfigDoc, base: &RunConfig) -> Result<Vec<Point>> {
    let axes = &base.sweep.axes;
    let values: Vec<Vec<f64>> = axes.iter().map(|a| a.values()).collect::<Result<_>>()?;
    let total: usize = values.iter().map(Vec::len).product();
    let mut points = Vec::with_capacity(total);
    for idx in 0..total {
        let mut rem = idx;
        let mut coords = vec![0.0; axes.len()];
        for k in (0..axes.len()).rev() {
            coords[k] = values[k][rem % values[k].len()];
            rem /= values[k].len();
        }
        let cfg = if axes.is_empty() {
            base.clone()
        } else {
            let mut d = doc.clone();
            for (a, &x) in axes.iter().zip(&coords) {
                d.set(&a.param, num(x))?;
            }
            d.parse().with_context(|| format!("sweep point {idx}"))?
        };
        points.push(Point { values: coords, cfg });
    }
    Ok(points)
}

fn beta_cell(beta: f64) -> Value {
    if beta.is_infinite() {
        Value::String("inf".into())
    } else {
        num(beta)
    }
}

fn kernel_at(cfg: &RunConfig, u: f64) -> unruh_kinetics::Result<KernelValue> {
    let beta = cfg.thermal.beta;
    match cfg.trajectory {
        Trajectory::Inertial { v } => g_thermal_inertial(u, beta, v),
        Trajectory::UniformAcceleration { alpha } => {
            let t2 = cfg.kernel.tau2;
            g_thermal_accelerated(u + t2, t2, beta, alpha)
        }
    }
}

/// Table of g over (u, swept α or β). Failing rows become NaN cells; the
/// second return value counts them.
pub fn kernel(doc: &ConfigDoc, cfg: &RunConfig) -> Result<(Table, usize)> {
    let points = grid(doc, cfg)?;
    let rows: Vec<Vec<(Vec<Value>, bool)>> = points
        .par_iter()
        .map(|p| {
            let second = match (p.values.first(), p.cfg.trajectory) {
                (Some(&x), _) => num(x),
                (None, Trajectory::UniformAcceleration { alpha }) => num(alpha),
                (None, Trajectory::Inertial { .. }) => beta_cell(p.cfg.thermal.beta),
            };
            p.cfg
                .kernel
                .u
                .iter()
                .map(|&u| match kernel_at(&p.cfg, u) {
                    Ok(g) => (vec![num(u), second.clone(), num(g.re()), num(g.im())], true),
                    Err(e) => {
                        log::debug!("kernel row u = {u}: {e}");
                        (vec![num(u), second.clone(), Value::Null, Value::Null], false)
                    }
                })
                .collect()
        })
        .collect();
    let mut t = Table::new(&["tau_diff", "alpha_or_beta", "re_g", "im_g"]);
    let mut failed = 0;
    for (row, ok) in rows.into_iter().flatten() {
        failed += usize::from(!ok);
        t.push(row);
    }
    Ok((t, failed))
}

pub fn populations(cfg: &RunConfig) -> Result<Table> {
    let p = &cfg.populations;
    let (w, beta) = (cfg.detector.omega0, cfg.thermal.beta);
    let init = PopulationState::with_excited(p.init_excited)?;
    let tau_end = p.tau_end.unwrap_or_else(|| 5.0 / decay_rate(w, beta));
    if p.points == 0 {
        bail!(ConfigError("populations.points must be at least 1".into()));
    }
    let mut t = Table::new(&[
        "tau",
        "sigma_plus_numeric",
        "sigma_plus_closed",
        "sigma_minus_numeric",
        "sigma_minus_closed",
        "defect",
    ]);
    let mut state = init;
    let segments = p.points.saturating_sub(1).max(1);
    let dtau = tau_end / segments as f64;
    for k in 0..p.points {
        let tau = if k == p.points - 1 && p.points > 1 { tau_end } else { dtau * k as f64 };
        if k > 0 {
            state = *evolve(&state, w, beta, dtau, p.steps)?.last();
        }
        let exact = closed_form(&init, w, beta, tau)?;
        t.push(vec![
            num(tau),
            num(state.sigma_plus),
            num(exact.sigma_plus),
            num(state.sigma_minus),
            num(exact.sigma_minus),
            num(state.distance(&exact)),
        ]);
    }
    Ok(t)
}

pub fn steady(cfg: &RunConfig) -> Result<Table> {
    let (w, beta) = (cfg.detector.omega0, cfg.thermal.beta);
    let s = steady_state(w, beta)?;
    let mut t = Table::new(&["omega0", "beta", "sigma_plus", "sigma_minus", "ratio", "boltzmann"]);
    t.push(vec![
        num(w),
        beta_cell(beta),
        num(s.sigma_plus),
        num(s.sigma_minus),
        num(s.sigma_plus / s.sigma_minus),
        num((-w * beta).exp()),
    ]);
    Ok(t)
}

fn opt(x: Option<f64>) -> Value {
    x.map_or(Value::Null, num)
}

pub fn rates(cfg: &RunConfig) -> Result<Table> {
    let r = &cfg.rates;
    let alpha = cfg.trajectory.alpha();
    let atom = AtomState::new(r.r3)?;
    let lambda = OrderingParam::new(r.lambda)?;
    let report = if r.n == 0 {
        atom_total_rate(&cfg.detector, alpha, &atom, lambda)?
    } else {
        if !lambda.is_symmetric() {
            bail!(ConfigError("derivative couplings are defined for lambda = 0.5 only".into()));
        }
        derivative_coupling_rates(&cfg.detector, alpha, &atom, r.n, &cfg.regularization)?
    };
    let mut cols = vec!["alpha", "r3", "lambda", "coupling_order", "vf", "rr", "total", "finite"];
    let mut row = vec![
        num(alpha),
        num(r.r3),
        num(report.lambda),
        json!(report.coupling_order),
        opt(report.vf),
        opt(report.rr),
        num(report.total),
        json!(report.finite),
    ];
    if r.field {
        let f = field_rates(&cfg.detector, alpha, &atom, &cfg.regularization)?;
        cols.extend(["field_vf", "field_rr"]);
        row.extend([num(f.vf), num(f.rr)]);
    }
    let mut t = Table::new(&cols);
    t.push(row);
    Ok(t)
}

fn response_row(cfg: &RunConfig, de: f64) -> Result<Vec<Value>> {
    let reg = &cfg.regularization;
    let (alpha, rate, oracle) = match cfg.trajectory {
        Trajectory::Inertial { .. } => {
            let rate = response_inertial(de)?.rate;
            let oracle = if cfg.response.oracle {
                Some(inertial_response_oracle(de, reg.epsilon, 1e3 / de, reg.quad_tol)?.re)
            } else {
                None
            };
            (0.0, rate, oracle)
        }
        Trajectory::UniformAcceleration { alpha } => {
            let rate = response_accelerated(de, alpha)?.rate;
            let oracle = if cfg.response.oracle {
                Some(accelerated_response_oracle(de, alpha, reg)?)
            } else {
                None
            };
            (alpha, rate, oracle)
        }
    };
    Ok(vec![num(de), num(alpha), num(rate), opt(oracle)])
}

pub fn response(cfg: &RunConfig) -> Result<Table> {
    let rows: Vec<Vec<Value>> = cfg
        .response
        .delta_e
        .par_iter()
        .map(|&de| response_row(cfg, de))
        .collect::<Result<_>>()?;
    let mut t = Table::new(&["delta_e", "alpha", "rate", "oracle"]);
    rows.into_iter().for_each(|r| t.push(r));
    Ok(t)
}

pub fn fermion(cfg: &RunConfig, spectrum_override: Option<&std::path::Path>) -> Result<Table> {
    let f = &cfg.fermion;
    let (w, beta) = (cfg.detector.omega0, cfg.thermal.beta);
    let spectrum = match spectrum_override.or(f.spectrum.as_deref()) {
        Some(path) => {
            let text =
                std::fs::read_to_string(path).with_context(|| format!("reading spectrum {}", path.display()))?;
            let modes: Vec<BathMode> = serde_json::from_str(&text)
                .map_err(|e| ConfigError(format!("spectrum {}: {e}", path.display())))?;
            BathSpectrum::new(modes, beta)?
        }
        None => BathSpectrum::uniform(w, f.g, f.modes, beta)?,
    };
    let rates = fermion_rates(&spectrum, w, f.dt)?;
    log::info!("fermion rates: C = {:.6e}, T_F = {:.6e}", rates.c, rates.t_f);
    if let Some(v) = f.v_typ {
        let tau_c = f.tau_c.unwrap_or(f.dt);
        let cg = coarse_graining_diagnostic(v, tau_c)?;
        if !cg.valid {
            log::warn!(
                "coarse-graining approximation not valid: 2 v tau_c = {:.3e}, (v tau_c)^2 >= 0.01",
                cg.ratio
            );
        }
    }
    let traj = evolve_fermion([1.0 - f.init_excited, f.init_excited], &rates, f.t_end, f.points)?;
    let mut t = Table::new(&["t", "sigma_0", "sigma_1", "energy_rate", "c", "t_f"]);
    for (time, s) in traj {
        t.push(vec![
            num(time),
            num(s[0]),
            num(s[1]),
            num(fermion_energy_rate(&s, &rates, w)?),
            num(rates.c),
            num(rates.t_f),
        ]);
    }
    Ok(t)
}

fn sweep_values(target: SweepTarget, cfg: &RunConfig) -> Result<Vec<Value>> {
    Ok(match target {
        SweepTarget::Steady => {
            let s = steady_state(cfg.detector.omega0, cfg.thermal.beta)?;
            vec![num(s.sigma_plus), num(s.sigma_minus)]
        }
        SweepTarget::Rates => {
            let row = rates(cfg)?.rows.remove(0);
            vec![row[4].clone(), row[5].clone(), row[6].clone()]
        }
        SweepTarget::Response => {
            let de = *cfg.response.delta_e.first().context("response.delta_e is empty")?;
            vec![response_row(cfg, de)?[2].clone()]
        }
        SweepTarget::Kernel => {
            let u = *cfg.kernel.u.first().context("kernel.u is empty")?;
            let g = kernel_at(cfg, u)?;
            vec![num(g.re()), num(g.im())]
        }
    })
}

pub fn sweep(doc: &ConfigDoc, cfg: &RunConfig) -> Result<Table> {
    let target = cfg.sweep.target;
    let points = grid(doc, cfg)?;
    let rows: Vec<Vec<Value>> = points
        .par_iter()
        .map(|p| {
            let mut row: Vec<Value> = p.values.iter().map(|&x| num(x)).collect();
            row.extend(sweep_values(target, &p.cfg)?);
            Ok(row)
        })
        .collect::<Result<_>>()?;
    let mut cols: Vec<&str> = cfg.sweep.axes.iter().map(|a| a.param.as_str()).collect();
    cols.extend(match target {
        SweepTarget::Steady => &["sigma_plus", "sigma_minus"][..],
        SweepTarget::Rates => &["vf", "rr", "total"][..],
        SweepTarget::Response => &["rate"][..],
        SweepTarget::Kernel => &["re_g", "im_g"][..],
    });
    let mut t = Table::new(&cols);
    rows.into_iter().for_each(|r| t.push(r));
    Ok(t)
}

pub fn verify(cfg: &RunConfig) -> (Table, VerifyReport) {
    let report = run_suite(&cfg.regularization);
    let mut t = Table::new(&["name", "measured", "tolerance", "passed"]);
    for c in &report.checks {
        t.push(vec![
            Value::String(c.name.clone()),
            num(c.measured),
            num(c.tolerance),
            json!(c.passed),
        ]);
    }
    (t, report)
}
