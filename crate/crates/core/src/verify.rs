//! Self-verification suite: named oracle and invariant checks, each
//! reporting a measured error against its tolerance.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::Result;
use crate::fermion::{coarse_graining_diagnostic, fermion_population_rhs, fermion_rates, BathSpectrum};
use crate::kernels::{g_thermal_accelerated, g_thermal_inertial, g_thermal_inertial_sum};
use crate::master::{closed_form, detailed_balance_ratio, evolve, steady_state, PopulationState};
use crate::params::{AtomState, DetectorParams, OrderingParam, Regularization};
use crate::rates::{
    atom_rr_rate, atom_total_rate, atom_vf_rate, derivative_coupling_rates, field_rates, planck_bracket,
};
use crate::response::{accelerated_response_oracle, inertial_response_oracle, planck_rate};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    /// NaN (serialized as null) when the computation itself failed.
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
    pub all_passed: bool,
}

fn relative(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn run(name: &str, tolerance: f64, f: impl FnOnce() -> Result<f64>) -> Check {
    match f() {
        Ok(measured) => Check {
            name: name.to_string(),
            measured,
            tolerance,
            passed: measured <= tolerance,
            detail: None,
        },
        Err(e) => failed(name, tolerance, e.to_string()),
    }
}

fn failed(name: &str, tolerance: f64, detail: String) -> Check {
    Check {
        name: name.to_string(),
        measured: f64::NAN,
        tolerance,
        passed: false,
        detail: Some(detail),
    }
}

fn lattice_sum(reg: &Regularization) -> Result<f64> {
    let mut worst = 0.0f64;
    for &beta in &[0.5, 1.0, 3.0] {
        for &ratio in &[0.1, 0.7, 1.9] {
            let u = ratio * beta;
            let s = g_thermal_inertial_sum(u, beta, 0.0, reg)?.re();
            let c = g_thermal_inertial(u, beta, 0.0)?.re();
            worst = worst.max(relative(s, c));
        }
    }
    Ok(worst)
}

fn unruh_correspondence() -> Result<f64> {
    let mut worst = 0.0f64;
    for &alpha in &[0.1, 0.5, 1.0, 2.0, 5.0] {
        for &u in &[0.2, 1.0, 3.0] {
            let a = g_thermal_accelerated(u, 0.0, f64::INFINITY, alpha)?.re();
            let b = g_thermal_inertial(u, 2.0 * PI / alpha, 0.0)?.re();
            worst = worst.max(relative(a, b));
        }
    }
    Ok(worst)
}

/// |oracle| at ε = 1e−3, or +∞ if the magnitude fails to shrink over two
/// further halvings.
fn inertial_silence(reg: &Regularization) -> Result<f64> {
    let mut values = Vec::new();
    for k in 0..3 {
        let eps = 1e-3 / f64::from(1 << k);
        values.push(inertial_response_oracle(1.0, eps, 1e3, reg.quad_tol)?.norm());
    }
    if values.windows(2).all(|w| w[1] < w[0]) {
        Ok(values[0])
    } else {
        Ok(f64::INFINITY)
    }
}

fn planck_response(reg: &Regularization) -> Result<f64> {
    let v = accelerated_response_oracle(1.0, 2.0, reg)?;
    Ok(relative(v, planck_rate(1.0, 2.0)))
}

fn master_oracle() -> Result<(f64, f64)> {
    let mut sup = 0.0f64;
    let mut defect = 0.0f64;
    for &omega0 in &[0.5, 2.0] {
        for &beta in &[0.3, 3.0, f64::INFINITY] {
            for &p in &[0.0, 0.5, 1.0] {
                let init = PopulationState::with_excited(p)?;
                let tau = 4.0 * 8.0 * PI / omega0;
                let traj = evolve(&init, omega0, beta, tau, None)?;
                defect = defect.max(traj.max_defect);
                for (t, s) in traj.taus.iter().zip(&traj.states) {
                    sup = sup.max(s.distance(&closed_form(&init, omega0, beta, *t)?));
                    defect = defect.max((s.sigma_plus + s.sigma_minus - 1.0).abs());
                }
            }
        }
    }
    Ok((sup, defect))
}

fn steady(omega0: f64, beta: f64) -> Result<f64> {
    let kappa = crate::master::decay_rate(omega0, beta);
    let traj = evolve(&PopulationState::with_excited(1.0)?, omega0, beta, 40.0 / kappa, None)?;
    Ok(traj.last().distance(&steady_state(omega0, beta)?))
}

fn detailed_balance() -> Result<f64> {
    let mut worst = 0.0f64;
    for &(w, b) in &[(1.0, 0.5), (1.0, 2.0), (0.3, 7.0)] {
        let s = steady_state(w, b)?;
        worst = worst.max(relative(s.sigma_plus / s.sigma_minus, detailed_balance_ratio(w, b)?));
    }
    Ok(worst)
}

fn fermion_limits() -> Result<f64> {
    let cold = fermion_rates(&BathSpectrum::uniform(1.0, 0.1, 101, f64::INFINITY)?, 1.0, 5.0)?;
    let hot = fermion_rates(&BathSpectrum::uniform(1.0, 0.1, 101, 1e-6)?, 1.0, 5.0)?;
    let rhs = fermion_population_rhs(2, &[0.3, 0.7], &hot)?;
    Ok(cold.t_f.abs() + relative(hot.t_f / hot.c, 0.5) + (rhs[0] + rhs[1]).abs())
}

fn decomposition() -> Result<f64> {
    let mut worst = 0.0f64;
    for &alpha in &[0.0, 0.5, 2.0] {
        let d = DetectorParams::new(1.3, 0.4)?;
        for atom in [AtomState::plus(), AtomState::minus(), AtomState::new(0.2)?] {
            let r = atom_total_rate(&d, alpha, &atom, OrderingParam::symmetric())?;
            let (vf, rr) = (r.vf.unwrap_or(f64::NAN), r.rr.unwrap_or(f64::NAN));
            worst = worst.max((vf + rr - r.total).abs() / r.total.abs().max(f64::MIN_POSITIVE));
        }
    }
    Ok(worst)
}

fn ordering_and_ground_state() -> Result<f64> {
    let mut worst = 0.0f64;
    let d = DetectorParams::new(0.8, 0.3)?;
    for &alpha in &[0.0, 0.7, 4.0] {
        let base = atom_total_rate(&d, alpha, &AtomState::plus(), OrderingParam::symmetric())?.total;
        for &l in &[0.0, 0.3, 1.0] {
            let t = atom_total_rate(&d, alpha, &AtomState::plus(), OrderingParam::new(l)?)?.total;
            worst = worst.max((t - base).abs());
            let g = atom_total_rate(&d, alpha, &AtomState::minus(), OrderingParam::new(l)?)?.total;
            worst = worst.max(g.abs());
        }
        let up = atom_vf_rate(&d, alpha, &AtomState::plus())?;
        let down = atom_vf_rate(&d, alpha, &AtomState::minus())?;
        worst = worst.max((up + down).abs());
    }
    Ok(worst)
}

fn bracket_identity() -> f64 {
    let mut worst = 0.0f64;
    for &(w, a) in &[(1.0, 1.0), (0.2, 3.0), (3.0, 0.4), (1.0, 50.0)] {
        worst = worst.max(relative(planck_bracket(w, a), 1.0 / (PI * w / a).tanh()));
    }
    worst
}

fn balance(reg: &Regularization) -> Result<(f64, f64)> {
    let d = DetectorParams::new(1.0, 1.0)?;
    let atom = AtomState::plus();
    let f = field_rates(&d, 1.0, &atom, reg)?;
    let vf = relative(f.vf.abs(), atom_vf_rate(&d, 1.0, &atom)?.abs());
    let rr = relative(f.rr.abs(), atom_rr_rate(&d, 1.0)?.abs());
    Ok((vf, rr))
}

fn derivative_invariance(reg: &Regularization) -> Result<f64> {
    let d = DetectorParams::new(1.0, 1.0)?;
    let atom = AtomState::plus();
    let r0 = derivative_coupling_rates(&d, 1.0, &atom, 0, reg)?;
    let mut worst = 0.0f64;
    for n in 1..=2 {
        let r = derivative_coupling_rates(&d, 1.0, &atom, n, reg)?;
        worst = worst.max(relative(r.vf.unwrap_or(f64::NAN), r0.vf.unwrap_or(f64::NAN)));
        worst = worst.max(relative(r.rr.unwrap_or(f64::NAN), r0.rr.unwrap_or(f64::NAN)));
    }
    Ok(worst)
}

fn coarse_graining() -> Result<f64> {
    let mut bad = 0.0;
    for &(v, t) in &[(0.01, 1.0), (0.5, 0.5), (0.1, 1.0), (0.0, 3.0)] {
        let c = coarse_graining_diagnostic(v, t)?;
        bad += (c.ratio - 2.0 * v * t).abs();
        if c.valid != ((v * t) * (v * t) < 0.01) {
            bad += 1.0;
        }
    }
    Ok(bad)
}

/// Runs every check with the given regularization.
pub fn run_suite(reg: &Regularization) -> VerifyReport {
    let mut checks = vec![
        run("lattice_sum_inertial", 1e-8, || lattice_sum(reg)),
        run("unruh_correspondence", 64.0 * f64::EPSILON, unruh_correspondence),
        run("inertial_silence", 1e-2, || inertial_silence(reg)),
        run("planck_response", 1e-4, || planck_response(reg)),
    ];
    match master_oracle() {
        Ok((sup, defect)) => {
            checks.push(run("master_oracle", 1e-8, || Ok(sup)));
            checks.push(run("probability_conservation", 1e-12, || Ok(defect)));
        }
        Err(e) => {
            checks.push(failed("master_oracle", 1e-8, e.to_string()));
            checks.push(failed("probability_conservation", 1e-12, e.to_string()));
        }
    }
    checks.push(run("steady_state", 1e-6, || steady(1.0, 1.0)));
    checks.push(run("detailed_balance", 1e-10, detailed_balance));
    checks.push(run("fermion_limits", 1e-4, fermion_limits));
    checks.push(run("energy_decomposition", 1e-12, decomposition));
    checks.push(run("ordering_invariance", 0.0, ordering_and_ground_state));
    checks.push(run("planck_bracket_identity", 1e-12, || Ok(bracket_identity())));
    match balance(reg) {
        Ok((vf, rr)) => {
            checks.push(run("energy_balance_vf", 1e-4, || Ok(vf)));
            checks.push(run("energy_balance_rr", 1e-4, || Ok(rr)));
        }
        Err(e) => {
            checks.push(failed("energy_balance_vf", 1e-4, e.to_string()));
            checks.push(failed("energy_balance_rr", 1e-4, e.to_string()));
        }
    }
    checks.push(run("derivative_coupling_invariance", 1e-3, || derivative_invariance(reg)));
    checks.push(run("coarse_graining", 0.0, coarse_graining));
    let all_passed = checks.iter().all(|c| c.passed);
    VerifyReport { checks, all_passed }
}
