//! Two-level finite-temperature master equation: rate form, RK4 evolution,
//! closed-form relaxation, Fermi–Dirac steady state and detailed balance.

use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::ode::{rk4_local_error, rk4_step};
use crate::params::{check_beta, check_positive};
use crate::special::fermi;

/// Step budget h·κ of the default controller.
pub const DEFAULT_H_KAPPA: f64 = 0.025;

/// Largest accepted local error estimate per step for user-chosen steps.
pub const LOCAL_ERROR_TOL: f64 = 1e-10;

const SUM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PopulationState {
    pub sigma_plus: f64,
    pub sigma_minus: f64,
}

impl PopulationState {
    pub fn new(sigma_plus: f64, sigma_minus: f64) -> Result<Self> {
        let s = Self {
            sigma_plus,
            sigma_minus,
        };
        s.check()?;
        Ok(s)
    }

    /// State with σ₊ given and σ₋ = 1 − σ₊.
    pub fn with_excited(sigma_plus: f64) -> Result<Self> {
        Self::new(sigma_plus, 1.0 - sigma_plus)
    }

    pub fn check(&self) -> Result<()> {
        let (p, m) = (self.sigma_plus, self.sigma_minus);
        if !(p.is_finite() && m.is_finite()) {
            return domain("populations must be finite");
        }
        if p < -SUM_TOL || m < -SUM_TOL || p > 1.0 + SUM_TOL || m > 1.0 + SUM_TOL {
            return domain(format!("populations must lie in [0, 1], got ({p}, {m})"));
        }
        if (p + m - 1.0).abs() > SUM_TOL {
            return domain(format!("populations must sum to 1, got {}", p + m));
        }
        Ok(())
    }

    pub fn distance(&self, other: &PopulationState) -> f64 {
        (self.sigma_plus - other.sigma_plus)
            .abs()
            .max((self.sigma_minus - other.sigma_minus).abs())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PopulationTrajectory {
    pub taus: Vec<f64>,
    pub states: Vec<PopulationState>,
    pub omega0: f64,
    pub beta: f64,
    /// Largest |σ₊ + σ₋ − 1| observed before per-step renormalization.
    pub max_defect: f64,
}

impl PopulationTrajectory {
    pub fn last(&self) -> &PopulationState {
        self.states.last().expect("trajectory is never empty")
    }
}

fn check_inputs(omega0: f64, beta: f64) -> Result<()> {
    check_positive("omega0", omega0)?;
    check_beta(beta)
}

/// 1/(1 − e^{−ω₀β}); 1 at β = +∞.
fn thermal_factor(omega0: f64, beta: f64) -> f64 {
    if beta.is_infinite() {
        1.0
    } else {
        -1.0 / (-omega0 * beta).exp_m1()
    }
}

/// Relaxation rate κ = coth(ω₀β/2)·ω₀/8π.
pub fn decay_rate(omega0: f64, beta: f64) -> f64 {
    let c = if beta.is_infinite() {
        1.0
    } else {
        1.0 / (0.5 * omega0 * beta).tanh()
    };
    c * omega0 / (8.0 * PI)
}

/// (dσ₊/dτ, dσ₋/dτ) with dσ₊/dτ = −(ω₀/8π){σ₋ + (σ₊ − σ₋)/(1 − e^{−ω₀β})}.
pub fn rate_rhs(state: &PopulationState, omega0: f64, beta: f64) -> Result<(f64, f64)> {
    check_inputs(omega0, beta)?;
    state.check()?;
    let d = rhs_unchecked(state.sigma_plus, state.sigma_minus, omega0, thermal_factor(omega0, beta));
    Ok((d, -d))
}

fn rhs_unchecked(p: f64, m: f64, omega0: f64, factor: f64) -> f64 {
    -omega0 / (8.0 * PI) * (m + factor * (p - m))
}

/// Step count chosen so that h·κ ≤ [`DEFAULT_H_KAPPA`].
pub fn default_steps(omega0: f64, beta: f64, tau_end: f64) -> usize {
    ((decay_rate(omega0, beta) * tau_end / DEFAULT_H_KAPPA).ceil() as usize).max(1)
}

/// Integrates the rate equations with classical RK4 over `steps` equal steps
/// (or the default controller when `None`), renormalizing σ₊ + σ₋ each step.
pub fn evolve(
    init: &PopulationState,
    omega0: f64,
    beta: f64,
    tau_end: f64,
    steps: Option<usize>,
) -> Result<PopulationTrajectory> {
    check_inputs(omega0, beta)?;
    init.check()?;
    if !tau_end.is_finite() || tau_end < 0.0 {
        return domain(format!("tau_end must be non-negative and finite, got {tau_end}"));
    }
    let mut traj = PopulationTrajectory {
        taus: vec![0.0],
        states: vec![*init],
        omega0,
        beta,
        max_defect: 0.0,
    };
    if tau_end == 0.0 {
        return Ok(traj);
    }
    let kappa = decay_rate(omega0, beta);
    let n = match steps {
        None => default_steps(omega0, beta, tau_end),
        Some(0) => return domain("steps must be at least 1"),
        Some(n) => {
            let estimate = rk4_local_error(kappa * tau_end / n as f64);
            if estimate > LOCAL_ERROR_TOL {
                return Err(Error::StepSize {
                    estimate,
                    tolerance: LOCAL_ERROR_TOL,
                });
            }
            n
        }
    };
    let h = tau_end / n as f64;
    let factor = thermal_factor(omega0, beta);
    let f = |y: &[f64; 2]| {
        let d = rhs_unchecked(y[0], y[1], omega0, factor);
        [d, -d]
    };
    traj.taus.reserve(n);
    traj.states.reserve(n);
    let mut y = [init.sigma_plus, init.sigma_minus];
    for i in 1..=n {
        y = rk4_step(&f, &y, h);
        let sum = y[0] + y[1];
        traj.max_defect = traj.max_defect.max((sum - 1.0).abs());
        y = [y[0] / sum, y[1] / sum];
        traj.taus.push(if i == n { tau_end } else { h * i as f64 });
        traj.states.push(PopulationState {
            sigma_plus: y[0],
            sigma_minus: y[1],
        });
    }
    log::debug!("evolve: {n} steps, max conservation defect {:.3e}", traj.max_defect);
    Ok(traj)
}

/// Closed-form relaxation σ±(τ) = σ±(∞) + (σ±(0) − σ±(∞)) e^{−κτ}.
pub fn closed_form(init: &PopulationState, omega0: f64, beta: f64, tau: f64) -> Result<PopulationState> {
    check_inputs(omega0, beta)?;
    init.check()?;
    let inf = steady_state(omega0, beta)?;
    let decay = (-decay_rate(omega0, beta) * tau).exp();
    Ok(PopulationState {
        sigma_plus: inf.sigma_plus + (init.sigma_plus - inf.sigma_plus) * decay,
        sigma_minus: inf.sigma_minus + (init.sigma_minus - inf.sigma_minus) * decay,
    })
}

/// Fermi–Dirac steady state (1/(1 + e^{ω₀β}), e^{ω₀β}/(1 + e^{ω₀β})).
pub fn steady_state(omega0: f64, beta: f64) -> Result<PopulationState> {
    check_inputs(omega0, beta)?;
    if beta.is_infinite() {
        return Ok(PopulationState {
            sigma_plus: 0.0,
            sigma_minus: 1.0,
        });
    }
    let x = omega0 * beta;
    Ok(PopulationState {
        sigma_plus: fermi(x),
        sigma_minus: fermi(-x),
    })
}

/// σ₊/σ₋ = e^{−ω₀β} at equilibrium.
pub fn detailed_balance_ratio(omega0: f64, beta: f64) -> Result<f64> {
    check_inputs(omega0, beta)?;
    Ok((-omega0 * beta).exp())
}
