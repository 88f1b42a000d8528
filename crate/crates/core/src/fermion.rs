//! Fermion oscillator in a fermion bath: rate coefficients, two-level
//! population dynamics, energy rate and the coarse-graining estimate.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::ode::rk4_step;
use crate::params::{check_beta, check_positive};
use crate::special::fermi;

const NORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BathMode {
    pub omega: f64,
    pub g: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BathSpectrum {
    pub modes: Vec<BathMode>,
    pub beta: f64,
}

impl BathSpectrum {
    pub fn new(modes: Vec<BathMode>, beta: f64) -> Result<Self> {
        check_beta(beta)?;
        if modes.is_empty() {
            return domain("bath spectrum must not be empty");
        }
        for m in &modes {
            if !m.omega.is_finite() || m.omega <= 0.0 {
                return domain(format!("mode frequency must be positive, got {}", m.omega));
            }
            if !m.g.is_finite() || m.g < 0.0 {
                return domain(format!("mode coupling must be finite and non-negative, got {}", m.g));
            }
        }
        Ok(Self { modes, beta })
    }

    /// `count` modes spaced uniformly over [ω₀/2, 3ω₀/2] with equal coupling.
    pub fn uniform(omega0: f64, g: f64, count: usize, beta: f64) -> Result<Self> {
        check_positive("omega0", omega0)?;
        if count == 0 {
            return domain("bath spectrum must not be empty");
        }
        let modes = (0..count)
            .map(|i| {
                let x = if count == 1 { 0.5 } else { i as f64 / (count - 1) as f64 };
                BathMode {
                    omega: omega0 * (0.5 + x),
                    g,
                }
            })
            .collect();
        Self::new(modes, beta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FermionRates {
    /// Spontaneous rate C.
    pub c: f64,
    /// Stimulated rate T_F.
    pub t_f: f64,
    pub dt: f64,
}

/// [1 − cos(xΔt)]/(x²Δt) = (Δt/2) sinc²(xΔt/2).
fn window(x: f64, dt: f64) -> f64 {
    let y = 0.5 * x * dt;
    let s = if y.abs() < 1e-4 { 1.0 - y * y / 6.0 } else { y.sin() / y };
    0.5 * dt * s * s
}

/// C = 2Σ|gᵢ|²[1 − cos(xᵢΔt)]/(xᵢ²Δt) with detuning xᵢ = ω₀ − ωᵢ, and T_F
/// the same sum weighted by 1/(e^{βωᵢ} + 1).
pub fn fermion_rates(spectrum: &BathSpectrum, omega0: f64, dt: f64) -> Result<FermionRates> {
    check_positive("omega0", omega0)?;
    check_positive("dt", dt)?;
    if spectrum.modes.is_empty() {
        return domain("bath spectrum must not be empty");
    }
    let (mut c, mut t) = (0.0, 0.0);
    for m in &spectrum.modes {
        let w = 2.0 * m.g * m.g * window(omega0 - m.omega, dt);
        c += w;
        let occ = if spectrum.beta.is_infinite() {
            0.0
        } else {
            fermi(spectrum.beta * m.omega)
        };
        t += w * occ;
    }
    Ok(FermionRates { c, t_f: t, dt })
}

/// Population equation for any truncation, with σ outside the vector taken
/// as zero:
/// dσₙ/dt = −nCσₙ + (n+1)Cσₙ₊₁ − (n+1)T_F(σₙ₊₁ + σₙ) + nT_F(σₙ₋₁ + σₙ).
pub fn population_rhs_general(diag: &[f64], rates: &FermionRates) -> Vec<f64> {
    let get = |i: isize| -> f64 {
        if i < 0 {
            0.0
        } else {
            diag.get(i as usize).copied().unwrap_or(0.0)
        }
    };
    (0..diag.len())
        .map(|n| {
            let (nf, i) = (n as f64, n as isize);
            -nf * rates.c * get(i) + (nf + 1.0) * rates.c * get(i + 1) - (nf + 1.0) * rates.t_f * (get(i + 1) + get(i))
                + nf * rates.t_f * (get(i - 1) + get(i))
        })
        .collect()
}

/// Two-level (n ∈ {0, 1}) population rates.
///
/// The raw truncated equation loses probability at rate 2T_Fσ₁₁; the
/// two-level dynamics is its antisymmetric part ½(ṡₙ − ṡ₁₋ₙ), which gives
/// dσ₁₁/dt = −Cσ₁₁ + T_Fσ₀₀ and conserves σ₀₀ + σ₁₁.
pub fn fermion_population_rhs(n_levels: usize, diag: &[f64], rates: &FermionRates) -> Result<[f64; 2]> {
    check_diag(n_levels, diag)?;
    let excited = -rates.c * diag[1] + rates.t_f * diag[0];
    Ok([-excited, excited])
}

/// d⟨H⟩/dt = ω₀(−Cσ₁₁ + T_Fσ₀₀).
pub fn fermion_energy_rate(diag: &[f64], rates: &FermionRates, omega0: f64) -> Result<f64> {
    check_diag(2, diag)?;
    Ok(omega0 * (-rates.c * diag[1] + rates.t_f * diag[0]))
}

fn check_diag(n_levels: usize, diag: &[f64]) -> Result<()> {
    if n_levels != 2 || diag.len() != 2 {
        return domain(format!(
            "fermionic populations have exactly two levels, got n_levels = {n_levels}, len = {}",
            diag.len()
        ));
    }
    let s: f64 = diag.iter().sum();
    if diag.iter().any(|x| !x.is_finite() || *x < -NORM_TOL) || (s - 1.0).abs() > NORM_TOL {
        return domain(format!("populations must be non-negative and sum to 1, got {diag:?}"));
    }
    Ok(())
}

/// RK4 integration of the two-level fermion populations on a uniform grid
/// of `points` samples over [0, t_end].
pub fn evolve_fermion(init: [f64; 2], rates: &FermionRates, t_end: f64, points: usize) -> Result<Vec<(f64, [f64; 2])>> {
    check_diag(2, &init)?;
    if !t_end.is_finite() || t_end < 0.0 {
        return domain(format!("t_end must be non-negative, got {t_end}"));
    }
    if points < 1 {
        return domain("at least one output point is required");
    }
    let mut out = vec![(0.0, init)];
    if points == 1 || t_end == 0.0 {
        return Ok(out);
    }
    let segments = points - 1;
    let dt_out = t_end / segments as f64;
    let per = ((rates.c + rates.t_f) * dt_out / 0.025).ceil().max(1.0) as usize;
    let h = dt_out / per as f64;
    let f = |y: &[f64; 2]| {
        let excited = -rates.c * y[1] + rates.t_f * y[0];
        [-excited, excited]
    };
    let mut y = init;
    for k in 1..=segments {
        for _ in 0..per {
            y = rk4_step(&f, &y, h);
            let s = y[0] + y[1];
            y = [y[0] / s, y[1] / s];
        }
        out.push((dt_out * k as f64, y));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoarseGraining {
    /// Third-to-second order ratio 2vτ_c.
    pub ratio: f64,
    /// True when (vτ_c)² < 0.01.
    pub valid: bool,
}

pub fn coarse_graining_diagnostic(v_typ: f64, tau_c: f64) -> Result<CoarseGraining> {
    for (name, x) in [("v_typ", v_typ), ("tau_c", tau_c)] {
        if !x.is_finite() || x < 0.0 {
            return domain(format!("{name} must be non-negative and finite, got {x}"));
        }
    }
    let vt = v_typ * tau_c;
    Ok(CoarseGraining {
        ratio: 2.0 * vt,
        valid: vt * vt < 0.01,
    })
}
