//! Two-point functions: vacuum and thermal Wightman functions, the
//! master-equation kernel g(τ′, τ″) for inertial and accelerated detectors,
//! and the field/atom correlation and susceptibility functions.
//!
//! Every closed form has an image-sum counterpart (`*_sum`) evaluated by
//! direct truncated summation with an analytic tail, usable as an oracle.

use std::f64::consts::PI;

use num_complex::Complex64;
use crate::error::{Error, Result};
use crate::images::{pair_sum, power_sum};
use crate::params::{check_beta, check_positive, AtomState, Regularization, Trajectory};
use crate::quad::{halving_ladder, require_contracted};
use crate::special::{bose, coth_diff_quotient, csch2};

/// Speed below which the inertial kernel uses its v → 0 limit.
pub const V_CROSSOVER: f64 = 1e-6;

/// Acceleration below which the accelerated kernel uses its α → 0 limit.
pub const ALPHA_CROSSOVER: f64 = 1e-9;

const FOUR_PI2: f64 = 4.0 * PI * PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelValue {
    pub value: Complex64,
    /// True for a finite-ε evaluation, false for a closed form or an
    /// ε → 0⁺ extrapolation.
    pub regularized: bool,
}

impl KernelValue {
    fn exact(value: Complex64) -> Self {
        Self {
            value,
            regularized: false,
        }
    }

    fn real(x: f64) -> Self {
        Self::exact(Complex64::new(x, 0.0))
    }

    pub fn re(&self) -> f64 {
        self.value.re
    }

    pub fn im(&self) -> f64 {
        self.value.im
    }
}

fn check_shift(eps: f64) -> Result<()> {
    if eps.is_nan() || eps < 0.0 {
        return Err(Error::Domain(format!("epsilon must be non-negative, got {eps}")));
    }
    Ok(())
}

fn check_speed(v: f64) -> Result<()> {
    Trajectory::Inertial { v }.check()
}

fn singular(what: &str) -> Error {
    Error::SingularInput(format!("{what} is singular at zero separation"))
}

/// −1/(4π²(u − iε)²); `eps = 0` gives the ε → 0⁺ value.
pub fn wightman_vacuum_inertial(u: f64, eps: f64) -> Result<KernelValue> {
    check_shift(eps)?;
    if u == 0.0 && eps == 0.0 {
        return Err(singular("vacuum Wightman function"));
    }
    let z = Complex64::new(u, -eps);
    Ok(KernelValue {
        value: -1.0 / (FOUR_PI2 * z * z),
        regularized: eps > 0.0,
    })
}

/// −(α²/16π²) csch²(αz/2) for complex z.
fn accelerated_vacuum(z: Complex64, alpha: f64) -> Complex64 {
    let h = z * (0.5 * alpha);
    let h = if h.re < 0.0 { -h } else { h };
    let e = (-2.0 * h).exp();
    let d = 1.0 - e;
    -(alpha * alpha / (4.0 * FOUR_PI2)) * 4.0 * e / (d * d)
}

/// ε → 0⁺ closed form −(α²/16π²) csch²(αu/2).
pub fn wightman_vacuum_accelerated_closed(u: f64, alpha: f64) -> Result<KernelValue> {
    check_positive("alpha", alpha)?;
    if u == 0.0 {
        return Err(singular("accelerated Wightman function"));
    }
    Ok(KernelValue::real(-(alpha * alpha) / (4.0 * FOUR_PI2) * csch2(0.5 * alpha * u)))
}

/// Image sum −(1/4π²) Σₙ (u − 2iε + i(2π/α)n)⁻² at a fixed shift.
pub fn wightman_vacuum_accelerated_at(u: f64, alpha: f64, eps: f64, n_max: usize) -> Result<KernelValue> {
    check_positive("alpha", alpha)?;
    check_shift(eps)?;
    if u == 0.0 && eps == 0.0 {
        return Err(singular("accelerated Wightman function"));
    }
    let s = power_sum(Complex64::new(u, -2.0 * eps), 2.0 * PI / alpha, 2, n_max);
    Ok(KernelValue {
        value: -s.value / FOUR_PI2,
        regularized: eps > 0.0,
    })
}

/// Image sum extrapolated to ε → 0⁺ over ε, ε/2, … .
pub fn wightman_vacuum_accelerated(u: f64, alpha: f64, reg: &Regularization) -> Result<KernelValue> {
    reg.check()?;
    check_positive("alpha", alpha)?;
    if u == 0.0 {
        return Err(singular("accelerated Wightman function"));
    }
    let period = 2.0 * PI / alpha;
    let mut scale = 0.0f64;
    let e = halving_ladder(reg.epsilon, reg.extrap_steps, |eps| {
        let s = power_sum(Complex64::new(u, -2.0 * eps), period, 2, reg.n_max);
        scale = scale.max(s.magnitude);
        Ok(-s.value / FOUR_PI2)
    })?;
    let floor = 100.0 * f64::EPSILON * scale / FOUR_PI2;
    let v = require_contracted("accelerated Wightman image sum", &e, reg.quad_tol, floor)?;
    Ok(KernelValue::exact(v))
}

/// Inertial thermal kernel in closed form.
///
/// Equivalent to √(1−v²)[coth(b) − coth(a)]/(8πβvu) with
/// a = √((1−v)/(1+v))·πu/β and b = √((1+v)/(1−v))·πu/β, evaluated as a
/// difference quotient so that no cancellation occurs as v → 0.
pub fn g_thermal_inertial(u: f64, beta: f64, v: f64) -> Result<KernelValue> {
    check_beta(beta)?;
    check_speed(v)?;
    if u == 0.0 {
        return Err(singular("thermal kernel"));
    }
    if beta.is_infinite() {
        return Ok(KernelValue::real(-1.0 / (FOUR_PI2 * u * u)));
    }
    let c = PI * u.abs() / beta;
    let g = if v < V_CROSSOVER {
        -csch2(c) / (4.0 * beta * beta)
    } else {
        let a = c * ((1.0 - v) / (1.0 + v)).sqrt();
        let b = c * ((1.0 + v) / (1.0 - v)).sqrt();
        -coth_diff_quotient(a, b) / (4.0 * beta * beta)
    };
    Ok(KernelValue::real(g))
}

/// Inertial thermal kernel from the image sum
/// (1/4π²) Σₙ 1/(2iβ(γ−1)u(n+ε) − [u − iβ(n+ε)]²), extrapolated in ε.
pub fn g_thermal_inertial_sum(u: f64, beta: f64, v: f64, reg: &Regularization) -> Result<KernelValue> {
    reg.check()?;
    check_beta(beta)?;
    check_speed(v)?;
    if beta.is_infinite() {
        return Err(Error::Domain("the image sum requires finite beta".into()));
    }
    if u == 0.0 {
        return Err(singular("thermal kernel"));
    }
    // the denominator factorizes as β²(m + p)(m + q), m = n + ε
    let gamma = 1.0 / (1.0 - v * v).sqrt();
    let p = Complex64::new(0.0, gamma * u * (1.0 - v) / beta);
    let q = Complex64::new(0.0, gamma * u * (1.0 + v) / beta);
    let pref = 1.0 / (FOUR_PI2 * beta * beta);
    let mut scale = 0.0f64;
    let e = halving_ladder(reg.epsilon, reg.extrap_steps, |eps| {
        let s = pair_sum(p, q, eps, reg.n_max);
        scale = scale.max(s.magnitude);
        Ok(s.value * pref)
    })?;
    let floor = 100.0 * f64::EPSILON * scale * pref;
    let v = require_contracted("inertial thermal image sum", &e, reg.quad_tol, floor)?;
    Ok(KernelValue::exact(v))
}

/// Accelerated thermal kernel g(τ′, τ″) in closed form.
///
/// Equivalent to α[coth(Y₊) − coth(Y₋)]/(8πβ[cosh ατ′ − cosh ατ″]) with
/// Y± = π e^{±αs} w/β, s = (τ′+τ″)/2, w = 2 sinh(α(τ′−τ″)/2)/α.
pub fn g_thermal_accelerated(tau1: f64, tau2: f64, beta: f64, alpha: f64) -> Result<KernelValue> {
    check_beta(beta)?;
    if !alpha.is_finite() || alpha < 0.0 {
        return Err(Error::Domain(format!("alpha must be non-negative and finite, got {alpha}")));
    }
    let u = tau1 - tau2;
    if u == 0.0 {
        return Err(singular("thermal kernel"));
    }
    if alpha < ALPHA_CROSSOVER {
        return g_thermal_inertial(u, beta, 0.0);
    }
    if beta.is_infinite() {
        return Ok(KernelValue::real(-(alpha * alpha) / (4.0 * FOUR_PI2) * csch2(0.5 * alpha * u)));
    }
    let s = 0.5 * (tau1 + tau2);
    let w = 2.0 * (0.5 * alpha * u.abs()).sinh() / alpha;
    if !w.is_finite() {
        return Ok(KernelValue::real(0.0));
    }
    let x = alpha * s.abs();
    let y_plus = PI * w * x.exp() / beta;
    let y_minus = PI * w * (-x).exp() / beta;
    let g = if y_minus == 0.0 {
        -1.0 / (FOUR_PI2 * w * w)
    } else {
        -coth_diff_quotient(y_minus, y_plus) / (4.0 * beta * beta)
    };
    Ok(KernelValue::real(g))
}

/// Accelerated thermal kernel from the image sum
/// (α²/4π²) Σₙ 1/(A² − (B − iβαn)²), A = cosh ατ′ − cosh ατ″,
/// B = sinh ατ′ − sinh ατ″.
pub fn g_thermal_accelerated_sum(
    tau1: f64,
    tau2: f64,
    beta: f64,
    alpha: f64,
    reg: &Regularization,
) -> Result<KernelValue> {
    reg.check()?;
    check_beta(beta)?;
    check_positive("alpha", alpha)?;
    let u = tau1 - tau2;
    if u == 0.0 {
        return Err(singular("thermal kernel"));
    }
    let s = 0.5 * (tau1 + tau2);
    let h = (0.5 * alpha * u).sinh();
    let a = 2.0 * (alpha * s).sinh() * h;
    let b = 2.0 * (alpha * s).cosh() * h;
    if beta.is_infinite() {
        return Ok(KernelValue::real(alpha * alpha / (FOUR_PI2 * (a - b) * (a + b))));
    }
    // A² − (B − iβαn)² = β²α²(n + p)(n + q)
    let ba = beta * alpha;
    let p = Complex64::new(0.0, -(a - b) / ba);
    let q = Complex64::new(0.0, (a + b) / ba);
    let sum = pair_sum(p, q, 0.0, reg.n_max);
    Ok(KernelValue::exact(sum.value / (FOUR_PI2 * beta * beta)))
}

/// Vacuum Wightman function along the trajectory, W(z) with complex
/// separation z.
fn trajectory_wightman(z: Complex64, traj: &Trajectory) -> Complex64 {
    match *traj {
        Trajectory::Inertial { .. } => -1.0 / (FOUR_PI2 * z * z),
        Trajectory::UniformAcceleration { alpha } => accelerated_vacuum(z, alpha),
    }
}

fn trajectory_wightman_sum(z: Complex64, traj: &Trajectory, n_max: usize) -> Complex64 {
    match *traj {
        Trajectory::Inertial { .. } => -1.0 / (FOUR_PI2 * z * z),
        Trajectory::UniformAcceleration { alpha } => -power_sum(z, 2.0 * PI / alpha, 2, n_max).value / FOUR_PI2,
    }
}

fn field_kernel(tau1: f64, tau2: f64, traj: &Trajectory, reg: &Regularization, sum: bool) -> Result<Complex64> {
    traj.check()?;
    reg.check()?;
    let z = Complex64::new(tau1 - tau2, -2.0 * reg.epsilon);
    Ok(if sum {
        trajectory_wightman_sum(z, traj, reg.n_max)
    } else {
        trajectory_wightman(z, traj)
    })
}

/// Field correlation C^F = −(1/8π²) Σₙ[(Δτ−2iε+iPn)⁻² + (Δτ+2iε+iPn)⁻²],
/// evaluated through the lattice closed form.
pub fn correlation_field(tau1: f64, tau2: f64, traj: &Trajectory, reg: &Regularization) -> Result<KernelValue> {
    let w = field_kernel(tau1, tau2, traj, reg, false)?;
    Ok(KernelValue {
        value: Complex64::new(w.re, 0.0),
        regularized: true,
    })
}

/// Field susceptibility χ^F = −(1/8π²i) Σₙ[(Δτ−2iε+iPn)⁻² − (Δτ+2iε+iPn)⁻²],
/// evaluated through the lattice closed form.
pub fn susceptibility_field(tau1: f64, tau2: f64, traj: &Trajectory, reg: &Regularization) -> Result<KernelValue> {
    let w = field_kernel(tau1, tau2, traj, reg, false)?;
    Ok(KernelValue {
        value: Complex64::new(w.im, 0.0),
        regularized: true,
    })
}

/// C^F by truncated image summation.
pub fn correlation_field_sum(tau1: f64, tau2: f64, traj: &Trajectory, reg: &Regularization) -> Result<KernelValue> {
    let z = Complex64::new(tau1 - tau2, -2.0 * reg.epsilon);
    traj.check()?;
    reg.check()?;
    let (a, b) = (trajectory_wightman_sum(z, traj, reg.n_max), trajectory_wightman_sum(z.conj(), traj, reg.n_max));
    Ok(KernelValue {
        value: Complex64::new(0.5 * (a + b).re, 0.0),
        regularized: true,
    })
}

/// χ^F by truncated image summation.
pub fn susceptibility_field_sum(tau1: f64, tau2: f64, traj: &Trajectory, reg: &Regularization) -> Result<KernelValue> {
    let z = Complex64::new(tau1 - tau2, -2.0 * reg.epsilon);
    traj.check()?;
    reg.check()?;
    let (a, b) = (trajectory_wightman_sum(z, traj, reg.n_max), trajectory_wightman_sum(z.conj(), traj, reg.n_max));
    let chi = (a - b) / Complex64::new(0.0, 2.0);
    Ok(KernelValue {
        value: Complex64::new(chi.re, 0.0),
        regularized: true,
    })
}

/// Atomic correlation C^A = ¼ cos(ω₀u); independent of the atomic state.
pub fn correlation_atom(u: f64, omega0: f64) -> f64 {
    0.25 * (omega0 * u).cos()
}

/// Atomic susceptibility χ^A = ½ sin(ω₀u) ⟨R₃⟩.
pub fn susceptibility_atom(u: f64, omega0: f64, atom: &AtomState) -> f64 {
    0.5 * (omega0 * u).sin() * atom.r3()
}

/// Bose–Einstein occupancy 1/(e^{βω} − 1); zero at β = +∞.
pub fn bose_occupancy(omega: f64, beta: f64) -> f64 {
    if beta.is_infinite() {
        0.0
    } else {
        bose(beta * omega)
    }
}
