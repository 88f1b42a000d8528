//! First-order detector response per unit squared matrix element.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::images::power_sum;
use crate::params::{check_positive, Regularization, Trajectory};
use crate::quad::{full_line_points, halving_ladder, integrate, require_contracted, Tolerance};

/// Image count used inside quadratures; the analytic tail makes larger
/// truncations numerically identical.
pub const QUAD_IMAGE_CAP: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResponseResult {
    pub rate: f64,
    pub delta_e: f64,
    pub trajectory: Trajectory,
}

/// An inertial detector in the vacuum is never excited.
pub fn response_inertial(delta_e: f64) -> Result<ResponseResult> {
    check_positive("deltaE", delta_e)?;
    Ok(ResponseResult {
        rate: 0.0,
        delta_e,
        trajectory: Trajectory::Inertial { v: 0.0 },
    })
}

/// Planck response (1/2π) ΔE/(e^{2πΔE/α} − 1).
pub fn response_accelerated(delta_e: f64, alpha: f64) -> Result<ResponseResult> {
    check_positive("deltaE", delta_e)?;
    check_positive("alpha", alpha)?;
    Ok(ResponseResult {
        rate: planck_rate(delta_e, alpha),
        delta_e,
        trajectory: Trajectory::UniformAcceleration { alpha },
    })
}

/// Planck response for a signed gap; negative ΔE is emission.
pub fn planck_rate(delta_e: f64, alpha: f64) -> f64 {
    if delta_e == 0.0 {
        return alpha / (4.0 * PI * PI);
    }
    let x = 2.0 * PI * delta_e / alpha;
    if x == f64::INFINITY {
        return 0.0;
    }
    delta_e / x.exp_m1() / (2.0 * PI)
}

/// Unruh temperature α/2π.
pub fn unruh_temperature(alpha: f64) -> Result<f64> {
    check_positive("alpha", alpha)?;
    Ok(alpha / (2.0 * PI))
}

/// Quadrature oracle for the inertial response,
/// −(1/4π²) ∫_{−U}^{U} e^{−iuΔE} e^{−ε|u|} (u − iε)⁻² du.
///
/// The damping window is tied to the shift so that a single regulator is
/// removed; the exact value tends to zero with ε.
pub fn inertial_response_oracle(delta_e: f64, eps: f64, window: f64, quad_tol: f64) -> Result<Complex64> {
    check_positive("deltaE", delta_e)?;
    check_positive("epsilon", eps)?;
    check_positive("window", window)?;
    let f = |u: f64| {
        let z = Complex64::new(u, -eps);
        Complex64::from_polar((-eps * u.abs()).exp(), -u * delta_e) / (z * z)
    };
    let pts = full_line_points(eps, 1.0 / delta_e, 2.0 / delta_e, window);
    let q = integrate(f, &pts, Tolerance::new(quad_tol, 0.0))?;
    Ok(-q.value / (4.0 * PI * PI))
}

/// Sum-and-quadrature oracle for the accelerated response,
/// −(1/4π²) Σₙ ∫ e^{−iuΔE} (u − 2iε + i(2π/α)n)⁻² du, with damping
/// e^{−δ|u|} and Richardson extrapolation in δ and in ε.
pub fn accelerated_response_oracle(delta_e: f64, alpha: f64, reg: &Regularization) -> Result<f64> {
    check_positive("deltaE", delta_e)?;
    check_positive("alpha", alpha)?;
    reg.check()?;
    let period = 2.0 * PI / alpha;
    let n_max = reg.n_max.min(QUAD_IMAGE_CAP);
    let low = delta_e.min(alpha);
    let u_max = 50.0 / low;
    let tol = Tolerance::new(reg.quad_tol, 0.0);
    let ladder_tol = reg.ladder_tol();
    // shifts start at a fraction of the gap scale; the dependence on ε is
    // analytic, so the ladder converges geometrically
    let eps0 = reg.epsilon.max(0.125 / delta_e.max(alpha));
    let delta0 = 0.001 * low;
    let mut magnitude = 0.0f64;
    let outer = halving_ladder(eps0, reg.extrap_steps, |eps| {
        let pts = full_line_points(2.0 * eps, 1.0 / delta_e.max(alpha), 2.0 / delta_e.max(alpha), u_max);
        let inner = halving_ladder(delta0, 2, |delta| {
            let f = |u: f64| {
                let z = Complex64::new(u, -2.0 * eps);
                let w = power_sum(z, period, 2, n_max).value;
                Complex64::from_polar((-delta * u.abs()).exp(), -u * delta_e) * w
            };
            let q = integrate(f, &pts, tol)?;
            magnitude = magnitude.max(q.magnitude);
            Ok(q.value)
        })?;
        require_contracted("response damping extrapolation", &inner, ladder_tol, 100.0 * f64::EPSILON * magnitude)
    })?;
    let v = require_contracted("response shift extrapolation", &outer, ladder_tol, 100.0 * f64::EPSILON * magnitude)?;
    let rate = -v / (4.0 * PI * PI);
    if rate.im.abs() > ladder_tol * rate.re.abs().max(f64::MIN_POSITIVE) + 1e-3 * f64::EPSILON * magnitude {
        return Err(Error::NonConvergence {
            what: "response oracle imaginary part".into(),
            estimate: rate.im.abs(),
            tolerance: ladder_tol * rate.re.abs(),
        });
    }
    Ok(rate.re)
}
