//! Vacuum-fluctuation and radiation-reaction energy rates of the atom, the
//! field-side energy variation, and derivative couplings.
//!
//! Atom-side rates are closed forms. Field-side and derivative-coupling
//! rates are computed from the image-sum kernels by damped oscillatory
//! quadrature on [0, min(50/min(ω₀, α), 2000/ω₀)], Richardson-extrapolated in the damping
//! δ and in the iε shift.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{domain, Result};
use crate::images::power_sum;
use crate::params::{check_positive, AtomState, DetectorParams, OrderingParam, Regularization};
use crate::quad::{half_line_points, halving_ladder, integrate, require_contracted, Tolerance};
use crate::response::QUAD_IMAGE_CAP;
use crate::special::bose;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyRateReport {
    pub vf: Option<f64>,
    pub rr: Option<f64>,
    pub total: f64,
    pub lambda: f64,
    /// False when λ ≠ 1/2, where VF and RR are individually divergent.
    pub finite: bool,
    pub coupling_order: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FieldRates {
    pub vf: f64,
    pub rr: f64,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !alpha.is_finite() || alpha < 0.0 {
        return domain(format!("alpha must be non-negative and finite, got {alpha}"));
    }
    Ok(())
}

/// 1 + 2/(e^{2πω₀/α} − 1); equals 1 at α = 0.
pub fn planck_bracket(omega0: f64, alpha: f64) -> f64 {
    if alpha == 0.0 {
        1.0
    } else {
        1.0 + 2.0 * bose(2.0 * PI * omega0 / alpha)
    }
}

/// −(ω₀²μ²/8π)⟨R₃⟩[1 + 2/(e^{2πω₀/α} − 1)].
pub fn atom_vf_rate(params: &DetectorParams, alpha: f64, atom: &AtomState) -> Result<f64> {
    params.check()?;
    check_alpha(alpha)?;
    let w = params.omega0;
    Ok(-(w * w * params.mu * params.mu) / (8.0 * PI) * atom.r3() * planck_bracket(w, alpha))
}

/// −(ω₀²μ²/16π)[1 + 2/(e^{2πω₀/α} − 1)].
pub fn atom_rr_rate(params: &DetectorParams, alpha: f64) -> Result<f64> {
    params.check()?;
    check_alpha(alpha)?;
    let w = params.omega0;
    Ok(-(w * w * params.mu * params.mu) / (16.0 * PI) * planck_bracket(w, alpha))
}

/// Total rate −(ω₀²μ²/8π)[1/2 + ⟨R₃⟩][1 + 2/(e^{2πω₀/α} − 1)], which holds
/// for every ordering; the split into VF and RR is reported only for λ = 1/2.
pub fn atom_total_rate(
    params: &DetectorParams,
    alpha: f64,
    atom: &AtomState,
    lambda: OrderingParam,
) -> Result<EnergyRateReport> {
    params.check()?;
    check_alpha(alpha)?;
    let w = params.omega0;
    // + 0.0 folds the ground-state −0 into +0
    let total = -(w * w * params.mu * params.mu) / (8.0 * PI) * (0.5 + atom.r3()) * planck_bracket(w, alpha) + 0.0;
    let finite = lambda.is_symmetric();
    let (vf, rr) = if finite {
        (Some(atom_vf_rate(params, alpha, atom)?), Some(atom_rr_rate(params, alpha)?))
    } else {
        (None, None)
    };
    Ok(EnergyRateReport {
        vf,
        rr,
        total,
        lambda: lambda.value(),
        finite,
        coupling_order: 0,
    })
}

/// Image sum Σₖ (z + i(2π/α)k)^{−k}.
fn image_power(z: Complex64, alpha: f64, k: u32, n_max: usize) -> Complex64 {
    power_sum(z, 2.0 * PI / alpha, k, n_max).value
}

/// ∫₀^U f(u, η) e^{−δu} du extrapolated to δ → 0 and then to η → 0.
fn extrapolated_transform<F>(what: &str, omega0: f64, alpha: f64, reg: &Regularization, f: F) -> Result<f64>
where
    F: Fn(f64, f64) -> f64,
{
    let low = omega0.min(alpha);
    // past 2000/ω₀ the kernel tail is O(u⁻³) and contributes below 1e-9
    let u_max = (50.0 / low).min(2000.0 / omega0);
    let period = 2.0 * PI / alpha;
    // η = 2ε starts at a fixed fraction of the oscillation and image scales;
    // the integrals are analytic in η so the ladder converges geometrically
    let eta0 = (0.25 / omega0).min(0.125 * period).max(2.0 * reg.epsilon);
    let delta0 = 1e-3 * low;
    let chunk = (4.0 * PI / omega0).min(period);
    let tol = Tolerance::new(reg.quad_tol, 1e-2 * reg.quad_tol * omega0);
    let ladder_tol = reg.ladder_tol();
    let mut magnitude = 0.0f64;
    let outer = halving_ladder(0.5 * eta0, reg.extrap_steps, |eps| {
        let eta = 2.0 * eps;
        let pts = half_line_points(eta, 1.0 / omega0, chunk, u_max);
        let inner = halving_ladder(delta0, 2, |delta| {
            let g = |u: f64| Complex64::new(f(u, eta) * (-delta * u).exp(), 0.0);
            let q = integrate(g, &pts, tol)?;
            magnitude = magnitude.max(q.magnitude);
            Ok(q.value)
        })?;
        require_contracted(
            &format!("{what}: damping extrapolation"),
            &inner,
            ladder_tol,
            100.0 * f64::EPSILON * magnitude,
        )
    })?;
    let v = require_contracted(
        &format!("{what}: shift extrapolation"),
        &outer,
        ladder_tol,
        100.0 * f64::EPSILON * magnitude,
    )?;
    Ok(v.re)
}

/// Field-side VF and RR rates from the cubic image-sum kernels,
/// vf = (μ²/4π²)⟨R₃⟩ Σₖ∫₀^∞ sin(ω₀u)[(u−2iε+iPk)⁻³ + (u+2iε+iPk)⁻³] du and
/// rr = (μ²/8π²i) Σₖ∫₀^∞ cos(ω₀u)[(u−2iε+iPk)⁻³ − (u+2iε+iPk)⁻³] du.
pub fn field_rates(params: &DetectorParams, alpha: f64, atom: &AtomState, reg: &Regularization) -> Result<FieldRates> {
    params.check()?;
    check_positive("alpha", alpha)?;
    reg.check()?;
    let w = params.omega0;
    let mu2 = params.mu * params.mu;
    let n_max = reg.n_max.min(QUAD_IMAGE_CAP);
    // S(ū) = conj S(u) so the bracketed pairs are 2 Re S and 2i Im S
    let vf = if atom.r3() == 0.0 {
        0.0
    } else {
        let i = extrapolated_transform("field VF rate", w, alpha, reg, |u, eta| {
            (w * u).sin() * 2.0 * image_power(Complex64::new(u, -eta), alpha, 3, n_max).re
        })?;
        mu2 / (4.0 * PI * PI) * atom.r3() * i
    };
    let i = extrapolated_transform("field RR rate", w, alpha, reg, |u, eta| {
        (w * u).cos() * image_power(Complex64::new(u, -eta), alpha, 3, n_max).im
    })?;
    let rr = mu2 / (4.0 * PI * PI) * i;
    Ok(FieldRates { vf, rr })
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// VF and RR rates for the derivative coupling μω₀^{−n}∂ⁿφ, with kernels
/// ∂ⁿ_τ∂ⁿ_τ′ applied analytically to each image term:
/// (u + ic)⁻² ↦ (−1)ⁿ(2n+1)!(u + ic)^{−(2n+2)}.
pub fn derivative_coupling_rates(
    params: &DetectorParams,
    alpha: f64,
    atom: &AtomState,
    n: u32,
    reg: &Regularization,
) -> Result<EnergyRateReport> {
    params.check()?;
    check_positive("alpha", alpha)?;
    reg.check()?;
    if n > 8 {
        return domain(format!("coupling order {n} is outside the supported range 0..=8"));
    }
    let w = params.omega0;
    let mu2 = params.mu * params.mu;
    let n_max = reg.n_max.min(QUAD_IMAGE_CAP);
    let k = 2 * n + 2;
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    // C^F_n = (−1)^{n+1}(2n+1)!/(4π²) Re S, χ^F_n = (−1)^{n+1}(2n+1)!/(4π²) Im S
    let kpref = -sign * factorial(2 * n + 1) / (4.0 * PI * PI);
    let scale = w * mu2 / w.powi(2 * n as i32);
    let vf = if atom.r3() == 0.0 {
        0.0
    } else {
        let i = extrapolated_transform("derivative-coupling VF rate", w, alpha, reg, |u, eta| {
            (w * u).cos() * kpref * image_power(Complex64::new(u, -eta), alpha, k, n_max).re
        })?;
        -scale * atom.r3() * i
    };
    let i = extrapolated_transform("derivative-coupling RR rate", w, alpha, reg, |u, eta| {
        0.5 * (w * u).sin() * kpref * image_power(Complex64::new(u, -eta), alpha, k, n_max).im
    })?;
    let rr = scale * i;
    Ok(EnergyRateReport {
        vf: Some(vf),
        rr: Some(rr),
        total: vf + rr,
        lambda: OrderingParam::symmetric().value(),
        finite: true,
        coupling_order: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(omega0: f64, mu: f64) -> DetectorParams {
        DetectorParams::new(omega0, mu).unwrap()
    }

    #[test]
    fn bracket_is_coth() {
        for &(w, a) in &[(1.0, 1.0), (0.3, 2.0), (2.0, 0.5)] {
            let c = 1.0 / (PI * w / a).tanh();
            assert!((planck_bracket(w, a) - c).abs() < 1e-12);
        }
        assert_eq!(planck_bracket(1.0, 0.0), 1.0);
    }

    #[test]
    fn inertial_limits() {
        let d = p(1.3, 0.2);
        let base = d.omega0 * d.omega0 * d.mu * d.mu / (16.0 * PI);
        assert!((atom_vf_rate(&d, 0.0, &AtomState::plus()).unwrap() + base).abs() < 1e-17);
        assert!((atom_rr_rate(&d, 0.0).unwrap() + base).abs() < 1e-17);
        let t = atom_total_rate(&d, 0.0, &AtomState::plus(), OrderingParam::symmetric()).unwrap();
        assert!((t.total + 2.0 * base).abs() < 1e-17);
    }

    #[test]
    fn bracket_three() {
        let d = p(1.0, 1.0);
        let alpha = 2.0 * PI / 2f64.ln();
        let rr = atom_rr_rate(&d, alpha).unwrap();
        assert!((rr / (-3.0 / (16.0 * PI)) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn ordering_only_affects_split() {
        let d = p(1.0, 0.5);
        let a = atom_total_rate(&d, 1.0, &AtomState::plus(), OrderingParam::new(0.3).unwrap()).unwrap();
        let b = atom_total_rate(&d, 1.0, &AtomState::plus(), OrderingParam::symmetric()).unwrap();
        assert_eq!(a.total, b.total);
        assert!(!a.finite && a.vf.is_none() && a.rr.is_none());
        assert!(b.finite);
        assert!((b.vf.unwrap() + b.rr.unwrap() - b.total).abs() <= 1e-12 * b.total.abs());
        let g = atom_total_rate(&d, 1.0, &AtomState::minus(), OrderingParam::new(0.9).unwrap()).unwrap();
        assert_eq!(g.total, 0.0);
    }

    #[test]
    fn vf_signs() {
        let d = p(1.0, 1.0);
        let plus = atom_vf_rate(&d, 1.0, &AtomState::plus()).unwrap();
        let minus = atom_vf_rate(&d, 1.0, &AtomState::minus()).unwrap();
        assert!(plus < 0.0 && minus > 0.0);
        assert_eq!(plus, -minus);
    }

    #[test]
    fn field_vf_matches_atom_side() {
        let d = p(1.0, 1.0);
        let reg = Regularization::default();
        let atom = AtomState::new(0.3).unwrap();
        let f = field_rates(&d, 1.5, &atom, &reg).unwrap();
        let a = atom_vf_rate(&d, 1.5, &atom).unwrap();
        assert!((f.vf / a - 1.0).abs() < 1e-6);
        let zero = field_rates(&d, 1.5, &AtomState::new(0.0).unwrap(), &reg).unwrap();
        assert_eq!(zero.vf, 0.0);
    }

    #[test]
    fn field_rr_has_no_thermal_bracket() {
        // the image sum in Im S vanishes term by term away from u = 0
        let d = p(1.0, 0.7);
        let f = field_rates(&d, 2.0, &AtomState::plus(), &Regularization::default()).unwrap();
        let bare = -0.49 / (16.0 * PI);
        assert!((f.rr / bare - 1.0).abs() < 1e-6);
    }

    #[test]
    fn derivative_couplings_agree_across_orders() {
        let d = p(1.0, 1.0);
        let reg = Regularization::default();
        let r0 = derivative_coupling_rates(&d, 1.0, &AtomState::plus(), 0, &reg).unwrap();
        let r1 = derivative_coupling_rates(&d, 1.0, &AtomState::plus(), 1, &reg).unwrap();
        let vf = atom_vf_rate(&d, 1.0, &AtomState::plus()).unwrap();
        assert!((r0.vf.unwrap() / vf - 1.0).abs() < 1e-6);
        assert!((r1.vf.unwrap() / vf - 1.0).abs() < 1e-6);
        assert!((r1.rr.unwrap() / r0.rr.unwrap() - 1.0).abs() < 1e-6);
        assert_eq!(r1.coupling_order, 1);
        assert!(derivative_coupling_rates(&d, 1.0, &AtomState::plus(), 9, &reg).is_err());
    }
}
