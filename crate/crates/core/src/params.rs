//! Domain types and parameter validation.
//!
//! Natural units (ħ = c = k_B = 1) are used throughout. Zero temperature is
//! the distinguished value `beta = f64::INFINITY`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Level splitting and monopole coupling of the detector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectorParams {
    pub omega0: f64,
    pub mu: f64,
}

impl DetectorParams {
    pub fn new(omega0: f64, mu: f64) -> Result<Self> {
        let p = Self { omega0, mu };
        p.check()?;
        Ok(p)
    }

    pub fn check(&self) -> Result<()> {
        if !self.omega0.is_finite() || self.omega0 <= 0.0 {
            return domain(format!("omega0 must be positive and finite, got {}", self.omega0));
        }
        if !self.mu.is_finite() || self.mu < 0.0 {
            return domain(format!("mu must be non-negative and finite, got {}", self.mu));
        }
        Ok(())
    }
}

impl Default for DetectorParams {
    fn default() -> Self {
        Self { omega0: 1.0, mu: 0.1 }
    }
}

/// Inverse reservoir temperature. `f64::INFINITY` is exact zero temperature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThermalState {
    #[serde(with = "beta_serde")]
    pub beta: f64,
}

impl ThermalState {
    pub fn new(beta: f64) -> Result<Self> {
        let t = Self { beta };
        t.check()?;
        Ok(t)
    }

    pub fn zero_temperature() -> Self {
        Self { beta: f64::INFINITY }
    }

    pub fn is_zero_temperature(&self) -> bool {
        self.beta == f64::INFINITY
    }

    pub fn temperature(&self) -> f64 {
        1.0 / self.beta
    }

    pub fn check(&self) -> Result<()> {
        if self.beta.is_nan() || self.beta <= 0.0 {
            return domain(format!("beta must be positive, got {}", self.beta));
        }
        Ok(())
    }
}

impl Default for ThermalState {
    fn default() -> Self {
        Self { beta: 1.0 }
    }
}

/// Accepts a number, or one of the strings `"inf"`, `"infinity"`, `"+inf"`;
/// zero temperature is written back as `"inf"`.
pub mod beta_serde {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(beta: &f64, s: S) -> Result<S::Ok, S::Error> {
        if beta.is_infinite() && *beta > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*beta)
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(x) => Ok(x),
            Repr::Text(s) => parse(&s).ok_or_else(|| de::Error::custom(format!("invalid beta {s:?}"))),
        }
    }

    pub fn parse(s: &str) -> Option<f64> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "+inf" | "infinity" | "+infinity" => Some(f64::INFINITY),
            other => other.parse().ok(),
        }
    }
}

/// Detector worldline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Trajectory {
    Inertial { v: f64 },
    #[serde(rename = "accelerated")]
    UniformAcceleration { alpha: f64 },
}

impl Trajectory {
    pub fn check(&self) -> Result<()> {
        match *self {
            Trajectory::Inertial { v } => {
                if !(0.0..1.0).contains(&v) {
                    return domain(format!("speed must be < 1 and non-negative, got {v}"));
                }
            }
            Trajectory::UniformAcceleration { alpha } => {
                if !alpha.is_finite() || alpha <= 0.0 {
                    return domain(format!("alpha must be positive and finite, got {alpha}"));
                }
            }
        }
        Ok(())
    }

    /// Proper acceleration, zero for inertial motion.
    pub fn alpha(&self) -> f64 {
        match *self {
            Trajectory::Inertial { .. } => 0.0,
            Trajectory::UniformAcceleration { alpha } => alpha,
        }
    }
}

impl Default for Trajectory {
    fn default() -> Self {
        Trajectory::UniformAcceleration { alpha: 1.0 }
    }
}

/// Shift, truncation and tolerance settings for sums and quadratures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Regularization {
    pub epsilon: f64,
    pub n_max: usize,
    pub quad_tol: f64,
    pub extrap_steps: usize,
}

impl Default for Regularization {
    fn default() -> Self {
        Self {
            epsilon: 1e-6,
            n_max: 10_000,
            quad_tol: 1e-10,
            extrap_steps: 4,
        }
    }
}

impl Regularization {
    pub fn check(&self) -> Result<()> {
        if !self.epsilon.is_finite() || self.epsilon <= 0.0 {
            return domain(format!("epsilon must be positive, got {}", self.epsilon));
        }
        if self.n_max < 1 {
            return domain("n_max must be at least 1");
        }
        if !(self.quad_tol > 0.0 && self.quad_tol < 1.0) {
            return domain(format!("quad_tol must lie in (0, 1), got {}", self.quad_tol));
        }
        if self.extrap_steps < 1 {
            return domain("extrap_steps must be at least 1");
        }
        Ok(())
    }

    /// Contraction tolerance for extrapolations whose ladder starts at a
    /// physical scale rather than at `epsilon`.
    pub fn ladder_tol(&self) -> f64 {
        self.quad_tol.sqrt()
    }
}

/// Operator-ordering weight λ of λAB + (1−λ)BA.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OrderingParam(f64);

impl OrderingParam {
    pub fn new(lambda: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return domain(format!("lambda must lie in [0, 1], got {lambda}"));
        }
        Ok(Self(lambda))
    }

    pub fn symmetric() -> Self {
        Self(0.5)
    }

    pub fn value(&self) -> f64 {
        self.0
    }

    pub fn is_symmetric(&self) -> bool {
        self.0 == 0.5
    }
}

/// Expectation value ⟨a|R₃|a⟩ of the atomic state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtomState {
    r3: f64,
}

impl AtomState {
    pub fn new(r3: f64) -> Result<Self> {
        if r3.is_nan() || r3.abs() > 0.5 {
            return domain(format!("<R3> must lie in [-1/2, 1/2], got {r3}"));
        }
        Ok(Self { r3 })
    }

    pub fn plus() -> Self {
        Self { r3: 0.5 }
    }

    pub fn minus() -> Self {
        Self { r3: -0.5 }
    }

    /// Superposition c₊|+⟩ + c₋|−⟩.
    pub fn from_amplitudes(c_plus: Complex64, c_minus: Complex64) -> Result<Self> {
        let (pp, pm) = (c_plus.norm_sqr(), c_minus.norm_sqr());
        if (pp + pm - 1.0).abs() > 1e-12 {
            return domain(format!("amplitudes must be normalized, |c+|^2 + |c-|^2 = {}", pp + pm));
        }
        Self::new(0.5 * (pp - pm))
    }

    pub fn r3(&self) -> f64 {
        self.r3
    }
}

/// A parameter set whose invariants have all been checked.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidatedConfig {
    pub params: DetectorParams,
    pub thermal: ThermalState,
    pub trajectory: Trajectory,
    pub reg: Regularization,
}

pub fn validate(
    params: DetectorParams,
    thermal: ThermalState,
    trajectory: Trajectory,
    reg: Regularization,
) -> Result<ValidatedConfig> {
    params.check()?;
    thermal.check()?;
    trajectory.check()?;
    reg.check()?;
    let thermal = if thermal.beta.is_infinite() {
        ThermalState::zero_temperature()
    } else {
        thermal
    };
    Ok(ValidatedConfig {
        params,
        thermal,
        trajectory,
        reg,
    })
}

impl ValidatedConfig {
    pub fn revalidate(&self) -> Result<ValidatedConfig> {
        validate(self.params, self.thermal, self.trajectory, self.reg)
    }
}

pub(crate) fn check_beta(beta: f64) -> Result<()> {
    ThermalState { beta }.check()
}

pub(crate) fn check_positive(name: &str, x: f64) -> Result<()> {
    if !x.is_finite() || x <= 0.0 {
        return domain(format!("{name} must be positive and finite, got {x}"));
    }
    Ok(())
}
