//! Run configuration: one JSON document, every field overridable by a
//! dotted command-line flag.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use unruh_kinetics::{DetectorParams, Regularization, ThermalState, Trajectory};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub format: Format,
    /// Standard output when absent.
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAxis {
    /// Dotted config path, e.g. `trajectory.alpha`.
    pub param: String,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    #[serde(default)]
    pub scale: Scale,
}

impl SweepAxis {
    pub fn values(&self) -> Result<Vec<f64>> {
        if self.count < 2 {
            bail!("sweep axis {} needs count >= 2, got {}", self.param, self.count);
        }
        if !(self.start.is_finite() && self.stop.is_finite()) {
            bail!("sweep axis {} has non-finite bounds", self.param);
        }
        let n = self.count - 1;
        Ok(match self.scale {
            Scale::Linear => (0..=n)
                .map(|i| self.start + (self.stop - self.start) * i as f64 / n as f64)
                .collect(),
            Scale::Log => {
                if self.start <= 0.0 || self.stop <= 0.0 {
                    bail!("log sweep axis {} needs positive bounds", self.param);
                }
                let (a, b) = (self.start.ln(), self.stop.ln());
                (0..=n).map(|i| (a + (b - a) * i as f64 / n as f64).exp()).collect()
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum SweepTarget {
    #[default]
    Steady,
    Rates,
    Response,
    Kernel,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub axes: Vec<SweepAxis>,
    pub target: SweepTarget,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KernelConfig {
    /// Proper-time separations u = τ′ − τ″.
    pub u: Vec<f64>,
    /// τ″; only the accelerated kernel at finite β depends on it.
    pub tau2: f64,
}

impl Default for KernelConfig {
    fn default() -> Self {
        Self { u: vec![1.0], tau2: 0.0 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PopulationsConfig {
    pub init_excited: f64,
    /// Defaults to five relaxation times.
    pub tau_end: Option<f64>,
    pub points: usize,
    /// RK4 steps per output interval; automatic when absent.
    pub steps: Option<usize>,
}

impl Default for PopulationsConfig {
    fn default() -> Self {
        Self {
            init_excited: 1.0,
            tau_end: None,
            points: 101,
            steps: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RatesConfig {
    /// ⟨R₃⟩ ∈ [−1/2, 1/2].
    pub r3: f64,
    pub lambda: f64,
    pub n: u32,
    /// Also evaluate the numeric field-side rates.
    pub field: bool,
}

impl Default for RatesConfig {
    fn default() -> Self {
        Self {
            r3: 0.5,
            lambda: 0.5,
            n: 0,
            field: false,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ResponseConfig {
    pub delta_e: Vec<f64>,
    /// Also run the quadrature oracle for each row.
    pub oracle: bool,
}

impl Default for ResponseConfig {
    fn default() -> Self {
        Self {
            delta_e: vec![1.0],
            oracle: false,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FermionConfig {
    /// JSON array of {"omega", "g"}; a uniform bath when absent.
    pub spectrum: Option<PathBuf>,
    pub modes: usize,
    pub g: f64,
    pub dt: f64,
    pub init_excited: f64,
    pub t_end: f64,
    pub points: usize,
    /// Typical interaction strength for the coarse-graining check.
    pub v_typ: Option<f64>,
    /// Bath correlation time; defaults to dt.
    pub tau_c: Option<f64>,
}

impl Default for FermionConfig {
    fn default() -> Self {
        Self {
            spectrum: None,
            modes: 101,
            g: 0.1,
            dt: 10.0,
            init_excited: 1.0,
            t_end: 50.0,
            points: 101,
            v_typ: None,
            tau_c: None,
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub detector: DetectorParams,
    pub thermal: ThermalState,
    pub trajectory: Trajectory,
    pub regularization: Regularization,
    pub output: OutputConfig,
    pub sweep: SweepConfig,
    pub kernel: KernelConfig,
    pub populations: PopulationsConfig,
    pub rates: RatesConfig,
    pub response: ResponseConfig,
    pub fermion: FermionConfig,
}

/// Raw config document with overrides applied, kept as a JSON value so that
/// sweep points can be re-derived from it.
#[derive(Debug, Clone)]
pub struct ConfigDoc(pub Value);

/// A config document that failed to parse or validate.
#[derive(Debug, thiserror::Error)]
#[error("invalid configuration: {0}")]
pub struct ConfigError(pub String);

impl ConfigDoc {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        match path {
            None => Ok(Self(Value::Object(Map::new()))),
            Some(p) => {
                let text = std::fs::read_to_string(p).with_context(|| format!("reading config {}", p.display()))?;
                let v: Value = serde_json::from_str(&text).map_err(|e| ConfigError(format!("{}: {e}", p.display())))?;
                if !v.is_object() {
                    return Err(ConfigError("top level must be a JSON object".into()).into());
                }
                Ok(Self(v))
            }
        }
    }

    pub fn set(&mut self, dotted: &str, value: Value) -> Result<()> {
        let parts: Vec<&str> = dotted.split('.').collect();
        if parts.iter().any(|p| p.is_empty()) {
            return Err(ConfigError(format!("malformed parameter name {dotted:?}")).into());
        }
        let mut node = &mut self.0;
        for (i, part) in parts.iter().enumerate() {
            let obj = match node {
                Value::Object(m) => m,
                _ => return Err(ConfigError(format!("{dotted}: {} is not a section", parts[..i].join("."))).into()),
            };
            if i + 1 == parts.len() {
                obj.insert(part.to_string(), value);
                return Ok(());
            }
            node = obj.entry(part.to_string()).or_insert_with(|| Value::Object(Map::new()));
        }
        unreachable!()
    }

    pub fn parse(&self) -> Result<RunConfig> {
        let mut doc = serde_json::to_value(RunConfig::default())?;
        // variants carry different fields, so the trajectory is never merged
        if let Value::Object(m) = &mut doc {
            if self.0.get("trajectory").is_some() {
                m.remove("trajectory");
            }
        }
        merge(&mut doc, &self.0);
        // `--trajectory.alpha 2` alone selects the accelerated worldline
        if let Some(Value::Object(t)) = doc.get_mut("trajectory") {
            if !t.contains_key("kind") {
                let kind = if t.contains_key("v") { "inertial" } else { "accelerated" };
                t.insert("kind".into(), Value::String(kind.into()));
            }
        }
        let cfg: RunConfig = serde_json::from_value(doc).map_err(|e| ConfigError(e.to_string()))?;
        unruh_kinetics::validate(cfg.detector, cfg.thermal, cfg.trajectory, cfg.regularization)?;
        Ok(cfg)
    }
}

fn merge(base: &mut Value, over: &Value) {
    match (base, over) {
        (Value::Object(b), Value::Object(o)) => {
            for (k, v) in o {
                match b.get_mut(k) {
                    Some(slot) if slot.is_object() && v.is_object() => merge(slot, v),
                    _ => {
                        b.insert(k.clone(), v.clone());
                    }
                }
            }
        }
        (b, o) => *b = o.clone(),
    }
}

/// Parses an override value as JSON when possible, else as a bare string.
pub fn parse_value(raw: &str) -> Value {
    serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()))
}

pub type Override = (String, Value);

/// Splits dotted `--a.b value` / `--a.b=value` flags off the argument list.
pub fn split_overrides(args: Vec<String>) -> Result<(Vec<String>, Vec<Override>)> {
    let mut rest = Vec::with_capacity(args.len());
    let mut overrides = Vec::new();
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        let name = match a.strip_prefix("--") {
            Some(n) if n.contains('.') && !n.starts_with('.') => n.to_string(),
            _ => {
                rest.push(a);
                continue;
            }
        };
        match name.split_once('=') {
            Some((k, v)) if k.contains('.') => overrides.push((k.to_string(), parse_value(v))),
            Some(_) => rest.push(a),
            None => match it.next() {
                Some(v) => overrides.push((name, parse_value(&v))),
                None => return Err(ConfigError(format!("missing value for --{name}")).into()),
            },
        }
    }
    Ok((rest, overrides))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[&str]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn overrides_are_split() {
        let (rest, ov) = split_overrides(s(&["bin", "rates", "--detector.omega0", "2", "--thermal.beta=inf", "--out", "x"])).unwrap();
        assert_eq!(rest, s(&["bin", "rates", "--out", "x"]));
        assert_eq!(ov[0], ("detector.omega0".into(), serde_json::json!(2)));
        assert_eq!(ov[1], ("thermal.beta".into(), Value::String("inf".into())));
        assert!(split_overrides(s(&["bin", "--detector.mu"])).is_err());
    }

    #[test]
    fn dotted_set_builds_sections() {
        let mut d = ConfigDoc(serde_json::json!({}));
        d.set("trajectory.kind", Value::String("accelerated".into())).unwrap();
        d.set("trajectory.alpha", serde_json::json!(2.0)).unwrap();
        let cfg = d.parse().unwrap();
        assert_eq!(cfg.trajectory.alpha(), 2.0);
        d.set("detector.mu", serde_json::json!(0.5)).unwrap();
        let cfg = d.parse().unwrap();
        assert_eq!((cfg.detector.omega0, cfg.detector.mu), (1.0, 0.5));
        d.set("detector.bogus", serde_json::json!(1)).unwrap();
        assert!(d.parse().is_err());
    }

    #[test]
    fn log_axis() {
        let a = SweepAxis {
            param: "trajectory.alpha".into(),
            start: 0.1,
            stop: 10.0,
            count: 3,
            scale: Scale::Log,
        };
        let v = a.values().unwrap();
        assert!((v[1] - 1.0).abs() < 1e-14 && (v[2] - 10.0).abs() < 1e-12);
        let bad = SweepAxis { count: 1, ..a };
        assert!(bad.values().is_err());
    }
}
