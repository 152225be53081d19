//! Suite configuration: identity grids, convergence studies, tolerances.
//!
//! Grids are cartesian products of per-parameter axes (or explicit point
//! lists). An axis is a number, a list, `{start, stop, step}`, or
//! `{"random": {count, min, max}}` drawn from a ChaCha stream seeded by the
//! config's `seed`.

use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sonine_core::asymptotics::LimitTarget;
use sonine_core::identities::{IdentityId, IdentityParams, Tolerances};

use crate::error::ConfigError;

/// Upper bound on the points one axis may expand to.
pub const MAX_AXIS_POINTS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    #[serde(default)]
    pub identities: Vec<IdentityGrid>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub convergence: Vec<ConvergenceSpec>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputSpec>,
}

/// One parameter axis.
#[derive(Debug, Clone, PartialEq)]
pub enum Axis {
    List(Vec<f64>),
    Range { start: f64, stop: f64, step: f64 },
    Random { count: usize, min: f64, max: f64 },
}

const AXIS_SHAPES: &str = "a number, a list of numbers, {start, stop, step} or {\"random\": {count, min, max}}";

fn number(v: &Value, what: &str) -> Result<f64, String> {
    v.as_f64().ok_or_else(|| format!("{what} must be a number, got {v}"))
}

impl TryFrom<Value> for Axis {
    type Error = String;

    fn try_from(v: Value) -> Result<Self, String> {
        match &v {
            Value::Number(_) => Ok(Axis::List(vec![number(&v, "axis value")?])),
            Value::Array(items) => items
                .iter()
                .map(|i| number(i, "list entry"))
                .collect::<Result<Vec<_>, _>>()
                .map(Axis::List),
            Value::Object(map) if map.contains_key("random") => {
                let r = map["random"].as_object().ok_or("`random` must be an object")?;
                if map.len() != 1 {
                    return Err("a random axis takes only the `random` key".into());
                }
                let get = |k: &str| r.get(k).ok_or_else(|| format!("random axis is missing `{k}`"));
                let count = get("count")?
                    .as_u64()
                    .ok_or("random `count` must be a non-negative integer")? as usize;
                Ok(Axis::Random {
                    count,
                    min: number(get("min")?, "random `min`")?,
                    max: number(get("max")?, "random `max`")?,
                })
            }
            Value::Object(map) => {
                let get = |k: &str| map.get(k).ok_or_else(|| format!("range axis is missing `{k}`"));
                if let Some(extra) = map.keys().find(|k| !["start", "stop", "step"].contains(&k.as_str())) {
                    return Err(format!("unknown range key `{extra}`; expected {AXIS_SHAPES}"));
                }
                Ok(Axis::Range {
                    start: number(get("start")?, "range `start`")?,
                    stop: number(get("stop")?, "range `stop`")?,
                    step: number(get("step")?, "range `step`")?,
                })
            }
            _ => Err(format!("an axis must be {AXIS_SHAPES}, got {v}")),
        }
    }
}

impl From<Axis> for Value {
    fn from(a: Axis) -> Value {
        match a {
            Axis::List(v) => json!(v),
            Axis::Range { start, stop, step } => json!({"start": start, "stop": stop, "step": step}),
            Axis::Random { count, min, max } => json!({"random": {"count": count, "min": min, "max": max}}),
        }
    }
}

impl Serialize for Axis {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        Value::from(self.clone()).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Axis {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Axis::try_from(Value::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

impl Axis {
    fn check(&self) -> Result<(), String> {
        let finite = |v: f64, what: &str| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(format!("{what} must be finite"))
            }
        };
        match *self {
            Axis::List(ref v) => {
                if v.is_empty() {
                    return Err("list must not be empty".into());
                }
                v.iter().try_for_each(|&x| finite(x, "list entry"))
            }
            Axis::Range { start, stop, step } => {
                finite(start, "start")?;
                finite(stop, "stop")?;
                if !(step.is_finite() && step > 0.0) {
                    return Err(format!("step must be positive, got {step}"));
                }
                if stop < start {
                    return Err(format!("stop {stop} is below start {start}"));
                }
                if (stop - start) / step >= MAX_AXIS_POINTS as f64 {
                    return Err(format!("range expands to more than {MAX_AXIS_POINTS} points"));
                }
                Ok(())
            }
            Axis::Random { count, min, max } => {
                finite(min, "min")?;
                finite(max, "max")?;
                if count == 0 || count > MAX_AXIS_POINTS {
                    return Err(format!("count must be in 1..={MAX_AXIS_POINTS}, got {count}"));
                }
                if max < min {
                    return Err(format!("max {max} is below min {min}"));
                }
                Ok(())
            }
        }
    }

    /// Expands to concrete values; random axes consume `rng`.
    fn values(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        match *self {
            Axis::List(ref v) => v.clone(),
            Axis::Range { start, stop, step } => {
                let slack = 1e-9 * step;
                (0..)
                    .map(|i| start + i as f64 * step)
                    .take_while(|&v| v <= stop + slack)
                    .map(|v| v.min(stop))
                    .collect()
            }
            Axis::Random { count, min, max } => (0..count)
                .map(|_| if max > min { rng.gen_range(min..max) } else { min })
                .collect(),
        }
    }
}

/// Explicit grid point; missing parameters stay unset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSpec {
    #[serde(default)]
    pub alpha: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    pub x: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu: Option<f64>,
}

/// Raw parameter values for one check; turned into [`IdentityParams`] at run time
/// so that malformed orders surface as per-check errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawPoint {
    pub alpha: f64,
    pub beta: Option<f64>,
    pub x: f64,
    pub y: Option<f64>,
    pub nu: Option<f64>,
}

impl RawPoint {
    pub fn params(&self) -> sonine_core::Result<IdentityParams> {
        let mut p = IdentityParams::new(self.alpha, self.x)?;
        if let Some(b) = self.beta {
            p = p.with_beta(b)?;
        }
        if let Some(y) = self.y {
            p = p.with_y(y);
        }
        if let Some(nu) = self.nu {
            p = p.with_nu(nu)?;
        }
        Ok(p)
    }
}

impl From<PointSpec> for RawPoint {
    fn from(p: PointSpec) -> Self {
        Self {
            alpha: p.alpha,
            beta: p.beta,
            x: p.x,
            y: p.y,
            nu: p.nu,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdentityGrid {
    pub id: IdentityId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<PointSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Axis>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<Axis>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<Axis>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<Axis>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu: Option<Axis>,
    /// Every point of this grid is expected to be rejected.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub expect_error: bool,
}

fn needs(id: IdentityId) -> (bool, bool, bool) {
    // (beta, y, nu)
    match id {
        IdentityId::SonineSecond | IdentityId::SonineGeneralized => (true, true, false),
        IdentityId::Ij | IdentityId::IjGeneralized | IdentityId::FractionalIntegral => (true, false, false),
        IdentityId::Pi => (false, false, true),
        IdentityId::OrderSum => (false, true, false),
    }
}

impl IdentityGrid {
    fn validate(&self, field: &str) -> Result<(), ConfigError> {
        let invalid = |sub: &str, message: String| ConfigError::Invalid {
            field: format!("{field}{sub}"),
            message,
        };
        let axes = [
            ("alpha", &self.alpha),
            ("beta", &self.beta),
            ("x", &self.x),
            ("y", &self.y),
            ("nu", &self.nu),
        ];
        if let Some(points) = &self.points {
            if let Some((name, _)) = axes.iter().find(|(_, a)| a.is_some()) {
                return Err(invalid(&format!(".{name}"), "use either `points` or axes, not both".into()));
            }
            let (nb, ny, nn) = needs(self.id);
            for (i, p) in points.iter().enumerate() {
                for (name, required, present) in [("beta", nb, p.beta.is_some()), ("y", ny, p.y.is_some()), ("nu", nn, p.nu.is_some())] {
                    if required && !present {
                        return Err(invalid(&format!(".points[{i}].{name}"), format!("required by `{}`", self.id)));
                    }
                }
            }
            return Ok(());
        }
        for (name, axis) in axes {
            if let Some(a) = axis {
                a.check().map_err(|m| invalid(&format!(".{name}"), m))?;
            }
        }
        if self.x.is_none() {
            return Err(invalid(".x", "missing axis".into()));
        }
        let (nb, ny, nn) = needs(self.id);
        for (name, required, present) in [("beta", nb, self.beta.is_some()), ("y", ny, self.y.is_some()), ("nu", nn, self.nu.is_some())] {
            if required && !present {
                return Err(invalid(&format!(".{name}"), format!("required by `{}`", self.id)));
            }
        }
        Ok(())
    }

    /// Points in order: explicit list, or the product alpha x beta x x x y x nu
    /// with the last axis varying fastest.
    pub fn expand(&self, rng: &mut ChaCha8Rng) -> Vec<RawPoint> {
        if let Some(points) = &self.points {
            return points.iter().map(|&p| p.into()).collect();
        }
        let mut axis = |a: &Option<Axis>| a.as_ref().map(|a| a.values(rng));
        let alphas = axis(&self.alpha).unwrap_or_else(|| vec![0.0]);
        let betas = axis(&self.beta);
        let xs = axis(&self.x).unwrap_or_default();
        let ys = axis(&self.y);
        let nus = axis(&self.nu);
        let opt = |v: &Option<Vec<f64>>| -> Vec<Option<f64>> {
            v.as_ref().map_or(vec![None], |v| v.iter().map(|&x| Some(x)).collect())
        };
        let mut out = Vec::new();
        for &alpha in &alphas {
            for &beta in &opt(&betas) {
                for &x in &xs {
                    for &y in &opt(&ys) {
                        for &nu in &opt(&nus) {
                            out.push(RawPoint { alpha, beta, x, y, nu });
                        }
                    }
                }
            }
        }
        out
    }
}

/// A convergence study and its pass criteria.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceSpec {
    #[serde(flatten)]
    pub target: LimitTarget,
    #[serde(rename = "N_list")]
    pub n_list: Vec<u64>,
    /// Accepted interval for the fitted rate; no rate requirement when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rate_window: Option<(f64, f64)>,
    /// Largest accepted gap at the last `N` (limit targets).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_final_gap: Option<f64>,
    /// Steps where the gap may grow (limit targets).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_non_monotone: Option<usize>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub expect_error: bool,
}

impl ConvergenceSpec {
    fn validate(&self, field: &str) -> Result<(), ConfigError> {
        let invalid = |message: String| ConfigError::Invalid {
            field: format!("{field}.N_list"),
            message,
        };
        if self.n_list.len() < 3 {
            return Err(invalid(format!("needs at least 3 values, got {}", self.n_list.len())));
        }
        if self.n_list[0] == 0 || self.n_list.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("values must be positive and strictly increasing".into()));
        }
        if let Some((lo, hi)) = self.rate_window {
            if !(lo <= hi) {
                return Err(ConfigError::Invalid {
                    field: format!("{field}.rate_window"),
                    message: format!("empty window [{lo}, {hi}]"),
                });
            }
        }
        Ok(())
    }
}

impl SuiteConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let cfg: SuiteConfig = serde_json::from_str(text).map_err(|e| ConfigError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let t = self.tolerances;
        if !(t.abs.is_finite() && t.abs >= 0.0 && t.rel.is_finite() && t.rel >= 0.0) {
            return Err(ConfigError::Invalid {
                field: "tolerances".into(),
                message: format!("abs and rel must be finite and non-negative, got {} and {}", t.abs, t.rel),
            });
        }
        for (i, g) in self.identities.iter().enumerate() {
            g.validate(&format!("identities[{i}]"))?;
        }
        for (i, c) in self.convergence.iter().enumerate() {
            c.validate(&format!("convergence[{i}]"))?;
        }
        Ok(())
    }

    /// All identity checks in config order, random axes drawn from the seeded stream.
    pub fn expand_identities(&self) -> Vec<(usize, IdentityId, RawPoint)> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        self.identities
            .iter()
            .enumerate()
            .flat_map(|(i, g)| g.expand(&mut rng).into_iter().map(move |p| (i, g.id, p)))
            .collect()
    }
}
