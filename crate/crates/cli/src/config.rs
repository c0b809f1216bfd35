//! Run configuration documents.
//!
//! ```json
//! {
//!   "preset": {"kind": "harmonic", "m": 1, "omega": 1},
//!   "boundary": {"xA": 0, "tA": 0, "xB": 1, "tB": 1.5707963}
//! }
//! ```
//!
//! `preset` may also be a bare name (`"harmonic"`), in which case the
//! parameters take their defaults. Instead of a preset, `lagrangian` gives the
//! coefficients `a`, `b`, `c` explicitly.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use qhj::{BoundaryData, Method, Preset, QuadraticLagrangian, SolverOptions, TimeCoefficient};

use crate::error::CliError;
use crate::table::Format;

pub const DEFAULT_SLICES: [usize; 5] = [8, 16, 32, 64, 128];
pub const DEFAULT_STEPS: usize = 2000;
pub const MIN_GRID: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Preset(Preset),
    Explicit,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct GridSpec {
    #[serde(default = "default_x_min")]
    pub x_min: f64,
    #[serde(default = "default_x_max")]
    pub x_max: f64,
    #[serde(default = "default_n")]
    pub n: usize,
}

fn default_x_min() -> f64 {
    -12.0
}

fn default_x_max() -> f64 {
    12.0
}

fn default_n() -> usize {
    1024
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            x_min: default_x_min(),
            x_max: default_x_max(),
            n: default_n(),
        }
    }
}

/// Initial Gaussian packet for `evolve`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct PacketSpec {
    #[serde(default)]
    pub x0: f64,
    #[serde(default)]
    pub p0: f64,
    #[serde(default = "one")]
    pub sigma0: f64,
}

fn one() -> f64 {
    1.0
}

impl Default for PacketSpec {
    fn default() -> Self {
        PacketSpec {
            x0: 0.0,
            p0: 0.0,
            sigma0: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvolutionSolver {
    #[default]
    Kernel,
    CrankNicolson,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolutionSpec {
    #[serde(rename = "tA", default)]
    pub t_a: f64,
    #[serde(rename = "tB")]
    pub t_b: f64,
    #[serde(default)]
    pub solver: EvolutionSolver,
}

/// A list of values or an evenly spaced range.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
enum Axis {
    Values(Vec<f64>),
    #[serde(rename_all = "camelCase")]
    Range {
        start: f64,
        stop: f64,
        count: usize,
    },
}

impl Axis {
    fn values(&self) -> Vec<f64> {
        match *self {
            Axis::Values(ref v) => v.clone(),
            Axis::Range { start, stop, count } => match count {
                0 => Vec::new(),
                1 => vec![start],
                _ => (0..count)
                    .map(|i| start + (stop - start) * i as f64 / (count - 1) as f64)
                    .collect(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTable {
    #[serde(rename = "xA")]
    x_a: f64,
    #[serde(rename = "tA")]
    t_a: f64,
    #[serde(rename = "xB")]
    x_b: Axis,
    #[serde(rename = "tB")]
    t_b: Axis,
}

/// Grid of final points for `table`, all starting from `(xA, tA)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TableSpec {
    pub x_a: f64,
    pub t_a: f64,
    pub x_b: Vec<f64>,
    pub t_b: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLagrangian {
    a: TimeCoefficient,
    #[serde(default = "TimeCoefficient::zero")]
    b: TimeCoefficient,
    #[serde(default = "TimeCoefficient::zero")]
    c: TimeCoefficient,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model: Model,
    /// Carries ħ.
    pub lagrangian: QuadraticLagrangian,
    pub boundary: Option<BoundaryData>,
    pub solver: SolverOptions,
    pub slices: Vec<usize>,
    pub steps: usize,
    pub grid: GridSpec,
    pub packet: PacketSpec,
    pub evolution: Option<EvolutionSpec>,
    pub table: Option<TableSpec>,
    pub format: Option<Format>,
}

const FIELDS: [&str; 13] = [
    "preset",
    "lagrangian",
    "hbar",
    "boundary",
    "method",
    "tol",
    "slices",
    "steps",
    "grid",
    "packet",
    "evolution",
    "table",
    "format",
];

fn invalid(field: &str, message: impl Into<String>) -> CliError {
    CliError::Validation {
        field: field.to_string(),
        message: message.into(),
    }
}

fn section<T: DeserializeOwned>(
    obj: &Map<String, Value>,
    field: &str,
) -> Result<Option<T>, CliError> {
    match obj.get(field) {
        None | Some(Value::Null) => Ok(None),
        Some(v) => serde_json::from_value(v.clone())
            .map(Some)
            .map_err(|e| invalid(field, e.to_string())),
    }
}

fn core(field: &str, e: qhj::Error) -> CliError {
    invalid(field, e.to_string())
}

fn parse_preset(value: &Value) -> Result<Preset, CliError> {
    let value = match value {
        Value::String(name) => {
            let mut obj = Map::new();
            obj.insert("kind".into(), Value::String(name.clone()));
            Value::Object(obj)
        }
        other => other.clone(),
    };
    serde_json::from_value(value).map_err(|e| invalid("preset", e.to_string()))
}

fn positive(field: &str, value: f64) -> Result<f64, CliError> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(invalid(
            field,
            format!("must be positive and finite, got {value}"),
        ))
    }
}

/// Parse and validate a JSON configuration document.
pub fn parse_config(text: &str) -> Result<RunConfig, CliError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
    let Value::Object(obj) = doc else {
        return Err(CliError::Parse(
            "configuration must be a JSON object".into(),
        ));
    };
    if let Some(unknown) = obj.keys().find(|k| !FIELDS.contains(&k.as_str())) {
        return Err(invalid(unknown, "unknown field"));
    }

    let hbar = match section::<f64>(&obj, "hbar")? {
        Some(h) => positive("hbar", h)?,
        None => 1.0,
    };
    let present = |k: &str| obj.get(k).filter(|v| !v.is_null());
    let (model, lagrangian) = match (present("preset"), present("lagrangian")) {
        (Some(p), None) => {
            let preset = parse_preset(p)?;
            let l = preset
                .lagrangian()
                .and_then(|l| l.with_hbar(hbar))
                .map_err(|e| core("preset", e))?;
            (Model::Preset(preset), l)
        }
        (None, Some(_)) => {
            let raw: RawLagrangian = section(&obj, "lagrangian")?.expect("present");
            let l = QuadraticLagrangian::new(raw.a, raw.b, raw.c, hbar)
                .map_err(|e| core("lagrangian", e))?;
            (Model::Explicit, l)
        }
        (Some(_), Some(_)) => {
            return Err(invalid(
                "preset",
                "give exactly one of `preset` or `lagrangian`, not both",
            ))
        }
        (None, None) => {
            return Err(invalid(
                "preset",
                "one of `preset` or `lagrangian` is required",
            ))
        }
    };

    let boundary = match section::<BoundaryData>(&obj, "boundary")? {
        Some(bd) => {
            bd.validate().map_err(|e| core("boundary", e))?;
            lagrangian.mass(bd.t_a).map_err(|e| core("lagrangian", e))?;
            Some(bd)
        }
        None => None,
    };

    let mut solver = SolverOptions::default();
    if let Some(method) = section::<Method>(&obj, "method")? {
        solver.method = method;
    }
    if let Some(tol) = section::<f64>(&obj, "tol")? {
        let tol = positive("tol", tol)?;
        solver.ode_tol = tol;
        solver.quad_tol = tol;
    }

    let slices = section::<Vec<usize>>(&obj, "slices")?.unwrap_or_else(|| DEFAULT_SLICES.to_vec());
    let steps = section::<usize>(&obj, "steps")?.unwrap_or(DEFAULT_STEPS);
    let grid = section::<GridSpec>(&obj, "grid")?.unwrap_or_default();
    let packet = section::<PacketSpec>(&obj, "packet")?.unwrap_or_default();
    let evolution = section::<EvolutionSpec>(&obj, "evolution")?;
    let table = section::<RawTable>(&obj, "table")?.map(|t| TableSpec {
        x_a: t.x_a,
        t_a: t.t_a,
        x_b: t.x_b.values(),
        t_b: t.t_b.values(),
    });
    let format = section::<Format>(&obj, "format")?;

    let cfg = RunConfig {
        model,
        lagrangian,
        boundary,
        solver,
        slices,
        steps,
        grid,
        packet,
        evolution,
        table,
        format,
    };
    cfg.validate()?;
    Ok(cfg)
}

impl RunConfig {
    /// Invariants that command-line overrides can also break.
    pub fn validate(&self) -> Result<(), CliError> {
        positive("tol", self.solver.ode_tol)?;
        positive("tol", self.solver.quad_tol)?;
        if self.slices.is_empty() || self.slices.contains(&0) {
            return Err(invalid(
                "slices",
                "slice counts must be a non-empty list of positive integers",
            ));
        }
        if self.steps == 0 {
            return Err(invalid("steps", "must be at least 1"));
        }
        if self.grid.n < MIN_GRID {
            return Err(invalid(
                "grid",
                format!("n must be at least {MIN_GRID}, got {}", self.grid.n),
            ));
        }
        if !(self.grid.x_max > self.grid.x_min
            && self.grid.x_min.is_finite()
            && self.grid.x_max.is_finite())
        {
            return Err(invalid("grid", "xMin must be smaller than xMax"));
        }
        positive("packet", self.packet.sigma0)?;
        if let Some(ev) = &self.evolution {
            if !(ev.t_b > ev.t_a && ev.t_a.is_finite() && ev.t_b.is_finite()) {
                return Err(invalid(
                    "evolution",
                    format!("tB = {} must exceed tA = {}", ev.t_b, ev.t_a),
                ));
            }
        }
        if let Some(t) = &self.table {
            if t.x_b.is_empty() || t.t_b.is_empty() {
                return Err(invalid(
                    "table",
                    "xB and tB must each have at least one value",
                ));
            }
            if let Some(bad) = t.t_b.iter().find(|&&tb| !(tb > t.t_a)) {
                return Err(invalid(
                    "table",
                    format!("tB = {bad} must exceed tA = {}", t.t_a),
                ));
            }
        }
        Ok(())
    }

    pub fn hbar(&self) -> f64 {
        self.lagrangian.hbar
    }

    pub fn require_boundary(&self) -> Result<BoundaryData, CliError> {
        self.boundary
            .ok_or_else(|| invalid("boundary", "this command needs a `boundary` section"))
    }

    /// `--tol` override.
    pub fn set_tolerance(&mut self, tol: f64) {
        self.solver.ode_tol = tol;
        self.solver.quad_tol = tol;
    }

    /// `--slices` override: doublings from 8 up to and including `max`.
    pub fn set_max_slices(&mut self, max: usize) {
        let mut counts = Vec::new();
        let mut n = 8.min(max);
        while n < max {
            counts.push(n);
            n *= 2;
        }
        counts.push(max);
        self.slices = counts;
    }
}
