use rayon::prelude::*;
use serde_json::{json, Map, Value};

use qhj::oracles::{
    composition_check, crank_nicolson_evolve, extrapolated_kernel, kernel_evolve, residual_report,
    richardson, short_time_norm_check, slice_convergence, GridWavefunction, QuantumActionField,
    ResidualReport,
};
use qhj::{propagator_evaluate, vvpm_propagator, Complex64, Kernel, Method};

use crate::config::{EvolutionSolver, Model, RunConfig};
use crate::error::CliError;
use crate::table::{emit_table, Cell, Format, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Propagate,
    Verify,
    SliceConverge,
    Evolve,
    Table,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Propagate => "propagate",
            Command::Verify => "verify",
            Command::SliceConverge => "slice-converge",
            Command::Evolve => "evolve",
            Command::Table => "table",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    VerificationFailed,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Success => 0,
            Status::VerificationFailed => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub document: String,
    pub status: Status,
}

// declared tolerances of `verify`
pub const VVPM_TOL: f64 = 1e-10;
pub const SLICING_TOL: f64 = 1e-5;
pub const QHJE_RMS_TOL: f64 = 1e-3;
pub const QHJE_ORDER_TOL: f64 = 0.2;
pub const SHORT_TIME_TOL: f64 = 1e-3;
pub const COMPOSITION_TOL: f64 = 1e-9;

const QHJE_STEPS: [f64; 2] = [1e-2, 5e-3];
const SHORT_TIME_EPS: f64 = 1e-4;

fn metadata(cfg: &RunConfig, command: Command) -> Value {
    let preset = match &cfg.model {
        Model::Preset(p) => serde_json::to_value(p).expect("presets serialize"),
        Model::Explicit => Value::Null,
    };
    let method = match cfg.solver.method {
        Method::Auto => "auto",
        Method::Numeric => "numeric",
    };
    json!({
        "command": command.name(),
        "hbar": cfg.hbar(),
        "preset": preset,
        "lagrangian": cfg.lagrangian,
        "boundary": cfg.boundary,
        "solver": {
            "odeTol": cfg.solver.ode_tol,
            "quadTol": cfg.solver.quad_tol,
            "causticTol": cfg.solver.caustic_tol,
            "method": method,
        },
    })
}

fn render(
    format: Format,
    table: &Table,
    cfg: &RunConfig,
    command: Command,
    extra: Map<String, Value>,
) -> String {
    match format {
        Format::Csv => emit_table(table, Format::Csv),
        Format::Json => {
            let mut doc = Map::new();
            doc.insert("metadata".into(), metadata(cfg, command));
            doc.extend(extra);
            doc.insert("records".into(), table.to_json());
            let mut out =
                serde_json::to_string_pretty(&Value::Object(doc)).expect("documents serialize");
            out.push('\n');
            out
        }
    }
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

pub fn run_command(cfg: &RunConfig, command: Command, format: Format) -> Result<Outcome, CliError> {
    cfg.validate()?;
    let mut extra = Map::new();
    let mut status = Status::Success;
    let table = match command {
        Command::Propagate => propagate(cfg)?,
        Command::Verify => {
            let (table, report, passed) = verify(cfg)?;
            extra.insert(
                "residualReport".into(),
                json!({
                    "maxAbsResidual": report.max_abs_residual,
                    "rmsResidual": report.rms_residual,
                    "gridSteps": [report.grid_steps.0, report.grid_steps.1],
                    "points": report.points,
                }),
            );
            extra.insert("status".into(), json!(if passed { "pass" } else { "fail" }));
            if !passed {
                status = Status::VerificationFailed;
            }
            table
        }
        Command::SliceConverge => {
            let (table, reference, extrapolated) = slice_converge(cfg)?;
            extra.insert(
                "reference".into(),
                json!({"re": reference.re, "im": reference.im}),
            );
            extra.insert(
                "extrapolated".into(),
                json!({
                    "re": extrapolated.re,
                    "im": extrapolated.im,
                    "error": (extrapolated - reference).norm(),
                }),
            );
            table
        }
        Command::Evolve => {
            let (table, psi, solver) = evolve(cfg)?;
            extra.insert("time".into(), json!(psi.time));
            extra.insert("norm".into(), json!(psi.norm()));
            extra.insert("solver".into(), json!(solver));
            extra.insert("grid".into(), json!(cfg.grid));
            extra.insert("packet".into(), json!(cfg.packet));
            if solver == EvolutionSolver::CrankNicolson {
                extra.insert("steps".into(), json!(cfg.steps));
            }
            table
        }
        Command::Table => kernel_table(cfg)?,
    };
    Ok(Outcome {
        document: render(format, &table, cfg, command, extra),
        status,
    })
}

fn propagate(cfg: &RunConfig) -> Result<Table, CliError> {
    let bd = cfg.require_boundary()?;
    let k = propagator_evaluate(&cfg.lagrangian, &bd, &cfg.solver)?;
    let mut table = Table::new(&[
        "re",
        "im",
        "modulus",
        "phase",
        "S_cl",
        "delta_re",
        "delta_im",
        "caustic_index",
    ]);
    table.push(vec![
        k.value.re.into(),
        k.value.im.into(),
        k.modulus().into(),
        k.phase().into(),
        k.classical_action.into(),
        k.delta.re.into(),
        k.delta.im.into(),
        k.caustic_index.into(),
    ]);
    Ok(table)
}

fn verify(cfg: &RunConfig) -> Result<(Table, ResidualReport, bool), CliError> {
    let bd = cfg.require_boundary()?;
    let l = &cfg.lagrangian;
    let opts = &cfg.solver;
    let kernel = Kernel::new(l, bd.t_a, bd.t_b, opts)?;
    let k = kernel.evaluate(bd.x_b, bd.x_a).value;

    let vvpm = vvpm_propagator(&kernel.form, bd.x_b, bd.x_a, l.hbar, kernel.caustic_index)?;
    let sliced = extrapolated_kernel(l, &bd, 16, 6)?;

    let field = QuantumActionField {
        lagrangian: l,
        x_a: bd.x_a,
        t_a: bd.t_a,
        opts: *opts,
    };
    let points: Vec<(f64, f64)> = [-1.0, -0.5, 0.0, 0.5, 1.0]
        .iter()
        .map(|d| (bd.x_b + d, bd.t_b))
        .collect();
    let coarse = residual_report(l, &field, &points, QHJE_STEPS[0], QHJE_STEPS[0])?;
    let fine = residual_report(l, &field, &points, QHJE_STEPS[1], QHJE_STEPS[1])?;
    let ratio = coarse.rms_residual / fine.rms_residual;

    let norm = short_time_norm_check(l, bd.x_a, bd.t_a, SHORT_TIME_EPS, opts)?;
    let t_m = 0.5 * (bd.t_a + bd.t_b);
    let composed = composition_check(l, bd.x_a, bd.x_b, bd.t_a, t_m, bd.t_b, opts)?;

    let checks = [
        ("vvpm_relative_gap", rel(vvpm, k), VVPM_TOL),
        ("slicing_relative_gap", rel(sliced, k), SLICING_TOL),
        ("qhje_rms_residual", fine.rms_residual, QHJE_RMS_TOL),
        (
            "qhje_order_deviation",
            (ratio / 4.0 - 1.0).abs(),
            QHJE_ORDER_TOL,
        ),
        (
            "short_time_norm_deviation",
            (norm - 1.0).norm(),
            SHORT_TIME_TOL,
        ),
        (
            "composition_relative_gap",
            rel(composed, k),
            COMPOSITION_TOL,
        ),
    ];
    let mut table = Table::new(&["check", "value", "tolerance", "status"]);
    let mut passed = true;
    for (name, value, tol) in checks {
        let ok = value <= tol;
        passed &= ok;
        table.push(vec![
            name.into(),
            value.into(),
            tol.into(),
            (if ok { "pass" } else { "fail" }).into(),
        ]);
    }
    Ok((table, fine, passed))
}

fn slice_converge(cfg: &RunConfig) -> Result<(Table, Complex64, Complex64), CliError> {
    let bd = cfg.require_boundary()?;
    let reference = propagator_evaluate(&cfg.lagrangian, &bd, &cfg.solver)?.value;
    let rows = slice_convergence(&cfg.lagrangian, &bd, &cfg.slices, reference)?;
    let mut table = Table::new(&["N", "re", "im", "error"]);
    for r in &rows {
        table.push(vec![
            r.slices.into(),
            r.value.re.into(),
            r.value.im.into(),
            r.error.into(),
        ]);
    }
    let values: Vec<Complex64> = rows.iter().map(|r| r.value).collect();
    let extrapolated = richardson(&values).expect("slice list is not empty");
    Ok((table, reference, extrapolated))
}

fn evolve(cfg: &RunConfig) -> Result<(Table, GridWavefunction, EvolutionSolver), CliError> {
    let ev = cfg.evolution.ok_or_else(|| CliError::Validation {
        field: "evolution".into(),
        message: "this command needs an `evolution` section with tB".into(),
    })?;
    let psi0 = GridWavefunction::gaussian_packet(
        cfg.grid.x_min,
        cfg.grid.x_max,
        cfg.grid.n,
        cfg.packet.x0,
        cfg.packet.p0,
        cfg.packet.sigma0,
        cfg.hbar(),
        ev.t_a,
    )?;
    let psi = match ev.solver {
        EvolutionSolver::Kernel => kernel_evolve(&cfg.lagrangian, &psi0, ev.t_b, &cfg.solver)?,
        EvolutionSolver::CrankNicolson => {
            crank_nicolson_evolve(&cfg.lagrangian, &psi0, ev.t_b, cfg.steps)?
        }
    };
    let mut table = Table::new(&["x", "re", "im"]);
    for (i, z) in psi.samples.iter().enumerate() {
        table.push(vec![psi.x(i).into(), z.re.into(), z.im.into()]);
    }
    Ok((table, psi, ev.solver))
}

fn kernel_table(cfg: &RunConfig) -> Result<Table, CliError> {
    let spec = cfg.table.as_ref().ok_or_else(|| CliError::Validation {
        field: "table".into(),
        message: "this command needs a `table` section".into(),
    })?;
    let blocks = spec
        .t_b
        .par_iter()
        .map(|&t_b| {
            let kernel = Kernel::new(&cfg.lagrangian, spec.t_a, t_b, &cfg.solver)?;
            Ok(spec
                .x_b
                .iter()
                .map(|&x_b| {
                    let k = kernel.evaluate(x_b, spec.x_a);
                    vec![
                        x_b.into(),
                        t_b.into(),
                        k.value.re.into(),
                        k.value.im.into(),
                        k.modulus().into(),
                        k.phase().into(),
                        Cell::from(k.caustic_index),
                    ]
                })
                .collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>, qhj::Error>>()?;
    let mut table = Table::new(&["xB", "tB", "re", "im", "modulus", "phase", "caustic_index"]);
    for row in blocks.into_iter().flatten() {
        table.push(row);
    }
    Ok(table)
}
