use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::json;
use weakval_core::document::ScenarioDocument;
use weakval_core::scenarios::hardy::{
    build_hardy, hardy_factual_probabilities, hardy_table, HardyCoefficients, HardyTable,
};
use weakval_core::scenarios::spin::{build_spin, spin_table, SpinBasis, SpinScenarioParams, SpinTable};
use weakval_core::scenarios::Scenario;
use weakval_core::strange::{default_resolution, ORACLE_MAX_DIMENSION};
use weakval_core::suite::run_checks;
use weakval_core::{
    classify_strangeness, grid_oracle_extremal, solve_optimal_postselection, spectral_decomposition, Objective,
    WeakError,
};

use crate::render::{self, Format, Grid};

/// Largest amount by which the solver may trail the grid oracle.
const ORACLE_SLACK: f64 = 1e-6;

/// A usage or validation failure (exit code 2).
#[derive(Debug)]
pub struct UsageError(String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<WeakError> for UsageError {
    fn from(e: WeakError) -> Self {
        UsageError(e.to_string())
    }
}

pub struct Outcome {
    pub stdout: String,
    pub code: u8,
}

pub struct ScenarioArgs {
    pub name: String,
    pub table: Option<String>,
    pub format: Format,
    pub export: Option<PathBuf>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub split: bool,
}

const SCENARIOS: [&str; 2] = ["hardy", "spin"];
const FACTUAL: &str = "factual";

fn unknown(kind: &str, name: &str, valid: &[&str]) -> UsageError {
    UsageError(format!("unknown {kind} {name:?}; valid variants: {}", valid.join(", ")))
}

fn render_grid(grid: &Grid, json: serde_json::Value, format: Format) -> String {
    match format {
        Format::Text => grid.text(),
        Format::Csv => grid.csv(),
        Format::Json => render::json_text(&json),
    }
}

fn spin_params(args: &ScenarioArgs) -> Result<SpinScenarioParams, UsageError> {
    match (args.alpha, args.beta) {
        (None, None) => Ok(SpinScenarioParams::default()),
        (Some(a), Some(b)) => Ok(SpinScenarioParams::new(a, b)?),
        _ => Err(UsageError("--alpha and --beta must be given together".into())),
    }
}

pub fn scenario(args: &ScenarioArgs) -> Result<Outcome, UsageError> {
    let (stdout, scenario) = match args.name.as_str() {
        "hardy" => {
            if args.alpha.is_some() || args.beta.is_some() {
                return Err(UsageError("--alpha/--beta apply to the spin scenario only".into()));
            }
            let mut names: Vec<&str> = HardyTable::ALL.iter().map(|(n, _)| *n).collect();
            names.push(FACTUAL);
            let variant = args.table.as_deref().unwrap_or(names[0]);
            let text = if variant == FACTUAL {
                let f = hardy_factual_probabilities()?;
                render_grid(&render::factual_grid(&f), render::factual_json(&f), args.format)
            } else {
                let (_, table) = HardyTable::ALL
                    .iter()
                    .find(|(n, _)| *n == variant)
                    .ok_or_else(|| unknown("table variant", variant, &names))?;
                let t = hardy_table(*table)?;
                render_grid(&render::table_grid(&t, args.split), render::table_json(&t), args.format)
            };
            (text, build_hardy(&HardyCoefficients::standard())?)
        }
        "spin" => {
            let names: Vec<&str> = SpinTable::ALL.iter().map(|(n, _)| *n).collect();
            let variant = args.table.as_deref().unwrap_or(names[0]);
            let (_, table) = SpinTable::ALL
                .iter()
                .find(|(n, _)| *n == variant)
                .ok_or_else(|| unknown("table variant", variant, &names))?;
            let params = spin_params(args)?;
            let t = spin_table(*table, params)?;
            let scenario = match table {
                SpinTable::PauliY | SpinTable::Composite => build_spin(SpinScenarioParams::plus_x(), SpinBasis::YBasis)?,
                SpinTable::Pauli | SpinTable::Projectors => build_spin(params, SpinBasis::Computational)?,
            };
            let text = render_grid(&render::table_grid(&t, args.split), render::table_json(&t), args.format);
            (text, scenario)
        }
        other => return Err(unknown("scenario", other, &SCENARIOS)),
    };
    if let Some(path) = &args.export {
        export(&scenario, path)?;
    }
    Ok(Outcome { stdout, code: 0 })
}

fn export(scenario: &Scenario, path: &Path) -> Result<(), UsageError> {
    let doc = ScenarioDocument::from_scenario(scenario);
    fs::write(path, doc.to_json() + "\n").map_err(|e| UsageError(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Scenario, UsageError> {
    let text = fs::read_to_string(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    Ok(ScenarioDocument::from_json(&text)?.to_scenario()?)
}

fn residual(r: Option<f64>) -> String {
    r.map(|v| format!("{v:.3e}")).unwrap_or_else(|| "-".into())
}

pub fn check(path: &Path, format: Format) -> Result<Outcome, UsageError> {
    let scenario = load(path)?;
    let report = run_checks(&scenario);
    let status = |ok: bool| if ok { "pass" } else { "FAIL" };
    let stdout = match format {
        Format::Json => render::json_text(&json!({
            "passed": report.passed(),
            "max_residual": report.max_residual(),
            "tolerance": report.tolerance,
            "checks": report.outcomes,
        })),
        Format::Text | Format::Csv => {
            let rows = report
                .outcomes
                .iter()
                .map(|o| {
                    let mut detail = Vec::new();
                    if !o.skipped.is_empty() {
                        detail.push(format!("skipped {}", o.skipped.join(" ")));
                    }
                    if let Some(e) = &o.error {
                        detail.push(e.clone());
                    }
                    Some(vec![
                        o.subject.clone(),
                        residual(o.residual),
                        status(o.passed).to_string(),
                        detail.join("; "),
                    ])
                })
                .collect();
            let grid = Grid {
                title: format!("Checks for {}", path.display()),
                header: ["check", "residual", "status", "detail"].map(String::from).to_vec(),
                rows,
                notes: vec![format!(
                    "overall: {} (max residual {}, tolerance {})",
                    status(report.passed()),
                    residual(Some(report.max_residual())),
                    render::real(report.tolerance)
                )],
            };
            if format == Format::Csv {
                grid.csv()
            } else {
                grid.text()
            }
        }
    };
    Ok(Outcome {
        stdout,
        code: if report.passed() { 0 } else { 1 },
    })
}

pub fn optimize(
    path: &Path,
    observable: &str,
    xi: f64,
    objective: Objective,
    resolution: Option<usize>,
    format: Format,
) -> Result<Outcome, UsageError> {
    let scenario = load(path)?;
    let a = scenario.observable(observable).map_err(|_| {
        let names: Vec<&str> = scenario.observables.keys().map(String::as_str).collect();
        unknown("observable", observable, &names)
    })?;
    let solved = solve_optimal_postselection(&scenario.pre_state, a, xi, objective)?;
    let spectrum = spectral_decomposition(a)?;
    let report = classify_strangeness(solved.weak_value, &spectrum);

    let oracle = if scenario.dimension() <= ORACLE_MAX_DIMENSION {
        let k = resolution.unwrap_or_else(|| default_resolution(scenario.dimension()));
        let o = grid_oracle_extremal(&scenario.pre_state, a, xi, k, objective)?;
        Some((k, o.value))
    } else {
        None
    };
    // positive when the solver is worse than the oracle
    let shortfall = oracle.map(|(_, v)| match objective {
        Objective::Minimize => solved.weak_value - v,
        Objective::Maximize => v - solved.weak_value,
    });
    let ok = solved.converged && shortfall.is_none_or(|d| d <= ORACLE_SLACK);

    let objective_name = match objective {
        Objective::Minimize => "minimize",
        Objective::Maximize => "maximize",
    };
    let phi: Vec<(String, String)> = scenario
        .labels
        .as_slice()
        .iter()
        .zip(solved.phi.amplitudes())
        .map(|(l, z)| (l.clone(), render::complex(*z)))
        .collect();

    let stdout = match format {
        Format::Json => render::json_text(&json!({
            "observable": observable,
            "objective": objective_name,
            "xi": xi,
            "weak_value": solved.weak_value,
            "lambda": solved.lambda,
            "mu": solved.mu,
            "stationarity_residual": solved.stationarity_residual,
            "iterations": solved.iterations,
            "converged": solved.converged,
            "phi": phi.iter().map(|(l, v)| json!({"label": l, "amplitude": v})).collect::<Vec<_>>(),
            "oracle": oracle.map(|(k, v)| json!({"resolution": k, "value": v, "shortfall": shortfall})),
            "classification": report,
        })),
        Format::Text | Format::Csv => {
            let mut rows = vec![
                ("observable", observable.to_string()),
                ("objective", objective_name.to_string()),
                ("xi", render::real(xi)),
                ("weak_value", render::real(solved.weak_value)),
                ("lambda", render::real(solved.lambda)),
                ("mu", render::real(solved.mu)),
                ("stationarity_residual", residual(Some(solved.stationarity_residual))),
                ("iterations", solved.iterations.to_string()),
                ("converged", solved.converged.to_string()),
            ];
            match (oracle, shortfall) {
                (Some((k, v)), Some(d)) => {
                    rows.push(("oracle_resolution", k.to_string()));
                    rows.push(("oracle_value", render::real(v)));
                    rows.push(("oracle_shortfall", residual(Some(d))));
                }
                _ => rows.push(("oracle_value", "skipped (dimension above 8)".into())),
            }
            rows.push(("classification", report.classification.as_str().to_string()));
            rows.push((
                "spectrum",
                format!("[{}, {}]", render::real(report.spectrum_min), render::real(report.spectrum_max)),
            ));
            let mut grid_rows: Vec<Option<Vec<String>>> =
                rows.into_iter().map(|(k, v)| Some(vec![k.to_string(), v])).collect();
            grid_rows.extend(phi.into_iter().map(|(l, v)| Some(vec![format!("phi[{l}]"), v])));
            let grid = Grid {
                title: format!("Optimal post-selection for {observable}"),
                header: vec!["quantity".into(), "value".into()],
                rows: grid_rows,
                notes: if ok { Vec::new() } else { vec!["status: FAIL".into()] },
            };
            if format == Format::Csv {
                grid.csv()
            } else {
                grid.text()
            }
        }
    };
    Ok(Outcome {
        stdout,
        code: if ok { 0 } else { 1 },
    })
}
