//! Command-line driver: config ingestion, presets, solution export,
//! convergence studies and cross-method comparisons.
//!
//! Exit codes: 0 success, 2 validation/configuration problem, 3 numerical
//! or runtime failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use lamina::assembly::{Grid, SolutionField, Solver, SolverSettings};
use lamina::classical::ClassicalSolution;
use lamina::config::Config;
use lamina::model::{PostScaling, ProblemSpec, ValidatedProblem};
use lamina::presets::{preset, PostColumn};

mod manifest;
mod output;

use manifest::{CompareSection, ConvergeSection, GridSection, Manifest};

#[derive(Parser)]
#[command(
    name = "lamina",
    about = "Semi-analytical multilayer diffusion solver",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the semi-analytical solution and write a CSV field.
    Solve(SolveArgs),
    /// Error-vs-N study against a classical or finite-difference reference.
    Converge(ConvergeArgs),
    /// Cross-method agreement report (semi-analytical vs finite differences).
    Compare(CompareArgs),
    /// Write a preset out as an editable config file.
    PresetDump(PresetDumpArgs),
}

#[derive(Args)]
struct ProblemArgs {
    /// Problem config (TOML); a previously emitted manifest also works.
    #[arg(long, value_name = "PATH", conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Built-in preset name.
    #[arg(long, value_name = "NAME")]
    preset: Option<String>,
    /// Eigenvalues per layer N (overrides config/preset).
    #[arg(long, value_name = "N")]
    eigenvalues: Option<usize>,
    /// Inversion quadrature order Np (even).
    #[arg(long = "inversion-order", value_name = "NP")]
    inversion_order: Option<usize>,
    /// Output times, comma separated.
    #[arg(long, value_name = "LIST", value_delimiter = ',')]
    times: Option<Vec<f64>>,
    /// Evaluation points per layer.
    #[arg(long = "points-per-layer", value_name = "K")]
    points_per_layer: Option<usize>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Output CSV path; a manifest is written next to it.
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
}

#[derive(Args)]
struct ConvergeArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Eigenvalue counts for the study, comma separated.
    #[arg(long, value_name = "LIST", value_delimiter = ',', default_values_t = vec![16usize, 32, 64, 128, 256])]
    n_list: Vec<usize>,
    /// Reference solution: "classical" (time-independent BCs, m <= 6) or "fdm".
    #[arg(long, value_name = "REF", default_value = "classical")]
    reference: String,
    /// Eigenpairs used by the classical reference.
    #[arg(long, value_name = "COUNT", default_value_t = 60)]
    classical_terms: usize,
    /// Cells per layer for the fdm reference.
    #[arg(long, value_name = "K", default_value_t = 1000)]
    fdm_divisions: usize,
    /// Time step for the fdm reference (default: smallest output time / 200).
    #[arg(long, value_name = "DT")]
    fdm_dt: Option<f64>,
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Cells per layer for the fdm run (the reference refines this 2x).
    #[arg(long, value_name = "K", default_value_t = 1000)]
    fdm_divisions: usize,
    /// Time step for the fdm run (default: smallest output time / 200).
    #[arg(long, value_name = "DT")]
    fdm_dt: Option<f64>,
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
}

#[derive(Args)]
struct PresetDumpArgs {
    /// Preset to dump.
    #[arg(long, value_name = "NAME")]
    preset: String,
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
}

/// Everything resolved from flags.
struct Resolved {
    validated: ValidatedProblem,
    spec: ProblemSpec,
    settings: SolverSettings,
    times: Vec<f64>,
    points_per_layer: usize,
    preset_name: Option<String>,
    post: PostColumn,
}

#[derive(Debug)]
enum CliError {
    Validation(String),
    Runtime(String),
}

impl From<lamina::Error> for CliError {
    fn from(e: lamina::Error) -> Self {
        match e {
            lamina::Error::Invalid(_)
            | lamina::Error::Config(_)
            | lamina::Error::Domain(_)
            | lamina::Error::Unsupported(_) => CliError::Validation(e.to_string()),
            lamina::Error::Numerical(_) | lamina::Error::NonFinite(_) => {
                CliError::Runtime(e.to_string())
            }
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(format!("i/o error: {e}"))
    }
}

fn resolve(args: &ProblemArgs, default_points: usize) -> Result<Resolved, CliError> {
    let (spec, mut settings, preset_times, preset_name, post) = match (&args.config, &args.preset)
    {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)?;
            let cfg = manifest::config_from_text(&text)?;
            let (spec, settings) = cfg.to_problem()?;
            (spec, settings, None, None, PostColumn::None)
        }
        (None, Some(name)) => {
            let p = preset(name)?;
            (
                p.spec,
                SolverSettings::default(),
                Some(p.times),
                Some(name.clone()),
                p.post,
            )
        }
        (None, None) => {
            return Err(CliError::Validation(
                "one of --config or --preset is required".into(),
            ))
        }
        (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
    };
    if let Some(n) = args.eigenvalues {
        settings.n_modes = n;
    }
    if let Some(np) = args.inversion_order {
        settings.inversion_order = np;
    }
    let times = match (&args.times, preset_times) {
        (Some(t), _) => t.clone(),
        (None, Some(t)) => t,
        (None, None) => {
            return Err(CliError::Validation(
                "--times is required when using --config".into(),
            ))
        }
    };
    if times.is_empty() {
        return Err(CliError::Validation("at least one output time".into()));
    }
    let validated = spec.validate()?;
    Ok(Resolved {
        validated,
        spec,
        settings,
        times,
        points_per_layer: args.points_per_layer.unwrap_or(default_points),
        preset_name,
        post,
    })
}

fn run_solve(args: &SolveArgs) -> Result<(), CliError> {
    let r = resolve(&args.problem, 101)?;
    let solver = Solver::new(r.validated.clone(), r.settings)?;
    let grid = Grid::uniform(&r.validated, r.points_per_layer, &r.times);
    let field = solver.evaluate(&grid)?;
    output::write_field_csv(&args.out, &field, &r.post)?;
    let manifest = Manifest {
        subcommand: "solve".into(),
        preset: r.preset_name.clone(),
        problem: Config::from_spec(&r.spec, r.settings)?,
        grid: GridSection {
            times: r.times.clone(),
            points_per_layer: r.points_per_layer,
        },
        converge: None,
        compare: None,
        out: args.out.display().to_string(),
    };
    manifest::write(&args.out, &manifest)?;
    println!("wrote {}", args.out.display());
    Ok(())
}

fn fdm_dt_default(times: &[f64], explicit: Option<f64>, divisor: f64) -> Result<f64, CliError> {
    if let Some(dt) = explicit {
        return Ok(dt);
    }
    let t_min = times
        .iter()
        .copied()
        .filter(|&t| t > 0.0)
        .fold(f64::INFINITY, f64::min);
    if !t_min.is_finite() {
        return Err(CliError::Validation(
            "need at least one positive output time".into(),
        ));
    }
    Ok(t_min / divisor)
}

/// Shrink the step so every output time is (nearly) an integer multiple.
fn snap_dt(times: &[f64], dt0: f64) -> f64 {
    let mut dt = dt0;
    for _ in 0..4 {
        let mut worst: Option<f64> = None;
        for &t in times {
            if t <= 0.0 {
                continue;
            }
            let steps = t / dt;
            if (steps - steps.round()).abs() > 1e-9 * steps.max(1.0) {
                let candidate = t / steps.ceil();
                worst = Some(match worst {
                    Some(w) => f64::min(w, candidate),
                    None => candidate,
                });
            }
        }
        match worst {
            Some(w) => dt = w,
            None => break,
        }
    }
    dt
}

fn run_converge(args: &ConvergeArgs) -> Result<(), CliError> {
    let r = resolve(&args.problem, 6)?;
    let reference: SolutionField = match args.reference.as_str() {
        "classical" => {
            if !r.validated.constant_boundary_data() {
                return Err(CliError::Validation(
                    "the classical reference requires time-independent boundary data; \
                     use --reference fdm"
                        .into(),
                ));
            }
            let classical = ClassicalSolution::new(r.validated.clone(), args.classical_terms)?;
            let grid = Grid::uniform(&r.validated, r.points_per_layer, &r.times);
            classical.evaluate(&grid)?
        }
        "fdm" => {
            let dt = snap_dt(&r.times, fdm_dt_default(&r.times, args.fdm_dt, 200.0)?);
            let divisions =
                lamina::fdm::uniform_divisions(&r.validated, args.fdm_divisions.max(2));
            let result = lamina::fdm::richardson(&r.validated, &divisions, dt, &r.times)?;
            restrict_to_uniform(&result.extrapolated, &r.validated, r.points_per_layer)?
        }
        other => {
            return Err(CliError::Validation(format!(
                "unknown reference '{other}' (use classical or fdm)"
            )))
        }
    };

    let grid = Grid::uniform(&r.validated, r.points_per_layer, &r.times);
    let mut eps_by_n: Vec<Vec<f64>> = Vec::new();
    for &n in &args.n_list {
        let solver = Solver::new(
            r.validated.clone(),
            SolverSettings {
                n_modes: n,
                inversion_order: r.settings.inversion_order,
            },
        )?;
        let field = solver.evaluate(&grid)?;
        eps_by_n.push(SolutionField::relative_error(&reference, &field)?);
    }
    let mut rows: Vec<(f64, usize, f64, Option<f64>)> = Vec::new();
    for (ti, &t) in r.times.iter().enumerate() {
        for (ni, &n) in args.n_list.iter().enumerate() {
            let slope = if args.n_list.len() >= 2 && ni >= 1 {
                let lo = ni.saturating_sub(2);
                let pts: Vec<(f64, f64)> = (lo..=ni)
                    .filter(|&k| eps_by_n[k][ti] > 0.0)
                    .map(|k| ((args.n_list[k] as f64).ln(), eps_by_n[k][ti].ln()))
                    .collect();
                fit_negative_slope(&pts)
            } else {
                None
            };
            rows.push((t, n, eps_by_n[ni][ti], slope));
        }
    }
    output::write_converge_csv(&args.out, &rows, args.n_list.len() >= 2)?;
    let manifest = Manifest {
        subcommand: "converge".into(),
        preset: r.preset_name.clone(),
        problem: Config::from_spec(&r.spec, r.settings)?,
        grid: GridSection {
            times: r.times.clone(),
            points_per_layer: r.points_per_layer,
        },
        converge: Some(ConvergeSection {
            n_list: args.n_list.clone(),
            reference: args.reference.clone(),
            classical_terms: args.classical_terms,
            fdm_divisions: args.fdm_divisions,
        }),
        compare: None,
        out: args.out.display().to_string(),
    };
    manifest::write(&args.out, &manifest)?;
    println!("wrote {}", args.out.display());
    Ok(())
}

/// Least-squares slope of -y against x (the decay exponent p).
fn fit_negative_slope(pts: &[(f64, f64)]) -> Option<f64> {
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    if denom == 0.0 {
        return None;
    }
    Some(-(n * sxy - sx * sy) / denom)
}

/// Restrict a field on FDM nodes to a `points`-per-layer uniform grid (the
/// display nodes must coincide with FDM nodes).
fn restrict_to_uniform(
    field: &SolutionField,
    problem: &ValidatedProblem,
    points: usize,
) -> Result<SolutionField, CliError> {
    let target = Grid::uniform(problem, points, &field.times);
    let mut values = Vec::with_capacity(field.values.len());
    for tv in &field.values {
        let mut per_t = Vec::with_capacity(tv.len());
        for (i, layer_vals) in tv.iter().enumerate() {
            let mut vals = Vec::with_capacity(target.xs[i].len());
            for &x in &target.xs[i] {
                let k = field.xs[i]
                    .iter()
                    .enumerate()
                    .min_by(|a, b| (a.1 - x).abs().total_cmp(&(b.1 - x).abs()))
                    .map(|(k, _)| k)
                    .unwrap();
                if (field.xs[i][k] - x).abs() > 1e-9 * problem.layer_width(i) {
                    return Err(CliError::Validation(format!(
                        "display grid point {x} is not an fdm node; choose --fdm-divisions \
                         divisible by (points-per-layer - 1)"
                    )));
                }
                vals.push(layer_vals[k]);
            }
            per_t.push(vals);
        }
        values.push(per_t);
    }
    Ok(SolutionField {
        times: field.times.clone(),
        xs: target.xs,
        values,
        interface_g: field.interface_g.clone(),
        n_modes: field.n_modes,
        inversion_order: field.inversion_order,
    })
}

fn run_compare(args: &CompareArgs) -> Result<(), CliError> {
    let r = resolve(&args.problem, 101)?;
    let solver = Solver::new(r.validated.clone(), r.settings)?;
    let dt = snap_dt(&r.times, fdm_dt_default(&r.times, args.fdm_dt, 200.0)?);
    let divisions = lamina::fdm::uniform_divisions(&r.validated, args.fdm_divisions.max(2));
    let rich = lamina::fdm::richardson(&r.validated, &divisions, dt, &r.times)?;
    let grid = lamina::fdm::comparison_grid(&r.validated, &divisions, &r.times);
    let semi = solver.evaluate(&grid)?;
    let eps = SolutionField::relative_error(&rich.extrapolated, &semi)?;

    let scaling = match r.post {
        PostColumn::ExpTime { .. } => PostScaling::exp_time(),
        _ => PostScaling::identity(),
    };
    let mut rows = Vec::new();
    for (k, &t) in r.times.iter().enumerate() {
        let tol = f64::max(1e-4, 3.0 * rich.estimates[k]);
        rows.push(output::CompareRow {
            t,
            max_rel_diff: eps[k],
            richardson_estimate: rich.estimates[k],
            tolerance: tol,
            pass: eps[k] < tol,
            mass: output::trapezoid_mass(&semi, k),
        });
    }
    output::write_compare_csv(&args.out, &rows)?;
    let manifest = Manifest {
        subcommand: "compare".into(),
        preset: r.preset_name.clone(),
        problem: Config::from_spec(&r.spec, r.settings)?,
        grid: GridSection {
            times: r.times.clone(),
            points_per_layer: r.points_per_layer,
        },
        converge: None,
        compare: Some(CompareSection {
            fdm_divisions: args.fdm_divisions,
            fdm_dt: dt,
            rescale_rate: scaling.rate(),
        }),
        out: args.out.display().to_string(),
    };
    manifest::write(&args.out, &manifest)?;
    for row in &rows {
        println!(
            "t = {:<10} max rel diff = {:.3e}  tolerance = {:.3e}  {}",
            row.t,
            row.max_rel_diff,
            row.tolerance,
            if row.pass { "PASS" } else { "FAIL" }
        );
    }
    if rows.iter().any(|row| !row.pass) {
        return Err(CliError::Runtime(
            "cross-method agreement outside tolerance".into(),
        ));
    }
    println!("wrote {}", args.out.display());
    Ok(())
}

fn run_preset_dump(args: &PresetDumpArgs) -> Result<(), CliError> {
    let p = preset(&args.preset)?;
    let cfg = Config::from_spec(&p.spec, SolverSettings::default())?;
    let mut text = String::new();
    text.push_str(&format!("# preset: {}\n", p.name));
    text.push_str(&format!("# {}\n", p.description));
    text.push_str(&format!(
        "# suggested times: {}\n\n",
        p.times
            .iter()
            .map(|t| t.to_string())
            .collect::<Vec<_>>()
            .join(",")
    ));
    text.push_str(&cfg.to_toml()?);
    std::fs::write(&args.out, text)?;
    println!("wrote {}", args.out.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve(args) => run_solve(args),
        Command::Converge(args) => run_converge(args),
        Command::Compare(args) => run_compare(args),
        Command::PresetDump(args) => run_preset_dump(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
