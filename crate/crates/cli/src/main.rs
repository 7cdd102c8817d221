//! `steerkit`: build assemblages, solve robustness, certify cooling
//! advantage, sweep the closed-form bounds and simulate the protocol.
//!
//! Exit codes: 0 success, 1 computation failure, 2 input error. Failures
//! print a JSON object on stderr.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use steerkit::assemblage::{
    assemblage_from_state, isotropic_assemblage, Assemblage, Measurements,
};
use steerkit::bounds::{fig3_surface, isotropic_robustness_lb, thresholds, xi_lb_isotropic};
use steerkit::cooling::{average_heat, certified_advantage_with, simulate_protocol, witness_hamiltonians};
use steerkit::linop::DensityOperator;
use steerkit::mub::mub_family;
use steerkit::steering::{robustness_dual_with, robustness_primal_with, SteeringOptions};

#[derive(Parser, Debug)]
#[command(name = "steerkit", version, about = "Steering robustness and certified cooling advantage")]
struct Cli {
    /// Interior-point tolerance.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,
    /// Output file (stdout when absent).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format; `sweep` defaults to csv, everything else to json.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads for sweeps and simulations.
    #[arg(long, global = true, env = "STEERKIT_JOBS")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Complete MUB family in prime dimension.
    Mub {
        #[arg(long)]
        dim: usize,
    },
    /// Build an assemblage file.
    #[command(subcommand)]
    Assemblage(AssemblageCmd),
    /// Steering robustness of an assemblage file.
    Robustness {
        assemblage: PathBuf,
        /// Solve the LHS-model side instead of the witness side.
        #[arg(long)]
        primal: bool,
    },
    /// Certified cooling advantage with witness Hamiltonians H = εF*.
    Advantage {
        assemblage: PathBuf,
        #[command(flatten)]
        task: TaskArgs,
    },
    /// Closed-form bounds over a (d, η) grid, optionally with SDP values.
    Sweep(SweepArgs),
    /// Monte Carlo run of the cooling protocol with the witness task.
    Simulate {
        assemblage: PathBuf,
        #[command(flatten)]
        task: TaskArgs,
        #[arg(long, default_value_t = 1_000_000)]
        shots: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand, Debug)]
enum AssemblageCmd {
    /// Isotropic state measured in the conjugate MUB family.
    Isotropic {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        eta: f64,
    },
    /// `Tr_A[(M_{a|x} ⊗ I) ρ]` from a state file and a measurement file.
    FromState {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        measurements: PathBuf,
    },
}

#[derive(Args, Debug, Clone, Copy)]
struct TaskArgs {
    #[arg(long, default_value_t = 1.0)]
    epsilon: f64,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Dimensions: comma list and/or ranges, e.g. `2,3` or `2-50`.
    #[arg(long)]
    dims: String,
    /// η grid: `start:stop:step` or a comma list.
    #[arg(long)]
    eta: String,
    /// Also solve the robustness SDP and the advantage at every grid point.
    #[arg(long)]
    with_sdp: bool,
    /// Emit the bound-surface table instead of the sweep table.
    #[arg(long, conflicts_with = "with_sdp")]
    surface: bool,
    #[command(flatten)]
    task: TaskArgs,
}

/// Failure with its exit code.
#[derive(Debug)]
struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            kind: "input",
            message: message.into(),
        }
    }
}

impl From<steerkit::Error> for Failure {
    fn from(e: steerkit::Error) -> Self {
        match e {
            steerkit::Error::SolverFailure(_) => Self {
                code: 1,
                kind: "solver",
                message: e.to_string(),
            },
            _ => Self::input(e.to_string()),
        }
    }
}

type CliResult<T> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help / --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            return report(Failure::input(e.render().to_string().trim_end()));
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => report(f),
    }
}

fn report(f: Failure) -> ExitCode {
    let body = json!({
        "schema_version": 1,
        "error": { "kind": f.kind, "message": f.message },
        "exit_code": f.code,
    });
    let _ = writeln!(io::stderr(), "{body}");
    ExitCode::from(f.code)
}

fn run(cli: &Cli) -> CliResult<()> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(Failure::input("--jobs must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| Failure::input(format!("cannot size the worker pool: {e}")))?;
    }
    if !(cli.tol > 0.0 && cli.tol < 1e-2) {
        return Err(Failure::input(format!("--tol {} must lie in (0, 1e-2)", cli.tol)));
    }
    let opts = SteeringOptions {
        tol: cli.tol,
        ..SteeringOptions::default()
    };
    let format = cli.format.unwrap_or(match cli.command {
        Command::Sweep(_) => Format::Csv,
        _ => Format::Json,
    });

    let output = match &cli.command {
        Command::Mub { dim } => {
            let f = mub_family(*dim)?;
            let mut v = serde_json::to_value(&f).expect("family serialises");
            v["schema_version"] = 1.into();
            json_only(format, v)?
        }
        Command::Assemblage(cmd) => json_only(format, build_assemblage(cmd)?.to_json())?,
        Command::Robustness { assemblage, primal } => {
            let a = read_assemblage(assemblage)?;
            let r = if *primal {
                robustness_primal_with(&a, &opts)?
            } else {
                robustness_dual_with(&a, &opts)?
            };
            let mut v = r.to_json();
            v["method"] = if *primal { "primal" } else { "dual" }.into();
            json_only(format, v)?
        }
        Command::Advantage { assemblage, task } => {
            let a = read_assemblage(assemblage)?;
            json_only(format, certified_advantage_with(&a, task.epsilon, task.beta, &opts)?.to_json())?
        }
        Command::Sweep(args) => sweep(args, &opts, format)?,
        Command::Simulate {
            assemblage,
            task,
            shots,
            seed,
        } => simulate(assemblage, *task, *shots, *seed, &opts, format)?,
    };
    write_output(cli.out.as_deref(), &output)
}

fn json_only(format: Format, v: Value) -> CliResult<String> {
    match format {
        Format::Json => Ok(format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))),
        Format::Csv => Err(Failure::input("csv output is only available for sweep and simulate")),
    }
}

fn write_output(path: Option<&Path>, body: &str) -> CliResult<()> {
    let result = match path {
        Some(p) => fs::write(p, body),
        None => io::stdout().write_all(body.as_bytes()),
    };
    result.map_err(|e| Failure {
        code: 1,
        kind: "io",
        message: format!("cannot write output: {e}"),
    })
}

fn read_file(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))
}

fn read_assemblage(path: &Path) -> CliResult<Assemblage> {
    Assemblage::from_json_str(&read_file(path)?)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

/// Bipartite state file.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFile {
    #[serde(default = "schema_v1")]
    schema_version: u32,
    state: DensityOperator,
}

fn schema_v1() -> u32 {
    1
}

fn build_assemblage(cmd: &AssemblageCmd) -> CliResult<Assemblage> {
    match cmd {
        AssemblageCmd::Isotropic { dim, eta } => {
            let f = mub_family(*dim)?;
            Ok(isotropic_assemblage(*dim, *eta, &f)?)
        }
        AssemblageCmd::FromState { state, measurements } => {
            let s: StateFile = serde_json::from_str(&read_file(state)?)
                .map_err(|e| Failure::input(format!("{}: {e}", state.display())))?;
            if s.schema_version != 1 {
                return Err(Failure::input(format!("unsupported schema_version {}", s.schema_version)));
            }
            let m = Measurements::from_json_str(&read_file(measurements)?)
                .map_err(|e| Failure::input(format!("{}: {e}", measurements.display())))?;
            Ok(assemblage_from_state(&s.state, &m)?)
        }
    }
}

fn parse_dims(spec: &str) -> CliResult<Vec<usize>> {
    let bad = || Failure::input(format!("cannot parse dimension list {spec:?}"));
    let mut dims = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((lo, hi)) = part.split_once('-') {
            let lo: usize = lo.trim().parse().map_err(|_| bad())?;
            let hi: usize = hi.trim().parse().map_err(|_| bad())?;
            dims.extend(lo..=hi);
        } else {
            dims.push(part.parse().map_err(|_| bad())?);
        }
    }
    if dims.is_empty() {
        return Err(Failure::input("empty dimension list"));
    }
    if let Some(d) = dims.iter().find(|&&d| d < 2) {
        return Err(Failure::input(format!("dimension {d} is below 2")));
    }
    Ok(dims)
}

fn parse_eta_grid(spec: &str) -> CliResult<Vec<f64>> {
    let bad = || Failure::input(format!("cannot parse eta grid {spec:?}"));
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad());
    let etas = if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let (start, stop, step) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
        if !(step > 0.0) || stop < start {
            return Err(Failure::input(format!("eta grid {spec:?} is empty")));
        }
        let steps = ((stop - start) / step + 1e-9).floor() as usize;
        // Exact endpoints when the step divides the interval.
        let exact = ((stop - start) / step - steps as f64).abs() < 1e-9;
        (0..=steps)
            .map(|i| {
                if exact && steps > 0 {
                    start + (stop - start) * i as f64 / steps as f64
                } else {
                    start + step * i as f64
                }
            })
            .collect()
    } else {
        spec.split(',')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(num)
            .collect::<CliResult<Vec<f64>>>()?
    };
    if etas.is_empty() {
        return Err(Failure::input("empty eta grid"));
    }
    if let Some(e) = etas.iter().find(|e| !(0.0..=1.0).contains(*e)) {
        return Err(Failure::input(format!("eta {e} outside [0, 1]")));
    }
    Ok(etas)
}

#[derive(Serialize)]
struct SweepRow {
    d: usize,
    eta: f64,
    #[serde(rename = "R_lb")]
    r_lb: f64,
    #[serde(rename = "R_sdp")]
    r_sdp: Option<f64>,
    xi_lb: f64,
    xi_witness: Option<f64>,
    eta_unsteerable: f64,
    eta_advantage: f64,
}

fn sweep(args: &SweepArgs, opts: &SteeringOptions, format: Format) -> CliResult<String> {
    let dims = parse_dims(&args.dims)?;
    let etas = parse_eta_grid(&args.eta)?;

    if args.surface {
        let rows = fig3_surface(&dims, &etas);
        return match format {
            Format::Csv => to_csv(&rows),
            Format::Json => json_only(format, json!({ "schema_version": 1, "rows": rows })),
        };
    }

    let families = if args.with_sdp {
        let mut fams = BTreeMap::new();
        for &d in &dims {
            fams.insert(d, mub_family(d)?);
        }
        Some(fams)
    } else {
        None
    };
    if args.with_sdp && !(args.task.epsilon > 0.0 && args.task.beta > 0.0) {
        return Err(Failure::input("--epsilon and --beta must be positive"));
    }

    let grid: Vec<(usize, f64)> = dims.iter().flat_map(|&d| etas.iter().map(move |&e| (d, e))).collect();
    let rows = grid
        .par_iter()
        .map(|&(d, eta)| {
            let t = thresholds(d);
            let (r_sdp, xi_witness) = match &families {
                Some(fams) => {
                    let a = isotropic_assemblage(d, eta, &fams[&d])?;
                    let rep = certified_advantage_with(&a, args.task.epsilon, args.task.beta, opts)?;
                    (Some(rep.robustness), rep.xi)
                }
                None => (None, None),
            };
            Ok(SweepRow {
                d,
                eta,
                r_lb: isotropic_robustness_lb(d, eta),
                r_sdp,
                xi_lb: xi_lb_isotropic(d, eta),
                xi_witness,
                eta_unsteerable: t.unsteerable,
                eta_advantage: t.advantage,
            })
        })
        .collect::<Result<Vec<_>, steerkit::Error>>()?;

    match format {
        Format::Csv => to_csv(&rows),
        Format::Json => json_only(format, json!({ "schema_version": 1, "rows": rows })),
    }
}

fn to_csv<T: Serialize>(rows: &[T]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Failure {
            code: 1,
            kind: "io",
            message: e.to_string(),
        })?;
    }
    let bytes = w.into_inner().map_err(|e| Failure {
        code: 1,
        kind: "io",
        message: e.to_string(),
    })?;
    Ok(String::from_utf8(bytes).expect("csv is utf-8"))
}

#[derive(Serialize)]
struct SimulationRow {
    shots: u64,
    mean: f64,
    std_error: f64,
    seed: u64,
    q_quantum: f64,
    epsilon: f64,
    beta: f64,
}

fn simulate(
    path: &Path,
    task: TaskArgs,
    shots: u64,
    seed: u64,
    opts: &SteeringOptions,
    format: Format,
) -> CliResult<String> {
    if shots == 0 {
        return Err(Failure::input("--shots must be at least 1"));
    }
    let a = read_assemblage(path)?;
    let r = robustness_dual_with(&a, opts)?;
    let t = witness_hamiltonians(&r.witnesses, task.epsilon, task.beta)?;
    let est = simulate_protocol(&a, &t, shots, seed)?;
    let row = SimulationRow {
        shots: est.shots,
        mean: est.mean,
        std_error: est.std_error,
        seed: est.seed,
        q_quantum: average_heat(&a, &t)?,
        epsilon: task.epsilon,
        beta: task.beta,
    };
    match format {
        Format::Csv => to_csv(&[row]),
        Format::Json => {
            let mut v = serde_json::to_value(&row).expect("row serialises");
            v["schema_version"] = 1.into();
            json_only(format, v)
        }
    }
}
