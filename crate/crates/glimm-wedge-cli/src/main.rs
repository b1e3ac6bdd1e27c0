//! Command-line front end: exact Riemann solves, wedge runs, similarity studies and
//! interaction probes.
//!
//! Exit codes: 0 on success, 1 for usage or configuration errors, 2 for numerical failures.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use glimm_wedge::io::{self, Manifest, RunConfig, Stamped};
use glimm_wedge::probe::{interaction_probe, ProbeCase, Sampler};
use glimm_wedge::riemann::{solve_boundary, solve_interior};
use glimm_wedge::similarity::{similarity_study, StudyConfig};
use glimm_wedge::waves::Wave;
use glimm_wedge::{Error, FlowState, GasParams};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "glimm-wedge", version, about = "Glimm scheme for steady potential flow past a slender wedge")]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve one interior or boundary Riemann problem and print the fan as JSON.
    Riemann(RiemannArgs),
    /// March the scheme for a run configuration and write the exports.
    Run(RunArgs),
    /// Run a slenderness family and report distances to the small-disturbance solution.
    Study(StudyArgs),
    /// Sample interaction configurations and report identities and fitted constants.
    Probe(ProbeArgs),
}

#[derive(Args, Debug)]
struct ParamArgs {
    /// JSON file with gamma, a_inf, tau, b0 and tolerances; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long = "a-inf")]
    a_inf: Option<f64>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    b0: Option<f64>,
}

impl ParamArgs {
    fn resolve(&self) -> Result<GasParams, Error> {
        let mut p = match &self.config {
            Some(path) => io::read_json::<GasParams>(path)?,
            None => GasParams::new(1.4, 1.0, 0.0, -0.5),
        };
        p.gamma = self.gamma.unwrap_or(p.gamma);
        p.a_inf = self.a_inf.unwrap_or(p.a_inf);
        p.tau = self.tau.unwrap_or(p.tau);
        p.b0 = self.b0.unwrap_or(p.b0);
        Ok(p)
    }
}

#[derive(Args, Debug)]
struct RiemannArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Lower state `rho,v`.
    #[arg(long, value_parser = parse_state, allow_hyphen_values = true)]
    left: FlowState,
    /// Upper state `rho,v` (interior problem).
    #[arg(long, value_parser = parse_state, allow_hyphen_values = true, required_unless_present = "boundary")]
    right: Option<FlowState>,
    /// Solve the boundary problem of `--left` against the wedge instead.
    #[arg(long, conflicts_with = "right")]
    boundary: bool,
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Run configuration (JSON).
    #[arg(long)]
    config: PathBuf,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Overrides the seed of the configuration.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug)]
struct StudyArgs {
    /// Study configuration (JSON).
    #[arg(long)]
    config: PathBuf,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug)]
struct ProbeArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Case identifier such as `L3.5.2`, or `all`.
    #[arg(long = "case", default_value = "all")]
    case: String,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long)]
    seed: Option<u64>,
    /// Directory for the JSON report; printed to stdout otherwise.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_state(s: &str) -> Result<FlowState, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [rho, v] = parts[..] else {
        return Err(format!("expected `rho,v`, got `{s}`"));
    };
    let num = |x: &str| x.parse::<f64>().map_err(|e| format!("`{x}`: {e}"));
    Ok(FlowState::new(num(rho)?, num(v)?))
}

fn state_json(s: &FlowState) -> Value {
    json!({ "rho": s.rho, "v": s.v })
}

fn wave_json(w: &Wave) -> Value {
    json!({
        "kind": w.kind.as_str(),
        "strength": w.strength,
        "speed_lo": w.speed_lo,
        "speed_hi": w.speed_hi,
    })
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json value serializes"));
}

fn cmd_riemann(a: &RiemannArgs) -> Result<(), Error> {
    let p = a.params.resolve()?;
    if a.boundary {
        if p.b0 >= 0.0 {
            return Err(Error::InvalidParams { name: "b0", reason: "must be negative".into() });
        }
        let fan = solve_boundary(&a.left, &p)?;
        eprintln!("boundary fan: z2 = {:.12e}, top = ({:.12}, {:.12})", fan.z2, fan.top.rho, fan.top.v);
        print_json(&json!({
            "problem": "boundary",
            "params": p,
            "left": state_json(&fan.left),
            "top": state_json(&fan.top),
            "z2": fan.z2,
            "waves": fan.wave2.iter().map(wave_json).collect::<Vec<_>>(),
        }));
    } else {
        let right = a.right.expect("clap requires --right without --boundary");
        let fan = solve_interior(&a.left, &right, &p)?;
        eprintln!(
            "interior fan: z1 = {:.12e}, z2 = {:.12e}, middle = ({:.12}, {:.12})",
            fan.z.0, fan.z.1, fan.middle.rho, fan.middle.v
        );
        let waves: Vec<Value> = fan.wave2.iter().chain(fan.wave1.iter()).map(wave_json).collect();
        print_json(&json!({
            "problem": "interior",
            "params": p,
            "left": state_json(&fan.left),
            "middle": state_json(&fan.middle),
            "right": state_json(&fan.right),
            "z1": fan.z.0,
            "z2": fan.z.1,
            "waves": waves,
        }));
    }
    Ok(())
}

fn cmd_run(a: &RunArgs) -> Result<(), Error> {
    let mut cfg: RunConfig = io::read_json(&a.config)?;
    if let Some(seed) = a.seed {
        cfg.seed = seed;
    }
    let out = io::execute_run(&cfg)?;
    let files = io::export_run(&a.out, &cfg, &out)?;
    let m = &out.monotone;
    eprintln!(
        "{} columns, {} logged waves, F increases beyond slack: {}, smallness {:.4}",
        out.solution.states.len(),
        out.solution.wave_log().len(),
        m.violations.len(),
        m.smallness
    );
    for f in files {
        println!("{}", f.display());
    }
    Ok(())
}

fn write_study(dir: &Path, cfg: &StudyConfig) -> Result<Vec<PathBuf>, Error> {
    let report = similarity_study(cfg)?;
    let mut manifest = Manifest::new("study", cfg, cfg.seed)?;
    manifest.mesh = Some(report.mesh);
    manifest.generator = Some(cfg.theta_rule);
    std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    let taus: Vec<String> = cfg.taus.iter().map(|t| t.to_string()).collect();
    let stem = format!("study_g{}_a{}_t{}_s{}_dx{}", cfg.gamma, cfg.a_inf, taus.join("-"), cfg.seed, cfg.dx);
    let files = [
        dir.join(format!("{stem}_manifest.json")),
        dir.join(format!("{stem}_report.json")),
        dir.join(format!("{stem}_table.csv")),
    ];
    io::write_json(&files[0], &manifest)?;
    io::write_json(&files[1], &Stamped { manifest_sha256: manifest.hash(), report: report.clone() })?;
    let table = std::fs::File::create(&files[2]).map_err(|e| Error::Io(e.to_string()))?;
    io::write_rows_csv(table, &report.rows)?;
    for r in &report.rows {
        let d = r.distance.map_or("-".to_string(), |d| format!("{d:.6e}"));
        eprintln!("tau {:<8} distance {d:<14} tv {:.6} sup {:.6}", r.tau, r.tv_max, r.sup_max);
    }
    eprintln!("monotone: {}, final ratio: {:?}", report.monotone, report.final_ratio);
    Ok(files.to_vec())
}

fn cmd_study(a: &StudyArgs) -> Result<(), Error> {
    let mut cfg: StudyConfig = io::read_json(&a.config)?;
    if let Some(seed) = a.seed {
        cfg.seed = seed;
    }
    for f in write_study(&a.out, &cfg)? {
        println!("{}", f.display());
    }
    Ok(())
}

fn cmd_probe(a: &ProbeArgs) -> Result<(), Error> {
    let p = a.params.resolve()?;
    let cases = if a.case.eq_ignore_ascii_case("all") {
        ProbeCase::all()
            .into_iter()
            .filter(|c| p.tau == 0.0 || !matches!(c, ProbeCase::L31 | ProbeCase::L32))
            .collect()
    } else {
        vec![ProbeCase::parse(&a.case)?]
    };
    let sampler = Sampler {
        seed: a.seed.unwrap_or(Sampler::default().seed),
        ..Sampler::default()
    };
    let reports = cases
        .iter()
        .map(|&c| interaction_probe(c, &sampler, &p, a.samples))
        .collect::<Result<Vec<_>, _>>()?;
    let mut manifest = Manifest::new("probe", &json!({ "cases": a.case, "samples": a.samples, "sampler": sampler }), sampler.seed)?;
    manifest.params = Some(p);
    let stamped = Stamped { manifest_sha256: manifest.hash(), report: json!({ "manifest": manifest, "reports": reports }) };
    match &a.out {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| Error::Io(e.to_string()))?;
            let path = dir.join(format!("probe_{}_g{}_t{}_s{}.json", a.case, p.gamma, p.tau, sampler.seed));
            io::write_json(&path, &stamped)?;
            println!("{}", path.display());
        }
        None => print_json(&serde_json::to_value(&stamped).map_err(|e| Error::Io(e.to_string()))?),
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot start {n} threads: {e}");
            return ExitCode::from(1);
        }
    }
    let result = match &cli.command {
        Command::Riemann(a) => cmd_riemann(a),
        Command::Run(a) => cmd_run(a),
        Command::Study(a) => cmd_study(a),
        Command::Probe(a) => cmd_probe(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_input_error() { 1 } else { 2 })
        }
    }
}
