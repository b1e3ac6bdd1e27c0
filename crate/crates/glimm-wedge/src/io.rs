//! Run configuration, manifests and versioned CSV exports.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::diagnostics::{check_f_monotone, functional_report, FunctionalRow, FunctionalWeights, MonotoneCheck};
use crate::error::{Error, Result};
use crate::glimm::{run, speed_bound, ApproxSolution, Mesh, ThetaRule, ThetaSequence, WaveEntry, CFL_SAFETY};
use crate::params::GasParams;
use crate::riemann::solve_boundary;
use crate::state::FlowState;

/// First line of every CSV export.
pub const CSV_HEADER: &str = "# glimm-wedge v1";

/// Format tag stored in manifests.
pub const FORMAT: &str = "glimm-wedge v1";

fn default_rho_floor() -> f64 {
    1e-8
}

fn default_tol_root() -> f64 {
    1e-12
}

fn default_tol_quad() -> f64 {
    1e-10
}

fn default_rule() -> ThetaRule {
    ThetaRule::VanDerCorput
}

fn default_incoming() -> FlowState {
    FlowState::new(1.0, 0.0)
}

fn default_margin() -> f64 {
    1.1
}

/// A jump in the incoming profile: `lower` below ordinate `y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepPerturbation {
    pub y: f64,
    pub lower: FlowState,
}

/// Inputs of a single wedge run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub gamma: f64,
    pub a_inf: f64,
    pub tau: f64,
    pub b0: f64,
    #[serde(default = "default_rho_floor")]
    pub rho_floor: f64,
    #[serde(default = "default_tol_root")]
    pub tol_root: f64,
    #[serde(default = "default_tol_quad")]
    pub tol_quad: f64,
    pub dx: f64,
    pub k_max: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_rule")]
    pub theta_rule: ThetaRule,
    /// Free-stream state above any perturbation.
    #[serde(default = "default_incoming")]
    pub incoming: FlowState,
    #[serde(default)]
    pub step: Option<StepPerturbation>,
    /// Factor applied to the largest characteristic speed of the data when sizing `dy`.
    #[serde(default = "default_margin")]
    pub speed_margin: f64,
    #[serde(default)]
    pub weights: FunctionalWeights,
}

impl RunConfig {
    /// Constant incoming flow at the given parameters.
    pub fn wedge(p: &GasParams, dx: f64, k_max: usize) -> Self {
        RunConfig {
            gamma: p.gamma,
            a_inf: p.a_inf,
            tau: p.tau,
            b0: p.b0,
            rho_floor: p.rho_floor,
            tol_root: p.tol_root,
            tol_quad: p.tol_quad,
            dx,
            k_max,
            seed: 0,
            theta_rule: default_rule(),
            incoming: default_incoming(),
            step: None,
            speed_margin: default_margin(),
            weights: FunctionalWeights::default(),
        }
    }

    pub fn params(&self) -> GasParams {
        GasParams {
            gamma: self.gamma,
            a_inf: self.a_inf,
            tau: self.tau,
            b0: self.b0,
            rho_floor: self.rho_floor,
            tol_root: self.tol_root,
            tol_quad: self.tol_quad,
        }
    }

    /// Incoming state at ordinate `y`.
    pub fn profile(&self) -> impl Fn(f64) -> FlowState + Copy + Send + Sync {
        let (upper, step) = (self.incoming, self.step);
        move |y| match step {
            Some(s) if y < s.y => s.lower,
            _ => upper,
        }
    }

    /// Mesh sized by the incoming states and the exact wedge state, deep enough to hold the
    /// perturbation.
    pub fn mesh(&self) -> Result<Mesh> {
        let p = self.params();
        p.validate()?;
        self.weights.validate()?;
        if !(self.speed_margin >= 1.0) {
            return Err(Error::InvalidParams { name: "speed_margin", reason: "must be at least 1".into() });
        }
        let mut states = vec![self.incoming, solve_boundary(&self.incoming, &p)?.top];
        if let Some(s) = self.step {
            states.push(s.lower);
        }
        let bound = speed_bound(&states, &p)? * self.speed_margin;
        let probe = Mesh::with_cfl(self.dx, self.k_max, self.b0, bound, CFL_SAFETY, 0)?;
        let extra = self.step.map_or(0, |s| (s.y.abs() / (2.0 * probe.dy)).ceil() as usize + 1);
        Mesh::with_cfl(self.dx, self.k_max, self.b0, bound, CFL_SAFETY, extra)
    }

    pub fn theta(&self) -> ThetaSequence {
        ThetaSequence::generate(self.theta_rule, self.seed, self.k_max)
    }

    /// File-name stem embedding `(gamma, a_inf, tau, seed, dx)`.
    pub fn stem(&self) -> String {
        file_stem(self.gamma, self.a_inf, self.tau, self.seed, self.dx)
    }
}

/// File-name stem embedding `(gamma, a_inf, tau, seed, dx)`.
pub fn file_stem(gamma: f64, a_inf: f64, tau: f64, seed: u64, dx: f64) -> String {
    format!("g{gamma}_a{a_inf}_t{tau}_s{seed}_dx{dx}")
}

/// Everything needed to reproduce an output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub format: String,
    pub command: String,
    pub config: serde_json::Value,
    pub params: Option<GasParams>,
    pub mesh: Option<Mesh>,
    pub seed: u64,
    pub generator: Option<ThetaRule>,
}

impl Manifest {
    pub fn new(command: &str, config: &impl Serialize, seed: u64) -> Result<Self> {
        Ok(Manifest {
            format: FORMAT.into(),
            command: command.into(),
            config: serde_json::to_value(config).map_err(|e| Error::Config(e.to_string()))?,
            params: None,
            mesh: None,
            seed,
            generator: None,
        })
    }

    /// Hex SHA-256 of the compact JSON encoding.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("manifest serializes");
        hex::encode(Sha256::digest(&bytes))
    }
}

/// A JSON report stamped with the hash of its manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stamped<R> {
    pub manifest_sha256: String,
    #[serde(flatten)]
    pub report: R,
}

/// Outputs of [`execute_run`].
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub solution: ApproxSolution,
    pub functional: Vec<FunctionalRow>,
    pub monotone: MonotoneCheck,
    pub manifest: Manifest,
}

/// Summary written next to the exports of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub columns: usize,
    pub waves: usize,
    pub monotone: MonotoneCheck,
}

/// Builds the mesh, marches the scheme and evaluates the functional.
pub fn execute_run(cfg: &RunConfig) -> Result<RunOutput> {
    let p = cfg.params();
    let mesh = cfg.mesh()?;
    let theta = cfg.theta();
    let smallness = p.nonlinearity();
    let solution = run(&p, &mesh, &theta, cfg.profile())?;
    let functional = functional_report(&solution, &cfg.weights);
    let monotone = check_f_monotone(&functional, smallness, 1e-12);
    if monotone.smallness > 0.05 {
        log::warn!("smallness (gamma - 1 + tau^2) F(0) = {:.3} exceeds 0.05", monotone.smallness);
    }
    let mut manifest = Manifest::new("run", cfg, cfg.seed)?;
    manifest.params = Some(p);
    manifest.mesh = Some(mesh);
    manifest.generator = Some(cfg.theta_rule);
    Ok(RunOutput {
        solution,
        functional,
        monotone,
        manifest,
    })
}

/// Reads and parses a JSON file.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

/// Writes pretty JSON to `path`.
pub fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
    fs::write(path, text + "\n").map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn csv_err(e: impl std::fmt::Display) -> Error {
    Error::Io(e.to_string())
}

fn csv_writer<W: Write>(mut w: W) -> Result<csv::Writer<W>> {
    writeln!(w, "{CSV_HEADER}").map_err(csv_err)?;
    Ok(csv::Writer::from_writer(w))
}

/// Cell constants as rows `k, n, x, y, rho, v`, with `y` the sample ordinate of the cell.
pub fn write_solution_csv<W: Write>(w: W, sol: &ApproxSolution) -> Result<()> {
    let mut out = csv_writer(w)?;
    out.write_record(["k", "n", "x", "y", "rho", "v"]).map_err(csv_err)?;
    for (k, column) in sol.states.iter().enumerate() {
        let x = sol.mesh.x(k);
        for (i, s) in column.iter().enumerate() {
            let n = -(i as i64) - 1;
            let y = sol.mesh.sample_y(k, n, sol.theta.values[k]);
            out.serialize((k, n, x, y, s.rho, s.v)).map_err(csv_err)?;
        }
    }
    out.flush().map_err(csv_err)
}

/// Wave log rows `k, n, kind, strength, speed`.
pub fn write_wave_csv<W: Write>(w: W, waves: &[WaveEntry]) -> Result<()> {
    let mut out = csv_writer(w)?;
    out.write_record(["k", "n", "kind", "strength", "speed"]).map_err(csv_err)?;
    for e in waves {
        out.serialize((e.k, e.n, e.wave.kind.as_str(), e.wave.strength, e.wave.speed_mid()))
            .map_err(csv_err)?;
    }
    out.flush().map_err(csv_err)
}

/// Functional rows `k, l1, l2, l, q, f, tv, sup`.
pub fn write_functional_csv<W: Write>(w: W, rows: &[FunctionalRow]) -> Result<()> {
    let mut out = csv_writer(w)?;
    for r in rows {
        out.serialize(r).map_err(csv_err)?;
    }
    out.flush().map_err(csv_err)
}

/// Rows of any serializable record type, with the versioned header.
pub fn write_rows_csv<W: Write, R: Serialize>(w: W, rows: &[R]) -> Result<()> {
    let mut out = csv_writer(w)?;
    for r in rows {
        out.serialize(r).map_err(csv_err)?;
    }
    out.flush().map_err(csv_err)
}

fn create(path: &Path) -> Result<fs::File> {
    fs::File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Writes the exports of a run into `dir` and returns the written paths.
pub fn export_run(dir: &Path, cfg: &RunConfig, out: &RunOutput) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    let stem = cfg.stem();
    let path = |suffix: &str| dir.join(format!("{stem}_{suffix}"));
    let files = [
        path("solution.csv"),
        path("waves.csv"),
        path("functional.csv"),
        path("manifest.json"),
        path("report.json"),
    ];
    write_solution_csv(create(&files[0])?, &out.solution)?;
    write_wave_csv(create(&files[1])?, &out.solution.wave_log())?;
    write_functional_csv(create(&files[2])?, &out.functional)?;
    write_json(&files[3], &out.manifest)?;
    let summary = Stamped {
        manifest_sha256: out.manifest.hash(),
        report: RunSummary {
            columns: out.solution.states.len(),
            waves: out.solution.wave_log().len(),
            monotone: out.monotone.clone(),
        },
    };
    write_json(&files[4], &summary)?;
    Ok(files.to_vec())
}
