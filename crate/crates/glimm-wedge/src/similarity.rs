//! Hypersonic similarity: run a family of slenderness values on one mesh and measure the
//! distance of each solution to the small-disturbance (`tau = 0`) solution.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagnostics::{sup_norm, total_variation};
use crate::error::{Error, Result};
use crate::glimm::{run, speed_bound, ApproxSolution, Mesh, ThetaRule, ThetaSequence, CFL_SAFETY};
use crate::params::{scaled_from_physical, tau_family, GasParams, PhysicalSetup};
use crate::real::{lit, to_f64, Real};
use crate::riemann::solve_boundary;
use crate::state::{bernoulli_u, FlowState};

/// Minimum lattice resolution, in points per `dy`, of [`l1_distance`].
pub const MIN_PER_DY: usize = 4;

/// Fraction of `x_max` used as the default radius of the comparison ball.
pub const RADIUS_FRACTION: f64 = 0.8;

/// Scaled longitudinal perturbation `u` of every cell, indexed like `sol.states`.
pub fn reconstruct_u<T: Real>(sol: &ApproxSolution<T>) -> Result<Vec<Vec<T>>> {
    sol.states
        .iter()
        .enumerate()
        .map(|(k, col)| {
            col.iter()
                .enumerate()
                .map(|(i, s)| bernoulli_u(s, &sol.params).map_err(|e| e.at(k, -(i as i64) - 1)))
                .collect()
        })
        .collect()
}

fn mismatch(what: impl Into<String>) -> Error {
    Error::DomainMismatch(what.into())
}

/// Checks that two solutions live on the same mesh with the same `(gamma, a_inf, b0)` and
/// that their cells reach below the ball of radius `radius`.
fn check_comparable<T: Real>(a: &ApproxSolution<T>, b: &ApproxSolution<T>, radius: T) -> Result<()> {
    let (pa, pb) = (&a.params, &b.params);
    if pa.gamma != pb.gamma || pa.a_inf != pb.a_inf || pa.b0 != pb.b0 {
        return Err(mismatch("solutions differ in gamma, a_inf or b0"));
    }
    let (ma, mb) = (&a.mesh, &b.mesh);
    if ma != mb {
        return Err(mismatch("solutions are computed on different meshes"));
    }
    if !(radius > T::zero()) || radius > ma.x_max {
        return Err(mismatch(format!(
            "radius {} outside (0, x_max = {}]",
            to_f64(radius),
            to_f64(ma.x_max)
        )));
    }
    if lit::<T>(2.0 * ma.y_depth as f64) * ma.dy < radius {
        return Err(mismatch("the mesh is too shallow to cover the comparison ball"));
    }
    Ok(())
}

/// L1 distance of `(rho, v)` over the part of the ball `|(x, y)| <= radius` below the wedge,
/// by the midpoint rule on a square lattice with `per_dy` points per `dy`.
pub fn l1_distance<T: Real>(a: &ApproxSolution<T>, b: &ApproxSolution<T>, radius: T, per_dy: usize) -> Result<f64> {
    check_comparable(a, b, radius)?;
    if per_dy < MIN_PER_DY {
        return Err(Error::InvalidParams {
            name: "per_dy",
            reason: format!("need at least {MIN_PER_DY} lattice points per dy"),
        });
    }
    let m = &a.mesh;
    let h = to_f64(m.dy) / per_dy as f64;
    let r = to_f64(radius);
    let b0 = to_f64(m.b0);
    let columns = (r / h).floor() as usize;
    let sums: Vec<Result<f64>> = (0..columns)
        .into_par_iter()
        .map(|i| {
            let x = (i as f64 + 0.5) * h;
            let top = b0 * x;
            let mut sum = 0.0;
            let mut j = 0usize;
            loop {
                let y = top - (j as f64 + 0.5) * h;
                if x * x + y * y > r * r {
                    break;
                }
                let (xt, yt) = (lit::<T>(x), lit::<T>(y));
                sum += to_f64(a.evaluate(xt, yt)?.l1_dist(&b.evaluate(xt, yt)?));
                j += 1;
            }
            Ok(sum)
        })
        .collect();
    let total: f64 = sums.into_iter().sum::<Result<f64>>()?;
    Ok(total * h * h)
}

/// Inputs of a similarity study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyConfig {
    pub gamma: f64,
    pub a_inf: f64,
    pub b0: f64,
    /// Slenderness values in decreasing order, ending with `0`.
    pub taus: Vec<f64>,
    pub dx: f64,
    pub k_max: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_rule")]
    pub theta_rule: ThetaRule,
    /// Constant incoming state.
    #[serde(default = "default_incoming")]
    pub incoming: FlowState,
    #[serde(default = "default_per_dy")]
    pub per_dy: usize,
    /// Radius of the comparison ball; defaults to `0.8 x_max`.
    #[serde(default)]
    pub radius: Option<f64>,
    /// Explicit per-run meshes, one per entry of `taus`; they must coincide.
    #[serde(default)]
    pub meshes: Option<Vec<Mesh>>,
    /// Physical setups whose shock angles are reported.
    #[serde(default)]
    pub demos: Vec<PhysicalSetup>,
}

fn default_rule() -> ThetaRule {
    ThetaRule::VanDerCorput
}

fn default_incoming() -> FlowState {
    FlowState::new(1.0, 0.0)
}

fn default_per_dy() -> usize {
    MIN_PER_DY
}

impl StudyConfig {
    /// The wedge study with the two equal-`K` demo setups.
    pub fn demo() -> Self {
        let setup = |mach_inf, theta_wedge| PhysicalSetup {
            mach_inf,
            theta_wedge,
            u_inf: 1.0,
            rho_inf: 1.0,
        };
        StudyConfig {
            gamma: 1.05,
            a_inf: 1.0,
            b0: -0.5,
            taus: vec![0.2, 0.1, 0.05, 0.025, 0.0],
            dx: 0.025,
            k_max: 160,
            seed: 0,
            theta_rule: ThetaRule::VanDerCorput,
            incoming: default_incoming(),
            per_dy: MIN_PER_DY,
            radius: None,
            meshes: None,
            demos: vec![setup(10.0, 0.1), setup(20.0, 0.05)],
        }
    }
}

/// Per-slenderness summary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StudyRow {
    pub tau: f64,
    /// L1 distance to the `tau = 0` run (absent for the reference itself).
    pub distance: Option<f64>,
    pub tv_max: f64,
    pub sup_max: f64,
    /// Largest `|u|` over all cells.
    pub u_max: f64,
}

/// Wedge shock of a physical setup, scaled with `tau = theta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShockAngle {
    pub mach_inf: f64,
    pub theta_wedge: f64,
    pub similarity_k: f64,
    /// Scaled shock slope.
    pub sigma: f64,
    /// Angle between the shock and the free stream, in radians.
    pub shock_angle: f64,
    /// `shock_angle / theta_wedge`, a function of `K` alone in the similarity limit.
    pub angle_ratio: f64,
}

/// Outcome of [`similarity_study`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyReport {
    pub gamma: f64,
    pub a_inf: f64,
    pub b0: f64,
    pub mesh: Mesh,
    pub radius: f64,
    pub lattice_h: f64,
    /// Quadrature error scale of the lattice: `h * radius` times the largest column variation.
    pub quantization: f64,
    pub rows: Vec<StudyRow>,
    /// Indices `i` where the distance of row `i + 1` exceeds that of row `i`.
    pub reversals: Vec<usize>,
    /// No reversals, or a single one smaller than twice the quantization error.
    pub monotone: bool,
    /// Last distance over first distance.
    pub final_ratio: Option<f64>,
    pub shock_angles: Vec<ShockAngle>,
}

impl StudyReport {
    /// `(tau, distance)` for the runs with `tau > 0`.
    pub fn distances(&self) -> Vec<(f64, f64)> {
        self.rows.iter().filter_map(|r| r.distance.map(|d| (r.tau, d))).collect()
    }
}

/// Mesh shared by every member of the family: the CFL ratio covers the incoming state and
/// the exact wedge state of each slenderness, and the depth covers the comparison ball.
pub fn shared_mesh(family: &[GasParams], incoming: &FlowState, dx: f64, k_max: usize) -> Result<Mesh> {
    let first = family.first().ok_or(Error::InvalidParams {
        name: "taus",
        reason: "empty family".into(),
    })?;
    let mut bound = 0.0f64;
    for p in family {
        let top = solve_boundary(incoming, p)?.top;
        bound = bound.max(speed_bound(&[*incoming, top], p)?);
    }
    let probe = Mesh::with_cfl(dx, k_max, first.b0, bound * 1.1, CFL_SAFETY, 0)?;
    let needed = (RADIUS_FRACTION * probe.x_max / (2.0 * probe.dy)).ceil() as usize + 2;
    let extra = needed.saturating_sub(probe.y_depth);
    Mesh::with_cfl(dx, k_max, first.b0, bound * 1.1, CFL_SAFETY, extra)
}

fn shock_angles(cfg: &StudyConfig) -> Result<Vec<ShockAngle>> {
    cfg.demos
        .iter()
        .map(|setup| {
            let tau = setup.theta_wedge;
            let p = scaled_from_physical(setup, cfg.gamma, tau)?;
            let fan = solve_boundary(&FlowState::new(1.0, 0.0), &p)?;
            let sigma = fan.wave2.map_or(p.b0, |w| w.speed_mid());
            let shock_angle = (tau * sigma).atan().abs();
            Ok(ShockAngle {
                mach_inf: setup.mach_inf,
                theta_wedge: setup.theta_wedge,
                similarity_k: setup.similarity_k(),
                sigma,
                shock_angle,
                angle_ratio: shock_angle / setup.theta_wedge,
            })
        })
        .collect()
}

/// Runs the family of `cfg.taus` with a shared mesh and sampling sequence.
pub fn similarity_study(cfg: &StudyConfig) -> Result<StudyReport> {
    if cfg.taus.last() != Some(&0.0) {
        return Err(Error::InvalidParams {
            name: "taus",
            reason: "must end with the reference value 0".into(),
        });
    }
    let family = tau_family(cfg.a_inf, cfg.gamma, cfg.b0, &cfg.taus)?;
    for p in &family {
        p.validate()?;
    }
    let mesh = match &cfg.meshes {
        Some(list) => {
            if list.len() != family.len() {
                return Err(mismatch("need one mesh per slenderness value"));
            }
            if list.windows(2).any(|w| w[0] != w[1]) {
                return Err(mismatch("meshes differ across the family"));
            }
            list[0]
        }
        None => shared_mesh(&family, &cfg.incoming, cfg.dx, cfg.k_max)?,
    };
    if mesh.b0 != cfg.b0 {
        return Err(mismatch("mesh slope differs from b0"));
    }
    let theta = ThetaSequence::generate(cfg.theta_rule, cfg.seed, mesh.k_max);
    let incoming = cfg.incoming;
    let runs: Vec<Result<ApproxSolution>> = family
        .par_iter()
        .map(|p| {
            log::info!("similarity run tau = {}", p.tau);
            run(p, &mesh, &theta, |_| incoming)
        })
        .collect();
    let runs = runs.into_iter().collect::<Result<Vec<_>>>()?;
    let reference = runs.last().expect("family ends with tau = 0");
    let radius = cfg.radius.unwrap_or(RADIUS_FRACTION * mesh.x_max);
    let lattice_h = mesh.dy / cfg.per_dy.max(1) as f64;
    let mut rows = Vec::with_capacity(runs.len());
    for sol in &runs {
        let distance = if sol.params.tau > 0.0 {
            Some(l1_distance(sol, reference, radius, cfg.per_dy)?)
        } else {
            None
        };
        let columns = 0..=mesh.k_max;
        let tv_max = columns.clone().map(|k| total_variation(sol, k)).fold(0.0, f64::max);
        let sup_max = columns.map(|k| sup_norm(sol, k)).fold(0.0, f64::max);
        let u_max = reconstruct_u(sol)?.iter().flatten().fold(0.0f64, |m, u| m.max(u.abs()));
        rows.push(StudyRow {
            tau: sol.params.tau,
            distance,
            tv_max,
            sup_max,
            u_max,
        });
    }
    let tv_ref = rows.last().map_or(0.0, |r| r.tv_max);
    let quantization = lattice_h * radius * tv_ref;
    let dist: Vec<f64> = rows.iter().filter_map(|r| r.distance).collect();
    let reversals: Vec<usize> = (0..dist.len().saturating_sub(1)).filter(|&i| dist[i + 1] > dist[i]).collect();
    let monotone = match reversals.as_slice() {
        [] => true,
        [i] => dist[i + 1] - dist[*i] < 2.0 * quantization,
        _ => false,
    };
    let final_ratio = match (dist.first(), dist.last()) {
        (Some(&a), Some(&b)) if a > 0.0 => Some(b / a),
        _ => None,
    };
    Ok(StudyReport {
        gamma: cfg.gamma,
        a_inf: cfg.a_inf,
        b0: cfg.b0,
        mesh,
        radius,
        lattice_h,
        quantization,
        rows,
        reversals,
        monotone,
        final_ratio,
        shock_angles: shock_angles(cfg)?,
    })
}
