//! The modified Glimm random-choice scheme on a mesh that follows the wedge.
//!
//! Column `k` spans `x_k <= x < x_{k+1}` with `x_k = k dx`; its boundary point is
//! `b_k = b0 x_k`. Cells `n = -1, -2, ..., -y_depth` occupy
//! `(b_k + 2n dy, b_k + 2(n+1) dy)`, and cell `-1` touches the wedge. The jump between cells
//! `n` and `n - 1` sits at `b_k + 2n dy` and carries an interior fan; the wedge point `b_k`
//! carries the boundary fan of cell `-1`. Below the deepest cell the data is extended by a
//! constant. Cell states of column `k + 1` are the fans of column `k` sampled at
//! `(x_{k+1}, b_{k+1} + (2n + 1 + theta_{k+1}) dy)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::GasParams;
use crate::real::{lit, to_f64, Real};
use crate::riemann::{solve_boundary, solve_interior, Fan};
use crate::state::{eigenvalues, FlowState};
use crate::waves::Wave;

/// Safety factor applied by [`Mesh::with_cfl`].
pub const CFL_SAFETY: f64 = 1.2;

/// Uniform mesh in `x` with wedge-following cells in `y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mesh<T = f64> {
    pub dx: T,
    /// Half cell height.
    pub dy: T,
    pub b0: T,
    pub x_max: T,
    pub k_max: usize,
    /// Number of cells per column.
    pub y_depth: usize,
}

impl<T: Real> Mesh<T> {
    pub fn new(dx: T, dy: T, b0: T, k_max: usize, y_depth: usize) -> Result<Self> {
        if !(dx > T::zero() && dx.is_finite()) {
            return Err(Error::InvalidParams { name: "dx", reason: "must be positive".into() });
        }
        if !(dy > T::zero() && dy.is_finite()) {
            return Err(Error::InvalidParams { name: "dy", reason: "must be positive".into() });
        }
        if y_depth < 1 {
            return Err(Error::InvalidParams { name: "y_depth", reason: "need at least one cell".into() });
        }
        Ok(Mesh {
            dx,
            dy,
            b0,
            x_max: dx * lit(k_max as f64),
            k_max,
            y_depth,
        })
    }

    /// Mesh whose ratio `dy/dx` is `safety * (speed_bound + |b0|)` and whose depth keeps
    /// waves born at the wedge or in the top `extra_cells` cells away from the bottom.
    pub fn with_cfl(dx: T, k_max: usize, b0: T, speed_bound: T, safety: T, extra_cells: usize) -> Result<Self> {
        if !(safety >= lit(1.1)) {
            return Err(Error::InvalidParams { name: "cfl_safety", reason: "must be at least 1.1".into() });
        }
        let dy = safety * (speed_bound + b0.abs()) * dx;
        let travel = (k_max as f64 / (2.0 * to_f64(safety))).ceil() as usize;
        Mesh::new(dx, dy, b0, k_max, travel + extra_cells + 4)
    }

    pub fn x(&self, k: usize) -> T {
        self.dx * lit(k as f64)
    }

    /// Wedge ordinate `b_k` at column `k`.
    pub fn b(&self, k: usize) -> T {
        self.b0 * self.x(k)
    }

    /// Sample ordinate `y_{k,n}` of cell `n <= -1`.
    pub fn sample_y(&self, k: usize, n: i64, theta: T) -> T {
        self.b(k) + (lit::<T>(2.0 * n as f64 + 1.0) + theta) * self.dy
    }

    /// Ordinate of the fan origin with index `j` (0 is the wedge, `j >= 1` the jump below cell `-j`).
    pub fn fan_y(&self, k: usize, j: usize) -> T {
        self.b(k) - lit::<T>(2.0 * j as f64) * self.dy
    }

    /// Bound on `|lambda| + |b0|` enforced while marching.
    pub fn speed_limit(&self) -> T {
        self.dy / self.dx
    }
}

/// Rule generating the sampling sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThetaRule {
    /// Base-2 van der Corput sequence, offset by the seed.
    VanDerCorput,
    /// Independent uniform draws from a seeded ChaCha stream.
    Uniform,
}

/// Sampling offsets `theta_k in (-1, 1)`, one per column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThetaSequence<T = f64> {
    pub values: Vec<T>,
    pub rule: ThetaRule,
    pub seed: u64,
}

/// Radical inverse of `i` in base 2.
pub fn van_der_corput(mut i: u64) -> f64 {
    let mut x = 0.0;
    let mut scale = 0.5;
    while i > 0 {
        if i & 1 == 1 {
            x += scale;
        }
        i >>= 1;
        scale *= 0.5;
    }
    x
}

impl<T: Real> ThetaSequence<T> {
    /// Offsets for columns `0..=k_max`.
    pub fn generate(rule: ThetaRule, seed: u64, k_max: usize) -> Self {
        let values = match rule {
            ThetaRule::VanDerCorput => (0..=k_max as u64)
                .map(|k| lit(2.0 * van_der_corput(k + 1 + seed) - 1.0))
                .collect(),
            ThetaRule::Uniform => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (0..=k_max)
                    .map(|_| loop {
                        let u: f64 = rng.random();
                        if u > 0.0 {
                            break lit(2.0 * u - 1.0);
                        }
                    })
                    .collect()
            }
        };
        ThetaSequence { values, rule, seed }
    }

    /// A fixed offset for every column.
    pub fn constant(theta: T, k_max: usize) -> Self {
        ThetaSequence {
            values: vec![theta; k_max + 1],
            rule: ThetaRule::VanDerCorput,
            seed: 0,
        }
    }
}

/// Waves entering and leaving one diamond.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiamondRecord<T = f64> {
    pub k: usize,
    /// `0` for the wedge diamond, `-j` for the jump below cell `-j`.
    pub n: i64,
    pub incoming: Vec<Wave<T>>,
    pub outgoing: Vec<Wave<T>>,
    pub is_boundary: bool,
}

/// One logged wave with its position at the end of its column.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveEntry<T = f64> {
    pub k: usize,
    pub n: i64,
    pub wave: Wave<T>,
    /// Ordinate reached at `x_{k+1}`.
    pub y_end: T,
}

/// Approximate solution produced by [`run`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Real + Deserialize<'de>"))]
pub struct ApproxSolution<T = f64> {
    pub params: GasParams<T>,
    pub mesh: Mesh<T>,
    pub theta: ThetaSequence<T>,
    /// `states[k][i]` is the constant of cell `n = -(i + 1)` in column `k`, for `k <= k_max`.
    pub states: Vec<Vec<FlowState<T>>>,
    /// `fans[k][j]`: the wedge fan for `j = 0`, the jump below cell `-j` otherwise; `k < k_max`.
    pub fans: Vec<Vec<Fan<T>>>,
}

/// Cell constants of the initial column sampled from a profile.
pub fn init_column<T: Real, F: Fn(T) -> FlowState<T>>(profile: F, mesh: &Mesh<T>, theta: &ThetaSequence<T>) -> Vec<FlowState<T>> {
    (0..mesh.y_depth)
        .map(|i| profile(mesh.sample_y(0, -(i as i64) - 1, theta.values[0])))
        .collect()
}

/// Fans of one column.
pub fn column_fans<T: Real>(k: usize, cells: &[FlowState<T>], mesh: &Mesh<T>, p: &GasParams<T>) -> Result<Vec<Fan<T>>> {
    let solved: Vec<Result<Fan<T>>> = (0..cells.len())
        .into_par_iter()
        .map(|j| {
            if j == 0 {
                solve_boundary(&cells[0], p).map(Fan::Boundary).map_err(|e| e.at(k, 0))
            } else {
                solve_interior(&cells[j], &cells[j - 1], p)
                    .map(Fan::Interior)
                    .map_err(|e| e.at(k, -(j as i64)))
            }
        })
        .collect();
    let fans = solved.into_iter().collect::<Result<Vec<_>>>()?;
    let limit = mesh.speed_limit();
    for (j, fan) in fans.iter().enumerate() {
        let speed = fan.max_speed() + mesh.b0.abs();
        if speed > limit {
            return Err(Error::CflViolation {
                speed: to_f64(speed),
                limit: to_f64(limit),
            }
            .at(k, -(j as i64)));
        }
    }
    for (j, cell) in cells.iter().enumerate() {
        let (lm, lp) = eigenvalues(cell, p).map_err(|e| e.at(k, -(j as i64) - 1))?;
        let speed = lm.abs().max(lp.abs()) + mesh.b0.abs();
        if speed > limit {
            return Err(Error::CflViolation {
                speed: to_f64(speed),
                limit: to_f64(limit),
            }
            .at(k, -(j as i64) - 1));
        }
    }
    Ok(fans)
}

/// State at `(x_k + dxl, y)` produced by the fans of column `k`, for `0 < dxl <= dx`.
fn sample_column<T: Real>(fans: &[Fan<T>], cells: &[FlowState<T>], mesh: &Mesh<T>, k: usize, dxl: T, y: T, p: &GasParams<T>) -> FlowState<T> {
    let rel = (mesh.b(k) - y) / (lit::<T>(2.0) * mesh.dy);
    let j = rel.round().max(T::zero());
    let j = to_f64(j) as usize;
    if j >= fans.len() {
        return cells[cells.len() - 1];
    }
    fans[j].sample((y - mesh.fan_y(k, j)) / dxl, p)
}

/// Cell constants of column `k + 1` from the fans of column `k`.
pub fn advance_column<T: Real>(
    k: usize,
    cells: &[FlowState<T>],
    fans: &[Fan<T>],
    mesh: &Mesh<T>,
    theta: &ThetaSequence<T>,
    p: &GasParams<T>,
) -> Vec<FlowState<T>> {
    let th = theta.values[k + 1];
    (0..mesh.y_depth)
        .into_par_iter()
        .map(|i| {
            let y = mesh.sample_y(k + 1, -(i as i64) - 1, th);
            sample_column(fans, cells, mesh, k, mesh.dx, y, p)
        })
        .collect()
}

/// Runs the scheme over all `k_max` columns.
pub fn run<T: Real, F: Fn(T) -> FlowState<T>>(
    params: &GasParams<T>,
    mesh: &Mesh<T>,
    theta: &ThetaSequence<T>,
    profile: F,
) -> Result<ApproxSolution<T>> {
    params.validate()?;
    if theta.values.len() < mesh.k_max + 1 {
        return Err(Error::InvalidParams {
            name: "theta",
            reason: format!("need {} offsets, got {}", mesh.k_max + 1, theta.values.len()),
        });
    }
    if let Some(t) = theta.values.iter().find(|t| !(t.abs() < T::one())) {
        return Err(Error::InvalidParams {
            name: "theta",
            reason: format!("offset {} outside (-1, 1)", to_f64(*t)),
        });
    }
    let mut states = vec![init_column(profile, mesh, theta)];
    let mut fans = Vec::with_capacity(mesh.k_max);
    for k in 0..mesh.k_max {
        let cells = &states[k];
        let column = column_fans(k, cells, mesh, params)?;
        let next = advance_column(k, cells, &column, mesh, theta, params);
        fans.push(column);
        states.push(next);
        if k % 100 == 99 {
            log::debug!("advanced {} of {} columns", k + 1, mesh.k_max);
        }
    }
    Ok(ApproxSolution {
        params: *params,
        mesh: *mesh,
        theta: theta.clone(),
        states,
        fans,
    })
}

impl<T: Real> ApproxSolution<T> {
    /// Point value with the right-limit convention at column lines.
    pub fn evaluate(&self, x: T, y: T) -> Result<FlowState<T>> {
        let m = &self.mesh;
        let out = || Error::OutOfDomain { x: to_f64(x), y: to_f64(y) };
        let slack = lit::<T>(1e-12) * (T::one() + m.x_max.abs());
        if !(x >= T::zero() && x <= m.x_max + slack) || !(y <= m.b0 * x + slack) {
            return Err(out());
        }
        let kf = to_f64((x / m.dx).floor()).max(0.0) as usize;
        if kf >= self.fans.len() {
            let k = self.fans.len();
            return Ok(self.cell_value(k, y));
        }
        let dxl = x - m.x(kf);
        if dxl <= T::zero() {
            return Ok(self.cell_value(kf, y));
        }
        Ok(sample_column(&self.fans[kf], &self.states[kf], m, kf, dxl, y, &self.params))
    }

    /// Cell constant of column `k` containing ordinate `y`.
    pub fn cell_value(&self, k: usize, y: T) -> FlowState<T> {
        let m = &self.mesh;
        let rel = (m.b(k) - y) / (lit::<T>(2.0) * m.dy);
        let i = to_f64(rel.floor()).max(0.0) as usize;
        let cells = &self.states[k];
        cells[i.min(cells.len() - 1)]
    }

    /// All waves of column `k` with their end positions, bottom to top.
    pub fn column_waves(&self, k: usize) -> Vec<WaveEntry<T>> {
        let m = &self.mesh;
        let mut out = Vec::new();
        for (j, fan) in self.fans[k].iter().enumerate().rev() {
            let y0 = m.fan_y(k, j);
            for wave in fan.waves() {
                out.push(WaveEntry {
                    k,
                    n: -(j as i64),
                    wave,
                    y_end: y0 + wave.speed_mid() * m.dx,
                });
            }
        }
        out
    }

    /// Waves whose strength exceeds `tol_root`, over all columns.
    pub fn wave_log(&self) -> Vec<WaveEntry<T>> {
        let tol = self.params.tol_root;
        (0..self.fans.len())
            .flat_map(|k| self.column_waves(k))
            .filter(|e| e.wave.strength.abs() > tol)
            .collect()
    }

    /// Diamond index (`j`, 0 for the wedge) of column `k` containing ordinate `y` at `x_k`.
    fn diamond_of(&self, k: usize, y: T) -> usize {
        let m = &self.mesh;
        let rel = (y - m.b(k)) / m.dy;
        let j = ((T::one() + self.theta.values[k] - rel) * lit(0.5)).floor();
        to_f64(j.max(T::zero())) as usize
    }

    /// Incoming and outgoing waves of every diamond that has any.
    pub fn diamond_records(&self) -> Vec<DiamondRecord<T>> {
        let mut out = Vec::new();
        for k in 0..self.fans.len() {
            let mut incoming: Vec<Vec<Wave<T>>> = vec![Vec::new(); self.fans[k].len()];
            if k > 0 {
                for e in self.column_waves(k - 1) {
                    let j = self.diamond_of(k, e.y_end);
                    if j < incoming.len() {
                        incoming[j].push(e.wave);
                    }
                }
            }
            for (j, fan) in self.fans[k].iter().enumerate() {
                let outgoing = fan.waves();
                let inc = std::mem::take(&mut incoming[j]);
                if !inc.is_empty() || !outgoing.is_empty() {
                    out.push(DiamondRecord {
                        k,
                        n: -(j as i64),
                        incoming: inc,
                        outgoing,
                        is_boundary: j == 0,
                    });
                }
            }
        }
        out
    }
}

/// Largest `|lambda|` over a set of states, e.g. to size a mesh.
pub fn speed_bound<T: Real>(states: &[FlowState<T>], p: &GasParams<T>) -> Result<T> {
    states.iter().try_fold(T::zero(), |m, s| {
        let (lm, lp) = eigenvalues(s, p)?;
        Ok(m.max(lm.abs()).max(lp.abs()))
    })
}
