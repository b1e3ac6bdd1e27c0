//! Measurements on approximate solutions: wave-strength functionals, total variation,
//! L1 continuity in `x`, and the entropy inequality of the limit system.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::glimm::ApproxSolution;
use crate::numerics::gauss3;
use crate::params::GasParams;
use crate::real::{lit, powm1_over, to_f64, Real};
use crate::state::FlowState;
use crate::waves::{Wave, WaveKind};

/// Weights of the Glimm functional `F = K_b L1 + L2 + 4 C* (gamma - 1 + tau^2) Q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FunctionalWeights {
    pub k_b: f64,
    pub c_star: f64,
}

impl Default for FunctionalWeights {
    fn default() -> Self {
        FunctionalWeights { k_b: 2.0, c_star: 10.0 }
    }
}

impl FunctionalWeights {
    pub fn validate(&self) -> Result<()> {
        if !(self.k_b > 1.0 && self.k_b < 4.0) {
            return Err(Error::InvalidParams { name: "k_b", reason: "must lie in (1, 4)".into() });
        }
        if !(self.c_star >= self.k_b) {
            return Err(Error::InvalidParams { name: "c_star", reason: "must be at least k_b".into() });
        }
        Ok(())
    }
}

/// Functional values and norms of one column.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FunctionalRow {
    pub k: usize,
    pub l1: f64,
    pub l2: f64,
    pub l: f64,
    pub q: f64,
    pub f: f64,
    pub tv: f64,
    pub sup: f64,
}

/// `(L1, L2, L, Q, F)` of a list of waves ordered bottom to top.
///
/// Only shocks count. An S1 lying strictly below an S2 is an approaching pair.
pub fn functional_of_waves<T: Real>(waves: &[Wave<T>], nonlinearity: f64, w: &FunctionalWeights, tol: f64) -> [f64; 5] {
    let (mut l1, mut l2, mut q, mut s1_below) = (0.0, 0.0, 0.0, 0.0);
    for wave in waves {
        let z = to_f64(wave.strength).abs();
        if z <= tol {
            continue;
        }
        match wave.kind {
            WaveKind::S1 => {
                l1 += z;
                s1_below += z;
            }
            WaveKind::S2 => {
                l2 += z;
                q += z * s1_below;
            }
            _ => {}
        }
    }
    let l = w.k_b * l1 + l2;
    [l1, l2, l, q, l + 4.0 * w.c_star * nonlinearity * q]
}

/// Functional row of column `k < k_max`.
pub fn functional_on_column<T: Real>(sol: &ApproxSolution<T>, k: usize, w: &FunctionalWeights) -> FunctionalRow {
    let waves: Vec<Wave<T>> = sol.column_waves(k).into_iter().map(|e| e.wave).collect();
    let [l1, l2, l, q, f] = functional_of_waves(&waves, to_f64(sol.params.nonlinearity()), w, to_f64(sol.params.tol_root));
    FunctionalRow {
        k,
        l1,
        l2,
        l,
        q,
        f,
        tv: total_variation(sol, k),
        sup: sup_norm(sol, k),
    }
}

/// Functional rows of every column with fans.
pub fn functional_report<T: Real>(sol: &ApproxSolution<T>, w: &FunctionalWeights) -> Vec<FunctionalRow> {
    (0..sol.fans.len()).into_par_iter().map(|k| functional_on_column(sol, k, w)).collect()
}

/// Outcome of [`check_f_monotone`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotoneCheck {
    /// Columns `k` with `F(k + 1) > F(k) + tol F(0)`.
    pub violations: Vec<usize>,
    /// `(gamma - 1 + tau^2) F(0)`.
    pub smallness: f64,
    /// Largest increase `F(k + 1) - F(k)` observed.
    pub max_increase: f64,
}

/// Flags columns where the functional increases beyond `tol * F(0)`.
pub fn check_f_monotone(report: &[FunctionalRow], nonlinearity: f64, tol: f64) -> MonotoneCheck {
    let f0 = report.first().map_or(0.0, |r| r.f);
    let slack = tol * f0;
    let mut violations = Vec::new();
    let mut max_increase = f64::NEG_INFINITY;
    for pair in report.windows(2) {
        let inc = pair[1].f - pair[0].f;
        max_increase = max_increase.max(inc);
        if inc > slack {
            violations.push(pair[0].k);
        }
    }
    MonotoneCheck {
        violations,
        smallness: nonlinearity * f0,
        max_increase: if max_increase.is_finite() { max_increase } else { 0.0 },
    }
}

fn jump<T: Real>(a: &FlowState<T>, b: &FlowState<T>) -> f64 {
    to_f64(a.l1_dist(b))
}

/// Total variation of `(rho, v)` along column `k`: jumps between consecutive cells plus the
/// jump across the wedge fan.
pub fn total_variation<T: Real>(sol: &ApproxSolution<T>, k: usize) -> f64 {
    let cells = &sol.states[k];
    let mut tv: f64 = cells.windows(2).map(|c| jump(&c[0], &c[1])).sum();
    if let Some(fans) = sol.fans.get(k) {
        tv += jump(&fans[0].bottom(), &fans[0].top());
    }
    tv
}

/// `max(|rho|, |v|)` over the cells and wedge state of column `k`.
pub fn sup_norm<T: Real>(sol: &ApproxSolution<T>, k: usize) -> f64 {
    let mut m = sol.states[k].iter().fold(0.0f64, |m, s| m.max(to_f64(s.rho).abs()).max(to_f64(s.v).abs()));
    if let Some(fans) = sol.fans.get(k) {
        let t = fans[0].top();
        m = m.max(to_f64(t.rho).abs()).max(to_f64(t.v).abs());
    }
    m
}

/// Position `(x_k, y)` of the strongest jump between neighbouring cells of each column,
/// skipping columns whose cells are all equal.
pub fn shock_locus<T: Real>(sol: &ApproxSolution<T>) -> Vec<(f64, f64)> {
    let m = &sol.mesh;
    sol.states
        .iter()
        .enumerate()
        .filter_map(|(k, cells)| {
            let (i, size) = cells
                .windows(2)
                .map(|c| jump(&c[0], &c[1]))
                .enumerate()
                .max_by(|a, b| a.1.total_cmp(&b.1))?;
            (size > 0.0).then(|| {
                let y = m.b(k) - m.dy * lit((2 * (i + 1)) as f64);
                (to_f64(m.x(k)), to_f64(y))
            })
        })
        .collect()
}

/// L1 distance between the wedge-aligned traces `U(x1, y + b0 x1)` and `U(x2, y + b0 x2)`
/// over the truncated depth, by the midpoint rule with `per_dy` points per `dy`.
pub fn l1_continuity<T: Real>(sol: &ApproxSolution<T>, x1: T, x2: T, per_dy: usize) -> Result<f64> {
    let m = &sol.mesh;
    let cells = 2 * m.y_depth.saturating_sub(1);
    let n = cells * per_dy.max(1);
    if n == 0 {
        return Ok(0.0);
    }
    let h = m.dy * lit(cells as f64) / lit(n as f64);
    let terms: Vec<Result<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let y = -h * (lit::<T>(i as f64) + lit(0.5));
            let a = sol.evaluate(x1, y + m.b0 * x1)?;
            let b = sol.evaluate(x2, y + m.b0 * x2)?;
            Ok(jump(&a, &b))
        })
        .collect();
    let sum: f64 = terms.into_iter().sum::<Result<f64>>()?;
    Ok(sum * to_f64(h))
}

/// Largest ratio `dist(x_k, x_{k+g}) / (dx + g dx)` over columns `k` (stepping by `stride`)
/// and the given column gaps `g`.
pub fn fit_c10<T: Real>(sol: &ApproxSolution<T>, gaps: &[usize], stride: usize, per_dy: usize) -> Result<f64> {
    let m = &sol.mesh;
    let mut worst = 0.0f64;
    for &g in gaps {
        let mut k = 0;
        while k + g <= m.k_max {
            let (x1, x2) = (m.x(k), m.x(k + g));
            let d = l1_continuity(sol, x1, x2, per_dy)?;
            worst = worst.max(d / to_f64(m.dx * lit((1 + g) as f64)));
            k += stride.max(1);
        }
    }
    Ok(worst)
}

/// Entropy `rho v^2 / 2 + rho A(rho) / (gamma a^2)` and flux `v (eta + p)` of the limit system.
pub fn entropy_pair<T: Real>(s: &FlowState<T>, p: &GasParams<T>) -> (T, T) {
    let a2 = p.a_inf * p.a_inf;
    let ln_rho = s.rho.ln();
    let a = powm1_over(ln_rho, p.gm1());
    let eta = s.rho * s.v * s.v * lit(0.5) + s.rho * a / (p.gamma * a2);
    let pressure = (p.gamma * ln_rho).exp() / (p.gamma * a2);
    (eta, s.v * (eta + pressure))
}

/// Entropy dissipation `sigma [eta] - [q]` of a jump from `lower` to `upper` with slope `sigma`.
///
/// Nonnegative for admissible shocks; a reversed jump gives the opposite sign.
pub fn shock_dissipation<T: Real>(lower: &FlowState<T>, upper: &FlowState<T>, sigma: T, p: &GasParams<T>) -> T {
    let (e0, q0) = entropy_pair(lower, p);
    let (e1, q1) = entropy_pair(upper, p);
    sigma * (e1 - e0) - (q1 - q0)
}

/// Nonnegative tensor-product cubic B-spline bump.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bump {
    pub cx: f64,
    pub cy: f64,
    /// Half-widths of the support.
    pub rx: f64,
    pub ry: f64,
}

fn cubic_bspline(s: f64) -> f64 {
    let t = 2.0 * s.abs();
    if t >= 2.0 {
        0.0
    } else if t >= 1.0 {
        (2.0 - t).powi(3) / 6.0
    } else {
        (4.0 - 6.0 * t * t + 3.0 * t * t * t) / 6.0
    }
}

impl Bump {
    pub fn value(&self, x: f64, y: f64) -> f64 {
        cubic_bspline((x - self.cx) / self.rx) * cubic_bspline((y - self.cy) / self.ry)
    }
}

/// Basket of bumps inside the domain: a lattice over the upper part of the domain plus
/// bumps centred on the strongest logged shock.
pub fn bump_basket<T: Real>(sol: &ApproxSolution<T>, count: usize) -> Vec<Bump> {
    let m = &sol.mesh;
    let (x_max, dy, b0) = (to_f64(m.x_max), to_f64(m.dy), to_f64(m.b0));
    let rx = (0.1 * x_max).max(2.0 * to_f64(m.dx));
    let ry = (4.0 * dy).max(rx * 0.5);
    let depth = (2.0 * m.y_depth as f64 - 2.0) * dy;
    let mut out = Vec::with_capacity(count);
    let on_shock = count / 2;
    let log = sol.wave_log();
    if let Some(strongest) = log.iter().filter(|e| e.wave.kind.is_shock()).max_by(|a, b| {
        to_f64(a.wave.strength.abs()).total_cmp(&to_f64(b.wave.strength.abs()))
    }) {
        let sigma = to_f64(strongest.wave.speed_mid());
        for i in 0..on_shock {
            let cx = rx + (x_max - 2.0 * rx) * (i as f64 + 0.5) / on_shock as f64;
            let cy = sigma * cx;
            if cy + ry < b0 * (cx + rx) {
                out.push(Bump { cx, cy, rx, ry });
            }
        }
    }
    let mut i = 0usize;
    while out.len() < count && i < 10 * count {
        let fx = ((i * 7) % 11) as f64 / 10.0;
        let fy = ((i * 3) % 13) as f64 / 12.0;
        let cx = rx + (x_max - 2.0 * rx) * fx;
        let cy = b0 * (cx + rx) - ry - fy * (depth * 0.5 - 2.0 * ry).max(0.0);
        out.push(Bump { cx, cy, rx, ry });
        i += 1;
    }
    out
}

/// Entropy residual `int int (eta phi_x + q phi_y)` for each bump, restricted to the fans
/// inside each column strip, where it reduces to the shock dissipation integrated along
/// every shock segment.
pub fn entropy_residuals<T: Real>(sol: &ApproxSolution<T>, bumps: &[Bump]) -> Result<Vec<f64>> {
    let p = &sol.params;
    if p.tau != T::zero() {
        return Err(Error::UnsupportedTau);
    }
    let m = &sol.mesh;
    let dx = to_f64(m.dx);
    let segments: Vec<(f64, f64, f64, f64)> = sol
        .wave_log()
        .into_iter()
        .filter(|e| e.wave.kind.is_shock())
        .map(|e| {
            let sigma = e.wave.speed_lo;
            let d = to_f64(shock_dissipation(&e.wave.left, &e.wave.right, sigma, p));
            let y0 = to_f64(m.fan_y(e.k, (-e.n) as usize));
            (to_f64(m.x(e.k)), y0, to_f64(sigma), d)
        })
        .collect();
    Ok(bumps
        .par_iter()
        .map(|b| {
            segments
                .iter()
                .filter(|(x0, _, _, _)| x0 + dx >= b.cx - b.rx && *x0 <= b.cx + b.rx)
                .map(|&(x0, y0, sigma, d)| d * gauss3(|x: f64| b.value(x, y0 + sigma * (x - x0)), x0, x0 + dx))
                .sum()
        })
        .collect())
}

/// Smallest entropy residual over the basket.
pub fn entropy_residual<T: Real>(sol: &ApproxSolution<T>, bumps: &[Bump]) -> Result<f64> {
    Ok(entropy_residuals(sol, bumps)?.into_iter().fold(f64::INFINITY, f64::min))
}
