//! Exact interior and boundary Riemann solvers and self-similar fan sampling.
//!
//! An interior fan reads, bottom to top, `left --2-wave-- middle --1-wave-- right`.
//! The interior problem is reduced to one monotone equation in `z2`: the middle state is
//! the 2-wave end of `left`, `z1` is then fixed by the `w_-` component of `right`, and the
//! remaining `w_+` mismatch is driven to zero.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{solve_monotone, RootFail, Search};
use crate::params::GasParams;
use crate::real::{lit, to_f64, Real};
use crate::state::{eigenvalues, invariants_of, sonic_factor, state_of_invariants, FlowState, InvariantPair};
use crate::waves::{shock_end, shock_with_strength, Family, Wave, WaveKind};

/// Two-wave solution of an interior Riemann problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiemannFan<T = f64> {
    pub left: FlowState<T>,
    pub middle: FlowState<T>,
    pub right: FlowState<T>,
    /// Family-2 wave between `left` and `middle`.
    pub wave2: Option<Wave<T>>,
    /// Family-1 wave between `middle` and `right`.
    pub wave1: Option<Wave<T>>,
    /// Strengths `(z1, z2)`.
    pub z: (T, T),
}

/// Single-wave solution of the boundary Riemann problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryFan<T = f64> {
    /// Incoming state below the wave.
    pub left: FlowState<T>,
    /// State adjacent to the wedge.
    pub top: FlowState<T>,
    pub wave2: Option<Wave<T>>,
    pub z2: T,
}

/// Either kind of fan, as stored per diamond.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Fan<T = f64> {
    Interior(RiemannFan<T>),
    Boundary(BoundaryFan<T>),
}

/// End of the wave of the given family and strength issued from `(u_l, w_l)`.
fn endpoint<T: Real>(z: T, family: Family, u_l: &FlowState<T>, w_l: &InvariantPair<T>, p: &GasParams<T>) -> Result<(FlowState<T>, InvariantPair<T>)> {
    if z == T::zero() {
        return Ok((*u_l, *w_l));
    }
    let shock = match family {
        Family::One => z > T::zero(),
        Family::Two => z < T::zero(),
    };
    if shock {
        let end = shock_with_strength(family, z, u_l, p)?;
        return Ok((end.state, end.inv));
    }
    let w = match family {
        Family::One => InvariantPair::new(w_l.w_minus - z, w_l.w_plus),
        Family::Two => InvariantPair::new(w_l.w_minus, w_l.w_plus - z),
    };
    Ok((state_of_invariants(&w, p)?, w))
}

/// Invariants reached by a wave of strength `z` of the given family from `omega_l`.
pub fn wave_endpoint<T: Real>(z: T, family: Family, omega_l: &InvariantPair<T>, p: &GasParams<T>) -> Result<InvariantPair<T>> {
    let u_l = state_of_invariants(omega_l, p)?;
    endpoint(z, family, &u_l, omega_l, p).map(|(_, w)| w)
}

fn make_wave<T: Real>(family: Family, z: T, left: FlowState<T>, right: FlowState<T>, p: &GasParams<T>) -> Result<Option<Wave<T>>> {
    match WaveKind::classify(family, z) {
        None => Ok(None),
        Some(kind) => Wave::between(kind, z, left, right, p).map(Some),
    }
}

/// Strength below which a wave between states with invariants `a` and `b` is rounding noise.
fn rounding_floor<T: Real>(a: &InvariantPair<T>, b: &InvariantPair<T>) -> T {
    lit::<T>(64.0) * T::epsilon() * (T::one() + a.w_minus.abs() + a.w_plus.abs() + b.w_minus.abs() + b.w_plus.abs())
}

fn snap<T: Real>(z: T, floor: T) -> T {
    if z.abs() <= floor {
        T::zero()
    } else {
        z
    }
}

/// Solves the interior Riemann problem between a lower state `u_l` and an upper state `u_r`.
///
/// Strengths at rounding level are reported as zero and produce no wave.
pub fn solve_interior<T: Real>(u_l: &FlowState<T>, u_r: &FlowState<T>, p: &GasParams<T>) -> Result<RiemannFan<T>> {
    let w_l = invariants_of(u_l, p)?;
    let w_r = invariants_of(u_r, p)?;
    let z1_lin = w_l.w_minus - w_r.w_minus;
    let z2_lin = w_l.w_plus - w_r.w_plus;
    let (z1, z2, middle) = if u_l == u_r {
        (T::zero(), T::zero(), *u_l)
    } else if z1_lin <= T::zero() && z2_lin >= T::zero() {
        let m = if z2_lin == T::zero() {
            *u_l
        } else if z1_lin == T::zero() {
            *u_r
        } else {
            state_of_invariants(&InvariantPair::new(w_l.w_minus, w_r.w_plus), p)?
        };
        (z1_lin, z2_lin, m)
    } else {
        let mismatch = |z2: T| -> Result<(T, T, FlowState<T>)> {
            let (m, w_m) = endpoint(z2, Family::Two, u_l, &w_l, p)?;
            let z1 = w_m.w_minus - w_r.w_minus;
            let (_, w_end) = endpoint(z1, Family::One, &m, &w_m, p)?;
            Ok((w_end.w_plus - w_r.w_plus, z1, m))
        };
        let scale = z1_lin.abs() + z2_lin.abs();
        let search = Search::new(z2_lin, scale * lit(0.25) + T::epsilon()).decreasing();
        let z2 = solve_monotone(|z| mismatch(z).ok().map(|r| r.0), search).map_err(|e| match e {
            RootFail::Edge(x) | RootFail::Bound(x) if x > z2_lin => Error::VacuumReached(format!(
                "interior problem ({}, {}) | ({}, {}) opens a vacuum",
                to_f64(u_l.rho),
                to_f64(u_l.v),
                to_f64(u_r.rho),
                to_f64(u_r.v)
            )),
            RootFail::Edge(_) | RootFail::Bound(_) | RootFail::Start => Error::RangeExceeded(format!(
                "interior problem ({}, {}) | ({}, {}) leaves the admissible region",
                to_f64(u_l.rho),
                to_f64(u_l.v),
                to_f64(u_r.rho),
                to_f64(u_r.v)
            )),
            RootFail::Stalled => Error::NoConvergence("interior Riemann problem"),
        })?;
        let (res, z1, m) = mismatch(z2)?;
        let tol = lit::<T>(1e-10) * (T::one() + w_l.w_plus.abs() + w_r.w_plus.abs());
        if !(res.abs() <= tol) {
            return Err(Error::NoConvergence("interior Riemann problem residual"));
        }
        (z1, z2, m)
    };
    let floor = rounding_floor(&w_l, &w_r);
    let (z1, z2) = (snap(z1, floor), snap(z2, floor));
    Ok(RiemannFan {
        left: *u_l,
        middle,
        right: *u_r,
        wave2: make_wave(Family::Two, z2, *u_l, middle, p)?,
        wave1: make_wave(Family::One, z1, middle, *u_r, p)?,
        z: (z1, z2),
    })
}

/// Boundary defect `v / sqrt(Q) - b0`, which vanishes exactly on the slip condition.
pub fn boundary_defect<T: Real>(s: &FlowState<T>, p: &GasParams<T>) -> Option<T> {
    let q = sonic_factor(s, p);
    if !(q > T::zero()) {
        return None;
    }
    Some(s.v / q.sqrt() - p.b0)
}

/// Jump `w_- - w_+` imposed by the slip condition.
pub fn boundary_invariant_gap<T: Real>(p: &GasParams<T>) -> T {
    let a = p.a_inf;
    if p.tau == T::zero() {
        lit::<T>(2.0) * a * p.b0
    } else {
        lit::<T>(2.0) * a * (p.tau * p.b0).atan() / p.tau
    }
}

/// Solves the boundary Riemann problem for the state `u_l` just below the wedge.
pub fn solve_boundary<T: Real>(u_l: &FlowState<T>, p: &GasParams<T>) -> Result<BoundaryFan<T>> {
    let w_l = invariants_of(u_l, p)?;
    let gap = boundary_invariant_gap(p);
    let z2_r = gap - (w_l.w_minus - w_l.w_plus);
    let (z2, top) = if z2_r >= T::zero() {
        if z2_r == T::zero() {
            (T::zero(), *u_l)
        } else {
            let top = state_of_invariants(&InvariantPair::new(w_l.w_minus, w_l.w_minus - gap), p)?;
            (z2_r, top)
        }
    } else {
        let c0 = (p.gm1() * lit(0.5) * u_l.rho.ln()).exp();
        let seed = (p.a_inf * (u_l.v - p.b0) / c0).min(lit(30.0));
        let f = |x: T| -> Option<T> {
            let end = shock_end(x.exp(), u_l, p).ok()?;
            boundary_defect(&end.state, p)
        };
        let search = Search::new(seed, seed * lit(0.2) + T::epsilon()).decreasing().lo(T::zero()).hi(lit(40.0));
        let x = solve_monotone(f, search).map_err(|e| match e {
            RootFail::Stalled => Error::NoConvergence("boundary Riemann problem"),
            _ => Error::RangeExceeded(format!(
                "no attached boundary shock for ({}, {}) and b0 = {}",
                to_f64(u_l.rho),
                to_f64(u_l.v),
                to_f64(p.b0)
            )),
        })?;
        let end = shock_end(x.exp(), u_l, p)?;
        (w_l.w_plus - end.inv.w_plus, end.state)
    };
    let z2 = snap(z2, rounding_floor(&w_l, &w_l));
    Ok(BoundaryFan {
        left: *u_l,
        top,
        wave2: make_wave(Family::Two, z2, *u_l, top, p)?,
        z2,
    })
}

/// State inside a rarefaction wave whose family eigenvalue equals `xi`.
fn inside_rarefaction<T: Real>(w: &Wave<T>, xi: T, p: &GasParams<T>) -> FlowState<T> {
    let (Ok(a), Ok(b)) = (invariants_of(&w.left, p), invariants_of(&w.right, p)) else {
        return w.left;
    };
    let family = w.kind.family();
    let at = |s: T| -> Option<(FlowState<T>, T)> {
        let inv = InvariantPair::new(a.w_minus + s * (b.w_minus - a.w_minus), a.w_plus + s * (b.w_plus - a.w_plus));
        let st = state_of_invariants(&inv, p).ok()?;
        let (lm, lp) = eigenvalues(&st, p).ok()?;
        Some((st, if family == Family::One { lp } else { lm }))
    };
    let width = w.speed_hi - w.speed_lo;
    let s0 = if width > T::zero() { (xi - w.speed_lo) / width } else { lit(0.5) };
    let search = Search::new(s0.max(T::zero()).min(T::one()), lit(0.05)).lo(T::zero()).hi(T::one());
    match solve_monotone(|s| at(s).map(|(_, l)| l - xi), search) {
        Ok(s) => at(s).map(|(st, _)| st).unwrap_or(w.left),
        Err(RootFail::Bound(s)) if s <= T::zero() => w.left,
        Err(_) => w.right,
    }
}

/// Samples a wave region: `None` if `xi` lies above the wave.
fn sample_wave<T: Real>(w: &Wave<T>, xi: T, p: &GasParams<T>) -> Option<FlowState<T>> {
    if xi < w.speed_lo {
        Some(w.left)
    } else if w.kind.is_shock() || xi >= w.speed_hi {
        None
    } else {
        Some(inside_rarefaction(w, xi, p))
    }
}

impl<T: Real> RiemannFan<T> {
    /// State at slope `xi = dy/dx` measured from the fan origin.
    pub fn sample(&self, xi: T, p: &GasParams<T>) -> FlowState<T> {
        if let Some(w) = &self.wave2 {
            if let Some(s) = sample_wave(w, xi, p) {
                return s;
            }
        }
        match &self.wave1 {
            Some(w) => sample_wave(w, xi, p).map(|s| if xi < w.speed_lo { self.middle } else { s }).unwrap_or(self.right),
            None => self.right,
        }
    }

    /// Waves bottom to top.
    pub fn waves(&self) -> impl Iterator<Item = &Wave<T>> {
        self.wave2.iter().chain(self.wave1.iter())
    }

    /// `max |lambda|`-type bound: largest absolute wave slope in the fan.
    pub fn max_speed(&self) -> T {
        self.waves().fold(T::zero(), |m, w| m.max(w.speed_lo.abs()).max(w.speed_hi.abs()))
    }
}

impl<T: Real> BoundaryFan<T> {
    /// State at slope `xi = dy/dx` measured from the fan origin on the wedge.
    pub fn sample(&self, xi: T, p: &GasParams<T>) -> FlowState<T> {
        self.wave2.as_ref().and_then(|w| sample_wave(w, xi, p)).unwrap_or(self.top)
    }

    pub fn waves(&self) -> impl Iterator<Item = &Wave<T>> {
        self.wave2.iter()
    }

    pub fn max_speed(&self) -> T {
        self.waves().fold(T::zero(), |m, w| m.max(w.speed_lo.abs()).max(w.speed_hi.abs()))
    }
}

impl<T: Real> Fan<T> {
    pub fn sample(&self, xi: T, p: &GasParams<T>) -> FlowState<T> {
        match self {
            Fan::Interior(f) => f.sample(xi, p),
            Fan::Boundary(f) => f.sample(xi, p),
        }
    }

    pub fn waves(&self) -> Vec<Wave<T>> {
        match self {
            Fan::Interior(f) => f.waves().copied().collect(),
            Fan::Boundary(f) => f.waves().copied().collect(),
        }
    }

    pub fn max_speed(&self) -> T {
        match self {
            Fan::Interior(f) => f.max_speed(),
            Fan::Boundary(f) => f.max_speed(),
        }
    }

    /// Lowest state of the fan.
    pub fn bottom(&self) -> FlowState<T> {
        match self {
            Fan::Interior(f) => f.left,
            Fan::Boundary(f) => f.left,
        }
    }

    /// Highest state of the fan.
    pub fn top(&self) -> FlowState<T> {
        match self {
            Fan::Interior(f) => f.right,
            Fan::Boundary(f) => f.top,
        }
    }
}
