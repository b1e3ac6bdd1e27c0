//! Elementary waves: Hugoniot locus, shock speeds, the shock-curve maps and rarefaction curves.
//!
//! Family 1 travels with `lambda_+`, family 2 with `lambda_-`. A wave always connects a
//! lower state `left` (smaller `y`) to an upper state `right`. Strengths are invariant
//! increments `z1 = w_-(left) - w_-(right)` and `z2 = w_+(left) - w_+(right)`:
//! `z1 > 0` is a 1-shock, `z1 < 0` a 1-rarefaction, `z2 < 0` a 2-shock, `z2 > 0` a
//! 2-rarefaction.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{solve_monotone, RootFail, Search};
use crate::params::GasParams;
use crate::real::{lit, powm1_over, to_f64, Real};
use crate::state::{bernoulli_u, conserved_and_flux, eigenvalues, invariants_of, state_of_invariants, FlowState, InvariantPair};

/// Characteristic family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    /// `lambda_+`; holds `w_+` across rarefactions.
    One,
    /// `lambda_-`; holds `w_-` across rarefactions.
    Two,
}

/// Kind of an elementary wave.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WaveKind {
    S1,
    S2,
    R1,
    R2,
}

impl WaveKind {
    pub fn family(self) -> Family {
        match self {
            WaveKind::S1 | WaveKind::R1 => Family::One,
            WaveKind::S2 | WaveKind::R2 => Family::Two,
        }
    }

    pub fn is_shock(self) -> bool {
        matches!(self, WaveKind::S1 | WaveKind::S2)
    }

    /// Kind implied by the sign of a strength in the given family (`None` for zero).
    pub fn classify<T: Real>(family: Family, z: T) -> Option<WaveKind> {
        if z == T::zero() {
            return None;
        }
        Some(match (family, z > T::zero()) {
            (Family::One, true) => WaveKind::S1,
            (Family::One, false) => WaveKind::R1,
            (Family::Two, true) => WaveKind::R2,
            (Family::Two, false) => WaveKind::S2,
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            WaveKind::S1 => "S1",
            WaveKind::S2 => "S2",
            WaveKind::R1 => "R1",
            WaveKind::R2 => "R2",
        }
    }
}

impl std::fmt::Display for WaveKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One elementary wave with its bounding slopes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Wave<T = f64> {
    pub kind: WaveKind,
    /// Signed invariant increment (`z1` or `z2`).
    pub strength: T,
    pub left: FlowState<T>,
    pub right: FlowState<T>,
    pub speed_lo: T,
    pub speed_hi: T,
}

impl<T: Real> Wave<T> {
    /// Builds a shock or rarefaction between two states, computing its speeds.
    pub fn between(kind: WaveKind, strength: T, left: FlowState<T>, right: FlowState<T>, p: &GasParams<T>) -> Result<Self> {
        let pick = |st: &FlowState<T>| -> Result<T> {
            let (lm, lp) = eigenvalues(st, p)?;
            Ok(if kind.family() == Family::One { lp } else { lm })
        };
        let (lo, hi) = if left == right {
            let s = pick(&left)?;
            (s, s)
        } else if kind.is_shock() {
            let s = shock_speed(&left, &right, p)?;
            (s, s)
        } else {
            (pick(&left)?, pick(&right)?)
        };
        Ok(Wave {
            kind,
            strength,
            left,
            right,
            speed_lo: lo,
            speed_hi: hi,
        })
    }

    /// Mean slope, used to position the wave.
    pub fn speed_mid(&self) -> T {
        (self.speed_lo + self.speed_hi) * lit(0.5)
    }
}

/// A point on the Hugoniot locus of a base state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HugoniotPoint<T = f64> {
    pub alpha: T,
    pub v: T,
    pub sigma: T,
}

/// Closed-form downstream velocity of the `tau = 0` Hugoniot locus (entropy branch).
fn hugoniot_v_limit<T: Real>(alpha: T, u0: &FlowState<T>, p: &GasParams<T>) -> T {
    let ln_a = alpha.ln();
    let rho_term = (p.gm1() * u0.rho.ln()).exp();
    let sq = lit::<T>(2.0) * rho_term * (alpha - T::one()) * powm1_over(ln_a, p.gm1()) / (p.a_inf * p.a_inf * (alpha + T::one()));
    u0.v - sq.max(T::zero()).sqrt()
}

/// Hugoniot function `F(alpha, v; U0)`; `None` where the downstream state is not admissible.
pub fn hugoniot_function<T: Real>(alpha: T, v: T, u0: &FlowState<T>, p: &GasParams<T>) -> Option<T> {
    let u_base = bernoulli_u(u0, p).ok()?;
    let u_down = bernoulli_u(&FlowState::new(u0.rho * alpha, v), p).ok()?;
    let tau2 = p.tau2();
    Some(
        (alpha * v - u0.v) * (v - u0.v)
            - (alpha - T::one() + tau2 * (alpha * u_down - u_base)) * (u_base - u_down),
    )
}

/// Downstream transverse velocity on the entropy branch (`v < v0`) of the Hugoniot locus.
pub fn hugoniot_v<T: Real>(alpha: T, u0: &FlowState<T>, p: &GasParams<T>) -> Result<T> {
    if !(alpha > T::zero()) {
        return Err(Error::RangeExceeded(format!("density ratio {}", to_f64(alpha))));
    }
    if alpha == T::one() {
        return Ok(u0.v);
    }
    let seed = hugoniot_v_limit(alpha, u0, p);
    if p.limit_system() {
        return Ok(seed);
    }
    bernoulli_u(u0, p)?;
    let gap = u0.v - seed;
    let step = (gap * lit(0.05)).max(T::epsilon() * (T::one() + u0.v.abs()));
    let f = |v: T| hugoniot_function(alpha, v, u0, p);
    solve_monotone(f, Search::new(seed, step).decreasing().hi(u0.v)).map_err(|e| match e {
        RootFail::Edge(_) | RootFail::Start => Error::SonicDefectExceeded(format!(
            "Hugoniot locus of ({}, {}) at alpha = {} leaves the admissible region",
            to_f64(u0.rho),
            to_f64(u0.v),
            to_f64(alpha)
        )),
        _ => Error::NoConvergence("Hugoniot velocity"),
    })
}

/// Relative Rankine-Hugoniot residuals of both components for a given slope.
///
/// Each residual is scaled by the magnitudes of the terms entering it, so it measures
/// the defect in units of the rounding of the operands.
pub fn rh_residuals<T: Real>(u0: &FlowState<T>, u1: &FlowState<T>, sigma: T, p: &GasParams<T>) -> Result<[T; 2]> {
    let a = conserved_and_flux(u0, p)?;
    let b = conserved_and_flux(u1, p)?;
    let mut out = [T::zero(); 2];
    for (i, slot) in out.iter_mut().enumerate() {
        let lhs = sigma * (b.w[i] - a.w[i]);
        let rhs = b.f[i] - a.f[i];
        let scale = sigma.abs() * (b.w[i].abs() + a.w[i].abs()) + b.f[i].abs() + a.f[i].abs();
        *slot = if scale > T::zero() { (lhs - rhs).abs() / scale } else { T::zero() };
    }
    Ok(out)
}

/// Shock slope from the first jump condition, checked against the second.
pub fn shock_speed<T: Real>(u0: &FlowState<T>, u1: &FlowState<T>, p: &GasParams<T>) -> Result<T> {
    let a = conserved_and_flux(u0, p)?;
    let b = conserved_and_flux(u1, p)?;
    let dw = b.w[0] - a.w[0];
    let sigma = if dw != T::zero() {
        (b.f[0] - a.f[0]) / dw
    } else if b.w[1] != a.w[1] {
        (b.f[1] - a.f[1]) / (b.w[1] - a.w[1])
    } else {
        return Err(Error::InconsistentRh(0.0));
    };
    let res = rh_residuals(u0, u1, sigma, p)?;
    let bound = p.tol_root.max(lit::<T>(1e3) * T::epsilon()).sqrt();
    if !(res[1] <= bound) {
        return Err(Error::InconsistentRh(to_f64(res[1])));
    }
    Ok(sigma)
}

/// Hugoniot point with its shock slope.
pub fn hugoniot_point<T: Real>(alpha: T, u0: &FlowState<T>, p: &GasParams<T>) -> Result<HugoniotPoint<T>> {
    let v = hugoniot_v(alpha, u0, p)?;
    let sigma = shock_speed(u0, &FlowState::new(u0.rho * alpha, v), p)?;
    Ok(HugoniotPoint { alpha, v, sigma })
}

/// Downstream state of a shock together with its invariants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShockEnd<T = f64> {
    pub alpha: T,
    pub state: FlowState<T>,
    pub inv: InvariantPair<T>,
}

/// Shock end state on the Hugoniot locus with density ratio `alpha`.
pub fn shock_end<T: Real>(alpha: T, u0: &FlowState<T>, p: &GasParams<T>) -> Result<ShockEnd<T>> {
    let v = hugoniot_v(alpha, u0, p)?;
    let state = FlowState::new(u0.rho * alpha, v);
    Ok(ShockEnd {
        alpha,
        state,
        inv: invariants_of(&state, p)?,
    })
}

/// Shock of the given family whose leading invariant jump equals `strength`.
///
/// Family 1: `strength = w_-(U0) - w_-(U) > 0`. Family 2: `strength = w_+(U0) - w_+(U) < 0`.
pub fn shock_with_strength<T: Real>(family: Family, strength: T, u0: &FlowState<T>, p: &GasParams<T>) -> Result<ShockEnd<T>> {
    let w0 = invariants_of(u0, p)?;
    let ok = match family {
        Family::One => strength >= T::zero(),
        Family::Two => strength <= T::zero(),
    };
    if !ok {
        return Err(Error::RangeExceeded(format!(
            "shock strength {} has the wrong sign for family {family:?}",
            to_f64(strength)
        )));
    }
    if strength == T::zero() {
        return Ok(ShockEnd {
            alpha: T::one(),
            state: *u0,
            inv: w0,
        });
    }
    let c0 = lit::<T>(2.0) * (p.gm1() * lit(0.5) * u0.rho.ln()).exp();
    let seed = match family {
        Family::One => -(strength / c0),
        Family::Two => -strength / c0,
    };
    let seed = seed.max(lit(-30.0)).min(lit(30.0));
    let step = seed.abs() * lit(0.2) + T::epsilon();
    let ln_floor = (p.rho_floor / u0.rho).ln();
    let lead = |x: T| -> Option<T> {
        let end = shock_end(x.exp(), u0, p).ok()?;
        Some(match family {
            Family::One => w0.w_minus - end.inv.w_minus - strength,
            Family::Two => w0.w_plus - end.inv.w_plus - strength,
        })
    };
    let search = match family {
        Family::One => Search::new(seed, step).decreasing().hi(T::zero()).lo(ln_floor),
        Family::Two => Search::new(seed, step).decreasing().lo(T::zero()).hi(lit(40.0)),
    };
    let x = solve_monotone(lead, search).map_err(|e| match e {
        RootFail::Bound(_) if family == Family::One => Error::VacuumReached(format!(
            "1-shock of strength {} from rho = {}",
            to_f64(strength),
            to_f64(u0.rho)
        )),
        _ => Error::RangeExceeded(format!(
            "{family:?} shock of strength {} from ({}, {}) is not admissible",
            to_f64(strength),
            to_f64(u0.rho),
            to_f64(u0.v)
        )),
    })?;
    shock_end(x.exp(), u0, p)
}

/// Shock-curve map of family 1: `beta_+ = Phi1(beta_-)` for `beta_- >= 0`.
pub fn phi1<T: Real>(beta_minus: T, u0: &FlowState<T>, p: &GasParams<T>) -> Result<T> {
    let w0 = invariants_of(u0, p)?;
    let end = shock_with_strength(Family::One, beta_minus, u0, p)?;
    Ok(w0.w_plus - end.inv.w_plus)
}

/// Shock-curve map of family 2: `beta_- = Phi2(beta_+)` for `beta_+ <= 0`.
pub fn phi2<T: Real>(beta_plus: T, u0: &FlowState<T>, p: &GasParams<T>) -> Result<T> {
    let w0 = invariants_of(u0, p)?;
    let end = shock_with_strength(Family::Two, beta_plus, u0, p)?;
    Ok(w0.w_minus - end.inv.w_minus)
}

/// End state of a rarefaction of the given family and signed strength.
pub fn rarefaction_state<T: Real>(z: T, family: Family, u0: &FlowState<T>, p: &GasParams<T>) -> Result<FlowState<T>> {
    let w0 = invariants_of(u0, p)?;
    let w = match family {
        Family::One if z <= T::zero() => InvariantPair::new(w0.w_minus - z, w0.w_plus),
        Family::Two if z >= T::zero() => InvariantPair::new(w0.w_minus, w0.w_plus - z),
        _ => {
            return Err(Error::RangeExceeded(format!(
                "rarefaction strength {} has the wrong sign for family {family:?}",
                to_f64(z)
            )))
        }
    };
    if z == T::zero() {
        return Ok(*u0);
    }
    state_of_invariants(&w, p)
}

/// Lax entropy inequalities for a shock, with slack `tol_root`.
pub fn lax_check<T: Real>(wave: &Wave<T>, p: &GasParams<T>) -> bool {
    if !wave.kind.is_shock() || wave.strength == T::zero() || wave.left == wave.right {
        return false;
    }
    let (Ok(sigma), Ok(lo), Ok(hi)) = (
        shock_speed(&wave.left, &wave.right, p),
        eigenvalues(&wave.left, p),
        eigenvalues(&wave.right, p),
    ) else {
        return false;
    };
    let (up, down) = match wave.kind.family() {
        Family::One => (lo.1, hi.1),
        Family::Two => (lo.0, hi.0),
    };
    let tol = p.tol_root;
    up - sigma > -tol && sigma - down > -tol && up > down
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gp(gamma: f64, tau: f64) -> GasParams {
        GasParams::new(gamma, 1.0, tau, -0.5)
    }

    #[test]
    fn hugoniot_examples() {
        let u0 = FlowState::new(1.0, 0.0);
        assert_eq!(hugoniot_v(1.0, &u0, &gp(1.4, 0.05)).unwrap(), 0.0);
        let v = hugoniot_v(2.0, &u0, &gp(2.0, 0.0)).unwrap();
        assert!((v + (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!((v + 0.816_496_6).abs() < 1e-7);
        let v = hugoniot_v(2.0, &u0, &gp(1.0, 0.0)).unwrap();
        assert!((v + (2.0 / 3.0 * 2f64.ln()).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn shock_speed_example() {
        let p = gp(2.0, 0.0);
        let u0 = FlowState::new(1.0, 0.0);
        let u1 = FlowState::new(2.0, -(2.0f64 / 3.0).sqrt());
        let s = shock_speed(&u0, &u1, &p).unwrap();
        assert!((s + 1.632_993_2).abs() < 1e-7);
        assert!((s * u1.v - 4.0 / 3.0).abs() < 1e-12);
        assert!(shock_speed(&u0, &FlowState::new(2.0, 0.3), &p).is_err());
    }

    #[test]
    fn weak_shock_speed_tends_to_characteristic() {
        let p = gp(1.4, 0.05);
        let u0 = FlowState::new(1.2, 0.1);
        let (lm, _) = eigenvalues(&u0, &p).unwrap();
        let h = hugoniot_point(1.0 + 1e-6, &u0, &p).unwrap();
        assert!((h.sigma - lm).abs() < 1e-5);
    }

    #[test]
    fn tau_positive_hugoniot_satisfies_jump_conditions() {
        for &tau in &[1e-3, 1e-2, 0.05] {
            let p = gp(1.3, tau);
            let u0 = FlowState::new(0.8, -0.4);
            for &alpha in &[0.3, 0.9, 1.1, 3.0] {
                let h = hugoniot_point(alpha, &u0, &p).unwrap();
                assert!(h.v < u0.v);
                let r = rh_residuals(&u0, &FlowState::new(u0.rho * alpha, h.v), h.sigma, &p).unwrap();
                assert!(r[0] < 1e-12 && r[1] < 1e-12, "{r:?}");
            }
        }
    }

    #[test]
    fn shock_maps_shape_and_parametric_form() {
        let g = 1.4;
        let p = gp(g, 0.0);
        let u0 = FlowState::new(1.3, 0.2);
        let w0 = invariants_of(&u0, &p).unwrap();
        let k = (2.0 / (g - 1.0)).sqrt();
        let r0h = u0.rho.powf((g - 1.0) / 2.0);
        for &alpha in &[0.2, 0.5, 0.9] {
            let end = shock_end(alpha, &u0, &p).unwrap();
            let root = ((1.0 - alpha) * (1.0 - alpha.powf(g - 1.0)) / (alpha + 1.0)).sqrt();
            let tail = k * (1.0 - alpha.powf((g - 1.0) / 2.0));
            let ds = k * r0h * (-root + tail);
            let dr = k * r0h * (root + tail);
            assert!((w0.w_plus - end.inv.w_plus - ds).abs() < 1e-13);
            assert!((w0.w_minus - end.inv.w_minus - dr).abs() < 1e-13);
        }
        let f1: Vec<f64> = (0..40).map(|i| phi1(0.02 * i as f64, &u0, &p).unwrap()).collect();
        let f2: Vec<f64> = (0..40).map(|i| phi2(-0.02 * i as f64, &u0, &p).unwrap()).collect();
        for w in f1.windows(3) {
            let s = (w[1] - w[0]) / 0.02;
            assert!(s > 0.0 && s < 1.0 || w[0] == 0.0 && s >= 0.0 && s < 1.0);
            assert!(w[2] - 2.0 * w[1] + w[0] > -1e-13);
        }
        for w in f2.windows(3) {
            // Slope with respect to beta_+ (grid decreasing by 0.02).
            let s = (w[0] - w[1]) / 0.02;
            assert!((0.0..1.0).contains(&s));
            assert!(w[2] - 2.0 * w[1] + w[0] < 1e-13);
        }
    }

    #[test]
    fn isothermal_shock_relation() {
        let p = gp(1.0, 0.0);
        let u0 = FlowState::new(0.7, -0.3);
        let w0 = invariants_of(&u0, &p).unwrap();
        for &alpha in &[0.1, 0.6, 1.7, 6.0] {
            let end = shock_end(alpha, &u0, &p).unwrap();
            let dr = w0.w_minus - end.inv.w_minus;
            let ds = w0.w_plus - end.inv.w_plus;
            let x = dr + ds;
            let e = (-0.5 * x).exp();
            let rhs = 2.0 * ((1.0 - e) / (1.0 + e) * x).sqrt();
            let lhs = dr - ds;
            assert!((lhs - rhs).abs() < 1e-8, "{lhs} {rhs}");
        }
    }

    #[test]
    fn rarefaction_example() {
        let p = gp(2.0, 0.0);
        let s = rarefaction_state(-1.0, Family::One, &FlowState::new(1.0, 0.0), &p).unwrap();
        assert!((s.rho - 1.5625).abs() < 1e-14 && (s.v - 0.5).abs() < 1e-15);
        let u0 = FlowState::new(1.4, 0.3);
        let p = gp(1.4, 0.05);
        let s = rarefaction_state(0.3, Family::Two, &u0, &p).unwrap();
        let (a, b) = (invariants_of(&u0, &p).unwrap(), invariants_of(&s, &p).unwrap());
        assert!((a.w_minus - b.w_minus).abs() < 1e-12);
        assert_eq!(rarefaction_state(0.0, Family::One, &u0, &p).unwrap(), u0);
        assert!(rarefaction_state(0.1, Family::One, &u0, &p).is_err());
    }

    #[test]
    fn lax_examples() {
        let p = gp(2.0, 0.0);
        let l = FlowState::new(1.0, 0.0);
        let r = FlowState::new(2.0, -(2.0f64 / 3.0).sqrt());
        let w = Wave::between(WaveKind::S2, -0.1, l, r, &p).unwrap();
        assert!(lax_check(&w, &p));
        let rev = Wave { left: r, right: l, ..w };
        assert!(!lax_check(&rev, &p));
        let zero = Wave { strength: 0.0, right: l, ..w };
        assert!(!lax_check(&zero, &p));
    }
}
