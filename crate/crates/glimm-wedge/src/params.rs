//! Model constants and the physical/scaled maps of the hypersonic similarity law.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::{lit, Real};
use crate::state::FlowState;

fn default_rho_floor<T: Real>() -> T {
    lit(1e-8)
}

fn default_tol_root<T: Real>() -> T {
    lit(1e-12)
}

fn default_tol_quad<T: Real>() -> T {
    lit(1e-10)
}

/// Model constants of the scaled system together with numerical tolerances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Real + Deserialize<'de>"))]
pub struct GasParams<T = f64> {
    /// Adiabatic exponent, in `[1, 2]`.
    pub gamma: T,
    /// Similarity parameter `a = tau * M_inf`.
    pub a_inf: T,
    /// Slenderness parameter; `0` selects the small-disturbance limit system.
    pub tau: T,
    /// Scaled wedge slope (negative).
    pub b0: T,
    #[serde(default = "default_rho_floor")]
    pub rho_floor: T,
    #[serde(default = "default_tol_root")]
    pub tol_root: T,
    #[serde(default = "default_tol_quad")]
    pub tol_quad: T,
}

impl<T: Real> GasParams<T> {
    /// Parameters with default tolerances.
    pub fn new(gamma: T, a_inf: T, tau: T, b0: T) -> Self {
        GasParams {
            gamma,
            a_inf,
            tau,
            b0,
            rho_floor: default_rho_floor(),
            tol_root: default_tol_root(),
            tol_quad: default_tol_quad(),
        }
    }

    /// Same constants with a different slenderness.
    pub fn with_tau(self, tau: T) -> Self {
        GasParams { tau, ..self }
    }

    /// Same constants with a different wedge slope.
    pub fn with_b0(self, b0: T) -> Self {
        GasParams { b0, ..self }
    }

    /// Same constants with a different adiabatic exponent.
    pub fn with_gamma(self, gamma: T) -> Self {
        GasParams { gamma, ..self }
    }

    /// Checks the documented parameter ranges.
    pub fn validate(&self) -> Result<()> {
        let bad = |name, reason: &str| {
            Err(Error::InvalidParams {
                name,
                reason: reason.to_string(),
            })
        };
        let finite = [
            self.gamma,
            self.a_inf,
            self.tau,
            self.b0,
            self.rho_floor,
            self.tol_root,
            self.tol_quad,
        ]
        .iter()
        .all(|x| x.is_finite());
        if !finite {
            return bad("params", "all values must be finite");
        }
        if self.gamma < T::one() || self.gamma > lit(2.0) {
            return bad("gamma", "must lie in [1, 2]");
        }
        if self.a_inf <= T::zero() {
            return bad("a_inf", "must be positive");
        }
        if self.tau < T::zero() {
            return bad("tau", "must be non-negative");
        }
        if self.tau > T::zero() && self.a_inf <= self.tau {
            return bad("a_inf", "free stream must be supersonic (a_inf > tau)");
        }
        if self.b0 >= T::zero() {
            return bad("b0", "must be negative");
        }
        if self.rho_floor <= T::zero() {
            return bad("rho_floor", "must be positive");
        }
        if self.tol_root <= T::zero() {
            return bad("tol_root", "must be positive");
        }
        if self.tol_quad <= T::zero() {
            return bad("tol_quad", "must be positive");
        }
        Ok(())
    }

    /// `gamma - 1`.
    #[inline]
    pub fn gm1(&self) -> T {
        self.gamma - T::one()
    }

    /// `tau^2`.
    #[inline]
    pub fn tau2(&self) -> T {
        self.tau * self.tau
    }

    /// `gamma - 1 + tau^2`, the size of the deviation from the isothermal small-disturbance case.
    #[inline]
    pub fn nonlinearity(&self) -> T {
        self.gm1() + self.tau2()
    }

    /// Whether the logarithmic `gamma = 1` limits are in effect.
    #[inline]
    pub fn isothermal(&self) -> bool {
        self.gm1().abs() < lit(1e-10)
    }

    /// Whether the small-disturbance limit system (`tau = 0`) is selected.
    #[inline]
    pub fn limit_system(&self) -> bool {
        self.tau == T::zero()
    }
}

/// Physical description of a free stream past a wedge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalSetup<T = f64> {
    /// Free-stream Mach number, greater than one.
    pub mach_inf: T,
    /// Wedge half-angle in radians.
    pub theta_wedge: T,
    /// Free-stream speed.
    pub u_inf: T,
    /// Free-stream density.
    pub rho_inf: T,
}

impl<T: Real> PhysicalSetup<T> {
    /// Similarity parameter `K = M_inf * theta`.
    pub fn similarity_k(&self) -> T {
        self.mach_inf * self.theta_wedge
    }

    fn validate(&self) -> Result<()> {
        let bad = |name, reason: &str| {
            Err(Error::InvalidParams {
                name,
                reason: reason.to_string(),
            })
        };
        if !(self.mach_inf > T::one()) {
            return bad("mach_inf", "must exceed 1");
        }
        if !(self.theta_wedge > T::zero()) {
            return bad("theta_wedge", "must be positive");
        }
        if !(self.u_inf > T::zero()) {
            return bad("u_inf", "must be positive");
        }
        if !(self.rho_inf > T::zero()) {
            return bad("rho_inf", "must be positive");
        }
        Ok(())
    }
}

/// Scaled parameters of a physical setup at slenderness `tau`.
///
/// The wedge slope is identified as `b0 = -theta / tau`.
pub fn scaled_from_physical<T: Real>(setup: &PhysicalSetup<T>, gamma: T, tau: T) -> Result<GasParams<T>> {
    setup.validate()?;
    if !(tau > T::zero()) {
        return Err(Error::DegenerateScaling);
    }
    Ok(GasParams::new(gamma, tau * setup.mach_inf, tau, -setup.theta_wedge / tau))
}

/// Physical density and velocity components of a scaled state.
pub fn physical_fields<T: Real>(state: &FlowState<T>, u_bar: T, setup: &PhysicalSetup<T>, tau: T) -> (T, T, T) {
    let rho = setup.rho_inf * state.rho;
    let u = setup.u_inf * (T::one() + tau * tau * u_bar);
    let v = setup.u_inf * tau * state.v;
    (rho, u, v)
}

/// Scaled state of physical density and transverse velocity (inverse of [`physical_fields`]).
pub fn scaled_state<T: Real>(rho: T, v: T, setup: &PhysicalSetup<T>, tau: T) -> Result<FlowState<T>> {
    if !(tau > T::zero()) {
        return Err(Error::DegenerateScaling);
    }
    Ok(FlowState::new(rho / setup.rho_inf, v / (setup.u_inf * tau)))
}

/// A family of parameter sets sharing `(gamma, a_inf, b0)` with decreasing slenderness.
pub fn tau_family<T: Real>(a_inf: T, gamma: T, b0: T, taus: &[T]) -> Result<Vec<GasParams<T>>> {
    if taus.windows(2).any(|w| !(w[0] >= w[1])) {
        return Err(Error::UnsortedFamily);
    }
    Ok(taus
        .iter()
        .map(|&tau| GasParams::new(gamma, a_inf, tau, b0))
        .collect())
}
