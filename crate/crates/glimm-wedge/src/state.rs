//! Flow states, the Bernoulli closure, characteristic speeds and the Riemann-invariant chart.
//!
//! For `tau > 0` the invariants are the scaled Prandtl-Meyer combinations
//! `w_- = (a/tau)(theta - dnu)` and `w_+ = (a/tau)(-theta - dnu)`, where `theta` is the
//! flow angle and `dnu = nu(M) - nu(M_inf)`. They are normalised to vanish at the free
//! stream `(1, 0)` and reduce to the closed-form `tau = 0` invariants as `tau -> 0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{adaptive_simpson, solve_monotone, RootFail, Search};
use crate::params::GasParams;
use crate::real::{lit, powm1_over, to_f64, Real};

/// Scaled density and transverse velocity.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FlowState<T = f64> {
    pub rho: T,
    pub v: T,
}

impl<T: Real> FlowState<T> {
    pub fn new(rho: T, v: T) -> Self {
        FlowState { rho, v }
    }

    /// `|d rho| + |d v|`.
    pub fn l1_dist(&self, other: &Self) -> T {
        (self.rho - other.rho).abs() + (self.v - other.v).abs()
    }
}

/// Riemann-invariant coordinates `(w_-, w_+)` of a state.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct InvariantPair<T = f64> {
    pub w_minus: T,
    pub w_plus: T,
}

impl<T: Real> InvariantPair<T> {
    pub fn new(w_minus: T, w_plus: T) -> Self {
        InvariantPair { w_minus, w_plus }
    }

    /// Max-norm distance.
    pub fn dist(&self, other: &Self) -> T {
        (self.w_minus - other.w_minus)
            .abs()
            .max((self.w_plus - other.w_plus).abs())
    }
}

/// Conserved quantities `W` and fluxes `F` of the system `W_x + F_y = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConservedFlux<T = f64> {
    pub w: [T; 2],
    pub f: [T; 2],
}

/// Path used when integrating the invariant gradients from the free stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadPath {
    /// `(1, 0) -> (rho, 0) -> (rho, v)`.
    DensityFirst,
    /// `(1, 0) -> (1, v) -> (rho, v)`.
    VelocityFirst,
}

fn sonic_err<T: Real>(what: &str, s: &FlowState<T>) -> Error {
    Error::SonicDefectExceeded(format!(
        "{what} at rho = {}, v = {}",
        to_f64(s.rho),
        to_f64(s.v)
    ))
}

/// `(rho^(gamma-1) - 1)/(gamma-1)`, logarithmic at `gamma = 1`.
#[inline]
pub(crate) fn enthalpy_excess<T: Real>(rho: T, p: &GasParams<T>) -> T {
    powm1_over(rho.ln(), p.gm1())
}

/// Bernoulli quantity `t = 2(rho^(gamma-1) - 1)/((gamma-1) a^2) + v^2`.
pub fn bernoulli_t<T: Real>(s: &FlowState<T>, p: &GasParams<T>) -> T {
    lit::<T>(2.0) * enthalpy_excess(s.rho, p) / (p.a_inf * p.a_inf) + s.v * s.v
}

/// `1 - t tau^2`, the squared scaled longitudinal speed factor `(1 + tau^2 u)^2`.
pub fn sonic_factor<T: Real>(s: &FlowState<T>, p: &GasParams<T>) -> T {
    T::one() - bernoulli_t(s, p) * p.tau2()
}

/// Scaled longitudinal perturbation `u = (sqrt(1 - t tau^2) - 1)/tau^2` (`-t/2` at `tau = 0`).
pub fn bernoulli_u<T: Real>(s: &FlowState<T>, p: &GasParams<T>) -> Result<T> {
    let t = bernoulli_t(s, p);
    let q = T::one() - t * p.tau2();
    if !(q > T::zero()) {
        return Err(sonic_err("1 - t tau^2 <= 0", s));
    }
    Ok(-t / (T::one() + q.sqrt()))
}

/// Characteristic speeds `(lambda_-, lambda_+)` as slopes `dy/dx`.
pub fn eigenvalues<T: Real>(s: &FlowState<T>, p: &GasParams<T>) -> Result<(T, T)> {
    if !(s.rho > T::zero()) {
        return Err(Error::VacuumReached(format!("rho = {}", to_f64(s.rho))));
    }
    let a2 = p.a_inf * p.a_inf;
    let t = bernoulli_t(s, p);
    let c2 = (p.gm1() * s.rho.ln()).exp() / a2;
    let tau2 = p.tau2();
    let q = T::one() - t * tau2;
    let radicand = T::one() - tau2 * (t - s.v * s.v + c2);
    let denom = T::one() - tau2 * (t + c2);
    if !(q > T::zero() && radicand > T::zero() && denom > T::zero()) {
        return Err(sonic_err("characteristic speeds undefined", s));
    }
    let base = s.v * q.sqrt();
    let spread = c2.sqrt() * radicand.sqrt();
    Ok(((base - spread) / denom, (base + spread) / denom))
}

/// Conserved vector `W = (rho(1 + tau^2 u), v)` and flux `F = (rho v, -u)`.
pub fn conserved_and_flux<T: Real>(s: &FlowState<T>, p: &GasParams<T>) -> Result<ConservedFlux<T>> {
    let u = bernoulli_u(s, p)?;
    Ok(ConservedFlux {
        w: [s.rho * (T::one() + p.tau2() * u), s.v],
        f: [s.rho * s.v, -u],
    })
}

/// `2(rho^((gamma-1)/2) - 1)/(gamma-1)`, the density part of the `tau = 0` invariants.
#[inline]
fn half_invariant<T: Real>(rho: T, p: &GasParams<T>) -> T {
    powm1_over(rho.ln(), p.gm1() * lit(0.5))
}

/// Local Mach data `(M^2, M_inf^2)` of the density `rho` (only meaningful for `tau > 0`).
fn mach2<T: Real>(rho: T, p: &GasParams<T>) -> (T, T) {
    let m_inf2 = p.a_inf * p.a_inf / p.tau2();
    let ln_rho = rho.ln();
    let e = (-p.gm1() * ln_rho).exp_m1();
    let b = powm1_over(ln_rho, -p.gm1());
    (m_inf2 + e * m_inf2 - lit::<T>(2.0) * b, m_inf2)
}

/// `nu(M) - nu(M_inf)` for the Prandtl-Meyer function, or `None` if subsonic.
fn pm_shift<T: Real>(rho: T, p: &GasParams<T>) -> Option<T> {
    let (m2, m_inf2) = mach2(rho, p);
    if !(m2 > T::one()) || !(m_inf2 > T::one()) {
        return None;
    }
    let sm = (m2 - T::one()).sqrt();
    let si = (m_inf2 - T::one()).sqrt();
    let d = (m2 - m_inf2) / (sm + si);
    let prod = sm * si;
    let outer = (d / (T::one() + prod)).atan();
    if p.isothermal() {
        Some(d - outer)
    } else {
        let k2 = (p.gamma + T::one()) / p.gm1();
        let k = k2.sqrt();
        Some(k * ((d / k) / (T::one() + prod / k2)).atan() - outer)
    }
}

/// Supremum of `nu(M) - nu(M_inf)` over all densities (reached in the vacuum limit).
fn pm_shift_max<T: Real>(p: &GasParams<T>) -> T {
    if p.isothermal() {
        return T::infinity();
    }
    let m_inf2 = p.a_inf * p.a_inf / p.tau2();
    let si = (m_inf2 - T::one()).sqrt();
    let k = ((p.gamma + T::one()) / p.gm1()).sqrt();
    let nu_inf = k * (si / k).atan() - si.atan();
    (k - T::one()) * T::FRAC_PI_2() - nu_inf
}

fn flow_angle<T: Real>(s: &FlowState<T>, p: &GasParams<T>) -> Result<T> {
    let q = sonic_factor(s, p);
    if !(q > T::zero()) {
        return Err(sonic_err("1 - t tau^2 <= 0", s));
    }
    Ok((p.tau * s.v).atan2(q.sqrt()))
}

/// Riemann invariants of a state.
pub fn invariants_of<T: Real>(s: &FlowState<T>, p: &GasParams<T>) -> Result<InvariantPair<T>> {
    if !(s.rho > T::zero()) {
        return Err(Error::VacuumReached(format!("rho = {}", to_f64(s.rho))));
    }
    if p.limit_system() {
        let h = half_invariant(s.rho, p);
        let av = p.a_inf * s.v;
        return Ok(InvariantPair::new(av + h, -av + h));
    }
    let theta = flow_angle(s, p)?;
    let dnu = pm_shift(s.rho, p).ok_or_else(|| sonic_err("local Mach number <= 1", s))?;
    let scale = p.a_inf / p.tau;
    Ok(InvariantPair::new(scale * (theta - dnu), scale * (-theta - dnu)))
}

/// Inverse of [`invariants_of`].
pub fn state_of_invariants<T: Real>(w: &InvariantPair<T>, p: &GasParams<T>) -> Result<FlowState<T>> {
    let sum = w.w_minus + w.w_plus;
    let vacuum = || {
        Error::VacuumReached(format!(
            "invariants ({}, {}) imply rho <= {}",
            to_f64(w.w_minus),
            to_f64(w.w_plus),
            to_f64(p.rho_floor)
        ))
    };
    if !(sum.is_finite() && (w.w_minus - w.w_plus).is_finite()) {
        return Err(Error::RangeExceeded("non-finite invariants".into()));
    }
    if p.limit_system() {
        let ln_rho = if p.isothermal() {
            sum * lit(0.5)
        } else {
            let y = p.gm1() * sum * lit(0.25);
            if !(y > -T::one()) {
                return Err(vacuum());
            }
            lit::<T>(2.0) * y.ln_1p() / p.gm1()
        };
        let rho = ln_rho.exp();
        if !(rho > p.rho_floor) {
            return Err(vacuum());
        }
        return Ok(FlowState::new(rho, (w.w_minus - w.w_plus) / (lit::<T>(2.0) * p.a_inf)));
    }
    let k = p.tau / (lit::<T>(2.0) * p.a_inf);
    let theta = k * (w.w_minus - w.w_plus);
    let target = -k * sum;
    if !(theta.abs() < T::FRAC_PI_2()) {
        return Err(Error::RangeExceeded(format!("flow angle {} beyond pi/2", to_f64(theta))));
    }
    if !p.isothermal() && !(target < pm_shift_max(p)) {
        return Err(vacuum());
    }
    let ln_floor = p.rho_floor.ln();
    let seed = {
        let y = p.gm1() * sum * lit(0.25);
        if p.isothermal() {
            sum * lit(0.5)
        } else if y > lit(-0.9) {
            lit::<T>(2.0) * y.ln_1p() / p.gm1()
        } else {
            T::zero()
        }
    };
    let seed = seed.max(ln_floor + T::one()).min(lit(50.0));
    let f = |x: T| pm_shift(x.exp(), p).map(|d| d - target);
    let ln_rho = match solve_monotone(f, Search::new(seed, lit(0.05)).decreasing().lo(ln_floor)) {
        Ok(x) => x,
        Err(RootFail::Bound(_)) => return Err(vacuum()),
        Err(RootFail::Edge(_)) => {
            return Err(Error::SonicDefectExceeded(format!(
                "invariants ({}, {}) imply a subsonic state",
                to_f64(w.w_minus),
                to_f64(w.w_plus)
            )))
        }
        Err(_) => return Err(Error::NoConvergence("invariant inversion")),
    };
    let rho = ln_rho.exp();
    if !(rho > p.rho_floor) {
        return Err(vacuum());
    }
    let g = T::one() - lit::<T>(2.0) * enthalpy_excess(rho, p) * p.tau2() / (p.a_inf * p.a_inf);
    if !(g > T::zero()) {
        return Err(sonic_err("speed bound exceeded", &FlowState::new(rho, T::zero())));
    }
    Ok(FlowState::new(rho, g.sqrt() * theta.sin() / p.tau))
}

/// Partial derivatives `d(u)/d(rho)` and `d(u)/d(v)` of the Bernoulli closure.
pub fn bernoulli_u_gradient<T: Real>(s: &FlowState<T>, p: &GasParams<T>) -> Result<(T, T)> {
    let q = sonic_factor(s, p);
    if !(q > T::zero()) {
        return Err(sonic_err("1 - t tau^2 <= 0", s));
    }
    let sq = q.sqrt();
    let rho_gm2 = ((p.gamma - lit(2.0)) * s.rho.ln()).exp();
    Ok((-rho_gm2 / (p.a_inf * p.a_inf * sq), -s.v / sq))
}

/// Right eigenvectors `(r_-, r_+)` as `(-(lambda + du/dv), du/drho)`.
pub fn eigenvectors<T: Real>(s: &FlowState<T>, p: &GasParams<T>) -> Result<([T; 2], [T; 2])> {
    let (lm, lp) = eigenvalues(s, p)?;
    let (du_rho, du_v) = bernoulli_u_gradient(s, p)?;
    Ok(([-(lm + du_v), du_rho], [-(lp + du_v), du_rho]))
}

/// Gradients `(grad w_-, grad w_+)` with respect to `(rho, v)`.
pub fn invariant_gradients<T: Real>(s: &FlowState<T>, p: &GasParams<T>) -> Result<([T; 2], [T; 2])> {
    if !(s.rho > T::zero()) {
        return Err(Error::VacuumReached(format!("rho = {}", to_f64(s.rho))));
    }
    let a = p.a_inf;
    if p.limit_system() {
        let d_rho = ((p.gamma - lit(3.0)) * lit(0.5) * s.rho.ln()).exp();
        return Ok(([d_rho, a], [d_rho, -a]));
    }
    let tau = p.tau;
    let tau2 = p.tau2();
    let q = sonic_factor(s, p);
    if !(q > T::zero()) {
        return Err(sonic_err("1 - t tau^2 <= 0", s));
    }
    let sq = q.sqrt();
    let pv = tau * s.v;
    let g = pv * pv + q;
    let rho_gm2 = ((p.gamma - lit(2.0)) * s.rho.ln()).exp();
    let dq_rho = -tau2 * rho_gm2 / (a * a * sq);
    let dq_v = -tau2 * s.v / sq;
    let dth_rho = -pv * dq_rho / g;
    let dth_v = (sq * tau - pv * dq_v) / g;
    let (m2, _) = mach2(s.rho, p);
    if !(m2 > T::one()) {
        return Err(sonic_err("local Mach number <= 1", s));
    }
    let m = m2.sqrt();
    let dnu_dm = (m2 - T::one()).sqrt() / (m * (T::one() + p.gm1() * m2 * lit(0.5)));
    let rho_mg = (-p.gamma * s.rho.ln()).exp();
    let dm2_rho = -rho_mg * (p.gm1() * a * a / tau2 + lit(2.0));
    let dnu_rho = dnu_dm * dm2_rho / (lit::<T>(2.0) * m);
    let k = a / tau;
    Ok((
        [k * (dth_rho - dnu_rho), k * dth_v],
        [k * (-dth_rho - dnu_rho), -k * dth_v],
    ))
}

/// Invariants obtained by integrating [`invariant_gradients`] from the free stream `(1, 0)`.
///
/// Agreement with [`invariants_of`] along both paths certifies that the gradient field
/// is exact and consistent with the closed form.
pub fn invariants_by_quadrature<T: Real>(s: &FlowState<T>, p: &GasParams<T>, path: QuadPath) -> Result<InvariantPair<T>> {
    let corner = match path {
        QuadPath::DensityFirst => FlowState::new(s.rho, T::zero()),
        QuadPath::VelocityFirst => FlowState::new(T::one(), s.v),
    };
    let start = FlowState::new(T::one(), T::zero());
    for point in [start, corner, *s] {
        eigenvalues(&point, p)?;
    }
    let tol = p.tol_quad * lit(0.01);
    let mut out = [T::zero(); 2];
    for (idx, slot) in out.iter_mut().enumerate() {
        let pick = |g: ([T; 2], [T; 2])| if idx == 0 { g.0 } else { g.1 };
        let mut failed = false;
        let mut rho_leg = |v: T, x: T| {
            let rho = x.exp();
            match invariant_gradients(&FlowState::new(rho, v), p) {
                Ok(g) => pick(g)[0] * rho,
                Err(_) => {
                    failed = true;
                    T::zero()
                }
            }
        };
        let (v_rho_leg, rho_v_leg) = match path {
            QuadPath::DensityFirst => (T::zero(), s.rho),
            QuadPath::VelocityFirst => (s.v, T::one()),
        };
        let mut f_rho = |x: T| rho_leg(v_rho_leg, x);
        let i_rho = adaptive_simpson(&mut f_rho, T::zero(), s.rho.ln(), tol);
        let mut f_v = |v: T| match invariant_gradients(&FlowState::new(rho_v_leg, v), p) {
            Ok(g) => pick(g)[1],
            Err(_) => T::nan(),
        };
        let i_v = adaptive_simpson(&mut f_v, T::zero(), s.v, tol);
        if failed || !i_v.is_finite() {
            return Err(sonic_err("quadrature path leaves the chart", s));
        }
        *slot = i_rho + i_v;
    }
    Ok(InvariantPair::new(out[0], out[1]))
}
