//! Interaction-estimate probes: synthesize incoming wave configurations, solve the
//! outgoing Riemann problem, and collect the identities and fitted constants of the
//! local interaction estimates.
//!
//! Incoming configurations are listed bottom to top. Interior cases place two waves
//! `L --a-- M --b-- R` and solve the Riemann problem `(L, R)`; boundary cases place
//! `L --1-wave-- M --2-wave-- R` with `R` on the wedge (the slope `b0` is taken from `R`)
//! and solve the boundary problem of `L`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::GasParams;
use crate::riemann::{boundary_defect, solve_boundary, solve_interior, wave_endpoint};
use crate::state::{invariants_of, sonic_factor, state_of_invariants, FlowState, InvariantPair};
use crate::waves::{phi1, phi2, Family, WaveKind};

/// Density window of admissible sampled states.
pub const RHO_WINDOW: (f64, f64) = (0.2, 5.0);

/// Tolerance for the exact interaction identities.
pub const IDENTITY_TOL: f64 = 1e-10;

/// Probe cases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ProbeCase {
    /// Shift of `Phi1` between two S1 curves (limit system).
    L31,
    /// Shift of `Phi2` between two S2 curves (limit system).
    L32,
    /// Shift of `Phi1`, `tau > 0` allowed.
    L33,
    /// Shift of `Phi2`, `tau > 0` allowed.
    L34,
    /// Interior interaction, cases 1 to 8.
    L35(u8),
    /// Reflection of a 1-shock on the wedge.
    L36,
    /// Boundary interaction, cases 1 to 4.
    L37(u8),
}

impl ProbeCase {
    pub fn all() -> Vec<ProbeCase> {
        let mut v = vec![ProbeCase::L31, ProbeCase::L32, ProbeCase::L33, ProbeCase::L34];
        v.extend((1..=8).map(ProbeCase::L35));
        v.push(ProbeCase::L36);
        v.extend((1..=4).map(ProbeCase::L37));
        v
    }

    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParams {
            name: "case",
            reason: format!("unknown probe case `{s}`"),
        };
        let parts: Vec<&str> = s.trim().trim_start_matches(['L', 'l']).split('.').collect();
        let sub = |i: usize, max: u8| -> Result<u8> {
            let n: u8 = parts.get(i).ok_or_else(bad)?.parse().map_err(|_| bad())?;
            if (1..=max).contains(&n) && parts.len() == i + 1 {
                Ok(n)
            } else {
                Err(bad())
            }
        };
        match (parts.first(), parts.get(1)) {
            (Some(&"3"), Some(&"1")) if parts.len() == 2 => Ok(ProbeCase::L31),
            (Some(&"3"), Some(&"2")) if parts.len() == 2 => Ok(ProbeCase::L32),
            (Some(&"3"), Some(&"3")) if parts.len() == 2 => Ok(ProbeCase::L33),
            (Some(&"3"), Some(&"4")) if parts.len() == 2 => Ok(ProbeCase::L34),
            (Some(&"3"), Some(&"5")) => sub(2, 8).map(ProbeCase::L35),
            (Some(&"3"), Some(&"6")) if parts.len() == 2 => Ok(ProbeCase::L36),
            (Some(&"3"), Some(&"7")) => sub(2, 4).map(ProbeCase::L37),
            _ => Err(bad()),
        }
    }

    pub fn id(&self) -> String {
        match self {
            ProbeCase::L31 => "L3.1".into(),
            ProbeCase::L32 => "L3.2".into(),
            ProbeCase::L33 => "L3.3".into(),
            ProbeCase::L34 => "L3.4".into(),
            ProbeCase::L35(n) => format!("L3.5.{n}"),
            ProbeCase::L36 => "L3.6".into(),
            ProbeCase::L37(n) => format!("L3.7.{n}"),
        }
    }

    /// Whether the case is an exact identity.
    pub fn is_identity(&self) -> bool {
        matches!(self, ProbeCase::L35(2 | 3 | 6 | 8) | ProbeCase::L37(4))
    }

    /// Incoming wave kinds, bottom to top.
    pub fn incoming(&self) -> Option<[WaveKind; 2]> {
        use WaveKind::*;
        Some(match self {
            ProbeCase::L35(1) => [S1, S2],
            ProbeCase::L35(2) => [R1, S2],
            ProbeCase::L35(3) => [S2, S2],
            ProbeCase::L35(4) => [S2, R2],
            ProbeCase::L35(5) => [R2, S2],
            ProbeCase::L35(6) => [R1, R2],
            ProbeCase::L35(7) => [S1, R1],
            ProbeCase::L35(8) => [S1, S1],
            ProbeCase::L37(1) => [S1, S2],
            ProbeCase::L37(2) => [R1, S2],
            ProbeCase::L37(3) => [S1, R2],
            ProbeCase::L37(4) => [R1, R2],
            _ => return None,
        })
    }

    /// Outgoing kinds `(family 2, family 1)` for which the identity is stated (`None` = absent).
    fn identity_outgoing(&self) -> Option<(Option<WaveKind>, Option<WaveKind>)> {
        use WaveKind::*;
        match self {
            ProbeCase::L35(2) | ProbeCase::L35(3) => Some((Some(S2), Some(R1))),
            ProbeCase::L35(6) => Some((Some(R2), Some(R1))),
            ProbeCase::L35(8) => Some((Some(R2), Some(S1))),
            ProbeCase::L37(4) => Some((Some(R2), None)),
            _ => None,
        }
    }
}

impl std::fmt::Display for ProbeCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.id())
    }
}

/// Sampling ranges for incoming configurations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sampler {
    pub seed: u64,
    /// Log-uniform range of the base density.
    pub rho: (f64, f64),
    /// Uniform range of the base velocity.
    pub v: (f64, f64),
    /// Log-uniform range of the magnitudes of incoming strengths.
    pub strength: (f64, f64),
}

impl Default for Sampler {
    fn default() -> Self {
        Sampler {
            seed: 2024,
            rho: (0.4, 2.5),
            v: (-0.5, 0.5),
            strength: (1e-3, 0.5),
        }
    }
}

impl Sampler {
    /// Deterministic draws, four uniforms per sample.
    pub fn draws(&self, n: usize) -> Vec<[f64; 4]> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        (0..n).map(|_| [rng.random(), rng.random(), rng.random(), rng.random()]).collect()
    }

    fn log_range((lo, hi): (f64, f64), u: f64) -> f64 {
        (lo.ln() + (hi.ln() - lo.ln()) * u).exp()
    }

    fn base(&self, d: &[f64; 4]) -> FlowState {
        FlowState::new(Self::log_range(self.rho, d[0]), self.v.0 + (self.v.1 - self.v.0) * d[1])
    }

    fn size(&self, u: f64) -> f64 {
        Self::log_range(self.strength, u)
    }
}

/// Aggregated outcome of one probe run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub case: String,
    pub gamma: f64,
    pub tau: f64,
    pub requested: usize,
    /// Samples whose states stayed in the density window and whose solves succeeded.
    pub accepted: usize,
    pub rejected: usize,
    /// Accepted samples whose outgoing wave kinds match the case statement.
    pub matched: usize,
    /// Largest identity error over accepted samples (identity cases).
    pub identity_max_err: Option<f64>,
    /// Name and value of the fitted constant of the case.
    pub constant_name: Option<String>,
    pub constant: Option<f64>,
    /// Secondary statistic (`K_b0` for the boundary shock-shock case).
    pub secondary: Option<f64>,
    /// Samples with the wrong sign: negative curve shifts, or a positive strength excess
    /// in the shock-shock interaction.
    pub negatives: usize,
    /// Range of the reflection slope `beta' / nu` (reflection case).
    pub slope_range: Option<(f64, f64)>,
    /// Mean of `beta' / nu + 1` over accepted samples (reflection case).
    pub mean_deviation: Option<f64>,
}

impl ProbeReport {
    fn empty(case: ProbeCase, p: &GasParams, n: usize) -> Self {
        ProbeReport {
            case: case.id(),
            gamma: p.gamma,
            tau: p.tau,
            requested: n,
            accepted: 0,
            rejected: 0,
            matched: 0,
            identity_max_err: None,
            constant_name: None,
            constant: None,
            secondary: None,
            negatives: 0,
            slope_range: None,
            mean_deviation: None,
        }
    }
}

/// Per-sample measurement.
#[derive(Debug, Clone, Copy, Default)]
struct Sample {
    matched: bool,
    identity_err: Option<f64>,
    value: Option<f64>,
    secondary: Option<f64>,
    negative: bool,
}

fn in_window(s: &FlowState) -> bool {
    s.rho >= RHO_WINDOW.0 && s.rho <= RHO_WINDOW.1
}

fn reject() -> Error {
    Error::RangeExceeded("sample leaves the density window".into())
}

fn check(states: &[&FlowState]) -> Result<()> {
    if states.iter().all(|s| in_window(s)) {
        Ok(())
    } else {
        Err(reject())
    }
}

/// Signed strength for an incoming wave of the given kind and magnitude.
fn signed(kind: WaveKind, size: f64) -> f64 {
    match kind {
        WaveKind::S1 | WaveKind::R2 => size,
        WaveKind::S2 | WaveKind::R1 => -size,
    }
}

fn step(u: &FlowState, kind: WaveKind, z: f64, p: &GasParams) -> Result<FlowState> {
    let w = invariants_of(u, p)?;
    let end = wave_endpoint(z, kind.family(), &w, p)?;
    state_of_invariants(&end, p)
}

/// `b0` making `u` satisfy the slip condition.
pub fn slope_through(u: &FlowState, p: &GasParams) -> Result<f64> {
    let q = sonic_factor(u, p);
    if !(q > 0.0) {
        return Err(Error::SonicDefectExceeded("state outside the sonic bound".into()));
    }
    Ok(u.v / q.sqrt())
}

/// Reflection strength `beta'` of a 1-shock of strength `nu > 0` issued from `u_l` and
/// meeting the wedge, whose slope is set so that the post-shock state is on it.
pub fn reflected_strength(u_l: &FlowState, nu: f64, p: &GasParams) -> Result<f64> {
    let u_r = step(u_l, WaveKind::S1, nu, p)?;
    let pb = p.with_b0(slope_through(&u_r, p)?);
    let fan = solve_boundary(u_l, &pb)?;
    debug_assert!(boundary_defect(&fan.top, &pb).is_some());
    Ok(fan.z2)
}

fn kind_of(z: f64, family: Family, scale: f64) -> Option<WaveKind> {
    if z.abs() <= 1e-12 * scale.max(1.0) {
        None
    } else {
        WaveKind::classify(family, z)
    }
}

fn shock_size(kind: Option<WaveKind>, z: f64) -> f64 {
    match kind {
        Some(WaveKind::S1 | WaveKind::S2) => z.abs(),
        _ => 0.0,
    }
}

fn curve_shift(case: ProbeCase, d: &[f64; 4], sm: &Sampler, p: &GasParams) -> Result<Sample> {
    let u0 = sm.base(d);
    let w0 = invariants_of(&u0, p)?;
    let gap = sm.size(d[2]);
    let beta = sm.size(d[3]);
    let scale = match case {
        ProbeCase::L31 | ProbeCase::L32 => p.gm1(),
        _ => p.nonlinearity(),
    };
    let (defect, mags) = match case {
        ProbeCase::L31 | ProbeCase::L33 => {
            let u1 = state_of_invariants(&InvariantPair::new(w0.w_minus, w0.w_plus + gap), p)?;
            check(&[&u0, &u1])?;
            let (a, b) = (phi1(beta, &u0, p)?, phi1(beta, &u1, p)?);
            (a - b, w0.w_minus.abs() + w0.w_plus.abs() + gap)
        }
        _ => {
            let u1 = state_of_invariants(&InvariantPair::new(w0.w_minus - gap, w0.w_plus), p)?;
            check(&[&u0, &u1])?;
            // `(r2 - r1) - (r - r0)`: the nonnegative orientation of the S2 shift.
            let (a, b) = (phi2(-beta, &u0, p)?, phi2(-beta, &u1, p)?);
            (a - b, w0.w_minus.abs() + w0.w_plus.abs() + gap)
        }
    };
    // `Phi` is a difference of invariants, so its rounding error scales with their size;
    // for `tau > 0` the shock curves also carry the root-finding tolerance.
    let slack = if p.limit_system() { 0.0 } else { p.tol_root };
    let rounding = 64.0 * f64::EPSILON * (1.0 + mags) + slack;
    Ok(Sample {
        matched: true,
        value: (scale > 0.0).then(|| defect / (scale * gap * beta)),
        negative: defect < -rounding,
        ..Sample::default()
    })
}

fn interior(case: ProbeCase, n: u8, d: &[f64; 4], sm: &Sampler, p: &GasParams) -> Result<Sample> {
    let [ka, kb] = case.incoming().expect("interaction case");
    let l = sm.base(d);
    let (za, zb) = (signed(ka, sm.size(d[2])), signed(kb, sm.size(d[3])));
    let m = step(&l, ka, za, p)?;
    let r = step(&m, kb, zb, p)?;
    check(&[&l, &m, &r])?;
    let fan = solve_interior(&l, &r, p)?;
    check(&[&fan.middle])?;
    let (z1, z2) = fan.z;
    let scale = za.abs() + zb.abs();
    let (k2, k1) = (kind_of(z2, Family::Two, scale), kind_of(z1, Family::One, scale));
    let out_shocks = shock_size(k1, z1) + shock_size(k2, z2);
    let mut s = Sample {
        matched: case.identity_outgoing().is_none_or(|want| want == (k2, k1)),
        ..Sample::default()
    };
    let nl = p.nonlinearity();
    match n {
        1 => {
            s.matched = k1 == Some(WaveKind::S1) && k2 == Some(WaveKind::S2);
            let excess = z1.abs() + z2.abs() - za.abs() - zb.abs();
            s.value = (nl > 0.0).then(|| excess.abs() / (nl * za.abs() * zb.abs()));
            // Away from the limit system the invariants are root-found to `tol_root`.
            let slack = if p.limit_system() { 0.0 } else { p.tol_root };
            s.negative = excess > 64.0 * f64::EPSILON * (1.0 + scale) + slack;
        }
        2 => s.identity_err = Some((z2.abs() - zb.abs()).abs()),
        3 => s.identity_err = Some((z2.abs() - za.abs() - zb.abs()).abs()),
        4 => {
            s.matched = k1 == Some(WaveKind::S1);
            s.value = (s.matched).then(|| (za.abs() - out_shocks) / z1.abs());
        }
        5 => {
            s.matched = k1 == Some(WaveKind::S1);
            s.value = (s.matched).then(|| (zb.abs() - z1.abs() - z2.abs()) / z1.abs());
        }
        6 => s.identity_err = Some((z1.abs() + z2.abs() - za.abs() - zb.abs()).abs()),
        7 => {
            s.matched = k2 == Some(WaveKind::S2);
            s.value = (s.matched).then(|| (za.abs() - z1.abs() - z2.abs()) / z2.abs());
        }
        8 => s.identity_err = Some((z1.abs() - za.abs() - zb.abs()).abs()),
        _ => unreachable!(),
    }
    Ok(s)
}

/// Boundary configuration: returns `(z1, z2, beta')` for given params.
fn boundary_config(l: &FlowState, z1: f64, z2: f64, p: &GasParams) -> Result<(f64, FlowState, FlowState)> {
    let m = step(l, if z1 > 0.0 { WaveKind::S1 } else { WaveKind::R1 }, z1, p)?;
    let r = step(&m, if z2 < 0.0 { WaveKind::S2 } else { WaveKind::R2 }, z2, p)?;
    let pb = p.with_b0(slope_through(&r, p)?);
    let fan = solve_boundary(l, &pb)?;
    Ok((fan.z2, m, r))
}

fn boundary(case: ProbeCase, n: u8, d: &[f64; 4], sm: &Sampler, p: &GasParams) -> Result<Sample> {
    let [ka, kb] = case.incoming().expect("interaction case");
    let l = sm.base(d);
    let (za, zb) = (signed(ka, sm.size(d[2])), signed(kb, sm.size(d[3])));
    let (out, m, r) = boundary_config(&l, za, zb, p)?;
    check(&[&l, &m, &r])?;
    let scale = za.abs() + zb.abs();
    let kind = kind_of(out, Family::Two, scale);
    let mut s = Sample {
        matched: case.identity_outgoing().is_none_or(|want| want == (kind, None)),
        ..Sample::default()
    };
    match n {
        1 => {
            let base = p.with_gamma(1.0).with_tau(0.0);
            let (out0, _, _) = boundary_config(&l, za, zb, &base)?;
            let nl = p.nonlinearity();
            s.value = (nl > 0.0).then(|| (out.abs() - out0.abs()) / (nl * za.abs() * (1.0 + zb.abs())));
            s.secondary = Some((out.abs() - zb.abs()) / za.abs());
        }
        2 | 3 => {
            s.matched = kind == Some(WaveKind::S2);
            let ratio = match n {
                2 => (zb.abs() - out.abs()) / za.abs(),
                _ => out.abs() / za.abs(),
            };
            s.value = s.matched.then_some(ratio);
        }
        4 => s.identity_err = Some((out.abs() - za.abs() - zb.abs()).abs()),
        _ => unreachable!(),
    }
    Ok(s)
}

fn reflection(d: &[f64; 4], sm: &Sampler, p: &GasParams) -> Result<Sample> {
    let l = sm.base(d);
    let nu = Sampler::log_range((1e-3, 2.0), d[2]);
    let u_r = step(&l, WaveKind::S1, nu, p)?;
    check(&[&l, &u_r])?;
    let beta = reflected_strength(&l, nu, p)?;
    Ok(Sample {
        matched: beta <= 0.0,
        value: Some(beta / nu),
        ..Sample::default()
    })
}

fn one_sample(case: ProbeCase, d: &[f64; 4], sm: &Sampler, p: &GasParams) -> Result<Sample> {
    match case {
        ProbeCase::L31 | ProbeCase::L32 if p.tau != 0.0 => Err(Error::UnsupportedTau),
        ProbeCase::L31 | ProbeCase::L32 | ProbeCase::L33 | ProbeCase::L34 => curve_shift(case, d, sm, p),
        ProbeCase::L35(n) => interior(case, n, d, sm, p),
        ProbeCase::L36 => reflection(d, sm, p),
        ProbeCase::L37(n) => boundary(case, n, d, sm, p),
    }
}

fn constant_name(case: ProbeCase) -> Option<(&'static str, bool)> {
    // (name, true if the constant is a supremum)
    Some(match case {
        ProbeCase::L31 => ("C3", true),
        ProbeCase::L32 => ("C3'", true),
        ProbeCase::L33 => ("C4", true),
        ProbeCase::L34 => ("C4'", true),
        ProbeCase::L35(1) => ("C5", true),
        ProbeCase::L35(4) | ProbeCase::L35(5) | ProbeCase::L35(7) => ("C0", false),
        ProbeCase::L37(1) => ("C6", true),
        ProbeCase::L37(2) => ("Cb1", false),
        ProbeCase::L37(3) => ("Kb1", true),
        _ => return None,
    })
}

/// Runs `n_samples` configurations of one case.
pub fn interaction_probe(case: ProbeCase, sampler: &Sampler, p: &GasParams, n_samples: usize) -> Result<ProbeReport> {
    if matches!(case, ProbeCase::L31 | ProbeCase::L32) && p.tau != 0.0 {
        return Err(Error::UnsupportedTau);
    }
    let draws = sampler.draws(n_samples);
    let results: Vec<Result<Sample>> = draws.par_iter().map(|d| one_sample(case, d, sampler, p)).collect();
    let mut rep = ProbeReport::empty(case, p, n_samples);
    let name = constant_name(case);
    let mut best: Option<f64> = None;
    let mut secondary: Option<f64> = None;
    let (mut slope_lo, mut slope_hi, mut dev_sum) = (f64::INFINITY, f64::NEG_INFINITY, 0.0);
    for r in results {
        let Ok(s) = r else {
            rep.rejected += 1;
            continue;
        };
        rep.accepted += 1;
        rep.negatives += usize::from(s.negative);
        rep.matched += usize::from(s.matched);
        if let Some(e) = s.identity_err {
            rep.identity_max_err = Some(rep.identity_max_err.map_or(e, |m: f64| m.max(e)));
        }
        if let Some(v) = s.value {
            if case == ProbeCase::L36 {
                slope_lo = slope_lo.min(v);
                slope_hi = slope_hi.max(v);
                dev_sum += v + 1.0;
            } else if let Some((_, sup)) = name {
                best = Some(match best {
                    None => v,
                    Some(b) if sup => b.max(v),
                    Some(b) => b.min(v),
                });
            }
        }
        if let Some(v) = s.secondary {
            secondary = Some(secondary.map_or(v, |m: f64| m.max(v)));
        }
    }
    if let Some((n, _)) = name {
        rep.constant_name = Some(n.to_string());
        rep.constant = best;
    }
    rep.secondary = secondary;
    if case == ProbeCase::L36 && rep.accepted > 0 {
        rep.slope_range = Some((slope_lo, slope_hi));
        rep.mean_deviation = Some(dev_sum / rep.accepted as f64);
        rep.constant_name = Some("Kb".into());
        rep.constant = Some(dev_sum / rep.accepted as f64 - 1.0);
    }
    Ok(rep)
}
