//! Exact Riemann solvers against independent primitive-variable oracles in the limit system.

use glimm_wedge::riemann::{boundary_defect, solve_boundary, solve_interior};
use glimm_wedge::waves::WaveKind;
use glimm_wedge::{FlowState, GasParams};
use proptest::prelude::*;

/// Density part `2 (rho^((gamma-1)/2) - 1) / (gamma - 1)` of the limit invariants.
fn h(rho: f64, g: f64) -> f64 {
    if g == 1.0 {
        rho.ln()
    } else {
        2.0 * (rho.powf((g - 1.0) / 2.0) - 1.0) / (g - 1.0)
    }
}

/// Velocity jump `|v - v0|` across a limit-system shock with density ratio `alpha`.
fn shock_jump(rho0: f64, alpha: f64, g: f64, a: f64) -> f64 {
    let e = if g == 1.0 { alpha.ln() } else { (alpha.powf(g - 1.0) - 1.0) / (g - 1.0) };
    (2.0 * rho0.powf(g - 1.0) * (alpha - 1.0) * e / (a * a * (alpha + 1.0))).sqrt()
}

/// Velocity reached from `u_l` on its 2-curve at density `rho`.
fn two_curve(u_l: &FlowState, rho: f64, g: f64, a: f64) -> f64 {
    if rho >= u_l.rho {
        u_l.v - shock_jump(u_l.rho, rho / u_l.rho, g, a)
    } else {
        u_l.v - (h(rho, g) - h(u_l.rho, g)) / a
    }
}

/// Velocity of a state at density `rho` whose 1-curve reaches `u_r`.
fn one_curve_back(u_r: &FlowState, rho: f64, g: f64, a: f64) -> f64 {
    if u_r.rho <= rho {
        u_r.v + shock_jump(rho, u_r.rho / rho, g, a)
    } else {
        u_r.v + (h(rho, g) - h(u_r.rho, g)) / a
    }
}

/// Middle state by bisection on `ln rho_M`.
fn oracle_middle(u_l: &FlowState, u_r: &FlowState, g: f64, a: f64) -> FlowState {
    let f = |x: f64| two_curve(u_l, x.exp(), g, a) - one_curve_back(u_r, x.exp(), g, a);
    let (mut lo, mut hi) = (-18.0f64, 6.0f64);
    assert!(f(lo) > 0.0 && f(hi) < 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let rho = (0.5 * (lo + hi)).exp();
    FlowState::new(rho, two_curve(u_l, rho, g, a))
}

#[test]
fn two_shock_case_matches_oracle() {
    let p = GasParams::new(1.2, 1.0, 0.0, -0.5);
    let u_l = FlowState::new(1.0, 0.4);
    let u_r = FlowState::new(1.0, -0.4);
    let fan = solve_interior(&u_l, &u_r, &p).unwrap();
    let m = oracle_middle(&u_l, &u_r, 1.2, 1.0);
    assert_eq!(fan.wave2.unwrap().kind, WaveKind::S2);
    assert_eq!(fan.wave1.unwrap().kind, WaveKind::S1);
    assert!(fan.middle.l1_dist(&m) < 1e-6, "{:?} vs {m:?}", fan.middle);
}

#[test]
fn merging_two_shocks_reflects_a_shock() {
    // Two 2-shocks from the same state merge into a 2-shock and a weak 1-shock.
    let g = 1.4;
    let p = GasParams::new(g, 1.0, 0.0, -0.5);
    let u_l = FlowState::new(1.0, 0.0);
    let m1 = FlowState::new(1.5, -shock_jump(1.0, 1.5, g, 1.0));
    let u_r = FlowState::new(2.4, m1.v - shock_jump(1.5, 1.6, g, 1.0));
    let m = oracle_middle(&u_l, &u_r, g, 1.0);
    assert!(m.rho > u_r.rho);
    let fan = solve_interior(&u_l, &u_r, &p).unwrap();
    assert_eq!(fan.wave1.unwrap().kind, WaveKind::S1);
    assert!(fan.middle.l1_dist(&m) < 1e-9);
}

#[test]
fn boundary_shock_matches_oracle() {
    let p = GasParams::new(1.2, 1.0, 0.0, -0.3);
    let u_l = FlowState::new(1.0, 0.0);
    let fan = solve_boundary(&u_l, &p).unwrap();
    let (mut lo, mut hi) = (1.0f64, 10.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if u_l.v - shock_jump(1.0, mid, 1.2, 1.0) > p.b0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let rho = 0.5 * (lo + hi);
    assert_eq!(fan.wave2.unwrap().kind, WaveKind::S2);
    assert!((fan.top.rho - rho).abs() < 1e-8 && (fan.top.v - p.b0).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn interior_solver_agrees_with_oracle(
        g in 1.0f64..2.0,
        rl in 0.3f64..3.0, vl in -0.5f64..0.5,
        rr in 0.3f64..3.0, vr in -0.5f64..0.5,
    ) {
        let p = GasParams::new(g, 1.0, 0.0, -0.5);
        let (u_l, u_r) = (FlowState::new(rl, vl), FlowState::new(rr, vr));
        let fan = solve_interior(&u_l, &u_r, &p).unwrap();
        let m = oracle_middle(&u_l, &u_r, g, 1.0);
        prop_assert!(fan.middle.l1_dist(&m) < 1e-8, "{:?} vs {:?}", fan.middle, m);
    }

    #[test]
    fn boundary_top_satisfies_slip(
        g in 1.0f64..2.0, tau in 0.0f64..0.1,
        rl in 0.3f64..3.0, vl in -0.6f64..0.6, b0 in -0.6f64..-0.05,
    ) {
        let p = GasParams::new(g, 1.0, tau, b0);
        let fan = solve_boundary(&FlowState::new(rl, vl), &p).unwrap();
        prop_assert!(boundary_defect(&fan.top, &p).unwrap().abs() < 1e-10);
    }
}
