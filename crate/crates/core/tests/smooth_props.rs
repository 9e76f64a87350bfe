use approx::assert_relative_eq;
use proptest::prelude::*;
use swirlflow::*;

/// Radially supersonic outward data at r = 1 with rho = A = 1.
fn outward(gamma: f64, m1sq: f64, u2: f64) -> (GasModel, FlowInvariants) {
    let gas = GasModel::new(gamma).unwrap();
    let b = BoundaryState::new(1.0, 1.0, (m1sq * gamma).sqrt(), u2, 1.0);
    (gas, FlowInvariants::from_boundary(&gas, &b).unwrap())
}

fn setup_a() -> (GasModel, FlowInvariants) {
    (
        GasModel::new(2.0).unwrap(),
        FlowInvariants::new(1.0, 1.0, 3.0, 1.0, Direction::Outward).unwrap(),
    )
}

fn rk4_step(gas: &GasModel, inv: &FlowInvariants, r: f64, y: [f64; 3], h: f64) -> [f64; 3] {
    let f = |r: f64, y: [f64; 3]| {
        let s = inv.state_at(gas, r, y[0]);
        // Build the state from the integrated variables, not from the invariants.
        let s = FlowState {
            u1: y[1],
            u2: y[2],
            m1sq: y[1] * y[1] / s.c2,
            m2sq: y[2] * y[2] / s.c2,
            msq: (y[1] * y[1] + y[2] * y[2]) / s.c2,
            ..s
        };
        ode_rhs(gas, &s).unwrap()
    };
    let add = |y: [f64; 3], k: [f64; 3], c: f64| [y[0] + c * k[0], y[1] + c * k[1], y[2] + c * k[2]];
    let k1 = f(r, y);
    let k2 = f(r + 0.5 * h, add(y, k1, 0.5 * h));
    let k3 = f(r + 0.5 * h, add(y, k2, 0.5 * h));
    let k4 = f(r + h, add(y, k3, h));
    [
        y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        y[2] + h / 6.0 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]),
    ]
}

#[test]
fn rk4_matches_algebraic_profile() {
    let (gas, inv) = setup_a();
    let (r_lo, r_hi, n, sub) = (1.05, 1.5, 500, 8);
    let s0 = solve_state(&gas, &inv, r_lo, Branch::RadialSupersonic).unwrap();
    let mut y = [s0.rho, s0.u1, s0.u2];
    let h = (r_hi - r_lo) / ((n - 1) * sub) as f64;
    for i in 1..n {
        for j in 0..sub {
            let r = r_lo + ((i - 1) * sub + j) as f64 * h;
            y = rk4_step(&gas, &inv, r, y, h);
        }
        let r = r_lo + (r_hi - r_lo) * i as f64 / (n - 1) as f64;
        let s = solve_state(&gas, &inv, r, Branch::RadialSupersonic).unwrap();
        assert_relative_eq!(y[0], s.rho, max_relative = 1e-8);
        assert_relative_eq!(y[1], s.u1, max_relative = 1e-8);
        assert_relative_eq!(y[2], s.u2, max_relative = 1e-8);
    }
}

#[test]
fn limiting_circle_blow_up() {
    let (gas, inv) = setup_a();
    let rs = limiting_radius(&gas, &inv).unwrap();
    let slope = |r: f64| {
        let s = solve_state(&gas, &inv, r, Branch::RadialSupersonic).unwrap();
        ode_rhs(&gas, &s).unwrap()[0].abs()
    };
    assert!(slope(rs + 1e-4) >= 10.0 * slope(rs + 1e-2));
    let s = solve_state(&gas, &inv, rs * (1.0 + 1e-12), Branch::RadialSupersonic).unwrap();
    assert!((s.m1sq - 1.0).abs() < 1e-4);
}

#[test]
fn limiting_radius_routes_agree() {
    let (gas, inv) = setup_a();
    let rs = limiting_radius(&gas, &inv).unwrap();
    assert!((0.953..=0.957).contains(&rs));
    assert!(rs >= limiting_radius_lower_bound(&gas, &inv));
    assert_relative_eq!(
        rs,
        shock::limiting_radius_from_sonic_relation(&gas, &inv).unwrap(),
        max_relative = 1e-12
    );
}

#[test]
fn no_swirl_limiting_circle_is_sonic_circle() {
    let (gas, inv) = outward(1.4, 2.0, 0.0);
    assert_relative_eq!(limiting_radius(&gas, &inv).unwrap(), sonic_radius(&gas, &inv), max_relative = 1e-12);
    assert_eq!(inv.vacuum_radius(), 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn branches_are_ordered(gamma in 1.1f64..3.0, m1sq in 1.2f64..5.0, u2 in -2.0f64..2.0, t in 0.001f64..3.0) {
        let (gas, inv) = outward(gamma, m1sq, u2);
        let r = limiting_radius(&gas, &inv).unwrap() * (1.0 + t);
        let sup = solve_state(&gas, &inv, r, Branch::RadialSupersonic).unwrap();
        let sub = solve_state(&gas, &inv, r, Branch::RadialSubsonic).unwrap();
        let star = inv.minimizer_density(&gas, r).unwrap();
        prop_assert!(sup.rho < star && star < sub.rho);
        prop_assert!(sup.m1sq > 1.0 && sub.m1sq < 1.0);
        for s in [sup, sub] {
            prop_assert!((s.mass_flux() - inv.kappa1).abs() <= gas.tol_residual * inv.kappa1.abs());
            prop_assert!((s.angular_momentum() - inv.kappa2).abs() <= gas.tol_residual * inv.kappa2.abs().max(1.0));
            prop_assert!((s.bernoulli(gamma) - inv.b0).abs() <= gas.tol_residual * inv.b0);
        }
    }

    #[test]
    fn minimizer_is_a_minimum(gamma in 1.1f64..3.0, m1sq in 1.2f64..5.0, u2 in -2.0f64..2.0, t in 0.01f64..4.0) {
        let (gas, inv) = outward(gamma, m1sq, u2);
        let r = inv.vacuum_radius() * (1.0 + t) + 1e-3;
        let star = inv.minimizer_density(&gas, r).unwrap();
        let f = |rho: f64| inv.mass_flux_residual(&gas, r, rho);
        prop_assert!(f(star * (1.0 + 1e-4)) > f(star));
        prop_assert!(f(star * (1.0 - 1e-4)) > f(star));
        prop_assert!((f(star) - closed_form_minimum(&gas, &inv, r)).abs() <= 1e-10 * inv.mass_flux_scale(&gas, r, star));
    }

    #[test]
    fn critical_density_is_sonic(gamma in 1.1f64..3.0, m1sq in 1.2f64..5.0, u2 in -2.0f64..2.0) {
        let (gas, inv) = outward(gamma, m1sq, u2);
        let rho_c = inv.critical_density(&gas);
        let c2 = gas.sound_speed_sq(inv.a, rho_c);
        let u1sq = 2.0 * (inv.b0 - c2 / (gamma - 1.0));
        prop_assert!((u1sq / c2 - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn entropy_ratio_decreasing_on_grid(gamma in 1.05f64..4.0) {
        let gas = GasModel::new(gamma).unwrap();
        let lo = (gamma - 1.0) / (gamma + 1.0);
        let hi = 1.0 / lo;
        let n = 1000;
        let xs: Vec<f64> = (1..n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect();
        let t: Vec<f64> = xs.iter().map(|&x| entropy_ratio(&gas, x).unwrap()).collect();
        prop_assert!(t.windows(2).all(|w| w[1] < w[0]));
        prop_assert!((entropy_ratio(&gas, 1.0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn supersonic_density_decays(gamma in 1.1f64..3.0, m1sq in 1.2f64..5.0, u2 in -2.0f64..2.0) {
        let (gas, inv) = outward(gamma, m1sq, u2);
        let p = profile(&gas, &inv, Branch::RadialSupersonic, 1.0, 4.0, 40).unwrap();
        let s0 = p.first();
        for s in &p.states[1..] {
            prop_assert!(s.rho <= s0.rho * s0.r / s.r);
            prop_assert!(s.m1sq > 1.0);
        }
    }

    #[test]
    fn subsonic_total_mach_decays(gamma in 1.1f64..3.0, m1sq in 0.05f64..0.9, u2 in -0.5f64..0.5) {
        let gas = GasModel::new(gamma).unwrap();
        let b = BoundaryState::new(1.0, 1.0, (m1sq * gamma).sqrt(), u2, 1.0);
        let inv = FlowInvariants::from_boundary(&gas, &b).unwrap();
        let s0 = inv.state_at(&gas, 1.0, 1.0);
        prop_assume!(s0.msq < 1.0);
        let rep = classify_outward(&gas, &b, 5.0).unwrap();
        prop_assert_eq!(rep.regime, SmoothRegime::Subsonic);
        let p = profile(&gas, &inv, Branch::RadialSubsonic, 1.0, 5.0, 40).unwrap();
        for s in &p.states {
            prop_assert!(s.msq <= s0.msq / (s.r * s.r) * (1.0 + 1e-12));
        }
        prop_assert!(p.states.windows(2).all(|w| w[1].msq < w[0].msq));
    }

    #[test]
    fn mach_derivatives_match_differences(gamma in 1.1f64..3.0, m1sq in 1.5f64..5.0, u2 in -2.0f64..2.0, t in 0.05f64..2.0) {
        let (gas, inv) = outward(gamma, m1sq, u2);
        let r = limiting_radius(&gas, &inv).unwrap() * (1.0 + t);
        for branch in [Branch::RadialSupersonic, Branch::RadialSubsonic] {
            let at = |r: f64| solve_state(&gas, &inv, r, branch).unwrap();
            let s = at(r);
            prop_assume!((s.m1sq - 1.0).abs() > 0.01);
            let h = 1e-5 * r;
            let (a, b) = (at(r + h), at(r - h));
            let d = mach_derivatives(&gas, &s).unwrap();
            let fd = [(a.m1sq - b.m1sq) / (2.0 * h), (a.m2sq - b.m2sq) / (2.0 * h), (a.msq - b.msq) / (2.0 * h)];
            for k in 0..3 {
                prop_assert!((d[k] - fd[k]).abs() <= 1e-5 * d[k].abs().max(1.0), "{k}: {} vs {}", d[k], fd[k]);
            }
            let rhs = ode_rhs(&gas, &s).unwrap();
            let fd_rho = (a.rho - b.rho) / (2.0 * h);
            prop_assert!((rhs[0] - fd_rho).abs() <= 1e-5 * rhs[0].abs().max(1e-3));
        }
    }

    #[test]
    fn classification_is_deterministic(gamma in 1.1f64..3.0, m1sq in 0.1f64..5.0, u2 in -2.0f64..2.0, r1 in 1.01f64..4.0) {
        let gas = GasModel::new(gamma).unwrap();
        let b = BoundaryState::new(1.0, 1.0, (m1sq * gamma).sqrt(), u2, 1.0);
        let first = classify_outward(&gas, &b, r1);
        let second = classify_outward(&gas, &b, r1);
        prop_assert_eq!(format!("{first:?}"), format!("{second:?}"));
        let bi = BoundaryState::new(1.0, 1.0, -(m1sq * gamma).sqrt(), u2, 1.0);
        let first = classify_inward(&gas, &bi, 1.0 / r1);
        let second = classify_inward(&gas, &bi, 1.0 / r1);
        prop_assert_eq!(format!("{first:?}"), format!("{second:?}"));
    }
}

fn closed_form_minimum(gas: &GasModel, inv: &FlowInvariants, r: f64) -> f64 {
    // Closed form of F_r at its minimizer, written out independently.
    let g = gas.gamma;
    let k = 2.0 * (g - 1.0) * inv.b0 / (g + 1.0) - (g - 1.0) * inv.kappa2 * inv.kappa2 / ((g + 1.0) * r * r);
    -0.5 * (g * inv.a).powf(-2.0 / (g - 1.0)) * k.powf((g + 1.0) / (g - 1.0)) + inv.kappa1 * inv.kappa1 / (2.0 * r * r)
}
