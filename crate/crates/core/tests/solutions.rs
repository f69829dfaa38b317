use std::sync::Arc;

use approx::assert_relative_eq;
use phlo_core::field::{FieldPair, ScalarField, Sign, Trig, TrigKind};
use phlo_core::frobenius::integrability_4forms;
use phlo_core::numerics::{Axis, Grid};
use phlo_core::solutions::{
    action_integral, build_solution, energy_integral, energy_integral_on, eom_residuals, nonlinear_equation_check,
    potential_zeta_bracket, Amplitude, AmplitudeKind, PhLOConfig, SolutionField,
};
use phlo_core::stress_energy::divergence_report;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn config(eps: Sign, kappa: Sign, l0: f64, kind: AmplitudeKind) -> PhLOConfig {
    PhLOConfig {
        epsilon: eps,
        kappa,
        l0,
        amplitude: Amplitude::default_for(kind, l0),
        ..PhLOConfig::default()
    }
}

fn six_configs() -> Vec<PhLOConfig> {
    use AmplitudeKind::*;
    use Sign::*;
    vec![
        config(Plus, Plus, 1.0, ProductMollifier),
        config(Minus, Plus, 2.5, ProductMollifier),
        config(Plus, Minus, 2.5, ProductMollifier),
        config(Minus, Minus, 1.0, TruncatedGaussian),
        config(Plus, Minus, 1.0, TruncatedGaussian),
        config(Minus, Plus, 2.5, TruncatedGaussian),
    ]
}

fn coarse(mut cfg: PhLOConfig, n: usize) -> PhLOConfig {
    cfg.grid.points = [n; 3];
    cfg
}

fn plane_wave(eps: Sign) -> FieldPair {
    let e = eps.value();
    let u: Arc<dyn ScalarField> = Arc::new(Trig::running(0.9, 0.0, 0.0, 1.3, e, 0.2, TrigKind::Cos));
    let p: Arc<dyn ScalarField> = Arc::new(Trig::running(0.5, 0.0, 0.0, 0.7, e, -0.4, TrigKind::Sin));
    FieldPair::new(u, p, eps)
}

#[test]
fn equations_of_motion_hold_on_the_family() {
    for cfg in six_configs() {
        let sol = build_solution(&cfg).unwrap();
        let pts = sol.support_points(&mut ChaCha8Rng::seed_from_u64(11), 1000).unwrap();
        let r = sol.eom_residuals(&pts);
        assert!(r.lie_phi2 < 1e-10, "{cfg:?}: {r:?}");
        assert!(r.lie_psi < 1e-10, "{cfg:?}: {r:?}");
        assert!(r.curvature < 1e-12, "{cfg:?}: {r:?}");
        assert!(r.phase_points > 500);
        let n = nonlinear_equation_check(&sol.pair, &pts).unwrap();
        assert!(n.max_residual() < 1e-10, "{n:?}");
        assert!(n.df > 0.1, "solution must not be closed: {n:?}");
    }
}

#[test]
fn curvature_on_solutions_is_amplitude_over_length() {
    let cfg = config(Sign::Minus, Sign::Plus, 2.5, AmplitudeKind::ProductMollifier);
    let sol = build_solution(&cfg).unwrap();
    for pt in sol.support_points(&mut ChaCha8Rng::seed_from_u64(3), 200).unwrap() {
        let i = integrability_4forms(&sol.pair, &pt).unwrap();
        let expected = cfg.epsilon.value() * sol.amplitude_squared(&pt) * cfg.phase_rate();
        assert!((i.a_zeta - expected).abs() < 1e-10 * i.scale);
        assert!((i.dual_zeta - expected).abs() < 1e-10 * i.scale);
    }
}

#[test]
fn plane_waves_are_maxwell_but_not_helical() {
    let fp = plane_wave(Sign::Minus);
    let pts: Vec<_> = (0..50).map(|k| [0.1 * k as f64, -0.3, 0.02 * k as f64, 0.5]).collect();
    let r = eom_residuals(&fp, 1.0, 1e-14, &pts);
    assert!(r.lie_phi2 < 1e-14);
    assert!(
        (r.lie_psi - 1.0).abs() < 1e-14,
        "phase rate is zero, so the residual is κ/l₀"
    );
    let n = nonlinear_equation_check(&fp, &pts).unwrap();
    assert!(n.max_residual() < 1e-14);
    assert!(n.df < 1e-14);
}

#[test]
fn conservation_on_solutions() {
    for cfg in six_configs() {
        let sol = build_solution(&cfg).unwrap();
        for pt in sol.support_points(&mut ChaCha8Rng::seed_from_u64(4), 100).unwrap() {
            let d = divergence_report(&sol.pair, &pt, 1e-3).unwrap();
            assert!(d.direct.iter().all(|v| v.abs() < 1e-8), "{d:?}");
            assert!(d.via_df.iter().all(|v| v.abs() < 1e-12));
        }
    }
}

#[test]
fn strain_rotates_with_fixed_magnitude_on_uniform_helix() {
    let cfg = PhLOConfig {
        kappa: Sign::Minus,
        l0: 2.0,
        amplitude: Amplitude {
            phi0: 1.5,
            ..Amplitude::default_for(AmplitudeKind::Uniform, 2.0)
        },
        ..PhLOConfig::default()
    };
    let sol = build_solution(&cfg).unwrap();
    let mut angles = Vec::new();
    for k in 0..8 {
        let br = potential_zeta_bracket(&sol, &[0.0, 0.0, 0.4 * k as f64, 0.0]);
        assert_relative_eq!(br[0].hypot(br[1]), 1.5 / 2.0, max_relative = 1e-14);
        angles.push(br[1].atan2(br[0]));
    }
    assert!(angles.windows(2).all(|w| (w[0] - w[1]).abs() > 1e-3));
}

#[test]
fn energy_scales_quadratically_and_is_translation_invariant() {
    let base = coarse(config(Sign::Plus, Sign::Plus, 1.0, AmplitudeKind::ProductMollifier), 33);
    let sol = build_solution(&base).unwrap();
    let e = energy_integral(&sol, 0.0).unwrap();
    let shifted = energy_integral(&sol, 0.37).unwrap();
    assert!((e.value - shifted.value).abs() <= 2.0 * e.error.max(shifted.error));

    let mut doubled = base.clone();
    doubled.amplitude.phi0 = 2.0;
    let e2 = energy_integral(&build_solution(&doubled).unwrap(), 0.0).unwrap();
    assert_relative_eq!(e2.value, 4.0 * e.value, max_relative = 1e-14);
}

#[test]
fn energy_quadrature_converges_at_fourth_order() {
    let cfg = config(Sign::Plus, Sign::Plus, 1.0, AmplitudeKind::TruncatedGaussian);
    let sol = build_solution(&cfg).unwrap();
    let (lo, hi) = sol.support_box(0.0).unwrap();
    let at = |n| {
        let g = Grid::new((0..3).map(|i| Axis::new(lo[i], hi[i], n)).collect());
        energy_integral_on(&sol, 0.0, &g).unwrap()
    };
    let reference = at(129).extrapolated();
    let errs: Vec<f64> = [17, 33, 65].iter().map(|&n| (at(n).value - reference).abs()).collect();
    for w in errs.windows(2) {
        let ratio = w[0] / w[1];
        assert!((12.0..20.0).contains(&ratio), "convergence ratio {ratio}");
    }
}

fn action_ratio(sol: &SolutionField) -> f64 {
    let a = action_integral(sol).unwrap();
    assert!(a.deviation() <= a.error_bar(), "{a:?}");
    assert!(a.dual_disagreement() < 1e-10);
    a.ratio.unwrap()
}

#[test]
fn action_is_signed_energy_times_period() {
    for kappa in [Sign::Plus, Sign::Minus] {
        let cfg = coarse(config(Sign::Plus, kappa, 1.0, AmplitudeKind::ProductMollifier), 33);
        let r = action_ratio(&build_solution(&cfg).unwrap());
        assert!((r - kappa.value()).abs() < 1e-3);
    }
}

#[test]
fn action_identity_survives_phase_and_window_shifts() {
    let base = coarse(
        config(Sign::Minus, Sign::Plus, 1.0, AmplitudeKind::TruncatedGaussian),
        17,
    );
    for phase in [0.0, 1.1, -2.5] {
        let cfg = PhLOConfig {
            phase_const: phase,
            ..base.clone()
        };
        assert!((action_ratio(&build_solution(&cfg).unwrap()) + 1.0).abs() < 1e-3);
    }
    for xi0 in [0.0, 0.45, -3.0] {
        let cfg = PhLOConfig { xi0, ..base.clone() };
        assert!((action_ratio(&build_solution(&cfg).unwrap()) + 1.0).abs() < 1e-3);
    }
}
