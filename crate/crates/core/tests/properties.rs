use std::sync::Arc;

use phlo_core::exterior::{self, basis_len, hodge, metric_pairing, wedge, KForm, MetricSignature};
use phlo_core::field::{
    build_null_frame, frame_jets, FieldPair, Monomial, Polynomial, ScalarField, Sign, Trig, TrigKind,
};
use phlo_core::frobenius::{curvature_r, integrability_4forms};
use phlo_core::numerics::CompensatedSum;
use phlo_core::strain::{
    bridge_signs, contract_relations, lie_metric, lie_metric_flow_oracle, strain_flux_forms, PolynomialVector,
    FLOW_SWEEP_STEP,
};
use phlo_core::stress_energy::{
    divergence_report, duality_identity_residual, duality_rotation, eigen_residuals, energy_tensor,
    energy_tensor_frame, isotropy_invariants, null_rank_one, partial_tensor,
};
use proptest::prelude::*;

fn coef() -> impl Strategy<Value = f64> {
    -2.0..2.0f64
}

fn form(grade: usize) -> impl Strategy<Value = KForm> {
    prop::collection::vec(coef(), basis_len(grade)).prop_map(move |c| KForm::from_components(grade, &c).unwrap())
}

fn point() -> impl Strategy<Value = [f64; 4]> {
    [-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64]
}

fn sign() -> impl Strategy<Value = Sign> {
    prop_oneof![Just(Sign::Plus), Just(Sign::Minus)]
}

fn monomial() -> impl Strategy<Value = Monomial> {
    (coef(), [0u32..3, 0u32..3, 0u32..3, 0u32..3]).prop_map(|(c, p)| Monomial::new(c, p))
}

fn polynomial() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(monomial(), 1..5).prop_map(Polynomial::new)
}

fn trig() -> impl Strategy<Value = Trig> {
    (coef(), [coef(), coef(), coef(), coef()], 0.0..6.3f64, any::<bool>()).prop_map(|(a, k, ph, s)| Trig {
        amplitude: a,
        wavevector: k,
        phase: ph,
        kind: if s { TrigKind::Sin } else { TrigKind::Cos },
    })
}

fn scalar() -> impl Strategy<Value = Arc<dyn ScalarField>> {
    prop_oneof![
        polynomial().prop_map(|p| Arc::new(p) as Arc<dyn ScalarField>),
        trig().prop_map(|t| Arc::new(t) as Arc<dyn ScalarField>),
    ]
}

fn pair() -> impl Strategy<Value = FieldPair> {
    (scalar(), scalar(), sign()).prop_map(|(u, p, e)| FieldPair::new(u, p, e))
}

fn jet_scale(fp: &FieldPair, pt: &[f64; 4]) -> f64 {
    1.0 + frame_jets(fp, pt).unwrap().scale()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn star_satisfies_defining_relation(grade in 0usize..=4, seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let n = basis_len(grade);
        let a = KForm::from_components(grade, &(0..n).map(|_| rng.gen_range(-2.0..2.0)).collect::<Vec<_>>()).unwrap();
        let b = KForm::from_components(grade, &(0..n).map(|_| rng.gen_range(-2.0..2.0)).collect::<Vec<_>>()).unwrap();
        let lhs = wedge(&a, &hodge(&b)).unwrap();
        let rhs = KForm::volume() * (MetricSignature::MINKOWSKI.index_factor() * metric_pairing(&a, &b).unwrap());
        prop_assert!((lhs - rhs).max_abs() < 1e-12);
    }

    #[test]
    fn double_star_on_two_forms_is_minus_identity(f in form(2)) {
        prop_assert_eq!(hodge(&hodge(&f)), -f);
    }

    #[test]
    fn wedge_is_graded_commutative(a in form(1), b in form(2)) {
        let ab = wedge(&a, &b).unwrap();
        let ba = wedge(&b, &a).unwrap();
        prop_assert!((ab - ba).max_abs() < 1e-14);
        let aa = wedge(&a, &a).unwrap();
        prop_assert_eq!(aa.max_abs(), 0.0);
    }

    #[test]
    fn wedge_is_associative(a in form(1), b in form(1), c in form(2)) {
        let l = wedge(&wedge(&a, &b).unwrap(), &c).unwrap();
        let r = wedge(&a, &wedge(&b, &c).unwrap()).unwrap();
        prop_assert!((l - r).max_abs() < 1e-13);
    }

    #[test]
    fn any_two_form_tensor_is_traceless(f in form(2)) {
        let t = energy_tensor(&f);
        prop_assert!(t.trace().abs() < 1e-12 * (1.0 + f.max_abs()).powi(2));
        prop_assert!(duality_identity_residual(&f) < 1e-12 * (1.0 + f.max_abs()).powi(2));
    }

    #[test]
    fn duality_rotation_keeps_tensor(f in form(2), angle in -7.0..7.0f64) {
        let r = duality_rotation(&f, angle);
        prop_assert!(r.t_residual < 1e-12 * (1.0 + f.max_abs()).powi(2));
        prop_assert_eq!(r.star_f, hodge(&r.f));
    }

    #[test]
    fn null_frames_are_degenerate(fp in pair(), pt in point()) {
        let frame = build_null_frame(&fp, &pt).unwrap();
        let scale = (1.0 + frame.phi2).powi(2);
        let inv = isotropy_invariants(&frame.f);
        prop_assert!(inv.max_abs() < 1e-12 * scale);
        let t = energy_tensor_frame(&frame);
        for r in eigen_residuals(&t, &frame) {
            prop_assert!(r < 1e-12 * scale);
        }
        prop_assert!(t.max_diff(&null_rank_one(&frame)) < 1e-12 * scale);
        prop_assert!(t.max_minor() < 1e-12 * scale);
        prop_assert_eq!(t.energy_density(), frame.phi2);
        let half = partial_tensor(&frame.f);
        for m in 0..4 {
            for n in 0..4 {
                prop_assert!((2.0 * half.mixed[m][n] - t.mixed[m][n]).abs() < 1e-12 * scale);
            }
        }
    }

    #[test]
    fn lie_metric_is_symmetric(v in [polynomial(), polynomial(), polynomial(), polynomial()], pt in point()) {
        let s = lie_metric(&PolynomialVector(v), &pt);
        prop_assert_eq!(s.asymmetry(), 0.0);
    }

    #[test]
    fn strain_relations(fp in pair(), pt in point()) {
        let scale = jet_scale(&fp, &pt).powi(2);
        let signs = bridge_signs();
        let c = contract_relations(&fp, &pt);
        for (name, r) in c.residuals(&signs) {
            prop_assert!(r < 1e-10 * scale, "{}: {}", name, r);
        }
        prop_assert_eq!(c.d_astar + c.dstar_a, 0.0);
        prop_assert!((c.d_astar.abs() - c.rates.r.abs()).abs() < 1e-12 * scale);
        let f = strain_flux_forms(&fp, &pt).unwrap();
        for (name, r) in f.residuals(&signs) {
            prop_assert!(r < 1e-10 * scale, "{}: {}", name, r);
        }
    }

    #[test]
    fn curvature_is_amplitude_times_phase_rate(fp in pair(), pt in point()) {
        let c = curvature_r(&fp, &pt, 1e-10);
        if let Some(res) = c.polar_residual() {
            let scale = jet_scale(&fp, &pt).powi(2);
            prop_assert!(res < 1e-10 * scale);
        }
        let i = integrability_4forms(&fp, &pt).unwrap();
        for (name, r) in i.residuals() {
            prop_assert!(r < i.tolerance(1e-12), "{}: {}", name, r);
        }
    }

    #[test]
    fn eq2_routes_agree_on_polynomial_pairs(u in polynomial(), p in polynomial(), e in sign(), pt in point()) {
        let fp = FieldPair::new(Arc::new(u), Arc::new(p), e);
        let r = divergence_report(&fp, &pt, 1e-3).unwrap();
        let tol = 1e-6f64.max(1e-12 * r.scale);
        prop_assert!(r.max_disagreement() < tol, "{:?}", r);
        prop_assert!(r.interior_gap() < 1e-12 * (1.0 + r.scale));
    }

    #[test]
    fn compensated_sum_is_order_independent(mut xs in prop::collection::vec(-1e3..1e3f64, 1..400)) {
        let a: CompensatedSum = xs.iter().copied().collect();
        xs.reverse();
        let b: CompensatedSum = xs.iter().copied().collect();
        prop_assert!((a.value() - b.value()).abs() <= 1e-14 * (1.0 + a.value().abs()));
    }
}

#[test]
fn flow_oracle_matches_lie_metric_on_random_fields() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5048_4C4F);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let v = phlo_core::random::polynomial_vector(&mut rng, 2, 3);
        for _ in 0..50 {
            let pt = phlo_core::random::point(&mut rng, 1.0);
            let exact = lie_metric(&v, &pt);
            let flow = lie_metric_flow_oracle(&v, &pt, FLOW_SWEEP_STEP).unwrap();
            worst = worst.max(flow.max_diff(&exact));
        }
    }
    assert!(worst < 1e-5, "worst flow deviation {worst}");
}

#[test]
fn star_table_examples() {
    let table = exterior::star_table();
    assert_eq!(table.entries().len(), 16);
    assert_eq!(hodge(&KForm::monomial(&[0, 1])), -KForm::monomial(&[2, 3]));
    assert_eq!(hodge(&KForm::scalar(1.0)), -KForm::volume());
}
