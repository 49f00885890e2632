mod common;

use cv_entangle::circuits::{
    analyzer_observables, make_family_state, make_partial_three_mode, FamilySpec,
};
use cv_entangle::criteria::*;
use cv_entangle::gaussian::symplectic_product;
use cv_entangle::{GaussianState, SymplecticOp};
use nalgebra::DMatrix;
use proptest::prelude::*;

const GRID: [f64; 4] = [0.0, 0.3, 1.0, 2.0];

fn family(n: usize, r1: f64, r2: f64) -> GaussianState {
    make_family_state(&FamilySpec::new(n, r1, r2).unwrap()).unwrap()
}

#[test]
fn family_closed_forms() {
    for n in 2..=8 {
        for r1 in GRID {
            for r2 in GRID {
                let s = family(n, r1, r2);
                let sum = (-2.0 * r1).exp() + (-2.0 * r2).exp();
                let c1 = crit_variance_sum(&s).unwrap();
                let c2 = crit_relative_total(&s).unwrap();
                assert!((c1.value - sum / 4.0).abs() < 1e-12);
                assert!((c2.value - n as f64 * sum / 4.0).abs() < 1e-12);
                assert_eq!(c1.threshold, 0.5);
                assert_eq!(c2.threshold, n as f64 / 2.0);
            }
        }
    }
}

#[test]
fn family_violates_for_any_squeezing() {
    for n in [2, 3, 5] {
        for r in [1e-4, 1e-3, 0.01, 0.3, 2.0] {
            for (r1, r2) in [(r, 0.0), (0.0, r), (r, r)] {
                let s = family(n, r1, r2);
                assert_eq!(
                    crit_variance_sum(&s).unwrap().verdict,
                    Verdict::RulesOutFullSeparability
                );
                assert_eq!(
                    crit_relative_total(&s).unwrap().verdict,
                    Verdict::RulesOutFullSeparability
                );
            }
        }
    }
}

#[test]
fn single_squeezer_three_mode_value() {
    let c1 = crit_variance_sum(&family(3, 1.0, 0.0)).unwrap();
    assert!((c1.value - ((-2.0f64).exp() + 1.0) / 4.0).abs() < 1e-12);
    assert!(c1.violated());
}

#[test]
fn vacuum_sits_on_thresholds() {
    for n in 2..=6 {
        let v = GaussianState::vacuum(n).unwrap();
        let c1 = crit_variance_sum(&v).unwrap();
        let c2 = crit_relative_total(&v).unwrap();
        assert!((c1.value - 0.5).abs() < 1e-15);
        assert!((c2.value - n as f64 / 2.0).abs() < 1e-15);
        assert_eq!(c1.verdict, Verdict::Boundary);
        assert_eq!(c2.verdict, Verdict::Boundary);
    }
}

fn partial_crit1_oracle(r: f64) -> f64 {
    (2.0 * r).exp() / 24.0 + 7.0 * (-2.0 * r).exp() / 24.0 + 1.0 / 6.0
}

fn partial_crit1_printed(r: f64) -> f64 {
    0.25 * ((2.0 * r).exp() / 3.0 + (-2.0 * r).exp()) + 1.0 / 6.0
}

fn partial_crit2(r: f64) -> f64 {
    (3.0 * (-2.0 * r).exp() + (2.0 * r).cosh() + 2.0) / 4.0
}

#[test]
fn partial_three_mode_values() {
    for i in 0..=100 {
        let r = i as f64 / 50.0;
        let s = make_partial_three_mode(r).unwrap();
        let c1 = crit_variance_sum(&s).unwrap();
        let c2 = crit_relative_total(&s).unwrap();
        assert!((c2.value - partial_crit2(r)).abs() < 1e-12, "r={r}");
        assert!((c1.value - partial_crit1_oracle(r)).abs() < 1e-12, "r={r}");
        if r > 0.0 {
            assert!((c1.value - partial_crit1_printed(r)).abs() > 1e-6, "r={r}");
        }
    }
    let s = make_partial_three_mode(0.0).unwrap();
    assert_eq!(crit_variance_sum(&s).unwrap().verdict, Verdict::Boundary);
    assert_eq!(crit_relative_total(&s).unwrap().verdict, Verdict::Boundary);
    assert!((partial_crit1_printed(0.0) - 0.5).abs() < 1e-15);
}

#[test]
fn partial_three_mode_crit2_region() {
    let at = |r: f64| crit_relative_total(&make_partial_three_mode(r).unwrap()).unwrap();
    assert!(at(0.3).violated());
    assert!((at(0.3).value - 1.2079750316310867).abs() < 1e-12);
    assert!(!at(1.0).violated());
    assert!((at(1.0).value - 1.5420503851983673).abs() < 1e-12);
}

#[test]
fn traced_pair_tan_product_and_total_variance() {
    for r in [0.0, 1e-3, 0.5, 1.0, 2.0] {
        let pair = family(3, r, r).partial_trace(&[1, 2]).unwrap();
        let tan = tan_product(&family(3, r, r), 1, 2).unwrap();
        assert!((tan.value - (2.0 * (-4.0 * r).exp() + 1.0) / 12.0).abs() < 1e-12);
        let total = crit_relative_total(&pair).unwrap();
        assert!((total.value - (5.0 * (-2.0 * r).exp() + (2.0 * r).exp()) / 6.0).abs() < 1e-12);
        if r > 0.0 {
            assert!(tan.value < 0.25);
            assert_eq!(tan.verdict, Verdict::RulesOutFullSeparability);
        } else {
            assert_eq!(tan.verdict, Verdict::Boundary);
        }
    }
    let tan = tan_product(&family(3, 1.0, 1.0), 2, 1).unwrap();
    assert!((tan.value - 0.08639).abs() < 1e-5);
    let pair = family(3, 2.0, 2.0).partial_trace(&[1, 2]).unwrap();
    assert!(!crit_relative_total(&pair).unwrap().violated());
}

#[test]
fn ppt_examples() {
    let tmsv = family(2, 1e-3, 1e-3);
    assert_eq!(
        ppt_test(&tmsv, &[0]).unwrap().verdict,
        Verdict::PptUnphysical
    );
    assert_eq!(
        ppt_test(&tmsv, &[1]).unwrap().verdict,
        Verdict::PptUnphysical
    );
    let vac = GaussianState::vacuum(2).unwrap();
    assert_eq!(ppt_test(&vac, &[0]).unwrap().verdict, Verdict::PptPhysical);
    let pair = family(3, 0.5, 0.5).partial_trace(&[1, 2]).unwrap();
    assert_eq!(
        ppt_test(&pair, &[0]).unwrap().verdict,
        Verdict::PptUnphysical
    );
    let three = family(3, 0.5, 0.5);
    for a in 0..3 {
        let r = ppt_test(&three, &[a]).unwrap();
        assert_eq!(r.verdict, Verdict::PptUnphysical);
        assert!(r.scope_note.contains("necessary and sufficient"));
    }
}

#[test]
fn criterion_observables_commute() {
    for n in 2..=6 {
        let mut obs = analyzer_observables(n).unwrap();
        for a in &obs {
            for b in &obs {
                assert!(symplectic_product(a, b).abs() < 1e-12);
            }
        }
        obs.clear();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    obs.push(relative_position(n, i, j));
                }
            }
        }
        obs.push(total_momentum(n));
        for a in &obs {
            for b in &obs {
                assert_eq!(symplectic_product(a, b), 0.0);
            }
        }
    }
}

#[test]
fn scope_notes_are_present() {
    let s = family(3, 0.4, 0.4);
    for r in [
        crit_variance_sum(&s).unwrap(),
        crit_relative_total(&s).unwrap(),
        tan_product(&s, 0, 1).unwrap(),
        ppt_test(&s, &[0]).unwrap(),
    ] {
        assert!(!r.scope_note.is_empty());
        assert_eq!(r.margin, r.value - r.threshold);
    }
    assert!(crit_variance_sum(&s)
        .unwrap()
        .scope_note
        .contains("does not by itself witness genuine"));
}

#[test]
fn genuine_upgrade_needs_purity_and_symmetry() {
    let pure_sym = family(4, 0.6, 0.6);
    let r = crit_variance_sum(&pure_sym).unwrap();
    assert!(witnesses_genuine_entanglement(&pure_sym, &r).unwrap());

    let partial = make_partial_three_mode(0.3).unwrap();
    let r = crit_relative_total(&partial).unwrap();
    assert!(r.violated());
    assert!(!witnesses_genuine_entanglement(&partial, &r).unwrap());

    let mixed = family(3, 0.6, 0.6).partial_trace(&[1, 2]).unwrap();
    let r = crit_variance_sum(&mixed).unwrap();
    assert!(!witnesses_genuine_entanglement(&mixed, &r).unwrap());
}

fn random_two_mode(nus: [f64; 2], angles: [f64; 3], sq: [f64; 2], mean: [f64; 4]) -> GaussianState {
    let cov = DMatrix::from_diagonal(&vec![nus[0], nus[0], nus[1], nus[1]].into());
    let mut op = SymplecticOp::beam_splitter(2, 0, 1, angles[0]).unwrap();
    op = &SymplecticOp::local_squeezer(2, 0, sq[0]).unwrap() * &op;
    op = &SymplecticOp::local_squeezer(2, 1, sq[1]).unwrap() * &op;
    op = &SymplecticOp::beam_splitter(2, 0, 1, angles[1]).unwrap() * &op;
    op = &SymplecticOp::beam_splitter(2, 1, 0, angles[2]).unwrap() * &op;
    let s = GaussianState::new(mean.to_vec(), cov).unwrap();
    s.apply(&op).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn two_mode_criteria_coincide(
        nus in [0.25f64..0.6, 0.25f64..0.6],
        angles in [-3.2f64..3.2, -3.2f64..3.2, -3.2f64..3.2],
        sq in [-1.2f64..1.2, -1.2f64..1.2],
        mean in [-2.0f64..2.0, -2.0f64..2.0, -2.0f64..2.0, -2.0f64..2.0],
    ) {
        let s = random_two_mode(nus, angles, sq, mean);
        let c1 = crit_variance_sum(&s).unwrap();
        let c2 = crit_relative_total(&s).unwrap();
        prop_assert!((c2.value - 2.0 * c1.value).abs() < 1e-10 * c2.value.max(1.0));
        prop_assert_eq!(c1.verdict, c2.verdict);
    }

    #[test]
    fn variances_ignore_displacements(shift in prop::collection::vec(-5.0f64..5.0, 6)) {
        let base = family(3, 0.4, 0.9);
        let moved = GaussianState::new(shift, base.cov().clone()).unwrap();
        let a = crit_relative_total(&base).unwrap().value;
        let b = crit_relative_total(&moved).unwrap().value;
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn crit1_decreases_with_squeezing(n in 2usize..6, r in 0.0f64..2.0, dr in 0.01f64..1.0) {
        let v = |r1: f64, r2: f64| crit_variance_sum(&family(n, r1, r2)).unwrap().value;
        prop_assert!(v(r + dr, 0.5) < v(r, 0.5));
        prop_assert!(v(0.5, r + dr) < v(0.5, r));
    }
}
