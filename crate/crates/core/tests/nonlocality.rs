mod common;

use std::collections::BTreeSet;
use std::f64::consts::{FRAC_PI_2, LN_2};

use cv_entangle::circuits::{make_family_state, FamilySpec};
use cv_entangle::nonlocality::*;
use cv_entangle::GaussianState;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn family(n: usize, r: f64) -> GaussianState {
    make_family_state(&FamilySpec::symmetric(n, r).unwrap()).unwrap()
}

/// Sets of primed parties (one-based) of each term, split by sign.
fn term_sets(n: usize) -> (BTreeSet<Vec<usize>>, BTreeSet<Vec<usize>>, f64) {
    let combo = BellCombination::mermin_klyshko(n).unwrap();
    let mut pos = BTreeSet::new();
    let mut neg = BTreeSet::new();
    let mag = combo.terms()[0].coefficient.abs();
    for t in combo.terms() {
        assert_eq!(t.coefficient.abs(), mag);
        let primed: Vec<usize> = t
            .settings
            .iter()
            .enumerate()
            .filter(|(_, s)| **s == Setting::Primed)
            .map(|(k, _)| k + 1)
            .collect();
        if t.coefficient > 0.0 {
            pos.insert(primed);
        } else {
            neg.insert(primed);
        }
    }
    (pos, neg, mag)
}

fn sets(v: &[&[usize]]) -> BTreeSet<Vec<usize>> {
    v.iter().map(|s| s.to_vec()).collect()
}

#[test]
fn four_party_table() {
    let (pos, neg, mag) = term_sets(4);
    assert_eq!(mag, 0.5);
    assert_eq!(
        pos,
        sets(&[
            &[4],
            &[3],
            &[2],
            &[1],
            &[3, 4],
            &[2, 4],
            &[1, 4],
            &[2, 3],
            &[1, 3],
            &[1, 2]
        ])
    );
    assert_eq!(
        neg,
        sets(&[
            &[1, 2, 3],
            &[1, 2, 4],
            &[1, 3, 4],
            &[2, 3, 4],
            &[],
            &[1, 2, 3, 4]
        ])
    );
}

#[test]
fn five_party_table() {
    let (pos, neg, mag) = term_sets(5);
    assert_eq!(mag, 0.5);
    assert_eq!(
        pos,
        sets(&[
            &[4, 5],
            &[3, 5],
            &[2, 5],
            &[1, 5],
            &[3, 4],
            &[2, 4],
            &[1, 4],
            &[2, 3],
            &[1, 3],
            &[1, 2]
        ])
    );
    assert_eq!(
        neg,
        sets(&[
            &[1, 2, 3, 4],
            &[1, 2, 3, 5],
            &[1, 2, 4, 5],
            &[1, 3, 4, 5],
            &[2, 3, 4, 5],
            &[]
        ])
    );
}

#[test]
fn local_realism_bound_is_two() {
    for n in 2..=5 {
        let b = BellCombination::mermin_klyshko(n)
            .unwrap()
            .local_bound()
            .unwrap();
        assert_eq!(b, 2.0, "N={n}");
    }
}

#[test]
fn parity_matches_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..1000 {
        let n = rng.random_range(2..=5);
        let r = rng.random_range(0.0..1.5);
        let alpha: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.random_range(-0.8..0.8), rng.random_range(-0.8..0.8)))
            .collect();
        let got = displaced_parity(&family(n, r), &alpha).unwrap();
        let want = common::parity_family(r, &alpha);
        assert!(
            common::rel_err(got, want) < 1e-9,
            "N={n} r={r}: {got} vs {want}"
        );
    }
}

#[test]
fn two_mode_parity_at_equal_settings() {
    for (r, j) in [(0.3, 0.1), (1.0, 0.02), (2.0, 1e-3)] {
        let a = Complex64::new(0.0, f64::sqrt(j));
        let got = displaced_parity(&family(2, r), &[a, a]).unwrap();
        let want = (-4.0 * j * (2.0 * r).exp()).exp();
        assert!(common::rel_err(got, want) < 1e-12);
    }
}

#[test]
fn closed_form_bell_values() {
    let forms: [fn(f64, f64) -> f64; 4] = [common::b2, common::b3, common::b4, common::b5];
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for (i, form) in forms.iter().enumerate() {
        let n = i + 2;
        let combo = BellCombination::mermin_klyshko(n).unwrap();
        for _ in 0..100 {
            let r: f64 = rng.random_range(0.0..2.0);
            let j = rng.random_range(0.0..0.5) * (-2.0 * r).exp();
            let settings = DisplacementSettings::equal(n, j, FRAC_PI_2).unwrap();
            let got = bell_value(&family(n, r), &combo, &settings).unwrap();
            assert!((got - form(r, j)).abs() < 1e-12, "N={n} r={r} J={j}");
        }
    }
}

#[test]
fn three_party_phase_scan() {
    let combo = BellCombination::mermin_klyshko(3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..100 {
        let r = rng.random_range(0.0..1.5);
        let j: f64 = rng.random_range(0.0..0.3);
        let phi = [(); 3].map(|_| rng.random_range(-3.2..3.2));
        let primed = phi
            .iter()
            .map(|&f| Complex64::from_polar(j.sqrt(), f))
            .collect();
        let settings =
            DisplacementSettings::new(vec![Complex64::new(0.0, 0.0); 3], primed).unwrap();
        let got = bell_value(&family(3, r), &combo, &settings).unwrap();
        assert!((got - common::b3_phases(r, j, phi)).abs() < 1e-12);
    }
}

#[test]
fn three_party_reference_point() {
    let r = 1.0;
    let j = 3.0 * 3f64.ln() / 16.0 * (-2.0f64).exp();
    let combo = BellCombination::mermin_klyshko(3).unwrap();
    let settings = DisplacementSettings::equal(3, j, FRAC_PI_2).unwrap();
    let got = bell_value(&family(3, r), &combo, &settings).unwrap();
    assert!((got - common::b3(r, j)).abs() < 1e-12);
}

#[test]
fn unsqueezed_states_reach_exactly_two() {
    let v = GaussianState::vacuum(2).unwrap();
    let combo = BellCombination::mermin_klyshko(2).unwrap();
    let b = bell_value(
        &v,
        &combo,
        &DisplacementSettings::equal(2, 0.0, FRAC_PI_2).unwrap(),
    )
    .unwrap();
    assert!((b - 2.0).abs() < 1e-12);
    for n in 2..=5 {
        let opt = maximize_bell(n, 0.0, FRAC_PI_2).unwrap();
        assert!((opt.b_star - 2.0).abs() < 1e-9, "N={n}: {opt:?}");
    }
}

#[test]
fn asymptotic_maxima() {
    let r: f64 = 3.0;
    let cases = [
        (2, 2.19, LN_2 / 3.0),
        (3, 2.32, 3.0 * 3f64.ln() / 16.0),
        (5, 2.48, 5.0 * LN_2 / 24.0),
    ];
    for (n, b, j) in cases {
        let opt = maximize_bell(n, r, FRAC_PI_2).unwrap();
        assert!((opt.b_star - b).abs() <= 0.01, "N={n}: {opt:?}");
        let scaled = opt.j_star * (2.0 * r).exp();
        assert!((scaled / j - 1.0).abs() <= 0.1, "N={n}: {scaled} vs {j}");
    }
}

#[test]
fn violation_for_weak_squeezing_and_growth_in_n() {
    for n in 2..=5 {
        assert!(maximize_bell(n, 0.05, FRAC_PI_2).unwrap().b_star > 2.0);
    }
    let at2: Vec<f64> = (2..=5)
        .map(|n| maximize_bell(n, 2.0, FRAC_PI_2).unwrap().b_star)
        .collect();
    assert!(at2.windows(2).all(|w| w[1] > w[0]), "{at2:?}");
}

#[test]
fn optimizer_is_deterministic() {
    let a = maximize_bell(4, 0.7, FRAC_PI_2).unwrap();
    let b = maximize_bell(4, 0.7, FRAC_PI_2).unwrap();
    assert_eq!(a, b);
    assert!(maximize_bell(3, -1.0, FRAC_PI_2).is_err());
}

proptest! {
    #[test]
    fn parity_is_bounded(
        n in 2usize..5,
        r in 0.0f64..2.0,
        re in prop::collection::vec(-2.0f64..2.0, 5),
        im in prop::collection::vec(-2.0f64..2.0, 5),
    ) {
        let alpha: Vec<Complex64> = (0..n).map(|k| Complex64::new(re[k], im[k])).collect();
        let p = displaced_parity(&family(n, r), &alpha).unwrap();
        prop_assert!(p.abs() <= 1.0 + 1e-12);
        prop_assert!(p >= 0.0);
    }

    #[test]
    fn deterministic_models_stay_within_two(
        n in 2usize..8,
        a in prop::collection::vec(prop::bool::ANY, 8),
        b in prop::collection::vec(prop::bool::ANY, 8),
    ) {
        let combo = BellCombination::mermin_klyshko(n).unwrap();
        let pm = |v: &[bool]| v[..n].iter().map(|&x| if x { 1 } else { -1 }).collect::<Vec<i8>>();
        let v = combo.evaluate_deterministic(&pm(&a), &pm(&b)).unwrap();
        prop_assert!(v.abs() <= 2.0);
    }
}
