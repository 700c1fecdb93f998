use hoplab::causal::{preserves_order, sample_event, CausalConfig, Relation};
use hoplab::frames::{
    fit_transformation, interval, light_clock_gamma, lorentz, radar_coordinates, Event, ObserverFrame,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn events(seed: u64, n: usize, c_s: f64) -> Vec<Event> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| sample_event(&mut rng, c_s)).collect()
}

fn max_entry_diff(a: [f64; 6], b: [f64; 6]) -> f64 {
    a.iter()
        .zip(&b)
        .map(|(x, y)| (x - y).abs() / y.abs().max(1.0))
        .fold(0.0, f64::max)
}

#[test]
fn gamma_matches_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..200 {
        let c = 10f64.powf(rng.random_range(-1.0..9.0));
        let v = rng.random_range(-0.999..0.999) * c;
        let closed = 1.0 / (1.0 - (v / c).powi(2)).sqrt();
        assert!((light_clock_gamma(v, c).unwrap() - closed).abs() < 1e-9 * closed);
    }
}

#[test]
fn boost_has_unit_determinant() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..100 {
        let v = rng.random_range(-0.99..0.99);
        assert!((lorentz(v, 1.0).unwrap().determinant() - 1.0).abs() < 1e-9);
    }
}

#[test]
fn boost_preserves_the_interval() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..1000 {
        let c = rng.random_range(0.5..3.0);
        let b = lorentz(rng.random_range(-0.9..0.9) * c, c).unwrap();
        let p = Event::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let q = Event::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let before = interval(p, q, c);
        let after = interval(b.apply(p), b.apply(q), c);
        assert!((before - after).abs() < 1e-9);
    }
}

#[test]
fn radar_fit_reproduces_the_boost() {
    let a = ObserverFrame::einstein(0.0, 0.0, 1.0).unwrap();
    let b = ObserverFrame::einstein(0.0, 0.6, 1.0).unwrap();
    let fit = fit_transformation(&events(4, 20, 1.0), &a, &b).unwrap();
    let expected = lorentz(0.6, 1.0).unwrap().entries();
    assert!(max_entry_diff(fit.map.entries(), expected) < 1e-6);
    assert!(fit.residual < 1e-9);
}

#[test]
fn moving_pair_composes_velocities() {
    let a = ObserverFrame::einstein(0.0, 0.5, 1.0).unwrap();
    let b = ObserverFrame::einstein(0.0, 0.8, 1.0).unwrap();
    let fit = fit_transformation(&events(5, 30, 1.0), &a, &b).unwrap();
    let w = (0.8 - 0.5) / (1.0 - 0.8 * 0.5);
    assert!((fit.map.boost_velocity() - w).abs() < 1e-9);
    assert!(max_entry_diff(fit.map.entries(), lorentz(w, 1.0).unwrap().entries()) < 1e-9);
}

#[test]
fn offset_observers_differ_by_a_translation_only() {
    let a = ObserverFrame::einstein(0.4, 0.0, 2.0).unwrap();
    let b = ObserverFrame::einstein(-0.3, 1.0, 2.0).unwrap();
    let fit = fit_transformation(&events(6, 25, 2.0), &a, &b).unwrap();
    let m = lorentz(1.0, 2.0).unwrap().matrix;
    assert!((fit.map.matrix - m).abs().max() < 1e-9);
    assert!(fit.residual < 1e-9);
}

#[test]
fn only_the_ratio_v_over_c_matters() {
    let base = {
        let a = ObserverFrame::einstein(0.0, 0.2, 1.0).unwrap();
        let b = ObserverFrame::einstein(0.0, -0.7, 1.0).unwrap();
        fit_transformation(&events(7, 20, 1.0), &a, &b)
            .unwrap()
            .map
            .matrix
    };
    for lambda in [0.5, 3.0, 299_792_458.0] {
        let a = ObserverFrame::einstein(0.0, 0.2 * lambda, lambda).unwrap();
        let b = ObserverFrame::einstein(0.0, -0.7 * lambda, lambda).unwrap();
        let m = fit_transformation(&events(7, 20, lambda), &a, &b)
            .unwrap()
            .map
            .matrix;
        assert!((m - base).abs().max() < 1e-9, "lambda {lambda}");
    }
}

#[test]
fn non_einstein_convention_breaks_interval_preservation() {
    let a = ObserverFrame::new(0.0, 0.0, 1.0, 0.7).unwrap();
    let b = ObserverFrame::new(0.0, 0.6, 1.0, 0.7).unwrap();
    let fit = fit_transformation(&events(8, 40, 1.0), &a, &b).unwrap();
    assert!(fit.map.interval_defect() > 1e-3);

    let a = ObserverFrame::einstein(0.0, 0.0, 1.0).unwrap();
    let b = ObserverFrame::einstein(0.0, 0.6, 1.0).unwrap();
    let fit = fit_transformation(&events(8, 40, 1.0), &a, &b).unwrap();
    assert!(fit.map.interval_defect() < 1e-9);
}

#[test]
fn fitted_frame_maps_preserve_causal_order() {
    let cfg = CausalConfig::new(1.0, Relation::Chronological).unwrap();
    let sample = events(9, 100, 1.0);
    for (va, vb) in [(0.0, 0.6), (-0.4, 0.9), (0.3, 0.3)] {
        let a = ObserverFrame::einstein(0.1, va, 1.0).unwrap();
        let b = ObserverFrame::einstein(-0.2, vb, 1.0).unwrap();
        let fit = fit_transformation(&events(10, 20, 1.0), &a, &b).unwrap();
        let verdict = preserves_order(|e| fit.map.apply(e), &sample, &cfg).unwrap();
        assert!(
            verdict.preserved(),
            "{va} -> {vb}: {:?}",
            verdict.violations.first()
        );
    }
}

proptest! {
    #[test]
    fn xi_is_half_the_round_trip(
        t in -5.0f64..5.0, x in -5.0f64..5.0, v in -0.95f64..0.95, c in 0.5f64..4.0, eps in 0.05f64..0.95,
    ) {
        let obs = ObserverFrame::new(0.3, v * c, c, eps).unwrap();
        let r = radar_coordinates(Event::new(t, x), &obs).unwrap();
        prop_assert!((r.xi.abs() - c * (r.tau_receive - r.tau_emit) / 2.0).abs() < 1e-12 * (1.0 + r.xi.abs()));
        prop_assert!(r.tau_emit <= r.tau + 1e-12 && r.tau <= r.tau_receive + 1e-12);
    }

    #[test]
    fn radar_agrees_with_boost_pointwise(t in -5.0f64..5.0, x in -5.0f64..5.0, v in -0.95f64..0.95) {
        let obs = ObserverFrame::einstein(0.0, v, 1.0).unwrap();
        let r = radar_coordinates(Event::new(t, x), &obs).unwrap();
        let b = lorentz(v, 1.0).unwrap().apply(Event::new(t, x));
        prop_assert!((r.tau - b.t).abs() < 1e-9 * (1.0 + b.t.abs()));
        prop_assert!((r.xi - b.x).abs() < 1e-9 * (1.0 + b.x.abs()));
    }
}
