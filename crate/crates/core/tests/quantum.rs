use std::f64::consts::PI;

use hoplab::quantum::{
    apply_not, borel_block_test, chsh, correlation, no_signaling_check, permutation_distance, prng_bits,
    singlet_sample, ChshSettings, Permutation, PermutationMetric, Qubit, SingletSource,
};
use num_complex::Complex64;
use proptest::prelude::*;

/// Kendall tau as the number of element pairs the two rankings order
/// differently.
fn kendall_pairs(p: &Permutation, q: &Permutation) -> usize {
    let (p, q) = (p.image(), q.image());
    let mut count = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if (p[i] < p[j]) != (q[i] < q[j]) {
                count += 1;
            }
        }
    }
    count
}

/// Cayley distance by breadth-first search over transpositions.
fn cayley_bfs(p: &Permutation, q: &Permutation) -> usize {
    use std::collections::{HashSet, VecDeque};
    let n = p.len();
    let mut seen = HashSet::from([p.image().to_vec()]);
    let mut queue = VecDeque::from([(p.image().to_vec(), 0)]);
    while let Some((cur, d)) = queue.pop_front() {
        if cur == q.image() {
            return d;
        }
        for i in 0..n {
            for j in i + 1..n {
                let mut next = cur.clone();
                next.swap(i, j);
                if seen.insert(next.clone()) {
                    queue.push_back((next, d + 1));
                }
            }
        }
    }
    unreachable!()
}

#[test]
fn metric_axioms_on_s4() {
    let group = Permutation::all(4);
    for metric in [
        PermutationMetric::Cayley,
        PermutationMetric::KendallTau,
        PermutationMetric::Hamming,
    ] {
        let d = |a: &Permutation, b: &Permutation| permutation_distance(a, b, metric).unwrap();
        for p in &group {
            assert_eq!(d(p, p), 0);
            for q in &group {
                let pq = d(p, q);
                assert_eq!(pq, d(q, p));
                assert!(p == q || pq > 0);
                for r in &group {
                    assert!(d(p, r) <= pq + d(q, r));
                }
            }
        }
    }
}

#[test]
fn distances_match_brute_force() {
    let group = Permutation::all(4);
    for p in &group {
        for q in &group {
            assert_eq!(
                permutation_distance(p, q, PermutationMetric::KendallTau).unwrap(),
                kendall_pairs(p, q)
            );
            assert_eq!(
                permutation_distance(p, q, PermutationMetric::Cayley).unwrap(),
                cayley_bfs(p, q)
            );
        }
    }
}

#[test]
fn not_gate_preserves_norm() {
    let q = Qubit::new(Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)).unwrap();
    let x = apply_not(q);
    assert!((x.norm_sqr() - 1.0).abs() < 1e-12);
    assert_eq!(apply_not(x), q);
}

#[test]
fn correlation_error_shrinks_like_inverse_root_n() {
    let delta = PI / 3.0;
    for n in [10_000u64, 100_000, 1_000_000] {
        let e = correlation(&singlet_sample(0.0, delta, n, 31).unwrap()).unwrap();
        let sigma = ((1.0 - delta.cos().powi(2)) / n as f64).sqrt();
        assert!((e.value + delta.cos()).abs() < 4.0 * sigma, "n={n}");
    }
}

#[test]
fn orthogonal_settings_fill_cells_evenly() {
    let n = 1_000_000u64;
    let c = singlet_sample(0.0, PI / 2.0, n, 32).unwrap();
    let sigma = (n as f64 * 3.0 / 16.0).sqrt();
    for cell in [c.pp, c.pm, c.mp, c.mm] {
        assert!((cell as f64 - n as f64 / 4.0).abs() < 4.0 * sigma);
    }
    let e = correlation(&c).unwrap();
    assert!(e.value.abs() < 4.0 / (n as f64).sqrt());
}

#[test]
fn optimal_chsh_reaches_tsirelson() {
    let r = chsh(&ChshSettings::OPTIMAL, 1_000_000, 33).unwrap();
    assert!((r.s - 2.0 * 2f64.sqrt()).abs() < 0.01, "{}", r.s);
    let aligned = ChshSettings {
        a: 0.3,
        a_prime: 0.3 + PI / 2.0,
        b: 0.3,
        b_prime: 0.3 + PI / 2.0,
    };
    let r = chsh(&aligned, 200_000, 34).unwrap();
    assert!((r.s - 2.0).abs() < 5.0 * r.stderr + 1e-12, "{}", r.s);
}

#[test]
fn no_signaling_sweep() {
    for i in 0..10 {
        let ta = 0.3 * i as f64;
        let r = no_signaling_check(ta, 0.1 * i as f64, PI - 0.2 * i as f64, 1_000_000, 40 + i).unwrap();
        assert!(r.delta < r.bound, "pair {i}: {} >= {}", r.delta, r.bound);
    }
}

#[test]
fn no_signaling_noise_shrinks() {
    let mean_delta = |n: u64| {
        (0..20)
            .map(|s| no_signaling_check(0.4, 0.0, 1.3, n, 100 + s).unwrap().delta)
            .sum::<f64>()
            / 20.0
    };
    let (small, large) = (mean_delta(10_000), mean_delta(1_000_000));
    // ten-fold in sqrt(n), allow slack for the 20-run average
    assert!(large < small / 4.0, "{small} vs {large}");
}

#[test]
fn borel_blocks() {
    assert!(borel_block_test(&prng_bits(1_000_000, 50), 3).unwrap().all_pass());
    let stream: Vec<bool> = SingletSource::new(0.0, PI / 2.0, 51)
        .take(100_000)
        .map(|(a, _)| a)
        .collect();
    assert!(borel_block_test(&stream, 1).unwrap().passes(1));
}

proptest! {
    #[test]
    fn equal_settings_never_agree(theta in -PI..PI, seed in 0u64..1000) {
        let c = singlet_sample(theta, theta, 5000, seed).unwrap();
        prop_assert_eq!(c.pp + c.mm, 0);
    }

    #[test]
    fn marginals_are_fair(ta in -PI..PI, tb in -PI..PI, seed in 0u64..1000) {
        let n = 100_000u64;
        let c = singlet_sample(ta, tb, n, seed).unwrap();
        let sigma = (0.25 / n as f64).sqrt();
        prop_assert!((c.marginal_a() - 0.5).abs() < 4.0 * sigma);
        prop_assert!((c.marginal_b() - 0.5).abs() < 4.0 * sigma);
    }
}
