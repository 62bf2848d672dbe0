use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use limitper::chair::{chair_amplitudes, chair_label, ChairWeights};
use limitper::dyadic::{chair_module_enumerate, pd_module_enumerate};
use limitper::numerics::{
    approximant_amplitude_chair, direct_amplitude, empirical_amplitude, empirical_autocorrelation,
    fixed_point_cube, WeightedComb,
};
use limitper::period_doubling::{pd_amplitudes, pd_eta, pd_label, PdWeights};
use limitper::subst::{builtin, fixed_point_window, Label, PatternWindow};
use limitper::{Complex, Dyadic, DyadicPoint2, Interval};

fn pd_window(n: usize) -> PatternWindow {
    fixed_point_cube(&builtin::period_doubling_squared(), &builtin::period_doubling_seed(), n).unwrap()
}

fn chair_window(n: usize) -> PatternWindow {
    fixed_point_cube(&builtin::chair(), &builtin::chair_seed(), n).unwrap()
}

/// Colour of cell `x` read off the rule table: the cell sits inside the
/// image of its parent `⌊x/2⌋`, and the seed cells are their own parents.
fn chair_by_descent(x: [i64; 2]) -> Label {
    let sys = builtin::chair();
    let seed = builtin::chair_seed();
    let mut path = Vec::new();
    let mut p = x;
    while !(-1..=0).contains(&p[0]) || !(-1..=0).contains(&p[1]) {
        path.push([p[0].rem_euclid(2), p[1].rem_euclid(2)]);
        p = [p[0].div_euclid(2), p[1].div_euclid(2)];
    }
    let mut label = seed.window().get(&p).unwrap();
    for &[dx, dy] in path.iter().rev() {
        // images are stored top row first
        label = sys.rule(label)[((1 - dy) * 2 + dx) as usize];
    }
    label
}

fn random_weights(rng: &mut StdRng, n: usize) -> Vec<Complex> {
    (0..n)
        .map(|_| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

#[test]
fn pd_label_matches_nine_iterations() {
    let w = fixed_point_window(
        &builtin::period_doubling_squared(),
        &builtin::period_doubling_seed(),
        9,
    )
    .unwrap();
    assert_eq!(w.origin(), [-(1 << 18)]);
    for (pos, label) in w.cells() {
        assert_eq!(pd_label(pos[0]).index(), label, "position {}", pos[0]);
    }
}

#[test]
fn chair_label_matches_rule_table_descent() {
    for y in -256..256 {
        for x in -256..256 {
            assert_eq!(chair_label([x, y]), chair_by_descent([x, y]), "cell ({x},{y})");
        }
    }
    // far from the origin as well
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..20_000 {
        let x = [rng.gen_range(-(1i64 << 40)..1 << 40), rng.gen_range(-(1i64 << 40)..1 << 40)];
        assert_eq!(chair_label(x), chair_by_descent(x), "cell {x:?}");
    }
}

#[test]
fn chair_classes_partition_with_equal_density() {
    let mut counts = [0usize; 4];
    for y in -256..256 {
        for x in -256..256 {
            let l = chair_label([x, y]);
            assert!(l < 4);
            counts[l as usize] += 1;
        }
    }
    let total: usize = counts.iter().sum();
    assert_eq!(total, 512 * 512);
    for c in counts {
        assert!((c as f64 / total as f64 - 0.25).abs() < 0.01, "{counts:?}");
    }
}

#[test]
fn amplitude_moduli_are_lattice_periodic() {
    let b = Interval::closed(-1.0, 1.0).unwrap();
    for k in chair_module_enumerate(5, &b, &b) {
        let moved = k.checked_add(DyadicPoint2::integer(2, -1)).unwrap();
        let (a, c) = (chair_amplitudes(k).a, chair_amplitudes(moved).a);
        for i in 0..4 {
            assert!((a[i].norm() - c[i].norm()).abs() < 1e-12, "k={k}, colour {i}");
        }
    }
    for k in pd_module_enumerate(10, &Interval::closed(0.0, 1.0).unwrap()) {
        let moved = k.checked_add(Dyadic::integer(-3)).unwrap();
        assert_eq!(pd_amplitudes(k).a.norm(), pd_amplitudes(moved).a.norm());
    }
}

#[test]
fn complex_weights_autocorrelation() {
    let w = PdWeights::new(Complex::new(1.0, 1.0), Complex::new(0.5, -2.0));
    let comb = WeightedComb::new(pd_window(1 << 18), w.as_array().to_vec()).unwrap();
    for z in -16..=16 {
        let emp = empirical_autocorrelation(&comb, &[z]).unwrap();
        assert!((emp - pd_eta(z, &w)).norm() < 0.01, "z={z}: {emp} vs {}", pd_eta(z, &w));
    }
}

#[test]
fn autocorrelation_is_hermitian_and_peaks_at_zero() {
    let mut rng = StdRng::seed_from_u64(11);
    let comb = WeightedComb::new(chair_window(128), random_weights(&mut rng, 4)).unwrap();
    let n = 257.0f64;
    let max_w2 = comb.weights().iter().map(|w| w.norm_sqr()).fold(0.0, f64::max);
    let at_zero = empirical_autocorrelation(&comb, &[0, 0]).unwrap();
    assert!(at_zero.im.abs() < 1e-12);
    for z in [[1, 0], [0, 3], [-2, 5], [7, 7], [16, -9]] {
        let plus = empirical_autocorrelation(&comb, &z).unwrap();
        let minus = empirical_autocorrelation(&comb, &[-z[0], -z[1]]).unwrap();
        let bound = (z[0].abs() + z[1].abs()) as f64 * n / (n * n) * max_w2;
        assert!((plus - minus.conj()).norm() <= bound.max(1e-12));
        assert!(at_zero.re >= plus.norm());
    }
}

#[test]
fn approximant_tail_is_geometric() {
    let origin = DyadicPoint2::integer(0, 0);
    for level in [0u32, 5, 12, 20, 40] {
        let got = approximant_amplitude_chair(level, 0, origin);
        let tail = 2f64.powi(-(level as i32) - 3);
        assert!((got - Complex::new(0.25 - tail, 0.0)).norm() < 1e-15, "level {level}");
    }
    let b = Interval::closed(-1.0, 1.0).unwrap();
    for k in chair_module_enumerate(1, &b, &b) {
        for colour in 0..4 {
            let err = (approximant_amplitude_chair(45, colour, k) - chair_amplitudes(k).a[colour]).norm();
            assert!(err < 1e-12, "k={k}, colour {colour}: {err:e}");
        }
    }
}

#[test]
fn error_trend_falls_over_three_doublings() {
    let ks = [Dyadic::normalize(1, 1), Dyadic::normalize(1, 2), Dyadic::normalize(3, 3), Dyadic::normalize(5, 6)];
    let w = PdWeights::balanced();
    for k in ks {
        let exact = pd_amplitudes(k).combined(&w);
        let errs: Vec<f64> = (14..=17)
            .map(|e| {
                let comb = WeightedComb::new(pd_window(1 << e), w.as_array().to_vec()).unwrap();
                (empirical_amplitude(&comb, k).unwrap() - exact).norm()
            })
            .collect();
        // Single steps can go up with the boundary letters; the trend over
        // three doublings may not.
        assert!(errs[3] <= 1.1 * errs[0], "k={k}: {errs:?}");
        let logs: Vec<f64> = errs.iter().map(|e| e.max(1e-300).ln()).collect();
        let mean = logs.iter().sum::<f64>() / 4.0;
        let slope: f64 = logs.iter().enumerate().map(|(i, l)| (i as f64 - 1.5) * (l - mean)).sum();
        assert!(slope <= 0.0, "k={k}: {errs:?}");
    }
}

#[test]
fn bragg_mass_grows_to_the_mean_square() {
    let mut rng = StdRng::seed_from_u64(3);
    let alpha = random_weights(&mut rng, 4);
    let w = ChairWeights::new(alpha.clone().try_into().unwrap());
    let mean_square: f64 = alpha.iter().map(|a| a.norm_sqr()).sum::<f64>() / 4.0;
    let cell = Interval::half_open(0.0, 1.0).unwrap();
    let mut previous = 0.0;
    for s in 0..=6 {
        let total: f64 = chair_module_enumerate(s, &cell, &cell)
            .into_iter()
            .map(|k| chair_amplitudes(k).combined(&w).norm_sqr())
            .sum();
        assert!(total >= previous - 1e-12);
        assert!(total <= mean_square + 1e-12, "s={s}: {total} > {mean_square}");
        previous = total;
    }
    assert!(previous >= 0.99 * mean_square, "{previous} vs {mean_square}");

    let mut previous = 0.0;
    for r in 0..=12 {
        let total: f64 = pd_module_enumerate(r, &Interval::half_open(0.0, 1.0).unwrap())
            .into_iter()
            .map(|k| pd_amplitudes(k).combined(&PdWeights::balanced()).norm_sqr())
            .sum();
        assert!(total >= previous && total <= 1.0 + 1e-12);
        previous = total;
    }
}

#[test]
fn window_sums_ignore_thread_count() {
    let mut rng = StdRng::seed_from_u64(5);
    let comb = WeightedComb::new(chair_window(300), random_weights(&mut rng, 4)).unwrap();
    let k = DyadicPoint2::normalize(3, -5, 3);
    let deep = DyadicPoint2::normalize(7, 1, 12);
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| {
                (
                    empirical_amplitude(&comb, k).unwrap(),
                    direct_amplitude(&comb, deep).unwrap(),
                    empirical_autocorrelation(&comb, &[3, -2]).unwrap(),
                )
            })
    };
    let one = run(1);
    for threads in [2, 5, 16] {
        assert_eq!(run(threads), one, "{threads} threads");
    }
}
