use num_traits::ToPrimitive;
use proptest::prelude::*;

use limitper::dyadic::{chair_module_enumerate, pd_module_enumerate, phase};
use limitper::subst::{
    builtin, find_legal_seed, fixed_point_window, letter_frequencies, natural_frequencies, parse_rules,
    render_rules, substitute, Kind, SubstitutionSystem,
};
use limitper::{Dyadic, DyadicPoint2, Interval};

fn dyadic() -> impl Strategy<Value = Dyadic> {
    (-(1i64 << 40)..(1i64 << 40), 0u32..20).prop_map(|(m, r)| Dyadic::normalize(m, r))
}

fn system() -> impl Strategy<Value = SubstitutionSystem> {
    (1usize..=4, 2usize..=3, prop::bool::ANY)
        .prop_flat_map(|(q, b, block)| {
            let kind = if block { Kind::Block } else { Kind::Word };
            let cells = b.pow(kind.dim() as u32);
            let rules = prop::collection::vec(prop::collection::vec(0..q as u8, cells), q);
            (Just(q), Just(b), Just(kind), rules)
        })
        .prop_map(|(q, b, kind, rules)| {
            let alphabet = (0..q).map(|i| format!("s{i}")).collect();
            SubstitutionSystem::new(alphabet, kind, b, rules).unwrap()
        })
}

proptest! {
    #[test]
    fn normal_form_is_unique(m in -(1i64 << 40)..(1i64 << 40), r in 0u32..16, j in 0u32..6) {
        let a = Dyadic::normalize(m, r);
        let b = Dyadic::normalize(m << j, r + j);
        prop_assert_eq!(a, b);
        prop_assert!(a.exp() == 0 || a.num() % 2 != 0);
    }

    #[test]
    fn point_normal_form_is_unique(m in -4096i64..4096, n in -4096i64..4096, s in 0u32..10, j in 0u32..4) {
        let a = DyadicPoint2::normalize(m, n, s);
        prop_assert_eq!(a, DyadicPoint2::normalize(m << j, n << j, s + j));
        prop_assert!(a.exp() == 0 || a.m() % 2 != 0 || a.n() % 2 != 0);
    }

    #[test]
    fn phase_is_multiplicative(a in dyadic(), b in dyadic()) {
        let sum = a.checked_add(b).unwrap();
        prop_assert!((phase(sum) - phase(a) * phase(b)).norm() < 1e-12);
        prop_assert!((phase(a).norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn module_nests_and_closes(r in 0u32..7, lo in -3i32..3, width in 1i32..3) {
        let interval = Interval::closed(lo as f64, (lo + width) as f64).unwrap();
        let coarse = pd_module_enumerate(r, &interval);
        let fine = pd_module_enumerate(r + 1, &interval);
        prop_assert!(coarse.iter().all(|k| fine.binary_search(k).is_ok()));
        for w in coarse.windows(2) {
            prop_assert!(w[0] < w[1]);
            let sum = w[0].checked_add(w[1]).unwrap();
            prop_assert!(sum.exp() <= r);
        }
        prop_assert_eq!(coarse.len() as i64, ((width as i64) << r) + 1);
    }

    #[test]
    fn chair_module_nests(s in 0u32..4) {
        let square = Interval::half_open(0.0, 1.0).unwrap();
        let coarse = chair_module_enumerate(s, &square, &square);
        let fine = chair_module_enumerate(s + 1, &square, &square);
        prop_assert_eq!(coarse.len(), 1usize << (2 * s));
        prop_assert!(coarse.iter().all(|k| fine.binary_search(k).is_ok()));
        for pair in coarse.windows(2) {
            let sum = pair[0].checked_add(pair[1]).unwrap();
            prop_assert!(sum.exp() <= s);
        }
    }

    #[test]
    fn rules_round_trip(sys in system()) {
        let text = render_rules(&sys);
        prop_assert_eq!(parse_rules(&text).unwrap(), sys);
    }

    #[test]
    fn fixed_point_windows_nest(sys in system(), n in 1u32..4) {
        if let Some((seed, p)) = find_legal_seed(&sys, 3) {
            prop_assume!(sys.factor().pow(p * n) <= 1 << 12);
            let power = sys.power(p);
            let small = fixed_point_window(&power, &seed, n - 1).unwrap();
            let large = fixed_point_window(&power, &seed, n).unwrap();
            prop_assert_eq!(substitute(&power, &small), large.clone());
            let centre = large.restrict(small.origin(), small.extent()).unwrap();
            prop_assert_eq!(centre, small);
        }
    }

    #[test]
    fn frequencies_converge(rules in prop::collection::vec(prop::collection::vec(0u8..2, 2), 2)) {
        let sys = SubstitutionSystem::new(vec!["a".into(), "b".into()], Kind::Word, 2, rules).unwrap();
        prop_assume!(sys.is_primitive());
        let (seed, p) = find_legal_seed(&sys, 4).expect("primitive binary rules have a legal seed");
        let power = sys.power(p);
        // Ten doublings of the word, whatever the power.
        let iterations = 10u32.div_ceil(p);
        let w = fixed_point_window(&power, &seed, iterations).unwrap();
        let exact = natural_frequencies(&sys).unwrap();
        let got = letter_frequencies(&w, 2);
        for (e, g) in exact.iter().zip(got) {
            let e = e.to_f64().unwrap();
            prop_assert!((e - g).abs() <= 0.01, "exact {} window {}", e, g);
        }
    }
}

#[test]
fn builtin_frequencies_converge() {
    for (sys, seed, iterations) in [
        (builtin::period_doubling_squared(), builtin::period_doubling_seed(), 5),
        (builtin::chair(), builtin::chair_seed(), 10),
    ] {
        let w = fixed_point_window(&sys, &seed, iterations).unwrap();
        let n = sys.alphabet().len();
        let exact = natural_frequencies(&sys).unwrap();
        for (e, g) in exact.iter().zip(letter_frequencies(&w, n)) {
            let e = e.to_f64().unwrap();
            assert!((e - g).abs() <= 0.01);
        }
    }
}
