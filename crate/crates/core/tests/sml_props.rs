use num_bigint::BigInt;
use orbitset::sml::{solve_linear_condition, zero_set, ClassOutcome, SmlSolver, CERTIFIER_NAMES};
use orbitset::{APSet, Completeness, Recurrence, SmlOptions};
use proptest::prelude::*;

/// Indices `k ≤ bound` with `u_k = d`, by iterating the relation directly.
fn brute(coeffs: &[i64], initial: &[i64], d: i64, bound: usize) -> Vec<u64> {
    let n = coeffs.len();
    let c: Vec<BigInt> = coeffs.iter().map(|&x| x.into()).collect();
    let mut window: Vec<BigInt> = initial.iter().map(|&x| x.into()).collect();
    let target = BigInt::from(d);
    let mut out = Vec::new();
    for k in 0..=bound {
        if window[0] == target {
            out.push(k as u64);
        }
        let next: BigInt = (0..n).map(|i| &c[i] * &window[n - 1 - i]).sum();
        window.remove(0);
        window.push(next);
    }
    out
}

fn case() -> impl Strategy<Value = (Vec<i64>, Vec<i64>, i64)> {
    (1usize..=4).prop_flat_map(|n| {
        (
            prop::collection::vec(-5i64..=5, n).prop_filter("c_n ≠ 0", |c| c[c.len() - 1] != 0),
            prop::collection::vec(-5i64..=5, n),
            -10i64..=10,
        )
    })
}

fn solve(c: &[i64], u: &[i64], d: i64, options: &SmlOptions) -> APSet {
    let rec = Recurrence::from_i64s(c, u).unwrap();
    solve_linear_condition(&[(1.into(), rec)], &d.into(), options).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn sound_and_complete_up_to_the_bound((c, u, d) in case()) {
        let options = SmlOptions::default();
        let k = options.search_bound;
        let set = solve(&c, &u, d, &options);
        prop_assert_eq!(set.enumerate_up_to(k), brute(&c, &u, d, k as usize));
    }

    #[test]
    fn progressions_are_solutions((c, u, d) in case()) {
        let set = solve(&c, &u, d, &SmlOptions::default().with_search_bound(500));
        let rec = Recurrence::from_i64s(&c, &u).unwrap();
        for p in set.progressions().iter().filter(|p| !p.is_singleton()) {
            for j in 0..50 {
                prop_assert_eq!(rec.evaluate(p.first + j * p.modulus), BigInt::from(d));
            }
        }
    }

    #[test]
    fn complete_flag_survives_a_longer_scan((c, u, d) in case()) {
        let k = 300;
        let set = solve(&c, &u, d, &SmlOptions::default().with_search_bound(k));
        if set.completeness() == Completeness::Complete {
            prop_assert_eq!(set.enumerate_up_to(10 * k), brute(&c, &u, d, 10 * k as usize));
        } else {
            prop_assert_eq!(set.completeness(), Completeness::VerifiedUpTo(k));
        }
    }

    #[test]
    fn each_certifier_alone_is_sound((c, u, d) in case(), which in 0..CERTIFIER_NAMES.len()) {
        let options = SmlOptions { certifiers: vec![CERTIFIER_NAMES[which].to_string()], ..SmlOptions::default().with_search_bound(200) };
        let set = solve(&c, &u, d, &options);
        let want = brute(&c, &u, d, 2000);
        if set.completeness().is_complete() {
            prop_assert_eq!(set.enumerate_up_to(2000), want);
        } else {
            prop_assert_eq!(set.enumerate_up_to(200), want.into_iter().filter(|&k| k <= 200).collect::<Vec<_>>());
        }
    }
}

#[test]
fn worked_examples() {
    let opts = SmlOptions::default();
    let solver = SmlSolver::new(opts.clone()).unwrap();
    let report = solver
        .report(&Recurrence::from_i64s(&[0, 4], &[0, -4]).unwrap())
        .unwrap();
    assert_eq!(report.set, APSet::progression(2, 0));
    assert!(matches!(report.classes[1], ClassOutcome::Certified(_)));

    let fib = zero_set(&Recurrence::fibonacci(), &opts).unwrap();
    assert_eq!(fib.enumerate_up_to(10_000), vec![0]);
    assert_eq!(
        zero_set(&Recurrence::from_i64s(&[1, 1], &[0, 0]).unwrap(), &opts).unwrap(),
        APSet::naturals()
    );

    let pow2 = Recurrence::from_i64s(&[2], &[1]).unwrap();
    assert_eq!(
        solve_linear_condition(&[(1.into(), pow2)], &8.into(), &opts).unwrap(),
        APSet::singletons([3])
    );
    let f = Recurrence::fibonacci();
    let all = solve_linear_condition(&[(1.into(), f.clone()), ((-1).into(), f)], &0.into(), &opts)
        .unwrap();
    assert_eq!(all, APSet::naturals());
    let five = Recurrence::constant(5.into());
    let none = solve_linear_condition(&[(1.into(), five)], &7.into(), &opts).unwrap();
    assert!(none.is_empty() && none.completeness().is_complete());
}

#[test]
fn unknown_certifier_is_rejected() {
    let options = SmlOptions {
        certifiers: vec!["oracle".into()],
        ..SmlOptions::default()
    };
    assert!(SmlSolver::new(options).is_err());
}
