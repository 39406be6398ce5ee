use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use orbitset::Recurrence;
use proptest::prelude::*;

/// Front-to-back iteration of the defining relation.
fn naive_terms(coeffs: &[i64], initial: &[i64], count: usize) -> Vec<BigInt> {
    let n = coeffs.len();
    let mut u: Vec<BigInt> = initial.iter().map(|&x| BigInt::from(x)).collect();
    while u.len() < count {
        let k = u.len();
        let next: BigInt = (1..=n)
            .map(|i| BigInt::from(coeffs[i - 1]) * &u[k - i])
            .sum();
        u.push(next);
    }
    u.truncate(count);
    u
}

fn naive_mod_states(coeffs: &[i64], initial: &[i64], m: u64, count: usize) -> Vec<Vec<u64>> {
    let terms: Vec<u64> = {
        let n = coeffs.len();
        let mi = m as i64;
        let mut u: Vec<i64> = initial.iter().map(|x| x.rem_euclid(mi)).collect();
        while u.len() < count + n {
            let k = u.len();
            let next = (1..=n)
                .map(|i| coeffs[i - 1] * u[k - i])
                .sum::<i64>()
                .rem_euclid(mi);
            u.push(next);
        }
        u.into_iter().map(|x| x as u64).collect()
    };
    (0..count)
        .map(|k| terms[k..k + coeffs.len()].to_vec())
        .collect()
}

fn recurrence_params(max_order: usize, bound: i64) -> impl Strategy<Value = (Vec<i64>, Vec<i64>)> {
    (1..=max_order).prop_flat_map(move |n| {
        let coeffs = prop::collection::vec(-bound..=bound, n)
            .prop_filter("c_n must be nonzero", |c| c[c.len() - 1] != 0);
        (coeffs, prop::collection::vec(-bound..=bound, n))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn evaluate_matches_iteration((c, u) in recurrence_params(4, 5)) {
        let rec = Recurrence::from_i64s(&c, &u).unwrap();
        let want = naive_terms(&c, &u, 501);
        for k in (0..=500).step_by(7).chain([500]) {
            prop_assert_eq!(rec.evaluate(k as u64), want[k].clone());
        }
        prop_assert_eq!(rec.terms(501), want);
    }

    #[test]
    fn subsample_matches_strided_terms((c, u) in recurrence_params(4, 4), m in 1u64..=6, r_seed in 0u64..6) {
        let rec = Recurrence::from_i64s(&c, &u).unwrap();
        let r = r_seed % m;
        let sub = rec.subsample(m, r);
        prop_assert!(sub.order() <= rec.order());
        let all = naive_terms(&c, &u, (m * 200 + r + 1) as usize);
        for k in 0..=200u64 {
            prop_assert_eq!(sub.evaluate(k), all[(m * k + r) as usize].clone());
        }
    }

    #[test]
    fn impulse_combinations_satisfy_the_relation(
        e in prop::collection::vec(-4i64..=4, 1..=4).prop_filter("e_g ≠ 0", |e| e[e.len() - 1] != 0),
        v_seed in prop::collection::vec(-6i64..=6, 4),
    ) {
        let g = e.len();
        let eb: Vec<BigInt> = e.iter().map(|&x| BigInt::from(x)).collect();
        let z: Vec<Vec<BigInt>> = (0..g).map(|j| Recurrence::impulse(&eb, j).unwrap().terms(100 + g + 1)).collect();
        for (j, zj) in z.iter().enumerate() {
            for (k, zjk) in zj.iter().take(g).enumerate() {
                prop_assert_eq!(zjk.clone(), BigInt::from(u8::from(k == j)));
            }
        }
        let w: Vec<BigInt> = (0..100 + g + 1).map(|k| (0..g).map(|j| &z[j][k] * v_seed[j]).sum()).collect();
        for k in 0..=100 {
            let rhs: BigInt = (1..=g).map(|i| &eb[i - 1] * &w[k + g - i]).sum();
            prop_assert_eq!(w[k + g].clone(), rhs);
        }
    }

    #[test]
    fn shift_reads_later_terms((c, u) in recurrence_params(3, 5), by in 0u64..40) {
        let rec = Recurrence::from_i64s(&c, &u).unwrap();
        let shifted = rec.shift(by);
        let all = naive_terms(&c, &u, by as usize + 60);
        prop_assert_eq!(shifted.coeffs(), rec.coeffs());
        for k in 0..60u64 {
            prop_assert_eq!(shifted.evaluate(k), all[(k + by) as usize].clone());
        }
    }

    #[test]
    fn linear_combination_matches_termwise(
        (c1, u1) in recurrence_params(3, 4),
        (c2, u2) in recurrence_params(2, 4),
        l1 in -3i64..=3,
        l2 in -3i64..=3,
        d in -10i64..=10,
    ) {
        let a = Recurrence::from_i64s(&c1, &u1).unwrap();
        let b = Recurrence::from_i64s(&c2, &u2).unwrap();
        let comb = Recurrence::linear_combination(&[(l1.into(), a.clone()), (l2.into(), b.clone())], &d.into());
        let (ta, tb) = (a.terms(80), b.terms(80));
        for k in 0..80 {
            let want = &ta[k] * l1 + &tb[k] * l2 - d;
            prop_assert_eq!(comb.evaluate(k as u64), want);
        }
        prop_assert!(comb.order() <= a.order() + b.order() + 1);
    }

    #[test]
    fn identically_zero_iff_first_terms_vanish((c, u) in recurrence_params(4, 2)) {
        let rec = Recurrence::from_i64s(&c, &u).unwrap();
        let zero = rec.terms(60).iter().all(Zero::is_zero);
        prop_assert_eq!(rec.is_identically_zero(), zero);
    }

    #[test]
    fn state_orbit_is_minimal((c, u) in recurrence_params(3, 6), m in 2u64..=12) {
        let rec = Recurrence::from_i64s(&c, &u).unwrap();
        let orbit = rec.state_orbit_mod(m).unwrap();
        prop_assert!(orbit.preperiod + orbit.period <= m.pow(c.len() as u32));
        // first repeat of the naive state sequence
        let states = naive_mod_states(&c, &u, m, (m.pow(c.len() as u32) + 2) as usize);
        let mut first: HashMap<&Vec<u64>, usize> = HashMap::new();
        let (rho, pi) = states
            .iter()
            .enumerate()
            .find_map(|(k, s)| match first.get(s) {
                Some(&j) => Some((j as u64, (k - j) as u64)),
                None => {
                    first.insert(s, k);
                    None
                }
            })
            .unwrap();
        prop_assert_eq!((orbit.preperiod, orbit.period), (rho, pi));
        let (rho, pi) = (rho as usize, pi as usize);
        if rho > 0 {
            prop_assert_ne!(&states[rho - 1], &states[rho - 1 + pi]);
        }
        for q in 1..pi {
            prop_assert_ne!(&states[rho], &states[rho + q]);
        }
    }

    #[test]
    fn solution_set_mod_matches_evaluation((c, u) in recurrence_params(3, 6), m in 2u64..=12, d_seed in 0u64..12) {
        let rec = Recurrence::from_i64s(&c, &u).unwrap();
        let d = d_seed % m;
        let set = rec.solution_set_mod(m, d).unwrap();
        prop_assert!(set.completeness().is_complete());
        let orbit = rec.state_orbit_mod(m).unwrap();
        let horizon = orbit.preperiod + 3 * orbit.period;
        let terms = rec.terms(horizon as usize + 1);
        for (k, t) in terms.iter().enumerate() {
            let hit = t.mod_floor(&BigInt::from(m)).to_u64().unwrap() == d;
            prop_assert_eq!(set.contains(k as u64), hit, "k = {}", k);
        }
    }
}

#[test]
fn worked_examples() {
    let fib = Recurrence::fibonacci();
    assert_eq!(fib.evaluate(10), BigInt::from(55));
    assert_eq!(
        Recurrence::from_i64s(&[1], &[5])
            .unwrap()
            .evaluate(1_000_000),
        BigInt::from(5)
    );
    assert_eq!(
        Recurrence::from_i64s(&[0, 4], &[0, -4])
            .unwrap()
            .evaluate(3),
        BigInt::from(-16)
    );

    let two = Recurrence::from_i64s(&[2], &[1]).unwrap();
    let orbit = two.state_orbit_mod(4).unwrap();
    assert_eq!((orbit.preperiod, orbit.period), (2, 1));
    assert_eq!(
        two.solution_set_mod(4, 2).unwrap().enumerate_up_to(100),
        vec![1]
    );

    let five = Recurrence::constant(5.into());
    assert_eq!(
        five.solution_set_mod(3, 2).unwrap(),
        orbitset::APSet::naturals()
    );
}
