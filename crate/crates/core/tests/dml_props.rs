mod common;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use orbitset::dml::{
    decompose_point, free_condition, minimal_polynomial, torsion_condition, torsion_orbit,
};
use orbitset::lattice::{
    coset_constraints, free_intersection, triangular_basis, DEFAULT_TORSION_CAP,
};
use orbitset::{
    brute_force_oracle, orbit_coset_intersection, Coset, DynamicalProblem, Endomorphism, FgAbGroup,
    GroupElement, Pipeline, Recurrence, SmlOptions, Subgroup,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::ints;

fn problem(seed: u64) -> DynamicalProblem {
    common::random_problem(&mut ChaCha8Rng::seed_from_u64(seed))
}

fn pipeline(bound: u64) -> Pipeline {
    Pipeline::new(
        SmlOptions::default().with_search_bound(bound),
        DEFAULT_TORSION_CAP,
    )
    .unwrap()
}

/// `z_{k,j}` for `k < count`, built from the impulse recurrences.
fn impulses(e: &[BigInt], count: usize) -> Vec<Vec<BigInt>> {
    (0..e.len())
        .map(|j| Recurrence::impulse(e, j).unwrap().terms(count))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn agrees_with_the_oracle(seed in any::<u64>()) {
        let p = problem(seed);
        let set = pipeline(600).solve(&p).unwrap();
        prop_assert_eq!(set.enumerate_up_to(600), brute_force_oracle(&p, 600));
    }

    #[test]
    fn shifting_the_start_shifts_the_answer(seed in any::<u64>()) {
        let p = problem(seed);
        let next = DynamicalProblem { point: p.phi.apply(&p.group, &p.point), ..p.clone() };
        let solver = pipeline(1100);
        let (a, b) = (solver.solve(&p).unwrap(), solver.solve(&next).unwrap());
        for k in 0..=1000u64 {
            prop_assert_eq!(b.contains(k), a.contains(k + 1), "k = {}", k);
        }
    }

    #[test]
    fn minimal_relation_holds(seed in any::<u64>()) {
        let p = problem(seed);
        let mp = minimal_polynomial(&p.group, &p.phi, &p.point);
        prop_assert!(!mp.e.last().unwrap().is_zero());
        let g = mp.degree();
        let orbit: Vec<GroupElement> = p.phi.orbit(&p.group, &p.point).skip(mp.shift as usize).take(3 * g + 1).collect();
        for k in 0..=2 * g {
            let mut acc = p.group.zero();
            for (i, e) in mp.e.iter().enumerate() {
                let x = &orbit[k + g - 1 - i];
                let scaled = p.group.element(
                    &x.torsion.iter().map(|&t| e * t).collect::<Vec<_>>(),
                    x.free.iter().map(|f| e * f).collect(),
                ).unwrap();
                acc = p.group.add(&acc, &scaled);
            }
            prop_assert_eq!(&acc, &orbit[k + g]);
        }
    }

    #[test]
    fn torsion_and_free_parts_follow_the_impulses(seed in any::<u64>()) {
        let p = problem(seed);
        let mp = minimal_polynomial(&p.group, &p.phi, &p.point);
        let dec = decompose_point(&p.group, &p.phi, &p.point, &mp);
        let z = impulses(&mp.e, 501);
        let orbit: Vec<GroupElement> = p.phi.orbit(&p.group, &p.point).skip(mp.shift as usize).take(501).collect();
        let d = p.group.invariant_factors();
        let tors = torsion_orbit(&p.group, &mp, &dec, DEFAULT_TORSION_CAP).unwrap();
        for (k, x) in orbit.iter().enumerate() {
            let via_z: Vec<u64> = (0..d.len())
                .map(|r| {
                    let s: BigInt = (0..mp.degree()).map(|j| &z[j][k] * dec.torsion[j][r]).sum();
                    s.mod_floor(&BigInt::from(d[r])).to_u64().unwrap()
                })
                .collect();
            prop_assert_eq!(&via_z, &x.torsion);
            let idx = if (k as u64) < tors.preperiod { k as u64 } else { tors.preperiod + (k as u64 - tors.preperiod) % tors.period };
            prop_assert_eq!(&tors.values[idx as usize], &x.torsion);
            prop_assert!(torsion_condition(&p.group, &mp, &dec, &x.torsion).unwrap().contains(k as u64));
            for i in 0..p.group.rank() {
                let s: BigInt = (0..mp.degree()).map(|j| &z[j][k] * &dec.coefficients[j][i]).sum();
                prop_assert_eq!(&s, &x.free[i]);
            }
        }
    }

    #[test]
    fn free_condition_is_sound(seed in any::<u64>()) {
        let p = problem(seed);
        prop_assume!(!p.cosets.is_empty() && p.group.rank() > 0);
        let mp = minimal_polynomial(&p.group, &p.phi, &p.point);
        let dec = decompose_point(&p.group, &p.phi, &p.point, &mp);
        let coset = &p.cosets[0];
        let basis = triangular_basis(&free_intersection(&p.group, &coset.subgroup), p.group.rank());
        let constraints = coset_constraints(&basis, &coset.rep.free);
        let solver = pipeline(500);
        let set = free_condition(&mp, &dec, &constraints, solver.solver()).unwrap();
        let orbit = p.phi.orbit(&p.group, &p.point).skip(mp.shift as usize).take(501);
        for (k, x) in orbit.enumerate() {
            prop_assert_eq!(set.contains(k as u64), constraints.iter().all(|c| c.holds(&x.free)), "k = {}", k);
        }
    }
}

fn z() -> FgAbGroup {
    FgAbGroup::free(1)
}

fn el(t: &[u64], f: &[i64]) -> GroupElement {
    GroupElement {
        torsion: t.to_vec(),
        free: ints(f),
    }
}

fn free_map(m: &[&[i64]]) -> Endomorphism {
    Endomorphism {
        free_matrix: m.iter().map(|r| ints(r)).collect(),
        torsion_matrix: vec![],
        mixing: vec![],
    }
}

#[test]
fn worked_examples() {
    let opts = SmlOptions::default();
    let doubling = DynamicalProblem::new(
        z(),
        free_map(&[&[2]]),
        el(&[], &[1]),
        vec![Coset {
            rep: el(&[], &[1]),
            subgroup: Subgroup {
                generators: vec![el(&[], &[3])],
            },
        }],
    )
    .unwrap();
    let set = orbit_coset_intersection(&doubling, &opts).unwrap();
    assert_eq!(set, orbitset::APSet::progression(2, 0));
    assert_eq!(set.enumerate_up_to(100), brute_force_oracle(&doubling, 100));

    let z2 = FgAbGroup::free(2);
    let shear = free_map(&[&[1, 1], &[0, 1]]);
    let start = el(&[], &[0, 1]);
    let line = DynamicalProblem::new(
        z2.clone(),
        shear.clone(),
        start.clone(),
        vec![Coset {
            rep: el(&[], &[2, 1]),
            subgroup: Subgroup {
                generators: vec![el(&[], &[3, 0])],
            },
        }],
    )
    .unwrap();
    assert_eq!(
        orbit_coset_intersection(&line, &opts).unwrap(),
        orbitset::APSet::progression(3, 2)
    );
    let point = DynamicalProblem::new(
        z2,
        shear,
        start,
        vec![Coset {
            rep: el(&[], &[5, 1]),
            subgroup: Subgroup { generators: vec![] },
        }],
    )
    .unwrap();
    assert_eq!(
        orbit_coset_intersection(&point, &opts).unwrap(),
        orbitset::APSet::singletons([5])
    );
    assert_eq!(brute_force_oracle(&point, 100), vec![5]);

    let none = DynamicalProblem {
        cosets: vec![],
        ..doubling
    };
    let empty = orbit_coset_intersection(&none, &opts).unwrap();
    assert!(empty.is_empty() && empty.completeness().is_complete());
    assert!(brute_force_oracle(&none, 100).is_empty());

    let killed = DynamicalProblem::new(
        z(),
        free_map(&[&[0]]),
        el(&[], &[1]),
        vec![Coset {
            rep: el(&[], &[0]),
            subgroup: Subgroup { generators: vec![] },
        }],
    )
    .unwrap();
    let mp = minimal_polynomial(&killed.group, &killed.phi, &killed.point);
    assert_eq!((mp.e.clone(), mp.shift), (ints(&[1]), 1));
    let set = orbit_coset_intersection(&killed, &opts).unwrap();
    assert_eq!(set.enumerate_up_to(50), (1..=50).collect::<Vec<_>>());
}
