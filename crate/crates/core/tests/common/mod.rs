#![allow(dead_code)]

use num_bigint::BigInt;
use orbitset::{Coset, DynamicalProblem, Endomorphism, FgAbGroup, GroupElement, Subgroup};
use rand::Rng;

pub fn ints(xs: &[i64]) -> Vec<BigInt> {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

fn entry(rng: &mut impl Rng, bound: i64) -> BigInt {
    BigInt::from(rng.gen_range(-bound..=bound))
}

const TORSION_CHOICES: [&[u64]; 12] = [
    &[],
    &[2],
    &[3],
    &[4],
    &[6],
    &[2, 2],
    &[2, 4],
    &[2, 6],
    &[3, 3],
    &[3, 6],
    &[4, 4],
    &[6, 6],
];

pub fn random_element(rng: &mut impl Rng, group: &FgAbGroup, bound: i64) -> GroupElement {
    GroupElement {
        torsion: group
            .invariant_factors()
            .iter()
            .map(|&d| rng.gen_range(0..d))
            .collect(),
        free: (0..group.rank()).map(|_| entry(rng, bound)).collect(),
    }
}

/// Rank at most 3, at most two invariant factors from {2, 3, 4, 6}, matrix
/// entries in [-3, 3], coset generators in [-5, 5], at most two cosets.
pub fn random_problem(rng: &mut impl Rng) -> DynamicalProblem {
    let rank = rng.gen_range(0..=3);
    let factors = TORSION_CHOICES[rng.gen_range(0..TORSION_CHOICES.len())].to_vec();
    let group = FgAbGroup::new(factors.clone(), rank).unwrap();
    let t = factors.len();
    let free_matrix = (0..rank)
        .map(|_| (0..rank).map(|_| entry(rng, 3)).collect())
        .collect();
    let torsion_matrix = (0..t)
        .map(|i| {
            (0..t)
                .map(|j| {
                    let (di, dj) = (factors[i] as i64, factors[j] as i64);
                    let g = num_integer::gcd(di, dj);
                    BigInt::from(rng.gen_range(-3..=3i64) * (di / g))
                })
                .collect()
        })
        .collect();
    let mixing = (0..t)
        .map(|_| (0..rank).map(|_| entry(rng, 3)).collect())
        .collect();
    let phi = Endomorphism {
        free_matrix,
        torsion_matrix,
        mixing,
    };
    let point = random_element(rng, &group, 3);
    let orbit: Vec<GroupElement> = phi.orbit(&group, &point).take(8).collect();
    let cosets = (0..rng.gen_range(0..=2))
        .map(|_| {
            // anchor half the cosets on an early orbit point so hits are common
            let rep = if rng.gen_bool(0.5) {
                orbit[rng.gen_range(0..orbit.len())].clone()
            } else {
                random_element(rng, &group, 5)
            };
            let generators = (0..rng.gen_range(0..=rank + 1))
                .map(|_| random_element(rng, &group, 5))
                .collect();
            Coset {
                rep,
                subgroup: Subgroup { generators },
            }
        })
        .collect();
    DynamicalProblem::new(group, phi, point, cosets).unwrap()
}
