use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{DynamicalProblem, Endomorphism, MinimalPolynomialData, PointDecomposition};
use crate::apset::{APSet, ArithmeticProgression, Completeness};
use crate::error::{Error, Result};
use crate::lattice::{
    coset_constraints, free_intersection, torsion_fibers, triangular_basis, CLConstraint,
    CosetMembership, FgAbGroup, GroupElement, Smith, DEFAULT_TORSION_CAP,
};
use crate::recurrence::Recurrence;
use crate::sml::{SmlOptions, SmlSolver};

/// Least-degree monic relation on the orbit of `P`, shifted past any
/// vanishing trailing coefficients.
pub fn minimal_polynomial(
    group: &FgAbGroup,
    phi: &Endomorphism,
    p: &GroupElement,
) -> MinimalPolynomialData {
    let mut shift = 0u64;
    let mut start = p.clone();
    loop {
        if start == group.zero() {
            return MinimalPolynomialData {
                e: vec![BigInt::one()],
                shift,
            };
        }
        let (e, g1) = least_relation(group, phi, &start);
        let g = e.len();
        if g1 == g {
            debug_assert!(relation_holds(group, phi, &start, &e, 2 * g));
            return MinimalPolynomialData { e, shift };
        }
        // φ^g(P) = Σ_{i ≤ g1} e_i φ^{g-i}(P): the point φ^{g-g1}(P) has a relation of degree g1
        let s = (g - g1) as u64;
        for _ in 0..s {
            start = phi.apply(group, &start);
        }
        shift += s;
    }
}

/// The coefficients `e_1..e_g` of a least-degree relation and the largest
/// index `g1` with `e_{g1} ≠ 0` (0 if all vanish), preferring `g1 = g`.
fn least_relation(group: &FgAbGroup, phi: &Endomorphism, p: &GroupElement) -> (Vec<BigInt>, usize) {
    let t = group.torsion_rank();
    let mut orbit = vec![p.clone()];
    for g in 1.. {
        while orbit.len() <= g {
            let next = phi.apply(group, orbit.last().unwrap());
            orbit.push(next);
        }
        // unknowns e_1..e_g, then a multiple of each invariant factor
        let mut system = Vec::with_capacity(t + group.rank());
        for row in 0..t {
            let mut r: Vec<BigInt> = (1..=g)
                .map(|i| BigInt::from(orbit[g - i].torsion[row]))
                .collect();
            r.extend((0..t).map(|j| {
                if j == row {
                    BigInt::from(group.invariant_factors()[row])
                } else {
                    BigInt::zero()
                }
            }));
            system.push(r);
        }
        for row in 0..group.rank() {
            let mut r: Vec<BigInt> = (1..=g).map(|i| orbit[g - i].free[row].clone()).collect();
            r.extend((0..t).map(|_| BigInt::zero()));
            system.push(r);
        }
        let rhs: Vec<BigInt> = orbit[g]
            .torsion
            .iter()
            .map(|&x| BigInt::from(x))
            .chain(orbit[g].free.iter().cloned())
            .collect();
        let smith = Smith::new(&system, g + t);
        let Some(mut sol) = smith.solve(&rhs) else {
            continue;
        };
        if sol[g - 1].is_zero() {
            if let Some(k) = smith.kernel().into_iter().find(|k| !k[g - 1].is_zero()) {
                for (x, y) in sol.iter_mut().zip(&k) {
                    *x += y;
                }
            }
        }
        sol.truncate(g);
        let g1 = sol.iter().rposition(|x| !x.is_zero()).map_or(0, |i| i + 1);
        return (sol, g1);
    }
    unreachable!()
}

fn relation_holds(
    group: &FgAbGroup,
    phi: &Endomorphism,
    p: &GroupElement,
    e: &[BigInt],
    upto: usize,
) -> bool {
    let g = e.len();
    let orbit: Vec<GroupElement> = phi.orbit(group, p).take(upto + g + 1).collect();
    (0..=upto).all(|k| {
        let mut acc = group.zero();
        for (i, ei) in e.iter().enumerate() {
            acc = group.add(&acc, &scale(group, &orbit[k + g - 1 - i], ei));
        }
        acc == orbit[k + g]
    })
}

fn scale(group: &FgAbGroup, x: &GroupElement, k: &BigInt) -> GroupElement {
    let torsion = x
        .torsion
        .iter()
        .zip(group.invariant_factors())
        .map(|(&a, &d)| (k * a).mod_floor(&BigInt::from(d)).to_u64().unwrap())
        .collect();
    GroupElement {
        torsion,
        free: x.free.iter().map(|a| a * k).collect(),
    }
}

/// `φ^j(P')` for `j < g`, split into torsion parts and free coordinates.
pub fn decompose_point(
    group: &FgAbGroup,
    phi: &Endomorphism,
    p: &GroupElement,
    minpoly: &MinimalPolynomialData,
) -> PointDecomposition {
    let start = phi.orbit(group, p).nth(minpoly.shift as usize).unwrap();
    let pts: Vec<GroupElement> = phi.orbit(group, &start).take(minpoly.degree()).collect();
    PointDecomposition {
        torsion: pts.iter().map(|x| x.torsion.clone()).collect(),
        coefficients: pts.into_iter().map(|x| x.free).collect(),
    }
}

/// The eventually periodic sequence `x_k = Σ_j z_{k,j} T^{(j)}` in `Γ_tor`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorsionOrbit {
    pub preperiod: u64,
    pub period: u64,
    /// `x_k` for `k < preperiod + period`.
    pub values: Vec<Vec<u64>>,
}

impl TorsionOrbit {
    /// `{k : x_k = τ}`, exact.
    pub fn condition(&self, tau: &[u64]) -> APSet {
        let progs = self
            .values
            .iter()
            .enumerate()
            .filter(|(_, v)| v.as_slice() == tau)
            .map(|(k, _)| {
                let k = k as u64;
                if k < self.preperiod {
                    ArithmeticProgression::singleton(k)
                } else {
                    ArithmeticProgression::new(self.period, k)
                }
            })
            .collect();
        APSet::new(progs, Completeness::Complete)
    }

    /// Distinct values taken, in first-hit order.
    pub fn attained(&self) -> Vec<Vec<u64>> {
        let mut seen = Vec::new();
        for v in &self.values {
            if !seen.contains(v) {
                seen.push(v.clone());
            }
        }
        seen
    }
}

/// Iterate the window `(x_k, …, x_{k+g-1})` until it repeats.
pub fn torsion_orbit(
    group: &FgAbGroup,
    minpoly: &MinimalPolynomialData,
    decomposition: &PointDecomposition,
    cap: u64,
) -> Result<TorsionOrbit> {
    let d = group.invariant_factors();
    let e: Vec<Vec<u64>> = minpoly
        .e
        .iter()
        .map(|c| {
            d.iter()
                .map(|&m| c.mod_floor(&BigInt::from(m)).to_u64().unwrap())
                .collect()
        })
        .collect();
    let g = e.len();
    let mut window: Vec<Vec<u64>> = decomposition.torsion.clone();
    let mut seen: HashMap<Vec<Vec<u64>>, u64> = HashMap::new();
    let mut values = Vec::new();
    let mut k = 0u64;
    loop {
        if let Some(&first) = seen.get(&window) {
            values.truncate(k as usize);
            return Ok(TorsionOrbit {
                preperiod: first,
                period: k - first,
                values,
            });
        }
        if seen.len() as u64 >= cap {
            return Err(Error::StateBudgetExceeded {
                modulus: group.exponent(),
                cap: cap as usize,
            });
        }
        seen.insert(window.clone(), k);
        values.push(window[0].clone());
        let next: Vec<u64> = (0..d.len())
            .map(|r| {
                let m = d[r] as u128;
                let mut acc = 0u128;
                for i in 0..g {
                    acc = (acc + e[i][r] as u128 * window[g - 1 - i][r] as u128) % m;
                }
                acc as u64
            })
            .collect();
        window.remove(0);
        window.push(next);
        k += 1;
    }
}

/// `{k : Σ_j z_{k,j} T^{(j)} = τ}`
pub fn torsion_condition(
    group: &FgAbGroup,
    minpoly: &MinimalPolynomialData,
    decomposition: &PointDecomposition,
    tau: &[u64],
) -> Result<APSet> {
    Ok(torsion_orbit(group, minpoly, decomposition, DEFAULT_TORSION_CAP)?.condition(tau))
}

/// The recurrence `Σ_j h_j z_{k,j}` with `h_j = Σ_i d_i a_{j,i}`.
fn weighted_sequence(
    minpoly: &MinimalPolynomialData,
    decomposition: &PointDecomposition,
    d: &[BigInt],
) -> Recurrence {
    let h = decomposition
        .coefficients
        .iter()
        .map(|row| row.iter().zip(d).map(|(a, b)| a * b).sum())
        .collect();
    Recurrence::new(minpoly.e.clone(), h).expect("minimal polynomial has e_g ≠ 0")
}

/// Indices `k` at which the free coordinates of `φ^k(P')` satisfy every
/// constraint.
pub fn free_condition(
    minpoly: &MinimalPolynomialData,
    decomposition: &PointDecomposition,
    constraints: &[CLConstraint],
    solver: &SmlSolver,
) -> Result<APSet> {
    let mut out = APSet::naturals();
    for c in constraints {
        let w = weighted_sequence(minpoly, decomposition, c.coeffs());
        let part = match c {
            CLConstraint::Congruence {
                residue, modulus, ..
            } => {
                let m = modulus.abs();
                if m.is_one() {
                    APSet::naturals()
                } else {
                    let m64 = m.to_u64().ok_or(Error::Overflow("congruence modulus"))?;
                    let r = residue.mod_floor(&m).to_u64().unwrap();
                    w.solution_set_mod(m64, r)?
                }
            }
            CLConstraint::Linear { value, .. } => {
                solver.solve_linear_condition(&[(BigInt::one(), w)], value)?
            }
        };
        out = out.intersect_refined(&part);
        if out.is_empty() && out.completeness().is_complete() {
            break;
        }
    }
    Ok(out)
}

/// Options and caches for one run of the pipeline.
pub struct Pipeline {
    solver: SmlSolver,
    torsion_cap: u64,
}

impl Pipeline {
    pub fn new(options: SmlOptions, torsion_cap: u64) -> Result<Self> {
        Ok(Pipeline {
            solver: SmlSolver::new(options)?,
            torsion_cap,
        })
    }

    pub fn solver(&self) -> &SmlSolver {
        &self.solver
    }

    pub fn solve(&self, problem: &DynamicalProblem) -> Result<APSet> {
        problem.check()?;
        if problem.cosets.is_empty() {
            return Ok(APSet::empty());
        }
        let group = &problem.group;
        let minpoly = minimal_polynomial(group, &problem.phi, &problem.point);
        let dec = decompose_point(group, &problem.phi, &problem.point, &minpoly);
        let orbit = torsion_orbit(group, &minpoly, &dec, self.torsion_cap)?;
        let attained = orbit.attained();

        let mut result = APSet::empty();
        for coset in &problem.cosets {
            let h1 = free_intersection(group, &coset.subgroup);
            let basis = triangular_basis(&h1, group.rank());
            let fibers: BTreeMap<Vec<u64>, Vec<BigInt>> =
                torsion_fibers(group, &coset.subgroup, self.torsion_cap)?;
            for tau in &attained {
                let h: Vec<u64> = tau
                    .iter()
                    .zip(&coset.rep.torsion)
                    .zip(group.invariant_factors())
                    .map(|((&a, &b), &d)| (a + d - b) % d)
                    .collect();
                let Some(u) = fibers.get(&h) else { continue };
                let rep: Vec<BigInt> = coset.rep.free.iter().zip(u).map(|(a, b)| a + b).collect();
                let constraints = coset_constraints(&basis, &rep);
                let tors = orbit.condition(tau);
                let free = free_condition(&minpoly, &dec, &constraints, &self.solver)?;
                result = result.union(&tors.intersect_refined(&free));
            }
        }

        let s = minpoly.shift;
        if s == 0 {
            return Ok(result);
        }
        let members: Vec<CosetMembership> = problem
            .cosets
            .iter()
            .map(|c| CosetMembership::new(group, &c.rep, &c.subgroup))
            .collect();
        let early: Vec<u64> = problem
            .phi
            .orbit(group, &problem.point)
            .take(s as usize)
            .enumerate()
            .filter(|(_, x)| members.iter().any(|m| m.contains(x)))
            .map(|(k, _)| k as u64)
            .collect();
        let early = APSet::singletons(early);
        Ok(result
            .shifted(s)
            .union(&early.with_completeness(Completeness::Complete)))
    }
}

pub fn orbit_coset_intersection(problem: &DynamicalProblem, options: &SmlOptions) -> Result<APSet> {
    Pipeline::new(options.clone(), DEFAULT_TORSION_CAP)?.solve(problem)
}

/// `{k ≤ bound : φ^k(P) ∈ b + H}` by iterating the orbit.
pub fn brute_force_oracle(problem: &DynamicalProblem, bound: u64) -> Vec<u64> {
    let group = &problem.group;
    let members: Vec<CosetMembership> = problem
        .cosets
        .iter()
        .map(|c| CosetMembership::new(group, &c.rep, &c.subgroup))
        .collect();
    if members.is_empty() {
        return Vec::new();
    }
    problem
        .phi
        .orbit(group, &problem.point)
        .take(bound as usize + 1)
        .enumerate()
        .filter(|(_, x)| members.iter().any(|m| m.contains(x)))
        .map(|(k, _)| k as u64)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dml::Coset;
    use crate::lattice::Subgroup;

    fn v(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn m(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| v(r)).collect()
    }

    fn el(t: &[u64], f: &[i64]) -> GroupElement {
        GroupElement {
            torsion: t.to_vec(),
            free: v(f),
        }
    }

    fn free_endo(rows: &[&[i64]]) -> Endomorphism {
        Endomorphism {
            free_matrix: m(rows),
            torsion_matrix: vec![],
            mixing: vec![],
        }
    }

    fn doubling() -> (FgAbGroup, Endomorphism) {
        (FgAbGroup::free(1), free_endo(&[&[2]]))
    }

    fn shear() -> (FgAbGroup, Endomorphism) {
        (FgAbGroup::free(2), free_endo(&[&[1, 1], &[0, 1]]))
    }

    #[test]
    fn minimal_polynomial_examples() {
        let (g, phi) = doubling();
        let mp = minimal_polynomial(&g, &phi, &el(&[], &[1]));
        assert_eq!((mp.e.clone(), mp.shift), (v(&[2]), 0));

        let (g, phi) = shear();
        let mp = minimal_polynomial(&g, &phi, &el(&[], &[0, 1]));
        assert_eq!((mp.e.clone(), mp.shift), (v(&[2, -1]), 0));

        let g = FgAbGroup::free(1);
        let mp = minimal_polynomial(&g, &free_endo(&[&[0]]), &el(&[], &[1]));
        assert_eq!((mp.e.clone(), mp.shift), (v(&[1]), 1));
    }

    #[test]
    fn decomposition_examples() {
        let (g, phi) = doubling();
        let p = el(&[], &[1]);
        let d = decompose_point(&g, &phi, &p, &minimal_polynomial(&g, &phi, &p));
        assert_eq!(d.coefficients, m(&[&[1]]));
        assert_eq!(d.torsion, vec![Vec::<u64>::new()]);

        let g = FgAbGroup::new(vec![2], 1).unwrap();
        let phi = Endomorphism {
            free_matrix: m(&[&[3]]),
            torsion_matrix: m(&[&[1]]),
            mixing: m(&[&[0]]),
        };
        let p = el(&[1], &[1]);
        let mp = MinimalPolynomialData {
            e: v(&[3]),
            shift: 0,
        };
        let d = decompose_point(&g, &phi, &p, &mp);
        assert_eq!((d.torsion, d.coefficients), (vec![vec![1]], m(&[&[1]])));

        let (g, phi) = shear();
        let p = el(&[], &[0, 1]);
        let d = decompose_point(&g, &phi, &p, &minimal_polynomial(&g, &phi, &p));
        assert_eq!(d.coefficients, m(&[&[0, 1], &[1, 1]]));
    }

    #[test]
    fn torsion_condition_examples() {
        let g = FgAbGroup::free(1);
        let mp = MinimalPolynomialData {
            e: v(&[2]),
            shift: 0,
        };
        let dec = PointDecomposition {
            torsion: vec![vec![]],
            coefficients: m(&[&[1]]),
        };
        assert_eq!(
            torsion_condition(&g, &mp, &dec, &[]).unwrap(),
            APSet::naturals()
        );

        let g = FgAbGroup::new(vec![2], 0).unwrap();
        let dec = PointDecomposition {
            torsion: vec![vec![1]],
            coefficients: vec![vec![]],
        };
        assert_eq!(
            torsion_condition(&g, &mp, &dec, &[0]).unwrap(),
            APSet::progression(1, 1)
        );

        let g = FgAbGroup::new(vec![3], 0).unwrap();
        assert_eq!(
            torsion_condition(&g, &mp, &dec, &[1]).unwrap(),
            APSet::progression(2, 0)
        );
    }

    #[test]
    fn free_condition_examples() {
        let solver = SmlSolver::new(SmlOptions::default()).unwrap();
        let mp = MinimalPolynomialData {
            e: v(&[2]),
            shift: 0,
        };
        let dec = PointDecomposition {
            torsion: vec![vec![]],
            coefficients: m(&[&[1]]),
        };
        assert_eq!(
            free_condition(&mp, &dec, &[], &solver).unwrap(),
            APSet::naturals()
        );
        let cong = CLConstraint::Congruence {
            coeffs: v(&[1]),
            residue: 1.into(),
            modulus: 3.into(),
        };
        assert_eq!(
            free_condition(&mp, &dec, &[cong], &solver).unwrap(),
            APSet::progression(2, 0)
        );
        let lin = CLConstraint::Linear {
            coeffs: v(&[1]),
            value: 8.into(),
        };
        let s = free_condition(&mp, &dec, &[lin], &solver).unwrap();
        assert_eq!(s, APSet::singletons([3]));
        assert!(s.completeness().is_complete());
    }

    fn problem(
        g: FgAbGroup,
        phi: Endomorphism,
        p: GroupElement,
        cosets: Vec<(GroupElement, Vec<GroupElement>)>,
    ) -> DynamicalProblem {
        let cosets = cosets
            .into_iter()
            .map(|(rep, gens)| Coset {
                rep,
                subgroup: Subgroup { generators: gens },
            })
            .collect();
        DynamicalProblem::new(g, phi, p, cosets).unwrap()
    }

    #[test]
    fn intersection_examples() {
        let opts = SmlOptions::default();
        let (g, phi) = doubling();
        let pr = problem(
            g,
            phi,
            el(&[], &[1]),
            vec![(el(&[], &[1]), vec![el(&[], &[3])])],
        );
        assert_eq!(
            orbit_coset_intersection(&pr, &opts).unwrap(),
            APSet::progression(2, 0)
        );
        assert_eq!(
            brute_force_oracle(&pr, 100),
            (0..=100).step_by(2).collect::<Vec<_>>()
        );

        let (g, phi) = shear();
        let pr = problem(
            g,
            phi,
            el(&[], &[0, 1]),
            vec![(el(&[], &[2, 1]), vec![el(&[], &[3, 0])])],
        );
        assert_eq!(
            orbit_coset_intersection(&pr, &opts).unwrap(),
            APSet::progression(3, 2)
        );
        assert_eq!(
            brute_force_oracle(&pr, 100),
            (2..=100).step_by(3).collect::<Vec<_>>()
        );

        let (g, phi) = shear();
        let pr = problem(g, phi, el(&[], &[0, 1]), vec![(el(&[], &[5, 1]), vec![])]);
        let s = orbit_coset_intersection(&pr, &opts).unwrap();
        assert_eq!(s, APSet::singletons([5]));
        assert!(s.completeness().is_complete());
        assert_eq!(brute_force_oracle(&pr, 100), vec![5]);
    }

    #[test]
    fn degenerate_cases() {
        let opts = SmlOptions::default();
        let (g, phi) = doubling();
        let pr = problem(g.clone(), phi.clone(), el(&[], &[1]), vec![]);
        let s = orbit_coset_intersection(&pr, &opts).unwrap();
        assert!(s.is_empty() && s.completeness().is_complete());
        assert!(brute_force_oracle(&pr, 10).is_empty());

        // fixed point inside a trivial coset
        let id = free_endo(&[&[1]]);
        let pr = problem(g.clone(), id, el(&[], &[4]), vec![(el(&[], &[4]), vec![])]);
        assert_eq!(
            orbit_coset_intersection(&pr, &opts).unwrap(),
            APSet::naturals()
        );
        assert_eq!(brute_force_oracle(&pr, 20), (0..=20).collect::<Vec<_>>());

        // the zero map sends P to 0 after one step
        let zero = free_endo(&[&[0]]);
        let pr = problem(
            g,
            zero,
            el(&[], &[3]),
            vec![(el(&[], &[0]), vec![el(&[], &[3])])],
        );
        assert_eq!(
            orbit_coset_intersection(&pr, &opts).unwrap(),
            APSet::naturals()
        );
    }

    #[test]
    fn mixed_torsion() {
        // Γ = Z/4 ⊕ Z, φ(t, f) = (t + f, 2f); the torsion part picks up the free part
        let g = FgAbGroup::new(vec![4], 1).unwrap();
        let phi = Endomorphism {
            free_matrix: m(&[&[2]]),
            torsion_matrix: m(&[&[1]]),
            mixing: m(&[&[1]]),
        };
        let pr = problem(
            g,
            phi,
            el(&[0], &[1]),
            vec![(el(&[3], &[0]), vec![el(&[0], &[2])])],
        );
        let s = orbit_coset_intersection(&pr, &SmlOptions::default()).unwrap();
        assert_eq!(s.enumerate_up_to(200), brute_force_oracle(&pr, 200));
    }
}
