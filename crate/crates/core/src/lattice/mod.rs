//! Finitely generated abelian groups `Γ = Z/d_1 ⊕ … ⊕ Z/d_t ⊕ Z^n`, their
//! subgroups, and the reduction of coset membership to integer constraints.

mod hermite;
mod smith;

use std::collections::{BTreeMap, VecDeque};

pub use hermite::{coset_constraints, triangular_basis, CLConstraint, TriangularBasis};
pub use smith::Smith;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Default bound on `|Γ_tor|` for fiber enumeration.
pub const DEFAULT_TORSION_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FgAbGroup {
    invariant_factors: Vec<u64>,
    rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement {
    pub torsion: Vec<u64>,
    pub free: Vec<BigInt>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Subgroup {
    pub generators: Vec<GroupElement>,
}

impl FgAbGroup {
    pub fn new(invariant_factors: Vec<u64>, rank: usize) -> Result<Self> {
        for (i, &d) in invariant_factors.iter().enumerate() {
            if d < 2 {
                return Err(invalid(format!("invariant factor {d} must be at least 2")));
            }
            if let Some(&next) = invariant_factors.get(i + 1) {
                if next % d != 0 {
                    return Err(invalid(format!(
                        "invariant factor {d} does not divide {next}"
                    )));
                }
            }
        }
        Ok(FgAbGroup {
            invariant_factors,
            rank,
        })
    }

    pub fn free(rank: usize) -> Self {
        FgAbGroup {
            invariant_factors: Vec::new(),
            rank,
        }
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.invariant_factors
    }

    pub fn torsion_rank(&self) -> usize {
        self.invariant_factors.len()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `|Γ_tor|`, saturating.
    pub fn torsion_order(&self) -> u128 {
        self.invariant_factors
            .iter()
            .fold(1u128, |acc, &d| acc.saturating_mul(d as u128))
    }

    /// Exponent of `Γ_tor`, the largest invariant factor.
    pub fn exponent(&self) -> u64 {
        self.invariant_factors.last().copied().unwrap_or(1)
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            torsion: vec![0; self.torsion_rank()],
            free: vec![BigInt::zero(); self.rank],
        }
    }

    /// Reduce arbitrary integer torsion coordinates into an element.
    pub fn element(&self, torsion: &[BigInt], free: Vec<BigInt>) -> Result<GroupElement> {
        if torsion.len() != self.torsion_rank() || free.len() != self.rank {
            return Err(invalid(format!(
                "element has shape ({}, {}), group has ({}, {})",
                torsion.len(),
                free.len(),
                self.torsion_rank(),
                self.rank
            )));
        }
        let torsion = torsion
            .iter()
            .zip(&self.invariant_factors)
            .map(|(x, &d)| x.mod_floor(&BigInt::from(d)).to_u64().unwrap())
            .collect();
        Ok(GroupElement { torsion, free })
    }

    pub fn check(&self, x: &GroupElement) -> Result<()> {
        if x.torsion.len() != self.torsion_rank() || x.free.len() != self.rank {
            return Err(invalid("element shape does not match the group"));
        }
        if x.torsion
            .iter()
            .zip(&self.invariant_factors)
            .any(|(&a, &d)| a >= d)
        {
            return Err(invalid("torsion coordinate not reduced"));
        }
        Ok(())
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.add_torsion_only(a, &b.torsion, &b.free)
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let torsion = a
            .torsion
            .iter()
            .zip(&b.torsion)
            .zip(&self.invariant_factors)
            .map(|((&x, &y), &d)| (x + d - y) % d)
            .collect();
        let free = a.free.iter().zip(&b.free).map(|(x, y)| x - y).collect();
        GroupElement { torsion, free }
    }

    fn add_torsion_only(&self, a: &GroupElement, torsion: &[u64], free: &[BigInt]) -> GroupElement {
        let torsion = a
            .torsion
            .iter()
            .zip(torsion)
            .zip(&self.invariant_factors)
            .map(|((&x, &y), &d)| ((x as u128 + y as u128) % d as u128) as u64)
            .collect();
        let free = a.free.iter().zip(free).map(|(x, y)| x + y).collect();
        GroupElement { torsion, free }
    }
}

/// Generators of `H ∩ Γ_1`, the combinations of `H`'s generators whose
/// torsion part vanishes, projected to the free part.
pub fn free_intersection(group: &FgAbGroup, h: &Subgroup) -> Vec<Vec<BigInt>> {
    let s = h.generators.len();
    let t = group.torsion_rank();
    // unknowns: k_1..k_s, then one multiple of each invariant factor
    let system: Vec<Vec<BigInt>> = (0..t)
        .map(|i| {
            let mut row: Vec<BigInt> = h
                .generators
                .iter()
                .map(|g| BigInt::from(g.torsion[i]))
                .collect();
            row.extend((0..t).map(|j| {
                if i == j {
                    BigInt::from(group.invariant_factors[i])
                } else {
                    BigInt::zero()
                }
            }));
            row
        })
        .collect();
    let kernel = Smith::new(&system, s + t).kernel();
    kernel
        .iter()
        .map(|k| {
            (0..group.rank())
                .map(|i| (0..s).map(|j| &k[j] * &h.generators[j].free[i]).sum())
                .collect::<Vec<BigInt>>()
        })
        .filter(|v: &Vec<BigInt>| v.iter().any(|x| !x.is_zero()))
        .collect()
}

/// Every `h ∈ Γ_tor` with `(h + Γ_1) ∩ H` non-empty, with a witness `U_h`
/// such that `h + U_h ∈ H`.
pub fn torsion_fibers(
    group: &FgAbGroup,
    h: &Subgroup,
    cap: u64,
) -> Result<BTreeMap<Vec<u64>, Vec<BigInt>>> {
    let size = group.torsion_order();
    if size > cap as u128 {
        return Err(Error::TorsionTooLarge { size, cap });
    }
    let zero = group.zero();
    let mut fibers = BTreeMap::new();
    fibers.insert(zero.torsion.clone(), zero.free.clone());
    let mut queue = VecDeque::from([zero]);
    while let Some(x) = queue.pop_front() {
        for g in &h.generators {
            let y = group.add(&x, g);
            if !fibers.contains_key(&y.torsion) {
                fibers.insert(y.torsion.clone(), y.free.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(fibers)
}

/// Membership test for a coset `b + H`, with the Smith form computed once.
#[derive(Debug, Clone)]
pub struct CosetMembership {
    group: FgAbGroup,
    rep: GroupElement,
    smith: Smith,
}

impl CosetMembership {
    pub fn new(group: &FgAbGroup, rep: &GroupElement, h: &Subgroup) -> Self {
        let s = h.generators.len();
        let t = group.torsion_rank();
        let mut system = Vec::with_capacity(t + group.rank());
        for i in 0..t {
            let mut row: Vec<BigInt> = h
                .generators
                .iter()
                .map(|g| BigInt::from(g.torsion[i]))
                .collect();
            row.extend((0..t).map(|j| {
                if i == j {
                    BigInt::from(group.invariant_factors[i])
                } else {
                    BigInt::zero()
                }
            }));
            system.push(row);
        }
        for i in 0..group.rank() {
            let mut row: Vec<BigInt> = h.generators.iter().map(|g| g.free[i].clone()).collect();
            row.extend((0..t).map(|_| BigInt::zero()));
            system.push(row);
        }
        CosetMembership {
            group: group.clone(),
            rep: rep.clone(),
            smith: Smith::new(&system, s + t),
        }
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        let diff = self.group.sub(x, &self.rep);
        let rhs: Vec<BigInt> = diff
            .torsion
            .iter()
            .map(|&v| BigInt::from(v))
            .chain(diff.free)
            .collect();
        self.smith.solve(&rhs).is_some()
    }
}

/// Whether `v` lies in the lattice spanned by `generators` in `Z^dim`.
pub fn lattice_contains(generators: &[Vec<BigInt>], v: &[BigInt]) -> bool {
    let dim = v.len();
    let system: Vec<Vec<BigInt>> = (0..dim)
        .map(|i| generators.iter().map(|g| g[i].clone()).collect())
        .collect();
    Smith::new(&system, generators.len()).solve(v).is_some()
}
