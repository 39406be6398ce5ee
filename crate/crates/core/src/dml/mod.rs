//! Return times of an orbit to a union of cosets.
//!
//! With `φ^g(P') = Σ e_i φ^{g-i}(P')` for `P' = φ^s(P)`, every iterate is
//! `φ^k(P') = Σ_j z_{k,j} φ^j(P')` for impulse sequences `z_{·,j}`. The torsion
//! part of the orbit is eventually periodic, and each free coordinate is an
//! integer recurrence, so membership in `b + H` becomes a torsion condition
//! intersected with congruence and linear conditions on recurrences.

mod pipeline;

pub use pipeline::{
    brute_force_oracle, decompose_point, free_condition, minimal_polynomial,
    orbit_coset_intersection, torsion_condition, torsion_orbit, Pipeline, TorsionOrbit,
};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::lattice::{FgAbGroup, GroupElement, Subgroup};
use crate::matrix::IntMatrix;

/// `φ(t, f) = (T·t + X·f mod d, F·f)` on `Γ_tor ⊕ Z^n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Endomorphism {
    pub free_matrix: IntMatrix,
    pub torsion_matrix: IntMatrix,
    pub mixing: IntMatrix,
}

impl Endomorphism {
    pub fn check(&self, group: &FgAbGroup) -> Result<()> {
        let (t, n) = (group.torsion_rank(), group.rank());
        let square = |m: &IntMatrix, r: usize, c: usize, what: &str| -> Result<()> {
            if m.len() != r || m.iter().any(|row| row.len() != c) {
                return Err(invalid(format!("{what} must be {r}×{c}")));
            }
            Ok(())
        };
        square(&self.free_matrix, n, n, "free_matrix")?;
        square(&self.torsion_matrix, t, t, "torsion_matrix")?;
        square(&self.mixing, t, n, "mixing")?;
        let d = group.invariant_factors();
        for i in 0..t {
            for j in 0..t {
                // the image of a generator of order d_j must be killed by d_j
                let v = &self.torsion_matrix[i][j] * BigInt::from(d[j]);
                if !v.is_multiple_of(&BigInt::from(d[i])) {
                    return Err(invalid(format!(
                        "torsion_matrix[{i}][{j}] does not give a well-defined map Z/{} → Z/{}",
                        d[j], d[i]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn apply(&self, group: &FgAbGroup, x: &GroupElement) -> GroupElement {
        let d = group.invariant_factors();
        let torsion = (0..group.torsion_rank())
            .map(|i| {
                let mut acc = BigInt::zero();
                for (j, &tj) in x.torsion.iter().enumerate() {
                    acc += &self.torsion_matrix[i][j] * tj;
                }
                for (j, fj) in x.free.iter().enumerate() {
                    acc += &self.mixing[i][j] * fj;
                }
                acc.mod_floor(&BigInt::from(d[i])).to_u64().unwrap()
            })
            .collect();
        let free = self
            .free_matrix
            .iter()
            .map(|row| row.iter().zip(&x.free).map(|(a, b)| a * b).sum())
            .collect();
        GroupElement { torsion, free }
    }

    /// `P, φ(P), φ²(P), …`
    pub fn orbit<'a>(
        &'a self,
        group: &'a FgAbGroup,
        start: &GroupElement,
    ) -> impl Iterator<Item = GroupElement> + 'a {
        std::iter::successors(Some(start.clone()), move |x| Some(self.apply(group, x)))
    }
}

/// `φ^g(P') = Σ e_i φ^{g-i}(P')` with `e_g ≠ 0`, where `P' = φ^s(P)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalPolynomialData {
    pub e: Vec<BigInt>,
    pub shift: u64,
}

impl MinimalPolynomialData {
    pub fn degree(&self) -> usize {
        self.e.len()
    }
}

/// `φ^j(P') = T^{(j)} + Σ_i a_{j,i} R_i` for `j < g`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointDecomposition {
    pub torsion: Vec<Vec<u64>>,
    pub coefficients: Vec<Vec<BigInt>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coset {
    pub rep: GroupElement,
    pub subgroup: Subgroup,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DynamicalProblem {
    pub group: FgAbGroup,
    pub phi: Endomorphism,
    pub point: GroupElement,
    pub cosets: Vec<Coset>,
}

impl DynamicalProblem {
    pub fn new(
        group: FgAbGroup,
        phi: Endomorphism,
        point: GroupElement,
        cosets: Vec<Coset>,
    ) -> Result<Self> {
        let p = DynamicalProblem {
            group,
            phi,
            point,
            cosets,
        };
        p.check()?;
        Ok(p)
    }

    pub fn check(&self) -> Result<()> {
        self.phi.check(&self.group)?;
        self.group
            .check(&self.point)
            .map_err(|e| invalid(format!("point: {e}")))?;
        for (i, c) in self.cosets.iter().enumerate() {
            self.group
                .check(&c.rep)
                .map_err(|e| invalid(format!("coset {i} rep: {e}")))?;
            for (j, g) in c.subgroup.generators.iter().enumerate() {
                self.group
                    .check(g)
                    .map_err(|e| invalid(format!("coset {i} generator {j}: {e}")))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_ill_defined_torsion_map() {
        let g = FgAbGroup::new(vec![2], 0).unwrap();
        let bad = Endomorphism {
            free_matrix: vec![],
            torsion_matrix: vec![vec![BigInt::from(1)]],
            mixing: vec![vec![]],
        };
        assert!(bad.check(&g).is_ok());
        let g = FgAbGroup::new(vec![2, 4], 0).unwrap();
        // Z/2 → Z/4 sending 1 ↦ 1 is not a homomorphism; 1 ↦ 2 is
        let m = |x: i64| Endomorphism {
            free_matrix: vec![],
            torsion_matrix: vec![vec![0.into(), 0.into()], vec![x.into(), 0.into()]],
            mixing: vec![vec![], vec![]],
        };
        assert!(m(1).check(&g).is_err());
        assert!(m(2).check(&g).is_ok());
    }
}
