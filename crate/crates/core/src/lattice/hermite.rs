use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Row-echelon basis of a sublattice of `Z^n`: row `j` vanishes before
/// column `pivots[j]` and has a positive entry there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangularBasis {
    dim: usize,
    pivots: Vec<usize>,
    rows: Vec<Vec<BigInt>>,
}

impl TriangularBasis {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// `Σ d_i c_i ≡ D_1 (mod D_2)` or `Σ d_i c_i = D`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CLConstraint {
    Congruence {
        coeffs: Vec<BigInt>,
        residue: BigInt,
        modulus: BigInt,
    },
    Linear {
        coeffs: Vec<BigInt>,
        value: BigInt,
    },
}

impl CLConstraint {
    pub fn coeffs(&self) -> &[BigInt] {
        match self {
            CLConstraint::Congruence { coeffs, .. } | CLConstraint::Linear { coeffs, .. } => coeffs,
        }
    }

    pub fn holds(&self, c: &[BigInt]) -> bool {
        let lhs: BigInt = self.coeffs().iter().zip(c).map(|(a, b)| a * b).sum();
        match self {
            CLConstraint::Congruence {
                residue, modulus, ..
            } => (lhs - residue).is_multiple_of(modulus),
            CLConstraint::Linear { value, .. } => lhs == *value,
        }
    }
}

impl fmt::Display for CLConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, a) in self.coeffs().iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let sign = if a.is_negative() { "-" } else { "+" };
            match (first, a.is_negative()) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, _) => write!(f, " {sign} ")?,
            }
            first = false;
            if a.abs().is_one() {
                write!(f, "c{}", i + 1)?;
            } else {
                write!(f, "{}·c{}", a.abs(), i + 1)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        match self {
            CLConstraint::Congruence {
                residue, modulus, ..
            } => write!(f, " ≡ {residue} mod {modulus}"),
            CLConstraint::Linear { value, .. } => write!(f, " = {value}"),
        }
    }
}

/// Hermite-style echelon reduction of the lattice spanned by `generators`.
pub fn triangular_basis(generators: &[Vec<BigInt>], dim: usize) -> TriangularBasis {
    let mut rows: Vec<Vec<BigInt>> = generators
        .iter()
        .filter(|g| g.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    for g in &rows {
        assert_eq!(g.len(), dim, "generator has the wrong dimension");
    }
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..dim {
        loop {
            let best = (r..rows.len())
                .filter(|&i| !rows[i][col].is_zero())
                .min_by(|&a, &b| rows[a][col].abs().cmp(&rows[b][col].abs()));
            let Some(p) = best else { break };
            rows.swap(r, p);
            let mut done = true;
            for i in r + 1..rows.len() {
                if rows[i][col].is_zero() {
                    continue;
                }
                let q = rows[i][col].div_floor(&rows[r][col]);
                let pivot_row = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                    *x -= &q * y;
                }
                if !rows[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r < rows.len() && !rows[r][col].is_zero() {
            if rows[r][col].is_negative() {
                for x in rows[r].iter_mut() {
                    *x = -&*x;
                }
            }
            let pivot_row = rows[r].clone();
            for row in rows.iter_mut().take(r) {
                let q = row[col].div_floor(&pivot_row[col]);
                if !q.is_zero() {
                    for (x, y) in row.iter_mut().zip(&pivot_row) {
                        *x -= &q * y;
                    }
                }
            }
            pivots.push(col);
            r += 1;
        }
    }
    rows.truncate(r);
    TriangularBasis { dim, pivots, rows }
}

/// Integer constraints on `c` equivalent to `c - rep ∈ span(basis)`.
///
/// Writing `c - rep = Σ k_j Q_j` and solving column by column, each `k_j` is a
/// linear form in `c - rep` over a denominator. A pivot column demands that
/// form be integral, which is a congruence; a non-pivot column demands the
/// coordinate match exactly, which is a linear equation.
pub fn coset_constraints(basis: &TriangularBasis, rep: &[BigInt]) -> Vec<CLConstraint> {
    let n = basis.dim;
    assert_eq!(rep.len(), n, "representative has the wrong dimension");
    // k_j = forms[j] · X / dens[j]
    let mut forms: Vec<Vec<BigInt>> = Vec::new();
    let mut dens: Vec<BigInt> = Vec::new();
    let mut out = Vec::with_capacity(n);
    for col in 0..n {
        let active: Vec<usize> = (0..forms.len())
            .filter(|&t| !basis.rows[t][col].is_zero())
            .collect();
        let common = active
            .iter()
            .fold(BigInt::one(), |acc, &t| acc.lcm(&dens[t]));
        let mut coeffs = vec![BigInt::zero(); n];
        coeffs[col] = common.clone();
        for &t in &active {
            let scale = (&common / &dens[t]) * &basis.rows[t][col];
            for (c, f) in coeffs.iter_mut().zip(&forms[t]) {
                *c -= &scale * f;
            }
        }
        let at_rep: BigInt = coeffs.iter().zip(rep).map(|(a, b)| a * b).sum();
        match basis.pivots.get(forms.len()) {
            Some(&p) if p == col => {
                let modulus = &common * &basis.rows[forms.len()][col];
                let residue = at_rep.mod_floor(&modulus);
                forms.push(coeffs.clone());
                dens.push(modulus.clone());
                out.push(CLConstraint::Congruence {
                    coeffs,
                    residue,
                    modulus,
                });
            }
            _ => out.push(CLConstraint::Linear {
                coeffs,
                value: at_rep,
            }),
        }
    }
    out
}
