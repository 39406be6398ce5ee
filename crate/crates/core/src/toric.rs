//! Monomial maps on the split torus over the rationals, with targets cut out
//! by binomial equations `x^a = c`.
//!
//! A point is recorded by the sign and the prime valuations of each
//! coordinate, which embeds the orbit in `(Z/2)^n ⊕ Z^{n·|S|}` for the primes
//! `S` of the starting point. The free coordinate of prime `p_s` and
//! coordinate `i` sits at index `s·n + i`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::apset::APSet;
use crate::arith::factorize;
use crate::dml::{Coset, DynamicalProblem, Endomorphism, Pipeline};
use crate::error::{invalid, Result};
use crate::lattice::{FgAbGroup, GroupElement, Smith, Subgroup};
use crate::matrix::IntMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalTorusPoint(Vec<BigRational>);

impl RationalTorusPoint {
    pub fn new(coords: Vec<BigRational>) -> Result<Self> {
        if coords.iter().any(Zero::is_zero) {
            return Err(invalid("torus coordinates must be nonzero"));
        }
        Ok(RationalTorusPoint(coords))
    }

    pub fn from_i64s(coords: &[i64]) -> Result<Self> {
        Self::new(
            coords
                .iter()
                .map(|&c| BigRational::from(BigInt::from(c)))
                .collect(),
        )
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

/// `x ↦ (Π_j x_j^{A_ij})_i`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialMap {
    exponents: IntMatrix,
}

impl MonomialMap {
    pub fn new(exponents: IntMatrix) -> Result<Self> {
        let n = exponents.len();
        if exponents.iter().any(|row| row.len() != n) {
            return Err(invalid("exponent matrix must be square"));
        }
        Ok(MonomialMap { exponents })
    }

    pub fn from_i64s(rows: &[&[i64]]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.exponents.len()
    }

    pub fn exponents(&self) -> &IntMatrix {
        &self.exponents
    }
}

/// `x^a = c`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinomialEquation {
    pub exponents: Vec<BigInt>,
    pub constant: BigRational,
}

impl BinomialEquation {
    pub fn new(exponents: Vec<BigInt>, constant: BigRational) -> Result<Self> {
        if constant.is_zero() {
            return Err(invalid("binomial constant must be nonzero"));
        }
        Ok(BinomialEquation {
            exponents,
            constant,
        })
    }

    pub fn holds(&self, x: &RationalTorusPoint) -> bool {
        monomial(x.coords(), &self.exponents) == self.constant
    }
}

/// Why no orbit point can satisfy the equations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmptyCertificate {
    /// Index of the offending equation, or `None` when only the system as a
    /// whole is inconsistent.
    pub equation: Option<usize>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ToricBuild {
    Problem(Box<DynamicalProblem>),
    Empty(EmptyCertificate),
}

fn rational_pow(x: &BigRational, e: &BigInt) -> BigRational {
    let k = e.abs().to_u32().expect("exponent fits in u32");
    let (num, den) = (x.numer().pow(k), x.denom().pow(k));
    if e.is_negative() {
        BigRational::new(den, num)
    } else {
        BigRational::new(num, den)
    }
}

fn monomial(x: &[BigRational], a: &[BigInt]) -> BigRational {
    x.iter().zip(a).fold(BigRational::one(), |acc, (xj, aj)| {
        acc * rational_pow(xj, aj)
    })
}

pub fn orbit_step(map: &MonomialMap, x: &RationalTorusPoint) -> RationalTorusPoint {
    RationalTorusPoint(
        map.exponents
            .iter()
            .map(|row| monomial(x.coords(), row))
            .collect(),
    )
}

/// Valuation of `x` at `p`.
fn valuation(x: &BigRational, p: &BigInt) -> i64 {
    let count = |mut n: BigInt| {
        let mut v = 0i64;
        while n.is_multiple_of(p) {
            n /= p;
            v += 1;
        }
        v
    };
    count(x.numer().abs()) - count(x.denom().clone())
}

fn primes_of(x: &BigRational) -> Result<Vec<BigInt>> {
    let mut out = Vec::new();
    for n in [x.numer(), x.denom()] {
        let f = factorize(n).ok_or_else(|| invalid(format!("cannot factor {n}")))?;
        out.extend(f.into_iter().map(|(p, _)| p));
    }
    Ok(out)
}

/// A toric instance together with its prime support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToricProblem {
    pub point: RationalTorusPoint,
    pub map: MonomialMap,
    pub equations: Vec<BinomialEquation>,
    primes: Vec<BigInt>,
}

impl ToricProblem {
    pub fn new(
        point: RationalTorusPoint,
        map: MonomialMap,
        equations: Vec<BinomialEquation>,
    ) -> Result<Self> {
        let n = point.dim();
        if map.dim() != n {
            return Err(invalid(format!(
                "map acts on dimension {}, point has {n}",
                map.dim()
            )));
        }
        if let Some(i) = equations.iter().position(|e| e.exponents.len() != n) {
            return Err(invalid(format!(
                "binomial {i} has the wrong number of exponents"
            )));
        }
        let mut primes = BTreeSet::new();
        for x in point.coords() {
            primes.extend(primes_of(x)?);
        }
        Ok(ToricProblem {
            point,
            map,
            equations,
            primes: primes.into_iter().collect(),
        })
    }

    pub fn primes(&self) -> &[BigInt] {
        &self.primes
    }

    pub fn group(&self) -> FgAbGroup {
        let n = self.point.dim();
        FgAbGroup::new(vec![2; n], n * self.primes.len()).expect("invariant factors are all 2")
    }

    /// Signs and valuations of `x`, or `None` if `x` involves a prime outside
    /// the support.
    pub fn embed(&self, x: &RationalTorusPoint) -> Option<GroupElement> {
        let v = self.embed_unchecked(x);
        (self.lift(&v) == *x).then_some(v)
    }

    fn embed_unchecked(&self, x: &RationalTorusPoint) -> GroupElement {
        let n = x.dim();
        let torsion = x
            .coords()
            .iter()
            .map(|c| u64::from(c.is_negative()))
            .collect();
        let mut free = vec![BigInt::zero(); n * self.primes.len()];
        for (s, p) in self.primes.iter().enumerate() {
            for (i, c) in x.coords().iter().enumerate() {
                free[s * n + i] = BigInt::from(valuation(c, p));
            }
        }
        GroupElement { torsion, free }
    }

    /// The rational point with the given signs and valuations.
    pub fn lift(&self, v: &GroupElement) -> RationalTorusPoint {
        let n = v.torsion.len();
        let coords = (0..n)
            .map(|i| {
                let mut x = BigRational::one();
                for (s, p) in self.primes.iter().enumerate() {
                    x *= rational_pow(&BigRational::from(p.clone()), &v.free[s * n + i]);
                }
                if v.torsion[i] == 1 {
                    -x
                } else {
                    x
                }
            })
            .collect();
        RationalTorusPoint(coords)
    }

    pub fn endomorphism(&self) -> Endomorphism {
        let n = self.point.dim();
        let r = n * self.primes.len();
        let mut free_matrix = vec![vec![BigInt::zero(); r]; r];
        for s in 0..self.primes.len() {
            for i in 0..n {
                for j in 0..n {
                    free_matrix[s * n + i][s * n + j] = self.map.exponents[i][j].clone();
                }
            }
        }
        let torsion_matrix = self
            .map
            .exponents
            .iter()
            .map(|row| row.iter().map(|a| a.mod_floor(&BigInt::from(2))).collect())
            .collect();
        Endomorphism {
            free_matrix,
            torsion_matrix,
            mixing: vec![vec![BigInt::zero(); r]; n],
        }
    }

    /// The group problem whose return times are those of the torus orbit, or a
    /// certificate that the equations have no solution in the orbit's group.
    pub fn build(&self) -> Result<ToricBuild> {
        let n = self.point.dim();
        let np = self.primes.len();
        for (idx, eq) in self.equations.iter().enumerate() {
            for q in primes_of(&eq.constant)? {
                if !self.primes.contains(&q) {
                    return Ok(ToricBuild::Empty(EmptyCertificate {
                        equation: Some(idx),
                        reason: format!(
                            "constant {} involves the prime {q}, absent from every orbit point",
                            eq.constant
                        ),
                    }));
                }
            }
        }
        let rows: IntMatrix = self.equations.iter().map(|e| e.exponents.clone()).collect();

        // signs: E·σ ≡ sgn (mod 2)
        let m = rows.len();
        let mut sign_system = rows.clone();
        for (i, row) in sign_system.iter_mut().enumerate() {
            row.extend((0..m).map(|j| {
                if i == j {
                    BigInt::from(2)
                } else {
                    BigInt::zero()
                }
            }));
        }
        let sign_smith = Smith::new(&sign_system, n + m);
        let signs: Vec<BigInt> = self
            .equations
            .iter()
            .map(|e| BigInt::from(u8::from(e.constant.is_negative())))
            .collect();
        let Some(sigma) = sign_smith.solve(&signs) else {
            return Ok(self.inconsistent("sign condition"));
        };
        let two = BigInt::from(2);
        let reduce2 = |v: &[BigInt]| -> Vec<u64> {
            v[..n]
                .iter()
                .map(|x| x.mod_floor(&two).to_u64().unwrap())
                .collect()
        };

        // valuations: E·e_s = v_s(c) for each prime
        let val_smith = Smith::new(&rows, n);
        let mut free_rep = vec![BigInt::zero(); n * np];
        for (s, p) in self.primes.iter().enumerate() {
            let target: Vec<BigInt> = self
                .equations
                .iter()
                .map(|e| BigInt::from(valuation(&e.constant, p)))
                .collect();
            let Some(sol) = val_smith.solve(&target) else {
                return Ok(self.inconsistent(&format!("valuation condition at {p}")));
            };
            free_rep[s * n..(s + 1) * n].clone_from_slice(&sol);
        }

        let mut generators = Vec::new();
        for k in sign_smith.kernel() {
            let t = reduce2(&k);
            if t.iter().any(|&x| x != 0) {
                generators.push(GroupElement {
                    torsion: t,
                    free: vec![BigInt::zero(); n * np],
                });
            }
        }
        for s in 0..np {
            for k in val_smith.kernel() {
                let mut free = vec![BigInt::zero(); n * np];
                free[s * n..(s + 1) * n].clone_from_slice(&k);
                generators.push(GroupElement {
                    torsion: vec![0; n],
                    free,
                });
            }
        }
        let rep = GroupElement {
            torsion: reduce2(&sigma),
            free: free_rep,
        };
        let coset = Coset {
            rep,
            subgroup: Subgroup { generators },
        };
        let point = self.embed_unchecked(&self.point);
        let problem = DynamicalProblem::new(self.group(), self.endomorphism(), point, vec![coset])?;
        Ok(ToricBuild::Problem(Box::new(problem)))
    }

    fn inconsistent(&self, what: &str) -> ToricBuild {
        let equation = (self.equations.len() == 1).then_some(0);
        ToricBuild::Empty(EmptyCertificate {
            equation,
            reason: format!("{what} has no integer solution"),
        })
    }

    pub fn solve(&self, pipeline: &Pipeline) -> Result<APSet> {
        match self.build()? {
            ToricBuild::Problem(p) => pipeline.solve(&p),
            ToricBuild::Empty(_) => Ok(APSet::empty()),
        }
    }

    /// `{k ≤ bound : every equation holds at the k-th orbit point}` by exact
    /// rational iteration.
    pub fn direct_hits(&self, bound: u64) -> Vec<u64> {
        let mut x = self.point.clone();
        let mut out = Vec::new();
        for k in 0..=bound {
            if self.equations.iter().all(|e| e.holds(&x)) {
                out.push(k);
            }
            if k < bound {
                x = orbit_step(&self.map, &x);
            }
        }
        out
    }
}

pub fn build_problem(
    point: &RationalTorusPoint,
    map: &MonomialMap,
    equations: &[BinomialEquation],
) -> Result<ToricBuild> {
    ToricProblem::new(point.clone(), map.clone(), equations.to_vec())?.build()
}

pub fn solve(
    point: &RationalTorusPoint,
    map: &MonomialMap,
    equations: &[BinomialEquation],
    pipeline: &Pipeline,
) -> Result<APSet> {
    ToricProblem::new(point.clone(), map.clone(), equations.to_vec())?.solve(pipeline)
}
