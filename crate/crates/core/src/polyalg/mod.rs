//! Integer polynomials: squarefree parts, factorization, roots of unity and the
//! splitting modulus that separates root-of-unity ratios of characteristic
//! roots.

mod factor;
mod poly;

pub use factor::{
    cyclotomic, factor, indices_with_totient_at_most, rational_root, CyclotomicDivision,
    FactorRegistry, FactorStrategy, Factorization, Kronecker, RationalRoots, RootSearch,
    SmallDegree, Split, DEFAULT_FACTOR_DEGREE_CAP, STRATEGY_NAMES,
};
pub use poly::IntPolynomial;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{lcm_u64, totient};
use crate::error::{Error, Result};
use crate::matrix::determinant;

/// A modulus `M` such that every root-of-unity ratio of two roots of the
/// source polynomial has order dividing `M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SplitModulus(pub u64);

/// `p / gcd(p, p')`, primitive with positive leading coefficient.
pub fn squarefree_part(p: &IntPolynomial) -> IntPolynomial {
    assert!(!p.is_zero(), "squarefree part of the zero polynomial");
    if p.degree() == Some(0) {
        return IntPolynomial::one();
    }
    let g = p.gcd(&p.derivative()).primitive_part();
    p.primitive_part()
        .div_exact(&g)
        .expect("gcd divides")
        .primitive_part()
}

/// If `p` is irreducible and its roots are primitive `M`-th roots of unity,
/// returns `M`.
pub fn root_of_unity_order(p: &IntPolynomial) -> Option<u64> {
    let d = p.degree()?;
    if d == 0 || !p.is_monic_up_to_sign() {
        return None;
    }
    let prim = p.primitive_part();
    indices_with_totient_at_most(d)
        .into_iter()
        .filter(|&m| totient(m as u64) as usize == d)
        .find(|&m| IntPolynomial::x_pow_minus_one(m).div_exact(&prim).is_some())
        .map(|m| m as u64)
}

/// Polynomial whose roots are all ratios `α/β` of roots of `p` (with
/// multiplicity), computed as `Res_y(p(y), p(x·y))` by evaluation at
/// `deg(p)^2 + 1` points and interpolation.
pub fn ratio_polynomial(p: &IntPolynomial) -> IntPolynomial {
    let d = p.degree().expect("ratio polynomial of zero");
    if d == 0 {
        return IntPolynomial::one();
    }
    let out_deg = d * d;
    let xs: Vec<BigInt> = (0..=out_deg as i64).map(BigInt::from).collect();
    let ys: Vec<BigInt> = xs
        .iter()
        .map(|x| {
            let mut xpow = BigInt::one();
            let q: Vec<BigInt> = p
                .coeffs()
                .iter()
                .map(|c| {
                    let v = c * &xpow;
                    xpow *= x;
                    v
                })
                .collect();
            sylvester_resultant(p.coeffs(), &q)
        })
        .collect();
    interpolate(&xs, &ys)
}

/// Resultant of two polynomials of the same formal degree, lowest degree first.
fn sylvester_resultant(a: &[BigInt], b: &[BigInt]) -> BigInt {
    let m = a.len() - 1;
    let n = b.len() - 1;
    let size = m + n;
    let mut s = vec![vec![BigInt::zero(); size]; size];
    for r in 0..n {
        for (i, c) in a.iter().rev().enumerate() {
            s[r][r + i] = c.clone();
        }
    }
    for r in 0..m {
        for (i, c) in b.iter().rev().enumerate() {
            s[n + r][r + i] = c.clone();
        }
    }
    determinant(&s)
}

/// Newton interpolation over the rationals; the result must be integral.
fn interpolate(xs: &[BigInt], ys: &[BigInt]) -> IntPolynomial {
    let n = xs.len();
    let mut table: Vec<BigRational> = ys.iter().cloned().map(BigRational::from).collect();
    let mut newton = vec![table[0].clone()];
    for level in 1..n {
        for i in (level..n).rev() {
            let num = &table[i] - &table[i - 1];
            let den = BigRational::from(&xs[i] - &xs[i - level]);
            table[i] = num / den;
        }
        newton.push(table[level].clone());
    }
    let mut result = vec![BigRational::zero()];
    for k in (0..n).rev() {
        // result = result * (x - x_k) + newton[k]
        let mut next = vec![BigRational::zero(); result.len() + 1];
        for (i, c) in result.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * BigRational::from(xs[k].clone());
        }
        next[0] += &newton[k];
        result = next;
    }
    IntPolynomial::new(
        result
            .into_iter()
            .map(|c| {
                assert!(c.is_integer(), "resultant interpolation must be integral");
                c.to_integer()
            })
            .collect(),
    )
}

/// The least common multiple of the orders of all root-of-unity ratios among
/// the roots of `p`.
///
/// Only cyclotomic factors of the ratio polynomial matter, and those are found
/// exactly by trial division with `Φ_n` for every `n` with `φ(n)` at most the
/// degree. `degree_cap` bounds the degree of `p` itself; beyond it the ratio
/// polynomial is considered out of reach and `Unfactorable` is returned.
pub fn ratio_splitting_modulus(p: &IntPolynomial, degree_cap: usize) -> Result<SplitModulus> {
    let Some(d) = p.degree() else {
        return Err(Error::InvalidInput(
            "splitting modulus of the zero polynomial".into(),
        ));
    };
    if p.coeff(0).is_zero() {
        return Err(Error::InvalidInput(
            "splitting modulus needs a nonzero constant term".into(),
        ));
    }
    if d > degree_cap {
        return Err(Error::Unfactorable { degree: d * d });
    }
    let p = squarefree_part(p);
    let d = p.degree().unwrap_or(0);
    if d <= 1 {
        return Ok(SplitModulus(1));
    }
    let ratios = squarefree_part(&ratio_polynomial(&p));
    let rd = ratios.degree().unwrap_or(0);
    let mut m = 1u64;
    for n in indices_with_totient_at_most(rd) {
        if ratios.div_exact(&cyclotomic(n)).is_some() {
            m = lcm_u64(m, n as u64).ok_or(Error::Overflow("splitting modulus"))?;
        }
    }
    Ok(SplitModulus(m))
}
