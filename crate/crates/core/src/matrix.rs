//! Dense integer matrices, just enough for companion powers, characteristic
//! polynomials and determinants.

use num_bigint::BigInt;
use num_traits::{One, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect()
}

pub fn mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let rows = a.len();
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    let mut out = vec![vec![BigInt::zero(); cols]; rows];
    for i in 0..rows {
        for k in 0..inner {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..cols {
                if !b[k][j].is_zero() {
                    out[i][j] += &a[i][k] * &b[k][j];
                }
            }
        }
    }
    out
}

pub fn mul_vec(a: &IntMatrix, v: &[BigInt]) -> Vec<BigInt> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .filter(|(x, _)| !x.is_zero())
                .map(|(x, y)| x * y)
                .sum()
        })
        .collect()
}

pub fn pow(a: &IntMatrix, mut e: u64) -> IntMatrix {
    let mut result = identity(a.len());
    let mut base = a.clone();
    while e > 0 {
        if e & 1 == 1 {
            result = mul(&result, &base);
        }
        e >>= 1;
        if e > 0 {
            base = mul(&base, &base);
        }
    }
    result
}

/// Companion matrix of `u_{k+n} = Σ c_i u_{k+n-i}` acting on the window
/// `(u_k, …, u_{k+n-1})`.
pub fn companion(coeffs: &[BigInt]) -> IntMatrix {
    let n = coeffs.len();
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n.saturating_sub(1) {
        m[i][i + 1] = BigInt::one();
    }
    for (i, c) in coeffs.iter().enumerate() {
        m[n - 1][n - 1 - i] = c.clone();
    }
    m
}

/// Characteristic polynomial `det(xI - A)` via Faddeev–LeVerrier, lowest
/// degree first. All divisions are exact over the integers.
pub fn charpoly(a: &IntMatrix) -> Vec<BigInt> {
    let n = a.len();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for k in 1..=n {
        let mut next = mul(a, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &coeffs[n - k + 1];
        }
        m = next;
        let am = mul(a, &m);
        let trace: BigInt = (0..n).map(|i| am[i][i].clone()).sum();
        let c = -trace / BigInt::from(k);
        coeffs[n - k] = c;
    }
    coeffs
}

/// Fraction-free Gaussian elimination (Bareiss).
pub fn determinant(a: &IntMatrix) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m = a.clone();
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}
