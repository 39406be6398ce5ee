use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::matrix::{identity, mul_vec, IntMatrix};

/// Smith normal form `U·A·V = diag(d)` with `U`, `V` unimodular and
/// `d_1 | d_2 | …`, all positive.
#[derive(Debug, Clone)]
pub struct Smith {
    rows: usize,
    cols: usize,
    u: IntMatrix,
    v: IntMatrix,
    diagonal: Vec<BigInt>,
}

impl Smith {
    pub fn new(a: &[Vec<BigInt>], cols: usize) -> Self {
        let rows = a.len();
        let mut m: IntMatrix = a.to_vec();
        let mut u = identity(rows);
        let mut v = identity(cols);
        let mut t = 0;
        while t < rows.min(cols) {
            // the smallest remaining entry keeps quotients and growth small
            while let Some((pi, pj)) = min_entry(&m, t, cols) {
                m.swap(t, pi);
                u.swap(t, pi);
                swap_cols(&mut m, t, pj);
                swap_cols(&mut v, t, pj);
                let mut clean = true;
                for i in t + 1..rows {
                    let q = nearest_quotient(&m[i][t], &m[t][t]);
                    row_axpy(&mut m, i, t, &q);
                    row_axpy(&mut u, i, t, &q);
                    clean &= m[i][t].is_zero();
                }
                for j in t + 1..cols {
                    let q = nearest_quotient(&m[t][j], &m[t][t]);
                    col_axpy(&mut m, j, t, &q);
                    col_axpy(&mut v, j, t, &q);
                    clean &= m[t][j].is_zero();
                }
                if !clean {
                    continue;
                }
                // divisibility: fold an offending row into the pivot row and go again
                let pivot = m[t][t].clone();
                let bad =
                    (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !m[i][j].is_multiple_of(&pivot)));
                match bad {
                    Some(i) => {
                        let minus_one = -BigInt::from(1);
                        row_axpy(&mut m, t, i, &minus_one);
                        row_axpy(&mut u, t, i, &minus_one);
                    }
                    None => break,
                }
            }
            if m.get(t).is_none_or(|row| row[t].is_zero()) {
                break;
            }
            if m[t][t].is_negative() {
                for x in m[t].iter_mut() {
                    *x = -&*x;
                }
                for x in u[t].iter_mut() {
                    *x = -&*x;
                }
            }
            t += 1;
        }
        let diagonal = (0..t).map(|i| m[i][i].clone()).collect();
        Smith {
            rows,
            cols,
            u,
            v,
            diagonal,
        }
    }

    /// Nonzero diagonal entries.
    pub fn diagonal(&self) -> &[BigInt] {
        &self.diagonal
    }

    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }

    /// Some integer `x` with `A·x = b`, if any.
    pub fn solve(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(b.len(), self.rows, "right-hand side has the wrong length");
        let ub = mul_vec(&self.u, b);
        let mut y = vec![BigInt::zero(); self.cols];
        for (i, val) in ub.iter().enumerate() {
            if i < self.rank() {
                let (q, r) = val.div_rem(&self.diagonal[i]);
                if !r.is_zero() {
                    return None;
                }
                y[i] = q;
            } else if !val.is_zero() {
                return None;
            }
        }
        Some(mul_vec(&self.v, &y))
    }

    /// A basis of `{x : A·x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<BigInt>> {
        (self.rank()..self.cols)
            .map(|j| self.v.iter().map(|row| row[j].clone()).collect())
            .collect()
    }
}

/// `round(a / b)`, so the remainder is at most `|b|/2` in size.
fn nearest_quotient(a: &BigInt, b: &BigInt) -> BigInt {
    if a.is_zero() {
        return BigInt::zero();
    }
    let (q, r) = a.div_mod_floor(b);
    if (&r + &r).abs() > b.abs() {
        q + 1
    } else {
        q
    }
}

fn min_entry(m: &IntMatrix, t: usize, cols: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in m.iter().enumerate().skip(t) {
        for (j, x) in row.iter().enumerate().take(cols).skip(t) {
            if x.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| x.abs() < m[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

/// `row_i -= q·row_t`
fn row_axpy(m: &mut IntMatrix, i: usize, t: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    let src = m[t].clone();
    for (x, s) in m[i].iter_mut().zip(&src) {
        *x -= q * s;
    }
}

/// `col_j -= q·col_t`
fn col_axpy(m: &mut IntMatrix, j: usize, t: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for row in m.iter_mut() {
        let s = q * &row[t];
        row[j] -= s;
    }
}

fn swap_cols(m: &mut IntMatrix, a: usize, b: usize) {
    if a != b {
        for row in m.iter_mut() {
            row.swap(a, b);
        }
    }
}
