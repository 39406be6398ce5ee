//! Integer linear recurrence sequences `u_{k+n} = Σ_{i=1}^n c_i u_{k+n-i}`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::apset::{APSet, ArithmeticProgression, Completeness};
use crate::arith::{add_mod, mul_mod, reduce};
use crate::error::{invalid, Error, Result};
use crate::matrix;
use crate::polyalg::IntPolynomial;

/// Default cap on stored states in modular orbit detection.
pub const DEFAULT_STATE_CAP: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Recurrence {
    coeffs: Vec<BigInt>,
    initial: Vec<BigInt>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModularStateOrbit {
    pub modulus: u64,
    pub preperiod: u64,
    pub period: u64,
}

impl Recurrence {
    pub fn new(coeffs: Vec<BigInt>, initial: Vec<BigInt>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(invalid("recurrence order must be at least 1"));
        }
        if coeffs.len() != initial.len() {
            return Err(invalid(format!(
                "recurrence of order {} needs {} initial terms, got {}",
                coeffs.len(),
                coeffs.len(),
                initial.len()
            )));
        }
        if coeffs.last().unwrap().is_zero() {
            return Err(invalid("last recurrence coefficient must be nonzero"));
        }
        Ok(Recurrence { coeffs, initial })
    }

    pub fn from_i64s(coeffs: &[i64], initial: &[i64]) -> Result<Self> {
        Self::new(
            coeffs.iter().map(|&c| BigInt::from(c)).collect(),
            initial.iter().map(|&c| BigInt::from(c)).collect(),
        )
    }

    /// The identically zero sequence, as an order-one recurrence.
    pub fn zero() -> Self {
        Recurrence {
            coeffs: vec![BigInt::one()],
            initial: vec![BigInt::zero()],
        }
    }

    pub fn constant(value: BigInt) -> Self {
        Recurrence {
            coeffs: vec![BigInt::one()],
            initial: vec![value],
        }
    }

    /// `start · ratio^k`
    pub fn geometric(ratio: BigInt, start: BigInt) -> Result<Self> {
        Self::new(vec![ratio], vec![start])
    }

    pub fn fibonacci() -> Self {
        Self::from_i64s(&[1, 1], &[0, 1]).unwrap()
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn initial(&self) -> &[BigInt] {
        &self.initial
    }

    /// `x^n - Σ c_i x^{n-i}`
    pub fn characteristic_polynomial(&self) -> IntPolynomial {
        let n = self.order();
        let mut c = vec![BigInt::zero(); n + 1];
        c[n] = BigInt::one();
        for (i, ci) in self.coeffs.iter().enumerate() {
            c[n - 1 - i] = -ci;
        }
        IntPolynomial::new(c)
    }

    /// `u_k` by companion-matrix powering.
    pub fn evaluate(&self, k: u64) -> BigInt {
        let n = self.order() as u64;
        if k < n {
            return self.initial[k as usize].clone();
        }
        let c = matrix::companion(&self.coeffs);
        let p = matrix::pow(&c, k);
        p[0].iter().zip(&self.initial).map(|(a, b)| a * b).sum()
    }

    /// The first `count` terms by front-to-back iteration.
    pub fn terms(&self, count: usize) -> Vec<BigInt> {
        self.iter().take(count).collect()
    }

    pub fn iter(&self) -> Terms<'_> {
        Terms {
            rec: self,
            window: self.initial.clone(),
            pos: 0,
        }
    }

    /// The impulse sequence `z_{·,j}`: zero at `0..g` except `z_{j,j} = 1`,
    /// then following the coefficients `e`.
    pub fn impulse(e: &[BigInt], j: usize) -> Result<Self> {
        if j >= e.len() {
            return Err(invalid(format!(
                "impulse index {j} out of range for order {}",
                e.len()
            )));
        }
        let mut init = vec![BigInt::zero(); e.len()];
        init[j] = BigInt::one();
        Self::new(e.to_vec(), init)
    }

    /// `v_k = u_{k+ℓ}`
    pub fn shift(&self, by: u64) -> Self {
        if by == 0 {
            return self.clone();
        }
        let n = self.order() as u64;
        let init = (0..n).map(|i| self.evaluate(by + i)).collect();
        Recurrence {
            coeffs: self.coeffs.clone(),
            initial: init,
        }
    }

    /// `v_k = u_{M·k + r}`, with coefficients read off the characteristic
    /// polynomial of the `M`-th power of the companion matrix.
    pub fn subsample(&self, m: u64, r: u64) -> Self {
        assert!(m >= 1, "subsample step must be positive");
        if m == 1 {
            return self.shift(r);
        }
        let n = self.order();
        let cm = matrix::pow(&matrix::companion(&self.coeffs), m);
        let cp = matrix::charpoly(&cm);
        let coeffs: Vec<BigInt> = (1..=n).map(|i| -&cp[n - i]).collect();
        let initial = (0..n as u64).map(|k| self.evaluate(m * k + r)).collect();
        Recurrence { coeffs, initial }
    }

    /// `Σ_t λ_t u^{(t)}_k − D` as a recurrence of minimal order.
    pub fn linear_combination(terms: &[(BigInt, Recurrence)], constant: &BigInt) -> Self {
        assert!(!terms.is_empty(), "linear combination of no sequences");
        // provisional characteristic polynomial: (x-1) times each distinct input polynomial
        let mut provisional = IntPolynomial::from_i64s(&[-1, 1]);
        let mut seen: Vec<IntPolynomial> = Vec::new();
        for (_, rec) in terms {
            let cp = rec.characteristic_polynomial();
            if !seen.contains(&cp) {
                provisional = &provisional * &cp;
                seen.push(cp);
            }
        }
        let order = provisional.degree().unwrap();
        let count = 3 * order;
        let mut values = vec![-constant.clone(); count];
        for (w, rec) in terms {
            if w.is_zero() {
                continue;
            }
            for (v, u) in values.iter_mut().zip(rec.iter()) {
                *v += w * u;
            }
        }
        if let Some(rec) = fit_minimal(&values, order) {
            return rec;
        }
        let lead = provisional.coeffs();
        let coeffs = (1..=order).map(|i| -&lead[order - i]).collect();
        Recurrence {
            coeffs,
            initial: values[..order].to_vec(),
        }
    }

    /// The same sequence with the shortest recurrence that generates it.
    pub fn minimized(&self) -> Self {
        let n = self.order();
        let values = self.terms(3 * n);
        fit_minimal(&values, n).unwrap_or_else(|| self.clone())
    }

    /// A linear recursion propagates zeros, so the first `n` terms decide.
    pub fn is_identically_zero(&self) -> bool {
        self.initial.iter().all(Zero::is_zero)
    }

    pub fn state_orbit_mod(&self, m: u64) -> Result<ModularStateOrbit> {
        self.state_orbit_mod_capped(m, DEFAULT_STATE_CAP)
    }

    pub fn state_orbit_mod_capped(&self, m: u64, cap: usize) -> Result<ModularStateOrbit> {
        Ok(self.modular_orbit(m, cap)?.0)
    }

    /// Exact solution set of `u_k ≡ d (mod m)`.
    pub fn solution_set_mod(&self, m: u64, d: u64) -> Result<APSet> {
        self.solution_set_mod_capped(m, d, DEFAULT_STATE_CAP)
    }

    pub fn solution_set_mod_capped(&self, m: u64, d: u64, cap: usize) -> Result<APSet> {
        if m < 2 {
            return Err(invalid("modulus must be at least 2"));
        }
        let d = d % m;
        let (orbit, residues) = self.modular_orbit(m, cap)?;
        let mut progs = Vec::new();
        for (k, &v) in residues.iter().enumerate() {
            if v != d {
                continue;
            }
            let k = k as u64;
            if k < orbit.preperiod {
                progs.push(ArithmeticProgression::singleton(k));
            } else {
                progs.push(ArithmeticProgression::new(orbit.period, k));
            }
        }
        Ok(APSet::new(progs, Completeness::Complete))
    }

    /// First-repeat detection on the state window mod `m`. Also returns the
    /// residues `u_k mod m` for `k < preperiod + period`.
    fn modular_orbit(&self, m: u64, cap: usize) -> Result<(ModularStateOrbit, Vec<u64>)> {
        if m < 2 {
            return Err(invalid("modulus must be at least 2"));
        }
        let n = self.order();
        let coeffs: Vec<u64> = self.coeffs.iter().map(|c| reduce(c, m)).collect();
        let mut state: Vec<u64> = self.initial.iter().map(|c| reduce(c, m)).collect();
        let step = |s: &mut Vec<u64>| {
            let mut next = 0u64;
            for (i, c) in coeffs.iter().enumerate() {
                next = add_mod(next, mul_mod(*c, s[n - 1 - i], m), m);
            }
            s.remove(0);
            s.push(next);
        };
        let mut residues = Vec::new();
        // an invertible step map has no preperiod: watch for the initial state
        if coeffs[n - 1].gcd(&m) == 1 {
            let start = state.clone();
            loop {
                residues.push(state[0]);
                step(&mut state);
                if state == start {
                    let period = residues.len() as u64;
                    return Ok((
                        ModularStateOrbit {
                            modulus: m,
                            preperiod: 0,
                            period,
                        },
                        residues,
                    ));
                }
                if residues.len() >= cap {
                    return Err(Error::StateBudgetExceeded { modulus: m, cap });
                }
            }
        }
        let mut seen: HashMap<Vec<u64>, u64> = HashMap::new();
        let mut k = 0u64;
        loop {
            if let Some(&first) = seen.get(&state) {
                residues.truncate(k as usize);
                return Ok((
                    ModularStateOrbit {
                        modulus: m,
                        preperiod: first,
                        period: k - first,
                    },
                    residues,
                ));
            }
            if seen.len() >= cap {
                return Err(Error::StateBudgetExceeded { modulus: m, cap });
            }
            seen.insert(state.clone(), k);
            residues.push(state[0]);
            step(&mut state);
            k += 1;
        }
    }

    /// Residues `u_k mod m` for `k < count`, by iteration.
    pub fn residues(&self, m: u64, count: usize) -> Vec<u64> {
        let n = self.order();
        let coeffs: Vec<u64> = self.coeffs.iter().map(|c| reduce(c, m)).collect();
        let mut state: Vec<u64> = self.initial.iter().map(|c| reduce(c, m)).collect();
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            out.push(state[0]);
            let mut next = 0u64;
            for (i, c) in coeffs.iter().enumerate() {
                next = add_mod(next, mul_mod(*c, state[n - 1 - i], m), m);
            }
            state.rotate_left(1);
            state[n - 1] = next;
        }
        out
    }
}

pub struct Terms<'a> {
    rec: &'a Recurrence,
    window: Vec<BigInt>,
    pos: usize,
}

impl Iterator for Terms<'_> {
    type Item = BigInt;

    fn next(&mut self) -> Option<BigInt> {
        let n = self.rec.order();
        let out = self.window[self.pos % n].clone();
        // window is a ring buffer holding u_pos..u_{pos+n-1}
        let mut next = BigInt::zero();
        for (i, c) in self.rec.coeffs.iter().enumerate() {
            let idx = (self.pos + n - 1 - i) % n;
            if !c.is_zero() {
                next += c * &self.window[idx];
            }
        }
        self.window[self.pos % n] = next;
        self.pos += 1;
        Some(out)
    }
}

/// Berlekamp–Massey over the rationals on `values`, whose linear complexity is
/// known to be at most `bound`; the fit is checked against every value given.
/// Returns `None` when the result is not an integral recurrence with nonzero
/// last coefficient.
fn fit_minimal(values: &[BigInt], bound: usize) -> Option<Recurrence> {
    let used = (2 * bound).min(values.len());
    let s: Vec<BigRational> = values[..used]
        .iter()
        .cloned()
        .map(BigRational::from)
        .collect();
    let mut conn = vec![BigRational::one()];
    let mut prev = vec![BigRational::one()];
    let mut len = 0usize;
    let mut shift = 1usize;
    let mut prev_disc = BigRational::one();
    for i in 0..s.len() {
        let mut d = s[i].clone();
        for j in 1..=len.min(conn.len() - 1) {
            d += &conn[j] * &s[i - j];
        }
        if d.is_zero() {
            shift += 1;
            continue;
        }
        let factor = &d / &prev_disc;
        let mut updated = conn.clone();
        if updated.len() < prev.len() + shift {
            updated.resize(prev.len() + shift, BigRational::zero());
        }
        for (j, b) in prev.iter().enumerate() {
            updated[j + shift] -= &factor * b;
        }
        if 2 * len <= i {
            prev = std::mem::replace(&mut conn, updated);
            len = i + 1 - len;
            prev_disc = d;
            shift = 1;
        } else {
            conn = updated;
            shift += 1;
        }
    }
    if len == 0 {
        return Some(Recurrence::zero());
    }
    conn.resize(len + 1, BigRational::zero());
    let mut coeffs = Vec::with_capacity(len);
    for c in &conn[1..=len] {
        if !c.is_integer() {
            return None;
        }
        coeffs.push(-c.to_integer());
    }
    if coeffs[len - 1].is_zero() {
        return None;
    }
    // exact check on every supplied value
    for k in len..values.len() {
        let v: BigInt = (1..=len).map(|i| &coeffs[i - 1] * &values[k - i]).sum();
        if v != values[k] {
            return None;
        }
    }
    Some(Recurrence {
        coeffs,
        initial: values[..len].to_vec(),
    })
}
