//! Factorization over the rationals for small-degree integer polynomials.
//!
//! Factoring is driven by a [`FactorRegistry`]: an ordered list of
//! [`FactorStrategy`] trait objects, each of which may split a primitive
//! polynomial, declare it irreducible, or give up. Strategies are looked up by
//! name so callers can reorder or restrict them at runtime.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::IntPolynomial;
use crate::arith::{divisors, totient};
use crate::error::{Error, Result};

pub const DEFAULT_FACTOR_DEGREE_CAP: usize = 12;

const DIVISOR_CAP: usize = 4096;
const ROOT_CANDIDATE_CAP: usize = 200_000;
const KRONECKER_BUDGET: usize = 200_000;

/// Outcome of one strategy applied to one primitive polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Split {
    /// Non-trivial factors whose product is exactly the input.
    Factors(Vec<IntPolynomial>),
    Irreducible,
    /// The strategy does not apply or ran out of budget.
    Unknown,
}

pub trait FactorStrategy: Send + Sync {
    fn name(&self) -> &'static str;

    /// `p` is primitive with positive leading coefficient and degree ≥ 1.
    fn split(&self, p: &IntPolynomial) -> Split;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    /// Signed content; `unit * Π f_i^{m_i}` is the input.
    pub unit: BigInt,
    pub factors: Vec<(IntPolynomial, u32)>,
}

impl Factorization {
    pub fn expand(&self) -> IntPolynomial {
        self.factors
            .iter()
            .fold(IntPolynomial::constant(self.unit.clone()), |acc, (f, m)| {
                &acc * &f.pow(*m)
            })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RootSearch {
    /// A root `a/b` in lowest terms with `b > 0`.
    Found(BigRational),
    Absent,
    /// The candidate set was too large to enumerate.
    Undecided,
}

pub fn rational_root(p: &IntPolynomial) -> RootSearch {
    let Some(deg) = p.degree() else {
        return RootSearch::Undecided;
    };
    if deg == 0 {
        return RootSearch::Absent;
    }
    if p.coeff(0).is_zero() {
        return RootSearch::Found(BigRational::zero());
    }
    let (Some(nums), Some(dens)) = (
        divisors(&p.coeff(0), DIVISOR_CAP),
        divisors(&p.leading(), DIVISOR_CAP),
    ) else {
        return RootSearch::Undecided;
    };
    if nums.len().saturating_mul(dens.len()) > ROOT_CANDIDATE_CAP {
        return RootSearch::Undecided;
    }
    for b in &dens {
        for a in &nums {
            if !a.gcd(b).is_one() {
                continue;
            }
            for a in [a.clone(), -a] {
                // b^deg * p(a/b), evaluated without fractions
                let mut acc = BigInt::zero();
                let mut bpow = BigInt::one();
                let mut apow = Vec::with_capacity(deg + 1);
                let mut t = BigInt::one();
                for _ in 0..=deg {
                    apow.push(t.clone());
                    t *= &a;
                }
                for i in (0..=deg).rev() {
                    acc += p.coeff(i) * &apow[i] * &bpow;
                    bpow *= b;
                }
                if acc.is_zero() {
                    return RootSearch::Found(BigRational::new(a, b.clone()));
                }
            }
        }
    }
    RootSearch::Absent
}

pub struct RationalRoots;

impl FactorStrategy for RationalRoots {
    fn name(&self) -> &'static str {
        "rational-roots"
    }

    fn split(&self, p: &IntPolynomial) -> Split {
        if p.degree() == Some(1) {
            return Split::Irreducible;
        }
        match rational_root(p) {
            RootSearch::Found(r) => {
                let lin = IntPolynomial::new(vec![-r.numer().clone(), r.denom().clone()]);
                let rest = p.div_exact(&lin).expect("rational root factor divides");
                Split::Factors(vec![lin, rest])
            }
            _ => Split::Unknown,
        }
    }
}

/// `Φ_n`, memoized process-wide.
pub fn cyclotomic(n: usize) -> IntPolynomial {
    static CACHE: OnceLock<Mutex<HashMap<usize, IntPolynomial>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    assert!(n >= 1, "cyclotomic index must be positive");
    let mut p = IntPolynomial::x_pow_minus_one(n);
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        p = p.div_exact(&cyclotomic(d)).expect("Φ_d divides x^n - 1");
    }
    cache.lock().unwrap().insert(n, p.clone());
    p
}

/// All `n` with `φ(n) <= bound`, ascending.
pub fn indices_with_totient_at_most(bound: usize) -> Vec<usize> {
    // φ(n) >= sqrt(n/2), so n <= 2 bound^2 covers everything
    let limit = 2 * bound * bound + 2;
    (1..=limit)
        .filter(|&n| totient(n as u64) as usize <= bound)
        .collect()
}

pub struct CyclotomicDivision;

impl FactorStrategy for CyclotomicDivision {
    fn name(&self) -> &'static str {
        "cyclotomic"
    }

    fn split(&self, p: &IntPolynomial) -> Split {
        let deg = p.degree().unwrap_or(0);
        for n in indices_with_totient_at_most(deg) {
            let phi = cyclotomic(n);
            if &phi == p {
                return Split::Irreducible;
            }
            if let Some(q) = p.div_exact(&phi) {
                return Split::Factors(vec![phi, q]);
            }
        }
        Split::Unknown
    }
}

/// Degree one is irreducible; degrees two and three are irreducible exactly
/// when there is no rational root.
pub struct SmallDegree;

impl FactorStrategy for SmallDegree {
    fn name(&self) -> &'static str {
        "small-degree"
    }

    fn split(&self, p: &IntPolynomial) -> Split {
        match p.degree() {
            Some(1) => Split::Irreducible,
            Some(2) | Some(3) => match rational_root(p) {
                RootSearch::Absent => Split::Irreducible,
                _ => Split::Unknown,
            },
            _ => Split::Unknown,
        }
    }
}

/// Kronecker's method: a factor of degree `s` is pinned down by its values at
/// `s + 1` points, each of which must divide the value of `p` there.
pub struct Kronecker {
    pub max_degree: usize,
    pub budget: usize,
}

impl Kronecker {
    fn search_degree(&self, p: &IntPolynomial, s: usize, spent: &mut usize) -> Option<Split> {
        let n = p.degree().unwrap();
        let radius = (n + s + 4) as i64;
        let mut points: Vec<(BigInt, BigInt)> = (-radius..=radius)
            .map(BigInt::from)
            .map(|x| {
                let v = p.eval(&x);
                (x, v)
            })
            .filter(|(_, v)| !v.is_zero())
            .collect();
        points.sort_by(|a, b| a.1.abs().cmp(&b.1.abs()).then(a.0.cmp(&b.0)));
        points.truncate(s + 1);
        if points.len() < s + 1 {
            return None;
        }
        let mut choices = Vec::with_capacity(s + 1);
        for (i, (_, v)) in points.iter().enumerate() {
            let pos = divisors(v, DIVISOR_CAP)?;
            let opts: Vec<BigInt> = if i == 0 {
                pos
            } else {
                pos.iter().flat_map(|d| [d.clone(), -d]).collect()
            };
            choices.push(opts);
        }
        let total = choices
            .iter()
            .try_fold(1usize, |acc, c| acc.checked_mul(c.len()))?;
        if total.saturating_add(*spent) > self.budget {
            return None;
        }
        *spent += total;

        // D * L_i(x) with a common denominator D
        let xs: Vec<&BigInt> = points.iter().map(|(x, _)| x).collect();
        let mut denom = BigInt::one();
        let mut basis = Vec::with_capacity(s + 1);
        let mut raw = Vec::with_capacity(s + 1);
        for i in 0..=s {
            let mut num = IntPolynomial::one();
            let mut den = BigInt::one();
            for j in 0..=s {
                if i != j {
                    num = &num * &IntPolynomial::linear_root(xs[j].clone());
                    den *= xs[i] - xs[j];
                }
            }
            denom = denom.lcm(&den);
            raw.push((num, den));
        }
        for (num, den) in raw {
            basis.push(num.scale(&(&denom / den)));
        }

        let mut idx = vec![0usize; s + 1];
        loop {
            let mut acc = vec![BigInt::zero(); s + 1];
            for (i, &k) in idx.iter().enumerate() {
                let d = &choices[i][k];
                for (j, c) in basis[i].coeffs().iter().enumerate() {
                    acc[j] += c * d;
                }
            }
            if acc.iter().all(|c| c.is_multiple_of(&denom)) {
                let f = IntPolynomial::new(acc.into_iter().map(|c| c / &denom).collect());
                if f.degree() == Some(s) {
                    if let Some(q) = p.div_exact(&f) {
                        return Some(Split::Factors(vec![f, q]));
                    }
                }
            }
            // odometer
            let mut pos = 0;
            loop {
                if pos > s {
                    return Some(Split::Irreducible);
                }
                idx[pos] += 1;
                if idx[pos] < choices[pos].len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }
    }
}

impl FactorStrategy for Kronecker {
    fn name(&self) -> &'static str {
        "kronecker"
    }

    fn split(&self, p: &IntPolynomial) -> Split {
        let n = match p.degree() {
            Some(n) if n >= 2 && n <= self.max_degree => n,
            Some(1) => return Split::Irreducible,
            _ => return Split::Unknown,
        };
        let mut spent = 0;
        for s in 1..=n / 2 {
            match self.search_degree(p, s, &mut spent) {
                Some(Split::Factors(f)) => return Split::Factors(f),
                Some(_) => continue,
                None => return Split::Unknown,
            }
        }
        Split::Irreducible
    }
}

pub const STRATEGY_NAMES: [&str; 4] = ["rational-roots", "cyclotomic", "small-degree", "kronecker"];

pub fn strategy_by_name(name: &str, degree_cap: usize) -> Option<Box<dyn FactorStrategy>> {
    Some(match name {
        "rational-roots" => Box::new(RationalRoots),
        "cyclotomic" => Box::new(CyclotomicDivision),
        "small-degree" => Box::new(SmallDegree),
        "kronecker" => Box::new(Kronecker {
            max_degree: degree_cap,
            budget: KRONECKER_BUDGET,
        }),
        _ => return None,
    })
}

#[derive(Default)]
pub struct FactorRegistry {
    strategies: Vec<Box<dyn FactorStrategy>>,
}

impl FactorRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_defaults(degree_cap: usize) -> Self {
        Self::from_names(&STRATEGY_NAMES, degree_cap).expect("built-in strategy names")
    }

    pub fn from_names(names: &[&str], degree_cap: usize) -> Result<Self> {
        let mut reg = Self::new();
        for name in names {
            let s = strategy_by_name(name, degree_cap)
                .ok_or_else(|| Error::InvalidInput(format!("unknown factor strategy `{name}`")))?;
            reg.register(s);
        }
        Ok(reg)
    }

    pub fn register(&mut self, strategy: Box<dyn FactorStrategy>) {
        self.strategies.push(strategy);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.strategies.iter().map(|s| s.name()).collect()
    }

    pub fn factor(&self, p: &IntPolynomial) -> Result<Factorization> {
        let Some(degree) = p.degree() else {
            return Err(Error::InvalidInput(
                "cannot factor the zero polynomial".into(),
            ));
        };
        let prim = p.primitive_part();
        let mut unit = p.content();
        if p.leading().is_negative() {
            unit = -unit;
        }
        let mut pending = vec![prim];
        let mut irreducible: Vec<IntPolynomial> = Vec::new();
        'next: while let Some(q) = pending.pop() {
            if q.degree() == Some(0) {
                unit *= q.coeff(0);
                continue;
            }
            for s in &self.strategies {
                match s.split(&q) {
                    Split::Irreducible => {
                        irreducible.push(q);
                        continue 'next;
                    }
                    Split::Factors(parts) => {
                        for part in parts {
                            if part.leading().is_negative() {
                                unit = -unit;
                                pending.push(-&part);
                            } else {
                                pending.push(part);
                            }
                        }
                        continue 'next;
                    }
                    Split::Unknown => {}
                }
            }
            return Err(Error::Unfactorable {
                degree: degree.max(q.degree().unwrap_or(0)),
            });
        }
        irreducible.sort_by(|a, b| a.degree().cmp(&b.degree()).then(a.coeffs().cmp(b.coeffs())));
        let mut factors: Vec<(IntPolynomial, u32)> = Vec::new();
        for f in irreducible {
            match factors.last_mut() {
                Some((g, m)) if *g == f => *m += 1,
                _ => factors.push((f, 1)),
            }
        }
        Ok(Factorization { unit, factors })
    }
}

/// Factor with the default strategy chain and degree cap.
pub fn factor(p: &IntPolynomial) -> Result<Factorization> {
    FactorRegistry::with_defaults(DEFAULT_FACTOR_DEGREE_CAP).factor(p)
}
