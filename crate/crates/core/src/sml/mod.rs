//! Zero sets `{k : u_k = D}` of integer linear recurrences.
//!
//! The sequence is split into residue classes modulo the splitting modulus of
//! its characteristic polynomial. A class is either identically zero, giving a
//! whole progression, or has finitely many zeros. Those are pinned down by a
//! certifier when one succeeds, and otherwise searched up to a bound.

mod certify;

use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::Zero;

pub use certify::{
    certifier_by_name, Certificate, Certifier, CertifierRegistry, ClassContext, Dominance, Sieve,
    SieveDominance, SievePairs, CERTIFIER_NAMES,
};

use crate::apset::{APSet, ArithmeticProgression, Completeness};
use crate::arith::first_primes;
use crate::error::{Error, Result};
use crate::polyalg::{ratio_splitting_modulus, DEFAULT_FACTOR_DEGREE_CAP};
use crate::recurrence::Recurrence;

/// Primes for the modular prefilter of the zero search.
const PREFILTER_PRIMES: [u64; 2] = [2_305_843_009_213_693_951, 4_294_967_291];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmlOptions {
    pub search_bound: u64,
    pub sieve_moduli: Vec<u64>,
    pub factor_degree_cap: usize,
    pub certifiers: Vec<String>,
    /// States explored per sieve modulus before that modulus is skipped.
    pub sieve_state_budget: usize,
}

impl Default for SmlOptions {
    fn default() -> Self {
        SmlOptions {
            search_bound: 10_000,
            sieve_moduli: first_primes(25),
            factor_degree_cap: DEFAULT_FACTOR_DEGREE_CAP,
            certifiers: CERTIFIER_NAMES.iter().map(|s| s.to_string()).collect(),
            sieve_state_budget: 100_000,
        }
    }
}

impl SmlOptions {
    pub fn with_search_bound(mut self, k: u64) -> Self {
        self.search_bound = k;
        self
    }

    pub fn with_sieve_primes(mut self, count: usize) -> Self {
        self.sieve_moduli = first_primes(count);
        self
    }
}

/// How one residue class `k ≡ r (mod M)` was settled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassOutcome {
    IdenticallyZero,
    Certified(Certificate),
    /// Zeros found by search up to the bound; more may exist beyond it.
    Searched(Vec<u64>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroSetReport {
    pub set: APSet,
    pub modulus: u64,
    /// Indexed by residue `r < modulus`.
    pub classes: Vec<ClassOutcome>,
    pub degraded: bool,
}

/// Caching front end for zero-set computations.
pub struct SmlSolver {
    options: SmlOptions,
    registry: CertifierRegistry,
    cache: Mutex<HashMap<Recurrence, ZeroSetReport>>,
}

impl SmlSolver {
    pub fn new(options: SmlOptions) -> Result<Self> {
        if options.sieve_moduli.iter().any(|&m| m < 2) {
            return Err(crate::error::invalid("sieve moduli must be at least 2"));
        }
        let registry = CertifierRegistry::from_names(&options.certifiers)?;
        Ok(SmlSolver {
            options,
            registry,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn options(&self) -> &SmlOptions {
        &self.options
    }

    pub fn zero_set(&self, rec: &Recurrence) -> Result<APSet> {
        Ok(self.report(rec)?.set)
    }

    /// `{k : Σ λ_t u^{(t)}_k = D}`
    pub fn solve_linear_condition(
        &self,
        terms: &[(BigInt, Recurrence)],
        d: &BigInt,
    ) -> Result<APSet> {
        self.zero_set(&Recurrence::linear_combination(terms, d))
    }

    pub fn report(&self, rec: &Recurrence) -> Result<ZeroSetReport> {
        let rec = rec.minimized();
        if let Some(hit) = self.cache.lock().unwrap().get(&rec) {
            return Ok(hit.clone());
        }
        let report = self.compute(&rec)?;
        self.cache.lock().unwrap().insert(rec, report.clone());
        Ok(report)
    }

    fn compute(&self, rec: &Recurrence) -> Result<ZeroSetReport> {
        let k_max = self.options.search_bound;
        if rec.is_identically_zero() {
            return Ok(ZeroSetReport {
                set: APSet::naturals(),
                modulus: 1,
                classes: vec![ClassOutcome::IdenticallyZero],
                degraded: false,
            });
        }
        let (m, degraded) = match ratio_splitting_modulus(
            &rec.characteristic_polynomial(),
            self.options.factor_degree_cap,
        ) {
            Ok(s) => (s.0, false),
            Err(Error::Unfactorable { .. }) => (1, true),
            Err(e) => return Err(e),
        };
        let subs: Vec<Recurrence> = (0..m).map(|r| rec.subsample(m, r).minimized()).collect();
        let zero_class: Vec<bool> = subs.iter().map(Recurrence::is_identically_zero).collect();
        let found = search_zeros(rec, k_max, |k| !zero_class[(k % m) as usize]);

        let mut progs = Vec::new();
        let mut classes = Vec::with_capacity(m as usize);
        let mut complete = !degraded;
        for (r, sub) in subs.iter().enumerate() {
            let r = r as u64;
            if zero_class[r as usize] {
                progs.push(ArithmeticProgression::new(m, r));
                classes.push(ClassOutcome::IdenticallyZero);
                continue;
            }
            let ctx = ClassContext::new(sub, &self.options);
            match self.registry.certify(&ctx) {
                Some(cert) => {
                    progs.extend(
                        cert.zeros
                            .iter()
                            .map(|&j| ArithmeticProgression::singleton(m * j + r)),
                    );
                    classes.push(ClassOutcome::Certified(cert));
                }
                None => {
                    complete = false;
                    let local: Vec<u64> = found.iter().filter(|&&k| k % m == r).copied().collect();
                    progs.extend(local.iter().map(|&k| ArithmeticProgression::singleton(k)));
                    classes.push(ClassOutcome::Searched(
                        local.iter().map(|k| k / m).collect(),
                    ));
                }
            }
        }
        let flag = if complete {
            Completeness::Complete
        } else {
            Completeness::VerifiedUpTo(k_max)
        };
        let mut set = APSet::new(progs, flag);
        if degraded {
            set = set.with_note(format!(
                "characteristic polynomial beyond factor degree cap {}; residue split skipped",
                self.options.factor_degree_cap
            ));
        }
        Ok(ZeroSetReport {
            set,
            modulus: m,
            classes,
            degraded,
        })
    }
}

/// Zeros `k ≤ bound` in classes accepted by `keep`: residues modulo two large
/// primes flag candidates, which are then confirmed exactly.
fn search_zeros(rec: &Recurrence, bound: u64, keep: impl Fn(u64) -> bool) -> Vec<u64> {
    let count = bound as usize + 1;
    let a = rec.residues(PREFILTER_PRIMES[0], count);
    let b = rec.residues(PREFILTER_PRIMES[1], count);
    (0..count)
        .filter(|&k| a[k] == 0 && b[k] == 0 && keep(k as u64))
        .map(|k| k as u64)
        .filter(|&k| rec.evaluate(k).is_zero())
        .collect()
}

pub fn zero_set(rec: &Recurrence, options: &SmlOptions) -> Result<APSet> {
    SmlSolver::new(options.clone())?.zero_set(rec)
}

pub fn solve_linear_condition(
    terms: &[(BigInt, Recurrence)],
    d: &BigInt,
    options: &SmlOptions,
) -> Result<APSet> {
    SmlSolver::new(options.clone())?.solve_linear_condition(terms, d)
}
