//! Certificates that pin down the complete zero set of a single residue class.

use std::cell::OnceCell;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::SmlOptions;
use crate::apset::APSet;
use crate::error::{invalid, Result};
use crate::recurrence::Recurrence;

/// Subsampling steps tried by the dominance certifier.
const DOMINANCE_STEPS: [u64; 9] = [1, 2, 3, 4, 6, 8, 12, 16, 24];

/// Terms scanned for a dominating window before giving up.
const DOMINANCE_HORIZON: usize = 1024;

/// Term size in bits at which a dominance scan is abandoned.
const DOMINANCE_BIT_CAP: u64 = 1 << 14;

/// Largest product of progression counts compared by the pair sieve.
const PAIR_WORK_CAP: usize = 1 << 16;

/// Largest modular zero set split into classes by the sieve-dominance certifier.
const SPLIT_CLASS_CAP: usize = 16;

/// Largest class modulus the sieve-dominance certifier subsamples with.
const SPLIT_MODULUS_CAP: u64 = 24;

/// Dominance checks the sieve-dominance certifier runs across all moduli.
const SPLIT_ATTEMPT_CAP: usize = 4;

/// The exact zero set of a class sequence, with how it was obtained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub certifier: &'static str,
    pub detail: String,
    /// Indices `j` of the class sequence with `v_j = 0`, sorted.
    pub zeros: Vec<u64>,
}

/// One residue class: its sequence and the lazily computed modular zero sets.
pub struct ClassContext<'a> {
    seq: &'a Recurrence,
    options: &'a SmlOptions,
    sieve: Vec<OnceCell<Option<APSet>>>,
}

impl<'a> ClassContext<'a> {
    pub fn new(seq: &'a Recurrence, options: &'a SmlOptions) -> Self {
        let sieve = options
            .sieve_moduli
            .iter()
            .map(|_| OnceCell::new())
            .collect();
        ClassContext {
            seq,
            options,
            sieve,
        }
    }

    pub fn sequence(&self) -> &Recurrence {
        self.seq
    }

    /// `{j : v_j ≡ 0 (mod m_i)}`, or `None` if the state budget ran out.
    fn sieve_set(&self, i: usize) -> Option<&APSet> {
        self.sieve[i]
            .get_or_init(|| {
                let m = self.options.sieve_moduli[i];
                self.seq
                    .solution_set_mod_capped(m, 0, self.options.sieve_state_budget)
                    .ok()
            })
            .as_ref()
    }

    fn exact_zeros(&self, candidates: impl IntoIterator<Item = u64>) -> Vec<u64> {
        candidates
            .into_iter()
            .filter(|&j| self.seq.evaluate(j).is_zero())
            .collect()
    }
}

pub trait Certifier: Send + Sync {
    fn name(&self) -> &'static str;
    fn certify(&self, class: &ClassContext<'_>) -> Option<Certificate>;
}

/// A single modulus whose zero set is finite.
pub struct Sieve;

impl Certifier for Sieve {
    fn name(&self) -> &'static str {
        "sieve"
    }

    fn certify(&self, class: &ClassContext<'_>) -> Option<Certificate> {
        (0..class.sieve.len()).find_map(|i| {
            let set = class.sieve_set(i).filter(|s| s.is_finite())?;
            let m = class.options.sieve_moduli[i];
            let detail = if set.is_empty() {
                format!("no zeros mod {m}")
            } else {
                format!("zeros mod {m} are finite")
            };
            Some(Certificate {
                certifier: self.name(),
                detail,
                zeros: class.exact_zeros(set.enumerate_up_to(u64::MAX)),
            })
        })
    }
}

/// Two moduli whose joint zero set is finite.
pub struct SievePairs;

impl Certifier for SievePairs {
    fn name(&self) -> &'static str {
        "sieve-pairs"
    }

    fn certify(&self, class: &ClassContext<'_>) -> Option<Certificate> {
        let n = class.sieve.len();
        for i in 0..n {
            let Some(a) = class.sieve_set(i) else {
                continue;
            };
            for j in i + 1..n {
                let Some(b) = class.sieve_set(j) else {
                    continue;
                };
                if a.progressions().len() * b.progressions().len() > PAIR_WORK_CAP {
                    continue;
                }
                if let Some(both) = finite_meet(a, b) {
                    let (p, q) = (class.options.sieve_moduli[i], class.options.sieve_moduli[j]);
                    return Some(Certificate {
                        certifier: self.name(),
                        detail: format!("zeros mod {p} and mod {q} meet in a finite set"),
                        zeros: class.exact_zeros(both),
                    });
                }
            }
        }
        None
    }
}

/// Eventual strict growth of one sign, after subsampling.
pub struct Dominance;

impl Certifier for Dominance {
    fn name(&self) -> &'static str {
        "dominance"
    }

    fn certify(&self, class: &ClassContext<'_>) -> Option<Certificate> {
        let (step, zeros) = dominance_zeros(class.seq)?;
        Some(Certificate {
            certifier: self.name(),
            detail: format!("dominant growth on every class mod {step}"),
            zeros,
        })
    }
}

/// Dominance applied separately to each progression of a modular zero set.
pub struct SieveDominance;

impl Certifier for SieveDominance {
    fn name(&self) -> &'static str {
        "sieve-dominance"
    }

    fn certify(&self, class: &ClassContext<'_>) -> Option<Certificate> {
        let mut attempts = 0;
        'moduli: for i in 0..class.sieve.len() {
            let Some(set) = class.sieve_set(i) else {
                continue;
            };
            let progs = set.progressions();
            if progs.len() > SPLIT_CLASS_CAP || progs.iter().any(|p| p.modulus > SPLIT_MODULUS_CAP)
            {
                continue;
            }
            let mut zeros = Vec::new();
            for p in progs {
                if p.is_singleton() {
                    if class.seq.evaluate(p.first).is_zero() {
                        zeros.push(p.first);
                    }
                    continue;
                }
                attempts += 1;
                if attempts > SPLIT_ATTEMPT_CAP {
                    return None;
                }
                let sub = class.seq.subsample(p.modulus, p.first);
                let Some((_, local)) = dominance_zeros(&sub) else {
                    continue 'moduli;
                };
                zeros.extend(local.into_iter().map(|j| p.first + p.modulus * j));
            }
            zeros.sort_unstable();
            zeros.dedup();
            return Some(Certificate {
                certifier: self.name(),
                detail: format!(
                    "dominant growth on the zero classes mod {}",
                    class.options.sieve_moduli[i]
                ),
                zeros,
            });
        }
        None
    }
}

/// `A ∩ B` as a sorted list when it is finite.
fn finite_meet(a: &APSet, b: &APSet) -> Option<Vec<u64>> {
    let (pa, pb) = (a.progressions(), b.progressions());
    let infinite_overlap = pa.iter().filter(|p| !p.is_singleton()).any(|p| {
        pb.iter()
            .filter(|q| !q.is_singleton())
            .any(|q| p.intersect(q).is_some())
    });
    if infinite_overlap {
        return None;
    }
    let mut points: Vec<u64> = pa
        .iter()
        .filter(|p| p.is_singleton() && b.contains(p.first))
        .chain(
            pb.iter()
                .filter(|q| q.is_singleton() && a.contains(q.first)),
        )
        .map(|p| p.first)
        .collect();
    points.sort_unstable();
    points.dedup();
    Some(points)
}

/// Smallest step `T` such that every class `v_{Tj+r}` is eventually dominated,
/// with the exact zeros found in the prefixes.
fn dominance_zeros(seq: &Recurrence) -> Option<(u64, Vec<u64>)> {
    if seq.is_identically_zero() {
        return None;
    }
    'steps: for &t in &DOMINANCE_STEPS {
        let mut zeros = Vec::new();
        for r in 0..t {
            let sub = seq.subsample(t, r).minimized();
            let Some(local) = dominated_prefix_zeros(&sub) else {
                continue 'steps;
            };
            zeros.extend(local.into_iter().map(|j| r + t * j));
        }
        zeros.sort_unstable();
        return Some((t, zeros));
    }
    None
}

/// For `w_k = Σ c_i w_{k-i}` with `c_1 > 0` and `λ > 0` such that
/// `λ^n - c_1 λ^{n-1} + Σ_{i≥2} |c_i| λ^{n-i} ≤ 0`: once some `w_k > 0` has
/// `|w_{k-j}| λ^j ≤ w_k` for `j < n`, every later term exceeds `λ` times its
/// predecessor. A negative `c_1` is handled by flipping odd-indexed signs.
fn dominated_prefix_zeros(seq: &Recurrence) -> Option<Vec<u64>> {
    if seq.is_identically_zero() {
        return None;
    }
    let n = seq.order();
    if n == 1 {
        // c_1 ≠ 0, so a nonzero start never reaches zero
        return Some(Vec::new());
    }
    let flip = seq.coeffs()[0].is_negative();
    let c: Vec<BigInt> = seq
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, x)| if flip && i % 2 == 0 { -x } else { x.clone() })
        .collect();
    if !c[0].is_positive() {
        return None;
    }
    let lambda = dominance_ratio(&c)?;
    let (num, den) = (lambda.numer().clone(), lambda.denom().clone());
    let num_pows: Vec<BigInt> = (0..n).map(|j| num.pow(j as u32)).collect();
    let den_pows: Vec<BigInt> = (0..n).map(|j| den.pow(j as u32)).collect();
    let mut zeros = Vec::new();
    let mut window: Vec<BigInt> = Vec::with_capacity(DOMINANCE_HORIZON);
    for (k, w) in seq.iter().take(DOMINANCE_HORIZON).enumerate() {
        let w = if flip && k % 2 == 1 { -w } else { w };
        if w.bits() > DOMINANCE_BIT_CAP {
            return None;
        }
        if w.is_zero() {
            zeros.push(k as u64);
        }
        window.push(w);
        if k + 1 < n || window[k].is_zero() {
            continue;
        }
        let top = window[k].abs();
        // |w_{k-j}| num^j ≤ top den^j
        let dominated = (1..n).all(|j| window[k - j].abs() * &num_pows[j] <= &top * &den_pows[j]);
        if dominated {
            return Some(zeros);
        }
    }
    None
}

/// A rational `λ > 0` with `q(λ) ≤ 0`, searched on the grid `{1} ∪ {c_1 j / 16}`.
fn dominance_ratio(c: &[BigInt]) -> Option<BigRational> {
    let n = c.len();
    let q = |lambda: &BigRational| -> BigRational {
        // Horner from the constant end: Σ_{i≥2} |c_i| λ^{n-i}, then the top two terms
        let mut acc = BigRational::zero();
        let mut pow = BigRational::one();
        for i in (2..=n).rev() {
            acc += &pow * BigRational::from(c[i - 1].abs());
            pow *= lambda;
        }
        acc -= &pow * BigRational::from(c[0].clone());
        acc + pow * lambda
    };
    std::iter::once(BigRational::one())
        .chain((1..=16).map(|j| BigRational::new(&c[0] * j, BigInt::from(16))))
        .find(|lambda| q(lambda) <= BigRational::zero())
}

pub const CERTIFIER_NAMES: [&str; 4] = ["sieve", "dominance", "sieve-pairs", "sieve-dominance"];

pub fn certifier_by_name(name: &str) -> Option<Box<dyn Certifier>> {
    match name {
        "sieve" => Some(Box::new(Sieve)),
        "sieve-pairs" => Some(Box::new(SievePairs)),
        "dominance" => Some(Box::new(Dominance)),
        "sieve-dominance" => Some(Box::new(SieveDominance)),
        _ => None,
    }
}

/// Certifiers tried in registration order until one succeeds.
#[derive(Default)]
pub struct CertifierRegistry {
    certifiers: Vec<Box<dyn Certifier>>,
}

impl CertifierRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_defaults() -> Self {
        Self::from_names(&CERTIFIER_NAMES).expect("default certifiers exist")
    }

    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let mut reg = Self::new();
        for name in names {
            let c = certifier_by_name(name.as_ref())
                .ok_or_else(|| invalid(format!("unknown certifier '{}'", name.as_ref())))?;
            reg.register(c);
        }
        Ok(reg)
    }

    pub fn register(&mut self, certifier: Box<dyn Certifier>) {
        self.certifiers.push(certifier);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.certifiers.iter().map(|c| c.name()).collect()
    }

    pub fn certify(&self, class: &ClassContext<'_>) -> Option<Certificate> {
        self.certifiers.iter().find_map(|c| c.certify(class))
    }
}
