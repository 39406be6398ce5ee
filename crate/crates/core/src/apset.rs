//! Finite unions of arithmetic progressions in ℕ, the shape every return-time
//! set takes.
//!
//! A progression is stored as `(modulus, first)`: it is the set
//! `{first + modulus·j : j ∈ ℕ}`, and modulus zero is the singleton
//! `{first}`. Keeping the first element explicit (rather than reducing it
//! below the modulus) lets index shifts stay exact.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::crt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ArithmeticProgression {
    pub modulus: u64,
    pub first: u64,
}

impl ArithmeticProgression {
    pub fn new(modulus: u64, first: u64) -> Self {
        ArithmeticProgression { modulus, first }
    }

    pub fn singleton(k: u64) -> Self {
        Self::new(0, k)
    }

    /// All of ℕ.
    pub fn naturals() -> Self {
        Self::new(1, 0)
    }

    pub fn is_singleton(&self) -> bool {
        self.modulus == 0
    }

    pub fn contains(&self, k: u64) -> bool {
        match self.modulus {
            0 => k == self.first,
            n => k >= self.first && (k - self.first).is_multiple_of(n),
        }
    }

    /// Whether every element of `self` lies in `other`.
    pub fn is_subset_of(&self, other: &Self) -> bool {
        match (self.modulus, other.modulus) {
            (0, _) => other.contains(self.first),
            (_, 0) => false,
            (n, m) => n % m == 0 && other.contains(self.first),
        }
    }

    pub fn intersect(&self, other: &Self) -> Option<Self> {
        match (self.modulus, other.modulus) {
            (0, _) => other.contains(self.first).then_some(*self),
            (_, 0) => self.contains(other.first).then_some(*other),
            (n, m) => {
                let (x, l) = crt(self.first % n, n, other.first % m, m)?;
                let start = self.first.max(other.first);
                // smallest element >= start congruent to x mod l
                let first = if start <= x {
                    x
                } else {
                    let gap = start - x;
                    x + gap.div_ceil(l) * l
                };
                Some(Self::new(l, first))
            }
        }
    }

    pub fn shifted(&self, by: u64) -> Self {
        Self::new(self.modulus, self.first + by)
    }
}

impl fmt::Display for ArithmeticProgression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.modulus {
            0 => write!(f, "{{{}}}", self.first),
            1 => write!(f, "{{k >= {}}}", self.first),
            n => write!(f, "{{{}k + {}}}", n, self.first),
        }
    }
}

/// How much of the mathematical solution set an [`APSet`] is known to capture.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Completeness {
    /// The set is exactly the solution set.
    Complete,
    /// Exact for every `k <= K`; further isolated solutions above `K` are not
    /// excluded.
    VerifiedUpTo(u64),
}

impl Completeness {
    pub fn weaker(self, other: Self) -> Self {
        match (self, other) {
            (Completeness::Complete, c) | (c, Completeness::Complete) => c,
            (Completeness::VerifiedUpTo(a), Completeness::VerifiedUpTo(b)) => {
                Completeness::VerifiedUpTo(a.min(b))
            }
        }
    }

    pub fn is_complete(&self) -> bool {
        matches!(self, Completeness::Complete)
    }
}

impl fmt::Display for Completeness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Completeness::Complete => write!(f, "complete"),
            Completeness::VerifiedUpTo(k) => write!(f, "verified up to {k}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct APSet {
    progressions: Vec<ArithmeticProgression>,
    completeness: Completeness,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    notes: Vec<String>,
}

impl APSet {
    pub fn new(progressions: Vec<ArithmeticProgression>, completeness: Completeness) -> Self {
        let mut s = APSet {
            progressions,
            completeness,
            notes: Vec::new(),
        };
        s.normalize();
        s
    }

    pub fn empty() -> Self {
        Self::new(Vec::new(), Completeness::Complete)
    }

    pub fn naturals() -> Self {
        Self::new(
            vec![ArithmeticProgression::naturals()],
            Completeness::Complete,
        )
    }

    pub fn progression(modulus: u64, first: u64) -> Self {
        Self::new(
            vec![ArithmeticProgression::new(modulus, first)],
            Completeness::Complete,
        )
    }

    pub fn singletons(points: impl IntoIterator<Item = u64>) -> Self {
        Self::new(
            points
                .into_iter()
                .map(ArithmeticProgression::singleton)
                .collect(),
            Completeness::Complete,
        )
    }

    pub fn progressions(&self) -> &[ArithmeticProgression] {
        &self.progressions
    }

    pub fn completeness(&self) -> Completeness {
        self.completeness
    }

    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    pub fn with_completeness(mut self, c: Completeness) -> Self {
        self.completeness = c;
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        let note = note.into();
        if !self.notes.contains(&note) {
            self.notes.push(note);
        }
        self
    }

    pub fn is_empty(&self) -> bool {
        self.progressions.is_empty()
    }

    /// Finite sets consist of singletons only.
    pub fn is_finite(&self) -> bool {
        self.progressions
            .iter()
            .all(ArithmeticProgression::is_singleton)
    }

    /// Largest element of a finite set.
    pub fn max_element(&self) -> Option<u64> {
        if !self.is_finite() {
            return None;
        }
        self.progressions.iter().map(|p| p.first).max()
    }

    pub fn contains(&self, k: u64) -> bool {
        self.progressions.iter().any(|p| p.contains(k))
    }

    pub fn enumerate_up_to(&self, bound: u64) -> Vec<u64> {
        let mut out: Vec<u64> = Vec::new();
        for p in &self.progressions {
            match p.modulus {
                0 if p.first <= bound => out.push(p.first),
                0 => {}
                n => out.extend((p.first..=bound).step_by(n as usize)),
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Orbit descriptors `(N, ℓ)`: each progression becomes the orbit of
    /// `φ^ℓ(P)` under `φ^N`, singletons get `N = 0`.
    pub fn to_orbits(&self) -> Vec<(u64, u64)> {
        self.progressions
            .iter()
            .map(|p| (p.modulus, p.first))
            .collect()
    }

    pub fn from_orbits(orbits: &[(u64, u64)], completeness: Completeness) -> Self {
        Self::new(
            orbits
                .iter()
                .map(|&(n, l)| ArithmeticProgression::new(n, l))
                .collect(),
            completeness,
        )
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut progs = self.progressions.clone();
        progs.extend_from_slice(&other.progressions);
        let mut s = Self::new(progs, self.completeness.weaker(other.completeness));
        s.notes = merged_notes(&self.notes, &other.notes);
        s
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let mut progs = Vec::new();
        for a in &self.progressions {
            for b in &other.progressions {
                if let Some(c) = a.intersect(b) {
                    progs.push(c);
                }
            }
        }
        let mut s = Self::new(progs, self.completeness.weaker(other.completeness));
        s.notes = merged_notes(&self.notes, &other.notes);
        s
    }

    /// Like [`APSet::intersect`], but keeps the result complete when one exact
    /// operand is finite and lies entirely inside the other's verified range:
    /// unseen solutions of the other operand could only matter above that range.
    pub fn intersect_refined(&self, other: &Self) -> Self {
        let mut s = self.intersect(other);
        let covered =
            |exact: &APSet, partial: &APSet| match (exact.completeness, partial.completeness) {
                (Completeness::Complete, Completeness::VerifiedUpTo(k)) => {
                    exact.is_finite() && exact.max_element().is_none_or(|m| m <= k)
                }
                _ => false,
            };
        if covered(self, other) || covered(other, self) {
            s.completeness = Completeness::Complete;
        }
        s
    }

    /// Index shift `k ↦ k + by`.
    pub fn shifted(&self, by: u64) -> Self {
        let mut s = Self::new(
            self.progressions.iter().map(|p| p.shifted(by)).collect(),
            match self.completeness {
                Completeness::Complete => Completeness::Complete,
                Completeness::VerifiedUpTo(k) => Completeness::VerifiedUpTo(k.saturating_add(by)),
            },
        );
        s.notes = self.notes.clone();
        s
    }

    /// Bring the set into canonical form: merge complementary classes where the
    /// first elements line up, drop progressions contained in others, sort.
    /// Membership is never changed.
    pub fn normalize(&mut self) {
        let mut progs = std::mem::take(&mut self.progressions);
        progs.sort();
        progs.dedup();
        loop {
            let before = progs.len();
            progs = merge_once(progs);
            progs = drop_contained(progs);
            if progs.len() == before {
                break;
            }
        }
        progs.sort_by(canonical_order);
        self.progressions = progs;
    }
}

fn merged_notes(a: &[String], b: &[String]) -> Vec<String> {
    let mut out = a.to_vec();
    for n in b {
        if !out.contains(n) {
            out.push(n.clone());
        }
    }
    out
}

fn canonical_order(a: &ArithmeticProgression, b: &ArithmeticProgression) -> Ordering {
    (a.modulus, a.first).cmp(&(b.modulus, b.first))
}

fn drop_contained(progs: Vec<ArithmeticProgression>) -> Vec<ArithmeticProgression> {
    // per modulus: residue ↦ smallest first element
    let mut least: HashMap<u64, HashMap<u64, u64>> = HashMap::new();
    for p in progs.iter().filter(|p| !p.is_singleton()) {
        let slot = least
            .entry(p.modulus)
            .or_default()
            .entry(p.first % p.modulus)
            .or_insert(p.first);
        *slot = (*slot).min(p.first);
    }
    let mut moduli: Vec<u64> = least.keys().copied().collect();
    moduli.sort_unstable();
    progs
        .into_iter()
        .filter(|p| {
            !moduli.iter().any(|&m| {
                if !p.is_singleton() && p.modulus % m != 0 {
                    return false;
                }
                match least[&m].get(&(p.first % m)) {
                    // equal progressions were deduplicated, so this is a strict superset
                    Some(&f) => f < p.first || (f == p.first && m != p.modulus),
                    None => false,
                }
            })
        })
        .collect()
}

/// One pass of merges:
/// * `{first}` together with `{N·j + first + N}` becomes `{N·j + first}`;
/// * `q` progressions of modulus `N` whose first elements are
///   `f, f + N/q, …, f + (q-1)N/q` become `{(N/q)·j + f}`.
fn merge_once(progs: Vec<ArithmeticProgression>) -> Vec<ArithmeticProgression> {
    let mut singles: HashSet<u64> = progs
        .iter()
        .filter(|p| p.is_singleton())
        .map(|p| p.first)
        .collect();
    let mut groups: BTreeMap<u64, HashSet<u64>> = BTreeMap::new();
    for p in progs.iter().filter(|p| !p.is_singleton()) {
        let mut first = p.first;
        // singleton absorbed as the new first element
        while first >= p.modulus && singles.remove(&(first - p.modulus)) {
            first -= p.modulus;
        }
        groups.entry(p.modulus).or_default().insert(first);
    }
    // complementary classes, largest modulus first so merges cascade downwards
    let moduli: Vec<u64> = groups.keys().rev().copied().filter(|&n| n > 1).collect();
    for n in moduli {
        for q in prime_divisors(n) {
            let step = n / q;
            let Some(firsts) = groups.get(&n) else { break };
            let mut starts: Vec<u64> = firsts
                .iter()
                .copied()
                .filter(|&f| (1..q).all(|t| firsts.contains(&(f + t * step))))
                .collect();
            starts.sort_unstable();
            let mut merged = Vec::new();
            let firsts = groups.get_mut(&n).unwrap();
            for f in starts {
                if (0..q).all(|t| firsts.contains(&(f + t * step))) {
                    for t in 0..q {
                        firsts.remove(&(f + t * step));
                    }
                    merged.push(f);
                }
            }
            if firsts.is_empty() {
                groups.remove(&n);
            }
            if !merged.is_empty() {
                groups.entry(step).or_default().extend(merged);
            }
        }
    }
    let mut out: Vec<ArithmeticProgression> = singles
        .into_iter()
        .map(ArithmeticProgression::singleton)
        .collect();
    for (n, firsts) in groups {
        out.extend(firsts.into_iter().map(|f| ArithmeticProgression::new(n, f)));
    }
    out.sort();
    out
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl fmt::Display for APSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.progressions.is_empty() {
            write!(f, "∅")?;
        } else {
            let parts: Vec<String> = self.progressions.iter().map(|p| p.to_string()).collect();
            write!(f, "{}", parts.join(" ∪ "))?;
        }
        write!(f, " ({})", self.completeness)
    }
}
