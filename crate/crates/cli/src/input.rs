//! Problem files.
//!
//! Integers are JSON numbers or, past 64 bits, decimal strings. Rationals are
//! integers or `"num/den"` strings.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use orbitset::lattice::DEFAULT_TORSION_CAP;
use orbitset::toric::{BinomialEquation, MonomialMap, RationalTorusPoint, ToricProblem};
use orbitset::{
    brute_force_oracle, APSet, Coset, DynamicalProblem, Endomorphism, FgAbGroup, GroupElement,
    Pipeline, SmlOptions, Subgroup,
};
use serde::de::{self, IgnoredAny, Visitor};
use serde::{Deserialize, Deserializer};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Int(pub BigInt);

impl<'de> Deserialize<'de> for Int {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Int;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a decimal string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Int, E> {
                Ok(Int(v.into()))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Int, E> {
                Ok(Int(v.into()))
            }
            fn visit_f64<E: de::Error>(self, _: f64) -> Result<Int, E> {
                Err(E::custom(
                    "not an integer (write integers beyond 64 bits as strings)",
                ))
            }
            fn visit_str<E: de::Error>(self, s: &str) -> Result<Int, E> {
                BigInt::from_str(s.trim())
                    .map(Int)
                    .map_err(|_| E::custom(format!("{s:?} is not an integer")))
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rat(pub BigRational);

impl FromStr for Rat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let bad = || format!("{s:?} is not a rational of the form num/den");
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let n = BigInt::from_str(n).map_err(|_| bad())?;
        let d = BigInt::from_str(d).map_err(|_| bad())?;
        if d == BigInt::from(0) {
            return Err(format!("{s:?} has a zero denominator"));
        }
        Ok(Rat(BigRational::new(n, d)))
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Rat;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a \"num/den\" string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rat, E> {
                Ok(Rat(BigRational::from_integer(v.into())))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rat, E> {
                Ok(Rat(BigRational::from_integer(v.into())))
            }
            fn visit_str<E: de::Error>(self, s: &str) -> Result<Rat, E> {
                s.parse().map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}

fn ints(v: Vec<Int>) -> Vec<BigInt> {
    v.into_iter().map(|i| i.0).collect()
}

fn matrix(m: Vec<Vec<Int>>) -> Vec<Vec<BigInt>> {
    m.into_iter().map(ints).collect()
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileOptions {
    pub search_bound: Option<u64>,
    pub sieve_primes: Option<Vec<u64>>,
    pub torsion_cap: Option<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ElementJson {
    #[serde(default)]
    torsion: Vec<u64>,
    #[serde(default)]
    free: Vec<Int>,
}

impl From<ElementJson> for GroupElement {
    fn from(e: ElementJson) -> Self {
        GroupElement {
            torsion: e.torsion,
            free: ints(e.free),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PhiJson {
    free_matrix: Vec<Vec<Int>>,
    #[serde(default)]
    torsion_matrix: Vec<Vec<Int>>,
    #[serde(default)]
    mixing: Vec<Vec<Int>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CosetJson {
    rep: ElementJson,
    #[serde(default)]
    generators: Vec<ElementJson>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupJson {
    #[serde(rename = "kind")]
    _kind: IgnoredAny,
    #[serde(default)]
    invariant_factors: Vec<u64>,
    rank: usize,
    phi: PhiJson,
    point: ElementJson,
    cosets: Vec<CosetJson>,
    #[serde(default)]
    options: FileOptions,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BinomialJson {
    exponents: Vec<Int>,
    constant: Rat,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ToricJson {
    #[serde(rename = "kind")]
    _kind: IgnoredAny,
    map: Vec<Vec<Int>>,
    point: Vec<Rat>,
    binomials: Vec<BinomialJson>,
    #[serde(default)]
    options: FileOptions,
}

/// Deserializes `T` from `text`, reporting the offending field path together
/// with the line and column.
fn from_text<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T, CliError> {
    let mut de = serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if path == "." {
            CliError::Malformed(inner.to_string())
        } else {
            CliError::Malformed(format!("{path}: {inner}"))
        }
    })
}

/// A parsed and validated problem file.
#[derive(Debug, Clone)]
pub struct ProblemFile {
    pub problem: Problem,
    pub options: FileOptions,
}

#[derive(Debug, Clone)]
pub enum Problem {
    Group(DynamicalProblem),
    Toric(ToricProblem),
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let malformed = CliError::from;
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| CliError::Malformed(e.to_string()))?;
        let kind = value
            .get("kind")
            .and_then(serde_json::Value::as_str)
            .unwrap_or_default();
        Ok(match kind {
            "group" => {
                let g: GroupJson = from_text(text)?;
                let group = FgAbGroup::new(g.invariant_factors, g.rank).map_err(malformed)?;
                let phi = Endomorphism {
                    free_matrix: matrix(g.phi.free_matrix),
                    torsion_matrix: matrix(g.phi.torsion_matrix),
                    mixing: matrix(g.phi.mixing),
                };
                let cosets = g
                    .cosets
                    .into_iter()
                    .map(|c| Coset {
                        rep: c.rep.into(),
                        subgroup: Subgroup {
                            generators: c.generators.into_iter().map(Into::into).collect(),
                        },
                    })
                    .collect();
                let problem =
                    DynamicalProblem::new(group, phi, g.point.into(), cosets).map_err(malformed)?;
                ProblemFile {
                    problem: Problem::Group(problem),
                    options: g.options,
                }
            }
            "toric" => {
                let t: ToricJson = from_text(text)?;
                let point = RationalTorusPoint::new(t.point.into_iter().map(|r| r.0).collect())
                    .map_err(malformed)?;
                let map = MonomialMap::new(matrix(t.map)).map_err(malformed)?;
                let equations = t
                    .binomials
                    .into_iter()
                    .enumerate()
                    .map(|(i, b)| {
                        BinomialEquation::new(ints(b.exponents), b.constant.0)
                            .map_err(|e| CliError::Malformed(format!("binomials[{i}]: {e}")))
                    })
                    .collect::<Result<_, _>>()?;
                let problem = ToricProblem::new(point, map, equations).map_err(malformed)?;
                ProblemFile {
                    problem: Problem::Toric(problem),
                    options: t.options,
                }
            }
            _ => {
                let found = value
                    .get("kind")
                    .map_or("nothing".to_string(), ToString::to_string);
                return Err(CliError::Malformed(format!(
                    "kind: expected \"group\" or \"toric\", found {found}"
                )));
            }
        })
    }
}

/// Solver settings after merging file options with command-line overrides.
#[derive(Debug, Clone)]
pub struct Settings {
    pub sml: SmlOptions,
    pub torsion_cap: u64,
}

impl Settings {
    pub fn pipeline(&self) -> Result<Pipeline, CliError> {
        Pipeline::new(self.sml.clone(), self.torsion_cap).map_err(CliError::from)
    }
}

#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub search_bound: Option<u64>,
    pub sieve_primes: Option<Vec<u64>>,
    pub torsion_cap: Option<u64>,
    pub certifiers: Option<Vec<String>>,
}

impl Overrides {
    pub fn apply(&self, file: &FileOptions) -> Settings {
        let mut sml = SmlOptions::default();
        if let Some(k) = self.search_bound.or(file.search_bound) {
            sml.search_bound = k;
        }
        if let Some(p) = self.sieve_primes.as_ref().or(file.sieve_primes.as_ref()) {
            sml.sieve_moduli = p.clone();
        }
        if let Some(c) = &self.certifiers {
            sml.certifiers = c.clone();
        }
        Settings {
            sml,
            torsion_cap: self
                .torsion_cap
                .or(file.torsion_cap)
                .unwrap_or(DEFAULT_TORSION_CAP),
        }
    }
}

impl Problem {
    pub fn solve(&self, pipeline: &Pipeline) -> Result<APSet, CliError> {
        match self {
            Problem::Group(p) => Ok(pipeline.solve(p)?),
            Problem::Toric(t) => match t.build()? {
                orbitset::toric::ToricBuild::Problem(p) => Ok(pipeline.solve(&p)?),
                orbitset::toric::ToricBuild::Empty(c) => Ok(APSet::empty().with_note(c.reason)),
            },
        }
    }

    /// Return times up to `bound` found by stepping the orbit directly.
    pub fn oracle(&self, bound: u64) -> Vec<u64> {
        match self {
            Problem::Group(p) => brute_force_oracle(p, bound),
            Problem::Toric(t) => t.direct_hits(bound),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_accept_both_spellings() {
        let v: Vec<Int> =
            serde_json::from_str(r#"[-3, "123456789012345678901234567890"]"#).unwrap();
        assert_eq!(v[0].0, BigInt::from(-3));
        assert_eq!(v[1].0.to_string(), "123456789012345678901234567890");
        assert!(serde_json::from_str::<Int>("1.5").is_err());

        let r: Vec<Rat> = serde_json::from_str(r#"[2, "-6/4", " 7 "]"#).unwrap();
        assert_eq!(r[1].0, BigRational::new((-3).into(), 2.into()));
        assert_eq!(r[2].0, BigRational::from_integer(7.into()));
        assert!("1/0".parse::<Rat>().is_err());
        assert!("one".parse::<Rat>().is_err());
    }

    #[test]
    fn flags_override_file_options() {
        let file = FileOptions {
            search_bound: Some(50),
            sieve_primes: Some(vec![2]),
            torsion_cap: Some(9),
        };
        let s = Overrides {
            search_bound: Some(70),
            ..Overrides::default()
        }
        .apply(&file);
        assert_eq!(
            (
                s.sml.search_bound,
                s.sml.sieve_moduli.clone(),
                s.torsion_cap
            ),
            (70, vec![2], 9)
        );
        let s = Overrides::default().apply(&FileOptions::default());
        assert_eq!(s.sml.search_bound, SmlOptions::default().search_bound);
        assert_eq!(s.torsion_cap, DEFAULT_TORSION_CAP);
    }
}
