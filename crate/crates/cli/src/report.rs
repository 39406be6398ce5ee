use std::collections::BTreeSet;

use clap::ValueEnum;
use orbitset::APSet;
use serde::Serialize;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Serialize)]
struct Report<'a> {
    #[serde(flatten)]
    set: &'a APSet,
    orbits: Vec<(u64, u64)>,
}

pub fn render(set: &APSet, format: Format) -> String {
    match format {
        Format::Json => {
            let report = Report {
                set,
                orbits: set.to_orbits(),
            };
            serde_json::to_string(&report).expect("report serializes")
        }
        Format::Text => {
            let mut out = set.to_string();
            let orbits: Vec<String> = set
                .to_orbits()
                .iter()
                .map(|(n, l)| format!("({n}, {l})"))
                .collect();
            out.push_str(&format!(
                "\norbits: {}",
                if orbits.is_empty() {
                    "none".into()
                } else {
                    orbits.join(" ")
                }
            ));
            for note in set.notes() {
                out.push_str(&format!("\nnote: {note}"));
            }
            out
        }
    }
}

/// Indices `k ≤ bound` where `set` and `truth` disagree.
pub fn mismatches(set: &APSet, truth: &[u64], bound: u64) -> Vec<u64> {
    let claimed: BTreeSet<u64> = set.enumerate_up_to(bound).into_iter().collect();
    let truth: BTreeSet<u64> = truth.iter().copied().collect();
    claimed.symmetric_difference(&truth).copied().collect()
}
