//! Preset jobs reproducing known reference counts.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{run_job, FamilyTemplate, SearchJob, SearchOutcome, SlotRange};
use crate::error::{Error, Result};
use crate::gf::{Elem, FieldSpec};

pub const GOLDEN_NAMES: [&str; 4] = ["example1", "example2", "example3", "example4"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GoldenMeasure {
    BentRecords,
    RegularRecords,
    /// Unordered `{a0, a1}` pairs with a bent function, off the diagonal.
    UnorderedBentPairs,
}

#[derive(Debug, Clone)]
pub struct GoldenPreset {
    pub name: &'static str,
    pub description: &'static str,
    pub measure: GoldenMeasure,
    pub expected: u64,
    /// Labelled job variants; the preset passes if any variant hits the count.
    pub jobs: Vec<(String, SearchJob)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GoldenRun {
    pub label: String,
    pub observed: u64,
    /// For pair counts, the bent set is symmetric under `a0 <-> a1`.
    pub symmetric: Option<bool>,
    pub outcome: SearchOutcome,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GoldenReport {
    pub name: String,
    pub measure: GoldenMeasure,
    pub expected: u64,
    pub runs: Vec<GoldenRun>,
    /// Labels of the variants whose count matches.
    pub matched: Vec<String>,
    pub disagreements: u64,
    pub pass: bool,
}

fn spec(p: u32, n: u32) -> FieldSpec {
    FieldSpec::smallest_primitive(p, n).expect("preset field")
}

pub fn golden_preset(name: &str) -> Result<GoldenPreset> {
    let nonzero = SlotRange::nonzero;
    let preset = match name {
        "example1" => GoldenPreset {
            name: "example1",
            description: "binary, n = 6, d = 9, l = 1, a0 and a1 over F_8^*",
            measure: GoldenMeasure::UnorderedBentPairs,
            expected: 9,
            jobs: vec![(
                "b1".into(),
                SearchJob::new(
                    spec(2, 6),
                    FamilyTemplate::B1 {
                        d: 9,
                        l: 1,
                        a0: nonzero(3),
                        a1: nonzero(3),
                        b: SlotRange::Fixed { value: Elem::ZERO },
                        distinct: false,
                    },
                ),
            )],
        },
        "example2" => GoldenPreset {
            name: "example2",
            description: "binary, n = 4, d = 5, l = 5, a0 != a1 over F_4^*, b over F_16^*",
            measure: GoldenMeasure::BentRecords,
            expected: 60,
            jobs: vec![(
                "b1".into(),
                SearchJob::new(
                    spec(2, 4),
                    FamilyTemplate::B1 {
                        d: 5,
                        l: 5,
                        a0: nonzero(2),
                        a1: nonzero(2),
                        b: nonzero(4),
                        distinct: true,
                    },
                ),
            )],
        },
        "example3" => GoldenPreset {
            name: "example3",
            description: "binary, n = 6, r = 3, s = 1, a over F_64^*",
            measure: GoldenMeasure::BentRecords,
            expected: 36,
            jobs: vec![(
                "b2".into(),
                SearchJob::new(
                    spec(2, 6),
                    FamilyTemplate::B2 {
                        r: 3,
                        s: 1,
                        a: nonzero(6),
                    },
                ),
            )],
        },
        "example4" => {
            let job = |exponent| {
                SearchJob::new(
                    spec(3, 6),
                    FamilyTemplate::P1 {
                        l: 4,
                        a: SlotRange::XiScaled {
                            degree: 3,
                            xi_power: 1,
                        },
                        b: nonzero(2),
                        exponent,
                    },
                )
            };
            GoldenPreset {
                name: "example4",
                description: "ternary, n = 6, l = 4, a = abar xi, b over F_9^*; \
                              monomial exponent 104 and 144",
                measure: GoldenMeasure::RegularRecords,
                expected: 48,
                jobs: vec![
                    ("exponent=104".into(), job(None)),
                    ("exponent=144".into(), job(Some(144))),
                ],
            }
        }
        other => {
            return Err(Error::Precondition(format!(
                "unknown golden preset '{other}' (expected one of {})",
                GOLDEN_NAMES.join(", ")
            )))
        }
    };
    Ok(preset)
}

fn measure(outcome: &SearchOutcome, how: GoldenMeasure) -> (u64, Option<bool>) {
    match how {
        GoldenMeasure::BentRecords => (outcome.summary.bent, None),
        GoldenMeasure::RegularRecords => (outcome.summary.regular, None),
        GoldenMeasure::UnorderedBentPairs => {
            let ordered: HashSet<(Option<u64>, Option<u64>)> = outcome
                .records
                .iter()
                .filter(|r| r.bent)
                .filter_map(|r| Some((r.param_log("a0")?, r.param_log("a1")?)))
                .filter(|(x, y)| x != y)
                .collect();
            let symmetric = ordered.iter().all(|&(x, y)| ordered.contains(&(y, x)));
            let unordered: HashSet<_> = ordered
                .iter()
                .map(|&(x, y)| if x <= y { (x, y) } else { (y, x) })
                .collect();
            (unordered.len() as u64, Some(symmetric))
        }
    }
}

pub fn run_golden(preset: &GoldenPreset, threads: usize) -> Result<GoldenReport> {
    let mut runs = Vec::new();
    for (label, job) in &preset.jobs {
        let outcome = run_job(job, threads)?;
        let (observed, symmetric) = measure(&outcome, preset.measure);
        runs.push(GoldenRun {
            label: label.clone(),
            observed,
            symmetric,
            outcome,
        });
    }
    let matched: Vec<String> = runs
        .iter()
        .filter(|r| r.observed == preset.expected && r.symmetric != Some(false))
        .map(|r| r.label.clone())
        .collect();
    let disagreements = runs.iter().map(|r| r.outcome.summary.disagreements).sum();
    Ok(GoldenReport {
        name: preset.name.to_owned(),
        measure: preset.measure,
        expected: preset.expected,
        pass: !matched.is_empty() && disagreements == 0,
        matched,
        disagreements,
        runs,
    })
}
