//! Exhaustive enumeration of family parameter grids with parallel bentness
//! verification.

mod golden;
mod persist;

pub use golden::{golden_preset, run_golden, GoldenMeasure, GoldenPreset, GoldenReport, GoldenRun, GOLDEN_NAMES};
pub use persist::{load, persist, summary_path, OutputFormat};

use std::collections::HashSet;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::charsum::kloosterman;
use crate::cyclo::CycInt;
use crate::dillon::{
    evaluate_all, is_bent, Criterion, CriterionOptions, CriterionReport, DillonFunction, Family,
    FamilyParams, TraceForm, TraceTerm, Verdict,
};
use crate::error::{Error, Result};
use crate::gf::{Elem, FieldCtx, FieldSpec};

/// Default bound on the number of grid points (one Walsh spectrum each).
pub const DEFAULT_CAP: u64 = 10_000_000;

/// The finite set a free coefficient ranges over.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SlotRange {
    Fixed { value: Elem },
    Subfield { degree: u32, include_zero: bool },
    /// `abar * xi^xi_power` for `abar` in `F_{p^degree}^*`.
    XiScaled { degree: u32, xi_power: u64 },
}

impl SlotRange {
    pub fn nonzero(degree: u32) -> SlotRange {
        SlotRange::Subfield {
            degree,
            include_zero: false,
        }
    }

    /// Values ordered by discrete log, zero first.
    pub fn values(&self, ctx: &FieldCtx) -> Result<Vec<Elem>> {
        let mut vals = match self {
            SlotRange::Fixed { value } => vec![*value],
            SlotRange::Subfield {
                degree,
                include_zero,
            } => ctx.subfield_elements(*degree, *include_zero)?,
            SlotRange::XiScaled { degree, xi_power } => {
                let shift = ctx.pow(ctx.xi()?, *xi_power);
                ctx.subfield_elements(*degree, false)?
                    .into_iter()
                    .map(|a| ctx.mul(a, shift))
                    .collect()
            }
        };
        vals.sort_by_key(|&x| ctx.log(x).map_or(0, |l| l + 1));
        Ok(vals)
    }
}

/// A family with free coefficient slots.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum FamilyTemplate {
    /// `a_1 = ... = a_{d-1}`; `distinct` drops points with `a_0 = a_1`.
    B1 {
        d: u64,
        l: u64,
        a0: SlotRange,
        a1: SlotRange,
        b: SlotRange,
        distinct: bool,
    },
    B2 {
        r: u64,
        s: u64,
        a: SlotRange,
    },
    /// `exponent` replaces the monomial exponent `l(p^m - 1)` when set.
    P1 {
        l: u64,
        a: SlotRange,
        b: SlotRange,
        exponent: Option<u64>,
    },
    P2 {
        r: u64,
        s: u64,
        a: SlotRange,
        b: SlotRange,
    },
}

impl FamilyTemplate {
    pub fn family(&self) -> Family {
        match self {
            FamilyTemplate::B1 { .. } => Family::B1,
            FamilyTemplate::B2 { .. } => Family::B2,
            FamilyTemplate::P1 { .. } => Family::P1,
            FamilyTemplate::P2 { .. } => Family::P2,
        }
    }

    pub fn slots(&self) -> Vec<(&'static str, &SlotRange)> {
        match self {
            FamilyTemplate::B1 { a0, a1, b, .. } => vec![("a0", a0), ("a1", a1), ("b", b)],
            FamilyTemplate::B2 { a, .. } => vec![("a", a)],
            FamilyTemplate::P1 { a, b, .. } | FamilyTemplate::P2 { a, b, .. } => {
                vec![("a", a), ("b", b)]
            }
        }
    }

    fn keep(&self, vals: &[Elem]) -> bool {
        match self {
            FamilyTemplate::B1 { distinct: true, .. } => vals[0] != vals[1],
            _ => true,
        }
    }

    fn instantiate(&self, vals: &[Elem]) -> FamilyParams {
        match self {
            FamilyTemplate::B1 { d, l, .. } => {
                let mut a = vec![vals[1]; *d as usize];
                a[0] = vals[0];
                FamilyParams::B1 {
                    d: *d,
                    l: *l,
                    a,
                    b: vals[2],
                }
            }
            FamilyTemplate::B2 { r, s, .. } => FamilyParams::B2 {
                r: *r,
                s: *s,
                a: vals[0],
            },
            FamilyTemplate::P1 { l, .. } => FamilyParams::P1 {
                l: *l,
                a: vals[0],
                b: vals[1],
            },
            FamilyTemplate::P2 { r, s, .. } => FamilyParams::P2 {
                r: *r,
                s: *s,
                a: vals[0],
                b: vals[1],
            },
        }
    }

    /// Monomial exponent override that leaves the Dillon form, if any.
    fn foreign_exponent(&self, ctx: &FieldCtx) -> Option<u64> {
        match self {
            FamilyTemplate::P1 {
                l,
                exponent: Some(e),
                ..
            } => {
                let ord = ctx.order();
                (e % ord != l * (ctx.pm() - 1) % ord).then_some(*e)
            }
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchJob {
    pub field: FieldSpec,
    pub family: FamilyTemplate,
    pub dedupe: bool,
    pub cap: u64,
    pub tolerance: f64,
}

impl SearchJob {
    pub fn new(field: FieldSpec, family: FamilyTemplate) -> SearchJob {
        SearchJob {
            field,
            family,
            dedupe: false,
            cap: DEFAULT_CAP,
            tolerance: CriterionOptions::default().tolerance,
        }
    }
}

/// A slot value by discrete log; `None` is the zero element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlotValue {
    pub name: String,
    pub log: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionVerdict {
    pub criterion: Criterion,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SideValue {
    pub name: String,
    pub value: CycInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchRecord {
    /// Position in the full enumeration order.
    pub index: u64,
    pub family: Family,
    pub params: Vec<SlotValue>,
    pub bent: bool,
    pub regular: bool,
    pub verdicts: Vec<CriterionVerdict>,
    /// Every applicable criterion agrees with the ground truth.
    pub agreement: bool,
    pub side: Vec<SideValue>,
}

impl SearchRecord {
    pub fn param_log(&self, name: &str) -> Option<Option<u64>> {
        self.params.iter().find(|s| s.name == name).map(|s| s.log)
    }

    pub fn verdict(&self, criterion: Criterion) -> Option<Verdict> {
        self.verdicts
            .iter()
            .find(|v| v.criterion == criterion)
            .map(|v| v.verdict)
    }

    pub fn side_value(&self, name: &str) -> Option<&CycInt> {
        self.side.iter().find(|s| s.name == name).map(|s| &s.value)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct SearchSummary {
    pub total: u64,
    pub bent: u64,
    pub regular: u64,
    pub disagreements: u64,
    pub disagreement_indices: Vec<u64>,
    pub wall_time_ms: u64,
}

impl SearchSummary {
    pub fn from_records(records: &[SearchRecord], wall_time_ms: u64) -> SearchSummary {
        let disagreement_indices: Vec<u64> = records
            .iter()
            .filter(|r| !r.agreement)
            .map(|r| r.index)
            .collect();
        SearchSummary {
            total: records.len() as u64,
            bent: records.iter().filter(|r| r.bent).count() as u64,
            regular: records.iter().filter(|r| r.regular).count() as u64,
            disagreements: disagreement_indices.len() as u64,
            disagreement_indices,
            wall_time_ms,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub records: Vec<SearchRecord>,
    pub summary: SearchSummary,
}

/// One grid point: enumeration index and slot values.
#[derive(Debug, Clone)]
pub struct GridPoint {
    pub index: u64,
    pub values: Vec<Elem>,
}

/// Grid points in lexicographic order of slot discrete logs.
pub fn enumerate_grid(ctx: &FieldCtx, job: &SearchJob) -> Result<Vec<GridPoint>> {
    let ranges = job
        .family
        .slots()
        .into_iter()
        .map(|(_, r)| r.values(ctx))
        .collect::<Result<Vec<_>>>()?;
    let points = ranges
        .iter()
        .try_fold(1u64, |acc, r| acc.checked_mul(r.len() as u64))
        .unwrap_or(u64::MAX);
    if points > job.cap {
        return Err(Error::GridTooLarge {
            points,
            cap: job.cap,
        });
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; ranges.len()];
    if ranges.iter().any(|r| r.is_empty()) {
        return Ok(out);
    }
    for index in 0..points {
        let values: Vec<Elem> = idx.iter().zip(&ranges).map(|(&i, r)| r[i]).collect();
        if job.family.keep(&values) {
            out.push(GridPoint { index, values });
        }
        for k in (0..idx.len()).rev() {
            idx[k] += 1;
            if idx[k] < ranges[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum FunctionKey {
    Dillon(DillonFunction),
    Trace(TraceForm),
}

enum Candidate {
    Dillon(FamilyParams, DillonFunction),
    Foreign(TraceForm),
}

fn candidate(ctx: &FieldCtx, job: &SearchJob, values: &[Elem]) -> Result<Candidate> {
    let params = job.family.instantiate(values);
    params.validate(ctx)?;
    match (job.family.foreign_exponent(ctx), &params) {
        (Some(e), FamilyParams::P1 { a, b, .. }) => {
            let mut terms = vec![TraceTerm {
                coeff: *a,
                exponent: e,
                degree: ctx.n(),
            }];
            if !b.is_zero() {
                terms.push(TraceTerm {
                    coeff: *b,
                    exponent: ctx.order() / 4,
                    degree: 2,
                });
            }
            Ok(Candidate::Foreign(TraceForm { terms }.normalized(ctx)))
        }
        _ => {
            let f = params.to_dillon(ctx)?;
            Ok(Candidate::Dillon(params, f))
        }
    }
}

fn side_values(ctx: &FieldCtx, params: &FamilyParams) -> Result<Vec<SideValue>> {
    let Some(m) = ctx.m() else {
        return Ok(Vec::new());
    };
    let mut out = Vec::new();
    let mut push = |name: &str, a: Elem| -> Result<()> {
        out.push(SideValue {
            name: name.to_owned(),
            value: kloosterman(ctx, m, a)?,
        });
        Ok(())
    };
    match params {
        FamilyParams::B1 { a, .. } => {
            if ctx.in_subfield(a[0], m) {
                push("K(a0)", a[0])?;
            }
            if a.len() > 1 {
                let s = ctx.add(a[0], a[1]);
                if ctx.in_subfield(s, m) {
                    push("K(a0+a1)", s)?;
                }
            }
        }
        FamilyParams::B2 { a, .. } => {
            if let Ok((abar, _)) = ctx.dillon_decompose(*a) {
                push("K(abar)", abar)?;
            }
        }
        FamilyParams::P1 { a, .. } => {
            if let Ok((abar, _)) = ctx.dillon_decompose(*a) {
                push("K(abar^2)", ctx.pow(abar, 2))?;
            }
        }
        FamilyParams::P2 { a, .. } => {
            push("K(a^(p^m+1))", ctx.pow(*a, ctx.pm() + 1))?;
        }
    }
    Ok(out)
}

fn evaluate_point(
    ctx: &FieldCtx,
    job: &SearchJob,
    point: &GridPoint,
    cand: &Candidate,
) -> Result<SearchRecord> {
    let params: Vec<SlotValue> = job
        .family
        .slots()
        .iter()
        .zip(&point.values)
        .map(|((name, _), &v)| SlotValue {
            name: (*name).to_owned(),
            log: ctx.log(v),
        })
        .collect();
    let opts = CriterionOptions {
        tolerance: job.tolerance,
    };
    let (table, reports, mut side) = match cand {
        Candidate::Dillon(fp, f) => {
            let reports = evaluate_all(ctx, fp, &opts)?;
            let side = side_values(ctx, fp)?;
            (f.truth_table(ctx)?, reports, side)
        }
        Candidate::Foreign(tf) => {
            let reports = crate::dillon::applicable_criteria(job.family.family())
                .iter()
                .map(|&c| CriterionReport::inapplicable(c, "exponent outside the Dillon form"))
                .collect();
            (tf.truth_table(ctx)?, reports, Vec::new())
        }
    };
    let spectrum = is_bent(ctx, &table)?;
    let truth = if ctx.p() == 2 {
        spectrum.is_bent
    } else {
        spectrum.is_regular
    };
    let agreement = reports
        .iter()
        .all(|r| r.verdict.as_bool().is_none_or(|v| v == truth));
    if let Some(Some(value)) = reports
        .iter()
        .find(|r| r.criterion == Criterion::UnitSum)
        .map(|r| match &r.lhs {
            Some(crate::dillon::Value::Exact(v)) => Some(v.clone()),
            _ => None,
        })
    {
        side.push(SideValue {
            name: "S".into(),
            value,
        });
    }
    Ok(SearchRecord {
        index: point.index,
        family: job.family.family(),
        params,
        bent: spectrum.is_bent,
        regular: spectrum.is_regular,
        verdicts: reports
            .into_iter()
            .map(|r| CriterionVerdict {
                criterion: r.criterion,
                verdict: r.verdict,
            })
            .collect(),
        agreement,
        side,
    })
}

/// Runs a job; `threads = 0` uses the rayon default, `1` is serial.
pub fn run_job(job: &SearchJob, threads: usize) -> Result<SearchOutcome> {
    let start = Instant::now();
    let ctx = FieldCtx::from_spec(job.field.clone())?;
    let points = enumerate_grid(&ctx, job)?;
    let mut work = Vec::with_capacity(points.len());
    let mut seen = HashSet::new();
    for point in points {
        let cand = candidate(&ctx, job, &point.values)?;
        if job.dedupe {
            let key = match &cand {
                Candidate::Dillon(_, f) => FunctionKey::Dillon(f.clone()),
                Candidate::Foreign(t) => FunctionKey::Trace(t.clone()),
            };
            if !seen.insert(key) {
                continue;
            }
        }
        work.push((point, cand));
    }
    let eval = |(point, cand): &(GridPoint, Candidate)| evaluate_point(&ctx, job, point, cand);
    let records: Vec<SearchRecord> = if threads == 1 {
        work.iter().map(eval).collect::<Result<_>>()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?;
        pool.install(|| work.par_iter().map(eval).collect::<Result<Vec<_>>>())?
    };
    let summary = SearchSummary::from_records(&records, start.elapsed().as_millis() as u64);
    Ok(SearchOutcome { records, summary })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b2_job() -> SearchJob {
        SearchJob::new(
            FieldSpec::smallest_primitive(2, 4).unwrap(),
            FamilyTemplate::B2 {
                r: 1,
                s: 1,
                a: SlotRange::nonzero(4),
            },
        )
    }

    #[test]
    fn cap_is_enforced_up_front() {
        let mut job = b2_job();
        job.cap = 10;
        assert!(matches!(run_job(&job, 1), Err(Error::GridTooLarge { points: 15, cap: 10 })));
    }

    #[test]
    fn serial_and_parallel_agree() {
        let job = b2_job();
        let a = run_job(&job, 1).unwrap();
        let b = run_job(&job, 4).unwrap();
        assert_eq!(a.records, b.records);
    }

    #[test]
    fn slot_values_sorted_by_log() {
        let ctx = FieldCtx::new(3, 6).unwrap();
        let vals = SlotRange::XiScaled { degree: 3, xi_power: 1 }.values(&ctx).unwrap();
        assert_eq!(vals.len(), 26);
        let logs: Vec<u64> = vals.iter().map(|&v| ctx.log(v).unwrap()).collect();
        assert!(logs.windows(2).all(|w| w[0] < w[1]));
    }
}
