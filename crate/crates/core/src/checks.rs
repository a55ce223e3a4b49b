//! On-demand exhaustive identity checks at a chosen field.

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::charsum::{
    dickson, dickson_recurrence, e_md, kloosterman, partial_sum, partial_sum_closed_d2,
    partial_sum_closed_d4, unit_circle_sum, walsh, IndexTwoSums,
};
use crate::cyclo::CycInt;
use crate::dillon::{is_bent, DillonFunction};
use crate::error::{Error, Result};
use crate::gf::{o_of_d, Elem, FieldCtx};
use crate::search::{run_job, FamilyTemplate, SearchJob, SlotRange, DEFAULT_CAP};

pub const CHECK_IDS: [&str; 11] = [
    "lemma-s0",
    "lemma-d2",
    "cor-s1s3",
    "prop-unique-u",
    "coset-identity",
    "unit-sum",
    "dickson",
    "b1",
    "b2",
    "p1",
    "p2",
];

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckReport {
    pub id: String,
    pub field: (u32, u32),
    pub cases: u64,
    pub failures: Vec<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

struct Tally {
    cases: u64,
    failures: Vec<String>,
}

impl Tally {
    fn new() -> Tally {
        Tally {
            cases: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

fn need(ok: bool, msg: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Precondition(msg.to_owned()))
    }
}

fn half(ctx: &FieldCtx) -> Result<u32> {
    ctx.m()
        .ok_or_else(|| Error::Precondition(format!("field degree {} is odd", ctx.n())))
}

fn divisors(v: u64) -> Vec<u64> {
    (1..=v).filter(|d| v % d == 0).collect()
}

/// Runs the named check over `F_{p^n}`.
pub fn run_check(id: &str, p: u32, n: u32, threads: usize) -> Result<CheckReport> {
    let ctx = FieldCtx::new(p, n)?;
    let mut t = Tally::new();
    match id {
        "lemma-s0" => lemma_s0(&ctx, &mut t)?,
        "lemma-d2" => lemma_d2(&ctx, &mut t)?,
        "cor-s1s3" => cor_s1s3(&ctx, &mut t)?,
        "prop-unique-u" => {
            for lambda in ctx.nonzero() {
                let r = ctx.tr_zero_rep(lambda);
                t.check(r.is_ok(), || format!("lambda = alpha^{}: {}", ctx.log(lambda).unwrap_or(0), r.unwrap_err()));
            }
        }
        "coset-identity" => coset_identity(&ctx, &mut t)?,
        "unit-sum" => unit_sum_identity(&ctx, &mut t, 50)?,
        "dickson" => {
            for r in 2..=64u64 {
                let rec = dickson_recurrence(r);
                let mut odd: Vec<u64> = (0..=r).filter(|&k| rec[k as usize] == 1).collect();
                odd.reverse();
                t.check(dickson(r)? == odd, || format!("D_{r}"));
            }
        }
        "b1" | "b2" | "p1" | "p2" => family_sweep(&ctx, id, &mut t, threads)?,
        other => {
            return Err(Error::Precondition(format!(
                "unsupported check id '{other}' (expected one of {})",
                CHECK_IDS.join(", ")
            )))
        }
    }
    Ok(CheckReport {
        id: id.to_owned(),
        field: (p, n),
        cases: t.cases,
        failures: t.failures,
    })
}

/// `d S_0(abar xi^k) = 1 + 2 E_{m,d}(abar) - K_m(abar)` for `d | k`.
fn lemma_s0(ctx: &FieldCtx, t: &mut Tally) -> Result<()> {
    need(ctx.p() == 2, "lemma-s0 needs p = 2")?;
    let m = half(ctx)?;
    let xi = ctx.xi()?;
    for d in divisors(ctx.pm() + 1).into_iter().filter(|&d| d >= 2) {
        for abar in ctx.subfield_elements(m, false)? {
            let rhs = 1 + 2 * e_md(ctx, m, abar, d)?
                - kloosterman(ctx, m, abar)?.as_integer().unwrap_or(i64::MIN);
            for k in (0..=ctx.pm()).step_by(d as usize) {
                let a = ctx.mul(abar, ctx.pow(xi, k));
                let lhs = partial_sum(ctx, a, 0, d)?.scale(d as i64);
                t.check(lhs.as_integer() == Some(rhs), || {
                    format!("d = {d}, abar = {abar:?}, k = {k}: {lhs} != {rhs}")
                });
            }
        }
    }
    Ok(())
}

fn close(a: num_complex::Complex64, b: num_complex::Complex64) -> bool {
    (a - b).norm() < 1e-9
}

fn lemma_d2(ctx: &FieldCtx, t: &mut Tally) -> Result<()> {
    need(ctx.p() != 2, "lemma-d2 needs odd p")?;
    half(ctx)?;
    for a in ctx.nonzero() {
        let IndexTwoSums { s0, s1, branch } = partial_sum_closed_d2(ctx, a)?;
        let d0 = partial_sum(ctx, a, 0, 2)?.to_complex();
        let d1 = partial_sum(ctx, a, 1, 2)?.to_complex();
        t.check(close(s0, d0) && close(s1, d1), || {
            format!("a = {a:?} ({branch:?}): closed ({s0}, {s1}) vs direct ({d0}, {d1})")
        });
    }
    Ok(())
}

fn cor_s1s3(ctx: &FieldCtx, t: &mut Tally) -> Result<()> {
    need(ctx.p() != 2 && ctx.m().is_some() && ctx.pm() % 4 == 3, "cor-s1s3 needs p^m = 3 mod 4")?;
    let m = half(ctx)?;
    for abar in ctx.subfield_elements(m, false)? {
        let c = partial_sum_closed_d4(ctx, abar)?;
        let direct = partial_sum(ctx, abar, 1, 4)?.to_complex();
        t.check(c.s1_equals_s3 && close(c.s1, direct), || {
            format!("abar = {abar:?}: S1 = S3 {}, closed {} vs direct {direct}", c.s1_equals_s3, c.s1)
        });
    }
    Ok(())
}

/// Cosets tile `U`: `sum_i S_i(a) = sum_U`, and `sum_U = 1 - K_m(a^{p^m+1})`
/// for `a != 0` (at zero the sum is `p^m + 1` while `K_m(0) = 0`).
fn coset_identity(ctx: &FieldCtx, t: &mut Tally) -> Result<()> {
    let m = half(ctx)?;
    let p = ctx.p();
    for a in ctx.elements() {
        let whole = unit_circle_sum(ctx, a)?;
        let kl = CycInt::one(p).checked_sub(&kloosterman(ctx, m, ctx.pow(a, ctx.pm() + 1))?)?;
        if !a.is_zero() {
            t.check(whole == kl, || format!("a = {a:?}: {whole} != 1 - K = {kl}"));
        }
        for d in divisors(ctx.pm() + 1) {
            let mut total = CycInt::zero(p);
            for i in 0..d {
                total = total.checked_add(&partial_sum(ctx, a, i, d)?)?;
            }
            t.check(total == whole, || format!("a = {a:?}, d = {d}: {total} != {whole}"));
        }
    }
    Ok(())
}

/// A random Dillon function with a few terms, for property checks.
pub fn random_dillon(ctx: &FieldCtx, rng: &mut impl Rng) -> Result<DillonFunction> {
    let u_order = ctx.pm() + 1;
    let divs = divisors(u_order);
    let d = divs[rng.gen_range(0..divs.len())];
    let o = o_of_d(ctx.p(), ctx.n(), d)?;
    let sub = ctx.subfield_elements(o, true)?;
    let b = sub[rng.gen_range(0..sub.len())];
    let count = rng.gen_range(0..4);
    let terms: Vec<(u64, Elem)> = (0..count)
        .map(|_| {
            let i = rng.gen_range(0..u_order);
            (i, ctx.exp(rng.gen_range(0..ctx.order())))
        })
        .collect();
    DillonFunction::new(ctx, terms, b, d)
}

/// `W_f(0) = 1 + (p^m - 1) S` and `S = 1` iff (regular) bent.
fn unit_sum_identity(ctx: &FieldCtx, t: &mut Tally, samples: usize) -> Result<()> {
    half(ctx)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ ((ctx.p() as u64) << 8) ^ ctx.n() as u64);
    let p = ctx.p();
    for k in 0..samples {
        let f = random_dillon(ctx, &mut rng)?;
        let table = f.truth_table(ctx)?;
        let s = f.unit_circle_sum(ctx)?;
        let w0 = walsh(ctx, &table, Elem::ZERO)?;
        let expect = CycInt::one(p).checked_add(&s.checked_scale(ctx.pm() as i64 - 1)?)?;
        t.check(w0 == expect, || format!("sample {k}: W(0) = {w0}, 1 + (p^m-1)S = {expect}"));
        let spec = is_bent(ctx, &table)?;
        let truth = if p == 2 { spec.is_bent } else { spec.is_regular };
        t.check((s == CycInt::one(p)) == truth, || {
            format!("sample {k}: S = {s} but ground truth {truth}")
        });
    }
    Ok(())
}

fn family_templates(ctx: &FieldCtx, id: &str) -> Result<Vec<FamilyTemplate>> {
    let m = half(ctx)?;
    let u_order = ctx.pm() + 1;
    let proper: Vec<u64> = divisors(u_order).into_iter().filter(|&r| r < u_order).collect();
    let all = |degree| SlotRange::Subfield {
        degree,
        include_zero: true,
    };
    let mut out = Vec::new();
    match id {
        "b1" => {
            need(ctx.p() == 2, "b1 needs p = 2")?;
            for d in divisors(u_order).into_iter().filter(|&d| d >= 2) {
                let o = o_of_d(2, ctx.n(), d)?;
                for l in [1, d] {
                    if l.gcd(&(u_order / d)) == 1 {
                        out.push(FamilyTemplate::B1 {
                            d,
                            l,
                            a0: SlotRange::nonzero(m),
                            a1: all(m),
                            b: all(o),
                            distinct: true,
                        });
                    }
                }
            }
        }
        "b2" => {
            need(ctx.p() == 2, "b2 needs p = 2")?;
            for &r in &proper {
                for s in 1..=3 {
                    out.push(FamilyTemplate::B2 {
                        r,
                        s,
                        a: SlotRange::nonzero(ctx.n()),
                    });
                }
            }
        }
        "p1" => {
            need(ctx.p() != 2 && ctx.pm() % 4 == 3, "p1 needs p^m = 3 mod 4")?;
            for l in [1, 4] {
                if l.gcd(&(u_order / 4)) == 1 {
                    out.push(FamilyTemplate::P1 {
                        l,
                        a: SlotRange::nonzero(ctx.n()),
                        b: all(2),
                        exponent: None,
                    });
                }
            }
        }
        _ => {
            need(ctx.p() != 2, "p2 needs odd p")?;
            for &r in &proper {
                let s = (1..u_order).find(|s| s.gcd(&u_order) == 1).unwrap_or(1);
                out.push(FamilyTemplate::P2 {
                    r,
                    s,
                    a: SlotRange::nonzero(ctx.n()),
                    b: all(1),
                });
            }
        }
    }
    Ok(out)
}

/// Every applicable criterion agrees with the Walsh ground truth.
fn family_sweep(ctx: &FieldCtx, id: &str, t: &mut Tally, threads: usize) -> Result<()> {
    for family in family_templates(ctx, id)? {
        let mut job = SearchJob::new(ctx.spec().clone(), family.clone());
        job.cap = DEFAULT_CAP;
        let outcome = run_job(&job, threads)?;
        for r in &outcome.records {
            t.check(r.agreement, || format!("{family:?}: disagreement at index {}", r.index));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_id_is_an_error() {
        assert!(run_check("nope", 2, 4, 1).is_err());
    }

    #[test]
    fn small_checks_pass() {
        for (id, p, n) in [
            ("lemma-s0", 2, 4),
            ("lemma-d2", 3, 4),
            ("cor-s1s3", 3, 2),
            ("prop-unique-u", 3, 2),
            ("coset-identity", 3, 2),
            ("unit-sum", 2, 4),
            ("dickson", 2, 2),
            ("b2", 2, 4),
        ] {
            let r = run_check(id, p, n, 1).unwrap();
            assert!(r.passed() && r.cases > 0, "{id}: {:?}", r.failures);
        }
    }
}
