//! Kloosterman sums, binary Dickson polynomials and the sums built on them.

use crate::cyclo::{CharTally, CycInt};
use crate::error::{Error, Result};
use crate::gf::{Elem, FieldCtx};

/// Elements of a subfield `F_{p^k}` with their absolute traces `Tr_1^k`.
pub(crate) struct Subfield {
    pub degree: u32,
    pub elems: Vec<Elem>,
    traces: Vec<u32>,
    step: u64,
}

impl Subfield {
    pub fn new(ctx: &FieldCtx, degree: u32) -> Result<Subfield> {
        let elems = ctx.subfield_elements(degree, true)?;
        let traces = elems
            .iter()
            .map(|&x| ctx.subfield_trace(x, degree))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let step = ctx.order() / (elems.len() as u64 - 1);
        Ok(Subfield {
            degree,
            elems,
            traces,
            step,
        })
    }

    /// `Tr_1^k(x)`, looked up by discrete log.
    pub fn trace(&self, ctx: &FieldCtx, x: Elem) -> Result<u32> {
        match ctx.log(x) {
            None => Ok(0),
            Some(l) if l % self.step == 0 => Ok(self.traces[(l / self.step) as usize + 1]),
            Some(_) => Err(Error::Precondition(format!(
                "element {} is not in the subfield of degree {}",
                x.value(),
                self.degree
            ))),
        }
    }
}

fn require_member(ctx: &FieldCtx, x: Elem, degree: u32) -> Result<()> {
    if ctx.in_subfield(x, degree) {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "element {} is not in the subfield of degree {degree}",
            x.value()
        )))
    }
}

/// `K_k(a) = sum_{x in F_{p^k}} w^{Tr_1^k(a x + x^{-1})}`, where the `x = 0`
/// term contributes `w^0`. By convention `K_k(0) = 0`.
pub fn kloosterman(ctx: &FieldCtx, degree: u32, a: Elem) -> Result<CycInt> {
    let sub = Subfield::new(ctx, degree)?;
    kloosterman_in(ctx, &sub, a)
}

pub(crate) fn kloosterman_in(ctx: &FieldCtx, sub: &Subfield, a: Elem) -> Result<CycInt> {
    require_member(ctx, a, sub.degree)?;
    let p = ctx.p();
    if a.is_zero() {
        return Ok(CycInt::zero(p));
    }
    let mut tally = CharTally::new(p);
    for &x in &sub.elems {
        let inv = if x.is_zero() { Elem::ZERO } else { ctx.inv(x)? };
        let y = ctx.add(ctx.mul(a, x), inv);
        tally.push(sub.trace(ctx, y)? as u64);
    }
    Ok(tally.finish())
}

/// Kloosterman sum over the whole field.
pub fn kloosterman_full(ctx: &FieldCtx, a: Elem) -> Result<CycInt> {
    kloosterman(ctx, ctx.n(), a)
}

/// Parity of the coefficient of `x^{r-2i}` in `D_r`, when it is an exact
/// `r/(r-i) * C(r-i, i)` that fits in `u128`.
pub fn dickson_coefficient(r: u64, i: u64) -> Option<u128> {
    if 2 * i > r || r == 0 {
        return None;
    }
    let top = r - i;
    let mut c: u128 = 1;
    for j in 0..i {
        c = c.checked_mul((top - j) as u128)? / (j as u128 + 1);
    }
    let scaled = c.checked_mul(r as u128)?;
    if scaled % top as u128 != 0 {
        return None;
    }
    Some(scaled / top as u128)
}

/// Binary Dickson polynomial `D_r(x) = sum_i r/(r-i) C(r-i, i) x^{r-2i}`
/// over `F_2`, as the list of exponents with odd coefficient (descending).
///
/// Coefficients that overflow `u128` are reduced with
/// `r/(r-i) C(r-i, i) = C(r-i, i) + C(r-i-1, i-1)` and Lucas' theorem.
pub fn dickson(r: u64) -> Result<Vec<u64>> {
    if r < 2 {
        return Err(Error::Precondition(format!(
            "Dickson polynomials are defined here for r >= 2, got {r}"
        )));
    }
    let odd_binom = |a: u64, b: u64| b & !a == 0;
    Ok((0..=r / 2)
        .filter(|&i| match dickson_coefficient(r, i) {
            Some(c) => c % 2 == 1,
            None => {
                let lead = odd_binom(r - i, i);
                let tail = i >= 1 && odd_binom(r - i - 1, i - 1);
                lead ^ tail
            }
        })
        .map(|i| r - 2 * i)
        .collect())
}

/// `D_r` from `D_0 = 0`, `D_1 = x`, `D_r = x D_{r-1} + D_{r-2}` over `F_2`.
/// Returns the coefficient vector indexed by degree.
pub fn dickson_recurrence(r: u64) -> Vec<u8> {
    let len = r as usize + 1;
    let mut prev = vec![0u8; len];
    let mut cur = vec![0u8; len];
    if r == 0 {
        return prev;
    }
    cur[1] = 1;
    for _ in 2..=r {
        let mut next = prev.clone();
        for k in 0..len - 1 {
            next[k + 1] ^= cur[k];
        }
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

fn eval_sparse(ctx: &FieldCtx, exps: &[u64], x: Elem) -> Elem {
    exps.iter()
        .fold(Elem::ZERO, |acc, &e| ctx.add(acc, ctx.pow(x, e)))
}

fn binary_sign_sum(ctx: &FieldCtx, sub: &Subfield, mut g: impl FnMut(Elem) -> Elem) -> Result<i64> {
    let mut s = 0i64;
    for &x in &sub.elems {
        s += if sub.trace(ctx, g(x))? == 0 { 1 } else { -1 };
    }
    Ok(s)
}

fn require_binary(ctx: &FieldCtx) -> Result<()> {
    if ctx.p() != 2 {
        return Err(Error::Precondition(
            "this sum is defined over binary fields only".into(),
        ));
    }
    Ok(())
}

/// `E_{k,d}(a) = sum_{x in F_{2^k}} (-1)^{Tr_1^k(a D_d(x))}`.
pub fn e_md(ctx: &FieldCtx, degree: u32, a: Elem, d: u64) -> Result<i64> {
    require_binary(ctx)?;
    let sub = Subfield::new(ctx, degree)?;
    e_md_in(ctx, &sub, a, d)
}

pub(crate) fn e_md_in(ctx: &FieldCtx, sub: &Subfield, a: Elem, d: u64) -> Result<i64> {
    require_member(ctx, a, sub.degree)?;
    let exps = dickson(d)?;
    binary_sign_sum(ctx, sub, |x| ctx.mul(a, eval_sparse(ctx, &exps, x)))
}

/// `C_k(a) = sum_{x in F_{2^k}} (-1)^{Tr_1^k(a x^3 + a x)}`.
pub fn cubic_sum(ctx: &FieldCtx, degree: u32, a: Elem) -> Result<i64> {
    require_binary(ctx)?;
    let sub = Subfield::new(ctx, degree)?;
    require_member(ctx, a, degree)?;
    binary_sign_sum(ctx, &sub, |x| ctx.mul(a, ctx.add(ctx.pow(x, 3), x)))
}
