//! Sums over the unit circle `U` and its cosets `V_k`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::kloosterman::kloosterman;
use crate::cyclo::{CharTally, CycInt};
use crate::error::{Error, Result};
use crate::gf::{o_of_d, Elem, FieldCtx};

fn half(ctx: &FieldCtx) -> Result<u32> {
    ctx.m()
        .ok_or_else(|| Error::Precondition(format!("field degree {} is odd", ctx.n())))
}

/// `sum_{x in U} w^{Tr(a x)}`; equals `1 - K_m(a^{p^m+1})`.
pub fn unit_circle_sum(ctx: &FieldCtx, a: Elem) -> Result<CycInt> {
    let u = ctx.unit_circle()?;
    let mut tally = CharTally::new(ctx.p());
    for &x in &u.members {
        tally.push(ctx.trace_of_product(a, x) as u64);
    }
    Ok(tally.finish())
}

/// `S_i(a) = sum_{x in V_0} w^{Tr(a xi^i x)}` for the index-`d` subgroup `V_0`.
pub fn partial_sum(ctx: &FieldCtx, a: Elem, i: u64, d: u64) -> Result<CycInt> {
    let v0 = ctx.v_partition(d)?.swap_remove(0);
    let shifted = ctx.mul(a, ctx.pow(ctx.xi()?, i));
    let mut tally = CharTally::new(ctx.p());
    for &x in &v0 {
        tally.push(ctx.trace_of_product(shifted, x) as u64);
    }
    Ok(tally.finish())
}

/// The constant `I` in the closed forms of the index-2 partial sums:
/// `i^{3m} p^{m/2} / 2` when `p = 3 mod 4`, else `(-1)^m p^{m/2} / 2`.
pub fn half_gauss_constant(p: u32, m: u32) -> Complex64 {
    let mag = (p as f64).powf(m as f64 / 2.0) / 2.0;
    let unit = if p % 4 == 3 {
        Complex64::i().powu(3 * m)
    } else if m % 2 == 0 {
        Complex64::new(1.0, 0.0)
    } else {
        Complex64::new(-1.0, 0.0)
    };
    unit * mag
}

/// `Q(b) = 2 Tr_1^m(b^{(p^m+1)/2})` for a square `b`, `None` otherwise.
pub fn square_class_trace(ctx: &FieldCtx, b: Elem) -> Result<Option<u32>> {
    let m = half(ctx)?;
    if !ctx.is_square(b) {
        return Ok(None);
    }
    let y = ctx.pow(b, (ctx.pm() + 1) / 2);
    Ok(Some(2 * ctx.subfield_trace(y, m)? % ctx.p()))
}

/// `R(a) = (1 - K_m(a^{p^m+1})) / 2`.
pub fn half_unit_sum(ctx: &FieldCtx, a: Elem) -> Result<Complex64> {
    let m = half(ctx)?;
    let k = kloosterman(ctx, m, ctx.pow(a, ctx.pm() + 1))?;
    Ok((Complex64::new(1.0, 0.0) - k.to_complex()) / 2.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SquareBranch {
    /// `a` is a square with `Q(a) != 0`.
    SquareNonzeroQ,
    Other,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IndexTwoSums {
    pub s0: Complex64,
    pub s1: Complex64,
    pub branch: SquareBranch,
}

fn twist(ctx: &FieldCtx, q: u32) -> Complex64 {
    let p = ctx.p();
    let w = CycInt::root_power(p, q as i64).to_complex();
    let wi = CycInt::root_power(p, -(q as i64)).to_complex();
    half_gauss_constant(p, ctx.m().unwrap_or(0)) * (w - wi)
}

/// Closed forms of `S_0(a)` and `S_1(a)` for `d = 2`, odd `p`.
pub fn partial_sum_closed_d2(ctx: &FieldCtx, a: Elem) -> Result<IndexTwoSums> {
    if ctx.p() == 2 {
        return Err(Error::Precondition("index-2 closed form needs odd p".into()));
    }
    let r = half_unit_sum(ctx, a)?;
    Ok(match square_class_trace(ctx, a)? {
        Some(q) if q != 0 => {
            let t = twist(ctx, q);
            IndexTwoSums {
                s0: r + t,
                s1: r - t,
                branch: SquareBranch::SquareNonzeroQ,
            }
        }
        _ => IndexTwoSums {
            s0: r,
            s1: r,
            branch: SquareBranch::Other,
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IndexFourSums {
    /// Closed form shared by `S_1` and `S_3`.
    pub s1: Complex64,
    /// Exact comparison `S_1 == S_3` of the direct sums.
    pub s1_equals_s3: bool,
    pub branch: SquareBranch,
}

/// Closed form of `S_1(a) = S_3(a)` for `d = 4`, `p^m = 3 mod 4` and
/// `a` in `F_{p^m}^*`.
pub fn partial_sum_closed_d4(ctx: &FieldCtx, a: Elem) -> Result<IndexFourSums> {
    half(ctx)?;
    if ctx.p() == 2 || ctx.pm() % 4 != 3 {
        return Err(Error::Precondition(
            "index-4 closed form needs p^m = 3 mod 4".into(),
        ));
    }
    if !ctx.in_half_field_units(a) {
        return Err(Error::Precondition(
            "index-4 closed form needs a in F_{p^m}^*".into(),
        ));
    }
    let r = half_unit_sum(ctx, a)?;
    let (s1, branch) = match square_class_trace(ctx, a)? {
        Some(q) if q != 0 => ((r - twist(ctx, q)) / 2.0, SquareBranch::SquareNonzeroQ),
        _ => (r / 2.0, SquareBranch::Other),
    };
    let s1_equals_s3 = partial_sum(ctx, a, 1, 4)? == partial_sum(ctx, a, 3, 4)?;
    Ok(IndexFourSums {
        s1,
        s1_equals_s3,
        branch,
    })
}

/// `sum_{x in U} w^{sum_i Tr(a_i x^{i}) + Tr_1^{o(d)}(b x^{(p^m+1)/d})}`,
/// with `x^i` taken on `U` so that multipliers are residues mod `p^m + 1`.
pub fn dillon_sum(ctx: &FieldCtx, terms: &[(u64, Elem)], b: Elem, d: u64) -> Result<CycInt> {
    half(ctx)?;
    let u_order = ctx.pm() + 1;
    if d == 0 || u_order % d != 0 {
        return Err(Error::Precondition(format!("{d} does not divide {u_order}")));
    }
    let o = o_of_d(ctx.p(), ctx.n(), d)?;
    let xi = ctx.xi()?;
    let mut tally = CharTally::new(ctx.p());
    for j in 0..u_order {
        let mut e = 0u64;
        for &(mult, a) in terms {
            let x = ctx.pow(xi, j * mult % u_order);
            e += ctx.trace_of_product(a, x) as u64;
        }
        if !b.is_zero() {
            let y = ctx.mul(b, ctx.pow(xi, j * (u_order / d) % u_order));
            e += ctx.subfield_trace(y, o)? as u64;
        }
        tally.push(e);
    }
    Ok(tally.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_constant_branches() {
        let c = half_gauss_constant(3, 1);
        assert!((c - Complex64::new(0.0, -(3f64).sqrt() / 2.0)).norm() < 1e-12);
        let c = half_gauss_constant(5, 1);
        assert!((c - Complex64::new(-(5f64).sqrt() / 2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn index_one_partial_sum_is_unit_circle_sum() {
        let ctx = FieldCtx::new(3, 4).unwrap();
        let a = ctx.exp(7);
        assert_eq!(partial_sum(&ctx, a, 0, 1).unwrap(), unit_circle_sum(&ctx, a).unwrap());
    }

    #[test]
    fn dillon_sum_trivial_function() {
        let ctx = FieldCtx::new(2, 4).unwrap();
        let s = dillon_sum(&ctx, &[], Elem::ZERO, 1).unwrap();
        assert_eq!(s.as_integer(), Some(5));
    }
}
