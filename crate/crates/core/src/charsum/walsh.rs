//! Walsh transform of p-ary functions on `F_{p^n}`.
//!
//! A truth table is indexed by element encoding and holds values in `0..p`.

use serde::{Deserialize, Serialize};

use crate::cyclo::{CharTally, CycInt};
use crate::error::{Error, Result};
use crate::gf::{Elem, FieldCtx};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum WalshMethod {
    Naive,
    #[default]
    Fast,
}

/// Full Walsh spectrum, indexed like the truth table by `lambda`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalshSpectrum {
    pub values: Vec<CycInt>,
    pub is_bent: bool,
    pub is_regular: bool,
    /// Exponents `k` with `W(lambda) = p^{n/2} w^k`, present when regular.
    pub dual: Option<Vec<u32>>,
}

impl WalshSpectrum {
    fn from_values(ctx: &FieldCtx, values: Vec<CycInt>) -> WalshSpectrum {
        let q = ctx.size() as i64;
        let is_bent = values
            .iter()
            .all(|w| w.norm_sq().as_integer() == Some(q));
        let dual = match ctx.m() {
            Some(m) if is_bent => {
                let scale = (ctx.p() as i64).pow(m);
                values
                    .iter()
                    .map(|w| w.as_scaled_root(scale))
                    .collect::<Option<Vec<u32>>>()
            }
            _ => None,
        };
        WalshSpectrum {
            values,
            is_bent,
            is_regular: dual.is_some(),
            dual,
        }
    }

    /// `sum |W(lambda)|^2 = p^{2n}`.
    pub fn parseval_holds(&self, ctx: &FieldCtx) -> bool {
        let p = ctx.p();
        let mut total = CycInt::zero(p);
        for w in &self.values {
            match total.checked_add(&w.norm_sq()) {
                Ok(t) => total = t,
                Err(_) => return false,
            }
        }
        let q = ctx.size() as i64;
        total.as_integer() == Some(q * q)
    }
}

fn check_table(ctx: &FieldCtx, f: &[u32]) -> Result<()> {
    if f.len() as u64 != ctx.size() {
        return Err(Error::Precondition(format!(
            "truth table has {} entries, field has {}",
            f.len(),
            ctx.size()
        )));
    }
    if let Some(v) = f.iter().find(|&&v| v >= ctx.p()) {
        return Err(Error::Precondition(format!(
            "truth table value {v} not below p = {}",
            ctx.p()
        )));
    }
    Ok(())
}

/// `W_f(lambda) = sum_x w^{f(x) - Tr(lambda x)}` by direct summation.
pub fn walsh(ctx: &FieldCtx, f: &[u32], lambda: Elem) -> Result<CycInt> {
    check_table(ctx, f)?;
    Ok(walsh_unchecked(ctx, f, lambda))
}

fn walsh_unchecked(ctx: &FieldCtx, f: &[u32], lambda: Elem) -> CycInt {
    let p = ctx.p() as u64;
    let mut tally = CharTally::new(ctx.p());
    for x in ctx.elements() {
        let t = ctx.trace_of_product(lambda, x) as u64;
        tally.push(f[x.value() as usize] as u64 + p - t);
    }
    tally.finish()
}

pub fn walsh_spectrum(ctx: &FieldCtx, f: &[u32], method: WalshMethod) -> Result<WalshSpectrum> {
    check_table(ctx, f)?;
    let values = match method {
        WalshMethod::Naive => ctx
            .elements()
            .map(|lambda| walsh_unchecked(ctx, f, lambda))
            .collect(),
        WalshMethod::Fast => fast_values(ctx, f),
    };
    Ok(WalshSpectrum::from_values(ctx, values))
}

/// p-ary butterfly over the digit coordinates of the encoding.
///
/// Each slot holds a count vector `c` standing for `sum_k c[k] w^k`; the
/// stage for coordinate `i` maps slot `x_i` to slot `mu_i` via the twist
/// `w^{-mu_i x_i}`, which is a cyclic shift of the count vector.
fn fast_values(ctx: &FieldCtx, f: &[u32]) -> Vec<CycInt> {
    let p = ctx.p() as usize;
    let q = ctx.size() as usize;
    let mut buf = vec![0i64; q * p];
    for (x, &v) in f.iter().enumerate() {
        buf[x * p + v as usize] = 1;
    }
    let mut scratch = vec![0i64; p * p];
    let mut stride = 1usize;
    while stride < q {
        let block = stride * p;
        for base in (0..q).step_by(block) {
            for off in 0..stride {
                let slot = |t: usize| base + off + t * stride;
                scratch.iter_mut().for_each(|c| *c = 0);
                for mu in 0..p {
                    let out = &mut scratch[mu * p..(mu + 1) * p];
                    for t in 0..p {
                        let shift = mu * t % p;
                        let src = &buf[slot(t) * p..(slot(t) + 1) * p];
                        for (k, o) in out.iter_mut().enumerate() {
                            *o += src[(k + shift) % p];
                        }
                    }
                }
                for mu in 0..p {
                    buf[slot(mu) * p..(slot(mu) + 1) * p]
                        .copy_from_slice(&scratch[mu * p..(mu + 1) * p]);
                }
            }
        }
        stride = block;
    }

    // W(lambda) = F(mu) with mu_j = Tr(lambda e_j), e_j encoded as p^j.
    let n = ctx.n();
    let basis: Vec<Elem> = (0..n)
        .map(|j| ctx.element((p as u32).pow(j)).expect("basis element"))
        .collect();
    ctx.elements()
        .map(|lambda| {
            let mut idx = 0usize;
            let mut w = 1usize;
            for &e in &basis {
                idx += ctx.trace_of_product(lambda, e) as usize * w;
                w *= p;
            }
            CycInt::from_counts(p as u32, &buf[idx * p..(idx + 1) * p])
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trace_function_has_single_peak() {
        let ctx = FieldCtx::new(3, 2).unwrap();
        let c = ctx.alpha();
        let f: Vec<u32> = ctx.elements().map(|x| ctx.trace_of_product(c, x)).collect();
        let s = walsh_spectrum(&ctx, &f, WalshMethod::Fast).unwrap();
        for (i, w) in s.values.iter().enumerate() {
            let expect = if i as u32 == c.value() { 9 } else { 0 };
            assert_eq!(w.as_integer(), Some(expect));
        }
        assert!(!s.is_bent);
        assert!(s.parseval_holds(&ctx));
    }

    #[test]
    fn gold_quadratic_is_bent() {
        // Tr(c x^3) on F_16 is bent when c is not a cube.
        let ctx = FieldCtx::new(2, 4).unwrap();
        let c = ctx.alpha();
        let f: Vec<u32> = ctx.elements().map(|x| ctx.trace_of_product(c, ctx.pow(x, 3))).collect();
        let s = walsh_spectrum(&ctx, &f, WalshMethod::Fast).unwrap();
        assert!(s.is_bent && s.is_regular);
        assert_eq!(s, walsh_spectrum(&ctx, &f, WalshMethod::Naive).unwrap());
    }

    #[test]
    fn rejects_bad_tables() {
        let ctx = FieldCtx::new(3, 2).unwrap();
        assert!(walsh(&ctx, &[0; 8], Elem::ZERO).is_err());
        assert!(walsh(&ctx, &[3; 9], Elem::ZERO).is_err());
    }
}
