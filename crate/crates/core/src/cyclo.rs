//! Exact arithmetic in the cyclotomic integers `Z[w]`, `w = e^{2 pi i / p}`.
//!
//! Values are kept in the basis `1, w, ..., w^{p-2}`; the relation
//! `w^{p-1} = -(1 + w + ... + w^{p-2})` is applied eagerly so equal values
//! always have equal coefficient vectors. For `p = 2` this degenerates to a
//! single integer with `w = -1`.
//!
//! Coefficients are `i64` with checked arithmetic. Character sums over a
//! field of size `q` have coefficients bounded by `q` in absolute value, so
//! products of two such sums stay far below the `i64` range at desk scale;
//! an overflow panics rather than wrapping.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycError {
    #[error("mismatched cyclotomic orders {0} and {1}")]
    Mismatch(u32, u32),
    #[error("cyclotomic coefficient overflow")]
    Overflow,
    #[error("invalid cyclotomic integer: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawCycInt")]
pub struct CycInt {
    p: u32,
    coeffs: Vec<i64>,
}

#[derive(Deserialize)]
struct RawCycInt {
    p: u32,
    coeffs: Vec<i64>,
}

impl TryFrom<RawCycInt> for CycInt {
    type Error = CycError;

    fn try_from(raw: RawCycInt) -> Result<Self, Self::Error> {
        if raw.p < 2 || raw.coeffs.len() != raw.p as usize - 1 {
            return Err(CycError::Invalid(format!(
                "p = {} needs {} coefficients, got {}",
                raw.p,
                raw.p.saturating_sub(1),
                raw.coeffs.len()
            )));
        }
        Ok(CycInt {
            p: raw.p,
            coeffs: raw.coeffs,
        })
    }
}

fn checked(v: Option<i64>) -> Result<i64, CycError> {
    v.ok_or(CycError::Overflow)
}

impl CycInt {
    pub fn zero(p: u32) -> CycInt {
        assert!(p >= 2, "cyclotomic order must be a prime >= 2");
        CycInt {
            p,
            coeffs: vec![0; p as usize - 1],
        }
    }

    pub fn from_int(p: u32, c: i64) -> CycInt {
        let mut z = CycInt::zero(p);
        z.coeffs[0] = c;
        z
    }

    pub fn one(p: u32) -> CycInt {
        CycInt::from_int(p, 1)
    }

    /// `w^{k mod p}` in canonical form.
    pub fn root_power(p: u32, k: i64) -> CycInt {
        let mut counts = vec![0i64; p as usize];
        counts[k.rem_euclid(p as i64) as usize] = 1;
        CycInt::from_counts(p, &counts)
    }

    /// `sum_k counts[k] w^k` for a length-`p` count vector, i.e. a character
    /// sum tallied by exponent residue.
    pub fn from_counts(p: u32, counts: &[i64]) -> CycInt {
        CycInt::try_from_counts(p, counts).expect("cyclotomic coefficient overflow")
    }

    fn try_from_counts(p: u32, counts: &[i64]) -> Result<CycInt, CycError> {
        assert_eq!(counts.len(), p as usize);
        let last = counts[p as usize - 1];
        let coeffs = counts[..p as usize - 1]
            .iter()
            .map(|&c| checked(c.checked_sub(last)))
            .collect::<Result<_, _>>()?;
        Ok(CycInt { p, coeffs })
    }

    /// Builds from canonical coefficients `c_0, ..., c_{p-2}`.
    pub fn from_coeffs(p: u32, coeffs: Vec<i64>) -> Result<CycInt, CycError> {
        CycInt::try_from(RawCycInt { p, coeffs })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// The integer value when `self` lies in `Z`.
    pub fn as_integer(&self) -> Option<i64> {
        self.coeffs[1..]
            .iter()
            .all(|&c| c == 0)
            .then_some(self.coeffs[0])
    }

    fn same_p(&self, other: &CycInt) -> Result<(), CycError> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(CycError::Mismatch(self.p, other.p))
        }
    }

    pub fn checked_add(&self, other: &CycInt) -> Result<CycInt, CycError> {
        self.same_p(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| checked(a.checked_add(*b)))
            .collect::<Result<_, _>>()?;
        Ok(CycInt { p: self.p, coeffs })
    }

    pub fn checked_sub(&self, other: &CycInt) -> Result<CycInt, CycError> {
        self.checked_add(&other.checked_neg()?)
    }

    pub fn checked_neg(&self) -> Result<CycInt, CycError> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| checked(c.checked_neg()))
            .collect::<Result<_, _>>()?;
        Ok(CycInt { p: self.p, coeffs })
    }

    pub fn checked_mul(&self, other: &CycInt) -> Result<CycInt, CycError> {
        self.same_p(other)?;
        let p = self.p as usize;
        let mut prod = vec![0i64; p];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                let k = (i + j) % p;
                prod[k] = checked(prod[k].checked_add(checked(a.checked_mul(b))?))?;
            }
        }
        CycInt::try_from_counts(self.p, &prod)
    }

    /// Multiplication by an integer.
    pub fn checked_scale(&self, c: i64) -> Result<CycInt, CycError> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|&a| checked(a.checked_mul(c)))
            .collect::<Result<_, _>>()?;
        Ok(CycInt { p: self.p, coeffs })
    }

    pub fn scale(&self, c: i64) -> CycInt {
        self.checked_scale(c).expect("cyclotomic coefficient overflow")
    }

    /// Complex conjugation, `w^j -> w^{p-j}`.
    pub fn conj(&self) -> CycInt {
        let p = self.p as usize;
        let mut counts = vec![0i64; p];
        for (j, &c) in self.coeffs.iter().enumerate() {
            counts[(p - j) % p] = c;
        }
        CycInt::from_counts(self.p, &counts)
    }

    /// `z * conj(z)`, whose embedding is `|z|^2`.
    pub fn norm_sq(&self) -> CycInt {
        self * &self.conj()
    }

    /// `Some(k)` when `self = c * w^k`.
    pub fn as_scaled_root(&self, c: i64) -> Option<u32> {
        if c <= 0 {
            return None;
        }
        if self.coeffs.iter().all(|&a| a == -c) {
            return Some(self.p - 1);
        }
        let mut hit = None;
        for (k, &a) in self.coeffs.iter().enumerate() {
            match a {
                0 => {}
                a if a == c && hit.is_none() => hit = Some(k as u32),
                _ => return None,
            }
        }
        hit
    }

    /// Complex embedding `w -> e^{2 pi i / p}`.
    pub fn to_complex(&self) -> Complex64 {
        let p = self.p as f64;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(j, &c)| Complex64::from_polar(c as f64, 2.0 * std::f64::consts::PI * j as f64 / p))
            .sum()
    }
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&CycInt> for &CycInt {
            type Output = CycInt;
            fn $method(self, rhs: &CycInt) -> CycInt {
                match self.$checked(rhs) {
                    Ok(v) => v,
                    Err(e) => panic!("{e}"),
                }
            }
        }
        impl $tr<CycInt> for CycInt {
            type Output = CycInt;
            fn $method(self, rhs: CycInt) -> CycInt {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&CycInt> for CycInt {
            type Output = CycInt;
            fn $method(self, rhs: &CycInt) -> CycInt {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        self.checked_neg().expect("cyclotomic coefficient overflow")
    }
}

impl Neg for CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        -&self
    }
}

/// Tally of a character sum `sum w^{e}` by exponent residue.
#[derive(Debug, Clone)]
pub struct CharTally {
    p: u32,
    counts: Vec<i64>,
}

impl CharTally {
    pub fn new(p: u32) -> CharTally {
        CharTally {
            p,
            counts: vec![0; p as usize],
        }
    }

    /// Adds `w^{e}`, `e` taken mod `p`.
    #[inline]
    pub fn push(&mut self, e: u64) {
        self.counts[(e % self.p as u64) as usize] += 1;
    }

    pub fn finish(&self) -> CycInt {
        CycInt::from_counts(self.p, &self.counts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_powers() {
        assert_eq!(CycInt::root_power(3, 2).coeffs(), &[-1, -1]);
        assert_eq!(CycInt::root_power(2, 1).coeffs(), &[-1]);
        for p in [2, 3, 5, 7] {
            assert_eq!(CycInt::root_power(p, p as i64), CycInt::one(p));
            assert_eq!(CycInt::root_power(p, -1), CycInt::root_power(p, p as i64 - 1));
        }
    }

    #[test]
    fn ring_identities() {
        let one_plus_w = CycInt::one(3) + CycInt::root_power(3, 1);
        assert_eq!(&one_plus_w * &one_plus_w.conj(), CycInt::one(3));
        assert_eq!(one_plus_w.norm_sq(), CycInt::one(3));
        let z = CycInt::from_coeffs(5, vec![3, -1, 4, 2]).unwrap();
        assert_eq!(z.conj().conj(), z);
        assert!((&z + &(-&z)).is_zero());
    }

    #[test]
    fn full_character_sum_vanishes() {
        for p in [2u32, 3, 5, 7] {
            let mut t = CharTally::new(p);
            for e in 0..p as u64 {
                t.push(e);
            }
            let z = t.finish();
            assert!(z.is_zero());
            assert!(z.norm_sq().is_zero());
        }
    }

    #[test]
    fn scaled_roots() {
        let c = 27;
        assert_eq!(CycInt::from_int(3, c).as_scaled_root(c), Some(0));
        assert_eq!(CycInt::from_coeffs(3, vec![-c, -c]).unwrap().as_scaled_root(c), Some(2));
        assert_eq!(CycInt::root_power(7, 3).scale(c).as_scaled_root(c), Some(3));
        assert_eq!(CycInt::root_power(7, 6).scale(c).as_scaled_root(c), Some(6));
        let mixed = CycInt::from_coeffs(3, vec![1, c]).unwrap();
        assert_eq!(mixed.as_scaled_root(c), None);
        assert_eq!(CycInt::from_int(2, -8).as_scaled_root(8), Some(1));
        assert_eq!(CycInt::from_int(2, 8).norm_sq(), CycInt::from_int(2, 64));
    }

    #[test]
    fn complex_embedding() {
        let one = CycInt::one(3).to_complex();
        assert!((one.re - 1.0).abs() < 1e-15 && one.im.abs() < 1e-15);
        let w = CycInt::root_power(3, 1).to_complex();
        assert!((w.re + 0.5).abs() < 1e-12);
        assert!((w.im - 0.866_025_403_784_438_6).abs() < 1e-12);
    }

    #[test]
    fn mismatch_and_overflow_are_errors() {
        let a = CycInt::one(3);
        let b = CycInt::one(5);
        assert_eq!(a.checked_add(&b), Err(CycError::Mismatch(3, 5)));
        assert_eq!(a.checked_mul(&b), Err(CycError::Mismatch(3, 5)));
        let big = CycInt::from_int(3, i64::MAX);
        assert_eq!(big.checked_add(&a), Err(CycError::Overflow));
        assert_eq!(big.checked_mul(&big), Err(CycError::Overflow));
    }

    #[test]
    #[should_panic(expected = "mismatched")]
    fn operator_panics_on_mismatch() {
        let _ = CycInt::one(3) + CycInt::one(5);
    }

    #[test]
    fn json_shape() {
        let z = CycInt::from_coeffs(3, vec![1, -2]).unwrap();
        let s = serde_json::to_string(&z).unwrap();
        assert_eq!(s, r#"{"p":3,"coeffs":[1,-2]}"#);
        assert_eq!(serde_json::from_str::<CycInt>(&s).unwrap(), z);
        assert!(serde_json::from_str::<CycInt>(r#"{"p":3,"coeffs":[1]}"#).is_err());
    }
}
