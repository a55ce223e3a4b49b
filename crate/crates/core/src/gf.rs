//! Finite fields `F_{p^n}` in polynomial basis.
//!
//! Elements are packed as the integer `c_0 + c_1 p + ... + c_{n-1} p^{n-1}`
//! of their coefficient vector, so the prime subfield `F_p` is exactly the
//! set of encodings `0..p`. A discrete-log table over the primitive element
//! `alpha` (the residue class of `x`) is built once per field and makes
//! multiplication, inversion and powering table lookups.
//!
//! For even `n = 2m` the context also exposes the unit circle
//! `U = { x : x^{p^m + 1} = 1 }` generated by `xi = alpha^{p^m - 1}`, its
//! index-`d` cosets, and the transversal `{alpha^0, ..., alpha^{p^m}}` of
//! `F_{p^m}^*` in `F_{p^n}^*`.

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported field size `p^n`.
pub const MAX_FIELD_SIZE: u64 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("p not prime: {0}")]
    NotPrime(u32),
    #[error("degree {n} out of supported range for p = {p} (need n >= 1 and p^n <= 2^20)")]
    DegreeOutOfRange { p: u32, n: u32 },
    #[error("modulus {0:?} is not a primitive polynomial over F_p")]
    NotPrimitive(Vec<u32>),
    #[error("malformed modulus: {0}")]
    BadModulus(String),
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("field degree {0} is odd; the unit circle needs n = 2m")]
    OddDegree(u32),
    #[error("{d} does not divide {modulus}")]
    BadDivisor { d: u64, modulus: u64 },
    #[error("trace degrees invalid: need {to} | {from} | {n}")]
    TraceDegrees { from: u32, to: u32, n: u32 },
    #[error("element is not in the subfield of degree {0}")]
    NotInSubfield(u32),
    #[error("no o with o | {n} and {d} | p^o - 1")]
    NoTraceDegree { d: u64, n: u32 },
    #[error("the zero element has no decomposition")]
    ZeroElement,
    #[error("element is not of the form abar * xi^k with abar in F_(p^m)^*")]
    NotDecomposable,
    #[error("invalid element: {0}")]
    BadElement(String),
    #[error("invariant breach: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, GfError>;

/// A field element, packed base-`p` coefficient vector in polynomial basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Elem(u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    /// The raw packed encoding.
    pub fn value(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// `p`, `n` and the defining polynomial, coefficients constant term first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub n: u32,
    pub modulus: Vec<u32>,
}

impl FieldSpec {
    /// The primitive polynomial of degree `n` with the smallest value
    /// `c_0 + c_1 p + ... + c_{n-1} p^{n-1}` among its non-leading coefficients.
    pub fn smallest_primitive(p: u32, n: u32) -> Result<FieldSpec> {
        FieldSpec::nth_primitive(p, n, 0)
    }

    /// The `index`-th primitive polynomial in the same order as
    /// [`FieldSpec::smallest_primitive`]; used to re-run computations under a
    /// different representation of the same field.
    pub fn nth_primitive(p: u32, n: u32, index: usize) -> Result<FieldSpec> {
        check_params(p, n)?;
        let q = (p as u64).pow(n);
        let mut seen = 0;
        for v in 0..q {
            let mut modulus = digits_of(v, p, n as usize);
            modulus.push(1);
            if is_primitive(p, &modulus) {
                if seen == index {
                    return Ok(FieldSpec { p, n, modulus });
                }
                seen += 1;
            }
        }
        Err(GfError::BadModulus(format!(
            "only {seen} primitive polynomials of degree {n} over F_{p}"
        )))
    }

    /// Structural checks plus primitivity of the modulus.
    pub fn validate(&self) -> Result<()> {
        check_params(self.p, self.n)?;
        if self.modulus.len() != self.n as usize + 1 {
            return Err(GfError::BadModulus(format!(
                "expected {} coefficients, got {}",
                self.n + 1,
                self.modulus.len()
            )));
        }
        if self.modulus.iter().any(|&c| c >= self.p) {
            return Err(GfError::BadModulus("coefficient not reduced mod p".into()));
        }
        if self.modulus[self.n as usize] != 1 {
            return Err(GfError::BadModulus("modulus must be monic".into()));
        }
        if !is_primitive(self.p, &self.modulus) {
            return Err(GfError::NotPrimitive(self.modulus.clone()));
        }
        Ok(())
    }
}

/// Trial-division primality; inputs are at most `2^20`.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut v: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= v {
        if v % d == 0 {
            out.push(d);
            while v % d == 0 {
                v /= d;
            }
        }
        d += 1;
    }
    if v > 1 {
        out.push(v);
    }
    out
}

fn check_params(p: u32, n: u32) -> Result<()> {
    if !is_prime(p as u64) {
        return Err(GfError::NotPrime(p));
    }
    if n == 0 || (p as u64).checked_pow(n).is_none_or(|q| q > MAX_FIELD_SIZE) {
        return Err(GfError::DegreeOutOfRange { p, n });
    }
    Ok(())
}

fn digits_of(mut v: u64, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push((v % p as u64) as u32);
        v /= p as u64;
    }
    out
}

/// `a * b mod modulus` over `F_p`; `a`, `b` reduced (length `n`).
fn poly_mulmod(a: &[u64], b: &[u64], modulus: &[u32], p: u64) -> Vec<u64> {
    let n = modulus.len() - 1;
    let mut prod = vec![0u64; 2 * n];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai * bj) % p;
        }
    }
    for k in (n..2 * n).rev() {
        let top = prod[k];
        if top == 0 {
            continue;
        }
        prod[k] = 0;
        for (i, &c) in modulus[..n].iter().enumerate() {
            let sub = top * c as u64 % p;
            prod[k - n + i] = (prod[k - n + i] + p - sub) % p;
        }
    }
    prod.truncate(n);
    prod
}

fn x_pow_mod(e: u64, modulus: &[u32], p: u64) -> Vec<u64> {
    let n = modulus.len() - 1;
    let mut result = vec![0u64; n];
    result[0] = 1;
    let mut base = vec![0u64; n];
    if n == 1 {
        // x = -c_0 in F_p[x]/(x + c_0)
        base[0] = (p - modulus[0] as u64) % p;
    } else {
        base[1] = 1;
    }
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result = poly_mulmod(&result, &base, modulus, p);
        }
        base = poly_mulmod(&base, &base, modulus, p);
        e >>= 1;
    }
    result
}

/// `x` has multiplicative order `p^n - 1` modulo the monic `modulus`.
/// That order forces every nonzero residue to be a unit, so the quotient is a
/// field and the modulus is irreducible as well.
pub fn is_primitive(p: u32, modulus: &[u32]) -> bool {
    let n = modulus.len() - 1;
    if n == 0 || modulus[0] == 0 {
        return false;
    }
    let p64 = p as u64;
    let order = p64.pow(n as u32) - 1;
    let is_one = |v: &[u64]| v[0] == 1 && v[1..].iter().all(|&c| c == 0);
    if !is_one(&x_pow_mod(order, modulus, p64)) {
        return false;
    }
    prime_factors(order)
        .into_iter()
        .all(|r| !is_one(&x_pow_mod(order / r, modulus, p64)))
}

/// Smallest `o` with `o | n` and `d | p^o - 1`.
pub fn o_of_d(p: u32, n: u32, d: u64) -> Result<u32> {
    if d == 0 {
        return Err(GfError::NoTraceDegree { d, n });
    }
    (1..=n)
        .filter(|o| n % o == 0)
        .find(|&o| ((p as u128).pow(o) - 1) % d as u128 == 0)
        .ok_or(GfError::NoTraceDegree { d, n })
}

/// The unit circle `U` and its generator.
#[derive(Debug, Clone)]
pub struct UnitCircle {
    pub xi: Elem,
    /// `xi^0, xi^1, ..., xi^{p^m}` in this order.
    pub members: Vec<Elem>,
}

/// Immutable field context. Safe to share between threads.
#[derive(Debug, Clone)]
pub struct FieldCtx {
    spec: FieldSpec,
    q: u32,
    pow_p: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    abs_trace: Vec<u32>,
}

impl FieldCtx {
    /// Field built on the smallest primitive polynomial.
    pub fn new(p: u32, n: u32) -> Result<FieldCtx> {
        FieldCtx::from_spec(FieldSpec::smallest_primitive(p, n)?)
    }

    pub fn from_spec(spec: FieldSpec) -> Result<FieldCtx> {
        spec.validate()?;
        let (p, n) = (spec.p, spec.n as usize);
        let q = p.pow(spec.n);
        let pow_p: Vec<u32> = (0..=n).map(|i| p.pow(i as u32)).collect();

        let mut exp = Vec::with_capacity(q as usize - 1);
        let mut log = vec![u32::MAX; q as usize];
        let mut cur = vec![0u32; n];
        cur[0] = 1;
        for k in 0..q - 1 {
            let v = pack(&cur, &pow_p);
            if log[v as usize] != u32::MAX {
                return Err(GfError::Invariant(format!(
                    "alpha^{k} repeats an earlier power; modulus not primitive"
                )));
            }
            log[v as usize] = k;
            exp.push(v);
            // multiply by x and reduce by the monic modulus
            let top = cur[n - 1];
            for i in (1..n).rev() {
                cur[i] = cur[i - 1];
            }
            cur[0] = 0;
            for (i, c) in cur.iter_mut().enumerate() {
                let sub = (top as u64 * spec.modulus[i] as u64 % p as u64) as u32;
                *c = (*c + p - sub) % p;
            }
        }
        if pack(&cur, &pow_p) != 1 {
            return Err(GfError::Invariant("alpha^(q-1) != 1".into()));
        }

        let mut ctx = FieldCtx {
            spec,
            q,
            pow_p,
            exp,
            log,
            abs_trace: Vec::new(),
        };
        // Tr is F_p-linear: tabulate it on the monomial basis, then extend.
        let basis_trace: Vec<u32> = (0..n)
            .map(|j| {
                let e = Elem(ctx.pow_p[j]);
                let mut t = Elem::ZERO;
                for i in 0..n as u32 {
                    t = ctx.add(t, ctx.frobenius(e, i));
                }
                debug_assert!(t.0 < p);
                t.0
            })
            .collect();
        ctx.abs_trace = (0..q)
            .map(|v| {
                let mut acc = 0u64;
                let mut v = v;
                for &bt in &basis_trace {
                    acc += (v % p) as u64 * bt as u64;
                    v /= p;
                }
                (acc % p as u64) as u32
            })
            .collect();
        Ok(ctx)
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn p(&self) -> u32 {
        self.spec.p
    }

    pub fn n(&self) -> u32 {
        self.spec.n
    }

    /// `n / 2` when `n` is even.
    pub fn m(&self) -> Option<u32> {
        (self.spec.n % 2 == 0).then_some(self.spec.n / 2)
    }

    fn require_m(&self) -> Result<u32> {
        self.m().ok_or(GfError::OddDegree(self.spec.n))
    }

    /// Field size `p^n`.
    pub fn size(&self) -> u64 {
        self.q as u64
    }

    /// `p^n - 1`.
    pub fn order(&self) -> u64 {
        self.q as u64 - 1
    }

    /// `p^m`, panicking for odd `n`. Callers check `m()` first.
    pub fn pm(&self) -> u64 {
        (self.spec.p as u64).pow(self.m().expect("even extension degree"))
    }

    /// Every element, in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.q).map(Elem)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Elem> + '_ {
        (1..self.q).map(Elem)
    }

    pub fn alpha(&self) -> Elem {
        self.exp(1)
    }

    pub fn element(&self, value: u32) -> Result<Elem> {
        if value >= self.q {
            return Err(GfError::BadElement(format!("{value} >= {}", self.q)));
        }
        Ok(Elem(value))
    }

    /// Constant `c mod p` of the prime subfield.
    pub fn from_int(&self, c: i64) -> Elem {
        Elem(c.rem_euclid(self.spec.p as i64) as u32)
    }

    pub fn coeffs(&self, x: Elem) -> Vec<u32> {
        digits_of(x.0 as u64, self.spec.p, self.spec.n as usize)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Elem> {
        if coeffs.len() != self.spec.n as usize {
            return Err(GfError::BadElement(format!(
                "expected {} coefficients, got {}",
                self.spec.n,
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|&c| c >= self.spec.p) {
            return Err(GfError::BadElement("coefficient not reduced mod p".into()));
        }
        Ok(Elem(pack(coeffs, &self.pow_p)))
    }

    pub fn exp(&self, k: u64) -> Elem {
        Elem(self.exp[(k % self.order()) as usize])
    }

    /// Discrete log base `alpha`, `None` for zero.
    pub fn log(&self, x: Elem) -> Option<u64> {
        (!x.is_zero()).then(|| self.log[x.0 as usize] as u64)
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let p = self.spec.p;
        if p == 2 {
            return Elem(a.0 ^ b.0);
        }
        let (mut x, mut y, mut out) = (a.0, b.0, 0);
        for &w in &self.pow_p[..self.spec.n as usize] {
            out += (x % p + y % p) % p * w;
            x /= p;
            y /= p;
        }
        Elem(out)
    }

    pub fn neg(&self, a: Elem) -> Elem {
        self.scale(a, self.spec.p as i64 - 1)
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    /// Multiplication by the prime-field scalar `c mod p`.
    pub fn scale(&self, a: Elem, c: i64) -> Elem {
        let p = self.spec.p;
        let c = c.rem_euclid(p as i64) as u32;
        if p == 2 {
            return if c == 0 { Elem::ZERO } else { a };
        }
        let (mut x, mut out) = (a.0, 0);
        for &w in &self.pow_p[..self.spec.n as usize] {
            out += (x % p) * c % p * w;
            x /= p;
        }
        Elem(out)
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.is_zero() || b.is_zero() {
            return Elem::ZERO;
        }
        let s = self.log[a.0 as usize] as u64 + self.log[b.0 as usize] as u64;
        Elem(self.exp[(s % self.order()) as usize])
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        match self.log(a) {
            None => Err(GfError::ZeroInverse),
            Some(l) => Ok(self.exp(self.order() - l)),
        }
    }

    /// `a^e` with `0^0 = 1`.
    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        match self.log(a) {
            None => {
                if e == 0 {
                    Elem::ONE
                } else {
                    Elem::ZERO
                }
            }
            Some(l) => {
                let k = (l as u128 * e as u128 % self.order() as u128) as u64;
                self.exp(k)
            }
        }
    }

    /// `a^e` for any integer exponent; negative powers of zero are an error.
    pub fn pow_signed(&self, a: Elem, e: i64) -> Result<Elem> {
        if e >= 0 {
            return Ok(self.pow(a, e as u64));
        }
        let l = self.log(a).ok_or(GfError::ZeroInverse)?;
        let ord = self.order() as i128;
        let k = (l as i128 * e as i128).rem_euclid(ord) as u64;
        Ok(self.exp(k))
    }

    /// `x^{p^k}`.
    pub fn frobenius(&self, x: Elem, k: u32) -> Elem {
        let Some(l) = self.log(x) else {
            return Elem::ZERO;
        };
        let ord = self.order();
        let mut e = 1u64;
        for _ in 0..k % self.spec.n {
            e = e * self.spec.p as u64 % ord.max(1);
        }
        self.exp(l * e)
    }

    /// Absolute trace `Tr_1^n(x)` as an integer in `0..p`.
    pub fn abs_trace(&self, x: Elem) -> u32 {
        self.abs_trace[x.0 as usize]
    }

    /// `Tr_1^n(a * x)` using the log tables.
    #[inline]
    pub fn trace_of_product(&self, a: Elem, x: Elem) -> u32 {
        self.abs_trace[self.mul(a, x).0 as usize]
    }

    /// `x` lies in `F_{p^k}`; requires `k | n`.
    pub fn in_subfield(&self, x: Elem, k: u32) -> bool {
        k > 0 && self.spec.n % k == 0 && self.frobenius(x, k) == x
    }

    /// Elements of `F_{p^k}`, zero first (when requested) then by discrete log.
    pub fn subfield_elements(&self, k: u32, include_zero: bool) -> Result<Vec<Elem>> {
        if k == 0 || self.spec.n % k != 0 {
            return Err(GfError::TraceDegrees {
                from: self.spec.n,
                to: k,
                n: self.spec.n,
            });
        }
        let sub_order = (self.spec.p as u64).pow(k) - 1;
        let step = self.order() / sub_order;
        let mut out = Vec::with_capacity(sub_order as usize + 1);
        if include_zero {
            out.push(Elem::ZERO);
        }
        out.extend((0..sub_order).map(|j| self.exp(j * step)));
        Ok(out)
    }

    /// Relative trace `Tr_to^from(x) = sum_{i < from/to} x^{p^{to i}}`.
    pub fn trace(&self, x: Elem, from: u32, to: u32) -> Result<Elem> {
        let n = self.spec.n;
        if to == 0 || from == 0 || from % to != 0 || n % from != 0 {
            return Err(GfError::TraceDegrees { from, to, n });
        }
        if !self.in_subfield(x, from) {
            return Err(GfError::NotInSubfield(from));
        }
        let mut acc = Elem::ZERO;
        for i in 0..from / to {
            acc = self.add(acc, self.frobenius(x, to * i));
        }
        Ok(acc)
    }

    /// `Tr_1^k(x)` as an integer in `0..p` for `x` in `F_{p^k}`.
    pub fn subfield_trace(&self, x: Elem, k: u32) -> Result<u32> {
        Ok(self.trace(x, k, 1)?.0)
    }

    /// `xi = alpha^{p^m - 1}`, a generator of `U`.
    pub fn xi(&self) -> Result<Elem> {
        self.require_m()?;
        Ok(self.exp(self.pm() - 1))
    }

    pub fn unit_circle(&self) -> Result<UnitCircle> {
        let xi = self.xi()?;
        let members = (0..=self.pm()).map(|k| self.pow(xi, k)).collect();
        Ok(UnitCircle { xi, members })
    }

    /// Cosets `V_0, ..., V_{d-1}` of the index-`d` subgroup of `U`, with
    /// `V_k = xi^k V_0` and `V_0 = { xi^{d i} }`.
    pub fn v_partition(&self, d: u64) -> Result<Vec<Vec<Elem>>> {
        self.require_m()?;
        let u_order = self.pm() + 1;
        if d == 0 || u_order % d != 0 {
            return Err(GfError::BadDivisor { d, modulus: u_order });
        }
        let xi = self.xi()?;
        Ok((0..d)
            .map(|k| {
                (0..u_order / d)
                    .map(|i| self.pow(xi, k + d * i))
                    .collect()
            })
            .collect())
    }

    /// The transversal `{alpha^0, ..., alpha^{p^m}}`.
    pub fn coset_reps(&self) -> Result<Vec<Elem>> {
        self.require_m()?;
        Ok((0..=self.pm()).map(|k| self.exp(k)).collect())
    }

    /// The unique `u` among the coset representatives with `Tr_m^n(lambda u) = 0`.
    pub fn tr_zero_rep(&self, lambda: Elem) -> Result<Elem> {
        let m = self.require_m()?;
        if lambda.is_zero() {
            return Err(GfError::ZeroElement);
        }
        let mut found = Vec::new();
        for u in self.coset_reps()? {
            if self.trace(self.mul(lambda, u), self.spec.n, m)?.is_zero() {
                found.push(u);
            }
        }
        match found.as_slice() {
            [u] => Ok(*u),
            _ => Err(GfError::Invariant(format!(
                "{} representatives u with Tr_m^n(lambda u) = 0",
                found.len()
            ))),
        }
    }

    /// `x` is in `F_{p^m}^*`.
    pub fn in_half_field_units(&self, x: Elem) -> bool {
        match (self.log(x), self.m()) {
            (Some(l), Some(_)) => l % (self.pm() + 1) == 0,
            _ => false,
        }
    }

    /// Writes `a = abar * xi^k` with `abar` in `F_{p^m}^*`, choosing the
    /// smallest `k >= 0`. For odd `p` only squares admit such a form.
    pub fn dillon_decompose(&self, a: Elem) -> Result<(Elem, u64)> {
        self.require_m()?;
        if a.is_zero() {
            return Err(GfError::ZeroElement);
        }
        let xi_inv = self.inv(self.xi()?)?;
        let mut cand = a;
        for k in 0..=self.pm() {
            if self.in_half_field_units(cand) {
                return Ok((cand, k));
            }
            cand = self.mul(cand, xi_inv);
        }
        Err(GfError::NotDecomposable)
    }

    /// Membership in `C_0`, the squares of `F_{p^n}^*` (even discrete log).
    pub fn is_square(&self, x: Elem) -> bool {
        self.log(x).is_some_and(|l| l.is_even())
    }
}

fn pack(digits: &[u32], pow_p: &[u32]) -> u32 {
    digits.iter().zip(pow_p).map(|(d, w)| d * w).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent irreducibility test by exhaustive root/factor search is
    /// overkill at degree 4; instead enumerate powers of x directly.
    fn order_of_x(p: u32, modulus: &[u32]) -> u64 {
        let n = modulus.len() - 1;
        let q = (p as u64).pow(n as u32);
        let mut cur = vec![0u64; n];
        cur[0] = 1;
        let x = x_pow_mod(1, modulus, p as u64);
        for k in 1..q {
            cur = poly_mulmod(&cur, &x, modulus, p as u64);
            if cur[0] == 1 && cur[1..].iter().all(|&c| c == 0) {
                return k;
            }
        }
        0
    }

    #[test]
    fn smallest_primitive_degree_four_binary() {
        // brute force: first modulus (by packed value) whose x has order 15
        let mut first = None;
        for v in 0..16u64 {
            let mut m = digits_of(v, 2, 4);
            m.push(1);
            if m[0] != 0 && order_of_x(2, &m) == 15 {
                first = Some(m);
                break;
            }
        }
        assert_eq!(first.unwrap(), vec![1, 1, 0, 0, 1]);
        let spec = FieldSpec::smallest_primitive(2, 4).unwrap();
        assert_eq!(spec.modulus, vec![1, 1, 0, 0, 1]);
    }

    #[test]
    fn prime_field_uses_smallest_primitive_root() {
        let spec = FieldSpec::smallest_primitive(3, 1).unwrap();
        assert_eq!(spec.modulus, vec![1, 1]);
        let ctx = FieldCtx::from_spec(spec).unwrap();
        assert_eq!(ctx.alpha(), Elem(2));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(FieldCtx::new(4, 2).unwrap_err(), GfError::NotPrime(4));
        assert!(matches!(
            FieldCtx::new(2, 21),
            Err(GfError::DegreeOutOfRange { .. })
        ));
        assert!(matches!(FieldCtx::new(2, 0), Err(GfError::DegreeOutOfRange { .. })));
        let bad = FieldSpec {
            p: 2,
            n: 4,
            modulus: vec![1, 1, 1, 1, 1],
        };
        assert!(matches!(FieldCtx::from_spec(bad), Err(GfError::NotPrimitive(_))));
    }

    #[test]
    fn arithmetic_basics() {
        let ctx = FieldCtx::new(2, 6).unwrap();
        let x = ctx.alpha();
        assert_eq!(ctx.add(x, x), Elem::ZERO);
        assert_eq!(ctx.pow(x, ctx.order()), Elem::ONE);
        assert_eq!(ctx.inv(Elem::ZERO), Err(GfError::ZeroInverse));
        assert_eq!(ctx.pow(Elem::ZERO, 0), Elem::ONE);
        assert_eq!(ctx.pow(Elem::ZERO, 5), Elem::ZERO);
        assert_eq!(ctx.pow_signed(Elem::ZERO, -1), Err(GfError::ZeroInverse));

        let ctx = FieldCtx::new(3, 4).unwrap();
        for a in ctx.nonzero() {
            let ai = ctx.inv(a).unwrap();
            assert_eq!(ctx.mul(a, ai), Elem::ONE);
            assert_eq!(ctx.pow_signed(a, -1).unwrap(), ai);
            assert_eq!(ctx.add(a, ctx.neg(a)), Elem::ZERO);
            assert_eq!(ctx.exp(ctx.log(a).unwrap()), a);
        }
    }

    #[test]
    fn multiplication_matches_polynomial_product() {
        let ctx = FieldCtx::new(3, 3).unwrap();
        let modulus: Vec<u32> = ctx.spec().modulus.clone();
        for a in ctx.elements() {
            for b in ctx.elements() {
                let pa: Vec<u64> = ctx.coeffs(a).iter().map(|&c| c as u64).collect();
                let pb: Vec<u64> = ctx.coeffs(b).iter().map(|&c| c as u64).collect();
                let prod: Vec<u32> = poly_mulmod(&pa, &pb, &modulus, 3)
                    .into_iter()
                    .map(|c| c as u32)
                    .collect();
                assert_eq!(ctx.from_coeffs(&prod).unwrap(), ctx.mul(a, b));
            }
        }
    }

    #[test]
    fn trace_examples_and_transitivity() {
        let ctx = FieldCtx::new(2, 6).unwrap();
        assert_eq!(ctx.abs_trace(Elem::ZERO), 0);
        assert_eq!(ctx.abs_trace(Elem::ONE), 0);
        for y in ctx.subfield_elements(3, true).unwrap() {
            assert_eq!(ctx.trace(y, 6, 3).unwrap(), ctx.scale(y, 2));
        }
        for ctx in [FieldCtx::new(2, 8).unwrap(), FieldCtx::new(3, 6).unwrap()] {
            let (n, m) = (ctx.n(), ctx.m().unwrap());
            for x in ctx.elements() {
                let outer = ctx.trace(x, n, m).unwrap();
                let two_step = ctx.trace(outer, m, 1).unwrap();
                assert_eq!(two_step.value(), ctx.abs_trace(x));
                assert_eq!(ctx.abs_trace(ctx.pow(x, ctx.p() as u64)), ctx.abs_trace(x));
            }
        }
    }

    #[test]
    fn trace_rejects_bad_degrees() {
        let ctx = FieldCtx::new(3, 4).unwrap();
        assert!(matches!(ctx.trace(Elem::ONE, 3, 1), Err(GfError::TraceDegrees { .. })));
        assert!(matches!(ctx.trace(ctx.alpha(), 2, 1), Err(GfError::NotInSubfield(2))));
    }

    #[test]
    fn unit_circle_sizes() {
        let ctx = FieldCtx::new(2, 4).unwrap();
        let u = ctx.unit_circle().unwrap();
        assert_eq!(u.members.len(), 5);
        for &x in &u.members {
            assert_eq!(ctx.pow(x, 5), Elem::ONE);
        }
        let ctx = FieldCtx::new(3, 6).unwrap();
        assert_eq!(ctx.unit_circle().unwrap().members.len(), 28);
        assert_eq!(
            FieldCtx::new(2, 5).unwrap().unit_circle().unwrap_err(),
            GfError::OddDegree(5)
        );
    }

    #[test]
    fn v_partition_tiles_unit_circle() {
        for (p, n) in [(2, 4), (2, 6), (3, 4), (5, 2)] {
            let ctx = FieldCtx::new(p, n).unwrap();
            let order = ctx.pm() + 1;
            let mut u: Vec<Elem> = ctx.unit_circle().unwrap().members;
            u.sort();
            for d in (1..=order).filter(|d| order % d == 0) {
                let parts = ctx.v_partition(d).unwrap();
                assert_eq!(parts.len() as u64, d);
                assert!(parts.iter().all(|v| v.len() as u64 == order / d));
                let mut all: Vec<Elem> = parts.concat();
                all.sort();
                assert_eq!(all, u);
            }
        }
        let ctx = FieldCtx::new(2, 6).unwrap();
        assert!(ctx.v_partition(9).unwrap().iter().all(|v| v.len() == 1));
        assert!(matches!(ctx.v_partition(4), Err(GfError::BadDivisor { .. })));
    }

    #[test]
    fn coset_reps_factor_uniquely() {
        for (p, n) in [(3, 2), (2, 4), (2, 6), (3, 4)] {
            let ctx = FieldCtx::new(p, n).unwrap();
            let reps = ctx.coset_reps().unwrap();
            assert_eq!(reps.len() as u64, ctx.pm() + 1);
            assert_eq!(reps[0], Elem::ONE);
            let sub = ctx.subfield_elements(ctx.m().unwrap(), false).unwrap();
            for x in ctx.nonzero() {
                let count = reps
                    .iter()
                    .flat_map(|&u| sub.iter().map(move |&y| (u, y)))
                    .filter(|&(u, y)| ctx.mul(u, y) == x)
                    .count();
                assert_eq!(count, 1, "p={p} n={n} x={x:?}");
            }
        }
    }

    #[test]
    fn unique_trace_zero_representative() {
        let ctx = FieldCtx::new(2, 4).unwrap();
        assert_eq!(ctx.tr_zero_rep(Elem::ONE).unwrap(), Elem::ONE);
        for (p, n) in [(2, 4), (3, 2)] {
            let ctx = FieldCtx::new(p, n).unwrap();
            let m = ctx.m().unwrap();
            for lambda in ctx.nonzero() {
                let hits = ctx
                    .coset_reps()
                    .unwrap()
                    .into_iter()
                    .filter(|&u| ctx.trace(ctx.mul(lambda, u), n, m).unwrap().is_zero())
                    .count();
                assert_eq!(hits, 1);
                assert!(ctx.tr_zero_rep(lambda).is_ok());
            }
        }
        assert_eq!(ctx.tr_zero_rep(Elem::ZERO), Err(GfError::ZeroElement));
    }

    #[test]
    fn o_of_d_examples() {
        assert_eq!(o_of_d(2, 4, 5).unwrap(), 4);
        assert_eq!(o_of_d(3, 6, 4).unwrap(), 2);
        for p in [3, 5, 7, 11] {
            assert_eq!(o_of_d(p, 2, 2).unwrap(), 1);
        }
        assert_eq!(o_of_d(2, 6, 9).unwrap(), 6);
        assert_eq!(o_of_d(2, 6, 1).unwrap(), 1);
        assert!(o_of_d(2, 4, 2).is_err());
    }

    #[test]
    fn dillon_decompose_round_trip() {
        let ctx = FieldCtx::new(2, 6).unwrap();
        let xi = ctx.xi().unwrap();
        assert_eq!(ctx.dillon_decompose(xi).unwrap(), (Elem::ONE, 1));
        for a in ctx.subfield_elements(3, false).unwrap() {
            assert_eq!(ctx.dillon_decompose(a).unwrap(), (a, 0));
        }
        for a in ctx.nonzero() {
            let (abar, k) = ctx.dillon_decompose(a).unwrap();
            assert!(k <= 8);
            assert_eq!(ctx.mul(abar, ctx.pow(xi, k)), a);
        }
        assert_eq!(ctx.dillon_decompose(Elem::ZERO), Err(GfError::ZeroElement));
    }

    #[test]
    fn odd_characteristic_decomposes_exactly_the_squares() {
        let ctx = FieldCtx::new(3, 4).unwrap();
        let xi = ctx.xi().unwrap();
        for a in ctx.nonzero() {
            match ctx.dillon_decompose(a) {
                Ok((abar, k)) => {
                    assert!(ctx.is_square(a));
                    assert_eq!(ctx.mul(abar, ctx.pow(xi, k)), a);
                    // the other representative is (-abar, k + (p^m+1)/2)
                    assert!(k < (ctx.pm() + 1) / 2);
                }
                Err(e) => {
                    assert_eq!(e, GfError::NotDecomposable);
                    assert!(!ctx.is_square(a));
                }
            }
        }
    }

    #[test]
    fn field_spec_json_shape() {
        let spec = FieldSpec::smallest_primitive(2, 4).unwrap();
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(json, r#"{"p":2,"n":4,"modulus":[1,1,0,0,1]}"#);
        let back: FieldSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, spec);
    }
}
