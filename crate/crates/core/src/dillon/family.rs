use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::function::DillonFunction;
use crate::error::{Error, Result};
use crate::gf::{o_of_d, Elem, FieldCtx};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    B1,
    B2,
    P1,
    P2,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::B1 => "b1",
            Family::B2 => "b2",
            Family::P1 => "p1",
            Family::P2 => "p2",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Family, String> {
        match s.to_ascii_lowercase().as_str() {
            "b1" => Ok(Family::B1),
            "b2" => Ok(Family::B2),
            "p1" => Ok(Family::P1),
            "p2" => Ok(Family::P2),
            other => Err(format!("unknown family '{other}' (expected b1, b2, p1 or p2)")),
        }
    }
}

/// Concrete parameters of one family member.
///
/// * `B1`: `sum_{i<d} Tr(a_i x^{(l + i(2^m+1)/d)(2^m-1)}) + Tr_1^{o(d)}(b x^{(2^n-1)/d})`
/// * `B2`: `sum_{1 <= i < (2^m+1)/r} Tr(a x^{(ri+s)(2^m-1)})`
/// * `P1`: `Tr(a x^{l(p^m-1)}) + Tr_1^2(b x^{(p^n-1)/4})`
/// * `P2`: `sum_{1 <= i < (p^m+1)/r} Tr(a x^{(ri+s)(p^m-1)}) + b x^{(p^n-1)/2}`
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum FamilyParams {
    B1 { d: u64, l: u64, a: Vec<Elem>, b: Elem },
    B2 { r: u64, s: u64, a: Elem },
    P1 { l: u64, a: Elem, b: Elem },
    P2 { r: u64, s: u64, a: Elem, b: Elem },
}

fn hyp<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Hypothesis(msg.into()))
}

fn half_degree(ctx: &FieldCtx) -> Result<u32> {
    ctx.m()
        .ok_or_else(|| Error::Hypothesis(format!("field degree {} is odd", ctx.n())))
}

impl FamilyParams {
    pub fn family(&self) -> Family {
        match self {
            FamilyParams::B1 { .. } => Family::B1,
            FamilyParams::B2 { .. } => Family::B2,
            FamilyParams::P1 { .. } => Family::P1,
            FamilyParams::P2 { .. } => Family::P2,
        }
    }

    /// Checks the family's divisibility, gcd and congruence hypotheses.
    pub fn validate(&self, ctx: &FieldCtx) -> Result<()> {
        half_degree(ctx)?;
        let p = ctx.p();
        let u_order = ctx.pm() + 1;
        match self {
            FamilyParams::B1 { d, l, a, b } => {
                if p != 2 {
                    return hyp("family b1 needs p = 2");
                }
                if *d == 0 || u_order % d != 0 {
                    return hyp(format!("d = {d} does not divide 2^m + 1 = {u_order}"));
                }
                if a.len() as u64 != *d {
                    return hyp(format!("family b1 needs {d} coefficients, got {}", a.len()));
                }
                if l.gcd(&(u_order / d)) != 1 {
                    return hyp(format!("gcd(l, (2^m+1)/d) != 1 for l = {l}"));
                }
                let o = o_of_d(p, ctx.n(), *d)?;
                if !ctx.in_subfield(*b, o) {
                    return hyp(format!("b must lie in F_(2^{o})"));
                }
            }
            FamilyParams::B2 { r, a, .. } => {
                if p != 2 {
                    return hyp("family b2 needs p = 2");
                }
                if *r == 0 || u_order % r != 0 || *r == u_order {
                    return hyp(format!("r = {r} must be a proper divisor of 2^m + 1 = {u_order}"));
                }
                if a.is_zero() {
                    return hyp("family b2 needs a != 0");
                }
            }
            FamilyParams::P1 { l, b, .. } => {
                if p == 2 {
                    return hyp("family p1 needs odd p");
                }
                if ctx.pm() % 4 != 3 {
                    return hyp("family p1 needs p^m = 3 mod 4");
                }
                if l.gcd(&(u_order / 4)) != 1 {
                    return hyp(format!("gcd(l, (p^m+1)/4) != 1 for l = {l}"));
                }
                if !ctx.in_subfield(*b, 2) {
                    return hyp("family p1 needs b in F_(p^2)");
                }
            }
            FamilyParams::P2 { r, s, a, b } => {
                if p == 2 {
                    return hyp("family p2 needs odd p");
                }
                if *r == 0 || u_order % r != 0 || *r == u_order {
                    return hyp(format!("r = {r} must be a proper divisor of p^m + 1 = {u_order}"));
                }
                if s.gcd(&u_order) != 1 {
                    return hyp(format!("gcd(s, p^m+1) != 1 for s = {s}"));
                }
                if a.is_zero() {
                    return hyp("family p2 needs a != 0");
                }
                if !ctx.in_subfield(*b, 1) {
                    return hyp("family p2 needs b in F_p");
                }
            }
        }
        Ok(())
    }

    /// Expands the family member into the general Dillon form.
    pub fn to_dillon(&self, ctx: &FieldCtx) -> Result<DillonFunction> {
        self.validate(ctx)?;
        let u_order = ctx.pm() + 1;
        match self {
            FamilyParams::B1 { d, l, a, b } => {
                let step = u_order / d;
                let terms = a
                    .iter()
                    .enumerate()
                    .map(|(i, &c)| (l + i as u64 * step, c));
                DillonFunction::new(ctx, terms, *b, *d)
            }
            FamilyParams::B2 { r, s, a } => {
                let terms = (1..u_order / r).map(|i| (r * i + s, *a));
                DillonFunction::new(ctx, terms, Elem::ZERO, 1)
            }
            FamilyParams::P1 { l, a, b } => DillonFunction::new(ctx, [(*l, *a)], *b, 4),
            FamilyParams::P2 { r, s, a, b } => {
                let terms = (1..u_order / r).map(|i| (r * i + s, *a));
                DillonFunction::new(ctx, terms, *b, 2)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn b2_expands_to_two_exponents() {
        let ctx = FieldCtx::new(2, 6).unwrap();
        let a = ctx.exp(5);
        let f = FamilyParams::B2 { r: 3, s: 1, a }.to_dillon(&ctx).unwrap();
        let exps: Vec<u64> = f.exponents(&ctx).into_iter().map(|(e, _)| e).collect();
        assert_eq!(exps, vec![28, 49]);
    }

    #[test]
    fn b1_expands_with_b_term() {
        let ctx = FieldCtx::new(2, 4).unwrap();
        let sub = ctx.subfield_elements(2, false).unwrap();
        let (a0, a1) = (sub[0], sub[1]);
        let params = FamilyParams::B1 {
            d: 5,
            l: 5,
            a: vec![a0, a1, a1, a1, a1],
            b: ctx.alpha(),
        };
        let f = params.to_dillon(&ctx).unwrap();
        let mut exps: Vec<u64> = f.exponents(&ctx).into_iter().map(|(e, _)| e).collect();
        exps.sort();
        assert_eq!(exps, vec![3, 6, 9, 12, 15]);
        assert_eq!(f.b_exponent(&ctx), 3);
    }

    #[test]
    fn p1_exponents() {
        let ctx = FieldCtx::new(3, 6).unwrap();
        let b = ctx.subfield_elements(2, false).unwrap()[1];
        let f = FamilyParams::P1 { l: 4, a: ctx.exp(28), b }.to_dillon(&ctx).unwrap();
        assert_eq!(f.exponents(&ctx)[0].0, 104);
        assert_eq!(f.b_exponent(&ctx), 182);
    }

    #[test]
    fn hypothesis_violations() {
        let ctx = FieldCtx::new(3, 4).unwrap();
        // 3^2 = 9 = 1 mod 4
        let p1 = FamilyParams::P1 { l: 1, a: ctx.alpha(), b: Elem::ZERO };
        assert!(matches!(p1.validate(&ctx), Err(Error::Hypothesis(_))));
        let p2 = FamilyParams::P2 { r: 2, s: 2, a: ctx.alpha(), b: Elem::ZERO };
        assert!(p2.validate(&ctx).is_err());
        let ctx2 = FieldCtx::new(2, 6).unwrap();
        let b1 = FamilyParams::B1 { d: 3, l: 3, a: vec![Elem::ONE; 3], b: Elem::ZERO };
        assert!(b1.validate(&ctx2).is_err());
    }
}
