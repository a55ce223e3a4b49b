use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::charsum::dillon_sum;
use crate::cyclo::CycInt;
use crate::error::{Error, Result};
use crate::gf::{o_of_d, Elem, FieldCtx, FieldSpec};

/// `f(x) = sum_i Tr_1^n(a_i x^{i(p^m-1)}) + Tr_1^{o(d)}(b x^{(p^n-1)/d})`.
///
/// Multipliers `i` are stored reduced mod `p^m + 1`; coefficients that land
/// on the same residue are added and zero coefficients are dropped, so equal
/// functions compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DillonFunction {
    terms: BTreeMap<u64, Elem>,
    b: Elem,
    d: u64,
    o: u32,
}

impl DillonFunction {
    pub fn new(
        ctx: &FieldCtx,
        terms: impl IntoIterator<Item = (u64, Elem)>,
        b: Elem,
        d: u64,
    ) -> Result<DillonFunction> {
        if ctx.m().is_none() {
            return Err(Error::Precondition(format!("field degree {} is odd", ctx.n())));
        }
        let u_order = ctx.pm() + 1;
        if d == 0 || u_order % d != 0 {
            return Err(Error::Hypothesis(format!("d = {d} does not divide {u_order}")));
        }
        let o = o_of_d(ctx.p(), ctx.n(), d)?;
        if !ctx.in_subfield(b, o) {
            return Err(Error::Hypothesis(format!(
                "b is not in the subfield of degree o(d) = {o}"
            )));
        }
        let mut map: BTreeMap<u64, Elem> = BTreeMap::new();
        for (i, a) in terms {
            let slot = map.entry(i % u_order).or_insert(Elem::ZERO);
            *slot = ctx.add(*slot, a);
        }
        map.retain(|_, a| !a.is_zero());
        Ok(DillonFunction { terms: map, b, d, o })
    }

    /// `(multiplier mod p^m + 1, coefficient)` pairs in multiplier order.
    pub fn terms(&self) -> impl Iterator<Item = (u64, Elem)> + '_ {
        self.terms.iter().map(|(&i, &a)| (i, a))
    }

    pub fn b(&self) -> Elem {
        self.b
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    /// Trace degree `o(d)` of the `b` term.
    pub fn o(&self) -> u32 {
        self.o
    }

    /// Exponents `i(p^m - 1)` reduced into `1..=p^n - 1`, with coefficients.
    pub fn exponents(&self, ctx: &FieldCtx) -> Vec<(u64, Elem)> {
        self.terms()
            .map(|(i, a)| (reduce_exponent(ctx, i * (ctx.pm() - 1)), a))
            .collect()
    }

    pub fn b_exponent(&self, ctx: &FieldCtx) -> u64 {
        ctx.order() / self.d
    }

    /// Value on the coset `alpha^u F_{p^m}^*`, `u` taken mod `p^m + 1`.
    fn coset_value(&self, ctx: &FieldCtx, u: u64) -> Result<u32> {
        let u_order = ctx.pm() + 1;
        let xi = ctx.xi()?;
        let mut acc = 0u64;
        for (i, a) in self.terms() {
            acc += ctx.trace_of_product(a, ctx.pow(xi, u * i % u_order)) as u64;
        }
        if !self.b.is_zero() {
            let y = ctx.mul(self.b, ctx.pow(xi, u * (u_order / self.d) % u_order));
            acc += ctx.subfield_trace(y, self.o)? as u64;
        }
        Ok((acc % ctx.p() as u64) as u32)
    }

    pub fn evaluate(&self, ctx: &FieldCtx, x: Elem) -> Result<u32> {
        match ctx.log(x) {
            None => Ok(0),
            Some(l) => self.coset_value(ctx, l % (ctx.pm() + 1)),
        }
    }

    pub fn truth_table(&self, ctx: &FieldCtx) -> Result<Vec<u32>> {
        let u_order = ctx.pm() + 1;
        let per_coset = (0..u_order)
            .map(|u| self.coset_value(ctx, u))
            .collect::<Result<Vec<u32>>>()?;
        Ok(ctx
            .elements()
            .map(|x| match ctx.log(x) {
                None => 0,
                Some(l) => per_coset[(l % u_order) as usize],
            })
            .collect())
    }

    /// The unit-circle sum whose value 1 characterizes (regular) bentness.
    pub fn unit_circle_sum(&self, ctx: &FieldCtx) -> Result<CycInt> {
        let terms: Vec<(u64, Elem)> = self.terms().collect();
        dillon_sum(ctx, &terms, self.b, self.d)
    }

    pub fn to_trace_form(&self, ctx: &FieldCtx) -> TraceForm {
        let mut terms: Vec<TraceTerm> = self
            .exponents(ctx)
            .into_iter()
            .map(|(exponent, coeff)| TraceTerm {
                coeff,
                exponent,
                degree: ctx.n(),
            })
            .collect();
        if !self.b.is_zero() {
            terms.push(TraceTerm {
                coeff: self.b,
                exponent: self.b_exponent(ctx),
                degree: self.o,
            });
        }
        TraceForm { terms }
    }

    pub fn to_file(&self, ctx: &FieldCtx) -> DillonFile {
        DillonFile {
            field: ctx.spec().clone(),
            d: self.d,
            a: self.terms().map(|(i, a)| (i, ctx.coeffs(a))).collect(),
            b: ctx.coeffs(self.b),
        }
    }

    pub fn from_file(file: &DillonFile) -> Result<(FieldCtx, DillonFunction)> {
        let ctx = FieldCtx::from_spec(file.field.clone())?;
        let terms = file
            .a
            .iter()
            .map(|(i, c)| Ok((*i, ctx.from_coeffs(c)?)))
            .collect::<Result<Vec<_>>>()?;
        let b = ctx.from_coeffs(&file.b)?;
        let f = DillonFunction::new(&ctx, terms, b, file.d)?;
        Ok((ctx, f))
    }
}

pub(crate) fn reduce_exponent(ctx: &FieldCtx, e: u64) -> u64 {
    match e % ctx.order() {
        0 => ctx.order(),
        r => r,
    }
}

/// JSON form of a [`DillonFunction`]; elements are coefficient vectors,
/// constant term first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DillonFile {
    pub field: FieldSpec,
    pub d: u64,
    pub a: Vec<(u64, Vec<u32>)>,
    pub b: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TraceTerm {
    pub coeff: Elem,
    pub exponent: u64,
    /// The term is `Tr_1^degree(coeff x^exponent)`.
    pub degree: u32,
}

/// A sum of trace monomials, for functions outside the Dillon form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TraceForm {
    pub terms: Vec<TraceTerm>,
}

impl TraceForm {
    pub fn evaluate(&self, ctx: &FieldCtx, x: Elem) -> Result<u32> {
        let mut acc = 0u64;
        for t in &self.terms {
            let y = ctx.mul(t.coeff, ctx.pow(x, t.exponent));
            acc += ctx.subfield_trace(y, t.degree)? as u64;
        }
        Ok((acc % ctx.p() as u64) as u32)
    }

    pub fn truth_table(&self, ctx: &FieldCtx) -> Result<Vec<u32>> {
        ctx.elements().map(|x| self.evaluate(ctx, x)).collect()
    }

    /// Canonical form: exponents reduced, like terms merged, zero terms dropped.
    pub fn normalized(&self, ctx: &FieldCtx) -> TraceForm {
        let mut map: BTreeMap<(u64, u32), Elem> = BTreeMap::new();
        for t in &self.terms {
            let e = if t.exponent == 0 { 0 } else { reduce_exponent(ctx, t.exponent) };
            let slot = map.entry((e, t.degree)).or_insert(Elem::ZERO);
            *slot = ctx.add(*slot, t.coeff);
        }
        TraceForm {
            terms: map
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|((exponent, degree), coeff)| TraceTerm {
                    coeff,
                    exponent,
                    degree,
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multipliers_merge_and_cancel() {
        let ctx = FieldCtx::new(2, 4).unwrap();
        let a = ctx.alpha();
        let f = DillonFunction::new(&ctx, [(1, a), (6, a)], Elem::ZERO, 1).unwrap();
        assert_eq!(f.terms().count(), 0);
    }

    #[test]
    fn truth_table_matches_trace_form() {
        let ctx = FieldCtx::new(3, 4).unwrap();
        let b = ctx.subfield_elements(2, false).unwrap()[3];
        let f = DillonFunction::new(&ctx, [(1, ctx.exp(5)), (3, ctx.exp(11))], b, 10).unwrap();
        let direct = f.to_trace_form(&ctx).truth_table(&ctx).unwrap();
        assert_eq!(f.truth_table(&ctx).unwrap(), direct);
        assert_eq!(direct[0], 0);
    }

    #[test]
    fn b_must_live_in_trace_subfield() {
        let ctx = FieldCtx::new(2, 4).unwrap();
        assert!(DillonFunction::new(&ctx, [], ctx.alpha(), 1).is_err());
        assert!(DillonFunction::new(&ctx, [], Elem::ZERO, 3).is_err());
    }

    #[test]
    fn json_round_trip() {
        let ctx = FieldCtx::new(2, 6).unwrap();
        let f = DillonFunction::new(&ctx, [(1, ctx.exp(9)), (2, ctx.exp(18))], Elem::ZERO, 9).unwrap();
        let text = serde_json::to_string(&f.to_file(&ctx)).unwrap();
        let file: DillonFile = serde_json::from_str(&text).unwrap();
        let (ctx2, g) = DillonFunction::from_file(&file).unwrap();
        assert_eq!(ctx2.spec(), ctx.spec());
        assert_eq!(f, g);
    }
}
