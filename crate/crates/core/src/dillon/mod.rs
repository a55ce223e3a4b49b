//! Dillon-exponent functions on `F_{p^n}`, `n = 2m`, the four parametric
//! families built from them, and executable bentness criteria.

mod criteria;
mod family;
mod function;

pub use criteria::{
    applicable_criteria, evaluate_all, Criterion, CriterionOptions, CriterionReport, Exactness,
    Value, Verdict,
};
pub use family::{Family, FamilyParams};
pub use function::{DillonFile, DillonFunction, TraceForm, TraceTerm};

use crate::charsum::{walsh_spectrum, WalshMethod, WalshSpectrum};
use crate::error::{Error, Result};
use crate::gf::FieldCtx;

/// Ground-truth bentness from the full Walsh spectrum.
pub fn is_bent(ctx: &FieldCtx, table: &[u32]) -> Result<WalshSpectrum> {
    let spectrum = walsh_spectrum(ctx, table, WalshMethod::Fast)?;
    if !spectrum.parseval_holds(ctx) {
        return Err(Error::Invariant("Parseval identity fails on a computed spectrum".into()));
    }
    Ok(spectrum)
}
