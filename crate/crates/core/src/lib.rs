//! Finite-field toolkit for Dillon-type p-ary bent functions: field
//! arithmetic, exact cyclotomic integers, character sums, bentness criteria
//! and an exhaustive parameter search.

pub mod charsum;
pub mod checks;
pub mod cyclo;
pub mod dillon;
mod error;
pub mod gf;
pub mod search;

pub use cyclo::{CycError, CycInt};
pub use error::{Error, Result};
pub use gf::{Elem, FieldCtx, FieldSpec, GfError};
