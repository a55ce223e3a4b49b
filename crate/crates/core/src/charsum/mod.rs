//! Character sums: Walsh transforms, Kloosterman sums and partial sums over
//! the unit circle.

mod kloosterman;
mod partial;
mod walsh;

pub use kloosterman::{cubic_sum, dickson, dickson_coefficient, dickson_recurrence, e_md, kloosterman, kloosterman_full};
pub(crate) use kloosterman::{e_md_in, kloosterman_in, Subfield};
pub use partial::{
    dillon_sum, half_gauss_constant, half_unit_sum, partial_sum, partial_sum_closed_d2,
    partial_sum_closed_d4, square_class_trace, unit_circle_sum, IndexFourSums, IndexTwoSums,
    SquareBranch,
};
pub use walsh::{walsh, walsh_spectrum, WalshMethod, WalshSpectrum};
