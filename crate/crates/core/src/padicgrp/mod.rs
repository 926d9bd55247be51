//! GL2 over Q_p and its unramified quadratic extension: exact matrices,
//! Iwasawa and Cartan decompositions, coset labels and coset enumerations.

mod cosets;
mod decomp;
pub mod lattice;
mod labels;
mod mat2;

pub use cosets::*;
pub use decomp::{cartan, iwasawa, CartanParts, IwasawaParts};
pub use labels::*;
pub use mat2::Mat2;
