//! Strong contractions and homotopy transfer.

mod contraction;
mod module_transfer;
mod transfer;

pub use contraction::{make_strong_contraction, Complex, Contraction};
pub use module_transfer::{module_complex, transfer_trimodule, TriMorphism};
pub use transfer::{gapping_levels, pushforward_mc, transfer_algebra, Morphism};
