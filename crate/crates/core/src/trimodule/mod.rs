//! Filtered A∞ tri-modules over three curved algebras, cyclic elements and the
//! composition of weak bounding cochains.

mod compose;
mod module;
pub mod text;

pub use compose::{CyclicElement, KappaReport, ObstructionReport, Side, SignCheck};
pub use module::{AInfinityTriModule, TriKey, TriViolation};
