//! Toric frontend: fans, curve classes, mirror maps and disc potentials.

mod coeff;
mod fan;
pub mod fm;
mod maslov;
mod mirror;
mod potential;
mod teleman;
#[cfg(test)]
mod tests;

pub use coeff::{Coeff, CoeffKey};
pub use fan::{
    check_fano, primitive_collections, primitive_relation, CurveClassLattice, FanoReport, MoriData, SubtorusAction,
    ToricData,
};
pub use maslov::{
    correspondence_disc_classes, correspondence_vector, maslov_index_correspondence, missed_divisors, DiscClass,
    DiscClassLattice, MissedDivisors,
};
pub use mirror::{
    correspondence_equivariant_potential, correspondence_h, mori_names, q_names, subtorus_in_psi, MirrorMap, SemiFano,
};
pub use potential::{
    basic_disc_potential, equivariant_potential, restrict_potential, Constraint, LaurentPotential, LogTerm,
};
pub use teleman::{verify_teleman, CoordinateChange, Mismatch, TelemanReport};
