//! Finite-basis filtered A∞ algebras in the shifted-degree sign convention.
//!
//! With `‖x‖ = deg x - 1` the relations read
//! `Σ (-1)^{‖x_1‖+…+‖x_i‖} m(x_1,…,x_i, m(x_{i+1},…), …) = 0`, including `m_0` insertions.
//! A dga enters as `m_1 = d`, `m_2(x,y) = (-1)^{deg x} x·y`.

mod algebra;
mod chain;
pub mod text;

pub use algebra::{AInfinityAlgebra, EnergyEntry, LinComb, PotentialValue, Table, Violation};
pub use chain::{Chain, GradedBasis};

pub(crate) use algebra::tuples;
pub mod samples;

#[cfg(test)]
mod tests;
