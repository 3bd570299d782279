//! Exact rational arithmetic: matrices, binary forms, Pfaffians and quadrics.

mod form;
mod matrix;
mod pfaffian;
mod quadric;
pub mod rational;

pub use form::{BinaryForm, FormRoot, RootDecomposition};
pub use matrix::{dot, is_zero_vec, lin_comb, RatMatrix};
pub use pfaffian::{pfaffian, pfaffian_form, principal_subpfaffian_forms};
pub use quadric::{quad_rank_and_vertex, SymQuadForm};
pub use rational::{format_rational, parse_rational, rat, ratio, Rational};

/// Reduced row-echelon form and pivot columns.
pub fn rref(m: &RatMatrix) -> (RatMatrix, Vec<usize>) {
    m.rref()
}

/// Basis of the null space of `m`, one vector per row.
pub fn kernel(m: &RatMatrix) -> RatMatrix {
    m.kernel()
}

/// Greatest common divisor of two binary forms, leading coefficient 1.
pub fn binary_gcd(f: &BinaryForm, g: &BinaryForm) -> BinaryForm {
    f.gcd(g)
}

pub fn rational_roots(f: &BinaryForm) -> crate::error::Result<RootDecomposition> {
    f.rational_roots()
}
