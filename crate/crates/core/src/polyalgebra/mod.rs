//! Exact multigraded polynomials, polynomial matrices and grading inference.

mod grading;
mod matrix;
mod parse;
mod poly;

pub use grading::{
    grading_inference, GradingOutcome, GradingSolution, InconsistentCycle, MapEntry, Node,
    WitnessStep,
};
pub use matrix::{
    homogeneity_check, matrix_compose, matrix_evaluate_rank, CellFailure, FieldSpec,
    HomogeneityReport, PolyMatrix, DEFAULT_PROBE_PRIME,
};
pub use poly::{Homogeneity, Monomial, MultiPoly};

/// Parses a polynomial in the text grammar into canonical form.
pub fn poly_combine(space: &crate::lattice::Space, expr: &str) -> crate::error::Result<MultiPoly> {
    MultiPoly::parse(space, expr)
}
