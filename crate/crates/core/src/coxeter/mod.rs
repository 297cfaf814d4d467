//! Coxeter diagrams, Cartan matrices, signatures, the elliptic / Lannér
//! classification, arithmeticity checks and Vinberg's type trichotomy.

mod arith;
mod cartan;
pub(crate) mod diagram;
mod lanner;
mod signature;
mod vtype;

pub use arith::{arithmeticity_report, arithmeticity_report_for_matrix, ArithmeticityReport, ConjugateReport};
pub use cartan::{
    algnum_to_json, cartan_from_diagram, int_matrix_from_strings, int_matrix_to_strings, matrix_from_json,
    matrix_to_json, CartanKind, CartanMatrix, PairProduct,
};
pub use diagram::{CoxeterDiagram, LABELS};
pub use lanner::{
    classify_subdiagrams, enumerate_lanner, enumerate_lanner_with_stats, integrality_filter, is_elliptic, is_lanner,
    EnumerationStats, SubdiagramClass,
};
pub use signature::{signature, SignatureReport};
pub use vtype::{cartan_type, cartan_type_witness, CartanType, CartanTypeReport, TypeWitness};
