//! Finitely presented groups: coset enumeration, low-index subgroups,
//! Reidemeister–Schreier, abelianization, torsion and orientation tests,
//! maps onto Z and kernel sampling.

mod coset;
mod kernel;
mod lowindex;
mod presentation;
mod rs;
mod snf;
mod torsion;

pub use coset::{todd_coxeter, CosetTable, DEFAULT_MAX_COSETS};
pub use kernel::{kernel_sample, KernelSample};
pub use lowindex::{low_index_search, low_index_subgroups, LowIndexSearch, DEFAULT_MAX_INDEX, DEFAULT_NODE_BUDGET};
pub use presentation::{
    coxeter_presentation, cyclic_reduce, free_reduce, from_indices, inverse_word, letter_generator, to_indices,
    Presentation, Word,
};
pub use rs::{reidemeister_schreier, SubgroupPresentation, Transversal};
pub use snf::{abelianization, maps_to_z, relator_matrix, smith_normal_form, AbelianizationReport, Epimorphism, SmithForm};
pub use torsion::{
    is_torsion_free, orientation_preserving, parabolic_elements, parity_subgroup_generators, torsion_report,
    TorsionReport, TorsionWitness, PARABOLIC_ORDER_LIMIT,
};
