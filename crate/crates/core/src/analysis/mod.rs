//! Norms, growth profiles and the numeric function-class tests.

pub mod fit;
mod classes;
mod growth;
mod norm;

pub use classes::{
    bmo_oscillation_estimate, bmoa_section_test, cesaro_sups, ess_sup_estimate, h2_partial_norm,
    hankel_section_norms, hinf_test, SupEstimate,
};
pub use growth::{growth_profile, GrowthClass, GrowthProfile};
pub use norm::{matrix_norm, op_norm, DENSE_SVD_LIMIT};
