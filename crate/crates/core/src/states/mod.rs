//! Parameter validation, domain classification and Fock representations.

mod fock;
mod params;

pub use fock::{
    fock_vector, fock_vector_with, ln_rho_real, ln_rho_table, normalization, normalization_with, overlap, rho,
    FockOptions, FockVector, StateSpec, DEFAULT_FOCK_CAP, DEFAULT_FOCK_TOL,
};
pub use params::{
    classify, classify_point, validate, DomainClass, DomainKind, ParameterSet, Rule, Side, Violation, CIRCLE_TOL,
    COALESCE_TOL,
};
