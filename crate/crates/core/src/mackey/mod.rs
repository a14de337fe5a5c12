//! Mackey functors for cyclic `p`-groups and their morphisms.

mod functor;
mod hom;
mod iso;
mod json;

pub use functor::{is_prime, pow, DirectSum, MackeyFunctor, Violation};
pub use hom::{
    cokernel_mackey, is_split, kernel_mackey, mackey_hom_group, HomGroup, MackeyHom,
    ShortExactSeq, SplitVerdict,
};
pub use iso::{invariants, iso_test, Invariant, IsoConfig, IsoVerdict};

use thiserror::Error;

use crate::abgroup::AbGroupError;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum MackeyError {
    #[error("malformed diagram: {0}")]
    Shape(String),
    #[error("axioms fail: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("functors live over different groups: C_{}^{} vs C_{}^{}", .left.0, .left.1, .right.0, .right.1)]
    GroupMismatch {
        left: (u64, usize),
        right: (u64, usize),
    },
    #[error("not a morphism of Mackey functors: {0}")]
    NotNatural(String),
    #[error("induced structure map does not exist: {0}")]
    InducedMapFailure(String),
    #[error("not a short exact sequence: {0}")]
    NotExact(String),
    #[error(transparent)]
    AbGroup(#[from] AbGroupError),
}

#[cfg(test)]
mod tests;
