//! Exact arithmetic for finitely generated abelian groups.

mod group;
mod matrix;
mod snf;

pub use group::{
    from_presentation, FgAbGroup, GroupHom, Quotient, QuotientGroup, Subgroup,
    ENUMERATION_BOUND,
};
pub(crate) use group::reduce_rows;
pub use matrix::{int, Int, IntMatrix};
pub use snf::{kernel_basis, snf, solve, SnfDecomposition};

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum AbGroupError {
    #[error("not in invariant-factor form: {0}")]
    NotNormalized(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("ill-defined homomorphism at ({row}, {col}): {detail}")]
    IllDefined {
        row: usize,
        col: usize,
        detail: String,
    },
    #[error("group of order {order} exceeds the enumeration bound {bound}")]
    OrderTooLarge { order: Int, bound: u64 },
    #[error("cannot enumerate an infinite group")]
    Infinite,
}
