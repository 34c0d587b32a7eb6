//! Exact linear algebra over the two-element field.
//!
//! All types are immutable after construction except through explicit
//! `&mut` methods, and every operation here is a pure function.

mod distance;
mod echelon;
mod erasure;
mod matrix;

pub use distance::{
    min_distance, min_distance_by_codewords, min_distance_by_parity, MinDistance,
    ENUMERATION_MAX_K,
};
pub use echelon::{
    is_systematic, parity_check_from_generator, rank, rref, systematic_form, Echelon, Systematic,
};
pub use erasure::{solve_erasures, ErasurePlan};
pub use matrix::{BitMatrix, CodewordVector};
