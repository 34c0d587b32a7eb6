//! Construction of network protection codes: GF(2^μ) arithmetic, BCH
//! codes, propagation rules, bounds and the bundled catalog.

mod bch;
mod bounds;
mod catalog;
mod derive;
mod field;
mod linear;

pub use bch::{
    bch_dimension, bch_generator_polynomial, closed_form_max_distance, construct_bch,
    cyclic_systematic_generator, cyclotomic_cosets, multiplicative_order, BchPolynomial,
    VERIFY_PATTERN_BUDGET,
};
pub use bounds::{check_bounds, check_parameters, hamming_ball, BoundReport};
pub use catalog::{Catalog, CatalogEntry, CatalogQuery, Source};
pub use derive::{derive, derive_at, heaviest_coset_leader, Rule, EXTEND_MAX_REDUNDANCY};
pub use field::{
    format_polynomial, primitive_polynomial, FieldElement, GaloisField, PRIMITIVE_POLYNOMIALS,
};
pub use linear::{LinearCode, Provenance, DISTANCE_PATTERN_BUDGET};

/// Systematic generator of the `[15,11,3]` BCH code with `g(x) = x^4 + x + 1`.
pub const BCH_15_11_GENERATOR: &str = "\
100000000001100
010000000000110
001000000000011
000100000001101
000010000001010
000001000000101
000000100001110
000000010000111
000000001001111
000000000101011
000000000011001";

/// Systematic generator of a `[15,8,4]` code.
pub const CODE_15_8_GENERATOR: &str = "\
100000001101000
010000000110100
001000000011010
000100000001101
000010001101110
000001000110111
000000101110011
000000011010001";
