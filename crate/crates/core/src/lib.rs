//! Exact intersection pairings and symplectic volumes of polygon spaces.
//!
//! A length vector `α = (α_1, …, α_m)` of positive rationals determines the
//! space `M(α)` of closed spatial polygons with those side lengths. This
//! crate evaluates the integers `∫_{M(α)} c_1^{k_1} ⋯ c_m^{k_m}` with
//! `Σ k_i = m − 3` through four independent formulas, computes the volume
//! exactly, and ties the two together through mixed partial derivatives.
//!
//! All arithmetic is exact. Subset enumerations run over `2^n` masks in
//! Gray-code order on scaled integers and split into fixed chunks, so
//! results do not depend on the number of worker threads.
//!
//! ```
//! use polyspace::{pairing_explicit, PairingQuery};
//!
//! let q = PairingQuery::new("4,3,4,3,4".parse()?, "0,0,0,0,2".parse()?)?;
//! assert_eq!(pairing_explicit(&q).value, (-3).into());
//! # Ok::<(), polyspace::Error>(())
//! ```

pub mod error;
pub mod lengths;
pub mod oracles;
pub mod pairings;
pub mod triangular;
pub mod volume;
mod walk;

pub use error::{Error, Result};
pub use lengths::{
    chamber_data, chamber_data_with, find_degeneracy, is_empty, is_generic, parse_rational,
    ChamberData, ExponentVector, LengthVector, Rational, SignVector,
};
pub use oracles::{
    alternating_binomial_convolution, binomial, equilateral_binomial_identity,
    equilateral_pairing, pairing_konno_takakura, pairing_recursive, pairing_recursive_with_shift,
    pairing_yoshida, rho, sigma1_pairing,
};
pub use pairings::{
    compositions, normalize, pairing_explicit, pairing_table, Engine, Normalized, PairingQuery,
    PairingResult,
};
pub use triangular::{
    count_negative_subsets, enumerate_negative_subsets, enumerate_triangular,
    enumerate_triangular_with, is_triangular, signed_sum, NegativeSubset, NegativeSubsets,
    SubsetMask, TriangularFamily, TriangularMember,
};
pub use volume::{
    volume_exact, volume_exact_with, volume_mixed_partial, volume_witten_numeric, SeriesEstimate,
    VolumeResult,
};
pub use walk::Execution;
