//! Finite-scale partition regularity.
//!
//! Upward-closed families over `[1..n]` are represented by their minimal
//! generators ([`Antichain`]). The crate builds the generator antichains of
//! the classical witness families (arithmetic progressions, Schur triples,
//! Folkman sum sets, solutions of linear systems), decides `Par_k`
//! membership by certified search, computes Rado-type thresholds, decides
//! Rado's columns condition exactly, and extracts monochromatic block
//! sequences. Every positive answer comes with a certificate that can be
//! re-checked independently.

pub mod antichain;
pub mod cli;
pub mod error;
pub mod exact;
pub mod extract;
pub mod io;
pub mod search;
pub mod set;
pub mod witnesses;

pub use antichain::{normalize_antichain, Antichain};
pub use error::{Error, Result};
pub use set::{Bound, ElemSet};

/// Exact rationals over machine integers; overflow is reported, not wrapped.
pub type Rational64 = exact::Frac<i64>;
pub type Rational128 = exact::Frac<i128>;
/// Exact rationals that never overflow.
pub type BigRational = exact::Frac<num_bigint::BigInt>;

pub type ColumnsPartition64 = witnesses::ColumnsPartition<i64>;
pub type ColumnsPartition128 = witnesses::ColumnsPartition<i128>;
pub type BigColumnsPartition = witnesses::ColumnsPartition<num_bigint::BigInt>;
