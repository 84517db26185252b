//! File formats: certificates, DIMACS export, and the threshold cache.

pub mod cache;
pub mod cert;
pub mod cnf;

pub use cache::{ThresholdCache, ThresholdCacheEntry, DEFAULT_CACHE_PATH};
pub use cert::{verify_certificate, Certificate, VerifyReport};
pub use cnf::{decode_model, export_cnf, parse_dimacs, validate_cnf, SatOutcome};
