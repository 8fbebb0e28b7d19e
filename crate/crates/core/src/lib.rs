//! Length sets and delta sets of two-generator numerical semigroups under
//! `ℓᵗ` lengths, the curve `μₜ` that governs their asymptotics, and tools to
//! certify and check perspicacious norm parameters.

pub mod mu;
pub mod norm;
pub mod perspicacity;
pub mod real;
pub mod roots;
pub mod scan;
pub mod semigroup;

pub use norm::{IntegerNorm, NormError, NormParameter};
pub use perspicacity::{
    build_certificate, classify_t, special_t, Certificate, CertificateError, CertificateStatus, Classification,
    RationalR0Witness,
};
pub use scan::{density_report, scan, verify_certificate, ScanConfig, ScanError, ScanReport, Scanner};
pub use semigroup::{Factorization, GapRecord, LengthSet, NumericalSemigroup, SemigroupError};
