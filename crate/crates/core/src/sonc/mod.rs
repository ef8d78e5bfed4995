//! Sums of nonnegative circuit polynomials (SONC) for nonseparable supports.

mod certificate;
mod circuit;
mod delta;

pub use certificate::{sonc_certificate, NEAR_BOUNDARY, verify_certificate, SoncCertificate, VerificationReport};
pub use circuit::{circuit_number, extended_circuit_decomposition, is_circuit_copositive, CircuitPolynomial};
pub use delta::{solve_delta, DeltaSolution};
