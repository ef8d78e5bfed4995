//! Interval certification of the tracked endpoint and the resulting verdict.

mod interval;
mod krawczyk;
mod verdict;

pub use interval::Interval;
pub use krawczyk::{certify_endpoint, krawczyk_certify, CertifiedBox};
pub use verdict::{verdict_from_interval, Verdict, VerdictKind};
