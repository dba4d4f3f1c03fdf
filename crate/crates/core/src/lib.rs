//! Certificates for lower bounds on the Colin de Verdière number of
//! complements of penny graphs.
//!
//! A penny realization (unit-diameter disk centers) yields a Euclidean
//! distance matrix `D`; the matrix `M = E - D` is a well-signed matrix for
//! the complement of the contact graph. This crate builds `M`, certifies the
//! three Colin de Verdière conditions numerically (with exact cross-checks
//! where coordinates are exact), and reports the implied corank bound.

pub mod cdv;
pub mod edm;
pub mod error;
pub mod graphs;
pub mod info;
pub mod numkernel;
pub mod penny;
pub mod sweep;

pub use cdv::{verify_theorem, CdvCertificate, TheoremReport, VerifyOptions};
pub use edm::{Edm, EdmClassification, EdmKind};
pub use error::{Error, Result};
pub use graphs::{FamilyClass, Graph};
pub use info::{edm_info, EdmInfo};
pub use numkernel::{QuadRational, SymMatrix, TolerancePolicy};
pub use penny::{Family, Realization};
pub use sweep::{run_sweep, sweep_csv, SweepRow, SweepSummary};
