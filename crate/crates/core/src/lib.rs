//! Finite p-groups of nilpotency class 2 through their commutator forms.
//!
//! A class-2 group whose center equals its derived subgroup is captured, up
//! to isoclinism, by the alternating bilinear map that commutation induces
//! on the central quotient. This crate builds the classical families (the
//! unitriangular groups over GF(p^m), the free-est special groups on n
//! generators, and their central quotients), computes conjugacy structure
//! from the form, reduces central subspaces to canonical shape with an
//! explicit base change or a commuting-pair witness, decides isoclinism at
//! desk scale, and packages exhaustive verification sweeps behind a CLI.
//!
//! Everything is immutable after construction, so values can be shared and
//! sent across threads freely; sweeps partition by index range and all
//! aggregations are order-independent.

pub mod budget;
pub mod canon;
pub mod field;
pub mod form;
pub mod group;
pub mod isoclinism;
pub mod linalg;
pub mod verify;

pub use budget::Budgets;
pub use field::{ExtField, FieldError, PrimeField};
pub use form::{AlternatingMap, BreadthProfile, FormError};
pub use group::{GroupElement, GroupError, GroupModel};
pub use isoclinism::{ClassLabel, Fingerprint, IsoclinismCertificate, IsoclinismOutcome};
pub use linalg::{enumerate_subspaces, gaussian_binomial, Matrix, Subspace, Vector};
pub use verify::{VerificationReport, VerifyError};
