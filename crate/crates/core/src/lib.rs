//! Exact computation of transition matrices and splitting types of the
//! principal-parts bundles `P^k(O(n))` on the projective line, over the
//! rationals or any prime field.
//!
//! * [`field`]: exact scalars and binomial coefficients.
//! * [`laurent`]: Laurent polynomials and matrices over `F[t, 1/t]`.
//! * [`jet`]: the explicit transition and base-change matrices.
//! * [`splitting`]: certified Birkhoff factorization and a section-counting
//!   oracle.
//! * [`binomsys`]: the binomial linear systems that build explicit splitting
//!   isomorphisms, and their determinant identities.
//! * [`report`]: serializable reports, parameter sweeps and the verification
//!   suites behind the `jetsplit` binary.

pub mod binomsys;
pub mod error;
pub mod field;
pub mod jet;
pub mod laurent;
pub mod linalg;
pub mod report;
pub mod splitting;

pub use error::{Error, Result};
pub use field::{binomial, reduce, FieldElement, FieldSpec};
pub use jet::{
    balancing_factors, left_transition, right_transition, untwisted_transition, JetParams, ModuleSide,
};
pub use laurent::{random_unimodular, LaurentMatrix, LaurentPoly, PolySide};
pub use splitting::{
    birkhoff_split, h0_dimension, oracle_split, verify_certificate, BirkhoffCertificate, SplittingType,
};
