//! Mahler measures of real-cyclotomic polynomials, partial Dirichlet
//! L-values, exact coefficient tables, and end-to-end verification of the
//! explicit identities connecting them, plus integer-relation probes of
//! the linear-independence conjectures behind the refined identities.
//!
//! Layout:
//! - [`exact`]: cyclotomic fields Q(zeta_d) and the polynomials Phi_N, Psi_N
//! - [`characters`]: Dirichlet characters with exact values
//! - [`num`]: configurable-precision reals/complexes with error bounds
//! - [`clausen`]: accelerated Clausen function Cl_2
//! - [`lseries`]: partial L'-values, character sums, classical L-series,
//!   generalized Bernoulli numbers, functional-equation cross-check
//! - [`mahler`]: Smyth angle formula, assembled m(f_N), m(f_N*), and two
//!   independent quadrature oracles
//! - [`coefficients`]: exact mu/delta/epsilon/r tables and Euler relations
//! - [`verify`]: identity checks and suite orchestration
//! - [`relprobe`]: LLL-based integer-relation search over L-value vectors
//! - [`report`]: serialization of reports and certificates

pub mod error;
pub mod num;

pub mod exact {
    pub mod cyc;
    pub mod poly;
}

pub mod characters;
pub mod coefficients;
pub mod relprobe;
pub mod report;
pub mod verify;
pub mod clausen;
pub mod lseries;

pub mod mahler {
    pub mod laurent;
    pub mod measure;
    pub mod quad;
}

pub use error::{Error, Result};
