//! Eigenvalues of the sinc-kernel time–frequency limiting operator `Q_c`.
//!
//! The crate has two sides that are kept strictly independent:
//!
//! * [`approx`] evaluates closed-form approximations of `λ_n(c)` built from
//!   complete elliptic integrals (the `λ̃`, `λ̂` and Widom formulas, the
//!   `√q̃`/`χ̃` estimates, and the associated bounds).
//! * [`oracle`] computes reference values from scratch: a Legendre–Galerkin
//!   solver for the prolate Sturm–Liouville problem, a Nyström discretisation
//!   of `Q_c`, and a log-domain continuation that reaches `λ_n ~ 1e-113`.
//!
//! [`repro`] compares the two against embedded reference tables and runs the
//! invariant suites; the `prolate` binary is a thin CLI over it.

// NaN-rejecting guards are written as `!(x > 0.0)` on purpose
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod approx;
pub mod error;
pub mod linalg;
pub mod oracle;
pub mod repro;
pub mod roots;
pub mod special;

pub use error::{Error, Result};
pub use oracle::{LogLambda, ProlateEigenpair, SpectralPoint, Tier};
