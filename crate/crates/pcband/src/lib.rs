//! Band structure and spectral-gap analysis for photonic crystals with
//! one-dimensional periodicity and separable two-dimensional permittivity.
//!
//! The crate answers one question in several guises: for which frequencies
//! does a periodic dielectric admit bounded wave solutions? In 1D this is the
//! classical Hill problem `E'' + lambda u E + rho E = 0` whose spectrum is
//! read off the discriminant (the trace of the monodromy matrix). In 2D, a
//! permittivity of the form `eps(x1, x2) = eps1(x1) + eps2(x2)` lets products
//! of 1D Floquet solutions certify membership in the 2D spectrum, and a
//! plane-wave Galerkin solver provides an independent route for general
//! profiles.
//!
//! # Modules
//!
//! - [`profiles`]: strictly positive trigonometric-polynomial permittivity
//!   profiles, their derivatives, and certified regularity bounds.
//! - [`hill1d`]: monodromy, discriminant, Floquet eigenvalues, band intervals
//!   and spectral gaps of the weighted 1D problem, plus a finite-difference
//!   reference eigensolver.
//! - [`liouville`]: the change of variables that flattens a weighted problem
//!   into a constant-weight one, with the transformed period and potential.
//! - [`constants`]: the explicit constant ledger driving the certified
//!   high-frequency window, the integer shift window check, and a dual report
//!   on the transformed-period displacement bounds.
//! - [`separable2d`]: spectrum certification along the diagonal ray for
//!   separable 2D profiles via shifted 1D problem pairs.
//! - [`planewave2d`]: plane-wave expansion of the 2D Bloch eigenproblem,
//!   band intervals over the Brillouin zone, and overlap/monotonicity checks.
//! - [`cli`]: the `pcband` command line (`bands1d`, `gaps2d`, `planewave`,
//!   `verify`, `constants`) with deterministic JSON/CSV reports.
//!
//! # Runnable examples
//!
//! Each major capability has a runnable walkthrough under `examples/`:
//!
//! ```text
//! cargo run --release -p pcband --example bands_1d
//! cargo run --release -p pcband --example liouville_transform
//! cargo run --release -p pcband --example constants_ledger
//! cargo run --release -p pcband --example period_bound_check
//! cargo run --release -p pcband --example separable_gap_report
//! cargo run --release -p pcband --example planewave_bands
//! cargo run --release -p pcband --example near_homogeneous
//! cargo run --release -p pcband --example shift_lemma_fuzz
//! ```

// Guards are written `!(x > 0.0)` on purpose: the negation also rejects NaN,
// which `x <= 0.0` would wave through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constants;
pub mod error;
pub mod hill1d;
pub mod liouville;
pub mod planewave2d;
pub mod profiles;
pub mod separable2d;

pub mod cli;

mod ode;
mod quadrature;
mod roots;

pub use error::{Error, Result};
