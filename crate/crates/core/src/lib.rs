//! Cut finite element exterior calculus (CutFEEC) on level-set geometries.
//!
//! The crate assembles the pieces needed to solve the mixed Hodge-Laplace
//! problem on a domain that is immersed in a structured background mesh:
//!
//! * [`forms`] — pointwise exterior algebra in low dimension (wedge, Hodge
//!   star, traces and tangential/normal splittings relative to a facet),
//! * [`geometry`] — background mesh, level sets, active-mesh extraction and
//!   the stabilisation facet machinery,
//! * [`quadrature`] — triangle, cut-region and facet rules,
//! * [`spaces`] — lowest-order trimmed (Whitney) k-form spaces, coboundary
//!   matrices and mass matrices over the physical and active domains,
//! * [`ghost`] — the facet-based ghost penalty and the stabilised Gram
//!   matrices whose norm equivalence makes the method cut-robust,
//! * [`hodge`] — discrete harmonic forms, the saddle-point solver for the
//!   mixed system and conditioning diagnostics,
//! * [`problems`] — manufactured right-hand sides with closed-form fields.

pub mod error;
pub mod forms;
pub mod geometry;
pub mod ghost;
pub mod hodge;
pub mod linalg;
pub mod problems;
pub mod quadrature;
pub mod spaces;

pub use error::{Error, Result};

pub use nalgebra;
