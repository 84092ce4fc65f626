//! Exact computations on finite point sets in real projective 3-space with
//! few ordinary planes.
//!
//! All geometry is done over cyclotomic fields ([`Scalar`]), so incidence and
//! coplanarity tests are exact. The main entry points are
//! [`census::plane_census`], [`dual::build_gamma`],
//! [`structure::recover_pencil`] and [`structure::classify_extremal`].

#![allow(clippy::needless_range_loop)]

pub mod census;
pub mod circles;
pub mod dual;
pub mod error;
pub mod generators;
pub mod geometry;
pub mod linalg;
pub mod parallel;
pub mod poly;
pub mod quadrics;
pub mod roots;
pub mod scalar;
pub mod structure;

pub use census::{plane_census, validate, CensusReport, ValidationReport};
pub use error::{Error, Result};
pub use generators::{ExtremalKind, ExtremalSpec, PointSet};
pub use geometry::{det4, plane_through, project_from, ProjLine, ProjPlane, ProjPoint};
pub use scalar::Scalar;
