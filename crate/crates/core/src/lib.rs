//! Classical and derived Hall algebras of quiver representations over prime fields.
//!
//! The crate is layered bottom-up:
//!
//! - [`fq`]: exact dense linear algebra over `F_p`.
//! - [`quiver`], [`hom`], [`catalog`]: the finitary abelian category of
//!   representations, its Hom/Ext/Aut data and a bounded catalog of iso classes.
//! - [`derived`]: bounded complexes, mapping cones and `Hom` in the derived
//!   category of a hereditary path algebra.
//! - [`lf`]: finite-support functions on locally finite homotopy types with
//!   push-forward and pullback.
//! - [`hall`], [`span`], [`verify`]: Hall numbers, the two product routes and
//!   the consistency sweeps.

pub mod catalog;
pub mod derived;
pub mod error;
pub mod fq;
pub mod hall;
pub mod hom;
pub mod io;
pub mod lf;
pub mod quiver;
pub mod span;
pub mod verify;

pub use catalog::{Catalog, ClassId};
pub use error::{HallError, Result};
pub use fq::{FqMatrix, FqScalar, FqSubspace};
pub use quiver::{Arrow, Quiver, RepMorphism, Representation};
