//! Exact arithmetic for the dynamics of self-maps of projective space.
//!
//! The library works with degree-d morphisms f: P^N -> P^N given by
//! homogeneous integer forms.  It certifies that the forms have no common
//! zero (so f really is a morphism), computes Weil and canonical heights
//! with explicit error bounds, enumerates the complete set of rational
//! preperiodic points, builds functional graphs over finite fields,
//! constructs Lattes maps from elliptic curves, and extends the duplication
//! map of a plane cubic to a self-map of the plane.
//!
//! Everything downstream of the validity certificate is exact integer
//! arithmetic; floating point appears only in height values, always paired
//! with a rigorous error bound.

pub mod counting;
pub mod error;
pub mod factor;
pub mod finite;
pub mod forms;
pub mod fp_poly;
pub mod heights;
pub mod lattes;
pub mod linalg;
pub mod macaulay;
pub mod morphism;
pub mod projective;
pub mod rational;
pub mod resultant;
pub mod roots;
pub(crate) mod wire;

pub use error::{Error, Result};
pub use morphism::{ProjMorphism, ValidityCertificate};
pub use projective::{frobenius, reduce_mod_p, FiniteField, FqElem, ProjPointF, ProjPointQ};
