//! Exact verification workbench for homogeneous selection in topological
//! settings.
//!
//! The crate builds subspace lattices over prime fields, realizes the
//! piecewise-linear map `f = e ∘ g` from the simplex on the atoms into `Q^d`
//! (barycentric subdivision, join vertex rule, generic rational embedding),
//! and checks the surrounding counting arguments with exact arithmetic:
//! atom/coatom expansion and its Corrádi lower bound, coatom cover counts
//! with certificates, homogeneous boxes, weighted coboundary expansion over
//! F_2 and box extraction in multipartite hypergraphs.

pub mod comparison;
pub mod coboundary;
pub mod complex;
pub mod error;
pub mod exact;
pub mod expander;
pub mod geometry;
pub mod hypergraph;
pub mod lattice;
pub mod pach;
pub mod sweep;

pub use error::{Error, Result};
