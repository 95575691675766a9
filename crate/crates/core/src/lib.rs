//! Generalized connections on finite graphs.
//!
//! The path groupoid of an embedded graph, group-valued functors on it
//! (holonomies), the gauge and automorphism actions on those functors, graph
//! refinements with their restriction maps, and product Haar integration of
//! cylindrical functions.

pub mod connection;
pub mod error;
pub mod format;
pub mod group;
pub mod groupoid;
pub mod measure;
pub mod projective;
pub mod symmetry;

pub use connection::{
    discretize_smooth, random_connection, GeneralizedConnection, SmoothConnectionSpec,
};
pub use error::{Error, Result};
pub use group::{GroupDescriptor, GroupElement, GroupKind};
pub use groupoid::{EmbeddedGraph, OrientedEdge, PathWord, SignedEdge, Vertex};
pub use measure::{integrate, Budget, CylindricalFunction, IntegralResult, InvarianceReport, Mode};
pub use projective::Refinement;
pub use symmetry::{GaugeTransformation, GroupoidAutomorphism};
