//! Right-angled Coxeter groups and their embeddings into products of trees.
//!
//! The crate covers word combinatorics ([`group`]), proper colourings of the
//! commutation graph ([`coloring`]), Cayley-graph geometry and walls
//! ([`geometry`]), the isometric embedding `μ` and the bilipschitz
//! embedding `ψ` ([`embed`]), and brute-force verification suites
//! ([`harness`]).

pub mod coloring;
pub mod embed;
pub mod error;
pub mod geometry;
pub mod group;
pub mod harness;
pub mod matrix;
pub mod params;
pub mod tree;

pub use coloring::{chromatic_coloring, validate_coloring, Coloring};
pub use error::{Error, Result};
pub use geometry::{Ball, Reflection};
pub use group::{CommutationGraph, Gen, GroupDocument, GroupElement, Word};
pub use params::SeparationParams;
pub use tree::{product_distance, tree_distance, ProductPoint, TreeVertex};
