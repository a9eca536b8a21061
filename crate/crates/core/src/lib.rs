//! Spanning surfaces for links drawn over Heegaard graphs.
//!
//! The pipeline: validate a [`model::HeegaardGraph`] and a
//! [`model::LinkDiagram`] over it, read off the homology presentation, solve
//! for an extension link that balances the diagram, then resolve crossings and
//! pair strand ends in the fat vertices to build the surface.

pub mod cli;
pub mod embedding;
pub mod extension;
pub mod format;
pub mod homology;
pub mod model;
pub mod plat;
pub mod render;
pub mod seifert;

pub use model::{
    component_walk, validate_diagram, validate_graph, Circle, Component, Crossing, CrossingEnd, Edge, Endpoint, Event,
    HeegaardGraph, Issue, LinkDiagram, Passage, Role, Side, Sign, Strand, ValidationReport, VertexId,
};
