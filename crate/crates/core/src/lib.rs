//! Constructive colouring of graphs of maximum degree two with vertex-disjoint
//! `K4` blocks glued on top.
//!
//! [`driver::strong_color`] 4-colours every instance whose host has at most
//! one long odd cycle or at most three triangles;
//! [`driver::partial_color_best`] 4-colours all but at most `|V|/22`
//! vertices of any instance.

pub mod driver;
pub mod generate;
pub mod graph;
pub mod io;
pub mod isr;
pub mod normalizer;
pub mod oracles;
pub mod transversal;
pub mod two_isr;

pub use driver::{partial_color_best, strong_color, verify, BoundReport, Claim, Route};
pub use graph::{build_host, glue_blocks, BlockSet, GluedInstance, PartialColoring, VertexId};
pub use oracles::Budget;
