//! h-hop node coloring for wireless sensor networks. Simulates the SERENA
//! distributed protocol and computes optimal periodic grid colorings. The
//! `reduction` module builds the h-hop instance of a plain coloring problem.

pub mod cli;
pub mod error;
pub mod experiment;
pub mod graph;
pub mod priority;
pub mod reduction;
pub mod serena;
pub mod validity;
pub mod vector;

pub use error::{Error, Result};
pub use graph::{build_grid, GridSpec, HopDistance, Node, NodeId, Range, Topology};
pub use validity::{check_h_hop, chromatic_number_bruteforce, power_graph, Color, Coloring};
