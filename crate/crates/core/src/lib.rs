//! Exact counting of δ-temporal motifs with three edges on at most three
//! nodes, in temporal directed graphs.

pub mod analysis;
pub mod error;
pub mod graph;
pub mod instrument;
pub mod motif;
pub mod pipeline;
pub mod star;
mod sweep;
pub mod triangle;
pub mod verify;
pub mod window;

pub use analysis::{analyze, timescales, AnalysisReport, IntervalCounts};
pub use error::{Error, Result};
pub use graph::{
    enumerate_triangles, load_edge_list, open_edge_list, static_projection, write_edge_list, EdgeId, IngestStats,
    NodeId, StaticGraph, TemporalEdge, TemporalGraph, Timestamp,
};
pub use instrument::{Counted, InstrumentationReport, Work};
pub use motif::{catalog_csv, classify, grid_index, grid_motif, CountMatrix, GridCell, Motif, MotifClass};
pub use pipeline::{count_all, count_motifs, Algorithm, ClassSet};
pub use verify::{gen_random, gen_worstcase, oracle_count};
pub use window::Delta;
