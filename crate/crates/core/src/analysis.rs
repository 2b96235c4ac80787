//! Summary statistics over a count matrix, and counts by timescale band.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::TemporalGraph;
use crate::motif::{cell, CountMatrix, GridCell, MotifClass};
use crate::pipeline::count_all;
use crate::window::Delta;

/// Two-node motifs where a reply interrupts a repeated message.
pub const BLOCKING_CELLS: [GridCell; 3] = [cell(5, 1), cell(5, 2), cell(6, 2)];
/// Star motifs where the sender keeps messaging without waiting.
pub const NONBLOCKING_CELLS: [GridCell; 3] = [cell(4, 1), cell(4, 3), cell(6, 3)];
/// Cyclic triangles.
pub const CYCLIC_CELLS: [GridCell; 2] = [cell(2, 4), cell(3, 5)];
/// Star motif where the center switches to a new neighbour.
pub const SWITCH_CELL: GridCell = cell(4, 1);

/// Counts for `lower < δ <= upper`. The first band has no lower bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalCounts {
    pub lower: Option<Delta>,
    pub upper: Delta,
    pub counts: CountMatrix,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    /// Blocking cells over all 36 cells.
    pub blocking_fraction: Option<f64>,
    pub nonblocking_fraction: Option<f64>,
    /// `M41 / (M43 + M63)`.
    pub switch_ratio: Option<f64>,
    /// Cyclic triangles over all triangle motifs.
    pub cyclic_triangle_fraction: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub interval_counts: Vec<IntervalCounts>,
}

fn ratio(num: u128, den: u128) -> Option<f64> {
    (den != 0).then(|| num as f64 / den as f64)
}

fn sum(m: &CountMatrix, cells: &[GridCell]) -> u128 {
    cells.iter().map(|&c| m[c] as u128).sum()
}

pub fn analyze(m: &CountMatrix) -> AnalysisReport {
    let total = m.total();
    let triangles = m.restricted(|c| c == MotifClass::Triangle).total();
    AnalysisReport {
        blocking_fraction: ratio(sum(m, &BLOCKING_CELLS), total),
        nonblocking_fraction: ratio(sum(m, &NONBLOCKING_CELLS), total),
        switch_ratio: ratio(m[SWITCH_CELL] as u128, sum(m, &[cell(4, 3), cell(6, 3)])),
        cyclic_triangle_fraction: ratio(sum(m, &CYCLIC_CELLS), triangles),
        interval_counts: Vec::new(),
    }
}

/// Counts per timescale band for strictly increasing `deltas`. The first
/// band holds the full count at `deltas[0]`, each later one the difference
/// to the previous threshold.
pub fn timescales(graph: &TemporalGraph, deltas: &[Delta]) -> Result<Vec<IntervalCounts>> {
    if deltas.is_empty() {
        return Err(Error::InvalidParams("no timescales given".into()));
    }
    if let Some(w) = deltas.windows(2).find(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParams(format!(
            "timescales must be strictly increasing, got {} then {}",
            w[0], w[1]
        )));
    }
    let mut out = Vec::with_capacity(deltas.len());
    let mut prev: Option<(Delta, CountMatrix)> = None;
    for &d in deltas {
        let m = count_all(graph, d)?.matrix;
        let band = match prev {
            None => IntervalCounts {
                lower: None,
                upper: d,
                counts: m,
            },
            Some((lo, pm)) => IntervalCounts {
                lower: Some(lo),
                upper: d,
                counts: m.checked_sub(&pm)?,
            },
        };
        out.push(band);
        prev = Some((d, m));
    }
    Ok(out)
}
