//! Abstract motifs, the canonical labelling of edge sequences and the 6x6
//! grid of all 2- and 3-node, 3-edge motifs.
//!
//! Every grid motif starts with the edge `1 > 2`. The row fixes the second
//! edge and the column fixes the third:
//!
//! ```text
//! row:     1      2      3      4      5      6
//! second:  3>2    2>3    3>1    1>3    2>1    1>2
//!
//! col:     1      2      3      4      5      6
//! third:   1>2    2>1    1>3    3>1    2>3    3>2
//! ```
//!
//! This places the four 2-node motifs in the bottom-left corner (rows 5-6,
//! columns 1-2) and the eight triangles in rows 1-2 x columns 3-4 and
//! rows 3-4 x columns 5-6. The remaining 24 cells are stars.

use std::fmt;
use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::TemporalEdge;

/// Node label inside a motif pattern, starting at 1.
pub type Label = u8;

/// Second edge of each grid row.
pub const SECOND_EDGE_BY_ROW: [(Label, Label); 6] = [(3, 2), (2, 3), (3, 1), (1, 3), (2, 1), (1, 2)];
/// Third edge of each grid column.
pub const THIRD_EDGE_BY_COL: [(Label, Label); 6] = [(1, 2), (2, 1), (1, 3), (3, 1), (2, 3), (3, 2)];

/// An ordered edge pattern over canonically labelled nodes.
///
/// Labels are assigned in order of first appearance, so two edge sequences
/// match the same motif exactly when their patterns are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Motif {
    pattern: Vec<(Label, Label)>,
    nodes: usize,
}

impl Motif {
    /// Relabels an ordered list of directed edges by first appearance.
    pub fn from_pairs<T: PartialEq + Copy + fmt::Debug>(edges: &[(T, T)]) -> Result<Motif> {
        if edges.is_empty() {
            return Err(Error::NotAMotif("empty edge list".into()));
        }
        let mut seen: Vec<T> = Vec::new();
        let mut label = |x: T| -> Label {
            match seen.iter().position(|&y| y == x) {
                Some(i) => (i + 1) as Label,
                None => {
                    seen.push(x);
                    seen.len() as Label
                }
            }
        };
        let mut pattern = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a == b {
                return Err(Error::NotAMotif(format!("self-loop on {a:?}")));
            }
            pattern.push((label(a), label(b)));
        }
        let nodes = seen.len();
        if !connected(&pattern, nodes) {
            return Err(Error::NotAMotif("induced static graph is disconnected".into()));
        }
        Ok(Motif { pattern, nodes })
    }

    pub fn pattern(&self) -> &[(Label, Label)] {
        &self.pattern
    }

    pub fn num_edges(&self) -> usize {
        self.pattern.len()
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes
    }
}

impl fmt::Display for Motif {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (a, b)) in self.pattern.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{a}>{b}")?;
        }
        Ok(())
    }
}

fn connected(pattern: &[(Label, Label)], nodes: usize) -> bool {
    let mut parent: Vec<usize> = (0..=nodes).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        parent[x] = r;
        r
    }
    for &(a, b) in pattern {
        let (ra, rb) = (find(&mut parent, a as usize), find(&mut parent, b as usize));
        parent[ra] = rb;
    }
    let root = find(&mut parent, 1);
    (2..=nodes).all(|x| find(&mut parent, x) == root)
}

/// Canonical motif of a time-ordered sequence of temporal edges.
pub fn classify(edges: &[TemporalEdge]) -> Result<Motif> {
    if let Some(w) = edges.windows(2).find(|w| (w[0].t, w[0].seq) >= (w[1].t, w[1].seq)) {
        return Err(Error::NotAMotif(format!(
            "edges not time-ordered at t={} seq={}",
            w[1].t, w[1].seq
        )));
    }
    let pairs: Vec<_> = edges.iter().map(|e| (e.src, e.dst)).collect();
    Motif::from_pairs(&pairs)
}

/// Cell `M(row, col)` of the motif grid, both 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridCell {
    row: u8,
    col: u8,
}

impl GridCell {
    pub fn new(row: u8, col: u8) -> Result<GridCell> {
        if !(1..=6).contains(&row) || !(1..=6).contains(&col) {
            return Err(Error::OutOfGrid(format!("cell ({row}, {col})")));
        }
        Ok(GridCell { row, col })
    }

    pub fn row(self) -> u8 {
        self.row
    }

    pub fn col(self) -> u8 {
        self.col
    }

    /// Row-major offset in `0..36`.
    pub fn offset(self) -> usize {
        (self.row as usize - 1) * 6 + (self.col as usize - 1)
    }

    /// All 36 cells in row-major order.
    pub fn all() -> impl Iterator<Item = GridCell> {
        (1..=6u8).flat_map(|row| (1..=6u8).map(move |col| GridCell { row, col }))
    }
}

impl fmt::Display for GridCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "M{},{}", self.row, self.col)
    }
}

/// Shorthand for a cell known to be in range.
pub(crate) const fn cell(row: u8, col: u8) -> GridCell {
    GridCell { row, col }
}

pub fn grid_motif(cell: GridCell) -> Motif {
    let pattern = vec![
        (1, 2),
        SECOND_EDGE_BY_ROW[cell.row as usize - 1],
        THIRD_EDGE_BY_COL[cell.col as usize - 1],
    ];
    let nodes = if pattern.iter().any(|&(a, b)| a == 3 || b == 3) { 3 } else { 2 };
    Motif { pattern, nodes }
}

pub fn grid_index(motif: &Motif) -> Result<GridCell> {
    let p = motif.pattern();
    if p.len() != 3 || motif.num_nodes() > 3 {
        return Err(Error::OutOfGrid(format!(
            "{} edges on {} nodes",
            p.len(),
            motif.num_nodes()
        )));
    }
    let row = SECOND_EDGE_BY_ROW.iter().position(|&e| e == p[1]);
    let col = THIRD_EDGE_BY_COL.iter().position(|&e| e == p[2]);
    match (p[0], row, col) {
        ((1, 2), Some(r), Some(c)) => Ok(GridCell {
            row: r as u8 + 1,
            col: c as u8 + 1,
        }),
        _ => Err(Error::OutOfGrid(motif.to_string())),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MotifClass {
    TwoNode,
    Star,
    Triangle,
}

impl MotifClass {
    pub fn name(self) -> &'static str {
        match self {
            MotifClass::TwoNode => "two-node",
            MotifClass::Star => "star",
            MotifClass::Triangle => "triangle",
        }
    }
}

pub fn motif_class(motif: &Motif) -> Result<MotifClass> {
    grid_index(motif)?;
    if motif.num_nodes() == 2 {
        return Ok(MotifClass::TwoNode);
    }
    let mut pairs: Vec<(Label, Label)> = motif
        .pattern()
        .iter()
        .map(|&(a, b)| (a.min(b), a.max(b)))
        .collect();
    pairs.sort_unstable();
    pairs.dedup();
    Ok(if pairs.len() == 3 {
        MotifClass::Triangle
    } else {
        MotifClass::Star
    })
}

/// Class of a grid cell; the grid is fixed so this cannot fail.
pub fn cell_class(cell: GridCell) -> MotifClass {
    motif_class(&grid_motif(cell)).expect("grid motifs are in the grid")
}

/// Instance counts for all 36 grid motifs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountMatrix {
    counts: [[u64; 6]; 6],
}

impl CountMatrix {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_rows(counts: [[u64; 6]; 6]) -> Self {
        CountMatrix { counts }
    }

    pub fn rows(&self) -> &[[u64; 6]; 6] {
        &self.counts
    }

    pub fn get(&self, cell: GridCell) -> u64 {
        self.counts[cell.row as usize - 1][cell.col as usize - 1]
    }

    pub fn set(&mut self, cell: GridCell, value: u64) {
        self.counts[cell.row as usize - 1][cell.col as usize - 1] = value;
    }

    pub fn add(&mut self, cell: GridCell, n: u64) -> Result<()> {
        let slot = &mut self.counts[cell.row as usize - 1][cell.col as usize - 1];
        *slot = slot.checked_add(n).ok_or(Error::Overflow)?;
        Ok(())
    }

    /// Elementwise sum.
    pub fn merge(&mut self, other: &CountMatrix) -> Result<()> {
        for c in GridCell::all() {
            self.add(c, other.get(c))?;
        }
        Ok(())
    }

    /// Elementwise `self - other`; fails if any cell would go negative.
    pub fn checked_sub(&self, other: &CountMatrix) -> Result<CountMatrix> {
        let mut out = CountMatrix::zero();
        for c in GridCell::all() {
            let v = self.get(c).checked_sub(other.get(c)).ok_or_else(|| {
                Error::Invariant(format!("{c}: {} < {}", self.get(c), other.get(c)))
            })?;
            out.set(c, v);
        }
        Ok(out)
    }

    pub fn total(&self) -> u128 {
        GridCell::all().map(|c| self.get(c) as u128).sum()
    }

    /// Keeps only the cells of the given classes.
    pub fn restricted(&self, keep: impl Fn(MotifClass) -> bool) -> CountMatrix {
        let mut out = CountMatrix::zero();
        for c in GridCell::all().filter(|&c| keep(cell_class(c))) {
            out.set(c, self.get(c));
        }
        out
    }

    /// `(cell, count)` in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (GridCell, u64)> + '_ {
        GridCell::all().map(move |c| (c, self.get(c)))
    }
}

impl Index<GridCell> for CountMatrix {
    type Output = u64;

    fn index(&self, cell: GridCell) -> &u64 {
        &self.counts[cell.row as usize - 1][cell.col as usize - 1]
    }
}

/// The grid as CSV: `row,col,pattern,class`, one line per cell.
pub fn catalog_csv() -> String {
    let mut out = String::from("row,col,pattern,class\n");
    for c in GridCell::all() {
        out.push_str(&format!(
            "{},{},{},{}\n",
            c.row,
            c.col,
            grid_motif(c),
            cell_class(c).name()
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edges(list: &[(u32, u32)]) -> Vec<TemporalEdge> {
        list.iter()
            .enumerate()
            .map(|(i, &(src, dst))| TemporalEdge {
                src,
                dst,
                t: i as i64 + 1,
                seq: i as u64,
            })
            .collect()
    }

    #[test]
    fn classify_relabels_by_first_appearance() {
        let m = classify(&edges(&[(7, 9), (7, 9), (9, 7)])).unwrap();
        assert_eq!(m.pattern(), &[(1, 2), (1, 2), (2, 1)]);
        assert_eq!(m.num_nodes(), 2);

        let m = classify(&edges(&[(3, 5), (3, 8), (3, 5)])).unwrap();
        assert_eq!(m.pattern(), &[(1, 2), (1, 3), (1, 2)]);
        assert_eq!(m.num_nodes(), 3);
    }

    #[test]
    fn four_node_motif_is_not_in_grid() {
        let m = classify(&edges(&[(1, 2), (3, 4), (1, 3)])).unwrap();
        assert_eq!(m.num_nodes(), 4);
        assert!(matches!(grid_index(&m), Err(Error::OutOfGrid(_))));
        assert!(motif_class(&m).is_err());
    }

    #[test]
    fn disconnected_and_unordered_inputs_are_rejected() {
        assert!(matches!(
            classify(&edges(&[(1, 2), (3, 4)])),
            Err(Error::NotAMotif(_))
        ));
        let mut e = edges(&[(1, 2), (2, 3)]);
        e.swap(0, 1);
        assert!(classify(&e).is_err());
    }

    #[test]
    fn grid_round_trips() {
        for c in GridCell::all() {
            assert_eq!(grid_index(&grid_motif(c)).unwrap(), c);
        }
        let distinct: std::collections::HashSet<_> = GridCell::all().map(grid_motif).collect();
        assert_eq!(distinct.len(), 36);
    }

    #[test]
    fn cell_validation() {
        assert!(GridCell::new(0, 1).is_err());
        assert!(GridCell::new(6, 7).is_err());
        assert_eq!(GridCell::new(6, 6).unwrap().offset(), 35);
    }

    #[test]
    fn class_examples() {
        let class = |p: &[(u8, u8)]| motif_class(&Motif::from_pairs(p).unwrap()).unwrap();
        assert_eq!(class(&[(1, 2), (2, 1), (1, 2)]), MotifClass::TwoNode);
        assert_eq!(class(&[(1, 2), (1, 3), (3, 1)]), MotifClass::Star);
        assert_eq!(class(&[(1, 2), (1, 3), (2, 3)]), MotifClass::Triangle);
    }

    #[test]
    fn class_tally() {
        let mut tally = std::collections::HashMap::new();
        for c in GridCell::all() {
            *tally.entry(cell_class(c)).or_insert(0) += 1;
        }
        assert_eq!(tally[&MotifClass::TwoNode], 4);
        assert_eq!(tally[&MotifClass::Star], 24);
        assert_eq!(tally[&MotifClass::Triangle], 8);
    }

    #[test]
    fn matrix_arithmetic() {
        let mut a = CountMatrix::zero();
        a.add(cell(1, 1), 3).unwrap();
        let mut b = a;
        b.merge(&a).unwrap();
        assert_eq!(b[cell(1, 1)], 6);
        assert_eq!(b.checked_sub(&a).unwrap(), a);
        assert!(a.checked_sub(&b).is_err());
        a.set(cell(2, 2), u64::MAX);
        assert!(matches!(a.add(cell(2, 2), 1), Err(Error::Overflow)));
    }

    #[test]
    fn catalog_has_all_cells() {
        let csv = catalog_csv();
        assert_eq!(csv.lines().count(), 37);
        assert!(csv.contains("\n1,1,1>2 3>2 1>2,star\n"));
        assert!(csv.contains("\n4,5,1>2 1>3 2>3,triangle\n"));
    }
}
