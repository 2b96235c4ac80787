//! 3-edge triangle motifs.
//!
//! Each static triangle is assigned to the one of its three node pairs that
//! carries the most temporal edges. For a pair `{u, v}` the fast counter then
//! sweeps once over the pair's own edges merged with the edges of every
//! assigned third node `w`, counting the triangles of all those `w` at once.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::Result;
use crate::graph::{enumerate_triangles, static_projection, EdgeId, NodeId, StaticGraph, TemporalGraph, Timestamp};
use crate::instrument::{Counted, Work};
use crate::motif::{cell, grid_index, GridCell, Motif};
use crate::star::Direction;
use crate::sweep::{sweep, Side, Subroutines};
use crate::window::{count_subsequences, Delta, EdgeKey};

/// Which end of the counted pair a wing edge touches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PairEnd {
    U = 0,
    V = 1,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EventKind {
    /// Edge between the third node `nbr` and one end of the pair; `dir` is
    /// relative to that end.
    Wing { nbr: NodeId, end: PairEnd, dir: Direction },
    /// Edge between `u` and `v` themselves.
    Pair { u_to_v: bool },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TriangleEvent {
    pub kind: EventKind,
    pub t: Timestamp,
}

/// Grid cell of each entry of the `count[i][j][k]` array, indexed by
/// `4i + 2j + k`.
pub const TRIANGLE_COUNT_CELLS: [GridCell; 8] = [
    cell(1, 3),
    cell(1, 4),
    cell(2, 3),
    cell(2, 4),
    cell(3, 5),
    cell(3, 6),
    cell(4, 5),
    cell(4, 6),
];

/// Triangles grouped by the pair they are counted on.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TriangleAssignment {
    assigned: Vec<((NodeId, NodeId), Vec<NodeId>)>,
}

impl TriangleAssignment {
    /// Assigned pairs `(u, v)`, `u < v`, each with its sorted third nodes.
    pub fn pairs(&self) -> &[((NodeId, NodeId), Vec<NodeId>)] {
        &self.assigned
    }

    pub fn thirds(&self, u: NodeId, v: NodeId) -> &[NodeId] {
        let key = (u.min(v), u.max(v));
        match self.assigned.binary_search_by_key(&key, |(k, _)| *k) {
            Ok(i) => &self.assigned[i].1,
            Err(_) => &[],
        }
    }

    /// Number of triangles assigned in total.
    pub fn num_triangles(&self) -> usize {
        self.assigned.iter().map(|(_, w)| w.len()).sum()
    }
}

/// Sends every triangle to its pair with the largest sigma; ties go to the
/// lexicographically smallest pair.
pub fn assign_triangles(stat: &StaticGraph, triangles: &[[NodeId; 3]]) -> TriangleAssignment {
    let mut groups: BTreeMap<(NodeId, NodeId), Vec<NodeId>> = BTreeMap::new();
    for &tri in triangles {
        let [a, b, c] = {
            let mut t = tri;
            t.sort_unstable();
            t
        };
        // Candidates in lexicographic order; only a strictly larger sigma
        // displaces an earlier one.
        let candidates = [((a, b), c), ((a, c), b), ((b, c), a)];
        let mut best = candidates[0];
        let mut best_sigma = stat.sigma(a, b);
        for &cand in &candidates[1..] {
            let s = stat.sigma(cand.0 .0, cand.0 .1);
            if s > best_sigma {
                best = cand;
                best_sigma = s;
            }
        }
        groups.entry(best.0).or_default().push(best.1);
    }
    TriangleAssignment {
        assigned: groups
            .into_iter()
            .map(|(k, mut w)| {
                w.sort_unstable();
                (k, w)
            })
            .collect(),
    }
}

/// The merged, time-sorted event list for pair `(u, v)` and its assigned
/// third nodes. Pair edges appear once; wing edges once per third node.
pub fn pair_events(graph: &TemporalGraph, u: NodeId, v: NodeId, thirds: &[NodeId]) -> Vec<TriangleEvent> {
    let mut tagged: Vec<(EdgeId, EventKind)> = Vec::new();
    let mut add = |ids: &[EdgeId], kind: EventKind| tagged.extend(ids.iter().map(|&id| (id, kind)));
    add(graph.pair(u, v), EventKind::Pair { u_to_v: true });
    add(graph.pair(v, u), EventKind::Pair { u_to_v: false });
    for &w in thirds {
        for (end, x) in [(PairEnd::U, u), (PairEnd::V, v)] {
            add(graph.pair(w, x), EventKind::Wing { nbr: w, end, dir: Direction::In });
            add(graph.pair(x, w), EventKind::Wing { nbr: w, end, dir: Direction::Out });
        }
    }
    tagged.sort_unstable_by_key(|&(id, _)| id);
    tagged
        .into_iter()
        .map(|(id, kind)| TriangleEvent { kind, t: graph.edge(id).t })
        .collect()
}

#[derive(Clone, Copy)]
enum Local {
    Wing { nbr: usize, end: usize, dir: usize },
    Pair { u_to_v: usize },
}

#[derive(Clone, Copy)]
struct LocalEvent {
    kind: Local,
    t: Timestamp,
}

type Sums = [[[u64; 2]; 2]; 2];

/// Node counters are indexed `[(end * 2 + dir) * n + nbr]`; sums are
/// `[end of earlier edge][dir of earlier][dir of later]`.
struct TriangleCounter {
    n: usize,
    pre_nodes: Vec<u64>,
    post_nodes: Vec<u64>,
    pre_sum: Sums,
    post_sum: Sums,
    mid_sum: Sums,
    count: [u64; 8],
}

impl TriangleCounter {
    fn new(n: usize) -> Self {
        TriangleCounter {
            n,
            pre_nodes: vec![0; 4 * n],
            post_nodes: vec![0; 4 * n],
            pre_sum: [[[0; 2]; 2]; 2],
            post_sum: [[[0; 2]; 2]; 2],
            mid_sum: [[[0; 2]; 2]; 2],
            count: [0; 8],
        }
    }

    #[inline]
    fn at(&self, end: usize, dir: usize, nbr: usize) -> usize {
        (end * 2 + dir) * self.n + nbr
    }

    fn window(&mut self, side: Side) -> (&mut Vec<u64>, &mut Sums) {
        match side {
            Side::Pre => (&mut self.pre_nodes, &mut self.pre_sum),
            Side::Post => (&mut self.post_nodes, &mut self.post_sum),
        }
    }
}

impl Subroutines<LocalEvent> for TriangleCounter {
    fn push(&mut self, side: Side, e: &LocalEvent) {
        let Local::Wing { nbr, end, dir } = e.kind else { return };
        let other: [usize; 2] = [self.at(1 - end, 0, nbr), self.at(1 - end, 1, nbr)];
        let me = self.at(end, dir, nbr);
        let (nodes, sum) = self.window(side);
        for d in 0..2 {
            sum[1 - end][d][dir] += nodes[other[d]];
        }
        nodes[me] += 1;
    }

    fn pop(&mut self, side: Side, e: &LocalEvent) {
        let Local::Wing { nbr, end, dir } = e.kind else { return };
        let other: [usize; 2] = [self.at(1 - end, 0, nbr), self.at(1 - end, 1, nbr)];
        let me = self.at(end, dir, nbr);
        let (nodes, sum) = self.window(side);
        nodes[me] -= 1;
        for d in 0..2 {
            sum[end][dir][d] -= nodes[other[d]];
        }
    }

    fn process_current(&mut self, e: &LocalEvent) {
        match e.kind {
            Local::Wing { nbr, end, dir } => {
                for d in 0..2 {
                    let other = self.at(1 - end, d, nbr);
                    self.mid_sum[1 - end][d][dir] -= self.pre_nodes[other];
                    self.mid_sum[end][dir][d] += self.post_nodes[other];
                }
            }
            Local::Pair { u_to_v } => {
                for i in 0..2 {
                    for j in 0..2 {
                        for k in 0..2 {
                            self.count[4 * i + 2 * j + k] += self.mid_sum[j ^ u_to_v][i][k]
                                + self.post_sum[i ^ u_to_v][j][1 - k]
                                + self.pre_sum[k ^ u_to_v ^ 1][1 - i][1 - j];
                        }
                    }
                }
            }
        }
    }
}

fn run_pair(events: &[LocalEvent], n: usize, delta: Delta) -> Result<([u64; 8], Work)> {
    let mut counter = TriangleCounter::new(n);
    let work = sweep(events, |e| e.t, delta, &mut counter)?;
    Ok((counter.count, work))
}

/// Counts triangle instances formed by the pair's own edges with wing edges
/// of any third node, returned as `count[4i + 2j + k]`
/// (see [`TRIANGLE_COUNT_CELLS`]).
pub fn count_triangles_pair(events: &[TriangleEvent], delta: Delta) -> Result<[u64; 8]> {
    let mut nbrs: Vec<NodeId> = events
        .iter()
        .filter_map(|e| match e.kind {
            EventKind::Wing { nbr, .. } => Some(nbr),
            EventKind::Pair { .. } => None,
        })
        .collect();
    nbrs.sort_unstable();
    nbrs.dedup();
    let local = localize(events, |w| nbrs.binary_search(&w).expect("collected"));
    Ok(run_pair(&local, nbrs.len(), delta)?.0)
}

fn localize(events: &[TriangleEvent], index: impl Fn(NodeId) -> usize) -> Vec<LocalEvent> {
    events
        .iter()
        .map(|e| LocalEvent {
            kind: match e.kind {
                EventKind::Wing { nbr, end, dir } => Local::Wing {
                    nbr: index(nbr),
                    end: end as usize,
                    dir: dir.index(),
                },
                EventKind::Pair { u_to_v } => Local::Pair { u_to_v: u_to_v as usize },
            },
            t: e.t,
        })
        .collect()
}

/// Counts the 8 triangle motifs by pair assignment.
pub fn count_all_triangles_fast(graph: &TemporalGraph, delta: Delta) -> Result<Counted> {
    count_all_triangles_fast_with(graph, &static_projection(graph), delta)
}

pub(crate) fn count_all_triangles_fast_with(graph: &TemporalGraph, stat: &StaticGraph, delta: Delta) -> Result<Counted> {
    let triangles = enumerate_triangles(stat);
    let assignment = assign_triangles(stat, &triangles);
    assignment
        .pairs()
        .par_iter()
        .map(|((u, v), thirds)| {
            let events = pair_events(graph, *u, *v, thirds);
            let local = localize(&events, |w| thirds.binary_search(&w).expect("assigned third"));
            let (count, work) = run_pair(&local, thirds.len(), delta)?;
            let mut out = Counted { work, ..Counted::default() };
            for (i, &n) in count.iter().enumerate() {
                out.matrix.add(TRIANGLE_COUNT_CELLS[i], n)?;
            }
            Ok(out)
        })
        .try_reduce(Counted::default, Counted::combine)
}

/// Letters for triangle `(a, b, c)`: `a>b b>a a>c c>a b>c c>b`. Only patterns
/// touching all three node pairs are triangles; the rest belong to the
/// 2-node and star counters.
fn baseline_cells() -> [Option<GridCell>; 216] {
    const LETTERS: [(u32, u32); 6] = [(0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1)];
    std::array::from_fn(|index| {
        let key = crate::window::decode(index, 6, 3);
        let mut covered = [false; 3];
        for k in &key {
            covered[k.0 as usize / 2] = true;
        }
        if covered.iter().any(|c| !c) {
            return None;
        }
        let pairs: Vec<(u32, u32)> = key.iter().map(|k| LETTERS[k.0 as usize]).collect();
        let motif = Motif::from_pairs(&pairs).expect("triangles are connected");
        Some(grid_index(&motif).expect("triangles are in the grid"))
    })
}

/// Reference triangle counter: one subsequence-counting run per static
/// triangle over the edges of its three pairs.
pub fn count_all_triangles_baseline(graph: &TemporalGraph, delta: Delta) -> Result<Counted> {
    let stat = static_projection(graph);
    let triangles = enumerate_triangles(&stat);
    let cells = baseline_cells();
    triangles
        .par_iter()
        .map(|&[a, b, c]| {
            let mut tagged: Vec<(EdgeId, EdgeKey)> = Vec::new();
            for (key, (x, y)) in [(a, b), (b, a), (a, c), (c, a), (b, c), (c, b)].into_iter().enumerate() {
                tagged.extend(graph.pair(x, y).iter().map(|&id| (id, EdgeKey(key as u8))));
            }
            tagged.sort_unstable();
            let events: Vec<(EdgeKey, Timestamp)> = tagged.iter().map(|&(id, k)| (k, graph.edge(id).t)).collect();
            let counts = count_subsequences(&events, delta, 3, 6)?;
            let mut out = Counted {
                work: counts.work(),
                ..Counted::default()
            };
            for (index, &n) in counts.raw().iter().enumerate() {
                if let Some(cell) = cells[index] {
                    out.matrix.add(cell, n)?;
                }
            }
            Ok(out)
        })
        .try_reduce(Counted::default, Counted::combine)
}
