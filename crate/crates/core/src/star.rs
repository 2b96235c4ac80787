//! 3-node, 3-edge star motifs.
//!
//! The fast counter makes one pass over the edges incident to each center.
//! A star instance has one neighbour carrying two of its edges and another
//! carrying one; the position of the lone edge splits stars into three
//! classes:
//!
//! * `pre`: edges 1 and 2 share a neighbour, edge 3 does not;
//! * `post`: edges 2 and 3 share a neighbour, edge 1 does not;
//! * `mid`: edges 1 and 3 share a neighbour, edge 2 does not.
//!
//! The pass also counts triples whose three edges all go to one neighbour.
//! Those are 2-node instances and are subtracted afterwards using the pair
//! counter.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{static_projection, EdgeId, NodeId, StaticGraph, TemporalGraph, Timestamp};
use crate::instrument::{Counted, Work};
use crate::motif::{grid_index, GridCell, Motif};
use crate::sweep::{sweep, Side, Subroutines};
use crate::window::{count_pair, count_subsequences, Delta, EdgeKey, PAIR_FORWARD};

/// Direction of an edge relative to the center (or pair) node it touches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    In = 0,
    Out = 1,
}

impl Direction {
    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StarEvent {
    pub nbr: NodeId,
    pub dir: Direction,
    pub t: Timestamp,
}

/// Which edge of the star sits alone on its neighbour.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StarClass {
    Pre = 0,
    Post = 1,
    Mid = 2,
}

impl StarClass {
    pub const ALL: [StarClass; 3] = [StarClass::Pre, StarClass::Post, StarClass::Mid];
}

/// Raw per-center counts by class and direction triple, indexed by
/// `4 * d1 + 2 * d2 + d3` with `In = 0`, `Out = 1`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StarClassCounts {
    pub pre: [u64; 8],
    pub post: [u64; 8],
    pub mid: [u64; 8],
}

impl StarClassCounts {
    pub fn class(&self, class: StarClass) -> &[u64; 8] {
        match class {
            StarClass::Pre => &self.pre,
            StarClass::Post => &self.post,
            StarClass::Mid => &self.mid,
        }
    }

    fn class_mut(&mut self, class: StarClass) -> &mut [u64; 8] {
        match class {
            StarClass::Pre => &mut self.pre,
            StarClass::Post => &mut self.post,
            StarClass::Mid => &mut self.mid,
        }
    }

    pub fn get(&self, class: StarClass, d1: Direction, d2: Direction, d3: Direction) -> u64 {
        self.class(class)[dir3(d1.index(), d2.index(), d3.index())]
    }
}

#[inline]
fn dir3(d1: usize, d2: usize, d3: usize) -> usize {
    4 * d1 + 2 * d2 + d3
}

/// Neighbours are local indices `0..n`.
struct StarCounter {
    n: usize,
    pre_nodes: Vec<u64>,
    post_nodes: Vec<u64>,
    pre_sum: [[u64; 2]; 2],
    post_sum: [[u64; 2]; 2],
    mid_sum: [[u64; 2]; 2],
    counts: StarClassCounts,
}

#[derive(Clone, Copy)]
struct LocalEvent {
    nbr: usize,
    dir: usize,
    t: Timestamp,
}

impl StarCounter {
    fn new(n: usize) -> Self {
        StarCounter {
            n,
            pre_nodes: vec![0; 2 * n],
            post_nodes: vec![0; 2 * n],
            pre_sum: [[0; 2]; 2],
            post_sum: [[0; 2]; 2],
            mid_sum: [[0; 2]; 2],
            counts: StarClassCounts::default(),
        }
    }

    fn window(&mut self, side: Side) -> (&mut Vec<u64>, &mut [[u64; 2]; 2]) {
        match side {
            Side::Pre => (&mut self.pre_nodes, &mut self.pre_sum),
            Side::Post => (&mut self.post_nodes, &mut self.post_sum),
        }
    }
}

impl Subroutines<LocalEvent> for StarCounter {
    fn push(&mut self, side: Side, e: &LocalEvent) {
        let n = self.n;
        let (nodes, sum) = self.window(side);
        for d in 0..2 {
            sum[d][e.dir] += nodes[d * n + e.nbr];
        }
        nodes[e.dir * n + e.nbr] += 1;
    }

    fn pop(&mut self, side: Side, e: &LocalEvent) {
        let n = self.n;
        let (nodes, sum) = self.window(side);
        nodes[e.dir * n + e.nbr] -= 1;
        for d in 0..2 {
            sum[e.dir][d] -= nodes[d * n + e.nbr];
        }
    }

    fn process_current(&mut self, e: &LocalEvent) {
        let n = self.n;
        for d in 0..2 {
            self.mid_sum[d][e.dir] -= self.pre_nodes[d * n + e.nbr];
        }
        for d1 in 0..2 {
            for d2 in 0..2 {
                self.counts.pre[dir3(d1, d2, e.dir)] += self.pre_sum[d1][d2];
                self.counts.post[dir3(e.dir, d1, d2)] += self.post_sum[d1][d2];
                self.counts.mid[dir3(d1, e.dir, d2)] += self.mid_sum[d1][d2];
            }
        }
        for d in 0..2 {
            self.mid_sum[e.dir][d] += self.post_nodes[d * n + e.nbr];
        }
    }
}

fn run_center(events: &[LocalEvent], n: usize, delta: Delta) -> Result<(StarClassCounts, Work)> {
    let mut counter = StarCounter::new(n);
    let work = sweep(events, |e| e.t, delta, &mut counter)?;
    Ok((counter.counts, work))
}

/// Runs the single-pass star counter over the time-sorted events of one
/// center. The result still contains the same-neighbour (2-node) triples.
pub fn count_stars_center(events: &[StarEvent], delta: Delta) -> Result<StarClassCounts> {
    let mut nbrs: Vec<NodeId> = events.iter().map(|e| e.nbr).collect();
    nbrs.sort_unstable();
    nbrs.dedup();
    let local: Vec<LocalEvent> = events
        .iter()
        .map(|e| LocalEvent {
            nbr: nbrs.binary_search(&e.nbr).expect("neighbour was collected"),
            dir: e.dir.index(),
            t: e.t,
        })
        .collect();
    Ok(run_center(&local, nbrs.len(), delta)?.0)
}

/// Time-sorted edges incident to `center`, seen from the center.
pub fn center_events(graph: &TemporalGraph, center: NodeId) -> Vec<(EdgeId, StarEvent)> {
    graph
        .incident(center)
        .iter()
        .map(|&id| {
            let e = graph.edge(id);
            let (nbr, dir) = if e.src == center {
                (e.dst, Direction::Out)
            } else {
                (e.src, Direction::In)
            };
            (id, StarEvent { nbr, dir, t: e.t })
        })
        .collect()
}

/// Grid cell for each `(class, d1, d2, d3)`, found by classifying one
/// exemplar star per entry.
pub fn star_cells() -> [[GridCell; 8]; 3] {
    std::array::from_fn(|class| {
        std::array::from_fn(|index| {
            // Neighbour carrying each of the three edges; center is node 0.
            let nbrs: [u32; 3] = match StarClass::ALL[class] {
                StarClass::Pre => [1, 1, 2],
                StarClass::Post => [1, 2, 2],
                StarClass::Mid => [1, 2, 1],
            };
            let dirs = [(index >> 2) & 1, (index >> 1) & 1, index & 1];
            let pairs: Vec<(u32, u32)> = nbrs
                .iter()
                .zip(dirs)
                .map(|(&x, d)| if d == Direction::Out.index() { (0, x) } else { (x, 0) })
                .collect();
            let motif = Motif::from_pairs(&pairs).expect("stars are connected");
            grid_index(&motif).expect("stars are in the grid")
        })
    })
}

/// Counts the 24 star motifs with one pass per center, then removes the
/// 2-node triples counted along the way.
pub fn count_all_stars_fast(graph: &TemporalGraph, delta: Delta) -> Result<Counted> {
    count_all_stars_fast_with(graph, &static_projection(graph), delta)
}

pub(crate) fn count_all_stars_fast_with(graph: &TemporalGraph, stat: &StaticGraph, delta: Delta) -> Result<Counted> {
    let cells = star_cells();
    (0..graph.num_nodes() as NodeId)
        .into_par_iter()
        .map(|center| {
            let nbrs = stat.neighbors(center);
            if nbrs.is_empty() {
                return Ok(Counted::default());
            }
            let events: Vec<LocalEvent> = center_events(graph, center)
                .into_iter()
                .map(|(_, e)| LocalEvent {
                    nbr: nbrs.binary_search(&e.nbr).expect("incident edge neighbour"),
                    dir: e.dir.index(),
                    t: e.t,
                })
                .collect();
            let (mut counts, mut work) = run_center(&events, nbrs.len(), delta)?;

            for &nbr in nbrs {
                let pair = count_pair(graph, center, nbr, delta, 3)?;
                work += pair.work();
                for (index, &n) in pair.raw().iter().enumerate() {
                    if n == 0 {
                        continue;
                    }
                    let key = crate::window::decode(index, 2, 3);
                    let d = |k: EdgeKey| if k == PAIR_FORWARD { 1 } else { 0 };
                    let slot = dir3(d(key[0]), d(key[1]), d(key[2]));
                    for class in StarClass::ALL {
                        let c = &mut counts.class_mut(class)[slot];
                        *c = c.checked_sub(n).ok_or_else(|| {
                            Error::Invariant(format!("star correction underflow at center {center}"))
                        })?;
                    }
                }
            }

            let mut out = Counted { work, ..Counted::default() };
            for class in StarClass::ALL {
                for (index, &n) in counts.class(class).iter().enumerate() {
                    out.matrix.add(cells[class as usize][index], n)?;
                }
            }
            Ok(out)
        })
        .try_reduce(Counted::default, Counted::combine)
}

/// Letters of the 4-symbol alphabet used by the baseline: `c->v`, `v->c`,
/// `c->w`, `w->c`.
fn baseline_cells() -> [Option<GridCell>; 64] {
    std::array::from_fn(|index| {
        let key = crate::window::decode(index, 4, 3);
        let uses_v = key.iter().any(|k| k.0 < 2);
        let uses_w = key.iter().any(|k| k.0 >= 2);
        if !(uses_v && uses_w) {
            return None;
        }
        let pairs: Vec<(u32, u32)> = key
            .iter()
            .map(|k| match k.0 {
                0 => (0, 1),
                1 => (1, 0),
                2 => (0, 2),
                _ => (2, 0),
            })
            .collect();
        let motif = Motif::from_pairs(&pairs).expect("stars are connected");
        Some(grid_index(&motif).expect("stars are in the grid"))
    })
}

/// Reference star counter: one subsequence-counting run per center and
/// unordered neighbour pair. Quadratic in degree.
pub fn count_all_stars_baseline(graph: &TemporalGraph, delta: Delta) -> Result<Counted> {
    let stat = static_projection(graph);
    let cells = baseline_cells();
    (0..graph.num_nodes() as NodeId)
        .into_par_iter()
        .map(|center| {
            let nbrs = stat.neighbors(center);
            let mut out = Counted::default();
            for (i, &v) in nbrs.iter().enumerate() {
                for &w in &nbrs[i + 1..] {
                    let mut tagged: Vec<(EdgeId, EdgeKey)> = Vec::new();
                    for (key, (a, b)) in [(center, v), (v, center), (center, w), (w, center)]
                        .into_iter()
                        .enumerate()
                    {
                        tagged.extend(graph.pair(a, b).iter().map(|&id| (id, EdgeKey(key as u8))));
                    }
                    tagged.sort_unstable();
                    let events: Vec<(EdgeKey, Timestamp)> =
                        tagged.iter().map(|&(id, k)| (k, graph.edge(id).t)).collect();
                    let counts = count_subsequences(&events, delta, 3, 4)?;
                    out.work += counts.work();
                    for (index, &n) in counts.raw().iter().enumerate() {
                        if let Some(cell) = cells[index] {
                            out.matrix.add(cell, n)?;
                        }
                    }
                }
            }
            Ok(out)
        })
        .try_reduce(Counted::default, Counted::combine)
}
