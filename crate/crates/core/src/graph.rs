//! Temporal graph storage: ingestion, time ordering and the per-pair and
//! per-node indices the counting routines read from.
//!
//! Edges are kept in one array sorted by `(t, seq)`. Every other index refers
//! to edges by their position in that array, so comparing two [`EdgeId`]s is
//! the same as comparing the edges in time, ties included.

use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use flate2::read::MultiGzDecoder;

use crate::error::{Error, Result};

/// Dense node identifier, `0..graph.num_nodes()`.
pub type NodeId = u32;
/// Timestamp in seconds.
pub type Timestamp = i64;
/// Position of an edge in the time-sorted edge array.
pub type EdgeId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TemporalEdge {
    pub src: NodeId,
    pub dst: NodeId,
    pub t: Timestamp,
    /// Ingestion index; breaks ties between equal timestamps.
    pub seq: u64,
}

/// Counters collected while reading an edge list.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct IngestStats {
    pub lines: usize,
    pub comments: usize,
    pub self_loops_dropped: usize,
}

#[derive(Clone, Debug)]
pub struct TemporalGraph {
    edges: Vec<TemporalEdge>,
    labels: Vec<i64>,
    pair_keys: Vec<(NodeId, NodeId)>,
    pair_offsets: Vec<usize>,
    pair_edges: Vec<EdgeId>,
    node_pair_offsets: Vec<usize>,
    node_offsets: Vec<usize>,
    node_edges: Vec<EdgeId>,
}

impl TemporalGraph {
    /// Builds a graph from `(src, dst, t)` triples given in ingestion order.
    ///
    /// Original node ids are remapped to a dense range in order of first
    /// appearance. Self-loops are dropped; the number dropped is returned.
    pub fn from_labeled<I>(triples: I) -> (Self, usize)
    where
        I: IntoIterator<Item = (i64, i64, Timestamp)>,
    {
        let mut ids = std::collections::HashMap::new();
        let mut labels = Vec::new();
        let mut edges = Vec::new();
        let mut self_loops = 0;
        let mut intern = |label: i64, labels: &mut Vec<i64>| -> NodeId {
            *ids.entry(label).or_insert_with(|| {
                labels.push(label);
                (labels.len() - 1) as NodeId
            })
        };
        for (src, dst, t) in triples {
            if src == dst {
                self_loops += 1;
                continue;
            }
            let src = intern(src, &mut labels);
            let dst = intern(dst, &mut labels);
            let seq = edges.len() as u64;
            edges.push(TemporalEdge { src, dst, t, seq });
        }
        (Self::from_dense(labels, edges), self_loops)
    }

    fn from_dense(labels: Vec<i64>, mut edges: Vec<TemporalEdge>) -> Self {
        let n = labels.len();
        edges.sort_by_key(|e| (e.t, e.seq));

        let mut pair_edges: Vec<EdgeId> = (0..edges.len()).collect();
        pair_edges.sort_by_key(|&id| (edges[id].src, edges[id].dst));
        let mut pair_keys = Vec::new();
        let mut pair_offsets = Vec::new();
        for (pos, &id) in pair_edges.iter().enumerate() {
            let key = (edges[id].src, edges[id].dst);
            if pair_keys.last() != Some(&key) {
                pair_keys.push(key);
                pair_offsets.push(pos);
            }
        }
        pair_offsets.push(pair_edges.len());

        let mut node_pair_offsets = vec![0usize; n + 1];
        for &(src, _) in &pair_keys {
            node_pair_offsets[src as usize + 1] += 1;
        }
        for i in 0..n {
            node_pair_offsets[i + 1] += node_pair_offsets[i];
        }

        let mut node_offsets = vec![0usize; n + 1];
        for e in &edges {
            node_offsets[e.src as usize + 1] += 1;
            node_offsets[e.dst as usize + 1] += 1;
        }
        for i in 0..n {
            node_offsets[i + 1] += node_offsets[i];
        }
        let mut fill = node_offsets.clone();
        let mut node_edges = vec![0; 2 * edges.len()];
        for (id, e) in edges.iter().enumerate() {
            for node in [e.src, e.dst] {
                node_edges[fill[node as usize]] = id;
                fill[node as usize] += 1;
            }
        }

        TemporalGraph {
            edges,
            labels,
            pair_keys,
            pair_offsets,
            pair_edges,
            node_pair_offsets,
            node_offsets,
            node_edges,
        }
    }

    pub fn num_nodes(&self) -> usize {
        self.labels.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// All edges, sorted by `(t, seq)`.
    pub fn edges(&self) -> &[TemporalEdge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &TemporalEdge {
        &self.edges[id]
    }

    /// Original identifier of a dense node id.
    pub fn label(&self, node: NodeId) -> i64 {
        self.labels[node as usize]
    }

    /// Dense id of an original node label.
    pub fn node_of(&self, label: i64) -> Option<NodeId> {
        self.labels.iter().position(|&l| l == label).map(|i| i as NodeId)
    }

    /// Time-sorted ids of the edges `u -> v`.
    pub fn pair(&self, u: NodeId, v: NodeId) -> &[EdgeId] {
        let Some(range) = self.node_pair_offsets.get(u as usize..u as usize + 2) else {
            return &[];
        };
        let keys = &self.pair_keys[range[0]..range[1]];
        match keys.binary_search(&(u, v)) {
            Ok(i) => {
                let k = range[0] + i;
                &self.pair_edges[self.pair_offsets[k]..self.pair_offsets[k + 1]]
            }
            Err(_) => &[],
        }
    }

    /// Ordered pairs with at least one edge, with their time-sorted edge ids.
    pub fn pairs(&self) -> impl Iterator<Item = ((NodeId, NodeId), &[EdgeId])> + '_ {
        self.pair_keys.iter().enumerate().map(move |(k, &key)| {
            (key, &self.pair_edges[self.pair_offsets[k]..self.pair_offsets[k + 1]])
        })
    }

    pub fn pair_timestamps(&self, u: NodeId, v: NodeId) -> impl Iterator<Item = Timestamp> + '_ {
        self.pair(u, v).iter().map(move |&id| self.edges[id].t)
    }

    /// Time-sorted ids of every edge incident to `node`, in either direction.
    pub fn incident(&self, node: NodeId) -> &[EdgeId] {
        let n = node as usize;
        &self.node_edges[self.node_offsets[n]..self.node_offsets[n + 1]]
    }

    /// Earliest and latest timestamp, if any edge exists.
    pub fn time_range(&self) -> Option<(Timestamp, Timestamp)> {
        Some((self.edges.first()?.t, self.edges.last()?.t))
    }

    /// Edge ids of `u -> v` and `v -> u` merged in time order, tagged with
    /// `false` for `u -> v` and `true` for `v -> u`.
    pub fn merged_pair(&self, u: NodeId, v: NodeId) -> Vec<(EdgeId, bool)> {
        let fwd = self.pair(u, v);
        let bwd = self.pair(v, u);
        let mut out = Vec::with_capacity(fwd.len() + bwd.len());
        let (mut i, mut j) = (0, 0);
        while i < fwd.len() || j < bwd.len() {
            if j == bwd.len() || (i < fwd.len() && fwd[i] < bwd[j]) {
                out.push((fwd[i], false));
                i += 1;
            } else {
                out.push((bwd[j], true));
                j += 1;
            }
        }
        out
    }
}

/// Reads a whitespace separated `src dst timestamp` edge list.
///
/// Blank lines and lines starting with `#` are skipped.
pub fn load_edge_list<R: BufRead>(reader: R) -> Result<(TemporalGraph, IngestStats)> {
    let mut stats = IngestStats::default();
    let mut triples = Vec::new();
    for (index, line) in reader.lines().enumerate() {
        let line = line?;
        let number = index + 1;
        stats.lines += 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if trimmed.starts_with('#') {
            stats.comments += 1;
            continue;
        }
        triples.push(parse_line(trimmed, number)?);
    }
    let (graph, dropped) = TemporalGraph::from_labeled(triples);
    stats.self_loops_dropped = dropped;
    Ok((graph, stats))
}

fn parse_line(line: &str, number: usize) -> Result<(i64, i64, Timestamp)> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    if fields.len() != 3 {
        return Err(Error::Parse {
            line: number,
            message: format!("expected 3 fields, found {}", fields.len()),
        });
    }
    let field = |i: usize, name: &str| -> Result<i64> {
        fields[i].parse().map_err(|e| Error::Parse {
            line: number,
            message: format!("bad {name} {:?}: {e}", fields[i]),
        })
    };
    Ok((field(0, "source")?, field(1, "destination")?, field(2, "timestamp")?))
}

/// Opens a file for reading, decompressing it when it starts with the gzip
/// magic bytes.
pub fn open_reader<P: AsRef<Path>>(path: P) -> Result<Box<dyn BufRead>> {
    let mut file = BufReader::new(File::open(path)?);
    let gzipped = file.fill_buf()?.starts_with(&[0x1f, 0x8b]);
    if gzipped {
        Ok(Box::new(BufReader::new(MultiGzDecoder::new(file))))
    } else {
        Ok(Box::new(file))
    }
}

/// Loads an edge-list file, plain or gzipped.
pub fn open_edge_list<P: AsRef<Path>>(path: P) -> Result<(TemporalGraph, IngestStats)> {
    load_edge_list(open_reader(path)?)
}

/// Reads at most `limit` data lines of an edge list (comments excluded).
pub fn load_edge_list_prefix<R: Read>(reader: R, limit: usize) -> Result<(TemporalGraph, IngestStats)> {
    let mut kept = Vec::new();
    let mut data = 0;
    for line in BufReader::new(reader).lines() {
        let line = line?;
        let trimmed = line.trim();
        if !trimmed.is_empty() && !trimmed.starts_with('#') {
            if data == limit {
                break;
            }
            data += 1;
        }
        kept.push(line);
    }
    load_edge_list(kept.join("\n").as_bytes())
}

/// Writes the graph back out in time order using the original node ids.
pub fn write_edge_list<W: Write>(graph: &TemporalGraph, mut out: W, header: Option<&str>) -> Result<()> {
    if let Some(header) = header {
        for line in header.lines() {
            writeln!(out, "# {line}")?;
        }
    }
    for e in graph.edges() {
        writeln!(out, "{} {} {}", graph.label(e.src), graph.label(e.dst), e.t)?;
    }
    out.flush()?;
    Ok(())
}

/// The directed graph obtained by dropping timestamps, with its undirected
/// projection and the number of temporal edges on each undirected pair.
#[derive(Clone, Debug)]
pub struct StaticGraph {
    num_nodes: usize,
    directed: Vec<(NodeId, NodeId)>,
    undirected: Vec<(NodeId, NodeId)>,
    sigma: Vec<u64>,
    adj_offsets: Vec<usize>,
    adj: Vec<NodeId>,
}

impl StaticGraph {
    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    /// Sorted ordered pairs `(u, v)` with at least one temporal edge `u -> v`.
    pub fn directed_edges(&self) -> &[(NodeId, NodeId)] {
        &self.directed
    }

    /// Sorted unordered pairs, stored as `(min, max)`.
    pub fn undirected_edges(&self) -> &[(NodeId, NodeId)] {
        &self.undirected
    }

    /// `(pair, sigma)` for every undirected edge.
    pub fn sigmas(&self) -> impl Iterator<Item = ((NodeId, NodeId), u64)> + '_ {
        self.undirected.iter().copied().zip(self.sigma.iter().copied())
    }

    /// Number of temporal edges between `u` and `v` in either direction.
    pub fn sigma(&self, u: NodeId, v: NodeId) -> u64 {
        let key = (u.min(v), u.max(v));
        match self.undirected.binary_search(&key) {
            Ok(i) => self.sigma[i],
            Err(_) => 0,
        }
    }

    pub fn has_directed(&self, u: NodeId, v: NodeId) -> bool {
        self.directed.binary_search(&(u, v)).is_ok()
    }

    pub fn has_undirected(&self, u: NodeId, v: NodeId) -> bool {
        self.sigma(u, v) > 0
    }

    /// Sorted undirected neighbours of `node`.
    pub fn neighbors(&self, node: NodeId) -> &[NodeId] {
        let n = node as usize;
        &self.adj[self.adj_offsets[n]..self.adj_offsets[n + 1]]
    }

    pub fn degree(&self, node: NodeId) -> usize {
        self.neighbors(node).len()
    }
}

pub fn static_projection(graph: &TemporalGraph) -> StaticGraph {
    let n = graph.num_nodes();
    let mut directed = Vec::new();
    let mut weighted: Vec<((NodeId, NodeId), u64)> = Vec::new();
    for ((u, v), ids) in graph.pairs() {
        directed.push((u, v));
        weighted.push(((u.min(v), u.max(v)), ids.len() as u64));
    }
    weighted.sort_unstable();
    let mut undirected: Vec<(NodeId, NodeId)> = Vec::new();
    let mut sigma: Vec<u64> = Vec::new();
    for (key, count) in weighted {
        if undirected.last() == Some(&key) {
            *sigma.last_mut().unwrap() += count;
        } else {
            undirected.push(key);
            sigma.push(count);
        }
    }

    let mut adj_offsets = vec![0usize; n + 1];
    for &(u, v) in &undirected {
        adj_offsets[u as usize + 1] += 1;
        adj_offsets[v as usize + 1] += 1;
    }
    for i in 0..n {
        adj_offsets[i + 1] += adj_offsets[i];
    }
    let mut fill = adj_offsets.clone();
    let mut adj = vec![0; 2 * undirected.len()];
    for &(u, v) in &undirected {
        adj[fill[u as usize]] = v;
        fill[u as usize] += 1;
        adj[fill[v as usize]] = u;
        fill[v as usize] += 1;
    }
    for i in 0..n {
        adj[adj_offsets[i]..adj_offsets[i + 1]].sort_unstable();
    }

    StaticGraph {
        num_nodes: n,
        directed,
        undirected,
        sigma,
        adj_offsets,
        adj,
    }
}

/// Lists every triangle of the undirected projection once, as a sorted
/// triple, in lexicographic order.
///
/// Edges are oriented from lower to higher `(degree, id)` rank and each
/// oriented edge intersects the out-lists of its endpoints.
pub fn enumerate_triangles(graph: &StaticGraph) -> Vec<[NodeId; 3]> {
    let n = graph.num_nodes();
    let rank = |x: NodeId| (graph.degree(x), x);
    let forward: Vec<Vec<NodeId>> = (0..n as NodeId)
        .map(|u| {
            graph
                .neighbors(u)
                .iter()
                .copied()
                .filter(|&v| rank(v) > rank(u))
                .collect()
        })
        .collect();

    let mut triangles = Vec::new();
    for u in 0..n {
        for &v in &forward[u] {
            let (a, b) = (&forward[u], &forward[v as usize]);
            let (mut i, mut j) = (0, 0);
            while i < a.len() && j < b.len() {
                match a[i].cmp(&b[j]) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        let mut tri = [u as NodeId, v, a[i]];
                        tri.sort_unstable();
                        triangles.push(tri);
                        i += 1;
                        j += 1;
                    }
                }
            }
        }
    }
    triangles.sort_unstable();
    triangles
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(text: &str) -> (TemporalGraph, IngestStats) {
        load_edge_list(text.as_bytes()).unwrap()
    }

    fn triples(g: &TemporalGraph) -> Vec<(NodeId, NodeId, Timestamp)> {
        g.edges().iter().map(|e| (e.src, e.dst, e.t)).collect()
    }

    #[test]
    fn loads_simple_list() {
        let (g, stats) = load("1 2 10\n2 1 20\n");
        assert_eq!(g.num_nodes(), 2);
        assert_eq!(g.num_edges(), 2);
        assert_eq!(triples(&g), vec![(0, 1, 10), (1, 0, 20)]);
        assert_eq!(stats.self_loops_dropped, 0);
    }

    #[test]
    fn drops_self_loops() {
        let (g, stats) = load("5 5 7\n1 2 3\n");
        assert_eq!(g.num_edges(), 1);
        assert_eq!(stats.self_loops_dropped, 1);
        assert_eq!(g.label(0), 1);
    }

    #[test]
    fn empty_input_is_valid() {
        let (g, _) = load("");
        assert_eq!(g.num_edges(), 0);
        assert_eq!(g.num_nodes(), 0);
        assert!(g.time_range().is_none());
        let (g, stats) = load("# only a header\n\n");
        assert!(g.is_empty());
        assert_eq!(stats.comments, 1);
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let err = load_edge_list("1 2 3\n# c\n1 x 4\n".as_bytes()).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        let err = load_edge_list("1 2\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = load_edge_list("1 2 3 4\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn ties_keep_file_order_and_duplicates() {
        let (g, _) = load("1 2 5\n3 1 5\n1 2 5\n2 3 1\n");
        assert_eq!(g.num_edges(), 4);
        let seqs: Vec<u64> = g.edges().iter().map(|e| e.seq).collect();
        assert_eq!(seqs, vec![3, 0, 1, 2]);
        assert_eq!(g.pair(0, 1).len(), 2);
    }

    #[test]
    fn pair_and_node_indices() {
        let (g, _) = load("0 1 1\n0 1 2\n1 0 3\n1 2 4\n");
        assert_eq!(g.pair(0, 1), &[0, 1]);
        assert_eq!(g.pair(1, 0), &[2]);
        assert_eq!(g.pair(2, 1), &[] as &[EdgeId]);
        assert_eq!(g.pair(9, 1), &[] as &[EdgeId]);
        assert_eq!(g.incident(1), &[0, 1, 2, 3]);
        assert_eq!(g.incident(2), &[3]);
        assert_eq!(g.merged_pair(0, 1), vec![(0, false), (1, false), (2, true)]);
        assert_eq!(g.pair_timestamps(0, 1).collect::<Vec<_>>(), vec![1, 2]);
    }

    #[test]
    fn static_projection_counts_sigma() {
        let (g, _) = load("0 1 1\n0 1 2\n1 0 3\n");
        let s = static_projection(&g);
        assert_eq!(s.directed_edges(), &[(0, 1), (1, 0)]);
        assert_eq!(s.undirected_edges(), &[(0, 1)]);
        assert_eq!(s.sigma(1, 0), 3);
        assert_eq!(s.neighbors(0), &[1]);

        let (empty, _) = load("");
        let s = static_projection(&empty);
        assert!(s.directed_edges().is_empty());
        assert!(s.undirected_edges().is_empty());
    }

    #[test]
    fn triangles_small_cases() {
        let (g, _) = load("0 1 1\n1 2 2\n2 0 3\n");
        assert_eq!(enumerate_triangles(&static_projection(&g)), vec![[0, 1, 2]]);

        let mut text = String::new();
        for u in 0..4 {
            for v in (u + 1)..4 {
                text.push_str(&format!("{u} {v} {}\n", u * 4 + v));
            }
        }
        let (g, _) = load(&text);
        assert_eq!(enumerate_triangles(&static_projection(&g)).len(), 4);
    }

    #[test]
    fn gzip_input_is_decompressed() {
        use flate2::write::GzEncoder;
        use flate2::Compression;
        let dir = std::env::temp_dir().join(format!("tmotif-gz-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("edges.txt.gz");
        let mut enc = GzEncoder::new(File::create(&path).unwrap(), Compression::default());
        enc.write_all(b"# header\n1 2 10\n2 3 11\n").unwrap();
        enc.finish().unwrap();
        let (g, stats) = open_edge_list(&path).unwrap();
        assert_eq!(g.num_edges(), 2);
        assert_eq!(stats.comments, 1);
        std::fs::remove_dir_all(dir).ok();
    }

    #[test]
    fn prefix_loader_counts_data_lines_only() {
        let (g, _) = load_edge_list_prefix("# h\n1 2 1\n2 3 2\n3 4 3\n".as_bytes(), 2).unwrap();
        assert_eq!(g.num_edges(), 2);
    }
}
