//! A second brute-force counter that shares no code with the library: it
//! orders raw triples itself, relabels nodes itself and looks motifs up in a
//! hand-written table of the 36 grid patterns.

use std::collections::HashMap;

use proptest::prelude::*;
use tmotif::{count_all, CountMatrix, Delta, GridCell, TemporalGraph};

/// Row-major grid; each entry lists the three edges as `src dst` digit pairs.
const GRID: [[&str; 6]; 6] = [
    ["12 32 12", "12 32 21", "12 32 13", "12 32 31", "12 32 23", "12 32 32"],
    ["12 23 12", "12 23 21", "12 23 13", "12 23 31", "12 23 23", "12 23 32"],
    ["12 31 12", "12 31 21", "12 31 13", "12 31 31", "12 31 23", "12 31 32"],
    ["12 13 12", "12 13 21", "12 13 13", "12 13 31", "12 13 23", "12 13 32"],
    ["12 21 12", "12 21 21", "12 21 13", "12 21 31", "12 21 23", "12 21 32"],
    ["12 12 12", "12 12 21", "12 12 13", "12 12 31", "12 12 23", "12 12 32"],
];

fn canonical(edges: &[(i64, i64)]) -> Option<String> {
    let mut ids: HashMap<i64, usize> = HashMap::new();
    let mut parts = Vec::new();
    for &(s, d) in edges {
        for x in [s, d] {
            let next = ids.len() + 1;
            ids.entry(x).or_insert(next);
        }
        parts.push(format!("{}{}", ids[&s], ids[&d]));
    }
    (ids.len() <= 3).then(|| parts.join(" "))
}

fn brute(triples: &[(i64, i64, i64)], delta: Option<i64>) -> [[u64; 6]; 6] {
    let mut lookup = HashMap::new();
    for (r, row) in GRID.iter().enumerate() {
        for (c, p) in row.iter().enumerate() {
            lookup.insert(p.to_string(), (r, c));
        }
    }
    let mut es: Vec<(i64, usize, i64, i64)> = triples
        .iter()
        .enumerate()
        .filter(|(_, e)| e.0 != e.1)
        .map(|(i, &(s, d, t))| (t, i, s, d))
        .collect();
    es.sort();
    let mut out = [[0u64; 6]; 6];
    let n = es.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if delta.is_some_and(|d| es[k].0 - es[i].0 > d) {
                    continue;
                }
                let pattern = [(es[i].2, es[i].3), (es[j].2, es[j].3), (es[k].2, es[k].3)];
                // Any 3-node, 3-edge pattern is connected, so the table covers it.
                if let Some(p) = canonical(&pattern) {
                    let (r, c) = lookup[&p];
                    out[r][c] += 1;
                }
            }
        }
    }
    out
}

fn triples(max_nodes: i64, max_edges: usize) -> impl Strategy<Value = Vec<(i64, i64, i64)>> {
    prop::collection::vec((0..max_nodes, 0..max_nodes, 0i64..50), 0..=max_edges)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn library_matches_independent_count(ts in triples(7, 25), d in prop::option::of(0i64..30)) {
        let (g, _) = TemporalGraph::from_labeled(ts.clone());
        let delta = d.map_or(Delta::INFINITE, |d| Delta::seconds(d as u64));
        let got = count_all(&g, delta).unwrap().matrix;
        prop_assert_eq!(got, CountMatrix::from_rows(brute(&ts, d)));
    }

    #[test]
    fn negative_and_sparse_labels(ts in prop::collection::vec((-3i64..3, -3i64..3, -20i64..20), 0..20)) {
        let scaled: Vec<_> = ts.iter().map(|&(s, d, t)| (s * 1_000_003, d * 1_000_003, t)).collect();
        let (g, _) = TemporalGraph::from_labeled(scaled.clone());
        let got = count_all(&g, Delta::seconds(10)).unwrap().matrix;
        prop_assert_eq!(got, CountMatrix::from_rows(brute(&scaled, Some(10))));
    }
}

#[test]
fn table_matches_library_grid() {
    for (r, row) in GRID.iter().enumerate() {
        for (c, p) in row.iter().enumerate() {
            let cell = GridCell::new(r as u8 + 1, c as u8 + 1).unwrap();
            let lib: Vec<String> = tmotif::grid_motif(cell).pattern().iter().map(|(a, b)| format!("{a}{b}")).collect();
            assert_eq!(lib.join(" "), *p, "cell {cell}");
        }
    }
}
