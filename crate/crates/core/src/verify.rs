//! Brute-force oracle and synthetic graph generators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{TemporalGraph, Timestamp};
use crate::motif::{grid_index, CountMatrix, Motif};
use crate::window::Delta;

pub use crate::instrument::{Counted, InstrumentationReport, Work};

/// Largest graph the oracle accepts unless told otherwise.
pub const DEFAULT_ORACLE_CAP: usize = 200;

/// Counts all 36 grid motifs by enumerating every time-ordered edge triple.
/// Cubic in the edge count; refuses graphs above [`DEFAULT_ORACLE_CAP`].
pub fn oracle_count(graph: &TemporalGraph, delta: Delta) -> Result<CountMatrix> {
    oracle_count_capped(graph, delta, DEFAULT_ORACLE_CAP)
}

pub fn oracle_count_capped(graph: &TemporalGraph, delta: Delta, cap: usize) -> Result<CountMatrix> {
    let m = graph.num_edges();
    if m > cap {
        return Err(Error::OracleCap { edges: m, cap });
    }
    let edges = graph.edges();
    let mut matrix = CountMatrix::zero();
    for i in 0..m {
        for j in i + 1..m {
            if !delta.admits(edges[i].t, edges[j].t) {
                break;
            }
            for k in j + 1..m {
                if !delta.admits(edges[i].t, edges[k].t) {
                    break;
                }
                let triple = [edges[i], edges[j], edges[k]];
                let pairs: Vec<_> = triple.iter().map(|e| (e.src, e.dst)).collect();
                let Ok(motif) = Motif::from_pairs(&pairs) else {
                    continue;
                };
                if motif.num_nodes() <= 3 {
                    matrix.add(grid_index(&motif)?, 1)?;
                }
            }
        }
    }
    Ok(matrix)
}

/// `m` edges between uniformly chosen distinct nodes of `0..n`, timestamps
/// uniform in `[0, t_max]`. Duplicate timestamps are allowed.
pub fn gen_random(n: usize, m: usize, t_max: Timestamp, seed: u64) -> Result<TemporalGraph> {
    if m > 0 && n < 2 {
        return Err(Error::InvalidParams(format!("need at least 2 nodes for {m} edges, got {n}")));
    }
    if t_max < 0 {
        return Err(Error::InvalidParams(format!("t_max must be non-negative, got {t_max}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let triples: Vec<(i64, i64, Timestamp)> = (0..m)
        .map(|_| {
            let src = rng.random_range(0..n);
            let mut dst = rng.random_range(0..n - 1);
            if dst >= src {
                dst += 1;
            }
            (src as i64, dst as i64, rng.random_range(0..=t_max))
        })
        .collect();
    Ok(TemporalGraph::from_labeled(triples).0)
}

/// Node labels used by [`gen_worstcase`].
pub const WORSTCASE_U: i64 = 0;
pub const WORSTCASE_V: i64 = 1;

/// Third node `w_i` of the worst-case construction, `i` in `1..=n`.
pub fn worstcase_wing(i: usize) -> i64 {
    1 + i as i64
}

/// Worst case for per-triangle counting: `n` wings `w_i` with
/// `w_i -> u` at `2i - 1` and `w_i -> v` at `2i`, then `m - 2n` edges
/// `u -> v` at times `2n + 1 ..= m`.
pub fn gen_worstcase(n: usize, m: usize) -> Result<TemporalGraph> {
    if n < 1 || m <= 2 * n {
        return Err(Error::InvalidParams(format!(
            "worst case needs m > 2n >= 2, got n={n}, m={m}"
        )));
    }
    let mut triples = Vec::with_capacity(m);
    for i in 1..=n {
        let w = worstcase_wing(i);
        triples.push((w, WORSTCASE_U, 2 * i as i64 - 1));
        triples.push((w, WORSTCASE_V, 2 * i as i64));
    }
    for t in 2 * n + 1..=m {
        triples.push((WORSTCASE_U, WORSTCASE_V, t as i64));
    }
    Ok(TemporalGraph::from_labeled(triples).0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{enumerate_triangles, load_edge_list, static_projection};
    use crate::motif::cell;

    #[test]
    fn oracle_small_cases() {
        let (empty, _) = load_edge_list("".as_bytes()).unwrap();
        assert_eq!(oracle_count(&empty, Delta::INFINITE).unwrap(), CountMatrix::zero());

        let (g, _) = load_edge_list("0 1 1\n0 1 2\n0 1 3\n".as_bytes()).unwrap();
        let m = oracle_count(&g, Delta::seconds(2)).unwrap();
        assert_eq!(m[cell(6, 1)], 1);
        assert_eq!(m.total(), 1);
        assert_eq!(oracle_count(&g, Delta::seconds(1)).unwrap().total(), 0);
    }

    #[test]
    fn oracle_refuses_large_graphs() {
        let g = gen_random(10, 201, 1000, 1).unwrap();
        assert!(matches!(
            oracle_count(&g, Delta::seconds(5)),
            Err(Error::OracleCap { edges: 201, cap: 200 })
        ));
        assert!(oracle_count_capped(&g, Delta::seconds(5), 300).is_ok());
    }

    #[test]
    fn random_generator_contract() {
        assert_eq!(gen_random(5, 0, 100, 3).unwrap().num_edges(), 0);
        let g = gen_random(2, 10, 100, 3).unwrap();
        assert_eq!(g.num_edges(), 10);
        assert_eq!(static_projection(&g).undirected_edges().len(), 1);
        assert!(g.edges().iter().all(|e| (0..=100).contains(&e.t) && e.src != e.dst));
        let a = gen_random(8, 30, 100, 42).unwrap();
        let b = gen_random(8, 30, 100, 42).unwrap();
        assert_eq!(a.edges(), b.edges());
        assert!(gen_random(1, 3, 100, 0).is_err());
        assert!(gen_random(1, 0, 100, 0).is_ok());
    }

    #[test]
    fn worstcase_construction() {
        let g = gen_worstcase(2, 6).unwrap();
        assert_eq!(g.num_edges(), 6);
        let s = static_projection(&g);
        assert_eq!(enumerate_triangles(&s).len(), 2);
        let u = g.node_of(WORSTCASE_U).unwrap();
        let v = g.node_of(WORSTCASE_V).unwrap();
        assert_eq!(s.sigma(u, v), 2);

        for (n, m) in [(1, 3), (3, 10), (7, 40)] {
            let g = gen_worstcase(n, m).unwrap();
            assert_eq!(enumerate_triangles(&static_projection(&g)).len(), n);
        }
        assert!(gen_worstcase(2, 4).is_err());
        assert!(gen_worstcase(0, 4).is_err());
    }
}
