//! Sliding-window subsequence counting over a small edge alphabet, and the
//! 2-node motif counter built on it.
//!
//! [`PrefixCountTable`] keeps, for every key of length `r < l`, the number of
//! ordered subsequences matching it inside the current window. Length-`l`
//! keys only ever grow: they accumulate instances over all windows. Keys
//! are stored densely by fixed-radix encoding, one array per length.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{static_projection, NodeId, StaticGraph, TemporalGraph, Timestamp};
use crate::instrument::{Counted, Work};
use crate::motif::{grid_index, GridCell, Motif};

/// Maximum time span of a motif instance, in seconds. `Delta::INFINITE`
/// removes the constraint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Delta(u64);

impl Delta {
    pub const INFINITE: Delta = Delta(u64::MAX);

    pub const fn seconds(s: u64) -> Delta {
        Delta(s)
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self == Delta::INFINITE
    }

    /// Whether two edges at `earlier <= later` fit in one window, i.e.
    /// `later - earlier <= delta`.
    #[inline]
    pub fn admits(self, earlier: Timestamp, later: Timestamp) -> bool {
        (later as i128 - earlier as i128) <= self.0 as i128
    }
}

impl fmt::Display for Delta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl FromStr for Delta {
    type Err = Error;

    fn from_str(s: &str) -> Result<Delta> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") {
            return Ok(Delta::INFINITE);
        }
        s.parse::<u64>()
            .map(Delta)
            .map_err(|_| Error::InvalidParams(format!("delta must be a non-negative integer or \"inf\", got {s:?}")))
    }
}

/// Finite values serialize as integers, the infinite one as `"inf"`.
impl serde::Serialize for Delta {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_u64(self.0)
        }
    }
}

impl<'de> serde::Deserialize<'de> for Delta {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Delta, D::Error> {
        #[derive(serde::Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(n) => Ok(Delta(n)),
            Raw::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Letter of a local edge alphabet, e.g. `u -> v` vs `v -> u` for a pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeKey(pub u8);

const MAX_ALPHABET: usize = 8;
const MAX_LEN: usize = 6;

#[derive(Clone, Debug)]
pub struct PrefixCountTable {
    alphabet: usize,
    len: usize,
    levels: Vec<Vec<u64>>,
}

impl PrefixCountTable {
    pub fn new(alphabet: usize, len: usize) -> Result<Self> {
        if !(1..=MAX_ALPHABET).contains(&alphabet) || !(1..=MAX_LEN).contains(&len) {
            return Err(Error::InvalidParams(format!(
                "alphabet {alphabet} / length {len} outside 1..={MAX_ALPHABET} / 1..={MAX_LEN}"
            )));
        }
        let levels = (1..=len).map(|r| vec![0; alphabet.pow(r as u32)]).collect();
        Ok(PrefixCountTable { alphabet, len, levels })
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn key_len(&self) -> usize {
        self.len
    }

    /// An edge leaves the window. Updates keys in ascending length so each
    /// suffix count already excludes the departing edge.
    pub fn decrement(&mut self, e: EdgeKey) -> Result<()> {
        let e = self.letter(e)?;
        if self.len == 1 {
            // Single letters are the final level and only accumulate.
            return Ok(());
        }
        let slot = &mut self.levels[0][e];
        *slot = slot
            .checked_sub(1)
            .ok_or_else(|| Error::Invariant("window count went negative".into()))?;
        for r in 1..self.len.saturating_sub(1) {
            let width = self.alphabet.pow(r as u32);
            let (shorter, longer) = self.levels.split_at_mut(r);
            let suffixes = &shorter[r - 1];
            let target = &mut longer[0][e * width..(e + 1) * width];
            for (t, &s) in target.iter_mut().zip(suffixes) {
                *t = t
                    .checked_sub(s)
                    .ok_or_else(|| Error::Invariant("prefix count went negative".into()))?;
            }
        }
        Ok(())
    }

    /// An edge enters the window. Updates keys in descending length so each
    /// prefix count does not yet include the arriving edge.
    pub fn increment(&mut self, e: EdgeKey) -> Result<()> {
        let e = self.letter(e)?;
        for r in (1..self.len).rev() {
            let (shorter, longer) = self.levels.split_at_mut(r);
            let prefixes = &shorter[r - 1];
            let target = &mut longer[0];
            for (p, &count) in prefixes.iter().enumerate() {
                let slot = &mut target[p * self.alphabet + e];
                *slot = slot.checked_add(count).ok_or(Error::Overflow)?;
            }
        }
        self.levels[0][e] = self.levels[0][e].checked_add(1).ok_or(Error::Overflow)?;
        Ok(())
    }

    /// Current value of a key of length `1..=len`.
    pub fn get(&self, key: &[EdgeKey]) -> u64 {
        assert!(!key.is_empty() && key.len() <= self.len, "key length out of range");
        let index = key
            .iter()
            .fold(0usize, |acc, k| acc * self.alphabet + k.0 as usize);
        self.levels[key.len() - 1][index]
    }

    fn letter(&self, e: EdgeKey) -> Result<usize> {
        let e = e.0 as usize;
        if e >= self.alphabet {
            return Err(Error::InvalidParams(format!(
                "edge key {e} outside alphabet of size {}",
                self.alphabet
            )));
        }
        Ok(e)
    }
}

/// Final length-`l` counts of one sliding-window run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsequenceCounts {
    alphabet: usize,
    len: usize,
    counts: Vec<u64>,
    work: Work,
}

impl SubsequenceCounts {
    pub fn get(&self, key: &[EdgeKey]) -> u64 {
        assert_eq!(key.len(), self.len, "key length must equal pattern length");
        self.counts[self.encode(key)]
    }

    /// Counts indexed by the fixed-radix encoding of the key.
    pub fn raw(&self) -> &[u64] {
        &self.counts
    }

    pub fn work(&self) -> Work {
        self.work
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn key_len(&self) -> usize {
        self.len
    }

    /// Every key of length `l` with its count.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<EdgeKey>, u64)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .map(move |(i, &c)| (decode(i, self.alphabet, self.len), c))
    }

    fn encode(&self, key: &[EdgeKey]) -> usize {
        key.iter()
            .fold(0usize, |acc, k| acc * self.alphabet + k.0 as usize)
    }
}

/// Inverse of the fixed-radix key encoding.
pub fn decode(mut index: usize, alphabet: usize, len: usize) -> Vec<EdgeKey> {
    let mut key = vec![EdgeKey(0); len];
    for slot in key.iter_mut().rev() {
        *slot = EdgeKey((index % alphabet) as u8);
        index /= alphabet;
    }
    key
}

/// Counts, for every length-`len` key, the ordered subsequences of `events`
/// matching it whose first and last timestamps are at most `delta` apart.
///
/// `events` must be sorted by timestamp; equal timestamps are taken in the
/// given order.
pub fn count_subsequences(
    events: &[(EdgeKey, Timestamp)],
    delta: Delta,
    len: usize,
    alphabet: usize,
) -> Result<SubsequenceCounts> {
    let mut table = PrefixCountTable::new(alphabet, len)?;
    let mut start = 0;
    let mut touched = 0u64;
    for (end, &(key, t)) in events.iter().enumerate() {
        if end > 0 && events[end - 1].1 > t {
            return Err(Error::Unsorted { position: end });
        }
        while !delta.admits(events[start].1, t) {
            table.decrement(events[start].0)?;
            touched += 1;
            start += 1;
        }
        table.increment(key)?;
        touched += 1;
    }
    // Records still in the window leave it when the run ends.
    touched += (events.len() - start) as u64;
    let counts = table.levels.pop().expect("len >= 1");
    Ok(SubsequenceCounts {
        alphabet,
        len,
        counts,
        work: Work {
            events_processed: touched,
            sequences_run: 1,
        },
    })
}

/// Key `0` is `u -> v`, key `1` is `v -> u`.
pub const PAIR_FORWARD: EdgeKey = EdgeKey(0);
pub const PAIR_BACKWARD: EdgeKey = EdgeKey(1);

/// Counts all `2^len` direction patterns on the merged edge sequence of a
/// node pair.
pub fn count_pair(graph: &TemporalGraph, u: NodeId, v: NodeId, delta: Delta, len: usize) -> Result<SubsequenceCounts> {
    let events: Vec<(EdgeKey, Timestamp)> = graph
        .merged_pair(u, v)
        .into_iter()
        .map(|(id, backward)| {
            let key = if backward { PAIR_BACKWARD } else { PAIR_FORWARD };
            (key, graph.edge(id).t)
        })
        .collect();
    count_subsequences(&events, delta, len, 2)
}

/// Grid cell of each 3-edge direction pattern on a pair, indexed by the
/// pattern's encoding (`4*d1 + 2*d2 + d3`, `0` = forward).
pub fn two_node_cells() -> [GridCell; 8] {
    std::array::from_fn(|index| {
        let pairs: Vec<(u8, u8)> = decode(index, 2, 3)
            .into_iter()
            .map(|k| if k == PAIR_FORWARD { (0, 1) } else { (1, 0) })
            .collect();
        let motif = Motif::from_pairs(&pairs).expect("pair patterns are connected");
        grid_index(&motif).expect("2-node patterns are in the grid")
    })
}

/// Counts the four 2-node motifs over every node pair.
pub fn count_all_2node(graph: &TemporalGraph, delta: Delta) -> Result<Counted> {
    count_all_2node_with(graph, &static_projection(graph), delta)
}

pub(crate) fn count_all_2node_with(graph: &TemporalGraph, stat: &StaticGraph, delta: Delta) -> Result<Counted> {
    let cells = two_node_cells();
    stat.undirected_edges()
        .par_iter()
        .map(|&(u, v)| {
            let counts = count_pair(graph, u, v, delta, 3)?;
            let mut out = Counted {
                work: counts.work(),
                ..Counted::default()
            };
            for (i, &c) in counts.raw().iter().enumerate() {
                out.matrix.add(cells[i], c)?;
            }
            Ok(out)
        })
        .try_reduce(Counted::default, Counted::combine)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::load_edge_list;
    use crate::motif::cell;

    const A: EdgeKey = EdgeKey(0);
    const B: EdgeKey = EdgeKey(1);

    fn brute_force(events: &[(EdgeKey, Timestamp)], delta: Delta, key: &[EdgeKey]) -> u64 {
        // Independent check over index triples / pairs.
        let mut total = 0;
        let mut idx = vec![0usize; key.len()];
        fn rec(
            events: &[(EdgeKey, Timestamp)],
            delta: Delta,
            key: &[EdgeKey],
            idx: &mut Vec<usize>,
            depth: usize,
            from: usize,
            total: &mut u64,
        ) {
            if depth == key.len() {
                let first = events[idx[0]].1;
                let last = events[idx[key.len() - 1]].1;
                if last - first <= delta.get().min(i64::MAX as u64) as i64 {
                    *total += 1;
                }
                return;
            }
            for i in from..events.len() {
                if events[i].0 == key[depth] {
                    idx[depth] = i;
                    rec(events, delta, key, idx, depth + 1, i + 1, total);
                }
            }
        }
        rec(events, delta, key, &mut idx, 0, 0, &mut total);
        total
    }

    #[test]
    fn single_letters_survive_eviction() {
        let events = [(A, 0), (B, 50), (A, 100)];
        let c = count_subsequences(&events, Delta::seconds(1), 1, 2).unwrap();
        assert_eq!(c.get(&[A]), 2);
        assert_eq!(c.get(&[B]), 1);
    }

    #[test]
    fn two_letter_example_wide_window() {
        let events = [(A, 1), (B, 2), (A, 3), (B, 4)];
        let c = count_subsequences(&events, Delta::seconds(10), 2, 2).unwrap();
        assert_eq!(c.get(&[A, A]), 1);
        assert_eq!(c.get(&[A, B]), 3);
        assert_eq!(c.get(&[B, A]), 1);
        assert_eq!(c.get(&[B, B]), 1);
        for key in [[A, A], [A, B], [B, A], [B, B]] {
            assert_eq!(c.get(&key), brute_force(&events, Delta::seconds(10), &key));
        }
    }

    #[test]
    fn two_letter_example_narrow_window() {
        let events = [(A, 1), (B, 2), (A, 3), (B, 4)];
        let c = count_subsequences(&events, Delta::seconds(1), 2, 2).unwrap();
        assert_eq!(c.get(&[A, B]), 2);
        assert_eq!(c.get(&[B, A]), 1);
        assert_eq!(c.get(&[A, A]), 0);
        assert_eq!(c.get(&[B, B]), 0);
    }

    #[test]
    fn inclusive_window_edge() {
        let events = [(A, 1), (A, 2), (A, 3)];
        let c = count_subsequences(&events, Delta::seconds(2), 3, 1).unwrap();
        assert_eq!(c.get(&[A, A, A]), 1);
        let c = count_subsequences(&events, Delta::seconds(1), 3, 1).unwrap();
        assert_eq!(c.get(&[A, A, A]), 0);
    }

    #[test]
    fn rejects_unsorted_and_bad_keys() {
        let events = [(A, 3), (B, 2)];
        assert!(matches!(
            count_subsequences(&events, Delta::seconds(5), 2, 2),
            Err(Error::Unsorted { position: 1 })
        ));
        assert!(count_subsequences(&[(EdgeKey(5), 1)], Delta::seconds(1), 2, 2).is_err());
        assert!(PrefixCountTable::new(0, 3).is_err());
        assert!(PrefixCountTable::new(2, 0).is_err());
    }

    #[test]
    fn overflow_is_reported() {
        let mut table = PrefixCountTable::new(1, 1).unwrap();
        table.levels[0][0] = u64::MAX;
        assert!(matches!(table.increment(A), Err(Error::Overflow)));
    }

    #[test]
    fn every_record_is_touched_twice() {
        let events: Vec<_> = (0..17).map(|i| (EdgeKey((i % 3) as u8), i * 7 % 5 + i)).collect();
        let mut sorted = events.clone();
        sorted.sort_by_key(|e| e.1);
        for delta in [0, 3, 100] {
            let c = count_subsequences(&sorted, Delta::seconds(delta), 3, 3).unwrap();
            assert_eq!(c.work().events_processed, 2 * sorted.len() as u64);
        }
    }

    #[test]
    fn delta_parsing() {
        assert_eq!("inf".parse::<Delta>().unwrap(), Delta::INFINITE);
        assert_eq!("3600".parse::<Delta>().unwrap(), Delta::seconds(3600));
        assert!("-1".parse::<Delta>().is_err());
        assert!("1h".parse::<Delta>().is_err());
        assert!(Delta::INFINITE.admits(i64::MIN, i64::MAX));
        assert_eq!(Delta::INFINITE.to_string(), "inf");
    }

    #[test]
    fn pair_examples() {
        let (g, _) = load_edge_list("0 1 1\n1 0 2\n0 1 3\n".as_bytes()).unwrap();
        let c = count_pair(&g, 0, 1, Delta::seconds(2), 3).unwrap();
        for (key, n) in c.iter() {
            let expected = u64::from(key == [A, B, A]);
            assert_eq!(n, expected, "{key:?}");
        }

        let (g, _) = load_edge_list("0 1 1\n0 1 5\n".as_bytes()).unwrap();
        let c = count_pair(&g, 0, 1, Delta::seconds(2), 2).unwrap();
        assert!(c.raw().iter().all(|&n| n == 0));

        let text: String = (0..7).map(|t| format!("0 1 {t}\n")).collect();
        let (g, _) = load_edge_list(text.as_bytes()).unwrap();
        let c = count_pair(&g, 0, 1, Delta::seconds(10), 3).unwrap();
        assert_eq!(c.get(&[A, A, A]), 35);
    }

    #[test]
    fn two_node_cell_table() {
        let cells = two_node_cells();
        assert_eq!(cells[0b000], cell(6, 1));
        assert_eq!(cells[0b010], cell(5, 1));
        assert_eq!(cells[0b011], cell(5, 2));
        assert_eq!(cells[0b001], cell(6, 2));
        // Reversing every direction lands in the same cell.
        for i in 0..8 {
            assert_eq!(cells[i], cells[7 - i]);
        }
    }

    #[test]
    fn all_2node_examples() {
        let (g, _) = load_edge_list("".as_bytes()).unwrap();
        assert_eq!(count_all_2node(&g, Delta::seconds(10)).unwrap().matrix.total(), 0);

        let (g, _) = load_edge_list("0 1 1\n0 1 2\n0 1 3\n".as_bytes()).unwrap();
        let counted = count_all_2node(&g, Delta::seconds(10)).unwrap();
        assert_eq!(counted.matrix[cell(6, 1)], 1);
        assert_eq!(counted.matrix.total(), 1);
        assert_eq!(counted.work.events_processed, 6);
    }
}
