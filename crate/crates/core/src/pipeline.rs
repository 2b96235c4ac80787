//! Full motif counts: 2-node, star and triangle counters combined.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{static_projection, TemporalGraph};
use crate::instrument::Counted;
use crate::star::{count_all_stars_baseline, count_all_stars_fast_with};
use crate::triangle::{count_all_triangles_baseline, count_all_triangles_fast_with};
use crate::window::{count_all_2node_with, Delta};

/// Which motif classes to count.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassSet {
    pub pair: bool,
    pub star: bool,
    pub triangle: bool,
}

impl ClassSet {
    pub const ALL: ClassSet = ClassSet {
        pair: true,
        star: true,
        triangle: true,
    };
    pub const NONE: ClassSet = ClassSet {
        pair: false,
        star: false,
        triangle: false,
    };

    pub fn names(self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.pair {
            out.push("pair");
        }
        if self.star {
            out.push("star");
        }
        if self.triangle {
            out.push("triangle");
        }
        out
    }
}

impl FromStr for ClassSet {
    type Err = Error;

    /// Comma separated subset of `pair`, `star`, `triangle`, or `all`.
    /// The empty string selects nothing.
    fn from_str(s: &str) -> Result<ClassSet> {
        let mut set = ClassSet::NONE;
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            match part {
                "pair" => set.pair = true,
                "star" => set.star = true,
                "triangle" => set.triangle = true,
                "all" => set = ClassSet::ALL,
                other => return Err(Error::InvalidParams(format!("unknown motif class {other:?}"))),
            }
        }
        Ok(set)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algorithm {
    /// Single-pass star counter and pair-assignment triangle counter.
    Fast,
    /// Per neighbour-pair and per-triangle subsequence counting.
    Baseline,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Fast => "fast",
            Algorithm::Baseline => "baseline",
        })
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Algorithm> {
        match s {
            "fast" => Ok(Algorithm::Fast),
            "baseline" => Ok(Algorithm::Baseline),
            other => Err(Error::InvalidParams(format!("unknown algorithm {other:?}"))),
        }
    }
}

/// Counts the requested classes; cells of other classes stay zero.
pub fn count_motifs(graph: &TemporalGraph, delta: Delta, classes: ClassSet, algorithm: Algorithm) -> Result<Counted> {
    let stat = static_projection(graph);
    let mut total = Counted::default();
    if classes.pair {
        total = total.combine(count_all_2node_with(graph, &stat, delta)?)?;
    }
    if classes.star {
        let stars = match algorithm {
            Algorithm::Fast => count_all_stars_fast_with(graph, &stat, delta)?,
            Algorithm::Baseline => count_all_stars_baseline(graph, delta)?,
        };
        total = total.combine(stars)?;
    }
    if classes.triangle {
        let triangles = match algorithm {
            Algorithm::Fast => count_all_triangles_fast_with(graph, &stat, delta)?,
            Algorithm::Baseline => count_all_triangles_baseline(graph, delta)?,
        };
        total = total.combine(triangles)?;
    }
    Ok(total)
}

/// All 36 cells with the fast counters.
pub fn count_all(graph: &TemporalGraph, delta: Delta) -> Result<Counted> {
    count_motifs(graph, delta, ClassSet::ALL, Algorithm::Fast)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_set_parsing() {
        assert_eq!("".parse::<ClassSet>().unwrap(), ClassSet::NONE);
        assert_eq!("all".parse::<ClassSet>().unwrap(), ClassSet::ALL);
        let s: ClassSet = "star, triangle".parse().unwrap();
        assert!(!s.pair && s.star && s.triangle);
        assert!("wedge".parse::<ClassSet>().is_err());
        assert_eq!(ClassSet::ALL.names(), vec!["pair", "star", "triangle"]);
    }

    #[test]
    fn algorithm_parsing() {
        assert_eq!("fast".parse::<Algorithm>().unwrap(), Algorithm::Fast);
        assert_eq!("baseline".parse::<Algorithm>().unwrap(), Algorithm::Baseline);
        assert!("quick".parse::<Algorithm>().is_err());
    }
}
