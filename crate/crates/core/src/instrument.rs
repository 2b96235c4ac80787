use std::ops::{Add, AddAssign};
use std::time::Duration;

use serde::Serialize;

use crate::error::Result;
use crate::motif::CountMatrix;

/// Work done by the sliding-window counters.
///
/// `events_processed` counts every time an edge record enters or leaves a
/// counting window; a record that is still inside the window when its run
/// ends is counted as leaving at that point. Every record therefore
/// contributes exactly two.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Work {
    pub events_processed: u64,
    pub sequences_run: u64,
}

impl Work {
    pub fn run(records: usize) -> Work {
        Work {
            events_processed: 2 * records as u64,
            sequences_run: 1,
        }
    }
}

impl Add for Work {
    type Output = Work;

    fn add(self, rhs: Work) -> Work {
        Work {
            events_processed: self.events_processed + rhs.events_processed,
            sequences_run: self.sequences_run + rhs.sequences_run,
        }
    }
}

impl AddAssign for Work {
    fn add_assign(&mut self, rhs: Work) {
        *self = *self + rhs;
    }
}

/// A count matrix together with the work spent producing it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Counted {
    pub matrix: CountMatrix,
    pub work: Work,
}

impl Counted {
    pub fn combine(mut self, other: Counted) -> Result<Counted> {
        self.matrix.merge(&other.matrix)?;
        self.work += other.work;
        Ok(self)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct InstrumentationReport {
    pub events_processed: u64,
    pub sequences_run: u64,
    #[serde(serialize_with = "as_secs")]
    pub wall_time: Duration,
}

impl InstrumentationReport {
    pub fn new(work: Work, wall_time: Duration) -> Self {
        InstrumentationReport {
            events_processed: work.events_processed,
            sequences_run: work.sequences_run,
            wall_time,
        }
    }
}

fn as_secs<S: serde::Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}
