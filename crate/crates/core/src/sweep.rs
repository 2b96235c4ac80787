//! The shared pre/post window sweep behind the fast star and triangle
//! counters.
//!
//! For the current event `j` the pre window holds earlier events with
//! `t >= t_j - delta` and the post window holds later events with
//! `t <= t_j + delta`. Each step pops the current event from the post window,
//! lets the counter process it, then pushes it onto the pre window.

use crate::error::{Error, Result};
use crate::graph::Timestamp;
use crate::instrument::Work;
use crate::window::Delta;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Side {
    Pre,
    Post,
}

pub(crate) trait Subroutines<E> {
    fn push(&mut self, side: Side, event: &E);
    fn pop(&mut self, side: Side, event: &E);
    fn process_current(&mut self, event: &E);
}

pub(crate) fn sweep<E, C>(events: &[E], time: impl Fn(&E) -> Timestamp, delta: Delta, counter: &mut C) -> Result<Work>
where
    C: Subroutines<E>,
{
    if let Some(i) = (1..events.len()).find(|&i| time(&events[i - 1]) > time(&events[i])) {
        return Err(Error::Unsorted { position: i });
    }
    let (mut start, mut end) = (0, 0);
    let mut touched = 0u64;
    for (j, current) in events.iter().enumerate() {
        let tj = time(current);
        while !delta.admits(time(&events[start]), tj) {
            counter.pop(Side::Pre, &events[start]);
            touched += 1;
            start += 1;
        }
        while end < events.len() && delta.admits(tj, time(&events[end])) {
            counter.push(Side::Post, &events[end]);
            touched += 1;
            end += 1;
        }
        counter.pop(Side::Post, current);
        counter.process_current(current);
        counter.push(Side::Pre, current);
        debug_assert!(start <= j);
    }
    touched += (events.len() - start) as u64;
    Ok(Work {
        events_processed: touched,
        sequences_run: 1,
    })
}
