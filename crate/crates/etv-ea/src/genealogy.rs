//! Event identity and lineage bookkeeping.
//!
//! Every reproduction is an event with a fresh id. An offspring inherits the
//! lineage window of its genetically closest (dominant) parent only, shifted
//! one step deeper and truncated, so each individual carries O(1) history.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::bench::Bounds;
use crate::ops::Operator;
use crate::scalar::Real;

/// Identifier of a reproduction event. 0 is reserved for individuals created
/// by population initialization and never enters the archive.
pub type EventId = u64;

/// Default number of ancestors kept beyond the individual's own event.
pub const DEFAULT_LINEAGE_DEPTH: usize = 6;

/// One entry of a lineage window: an ancestor event and the operator that
/// produced it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowEntry {
    pub event: EventId,
    pub operator: Operator,
}

/// The ancestor chain of one individual along dominant parents.
///
/// `entries()[x]` is the event at distance `x`; index 0 is the individual's
/// own event. The window holds at most `depth + 1` entries. The event that
/// forwards credit from distance `x` toward the population (`link_for`) is
/// the chain entry at distance `x - 1`; at distance 0 it is the individual's
/// own event, which identifies the surviving solution itself.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LineageWindow {
    entries: Vec<WindowEntry>,
}

impl LineageWindow {
    /// Window of an initialization individual: no events at all.
    pub fn empty() -> Self {
        LineageWindow::default()
    }

    /// Window for a fresh offspring: itself, then the dominant parent's
    /// chain pushed one step deeper, truncated to `depth` ancestors.
    pub fn for_child(
        event: EventId,
        operator: Operator,
        dominant: &LineageWindow,
        depth: usize,
    ) -> Self {
        let mut entries = Vec::with_capacity(depth + 1);
        entries.push(WindowEntry { event, operator });
        entries.extend(dominant.entries.iter().take(depth).copied());
        LineageWindow { entries }
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[WindowEntry] {
        &self.entries
    }

    /// The event through which credit at distance `x` reaches the current
    /// population.
    pub fn link_for(&self, x: usize) -> EventId {
        if x == 0 {
            self.entries[0].event
        } else {
            self.entries[x - 1].event
        }
    }
}

/// Monotone source of fresh event ids, starting at 1.
#[derive(Debug, Default)]
pub struct EventCounter {
    next: EventId,
}

impl EventCounter {
    pub fn new() -> Self {
        EventCounter { next: 0 }
    }

    pub fn next_id(&mut self) -> EventId {
        self.next += 1;
        self.next
    }
}

/// Index of the parent genetically closest to the child (normalized
/// Euclidean distance); ties go to the first-drawn parent.
pub fn dominant_parent<T: Real>(parents: &[&[T]], child: &[T], bounds: &Bounds<T>) -> usize {
    let mut best = 0;
    let mut best_d = crate::ea::normalized_distance(parents[0], child, bounds);
    for (k, p) in parents.iter().enumerate().skip(1) {
        let d = crate::ea::normalized_distance(p, child, bounds);
        if d < best_d {
            best_d = d;
            best = k;
        }
    }
    best
}

/// One line of the optional per-run event log.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum LogRecord {
    /// A reproduction event: its id, operator, the parents' event ids and
    /// which of those was dominant (0 for an initialization parent).
    Event {
        gen: u32,
        id: EventId,
        op: Operator,
        parents: Vec<EventId>,
        dominant: EventId,
    },
    /// Event ids of the population that survived culling this generation.
    Survivors { gen: u32, events: Vec<EventId> },
}

/// In-memory event log, serializable as JSON lines.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct EventLog {
    pub records: Vec<LogRecord>,
}

impl EventLog {
    pub fn new() -> Self {
        EventLog::default()
    }

    pub fn push(&mut self, record: LogRecord) {
        self.records.push(record);
    }

    pub fn write_jsonl<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for record in &self.records {
            serde_json::to_writer(&mut out, record)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn read_jsonl<R: BufRead>(input: R) -> std::io::Result<EventLog> {
        let mut log = EventLog::new();
        for line in input.lines() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            log.push(serde_json::from_str(&line)?);
        }
        Ok(log)
    }
}
