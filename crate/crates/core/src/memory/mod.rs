//! Per-story knowledge store: append-only timestamped encoding slots plus the
//! auxiliary tables the reasoner fills (constraint queue, location and
//! position tables) and the cross-story rule memory.

use std::collections::{BTreeMap, VecDeque};
use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{Banks, CleanupPolicy, Encoding, EntityId, EntityRegistry, PositionalVector, Vector};
use crate::relation::{Compass, Side};

/// Which binder shaped the role side of a slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SlotKind {
    /// containee ⊗ container.
    Basic,
    /// actor ⊗ (next ∘ prev).
    Temporal,
    /// object ⊗ (next * prev).
    Owner,
    /// (a ⋆ b) ⊗ location.
    Group,
    /// actor ⊗ (first ⋆ second).
    Either,
    /// category ⊗ instance.
    IsA,
    /// subject ⊗ property.
    Prop,
    /// motivation ⊗ actor.
    Motive,
    /// actor ⊗ object, the reversed grab used for motivation chains.
    Acquire,
    /// containee ⊗ container for transitive size/fear relations.
    Contains,
    /// reference ⊗ subject on the north/south axis, canonical north.
    DirNS,
    /// Same on the east/west axis, canonical east.
    DirEW,
}

#[derive(Debug, Clone)]
pub struct Slot {
    pub time: usize,
    pub kind: SlotKind,
    pub enc: Encoding,
    /// Earlier slot times this encoding was inferred from (drops).
    pub sources: Vec<usize>,
    /// Produced by inference rather than read off a statement.
    pub derived: bool,
}

impl Slot {
    pub fn new(time: usize, kind: SlotKind, enc: Encoding) -> Self {
        Self { time, kind, enc, sources: Vec::new(), derived: false }
    }

    pub fn inferred(time: usize, kind: SlotKind, enc: Encoding, sources: Vec<usize>) -> Self {
        Self { time, kind, enc, sources, derived: true }
    }
}

/// One probe hit.
#[derive(Debug, Clone)]
pub struct Match {
    pub time: usize,
    pub slot: usize,
    pub kind: SlotKind,
    pub role: Vector,
    pub score: f64,
}

/// A direction or position statement waiting for one side to be known.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constraint {
    Dir { time: usize, subject: EntityId, dir: Compass, reference: EntityId },
    Pos { time: usize, subject: EntityId, side: Side, reference: EntityId },
}

impl Constraint {
    pub fn time(&self) -> usize {
        match self {
            Constraint::Dir { time, .. } | Constraint::Pos { time, .. } => *time,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MemoryError {
    #[error("slot time {got} does not follow {last}")]
    OutOfOrder { last: usize, got: usize },
    #[error("no slot matches")]
    NoMatch,
}

#[derive(Debug, Clone)]
pub struct StoryState {
    pub registry: EntityRegistry,
    slots: Vec<Slot>,
    pub deferred: VecDeque<Constraint>,
    pub loc_table: BTreeMap<EntityId, Vector>,
    pub pos_table: BTreeMap<EntityId, PositionalVector>,
    pub banks: Arc<Banks>,
    pub policy: CleanupPolicy,
}

impl StoryState {
    pub fn new(registry: EntityRegistry, banks: Arc<Banks>, policy: CleanupPolicy) -> Self {
        Self {
            registry,
            slots: Vec::new(),
            deferred: VecDeque::new(),
            loc_table: BTreeMap::new(),
            pos_table: BTreeMap::new(),
            banks,
            policy,
        }
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn slot_at(&self, time: usize) -> Option<&Slot> {
        self.slots.iter().find(|s| s.time == time)
    }

    pub fn append(&mut self, slot: Slot) -> Result<(), MemoryError> {
        if let Some(last) = self.slots.last() {
            if slot.time <= last.time {
                return Err(MemoryError::OutOfOrder { last: last.time, got: slot.time });
            }
        }
        self.slots.push(slot);
        Ok(())
    }

    fn candidates<'a>(&'a self, before: usize, kinds: &'a [SlotKind]) -> impl Iterator<Item = (usize, &'a Slot)> + 'a {
        self.slots.iter().enumerate().filter(move |(_, s)| s.time < before && kinds.contains(&s.kind))
    }

    /// Left-multiplies every eligible slot by `containee`, in time order.
    pub fn scan(&self, containee: &Vector, before: usize, kinds: &[SlotKind]) -> Vec<Match> {
        self.candidates(before, kinds)
            .filter_map(|(i, s)| {
                let p = s.enc.probe(containee).ok()?;
                Some(Match { time: s.time, slot: i, kind: s.kind, role: p.role, score: p.score })
            })
            .collect()
    }

    /// Right-multiplies every eligible slot by `container`, recovering containees.
    pub fn scan_reverse(&self, container: &Vector, before: usize, kinds: &[SlotKind]) -> Vec<Match> {
        self.candidates(before, kinds)
            .filter_map(|(i, s)| {
                let p = s.enc.probe_container(container).ok()?;
                Some(Match { time: s.time, slot: i, kind: s.kind, role: p.role, score: p.score })
            })
            .collect()
    }

    fn accepted(&self, matches: Vec<Match>) -> impl DoubleEndedIterator<Item = Match> {
        let threshold = self.policy.score;
        matches.into_iter().filter(move |m| m.score >= threshold)
    }

    pub fn most_recent(&self, containee: &Vector, before: usize, kinds: &[SlotKind]) -> Result<Match, MemoryError> {
        self.accepted(self.scan(containee, before, kinds)).next_back().ok_or(MemoryError::NoMatch)
    }

    pub fn earliest(&self, containee: &Vector, before: usize, kinds: &[SlotKind]) -> Result<Match, MemoryError> {
        self.accepted(self.scan(containee, before, kinds)).next().ok_or(MemoryError::NoMatch)
    }

    pub fn hits(&self, containee: &Vector, before: usize, kinds: &[SlotKind]) -> Vec<Match> {
        self.accepted(self.scan(containee, before, kinds)).collect()
    }

    pub fn most_recent_reverse(&self, container: &Vector, before: usize, kinds: &[SlotKind]) -> Result<Match, MemoryError> {
        self.accepted(self.scan_reverse(container, before, kinds)).next_back().ok_or(MemoryError::NoMatch)
    }

    pub fn hits_reverse(&self, container: &Vector, before: usize, kinds: &[SlotKind]) -> Vec<Match> {
        self.accepted(self.scan_reverse(container, before, kinds)).collect()
    }
}

/// Induced motivation rules, keyed by motivation word. Counts let repeated
/// observations across stories vote.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RuleMemory {
    rules: BTreeMap<String, RuleTally>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RuleTally {
    pub locations: BTreeMap<String, usize>,
    pub objects: BTreeMap<String, usize>,
}

fn argmax(counts: &BTreeMap<String, usize>) -> Option<&str> {
    // BTreeMap order makes ties resolve to the lexicographically first word.
    counts.iter().fold(None, |best: Option<(&String, usize)>, (k, &v)| match best {
        Some((_, bv)) if bv >= v => best,
        _ => Some((k, v)),
    }).map(|(k, _)| k.as_str())
}

impl RuleMemory {
    pub fn record_location(&mut self, motive: &str, location: &str) {
        *self.rules.entry(motive.to_string()).or_default().locations.entry(location.to_string()).or_default() += 1;
    }

    pub fn record_object(&mut self, motive: &str, object: &str) {
        *self.rules.entry(motive.to_string()).or_default().objects.entry(object.to_string()).or_default() += 1;
    }

    pub fn location_for(&self, motive: &str) -> Option<&str> {
        self.rules.get(motive).and_then(|t| argmax(&t.locations))
    }

    pub fn object_for(&self, motive: &str) -> Option<&str> {
        self.rules.get(motive).and_then(|t| argmax(&t.objects))
    }

    /// Order-independent merge.
    pub fn merge(&mut self, other: &RuleMemory) {
        for (motive, tally) in &other.rules {
            let mine = self.rules.entry(motive.clone()).or_default();
            for (k, v) in &tally.locations {
                *mine.locations.entry(k.clone()).or_default() += v;
            }
            for (k, v) in &tally.objects {
                *mine.objects.entry(k.clone()).or_default() += v;
            }
        }
    }

    pub fn motives(&self) -> impl Iterator<Item = &str> {
        self.rules.keys().map(String::as_str)
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }
}
