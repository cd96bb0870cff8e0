use crate::algebra::{BinderKind, EntityId};
use crate::memory::{Match, SlotKind};
use crate::parser::QuestionForm;
use crate::relation::Stamp;

use super::{Answer, Inference, ReasonError, Result, StorySession, Ternary, TraceStep};

/// An actor's latest location evidence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Whereabouts {
    At(EntityId),
    Among(EntityId, EntityId),
}

/// One ownership transition of an object.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Transfer {
    pub time: usize,
    pub next: EntityId,
    pub prev: EntityId,
}

const LOCATION_KINDS: [SlotKind; 4] = [SlotKind::Basic, SlotKind::Temporal, SlotKind::Either, SlotKind::Group];

/// (location, time the item entered it)
type Trajectory = Vec<(EntityId, Option<usize>)>;

fn step(m: &Match) -> TraceStep {
    TraceStep { time: m.time, kind: m.kind, score: m.score }
}

impl StorySession<'_> {
    /// Latest location evidence for `actor` strictly before `before`.
    pub(crate) fn whereabouts(&self, actor: EntityId, before: usize) -> Result<(Whereabouts, TraceStep)> {
        let v = self.vec_of(actor);
        let threshold = self.state.policy.score;
        for (i, slot) in self.state.slots().iter().enumerate().rev() {
            if slot.time >= before || !LOCATION_KINDS.contains(&slot.kind) {
                continue;
            }
            if slot.kind == SlotKind::Group {
                if let Some(found) = self.group_member_location(i, actor)? {
                    return Ok(found);
                }
                continue;
            }
            let p = slot.enc.probe(&v)?;
            if p.score < threshold || slot.derived {
                continue;
            }
            let at = TraceStep { time: slot.time, kind: slot.kind, score: p.score };
            let w = match slot.kind {
                SlotKind::Basic => Whereabouts::At(self.resolve(&p.role)?),
                SlotKind::Temporal => Whereabouts::At(self.unpair(BinderKind::Temporal, &p.role)?.0),
                _ => match self.unpair(BinderKind::Conj, &p.role)? {
                    (a, b) if a == b => Whereabouts::At(a),
                    (a, b) => Whereabouts::Among(a, b),
                },
            };
            return Ok((w, at));
        }
        Err(ReasonError::NoMatch(self.label(actor)))
    }

    /// Right-multiplies a group slot by each registered entity to recover
    /// the conjoined members, then checks `actor` against them.
    fn group_member_location(&self, index: usize, actor: EntityId) -> Result<Option<(Whereabouts, TraceStep)>> {
        let slot = &self.state.slots()[index];
        for e in self.state.registry.iter() {
            let p = slot.enc.probe_container(&e.values)?;
            if p.score < self.state.policy.score {
                continue;
            }
            let (a, b) = self.unpair(BinderKind::Conj, &p.role)?;
            if a == actor || b == actor {
                let at = TraceStep { time: slot.time, kind: slot.kind, score: p.score };
                return Ok(Some((Whereabouts::At(e.id), at)));
            }
        }
        Ok(None)
    }

    pub fn locate_actor(&self, actor: &str, t: usize) -> Result<Inference> {
        let id = self.id(actor)?;
        match self.whereabouts(id, t)? {
            (Whereabouts::At(loc), at) => Ok(Inference::new(Answer::Entity(self.label(loc))).with(at)),
            (Whereabouts::Among(..), _) => Err(ReasonError::NoMatch(actor.to_string())),
        }
    }

    pub fn locate_object(&self, object: &str, t: usize) -> Result<Inference> {
        let v = self.vec_of(self.id(object)?);
        let hit = self
            .state
            .most_recent(&v, t, &[SlotKind::Basic])
            .map_err(|_| ReasonError::NoMatch(object.to_string()))?;
        let slot = &self.state.slots()[hit.slot];
        let container = self.resolve(&hit.role)?;
        if slot.derived {
            let mut inf = Inference::new(Answer::Entity(self.label(container))).with(step(&hit));
            for &s in &slot.sources {
                if let Some(src) = self.state.slot_at(s) {
                    inf = inf.with(TraceStep { time: s, kind: src.kind, score: 1.0 });
                }
            }
            return Ok(inf);
        }
        match self.whereabouts(container, t)? {
            (Whereabouts::At(loc), at) => Ok(Inference::new(Answer::Entity(self.label(loc))).with(step(&hit)).with(at)),
            (Whereabouts::Among(..), _) => Err(ReasonError::NoMatch(object.to_string())),
        }
    }

    pub fn yesno_location(&self, actor: &str, location: &str, t: usize) -> Result<Inference> {
        let id = self.id(actor)?;
        let loc = self.state.registry.id_of(location);
        let (w, at) = self.whereabouts(id, t)?;
        let answer = match w {
            Whereabouts::At(l) if Some(l) == loc => Ternary::Yes,
            Whereabouts::At(_) => Ternary::No,
            Whereabouts::Among(a, b) if Some(a) == loc || Some(b) == loc => Ternary::Maybe,
            Whereabouts::Among(..) => Ternary::No,
        };
        Ok(Inference::new(Answer::YesNoMaybe(answer)).with(at))
    }

    /// Location history of an item as (location, time the item entered it).
    fn trajectory(&self, item: EntityId, t: usize) -> Result<(Trajectory, Vec<TraceStep>)> {
        let v = self.vec_of(item);
        let events = self.state.hits(&v, t, &[SlotKind::Basic]);
        if events.is_empty() {
            // An actor: its own moves.
            let moves = self.state.hits(&v, t, &[SlotKind::Temporal, SlotKind::Basic]);
            if moves.is_empty() {
                return Err(ReasonError::NoMatch(self.label(item)));
            }
            let mut traj = vec![];
            for m in &moves {
                let loc = match m.kind {
                    SlotKind::Temporal => self.unpair(BinderKind::Temporal, &m.role)?.0,
                    _ => self.resolve(&m.role)?,
                };
                push_distinct(&mut traj, loc, Some(m.time));
            }
            return Ok((traj, Vec::new()));
        }

        let mut traj: Vec<(EntityId, Option<usize>)> = Vec::new();
        let mut carrier: Option<(EntityId, usize)> = None;
        for ev in &events {
            if let Some((actor, from)) = carrier {
                self.follow(actor, from, ev.time, &mut traj)?;
            }
            let slot = &self.state.slots()[ev.slot];
            let container = self.resolve(&ev.role)?;
            if slot.derived {
                push_distinct(&mut traj, container, Some(ev.time));
                carrier = None;
            } else {
                match self.whereabouts(container, ev.time) {
                    Ok((Whereabouts::At(loc), at)) => push_distinct(&mut traj, loc, Some(at.time)),
                    _ => push_distinct(&mut traj, self.nowhere(), None),
                }
                carrier = Some((container, ev.time));
            }
        }
        if let Some((actor, from)) = carrier {
            self.follow(actor, from, t, &mut traj)?;
        }
        let last = events.last().map(step).into_iter().collect();
        Ok((traj, last))
    }

    /// Appends the carrier's transitions in (from, until) by unbinding its
    /// temporal slots.
    fn follow(&self, actor: EntityId, from: usize, until: usize, traj: &mut Vec<(EntityId, Option<usize>)>) -> Result<()> {
        let v = self.vec_of(actor);
        for m in self.state.hits(&v, until, &[SlotKind::Temporal, SlotKind::Basic]) {
            if m.time <= from {
                continue;
            }
            let loc = match m.kind {
                SlotKind::Temporal => self.unpair(BinderKind::Temporal, &m.role)?.0,
                _ => self.resolve(&m.role)?,
            };
            push_distinct(traj, loc, Some(m.time));
        }
        Ok(())
    }

    /// Stamp-ordered trajectory: each transition unbinds to (location, stamp).
    fn stamped_trajectory(&self, item: EntityId, t: usize) -> Result<Vec<(EntityId, Option<usize>)>> {
        let v = self.vec_of(item);
        let lex = self.reasoner.lexicon();
        let mut entries = Vec::new();
        for m in self.state.hits(&v, t, &[SlotKind::Temporal]) {
            let (loc, stamp) = self.unpair(BinderKind::Temporal, &m.role)?;
            let rank = Stamp::from_word(self.state.registry.label(stamp))
                .map(|s| lex.stamp_rank(s))
                .ok_or_else(|| ReasonError::Unsupported(format!("`{}` is not a time stamp", self.label(stamp))))?;
            entries.push((rank, m.time, loc));
        }
        entries.sort();
        Ok(entries.into_iter().map(|(_, time, loc)| (loc, Some(time))).collect())
    }

    pub fn locate_before(&self, item: &str, location: &str, t: usize) -> Result<Inference> {
        let id = self.id(item)?;
        let (traj, mut trace) =
            if self.task == 14 { (self.stamped_trajectory(id, t)?, Vec::new()) } else { self.trajectory(id, t)? };
        let not_on = || ReasonError::NotOnTrajectory { item: item.to_string(), location: location.to_string() };
        let loc = self.state.registry.id_of(location).ok_or_else(not_on)?;
        let i = traj.iter().rposition(|(l, _)| *l == loc).filter(|&i| i > 0).ok_or_else(not_on)?;
        let (prev, prev_time) = traj[i - 1];
        for time in [traj[i].1, prev_time].into_iter().flatten() {
            let kind = self.state.slot_at(time).map(|s| s.kind).unwrap_or(SlotKind::Temporal);
            trace.push(TraceStep { time, kind, score: 1.0 });
        }
        Ok(Inference { answer: Answer::Entity(self.label(prev)), trace })
    }

    /// Owner transitions of `object` before `t`, oldest first.
    pub(crate) fn ownership_transfers(&self, object: EntityId, t: usize) -> Result<Vec<Transfer>> {
        let v = self.vec_of(object);
        self.state
            .hits(&v, t, &[SlotKind::Owner])
            .iter()
            .map(|m| {
                let (next, prev) = self.unpair(BinderKind::Owner, &m.role)?;
                Ok(Transfer { time: m.time, next, prev })
            })
            .collect()
    }

    /// Owner sequence starting at the first previous owner (nobody).
    pub fn ownership_trajectory(&self, object: &str, t: usize) -> Result<Vec<String>> {
        let Some(id) = self.state.registry.id_of(object) else { return Ok(Vec::new()) };
        let transfers = self.ownership_transfers(id, t)?;
        let mut out = Vec::new();
        if let Some(first) = transfers.first() {
            out.push(self.label(first.prev));
        }
        out.extend(transfers.iter().map(|tr| self.label(tr.next)));
        Ok(out)
    }

    pub fn answer_transfer_question(&self, q: &QuestionForm, t: usize) -> Result<Inference> {
        let nobody = self.nobody();
        let is_give = |tr: &Transfer| tr.next != nobody && tr.prev != nobody;
        let found = |tr: &Transfer, label: EntityId| {
            Inference::new(Answer::Entity(self.label(label))).with(TraceStep { time: tr.time, kind: SlotKind::Owner, score: 1.0 })
        };
        let miss = || ReasonError::NoMatch(format!("{q:?}"));
        match q {
            QuestionForm::WhoGaveTo { giver, object } => {
                let g = self.id(giver)?;
                let o = self.id(object)?;
                let tr = self.ownership_transfers(o, t)?.into_iter().rev().find(|tr| is_give(tr) && tr.prev == g).ok_or_else(miss)?;
                Ok(found(&tr, tr.next))
            }
            QuestionForm::WhoGave { object, receiver } => {
                let o = self.id(object)?;
                let r = receiver.as_deref().map(|r| self.id(r)).transpose()?;
                let tr = self
                    .ownership_transfers(o, t)?
                    .into_iter()
                    .rev()
                    .find(|tr| is_give(tr) && r.is_none_or(|r| tr.next == r))
                    .ok_or_else(miss)?;
                Ok(found(&tr, tr.prev))
            }
            QuestionForm::WhoReceived { object } => {
                let o = self.id(object)?;
                let tr = self.ownership_transfers(o, t)?.into_iter().rev().find(is_give).ok_or_else(miss)?;
                Ok(found(&tr, tr.next))
            }
            QuestionForm::WhatGiven { giver, receiver } => {
                let g = self.id(giver)?;
                let r = self.id(receiver)?;
                let mut best: Option<(Transfer, EntityId)> = None;
                for e in self.state.registry.iter() {
                    for tr in self.ownership_transfers(e.id, t)? {
                        if tr.prev == g && tr.next == r && best.is_none_or(|(b, _)| tr.time > b.time) {
                            best = Some((tr, e.id));
                        }
                    }
                }
                let (tr, object) = best.ok_or_else(miss)?;
                Ok(found(&tr, object))
            }
            _ => Err(ReasonError::Unsupported(format!("{q:?} is not a transfer question"))),
        }
    }

    /// Objects currently belonging to `actor`, in acquisition order.
    pub fn holdings(&self, actor: &str, t: usize) -> Result<(Vec<String>, Vec<TraceStep>)> {
        let Some(a) = self.state.registry.id_of(actor) else { return Ok((Vec::new(), Vec::new())) };
        let mut held: Vec<(usize, EntityId)> = Vec::new();
        let mut trace = Vec::new();
        if self.uses_owner_encoding() {
            for e in self.state.registry.iter() {
                if let Some(last) = self.ownership_transfers(e.id, t)?.last() {
                    trace.push(TraceStep { time: last.time, kind: SlotKind::Owner, score: 1.0 });
                    if last.next == a {
                        held.push((last.time, e.id));
                    }
                }
            }
        } else {
            let av = self.vec_of(a);
            let mut candidates = Vec::new();
            for m in self.state.hits_reverse(&av, t, &[SlotKind::Basic]) {
                if self.state.slots()[m.slot].derived {
                    continue;
                }
                let o = self.resolve(&m.role)?;
                if !candidates.contains(&o) {
                    candidates.push(o);
                }
            }
            for o in candidates {
                let last = self.state.most_recent(&self.vec_of(o), t, &[SlotKind::Basic])?;
                trace.push(step(&last));
                if !self.state.slots()[last.slot].derived && self.resolve(&last.role)? == a {
                    held.push((last.time, o));
                }
            }
        }
        held.sort();
        trace.sort_by_key(|s| s.time);
        Ok((held.into_iter().map(|(_, o)| self.label(o)).collect(), trace))
    }
}

fn push_distinct(traj: &mut Vec<(EntityId, Option<usize>)>, loc: EntityId, time: Option<usize>) {
    if traj.last().map(|(l, _)| *l) != Some(loc) {
        traj.push((loc, time));
    }
}
