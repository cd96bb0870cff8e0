use crate::algebra::{bind, BinderKind, EntityId, Vector};
use crate::memory::{Constraint, Slot, SlotKind};
use crate::parser::LogicalForm;
use crate::relation::Compass;

use super::{locate::Whereabouts, ReasonError, Result, StorySession};

impl StorySession<'_> {
    fn intern(&mut self, label: &str) -> Result<EntityId> {
        Ok(self.state.registry.intern(label)?)
    }

    fn put(&mut self, time: usize, kind: SlotKind, containee: EntityId, role: &Vector) -> Result<()> {
        let enc = bind(self.state.registry.vector(containee), role)?;
        self.state.append(Slot::new(time, kind, enc))?;
        Ok(())
    }

    fn put_basic(&mut self, time: usize, kind: SlotKind, containee: EntityId, container: EntityId) -> Result<()> {
        let role = self.vec_of(container);
        self.put(time, kind, containee, &role)
    }

    /// Encodes one statement into memory (or the constraint queue).
    pub fn ingest(&mut self, time: usize, form: &LogicalForm) -> Result<()> {
        use LogicalForm as F;
        match form {
            F::Move { actors, to } => match actors.as_slice() {
                [actor] => self.ingest_move(time, actor, to),
                [a, b] => {
                    let (a, b, loc) = (self.intern(a)?, self.intern(b)?, self.intern(to)?);
                    let group = self.pair(BinderKind::Conj, a, b)?;
                    let enc = bind(&group, self.state.registry.vector(loc))?;
                    Ok(self.state.append(Slot::new(time, SlotKind::Group, enc))?)
                }
                _ => Err(ReasonError::Unsupported(format!("{} conjoined actors", actors.len()))),
            },
            F::Affirm { actor, location } => self.ingest_move(time, actor, location),
            F::MoveTimed { actor, to, stamp } => {
                let (a, loc, st) = (self.intern(actor)?, self.intern(to)?, self.intern(stamp.word())?);
                let role = self.pair(BinderKind::Temporal, loc, st)?;
                self.put(time, SlotKind::Temporal, a, &role)
            }
            F::MoveEither { actor, first, second } => {
                let (a, x, y) = (self.intern(actor)?, self.intern(first)?, self.intern(second)?);
                let role = self.pair(BinderKind::Conj, x, y)?;
                self.put(time, SlotKind::Either, a, &role)
            }
            F::Negation { actor, .. } => {
                let a = self.intern(actor)?;
                let n = self.nowhere();
                if self.task == 10 {
                    let role = self.pair(BinderKind::Conj, n, n)?;
                    self.put(time, SlotKind::Either, a, &role)
                } else {
                    self.put_basic(time, SlotKind::Basic, a, n)
                }
            }
            F::Grab { actor, object } => {
                let (a, o) = (self.intern(actor)?, self.intern(object)?);
                if self.uses_owner_encoding() {
                    let role = self.pair(BinderKind::Owner, a, self.nobody())?;
                    self.put(time, SlotKind::Owner, o, &role)
                } else if self.task == 20 {
                    self.put_basic(time, SlotKind::Acquire, a, o)
                } else {
                    self.put_basic(time, SlotKind::Basic, o, a)
                }
            }
            F::Drop { actor, object } => {
                let (a, o) = (self.intern(actor)?, self.intern(object)?);
                if self.uses_owner_encoding() {
                    let role = self.pair(BinderKind::Owner, self.nobody(), a)?;
                    return self.put(time, SlotKind::Owner, o, &role);
                }
                // The object now belongs where its owner is: chain the
                // grab with the owner's location evidence.
                let (loc, sources) = match self.whereabouts(a, time) {
                    Ok((Whereabouts::At(loc), step)) => (loc, vec![step.time]),
                    _ => (self.nowhere(), Vec::new()),
                };
                let enc = bind(self.state.registry.vector(o), self.state.registry.vector(loc))?;
                Ok(self.state.append(Slot::inferred(time, SlotKind::Basic, enc, sources))?)
            }
            F::Give { source, object, target } => {
                let (s, o, t) = (self.intern(source)?, self.intern(object)?, self.intern(target)?);
                if self.uses_owner_encoding() {
                    let role = self.pair(BinderKind::Owner, t, s)?;
                    self.put(time, SlotKind::Owner, o, &role)
                } else {
                    self.put_basic(time, SlotKind::Basic, o, t)
                }
            }
            F::IsA { instance, category } => {
                let (i, c) = (self.intern(instance)?, self.intern(category)?);
                self.put_basic(time, SlotKind::IsA, c, i)
            }
            F::HasProp { subject, property } => {
                let (s, p) = (self.intern(subject)?, self.intern(property)?);
                self.put_basic(time, SlotKind::Prop, s, p)
            }
            F::Motivation { actor, state } => {
                let (a, m) = (self.intern(actor)?, self.intern(state)?);
                self.put_basic(time, SlotKind::Motive, m, a)
            }
            F::AfraidOf { subject, feared } => {
                let (s, f) = (self.intern(subject)?, self.intern(feared)?);
                self.put_basic(time, SlotKind::Contains, s, f)
            }
            F::Contains { containee, container } => {
                let (a, b) = (self.intern(containee)?, self.intern(container)?);
                self.put_basic(time, SlotKind::Contains, a, b)
            }
            F::DirRel { subject, dir, reference } => {
                let (s, r) = (self.intern(subject)?, self.intern(reference)?);
                if self.task == 19 {
                    self.state.deferred.push_back(Constraint::Dir { time, subject: s, dir: *dir, reference: r });
                    return Ok(());
                }
                // "s north of r" and "r south of s" share the encoding r⊗s.
                let kind = match dir {
                    Compass::North | Compass::South => SlotKind::DirNS,
                    Compass::East | Compass::West => SlotKind::DirEW,
                };
                if dir.is_canonical() {
                    self.put_basic(time, kind, r, s)
                } else {
                    self.put_basic(time, kind, s, r)
                }
            }
            F::PosRel { subject, side, reference } => {
                let (s, r) = (self.intern(subject)?, self.intern(reference)?);
                self.state.deferred.push_back(Constraint::Pos { time, subject: s, side: *side, reference: r });
                Ok(())
            }
        }
    }

    fn ingest_move(&mut self, time: usize, actor: &str, to: &str) -> Result<()> {
        let (a, loc) = (self.intern(actor)?, self.intern(to)?);
        match self.task {
            3 => {
                let prev = match self.whereabouts(a, time) {
                    Ok((Whereabouts::At(prev), _)) => prev,
                    _ => self.nowhere(),
                };
                let role = self.pair(BinderKind::Temporal, loc, prev)?;
                self.put(time, SlotKind::Temporal, a, &role)
            }
            10 => {
                let role = self.pair(BinderKind::Conj, loc, loc)?;
                self.put(time, SlotKind::Either, a, &role)
            }
            _ => self.put_basic(time, SlotKind::Basic, a, loc),
        }
    }
}
