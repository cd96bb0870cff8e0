use std::collections::VecDeque;

use crate::algebra::{Encoding, EntityId};
use crate::memory::{RuleMemory, SlotKind};
use crate::parser::{Deed, QuestionForm};
use crate::relation::Compass;

use super::{Answer, Inference, ReasonError, Result, StorySession, Ternary, TraceStep};

impl StorySession<'_> {
    fn slot_step(&self, index: usize, score: f64) -> TraceStep {
        let s = &self.state.slots()[index];
        TraceStep { time: s.time, kind: s.kind, score }
    }

    /// Instance to category through the reversed is-a binding, then one
    /// forward probe over the category's relations.
    pub fn deduce(&self, subject: &str, t: usize) -> Result<Inference> {
        let id = self.id(subject)?;
        let mut trace = Vec::new();
        let head = match self.state.most_recent_reverse(&self.vec_of(id), t, &[SlotKind::IsA]) {
            Ok(m) => {
                trace.push(self.slot_step(m.slot, m.score));
                self.resolve(&m.role)?
            }
            Err(_) => id,
        };
        let hit = self
            .state
            .most_recent(&self.vec_of(head), t, &[SlotKind::Contains])
            .map_err(|_| ReasonError::NoMatch(subject.to_string()))?;
        trace.push(self.slot_step(hit.slot, hit.score));
        Ok(Inference { answer: Answer::Entity(self.label(self.resolve(&hit.role)?)), trace })
    }

    /// `of = true`: "What is <dir> of X?"; otherwise "What is X <dir> of?".
    pub fn direction_query(&self, dir: Compass, entity: &str, of: bool, t: usize) -> Result<Inference> {
        let id = self.id(entity)?;
        let v = self.vec_of(id);
        let kind = match dir {
            Compass::North | Compass::South => SlotKind::DirNS,
            Compass::East | Compass::West => SlotKind::DirEW,
        };
        // Canonical storage is reference ⊗ subject; a non-canonical question
        // swaps the roles.
        let forward = of == dir.is_canonical();
        let hit = if forward {
            self.state.most_recent(&v, t, &[kind])
        } else {
            self.state.most_recent_reverse(&v, t, &[kind])
        }
        .map_err(|_| ReasonError::NoMatch(entity.to_string()))?;
        let answer = Answer::Entity(self.label(self.resolve(&hit.role)?));
        Ok(Inference::new(answer).with(self.slot_step(hit.slot, hit.score)))
    }

    /// Breadth-first chaining of containment slots from `from`; returns slot
    /// indices of a chain whose product binds `from` to `to`.
    fn containment_chain(&self, from: EntityId, to: EntityId, t: usize) -> Result<Option<Vec<usize>>> {
        let v = self.vec_of(from);
        let slots = self.state.slots();
        let mut seen = vec![from];
        let mut queue: VecDeque<(Encoding, EntityId, Vec<usize>)> = VecDeque::new();
        for m in self.state.hits(&v, t, &[SlotKind::Contains]) {
            let next = self.resolve(&m.role)?;
            queue.push_back((slots[m.slot].enc.clone(), next, vec![m.slot]));
        }
        while let Some((enc, cur, path)) = queue.pop_front() {
            if cur == to {
                return Ok(Some(path));
            }
            if seen.contains(&cur) {
                continue;
            }
            seen.push(cur);
            for m in self.state.hits(&self.vec_of(cur), t, &[SlotKind::Contains]) {
                let chained = enc.chain(&slots[m.slot].enc)?;
                let p = chained.probe(&v)?;
                if p.score < self.state.policy.score {
                    continue;
                }
                let next = self.resolve(&p.role)?;
                let mut path = path.clone();
                path.push(m.slot);
                queue.push_back((chained, next, path));
            }
        }
        Ok(None)
    }

    pub fn reach_yesno(&self, containee: &str, container: &str, t: usize) -> Result<Inference> {
        let a = self.id(containee)?;
        let b = self.id(container)?;
        let (answer, path) = if let Some(p) = self.containment_chain(a, b, t)? {
            (Ternary::Yes, p)
        } else if let Some(p) = self.containment_chain(b, a, t)? {
            (Ternary::No, p)
        } else {
            return Err(ReasonError::Undecidable);
        };
        let trace = path.into_iter().rev().map(|i| self.slot_step(i, 1.0)).collect();
        Ok(Inference { answer: Answer::YesNoMaybe(answer), trace })
    }

    /// Direct property if stated, else the most recent property observed on
    /// another member of the instance's category.
    pub fn induce_property(&self, instance: &str, t: usize) -> Result<Inference> {
        let id = self.id(instance)?;
        let v = self.vec_of(id);
        if let Ok(m) = self.state.most_recent(&v, t, &[SlotKind::Prop]) {
            return Ok(Inference::new(Answer::Entity(self.label(self.resolve(&m.role)?))).with(self.slot_step(m.slot, m.score)));
        }
        let isa = self
            .state
            .most_recent_reverse(&v, t, &[SlotKind::IsA])
            .map_err(|_| ReasonError::NoEvidence(instance.to_string()))?;
        let category = self.resolve(&isa.role)?;
        let cv = self.vec_of(category);
        let slots = self.state.slots();
        let members = self.state.hits(&cv, t, &[SlotKind::IsA]);
        for (pi, prop) in slots.iter().enumerate().rev() {
            if prop.time >= t || prop.kind != SlotKind::Prop {
                continue;
            }
            for m in &members {
                if m.slot == isa.slot {
                    continue;
                }
                // (c mᵀ)(m pᵀ) = c pᵀ when the property belongs to member m.
                let induced = slots[m.slot].enc.chain(&prop.enc)?;
                let p = induced.probe(&cv)?;
                if p.score >= self.state.policy.score {
                    let answer = Answer::Entity(self.label(self.resolve(&p.role)?));
                    let trace = vec![self.slot_step(isa.slot, isa.score), self.slot_step(m.slot, m.score), self.slot_step(pi, p.score)];
                    return Ok(Inference { answer, trace });
                }
            }
        }
        Err(ReasonError::NoEvidence(instance.to_string()))
    }

    /// Motivation rules from this story's slots: each motive chained with the
    /// actor's first move and first acquisition after it.
    pub fn induce_rules(&self) -> Result<RuleMemory> {
        let mut rules = RuleMemory::default();
        let slots = self.state.slots();
        for (mi, ms) in slots.iter().enumerate() {
            if ms.kind != SlotKind::Motive {
                continue;
            }
            let Ok(motive) = self.motive_of_slot(mi) else { continue };
            let mv = self.vec_of(motive);
            let motive_label = self.label(motive);
            for kind in [SlotKind::Basic, SlotKind::Acquire] {
                let target = slots.iter().skip(mi + 1).filter(|s| s.kind == kind).find_map(|s| {
                    let p = ms.enc.chain(&s.enc).ok()?.probe(&mv).ok()?;
                    (p.score >= self.state.policy.score).then_some(p.role)
                });
                if let Some(role) = target {
                    let label = self.label(self.resolve(&role)?);
                    match kind {
                        SlotKind::Basic => rules.record_location(&motive_label, &label),
                        _ => rules.record_object(&motive_label, &label),
                    }
                }
            }
        }
        Ok(rules)
    }

    fn motive_of_slot(&self, index: usize) -> Result<EntityId> {
        let enc = &self.state.slots()[index].enc;
        // Motive slots are m ⊗ a; the left factor is recovered by probing
        // with each candidate containee.
        for e in self.state.registry.iter() {
            if enc.probe(&e.values)?.score >= self.state.policy.score {
                return Ok(e.id);
            }
        }
        Err(ReasonError::NoMatch("motive".into()))
    }

    pub fn induce_motivation(&self, q: &QuestionForm, t: usize) -> Result<Inference> {
        let (actor, deed) = match q {
            QuestionForm::WhereWillGo { actor } => (actor, None),
            QuestionForm::WhyAction { actor, deed } => (actor, Some(deed)),
            _ => return Err(ReasonError::Unsupported(format!("{q:?} is not a motivation question"))),
        };
        let a = self.id(actor)?;
        let motives = self.state.hits_reverse(&self.vec_of(a), t, &[SlotKind::Motive]);
        let local = self.induce_rules()?;
        let global = self.reasoner.rules();
        let location_for = |m: &str| global.location_for(m).or_else(|| local.location_for(m)).map(str::to_string);
        let object_for = |m: &str| global.object_for(m).or_else(|| local.object_for(m)).map(str::to_string);
        let no_rule = || ReasonError::NoRule(actor.to_string());

        match deed {
            None => {
                let m = motives.last().ok_or_else(no_rule)?;
                let motive = self.label(self.resolve(&m.role)?);
                let place = location_for(&motive).ok_or_else(no_rule)?;
                Ok(Inference::new(Answer::Entity(place)).with(self.slot_step(m.slot, m.score)))
            }
            Some(deed) => {
                let mut fallback = None;
                for m in motives.iter().rev() {
                    let motive = self.label(self.resolve(&m.role)?);
                    let fits = match deed {
                        Deed::Go(place) => location_for(&motive).as_deref() == Some(place.as_str()),
                        Deed::Get(object) => object_for(&motive).as_deref() == Some(object.as_str()),
                    };
                    let inf = Inference::new(Answer::Motivation(motive)).with(self.slot_step(m.slot, m.score));
                    if fits {
                        return Ok(inf);
                    }
                    fallback.get_or_insert(inf);
                }
                fallback.ok_or_else(no_rule)
            }
        }
    }
}
