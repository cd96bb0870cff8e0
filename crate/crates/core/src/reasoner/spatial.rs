use std::collections::VecDeque;

use crate::algebra::{EntityId, Matrix, PositionalVector};
use crate::memory::Constraint;
use crate::relation::{Compass, Side};

use super::{Answer, Inference, ReasonError, Result, StorySession, Ternary};

/// Direction sequences of length 1..=max_len with no step immediately
/// followed by its inverse, shorter first, then n < e < s < w.
pub fn direction_sequences(max_len: usize) -> Vec<Vec<Compass>> {
    let mut out: Vec<Vec<Compass>> = Vec::new();
    let mut layer: Vec<Vec<Compass>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for seq in &layer {
            for d in Compass::ALL {
                if seq.last().is_some_and(|&p| p.opposite() == d) {
                    continue;
                }
                let mut s = seq.clone();
                s.push(d);
                next.push(s);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

impl StorySession<'_> {
    fn deferred_before(&self, t: usize) -> Vec<Constraint> {
        self.state.deferred.iter().copied().filter(|c| c.time() < t).collect()
    }

    /// Runs a FIFO sweep: `apply` returns false to defer. When a whole pass
    /// makes no progress, `seed` initializes the reference of the head.
    fn sweep(
        &mut self,
        constraints: Vec<Constraint>,
        mut apply: impl FnMut(&mut Self, &Constraint) -> bool,
        mut seed: impl FnMut(&mut Self, &Constraint),
    ) {
        let mut queue: VecDeque<Constraint> = constraints.into();
        if let Some(first) = queue.front().copied() {
            seed(self, &first);
        }
        let mut idle = 0;
        while let Some(c) = queue.pop_front() {
            if apply(self, &c) {
                idle = 0;
                continue;
            }
            queue.push_back(c);
            idle += 1;
            if idle >= queue.len() {
                // Disconnected component: start it from a fresh vector.
                let head = *queue.front().expect("non-empty");
                seed(self, &head);
                idle = 0;
            }
        }
    }

    /// Assigns location vectors from the direction statements before `t`.
    pub fn solve_locations(&mut self, t: usize) {
        self.state.loc_table.clear();
        let constraints: Vec<_> = self.deferred_before(t).into_iter().filter(|c| matches!(c, Constraint::Dir { .. })).collect();
        self.sweep(
            constraints,
            |s, c| {
                let Constraint::Dir { subject, dir, reference, .. } = *c else { return true };
                let table = &s.state.loc_table;
                match (table.get(&subject).cloned(), table.get(&reference).cloned()) {
                    (None, Some(r)) => {
                        let v = s.state.banks.directions.matrix(dir) * r;
                        s.state.loc_table.insert(subject, v);
                        true
                    }
                    (Some(x), None) => {
                        let v = s.state.banks.directions.matrix(dir.opposite()) * x;
                        s.state.loc_table.insert(reference, v);
                        true
                    }
                    (Some(_), Some(_)) => true,
                    (None, None) => false,
                }
            },
            |s, c| {
                let Constraint::Dir { reference, .. } = *c else { return };
                let v = s.state.registry.fresh_unit();
                s.state.loc_table.insert(reference, v);
            },
        );
    }

    /// Best direction sequence X with X·v_from ≈ v_to.
    pub fn find_path(&self, from: &str, to: &str) -> Result<Inference> {
        let settings = self.reasoner.settings();
        let lookup = |label: &str| {
            self.state
                .registry
                .id_of(label)
                .and_then(|id| self.state.loc_table.get(&id))
                .ok_or_else(|| ReasonError::NoMatch(label.to_string()))
        };
        let (vf, vt) = (lookup(from)?, lookup(to)?);
        let dirs = &self.state.banks.directions;
        let mut best: Option<(f64, Vec<Compass>)> = None;
        for seq in direction_sequences(settings.max_path_len) {
            let x: Matrix = seq.iter().fold(Matrix::identity(vf.len(), vf.len()), |acc, &d| dirs.matrix(d) * acc);
            let residual = (x * vf - vt).norm();
            // Candidates come shorter-first in n<e<s<w order, so a strict
            // improvement beyond tolerance is needed to displace one.
            if best.as_ref().is_none_or(|(r, _)| residual < *r - settings.eps_path) {
                best = Some((residual, seq));
            }
        }
        match best {
            Some((r, seq)) if r <= settings.eps_path => Ok(Inference::new(Answer::Path(seq))),
            _ => Err(ReasonError::NoPathWithinBound { max_len: settings.max_path_len }),
        }
    }

    fn random_placement(&mut self) -> PositionalVector {
        PositionalVector { blocks: std::array::from_fn(|_| self.state.registry.fresh_unit()) }
    }

    /// Assigns 4d positional vectors from the position statements before `t`.
    pub fn positional_assign(&mut self, t: usize) {
        self.state.pos_table.clear();
        let constraints: Vec<_> = self.deferred_before(t).into_iter().filter(|c| matches!(c, Constraint::Pos { .. })).collect();
        self.sweep(
            constraints,
            |s, c| {
                let Constraint::Pos { subject, side, reference, .. } = *c else { return true };
                let positions = &s.state.banks.positions;
                let table = &s.state.pos_table;
                let update: Option<(EntityId, PositionalVector)> = match (table.get(&subject), table.get(&reference)) {
                    (None, Some(y)) => Some((subject, positions.lift(side, y))),
                    (Some(x), None) => Some((reference, positions.lift(side.opposite(), x))),
                    (Some(x), Some(y)) => {
                        let mut x = x.clone();
                        x.blocks[side.block()] = positions.project(side, y.block(side));
                        Some((subject, x))
                    }
                    (None, None) => None,
                };
                match update {
                    Some((id, v)) => {
                        s.state.pos_table.insert(id, v);
                        true
                    }
                    None => false,
                }
            },
            |s, c| {
                let Constraint::Pos { reference, .. } = *c else { return };
                let v = s.random_placement();
                s.state.pos_table.insert(reference, v);
            },
        );
    }

    /// "Is a <side> of b?" by the two block checks.
    pub fn positional_query(&self, a: &str, side: Side, b: &str) -> Result<Inference> {
        let get = |label: &str| {
            self.state
                .registry
                .id_of(label)
                .and_then(|id| self.state.pos_table.get(&id))
                .ok_or_else(|| ReasonError::NoMatch(label.to_string()))
        };
        let (pa, pb) = (get(a)?, get(b)?);
        let positions = &self.state.banks.positions;
        let tol = self.reasoner.settings().block_tol;
        let direct = (pa.block(side) - positions.project(side, pb.block(side))).norm() <= tol;
        let opp = side.opposite();
        let converse = (pb.block(opp) - positions.project(opp, pa.block(opp))).norm() <= tol;
        let answer = if direct || converse { Ternary::Yes } else { Ternary::No };
        Ok(Inference::new(Answer::YesNoMaybe(answer)))
    }
}
