use crate::relation::{Compass, Side, Stamp};

/// Typed parse of a declarative line. Arguments are registry labels
/// (lowercase; multi-word names joined with `_`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LogicalForm {
    /// One actor, or two from an `and` conjunction.
    Move { actors: Vec<String>, to: String },
    MoveTimed { actor: String, to: String, stamp: Stamp },
    MoveEither { actor: String, first: String, second: String },
    Negation { actor: String, location: String },
    Affirm { actor: String, location: String },
    Grab { actor: String, object: String },
    Drop { actor: String, object: String },
    Give { source: String, object: String, target: String },
    IsA { instance: String, category: String },
    HasProp { subject: String, property: String },
    AfraidOf { subject: String, feared: String },
    /// Normalized from "fits inside" and "is bigger than".
    Contains { containee: String, container: String },
    DirRel { subject: String, dir: Compass, reference: String },
    PosRel { subject: String, side: Side, reference: String },
    Motivation { actor: String, state: String },
}

impl LogicalForm {
    /// Actors a following pronoun may refer to.
    pub fn actors(&self) -> Vec<String> {
        match self {
            LogicalForm::Move { actors, .. } => actors.clone(),
            LogicalForm::MoveTimed { actor, .. }
            | LogicalForm::MoveEither { actor, .. }
            | LogicalForm::Negation { actor, .. }
            | LogicalForm::Affirm { actor, .. }
            | LogicalForm::Grab { actor, .. }
            | LogicalForm::Drop { actor, .. }
            | LogicalForm::Motivation { actor, .. } => vec![actor.clone()],
            LogicalForm::Give { source, .. } => vec![source.clone()],
            _ => Vec::new(),
        }
    }
}

/// "fit in" versus "bigger than" phrasing of a size question.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phrasing {
    Fits,
    Bigger,
}

/// The action a motivation question asks about.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Deed {
    Go(String),
    Get(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum QuestionForm {
    WhereActor { actor: String },
    WhereObject { object: String },
    WhereBefore { item: String, location: String },
    /// "Who did X give the Y to?"
    WhoGaveTo { giver: String, object: String },
    /// "Who gave the Y (to Z)?"
    WhoGave { object: String, receiver: Option<String> },
    WhoReceived { object: String },
    WhatGiven { giver: String, receiver: String },
    IsIn { actor: String, location: String },
    HowMany { actor: String },
    WhatCarrying { actor: String },
    WhatAfraid { instance: String },
    WhatColor { instance: String },
    ContainsQ { containee: String, container: String, phrasing: Phrasing },
    /// "What is <dir> of the R?"
    WhatDirOf { dir: Compass, reference: String },
    /// "What is the S <dir> of?"
    WhatDirRev { subject: String, dir: Compass },
    WhereWillGo { actor: String },
    WhyAction { actor: String, deed: Deed },
    PathQ { from: String, to: String },
    PosQ { subject: String, side: Side, reference: String },
}
