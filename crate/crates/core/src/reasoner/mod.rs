//! Category inference procedures over a [`StoryState`].
//!
//! A [`Reasoner`] owns the shared banks and settings; each story gets its own
//! [`StorySession`], which encodes statements as slots and answers questions
//! from slots and tables only.

mod ingest;
mod locate;
mod relations;
mod spatial;

use std::borrow::Cow;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{
    self, cleanup, rng::story_rng, AlgebraError, Banks, BinderKind, CleanupPolicy, EntityId, EntityRegistry, Vector,
    VectorMode,
};
use crate::memory::{MemoryError, RuleMemory, SlotKind, StoryState};
use crate::parser::{parse_line, tokenize, GrammarLexicon, LogicalForm, ParseContext, ParseError, Parsed, QuestionForm};
use crate::relation::Compass;

pub use spatial::direction_sequences;

pub const NOWHERE: &str = "nowhere";
pub const NOBODY: &str = "nobody";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ternary {
    Yes,
    No,
    Maybe,
}

/// A resolved answer, with entities already mapped back to registry labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Answer {
    Entity(String),
    /// In acquisition order.
    EntityList(Vec<String>),
    YesNoMaybe(Ternary),
    Count(usize),
    Path(Vec<Compass>),
    Motivation(String),
}

/// One slot consulted by an inference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceStep {
    pub time: usize,
    pub kind: SlotKind,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Inference {
    pub answer: Answer,
    pub trace: Vec<TraceStep>,
}

impl Inference {
    fn new(answer: Answer) -> Self {
        Self { answer, trace: Vec::new() }
    }

    fn with(mut self, step: TraceStep) -> Self {
        self.trace.push(step);
        self
    }

    /// Slot times in the order the inference used them, duplicates removed.
    pub fn clue_times(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for s in &self.trace {
            if !out.contains(&s.time) {
                out.push(s.time);
            }
        }
        out
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReasonError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Memory(#[from] MemoryError),
    #[error("no evidence for `{0}`")]
    NoMatch(String),
    #[error("`{location}` is not on the trajectory of `{item}`")]
    NotOnTrajectory { item: String, location: String },
    #[error("neither containment direction is provable")]
    Undecidable,
    #[error("no property evidence for `{0}`")]
    NoEvidence(String),
    #[error("no induced rule for motivation of `{0}`")]
    NoRule(String),
    #[error("no path within {max_len} steps")]
    NoPathWithinBound { max_len: usize },
    #[error("cleanup ambiguous: cosine {cosine:.3}, runner-up {runner_up:.3}")]
    Ambiguous { cosine: f64, runner_up: f64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, ReasonError>;

/// Numeric knobs shared by every story.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Settings {
    pub dim: usize,
    pub mode: VectorMode,
    pub seed: u64,
    pub policy: CleanupPolicy,
    pub eps_path: f64,
    pub block_tol: f64,
    pub max_path_len: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            dim: 64,
            mode: VectorMode::Exact,
            seed: 1,
            policy: CleanupPolicy::default(),
            eps_path: 1e-6,
            block_tol: 1e-6,
            max_path_len: 2,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Reasoner {
    settings: Settings,
    banks: Arc<Banks>,
    lexicon: Arc<GrammarLexicon>,
    rules: RuleMemory,
}

impl Reasoner {
    pub fn new(settings: Settings, lexicon: Arc<GrammarLexicon>) -> Result<Self> {
        let banks = Arc::new(Banks::with_default_rank(settings.dim, settings.seed)?);
        Ok(Self { settings, banks, lexicon, rules: RuleMemory::default() })
    }

    pub fn with_defaults() -> Self {
        Self::new(Settings::default(), Arc::new(GrammarLexicon::default())).expect("default settings are valid")
    }

    pub fn settings(&self) -> &Settings {
        &self.settings
    }

    pub fn banks(&self) -> &Arc<Banks> {
        &self.banks
    }

    pub fn lexicon(&self) -> &GrammarLexicon {
        &self.lexicon
    }

    pub fn rules(&self) -> &RuleMemory {
        &self.rules
    }

    /// Installs rules induced elsewhere (cross-story motivation rules).
    pub fn set_rules(&mut self, rules: RuleMemory) {
        self.rules = rules;
    }

    pub fn session(&self, task: u8, story: usize) -> Result<StorySession<'_>> {
        StorySession::start(Cow::Borrowed(self), task, story)
    }

    /// Like [`Reasoner::session`], but the session keeps this reasoner.
    pub fn into_session(self, task: u8, story: usize) -> Result<StorySession<'static>> {
        StorySession::start(Cow::Owned(self), task, story)
    }
}

/// What a fed line turned into.
#[derive(Debug, Clone, PartialEq)]
pub enum Fed {
    Statement(LogicalForm),
    Answered(QuestionForm, Inference),
}

pub struct StorySession<'r> {
    reasoner: Cow<'r, Reasoner>,
    task: u8,
    pub state: StoryState,
    ctx: ParseContext,
}

impl<'r> StorySession<'r> {
    fn start(reasoner: Cow<'r, Reasoner>, task: u8, story: usize) -> Result<Self> {
        let settings = *reasoner.settings();
        let rng = story_rng(settings.seed, task, story);
        let registry = EntityRegistry::new(settings.dim, settings.mode, rng);
        let mut state = StoryState::new(registry, Arc::clone(reasoner.banks()), settings.policy);
        state.registry.intern(NOWHERE)?;
        state.registry.intern(NOBODY)?;
        Ok(StorySession { reasoner, task, state, ctx: ParseContext::default() })
    }

    pub fn task(&self) -> u8 {
        self.task
    }

    pub fn reasoner(&self) -> &Reasoner {
        &self.reasoner
    }

    /// Parses and handles one line; a trailing `?` makes it a question.
    pub fn feed(&mut self, time: usize, text: &str) -> Result<Fed> {
        let tokens = tokenize(text);
        match parse_line(&tokens, self.task, &self.ctx, self.reasoner.lexicon())? {
            Parsed::Statement(form) => {
                self.ctx.observe(&form);
                self.ingest(time, &form)?;
                Ok(Fed::Statement(form))
            }
            Parsed::Question(q) => {
                let inf = self.answer(time, &q)?;
                Ok(Fed::Answered(q, inf))
            }
        }
    }

    /// Answers `q` from slots strictly before `time`.
    pub fn answer(&mut self, time: usize, q: &QuestionForm) -> Result<Inference> {
        use QuestionForm as Q;
        match q {
            Q::WhereActor { actor } => self.locate_actor(actor, time),
            Q::WhereObject { object } => self.locate_object(object, time),
            Q::WhereBefore { item, location } => self.locate_before(item, location, time),
            Q::WhoGaveTo { .. } | Q::WhoGave { .. } | Q::WhoReceived { .. } | Q::WhatGiven { .. } => {
                self.answer_transfer_question(q, time)
            }
            Q::IsIn { actor, location } => self.yesno_location(actor, location, time),
            Q::HowMany { actor } => {
                let (held, trace) = self.holdings(actor, time)?;
                Ok(Inference { answer: Answer::Count(held.len()), trace })
            }
            Q::WhatCarrying { actor } => {
                let (held, trace) = self.holdings(actor, time)?;
                Ok(Inference { answer: Answer::EntityList(held), trace })
            }
            Q::WhatAfraid { instance } => self.deduce(instance, time),
            Q::WhatColor { instance } => self.induce_property(instance, time),
            Q::ContainsQ { containee, container, .. } => self.reach_yesno(containee, container, time),
            Q::WhatDirOf { dir, reference } => self.direction_query(*dir, reference, true, time),
            Q::WhatDirRev { subject, dir } => self.direction_query(*dir, subject, false, time),
            Q::WhereWillGo { .. } | Q::WhyAction { .. } => self.induce_motivation(q, time),
            Q::PathQ { from, to } => {
                self.solve_locations(time);
                self.find_path(from, to)
            }
            Q::PosQ { subject, side, reference } => {
                self.positional_assign(time);
                self.positional_query(subject, *side, reference)
            }
        }
    }

    // Shared helpers.

    fn id(&self, label: &str) -> Result<EntityId> {
        self.state.registry.id_of(label).ok_or_else(|| ReasonError::NoMatch(label.to_string()))
    }

    fn vec_of(&self, id: EntityId) -> Vector {
        self.state.registry.vector(id).clone()
    }

    fn label(&self, id: EntityId) -> String {
        self.state.registry.label(id).to_string()
    }

    fn nowhere(&self) -> EntityId {
        self.state.registry.id_of(NOWHERE).expect("interned at session start")
    }

    fn nobody(&self) -> EntityId {
        self.state.registry.id_of(NOBODY).expect("interned at session start")
    }

    /// Snaps a recovered role to a registered entity, enforcing the score
    /// floor and the runner-up ratio.
    fn resolve(&self, role: &Vector) -> Result<EntityId> {
        let c = cleanup(role, &self.state.registry)?;
        let policy = &self.state.policy;
        if c.cosine < policy.score || c.cosine < policy.margin_ratio * c.runner_up {
            return Err(ReasonError::Ambiguous { cosine: c.cosine, runner_up: c.runner_up });
        }
        Ok(c.id)
    }

    /// Pair-unbinds and returns the cleaned (next, prev) ids.
    fn unpair(&self, kind: BinderKind, v: &Vector) -> Result<(EntityId, EntityId)> {
        let u = self.state.banks.binder(kind).unbind(v, &self.state.registry, &self.state.policy)?;
        Ok((u.next, u.prev))
    }

    /// Unit-length pair binding of two registered entities.
    fn pair(&self, kind: BinderKind, next: EntityId, prev: EntityId) -> Result<Vector> {
        let v = self.state.banks.binder(kind).bind(self.state.registry.vector(next), self.state.registry.vector(prev))?;
        Ok(algebra::normalized(&v))
    }

    fn uses_owner_encoding(&self) -> bool {
        matches!(self.task, 5 | 7)
    }
}

impl fmt::Display for Ternary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ternary::Yes => "yes",
            Ternary::No => "no",
            Ternary::Maybe => "maybe",
        })
    }
}

#[cfg(test)]
mod tests;
