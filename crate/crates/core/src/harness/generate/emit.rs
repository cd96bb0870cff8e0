//! Surface realization of logical forms in the restricted bAbI English the
//! parser accepts.

use rand::seq::IndexedRandom;
use rand::Rng;

use crate::parser::{Deed, LogicalForm, Phrasing, QuestionForm};
use crate::relation::{Side, Stamp};

use super::worlds::is_named;

pub const MOVE_VERBS: [&str; 4] = ["moved", "went", "journeyed", "travelled"];
pub const GRAB_VERBS: [&str; 4] = ["got", "took", "grabbed", "picked up"];
pub const DROP_VERBS: [&str; 4] = ["dropped", "discarded", "put down", "left"];
pub const GIVE_VERBS: [&str; 3] = ["gave", "handed", "passed"];
pub const SEQUENCERS: [&str; 4] = ["Then", "Afterwards", "After that", "Following that"];

/// Optional surface choices for one statement.
#[derive(Debug, Clone, Default)]
pub struct Style {
    /// Replaces the subject (he, she, they); callers must make sure the
    /// previous statement supplies the antecedent.
    pub pronoun: Option<&'static str>,
    pub sequencer: Option<&'static str>,
    pub verb: usize,
    /// "went back to" rather than "went to".
    pub back: bool,
    /// Trailing "there" after grab/drop.
    pub there: bool,
    /// Stamp after the clause instead of before it.
    pub stamp_suffix: bool,
}

impl Style {
    pub fn random(rng: &mut impl Rng) -> Self {
        Self {
            pronoun: None,
            sequencer: None,
            verb: rng.random_range(0..4),
            back: rng.random_bool(0.3),
            there: rng.random_bool(0.5),
            stamp_suffix: rng.random_bool(0.5),
        }
    }
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

/// Names are bare and capitalized; everything else takes "the".
pub fn noun(label: &str) -> String {
    if is_named(label) {
        capitalize(label)
    } else {
        format!("the {}", label.replace('_', " "))
    }
}

fn article(word: &str) -> &'static str {
    if word.starts_with(['a', 'e', 'i', 'o', 'u']) {
        "an"
    } else {
        "a"
    }
}

pub fn plural(word: &str) -> String {
    match word {
        "mouse" => "mice".into(),
        "wolf" => "wolves".into(),
        "sheep" => "sheep".into(),
        w => format!("{w}s"),
    }
}

fn side_phrase(side: Side) -> &'static str {
    match side {
        Side::Above => "above",
        Side::Below => "below",
        Side::Left => "to the left of",
        Side::Right => "to the right of",
    }
}

fn stamp_phrase(stamp: Stamp) -> &'static str {
    match stamp {
        Stamp::Yesterday => "yesterday",
        Stamp::Morning => "this morning",
        Stamp::Afternoon => "this afternoon",
        Stamp::Evening => "this evening",
    }
}

fn subject_of(actors: &[String], style: &Style) -> String {
    match style.pronoun {
        Some(p) => p.to_string(),
        None => actors.iter().map(|a| noun(a)).collect::<Vec<_>>().join(" and "),
    }
}

fn pick<'a>(list: &[&'a str], i: usize) -> &'a str {
    list[i % list.len()]
}

fn sentence(body: String, style: &Style, terminal: char) -> String {
    let body = match style.sequencer {
        Some(seq) => format!("{seq} {body}"),
        None => body,
    };
    format!("{}{terminal}", capitalize(&body))
}

/// Renders a statement. The text parses back to `form` given the previous
/// statement as pronoun context.
pub fn statement(form: &LogicalForm, style: &Style) -> String {
    use LogicalForm as F;
    let one = |a: &String| subject_of(std::slice::from_ref(a), style);
    let back = if style.back { "back " } else { "" };
    let there = if style.there { " there" } else { "" };
    let body = match form {
        F::Move { actors, to } => {
            format!("{} {} {back}to {}", subject_of(actors, style), pick(&MOVE_VERBS, style.verb), noun(to))
        }
        F::MoveTimed { actor, to, stamp } => {
            let clause = format!("{} {} {back}to {}", one(actor), pick(&MOVE_VERBS, style.verb), noun(to));
            if style.stamp_suffix && style.sequencer.is_none() {
                format!("{clause} {}", stamp_phrase(*stamp))
            } else {
                format!("{} {clause}", stamp_phrase(*stamp))
            }
        }
        F::MoveEither { actor, first, second } => {
            format!("{} is either in {} or {}", one(actor), noun(first), noun(second))
        }
        F::Negation { actor, location } => {
            let neg = if style.verb.is_multiple_of(2) { "no longer" } else { "not" };
            format!("{} is {neg} in {}", one(actor), noun(location))
        }
        F::Affirm { actor, location } => format!("{} is in {}", one(actor), noun(location)),
        F::Grab { actor, object } => format!("{} {} {}{there}", one(actor), pick(&GRAB_VERBS, style.verb), noun(object)),
        F::Drop { actor, object } => format!("{} {} {}{there}", one(actor), pick(&DROP_VERBS, style.verb), noun(object)),
        F::Give { source, object, target } => {
            format!("{} {} {} to {}", one(source), pick(&GIVE_VERBS, style.verb), noun(object), noun(target))
        }
        F::IsA { instance, category } => format!("{} is {} {category}", noun(instance), article(category)),
        F::HasProp { subject, property } => format!("{} is {property}", noun(subject)),
        F::AfraidOf { subject, feared } => format!("{} are afraid of {}", plural(subject), plural(feared)),
        F::Contains { containee, container } => {
            if style.verb.is_multiple_of(2) {
                format!("{} fits inside {}", noun(containee), noun(container))
            } else {
                format!("{} is bigger than {}", noun(container), noun(containee))
            }
        }
        F::DirRel { subject, dir, reference } => format!("{} is {} of {}", noun(subject), dir.word(), noun(reference)),
        F::PosRel { subject, side, reference } => format!("{} is {} {}", noun(subject), side_phrase(*side), noun(reference)),
        F::Motivation { actor, state } => format!("{} is {state}", one(actor)),
    };
    sentence(body, style, '.')
}

pub fn question(q: &QuestionForm) -> String {
    use QuestionForm as Q;
    let body = match q {
        Q::WhereActor { actor } => format!("where is {}", noun(actor)),
        Q::WhereObject { object } => format!("where is {}", noun(object)),
        Q::WhereBefore { item, location } => format!("where was {} before {}", noun(item), noun(location)),
        Q::WhoGaveTo { giver, object } => format!("who did {} give {} to", noun(giver), noun(object)),
        Q::WhoGave { object, receiver: Some(r) } => format!("who gave {} to {}", noun(object), noun(r)),
        Q::WhoGave { object, receiver: None } => format!("who gave {}", noun(object)),
        Q::WhoReceived { object } => format!("who received {}", noun(object)),
        Q::WhatGiven { giver, receiver } => format!("what did {} give to {}", noun(giver), noun(receiver)),
        Q::IsIn { actor, location } => format!("is {} in {}", noun(actor), noun(location)),
        Q::HowMany { actor } => format!("how many objects is {} carrying", noun(actor)),
        Q::WhatCarrying { actor } => format!("what is {} carrying", noun(actor)),
        Q::WhatAfraid { instance } => format!("what is {} afraid of", noun(instance)),
        Q::WhatColor { instance } => format!("what color is {}", noun(instance)),
        Q::ContainsQ { containee, container, phrasing: Phrasing::Fits } => {
            format!("does {} fit in {}", noun(containee), noun(container))
        }
        Q::ContainsQ { containee, container, phrasing: Phrasing::Bigger } => {
            format!("is {} bigger than {}", noun(container), noun(containee))
        }
        Q::WhatDirOf { dir, reference } => format!("what is {} of {}", dir.word(), noun(reference)),
        Q::WhatDirRev { subject, dir } => format!("what is {} {} of", noun(subject), dir.word()),
        Q::WhereWillGo { actor } => format!("where will {} go", noun(actor)),
        Q::WhyAction { actor, deed: Deed::Go(place) } => format!("why did {} go to {}", noun(actor), noun(place)),
        Q::WhyAction { actor, deed: Deed::Get(object) } => format!("why did {} get {}", noun(actor), noun(object)),
        Q::PathQ { from, to } => format!("how do you go from {} to {}", noun(from), noun(to)),
        Q::PosQ { subject, side, reference } => format!("is {} {} {}", noun(subject), side_phrase(*side), noun(reference)),
    };
    sentence(body, &Style::default(), '?')
}

/// A random sequencer, used sparingly so that most lines stay plain.
pub fn maybe_sequencer(rng: &mut impl Rng) -> Option<&'static str> {
    rng.random_bool(0.25).then(|| *SEQUENCERS.choose(rng).expect("non-empty"))
}
