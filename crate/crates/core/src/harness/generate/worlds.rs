//! Per-category world simulators. Each keeps its own symbolic state (maps,
//! graphs, grids) and computes gold answers from that state alone.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::answerer::AnswerLexicon;
use crate::parser::{Deed, LogicalForm, Phrasing, QuestionForm};
use crate::reasoner::{Answer, Ternary};
use crate::relation::{Compass, Side, Stamp};

use super::emit::{self, Style};
use super::{GenLine, GenStory};

const FEMALE: [&str; 6] = ["mary", "sandra", "julie", "julia", "emily", "jessica"];
const MALE: [&str; 6] = ["john", "daniel", "bill", "fred", "jeff", "greg"];
const ANIMAL_NAMES: [&str; 7] = ["gertrude", "winona", "lily", "bernhard", "julius", "brian", "lucy"];
const AGENTS: [&str; 4] = ["yann", "sumit", "antoine", "jason"];

const PLACES: [&str; 6] = ["bathroom", "hallway", "kitchen", "garden", "office", "bedroom"];
const TOWN: [&str; 6] = ["park", "school", "kitchen", "office", "bedroom", "cinema"];
const THINGS: [&str; 4] = ["football", "apple", "milk", "book"];

const SPECIES: [&str; 4] = ["mouse", "cat", "wolf", "sheep"];
const BREEDS: [&str; 4] = ["swan", "lion", "frog", "rhino"];
const COLORS: [&str; 4] = ["white", "yellow", "green", "gray"];
const SHAPES: [&str; 6] = ["red_square", "blue_square", "pink_rectangle", "red_sphere", "yellow_square", "triangle"];
const BOXES: [&str; 7] = ["chocolate", "box_of_chocolates", "box", "chest", "suitcase", "container", "treasure_chest"];

/// Motivation, the place it sends an agent to, and the object fetched there.
const DRIVES: [(&str, &str, &str); 4] =
    [("hungry", "kitchen", "apple"), ("thirsty", "kitchen", "milk"), ("tired", "bedroom", "pajamas"), ("bored", "garden", "football")];

/// Labels rendered as bare capitalized names.
pub fn is_named(label: &str) -> bool {
    FEMALE.contains(&label) || MALE.contains(&label) || ANIMAL_NAMES.contains(&label) || AGENTS.contains(&label)
}

fn pronoun_for(name: &str) -> &'static str {
    if FEMALE.contains(&name) {
        "she"
    } else {
        "he"
    }
}

fn people(rng: &mut ChaCha8Rng, n: usize) -> Vec<String> {
    let all: Vec<&str> = FEMALE.iter().chain(MALE.iter()).copied().collect();
    all.choose_multiple(rng, n).map(|s| s.to_string()).collect()
}

fn pick_n(rng: &mut ChaCha8Rng, from: &[&str], n: usize) -> Vec<String> {
    from.choose_multiple(rng, n).map(|s| s.to_string()).collect()
}

fn other_than<'a>(rng: &mut ChaCha8Rng, from: &'a [&'a str], not: Option<&str>) -> String {
    loop {
        let c = *from.choose(rng).expect("non-empty");
        if Some(c) != not {
            return c.to_string();
        }
    }
}

struct Builder {
    task: u8,
    lines: Vec<GenLine>,
    prev_actors: Vec<String>,
    answers: AnswerLexicon,
}

impl Builder {
    fn new(task: u8) -> Self {
        Self { task, lines: Vec::new(), prev_actors: Vec::new(), answers: AnswerLexicon::default() }
    }

    fn now(&self) -> usize {
        self.lines.len() + 1
    }

    fn say_styled(&mut self, form: LogicalForm, style: &Style) -> usize {
        let t = self.now();
        let text = emit::statement(&form, style);
        self.prev_actors = form.actors();
        self.lines.push(GenLine::Statement { form, text });
        t
    }

    /// Sequencers go only on actions that follow another line.
    fn sequencer(&self, rng: &mut ChaCha8Rng, form: &LogicalForm) -> Option<&'static str> {
        let action = matches!(form, LogicalForm::Move { .. } | LogicalForm::Grab { .. } | LogicalForm::Drop { .. } | LogicalForm::Give { .. });
        if action && !self.lines.is_empty() {
            emit::maybe_sequencer(rng)
        } else {
            None
        }
    }

    fn say(&mut self, rng: &mut ChaCha8Rng, form: LogicalForm) -> usize {
        let mut style = Style::random(rng);
        style.sequencer = self.sequencer(rng, &form);
        self.say_styled(form, &style)
    }

    fn ask(&mut self, form: QuestionForm, answer: Answer, clues: Vec<usize>) {
        let text = emit::question(&form);
        let answer = self.answers.format(&answer).expect("generator answers are formattable");
        self.lines.push(GenLine::Question { form, text, answer, clues });
    }

    fn questions(&self) -> usize {
        self.lines.iter().filter(|l| matches!(l, GenLine::Question { .. })).count()
    }

    fn finish(self) -> GenStory {
        GenStory { task: self.task, lines: self.lines, grid: None }
    }
}

fn entity(label: &str) -> Answer {
    Answer::Entity(label.to_string())
}

pub fn story(task: u8, rng: &mut ChaCha8Rng) -> GenStory {
    match task {
        1 => movers(rng, 1, Pronouns::None),
        2 => carried(rng, 2),
        3 => carried(rng, 3),
        4 => two_arg(rng),
        5 => transfers(rng, 5),
        6 => yes_no(rng),
        7 => transfers(rng, 7),
        8 => transfers(rng, 8),
        9 => negation(rng),
        10 => indefinite(rng),
        11 => movers(rng, 11, Pronouns::Single),
        12 => movers(rng, 12, Pronouns::Conjunction),
        13 => movers(rng, 13, Pronouns::Group),
        14 => time_stamps(rng),
        15 => deduction(rng),
        16 => induction(rng),
        17 => positions(rng),
        18 => sizes(rng),
        19 => paths(rng),
        20 => motivations(rng),
        _ => unreachable!("category checked by caller"),
    }
}

// Locations of actors and objects.

/// (time, giver, object, receiver)
type GiveRecord = (usize, String, String, String);

#[derive(Default)]
struct Tracker {
    /// actor -> (location, time of the statement that put it there)
    at: BTreeMap<String, (String, usize)>,
    /// object -> (holder, time acquired)
    holder: BTreeMap<String, (String, usize)>,
    /// object -> (location, drop time, time of the holder's move before it)
    placed: BTreeMap<String, (String, usize, usize)>,
    /// object -> distinct consecutive locations it passed through, with the
    /// arrival time and the pick-up that carried it there
    trail: BTreeMap<String, Vec<(String, usize, usize)>>,
    /// object -> time of its latest pick-up
    last_grab: BTreeMap<String, usize>,
    /// object -> time of its latest pick-up or drop
    last_event: BTreeMap<String, usize>,
    gives: Vec<GiveRecord>,
}

impl Tracker {
    fn moved(&mut self, actor: &str, to: &str, t: usize) {
        self.at.insert(actor.to_string(), (to.to_string(), t));
        for (obj, (h, got)) in &self.holder {
            if h == actor {
                push_trail(self.trail.entry(obj.clone()).or_default(), to, t, *got);
            }
        }
    }

    fn grabbed(&mut self, actor: &str, obj: &str, t: usize) {
        self.holder.insert(obj.to_string(), (actor.to_string(), t));
        self.placed.remove(obj);
        self.last_grab.insert(obj.to_string(), t);
        self.last_event.insert(obj.to_string(), t);
        if let Some((loc, since)) = self.at.get(actor).cloned() {
            push_trail(self.trail.entry(obj.to_string()).or_default(), &loc, since, t);
        }
    }

    fn dropped(&mut self, actor: &str, obj: &str, t: usize) {
        self.holder.remove(obj);
        self.last_event.insert(obj.to_string(), t);
        if let Some((loc, since)) = self.at.get(actor).cloned() {
            self.placed.insert(obj.to_string(), (loc, t, since));
        }
    }

    fn given(&mut self, giver: &str, obj: &str, receiver: &str, t: usize) {
        self.holder.insert(obj.to_string(), (receiver.to_string(), t));
        self.gives.push((t, giver.to_string(), obj.to_string(), receiver.to_string()));
    }

    fn held_by(&self, actor: &str) -> Vec<(usize, String)> {
        let mut out: Vec<_> = self.holder.iter().filter(|(_, (h, _))| h == actor).map(|(o, (_, t))| (*t, o.clone())).collect();
        out.sort();
        out
    }
}

fn push_trail(trail: &mut Vec<(String, usize, usize)>, loc: &str, t: usize, grab: usize) {
    if trail.last().map(|(l, _, _)| l.as_str()) != Some(loc) {
        trail.push((loc.to_string(), t, grab));
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Pronouns {
    None,
    /// "Then he went ..." after a single-actor statement.
    Single,
    /// "Mary and Daniel went ..."
    Conjunction,
    /// "Then they went ..." after a conjunction.
    Group,
}

fn movers(rng: &mut ChaCha8Rng, task: u8, mode: Pronouns) -> GenStory {
    let mut b = Builder::new(task);
    let cast = people(rng, 4);
    let mut tr = Tracker::default();
    let rounds = rng.random_range(3..=5);
    for _ in 0..rounds {
        for _ in 0..2 {
            let prev = b.prev_actors.clone();
            let reuse = match mode {
                Pronouns::Single => prev.len() == 1 && rng.random_bool(0.6),
                Pronouns::Group => prev.len() == 2 && rng.random_bool(0.6),
                _ => false,
            };
            let actors = if reuse {
                prev.clone()
            } else {
                let n = match mode {
                    Pronouns::Conjunction => {
                        if rng.random_bool(0.5) {
                            2
                        } else {
                            1
                        }
                    }
                    Pronouns::Group => 2,
                    _ => 1,
                };
                cast.choose_multiple(rng, n).cloned().collect::<Vec<_>>()
            };
            let here = tr.at.get(&actors[0]).map(|(l, _)| l.clone());
            let to = other_than(rng, &PLACES, here.as_deref());
            let form = LogicalForm::Move { actors: actors.clone(), to: to.clone() };
            let mut style = Style::random(rng);
            if reuse {
                style.pronoun = Some(if actors.len() == 1 { pronoun_for(&actors[0]) } else { "they" });
                style.sequencer = Some(*emit::SEQUENCERS.choose(rng).expect("non-empty"));
            } else {
                style.sequencer = b.sequencer(rng, &form);
            }
            let t = b.say_styled(form, &style);
            for a in &actors {
                tr.moved(a, &to, t);
            }
        }
        let known: Vec<_> = tr.at.keys().cloned().collect();
        let actor = known.choose(rng).expect("someone moved").clone();
        let (loc, t) = tr.at[&actor].clone();
        b.ask(QuestionForm::WhereActor { actor }, entity(&loc), vec![t]);
    }
    b.finish()
}

/// One random object-world action. Grabs require a located actor and an
/// object that is either unseen or lying where the actor is.
fn object_step(b: &mut Builder, rng: &mut ChaCha8Rng, tr: &mut Tracker, cast: &[String], objects: &[String], give: bool) {
    let mut grabs: Vec<(String, String)> = Vec::new();
    for a in cast {
        let Some((l, _)) = tr.at.get(a) else { continue };
        for o in objects {
            if !tr.holder.contains_key(o) && tr.placed.get(o).is_none_or(|(pl, _, _)| pl == l) {
                grabs.push((a.clone(), o.clone()));
            }
        }
    }
    let held: Vec<(String, String)> = tr.holder.iter().map(|(o, (h, _))| (h.clone(), o.clone())).collect();
    let roll: f64 = rng.random();
    if roll < 0.3 && !grabs.is_empty() {
        let (a, o) = grabs.choose(rng).expect("non-empty").clone();
        let t = b.say(rng, LogicalForm::Grab { actor: a.clone(), object: o.clone() });
        tr.grabbed(&a, &o, t);
    } else if roll < 0.45 && !held.is_empty() {
        let (a, o) = held.choose(rng).expect("non-empty").clone();
        let t = b.say(rng, LogicalForm::Drop { actor: a.clone(), object: o.clone() });
        tr.dropped(&a, &o, t);
    } else if give && roll < 0.75 && !held.is_empty() {
        let (a, o) = held.choose(rng).expect("non-empty").clone();
        let others: Vec<_> = cast.iter().filter(|c| **c != a).collect();
        let r = (*others.choose(rng).expect("cast has several actors")).clone();
        let t = b.say(rng, LogicalForm::Give { source: a.clone(), object: o.clone(), target: r.clone() });
        tr.given(&a, &o, &r, t);
    } else {
        let a = cast.choose(rng).expect("non-empty").clone();
        let here = tr.at.get(&a).map(|(l, _)| l.clone());
        let to = other_than(rng, &PLACES, here.as_deref());
        let t = b.say(rng, LogicalForm::Move { actors: vec![a.clone()], to: to.clone() });
        tr.moved(&a, &to, t);
    }
}

/// Categories 2 and 3: where an object is, or was before a location.
fn carried(rng: &mut ChaCha8Rng, task: u8) -> GenStory {
    let mut b = Builder::new(task);
    let cast = people(rng, 4);
    let objects = pick_n(rng, &THINGS, 3);
    let mut tr = Tracker::default();
    let (rounds, per_round) = if task == 2 { (rng.random_range(3..=5), 3) } else { (rng.random_range(3..=5), 5) };
    let mut attempts = 0;
    while b.questions() < rounds && attempts < 40 {
        attempts += 1;
        for _ in 0..per_round {
            object_step(&mut b, rng, &mut tr, &cast, &objects, false);
        }
        if task == 2 {
            let located: Vec<_> = objects.iter().filter(|o| tr.holder.contains_key(*o) || tr.placed.contains_key(*o)).collect();
            let Some(obj) = located.choose(rng).map(|o| o.to_string()) else { continue };
            let (loc, clues) = match tr.holder.get(&obj) {
                Some((h, got)) => {
                    let (loc, moved) = tr.at[h].clone();
                    (loc, vec![*got, moved])
                }
                None => {
                    let (loc, dropped, moved) = tr.placed[&obj].clone();
                    (loc, vec![dropped, moved])
                }
            };
            b.ask(QuestionForm::WhereObject { object: obj }, entity(&loc), clues);
        } else {
            let mut options = Vec::new();
            // Only legs carried by the object's latest pick-up; the clue
            // cites the object's latest event, pick-up or drop.
            for (obj, trail) in &tr.trail {
                let last = tr.last_grab.get(obj);
                let event = tr.last_event[obj];
                for (i, (loc, t, grab)) in trail.iter().enumerate().skip(1) {
                    let (prev, prev_t, prev_grab) = &trail[i - 1];
                    if Some(grab) == last && prev_grab == grab && trail.iter().filter(|(l, _, _)| l == loc).count() == 1 {
                        options.push((obj.clone(), loc.clone(), prev.clone(), vec![event, *t, *prev_t]));
                    }
                }
            }
            let Some((item, location, before, clues)) = options.choose(rng).cloned() else { continue };
            b.ask(QuestionForm::WhereBefore { item, location }, entity(&before), clues);
        }
    }
    b.finish()
}

/// Categories 5, 7 and 8: transfers, counts and lists of held objects.
fn transfers(rng: &mut ChaCha8Rng, task: u8) -> GenStory {
    let mut b = Builder::new(task);
    let cast = people(rng, 3);
    let objects = pick_n(rng, &THINGS, 3);
    let mut tr = Tracker::default();
    let rounds = rng.random_range(3..=5);
    let mut attempts = 0;
    while b.questions() < rounds && attempts < 40 {
        attempts += 1;
        for _ in 0..3 {
            let give = task != 7 || rng.random_bool(0.5);
            object_step(&mut b, rng, &mut tr, &cast, &objects, give);
        }
        match task {
            5 => {
                let Some((_, g, o, r)) = tr.gives.choose(rng).cloned() else { continue };
                let last = |pred: &dyn Fn(&GiveRecord) -> bool| {
                    tr.gives.iter().rev().find(|x| pred(x)).cloned().expect("the sampled give matches")
                };
                let (q, answer, clue) = match rng.random_range(0..5) {
                    0 => {
                        let x = last(&|x| x.1 == g && x.2 == o);
                        (QuestionForm::WhoGaveTo { giver: g, object: o }, x.3, x.0)
                    }
                    1 => {
                        let x = last(&|x| x.2 == o && x.3 == r);
                        (QuestionForm::WhoGave { object: o, receiver: Some(r) }, x.1, x.0)
                    }
                    2 => {
                        let x = last(&|x| x.2 == o);
                        (QuestionForm::WhoGave { object: o, receiver: None }, x.1, x.0)
                    }
                    3 => {
                        let x = last(&|x| x.2 == o);
                        (QuestionForm::WhoReceived { object: o }, x.3, x.0)
                    }
                    _ => {
                        let x = last(&|x| x.1 == g && x.3 == r);
                        (QuestionForm::WhatGiven { giver: g, receiver: r }, x.2, x.0)
                    }
                };
                b.ask(q, entity(&answer), vec![clue]);
            }
            7 => {
                let actor = cast.choose(rng).expect("non-empty").clone();
                let held = tr.held_by(&actor);
                let clues = held.iter().map(|(t, _)| *t).collect();
                b.ask(QuestionForm::HowMany { actor }, Answer::Count(held.len()), clues);
            }
            _ => {
                let actor = cast.choose(rng).expect("non-empty").clone();
                let held = tr.held_by(&actor);
                let clues = held.iter().map(|(t, _)| *t).collect();
                let items = held.into_iter().map(|(_, o)| o).collect();
                b.ask(QuestionForm::WhatCarrying { actor }, Answer::EntityList(items), clues);
            }
        }
    }
    b.finish()
}

fn yes_no(rng: &mut ChaCha8Rng) -> GenStory {
    let mut b = Builder::new(6);
    let cast = people(rng, 4);
    let mut tr = Tracker::default();
    for _ in 0..rng.random_range(3..=5) {
        for _ in 0..2 {
            let a = cast.choose(rng).expect("non-empty").clone();
            let here = tr.at.get(&a).map(|(l, _)| l.clone());
            let to = other_than(rng, &PLACES, here.as_deref());
            let t = b.say(rng, LogicalForm::Move { actors: vec![a.clone()], to: to.clone() });
            tr.moved(&a, &to, t);
        }
        let known: Vec<_> = tr.at.keys().cloned().collect();
        let actor = known.choose(rng).expect("non-empty").clone();
        let (loc, t) = tr.at[&actor].clone();
        let asked = if rng.random_bool(0.5) { loc.clone() } else { other_than(rng, &PLACES, Some(&loc)) };
        let answer = if asked == loc { Ternary::Yes } else { Ternary::No };
        b.ask(QuestionForm::IsIn { actor, location: asked }, Answer::YesNoMaybe(answer), vec![t]);
    }
    b.finish()
}

#[derive(Clone)]
enum Belief {
    At(String),
    NotIn(String),
    Among(String, String),
}

fn believe_question(b: &mut Builder, rng: &mut ChaCha8Rng, beliefs: &BTreeMap<String, (Belief, usize)>) {
    let names: Vec<_> = beliefs.keys().cloned().collect();
    let actor = names.choose(rng).expect("non-empty").clone();
    let (belief, t) = beliefs[&actor].clone();
    let (location, answer) = match belief {
        Belief::At(l) => {
            if rng.random_bool(0.5) {
                (l, Ternary::Yes)
            } else {
                (other_than(rng, &PLACES, Some(&l)), Ternary::No)
            }
        }
        Belief::NotIn(l) => (l, Ternary::No),
        Belief::Among(x, y) => match rng.random_range(0..3) {
            0 => (x, Ternary::Maybe),
            1 => (y, Ternary::Maybe),
            _ => loop {
                let l = other_than(rng, &PLACES, Some(&x));
                if l != y {
                    break (l, Ternary::No);
                }
            },
        },
    };
    b.ask(QuestionForm::IsIn { actor, location }, Answer::YesNoMaybe(answer), vec![t]);
}

fn negation(rng: &mut ChaCha8Rng) -> GenStory {
    let mut b = Builder::new(9);
    let cast = people(rng, 3);
    let mut beliefs: BTreeMap<String, (Belief, usize)> = BTreeMap::new();
    for _ in 0..rng.random_range(3..=5) {
        for _ in 0..2 {
            let a = cast.choose(rng).expect("non-empty").clone();
            let l = other_than(rng, &PLACES, None);
            let (form, belief) = match rng.random_range(0..4) {
                0 => (LogicalForm::Negation { actor: a.clone(), location: l.clone() }, Belief::NotIn(l)),
                1 => (LogicalForm::Affirm { actor: a.clone(), location: l.clone() }, Belief::At(l)),
                _ => (LogicalForm::Move { actors: vec![a.clone()], to: l.clone() }, Belief::At(l)),
            };
            let t = b.say(rng, form);
            beliefs.insert(a, (belief, t));
        }
        believe_question(&mut b, rng, &beliefs);
    }
    b.finish()
}

fn indefinite(rng: &mut ChaCha8Rng) -> GenStory {
    let mut b = Builder::new(10);
    let cast = people(rng, 3);
    let mut beliefs: BTreeMap<String, (Belief, usize)> = BTreeMap::new();
    for _ in 0..rng.random_range(3..=5) {
        for _ in 0..2 {
            let a = cast.choose(rng).expect("non-empty").clone();
            let l = other_than(rng, &PLACES, None);
            let (form, belief) = match rng.random_range(0..3) {
                0 => {
                    let m = other_than(rng, &PLACES, Some(&l));
                    (LogicalForm::MoveEither { actor: a.clone(), first: l.clone(), second: m.clone() }, Belief::Among(l, m))
                }
                1 => (LogicalForm::Affirm { actor: a.clone(), location: l.clone() }, Belief::At(l)),
                _ => (LogicalForm::Move { actors: vec![a.clone()], to: l.clone() }, Belief::At(l)),
            };
            let t = b.say(rng, form);
            beliefs.insert(a, (belief, t));
        }
        believe_question(&mut b, rng, &beliefs);
    }
    b.finish()
}

fn time_stamps(rng: &mut ChaCha8Rng) -> GenStory {
    let mut b = Builder::new(14);
    let cast = people(rng, 2);
    let mut pending = Vec::new();
    for a in &cast {
        let n = rng.random_range(2..=4);
        let mut stamps: Vec<Stamp> = Stamp::ALL.choose_multiple(rng, n).copied().collect();
        stamps.sort();
        let mut last: Option<String> = None;
        for s in stamps {
            let l = other_than(rng, &TOWN, last.as_deref());
            last = Some(l.clone());
            pending.push((a.clone(), s, l));
        }
    }
    pending.shuffle(rng);
    // actor -> (stamp, location, time)
    let mut seen: BTreeMap<String, Vec<(Stamp, String, usize)>> = BTreeMap::new();
    for chunk in pending.chunks(2) {
        for (a, s, l) in chunk {
            let t = b.say_styled(LogicalForm::MoveTimed { actor: a.clone(), to: l.clone(), stamp: *s }, &Style::random(rng));
            let entries = seen.entry(a.clone()).or_default();
            entries.push((*s, l.clone(), t));
            entries.sort();
        }
        let mut options = Vec::new();
        for (a, entries) in &seen {
            for i in 1..entries.len() {
                let loc = &entries[i].1;
                if entries.iter().filter(|e| &e.1 == loc).count() == 1 {
                    options.push((a.clone(), loc.clone(), entries[i - 1].1.clone(), vec![entries[i].2, entries[i - 1].2]));
                }
            }
        }
        if let Some((item, location, before, clues)) = options.choose(rng).cloned() {
            b.ask(QuestionForm::WhereBefore { item, location }, entity(&before), clues);
        }
    }
    b.finish()
}

// Relations between named things.

fn two_arg(rng: &mut ChaCha8Rng) -> GenStory {
    let mut b = Builder::new(4);
    let names = pick_n(rng, &PLACES, 3);
    let mut cells: BTreeMap<(i32, i32), String> = BTreeMap::new();
    cells.insert((0, 0), names[0].clone());
    // (subject, dir, reference) facts, in statement order.
    let mut facts = Vec::new();
    let mut anchors = vec![((0, 0), names[0].clone())];
    for name in &names[1..] {
        loop {
            let (at, anchor) = anchors.choose(rng).expect("non-empty").clone();
            let d = *Compass::ALL.choose(rng).expect("non-empty");
            let (dx, dy) = d.offset();
            let cell = (at.0 + dx, at.1 + dy);
            if cells.contains_key(&cell) {
                continue;
            }
            cells.insert(cell, name.clone());
            anchors.push((cell, name.clone()));
            facts.push((name.clone(), d, anchor));
            break;
        }
    }
    let mut times = Vec::new();
    for (s, d, r) in &facts {
        let form = if rng.random_bool(0.5) {
            LogicalForm::DirRel { subject: s.clone(), dir: *d, reference: r.clone() }
        } else {
            LogicalForm::DirRel { subject: r.clone(), dir: d.opposite(), reference: s.clone() }
        };
        times.push(b.say(rng, form));
    }
    let k = rng.random_range(0..facts.len());
    let (s, d, r) = facts[k].clone();
    let (q, answer) = match rng.random_range(0..4) {
        0 => (QuestionForm::WhatDirOf { dir: d, reference: r.clone() }, s),
        1 => (QuestionForm::WhatDirRev { subject: s.clone(), dir: d }, r),
        2 => (QuestionForm::WhatDirOf { dir: d.opposite(), reference: s.clone() }, r),
        _ => (QuestionForm::WhatDirRev { subject: r.clone(), dir: d.opposite() }, s),
    };
    b.ask(q, entity(&answer), vec![times[k]]);
    b.finish()
}

fn deduction(rng: &mut ChaCha8Rng) -> GenStory {
    let mut b = Builder::new(15);
    let mut fears: Vec<(String, String)> = Vec::new();
    for s in SPECIES {
        fears.push((s.to_string(), other_than(rng, &SPECIES, Some(s))));
    }
    let names = pick_n(rng, &ANIMAL_NAMES, 4);
    let kinds: Vec<String> = names.iter().map(|_| SPECIES.choose(rng).expect("non-empty").to_string()).collect();
    let mut forms: Vec<LogicalForm> = fears.iter().map(|(s, f)| LogicalForm::AfraidOf { subject: s.clone(), feared: f.clone() }).collect();
    forms.extend(names.iter().zip(&kinds).map(|(n, k)| LogicalForm::IsA { instance: n.clone(), category: k.clone() }));
    forms.shuffle(rng);
    let mut fear_time = BTreeMap::new();
    let mut isa_time = BTreeMap::new();
    for f in forms {
        let key = match &f {
            LogicalForm::AfraidOf { subject, .. } => Some((true, subject.clone())),
            LogicalForm::IsA { instance, .. } => Some((false, instance.clone())),
            _ => None,
        };
        let t = b.say(rng, f);
        match key {
            Some((true, s)) => fear_time.insert(s, t),
            Some((false, n)) => isa_time.insert(n, t),
            None => None,
        };
    }
    for _ in 0..3 {
        let i = rng.random_range(0..names.len());
        let feared = &fears.iter().find(|(s, _)| *s == kinds[i]).expect("every species fears one").1;
        let clues = vec![isa_time[&names[i]], fear_time[&kinds[i]]];
        b.ask(QuestionForm::WhatAfraid { instance: names[i].clone() }, entity(feared), clues);
    }
    b.finish()
}

fn induction(rng: &mut ChaCha8Rng) -> GenStory {
    let mut b = Builder::new(16);
    let mut palette: Vec<&str> = COLORS.to_vec();
    palette.shuffle(rng);
    let color_of = |breed: &str| palette[BREEDS.iter().position(|x| *x == breed).expect("listed")].to_string();
    let names = pick_n(rng, &ANIMAL_NAMES, 5);
    let (query, known) = names.split_last().expect("five names");
    let breeds: Vec<String> = known.iter().map(|_| BREEDS.choose(rng).expect("non-empty").to_string()).collect();
    let mut pairs: Vec<Vec<LogicalForm>> = known
        .iter()
        .zip(&breeds)
        .map(|(n, c)| {
            vec![
                LogicalForm::IsA { instance: n.clone(), category: c.clone() },
                LogicalForm::HasProp { subject: n.clone(), property: color_of(c) },
            ]
        })
        .collect();
    pairs.shuffle(rng);
    let target = breeds.choose(rng).expect("non-empty").clone();
    let mut clue_for = BTreeMap::new();
    for pair in pairs {
        for f in pair {
            let key = match &f {
                LogicalForm::IsA { instance, .. } | LogicalForm::HasProp { subject: instance, .. } => instance.clone(),
                _ => String::new(),
            };
            let t = b.say(rng, f);
            clue_for.entry(key).or_insert_with(Vec::new).push(t);
        }
    }
    let isa_t = b.say(rng, LogicalForm::IsA { instance: query.clone(), category: target.clone() });
    // Latest property evidence for the breed, as the reasoner consults it.
    let witness = known
        .iter()
        .zip(&breeds)
        .filter(|(_, c)| **c == target)
        .max_by_key(|(n, _)| clue_for[*n][1])
        .map(|(n, _)| n.clone())
        .expect("target drawn from present breeds");
    let mut clues = vec![isa_t];
    clues.extend(clue_for[&witness].iter().copied());
    b.ask(QuestionForm::WhatColor { instance: query.clone() }, entity(&color_of(&target)), clues);
    b.finish()
}

fn side_offset(side: Side) -> (i32, i32) {
    match side {
        Side::Above => (0, 1),
        Side::Below => (0, -1),
        Side::Left => (-1, 0),
        Side::Right => (1, 0),
    }
}

fn side_holds(side: Side, a: (i32, i32), b: (i32, i32)) -> bool {
    match side {
        Side::Above => a.1 > b.1,
        Side::Below => a.1 < b.1,
        Side::Left => a.0 < b.0,
        Side::Right => a.0 > b.0,
    }
}

/// Two statements chain three shapes; questions relate the two shapes that
/// no statement relates directly.
fn positions(rng: &mut ChaCha8Rng) -> GenStory {
    let mut b = Builder::new(17);
    loop {
        let shapes = pick_n(rng, &SHAPES, 3);
        let (x, y, z) = (&shapes[0], &shapes[1], &shapes[2]);
        let s1 = *Side::ALL.choose(rng).expect("non-empty");
        let s2 = *Side::ALL.choose(rng).expect("non-empty");
        // x s1 y, with y at the origin.
        let mut at = BTreeMap::new();
        at.insert(y.clone(), (0, 0));
        let o1 = side_offset(s1);
        at.insert(x.clone(), o1);
        // z joins y or x, as subject or reference.
        let anchor = if rng.random_bool(0.5) { y } else { x };
        let z_subject = rng.random_bool(0.5);
        let o2 = side_offset(s2);
        let a = at[anchor];
        let zc = if z_subject { (a.0 + o2.0, a.1 + o2.1) } else { (a.0 - o2.0, a.1 - o2.1) };
        if at.values().any(|&c| c == zc) {
            continue;
        }
        at.insert(z.clone(), zc);
        let other = if anchor == y { x } else { y };
        let t1 = b.say(rng, LogicalForm::PosRel { subject: x.clone(), side: s1, reference: y.clone() });
        let second = if z_subject {
            LogicalForm::PosRel { subject: z.clone(), side: s2, reference: anchor.clone() }
        } else {
            LogicalForm::PosRel { subject: anchor.clone(), side: s2, reference: z.clone() }
        };
        let t2 = b.say(rng, second);
        let mut asked = BTreeSet::new();
        while asked.len() < 4 {
            let side = *Side::ALL.choose(rng).expect("non-empty");
            let flip = rng.random_bool(0.5);
            if !asked.insert((side, flip)) {
                continue;
            }
            let (p, q) = if flip { (other, z) } else { (z, other) };
            let truth = if side_holds(side, at[p], at[q]) { Ternary::Yes } else { Ternary::No };
            let form = QuestionForm::PosQ { subject: p.clone(), side, reference: q.clone() };
            b.ask(form, Answer::YesNoMaybe(truth), vec![t1, t2]);
        }
        return b.finish();
    }
}

fn sizes(rng: &mut ChaCha8Rng) -> GenStory {
    let mut b = Builder::new(18);
    let n = rng.random_range(4..=5);
    // Smallest first.
    let order = pick_n(rng, &BOXES, n);
    let rank = |x: &str| order.iter().position(|o| o == x).expect("listed");
    let mut edges: Vec<(String, String, usize)> = Vec::new();
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    pairs.shuffle(rng);
    for &(i, j) in pairs.iter().take(n) {
        let t = b.say(rng, LogicalForm::Contains { containee: order[i].clone(), container: order[j].clone() });
        edges.push((order[i].clone(), order[j].clone(), t));
    }
    let reach = |from: &str, to: &str| {
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::from([from.to_string()]);
        while let Some(cur) = queue.pop_front() {
            if cur == to {
                return true;
            }
            if !seen.insert(cur.clone()) {
                continue;
            }
            for (a, c, _) in &edges {
                if *a == cur {
                    queue.push_back(c.clone());
                }
            }
        }
        false
    };
    let mut decidable: Vec<(String, String)> = Vec::new();
    for a in &order {
        for c in &order {
            if a != c && (reach(a, c) || reach(c, a)) {
                decidable.push((a.clone(), c.clone()));
            }
        }
    }
    for _ in 0..rng.random_range(2..=4) {
        let (a, c) = decidable.choose(rng).expect("statements relate some pair").clone();
        let answer = if reach(&a, &c) { Ternary::Yes } else { Ternary::No };
        debug_assert_eq!(answer == Ternary::Yes, rank(&a) < rank(&c));
        let phrasing = if rng.random_bool(0.5) { Phrasing::Fits } else { Phrasing::Bigger };
        let clues = edges.iter().map(|e| e.2).collect();
        b.ask(QuestionForm::ContainsQ { containee: a, container: c, phrasing }, Answer::YesNoMaybe(answer), clues);
    }
    b.finish()
}

/// Grid locations connected by stated adjacencies.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GridWorld {
    pub coords: BTreeMap<String, (i32, i32)>,
    /// Undirected; stored in both orientations.
    pub edges: BTreeSet<(String, String)>,
}

impl GridWorld {
    fn link(&mut self, a: &str, c: &str) {
        self.edges.insert((a.to_string(), c.to_string()));
        self.edges.insert((c.to_string(), a.to_string()));
    }

    /// The stated neighbour one step `dir` from `loc`.
    pub fn step(&self, loc: &str, dir: Compass) -> Option<&str> {
        let (x, y) = *self.coords.get(loc)?;
        let (dx, dy) = dir.offset();
        let (name, _) = self.coords.iter().find(|(_, c)| **c == (x + dx, y + dy))?;
        self.edges.contains(&(loc.to_string(), name.clone())).then_some(name.as_str())
    }

    /// Walks `steps` from `from`; `None` if some step has no stated edge.
    pub fn replay(&self, from: &str, steps: &[Compass]) -> Option<String> {
        let mut cur = from.to_string();
        for &d in steps {
            cur = self.step(&cur, d)?.to_string();
        }
        Some(cur)
    }

    /// Shortest path over stated edges, expanding n, e, s, w in order.
    pub fn bfs(&self, from: &str, to: &str) -> Option<Vec<Compass>> {
        let mut queue = VecDeque::from([(from.to_string(), Vec::new())]);
        let mut seen = BTreeSet::from([from.to_string()]);
        while let Some((cur, path)) = queue.pop_front() {
            if cur == to {
                return Some(path);
            }
            for d in Compass::ALL {
                if let Some(next) = self.step(&cur, d) {
                    if seen.insert(next.to_string()) {
                        let mut p = path.clone();
                        p.push(d);
                        queue.push_back((next.to_string(), p));
                    }
                }
            }
        }
        None
    }
}

/// Random spanning trees on the grid, sometimes two of them.
fn paths(rng: &mut ChaCha8Rng) -> GenStory {
    let mut b = Builder::new(19);
    let count = rng.random_range(5..=6);
    let names = pick_n(rng, &PLACES, count);
    let split = if rng.random_bool(0.2) { names.len() - 2 } else { names.len() };
    let mut grid = GridWorld::default();
    let mut facts = Vec::new();
    for (part, origin) in [(&names[..split], (0, 0)), (&names[split..], (100, 0))] {
        let Some((root, rest)) = part.split_first() else { continue };
        grid.coords.insert(root.clone(), origin);
        let mut placed = vec![root.clone()];
        for name in rest {
            loop {
                let anchor = placed.choose(rng).expect("non-empty").clone();
                let d = *Compass::ALL.choose(rng).expect("non-empty");
                let (x, y) = grid.coords[&anchor];
                let (dx, dy) = d.offset();
                let cell = (x + dx, y + dy);
                if grid.coords.values().any(|c| *c == cell) {
                    continue;
                }
                grid.coords.insert(name.clone(), cell);
                grid.link(name, &anchor);
                placed.push(name.clone());
                facts.push((name.clone(), d, anchor));
                break;
            }
        }
    }
    facts.shuffle(rng);
    let mut edge_time = BTreeMap::new();
    for (s, d, r) in &facts {
        let form = if rng.random_bool(0.5) {
            LogicalForm::DirRel { subject: s.clone(), dir: *d, reference: r.clone() }
        } else {
            LogicalForm::DirRel { subject: r.clone(), dir: d.opposite(), reference: s.clone() }
        };
        let t = b.say(rng, form);
        edge_time.insert((s.clone(), r.clone()), t);
        edge_time.insert((r.clone(), s.clone()), t);
    }
    let mut options = Vec::new();
    for from in &names {
        for to in &names {
            if from != to {
                if let Some(p) = grid.bfs(from, to).filter(|p| p.len() <= 2) {
                    options.push((from.clone(), to.clone(), p));
                }
            }
        }
    }
    let (from, to, path) = options.choose(rng).expect("trees have edges").clone();
    let mut clues = Vec::new();
    let mut cur = from.clone();
    for &d in &path {
        let next = grid.step(&cur, d).expect("bfs path").to_string();
        clues.push(edge_time[&(cur.clone(), next.clone())]);
        cur = next;
    }
    b.ask(QuestionForm::PathQ { from, to }, Answer::Path(path), clues);
    let mut story = b.finish();
    story.grid = Some(grid);
    story
}

fn motivations(rng: &mut ChaCha8Rng) -> GenStory {
    let mut b = Builder::new(20);
    let count = rng.random_range(2..=4);
    let cast = pick_n(rng, &AGENTS, count);
    let drives: Vec<(&str, &str, &str)> = cast.iter().map(|_| *DRIVES.choose(rng).expect("non-empty")).collect();
    // Each agent: state, move, fetch, in order; agents interleave.
    let mut progress = vec![0usize; cast.len()];
    let mut state_time = vec![0usize; cast.len()];
    while progress.iter().any(|&p| p < 3) {
        let open: Vec<usize> = (0..cast.len()).filter(|&i| progress[i] < 3).collect();
        let i = *open.choose(rng).expect("non-empty");
        let (motive, place, object) = drives[i];
        let actor = cast[i].clone();
        match progress[i] {
            0 => {
                state_time[i] = b.say(rng, LogicalForm::Motivation { actor: actor.clone(), state: motive.into() });
                if rng.random_bool(0.5) {
                    b.ask(QuestionForm::WhereWillGo { actor }, entity(place), vec![state_time[i]]);
                }
            }
            1 => {
                b.say(rng, LogicalForm::Move { actors: vec![actor.clone()], to: place.into() });
                if rng.random_bool(0.5) {
                    let q = QuestionForm::WhyAction { actor, deed: Deed::Go(place.into()) };
                    b.ask(q, Answer::Motivation(motive.into()), vec![state_time[i]]);
                }
            }
            _ => {
                b.say(rng, LogicalForm::Grab { actor: actor.clone(), object: object.into() });
                if rng.random_bool(0.5) {
                    let q = QuestionForm::WhyAction { actor, deed: Deed::Get(object.into()) };
                    b.ask(q, Answer::Motivation(motive.into()), vec![state_time[i]]);
                }
            }
        }
        progress[i] += 1;
    }
    if b.questions() == 0 {
        let actor = cast[0].clone();
        b.ask(QuestionForm::WhyAction { actor, deed: Deed::Go(drives[0].1.into()) }, Answer::Motivation(drives[0].0.into()), vec![state_time[0]]);
    }
    b.finish()
}
