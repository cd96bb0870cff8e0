//! Pattern templates for the twenty-category grammar.

use super::forms::{Deed, LogicalForm, Phrasing, QuestionForm};
use super::lexicon::GrammarLexicon;
use super::ParseError;
use crate::relation::{Compass, Side, Stamp};

/// Words that terminate a noun phrase.
const STOP: &[&str] = &[
    "is", "are", "fits", "fit", "to", "or", "before", "bigger", "there", "and", "in", "inside", "than", "north",
    "east", "south", "west", "above", "below", "this", "yesterday", "afraid", "carrying", "go", "from", ".", "?",
];

/// Story-local state for pronoun resolution: the actors of the immediately
/// preceding statement.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParseContext {
    pub previous_actors: Vec<String>,
}

impl ParseContext {
    pub fn observe(&mut self, form: &LogicalForm) {
        self.previous_actors = form.actors();
    }

    pub fn reset(&mut self) {
        self.previous_actors.clear();
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Parsed {
    Statement(LogicalForm),
    Question(QuestionForm),
}

struct Cursor<'a> {
    toks: &'a [String],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(toks: &'a [String]) -> Self {
        Self { toks, pos: 0 }
    }

    fn peek(&self) -> Option<&'a str> {
        self.toks.get(self.pos).map(String::as_str)
    }

    fn done(&self) -> bool {
        self.pos == self.toks.len()
    }

    fn eat(&mut self, word: &str) -> bool {
        if self.peek() == Some(word) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_seq(&mut self, words: &[&str]) -> bool {
        let end = self.pos + words.len();
        if end <= self.toks.len() && self.toks[self.pos..end].iter().zip(words).all(|(a, b)| a == b) {
            self.pos = end;
            true
        } else {
            false
        }
    }

    fn eat_class(&mut self, lex: &GrammarLexicon, class: &str) -> bool {
        for phrase in lex.phrases(class) {
            let end = self.pos + phrase.len();
            if end <= self.toks.len() && self.toks[self.pos..end] == *phrase {
                self.pos = end;
                return true;
            }
        }
        false
    }

    fn word(&mut self) -> Option<String> {
        let w = self.peek()?;
        if STOP.contains(&w) || w == "the" {
            return None;
        }
        self.pos += 1;
        Some(w.to_string())
    }

    /// `the w1 w2 ...`, joined with `_`.
    fn definite(&mut self) -> Option<String> {
        let start = self.pos;
        if !self.eat("the") {
            return None;
        }
        let mut words = Vec::new();
        while let Some(w) = self.peek() {
            if STOP.contains(&w) {
                break;
            }
            words.push(w);
            self.pos += 1;
        }
        if words.is_empty() {
            self.pos = start;
            None
        } else {
            Some(words.join("_"))
        }
    }

    fn entity(&mut self) -> Option<String> {
        self.definite().or_else(|| self.word())
    }

    fn compass(&mut self) -> Option<Compass> {
        let dir = Compass::from_word(self.peek()?)?;
        self.pos += 1;
        Some(dir)
    }

    /// `above` / `below` / `to the left of` / `to the right of`.
    fn side(&mut self) -> Option<Side> {
        if self.eat("above") {
            Some(Side::Above)
        } else if self.eat("below") {
            Some(Side::Below)
        } else if self.eat_seq(&["to", "the", "left", "of"]) {
            Some(Side::Left)
        } else if self.eat_seq(&["to", "the", "right", "of"]) {
            Some(Side::Right)
        } else {
            None
        }
    }
}

fn strip_terminal(tokens: &[String]) -> &[String] {
    let mut end = tokens.len();
    while end > 0 && matches!(tokens[end - 1].as_str(), "." | "?" | "!") {
        end -= 1;
    }
    &tokens[..end]
}

fn stamp_at(toks: &[String], lex: &GrammarLexicon) -> Option<(Stamp, usize)> {
    let word = |i: usize| toks.get(i).map(String::as_str);
    let known = |w: &str| Stamp::from_word(w).filter(|s| lex.stamp_order().contains(s));
    match word(0)? {
        "this" => known(word(1)?).map(|s| (s, 2)),
        w => known(w).map(|s| (s, 1)),
    }
}

fn unparseable(tokens: &[String]) -> ParseError {
    ParseError::UnparseableLine(tokens.join(" "))
}

enum Subject {
    Names(Vec<String>),
    Definite(String),
}

fn subject(c: &mut Cursor, ctx: &ParseContext, lex: &GrammarLexicon) -> Result<Option<Subject>, ParseError> {
    if let Some(np) = c.definite() {
        return Ok(Some(Subject::Definite(np)));
    }
    let Some(first) = c.peek() else { return Ok(None) };
    if lex.contains("pronoun_single", first) {
        c.pos += 1;
        return match ctx.previous_actors.as_slice() {
            [one] => Ok(Some(Subject::Names(vec![one.clone()]))),
            _ => Err(ParseError::UnresolvedPronoun { pronoun: first.to_string() }),
        };
    }
    if lex.contains("pronoun_group", first) {
        c.pos += 1;
        if ctx.previous_actors.is_empty() {
            return Err(ParseError::UnresolvedPronoun { pronoun: first.to_string() });
        }
        return Ok(Some(Subject::Names(ctx.previous_actors.clone())));
    }
    let Some(name) = c.word() else { return Ok(None) };
    let mut names = vec![name];
    while c.eat("and") {
        match c.word() {
            Some(n) => names.push(n),
            None => return Ok(None),
        }
    }
    Ok(Some(Subject::Names(names)))
}

/// Parses one declarative line.
pub fn parse_statement(
    tokens: &[String],
    task_id: u8,
    ctx: &ParseContext,
    lex: &GrammarLexicon,
) -> Result<LogicalForm, ParseError> {
    let all = strip_terminal(tokens);
    let mut toks = all;
    // Trailing "yesterday" / "this morning".
    let mut stamp = None;
    for cut in [2usize, 1] {
        if toks.len() > cut {
            if let Some((s, used)) = stamp_at(&toks[toks.len() - cut..], lex) {
                if used == cut {
                    stamp = Some(s);
                    toks = &toks[..toks.len() - cut];
                    break;
                }
            }
        }
    }
    let mut c = Cursor::new(toks);
    if c.eat_class(lex, "sequencer") {
        c.eat(",");
    }
    if stamp.is_none() {
        if let Some((s, used)) = stamp_at(&toks[c.pos..], lex) {
            stamp = Some(s);
            c.pos += used;
            c.eat(",");
        }
    }
    let form = subject(&mut c, ctx, lex)?
        .and_then(|subj| predicate(&mut c, subj, stamp, task_id, lex))
        .filter(|_| c.done());
    form.ok_or_else(|| unparseable(all))
}

fn single(subj: &Subject) -> Option<String> {
    match subj {
        Subject::Names(n) if n.len() == 1 => Some(n[0].clone()),
        Subject::Definite(np) => Some(np.clone()),
        _ => None,
    }
}

fn predicate(c: &mut Cursor, subj: Subject, stamp: Option<Stamp>, task_id: u8, lex: &GrammarLexicon) -> Option<LogicalForm> {
    if c.eat_class(lex, "move") {
        c.eat("back");
        if !c.eat("to") {
            return None;
        }
        let to = c.definite()?;
        let actors = match subj {
            Subject::Names(n) if n.len() <= 2 => n,
            _ => return None,
        };
        return match stamp {
            None => Some(LogicalForm::Move { actors, to }),
            Some(stamp) if actors.len() == 1 => {
                Some(LogicalForm::MoveTimed { actor: actors[0].clone(), to, stamp })
            }
            Some(_) => None,
        };
    }
    if stamp.is_some() {
        return None;
    }
    let actor = single(&subj)?;
    if c.eat_class(lex, "grab") {
        let object = c.definite()?;
        c.eat("there");
        return Some(LogicalForm::Grab { actor, object });
    }
    if c.eat_class(lex, "drop") {
        let object = c.definite()?;
        c.eat("there");
        return Some(LogicalForm::Drop { actor, object });
    }
    if c.eat_class(lex, "give") {
        let object = c.definite()?;
        if !c.eat("to") {
            return None;
        }
        let target = c.entity()?;
        return Some(LogicalForm::Give { source: actor, object, target });
    }
    if c.eat("fits") {
        if !(c.eat("inside") || c.eat("in")) {
            return None;
        }
        let container = c.definite()?;
        return Some(LogicalForm::Contains { containee: actor, container });
    }
    if c.eat("are") {
        if c.eat_seq(&["afraid", "of"]) {
            let feared = c.word()?;
            return Some(LogicalForm::AfraidOf {
                subject: lex.singular(&actor).to_string(),
                feared: lex.singular(&feared).to_string(),
            });
        }
        return None;
    }
    if !c.eat("is") {
        return None;
    }
    if c.eat("either") {
        if !c.eat("in") {
            return None;
        }
        let first = c.definite()?;
        if !c.eat("or") {
            return None;
        }
        c.eat("in");
        let second = c.definite()?;
        return Some(LogicalForm::MoveEither { actor, first, second });
    }
    if c.eat_seq(&["no", "longer", "in"]) || c.eat_seq(&["not", "in"]) {
        let location = c.definite()?;
        return Some(LogicalForm::Negation { actor, location });
    }
    if c.eat("in") {
        let location = c.definite()?;
        return Some(LogicalForm::Affirm { actor, location });
    }
    if c.eat("a") || c.eat("an") {
        let category = c.word()?;
        return Some(LogicalForm::IsA { instance: actor, category: lex.singular(&category).to_string() });
    }
    if c.eat_seq(&["afraid", "of"]) {
        let feared = c.word()?;
        return Some(LogicalForm::AfraidOf {
            subject: lex.singular(&actor).to_string(),
            feared: lex.singular(&feared).to_string(),
        });
    }
    if c.eat_seq(&["bigger", "than"]) {
        let smaller = c.definite()?;
        return Some(LogicalForm::Contains { containee: smaller, container: actor });
    }
    if let Some(dir) = c.compass() {
        if !c.eat("of") {
            return None;
        }
        let reference = c.definite()?;
        return Some(LogicalForm::DirRel { subject: actor, dir, reference });
    }
    if let Some(side) = c.side() {
        let reference = c.definite()?;
        return Some(LogicalForm::PosRel { subject: actor, side, reference });
    }
    let adjective = c.word()?;
    if task_id == 20 || lex.contains("motivation", &adjective) {
        Some(LogicalForm::Motivation { actor, state: adjective })
    } else {
        Some(LogicalForm::HasProp { subject: actor, property: adjective })
    }
}

/// Parses one question line.
pub fn parse_question(tokens: &[String], _task_id: u8, lex: &GrammarLexicon) -> Result<QuestionForm, ParseError> {
    let toks = strip_terminal(tokens);
    let mut c = Cursor::new(toks);
    question(&mut c, lex).filter(|_| c.done()).ok_or_else(|| unparseable(toks))
}

fn question(c: &mut Cursor, lex: &GrammarLexicon) -> Option<QuestionForm> {
    if c.eat("where") {
        if c.eat("is") {
            if let Some(object) = c.definite() {
                return Some(QuestionForm::WhereObject { object });
            }
            return Some(QuestionForm::WhereActor { actor: c.word()? });
        }
        if c.eat("was") {
            let item = c.entity()?;
            if !c.eat("before") {
                return None;
            }
            let location = c.definite()?;
            return Some(QuestionForm::WhereBefore { item, location });
        }
        if c.eat("will") {
            let actor = c.word()?;
            return c.eat("go").then_some(QuestionForm::WhereWillGo { actor });
        }
        return None;
    }
    if c.eat("who") {
        if c.eat("did") {
            let giver = c.word()?;
            if !c.eat("give") {
                return None;
            }
            let object = c.definite()?;
            return c.eat("to").then_some(QuestionForm::WhoGaveTo { giver, object });
        }
        if c.eat("gave") {
            let object = c.definite()?;
            let receiver = if c.eat("to") { Some(c.entity()?) } else { None };
            return Some(QuestionForm::WhoGave { object, receiver });
        }
        if c.eat("received") {
            return Some(QuestionForm::WhoReceived { object: c.definite()? });
        }
        return None;
    }
    if c.eat("what") {
        if c.eat("did") {
            let giver = c.word()?;
            if !c.eat_seq(&["give", "to"]) {
                return None;
            }
            let receiver = c.entity()?;
            return Some(QuestionForm::WhatGiven { giver, receiver });
        }
        if c.eat("color") {
            if !c.eat("is") {
                return None;
            }
            return Some(QuestionForm::WhatColor { instance: c.entity()? });
        }
        if !c.eat("is") {
            return None;
        }
        if let Some(dir) = c.compass() {
            if !c.eat("of") {
                return None;
            }
            return Some(QuestionForm::WhatDirOf { dir, reference: c.definite()? });
        }
        if let Some(subject) = c.definite() {
            let dir = c.compass()?;
            return c.eat("of").then_some(QuestionForm::WhatDirRev { subject, dir });
        }
        let who = c.word()?;
        if c.eat("carrying") {
            return Some(QuestionForm::WhatCarrying { actor: who });
        }
        if c.eat_seq(&["afraid", "of"]) {
            return Some(QuestionForm::WhatAfraid { instance: who });
        }
        return None;
    }
    if c.eat("how") {
        if c.eat_seq(&["many", "objects", "is"]) {
            let actor = c.word()?;
            return c.eat("carrying").then_some(QuestionForm::HowMany { actor });
        }
        if c.eat_seq(&["do", "you", "go", "from"]) {
            let from = c.definite()?;
            if !c.eat("to") {
                return None;
            }
            return Some(QuestionForm::PathQ { from, to: c.definite()? });
        }
        return None;
    }
    if c.eat("is") {
        if let Some(subject) = c.definite() {
            if c.eat_seq(&["bigger", "than"]) {
                let smaller = c.definite()?;
                return Some(QuestionForm::ContainsQ { containee: smaller, container: subject, phrasing: Phrasing::Bigger });
            }
            let side = c.side()?;
            return Some(QuestionForm::PosQ { subject, side, reference: c.definite()? });
        }
        let actor = c.word()?;
        if !c.eat("in") {
            return None;
        }
        return Some(QuestionForm::IsIn { actor, location: c.definite()? });
    }
    if c.eat("does") {
        let containee = c.definite()?;
        if !(c.eat_seq(&["fit", "in"]) || c.eat_seq(&["fit", "inside"])) {
            return None;
        }
        return Some(QuestionForm::ContainsQ { containee, container: c.definite()?, phrasing: Phrasing::Fits });
    }
    if c.eat("why") {
        if !c.eat("did") {
            return None;
        }
        let actor = c.word()?;
        if c.eat("go") {
            if !c.eat("to") {
                return None;
            }
            return Some(QuestionForm::WhyAction { actor, deed: Deed::Go(c.definite()?) });
        }
        if c.eat("get") || c.eat("grab") || c.eat("take") || c.eat_seq(&["pick", "up"]) || c.eat_class(lex, "grab") {
            return Some(QuestionForm::WhyAction { actor, deed: Deed::Get(c.definite()?) });
        }
        return None;
    }
    None
}

/// Statement or question, decided by the terminal `?`.
pub fn parse_line(tokens: &[String], task_id: u8, ctx: &ParseContext, lex: &GrammarLexicon) -> Result<Parsed, ParseError> {
    if tokens.last().map(String::as_str) == Some("?") {
        parse_question(tokens, task_id, lex).map(Parsed::Question)
    } else {
        parse_statement(tokens, task_id, ctx, lex).map(Parsed::Statement)
    }
}

#[cfg(test)]
mod tests {
    use super::super::tokenize;
    use super::*;

    fn stmt(line: &str, prev: &[&str]) -> LogicalForm {
        let ctx = ParseContext { previous_actors: prev.iter().map(|s| s.to_string()).collect() };
        parse_statement(&tokenize(line), 1, &ctx, &GrammarLexicon::default()).unwrap()
    }

    fn q(line: &str) -> QuestionForm {
        parse_question(&tokenize(line), 1, &GrammarLexicon::default()).unwrap()
    }

    fn s(v: &str) -> String {
        v.to_string()
    }

    #[test]
    fn conjunction_move() {
        assert_eq!(
            stmt("Daniel and Sandra went back to the kitchen.", &[]),
            LogicalForm::Move { actors: vec![s("daniel"), s("sandra")], to: s("kitchen") }
        );
    }

    #[test]
    fn pronouns() {
        assert_eq!(
            stmt("Afterwards he moved to the hallway.", &["daniel"]),
            LogicalForm::Move { actors: vec![s("daniel")], to: s("hallway") }
        );
        assert_eq!(
            stmt("Then they journeyed to the hallway.", &["mary", "daniel"]),
            LogicalForm::Move { actors: vec![s("mary"), s("daniel")], to: s("hallway") }
        );
        assert_eq!(
            stmt("After that she went to the bedroom.", &["mary"]),
            LogicalForm::Move { actors: vec![s("mary")], to: s("bedroom") }
        );
        let ctx = ParseContext::default();
        let err = parse_statement(&tokenize("Then he went to the office."), 11, &ctx, &GrammarLexicon::default());
        assert_eq!(err, Err(ParseError::UnresolvedPronoun { pronoun: s("he") }));
    }

    #[test]
    fn normalizations() {
        assert_eq!(
            stmt("The suitcase is bigger than the container.", &[]),
            LogicalForm::Contains { containee: s("container"), container: s("suitcase") }
        );
        assert_eq!(
            stmt("The box of chocolates fits inside the chest.", &[]),
            LogicalForm::Contains { containee: s("box_of_chocolates"), container: s("chest") }
        );
        assert_eq!(
            stmt("Sandra is no longer in the garden.", &[]),
            LogicalForm::Negation { actor: s("sandra"), location: s("garden") }
        );
        assert_eq!(
            stmt("Mice are afraid of cats.", &[]),
            LogicalForm::AfraidOf { subject: s("mouse"), feared: s("cat") }
        );
        assert_eq!(
            stmt("The office is north of the kitchen.", &[]),
            LogicalForm::DirRel { subject: s("office"), dir: Compass::North, reference: s("kitchen") }
        );
    }

    #[test]
    fn stamps_prefix_and_suffix() {
        assert_eq!(
            stmt("Yesterday Julie went back to the park.", &[]),
            LogicalForm::MoveTimed { actor: s("julie"), to: s("park"), stamp: Stamp::Yesterday }
        );
        assert_eq!(
            stmt("Julie went to the bedroom this morning.", &[]),
            LogicalForm::MoveTimed { actor: s("julie"), to: s("bedroom"), stamp: Stamp::Morning }
        );
        assert_eq!(
            stmt("This evening Julie went to the school.", &[]),
            LogicalForm::MoveTimed { actor: s("julie"), to: s("school"), stamp: Stamp::Evening }
        );
    }

    #[test]
    fn object_verbs() {
        assert_eq!(stmt("Mary got the football there.", &[]), LogicalForm::Grab { actor: s("mary"), object: s("football") });
        assert_eq!(stmt("Mary picked up the milk.", &[]), LogicalForm::Grab { actor: s("mary"), object: s("milk") });
        assert_eq!(stmt("Mary put down the milk.", &[]), LogicalForm::Drop { actor: s("mary"), object: s("milk") });
        assert_eq!(stmt("Mary left the football.", &[]), LogicalForm::Drop { actor: s("mary"), object: s("football") });
        assert_eq!(
            stmt("Jeff gave the milk to Bill.", &[]),
            LogicalForm::Give { source: s("jeff"), object: s("milk"), target: s("bill") }
        );
    }

    #[test]
    fn properties_and_positions() {
        assert_eq!(stmt("Sumit is bored.", &[]), LogicalForm::Motivation { actor: s("sumit"), state: s("bored") });
        assert_eq!(stmt("Lily is green.", &[]), LogicalForm::HasProp { subject: s("lily"), property: s("green") });
        assert_eq!(stmt("Brian is a lion.", &[]), LogicalForm::IsA { instance: s("brian"), category: s("lion") });
        assert_eq!(
            stmt("The blue square is to the left of the triangle.", &[]),
            LogicalForm::PosRel { subject: s("blue_square"), side: Side::Left, reference: s("triangle") }
        );
        assert_eq!(
            stmt("Bill is either in the school or the office.", &[]),
            LogicalForm::MoveEither { actor: s("bill"), first: s("school"), second: s("office") }
        );
    }

    #[test]
    fn questions() {
        assert_eq!(
            q("Where was the football before the bedroom?"),
            QuestionForm::WhereBefore { item: s("football"), location: s("bedroom") }
        );
        assert_eq!(q("What is the garden east of?"), QuestionForm::WhatDirRev { subject: s("garden"), dir: Compass::East });
        assert_eq!(q("What is north of the kitchen?"), QuestionForm::WhatDirOf { dir: Compass::North, reference: s("kitchen") });
        assert_eq!(
            q("Is the pink rectangle to the right of the blue square?"),
            QuestionForm::PosQ { subject: s("pink_rectangle"), side: Side::Right, reference: s("blue_square") }
        );
        assert_eq!(q("Where is Mary?"), QuestionForm::WhereActor { actor: s("mary") });
        assert_eq!(q("Where is the football?"), QuestionForm::WhereObject { object: s("football") });
        assert_eq!(q("Who did Jeff give the milk to?"), QuestionForm::WhoGaveTo { giver: s("jeff"), object: s("milk") });
        assert_eq!(q("Who received the milk?"), QuestionForm::WhoReceived { object: s("milk") });
        assert_eq!(q("What did Jeff give to Bill?"), QuestionForm::WhatGiven { giver: s("jeff"), receiver: s("bill") });
        assert_eq!(q("Who gave the milk to Bill?"), QuestionForm::WhoGave { object: s("milk"), receiver: Some(s("bill")) });
        assert_eq!(q("Who gave the milk?"), QuestionForm::WhoGave { object: s("milk"), receiver: None });
        assert_eq!(q("How many objects is Mary carrying?"), QuestionForm::HowMany { actor: s("mary") });
        assert_eq!(q("What is Mary carrying?"), QuestionForm::WhatCarrying { actor: s("mary") });
        assert_eq!(q("What is Jessica afraid of?"), QuestionForm::WhatAfraid { instance: s("jessica") });
        assert_eq!(q("What color is Brian?"), QuestionForm::WhatColor { instance: s("brian") });
        assert_eq!(
            q("Does the chocolate fit in the box?"),
            QuestionForm::ContainsQ { containee: s("chocolate"), container: s("box"), phrasing: Phrasing::Fits }
        );
        assert_eq!(
            q("Is the box bigger than the chocolate?"),
            QuestionForm::ContainsQ { containee: s("chocolate"), container: s("box"), phrasing: Phrasing::Bigger }
        );
        assert_eq!(q("Where will Sumit go?"), QuestionForm::WhereWillGo { actor: s("sumit") });
        assert_eq!(
            q("Why did Yann go to the kitchen?"),
            QuestionForm::WhyAction { actor: s("yann"), deed: Deed::Go(s("kitchen")) }
        );
        assert_eq!(
            q("Why did Sumit get the football?"),
            QuestionForm::WhyAction { actor: s("sumit"), deed: Deed::Get(s("football")) }
        );
        assert_eq!(
            q("How do you go from the garden to the bedroom?"),
            QuestionForm::PathQ { from: s("garden"), to: s("bedroom") }
        );
        assert_eq!(q("Is Bill in the office?"), QuestionForm::IsIn { actor: s("bill"), location: s("office") });
        assert_eq!(q("Where was Bill before the park?"), QuestionForm::WhereBefore { item: s("bill"), location: s("park") });
    }

    #[test]
    fn rejects_off_grammar() {
        let lex = GrammarLexicon::default();
        let ctx = ParseContext::default();
        for line in ["Colorless green ideas sleep furiously.", "Mary moved the bathroom.", "Mary and went to the park."] {
            assert!(matches!(parse_statement(&tokenize(line), 1, &ctx, &lex), Err(ParseError::UnparseableLine(_))), "{line}");
        }
        assert!(parse_question(&tokenize("Why is the sky blue?"), 1, &lex).is_err());
    }

    #[test]
    fn context_tracks_previous_statement() {
        let mut ctx = ParseContext::default();
        ctx.observe(&LogicalForm::Move { actors: vec![s("mary"), s("daniel")], to: s("bathroom") });
        assert_eq!(ctx.previous_actors, [s("mary"), s("daniel")]);
        ctx.observe(&LogicalForm::IsA { instance: s("x"), category: s("y") });
        assert!(ctx.previous_actors.is_empty());
    }
}
