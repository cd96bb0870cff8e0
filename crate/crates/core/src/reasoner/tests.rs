use super::*;
use crate::relation::Compass::{East as E, North as N};

/// Feeds numbered lines; returns the answer (or error text) of each question.
fn run(task: u8, lines: &[&str]) -> Vec<std::result::Result<Inference, ReasonError>> {
    let reasoner = Reasoner::with_defaults();
    run_with(&reasoner, task, lines)
}

fn run_with(reasoner: &Reasoner, task: u8, lines: &[&str]) -> Vec<std::result::Result<Inference, ReasonError>> {
    let mut s = reasoner.session(task, 0).unwrap();
    let mut out = Vec::new();
    for (i, line) in lines.iter().enumerate() {
        match s.feed(i + 1, line) {
            Ok(Fed::Answered(_, inf)) => out.push(Ok(inf)),
            Ok(Fed::Statement(_)) => {}
            Err(e) if line.ends_with('?') => out.push(Err(e)),
            Err(e) => panic!("line {}: {e}", i + 1),
        }
    }
    out
}

fn ent(s: &str) -> Answer {
    Answer::Entity(s.to_string())
}

fn yn(t: Ternary) -> Answer {
    Answer::YesNoMaybe(t)
}

fn answers(r: &[std::result::Result<Inference, ReasonError>]) -> Vec<Answer> {
    r.iter().map(|x| x.as_ref().expect("answered").answer.clone()).collect()
}

fn clues(r: &std::result::Result<Inference, ReasonError>) -> Vec<usize> {
    let mut c = r.as_ref().unwrap().clue_times();
    c.sort();
    c
}

#[test]
fn single_supporting_fact() {
    let r = run(1, &[
        "Mary moved to the bathroom.",
        "John went to the hallway.",
        "Where is Mary?",
        "Daniel went back to the hallway.",
        "Sandra moved to the garden.",
        "Where is Daniel?",
        "Where is Fred?",
    ]);
    assert_eq!(answers(&r[..2]), [ent("bathroom"), ent("hallway")]);
    assert_eq!(clues(&r[0]), [1]);
    assert_eq!(clues(&r[1]), [4]);
    assert!(matches!(r[2], Err(ReasonError::NoMatch(_))));
}

#[test]
fn two_supporting_facts() {
    let r = run(2, &[
        "Mary went to the kitchen.",
        "Sandra journeyed to the office.",
        "Mary got the football there.",
        "Mary travelled to the garden.",
        "Where is the football?",
        "John travelled to the office.",
        "Sandra moved to the garden.",
        "Where is the football?",
        "Mary dropped the football.",
        "Mary journeyed to the kitchen.",
        "Where is the football?",
    ]);
    assert_eq!(answers(&r), [ent("garden"), ent("garden"), ent("garden")]);
    assert_eq!(clues(&r[0]), [3, 4]);
    assert_eq!(clues(&r[1]), [3, 4]);
    assert_eq!(clues(&r[2]), [4, 9]);
}

#[test]
fn holder_without_location_is_no_match() {
    let r = run(2, &["John got the milk there.", "Where is the milk?"]);
    assert!(matches!(r[0], Err(ReasonError::NoMatch(_))));
}

const SAMPLE_C3: &[&str] = &[
    "Sandra went back to the hallway.",
    "Daniel took the apple.",
    "John travelled to the kitchen.",
    "Daniel travelled to the bedroom.",
    "Daniel got the football there.",
    "Daniel went to the hallway.",
    "Where was the apple before the hallway?",
    "Mary went back to the bedroom.",
    "Daniel discarded the football.",
    "Daniel got the football.",
    "Mary went to the garden.",
    "Daniel travelled to the office.",
    "Daniel went back to the bedroom.",
    "Where was the football before the bedroom?",
    "Daniel went back to the hallway.",
    "Mary went back to the bathroom.",
    "Daniel dropped the apple.",
    "Sandra journeyed to the kitchen.",
    "Where was the apple before the office?",
];

#[test]
fn three_supporting_facts() {
    let r = run(3, SAMPLE_C3);
    assert_eq!(answers(&r), [ent("bedroom"), ent("office"), ent("hallway")]);
    assert_eq!(clues(&r[0]), [2, 4, 6]);
    assert_eq!(clues(&r[1]), [10, 12, 13]);
    assert_eq!(clues(&r[2]), [6, 12, 17]);
}

#[test]
fn before_the_start_is_not_on_trajectory() {
    let r = run(3, &["Daniel took the apple.", "Daniel went to the hallway.", "Where was the apple before the nowhere?"]);
    assert!(matches!(r[0], Err(ReasonError::NotOnTrajectory { .. })));
    let r = run(3, &["Daniel took the apple.", "Daniel went to the hallway.", "Where was the apple before the garden?"]);
    assert!(matches!(r[0], Err(ReasonError::NotOnTrajectory { .. })));
}

#[test]
fn two_argument_relations() {
    let r = run(4, &["The office is north of the kitchen.", "The garden is south of the kitchen.", "What is north of the kitchen?"]);
    assert_eq!(answers(&r), [ent("office")]);
    let r = run(4, &[
        "The kitchen is west of the garden.",
        "The hallway is west of the kitchen.",
        "What is the garden east of?",
        "What is west of the kitchen?",
        "What is the kitchen west of?",
        "What is east of the kitchen?",
    ]);
    assert_eq!(answers(&r), [ent("kitchen"), ent("hallway"), ent("garden"), ent("garden")]);
    assert_eq!(clues(&r[0]), [1]);
}

const SAMPLE_C5: &[&str] = &[
    "Jeff took the milk there.",
    "Jeff gave the milk to Bill.",
    "Who did Jeff give the milk to?",
    "Daniel travelled to the office.",
    "Daniel journeyed to the hallway.",
    "Who received the milk?",
    "Bill went to the kitchen.",
    "Fred grabbed the apple there.",
    "What did Jeff give to Bill?",
];

#[test]
fn three_argument_relations() {
    let r = run(5, SAMPLE_C5);
    assert_eq!(answers(&r), [ent("bill"), ent("bill"), ent("milk")]);
    for x in &r {
        assert_eq!(clues(x), [2]);
    }
    let reasoner = Reasoner::with_defaults();
    let mut s = reasoner.session(5, 0).unwrap();
    for (i, l) in SAMPLE_C5.iter().enumerate().filter(|(_, l)| !l.ends_with('?')) {
        s.feed(i + 1, l).unwrap();
    }
    assert_eq!(s.ownership_trajectory("milk", 10).unwrap(), ["nobody", "jeff", "bill"]);
    assert!(s.ownership_trajectory("pajamas", 10).unwrap().is_empty());
}

#[test]
fn most_recent_transfer_wins() {
    let r = run(5, &[
        "Jeff took the milk there.",
        "Jeff gave the milk to Bill.",
        "Bill handed the milk to Jeff.",
        "Who received the milk?",
        "Who gave the milk?",
        "Who gave the milk to Bill?",
    ]);
    assert_eq!(answers(&r), [ent("jeff"), ent("bill"), ent("jeff")]);
}

#[test]
fn yes_no_questions() {
    let r = run(6, &[
        "Daniel went back to the hallway.",
        "John got the apple there.",
        "Is Daniel in the hallway?",
        "John dropped the apple.",
        "Mary got the apple there.",
        "Is Daniel in the hallway?",
        "Daniel moved to the bedroom.",
        "Sandra travelled to the hallway.",
        "Is Daniel in the hallway?",
    ]);
    assert_eq!(answers(&r), [yn(Ternary::Yes), yn(Ternary::Yes), yn(Ternary::No)]);
    assert_eq!(clues(&r[2]), [7]);
}

#[test]
fn counting() {
    let r = run(7, &[
        "Mary took the apple there.",
        "John travelled to the office.",
        "How many objects is Mary carrying?",
        "Mary travelled to the bathroom.",
        "Sandra went back to the bedroom.",
        "How many objects is Mary carrying?",
        "Mary got the football there.",
        "Mary went to the office.",
        "How many objects is Mary carrying?",
        "Mary passed the apple to John.",
        "Mary left the football.",
        "How many objects is Mary carrying?",
        "How many objects is John carrying?",
    ]);
    assert_eq!(answers(&r), [Answer::Count(1), Answer::Count(1), Answer::Count(2), Answer::Count(0), Answer::Count(1)]);
}

#[test]
fn lists() {
    let r = run(8, &[
        "Mary took the milk there.",
        "Mary went to the office.",
        "What is Mary carrying?",
        "Mary took the apple there.",
        "Sandra journeyed to the bedroom.",
        "What is Mary carrying?",
        "Mary put down the milk.",
        "Mary discarded the apple.",
        "What is Mary carrying?",
    ]);
    let list = |v: &[&str]| Answer::EntityList(v.iter().map(|s| s.to_string()).collect());
    assert_eq!(answers(&r), [list(&["milk"]), list(&["milk", "apple"]), list(&[])]);
}

#[test]
fn simple_negation() {
    let r = run(9, &[
        "Sandra travelled to the garden.",
        "Sandra is no longer in the garden.",
        "Is Sandra in the garden?",
        "Sandra is in the garden.",
        "Sandra journeyed to the hallway.",
        "Is Sandra in the hallway?",
    ]);
    assert_eq!(answers(&r), [yn(Ternary::No), yn(Ternary::Yes)]);
    assert_eq!(clues(&r[0]), [2]);
}

#[test]
fn indefinite_knowledge() {
    let r = run(10, &[
        "Julie travelled to the kitchen.",
        "Bill is either in the school or the office.",
        "Is Bill in the office?",
        "Bill went back to the bedroom.",
        "Bill travelled to the kitchen.",
        "Is Bill in the kitchen?",
        "Is Julie in the school?",
        "Is Bill in the park?",
    ]);
    assert_eq!(answers(&r), [yn(Ternary::Maybe), yn(Ternary::Yes), yn(Ternary::No), yn(Ternary::No)]);
    let r = run(10, &["Bill is either in the school or the office.", "Is Bill in the park?"]);
    assert_eq!(answers(&r), [yn(Ternary::No)]);
}

#[test]
fn coreference_and_conjunction() {
    let r = run(11, &[
        "Mary went back to the bathroom.",
        "After that she went to the bedroom.",
        "Where is Mary?",
        "Daniel moved to the office.",
        "Afterwards he moved to the hallway.",
        "Where is Daniel?",
    ]);
    assert_eq!(answers(&r), [ent("bedroom"), ent("hallway")]);
    let r = run(12, &[
        "Daniel and Sandra went back to the kitchen.",
        "Daniel and John went back to the hallway.",
        "Where is Daniel?",
        "Daniel and John moved to the bathroom.",
        "Sandra and Mary travelled to the office.",
        "Where is Daniel?",
        "Where is Sandra?",
    ]);
    assert_eq!(answers(&r), [ent("hallway"), ent("bathroom"), ent("office")]);
    assert_eq!(clues(&r[0]), [2]);
    let r = run(13, &[
        "Mary and Daniel went to the bathroom.",
        "Then they journeyed to the hallway.",
        "Where is Daniel?",
        "Sandra and John moved to the kitchen.",
        "Then they moved to the hallway.",
        "Where is John?",
    ]);
    assert_eq!(answers(&r), [ent("hallway"), ent("hallway")]);
}

#[test]
fn time_manipulation() {
    let r = run(14, &[
        "Yesterday Julie went back to the park.",
        "Julie went to the bedroom this morning.",
        "Bill journeyed to the cinema yesterday.",
        "This morning Bill went back to the park.",
        "Where was Bill before the park?",
        "This evening Julie went to the school.",
        "This afternoon Julie went back to the park.",
        "Where was Julie before the bedroom?",
        "Where was Julie before the school?",
    ]);
    assert_eq!(answers(&r), [ent("cinema"), ent("park"), ent("park")]);
    assert_eq!(clues(&r[0]), [3, 4]);
    assert_eq!(clues(&r[1]), [1, 2]);
}

#[test]
fn basic_deduction() {
    let r = run(15, &[
        "Mice are afraid of cats.",
        "Emily is a mouse.",
        "Wolves are afraid of mice.",
        "Cats are afraid of sheep.",
        "Winona is a cat.",
        "Sheep are afraid of wolves.",
        "Jessica is a mouse.",
        "Gertrude is a sheep.",
        "What is Jessica afraid of?",
        "What is Emily afraid of?",
        "What is Jessica afraid of?",
        "What is Winona afraid of?",
    ]);
    assert_eq!(answers(&r), [ent("cat"), ent("cat"), ent("cat"), ent("sheep")]);
    assert_eq!(clues(&r[0]), [1, 7]);
    assert_eq!(clues(&r[3]), [4, 5]);
}

#[test]
fn basic_induction_prefers_most_recent_evidence() {
    let r = run(16, &[
        "Bernhard is a lion.",
        "Julius is a lion.",
        "Lily is a lion.",
        "Bernhard is green.",
        "Lily is green.",
        "Brian is a lion.",
        "Greg is a swan.",
        "Greg is gray.",
        "Julius is yellow.",
        "What color is Brian?",
    ]);
    // Gold is green; the most-recent member evidence is Julius.
    assert_eq!(answers(&r), [ent("yellow")]);
    let r = run(16, &["Lily is a swan.", "Lily is white.", "Greg is a swan.", "What color is Greg?", "What color is Lily?"]);
    assert_eq!(answers(&r), [ent("white"), ent("white")]);
    assert_eq!(clues(&r[0]), [1, 2, 3]);
    let r = run(16, &["Greg is a swan.", "What color is Greg?"]);
    assert!(matches!(r[0], Err(ReasonError::NoEvidence(_))));
}

#[test]
fn positional_reasoning() {
    let r = run(17, &[
        "The triangle is above the pink rectangle.",
        "The blue square is to the left of the triangle.",
        "Is the pink rectangle to the right of the blue square?",
        "Is the pink rectangle to the left of the blue square?",
        "Is the triangle above the pink rectangle?",
        "Is the pink rectangle below the triangle?",
        "Is the pink rectangle above the triangle?",
    ]);
    assert_eq!(answers(&r), [yn(Ternary::Yes), yn(Ternary::No), yn(Ternary::Yes), yn(Ternary::Yes), yn(Ternary::No)]);
    let r = run(17, &[
        "The red sphere is below the yellow square.",
        "The red sphere is above the blue square.",
        "Is the blue square below the yellow square?",
        "Is the yellow square below the blue square?",
    ]);
    assert_eq!(answers(&r), [yn(Ternary::Yes), yn(Ternary::No)]);
}

#[test]
fn positional_block_identity() {
    let reasoner = Reasoner::with_defaults();
    let mut s = reasoner.session(17, 0).unwrap();
    s.feed(1, "The triangle is above the pink rectangle.").unwrap();
    s.feed(2, "The blue square is to the left of the triangle.").unwrap();
    s.positional_assign(3);
    let get = |s: &StorySession, l: &str| s.state.pos_table[&s.state.registry.id_of(l).unwrap()].clone();
    let (pink, tri, blue) = (get(&s, "pink_rectangle"), get(&s, "triangle"), get(&s, "blue_square"));
    let pos = &s.state.banks.positions;
    use crate::relation::Side;
    assert!((tri.block(Side::Above) - pos.project(Side::Above, pink.block(Side::Above))).norm() < 1e-12);
    assert!((blue.block(Side::Above) - tri.block(Side::Above)).norm() < 1e-12);
    assert!((blue.block(Side::Left) - pos.project(Side::Left, tri.block(Side::Left))).norm() < 1e-12);
    for side in [Side::Below, Side::Right] {
        assert!((blue.block(side) - pink.block(side)).norm() < 1e-12);
    }
}

#[test]
fn size_reasoning() {
    let r = run(18, &[
        "The suitcase is bigger than the container.",
        "The container fits inside the box.",
        "The chest is bigger than the chocolate.",
        "The suitcase fits inside the box.",
        "The chest fits inside the box.",
        "Does the chocolate fit in the box?",
        "Does the chocolate fit in the box?",
        "Does the box fit in the container?",
        "Is the box bigger than the chocolate?",
        "Does the box fit in the chocolate?",
    ]);
    assert_eq!(answers(&r), [Ternary::Yes, Ternary::Yes, Ternary::No, Ternary::Yes, Ternary::No].map(yn));
    assert_eq!(clues(&r[0]), [3, 5]);
    let r = run(18, &["The box is bigger than the chocolate.", "Does the chocolate fit in the box?", "Does the suitcase fit in the box?"]);
    assert_eq!(answers(&r[..1]), [yn(Ternary::Yes)]);
    assert!(matches!(r[1], Err(ReasonError::NoMatch(_))));
    let r = run(18, &["The box is bigger than the chocolate.", "The chest is bigger than the pen.", "Does the pen fit in the box?"]);
    assert_eq!(r[0], Err(ReasonError::Undecidable));
}

const SAMPLE_C19: &[&str] = &[
    "The bedroom is south of the hallway.",
    "The bathroom is east of the office.",
    "The kitchen is west of the garden.",
    "The garden is south of the office.",
    "The office is south of the bedroom.",
    "How do you go from the garden to the bedroom?",
    "How do you go from the kitchen to the bathroom?",
    "How do you go from the hallway to the bedroom?",
    "How do you go from the kitchen to the hallway?",
];

#[test]
fn path_finding() {
    let r = run(19, SAMPLE_C19);
    assert_eq!(r[0].as_ref().unwrap().answer, Answer::Path(vec![N, N]));
    assert!(matches!(r[1], Err(ReasonError::NoPathWithinBound { max_len: 2 })));
    assert_eq!(r[2].as_ref().unwrap().answer, Answer::Path(vec![Compass::South]));
    assert!(r[3].is_err());
    let settings = Settings { max_path_len: 4, ..Settings::default() };
    let long = Reasoner::new(settings, Arc::new(GrammarLexicon::default())).unwrap();
    let r = run_with(&long, 19, SAMPLE_C19);
    assert_eq!(r[1].as_ref().unwrap().answer, Answer::Path(vec![E, N, E]));
    assert_eq!(r[3].as_ref().unwrap().answer, Answer::Path(vec![E, N, N, N]));
}

#[test]
fn table_five_running_order() {
    let reasoner = Reasoner::with_defaults();
    let mut s = reasoner.session(19, 0).unwrap();
    for (i, l) in SAMPLE_C19[..5].iter().enumerate() {
        s.feed(i + 1, l).unwrap();
    }
    s.solve_locations(6);
    assert_eq!(s.state.loc_table.len(), 6);
    let v = |s: &StorySession, l: &str| s.state.loc_table[&s.state.registry.id_of(l).unwrap()].clone();
    let d = &s.state.banks.directions;
    assert!((v(&s, "bedroom") - d.matrix(Compass::South) * v(&s, "hallway")).norm() < 1e-12);
    assert!((v(&s, "kitchen") - d.matrix(Compass::West) * v(&s, "garden")).norm() < 1e-12);
}

#[test]
fn disconnected_components_are_reseeded() {
    let r = run(19, &[
        "The bedroom is south of the hallway.",
        "The garden is east of the office.",
        "How do you go from the office to the garden?",
        "How do you go from the office to the hallway?",
    ]);
    assert_eq!(r[0].as_ref().unwrap().answer, Answer::Path(vec![E]));
    assert!(matches!(r[1], Err(ReasonError::NoPathWithinBound { .. })));
}

#[test]
fn sequences_skip_immediate_inverses() {
    let s = direction_sequences(2);
    assert_eq!(s.len(), 4 + 12);
    assert_eq!(s[0], [N]);
    assert!(!s.contains(&vec![N, Compass::South]));
    assert_eq!(direction_sequences(3).len(), 4 + 12 + 36);
}

#[test]
fn motivations() {
    let story = [
        "Sumit is bored.",
        "Where will Sumit go?",
        "Yann is hungry.",
        "Where will Yann go?",
        "Yann went back to the kitchen.",
        "Why did Yann go to the kitchen?",
        "Sumit journeyed to the garden.",
        "Why did Sumit go to the garden?",
        "Yann picked up the apple there.",
        "Why did Yann get the apple?",
        "Sumit grabbed the football there.",
        "Why did Sumit get the football?",
    ];
    // Full-story rules first, as in the two-pass evaluation.
    let mut reasoner = Reasoner::with_defaults();
    let mut s = reasoner.session(20, 0).unwrap();
    for (i, l) in story.iter().enumerate().filter(|(_, l)| !l.ends_with('?')) {
        s.feed(i + 1, l).unwrap();
    }
    let rules = s.induce_rules().unwrap();
    assert_eq!(rules.location_for("bored"), Some("garden"));
    assert_eq!(rules.object_for("hungry"), Some("apple"));
    reasoner.set_rules(rules);
    let r = run_with(&reasoner, 20, &story);
    let m = |s: &str| Answer::Motivation(s.to_string());
    assert_eq!(answers(&r), [ent("garden"), ent("kitchen"), m("hungry"), m("bored"), m("hungry"), m("bored")]);
    assert_eq!(clues(&r[0]), [1]);
    // Without prior rules the first question has nothing to go on.
    let r = run(20, &story);
    assert!(matches!(r[0], Err(ReasonError::NoRule(_))));
    assert_eq!(r[2].as_ref().unwrap().answer, m("hungry"));
}

#[test]
fn sampled_mode_answers_match() {
    let settings = Settings { mode: VectorMode::Sampled, dim: 256, ..Settings::default() };
    let reasoner = Reasoner::new(settings, Arc::new(GrammarLexicon::default())).unwrap();
    let r = run_with(&reasoner, 3, SAMPLE_C3);
    assert_eq!(answers(&r), [ent("bedroom"), ent("office"), ent("hallway")]);
    let r = run_with(&reasoner, 5, SAMPLE_C5);
    assert_eq!(answers(&r), [ent("bill"), ent("bill"), ent("milk")]);
}
