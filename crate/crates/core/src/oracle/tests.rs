use super::*;
use crate::io::parse_babi;

const DOUBLE_DISJUNCTION: &str = "\
1 Bill grabbed the milk.
2 Bill put down the milk.
3 John is either in the bedroom or the kitchen.
4 Fred journeyed to the kitchen.
5 John grabbed the football.
6 Following that he put down the football.
7 Bill picked up the milk.
8 Following that he went to the bedroom.
9 Bill is in the office.
10 Bill is in the cinema.
11 Bill passed the milk to Julie.
12 Julie handed the milk to Bill.
13 Jeff is not in the school.
14 John took the football.
15 Fred and Jeff moved to the school.
16 Afterwards they journeyed to the bathroom.
17 Bill handed the milk to Julie.
18 John dropped the football.
19 Daniel is either in the school or the bedroom.
20 Daniel took the football.
21 Is John in the bedroom?\tyes\t3 18 19 20
";

#[test]
fn double_disjunction_passage() {
    let v = Vocabulary::default();
    let file = parse_babi(DOUBLE_DISJUNCTION).unwrap();
    let story = &file.stories[0];
    let q = story.questions().next().unwrap();
    assert_eq!(answer(story, q.line, q.text, None, &v).unwrap(), "yes");
    let keep: BTreeSet<usize> = [3, 18, 19, 20].into();
    assert_eq!(
        answer(story, q.line, q.text, Some(&keep), &v).unwrap(),
        "yes"
    );
    assert!(validate_file(&file, &v, false).passed());
    // without the second disjunction the answer is open again
    let keep: BTreeSet<usize> = [3, 18, 20].into();
    assert_eq!(
        answer(story, q.line, q.text, Some(&keep), &v).unwrap(),
        "maybe"
    );
}

#[test]
fn parses_conj_and_coref() {
    let v = Vocabulary::default();
    let file = parse_babi("1 John took the football.\n2 Following that, he put down the football.\n3 Jeff and Fred went to the cinema.\n").unwrap();
    let p = parse_story(&file.stories[0], &v).unwrap();
    assert_eq!(p.lines[1].statements[0].subject(), v.actor("John").unwrap());
    assert_eq!(
        p.lines[1].construct,
        Some(crate::concepts::Construct::Coref)
    );
    assert_eq!(p.lines[2].statements.len(), 2);
}

#[test]
fn pronoun_needs_its_antecedent() {
    let v = Vocabulary::default();
    let file = parse_babi("1 Mary went to the park.\n2 Following that, she went to the office.\n3 Where is Mary?\toffice\t2\n").unwrap();
    let report = validate_file(&file, &v, false);
    assert_eq!(report.count(FailureKind::Insufficient), 1);
    let file =
        parse_babi("1 Mary went to the park.\n2 Following that, he went to the office.\n").unwrap();
    assert!(parse_story(&file.stories[0], &v).is_err());
}

#[test]
fn reports_disagreement_and_unanswerable() {
    let v = Vocabulary::default();
    let file = parse_babi(
        "1 Mary went to the park.\n2 Where is Mary?\toffice\t1\n3 Where is John?\tpark\t1\n",
    )
    .unwrap();
    let report = validate_file(&file, &v, false);
    assert_eq!(report.questions, 2);
    assert_eq!(report.count(FailureKind::Disagreement), 1);
    assert_eq!(report.count(FailureKind::Parse), 1);
    assert_eq!(validate_file(&file, &v, true).failures.len(), 1);
}

#[test]
fn paired_forms_agree() {
    let v = Vocabulary::default();
    let file = parse_babi("1 Sandra journeyed to the garden.\n2 Is Sandra at the garden?\tyes\t1\n3 Where is Sandra?\tgarden\t1\n").unwrap();
    assert!(validate_file(&file, &v, false).passed());
}

#[test]
fn give_link_places_receiver() {
    let v = Vocabulary::default();
    let file = parse_babi(
        "1 Bill picked up the milk.\n2 Bill went to the cinema.\n3 Bill handed Julie the milk.\n4 Where is Julie?\tcinema\t2 3\n5 Who received the milk?\tJulie\t3\n",
    )
    .unwrap();
    let report = validate_file(&file, &v, false);
    assert!(report.passed(), "{report}");
}
