//! The bAbI text format: numbered sentence lines, and question lines of
//! the form `N QUESTION<TAB>ANSWER<TAB>SUPPORTING IDS`. A story starts
//! wherever the numbering restarts at 1.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {reason}")]
pub struct FormatError {
    /// 1-based line in the file.
    pub line: usize,
    pub reason: String,
}

#[derive(Debug, thiserror::Error)]
pub enum BabiError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Format(#[from] FormatError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum BabiLine {
    Sentence(String),
    /// `text` is kept verbatim, including any trailing space before the tab.
    /// `support` holds line numbers within the story.
    Question {
        text: String,
        answer: String,
        support: Vec<usize>,
    },
}

impl BabiLine {
    pub fn is_sentence(&self) -> bool {
        matches!(self, BabiLine::Sentence(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct BabiStory {
    pub lines: Vec<BabiLine>,
}

/// A question as found in a story, with its 1-based line number.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuestionRef<'a> {
    pub line: usize,
    pub text: &'a str,
    pub answer: &'a str,
    pub support: &'a [usize],
}

impl BabiStory {
    pub fn line(&self, number: usize) -> Option<&BabiLine> {
        number.checked_sub(1).and_then(|i| self.lines.get(i))
    }

    pub fn questions(&self) -> impl Iterator<Item = QuestionRef<'_>> {
        self.lines.iter().enumerate().filter_map(|(i, l)| match l {
            BabiLine::Question {
                text,
                answer,
                support,
            } => Some(QuestionRef {
                line: i + 1,
                text,
                answer,
                support,
            }),
            BabiLine::Sentence(_) => None,
        })
    }

    /// Sentence lines before line `upto`, as `(number, text)`.
    pub fn sentences_before(&self, upto: usize) -> impl Iterator<Item = (usize, &str)> {
        self.lines
            .iter()
            .take(upto.saturating_sub(1))
            .enumerate()
            .filter_map(|(i, l)| match l {
                BabiLine::Sentence(s) => Some((i + 1, s.as_str())),
                BabiLine::Question { .. } => None,
            })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct BabiFile {
    pub stories: Vec<BabiStory>,
}

impl BabiFile {
    pub fn question_count(&self) -> usize {
        self.stories.iter().map(|s| s.questions().count()).sum()
    }

    /// Every question with its story, in file order.
    pub fn questions(&self) -> impl Iterator<Item = (&BabiStory, QuestionRef<'_>)> {
        self.stories
            .iter()
            .flat_map(|s| s.questions().map(move |q| (s, q)))
    }
}

impl BabiStory {
    /// One story per question, each holding only the sentences before it.
    pub fn split_questions(&self) -> Vec<BabiStory> {
        self.questions()
            .map(|q| {
                let kept: Vec<(usize, &str)> = self.sentences_before(q.line).collect();
                let renumber =
                    |l: usize| kept.iter().position(|(n, _)| *n == l).map_or(0, |k| k + 1);
                let mut lines: Vec<BabiLine> = kept
                    .iter()
                    .map(|(_, s)| BabiLine::Sentence(s.to_string()))
                    .collect();
                lines.push(BabiLine::Question {
                    text: q.text.to_string(),
                    answer: q.answer.to_string(),
                    support: q.support.iter().map(|&l| renumber(l)).collect(),
                });
                BabiStory { lines }
            })
            .collect()
    }
}

impl BabiFile {
    /// The file with one question per story.
    pub fn flattened(&self) -> BabiFile {
        BabiFile {
            stories: self
                .stories
                .iter()
                .flat_map(|s| s.split_questions())
                .collect(),
        }
    }
}

pub fn parse_babi(text: &str) -> Result<BabiFile, FormatError> {
    let mut file = BabiFile::default();
    let mut current: Option<BabiStory> = None;
    for (i, raw) in text.lines().enumerate() {
        let at = i + 1;
        let err = |reason: String| FormatError { line: at, reason };
        let (num, rest) = raw
            .split_once(' ')
            .ok_or_else(|| err("expected a line number followed by a space".into()))?;
        let num: usize = num
            .parse()
            .map_err(|_| err(format!("bad line number {num:?}")))?;
        if num == 1 {
            if let Some(s) = current.take() {
                file.stories.push(s);
            }
            current = Some(BabiStory::default());
        }
        let story = current
            .as_mut()
            .ok_or_else(|| err("first line of a story must be numbered 1".into()))?;
        if num != story.lines.len() + 1 {
            return Err(err(format!(
                "expected line number {}, found {num}",
                story.lines.len() + 1
            )));
        }
        let fields: Vec<&str> = rest.split('\t').collect();
        let line = match fields.as_slice() {
            [sentence] => {
                if sentence.trim().is_empty() {
                    return Err(err("empty sentence".into()));
                }
                BabiLine::Sentence(sentence.to_string())
            }
            [question, answer, ids] => {
                if answer.is_empty() {
                    return Err(err("empty answer".into()));
                }
                let mut support = Vec::new();
                for id in ids.split_whitespace() {
                    let id: usize = id
                        .parse()
                        .map_err(|_| err(format!("bad supporting id {id:?}")))?;
                    if id == 0 || id >= num {
                        return Err(err(format!(
                            "supporting id {id} does not precede line {num}"
                        )));
                    }
                    if !story.lines[id - 1].is_sentence() {
                        return Err(err(format!("supporting id {id} is not a sentence")));
                    }
                    support.push(id);
                }
                BabiLine::Question {
                    text: question.to_string(),
                    answer: answer.to_string(),
                    support,
                }
            }
            other => {
                return Err(err(format!(
                    "expected 1 or 3 tab-separated fields, found {}",
                    other.len()
                )))
            }
        };
        story.lines.push(line);
    }
    if let Some(s) = current {
        file.stories.push(s);
    }
    Ok(file)
}

pub fn to_babi_string(file: &BabiFile) -> String {
    let mut out = String::new();
    for story in &file.stories {
        for (i, line) in story.lines.iter().enumerate() {
            let _ = match line {
                BabiLine::Sentence(s) => writeln!(out, "{} {s}", i + 1),
                BabiLine::Question {
                    text,
                    answer,
                    support,
                } => {
                    let ids: Vec<String> = support.iter().map(|n| n.to_string()).collect();
                    writeln!(out, "{} {text}\t{answer}\t{}", i + 1, ids.join(" "))
                }
            };
        }
    }
    out
}

pub fn read_babi(path: impl AsRef<Path>) -> Result<BabiFile, BabiError> {
    let text = fs::read_to_string(path)?;
    Ok(parse_babi(&text)?)
}

pub fn write_babi(file: &BabiFile, path: impl AsRef<Path>) -> std::io::Result<()> {
    fs::write(path, to_babi_string(file))
}

#[cfg(test)]
mod tests {
    use super::*;

    const OFFICIAL: &str = "1 Mary moved to the bathroom.\n2 John went to the hallway.\n3 Where is Mary? \tbathroom\t1\n4 Daniel went back to the hallway.\n5 Where is Daniel? \thallway\t4\n1 Sandra travelled to the office.\n2 Where is Sandra? \toffice\t1\n";

    #[test]
    fn flattening_gives_one_question_per_story() {
        let file = parse_babi(OFFICIAL).unwrap();
        let flat = file.flattened();
        assert_eq!(flat.stories.len(), 3);
        assert_eq!(
            to_babi_string(&flat),
            "1 Mary moved to the bathroom.\n2 John went to the hallway.\n3 Where is Mary? \tbathroom\t1\n\
             1 Mary moved to the bathroom.\n2 John went to the hallway.\n3 Daniel went back to the hallway.\n4 Where is Daniel? \thallway\t3\n\
             1 Sandra travelled to the office.\n2 Where is Sandra? \toffice\t1\n"
        );
        assert_eq!(flat.flattened(), flat);
    }

    #[test]
    fn official_layout() {
        let f = parse_babi(OFFICIAL).unwrap();
        assert_eq!(f.stories.len(), 2);
        assert_eq!(f.question_count(), 3);
        let q: Vec<_> = f.stories[0].questions().collect();
        assert_eq!(q[1].line, 5);
        assert_eq!(q[1].text, "Where is Daniel? ");
        assert_eq!(q[1].support, &[4]);
        assert_eq!(to_babi_string(&f), OFFICIAL);
    }

    #[test]
    fn empty_file() {
        let f = parse_babi("").unwrap();
        assert!(f.stories.is_empty());
        assert_eq!(to_babi_string(&f), "");
    }

    #[test]
    fn malformed() {
        let cases = [
            "x Mary moved to the bathroom.\n",
            "1 Mary moved to the bathroom.\n3 Where is Mary?\tbathroom\t1\n",
            "1 Mary moved to the bathroom.\n2 Where is Mary?\tbathroom\t3\n",
            "1 Mary moved to the bathroom.\n2 Where is Mary?\tbathroom\n",
            "1 Where is Mary?\tnowhere\t\n2 Where is Mary?\tbathroom\t1\n",
            "1 Mary moved to the bathroom.\n2 Where is Mary?\t\t1\n",
            "2 Mary moved to the bathroom.\n",
        ];
        for c in cases {
            assert!(parse_babi(c).is_err(), "{c:?}");
        }
    }
}
