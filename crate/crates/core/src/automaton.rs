//! Deterministic finite automata with possibly partial transition functions.
//!
//! Only the transition structure matters for the decision procedures, so a
//! [`Dfa`] carries no initial or accepting states. States and letters are dense
//! `0..n` indices; letter names are kept for presentation only.

use std::collections::HashSet;
use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};
use thiserror::Error;

const NONE: u32 = u32::MAX;

/// A nonempty (unless stated otherwise) sequence of letter indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn new(letters: Vec<usize>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Concatenation `self · other`.
    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.0.len() + other.0.len());
        letters.extend_from_slice(&self.0);
        letters.extend_from_slice(&other.0);
        Word(letters)
    }
}

impl Deref for Word {
    type Target = [usize];

    fn deref(&self) -> &[usize] {
        &self.0
    }
}

impl From<Vec<usize>> for Word {
    fn from(letters: Vec<usize>) -> Self {
        Word(letters)
    }
}

impl From<&[usize]> for Word {
    fn from(letters: &[usize]) -> Self {
        Word(letters.to_vec())
    }
}

/// Unvalidated automaton data, as read from a file or assembled by hand.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawDfa {
    pub states: usize,
    pub letters: usize,
    /// `(state, letter, target)` entries. Missing pairs are undefined.
    pub transitions: Vec<(usize, usize, usize)>,
    pub letter_names: Option<Vec<String>>,
}

/// A single broken invariant reported by [`validate_dfa`].
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("automaton has no states")]
    NoStates,
    #[error("automaton has no letters")]
    NoLetters,
    #[error("source state {state} out of range")]
    StateOutOfRange { state: usize },
    #[error("letter {letter} out of range")]
    LetterOutOfRange { letter: usize },
    #[error("target out of range: delta({state}, {letter}) = {target}")]
    TargetOutOfRange { state: usize, letter: usize, target: usize },
    #[error("duplicate transition for ({state}, {letter})")]
    DuplicateTransition { state: usize, letter: usize },
    #[error("letter name list has {found} entries, expected {expected}")]
    LetterNameCount { expected: usize, found: usize },
    #[error("duplicate letter name {0:?}")]
    DuplicateLetterName(String),
}

/// Checks every invariant of the automaton type and reports all violations.
pub fn validate_dfa(raw: &RawDfa) -> Result<(), Vec<Violation>> {
    let mut violations = Vec::new();
    if raw.states == 0 {
        violations.push(Violation::NoStates);
    }
    if raw.letters == 0 {
        violations.push(Violation::NoLetters);
    }
    let mut seen = HashSet::new();
    for &(state, letter, target) in &raw.transitions {
        if state >= raw.states {
            violations.push(Violation::StateOutOfRange { state });
        }
        if letter >= raw.letters {
            violations.push(Violation::LetterOutOfRange { letter });
        }
        if target >= raw.states {
            violations.push(Violation::TargetOutOfRange { state, letter, target });
        }
        if !seen.insert((state, letter)) {
            violations.push(Violation::DuplicateTransition { state, letter });
        }
    }
    if let Some(names) = &raw.letter_names {
        if names.len() != raw.letters {
            violations.push(Violation::LetterNameCount {
                expected: raw.letters,
                found: names.len(),
            });
        }
        let mut seen = HashSet::new();
        for name in names {
            if !seen.insert(name.as_str()) {
                violations.push(Violation::DuplicateLetterName(name.clone()));
            }
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

/// A validated deterministic automaton. Immutable once built.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dfa {
    states: usize,
    letters: usize,
    /// Row-major `states x letters`, `NONE` where undefined.
    delta: Vec<u32>,
    letter_names: Option<Vec<String>>,
}

impl Dfa {
    /// Builds an automaton from a transition function.
    ///
    /// Panics if `states` or `letters` is zero or a target is out of range;
    /// use [`Dfa::try_from`] on a [`RawDfa`] for checked construction.
    pub fn from_fn(
        states: usize,
        letters: usize,
        mut delta: impl FnMut(usize, usize) -> Option<usize>,
    ) -> Self {
        assert!(states > 0 && letters > 0, "empty automaton");
        assert!(states < NONE as usize, "too many states");
        let mut table = Vec::with_capacity(states * letters);
        for p in 0..states {
            for a in 0..letters {
                table.push(match delta(p, a) {
                    Some(q) => {
                        assert!(q < states, "target {q} out of range");
                        q as u32
                    }
                    None => NONE,
                });
            }
        }
        Dfa {
            states,
            letters,
            delta: table,
            letter_names: None,
        }
    }

    /// Builds a complete automaton from one state map per letter:
    /// `maps[a][p]` is the image of `p` under letter `a`.
    pub fn from_letter_maps(states: usize, maps: &[&[usize]]) -> Self {
        Dfa::from_fn(states, maps.len(), |p, a| Some(maps[a][p]))
    }

    pub fn with_letter_names(mut self, names: Vec<String>) -> Result<Self, Vec<Violation>> {
        let raw = RawDfa {
            states: self.states,
            letters: self.letters,
            transitions: Vec::new(),
            letter_names: Some(names),
        };
        validate_dfa(&raw)?;
        self.letter_names = raw.letter_names;
        Ok(self)
    }

    pub fn state_count(&self) -> usize {
        self.states
    }

    pub fn letter_count(&self) -> usize {
        self.letters
    }

    pub fn letter_names(&self) -> Option<&[String]> {
        self.letter_names.as_deref()
    }

    /// Printable label of a letter: its name if named, else its index.
    pub fn letter_label(&self, letter: usize) -> String {
        match &self.letter_names {
            Some(names) => names[letter].clone(),
            None => letter.to_string(),
        }
    }

    #[inline]
    pub fn step(&self, state: usize, letter: usize) -> Option<usize> {
        let t = self.delta[state * self.letters + letter];
        (t != NONE).then_some(t as usize)
    }

    /// Action of a word on a state, left to right. `None` once any step is
    /// undefined. The empty word fixes every state.
    pub fn apply(&self, state: usize, word: &[usize]) -> Option<usize> {
        word.iter()
            .try_fold(state, |p, &letter| self.step(p, letter))
    }

    /// The action of `word` on every state.
    pub fn action(&self, word: &[usize]) -> Vec<Option<usize>> {
        (0..self.states).map(|p| self.apply(p, word)).collect()
    }

    pub fn is_complete(&self) -> bool {
        self.delta.iter().all(|&t| t != NONE)
    }

    pub fn transition_count(&self) -> usize {
        self.delta.iter().filter(|&&t| t != NONE).count()
    }

    /// Defined transitions in `(state, letter)` order.
    pub fn transitions(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        (0..self.states).flat_map(move |p| {
            (0..self.letters).filter_map(move |a| self.step(p, a).map(|q| (p, a, q)))
        })
    }

    pub fn to_raw(&self) -> RawDfa {
        RawDfa {
            states: self.states,
            letters: self.letters,
            transitions: self.transitions().collect(),
            letter_names: self.letter_names.clone(),
        }
    }

    /// Serializes to the text format accepted by [`parse_dfa`].
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl TryFrom<RawDfa> for Dfa {
    type Error = Vec<Violation>;

    fn try_from(raw: RawDfa) -> Result<Self, Self::Error> {
        validate_dfa(&raw)?;
        let mut delta = vec![NONE; raw.states * raw.letters];
        for (p, a, q) in raw.transitions {
            delta[p * raw.letters + a] = q as u32;
        }
        Ok(Dfa {
            states: raw.states,
            letters: raw.letters,
            delta,
            letter_names: raw.letter_names,
        })
    }
}

impl fmt::Debug for Dfa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dfa {{ states: {}, letters: {}, delta: [", self.states, self.letters)?;
        for (i, (p, a, q)) in self.transitions().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}-{a}->{q}")?;
        }
        write!(f, "] }}")
    }
}

impl fmt::Display for Dfa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "dfa")?;
        writeln!(f, "states: {}", self.states)?;
        match &self.letter_names {
            Some(names) => writeln!(f, "letters: {}", names.join(" "))?,
            None => writeln!(f, "letters: {}", self.letters)?,
        }
        for (p, a, q) in self.transitions() {
            writeln!(f, "{p} {} {q}", self.letter_label(a))?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DfaParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: state {state} out of range (automaton has {states} states)")]
    StateOutOfRange {
        line: usize,
        state: usize,
        states: usize,
    },
    #[error("line {line}: letter {letter:?} out of range or unknown")]
    UnknownLetter { line: usize, letter: String },
    #[error("line {line}: duplicate transition for ({state}, {letter})")]
    DuplicateTransition {
        line: usize,
        state: usize,
        letter: usize,
    },
    #[error("invalid automaton: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
}

/// Lines with comments stripped, keeping 1-based line numbers and the
/// column at which the content starts.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let body = match line.find('#') {
            Some(pos) => &line[..pos],
            None => line,
        };
        let trimmed = body.trim();
        if trimmed.is_empty() {
            None
        } else {
            let column = body.len() - body.trim_start().len() + 1;
            Some((i + 1, column, trimmed))
        }
    })
}

fn header_value<'a>(
    line: Option<(usize, usize, &'a str)>,
    key: &str,
    last_line: usize,
) -> Result<(usize, usize, &'a str), DfaParseError> {
    let (line, column, text) = line.ok_or_else(|| DfaParseError::Syntax {
        line: last_line + 1,
        column: 1,
        message: format!("missing `{key}:` header"),
    })?;
    match text.split_once(':') {
        Some((k, v)) if k.trim() == key => Ok((line, column + k.len() + 1, v.trim())),
        _ => Err(DfaParseError::Syntax {
            line,
            column,
            message: format!("expected `{key}: ...`, found {text:?}"),
        }),
    }
}

fn parse_count(line: usize, column: usize, text: &str, what: &str) -> Result<usize, DfaParseError> {
    match text.parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(DfaParseError::Syntax {
            line,
            column,
            message: format!("expected a positive {what} count, found {text:?}"),
        }),
    }
}

const IGNORED_KEYS: [&str; 4] = ["initial", "accepting", "final", "start"];

/// Parses one automaton in the `dfa` text format.
pub fn parse_dfa(text: &str) -> Result<Dfa, DfaParseError> {
    let mut lines = content_lines(text).peekable();
    let first = lines.next();
    match first {
        Some((_, _, "dfa")) => {}
        Some((line, column, other)) => {
            return Err(DfaParseError::Syntax {
                line,
                column,
                message: format!("expected `dfa` header, found {other:?}"),
            })
        }
        None => {
            return Err(DfaParseError::Syntax {
                line: 1,
                column: 1,
                message: "empty input".into(),
            })
        }
    }
    let last = first.map_or(0, |l| l.0);
    let (sl, sc, states_text) = header_value(lines.next(), "states", last)?;
    let states = parse_count(sl, sc, states_text, "state")?;
    let (ll, lc, letters_text) = header_value(lines.next(), "letters", sl)?;
    let tokens: Vec<&str> = letters_text.split_whitespace().collect();
    let (letters, letter_names) = match tokens.as_slice() {
        [single] if single.parse::<usize>().is_ok() => (parse_count(ll, lc, single, "letter")?, None),
        [] => {
            return Err(DfaParseError::Syntax {
                line: ll,
                column: lc,
                message: "missing letter count or names".into(),
            })
        }
        names => (
            names.len(),
            Some(names.iter().map(|s| s.to_string()).collect::<Vec<_>>()),
        ),
    };

    let mut raw = RawDfa {
        states,
        letters,
        transitions: Vec::new(),
        letter_names,
    };
    if let Some(names) = &raw.letter_names {
        validate_dfa(&RawDfa {
            transitions: Vec::new(),
            letter_names: Some(names.clone()),
            ..raw.clone()
        })
        .map_err(DfaParseError::Invalid)?;
    }
    let mut defined = HashSet::new();
    for (line, column, text) in lines {
        if let Some((key, _)) = text.split_once(':') {
            if IGNORED_KEYS.contains(&key.trim()) {
                continue;
            }
        }
        let fields: Vec<&str> = text.split_whitespace().collect();
        let [src, letter, dst] = fields.as_slice() else {
            return Err(DfaParseError::Syntax {
                line,
                column,
                message: format!("expected `<state> <letter> <state>`, found {text:?}"),
            });
        };
        let state_index = |tok: &str| -> Result<usize, DfaParseError> {
            let s = tok.parse::<usize>().map_err(|_| DfaParseError::Syntax {
                line,
                column,
                message: format!("invalid state {tok:?}"),
            })?;
            if s >= states {
                return Err(DfaParseError::StateOutOfRange { line, state: s, states });
            }
            Ok(s)
        };
        let p = state_index(src)?;
        let q = state_index(dst)?;
        let a = raw
            .letter_names
            .as_ref()
            .and_then(|names| names.iter().position(|n| n == letter))
            .or_else(|| letter.parse::<usize>().ok().filter(|&a| a < letters))
            .ok_or_else(|| DfaParseError::UnknownLetter {
                line,
                letter: letter.to_string(),
            })?;
        if !defined.insert((p, a)) {
            return Err(DfaParseError::DuplicateTransition { line, state: p, letter: a });
        }
        raw.transitions.push((p, a, q));
    }
    Dfa::try_from(raw).map_err(DfaParseError::Invalid)
}

/// Parses a concatenation of automata, each starting with its own `dfa` line.
pub fn parse_dfa_many(text: &str) -> Result<Vec<Dfa>, DfaParseError> {
    let mut chunks: Vec<String> = Vec::new();
    let mut offset = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("").trim();
        if body == "dfa" || chunks.is_empty() {
            chunks.push(String::new());
            offset.push(i);
        }
        let chunk = chunks.last_mut().expect("chunk");
        chunk.push_str(line);
        chunk.push('\n');
    }
    chunks
        .iter()
        .zip(offset)
        .filter(|(chunk, _)| content_lines(chunk).next().is_some())
        .map(|(chunk, off)| {
            parse_dfa(chunk).map_err(|e| match e {
                DfaParseError::Syntax { line, column, message } => DfaParseError::Syntax {
                    line: line + off,
                    column,
                    message,
                },
                DfaParseError::StateOutOfRange { line, state, states } => {
                    DfaParseError::StateOutOfRange { line: line + off, state, states }
                }
                DfaParseError::UnknownLetter { line, letter } => {
                    DfaParseError::UnknownLetter { line: line + off, letter }
                }
                DfaParseError::DuplicateTransition { line, state, letter } => {
                    DfaParseError::DuplicateTransition { line: line + off, state, letter }
                }
                other => other,
            })
        })
        .collect()
}
