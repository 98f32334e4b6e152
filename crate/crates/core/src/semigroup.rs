//! Finite semigroups: explicit Cayley tables, transition semigroups of
//! automata, idempotents and zero-subsemigroup ordering.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::automaton::{Dfa, Word};

const NONE: u32 = u32::MAX;

/// Default bound on the order of a generated transition semigroup.
pub const DEFAULT_SEMIGROUP_CAP: usize = 100_000;

/// Bound on the order of a semigroup whose full Cayley table may be
/// materialized (`k²` entries).
pub const CAYLEY_TABLE_LIMIT: usize = 10_000;

/// Multiplication over elements `0..order()`.
///
/// Implemented by explicit Cayley tables and by transition semigroups, which
/// multiply by composing actions instead of storing `k²` products.
pub trait Semigroup: Sync {
    fn order(&self) -> usize;

    fn mul(&self, a: usize, b: usize) -> usize;

    /// Shortlex-least word inducing the element, when the semigroup comes
    /// from an automaton.
    fn element_word(&self, _element: usize) -> Option<&Word> {
        None
    }

    fn mul3(&self, a: usize, b: usize, c: usize) -> usize {
        self.mul(self.mul(a, b), c)
    }
}

impl<S: Semigroup + ?Sized> Semigroup for &S {
    fn order(&self) -> usize {
        (**self).order()
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        (**self).mul(a, b)
    }

    fn element_word(&self, element: usize) -> Option<&Word> {
        (**self).element_word(element)
    }
}

/// The same elements with reversed multiplication.
#[derive(Clone, Copy, Debug)]
pub struct Opposite<S>(pub S);

impl<S: Semigroup> Semigroup for Opposite<S> {
    fn order(&self) -> usize {
        self.0.order()
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        self.0.mul(b, a)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SemigroupError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: entry {value} out of range for order {order}")]
    OutOfRange { line: usize, value: usize, order: usize },
    #[error("not associative: ({i}·{j})·{l} = {left} but {i}·({j}·{l}) = {right}")]
    NotAssociative {
        i: usize,
        j: usize,
        l: usize,
        left: usize,
        right: usize,
    },
    #[error("semigroup order exceeds cap {cap} (reached {reached} elements)")]
    CapExceeded { cap: usize, reached: usize },
    #[error("semigroup of order {order} is too large for a Cayley table (limit {limit})")]
    TableTooLarge { order: usize, limit: usize },
}

/// A semigroup given by its Cayley table: `table[i·k + j] = i·j`.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteSemigroup {
    order: usize,
    table: Vec<u32>,
    element_words: Option<Vec<Word>>,
    generator_count: Option<usize>,
}

impl FiniteSemigroup {
    /// Builds a semigroup from its rows, checking closure and associativity.
    pub fn from_rows(rows: &[Vec<usize>]) -> Result<Self, SemigroupError> {
        let order = rows.len();
        if order == 0 {
            return Err(SemigroupError::Syntax {
                line: 0,
                message: "empty table".into(),
            });
        }
        let mut table = Vec::with_capacity(order * order);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != order {
                return Err(SemigroupError::Syntax {
                    line: i + 1,
                    message: format!("row {i} has {} entries, expected {order}", row.len()),
                });
            }
            for &v in row {
                if v >= order {
                    return Err(SemigroupError::OutOfRange { line: i + 1, value: v, order });
                }
                table.push(v as u32);
            }
        }
        let s = FiniteSemigroup {
            order,
            table,
            element_words: None,
            generator_count: None,
        };
        s.check_associative()?;
        Ok(s)
    }

    /// First `(i, j, l)` in lexicographic order with `(ij)l ≠ i(jl)`.
    pub fn check_associative(&self) -> Result<(), SemigroupError> {
        let k = self.order;
        for i in 0..k {
            for j in 0..k {
                let ij = self.mul(i, j);
                for l in 0..k {
                    let left = self.mul(ij, l);
                    let right = self.mul(i, self.mul(j, l));
                    if left != right {
                        return Err(SemigroupError::NotAssociative { i, j, l, left, right });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn element_words(&self) -> Option<&[Word]> {
        self.element_words.as_deref()
    }

    pub fn generator_count(&self) -> Option<usize> {
        self.generator_count
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u32]> {
        self.table.chunks(self.order)
    }

    /// Transposed table: `a ∘ b = b · a`.
    pub fn opposite(&self) -> FiniteSemigroup {
        let k = self.order;
        let mut table = vec![0; k * k];
        for i in 0..k {
            for j in 0..k {
                table[i * k + j] = self.table[j * k + i];
            }
        }
        FiniteSemigroup {
            order: k,
            table,
            element_words: None,
            generator_count: None,
        }
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl Semigroup for FiniteSemigroup {
    fn order(&self) -> usize {
        self.order
    }

    #[inline]
    fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    fn element_word(&self, element: usize) -> Option<&Word> {
        self.element_words.as_ref().map(|w| &w[element])
    }
}

impl fmt::Debug for FiniteSemigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteSemigroup")
            .field("order", &self.order)
            .field("rows", &self.rows().collect::<Vec<_>>())
            .finish()
    }
}

impl fmt::Display for FiniteSemigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "semigroup")?;
        writeln!(f, "order: {}", self.order)?;
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Parses the `semigroup` Cayley text format.
pub fn parse_cayley(text: &str) -> Result<FiniteSemigroup, SemigroupError> {
    let mut lines = text.lines().enumerate().filter_map(|(i, line)| {
        let body = line.split('#').next().unwrap_or("").trim();
        (!body.is_empty()).then_some((i + 1, body))
    });
    match lines.next() {
        Some((_, "semigroup")) => {}
        Some((line, other)) => {
            return Err(SemigroupError::Syntax {
                line,
                message: format!("expected `semigroup` header, found {other:?}"),
            })
        }
        None => {
            return Err(SemigroupError::Syntax {
                line: 1,
                message: "empty input".into(),
            })
        }
    }
    let (line, header) = lines.next().ok_or(SemigroupError::Syntax {
        line: 2,
        message: "missing `order:` header".into(),
    })?;
    let order = match header.split_once(':') {
        Some(("order", v)) => v.trim().parse::<usize>().ok().filter(|&k| k > 0),
        _ => None,
    }
    .ok_or_else(|| SemigroupError::Syntax {
        line,
        message: format!("expected `order: <positive integer>`, found {header:?}"),
    })?;
    let mut rows = Vec::with_capacity(order);
    let mut last_line = line;
    for (line, body) in lines {
        last_line = line;
        if rows.len() == order {
            return Err(SemigroupError::Syntax {
                line,
                message: format!("more than {order} rows"),
            });
        }
        let row = body
            .split_whitespace()
            .map(|tok| {
                tok.parse::<usize>().map_err(|_| SemigroupError::Syntax {
                    line,
                    message: format!("invalid entry {tok:?}"),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        if row.len() != order {
            return Err(SemigroupError::Syntax {
                line,
                message: format!("row has {} entries, expected {order}", row.len()),
            });
        }
        if let Some(&value) = row.iter().find(|&&v| v >= order) {
            return Err(SemigroupError::OutOfRange { line, value, order });
        }
        rows.push(row);
    }
    if rows.len() != order {
        return Err(SemigroupError::Syntax {
            line: last_line + 1,
            message: format!("expected {order} rows, found {}", rows.len()),
        });
    }
    FiniteSemigroup::from_rows(&rows)
}

/// The semigroup of partial maps induced by nonempty words of an automaton.
///
/// Elements are numbered in breadth-first discovery order over letters, so
/// each element's stored word is the shortlex-least word inducing it.
/// Products are computed by running the right factor's word from the left
/// factor through the right Cayley graph.
#[derive(Clone)]
pub struct TransitionSemigroup {
    states: usize,
    letters: usize,
    /// `order x states`, `NONE` where undefined.
    maps: Vec<u32>,
    /// `order x letters`: element · letter.
    right: Vec<u32>,
    words: Vec<Word>,
    letter_elements: Vec<u32>,
    index: HashMap<Box<[u32]>, u32>,
}

impl TransitionSemigroup {
    pub fn state_count(&self) -> usize {
        self.states
    }

    /// The partial map of an element; `None` where undefined.
    pub fn action(&self, element: usize) -> Vec<Option<usize>> {
        self.map(element)
            .iter()
            .map(|&t| (t != NONE).then_some(t as usize))
            .collect()
    }

    fn map(&self, element: usize) -> &[u32] {
        &self.maps[element * self.states..(element + 1) * self.states]
    }

    /// Element of a letter.
    pub fn letter_element(&self, letter: usize) -> usize {
        self.letter_elements[letter] as usize
    }

    /// Image of a nonempty word.
    pub fn morphism(&self, word: &[usize]) -> Option<usize> {
        let (&first, rest) = word.split_first()?;
        let mut x = self.letter_elements[first] as usize;
        for &a in rest {
            x = self.right[x * self.letters + a] as usize;
        }
        Some(x)
    }

    /// Element inducing the given partial map, if any.
    pub fn element_of(&self, action: &[Option<usize>]) -> Option<usize> {
        let key: Vec<u32> = action
            .iter()
            .map(|t| t.map_or(NONE, |q| q as u32))
            .collect();
        self.index.get(key.as_slice()).map(|&e| e as usize)
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    /// Materializes the Cayley table.
    pub fn to_cayley(&self) -> Result<FiniteSemigroup, SemigroupError> {
        let k = self.order();
        if k > CAYLEY_TABLE_LIMIT {
            return Err(SemigroupError::TableTooLarge {
                order: k,
                limit: CAYLEY_TABLE_LIMIT,
            });
        }
        let mut table = Vec::with_capacity(k * k);
        for a in 0..k {
            for b in 0..k {
                table.push(self.mul(a, b) as u32);
            }
        }
        Ok(FiniteSemigroup {
            order: k,
            table,
            element_words: Some(self.words.clone()),
            generator_count: Some(self.letters),
        })
    }
}

impl Semigroup for TransitionSemigroup {
    fn order(&self) -> usize {
        self.words.len()
    }

    #[inline]
    fn mul(&self, a: usize, b: usize) -> usize {
        let mut x = a;
        for &letter in self.words[b].iter() {
            x = self.right[x * self.letters + letter] as usize;
        }
        x
    }

    fn element_word(&self, element: usize) -> Option<&Word> {
        Some(&self.words[element])
    }
}

impl fmt::Debug for TransitionSemigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TransitionSemigroup")
            .field("states", &self.states)
            .field("order", &self.order())
            .finish()
    }
}

/// Generates the transition semigroup of `d`, failing once more than `cap`
/// distinct maps are found.
pub fn transition_semigroup(d: &Dfa, cap: usize) -> Result<TransitionSemigroup, SemigroupError> {
    let n = d.state_count();
    let m = d.letter_count();
    let mut maps: Vec<u32> = Vec::new();
    let mut words: Vec<Word> = Vec::new();
    let mut index: HashMap<Box<[u32]>, u32> = HashMap::new();
    let mut right: Vec<u32> = Vec::new();

    let mut intern = |map: Vec<u32>, word: Word, maps: &mut Vec<u32>, words: &mut Vec<Word>| {
        if let Some(&e) = index.get(map.as_slice()) {
            return Ok(e);
        }
        if words.len() == cap {
            return Err(SemigroupError::CapExceeded {
                cap,
                reached: words.len() + 1,
            });
        }
        let e = words.len() as u32;
        maps.extend_from_slice(&map);
        words.push(word);
        index.insert(map.into_boxed_slice(), e);
        Ok(e)
    };

    let mut letter_elements = Vec::with_capacity(m);
    for a in 0..m {
        let map: Vec<u32> = (0..n).map(|p| d.step(p, a).map_or(NONE, |q| q as u32)).collect();
        letter_elements.push(intern(map, Word(vec![a]), &mut maps, &mut words)?);
    }
    let mut next = 0;
    while next < words.len() {
        for a in 0..m {
            let map: Vec<u32> = maps[next * n..(next + 1) * n]
                .iter()
                .map(|&p| {
                    if p == NONE {
                        NONE
                    } else {
                        d.step(p as usize, a).map_or(NONE, |q| q as u32)
                    }
                })
                .collect();
            let mut word = words[next].clone();
            word.0.push(a);
            let e = intern(map, word, &mut maps, &mut words)?;
            right.push(e);
        }
        next += 1;
    }
    Ok(TransitionSemigroup {
        states: n,
        letters: m,
        maps,
        right,
        words,
        letter_elements,
        index,
    })
}

/// Idempotents `e·e = e` in ascending order.
pub fn idempotents<S: Semigroup + ?Sized>(s: &S) -> Vec<usize> {
    (0..s.order()).filter(|&e| s.mul(e, e) == e).collect()
}

/// First `(e, x)` with `e` idempotent and `exe ≠ (exe)²`, scanning `e` then
/// `x` in ascending order.
pub fn is_locally_idempotent<S: Semigroup + ?Sized>(s: &S) -> Result<(), (usize, usize)> {
    for e in idempotents(s) {
        for x in 0..s.order() {
            let y = s.mul3(e, x, e);
            if s.mul(y, y) != y {
                return Err((e, x));
            }
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    /// Right-zero: `xy = y`.
    Right,
    /// Left-zero: `xy = x`.
    Left,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Right => Side::Left,
            Side::Left => Side::Right,
        }
    }
}

/// Half-open range `[start, end)` of positions in an [`IdempotentList`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroInterval {
    pub start: usize,
    pub end: usize,
    pub side: Side,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdempotentList {
    pub members: Vec<usize>,
    pub zero_intervals: Vec<ZeroInterval>,
}

impl IdempotentList {
    /// Interval index of every position.
    pub fn interval_of_positions(&self) -> Vec<usize> {
        let mut out = vec![0; self.members.len()];
        for (k, iv) in self.zero_intervals.iter().enumerate() {
            out[iv.start..iv.end].fill(k);
        }
        out
    }
}

/// Whether two idempotents lie in a common side-zero subsemigroup.
pub fn zero_related<S: Semigroup + ?Sized>(s: &S, side: Side, x: usize, y: usize) -> bool {
    match side {
        Side::Right => s.mul(x, y) == y && s.mul(y, x) == x,
        Side::Left => s.mul(x, y) == x && s.mul(y, x) == y,
    }
}

/// Reorders the idempotents so that each maximal side-zero subsemigroup is
/// one contiguous interval. `O(|E|²)` products.
pub fn reorder_zero_subsemigroups<S: Semigroup + ?Sized>(s: &S, side: Side) -> IdempotentList {
    let mut rest = idempotents(s);
    let mut members = Vec::with_capacity(rest.len());
    let mut zero_intervals = Vec::new();
    while !rest.is_empty() {
        let head = rest[0];
        let start = members.len();
        members.push(head);
        let mut keep = Vec::with_capacity(rest.len());
        for &y in &rest[1..] {
            if zero_related(s, side, head, y) {
                members.push(y);
            } else {
                keep.push(y);
            }
        }
        zero_intervals.push(ZeroInterval {
            start,
            end: members.len(),
            side,
        });
        rest = keep;
    }
    IdempotentList {
        members,
        zero_intervals,
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub fn m3() -> FiniteSemigroup {
        // 0 = 1 (identity), 1 = e, 2 = i; {e, i} right-zero
        FiniteSemigroup::from_rows(&[vec![0, 1, 2], vec![1, 1, 2], vec![2, 1, 2]]).unwrap()
    }

    fn right_zero2() -> FiniteSemigroup {
        FiniteSemigroup::from_rows(&[vec![0, 1], vec![0, 1]]).unwrap()
    }

    fn z2() -> FiniteSemigroup {
        FiniteSemigroup::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap()
    }

    #[test]
    fn parse_examples() {
        let s = parse_cayley("semigroup\norder: 1\n0\n").unwrap();
        assert_eq!(s.order(), 1);
        let s = parse_cayley("semigroup\norder: 2 # right zero\n0 1\n0 1\n").unwrap();
        assert_eq!(s, right_zero2());
        assert!(matches!(
            parse_cayley("semigroup\norder: 2\n0 2\n0 1\n").unwrap_err(),
            SemigroupError::OutOfRange { line: 3, value: 2, order: 2 }
        ));
        assert!(matches!(
            parse_cayley("semigroup\norder: 2\n0 1\n").unwrap_err(),
            SemigroupError::Syntax { .. }
        ));
        assert!(matches!(
            parse_cayley("group\n").unwrap_err(),
            SemigroupError::Syntax { line: 1, .. }
        ));
    }

    #[test]
    fn text_round_trip() {
        let s = m3();
        assert_eq!(parse_cayley(&s.to_text()).unwrap(), s);
    }

    #[test]
    fn idempotent_examples() {
        assert_eq!(idempotents(&FiniteSemigroup::from_rows(&[vec![0]]).unwrap()), vec![0]);
        assert_eq!(idempotents(&right_zero2()), vec![0, 1]);
        assert_eq!(idempotents(&z2()), vec![0]);
    }

    #[test]
    fn local_idempotency_examples() {
        assert_eq!(is_locally_idempotent(&right_zero2()), Ok(()));
        assert_eq!(is_locally_idempotent(&z2()), Err((0, 1)));
        assert_eq!(is_locally_idempotent(&m3()), Ok(()));
    }

    #[test]
    fn reorder_examples() {
        let l = reorder_zero_subsemigroups(&right_zero2(), Side::Right);
        assert_eq!(l.members, vec![0, 1]);
        assert_eq!(l.zero_intervals, vec![ZeroInterval { start: 0, end: 2, side: Side::Right }]);
        let l = reorder_zero_subsemigroups(&right_zero2(), Side::Left);
        assert_eq!(l.zero_intervals.len(), 2);
        let l = reorder_zero_subsemigroups(&m3(), Side::Right);
        assert_eq!(l.members, vec![0, 1, 2]);
        assert_eq!(
            l.zero_intervals,
            vec![
                ZeroInterval { start: 0, end: 1, side: Side::Right },
                ZeroInterval { start: 1, end: 3, side: Side::Right },
            ]
        );
        // interleaved input order still yields contiguous blocks
        let s = FiniteSemigroup::from_rows(&[
            vec![0, 1, 0, 1],
            vec![0, 1, 0, 1],
            vec![2, 3, 2, 3],
            vec![2, 3, 2, 3],
        ])
        .unwrap();
        let l = reorder_zero_subsemigroups(&s, Side::Right);
        assert_eq!(l.members, vec![0, 1, 2, 3]);
        let l = reorder_zero_subsemigroups(&s, Side::Left);
        assert_eq!(l.members, vec![0, 2, 1, 3]);
        assert_eq!(l.interval_of_positions(), vec![0, 0, 1, 1]);
    }

    #[test]
    fn opposite_examples() {
        assert_eq!(
            right_zero2().opposite(),
            FiniteSemigroup::from_rows(&[vec![0, 0], vec![1, 1]]).unwrap()
        );
        assert_eq!(z2().opposite(), z2());
        assert_eq!(m3().opposite().opposite(), m3());
        let s = m3();
        for a in 0..3 {
            for b in 0..3 {
                assert_eq!(Opposite(&s).mul(a, b), s.opposite().mul(a, b));
            }
        }
    }

    #[test]
    fn transition_semigroup_examples() {
        let two_cycle = Dfa::from_letter_maps(2, &[&[1, 0]]);
        let s = transition_semigroup(&two_cycle, 100).unwrap();
        assert_eq!(s.order(), 2);
        assert_eq!(s.words()[0], Word(vec![0]));
        assert_eq!(s.words()[1], Word(vec![0, 0]));
        assert_eq!(s.mul(0, 0), 1);
        assert_eq!(s.action(1), vec![Some(0), Some(1)]);

        let constant = Dfa::from_letter_maps(3, &[&[0, 0, 0], &[0, 0, 0]]);
        assert_eq!(transition_semigroup(&constant, 100).unwrap().order(), 1);
        let identity = Dfa::from_letter_maps(3, &[&[0, 1, 2], &[0, 1, 2]]);
        let s = transition_semigroup(&identity, 100).unwrap();
        assert_eq!(s.order(), 1);
        assert_eq!(idempotents(&s), vec![0]);
    }

    #[test]
    fn cap_is_reported() {
        // full transformation monoid on 3 points minus nothing: 27 maps
        let d = Dfa::from_letter_maps(3, &[&[1, 2, 0], &[1, 0, 2], &[0, 0, 2]]);
        assert_eq!(transition_semigroup(&d, 1000).unwrap().order(), 27);
        assert_eq!(
            transition_semigroup(&d, 10).unwrap_err(),
            SemigroupError::CapExceeded { cap: 10, reached: 11 }
        );
    }

    #[test]
    fn partial_maps_compose() {
        let d = Dfa::from_fn(2, 1, |p, _| (p == 0).then_some(1));
        let s = transition_semigroup(&d, 100).unwrap();
        assert_eq!(s.order(), 2);
        assert_eq!(s.action(1), vec![None, None]);
        assert_eq!(s.morphism(&[0, 0, 0]), Some(1));
    }
}
