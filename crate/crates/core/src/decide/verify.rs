use std::collections::VecDeque;

use thiserror::Error;

use super::{ElementRef, Identity, PropertyId, Verdict, Witness};
use crate::automaton::{Dfa, Word};
use crate::graph::{ScanMode, TripleKind};
use crate::semigroup::{Semigroup, Side};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WitnessError {
    #[error("verdict carries no witness")]
    Missing,
    #[error("malformed witness: {0}")]
    Malformed(String),
}

/// The instance a verdict was computed for.
#[derive(Clone, Copy)]
pub enum Instance<'a> {
    Dfa(&'a Dfa),
    Semigroup(&'a dyn Semigroup),
}

/// Re-checks a failing verdict's witness from first principles: word
/// application and fresh reachability searches on automata, table lookups
/// on semigroups.
///
/// Returns `Ok(false)` when the witness is well formed but its claim does
/// not hold.
pub fn verify_witness(instance: Instance<'_>, verdict: &Verdict) -> Result<bool, WitnessError> {
    let witness = verdict.witness.as_ref().ok_or(WitnessError::Missing)?;
    if verdict.holds {
        return Err(WitnessError::Malformed("verdict holds but carries a witness".into()));
    }
    match (instance, witness) {
        (Instance::Dfa(d), Witness::GraphCondition1 { p, q, u, v, cycle }) => {
            check_states(d, &[*p, *q])?;
            check_words(d, [Some(u), Some(v), cycle.as_ref()])?;
            let basic = p != q && !u.is_empty() && !v.is_empty();
            let ok = match verdict.property {
                PropertyId::RightLT => {
                    let Some(cycle) = cycle else {
                        return Err(WitnessError::Malformed("missing cycle word".into()));
                    };
                    !cycle.is_empty()
                        && d.apply(*p, cycle) == Some(*p)
                        && d.apply(*q, cycle) == Some(*q)
                        && d.apply(*p, u) == Some(*q)
                        && d.apply(*q, v) == Some(*p)
                }
                _ => {
                    d.apply(*p, u) == Some(*q)
                        && d.apply(*q, u) == Some(*p)
                        && d.apply(*q, v) == Some(*p)
                }
            };
            Ok(basic && ok)
        }
        (Instance::Dfa(d), Witness::GraphCondition2 { mode, p, q, cycle, word, r, s, letter }) => {
            check_states(d, &[*p, *q, *r, *s])?;
            check_words(d, [Some(cycle), Some(word), None])?;
            if *letter >= d.letter_count() {
                return Err(WitnessError::Malformed(format!("letter {letter} out of range")));
            }
            let fixed = !cycle.is_empty()
                && d.apply(*p, cycle) == Some(*p)
                && d.apply(*q, cycle) == Some(*q);
            let led = d.apply(*p, word) == Some(*r) && d.apply(*q, word) == Some(*s);
            let hits = |x: Option<usize>| x.is_some_and(|x| reaches(d, x, *q));
            let a = hits(d.step(*r, *letter));
            let b = hits(d.step(*s, *letter));
            let broken = match mode {
                ScanMode::RightOrIdem => a && !b,
                ScanMode::Left => a != b,
            };
            Ok(fixed && reaches(d, *p, *q) && led && broken)
        }
        (Instance::Dfa(d), Witness::GraphCondition3 { kind, p, q, r, cycle, word, word2 }) => {
            check_states(d, &[*p, *q, *r])?;
            check_words(d, [Some(cycle), Some(word), word2.as_ref()])?;
            let distinct = p != q && q != r && p != r;
            let fixed = !cycle.is_empty() && [*p, *q, *r].iter().all(|&x| d.apply(x, cycle) == Some(x));
            let ok = match kind {
                TripleKind::LocId => d.apply(*p, word) == Some(*q) && d.apply(*q, word) == Some(*r),
                TripleKind::Left => {
                    let Some(word2) = word2 else {
                        return Err(WitnessError::Malformed("missing second word".into()));
                    };
                    d.apply(*p, word) == Some(*r)
                        && d.apply(*q, word) == Some(*q)
                        && d.apply(*p, word2) == Some(*q)
                        && d.apply(*r, word2) == Some(*r)
                }
            };
            Ok(distinct && fixed && ok)
        }
        (Instance::Dfa(d), Witness::SemigroupIdentity { identity, e, x, y }) => {
            semigroup_identity(&WordAlgebra(d), *identity, e, x, y.as_ref())
        }
        (Instance::Dfa(d), Witness::UnitSharing { side, e, i, f }) => {
            unit_sharing(&WordAlgebra(d), *side, e, i, f)
        }
        (Instance::Semigroup(s), Witness::SemigroupIdentity { identity, e, x, y }) => {
            semigroup_identity(&TableAlgebra(s), *identity, e, x, y.as_ref())
        }
        (Instance::Semigroup(s), Witness::UnitSharing { side, e, i, f }) => {
            unit_sharing(&TableAlgebra(s), *side, e, i, f)
        }
        (Instance::Semigroup(_), w) => Err(WitnessError::Malformed(format!(
            "{} needs an automaton instance",
            w.variant_name()
        ))),
    }
}

fn check_states(d: &Dfa, states: &[usize]) -> Result<(), WitnessError> {
    match states.iter().find(|&&p| p >= d.state_count()) {
        Some(p) => Err(WitnessError::Malformed(format!("state {p} out of range"))),
        None => Ok(()),
    }
}

fn check_words(d: &Dfa, words: [Option<&Word>; 3]) -> Result<(), WitnessError> {
    for word in words.into_iter().flatten() {
        if let Some(a) = word.iter().find(|&&a| a >= d.letter_count()) {
            return Err(WitnessError::Malformed(format!("letter {a} out of range")));
        }
    }
    Ok(())
}

/// Plain breadth-first reachability on Γ, independent of the SCC machinery.
fn reaches(d: &Dfa, from: usize, to: usize) -> bool {
    let mut seen = vec![false; d.state_count()];
    let mut queue = VecDeque::from([from]);
    seen[from] = true;
    while let Some(p) = queue.pop_front() {
        if p == to {
            return true;
        }
        for a in 0..d.letter_count() {
            if let Some(q) = d.step(p, a) {
                if !seen[q] {
                    seen[q] = true;
                    queue.push_back(q);
                }
            }
        }
    }
    false
}

/// Just enough structure to evaluate products and equalities of witness
/// elements.
trait Algebra {
    type Elem: Clone;
    fn resolve(&self, r: &ElementRef) -> Result<Self::Elem, WitnessError>;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn same(&self, a: &Self::Elem, b: &Self::Elem) -> bool;

    fn mul3(&self, a: &Self::Elem, b: &Self::Elem, c: &Self::Elem) -> Self::Elem {
        self.mul(&self.mul(a, b), c)
    }
}

/// Elements as nonempty words; equality is equality of the induced maps.
struct WordAlgebra<'a>(&'a Dfa);

impl Algebra for WordAlgebra<'_> {
    type Elem = Word;

    fn resolve(&self, r: &ElementRef) -> Result<Word, WitnessError> {
        let word = r
            .word
            .as_ref()
            .ok_or_else(|| WitnessError::Malformed("element without a word".into()))?;
        if word.is_empty() {
            return Err(WitnessError::Malformed("empty element word".into()));
        }
        check_words(self.0, [Some(word), None, None])?;
        Ok(word.clone())
    }

    fn mul(&self, a: &Word, b: &Word) -> Word {
        a.concat(b)
    }

    fn same(&self, a: &Word, b: &Word) -> bool {
        self.0.action(a) == self.0.action(b)
    }
}

struct TableAlgebra<'a>(&'a dyn Semigroup);

impl Algebra for TableAlgebra<'_> {
    type Elem = usize;

    fn resolve(&self, r: &ElementRef) -> Result<usize, WitnessError> {
        let index = r
            .index
            .ok_or_else(|| WitnessError::Malformed("element without an index".into()))?;
        if index >= self.0.order() {
            return Err(WitnessError::Malformed(format!("element {index} out of range")));
        }
        Ok(index)
    }

    fn mul(&self, a: &usize, b: &usize) -> usize {
        self.0.mul(*a, *b)
    }

    fn same(&self, a: &usize, b: &usize) -> bool {
        a == b
    }
}

fn semigroup_identity<A: Algebra>(
    alg: &A,
    identity: Identity,
    e: &ElementRef,
    x: &ElementRef,
    y: Option<&ElementRef>,
) -> Result<bool, WitnessError> {
    let e = alg.resolve(e)?;
    let x = alg.resolve(x)?;
    if !alg.same(&alg.mul(&e, &e), &e) {
        return Ok(false);
    }
    let xl = alg.mul3(&e, &x, &e);
    match identity {
        Identity::Idempotent => Ok(!alg.same(&alg.mul(&xl, &xl), &xl)),
        Identity::RightLocal | Identity::LeftLocal => {
            let y = y.ok_or_else(|| WitnessError::Malformed("missing y".into()))?;
            let y = alg.resolve(y)?;
            let yl = alg.mul3(&e, &y, &e);
            let xyx = alg.mul3(&xl, &yl, &xl);
            let rhs = if identity == Identity::RightLocal {
                alg.mul(&xl, &yl)
            } else {
                alg.mul(&yl, &xl)
            };
            Ok(!alg.same(&xyx, &rhs))
        }
    }
}

fn unit_sharing<A: Algebra>(
    alg: &A,
    side: Side,
    e: &ElementRef,
    i: &ElementRef,
    f: &ElementRef,
) -> Result<bool, WitnessError> {
    let e = alg.resolve(e)?;
    let i = alg.resolve(i)?;
    let f = alg.resolve(f)?;
    let idempotent = alg.same(&alg.mul(&e, &e), &e) && alg.same(&alg.mul(&i, &i), &i);
    let distinct = !alg.same(&e, &i);
    let (zero, unit) = match side {
        Side::Right => (
            alg.same(&alg.mul(&e, &i), &i) && alg.same(&alg.mul(&i, &e), &e),
            alg.same(&alg.mul(&e, &f), &e) && alg.same(&alg.mul(&i, &f), &i),
        ),
        Side::Left => (
            alg.same(&alg.mul(&e, &i), &e) && alg.same(&alg.mul(&i, &e), &i),
            alg.same(&alg.mul(&f, &e), &e) && alg.same(&alg.mul(&f, &i), &i),
        ),
    };
    Ok(idempotent && distinct && zero && unit)
}
