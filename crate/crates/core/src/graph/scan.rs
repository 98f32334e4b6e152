use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::scc::LabeledGraph;
use super::Analysis;
use crate::automaton::Word;
use crate::par;

const NONE: u32 = u32::MAX;
const ROOT: u32 = u32::MAX - 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanMode {
    /// For every word w: `pw ⪰ q` implies `qw ⪰ q`.
    RightOrIdem,
    /// For every word w: `pw ⪰ q` iff `qw ⪰ q`.
    Left,
}

/// A word `w·σ` breaking the scanned implication for the root `(p, q)`:
/// `(p, q)·w = (r, s)` and the letter σ separates `rσ` from `sσ` with
/// respect to reaching `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cond2Violation {
    pub p: usize,
    pub q: usize,
    pub r: usize,
    pub s: usize,
    pub letter: usize,
    pub word: Word,
}

/// Scans every SCC-node `(p, q)` of Γ² with `p ⪰ q` for a word that breaks
/// the mode's condition. An undefined transition counts as not reaching `q`.
///
/// All roots sharing the same `q` are explored by one breadth-first search,
/// since the pruning (both components must still reach `q`) depends on `q`
/// alone. Roots are grouped by ascending `q`, seeded by ascending `p`, and
/// letters are tried in ascending order; the first violation in that order
/// is returned.
pub fn condition2_scan(an: &Analysis<'_>, mode: ScanMode) -> Option<Cond2Violation> {
    let n = an.dfa().state_count();
    par::find_map_first(an.exec(), n, |q| scan_target(an, mode, q))
}

fn scan_target(an: &Analysis<'_>, mode: ScanMode, q: usize) -> Option<Cond2Violation> {
    let d = an.dfa();
    let n = d.state_count();
    let m = d.letter_count();
    let pairs = an.pairs();
    let pair_scc = an.pair_scc();
    let reach = an.reach();

    let roots: Vec<usize> = (0..n)
        .filter(|&p| reach.reaches(p, q) && pair_scc.on_cycle(pairs.pair(p, q)))
        .collect();
    if roots.is_empty() {
        return None;
    }
    let to_q: Vec<bool> = (0..n).map(|x| reach.reaches(x, q)).collect();
    let hits_q = |x: Option<usize>| x.is_some_and(|x| to_q[x]);

    let mut parent = vec![NONE; n * n];
    let mut via = vec![0u32; n * n];
    let mut queue = VecDeque::new();
    for &p in &roots {
        let node = pairs.pair(p, q);
        parent[node] = ROOT;
        queue.push_back(node);
    }
    while let Some(node) = queue.pop_front() {
        let (r, s) = (node / n, node % n);
        for letter in 0..m {
            let rs = d.step(r, letter);
            let ss = d.step(s, letter);
            let a = hits_q(rs);
            let b = hits_q(ss);
            let broken = match mode {
                ScanMode::RightOrIdem => a && !b,
                ScanMode::Left => a != b,
            };
            if broken {
                let mut letters = Vec::new();
                let mut x = node;
                while parent[x] != ROOT {
                    letters.push(via[x] as usize);
                    x = parent[x] as usize;
                }
                letters.reverse();
                return Some(Cond2Violation {
                    p: x / n,
                    q,
                    r,
                    s,
                    letter,
                    word: Word(letters),
                });
            }
            if a && b {
                let next = pairs
                    .step(node, letter)
                    .expect("both components defined");
                if parent[next] == NONE {
                    parent[next] = node as u32;
                    via[next] = letter as u32;
                    queue.push_back(next);
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::Dfa;
    use crate::graph::GraphLimits;
    use crate::par::Exec;

    fn scan(d: &Dfa, mode: ScanMode) -> Option<Cond2Violation> {
        let an = Analysis::new(d, GraphLimits::default(), Exec::Sequential).unwrap();
        condition2_scan(&an, mode)
    }

    #[test]
    fn identity_letters_pass_both_modes() {
        let d = Dfa::from_letter_maps(3, &[&[0, 1, 2], &[0, 1, 2]]);
        assert_eq!(scan(&d, ScanMode::RightOrIdem), None);
        assert_eq!(scan(&d, ScanMode::Left), None);
    }

    #[test]
    fn undefined_target_counts_as_unreachable() {
        // a: 0 -> 1, undefined on 1; e: identity. The word `a` sends 0 to 1
        // while 1·a does not exist.
        let d = Dfa::from_fn(2, 2, |p, a| match (p, a) {
            (0, 0) => Some(1),
            (1, 0) => None,
            (p, _) => Some(p),
        });
        let v = scan(&d, ScanMode::RightOrIdem).expect("violation");
        assert_eq!((v.p, v.q, v.r, v.s, v.letter), (0, 1, 0, 1, 0));
        assert!(v.word.is_empty());
    }
}
