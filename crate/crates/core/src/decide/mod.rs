//! The three properties decided along three independent routes, plus
//! witness re-verification.
//!
//! * graph route: conditions on Γ, Γ² and Γ³ of an automaton;
//! * semigroup route: local idempotency plus the shared-unit test on
//!   maximal zero subsemigroups;
//! * oracle: brute-force identity checks inside every `eSe`.

mod graph;
mod semigroup;
mod verify;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use graph::{
    decide_graph, decide_graph_on, decide_left_lt_graph, decide_loc_idem_graph, decide_right_lt_graph,
};
pub use semigroup::{
    decide_left_lt_semigroup, decide_loc_idem_semigroup, decide_right_lt_semigroup, decide_semigroup,
    oracle, shared_unit,
};
pub use verify::{verify_witness, Instance, WitnessError};

use crate::automaton::Word;
use crate::graph::{ScanMode, TripleKind};
use crate::semigroup::Side;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PropertyId {
    #[serde(rename = "loc-idem")]
    LocallyIdempotent,
    #[serde(rename = "right-lt")]
    RightLT,
    #[serde(rename = "left-lt")]
    LeftLT,
}

impl PropertyId {
    pub const ALL: [PropertyId; 3] = [
        PropertyId::LocallyIdempotent,
        PropertyId::RightLT,
        PropertyId::LeftLT,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PropertyId::LocallyIdempotent => "loc-idem",
            PropertyId::RightLT => "right-lt",
            PropertyId::LeftLT => "left-lt",
        }
    }

    /// The property with left and right exchanged.
    pub fn dual(self) -> PropertyId {
        match self {
            PropertyId::LocallyIdempotent => PropertyId::LocallyIdempotent,
            PropertyId::RightLT => PropertyId::LeftLT,
            PropertyId::LeftLT => PropertyId::RightLT,
        }
    }
}

impl fmt::Display for PropertyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PropertyId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PropertyId::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| format!("unknown property {s:?} (expected loc-idem, right-lt or left-lt)"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    Graph,
    Semigroup,
    Oracle,
}

impl Route {
    pub const ALL: [Route; 3] = [Route::Graph, Route::Semigroup, Route::Oracle];

    pub fn as_str(self) -> &'static str {
        match self {
            Route::Graph => "graph",
            Route::Semigroup => "semigroup",
            Route::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// An element of a semigroup instance, by index and (for automata) by a
/// word inducing it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementRef {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub word: Option<Word>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Identity {
    /// `(exe)² ≠ exe`.
    Idempotent,
    /// `XYX ≠ XY` for `X = exe`, `Y = eye`.
    RightLocal,
    /// `XYX ≠ YX` for `X = exe`, `Y = eye`.
    LeftLocal,
}

/// A certificate that a property fails, checkable with [`verify_witness`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "variant")]
pub enum Witness {
    /// Local idempotency: `(p, q)·u = (q, p)` with `p ≠ q` (and `v = u`).
    /// Right local testability: `(p, q)·cycle = (p, q)`, `p·u = q`,
    /// `q·v = p`, `p ≠ q`.
    GraphCondition1 {
        p: usize,
        q: usize,
        u: Word,
        v: Word,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        cycle: Option<Word>,
    },
    /// `(p, q)·cycle = (p, q)`, `p ⪰ q`, `(p, q)·word = (r, s)`, and the
    /// letter separates `rσ ⪰ q` from `sσ ⪰ q` as forbidden by `mode`.
    GraphCondition2 {
        mode: ScanMode,
        p: usize,
        q: usize,
        cycle: Word,
        word: Word,
        r: usize,
        s: usize,
        letter: usize,
    },
    /// Distinct `p, q, r` with `(p, q, r)·cycle = (p, q, r)` and
    /// `kind = loc-id`: `(p, q)·word = (q, r)`;
    /// `kind = left`: `(p, q)·word = (r, q)` and `(p, r)·word2 = (q, r)`.
    GraphCondition3 {
        kind: TripleKind,
        p: usize,
        q: usize,
        r: usize,
        cycle: Word,
        word: Word,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        word2: Option<Word>,
    },
    SemigroupIdentity {
        identity: Identity,
        e: ElementRef,
        x: ElementRef,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        y: Option<ElementRef>,
    },
    /// Distinct idempotents `e, i` of one side-zero subsemigroup sharing
    /// the side unit `f`.
    UnitSharing {
        side: Side,
        e: ElementRef,
        i: ElementRef,
        f: ElementRef,
    },
}

impl Witness {
    pub fn variant_name(&self) -> &'static str {
        match self {
            Witness::GraphCondition1 { .. } => "GraphCondition1",
            Witness::GraphCondition2 { .. } => "GraphCondition2",
            Witness::GraphCondition3 { .. } => "GraphCondition3",
            Witness::SemigroupIdentity { .. } => "SemigroupIdentity",
            Witness::UnitSharing { .. } => "UnitSharing",
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn w(word: &Word) -> String {
            let parts: Vec<String> = word.iter().map(|a| a.to_string()).collect();
            format!("[{}]", parts.join(","))
        }
        fn el(e: &ElementRef) -> String {
            match (&e.index, &e.word) {
                (Some(i), Some(word)) => format!("{i}{}", w(word)),
                (Some(i), None) => i.to_string(),
                (None, Some(word)) => w(word),
                (None, None) => "?".into(),
            }
        }
        match self {
            Witness::GraphCondition1 { p, q, u, v, cycle } => {
                write!(f, "GraphCondition1 p={p} q={q} u={} v={}", w(u), w(v))?;
                if let Some(c) = cycle {
                    write!(f, " cycle={}", w(c))?;
                }
                Ok(())
            }
            Witness::GraphCondition2 { mode, p, q, cycle, word, r, s, letter } => write!(
                f,
                "GraphCondition2 mode={mode:?} p={p} q={q} cycle={} word={} r={r} s={s} letter={letter}",
                w(cycle),
                w(word)
            ),
            Witness::GraphCondition3 { kind, p, q, r, cycle, word, word2 } => {
                write!(f, "GraphCondition3 kind={kind:?} p={p} q={q} r={r} cycle={} word={}", w(cycle), w(word))?;
                if let Some(w2) = word2 {
                    write!(f, " word2={}", w(w2))?;
                }
                Ok(())
            }
            Witness::SemigroupIdentity { identity, e, x, y } => {
                write!(f, "SemigroupIdentity identity={identity:?} e={} x={}", el(e), el(x))?;
                if let Some(y) = y {
                    write!(f, " y={}", el(y))?;
                }
                Ok(())
            }
            Witness::UnitSharing { side, e, i, f: unit } => write!(
                f,
                "UnitSharing side={side:?} e={} i={} f={}",
                el(e),
                el(i),
                el(unit)
            ),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    pub nodes_visited: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub semigroup_order: Option<usize>,
    pub elapsed_us: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub property: PropertyId,
    pub holds: bool,
    pub route: Route,
    pub witness: Option<Witness>,
    pub stats: Stats,
}

impl Verdict {
    pub(crate) fn new(property: PropertyId, route: Route, witness: Option<Witness>) -> Self {
        Verdict {
            property,
            holds: witness.is_none(),
            route,
            witness,
            stats: Stats::default(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("verdict serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}
