//! Deciding right local testability, left local testability and local
//! idempotency for partial deterministic automata and finite semigroups.
//!
//! Three independent routes are provided: polynomial conditions on the
//! automaton's product graphs ([`decide::decide_graph`]), a structural test
//! on an explicit semigroup ([`decide::decide_semigroup`]) and a brute-force
//! identity check ([`decide::oracle`]). Every negative verdict carries a
//! witness that [`decide::verify_witness`] re-checks from first principles.

pub mod automaton;
pub mod decide;
pub mod graph;
pub mod harness;
pub mod par;
pub mod semigroup;

pub use automaton::{parse_dfa, Dfa, DfaParseError, RawDfa, Word};
pub use decide::{
    decide_graph, decide_semigroup, oracle, verify_witness, Instance, PropertyId, Route, Verdict, Witness,
};
pub use graph::{GraphError, GraphLimits};
pub use par::Exec;
pub use semigroup::{
    parse_cayley, transition_semigroup, FiniteSemigroup, Semigroup, SemigroupError, TransitionSemigroup,
};
