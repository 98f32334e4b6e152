//! Graph machinery over an automaton's transition graph Γ and its direct
//! products Γ² and Γ³.

mod product;
mod scan;
mod scc;
mod triples;

use std::sync::OnceLock;

pub use product::{product, scc_nodes, GraphError, ProductGraph, DEFAULT_PRODUCT_CAP};
pub use scan::{condition2_scan, Cond2Violation, ScanMode};
pub use scc::{reach_from_scc, reach_table, scc, shortest_word, DiGraph, LabeledGraph, ReachTable, SccIndex};
pub use triples::{triple_sets, TripleKind, TripleSet};

use crate::automaton::Dfa;
use crate::par::Exec;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GraphLimits {
    /// Maximum tuple count of any materialized product graph.
    pub product_cap: usize,
}

impl Default for GraphLimits {
    fn default() -> Self {
        GraphLimits {
            product_cap: DEFAULT_PRODUCT_CAP,
        }
    }
}

/// Shared precomputation for the graph deciders: reachability on Γ, Γ² with
/// its components, and Γ³ built on first use.
pub struct Analysis<'a> {
    dfa: &'a Dfa,
    limits: GraphLimits,
    exec: Exec,
    reach: ReachTable,
    pairs: ProductGraph,
    pair_scc: SccIndex,
    triples: OnceLock<Result<(ProductGraph, SccIndex), GraphError>>,
}

impl<'a> Analysis<'a> {
    pub fn new(dfa: &'a Dfa, limits: GraphLimits, exec: Exec) -> Result<Self, GraphError> {
        let reach = reach_table(dfa);
        let pairs = product(dfa, 2, limits.product_cap)?;
        let pair_scc = scc(&pairs);
        Ok(Analysis {
            dfa,
            limits,
            exec,
            reach,
            pairs,
            pair_scc,
            triples: OnceLock::new(),
        })
    }

    pub fn dfa(&self) -> &'a Dfa {
        self.dfa
    }

    pub fn exec(&self) -> Exec {
        self.exec
    }

    /// Reachability on Γ.
    pub fn reach(&self) -> &ReachTable {
        &self.reach
    }

    pub fn pairs(&self) -> &ProductGraph {
        &self.pairs
    }

    pub fn pair_scc(&self) -> &SccIndex {
        &self.pair_scc
    }

    /// Γ³ and its components, built once.
    pub fn triples(&self) -> Result<(&ProductGraph, &SccIndex), GraphError> {
        let built = self.triples.get_or_init(|| {
            let pg = product(self.dfa, 3, self.limits.product_cap)?;
            let index = scc(&pg);
            Ok((pg, index))
        });
        match built {
            Ok((pg, index)) => Ok((pg, index)),
            Err(e) => Err(e.clone()),
        }
    }

    /// Number of product nodes materialized so far.
    pub fn product_nodes(&self) -> u64 {
        let cube = match self.triples.get() {
            Some(Ok((pg, _))) => pg.node_count() as u64,
            _ => 0,
        };
        self.pairs.node_count() as u64 + cube
    }
}
