use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use super::scc::LabeledGraph;
use super::{Analysis, GraphError};
use crate::par;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TripleKind {
    /// `(p, q) ⪰ (r, q)` in Γ².
    Left,
    /// `(p, q) ⪰ (q, r)` in Γ².
    LocId,
}

/// Triples `(p, q, r)` with distinct components that are SCC-nodes of Γ³
/// and satisfy the kind's reachability relation in Γ².
#[derive(Clone, Debug)]
pub struct TripleSet {
    kind: TripleKind,
    states: usize,
    members: Vec<(usize, usize, usize)>,
    index: FixedBitSet,
}

impl TripleSet {
    pub fn kind(&self) -> TripleKind {
        self.kind
    }

    /// Members in ascending `(p, q, r)` order.
    pub fn members(&self) -> &[(usize, usize, usize)] {
        &self.members
    }

    pub fn contains(&self, p: usize, q: usize, r: usize) -> bool {
        let n = self.states;
        self.index.contains((p * n + q) * n + r)
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }
}

/// Computes the `Left` or `LocId` triple set.
///
/// For each state `q` on a cycle of Γ, the sets `{r : x ⪰ (q, r)}` (or
/// `{r : x ⪰ (r, q)}`) are accumulated over the condensation of Γ² by
/// union from successors, sinks first. Passes for distinct `q` are
/// independent and run under the analysis' execution strategy.
pub fn triple_sets(an: &Analysis<'_>, kind: TripleKind) -> Result<TripleSet, GraphError> {
    let (cube, cube_scc) = an.triples()?;
    let n = an.dfa().state_count();
    let pairs = an.pairs();
    let pair_scc = an.pair_scc();
    let on_cycle_in_base = an.reach().scc();

    let per_q = par::map_range(an.exec(), n, |q| {
        let mut found = Vec::new();
        if !on_cycle_in_base.on_cycle(q) {
            return found;
        }
        let comps = pair_scc.component_count();
        let mut acc: Vec<FixedBitSet> = Vec::with_capacity(comps);
        for _ in 0..comps {
            acc.push(FixedBitSet::with_capacity(n));
        }
        for r in 0..n {
            let node = match kind {
                TripleKind::LocId => pairs.pair(q, r),
                TripleKind::Left => pairs.pair(r, q),
            };
            acc[pair_scc.component(node)].insert(r);
        }
        for c in 0..comps {
            let (done, rest) = acc.split_at_mut(c);
            for &d in pair_scc.successors(c) {
                rest[0].union_with(&done[d as usize]);
            }
        }
        for p in 0..n {
            if p == q {
                continue;
            }
            let set = &acc[pair_scc.component(pairs.pair(p, q))];
            for r in set.ones() {
                if r != p && r != q && cube_scc.on_cycle(cube.triple(p, q, r)) {
                    found.push((p, q, r));
                }
            }
        }
        found
    });

    let mut members: Vec<(usize, usize, usize)> = per_q.into_iter().flatten().collect();
    members.sort_unstable();
    let mut index = FixedBitSet::with_capacity(cube.node_count());
    for &(p, q, r) in &members {
        index.insert(cube.triple(p, q, r));
    }
    Ok(TripleSet {
        kind,
        states: n,
        members,
        index,
    })
}
