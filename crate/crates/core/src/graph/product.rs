use thiserror::Error;

use super::scc::{LabeledGraph, SccIndex};
use crate::automaton::Dfa;

const NONE: u32 = u32::MAX;

/// Default bound on the number of product tuples materialized.
pub const DEFAULT_PRODUCT_CAP: usize = 2_000_000;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("instance too large: product of arity {arity} has {nodes} nodes, cap is {cap}")]
    TooLarge { arity: usize, nodes: u128, cap: usize },
}

/// The direct product of `arity` copies of an automaton's transition graph.
///
/// Node `(p₁, …, pₖ)` is stored at the mixed-radix index
/// `p₁·nᵏ⁻¹ + … + pₖ`. An edge on letter σ exists iff every component has a
/// σ-transition.
#[derive(Clone, Debug)]
pub struct ProductGraph {
    arity: usize,
    base_states: usize,
    letters: usize,
    edges: Vec<u32>,
}

impl ProductGraph {
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn base_states(&self) -> usize {
        self.base_states
    }

    pub fn encode(&self, tuple: &[usize]) -> usize {
        debug_assert_eq!(tuple.len(), self.arity);
        tuple.iter().fold(0, |acc, &p| acc * self.base_states + p)
    }

    pub fn decode(&self, node: usize) -> Vec<usize> {
        let mut tuple = vec![0; self.arity];
        let mut rest = node;
        for slot in tuple.iter_mut().rev() {
            *slot = rest % self.base_states;
            rest /= self.base_states;
        }
        tuple
    }

    #[inline]
    pub fn pair(&self, p: usize, q: usize) -> usize {
        p * self.base_states + q
    }

    #[inline]
    pub fn triple(&self, p: usize, q: usize, r: usize) -> usize {
        (p * self.base_states + q) * self.base_states + r
    }
}

impl LabeledGraph for ProductGraph {
    fn node_count(&self) -> usize {
        self.edges.len() / self.letters
    }

    fn label_count(&self) -> usize {
        self.letters
    }

    #[inline]
    fn step(&self, node: usize, label: usize) -> Option<usize> {
        let t = self.edges[node * self.letters + label];
        (t != NONE).then_some(t as usize)
    }
}

/// Builds `Γ^arity`. Fails when the tuple count exceeds `cap`.
pub fn product(d: &Dfa, arity: usize, cap: usize) -> Result<ProductGraph, GraphError> {
    assert!(arity >= 1, "arity must be positive");
    let n = d.state_count();
    let m = d.letter_count();
    let nodes = (n as u128).checked_pow(arity as u32).unwrap_or(u128::MAX);
    if nodes > cap as u128 || nodes >= NONE as u128 {
        return Err(GraphError::TooLarge { arity, nodes, cap });
    }
    let nodes = nodes as usize;
    let mut edges = vec![NONE; nodes * m];
    let mut tuple = vec![0usize; arity];
    for node in 0..nodes {
        for a in 0..m {
            let mut target = 0usize;
            let mut defined = true;
            for &p in &tuple {
                match d.step(p, a) {
                    Some(q) => target = target * n + q,
                    None => {
                        defined = false;
                        break;
                    }
                }
            }
            if defined {
                edges[node * m + a] = target as u32;
            }
        }
        // odometer, last component fastest
        for slot in tuple.iter_mut().rev() {
            *slot += 1;
            if *slot < n {
                break;
            }
            *slot = 0;
        }
    }
    Ok(ProductGraph {
        arity,
        base_states: n,
        letters: m,
        edges,
    })
}

/// Tuples lying on a cycle of the product graph, ascending.
pub fn scc_nodes(pg: &ProductGraph, index: &SccIndex) -> Vec<Vec<usize>> {
    (0..pg.node_count())
        .filter(|&v| index.on_cycle(v))
        .map(|v| pg.decode(v))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::scc::scc;

    #[test]
    fn two_cycle_square() {
        let d = Dfa::from_letter_maps(2, &[&[1, 0]]);
        let pg = product(&d, 2, 100).unwrap();
        assert_eq!(pg.node_count(), 4);
        assert_eq!(pg.step(pg.pair(0, 1), 0), Some(pg.pair(1, 0)));
        let nodes = scc_nodes(&pg, &scc(&pg));
        assert_eq!(nodes, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn partiality_removes_product_edges() {
        let d = Dfa::from_fn(2, 1, |p, _| (p == 0).then_some(0));
        let pg = product(&d, 2, 100).unwrap();
        assert_eq!(pg.step(pg.pair(0, 1), 0), None);
        assert_eq!(pg.step(pg.pair(0, 0), 0), Some(0));
    }

    #[test]
    fn cube_counts() {
        let d = Dfa::from_letter_maps(3, &[&[1, 2, 0], &[0, 0, 1]]);
        let pg = product(&d, 3, 100).unwrap();
        assert_eq!(pg.node_count(), 27);
        for v in 0..27 {
            for a in 0..2 {
                let t = pg.decode(v);
                let expected: Vec<usize> = t.iter().map(|&p| d.step(p, a).unwrap()).collect();
                assert_eq!(pg.decode(pg.step(v, a).unwrap()), expected);
            }
        }
        assert_eq!(pg.encode(&[2, 1, 0]), pg.triple(2, 1, 0));
    }

    #[test]
    fn acyclic_path_has_no_scc_nodes() {
        let d = Dfa::from_fn(2, 1, |p, _| (p == 0).then_some(1));
        let pg = product(&d, 2, 100).unwrap();
        assert!(scc_nodes(&pg, &scc(&pg)).is_empty());
    }

    #[test]
    fn identity_letter_makes_everything_an_scc_node() {
        let d = Dfa::from_letter_maps(3, &[&[1, 1, 2], &[0, 1, 2]]);
        let pg = product(&d, 3, 100).unwrap();
        assert_eq!(scc_nodes(&pg, &scc(&pg)).len(), 27);
    }

    #[test]
    fn cap_is_enforced() {
        let d = Dfa::from_fn(20, 1, |p, _| Some(p));
        assert_eq!(
            product(&d, 3, 7999).unwrap_err(),
            GraphError::TooLarge { arity: 3, nodes: 8000, cap: 7999 }
        );
        assert!(product(&d, 3, 8000).is_ok());
    }
}
