use std::time::Instant;

use super::{PropertyId, Route, Verdict, Witness};
use crate::automaton::Dfa;
use crate::graph::{
    condition2_scan, shortest_word, triple_sets, Analysis, Cond2Violation, GraphError, GraphLimits,
    ScanMode, TripleKind,
};
use crate::par::Exec;

/// Decides `property` for the transition semigroup of `d` from its graphs.
pub fn decide_graph(
    d: &Dfa,
    property: PropertyId,
    limits: GraphLimits,
    exec: Exec,
) -> Result<Verdict, GraphError> {
    let start = Instant::now();
    let an = Analysis::new(d, limits, exec)?;
    let mut verdict = decide_graph_on(&an, property)?;
    verdict.stats.elapsed_us = start.elapsed().as_micros() as u64;
    Ok(verdict)
}

/// Same as [`decide_graph`] over an existing analysis, so several
/// properties can share the product graphs.
pub fn decide_graph_on(an: &Analysis<'_>, property: PropertyId) -> Result<Verdict, GraphError> {
    let start = Instant::now();
    let witness = match property {
        PropertyId::LocallyIdempotent => loc_idem_witness(an)?,
        PropertyId::RightLT => right_lt_witness(an),
        PropertyId::LeftLT => left_lt_witness(an)?,
    };
    let mut verdict = Verdict::new(property, Route::Graph, witness);
    verdict.stats.nodes_visited = an.product_nodes();
    verdict.stats.elapsed_us = start.elapsed().as_micros() as u64;
    Ok(verdict)
}

pub fn decide_loc_idem_graph(d: &Dfa) -> Result<Verdict, GraphError> {
    decide_graph(d, PropertyId::LocallyIdempotent, GraphLimits::default(), Exec::default())
}

pub fn decide_right_lt_graph(d: &Dfa) -> Result<Verdict, GraphError> {
    decide_graph(d, PropertyId::RightLT, GraphLimits::default(), Exec::default())
}

pub fn decide_left_lt_graph(d: &Dfa) -> Result<Verdict, GraphError> {
    decide_graph(d, PropertyId::LeftLT, GraphLimits::default(), Exec::default())
}

/// Conditions, in order: no distinct `p, q` with `(p, q) ≻ (q, p)`; the
/// right-or-idempotent scan; no `LocId` triple.
fn loc_idem_witness(an: &Analysis<'_>) -> Result<Option<Witness>, GraphError> {
    let n = an.dfa().state_count();
    let pairs = an.pairs();
    let pair_scc = an.pair_scc();

    for p in 0..n {
        for q in 0..n {
            if p != q && pair_scc.same_component(pairs.pair(p, q), pairs.pair(q, p)) {
                let u = shortest_word(pairs, pairs.pair(p, q), pairs.pair(q, p), false)
                    .expect("same component");
                return Ok(Some(Witness::GraphCondition1 {
                    p,
                    q,
                    v: u.clone(),
                    u,
                    cycle: None,
                }));
            }
        }
    }

    if let Some(v) = condition2_scan(an, ScanMode::RightOrIdem) {
        return Ok(Some(cond2_witness(an, ScanMode::RightOrIdem, v)));
    }

    let locid = triple_sets(an, TripleKind::LocId)?;
    if let Some(&(p, q, r)) = locid.members().first() {
        let (cube, _) = an.triples()?;
        let node = cube.triple(p, q, r);
        let cycle = shortest_word(cube, node, node, true).expect("scc-node");
        let word = shortest_word(pairs, pairs.pair(p, q), pairs.pair(q, r), false)
            .expect("member of LocId");
        return Ok(Some(Witness::GraphCondition3 {
            kind: TripleKind::LocId,
            p,
            q,
            r,
            cycle,
            word,
            word2: None,
        }));
    }
    Ok(None)
}

/// Conditions, in order: every SCC-node `(p, q)` with `p ∼ q` has `p = q`;
/// the right-or-idempotent scan.
fn right_lt_witness(an: &Analysis<'_>) -> Option<Witness> {
    let d = an.dfa();
    let n = d.state_count();
    let pairs = an.pairs();
    let pair_scc = an.pair_scc();
    let reach = an.reach();

    for p in 0..n {
        for q in 0..n {
            let node = pairs.pair(p, q);
            if p != q && pair_scc.on_cycle(node) && reach.equivalent(p, q) {
                let cycle = shortest_word(pairs, node, node, true).expect("scc-node");
                let u = shortest_word(d, p, q, false).expect("p ∼ q");
                let v = shortest_word(d, q, p, false).expect("p ∼ q");
                return Some(Witness::GraphCondition1 {
                    p,
                    q,
                    u,
                    v,
                    cycle: Some(cycle),
                });
            }
        }
    }
    condition2_scan(an, ScanMode::RightOrIdem).map(|v| cond2_witness(an, ScanMode::RightOrIdem, v))
}

/// Conditions, in order: local idempotency; the two-sided scan; no SCC-node
/// `(p, u, v)` with both `(p, u, v)` and `(p, v, u)` in `Left`.
fn left_lt_witness(an: &Analysis<'_>) -> Result<Option<Witness>, GraphError> {
    if let Some(w) = loc_idem_witness(an)? {
        return Ok(Some(w));
    }
    if let Some(v) = condition2_scan(an, ScanMode::Left) {
        return Ok(Some(cond2_witness(an, ScanMode::Left, v)));
    }
    let left = triple_sets(an, TripleKind::Left)?;
    let pairs = an.pairs();
    for &(p, q, r) in left.members() {
        if left.contains(p, r, q) {
            let (cube, _) = an.triples()?;
            let node = cube.triple(p, q, r);
            let cycle = shortest_word(cube, node, node, true).expect("scc-node");
            let word = shortest_word(pairs, pairs.pair(p, q), pairs.pair(r, q), false)
                .expect("member of Left");
            let word2 = shortest_word(pairs, pairs.pair(p, r), pairs.pair(q, r), false)
                .expect("member of Left");
            return Ok(Some(Witness::GraphCondition3 {
                kind: TripleKind::Left,
                p,
                q,
                r,
                cycle,
                word,
                word2: Some(word2),
            }));
        }
    }
    Ok(None)
}

fn cond2_witness(an: &Analysis<'_>, mode: ScanMode, v: Cond2Violation) -> Witness {
    let pairs = an.pairs();
    let root = pairs.pair(v.p, v.q);
    let cycle = shortest_word(pairs, root, root, true).expect("scan roots are scc-nodes");
    Witness::GraphCondition2 {
        mode,
        p: v.p,
        q: v.q,
        cycle,
        word: v.word,
        r: v.r,
        s: v.s,
        letter: v.letter,
    }
}
