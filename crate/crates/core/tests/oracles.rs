//! Library results checked against brute-force computations written here
//! from the definitions, sharing no code with the implementation.

use std::collections::VecDeque;

use loctest::automaton::Dfa;
use loctest::decide::{oracle, shared_unit, Identity, PropertyId, Witness};
use loctest::graph::{
    condition2_scan, product, reach_table, scc, scc_nodes, triple_sets, Analysis, GraphLimits, ScanMode,
    TripleKind,
};
use loctest::harness::{enumerate_dfas, random_dfa, GenSpec};
use loctest::par::Exec;
use loctest::semigroup::{
    idempotents, transition_semigroup, FiniteSemigroup, Opposite, Semigroup, SemigroupError, Side,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_suite(states: usize, letters: usize, completeness: f64, seed: u64, count: usize) -> Vec<Dfa> {
    random_dfa(&GenSpec { states, letters, completeness, seed, count }).collect()
}

/// Boolean adjacency matrix of the `arity`-fold product, built from `step`.
fn product_matrix(d: &Dfa, arity: usize) -> (Vec<Vec<usize>>, Vec<Vec<bool>>) {
    let n = d.state_count();
    let mut tuples: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..arity {
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |s| {
                    let mut t = t.clone();
                    t.push(s);
                    t
                })
            })
            .collect();
    }
    let index = |t: &[usize]| t.iter().fold(0, |acc, &s| acc * n + s);
    let mut adj = vec![vec![false; tuples.len()]; tuples.len()];
    for (i, t) in tuples.iter().enumerate() {
        for a in 0..d.letter_count() {
            let next: Option<Vec<usize>> = t.iter().map(|&s| d.step(s, a)).collect();
            if let Some(next) = next {
                adj[i][index(&next)] = true;
            }
        }
    }
    (tuples, adj)
}

/// Reflexive-transitive closure by repeated boolean squaring.
fn closure_by_squaring(adj: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let k = adj.len();
    let mut r: Vec<Vec<bool>> = (0..k)
        .map(|i| (0..k).map(|j| i == j || adj[i][j]).collect())
        .collect();
    loop {
        let mut next = r.clone();
        for (i, row) in r.iter().enumerate() {
            for (m, &via) in row.iter().enumerate() {
                if via {
                    for (j, &hop) in r[m].iter().enumerate() {
                        next[i][j] |= hop;
                    }
                }
            }
        }
        if next == r {
            return r;
        }
        r = next;
    }
}

/// Nodes reachable from themselves by at least one edge.
fn self_reaching(adj: &[Vec<bool>]) -> Vec<bool> {
    let k = adj.len();
    (0..k)
        .map(|start| {
            let mut seen = vec![false; k];
            let mut queue: VecDeque<usize> = (0..k).filter(|&j| adj[start][j]).collect();
            for &j in &queue {
                seen[j] = true;
            }
            while let Some(u) = queue.pop_front() {
                for v in 0..k {
                    if adj[u][v] && !seen[v] {
                        seen[v] = true;
                        queue.push_back(v);
                    }
                }
            }
            seen[start]
        })
        .collect()
}

#[test]
fn reachability_matches_matrix_squaring() {
    let mut instances = random_suite(7, 2, 0.8, 11, 40);
    instances.extend(random_suite(5, 3, 1.0, 12, 40));
    instances.extend(random_suite(3, 2, 0.6, 13, 40));
    for d in &instances {
        for arity in [1, 2] {
            let (_, adj) = product_matrix(d, arity);
            if adj.len() > 50 {
                continue;
            }
            let naive = closure_by_squaring(&adj);
            let table = if arity == 1 {
                reach_table(d)
            } else {
                reach_table(&product(d, 2, 1_000).unwrap())
            };
            for (u, row) in naive.iter().enumerate() {
                for (v, &expected) in row.iter().enumerate() {
                    assert_eq!(table.reaches(u, v), expected, "{d}\narity {arity}: {u} ⪰ {v}");
                    assert_eq!(table.equivalent(u, v), expected && naive[v][u]);
                }
            }
        }
    }
}

#[test]
fn scc_nodes_match_self_reachability() {
    for d in random_suite(4, 2, 0.85, 21, 60) {
        for arity in [2, 3] {
            let pg = product(&d, arity, 1_000).unwrap();
            let index = scc(&pg);
            let (tuples, adj) = product_matrix(&d, arity);
            let expected: Vec<Vec<usize>> = tuples
                .iter()
                .zip(self_reaching(&adj))
                .filter(|(_, on)| *on)
                .map(|(t, _)| t.clone())
                .collect();
            assert_eq!(scc_nodes(&pg, &index), expected, "{d}");
        }
    }
}

/// Word-quantified form of the condition-2 scan. For every pair `(p, q)`
/// on a cycle of Γ² with `p ⪰ q`, every word `w` of length below `n²` is
/// tried; an undefined image never reaches `q`. Extensions of words where
/// neither image reaches `q` are pruned, as they can never reach it again.
fn cond2_by_words(d: &Dfa, mode: ScanMode) -> bool {
    let n = d.state_count();
    let (_, adj1) = product_matrix(d, 1);
    let reach = closure_by_squaring(&adj1);
    let (_, adj2) = product_matrix(d, 2);
    let on_cycle = self_reaching(&adj2);
    let reaches_q = |s: Option<usize>, q: usize| s.is_some_and(|s| reach[s][q]);
    for p in 0..n {
        for q in 0..n {
            if !reach[p][q] || !on_cycle[p * n + q] {
                continue;
            }
            let mut frontier = vec![(Some(p), Some(q))];
            for _ in 0..=n * n {
                let mut next = Vec::new();
                for &(r, s) in &frontier {
                    let (a, b) = (reaches_q(r, q), reaches_q(s, q));
                    let bad = match mode {
                        ScanMode::RightOrIdem => a && !b,
                        ScanMode::Left => a != b,
                    };
                    if bad {
                        return false;
                    }
                    if !a && !b {
                        continue;
                    }
                    for letter in 0..d.letter_count() {
                        next.push((r.and_then(|r| d.step(r, letter)), s.and_then(|s| d.step(s, letter))));
                    }
                }
                frontier = next;
            }
        }
    }
    true
}

fn check_scan_against_words(d: &Dfa) {
    let an = Analysis::new(d, GraphLimits::default(), Exec::Sequential).unwrap();
    for mode in [ScanMode::RightOrIdem, ScanMode::Left] {
        let found = condition2_scan(&an, mode);
        assert_eq!(found.is_none(), cond2_by_words(d, mode), "{d}\nmode {mode:?}: {found:?}");
        if let Some(v) = found {
            // the reported violation is genuine
            assert_eq!(d.apply(v.p, &v.word), Some(v.r));
            assert_eq!(d.apply(v.q, &v.word), Some(v.s));
        }
    }
}

#[test]
fn condition2_scan_matches_word_enumeration_exhaustively() {
    for states in 1..=3 {
        for letters in 1..=2 {
            for d in enumerate_dfas(states, letters, false) {
                check_scan_against_words(&d);
            }
        }
    }
}

#[test]
fn condition2_scan_matches_word_enumeration_on_four_states() {
    let mut instances = random_suite(4, 2, 1.0, 31, 60);
    instances.extend(random_suite(4, 2, 0.75, 32, 60));
    instances.extend(random_suite(4, 1, 0.9, 33, 30));
    for d in &instances {
        check_scan_against_words(d);
    }
}

/// Triple sets from the definition over the full Γ² reachability table.
fn naive_triples(d: &Dfa, kind: TripleKind) -> Vec<(usize, usize, usize)> {
    let n = d.state_count();
    let (_, adj2) = product_matrix(d, 2);
    let reach2 = closure_by_squaring(&adj2);
    let (_, adj3) = product_matrix(d, 3);
    let cyc3 = self_reaching(&adj3);
    let mut out = Vec::new();
    for p in 0..n {
        for q in 0..n {
            for r in 0..n {
                if p == q || q == r || p == r || !cyc3[(p * n + q) * n + r] {
                    continue;
                }
                let target = match kind {
                    TripleKind::LocId => q * n + r,
                    TripleKind::Left => r * n + q,
                };
                if reach2[p * n + q][target] {
                    out.push((p, q, r));
                }
            }
        }
    }
    out
}

#[test]
fn triple_sets_match_definition() {
    let mut instances: Vec<Dfa> = enumerate_dfas(3, 1, false).collect();
    instances.extend(random_suite(5, 2, 1.0, 41, 30));
    instances.extend(random_suite(5, 3, 0.85, 42, 30));
    instances.extend(random_suite(4, 2, 0.9, 43, 40));
    // identity letters guarantee cycles in Γ³
    instances.extend(random_suite(5, 2, 0.9, 44, 30).into_iter().map(|d| {
        Dfa::from_fn(5, 3, |p, a| if a == 2 { Some(p) } else { d.step(p, a) })
    }));
    let mut nonempty = 0;
    for d in &instances {
        let an = Analysis::new(d, GraphLimits::default(), Exec::Sequential).unwrap();
        for kind in [TripleKind::LocId, TripleKind::Left] {
            let got = triple_sets(&an, kind).unwrap();
            let expected = naive_triples(d, kind);
            nonempty += usize::from(!expected.is_empty());
            assert_eq!(got.members(), &expected[..], "{d}\n{kind:?}");
        }
    }
    assert!(nonempty > 20, "suite too weak: {nonempty}");
}

fn d3() -> Dfa {
    // a: 0→1, 1→1; b: 1→2, 2→2; e: identity
    Dfa::from_fn(3, 3, |p, letter| match (letter, p) {
        (0, 0 | 1) => Some(1),
        (1, 1 | 2) => Some(2),
        (2, _) => Some(p),
        _ => None,
    })
}

#[test]
fn d3_by_brute_force() {
    let d = d3();
    check_scan_against_words(&d);
    let an = Analysis::new(&d, GraphLimits::default(), Exec::Sequential).unwrap();
    for kind in [TripleKind::LocId, TripleKind::Left] {
        assert_eq!(triple_sets(&an, kind).unwrap().members(), &naive_triples(&d, kind)[..]);
    }
    // (0,1) only moves to (1,1), (1,2) and (2,2) is unreachable: (0,1,2)
    // is an SCC-node via e but (0,1) never reaches (1,2).
    assert!(naive_triples(&d, TripleKind::LocId).is_empty());
    // the Left scan fails on the root (0,2) with letter a: 0·a = 1 ⪰ 2
    // while 2·a is undefined
    assert!(!cond2_by_words(&d, ScanMode::Left));
    let v = condition2_scan(&an, ScanMode::Left).unwrap();
    assert_eq!((v.p, v.q, v.r, v.s, v.letter), (0, 2, 0, 2, 0));
    // and the transition semigroup agrees that every property fails
    let s = transition_semigroup(&d, 1_000).unwrap();
    for p in PropertyId::ALL {
        assert!(!oracle(&s, p).holds);
    }
}

#[test]
fn first_associativity_violation_of_small_table() {
    let rows = vec![vec![1, 0], vec![0, 0]];
    let mul = |a: usize, b: usize| rows[a][b];
    let mut first = None;
    'outer: for i in 0..2 {
        for j in 0..2 {
            for l in 0..2 {
                if mul(mul(i, j), l) != mul(i, mul(j, l)) {
                    first = Some((i, j, l));
                    break 'outer;
                }
            }
        }
    }
    assert_eq!(first, Some((0, 0, 1)));
    match FiniteSemigroup::from_rows(&rows).unwrap_err() {
        SemigroupError::NotAssociative { i, j, l, .. } => assert_eq!((i, j, l), (0, 0, 1)),
        e => panic!("unexpected {e}"),
    }
}

/// The `{1, e, i}` monoid with `{e, i}` right-zero.
fn m3() -> FiniteSemigroup {
    FiniteSemigroup::from_rows(&[vec![0, 1, 2], vec![1, 1, 2], vec![2, 1, 2]]).unwrap()
}

#[test]
fn m3_by_identities() {
    let s = m3();
    // right-zero law on {e, i} and the identity element
    for x in [1, 2] {
        for y in [1, 2] {
            assert_eq!(s.mul(x, y), y);
        }
    }
    for x in 0..3 {
        assert_eq!((s.mul(0, x), s.mul(x, 0)), (x, x));
    }
    // 1 is an idempotent with 1·S·1 = S, so the identities must hold on all of S
    let right_fails = (0..3).any(|x| (0..3).any(|y| s.mul3(x, y, x) != s.mul(x, y)));
    let left_fails = (0..3).any(|x| (0..3).any(|y| s.mul3(x, y, x) != s.mul(y, x)));
    assert!(right_fails);
    assert!(!left_fails);
    assert!(oracle(&s, PropertyId::LocallyIdempotent).holds);
    assert!(!oracle(&s, PropertyId::RightLT).holds);
    assert!(oracle(&s, PropertyId::LeftLT).holds);
    match oracle(&s, PropertyId::RightLT).witness {
        Some(Witness::SemigroupIdentity { identity: Identity::RightLocal, .. }) => {}
        w => panic!("unexpected {w:?}"),
    }
}

#[test]
fn unit_scan_over_idempotents_only_is_equivalent() {
    let mut checked = 0;
    for d in random_suite(4, 2, 0.85, 51, 300) {
        let s = transition_semigroup(&d, 10_000).unwrap();
        for side in [Side::Right, Side::Left] {
            assert_eq!(
                shared_unit(&s, side, false).is_some(),
                shared_unit(&s, side, true).is_some(),
                "{d}"
            );
            checked += 1;
        }
    }
    assert_eq!(checked, 600);
}

#[test]
fn transition_semigroup_is_the_word_action() {
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    for d in random_suite(5, 3, 0.8, 62, 60) {
        let n = d.state_count();
        let s = transition_semigroup(&d, 100_000).unwrap();
        assert!((s.order() as u128) <= (n as u128 + 1).pow(n as u32));
        // element words are distinct actions
        let actions: std::collections::HashSet<Vec<Option<usize>>> =
            s.words().iter().map(|w| d.action(w)).collect();
        assert_eq!(actions.len(), s.order());
        for _ in 0..30 {
            let len = rng.gen_range(1..=8);
            let w: Vec<usize> = (0..len).map(|_| rng.gen_range(0..d.letter_count())).collect();
            let t = s.morphism(&w).expect("every nonempty word has an element");
            assert_eq!(s.action(t), d.action(&w));
            // the morphism is a homomorphism
            let cut = rng.gen_range(1..len.max(2)).min(len);
            if cut < len {
                let (u, v) = w.split_at(cut);
                assert_eq!(s.mul(s.morphism(u).unwrap(), s.morphism(v).unwrap()), t);
            }
        }
        let op = Opposite(&s);
        assert_eq!(idempotents(&op), idempotents(&s));
    }
}

#[test]
fn two_cycle_semigroup_by_enumeration() {
    let d = Dfa::from_letter_maps(2, &[&[1, 0]]);
    let mut maps: Vec<Vec<Option<usize>>> = Vec::new();
    for w in [vec![0], vec![0, 0]] {
        let a = d.action(&w);
        if !maps.contains(&a) {
            maps.push(a);
        }
    }
    let s = transition_semigroup(&d, 10).unwrap();
    assert_eq!(s.order(), maps.len());
    for (i, m) in maps.iter().enumerate() {
        assert_eq!(&s.action(i), m);
    }
}

#[test]
fn undefined_images_never_reach_the_target() {
    // a: 0 → 1, undefined on 1; e: identity. e·a·e = a but a·a is the empty
    // map, so local idempotency fails; only a scan that treats the undefined
    // 1·a as "not reaching 1" sees it on the graph side.
    let d = Dfa::from_fn(2, 2, |p, letter| match (letter, p) {
        (0, 0) => Some(1),
        (1, _) => Some(p),
        _ => None,
    });
    let s = transition_semigroup(&d, 100).unwrap();
    let a = s.letter_element(0);
    assert_ne!(s.mul(a, a), a);
    assert!(!oracle(&s, PropertyId::LocallyIdempotent).holds);
    assert!(!cond2_by_words(&d, ScanMode::RightOrIdem));
    let v = loctest::decide::decide_graph(&d, PropertyId::LocallyIdempotent, GraphLimits::default(), Exec::Sequential)
        .unwrap();
    assert!(matches!(v.witness, Some(Witness::GraphCondition2 { p: 0, q: 1, letter: 0, .. })), "{v:?}");
}
