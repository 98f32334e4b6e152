use fixedbitset::FixedBitSet;

use crate::automaton::{Dfa, Word};

const NONE: u32 = u32::MAX;

/// A directed graph whose out-edges are addressed by a small label index.
///
/// Automata and their products expose one edge per letter; plain adjacency
/// lists use the position in the list as the label.
pub trait LabeledGraph {
    fn node_count(&self) -> usize;
    fn label_count(&self) -> usize;
    fn step(&self, node: usize, label: usize) -> Option<usize>;
}

impl LabeledGraph for Dfa {
    fn node_count(&self) -> usize {
        self.state_count()
    }

    fn label_count(&self) -> usize {
        self.letter_count()
    }

    fn step(&self, node: usize, label: usize) -> Option<usize> {
        Dfa::step(self, node, label)
    }
}

/// Adjacency-list graph.
#[derive(Clone, Debug, Default)]
pub struct DiGraph {
    adj: Vec<Vec<usize>>,
    max_degree: usize,
}

impl DiGraph {
    pub fn new(nodes: usize) -> Self {
        DiGraph {
            adj: vec![Vec::new(); nodes],
            max_degree: 0,
        }
    }

    pub fn from_edges(nodes: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = DiGraph::new(nodes);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn add_edge(&mut self, from: usize, to: usize) {
        assert!(from < self.adj.len() && to < self.adj.len());
        self.adj[from].push(to);
        self.max_degree = self.max_degree.max(self.adj[from].len());
    }
}

impl LabeledGraph for DiGraph {
    fn node_count(&self) -> usize {
        self.adj.len()
    }

    fn label_count(&self) -> usize {
        self.max_degree
    }

    fn step(&self, node: usize, label: usize) -> Option<usize> {
        self.adj[node].get(label).copied()
    }
}

/// Strongly connected components of a graph with their condensation.
///
/// Component ids are assigned in the order Tarjan's algorithm completes
/// them, which is a reverse topological order of the condensation: every
/// condensation edge goes from a larger id to a smaller one.
#[derive(Clone, Debug)]
pub struct SccIndex {
    comp: Vec<u32>,
    components: usize,
    on_cycle: FixedBitSet,
    succ_offsets: Vec<u32>,
    succ: Vec<u32>,
}

impl SccIndex {
    pub fn component_count(&self) -> usize {
        self.components
    }

    #[inline]
    pub fn component(&self, node: usize) -> usize {
        self.comp[node] as usize
    }

    pub fn same_component(&self, u: usize, v: usize) -> bool {
        self.comp[u] == self.comp[v]
    }

    /// True iff the node lies on a cycle: reachable from itself by a
    /// nonempty path.
    #[inline]
    pub fn on_cycle(&self, node: usize) -> bool {
        self.on_cycle.contains(node)
    }

    /// Condensation successors of a component, ascending.
    pub fn successors(&self, component: usize) -> &[u32] {
        let lo = self.succ_offsets[component] as usize;
        let hi = self.succ_offsets[component + 1] as usize;
        &self.succ[lo..hi]
    }

    pub fn node_count(&self) -> usize {
        self.comp.len()
    }
}

/// Iterative Tarjan over any [`LabeledGraph`].
pub fn scc<G: LabeledGraph + ?Sized>(g: &G) -> SccIndex {
    let n = g.node_count();
    let labels = g.label_count();
    assert!(n < NONE as usize, "graph too large for 32-bit node ids");
    let mut index = vec![NONE; n];
    let mut low = vec![0u32; n];
    let mut comp = vec![NONE; n];
    let mut on_stack = FixedBitSet::with_capacity(n);
    let mut on_cycle = FixedBitSet::with_capacity(n);
    let mut stack: Vec<u32> = Vec::new();
    let mut frames: Vec<(u32, u32)> = Vec::new();
    let mut counter = 0u32;
    let mut components = 0u32;

    for root in 0..n {
        if index[root] != NONE {
            continue;
        }
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root as u32);
        on_stack.insert(root);
        frames.push((root as u32, 0));

        while let Some(frame) = frames.last_mut() {
            let v = frame.0 as usize;
            if (frame.1 as usize) < labels {
                let label = frame.1 as usize;
                frame.1 += 1;
                let Some(w) = g.step(v, label) else { continue };
                if w == v {
                    on_cycle.insert(v);
                } else if index[w] == NONE {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w as u32);
                    on_stack.insert(w);
                    frames.push((w as u32, 0));
                } else if on_stack.contains(w) {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            frames.pop();
            if let Some(&(parent, _)) = frames.last() {
                let parent = parent as usize;
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let start = stack.iter().rposition(|&x| x as usize == v).expect("root on stack");
                let size = stack.len() - start;
                for &x in &stack[start..] {
                    let x = x as usize;
                    on_stack.set(x, false);
                    comp[x] = components;
                    if size > 1 {
                        on_cycle.insert(x);
                    }
                }
                stack.truncate(start);
                components += 1;
            }
        }
    }

    let components = components as usize;
    // Group nodes by component (counting sort), then collect distinct
    // successor components with a last-seen marker.
    let mut offsets = vec![0u32; components + 1];
    for &c in &comp {
        offsets[c as usize + 1] += 1;
    }
    for c in 0..components {
        offsets[c + 1] += offsets[c];
    }
    let mut fill = offsets.clone();
    let mut members = vec![0u32; n];
    for (v, &c) in comp.iter().enumerate() {
        members[fill[c as usize] as usize] = v as u32;
        fill[c as usize] += 1;
    }
    let mut seen = vec![NONE; components];
    let mut succ_offsets = Vec::with_capacity(components + 1);
    let mut succ = Vec::new();
    succ_offsets.push(0u32);
    for c in 0..components {
        let start = succ.len();
        for &v in &members[offsets[c] as usize..offsets[c + 1] as usize] {
            for label in 0..labels {
                if let Some(w) = g.step(v as usize, label) {
                    let cw = comp[w];
                    if cw as usize != c && seen[cw as usize] != c as u32 {
                        seen[cw as usize] = c as u32;
                        succ.push(cw);
                    }
                }
            }
        }
        succ[start..].sort_unstable();
        succ_offsets.push(succ.len() as u32);
    }

    SccIndex {
        comp,
        components,
        on_cycle,
        succ_offsets,
        succ,
    }
}

/// Reflexive-transitive reachability `u ⪰ v` over a graph, stored per
/// component.
#[derive(Clone, Debug)]
pub struct ReachTable {
    scc: SccIndex,
    reach: Vec<FixedBitSet>,
}

impl ReachTable {
    /// True iff `to` is reachable from `from` by a possibly empty path.
    #[inline]
    pub fn reaches(&self, from: usize, to: usize) -> bool {
        self.reach[self.scc.component(from)].contains(self.scc.component(to))
    }

    /// Mutual reachability.
    pub fn equivalent(&self, u: usize, v: usize) -> bool {
        self.scc.same_component(u, v)
    }

    pub fn scc(&self) -> &SccIndex {
        &self.scc
    }

    pub fn node_count(&self) -> usize {
        self.scc.node_count()
    }
}

/// Reachability by set union along the condensation in reverse
/// topological order.
pub fn reach_table<G: LabeledGraph + ?Sized>(g: &G) -> ReachTable {
    let scc = scc(g);
    reach_from_scc(scc)
}

pub fn reach_from_scc(scc: SccIndex) -> ReachTable {
    let k = scc.component_count();
    let mut reach: Vec<FixedBitSet> = Vec::with_capacity(k);
    for c in 0..k {
        let mut set = FixedBitSet::with_capacity(k);
        set.insert(c);
        for &d in scc.successors(c) {
            // d < c, already final
            set.union_with(&reach[d as usize]);
        }
        reach.push(set);
    }
    ReachTable { scc, reach }
}

/// Shortest word (BFS, labels ascending) leading from `from` to `to`.
/// With `nonempty`, a path of at least one edge is required even when
/// `from == to`.
pub fn shortest_word<G: LabeledGraph + ?Sized>(
    g: &G,
    from: usize,
    to: usize,
    nonempty: bool,
) -> Option<Word> {
    if from == to && !nonempty {
        return Some(Word::empty());
    }
    let n = g.node_count();
    // Parent pointers form a tree hanging off a virtual root placed before
    // the first edge, so `from` itself may be revisited as an inner node.
    const ROOT: u32 = NONE - 1;
    let mut parent = vec![NONE; n];
    let mut via = vec![0u32; n];
    let mut queue = std::collections::VecDeque::new();
    let mut visit = |v: usize, p: u32, label: usize, queue: &mut std::collections::VecDeque<usize>| {
        if parent[v] == NONE {
            parent[v] = p;
            via[v] = label as u32;
            queue.push_back(v);
        }
    };
    for label in 0..g.label_count() {
        if let Some(v) = g.step(from, label) {
            visit(v, ROOT, label, &mut queue);
        }
    }
    while let Some(u) = queue.pop_front() {
        if u == to {
            break;
        }
        for label in 0..g.label_count() {
            if let Some(v) = g.step(u, label) {
                visit(v, u as u32, label, &mut queue);
            }
        }
    }
    if parent[to] == NONE {
        return None;
    }
    let mut letters = Vec::new();
    let mut x = to;
    loop {
        letters.push(via[x] as usize);
        match parent[x] {
            ROOT => break,
            p => x = p as usize,
        }
    }
    letters.reverse();
    Some(Word(letters))
}
