//! Strongly connected components, condensation, and lifting shortcut sets
//! built on the condensation back to the original graph.

use crate::graph::{DiGraph, ShortcutSet};
use crate::scalar::Weight;

/// SCC decomposition with components numbered in topological order: every
/// edge between different components goes from a lower to a higher id.
#[derive(Clone, Debug)]
pub struct Components {
    comp: Vec<usize>,
    members: Vec<Vec<usize>>,
}

impl Components {
    #[inline]
    pub fn count(&self) -> usize {
        self.members.len()
    }

    #[inline]
    pub fn component(&self, v: usize) -> usize {
        self.comp[v]
    }

    /// Members of component `c` in increasing vertex order.
    pub fn members(&self, c: usize) -> &[usize] {
        &self.members[c]
    }

    /// Lowest-id vertex of component `c`.
    pub fn hub(&self, c: usize) -> usize {
        self.members[c][0]
    }

    pub fn is_trivial(&self) -> bool {
        self.members.iter().all(|m| m.len() == 1)
    }
}

/// Iterative Tarjan.
pub fn strongly_connected_components<W: Weight>(g: &DiGraph<W>) -> Components {
    const UNSEEN: usize = usize::MAX;
    let n = g.n();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comp = vec![UNSEEN; n];
    let mut found: Vec<Vec<usize>> = Vec::new();
    let mut next = 0;
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        while let Some(&(u, pos)) = call.last() {
            if pos == 0 && index[u] == UNSEEN {
                index[u] = next;
                low[u] = next;
                next += 1;
                stack.push(u);
                on_stack[u] = true;
            }
            let out = g.out_edges(u);
            if pos < out.len() {
                let v = out[pos].0;
                call.last_mut().expect("nonempty").1 += 1;
                if index[v] == UNSEEN {
                    call.push((v, 0));
                } else if on_stack[v] {
                    low[u] = low[u].min(index[v]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[u]);
            }
            if low[u] == index[u] {
                let id = found.len();
                let mut members = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    comp[w] = id;
                    members.push(w);
                    if w == u {
                        break;
                    }
                }
                members.sort_unstable();
                found.push(members);
            }
        }
    }
    // Tarjan emits components in reverse topological order.
    let k = found.len();
    for c in comp.iter_mut() {
        *c = k - 1 - *c;
    }
    found.reverse();
    Components {
        comp,
        members: found,
    }
}

/// A graph contracted to its strongly connected components.
#[derive(Clone, Debug)]
pub struct CondensedDag<W> {
    pub components: Components,
    /// Unweighted DAG on component ids.
    pub dag: DiGraph<W>,
}

impl<W: Weight> CondensedDag<W> {
    pub fn original_n(&self) -> usize {
        self.components.comp.len()
    }

    /// Maps a shortcut set on the condensation to the original graph: each
    /// edge `(A, B)` becomes `(hub A, hub B)`, and the star edges are added.
    pub fn lift(&self, h: &ShortcutSet<W>) -> ShortcutSet<W> {
        let mut out = star_edges(&self.components);
        for (a, b) in h.pairs() {
            out.insert(self.components.hub(a), self.components.hub(b), None);
        }
        out
    }

    /// Hopbound on the original graph guaranteed by a condensed hopbound `beta`.
    /// Each condensed hop may need two extra hops through a hub, plus two at the end.
    pub fn lifted_bound(&self, beta: usize) -> usize {
        if self.components.is_trivial() {
            beta
        } else {
            3 * beta + 2
        }
    }
}

fn star_edges<W: Weight>(c: &Components) -> ShortcutSet<W> {
    let n = c.comp.len();
    let mut h = ShortcutSet::new(n);
    for members in &c.members {
        let hub = members[0];
        for &x in &members[1..] {
            h.insert(hub, x, None);
            h.insert(x, hub, None);
        }
    }
    h
}

/// Contracts SCCs. Returns the condensation and the star edges that give each
/// nontrivial SCC internal hop-distance at most two.
pub fn condense<W: Weight>(g: &DiGraph<W>) -> (CondensedDag<W>, ShortcutSet<W>) {
    let components = strongly_connected_components(g);
    let k = components.count();
    let mut dag = DiGraph::new(k);
    for (u, v, _) in g.edges() {
        let (a, b) = (components.component(u), components.component(v));
        if a != b && !dag.has_edge(a, b) {
            dag.add_edge(a, b, W::one()).expect("condensed edge is valid");
        }
    }
    let stars = star_edges(&components);
    (CondensedDag { components, dag }, stars)
}
