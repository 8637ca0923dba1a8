//! Transitive closure as per-source bitsets.

use crate::graph::DiGraph;
use crate::scalar::Weight;
use crate::scc::strongly_connected_components;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReachMatrix {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl ReachMatrix {
    /// Reflexive relation with no other pairs.
    pub fn identity(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        let mut r = Self {
            n,
            words,
            bits: vec![0; n * words],
        };
        for u in 0..n {
            r.set(u, u);
        }
        r
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn reaches(&self, u: usize, v: usize) -> bool {
        self.bits[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    #[inline]
    fn set(&mut self, u: usize, v: usize) {
        self.bits[u * self.words + v / 64] |= 1 << (v % 64);
    }

    pub fn row(&self, u: usize) -> &[u64] {
        &self.bits[u * self.words..(u + 1) * self.words]
    }

    /// Vertices reachable from `u`, including `u`, in increasing order.
    pub fn reachable_from(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(u).iter().enumerate().flat_map(|(w, &word)| {
            let mut x = word;
            std::iter::from_fn(move || {
                if x == 0 {
                    return None;
                }
                let b = x.trailing_zeros() as usize;
                x &= x - 1;
                Some(w * 64 + b)
            })
        })
    }

    /// Number of ordered pairs `(u, v)` with `u != v` and `v` reachable from `u`.
    pub fn pair_count(&self) -> usize {
        let total: usize = self.bits.iter().map(|w| w.count_ones() as usize).sum();
        total - self.n
    }

    /// All closure pairs with `u != v`, in lexicographic order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            self.reachable_from(u)
                .filter(move |&v| v != u)
                .map(move |v| (u, v))
        })
    }
}

/// Reachability of every vertex, computed on the condensation so cyclic graphs
/// cost no more than DAGs.
pub fn transitive_closure<W: Weight>(g: &DiGraph<W>) -> ReachMatrix {
    let n = g.n();
    let sccs = strongly_connected_components(g);
    let mut r = ReachMatrix::identity(n);
    let words = r.words;
    let mut comp_bits = vec![0u64; sccs.count() * words];
    // Components are numbered topologically, so sinks come last.
    for c in (0..sccs.count()).rev() {
        let mut acc = vec![0u64; words];
        for &u in sccs.members(c) {
            acc[u / 64] |= 1 << (u % 64);
            for v in g.successors(u) {
                let d = sccs.component(v);
                if d != c {
                    for (a, b) in acc.iter_mut().zip(&comp_bits[d * words..(d + 1) * words]) {
                        *a |= *b;
                    }
                }
            }
        }
        comp_bits[c * words..(c + 1) * words].copy_from_slice(&acc);
    }
    for u in 0..n {
        let c = sccs.component(u);
        r.bits[u * words..(u + 1) * words].copy_from_slice(&comp_bits[c * words..(c + 1) * words]);
    }
    r
}
