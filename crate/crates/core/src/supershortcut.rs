//! Hopbound-4 shortcutting of paths and of every chain in a chain cover.

use std::collections::VecDeque;

use crate::chain::ChainCover;
use crate::graph::{DiGraph, ShortcutSet};
use crate::scalar::Weight;

/// Which path construction to use.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PathScheme {
    /// Recursive blocks, hopbound 4, `O(k log* k)` edges.
    #[default]
    Blocks,
    /// Divide and conquer through midpoints, hopbound 2, `O(k log k)` edges.
    BinaryLift,
}

/// Forward edges `(i, j)`, `i + 1 < j`, over positions `0..k` of a path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathShortcutPlan {
    pub k: usize,
    pub edges: Vec<(usize, usize)>,
}

impl PathShortcutPlan {
    /// Hop distances from position `i` using plan edges plus consecutive
    /// positions. Entries before `i` are `u32::MAX`.
    pub fn hops_from(&self, i: usize) -> Vec<u32> {
        let adj = self.adjacency();
        forward_bfs(&adj, i)
    }

    /// Maximum over `i < j` of the hop distance from `i` to `j`.
    pub fn diameter(&self) -> u32 {
        let adj = self.adjacency();
        (0..self.k)
            .map(|i| forward_bfs(&adj, i)[i..].iter().copied().max().unwrap_or(0))
            .max()
            .unwrap_or(0)
    }

    /// Maximum hop distance from the given sources to every later position.
    pub fn eccentricity_from(&self, sources: impl IntoIterator<Item = usize>) -> u32 {
        let adj = self.adjacency();
        sources
            .into_iter()
            .map(|i| forward_bfs(&adj, i)[i..].iter().copied().max().unwrap_or(0))
            .max()
            .unwrap_or(0)
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.k];
        for i in 1..self.k {
            adj[i - 1].push(i);
        }
        for &(i, j) in &self.edges {
            adj[i].push(j);
        }
        adj
    }
}

fn forward_bfs(adj: &[Vec<usize>], s: usize) -> Vec<u32> {
    let mut d = vec![u32::MAX; adj.len()];
    d[s] = 0;
    let mut q = VecDeque::from([s]);
    while let Some(u) = q.pop_front() {
        for &v in &adj[u] {
            if d[v] == u32::MAX {
                d[v] = d[u] + 1;
                q.push_back(v);
            }
        }
    }
    d
}

/// Connects every element of `seq` to and from its midpoint, then recurses on
/// both halves. Any two elements end up within two hops.
fn two_hop(seq: &[usize], out: &mut Vec<(usize, usize)>) {
    if seq.len() <= 2 {
        return;
    }
    let mid = seq.len() / 2;
    let m = seq[mid];
    out.extend(seq[..mid].iter().map(|&x| (x, m)));
    out.extend(seq[mid + 1..].iter().map(|&y| (m, y)));
    two_hop(&seq[..mid], out);
    two_hop(&seq[mid + 1..], out);
}

fn block_size(k: usize) -> usize {
    ((k as f64).log2().ceil() as usize).max(2)
}

/// Blocks of size `B = ⌈log2 k⌉`. Each position links forward to the next
/// block's first position and back from its own block's first position; the
/// block heads get a two-hop structure; blocks recurse. A query crossing
/// blocks goes position → next head → (two hops) → own head → target.
fn blocks(lo: usize, hi: usize, out: &mut Vec<(usize, usize)>) {
    let k = hi - lo;
    if k <= 5 {
        return;
    }
    let b = block_size(k);
    let heads: Vec<usize> = (lo..hi).step_by(b).collect();
    for (bi, &head) in heads.iter().enumerate() {
        let end = (head + b).min(hi);
        for j in head + 1..end {
            out.push((head, j));
        }
        if let Some(&next) = heads.get(bi + 1) {
            for i in head..end {
                out.push((i, next));
            }
        }
        blocks(head, end, out);
    }
    two_hop(&heads, out);
}

fn finish(k: usize, mut edges: Vec<(usize, usize)>) -> PathShortcutPlan {
    edges.retain(|&(i, j)| i + 1 < j);
    edges.sort_unstable();
    edges.dedup();
    PathShortcutPlan { k, edges }
}

/// Plan under which every ordered pair of positions is within four hops.
pub fn shortcut_path_d4(k: usize) -> PathShortcutPlan {
    let mut edges = Vec::new();
    blocks(0, k, &mut edges);
    finish(k, edges)
}

/// Plan under which every ordered pair of positions is within two hops.
pub fn shortcut_path_binarylift(k: usize) -> PathShortcutPlan {
    let mut edges = Vec::new();
    let all: Vec<usize> = (0..k).collect();
    two_hop(&all, &mut edges);
    finish(k, edges)
}

pub fn shortcut_path(k: usize, scheme: PathScheme) -> PathShortcutPlan {
    match scheme {
        PathScheme::Blocks => shortcut_path_d4(k),
        PathScheme::BinaryLift => shortcut_path_binarylift(k),
    }
}

/// Consecutive chain edges missing from `g`, plus each chain's plan mapped to
/// vertex ids. Every ordered on-chain pair ends up within four hops.
pub fn supershortcut<W: Weight>(g: &DiGraph<W>, cover: &ChainCover, scheme: PathScheme) -> ShortcutSet<W> {
    let mut h = ShortcutSet::new(g.n());
    for chain in cover.chains() {
        for w in chain.windows(2) {
            if !g.has_edge(w[0], w[1]) {
                h.insert(w[0], w[1], None);
            }
        }
        for (i, j) in shortcut_path(chain.len(), scheme).edges {
            if !g.has_edge(chain[i], chain[j]) {
                h.insert(chain[i], chain[j], None);
            }
        }
    }
    h
}
