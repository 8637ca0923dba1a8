//! Path cover and stickiness diagnostics for shortcut-mode potentials.

use crate::dist::{all_dist, union_adjacency, HopMatrix, INF};
use crate::error::{Error, Result};
use crate::graph::{DiGraph, ShortcutSet};
use crate::scalar::Weight;

/// Lexicographically smallest shortest path for every pair of `G ∪ H`.
/// These are consistent: the canonical path between two vertices of a
/// canonical path is its subpath.
pub struct CanonicalPaths {
    succ: Vec<Vec<usize>>,
    d: HopMatrix,
}

impl CanonicalPaths {
    pub fn dist(&self, s: usize, t: usize) -> u32 {
        self.d.get(s, t)
    }

    pub fn path(&self, s: usize, t: usize) -> Option<Vec<usize>> {
        if self.d.get(s, t) == INF {
            return None;
        }
        let mut p = vec![s];
        let mut x = s;
        while x != t {
            let want = self.d.get(x, t) - 1;
            x = *self.succ[x]
                .iter()
                .find(|&&y| self.d.get(y, t) == want)
                .expect("a shortest path continues");
            p.push(x);
        }
        Some(p)
    }
}

pub fn canonical_paths<W: Weight>(g: &DiGraph<W>, h: &ShortcutSet<W>) -> CanonicalPaths {
    let mut succ: Vec<Vec<usize>> = union_adjacency(g, h)
        .into_iter()
        .map(|row| row.into_iter().map(|(v, _)| v).collect())
        .collect();
    for row in &mut succ {
        row.sort_unstable();
        row.dedup();
    }
    CanonicalPaths { succ, d: all_dist(g, h) }
}

/// Paths of at most `β/4` nodes, each owning at least `β/8` nodes that no
/// earlier path contains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathCoverQ {
    pub beta: usize,
    pub paths: Vec<Vec<usize>>,
    pub owned: Vec<Vec<usize>>,
}

impl PathCoverQ {
    /// Size limits, ownership, disjointness, and `|Q| ≤ 8n/β`.
    pub fn check(&self, n: usize) -> bool {
        let mut seen = vec![false; n];
        for (p, own) in self.paths.iter().zip(&self.owned) {
            if 4 * p.len() > self.beta || 8 * own.len() < self.beta {
                return false;
            }
            for &v in own {
                if !p.contains(&v) || std::mem::replace(&mut seen[v], true) {
                    return false;
                }
            }
        }
        self.paths.len() * self.beta <= 8 * n
    }
}

/// Builds the cover from canonical paths in lexicographic pair order. One
/// pass suffices: the number of unowned nodes on a path only shrinks, so a
/// path rejected once stays ineligible.
pub fn path_cover_q<W: Weight>(g: &DiGraph<W>, h: &ShortcutSet<W>, beta: usize) -> PathCoverQ {
    let n = g.n();
    let cp = canonical_paths(g, h);
    let mut owned_by = vec![false; n];
    let mut q = PathCoverQ {
        beta,
        paths: Vec::new(),
        owned: Vec::new(),
    };
    for s in 0..n {
        for t in 0..n {
            let d = cp.dist(s, t);
            if s == t || d == INF || 4 * (d as usize + 1) > beta {
                continue;
            }
            let p = cp.path(s, t).expect("reachable");
            let fresh: Vec<usize> = p.iter().copied().filter(|&v| !owned_by[v]).collect();
            if 8 * fresh.len() >= beta && !fresh.is_empty() {
                for &v in &fresh {
                    owned_by[v] = true;
                }
                q.paths.push(p);
                q.owned.push(fresh);
            }
        }
    }
    q
}

/// Average size of `suffix(π) ∩ q*` over pairs `(π, q)` that intersect,
/// where `π` ranges over canonical paths of active pairs and the suffix is
/// the last `⌊|π|/4⌋` nodes.
pub fn stickiness<W: Weight>(g: &DiGraph<W>, h: &ShortcutSet<W>, beta: usize, q: &PathCoverQ) -> Result<f64> {
    let n = g.n();
    let cp = canonical_paths(g, h);
    let mut owner = vec![usize::MAX; n];
    for (i, own) in q.owned.iter().enumerate() {
        for &v in own {
            owner[v] = i;
        }
    }
    let mut any_active = false;
    let (mut num, mut den) = (0u64, 0u64);
    let mut per_q = vec![0u64; q.paths.len()];
    for s in 0..n {
        for t in 0..n {
            let d = cp.dist(s, t);
            if s == t || d == INF || (d as usize) < beta {
                continue;
            }
            any_active = true;
            let p = cp.path(s, t).expect("reachable");
            let k = p.len() / 4;
            let mut hit = Vec::new();
            for &v in &p[p.len() - k..] {
                if owner[v] != usize::MAX {
                    if per_q[owner[v]] == 0 {
                        hit.push(owner[v]);
                    }
                    per_q[owner[v]] += 1;
                }
            }
            for i in hit {
                num += per_q[i];
                den += 1;
                per_q[i] = 0;
            }
        }
    }
    if !any_active {
        return Err(Error::NoActivePairs);
    }
    if den == 0 {
        return Err(Error::EmptyIntersection);
    }
    Ok(num as f64 / den as f64)
}
