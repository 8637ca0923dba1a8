//! Path-consistent DFS trees, one per chain.
//!
//! Each tree is a DFS from the first vertex of its chain over `G` plus the
//! consecutive chain edges. Every vertex explores its chain successor first
//! and its other successors by ascending id. Because this child order is a
//! fixed property of the vertex, two trees that share a vertex agree on how
//! it reaches everything below it, and a chain's vertices always appear as
//! one consecutive run on any root path.

use crate::chain::ChainCover;
use crate::error::Result;
use crate::graph::DiGraph;
use crate::scalar::Weight;

pub(crate) const NIL: u32 = u32::MAX;

/// One DFS tree. Nodes are numbered in preorder; node 0 is the root.
#[derive(Clone, Debug)]
pub struct DfsTree {
    pub chain: usize,
    pub vertex: Vec<u32>,
    pub parent: Vec<u32>,
    pub children: Vec<Vec<u32>>,
    /// Number of distinct chains on the path from the root, inclusive.
    pub depth: Vec<u32>,
    /// Vertex → node, or `NIL`.
    pub index: Vec<u32>,
}

impl DfsTree {
    pub fn len(&self) -> usize {
        self.vertex.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertex.is_empty()
    }

    pub fn node_of(&self, v: usize) -> Option<usize> {
        let i = self.index[v];
        (i != NIL).then_some(i as usize)
    }

    pub fn contains(&self, v: usize) -> bool {
        self.index[v] != NIL
    }

    /// Vertices from the root down to `v`.
    pub fn root_path(&self, v: usize) -> Option<Vec<usize>> {
        let mut i = self.node_of(v)?;
        let mut p = vec![self.vertex[i] as usize];
        while self.parent[i] != NIL {
            i = self.parent[i] as usize;
            p.push(self.vertex[i] as usize);
        }
        p.reverse();
        Some(p)
    }

    /// Tree path from `u` down to `v`, if `u` is an ancestor of `v`.
    pub fn path(&self, u: usize, v: usize) -> Option<Vec<usize>> {
        let p = self.root_path(v)?;
        let at = p.iter().position(|&x| x == u)?;
        Some(p[at..].to_vec())
    }
}

/// The trees `T^C` for every chain, plus the cover they were built from.
#[derive(Clone, Debug)]
pub struct DfsForest {
    pub cover: ChainCover,
    pub trees: Vec<DfsTree>,
    /// Normalized depth the trees are cut at, if truncated.
    pub truncated: Option<usize>,
    /// `finder[c * n + v]`: the last vertex of chain `c` that reaches `v`.
    finder: Vec<u32>,
}

/// Successor lists in exploration order: chain successor first, then the
/// remaining successors by id.
fn exploration_order<W: Weight>(g: &DiGraph<W>, cover: &ChainCover) -> Vec<Vec<u32>> {
    (0..g.n())
        .map(|x| {
            let next = cover.position(x).and_then(|(c, p)| cover.chain(c).get(p + 1).copied());
            let mut rest: Vec<u32> = g.successors(x).filter(|&y| Some(y) != next).map(|y| y as u32).collect();
            rest.sort_unstable();
            rest.dedup();
            next.map(|y| y as u32).into_iter().chain(rest).collect()
        })
        .collect()
}

fn dfs_tree(order: &[Vec<u32>], cover: &ChainCover, c: usize) -> DfsTree {
    let n = order.len();
    let root = cover.chain(c)[0];
    let mut t = DfsTree {
        chain: c,
        vertex: vec![root as u32],
        parent: vec![NIL],
        children: vec![Vec::new()],
        depth: vec![1],
        index: vec![NIL; n],
    };
    t.index[root] = 0;
    // Stack of (node, next successor slot).
    let mut stack = vec![(0usize, 0usize)];
    while let Some(&(i, k)) = stack.last() {
        let x = t.vertex[i] as usize;
        let Some(&y) = order[x].get(k) else {
            stack.pop();
            continue;
        };
        stack.last_mut().expect("nonempty").1 += 1;
        let y = y as usize;
        if t.index[y] != NIL {
            continue;
        }
        let j = t.vertex.len();
        let cy = cover.chain_of(y);
        let fresh = cy.is_some() && cy != cover.chain_of(x);
        t.vertex.push(y as u32);
        t.parent.push(i as u32);
        t.children.push(Vec::new());
        t.depth.push(t.depth[i] + u32::from(fresh));
        t.children[i].push(j as u32);
        t.index[y] = j as u32;
        stack.push((j, 0));
    }
    t
}

/// Builds `T^C` for every chain of `cover`.
pub fn consistent_dfs<W: Weight>(g: &DiGraph<W>, cover: &ChainCover) -> Result<DfsForest> {
    g.require_acyclic()?;
    if cover.n() != g.n() {
        return Err(crate::error::Error::param("cover and graph disagree on the vertex count"));
    }
    let order = exploration_order(g, cover);
    let trees: Vec<DfsTree> = (0..cover.len()).map(|c| dfs_tree(&order, cover, c)).collect();
    let n = g.n();
    let mut finder = vec![NIL; cover.len() * n];
    for (c, t) in trees.iter().enumerate() {
        // Preorder: a parent is resolved before its children.
        let mut spine = vec![NIL; t.len()];
        for i in 0..t.len() {
            let v = t.vertex[i];
            spine[i] = if cover.chain_of(v as usize) == Some(c) {
                v
            } else {
                spine[t.parent[i] as usize]
            };
            finder[c * n + v as usize] = spine[i];
        }
    }
    Ok(DfsForest {
        cover: cover.clone(),
        trees,
        truncated: None,
        finder,
    })
}

impl DfsForest {
    pub fn n(&self) -> usize {
        self.cover.n()
    }

    pub fn tree(&self, c: usize) -> &DfsTree {
        &self.trees[c]
    }

    /// The vertex `v′` of chain `c` whose subtree in `T^c` holds `v`.
    pub fn tree_finder(&self, v: usize, c: usize) -> Option<usize> {
        let x = self.finder[c * self.n() + v];
        (x != NIL).then_some(x as usize)
    }

    /// Drops every node whose root path touches more than `d` chains.
    pub fn truncate(&self, d: usize) -> DfsForest {
        let n = self.n();
        let trees = self
            .trees
            .iter()
            .map(|t| {
                let mut out = DfsTree {
                    chain: t.chain,
                    vertex: Vec::new(),
                    parent: Vec::new(),
                    children: Vec::new(),
                    depth: Vec::new(),
                    index: vec![NIL; n],
                };
                let mut map = vec![NIL; t.len()];
                for i in 0..t.len() {
                    if t.depth[i] as usize > d {
                        continue;
                    }
                    let j = out.vertex.len() as u32;
                    map[i] = j;
                    let p = if t.parent[i] == NIL { NIL } else { map[t.parent[i] as usize] };
                    out.vertex.push(t.vertex[i]);
                    out.parent.push(p);
                    out.children.push(Vec::new());
                    out.depth.push(t.depth[i]);
                    out.index[t.vertex[i] as usize] = j;
                    if p != NIL {
                        out.children[p as usize].push(j);
                    }
                }
                out
            })
            .collect();
        DfsForest {
            cover: self.cover.clone(),
            trees,
            truncated: Some(d),
            finder: self.finder.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{chain_cover, split_chains};
    use crate::reach::{transitive_closure, ReachMatrix};
    use crate::testutil::{layered, path, random_dag};

    /// Checks the three consistency properties against the closure.
    fn check(f: &DfsForest, reach: &ReachMatrix) -> std::result::Result<(), String> {
        let cover = &f.cover;
        let n = f.n();
        for (c, t) in f.trees.iter().enumerate() {
            for &u in cover.chain(c) {
                for v in 0..n {
                    if !reach.reaches(u, v) {
                        continue;
                    }
                    // (1) a tree path from u to v.
                    let Some(p) = t.path(u, v) else {
                        return Err(format!("T^{c}: no path {u} -> {v}"));
                    };
                    // (3) every chain forms one run.
                    let mut seen: Vec<usize> = Vec::new();
                    for (i, &x) in p.iter().enumerate() {
                        if let Some(cx) = cover.chain_of(x) {
                            let cont = i > 0 && cover.chain_of(p[i - 1]) == Some(cx);
                            if !cont {
                                if seen.contains(&cx) {
                                    return Err(format!("T^{c}: chain {cx} split on {p:?}"));
                                }
                                seen.push(cx);
                            }
                        }
                    }
                    // (2) suffixes from any chain vertex are paths of that chain's tree.
                    for (i, &w) in p.iter().enumerate() {
                        if let Some(cw) = cover.chain_of(w) {
                            if f.trees[cw].path(w, v).as_deref() != Some(&p[i..]) {
                                return Err(format!("T^{c}: suffix from {w} of {p:?} not in T^{cw}"));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    #[test]
    fn single_chain_path() {
        let g = path(6);
        let cover = chain_cover(&g, 1).unwrap();
        let f = consistent_dfs(&g, &cover).unwrap();
        assert_eq!(f.tree(0).vertex, vec![0, 1, 2, 3, 4, 5]);
        assert_eq!(f.tree(0).parent, vec![NIL, 0, 1, 2, 3, 4]);
    }

    #[test]
    fn two_chains_fixture() {
        let g = DiGraph::<u64>::from_pairs(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let cover = ChainCover::new(4, 2, vec![vec![0, 1], vec![2, 3]]).unwrap();
        let f = consistent_dfs(&g, &cover).unwrap();
        assert_eq!(f.tree(0).root_path(3), Some(vec![0, 1, 2, 3]));
        assert_eq!(f.tree(0).depth, vec![1, 1, 2, 2]);
        assert_eq!(f.tree(1).vertex, vec![2, 3]);
        assert_eq!(f.tree_finder(3, 0), Some(1));
        assert_eq!(f.tree_finder(0, 1), None);
        check(&f, &transitive_closure(&g)).unwrap();
    }

    #[test]
    fn properties_hold_exhaustively() {
        for seed in 0..30 {
            let n = 16 + (seed as usize * 7) % 49;
            let g = if seed % 2 == 0 { random_dag(n, 0.12, seed) } else { layered(n, 6, 0.3, seed) };
            let ell = 2 + seed as usize % 6;
            let cover = split_chains(&chain_cover(&g, ell).unwrap(), 4);
            let f = consistent_dfs(&g, &cover).unwrap();
            check(&f, &transitive_closure(&g)).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        }
    }

    #[test]
    fn finder_is_last_reaching_vertex() {
        let g = random_dag(40, 0.1, 3);
        let cover = split_chains(&chain_cover(&g, 5).unwrap(), 3);
        let reach = transitive_closure(&g);
        let f = consistent_dfs(&g, &cover).unwrap();
        for c in 0..cover.len() {
            for v in 0..40 {
                let want = cover.chain(c).iter().rev().find(|&&x| reach.reaches(x, v)).copied();
                assert_eq!(f.tree_finder(v, c), want);
            }
        }
    }

    #[test]
    fn truncation_bounds_chain_count() {
        let g = random_dag(50, 0.1, 9);
        let cover = split_chains(&chain_cover(&g, 6).unwrap(), 3);
        let f = consistent_dfs(&g, &cover).unwrap();
        let whole = f.truncate(cover.len());
        for (a, b) in f.trees.iter().zip(&whole.trees) {
            assert_eq!(a.vertex, b.vertex);
        }
        for d in 1..4 {
            let t = f.truncate(d);
            for tree in &t.trees {
                for &v in &tree.vertex {
                    let p = tree.root_path(v as usize).unwrap();
                    let mut chains: Vec<usize> = p.iter().filter_map(|&x| cover.chain_of(x)).collect();
                    chains.dedup();
                    assert!(chains.len() <= d);
                }
            }
            // D = 1 keeps the chain itself and nothing from other chains.
            if d == 1 {
                for (c, tree) in t.trees.iter().enumerate() {
                    assert!(tree.vertex.iter().all(|&v| cover.chain_of(v as usize).map_or(true, |x| x == c)));
                }
            }
        }
    }
}
