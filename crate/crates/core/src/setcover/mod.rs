//! Deterministic shortcuts through a set cover of relevant subpaths.
//!
//! A relevant subpath of `T^C` starts at a vertex of `C`, holds no other
//! vertex of `C`, touches exactly `D` chains, and ends on the only vertex of
//! its last chain. In tree terms it ends at a *leaf*: a node at normalized
//! depth `D` that is on a chain and whose parent is not on that chain (for
//! `D = 1` the chain's own vertices). A chosen chain covers every subpath
//! through one of its vertices.
//!
//! The potential `φ^C(v)` counts uncovered relevant subpaths of `T^C` on
//! which `v` is the first vertex of its chain, so it is the number of live
//! leaves below `v` when `v` starts a chain run (the root stands for all of
//! `C`) and zero otherwise. `φ(C′)` sums `φ^C(v)` over `v ∈ C′` and all trees.

mod forest;

pub use forest::{consistent_dfs, DfsForest, DfsTree};

use forest::NIL;

use crate::chain::{chain_cover, entry, split_chains, ChainCover};
use crate::error::{Error, Result};
use crate::graph::{DiGraph, ShortcutSet};
use crate::reach::transitive_closure;
use crate::scalar::Weight;
use crate::scc::condense;
use crate::supershortcut::{supershortcut, PathScheme};

/// Hopbound guaranteed on a DAG for parameter `D`.
///
/// Take a route through at most `2D` uncovered vertices. If the tree path
/// between its first and last chain vertices touches at most `2D` chains it
/// is followed directly; otherwise it jumps from the first `D` chains to the
/// last `D` with one added edge. Either way at most `2D` chain runs are
/// crossed, each in at most four hops plus one to leave, giving `12D - 1`.
pub fn det_bound(d: usize) -> usize {
    12 * d
}

/// Live-leaf counts for every tree and the per-chain totals.
#[derive(Clone, Debug)]
pub struct CoverPotentials {
    forest: DfsForest,
    d: usize,
    leaf: Vec<Vec<bool>>,
    live: Vec<Vec<u32>>,
    alive: Vec<Vec<bool>>,
    total: Vec<u64>,
    picked: Vec<bool>,
}

impl CoverPotentials {
    /// Potentials with nothing covered. The forest is truncated to `d`.
    pub fn new(forest: &DfsForest, d: usize) -> Result<Self> {
        Self::from_scratch(forest, d, &[])
    }

    /// Potentials with the chains in `picked` already chosen.
    pub fn from_scratch(forest: &DfsForest, d: usize, picked: &[usize]) -> Result<Self> {
        if d == 0 {
            return Err(Error::param("D must be at least 1"));
        }
        let forest = match forest.truncated {
            Some(t) if t == d => forest.clone(),
            _ => forest.truncate(d),
        };
        let k = forest.cover.len();
        let mut chosen = vec![false; k];
        for &c in picked {
            if c >= k {
                return Err(Error::param(format!("chain {c} out of range")));
            }
            chosen[c] = true;
        }
        let cover = &forest.cover;
        let mut leaf = Vec::with_capacity(k);
        let mut live = Vec::with_capacity(k);
        let mut alive = Vec::with_capacity(k);
        for t in &forest.trees {
            let size = t.len();
            let mut lf = vec![false; size];
            let mut al = vec![false; size];
            for i in 0..size {
                let v = t.vertex[i] as usize;
                let cv = cover.chain_of(v);
                lf[i] = t.depth[i] as usize == d
                    && match cv {
                        Some(c) if c == t.chain => d == 1,
                        Some(c) => cover.chain_of(t.vertex[t.parent[i] as usize] as usize) != Some(c),
                        None => false,
                    };
                let here = cv.is_some_and(|c| chosen[c]);
                al[i] = !here && (t.parent[i] == NIL || al[t.parent[i] as usize]);
            }
            let mut cnt = vec![0u32; size];
            for i in (0..size).rev() {
                if al[i] && lf[i] {
                    cnt[i] += 1;
                }
                if i > 0 && al[i] {
                    cnt[t.parent[i] as usize] += cnt[i];
                }
            }
            leaf.push(lf);
            live.push(cnt);
            alive.push(al);
        }
        let mut p = CoverPotentials {
            forest,
            d,
            leaf,
            live,
            alive,
            total: vec![0; k],
            picked: chosen,
        };
        for c in 0..k {
            for i in 0..p.forest.trees[c].len() {
                if let Some(owner) = p.counted(c, i) {
                    p.total[owner] += p.live[c][i] as u64;
                }
            }
        }
        Ok(p)
    }

    /// Chain whose potential node `i` of `T^c` contributes to, if any.
    fn counted(&self, c: usize, i: usize) -> Option<usize> {
        let t = &self.forest.trees[c];
        let cover = &self.forest.cover;
        let cv = cover.chain_of(t.vertex[i] as usize)?;
        if i == 0 {
            return Some(cv);
        }
        let cp = cover.chain_of(t.vertex[t.parent[i] as usize] as usize);
        (cv != c && cp != Some(cv)).then_some(cv)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn forest(&self) -> &DfsForest {
        &self.forest
    }

    pub fn cover(&self) -> &ChainCover {
        &self.forest.cover
    }

    /// `φ(C)`.
    pub fn phi(&self, c: usize) -> u64 {
        self.total[c]
    }

    pub fn totals(&self) -> &[u64] {
        &self.total
    }

    /// `φ^c(v)`, zero if `v` is not in the truncated `T^c`.
    pub fn node_phi(&self, c: usize, v: usize) -> u64 {
        match self.forest.trees[c].node_of(v) {
            Some(i) if self.counted(c, i).is_some() => self.live[c][i] as u64,
            _ => 0,
        }
    }

    /// Number of uncovered relevant subpaths originating in `c`.
    pub fn uncovered_from(&self, c: usize) -> u64 {
        if self.forest.trees[c].is_empty() {
            0
        } else {
            self.live[c][0] as u64
        }
    }

    pub fn is_picked(&self, c: usize) -> bool {
        self.picked[c]
    }

    pub fn picked(&self) -> Vec<usize> {
        (0..self.picked.len()).filter(|&c| self.picked[c]).collect()
    }

    /// Whether node `i` of `T^c` is a leaf, i.e. ends a relevant subpath.
    pub fn is_leaf(&self, c: usize, i: usize) -> bool {
        self.leaf[c][i]
    }

    /// Kills the subtree of node `i` in `T^c` and takes its live leaves off
    /// every ancestor.
    fn cut(&mut self, c: usize, i: usize) {
        let k = self.live[c][i];
        let mut a = self.forest.trees[c].parent[i];
        while a != NIL && k > 0 {
            let ai = a as usize;
            self.live[c][ai] -= k;
            if let Some(owner) = self.counted(c, ai) {
                self.total[owner] -= k as u64;
            }
            a = self.forest.trees[c].parent[ai];
        }
        let mut stack = vec![i];
        while let Some(j) = stack.pop() {
            if !self.alive[c][j] {
                continue;
            }
            self.alive[c][j] = false;
            if let Some(owner) = self.counted(c, j) {
                self.total[owner] -= self.live[c][j] as u64;
            }
            self.live[c][j] = 0;
            stack.extend(self.forest.trees[c].children[j].iter().map(|&x| x as usize));
        }
    }

    /// Adds chain `p` to the cover and updates every potential.
    pub fn pick(&mut self, p: usize) -> Result<()> {
        if p >= self.picked.len() {
            return Err(Error::param(format!("chain {p} out of range")));
        }
        if std::mem::replace(&mut self.picked[p], true) {
            return Err(Error::AlreadyPicked(p));
        }
        for c in 0..self.forest.trees.len() {
            if self.forest.trees[c].is_empty() {
                continue;
            }
            if c == p {
                // Every subpath from p starts on p.
                self.cut(c, 0);
                continue;
            }
            for idx in 0..self.forest.cover.chain(p).len() {
                let u = self.forest.cover.chain(p)[idx];
                if let Some(i) = self.forest.trees[c].node_of(u) {
                    if self.alive[c][i] {
                        self.cut(c, i);
                    }
                }
            }
        }
        Ok(())
    }

    /// Same potentials as a fresh computation with the same picks.
    pub fn agrees_with_scratch(&self) -> bool {
        match Self::from_scratch(&self.forest, self.d, &self.picked()) {
            Ok(s) => s.total == self.total && s.live == self.live,
            Err(_) => false,
        }
    }
}

/// Picks the chain of largest `φ` (lowest id on ties) until every relevant
/// subpath is covered. With `oracle_check`, every update is compared against
/// a fresh computation.
pub fn greedy_setcover(pot: &mut CoverPotentials, oracle_check: bool) -> Result<Vec<usize>> {
    let mut order = Vec::new();
    loop {
        let (best, &top) = match pot.totals().iter().enumerate().rev().max_by_key(|&(_, v)| v) {
            Some(x) => x,
            None => break,
        };
        if top == 0 {
            break;
        }
        pot.pick(best)?;
        order.push(best);
        if oracle_check && !pot.agrees_with_scratch() {
            return Err(Error::param(format!("potentials diverged from recomputation after picking chain {best}")));
        }
    }
    Ok(order)
}

#[derive(Clone, Copy, Debug)]
pub struct DetConfig {
    pub d: usize,
    pub scheme: PathScheme,
    pub oracle_check: bool,
}

impl DetConfig {
    pub fn new(d: usize) -> Self {
        DetConfig {
            d,
            scheme: PathScheme::default(),
            oracle_check: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct DetOutput<W> {
    pub shortcuts: ShortcutSet<W>,
    pub bound: usize,
    /// Chains after splitting.
    pub chains: usize,
    /// Chosen chains in pick order.
    pub picked: Vec<usize>,
}

pub fn det_shortcut<W: Weight>(g: &DiGraph<W>, d: usize) -> Result<DetOutput<W>> {
    det_shortcut_with(g, &DetConfig::new(d))
}

/// Cover with `⌈n/D⌉` paths split to length at most `⌈n/ℓ⌉`, supershortcut
/// the chains, then connect every vertex of a chosen chain to its entry on
/// every other chosen chain.
pub fn det_shortcut_with<W: Weight>(g: &DiGraph<W>, cfg: &DetConfig) -> Result<DetOutput<W>> {
    let d = cfg.d;
    if d == 0 {
        return Err(Error::param("D must be at least 1"));
    }
    let (cd, _) = condense(g);
    let dag = &cd.dag;
    let k = dag.n();
    if k <= 1 {
        return Ok(DetOutput {
            shortcuts: cd.lift(&ShortcutSet::new(k)),
            bound: cd.lifted_bound(1),
            chains: k,
            picked: Vec::new(),
        });
    }
    let ell = k.div_ceil(d);
    let cover = split_chains(&chain_cover(dag, ell)?, k.div_ceil(ell));
    let mut h = supershortcut(dag, &cover, cfg.scheme);
    let forest = consistent_dfs(dag, &cover)?;
    let mut pot = CoverPotentials::new(&forest, d)?;
    let picked = greedy_setcover(&mut pot, cfg.oracle_check)?;
    let reach = transitive_closure(dag);
    for &a in &picked {
        for &v in cover.chain(a) {
            for &b in &picked {
                if b == a {
                    continue;
                }
                if let Some(y) = entry(&reach, v, cover.chain(b)) {
                    h.insert(v, y, None);
                }
            }
        }
    }
    Ok(DetOutput {
        shortcuts: cd.lift(&h),
        bound: cd.lifted_bound(det_bound(d)),
        chains: cover.len(),
        picked,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::validate_shortcut_set;
    use crate::testutil::{layered, path, random_dag, random_digraph};
    use proptest::prelude::*;

    /// Every relevant subpath of every tree, found by walking all downward
    /// tree paths from each chain vertex and checking the definition.
    fn relevant_subpaths(f: &DfsForest, d: usize) -> Vec<(usize, Vec<usize>)> {
        let cover = &f.cover;
        let mut out = Vec::new();
        for (c, t) in f.trees.iter().enumerate() {
            for &s in cover.chain(c) {
                let Some(root) = t.node_of(s) else { continue };
                let mut stack = vec![vec![root]];
                while let Some(nodes) = stack.pop() {
                    let p: Vec<usize> = nodes.iter().map(|&i| t.vertex[i] as usize).collect();
                    let from_c = p.iter().filter(|&&x| cover.chain_of(x) == Some(c)).count();
                    let mut chains: Vec<usize> = p.iter().filter_map(|&x| cover.chain_of(x)).collect();
                    chains.sort_unstable();
                    chains.dedup();
                    if from_c > 1 || chains.len() > d {
                        continue;
                    }
                    let last = *p.last().unwrap();
                    if chains.len() == d {
                        if let Some(cl) = cover.chain_of(last) {
                            if p.iter().filter(|&&x| cover.chain_of(x) == Some(cl)).count() == 1 {
                                out.push((c, p.clone()));
                            }
                        }
                    }
                    for &ch in &t.children[*nodes.last().unwrap()] {
                        let mut next = nodes.clone();
                        next.push(ch as usize);
                        stack.push(next);
                    }
                }
            }
        }
        out
    }

    fn covered(p: &[usize], cover: &ChainCover, picked: &[usize]) -> bool {
        p.iter().any(|&x| cover.chain_of(x).is_some_and(|c| picked.contains(&c)))
    }

    /// Checks `φ^C(v)` and `φ(C)` against the enumeration.
    fn check_against_enumeration(pot: &CoverPotentials, full: &DfsForest, picked: &[usize]) {
        let cover = &full.cover;
        let subs: Vec<_> = relevant_subpaths(full, pot.d())
            .into_iter()
            .filter(|(_, p)| !covered(p, cover, picked))
            .collect();
        for c in 0..cover.len() {
            let want = subs.iter().filter(|(_, p)| p.iter().any(|&x| cover.chain_of(x) == Some(c))).count();
            assert_eq!(pot.phi(c), want as u64, "φ({c}) with picks {picked:?}");
            assert_eq!(pot.uncovered_from(c), subs.iter().filter(|(o, _)| *o == c).count() as u64);
        }
        for t in 0..cover.len() {
            for v in 0..cover.n() {
                let Some(cv) = cover.chain_of(v) else { continue };
                // The root speaks for its whole chain.
                let (got, want) = if cv == t {
                    let first = v == cover.chain(t)[0];
                    let all = subs.iter().filter(|(o, _)| *o == t).count() as u64;
                    (pot.node_phi(t, v), if first { all } else { 0 })
                } else {
                    let want = subs
                        .iter()
                        .filter(|(o, p)| *o == t && p.iter().find(|&&x| cover.chain_of(x) == Some(cv)) == Some(&v))
                        .count() as u64;
                    (pot.node_phi(t, v), want)
                };
                assert_eq!(got, want, "φ^{t}({v}) with picks {picked:?}");
            }
        }
    }

    #[test]
    fn two_chains_fixture() {
        let g = DiGraph::<u64>::from_pairs(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let cover = ChainCover::new(4, 2, vec![vec![0, 1], vec![2, 3]]).unwrap();
        let f = consistent_dfs(&g, &cover).unwrap();
        let pot = CoverPotentials::new(&f, 2).unwrap();
        // One relevant subpath: 1 -> 2 in T^0.
        assert_eq!(pot.totals(), &[1, 1]);
        assert_eq!(pot.node_phi(0, 0), 1);
        assert_eq!(pot.node_phi(0, 2), 1);
        assert_eq!(pot.node_phi(0, 3), 0);
        let mut second = pot.clone();
        second.pick(1).unwrap();
        assert_eq!(second.totals(), &[0, 0]);
        let mut p = pot.clone();
        assert_eq!(greedy_setcover(&mut p, true).unwrap(), vec![0]);
        assert_eq!(p.totals(), &[0, 0]);
        assert!(matches!(p.pick(0), Err(Error::AlreadyPicked(0))));
        // D = 1: each chain covers its own vertices.
        let one = CoverPotentials::new(&f, 1).unwrap();
        assert_eq!(one.totals(), &[2, 2]);
    }

    #[test]
    fn potentials_match_enumeration_while_picking() {
        for seed in 0..16 {
            let n = 20 + seed as usize * 3;
            let g = if seed % 2 == 0 { random_dag(n, 0.1, seed) } else { layered(n, 5, 0.3, seed) };
            let cover = split_chains(&chain_cover(&g, 3 + seed as usize % 4).unwrap(), 3);
            let f = consistent_dfs(&g, &cover).unwrap();
            for d in 1..=3 {
                let mut pot = CoverPotentials::new(&f, d).unwrap();
                let mut picked = Vec::new();
                check_against_enumeration(&pot, &f, &picked);
                while let Some(best) = (0..cover.len()).filter(|&c| pot.phi(c) > 0).max_by_key(|&c| (pot.phi(c), std::cmp::Reverse(c))) {
                    pot.pick(best).unwrap();
                    picked.push(best);
                    check_against_enumeration(&pot, &f, &picked);
                    assert!(pot.agrees_with_scratch());
                }
                assert!(relevant_subpaths(&f, d).iter().all(|(_, p)| covered(p, &cover, &picked)));
            }
        }
    }

    #[test]
    fn greedy_picks_lowest_id_on_ties() {
        // Two disjoint two-chain gadgets with identical potentials.
        let g = DiGraph::<u64>::from_pairs(8, [(0, 1), (1, 2), (2, 3), (4, 5), (5, 6), (6, 7)]).unwrap();
        let cover = ChainCover::new(8, 4, vec![vec![0, 1], vec![2, 3], vec![4, 5], vec![6, 7]]).unwrap();
        let f = consistent_dfs(&g, &cover).unwrap();
        let mut pot = CoverPotentials::new(&f, 2).unwrap();
        assert_eq!(greedy_setcover(&mut pot, true).unwrap(), vec![0, 2]);
    }

    #[test]
    fn short_cover_needs_no_picks() {
        let g = path(30);
        let cover = ChainCover::new(30, 1, vec![(0..30).collect()]).unwrap();
        let f = consistent_dfs(&g, &cover).unwrap();
        let mut pot = CoverPotentials::new(&f, 2).unwrap();
        assert!(greedy_setcover(&mut pot, false).unwrap().is_empty());
    }

    #[test]
    fn rejects_bad_parameters() {
        let g = path(5);
        assert!(det_shortcut(&g, 0).is_err());
        let cover = ChainCover::new(5, 1, vec![(0..5).collect()]).unwrap();
        let f = consistent_dfs(&g, &cover).unwrap();
        assert!(CoverPotentials::new(&f, 0).is_err());
        let mut pot = CoverPotentials::new(&f, 1).unwrap();
        assert!(pot.pick(3).is_err());
    }

    #[test]
    fn tiny_inputs() {
        for n in 0..3 {
            let out = det_shortcut(&path(n), 2).unwrap();
            assert!(validate_shortcut_set(&path(n), &out.shortcuts, out.bound).valid);
        }
    }

    #[test]
    fn cyclic_inputs_are_condensed() {
        let g = random_digraph(40, 0.06, 4);
        let out = det_shortcut(&g, 3).unwrap();
        assert!(validate_shortcut_set(&g, &out.shortcuts, out.bound).valid);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn output_meets_bound(n in 8usize..60, p in 0.03f64..0.3, d in 1usize..6, seed in 0u64..1000) {
            let g = random_dag(n, p, seed);
            let out = det_shortcut_with(&g, &DetConfig { oracle_check: true, ..DetConfig::new(d) }).unwrap();
            let rep = validate_shortcut_set(&g, &out.shortcuts, out.bound);
            prop_assert!(rep.valid, "{:?}", rep.failure);
            let reach = transitive_closure(&g);
            for (u, v) in out.shortcuts.pairs() {
                prop_assert!(reach.reaches(u, v) && u != v);
            }
        }
    }
}
