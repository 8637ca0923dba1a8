//! Path covers, vertex-disjoint chain covers, and chain entry points.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{DiGraph, ShortcutSet};
use crate::reach::ReachMatrix;
use crate::scalar::Weight;
use crate::scc::condense;
use crate::supershortcut::{supershortcut, PathScheme};

/// A multiset of paths in `G`; paths may be empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathMultiset {
    pub n: usize,
    pub paths: Vec<Vec<usize>>,
}

impl PathMultiset {
    pub fn covered(&self) -> Vec<bool> {
        let mut mask = vec![false; self.n];
        for &v in self.paths.iter().flatten() {
            mask[v] = true;
        }
        mask
    }

    pub fn total_len(&self) -> usize {
        self.paths.iter().map(Vec::len).sum()
    }
}

/// Vertex-disjoint chains with a vertex → (chain, position) index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainCover {
    n: usize,
    ell: usize,
    chains: Vec<Vec<usize>>,
    index: Vec<Option<(usize, usize)>>,
}

impl ChainCover {
    /// Builds a cover from explicit chains. Empty chains are dropped.
    pub fn new(n: usize, ell: usize, chains: Vec<Vec<usize>>) -> Result<Self> {
        let chains: Vec<Vec<usize>> = chains.into_iter().filter(|c| !c.is_empty()).collect();
        let mut index = vec![None; n];
        for (id, chain) in chains.iter().enumerate() {
            for (pos, &v) in chain.iter().enumerate() {
                if v >= n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
                if index[v].is_some() {
                    return Err(Error::param(format!("vertex {v} lies on two chains")));
                }
                index[v] = Some((id, pos));
            }
        }
        Ok(Self { n, ell, chains, index })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn ell(&self) -> usize {
        self.ell
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.chains.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.chains.is_empty()
    }

    pub fn chains(&self) -> &[Vec<usize>] {
        &self.chains
    }

    pub fn chain(&self, id: usize) -> &[usize] {
        &self.chains[id]
    }

    /// `(chain id, position)` of `v`, if `v` is covered.
    #[inline]
    pub fn position(&self, v: usize) -> Option<(usize, usize)> {
        self.index[v]
    }

    #[inline]
    pub fn chain_of(&self, v: usize) -> Option<usize> {
        self.index[v].map(|(c, _)| c)
    }

    pub fn covered(&self) -> Vec<bool> {
        self.index.iter().map(Option::is_some).collect()
    }

    pub fn max_chain_len(&self) -> usize {
        self.chains.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Checks that every consecutive pair of every chain is in `reach`.
    pub fn chains_in_closure(&self, reach: &ReachMatrix) -> bool {
        self.chains
            .iter()
            .all(|c| c.windows(2).all(|w| reach.reaches(w[0], w[1])))
    }

    /// Text form: the chain count, then one line of vertex ids per chain.
    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.chains.len());
        for c in &self.chains {
            let line: Vec<String> = c.iter().map(usize::to_string).collect();
            let _ = writeln!(s, "{}", line.join(" "));
        }
        s
    }

    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, head) = lines.next().ok_or_else(|| Error::parse(1, "missing chain count"))?;
        let k: usize = head.trim().parse().map_err(|_| Error::parse(1, "bad chain count"))?;
        let mut chains = Vec::with_capacity(k);
        for (i, line) in lines {
            let chain = line
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| Error::parse(i + 1, format!("bad vertex `{t}`"))))
                .collect::<Result<Vec<usize>>>()?;
            chains.push(chain);
        }
        if chains.len() != k {
            return Err(Error::parse(1, format!("expected {k} chains, found {}", chains.len())));
        }
        Self::new(n, k, chains)
    }
}

/// Picks `ell` paths one at a time, each maximizing the number of vertices
/// not covered by earlier paths. Ties go to the lexicographically smallest
/// vertex sequence, so a path never extends past its last new vertex.
pub fn greedy_ell_cover<W: Weight>(g: &DiGraph<W>, ell: usize) -> Result<PathMultiset> {
    let order = g.require_acyclic()?;
    let n = g.n();
    let mut covered = vec![false; n];
    let mut best = vec![0usize; n];
    let mut paths = Vec::with_capacity(ell);
    for _ in 0..ell {
        for &u in order.iter().rev() {
            let tail = g.successors(u).map(|w| best[w]).max().unwrap_or(0);
            best[u] = usize::from(!covered[u]) + tail;
        }
        let top = best.iter().copied().max().unwrap_or(0);
        let mut path = Vec::new();
        if top > 0 {
            let mut u = (0..n).find(|&v| best[v] == top).expect("maximum is attained");
            loop {
                path.push(u);
                covered[u] = true;
                match best_tail(g, &best, u) {
                    Some(w) => u = w,
                    None => break,
                }
            }
        }
        paths.push(path);
    }
    Ok(PathMultiset { n, paths })
}

/// Smallest successor achieving the maximum positive tail value.
fn best_tail<W: Weight>(g: &DiGraph<W>, best: &[usize], u: usize) -> Option<usize> {
    let top = g.successors(u).map(|w| best[w]).max().unwrap_or(0);
    if top == 0 {
        return None;
    }
    g.successors(u).filter(|&w| best[w] == top).min()
}

/// Keeps each vertex on the first path containing it; the survivors of each
/// path, in path order, form one chain.
pub fn disjoint_chains(cover: &PathMultiset) -> ChainCover {
    let mut taken = vec![false; cover.n];
    let mut chains = Vec::new();
    for p in &cover.paths {
        let chain: Vec<usize> = p.iter().copied().filter(|&v| !std::mem::replace(&mut taken[v], true)).collect();
        chains.push(chain);
    }
    ChainCover::new(cover.n, cover.paths.len(), chains).expect("chains are disjoint by construction")
}

/// Cuts every chain into consecutive pieces of at most `max_len` vertices.
pub fn split_chains(c: &ChainCover, max_len: usize) -> ChainCover {
    let max_len = max_len.max(1);
    let chains = c
        .chains
        .iter()
        .flat_map(|ch| ch.chunks(max_len).map(<[usize]>::to_vec))
        .collect();
    ChainCover::new(c.n, c.ell, chains).expect("splitting preserves disjointness")
}

/// Largest number of uncovered vertices on any path of `g`.
pub fn verify_cover<W: Weight>(g: &DiGraph<W>, covered: &[bool]) -> Result<usize> {
    let order = g.require_acyclic()?;
    let mut best = vec![0usize; g.n()];
    for &u in order.iter().rev() {
        let tail = g.successors(u).map(|w| best[w]).max().unwrap_or(0);
        best[u] = usize::from(!covered[u]) + tail;
    }
    Ok(best.into_iter().max().unwrap_or(0))
}

/// Greedy cover made disjoint: the chain cover used by the pipelines.
pub fn chain_cover<W: Weight>(g: &DiGraph<W>, ell: usize) -> Result<ChainCover> {
    Ok(disjoint_chains(&greedy_ell_cover(g, ell)?))
}

/// Earliest vertex of `chain` reachable from `u`. Vertices of a chain reachable
/// from `u` form a suffix, so this is a binary search. A vertex on the chain
/// is its own entry.
pub fn entry(reach: &ReachMatrix, u: usize, chain: &[usize]) -> Option<usize> {
    let pos = chain.partition_point(|&v| !reach.reaches(u, v));
    chain.get(pos).copied()
}

/// Hopbound guaranteed by [`sqrt_shortcut`] on a DAG with `n` vertices: at most
/// `2√n` uncovered vertices plus at most five hops per chain touched.
pub fn sqrt_bound(n: usize) -> usize {
    7 * ceil_sqrt(n)
}

pub fn ceil_sqrt(n: usize) -> usize {
    let mut r = (n as f64).sqrt() as usize;
    while r * r < n {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= n {
        r -= 1;
    }
    r
}

/// Chain cover with `ℓ = ⌈√n⌉` on the condensation, every chain
/// supershortcut, lifted back to `g`.
pub fn sqrt_shortcut<W: Weight>(g: &DiGraph<W>, scheme: PathScheme) -> ShortcutSet<W> {
    let (cd, _) = condense(g);
    let k = cd.dag.n();
    if k <= 1 {
        return cd.lift(&ShortcutSet::new(k));
    }
    let cover = chain_cover(&cd.dag, ceil_sqrt(k)).expect("condensation is acyclic");
    cd.lift(&supershortcut(&cd.dag, &cover, scheme))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::validate_shortcut_set;
    use crate::reach::transitive_closure;
    use crate::testutil::{all_paths, layered, path, random_dag};
    use proptest::prelude::*;

    #[test]
    fn path_single_cover() {
        let g = path(10);
        let pm = greedy_ell_cover(&g, 1).unwrap();
        assert_eq!(pm.paths, vec![(0..10).collect::<Vec<_>>()]);
        assert_eq!(verify_cover(&g, &pm.covered()).unwrap(), 0);
    }

    #[test]
    fn isolated_vertices() {
        let g = DiGraph::<u64>::new(5);
        let pm = greedy_ell_cover(&g, 5).unwrap();
        assert_eq!(pm.paths, (0..5).map(|v| vec![v]).collect::<Vec<_>>());
        let extra = greedy_ell_cover(&g, 7).unwrap();
        assert!(extra.paths[5].is_empty() && extra.paths[6].is_empty());
    }

    #[test]
    fn rejects_cycles() {
        let g = DiGraph::<u64>::from_pairs(2, [(0, 1), (1, 0)]).unwrap();
        assert!(matches!(greedy_ell_cover(&g, 1), Err(Error::Cyclic)));
    }

    #[test]
    fn disjoint_and_split_examples() {
        let pm = PathMultiset {
            n: 4,
            paths: vec![vec![0, 1], vec![0, 1], vec![2, 3]],
        };
        let c = disjoint_chains(&pm);
        assert_eq!(c.chains(), &[vec![0, 1], vec![2, 3]]);
        let long = ChainCover::new(10, 1, vec![(0..10).collect()]).unwrap();
        let split = split_chains(&long, 4);
        let sizes: Vec<_> = split.chains().iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![4, 4, 2]);
        assert_eq!(split_chains(&c, 4), c);
    }

    #[test]
    fn verify_cover_trivial_values() {
        let g = path(7);
        assert_eq!(verify_cover(&g, &[false; 7]).unwrap(), 7);
        assert_eq!(verify_cover(&g, &[true; 7]).unwrap(), 0);
    }

    #[test]
    fn verify_cover_matches_path_enumeration() {
        for seed in 0..6 {
            let g = random_dag(12, 0.25, seed);
            let mask: Vec<bool> = (0..12).map(|v| (v * 7 + seed as usize) % 3 == 0).collect();
            let brute = all_paths(&g)
                .iter()
                .map(|p| p.iter().filter(|&&v| !mask[v]).count())
                .max()
                .unwrap();
            assert_eq!(verify_cover(&g, &mask).unwrap(), brute);
        }
    }

    #[test]
    fn random_cover_meets_bound() {
        for seed in 0..10 {
            for g in [random_dag(64, 0.08, seed), layered(64, 3, 0.4, seed)] {
                let pm = greedy_ell_cover(&g, 16).unwrap();
                assert!(verify_cover(&g, &pm.covered()).unwrap() <= 8);
                for p in &pm.paths {
                    assert!(p.windows(2).all(|w| g.has_edge(w[0], w[1])));
                }
                let c = disjoint_chains(&pm);
                assert!(c.len() <= 16);
                assert_eq!(c.covered(), pm.covered());
                let reach = transitive_closure(&g);
                assert!(c.chains_in_closure(&reach));
                let split = split_chains(&c, 4);
                assert!(split.max_chain_len() <= 4);
                assert!(split.len() <= 2 * 16 + 64 / 4);
                assert_eq!(split.covered(), c.covered());
            }
        }
    }

    #[test]
    fn text_round_trip() {
        let c = ChainCover::new(6, 2, vec![vec![0, 2, 4], vec![5]]).unwrap();
        assert_eq!(ChainCover::parse(6, &c.to_text()).unwrap().chains(), c.chains());
        assert!(ChainCover::parse(6, "2\n0 1\n1 2\n").is_err());
    }

    #[test]
    fn entry_examples() {
        // chain a=0, b=1, c=2; u=3 reaches only b.
        let g = DiGraph::<u64>::from_pairs(5, [(0, 1), (1, 2), (3, 1)]).unwrap();
        let reach = transitive_closure(&g);
        let chain = [0, 1, 2];
        assert_eq!(entry(&reach, 3, &chain), Some(1));
        assert_eq!(entry(&reach, 4, &chain), None);
        assert_eq!(entry(&reach, 1, &chain), Some(1));
    }

    #[test]
    fn entry_matches_linear_scan_and_is_monotone() {
        for seed in 0..5 {
            let g = random_dag(48, 0.08, seed);
            let reach = transitive_closure(&g);
            let c = chain_cover(&g, 6).unwrap();
            for chain in c.chains() {
                for u in 0..48 {
                    let scan = chain.iter().copied().find(|&v| reach.reaches(u, v));
                    assert_eq!(entry(&reach, u, chain), scan);
                    for u2 in reach.reachable_from(u) {
                        if let (Some(a), Some(b)) = (entry(&reach, u, chain), entry(&reach, u2, chain)) {
                            let pos = |x| chain.iter().position(|&y| y == x).unwrap();
                            assert!(pos(b) >= pos(a));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn ceil_sqrt_values() {
        let got: Vec<_> = [0, 1, 2, 4, 5, 9, 10, 255, 256, 257].iter().map(|&n| ceil_sqrt(n)).collect();
        assert_eq!(got, vec![0, 1, 2, 2, 3, 3, 4, 16, 16, 17]);
    }

    #[test]
    fn sqrt_shortcut_examples() {
        assert!(sqrt_shortcut(&DiGraph::<u64>::new(1), PathScheme::Blocks).is_empty());
        let g = path(64);
        let h = sqrt_shortcut(&g, PathScheme::Blocks);
        assert!(validate_shortcut_set(&g, &h, 4).valid);
        for seed in 0..3 {
            let g = random_dag(256, 0.02, seed);
            let h = sqrt_shortcut(&g, PathScheme::Blocks);
            assert!(validate_shortcut_set(&g, &h, sqrt_bound(256)).valid);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn cover_property_always_holds(seed in 0u64..10_000, ell in 1usize..12) {
            let g = random_dag(40, 0.1, seed);
            let c = chain_cover(&g, ell).unwrap();
            prop_assert!(verify_cover(&g, &c.covered()).unwrap() * ell <= 2 * 40);
            let before = verify_cover(&g, &c.covered()).unwrap();
            let split = split_chains(&c, 40usize.div_ceil(ell));
            prop_assert!(verify_cover(&g, &split.covered()).unwrap() <= before);
            for (id, chain) in split.chains().iter().enumerate() {
                for (pos, &v) in chain.iter().enumerate() {
                    prop_assert_eq!(split.position(v), Some((id, pos)));
                }
            }
        }
    }
}
