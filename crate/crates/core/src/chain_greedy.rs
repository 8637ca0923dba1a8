//! Greedy reduction of normalized distances over a chain cover.
//!
//! A path `P` from `u` is valid if, for every chain `C` it touches, `P ∩ C`
//! is a contiguous segment of `P` starting at `entry(u, C)`, the earliest
//! vertex of `C` that `u` reaches. The normalized distance `d′_u(x)` is the
//! fewest chains touched by a valid `u`-path ending at `x`, counting the
//! chain of `u` itself.
//!
//! The important pairs are `(v, entry(v, C))` for every chain `C` not
//! containing `v` (pairs with `v ∈ C` have `d′ = 0` and are left out). Edges
//! are added only from that set, so adding one never breaks validity.
//!
//! Gains are exact. An edge `(x, y)` helps only sources `u` with
//! `entry(u, C_y) = y` that reach `x`; for such `u` the new labels are
//! `min(old, λ + δ_u(y, ·))` with `λ = d′_u(x) + 1`, found by a pruned 0/1
//! relaxation from `y`. The reduction for `(u, y)` depends on `λ` alone and
//! is memoized per head.

use std::collections::VecDeque;

use crate::chain::{chain_cover, ChainCover};
use crate::error::{Error, Result};
use crate::graph::{DiGraph, ShortcutSet};
use crate::reach::{transitive_closure, ReachMatrix};
use crate::scalar::Weight;
use crate::scc::condense;
use crate::supershortcut::{supershortcut, PathScheme};

const NONE: u32 = u32::MAX;

/// Smallest `r` with `r³ ≥ n`.
pub(crate) fn ceil_cbrt(n: usize) -> usize {
    let mut r = (n as f64).cbrt() as usize;
    while r * r * r < n {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) * (r - 1) >= n {
        r -= 1;
    }
    r
}

/// `⌈2 n^{2/3}⌉`, the number of paths in the cover.
pub fn cover_size(n: usize) -> usize {
    ceil_cbrt(8 * n * n)
}

/// Stop threshold `⌈n^{1/3}⌉` on the largest normalized distance.
pub fn threshold(n: usize) -> usize {
    ceil_cbrt(n)
}

/// Hopbound guaranteed on a DAG with `n` vertices. A shortest path has at
/// most `U ≤ ⌈n^{1/3}⌉` uncovered vertices; its prefix up to the last chain
/// vertex follows a valid path touching at most `⌈n^{1/3}⌉` chains, each
/// crossed in four hops plus one hop to leave, and the suffix has at most `U`
/// hops. That is `5θ + 2U - 1 < 7θ`.
pub fn chain_greedy_bound(n: usize) -> usize {
    7 * threshold(n)
}

/// Entry table and the important pairs it induces.
#[derive(Clone, Debug)]
pub struct ImportantPairs {
    n: usize,
    k: usize,
    /// `entry[v * k + c]`, or `NONE`.
    entry: Vec<u32>,
    /// Per vertex `y`: sources `u ∉ C_y` with `entry(u, C_y) = y`, ascending.
    by_head: Vec<Vec<u32>>,
    len: usize,
}

impl ImportantPairs {
    pub fn new(reach: &ReachMatrix, cover: &ChainCover) -> Self {
        let n = cover.n();
        let k = cover.len();
        let mut entry = vec![NONE; n * k];
        let mut by_head = vec![Vec::new(); n];
        let mut len = 0;
        for v in 0..n {
            for (c, chain) in cover.chains().iter().enumerate() {
                if let Some(e) = crate::chain::entry(reach, v, chain) {
                    entry[v * k + c] = e as u32;
                    if cover.chain_of(v) != Some(c) {
                        by_head[e].push(v as u32);
                        len += 1;
                    }
                }
            }
        }
        Self {
            n,
            k,
            entry,
            by_head,
            len,
        }
    }

    #[inline]
    pub fn entry(&self, v: usize, chain: usize) -> Option<usize> {
        let e = self.entry[v * self.k + chain];
        (e != NONE).then_some(e as usize)
    }

    /// Sources whose pair ends at `y`.
    pub fn sources_of(&self, y: usize) -> impl Iterator<Item = usize> + '_ {
        self.by_head[y].iter().map(|&u| u as usize)
    }

    /// All pairs `(v, entry)`, ordered by source then chain.
    pub fn pairs<'a>(&'a self, cover: &'a ChainCover) -> impl Iterator<Item = (usize, usize)> + 'a {
        (0..self.n).flat_map(move |v| {
            (0..self.k).filter_map(move |c| {
                self.entry(v, c)
                    .filter(|_| cover.chain_of(v) != Some(c))
                    .map(|e| (v, e))
            })
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }
}

/// 0/1 label-setting from `u` over `adj`. Moving inside the current chain or
/// onto a non-chain vertex is free; stepping onto another chain costs one and
/// is allowed only at `u`'s entry of that chain.
fn labels_from(adj: &[Vec<u32>], cover: &ChainCover, pairs: &ImportantPairs, u: usize, out: &mut [u32]) {
    out.fill(NONE);
    out[u] = u32::from(cover.chain_of(u).is_some());
    let mut q = VecDeque::from([u as u32]);
    while let Some(x) = q.pop_front() {
        let x = x as usize;
        let dx = out[x];
        let cx = cover.chain_of(x);
        for &y in &adj[x] {
            let yu = y as usize;
            let cost = match cover.chain_of(yu) {
                None => 0,
                Some(c) if cx == Some(c) => 0,
                Some(c) if pairs.entry(u, c) == Some(yu) => 1,
                Some(_) => continue,
            };
            if dx + cost < out[yu] {
                out[yu] = dx + cost;
                if cost == 0 {
                    q.push_front(y);
                } else {
                    q.push_back(y);
                }
            }
        }
    }
}

/// `G` plus consecutive chain edges, as sorted successor lists.
fn base_adjacency<W: Weight>(g: &DiGraph<W>, cover: &ChainCover) -> Vec<Vec<u32>> {
    let mut adj: Vec<Vec<u32>> = (0..g.n()).map(|u| g.successors(u).map(|v| v as u32).collect()).collect();
    for chain in cover.chains() {
        for w in chain.windows(2) {
            adj[w[0]].push(w[1] as u32);
        }
    }
    for row in &mut adj {
        row.sort_unstable();
        row.dedup();
    }
    adj
}

/// Normalized distances from `u` to every vertex over `G` plus consecutive
/// chain edges; `None` where no valid path exists.
pub fn normalized_dist<W: Weight>(g: &DiGraph<W>, cover: &ChainCover, u: usize) -> Result<Vec<Option<u32>>> {
    g.require_acyclic()?;
    if cover.n() != g.n() {
        return Err(Error::param("cover and graph disagree on the vertex count"));
    }
    if u >= g.n() {
        return Err(Error::VertexOutOfRange { vertex: u, n: g.n() });
    }
    let reach = transitive_closure(g);
    let pairs = ImportantPairs::new(&reach, cover);
    let adj = base_adjacency(g, cover);
    let mut out = vec![NONE; g.n()];
    labels_from(&adj, cover, &pairs, u, &mut out);
    Ok(out.into_iter().map(|d| (d != NONE).then_some(d)).collect())
}

/// One committed edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainRound {
    pub x: usize,
    pub y: usize,
    pub delta: u64,
    pub phi_after: u64,
    pub max_dist: u32,
}

/// Normalized distances of every source, the potential `φ′`, and the edges
/// added so far.
pub struct ChainGreedy<'a> {
    n: usize,
    cover: &'a ChainCover,
    reach: ReachMatrix,
    pairs: ImportantPairs,
    adj: Vec<Vec<u32>>,
    /// `label[u * n + x] = d′_u(x)`.
    label: Vec<u32>,
    phi: u64,
    added: Vec<(usize, usize)>,
    rounds: Vec<ChainRound>,
    scratch: Vec<u32>,
    stamp: Vec<u32>,
    epoch: u32,
}

impl<'a> ChainGreedy<'a> {
    pub fn new<W: Weight>(g: &DiGraph<W>, cover: &'a ChainCover) -> Result<Self> {
        g.require_acyclic()?;
        if cover.n() != g.n() {
            return Err(Error::param("cover and graph disagree on the vertex count"));
        }
        let n = g.n();
        let reach = transitive_closure(g);
        if !cover.chains_in_closure(&reach) {
            return Err(Error::param("a chain is not a path in the transitive closure"));
        }
        let pairs = ImportantPairs::new(&reach, cover);
        let mut s = Self {
            n,
            cover,
            reach,
            pairs,
            adj: base_adjacency(g, cover),
            label: vec![NONE; n * n],
            phi: 0,
            added: Vec::new(),
            rounds: Vec::new(),
            scratch: vec![NONE; n],
            stamp: vec![0; n],
            epoch: 0,
        };
        for u in 0..n {
            s.relabel(u);
        }
        s.phi = s.phi_from_scratch();
        Ok(s)
    }

    fn relabel(&mut self, u: usize) {
        let n = self.n;
        let row = &mut self.label[u * n..(u + 1) * n];
        labels_from(&self.adj, self.cover, &self.pairs, u, row);
    }

    #[inline]
    fn d(&self, u: usize, x: usize) -> u32 {
        self.label[u * self.n + x]
    }

    pub fn pairs(&self) -> &ImportantPairs {
        &self.pairs
    }

    /// `d′(a, b)` under the current edges.
    pub fn dist(&self, a: usize, b: usize) -> Option<u32> {
        let d = self.d(a, b);
        (d != NONE).then_some(d)
    }

    pub fn phi(&self) -> u64 {
        self.phi
    }

    /// `Σ d′` over the important pairs, read off the labels.
    pub fn phi_from_scratch(&self) -> u64 {
        self.pairs.pairs(self.cover).map(|(a, b)| u64::from(self.d(a, b))).sum()
    }

    pub fn max_dist(&self) -> u32 {
        self.pairs.pairs(self.cover).map(|(a, b)| self.d(a, b)).max().unwrap_or(0)
    }

    pub fn added(&self) -> &[(usize, usize)] {
        &self.added
    }

    pub fn rounds(&self) -> &[ChainRound] {
        &self.rounds
    }

    /// Whether `(x, y)` is an important pair not yet added.
    pub fn is_candidate(&self, x: usize, y: usize) -> bool {
        match self.cover.chain_of(y) {
            Some(c) => {
                self.cover.chain_of(x) != Some(c)
                    && self.pairs.entry(x, c) == Some(y)
                    && self.adj[x].binary_search(&(y as u32)).is_err()
            }
            None => false,
        }
    }

    /// Decrease of `φ′_u` if `d′_u(y)` drops to `lambda`.
    fn source_gain(&mut self, u: usize, y: usize, lambda: u32) -> u64 {
        let n = self.n;
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.fill(0);
            self.epoch = 1;
        }
        let epoch = self.epoch;
        let old = &self.label[u * n..(u + 1) * n];
        let mut touched = vec![y as u32];
        self.scratch[y] = lambda;
        self.stamp[y] = epoch;
        let mut q = VecDeque::from([y as u32]);
        while let Some(x) = q.pop_front() {
            let x = x as usize;
            let dx = self.scratch[x];
            let cx = self.cover.chain_of(x);
            for &z in &self.adj[x] {
                let zu = z as usize;
                let cost = match self.cover.chain_of(zu) {
                    None => 0,
                    Some(c) if cx == Some(c) => 0,
                    Some(c) if self.pairs.entry(u, c) == Some(zu) => 1,
                    Some(_) => continue,
                };
                let d = dx + cost;
                let cur = if self.stamp[zu] == epoch { self.scratch[zu] } else { old[zu] };
                if d < cur {
                    if self.stamp[zu] != epoch {
                        self.stamp[zu] = epoch;
                        touched.push(z);
                    }
                    self.scratch[zu] = d;
                    if cost == 0 {
                        q.push_front(z);
                    } else {
                        q.push_back(z);
                    }
                }
            }
        }
        let on = self.cover.chain_of(u);
        touched
            .into_iter()
            .map(|z| z as usize)
            .filter(|&z| match self.cover.chain_of(z) {
                Some(c) => on != Some(c) && self.pairs.entry(u, c) == Some(z),
                None => false,
            })
            .map(|z| u64::from(old[z] - self.scratch[z]))
            .sum()
    }

    /// Exact decrease of `φ′` from adding `(x, y)`; zero for non-candidates.
    pub fn delta(&mut self, x: usize, y: usize) -> u64 {
        if !self.is_candidate(x, y) {
            return 0;
        }
        let sources: Vec<usize> = self.pairs.sources_of(y).collect();
        let mut total = 0;
        for u in sources {
            if !self.reach.reaches(u, x) {
                continue;
            }
            let lambda = self.d(u, x) + 1;
            if lambda < self.d(u, y) {
                total += self.source_gain(u, y, lambda);
            }
        }
        total
    }

    /// Best candidate for head `y`: `(x, gain)`, smallest `x` on ties.
    fn score_head(&mut self, y: usize) -> Option<(usize, u64)> {
        let sources: Vec<usize> = self.pairs.sources_of(y).collect();
        // memo[i][λ] caches the gain of sources[i] at label λ < d′(u, y).
        let mut memo: Vec<Vec<u64>> = sources.iter().map(|_| Vec::new()).collect();
        let mut best: Option<(usize, u64)> = None;
        for &x in &sources {
            if self.adj[x].binary_search(&(y as u32)).is_ok() {
                continue;
            }
            let mut total = 0;
            for (i, &u) in sources.iter().enumerate() {
                if !self.reach.reaches(u, x) {
                    continue;
                }
                let (lambda, cur) = (self.d(u, x) + 1, self.d(u, y));
                if lambda >= cur {
                    continue;
                }
                if memo[i].is_empty() {
                    memo[i] = vec![u64::MAX; cur as usize];
                }
                let l = lambda as usize;
                if memo[i][l] == u64::MAX {
                    memo[i][l] = self.source_gain(u, y, lambda);
                }
                total += memo[i][l];
            }
            if total > 0 && best.map_or(true, |(_, bg)| total > bg) {
                best = Some((x, total));
            }
        }
        best
    }

    /// Candidate with the largest gain; lexicographically smallest on ties.
    pub fn argmax(&mut self) -> Result<((usize, usize), u64)> {
        let mut best: Option<((usize, usize), u64)> = None;
        for y in 0..self.n {
            if let Some((x, g)) = self.score_head(y) {
                let better = match best {
                    None => true,
                    Some((e, bg)) => g > bg || (g == bg && (x, y) < e),
                };
                if better {
                    best = Some(((x, y), g));
                }
            }
        }
        best.ok_or(Error::ZeroPotential)
    }

    /// Adds `(x, y)` and relabels the sources it can affect. Returns the
    /// realized decrease of `φ′`.
    pub fn commit(&mut self, x: usize, y: usize) -> Result<u64> {
        if !self.is_candidate(x, y) {
            return Err(Error::param(format!("({x}, {y}) is not an open important pair")));
        }
        let pos = self.adj[x].partition_point(|&z| z < y as u32);
        self.adj[x].insert(pos, y as u32);
        self.added.push((x, y));
        let dirty: Vec<usize> = self.pairs.sources_of(y).filter(|&u| self.reach.reaches(u, x)).collect();
        let before = self.phi;
        for u in dirty {
            self.relabel(u);
        }
        self.phi = self.phi_from_scratch();
        Ok(before - self.phi)
    }

    /// One greedy round.
    pub fn step(&mut self) -> Result<ChainRound> {
        let ((x, y), delta) = self.argmax()?;
        let realized = self.commit(x, y)?;
        assert_eq!(realized, delta, "scored gain of ({x}, {y}) differs from realized decrease");
        let round = ChainRound {
            x,
            y,
            delta,
            phi_after: self.phi,
            max_dist: self.max_dist(),
        };
        self.rounds.push(round.clone());
        Ok(round)
    }
}

#[derive(Clone, Debug)]
pub struct ChainGreedyConfig {
    pub scheme: PathScheme,
    /// Largest number of greedy rounds; `None` for no limit.
    pub round_budget: Option<usize>,
}

impl Default for ChainGreedyConfig {
    fn default() -> Self {
        Self {
            scheme: PathScheme::Blocks,
            round_budget: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ChainGreedyOutput<W> {
    pub shortcuts: ShortcutSet<W>,
    /// Hopbound guaranteed on the input graph.
    pub bound: usize,
    pub chains: usize,
    /// Edges added by the greedy loop, on the condensation.
    pub rounds: Vec<ChainRound>,
}

/// Shortcut set with hopbound [`chain_greedy_bound`] (lifted for cyclic input).
pub fn chain_greedy_shortcut<W: Weight>(g: &DiGraph<W>) -> Result<ShortcutSet<W>> {
    Ok(chain_greedy_with(g, &ChainGreedyConfig::default())?.shortcuts)
}

pub fn chain_greedy_with<W: Weight>(g: &DiGraph<W>, cfg: &ChainGreedyConfig) -> Result<ChainGreedyOutput<W>> {
    let (cd, _) = condense(g);
    let dag = &cd.dag;
    let k = dag.n();
    if k <= 1 {
        return Ok(ChainGreedyOutput {
            shortcuts: cd.lift(&ShortcutSet::new(k)),
            bound: cd.lifted_bound(1),
            chains: k,
            rounds: Vec::new(),
        });
    }
    let cover = chain_cover(dag, cover_size(k))?;
    let mut h = supershortcut(dag, &cover, cfg.scheme);
    let mut state = ChainGreedy::new(dag, &cover)?;
    let theta = threshold(k) as u32;
    while state.max_dist() > theta {
        if cfg.round_budget.is_some_and(|b| state.rounds().len() >= b) {
            return Err(Error::BudgetExceeded(state.rounds().len()));
        }
        state.step()?;
    }
    for &(x, y) in state.added() {
        h.insert(x, y, None);
    }
    Ok(ChainGreedyOutput {
        shortcuts: cd.lift(&h),
        bound: cd.lifted_bound(chain_greedy_bound(k)),
        chains: cover.len(),
        rounds: state.rounds,
    })
}
