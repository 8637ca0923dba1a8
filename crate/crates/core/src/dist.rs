//! Distances in `G ∪ H` and validators for shortcut sets and hopsets.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use crate::graph::{DiGraph, ShortcutSet};
use crate::reach::{transitive_closure, ReachMatrix};
use crate::scalar::{cmp_weight, Weight};

/// Marker for "unreachable" in hop matrices.
pub const INF: u32 = u32::MAX;

/// Dense all-pairs matrix of edge counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HopMatrix {
    n: usize,
    d: Vec<u32>,
}

impl HopMatrix {
    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, s: usize, t: usize) -> u32 {
        self.d[s * self.n + t]
    }

    pub fn row(&self, s: usize) -> &[u32] {
        &self.d[s * self.n..(s + 1) * self.n]
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.d
    }

    /// Largest finite entry.
    pub fn max_finite(&self) -> u32 {
        self.d.iter().copied().filter(|&x| x != INF).max().unwrap_or(0)
    }
}

/// Out-adjacency of `G ∪ H` with each edge's weight (hopset weight for `H`,
/// one when absent).
pub fn union_adjacency<W: Weight>(g: &DiGraph<W>, h: &ShortcutSet<W>) -> Vec<Vec<(usize, W)>> {
    let mut adj: Vec<Vec<(usize, W)>> = (0..g.n()).map(|u| g.out_edges(u).to_vec()).collect();
    for e in h.edges() {
        adj[e.from].push((e.to, e.weight.clone().unwrap_or_else(W::one)));
    }
    adj
}

/// BFS distances from `s` over an unweighted adjacency list.
pub fn bfs_from<T>(adj: &[Vec<(usize, T)>], s: usize, out: &mut [u32]) {
    out.fill(INF);
    out[s] = 0;
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        let du = out[u];
        for &(v, _) in &adj[u] {
            if out[v] == INF {
                out[v] = du + 1;
                queue.push_back(v);
            }
        }
    }
}

/// Unweighted distances in `G ∪ H` for all pairs.
pub fn all_dist<W: Weight>(g: &DiGraph<W>, h: &ShortcutSet<W>) -> HopMatrix {
    let n = g.n();
    let adj = union_adjacency(g, h);
    let mut d = vec![INF; n * n];
    for s in 0..n {
        bfs_from(&adj, s, &mut d[s * n..(s + 1) * n]);
    }
    HopMatrix { n, d }
}

struct Label<W> {
    dist: W,
    hops: u32,
    v: usize,
}

impl<W: Weight> PartialEq for Label<W> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<W: Weight> Eq for Label<W> {}
impl<W: Weight> PartialOrd for Label<W> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<W: Weight> Ord for Label<W> {
    // Reversed so the max-heap pops the lexicographically smallest key.
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_weight(&other.dist, &self.dist)
            .then(other.hops.cmp(&self.hops))
            .then(other.v.cmp(&self.v))
    }
}

/// Label-setting search over `(distance, hops)` keys from `s`: for every
/// reachable vertex, the shortest distance and the fewest edges among
/// shortest paths.
pub fn hopdist_from<W: Weight>(adj: &[Vec<(usize, W)>], s: usize) -> Vec<Option<(W, u32)>> {
    let n = adj.len();
    let mut best: Vec<Option<(W, u32)>> = vec![None; n];
    let mut done = vec![false; n];
    best[s] = Some((W::zero(), 0));
    let mut heap = BinaryHeap::from([Label {
        dist: W::zero(),
        hops: 0,
        v: s,
    }]);
    while let Some(Label { dist, hops, v: u }) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        for (v, w) in &adj[u] {
            if done[*v] {
                continue;
            }
            let nd = dist.clone() + w.clone();
            let nh = hops + 1;
            let better = match &best[*v] {
                None => true,
                Some((bd, bh)) => match cmp_weight(&nd, bd) {
                    Ordering::Less => true,
                    Ordering::Equal => nh < *bh,
                    Ordering::Greater => false,
                },
            };
            if better {
                best[*v] = Some((nd.clone(), nh));
                heap.push(Label {
                    dist: nd,
                    hops: nh,
                    v: *v,
                });
            }
        }
    }
    best
}

/// Weighted distance and hop-distance in `G ∪ H` for every pair.
pub fn hopdist_all<W: Weight>(g: &DiGraph<W>, h: &ShortcutSet<W>) -> Vec<Vec<Option<(W, u32)>>> {
    let adj = union_adjacency(g, h);
    (0..g.n()).map(|s| hopdist_from(&adj, s)).collect()
}

/// Weighted distances in `G` from `s`.
pub fn dist_from<W: Weight>(g: &DiGraph<W>, s: usize) -> Vec<Option<W>> {
    let adj: Vec<Vec<(usize, W)>> = (0..g.n()).map(|u| g.out_edges(u).to_vec()).collect();
    hopdist_from(&adj, s).into_iter().map(|x| x.map(|(d, _)| d)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Failure {
    /// An added edge joins a pair with no path in `G`.
    NotInClosure { u: usize, v: usize },
    /// Some reachable pair needs more than `beta` edges.
    HopboundExceeded { s: usize, t: usize, hops: u32 },
    /// A hopset edge weight differs from the true distance, or a distance changed.
    DistanceCorrupted { u: usize, v: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub valid: bool,
    pub failure: Option<Failure>,
    /// Pair attaining the measured hopbound.
    pub worst_pair: Option<(usize, usize)>,
    /// Largest (hop-)distance over all reachable pairs.
    pub hopbound: u32,
    pub pairs: usize,
}

impl ValidationReport {
    fn closure_failure(u: usize, v: usize) -> Self {
        Self {
            valid: false,
            failure: Some(Failure::NotInClosure { u, v }),
            worst_pair: None,
            hopbound: 0,
            pairs: 0,
        }
    }
}

fn first_non_closure<W: Weight>(reach: &ReachMatrix, h: &ShortcutSet<W>) -> Option<(usize, usize)> {
    h.pairs().find(|&(u, v)| !reach.reaches(u, v))
}

fn worst_of(n: usize, value: impl Fn(usize, usize) -> Option<u32>) -> (Option<(usize, usize)>, u32, usize) {
    let mut worst = None;
    let mut bound = 0;
    let mut pairs = 0;
    for s in 0..n {
        for t in 0..n {
            if s == t {
                continue;
            }
            if let Some(x) = value(s, t) {
                pairs += 1;
                if x > bound || worst.is_none() {
                    bound = bound.max(x);
                    worst = Some((s, t));
                }
            }
        }
    }
    (worst, bound, pairs)
}

/// Checks that every edge of `h` is in the closure of `g` and every reachable
/// pair is within `beta` edges in `G ∪ H`.
pub fn validate_shortcut_set<W: Weight>(g: &DiGraph<W>, h: &ShortcutSet<W>, beta: usize) -> ValidationReport {
    let reach = transitive_closure(g);
    if let Some((u, v)) = first_non_closure(&reach, h) {
        return ValidationReport::closure_failure(u, v);
    }
    let d = all_dist(g, h);
    let (worst_pair, hopbound, pairs) =
        worst_of(g.n(), |s, t| Some(d.get(s, t)).filter(|&x| x != INF));
    let failure = worst_pair
        .filter(|_| hopbound as usize > beta)
        .map(|(s, t)| Failure::HopboundExceeded { s, t, hops: hopbound });
    ValidationReport {
        valid: failure.is_none(),
        failure,
        worst_pair,
        hopbound,
        pairs,
    }
}

/// Checks hopset weights against `dist_G`, that no distance changes in
/// `G ∪ H`, and that every pair has a shortest path of at most `beta` edges.
pub fn validate_hopset<W: Weight>(g: &DiGraph<W>, h: &ShortcutSet<W>, beta: usize) -> ValidationReport {
    let reach = transitive_closure(g);
    if let Some((u, v)) = first_non_closure(&reach, h) {
        return ValidationReport::closure_failure(u, v);
    }
    let n = g.n();
    let base: Vec<Vec<Option<W>>> = (0..n).map(|s| dist_from(g, s)).collect();
    for e in h.edges() {
        let ok = match (&e.weight, &base[e.from][e.to]) {
            (Some(w), Some(d)) => cmp_weight(w, d) == Ordering::Equal,
            _ => false,
        };
        if !ok {
            return ValidationReport {
                valid: false,
                failure: Some(Failure::DistanceCorrupted { u: e.from, v: e.to }),
                worst_pair: None,
                hopbound: 0,
                pairs: 0,
            };
        }
    }
    let full = hopdist_all(g, h);
    let mut corrupted = None;
    for s in 0..n {
        for t in 0..n {
            let same = match (&full[s][t], &base[s][t]) {
                (Some((a, _)), Some(b)) => cmp_weight(a, b) == Ordering::Equal,
                (None, None) => true,
                _ => false,
            };
            if !same && corrupted.is_none() {
                corrupted = Some(Failure::DistanceCorrupted { u: s, v: t });
            }
        }
    }
    let (worst_pair, hopbound, pairs) = worst_of(n, |s, t| full[s][t].as_ref().map(|(_, k)| *k));
    let failure = corrupted.or_else(|| {
        worst_pair
            .filter(|_| hopbound as usize > beta)
            .map(|(s, t)| Failure::HopboundExceeded { s, t, hops: hopbound })
    });
    ValidationReport {
        valid: failure.is_none(),
        failure,
        worst_pair,
        hopbound,
        pairs,
    }
}

/// Builds the exact hopset edge `(u, v)` weighted by `dist_G(u, v)`.
pub fn hopset_from_pairs<W: Weight>(
    g: &DiGraph<W>,
    pairs: impl IntoIterator<Item = (usize, usize)>,
) -> ShortcutSet<W> {
    let mut rows: Vec<Option<Vec<Option<W>>>> = vec![None; g.n()];
    let mut h = ShortcutSet::new(g.n());
    for (u, v) in pairs {
        let row = rows[u].get_or_insert_with(|| dist_from(g, u));
        if let Some(d) = &row[v] {
            h.insert(u, v, Some(d.clone()));
        }
    }
    h
}
