//! Small graphs and brute-force oracles shared by unit tests.

use crate::dist::INF;
use crate::graph::{DiGraph, ShortcutSet};
use crate::harness::generators;

pub fn path(n: usize) -> DiGraph<u64> {
    generators::path(n)
}

pub fn random_dag(n: usize, p: f64, seed: u64) -> DiGraph<u64> {
    generators::random_dag(n, p, seed).unwrap()
}

pub fn random_digraph(n: usize, p: f64, seed: u64) -> DiGraph<u64> {
    generators::random_digraph(n, p, seed).unwrap()
}

pub fn layered(n: usize, width: usize, p: f64, seed: u64) -> DiGraph<u64> {
    generators::layered(n, width, p, seed).unwrap()
}

pub fn random_weighted_dag(n: usize, p: f64, wmax: u64, seed: u64) -> DiGraph<u64> {
    generators::random_weighted_dag(n, p, wmax, seed).unwrap()
}

/// Recursive DFS reachability from `s`.
pub fn dfs_reach(g: &DiGraph<u64>, s: usize) -> Vec<bool> {
    fn go(g: &DiGraph<u64>, u: usize, seen: &mut [bool]) {
        seen[u] = true;
        for v in g.successors(u) {
            if !seen[v] {
                go(g, v, seen);
            }
        }
    }
    let mut seen = vec![false; g.n()];
    go(g, s, &mut seen);
    seen
}

/// Unweighted all-pairs distances in `G ∪ H` by Floyd–Warshall.
pub fn floyd_warshall(g: &DiGraph<u64>, h: &ShortcutSet<u64>) -> Vec<Vec<u32>> {
    let n = g.n();
    let mut d = vec![vec![INF; n]; n];
    for (u, row) in d.iter_mut().enumerate() {
        row[u] = 0;
    }
    for (u, v, _) in g.edges() {
        d[u][v] = 1;
    }
    for (u, v) in h.pairs() {
        d[u][v] = 1;
    }
    for k in 0..n {
        for i in 0..n {
            if d[i][k] == INF {
                continue;
            }
            for j in 0..n {
                if d[k][j] != INF {
                    d[i][j] = d[i][j].min(d[i][k] + d[k][j]);
                }
            }
        }
    }
    d
}

/// `(dist, hopdist)` from `s` to `t` by enumerating every simple path.
pub fn simple_path_hopdist(g: &DiGraph<u64>, s: usize, t: usize) -> Option<(u64, u32)> {
    fn go(
        g: &DiGraph<u64>,
        u: usize,
        t: usize,
        d: u64,
        k: u32,
        on: &mut [bool],
        best: &mut Option<(u64, u32)>,
    ) {
        if u == t {
            if best.map_or(true, |b| (d, k) < b) {
                *best = Some((d, k));
            }
            return;
        }
        for &(v, w) in g.out_edges(u) {
            if !on[v] {
                on[v] = true;
                go(g, v, t, d + w, k + 1, on, best);
                on[v] = false;
            }
        }
    }
    let mut on = vec![false; g.n()];
    on[s] = true;
    let mut best = None;
    go(g, s, t, 0, 0, &mut on, &mut best);
    best
}

/// Every maximal-or-not path of `g` (as vertex sequences), for small DAGs.
pub fn all_paths(g: &DiGraph<u64>) -> Vec<Vec<usize>> {
    fn go(g: &DiGraph<u64>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        let u = *cur.last().unwrap();
        for v in g.successors(u).collect::<Vec<_>>() {
            cur.push(v);
            go(g, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for s in 0..g.n() {
        go(g, &mut vec![s], &mut out);
    }
    out
}
