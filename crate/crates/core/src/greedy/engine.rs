//! Incremental state for the greedy potential reduction.
//!
//! `val(s, t)` is the current distance in `G ∪ H` (shortcut mode) or the
//! current hop-distance among shortest paths (hopset mode). A pair is active
//! while `val ≥ β`, and the potential is the sum of active values.
//!
//! Adding `(u, v)` turns `val(s, t)` into `min(val(s, t), val(s, u) + 1 + val(v, t))`,
//! in hopset mode only when the new edge lies on a shortest `s ⇝ t` path.
//! The gain of one pair with current value `c` and candidate value `y` is
//! `c` if `y < β`, `c - y` if `β ≤ y < c`, and zero otherwise.
//!
//! The exact argmax avoids scoring every `(u, v)` against every pair:
//! * for each tail `u`, `UB[u] = Σ_(s,t) gain(c_st, val(s,u) + 1)` over all
//!   active pairs of sources reaching `u` bounds the gain of every edge
//!   leaving `u`, since gains only shrink as `y` grows. Per source this is a
//!   function of `val(s,u)` alone, read off prefix sums of the sorted row;
//! * tails are scored in decreasing `UB` order until the bound drops below
//!   the best gain found so far;
//! * scoring one tail tabulates, per target `t`, the piecewise-linear
//!   function `F_t(x) = Σ_s gain(c_st, val(s,u) + 1 + x)` with difference
//!   arrays, then charges `F_t(val(v, t))` to every head `v`.

use std::cmp::Reverse;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use super::{GreedyTrace, Mode, Round};
use crate::dist::{all_dist, hopdist_all, INF};
use crate::error::{Error, Result};
use crate::graph::{DiGraph, ShortcutSet};
use crate::reach::{transitive_closure, ReachMatrix};
use crate::scalar::Weight;

const FAR: u128 = u128::MAX;

pub struct GreedyEngine<W> {
    n: usize,
    beta: u32,
    mode: Mode,
    val: Vec<u32>,
    reach: ReachMatrix,
    /// Exact `dist_G`, scaled to integers (hopset mode only).
    wd: Vec<u128>,
    /// `dist_G` in the caller's scalar, used as hopset edge weights.
    dist_w: Vec<Option<W>>,
    /// Per target `t`: `(val(v, t), v)` for every `v` reaching `t`, ascending.
    cols: Vec<Vec<(u32, u32)>>,
    /// Per source `s`: `(val(s, t), t)` for active pairs, descending.
    active: Vec<Vec<(u32, u32)>>,
    /// Prefix sums of the values in `active[s]`.
    psum: Vec<Vec<u64>>,
    phi: u64,
    active_pairs: usize,
    h: ShortcutSet<W>,
    trace: GreedyTrace,
    /// `valt[t * n + s] = val(s, t)`.
    valt: Vec<u32>,
    /// Per target `t`: `(s, val(s, t))` for active pairs.
    live: Vec<Vec<(u32, u32)>>,
    // Scratch for scoring one tail.
    diff: Vec<(i64, i64)>,
    acc: Vec<u64>,
}

fn gain(c: u32, y: u32, beta: u32) -> u64 {
    if y >= c {
        0
    } else if y < beta {
        u64::from(c)
    } else {
        u64::from(c - y)
    }
}

/// Integer-scaled all-pairs distances of `g`, plus the same distances in `W`.
fn exact_distances<W: Weight>(g: &DiGraph<W>) -> Result<(Vec<u128>, Vec<Option<W>>)> {
    let n = g.n();
    let mut scale = BigInt::one();
    for (_, _, w) in g.edges() {
        scale = num_integer::Integer::lcm(&scale, w.to_rational().denom());
    }
    let scale = BigRational::from_integer(scale);
    let all = hopdist_all(g, &ShortcutSet::new(n));
    let mut wd = vec![FAR; n * n];
    let mut dist_w = vec![None; n * n];
    for s in 0..n {
        for t in 0..n {
            if let Some((d, _)) = &all[s][t] {
                let scaled = d.to_rational() * scale.clone();
                wd[s * n + t] = scaled
                    .is_integer()
                    .then(|| scaled.to_integer().to_u128())
                    .flatten()
                    .filter(|&x| x < FAR / 4)
                    .ok_or_else(|| Error::param("weights cannot be compared exactly"))?;
                dist_w[s * n + t] = Some(d.clone());
            }
        }
    }
    Ok((wd, dist_w))
}

impl<W: Weight> GreedyEngine<W> {
    /// Engine over `G ∪ H`. In hopset mode `h` must carry exact distances.
    pub fn new(g: &DiGraph<W>, h: &ShortcutSet<W>, beta: usize, mode: Mode) -> Result<Self> {
        if beta < 1 {
            return Err(Error::param("beta must be at least 1"));
        }
        let n = g.n();
        let reach = transitive_closure(g);
        if let Some((u, v)) = h.pairs().find(|&(u, v)| !reach.reaches(u, v)) {
            return Err(Error::NotInClosure(u, v));
        }
        let (val, wd, dist_w) = match mode {
            Mode::Shortcut => (all_dist(g, h).into_vec(), Vec::new(), Vec::new()),
            Mode::Hopset => {
                let (wd, dist_w) = exact_distances(g)?;
                let mut hw = ShortcutSet::new(n);
                for e in h.edges() {
                    let d = dist_w[e.from * n + e.to].clone();
                    hw.insert(e.from, e.to, d);
                }
                let all = hopdist_all(g, &hw);
                let val = all
                    .iter()
                    .flat_map(|row| row.iter().map(|x| x.as_ref().map_or(INF, |(_, k)| *k)))
                    .collect();
                (val, wd, dist_w)
            }
        };
        let beta = u32::try_from(beta).unwrap_or(u32::MAX);
        let mut e = Self {
            n,
            beta,
            mode,
            val,
            reach,
            wd,
            dist_w,
            cols: vec![Vec::new(); n],
            active: vec![Vec::new(); n],
            psum: vec![Vec::new(); n],
            phi: 0,
            active_pairs: 0,
            h: h.clone(),
            trace: GreedyTrace::default(),
            valt: Vec::new(),
            live: vec![Vec::new(); n],
            diff: vec![(0, 0); n + 2],
            acc: vec![0; n],
        };
        e.valt = (0..n * n).map(|i| e.val[(i % n) * n + i / n]).collect();
        for t in 0..n {
            e.rebuild_col(t);
        }
        for s in 0..n {
            e.rebuild_row(s);
        }
        e.phi = e.active.iter().flatten().map(|&(c, _)| u64::from(c)).sum();
        e.active_pairs = e.active.iter().map(Vec::len).sum();
        Ok(e)
    }

    #[inline]
    fn v(&self, s: usize, t: usize) -> u32 {
        self.val[s * self.n + t]
    }

    /// `dist(a, b) + dist(b, c) == dist(a, c)`.
    #[inline]
    fn through(&self, a: usize, b: usize, c: usize) -> bool {
        let n = self.n;
        let (ab, bc, ac) = (self.wd[a * n + b], self.wd[b * n + c], self.wd[a * n + c]);
        ab != FAR && bc != FAR && ab + bc == ac
    }

    fn rebuild_col(&mut self, t: usize) {
        let n = self.n;
        let col = &mut self.cols[t];
        let live = &mut self.live[t];
        col.clear();
        live.clear();
        for v in 0..n {
            let x = self.valt[t * n + v];
            if x != INF {
                col.push((x, v as u32));
                if v != t && x >= self.beta {
                    live.push((v as u32, x));
                }
            }
        }
        col.sort_unstable();
    }

    fn rebuild_row(&mut self, s: usize) {
        let n = self.n;
        let row = &mut self.active[s];
        row.clear();
        for t in 0..n {
            let c = self.val[s * n + t];
            if t != s && c != INF && c >= self.beta {
                row.push((c, t as u32));
            }
        }
        row.sort_unstable_by_key(|&(c, t)| (Reverse(c), t));
        let ps = &mut self.psum[s];
        ps.clear();
        ps.push(0);
        let mut acc = 0;
        for &(c, _) in row.iter() {
            acc += u64::from(c);
            ps.push(acc);
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn phi(&self) -> u64 {
        self.phi
    }

    pub fn active_pairs(&self) -> usize {
        self.active_pairs
    }

    /// Current value of `(s, t)`; `INF` if unreachable.
    pub fn value(&self, s: usize, t: usize) -> u32 {
        self.v(s, t)
    }

    pub fn shortcuts(&self) -> &ShortcutSet<W> {
        &self.h
    }

    pub fn trace(&self) -> &GreedyTrace {
        &self.trace
    }

    pub fn into_parts(self) -> (ShortcutSet<W>, GreedyTrace) {
        (self.h, self.trace)
    }

    /// Whether `(u, v)` may be added: in the closure, and not already a
    /// one-hop (shortest) connection.
    pub fn is_candidate(&self, u: usize, v: usize) -> bool {
        let x = self.v(u, v);
        x != INF && x >= 2
    }

    /// Exact gain of adding `(u, v)`, scoring every pair directly.
    pub fn delta(&self, u: usize, v: usize) -> u64 {
        if !self.is_candidate(u, v) {
            return 0;
        }
        let mut total = 0;
        for &(a0, s) in &self.cols[u] {
            let s = s as usize;
            for &(c, t) in &self.active[s] {
                let t = t as usize;
                let b = self.v(v, t);
                if b == INF {
                    continue;
                }
                if self.mode == Mode::Hopset && !(self.through(s, u, t) && self.through(u, v, t)) {
                    continue;
                }
                total += gain(c, a0 + 1 + b, self.beta);
            }
        }
        total
    }

    /// `UB[u]` for every tail.
    fn upper_bounds(&self) -> Vec<u64> {
        (0..self.n)
            .map(|u| {
                let mut ub = 0;
                for &(a0, s) in &self.cols[u] {
                    let a = a0 + 1;
                    let s = s as usize;
                    let row = &self.active[s];
                    let k = row.partition_point(|&(c, _)| c > a);
                    let sum = self.psum[s][k];
                    ub += if a < self.beta { sum } else { sum - u64::from(a) * k as u64 };
                }
                ub
            })
            .collect()
    }

    /// Best head for tail `u`: `(v, gain)`, smallest `v` on ties.
    fn score_tail(&mut self, u: usize) -> Option<(usize, u64)> {
        let n = self.n;
        let hop = self.mode == Mode::Hopset;
        let beta = i64::from(self.beta);
        let mut heads: Vec<usize> = Vec::new();
        let mut table: Vec<u64> = Vec::new();
        let targets: Vec<usize> = self.reach.reachable_from(u).collect();
        let to_u = &self.valt[u * n..(u + 1) * n];
        for t in targets {
            let mut len = 0usize;
            for &(s, c) in &self.live[t] {
                let s = s as usize;
                let a = to_u[s];
                if a == INF || c <= a + 1 || (hop && !self.through(s, u, t)) {
                    continue;
                }
                let a = a + 1;
                // F gets c on [0, p) and (q - x) on [p, q).
                let q = i64::from(c - a);
                let p = (beta - i64::from(a)).clamp(0, q);
                len = len.max(q as usize);
                let c = i64::from(c);
                self.diff[0].0 += c;
                self.diff[p as usize].0 += q - c;
                self.diff[q as usize].0 -= q;
                self.diff[p as usize].1 += 1;
                self.diff[q as usize].1 -= 1;
            }
            if len == 0 {
                continue;
            }
            table.clear();
            let (mut k, mut sl) = (0i64, 0i64);
            for x in 0..len {
                k += self.diff[x].0;
                sl += self.diff[x].1;
                table.push((k - sl * x as i64) as u64);
            }
            self.diff[..=len].fill((0, 0));
            for &(b, v) in &self.cols[t] {
                if b as usize >= len {
                    break;
                }
                let v = v as usize;
                let uv = self.val[u * n + v];
                if uv == INF || uv < 2 || (hop && !self.through(u, v, t)) {
                    continue;
                }
                if self.acc[v] == 0 {
                    heads.push(v);
                }
                self.acc[v] += table[b as usize];
            }
        }
        let mut best: Option<(usize, u64)> = None;
        for &v in &heads {
            let g = self.acc[v];
            self.acc[v] = 0;
            if g > 0 && best.map_or(true, |(bv, bg)| g > bg || (g == bg && v < bv)) {
                best = Some((v, g));
            }
        }
        best
    }

    /// Edge with the largest gain; lexicographically smallest on ties.
    pub fn argmax(&mut self) -> Result<((usize, usize), u64)> {
        if self.phi == 0 {
            return Err(Error::ZeroPotential);
        }
        let ub = self.upper_bounds();
        let mut order: Vec<usize> = (0..self.n).filter(|&u| ub[u] > 0).collect();
        order.sort_unstable_by_key(|&u| (Reverse(ub[u]), u));
        let mut best: Option<((usize, usize), u64)> = None;
        for u in order {
            if let Some(((bu, _), bg)) = best {
                if ub[u] < bg || (ub[u] == bg && u > bu) {
                    break;
                }
            }
            if let Some((v, g)) = self.score_tail(u) {
                let better = match best {
                    None => true,
                    Some((e, bg)) => g > bg || (g == bg && (u, v) < e),
                };
                if better {
                    best = Some(((u, v), g));
                }
            }
        }
        best.ok_or(Error::ZeroPotential)
    }

    /// Adds `(u, v)` and updates all values, rows, columns, and `φ`.
    /// Returns the realized decrease of `φ`.
    pub fn commit(&mut self, u: usize, v: usize) -> Result<u64> {
        if !self.reach.reaches(u, v) || u == v {
            return Err(Error::NotInClosure(u, v));
        }
        let n = self.n;
        let hop = self.mode == Mode::Hopset;
        let before = self.phi;
        let sources = self.cols[u].clone();
        let tail_row: Vec<u32> = self.val[v * n..(v + 1) * n].to_vec();
        let mut dirty_rows = Vec::new();
        let mut dirty_cols = vec![false; n];
        for &(a0, s) in &sources {
            let s = s as usize;
            let mut changed = false;
            for (t, &b) in tail_row.iter().enumerate() {
                if b == INF {
                    continue;
                }
                if hop && !(self.through(s, u, t) && self.through(u, v, t)) {
                    continue;
                }
                let y = a0 + 1 + b;
                let c = self.val[s * n + t];
                if y < c {
                    if c != INF && c >= self.beta && s != t {
                        self.phi -= u64::from(c);
                        self.active_pairs -= 1;
                    }
                    if y >= self.beta {
                        self.phi += u64::from(y);
                        self.active_pairs += 1;
                    }
                    self.val[s * n + t] = y;
                    self.valt[t * n + s] = y;
                    dirty_cols[t] = true;
                    changed = true;
                }
            }
            if changed {
                dirty_rows.push(s);
            }
        }
        for s in dirty_rows {
            self.rebuild_row(s);
        }
        for (t, d) in dirty_cols.into_iter().enumerate() {
            if d {
                self.rebuild_col(t);
            }
        }
        let weight = match self.mode {
            Mode::Shortcut => None,
            Mode::Hopset => self.dist_w[u * n + v].clone(),
        };
        self.h.insert(u, v, weight);
        Ok(before - self.phi)
    }

    /// One greedy round. Returns `None` once `φ = 0`.
    pub fn step(&mut self) -> Result<Option<Round>> {
        if self.phi == 0 {
            return Ok(None);
        }
        let phi_before = self.phi;
        let ((u, v), delta) = self.argmax()?;
        let realized = self.commit(u, v)?;
        assert_eq!(realized, delta, "scored gain of ({u}, {v}) differs from realized decrease");
        let round = Round {
            round: self.trace.rounds.len() + 1,
            u,
            v,
            delta,
            phi_before,
            phi_after: self.phi,
            active_pairs: self.active_pairs,
        };
        self.trace.rounds.push(round.clone());
        Ok(Some(round))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gain_cases() {
        assert_eq!(gain(5, 1, 3), 5);
        assert_eq!(gain(5, 3, 3), 2);
        assert_eq!(gain(5, 5, 3), 0);
        assert_eq!(gain(5, INF, 3), 0);
    }
}
