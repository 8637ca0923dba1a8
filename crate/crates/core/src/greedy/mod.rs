//! Greedy potential reduction for shortcut sets and exact hopsets.
//!
//! Each round adds the closure edge that lowers the potential the most, until
//! every reachable pair is within `β - 1` (hop-)edges.

mod diagnostics;
mod engine;

pub use diagnostics::{canonical_paths, path_cover_q, stickiness, PathCoverQ};
pub use engine::GreedyEngine;

use std::fmt::Write as _;

use crate::dist::{all_dist, hopdist_all, hopset_from_pairs, INF};
use crate::error::{Error, Result};
use crate::graph::{DiGraph, ShortcutSet};
use crate::reach::transitive_closure;
use crate::scalar::Weight;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Unweighted distances in `G ∪ H`.
    Shortcut,
    /// Fewest edges among shortest paths; added edges carry `dist_G`.
    Hopset,
}

/// One committed round.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Round {
    pub round: usize,
    pub u: usize,
    pub v: usize,
    pub delta: u64,
    pub phi_before: u64,
    pub phi_after: u64,
    pub active_pairs: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GreedyTrace {
    pub initial_phi: u64,
    pub rounds: Vec<Round>,
}

impl GreedyTrace {
    /// CSV with columns `round,u,v,delta,phi_after,active_pairs`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("round,u,v,delta,phi_after,active_pairs\n");
        for r in &self.rounds {
            let _ = writeln!(s, "{},{},{},{},{},{}", r.round, r.u, r.v, r.delta, r.phi_after, r.active_pairs);
        }
        s
    }

    /// Strict decrease every round, consistent bookkeeping, ends at zero,
    /// and no more rounds than the starting potential.
    pub fn is_well_formed(&self) -> bool {
        let mut phi = self.initial_phi;
        for r in &self.rounds {
            if r.phi_before != phi || r.delta == 0 || r.phi_after + r.delta != r.phi_before {
                return false;
            }
            phi = r.phi_after;
        }
        phi == 0 && self.rounds.len() as u64 <= self.initial_phi
    }
}

#[derive(Clone, Debug)]
pub struct GreedyConfig {
    pub beta: usize,
    pub mode: Mode,
    /// Maximum number of rounds; defaults to the starting potential.
    pub round_budget: Option<usize>,
}

impl GreedyConfig {
    pub fn new(beta: usize, mode: Mode) -> Self {
        Self {
            beta,
            mode,
            round_budget: None,
        }
    }
}

/// Runs the greedy from `H = ∅` until the potential reaches zero.
pub fn greedy<W: Weight>(g: &DiGraph<W>, cfg: &GreedyConfig) -> Result<(ShortcutSet<W>, GreedyTrace)> {
    if cfg.beta < 2 {
        return Err(Error::param("beta must be at least 2"));
    }
    let mut engine = GreedyEngine::new(g, &ShortcutSet::new(g.n()), cfg.beta, cfg.mode)?;
    let initial = engine.phi();
    let budget = cfg.round_budget.unwrap_or(usize::try_from(initial).unwrap_or(usize::MAX));
    let mut rounds = 0;
    while engine.step()?.is_some() {
        rounds += 1;
        if rounds > budget {
            return Err(Error::BudgetExceeded(budget));
        }
    }
    let (h, mut trace) = engine.into_parts();
    trace.initial_phi = initial;
    Ok((h, trace))
}

/// Shortcut set with hopbound `β - 1`.
pub fn greedy_shortcut<W: Weight>(g: &DiGraph<W>, beta: usize) -> Result<(ShortcutSet<W>, GreedyTrace)> {
    greedy(g, &GreedyConfig::new(beta, Mode::Shortcut))
}

/// Exact hopset with hopbound `β - 1`.
pub fn greedy_hopset<W: Weight>(g: &DiGraph<W>, beta: usize) -> Result<(ShortcutSet<W>, GreedyTrace)> {
    greedy(g, &GreedyConfig::new(beta, Mode::Hopset))
}

/// Potential of `H`, recomputed from scratch.
pub fn potential<W: Weight>(g: &DiGraph<W>, h: &ShortcutSet<W>, beta: usize, mode: Mode) -> u64 {
    let n = g.n();
    let mut phi = 0;
    let mut add = |s: usize, t: usize, x: u32| {
        if s != t && x != INF && x as usize >= beta {
            phi += u64::from(x);
        }
    };
    match mode {
        Mode::Shortcut => {
            let d = all_dist(g, h);
            for s in 0..n {
                for t in 0..n {
                    add(s, t, d.get(s, t));
                }
            }
        }
        Mode::Hopset => {
            let all = hopdist_all(g, h);
            for (s, row) in all.iter().enumerate() {
                for (t, x) in row.iter().enumerate() {
                    add(s, t, x.as_ref().map_or(INF, |(_, k)| *k));
                }
            }
        }
    }
    phi
}

/// `φ(H) - φ(H ∪ {e})`, recomputed from scratch.
pub fn delta<W: Weight>(g: &DiGraph<W>, h: &ShortcutSet<W>, beta: usize, mode: Mode, e: (usize, usize)) -> Result<u64> {
    let (u, v) = e;
    if u == v || !transitive_closure(g).reaches(u, v) {
        return Err(Error::NotInClosure(u, v));
    }
    let mut bigger = h.clone();
    match mode {
        Mode::Shortcut => {
            bigger.insert(u, v, None);
        }
        Mode::Hopset => {
            let extra = hopset_from_pairs(g, [(u, v)]);
            bigger.extend_from(&extra);
        }
    }
    Ok(potential(g, h, beta, mode) - potential(g, &bigger, beta, mode))
}

/// The edge the greedy would add to `H` next, with its gain.
pub fn argmax_edge<W: Weight>(g: &DiGraph<W>, h: &ShortcutSet<W>, beta: usize, mode: Mode) -> Result<((usize, usize), u64)> {
    GreedyEngine::new(g, h, beta, mode)?.argmax()
}
