//! Randomized baselines: folklore pair sampling and chain/node sampling.

use rand::seq::index::sample;
use rand::Rng;

use crate::chain::{chain_cover, entry};
use crate::dist::hopset_from_pairs;
use crate::error::{Error, Result};
use crate::graph::{DiGraph, ShortcutSet};
use crate::harness::rng;
use crate::reach::transitive_closure;
use crate::scalar::Weight;
use crate::scc::condense;
use crate::supershortcut::{supershortcut, PathScheme};

/// Samples `h_count` ordered pairs uniformly (with replacement) and keeps
/// those in the transitive closure. In hopset mode each kept edge carries
/// `dist_G`.
pub fn folklore<W: Weight>(g: &DiGraph<W>, h_count: usize, seed: u64, hopset: bool) -> ShortcutSet<W> {
    let n = g.n();
    let mut pairs = Vec::new();
    if n >= 2 {
        let reach = transitive_closure(g);
        let mut r = rng(seed);
        for _ in 0..h_count {
            let u = r.gen_range(0..n);
            let v = r.gen_range(0..n);
            if u != v && reach.reaches(u, v) {
                pairs.push((u, v));
            }
        }
    }
    if hopset {
        hopset_from_pairs(g, pairs)
    } else {
        ShortcutSet::from_pairs(n, pairs)
    }
}

/// Hopbound at which [`folklore`] with `h` samples is expected to hold:
/// `⌈4 (n/√h) ln n⌉`, capped at `n`.
pub fn folklore_bound(n: usize, h: usize) -> usize {
    if n < 2 || h == 0 {
        return n.max(1);
    }
    let b = 4.0 * n as f64 / (h as f64).sqrt() * (n as f64).ln();
    (b.ceil() as usize).clamp(1, n)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KpConfig {
    pub d: usize,
    /// Chains sampled: `⌈c1 · n ln n / D²⌉`.
    pub c1: f64,
    /// Vertices sampled: `⌈c2 · n ln n / D⌉`.
    pub c2: f64,
    pub scheme: PathScheme,
}

impl KpConfig {
    pub fn new(d: usize) -> Self {
        KpConfig {
            d,
            c1: 2.0,
            c2: 2.0,
            scheme: PathScheme::default(),
        }
    }
}

/// Hopbound the chain sampling targets: at most `D` uncovered vertices and,
/// once a sampled vertex and a sampled chain are hit, at most `2D` chain runs
/// at five hops each.
pub fn kp_bound(d: usize) -> usize {
    12 * d
}

fn sample_size(c: f64, n: usize, denom: f64) -> usize {
    let nf = n as f64;
    (c * nf * nf.ln() / denom).ceil().max(0.0) as usize
}

/// Cover with `⌈2n/D⌉` paths, supershortcut them, sample chains and
/// vertices, and join every sampled vertex to its entry on every sampled
/// chain.
pub fn kp_randomized<W: Weight>(g: &DiGraph<W>, cfg: &KpConfig, seed: u64) -> Result<ShortcutSet<W>> {
    let d = cfg.d;
    if d == 0 {
        return Err(Error::param("D must be at least 1"));
    }
    if !(cfg.c1 >= 0.0 && cfg.c2 >= 0.0) {
        return Err(Error::param("sampling constants must be non-negative"));
    }
    let (cd, _) = condense(g);
    let dag = &cd.dag;
    let n = dag.n();
    if n <= 1 {
        return Ok(cd.lift(&ShortcutSet::new(n)));
    }
    let cover = chain_cover(dag, (2 * n).div_ceil(d))?;
    let mut h = supershortcut(dag, &cover, cfg.scheme);
    let mut r = rng(seed);
    let df = d as f64;
    let chains = sample(&mut r, cover.len(), sample_size(cfg.c1, n, df * df).min(cover.len())).into_vec();
    let nodes = sample(&mut r, n, sample_size(cfg.c2, n, df).min(n)).into_vec();
    let reach = transitive_closure(dag);
    for &v in &nodes {
        for &c in &chains {
            if let Some(y) = entry(&reach, v, cover.chain(c)) {
                if y != v {
                    h.insert(v, y, None);
                }
            }
        }
    }
    Ok(cd.lift(&h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{validate_hopset, validate_shortcut_set};
    use crate::harness::generators::total_order;
    use crate::testutil::{path, random_dag, random_weighted_dag};

    #[test]
    fn folklore_examples() {
        let g = random_dag(30, 0.1, 1);
        assert!(folklore(&g, 0, 5, false).is_empty());
        let k = total_order(8);
        let h = folklore(&k, 4096, 1, false);
        assert_eq!(h.len(), 28);
        assert_eq!(validate_shortcut_set(&k, &h, 1).hopbound, 1);
        assert_eq!(folklore(&g, 100, 9, false).pairs().collect::<Vec<_>>(), folklore(&g, 100, 9, false).pairs().collect::<Vec<_>>());
    }

    #[test]
    fn folklore_hopset_is_exact() {
        let g = random_weighted_dag(40, 0.1, 9, 3);
        let h = folklore(&g, 200, 3, true);
        assert!(h.edges().iter().all(|e| e.weight.is_some()));
        assert!(validate_hopset(&g, &h, 40).valid);
    }

    #[test]
    fn folklore_meets_bound_on_most_seeds() {
        let n = 128;
        let beta = folklore_bound(n, n);
        let ok = (0..20)
            .filter(|&s| {
                let g = random_dag(n, 0.03, s);
                validate_shortcut_set(&g, &folklore(&g, n, s, false), beta).valid
            })
            .count();
        assert!(ok >= 19, "{ok}/20");
    }

    #[test]
    fn kp_examples() {
        // Without samples only the supershortcut remains.
        let g = random_dag(20, 0.2, 2);
        let cfg = KpConfig { c1: 0.0, c2: 0.0, ..KpConfig::new(5) };
        let big = kp_randomized(&g, &cfg, 1).unwrap();
        let (cd, _) = condense(&g);
        let cover = chain_cover(&cd.dag, 8).unwrap();
        assert_eq!(big.pairs().collect::<Vec<_>>(), cd.lift(&supershortcut(&cd.dag, &cover, PathScheme::default())).pairs().collect::<Vec<_>>());
        let p = path(50);
        let h = kp_randomized(&p, &KpConfig::new(4), 3).unwrap();
        assert!(validate_shortcut_set(&p, &h, 4).valid);
        assert!(kp_randomized(&p, &KpConfig::new(0), 3).is_err());
    }

    #[test]
    fn kp_meets_bound_on_most_seeds() {
        let ok = (0..20)
            .filter(|&s| {
                let g = random_dag(216, 0.02, s);
                let h = kp_randomized(&g, &KpConfig::new(6), s).unwrap();
                validate_shortcut_set(&g, &h, kp_bound(6)).valid
            })
            .count();
        assert!(ok >= 18, "{ok}/20");
    }
}
