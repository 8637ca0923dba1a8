//! Weight perturbation that makes every shortest path unique.
//!
//! Every edge gets `w + ε + δ_e`. The `ε` term makes fewer hops strictly
//! cheaper among paths of equal original length; `δ_e` breaks the remaining
//! ties. Both are small enough that no path can overtake one that was
//! strictly shorter before. Arithmetic is exact.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::Rng;

use crate::graph::{DiGraph, ShortcutSet};
use crate::harness::rng;
use crate::scalar::Weight;

/// How the per-edge tie-breakers `δ_e` are chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TieBreak {
    /// `δ_e = ε · 2^-(m - rank)`, rank being the position of `(u, v)` in
    /// lexicographic edge order. Distinct edge sets get distinct sums, so
    /// uniqueness is guaranteed; lexicographically smaller edges are preferred.
    Deterministic,
    /// `δ_e` uniform on `[0, ε / (m + 1)]` with 64 random bits.
    Random(u64),
}

fn lcm(a: &BigInt, b: &BigInt) -> BigInt {
    num_integer::Integer::lcm(a, b)
}

/// Perturbed copy of `G ∪ H`. When an `H` edge duplicates a `G` edge the
/// lighter weight is kept. `H` edges without a weight count as weight one.
pub fn perturb_unique<W: Weight>(g: &DiGraph<W>, h: &ShortcutSet<W>, tie: TieBreak) -> DiGraph<BigRational> {
    let n = g.n();
    let mut edges: Vec<(usize, usize, BigRational)> = g.edges().map(|(u, v, w)| (u, v, w.to_rational())).collect();
    for e in h.edges() {
        let w = e.weight.as_ref().map_or_else(BigRational::one, Weight::to_rational);
        match edges.iter_mut().find(|(a, b, _)| *a == e.from && *b == e.to) {
            Some(slot) if w < slot.2 => slot.2 = w,
            Some(_) => {}
            None => edges.push((e.from, e.to, w)),
        }
    }
    edges.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
    let m = edges.len();

    // Distinct path lengths differ by at least 1/L, L the lcm of denominators.
    let mut l = BigInt::one();
    let mut wmax = BigRational::one();
    for (_, _, w) in &edges {
        l = lcm(&l, w.denom());
        if *w > wmax {
            wmax = w.clone();
        }
    }
    let nn = BigRational::from_integer(BigInt::from(n.max(1)));
    let eps = BigRational::new(BigInt::one(), l) / (nn.clone() * (wmax * nn + BigRational::one()));

    let mut rng = match tie {
        TieBreak::Random(seed) => Some(rng(seed)),
        TieBreak::Deterministic => None,
    };
    let two = BigInt::from(2);
    let perturbed = edges.into_iter().enumerate().map(|(rank, (u, v, w))| {
        let delta = match rng.as_mut() {
            None => eps.clone() / BigRational::from_integer(num_traits::pow(two.clone(), m - rank)),
            Some(r) => {
                let bits = BigInt::from(r.gen::<u64>());
                let scale = BigInt::from(m + 1) * (BigInt::one() << 64);
                eps.clone() * BigRational::new(bits, scale)
            }
        };
        (u, v, w + eps.clone() + delta)
    });
    DiGraph::from_edges(n, true, perturbed.collect::<Vec<_>>()).expect("perturbed edges are valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use crate::dist::{hopdist_all, hopdist_from, union_adjacency};
    use crate::testutil::random_weighted_dag;

    /// Number of shortest `s -> t` paths for every `t`, by DP over vertices in
    /// distance order.
    fn count_shortest(g: &DiGraph<BigRational>, s: usize) -> Vec<BigInt> {
        let adj = union_adjacency(g, &ShortcutSet::new(g.n()));
        let d = hopdist_from(&adj, s);
        let mut order: Vec<usize> = (0..g.n()).filter(|&v| d[v].is_some()).collect();
        order.sort_by(|&a, &b| d[a].as_ref().unwrap().0.cmp(&d[b].as_ref().unwrap().0));
        let mut count = vec![BigInt::zero(); g.n()];
        count[s] = BigInt::one();
        for &u in &order {
            let du = d[u].as_ref().unwrap().0.clone();
            for (v, w) in g.out_edges(u) {
                if let Some((dv, _)) = &d[*v] {
                    if du.clone() + w.clone() == *dv {
                        let c = count[u].clone();
                        count[*v] += c;
                    }
                }
            }
        }
        count
    }

    #[test]
    fn diamond_gets_one_winner() {
        let g = DiGraph::<u64>::from_edges(4, true, [(0, 1, 1), (1, 3, 1), (0, 2, 1), (2, 3, 1)]).unwrap();
        let p = perturb_unique(&g, &ShortcutSet::new(4), TieBreak::Deterministic);
        let via1 = p.weight(0, 1).unwrap() + p.weight(1, 3).unwrap();
        let via2 = p.weight(0, 2).unwrap() + p.weight(2, 3).unwrap();
        assert_ne!(via1, via2);
        assert!(via1 < via2, "lexicographically smaller edges win");
        assert_eq!(count_shortest(&p, 0)[3], BigInt::one());
    }

    #[test]
    fn unique_paths_are_kept() {
        // 0->1->2 costs 2, the direct edge costs 3.
        let g = DiGraph::<u64>::from_edges(3, true, [(0, 1, 1), (1, 2, 1), (0, 2, 3)]).unwrap();
        let p = perturb_unique(&g, &ShortcutSet::new(3), TieBreak::Deterministic);
        let adj = union_adjacency(&p, &ShortcutSet::new(3));
        assert_eq!(hopdist_from(&adj, 0)[2].as_ref().unwrap().1, 2);
    }

    #[test]
    fn hopset_edges_are_preferred_by_hops() {
        let g = DiGraph::<u64>::from_edges(3, true, [(0, 1, 1), (1, 2, 1)]).unwrap();
        let mut h = ShortcutSet::new(3);
        h.insert(0, 2, Some(2));
        let p = perturb_unique(&g, &h, TieBreak::Deterministic);
        assert_eq!(p.m(), 3);
        let adj = union_adjacency(&p, &ShortcutSet::new(3));
        assert_eq!(hopdist_from(&adj, 0)[2].as_ref().unwrap().1, 1);
    }

    #[test]
    fn random_dags_have_unique_min_hop_shortest_paths() {
        for seed in 0..12 {
            let g = random_weighted_dag(20, 0.25, 3, seed);
            let h = ShortcutSet::new(20);
            let base = hopdist_all(&g, &h);
            for tie in [TieBreak::Deterministic, TieBreak::Random(seed)] {
                let p = perturb_unique(&g, &h, tie);
                let adj = union_adjacency(&p, &ShortcutSet::new(20));
                for s in 0..20 {
                    let counts = count_shortest(&p, s);
                    let pd = hopdist_from(&adj, s);
                    for t in 0..20 {
                        match &base[s][t] {
                            Some((_, hops)) => {
                                assert_eq!(counts[t], BigInt::one(), "seed {seed} {s}->{t}");
                                assert_eq!(pd[t].as_ref().unwrap().1, *hops);
                            }
                            None => assert!(pd[t].is_none()),
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn rational_weights_are_supported() {
        let g = DiGraph::<BigRational>::parse("3 3 weighted\n0 1 1/3\n1 2 1/3\n0 2 2/3\n").unwrap().0;
        let p = perturb_unique(&g, &ShortcutSet::new(3), TieBreak::Deterministic);
        assert_eq!(count_shortest(&p, 0)[2], BigInt::one());
        let adj = union_adjacency(&p, &ShortcutSet::new(3));
        assert_eq!(hopdist_from(&adj, 0)[2].as_ref().unwrap().1, 1);
    }
}
