//! Seeded graph generators. Every generator is deterministic for a given seed.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::graph::DiGraph;
use crate::harness::rng;

fn check_p(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::param(format!("edge probability {p} outside [0, 1]")))
    }
}

pub fn path(n: usize) -> DiGraph<u64> {
    DiGraph::from_pairs(n, (1..n).map(|i| (i - 1, i))).expect("path edges are valid")
}

/// Complete DAG: `i -> j` for all `i < j`.
pub fn total_order(n: usize) -> DiGraph<u64> {
    DiGraph::from_pairs(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))))
        .expect("order edges are valid")
}

/// `r x c` grid with edges pointing right and down.
pub fn grid(r: usize, c: usize) -> DiGraph<u64> {
    let id = |i: usize, j: usize| i * c + j;
    let mut edges = Vec::new();
    for i in 0..r {
        for j in 0..c {
            if j + 1 < c {
                edges.push((id(i, j), id(i, j + 1)));
            }
            if i + 1 < r {
                edges.push((id(i, j), id(i + 1, j)));
            }
        }
    }
    DiGraph::from_pairs(r * c, edges).expect("grid edges are valid")
}

/// Each pair `i < j` is an edge independently with probability `p`.
pub fn random_dag(n: usize, p: f64, seed: u64) -> Result<DiGraph<u64>> {
    check_p(p)?;
    let mut rng = rng(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                edges.push((i, j));
            }
        }
    }
    DiGraph::from_pairs(n, edges)
}

/// Consecutive layers of `width` vertices. Edges go from one layer to the next
/// with probability `p`; every vertex outside the first layer gets at least
/// one in-edge, so the diameter is about `n / width`.
pub fn layered(n: usize, width: usize, p: f64, seed: u64) -> Result<DiGraph<u64>> {
    check_p(p)?;
    if width == 0 {
        return Err(Error::param("layer width must be positive"));
    }
    let mut rng = rng(seed);
    let mut g = DiGraph::new(n);
    let mut start = 0;
    while start + width < n {
        let prev = start..start + width;
        let next = start + width..(start + 2 * width).min(n);
        for v in next {
            let mut any = false;
            for u in prev.clone() {
                if rng.gen_bool(p) {
                    g.add_edge(u, v, 1)?;
                    any = true;
                }
            }
            if !any {
                g.add_edge(rng.gen_range(prev.clone()), v, 1)?;
            }
        }
        start += width;
    }
    Ok(g)
}

/// Each ordered pair `u != v` is an edge independently with probability `p`.
pub fn random_digraph(n: usize, p: f64, seed: u64) -> Result<DiGraph<u64>> {
    check_p(p)?;
    let mut rng = rng(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    DiGraph::from_pairs(n, edges)
}

/// [`random_dag`] with integer weights drawn uniformly from `1..=wmax`.
pub fn random_weighted_dag(n: usize, p: f64, wmax: u64, seed: u64) -> Result<DiGraph<u64>> {
    if wmax == 0 {
        return Err(Error::param("wmax must be at least 1"));
    }
    let shape = random_dag(n, p, seed)?;
    with_random_weights(&shape, wmax, seed ^ 0x9e37_79b9_7f4a_7c15)
}

/// Copy of `g` with integer weights drawn uniformly from `1..=wmax`.
pub fn with_random_weights(g: &DiGraph<u64>, wmax: u64, seed: u64) -> Result<DiGraph<u64>> {
    let mut rng = rng(seed);
    DiGraph::from_edges(
        g.n(),
        true,
        g.edges()
            .map(|(u, v, _)| (u, v, rng.gen_range(1..=wmax)))
            .collect::<Vec<_>>(),
    )
}

/// Relabels vertices by a seeded random permutation.
pub fn shuffled(g: &DiGraph<u64>, seed: u64) -> DiGraph<u64> {
    let mut perm: Vec<usize> = (0..g.n()).collect();
    perm.shuffle(&mut rng(seed));
    DiGraph::from_edges(
        g.n(),
        g.is_weighted(),
        g.edges().map(|(u, v, w)| (perm[u], perm[v], *w)).collect::<Vec<_>>(),
    )
    .expect("relabeling preserves validity")
}

/// Generator families addressable by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Path,
    TotalOrder,
    Grid,
    Layered,
    RandomDag,
    RandomDigraph,
    RandomWeightedDag,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::Path,
        Family::TotalOrder,
        Family::Grid,
        Family::Layered,
        Family::RandomDag,
        Family::RandomDigraph,
        Family::RandomWeightedDag,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Family::Path => "path",
            Family::TotalOrder => "total_order",
            Family::Grid => "grid",
            Family::Layered => "layered",
            Family::RandomDag => "random_dag",
            Family::RandomDigraph => "random_digraph",
            Family::RandomWeightedDag => "random_weighted_dag",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.replace('-', "_");
        Family::ALL
            .into_iter()
            .find(|f| f.id() == s)
            .ok_or_else(|| Error::param(format!("unknown graph family `{s}`")))
    }
}

/// Shape parameters; each family reads the ones it needs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FamilyParams {
    pub p: f64,
    pub width: usize,
    pub wmax: u64,
    /// Grid rows; defaults to `⌊√n⌋`.
    pub rows: Option<usize>,
}

impl Default for FamilyParams {
    fn default() -> Self {
        FamilyParams {
            p: 0.05,
            width: 8,
            wmax: 10,
            rows: None,
        }
    }
}

/// Instance of `family` with about `n` vertices (a grid uses `rows x ⌊n/rows⌋`).
pub fn generate(family: Family, n: usize, params: &FamilyParams, seed: u64) -> Result<DiGraph<u64>> {
    match family {
        Family::Path => Ok(path(n)),
        Family::TotalOrder => Ok(total_order(n)),
        Family::Grid => {
            let r = params.rows.unwrap_or_else(|| (n as f64).sqrt() as usize).max(1);
            Ok(grid(r, n / r))
        }
        Family::Layered => layered(n, params.width, params.p, seed),
        Family::RandomDag => random_dag(n, params.p, seed),
        Family::RandomDigraph => random_digraph(n, params.p, seed),
        Family::RandomWeightedDag => random_weighted_dag(n, params.p, params.wmax, seed),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_shapes() {
        assert_eq!(path(3).m(), 2);
        let g = grid(2, 2);
        assert_eq!((g.n(), g.m()), (4, 4));
        assert_eq!(total_order(5).m(), 10);
    }

    #[test]
    fn random_dag_round_trips_through_text() {
        let g = random_dag(64, 0.05, 7).unwrap();
        let (back, warnings) = DiGraph::<u64>::parse(&g.to_text()).unwrap();
        assert!(warnings.is_empty());
        assert_eq!(g, back);
    }

    #[test]
    fn generators_are_deterministic() {
        assert_eq!(random_dag(50, 0.1, 3).unwrap(), random_dag(50, 0.1, 3).unwrap());
        assert_ne!(random_dag(50, 0.1, 3).unwrap(), random_dag(50, 0.1, 4).unwrap());
        assert_eq!(layered(60, 4, 0.3, 1).unwrap(), layered(60, 4, 0.3, 1).unwrap());
        assert_eq!(
            random_weighted_dag(30, 0.2, 9, 2).unwrap(),
            random_weighted_dag(30, 0.2, 9, 2).unwrap()
        );
    }

    #[test]
    fn layered_is_acyclic_and_connected_forward() {
        let g = layered(100, 5, 0.2, 11).unwrap();
        assert!(g.is_acyclic());
        for v in 5..100 {
            assert!(g.in_edges(v).len() >= 1);
        }
    }

    #[test]
    fn parameter_validation() {
        assert!(random_dag(5, 1.5, 0).is_err());
        assert!(layered(5, 0, 0.5, 0).is_err());
        assert!(random_weighted_dag(5, 0.5, 0, 0).is_err());
    }

    #[test]
    fn weighted_generator_respects_range() {
        let g = random_weighted_dag(40, 0.2, 7, 5).unwrap();
        assert!(g.is_weighted());
        assert!(g.edges().all(|(_, _, &w)| (1..=7).contains(&w)));
    }

    #[test]
    fn families_by_name() {
        assert_eq!("random-dag".parse::<Family>().unwrap(), Family::RandomDag);
        assert!("blob".parse::<Family>().is_err());
        let fp = FamilyParams::default();
        for f in Family::ALL {
            let g = generate(f, 36, &fp, 1).unwrap();
            assert_eq!(g.n(), 36, "{}", f.id());
            assert_eq!(g, generate(f, 36, &fp, 1).unwrap());
        }
    }
}
