//! Every construction behind one entry point, with the hopbound it claims.

use std::fmt;
use std::str::FromStr;

use crate::chain::{ceil_sqrt, sqrt_bound, sqrt_shortcut};
use crate::chain_greedy::{chain_greedy_with, ChainGreedyConfig};
use crate::dist::{validate_hopset, validate_shortcut_set, ValidationReport};
use crate::error::{Error, Result};
use crate::graph::{DiGraph, ShortcutSet};
use crate::greedy::{greedy_hopset, greedy_shortcut};
use crate::harness::baselines::{folklore, folklore_bound, kp_bound, kp_randomized, KpConfig};
use crate::scalar::Weight;
use crate::scc::condense;
use crate::setcover::{det_shortcut_with, DetConfig};
use crate::supershortcut::PathScheme;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algo {
    Greedy,
    GreedyHopset,
    ChainGreedy,
    Setcover,
    Sqrt,
    Folklore,
    Kp,
}

impl Algo {
    pub const ALL: [Algo; 7] = [
        Algo::Greedy,
        Algo::GreedyHopset,
        Algo::ChainGreedy,
        Algo::Setcover,
        Algo::Sqrt,
        Algo::Folklore,
        Algo::Kp,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Algo::Greedy => "greedy",
            Algo::GreedyHopset => "greedy-hopset",
            Algo::ChainGreedy => "chain-greedy",
            Algo::Setcover => "setcover",
            Algo::Sqrt => "sqrt",
            Algo::Folklore => "folklore",
            Algo::Kp => "kp",
        }
    }

    pub fn is_randomized(self) -> bool {
        matches!(self, Algo::Folklore | Algo::Kp)
    }

    /// Whether the output is an exact hopset rather than a shortcut set.
    pub fn makes_hopset(self, params: &BuildParams) -> bool {
        match self {
            Algo::GreedyHopset => true,
            Algo::Folklore => params.hopset,
            _ => false,
        }
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Algo {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algo::ALL
            .into_iter()
            .find(|a| a.id() == s)
            .ok_or_else(|| Error::param(format!("unknown algorithm `{s}`")))
    }
}

/// Knobs shared by all algorithms; each reads the ones it needs.
#[derive(Clone, Debug, PartialEq)]
pub struct BuildParams {
    /// Target hopbound for the greedy algorithms.
    pub beta: Option<usize>,
    /// Length parameter for the set-cover pipeline and chain sampling.
    pub d: Option<usize>,
    /// Pair samples for folklore sampling.
    pub samples: Option<usize>,
    pub seed: u64,
    pub hopset: bool,
    pub oracle_check: bool,
    pub kp_c1: f64,
    pub kp_c2: f64,
    pub scheme: PathScheme,
}

impl Default for BuildParams {
    fn default() -> Self {
        BuildParams {
            beta: None,
            d: None,
            samples: None,
            seed: 0,
            hopset: false,
            oracle_check: false,
            kp_c1: 2.0,
            kp_c2: 2.0,
            scheme: PathScheme::default(),
        }
    }
}

/// `⌈2√n⌉`.
pub fn default_beta(n: usize) -> usize {
    (2 * ceil_sqrt(n)).max(2)
}

/// `⌈n^{1/3}⌉`.
pub fn default_d(n: usize) -> usize {
    crate::chain_greedy::threshold(n).max(1)
}

#[derive(Clone, Debug)]
pub struct Built<W> {
    pub algo: Algo,
    pub shortcuts: ShortcutSet<W>,
    /// Hopbound the algorithm claims for this input.
    pub bound: usize,
    /// The β, `D` or sample count actually used.
    pub param: usize,
    pub hopset: bool,
}

impl<W: Weight> Built<W> {
    /// Re-checks the output against its claimed bound.
    pub fn validate(&self, g: &DiGraph<W>) -> ValidationReport {
        if self.hopset {
            validate_hopset(g, &self.shortcuts, self.bound)
        } else {
            validate_shortcut_set(g, &self.shortcuts, self.bound)
        }
    }
}

pub fn build<W: Weight>(g: &DiGraph<W>, algo: Algo, params: &BuildParams) -> Result<Built<W>> {
    let n = g.n();
    let hopset = algo.makes_hopset(params);
    let (shortcuts, bound, param) = match algo {
        Algo::Greedy | Algo::GreedyHopset => {
            let beta = params.beta.unwrap_or_else(|| default_beta(n));
            let (h, _) = if algo == Algo::Greedy {
                greedy_shortcut(g, beta)?
            } else {
                greedy_hopset(g, beta)?
            };
            (h, beta - 1, beta)
        }
        Algo::ChainGreedy => {
            let out = chain_greedy_with(
                g,
                &ChainGreedyConfig {
                    scheme: params.scheme,
                    ..Default::default()
                },
            )?;
            (out.shortcuts, out.bound, out.bound)
        }
        Algo::Setcover => {
            let d = params.d.unwrap_or_else(|| default_d(n));
            let cfg = DetConfig {
                d,
                scheme: params.scheme,
                oracle_check: params.oracle_check,
            };
            let out = det_shortcut_with(g, &cfg)?;
            (out.shortcuts, out.bound, d)
        }
        Algo::Sqrt => {
            let (cd, _) = condense(g);
            let h = sqrt_shortcut(g, params.scheme);
            (h, cd.lifted_bound(sqrt_bound(cd.dag.n()).max(1)), ceil_sqrt(n))
        }
        Algo::Folklore => {
            let h = params.samples.unwrap_or(n);
            (folklore(g, h, params.seed, params.hopset), folklore_bound(n, h), h)
        }
        Algo::Kp => {
            let d = params.d.unwrap_or_else(|| default_d(n));
            let cfg = KpConfig {
                d,
                c1: params.kp_c1,
                c2: params.kp_c2,
                scheme: params.scheme,
            };
            let (cd, _) = condense(g);
            (kp_randomized(g, &cfg, params.seed)?, cd.lifted_bound(kp_bound(d)), d)
        }
    };
    Ok(Built {
        algo,
        shortcuts,
        bound,
        param,
        hopset,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{random_dag, random_digraph, random_weighted_dag};

    #[test]
    fn ids_round_trip() {
        for a in Algo::ALL {
            assert_eq!(a.id().parse::<Algo>().unwrap(), a);
        }
        assert!("nope".parse::<Algo>().is_err());
    }

    #[test]
    fn every_algorithm_meets_its_bound() {
        let dags = [random_dag(40, 0.08, 1), random_digraph(40, 0.05, 2)];
        for g in &dags {
            for a in Algo::ALL {
                let params = BuildParams { seed: 3, ..Default::default() };
                let b = build(g, a, &params).unwrap();
                let rep = b.validate(g);
                assert!(rep.valid, "{a}: {:?}", rep.failure);
            }
        }
        let w = random_weighted_dag(30, 0.1, 7, 4);
        for a in [Algo::GreedyHopset, Algo::Folklore] {
            let b = build(&w, a, &BuildParams { hopset: true, ..Default::default() }).unwrap();
            assert!(b.hopset);
            assert!(b.validate(&w).valid, "{a}");
        }
    }
}
