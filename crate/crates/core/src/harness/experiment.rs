//! TOML-driven experiment sweeps written as CSV.
//!
//! ```toml
//! [[experiment]]
//! algos = ["greedy", "sqrt"]
//! family = "random_dag"
//! n = [64, 128]
//! seeds = [0, 1, 2]
//! p = 0.05
//! beta = 16          # optional, per-algorithm default otherwise
//! ```

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::generators::{generate, Family, FamilyParams};
use crate::harness::registry::{build, Algo, BuildParams};

/// One sweep: every algorithm on every `(n, seed)` instance of a family.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Experiment {
    pub algos: Vec<String>,
    pub family: Family,
    pub n: Vec<usize>,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    pub p: Option<f64>,
    pub width: Option<usize>,
    pub wmax: Option<u64>,
    pub rows: Option<usize>,
    pub beta: Option<usize>,
    pub d: Option<usize>,
    pub samples: Option<usize>,
    #[serde(default)]
    pub hopset: bool,
}

fn default_seeds() -> Vec<u64> {
    vec![0]
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub experiment: Vec<Experiment>,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }
}

/// One CSV row. `size` and `hopbound` are empty when the run failed, and
/// `hopbound` always comes from the validator.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentRow {
    pub algo: String,
    pub n: usize,
    pub m: usize,
    pub param: Option<usize>,
    pub size: Option<usize>,
    pub hopbound: Option<u32>,
    pub seed: u64,
    pub millis: u128,
    /// `valid`, `invalid`, or `error:<kind>`.
    pub status: String,
}

fn run_one(algo_id: &str, exp: &Experiment, n: usize, seed: u64) -> ExperimentRow {
    let mut row = ExperimentRow {
        algo: algo_id.to_string(),
        n,
        m: 0,
        param: None,
        size: None,
        hopbound: None,
        seed,
        millis: 0,
        status: String::new(),
    };
    let fp = FamilyParams {
        p: exp.p.unwrap_or(FamilyParams::default().p),
        width: exp.width.unwrap_or(FamilyParams::default().width),
        wmax: exp.wmax.unwrap_or(FamilyParams::default().wmax),
        rows: exp.rows,
    };
    let outcome = (|| -> Result<()> {
        let algo: Algo = algo_id.parse()?;
        let g = generate(exp.family, n, &fp, seed)?;
        row.n = g.n();
        row.m = g.m();
        let params = BuildParams {
            beta: exp.beta,
            d: exp.d,
            samples: exp.samples,
            seed,
            hopset: exp.hopset,
            ..Default::default()
        };
        let start = Instant::now();
        let built = build(&g, algo, &params)?;
        row.millis = start.elapsed().as_millis();
        row.param = Some(built.param);
        row.size = Some(built.shortcuts.len());
        let rep = built.validate(&g);
        row.hopbound = Some(rep.hopbound);
        row.status = if rep.valid { "valid" } else { "invalid" }.to_string();
        Ok(())
    })();
    if let Err(e) = outcome {
        row.status = format!("error:{}", e.kind());
    }
    row
}

/// Runs every experiment in order. A failing run becomes an `error:` row and
/// the sweep continues.
pub fn run_experiment(cfg: &ExperimentConfig) -> Vec<ExperimentRow> {
    let mut rows = Vec::new();
    for exp in &cfg.experiment {
        for &n in &exp.n {
            for &seed in &exp.seeds {
                for algo in &exp.algos {
                    rows.push(run_one(algo, exp, n, seed));
                }
            }
        }
    }
    rows
}

pub const CSV_HEADER: &str = "algo,n,m,param,size,hopbound,seed,millis,status";

/// Writes the header and one line per row.
pub fn write_csv<W: Write>(rows: &[ExperimentRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_HEADER.split(','))?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(Error::from)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn csv_of(rows: &[ExperimentRow]) -> String {
        let mut buf = Vec::new();
        write_csv(rows, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn empty_config_gives_header_only() {
        let cfg = ExperimentConfig::parse("").unwrap();
        assert_eq!(csv_of(&run_experiment(&cfg)), format!("{CSV_HEADER}\n"));
    }

    #[test]
    fn single_run() {
        let cfg = ExperimentConfig::parse(
            r#"
            [[experiment]]
            algos = ["sqrt"]
            family = "path"
            n = [20]
            "#,
        )
        .unwrap();
        let rows = run_experiment(&cfg);
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].status, "valid");
        assert_eq!((rows[0].n, rows[0].m), (20, 19));
        let text = csv_of(&rows);
        assert_eq!(text.lines().count(), 2);
        assert!(text.lines().nth(1).unwrap().starts_with("sqrt,20,19,"));
    }

    #[test]
    fn failures_become_rows() {
        let cfg = ExperimentConfig::parse(
            r#"
            [[experiment]]
            algos = ["nope", "greedy", "setcover"]
            family = "random_dag"
            n = [12]
            seeds = [1, 2]
            beta = 1
            d = 0
            "#,
        )
        .unwrap();
        let rows = run_experiment(&cfg);
        assert_eq!(rows.len(), 6);
        assert!(rows.iter().all(|r| r.status == "error:invalid-parameter"));
        assert!(csv_of(&rows).lines().nth(1).unwrap().ends_with(",,,1,0,error:invalid-parameter"));
    }

    #[test]
    fn greedy_sweep_has_bounded_ratio() {
        let cfg = ExperimentConfig::parse(
            r#"
            [[experiment]]
            algos = ["greedy"]
            family = "random_dag"
            n = [64, 128, 256]
            p = 0.03
            "#,
        )
        .unwrap();
        let rows = run_experiment(&cfg);
        assert_eq!(rows.len(), 3);
        for r in &rows {
            assert_eq!(r.status, "valid");
            assert!(r.hopbound.unwrap() as usize <= r.param.unwrap() - 1);
            assert!(r.size.unwrap() <= 2 * r.n, "{r:?}");
        }
    }

    #[test]
    fn rejects_unknown_keys_and_families() {
        assert!(ExperimentConfig::parse("[[experiment]]\nalgos=[]\nfamily=\"path\"\nn=[1]\nbogus=1\n").is_err());
        assert!(ExperimentConfig::parse("[[experiment]]\nalgos=[]\nfamily=\"blob\"\nn=[1]\n").is_err());
    }
}
