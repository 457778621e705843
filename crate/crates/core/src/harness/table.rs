use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{keyed_stream, streams, with_workers, HarnessError, Result};
use crate::embedding::{geometric_success, EmbeddingSpec};
use crate::problems::{generate, BaseProblem, GeneratedProblem};

/// What the box half-width scales with.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DeltaBase {
    /// `sqrt(de)`
    #[serde(rename = "de")]
    SqrtDe,
    /// `sqrt(D)`
    #[serde(rename = "D")]
    SqrtAmbient,
}

/// `delta = coef * sqrt(de)` or `coef * sqrt(D)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaFormula {
    pub coef: f64,
    pub base: DeltaBase,
}

impl DeltaFormula {
    pub fn evaluate(&self, de: usize, ambient_dim: usize) -> f64 {
        let scale = match self.base {
            DeltaBase::SqrtDe => de,
            DeltaBase::SqrtAmbient => ambient_dim,
        };
        self.coef * (scale as f64).sqrt()
    }
}

/// An embedding dimension `d = de + d_offset` with its box half-width.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairSpec {
    pub d_offset: usize,
    pub delta: DeltaFormula,
}

impl PairSpec {
    pub fn new(d_offset: usize, coef: f64, base: DeltaBase) -> Self {
        Self {
            d_offset,
            delta: DeltaFormula { coef, base },
        }
    }

    pub fn d(&self, de: usize) -> usize {
        de + self.d_offset
    }

    pub fn delta(&self, de: usize, ambient_dim: usize) -> f64 {
        self.delta.evaluate(de, ambient_dim)
    }

    /// Parses `OFFSET:COEF[:de|D]`, e.g. `1:2.2:de` or `0:8.0:D`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || HarnessError::Invalid(format!("pair `{s}`: expected OFFSET:COEF[:de|D]"));
        let parts: Vec<&str> = s.trim().split(':').collect();
        if parts.len() < 2 || parts.len() > 3 {
            return Err(bad());
        }
        let d_offset = parts[0].trim().parse::<usize>().map_err(|_| bad())?;
        let coef = parts[1].trim().parse::<f64>().map_err(|_| bad())?;
        if !(coef > 0.0) || !coef.is_finite() {
            return Err(bad());
        }
        let base = match parts.get(2).map(|b| b.trim()) {
            None | Some("de") => DeltaBase::SqrtDe,
            Some("D") => DeltaBase::SqrtAmbient,
            Some(_) => return Err(bad()),
        };
        Ok(Self::new(d_offset, coef, base))
    }

    /// Parses a comma-separated list of pairs.
    pub fn parse_list(s: &str) -> Result<Vec<Self>> {
        s.split(',')
            .filter(|p| !p.trim().is_empty())
            .map(Self::parse)
            .collect()
    }
}

impl fmt::Display for PairSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = match self.delta.base {
            DeltaBase::SqrtDe => "de",
            DeltaBase::SqrtAmbient => "D",
        };
        write!(f, "{}:{}:{}", self.d_offset, self.delta.coef, base)
    }
}

impl FromStr for PairSpec {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

/// Parameter sets: the main experiment and the three robustness sweeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sweep {
    /// `(de, 8.0√de), (de+1, 2.2√de), (de+2, 1.3√de), (de+3, 1.0√de)`
    Main,
    /// The main coefficients with `√D` in place of `√de`.
    A,
    /// `δ = 7.5√de`, `d = de .. de+3`.
    B,
    /// `d = de+1`, `δ ∈ {2.2, 5, 7.5, 10}·√de`.
    C,
}

impl Sweep {
    pub fn pairs(self) -> Vec<PairSpec> {
        const MAIN: [(usize, f64); 4] = [(0, 8.0), (1, 2.2), (2, 1.3), (3, 1.0)];
        match self {
            Sweep::Main => MAIN
                .iter()
                .map(|&(o, c)| PairSpec::new(o, c, DeltaBase::SqrtDe))
                .collect(),
            Sweep::A => MAIN
                .iter()
                .map(|&(o, c)| PairSpec::new(o, c, DeltaBase::SqrtAmbient))
                .collect(),
            Sweep::B => (0..4)
                .map(|o| PairSpec::new(o, 7.5, DeltaBase::SqrtDe))
                .collect(),
            Sweep::C => [2.2, 5.0, 7.5, 10.0]
                .iter()
                .map(|&c| PairSpec::new(1, c, DeltaBase::SqrtDe))
                .collect(),
        }
    }
}

impl FromStr for Sweep {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "main" => Ok(Sweep::Main),
            "a" => Ok(Sweep::A),
            "b" => Ok(Sweep::B),
            "c" => Ok(Sweep::C),
            other => Err(HarnessError::Invalid(format!("unknown sweep `{other}`"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct TableConfig {
    pub problems: Vec<BaseProblem>,
    pub dims: Vec<usize>,
    pub pairs: Vec<PairSpec>,
    pub embeddings: usize,
    pub seed: u64,
}

/// Geometric successes of one problem for one `(D, pair)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableCell {
    pub problem: String,
    #[serde(rename = "D")]
    pub ambient_dim: usize,
    pub d_offset: usize,
    pub delta_coef: f64,
    pub delta_base: DeltaBase,
    pub successes: usize,
    pub embeddings: usize,
}

/// Average geometric success (percent) over all problems for one `(D, pair)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    #[serde(rename = "D")]
    pub ambient_dim: usize,
    pub d_offset: usize,
    pub delta_coef: f64,
    pub delta_base: DeltaBase,
    pub problems: usize,
    pub embeddings: usize,
    pub success_rate: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuccessTable {
    pub rows: Vec<TableRow>,
    pub cells: Vec<TableCell>,
}

impl SuccessTable {
    pub fn rate(&self, ambient_dim: usize, pair: &PairSpec) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| {
                r.ambient_dim == ambient_dim
                    && r.d_offset == pair.d_offset
                    && r.delta_coef == pair.delta.coef
                    && r.delta_base == pair.delta.base
            })
            .map(|r| r.success_rate)
    }
}

/// Percentage of `(problem, embedding)` combinations whose reduced problem
/// contains a global minimizer, decided by the LP oracle.
///
/// Each `(problem, D)` is rotated once; each embedding draws its own `A`.
pub fn run_success_table(config: &TableConfig) -> Result<SuccessTable> {
    if config.problems.is_empty() || config.dims.is_empty() || config.pairs.is_empty() {
        return Err(HarnessError::Invalid(
            "problems, dimensions and pairs must be nonempty".into(),
        ));
    }
    if config.embeddings == 0 {
        return Err(HarnessError::Invalid("need at least one embedding".into()));
    }
    let seed = config.seed;
    with_workers(|| {
        let instances: Vec<(usize, usize)> = (0..config.problems.len())
            .flat_map(|p| config.dims.iter().map(move |&dim| (p, dim)))
            .collect();
        let generated: Vec<GeneratedProblem> = instances
            .par_iter()
            .map(|&(p, dim)| {
                let base = config.problems[p].scale_to_unit_box();
                let mut rng = keyed_stream(seed, streams::PROBLEM, &[p as u64, dim as u64]);
                Ok(generate(&base, dim, &mut rng)?)
            })
            .collect::<Result<_>>()?;

        let mut tasks = Vec::new();
        for (g, &(p, dim)) in instances.iter().enumerate() {
            for k in 0..config.pairs.len() {
                tasks.push((g, p, dim, k));
            }
        }
        let cells: Vec<TableCell> = tasks
            .par_iter()
            .map(|&(g, p, dim, k)| {
                let problem = &generated[g];
                let pair = &config.pairs[k];
                let de = problem.effective_dim();
                let (d, delta) = (pair.d(de), pair.delta(de, dim));
                let mut successes = 0;
                for e in 0..config.embeddings {
                    let key = [p as u64, dim as u64, k as u64, e as u64];
                    let mut rng = keyed_stream(seed, streams::EMBEDDING, &key);
                    let spec = EmbeddingSpec::gaussian(dim, d, delta, &mut rng)?;
                    if geometric_success(problem, &spec)? {
                        successes += 1;
                    }
                }
                Ok(TableCell {
                    problem: problem.name().to_string(),
                    ambient_dim: dim,
                    d_offset: pair.d_offset,
                    delta_coef: pair.delta.coef,
                    delta_base: pair.delta.base,
                    successes,
                    embeddings: config.embeddings,
                })
            })
            .collect::<Result<_>>()?;

        let mut rows = Vec::new();
        for &dim in &config.dims {
            for pair in &config.pairs {
                let matching: Vec<&TableCell> = cells
                    .iter()
                    .filter(|c| {
                        c.ambient_dim == dim
                            && c.d_offset == pair.d_offset
                            && c.delta_coef == pair.delta.coef
                            && c.delta_base == pair.delta.base
                    })
                    .collect();
                let successes: usize = matching.iter().map(|c| c.successes).sum();
                let total = matching.len() * config.embeddings;
                rows.push(TableRow {
                    ambient_dim: dim,
                    d_offset: pair.d_offset,
                    delta_coef: pair.delta.coef,
                    delta_base: pair.delta.base,
                    problems: config.problems.len(),
                    embeddings: config.embeddings,
                    success_rate: 100.0 * successes as f64 / total as f64,
                });
            }
        }
        Ok(SuccessTable { rows, cells })
    })
}
