use std::io::Write;

use rego::harness::{
    compare, estimate_l_star, log_grid, run_success_table, verify_distribution, write_rows,
    write_rows_to, CsvRow, Format, PairSpec, Sweep, TableConfig,
};
use rego::problems::{catalogue, find, BaseProblem};
use rego::rng::RngStream;
use rego::solvers::Budget;
use rego::theory::{sanyang_kaban_bound, wang_bound};
use serde::Serialize;

use crate::{Cli, CliError, Command};

#[derive(Serialize)]
struct ProblemRow {
    name: &'static str,
    display_name: &'static str,
    de: usize,
    f_star: f64,
    reported_f_star: &'static str,
    known_minimizers: usize,
    baron_excluded: bool,
    knitro_excluded: bool,
}

impl CsvRow for ProblemRow {
    const HEADER: &'static [&'static str] = &[
        "name",
        "display_name",
        "de",
        "f_star",
        "reported_f_star",
        "known_minimizers",
        "baron_excluded",
        "knitro_excluded",
    ];
}

/// A curve row with the two earlier bounds alongside `R*`.
#[derive(Serialize)]
struct BaselineCurveRow {
    de: usize,
    d: usize,
    delta_bar: f64,
    #[serde(rename = "L_hat")]
    l_hat: f64,
    #[serde(rename = "R_star")]
    r_star: f64,
    trials: usize,
    wang: f64,
    sanyang_kaban: Option<f64>,
}

impl CsvRow for BaselineCurveRow {
    const HEADER: &'static [&'static str] = &[
        "de",
        "d",
        "delta_bar",
        "L_hat",
        "R_star",
        "trials",
        "wang",
        "sanyang_kaban",
    ];
}

struct Output {
    path: Option<std::path::PathBuf>,
    format: Format,
}

impl Output {
    fn emit<T: CsvRow>(&self, rows: &[T]) -> Result<(), CliError> {
        match &self.path {
            Some(p) => write_rows(rows, self.format, p)?,
            None => {
                let stdout = std::io::stdout();
                let mut lock = stdout.lock();
                write_rows_to(rows, self.format, &mut lock)?;
                lock.flush()?;
            }
        }
        Ok(())
    }
}

fn problem_list(spec: &str) -> Result<Vec<BaseProblem>, CliError> {
    if spec.trim().eq_ignore_ascii_case("all") {
        return Ok(catalogue());
    }
    spec.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|name| {
            find(name.trim())
                .ok_or_else(|| CliError::Invalid(format!("unknown problem `{}`", name.trim())))
        })
        .collect()
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    let out = Output {
        path: cli.out,
        format: cli.format.into(),
    };
    match cli.command {
        Command::ListProblems => {
            let rows: Vec<ProblemRow> = catalogue()
                .iter()
                .map(|p| ProblemRow {
                    name: p.id(),
                    display_name: p.display_name(),
                    de: p.dim(),
                    f_star: p.f_star(),
                    reported_f_star: p.reported_f_star(),
                    known_minimizers: p.known_minimizers().len(),
                    baron_excluded: p.baron_excluded(),
                    knitro_excluded: p.knitro_excluded(),
                })
                .collect();
            out.emit(&rows)
        }
        Command::Verify {
            de,
            d,
            samples,
            seed,
        } => {
            let report = verify_distribution(de, d, samples, &mut RngStream::new(seed, 0))?;
            out.emit(&[report])
        }
        Command::Curves {
            de,
            d_offsets,
            grid_min,
            grid_max,
            points,
            trials,
            seed,
            baselines,
        } => {
            let grid = log_grid(grid_min, grid_max, points)?;
            let mut rows = Vec::new();
            for &offset in &d_offsets {
                let mut rng = RngStream::new(seed, 0).substream(offset as u64);
                rows.extend(estimate_l_star(de, de + offset, &grid, trials, &mut rng)?.rows());
            }
            if baselines {
                let rows: Vec<BaselineCurveRow> = rows
                    .into_iter()
                    .map(|r| BaselineCurveRow {
                        wang: wang_bound(r.de, 1.0, r.delta_bar),
                        sanyang_kaban: sanyang_kaban_bound(r.d, r.de, 1.0, r.delta_bar),
                        de: r.de,
                        d: r.d,
                        delta_bar: r.delta_bar,
                        l_hat: r.l_hat,
                        r_star: r.r_star,
                        trials: r.trials,
                    })
                    .collect();
                out.emit(&rows)
            } else {
                out.emit(&rows)
            }
        }
        Command::SuccessTable {
            problems,
            dims,
            pairs,
            sweep,
            embeddings,
            seed,
            cells,
        } => {
            let pairs = match pairs {
                Some(list) => PairSpec::parse_list(&list)?,
                None => sweep.parse::<Sweep>()?.pairs(),
            };
            let table = run_success_table(&TableConfig {
                problems: problem_list(&problems)?,
                dims,
                pairs,
                embeddings,
                seed,
            })?;
            if cells {
                out.emit(&table.cells)
            } else {
                out.emit(&table.rows)
            }
        }
        Command::Compare {
            problem,
            dims,
            solver,
            pair,
            trials,
            seed,
            max_evals,
            starts,
            summary,
        } => {
            let base = find(&problem)
                .ok_or_else(|| CliError::Invalid(format!("unknown problem `{problem}`")))?;
            let pair = PairSpec::parse(&pair)?;
            let budget = Budget {
                max_evals,
                max_starts: starts,
                epsilon: cli.epsilon,
                ..Budget::default()
            };
            let mut records = Vec::new();
            let mut summaries = Vec::new();
            for &dim in &dims {
                let (r, s) = compare(&base, dim, solver, &pair, trials, seed, &budget)?;
                records.extend(r);
                summaries.push(s);
            }
            if summary {
                out.emit(&summaries)
            } else {
                out.emit(&records)
            }
        }
    }
}
