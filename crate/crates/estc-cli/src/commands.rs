//! The six subcommands: grid sweeps, field sampling and the check suite.
//!
//! Sweeps evaluate grid points in parallel but emit rows in grid order, so
//! output bytes do not depend on the parallelism degree. Per-point solver
//! failures land in the status column and flip the exit code without
//! aborting the rest of the sweep.

use crate::cache::{solve_pair_cached, SolutionCache};
use crate::config::RunConfig;
use crate::output::{emit, Cell, Table};
use anyhow::Result;
use estc_core::dispersion::BranchPair;
use estc_core::evolution::Branch;
use estc_core::observables::observables_from_pair;
use estc_core::superposition::{fields, precession, unit_grid, SuperpositionSpec};
use rayon::prelude::*;

const OK: &str = "ok";

fn with_pool<T: Send>(jobs: usize, work: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()?;
    Ok(pool.install(work))
}

fn cache_of(cfg: &RunConfig) -> Result<Option<SolutionCache>> {
    cfg.effective_cache_dir()
        .map(SolutionCache::new)
        .transpose()
}

/// Sweeps the grid, solving each point once; failures become status text.
fn sweep(
    cfg: &RunConfig,
    row_of: impl Fn(f64, &BranchPair) -> Result<Vec<Cell>> + Sync,
    blank: usize,
) -> Result<(Vec<Vec<Cell>>, bool)> {
    let params = cfg.solver_params()?;
    let grid = cfg.q1_grid.values(cfg.omega);
    let cache = cache_of(cfg)?;
    let rows: Vec<(Vec<Cell>, bool)> = with_pool(cfg.jobs, || {
        grid.par_iter()
            .map(|&q1| {
                let outcome = solve_pair_cached(q1, &params, cache.as_ref())
                    .map_err(anyhow::Error::from)
                    .and_then(|pair| row_of(q1, &pair));
                match outcome {
                    Ok(cells) => {
                        let mut row = vec![Cell::Number(q1)];
                        row.extend(cells);
                        row.push(Cell::Text(OK.to_string()));
                        (row, true)
                    }
                    Err(err) => {
                        let mut row = vec![Cell::Number(q1)];
                        row.extend(
                            std::iter::repeat_with(|| Cell::Text(String::new())).take(blank),
                        );
                        row.push(Cell::Text(format!("error: {err}")));
                        (row, false)
                    }
                }
            })
            .collect()
    })?;
    let all_ok = rows.iter().all(|(_, ok)| *ok);
    Ok((rows.into_iter().map(|(row, _)| row).collect(), all_ok))
}

pub fn dispersion(cfg: &RunConfig) -> Result<bool> {
    let mut table = Table::new(vec![
        "q1", "xi1", "xi2", "dxi", "residual1", "residual2", "status",
    ]);
    let (rows, ok) = sweep(
        cfg,
        |_, pair| {
            Ok(vec![
                Cell::Number(pair.b1.xi),
                Cell::Number(pair.b2.xi),
                Cell::Number(pair.dxi()),
                Cell::Number(pair.b1.residual),
                Cell::Number(pair.b2.residual),
            ])
        },
        5,
    )?;
    table.rows = rows;
    emit(&table, cfg)?;
    Ok(ok)
}

pub fn coeffs(cfg: &RunConfig) -> Result<bool> {
    let mut table = Table::new(vec![
        "q1",
        "x210",
        "x230",
        "x210_plus_x120",
        "x230_minus_x140",
        "y111",
        "y131",
        "y221_minus_y111",
        "y241_plus_y131",
        "status",
    ]);
    let (rows, ok) = sweep(
        cfg,
        |_, pair| {
            let z1 = &pair.branch(Branch::J1).z;
            let z2 = &pair.branch(Branch::J2).z;
            let (x120, x140) = (z1.x[1][0], z1.x[3][0]);
            let (y111, y131) = (z1.y[0][1], z1.y[2][1]);
            let (x210, x230) = (z2.x[0][0], z2.x[2][0]);
            let (y221, y241) = (z2.y[1][1], z2.y[3][1]);
            Ok(vec![
                Cell::Number(x210),
                Cell::Number(x230),
                Cell::Number(x210 + x120),
                Cell::Number(x230 - x140),
                Cell::Number(y111),
                Cell::Number(y131),
                Cell::Number(y221 - y111),
                Cell::Number(y241 + y131),
            ])
        },
        8,
    )?;
    table.rows = rows;
    emit(&table, cfg)?;
    Ok(ok)
}

pub fn observables(cfg: &RunConfig) -> Result<bool> {
    let params = cfg.solver_params()?;
    let mut table = Table::new(vec![
        "q1", "e_plus", "e_minus", "de", "j1_plus", "j1_minus", "p1_plus", "p1_minus",
        "s1_plus", "s1_minus", "sigma10", "status",
    ]);
    let (rows, ok) = sweep(
        cfg,
        |q1, pair| {
            let row = observables_from_pair(pair, q1, &params)?;
            Ok(vec![
                Cell::Number(row.e_plus),
                Cell::Number(row.e_minus),
                Cell::Number(row.e_minus - row.e_plus),
                Cell::Number(row.j1_plus),
                Cell::Number(row.j1_minus),
                Cell::Number(row.p1_plus),
                Cell::Number(row.p1_minus),
                Cell::Number(row.s1_plus),
                Cell::Number(row.s1_minus),
                Cell::Number(row.sigma10),
            ])
        },
        10,
    )?;
    table.rows = rows;
    emit(&table, cfg)?;
    Ok(ok)
}

pub fn precession_cmd(cfg: &RunConfig) -> Result<bool> {
    let mut table = Table::new(vec!["q1", "rv", "rs", "nu_pr", "status"]);
    let (rows, ok) = sweep(
        cfg,
        |_, pair| {
            let report = precession(pair);
            Ok(vec![
                Cell::Number(report.rv),
                Cell::Number(report.rs),
                Cell::Number(report.nu_pr),
            ])
        },
        3,
    )?;
    table.rows = rows;
    emit(&table, cfg)?;
    Ok(ok)
}

pub fn fields_cmd(cfg: &RunConfig) -> Result<bool> {
    let params = cfg.solver_params()?;
    let q1 = cfg.qm * cfg.omega / 2.0;
    let spec = SuperpositionSpec::new(cfg.mode, cfg.alpha, cfg.delta, q1)
        .map_err(|e| anyhow::anyhow!(e))?;
    let cache = cache_of(cfg)?;
    let pair = solve_pair_cached(q1, &params, cache.as_ref())?;
    let sample = fields(&spec, &pair, &unit_grid(cfg.grid.0, cfg.grid.1));

    let mut table = Table::new(vec!["x1", "x4", "v1", "v2", "v3", "s1", "s2", "s3"]);
    for p in &sample.points {
        table.push(vec![
            Cell::Number(p.x1),
            Cell::Number(p.x4),
            Cell::Number(p.v[0]),
            Cell::Number(p.v[1]),
            Cell::Number(p.v[2]),
            Cell::Number(p.s[0]),
            Cell::Number(p.s[1]),
            Cell::Number(p.s[2]),
        ]);
    }
    emit(&table, cfg)?;
    Ok(true)
}

pub fn check(cfg: &RunConfig) -> Result<bool> {
    let lines = estc_core::check::run_checks(cfg.omega, cfg.am, 0xC0FFEE)
        .map_err(|e| anyhow::anyhow!(e))?;
    let mut table = Table::new(vec!["name", "observed", "limit", "status"]);
    let mut all_ok = true;
    for mut line in lines {
        if let Some(limit) = cfg.tolerances.get(&line.name) {
            line.limit = *limit;
            line.passed = line.observed <= *limit;
        }
        all_ok &= line.passed;
        table.push(vec![
            Cell::Text(line.name.clone()),
            Cell::Number(line.observed),
            Cell::Number(line.limit),
            Cell::Text(if line.passed { "pass" } else { "fail" }.to_string()),
        ]);
    }
    emit(&table, cfg)?;
    Ok(all_ok)
}
