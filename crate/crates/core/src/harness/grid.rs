use std::time::Instant;

use log::warn;
use rayon::prelude::*;

use super::records::ResultRecord;
use super::{run_seed, DataSource, ExperimentConfig};
use crate::aa::{fit, FitOptions};
use crate::dataio::{gen_synthetic, load_csv, preprocess};
use crate::error::{Error, Result};
use crate::init::Method;
use crate::matrix::DataMatrix;
use crate::RngStream;

/// Load (or generate) and preprocess the dataset. Returns the dataset id and
/// the matrix. Synthetic data is drawn from a stream seeded with `base_seed`.
pub fn load_dataset(cfg: &ExperimentConfig) -> Result<(String, DataMatrix)> {
    let (id, raw) = match &cfg.source {
        DataSource::Csv {
            path,
            delimiter,
            has_header,
        } => {
            let id = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "data".into());
            (id, load_csv(path, *delimiter, *has_header)?)
        }
        DataSource::Synthetic { shape, n, d } => {
            let mut rng = RngStream::new(cfg.base_seed);
            (
                format!("{shape}-n{n}-d{d}"),
                gen_synthetic(*shape, *n, *d, &mut rng)?,
            )
        }
    };
    Ok((id, preprocess(&raw, cfg.preprocess)?))
}

/// Seed, fit and record a single grid cell. Failures become one error row.
pub fn run_cell(
    dataset: &str,
    data: &DataMatrix,
    method: &Method,
    k: usize,
    seed: u64,
    cfg: &ExperimentConfig,
) -> Vec<ResultRecord> {
    let id = method.id();
    let mut rng = RngStream::new(run_seed(cfg.base_seed, &id, k, seed));
    let time = |t: f64| if cfg.record_timing { t } else { 0.0 };
    let error_row = |stage: &str, init_time: f64, e: &Error| {
        warn!("{dataset} {id} k={k} seed={seed}: {e}");
        vec![ResultRecord {
            dataset: dataset.to_string(),
            method: id.clone(),
            k,
            seed,
            stage: stage.to_string(),
            mse: None,
            init_time_s: time(init_time),
            iter_time_s: 0.0,
            flags: format!("error={}", e.kind()),
        }]
    };

    let start = Instant::now();
    let seeding = method.seed(data, k, &mut rng);
    let init_time = start.elapsed().as_secs_f64();
    let seeding = match seeding {
        Ok(s) => s,
        Err(e) => return error_row("init", init_time, &e),
    };
    let result = match fit(data, seeding.archetypes.matrix(), FitOptions::iterations(cfg.iters)) {
        Ok(f) => f,
        Err(e) => return error_row("fit", init_time, &e),
    };
    let flags = if seeding.degenerate { "degenerate" } else { "" };
    result
        .trace
        .stages
        .into_iter()
        .map(|stage| ResultRecord {
            dataset: dataset.to_string(),
            method: id.clone(),
            k,
            seed,
            stage: stage.label,
            mse: Some(stage.mse),
            init_time_s: time(init_time),
            iter_time_s: time(stage.elapsed_s),
            flags: flags.to_string(),
        })
        .collect()
}

/// Run every (method, k, seed) cell. Records come out ordered by method, then
/// k, then seed, then stage, whatever the execution order.
pub fn run_grid(cfg: &ExperimentConfig) -> Result<Vec<ResultRecord>> {
    cfg.validate()?;
    let (dataset, data) = load_dataset(cfg)?;
    let seeds = cfg.seeds.values();
    let mut cells: Vec<(&Method, usize, u64)> = Vec::new();
    for m in &cfg.methods {
        for &k in &cfg.k_list {
            cells.extend(seeds.iter().map(|&s| (m, k, s)));
        }
    }

    let run = |&(m, k, s): &(&Method, usize, u64)| run_cell(&dataset, &data, m, k, s, cfg);
    let per_cell: Vec<Vec<ResultRecord>> = if cfg.serial {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
        pool.install(|| cells.iter().map(run).collect())
    } else {
        cells.par_iter().map(run).collect()
    };
    Ok(per_cell.into_iter().flatten().collect())
}
