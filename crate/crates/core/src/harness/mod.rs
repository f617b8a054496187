//! Experiment driver: runs (method x k x seed) grids and summarises them.
//!
//! Every grid cell gets its own random stream. The stream seed is derived
//! with SplitMix64 finalisers as
//!
//! ```text
//! s1 = mix(base_seed ^ fnv1a64(method_id))
//! s2 = mix(s1 ^ k)
//! run_seed = mix(s2 ^ seed)
//! ```
//!
//! so methods and `k` values see unrelated streams while the whole grid stays
//! reproducible from `base_seed`.

mod demo;
mod grid;
mod records;
mod summary;
mod wins;

use std::path::PathBuf;

pub use demo::{demo, write_demo, DemoStep};
pub use grid::{load_dataset, run_cell, run_grid};
pub use records::{read_records, write_records, ResultRecord, RECORDS_HEADER};
pub use summary::{aggregate_quantiles, quantile, write_quantiles, QuantileRow};
pub use wins::{win_table, write_wins, WinMode, WinScope, WinStat, WinTable};

use crate::dataio::{PreprocessSpec, Shape};
use crate::error::{Error, Result};
use crate::init::{ChainConfig, Method};

#[derive(Debug, Clone, PartialEq)]
pub enum DataSource {
    Csv {
        path: PathBuf,
        delimiter: u8,
        has_header: bool,
    },
    Synthetic {
        shape: Shape,
        n: usize,
        d: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Seeds {
    Count(usize),
    List(Vec<u64>),
}

impl Seeds {
    pub fn values(&self) -> Vec<u64> {
        match self {
            Seeds::Count(c) => (0..*c as u64).collect(),
            Seeds::List(v) => v.clone(),
        }
    }
}

pub const DEFAULT_CHAIN_FRACTIONS: [f64; 4] = [0.01, 0.05, 0.1, 0.2];

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub source: DataSource,
    pub preprocess: PreprocessSpec,
    pub methods: Vec<Method>,
    pub k_list: Vec<usize>,
    pub iters: usize,
    pub seeds: Seeds,
    pub base_seed: u64,
    /// Run cells one after another on a single thread. Use for timing.
    pub serial: bool,
    /// When false the time columns are written as zero, which makes repeated
    /// runs byte-identical.
    pub record_timing: bool,
}

impl ExperimentConfig {
    pub fn new(source: DataSource) -> Self {
        Self {
            source,
            preprocess: PreprocessSpec::CenterMaxScale,
            methods: vec![Method::Uniform, Method::FurthestSum, Method::AaPlusPlus],
            k_list: vec![15, 25, 50, 75, 100],
            iters: 10,
            seeds: Seeds::Count(50),
            base_seed: 0,
            serial: false,
            record_timing: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.methods.is_empty() {
            return Err(Error::Config("no methods selected".into()));
        }
        if self.k_list.is_empty() || self.k_list.contains(&0) {
            return Err(Error::Config("k values must be >= 1".into()));
        }
        match &self.seeds {
            Seeds::Count(0) => return Err(Error::Config("need at least one seed".into())),
            Seeds::List(v) if v.is_empty() => {
                return Err(Error::Config("need at least one seed".into()))
            }
            _ => {}
        }
        for m in &self.methods {
            if let Method::AaPlusPlusMc(chain) = m {
                chain.validate()?;
            }
        }
        Ok(())
    }
}

/// Resolve method names. The bare name `aapp-mc` expands to one method per
/// chain fraction; explicit ids such as `aapp-mc-0.05` are taken as is.
pub fn expand_methods<S: AsRef<str>>(names: &[S], chain_fractions: &[f64]) -> Result<Vec<Method>> {
    let mut out = Vec::new();
    for name in names {
        let name = name.as_ref().trim();
        if name == "aapp-mc" {
            if chain_fractions.is_empty() {
                return Err(Error::Config("aapp-mc needs at least one chain fraction".into()));
            }
            for &f in chain_fractions {
                let chain = ChainConfig::Fraction(f);
                chain.validate()?;
                out.push(Method::AaPlusPlusMc(chain));
            }
        } else {
            out.push(name.parse()?);
        }
    }
    let mut seen = std::collections::HashSet::new();
    out.retain(|m| seen.insert(m.id()));
    Ok(out)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn fnv1a64(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01B3)
    })
}

/// Seed of the random stream for one grid cell.
pub fn run_seed(base_seed: u64, method_id: &str, k: usize, seed: u64) -> u64 {
    let s1 = splitmix64(base_seed ^ fnv1a64(method_id));
    let s2 = splitmix64(s1 ^ k as u64);
    splitmix64(s2 ^ seed)
}
