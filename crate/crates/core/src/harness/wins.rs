use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use super::records::{stage_index, ResultRecord};
use super::summary::quantile;
use crate::error::{Error, Result};

/// Scores closer than this count as a tie.
const TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WinStat {
    /// Lowest single seed.
    Best,
    /// Median over seeds.
    Median,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WinScope {
    /// The post-initialisation stage only.
    Initialization,
    /// The best stage across the whole optimisation.
    Overall,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WinMode {
    pub stat: WinStat,
    pub scope: WinScope,
}

impl WinMode {
    pub const ALL: [WinMode; 4] = [
        WinMode { stat: WinStat::Best, scope: WinScope::Initialization },
        WinMode { stat: WinStat::Best, scope: WinScope::Overall },
        WinMode { stat: WinStat::Median, scope: WinScope::Initialization },
        WinMode { stat: WinStat::Median, scope: WinScope::Overall },
    ];
}

impl fmt::Display for WinMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let stat = match self.stat {
            WinStat::Best => "best",
            WinStat::Median => "median",
        };
        let scope = match self.scope {
            WinScope::Initialization => "init",
            WinScope::Overall => "overall",
        };
        write!(f, "{stat}-{scope}")
    }
}

impl FromStr for WinMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        WinMode::ALL
            .into_iter()
            .find(|m| m.to_string() == s)
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown win mode `{s}` (expected best-init, best-overall, median-init or median-overall)"
                ))
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WinCell {
    pub dataset: String,
    pub k: usize,
    pub winners: Vec<String>,
    pub tie: bool,
}

/// How often each method wins per `k`, across datasets.
#[derive(Debug, Clone, PartialEq)]
pub struct WinTable {
    pub mode: WinMode,
    pub methods: Vec<String>,
    pub ks: Vec<usize>,
    /// `wins[method][k]`, indexed like `methods` and `ks`.
    pub wins: Vec<Vec<usize>>,
    /// Number of those wins that were shared with another method.
    pub ties: Vec<Vec<usize>>,
    pub cells: Vec<WinCell>,
}

impl WinTable {
    pub fn count(&self, method: &str, k: usize) -> Option<usize> {
        let m = self.methods.iter().position(|x| x == method)?;
        let j = self.ks.iter().position(|&x| x == k)?;
        Some(self.wins[m][j])
    }
}

fn is_mcmc(method: &str) -> bool {
    method.starts_with("aapp-mc")
}

/// Count, per (dataset, k), which method scores lowest under `mode`.
/// Markov-chain variants are left out. Tied methods all receive the win.
pub fn win_table(records: &[ResultRecord], mode: WinMode) -> Result<WinTable> {
    // (dataset, k) -> method -> stage -> per-seed values
    type Stages = BTreeMap<usize, Vec<f64>>;
    let mut grid: BTreeMap<(&str, usize), BTreeMap<&str, Stages>> = BTreeMap::new();
    let mut methods: Vec<&str> = Vec::new();
    for r in records.iter().filter(|r| !is_mcmc(&r.method)) {
        if !methods.contains(&r.method.as_str()) {
            methods.push(&r.method);
        }
        let Some(v) = r.mse else { continue };
        grid.entry((&r.dataset, r.k))
            .or_default()
            .entry(&r.method)
            .or_default()
            .entry(stage_index(&r.stage))
            .or_default()
            .push(v);
    }
    if methods.is_empty() {
        return Err(Error::Config("no non-MCMC records to compare".into()));
    }
    let ks: Vec<usize> = grid.keys().map(|&(_, k)| k).collect::<BTreeSet<_>>().into_iter().collect();
    let mut wins = vec![vec![0; ks.len()]; methods.len()];
    let mut ties = wins.clone();
    let mut cells = Vec::new();

    for ((dataset, k), per_method) in &grid {
        let mut scores = Vec::with_capacity(methods.len());
        for m in &methods {
            let stages = per_method.get(m).ok_or_else(|| {
                Error::Config(format!("method {m} has no results for {dataset} k={k}"))
            })?;
            let summarise = |vals: &Vec<f64>| -> f64 {
                let mut v = vals.clone();
                v.sort_by(f64::total_cmp);
                match mode.stat {
                    WinStat::Best => v[0],
                    WinStat::Median => quantile(&v, 0.5),
                }
            };
            let score = match mode.scope {
                WinScope::Initialization => summarise(stages.get(&0).ok_or_else(|| {
                    Error::Config(format!("method {m} has no init stage for {dataset} k={k}"))
                })?),
                WinScope::Overall => stages.values().map(summarise).fold(f64::INFINITY, f64::min),
            };
            scores.push(score);
        }
        let best = scores.iter().cloned().fold(f64::INFINITY, f64::min);
        let winners: Vec<usize> = (0..methods.len())
            .filter(|&i| scores[i] <= best + TIE_TOL)
            .collect();
        let tie = winners.len() > 1;
        let kj = ks.iter().position(|x| x == k).unwrap();
        for &w in &winners {
            wins[w][kj] += 1;
            if tie {
                ties[w][kj] += 1;
            }
        }
        cells.push(WinCell {
            dataset: dataset.to_string(),
            k: *k,
            winners: winners.iter().map(|&i| methods[i].to_string()).collect(),
            tie,
        });
    }
    Ok(WinTable {
        mode,
        methods: methods.into_iter().map(String::from).collect(),
        ks,
        wins,
        ties,
        cells,
    })
}

pub fn write_wins(path: &Path, tables: &[WinTable]) -> Result<()> {
    let mut out = String::from("mode,method,k,wins,ties\n");
    for t in tables {
        for (m, method) in t.methods.iter().enumerate() {
            for (j, k) in t.ks.iter().enumerate() {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    t.mode, method, k, t.wins[m][j], t.ties[m][j]
                ));
            }
        }
    }
    std::fs::File::create(path)
        .and_then(|mut f| f.write_all(out.as_bytes()))
        .map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(dataset: &str, method: &str, k: usize, seed: u64, stage: &str, mse: f64) -> ResultRecord {
        ResultRecord {
            dataset: dataset.into(),
            method: method.into(),
            k,
            seed,
            stage: stage.into(),
            mse: Some(mse),
            init_time_s: 0.0,
            iter_time_s: 0.0,
            flags: String::new(),
        }
    }

    const BEST_INIT: WinMode = WinMode {
        stat: WinStat::Best,
        scope: WinScope::Initialization,
    };

    #[test]
    fn strict_winner() {
        let recs = vec![
            rec("d", "a", 5, 0, "init", 1.0),
            rec("d", "b", 5, 0, "init", 2.0),
            rec("d", "c", 5, 0, "init", 3.0),
        ];
        let t = win_table(&recs, BEST_INIT).unwrap();
        assert_eq!(t.count("a", 5), Some(1));
        assert_eq!(t.count("b", 5), Some(0));
        assert_eq!(t.count("c", 5), Some(0));
        assert!(!t.cells[0].tie);
    }

    #[test]
    fn exact_tie_counts_both() {
        let recs = vec![
            rec("d", "a", 5, 0, "init", 1.0),
            rec("d", "b", 5, 0, "init", 1.0),
            rec("d", "c", 5, 0, "init", 3.0),
        ];
        let t = win_table(&recs, BEST_INIT).unwrap();
        assert_eq!(t.count("a", 5), Some(1));
        assert_eq!(t.count("b", 5), Some(1));
        assert!(t.cells[0].tie);
        assert_eq!(t.ties[0][0], 1);
    }

    #[test]
    fn mcmc_variants_are_excluded() {
        let recs = vec![
            rec("d", "a", 5, 0, "init", 1.0),
            rec("d", "aapp-mc-0.05", 5, 0, "init", 0.1),
        ];
        let t = win_table(&recs, BEST_INIT).unwrap();
        assert_eq!(t.methods, vec!["a"]);
    }

    #[test]
    fn missing_coverage_is_a_config_error() {
        let recs = vec![
            rec("d1", "a", 5, 0, "init", 1.0),
            rec("d1", "b", 5, 0, "init", 2.0),
            rec("d2", "a", 5, 0, "init", 1.0),
        ];
        assert!(matches!(win_table(&recs, BEST_INIT), Err(Error::Config(_))));
    }

    #[test]
    fn planted_ordering_on_three_datasets() {
        // Two seeds, stages init and iter-1, methods u / f / p, k in {2, 4}.
        // Values are (seed0, seed1) per stage.
        type Plan<'a> = (&'a str, usize, &'a str, [f64; 2], [f64; 2]);
        let plan: &[Plan] = &[
            // d1, k=2: p best at init by both stats; u best overall (0.1)
            ("d1", 2, "u", [5.0, 6.0], [0.1, 4.0]),
            ("d1", 2, "f", [4.0, 4.5], [3.0, 3.5]),
            ("d1", 2, "p", [1.0, 2.0], [0.9, 1.0]),
            // d1, k=4: f has the best single seed at init, p the best median
            ("d1", 4, "u", [5.0, 5.0], [5.0, 5.0]),
            ("d1", 4, "f", [0.5, 9.0], [0.5, 9.0]),
            ("d1", 4, "p", [1.0, 1.0], [1.0, 1.0]),
            // d2, k=2: p everywhere
            ("d2", 2, "u", [3.0, 3.0], [2.0, 2.0]),
            ("d2", 2, "f", [3.0, 3.0], [2.0, 2.0]),
            ("d2", 2, "p", [1.0, 1.0], [0.5, 0.5]),
            // d2, k=4: u and p tie at init, f wins overall
            ("d2", 4, "u", [1.0, 2.0], [1.0, 2.0]),
            ("d2", 4, "f", [3.0, 3.0], [0.2, 0.2]),
            ("d2", 4, "p", [1.0, 2.0], [1.0, 2.0]),
            // d3: p everywhere at both k
            ("d3", 2, "u", [2.0, 2.0], [2.0, 2.0]),
            ("d3", 2, "f", [2.0, 2.0], [2.0, 2.0]),
            ("d3", 2, "p", [1.0, 1.0], [1.0, 1.0]),
            ("d3", 4, "u", [2.0, 2.0], [2.0, 2.0]),
            ("d3", 4, "f", [2.0, 2.0], [2.0, 2.0]),
            ("d3", 4, "p", [1.0, 1.0], [1.0, 1.0]),
        ];
        let mut recs = Vec::new();
        for &(d, k, m, init, it) in plan {
            for s in 0..2 {
                recs.push(rec(d, m, k, s, "init", init[s as usize]));
                recs.push(rec(d, m, k, s, "iter-1", it[s as usize]));
            }
        }
        let counts = |mode: WinMode| {
            let t = win_table(&recs, mode).unwrap();
            ["u", "f", "p"]
                .iter()
                .map(|m| [t.count(m, 2).unwrap(), t.count(m, 4).unwrap()])
                .collect::<Vec<_>>()
        };
        let mode = |stat, scope| WinMode { stat, scope };
        use WinScope::*;
        use WinStat::*;
        // Hand-computed tables: rows u, f, p; columns k = 2, 4.
        assert_eq!(counts(mode(Best, Initialization)), vec![[0, 1], [0, 1], [3, 2]]);
        assert_eq!(counts(mode(Median, Initialization)), vec![[0, 1], [0, 0], [3, 3]]);
        assert_eq!(counts(mode(Best, Overall)), vec![[1, 0], [0, 2], [2, 1]]);
        assert_eq!(counts(mode(Median, Overall)), vec![[0, 0], [0, 1], [3, 2]]);
    }

    #[test]
    fn mode_names() {
        for m in WinMode::ALL {
            assert_eq!(m.to_string().parse::<WinMode>().unwrap(), m);
        }
        assert!("best".parse::<WinMode>().is_err());
    }
}
