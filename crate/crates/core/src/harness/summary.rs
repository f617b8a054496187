use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use log::warn;

use super::records::{clean_field, stage_index, ResultRecord};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct QuantileRow {
    pub dataset: String,
    pub method: String,
    pub k: usize,
    pub stage: String,
    pub count: usize,
    pub median: f64,
    pub q25: f64,
    pub q75: f64,
}

/// Linear-interpolation quantile of already sorted values (the
/// `(len - 1) * q` position rule).
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty());
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    let frac = pos - lo as f64;
    sorted[lo] + frac * (sorted[hi] - sorted[lo])
}

/// Median and interquartile bounds per (dataset, method, k, stage), over
/// seeds. Methods keep their first-appearance order; stages run in trace
/// order.
pub fn aggregate_quantiles(records: &[ResultRecord]) -> Vec<QuantileRow> {
    let mut method_order: Vec<&str> = Vec::new();
    // (dataset, method position, k, stage index) -> (stage label, values)
    type Groups<'a> = BTreeMap<(&'a str, usize, usize, usize), (&'a str, Vec<f64>)>;
    let mut groups: Groups = BTreeMap::new();
    let mut failed: BTreeMap<(&str, usize, usize), usize> = BTreeMap::new();
    for r in records {
        let m = match method_order.iter().position(|&m| m == r.method) {
            Some(p) => p,
            None => {
                method_order.push(&r.method);
                method_order.len() - 1
            }
        };
        // Error rows carry no value and their stage names where the run
        // stopped, not a trace position.
        let Some(v) = r.mse else {
            *failed.entry((&r.dataset, m, r.k)).or_default() += 1;
            continue;
        };
        groups
            .entry((&r.dataset, m, r.k, stage_index(&r.stage)))
            .or_insert((&r.stage, Vec::new()))
            .1
            .push(v);
    }
    for ((dataset, m, k), count) in failed {
        let any = groups
            .keys()
            .any(|&(d, gm, gk, _)| d == dataset && gm == m && gk == k);
        if any {
            warn!("{dataset} {} k={k}: {count} failed runs left out", method_order[m]);
        } else {
            warn!("{dataset} {} k={k}: no successful runs, skipped", method_order[m]);
        }
    }
    let mut out = Vec::with_capacity(groups.len());
    for ((dataset, m, k, _), (stage, mut values)) in groups {
        values.sort_by(f64::total_cmp);
        out.push(QuantileRow {
            dataset: dataset.to_string(),
            method: method_order[m].to_string(),
            k,
            stage: stage.to_string(),
            count: values.len(),
            median: quantile(&values, 0.5),
            q25: quantile(&values, 0.25),
            q75: quantile(&values, 0.75),
        });
    }
    out
}

pub fn write_quantiles(path: &Path, rows: &[QuantileRow]) -> Result<()> {
    let mut out = String::from("dataset,method,k,stage,count,median,q25,q75\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            clean_field(&r.dataset),
            r.method,
            r.k,
            r.stage,
            r.count,
            r.median,
            r.q25,
            r.q75
        ));
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
    use crate::RngStream;

    fn rec(method: &str, k: usize, seed: u64, stage: &str, mse: Option<f64>) -> ResultRecord {
        ResultRecord {
            dataset: "d".into(),
            method: method.into(),
            k,
            seed,
            stage: stage.into(),
            mse,
            init_time_s: 0.0,
            iter_time_s: 0.0,
            flags: String::new(),
        }
    }

    #[test]
    fn single_seed_collapses() {
        let rows = aggregate_quantiles(&[rec("aapp", 3, 0, "init", Some(0.7))]);
        assert_eq!(rows.len(), 1);
        assert_eq!((rows[0].median, rows[0].q25, rows[0].q75), (0.7, 0.7, 0.7));
    }

    #[test]
    fn median_of_three() {
        let recs: Vec<_> = [3.0, 1.0, 2.0]
            .iter()
            .enumerate()
            .map(|(s, &v)| rec("u", 2, s as u64, "init", Some(v)))
            .collect();
        let rows = aggregate_quantiles(&recs);
        assert_eq!(rows[0].median, 2.0);
        assert_eq!(rows[0].q25, 1.5);
        assert_eq!(rows[0].q75, 2.5);
    }

    #[test]
    fn matches_sort_based_oracle() {
        let mut rng = RngStream::new(4);
        let values: Vec<f64> = (0..50).map(|_| rng.normal()).collect();
        let recs: Vec<_> = values
            .iter()
            .enumerate()
            .map(|(s, &v)| rec("m", 5, s as u64, "iter-1", Some(v)))
            .collect();
        let row = &aggregate_quantiles(&recs)[0];
        let mut sorted = values.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        // 50 values: positions 24.5, 12.25, 36.75.
        let median = 0.5 * (sorted[24] + sorted[25]);
        let q25 = sorted[12] + 0.25 * (sorted[13] - sorted[12]);
        let q75 = sorted[36] + 0.75 * (sorted[37] - sorted[36]);
        assert!((row.median - median).abs() <= 1e-12);
        assert!((row.q25 - q25).abs() <= 1e-12);
        assert!((row.q75 - q75).abs() <= 1e-12);
    }

    #[test]
    fn groups_are_ordered_and_errors_skipped() {
        let recs = vec![
            rec("b", 2, 0, "init", Some(1.0)),
            rec("b", 2, 0, "iter-10", Some(0.5)),
            rec("b", 2, 0, "iter-2", Some(0.8)),
            rec("a", 2, 0, "init", None),
            rec("a", 1, 0, "init", Some(2.0)),
        ];
        let rows = aggregate_quantiles(&recs);
        let keys: Vec<(String, usize, String)> = rows
            .iter()
            .map(|r| (r.method.clone(), r.k, r.stage.clone()))
            .collect();
        assert_eq!(
            keys,
            vec![
                ("b".into(), 2, "init".into()),
                ("b".into(), 2, "iter-2".into()),
                ("b".into(), 2, "iter-10".into()),
                ("a".into(), 1, "init".into()),
            ]
        );
    }

    #[test]
    fn failed_runs_do_not_relabel_stages() {
        // A run that failed during fitting leaves one row with stage `fit`
        // ahead of the successful seeds.
        let recs = vec![
            rec("aapp", 5, 0, "fit", None),
            rec("aapp", 5, 1, "init", Some(3.0)),
            rec("aapp", 5, 1, "iter-1", Some(2.0)),
            rec("aapp", 5, 2, "init", Some(5.0)),
            rec("aapp", 5, 2, "iter-1", Some(4.0)),
        ];
        let rows = aggregate_quantiles(&recs);
        assert_eq!(rows.len(), 2);
        assert_eq!((rows[0].stage.as_str(), rows[0].count, rows[0].median), ("init", 2, 4.0));
        assert_eq!((rows[1].stage.as_str(), rows[1].count, rows[1].median), ("iter-1", 2, 3.0));
    }
}
