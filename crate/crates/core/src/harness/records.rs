use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

pub const RECORDS_HEADER: &str = "dataset,method,k,seed,stage,mse,init_time_s,iter_time_s,flags";

/// One row of the records file. `mse` is `None` on error rows.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRecord {
    pub dataset: String,
    pub method: String,
    pub k: usize,
    pub seed: u64,
    pub stage: String,
    pub mse: Option<f64>,
    pub init_time_s: f64,
    pub iter_time_s: f64,
    pub flags: String,
}

impl ResultRecord {
    pub fn is_error(&self) -> bool {
        self.mse.is_none()
    }

    /// Position of the stage in a trace: `init` is 0, `iter-t` is `t`.
    pub fn stage_index(&self) -> usize {
        stage_index(&self.stage)
    }
}

pub(crate) fn stage_index(stage: &str) -> usize {
    stage
        .strip_prefix("iter-")
        .and_then(|t| t.parse().ok())
        .unwrap_or(0)
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub(crate) fn clean_field(s: &str) -> String {
    s.replace([',', '\n', '\r'], "_")
}

pub fn write_records(path: &Path, records: &[ResultRecord]) -> Result<()> {
    let mut out = String::with_capacity(64 * (records.len() + 1));
    out.push_str(RECORDS_HEADER);
    out.push('\n');
    for r in records {
        let mse = r.mse.map(|v| v.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            clean_field(&r.dataset),
            r.method,
            r.k,
            r.seed,
            r.stage,
            mse,
            r.init_time_s,
            r.iter_time_s,
            clean_field(&r.flags)
        ));
    }
    let mut f = std::fs::File::create(path).map_err(io_err(path))?;
    f.write_all(out.as_bytes()).map_err(io_err(path))
}

pub fn read_records(path: &Path) -> Result<Vec<ResultRecord>> {
    let file = std::fs::File::open(path).map_err(io_err(path))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .quoting(false)
        .from_reader(file);
    let parse_err = |line: usize, column: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        column,
        message,
    };
    let header = reader
        .headers()
        .map_err(|e| parse_err(1, 0, e.to_string()))?
        .iter()
        .collect::<Vec<_>>()
        .join(",");
    if header != RECORDS_HEADER {
        return Err(parse_err(1, 0, format!("unexpected header `{header}`")));
    }
    let mut out = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            parse_err(line, 0, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let num = |j: usize| -> Result<f64> {
            rec[j]
                .parse()
                .map_err(|_| parse_err(line, j + 1, format!("`{}` is not a number", &rec[j])))
        };
        let int = |j: usize| -> Result<u64> {
            rec[j]
                .parse()
                .map_err(|_| parse_err(line, j + 1, format!("`{}` is not an integer", &rec[j])))
        };
        out.push(ResultRecord {
            dataset: rec[0].to_string(),
            method: rec[1].to_string(),
            k: int(2)? as usize,
            seed: int(3)?,
            stage: rec[4].to_string(),
            mse: if rec[5].is_empty() { None } else { Some(num(5)?) },
            init_time_s: num(6)?,
            iter_time_s: num(7)?,
            flags: rec[8].to_string(),
        });
    }
    Ok(out)
}
