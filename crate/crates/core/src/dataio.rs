//! CSV ingestion, the two preprocessing schemes and synthetic generators.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matrix::DataMatrix;
use crate::RngStream;

/// Read a dense numeric CSV file. No quoting, `.` decimal separator.
pub fn load_csv(path: &Path, delimiter: u8, has_header: bool) -> Result<DataMatrix> {
    let file = std::fs::File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .has_headers(has_header)
        .quoting(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(file);

    let parse_err = |line: usize, column: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        column,
        message,
    };

    let mut cols = None;
    let mut rows = 0;
    let mut values = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            parse_err(line, 0, e.to_string())
        })?;
        let line = record.position().map_or(rows + 1, |p| p.line() as usize);
        let width = *cols.get_or_insert(record.len());
        if record.len() != width {
            return Err(parse_err(
                line,
                record.len().min(width) + 1,
                format!("expected {width} columns, found {}", record.len()),
            ));
        }
        for (j, cell) in record.iter().enumerate() {
            let v: f64 = cell
                .parse()
                .map_err(|_| parse_err(line, j + 1, format!("`{cell}` is not a number")))?;
            if !v.is_finite() {
                return Err(parse_err(line, j + 1, format!("`{cell}` is not finite")));
            }
            values.push(v);
        }
        rows += 1;
    }
    match cols {
        Some(d) if rows > 0 => DataMatrix::new(rows, d, values),
        _ => Err(Error::EmptyInput(path.to_path_buf())),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PreprocessSpec {
    None,
    /// Center the columns, then divide everything by the largest absolute
    /// entry of the centered matrix.
    CenterMaxScale,
    /// As `CenterMaxScale` but dividing by the largest signed entry.
    CenterSignedMaxScale,
    /// Center the columns and divide each by its population standard
    /// deviation.
    Standardize,
}

impl FromStr for PreprocessSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Self::None),
            "cms" | "center-max-scale" => Ok(Self::CenterMaxScale),
            "cms-signed" => Ok(Self::CenterSignedMaxScale),
            "std" | "standardize" => Ok(Self::Standardize),
            other => Err(Error::Config(format!("unknown preprocessing `{other}`"))),
        }
    }
}

impl fmt::Display for PreprocessSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::None => "none",
            Self::CenterMaxScale => "cms",
            Self::CenterSignedMaxScale => "cms-signed",
            Self::Standardize => "std",
        })
    }
}

fn column_means(x: &DataMatrix) -> Vec<f64> {
    let mut mean = vec![0.0; x.ncols()];
    for r in x.rows() {
        crate::matrix::axpy(1.0, r, &mut mean);
    }
    let n = x.nrows() as f64;
    mean.iter_mut().for_each(|m| *m /= n);
    mean
}

pub fn preprocess(x: &DataMatrix, spec: PreprocessSpec) -> Result<DataMatrix> {
    if spec == PreprocessSpec::None {
        return Ok(x.clone());
    }
    let (n, d) = (x.nrows(), x.ncols());
    let mean = column_means(x);
    let mut centered: Vec<f64> = x
        .rows()
        .flat_map(|r| r.iter().zip(&mean).map(|(v, m)| v - m))
        .collect();
    match spec {
        PreprocessSpec::CenterMaxScale | PreprocessSpec::CenterSignedMaxScale => {
            let scale = if spec == PreprocessSpec::CenterMaxScale {
                centered.iter().fold(0.0f64, |a, v| a.max(v.abs()))
            } else {
                centered.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            };
            if scale.is_nan() || scale <= 0.0 {
                return Err(Error::Degenerate(format!(
                    "largest centered entry is {scale}; cannot rescale"
                )));
            }
            centered.iter_mut().for_each(|v| *v /= scale);
        }
        PreprocessSpec::Standardize => {
            let mut var = vec![0.0; d];
            for r in centered.chunks_exact(d) {
                for (s, v) in var.iter_mut().zip(r) {
                    *s += v * v;
                }
            }
            let std: Vec<f64> = var.iter().map(|s| (s / n as f64).sqrt()).collect();
            if let Some(j) = std.iter().position(|&s| s.is_nan() || s <= 0.0) {
                return Err(Error::Degenerate(format!("column {j} is constant")));
            }
            for r in centered.chunks_exact_mut(d) {
                for (v, s) in r.iter_mut().zip(&std) {
                    *v /= s;
                }
            }
        }
        PreprocessSpec::None => unreachable!(),
    }
    DataMatrix::new(n, d, centered)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    Ring,
    PolygonHull,
    GaussianBlob,
}

impl FromStr for Shape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ring" => Ok(Self::Ring),
            "polygon-hull" | "polygon" => Ok(Self::PolygonHull),
            "gaussian-blob" | "gaussian" => Ok(Self::GaussianBlob),
            other => Err(Error::Config(format!("unknown synthetic shape `{other}`"))),
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Ring => "ring",
            Self::PolygonHull => "polygon-hull",
            Self::GaussianBlob => "gaussian-blob",
        })
    }
}

pub const RING_NOISE: f64 = 0.2;

pub fn gen_synthetic(shape: Shape, n: usize, d: usize, rng: &mut RngStream) -> Result<DataMatrix> {
    if n == 0 || d == 0 {
        return Err(Error::Config(format!("synthetic data needs n, d >= 1 (got {n}, {d})")));
    }
    match shape {
        Shape::Ring => ring(n, d, RING_NOISE, rng),
        Shape::PolygonHull => polygon_hull(n, d, 2 * d + 2, rng).map(|(x, _)| x),
        Shape::GaussianBlob => {
            let v = (0..n * d).map(|_| rng.normal()).collect();
            DataMatrix::new(n, d, v)
        }
    }
}

/// `n` points around the unit circle in the first two coordinates.
///
/// Point `i` sits at angle `2 pi i / n`, jittered by up to `noise * pi / n`,
/// with radius `1 - noise * U(0, 1)`; the remaining coordinates carry
/// `noise * 0.25 * N(0, 1)`. With `noise = 0` the points are exactly evenly
/// spaced on the circle.
pub fn ring(n: usize, d: usize, noise: f64, rng: &mut RngStream) -> Result<DataMatrix> {
    if d < 2 {
        return Err(Error::Config("ring data needs d >= 2".into()));
    }
    let step = std::f64::consts::TAU / n as f64;
    let mut v = Vec::with_capacity(n * d);
    for i in 0..n {
        let theta = step * i as f64 + noise * step * (rng.uniform() - 0.5);
        let r = 1.0 - noise * rng.uniform();
        v.push(r * theta.cos());
        v.push(r * theta.sin());
        for _ in 2..d {
            v.push(noise * 0.25 * rng.normal());
        }
    }
    DataMatrix::new(n, d, v)
}

/// Random convex polytope and `n` points inside it.
///
/// Vertices lie on the unit sphere (sorted by angle when `d = 2`, so they
/// trace a convex polygon). Each sample is a convex combination of the
/// vertices with flat-Dirichlet weights. Returns `(samples, vertices)`.
pub fn polygon_hull(
    n: usize,
    d: usize,
    vertices: usize,
    rng: &mut RngStream,
) -> Result<(DataMatrix, DataMatrix)> {
    if d < 2 {
        return Err(Error::Config("polygon data needs d >= 2".into()));
    }
    if vertices < 2 {
        return Err(Error::Config("polygon needs at least 2 vertices".into()));
    }
    let mut verts = Vec::with_capacity(vertices * d);
    if d == 2 {
        let mut angles: Vec<f64> = (0..vertices)
            .map(|_| rng.uniform() * std::f64::consts::TAU)
            .collect();
        angles.sort_by(f64::total_cmp);
        for a in angles {
            verts.push(a.cos());
            verts.push(a.sin());
        }
    } else {
        for _ in 0..vertices {
            let mut g: Vec<f64> = (0..d).map(|_| rng.normal()).collect();
            let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-12);
            g.iter_mut().for_each(|v| *v /= norm);
            verts.extend(g);
        }
    }
    let verts = DataMatrix::new(vertices, d, verts)?;

    let mut samples = Vec::with_capacity(n * d);
    let mut weights = vec![0.0; vertices];
    for _ in 0..n {
        for w in weights.iter_mut() {
            *w = rng.exponential();
        }
        let total: f64 = weights.iter().sum();
        let mut point = vec![0.0; d];
        for (w, v) in weights.iter().zip(verts.rows()) {
            crate::matrix::axpy(w / total, v, &mut point);
        }
        samples.extend(point);
    }
    Ok((DataMatrix::new(n, d, samples)?, verts))
}
