//! Simplex-constrained least squares and the point-to-hull distance it
//! induces.
//!
//! `min ||G^T a - x||^2  s.t.  a >= 0, sum(a) = 1` is solved as a
//! non-negative least-squares problem on the system augmented with one extra
//! row, `[G^T; M 1^T] a ~ [x; t]`. The penalty row alone leaves a sum error of
//! order `|r| |g| / M^2`, so the target `t` is refined (`t += M (1 - sum a)`)
//! until the sum is exact to working precision.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::{dot, householder_lstsq, DataMatrix};

/// Relative dual-feasibility threshold of the active-set loop.
const DUAL_TOL: f64 = 1e-10;
/// Diagonal jitter, relative to the trace, for singular passive systems.
/// Relative pivot below which an entering column counts as dependent on the
/// passive set.
const RANK_TOL: f64 = 1e-10;
/// Largest tolerated `|sum(a) - 1|` before renormalisation is refused.
const SUM_TOL: f64 = 1e-6;
const REFINE_PASSES: usize = 4;
const REFINE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct NnlsSolution {
    pub x: Vec<f64>,
    pub passes: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexSolution {
    pub weights: Vec<f64>,
    pub sq_residual: f64,
    pub iterations: usize,
}

/// Lawson-Hanson NNLS: `min ||C x - y||^2` subject to `x >= 0`.
pub fn nnls(c: &DataMatrix, y: &[f64]) -> Result<NnlsSolution> {
    let (m, p) = (c.nrows(), c.ncols());
    if y.len() != m {
        return Err(Error::Dimension(format!(
            "{m}x{p} system with a right-hand side of length {}",
            y.len()
        )));
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::Input("non-finite right-hand side".into()));
    }
    let mut cols = vec![0.0; m * p];
    for i in 0..m {
        for (j, &v) in c.row(i).iter().enumerate() {
            cols[j * m + i] = v;
        }
    }
    lawson_hanson(&cols, m, y, None)
}

/// Active-set NNLS over a column-major `m x p` matrix.
///
/// The dual threshold is `DUAL_TOL * scale`; without an explicit scale it is
/// relative to `||C^T y||_inf`.
fn lawson_hanson(cols: &[f64], m: usize, y: &[f64], scale: Option<f64>) -> Result<NnlsSolution> {
    let p = cols.len() / m;
    let col = |j: usize| &cols[j * m..(j + 1) * m];

    let mut x = vec![0.0; p];
    let mut passive = vec![false; p];
    let mut blocked = vec![false; p];
    let mut set: Vec<usize> = Vec::with_capacity(m + 1);
    let mut resid = y.to_vec();
    let mut w: Vec<f64> = (0..p).map(|j| dot(col(j), y)).collect();

    let cty = w.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if cty == 0.0 {
        return Ok(NnlsSolution { x, passes: 0 });
    }
    let tol = DUAL_TOL * scale.unwrap_or(cty);
    let max_passes = 3 * p;

    let mut work = Vec::new();
    let mut rhs = Vec::new();
    let mut passes = 0;
    loop {
        let mut best = None;
        let mut best_w = tol;
        for j in 0..p {
            if !passive[j] && !blocked[j] && w[j] > best_w {
                best_w = w[j];
                best = Some(j);
            }
        }
        let Some(t) = best else { break };
        if passes == max_passes {
            return Err(Error::Convergence {
                passes,
                best: x,
            });
        }
        passes += 1;
        passive[t] = true;
        set.push(t);

        let mut first_inner = true;
        loop {
            let solved = householder_lstsq(cols, m, y, &set, RANK_TOL, &mut work, &mut rhs);
            if !solved && !first_inner {
                return Err(Error::Degenerate("passive columns became dependent".into()));
            }
            if first_inner && (!solved || rhs[set.len() - 1] <= 0.0) {
                // The entering column is dependent on the passive set or
                // cannot help numerically; shelve it until the iterate moves.
                set.pop();
                passive[t] = false;
                blocked[t] = true;
                break;
            }
            first_inner = false;
            if rhs.iter().all(|&s| s > 0.0) {
                for (&j, &s) in set.iter().zip(&rhs) {
                    x[j] = s;
                }
                blocked.iter_mut().for_each(|b| *b = false);
                break;
            }
            // Step towards the unconstrained solution until a passive
            // coordinate hits zero; that coordinate leaves the passive set.
            let mut alpha = f64::INFINITY;
            let mut hit = set[0];
            for (&j, &s) in set.iter().zip(&rhs) {
                if s <= 0.0 {
                    let a = x[j] / (x[j] - s);
                    if a < alpha {
                        alpha = a;
                        hit = j;
                    }
                }
            }
            for (&j, &s) in set.iter().zip(&rhs) {
                x[j] += alpha * (s - x[j]);
            }
            x[hit] = 0.0;
            let mut keep = Vec::with_capacity(set.len());
            for &j in &set {
                if x[j] <= 0.0 {
                    x[j] = 0.0;
                    passive[j] = false;
                } else {
                    keep.push(j);
                }
            }
            set = keep;
            blocked.iter_mut().for_each(|b| *b = false);
            if set.is_empty() {
                break;
            }
        }

        resid.copy_from_slice(y);
        for &j in &set {
            let xj = x[j];
            for (r, c) in resid.iter_mut().zip(col(j)) {
                *r -= xj * c;
            }
        }
        for j in 0..p {
            w[j] = if passive[j] { 0.0 } else { dot(col(j), &resid) };
        }
    }
    Ok(NnlsSolution { x, passes })
}

/// A fixed vertex set prepared for repeated simplex-constrained solves.
///
/// The augmented column-major system is built once, so solving many targets
/// against the same vertices (hull distances, the A and B updates) only pays
/// for the active-set iterations.
#[derive(Debug, Clone)]
pub struct SimplexProblem {
    cols: Vec<f64>,
    vertices: DataMatrix,
    weight: f64,
}

impl SimplexProblem {
    pub fn new(vertices: &DataMatrix) -> Self {
        let (k, d) = (vertices.nrows(), vertices.ncols());
        let weight = 200.0 * (1.0 + vertices.max_abs());
        let m = d + 1;
        let mut cols = Vec::with_capacity(k * m);
        for row in vertices.rows() {
            cols.extend_from_slice(row);
            cols.push(weight);
        }
        Self {
            cols,
            vertices: vertices.clone(),
            weight,
        }
    }

    pub fn vertices(&self) -> &DataMatrix {
        &self.vertices
    }

    /// Weight of the summation row.
    pub fn constraint_weight(&self) -> f64 {
        self.weight
    }

    pub fn solve(&self, x: &[f64]) -> Result<SimplexSolution> {
        let (k, d) = (self.vertices.nrows(), self.vertices.ncols());
        if x.len() != d {
            return Err(Error::Dimension(format!(
                "point has {} coordinates, vertices have {d}",
                x.len()
            )));
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Input("non-finite point".into()));
        }
        if k == 1 {
            let v = self.vertices.row(0);
            return Ok(SimplexSolution {
                weights: vec![1.0],
                sq_residual: crate::matrix::sq_dist(v, x),
                iterations: 0,
            });
        }

        // The summation row inflates C^T y by M^2; measure dual feasibility
        // against the data block instead.
        let data_scale = self.weight / 200.0;
        let x_max = x.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let scale = data_scale * (data_scale + x_max);

        let mut target = x.to_vec();
        target.push(self.weight);
        let mut iterations = 0;
        let mut weights = Vec::new();
        for _ in 0..REFINE_PASSES {
            let sol = lawson_hanson(&self.cols, d + 1, &target, Some(scale))?;
            iterations += sol.passes;
            weights = sol.x;
            let sum: f64 = weights.iter().sum();
            if (sum - 1.0).abs() <= REFINE_TOL {
                break;
            }
            target[d] += self.weight * (1.0 - sum);
        }

        let sum: f64 = weights.iter().sum();
        let deviation = (sum - 1.0).abs();
        if deviation > SUM_TOL || !sum.is_finite() {
            return Err(Error::Constraint { deviation });
        }
        weights.iter_mut().for_each(|w| *w = w.max(0.0) / sum);

        let mut recon = vec![0.0; d];
        for (w, v) in weights.iter().zip(self.vertices.rows()) {
            if *w != 0.0 {
                crate::matrix::axpy(*w, v, &mut recon);
            }
        }
        Ok(SimplexSolution {
            sq_residual: crate::matrix::sq_dist(&recon, x),
            weights,
            iterations,
        })
    }
}

/// Convex weights over the rows of `vertices` that best reproduce `x`.
pub fn solve_simplex_ls(vertices: &DataMatrix, x: &[f64]) -> Result<SimplexSolution> {
    SimplexProblem::new(vertices).solve(x)
}

/// Squared distance from `x` to the convex hull of the rows of `vertices`.
pub fn dist_to_hull(x: &[f64], vertices: &DataMatrix) -> Result<f64> {
    Ok(solve_simplex_ls(vertices, x)?.sq_residual)
}

/// Hull distance for every row of `data`. Rows are solved in parallel; the
/// output is positional so evaluation order never matters.
pub fn batch_dist(data: &DataMatrix, vertices: &DataMatrix) -> Result<Vec<f64>> {
    let problem = SimplexProblem::new(vertices);
    batch_dist_with(&problem, data)
}

pub(crate) fn batch_dist_with(problem: &SimplexProblem, data: &DataMatrix) -> Result<Vec<f64>> {
    (0..data.nrows())
        .into_par_iter()
        .map(|i| {
            problem
                .solve(data.row(i))
                .map(|s| s.sq_residual)
                .map_err(|e| e.at_row(i))
        })
        .collect()
}
