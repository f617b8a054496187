//! Alternating optimisation of archetypal analysis: fit the convex weights of
//! every point, move the archetypes to their least-squares position, then pull
//! them back into the data hull.

use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::{cholesky_solve, factor_with_jitter, sq_dist, DataMatrix};
use crate::simplex::SimplexProblem;

/// Row-stochastic weights: `a` is `n x k`, `b` is `k x n`.
#[derive(Debug, Clone)]
pub struct SimplexWeights {
    pub a: DataMatrix,
    pub b: DataMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Stage {
    pub label: String,
    pub mse: f64,
    /// Seconds since the start of the fit when this stage was recorded.
    pub elapsed_s: f64,
}

#[derive(Debug, Clone, Default)]
pub struct FitTrace {
    pub stages: Vec<Stage>,
    pub init_time_s: f64,
    pub iter_time_s: f64,
}

impl FitTrace {
    pub fn mse_values(&self) -> Vec<f64> {
        self.stages.iter().map(|s| s.mse).collect()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct FitOptions {
    pub iters: usize,
    /// Stop early once the relative MSE improvement of a cycle drops below
    /// this. Off by default so traces have a fixed length.
    pub rel_tol: Option<f64>,
    /// Shorten the archetype step when projecting the unconstrained
    /// archetypes back into the data hull would raise `||X - A Z||`. The
    /// plain projection is not a descent step; with the guard every cycle is
    /// monotone.
    pub guarded: bool,
}

impl FitOptions {
    pub fn iterations(iters: usize) -> Self {
        Self {
            iters,
            rel_tol: None,
            guarded: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Fit {
    pub weights: SimplexWeights,
    pub archetypes: DataMatrix,
    pub trace: FitTrace,
}

pub fn stage_label(iteration: usize) -> String {
    if iteration == 0 {
        "init".to_string()
    } else {
        format!("iter-{iteration}")
    }
}

/// `||X - A Z||_F^2 / n`.
pub fn mse(data: &DataMatrix, a: &DataMatrix, z: &DataMatrix) -> Result<f64> {
    let (n, d) = (data.nrows(), data.ncols());
    if a.nrows() != n || a.ncols() != z.nrows() || z.ncols() != d {
        return Err(Error::Dimension(format!(
            "X is {n}x{d}, A is {}x{}, Z is {}x{}",
            a.nrows(),
            a.ncols(),
            z.nrows(),
            z.ncols()
        )));
    }
    let total: f64 = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut recon = vec![0.0; d];
            for (&w, zr) in a.row(i).iter().zip(z.rows()) {
                if w != 0.0 {
                    crate::matrix::axpy(w, zr, &mut recon);
                }
            }
            sq_dist(&recon, data.row(i))
        })
        .collect::<Vec<_>>()
        .iter()
        .sum();
    Ok(total / n as f64)
}

fn solve_rows(problem: &SimplexProblem, targets: &DataMatrix) -> Result<DataMatrix> {
    let k = problem.vertices().nrows();
    let rows: Vec<Vec<f64>> = (0..targets.nrows())
        .into_par_iter()
        .map(|i| {
            problem
                .solve(targets.row(i))
                .map(|s| s.weights)
                .map_err(|e| e.at_row(i))
        })
        .collect::<Result<_>>()?;
    DataMatrix::new(targets.nrows(), k, rows.concat())
}

/// Best convex weights of every data point over the archetypes.
pub fn update_a(data: &DataMatrix, z: &DataMatrix) -> Result<DataMatrix> {
    if z.ncols() != data.ncols() {
        return Err(Error::Dimension(format!(
            "archetypes have {} columns, data has {}",
            z.ncols(),
            data.ncols()
        )));
    }
    solve_rows(&SimplexProblem::new(z), data)
}

/// Least-squares archetypes for fixed weights, `(A^T A)^-1 A^T X`. A singular
/// `A^T A` (unused or redundant archetypes) gets `1e-10 * trace / k` added to
/// its diagonal.
pub fn update_z_unconstrained(a: &DataMatrix, data: &DataMatrix) -> Result<DataMatrix> {
    let (n, k, d) = (a.nrows(), a.ncols(), data.ncols());
    if data.nrows() != n {
        return Err(Error::Dimension(format!(
            "A has {n} rows, X has {}",
            data.nrows()
        )));
    }
    let mut ata = vec![0.0; k * k];
    let mut atx = vec![0.0; k * d];
    for i in 0..n {
        let ar = a.row(i);
        let xr = data.row(i);
        for p in 0..k {
            let ap = ar[p];
            if ap == 0.0 {
                continue;
            }
            for q in 0..=p {
                ata[p * k + q] += ap * ar[q];
            }
            crate::matrix::axpy(ap, xr, &mut atx[p * d..(p + 1) * d]);
        }
    }
    for p in 0..k {
        for q in 0..p {
            ata[q * k + p] = ata[p * k + q];
        }
    }
    let trace: f64 = (0..k).map(|p| ata[p * k + p]).sum();
    let mut factor = ata.clone();
    if !crate::matrix::cholesky_in_place(&mut factor, k) {
        factor.copy_from_slice(&ata);
        let lambda = 1e-10 * trace / k as f64;
        for p in 0..k {
            factor[p * k + p] += lambda;
        }
        // Escalate only if the prescribed jitter is not enough.
        factor_with_jitter(&mut factor, k, 1e-10)?;
    }
    let mut z = vec![0.0; k * d];
    let mut rhs = vec![0.0; k];
    for c in 0..d {
        for p in 0..k {
            rhs[p] = atx[p * d + c];
        }
        cholesky_solve(&factor, k, &mut rhs);
        for p in 0..k {
            z[p * d + c] = rhs[p];
        }
    }
    DataMatrix::new(k, d, z)
}

/// Convex weights over the data points that best reproduce each target
/// archetype. The realised archetypes are `B X`.
pub fn update_b(data: &DataMatrix, targets: &DataMatrix) -> Result<DataMatrix> {
    if targets.ncols() != data.ncols() {
        return Err(Error::Dimension(format!(
            "targets have {} columns, data has {}",
            targets.ncols(),
            data.ncols()
        )));
    }
    solve_rows(&SimplexProblem::new(data), targets)
}

/// Run `opts.iters` full alternating cycles from the initial archetypes.
///
/// The trace holds the objective of the current archetypes, i.e. the MSE
/// with freshly solved weights: once for the initial archetypes and once
/// after every cycle.
pub fn fit(data: &DataMatrix, z0: &DataMatrix, opts: FitOptions) -> Result<Fit> {
    let start = Instant::now();
    let k = z0.nrows();
    let mut z = z0.clone();
    let mut a = update_a(data, &z).map_err(|e| e.at_iteration(0))?;
    let mut b = initial_b(data, &z).map_err(|e| e.at_iteration(0))?;
    let mut trace = FitTrace::default();
    let mut last = mse(data, &a, &z)?;
    trace.stages.push(Stage {
        label: stage_label(0),
        mse: last,
        elapsed_s: start.elapsed().as_secs_f64(),
    });

    for it in 1..=opts.iters {
        let step = || -> Result<(DataMatrix, DataMatrix, DataMatrix)> {
            let z_free = update_z_unconstrained(&a, data)?;
            let mut b_new = update_b(data, &z_free)?;
            if opts.guarded {
                let z_proj = b_new.matmul(data)?;
                let alpha = guarded_step(data, &a, &z, &z_proj)?;
                if alpha < 1.0 {
                    b_new = blend(&b, &b_new, alpha);
                }
            }
            let z_new = b_new.matmul(data)?;
            let a_new = update_a(data, &z_new)?;
            Ok((b_new, z_new, a_new))
        };
        let (b_new, z_new, a_new) = step().map_err(|e| e.at_iteration(it))?;
        b = b_new;
        z = z_new;
        a = a_new;
        let value = mse(data, &a, &z)?;
        trace.stages.push(Stage {
            label: stage_label(it),
            mse: value,
            elapsed_s: start.elapsed().as_secs_f64(),
        });
        let improvement = (last - value) / last.max(f64::MIN_POSITIVE);
        last = value;
        if matches!(opts.rel_tol, Some(tol) if improvement < tol) {
            break;
        }
    }
    trace.iter_time_s = start.elapsed().as_secs_f64();
    debug_assert_eq!(a.ncols(), k);
    Ok(Fit {
        weights: SimplexWeights { a, b },
        archetypes: z,
        trace,
    })
}

/// Step length along `Z + alpha (Z_proj - Z)`, `alpha` in `[0, 1]`: 1 when the
/// full step does not increase `||X - A Z||^2`, otherwise the exact minimiser
/// of that quadratic in `alpha`.
fn guarded_step(data: &DataMatrix, a: &DataMatrix, z: &DataMatrix, z_proj: &DataMatrix) -> Result<f64> {
    let d = data.ncols();
    let delta: Vec<f64> = z_proj
        .as_slice()
        .iter()
        .zip(z.as_slice())
        .map(|(p, q)| p - q)
        .collect();
    let delta = DataMatrix::new(z.nrows(), d, delta)?;
    let recon = a.matmul(z)?;
    let shift = a.matmul(&delta)?;
    let (mut cross, mut shift_sq, mut increase) = (0.0, 0.0, 0.0);
    for ((x, r), s) in data.as_slice().iter().zip(recon.as_slice()).zip(shift.as_slice()) {
        let resid = x - r;
        cross += resid * s;
        shift_sq += s * s;
        // ||R - S||^2 - ||R||^2
        increase += s * s - 2.0 * resid * s;
    }
    if increase <= 0.0 || shift_sq == 0.0 {
        return Ok(1.0);
    }
    Ok((cross / shift_sq).clamp(0.0, 1.0))
}

fn blend(old: &DataMatrix, new: &DataMatrix, alpha: f64) -> DataMatrix {
    let v = old
        .as_slice()
        .iter()
        .zip(new.as_slice())
        .map(|(o, n)| (1.0 - alpha) * o + alpha * n)
        .collect();
    DataMatrix::new(old.nrows(), old.ncols(), v).expect("blend of equal shapes")
}

/// `B` for archetypes that are data points: the one-hot row of the first
/// matching point, or a simplex fit when no row matches exactly.
fn initial_b(data: &DataMatrix, z: &DataMatrix) -> Result<DataMatrix> {
    let n = data.nrows();
    let mut b = DataMatrix::zeros(z.nrows(), n);
    let mut problem = None;
    for (j, zr) in z.rows().enumerate() {
        match data.rows().position(|r| r == zr) {
            Some(i) => b.row_mut(j)[i] = 1.0,
            None => {
                let p = problem.get_or_insert_with(|| SimplexProblem::new(data));
                let sol = p.solve(zr).map_err(|e| e.at_row(j))?;
                b.row_mut(j).copy_from_slice(&sol.weights);
            }
        }
    }
    Ok(b)
}
