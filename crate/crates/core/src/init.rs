//! Archetype seeding strategies.
//!
//! Every method takes the first archetype with one `rng.index(n)` draw.
//! After that, randomness is consumed in algorithm order: one categorical
//! draw per archetype for the D^2-style samplers, and for the Markov chain
//! one `index` draw for the start state followed by an (`index`, `uniform`)
//! pair per proposal.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matrix::{sq_dist, DataMatrix};
use crate::simplex::{batch_dist_with, SimplexProblem};
use crate::RngStream;

/// Hull distances at or below this are treated as exactly zero.
pub const ZERO_DISTANCE: f64 = 1e-12;

/// Selected rows of the dataset, in selection order.
#[derive(Debug, Clone, PartialEq)]
pub struct ArchetypeSet {
    indices: Vec<usize>,
    z: DataMatrix,
}

impl ArchetypeSet {
    pub fn from_indices(data: &DataMatrix, indices: Vec<usize>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::Cardinality {
                k: 0,
                n: data.nrows(),
            });
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= data.nrows()) {
            return Err(Error::Input(format!(
                "index {bad} out of range for {} rows",
                data.nrows()
            )));
        }
        let z = data.select_rows(&indices);
        Ok(Self { indices, z })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn matrix(&self) -> &DataMatrix {
        &self.z
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// Outcome of one seeding run.
#[derive(Debug, Clone)]
pub struct Seeding {
    pub archetypes: ArchetypeSet,
    /// Set when every remaining point had zero residual and the rest of the
    /// archetypes had to be drawn uniformly.
    pub degenerate: bool,
    /// Number of point-to-hull solves performed.
    pub hull_solves: usize,
}

/// Markov chain length for AA++MC, either absolute or as a fraction of `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChainConfig {
    Length(usize),
    Fraction(f64),
}

impl ChainConfig {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ChainConfig::Length(m) if m < 2 => {
                Err(Error::Config(format!("chain length must be >= 2, got {m}")))
            }
            ChainConfig::Fraction(f) if !(f > 0.0 && f <= 1.0) => Err(Error::Config(format!(
                "chain fraction must lie in (0, 1], got {f}"
            ))),
            _ => Ok(()),
        }
    }

    /// Number of chain states for a dataset of `n` points.
    pub fn resolve(&self, n: usize) -> usize {
        match *self {
            ChainConfig::Length(m) => m.max(2),
            ChainConfig::Fraction(f) => ((f * n as f64).round() as usize).max(2),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    Uniform,
    FurthestFirst,
    FurthestSum,
    AaPlusPlus,
    KMeansPlusPlus,
    AaPlusPlusMc(ChainConfig),
}

impl Method {
    pub fn id(&self) -> String {
        self.to_string()
    }

    /// Markov-chain approximations are kept out of win tables.
    pub fn is_mcmc(&self) -> bool {
        matches!(self, Method::AaPlusPlusMc(_))
    }

    pub fn seed(&self, data: &DataMatrix, k: usize, rng: &mut RngStream) -> Result<Seeding> {
        match *self {
            Method::Uniform => init_uniform(data, k, rng),
            Method::FurthestFirst => init_furthest_first(data, k, rng),
            Method::FurthestSum => init_furthest_sum(data, k, rng),
            Method::AaPlusPlus => init_aapp(data, k, rng),
            Method::KMeansPlusPlus => init_kmeanspp(data, k, rng),
            Method::AaPlusPlusMc(chain) => init_aapp_mc(data, k, chain, rng),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Uniform => f.write_str("uniform"),
            Method::FurthestFirst => f.write_str("furthest-first"),
            Method::FurthestSum => f.write_str("furthest-sum"),
            Method::AaPlusPlus => f.write_str("aapp"),
            Method::KMeansPlusPlus => f.write_str("kmeanspp"),
            Method::AaPlusPlusMc(ChainConfig::Fraction(x)) => write!(f, "aapp-mc-{x}"),
            Method::AaPlusPlusMc(ChainConfig::Length(m)) => write!(f, "aapp-mc-m{m}"),
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    /// Accepts the ids produced by `Display`. A bare `aapp-mc` is not a
    /// method on its own; it needs a fraction (`aapp-mc-0.05`) or a length
    /// (`aapp-mc-m50`).
    fn from_str(s: &str) -> Result<Self> {
        let m = match s {
            "uniform" => Method::Uniform,
            "furthest-first" => Method::FurthestFirst,
            "furthest-sum" => Method::FurthestSum,
            "aapp" => Method::AaPlusPlus,
            "kmeanspp" => Method::KMeansPlusPlus,
            other => {
                let rest = other
                    .strip_prefix("aapp-mc-")
                    .ok_or_else(|| Error::Config(format!("unknown method `{other}`")))?;
                let chain = match rest.strip_prefix('m') {
                    Some(len) => ChainConfig::Length(len.parse().map_err(|_| {
                        Error::Config(format!("bad chain length in `{other}`"))
                    })?),
                    None => ChainConfig::Fraction(rest.parse().map_err(|_| {
                        Error::Config(format!("bad chain fraction in `{other}`"))
                    })?),
                };
                chain.validate()?;
                Method::AaPlusPlusMc(chain)
            }
        };
        Ok(m)
    }
}

fn check_k(data: &DataMatrix, k: usize) -> Result<()> {
    let n = data.nrows();
    if k == 0 || k > n {
        return Err(Error::Cardinality { k, n });
    }
    Ok(())
}

fn finish(data: &DataMatrix, indices: Vec<usize>, degenerate: bool, hull_solves: usize) -> Result<Seeding> {
    Ok(Seeding {
        archetypes: ArchetypeSet::from_indices(data, indices)?,
        degenerate,
        hull_solves,
    })
}

/// `k` distinct indices, uniformly without replacement (partial
/// Fisher-Yates, one `index` draw per pick).
pub fn init_uniform(data: &DataMatrix, k: usize, rng: &mut RngStream) -> Result<Seeding> {
    check_k(data, k)?;
    let n = data.nrows();
    let mut perm: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = i + rng.index(n - i);
        perm.swap(i, j);
    }
    perm.truncate(k);
    finish(data, perm, false, 0)
}

/// Greedy max-min selection (Gonzalez). Ties go to the lowest index.
pub fn init_furthest_first(data: &DataMatrix, k: usize, rng: &mut RngStream) -> Result<Seeding> {
    check_k(data, k)?;
    let first = rng.index(data.nrows());
    Ok(Seeding {
        archetypes: ArchetypeSet::from_indices(data, furthest_first_from(data, k, first))?,
        degenerate: false,
        hull_solves: 0,
    })
}

pub(crate) fn furthest_first_from(data: &DataMatrix, k: usize, first: usize) -> Vec<usize> {
    let n = data.nrows();
    let mut chosen = vec![first];
    let mut selected = vec![false; n];
    selected[first] = true;
    // Squared distances order the same way as distances.
    let mut nearest: Vec<f64> = data.rows().map(|r| sq_dist(r, data.row(first))).collect();
    while chosen.len() < k {
        let next = argmax_unselected(&nearest, &selected);
        chosen.push(next);
        selected[next] = true;
        let z = data.row(next);
        for (i, d) in nearest.iter_mut().enumerate() {
            let t = sq_dist(data.row(i), z);
            if t < *d {
                *d = t;
            }
        }
    }
    chosen
}

fn argmax_unselected(score: &[f64], selected: &[bool]) -> usize {
    let mut best = usize::MAX;
    let mut best_score = f64::NEG_INFINITY;
    for (i, (&s, &taken)) in score.iter().zip(selected).enumerate() {
        if !taken && s > best_score {
            best = i;
            best_score = s;
        }
    }
    best
}

/// Greedy max-sum-of-distances selection with the random start discarded and
/// replaced by one more greedy pick at the end.
///
/// With `k = 1` there is nothing to replace the start with, so this is a
/// single uniform draw.
pub fn init_furthest_sum(data: &DataMatrix, k: usize, rng: &mut RngStream) -> Result<Seeding> {
    check_k(data, k)?;
    if k == 1 {
        return init_uniform(data, 1, rng);
    }
    let first = rng.index(data.nrows());
    finish(data, furthest_sum_from(data, k, first), false, 0)
}

pub(crate) fn furthest_sum_from(data: &DataMatrix, k: usize, first: usize) -> Vec<usize> {
    let n = data.nrows();
    let dist_to = |j: usize| -> Vec<f64> {
        let z = data.row(j);
        data.rows().map(|r| sq_dist(r, z).sqrt()).collect()
    };
    let mut selected = vec![false; n];
    let mut chosen = vec![first];
    selected[first] = true;
    let mut sums = dist_to(first);
    while chosen.len() < k {
        let next = argmax_unselected(&sums, &selected);
        chosen.push(next);
        selected[next] = true;
        for (s, d) in sums.iter_mut().zip(dist_to(next)) {
            *s += d;
        }
    }
    // Drop the random start; it becomes eligible again.
    chosen.remove(0);
    selected[first] = false;
    for (s, d) in sums.iter_mut().zip(dist_to(first)) {
        *s -= d;
    }
    if chosen.len() < n {
        chosen.push(argmax_unselected(&sums, &selected));
    } else {
        chosen.push(first);
    }
    chosen
}

fn unselected_uniform(n: usize, selected: &[bool], rng: &mut RngStream) -> usize {
    let free: Vec<usize> = (0..n).filter(|&i| !selected[i]).collect();
    free[rng.index(free.len())]
}

/// Shared D^2 sampling loop. `residuals(chosen)` returns one nonnegative
/// weight per point for the current selection.
fn d2_sampling<F>(data: &DataMatrix, k: usize, rng: &mut RngStream, mut residuals: F) -> Result<Seeding>
where
    F: FnMut(&[usize], &mut usize) -> Result<Vec<f64>>,
{
    check_k(data, k)?;
    let n = data.nrows();
    let mut chosen = vec![rng.index(n)];
    let mut selected = vec![false; n];
    selected[chosen[0]] = true;
    let mut degenerate = false;
    let mut solves = 0;
    while chosen.len() < k {
        let next = if degenerate {
            unselected_uniform(n, &selected, rng)
        } else {
            let mut w = residuals(&chosen, &mut solves)?;
            for v in w.iter_mut() {
                if *v <= ZERO_DISTANCE {
                    *v = 0.0;
                }
            }
            if w.iter().all(|&v| v == 0.0) {
                degenerate = true;
                unselected_uniform(n, &selected, rng)
            } else {
                rng.categorical(&w)?
            }
        };
        chosen.push(next);
        selected[next] = true;
    }
    finish(data, chosen, degenerate, solves)
}

/// AA++: each new archetype is drawn with probability proportional to its
/// squared distance to the convex hull of the archetypes chosen so far.
pub fn init_aapp(data: &DataMatrix, k: usize, rng: &mut RngStream) -> Result<Seeding> {
    d2_sampling(data, k, rng, |chosen, solves| {
        let problem = SimplexProblem::new(&data.select_rows(chosen));
        *solves += data.nrows();
        batch_dist_with(&problem, data)
    })
}

/// The k-means++ approximation of AA++: distance to the nearest chosen point
/// instead of the hull. Nearest distances are updated incrementally.
pub fn init_kmeanspp(data: &DataMatrix, k: usize, rng: &mut RngStream) -> Result<Seeding> {
    let mut nearest: Vec<f64> = Vec::new();
    let mut seen = 0;
    d2_sampling(data, k, rng, |chosen, _| {
        for &j in &chosen[seen..] {
            let z = data.row(j);
            if nearest.is_empty() {
                nearest = data.rows().map(|r| sq_dist(r, z)).collect();
            } else {
                for (d, r) in nearest.iter_mut().zip(data.rows()) {
                    *d = d.min(sq_dist(r, z));
                }
            }
        }
        seen = chosen.len();
        Ok(nearest.clone())
    })
}

/// AA++MC: each archetype after the first is the end state of a
/// Metropolis-Hastings chain of `m` states with uniform independent
/// proposals, accepting `j` over `i` with probability `min(1, d_j / d_i)`.
pub fn init_aapp_mc(
    data: &DataMatrix,
    k: usize,
    chain: ChainConfig,
    rng: &mut RngStream,
) -> Result<Seeding> {
    check_k(data, k)?;
    chain.validate()?;
    let n = data.nrows();
    let m = chain.resolve(n);
    let mut chosen = vec![rng.index(n)];
    let mut selected = vec![false; n];
    selected[chosen[0]] = true;
    let mut degenerate = false;
    let mut solves = 0;
    while chosen.len() < k {
        let problem = SimplexProblem::new(&data.select_rows(&chosen));
        let (state, dist, used) = mh_chain(&problem, data, m, rng)?;
        solves += used;
        let next = if dist <= ZERO_DISTANCE {
            // Every visited state sat inside the hull.
            degenerate = true;
            unselected_uniform(n, &selected, rng)
        } else {
            state
        };
        chosen.push(next);
        selected[next] = true;
    }
    finish(data, chosen, degenerate, solves)
}

/// Run one chain of `m` states against fixed archetypes. Returns the end
/// state, its hull distance and the number of hull solves (always `m`).
pub fn mh_chain(
    problem: &SimplexProblem,
    data: &DataMatrix,
    m: usize,
    rng: &mut RngStream,
) -> Result<(usize, f64, usize)> {
    let n = data.nrows();
    let dist = |i: usize| -> Result<f64> {
        let d = problem.solve(data.row(i)).map_err(|e| e.at_row(i))?.sq_residual;
        Ok(if d <= ZERO_DISTANCE { 0.0 } else { d })
    };
    let mut state = rng.index(n);
    let mut d_state = dist(state)?;
    let mut solves = 1;
    for _ in 1..m {
        let cand = rng.index(n);
        let d_cand = dist(cand)?;
        solves += 1;
        let u = rng.uniform();
        // A zero-distance current state accepts anything.
        if d_state == 0.0 || d_cand / d_state > u {
            state = cand;
            d_state = d_cand;
        }
    }
    Ok((state, d_state, solves))
}

/// `n * max_i d_i / sum_i d_i` for one fixed archetype set, where `d_i` is
/// the squared hull distance. This is the inner quantity of the chain-length
/// bound; the maximum over all archetype subsets is not computed.
pub fn gamma_prime_fixed(data: &DataMatrix, archetypes: &DataMatrix) -> Result<f64> {
    let d = crate::simplex::batch_dist(data, archetypes)?;
    let total: f64 = d.iter().sum();
    if total.is_nan() || total <= 0.0 {
        return Err(Error::Degenerate(
            "every point lies in the archetype hull".into(),
        ));
    }
    let max = d.iter().cloned().fold(0.0, f64::max);
    Ok(data.nrows() as f64 * max / total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(points: &[f64]) -> DataMatrix {
        DataMatrix::new(points.len(), 1, points.to_vec()).unwrap()
    }

    fn random_data(seed: u64, n: usize, d: usize) -> DataMatrix {
        let mut rng = RngStream::new(seed);
        DataMatrix::new(n, d, (0..n * d).map(|_| rng.uniform()).collect()).unwrap()
    }

    #[test]
    fn cardinality_errors() {
        let x = random_data(1, 5, 2);
        let mut rng = RngStream::new(0);
        for m in [
            Method::Uniform,
            Method::FurthestFirst,
            Method::FurthestSum,
            Method::AaPlusPlus,
            Method::KMeansPlusPlus,
            Method::AaPlusPlusMc(ChainConfig::Length(3)),
        ] {
            assert!(matches!(
                m.seed(&x, 6, &mut rng),
                Err(Error::Cardinality { k: 6, n: 5 })
            ));
            assert!(m.seed(&x, 0, &mut rng).is_err());
        }
    }

    #[test]
    fn uniform_full_permutation() {
        let x = random_data(2, 30, 2);
        let s = init_uniform(&x, 30, &mut RngStream::new(4)).unwrap();
        let mut idx = s.archetypes.indices().to_vec();
        idx.sort_unstable();
        assert_eq!(idx, (0..30).collect::<Vec<_>>());
    }

    #[test]
    fn uniform_single_pick_is_reproducible() {
        let x = random_data(2, 30, 2);
        let a = init_uniform(&x, 1, &mut RngStream::new(99)).unwrap();
        let b = init_uniform(&x, 1, &mut RngStream::new(99)).unwrap();
        assert_eq!(a.archetypes, b.archetypes);
        assert_eq!(a.archetypes.indices()[0], RngStream::new(99).index(30));
    }

    #[test]
    fn uniform_inclusion_frequencies() {
        // Each index is included with probability 15/1000. With 10^4 trials the
        // per-index standard deviation is ~0.0012, so a 0.004 band is ~3.3
        // sigma: about one of the 1000 indices is expected outside it. Check
        // the band on all but 1% of indices plus a chi-square test of the
        // whole count vector.
        let x = random_data(3, 1000, 1);
        let mut rng = RngStream::new(5);
        let mut counts = vec![0usize; 1000];
        let trials = 10_000;
        for _ in 0..trials {
            for &i in init_uniform(&x, 15, &mut rng).unwrap().archetypes.indices() {
                counts[i] += 1;
            }
        }
        let outside = counts
            .iter()
            .filter(|&&c| (c as f64 / trials as f64 - 0.015).abs() > 0.004)
            .count();
        assert!(outside <= 10, "{outside} indices outside the band");
        let expected = trials as f64 * 0.015;
        let chi2: f64 = counts
            .iter()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum();
        // df = 999; upper 0.001 critical value.
        assert!(chi2 < 1142.85, "chi2 = {chi2}");
    }

    #[test]
    fn furthest_first_on_a_line() {
        let x = line(&[0.0, 1.0, 10.0]);
        assert_eq!(furthest_first_from(&x, 2, 0), vec![0, 2]);
        assert_eq!(furthest_first_from(&x, 3, 0), vec![0, 2, 1]);
    }

    #[test]
    fn furthest_first_k1_is_one_uniform_draw() {
        let x = random_data(6, 40, 3);
        let s = init_furthest_first(&x, 1, &mut RngStream::new(8)).unwrap();
        assert_eq!(s.archetypes.indices(), &[RngStream::new(8).index(40)]);
    }

    #[test]
    fn furthest_sum_three_point_example() {
        let x = line(&[0.0, 1.0, 10.0]);
        assert_eq!(furthest_sum_from(&x, 2, 1), vec![2, 0]);
    }

    #[test]
    fn furthest_sum_identical_points_tie_low() {
        let x = DataMatrix::new(5, 2, vec![1.0; 10]).unwrap();
        // start 3, then lowest unselected indices; replace re-admits 3 but
        // lower free indices win the tie.
        assert_eq!(furthest_sum_from(&x, 3, 3), vec![0, 1, 2]);
    }

    #[test]
    fn furthest_sum_k_equals_n() {
        let x = line(&[0.0, 1.0, 10.0]);
        let mut idx = furthest_sum_from(&x, 3, 1);
        idx.sort_unstable();
        assert_eq!(idx, vec![0, 1, 2]);
    }

    #[test]
    fn aapp_k1_matches_uniform() {
        let x = random_data(7, 25, 3);
        let a = init_aapp(&x, 1, &mut RngStream::new(12)).unwrap();
        let u = init_uniform(&x, 1, &mut RngStream::new(12)).unwrap();
        assert_eq!(a.archetypes, u.archetypes);
        let km = init_kmeanspp(&x, 1, &mut RngStream::new(12)).unwrap();
        assert_eq!(km.archetypes, u.archetypes);
    }

    #[test]
    fn aapp_square_second_pick() {
        // Find seeds whose first pick is corner (0, 0), then tally the
        // second pick. Expected: diagonal 0.5, each neighbour 0.25.
        let x = DataMatrix::from_rows(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]).unwrap();
        let mut counts = [0usize; 4];
        let mut trials = 0;
        let mut seed = 0;
        while trials < 20_000 {
            seed += 1;
            let s = init_aapp(&x, 2, &mut RngStream::new(seed)).unwrap();
            if s.archetypes.indices()[0] != 0 {
                continue;
            }
            counts[s.archetypes.indices()[1]] += 1;
            trials += 1;
        }
        assert_eq!(counts[0], 0);
        let f: Vec<f64> = counts.iter().map(|&c| c as f64 / trials as f64).collect();
        assert!((f[3] - 0.5).abs() < 0.015, "{f:?}");
        assert!((f[1] - 0.25).abs() < 0.015, "{f:?}");
        assert!((f[2] - 0.25).abs() < 0.015, "{f:?}");
    }

    #[test]
    fn aapp_never_picks_interior_point() {
        let x = DataMatrix::from_rows(&[
            [0.0, 0.0],
            [4.0, 0.0],
            [0.0, 4.0],
            [1.0, 1.0],
            [10.0, 10.0],
        ])
        .unwrap();
        let mut rng = RngStream::new(77);
        for _ in 0..10_000 {
            let s = init_aapp(&x, 4, &mut rng).unwrap();
            let idx = s.archetypes.indices();
            let has_triangle = idx[..3].iter().all(|i| [0, 1, 2].contains(i));
            if has_triangle {
                assert_ne!(idx[3], 3, "interior point selected after its triangle");
            }
        }
    }

    #[test]
    fn kmeanspp_line_probabilities() {
        let x = line(&[0.0, 1.0, 3.0]);
        let mut counts = [0usize; 3];
        let mut trials = 0;
        let mut seed = 1000;
        while trials < 20_000 {
            seed += 1;
            let s = init_kmeanspp(&x, 2, &mut RngStream::new(seed)).unwrap();
            if s.archetypes.indices()[0] != 0 {
                continue;
            }
            counts[s.archetypes.indices()[1]] += 1;
            trials += 1;
        }
        let p3 = counts[2] as f64 / trials as f64;
        assert_eq!(counts[0], 0);
        assert!((p3 - 0.9).abs() < 0.01, "{p3}");
    }

    #[test]
    fn kmeanspp_and_aapp_agree_for_single_archetype() {
        // With one archetype the hull is the point, so the second draw
        // consumes the same stream identically.
        let x = random_data(9, 40, 3);
        for seed in 0..50 {
            let a = init_aapp(&x, 2, &mut RngStream::new(seed)).unwrap();
            let b = init_kmeanspp(&x, 2, &mut RngStream::new(seed)).unwrap();
            assert_eq!(a.archetypes.indices(), b.archetypes.indices());
        }
    }

    #[test]
    fn degenerate_data_falls_back_to_uniform() {
        let x = DataMatrix::new(6, 2, vec![0.5; 12]).unwrap();
        let s = init_aapp(&x, 4, &mut RngStream::new(1)).unwrap();
        assert!(s.degenerate);
        let mut idx = s.archetypes.indices().to_vec();
        idx.sort_unstable();
        idx.dedup();
        assert_eq!(idx.len(), 4);
        assert!(init_kmeanspp(&x, 3, &mut RngStream::new(1)).unwrap().degenerate);
        assert!(init_aapp_mc(&x, 3, ChainConfig::Length(5), &mut RngStream::new(1))
            .unwrap()
            .degenerate);
    }

    #[test]
    fn chain_resolution() {
        assert_eq!(ChainConfig::Fraction(0.2).resolve(100), 20);
        assert_eq!(ChainConfig::Fraction(0.01).resolve(50), 2);
        assert_eq!(ChainConfig::Length(7).resolve(3), 7);
        assert!(ChainConfig::Length(1).validate().is_err());
        assert!(ChainConfig::Fraction(0.0).validate().is_err());
        assert!(ChainConfig::Fraction(1.5).validate().is_err());
    }

    #[test]
    fn mc_solve_count() {
        let x = random_data(10, 60, 3);
        let s = init_aapp_mc(&x, 5, ChainConfig::Length(9), &mut RngStream::new(3)).unwrap();
        assert_eq!(s.hull_solves, 4 * 9);
        let s = init_aapp(&x, 5, &mut RngStream::new(3)).unwrap();
        assert_eq!(s.hull_solves, 4 * 60);
    }

    #[test]
    fn mc_equal_distances_is_uniform() {
        // Points on a circle around the single archetype at the origin: all
        // candidates other than the origin are at distance 1.
        let mut rows = vec![[0.0, 0.0]];
        for i in 0..8 {
            let t = i as f64 * std::f64::consts::TAU / 8.0;
            rows.push([t.cos(), t.sin()]);
        }
        let x = DataMatrix::from_rows(&rows).unwrap();
        let problem = SimplexProblem::new(&x.select_rows(&[0]));
        let mut rng = RngStream::new(21);
        let mut counts = [0usize; 9];
        let trials = 45_000;
        for _ in 0..trials {
            counts[mh_chain(&problem, &x, 2, &mut rng).unwrap().0] += 1;
        }
        // The origin is only kept if both states were the origin.
        let p0 = counts[0] as f64 / trials as f64;
        assert!((p0 - 1.0 / 81.0).abs() < 0.003, "{p0}");
        for &c in &counts[1..] {
            let f = c as f64 / trials as f64;
            assert!((f - 10.0 / 81.0).abs() < 0.01, "{f}");
        }
    }

    #[test]
    fn gamma_prime_examples() {
        // Single archetype at origin; all other points at distance 1 -> the
        // ratio is n * 1 / (n - 1).
        let x = line(&[0.0, 1.0, -1.0, 1.0]);
        let z = x.select_rows(&[0]);
        assert!((gamma_prime_fixed(&x, &z).unwrap() - 4.0 / 3.0).abs() < 1e-12);
        // One point at distance 1, the rest at 0 (n = 10).
        let mut pts = vec![0.0; 10];
        pts[9] = 1.0;
        let x = line(&pts);
        assert!((gamma_prime_fixed(&x, &x.select_rows(&[0])).unwrap() - 10.0).abs() < 1e-12);
        assert!(gamma_prime_fixed(&x, &x).is_err());
    }

    #[test]
    fn gamma_prime_constant_is_one() {
        let x = DataMatrix::from_rows(&[[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]]).unwrap();
        let z = DataMatrix::from_rows(&[[0.0, 0.0]]).unwrap();
        assert!((gamma_prime_fixed(&x, &z).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn method_ids_round_trip() {
        for id in [
            "uniform",
            "furthest-first",
            "furthest-sum",
            "aapp",
            "kmeanspp",
            "aapp-mc-0.05",
            "aapp-mc-m50",
        ] {
            assert_eq!(id.parse::<Method>().unwrap().id(), id);
        }
        assert!("aapp-mc".parse::<Method>().is_err());
        assert!("aapp-mc-2".parse::<Method>().is_err());
        assert!("bogus".parse::<Method>().is_err());
    }
}
