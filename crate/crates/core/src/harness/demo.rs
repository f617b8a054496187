use std::io::Write;

use crate::aa::{mse, update_a};
use crate::dataio::{gen_synthetic, Shape};
use crate::error::Result;
use crate::init::Method;
use crate::matrix::DataMatrix;
use crate::RngStream;

/// One selection step of a seeding walkthrough.
#[derive(Debug, Clone, PartialEq)]
pub struct DemoStep {
    pub method: String,
    pub step: usize,
    pub index: usize,
    pub point: Vec<f64>,
    /// Objective of the first `step` archetypes.
    pub mse: f64,
}

/// Seed `k` archetypes on a synthetic 2-D set with each method and report
/// the MSE after every selection step.
pub fn demo(
    shape: Shape,
    n: usize,
    k: usize,
    methods: &[Method],
    seed: u64,
) -> Result<(DataMatrix, Vec<DemoStep>)> {
    let data = gen_synthetic(shape, n, 2, &mut RngStream::new(seed))?;
    let mut steps = Vec::new();
    for method in methods {
        let mut rng = RngStream::new(seed);
        let seeding = method.seed(&data, k, &mut rng)?;
        let indices = seeding.archetypes.indices();
        for step in 1..=indices.len() {
            let z = data.select_rows(&indices[..step]);
            let a = update_a(&data, &z)?;
            let i = indices[step - 1];
            steps.push(DemoStep {
                method: method.id(),
                step,
                index: i,
                point: data.row(i).to_vec(),
                mse: mse(&data, &a, &z)?,
            });
        }
    }
    Ok((data, steps))
}

pub fn write_demo<W: Write>(out: &mut W, steps: &[DemoStep]) -> std::io::Result<()> {
    writeln!(out, "method,step,index,x,y,mse")?;
    for s in steps {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            s.method, s.step, s.index, s.point[0], s.point[1], s.mse
        )?;
    }
    Ok(())
}
