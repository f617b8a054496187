//! Fixtures shared by the benchmarks in `benches/`.

use archetypes_core::dataio::{gen_synthetic, preprocess, PreprocessSpec, Shape};
use archetypes_core::{DataMatrix, RngStream};

/// Centered, max-scaled polygon data.
pub fn polygon(n: usize, d: usize, seed: u64) -> DataMatrix {
    let raw = gen_synthetic(Shape::PolygonHull, n, d, &mut RngStream::new(seed)).expect("valid sizes");
    preprocess(&raw, PreprocessSpec::CenterMaxScale).expect("non-constant data")
}

/// First `k` rows as a starting archetype set.
pub fn leading_rows(data: &DataMatrix, k: usize) -> DataMatrix {
    data.select_rows(&(0..k).collect::<Vec<_>>())
}
