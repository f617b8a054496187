use std::io::Write;

use archetypes_core::dataio::{load_csv, preprocess, PreprocessSpec};
use archetypes_core::{dist_to_hull, DataMatrix, Error, RngStream};

fn cross(o: &[f64], a: &[f64], b: &[f64]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Indices of the strict vertices of a planar point set (monotone chain).
fn hull_2d(x: &DataMatrix) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..x.nrows()).collect();
    idx.sort_by(|&a, &b| {
        let (p, q) = (x.row(a), x.row(b));
        p[0].total_cmp(&q[0]).then(p[1].total_cmp(&q[1]))
    });
    let mut hull: Vec<usize> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let order: Vec<usize> = if pass == 0 { idx.clone() } else { idx.iter().rev().cloned().collect() };
        for i in order {
            while hull.len() >= start + 2
                && cross(x.row(hull[hull.len() - 2]), x.row(hull[hull.len() - 1]), x.row(i)) <= 0.0
            {
                hull.pop();
            }
            hull.push(i);
        }
        hull.pop();
    }
    hull.sort_unstable();
    hull
}

/// Points that lie outside the hull of all the other points.
fn extreme_points(x: &DataMatrix) -> Vec<usize> {
    (0..x.nrows())
        .filter(|&i| {
            let others: Vec<usize> = (0..x.nrows()).filter(|&j| j != i).collect();
            dist_to_hull(x.row(i), &x.select_rows(&others)).unwrap() > 1e-9
        })
        .collect()
}

const SPECS: [PreprocessSpec; 4] = [
    PreprocessSpec::None,
    PreprocessSpec::CenterMaxScale,
    PreprocessSpec::CenterSignedMaxScale,
    PreprocessSpec::Standardize,
];

#[test]
fn preprocessing_keeps_planar_hull_vertices() {
    for seed in 0..10 {
        let mut rng = RngStream::new(seed);
        let v = (0..80).flat_map(|_| [5.0 + 3.0 * rng.normal(), -2.0 + 0.5 * rng.normal()]).collect();
        let x = DataMatrix::new(80, 2, v).unwrap();
        let reference = hull_2d(&x);
        assert!(reference.len() >= 3);
        for spec in SPECS {
            let y = preprocess(&x, spec).unwrap();
            assert_eq!(hull_2d(&y), reference, "{spec:?}, seed {seed}");
        }
    }
}

#[test]
fn preprocessing_keeps_extreme_points_in_3d() {
    let mut rng = RngStream::new(42);
    let v = (0..40 * 3).map(|_| 10.0 * rng.uniform() - 1.0).collect();
    let x = DataMatrix::new(40, 3, v).unwrap();
    let reference = extreme_points(&x);
    for spec in SPECS {
        assert_eq!(extreme_points(&preprocess(&x, spec).unwrap()), reference, "{spec:?}");
    }
}

#[test]
fn csv_round_trip_with_header_and_delimiter() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "a;b;c").unwrap();
    writeln!(f, "1;2;3").unwrap();
    writeln!(f, " 4 ; 5.5 ;-6e-1").unwrap();
    let x = load_csv(f.path(), b';', true).unwrap();
    assert_eq!((x.nrows(), x.ncols()), (2, 3));
    assert_eq!(x.row(1), &[4.0, 5.5, -0.6]);
}

#[test]
fn csv_errors_are_located() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "1,2").unwrap();
    writeln!(f, "3,abc").unwrap();
    match load_csv(f.path(), b',', false) {
        Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 2)),
        other => panic!("unexpected {other:?}"),
    }
    let mut g = tempfile::NamedTempFile::new().unwrap();
    writeln!(g, "1,2").unwrap();
    writeln!(g, "3").unwrap();
    assert!(load_csv(g.path(), b',', false).is_err());
    let empty = tempfile::NamedTempFile::new().unwrap();
    assert!(matches!(load_csv(empty.path(), b',', false), Err(Error::EmptyInput(_))));
}
