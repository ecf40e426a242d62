//! Reference values computed independently of the library: a plain power
//! iteration, the characteristic polynomial, and hand-solved fixed points.

#![allow(clippy::excessive_precision)]

use voxpop_core::corpus::{Corpus, Document};
use voxpop_core::querylog::CooccurrenceMatrix;
use voxpop_core::ranking::{static_rank, StaticRankConfig};
use voxpop_core::spectral::{diagonalize, eigenqueries, reconstruct, DEFAULT_MIN_COEFF};

const KEYWORDS: [&str; 3] = ["mp3", "download", "free"];
const OMEGA: [[f64; 3]; 3] = [[37.2, 8.8, 2.7], [8.8, 19.2, 3.6], [2.7, 3.6, 13.4]];

// 50-digit reference, leading eigenpair of OMEGA
const LAMBDA_1: f64 = 41.324645840235027861;
const V_1: [f64; 3] = [0.91241032283951125212, 0.38534599769487543239, 0.13789802332317860133];
const LAMBDA_REST: [f64; 2] = [16.908889250145625362, 11.566464909619349264];

fn omega() -> CooccurrenceMatrix {
    CooccurrenceMatrix::from_rows(
        KEYWORDS.iter().map(|s| s.to_string()).collect(),
        OMEGA.iter().map(|r| r.to_vec()).collect(),
    )
    .unwrap()
}

fn mat_vec(v: &[f64; 3]) -> [f64; 3] {
    let mut out = [0.0; 3];
    for i in 0..3 {
        out[i] = (0..3).map(|j| OMEGA[i][j] * v[j]).sum();
    }
    out
}

fn power_iteration() -> (f64, [f64; 3], f64) {
    let mut v = [1.0, 1.0, 1.0];
    let mut lambda = 0.0;
    for _ in 0..10_000 {
        let w = mat_vec(&v);
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        v = w.map(|x| x / norm);
        let av = mat_vec(&v);
        lambda = (0..3).map(|i| v[i] * av[i]).sum();
        let residual = (0..3).map(|i| (av[i] - lambda * v[i]).abs()).fold(0.0, f64::max);
        if residual < 1e-12 {
            return (lambda, v, residual);
        }
    }
    let av = mat_vec(&v);
    (lambda, v, (0..3).map(|i| (av[i] - lambda * v[i]).abs()).fold(0.0, f64::max))
}

/// Roots of det(λI − A) by bisection on the cubic.
fn characteristic_roots() -> Vec<f64> {
    let a = OMEGA;
    let c2 = -(a[0][0] + a[1][1] + a[2][2]);
    let c1 = a[0][0] * a[1][1] + a[0][0] * a[2][2] + a[1][1] * a[2][2]
        - a[0][1] * a[1][0]
        - a[0][2] * a[2][0]
        - a[1][2] * a[2][1];
    let c0 = -(a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]));
    let p = |x: f64| ((x + c2) * x + c1) * x + c0;
    let mut roots = Vec::new();
    let steps = 6000;
    let (lo, hi) = (0.0, 60.0);
    for k in 0..steps {
        let mut a = lo + (hi - lo) * k as f64 / steps as f64;
        let mut b = lo + (hi - lo) * (k + 1) as f64 / steps as f64;
        if p(a) * p(b) > 0.0 {
            continue;
        }
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if p(a) * p(m) <= 0.0 {
                b = m;
            } else {
                a = m;
            }
        }
        roots.push(0.5 * (a + b));
    }
    roots.sort_by(|x, y| y.total_cmp(x));
    roots
}

#[test]
fn power_iteration_agrees_with_reference() {
    let (lambda, v, residual) = power_iteration();
    assert!(residual < 1e-10);
    assert!((lambda - LAMBDA_1).abs() < 1e-10);
    for i in 0..3 {
        assert!((v[i] - V_1[i]).abs() < 1e-10);
    }
}

#[test]
fn characteristic_polynomial_agrees_with_reference() {
    let roots = characteristic_roots();
    assert_eq!(roots.len(), 3);
    assert!((roots[0] - LAMBDA_1).abs() < 1e-9);
    assert!((roots[1] - LAMBDA_REST[0]).abs() < 1e-9);
    assert!((roots[2] - LAMBDA_REST[1]).abs() < 1e-9);
}

#[test]
fn leading_eigenpair_of_reduced_matrix() {
    let basis = diagonalize(&omega()).unwrap();
    let (lambda, v, _) = power_iteration();
    assert!((basis.eigenvalues()[0] - lambda).abs() < 1e-8);
    for (got, want) in basis.eigenvectors()[0].iter().zip(v) {
        assert!((got - want).abs() < 1e-6);
    }
    assert!((basis.eigenvalues()[1] - LAMBDA_REST[0]).abs() < 1e-8);
    assert!((basis.eigenvalues()[2] - LAMBDA_REST[1]).abs() < 1e-8);
}

#[test]
fn leading_eigenquery_is_mp3_download_free() {
    let basis = diagonalize(&omega()).unwrap();
    let eqs = eigenqueries(&basis, 1, DEFAULT_MIN_COEFF);
    let terms = &eqs[0].terms;
    assert_eq!(terms[0], ("mp3".to_string(), 1.0));
    assert_eq!(terms[1].0, "download");
    assert_eq!(terms[2].0, "free");
    assert!((terms[1].1 - 0.42233848965632100568).abs() < 1e-9);
    assert!((terms[2].1 - 0.15113597454051845996).abs() < 1e-9);
    let total = LAMBDA_1 + LAMBDA_REST[0] + LAMBDA_REST[1];
    assert!((eqs[0].importance - LAMBDA_1 / total).abs() < 1e-12);
}

#[test]
fn reduced_matrix_reconstructs() {
    let basis = diagonalize(&omega()).unwrap();
    let back = reconstruct(&basis);
    for i in 0..3 {
        for j in 0..3 {
            assert!((back[i * 3 + j] - OMEGA[i][j]).abs() < 1e-8);
        }
    }
}

fn graph(edges: &[(&str, &str)], nodes: &[&str]) -> Corpus {
    let docs = nodes.iter().map(|n| {
        edges
            .iter()
            .filter(|(s, _)| s == n)
            .fold(Document::new(format!("http://{n}/"), *n), |d, (_, t)| d.with_outlink(*t))
    });
    Corpus::from_documents(docs).unwrap().0
}

#[test]
fn cycles_converge_to_all_ones() {
    let two = graph(&[("a", "b"), ("b", "a")], &["a", "b"]);
    let three = graph(&[("a", "b"), ("b", "c"), ("c", "a")], &["a", "b", "c"]);
    for c in [two, three] {
        let r = static_rank(&c, &StaticRankConfig::default()).unwrap();
        for (_, v) in r.iter() {
            assert!((v - 1.0).abs() < 1e-9);
        }
    }
}

#[test]
fn hub_and_spoke_fixed_point() {
    let c = graph(
        &[("h", "x"), ("h", "y"), ("h", "z"), ("x", "h"), ("y", "h"), ("z", "h")],
        &["h", "x", "y", "z"],
    );
    let r = static_rank(&c, &StaticRankConfig::default()).unwrap();
    assert!((r.get("h").unwrap() - 1.918918918918918919).abs() < 1e-9);
    for leaf in ["x", "y", "z"] {
        assert!((r.get(leaf).unwrap() - 0.693693693693693694).abs() < 1e-9);
    }
}
