//! Eigendecomposition of the co-occurrence matrix and eigenquery extraction.
//!
//! The matrix is symmetric, so an orthogonal eigenbasis exists and the
//! inverse of the eigenvector matrix is its transpose. We use the cyclic
//! Jacobi method: a sequence of plane rotations, each annihilating one
//! off-diagonal entry, whose product accumulates into the eigenvectors.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::querylog::CooccurrenceMatrix;

/// Largest tolerated |a[i][j] - a[j][i]|.
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;
/// Keyword weights below this fraction of the leading weight are dropped.
pub const DEFAULT_MIN_COEFF: f64 = 0.05;

const MAX_SWEEPS: usize = 100;
// Stop once the off-diagonal Frobenius norm is this small relative to the matrix norm.
const OFF_DIAGONAL_STOP: f64 = 1e-14;
// Relative gap under which two eigenvalues are treated as equal for ordering.
const TIE_TOLERANCE: f64 = 1e-12;
// Coefficients at or below this magnitude count as zero when breaking ties.
const ZERO_COEFF: f64 = 1e-12;

/// Eigenvalues (descending) and the matching orthonormal eigenvectors (rows of K).
#[derive(Debug, Clone, PartialEq)]
pub struct EigenBasis {
    vocab: Vec<String>,
    eigenvalues: Vec<f64>,
    eigenvectors: Vec<Vec<f64>>,
}

impl EigenBasis {
    /// Assembles a basis from parts, checking shape, ordering and orthonormality (1e-10).
    pub fn from_parts(
        vocab: Vec<String>,
        eigenvalues: Vec<f64>,
        eigenvectors: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let n = vocab.len();
        if eigenvalues.len() != n || eigenvectors.len() != n || eigenvectors.iter().any(|v| v.len() != n) {
            return Err(Error::Shape("basis needs one eigenpair per keyword".into()));
        }
        let scale = eigenvalues.iter().fold(0.0f64, |m, l| m.max(l.abs()));
        if eigenvalues.windows(2).any(|w| w[1] - w[0] > TIE_TOLERANCE * scale) {
            return Err(Error::invalid("eigenvalues", "must be sorted in descending order"));
        }
        for i in 0..n {
            for j in i..n {
                let expected = if i == j { 1.0 } else { 0.0 };
                if (dot(&eigenvectors[i], &eigenvectors[j]) - expected).abs() > 1e-10 {
                    return Err(Error::invalid("eigenvectors", "must be orthonormal"));
                }
            }
        }
        Ok(EigenBasis {
            vocab,
            eigenvalues,
            eigenvectors,
        })
    }

    pub fn vocab(&self) -> &[String] {
        &self.vocab
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &[Vec<f64>] {
        &self.eigenvectors
    }

    pub fn dim(&self) -> usize {
        self.vocab.len()
    }

    /// λ̂ for every eigenvalue: max(λ, 0) normalized by the sum of the positive part.
    pub fn importances(&self) -> Vec<f64> {
        let positive: f64 = self.eigenvalues.iter().map(|l| l.max(0.0)).sum();
        self.eigenvalues
            .iter()
            .map(|l| if positive > 0.0 { l.max(0.0) / positive } else { 0.0 })
            .collect()
    }
}

/// Keyword blend with positive weights, leading weight 1.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenQuery {
    /// Zero-based position of the source eigenvector in the basis.
    pub rank: usize,
    pub eigenvalue: f64,
    /// Trace-normalized eigenvalue in [0, 1].
    pub importance: f64,
    /// (keyword, coefficient) by descending coefficient.
    pub terms: Vec<(String, f64)>,
}

impl EigenQuery {
    pub fn keywords(&self) -> impl Iterator<Item = &str> {
        self.terms.iter().map(|(k, _)| k.as_str())
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Checks a row-major n×n matrix for finiteness and symmetry.
pub fn validate_symmetric(n: usize, a: &[f64]) -> Result<()> {
    if a.len() != n * n {
        return Err(Error::Shape(alloc::format!("expected {} entries, got {}", n * n, a.len())));
    }
    for i in 0..n {
        for j in 0..n {
            if !a[i * n + j].is_finite() {
                return Err(Error::NonFinite { row: i, col: j });
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let diff = (a[i * n + j] - a[j * n + i]).abs();
            if diff > SYMMETRY_TOLERANCE {
                return Err(Error::NotSymmetric { row: i, col: j, diff });
            }
        }
    }
    Ok(())
}

/// Cyclic Jacobi eigensolver for a symmetric row-major n×n matrix.
///
/// Returns the (unsorted) eigenvalues and the eigenvectors as columns of a
/// row-major matrix.
pub fn jacobi_eigen(n: usize, input: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    validate_symmetric(n, input)?;
    let mut a = input.to_vec();
    // symmetrize below the validation tolerance so rotations see one value per pair
    for i in 0..n {
        for j in i + 1..n {
            let m = 0.5 * (a[i * n + j] + a[j * n + i]);
            a[i * n + j] = m;
            a[j * n + i] = m;
        }
    }
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }

    let norm = libm::sqrt(a.iter().map(|x| x * x).sum::<f64>());
    let off_norm = |a: &[f64]| {
        let mut s = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                s += 2.0 * a[i * n + j] * a[i * n + j];
            }
        }
        libm::sqrt(s)
    };
    if norm == 0.0 {
        return Ok((vec![0.0; n], v));
    }

    let mut sweeps = 0;
    while off_norm(&a) > OFF_DIAGONAL_STOP * norm {
        if sweeps == MAX_SWEEPS {
            return Err(Error::EigenNoConvergence {
                sweeps,
                off_norm: off_norm(&a),
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    let t = 1.0 / (theta.abs() + libm::sqrt(theta * theta + 1.0));
                    if theta < 0.0 {
                        -t
                    } else {
                        t
                    }
                };
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k * n + p], a[k * n + q]);
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p * n + k], a[q * n + k]);
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for k in 0..n {
                    let (vkp, vkq) = (v[k * n + p], v[k * n + q]);
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    Ok(((0..n).map(|i| a[i * n + i]).collect(), v))
}

/// Flips `v` so its largest-magnitude coordinate (first on ties) is positive.
fn normalize_sign(v: &mut [f64]) {
    let mut lead = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[lead].abs() {
            lead = i;
        }
    }
    if v[lead] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// Full eigendecomposition of Ω, eigenvalues in descending order.
///
/// Equal eigenvalues (within a relative 1e-12) are ordered by the keyword
/// of their first nonzero coefficient.
pub fn diagonalize(omega: &CooccurrenceMatrix) -> Result<EigenBasis> {
    let n = omega.dim();
    let (values, vectors) = jacobi_eigen(n, omega.as_slice())?;

    let mut pairs: Vec<(f64, Vec<f64>)> = (0..n)
        .map(|j| {
            let mut col: Vec<f64> = (0..n).map(|i| vectors[i * n + j]).collect();
            normalize_sign(&mut col);
            (values[j], col)
        })
        .collect();
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));

    let scale = values.iter().fold(0.0f64, |m, l| m.max(l.abs())).max(f64::MIN_POSITIVE);
    let vocab = omega.vocab();
    let tie_key = |v: &[f64]| {
        v.iter()
            .position(|x| x.abs() > ZERO_COEFF)
            .map(|i| vocab[i].as_str())
    };
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && pairs[end - 1].0 - pairs[end].0 <= TIE_TOLERANCE * scale {
            end += 1;
        }
        pairs[start..end].sort_by(|a, b| match tie_key(&a.1).cmp(&tie_key(&b.1)) {
            Ordering::Equal => b.0.total_cmp(&a.0),
            o => o,
        });
        start = end;
    }

    let (eigenvalues, eigenvectors) = pairs.into_iter().unzip();
    Ok(EigenBasis {
        vocab: vocab.to_vec(),
        eigenvalues,
        eigenvectors,
    })
}

/// K Ω^diag Kᵀ as a row-major V×V matrix, i.e. Σ λ e eᵀ.
pub fn reconstruct(basis: &EigenBasis) -> Vec<f64> {
    let n = basis.dim();
    let mut out = vec![0.0; n * n];
    for (lambda, e) in basis.eigenvalues.iter().zip(&basis.eigenvectors) {
        for i in 0..n {
            let li = lambda * e[i];
            for j in 0..n {
                out[i * n + j] += li * e[j];
            }
        }
    }
    out
}

/// Positive-weighted keyword blends from the `top_m` leading eigenvectors.
///
/// Each eigenvector is flipped so its largest-magnitude coefficient is
/// positive; non-positive coefficients and those under `min_coeff` times the
/// leader are dropped, and the rest rescaled so the leader is 1.
/// Eigenvectors with a non-positive eigenvalue are skipped.
pub fn eigenqueries(basis: &EigenBasis, top_m: usize, min_coeff: f64) -> Vec<EigenQuery> {
    let importances = basis.importances();
    let mut out = Vec::new();
    for (rank, (lambda, v)) in basis
        .eigenvalues
        .iter()
        .zip(&basis.eigenvectors)
        .enumerate()
        .take(top_m)
    {
        if *lambda <= 0.0 {
            continue;
        }
        let mut coeffs = v.clone();
        normalize_sign(&mut coeffs);
        let leader = coeffs.iter().fold(0.0f64, |m, c| m.max(*c));
        if leader <= 0.0 {
            continue;
        }
        let mut terms: Vec<(String, f64)> = coeffs
            .iter()
            .zip(&basis.vocab)
            .filter(|(c, _)| **c > 0.0 && **c >= min_coeff * leader)
            .map(|(c, k)| (k.clone(), c / leader))
            .collect();
        terms.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        out.push(EigenQuery {
            rank,
            eigenvalue: *lambda,
            importance: importances[rank],
            terms,
        });
    }
    out
}
