//! Eigenvalues of small dense complex matrices.
//!
//! Values come from Householder reduction to Hessenberg form followed by a
//! single-shift complex QR iteration with Wilkinson shifts. Vectors are not
//! back-substituted from the Schur form: each cluster of (nearly) equal
//! eigenvalues is replaced by its mean and the eigenvectors are read off the
//! SVD nullspace of `A − λ̄I`. That keeps exactly degenerate pairs, which are
//! the norm for the spinor operators here, orthonormal and well conditioned.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::svd::svd;
use super::{ComplexMatrix, ComplexVector, KernelError};

pub const MAX_EIGEN_DIMENSION: usize = 8;
/// Eigenvalues closer than this (relative to `‖A‖`) are grouped.
pub const DEGENERACY_TOL: f64 = 1e-8;
const DEFECTIVE_SPLIT: f64 = 1e-6;
const DEFECTIVE_SINGULARITY: f64 = 1e-12;
const ITERATIONS_PER_VALUE: usize = 60;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenPair {
    pub value: Complex64,
    /// Unit Euclidean norm.
    pub vector: ComplexVector,
}

/// Complete eigenpair list, repeated according to algebraic multiplicity.
///
/// For a defective cluster (fewer independent eigenvectors than its
/// multiplicity, e.g. a nilpotent matrix) the available eigenvectors are
/// repeated to fill the multiplicity.
pub fn eigen(a: &ComplexMatrix) -> Result<Vec<EigenPair>, KernelError> {
    let values = eigenvalues(a)?;
    let scale = a.norm().max(f64::MIN_POSITIVE);
    let n = a.rows();

    let mut pairs = Vec::with_capacity(n);
    for cluster in merge_defective(a, cluster_values(&values, DEGENERACY_TOL * scale), scale) {
        let mean = cluster.iter().sum::<Complex64>() / cluster.len() as f64;
        let shifted = a - &ComplexMatrix::identity(n).scale(mean);
        let decomposition = svd(&shifted);
        let cut = 1e-9 * scale;
        let mut vectors: Vec<ComplexVector> = decomposition
            .singular_values
            .iter()
            .zip(&decomposition.right)
            .rev()
            .take(cluster.len())
            .filter(|(&sigma, _)| sigma <= cut)
            .map(|(_, v)| v.clone())
            .collect();
        if vectors.is_empty() {
            vectors.push(decomposition.right[n - 1].clone());
        }
        for k in 0..cluster.len() {
            pairs.push(EigenPair {
                value: mean,
                vector: vectors[k % vectors.len()].clone(),
            });
        }
    }
    Ok(pairs)
}

/// Eigenvalues only (no grouping), in deflation order.
pub fn eigenvalues(a: &ComplexMatrix) -> Result<Vec<Complex64>, KernelError> {
    if !a.is_square() {
        return Err(KernelError::DimensionMismatch {
            op: "eigen",
            left: (a.rows(), a.cols()),
            right: (a.rows(), a.cols()),
        });
    }
    let n = a.rows();
    if n > MAX_EIGEN_DIMENSION {
        return Err(KernelError::TooLarge {
            dimension: n,
            limit: MAX_EIGEN_DIMENSION,
        });
    }
    let mut h = hessenberg(a);
    let mut values = vec![Complex64::new(0.0, 0.0); n];
    let mut hi = n;
    let mut iterations = 0usize;
    let mut since_deflation = 0usize;
    let budget = ITERATIONS_PER_VALUE * n;

    while hi > 0 {
        if hi == 1 {
            values[0] = h[0][0];
            break;
        }
        // find the start of the unreduced trailing block
        let mut lo = hi - 1;
        while lo > 0 {
            let sub = h[lo][lo - 1].norm();
            let diag = h[lo][lo].norm() + h[lo - 1][lo - 1].norm();
            if sub <= f64::EPSILON * diag.max(f64::MIN_POSITIVE) || sub < 1e-300 {
                h[lo][lo - 1] = Complex64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == hi - 1 {
            values[hi - 1] = h[hi - 1][hi - 1];
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        iterations += 1;
        since_deflation += 1;
        if iterations > budget {
            return Err(KernelError::NoConvergence { iterations });
        }
        let shift = if since_deflation % 11 == 10 {
            // exceptional shift to break cycles
            h[hi - 1][hi - 1] + Complex64::new(0.75 * h[hi - 1][hi - 2].norm(), 0.0)
        } else {
            wilkinson_shift(&h, hi)
        };
        qr_step(&mut h, lo, hi, shift);
    }
    Ok(values)
}

fn hessenberg(a: &ComplexMatrix) -> Vec<Vec<Complex64>> {
    let n = a.rows();
    let mut h: Vec<Vec<Complex64>> = (0..n).map(|i| a.row(i).to_vec()).collect();
    for k in 0..n.saturating_sub(2) {
        let x: Vec<Complex64> = (k + 1..n).map(|i| h[i][k]).collect();
        let alpha = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if alpha == 0.0 {
            continue;
        }
        let phase = if x[0].norm() > 0.0 {
            x[0] / x[0].norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let mut v = x.clone();
        v[0] += phase * alpha;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        // H ← (I − 2vv†/v†v) H (I − 2vv†/v†v)
        for j in 0..n {
            let dot: Complex64 = (0..v.len()).map(|i| v[i].conj() * h[k + 1 + i][j]).sum();
            let f = dot * (2.0 / vnorm2);
            for i in 0..v.len() {
                h[k + 1 + i][j] -= v[i] * f;
            }
        }
        for row in h.iter_mut() {
            let dot: Complex64 = (0..v.len()).map(|i| row[k + 1 + i] * v[i]).sum();
            let f = dot * (2.0 / vnorm2);
            for i in 0..v.len() {
                row[k + 1 + i] -= f * v[i].conj();
            }
        }
        for row in h.iter_mut().skip(k + 2) {
            row[k] = Complex64::new(0.0, 0.0);
        }
    }
    h
}

fn wilkinson_shift(h: &[Vec<Complex64>], hi: usize) -> Complex64 {
    let a = h[hi - 2][hi - 2];
    let b = h[hi - 2][hi - 1];
    let c = h[hi - 1][hi - 2];
    let d = h[hi - 1][hi - 1];
    let tr = a + d;
    let det = a * d - b * c;
    let disc = (tr * tr * 0.25 - det).sqrt();
    let l1 = tr * 0.5 + disc;
    let l2 = tr * 0.5 - disc;
    if (l1 - d).norm() < (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// One shifted QR sweep on the active block `lo..hi` using Givens rotations.
fn qr_step(h: &mut [Vec<Complex64>], lo: usize, hi: usize, shift: Complex64) {
    let n = h.len();
    for i in lo..hi {
        h[i][i] -= shift;
    }
    let mut rotations = Vec::with_capacity(hi - lo);
    for k in lo..hi - 1 {
        let x = h[k][k];
        let y = h[k + 1][k];
        let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
        let (c, s) = if r == 0.0 {
            (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
        } else {
            (x / r, y / r)
        };
        // G = [[c̄, s̄], [−s, c]] applied to rows k, k+1
        for j in k..n {
            let a = h[k][j];
            let b = h[k + 1][j];
            h[k][j] = c.conj() * a + s.conj() * b;
            h[k + 1][j] = -s * a + c * b;
        }
        rotations.push((k, c, s));
    }
    for (k, c, s) in rotations {
        // right-multiply by G† on columns k, k+1
        for row in h.iter_mut().take((k + 2).min(hi)) {
            let a = row[k];
            let b = row[k + 1];
            row[k] = a * c + b * s;
            row[k + 1] = -a * s.conj() + b * c.conj();
        }
        // rows above lo also carry these columns
        for row in h.iter_mut().take(lo) {
            let a = row[k];
            let b = row[k + 1];
            row[k] = a * c + b * s;
            row[k + 1] = -a * s.conj() + b * c.conj();
        }
    }
    for i in lo..hi {
        h[i][i] += shift;
    }
}

/// Joins nearby clusters whose common mean is itself an accurate eigenvalue.
///
/// A perturbed Jordan block of size k splits by roughly `ε^(1/k)`, far above
/// the degeneracy tolerance, yet `A − λ̄I` at the split's mean is singular to
/// working precision. Genuinely distinct eigenvalues fail that test.
fn merge_defective(a: &ComplexMatrix, mut clusters: Vec<Vec<Complex64>>, scale: f64) -> Vec<Vec<Complex64>> {
    let n = a.rows();
    let mean = |c: &[Complex64]| c.iter().sum::<Complex64>() / c.len() as f64;
    loop {
        let mut merged = false;
        'search: for i in 0..clusters.len() {
            for j in i + 1..clusters.len() {
                if (mean(&clusters[i]) - mean(&clusters[j])).norm() > DEFECTIVE_SPLIT * scale {
                    continue;
                }
                let joined: Vec<Complex64> = clusters[i].iter().chain(&clusters[j]).copied().collect();
                let shifted = a - &ComplexMatrix::identity(n).scale(mean(&joined));
                if svd(&shifted).smallest() <= DEFECTIVE_SINGULARITY * scale {
                    clusters[i] = joined;
                    clusters.remove(j);
                    merged = true;
                    break 'search;
                }
            }
        }
        if !merged {
            return clusters;
        }
    }
}

fn cluster_values(values: &[Complex64], tol: f64) -> Vec<Vec<Complex64>> {
    let mut clusters: Vec<Vec<Complex64>> = Vec::new();
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    for v in sorted {
        match clusters
            .iter_mut()
            .find(|c| c.iter().any(|&w| (w - v).norm() <= tol))
        {
            Some(c) => c.push(v),
            None => clusters.push(vec![v]),
        }
    }
    clusters
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residual(a: &ComplexMatrix, p: &EigenPair) -> f64 {
        let av = a.mul_vec(&p.vector).unwrap();
        av.iter()
            .zip(&p.vector)
            .map(|(x, y)| (x - p.value * y).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    #[test]
    fn diagonal_spectrum() {
        let a = ComplexMatrix::from_real_rows(&[
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 2.0, 0.0, 0.0],
            [0.0, 0.0, 3.0, 0.0],
            [0.0, 0.0, 0.0, 4.0],
        ]);
        let mut vals: Vec<f64> = eigen(&a).unwrap().iter().map(|p| p.value.re).collect();
        vals.sort_by(f64::total_cmp);
        for (v, expect) in vals.iter().zip([1.0, 2.0, 3.0, 4.0]) {
            assert!((v - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn non_normal_complex_matrix() {
        let i = Complex64::new(0.0, 1.0);
        let one = Complex64::new(1.0, 0.0);
        let z = Complex64::new(0.0, 0.0);
        let a = ComplexMatrix::from_rows(&[
            [one, i * 2.0, z, one * 0.5],
            [z, -one, one, z],
            [i, z, one * 3.0, -i],
            [one, one, z, i],
        ]);
        let pairs = eigen(&a).unwrap();
        assert_eq!(pairs.len(), 4);
        let sum: Complex64 = pairs.iter().map(|p| p.value).sum();
        assert!((sum - a.trace()).norm() < 1e-12);
        for p in &pairs {
            assert!(residual(&a, p) <= 1e-10 * a.norm());
        }
    }

    #[test]
    fn rotation_has_complex_pair() {
        let a = ComplexMatrix::from_real_rows(&[[0.0, -1.0], [1.0, 0.0]]);
        let mut vals: Vec<Complex64> = eigenvalues(&a).unwrap();
        vals.sort_by(|x, y| x.im.total_cmp(&y.im));
        assert!((vals[0] - Complex64::new(0.0, -1.0)).norm() < 1e-14);
        assert!((vals[1] - Complex64::new(0.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn rejects_large_and_rectangular() {
        assert!(matches!(
            eigen(&ComplexMatrix::identity(9)),
            Err(KernelError::TooLarge { .. })
        ));
        assert!(eigen(&ComplexMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn jordan_block_is_defective() {
        let a = ComplexMatrix::from_real_rows(&[[0.0, 1.0], [0.0, 0.0]]);
        let pairs = eigen(&a).unwrap();
        assert_eq!(pairs.len(), 2);
        for p in &pairs {
            assert!(p.value.norm() < 1e-7);
            assert!(residual(&a, p) < 1e-7);
        }
    }
}
