//! One-sided (Hestenes) Jacobi singular value decomposition.
//!
//! Works for any shape: the columns of `A` are rotated pairwise until mutually
//! orthogonal, and the accumulated rotations form the right singular vectors.
//! Accuracy is relative to each singular value, which is what the nullspace and
//! conditioning queries need.

use num_complex::Complex64;

use super::{vdot, ComplexMatrix, ComplexVector};

const MAX_SWEEPS: usize = 80;

/// Thin SVD, `A·vᵢ = σᵢ·uᵢ`, sorted by descending singular value.
#[derive(Debug, Clone)]
pub struct Svd {
    pub singular_values: Vec<f64>,
    /// Right singular vectors, one per column of `A`.
    pub right: Vec<ComplexVector>,
    /// Left singular vectors; zero vectors where `σ = 0`.
    pub left: Vec<ComplexVector>,
}

pub fn svd(a: &ComplexMatrix) -> Svd {
    let (m, n) = (a.rows(), a.cols());
    let mut u: Vec<ComplexVector> = (0..n).map(|j| a.column(j)).collect();
    let mut v: Vec<ComplexVector> = (0..n)
        .map(|j| {
            let mut e = vec![Complex64::new(0.0, 0.0); n];
            e[j] = Complex64::new(1.0, 0.0);
            e
        })
        .collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n {
            for j in i + 1..n {
                let alpha = vdot(&u[i], &u[i]).re;
                let beta = vdot(&u[j], &u[j]).re;
                let gamma = vdot(&u[i], &u[j]);
                let g = gamma.norm();
                if g == 0.0 || g <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut u, i, j, c, s, phase, m);
                rotate(&mut v, i, j, c, s, phase, n);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<(f64, usize)> = u
        .iter()
        .enumerate()
        .map(|(j, col)| (vdot(col, col).re.sqrt(), j))
        .collect();
    order.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.cmp(&y.1)));

    let mut singular_values = Vec::with_capacity(n);
    let mut right = Vec::with_capacity(n);
    let mut left = Vec::with_capacity(n);
    for (sigma, j) in order {
        singular_values.push(sigma);
        right.push(v[j].clone());
        left.push(if sigma > 0.0 {
            u[j].iter().map(|z| z / sigma).collect()
        } else {
            vec![Complex64::new(0.0, 0.0); m]
        });
    }
    Svd {
        singular_values,
        right,
        left,
    }
}

fn rotate(cols: &mut [ComplexVector], i: usize, j: usize, c: f64, s: f64, phase: Complex64, len: usize) {
    let back = phase.conj();
    for k in 0..len {
        let a = cols[i][k];
        let b = cols[j][k] * back;
        cols[i][k] = a * c - b * s;
        cols[j][k] = a * s + b * c;
    }
}

impl Svd {
    pub fn smallest(&self) -> f64 {
        self.singular_values.last().copied().unwrap_or(0.0)
    }

    pub fn largest(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }
}

/// Singular values only, descending.
pub fn singular_values(a: &ComplexMatrix) -> Vec<f64> {
    svd(a).singular_values
}

/// Orthonormal basis of `{x : ‖a·x‖ ≤ tol·‖a‖}` (max-row-sum norm).
///
/// A zero matrix returns the full standard basis; an injective one returns an
/// empty list.
pub fn nullspace(a: &ComplexMatrix, tol: f64) -> Vec<ComplexVector> {
    let scale = a.norm();
    let n = a.cols();
    if scale == 0.0 {
        return (0..n)
            .map(|j| {
                let mut e = vec![Complex64::new(0.0, 0.0); n];
                e[j] = Complex64::new(1.0, 0.0);
                e
            })
            .collect();
    }
    let decomposition = svd(a);
    // Columns beyond the row count have σ = 0 implicitly; one-sided Jacobi
    // already drives them to zero.
    decomposition
        .singular_values
        .iter()
        .zip(decomposition.right)
        .filter(|(&sigma, _)| sigma <= tol * scale)
        .map(|(_, v)| v)
        .collect()
}
