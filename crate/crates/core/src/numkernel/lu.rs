use num_complex::Complex64;

use super::{ComplexMatrix, ComplexVector, KernelError};

/// Systems whose ∞-norm condition estimate exceeds this are reported singular.
pub const MAX_CONDITION: f64 = 1e12;

/// LU factorization with partial pivoting, `P·A = L·U` packed in one matrix.
#[derive(Debug, Clone)]
pub struct Lu {
    n: usize,
    packed: Vec<Complex64>,
    perm: Vec<usize>,
    sign: f64,
    singular: bool,
}

impl Lu {
    pub fn factor(a: &ComplexMatrix) -> Result<Self, KernelError> {
        if !a.is_square() {
            return Err(KernelError::DimensionMismatch {
                op: "lu",
                left: (a.rows(), a.cols()),
                right: (a.rows(), a.cols()),
            });
        }
        let n = a.rows();
        let mut lu = a.as_slice().to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        let mut singular = false;
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, lu[i * n + k].norm()))
                .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if pmax == 0.0 {
                singular = true;
                continue;
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let pivot = lu[k * n + k];
            for i in k + 1..n {
                let f = lu[i * n + k] / pivot;
                lu[i * n + k] = f;
                for j in k + 1..n {
                    let u = lu[k * n + j];
                    lu[i * n + j] -= f * u;
                }
            }
        }
        Ok(Self {
            n,
            packed: lu,
            perm,
            sign,
            singular,
        })
    }

    pub fn is_singular(&self) -> bool {
        self.singular
    }

    pub fn determinant(&self) -> Complex64 {
        if self.singular {
            return Complex64::new(0.0, 0.0);
        }
        (0..self.n)
            .map(|i| self.packed[i * self.n + i])
            .fold(Complex64::new(self.sign, 0.0), |acc, d| acc * d)
    }

    /// Solves with the stored factors; callers check `is_singular` first.
    pub fn solve(&self, rhs: &[Complex64]) -> ComplexVector {
        let n = self.n;
        let mut x: ComplexVector = self.perm.iter().map(|&p| rhs[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let l = self.packed[i * n + j];
                x[i] = x[i] - l * x[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let u = self.packed[i * n + j];
                x[i] = x[i] - u * x[j];
            }
            x[i] /= self.packed[i * n + i];
        }
        x
    }

    pub fn inverse(&self) -> ComplexMatrix {
        let n = self.n;
        let cols: Vec<ComplexVector> = (0..n)
            .map(|j| {
                let mut e = vec![Complex64::new(0.0, 0.0); n];
                e[j] = Complex64::new(1.0, 0.0);
                self.solve(&e)
            })
            .collect();
        ComplexMatrix::from_columns(&cols).unwrap_or_else(|_| ComplexMatrix::zeros(n, n))
    }
}

/// ∞-norm condition number `‖A‖·‖A⁻¹‖`; infinite when `a` is exactly singular.
pub fn condition_estimate(a: &ComplexMatrix) -> Result<f64, KernelError> {
    let lu = Lu::factor(a)?;
    if lu.is_singular() {
        return Ok(f64::INFINITY);
    }
    let inv = lu.inverse();
    let cond = a.norm() * inv.norm();
    Ok(if cond.is_finite() { cond } else { f64::INFINITY })
}

/// Solves `a·x = rhs` by pivoted elimination.
///
/// Fails with [`KernelError::Singular`] when the condition estimate exceeds
/// [`MAX_CONDITION`].
pub fn solve_linear(a: &ComplexMatrix, rhs: &[Complex64]) -> Result<ComplexVector, KernelError> {
    if rhs.len() != a.rows() {
        return Err(KernelError::DimensionMismatch {
            op: "solve_linear",
            left: (a.rows(), a.cols()),
            right: (rhs.len(), 1),
        });
    }
    let lu = Lu::factor(a)?;
    if lu.is_singular() {
        return Err(KernelError::Singular {
            condition: f64::INFINITY,
        });
    }
    let condition = a.norm() * lu.inverse().norm();
    if !condition.is_finite() || condition > MAX_CONDITION {
        return Err(KernelError::Singular { condition });
    }
    let x = lu.solve(rhs);
    if x.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(KernelError::NonFinite);
    }
    Ok(x)
}

pub fn inverse(a: &ComplexMatrix) -> Result<ComplexMatrix, KernelError> {
    let lu = Lu::factor(a)?;
    if lu.is_singular() {
        return Err(KernelError::Singular {
            condition: f64::INFINITY,
        });
    }
    let inv = lu.inverse();
    let condition = a.norm() * inv.norm();
    if !condition.is_finite() || condition > MAX_CONDITION {
        return Err(KernelError::Singular { condition });
    }
    Ok(inv)
}

pub fn determinant(a: &ComplexMatrix) -> Result<Complex64, KernelError> {
    Ok(Lu::factor(a)?.determinant())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn identity_solve() {
        let b = vec![c(1.0), Complex64::new(0.0, 2.0), c(-3.0)];
        let x = solve_linear(&ComplexMatrix::identity(3), &b).unwrap();
        assert_eq!(x, b);
    }

    #[test]
    fn diagonal_solve() {
        let a = ComplexMatrix::from_real_rows(&[[2.0, 0.0], [0.0, 4.0]]);
        let x = solve_linear(&a, &[c(2.0), c(8.0)]).unwrap();
        assert!((x[0] - c(1.0)).norm() < 1e-15 && (x[1] - c(2.0)).norm() < 1e-15);
    }

    #[test]
    fn singular_reports_condition() {
        let a = ComplexMatrix::from_real_rows(&[[1.0, 2.0], [2.0, 4.0]]);
        match solve_linear(&a, &[c(1.0), c(1.0)]) {
            Err(KernelError::Singular { condition }) => assert!(condition > MAX_CONDITION),
            other => panic!("expected singular error, got {other:?}"),
        }
        let near = ComplexMatrix::from_real_rows(&[[1.0, 1.0], [1.0, 1.0 + 1e-14]]);
        assert!(matches!(
            solve_linear(&near, &[c(1.0), c(1.0)]),
            Err(KernelError::Singular { .. })
        ));
    }

    #[test]
    fn determinant_with_pivoting() {
        let a = ComplexMatrix::from_real_rows(&[[0.0, 1.0], [1.0, 0.0]]);
        assert!((determinant(&a).unwrap() - c(-1.0)).norm() < 1e-15);
        let b = ComplexMatrix::from_real_rows(&[[2.0, 1.0, 0.0], [1.0, 3.0, 1.0], [0.0, 1.0, 4.0]]);
        assert!((determinant(&b).unwrap() - c(18.0)).norm() < 1e-12);
    }
}
