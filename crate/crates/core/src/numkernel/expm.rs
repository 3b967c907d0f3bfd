use num_complex::Complex64;

use super::{ComplexMatrix, KernelError};

/// Matrix exponential by scaling and squaring with a truncated Taylor series.
pub fn expm(a: &ComplexMatrix) -> Result<ComplexMatrix, KernelError> {
    if !a.is_square() {
        return Err(KernelError::DimensionMismatch {
            op: "expm",
            left: (a.rows(), a.cols()),
            right: (a.rows(), a.cols()),
        });
    }
    let n = a.rows();
    let norm = a.norm();
    if !norm.is_finite() {
        return Err(KernelError::NonFinite);
    }
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a.scale_real(0.5f64.powi(squarings));

    let mut result = ComplexMatrix::identity(n);
    let mut term = ComplexMatrix::identity(n);
    for k in 1..=30 {
        term = (&term * &scaled).scale(Complex64::new(1.0 / k as f64, 0.0));
        result = &result + &term;
        if term.max_abs() <= f64::EPSILON * result.max_abs() {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    if result.as_slice().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(KernelError::NonFinite);
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_gives_identity() {
        let e = expm(&ComplexMatrix::zeros(3, 3)).unwrap();
        assert!(e.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-15);
    }

    #[test]
    fn rotation_generator() {
        let theta = 2.5;
        let a = ComplexMatrix::from_real_rows(&[[0.0, -theta], [theta, 0.0]]);
        let e = expm(&a).unwrap();
        let expect = ComplexMatrix::from_real_rows(&[
            [theta.cos(), -theta.sin()],
            [theta.sin(), theta.cos()],
        ]);
        assert!(e.max_abs_diff(&expect) < 1e-13);
    }

    #[test]
    fn diagonal_imaginary_phases() {
        let d = [Complex64::new(0.0, 7.0), Complex64::new(-1.0, 0.0)];
        let e = expm(&ComplexMatrix::from_diagonal(&d)).unwrap();
        assert!((e[(0, 0)] - Complex64::new(0.0, 7.0).exp()).norm() < 1e-13);
        assert!((e[(1, 1)] - (-1.0f64).exp()).norm() < 1e-14);
    }
}
