//! Similarity transformations between representation sets.
//!
//! An intertwiner `S` satisfies `S·Aᵢ = Bᵢ·S` for every constraint pair. It is
//! found as a nullspace element of the stacked Kronecker system
//! `(Aᵢᵀ ⊗ I − I ⊗ Bᵢ)·vec(S) = 0` (column-major `vec`).
//!
//! With `A` the Dirac set, `U = S⁻¹` maps the target back to it and the induced
//! metric is `g = U†U = (S·S†)⁻¹`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::numkernel::{
    eigen, inverse, nullspace, svd, ComplexMatrix, ComplexVector, KernelError,
};
use crate::representations::{registry_lookup, Algebra, Kind, RepresentationError, RepresentationSet};

/// Relative tolerance on `‖S·A − B·S‖` and on unitarity.
pub const INTERTWINER_TOL: f64 = 1e-9;
/// Default `(E, m)` probes for the pseudo-Hermiticity check.
pub const DEFAULT_PROBES: [(f64, f64); 2] = [(2.0, 1.0), (1.5, 1.0)];

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EquivalenceError {
    #[error("constraint pairs must be non-empty and 4x4")]
    Shape,
    #[error("metric is not Hermitian positive-definite")]
    NotPositiveDefinite,
    #[error("time generator needs x1² = I; `{0}` is a nilpotent pair")]
    Unsupported(String),
    #[error(transparent)]
    Representation(#[from] RepresentationError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeResidual {
    pub energy: f64,
    pub mass: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub source: Option<String>,
    pub target: Option<String>,
    pub exists: bool,
    pub intertwiner: ComplexMatrix,
    /// `max ‖S·Aᵢ − Bᵢ·S‖ / ‖S‖`.
    pub intertwiner_residual: f64,
    /// `σ_min / σ_max` of the intertwiner.
    pub inverse_condition: f64,
    pub nullspace_dimension: usize,
    pub unitary: bool,
    /// `‖S†S/c − I‖_max` with `c` the mean diagonal of `S†S`.
    ///
    /// When no intertwiner exists the residuals describe the best rejected
    /// candidate and `metric` is the identity.
    pub unitarity_residual: f64,
    pub metric: ComplexMatrix,
    /// `‖g − I‖_max`.
    pub metric_deviation: f64,
    /// Largest residual over `probes`, if any were evaluated.
    pub pseudo_hermiticity_residual: Option<f64>,
    pub probes: Vec<ProbeResidual>,
}

fn vec_to_matrix(v: &[Complex64], n: usize) -> ComplexMatrix {
    let mut s = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        for i in 0..n {
            s[(i, j)] = v[j * n + i];
        }
    }
    s
}

fn inverse_condition(s: &ComplexMatrix) -> f64 {
    let d = svd(s);
    if d.largest() == 0.0 {
        0.0
    } else {
        d.smallest() / d.largest()
    }
}

fn max_intertwining_residual(s: &ComplexMatrix, pairs: &[(ComplexMatrix, ComplexMatrix)]) -> f64 {
    let scale = s.norm().max(f64::MIN_POSITIVE);
    pairs
        .iter()
        .map(|(a, b)| (&(s * a) - &(b * s)).norm() / scale)
        .fold(0.0, f64::max)
}

/// Unitary factor `W` of the polar decomposition `S = W·P`.
fn polar_unitary(s: &ComplexMatrix) -> ComplexMatrix {
    let d = svd(s);
    let n = s.rows();
    let mut w = ComplexMatrix::zeros(n, n);
    for (u, v) in d.left.iter().zip(&d.right) {
        for i in 0..n {
            for j in 0..n {
                w[(i, j)] += u[i] * v[j].conj();
            }
        }
    }
    w
}

fn normalize_det(s: &ComplexMatrix) -> ComplexMatrix {
    match crate::numkernel::determinant(s) {
        Ok(det) if det.norm() > 0.0 => s.scale_real(det.norm().powf(-1.0 / s.rows() as f64)),
        _ => s.clone(),
    }
}

fn unitarity_residual(s: &ComplexMatrix) -> f64 {
    let sts = &s.dagger() * s;
    let n = s.rows();
    let c = sts.trace().re / n as f64;
    if c <= 0.0 {
        return 1.0;
    }
    sts.scale_real(1.0 / c).max_abs_diff(&ComplexMatrix::identity(n))
}

fn candidates(basis: &[ComplexVector]) -> Vec<ComplexVector> {
    let mut out: Vec<ComplexVector> = basis.to_vec();
    if basis.len() > 1 {
        let phases: [fn(usize) -> Complex64; 3] = [
            |_| Complex64::new(1.0, 0.0),
            |k| Complex64::new(if k % 2 == 0 { 1.0 } else { -1.0 }, 0.0),
            |k| Complex64::new(0.0, 1.0).powu(k as u32),
        ];
        for phase in phases {
            let len = basis[0].len();
            let mut v = vec![Complex64::new(0.0, 0.0); len];
            for (k, b) in basis.iter().enumerate() {
                let w = phase(k) * (1.0 + 0.1 * k as f64);
                for (x, y) in v.iter_mut().zip(b) {
                    *x += w * y;
                }
            }
            out.push(v);
        }
    }
    out
}

/// Solves `S·Aᵢ = Bᵢ·S` jointly and classifies the best-conditioned solution.
///
/// Non-existence is reported through `exists = false`, not as an error.
pub fn find_intertwiner(pairs: &[(ComplexMatrix, ComplexMatrix)]) -> Result<EquivalenceReport, EquivalenceError> {
    if pairs.is_empty()
        || pairs
            .iter()
            .any(|(a, b)| a.rows() != 4 || a.cols() != 4 || b.rows() != 4 || b.cols() != 4)
    {
        return Err(EquivalenceError::Shape);
    }
    let n = 4;
    let id = ComplexMatrix::identity(n);
    let blocks: Vec<ComplexMatrix> = pairs
        .iter()
        .map(|(a, b)| &a.transpose().kron(&id) - &id.kron(b))
        .collect();
    let system = ComplexMatrix::vstack(&blocks)?;
    let basis = nullspace(&system, INTERTWINER_TOL);

    let best = candidates(&basis)
        .into_iter()
        .map(|v| vec_to_matrix(&v, n))
        .map(|s| (inverse_condition(&s), s))
        .max_by(|x, y| x.0.total_cmp(&y.0));

    let (cond, s) = match best {
        Some((cond, s)) if cond > INTERTWINER_TOL => (cond, s),
        other => {
            let (cond, s) = other.unwrap_or_else(|| (0.0, ComplexMatrix::zeros(n, n)));
            return Ok(EquivalenceReport {
                source: None,
                target: None,
                exists: false,
                intertwiner_residual: max_intertwining_residual(&s, pairs),
                inverse_condition: cond,
                nullspace_dimension: basis.len(),
                unitary: false,
                unitarity_residual: unitarity_residual(&s),
                intertwiner: s,
                metric: ComplexMatrix::identity(n),
                metric_deviation: 0.0,
                pseudo_hermiticity_residual: None,
                probes: Vec::new(),
            });
        }
    };

    let polar = polar_unitary(&s);
    let s = if max_intertwining_residual(&polar, pairs) <= INTERTWINER_TOL {
        polar
    } else {
        s
    };
    let s = normalize_det(&s);
    let u = inverse(&s)?;
    let metric = &u.dagger() * &u;
    let unitarity = unitarity_residual(&s);
    Ok(EquivalenceReport {
        source: None,
        target: None,
        exists: true,
        intertwiner_residual: max_intertwining_residual(&s, pairs),
        inverse_condition: cond.max(inverse_condition(&s)),
        nullspace_dimension: basis.len(),
        unitary: unitarity <= INTERTWINER_TOL,
        unitarity_residual: unitarity,
        metric_deviation: metric.max_abs_diff(&ComplexMatrix::identity(n)),
        metric,
        intertwiner: s,
        pseudo_hermiticity_residual: None,
        probes: Vec::new(),
    })
}

/// Intertwiner from `source` to `target` (matching `x1` and `x2`), with
/// pseudo-Hermiticity of the target evaluated at [`DEFAULT_PROBES`].
pub fn compare_representations(source: &str, target: &str) -> Result<EquivalenceReport, EquivalenceError> {
    let a = registry_lookup(source)?;
    let b = registry_lookup(target)?;
    let mut report = find_intertwiner(&[(a.x1.clone(), b.x1.clone()), (a.x2.clone(), b.x2.clone())])?;
    report.source = Some(source.to_string());
    report.target = Some(target.to_string());
    if report.exists && b.algebra == Algebra::CliffordPair {
        for (energy, mass) in DEFAULT_PROBES {
            let residual = pseudo_hermiticity_check(b, &report.metric, energy, mass)?;
            report.probes.push(ProbeResidual { energy, mass, residual });
        }
        report.pseudo_hermiticity_residual =
            Some(report.probes.iter().map(|p| p.residual).fold(0.0, f64::max));
    }
    Ok(report)
}

/// Time generator `Ĥ = x1·p − x1·x2·m` at on-shell `p = √(E² − m²)`.
///
/// Multiplying the mode equation `p·u = (x1·E + x2·m)·u` by `x1` (using
/// `x1² = I`) gives `E·u = Ĥ·u`, so `Ĥ` has the energies as eigenvalues.
pub fn time_generator(rep: &RepresentationSet, energy: f64, mass: f64) -> Result<ComplexMatrix, EquivalenceError> {
    if rep.algebra != Algebra::CliffordPair {
        return Err(EquivalenceError::Unsupported(rep.name.clone()));
    }
    let p = (energy * energy - mass * mass).max(0.0).sqrt();
    Ok(&rep.x1.scale_real(p) - &(&rep.x1 * &rep.x2).scale_real(mass))
}

/// Cholesky test for Hermitian positive-definiteness.
pub fn is_positive_definite(g: &ComplexMatrix) -> bool {
    let scale = g.norm();
    if !g.is_square() || scale == 0.0 || !g.is_hermitian(1e-9 * scale) {
        return false;
    }
    let n = g.rows();
    let mut l = vec![Complex64::new(0.0, 0.0); n * n];
    for j in 0..n {
        let mut d = g[(j, j)].re;
        for k in 0..j {
            d -= l[j * n + k].norm_sqr();
        }
        if d <= 1e-14 * scale {
            return false;
        }
        let d = d.sqrt();
        l[j * n + j] = Complex64::new(d, 0.0);
        for i in j + 1..n {
            let mut s = g[(i, j)];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k].conj();
            }
            l[i * n + j] = s / d;
        }
    }
    true
}

/// `‖Ĥ†·g − g·Ĥ‖_max` for the representation's time generator at `(E, m)`.
pub fn pseudo_hermiticity_check(
    rep: &RepresentationSet,
    g: &ComplexMatrix,
    energy: f64,
    mass: f64,
) -> Result<f64, EquivalenceError> {
    if g.rows() != 4 || !is_positive_definite(g) {
        return Err(EquivalenceError::NotPositiveDefinite);
    }
    let h = time_generator(rep, energy, mass)?;
    Ok((&h.dagger() * g).max_abs_diff(&(g * &h)))
}

/// Largest `|Im p|` over the eigenvalues of `x1·E + x2·m`.
pub fn reality_check(rep: &RepresentationSet, energy: f64, mass: f64) -> Result<f64, EquivalenceError> {
    let h = rep.generator(energy, mass, 0.0);
    Ok(eigen(&h)?
        .iter()
        .map(|p| p.value.im.abs())
        .fold(0.0, f64::max))
}

/// Kind guard used by callers that only make sense for relativistic sets.
pub fn is_relativistic(rep: &RepresentationSet) -> bool {
    rep.kind == Kind::Relativistic
}
