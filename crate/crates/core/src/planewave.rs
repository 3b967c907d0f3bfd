//! Plane-wave modes `u·e^{ipz}` of a representation at fixed energy.
//!
//! Each momentum root is doubly degenerate. Its two-dimensional eigenspace is
//! split into spin channels, normalized, and classified by direction.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::numkernel::{bilinear, nullspace, vnorm, ComplexMatrix, ComplexVector, KernelError};
use crate::representations::{Kind, RepresentationSet};

/// Relative distance from a threshold below which kinematics are rejected.
pub const THRESHOLD_GUARD: f64 = 1e-9;
/// `|Im p|` at or below this counts as propagating.
pub const PROPAGATING_TOL: f64 = 1e-9;
const NULLSPACE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Kinematics {
    pub energy: f64,
    pub mass: f64,
    pub potential: f64,
}

impl Kinematics {
    pub fn new(energy: f64, mass: f64, potential: f64) -> Result<Self, PlanewaveError> {
        if !(energy.is_finite() && mass.is_finite() && potential.is_finite()) || mass < 0.0 {
            return Err(PlanewaveError::InvalidKinematics { energy, mass, potential });
        }
        Ok(Self { energy, mass, potential })
    }

    /// Kinetic energy `E − V`.
    pub fn kinetic(&self) -> f64 {
        self.energy - self.potential
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Rightward,
    Leftward,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Character {
    Propagating,
    Evanescent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    pub fn flipped(self) -> Self {
        match self {
            Spin::Up => Spin::Down,
            Spin::Down => Spin::Up,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Spin::Up => "up",
            Spin::Down => "down",
        }
    }
}

/// How propagating modes are assigned a direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KleinConvention {
    /// Sign of the group velocity, `p/(E − V)` (relativistic) or `p/m`.
    #[default]
    Flux,
    /// Sign of `Re p`.
    Momentum,
}

impl KleinConvention {
    pub fn as_str(self) -> &'static str {
        match self {
            KleinConvention::Flux => "flux",
            KleinConvention::Momentum => "momentum",
        }
    }
}

/// How a degenerate eigenspace is split into up/down channels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpinBasis {
    /// Up has a vanishing third component, down a vanishing fourth.
    #[default]
    Echelon,
    /// Eigenvectors of the projected spin operator `P·Σ3·P`, larger eigenvalue up.
    ProjectedSpin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ModeOptions {
    pub convention: KleinConvention,
    pub spin_basis: SpinBasis,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mode {
    pub momentum: Complex64,
    /// Unit |flux| when propagating, unit Euclidean norm when evanescent.
    pub spinor: ComplexVector,
    pub direction: Direction,
    pub character: Character,
    pub spin_label: Spin,
    /// Signed current `u†·J·u`.
    pub flux: f64,
}

impl Mode {
    /// `‖(x1·(E − V) + x2·m − p)·u‖`.
    pub fn on_shell_residual(&self, rep: &RepresentationSet, kin: &Kinematics) -> f64 {
        let h = rep.generator(kin.energy, kin.mass, kin.potential);
        let hu = h.mul_vec(&self.spinor).expect("4-spinor");
        hu.iter()
            .zip(&self.spinor)
            .map(|(a, b)| (a - self.momentum * b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PlanewaveError {
    #[error("invalid kinematics E={energy}, m={mass}, V={potential}")]
    InvalidKinematics { energy: f64, mass: f64, potential: f64 },
    #[error("threshold E − V = {kinetic} with m = {mass}: momentum roots coalesce")]
    Threshold { kinetic: f64, mass: f64 },
    #[error("eigenspace of p = {momentum} has dimension {dimension}, expected 2")]
    Defective { momentum: Complex64, dimension: usize },
    #[error("propagating mode at p = {momentum} carries no current")]
    Fluxless { momentum: Complex64 },
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// The two momentum roots `[+p, −p]`, with `Im(+p) ≥ 0`.
pub fn dispersion(rep: &RepresentationSet, kin: &Kinematics) -> [Complex64; 2] {
    let k = kin.kinetic();
    let p2 = match rep.kind {
        Kind::Relativistic => k * k - kin.mass * kin.mass,
        Kind::Nonrelativistic => 2.0 * k * kin.mass,
    };
    let mut p = Complex64::new(p2, 0.0).sqrt();
    if p.im < 0.0 {
        p = -p;
    }
    [p, -p]
}

/// True when the momentum roots (nearly) coalesce.
pub fn at_threshold(rep: &RepresentationSet, kin: &Kinematics) -> bool {
    let k = kin.kinetic();
    let scale = k.abs().max(kin.mass).max(kin.energy.abs()).max(f64::MIN_POSITIVE);
    match rep.kind {
        Kind::Relativistic => (k.abs() - kin.mass).abs() <= THRESHOLD_GUARD * scale,
        Kind::Nonrelativistic => (2.0 * k * kin.mass).abs() <= THRESHOLD_GUARD * scale * scale,
    }
}

/// Signed current `u†·J·u`.
pub fn flux(rep: &RepresentationSet, spinor: &[Complex64]) -> f64 {
    bilinear(spinor, &rep.current_op, spinor).re
}

fn fix_phase(u: &mut [Complex64]) {
    let scale = vnorm(u);
    if let Some(first) = u.iter().find(|z| z.norm() > 1e-12 * scale).copied() {
        let rot = first.conj() / first.norm();
        for z in u.iter_mut() {
            *z *= rot;
        }
    }
}

fn combine(basis: &[ComplexVector], a: Complex64, b: Complex64) -> ComplexVector {
    basis[0].iter().zip(&basis[1]).map(|(x, y)| x * a + y * b).collect()
}

fn echelon_pair(basis: &[ComplexVector]) -> Option<(ComplexVector, ComplexVector)> {
    let det = basis[0][2] * basis[1][3] - basis[1][2] * basis[0][3];
    if det.norm() < 1e-8 {
        return None;
    }
    let up = combine(basis, basis[1][2], -basis[0][2]);
    let down = combine(basis, basis[1][3], -basis[0][3]);
    Some((up, down))
}

fn projected_spin_pair(basis: &[ComplexVector], spin: &ComplexMatrix) -> (ComplexVector, ComplexVector) {
    let a = bilinear(&basis[0], spin, &basis[0]).re;
    let d = bilinear(&basis[1], spin, &basis[1]).re;
    let b = bilinear(&basis[0], spin, &basis[1]);
    let gap = ((a - d) * (a - d) / 4.0 + b.norm_sqr()).sqrt();
    if gap <= 1e-9 {
        // no preferred split: order the given basis deterministically
        let mut pair = [basis[0].clone(), basis[1].clone()];
        for u in pair.iter_mut() {
            fix_phase(u);
        }
        pair.sort_by(|x, y| {
            x.iter()
                .zip(y.iter())
                .map(|(p, q)| p.arg().total_cmp(&q.arg()))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let [first, second] = pair;
        return (first, second);
    }
    let lambda = (a + d) / 2.0 + gap;
    // eigenvector of [[a, b], [b̄, d]] for the larger eigenvalue
    let (c0, c1) = if (lambda - a).abs() > (lambda - d).abs() {
        (b, Complex64::new(lambda - a, 0.0))
    } else {
        (Complex64::new(lambda - d, 0.0), b.conj())
    };
    let up = combine(basis, c0, c1);
    let down = combine(basis, -c1.conj(), c0.conj());
    (up, down)
}

fn group_direction(rep: &RepresentationSet, kin: &Kinematics, p: Complex64, convention: KleinConvention) -> Direction {
    let velocity = match convention {
        KleinConvention::Momentum => p.re,
        KleinConvention::Flux => match rep.kind {
            Kind::Relativistic => p.re * kin.kinetic(),
            Kind::Nonrelativistic => p.re * kin.mass.max(f64::MIN_POSITIVE),
        },
    };
    if velocity > 0.0 {
        Direction::Rightward
    } else {
        Direction::Leftward
    }
}

/// The four modes, ordered `[+p up, +p down, −p up, −p down]`.
pub fn modes(rep: &RepresentationSet, kin: &Kinematics) -> Result<Vec<Mode>, PlanewaveError> {
    modes_with(rep, kin, ModeOptions::default())
}

pub fn modes_with(rep: &RepresentationSet, kin: &Kinematics, options: ModeOptions) -> Result<Vec<Mode>, PlanewaveError> {
    let kin = Kinematics::new(kin.energy, kin.mass, kin.potential)?;
    if at_threshold(rep, &kin) {
        return Err(PlanewaveError::Threshold {
            kinetic: kin.kinetic(),
            mass: kin.mass,
        });
    }
    let h = rep.generator(kin.energy, kin.mass, kin.potential);
    let scale = h.norm().max(f64::MIN_POSITIVE);
    let mut out = Vec::with_capacity(4);
    for p in dispersion(rep, &kin) {
        let shifted = &h - &ComplexMatrix::identity(4).scale(p);
        let basis = nullspace(&shifted, NULLSPACE_TOL);
        if basis.len() != 2 {
            return Err(PlanewaveError::Defective {
                momentum: p,
                dimension: basis.len(),
            });
        }
        let (up, down) = match options.spin_basis {
            SpinBasis::Echelon => echelon_pair(&basis).unwrap_or_else(|| projected_spin_pair(&basis, &rep.spin_op)),
            SpinBasis::ProjectedSpin => projected_spin_pair(&basis, &rep.spin_op),
        };
        let propagating = p.im.abs() <= PROPAGATING_TOL * scale.max(1.0);
        for (label, mut u) in [(Spin::Up, up), (Spin::Down, down)] {
            fix_phase(&mut u);
            let norm = vnorm(&u);
            for z in u.iter_mut() {
                *z /= norm;
            }
            let f = flux(rep, &u);
            let (character, direction) = if propagating {
                if f.abs() <= 1e-12 {
                    return Err(PlanewaveError::Fluxless { momentum: p });
                }
                let s = f.abs().sqrt();
                for z in u.iter_mut() {
                    *z /= s;
                }
                (Character::Propagating, group_direction(rep, &kin, p, options.convention))
            } else {
                let d = if p.im > 0.0 {
                    Direction::Rightward
                } else {
                    Direction::Leftward
                };
                (Character::Evanescent, d)
            };
            let f = flux(rep, &u);
            out.push(Mode {
                momentum: if propagating { Complex64::new(p.re, 0.0) } else { p },
                spinor: u,
                direction,
                character,
                spin_label: label,
                flux: f,
            });
        }
    }
    Ok(out)
}
