//! Boundary matching for step and barrier potentials.
//!
//! Probabilities are flux ratios measured with the representation's own
//! current operator. Two outgoing modes of the same momentum can carry a
//! cross current (`u_s†·J·u_c ≠ 0`), so totals are
//! `T_tot = T1 + T2 + T_int` rather than a plain sum of channels.

mod barrier;
mod closed_form;
mod klein;
mod step;
mod sweep;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::numkernel::{bilinear, KernelError};
use crate::planewave::{KleinConvention, Mode, ModeOptions, PlanewaveError, Spin};
use crate::representations::RepresentationError;

pub use barrier::solve_barrier;
pub use closed_form::{
    audit_closed_forms, closed_form, AuditEntry, AuditReport, AuditRow, ClosedFormPoint, AUDIT_FLAG_TOL,
};
pub use klein::{
    default_klein_grid, klein_limit_reflection, klein_limit_transmission, klein_probe, KleinReport, KleinSample, LimitEstimate,
};
pub use step::solve_step;
pub use sweep::{energy_grid, interference_decomposition, sweep, SweepRow};

/// Conservation must close to this for every non-threshold point.
pub const CONSERVATION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// Propagating on both sides with the same sign of kinetic energy.
    Transmitting,
    /// Evanescent beyond the step (`|E − V0| < m`); nothing is transmitted.
    Gap,
    /// Propagating beyond the step with `E − V0 < −m`.
    Klein,
    /// Barrier whose interior is evanescent.
    Tunneling,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Transmitting => "transmitting",
            Regime::Gap => "gap",
            Regime::Klein => "klein",
            Regime::Tunneling => "tunneling",
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ScatterError {
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("threshold degeneracy: E − V = {kinetic} with m = {mass} makes the momentum roots coalesce")]
    Threshold { kinetic: f64, mass: f64 },
    #[error("matching system is singular (condition estimate {condition:e}); kinematics are degenerate")]
    SingularMatching { condition: f64 },
    #[error("closed forms are not defined at E={energy}, m={mass}, V0={v0}: need E > m and (E − V0)² > m²")]
    Domain { energy: f64, mass: f64, v0: f64 },
    #[error(transparent)]
    Representation(#[from] RepresentationError),
    #[error(transparent)]
    Planewave(PlanewaveError),
    #[error(transparent)]
    Kernel(KernelError),
}

impl From<PlanewaveError> for ScatterError {
    fn from(e: PlanewaveError) -> Self {
        match e {
            PlanewaveError::Threshold { kinetic, mass } => ScatterError::Threshold { kinetic, mass },
            other => ScatterError::Planewave(other),
        }
    }
}

impl From<KernelError> for ScatterError {
    fn from(e: KernelError) -> Self {
        match e {
            KernelError::Singular { condition } => ScatterError::SingularMatching { condition },
            other => ScatterError::Kernel(other),
        }
    }
}

/// A particle of energy `E` incident from the left on `V(z) = V0` for `z > 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepProblem {
    pub rep: String,
    pub energy: f64,
    pub mass: f64,
    pub v0: f64,
    pub incident_spin: Spin,
    #[serde(default)]
    pub options: ModeOptions,
}

impl StepProblem {
    pub fn new(rep: &str, energy: f64, mass: f64, v0: f64, incident_spin: Spin) -> Self {
        Self {
            rep: rep.to_string(),
            energy,
            mass,
            v0,
            incident_spin,
            options: ModeOptions::default(),
        }
    }

    pub fn with_convention(mut self, convention: KleinConvention) -> Self {
        self.options.convention = convention;
        self
    }

    pub fn with_options(mut self, options: ModeOptions) -> Self {
        self.options = options;
        self
    }

    fn validate(&self) -> Result<(), ScatterError> {
        let finite = self.energy.is_finite() && self.mass.is_finite() && self.v0.is_finite();
        if !finite || self.mass < 0.0 {
            return Err(ScatterError::InvalidProblem(format!(
                "need finite E, V0 and m ≥ 0 (got E={}, m={}, V0={})",
                self.energy, self.mass, self.v0
            )));
        }
        if self.energy <= self.mass {
            return Err(ScatterError::InvalidProblem(format!(
                "incident particle must propagate: E={} must exceed m={}",
                self.energy, self.mass
            )));
        }
        Ok(())
    }
}

/// Spin-resolved outcome of one scattering calculation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScatterResult {
    pub rep: String,
    #[serde(rename = "E")]
    pub energy: f64,
    pub m: f64,
    #[serde(rename = "V0")]
    pub v0: f64,
    pub width: Option<f64>,
    pub incident_spin: Spin,
    pub convention: KleinConvention,
    pub t_up: Complex64,
    pub t_down: Complex64,
    pub r_up: Complex64,
    pub r_down: Complex64,
    #[serde(rename = "T_up")]
    pub trans_up: f64,
    #[serde(rename = "T_down")]
    pub trans_down: f64,
    #[serde(rename = "R_up")]
    pub refl_up: f64,
    #[serde(rename = "R_down")]
    pub refl_down: f64,
    /// Same-spin transmission.
    #[serde(rename = "T1")]
    pub t1: f64,
    /// Spin-flipped transmission.
    #[serde(rename = "T2")]
    pub t2: f64,
    #[serde(rename = "T_int")]
    pub t_int: f64,
    #[serde(rename = "R_int")]
    pub r_int: f64,
    #[serde(rename = "T_tot")]
    pub t_tot: f64,
    #[serde(rename = "R_tot")]
    pub r_tot: f64,
    pub conservation_residual: f64,
    pub regime: Regime,
}

impl ScatterResult {
    /// Transmission into the channel with the given spin label.
    pub fn transmission(&self, spin: Spin) -> f64 {
        match spin {
            Spin::Up => self.trans_up,
            Spin::Down => self.trans_down,
        }
    }

    pub fn reflection(&self, spin: Spin) -> f64 {
        match spin {
            Spin::Up => self.refl_up,
            Spin::Down => self.refl_down,
        }
    }
}

/// Outgoing channel pair (same spin as incident, flipped spin) with amplitudes.
pub(crate) struct Outgoing<'a> {
    pub same: (&'a Mode, Complex64),
    pub cross: (&'a Mode, Complex64),
}

pub(crate) struct ChannelFluxes {
    pub same: f64,
    pub cross: f64,
    pub interference: f64,
}

/// Flux carried by `a_s·u_s + a_c·u_c`, split into its three terms.
pub(crate) fn channel_fluxes(current: &crate::numkernel::ComplexMatrix, out: &Outgoing<'_>) -> ChannelFluxes {
    let (us, a_s) = out.same;
    let (uc, a_c) = out.cross;
    let f_ss = bilinear(&us.spinor, current, &us.spinor).re;
    let f_cc = bilinear(&uc.spinor, current, &uc.spinor).re;
    let f_sc = bilinear(&us.spinor, current, &uc.spinor);
    ChannelFluxes {
        same: a_s.norm_sqr() * f_ss,
        cross: a_c.norm_sqr() * f_cc,
        interference: 2.0 * (a_s.conj() * a_c * f_sc).re,
    }
}

pub(crate) struct Assembly<'a> {
    pub problem: &'a StepProblem,
    pub width: Option<f64>,
    pub current: &'a crate::numkernel::ComplexMatrix,
    pub incident_flux: f64,
    pub reflected: Outgoing<'a>,
    pub transmitted: Outgoing<'a>,
    pub regime: Regime,
}

pub(crate) fn assemble(a: Assembly<'_>) -> ScatterResult {
    let spin = a.problem.incident_spin;
    let f_in = a.incident_flux;
    let refl = channel_fluxes(a.current, &a.reflected);
    let (r1, r2, r_int) = (-refl.same / f_in, -refl.cross / f_in, -refl.interference / f_in);
    let (t1, t2, t_int) = if a.regime == Regime::Gap {
        (0.0, 0.0, 0.0)
    } else {
        let tr = channel_fluxes(a.current, &a.transmitted);
        (tr.same / f_in, tr.cross / f_in, tr.interference / f_in)
    };
    let t_tot = t1 + t2 + t_int;
    let r_tot = r1 + r2 + r_int;

    let by_spin = |same: f64, cross: f64| match spin {
        Spin::Up => (same, cross),
        Spin::Down => (cross, same),
    };
    let (trans_up, trans_down) = by_spin(t1, t2);
    let (refl_up, refl_down) = by_spin(r1, r2);
    let (t_up, t_down) = by_spin_c(spin, a.transmitted.same.1, a.transmitted.cross.1);
    let (r_up, r_down) = by_spin_c(spin, a.reflected.same.1, a.reflected.cross.1);

    ScatterResult {
        rep: a.problem.rep.clone(),
        energy: a.problem.energy,
        m: a.problem.mass,
        v0: a.problem.v0,
        width: a.width,
        incident_spin: spin,
        convention: a.problem.options.convention,
        t_up,
        t_down,
        r_up,
        r_down,
        trans_up,
        trans_down,
        refl_up,
        refl_down,
        t1,
        t2,
        t_int,
        r_int,
        t_tot,
        r_tot,
        conservation_residual: (t_tot + r_tot - 1.0).abs(),
        regime: a.regime,
    }
}

fn by_spin_c(spin: Spin, same: Complex64, cross: Complex64) -> (Complex64, Complex64) {
    match spin {
        Spin::Up => (same, cross),
        Spin::Down => (cross, same),
    }
}

/// Picks the mode with the given direction and spin label.
pub(crate) fn pick(modes: &[Mode], direction: crate::planewave::Direction, spin: Spin) -> Result<&Mode, ScatterError> {
    modes
        .iter()
        .find(|m| m.direction == direction && m.spin_label == spin)
        .ok_or_else(|| {
            ScatterError::InvalidProblem(format!("no {direction:?} mode with spin {}", spin.as_str()))
        })
}
