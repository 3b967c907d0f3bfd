//! Large-step behavior: numeric totals along a growing `V0` grid, extrapolated
//! to `V0 → ∞`, next to the published limit expressions.

use serde::{Deserialize, Serialize};

use crate::planewave::{KleinConvention, Spin};

use super::{closed_form, solve_step, ScatterError, StepProblem};

/// Agreement required between a literal limit and the extrapolated numeric one.
pub const LIMIT_TOL: f64 = 1e-4;

/// `2(E² − m²)(√(E² − m²) + E)/m²`, as published.
pub fn klein_limit_transmission(energy: f64, mass: f64) -> f64 {
    let k2 = energy * energy - mass * mass;
    2.0 * k2 * (k2.sqrt() + energy) / (mass * mass)
}

/// `(√(E² − m²) + E)²/m²`, as published.
pub fn klein_limit_reflection(energy: f64, mass: f64) -> f64 {
    let s = (energy * energy - mass * mass).sqrt() + energy;
    s * s / (mass * mass)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KleinSample {
    #[serde(rename = "V0")]
    pub v0: f64,
    pub t_flux: f64,
    pub r_flux: f64,
    pub t_momentum: f64,
    pub r_momentum: f64,
    /// Closed-form totals at this `V0`.
    pub t_closed_form: f64,
    pub r_closed_form: f64,
}

/// Value extrapolated to `1/V0 → 0`, with the spread between the two- and
/// three-point estimates as an error indicator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitEstimate {
    pub value: f64,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KleinReport {
    pub rep: String,
    #[serde(rename = "E")]
    pub energy: f64,
    pub m: f64,
    /// Convention used for `r_exceeds_one` and the literal comparisons.
    pub convention: KleinConvention,
    pub samples: Vec<KleinSample>,
    pub t_limit_flux: LimitEstimate,
    pub r_limit_flux: LimitEstimate,
    pub t_limit_momentum: LimitEstimate,
    pub r_limit_momentum: LimitEstimate,
    pub t_limit_closed_form: LimitEstimate,
    pub r_limit_closed_form: LimitEstimate,
    pub t_limit_literal: f64,
    pub r_limit_literal: f64,
    pub r_literal_matches_numeric: bool,
    pub t_literal_matches_numeric: bool,
    /// Literal transmission limit divided by the extrapolated closed-form one.
    pub t_literal_over_closed_form: f64,
    pub r_exceeds_one: bool,
    /// Limits whose literal value disagrees with the numeric extrapolation.
    pub flags: Vec<String>,
}

/// Polynomial extrapolation of `(h, y)` samples to `h = 0` (Neville).
fn extrapolate(h: &[f64], y: &[f64]) -> f64 {
    let mut p = y.to_vec();
    let n = h.len();
    for level in 1..n {
        for i in 0..n - level {
            let j = i + level;
            p[i] = (h[j] * p[i] - h[i] * p[i + 1]) / (h[j] - h[i]);
        }
    }
    p[0]
}

fn limit(v0: &[f64], y: &[f64]) -> LimitEstimate {
    let n = v0.len();
    let h: Vec<f64> = v0.iter().map(|v| 1.0 / v).collect();
    let take = n.min(3);
    let three = extrapolate(&h[n - take..], &y[n - take..]);
    let two = if n >= 2 {
        extrapolate(&h[n - 2..], &y[n - 2..])
    } else {
        y[n - 1]
    };
    LimitEstimate {
        value: three,
        error: (three - two).abs(),
    }
}

/// `V0 = m·10^(k/2)` for `k = 4..=16`, reaching `10⁸·m`.
pub fn default_klein_grid(mass: f64) -> Vec<f64> {
    (4..=16).map(|k| mass * 10f64.powf(k as f64 / 2.0)).collect()
}

pub fn klein_probe(
    rep: &str,
    energy: f64,
    mass: f64,
    v0_grid: &[f64],
    convention: KleinConvention,
) -> Result<KleinReport, ScatterError> {
    if !(energy > mass && mass > 0.0) {
        return Err(ScatterError::InvalidProblem(format!(
            "Klein probe needs E > m > 0 (got E={energy}, m={mass})"
        )));
    }
    if v0_grid.len() < 2 || v0_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(ScatterError::InvalidProblem("V0 grid must be strictly increasing with at least two points".into()));
    }
    let top = *v0_grid.last().expect("non-empty");
    if top < 1e6 * mass {
        return Err(ScatterError::InvalidProblem(format!(
            "V0 grid must reach 1e6·m = {}, got {top}",
            1e6 * mass
        )));
    }

    let mut samples = Vec::with_capacity(v0_grid.len());
    for &v0 in v0_grid {
        let base = StepProblem::new(rep, energy, mass, v0, Spin::Up);
        let flux = solve_step(&base.clone().with_convention(KleinConvention::Flux))?;
        let mom = solve_step(&base.with_convention(KleinConvention::Momentum))?;
        let cf = closed_form(energy, mass, v0)?;
        samples.push(KleinSample {
            v0,
            t_flux: flux.t_tot,
            r_flux: flux.r_tot,
            t_momentum: mom.t_tot,
            r_momentum: mom.r_tot,
            t_closed_form: cf.t,
            r_closed_form: cf.r,
        });
    }

    let v: Vec<f64> = samples.iter().map(|s| s.v0).collect();
    let series = |f: fn(&KleinSample) -> f64| limit(&v, &samples.iter().map(f).collect::<Vec<_>>());
    let t_limit_flux = series(|s| s.t_flux);
    let r_limit_flux = series(|s| s.r_flux);
    let t_limit_momentum = series(|s| s.t_momentum);
    let r_limit_momentum = series(|s| s.r_momentum);
    let t_limit_closed_form = series(|s| s.t_closed_form);
    let r_limit_closed_form = series(|s| s.r_closed_form);

    let (t_num, r_num) = match convention {
        KleinConvention::Flux => (t_limit_flux.value, r_limit_flux.value),
        KleinConvention::Momentum => (t_limit_momentum.value, r_limit_momentum.value),
    };
    let t_limit_literal = klein_limit_transmission(energy, mass);
    let r_limit_literal = klein_limit_reflection(energy, mass);
    let r_ok = (r_limit_literal - r_num).abs() <= LIMIT_TOL;
    let t_ok = (t_limit_literal - t_num).abs() <= LIMIT_TOL;
    let mut flags = Vec::new();
    if !t_ok {
        flags.push("T_limit".to_string());
    }
    if !r_ok {
        flags.push("R_limit".to_string());
    }

    Ok(KleinReport {
        rep: rep.to_string(),
        energy,
        m: mass,
        convention,
        samples,
        t_limit_flux,
        r_limit_flux,
        t_limit_momentum,
        r_limit_momentum,
        t_limit_closed_form,
        r_limit_closed_form,
        t_limit_literal,
        r_limit_literal,
        r_literal_matches_numeric: r_ok,
        t_literal_matches_numeric: t_ok,
        t_literal_over_closed_form: t_limit_literal / t_limit_closed_form.value,
        r_exceeds_one: r_num > 1.0,
        flags,
    })
}
