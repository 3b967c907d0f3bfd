//! The published analytic step coefficients for the ajaib set, evaluated
//! literally, and an audit against the numeric matcher.

use serde::{Deserialize, Serialize};

use crate::planewave::Spin;

use super::{solve_step, ScatterError, StepProblem};

/// Median discrepancy above which an expression is flagged.
pub const AUDIT_FLAG_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormPoint {
    #[serde(rename = "E")]
    pub energy: f64,
    pub m: f64,
    #[serde(rename = "V0")]
    pub v0: f64,
    #[serde(rename = "Delta")]
    pub delta: f64,
    #[serde(rename = "DeltaTilde")]
    pub delta_tilde: f64,
    /// `Δ̃²/(E²V0²)`; `None` at `V0 = 0`, where it is `0/0`.
    #[serde(rename = "T_up_cf")]
    pub t_up: Option<f64>,
    #[serde(rename = "T_down_cf")]
    pub t_down: f64,
    #[serde(rename = "R_up_cf")]
    pub r_up: f64,
    #[serde(rename = "R_down_cf")]
    pub r_down: f64,
    #[serde(rename = "T_cf")]
    pub t: f64,
    #[serde(rename = "R_cf")]
    pub r: f64,
}

/// Literal evaluation of the printed expressions; no corrections are applied.
pub fn closed_form(energy: f64, mass: f64, v0: f64) -> Result<ClosedFormPoint, ScatterError> {
    let k2 = energy * energy - mass * mass;
    let q2 = (energy - v0) * (energy - v0) - mass * mass;
    let finite = energy.is_finite() && mass.is_finite() && v0.is_finite();
    if !finite || mass < 0.0 || energy <= mass || q2 <= 0.0 {
        return Err(ScatterError::Domain { energy, mass, v0 });
    }
    let root = (k2 * q2).sqrt();
    let delta = k2 + root - energy * v0;
    let delta_tilde = k2 - root + energy * v0;
    let e2 = energy * energy;
    let (m2, v2) = (mass * mass, v0 * v0);
    let d2 = delta * delta;
    Ok(ClosedFormPoint {
        energy,
        m: mass,
        v0,
        delta,
        delta_tilde,
        t_up: (v0 != 0.0).then(|| delta_tilde * delta_tilde / (e2 * v2)),
        t_down: k2 * m2 * v2 / (e2 * d2),
        r_up: m2 * m2 * v2 / (e2 * d2),
        r_down: k2 * m2 * v2 / (e2 * d2),
        t: 2.0 * k2 * (energy - v0) / (energy * delta),
        r: m2 * v2 / d2,
    })
}

/// One audited expression at one point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditEntry {
    pub quantity: String,
    pub closed_form: Option<f64>,
    pub numeric: f64,
    pub discrepancy: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditRow {
    pub point: ClosedFormPoint,
    pub entries: Vec<AuditEntry>,
    /// `|T_cf + R_cf − 1|`: internal consistency of the printed totals.
    pub total_sum_defect: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantitySummary {
    pub quantity: String,
    pub median_discrepancy: Option<f64>,
    pub suspect_typo: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub rows: Vec<AuditRow>,
    pub summary: Vec<QuantitySummary>,
    /// Quantities flagged SUSPECT-TYPO.
    pub flags: Vec<String>,
}

pub const TOTAL_SUM: &str = "T+R";

fn median(mut xs: Vec<f64>) -> Option<f64> {
    if xs.is_empty() {
        return None;
    }
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    Some(if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    })
}

/// Compares each printed expression with the ajaib matcher (spin-up incident).
///
/// Library results are never altered; the report only flags quantities whose
/// median discrepancy exceeds [`AUDIT_FLAG_TOL`].
pub fn audit_closed_forms(points: &[(f64, f64, f64)]) -> Result<AuditReport, ScatterError> {
    let mut rows = Vec::with_capacity(points.len());
    for &(energy, mass, v0) in points {
        let point = closed_form(energy, mass, v0)?;
        let num = solve_step(&StepProblem::new("ajaib", energy, mass, v0, Spin::Up))?;
        let entry = |quantity: &str, cf: Option<f64>, numeric: f64| AuditEntry {
            quantity: quantity.to_string(),
            closed_form: cf,
            numeric,
            discrepancy: cf.map(|c| (c - numeric).abs()),
        };
        let entries = vec![
            entry("T_up", point.t_up, num.trans_up),
            entry("R_up", Some(point.r_up), num.refl_up),
            entry("T_down", Some(point.t_down), num.trans_down),
            entry("R_down", Some(point.r_down), num.refl_down),
            entry("T_tot", Some(point.t), num.t_tot),
            entry("R_tot", Some(point.r), num.r_tot),
        ];
        rows.push(AuditRow {
            total_sum_defect: (point.t + point.r - 1.0).abs(),
            point,
            entries,
        });
    }

    let mut summary = Vec::new();
    if let Some(first) = rows.first() {
        for (k, e) in first.entries.iter().enumerate() {
            let values = rows.iter().filter_map(|r| r.entries[k].discrepancy).collect();
            let med = median(values);
            summary.push(QuantitySummary {
                quantity: e.quantity.clone(),
                median_discrepancy: med,
                suspect_typo: med.is_some_and(|d| d > AUDIT_FLAG_TOL),
            });
        }
        let med = median(rows.iter().map(|r| r.total_sum_defect).collect());
        summary.push(QuantitySummary {
            quantity: TOTAL_SUM.to_string(),
            median_discrepancy: med,
            suspect_typo: med.is_some_and(|d| d > AUDIT_FLAG_TOL),
        });
    }
    let flags = summary
        .iter()
        .filter(|s| s.suspect_typo)
        .map(|s| s.quantity.clone())
        .collect();
    Ok(AuditReport { rows, summary, flags })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_step_values() {
        let p = closed_form(2.0, 1.0, 0.0).unwrap();
        assert_eq!(p.delta, 6.0);
        assert_eq!(p.t_up, None);
        assert!((p.t - 1.0).abs() < 1e-15);
        assert_eq!(p.r, 0.0);
        assert_eq!(p.t_down, 0.0);
    }

    #[test]
    fn reference_point_arithmetic() {
        let p = closed_form(2.0, 1.0, 0.5).unwrap();
        // Δ = 3 + √(3·1.25) − 1, Δ̃ = 3 − √(3·1.25) + 1
        let root = 3.75f64.sqrt();
        assert!((p.delta - (2.0 + root)).abs() < 1e-15);
        assert!((p.delta_tilde - (4.0 - root)).abs() < 1e-15);
        assert!((p.delta - 3.9364917).abs() < 1e-7);
        assert!((p.delta_tilde - 2.0635083).abs() < 1e-7);
        assert!((p.r - 0.25 / (p.delta * p.delta)).abs() < 1e-16);
        assert!((p.r - 0.0161332).abs() < 1e-6);
    }

    #[test]
    fn domain_is_enforced() {
        assert!(closed_form(0.5, 1.0, 0.0).is_err());
        assert!(closed_form(2.0, 1.0, 1.5).is_err());
    }

    #[test]
    fn audit_flags_inconsistent_totals() {
        let report = audit_closed_forms(&[(2.0, 1.0, 0.5)]).unwrap();
        let row = &report.rows[0];
        assert!((row.point.t + row.point.r - 1.159).abs() < 1e-3);
        assert!(report.flags.contains(&TOTAL_SUM.to_string()));
        assert!(report.flags.contains(&"T_tot".to_string()));
        let r_tot = row.entries.iter().find(|e| e.quantity == "R_tot").unwrap();
        assert!(r_tot.discrepancy.unwrap() < 1e-9);
    }

    #[test]
    fn audit_zero_step_row_is_clean() {
        let report = audit_closed_forms(&[(2.0, 1.0, 0.0)]).unwrap();
        for e in &report.rows[0].entries {
            if let Some(d) = e.discrepancy {
                assert!(d < 1e-12, "{}: {d}", e.quantity);
            }
        }
    }
}
