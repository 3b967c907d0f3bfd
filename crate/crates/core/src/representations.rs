//! Gamma matrices and the kinetic/mass matrix pairs built from them.
//!
//! Every constructor validates the algebra it promises and fails with the name
//! of the violated identity and its residual. Nothing is patched up silently.

use std::f64::consts::SQRT_2;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::numkernel::{anticommutator, ComplexMatrix};

/// Entrywise tolerance for every algebraic identity.
pub const ALGEBRA_TOL: f64 = 1e-12;

/// Names accepted by [`registry_lookup`].
pub const REGISTRY_NAMES: [&str; 4] = ["dirac", "ajaib", "xi", "eta12"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Relativistic,
    Nonrelativistic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algebra {
    /// `x1² = I`, `x2² = −I`, `{x1, x2} = 0`.
    CliffordPair,
    /// `x1² = x2² = 0`, `{x1, x2} = 2I`.
    NilpotentPair,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RepresentationError {
    #[error("{rep}: identity `{identity}` violated (max residual {residual:e})")]
    Identity {
        rep: String,
        identity: String,
        residual: f64,
    },
    #[error("unknown representation `{name}`; available: {}", available.join(", "))]
    UnknownName { name: String, available: Vec<String> },
}

/// The standard Dirac basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaBasis {
    pub gamma0: ComplexMatrix,
    pub gamma1: ComplexMatrix,
    pub gamma2: ComplexMatrix,
    pub gamma3: ComplexMatrix,
    pub gamma5: ComplexMatrix,
}

/// A validated pair of matrices defining the mode equation
/// `p·u = (x1·(E − V) + x2·m)·u`, with its current and spin operators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepresentationSet {
    pub name: String,
    pub kind: Kind,
    pub algebra: Algebra,
    pub x1: ComplexMatrix,
    pub x2: ComplexMatrix,
    /// Kernel `J` of the current bilinear `u†·J·u`; Hermitian.
    pub current_op: ComplexMatrix,
    pub spin_op: ComplexMatrix,
}

impl RepresentationSet {
    /// Mode operator `x1·(E − V) + x2·m`.
    pub fn generator(&self, energy: f64, mass: f64, potential: f64) -> ComplexMatrix {
        &self.x1.scale_real(energy - potential) + &self.x2.scale_real(mass)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub identity: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl IdentityCheck {
    fn new(identity: impl Into<String>, residual: f64) -> Self {
        Self {
            identity: identity.into(),
            residual,
            tolerance: ALGEBRA_TOL,
            passed: residual <= ALGEBRA_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraReport {
    pub rep: String,
    pub checks: Vec<IdentityCheck>,
    pub notes: Vec<String>,
}

impl AlgebraReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn max_residual(&self) -> f64 {
        self.checks.iter().map(|c| c.residual).fold(0.0, f64::max)
    }

    pub fn violations(&self) -> Vec<&IdentityCheck> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn pauli() -> [ComplexMatrix; 3] {
    let o = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    [
        ComplexMatrix::from_rows(&[[o, one], [one, o]]),
        ComplexMatrix::from_rows(&[[o, -I], [I, o]]),
        ComplexMatrix::from_rows(&[[one, o], [o, -one]]),
    ]
}

/// 4×4 matrix from four 2×2 blocks `[[a, b], [c, d]]`.
pub fn block(a: &ComplexMatrix, b: &ComplexMatrix, cc: &ComplexMatrix, d: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(4, 4);
    for i in 0..2 {
        for j in 0..2 {
            out[(i, j)] = a[(i, j)];
            out[(i, j + 2)] = b[(i, j)];
            out[(i + 2, j)] = cc[(i, j)];
            out[(i + 2, j + 2)] = d[(i, j)];
        }
    }
    out
}

/// `Σ3 = diag(σ3, σ3)`.
pub fn sigma3_spin() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[
        [1.0, 0.0, 0.0, 0.0],
        [0.0, -1.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, -1.0],
    ])
}

fn diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.max_abs_diff(b)
}

fn sq(a: &ComplexMatrix) -> ComplexMatrix {
    a * a
}

fn anti(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    anticommutator(a, b).expect("square matrices of equal size")
}

pub fn build_gamma_basis() -> GammaBasis {
    let [s1, s2, s3] = pauli();
    let id2 = ComplexMatrix::identity(2);
    let z2 = ComplexMatrix::zeros(2, 2);
    let gamma0 = block(&id2, &z2, &z2, &-&id2);
    let gk = |s: &ComplexMatrix| block(&z2, s, &-s, &z2);
    let (gamma1, gamma2, gamma3) = (gk(&s1), gk(&s2), gk(&s3));
    let gamma5 = block(&z2, &id2, &id2, &z2);
    GammaBasis {
        gamma0,
        gamma1,
        gamma2,
        gamma3,
        gamma5,
    }
}

impl GammaBasis {
    pub fn all(&self) -> [(&'static str, &ComplexMatrix); 5] {
        [
            ("γ0", &self.gamma0),
            ("γ1", &self.gamma1),
            ("γ2", &self.gamma2),
            ("γ3", &self.gamma3),
            ("γ5", &self.gamma5),
        ]
    }

    pub fn checks(&self) -> Vec<IdentityCheck> {
        let id = ComplexMatrix::identity(4);
        let neg = -&id;
        let mut out = vec![IdentityCheck::new("(γ0)² = I", diff(&sq(&self.gamma0), &id))];
        for (name, g) in [("γ1", &self.gamma1), ("γ2", &self.gamma2), ("γ3", &self.gamma3)] {
            out.push(IdentityCheck::new(format!("({name})² = −I"), diff(&sq(g), &neg)));
        }
        let product = (&(&(&self.gamma0 * &self.gamma1) * &self.gamma2) * &self.gamma3).scale(I);
        out.push(IdentityCheck::new("γ5 = iγ0γ1γ2γ3", diff(&product, &self.gamma5)));
        out.push(IdentityCheck::new(
            "(iγ5)² = −I",
            diff(&sq(&self.gamma5.scale(I)), &neg),
        ));
        let all = self.all();
        for (a, (na, ga)) in all.iter().enumerate() {
            for (nb, gb) in all.iter().skip(a + 1) {
                out.push(IdentityCheck::new(format!("{{{na}, {nb}}} = 0"), anti(ga, gb).max_abs()));
            }
        }
        out
    }
}

fn gamma() -> &'static GammaBasis {
    static BASIS: OnceLock<GammaBasis> = OnceLock::new();
    BASIS.get_or_init(build_gamma_basis)
}

fn require(rep: &str, checks: &[IdentityCheck]) -> Result<(), RepresentationError> {
    match checks.iter().find(|c| !c.passed) {
        None => Ok(()),
        Some(bad) => Err(RepresentationError::Identity {
            rep: rep.to_string(),
            identity: bad.identity.clone(),
            residual: bad.residual,
        }),
    }
}

fn pair_checks(algebra: Algebra, x1: &ComplexMatrix, x2: &ComplexMatrix) -> Vec<IdentityCheck> {
    let id = ComplexMatrix::identity(x1.rows());
    let zero = ComplexMatrix::zeros(x1.rows(), x1.cols());
    match algebra {
        Algebra::CliffordPair => vec![
            IdentityCheck::new("x1² = I", diff(&sq(x1), &id)),
            IdentityCheck::new("x2² = −I", diff(&sq(x2), &-&id)),
            IdentityCheck::new("{x1, x2} = 0", diff(&anti(x1, x2), &zero)),
        ],
        Algebra::NilpotentPair => vec![
            IdentityCheck::new("x1² = 0", sq(x1).max_abs()),
            IdentityCheck::new("x2² = 0", sq(x2).max_abs()),
            IdentityCheck::new("{x1, x2} = 2I", diff(&anti(x1, x2), &id.scale_real(2.0))),
        ],
    }
}

/// Identities a representation must satisfy before it can be used for scattering:
/// its pair algebra, Hermiticity of the current kernel, and `J·xᵢ = xᵢ†·J`
/// (which makes the current conserved by the mode equation).
pub fn representation_checks(rep: &RepresentationSet) -> Vec<IdentityCheck> {
    let mut out = pair_checks(rep.algebra, &rep.x1, &rep.x2);
    let j = &rep.current_op;
    out.push(IdentityCheck::new("J† = J", diff(&j.dagger(), j)));
    out.push(IdentityCheck::new(
        "J·x1 = x1†·J",
        diff(&(j * &rep.x1), &(&rep.x1.dagger() * j)),
    ));
    out.push(IdentityCheck::new(
        "J·x2 = x2†·J",
        diff(&(j * &rep.x2), &(&rep.x2.dagger() * j)),
    ));
    out
}

fn finish(rep: RepresentationSet, extra: Vec<IdentityCheck>) -> Result<RepresentationSet, RepresentationError> {
    require(&rep.name, &extra)?;
    require(&rep.name, &representation_checks(&rep))?;
    Ok(rep)
}

pub fn build_dirac_rep() -> Result<RepresentationSet, RepresentationError> {
    let g = gamma();
    finish(
        RepresentationSet {
            name: "dirac".into(),
            kind: Kind::Relativistic,
            algebra: Algebra::CliffordPair,
            x1: g.gamma0.clone(),
            x2: g.gamma5.scale(I),
            current_op: g.gamma0.clone(),
            spin_op: sigma3_spin(),
        },
        Vec::new(),
    )
}

fn ajaib_eta_checks() -> (ComplexMatrix, ComplexMatrix, Vec<IdentityCheck>) {
    let g = gamma();
    let [s1, s2, _] = pauli();
    let pref = c(0.0, -1.0 / SQRT_2);
    let product = (&(&(&g.gamma0 * &g.gamma1) * &g.gamma5) + &g.gamma2).scale(pref);
    let blockform = block(&s1, &s2, &-&s2, &s1).scale(pref);
    let eta_dagger = product.dagger();
    let id = ComplexMatrix::identity(4);
    let checks = vec![
        IdentityCheck::new("η product form = η block form", diff(&product, &blockform)),
        IdentityCheck::new("η² = 0", sq(&product).max_abs()),
        IdentityCheck::new("(η†)² = 0", sq(&eta_dagger).max_abs()),
        IdentityCheck::new("{η, η†} = 2I", diff(&anti(&product, &eta_dagger), &id.scale_real(2.0))),
    ];
    (product, eta_dagger, checks)
}

/// The nilpotent `η` and `η†` behind the ajaib pair.
///
/// `η` is built both from gamma products and from its explicit Pauli block form;
/// the two must agree, which pins the gamma basis.
pub fn build_ajaib_eta() -> Result<(ComplexMatrix, ComplexMatrix), RepresentationError> {
    let (eta, eta_dagger, checks) = ajaib_eta_checks();
    require("ajaib", &checks)?;
    Ok((eta, eta_dagger))
}

fn ajaib_cross_checks(x1: &ComplexMatrix, x2: &ComplexMatrix) -> Vec<IdentityCheck> {
    let g = gamma();
    let minus_i = c(0.0, -1.0);
    vec![
        IdentityCheck::new("χ1 = −iγ2", diff(x1, &g.gamma2.scale(minus_i))),
        IdentityCheck::new(
            "χ2 = −iγ0γ1γ5",
            diff(x2, &(&(&g.gamma0 * &g.gamma1) * &g.gamma5).scale(minus_i)),
        ),
        IdentityCheck::new("χ1† = χ1", diff(&x1.dagger(), x1)),
        IdentityCheck::new("χ2† = −χ2", diff(&x2.dagger(), &-x2)),
    ]
}

pub fn build_ajaib_rep() -> Result<RepresentationSet, RepresentationError> {
    let (eta, eta_dagger) = build_ajaib_eta()?;
    let x1 = (&eta + &eta_dagger).scale_real(1.0 / SQRT_2);
    let x2 = (&eta - &eta_dagger).scale_real(1.0 / SQRT_2);
    let extra = ajaib_cross_checks(&x1, &x2);
    finish(
        RepresentationSet {
            name: "ajaib".into(),
            kind: Kind::Relativistic,
            algebra: Algebra::CliffordPair,
            current_op: x1.clone(),
            x1,
            x2,
            spin_op: sigma3_spin(),
        },
        extra,
    )
}

fn eta12_raw() -> (ComplexMatrix, ComplexMatrix) {
    let g = gamma();
    let eta1 = (&g.gamma0 * &(&g.gamma5 + &g.gamma2)).scale(c(0.0, 1.0 / SQRT_2));
    let eta2 = (&(&g.gamma2 + &g.gamma0) * &g.gamma5).scale(c(0.0, SQRT_2));
    (eta1, eta2)
}

fn eta12_checks(eta1: &ComplexMatrix, eta2: &ComplexMatrix) -> Vec<IdentityCheck> {
    let id = ComplexMatrix::identity(4);
    vec![
        IdentityCheck::new("η1² = 0", sq(eta1).max_abs()),
        IdentityCheck::new("η2² = 0", sq(eta2).max_abs()),
        IdentityCheck::new("{η1, η2} = 2I", diff(&anti(eta1, eta2), &id.scale_real(2.0))),
    ]
}

/// The nilpotent pair `η1 = (i/√2)γ0(γ5 + γ2)`, `η2 = i√2(γ2 + γ0)γ5`, as written.
pub fn build_eta12() -> Result<(ComplexMatrix, ComplexMatrix), RepresentationError> {
    let (eta1, eta2) = eta12_raw();
    require("eta12", &eta12_checks(&eta1, &eta2))?;
    Ok((eta1, eta2))
}

/// `J = i(γ2γ3 + γ2)`, shared by the xi and eta12 sets.
pub fn xi_current() -> ComplexMatrix {
    let g = gamma();
    (&(&g.gamma2 * &g.gamma3) + &g.gamma2).scale(I)
}

pub fn build_xi_rep() -> Result<RepresentationSet, RepresentationError> {
    let (eta1, eta2) = build_eta12()?;
    finish(
        RepresentationSet {
            name: "xi".into(),
            kind: Kind::Relativistic,
            algebra: Algebra::CliffordPair,
            x1: (&eta1 + &eta2).scale_real(1.0 / SQRT_2),
            x2: (&eta1 - &eta2).scale_real(1.0 / SQRT_2),
            current_op: xi_current(),
            spin_op: sigma3_spin(),
        },
        Vec::new(),
    )
}

/// Non-relativistic set `p·u = (η1·(E − V) + η2·m)·u`, dispersion `p² = 2(E − V)m`.
pub fn build_eta12_rep() -> Result<RepresentationSet, RepresentationError> {
    let (eta1, eta2) = build_eta12()?;
    finish(
        RepresentationSet {
            name: "eta12".into(),
            kind: Kind::Nonrelativistic,
            algebra: Algebra::NilpotentPair,
            x1: eta1,
            x2: eta2,
            current_op: xi_current(),
            spin_op: sigma3_spin(),
        },
        Vec::new(),
    )
}

/// Lévy–Leblond `η_L = √2·[[0, 0], [1, 0]]` (2×2, algebra only).
pub fn build_levy_leblond_eta() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[[0.0, 0.0], [SQRT_2, 0.0]])
}

/// `η_D = (γ0 + iγ5)/√2` (algebra only).
pub fn build_dirac_eta() -> ComplexMatrix {
    let g = gamma();
    (&g.gamma0 + &g.gamma5.scale(I)).scale_real(1.0 / SQRT_2)
}

fn nilpotent_dagger_checks(label: &str, eta: &ComplexMatrix) -> Vec<IdentityCheck> {
    let id = ComplexMatrix::identity(eta.rows());
    vec![
        IdentityCheck::new(format!("{label}² = 0"), sq(eta).max_abs()),
        IdentityCheck::new(
            format!("{{{label}, {label}†}} = 2I"),
            diff(&anti(eta, &eta.dagger()), &id.scale_real(2.0)),
        ),
    ]
}

const MASS_FACTOR_NOTE: &str = "the first-order evolution form of the η1/η2 equation carries no mass \
factor on η2, while its momentum-space form is (η1·E + η2·m)u; the momentum-space form (mass included) is used";

/// Every identity relevant to one registered representation, plus notes.
///
/// Unlike the constructors this never fails: violated identities are listed
/// with their residuals.
pub fn algebra_report(name: &str) -> Result<AlgebraReport, RepresentationError> {
    let mut checks = gamma().checks();
    let mut notes = Vec::new();
    match name {
        "dirac" => {
            checks.extend(nilpotent_dagger_checks("η_D", &build_dirac_eta()));
            checks.extend(nilpotent_dagger_checks("η_L", &build_levy_leblond_eta()));
        }
        "ajaib" => {
            let (eta, eta_dagger, eta_checks) = ajaib_eta_checks();
            checks.extend(eta_checks);
            let x1 = (&eta + &eta_dagger).scale_real(1.0 / SQRT_2);
            let x2 = (&eta - &eta_dagger).scale_real(1.0 / SQRT_2);
            checks.extend(ajaib_cross_checks(&x1, &x2));
        }
        "xi" | "eta12" => {
            let (eta1, eta2) = eta12_raw();
            checks.extend(eta12_checks(&eta1, &eta2));
            notes.push(MASS_FACTOR_NOTE.to_string());
        }
        _ => {
            return Err(RepresentationError::UnknownName {
                name: name.to_string(),
                available: REGISTRY_NAMES.iter().map(|s| s.to_string()).collect(),
            })
        }
    }
    match registry_lookup(name) {
        Ok(rep) => checks.extend(representation_checks(rep)),
        Err(RepresentationError::Identity { identity, residual, .. }) => {
            checks.push(IdentityCheck::new(identity, residual));
        }
        Err(e) => return Err(e),
    }
    Ok(AlgebraReport {
        rep: name.to_string(),
        checks,
        notes,
    })
}

/// All identities across every construction, for a one-shot algebra audit.
pub fn full_algebra_suite() -> Vec<IdentityCheck> {
    let mut checks = Vec::new();
    for name in REGISTRY_NAMES {
        if let Ok(report) = algebra_report(name) {
            for check in report.checks {
                if !checks.iter().any(|c: &IdentityCheck| c.identity == check.identity) {
                    checks.push(check);
                }
            }
        }
    }
    checks
}

type Registry = Vec<Result<RepresentationSet, RepresentationError>>;

fn registry() -> &'static Registry {
    static REGISTRY: OnceLock<Registry> = OnceLock::new();
    REGISTRY.get_or_init(|| {
        vec![
            build_dirac_rep(),
            build_ajaib_rep(),
            build_xi_rep(),
            build_eta12_rep(),
        ]
    })
}

/// Validated representation by name. Construction happens once per process.
pub fn registry_lookup(name: &str) -> Result<&'static RepresentationSet, RepresentationError> {
    match REGISTRY_NAMES.iter().position(|&n| n == name) {
        Some(i) => registry()[i].as_ref().map_err(Clone::clone),
        None => Err(RepresentationError::UnknownName {
            name: name.to_string(),
            available: REGISTRY_NAMES.iter().map(|s| s.to_string()).collect(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_basis_identities() {
        for check in build_gamma_basis().checks() {
            assert!(check.passed, "{} residual {}", check.identity, check.residual);
        }
    }

    #[test]
    fn gamma5_anticommutes_with_gamma0() {
        let g = build_gamma_basis();
        assert!(anti(&g.gamma0, &g.gamma5).max_abs() <= ALGEBRA_TOL);
    }

    #[test]
    fn dirac_current_is_x1() {
        let d = build_dirac_rep().unwrap();
        assert_eq!(d.current_op, d.x1);
        assert!(diff(&sq(&d.x1), &ComplexMatrix::identity(4)) <= ALGEBRA_TOL);
    }

    #[test]
    fn ajaib_eta_is_nilpotent() {
        let (eta, eta_dagger) = build_ajaib_eta().unwrap();
        assert!(sq(&eta).max_abs() <= ALGEBRA_TOL);
        let two = ComplexMatrix::identity(4).scale_real(2.0);
        assert!(diff(&anti(&eta, &eta_dagger), &two) <= ALGEBRA_TOL);
    }

    #[test]
    fn ajaib_matches_gamma_products() {
        let a = build_ajaib_rep().unwrap();
        let g = build_gamma_basis();
        assert!(diff(&a.x1, &g.gamma2.scale(c(0.0, -1.0))) <= ALGEBRA_TOL);
        assert!(diff(&a.x2.dagger(), &-&a.x2) <= ALGEBRA_TOL);
        assert_eq!(a.current_op, a.x1);
    }

    #[test]
    fn eta12_non_relativistic_square() {
        let (e1, e2) = build_eta12().unwrap();
        let h = &e1.scale_real(2.0) + &e2;
        assert!(diff(&sq(&h), &ComplexMatrix::identity(4).scale_real(4.0)) <= ALGEBRA_TOL);
    }

    #[test]
    fn xi_current_is_hermitian() {
        let x = build_xi_rep().unwrap();
        assert!(diff(&x.current_op.dagger(), &x.current_op) <= ALGEBRA_TOL);
        assert!(diff(&sq(&x.x1), &ComplexMatrix::identity(4)) <= ALGEBRA_TOL);
        assert!(anti(&x.x1, &x.x2).max_abs() <= ALGEBRA_TOL);
    }

    #[test]
    fn levy_leblond_entries() {
        let l = build_levy_leblond_eta();
        assert_eq!(l[(1, 0)], c(SQRT_2, 0.0));
        for check in nilpotent_dagger_checks("η_L", &l) {
            assert!(check.passed);
        }
    }

    #[test]
    fn dirac_eta_relations() {
        for check in nilpotent_dagger_checks("η_D", &build_dirac_eta()) {
            assert!(check.passed, "{}", check.identity);
        }
    }

    #[test]
    fn registry_names() {
        assert_eq!(registry_lookup("dirac").unwrap().name, "dirac");
        assert_eq!(registry_lookup("ajaib").unwrap().name, "ajaib");
        match registry_lookup("xyz") {
            Err(RepresentationError::UnknownName { available, .. }) => {
                assert!(available.contains(&"xi".to_string()))
            }
            other => panic!("expected unknown-name error, got {other:?}"),
        }
    }

    #[test]
    fn reports_pass_and_carry_notes() {
        for name in REGISTRY_NAMES {
            let report = algebra_report(name).unwrap();
            assert!(report.passed(), "{name}: {:?}", report.violations());
        }
        assert!(!algebra_report("xi").unwrap().notes.is_empty());
    }

    #[test]
    fn violated_identity_is_named() {
        let mut x1 = gamma().gamma0.clone();
        x1[(0, 0)] = c(1.5, 0.0);
        let checks = pair_checks(Algebra::CliffordPair, &x1, &gamma().gamma5.scale(I));
        let err = require("broken", &checks).unwrap_err();
        match err {
            RepresentationError::Identity { identity, residual, .. } => {
                assert_eq!(identity, "x1² = I");
                assert!((residual - 1.25).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }
}
