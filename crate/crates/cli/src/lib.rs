//! Command-line front end: algebra checks, equivalence reports, step and
//! barrier sweeps, closed-form audits, large-step probes and figure data.
//!
//! Exit codes: 0 success, 2 invalid input, 3 ran but flagged, 4 I/O failure.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use repscat::representations::algebra_report;
use repscat::scattering::{audit_closed_forms, default_klein_grid, energy_grid, klein_probe, CONSERVATION_TOL};
use repscat::{
    compare_representations, registry_lookup, solve_barrier, sweep, KleinConvention, ModeOptions, ScatterResult,
    Spin, SpinBasis, StepProblem, SweepRow, REGISTRY_NAMES,
};

/// Electron rest energy in keV.
pub const ELECTRON_MASS_KEV: f64 = 511.0;

pub const CSV_HEADER: &str = "E,T_up,T_down,R_up,R_down,T_tot,R_tot,T1,T2,T_int,conservation_residual,regime";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Io { .. } => 4,
        }
    }
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

/// What a successful run produced.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Outcome {
    /// A check ran and reported violations; maps to exit code 3.
    pub flagged: bool,
    pub files: Vec<PathBuf>,
}

impl Outcome {
    pub fn exit_code(&self) -> u8 {
        if self.flagged {
            3
        } else {
            0
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "repscat", version, about = "Spin-1/2 step and barrier scattering in several matrix representations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the matrix identities of one or all representations.
    Algebra(AlgebraArgs),
    /// Search for an intertwiner between two representations.
    Equiv(EquivArgs),
    /// Step-potential sweep over energy.
    Scatter(ScanArgs),
    /// Rectangular-barrier sweep over energy.
    Barrier(BarrierArgs),
    /// Compare the published closed forms with the numeric matcher.
    Audit(AuditArgs),
    /// Totals along a growing step height and their extrapolated limits.
    Klein(KleinArgs),
    /// Write the data behind the spin-flip and interference figures.
    Figure(FigureArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Units {
    #[default]
    Natural,
    #[value(name = "keV", alias = "kev")]
    KeV,
}

impl Units {
    /// I/O energy per natural unit.
    pub fn scale(self) -> f64 {
        match self {
            Units::Natural => 1.0,
            Units::KeV => ELECTRON_MASS_KEV,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Units::Natural => "natural",
            Units::KeV => "keV",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum SpinArg {
    #[default]
    Up,
    Down,
}

impl From<SpinArg> for Spin {
    fn from(s: SpinArg) -> Self {
        match s {
            SpinArg::Up => Spin::Up,
            SpinArg::Down => Spin::Down,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum ConventionArg {
    #[default]
    Flux,
    Momentum,
}

impl From<ConventionArg> for KleinConvention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Flux => KleinConvention::Flux,
            ConventionArg::Momentum => KleinConvention::Momentum,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum BasisArg {
    #[default]
    Echelon,
    Projected,
}

impl From<BasisArg> for SpinBasis {
    fn from(b: BasisArg) -> Self {
        match b {
            BasisArg::Echelon => SpinBasis::Echelon,
            BasisArg::Projected => SpinBasis::ProjectedSpin,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Args)]
pub struct AlgebraArgs {
    /// Representation to check; all of them when omitted.
    #[arg(long)]
    pub rep: Option<String>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct EquivArgs {
    #[arg(long, default_value = "dirac")]
    pub source: String,
    #[arg(long)]
    pub target: String,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    #[arg(long, default_value = "dirac")]
    pub rep: String,
    /// Mass; defaults to 1 (natural) or 511 (keV).
    #[arg(long)]
    pub m: Option<f64>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub v0: f64,
    /// Single energy instead of a grid.
    #[arg(long, conflicts_with_all = ["emin", "emax"])]
    pub energy: Option<f64>,
    #[arg(long)]
    pub emin: Option<f64>,
    #[arg(long)]
    pub emax: Option<f64>,
    #[arg(long, default_value_t = 200)]
    pub steps: usize,
    #[arg(long, value_enum, default_value_t)]
    pub spin: SpinArg,
    #[arg(long, value_enum, default_value_t)]
    pub units: Units,
    #[arg(long = "klein-convention", value_enum, default_value_t)]
    pub klein_convention: ConventionArg,
    #[arg(long = "spin-basis", value_enum, default_value_t)]
    pub spin_basis: BasisArg,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct BarrierArgs {
    /// Barrier width in inverse energy units.
    #[arg(long)]
    pub width: f64,
    #[command(flatten)]
    pub scan: ScanArgs,
}

#[derive(Debug, Clone, Args)]
pub struct AuditArgs {
    #[arg(long, default_value_t = 1.0)]
    pub m: f64,
    #[arg(long, value_delimiter = ',', default_value = "2,1.8,3")]
    pub energies: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0.5,0.2,6,10", allow_negative_numbers = true)]
    pub heights: Vec<f64>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct KleinArgs {
    #[arg(long, default_value = "ajaib")]
    pub rep: String,
    #[arg(long, default_value_t = 2.0)]
    pub energy: f64,
    #[arg(long, default_value_t = 1.0)]
    pub m: f64,
    /// Convention for the literal-limit comparisons; the limits belong to `momentum`.
    #[arg(long = "klein-convention", value_enum, default_value_t = ConventionArg::Momentum)]
    pub klein_convention: ConventionArg,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FigureName {
    Fig2,
    Fig3,
}

#[derive(Debug, Clone, Args)]
pub struct FigureArgs {
    #[arg(value_enum)]
    pub which: FigureName,
    /// Directory receiving the data files.
    #[arg(long, default_value = "figures")]
    pub output: PathBuf,
    #[arg(long, default_value_t = 400)]
    pub steps: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

/// Metadata describing one sweep, in I/O units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepMetadata {
    pub rep: String,
    pub m: f64,
    #[serde(rename = "V0")]
    pub v0: f64,
    pub width: Option<f64>,
    pub spin: Spin,
    pub units: String,
    pub convention: KleinConvention,
    pub spin_basis: SpinBasis,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepDocument {
    pub metadata: SweepMetadata,
    pub rows: Vec<SweepRow>,
}

impl SweepDocument {
    fn flagged(&self) -> bool {
        self.rows.iter().any(|r| match &r.result {
            Some(res) => res.conservation_residual > CONSERVATION_TOL,
            None => true,
        })
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Algebra(a) => run_algebra(a),
        Command::Equiv(a) => run_equiv(a),
        Command::Scatter(a) => {
            let doc = scan(a, None)?;
            emit_document(&doc, &a.out)
        }
        Command::Barrier(a) => {
            if !(a.width.is_finite() && a.width > 0.0) {
                return Err(invalid(format!("--width must be positive, got {}", a.width)));
            }
            let doc = scan(&a.scan, Some(a.width))?;
            emit_document(&doc, &a.scan.out)
        }
        Command::Audit(a) => run_audit(a),
        Command::Klein(a) => run_klein(a),
        Command::Figure(a) => run_figure(a),
    }
}

fn check_rep(name: &str) -> Result<(), CliError> {
    registry_lookup(name).map(|_| ()).map_err(|e| {
        invalid(format!("{e}; choose one of {}", REGISTRY_NAMES.join(", ")))
    })
}

/// Runs a step (`width = None`) or barrier sweep and returns rows in I/O units.
pub fn scan(args: &ScanArgs, width: Option<f64>) -> Result<SweepDocument, CliError> {
    check_rep(&args.rep)?;
    let scale = args.units.scale();
    let m = args.m.unwrap_or(scale);
    if !(m.is_finite() && m >= 0.0) {
        return Err(invalid(format!("--m must be finite and non-negative, got {m}")));
    }
    if !args.v0.is_finite() {
        return Err(invalid("--v0 must be finite"));
    }
    let energies = match (args.energy, args.emin, args.emax) {
        (Some(e), _, _) => vec![e],
        (None, Some(lo), Some(hi)) => {
            if args.steps < 2 {
                return Err(invalid(format!("--steps must be at least 2 for a sweep, got {}", args.steps)));
            }
            if !(lo.is_finite() && hi.is_finite() && hi > lo) {
                return Err(invalid(format!("need finite --emin < --emax, got {lo} and {hi}")));
            }
            energy_grid(lo, hi, args.steps)
        }
        _ => return Err(invalid("give either --energy or both --emin and --emax")),
    };
    if !(energies[0].is_finite() && energies[0] > m) {
        return Err(invalid(format!(
            "energies must exceed m = {m} {}; lowest is {}",
            args.units.as_str(),
            energies[0]
        )));
    }

    let spin: Spin = args.spin.into();
    let options = ModeOptions {
        convention: args.klein_convention.into(),
        spin_basis: args.spin_basis.into(),
    };
    let natural: Vec<f64> = energies.iter().map(|e| e / scale).collect();
    let (m_nat, v0_nat) = (m / scale, args.v0 / scale);
    let rows = match width {
        None => sweep(&args.rep, m_nat, v0_nat, &natural, spin, options).map_err(|e| invalid(e.to_string()))?,
        Some(w) => natural
            .iter()
            .map(|&e| {
                let problem = StepProblem::new(&args.rep, e, m_nat, v0_nat, spin).with_options(options);
                let (result, error) = match solve_barrier(&problem, w * scale) {
                    Ok(r) => (Some(r), None),
                    Err(err) => (None, Some(err.to_string())),
                };
                SweepRow {
                    requested_energy: e,
                    energy: e,
                    result,
                    error,
                }
            })
            .collect(),
    };

    let rows = rows
        .into_iter()
        .zip(&energies)
        .map(|(row, &requested)| {
            let energy = if row.energy == row.requested_energy {
                requested
            } else {
                row.energy * scale
            };
            SweepRow {
                requested_energy: requested,
                energy,
                result: row.result.map(|r| ScatterResult {
                    energy,
                    m,
                    v0: args.v0,
                    width,
                    ..r
                }),
                error: row.error,
            }
        })
        .collect();

    Ok(SweepDocument {
        metadata: SweepMetadata {
            rep: args.rep.clone(),
            m,
            v0: args.v0,
            width,
            spin,
            units: args.units.as_str().to_string(),
            convention: options.convention,
            spin_basis: options.spin_basis,
        },
        rows,
    })
}

/// Decimal rendering with 12 significant digits, never in exponent form.
pub fn format_decimal(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0.00000000000".into();
    }
    let sci = format!("{:.11e}", x.abs());
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let body = if exp >= 11 {
        format!("{digits}{}", "0".repeat((exp - 11) as usize))
    } else if exp >= 0 {
        let split = (exp + 1) as usize;
        format!("{}.{}", &digits[..split], &digits[split..])
    } else {
        format!("0.{}{digits}", "0".repeat((-exp - 1) as usize))
    };
    if x < 0.0 {
        format!("-{body}")
    } else {
        body
    }
}

/// CSV text for a sweep: one metadata comment, the header, one row per energy.
///
/// Failed rows carry `NaN` values and the regime `error`.
pub fn emit_csv(doc: &SweepDocument) -> String {
    let meta = &doc.metadata;
    let mut out = format!(
        "# rep={} m={} V0={} spin={} units={} convention={}",
        meta.rep,
        meta.m,
        meta.v0,
        meta.spin.as_str(),
        meta.units,
        meta.convention.as_str()
    );
    if let Some(w) = meta.width {
        let _ = write!(out, " width={w}");
    }
    out.push('\n');
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in &doc.rows {
        out.push_str(&format_decimal(row.energy));
        match &row.result {
            Some(r) => {
                for v in [
                    r.trans_up,
                    r.trans_down,
                    r.refl_up,
                    r.refl_down,
                    r.t_tot,
                    r.r_tot,
                    r.t1,
                    r.t2,
                    r.t_int,
                    r.conservation_residual,
                ] {
                    out.push(',');
                    out.push_str(&format_decimal(v));
                }
                out.push(',');
                out.push_str(r.regime.as_str());
            }
            None => {
                out.push_str(&",NaN".repeat(10));
                out.push_str(",error");
            }
        }
        out.push('\n');
    }
    out
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn write_output(path: Option<&Path>, content: &str) -> Result<Vec<PathBuf>, CliError> {
    match path {
        Some(p) => {
            fs::write(p, content).map_err(|source| CliError::Io {
                path: p.to_path_buf(),
                source,
            })?;
            Ok(vec![p.to_path_buf()])
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(content.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })?;
            Ok(Vec::new())
        }
    }
}

fn emit_document(doc: &SweepDocument, out: &OutputArgs) -> Result<Outcome, CliError> {
    let content = match out.format.unwrap_or(Format::Csv) {
        Format::Csv => emit_csv(doc),
        Format::Json => to_json(doc),
    };
    Ok(Outcome {
        flagged: doc.flagged(),
        files: write_output(out.output.as_deref(), &content)?,
    })
}

fn run_algebra(args: &AlgebraArgs) -> Result<Outcome, CliError> {
    let names: Vec<&str> = match &args.rep {
        Some(name) => vec![name.as_str()],
        None => REGISTRY_NAMES.to_vec(),
    };
    let reports = names
        .iter()
        .map(|n| algebra_report(n).map_err(|e| invalid(e.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    let flagged = reports.iter().any(|r| !r.passed());
    let content = match args.out.format.unwrap_or(Format::Json) {
        Format::Json if reports.len() == 1 => to_json(&reports[0]),
        Format::Json => to_json(&reports),
        Format::Csv => {
            let mut s = String::from("rep,identity,residual,tolerance,passed\n");
            for r in &reports {
                for c in &r.checks {
                    let _ = writeln!(
                        s,
                        "{},\"{}\",{:e},{:e},{}",
                        r.rep,
                        c.identity.replace('"', "\"\""),
                        c.residual,
                        c.tolerance,
                        c.passed
                    );
                }
            }
            s
        }
    };
    Ok(Outcome {
        flagged,
        files: write_output(args.out.output.as_deref(), &content)?,
    })
}

fn run_equiv(args: &EquivArgs) -> Result<Outcome, CliError> {
    if args.out.format == Some(Format::Csv) {
        return Err(invalid("equiv writes JSON only"));
    }
    let report = compare_representations(&args.source, &args.target).map_err(|e| invalid(e.to_string()))?;
    Ok(Outcome {
        flagged: false,
        files: write_output(args.out.output.as_deref(), &to_json(&report))?,
    })
}

fn run_audit(args: &AuditArgs) -> Result<Outcome, CliError> {
    if args.energies.is_empty() || args.heights.is_empty() {
        return Err(invalid("--energies and --heights need at least one value each"));
    }
    let points: Vec<(f64, f64, f64)> = args
        .energies
        .iter()
        .flat_map(|&e| args.heights.iter().map(move |&v| (e, args.m, v)))
        .collect();
    let report = audit_closed_forms(&points).map_err(|e| invalid(e.to_string()))?;
    let content = match args.out.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&report),
        Format::Csv => {
            let mut s = format!("# flags={}\n", report.flags.join(";"));
            s.push_str("E,m,V0,quantity,closed_form,numeric,discrepancy\n");
            for row in &report.rows {
                for entry in &row.entries {
                    let opt = |v: Option<f64>| v.map(format_decimal).unwrap_or_else(|| "NaN".into());
                    let _ = writeln!(
                        s,
                        "{},{},{},{},{},{},{}",
                        format_decimal(row.point.energy),
                        format_decimal(row.point.m),
                        format_decimal(row.point.v0),
                        entry.quantity,
                        opt(entry.closed_form),
                        format_decimal(entry.numeric),
                        opt(entry.discrepancy)
                    );
                }
            }
            s
        }
    };
    Ok(Outcome {
        flagged: !report.flags.is_empty(),
        files: write_output(args.out.output.as_deref(), &content)?,
    })
}

fn run_klein(args: &KleinArgs) -> Result<Outcome, CliError> {
    check_rep(&args.rep)?;
    let report = klein_probe(
        &args.rep,
        args.energy,
        args.m,
        &default_klein_grid(args.m),
        args.klein_convention.into(),
    )
    .map_err(|e| invalid(e.to_string()))?;
    let content = match args.out.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&report),
        Format::Csv => {
            let mut s = format!(
                "# rep={} E={} m={} convention={} T_limit_literal={} R_limit_literal={} flags={}\n",
                report.rep,
                report.energy,
                report.m,
                report.convention.as_str(),
                format_decimal(report.t_limit_literal),
                format_decimal(report.r_limit_literal),
                report.flags.join(";")
            );
            s.push_str("V0,T_flux,R_flux,T_momentum,R_momentum,T_cf,R_cf\n");
            for p in &report.samples {
                let cells: Vec<String> = [
                    p.v0,
                    p.t_flux,
                    p.r_flux,
                    p.t_momentum,
                    p.r_momentum,
                    p.t_closed_form,
                    p.r_closed_form,
                ]
                .iter()
                .map(|&v| format_decimal(v))
                .collect();
                s.push_str(&cells.join(","));
                s.push('\n');
            }
            s
        }
    };
    Ok(Outcome {
        flagged: !report.flags.is_empty(),
        files: write_output(args.out.output.as_deref(), &content)?,
    })
}

fn figure_scan(rep: &str, m: f64, v0: f64, emin: f64, emax: f64, steps: usize, units: Units) -> ScanArgs {
    ScanArgs {
        rep: rep.into(),
        m: Some(m),
        v0,
        energy: None,
        emin: Some(emin),
        emax: Some(emax),
        steps,
        spin: SpinArg::Up,
        units,
        klein_convention: ConventionArg::Flux,
        spin_basis: BasisArg::Echelon,
        out: OutputArgs {
            output: None,
            format: None,
        },
    }
}

fn run_figure(args: &FigureArgs) -> Result<Outcome, CliError> {
    fs::create_dir_all(&args.output).map_err(|source| CliError::Io {
        path: args.output.clone(),
        source,
    })?;
    let ext = match args.format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    let jobs: Vec<(String, ScanArgs)> = match args.which {
        FigureName::Fig2 => vec![(
            "fig2".into(),
            figure_scan("ajaib", ELECTRON_MASS_KEV, 1.0, 512.01, 600.0, args.steps, Units::KeV),
        )],
        FigureName::Fig3 => {
            // E/(V0 + m) from 1.05 to 10 with m = 1, V0 = 2
            let scan = figure_scan("xi", 1.0, 2.0, 3.15, 30.0, args.steps, Units::Natural);
            vec![
                ("fig3_decomposition".into(), scan.clone()),
                ("fig3_conservation".into(), scan),
            ]
        }
    };
    let mut outcome = Outcome::default();
    for (stem, scan_args) in jobs {
        let doc = scan(&scan_args, None)?;
        let path = args.output.join(format!("{stem}.{ext}"));
        let content = match args.format {
            Format::Csv => emit_csv(&doc),
            Format::Json => to_json(&doc),
        };
        outcome.flagged |= doc.flagged();
        outcome.files.extend(write_output(Some(&path), &content)?);
    }
    Ok(outcome)
}
