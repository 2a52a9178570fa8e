//! Front end for `conefix-core`: argument handling, command dispatch and
//! report rendering. The binary in `main.rs` is a thin wrapper over [`run`].

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use conefix_core::classes::{certify, fit_min_ab, CertificateStatus};
use conefix_core::cone_space::check_metric_axioms;
use conefix_core::mappings::{find, labels, manifest, FeasibleRegion, Regime};
use conefix_core::solver::{
    approach_sequence, continuity_diagnostics, picard_solve, verify_uniqueness,
};
use conefix_core::{CorpusEntry64, Error};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Iteration cap for every solve.
pub const DEFAULT_MAX_ITER: usize = 1000;
/// Length of the default approach sequence for `diagnostics`.
pub const APPROACH_LENGTH: usize = 40;
/// Points of the domain grid used as default uniqueness seeds.
pub const DEFAULT_SEEDS: usize = 5;
/// Agreement required between a solve and a known fixed point in `report-all`.
const FIXED_POINT_MATCH: f64 = 1e-8;
/// Agreement required between a fitted objective and a known minimum.
const OBJECTIVE_MATCH: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Axioms,
    Certify,
    Fit,
    Solve,
    Uniqueness,
    Diagnostics,
    ReportAll,
    Manifest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Human,
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub specimen: Option<String>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub x0: Option<f64>,
    /// Probe point for `diagnostics`; defaults to the specimen's known fixed point.
    pub p: Option<f64>,
    /// Starting points for `uniqueness`; defaults to a grid over the domain.
    pub seeds: Option<Vec<f64>>,
    pub tol: f64,
    pub samples: usize,
    pub seed: u64,
    pub max_iter: usize,
    pub output: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            specimen: None,
            a: None,
            b: None,
            x0: None,
            p: None,
            seeds: None,
            tol: 1e-10,
            samples: 2000,
            seed: 42,
            max_iter: DEFAULT_MAX_ITER,
            output: None,
            format: Format::Human,
        }
    }

    pub fn specimen(mut self, label: &str) -> Self {
        self.specimen = Some(label.to_string());
        self
    }

    pub fn ab(mut self, a: f64, b: f64) -> Self {
        self.a = Some(a);
        self.b = Some(b);
        self
    }

    pub fn format(mut self, format: Format) -> Self {
        self.format = format;
        self
    }

    fn validate(&self) -> Result<(), String> {
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(format!("--tol must be positive, got {}", self.tol));
        }
        if self.samples == 0 {
            return Err("--samples must be at least 1".into());
        }
        if self.max_iter == 0 {
            return Err("--max-iter must be at least 1".into());
        }
        if self.format == Format::Csv
            && !matches!(self.command, Command::Solve | Command::ReportAll)
        {
            return Err("csv output is only available for solve and report-all".into());
        }
        Ok(())
    }
}

/// Exit code, the rendered report (possibly empty) and an optional message
/// for stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutcome {
    pub code: i32,
    pub report: String,
    pub message: Option<String>,
}

impl RunOutcome {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            report: String::new(),
            message: Some(message.into()),
        }
    }
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::UnknownSpecimen { .. }
            | Error::InvalidArgument(_)
            | Error::NegativeCoefficient { .. }
            | Error::HypothesisViolated { .. }
            | Error::PointOutsideDomain { .. }
            | Error::NoSamples
            | Error::EmptyDomain { .. }
            | Error::TraceTooShort { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

/// Runs one command. When `config.output` is set the report is written there
/// and the returned report is still filled in; a write failure exits 2.
pub fn run(config: &RunConfig) -> RunOutcome {
    if let Err(msg) = config.validate() {
        return RunOutcome::usage(msg);
    }
    let (passed, report) = match dispatch(config) {
        Ok(result) => result,
        Err(Failure::Usage(msg)) => return RunOutcome::usage(msg),
        Err(Failure::Runtime(msg)) => {
            return RunOutcome {
                code: EXIT_FAIL,
                report: String::new(),
                message: Some(msg),
            }
        }
    };
    if let Some(path) = &config.output {
        if let Err(e) = std::fs::write(path, &report) {
            return RunOutcome {
                code: EXIT_USAGE,
                report,
                message: Some(format!("cannot write {}: {e}", path.display())),
            };
        }
    }
    RunOutcome {
        code: if passed { EXIT_PASS } else { EXIT_FAIL },
        report,
        message: None,
    }
}

fn dispatch(config: &RunConfig) -> Result<(bool, String), Failure> {
    match config.command {
        Command::ReportAll => {
            let report = report_all_with(config.seed, config.samples, config.tol);
            let text = match config.format {
                Format::Human => report.to_human(),
                Format::Json => to_json(&report),
                Format::Csv => report.to_csv(),
            };
            Ok((report.all_pass, text))
        }
        Command::Manifest => {
            let entries = manifest();
            let text = match config.format {
                Format::Json => to_json(&entries),
                _ => entries.iter().fold(String::new(), |mut s, e| {
                    let _ = writeln!(
                        s,
                        "{:<9} M={} T:{}  {}",
                        e.label,
                        e.domain,
                        if e.t_is_identity { "id" } else { "non-id" },
                        e.description
                    );
                    s
                }),
            };
            Ok((true, text))
        }
        _ => {
            let label = config
                .specimen
                .as_deref()
                .ok_or_else(|| Failure::Usage("--specimen is required".into()))?;
            let entry: CorpusEntry64 = find(label)?;
            specimen_command(config, &entry)
        }
    }
}

fn require_ab(config: &RunConfig) -> Result<(f64, f64), Failure> {
    match (config.a, config.b) {
        (Some(a), Some(b)) => Ok((a, b)),
        _ => Err(Failure::Usage(format!(
            "{:?} needs both --a and --b",
            config.command
        ))),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    text
}

fn specimen_command(config: &RunConfig, entry: &CorpusEntry64) -> Result<(bool, String), Failure> {
    let pair = &entry.pair;
    let json = config.format == Format::Json;
    match config.command {
        Command::Axioms => {
            let report = check_metric_axioms(&pair.space, config.samples, config.seed)?;
            let text = if json {
                to_json(&report)
            } else {
                let mut s = format!("axioms for {} ({})\n", entry.label(), report.space);
                for (name, o) in [
                    ("positivity", &report.positivity),
                    ("symmetry", &report.symmetry),
                    ("triangle", &report.triangle),
                ] {
                    let _ = write!(
                        s,
                        "  {name:<10} {}",
                        if o.holds { "holds" } else { "FAILS" }
                    );
                    if !o.holds {
                        let _ = write!(s, "  worst {:e} at {:?}", o.worst_violation, o.witness);
                    }
                    s.push('\n');
                }
                let _ = writeln!(
                    s,
                    "  {} pairs, {} triples, seed {}",
                    report.pairs_checked, report.triples_checked, report.seed
                );
                s
            };
            Ok((report.all_hold(), text))
        }
        Command::Certify => {
            let (a, b) = require_ab(config)?;
            let cert = certify(pair, a, b, config.samples, config.seed)?;
            let text = if json {
                to_json(&cert)
            } else {
                let mut s = format!(
                    "{} (a,b)=({a},{b}): {:?}, worst residual {:e} over {} pairs\n",
                    entry.label(),
                    cert.status,
                    cert.worst_residual,
                    cert.samples_used
                );
                for w in &cert.witnesses {
                    let _ = writeln!(
                        s,
                        "  witness ({:?}, {:?}) residual {:e}",
                        w.pair.0, w.pair.1, w.residual
                    );
                }
                s
            };
            Ok((cert.is_satisfied(), text))
        }
        Command::Fit => {
            let fit = fit_min_ab(pair, config.samples, config.seed)?;
            let text = if json {
                to_json(&fit)
            } else {
                match (fit.argmin, fit.objective) {
                    (Some((a, b)), Some(obj)) => format!(
                        "{}: argmin ({:?}, {:?}), a+2b = {:?}; {}\n",
                        entry.label(),
                        tidy(a),
                        tidy(b),
                        tidy(obj),
                        if fit.theorem_applies() {
                            "a+2b < 1, fixed point theorem applies"
                        } else {
                            "a+2b >= 1, fixed point theorem does not apply"
                        }
                    ),
                    _ => format!(
                        "{}: infeasible, pair {:?} cannot be met by any (a,b)\n",
                        entry.label(),
                        fit.infeasible_witness
                    ),
                }
            };
            Ok((fit.feasible, text))
        }
        Command::Solve => {
            let (a, b) = require_ab(config)?;
            let x0 = config.x0.unwrap_or(entry.default_x0);
            let result = picard_solve(pair, a, b, x0, config.tol, config.max_iter)?;
            let text = match config.format {
                Format::Json => to_json(&result),
                Format::Csv => result.trace.to_csv(),
                Format::Human => format!(
                    "{} from x0={x0}: {:?} after {} iterations, point {:?}, residual {:e}, lambda {}\n",
                    entry.label(),
                    result.trace.status,
                    result.iterations,
                    result.point,
                    result.residual,
                    result.trace.lambda
                ),
            };
            Ok((result.converged(), text))
        }
        Command::Uniqueness => {
            let (a, b) = require_ab(config)?;
            let seeds = config
                .seeds
                .clone()
                .unwrap_or_else(|| pair.domain().grid(DEFAULT_SEEDS));
            let report = verify_uniqueness(pair, a, b, &seeds, config.tol, config.max_iter)?;
            let text = if json {
                to_json(&report)
            } else {
                let mut s = format!(
                    "{}: {} (max pairwise distance {:e}, threshold {:e})\n",
                    entry.label(),
                    if report.unique {
                        "unique"
                    } else {
                        "NOT unique"
                    },
                    report.max_pairwise_distance,
                    report.threshold
                );
                for o in &report.outcomes {
                    let _ = writeln!(
                        s,
                        "  x0={:?} -> {:?} ({:?}, {} iterations)",
                        o.x0, o.point, o.status, o.iterations
                    );
                }
                s
            };
            Ok((report.unique, text))
        }
        Command::Diagnostics => {
            let (a, b) = require_ab(config)?;
            let p = config.p.or(entry.expected.fixed_point).ok_or_else(|| {
                Failure::Usage(format!(
                    "{} has no known fixed point; pass --p",
                    entry.label()
                ))
            })?;
            let sequence = approach_sequence(pair, p, APPROACH_LENGTH);
            let report = continuity_diagnostics(pair, a, b, p, &sequence, config.tol)?;
            let text = if json {
                to_json(&report)
            } else {
                let mark = |ok: bool| if ok { "pass" } else { "FAIL" };
                format!(
                    "{} at p={p}:\n  d(Tx_k, TSx_k) -> 0   {} (last {:e})\n  p fixed            {} (residual {:e}, |Sp-p| {:e})\n  TSx_k -> TSp        {} (last {:e})\n",
                    entry.label(),
                    mark(report.displacement_vanishes),
                    report.displacement_norms.last().copied().unwrap_or(f64::NAN),
                    mark(report.p_is_fixed),
                    report.fixed_point_residual,
                    report.point_gap,
                    mark(report.s_continuous_at_p),
                    report.image_gap_norms.last().copied().unwrap_or(f64::NAN),
                )
            };
            Ok((report.all_pass(), text))
        }
        Command::ReportAll | Command::Manifest => unreachable!("handled in dispatch"),
    }
}

/// Rounds to nine decimals for display so fitted values print as `0.5`, not
/// `0.49999999999999994`.
fn tidy(x: f64) -> f64 {
    (x * 1e9).round() / 1e9 + 0.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Pass,
    ExpectedViolation,
    Fail,
}

impl Verdict {
    pub fn passed(self) -> bool {
        self != Verdict::Fail
    }

    fn text(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::ExpectedViolation => "PASS (expected violation)",
            Verdict::Fail => "FAIL",
        }
    }
}

/// One corpus entry's line in the aggregate report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub label: String,
    pub t_is_identity: bool,
    pub regime: Option<Regime>,
    pub fitted_ab: Option<(f64, f64)>,
    pub objective: Option<f64>,
    pub theorem_applies: bool,
    /// Certificate of the fitted constants.
    pub certificate: Option<CertificateStatus>,
    /// Certificate of the constants the specimen is known to satisfy.
    pub declared_certificate: Option<CertificateStatus>,
    pub fixed_point: Option<f64>,
    pub iterations: Option<usize>,
    pub verdict: Verdict,
    /// Why the row failed, if it did.
    pub notes: Vec<String>,
}

impl ReportRow {
    fn t_column(&self) -> &'static str {
        if self.t_is_identity {
            "T=id"
        } else {
            "T≠id"
        }
    }

    fn constants(&self) -> String {
        let Some((a, b)) = self.fitted_ab else {
            return "no feasible (a,b)".into();
        };
        let (a, b) = (tidy(a), tidy(b));
        match (self.t_is_identity, self.regime) {
            (true, Some(Regime::Banach)) => format!("b=0, a={a}"),
            (true, Some(Regime::Kannan)) => format!("a=0, b={b}"),
            _ => format!("(a,b)=({a},{b})"),
        }
    }

    pub fn human(&self) -> String {
        if !self.theorem_applies {
            let mut line = format!(
                "{} | {} | infeasible for a+2b<1 | {}",
                self.label,
                self.t_column(),
                self.verdict.text()
            );
            if let Some(obj) = self.objective {
                let _ = write!(line, " | min a+2b = {:?}", tidy(obj));
            }
            return line;
        }
        let point = match self.fixed_point {
            Some(p) => format!("fixed point {:?}", tidy(p)),
            None => "no fixed point".into(),
        };
        format!(
            "{} | {} | {} | {} | {}",
            self.label,
            self.t_column(),
            self.constants(),
            point,
            self.verdict.text()
        )
    }
}

/// A cell of the `(T = id vs T ≠ id) × regime` matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixCell {
    pub t_is_identity: bool,
    pub regime: Regime,
    pub labels: Vec<String>,
    pub all_pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateReport {
    pub seed: u64,
    pub samples: usize,
    pub tol: f64,
    pub rows: Vec<ReportRow>,
    pub matrix: Vec<MatrixCell>,
    pub all_pass: bool,
}

const REGIMES: [Regime; 3] = [Regime::General, Regime::Kannan, Regime::Banach];

impl AggregateReport {
    pub fn row(&self, label: &str) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.label == label)
    }

    pub fn to_human(&self) -> String {
        let mut s = format!(
            "corpus report, seed {}, {} samples, tol {:e}\n\n",
            self.seed, self.samples, self.tol
        );
        let _ = writeln!(s, "{:<20} | {:<28} | {:<28}", "regime", "T=id", "T≠id");
        for regime in REGIMES {
            let cell = |t_id: bool| {
                self.matrix
                    .iter()
                    .find(|c| c.t_is_identity == t_id && c.regime == regime)
                    .map(|c| {
                        format!(
                            "{} {}",
                            c.labels.join(","),
                            if c.all_pass { "PASS" } else { "FAIL" }
                        )
                    })
                    .unwrap_or_else(|| "-".into())
            };
            let _ = writeln!(
                s,
                "{:<20} | {:<28} | {:<28}",
                regime.column(),
                cell(true),
                cell(false)
            );
        }
        s.push('\n');
        for row in &self.rows {
            s.push_str(&row.human());
            s.push('\n');
            for note in &row.notes {
                let _ = writeln!(s, "    {note}");
            }
        }
        let _ = writeln!(
            s,
            "\n{}",
            if self.all_pass {
                "ALL PASS"
            } else {
                "SOME ROWS FAILED"
            }
        );
        s
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from(
            "label,t_is_identity,regime,a,b,objective,certificate,fixed_point,iterations,verdict\n",
        );
        let opt = |v: Option<f64>| v.map(|x| format!("{x:.16e}")).unwrap_or_default();
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{},{},{:?}",
                r.label,
                r.t_is_identity,
                r.regime.map(|g| format!("{g:?}")).unwrap_or_default(),
                opt(r.fitted_ab.map(|p| p.0)),
                opt(r.fitted_ab.map(|p| p.1)),
                opt(r.objective),
                r.certificate.map(|c| format!("{c:?}")).unwrap_or_default(),
                opt(r.fixed_point),
                r.iterations.map(|n| n.to_string()).unwrap_or_default(),
                r.verdict
            );
        }
        s
    }
}

/// [`report_all_with`] at the default sample count and tolerance.
pub fn report_all(seed: u64) -> AggregateReport {
    let defaults = RunConfig::new(Command::ReportAll);
    report_all_with(seed, defaults.samples, defaults.tol)
}

/// Fits, certifies and (where the fit allows) solves every corpus entry.
/// Entries run in parallel; rows come back sorted by label.
pub fn report_all_with(seed: u64, samples: usize, tol: f64) -> AggregateReport {
    let mut rows: Vec<ReportRow> = labels()
        .par_iter()
        .map(|label| {
            let entry: CorpusEntry64 = find(label).expect("corpus labels resolve");
            evaluate(&entry, seed, samples, tol)
        })
        .collect();
    rows.sort_by(|l, r| l.label.cmp(&r.label));

    let mut matrix = Vec::new();
    for t_is_identity in [true, false] {
        for regime in REGIMES {
            let members: Vec<&ReportRow> = rows
                .iter()
                .filter(|r| r.t_is_identity == t_is_identity && r.regime == Some(regime))
                .collect();
            if members.is_empty() {
                continue;
            }
            matrix.push(MatrixCell {
                t_is_identity,
                regime,
                labels: members.iter().map(|r| r.label.clone()).collect(),
                all_pass: members.iter().all(|r| r.verdict.passed()),
            });
        }
    }
    let all_pass = rows.iter().all(|r| r.verdict.passed());
    AggregateReport {
        seed,
        samples,
        tol,
        rows,
        matrix,
        all_pass,
    }
}

fn evaluate(entry: &CorpusEntry64, seed: u64, samples: usize, tol: f64) -> ReportRow {
    let pair = &entry.pair;
    let mut row = ReportRow {
        label: entry.label().to_string(),
        t_is_identity: pair.t_is_identity,
        regime: None,
        fitted_ab: None,
        objective: None,
        theorem_applies: false,
        certificate: None,
        declared_certificate: None,
        fixed_point: None,
        iterations: None,
        verdict: Verdict::Fail,
        notes: Vec::new(),
    };

    let fit = match fit_min_ab(pair, samples, seed) {
        Ok(fit) => fit,
        Err(e) => {
            row.notes.push(format!("fit failed: {e}"));
            return row;
        }
    };
    row.fitted_ab = fit.argmin;
    row.objective = fit.objective;
    row.theorem_applies = fit.theorem_applies();
    row.regime = fit.argmin.map(|(a, b)| Regime::classify(tidy(a), tidy(b)));

    if let (Some(expected), Some(obj)) = (entry.expected.min_a_plus_2b, fit.objective) {
        if (obj - expected).abs() > OBJECTIVE_MATCH {
            row.notes
                .push(format!("min a+2b {obj} differs from expected {expected}"));
        }
    }

    match entry.expected.feasible_ab {
        FeasibleRegion::NoneBelowOne => {
            if row.theorem_applies {
                row.notes
                    .push("fit found a+2b < 1 for a specimen expected outside the class".into());
            } else {
                row.verdict = if row.notes.is_empty() {
                    Verdict::ExpectedViolation
                } else {
                    Verdict::Fail
                };
            }
            return row;
        }
        FeasibleRegion::Contains { a, b } => match certify(pair, a, b, samples, seed) {
            Ok(cert) => {
                if !cert.is_satisfied() {
                    row.notes
                        .push(format!("declared constants ({a},{b}) violated"));
                }
                row.declared_certificate = Some(cert.status);
            }
            Err(e) => row
                .notes
                .push(format!("certify of declared constants failed: {e}")),
        },
    }

    let Some((a, b)) = fit.argmin.filter(|_| row.theorem_applies) else {
        row.notes.push("fit does not reach a+2b < 1".into());
        return row;
    };
    match certify(pair, a, b, samples, seed) {
        Ok(cert) => {
            if !cert.is_satisfied() {
                row.notes.push("fitted constants violated".into());
            }
            row.certificate = Some(cert.status);
        }
        Err(e) => row.notes.push(format!("certify failed: {e}")),
    }
    match picard_solve(pair, a, b, entry.default_x0, tol, DEFAULT_MAX_ITER) {
        Ok(result) => {
            row.fixed_point = Some(result.point);
            row.iterations = Some(result.iterations);
            if !result.converged() {
                row.notes
                    .push(format!("solve ended {:?}", result.trace.status));
            }
            if let Some(expected) = entry.expected.fixed_point {
                if (result.point - expected).abs() > FIXED_POINT_MATCH {
                    row.notes.push(format!(
                        "fixed point {} differs from {expected}",
                        result.point
                    ));
                }
            }
        }
        Err(e) => row.notes.push(format!("solve failed: {e}")),
    }
    if row.notes.is_empty() {
        row.verdict = Verdict::Pass;
    }
    row
}

/// Flags shared by every subcommand.
#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Corpus label (see `conefix manifest`).
    #[arg(long, global = true)]
    pub specimen: Option<String>,
    #[arg(long, global = true)]
    pub a: Option<f64>,
    #[arg(long, global = true)]
    pub b: Option<f64>,
    /// Starting point for `solve`.
    #[arg(long, global = true)]
    pub x0: Option<f64>,
    /// Probe point for `diagnostics`.
    #[arg(long, global = true)]
    pub p: Option<f64>,
    /// Comma-separated starting points for `uniqueness`.
    #[arg(long, global = true, value_delimiter = ',')]
    pub seeds: Option<Vec<f64>>,
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, global = true, default_value_t = 2000)]
    pub samples: usize,
    #[arg(long, global = true, env = "CONEFIX_SEED", default_value_t = 42)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_ITER)]
    pub max_iter: usize,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    pub format: Format,
}

#[derive(Debug, Parser)]
#[command(name = "conefix", version, about = "Cone metric fixed point toolkit")]
#[command(allow_negative_numbers = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Sub,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum Sub {
    /// Check positivity, symmetry and the triangle inequality of the metric.
    Axioms,
    /// Test membership of the class for given (a, b).
    Certify,
    /// Minimise a + 2b over the sampled constraints.
    Fit,
    /// Picard iteration from --x0.
    Solve,
    /// Solve from several starting points and compare.
    Uniqueness,
    /// Continuity checks along a sequence approaching --p.
    Diagnostics,
    /// Fit, certify and solve every corpus entry.
    ReportAll,
    /// List the corpus.
    Manifest,
}

impl From<Cli> for RunConfig {
    fn from(cli: Cli) -> Self {
        let command = match cli.command {
            Sub::Axioms => Command::Axioms,
            Sub::Certify => Command::Certify,
            Sub::Fit => Command::Fit,
            Sub::Solve => Command::Solve,
            Sub::Uniqueness => Command::Uniqueness,
            Sub::Diagnostics => Command::Diagnostics,
            Sub::ReportAll => Command::ReportAll,
            Sub::Manifest => Command::Manifest,
        };
        let c = cli.common;
        RunConfig {
            command,
            specimen: c.specimen,
            a: c.a,
            b: c.b,
            x0: c.x0,
            p: c.p,
            seeds: c.seeds,
            tol: c.tol,
            samples: c.samples,
            seed: c.seed,
            max_iter: c.max_iter,
            output: c.output,
            format: c.format,
        }
    }
}

/// Parses command-line arguments (including the program name) into a config.
pub fn parse_args<I, T>(args: I) -> Result<RunConfig, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    Cli::try_parse_from(args).map(RunConfig::from)
}
