//! `nds`: command-line access to length sets, the `μ` curve, certificates and
//! scans.
//!
//! Exit codes: 0 success, 1 runtime failure (including a failed golden
//! comparison in `example7`), 2 invalid input, 3 refuted certificate.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use nds_core::mu::{self, MuError};
use nds_core::norm::{NormError, NormParameter};
use nds_core::perspicacity::{
    build_certificate, classify_t, special_t, Certificate, CertificateError, CertificateStatus, Classification,
    Fraction, RationalR0Witness,
};
use nds_core::real;
use nds_core::scan::{
    density_report, verify_certificate_with, write_gaps_csv, write_histogram_csv, ScanConfig, ScanError, ScanOutcome,
    Scanner,
};
use nds_core::semigroup::{GapRecord, NumericalSemigroup, SemigroupError};

#[derive(Parser)]
#[command(name = "nds", version, about = "Delta sets of two-generator semigroups under t-norm lengths")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// μₜ(r) and its derivatives.
    Mu {
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        t: TArg,
        #[arg(long)]
        r: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// r₀(t) and the slope P(t) there.
    R0 {
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        t: TArg,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Minimum, r₀, slope, curvature bound and classification at t.
    Profile {
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        t: TArg,
        #[command(flatten)]
        witness: WitnessArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Build an unverified certificate.
    Certify {
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        t: TArg,
        #[command(flatten)]
        witness: WitnessArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Build (or load with --cert) a certificate and check it by brute force.
    Verify {
        /// Certificate JSON produced by `certify`.
        #[arg(long, conflicts_with_all = ["a1", "a2", "t"])]
        cert: Option<PathBuf>,
        #[arg(long, required_unless_present = "cert")]
        a1: Option<u64>,
        #[arg(long, required_unless_present = "cert")]
        a2: Option<u64>,
        #[arg(long, required_unless_present = "cert")]
        t: Option<TArg>,
        #[command(flatten)]
        witness: WitnessArgs,
        /// Only scan x ≤ 50000.
        #[arg(long)]
        smoke: bool,
        /// Only scan x ≤ this value.
        #[arg(long)]
        x_max: Option<u64>,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Scan Δₜ(x) over a range; CSV output lists the gaps inside --target.
    Scan {
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        t: TArg,
        #[arg(long, default_value_t = 1)]
        x_min: u64,
        #[arg(long)]
        x_max: u64,
        /// Open interval LO,HI.
        #[arg(long, value_parser = parse_target)]
        target: Option<(f64, f64)>,
        #[arg(long)]
        bin_width: Option<f64>,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Gap histogram over [0, a2] and its coverage.
    Density {
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        t: TArg,
        #[arg(long)]
        x_max: u64,
        #[arg(long)]
        bin_width: f64,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// The worked ⟨2,7⟩ example: certificate with k = 1.5, verification and
    /// comparison with the published values.
    Example7 {
        /// Only scan x ≤ 50000.
        #[arg(long)]
        smoke: bool,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Smallest grid t above which |P(t)| > 1/a2 holds on the rest of the grid.
    ProbeT {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, default_value_t = 1.05)]
        t_min: f64,
        #[arg(long, default_value_t = 6.0)]
        t_max: f64,
        #[arg(long, default_value_t = 1000)]
        steps: usize,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Args)]
struct Pair {
    #[arg(long)]
    a1: u64,
    #[arg(long)]
    a2: u64,
}

impl Pair {
    fn semigroup(&self) -> Result<NumericalSemigroup, CliError> {
        Ok(NumericalSemigroup::new(self.a1, self.a2)?)
    }
}

#[derive(Args)]
struct WitnessArgs {
    /// Rational value M/N of r₀(t).
    #[arg(long)]
    r0: Option<Fraction>,
    #[arg(long)]
    k_override: Option<f64>,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, env = "NDS_WORKERS")]
    workers: Option<usize>,
    #[arg(long)]
    checkpoint: Option<PathBuf>,
}

impl RunArgs {
    fn workers(&self) -> usize {
        self.workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
    }
}

#[derive(Args)]
struct OutArgs {
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// `--t`: a number, `inf`, or `special` for log_{a2/(a1+a2)}(1/2).
#[derive(Clone, Copy, Debug)]
enum TArg {
    Special,
    Value(NormParameter),
}

impl std::str::FromStr for TArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("special") {
            Ok(Self::Special)
        } else {
            s.parse().map(Self::Value).map_err(|e: NormError| e.to_string())
        }
    }
}

fn parse_target(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(',').ok_or("expected LO,HI")?;
    let lo: f64 = lo.trim().parse().map_err(|_| format!("bad lower bound {lo:?}"))?;
    let hi: f64 = hi.trim().parse().map_err(|_| format!("bad upper bound {hi:?}"))?;
    Ok((lo, hi))
}

/// Resolves `--t` and `--r0` into a parameter and an optional witness.
fn resolve_t(
    s: &NumericalSemigroup,
    t: TArg,
    r0: Option<Fraction>,
) -> Result<(NormParameter, Option<RationalR0Witness>), CliError> {
    let (t, special) = match t {
        TArg::Special => {
            let (t, w) = special_t(s)?;
            (NormParameter::finite(t)?, Some(w))
        }
        TArg::Value(t) => (t, None),
    };
    let witness = match r0 {
        Some(f) => Some(RationalR0Witness::new(s, f.num, f.den, t.value())?),
        None => special,
    };
    Ok((t, witness))
}

const SMOKE_X_MAX: u64 = 50_000;

#[derive(Debug)]
enum CliError {
    Invalid(String),
    Failed(String),
    Refuted(String),
}

impl From<SemigroupError> for CliError {
    fn from(e: SemigroupError) -> Self {
        Self::Invalid(e.to_string())
    }
}

impl From<NormError> for CliError {
    fn from(e: NormError) -> Self {
        Self::Invalid(e.to_string())
    }
}

impl From<MuError> for CliError {
    fn from(e: MuError) -> Self {
        match e {
            MuError::Root(_) => Self::Failed(e.to_string()),
            _ => Self::Invalid(e.to_string()),
        }
    }
}

impl From<CertificateError> for CliError {
    fn from(e: CertificateError) -> Self {
        match e {
            CertificateError::Mu(m) => m.into(),
            _ => Self::Invalid(e.to_string()),
        }
    }
}

impl From<ScanError> for CliError {
    fn from(e: ScanError) -> Self {
        match e {
            ScanError::InvalidConfig(_)
            | ScanError::ConfigMismatch { .. }
            | ScanError::AlreadyVerified(_)
            | ScanError::Semigroup(_) => Self::Invalid(e.to_string()),
            _ => Self::Failed(e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        Self::Failed(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        Self::Invalid(e.to_string())
    }
}

fn emit(out: &OutArgs, body: &[u8]) -> Result<(), CliError> {
    match &out.out {
        Some(p) => fs::write(p, body)?,
        None => io::stdout().lock().write_all(body)?,
    }
    Ok(())
}

fn emit_json<T: Serialize>(out: &OutArgs, value: &T) -> Result<(), CliError> {
    let mut body = serde_json::to_vec_pretty(value)?;
    body.push(b'\n');
    emit(out, &body)
}

fn require_json(out: &OutArgs, command: &str) -> Result<(), CliError> {
    if out.format == Format::Csv {
        return Err(CliError::Invalid(format!("`{command}` has no CSV output")));
    }
    Ok(())
}

#[derive(Serialize)]
struct MuOut {
    a1: u64,
    a2: u64,
    t: NormParameter,
    #[serde(with = "real")]
    r: f64,
    #[serde(with = "real")]
    mu: f64,
    #[serde(with = "real::opt")]
    mu_prime: Option<f64>,
    #[serde(with = "real::opt")]
    mu_second: Option<f64>,
}

#[derive(Serialize)]
struct R0Out {
    a1: u64,
    a2: u64,
    t: NormParameter,
    #[serde(with = "real")]
    r0: f64,
    #[serde(rename = "P", with = "real")]
    p: f64,
    steep: bool,
}

#[derive(Serialize)]
struct ProfileOut {
    #[serde(flatten)]
    profile: mu::CurveProfile,
    classification: Classification,
}

#[derive(Serialize)]
struct VerifyOut {
    certificate: Certificate,
    x_scanned: u64,
    gap_count: u64,
    violation_count: usize,
    first_violation: Option<GapRecord>,
}

#[derive(Serialize)]
struct ProbeOut {
    a1: u64,
    a2: u64,
    #[serde(with = "real")]
    t_min: f64,
    #[serde(with = "real")]
    t_max: f64,
    steps: usize,
    #[serde(with = "real::opt")]
    threshold: Option<f64>,
}

#[derive(Serialize)]
struct GoldenCheck {
    name: &'static str,
    #[serde(with = "real")]
    expected: f64,
    #[serde(with = "real")]
    actual: f64,
    #[serde(with = "real")]
    tolerance: f64,
    pass: bool,
}

impl GoldenCheck {
    fn new(name: &'static str, expected: f64, actual: f64, tolerance: f64) -> Self {
        Self { name, expected, actual, tolerance, pass: (actual - expected).abs() <= tolerance }
    }
}

#[derive(Serialize)]
struct Example7Out {
    checks: Vec<GoldenCheck>,
    verification: VerifyOut,
    pass: bool,
}

fn verify(cert: &Certificate, run: &RunArgs, x_cap: Option<u64>) -> Result<(VerifyOut, Vec<GapRecord>), CliError> {
    let v = verify_certificate_with(cert, run.workers(), run.checkpoint.as_deref(), x_cap)?;
    let out = VerifyOut {
        certificate: v.certificate,
        x_scanned: v.report.x_completed,
        gap_count: v.report.gap_count,
        violation_count: v.report.violations.len(),
        first_violation: v.first_violation,
    };
    Ok((out, v.report.violations))
}

fn load_certificate(path: &Path) -> Result<Certificate, CliError> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Mu { pair, t, r, out } => {
            require_json(&out, "mu")?;
            let s = pair.semigroup()?;
            let (t, _) = resolve_t(&s, t, None)?;
            let p = mu::mu_point(&s, r, t)?;
            emit_json(
                &out,
                &MuOut { a1: s.a1(), a2: s.a2(), t, r: p.r, mu: p.mu, mu_prime: p.mu_prime, mu_second: p.mu_second },
            )
        }
        Command::R0 { pair, t, out } => {
            require_json(&out, "r0")?;
            let s = pair.semigroup()?;
            let (t, _) = resolve_t(&s, t, None)?;
            let r0 = mu::r0_solve(&s, t)?;
            let p = mu::p_of_t(&s, t)?;
            let steep = mu::steep_at_r0(&s, t)?;
            emit_json(&out, &R0Out { a1: s.a1(), a2: s.a2(), t, r0, p, steep })
        }
        Command::Profile { pair, t, witness, out } => {
            require_json(&out, "profile")?;
            let s = pair.semigroup()?;
            let (t, w) = resolve_t(&s, t, witness.r0)?;
            let profile = mu::profile(&s, t)?;
            let classification = classify_t(&s, t, w.as_ref());
            emit_json(&out, &ProfileOut { profile, classification })
        }
        Command::Certify { pair, t, witness, out } => {
            require_json(&out, "certify")?;
            let s = pair.semigroup()?;
            let (t, w) = resolve_t(&s, t, witness.r0)?;
            let w = w.ok_or_else(|| CliError::Invalid("a certificate needs --r0 M/N (or --t special)".into()))?;
            let cert = build_certificate(&s, t, &w, witness.k_override)?;
            emit_json(&out, &cert)
        }
        Command::Verify { cert, a1, a2, t, witness, smoke, x_max, run, out } => {
            let cert = match cert {
                Some(path) => load_certificate(&path)?,
                None => {
                    let s = NumericalSemigroup::new(a1.unwrap_or(0), a2.unwrap_or(0))?;
                    let (t, w) = resolve_t(&s, t.expect("required by clap"), witness.r0)?;
                    let w =
                        w.ok_or_else(|| CliError::Invalid("a certificate needs --r0 M/N (or --t special)".into()))?;
                    build_certificate(&s, t, &w, witness.k_override)?
                }
            };
            let cap = match (smoke, x_max) {
                (true, Some(x)) => Some(x.min(SMOKE_X_MAX)),
                (true, None) => Some(SMOKE_X_MAX),
                (false, x) => x,
            };
            let (result, violations) = verify(&cert, &run, cap)?;
            match out.format {
                Format::Json => emit_json(&out, &result)?,
                Format::Csv => {
                    let mut buf = Vec::new();
                    write_gaps_csv(&violations, &mut buf)?;
                    emit(&out, &buf)?;
                }
            }
            refuted_exit(&result)
        }
        Command::Scan { pair, t, x_min, x_max, target, bin_width, run, out } => {
            let s = pair.semigroup()?;
            let (t, _) = resolve_t(&s, t, None)?;
            let mut cfg = ScanConfig::new(s, t, x_min, x_max).with_workers(run.workers());
            cfg.target = target;
            cfg.bin_width = bin_width;
            let mut scanner = Scanner::new(cfg)?;
            if let Some(p) = &run.checkpoint {
                scanner = scanner.checkpoint(p);
            }
            let report = match scanner.run()? {
                ScanOutcome::Complete(r) => r,
                ScanOutcome::Interrupted { x_next } => {
                    return Err(CliError::Failed(format!("scan interrupted at x = {x_next}")))
                }
            };
            match out.format {
                Format::Json => emit_json(&out, &report),
                Format::Csv => {
                    let mut buf = Vec::new();
                    write_gaps_csv(&report.violations, &mut buf)?;
                    emit(&out, &buf)
                }
            }
        }
        Command::Density { pair, t, x_max, bin_width, run, out } => {
            let s = pair.semigroup()?;
            let (t, _) = resolve_t(&s, t, None)?;
            let report = density_report(&s, t, x_max, bin_width, run.workers())?;
            match out.format {
                Format::Json => emit_json(&out, &report),
                Format::Csv => {
                    let mut buf = Vec::new();
                    write_histogram_csv(&report, &mut buf)?;
                    emit(&out, &buf)
                }
            }
        }
        Command::Example7 { smoke, run, out } => {
            require_json(&out, "example7")?;
            let s = NumericalSemigroup::new(2, 7)?;
            let (t, w) = special_t(&s)?;
            let t = NormParameter::finite(t)?;
            let r0 = mu::r0_solve(&s, t)?;
            let cert = build_certificate(&s, t, &w, Some(1.5))?;
            let checks = vec![
                GoldenCheck::new("r0", 7.0 / 9.0, r0, 1e-9),
                GoldenCheck::new("P", -0.2298, cert.p, 5e-4),
                GoldenCheck::new("interval_hi", 3.2172, cert.interval_hi, 1e-3),
                GoldenCheck::new("d", 2.05446, cert.d, 1e-4),
                GoldenCheck::new("epsilon", 0.0005250, cert.epsilon, 1e-6),
                GoldenCheck::new("x0", 560001.0, cert.x0 as f64, 1.0),
            ];
            let (verification, _) = verify(&cert, &run, smoke.then_some(SMOKE_X_MAX))?;
            for c in &checks {
                eprintln!(
                    "{} {}: expected {} ± {}, got {}",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.name,
                    c.expected,
                    c.tolerance,
                    real::format_sig17(c.actual)
                );
            }
            eprintln!(
                "{} scan x ≤ {}: {} gaps in ({}, {})",
                if verification.violation_count == 0 { "PASS" } else { "FAIL" },
                verification.x_scanned,
                verification.violation_count,
                real::format_sig17(cert.d - cert.epsilon),
                real::format_sig17(cert.d + cert.epsilon),
            );
            let pass = checks.iter().all(|c| c.pass) && verification.violation_count == 0;
            let refuted = verification.certificate.status == CertificateStatus::Refuted;
            emit_json(&out, &Example7Out { checks, verification, pass })?;
            if refuted {
                Err(CliError::Refuted("certificate refuted by brute force".into()))
            } else if !pass {
                Err(CliError::Failed("golden comparison failed".into()))
            } else {
                Ok(())
            }
        }
        Command::ProbeT { pair, t_min, t_max, steps, out } => {
            require_json(&out, "probe-t")?;
            let s = pair.semigroup()?;
            if !(t_min > 1.0 && t_max > t_min && steps >= 2) {
                return Err(CliError::Invalid("need 1 < t-min < t-max and at least 2 steps".into()));
            }
            let grid: Vec<f64> = (0..steps).map(|i| t_min + (t_max - t_min) * i as f64 / (steps - 1) as f64).collect();
            let threshold = mu::probe_t(&s, &grid)?;
            emit_json(&out, &ProbeOut { a1: s.a1(), a2: s.a2(), t_min, t_max, steps, threshold })
        }
    }
}

fn refuted_exit(v: &VerifyOut) -> Result<(), CliError> {
    match v.first_violation {
        Some(g) => Err(CliError::Refuted(format!(
            "certificate refuted: x = {} has a gap of {}",
            g.x,
            real::format_sig17(g.gap)
        ))),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Invalid(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(CliError::Refuted(m)) => {
            eprintln!("{m}");
            ExitCode::from(3)
        }
        Err(CliError::Failed(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
