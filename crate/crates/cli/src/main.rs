//! Command-line front-end: design construction, alias enumeration, spectrum
//! folding, and band-limited verification.
//!
//! Exit codes: 0 on success, 1 on a verification or oracle failure, 2 on
//! usage and validation errors.

mod table;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hyperharm::aliasing::{self, SelectionRule};
use hyperharm::design::{self, SpherePoint};
use hyperharm::harmonics::HarmonicIndex;
use hyperharm::spectrum::{self, PowerSpectrum};
use hyperharm::tolerance;
use hyperharm::{Design64, Spectrum64};

#[derive(Parser)]
#[command(
    name = "hyperharm",
    version,
    about = "Hyperspherical sampling designs, aliasing analysis, and spectrum folding",
    args_override_self = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a spherical uniform sampling design and emit it as JSON.
    Design(DesignArgs),
    /// Enumerate the aliases of a harmonic coefficient.
    Aliases(AliasArgs),
    /// Compute the spectrum folding matrix, optionally folding a spectrum.
    Fold(FoldArgs),
    /// Verify band-limited recovery and reconstruction on a design.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Rule {
    /// Keep every offset tuple whose aliasing-function value can be nonzero.
    Complete,
    /// The stricter tabular filter (zero offsets barred after any in-window
    /// predecessor, monotone offset chains).
    Restricted,
}

impl From<Rule> for SelectionRule {
    fn from(rule: Rule) -> Self {
        match rule {
            Rule::Complete => SelectionRule::Complete,
            Rule::Restricted => SelectionRule::Restricted,
        }
    }
}

#[derive(Args)]
struct CommonDesign {
    /// Sphere dimension d >= 2.
    #[arg(long)]
    d: usize,
    /// Polar node counts Q_0,...,Q_{d-2}, comma separated.
    #[arg(long = "Q", value_delimiter = ',', required = true)]
    q: Vec<usize>,
    /// Azimuth half-count M (the design uses 2M azimuth angles).
    #[arg(long = "M")]
    m: usize,
}

#[derive(Args)]
struct DesignArgs {
    #[command(flatten)]
    design: CommonDesign,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Flat key=value file providing defaults for the flags above.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct AliasArgs {
    #[command(flatten)]
    design: CommonDesign,
    /// Source degree ell.
    #[arg(long)]
    ell: i64,
    /// Source orders m_1,...,m_{d-1}, comma separated.
    #[arg(long = "m", value_delimiter = ',', allow_hyphen_values = true, required = true)]
    orders: Vec<i64>,
    /// Largest degree offset s0 to enumerate.
    #[arg(long = "s0-max", default_value_t = 4)]
    s0_max: i64,
    #[arg(long, value_enum, default_value = "complete")]
    rule: Rule,
    /// Cross-check the enumeration against the brute-force aliasing-function
    /// scan; exits 1 on any set or intensity mismatch.
    #[arg(long)]
    oracle: bool,
    /// Membership threshold for the oracle comparison.
    #[arg(long, default_value_t = tolerance::ORACLE_MEMBERSHIP)]
    tol: f64,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct FoldArgs {
    #[command(flatten)]
    design: CommonDesign,
    /// Largest row degree of the folding matrix.
    #[arg(long = "ell-max")]
    ell_max: usize,
    /// Degree-offset truncation of each row.
    #[arg(long = "s0-max", default_value_t = 4)]
    s0_max: i64,
    /// Spectrum file to fold: JSON array, JSON {"values", "band_limit"}, or
    /// CSV "ell,value" lines.
    #[arg(long)]
    spectrum: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Sphere dimension d >= 2.
    #[arg(long)]
    d: usize,
    /// Bandwidth of the synthesized field.
    #[arg(long = "L0")]
    band: usize,
    /// Polar node counts (required unless --check-N).
    #[arg(long = "Q", value_delimiter = ',')]
    q: Vec<usize>,
    /// Azimuth half-count (required unless --check-N).
    #[arg(long = "M")]
    m: Option<usize>,
    /// Seed for the field realization and the probe points.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of random reconstruction probe points.
    #[arg(long, default_value_t = 100)]
    points: usize,
    /// Only report the sample-size rule N = 2(L0+1)^d >= 2 L0^d.
    #[arg(long = "check-N")]
    check_n: bool,
    /// Coefficient recovery tolerance.
    #[arg(long = "tol-coeff", default_value_t = tolerance::BAND_COEFF_ABS)]
    tol_coeff: f64,
    /// Pointwise reconstruction tolerance.
    #[arg(long = "tol-recon", default_value_t = tolerance::RECONSTRUCTION_ABS)]
    tol_recon: f64,
    #[arg(long)]
    config: Option<PathBuf>,
}

fn main() -> ExitCode {
    let args = match splice_config(std::env::args().collect()) {
        Ok(args) => args,
        Err(message) => {
            eprintln!("error: {message}");
            return ExitCode::from(2);
        }
    };
    let cli = Cli::parse_from(args);
    let outcome = match cli.command {
        Command::Design(args) => cmd_design(args),
        Command::Aliases(args) => cmd_aliases(args),
        Command::Fold(args) => cmd_fold(args),
        Command::Verify(args) => cmd_verify(args),
    };
    match outcome {
        Ok(code) => code,
        Err(error) => {
            eprintln!("error: {error}");
            ExitCode::from(2)
        }
    }
}

/// Reads `--config key=value` defaults and splices them in right after the
/// subcommand, so explicit flags override them.
fn splice_config(mut args: Vec<String>) -> Result<Vec<String>, String> {
    let Some(position) = args.iter().position(|arg| arg == "--config") else {
        return Ok(args);
    };
    let path = args
        .get(position + 1)
        .cloned()
        .ok_or_else(|| "--config requires a path".to_string())?;
    let text = std::fs::read_to_string(&path)
        .map_err(|e| format!("cannot read config {path}: {e}"))?;
    let mut extra = Vec::new();
    for (number, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("{path}:{}: expected key=value", number + 1))?;
        extra.push(format!("--{}", key.trim()));
        extra.push(value.trim().to_string());
    }
    if args.len() < 2 {
        return Err("a subcommand is required when --config is used".to_string());
    }
    args.splice(2..2, extra);
    Ok(args)
}

/// Writes text to the output path atomically (temp file + rename), or to
/// stdout when no path is given.
fn emit(text: &str, out: Option<&Path>) -> anyhow::Result<()> {
    match out {
        None => {
            println!("{text}");
            Ok(())
        }
        Some(path) => {
            let tmp = path.with_extension("tmp");
            std::fs::write(&tmp, text)?;
            std::fs::rename(&tmp, path)?;
            Ok(())
        }
    }
}

fn build_design(common: &CommonDesign) -> anyhow::Result<Design64> {
    Ok(design::uniform_design(common.d, &common.q, common.m)?)
}

fn cmd_design(args: DesignArgs) -> anyhow::Result<ExitCode> {
    let design = build_design(&args.design)?;
    let text = match args.format {
        Format::Json => design.to_json(),
        Format::Table | Format::Csv => table::design_summary(&design),
    };
    // diagnostics go to stderr so the payload stays machine-readable
    let total: f64 = design
        .flatten()
        .iter()
        .map(|(point, weight)| weight * design::measure_f(point.theta(), design.dim()))
        .sum();
    let area = hyperharm::specfun::surface_area::<f64>(design.dim());
    eprintln!(
        "N = {}; weighted measure = {total:.12e} (surface area {area:.12e}, rel err {:.3e})",
        design.node_count(),
        ((total - area) / area).abs()
    );
    emit(&text, args.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_aliases(args: AliasArgs) -> anyhow::Result<ExitCode> {
    let design = build_design(&args.design)?;
    let source = HarmonicIndex::new(args.ell, args.orders.clone())?;
    let rule: SelectionRule = args.rule.into();
    let records = aliasing::enumerate_aliases(&design, &source, args.s0_max, rule)?;

    let text = match args.format {
        Format::Json => aliasing::report_json(&design, &source, args.s0_max, rule, &records),
        Format::Csv => aliasing::report_csv(design.dim(), &records),
        Format::Table => table::alias_table(&source, design.polar_counts(), args.s0_max, &records),
    };
    emit(&text, args.out.as_deref())?;

    if args.oracle {
        let ell_scan = (source.ell() + 2 * args.s0_max).max(0) as usize;
        let scan = aliasing::brute_force_aliases(&design, &source, ell_scan, args.tol)?;
        let mut failures = Vec::new();
        let kept: Vec<_> =
            records.iter().filter(|record| record.intensity.abs() > args.tol).collect();
        for record in &kept {
            match scan.iter().find(|(target, _)| *target == record.target) {
                None => failures.push(format!(
                    "enumerated {} (intensity {:.3e}) not found by the scan",
                    record.target, record.intensity
                )),
                Some((_, tau)) => {
                    if (tau.re - record.intensity).abs() > args.tol || tau.im.abs() > args.tol {
                        failures.push(format!(
                            "intensity mismatch at {}: scan {:.6e}+{:.1e}i vs {:.6e}",
                            record.target, tau.re, tau.im, record.intensity
                        ));
                    }
                }
            }
        }
        for (target, tau) in &scan {
            if !kept.iter().any(|record| record.target == *target) {
                failures.push(format!(
                    "scan found {} (|tau| = {:.3e}) missing from the enumeration",
                    target,
                    tau.norm()
                ));
            }
        }
        if failures.is_empty() {
            eprintln!(
                "oracle: enumeration matches the brute-force scan ({} aliases, ell' <= {ell_scan})",
                kept.len()
            );
        } else {
            for failure in &failures {
                eprintln!("oracle: {failure}");
            }
            return Ok(ExitCode::from(1));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn read_spectrum(path: &Path) -> anyhow::Result<Spectrum64> {
    let text = std::fs::read_to_string(path)?;
    let trimmed = text.trim();
    if trimmed.starts_with('[') {
        let values: Vec<f64> = serde_json::from_str(trimmed)?;
        return Ok(PowerSpectrum::new(values)?);
    }
    if trimmed.starts_with('{') {
        let doc: serde_json::Value = serde_json::from_str(trimmed)?;
        let values: Vec<f64> = serde_json::from_value(
            doc.get("values").cloned().ok_or_else(|| anyhow::anyhow!("missing \"values\""))?,
        )?;
        return Ok(match doc.get("band_limit").and_then(|b| b.as_u64()) {
            Some(band) => PowerSpectrum::with_band(values, band as usize)?,
            None => PowerSpectrum::new(values)?,
        });
    }
    // CSV: "ell,value" lines with an optional header
    let mut pairs = Vec::new();
    for line in trimmed.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with("ell") {
            continue;
        }
        let (ell, value) =
            line.split_once(',').ok_or_else(|| anyhow::anyhow!("expected ell,value: {line}"))?;
        pairs.push((ell.trim().parse::<usize>()?, value.trim().parse::<f64>()?));
    }
    pairs.sort_by_key(|&(ell, _)| ell);
    let mut values = vec![0.0; pairs.last().map(|&(ell, _)| ell + 1).unwrap_or(0)];
    for (ell, value) in pairs {
        values[ell] = value;
    }
    Ok(PowerSpectrum::new(values)?)
}

fn cmd_fold(args: FoldArgs) -> anyhow::Result<ExitCode> {
    let design = build_design(&args.design)?;
    let matrix = spectrum::lambda_matrix(&design, args.ell_max, args.s0_max)?;
    let folded = match &args.spectrum {
        Some(path) => Some(spectrum::fold_spectrum(&matrix, &read_spectrum(path)?)?),
        None => None,
    };
    let text = match args.format {
        Format::Json => spectrum::folding_json(&matrix, folded.as_ref()),
        Format::Csv => spectrum::folding_csv(&matrix),
        Format::Table => table::folding_table(&matrix, folded.as_ref()),
    };
    emit(&text, args.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> anyhow::Result<ExitCode> {
    if args.check_n {
        let check = spectrum::check_sample_size(args.band, args.d);
        println!(
            "L0 = {}, d = {}: Q = M = {} gives N = {} >= {}",
            args.band, args.d, check.q, check.n, check.bound
        );
        return Ok(ExitCode::SUCCESS);
    }
    let m = args.m.ok_or_else(|| anyhow::anyhow!("--M is required unless --check-N"))?;
    if args.q.len() != args.d - 1 {
        anyhow::bail!("--Q must list {} node counts for d = {}", args.d - 1, args.d);
    }
    let design: Design64 = design::uniform_design(args.d, &args.q, m)?;

    // reference band-limited spectrum
    let values: Vec<f64> = (0..=args.band).map(|ell| 1.0 / (1 + ell) as f64).collect();
    let spec = PowerSpectrum::with_band(values, args.band)?;
    let field = spectrum::synthesize_field(&spec, args.band, args.d, args.seed)?;
    let samples = spectrum::sample_field(&field, &design)?;

    let recovered = spectrum::aliased_coeffs(&samples, &design, args.band)?;
    let mut coeff_error = 0.0f64;
    for (index, value) in recovered.iter() {
        let truth = field.coeffs.get(index).expect("same degree layout");
        coeff_error = coeff_error.max((value - truth).norm());
    }

    // probe reconstruction at seeded random interior points
    let mut state = spectrum::child_seed(args.seed, 1) | 1;
    let mut next = move || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    let mut recon_error = 0.0f64;
    for _ in 0..args.points {
        let theta: Vec<f64> =
            (0..args.d - 1).map(|_| 0.05 + 0.9 * std::f64::consts::PI * next()).collect();
        let phi = 2.0 * std::f64::consts::PI * 0.999 * next();
        let x = SpherePoint::new(theta, phi)?;
        let direct: num_complex::Complex<f64> = field
            .coeffs
            .iter()
            .map(|(index, &value)| value * hyperharm::harmonics::eval_y(index, &x).unwrap())
            .sum();
        let rebuilt = spectrum::reconstruct(&samples, &design, args.band, &x)?;
        recon_error = recon_error.max((rebuilt - direct).norm());
    }

    let coeff_ok = coeff_error <= args.tol_coeff;
    let recon_ok = recon_error <= args.tol_recon;
    println!(
        "max coefficient error: {coeff_error:.6e} (tolerance {:.1e}) -> {}",
        args.tol_coeff,
        if coeff_ok { "pass" } else { "FAIL" }
    );
    println!(
        "max reconstruction error over {} points: {recon_error:.6e} (tolerance {:.1e}) -> {}",
        args.points,
        args.tol_recon,
        if recon_ok { "pass" } else { "FAIL" }
    );
    Ok(if coeff_ok && recon_ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
