use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use pennycdv::cdv::DirectSap;
use pennycdv::penny::{generate_realization, perturb, read_realization, realization_to_json};
use pennycdv::{
    edm_info, run_sweep, sweep_csv, verify_theorem, EdmInfo, Error, Family, SweepSummary,
    TheoremReport, TolerancePolicy, VerifyOptions,
};

/// Environment variable that overrides the relative zero tolerance.
const TOL_ENV: &str = "PENNYCDV_TOL";

#[derive(Parser)]
#[command(
    name = "pennycdv",
    version,
    about = "Colin de Verdière certificates for penny graph complements"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a family realization as JSON.
    Generate(GenerateArgs),
    /// Certify the corank bound for a realization file.
    Verify(VerifyArgs),
    /// Certify whole family ranges and write a CSV table.
    Sweep(SweepArgs),
    /// Print distance matrix diagnostics for a realization file.
    EdmInfo(InfoArgs),
}

#[derive(clap::Args)]
struct GenerateArgs {
    #[arg(long, value_parser = parse_family)]
    family: Family,
    /// Number of disks.
    #[arg(long)]
    n: Option<usize>,
    /// Number of petals (flower only, gives n = k + 1).
    #[arg(long)]
    k: Option<usize>,
    /// Output path; stdout when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Jitter amplitude, followed by a rescale to minimum distance 1.
    #[arg(long)]
    perturb: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(clap::Args)]
struct VerifyArgs {
    input: PathBuf,
    /// Confirm ranks over Q(√3) when the file carries exact coordinates.
    #[arg(long)]
    exact: bool,
    /// Run the direct SAP system regardless of size.
    #[arg(long)]
    direct_sap: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(clap::Args)]
struct SweepArgs {
    /// Comma separated family names; all families when omitted.
    #[arg(long, value_delimiter = ',', value_parser = parse_family)]
    families: Vec<Family>,
    #[arg(long, default_value_t = 5)]
    n_min: usize,
    #[arg(long, default_value_t = 40)]
    n_max: usize,
    /// Output CSV path; stdout when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Add an elapsed_ms column (the table is then no longer reproducible).
    #[arg(long)]
    timings: bool,
    #[arg(long)]
    exact: bool,
}

#[derive(clap::Args)]
struct InfoArgs {
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

enum Failure {
    Core(Error),
    /// The computation ran but the certificate did not hold.
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse::<Family>().map_err(|e| e.to_string())
}

fn policy_from_env() -> Result<TolerancePolicy, Error> {
    let mut policy = TolerancePolicy::default();
    if let Ok(raw) = std::env::var(TOL_ENV) {
        policy.rel_zero = raw
            .trim()
            .parse()
            .map_err(|_| Error::Parameter(format!("{TOL_ENV}={raw:?} is not a number")))?;
    }
    policy.validate()?;
    Ok(policy)
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), Error> {
    match output {
        Some(path) => fs::write(path, text).map_err(Error::Io),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(Error::Io),
    }
}

fn generate(args: GenerateArgs) -> Result<(), Failure> {
    let n = match (args.n, args.k) {
        (n, Some(k)) => {
            if args.family != Family::Flower {
                return Err(Error::Parameter(format!(
                    "--k only applies to the flower family, not {}",
                    args.family
                ))
                .into());
            }
            if n.is_some_and(|n| n != k + 1) {
                return Err(Error::Parameter(format!(
                    "--n {} contradicts --k {k}",
                    n.unwrap_or(0)
                ))
                .into());
            }
            k + 1
        }
        (Some(n), None) => n,
        (None, None) => return Err(Error::Parameter("give --n (or --k for flowers)".into()).into()),
    };
    let mut r = generate_realization(args.family, n)?;
    if let Some(amplitude) = args.perturb {
        r = perturb(&r, amplitude, args.seed)?;
    }
    let mut text = realization_to_json(&r)?;
    text.push('\n');
    emit(args.output.as_deref(), &text)?;
    if let Some(path) = &args.output {
        eprintln!("wrote {} ({} points)", path.display(), r.len());
    }
    Ok(())
}

fn check(ok: bool) -> &'static str {
    if ok {
        "✓"
    } else {
        "✗"
    }
}

fn verify_text(report: &TheoremReport) -> String {
    let cert = &report.certificate;
    let n = report.n;
    let mut out = format!(
        "{}: n = {n}, {} contacts, D {}",
        report.name,
        report.contact_edges,
        report.full_classification.kind.label()
    );
    if let Some(rho_sq) = report.full_classification.radius_sq() {
        out.push_str(&format!(" (ρ² = {rho_sq:.10})"));
    }
    out.push('\n');
    if cert.reduced {
        let center = report
            .isolated_node
            .map(|c| c.to_string())
            .unwrap_or_default();
        out.push_str(&format!(
            "complement disconnected: certificate built on the petals after removing node {center}\n"
        ));
    }
    let rank = match report.full_rank_d_exact {
        Some(r) => format!("{r} (exact)"),
        None => report.full_classification.rank_d.to_string(),
    };
    let mu = match cert.mu_lower_bound {
        Some(mu) => format!("μ(Ḡ) ≥ {mu}"),
        None => "μ(Ḡ) not certified".to_string(),
    };
    out.push_str(&format!(
        "rank(D) {rank}; corank {} = n−{}; M1 {} M2 {} M3 {}; {mu}\n",
        cert.corank,
        n - cert.corank,
        check(cert.m1_ok),
        check(cert.m2_ok),
        check(cert.m3_ok),
    ));
    out.push_str(&format!(
        "eigen gap ratio {:.3e}; expected corank {}\n",
        cert.eigen.gap_ratio, report.expected_corank
    ));
    for f in &report.failures {
        out.push_str(&format!("failure: {f}\n"));
    }
    out
}

fn verify(args: VerifyArgs) -> Result<(), Failure> {
    let policy = policy_from_env()?;
    let r = read_realization(&args.input)?;
    let opts = VerifyOptions {
        exact: args.exact,
        direct_sap: if args.direct_sap {
            DirectSap::Always
        } else {
            DirectSap::Auto
        },
    };
    let report = verify_theorem(&r, &policy, opts)?;
    let text = match args.format {
        Format::Text => verify_text(&report),
        Format::Json => report.to_json()? + "\n",
    };
    emit(None, &text)?;
    if report.passed {
        Ok(())
    } else {
        Err(Failure::Verification(report.failures.join("; ")))
    }
}

fn sweep(args: SweepArgs) -> Result<(), Failure> {
    let policy = policy_from_env()?;
    let families = if args.families.is_empty() {
        Family::ALL.to_vec()
    } else {
        args.families
    };
    let opts = VerifyOptions {
        exact: args.exact,
        ..Default::default()
    };
    let rows = run_sweep(&families, args.n_min, args.n_max, &policy, opts)?;
    emit(args.output.as_deref(), &sweep_csv(&rows, args.timings))?;
    let summary = SweepSummary::of(&rows);
    eprintln!("sweep: {summary}");
    if summary.failed > 0 {
        let failed: Vec<String> = rows
            .iter()
            .filter(|r| !r.passed())
            .map(|r| format!("{} n={}", r.family, r.n))
            .collect();
        return Err(Failure::Verification(format!(
            "failed rows: {}",
            failed.join(", ")
        )));
    }
    Ok(())
}

fn info_text(info: &EdmInfo) -> String {
    let c = &info.classification;
    let mut lines = vec![
        format!("{}: n = {}", info.name, info.n),
        format!(
            "contacts {} (bound {}); class {:?}; complement {}",
            info.contact_edges,
            info.harborth_bound,
            info.family_class,
            if info.complement_connected {
                "connected"
            } else {
                "disconnected"
            }
        ),
        format!(
            "forbidden: K4 {}, K2,3 {}, degree > 6 {}; 3-degenerate {}",
            info.forbidden.has_k4,
            info.forbidden.has_k23,
            info.forbidden.maxdeg_exceeds_6,
            info.degeneracy_order.is_some()
        ),
        format!(
            "D: {}, embedding dim {}, rank {}, gap ratio {:.3e}",
            c.kind.label(),
            c.embedding_dim,
            c.rank_d,
            info.rank_gap_ratio
        ),
        format!(
            "eᵀw = {:.10} (zero cutoff {:.3e}, residual {:.3e}); verdicts agree: {}",
            c.e_dot_w,
            info.e_dot_w_tolerance,
            info.solve_residual,
            c.spherical_by_rank == c.spherical_by_e_dot_w
        ),
    ];
    if let Some(rho_sq) = info.radius_sq {
        lines.push(format!("ρ² = {rho_sq:.10}"));
    }
    if let Some(circle) = &info.circumcircle {
        let mut line = format!(
            "circle fit: concyclic {}, max deviation {:.3e}",
            circle.concyclic, circle.max_deviation
        );
        if let Some(note) = &circle.note {
            line.push_str(&format!(" ({note})"));
        }
        lines.push(line);
    }
    if let Some(beta) = &info.beta {
        lines.push(format!(
            "β = {:.10}: PSD at β {}, not PSD just below {}",
            beta.beta, beta.psd_at_beta, beta.not_psd_below
        ));
    }
    let ns = &info.nullspace;
    lines.push(format!(
        "dim null(D) {}, dim null(M) {}, equal {}",
        ns.dim_null_d, ns.dim_null_m, ns.equal
    ));
    lines.join("\n") + "\n"
}

fn info(args: InfoArgs) -> Result<(), Failure> {
    let policy = policy_from_env()?;
    let r = read_realization(&args.input)?;
    let info = edm_info(&r, &policy)?;
    let text = match args.format {
        Format::Text => info_text(&info),
        Format::Json => serde_json::to_string_pretty(&info).map_err(Error::Json)? + "\n",
    };
    emit(None, &text)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Generate(a) => generate(a),
        Command::Verify(a) => verify(a),
        Command::Sweep(a) => sweep(a),
        Command::EdmInfo(a) => info(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(reason)) => {
            eprintln!("error[verification]: {reason}");
            ExitCode::from(1)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error[{}]: {e}", e.kind());
            ExitCode::from(if e.is_input_error() { 2 } else { 1 })
        }
    }
}
