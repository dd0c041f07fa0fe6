//! Command-line front end for the lu3q library.
//!
//! Subcommands: `build` writes an incidence matrix (plain text or alist),
//! `rank` computes a GF(2) rank and compares it with the closed form when
//! one applies, `verify` runs the formula and lemma suites, `equiv` checks
//! the equivalence of the affine and quadrangle constructions, and
//! `simulate` runs the seeded channel simulator over the LU(3,q) code.
//!
//! Exit codes: 0 on success / all checks passed, 1 when a verification
//! check fails or an operation cannot be carried out, 2 on usage errors
//! (unknown flags, invalid q, invalid parameters). Output goes to stdout
//! unless `--out` names a file; a relative `--out` is placed under
//! `$LU3Q_OUT_DIR` when that variable is set.

use clap::{Args, Parser, Subcommand, ValueEnum};
use lu3q::field::Field;
use lu3q::geometry::Quadrangle;
use lu3q::gf2::BitMatrix;
use lu3q::incidence::{self, Lines, Points};
use lu3q::klein;
use lu3q::ldpc::{self, Channel};
use lu3q::verify::{self, Verifier};
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "lu3q",
    version,
    about = "Build and verify LU(3,q) LDPC parity-check matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a matrix and write it out
    Build(BuildArgs),
    /// Compute a GF(2) rank and compare it with the formula when one applies
    Rank(RankArgs),
    /// Run the verification suites and report every check
    Verify(VerifyArgs),
    /// Check that the affine and quadrangle constructions agree
    Equiv(EquivArgs),
    /// Simulate the LU(3,q) code over a noisy channel
    Simulate(SimulateArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Which {
    /// M(P,L): all points against all lines
    Pl,
    /// M(P1,L1): the LU(3,q) parity-check matrix
    P1l1,
    /// M(P,L1)
    Pl1,
    /// M(P1,L)
    P1l,
    /// H(3,q) from the affine equations
    H3q,
}

impl Which {
    fn label(self) -> &'static str {
        match self {
            Which::Pl => "PL",
            Which::P1l1 => "P1L1",
            Which::Pl1 => "PL1",
            Which::P1l => "P1L",
            Which::H3q => "H3Q",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
    Alist,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    All,
    Lemmas,
    Formulas,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ChannelKind {
    Bsc,
    Bec,
}

#[derive(Args)]
struct BuildArgs {
    /// Field order; must be a prime power
    #[arg(long)]
    q: u32,
    /// Which matrix to construct
    #[arg(long, value_enum)]
    which: Which,
    /// Output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format (default: text)
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct RankArgs {
    #[arg(long)]
    q: u32,
    #[arg(long, value_enum)]
    which: Which,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format (default: json)
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    q: u32,
    /// Which checks to run
    #[arg(long, value_enum, default_value = "all")]
    suite: Suite,
    /// Minimum number of lines sampled by the per-line neighborhood checks
    #[arg(long, default_value_t = 50)]
    sample: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format (default: json)
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct EquivArgs {
    #[arg(long)]
    q: u32,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format (default: json)
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    q: u32,
    #[arg(long, value_enum)]
    channel: ChannelKind,
    /// Crossover probability (bsc) or erasure probability (bec), in [0, 1]
    #[arg(long)]
    param: f64,
    #[arg(long)]
    trials: u64,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format (default: csv)
    #[arg(long, value_enum)]
    format: Option<Format>,
}

enum CliError {
    Usage(String),
    Failure(String),
}

impl CliError {
    fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) => ExitCode::from(2),
            CliError::Failure(_) => ExitCode::from(1),
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Failure(m) => m,
        }
    }
}

fn field_for(q: u32) -> Result<Field, CliError> {
    Field::new(q).map_err(|e| CliError::Usage(e.to_string()))
}

/// Resolves the output destination: a relative --out lands under
/// $LU3Q_OUT_DIR when set, and None means stdout.
fn resolve_out(out: Option<PathBuf>) -> Option<PathBuf> {
    let path = out?;
    if path.is_relative() {
        if let Some(dir) = std::env::var_os("LU3Q_OUT_DIR") {
            return Some(PathBuf::from(dir).join(path));
        }
    }
    Some(path)
}

fn emit(out: Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match resolve_out(out) {
        Some(path) => std::fs::write(&path, content)
            .map_err(|e| CliError::Failure(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn build_matrix(q: u32, which: Which) -> Result<BitMatrix, CliError> {
    let field = field_for(q)?;
    Ok(match which {
        Which::H3q => incidence::h3q(&field).matrix,
        _ => {
            let g = Quadrangle::new(&field);
            let (points, lines) = match which {
                Which::Pl => (Points::P, Lines::L),
                Which::P1l1 => (Points::P1, Lines::L1),
                Which::Pl1 => (Points::P, Lines::L1),
                Which::P1l => (Points::P1, Lines::L),
                Which::H3q => unreachable!(),
            };
            incidence::geometric(&g, points, lines).matrix
        }
    })
}

fn matrix_text(m: &BitMatrix) -> String {
    let mut s = String::with_capacity(m.rows() * (m.cols() + 1));
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            s.push(if m.get(r, c) { '1' } else { '0' });
        }
        s.push('\n');
    }
    s
}

fn cmd_build(args: BuildArgs) -> Result<ExitCode, CliError> {
    let m = build_matrix(args.q, args.which)?;
    let content = match args.format.unwrap_or(Format::Text) {
        Format::Text => matrix_text(&m),
        Format::Alist => {
            let mut buf = Vec::new();
            ldpc::write_alist(&m, &mut buf)
                .map_err(|e| CliError::Usage(format!("cannot export as alist: {e}")))?;
            String::from_utf8(buf).expect("alist output is ASCII")
        }
        Format::Json | Format::Csv => {
            return Err(CliError::Usage(
                "build supports --format text or alist".into(),
            ));
        }
    };
    emit(args.out, &content)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct RankRecord {
    q: u32,
    which: &'static str,
    rows: usize,
    cols: usize,
    computed_rank: usize,
    /// Present only when a proved formula applies to this matrix.
    expected_rank: Option<usize>,
    pass: Option<bool>,
}

fn cmd_rank(args: RankArgs) -> Result<ExitCode, CliError> {
    let m = build_matrix(args.q, args.which)?;
    let computed = m.rank();
    let expected = match args.which {
        Which::Pl => Some(verify::expected_rank_pl(args.q).expect("q validated")),
        Which::P1l1 => verify::expected_rank_p1l1(args.q).ok(),
        _ => None,
    };
    let record = RankRecord {
        q: args.q,
        which: args.which.label(),
        rows: m.rows(),
        cols: m.cols(),
        computed_rank: computed,
        expected_rank: expected,
        pass: expected.map(|e| e == computed),
    };
    let content = match args.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&record),
        Format::Text => {
            let expectation = match (record.expected_rank, record.pass) {
                (Some(e), Some(true)) => format!("expected {e}, PASS"),
                (Some(e), Some(false)) => format!("expected {e}, FAIL"),
                _ => "expected n/a (no formula applies)".to_string(),
            };
            format!(
                "rank M[{}] at q={}: computed {}, {}\n",
                record.which, record.q, record.computed_rank, expectation
            )
        }
        _ => {
            return Err(CliError::Usage(
                "rank supports --format json or text".into(),
            ))
        }
    };
    emit(args.out, &content)?;
    if record.pass == Some(false) {
        return Err(CliError::Failure(format!(
            "computed rank {} differs from expected {}",
            record.computed_rank,
            record.expected_rank.unwrap()
        )));
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct VerifyRecord {
    q: u32,
    suite: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    rank_report: Option<lu3q::RankReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lemma_report: Option<lu3q::LemmaReport>,
    pass: bool,
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, CliError> {
    field_for(args.q)?;
    let verifier = Verifier::new(args.q).map_err(|e| CliError::Usage(e.to_string()))?;
    let (suite, rank_report, lemma_report) = match args.suite {
        Suite::Formulas => ("formulas", Some(verifier.rank_report()), None),
        Suite::Lemmas => ("lemmas", None, Some(verifier.lemma_report(args.sample))),
        Suite::All => (
            "all",
            Some(verifier.rank_report()),
            Some(verifier.lemma_report(args.sample)),
        ),
    };
    let pass = rank_report.as_ref().is_none_or(|r| r.all_pass())
        && lemma_report.as_ref().is_none_or(|r| r.pass);
    let record = VerifyRecord {
        q: args.q,
        suite,
        rank_report,
        lemma_report,
        pass,
    };
    let content = match args.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&record),
        Format::Text => {
            let mut s = format!("verify q={} suite={}: ", record.q, record.suite);
            s.push_str(if record.pass { "PASS\n" } else { "FAIL\n" });
            if let Some(r) = &record.rank_report {
                s.push_str(&format!(
                    "  rank M(P,L) = {} (expected {}), rank M(P1,L1) = {}, dim = {}, bound = {}\n",
                    r.computed_rank_pl,
                    r.expected_rank_pl,
                    r.computed_rank_p1l1,
                    r.computed_dim_lu,
                    r.lower_bound_lu
                ));
            }
            if let Some(r) = &record.lemma_report {
                s.push_str(&format!(
                    "  lemmas: counts {}, phi {}, kernel dims ({}, {}), independence {}, span {}\n",
                    r.allone_counts,
                    r.phi_table,
                    r.kernel_dim_pl,
                    r.kernel_dim_pl1,
                    r.independence,
                    r.span
                ));
            }
            s
        }
        _ => {
            return Err(CliError::Usage(
                "verify supports --format json or text".into(),
            ))
        }
    };
    emit(args.out, &content)?;
    if !record.pass {
        return Err(CliError::Failure("verification checks failed".into()));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_equiv(args: EquivArgs) -> Result<ExitCode, CliError> {
    let report = klein::equivalence_check(args.q).map_err(|e| CliError::Usage(e.to_string()))?;
    let content = match args.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&report),
        Format::Text => match report.first_mismatch {
            None => format!(
                "equiv q={}: PASS ({} points, {} lines permuted)\n",
                report.q,
                report.point_perm.len(),
                report.line_perm.len()
            ),
            Some((r, c)) => {
                format!("equiv q={}: FAIL at matrix entry ({r}, {c})\n", report.q)
            }
        },
        _ => {
            return Err(CliError::Usage(
                "equiv supports --format json or text".into(),
            ))
        }
    };
    emit(args.out, &content)?;
    if !report.pass {
        return Err(CliError::Failure("the two constructions disagree".into()));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_simulate(args: SimulateArgs) -> Result<ExitCode, CliError> {
    if !(0.0..=1.0).contains(&args.param) {
        return Err(CliError::Usage("--param must lie in [0, 1]".into()));
    }
    if args.trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    let field = field_for(args.q)?;
    let code = ldpc::code_from_h3q(&field, true);
    let channel = match args.channel {
        ChannelKind::Bsc => Channel::Bsc(args.param),
        ChannelKind::Bec => Channel::Bec(args.param),
    };
    let result = ldpc::simulate(&code, channel, args.trials, args.seed);
    let content = match args.format.unwrap_or(Format::Csv) {
        Format::Csv => result.to_csv(),
        Format::Json => to_json(&result),
        _ => {
            return Err(CliError::Usage(
                "simulate supports --format csv or json".into(),
            ))
        }
    };
    emit(args.out, &content)?;
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Build(args) => cmd_build(args),
        Command::Rank(args) => cmd_rank(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Equiv(args) => cmd_equiv(args),
        Command::Simulate(args) => cmd_simulate(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}
