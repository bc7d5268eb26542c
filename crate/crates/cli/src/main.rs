use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use weilreg::report::{AnalyzeOptions, Hypothesis, InputRecord, Int, Sections};
use weilreg_cli::fetch::{Client, Query};
use weilreg_cli::run::{combined_exit, process, render_text, run_batch, to_json_lines, to_json_pretty, Outcome};

/// Analyze Weil polynomials: validation, Newton polygons, regularity of
/// Frobenius, torus invariants, pole orders and the prime set P(X).
///
/// Coefficients are ascending, constant term first: `--coeffs 2,-1,1` is t^2 - t + 2.
#[derive(Parser)]
#[command(name = "weilreg", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the Weil conditions only.
    Validate(RecordArgs),
    /// Run every analysis.
    Analyze(RecordArgs),
    /// Torus invariants in tensor powers and their generation in degree two.
    Invariants(RecordArgs),
    /// Frobenius-fixed dimensions against torus invariants in tensor powers.
    Poles(RecordArgs),
    /// Primes l in P(X) up to the bound.
    Primes(RecordArgs),
    /// Download isogeny classes and print them as input records.
    Fetch(FetchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum HypothesisArg {
    K3,
    Abelian,
    None,
}

impl From<HypothesisArg> for Hypothesis {
    fn from(h: HypothesisArg) -> Self {
        match h {
            HypothesisArg::K3 => Hypothesis::K3,
            HypothesisArg::Abelian => Hypothesis::Abelian,
            HypothesisArg::None => Hypothesis::None,
        }
    }
}

#[derive(Args)]
struct RecordArgs {
    #[arg(long, required_unless_present = "input")]
    q: Option<u64>,
    #[arg(long, default_value_t = 1)]
    m: u32,
    /// Comma-separated, constant term first.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required_unless_present = "input")]
    coeffs: Vec<String>,
    #[arg(long, default_value = "cli")]
    id: String,
    #[arg(long, value_enum, default_value = "none")]
    hypothesis: HypothesisArg,
    #[arg(long, default_value_t = 4)]
    n_max: usize,
    #[arg(long, default_value_t = 1000)]
    primes_bound: u64,
    /// JSON output (one object per line in batch mode).
    #[arg(long)]
    json: bool,
    /// JSON-lines file of input records.
    #[arg(long, conflicts_with_all = ["q", "coeffs"])]
    input: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FetchArgs {
    #[arg(long)]
    g: u32,
    #[arg(long)]
    q: u64,
    /// Only read the cache.
    #[arg(long)]
    offline: bool,
    /// Overrides WEILREG_CACHE_DIR.
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<(), String> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn record_from_flags(a: &RecordArgs) -> Result<InputRecord, String> {
    let coeffs = a
        .coeffs
        .iter()
        .map(|c| c.trim().parse::<BigInt>().map(Int).map_err(|_| format!("bad coefficient `{c}`")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(InputRecord {
        id: a.id.clone(),
        q: a.q.expect("clap enforces --q"),
        m: a.m,
        coeffs,
        label: None,
        hypothesis: a.hypothesis.into(),
    })
}

fn analyze_command(a: &RecordArgs, sections: Sections) -> Result<i32, String> {
    let opts = AnalyzeOptions { n_max: a.n_max, primes_bound: a.primes_bound, sections, ..Default::default() };
    if let Some(path) = &a.input {
        let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let outcomes = run_batch(&text, &opts);
        let rendered = if a.json {
            to_json_lines(&outcomes)
        } else {
            outcomes
                .iter()
                .map(|o| match o {
                    Outcome::Report(r) => render_text(r),
                    Outcome::Malformed { line, error } => format!("line {line}: {error}\n"),
                })
                .collect::<Vec<_>>()
                .join("\n")
        };
        emit(&rendered, &a.out)?;
        return Ok(combined_exit(&outcomes));
    }
    let rec = record_from_flags(a)?;
    let report = process(&rec, &opts)?;
    let rendered = if a.json { to_json_pretty(&report) } else { render_text(&report) };
    emit(&rendered, &a.out)?;
    Ok(Outcome::Report(Box::new(report)).exit_code())
}

fn fetch_command(a: &FetchArgs) -> Result<i32, String> {
    let mut client = Client::from_env(a.offline);
    if let Some(dir) = &a.cache_dir {
        client.cache_dir = dir.clone();
    }
    let records = client.fetch(&Query { g: a.g, q: a.q }).map_err(|e| e.to_string())?;
    let mut text = String::new();
    for r in &records {
        text.push_str(&serde_json::to_string(r).expect("records serialize"));
        text.push('\n');
    }
    emit(&text, &a.out)?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.command {
        Command::Validate(a) => analyze_command(a, Sections::VALIDATE),
        Command::Analyze(a) => analyze_command(a, Sections::ALL),
        Command::Invariants(a) => analyze_command(a, Sections { invariants: true, ..Sections::VALIDATE }),
        Command::Poles(a) => analyze_command(a, Sections { poles: true, ..Sections::VALIDATE }),
        Command::Primes(a) => analyze_command(a, Sections { primes: true, ..Sections::VALIDATE }),
        Command::Fetch(a) => fetch_command(a),
    };
    match res {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("weilreg: {e}");
            ExitCode::from(2)
        }
    }
}
