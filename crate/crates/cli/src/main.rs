//! `ppcof` — Monte Carlo experiments for compute-and-forward relaying with
//! phase precoding.
//!
//! Subcommands: `rate-cdf`, `error-rate`, `dof-slope`, `search-bench`,
//! `recover-demo`. All randomness flows from `--seed`; rerunning a command
//! with the same flags produces byte-identical output for any `--workers`
//! value. Exit codes: 0 success, 2 configuration error, 3 runtime failure.

mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ppcof::codec::PowerNormalization;
use ppcof::field::SolveOutcome;
use ppcof::search::SearcherKind;
use ppcof::sim::{
    dof_slope_experiment, error_rate_experiment, rate_cdf_experiment, recover_demo,
    search_bench_experiment, CodeParams, ExperimentConfig, Precoding, SearchSettings,
};
use ppcof::Error;

use output::{write_csv, write_json, Cell, Table};

#[derive(Parser)]
#[command(
    name = "ppcof",
    version,
    about = "Compute-and-forward simulations with phase precoding",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Empirical CDF of the best-equation rate, plain vs phase-precoded.
    RateCdf(ExperimentArgs),
    /// Relay equation-error rate versus SNR for a construction-A code.
    ErrorRate(ExperimentArgs),
    /// Per-channel high-SNR slope of the sup-rate (empirical DoF proxy).
    DofSlope(ExperimentArgs),
    /// Operation counts and rate gaps for every coefficient searcher.
    SearchBench(ExperimentArgs),
    /// Destination-side message recovery from one equation per relay.
    RecoverDemo(ExperimentArgs),
}

#[derive(Args)]
struct ExperimentArgs {
    /// Number of transmitters L.
    #[arg(long = "users", default_value_t = 2)]
    users: usize,
    /// Comma-separated SNR grid in dB (defaults depend on the subcommand).
    #[arg(long = "snr-db", value_delimiter = ',', allow_hyphen_values = true)]
    snr_db: Option<Vec<f64>>,
    /// Monte Carlo trials per SNR point.
    #[arg(long, default_value_t = 200)]
    trials: u64,
    /// Root seed; all randomness derives from it.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Coefficient searcher: qes|bruteforce|sphere|lll.
    #[arg(long, default_value = "sphere")]
    searcher: String,
    /// QES |alpha| cap (default: ceil(sqrt(1+rho*|h|^2)) per SNR point).
    #[arg(long = "alpha-max")]
    alpha_max: Option<u32>,
    /// QES phase step in degrees.
    #[arg(long = "phase-step-deg", default_value_t = 5.0)]
    phase_step_deg: f64,
    /// Abort searches that would evaluate more candidates than this.
    #[arg(long = "ops-budget")]
    ops_budget: Option<u64>,
    /// Transmitter-side precoding: none|optimal.
    #[arg(long, default_value = "optimal")]
    precoding: String,
    /// Field prime p = 3 (mod 4) for the lattice code and recovery.
    #[arg(long, default_value_t = 7)]
    prime: i64,
    /// Codeword length n.
    #[arg(long = "block-n", default_value_t = 16)]
    block_n: usize,
    /// Codebook power normalization: average|peak.
    #[arg(long = "power-norm", default_value = "average")]
    power_norm: String,
    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format: csv|json.
    #[arg(long, default_value = "csv")]
    format: String,
    /// Worker threads; never changes the output bytes.
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

impl ExperimentArgs {
    fn format(&self) -> Result<Format, Error> {
        match self.format.as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Config(format!("unknown format '{other}' (expected csv|json)"))),
        }
    }

    fn config(&self, default_snr: &[f64]) -> Result<ExperimentConfig, Error> {
        let kind = SearcherKind::parse(&self.searcher)?;
        let normalization = match self.power_norm.as_str() {
            "average" => PowerNormalization::Average,
            "peak" => PowerNormalization::Peak,
            other => {
                return Err(Error::Config(format!(
                    "unknown power normalization '{other}' (expected average|peak)"
                )))
            }
        };
        let mut search = SearchSettings::new(kind);
        search.alpha_max = self.alpha_max;
        search.phase_step_deg = self.phase_step_deg;
        search.ops_budget = self.ops_budget;
        let cfg = ExperimentConfig {
            users: self.users,
            snr_db: self.snr_db.clone().unwrap_or_else(|| default_snr.to_vec()),
            trials: self.trials,
            seed: self.seed,
            search,
            precoding: Precoding::parse(&self.precoding)?,
            code: Some(CodeParams { prime: self.prime, block_n: self.block_n, normalization }),
            workers: self.workers.max(1),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn emit(&self, content: &str) -> Result<(), Error> {
        match &self.out {
            Some(path) => std::fs::write(path, content)
                .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display()))),
            None => {
                print!("{content}");
                std::io::stdout().flush().ok();
                Ok(())
            }
        }
    }

    fn emit_table(&self, table: &Table) -> Result<(), Error> {
        let mut buf = Vec::new();
        match self.format()? {
            Format::Csv => write_csv(table, &mut buf),
            Format::Json => write_json(table, &mut buf),
        }
        .map_err(|e| Error::Config(format!("serialization failed: {e}")))?;
        self.emit(&String::from_utf8(buf).expect("tables are utf-8"))
    }
}

fn announce(name: &str, cfg: &ExperimentConfig) {
    eprintln!(
        "{name}: users={} snr_db={:?} trials={} seed={} searcher={} precoding={} workers={}",
        cfg.users,
        cfg.snr_db,
        cfg.trials,
        cfg.seed,
        cfg.search.kind.name(),
        cfg.precoding.name(),
        cfg.workers
    );
}

fn run_rate_cdf(args: &ExperimentArgs) -> Result<(), Error> {
    let cfg = args.config(&[10.0, 20.0, 30.0])?;
    announce("rate-cdf", &cfg);
    let out = rate_cdf_experiment(&cfg)?;
    if out.search_failures > 0 {
        eprintln!("note: {} trials failed to find a nonzero equation", out.search_failures);
    }
    let mut table = Table::new(vec!["snr_db", "percentile", "rate_plain", "rate_pp"]);
    for row in &out.rows {
        table.push(vec![
            Cell::Float(row.snr_db),
            Cell::Int(row.percentile as i64),
            Cell::Float(row.rate_plain),
            Cell::Float(row.rate_pp),
        ]);
    }
    args.emit_table(&table)
}

fn run_error_rate(args: &ExperimentArgs) -> Result<(), Error> {
    let cfg = args.config(&[10.0, 15.0, 20.0, 25.0])?;
    announce("error-rate", &cfg);
    let rows = error_rate_experiment(&cfg)?;
    let mut table = Table::new(vec![
        "snr_db",
        "trials",
        "errors",
        "equation_error_rate",
        "ci_low",
        "ci_high",
    ]);
    for row in &rows {
        table.push(vec![
            Cell::Float(row.snr_db),
            Cell::Int(row.trials as i64),
            Cell::Int(row.errors as i64),
            Cell::Float(row.error_rate),
            Cell::Float(row.ci_low),
            Cell::Float(row.ci_high),
        ]);
    }
    args.emit_table(&table)
}

fn run_dof_slope(args: &ExperimentArgs) -> Result<(), Error> {
    let cfg = args.config(&[30.0, 40.0, 50.0, 60.0])?;
    announce("dof-slope", &cfg);
    let out = dof_slope_experiment(&cfg)?;
    let mut table = Table::new(vec![
        "users",
        "trials",
        "mean_slope_plain",
        "mean_slope_pp",
        "median_slope_plain",
        "median_slope_pp",
    ]);
    table.push(vec![
        Cell::Int(out.users as i64),
        Cell::Int(out.trials as i64),
        Cell::Float(out.mean_slope_plain),
        Cell::Float(out.mean_slope_pp),
        Cell::Float(out.median_slope_plain),
        Cell::Float(out.median_slope_pp),
    ]);
    args.emit_table(&table)
}

fn run_search_bench(args: &ExperimentArgs) -> Result<(), Error> {
    let cfg = args.config(&[10.0, 20.0, 30.0])?;
    announce("search-bench", &cfg);
    let rows = search_bench_experiment(&cfg)?;
    let mut table = Table::new(vec![
        "searcher",
        "users",
        "snr_db",
        "trials",
        "failures",
        "mean_ops_count",
        "mean_rate_bits",
        "mean_gap_bits",
    ]);
    for row in &rows {
        table.push(vec![
            Cell::Str(row.searcher.name().to_string()),
            Cell::Int(row.users as i64),
            Cell::Float(row.snr_db),
            Cell::Int(row.trials as i64),
            Cell::Int(row.failures as i64),
            Cell::Float(row.mean_ops_count),
            Cell::Float(row.mean_rate_bits),
            Cell::Float(row.mean_gap_bits),
        ]);
    }
    args.emit_table(&table)
}

fn fp2_str(e: &ppcof::field::Fp2) -> String {
    format!("{}+{}i", e.re, e.im)
}

fn run_recover_demo(args: &ExperimentArgs) -> Result<(), Error> {
    let cfg = args.config(&[20.0])?;
    announce("recover-demo", &cfg);
    let demo = recover_demo(&cfg)?;
    let mut s = String::new();
    s.push_str(&format!(
        "field: F_{} = F_{}[i]  (p = {})\n",
        demo.prime * demo.prime,
        demo.prime,
        demo.prime
    ));
    s.push_str("coefficient matrix (one row per relay):\n");
    for row in &demo.coeff_matrix {
        let cells: Vec<String> = row.iter().map(fp2_str).collect();
        s.push_str(&format!("  [ {} ]\n", cells.join("  ")));
    }
    s.push_str(&format!("determinant: {}\n", fp2_str(&demo.det)));
    match &demo.outcome {
        SolveOutcome::Singular => {
            s.push_str("system: singular — destination cannot recover this round\n");
        }
        SolveOutcome::Solved(recovered) => {
            s.push_str("system: nonsingular\n");
            for (i, (truth, rec)) in demo.messages.iter().zip(recovered).enumerate() {
                let t: Vec<String> = truth.iter().map(fp2_str).collect();
                let r: Vec<String> = rec.iter().map(fp2_str).collect();
                s.push_str(&format!("true w{}      = [{}]\n", i + 1, t.join(", ")));
                s.push_str(&format!("recovered w{} = [{}]\n", i + 1, r.join(", ")));
            }
            let ok = demo.recovered_ok == Some(true);
            s.push_str(&format!(
                "recovery: {}\n",
                if ok { "exact match" } else { "MISMATCH" }
            ));
        }
    }
    args.emit(&s)
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Config(_)
        | Error::InvalidParameter(_)
        | Error::InvalidField(_)
        | Error::DimensionMismatch { .. } => 2,
        _ => 3,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::RateCdf(args) => run_rate_cdf(args),
        Command::ErrorRate(args) => run_error_rate(args),
        Command::DofSlope(args) => run_dof_slope(args),
        Command::SearchBench(args) => run_search_bench(args),
        Command::RecoverDemo(args) => run_recover_demo(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
