//! Command-line front end for the decorated-graph gap certifier.
//!
//! Subcommands: `certify` (gap certificate for a maximal degree and
//! decoration), `table` (per-(d,n) transfer quantities as CSV), `verify`
//! (the oracle/property suite), `conjecture` (exact minimal-eigenvalue scan)
//! and `compare` (newer vs older bound flavors).
//!
//! Exit codes for `certify`: 0 = certified gapped, 2 = not certified,
//! 3 = inconclusive at the precision cap, 1 = usage or I/O error. `verify`
//! exits 2 if any check fails.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use aklt_core::certify::{certify, Mode, Verdict};
use aklt_core::interval::MIN_PRECISION;
use aklt_core::report;
use aklt_core::verify::{Caps, CheckStatus};

#[derive(Parser)]
#[command(
    name = "aklt-gap",
    version,
    about = "Certified spectral-gap bounds for AKLT models on decorated graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputArgs {
    /// Write the report to this path (atomically) instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Certify a uniform gap for all graphs of maximal degree `delta` at
    /// decoration `n`.
    Certify {
        /// Maximal vertex degree of the underlying graph (>= 3).
        #[arg(long)]
        delta: u32,
        /// Decoration: number of chain sites inserted on every edge.
        #[arg(long)]
        n: u32,
        /// Evaluation mode for the transfer quantities.
        #[arg(long, default_value = "exact")]
        mode: String,
        /// Starting interval precision in bits (>= 64); escalates as needed.
        #[arg(long, default_value_t = 128)]
        precision: u32,
        /// Attach the non-certified numeric gap prefactor when the star
        /// spectra are within reach.
        #[arg(long)]
        with_prefactor: bool,
        /// Output format: `txt` (structured text) or `csv`.
        #[arg(long, default_value = "txt")]
        format: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Tabulate per-(d, n) transfer quantities as CSV.
    Table {
        /// Degree range `a..b` (inclusive) or a single value.
        #[arg(long, default_value = "1..4")]
        d_range: String,
        /// Decoration range `a..b` (inclusive) or a single value.
        #[arg(long, default_value = "1..6")]
        n_range: String,
        #[arg(long, default_value = "exact")]
        mode: String,
        #[arg(long, default_value_t = 128)]
        precision: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the oracle/property suite.
    Verify {
        /// Comma-separated subset of checks to run (default: all).
        #[arg(long)]
        only: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Scan the exact minimal eigenvalue against its closed-form prediction.
    Conjecture {
        #[arg(long, default_value = "2..30")]
        d_range: String,
        #[arg(long, default_value = "1..3")]
        n_range: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Compare the newer (Schatten) and older (operator-norm) bound flavors.
    Compare {
        #[arg(long, default_value = "3..10")]
        d_range: String,
        #[arg(long, default_value = "0..10")]
        n_range: String,
        #[arg(long, default_value_t = 192)]
        precision: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Debugging dumps: matching listings and dense operators as plain text.
    Dump {
        /// List all r-matchings of {1..m}: `--matchings m,r`.
        #[arg(long, value_name = "m,r")]
        matchings: Option<String>,
        /// Dense matching operator, one row per line: `--operator m,r`.
        #[arg(long, value_name = "m,r")]
        operator: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn parse_pair(text: &str) -> anyhow::Result<(usize, usize)> {
    let (a, b) = text
        .split_once(',')
        .context("expected two comma-separated integers")?;
    Ok((a.trim().parse()?, b.trim().parse()?))
}

fn parse_range(text: &str) -> anyhow::Result<(u32, u32)> {
    let (lo, hi) = match text.split_once("..") {
        Some((a, b)) => (a.trim().parse()?, b.trim().parse()?),
        None => {
            let v: u32 = text.trim().parse()?;
            (v, v)
        }
    };
    if lo > hi {
        bail!("empty range '{text}'");
    }
    Ok((lo, hi))
}

fn check_precision(bits: u32) -> anyhow::Result<()> {
    if bits < MIN_PRECISION {
        bail!("precision must be at least {MIN_PRECISION} bits, got {bits}");
    }
    Ok(())
}

/// Writes via a temporary file in the destination directory, then renames.
fn emit(output: &OutputArgs, content: &str) -> anyhow::Result<()> {
    match &output.out {
        None => {
            print!("{content}");
            Ok(())
        }
        Some(path) => {
            let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
            let mut tmp = tempfile::NamedTempFile::new_in(dir.unwrap_or(Path::new(".")))
                .context("creating temporary file")?;
            tmp.write_all(content.as_bytes())
                .context("writing report")?;
            tmp.persist(path)
                .with_context(|| format!("renaming into {}", path.display()))?;
            Ok(())
        }
    }
}

fn certificate_csv(cert: &aklt_core::certify::GapCertificate) -> String {
    let mut out = String::from("key,value\n");
    out.push_str(&format!("verdict,{}\n", cert.verdict));
    out.push_str(&format!("gapped,{}\n", cert.gapped));
    out.push_str(&format!("delta_max,{}\n", cert.delta_max));
    out.push_str(&format!("n,{}\n", cert.n));
    out.push_str(&format!("mode,{}\n", cert.mode));
    out.push_str(&format!(
        "threshold,{}\n",
        aklt_core::numbers::format_q(&cert.threshold)
    ));
    let (lo, hi) = cert
        .epsilon_upper
        .to_decimal_strings(report::INTERVAL_DIGITS);
    out.push_str(&format!("epsilon_lo,{lo}\n"));
    out.push_str(&format!("epsilon_hi,{hi}\n"));
    out.push_str(&format!("precision_bits,{}\n", cert.precision_bits));
    out
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Certify {
            delta,
            n,
            mode,
            precision,
            with_prefactor,
            format,
            output,
        } => {
            check_precision(precision)?;
            let mode: Mode = mode.parse()?;
            let cert = certify(delta, n, mode, with_prefactor, precision)?;
            let text = match format.as_str() {
                "txt" => report::certificate_to_text(&cert),
                "csv" => certificate_csv(&cert),
                other => bail!("unknown format '{other}' (expected txt or csv)"),
            };
            emit(&output, &text)?;
            Ok(match cert.verdict {
                Verdict::Gapped => 0,
                Verdict::NotCertified => 2,
                Verdict::Inconclusive => 3,
            })
        }
        Command::Table {
            d_range,
            n_range,
            mode,
            precision,
            output,
        } => {
            check_precision(precision)?;
            let mode: Mode = mode.parse()?;
            let (d_lo, d_hi) = parse_range(&d_range)?;
            let (n_lo, n_hi) = parse_range(&n_range)?;
            let mut rows = Vec::new();
            for d in d_lo..=d_hi {
                for n in n_lo..=n_hi {
                    rows.push(report::table_row(d, n, mode, precision)?);
                }
            }
            emit(&output, &report::write_table(&rows))?;
            Ok(0)
        }
        Command::Verify { only, output } => {
            let selection: Option<Vec<String>> = only.map(|s| {
                s.split(',')
                    .map(|t| t.trim().to_string())
                    .filter(|t| !t.is_empty())
                    .collect()
            });
            let results = aklt_core::verify::run(selection.as_deref(), &Caps::default())?;
            emit(&output, &report::verify_report(&results))?;
            let failed = results
                .iter()
                .any(|r| matches!(r.status, CheckStatus::Fail));
            Ok(if failed { 2 } else { 0 })
        }
        Command::Conjecture {
            d_range,
            n_range,
            output,
        } => {
            let d = parse_range(&d_range)?;
            let n = parse_range(&n_range)?;
            emit(&output, &report::conjecture_report(d, n)?)?;
            Ok(0)
        }
        Command::Compare {
            d_range,
            n_range,
            precision,
            output,
        } => {
            check_precision(precision)?;
            let (d_lo, d_hi) = parse_range(&d_range)?;
            let (n_lo, n_hi) = parse_range(&n_range)?;
            let mut text = String::from(report::COMPARE_HEADER);
            text.push('\n');
            for d in d_lo..=d_hi {
                for n in n_lo..=n_hi {
                    text.push_str(&report::compare_row(d, n, precision)?);
                    text.push('\n');
                }
            }
            emit(&output, &text)?;
            Ok(0)
        }
        Command::Dump {
            matchings,
            operator,
            output,
        } => {
            let mut text = String::new();
            if matchings.is_none() && operator.is_none() {
                bail!("dump needs --matchings or --operator");
            }
            if let Some(spec) = matchings {
                let (m, r) = parse_pair(&spec)?;
                for p in aklt_core::combinatorics::enumerate_matchings(m, r)? {
                    text.push_str(&format!("{p}\n"));
                }
            }
            if let Some(spec) = operator {
                let (m, r) = parse_pair(&spec)?;
                let op = aklt_core::dense::matching_operator_dense(m, r)?;
                for i in 0..op.dim() {
                    let row: Vec<String> = (0..op.dim())
                        .map(|j| aklt_core::numbers::format_q(&op.entry(i, j)))
                        .collect();
                    text.push_str(&row.join(" "));
                    text.push('\n');
                }
            }
            emit(&output, &text)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help and version requests are not errors
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
