use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tensorgap::bruteforce::{subrank_bruteforce_with, DEFAULT_CEILING};
use tensorgap::degeneration::{construct_w_degeneration, verify_certificate, verify_composed};
use tensorgap::gap::gap_constant;
use tensorgap::invariants::{has_rank_one_flattening, rank_signature, GenericityConfig};
use tensorgap::order3::trichotomy_with;
use tensorgap::Verdict;
use tensorgap_cli::census::{census_222_with, summarize, write_csv, DEFAULT_MAX_PRIME};
use tensorgap_cli::report::{signature_doc, ReportDocument};
use tensorgap_cli::{load_certificate, load_tensor, save_certificate, CliError, Result};

#[derive(Debug, Parser)]
#[command(name = "tensorgap", version, about = "Subrank classes, flattening ranks and W-tensor degenerations of small tensors")]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, env = "TENSORGAP_SEED", default_value_t = 0)]
    seed: u64,

    /// Starting integer bound for random maps over Q; doubles on retry.
    #[arg(long, global = true, default_value_t = 8)]
    bound: i64,

    /// Largest brute-force candidate count.
    #[arg(long, global = true, default_value_t = DEFAULT_CEILING)]
    ceiling: u128,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Order-3 class and asymptotic subrank constant of a tensor.
    Classify {
        file: PathBuf,
        #[arg(long, default_value_t = 8)]
        trials: usize,
    },
    /// Ranks of all flattenings.
    Ranks { file: PathBuf },
    /// Whether the tensor restricts to the unit tensor of size R (finite fields).
    Subrank {
        file: PathBuf,
        #[arg(long)]
        r: usize,
    },
    /// Checks a degeneration certificate; exit status 1 on rejection.
    VerifyCert { file: PathBuf },
    /// Writes a certificate degenerating the tensor to the W-tensor.
    MakeWCert {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Classifies every 2x2x2 tensor over F_P.
    Census {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAX_PRIME)]
        max_p: u64,
    },
    /// The constant k/(k-1)^((k-1)/k).
    Constant {
        #[arg(long)]
        k: usize,
    },
}

// a closed pipe on stdout is not an error
macro_rules! out {
    ($($arg:tt)*) => {{
        let _ = writeln!(std::io::stdout().lock(), $($arg)*);
    }};
}

fn run(cli: Cli) -> Result<bool> {
    let cfg = GenericityConfig { initial_bound: cli.bound, ..GenericityConfig::default() };
    match cli.command {
        Command::Classify { file, trials } => {
            let t = load_tensor(&file)?;
            let report = trichotomy_with(&t, cli.seed, trials, &cfg)?;
            out!("{}", serde_json::to_string_pretty(&ReportDocument::new(&report)).expect("serializable"));
            eprint!("{}", tensorgap_cli::report::human_summary(&report));
            Ok(true)
        }
        Command::Ranks { file } => {
            let t = load_tensor(&file)?;
            let sig = rank_signature(&t)?;
            let doc = serde_json::json!({
                "dims": t.dims(),
                "flattenings": signature_doc(&sig),
                "rank_one_flattening": has_rank_one_flattening(&t).ok().flatten().map(|s| s.factors()),
            });
            out!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
            Ok(true)
        }
        Command::Subrank { file, r } => {
            let t = load_tensor(&file)?;
            let found = subrank_bruteforce_with(&t, r, cli.ceiling)?;
            out!("{}", if found { format!("subrank >= {r}") } else { format!("subrank < {r}") });
            Ok(found)
        }
        Command::VerifyCert { file } => {
            let cert = load_certificate(&file)?;
            let verdict = verify_certificate(&cert);
            let composed = if cert.compression.is_some() { verify_composed(&cert) } else { Verdict::Accept };
            out!("{verdict}");
            if cert.compression.is_some() {
                out!("composed with compression: {composed}");
            }
            Ok(verdict.is_accept() && composed.is_accept())
        }
        Command::MakeWCert { file, out } => {
            let t = load_tensor(&file)?;
            let cert = construct_w_degeneration(&t, cli.seed)?;
            save_certificate(&cert, &out)?;
            out!("wrote {} ({} curve factors, {} rescalings)", out.display(), cert.curves.len(), cert.rescalings.len());
            Ok(true)
        }
        Command::Census { p, out, max_p } => {
            let rows = census_222_with(p, max_p, cli.ceiling)?;
            let mut buf = Vec::new();
            write_csv(&rows, p, &mut buf).expect("in-memory write");
            std::fs::write(&out, buf).map_err(|source| CliError::Io { path: out.clone(), source })?;
            let summary = summarize(p, &rows);
            for c in &summary.counts {
                out!("{:<16}{}", c.label, c.count);
            }
            out!("{:<16}{}", "total", summary.rows);
            Ok(summary.subrank_mismatches.is_empty())
        }
        Command::Constant { k } => {
            let c = gap_constant(k)?;
            out!("c_{} = {} ≈ {:.12}", c.k, c.exact, c.value);
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
