use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mutt_cli::driver::{self, Options};
use mutt_core::convert::ConversionOptions;
use mutt_core::reduce::DEFAULT_FUEL;

/// Typechecker and normalizer for a multi-sorted dependent type theory
/// with rewrite rules.
#[derive(Parser)]
#[command(name = "mutt", version)]
struct Cli {
    /// Head-reduction step budget.
    #[arg(long, global = true, default_value_t = DEFAULT_FUEL)]
    fuel: u64,
    /// Compare terms of negative record types observation-wise.
    #[arg(long, global = true)]
    eta_records: bool,
    /// Treat all terms of this sort as convertible (repeatable).
    #[arg(long, global = true, value_name = "SORT")]
    irrelevant: Vec<String>,
    /// Log the conversion checker's non-structural steps to stderr.
    #[arg(long, global = true)]
    trace_conversion: bool,
    /// Emit diagnostics as JSON objects, one per line.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse, elaborate, and check files, running their directives.
    Check {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Print the normal form of a definition.
    Normalize {
        file: PathBuf,
        /// The `def` to normalize.
        #[arg(long)]
        term: String,
        /// Normalize under binders instead of stopping at weak head.
        #[arg(long)]
        deep: bool,
    },
    /// Combine two extensions of a common base into one file.
    Merge {
        base: PathBuf,
        ext1: PathBuf,
        ext2: PathBuf,
        /// Output file for the combined signature.
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Print the definition clause behind a diagnostic tag.
    Explain { tag: String },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let conv = ConversionOptions {
        eta_records: cli.eta_records,
        irrelevant_sorts: cli.irrelevant.iter().cloned().collect::<BTreeSet<_>>(),
        trace: cli.trace_conversion,
    };
    if let Err(d) = conv.validate() {
        eprintln!("{}", d);
        return ExitCode::from(2);
    }
    let opts = Options { fuel: cli.fuel, conv, json: cli.json };
    let code = match &cli.cmd {
        Cmd::Check { files } => driver::cmd_check(files, &opts),
        Cmd::Normalize { file, term, deep } => {
            driver::cmd_normalize(file, term, *deep, &opts)
        }
        Cmd::Merge { base, ext1, ext2, out } => {
            driver::cmd_merge(base, ext1, ext2, out, &opts)
        }
        Cmd::Explain { tag } => driver::cmd_explain(tag, cli.json),
    };
    ExitCode::from(code as u8)
}
