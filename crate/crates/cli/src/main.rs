//! `prepro`: Hom/Ext, composition-series Euler characteristics and
//! multiplication-formula checks for modules over preprojective algebras.

mod commands;
mod error;
mod refs;

use clap::{Parser, Subcommand, ValueEnum};
use std::io::Write;
use std::process::ExitCode;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "prepro", version, about = "Exact computations with preprojective algebra modules")]
pub struct Cli {
    /// Output format; `json` is the structured form, `table` a view of it.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    pub format: Format,
    /// Worker threads for counting (default: all cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub jobs: Option<u64>,
    /// Use exactly these primes, in order, wherever primes are searched.
    #[arg(long, global = true, value_delimiter = ',')]
    pub primes: Option<Vec<u64>>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the preprojective relations and nilpotency.
    Validate { module: String },
    /// Hom, Ext^1 and the Ext^2 cokernel in both directions, with the dimension formulas.
    Ext { left: String, right: String },
    /// Euler characteristic of the composition series of one type.
    Euler {
        module: String,
        /// Vertex names, comma separated, e.g. `1,2,4,4`.
        #[arg(long, allow_hyphen_values = true)]
        word: String,
    },
    /// Euler characteristics for every word of the module's content.
    Fingerprint { module: String },
    /// Check a multiplication formula for the pair.
    Verify {
        #[arg(long, value_parser = ["1.1", "1.2"])]
        thm: String,
        left: String,
        right: String,
        /// Derivation file for the left-to-right class (1.2; default: a basis class).
        #[arg(long)]
        d: Option<String>,
        /// Derivation file for the right-to-left class (1.2).
        #[arg(long)]
        g: Option<String>,
        /// Anchors for the strata of Ext^1(left, right) (1.1).
        #[arg(long, num_args = 1..)]
        fwd: Vec<String>,
        /// Anchors for the strata of Ext^1(right, left) (1.1).
        #[arg(long, num_args = 1..)]
        bwd: Vec<String>,
    },
    /// The worked D4 example end to end.
    ExampleD4 {
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        lambda: String,
    },
}

fn configure(cli: &Cli) -> Result<(), CliError> {
    if let Some(j) = cli.jobs {
        prepro_core::par::set_jobs(j as usize);
    }
    if let Some(ps) = &cli.primes {
        prepro_core::flag_euler::set_prime_override(Some(ps.clone()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure(&cli).and_then(|_| commands::run(&cli));
    match result {
        Ok(out) => {
            let text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&out.json).expect("json") + "\n",
                Format::Table => out.table,
            };
            // a closed pipe (e.g. `| head`) is not an error
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            ExitCode::from(if out.ok { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
