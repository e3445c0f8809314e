//! `ibekit`: run the schemes, count their operations, print the tables
//! and handle key files.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod bench;
mod common;
mod demo;
mod keys;
mod tables;

#[derive(Parser, Debug)]
#[command(name = "ibekit", version, about = "Pairing-based IBE toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run setup, extract, encrypt and decrypt for each selected scheme.
    Demo(demo::DemoArgs),
    /// Per-phase operation counts and timings, checked against the symbolic rows.
    Bench(bench::BenchArgs),
    /// Print the classification and comparison tables.
    Tables(tables::TablesArgs),
    /// Generate, extract and inspect key files.
    #[command(subcommand)]
    Keys(keys::KeysCmd),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
}

/// Options shared by the running commands.
#[derive(Args, Debug, Clone)]
pub struct RunOpts {
    /// Curve profile: `tiny`, `bench` or a profile file.
    #[arg(long, default_value = "bench")]
    pub profile: String,
    /// Seed for the deterministic generator; drawn from the OS and printed when omitted.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match cli.cmd {
        Command::Demo(a) => demo::run(&a),
        Command::Bench(a) => bench::run(&a),
        Command::Tables(a) => tables::run(&a),
        Command::Keys(k) => keys::run(&k),
    };
    match out {
        Ok(common::Outcome { text, ok }) => {
            print!("{text}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
