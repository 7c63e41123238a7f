mod commands;
mod figures;
mod grid;
mod scenario;
mod table;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "relay-outage",
    version,
    about = "Outage probability, outage capacity and diversity-multiplexing tradeoff of MIMO relay channels"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the table here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Outage probability over a grid of x or of (rate, SNR)
    Outage(commands::OutageArgs),
    /// Outage capacity over grids of eps and SNR
    Capacity(commands::CapacityArgs),
    /// Finite-SNR and asymptotic diversity-multiplexing tradeoff
    Dmt(commands::DmtArgs),
    /// Monte-Carlo outage estimate
    Mc(commands::McArgs),
    /// Per-relay and selection outage
    Selection(commands::SelectionArgs),
    /// Data series of a reference figure (fig2..fig6)
    Figure(figures::FigureArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Outage(a) => commands::outage(a),
        Command::Capacity(a) => commands::capacity(a),
        Command::Dmt(a) => commands::dmt(a),
        Command::Mc(a) => commands::mc(a),
        Command::Selection(a) => commands::selection(a),
        Command::Figure(a) => figures::run(a),
    };
    let text = match result {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(if e.is_invalid_input() { 2 } else { 3 });
        }
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(1);
    }
    ExitCode::SUCCESS
}
