use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Parser, Subcommand, ValueEnum};
use streamarb::feasibility::RfBudget;
use streamarb_cli::{cmd_compare, cmd_feasibility, cmd_gen_traffic, cmd_paper_example, cmd_run, GenParams, TrafficKind};

#[derive(Parser)]
#[command(name = "streamarb", version, about = "Stream arbitration simulator for multiband RF NoC interconnects")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Uniform,
    Hotspot,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scheme from a config file.
    Run {
        config: PathBuf,
        #[arg(short, long, default_value = "out")]
        out: PathBuf,
    },
    /// Run both schemes on identical traffic.
    Compare {
        config: PathBuf,
        #[arg(short, long, default_value = "out")]
        out: PathBuf,
    },
    /// Replay the built-in four-node example and self-check the results.
    PaperExample,
    /// Write a synthetic trace file.
    GenTraffic {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        nodes: usize,
        #[arg(long)]
        cycles: u64,
        #[arg(long)]
        rate: f64,
        #[arg(long, default_value_t = 1)]
        flit_min: u64,
        #[arg(long, default_value_t = 4)]
        flit_max: u64,
        #[arg(long)]
        hotspot: Option<usize>,
        #[arg(long)]
        hotspot_fraction: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Arbitration spectrum budget.
    Feasibility {
        #[arg(long, default_value_t = 16)]
        nodes: usize,
        #[arg(long, default_value_t = 2.0)]
        cycle_ghz: f64,
        #[arg(long, default_value_t = 6)]
        bits_per_symbol: u32,
        #[arg(long, default_value_t = 4.0)]
        spacing_ghz: f64,
        #[arg(long, default_value_t = 350.0)]
        ft_ghz: f64,
    },
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<bool> {
    match cli.command {
        Command::Run { config, out: dir } => cmd_run(&config, &dir, out)?,
        Command::Compare { config, out: dir } => cmd_compare(&config, &dir, out)?,
        Command::PaperExample => return cmd_paper_example(out),
        Command::GenTraffic { kind, nodes, cycles, rate, flit_min, flit_max, hotspot, hotspot_fraction, seed, out: path } => {
            let kind = match (kind, hotspot, hotspot_fraction) {
                (Kind::Uniform, None, None) => TrafficKind::Uniform,
                (Kind::Uniform, _, _) => bail!("--hotspot and --hotspot-fraction only apply to --kind hotspot"),
                (Kind::Hotspot, Some(hotspot), Some(fraction)) => TrafficKind::Hotspot { hotspot, fraction },
                (Kind::Hotspot, _, _) => bail!("--kind hotspot needs --hotspot and --hotspot-fraction"),
            };
            let params = GenParams { kind, nodes, cycles, rate, flit_min, flit_max, seed };
            cmd_gen_traffic(&params, &path, out)?
        }
        Command::Feasibility { nodes, cycle_ghz, bits_per_symbol, spacing_ghz, ft_ghz } => {
            let budget = RfBudget::new(nodes, cycle_ghz, bits_per_symbol, spacing_ghz, ft_ghz)?;
            cmd_feasibility(&budget, out)?
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match dispatch(cli, &mut out) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
