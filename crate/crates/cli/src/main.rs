mod args;
mod report;
mod run;

use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command, Format};

const USAGE: u8 = 1;
const COMPUTATION: u8 = 2;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(USAGE),
            };
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn resolve(cli: &Cli) -> Result<Command, String> {
    match (&cli.config, &cli.command) {
        (Some(_), Some(_)) => Err("--config and a subcommand are mutually exclusive".into()),
        (Some(path), None) => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
        }
        (None, Some(cmd)) => Ok(cmd.clone()),
        (None, None) => Err("no subcommand given; run with --help for the list".into()),
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("TORUS_SPECTRA_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("TORUS_SPECTRA_THREADS must be a positive integer, got {raw:?}"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn execute(cli: Cli) -> Result<(), (u8, String)> {
    let usage = |m: String| (USAGE, m);
    let cmd = resolve(&cli).map_err(usage)?;
    configure_threads().map_err(usage)?;
    let config = serde_json::to_value(&cmd).expect("configs serialize");
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let io_err = |e: io::Error| (COMPUTATION, e.to_string());
    if cli.dump_config {
        report::write_json_line(&mut out, &config).map_err(io_err)?;
        return out.flush().map_err(io_err);
    }
    let rep = run::run(&cmd).map_err(|e| (COMPUTATION, e.to_string()))?;
    match cli.format {
        Format::Json => rep.write_json(&mut out, cmd.name(), &config),
        Format::Csv => rep.write_csv(&mut out),
    }
    .map_err(io_err)?;
    out.flush().map_err(io_err)
}
