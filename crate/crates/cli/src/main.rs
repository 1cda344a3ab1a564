mod args;
mod commands;
mod config;
mod error;
mod report;

use std::process::ExitCode;

use clap::Parser;

use crate::args::Cli;
use crate::error::CliError;
use crate::report::Sink;

fn parse() -> Result<Cli, ExitCode> {
    let raw: Vec<_> = std::env::args_os().collect();
    let expanded = match config::expand(raw) {
        Ok((mut args, path)) => {
            // kept so the report echoes where the values came from
            if let Some(path) = path {
                let mut flag = std::ffi::OsString::from("--config=");
                flag.push(path);
                args.push(flag);
            }
            args
        }
        Err(e) => {
            eprintln!("error: {e}");
            return Err(ExitCode::from(e.exit_code() as u8));
        }
    };
    Cli::try_parse_from(expanded).map_err(|e| {
        let _ = e.print();
        if e.use_stderr() {
            ExitCode::from(1)
        } else {
            ExitCode::SUCCESS
        }
    })
}

fn main() -> ExitCode {
    let cli = match parse() {
        Ok(cli) => cli,
        Err(code) => return code,
    };
    let job = commands::dispatch(&cli.command);
    let (name, config) = (job.name, job.config.clone());
    let sink = Sink::new(name, job.common);
    let result = job.run().and_then(|report| {
        sink.write_success(name, config.clone(), &report)?;
        Ok(report)
    });
    match result {
        Ok(report) => {
            for (key, value) in &report.summary {
                println!("{key} = {value}");
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            if matches!(err, CliError::Numerical(_)) {
                if let Err(write_err) = sink.write_failure(name, config, &err) {
                    eprintln!("error: could not write the diagnostic report: {write_err}");
                }
            }
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
