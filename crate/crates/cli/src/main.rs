//! `mathphys-bench`: verification reports, parameter sweeps and simulations.
//!
//! Exit status is 0 when everything passed, 1 when a check failed or a
//! computation broke down, and 2 on a usage or configuration error.

mod args;
mod simulate;
mod sweep;

use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use mathphys_core::report::Overrides;
use mathphys_core::suites;

use args::{Cli, Command, Common, Format};

#[derive(Debug)]
pub enum CmdError {
    Usage(String),
    Runtime(String),
}

impl From<mathphys_core::Error> for CmdError {
    fn from(e: mathphys_core::Error) -> Self {
        match e {
            mathphys_core::Error::Domain(_) => CmdError::Usage(e.to_string()),
            other => CmdError::Runtime(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let raw = match args::expand_config(std::env::args_os().collect()) {
        Ok(a) => a,
        Err(msg) => return fail(CmdError::Usage(msg)),
    };
    let cli = match Cli::try_parse_from(raw) {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => fail(e),
    }
}

fn fail(e: CmdError) -> ExitCode {
    match e {
        CmdError::Usage(m) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        CmdError::Runtime(m) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode, CmdError> {
    match cli.command {
        Command::Verify { problem, common } => {
            let problems = suites::parse_selection(&problem).map_err(CmdError::Usage)?;
            let overrides = Overrides::new(args::parse_overrides(&common.tol_override).map_err(CmdError::Usage)?);
            prepare_out(&common)?;
            let report = suites::run(&problems, common.seed, &overrides);
            let (text, ext) = match common.format.unwrap_or(Format::Json) {
                Format::Json => (report.to_json(), "json"),
                Format::Csv => (report.to_csv(), "csv"),
            };
            emit(&common, &format!("verify_{}.{ext}", problem.replace(',', "_")), &text)?;
            for p in &problems {
                let name = p.to_string();
                let rows = report.rows.iter().filter(|r| r.problem == name);
                let failed: Vec<&str> = rows.clone().filter(|r| !r.passed).map(|r| r.check.as_str()).collect();
                eprintln!(
                    "{name} {:<36} {} checks, {} failed{}",
                    p.topic(),
                    rows.count(),
                    failed.len(),
                    if failed.is_empty() { String::new() } else { format!(": {}", failed.join(" ")) }
                );
            }
            for k in &report.unused_overrides {
                eprintln!("warning: tolerance override '{k}' matched no check");
            }
            Ok(ExitCode::from(if report.all_passed() { 0 } else { 1 }))
        }
        Command::Sweep { problem, common, sweep } => {
            csv_only(&common)?;
            prepare_out(&common)?;
            let table = sweep::run(&problem, &sweep)?;
            emit(&common, &format!("sweep_{problem}_{}.csv", sweep.param), &table)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Simulate { scenario, common, sim } => {
            csv_only(&common)?;
            prepare_out(&common)?;
            let s = simulate::run(&scenario, &sim, common.seed)?;
            let summary = simulate::summary_csv(&s.summary);
            match &common.out {
                Some(dir) => {
                    write_file(dir, &format!("simulate_{scenario}.csv"), &s.table)?;
                    write_file(dir, &format!("simulate_{scenario}_monitors.csv"), &summary)?;
                }
                None => print!("{}", s.table),
            }
            eprint!("{summary}");
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn csv_only(c: &Common) -> Result<(), CmdError> {
    if c.format == Some(Format::Json) {
        return Err(CmdError::Usage("sweeps and simulations only write CSV".into()));
    }
    Ok(())
}

fn prepare_out(c: &Common) -> Result<(), CmdError> {
    if let Some(dir) = &c.out {
        std::fs::create_dir_all(dir).map_err(|e| CmdError::Usage(format!("cannot create {}: {e}", dir.display())))?;
    }
    Ok(())
}

fn emit(c: &Common, name: &str, text: &str) -> Result<(), CmdError> {
    match &c.out {
        Some(dir) => write_file(dir, name, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_file(dir: &Path, name: &str, text: &str) -> Result<(), CmdError> {
    let path = dir.join(name);
    std::fs::write(&path, text).map_err(|e| CmdError::Usage(format!("cannot write {}: {e}", path.display())))
}
