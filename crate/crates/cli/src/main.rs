//! `gtacb`: command-line driver for seed selection and SIR evaluation.
//!
//! Every command writes its outputs plus `manifest.json` into `--out`.

mod args;
mod commands;
mod manifest;

use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{CommandFactory, FromArgMatches};

use args::{Cli, Command};
use manifest::Manifest;

fn parse(argv: Vec<String>) -> std::result::Result<Cli, clap::Error> {
    let mut cmd = Cli::command().args_override_self(true);
    let names: Vec<String> = cmd.get_subcommands().map(|s| s.get_name().to_string()).collect();
    for name in names {
        cmd = cmd.mut_subcommand(name, |s| s.args_override_self(true));
    }
    let matches = cmd.try_get_matches_from(argv)?;
    Cli::from_arg_matches(&matches)
}

fn execute(command: &Command) -> Result<Vec<std::path::PathBuf>> {
    let params = match command {
        Command::Ingest(a) => serde_json::to_value(a),
        Command::Centrality(a) => serde_json::to_value(a),
        Command::Communities(a) => serde_json::to_value(a),
        Command::Seeds(a) => serde_json::to_value(a),
        Command::Simulate(a) => serde_json::to_value(a),
        Command::Compare(a) => serde_json::to_value(a),
        Command::Generate(a) => serde_json::to_value(a),
    }?;
    let mut manifest = Manifest::new(command.name(), params);
    let outputs = match command {
        Command::Ingest(a) => commands::ingest(a, &mut manifest),
        Command::Centrality(a) => commands::centrality(a, &mut manifest),
        Command::Communities(a) => commands::communities(a, &mut manifest),
        Command::Seeds(a) => commands::seeds(a, &mut manifest),
        Command::Simulate(a) => commands::simulate(a, &mut manifest),
        Command::Compare(a) => commands::compare(a, &mut manifest),
        Command::Generate(a) => commands::generate(a, &mut manifest),
    }?;

    let dir = &command.run_opts().out;
    std::fs::create_dir_all(dir).with_context(|| format!("cannot create output directory `{}`", dir.display()))?;
    let mut written = Vec::with_capacity(outputs.len() + 1);
    for (name, contents) in outputs {
        let path = dir.join(&name);
        std::fs::write(&path, contents).with_context(|| format!("cannot write `{}`", path.display()))?;
        manifest.outputs.push(name);
        written.push(path);
    }
    let path = dir.join("manifest.json");
    std::fs::write(&path, manifest.to_json()).with_context(|| format!("cannot write `{}`", path.display()))?;
    written.push(path);
    Ok(written)
}

fn run(argv: Vec<String>) -> Result<()> {
    let argv = args::expand_config(argv)?;
    let cli = match parse(argv) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            e.print()?;
            return Ok(());
        }
        Err(e) => {
            let rendered = e.to_string();
            let first = rendered.lines().next().unwrap_or("invalid arguments");
            anyhow::bail!("{}", first.trim_start_matches("error: "));
        }
    };
    let jobs = cli.command.run_opts().jobs;
    let written = match jobs {
        Some(0) => anyhow::bail!("--jobs must be at least 1"),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .context("cannot start worker threads")?
            .install(|| execute(&cli.command))?,
        None => execute(&cli.command)?,
    };
    for path in written {
        println!("{}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(std::env::args().collect()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let message = format!("{e:#}").replace('\n', " ");
            eprintln!("error: {message}");
            ExitCode::FAILURE
        }
    }
}
