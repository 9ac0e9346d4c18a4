use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use fpk_cli::config::FieldMode;
use fpk_cli::scenarios::{builtin, BUILTIN};
use fpk_cli::{parse_config, run, RunOptions};

#[derive(Parser)]
#[command(name = "fpk", version, about = "Critical points of fibered toric potentials")]
struct Cli {
    /// List the built-in scenarios and exit.
    #[arg(long)]
    list_scenarios: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file or a built-in scenario by name.
    Run {
        scenario: String,
        /// Target order of the lift, overriding the file.
        #[arg(long)]
        order: Option<String>,
        /// Largest cyclotomic conductor searched for seeds.
        #[arg(long)]
        conductor: Option<u64>,
        #[arg(long, value_parser = ["exact", "float"])]
        field: Option<String>,
        /// Write the report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Append an identity check over N random treed types.
        #[arg(long, value_name = "N")]
        emit_index_sample: Option<usize>,
        /// Include wall-clock timings (makes the report nondeterministic).
        #[arg(long)]
        timings: bool,
    },
}

fn load(scenario: &str) -> anyhow::Result<String> {
    let path = Path::new(scenario);
    if path.exists() {
        return std::fs::read_to_string(path).with_context(|| format!("reading {scenario}"));
    }
    match builtin(scenario) {
        Some(text) => Ok(text.to_string()),
        None => bail!("no file or built-in scenario named `{scenario}` (try --list-scenarios)"),
    }
}

fn index_seed() -> anyhow::Result<u64> {
    match std::env::var("FPK_SEED") {
        Ok(s) => s.trim().parse().with_context(|| format!("FPK_SEED must be an unsigned integer, got `{s}`")),
        Err(_) => Ok(0),
    }
}

fn main_inner(cli: Cli) -> anyhow::Result<i32> {
    if cli.list_scenarios {
        for (name, text) in BUILTIN {
            let summary = text.lines().next().unwrap_or("").trim_start_matches('#').trim();
            println!("{name:<10} {summary}");
        }
        return Ok(0);
    }
    let Some(Command::Run { scenario, order, conductor, field, out, emit_index_sample, timings }) = cli.command else {
        bail!("nothing to do; see --help");
    };
    let mut s = parse_config(&load(&scenario)?).with_context(|| format!("in {scenario}"))?;
    if let Some(o) = order {
        let t = fpk_cli::config::parse_rational(&o).map_err(|m| anyhow::anyhow!("--order: {m}"))?;
        if t <= num_traits::Zero::zero() {
            bail!("--order must be positive");
        }
        s.solver.target_order = Some(t);
    }
    if let Some(c) = conductor {
        if c == 0 {
            bail!("--conductor must be positive");
        }
        s.solver.conductor_bound = c;
    }
    if let Some(f) = field {
        s.solver.field = f.parse::<FieldMode>().map_err(anyhow::Error::msg)?;
    }
    let opts = RunOptions { index_sample: emit_index_sample, index_seed: index_seed()?, timings };
    let report = run(&s, &opts)?;
    let json = report.to_json();
    match out {
        Some(path) => std::fs::write(&path, json + "\n").with_context(|| format!("writing {}", path.display()))?,
        None => println!("{json}"),
    }
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    // usage errors share exit code 1 with every other failure, since 2
    // reports a run without a full set of candidates
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match main_inner(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
