use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;

use qcost_cli::{parse_config_with, render_csv, render_svg, run_experiment, ConfigError, RunError};

/// Sweeps of the coil entropy cost of quantum control protocols.
#[derive(Parser, Debug)]
#[command(name = "qcost", version)]
struct Cli {
    /// lz-sweep-tau, lz-sweep-bures, penning-sweep-eta, penning-sweep-bures or circuit-validate
    experiment: String,

    /// key = value configuration file (required)
    #[arg(long)]
    config: Option<PathBuf>,

    /// CSV destination (default: the config's `output`, else `<experiment>.csv`)
    #[arg(long)]
    out: Option<PathBuf>,

    /// Also write an SVG plot next to the CSV
    #[arg(long)]
    svg: bool,

    /// Seed of the Langevin ensemble (circuit-validate)
    #[arg(long)]
    seed: Option<u64>,

    /// Config overrides as `--key value` pairs
    #[arg(
        trailing_var_arg = true,
        allow_hyphen_values = true,
        value_name = "--KEY VALUE"
    )]
    overrides: Vec<String>,
}

/// Splits the trailing `--key value` words. Once clap meets an unknown flag
/// every later word lands here, so the built-in flags are recognized too.
fn take_trailing(cli: &mut Cli) -> Result<Vec<(String, String)>, ConfigError> {
    let mut pairs = Vec::new();
    let raw = std::mem::take(&mut cli.overrides);
    let mut it = raw.into_iter();
    while let Some(flag) = it.next() {
        let key = flag
            .strip_prefix("--")
            .filter(|k| !k.is_empty())
            .ok_or_else(|| {
                ConfigError::Inconsistent(format!("expected `--key value`, found `{flag}`"))
            })?
            .to_owned();
        if key == "svg" {
            cli.svg = true;
            continue;
        }
        let value = it
            .next()
            .ok_or_else(|| ConfigError::Inconsistent(format!("override `--{key}` has no value")))?;
        match key.as_str() {
            "config" => cli.config = Some(PathBuf::from(value)),
            "out" => cli.out = Some(PathBuf::from(value)),
            _ => pairs.push((key, value)),
        }
    }
    Ok(pairs)
}

fn configure_threads() -> Result<(), ConfigError> {
    let Ok(raw) = std::env::var("QCOST_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        ConfigError::Inconsistent(format!(
            "QCOST_THREADS must be a positive integer, got `{raw}`"
        ))
    })?;
    // Fails only if a pool already exists, which cannot happen this early.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global();
    Ok(())
}

fn write(path: &Path, contents: &str) -> Result<(), RunError> {
    std::fs::write(path, contents).map_err(|source| RunError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn run(mut cli: Cli) -> Result<(), RunError> {
    configure_threads()?;
    let mut overrides = take_trailing(&mut cli)?;
    let config = cli
        .config
        .as_ref()
        .ok_or_else(|| ConfigError::MissingKey("--config".to_owned()))?;
    let text = std::fs::read_to_string(config).map_err(|e| {
        ConfigError::Inconsistent(format!("cannot read config {}: {e}", config.display()))
    })?;
    if let Some(out) = &cli.out {
        overrides.push(("output".to_owned(), out.display().to_string()));
    }
    if cli.svg {
        overrides.push(("svg".to_owned(), "true".to_owned()));
    }
    if let Some(seed) = cli.seed {
        overrides.push(("seed".to_owned(), seed.to_string()));
    }
    let cfg = parse_config_with(&text, Some(&cli.experiment), &overrides)?;

    let table = run_experiment(&cfg)?;
    let csv_path = cfg
        .output_path
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("{}.csv", cfg.experiment)));
    write(&csv_path, &render_csv(&table))?;
    eprintln!("wrote {} rows to {}", table.rows.len(), csv_path.display());
    if cfg.emit_svg {
        let svg_path = csv_path.with_extension("svg");
        write(&svg_path, &render_svg(&table))?;
        eprintln!("wrote {}", svg_path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
