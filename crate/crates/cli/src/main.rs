use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use hubbath::{parse_config, preset_names, run_pipeline, run_presets, RunManifest, RunOptions, PRESETS};
use hubbath_core::AngleConvention;

#[derive(Parser)]
#[command(name = "sim", version, about = "Dissipative two-site Hubbard model simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Shots per time step (0 for exact populations)
    #[arg(long, global = true)]
    shots: Option<u64>,

    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Exact populations instead of sampled counts
    #[arg(long, global = true)]
    exact: bool,

    /// Correct readout by plain matrix inversion
    #[arg(long, global = true)]
    raw_inverse: bool,

    #[arg(long, global = true, value_enum)]
    angle_convention: Option<AngleArg>,

    /// Run independent presets concurrently
    #[arg(long, global = true)]
    parallel: bool,

    #[arg(long, global = true, env = "SIM_OUTPUT_DIR")]
    output_dir: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment described by a JSON file
    Run { config: PathBuf },
    /// Run a named preset, or `all`
    Preset { name: String },
    /// List the available presets
    ListPresets,
}

#[derive(Clone, Copy, ValueEnum)]
enum AngleArg {
    Circuit,
    Stated,
}

impl Cli {
    fn options(&self) -> RunOptions {
        RunOptions {
            shots: self.shots,
            seed: self.seed,
            exact: self.exact,
            raw_inverse: self.raw_inverse,
            angle_convention: self.angle_convention.map(|a| match a {
                AngleArg::Circuit => AngleConvention::Circuit,
                AngleArg::Stated => AngleConvention::Stated,
            }),
        }
    }
}

fn report(m: &RunManifest) {
    println!("{}: {:.3}s", m.name, m.wall_clock_seconds);
    println!("  {}", m.files.exact);
    println!("  {}", m.files.run);
    for f in m.files.mitigated.values() {
        println!("  {f}");
    }
}

fn run_file(cli: &Cli, path: &Path) -> Result<()> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut config = parse_config(&text).with_context(|| format!("in {}", path.display()))?;
    cli.options().apply(&mut config);
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "run".into());
    let prefix = match (&config.output_path, &cli.output_dir) {
        (Some(p), Some(dir)) => dir.join(Path::new(p).file_name().unwrap_or(p.as_ref())),
        (Some(p), None) => PathBuf::from(p),
        (None, Some(dir)) => dir.join(&stem),
        (None, None) => PathBuf::from(&stem),
    };
    report(&run_pipeline(&stem, &config, &prefix)?);
    Ok(())
}

fn run_named(cli: &Cli, name: &str) -> Result<()> {
    let names: Vec<&str> = if name == "all" {
        preset_names()
    } else {
        vec![name]
    };
    let out_dir = cli.output_dir.clone().unwrap_or_else(|| PathBuf::from("results"));
    let results = run_presets(&names, &out_dir, &cli.options(), cli.parallel);
    if let [single] = results.as_slice() {
        return single.as_ref().map(report).map_err(|e| anyhow::anyhow!("{e:#}"));
    }
    let mut failures = 0;
    for r in results {
        match r {
            Ok(m) => report(&m),
            Err(e) => {
                eprintln!("error: {e:#}");
                failures += 1;
            }
        }
    }
    if failures > 0 {
        anyhow::bail!("{failures} preset(s) failed");
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run { config } => run_file(&cli, config),
        Command::Preset { name } => run_named(&cli, name),
        Command::ListPresets => {
            for p in PRESETS {
                println!("{:<16} {}", p.name, p.description);
            }
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
