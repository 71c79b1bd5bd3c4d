use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ecdsep::harness::{self, RunConfig, SweepSpec};
use ecdsep::{Error, Num, Result};

#[derive(Parser)]
#[command(
    name = "ecdsep",
    version,
    about = "Energy-conserving descent experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Single optimizer run: trajectory.csv and summary.json.
    Run(Common),
    /// Fixed-budget random search: sweep.csv and sweep_summary.json.
    Sweep(Common),
    /// Radius histogram vs the predicted concentration radius.
    Concentrate(Common),
    /// Tail-mean objective for several concentration exponents.
    EtaScan(Common),
    /// Single run plus the best tail average of its iterates.
    Swa(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    steps: Option<u64>,
    /// Put wall-clock time into summary.json (makes it non-reproducible).
    #[arg(long)]
    timing: bool,
    /// Also write a loss-vs-step SVG chart.
    #[arg(long)]
    svg: bool,
}

impl Common {
    fn run_config(&self) -> Result<RunConfig> {
        let mut cfg = RunConfig::from_path(&self.config)?;
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(steps) = self.steps {
            cfg.max_steps = steps;
        }
        Ok(cfg)
    }

    fn out_dir(&self, from_config: Option<&Path>) -> PathBuf {
        self.out
            .clone()
            .or_else(|| from_config.map(Path::to_path_buf))
            .unwrap_or_else(|| PathBuf::from("out"))
    }
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join(name), contents)?;
    Ok(())
}

fn json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable") + "\n"
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Run(args) => {
            let cfg = args.run_config()?;
            let report = harness::run_single(&cfg)?;
            let dir = args.out_dir(cfg.out.as_deref());
            report.write_artifacts(&dir, args.timing)?;
            if args.svg {
                write(
                    &dir,
                    "trajectory.svg",
                    &harness::loss_chart_svg(&report.log, "F vs step"),
                )?;
            }
            eprintln!(
                "steps {} final F {:?} ({} ms)",
                report.summary.steps, report.summary.final_f, report.wall_ms
            );
            match report.failure {
                Some(e) => Err(e),
                None => Ok(()),
            }
        }
        Command::Sweep(args) => {
            let mut spec = SweepSpec::from_path(&args.config)?;
            if let Some(seed) = args.seed {
                spec.seed = seed;
            }
            if let Some(steps) = args.steps {
                spec.steps = steps;
            }
            let report = harness::run_sweep(&spec)?;
            report.write_artifacts(&args.out_dir(None))?;
            for kind in &spec.optimizers {
                if let Some(best) = report.best(*kind) {
                    eprintln!(
                        "{:>7} best {} ({})",
                        kind.name(),
                        Num(best.metric),
                        best.params.describe()
                    );
                }
            }
            Ok(())
        }
        Command::Concentrate(args) => {
            let cfg = args.run_config()?;
            let report = harness::concentrate(&cfg)?;
            let dir = args.out_dir(cfg.out.as_deref());
            write(&dir, "histogram.csv", &report.histogram_csv())?;
            write(&dir, "concentration.json", &report.theory_json())?;
            eprintln!(
                "mode F {} predicted {} (deviation {:.3})",
                Num(report.empirical_mode_f),
                Num(report.predicted_f),
                report.mode_f_rel_deviation
            );
            Ok(())
        }
        Command::EtaScan(args) => {
            let cfg = args.run_config()?;
            let rows = harness::eta_scan(&cfg)?;
            write(
                &args.out_dir(cfg.out.as_deref()),
                "eta_scan.csv",
                &harness::eta_rows_csv(&rows),
            )
        }
        Command::Swa(args) => {
            let cfg = args.run_config()?;
            let (report, summary) = harness::swa(&cfg)?;
            let dir = args.out_dir(cfg.out.as_deref());
            report.write_artifacts(&dir, args.timing)?;
            write(&dir, "swa.json", &json(&summary))?;
            if args.svg {
                write(
                    &dir,
                    "trajectory.svg",
                    &harness::loss_chart_svg(&report.log, "F vs step"),
                )?;
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_byte(&e))
        }
    }
}

fn exit_byte(e: &Error) -> u8 {
    e.exit_code().clamp(1, 255) as u8
}
