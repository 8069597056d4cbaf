//! `nftaper`: exports tapers and pattern cuts and reproduces the window comparison table.

mod output;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use nftaper::experiment::{
    build_taper, cuts_for, run_table2, ExperimentConfig, Setup, Table2Report,
};
use nftaper::{concentration_j, ConcentrationPair, SlepianDesign, SteeringModel};

use output::{cut_csv, taper_csv, write_atomic};
use report::{report_json, RandomCheck};

const RANDOM_TRIALS: usize = 100;

#[derive(Parser)]
#[command(
    name = "nftaper",
    version,
    about = "Near-field taper design and sidelobe analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// JSON experiment configuration; the built-in reference setup when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory; overrides `output_dir` from the configuration.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Use the literal total region for concentration matrices.
    #[arg(long, global = true)]
    strict_paper: bool,
    /// Force spherical-wavefront steering for pattern evaluation.
    #[arg(long, global = true)]
    exact_steering: bool,
    /// Evaluate angle cuts along the distance ring.
    #[arg(long, global = true)]
    ring_cut: bool,
    /// Seed for comparing Slepian designs against random weight vectors.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Write `taper_<window>.csv`, plus a JSON sidecar for Slepian windows.
    Taper {
        #[arg(long)]
        window: String,
    },
    /// Write `cut_<window>_<kind>.csv`.
    Cut {
        #[arg(long)]
        window: String,
        #[arg(long, value_enum, default_value_t = CutKind::Both)]
        kind: CutKind,
    },
    /// Measure selected windows (all when none given) and write `metrics.json`.
    Metrics {
        #[arg(long)]
        window: Vec<String>,
    },
    /// Measure every configured window and write `table2.json` and `table2.txt`.
    Table2,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CutKind {
    Angle,
    Range,
    Both,
}

enum Failure {
    Config(String),
    Numerical(String),
}

impl From<nftaper::Error> for Failure {
    fn from(e: nftaper::Error) -> Self {
        use nftaper::Error::*;
        match e {
            InvalidConfig(_) | Domain(_) | Grid(_) => Failure::Config(e.to_string()),
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::Config(format!("{}: {e}", path.display()))
}

struct Run {
    config: ExperimentConfig,
    setup: Setup,
    out: PathBuf,
    seed: Option<u64>,
}

impl Run {
    fn load(common: &Common) -> Result<Self, Failure> {
        let mut config = match &common.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
                serde_json::from_str::<ExperimentConfig>(&text)
                    .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?
            }
            None => ExperimentConfig::default(),
        };
        config.modes.strict_paper |= common.strict_paper;
        config.modes.ring_cut |= common.ring_cut;
        if common.exact_steering {
            config.modes.steering = SteeringModel::Exact;
        }
        let setup = config.validate()?;
        let out = common
            .out
            .clone()
            .or_else(|| config.output_dir.as_ref().map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("out"));
        std::fs::create_dir_all(&out).map_err(|e| io_failure(&out, e))?;
        Ok(Self {
            config,
            setup,
            out,
            seed: common.seed,
        })
    }

    fn write(&self, name: &str, contents: &[u8]) -> Result<(), Failure> {
        let path = self.out.join(name);
        write_atomic(&path, contents).map_err(|e| io_failure(&path, e))?;
        println!("wrote {}", path.display());
        Ok(())
    }

    fn random_check(&self, design: &SlepianDesign) -> Result<Option<RandomCheck>, Failure> {
        let Some(seed) = self.seed else {
            return Ok(None);
        };
        let pair = ConcentrationPair::build(
            &self.setup.array,
            design.mainlobe.region,
            design.options.a_grid,
            design.total,
            design.options.b_grid,
            design.options.convention,
        )?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = self.setup.array.element_count();
        let mut max_random_j = 0.0f64;
        for _ in 0..RANDOM_TRIALS {
            let w: Vec<Complex64> = (0..n)
                .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            max_random_j = max_random_j.max(concentration_j(&w, &pair.a, &pair.b)?);
        }
        Ok(Some(RandomCheck {
            seed,
            trials: RANDOM_TRIALS,
            design_j: design.j,
            max_random_j,
            dominates: design.j >= max_random_j,
        }))
    }

    fn taper(&self, window: &str) -> Result<(), Failure> {
        let entry = self.config.window(window)?;
        let built = build_taper(&self.config, &self.setup, entry)?;
        self.write(
            &format!("taper_{window}.csv"),
            taper_csv(&built.taper).as_bytes(),
        )?;
        let sidecar = match (&built.slepian, built.classic_lambda) {
            (Some(d), _) => Some(json!({
                "name": entry.name,
                "spec": entry.spec,
                "lambda_max": d.leading_eigenvalues.first(),
                "j": d.j,
                "leading_eigenvalues": d.leading_eigenvalues,
                "mainlobe": d.mainlobe,
                "total": d.total,
                "a_grid": d.options.a_grid,
                "b_grid": d.options.b_grid,
                "convention": d.options.convention,
                "total_mode": d.options.total_mode,
                "enlargement": d.options.enlargement,
                "regularization": d.regularization,
                "max_residual": d.max_residual,
                "phase_rms_rad": d.phase_rms,
                "random_check": self.random_check(d)?,
            })),
            (None, Some(lambda)) => Some(json!({
                "name": entry.name,
                "spec": entry.spec,
                "lambda_max": lambda,
            })),
            _ => None,
        };
        if let Some(s) = sidecar {
            self.write(&format!("taper_{window}.json"), pretty(&s).as_bytes())?;
        }
        Ok(())
    }

    fn cut(&self, window: &str, kind: CutKind) -> Result<(), Failure> {
        let entry = self.config.window(window)?;
        let built = build_taper(&self.config, &self.setup, entry)?;
        let (angle, range) = cuts_for(&self.config, &self.setup, &built.taper)?;
        if kind != CutKind::Range {
            self.write(
                &format!("cut_{window}_angle.csv"),
                cut_csv(&angle).as_bytes(),
            )?;
        }
        if kind != CutKind::Angle {
            self.write(
                &format!("cut_{window}_range.csv"),
                cut_csv(&range).as_bytes(),
            )?;
        }
        Ok(())
    }

    fn measure(
        &self,
        config: &ExperimentConfig,
        stem: &str,
        with_text: bool,
    ) -> Result<(), Failure> {
        let report = run_table2(config)?;
        let checks = self.checks(&report)?;
        self.write(
            &format!("{stem}.json"),
            pretty(&report_json(&report, &checks)).as_bytes(),
        )?;
        let text = report.to_text();
        if with_text {
            self.write(&format!("{stem}.txt"), text.as_bytes())?;
        }
        print!("{text}");
        if let Some(w) = report.per_window.iter().find(|w| w.error.is_some()) {
            return Err(Failure::Numerical(format!(
                "window {} failed: {}",
                w.name,
                w.error.as_deref().unwrap_or_default()
            )));
        }
        Ok(())
    }

    fn checks(&self, report: &Table2Report) -> Result<Vec<Option<RandomCheck>>, Failure> {
        report
            .per_window
            .iter()
            .map(
                |w| match w.taper.as_ref().and_then(|t| t.slepian.as_ref()) {
                    Some(d) => self.random_check(d),
                    None => Ok(None),
                },
            )
            .collect()
    }

    fn metrics(&self, windows: &[String]) -> Result<(), Failure> {
        let mut config = self.config.clone();
        if !windows.is_empty() {
            config.windows = windows
                .iter()
                .map(|name| self.config.window(name).cloned())
                .collect::<nftaper::Result<_>>()?;
        }
        self.measure(&config, "metrics", false)
    }
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn run(cli: Cli) -> Result<(), Failure> {
    let run = Run::load(&cli.common)?;
    match cli.command {
        Command::Taper { window } => run.taper(&window),
        Command::Cut { window, kind } => run.cut(&window, kind),
        Command::Metrics { window } => run.metrics(&window),
        Command::Table2 => run.measure(&run.config, "table2", true),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("configuration error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            ExitCode::from(3)
        }
    }
}
