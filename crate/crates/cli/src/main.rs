use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use netsignal::pipeline::{self, BetweennessMode, PipelineConfig, FEATURES_FILE};
use netsignal::{Error, ErrorClass};

#[derive(Parser)]
#[command(name = "netsignal", version, about = "Weekly forum network and text signals against a market series")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load and window the messages, report counts and rejected rows.
    IngestCheck(ConfigArg),
    /// Build weekly graphs and write features.csv.
    Features(RunArgs),
    /// Run the correlation, Granger and regression battery on features.csv.
    Analyze {
        #[command(flatten)]
        config: ConfigArg,
        /// Features file; defaults to the one in the output directory.
        #[arg(long)]
        features: Option<PathBuf>,
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
    /// Features, analysis and manifest in one go.
    Run {
        #[command(flatten)]
        args: RunArgs,
        /// Validate config and inputs without writing anything.
        #[arg(long)]
        dry_run: bool,
    },
    /// Check the numerical core against built-in oracles.
    Selftest,
    /// Write a synthetic corpus with a planted signal and a config for it.
    Demo {
        #[arg(long, default_value = "demo")]
        dir: PathBuf,
        #[arg(long, default_value_t = 94)]
        weeks: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Args)]
struct ConfigArg {
    #[arg(long, short)]
    config: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exact,
    Sampled,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    config: ConfigArg,
    #[arg(long)]
    betweenness_mode: Option<Mode>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    window_size: Option<usize>,
    #[arg(long)]
    focal_word: Option<String>,
    #[arg(long)]
    output_dir: Option<PathBuf>,
    /// Worker threads; 0 uses all cores.
    #[arg(long)]
    workers: Option<usize>,
}

impl RunArgs {
    fn load(&self) -> netsignal::Result<PipelineConfig> {
        let mut cfg = PipelineConfig::load(&self.config.config)?;
        let net = &mut cfg.network;
        if let Some(m) = self.betweenness_mode {
            net.betweenness_mode = match m {
                Mode::Exact => BetweennessMode::Exact,
                Mode::Sampled => BetweennessMode::Sampled,
            };
        }
        if let Some(v) = self.samples {
            net.samples = v;
        }
        if let Some(v) = self.seed {
            net.seed = v;
        }
        if let Some(v) = self.window_size {
            net.window_size = v;
        }
        if let Some(v) = &self.focal_word {
            net.focal_word = v.to_lowercase();
        }
        if let Some(v) = self.workers {
            net.workers = v;
        }
        if let Some(v) = &self.output_dir {
            cfg.output_dir = v.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn exit_code(class: ErrorClass) -> u8 {
    match class {
        ErrorClass::Config => 1,
        ErrorClass::Data => 2,
        ErrorClass::Analysis => 3,
    }
}

/// `Ok(false)` reports failed self-test checks.
fn execute(command: Command) -> Result<bool, Error> {
    match command {
        Command::IngestCheck(c) => {
            let cfg = PipelineConfig::load(&c.config)?;
            let (s, rejections) = pipeline::ingest_check(&cfg)?;
            println!("messages\t{}", s.messages);
            println!("rejected\t{}", s.rejected);
            println!("in_horizon\t{}", s.in_horizon);
            println!("out_of_range\t{}", s.out_of_range);
            println!("comments\t{}", s.comments);
            for r in rejections {
                println!("line {}: {}", r.line, r.reason);
            }
        }
        Command::Features(args) => {
            let cfg = args.load()?;
            let run = pipeline::run_features(&cfg)?;
            println!(
                "{} weeks, {} rejected rows, {} messages outside the horizon",
                run.features.len(),
                run.rejections.len(),
                run.dropped
            );
            println!("{}", cfg.output_dir.join(FEATURES_FILE).display());
        }
        Command::Analyze {
            config,
            features,
            output_dir,
        } => {
            let mut cfg = PipelineConfig::load(&config.config)?;
            if let Some(dir) = output_dir {
                cfg.output_dir = dir;
            }
            let features = features.unwrap_or_else(|| cfg.output_dir.join(FEATURES_FILE));
            let run = pipeline::run_analyze(&cfg, &features)?;
            if let Some(inc) = run.report.incremental_adj_r2 {
                println!("incremental adjusted R2 {inc:.4}");
            }
            for p in run.written {
                println!("{}", p.display());
            }
        }
        Command::Run { args, dry_run } => {
            let cfg = args.load()?;
            if dry_run {
                pipeline::dry_run(&cfg)?;
                println!("configuration and inputs ok");
            } else {
                let out = pipeline::run_all(&cfg)?;
                println!(
                    "{} weeks, {} outputs recorded in the manifest",
                    out.features.features.len(),
                    out.manifest.outputs.len()
                );
            }
        }
        Command::Selftest => {
            let checks = netsignal::selftest::run();
            let mut failed = 0;
            for c in &checks {
                println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
                failed += usize::from(!c.passed);
            }
            if failed > 0 {
                eprintln!("{failed} of {} checks failed", checks.len());
                return Ok(false);
            }
        }
        Command::Demo { dir, weeks, seed } => {
            let corpus = netsignal::synth::planted_corpus(weeks, seed);
            let path = netsignal::synth::write_demo(&dir, &corpus)?;
            println!("{}", path.display());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match execute(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(exit_code(ErrorClass::Analysis)),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(e.class()))
        }
    }
}
