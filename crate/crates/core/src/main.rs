use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use stgt::harness::{params_report, probe_report, Experiment, ExperimentConfig};
use stgt::oracle::{midpoint_residual, oracle_sweep};
use stgt::probmath::{Overrides, ThresholdTable};
use stgt::{Algorithm, Error, GapChannel, Instance};

#[derive(Parser)]
#[command(name = "stgt", version, about = "Stochastic threshold group testing simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run seeded Monte Carlo trials and write trials.jsonl and summary.json.
    Simulate(SimulateArgs),
    /// Print the recommended design and its predicted test count.
    Params(ParamsArgs),
    /// Print the expected positive fractions and decision edges.
    Probe(ProbeArgs),
    /// Compare the closed forms against exhaustive enumeration on tiny instances.
    OracleSweep(SweepArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Bernoulli,
    Linear,
    Custom,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    Nona,
    Ada,
    Lin,
}

impl From<AlgorithmArg> for Algorithm {
    fn from(a: AlgorithmArg) -> Self {
        match a {
            AlgorithmArg::Nona => Algorithm::Nona,
            AlgorithmArg::Ada => Algorithm::Ada,
            AlgorithmArg::Lin => Algorithm::Lin,
        }
    }
}

#[derive(Args)]
struct InstanceArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    d: usize,
    #[arg(long)]
    l: usize,
    #[arg(long)]
    u: usize,
}

impl InstanceArgs {
    fn instance(&self) -> stgt::Result<Instance> {
        Instance::new(self.n, self.d, self.l, self.u)
    }
}

#[derive(Args)]
struct ChannelArgs {
    #[arg(long, value_enum, default_value = "bernoulli")]
    model: Model,
    /// JSON object mapping gap counts to positive probabilities (custom model).
    #[arg(long)]
    table: Option<PathBuf>,
}

impl ChannelArgs {
    fn channel(&self) -> stgt::Result<GapChannel> {
        match (self.model, &self.table) {
            (Model::Custom, Some(path)) => {
                let text = read(path)?;
                let table: BTreeMap<usize, f64> = serde_json::from_str(&text)
                    .map_err(|e| Error::Configuration(format!("{}: {e}", path.display())))?;
                Ok(GapChannel::custom(table))
            }
            (Model::Custom, None) => Err(Error::Configuration(
                "--model custom needs --table <path>".into(),
            )),
            (_, Some(_)) => Err(Error::Configuration(
                "--table only applies to --model custom".into(),
            )),
            (Model::Bernoulli, None) => Ok(GapChannel::bernoulli()),
            (Model::Linear, None) => Ok(GapChannel::linear()),
        }
    }
}

#[derive(Args)]
struct DesignArgs {
    #[arg(long, value_enum, default_value = "nona")]
    algorithm: AlgorithmArg,
    #[arg(long)]
    eps2: Option<f64>,
    #[arg(long)]
    eps3: Option<f64>,
    #[arg(long)]
    eps4: Option<f64>,
    /// Reference groups per division.
    #[arg(long = "R")]
    r: Option<usize>,
    /// Indicator families (non-adaptive and linear).
    #[arg(long = "I")]
    i: Option<usize>,
    /// Stage-one probe families (adaptive).
    #[arg(long = "I1")]
    i1: Option<usize>,
    /// Stage-two indicator families (adaptive).
    #[arg(long = "I2")]
    i2: Option<usize>,
    /// Fraction of each indicator block that is actually pooled.
    #[arg(long)]
    gamma2: Option<f64>,
}

impl DesignArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            references: self.r,
            families: self.i,
            probe_families: self.i1,
            stage_two_families: self.i2,
            gamma2: self.gamma2,
        }
    }
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[command(flatten)]
    channel: ChannelArgs,
    #[command(flatten)]
    design: DesignArgs,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// File listing the defective item indices (JSON array or whitespace/comma separated).
    #[arg(long)]
    defectives: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Record per-trial wall time (outputs are then no longer byte-reproducible).
    #[arg(long)]
    timings: bool,
    /// Self-check: exit with status 3 when the upper 95% bound of the failure rate exceeds this.
    #[arg(long)]
    check_max_failure: Option<f64>,
}

#[derive(Args)]
struct ParamsArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[command(flatten)]
    channel: ChannelArgs,
    #[command(flatten)]
    design: DesignArgs,
}

#[derive(Args)]
struct ProbeArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[command(flatten)]
    channel: ChannelArgs,
    /// Indicator block size; defaults to round(n / (d - l)).
    #[arg(long)]
    block_size: Option<usize>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, default_value_t = 12)]
    max_n: usize,
    /// Largest tolerated absolute difference; exit status 3 when exceeded.
    #[arg(long, default_value_t = 1e-12)]
    tolerance: f64,
    /// Directory for the per-quantity report (oracle.jsonl).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn read(path: &Path) -> stgt::Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Configuration(format!("{}: {e}", path.display())))
}

fn parse_defectives(path: &Path) -> stgt::Result<Vec<usize>> {
    read(path)?
        .split(|c: char| c.is_whitespace() || matches!(c, ',' | '[' | ']'))
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse()
                .map_err(|_| Error::Configuration(format!("{}: bad item index {s:?}", path.display())))
        })
        .collect()
}

enum Failure {
    Config(Error),
    Runtime(Error),
    Breach(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io { .. } | Error::Json(_) => Failure::Runtime(e),
            _ => Failure::Config(e),
        }
    }
}

fn simulate(args: SimulateArgs) -> Result<(), Failure> {
    let inst = args.instance.instance()?;
    let mut config = ExperimentConfig::new(
        inst,
        args.channel.channel()?,
        args.design.algorithm.into(),
        args.trials,
        args.seed,
    );
    config.eps2 = args.design.eps2;
    config.eps3 = args.design.eps3;
    config.eps4 = args.design.eps4;
    config.overrides = args.design.overrides();
    if let Some(path) = &args.defectives {
        config.defectives = Some(parse_defectives(path)?);
    }
    let experiment = Experiment::new(config)?.with_timings(args.timings);
    let output = experiment.run().map_err(Failure::Runtime)?;
    if let Some(dir) = &args.out {
        output.write(dir).map_err(Failure::Runtime)?;
    }
    let s = &output.summary;
    println!("trials           {}", s.trials);
    println!("predicted tests  {}", s.predicted_tests);
    if let (Some(rate), Some([lo, hi]), Some(tests)) = (s.recovery_rate, s.recovery_ci95, s.mean_tests) {
        println!("exact recovery   {rate:.4}  (95% CI {lo:.4} to {hi:.4})");
        println!("mean tests       {tests:.1}");
    }
    if let (Some(limit), Some([_, hi])) = (args.check_max_failure, s.failure_ci95) {
        if hi > limit {
            return Err(Failure::Breach(format!(
                "failure rate upper bound {hi:.4} exceeds {limit}"
            )));
        }
    }
    Ok(())
}

fn params(args: ParamsArgs) -> Result<(), Failure> {
    let inst = args.instance.instance()?;
    args.channel.channel()?.curve(inst.l, inst.u)?;
    let config = ExperimentConfig {
        eps2: args.design.eps2,
        eps3: args.design.eps3,
        eps4: args.design.eps4,
        overrides: args.design.overrides(),
        ..ExperimentConfig::new(inst, GapChannel::bernoulli(), args.design.algorithm.into(), 0, 0)
    };
    config.params()?;
    let report = params_report(&inst, config.algorithm, config.epsilons(), &config.overrides)?;
    println!("{report}");
    Ok(())
}

fn probe(args: ProbeArgs) -> Result<(), Failure> {
    let inst = args.instance.instance()?;
    let report = probe_report(&inst, &args.channel.channel()?, args.block_size)?;
    print!("{report}");
    Ok(())
}

fn sweep(args: SweepArgs) -> Result<(), Failure> {
    let channels = [GapChannel::bernoulli(), GapChannel::linear()];
    let reports = oracle_sweep(args.max_n, &channels)?;
    let worst = reports.iter().map(|r| r.abs_diff).fold(0.0, f64::max);
    let mut worst_identity: f64 = 0.0;
    for inst in stgt::oracle::sweep_instances(args.max_n) {
        for channel in &channels {
            let curve = channel.curve(inst.l, inst.u)?;
            for m in stgt::oracle::partition_block_sizes(&inst) {
                let levels = stgt::oracle::admissible_levels(&inst);
                match ThresholdTable::build(&inst, &curve, m, m, levels) {
                    Ok(table) => worst_identity = worst_identity.max(midpoint_residual(&table)),
                    Err(Error::Degenerate { .. }) => {}
                    Err(e) => return Err(e.into()),
                }
            }
        }
    }
    if let Some(dir) = &args.out {
        fs::create_dir_all(dir).map_err(|e| Failure::Runtime(Error::Io { path: dir.clone(), source: e }))?;
        let path = dir.join("oracle.jsonl");
        let mut text = String::new();
        for r in &reports {
            text.push_str(&serde_json::to_string(r).map_err(|e| Failure::Runtime(e.into()))?);
            text.push('\n');
        }
        fs::write(&path, text).map_err(|e| Failure::Runtime(Error::Io { path, source: e }))?;
    }
    println!("quantities compared  {}", reports.len());
    println!("max |exact - library|  {worst:.3e}");
    println!("max midpoint residual  {worst_identity:.3e}");
    if worst > args.tolerance || worst_identity > args.tolerance {
        return Err(Failure::Breach(format!("deviation above tolerance {:e}", args.tolerance)));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(a) => simulate(a),
        Command::Params(a) => params(a),
        Command::Probe(a) => probe(a),
        Command::OracleSweep(a) => sweep(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Breach(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(3)
        }
    }
}
