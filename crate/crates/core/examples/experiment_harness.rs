// Seeded Monte Carlo trials written as `trials.jsonl` and `summary.json`.
//
// ```text
// cargo run --release --example experiment_harness [out-dir]
// ```

use std::path::PathBuf;

use stgt::harness::{run_experiment, ExperimentConfig, Summary};
use stgt::{Algorithm, GapChannel, Instance};

pub fn run_example_in(out: &std::path::Path) -> stgt::Result<Summary> {
    let inst = Instance::new(1000, 10, 1, 3)?;
    let config = ExperimentConfig::new(inst, GapChannel::bernoulli(), Algorithm::Ada, 20, 42).with_epsilon(0.1);
    Ok(run_experiment(config, Some(out))?.summary)
}

pub fn run_example() -> stgt::Result<Summary> {
    run_example_in(&std::env::temp_dir().join("stgt-experiment-harness"))
}

fn main() -> stgt::Result<()> {
    let summary = match std::env::args_os().nth(1) {
        Some(dir) => run_example_in(&PathBuf::from(dir))?,
        None => run_example()?,
    };
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(())
}
