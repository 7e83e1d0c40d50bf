// Recommended designs for the three schemes on one instance, next to the
// asymptotic leading terms.
//
// ```text
// cargo run --example recommend_params
// ```

use stgt::harness::{params_report, ParamsReport};
use stgt::probmath::Overrides;
use stgt::{Algorithm, Epsilons, Instance};

pub fn run_example() -> stgt::Result<Vec<ParamsReport>> {
    let inst = Instance::new(10_000, 100, 4, 8)?;
    [Algorithm::Nona, Algorithm::Ada, Algorithm::Lin]
        .into_iter()
        .map(|alg| params_report(&inst, alg, Epsilons::uniform(0.1), &Overrides::default()))
        .collect()
}

fn main() -> stgt::Result<()> {
    for report in run_example()? {
        println!("{report}\n");
    }
    Ok(())
}
