// One non-adaptive run assembled by hand: plan, simulated outcomes, decode.
//
// ```text
// cargo run --release --example nonadaptive_recovery
// ```

use stgt::decoder::{DecodeTables, Score};
use stgt::simulate::simulate_plan;
use stgt::{
    decode_nonadaptive, recommend_params, Algorithm, DesignPlan, Epsilons, GapChannel, Instance,
    Population, SeedStreams, Stream,
};

pub struct Run {
    pub tests: usize,
    pub predicted: usize,
    pub truth: Vec<usize>,
    pub found: Vec<usize>,
    pub score: Score,
}

pub fn run_example() -> stgt::Result<Run> {
    let inst = Instance::new(600, 12, 2, 4)?;
    let rec = recommend_params(&inst, Algorithm::Nona, Epsilons::uniform(0.1))?;
    let curve = GapChannel::bernoulli().curve(inst.l, inst.u)?;
    let streams = SeedStreams::new(7);

    let population = Population::random(inst.n, inst.d, inst.l, inst.u, &mut streams.rng(Stream::Defectives))?;
    let plan = DesignPlan::generate(&rec.params, streams.seed(), &mut streams.rng(Stream::Design))?;
    plan.check_invariants()?;
    let outcomes = simulate_plan(&plan, &population, &curve, &mut streams.rng(Stream::Outcomes));
    let tables = DecodeTables::for_plan(&plan, &curve)?;
    let result = decode_nonadaptive(&plan, &outcomes, &tables)?;

    Ok(Run {
        tests: result.tests_used,
        predicted: rec.predicted_tests,
        truth: population.defectives().to_vec(),
        found: result.defectives(),
        score: result.score(&population),
    })
}

fn main() -> stgt::Result<()> {
    let run = run_example()?;
    println!("tests used {} (predicted {})", run.tests, run.predicted);
    println!("defectives {:?}", run.truth);
    println!("decoded    {:?}", run.found);
    println!("{:?}, exact = {}", run.score, run.score.exact());
    Ok(())
}
