// The two-stage scheme: stage one finds a critical reference group per
// division, stage two tests items against the chosen groups only.
//
// ```text
// cargo run --release --example adaptive_recovery
// ```

use stgt::decoder::{classify_reference_groups, DecodeTables, Score};
use stgt::design::StageTwoPlan;
use stgt::simulate::{simulate_plan, simulate_stage_two};
use stgt::{
    decode_adaptive, recommend_params, Algorithm, DesignPlan, Epsilons, GapChannel, Instance,
    Population, SeedStreams, Stream,
};

pub struct Run {
    pub stage_counts: Vec<usize>,
    pub selected: Vec<Option<usize>>,
    pub score: Score,
}

pub fn run_example() -> stgt::Result<Run> {
    let inst = Instance::new(2000, 20, 4, 6)?;
    let params = recommend_params(&inst, Algorithm::Ada, Epsilons::uniform(0.1))?.params;
    let curve = GapChannel::bernoulli().curve(inst.l, inst.u)?;
    let streams = SeedStreams::new(11);

    let population = Population::random(inst.n, inst.d, inst.l, inst.u, &mut streams.rng(Stream::Defectives))?;
    let plan = DesignPlan::generate(&params, streams.seed(), &mut streams.rng(Stream::Design))?;
    let first = simulate_plan(&plan, &population, &curve, &mut streams.rng(Stream::Outcomes));

    let stage_one_tables = DecodeTables::for_stage_one(&plan, &curve)?;
    let (_, selected) = classify_reference_groups(&plan, &first, &stage_one_tables)?;
    let stage_two = StageTwoPlan::generate(&plan, selected.clone(), &mut streams.rng(Stream::StageTwoDesign))?;
    let second = simulate_stage_two(&plan, &stage_two, &population, &curve, &mut streams.rng(Stream::StageTwoOutcomes));

    let tables = DecodeTables::for_adaptive(&plan, &stage_two, &curve)?;
    let result = decode_adaptive(&plan, &first, &stage_two, &second, &tables)?;
    Ok(Run {
        stage_counts: result.stage_counts.clone(),
        selected,
        score: result.score(&population),
    })
}

fn main() -> stgt::Result<()> {
    let run = run_example()?;
    println!("stage one tests {}, stage two tests {}", run.stage_counts[0], run.stage_counts[1]);
    println!("chosen reference group per division {:?}", run.selected);
    println!("{:?}, exact = {}", run.score, run.score.exact());
    Ok(())
}
