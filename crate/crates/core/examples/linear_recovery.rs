// Linear gap channel: each reference group's defective count is estimated
// from its probes, and items are decoded against that level.
//
// ```text
// cargo run --release --example linear_recovery
// ```

use stgt::decoder::{DecodeTables, Score};
use stgt::simulate::simulate_plan;
use stgt::{
    decode_linear, recommend_params, Algorithm, DesignPlan, DivisionStatus, Epsilons, GapChannel,
    Instance, Population, SeedStreams, Stream,
};

pub struct Run {
    pub levels: Vec<usize>,
    pub divisions: Vec<DivisionStatus>,
    pub score: Score,
}

pub fn run_example() -> stgt::Result<Run> {
    let inst = Instance::new(400, 8, 1, 4)?;
    let params = recommend_params(&inst, Algorithm::Lin, Epsilons::uniform(0.1))?.params;
    let curve = GapChannel::linear().curve(inst.l, inst.u)?;
    let streams = SeedStreams::new(5);

    let population = Population::random(inst.n, inst.d, inst.l, inst.u, &mut streams.rng(Stream::Defectives))?;
    let plan = DesignPlan::generate(&params, streams.seed(), &mut streams.rng(Stream::Design))?;
    let outcomes = simulate_plan(&plan, &population, &curve, &mut streams.rng(Stream::Outcomes));
    let tables = DecodeTables::for_plan(&plan, &curve)?;
    let result = decode_linear(&plan, &outcomes, &tables)?;
    Ok(Run {
        levels: tables.levels.clone(),
        divisions: result.divisions.clone(),
        score: result.score(&population),
    })
}

fn main() -> stgt::Result<()> {
    let run = run_example()?;
    println!("usable reference levels {:?}", run.levels);
    for (rho, status) in run.divisions.iter().enumerate() {
        println!("division {rho}: {status:?}");
    }
    println!("{:?}, exact = {}", run.score, run.score.exact());
    Ok(())
}
