//! Runs a test schedule through the gap channel.

use fixedbitset::FixedBitSet;
use rand::Rng;

use crate::design::{DesignPlan, Family, Indicators, Schedule, StageTwoPlan, TestKey};
use crate::model::{ChannelCurve, Population};

/// Outcome of every scheduled test, each measured exactly once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutcomeTable {
    schedule: Schedule,
    bits: FixedBitSet,
}

impl OutcomeTable {
    /// Fills the table by calling `test` once per key, in schedule order.
    pub fn from_fn(schedule: Schedule, mut test: impl FnMut(TestKey) -> bool) -> Self {
        let mut bits = FixedBitSet::with_capacity(schedule.len());
        for (i, key) in schedule.keys().enumerate() {
            bits.set(i, test(key));
        }
        OutcomeTable { schedule, bits }
    }

    pub fn schedule(&self) -> &Schedule {
        &self.schedule
    }

    /// Number of tests performed.
    pub fn tests(&self) -> usize {
        self.schedule.len()
    }

    /// `None` when `key` was never scheduled.
    pub fn get(&self, key: TestKey) -> Option<bool> {
        self.schedule.position(key).map(|i| self.bits[i])
    }

    pub fn positives(&self) -> usize {
        self.bits.count_ones(..)
    }
}

/// Defective members of each block, for fast pool counts.
fn defective_members(groups: impl Iterator<Item = impl AsRef<[usize]>>, pop: &Population) -> Vec<Vec<usize>> {
    groups
        .map(|g| {
            g.as_ref()
                .iter()
                .copied()
                .filter(|&j| pop.is_defective(j))
                .collect()
        })
        .collect()
}

fn family_defectives(families: &[Family], pop: &Population) -> Vec<Vec<Vec<usize>>> {
    families
        .iter()
        .map(|f| defective_members(f.blocks.iter(), pop))
        .collect()
}

/// Measures `reference` against every group in `indicator_defectives`,
/// appending outcomes in order.
fn run_reference<'a, R: Rng + ?Sized>(
    reference: &[usize],
    indicator_defectives: impl Iterator<Item = &'a [usize]>,
    pop: &Population,
    curve: &ChannelCurve,
    in_ref: &mut [bool],
    rng: &mut R,
    out: &mut impl FnMut(bool),
) {
    let mut base = 0;
    for &j in reference {
        in_ref[j] = true;
        base += usize::from(pop.is_defective(j));
    }
    for defs in indicator_defectives {
        let extra = defs.iter().filter(|&&j| !in_ref[j]).count();
        out(curve.sample(base + extra, rng));
    }
    for &j in reference {
        in_ref[j] = false;
    }
}

/// Runs every test of `plan`'s own schedule.
pub fn simulate_plan<R: Rng + ?Sized>(
    plan: &DesignPlan,
    pop: &Population,
    curve: &ChannelCurve,
    rng: &mut R,
) -> OutcomeTable {
    let schedule = plan.schedule();
    let mut bits = FixedBitSet::with_capacity(schedule.len());
    let mut next = 0;
    let mut push = |b: bool| {
        bits.set(next, b);
        next += 1;
    };
    let mut in_ref = vec![false; pop.n()];
    match &plan.indicators {
        Indicators::Families { families, .. } => {
            let defs = family_defectives(families, pop);
            for groups in &plan.reference_groups {
                for reference in groups {
                    let slots = defs.iter().flat_map(|f| f.iter().map(Vec::as_slice));
                    run_reference(reference, slots, pop, curve, &mut in_ref, rng, &mut push);
                }
            }
        }
        Indicators::Probes { probes } => {
            let defs = defective_members(probes.iter(), pop);
            for groups in &plan.reference_groups {
                for reference in groups {
                    let slots = defs.iter().map(Vec::as_slice);
                    run_reference(reference, slots, pop, curve, &mut in_ref, rng, &mut push);
                }
            }
        }
    }
    debug_assert_eq!(next, schedule.len());
    OutcomeTable { schedule, bits }
}

/// Runs the second adaptive stage: chosen groups against fresh families.
pub fn simulate_stage_two<R: Rng + ?Sized>(
    stage_one: &DesignPlan,
    stage_two: &StageTwoPlan,
    pop: &Population,
    curve: &ChannelCurve,
    rng: &mut R,
) -> OutcomeTable {
    let schedule = stage_two.schedule(stage_one.params.instance.blocks());
    let mut bits = FixedBitSet::with_capacity(schedule.len());
    let mut next = 0;
    let mut push = |b: bool| {
        bits.set(next, b);
        next += 1;
    };
    let mut in_ref = vec![false; pop.n()];
    let defs = family_defectives(&stage_two.families, pop);
    for (rho, selected) in stage_two.selected.iter().enumerate() {
        if let Some(r) = *selected {
            let reference = &stage_one.reference_groups[rho][r];
            let slots = defs.iter().flat_map(|f| f.iter().map(Vec::as_slice));
            run_reference(reference, slots, pop, curve, &mut in_ref, rng, &mut push);
        }
    }
    debug_assert_eq!(next, schedule.len());
    OutcomeTable { schedule, bits }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{sample_outcome, Algorithm, GapChannel, Instance, SeedStreams, Stream, TestPool};
    use crate::probmath::{recommend_params, Epsilons, Overrides};

    fn setup(alg: Algorithm) -> (DesignPlan, Population, ChannelCurve) {
        let inst = Instance {
            n: 200,
            d: 10,
            l: 2,
            u: 4,
        };
        let params = recommend_params(&inst, alg, Epsilons::uniform(0.2))
            .unwrap()
            .params
            .apply(&Overrides {
                references: Some(3),
                families: (alg != Algorithm::Ada).then_some(4),
                probe_families: (alg == Algorithm::Ada).then_some(5),
                ..Default::default()
            })
            .unwrap();
        let streams = SeedStreams::new(17);
        let pop = Population::random(200, 10, 2, 4, &mut streams.rng(Stream::Defectives)).unwrap();
        let plan = DesignPlan::generate(&params, 17, &mut streams.rng(Stream::Design)).unwrap();
        (plan, pop, GapChannel::bernoulli().curve(2, 4).unwrap())
    }

    #[test]
    fn fast_path_matches_generic_sampler() {
        // both paths draw from the stream only inside the gap, in schedule order
        for alg in [Algorithm::Nona, Algorithm::Ada] {
            let (plan, pop, curve) = setup(alg);
            let mut rng = SeedStreams::new(5).rng(Stream::Outcomes);
            let fast = simulate_plan(&plan, &pop, &curve, &mut rng);
            let mut rng = SeedStreams::new(5).rng(Stream::Outcomes);
            let slow = OutcomeTable::from_fn(plan.schedule(), |key| {
                let reference = &plan.reference_groups[key.division][key.reference];
                let pool = TestPool::union(reference, plan.indicator(key.family, key.block));
                sample_outcome(&pool, &pop, &curve, &mut rng)
            });
            assert_eq!(fast, slow);
            assert_eq!(fast.tests(), plan.params.predicted_tests().min(fast.tests()));
        }
    }

    #[test]
    fn outcomes_are_reproducible() {
        let (plan, pop, curve) = setup(Algorithm::Nona);
        let a = simulate_plan(&plan, &pop, &curve, &mut SeedStreams::new(1).rng(Stream::Outcomes));
        let b = simulate_plan(&plan, &pop, &curve, &mut SeedStreams::new(1).rng(Stream::Outcomes));
        assert_eq!(a, b);
        assert_eq!(a.tests(), plan.schedule().len());
        let key = TestKey {
            division: 0,
            reference: 0,
            family: 0,
            block: 0,
        };
        assert!(a.get(key).is_some());
        assert!(a
            .get(TestKey {
                family: 99,
                ..key
            })
            .is_none());
    }

    #[test]
    fn stage_two_matches_generic_sampler() {
        let (plan, pop, curve) = setup(Algorithm::Ada);
        let mut selected = vec![Some(1); plan.divisions.len()];
        selected[1] = None;
        let stage2 =
            StageTwoPlan::generate(&plan, selected, &mut SeedStreams::new(2).rng(Stream::StageTwoDesign))
                .unwrap();
        let mut rng = SeedStreams::new(3).rng(Stream::StageTwoOutcomes);
        let fast = simulate_stage_two(&plan, &stage2, &pop, &curve, &mut rng);
        let mut rng = SeedStreams::new(3).rng(Stream::StageTwoOutcomes);
        let slow = OutcomeTable::from_fn(stage2.schedule(8), |key| {
            let reference = &plan.reference_groups[key.division][key.reference];
            let block = &stage2.families[key.family].blocks[key.block];
            sample_outcome(&TestPool::union(reference, block), &pop, &curve, &mut rng)
        });
        assert_eq!(fast, slow);
        assert_eq!(fast.tests(), (plan.divisions.len() - 1) * 8 * plan.params.families);
    }
}
