//! Randomized pooling designs and their test schedules.
//!
//! A design splits the universe into `P` divisions. Each division gets `R`
//! reference groups drawn from the items outside it, so no reference group
//! ever contains an item it is later used to decode. Indicator families are
//! independent balanced partitions of the universe into `d - l` blocks; the
//! non-adaptive schedule tests every (reference group, block) pair.

use rand::seq::{index, SliceRandom};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Algorithm;
use crate::probmath::{round_half_up, DesignParams};

pub const PLAN_SCHEMA: &str = "stgt.plan/v1";

/// Uniformly random partition of `items` into `parts` blocks whose sizes
/// differ by at most one; the first `len % parts` blocks get the extra item.
/// Blocks keep the input order of `items`.
///
/// Block labels with the required multiplicities are shuffled and dealt out
/// in item order, which is the same law as shuffling the items and slicing.
pub fn balanced_partition<R: Rng + ?Sized>(
    items: Vec<usize>,
    parts: usize,
    rng: &mut R,
) -> Vec<Vec<usize>> {
    assert!(parts >= 1, "partition into zero parts");
    let base = items.len() / parts;
    let extra = items.len() % parts;
    let mut labels: Vec<u32> = (0..parts)
        .flat_map(|k| std::iter::repeat_n(k as u32, base + usize::from(k < extra)))
        .collect();
    labels.shuffle(rng);
    let mut out: Vec<Vec<usize>> = (0..parts)
        .map(|k| Vec::with_capacity(base + usize::from(k < extra)))
        .collect();
    for (j, k) in items.into_iter().zip(labels) {
        out[k as usize].push(j);
    }
    out
}

pub fn build_divisions<R: Rng + ?Sized>(
    n: usize,
    divisions: usize,
    rng: &mut R,
) -> Result<Vec<Vec<usize>>> {
    if divisions < 2 || divisions > n {
        return Err(Error::InvalidParameter(format!(
            "need 2 <= P <= n, got P = {divisions}, n = {n}"
        )));
    }
    Ok(balanced_partition((0..n).collect(), divisions, rng))
}

/// `references` uniform `ref_size`-subsets of each division's complement.
pub fn sample_reference_groups<R: Rng + ?Sized>(
    n: usize,
    divisions: &[Vec<usize>],
    references: usize,
    ref_size: usize,
    rng: &mut R,
) -> Result<Vec<Vec<Vec<usize>>>> {
    let mut out = Vec::with_capacity(divisions.len());
    let mut inside = vec![false; n];
    for division in divisions {
        for &j in division {
            inside[j] = true;
        }
        let complement: Vec<usize> = (0..n).filter(|&j| !inside[j]).collect();
        for &j in division {
            inside[j] = false;
        }
        if ref_size > complement.len() {
            return Err(Error::InvalidParameter(format!(
                "reference size {ref_size} exceeds division complement of {} items",
                complement.len()
            )));
        }
        let groups = (0..references)
            .map(|_| {
                let mut group: Vec<usize> = index::sample(rng, complement.len(), ref_size)
                    .into_iter()
                    .map(|i| complement[i])
                    .collect();
                group.sort_unstable();
                group
            })
            .collect();
        out.push(groups);
    }
    Ok(out)
}

/// One random partition of the universe into indicator blocks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Family {
    pub blocks: Vec<Vec<usize>>,
}

impl Family {
    pub fn new(blocks: Vec<Vec<usize>>) -> Self {
        Family { blocks }
    }

    /// Block holding `item`, if this family covers it. Linear in the family size.
    pub fn block_of(&self, item: usize) -> Option<usize> {
        self.blocks.iter().position(|b| b.contains(&item))
    }
}

/// Independent balanced partitions into `blocks` parts, each block truncated
/// to `round(gamma2 |block|)` items, plus one uniformly picked probe block per family.
pub fn sample_indicator_families<R: Rng + ?Sized>(
    n: usize,
    blocks: usize,
    families: usize,
    gamma2: f64,
    rng: &mut R,
) -> Result<(Vec<Family>, Vec<usize>)> {
    if blocks == 0 {
        return Err(Error::InvalidParameter("d - l must be at least 1".into()));
    }
    let mut out = Vec::with_capacity(families);
    let mut picks = Vec::with_capacity(families);
    for _ in 0..families {
        let mut parts = balanced_partition((0..n).collect(), blocks, rng);
        if gamma2 < 1.0 {
            for block in &mut parts {
                block.shuffle(rng);
                block.truncate(round_half_up(gamma2 * block.len() as f64));
                block.sort_unstable();
            }
        }
        out.push(Family::new(parts));
        picks.push(rng.gen_range(0..blocks));
    }
    Ok((out, picks))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Indicators {
    /// Full partitions, used by the non-adaptive schemes and adaptive stage two.
    Families {
        families: Vec<Family>,
        probe_picks: Vec<usize>,
    },
    /// Independent uniform groups, used by adaptive stage one.
    Probes { probes: Vec<Vec<usize>> },
}

/// Everything needed to replay the tests of one trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignPlan {
    pub seed: u64,
    pub params: DesignParams,
    pub divisions: Vec<Vec<usize>>,
    pub reference_groups: Vec<Vec<Vec<usize>>>,
    pub indicators: Indicators,
}

#[derive(Serialize, Deserialize)]
struct PlanDocument {
    schema: String,
    plan: DesignPlan,
}

impl DesignPlan {
    /// Draws a plan. The adaptive algorithm gets its stage-one probes here;
    /// stage two is drawn later by [`StageTwoPlan::generate`].
    pub fn generate<R: Rng + ?Sized>(params: &DesignParams, seed: u64, rng: &mut R) -> Result<Self> {
        let inst = params.instance;
        let divisions = build_divisions(inst.n, params.divisions, rng)?;
        let reference_groups = sample_reference_groups(
            inst.n,
            &divisions,
            params.references,
            params.ref_size,
            rng,
        )?;
        let indicators = match params.algorithm {
            Algorithm::Nona | Algorithm::Lin => {
                let (families, probe_picks) = sample_indicator_families(
                    inst.n,
                    inst.blocks(),
                    params.families,
                    params.gamma2,
                    rng,
                )?;
                Indicators::Families {
                    families,
                    probe_picks,
                }
            }
            Algorithm::Ada => {
                let count = params.probe_families.ok_or_else(|| {
                    Error::InvalidParameter("adaptive design without I1".into())
                })?;
                let size = params.probe_size.ok_or_else(|| {
                    Error::InvalidParameter("adaptive design without probe size".into())
                })?;
                if size > inst.n {
                    return Err(Error::InvalidParameter(format!(
                        "probe size {size} exceeds n = {}",
                        inst.n
                    )));
                }
                let probes = (0..count)
                    .map(|_| {
                        let mut g = index::sample(rng, inst.n, size).into_vec();
                        g.sort_unstable();
                        g
                    })
                    .collect();
                Indicators::Probes { probes }
            }
        };
        Ok(DesignPlan {
            seed,
            params: params.clone(),
            divisions,
            reference_groups,
            indicators,
        })
    }

    pub fn n(&self) -> usize {
        self.params.instance.n
    }

    pub fn families(&self) -> &[Family] {
        match &self.indicators {
            Indicators::Families { families, .. } => families,
            Indicators::Probes { .. } => &[],
        }
    }

    /// Division index of every item.
    pub fn division_of(&self) -> Vec<usize> {
        let mut of = vec![0; self.n()];
        for (rho, division) in self.divisions.iter().enumerate() {
            for &j in division {
                of[j] = rho;
            }
        }
        of
    }

    /// The test schedule this plan defines on its own.
    pub fn schedule(&self) -> Schedule {
        let divisions = self.divisions.len();
        let references = self.params.references;
        match &self.indicators {
            Indicators::Families { families, .. } => Schedule::CrossProduct {
                divisions,
                references,
                families: families.len(),
                blocks: self.params.instance.blocks(),
            },
            Indicators::Probes { probes } => Schedule::Probes {
                divisions,
                references,
                probes: probes.len(),
            },
        }
    }

    /// Group of items for an indicator slot: probe `family` or block `(family, block)`.
    pub fn indicator(&self, family: usize, block: usize) -> &[usize] {
        match &self.indicators {
            Indicators::Families { families, .. } => &families[family].blocks[block],
            Indicators::Probes { probes } => &probes[family],
        }
    }

    /// Checks the structural invariants every generated plan satisfies.
    pub fn check_invariants(&self) -> Result<()> {
        let n = self.n();
        let fail = |msg: String| Err(Error::InvalidParameter(msg));
        let mut seen = vec![false; n];
        for division in &self.divisions {
            for &j in division {
                if j >= n || seen[j] {
                    return fail(format!("item {j} repeated or out of range in divisions"));
                }
                seen[j] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return fail("divisions do not cover the universe".into());
        }
        if !sizes_balanced(self.divisions.iter().map(Vec::len)) {
            return fail("division sizes differ by more than one".into());
        }
        let division_of = self.division_of();
        for (rho, groups) in self.reference_groups.iter().enumerate() {
            for group in groups {
                if group.len() != self.params.ref_size {
                    return fail(format!("reference group of size {}", group.len()));
                }
                if group.iter().any(|&j| division_of[j] == rho) {
                    return fail(format!("reference group intersects its own division {rho}"));
                }
            }
        }
        if let Indicators::Families { families, probe_picks } = &self.indicators {
            if probe_picks.len() != families.len() {
                return fail("one probe pick per family required".into());
            }
            for family in families {
                if family.blocks.len() != self.params.instance.blocks() {
                    return fail(format!("family with {} blocks", family.blocks.len()));
                }
                if self.params.gamma2 >= 1.0 {
                    let covered: usize = family.blocks.iter().map(Vec::len).sum();
                    let mut seen = vec![false; n];
                    for &j in family.blocks.iter().flatten() {
                        if j < n {
                            seen[j] = true;
                        }
                    }
                    if covered != n || seen.contains(&false) {
                        return fail("family does not partition the universe".into());
                    }
                    if !sizes_balanced(family.blocks.iter().map(Vec::len)) {
                        return fail("block sizes differ by more than one".into());
                    }
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&PlanDocument {
            schema: PLAN_SCHEMA.to_string(),
            plan: self.clone(),
        })?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: PlanDocument = serde_json::from_str(text)?;
        if doc.schema != PLAN_SCHEMA {
            return Err(Error::Configuration(format!(
                "unsupported plan schema {:?}",
                doc.schema
            )));
        }
        let plan = doc.plan;
        let n = plan.n();
        if let Indicators::Families { families, .. } = &plan.indicators {
            if families.iter().flat_map(|f| f.blocks.iter().flatten()).any(|&j| j >= n) {
                return Err(Error::Configuration("plan block item out of range".into()));
            }
        }
        Ok(plan)
    }
}

fn sizes_balanced(sizes: impl Iterator<Item = usize>) -> bool {
    let (lo, hi) = sizes.fold((usize::MAX, 0), |(lo, hi), s| (lo.min(s), hi.max(s)));
    hi - lo.min(hi) <= 1
}

/// Second stage of the adaptive scheme: one chosen critical reference group
/// per division, crossed with fresh indicator families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageTwoPlan {
    /// Chosen reference index per division; `None` when stage one found no critical group.
    pub selected: Vec<Option<usize>>,
    pub families: Vec<Family>,
}

impl StageTwoPlan {
    pub fn generate<R: Rng + ?Sized>(
        stage_one: &DesignPlan,
        selected: Vec<Option<usize>>,
        rng: &mut R,
    ) -> Result<Self> {
        let params = &stage_one.params;
        if selected.len() != stage_one.divisions.len() {
            return Err(Error::InvalidParameter(
                "one selection per division required".into(),
            ));
        }
        let (families, _) = sample_indicator_families(
            params.instance.n,
            params.instance.blocks(),
            params.families,
            params.gamma2,
            rng,
        )?;
        Ok(StageTwoPlan { selected, families })
    }

    pub fn schedule(&self, blocks: usize) -> Schedule {
        Schedule::Selected {
            active: self
                .selected
                .iter()
                .enumerate()
                .filter_map(|(rho, r)| r.map(|r| (rho, r)))
                .collect(),
            families: self.families.len(),
            blocks,
        }
    }
}

/// One scheduled threshold test. Probe-stage tests use `block = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TestKey {
    pub division: usize,
    pub reference: usize,
    pub family: usize,
    pub block: usize,
}

/// Compact description of which (reference group, indicator) pairs are tested.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Schedule {
    /// Every reference group against every block of every family.
    CrossProduct {
        divisions: usize,
        references: usize,
        families: usize,
        blocks: usize,
    },
    /// Every reference group against every stage-one probe.
    Probes {
        divisions: usize,
        references: usize,
        probes: usize,
    },
    /// The selected `(division, reference)` pairs against every block.
    Selected {
        active: Vec<(usize, usize)>,
        families: usize,
        blocks: usize,
    },
}

impl Schedule {
    pub fn len(&self) -> usize {
        match self {
            Schedule::CrossProduct {
                divisions,
                references,
                families,
                blocks,
            } => divisions * references * families * blocks,
            Schedule::Probes {
                divisions,
                references,
                probes,
            } => divisions * references * probes,
            Schedule::Selected {
                active,
                families,
                blocks,
            } => active.len() * families * blocks,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Position of `key` in schedule order, `None` when not scheduled.
    pub fn position(&self, key: TestKey) -> Option<usize> {
        match *self {
            Schedule::CrossProduct {
                divisions,
                references,
                families,
                blocks,
            } => (key.division < divisions
                && key.reference < references
                && key.family < families
                && key.block < blocks)
                .then(|| {
                    ((key.division * references + key.reference) * families + key.family) * blocks
                        + key.block
                }),
            Schedule::Probes {
                divisions,
                references,
                probes,
            } => (key.division < divisions
                && key.reference < references
                && key.family < probes
                && key.block == 0)
                .then(|| (key.division * references + key.reference) * probes + key.family),
            Schedule::Selected {
                ref active,
                families,
                blocks,
            } => {
                let slot = active
                    .iter()
                    .position(|&(rho, r)| rho == key.division && r == key.reference)?;
                (key.family < families && key.block < blocks)
                    .then(|| (slot * families + key.family) * blocks + key.block)
            }
        }
    }

    /// Every scheduled key, in schedule order.
    pub fn keys(&self) -> Box<dyn Iterator<Item = TestKey> + '_> {
        match *self {
            Schedule::CrossProduct {
                divisions,
                references,
                families,
                blocks,
            } => Box::new((0..divisions).flat_map(move |division| {
                (0..references).flat_map(move |reference| {
                    (0..families).flat_map(move |family| {
                        (0..blocks).map(move |block| TestKey {
                            division,
                            reference,
                            family,
                            block,
                        })
                    })
                })
            })),
            Schedule::Probes {
                divisions,
                references,
                probes,
            } => Box::new((0..divisions).flat_map(move |division| {
                (0..references).flat_map(move |reference| {
                    (0..probes).map(move |family| TestKey {
                        division,
                        reference,
                        family,
                        block: 0,
                    })
                })
            })),
            Schedule::Selected {
                ref active,
                families,
                blocks,
            } => Box::new(active.iter().flat_map(move |&(division, reference)| {
                (0..families).flat_map(move |family| {
                    (0..blocks).map(move |block| TestKey {
                        division,
                        reference,
                        family,
                        block,
                    })
                })
            })),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Instance, Population, SeedStreams, Stream};
    use crate::probmath::{hypergeom_pmf, recommend_params, Epsilons};
    use proptest::prelude::*;

    fn rng(seed: u64) -> rand_chacha::ChaCha8Rng {
        SeedStreams::new(seed).rng(Stream::Design)
    }

    #[test]
    fn divisions_even_and_remainder() {
        let parts = build_divisions(12, 3, &mut rng(1)).unwrap();
        assert!(parts.iter().all(|p| p.len() == 4));
        let parts = build_divisions(10, 3, &mut rng(1)).unwrap();
        let sizes: Vec<usize> = parts.iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![4, 3, 3]);
        assert!(build_divisions(10, 1, &mut rng(1)).is_err());
    }

    #[test]
    fn divisions_cover_universe_across_seeds() {
        for seed in 0..100 {
            let parts = build_divisions(37, 4, &mut rng(seed)).unwrap();
            let mut all: Vec<usize> = parts.concat();
            all.sort_unstable();
            assert_eq!(all, (0..37).collect::<Vec<_>>());
        }
    }

    #[test]
    fn reference_groups_avoid_their_division() {
        for seed in 0..100 {
            let mut r = rng(seed);
            let divisions = build_divisions(50, 3, &mut r).unwrap();
            let groups = sample_reference_groups(50, &divisions, 4, 20, &mut r).unwrap();
            for (rho, gs) in groups.iter().enumerate() {
                for g in gs {
                    assert_eq!(g.len(), 20);
                    assert!(g.iter().all(|j| !divisions[rho].contains(j)));
                }
            }
        }
        let divisions = build_divisions(10, 2, &mut rng(0)).unwrap();
        assert!(sample_reference_groups(10, &divisions, 1, 6, &mut rng(0)).is_err());
        let empty = sample_reference_groups(10, &divisions, 3, 0, &mut rng(0)).unwrap();
        assert!(empty.iter().flatten().all(Vec::is_empty));
    }

    #[test]
    fn reference_critical_rate_matches_pmf() {
        // n = 60, d = 6, l = 1: complement of a 20-item division, ref size 10
        let mut r = rng(99);
        let pop = Population::random(60, 6, 1, 2, &mut r).unwrap();
        let divisions = build_divisions(60, 3, &mut r).unwrap();
        let complement_size = 60 - divisions[0].len();
        let complement_defectives = pop.d() - pop.count_defective(&divisions[0]);
        let expected = hypergeom_pmf(1, 10, complement_size, complement_defectives);
        let trials = 100_000;
        let hits = (0..trials)
            .filter(|_| {
                let g = sample_reference_groups(60, &divisions[..1], 1, 10, &mut r).unwrap();
                pop.count_defective(&g[0][0]) == 1
            })
            .count();
        let rate = hits as f64 / trials as f64;
        let sigma = (expected * (1.0 - expected) / trials as f64).sqrt();
        assert!((rate - expected).abs() <= 3.0 * sigma, "{rate} vs {expected}");
    }

    #[test]
    fn families_partition_universe() {
        let (families, picks) = sample_indicator_families(53, 5, 12, 1.0, &mut rng(3)).unwrap();
        assert_eq!(families.len(), 12);
        assert!(picks.iter().all(|&k| k < 5));
        let mut appearances = vec![0; 53];
        for f in &families {
            for (k, block) in f.blocks.iter().enumerate() {
                assert!(block.len() == 10 || block.len() == 11);
                for &j in block {
                    appearances[j] += 1;
                    assert_eq!(f.block_of(j), Some(k));
                }
            }
        }
        assert!(appearances.iter().all(|&a| a == 12));
    }

    #[test]
    fn truncated_families_leave_items_uncovered() {
        let (families, _) = sample_indicator_families(40, 4, 3, 0.5, &mut rng(3)).unwrap();
        for f in &families {
            assert!(f.blocks.iter().all(|b| b.len() == 5));
            assert_eq!((0..40).filter(|&j| f.block_of(j).is_none()).count(), 20);
        }
    }

    fn params(alg: Algorithm) -> DesignParams {
        let inst = Instance {
            n: 300,
            d: 12,
            l: 2,
            u: 4,
        };
        recommend_params(&inst, alg, Epsilons::uniform(0.2))
            .unwrap()
            .params
            .apply(&crate::probmath::Overrides {
                references: Some(4),
                families: (alg != Algorithm::Ada).then_some(5),
                probe_families: (alg == Algorithm::Ada).then_some(6),
                stage_two_families: (alg == Algorithm::Ada).then_some(7),
                gamma2: None,
            })
            .unwrap()
    }

    #[test]
    fn schedule_counts_match_accounting() {
        let p = params(Algorithm::Nona);
        let plan = DesignPlan::generate(&p, 5, &mut rng(5)).unwrap();
        plan.check_invariants().unwrap();
        let s = plan.schedule();
        assert_eq!(s.len(), p.references * p.divisions * 10 * p.families);
        assert_eq!(s.len(), p.predicted_tests());
        assert_eq!(s.keys().count(), s.len());
        for (i, key) in s.keys().enumerate() {
            assert_eq!(s.position(key), Some(i));
        }

        let p = params(Algorithm::Ada);
        let plan = DesignPlan::generate(&p, 5, &mut rng(5)).unwrap();
        let stage1 = plan.schedule();
        assert_eq!(stage1.len(), 4 * p.divisions * 6);
        let all = vec![Some(0); p.divisions];
        let stage2 = StageTwoPlan::generate(&plan, all, &mut rng(6)).unwrap();
        let s2 = stage2.schedule(10);
        assert_eq!(stage1.len() + s2.len(), p.predicted_tests());
        for (i, key) in s2.keys().enumerate() {
            assert_eq!(s2.position(key), Some(i));
        }

        let mut partial = vec![Some(1); p.divisions];
        partial[0] = None;
        let stage2 = StageTwoPlan::generate(&plan, partial, &mut rng(6)).unwrap();
        let s2 = stage2.schedule(10);
        assert_eq!(s2.len(), (p.divisions - 1) * 10 * 7);
        assert_eq!(
            s2.position(TestKey {
                division: 0,
                reference: 1,
                family: 0,
                block: 0
            }),
            None
        );
    }

    #[test]
    fn plans_are_seed_deterministic_and_round_trip() {
        let p = params(Algorithm::Lin);
        let a = DesignPlan::generate(&p, 11, &mut rng(11)).unwrap();
        let b = DesignPlan::generate(&p, 11, &mut rng(11)).unwrap();
        assert_eq!(a, b);
        let c = DesignPlan::generate(&p, 12, &mut rng(12)).unwrap();
        assert_ne!(a.divisions, c.divisions);

        let text = a.to_json().unwrap();
        assert!(text.starts_with("{\"schema\":\"stgt.plan/v1\""));
        let back = DesignPlan::from_json(&text).unwrap();
        assert_eq!(back, a);
        assert_eq!(back.families()[0].block_of(7), a.families()[0].block_of(7));
        assert!(DesignPlan::from_json(&text.replace("plan/v1", "plan/v0")).is_err());
    }

    #[test]
    fn linear_reference_fits_when_u_equals_d() {
        for n in 60..=300 {
            for d in 3..=12 {
                for l in 0..d - 1 {
                    let inst = Instance { n, d, l, u: d };
                    let mut p = recommend_params(&inst, Algorithm::Lin, Epsilons::default())
                        .unwrap()
                        .params;
                    p.families = 1;
                    assert!(
                        DesignPlan::generate(&p, 0, &mut rng(0)).is_ok(),
                        "n={n} d={d} l={l}"
                    );
                }
            }
        }
    }

    proptest! {
        #[test]
        fn generated_plans_hold_invariants(
            n in 40usize..400,
            d in 5usize..20,
            l in 0usize..4,
            seed in any::<u64>(),
        ) {
            prop_assume!(l + 1 < d && d < n);
            let inst = Instance { n, d, l, u: l + 2 };
            let p = recommend_params(&inst, Algorithm::Nona, Epsilons::uniform(0.3))
                .unwrap()
                .params
                .apply(&crate::probmath::Overrides {
                    references: Some(2),
                    families: Some(3),
                    ..Default::default()
                })
                .unwrap();
            let plan = DesignPlan::generate(&p, seed, &mut rng(seed)).unwrap();
            prop_assert!(plan.check_invariants().is_ok());
            prop_assert_eq!(plan.schedule().len(), 2 * p.divisions * (d - l) * 3);
        }
    }
}
