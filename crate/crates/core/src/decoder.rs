//! Match-and-quantize decoding.
//!
//! Step one labels each reference group by comparing its positive count over
//! the probe tests with the band around the expected count. Step two takes one
//! well-calibrated reference group per division and labels every item of that
//! division by the positive count of the tests that pooled the group with the
//! item's block.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize, Serializer};

use crate::design::{DesignPlan, Family, Indicators, StageTwoPlan, TestKey};
use crate::error::{Error, Result};
use crate::model::{Algorithm, ChannelCurve, Population};
use crate::probmath::ThresholdTable;
use crate::simulate::OutcomeTable;

pub const DECODE_SCHEMA: &str = "stgt.decode/v1";

/// Relative slack on band edges so a count sitting exactly on an edge is
/// inside, as it would be in exact arithmetic.
const EDGE_TOL: f64 = 1e-9;

fn at_least(count: f64, edge: f64) -> bool {
    count >= edge - EDGE_TOL * edge.abs().max(1.0)
}

fn at_most(count: f64, edge: f64) -> bool {
    count <= edge + EDGE_TOL * edge.abs().max(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RefLabel {
    /// Fewer than `l` defectives.
    Promising,
    /// Exactly `l` defectives.
    Critical,
    /// More than `l` defectives.
    Misleading,
    /// Linear scheme: estimated to hold this many defectives.
    Holds(usize),
    /// Linear scheme: no admissible count matched.
    Unusable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ItemLabel {
    Defective,
    NonDefective,
    Undetermined,
}

impl ItemLabel {
    fn code(self) -> char {
        match self {
            ItemLabel::Defective => 'D',
            ItemLabel::NonDefective => 'N',
            ItemLabel::Undetermined => 'U',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum DivisionStatus {
    /// Items were decoded against reference group `reference` holding `level` defectives.
    Ok { reference: usize, level: usize },
    NoCriticalGroup,
}

/// Labels for every reference group, item and division, plus test counts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecodeResult {
    pub schema: &'static str,
    pub ref_labels: Vec<Vec<RefLabel>>,
    /// One character per item: `D` defective, `N` non-defective, `U` undetermined.
    #[serde(serialize_with = "item_codes")]
    pub items: Vec<ItemLabel>,
    pub divisions: Vec<DivisionStatus>,
    pub tests_used: usize,
    pub stage_counts: Vec<usize>,
}

fn item_codes<S: Serializer>(items: &[ItemLabel], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&items.iter().map(|i| i.code()).collect::<String>())
}

/// Errors of a decode against the truth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Score {
    pub false_positives: usize,
    pub false_negatives: usize,
    pub undetermined: usize,
    pub failed_divisions: usize,
}

impl Score {
    /// Every item labelled correctly and none left undetermined.
    pub fn exact(&self) -> bool {
        self.false_positives == 0
            && self.false_negatives == 0
            && self.undetermined == 0
            && self.failed_divisions == 0
    }
}

impl DecodeResult {
    pub fn defectives(&self) -> Vec<usize> {
        self.items
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == ItemLabel::Defective)
            .map(|(j, _)| j)
            .collect()
    }

    pub fn score(&self, pop: &Population) -> Score {
        let mut score = Score {
            failed_divisions: self
                .divisions
                .iter()
                .filter(|s| matches!(s, DivisionStatus::NoCriticalGroup))
                .count(),
            ..Score::default()
        };
        for (j, label) in self.items.iter().enumerate() {
            match (label, pop.is_defective(j)) {
                (ItemLabel::Defective, false) => score.false_positives += 1,
                (ItemLabel::NonDefective, true) => score.false_negatives += 1,
                (ItemLabel::Undetermined, _) => score.undetermined += 1,
                _ => {}
            }
        }
        score
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }
}

/// Step-one rule for the Bernoulli schemes: critical iff
/// `I q_l (1 - eta_below) <= counts <= I q_l (1 + eta_above)`.
pub fn classify_reference_group(
    counts: usize,
    trials: usize,
    table: &ThresholdTable,
    l: usize,
) -> Result<RefLabel> {
    let (lo, hi) = table.band(l).ok_or_else(|| missing(l))?;
    let c = counts as f64;
    let t = trials as f64;
    Ok(if !at_least(c, t * lo) {
        RefLabel::Promising
    } else if !at_most(c, t * hi) {
        RefLabel::Misleading
    } else {
        RefLabel::Critical
    })
}

/// Step-two rule: non-defective iff `counts <= I phi_{v,0} (1 + delta_v)`.
pub fn classify_item(
    counts: usize,
    trials: usize,
    table: &ThresholdTable,
    v: usize,
) -> Result<ItemLabel> {
    let boundary = table.item_boundary(v).ok_or_else(|| missing(v))?;
    Ok(item_rule(counts, trials as f64 * boundary))
}

fn item_rule(counts: usize, boundary: f64) -> ItemLabel {
    if at_most(counts as f64, boundary) {
        ItemLabel::NonDefective
    } else {
        ItemLabel::Defective
    }
}

/// Linear step one: the `v` whose band contains `counts`. Where bands
/// overlap, the one whose centre `q_v` is nearest wins; ties go to the smaller `v`.
pub fn estimate_reference_v(
    counts: usize,
    trials: usize,
    table: &ThresholdTable,
    levels: &[usize],
) -> Option<usize> {
    let c = counts as f64;
    let t = trials as f64;
    let mut best: Option<(f64, usize)> = None;
    for &v in levels {
        let Some((lo, hi)) = table.band(v) else {
            continue;
        };
        if !at_least(c, t * lo) || !at_most(c, t * hi) {
            continue;
        }
        let dist = (c / t - table.q(v)?).abs();
        if best.is_none_or(|(b, _)| dist < b - EDGE_TOL) {
            best = Some((dist, v));
        }
    }
    best.map(|(_, v)| v)
}

fn missing(v: usize) -> Error {
    Error::InvalidParameter(format!("threshold table has no entry for v = {v}"))
}

/// Hoeffding bounds on step-one misclassification for a group whose true
/// count is `l - 1`, `l`, `l + 1`, at `trials` probes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReferenceErrorBounds {
    pub promising_as_critical: Option<f64>,
    pub critical_rejected: f64,
    pub misleading_as_critical: f64,
}

pub fn reference_error_bounds(
    table: &ThresholdTable,
    l: usize,
    trials: usize,
) -> Result<ReferenceErrorBounds> {
    let ql = table.q(l).ok_or_else(|| missing(l))?;
    let entry = table.entry(l).ok_or_else(|| missing(l))?;
    let t = trials as f64;
    let tail = |margin: f64| (-2.0 * t * margin * margin).exp();
    let below = entry.eta_below.map(|eta| tail(ql * eta));
    let above = tail(ql * entry.eta_above.ok_or_else(|| missing(l + 1))?);
    Ok(ReferenceErrorBounds {
        promising_as_critical: below,
        critical_rejected: below.unwrap_or(0.0) + above,
        misleading_as_critical: above,
    })
}

/// Thresholds needed to decode one plan, with bands already averaged over
/// the actual probe sizes.
#[derive(Debug, Clone)]
pub struct DecodeTables {
    /// Step-one table, mixed over the sizes of the probe groups.
    pub probe: ThresholdTable,
    /// Step-two tables keyed by indicator block size.
    pub items: BTreeMap<usize, ThresholdTable>,
    /// Admissible reference counts: `[l]`, or the usable gap counts for the linear scheme.
    pub levels: Vec<usize>,
}

impl DecodeTables {
    /// Tables for a non-adaptive plan (Bernoulli or linear rules by `plan.params.algorithm`).
    pub fn for_plan(plan: &DesignPlan, curve: &ChannelCurve) -> Result<Self> {
        let Indicators::Families {
            families,
            probe_picks,
        } = &plan.indicators
        else {
            return Err(Error::InvalidParameter(
                "non-adaptive decoding needs indicator families".into(),
            ));
        };
        let inst = plan.params.instance;
        let levels: Vec<usize> = match plan.params.algorithm {
            Algorithm::Lin => (inst.l + 1..inst.u).collect(),
            _ => vec![inst.l],
        };
        let items = tables_by_size(plan, curve, families, &levels)?;
        let mut probe_sizes: BTreeMap<usize, f64> = BTreeMap::new();
        for (family, &k) in families.iter().zip(probe_picks) {
            *probe_sizes.entry(family.blocks[k].len()).or_default() += 1.0;
        }
        let parts: Vec<(f64, &ThresholdTable)> =
            probe_sizes.iter().map(|(m, &w)| (w, &items[m])).collect();
        let probe = ThresholdTable::mix(&parts)?;
        let levels = usable_levels(&probe, &items, levels);
        Ok(DecodeTables {
            probe,
            items,
            levels,
        })
    }

    /// Tables for the adaptive scheme: fixed-size probes in stage one, stage-two families.
    pub fn for_adaptive(
        stage_one: &DesignPlan,
        stage_two: &StageTwoPlan,
        curve: &ChannelCurve,
    ) -> Result<Self> {
        let mut tables = Self::for_stage_one(stage_one, curve)?;
        tables.items = tables_by_size(
            stage_one,
            curve,
            &stage_two.families,
            &tables.levels,
        )?;
        Ok(tables)
    }

    /// Stage-one table of the adaptive scheme; enough to choose stage-two groups.
    pub fn for_stage_one(stage_one: &DesignPlan, curve: &ChannelCurve) -> Result<Self> {
        let inst = stage_one.params.instance;
        let Indicators::Probes { probes } = &stage_one.indicators else {
            return Err(Error::InvalidParameter(
                "adaptive decoding needs stage-one probes".into(),
            ));
        };
        let probe_size = probes
            .first()
            .map(Vec::len)
            .or(stage_one.params.probe_size)
            .unwrap_or(1);
        let levels = vec![inst.l];
        let probe = ThresholdTable::build(&inst, curve, probe_size, stage_one.params.ind_size, levels.clone())?;
        Ok(DecodeTables {
            probe,
            items: BTreeMap::new(),
            levels,
        })
    }

    fn item_boundary(&self, size: usize, v: usize) -> Result<f64> {
        self.items
            .get(&size)
            .and_then(|t| t.item_boundary(v))
            .ok_or_else(|| missing(v))
    }
}

fn tables_by_size(
    plan: &DesignPlan,
    curve: &ChannelCurve,
    families: &[Family],
    levels: &[usize],
) -> Result<BTreeMap<usize, ThresholdTable>> {
    let inst = plan.params.instance;
    let mut items = BTreeMap::new();
    for family in families {
        for block in &family.blocks {
            let m = block.len();
            if m == 0 || items.contains_key(&m) {
                continue;
            }
            let table = ThresholdTable::build(
                &inst,
                curve,
                m,
                m,
                levels.iter().copied(),
            )?;
            items.insert(m, table);
        }
    }
    Ok(items)
}

/// Keeps counts whose neighbours are strictly separated in the probe table
/// and whose item fractions are strictly ordered at every block size.
fn usable_levels(
    probe: &ThresholdTable,
    items: &BTreeMap<usize, ThresholdTable>,
    levels: Vec<usize>,
) -> Vec<usize> {
    levels
        .into_iter()
        .filter(|&v| {
            let q = |w: usize| probe.q(w);
            let below_ok = match v.checked_sub(1) {
                Some(w) => matches!((q(w), q(v)), (Some(a), Some(b)) if a < b),
                None => true,
            };
            let above_ok = matches!((q(v), q(v + 1)), (Some(a), Some(b)) if a < b);
            let items_ok = items
                .values()
                .all(|t| t.entry(v).is_some_and(|e| e.phi[0] < e.phi[1]));
            below_ok && above_ok && items_ok
        })
        .collect()
}

/// Positive counts of every reference group over its probe tests.
fn probe_counts(plan: &DesignPlan, outcomes: &OutcomeTable) -> Result<Vec<Vec<(usize, usize)>>> {
    let probe_slots: Vec<(usize, usize)> = match &plan.indicators {
        Indicators::Families { probe_picks, .. } => {
            probe_picks.iter().copied().enumerate().collect()
        }
        Indicators::Probes { probes } => (0..probes.len()).map(|i| (i, 0)).collect(),
    };
    plan.reference_groups
        .iter()
        .enumerate()
        .map(|(division, groups)| {
            (0..groups.len())
                .map(|reference| {
                    let mut positives = 0;
                    for &(family, block) in &probe_slots {
                        let key = TestKey {
                            division,
                            reference,
                            family,
                            block,
                        };
                        positives += usize::from(outcomes.get(key).ok_or_else(|| {
                            Error::InvalidParameter(format!("outcome missing for {key:?}"))
                        })?);
                    }
                    Ok((positives, probe_slots.len()))
                })
                .collect()
        })
        .collect()
}

/// Step one under the Bernoulli rule plus the per-division choice: among
/// critical groups the one whose probe fraction is nearest `q_l`, lowest index on ties.
pub fn classify_reference_groups(
    plan: &DesignPlan,
    outcomes: &OutcomeTable,
    tables: &DecodeTables,
) -> Result<(Vec<Vec<RefLabel>>, Vec<Option<usize>>)> {
    let l = plan.params.instance.l;
    let ql = tables.probe.q(l).ok_or_else(|| missing(l))?;
    let counts = probe_counts(plan, outcomes)?;
    let mut labels = Vec::with_capacity(counts.len());
    let mut chosen = Vec::with_capacity(counts.len());
    for groups in counts {
        let mut row = Vec::with_capacity(groups.len());
        let mut best: Option<(f64, usize)> = None;
        for (r, (c, trials)) in groups.into_iter().enumerate() {
            let label = classify_reference_group(c, trials, &tables.probe, l)?;
            if label == RefLabel::Critical {
                let dist = (c as f64 / trials as f64 - ql).abs();
                if best.is_none_or(|(b, _)| dist < b) {
                    best = Some((dist, r));
                }
            }
            row.push(label);
        }
        labels.push(row);
        chosen.push(best.map(|(_, r)| r));
    }
    Ok((labels, chosen))
}

/// Step one under the linear rule. Among usable groups of a division the one
/// sitting deepest inside its band (distance to `q_v` over band half-width)
/// is chosen, lowest index on ties.
fn estimate_reference_groups(
    plan: &DesignPlan,
    outcomes: &OutcomeTable,
    tables: &DecodeTables,
) -> Result<(Vec<Vec<RefLabel>>, Vec<Option<(usize, usize)>>)> {
    let counts = probe_counts(plan, outcomes)?;
    let mut labels = Vec::with_capacity(counts.len());
    let mut chosen = Vec::with_capacity(counts.len());
    for groups in counts {
        let mut row = Vec::with_capacity(groups.len());
        let mut best: Option<(f64, usize, usize)> = None;
        for (r, (c, trials)) in groups.into_iter().enumerate() {
            match estimate_reference_v(c, trials, &tables.probe, &tables.levels) {
                Some(v) => {
                    let (lo, hi) = tables.probe.band(v).ok_or_else(|| missing(v))?;
                    let qv = tables.probe.q(v).ok_or_else(|| missing(v))?;
                    let depth = (c as f64 / trials as f64 - qv).abs() / ((hi - lo) / 2.0);
                    if best.is_none_or(|(b, _, _)| depth < b) {
                        best = Some((depth, r, v));
                    }
                    row.push(RefLabel::Holds(v));
                }
                None => row.push(RefLabel::Unusable),
            }
        }
        labels.push(row);
        chosen.push(best.map(|(_, r, v)| (r, v)));
    }
    Ok((labels, chosen))
}

/// Step two for every division with a chosen `(reference, level)`.
fn decode_items(
    plan: &DesignPlan,
    families: &[Family],
    outcomes: &OutcomeTable,
    tables: &DecodeTables,
    chosen: &[Option<(usize, usize)>],
) -> Result<(Vec<ItemLabel>, Vec<DivisionStatus>)> {
    let n = plan.n();
    let division_of = plan.division_of();
    let mut positives = vec![0usize; n];
    let mut boundary = vec![0.0f64; n];
    let mut covered = vec![0usize; n];
    // per-division outcome and boundary of the current family's blocks
    let mut slot = vec![(false, 0.0); chosen.len()];
    for (family, f) in families.iter().enumerate() {
        for (block, members) in f.blocks.iter().enumerate() {
            if members.is_empty() {
                continue;
            }
            for (division, pick) in chosen.iter().enumerate() {
                let Some((reference, level)) = *pick else {
                    continue;
                };
                let key = TestKey {
                    division,
                    reference,
                    family,
                    block,
                };
                let outcome = outcomes.get(key).ok_or_else(|| {
                    Error::InvalidParameter(format!("outcome missing for {key:?}"))
                })?;
                slot[division] = (outcome, tables.item_boundary(members.len(), level)?);
            }
            for &j in members {
                let division = division_of[j];
                if chosen[division].is_some() {
                    let (outcome, edge) = slot[division];
                    positives[j] += usize::from(outcome);
                    boundary[j] += edge;
                    covered[j] += 1;
                }
            }
        }
    }
    let items = (0..n)
        .map(|j| {
            if covered[j] > 0 && chosen[division_of[j]].is_some() {
                item_rule(positives[j], boundary[j])
            } else {
                ItemLabel::Undetermined
            }
        })
        .collect();
    let status = chosen
        .iter()
        .map(|pick| match *pick {
            Some((reference, level)) => DivisionStatus::Ok { reference, level },
            None => DivisionStatus::NoCriticalGroup,
        })
        .collect();
    Ok((items, status))
}

/// Decodes the non-adaptive Bernoulli scheme from the full cross-product outcomes.
pub fn decode_nonadaptive(
    plan: &DesignPlan,
    outcomes: &OutcomeTable,
    tables: &DecodeTables,
) -> Result<DecodeResult> {
    let l = plan.params.instance.l;
    let (ref_labels, chosen) = classify_reference_groups(plan, outcomes, tables)?;
    let chosen: Vec<Option<(usize, usize)>> =
        chosen.into_iter().map(|r| r.map(|r| (r, l))).collect();
    let (items, divisions) = decode_items(plan, plan.families(), outcomes, tables, &chosen)?;
    Ok(DecodeResult {
        schema: DECODE_SCHEMA,
        ref_labels,
        items,
        divisions,
        tests_used: outcomes.tests(),
        stage_counts: vec![outcomes.tests()],
    })
}

/// Decodes the linear scheme: per-group count estimates, then items against
/// the chosen group's own level.
pub fn decode_linear(
    plan: &DesignPlan,
    outcomes: &OutcomeTable,
    tables: &DecodeTables,
) -> Result<DecodeResult> {
    let (ref_labels, chosen) = estimate_reference_groups(plan, outcomes, tables)?;
    let (items, divisions) = decode_items(plan, plan.families(), outcomes, tables, &chosen)?;
    Ok(DecodeResult {
        schema: DECODE_SCHEMA,
        ref_labels,
        items,
        divisions,
        tests_used: outcomes.tests(),
        stage_counts: vec![outcomes.tests()],
    })
}

/// Decodes the two-stage scheme. `stage_two.selected` must come from
/// [`classify_reference_groups`] on the stage-one outcomes.
pub fn decode_adaptive(
    stage_one: &DesignPlan,
    stage_one_outcomes: &OutcomeTable,
    stage_two: &StageTwoPlan,
    stage_two_outcomes: &OutcomeTable,
    tables: &DecodeTables,
) -> Result<DecodeResult> {
    let l = stage_one.params.instance.l;
    let (ref_labels, _) = classify_reference_groups(stage_one, stage_one_outcomes, tables)?;
    let chosen: Vec<Option<(usize, usize)>> = stage_two
        .selected
        .iter()
        .map(|r| r.map(|r| (r, l)))
        .collect();
    let (items, divisions) = decode_items(
        stage_one,
        &stage_two.families,
        stage_two_outcomes,
        tables,
        &chosen,
    )?;
    let stage_counts = vec![stage_one_outcomes.tests(), stage_two_outcomes.tests()];
    Ok(DecodeResult {
        schema: DECODE_SCHEMA,
        ref_labels,
        items,
        divisions,
        tests_used: stage_counts.iter().sum(),
        stage_counts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{GapChannel, Instance};

    fn small_table() -> ThresholdTable {
        let inst = Instance {
            n: 6,
            d: 3,
            l: 1,
            u: 3,
        };
        let curve = GapChannel::bernoulli().curve(1, 3).unwrap();
        ThresholdTable::build(&inst, &curve, 3, 3, [1]).unwrap()
    }

    #[test]
    fn reference_rule() {
        let t = small_table();
        let class = |c| classify_reference_group(c, 40, &t, 1).unwrap();
        assert_eq!(class(20), RefLabel::Critical);
        assert_eq!(class(16), RefLabel::Critical);
        assert_eq!(class(25), RefLabel::Critical);
        assert_eq!(class(15), RefLabel::Promising);
        assert_eq!(class(26), RefLabel::Misleading);
        assert_eq!(class(0), RefLabel::Promising);
        assert_eq!(class(40), RefLabel::Misleading);
        assert!(classify_reference_group(3, 40, &t, 2).is_err());
    }

    #[test]
    fn item_rule_boundary() {
        let t = small_table();
        let class = |c| classify_item(c, 40, &t, 1).unwrap();
        assert_eq!(class(21), ItemLabel::NonDefective);
        assert_eq!(class(22), ItemLabel::NonDefective);
        assert_eq!(class(23), ItemLabel::Defective);
        assert_eq!(class(0), ItemLabel::NonDefective);
        assert_eq!(class(40), ItemLabel::Defective);
    }

    #[test]
    fn empty_lower_neighbour_opens_band() {
        let inst = Instance {
            n: 20,
            d: 3,
            l: 0,
            u: 1,
        };
        let curve = GapChannel::bernoulli().curve(0, 1).unwrap();
        let t = ThresholdTable::build(&inst, &curve, 7, 7, [0]).unwrap();
        assert_eq!(classify_reference_group(0, 50, &t, 0).unwrap(), RefLabel::Critical);
    }

    #[test]
    fn linear_estimation_centres_and_misses() {
        let inst = Instance {
            n: 400,
            d: 20,
            l: 2,
            u: 8,
        };
        let curve = GapChannel::linear().curve(2, 8).unwrap();
        let levels: Vec<usize> = (3..8).collect();
        let t = ThresholdTable::build(&inst, &curve, 22, 22, levels.clone()).unwrap();
        let trials = 1000;
        for &v in &levels {
            let centre = (trials as f64 * t.q(v).unwrap()).round() as usize;
            assert_eq!(estimate_reference_v(centre, trials, &t, &levels), Some(v));
        }
        let (lo, _) = t.band(3).unwrap();
        let below = (trials as f64 * lo).floor() as usize - 1;
        assert_eq!(estimate_reference_v(below, trials, &t, &levels), None);
    }

    #[test]
    fn shared_band_edge_goes_to_nearest_then_smaller() {
        // n = 6, d = 3, l = 0, u = 3, linear, m = 2: q_0..q_3 = 1/3, 5/9, 7/9, 1
        let inst = Instance {
            n: 6,
            d: 3,
            l: 0,
            u: 3,
        };
        let curve = GapChannel::linear().curve(0, 3).unwrap();
        let t = ThresholdTable::build(&inst, &curve, 2, 2, [1, 2]).unwrap();
        for (v, q) in [(0, 1.0 / 3.0), (1, 5.0 / 9.0), (2, 7.0 / 9.0), (3, 1.0)] {
            assert!((t.q(v).unwrap() - q).abs() < 1e-15);
        }
        // bands [4/9, 2/3] and [2/3, 8/9] meet at 2/3; at 30 probes that is count 20,
        // which lies in both and is 1/9 from either centre, so the smaller v wins
        let (_, hi1) = t.band(1).unwrap();
        let (lo2, _) = t.band(2).unwrap();
        assert_eq!(hi1, lo2);
        assert_eq!(estimate_reference_v(20, 30, &t, &[1, 2]), Some(1));
        assert_eq!(estimate_reference_v(21, 30, &t, &[1, 2]), Some(2));
        assert_eq!(estimate_reference_v(19, 30, &t, &[1, 2]), Some(1));
        // count 27 exceeds 30 * 8/9 = 26.67
        assert_eq!(estimate_reference_v(27, 30, &t, &[1, 2]), None);
    }

    #[test]
    fn chernoff_bounds_shape() {
        let t = small_table();
        let b = reference_error_bounds(&t, 1, 40).unwrap();
        let expected_below = (-2.0 * 40.0 * 0.1125f64.powi(2)).exp();
        let expected_above = (-2.0 * 40.0 * 0.125f64.powi(2)).exp();
        assert!((b.promising_as_critical.unwrap() - expected_below).abs() < 1e-12);
        assert!((b.misleading_as_critical - expected_above).abs() < 1e-12);
        assert!((b.critical_rejected - expected_below - expected_above).abs() < 1e-12);
    }
}
