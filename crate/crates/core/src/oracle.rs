//! Brute-force enumeration on tiny instances.
//!
//! Nothing here calls into the hypergeometric code: expected fractions are
//! obtained by listing every indicator subset and averaging the channel in
//! exact rational arithmetic.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::harness::{Experiment, ExperimentConfig};
use crate::model::{Algorithm, ChannelKind, GapChannel, Instance};
use crate::probmath::{compute_phi, compute_q, Overrides, ThresholdTable};

/// Largest `n` the enumerators accept.
pub const ENUMERATION_LIMIT: usize = 14;

/// Largest `n` for [`exhaustive_decode_check`].
pub const DECODE_CHECK_LIMIT: usize = 30;

fn budget(n: usize, limit: usize) -> Result<()> {
    if n > limit {
        return Err(Error::BudgetExceeded { n, limit });
    }
    Ok(())
}

fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Channel probability as an exact rational.
pub fn exact_channel(channel: &GapChannel, k: usize, l: usize, u: usize) -> Result<BigRational> {
    if k <= l {
        return Ok(BigRational::zero());
    }
    if k >= u {
        return Ok(BigRational::one());
    }
    match channel.kind {
        ChannelKind::Bernoulli => Ok(ratio(1, 2)),
        ChannelKind::Linear => Ok(ratio((k - l) as i64, (u - l) as i64)),
        ChannelKind::Custom => {
            let p = channel.curve(l, u)?.prob(k);
            BigRational::from_float(p)
                .ok_or_else(|| Error::Configuration(format!("channel value {p} is not finite")))
        }
    }
}

/// All `size`-subsets of the bits in `pool`, as masks.
fn subsets(pool: u32, size: usize) -> impl Iterator<Item = u32> {
    let n = 32 - pool.leading_zeros();
    (0u32..(1u32 << n)).filter(move |&m| m & !pool == 0 && m.count_ones() as usize == size)
}

/// Reference group for enumeration: defectives `0..v` plus a few non-defectives,
/// so indicator subsets can overlap it.
fn reference_mask(n: usize, d: usize, v: usize, keep_free: usize) -> u32 {
    let spare = (n - d).saturating_sub(keep_free).min(v.max(1));
    let defectives = (1u32 << v) - 1;
    let clean = ((1u32 << spare) - 1) << d;
    defectives | clean
}

fn average(hist: &BTreeMap<usize, u64>, channel: &GapChannel, l: usize, u: usize) -> Result<BigRational> {
    let mut total = BigRational::zero();
    let mut count = 0u64;
    for (&k, &c) in hist {
        total += exact_channel(channel, k, l, u)? * BigRational::from_integer(BigInt::from(c));
        count += c;
    }
    Ok(total / BigRational::from_integer(BigInt::from(count)))
}

/// `q_v` by listing every `m`-subset of the universe as the indicator group.
pub fn enumerate_q(
    v: usize,
    inst: &Instance,
    m: usize,
    channel: &GapChannel,
) -> Result<BigRational> {
    let Instance { n, d, l, u } = *inst;
    budget(n, ENUMERATION_LIMIT)?;
    if v > d || m > n {
        return Err(Error::InvalidParameter(format!(
            "enumerate_q needs v <= d and m <= n, got v = {v}, m = {m}"
        )));
    }
    let all = (1u32 << n) - 1;
    let reference = reference_mask(n, d, v, 0);
    let fresh_defectives = ((1u32 << d) - 1) & !reference;
    let mut hist = BTreeMap::new();
    for indicator in subsets(all, m) {
        let k = v + (indicator & fresh_defectives).count_ones() as usize;
        *hist.entry(k).or_insert(0u64) += 1;
    }
    average(&hist, channel, l, u)
}

/// `phi_{v,bit}` by listing every `(m-1)`-subset of companions for a fixed item.
pub fn enumerate_phi(
    v: usize,
    bit: bool,
    inst: &Instance,
    m: usize,
    channel: &GapChannel,
) -> Result<BigRational> {
    let Instance { n, d, l, u } = *inst;
    budget(n, ENUMERATION_LIMIT)?;
    if m == 0 || m > n || v + usize::from(bit) > d || (!bit && d == n) {
        return Err(Error::InvalidParameter(format!(
            "enumerate_phi has no admissible item for v = {v}, bit = {bit}, m = {m}"
        )));
    }
    let all = (1u32 << n) - 1;
    let reference = reference_mask(n, d, v, 1);
    // item: the first defective outside the reference group, or the last item
    let item = if bit { v } else { n - 1 };
    debug_assert!(reference & (1 << item) == 0);
    let fresh_defectives = ((1u32 << d) - 1) & !reference & !(1u32 << item);
    let mut hist = BTreeMap::new();
    for companions in subsets(all & !(1u32 << item), m - 1) {
        let k = v + usize::from(bit) + (companions & fresh_defectives).count_ones() as usize;
        *hist.entry(k).or_insert(0u64) += 1;
    }
    average(&hist, channel, l, u)
}

/// Library value next to its enumerated counterpart.
#[derive(Debug, Clone, Serialize)]
pub struct EnumerationReport {
    pub schema: &'static str,
    pub instance: Instance,
    pub channel: ChannelKind,
    pub block_size: usize,
    pub quantity: String,
    #[serde(serialize_with = "rational_text")]
    pub exact_value: BigRational,
    pub library_value: f64,
    pub abs_diff: f64,
}

fn rational_text<S: serde::Serializer>(
    r: &BigRational,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

impl EnumerationReport {
    pub fn new(
        instance: Instance,
        channel: ChannelKind,
        block_size: usize,
        quantity: String,
        exact_value: BigRational,
        library_value: f64,
    ) -> Self {
        let abs_diff = (exact_value.to_f64().unwrap_or(f64::NAN) - library_value).abs();
        EnumerationReport {
            schema: "stgt.enumeration/v1",
            instance,
            channel,
            block_size,
            quantity,
            exact_value,
            library_value,
            abs_diff,
        }
    }
}

/// Every instance with `n <= max_n`, `1 <= d <= n/2`, `0 <= l < u <= d`.
pub fn sweep_instances(max_n: usize) -> impl Iterator<Item = Instance> {
    (2..=max_n).flat_map(|n| {
        (1..=n / 2).flat_map(move |d| {
            (0..d).flat_map(move |l| (l + 1..=d).map(move |u| Instance { n, d, l, u }))
        })
    })
}

/// Indicator block sizes a balanced partition into `d - l` blocks produces.
pub fn partition_block_sizes(inst: &Instance) -> Vec<usize> {
    let blocks = inst.blocks();
    let lo = inst.n / blocks;
    if inst.n.is_multiple_of(blocks) {
        vec![lo]
    } else {
        vec![lo, lo + 1]
    }
}

/// Reference counts with item fractions defined: `v = l` and the gap counts.
pub fn admissible_levels(inst: &Instance) -> Vec<usize> {
    (inst.l..inst.u).collect()
}

/// Compares `compute_q` and `compute_phi` with enumeration on one instance.
pub fn compare_instance(
    inst: &Instance,
    channel: &GapChannel,
) -> Result<Vec<EnumerationReport>> {
    let curve = channel.curve(inst.l, inst.u)?;
    let mut out = Vec::new();
    for m in partition_block_sizes(inst) {
        for v in 0..=inst.d {
            let exact = enumerate_q(v, inst, m, channel)?;
            let lib = compute_q(v, inst, &curve, m)?;
            out.push(EnumerationReport::new(*inst, channel.kind, m, format!("q_{v}"), exact, lib));
        }
        for v in admissible_levels(inst) {
            for bit in [false, true] {
                if v + usize::from(bit) > inst.d {
                    continue;
                }
                let exact = enumerate_phi(v, bit, inst, m, channel)?;
                let lib = compute_phi(v, bit, inst, &curve, m)?;
                out.push(EnumerationReport::new(
                    *inst,
                    channel.kind,
                    m,
                    format!("phi_{v},{}", u8::from(bit)),
                    exact,
                    lib,
                ));
            }
        }
    }
    Ok(out)
}

/// [`compare_instance`] over every instance of [`sweep_instances`] for each channel.
pub fn oracle_sweep(max_n: usize, channels: &[GapChannel]) -> Result<Vec<EnumerationReport>> {
    budget(max_n, ENUMERATION_LIMIT)?;
    let mut out = Vec::new();
    for inst in sweep_instances(max_n) {
        for channel in channels {
            out.extend(compare_instance(&inst, channel)?);
        }
    }
    Ok(out)
}

/// Largest deviation of the band and item-boundary identities on one table:
/// `q_v (1 - eta_below)` vs `(q_{v-1} + q_v)/2`, `q_v (1 + eta_above)` vs
/// `(q_v + q_{v+1})/2`, `phi_0 (1 + delta)` vs `(phi_0 + phi_1)/2`.
pub fn midpoint_residual(table: &ThresholdTable) -> f64 {
    let mut worst: f64 = 0.0;
    for (&v, e) in &table.entries {
        let qv = table.q[&v];
        if let (Some(eta), Some(&below)) = (e.eta_below, v.checked_sub(1).and_then(|w| table.q.get(&w))) {
            worst = worst.max((qv * (1.0 - eta) - (below + qv) / 2.0).abs());
        }
        if let (Some(eta), Some(&above)) = (e.eta_above, table.q.get(&(v + 1))) {
            worst = worst.max((qv * (1.0 + eta) - (qv + above) / 2.0).abs());
        }
        worst = worst.max((e.phi[0] * (1.0 + e.delta) - (e.phi[0] + e.phi[1]) / 2.0).abs());
    }
    worst
}

/// How often each `block`-th block of a balanced partition equals each subset,
/// over every ordered assignment of items to blocks with the slicing sizes.
///
/// Shuffling the block labels picks each such assignment with equal
/// probability, so this is the exact marginal law of one sampled block.
pub fn partition_block_law(n: usize, parts: usize, block: usize) -> Result<BTreeMap<u32, u64>> {
    budget(n, ENUMERATION_LIMIT)?;
    let sizes: Vec<usize> = (0..parts)
        .map(|k| n / parts + usize::from(k < n % parts))
        .collect();
    let mut law = BTreeMap::new();
    let mut assignment = vec![0u32; parts];
    fn fill(
        item: usize,
        n: usize,
        sizes: &[usize],
        assignment: &mut [u32],
        block: usize,
        law: &mut BTreeMap<u32, u64>,
    ) {
        if item == n {
            *law.entry(assignment[block]).or_insert(0) += 1;
            return;
        }
        for k in 0..sizes.len() {
            if (assignment[k].count_ones() as usize) < sizes[k] {
                assignment[k] |= 1 << item;
                fill(item + 1, n, sizes, assignment, block, law);
                assignment[k] &= !(1 << item);
            }
        }
    }
    fill(0, n, &sizes, &mut assignment, block, &mut law);
    Ok(law)
}

/// Exact-recovery statistics from [`exhaustive_decode_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecodeCheck {
    pub trials: usize,
    pub exact_recoveries: usize,
    pub recovery_rate: f64,
}

/// Runs the non-adaptive pipeline with `families` indicator families on a tiny
/// instance, so that statistical noise cannot hide a logic error.
pub fn exhaustive_decode_check(
    inst: &Instance,
    channel: &GapChannel,
    families: usize,
    trials: usize,
    seed: u64,
) -> Result<DecodeCheck> {
    budget(inst.n, DECODE_CHECK_LIMIT)?;
    crate::model::validate_instance(inst.n, inst.d, inst.l, inst.u)?;
    let config = ExperimentConfig {
        n: inst.n,
        d: inst.d,
        l: inst.l,
        u: inst.u,
        channel: channel.clone(),
        algorithm: Algorithm::Nona,
        eps2: None,
        eps3: None,
        eps4: None,
        overrides: Overrides {
            families: Some(families),
            ..Overrides::default()
        },
        trials,
        seed,
        defectives: None,
    };
    let output = Experiment::new(config)?.run()?;
    let exact = output.records.iter().filter(|r| r.exact_recovery).count();
    Ok(DecodeCheck {
        trials,
        exact_recoveries: exact,
        recovery_rate: if trials == 0 { 0.0 } else { exact as f64 / trials as f64 },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    fn small() -> Instance {
        Instance {
            n: 6,
            d: 3,
            l: 1,
            u: 3,
        }
    }

    #[test]
    fn enumerated_small_values() {
        let b = GapChannel::bernoulli();
        assert_eq!(enumerate_q(1, &small(), 3, &b).unwrap(), ratio(1, 2));
        assert_eq!(enumerate_q(0, &small(), 3, &b).unwrap(), ratio(11, 40));
        assert_eq!(enumerate_q(2, &small(), 3, &b).unwrap(), ratio(3, 4));
        assert_eq!(enumerate_q(3, &small(), 3, &b).unwrap(), ratio(1, 1));
        assert_eq!(enumerate_phi(1, false, &small(), 3, &b).unwrap(), ratio(2, 5));
        assert_eq!(enumerate_phi(1, true, &small(), 3, &b).unwrap(), ratio(7, 10));
    }

    #[test]
    fn budget_is_a_hard_error() {
        let big = Instance {
            n: 15,
            d: 3,
            l: 1,
            u: 2,
        };
        let b = GapChannel::bernoulli();
        assert!(matches!(
            enumerate_q(1, &big, 3, &b),
            Err(Error::BudgetExceeded { n: 15, limit: 14 })
        ));
        assert!(enumerate_phi(1, true, &big, 3, &b).is_err());
        assert!(oracle_sweep(15, &[b]).is_err());
    }

    #[test]
    fn library_matches_enumeration_up_to_ten() {
        let reports = oracle_sweep(10, &[GapChannel::bernoulli(), GapChannel::linear()]).unwrap();
        assert!(!reports.is_empty());
        let worst = reports.iter().map(|r| r.abs_diff).fold(0.0, f64::max);
        assert!(worst <= 1e-12, "worst {worst}");
    }

    #[test]
    fn custom_channel_enumerates() {
        let inst = Instance {
            n: 9,
            d: 4,
            l: 0,
            u: 3,
        };
        let ch = GapChannel::custom(BTreeMap::from([(1, 0.25), (2, 0.625)]));
        for r in compare_instance(&inst, &ch).unwrap() {
            assert!(r.abs_diff <= 1e-12, "{r:?}");
        }
    }

    #[test]
    fn partition_block_is_uniform_subset() {
        for (n, parts) in [(6, 2), (7, 3), (8, 3), (8, 4)] {
            for block in 0..parts {
                let law = partition_block_law(n, parts, block).unwrap();
                let size = n / parts + usize::from(block < n % parts);
                let subsets: u64 = (0..size as u64)
                    .fold(BigUint::from(1u32), |acc, i| acc * (n as u64 - i) / (i + 1))
                    .to_u64()
                    .unwrap();
                assert_eq!(law.len() as u64, subsets, "n={n} parts={parts} block={block}");
                let first = *law.values().next().unwrap();
                assert!(law.values().all(|&c| c == first));
                assert!(law.keys().all(|m| m.count_ones() as usize == size));
            }
        }
    }

    #[test]
    fn report_serializes_rational() {
        let r = EnumerationReport::new(small(), ChannelKind::Bernoulli, 3, "q_0".into(), ratio(11, 40), 0.275);
        let text = serde_json::to_string(&r).unwrap();
        assert!(text.contains("\"exact_value\":\"11/40\""), "{text}");
        assert!(r.abs_diff < 1e-15);
    }

    #[test]
    fn decode_check_classical() {
        let inst = Instance {
            n: 20,
            d: 3,
            l: 0,
            u: 1,
        };
        let check = exhaustive_decode_check(&inst, &GapChannel::bernoulli(), 400, 500, 7).unwrap();
        assert!(check.recovery_rate >= 0.99, "{check:?}");
        let again = exhaustive_decode_check(&inst, &GapChannel::bernoulli(), 400, 500, 7).unwrap();
        assert_eq!(check, again);
    }

    #[test]
    fn decode_check_rejects_bad_instances() {
        let full = Instance {
            n: 20,
            d: 20,
            l: 0,
            u: 1,
        };
        assert!(matches!(
            exhaustive_decode_check(&full, &GapChannel::bernoulli(), 10, 1, 0),
            Err(Error::InvalidInstance(_))
        ));
        let huge = Instance {
            n: 31,
            d: 3,
            l: 0,
            u: 1,
        };
        assert!(matches!(
            exhaustive_decode_check(&huge, &GapChannel::bernoulli(), 10, 1, 0),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn gapped_decode_check() {
        let inst = Instance {
            n: 30,
            d: 4,
            l: 1,
            u: 3,
        };
        let check = exhaustive_decode_check(&inst, &GapChannel::bernoulli(), 600, 200, 3).unwrap();
        assert!(check.recovery_rate >= 0.95, "{check:?}");
    }
}
