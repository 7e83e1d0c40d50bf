//! Problem instances, the stochastic gap channel, and seeded random streams.

use std::collections::BTreeMap;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Checks `0 <= l < u <= d < n`, the range every pipeline needs.
pub fn validate_instance(n: usize, d: usize, l: usize, u: usize) -> Result<()> {
    if l >= u {
        return Err(Error::InvalidInstance(format!(
            "lower threshold l = {l} must be below upper threshold u = {u}"
        )));
    }
    if u > d {
        return Err(Error::InvalidInstance(format!(
            "upper threshold u = {u} exceeds defective count d = {d}"
        )));
    }
    if d >= n {
        return Err(Error::InvalidInstance(format!(
            "defective count d = {d} must be below item count n = {n}"
        )));
    }
    Ok(())
}

/// Instance sizes and thresholds, without the hidden defective set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Instance {
    pub n: usize,
    pub d: usize,
    pub l: usize,
    pub u: usize,
}

impl Instance {
    pub fn new(n: usize, d: usize, l: usize, u: usize) -> Result<Self> {
        validate_instance(n, d, l, u)?;
        Ok(Instance { n, d, l, u })
    }

    pub fn gap(&self) -> usize {
        self.u - self.l - 1
    }

    /// Number of indicator blocks per family, `d - l`.
    pub fn blocks(&self) -> usize {
        self.d - self.l
    }
}

/// Which end-to-end scheme to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    /// Non-adaptive cross-product design, Bernoulli decoding rules.
    Nona,
    /// Two-stage adaptive design.
    Ada,
    /// Non-adaptive design decoded with per-group defective-count estimates.
    Lin,
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Algorithm::Nona => "nona",
            Algorithm::Ada => "ada",
            Algorithm::Lin => "lin",
        })
    }
}

/// The item universe `{0, .., n-1}` with its hidden defective set and thresholds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Population {
    n: usize,
    l: usize,
    u: usize,
    defectives: Vec<usize>,
    is_defective: Vec<bool>,
}

impl Population {
    pub fn new(n: usize, defectives: Vec<usize>, l: usize, u: usize) -> Result<Self> {
        let mut is_defective = vec![false; n];
        for &j in &defectives {
            if j >= n {
                return Err(Error::InvalidInstance(format!(
                    "defective index {j} outside universe of {n} items"
                )));
            }
            if is_defective[j] {
                return Err(Error::InvalidInstance(format!(
                    "defective index {j} listed twice"
                )));
            }
            is_defective[j] = true;
        }
        let d = defectives.len();
        if l >= u || u > d {
            return Err(Error::InvalidInstance(format!(
                "thresholds need 0 <= l < u <= d, got l = {l}, u = {u}, d = {d}"
            )));
        }
        let mut defectives = defectives;
        defectives.sort_unstable();
        Ok(Population {
            n,
            l,
            u,
            defectives,
            is_defective,
        })
    }

    /// Draws a uniformly random `d`-subset of the universe as the defective set.
    pub fn random<R: Rng + ?Sized>(
        n: usize,
        d: usize,
        l: usize,
        u: usize,
        rng: &mut R,
    ) -> Result<Self> {
        if d > n {
            return Err(Error::InvalidInstance(format!(
                "defective count d = {d} exceeds item count n = {n}"
            )));
        }
        let picked = index::sample(rng, n, d).into_vec();
        Population::new(n, picked, l, u)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.defectives.len()
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn u(&self) -> usize {
        self.u
    }

    /// Width of the stochastic band, `u - l - 1`.
    pub fn gap(&self) -> usize {
        self.u - self.l - 1
    }

    pub fn defectives(&self) -> &[usize] {
        &self.defectives
    }

    pub fn is_defective(&self, item: usize) -> bool {
        self.is_defective[item]
    }

    pub fn defective_mask(&self) -> &[bool] {
        &self.is_defective
    }

    pub fn instance(&self) -> Instance {
        Instance {
            n: self.n,
            d: self.d(),
            l: self.l,
            u: self.u,
        }
    }

    pub fn count_defective(&self, items: &[usize]) -> usize {
        items.iter().filter(|&&j| self.is_defective[j]).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelKind {
    /// Positive with probability 1/2 strictly inside the gap.
    Bernoulli,
    /// Positive probability `(k - l) / (u - l)` across the gap.
    Linear,
    /// User supplied monotone table over the gap.
    Custom,
}

impl std::fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ChannelKind::Bernoulli => "bernoulli",
            ChannelKind::Linear => "linear",
            ChannelKind::Custom => "custom",
        })
    }
}

/// Map from "defectives in the pool" to "probability the test is positive".
///
/// Counts at or below `l` always test negative and counts at or above `u`
/// always test positive; the kind decides what happens in between.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapChannel {
    pub kind: ChannelKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub custom_table: Option<BTreeMap<usize, f64>>,
}

impl GapChannel {
    pub fn bernoulli() -> Self {
        GapChannel {
            kind: ChannelKind::Bernoulli,
            custom_table: None,
        }
    }

    pub fn linear() -> Self {
        GapChannel {
            kind: ChannelKind::Linear,
            custom_table: None,
        }
    }

    /// A channel given by an explicit table; checked against thresholds by [`GapChannel::curve`].
    pub fn custom(table: BTreeMap<usize, f64>) -> Self {
        GapChannel {
            kind: ChannelKind::Custom,
            custom_table: Some(table),
        }
    }

    /// Resolves the channel for thresholds `(l, u)` into a validated lookup curve.
    pub fn curve(&self, l: usize, u: usize) -> Result<ChannelCurve> {
        if l >= u {
            return Err(Error::InvalidInstance(format!(
                "lower threshold l = {l} must be below upper threshold u = {u}"
            )));
        }
        let mut probs = Vec::with_capacity(u + 1);
        for k in 0..=u {
            let p = if k <= l {
                0.0
            } else if k >= u {
                1.0
            } else {
                match self.kind {
                    ChannelKind::Bernoulli => 0.5,
                    ChannelKind::Linear => (k - l) as f64 / (u - l) as f64,
                    ChannelKind::Custom => self.custom_entry(k)?,
                }
            };
            probs.push(p);
        }
        if let Some(table) = &self.custom_table {
            for (&k, &p) in table {
                let forced = if k <= l {
                    Some(0.0)
                } else if k >= u {
                    Some(1.0)
                } else {
                    None
                };
                if let Some(forced) = forced {
                    if p != forced {
                        return Err(Error::Configuration(format!(
                            "channel table gives probability {p} at k = {k}, thresholds force {forced}"
                        )));
                    }
                }
            }
        }
        if let Some(k) = (1..probs.len()).find(|&k| probs[k] < probs[k - 1]) {
            return Err(Error::Configuration(format!(
                "channel table is not monotone: p({}) = {} > p({k}) = {}",
                k - 1,
                probs[k - 1],
                probs[k]
            )));
        }
        Ok(ChannelCurve { l, u, probs })
    }

    fn custom_entry(&self, k: usize) -> Result<f64> {
        let table = self
            .custom_table
            .as_ref()
            .ok_or_else(|| Error::Configuration("custom channel without a table".into()))?;
        let p = *table.get(&k).ok_or_else(|| {
            Error::Configuration(format!("channel table has no entry for gap count k = {k}"))
        })?;
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Configuration(format!(
                "channel table entry p({k}) = {p} is not a probability"
            )));
        }
        Ok(p)
    }
}

/// Positive-outcome probability for a pool holding `k` defectives.
pub fn channel_positive_prob(channel: &GapChannel, k: usize, l: usize, u: usize) -> Result<f64> {
    Ok(channel.curve(l, u)?.prob(k))
}

/// A [`GapChannel`] resolved against concrete thresholds.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelCurve {
    l: usize,
    u: usize,
    probs: Vec<f64>,
}

impl ChannelCurve {
    pub fn l(&self) -> usize {
        self.l
    }

    pub fn u(&self) -> usize {
        self.u
    }

    #[inline]
    pub fn prob(&self, k: usize) -> f64 {
        self.probs.get(k).copied().unwrap_or(1.0)
    }

    /// Draws one test outcome. Randomness is consumed only inside the gap.
    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, k: usize, rng: &mut R) -> bool {
        let p = self.prob(k);
        if p <= 0.0 {
            false
        } else if p >= 1.0 {
            true
        } else {
            rng.gen_bool(p)
        }
    }
}

/// The set of items measured together in one threshold test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestPool {
    members: Vec<usize>,
}

impl TestPool {
    pub fn new(mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        TestPool { members }
    }

    /// The pool `reference ∪ indicator` tested for one scheduled pair.
    pub fn union(reference: &[usize], indicator: &[usize]) -> Self {
        let mut members = Vec::with_capacity(reference.len() + indicator.len());
        members.extend_from_slice(reference);
        members.extend_from_slice(indicator);
        TestPool::new(members)
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Runs one threshold test on `pool`.
pub fn sample_outcome<R: Rng + ?Sized>(
    pool: &TestPool,
    pop: &Population,
    curve: &ChannelCurve,
    rng: &mut R,
) -> bool {
    curve.sample(pop.count_defective(pool.members()), rng)
}

/// Independent random substreams used by one trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stream {
    Defectives = 0,
    Design = 1,
    Outcomes = 2,
    /// Second-stage families of the adaptive scheme.
    StageTwoDesign = 3,
    StageTwoOutcomes = 4,
}

/// Deterministic seed tree: master seed -> trial seed -> named ChaCha stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedStreams {
    seed: u64,
}

impl SeedStreams {
    pub fn new(seed: u64) -> Self {
        SeedStreams { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Seeds for trial `index`; identical regardless of the order trials run in.
    pub fn for_trial(&self, index: u64) -> SeedStreams {
        SeedStreams {
            seed: splitmix64(self.seed ^ splitmix64(index.wrapping_add(0x9E37_79B9_7F4A_7C15))),
        }
    }

    pub fn rng(&self, stream: Stream) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream as u64);
        rng
    }
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
