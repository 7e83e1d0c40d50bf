//! Exact probabilities, decision thresholds, and parameter recommendation.
//!
//! Every expected positive fraction here is an exact finite sum over a
//! hypergeometric law: an indicator block of size `m` is modelled as a uniform
//! `m`-subset of the universe, and the defectives it adds to a pool are the
//! ones outside the reference group.

use std::collections::BTreeMap;
use std::f64::consts::{E, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Algorithm, ChannelCurve, Instance};

/// Round half up, the rounding rule for every group size.
pub fn round_half_up(x: f64) -> usize {
    (x + 0.5).floor().max(0.0) as usize
}

/// Neumaier compensated summation.
#[derive(Debug, Default, Clone, Copy)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.carry
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::default();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Hypergeometric law of the number of successes in `draws` items drawn
/// without replacement from `population` items holding `successes`.
///
/// The pmf is built by the term-ratio recurrence outward from the mode and
/// normalized with a compensated sum, so no binomial coefficient is ever
/// formed and `population` can be in the millions.
#[derive(Debug, Clone)]
pub struct Hypergeometric {
    lo: usize,
    probs: Vec<f64>,
}

impl Hypergeometric {
    pub fn new(draws: usize, population: usize, successes: usize) -> Result<Self> {
        if draws > population || successes > population {
            return Err(Error::InvalidParameter(format!(
                "hypergeometric needs draws ({draws}) and successes ({successes}) <= population ({population})"
            )));
        }
        let (s, n, d) = (draws as f64, population as f64, successes as f64);
        let lo = (draws + successes).saturating_sub(population);
        let hi = draws.min(successes);
        let mode = (((draws as u128 + 1) * (successes as u128 + 1)) / (population as u128 + 2))
            as usize;
        let mode = mode.clamp(lo, hi);

        let mut terms = vec![0.0; hi - lo + 1];
        terms[mode - lo] = 1.0;
        // p(v+1)/p(v) = (d-v)(s-v) / ((v+1)(n-d-s+v+1))
        for v in mode..hi {
            let vf = v as f64;
            let ratio = (d - vf) * (s - vf) / ((vf + 1.0) * (n - d - s + vf + 1.0));
            let next = terms[v - lo] * ratio;
            if next == 0.0 {
                break;
            }
            terms[v + 1 - lo] = next;
        }
        // p(v-1)/p(v) = v(n-d-s+v) / ((d-v+1)(s-v+1))
        for v in (lo + 1..=mode).rev() {
            let vf = v as f64;
            let ratio = vf * (n - d - s + vf) / ((d - vf + 1.0) * (s - vf + 1.0));
            let prev = terms[v - lo] * ratio;
            if prev == 0.0 {
                break;
            }
            terms[v - 1 - lo] = prev;
        }
        let total = terms.iter().copied().collect::<CompensatedSum>().total();
        for t in &mut terms {
            *t /= total;
        }
        Ok(Hypergeometric { lo, probs: terms })
    }

    pub fn pmf(&self, v: usize) -> f64 {
        v.checked_sub(self.lo)
            .and_then(|i| self.probs.get(i))
            .copied()
            .unwrap_or(0.0)
    }

    /// `(value, probability)` over the support.
    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.probs.iter().enumerate().map(|(i, &p)| (i + self.lo, p))
    }

    /// Expectation of `f` under this law, compensated.
    pub fn expect(&self, mut f: impl FnMut(usize) -> f64) -> f64 {
        self.iter()
            .map(|(v, p)| p * f(v))
            .collect::<CompensatedSum>()
            .total()
    }
}

/// `C(d,v) C(n-d, s-v) / C(n,s)`; zero outside the support.
pub fn hypergeom_pmf(v: usize, s: usize, n: usize, d: usize) -> f64 {
    Hypergeometric::new(s, n, d).map_or(0.0, |h| h.pmf(v))
}

/// Analytic lower bound on the chance that a group of `n l / d` items holds
/// exactly `l` defectives: `(4 pi^2 / e^5) / sqrt(l) * sqrt(d/(d-l)) * sqrt(n/(n-d))`.
///
/// `l = 0` gives 1, an empty group is always critical.
pub fn critical_hit_lower_bound(n: usize, d: usize, l: usize) -> f64 {
    if l == 0 {
        return 1.0;
    }
    let (n, d, l) = (n as f64, d as f64, l as f64);
    4.0 * PI * PI / E.powi(5) / l.sqrt() * (d / (d - l)).sqrt() * (n / (n - d)).sqrt()
}

/// Expected positive fraction when the reference group holds `v` defectives
/// and is pooled with a uniform `m`-subset of the universe.
pub fn compute_q(v: usize, inst: &Instance, curve: &ChannelCurve, m: usize) -> Result<f64> {
    if v > inst.d {
        return Err(Error::InvalidParameter(format!(
            "reference group cannot hold {v} of {} defectives",
            inst.d
        )));
    }
    if v >= curve.u() {
        return Ok(1.0);
    }
    let outside = Hypergeometric::new(m, inst.n, inst.d - v)?;
    Ok(outside.expect(|w| curve.prob(v + w)))
}

/// Expected positive fraction for an item test: reference group with `v`
/// defectives, item `j` outside it with defect bit `bit`, and `m - 1` uniform
/// companions from the other `n - 1` items.
pub fn compute_phi(
    v: usize,
    bit: bool,
    inst: &Instance,
    curve: &ChannelCurve,
    m: usize,
) -> Result<f64> {
    if v >= curve.u() {
        return Err(Error::InvalidParameter(format!(
            "item probability undefined for v = {v} >= u = {}",
            curve.u()
        )));
    }
    if m == 0 {
        return Err(Error::InvalidParameter("indicator block size is zero".into()));
    }
    let others = inst.d.checked_sub(v + usize::from(bit)).ok_or_else(|| {
        Error::InvalidParameter(format!(
            "no defective left outside a reference group holding {v} of {}",
            inst.d
        ))
    })?;
    let base = v + usize::from(bit);
    let companions = Hypergeometric::new(m - 1, inst.n - 1, others)?;
    Ok(companions.expect(|w| curve.prob(base + w)))
}

/// Decision values for one reference-defective count `v`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdEntry {
    /// `(q_v - q_{v-1}) / (2 q_v)`; `None` when `v = 0` has no lower neighbour.
    pub eta_below: Option<f64>,
    /// `(q_{v+1} - q_v) / (2 q_v)`.
    pub eta_above: Option<f64>,
    /// Item positive fractions for a non-defective (`[0]`) and defective (`[1]`) item.
    pub phi: [f64; 2],
    /// `(phi_1 - phi_0) / (2 phi_0)`.
    pub delta: f64,
}

/// Expected fractions `q_v`, `phi_{v,w}` and the half-gap bands built from them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdTable {
    pub q: BTreeMap<usize, f64>,
    pub entries: BTreeMap<usize, ThresholdEntry>,
}

impl ThresholdTable {
    /// Tables for each `v` in `v_range`, with probes of size `probe_block` and
    /// item tests against blocks of size `item_block`.
    pub fn build(
        inst: &Instance,
        curve: &ChannelCurve,
        probe_block: usize,
        item_block: usize,
        v_range: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        let mut q = BTreeMap::new();
        let mut phi = BTreeMap::new();
        for v in v_range {
            for w in v.saturating_sub(1)..=(v + 1).min(inst.d) {
                if let std::collections::btree_map::Entry::Vacant(slot) = q.entry(w) {
                    slot.insert(compute_q(w, inst, curve, probe_block)?);
                }
            }
            phi.insert(
                v,
                [
                    compute_phi(v, false, inst, curve, item_block)?,
                    compute_phi(v, true, inst, curve, item_block)?,
                ],
            );
        }
        Self::from_parts(q, phi)
    }

    /// Derives bands from raw `q` and `phi` values.
    pub fn from_parts(q: BTreeMap<usize, f64>, phi: BTreeMap<usize, [f64; 2]>) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (&v, &[phi0, phi1]) in &phi {
            let qv = *q.get(&v).ok_or_else(|| {
                Error::InvalidParameter(format!("threshold table lacks q for v = {v}"))
            })?;
            if qv <= 0.0 || phi0 <= 0.0 {
                return Err(Error::Degenerate { v });
            }
            let eta_below = v
                .checked_sub(1)
                .and_then(|w| q.get(&w))
                .map(|&below| (qv - below) / (2.0 * qv));
            let eta_above = q.get(&(v + 1)).map(|&above| (above - qv) / (2.0 * qv));
            entries.insert(
                v,
                ThresholdEntry {
                    eta_below,
                    eta_above,
                    phi: [phi0, phi1],
                    delta: (phi1 - phi0) / (2.0 * phi0),
                },
            );
        }
        Ok(ThresholdTable { q, entries })
    }

    /// Weighted average of tables; bands of the result are the averaged bands.
    ///
    /// Used when probe or item blocks come in two sizes: the expected count
    /// over a mix of sizes is the sum of per-test expectations.
    pub fn mix(parts: &[(f64, &ThresholdTable)]) -> Result<Self> {
        let total: f64 = parts.iter().map(|(w, _)| w).sum();
        if parts.is_empty() || total <= 0.0 {
            return Err(Error::InvalidParameter("empty threshold mixture".into()));
        }
        let mut q = BTreeMap::new();
        let mut phi = BTreeMap::new();
        for &(w, table) in parts {
            let share = w / total;
            for (&v, &qv) in &table.q {
                *q.entry(v).or_insert(0.0) += share * qv;
            }
            for (&v, e) in &table.entries {
                let slot = phi.entry(v).or_insert([0.0, 0.0]);
                slot[0] += share * e.phi[0];
                slot[1] += share * e.phi[1];
            }
        }
        Self::from_parts(q, phi)
    }

    pub fn q(&self, v: usize) -> Option<f64> {
        self.q.get(&v).copied()
    }

    pub fn entry(&self, v: usize) -> Option<&ThresholdEntry> {
        self.entries.get(&v)
    }

    /// Acceptance band for "holds `v` defectives" as fractions of the probe count.
    ///
    /// The edges are the midpoints `(q_{v-1} + q_v) / 2` and `(q_v + q_{v+1}) / 2`,
    /// equal to `q_v (1 - eta_below)` and `q_v (1 + eta_above)`; neighbouring
    /// bands therefore share bit-identical edges. A missing neighbour opens the
    /// band to 0 or 1.
    pub fn band(&self, v: usize) -> Option<(f64, f64)> {
        let qv = self.q(v)?;
        self.entry(v)?;
        let lower = v
            .checked_sub(1)
            .and_then(|w| self.q(w))
            .map_or(0.0, |below| (below + qv) / 2.0);
        let upper = self.q(v + 1).map_or(1.0, |above| (qv + above) / 2.0);
        Some((lower, upper))
    }

    /// Largest positive fraction still called non-defective: `phi_0 (1 + delta)`,
    /// evaluated as the midpoint of `phi_0` and `phi_1`.
    pub fn item_boundary(&self, v: usize) -> Option<f64> {
        self.entry(v).map(|e| (e.phi[0] + e.phi[1]) / 2.0)
    }
}

/// Per-stage error budgets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Epsilons {
    /// Some division lacks a usable reference group.
    pub division: f64,
    /// Some reference group is misclassified.
    pub reference: f64,
    /// Some item is misclassified.
    pub item: f64,
}

impl Epsilons {
    pub fn uniform(eps: f64) -> Self {
        Epsilons {
            division: eps,
            reference: eps,
            item: eps,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, e) in [
            ("eps2", self.division),
            ("eps3", self.reference),
            ("eps4", self.item),
        ] {
            if !(e > 0.0 && e < 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} = {e} must lie in (0, 1)"
                )));
            }
        }
        Ok(())
    }
}

impl Default for Epsilons {
    fn default() -> Self {
        Epsilons::uniform(0.1)
    }
}

/// Sizes and counts that define a design.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignParams {
    pub algorithm: Algorithm,
    pub instance: Instance,
    /// `(d + l) / (2d)`, the share of the universe outside one division.
    pub gamma1: f64,
    /// Indicator size ratio in `(0, 1]`.
    pub gamma2: f64,
    /// Number of divisions `P`.
    pub divisions: usize,
    /// Reference groups per division `R`.
    pub references: usize,
    /// Indicator families: `I` for the non-adaptive schemes, `I_2` for the adaptive one.
    pub families: usize,
    /// First-stage probe count `I_1` (adaptive only).
    pub probe_families: Option<usize>,
    pub ref_size: usize,
    /// Nominal indicator block size `round(gamma2 n / (d - l))`.
    pub ind_size: usize,
    /// First-stage probe size `round(gamma2 n / d)` (adaptive only).
    pub probe_size: Option<usize>,
    pub epsilons: Epsilons,
}

impl DesignParams {
    /// Number of tests the design performs when every division succeeds.
    pub fn predicted_tests(&self) -> usize {
        let blocks = self.instance.blocks();
        match self.algorithm {
            Algorithm::Nona | Algorithm::Lin => {
                self.references * self.divisions * blocks * self.families
            }
            Algorithm::Ada => {
                self.references * self.divisions * self.probe_families.unwrap_or(0)
                    + self.divisions * blocks * self.families
            }
        }
    }

    /// Replaces derived values with explicit ones.
    pub fn apply(mut self, overrides: &Overrides) -> Result<Self> {
        if let Some(r) = overrides.references {
            self.references = r;
        }
        if let Some(gamma2) = overrides.gamma2 {
            if !(gamma2 > 0.0 && gamma2 <= 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "gamma2 = {gamma2} must lie in (0, 1]"
                )));
            }
            let inst = self.instance;
            self.gamma2 = gamma2;
            self.ind_size = round_half_up(gamma2 * inst.n as f64 / inst.blocks() as f64);
            if self.algorithm == Algorithm::Ada {
                self.probe_size = Some(round_half_up(gamma2 * inst.n as f64 / inst.d as f64));
            }
        }
        match self.algorithm {
            Algorithm::Nona | Algorithm::Lin => {
                if let Some(i) = overrides.families {
                    self.families = i;
                }
                if overrides.probe_families.is_some() || overrides.stage_two_families.is_some() {
                    return Err(Error::InvalidParameter(
                        "I1/I2 apply to the adaptive scheme only; use I".into(),
                    ));
                }
            }
            Algorithm::Ada => {
                if overrides.families.is_some() {
                    return Err(Error::InvalidParameter(
                        "the adaptive scheme takes I1 and I2, not I".into(),
                    ));
                }
                if let Some(i1) = overrides.probe_families {
                    self.probe_families = Some(i1);
                }
                if let Some(i2) = overrides.stage_two_families {
                    self.families = i2;
                }
            }
        }
        if self.references == 0 || self.families == 0 || self.probe_families == Some(0) {
            return Err(Error::InvalidParameter(
                "R, I, I1 and I2 must all be at least 1".into(),
            ));
        }
        if self.ind_size == 0 || self.probe_size == Some(0) {
            return Err(Error::InvalidParameter("indicator size rounds to zero".into()));
        }
        Ok(self)
    }
}

/// Explicit values that take precedence over the recommended ones.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Overrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub references: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub families: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probe_families: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stage_two_families: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma2: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Recommendation {
    pub params: DesignParams,
    pub predicted_tests: usize,
}

/// `8 e^2`, the constant in front of every indicator-count bound.
pub const INDICATOR_CONSTANT: f64 = 8.0 * E * E;

fn ceil_count(x: f64) -> usize {
    (x.ceil() as usize).max(1)
}

/// Divisions `P = ceil(2d / (d - l))`.
pub fn division_count(inst: &Instance) -> usize {
    (2 * inst.d).div_ceil(inst.d - inst.l)
}

/// Reference groups per division for the Bernoulli schemes.
pub fn bernoulli_references(inst: &Instance, eps_division: f64) -> usize {
    if inst.l == 0 {
        return 1;
    }
    let (n, d, l) = (inst.n as f64, inst.d as f64, inst.l as f64);
    let x = ((1.0 / eps_division).ln() + (2.0 * d / (d - l)).ln()) * E.powi(6)
        / (4.0 * PI * PI)
        * l.sqrt()
        * ((d - l) / (d + l)).sqrt()
        * ((n - d) / n).sqrt();
    ceil_count(x)
}

/// Reference groups per division for the linear scheme: `max(3, ceil(ln(2P / eps2)))`.
pub fn linear_references(divisions: usize, eps_division: f64) -> usize {
    ceil_count((2.0 * divisions as f64 / eps_division).ln()).max(3)
}

/// Recommended design for `inst` under `algorithm` with error budgets `eps`.
pub fn recommend_params(
    inst: &Instance,
    algorithm: Algorithm,
    eps: Epsilons,
) -> Result<Recommendation> {
    crate::model::validate_instance(inst.n, inst.d, inst.l, inst.u)?;
    eps.validate()?;
    let (n, d, l, u) = (inst.n, inst.d, inst.l, inst.u);
    let nf = n as f64;
    let gamma1 = (d + l) as f64 / (2 * d) as f64;
    let gamma2 = 1.0;
    let divisions = division_count(inst);
    let ind_size = round_half_up(gamma2 * nf / (d - l) as f64);
    let bern_refs = bernoulli_references(inst, eps.division);
    let ln_inv = |e: f64| (1.0 / e).ln();
    let bern_families = ceil_count(
        INDICATOR_CONSTANT * (nf.ln() + ln_inv(eps.reference) + ln_inv(eps.item)),
    )
    .max(ceil_count(
        INDICATOR_CONSTANT * (((bern_refs * divisions) as f64).ln() + ln_inv(eps.reference)),
    ));
    let params = match algorithm {
        Algorithm::Nona => DesignParams {
            algorithm,
            instance: *inst,
            gamma1,
            gamma2,
            divisions,
            references: bern_refs,
            families: bern_families,
            probe_families: None,
            ref_size: (2 * n * l + d) / (2 * d),
            ind_size,
            probe_size: None,
            epsilons: eps,
        },
        Algorithm::Ada => DesignParams {
            algorithm,
            instance: *inst,
            gamma1,
            gamma2,
            divisions,
            references: bern_refs,
            families: ceil_count(INDICATOR_CONSTANT * (nf.ln() + ln_inv(eps.item))),
            probe_families: Some(ceil_count(
                INDICATOR_CONSTANT
                    * (((bern_refs * divisions) as f64).ln() + ln_inv(eps.reference)),
            )),
            ref_size: (2 * n * l + d) / (2 * d),
            ind_size,
            probe_size: Some(round_half_up(gamma2 * nf / d as f64)),
            epsilons: eps,
        },
        Algorithm::Lin => {
            let g = inst.gap();
            if g == 0 {
                return Err(Error::InvalidInstance(format!(
                    "linear decoding needs a gap, got u = {u} = l + 1"
                )));
            }
            DesignParams {
                algorithm,
                instance: *inst,
                gamma1,
                gamma2,
                divisions,
                references: linear_references(divisions, eps.division),
                families: g * g * bern_families,
                probe_families: None,
                // u = d can round one past the smallest division complement
                ref_size: ((n * (u + l) + d) / (2 * d)).min(n - n.div_ceil(divisions)),
                ind_size,
                probe_size: None,
                epsilons: eps,
            }
        }
    };
    let predicted_tests = params.predicted_tests();
    Ok(Recommendation {
        params,
        predicted_tests,
    })
}

/// Leading term of the asymptotic test count for comparison with a design.
pub fn leading_term(inst: &Instance, algorithm: Algorithm, eps: Epsilons) -> f64 {
    let (n, d, l) = (inst.n as f64, inst.d as f64, inst.l as f64);
    match algorithm {
        Algorithm::Nona => {
            4.0 * E.powi(8) * 2f64.ln() / (PI * PI) * (1.0 / eps.division).ln() * l.sqrt() * d
                * n.ln()
        }
        Algorithm::Ada => 16.0 * E * E * d * n.ln(),
        Algorithm::Lin => {
            let g = inst.gap() as f64;
            g * g * d * n.ln()
        }
    }
}
