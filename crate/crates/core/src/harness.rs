//! Monte Carlo experiments and the text reports behind the command line.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decoder::{
    classify_reference_groups, decode_adaptive, decode_linear, decode_nonadaptive, DecodeResult,
    DecodeTables,
};
use crate::design::{DesignPlan, StageTwoPlan};
use crate::error::{Error, Result};
use crate::model::{
    validate_instance, Algorithm, ChannelCurve, GapChannel, Instance, Population, SeedStreams,
    Stream,
};
use crate::probmath::{
    compute_phi, compute_q, leading_term, recommend_params, DesignParams, Epsilons, Overrides,
    Recommendation,
};
use crate::simulate::{simulate_plan, simulate_stage_two};

pub const TRIAL_SCHEMA: &str = "stgt.trial/v1";
pub const SUMMARY_SCHEMA: &str = "stgt.summary/v1";
pub const TRIALS_FILE: &str = "trials.jsonl";
pub const SUMMARY_FILE: &str = "summary.json";

/// Everything that determines an experiment's output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub n: usize,
    pub d: usize,
    pub l: usize,
    pub u: usize,
    pub channel: GapChannel,
    pub algorithm: Algorithm,
    /// Error budgets; unset entries default to 0.1.
    #[serde(default)]
    pub eps2: Option<f64>,
    #[serde(default)]
    pub eps3: Option<f64>,
    #[serde(default)]
    pub eps4: Option<f64>,
    #[serde(default)]
    pub overrides: Overrides,
    pub trials: usize,
    pub seed: u64,
    /// Fixed defective set for every trial; a fresh uniform draw per trial when `None`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub defectives: Option<Vec<usize>>,
}

impl ExperimentConfig {
    /// Recommended parameters at default budgets, no overrides, random defectives.
    pub fn new(inst: Instance, channel: GapChannel, algorithm: Algorithm, trials: usize, seed: u64) -> Self {
        ExperimentConfig {
            n: inst.n,
            d: inst.d,
            l: inst.l,
            u: inst.u,
            channel,
            algorithm,
            eps2: None,
            eps3: None,
            eps4: None,
            overrides: Overrides::default(),
            trials,
            seed,
            defectives: None,
        }
    }

    pub fn with_epsilon(mut self, eps: f64) -> Self {
        self.eps2 = Some(eps);
        self.eps3 = Some(eps);
        self.eps4 = Some(eps);
        self
    }

    pub fn instance(&self) -> Instance {
        Instance {
            n: self.n,
            d: self.d,
            l: self.l,
            u: self.u,
        }
    }

    pub fn epsilons(&self) -> Epsilons {
        let default = Epsilons::default();
        Epsilons {
            division: self.eps2.unwrap_or(default.division),
            reference: self.eps3.unwrap_or(default.reference),
            item: self.eps4.unwrap_or(default.item),
        }
    }

    /// Rejects an override of a count whose own error budget was also given.
    fn check_exclusive(&self) -> Result<()> {
        let o = &self.overrides;
        let clashes = [
            (o.references.is_some() && self.eps2.is_some(), "R", "eps2"),
            (o.families.is_some() && (self.eps3.is_some() || self.eps4.is_some()), "I", "eps3/eps4"),
            (o.probe_families.is_some() && self.eps3.is_some(), "I1", "eps3"),
            (o.stage_two_families.is_some() && self.eps4.is_some(), "I2", "eps4"),
        ];
        for (clash, count, eps) in clashes {
            if clash {
                return Err(Error::Configuration(format!(
                    "{count} is set explicitly and also derived from {eps}; give one or the other"
                )));
            }
        }
        Ok(())
    }

    /// Design parameters after validating the whole config.
    pub fn params(&self) -> Result<DesignParams> {
        validate_instance(self.n, self.d, self.l, self.u)?;
        self.check_exclusive()?;
        self.channel.curve(self.l, self.u)?;
        if let Some(defs) = &self.defectives {
            if defs.len() != self.d {
                return Err(Error::Configuration(format!(
                    "explicit defective list has {} entries, expected d = {}",
                    defs.len(),
                    self.d
                )));
            }
            Population::new(self.n, defs.clone(), self.l, self.u)?;
        }
        let rec = recommend_params(&self.instance(), self.algorithm, self.epsilons())?;
        rec.params.apply(&self.overrides)
    }
}

/// One line of `trials.jsonl`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub schema: String,
    pub trial: usize,
    pub seed: u64,
    pub tests_used: usize,
    /// Tests per stage; two entries for the adaptive scheme.
    pub stage_counts: Vec<usize>,
    pub exact_recovery: bool,
    pub false_positives: usize,
    pub false_negatives: usize,
    pub undetermined: usize,
    pub failed_divisions: usize,
    /// Milliseconds; only recorded on request since it breaks byte-identical reruns.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

/// Contents of `summary.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub schema: String,
    pub config: ExperimentConfig,
    pub params: DesignParams,
    pub predicted_tests: usize,
    pub trials: usize,
    pub exact_recoveries: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub recovery_rate: Option<f64>,
    /// Wilson score interval at 95%.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub recovery_ci95: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure_rate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure_ci95: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_tests: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_false_positives: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_false_negatives: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_undetermined: Option<f64>,
    pub trials_with_failed_division: usize,
}

/// 95% Wilson score interval for `successes` out of `trials`.
pub fn wilson_interval(successes: usize, trials: usize) -> Option<[f64; 2]> {
    if trials == 0 {
        return None;
    }
    const Z: f64 = 1.959_963_984_540_054;
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z * Z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = Z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    Some([(centre - half).max(0.0), (centre + half).min(1.0)])
}

/// Per-trial result before scoring is flattened into a record.
#[derive(Debug, Clone)]
pub struct TrialOutcome {
    pub population: Population,
    pub plan: DesignPlan,
    pub stage_two: Option<StageTwoPlan>,
    pub decode: DecodeResult,
}

/// A validated config ready to run.
#[derive(Debug, Clone)]
pub struct Experiment {
    config: ExperimentConfig,
    params: DesignParams,
    curve: ChannelCurve,
    timings: bool,
}

#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub summary: Summary,
    pub records: Vec<TrialRecord>,
}

impl Experiment {
    /// Validates `config`; nothing is sampled yet.
    pub fn new(config: ExperimentConfig) -> Result<Self> {
        let params = config.params()?;
        let curve = config.channel.curve(config.l, config.u)?;
        Ok(Experiment {
            config,
            params,
            curve,
            timings: false,
        })
    }

    /// Records wall time per trial.
    pub fn with_timings(mut self, on: bool) -> Self {
        self.timings = on;
        self
    }

    pub fn config(&self) -> &ExperimentConfig {
        &self.config
    }

    pub fn params(&self) -> &DesignParams {
        &self.params
    }

    /// Runs trial `index` from its own seed streams.
    pub fn run_trial_detail(&self, index: usize) -> Result<TrialOutcome> {
        let streams = SeedStreams::new(self.config.seed).for_trial(index as u64);
        let c = &self.config;
        let population = match &c.defectives {
            Some(defs) => Population::new(c.n, defs.clone(), c.l, c.u)?,
            None => Population::random(c.n, c.d, c.l, c.u, &mut streams.rng(Stream::Defectives))?,
        };
        let plan = DesignPlan::generate(&self.params, streams.seed(), &mut streams.rng(Stream::Design))?;
        let outcomes = simulate_plan(&plan, &population, &self.curve, &mut streams.rng(Stream::Outcomes));
        let (decode, stage_two) = match self.params.algorithm {
            Algorithm::Nona => {
                let tables = DecodeTables::for_plan(&plan, &self.curve)?;
                (decode_nonadaptive(&plan, &outcomes, &tables)?, None)
            }
            Algorithm::Lin => {
                let tables = DecodeTables::for_plan(&plan, &self.curve)?;
                (decode_linear(&plan, &outcomes, &tables)?, None)
            }
            Algorithm::Ada => {
                let stage_one = DecodeTables::for_stage_one(&plan, &self.curve)?;
                let (_, chosen) = classify_reference_groups(&plan, &outcomes, &stage_one)?;
                let stage_two =
                    StageTwoPlan::generate(&plan, chosen, &mut streams.rng(Stream::StageTwoDesign))?;
                let second = simulate_stage_two(
                    &plan,
                    &stage_two,
                    &population,
                    &self.curve,
                    &mut streams.rng(Stream::StageTwoOutcomes),
                );
                let tables = DecodeTables::for_adaptive(&plan, &stage_two, &self.curve)?;
                let decode = decode_adaptive(&plan, &outcomes, &stage_two, &second, &tables)?;
                (decode, Some(stage_two))
            }
        };
        Ok(TrialOutcome {
            population,
            plan,
            stage_two,
            decode,
        })
    }

    pub fn run_trial(&self, index: usize) -> Result<TrialRecord> {
        let start = self.timings.then(Instant::now);
        let outcome = self.run_trial_detail(index)?;
        let score = outcome.decode.score(&outcome.population);
        Ok(TrialRecord {
            schema: TRIAL_SCHEMA.into(),
            trial: index,
            seed: outcome.plan.seed,
            tests_used: outcome.decode.tests_used,
            stage_counts: outcome.decode.stage_counts.clone(),
            exact_recovery: score.exact(),
            false_positives: score.false_positives,
            false_negatives: score.false_negatives,
            undetermined: score.undetermined,
            failed_divisions: score.failed_divisions,
            wall_time_ms: start.map(|t| t.elapsed().as_secs_f64() * 1e3),
        })
    }

    /// Runs every trial in parallel; records come back ordered by trial index.
    pub fn run(&self) -> Result<ExperimentOutput> {
        let records = (0..self.config.trials)
            .into_par_iter()
            .map(|i| self.run_trial(i))
            .collect::<Result<Vec<_>>>()?;
        Ok(ExperimentOutput {
            summary: self.summarize(&records),
            records,
        })
    }

    pub fn summarize(&self, records: &[TrialRecord]) -> Summary {
        let trials = records.len();
        let exact = records.iter().filter(|r| r.exact_recovery).count();
        let mean = |f: fn(&TrialRecord) -> usize| {
            (trials > 0).then(|| records.iter().map(f).sum::<usize>() as f64 / trials as f64)
        };
        Summary {
            schema: SUMMARY_SCHEMA.into(),
            config: self.config.clone(),
            params: self.params.clone(),
            predicted_tests: self.params.predicted_tests(),
            trials,
            exact_recoveries: exact,
            recovery_rate: (trials > 0).then(|| exact as f64 / trials as f64),
            recovery_ci95: wilson_interval(exact, trials),
            failure_rate: (trials > 0).then(|| (trials - exact) as f64 / trials as f64),
            failure_ci95: wilson_interval(trials - exact, trials),
            mean_tests: mean(|r| r.tests_used),
            mean_false_positives: mean(|r| r.false_positives),
            mean_false_negatives: mean(|r| r.false_negatives),
            mean_undetermined: mean(|r| r.undetermined),
            trials_with_failed_division: records.iter().filter(|r| r.failed_divisions > 0).count(),
        }
    }
}

impl ExperimentOutput {
    /// Writes `trials.jsonl` and `summary.json` into `dir`, creating it if needed.
    pub fn write(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let path = dir.join(TRIALS_FILE);
        let mut lines = Vec::new();
        for record in &self.records {
            serde_json::to_writer(&mut lines, record)?;
            lines.push(b'\n');
        }
        fs::write(&path, lines).map_err(|e| Error::io(&path, e))?;
        let path = dir.join(SUMMARY_FILE);
        let mut text = serde_json::to_vec_pretty(&self.summary)?;
        text.push(b'\n');
        fs::File::create(&path)
            .and_then(|mut f| f.write_all(&text))
            .map_err(|e| Error::io(&path, e))
    }
}

/// Validates and runs `config`, writing results to `out` when given.
pub fn run_experiment(config: ExperimentConfig, out: Option<&Path>) -> Result<ExperimentOutput> {
    let output = Experiment::new(config)?.run()?;
    if let Some(dir) = out {
        output.write(dir)?;
    }
    Ok(output)
}

/// Recommended design next to the asymptotic leading term.
#[derive(Debug, Clone, Serialize)]
pub struct ParamsReport {
    pub params: DesignParams,
    pub predicted_tests: usize,
    pub leading_term: f64,
}

pub fn params_report(
    inst: &Instance,
    algorithm: Algorithm,
    eps: Epsilons,
    overrides: &Overrides,
) -> Result<ParamsReport> {
    let Recommendation { params, .. } = recommend_params(inst, algorithm, eps)?;
    let params = params.apply(overrides)?;
    Ok(ParamsReport {
        predicted_tests: params.predicted_tests(),
        leading_term: leading_term(inst, algorithm, eps),
        params,
    })
}

impl fmt::Display for ParamsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = &self.params;
        let i = p.instance;
        writeln!(f, "algorithm        {}", p.algorithm)?;
        writeln!(f, "instance         n={} d={} l={} u={} gap={}", i.n, i.d, i.l, i.u, i.gap())?;
        writeln!(
            f,
            "epsilons         eps2={} eps3={} eps4={}",
            p.epsilons.division, p.epsilons.reference, p.epsilons.item
        )?;
        writeln!(f, "divisions P      {}", p.divisions)?;
        writeln!(f, "references R     {}", p.references)?;
        match p.algorithm {
            Algorithm::Ada => {
                writeln!(f, "families I1      {}", p.probe_families.unwrap_or(0))?;
                writeln!(f, "families I2      {}", p.families)?;
            }
            _ => writeln!(f, "families I       {}", p.families)?,
        }
        writeln!(f, "gamma1, gamma2   {:.6}, {:.6}", p.gamma1, p.gamma2)?;
        writeln!(f, "reference size   {}", p.ref_size)?;
        writeln!(f, "indicator size   {}", p.ind_size)?;
        if let Some(s) = p.probe_size {
            writeln!(f, "probe size       {s}")?;
        }
        let formula = match p.algorithm {
            Algorithm::Nona | Algorithm::Lin => "R*P*(d-l)*I",
            Algorithm::Ada => "R*P*I1 + P*(d-l)*I2",
        };
        writeln!(f, "predicted T      {}  ({formula})", self.predicted_tests)?;
        let term = match p.algorithm {
            Algorithm::Nona => "(4e^8 ln2/pi^2) ln(1/eps2) sqrt(l) d ln n",
            Algorithm::Ada => "16e^2 d ln n",
            Algorithm::Lin => "g^2 d ln n",
        };
        writeln!(f, "leading term     {:.1}  ({term})", self.leading_term)?;
        write!(
            f,
            "T / leading      {:.4}",
            self.predicted_tests as f64 / self.leading_term
        )
    }
}

/// Expected fractions and decision edges at one reference count `v`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeRow {
    pub v: usize,
    pub q: f64,
    pub eta_below: Option<f64>,
    pub eta_above: Option<f64>,
    pub band: Option<[f64; 2]>,
    pub phi: Option<[f64; 2]>,
    pub delta: Option<f64>,
    pub item_boundary: Option<f64>,
    /// Why some of the fields are missing.
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeReport {
    pub instance: Instance,
    pub channel: GapChannel,
    pub block_size: usize,
    pub q: Vec<f64>,
    pub rows: Vec<ProbeRow>,
}

/// Threshold quantities for every reference count `v` in `l..u`, with
/// indicator blocks of size `block_size` (`round(n / (d - l))` when `None`).
pub fn probe_report(inst: &Instance, channel: &GapChannel, block_size: Option<usize>) -> Result<ProbeReport> {
    validate_instance(inst.n, inst.d, inst.l, inst.u)?;
    let curve = channel.curve(inst.l, inst.u)?;
    let m = block_size.unwrap_or_else(|| crate::probmath::round_half_up(inst.n as f64 / inst.blocks() as f64));
    if m == 0 || m > inst.n {
        return Err(Error::InvalidParameter(format!("block size {m} outside 1..={}", inst.n)));
    }
    let q = (0..=inst.u)
        .map(|v| compute_q(v, inst, &curve, m))
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    for v in inst.l..inst.u {
        let qv = q[v];
        let mut notes = Vec::new();
        if v == 0 {
            notes.push("reference group is empty; the probe measures the indicator block alone".to_string());
        }
        let below = v.checked_sub(1).map(|w| q[w]);
        let above = q[v + 1];
        let (eta_below, eta_above) = if qv > 0.0 {
            (below.map(|b| (qv - b) / (2.0 * qv)), Some((above - qv) / (2.0 * qv)))
        } else {
            notes.push(format!("degenerate: q_{v} = 0"));
            (None, None)
        };
        let band = (qv > 0.0).then(|| [below.map_or(0.0, |b| (b + qv) / 2.0), (qv + above) / 2.0]);
        let phi = [
            compute_phi(v, false, inst, &curve, m)?,
            compute_phi(v, true, inst, &curve, m)?,
        ];
        let (phi, delta, item_boundary) = if phi[0] > 0.0 {
            (
                Some(phi),
                Some((phi[1] - phi[0]) / (2.0 * phi[0])),
                Some((phi[0] + phi[1]) / 2.0),
            )
        } else {
            notes.push(format!("degenerate: phi_{v},0 = 0"));
            (Some(phi), None, None)
        };
        rows.push(ProbeRow {
            v,
            q: qv,
            eta_below,
            eta_above,
            band,
            phi,
            delta,
            item_boundary,
            note: (!notes.is_empty()).then(|| notes.join("; ")),
        });
    }
    Ok(ProbeReport {
        instance: *inst,
        channel: channel.clone(),
        block_size: m,
        q,
        rows,
    })
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "-".into(), |x| format!("{x:.12}"))
}

impl fmt::Display for ProbeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = self.instance;
        writeln!(
            f,
            "n={} d={} l={} u={} channel={} block size={}",
            i.n, i.d, i.l, i.u, self.channel.kind, self.block_size
        )?;
        for (v, q) in self.q.iter().enumerate() {
            writeln!(f, "q_{v} = {q:.12}")?;
        }
        for r in &self.rows {
            writeln!(f)?;
            writeln!(f, "v = {}", r.v)?;
            writeln!(f, "  q         {:.12}", r.q)?;
            writeln!(f, "  eta_below {}", opt(r.eta_below))?;
            writeln!(f, "  eta_above {}", opt(r.eta_above))?;
            if let Some([lo, hi]) = r.band {
                writeln!(f, "  band      [{lo:.12}, {hi:.12}]")?;
            }
            if let Some([p0, p1]) = r.phi {
                writeln!(f, "  phi_0     {p0:.12}")?;
                writeln!(f, "  phi_1     {p1:.12}")?;
            }
            writeln!(f, "  delta     {}", opt(r.delta))?;
            writeln!(f, "  boundary  {}", opt(r.item_boundary))?;
            if let Some(note) = &r.note {
                writeln!(f, "  note: {note}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_config(alg: Algorithm) -> ExperimentConfig {
        let inst = Instance::new(300, 6, 1, 3).unwrap();
        ExperimentConfig::new(inst, GapChannel::bernoulli(), alg, 6, 11)
    }

    #[test]
    fn wilson_edges() {
        assert_eq!(wilson_interval(0, 0), None);
        let [lo, hi] = wilson_interval(0, 200).unwrap();
        assert_eq!(lo, 0.0);
        assert!((hi - 0.018_84).abs() < 1e-4, "{hi}");
        let [lo, hi] = wilson_interval(100, 200).unwrap();
        assert!((lo + hi - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_trials_echo_parameters() {
        let mut c = small_config(Algorithm::Nona);
        c.trials = 0;
        let out = run_experiment(c, None).unwrap();
        assert!(out.records.is_empty());
        assert_eq!(out.summary.recovery_rate, None);
        let text = serde_json::to_string(&out.summary).unwrap();
        assert!(text.contains("\"predicted_tests\""));
        assert!(!text.contains("recovery_rate"));
    }

    #[test]
    fn invalid_instances_are_rejected_up_front() {
        let mut c = small_config(Algorithm::Nona);
        c.u = 7;
        let err = Experiment::new(c).unwrap_err().to_string();
        assert!(err.contains("u = 7 exceeds"), "{err}");
        let mut c = small_config(Algorithm::Nona);
        c.l = 3;
        assert!(Experiment::new(c).unwrap_err().to_string().contains("l = 3"));
    }

    #[test]
    fn override_and_budget_are_exclusive() {
        let mut c = small_config(Algorithm::Nona).with_epsilon(0.1);
        c.overrides.references = Some(2);
        assert!(matches!(Experiment::new(c), Err(Error::Configuration(_))));
        let mut c = small_config(Algorithm::Nona);
        c.eps3 = Some(0.2);
        c.overrides.references = Some(2);
        assert!(Experiment::new(c).is_ok());
    }

    #[test]
    fn explicit_defectives_checked() {
        let mut c = small_config(Algorithm::Nona);
        c.defectives = Some(vec![1, 2, 3]);
        assert!(Experiment::new(c.clone()).is_err());
        c.defectives = Some(vec![1, 2, 3, 4, 5, 300]);
        assert!(Experiment::new(c.clone()).is_err());
        c.defectives = Some(vec![0, 10, 20, 30, 40, 50]);
        let exp = Experiment::new(c).unwrap();
        let t = exp.run_trial_detail(0).unwrap();
        assert_eq!(t.population.defectives(), &[0, 10, 20, 30, 40, 50]);
    }

    #[test]
    fn records_follow_accounting() {
        for alg in [Algorithm::Nona, Algorithm::Ada, Algorithm::Lin] {
            let exp = Experiment::new(small_config(alg)).unwrap();
            let out = exp.run().unwrap();
            let p = exp.params();
            for r in &out.records {
                match alg {
                    Algorithm::Ada => {
                        let first = p.references * p.divisions * p.probe_families.unwrap();
                        assert_eq!(r.stage_counts[0], first);
                        assert_eq!((r.stage_counts[1]) % (p.instance.blocks() * p.families), 0);
                    }
                    _ => assert_eq!(r.tests_used, p.predicted_tests()),
                }
                assert_eq!(r.tests_used, r.stage_counts.iter().sum::<usize>());
            }
            let rate = out.records.iter().filter(|r| r.exact_recovery).count() as f64 / 6.0;
            assert_eq!(out.summary.recovery_rate, Some(rate));
        }
    }

    #[test]
    fn parallel_equals_serial() {
        let exp = Experiment::new(small_config(Algorithm::Nona)).unwrap();
        let parallel = exp.run().unwrap().records;
        let serial: Vec<_> = (0..6).map(|i| exp.run_trial(i).unwrap()).collect();
        assert_eq!(parallel, serial);
    }

    #[test]
    fn probe_small_instance() {
        let inst = Instance::new(6, 3, 1, 3).unwrap();
        let report = probe_report(&inst, &GapChannel::bernoulli(), None).unwrap();
        assert_eq!(report.block_size, 3);
        for (got, want) in report.q.iter().zip([0.275, 0.5, 0.75, 1.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        let row = &report.rows[0];
        let [lo, hi] = row.band.unwrap();
        assert!((row.q * (1.0 - row.eta_below.unwrap()) - lo).abs() < 1e-12);
        assert!((row.q * (1.0 + row.eta_above.unwrap()) - hi).abs() < 1e-12);
        let text = report.to_string();
        assert!(text.contains("q_0 = 0.275000000000"), "{text}");
    }

    #[test]
    fn probe_notes_empty_reference() {
        let inst = Instance::new(100, 5, 0, 2).unwrap();
        let report = probe_report(&inst, &GapChannel::bernoulli(), None).unwrap();
        assert!(report.rows[0].note.as_deref().unwrap().contains("empty"));
        assert_eq!(report.rows[0].band.unwrap()[0], 0.0);
    }

    #[test]
    fn params_text_lists_counts() {
        let inst = Instance::new(10_000, 100, 4, 8).unwrap();
        let r = params_report(&inst, Algorithm::Ada, Epsilons::default(), &Overrides::default()).unwrap();
        let text = r.to_string();
        assert!(text.contains("families I1") && text.contains("families I2"));
        let p = &r.params;
        assert_eq!(
            r.predicted_tests,
            p.references * p.divisions * p.probe_families.unwrap() + p.divisions * 96 * p.families
        );
    }
}
