//! Seeded experiment campaigns and their JSON/CSV reports.
//!
//! A campaign runs `trials` independent attacks. Trial `i` draws everything
//! from `derive_seed(seed, i)`, so results do not depend on the worker count.
//! Distinguisher campaigns alternate arms: even trials get the structured
//! oracle, odd trials the random one.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::attacks::{
    cbc2_prp_distinguisher, cbc_forge, classical_simon_baseline, feistel_distinguisher,
    forge_sample_cap, verify_forgery, Guess, VerdictReason,
};
use crate::error::{Error, Result};
use crate::gf2::{mask, BitString};
use crate::oracles::{
    blocks_to_hex, make_cbc_oracle, make_feistel_oracle, make_perm_oracle,
    make_random_mac_oracle, OracleHandle, OracleKind,
};
use crate::primitives::{random_permutation, simon_promise_function, CbcSpec, FeistelSpec};
use crate::rng::{derive_seed, rng_from_seed, SimRng};
use crate::simon::{
    distribution, simon_solve_affine, spectral_distribution, statevector_distribution, KnownBit,
    Method, SimonOutcome, MAX_SPECTRAL_WIDTH, MAX_STATEVECTOR_QUBITS,
};

/// Environment variable read when `--threads` is not given.
pub const THREADS_ENV: &str = "SIMON_ATTACKS_THREADS";

const STATEVECTOR_MAX_N: usize = 8;
const DISTRIBUTION_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    FeistelDistinguish,
    CbcForge,
    Cbc2Distinguish,
    SimonDemo,
    BaselineGap,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub n: usize,
    /// Message length in blocks (CBC experiments only).
    pub ell: usize,
    pub prefix_len: usize,
    pub trials: usize,
    pub seed: u64,
    pub method: Method,
    /// Worker threads; never affects results.
    #[serde(skip)]
    pub threads: Option<usize>,
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment, n: usize, trials: usize, seed: u64) -> Self {
        let ell = match experiment {
            Experiment::Cbc2Distinguish => 2,
            _ => 3,
        };
        Self {
            experiment,
            n,
            ell,
            prefix_len: 1,
            trials,
            seed,
            method: Method::Spectral,
            threads: None,
        }
    }

    pub fn with_blocks(mut self, ell: usize, prefix_len: usize) -> Self {
        self.ell = ell;
        self.prefix_len = prefix_len;
        self
    }

    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = Some(threads);
        self
    }

    /// Rejects parameter combinations outside the simulator caps before any
    /// work is done.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        let n = self.n;
        let max_n = match self.experiment {
            Experiment::FeistelDistinguish | Experiment::Cbc2Distinguish => 12,
            Experiment::CbcForge => 16,
            Experiment::SimonDemo => MAX_SPECTRAL_WIDTH - 1,
            Experiment::BaselineGap => 20,
        };
        let min_n = if self.experiment == Experiment::BaselineGap { 2 } else { 1 };
        if n < min_n || n > max_n {
            return bad(format!(
                "--n {n} outside {min_n}..={max_n} for {:?}",
                self.experiment
            ));
        }
        if self.method == Method::Statevector && n > STATEVECTOR_MAX_N {
            return bad(format!(
                "statevector method supports n <= {STATEVECTOR_MAX_N}, got {n}"
            ));
        }
        if self.threads == Some(0) {
            return bad("--threads must be positive".into());
        }
        match self.experiment {
            Experiment::CbcForge => {
                if self.ell < 3 {
                    return bad(format!("forgery needs --ell >= 3, got {}", self.ell));
                }
                if self.prefix_len == 0 || self.prefix_len + 2 > self.ell {
                    return bad(format!(
                        "--prefix-len must satisfy 1 <= k <= ell - 2 (ell = {}, k = {})",
                        self.ell, self.prefix_len
                    ));
                }
                if self.ell > 64 {
                    return bad("--ell above 64 is not supported".into());
                }
            }
            Experiment::Cbc2Distinguish
                if self.ell != 2 => {
                    return bad(format!("cbc2-distinguish uses ell = 2, got {}", self.ell));
                }
            _ => {}
        }
        Ok(())
    }

    /// Upper bound on Simon subroutine runs for one trial.
    pub fn subroutine_budget(&self) -> u64 {
        let n = self.n;
        (match self.experiment {
            Experiment::FeistelDistinguish | Experiment::Cbc2Distinguish => 2 * n,
            Experiment::CbcForge => (self.ell - self.prefix_len) * forge_sample_cap(n),
            Experiment::SimonDemo => 4 * (n + 2),
            Experiment::BaselineGap => 4 * (n + 1),
        }) as u64
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerdictSummary {
    pub guess: Guess,
    pub reason: VerdictReason,
    pub samples_drawn: usize,
    pub basis_rank: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ForgerySummary {
    pub message: String,
    pub tag: String,
    pub prefix_attempts: usize,
    pub templates: usize,
    pub classical_points: usize,
    pub violations: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    pub trial: usize,
    pub seed_stream: u64,
    pub ground_truth: Option<OracleKind>,
    pub verdict: Option<VerdictSummary>,
    pub correct: Option<bool>,
    pub forgery: Option<ForgerySummary>,
    pub verify_forgery: Option<bool>,
    pub aborted: Option<String>,
    pub subroutine_runs: u64,
    pub quantum_oracle_calls: u64,
    pub classical_queries: u64,
    pub baseline_queries: Option<u64>,
    pub max_distribution_diff: Option<f64>,
    pub wall_time_us: u64,
}

impl TrialReport {
    fn new(trial: usize, seed_stream: u64) -> Self {
        Self {
            trial,
            seed_stream,
            ground_truth: None,
            verdict: None,
            correct: None,
            forgery: None,
            verify_forgery: None,
            aborted: None,
            subroutine_runs: 0,
            quantum_oracle_calls: 0,
            classical_queries: 0,
            baseline_queries: None,
            max_distribution_diff: None,
            wall_time_us: 0,
        }
    }

    fn absorb_ledger(&mut self, ground: crate::oracles::GroundTruth) {
        self.ground_truth = Some(ground.kind);
        self.subroutine_runs = ground.ledger.subroutine_runs();
        self.quantum_oracle_calls = ground.ledger.quantum_oracle_calls();
        self.classical_queries = ground.ledger.classical_count() as u64;
    }
}

/// Per-arm success counts for distinguisher campaigns.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArmSummary {
    pub ground_truth: OracleKind,
    pub trials: usize,
    pub correct: usize,
    pub rate: f64,
    pub wilson_low: f64,
    pub wilson_high: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AggregateSummary {
    pub experiment: Experiment,
    pub trials: usize,
    /// Trials that were scored (aborted forgeries are excluded).
    pub scored: usize,
    pub successes: usize,
    pub success_rate: f64,
    pub wilson_low: f64,
    pub wilson_high: f64,
    pub arms: Vec<ArmSummary>,
    pub aborts: usize,
    pub discipline_violations: usize,
    pub subroutine_budget: u64,
    pub budget_violations: usize,
    pub mean_subroutine_runs: f64,
    pub median_subroutine_runs: f64,
    pub max_subroutine_runs: u64,
    pub mean_classical_queries: f64,
    pub max_classical_queries: u64,
    pub median_baseline_queries: Option<f64>,
    pub max_distribution_diff: Option<f64>,
    pub wall_time_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignResult {
    pub config: ExperimentConfig,
    pub summary: AggregateSummary,
    pub trials: Vec<TrialReport>,
}

/// Wilson score interval at 95% confidence.
pub fn wilson_interval(successes: usize, trials: usize) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959_963_984_540_054_f64;
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

fn median(values: &mut [f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.sort_by(|a, b| a.total_cmp(b));
    let mid = values.len() / 2;
    if values.len() % 2 == 1 {
        values[mid]
    } else {
        0.5 * (values[mid - 1] + values[mid])
    }
}

fn resolve_threads(config: &ExperimentConfig) -> Option<usize> {
    config.threads.or_else(|| {
        std::env::var(THREADS_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .filter(|&t| t > 0)
    })
}

pub fn run_campaign(config: &ExperimentConfig) -> Result<CampaignResult> {
    config.validate()?;
    let start = Instant::now();
    let run = || -> Vec<TrialReport> {
        (0..config.trials)
            .into_par_iter()
            .map(|i| run_trial(config, i))
            .collect()
    };
    let reports = match resolve_threads(config) {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?
            .install(run),
        None => run(),
    };
    let mut summary = summarize(config, &reports);
    summary.wall_time_ms = start.elapsed().as_millis() as u64;
    Ok(CampaignResult {
        config: config.clone(),
        summary,
        trials: reports,
    })
}

fn run_trial(config: &ExperimentConfig, trial: usize) -> TrialReport {
    let seed = derive_seed(config.seed, trial as u64);
    let mut report = TrialReport::new(trial, seed);
    let start = Instant::now();
    let mut rng = rng_from_seed(derive_seed(seed, 0));
    let outcome = match config.experiment {
        Experiment::FeistelDistinguish => feistel_trial(config, seed, trial, &mut rng, &mut report),
        Experiment::Cbc2Distinguish => cbc2_trial(config, seed, trial, &mut rng, &mut report),
        Experiment::CbcForge => forge_trial(config, seed, &mut rng, &mut report),
        Experiment::SimonDemo => demo_trial(config, seed, &mut rng, &mut report),
        Experiment::BaselineGap => baseline_trial(config, seed, &mut rng, &mut report),
    };
    if let Err(e) = outcome {
        report.aborted = Some(e.to_string());
    }
    report.wall_time_us = start.elapsed().as_micros() as u64;
    report
}

fn score_verdict(
    oracle: OracleHandle,
    verdict: crate::attacks::Verdict,
    structured: OracleKind,
    report: &mut TrialReport,
) {
    report.verdict = Some(VerdictSummary {
        guess: verdict.guess,
        reason: verdict.reason,
        samples_drawn: verdict.stats.samples_drawn,
        basis_rank: verdict.stats.basis_rank_achieved,
    });
    // The hidden kind is read only after the verdict exists.
    let ground = oracle.into_ground_truth();
    report.correct = Some((ground.kind == structured) == (verdict.guess == Guess::Feistel));
    report.absorb_ledger(ground);
}

fn feistel_trial(
    config: &ExperimentConfig,
    seed: u64,
    trial: usize,
    rng: &mut SimRng,
    report: &mut TrialReport,
) -> Result<()> {
    let oracle = if trial.is_multiple_of(2) {
        make_feistel_oracle(FeistelSpec::random(config.n, derive_seed(seed, 1))?)
    } else {
        make_perm_oracle(config.n, derive_seed(seed, 2))?
    };
    let verdict = feistel_distinguisher(&oracle, config.method, rng)?;
    score_verdict(oracle, verdict, OracleKind::Feistel, report);
    Ok(())
}

fn cbc2_trial(
    config: &ExperimentConfig,
    seed: u64,
    trial: usize,
    rng: &mut SimRng,
    report: &mut TrialReport,
) -> Result<()> {
    let oracle = if trial.is_multiple_of(2) {
        let pi = random_permutation(config.n, derive_seed(seed, 1))?;
        make_cbc_oracle(CbcSpec::new(pi, 2)?)
    } else {
        make_random_mac_oracle(config.n, 2, derive_seed(seed, 2))?
    };
    let verdict = cbc2_prp_distinguisher(&oracle, config.method, rng)?;
    score_verdict(oracle, verdict, OracleKind::CbcMac, report);
    Ok(())
}

fn forge_trial(
    config: &ExperimentConfig,
    seed: u64,
    rng: &mut SimRng,
    report: &mut TrialReport,
) -> Result<()> {
    let n = config.n;
    let pi = random_permutation(n, derive_seed(seed, 1))?;
    let cbc = make_cbc_oracle(CbcSpec::new(pi, config.ell)?);
    let mut prefix_rng = rng_from_seed(derive_seed(seed, 2));
    let beta: Vec<BitString> = (0..config.prefix_len)
        .map(|_| BitString::new(n, rand::Rng::gen::<u32>(&mut prefix_rng) & mask(n)))
        .collect::<Result<_>>()?;
    let result = cbc_forge(&cbc, &beta, config.method, rng);
    match result {
        Ok(forgery) => {
            let check = verify_forgery(&cbc, &forgery);
            report.verify_forgery = Some(check.tag_valid);
            report.correct = Some(check.is_valid());
            report.forgery = Some(ForgerySummary {
                message: blocks_to_hex(&forgery.message),
                tag: forgery.tag.to_hex(),
                prefix_attempts: forgery.prefix_attempts,
                templates: forgery.templates_queried.len(),
                classical_points: forgery.classical_points_queried.len(),
                violations: check.violations.len(),
            });
            report.absorb_ledger(cbc.into_ground_truth());
            Ok(())
        }
        Err(e) => {
            report.absorb_ledger(cbc.into_ground_truth());
            Err(e)
        }
    }
}

fn random_shift(width: usize, rng: &mut SimRng) -> u32 {
    (1u32 << (width - 1)) | (rand::Rng::gen::<u32>(rng) & mask(width - 1))
}

fn demo_trial(
    config: &ExperimentConfig,
    seed: u64,
    rng: &mut SimRng,
    report: &mut TrialReport,
) -> Result<()> {
    let m = config.n + 1;
    let shift = random_shift(m, rng);
    let f = simon_promise_function(m, shift, derive_seed(seed, 1))?;
    let primary = distribution(&f, config.method)?;
    if m <= MAX_SPECTRAL_WIDTH && m + f.out_width() <= MAX_STATEVECTOR_QUBITS {
        let other = match config.method {
            Method::Spectral => statevector_distribution(&f)?,
            Method::Statevector => spectral_distribution(&f)?,
        };
        report.max_distribution_diff = Some(primary.max_abs_diff(&other));
    }
    let stats = simon_solve_affine(&f, KnownBit::top_flag(m), 4 * (m + 1), config.method, rng)?;
    report.subroutine_runs = stats.samples_drawn as u64;
    report.quantum_oracle_calls = stats.samples_drawn as u64;
    let solved = stats.outcome == SimonOutcome::Solved(BitString::new(m, shift)?);
    let diff_ok = report
        .max_distribution_diff
        .is_none_or(|d| d < DISTRIBUTION_TOLERANCE);
    report.correct = Some(solved && diff_ok);
    Ok(())
}

fn baseline_trial(
    config: &ExperimentConfig,
    seed: u64,
    rng: &mut SimRng,
    report: &mut TrialReport,
) -> Result<()> {
    let m = config.n;
    let shift = random_shift(m, rng);
    let f = simon_promise_function(m, shift, derive_seed(seed, 1))?;
    let classical = classical_simon_baseline(&f, rng)?;
    report.baseline_queries = Some(classical.queries);
    report.classical_queries = classical.queries;
    let stats = simon_solve_affine(&f, KnownBit::top_flag(m), 4 * (m + 1), config.method, rng)?;
    report.subroutine_runs = stats.samples_drawn as u64;
    report.quantum_oracle_calls = stats.samples_drawn as u64;
    let want = BitString::new(m, shift)?;
    report.correct = Some(stats.outcome == SimonOutcome::Solved(want) && classical.shift == want);
    Ok(())
}

pub fn summarize(config: &ExperimentConfig, reports: &[TrialReport]) -> AggregateSummary {
    let aborts = reports.iter().filter(|r| r.aborted.is_some()).count();
    let scored: Vec<&TrialReport> = reports.iter().filter(|r| r.correct.is_some()).collect();
    let successes = scored.iter().filter(|r| r.correct == Some(true)).count();
    let (wilson_low, wilson_high) = wilson_interval(successes, scored.len());

    let mut arms: Vec<ArmSummary> = Vec::new();
    if matches!(
        config.experiment,
        Experiment::FeistelDistinguish | Experiment::Cbc2Distinguish
    ) {
        let kinds = match config.experiment {
            Experiment::FeistelDistinguish => [OracleKind::Feistel, OracleKind::RandomPermutation],
            _ => [OracleKind::CbcMac, OracleKind::RandomFunction],
        };
        for kind in kinds {
            let arm: Vec<_> = scored
                .iter()
                .filter(|r| r.ground_truth == Some(kind))
                .collect();
            let correct = arm.iter().filter(|r| r.correct == Some(true)).count();
            let (lo, hi) = wilson_interval(correct, arm.len());
            arms.push(ArmSummary {
                ground_truth: kind,
                trials: arm.len(),
                correct,
                rate: ratio(correct, arm.len()),
                wilson_low: lo,
                wilson_high: hi,
            });
        }
    }

    let budget = config.subroutine_budget();
    let runs: Vec<u64> = reports.iter().map(|r| r.subroutine_runs).collect();
    let classical: Vec<u64> = reports.iter().map(|r| r.classical_queries).collect();
    let mut runs_f: Vec<f64> = runs.iter().map(|&r| r as f64).collect();
    let mut baseline: Vec<f64> = reports
        .iter()
        .filter_map(|r| r.baseline_queries.map(|q| q as f64))
        .collect();
    let diffs: Vec<f64> = reports
        .iter()
        .filter_map(|r| r.max_distribution_diff)
        .collect();

    AggregateSummary {
        experiment: config.experiment,
        trials: reports.len(),
        scored: scored.len(),
        successes,
        success_rate: ratio(successes, scored.len()),
        wilson_low,
        wilson_high,
        arms,
        aborts,
        discipline_violations: reports
            .iter()
            .filter_map(|r| r.forgery.as_ref().map(|f| f.violations))
            .sum(),
        subroutine_budget: budget,
        budget_violations: runs.iter().filter(|&&r| r > budget).count(),
        mean_subroutine_runs: mean(&runs),
        median_subroutine_runs: median(&mut runs_f),
        max_subroutine_runs: runs.iter().copied().max().unwrap_or(0),
        mean_classical_queries: mean(&classical),
        max_classical_queries: classical.iter().copied().max().unwrap_or(0),
        median_baseline_queries: (!baseline.is_empty()).then(|| median(&mut baseline)),
        max_distribution_diff: (!diffs.is_empty()).then(|| diffs.iter().copied().fold(0.0, f64::max)),
        wall_time_ms: 0,
    }
}

fn ratio(a: usize, b: usize) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

fn mean(values: &[u64]) -> f64 {
    if values.is_empty() {
        0.0
    } else {
        values.iter().sum::<u64>() as f64 / values.len() as f64
    }
}

/// Thresholds checked by `--assert`. Returns one message per failed check.
pub fn threshold_failures(result: &CampaignResult) -> Vec<String> {
    let s = &result.summary;
    let n = result.config.n;
    let mut failures = Vec::new();
    let mut need = |ok: bool, msg: String| {
        if !ok {
            failures.push(msg);
        }
    };
    need(
        s.budget_violations == 0,
        format!("{} trials exceeded the subroutine budget {}", s.budget_violations, s.subroutine_budget),
    );
    let arm_rate = |kind| s.arms.iter().find(|a| a.ground_truth == kind).map(|a| a.rate);
    match result.config.experiment {
        Experiment::FeistelDistinguish => {
            let random_min = (1.0 - 4.0 * 0.5f64.powi(n as i32)).min(0.98);
            if let Some(r) = arm_rate(OracleKind::Feistel) {
                need(r >= 0.99, format!("Feistel arm rate {r:.4} < 0.99"));
            }
            if let Some(r) = arm_rate(OracleKind::RandomPermutation) {
                need(r >= random_min, format!("random arm rate {r:.4} < {random_min:.4}"));
            }
        }
        Experiment::Cbc2Distinguish => {
            if let Some(r) = arm_rate(OracleKind::CbcMac) {
                need(r >= 0.99, format!("CBC arm rate {r:.4} < 0.99"));
            }
            if let Some(r) = arm_rate(OracleKind::RandomFunction) {
                need(r >= 0.90, format!("random-function arm rate {r:.4} < 0.90"));
            }
        }
        Experiment::CbcForge => {
            need(
                s.successes == s.scored,
                format!("{} of {} forgeries failed verification", s.scored - s.successes, s.scored),
            );
            need(
                s.discipline_violations == 0,
                format!("{} query-discipline violations", s.discipline_violations),
            );
            need(
                (s.aborts as f64) < 0.01 * s.trials.max(1) as f64,
                format!("{} aborted forgeries", s.aborts),
            );
        }
        Experiment::SimonDemo => {
            need(s.success_rate >= 0.99, format!("solve rate {:.4} < 0.99", s.success_rate));
            if let Some(d) = s.max_distribution_diff {
                need(d < DISTRIBUTION_TOLERANCE, format!("methods differ by {d:e}"));
            }
        }
        Experiment::BaselineGap => {
            let floor = 2f64.powf(n as f64 / 2.0 - 1.0);
            let med = s.median_baseline_queries.unwrap_or(0.0);
            need(med >= floor, format!("classical median {med} < {floor}"));
            need(
                med >= 4.0 * s.median_subroutine_runs,
                format!("classical median {med} is not 4x the quantum median {}", s.median_subroutine_runs),
            );
        }
    }
    failures
}

pub fn to_json(result: &CampaignResult) -> Result<String> {
    serde_json::to_string_pretty(result).map_err(|e| Error::Report(e.to_string()))
}

/// Drops every timing field so reruns can be compared byte for byte.
pub fn strip_timing(value: &mut serde_json::Value) {
    match value {
        serde_json::Value::Object(map) => {
            map.retain(|k, _| !k.starts_with("wall_time"));
            map.values_mut().for_each(strip_timing);
        }
        serde_json::Value::Array(items) => items.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

pub const CSV_HEADER: [&str; 17] = [
    "trial",
    "seed_stream",
    "ground_truth",
    "guess",
    "reason",
    "samples_drawn",
    "correct",
    "verify_forgery",
    "message",
    "tag",
    "violations",
    "aborted",
    "subroutine_runs",
    "quantum_oracle_calls",
    "classical_queries",
    "baseline_queries",
    "wall_time_us",
];

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn kind_label(kind: OracleKind) -> &'static str {
    match kind {
        OracleKind::Feistel => "feistel",
        OracleKind::RandomPermutation => "random-permutation",
        OracleKind::CbcMac => "cbc-mac",
        OracleKind::RandomFunction => "random-function",
    }
}

fn csv_row(r: &TrialReport) -> Vec<String> {
    vec![
        r.trial.to_string(),
        r.seed_stream.to_string(),
        opt(r.ground_truth.map(kind_label)),
        opt(r.verdict.as_ref().map(|v| format!("{:?}", v.guess))),
        opt(r.verdict.as_ref().map(|v| format!("{:?}", v.reason))),
        opt(r.verdict.as_ref().map(|v| v.samples_drawn)),
        opt(r.correct),
        opt(r.verify_forgery),
        opt(r.forgery.as_ref().map(|f| f.message.clone())),
        opt(r.forgery.as_ref().map(|f| f.tag.clone())),
        opt(r.forgery.as_ref().map(|f| f.violations)),
        opt(r.aborted.clone()),
        r.subroutine_runs.to_string(),
        r.quantum_oracle_calls.to_string(),
        r.classical_queries.to_string(),
        opt(r.baseline_queries),
        r.wall_time_us.to_string(),
    ]
}

pub fn write_csv(result: &CampaignResult, w: impl Write) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let err = |e: csv::Error| Error::Report(e.to_string());
    out.write_record(CSV_HEADER).map_err(err)?;
    for r in &result.trials {
        out.write_record(csv_row(r)).map_err(err)?;
    }
    out.flush().map_err(|e| Error::Report(e.to_string()))
}

pub fn emit_report(result: &CampaignResult, format: OutputFormat, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    match format {
        OutputFormat::Json => {
            let text = to_json(result)?;
            w.write_all(text.as_bytes())
                .and_then(|_| w.write_all(b"\n"))
                .map_err(|e| Error::io(path, e))?;
        }
        OutputFormat::Csv => write_csv(result, &mut w).map_err(|e| match e {
            Error::Report(msg) => Error::io(path, std::io::Error::other(msg)),
            other => other,
        })?,
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Command-line front end.
#[derive(Debug, Parser)]
#[command(name = "simon-attacks", about = "Seeded campaigns for Simon-based attacks on Feistel networks and CBC-MAC")]
pub struct Cli {
    #[arg(long, value_enum)]
    pub experiment: Experiment,
    /// Half-width (Feistel), block width (CBC) or shift width (baseline-gap).
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub ell: Option<usize>,
    #[arg(long = "prefix-len", default_value_t = 1)]
    pub prefix_len: usize,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Method::Spectral)]
    pub method: Method,
    /// Output file; the JSON report goes to stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    #[arg(long)]
    pub threads: Option<usize>,
    /// Exit with status 3 when the campaign misses its acceptance thresholds.
    #[arg(long)]
    pub assert: bool,
}

impl Cli {
    pub fn config(&self) -> ExperimentConfig {
        let mut config = ExperimentConfig::new(self.experiment, self.n, self.trials, self.seed)
            .with_method(self.method);
        if let Some(ell) = self.ell {
            config.ell = ell;
        }
        config.prefix_len = self.prefix_len;
        config.threads = self.threads;
        config
    }
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_THRESHOLD: i32 = 3;

/// Parses arguments, runs the campaign and writes the report. Returns the
/// process exit code.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let config = cli.config();
    if let Err(e) = config.validate() {
        eprintln!("error: {e}");
        return EXIT_USAGE;
    }
    let result = match run_campaign(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_FAILURE;
        }
    };
    let written = match &cli.out {
        Some(path) => emit_report(&result, cli.format, path),
        None => match cli.format {
            OutputFormat::Json => to_json(&result).map(|t| println!("{t}")),
            OutputFormat::Csv => write_csv(&result, std::io::stdout().lock()),
        },
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return EXIT_FAILURE;
    }
    let s = &result.summary;
    eprintln!(
        "{:?}: {}/{} scored trials succeeded ({:.4}, Wilson 95% [{:.4}, {:.4}]), {} aborted, mean subroutine runs {:.2}",
        s.experiment, s.successes, s.scored, s.success_rate, s.wilson_low, s.wilson_high, s.aborts, s.mean_subroutine_runs
    );
    if cli.assert {
        let failures = threshold_failures(&result);
        if !failures.is_empty() {
            for f in failures {
                eprintln!("threshold: {f}");
            }
            return EXIT_THRESHOLD;
        }
    }
    EXIT_OK
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_interval_brackets_rate() {
        let (lo, hi) = wilson_interval(95, 100);
        assert!(lo < 0.95 && 0.95 < hi);
        assert!((lo - 0.8882).abs() < 1e-3 && (hi - 0.9785).abs() < 1e-3);
        let (lo, hi) = wilson_interval(100, 100);
        assert!(lo > 0.96 && hi == 1.0);
        assert_eq!(wilson_interval(0, 0), (0.0, 1.0));
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let cases = [
            ExperimentConfig::new(Experiment::CbcForge, 4, 1, 0).with_blocks(3, 2),
            ExperimentConfig::new(Experiment::CbcForge, 4, 1, 0).with_blocks(2, 1),
            ExperimentConfig::new(Experiment::FeistelDistinguish, 9, 1, 0).with_method(Method::Statevector),
            ExperimentConfig::new(Experiment::FeistelDistinguish, 13, 1, 0),
            ExperimentConfig::new(Experiment::BaselineGap, 1, 1, 0),
            ExperimentConfig::new(Experiment::Cbc2Distinguish, 4, 1, 0).with_blocks(3, 1),
            ExperimentConfig::new(Experiment::SimonDemo, 4, 1, 0).with_threads(0),
        ];
        for c in cases {
            assert!(matches!(run_campaign(&c), Err(Error::InvalidConfig(_))), "{c:?}");
        }
    }

    #[test]
    fn median_handles_even_and_odd() {
        assert_eq!(median(&mut [3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&mut [4.0, 1.0, 2.0, 3.0]), 2.5);
        assert_eq!(median(&mut []), 0.0);
    }
}
