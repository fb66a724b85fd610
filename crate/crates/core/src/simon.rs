//! Exact classical simulation of Simon's subroutine
//! (`H^{⊗m}` → `U_f` → `H^{⊗m}` → measure) and the sampling loop that
//! recovers the hidden shift.
//!
//! Two independent routes give the outcome law:
//!
//! * [`spectral_distribution`] groups inputs by output value and uses integer
//!   character sums: `Pr[j] = Σ_y (Σ_{f(u)=y} (-1)^{u·j})² / 2^{2m}`.
//! * [`statevector_distribution`] runs the circuit gate by gate on `m + r`
//!   qubits.
//!
//! Sampling follows the circuit's measurement order: first the output
//! register (a class `f⁻¹(y)` with probability `|f⁻¹(y)| / 2^m`), then `j`
//! within the collapsed class.

use std::collections::HashMap;

use num_complex::Complex64;
use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{mask, parity, solve_affine, walsh_hadamard_in_place, BitString, Gf2Basis, SolveOutcome};
use crate::primitives::TruthTable;

pub const MAX_SPECTRAL_WIDTH: usize = 14;
pub const MAX_STATEVECTOR_QUBITS: usize = 20;
pub const MAX_SAMPLING_WIDTH: usize = 24;
const MAX_DUMP_WIDTH: usize = 7;

/// Classes up to this size are sampled by rejection instead of a full
/// transform.
const SMALL_CLASS: usize = 32;

/// Something Simon's subroutine can be run against. Each run is reported
/// through [`SubroutineOracle::record_run`] so derived oracles can charge
/// their ledger.
pub trait SubroutineOracle {
    fn table(&self) -> &TruthTable;

    fn record_run(&self) {}
}

impl SubroutineOracle for TruthTable {
    fn table(&self) -> &TruthTable {
        self
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    #[default]
    Spectral,
    Statevector,
}

/// Outcome law of the first register.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimonDistribution {
    m: usize,
    probs: Vec<f64>,
}

impl SimonDistribution {
    pub fn width(&self) -> usize {
        self.m
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, j: u32) -> f64 {
        self.probs[j as usize]
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Outcomes with probability above `eps`.
    pub fn support(&self, eps: f64) -> Vec<u32> {
        (0..self.probs.len() as u32)
            .filter(|&j| self.probs[j as usize] > eps)
            .collect()
    }

    pub fn max_abs_diff(&self, other: &SimonDistribution) -> f64 {
        assert_eq!(self.m, other.m, "distributions over different widths");
        self.probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn total_variation(&self, other: &SimonDistribution) -> f64 {
        assert_eq!(self.m, other.m, "distributions over different widths");
        0.5 * self
            .probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
    }

    /// JSON array of probabilities indexed by outcome; only for `m <= 7`.
    pub fn to_json(&self) -> Result<serde_json::Value> {
        if self.m > MAX_DUMP_WIDTH {
            return Err(Error::WidthOutOfRange {
                width: self.m,
                min: 1,
                max: MAX_DUMP_WIDTH,
            });
        }
        Ok(serde_json::json!(self.probs))
    }
}

fn check_cap(width: usize, max: usize) -> Result<()> {
    if width > max {
        Err(Error::WidthOutOfRange {
            width,
            min: 1,
            max,
        })
    } else {
        Ok(())
    }
}

/// Inputs grouped by output value, ordered by output value.
fn preimage_classes(f: &TruthTable) -> Vec<Vec<u32>> {
    let mut by_value: Vec<(u32, u32)> = f
        .entries()
        .iter()
        .enumerate()
        .map(|(u, &y)| (y, u as u32))
        .collect();
    by_value.sort_unstable();
    let mut classes: Vec<Vec<u32>> = Vec::new();
    let mut last = None;
    for (y, u) in by_value {
        if last != Some(y) {
            classes.push(Vec::new());
            last = Some(y);
        }
        classes.last_mut().unwrap().push(u);
    }
    classes
}

/// Squared character sums of one class: `χ(j)² = (Σ_{u∈class} (-1)^{u·j})²`.
fn class_spectrum(class: &[u32], m: usize) -> Vec<u64> {
    let mut v = vec![0i64; 1 << m];
    for &u in class {
        v[u as usize] = 1;
    }
    walsh_hadamard_in_place(&mut v).expect("power-of-two length");
    v.into_iter().map(|x| (x * x) as u64).collect()
}

/// Exact outcome distribution from preimage-class character sums.
///
/// Small classes contribute through their collision autocorrelation
/// `C[d] = #{(u, v) in class² : u ⊕ v = d}` (whose transform is `χ²`), large
/// ones through their own transform, so the cost stays near `m·2^m` for both
/// injective and highly colliding functions. All sums are integers; the only
/// division is the final normalization by `2^{2m}`.
pub fn spectral_distribution(f: &TruthTable) -> Result<SimonDistribution> {
    let m = f.in_width();
    check_cap(m, MAX_SPECTRAL_WIDTH)?;
    let size = 1usize << m;
    let mut autocorr = vec![0i64; size];
    let mut direct = vec![0u64; size];
    for class in preimage_classes(f) {
        let c = class.len();
        if c * c <= m.max(1) * size {
            for &u in &class {
                for &v in &class {
                    autocorr[(u ^ v) as usize] += 1;
                }
            }
        } else {
            for (acc, s) in direct.iter_mut().zip(class_spectrum(&class, m)) {
                *acc += s;
            }
        }
    }
    walsh_hadamard_in_place(&mut autocorr)?;
    let norm = (size as f64) * (size as f64);
    let probs = autocorr
        .iter()
        .zip(&direct)
        .map(|(&a, &d)| {
            debug_assert!(a >= 0);
            (a as u64 + d) as f64 / norm
        })
        .collect();
    Ok(SimonDistribution { m, probs })
}

/// Intermediate readouts of the statevector simulation.
#[derive(Clone, Debug)]
pub struct StatevectorProbe {
    /// Second-register marginal right after `U_f`: `|f⁻¹(y)| / 2^m`.
    pub output_marginal: Vec<f64>,
    pub outcome: SimonDistribution,
}

fn apply_hadamard(state: &mut [Complex64], qubit: usize) {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let stride = 1usize << qubit;
    for block in state.chunks_exact_mut(2 * stride) {
        let (lo, hi) = block.split_at_mut(stride);
        for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
            let (x, y) = (*a, *b);
            *a = (x + y) * h;
            *b = (x - y) * h;
        }
    }
}

/// Full simulation on `m + r` qubits: basis index is `x << r | y`.
pub fn statevector_probe(f: &TruthTable) -> Result<StatevectorProbe> {
    let (m, r) = (f.in_width(), f.out_width());
    check_cap(m + r, MAX_STATEVECTOR_QUBITS)?;
    let mut state = vec![Complex64::new(0.0, 0.0); 1 << (m + r)];
    state[0] = Complex64::new(1.0, 0.0);
    for q in r..r + m {
        apply_hadamard(&mut state, q);
    }

    // U_f |x>|y> = |x>|y ⊕ f(x)>
    let mut after = vec![Complex64::new(0.0, 0.0); state.len()];
    for (idx, amp) in state.iter().enumerate() {
        let x = (idx >> r) as u32;
        let y = idx as u32 & mask(r);
        after[((x as usize) << r) | (y ^ f.value(x)) as usize] = *amp;
    }
    let mut output_marginal = vec![0.0; 1 << r];
    for (idx, amp) in after.iter().enumerate() {
        output_marginal[idx & ((1 << r) - 1)] += amp.norm_sqr();
    }

    let mut state = after;
    for q in r..r + m {
        apply_hadamard(&mut state, q);
    }
    let mut probs = vec![0.0; 1 << m];
    for (idx, amp) in state.iter().enumerate() {
        probs[idx >> r] += amp.norm_sqr();
    }
    Ok(StatevectorProbe {
        output_marginal,
        outcome: SimonDistribution { m, probs },
    })
}

pub fn statevector_distribution(f: &TruthTable) -> Result<SimonDistribution> {
    Ok(statevector_probe(f)?.outcome)
}

pub fn distribution(f: &TruthTable, method: Method) -> Result<SimonDistribution> {
    match method {
        Method::Spectral => spectral_distribution(f),
        Method::Statevector => statevector_distribution(f),
    }
}

/// Two-stage sampler over one function table.
pub struct SimonSampler<'a> {
    f: &'a TruthTable,
    classes: HashMap<u32, Vec<u32>>,
    /// Cumulative `χ²` for large classes, built on first use.
    cumulative: HashMap<u32, Vec<u64>>,
}

impl<'a> SimonSampler<'a> {
    pub fn new(f: &'a TruthTable) -> Result<Self> {
        check_cap(f.in_width(), MAX_SAMPLING_WIDTH)?;
        let mut classes: HashMap<u32, Vec<u32>> = HashMap::new();
        for (u, &y) in f.entries().iter().enumerate() {
            classes.entry(y).or_default().push(u as u32);
        }
        Ok(Self {
            f,
            classes,
            cumulative: HashMap::new(),
        })
    }

    pub fn sample(&mut self, rng: &mut impl Rng) -> BitString {
        let m = self.f.in_width();
        let u = rng.gen_range(0..1u32 << m);
        let y = self.f.value(u);
        let class = &self.classes[&y];
        let c = class.len();
        let j = if c <= SMALL_CLASS {
            // Uniform proposal accepted with probability χ(j)²/c².
            loop {
                let j = rng.gen_range(0..1u32 << m);
                let chi: i64 = class
                    .iter()
                    .map(|&v| if parity(v & j) { -1 } else { 1 })
                    .sum();
                if rng.gen_range(0..(c * c) as u64) < (chi * chi) as u64 {
                    break j;
                }
            }
        } else {
            let cum = self.cumulative.entry(y).or_insert_with(|| {
                let mut acc = 0u64;
                class_spectrum(class, m)
                    .into_iter()
                    .map(|w| {
                        acc += w;
                        acc
                    })
                    .collect()
            });
            let total = *cum.last().unwrap();
            let pick = rng.gen_range(0..total);
            cum.partition_point(|&w| w <= pick) as u32
        };
        BitString::from_raw(m, j)
    }
}

pub fn simon_sample(f: &TruthTable, rng: &mut impl Rng) -> Result<BitString> {
    Ok(SimonSampler::new(f)?.sample(rng))
}

/// A coordinate of the hidden shift that the caller already knows.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KnownBit {
    pub position: usize,
    pub value: bool,
}

impl KnownBit {
    /// The flag bit of `b ‖ a`: the highest coordinate, set to one.
    pub fn top_flag(width: usize) -> Self {
        Self {
            position: width - 1,
            value: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SimonOutcome {
    Solved(BitString),
    RankDeficient,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimonRunStats {
    pub samples_drawn: usize,
    pub basis_rank_achieved: usize,
    pub outcome: SimonOutcome,
}

fn drop_bit(x: u32, pos: usize) -> u32 {
    ((x >> (pos + 1)) << pos) | (x & ((1u32 << pos) - 1))
}

fn insert_bit(x: u32, pos: usize, bit: bool) -> u32 {
    let low = x & ((1u32 << pos) - 1);
    let high = x >> pos;
    (high << (pos + 1)) | ((bit as u32) << pos) | low
}

enum OutcomeSource<'a> {
    Spectral(SimonSampler<'a>),
    Statevector(WeightedIndex<f64>),
}

impl OutcomeSource<'_> {
    fn sample(&mut self, m: usize, rng: &mut impl Rng) -> BitString {
        match self {
            OutcomeSource::Spectral(s) => s.sample(rng),
            OutcomeSource::Statevector(w) => BitString::from_raw(m, w.sample(rng) as u32),
        }
    }
}

/// Samples outcomes `j` until the equations `j·s = 0`, with the known
/// coordinate substituted, pin down the remaining `m - 1` coordinates of `s`,
/// or until `cap` samples have been drawn.
///
/// Only samples that extend the current basis are kept; dependent ones are
/// dropped.
pub fn simon_solve_affine<O: SubroutineOracle + ?Sized>(
    f: &O,
    known: KnownBit,
    cap: usize,
    method: Method,
    rng: &mut impl Rng,
) -> Result<SimonRunStats> {
    let table = f.table();
    let m = table.in_width();
    if m < 2 || known.position >= m {
        return Err(Error::DimensionMismatch(format!(
            "known coordinate {} of a {m}-bit shift",
            known.position
        )));
    }
    let mut source = match method {
        Method::Spectral => OutcomeSource::Spectral(SimonSampler::new(table)?),
        Method::Statevector => {
            let dist = statevector_distribution(table)?;
            OutcomeSource::Statevector(
                WeightedIndex::new(dist.probs()).map_err(|e| Error::Format(e.to_string()))?,
            )
        }
    };

    let mut basis = Gf2Basis::new(m - 1)?;
    let mut rhs = Vec::with_capacity(m - 1);
    let mut samples = 0;
    while samples < cap && !basis.is_full() {
        let j = source.sample(m, rng);
        f.record_run();
        samples += 1;
        let j_known = j.bit(known.position);
        let rest = BitString::from_raw(m - 1, drop_bit(j.bits(), known.position));
        if basis.add_if_independent(rest)? {
            rhs.push(j_known && known.value);
        }
    }

    let outcome = if basis.is_full() {
        match solve_affine(basis.matrix(), &rhs)? {
            SolveOutcome::Solved(rest) => SimonOutcome::Solved(BitString::from_raw(
                m,
                insert_bit(rest.bits(), known.position, known.value),
            )),
            SolveOutcome::Inconsistent | SolveOutcome::Underdetermined => {
                return Err(Error::InconsistentSystem)
            }
        }
    } else {
        SimonOutcome::RankDeficient
    };
    Ok(SimonRunStats {
        samples_drawn: samples,
        basis_rank_achieved: basis.rank(),
        outcome,
    })
}
