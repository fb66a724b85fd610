//! Query-counted oracle handles and the derived Simon functions built from
//! them.
//!
//! Attack code receives an [`OracleHandle`] and can only query it or build
//! derived oracles; the hidden kind is released by
//! [`OracleHandle::into_ground_truth`], which consumes the handle.
//!
//! Accounting: a derived-oracle build appends one quantum record describing
//! its superposition support. Each Simon subroutine run on that derived
//! oracle bumps the record's run counter; the record also knows how many
//! invocations of the underlying oracle one run costs (2 for `f` built from
//! `V`, 1 for `g_j` built from the MAC). Materializing the table itself is a
//! simulation artifact and is not charged.

use std::sync::{Arc, Mutex, MutexGuard};

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::gf2::{mask, BitString};
use crate::primitives::{random_function, random_permutation, CbcSpec, FeistelSpec, TruthTable};
use crate::simon::SubroutineOracle;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TemplateBlock {
    Fixed(BitString),
    Wildcard,
}

/// Support of one superposition query: fixed blocks plus wildcard positions
/// that range over every value.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MessageTemplate {
    blocks: Vec<TemplateBlock>,
}

impl MessageTemplate {
    pub fn new(blocks: Vec<TemplateBlock>) -> Self {
        Self { blocks }
    }

    pub fn blocks(&self) -> &[TemplateBlock] {
        &self.blocks
    }

    pub fn covers(&self, message: &[BitString]) -> Result<bool> {
        template_covers(self, message)
    }

    pub fn has_zero_block(&self) -> bool {
        self.blocks
            .iter()
            .any(|b| matches!(b, TemplateBlock::Fixed(x) if x.is_zero()))
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.blocks
            .iter()
            .map(|b| match b {
                TemplateBlock::Fixed(x) => x.to_hex(),
                TemplateBlock::Wildcard => "*".to_string(),
            })
            .collect()
    }
}

pub fn template_covers(template: &MessageTemplate, message: &[BitString]) -> Result<bool> {
    if template.blocks.len() != message.len() {
        return Err(Error::DimensionMismatch(format!(
            "template has {} blocks, message has {}",
            template.blocks.len(),
            message.len()
        )));
    }
    let mut covered = true;
    for (t, m) in template.blocks.iter().zip(message) {
        if let TemplateBlock::Fixed(x) = t {
            if x.width() != m.width() {
                return Err(Error::WidthMismatch {
                    expected: x.width(),
                    actual: m.width(),
                });
            }
            covered &= x == m;
        }
    }
    Ok(covered)
}

/// One derived-oracle build and the subroutine runs made against it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuantumRecord {
    pub support: Vec<MessageTemplate>,
    pub oracle_calls_per_run: u32,
    pub runs: u64,
}

/// Append-only record of everything an attacker asked an oracle.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryLedger {
    classical: Vec<Vec<BitString>>,
    quantum: Vec<QuantumRecord>,
}

impl QueryLedger {
    pub fn classical_points(&self) -> &[Vec<BitString>] {
        &self.classical
    }

    pub fn quantum_records(&self) -> &[QuantumRecord] {
        &self.quantum
    }

    pub fn classical_count(&self) -> usize {
        self.classical.len()
    }

    pub fn quantum_record_count(&self) -> usize {
        self.quantum.len()
    }

    /// Total Simon subroutine runs across all derived oracles.
    pub fn subroutine_runs(&self) -> u64 {
        self.quantum.iter().map(|r| r.runs).sum()
    }

    /// Invocations of the underlying oracle's unitary.
    pub fn quantum_oracle_calls(&self) -> u64 {
        self.quantum
            .iter()
            .map(|r| r.runs * r.oracle_calls_per_run as u64)
            .sum()
    }

    pub fn templates(&self) -> impl Iterator<Item = &MessageTemplate> {
        self.quantum.iter().flat_map(|r| r.support.iter())
    }

    /// `{"classical": [hex points], "quantum": [[block hex or "*", ...], ...]}`.
    /// A classical point is the hex form of its blocks concatenated.
    pub fn to_json(&self) -> serde_json::Value {
        let classical: Vec<String> = self.classical.iter().map(|p| blocks_to_hex(p)).collect();
        let quantum: Vec<Vec<String>> = self.templates().map(|t| t.to_strings()).collect();
        json!({ "classical": classical, "quantum": quantum })
    }
}

/// Hex of `b_1 ‖ b_2 ‖ ...`, most significant nibble first, padded to
/// `ceil(total_width / 4)` digits.
pub fn blocks_to_hex(blocks: &[BitString]) -> String {
    let mut bits: Vec<bool> = Vec::new();
    for b in blocks {
        bits.extend((0..b.width()).rev().map(|i| b.bit(i)));
    }
    let pad = (4 - bits.len() % 4) % 4;
    let padded: Vec<bool> = std::iter::repeat_n(false, pad).chain(bits).collect();
    padded
        .chunks(4)
        .map(|c| {
            let nibble = c.iter().fold(0u32, |acc, &b| (acc << 1) | b as u32);
            char::from_digit(nibble, 16).unwrap()
        })
        .collect()
}

/// Ground truth behind a handle. Only available once the handle is given up.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OracleKind {
    Feistel,
    RandomPermutation,
    CbcMac,
    RandomFunction,
}

#[derive(Clone, Debug)]
enum Backing {
    Feistel(FeistelSpec),
    Permutation { half: usize, table: TruthTable },
    Cbc(CbcSpec),
    /// Uniform function from `ell` blocks of `n` bits to `n` bits.
    MacShaped { n: usize, ell: usize, table: TruthTable },
}

#[derive(Debug)]
pub struct GroundTruth {
    pub kind: OracleKind,
    pub ledger: QueryLedger,
}

#[derive(Debug)]
pub struct OracleHandle {
    backing: Backing,
    kind: OracleKind,
    ledger: Arc<Mutex<QueryLedger>>,
}

pub fn make_feistel_oracle(spec: FeistelSpec) -> OracleHandle {
    OracleHandle::new(Backing::Feistel(spec), OracleKind::Feistel)
}

/// Random permutation of `2n`-bit strings.
pub fn make_perm_oracle(n: usize, seed: u64) -> Result<OracleHandle> {
    let table = random_permutation(2 * n, seed)?;
    Ok(OracleHandle::new(
        Backing::Permutation { half: n, table },
        OracleKind::RandomPermutation,
    ))
}

pub fn make_cbc_oracle(spec: CbcSpec) -> OracleHandle {
    OracleHandle::new(Backing::Cbc(spec), OracleKind::CbcMac)
}

/// Uniform random function with the same shape as `CBC^ell` over `n`-bit
/// blocks.
pub fn make_random_mac_oracle(n: usize, ell: usize, seed: u64) -> Result<OracleHandle> {
    if ell == 0 {
        return Err(Error::DimensionMismatch("need at least one block".into()));
    }
    make_mac_shaped_oracle(n, ell, random_function(n * ell, n, seed)?)
}

/// Wraps an arbitrary table from `ell * n` bits (first block most
/// significant) to `n` bits as a MAC-shaped oracle.
pub fn make_mac_shaped_oracle(n: usize, ell: usize, table: TruthTable) -> Result<OracleHandle> {
    if ell == 0 || table.in_width() != n * ell || table.out_width() != n {
        return Err(Error::DimensionMismatch(format!(
            "table {}->{} bits is not {ell} blocks of {n} bits to {n} bits",
            table.in_width(),
            table.out_width()
        )));
    }
    Ok(OracleHandle::new(
        Backing::MacShaped { n, ell, table },
        OracleKind::RandomFunction,
    ))
}

impl OracleHandle {
    fn new(backing: Backing, kind: OracleKind) -> Self {
        Self {
            backing,
            kind,
            ledger: Arc::new(Mutex::new(QueryLedger::default())),
        }
    }

    /// Width of one input block.
    pub fn block_width(&self) -> usize {
        match &self.backing {
            Backing::Feistel(spec) => 2 * spec.half_width(),
            Backing::Permutation { half, .. } => 2 * half,
            Backing::Cbc(spec) => spec.block_width(),
            Backing::MacShaped { n, .. } => *n,
        }
    }

    /// Number of blocks per query.
    pub fn block_count(&self) -> usize {
        match &self.backing {
            Backing::Feistel(_) | Backing::Permutation { .. } => 1,
            Backing::Cbc(spec) => spec.block_count(),
            Backing::MacShaped { ell, .. } => *ell,
        }
    }

    pub fn output_width(&self) -> usize {
        self.block_width()
    }

    fn is_block_permutation_shape(&self) -> bool {
        matches!(
            self.backing,
            Backing::Feistel(_) | Backing::Permutation { .. }
        )
    }

    /// Classical query; recorded in the ledger.
    pub fn query(&self, point: &[BitString]) -> Result<BitString> {
        self.check_shape(point)?;
        let raw: Vec<u32> = point.iter().map(|b| b.bits()).collect();
        let out = self.eval_unrecorded(&raw);
        self.lock().classical.push(point.to_vec());
        Ok(BitString::from_raw(self.output_width(), out))
    }

    pub fn query_point(&self, x: BitString) -> Result<BitString> {
        self.query(std::slice::from_ref(&x))
    }

    pub fn ledger(&self) -> QueryLedger {
        self.lock().clone()
    }

    pub fn into_ground_truth(self) -> GroundTruth {
        let ledger = self.lock().clone();
        GroundTruth {
            kind: self.kind,
            ledger,
        }
    }

    /// Evaluation with scorer privilege: bypasses the ledger.
    pub(crate) fn true_value(&self, point: &[BitString]) -> Result<BitString> {
        self.check_shape(point)?;
        let raw: Vec<u32> = point.iter().map(|b| b.bits()).collect();
        Ok(BitString::from_raw(
            self.output_width(),
            self.eval_unrecorded(&raw),
        ))
    }

    fn check_shape(&self, point: &[BitString]) -> Result<()> {
        if point.len() != self.block_count() {
            return Err(Error::DimensionMismatch(format!(
                "oracle takes {} blocks, got {}",
                self.block_count(),
                point.len()
            )));
        }
        if let Some(bad) = point.iter().find(|b| b.width() != self.block_width()) {
            return Err(Error::WidthMismatch {
                expected: self.block_width(),
                actual: bad.width(),
            });
        }
        Ok(())
    }

    fn eval_unrecorded(&self, blocks: &[u32]) -> u32 {
        match &self.backing {
            Backing::Feistel(spec) => spec.eval_raw(blocks[0]),
            Backing::Permutation { table, .. } => table.value(blocks[0]),
            Backing::Cbc(spec) => spec.mac_raw(blocks.iter().copied()),
            Backing::MacShaped { n, table, .. } => {
                let idx = blocks.iter().fold(0u32, |acc, &b| (acc << n) | b);
                table.value(idx)
            }
        }
    }

    fn lock(&self) -> MutexGuard<'_, QueryLedger> {
        self.ledger.lock().unwrap_or_else(|e| e.into_inner())
    }

    fn open_quantum_record(&self, support: Vec<MessageTemplate>, calls: u32) -> usize {
        let mut ledger = self.lock();
        ledger.quantum.push(QuantumRecord {
            support,
            oracle_calls_per_run: calls,
            runs: 0,
        });
        ledger.quantum.len() - 1
    }
}

/// A materialized Simon function tied to the ledger of the oracle it was
/// derived from.
#[derive(Debug)]
pub struct DerivedOracle {
    table: TruthTable,
    support: Vec<MessageTemplate>,
    ledger: Arc<Mutex<QueryLedger>>,
    record: usize,
}

impl DerivedOracle {
    pub fn table(&self) -> &TruthTable {
        &self.table
    }

    pub fn templates(&self) -> &[MessageTemplate] {
        &self.support
    }

    pub fn runs(&self) -> u64 {
        let ledger = self.ledger.lock().unwrap_or_else(|e| e.into_inner());
        ledger.quantum[self.record].runs
    }
}

impl SubroutineOracle for DerivedOracle {
    fn table(&self) -> &TruthTable {
        &self.table
    }

    fn record_run(&self) {
        let mut ledger = self.ledger.lock().unwrap_or_else(|e| e.into_inner());
        ledger.quantum[self.record].runs += 1;
    }
}

/// `f(b‖a) = W(a‖α) ⊕ α` for `b = 0` and `W(a‖β) ⊕ β` for `b = 1`, where `W`
/// is the high half of `V`.
pub fn build_simon_f(v: &OracleHandle, alpha: BitString, beta: BitString) -> Result<DerivedOracle> {
    if !v.is_block_permutation_shape() {
        return Err(Error::WrongOracleShape(
            "build_simon_f needs a 2n-bit block oracle".into(),
        ));
    }
    let n = v.block_width() / 2;
    for x in [alpha, beta] {
        if x.width() != n {
            return Err(Error::WidthMismatch {
                expected: n,
                actual: x.width(),
            });
        }
    }
    if alpha == beta {
        return Err(Error::EqualBasePoints);
    }
    let (a_bits, b_bits) = (alpha.bits(), beta.bits());
    let table = TruthTable::from_fn(n + 1, n, |u| {
        let c = if u >> n == 0 { a_bits } else { b_bits };
        let a = u & mask(n);
        (v.eval_unrecorded(&[(a << n) | c]) >> n) ^ c
    })?;
    let support = vec![
        MessageTemplate::new(vec![TemplateBlock::Wildcard, TemplateBlock::Fixed(alpha)]),
        MessageTemplate::new(vec![TemplateBlock::Wildcard, TemplateBlock::Fixed(beta)]),
    ];
    let record = v.open_quantum_record(support.clone(), 2);
    Ok(DerivedOracle {
        table,
        support,
        ledger: Arc::clone(&v.ledger),
        record,
    })
}

/// `g_j(b‖x) = MAC(prefix_b ‖ 0^{j-1} ‖ x ‖ 0^{ell-k-j})`, with `prefix_0 =
/// prefix_a` and `prefix_1 = prefix_b`. Requires `k <= ell - 2` so every
/// superposition query carries a zero block.
pub fn build_simon_g(
    cbc: &OracleHandle,
    j: usize,
    prefix_a: &[BitString],
    prefix_b: &[BitString],
) -> Result<DerivedOracle> {
    let ell = cbc.block_count();
    let k = prefix_a.len();
    if k == 0 || k + 2 > ell {
        return Err(Error::UnsupportedPrefix { k, ell });
    }
    build_prefix_g(cbc, j, prefix_a, prefix_b)
}

/// Same as [`build_simon_g`] but only requires `k <= ell - 1`; used by the
/// two-block distinguisher, whose queries carry no zero block.
pub(crate) fn build_prefix_g(
    cbc: &OracleHandle,
    j: usize,
    prefix_a: &[BitString],
    prefix_b: &[BitString],
) -> Result<DerivedOracle> {
    if cbc.is_block_permutation_shape() {
        return Err(Error::WrongOracleShape(
            "build_simon_g needs a MAC-shaped oracle".into(),
        ));
    }
    let (n, ell, k) = (cbc.block_width(), cbc.block_count(), prefix_a.len());
    if prefix_b.len() != k {
        return Err(Error::DimensionMismatch(format!(
            "prefixes have {} and {} blocks",
            k,
            prefix_b.len()
        )));
    }
    if k == 0 || k >= ell {
        return Err(Error::UnsupportedPrefix { k, ell });
    }
    if j == 0 || j > ell - k {
        return Err(Error::RoundOutOfRange { j, max: ell - k });
    }
    if let Some(bad) = prefix_a.iter().chain(prefix_b).find(|b| b.width() != n) {
        return Err(Error::WidthMismatch {
            expected: n,
            actual: bad.width(),
        });
    }
    if prefix_a == prefix_b {
        return Err(Error::EqualBasePoints);
    }

    let wildcard_at = k + j - 1;
    let make_template = |prefix: &[BitString]| {
        let mut blocks: Vec<TemplateBlock> =
            prefix.iter().map(|b| TemplateBlock::Fixed(*b)).collect();
        let zero = BitString::from_raw(n, 0);
        blocks.extend((k..ell).map(|pos| {
            if pos == wildcard_at {
                TemplateBlock::Wildcard
            } else {
                TemplateBlock::Fixed(zero)
            }
        }));
        MessageTemplate::new(blocks)
    };
    let support = vec![make_template(prefix_a), make_template(prefix_b)];

    let raw_a: Vec<u32> = prefix_a.iter().map(|b| b.bits()).collect();
    let raw_b: Vec<u32> = prefix_b.iter().map(|b| b.bits()).collect();
    let mut buf = vec![0u32; ell];
    let mut entries = Vec::with_capacity(1 << (n + 1));
    for u in 0..1u32 << (n + 1) {
        let prefix = if u >> n == 0 { &raw_a } else { &raw_b };
        buf[..k].copy_from_slice(prefix);
        buf[k..].fill(0);
        buf[wildcard_at] = u & mask(n);
        entries.push(cbc.eval_unrecorded(&buf));
    }
    let table = TruthTable::from_entries(n + 1, n, entries)?;
    let record = cbc.open_quantum_record(support.clone(), 1);
    Ok(DerivedOracle {
        table,
        support,
        ledger: Arc::clone(&cbc.ledger),
        record,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primitives::{feistel_eval, random_permutation};
    use crate::rng::rng_from_seed;
    use rand::Rng;

    fn b(s: &str) -> BitString {
        BitString::parse(s).unwrap()
    }

    fn toy_feistel() -> FeistelSpec {
        // n = 2, P1(00) = 11, P1(01) = 01, P2 = identity, P3 = 0.
        let p1 = TruthTable::from_entries(2, 2, vec![0b11, 0b01, 0, 0]).unwrap();
        FeistelSpec::new(
            p1,
            TruthTable::identity(2).unwrap(),
            TruthTable::constant(2, 2, 0).unwrap(),
        )
        .unwrap()
    }

    /// Smallest nonzero `s` with `f(u) = f(u ^ s)` for every `u`, if any.
    fn forward_periods(t: &TruthTable) -> Vec<u32> {
        (1..t.len() as u32)
            .filter(|&s| (0..t.len() as u32).all(|u| t.value(u) == t.value(u ^ s)))
            .collect()
    }

    #[test]
    fn feistel_oracle_is_transparent_and_counted() {
        let spec = FeistelSpec::random(5, 3).unwrap();
        let v = make_feistel_oracle(spec.clone());
        let mut rng = rng_from_seed(1);
        for i in 0..100 {
            let x = BitString::new(10, rng.gen::<u32>() & 0x3ff).unwrap();
            assert_eq!(v.query_point(x).unwrap(), feistel_eval(&spec, x).unwrap());
            assert_eq!(v.ledger().classical_count(), i + 1);
        }
        assert_eq!(v.into_ground_truth().kind, OracleKind::Feistel);
    }

    #[test]
    fn perm_oracle_is_bijective() {
        let v = make_perm_oracle(3, 9).unwrap();
        let mut seen = std::collections::HashSet::new();
        for x in 0..64 {
            seen.insert(v.query_point(BitString::new(6, x).unwrap()).unwrap());
        }
        assert_eq!(seen.len(), 64);
        assert!(v.query_point(b("101")).is_err());
    }

    #[test]
    fn simon_f_of_zero_feistel_is_constant() {
        let v = make_feistel_oracle(FeistelSpec::all_zero(3).unwrap());
        let f = build_simon_f(&v, b("001"), b("110")).unwrap();
        assert!(f.table().entries().iter().all(|&e| e == 0));
        assert!(matches!(
            build_simon_f(&v, b("001"), b("001")),
            Err(Error::EqualBasePoints)
        ));
    }

    #[test]
    fn simon_f_toy_example() {
        let v = make_feistel_oracle(toy_feistel());
        let f = build_simon_f(&v, b("00"), b("01")).unwrap();
        let t = f.table();
        for a in 0..4u32 {
            assert_eq!(t.value(a), a ^ 0b11);
            assert_eq!(t.value(0b100 | a), a ^ 0b01);
        }
        for u in 0..8u32 {
            assert_eq!(t.value(u), t.value(u ^ 0b110));
        }
        let ledger = v.ledger();
        assert_eq!(ledger.quantum_record_count(), 1);
        assert_eq!(ledger.classical_count(), 0);
        assert_eq!(ledger.quantum_records()[0].oracle_calls_per_run, 2);
    }

    #[test]
    fn simon_f_feistel_period_exhaustive() {
        for n in 1..=6 {
            for seed in 0..4 {
                let spec = FeistelSpec::random(n, seed).unwrap();
                let v = make_feistel_oracle(spec.clone());
                let (alpha, beta) = (0u32, (seed as u32 % ((1 << n) - 1)) + 1);
                let f = build_simon_f(
                    &v,
                    BitString::new(n, alpha).unwrap(),
                    BitString::new(n, beta).unwrap(),
                )
                .unwrap();
                let s = (1 << n) | (spec.p1().value(alpha) ^ spec.p1().value(beta));
                let t = f.table();
                for u in 0..t.len() as u32 {
                    assert_eq!(t.value(u), t.value(u ^ s));
                }
            }
        }
    }

    #[test]
    fn simon_f_of_random_permutation_rarely_periodic() {
        let mut degenerate = 0;
        for seed in 0..100 {
            let v = make_perm_oracle(4, seed).unwrap();
            let f = build_simon_f(&v, b("0000"), b("0001")).unwrap();
            if !forward_periods(f.table()).is_empty() {
                degenerate += 1;
            }
        }
        assert!(degenerate <= 2, "{degenerate} degenerate seeds");
    }

    #[test]
    fn simon_g_identity_and_plus_one() {
        let cbc = make_cbc_oracle(CbcSpec::new(TruthTable::identity(3).unwrap(), 4).unwrap());
        let (a0, a1) = (b("011"), b("101"));
        for j in 1..=3 {
            let g = build_simon_g(&cbc, j, &[a0], &[a1]).unwrap();
            for x in 0..8u32 {
                assert_eq!(g.table().value(x), a0.bits() ^ x);
                assert_eq!(g.table().value(8 | x), a1.bits() ^ x);
            }
            assert!(g.templates().iter().all(|t| t.has_zero_block()));
        }
        assert!(matches!(
            build_simon_g(&cbc, 4, &[a0], &[a1]),
            Err(Error::RoundOutOfRange { .. })
        ));
        assert!(matches!(
            build_simon_g(&cbc, 1, &[a0, a0, a0], &[a1, a1, a1]),
            Err(Error::UnsupportedPrefix { k: 3, ell: 4 })
        ));

        let pi = TruthTable::permutation_from_entries(2, vec![1, 2, 3, 0]).unwrap();
        let cbc = make_cbc_oracle(CbcSpec::new(pi, 3).unwrap());
        let g = build_simon_g(&cbc, 1, &[b("00")], &[b("10")]).unwrap();
        assert_eq!(g.table().value(0), 0b11);
    }

    #[test]
    fn simon_g_has_exact_promise() {
        for n in 1..=6 {
            for ell in 3..=5 {
                for k in 1..=ell - 2 {
                    let pi = random_permutation(n, (n * 31 + ell * 7 + k) as u64).unwrap();
                    let cbc = make_cbc_oracle(CbcSpec::new(pi.clone(), ell).unwrap());
                    let pa: Vec<BitString> = (0..k).map(|_| BitString::new(n, 0).unwrap()).collect();
                    let mut pb = pa.clone();
                    pb[0] = BitString::new(n, 1).unwrap();
                    // chained prefix value before the last application of pi
                    let bar = |p: &[BitString]| {
                        p[1..]
                            .iter()
                            .fold(p[0].bits(), |state, blk| pi.value(state) ^ blk.bits())
                    };
                    let (abar, bbar) = (bar(&pa), bar(&pb));
                    for j in 1..=ell - k {
                        let g = build_simon_g(&cbc, j, &pa, &pb).unwrap();
                        let pow = |mut x: u32| {
                            for _ in 0..j {
                                x = pi.value(x);
                            }
                            x
                        };
                        let s = (1u32 << n) | (pow(abar) ^ pow(bbar));
                        let t = g.table();
                        for u in 0..t.len() as u32 {
                            for v in 0..t.len() as u32 {
                                let collide = t.value(u) == t.value(v);
                                assert_eq!(collide, u == v || u ^ v == s);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn template_cover_examples() {
        let n = 3;
        let z = BitString::new(n, 0).unwrap();
        let alpha = b("101");
        let all = MessageTemplate::new(vec![TemplateBlock::Wildcard; 3]);
        assert!(all.covers(&[alpha, alpha, alpha]).unwrap());
        let t = MessageTemplate::new(vec![
            TemplateBlock::Fixed(alpha),
            TemplateBlock::Wildcard,
            TemplateBlock::Fixed(z),
        ]);
        assert!(!t.covers(&[alpha, b("111"), b("010")]).unwrap());
        assert!(t.covers(&[alpha, b("111"), z]).unwrap());
        assert!(t.covers(&[alpha, z]).is_err());
        assert!(t.covers(&[alpha, b("1111"), z]).is_ok());
        assert!(t.covers(&[alpha, z, b("0000")]).is_err());
        assert_eq!(t.to_strings(), vec!["5", "*", "0"]);
    }

    #[test]
    fn ledger_json_schema() {
        let pi = TruthTable::identity(4).unwrap();
        let cbc = make_cbc_oracle(CbcSpec::new(pi, 3).unwrap());
        cbc.query(&[b("1010"), b("0000"), b("0000")]).unwrap();
        let g = build_simon_g(&cbc, 2, &[b("0001")], &[b("1000")]).unwrap();
        g.record_run();
        g.record_run();
        let ledger = cbc.ledger();
        assert_eq!(ledger.subroutine_runs(), 2);
        assert_eq!(ledger.quantum_oracle_calls(), 2);
        let j = ledger.to_json();
        assert_eq!(j["classical"][0], "a00");
        assert_eq!(j["quantum"][0], json!(["1", "0", "*"]));
        assert_eq!(j["quantum"][1], json!(["8", "0", "*"]));
        assert_eq!(blocks_to_hex(&[b("1"), b("0000")]), "10");
    }
}
