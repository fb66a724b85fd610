//! End-to-end attacks: the 3-round Feistel distinguisher, the chosen-prefix
//! CBC-MAC forgery, the two-block CBC distinguisher and the classical
//! collision-search baseline.

use std::collections::HashMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{mask, BitString};
use crate::oracles::{build_prefix_g, build_simon_f, build_simon_g, MessageTemplate, OracleHandle};
use crate::primitives::TruthTable;
use crate::simon::{simon_solve_affine, KnownBit, Method, SimonOutcome, SimonRunStats};

/// Attempts allowed when searching for an attacker prefix whose chained
/// value differs from the target's.
pub const PREFIX_SETUP_ATTEMPTS: usize = 32;

/// `Feistel` is the structured side: for the two-block CBC distinguisher it
/// means "looks like CBC-MAC".
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Guess {
    Feistel,
    RandomPermutation,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VerdictReason {
    RankDeficient,
    CollisionCheckPassed,
    CollisionCheckFailed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub guess: Guess,
    pub reason: VerdictReason,
    pub stats: SimonRunStats,
}

impl Verdict {
    fn from_check(stats: SimonRunStats, passed: Option<bool>) -> Self {
        let (guess, reason) = match passed {
            None => (Guess::Feistel, VerdictReason::RankDeficient),
            Some(true) => (Guess::Feistel, VerdictReason::CollisionCheckPassed),
            Some(false) => (Guess::RandomPermutation, VerdictReason::CollisionCheckFailed),
        };
        Self {
            guess,
            reason,
            stats,
        }
    }
}

fn random_block(n: usize, rng: &mut impl Rng) -> BitString {
    BitString::from_raw(n, rng.gen::<u32>() & mask(n))
}

fn random_pair(n: usize, rng: &mut impl Rng) -> (BitString, BitString) {
    let a = random_block(n, rng);
    loop {
        let b = random_block(n, rng);
        if b != a {
            return (a, b);
        }
    }
}

/// Distinguishes a 3-round Feistel network from a random permutation of
/// `2n`-bit strings.
///
/// Runs Simon's subroutine on `f` built from two random distinct right
/// halves, at most `2n` times. Without `n` independent equations the oracle
/// is declared Feistel. Otherwise the recovered `s = 1‖z` is tested with one
/// random `u`: `f(u) = f(u ⊕ s)` (two classical evaluations of `V`).
pub fn feistel_distinguisher(v: &OracleHandle, method: Method, rng: &mut impl Rng) -> Result<Verdict> {
    if v.block_count() != 1 || !v.block_width().is_multiple_of(2) {
        return Err(Error::WrongOracleShape(
            "the Feistel distinguisher needs a 2n-bit block oracle".into(),
        ));
    }
    let n = v.block_width() / 2;
    let (alpha, beta) = random_pair(n, rng);
    let f = build_simon_f(v, alpha, beta)?;
    let stats = simon_solve_affine(&f, KnownBit::top_flag(n + 1), 2 * n, method, rng)?;
    let passed = match stats.outcome {
        SimonOutcome::RankDeficient => None,
        SimonOutcome::Solved(s) => {
            let eval_f = |u: u32| -> Result<u32> {
                let c = if u >> n == 0 { alpha } else { beta };
                let a = BitString::from_raw(n, u & mask(n));
                let w = v.query_point(a.concat(c)?)?.split(n)?.0;
                Ok((w ^ c).bits())
            };
            let u = rng.gen::<u32>() & mask(n + 1);
            Some(eval_f(u)? == eval_f(u ^ s.bits())?)
        }
    };
    Ok(Verdict::from_check(stats, passed))
}

/// Two-block CBC-MAC versus a random function of the same shape: Simon on
/// `g_1(b‖x) = MAC(α_b ‖ x)`, then `g_1(u) = g_1(u ⊕ 1‖z)` at a random `u`.
pub fn cbc2_prp_distinguisher(oracle: &OracleHandle, method: Method, rng: &mut impl Rng) -> Result<Verdict> {
    if oracle.block_count() != 2 {
        return Err(Error::WrongOracleShape(format!(
            "expected a two-block MAC oracle, got {} blocks",
            oracle.block_count()
        )));
    }
    let n = oracle.block_width();
    let (a0, a1) = random_pair(n, rng);
    let g = build_prefix_g(oracle, 1, &[a0], &[a1])?;
    let stats = simon_solve_affine(&g, KnownBit::top_flag(n + 1), 2 * n, method, rng)?;
    let passed = match stats.outcome {
        SimonOutcome::RankDeficient => None,
        SimonOutcome::Solved(s) => {
            let eval_g = |u: u32| -> Result<BitString> {
                let prefix = if u >> n == 0 { a0 } else { a1 };
                oracle.query(&[prefix, BitString::from_raw(n, u & mask(n))])
            };
            let u = rng.gen::<u32>() & mask(n + 1);
            Some(eval_g(u)? == eval_g(u ^ s.bits())?)
        }
    };
    Ok(Verdict::from_check(stats, passed))
}

/// A forged message/tag pair together with everything the attacker queried
/// while producing it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Forgery {
    pub message: Vec<BitString>,
    pub tag: BitString,
    pub prefix_len: usize,
    pub templates_queried: Vec<MessageTemplate>,
    pub classical_points_queried: Vec<Vec<BitString>>,
    pub subroutine_runs: u64,
    pub prefix_attempts: usize,
}

/// Simon sample cap for each `g_j`.
pub fn forge_sample_cap(n: usize) -> usize {
    4 * (n + 1)
}

fn check_forge_shape(cbc: &OracleHandle, k: usize) -> Result<(usize, usize)> {
    let ell = cbc.block_count();
    if ell < 3 || k == 0 || k + 2 > ell {
        return Err(Error::UnsupportedPrefix { k, ell });
    }
    Ok((cbc.block_width(), ell))
}

fn zero_padded(prefix: &[BitString], n: usize, ell: usize) -> Vec<BitString> {
    let mut m = prefix.to_vec();
    m.resize(ell, BitString::from_raw(n, 0));
    m
}

/// Forges a tag for a message starting with `beta_prefix` (`k` blocks,
/// `1 <= k <= ell - 2`) without querying it.
///
/// For `k = 1` the attacker block is drawn uniformly from the values other
/// than the target's. For `k > 1` random attacker prefixes are drawn until
/// the zero-padded MACs of the two prefixes differ, at most
/// [`PREFIX_SETUP_ATTEMPTS`] times.
pub fn cbc_forge(
    cbc: &OracleHandle,
    beta_prefix: &[BitString],
    method: Method,
    rng: &mut impl Rng,
) -> Result<Forgery> {
    let k = beta_prefix.len();
    let (n, ell) = check_forge_shape(cbc, k)?;
    if k == 1 {
        let alpha = loop {
            let a = random_block(n, rng);
            if a != beta_prefix[0] {
                break a;
            }
        };
        return forge_from_prefixes(cbc, &[alpha], beta_prefix, None, 1, method, rng);
    }

    let tag_beta = cbc.query(&zero_padded(beta_prefix, n, ell))?;
    for attempt in 1..=PREFIX_SETUP_ATTEMPTS {
        let alpha: Vec<BitString> = (0..k).map(|_| random_block(n, rng)).collect();
        let tag_alpha = cbc.query(&zero_padded(&alpha, n, ell))?;
        if tag_alpha != tag_beta {
            return forge_from_prefixes(
                cbc,
                &alpha,
                beta_prefix,
                Some((tag_alpha, tag_beta)),
                attempt,
                method,
                rng,
            );
        }
    }
    Err(Error::PrefixSetupFailure {
        attempts: PREFIX_SETUP_ATTEMPTS,
    })
}

/// [`cbc_forge`] with the attacker prefix supplied by the caller.
pub fn cbc_forge_with_prefix(
    cbc: &OracleHandle,
    alpha_prefix: &[BitString],
    beta_prefix: &[BitString],
    method: Method,
    rng: &mut impl Rng,
) -> Result<Forgery> {
    let k = beta_prefix.len();
    let (n, ell) = check_forge_shape(cbc, k)?;
    if alpha_prefix.len() != k {
        return Err(Error::DimensionMismatch(format!(
            "attacker prefix has {} blocks, target prefix {k}",
            alpha_prefix.len()
        )));
    }
    if k == 1 {
        if alpha_prefix == beta_prefix {
            return Err(Error::EqualBasePoints);
        }
        return forge_from_prefixes(cbc, alpha_prefix, beta_prefix, None, 1, method, rng);
    }
    let tag_beta = cbc.query(&zero_padded(beta_prefix, n, ell))?;
    let tag_alpha = cbc.query(&zero_padded(alpha_prefix, n, ell))?;
    if tag_alpha == tag_beta {
        return Err(Error::PrefixSetupFailure { attempts: 1 });
    }
    forge_from_prefixes(
        cbc,
        alpha_prefix,
        beta_prefix,
        Some((tag_alpha, tag_beta)),
        1,
        method,
        rng,
    )
}

fn forge_from_prefixes(
    cbc: &OracleHandle,
    alpha: &[BitString],
    beta: &[BitString],
    tags: Option<(BitString, BitString)>,
    prefix_attempts: usize,
    method: Method,
    rng: &mut impl Rng,
) -> Result<Forgery> {
    let (n, ell, k) = (cbc.block_width(), cbc.block_count(), beta.len());
    let cap = forge_sample_cap(n);

    let mut message = beta.to_vec();
    for j in 1..=ell - k {
        let g = build_simon_g(cbc, j, alpha, beta)?;
        let stats = simon_solve_affine(&g, KnownBit::top_flag(n + 1), cap, method, rng)?;
        match stats.outcome {
            SimonOutcome::Solved(s) => message.push(s.split(n)?.1),
            SimonOutcome::RankDeficient => return Err(Error::SimonFailure { round: j, cap }),
        }
    }

    let (tag_alpha, tag_beta) = match tags {
        Some(t) => t,
        None => (
            cbc.query(&zero_padded(alpha, n, ell))?,
            cbc.query(&zero_padded(beta, n, ell))?,
        ),
    };
    // The chained prefix behaves like the first block of an (ell - k + 1)-block MAC.
    let tag = if (ell - k + 1) % 2 == 0 {
        tag_alpha
    } else {
        tag_beta
    };

    let ledger = cbc.ledger();
    Ok(Forgery {
        message,
        tag,
        prefix_len: k,
        templates_queried: ledger.templates().cloned().collect(),
        classical_points_queried: ledger.classical_points().to_vec(),
        subroutine_runs: ledger.subroutine_runs(),
        prefix_attempts,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DisciplineViolation {
    MalformedMessage,
    TemplateCoversForgery { index: usize },
    TemplateWithoutZeroBlock { index: usize },
    ClassicalPointIsForgery { index: usize },
    ClassicalPointWithoutZeroBlock { index: usize },
    ZeroBlockOutsidePrefix { position: usize },
    /// The forgery's query record disagrees with the oracle's own ledger.
    LedgerMismatch,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForgeryCheck {
    pub tag_valid: bool,
    pub violations: Vec<DisciplineViolation>,
}

impl ForgeryCheck {
    pub fn is_valid(&self) -> bool {
        self.tag_valid && self.violations.is_empty()
    }
}

/// Recomputes the MAC of the forged message with the true key (bypassing the
/// attacker's ledger) and audits the query record.
pub fn verify_forgery(cbc: &OracleHandle, forgery: &Forgery) -> ForgeryCheck {
    let mut violations = Vec::new();
    let tag_valid = match cbc.true_value(&forgery.message) {
        Ok(t) => t == forgery.tag,
        Err(_) => {
            violations.push(DisciplineViolation::MalformedMessage);
            false
        }
    };
    if !violations.is_empty() {
        return ForgeryCheck {
            tag_valid,
            violations,
        };
    }

    for (index, t) in forgery.templates_queried.iter().enumerate() {
        if t.covers(&forgery.message).unwrap_or(true) {
            violations.push(DisciplineViolation::TemplateCoversForgery { index });
        }
        if !t.has_zero_block() {
            violations.push(DisciplineViolation::TemplateWithoutZeroBlock { index });
        }
    }
    for (index, p) in forgery.classical_points_queried.iter().enumerate() {
        if *p == forgery.message {
            violations.push(DisciplineViolation::ClassicalPointIsForgery { index });
        }
        if !p.iter().any(|b| b.is_zero()) {
            violations.push(DisciplineViolation::ClassicalPointWithoutZeroBlock { index });
        }
    }
    for (position, b) in forgery.message.iter().enumerate().skip(forgery.prefix_len) {
        if b.is_zero() {
            violations.push(DisciplineViolation::ZeroBlockOutsidePrefix { position });
        }
    }
    let ledger = cbc.ledger();
    let recorded: Vec<MessageTemplate> = ledger.templates().cloned().collect();
    if recorded != forgery.templates_queried
        || ledger.classical_points() != forgery.classical_points_queried.as_slice()
    {
        violations.push(DisciplineViolation::LedgerMismatch);
    }
    ForgeryCheck {
        tag_valid,
        violations,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaselineRun {
    pub queries: u64,
    pub shift: BitString,
}

/// Classical collision search: queries distinct uniformly random inputs
/// until two share an output, which reveals `s = u ⊕ v`.
pub fn classical_simon_baseline(f: &TruthTable, rng: &mut impl Rng) -> Result<BaselineRun> {
    let m = f.in_width();
    let size = f.len();
    let mut order: Vec<u32> = (0..size as u32).collect();
    let mut seen: HashMap<u32, u32> = HashMap::new();
    for i in 0..size {
        let pick = rng.gen_range(i..size);
        order.swap(i, pick);
        let u = order[i];
        if let Some(&v) = seen.get(&f.value(u)) {
            return Ok(BaselineRun {
                queries: i as u64 + 1,
                shift: BitString::from_raw(m, u ^ v),
            });
        }
        seen.insert(f.value(u), u);
    }
    Err(Error::NoCollision)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::{
        make_cbc_oracle, make_feistel_oracle, make_mac_shaped_oracle, make_random_mac_oracle,
        TemplateBlock,
    };
    use crate::primitives::{cbc_mac, random_permutation, simon_promise_function, CbcSpec, FeistelSpec};
    use crate::rng::rng_from_seed;

    fn b(s: &str) -> BitString {
        BitString::parse(s).unwrap()
    }

    fn plus_one(ell: usize) -> CbcSpec {
        let pi = TruthTable::permutation_from_entries(2, vec![1, 2, 3, 0]).unwrap();
        CbcSpec::new(pi, ell).unwrap()
    }

    #[test]
    fn zero_feistel_is_rank_deficient() {
        let v = make_feistel_oracle(FeistelSpec::all_zero(5).unwrap());
        let mut rng = rng_from_seed(3);
        let verdict = feistel_distinguisher(&v, Method::Spectral, &mut rng).unwrap();
        assert_eq!(verdict.guess, Guess::Feistel);
        assert_eq!(verdict.reason, VerdictReason::RankDeficient);
        assert_eq!(verdict.stats.samples_drawn, 10);
        let ledger = v.ledger();
        assert_eq!(ledger.classical_count(), 0);
        assert_eq!(ledger.quantum_oracle_calls(), 20);
    }

    #[test]
    fn feistel_verdict_uses_two_classical_queries() {
        let mut rng = rng_from_seed(4);
        let spec = FeistelSpec::random(4, 9).unwrap();
        let v = make_feistel_oracle(spec);
        let verdict = feistel_distinguisher(&v, Method::Spectral, &mut rng).unwrap();
        assert_eq!(verdict.guess, Guess::Feistel);
        let ledger = v.ledger();
        if verdict.reason == VerdictReason::CollisionCheckPassed {
            assert_eq!(ledger.classical_count(), 2);
        }
        assert!(ledger.subroutine_runs() <= 8);
    }

    #[test]
    fn identity_forgery_three_blocks() {
        let cbc = make_cbc_oracle(CbcSpec::new(TruthTable::identity(2).unwrap(), 3).unwrap());
        let mut rng = rng_from_seed(1);
        let forgery = cbc_forge_with_prefix(&cbc, &[b("01")], &[b("10")], Method::Spectral, &mut rng).unwrap();
        assert_eq!(forgery.message, vec![b("10"), b("11"), b("11")]);
        assert_eq!(forgery.tag, b("10"));
        assert!(verify_forgery(&cbc, &forgery).is_valid());
    }

    #[test]
    fn plus_one_forgery_three_blocks() {
        let cbc = make_cbc_oracle(plus_one(3));
        let mut rng = rng_from_seed(2);
        let forgery = cbc_forge_with_prefix(&cbc, &[b("00")], &[b("10")], Method::Spectral, &mut rng).unwrap();
        assert_eq!(forgery.message, vec![b("10"), b("10"), b("10")]);
        assert_eq!(forgery.tag, b("01"));
        assert_eq!(cbc_mac(&plus_one(3), &forgery.message).unwrap(), b("01"));
        assert!(verify_forgery(&cbc, &forgery).is_valid());
    }

    #[test]
    fn identity_forgery_with_two_block_prefix() {
        let cbc = make_cbc_oracle(CbcSpec::new(TruthTable::identity(4).unwrap(), 4).unwrap());
        let beta = [b("1100"), b("0101")];
        let mut rng = rng_from_seed(3);
        let forgery = cbc_forge(&cbc, &beta, Method::Spectral, &mut rng).unwrap();
        let alpha_pts: Vec<_> = forgery
            .classical_points_queried
            .iter()
            .filter(|p| p[..2] != beta)
            .collect();
        let alpha = alpha_pts.last().unwrap();
        let z = alpha[0] ^ alpha[1] ^ beta[0] ^ beta[1];
        assert_eq!(forgery.message, vec![beta[0], beta[1], z, z]);
        assert_eq!(forgery.tag, beta[0] ^ beta[1]);
        assert!(verify_forgery(&cbc, &forgery).is_valid());
    }

    #[test]
    fn forgery_rejects_bad_prefixes() {
        let cbc = make_cbc_oracle(plus_one(3));
        let mut rng = rng_from_seed(0);
        assert!(matches!(
            cbc_forge(&cbc, &[b("00"), b("01")], Method::Spectral, &mut rng),
            Err(Error::UnsupportedPrefix { k: 2, ell: 3 })
        ));
        assert!(matches!(
            cbc_forge(&cbc, &[], Method::Spectral, &mut rng),
            Err(Error::UnsupportedPrefix { .. })
        ));
        let short = make_cbc_oracle(plus_one(2));
        assert!(cbc_forge(&short, &[b("00")], Method::Spectral, &mut rng).is_err());
    }

    #[test]
    fn tampered_forgeries_are_reported() {
        let pi = random_permutation(4, 5).unwrap();
        let cbc = make_cbc_oracle(CbcSpec::new(pi, 3).unwrap());
        let mut rng = rng_from_seed(5);
        let forgery = cbc_forge(&cbc, &[b("1001")], Method::Spectral, &mut rng).unwrap();
        assert!(verify_forgery(&cbc, &forgery).is_valid());

        let mut flipped = forgery.clone();
        flipped.tag = flipped.tag ^ BitString::new(4, 1).unwrap();
        let check = verify_forgery(&cbc, &flipped);
        assert!(!check.tag_valid);
        assert!(check.violations.is_empty());

        let mut covered = forgery.clone();
        covered.templates_queried.push(MessageTemplate::new(vec![
            TemplateBlock::Fixed(forgery.message[0]),
            TemplateBlock::Wildcard,
            TemplateBlock::Wildcard,
        ]));
        let check = verify_forgery(&cbc, &covered);
        assert!(check.tag_valid);
        let idx = covered.templates_queried.len() - 1;
        assert!(check
            .violations
            .contains(&DisciplineViolation::TemplateCoversForgery { index: idx }));
        assert!(check.violations.contains(&DisciplineViolation::LedgerMismatch));
    }

    #[test]
    fn cbc2_examples() {
        let mut rng = rng_from_seed(8);
        let cbc = make_cbc_oracle(CbcSpec::new(random_permutation(4, 1).unwrap(), 2).unwrap());
        let verdict = cbc2_prp_distinguisher(&cbc, Method::Spectral, &mut rng).unwrap();
        assert_eq!(verdict.guess, Guess::Feistel);

        // Constant oracle: only j = 0 is ever sampled.
        let constant =
            make_mac_shaped_oracle(3, 2, TruthTable::constant(6, 3, 5).unwrap()).unwrap();
        let v = cbc2_prp_distinguisher(&constant, Method::Spectral, &mut rng).unwrap();
        assert_eq!(v.guess, Guess::Feistel);
        assert_eq!(v.reason, VerdictReason::RankDeficient);
        assert!(make_random_mac_oracle(3, 2, 1).is_ok());
        let three = make_cbc_oracle(plus_one(3));
        assert!(cbc2_prp_distinguisher(&three, Method::Spectral, &mut rng).is_err());
    }

    /// Exact expected query count for `m = 2`, `s = 11`, by enumerating every
    /// query order.
    fn enumerate_m2_expectation() -> f64 {
        let f = simon_promise_function(2, 0b11, 0).unwrap();
        let mut orders = Vec::new();
        let pts = [0u32, 1, 2, 3];
        for a in pts {
            for b in pts {
                for c in pts {
                    for d in pts {
                        let o = [a, b, c, d];
                        let mut s = o.to_vec();
                        s.sort_unstable();
                        s.dedup();
                        if s.len() == 4 {
                            orders.push(o);
                        }
                    }
                }
            }
        }
        let total: usize = orders
            .iter()
            .map(|o| {
                (1..4)
                    .find(|&i| (0..i).any(|p| f.value(o[p]) == f.value(o[i])))
                    .unwrap()
                    + 1
            })
            .sum();
        total as f64 / orders.len() as f64
    }

    #[test]
    fn baseline_small_domain() {
        let expected = enumerate_m2_expectation();
        assert!((expected - 8.0 / 3.0).abs() < 1e-12);
        let f = simon_promise_function(2, 0b11, 0).unwrap();
        let trials = 20_000;
        let mut sum = 0;
        for seed in 0..trials {
            let run = classical_simon_baseline(&f, &mut rng_from_seed(seed)).unwrap();
            assert_eq!(run.shift, b("11"));
            assert!(run.queries <= 5);
            sum += run.queries;
        }
        let mean = sum as f64 / trials as f64;
        assert!((mean - expected).abs() < 0.03, "{mean}");
        assert!(matches!(
            classical_simon_baseline(&TruthTable::identity(3).unwrap(), &mut rng_from_seed(0)),
            Err(Error::NoCollision)
        ));
    }
}
