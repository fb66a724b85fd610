//! Forges a CBC-MAC tag for a chosen prefix without ever querying the forged
//! message, then checks it against the real key and the query ledger.
//!
//! Usage: `cargo run --example cbc_forgery -- [n] [ell] [prefix_len] [seed]`

use simon_attacks::oracles::{blocks_to_hex, make_cbc_oracle};
use simon_attacks::primitives::random_permutation;
use simon_attacks::rng::{derive_seed, rng_from_seed};
use simon_attacks::{cbc_forge, verify_forgery, BitString, CbcSpec, Method};

fn main() -> simon_attacks::Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse().expect("integer argument")).collect();
    let get = |i: usize, default: u64| args.get(i).copied().unwrap_or(default);
    let (n, ell, k, seed) = (get(0, 8) as usize, get(1, 5) as usize, get(2, 2) as usize, get(3, 3));

    let pi = random_permutation(n, derive_seed(seed, 1))?;
    let cbc = make_cbc_oracle(CbcSpec::new(pi, ell)?);
    let mut rng = rng_from_seed(seed);

    // Target prefix 1, 2, ..., k (mod 2^n).
    let prefix: Vec<BitString> = (1..=k as u32)
        .map(|i| BitString::new(n, i % (1 << n)))
        .collect::<simon_attacks::Result<_>>()?;

    let forgery = cbc_forge(&cbc, &prefix, Method::Spectral, &mut rng)?;
    println!("message  {}", blocks_to_hex(&forgery.message));
    println!("tag      {}", forgery.tag.to_hex());
    println!("queries  {} superposition templates, {} classical points, {} subroutine runs",
        forgery.templates_queried.len(), forgery.classical_points_queried.len(), forgery.subroutine_runs);
    for t in &forgery.templates_queried {
        println!("  template {}", t.to_strings().join(" "));
    }

    let check = verify_forgery(&cbc, &forgery);
    println!("tag valid: {}, discipline violations: {:?}", check.tag_valid, check.violations);
    Ok(())
}
