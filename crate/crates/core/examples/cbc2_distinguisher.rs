//! Two-block CBC-MAC versus a random function of the same shape.

use simon_attacks::oracles::{make_cbc_oracle, make_random_mac_oracle};
use simon_attacks::primitives::random_permutation;
use simon_attacks::rng::{derive_seed, rng_from_seed};
use simon_attacks::{cbc2_prp_distinguisher, CbcSpec, Method};

fn main() -> simon_attacks::Result<()> {
    let n = 6;
    let trials = 200u64;
    let mut right = [0u32; 2];
    for t in 0..trials {
        let mut rng = rng_from_seed(derive_seed(42, t));
        let cbc = make_cbc_oracle(CbcSpec::new(random_permutation(n, derive_seed(t, 1))?, 2)?);
        let rand = make_random_mac_oracle(n, 2, derive_seed(t, 2))?;
        for (arm, oracle) in [cbc, rand].into_iter().enumerate() {
            let verdict = cbc2_prp_distinguisher(&oracle, Method::Spectral, &mut rng)?;
            let says_cbc = verdict.guess == simon_attacks::Guess::Feistel;
            right[arm] += (says_cbc == (arm == 0)) as u32;
        }
    }
    println!("n = {n}, {trials} trials per arm");
    println!("CBC-MAC arm correct:         {}/{trials}", right[0]);
    println!("random-function arm correct: {}/{trials}", right[1]);
    Ok(())
}
