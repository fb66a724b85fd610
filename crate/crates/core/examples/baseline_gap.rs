//! Classical collision search against Simon's algorithm on the same promise
//! functions.

use simon_attacks::classical_simon_baseline;
use simon_attacks::primitives::simon_promise_function;
use simon_attacks::rng::{derive_seed, rng_from_seed};
use simon_attacks::simon::{simon_solve_affine, KnownBit};
use simon_attacks::Method;

fn median(mut v: Vec<u64>) -> u64 {
    v.sort_unstable();
    v[v.len() / 2]
}

fn main() -> simon_attacks::Result<()> {
    println!("{:>3} {:>16} {:>14}", "m", "classical median", "quantum median");
    for m in (4..=18).step_by(2) {
        let (mut classical, mut quantum) = (Vec::new(), Vec::new());
        for t in 0..100 {
            let mut rng = rng_from_seed(derive_seed(m as u64, t));
            let shift = (1 << (m - 1)) | (t as u32 & ((1 << (m - 1)) - 1));
            let f = simon_promise_function(m, shift, derive_seed(7, t))?;
            classical.push(classical_simon_baseline(&f, &mut rng)?.queries);
            let stats = simon_solve_affine(&f, KnownBit::top_flag(m), 4 * (m + 1), Method::Spectral, &mut rng)?;
            quantum.push(stats.samples_drawn as u64);
        }
        println!("{m:>3} {:>16} {:>14}", median(classical), median(quantum));
    }
    Ok(())
}
