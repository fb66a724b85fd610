//! Simon's subroutine on a small promise function: the exact outcome law from
//! both simulators, a few samples, and recovery of the hidden shift.

use simon_attacks::primitives::simon_promise_function;
use simon_attacks::rng::rng_from_seed;
use simon_attacks::simon::{
    simon_solve_affine, spectral_distribution, statevector_distribution, KnownBit, SimonSampler,
};
use simon_attacks::{BitString, Method};

fn main() -> simon_attacks::Result<()> {
    let m = 4;
    let shift = 0b1011;
    let f = simon_promise_function(m, shift, 5)?;
    println!("f: {m} -> {} bits, hidden shift {}", f.out_width(), BitString::new(m, shift)?);

    let spectral = spectral_distribution(&f)?;
    let statevector = statevector_distribution(&f)?;
    println!("max |difference| between simulators: {:e}", spectral.max_abs_diff(&statevector));
    for j in spectral.support(1e-12) {
        println!("  Pr[{}] = {:.4}", BitString::new(m, j)?, spectral.prob(j));
    }

    let mut rng = rng_from_seed(9);
    let mut sampler = SimonSampler::new(&f)?;
    let draws: Vec<String> = (0..8).map(|_| sampler.sample(&mut rng).to_string()).collect();
    println!("samples: {}", draws.join(" "));

    let stats = simon_solve_affine(&f, KnownBit::top_flag(m), 4 * (m + 1), Method::Statevector, &mut rng)?;
    println!("solver: {:?} after {} samples", stats.outcome, stats.samples_drawn);
    Ok(())
}
