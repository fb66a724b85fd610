use simon_attacks::gf2::{solve_affine, SolveOutcome};
use simon_attacks::primitives::{cbc_mac, random_permutation};
use simon_attacks::{BitString, CbcSpec, Gf2Matrix, TruthTable};

fn main() -> simon_attacks::Result<()> {
    // Tables persist in a small binary format.
    let pi = random_permutation(8, 11)?;
    let path = std::env::temp_dir().join("pi8.smtt");
    pi.save(&path)?;
    let back = TruthTable::load(&path)?;
    assert_eq!(back, pi);
    println!("saved and reloaded an 8-bit permutation from {}", path.display());

    let spec = CbcSpec::new(back, 3)?;
    let msg = [BitString::parse("00000001")?, BitString::parse("10101010")?, BitString::parse("11110000")?];
    println!("CBC-MAC(01 aa f0) = {}", cbc_mac(&spec, &msg)?.to_hex());

    // x2 ^ x1 = 1, x1 = 1, x0 = 0 over GF(2).
    let rows = ["110", "010", "001"].map(|r| BitString::parse(r).unwrap());
    let a = Gf2Matrix::from_rows(3, &rows)?;
    match solve_affine(&a, &[true, true, false])? {
        SolveOutcome::Solved(x) => println!("solution {x}"),
        other => println!("{other:?}"),
    }
    Ok(())
}
