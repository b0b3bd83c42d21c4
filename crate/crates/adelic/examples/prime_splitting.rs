//! Prime decomposition in number fields: factorization mod p away from
//! the discriminant, the shift-and-Newton-polygon fallback at ramified
//! primes, and completions as explicit towers.
//!
//! Run with: cargo run -p adelic --example prime_splitting

use adelic::numberfield::NumberField;

fn main() -> Result<(), adelic::Error> {
    let k = NumberField::parse("x^2+1")?;
    println!(
        "K = Q[x]/({}), disc = {}",
        k.defining_poly(),
        k.poly_discriminant()
    );
    for p in [2u64, 3, 5, 7, 13] {
        let d = k.decompose(p)?;
        println!("  {} -> pairs (e, f) = {:?}", p, d.pairs);
    }

    // completions carry full tower data
    for (p, i) in [(5u64, 0usize), (3, 0), (2, 0)] {
        let c = k.completion(p, i, 12)?;
        println!("  completion at ({}, {}) = {}", p, i, c);
    }

    // a ramified prime beyond the one-shift attempt is refused, not guessed
    let l = NumberField::parse("x^8-240")?;
    let d = l.decompose(2)?;
    println!(
        "x^8-240 at 2: supported = {} ({})",
        d.supported,
        d.reason.unwrap_or_default()
    );

    // totally ramified octics
    let m = NumberField::parse("x^8-15")?;
    for p in [2u64, 3, 5] {
        println!("x^8-15 at {} -> {:?}", p, m.decompose(p)?.pairs);
    }
    Ok(())
}
