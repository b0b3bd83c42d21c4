//! Arithmetic equivalence by split-type scanning: a cubic pair that
//! diverges at the witness prime 31, and the degree-8 pair
//! x^8 - 15 / x^8 - 240 whose split types agree at every good prime of
//! the window even though the fields are not isomorphic.
//!
//! Run with: cargo run -p adelic --example gassmann_scan

use adelic::numberfield::{EquivalenceVerdict, NumberField};

fn main() -> Result<(), adelic::Error> {
    let k = NumberField::parse("x^3-2")?;
    let l = NumberField::parse("x^3-3")?;
    let scan = k.arithmetically_equivalent(&l, 100);
    println!("x^3-2 vs x^3-3 up to 100: {:?}", scan.verdict);
    if let EquivalenceVerdict::Inequivalent { witness } = scan.verdict {
        println!(
            "  witness {}: split types {:?} vs {:?}",
            witness,
            k.split_type(witness)?,
            l.split_type(witness)?
        );
    }

    let g1 = NumberField::parse("x^8-15")?;
    let g2 = NumberField::parse("x^8-240")?;
    let scan = g1.arithmetically_equivalent(&g2, 2000);
    println!(
        "x^8-15 vs x^8-240 up to 2000: {:?} (skipped {:?})",
        scan.verdict, scan.skipped_primes
    );
    // the two fields are nevertheless distinct: 240 = 16 * 15, so a root
    // of one inside the other forces sqrt(2) into a field that visibly
    // lacks it (both have a Q_11 completion, and 2 is not a square mod 11)
    println!(
        "  both have a degree-1 factor mod 11: {} / {}",
        g1.split_type(11)?.contains(&1),
        g2.split_type(11)?.contains(&1)
    );
    let two = adelic::padic::PAdicNumber::from_integer(11, 12, 2)?;
    match two.nth_root(2)? {
        Err(obs) => println!("  sqrt(2) in Q_11: obstructed ({})", obs),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
