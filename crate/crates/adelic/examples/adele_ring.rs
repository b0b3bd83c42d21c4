//! Truncated finite adeles: componentwise ring operations, evaluation
//! maps and their kernels (the principal maximal ideals), the additive
//! change of basis to Z_p^n, multiplicative unit decomposition, and the
//! torsion multiset probe.
//!
//! Run with: cargo run -p adelic --example adele_ring

use num_bigint::BigInt;

use adelic::adele::{
    additive_isomorphism, decompose_unit, maximal_ideal_quotient, recompose_unit,
    torsion_multiset, AdeleOp, PlaceId, TruncatedAdele,
};
use adelic::numberfield::NumberField;
use adelic::padic::PAdicNumber;

fn main() -> Result<(), adelic::Error> {
    let prec = 16;
    let k = NumberField::parse("x^2+1")?;

    // an adele supported at the two places over 5, integral unit tail
    let p5a = PlaceId { p: 5, index: 0 };
    let p5b = PlaceId { p: 5, index: 1 };
    let fld5 = k.completion(5, 0, prec)?;
    let a = TruncatedAdele::from_components(
        &k,
        vec![(p5a, fld5.from_integer(3)), (p5b, fld5.from_integer(11))],
        BigInt::from(1),
        prec,
    )?;
    let sum = a.arith(&a, AdeleOp::Add)?;
    println!("support of a + a: {:?}, tail {}", sum.support(), sum.tail_default());
    println!("a is a unit adele: {}", a.is_unit()?);

    // quotients by principal maximal ideals are the completions
    for place in [p5a, PlaceId { p: 3, index: 0 }, PlaceId { p: 2, index: 0 }] {
        let q = maximal_ideal_quotient(&k, place, prec)?;
        println!("A_K / m_{} = {}", place, q);
    }

    // additive change of basis at p = 2 (the ramified place): 2x2 block
    let iso = additive_isomorphism(&k, 2, prec)?;
    println!("additive iso at 2: size {} matrix", iso.size());
    let v = vec![
        PAdicNumber::from_integer(2, prec, 9)?,
        PAdicNumber::from_integer(2, prec, -4)?,
    ];
    let elts = iso.from_qp_vector(&v)?;
    let back = iso.to_qp_vector(&elts)?;
    println!(
        "round trip of (9, -4): ({}, {})",
        back[0], back[1]
    );

    // multiplicative decomposition of 50 = 5^2 * 2 at the place over 5
    let dec = decompose_unit(&fld5, &fld5.from_integer(50), p5a)?;
    println!(
        "50 = pi^{} * omega({:?}) * exp(log-part) * zeta^{}",
        dec.exponent, dec.teichmueller, dec.torsion_index
    );
    let back = recompose_unit(&fld5, &dec)?;
    println!(
        "recomposition agrees: {}",
        fld5.agrees(&back, &fld5.from_integer(50), 14)
    );

    // the torsion multiset of an imaginary quadratic field
    let rep = torsion_multiset(&NumberField::parse("x^2+5")?, 20, prec)?;
    println!("torsion orders of Q(sqrt(-5)) up to 20: {:?}", rep.orders);
    Ok(())
}
