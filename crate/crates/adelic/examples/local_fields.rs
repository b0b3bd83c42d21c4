//! Local field towers: invariants, element arithmetic, unit group
//! structure O* = k* x Z_p^{ef} x mu, p-power roots of unity, and the
//! tame isomorphism test.
//!
//! Run with: cargo run -p adelic --example local_fields

use adelic::localfield::LocalField;
use adelic::zpoly::parse_poly;

fn main() -> Result<(), adelic::Error> {
    let prec = 20;

    // three presentations: base field, unramified, totally ramified
    let q5 = LocalField::qp(5, prec)?;
    let unram = LocalField::unramified(3, 2, prec)?;
    let zeta3 = LocalField::eisenstein_over_qp(3, &parse_poly("x^2+3x+3")?, prec)?;
    for fld in [&q5, &unram, &zeta3] {
        let (p, e, f) = fld.invariants();
        println!("{}: p = {}, e = {}, f = {}", fld, p, e, f);
    }

    // the uniformizer has valuation 1; p has valuation e
    println!(
        "in {}: v(pi) = {}, v(3) = {}",
        zeta3,
        zeta3.valuation(&zeta3.pi()),
        zeta3.valuation(&zeta3.from_integer(3)),
    );

    // unit group structure per field
    for fld in [&q5, &unram, &zeta3] {
        let u = fld.unit_group_structure()?;
        println!(
            "{}: O* = C_{} x Z_p^{} x mu({})",
            fld, u.cyclic_prime_to_p_order, u.free_rank, u.mu_p_power_order
        );
    }

    // Q_3(zeta_3) really contains a primitive cube root of unity
    let (mu, gen) = zeta3.mu_p_power_with_generator()?;
    let zeta = gen.expect("mu is nontrivial");
    println!(
        "|mu_3^inf| = {}; zeta^3 = 1 holds: {}",
        mu,
        zeta3.agrees(
            &zeta3.pow(&zeta, 3),
            &zeta3.one(),
            zeta3.abs_precision_pi(&zeta3.pow(&zeta, 3))
        )
    );

    // tame isomorphism: x^2-5 and x^2-20 cut out the same field over Q_5,
    // x^2-10 a different one; wild cases are refused
    let a = LocalField::eisenstein_over_qp(5, &parse_poly("x^2-5")?, prec)?;
    let b = LocalField::eisenstein_over_qp(5, &parse_poly("x^2-20")?, prec)?;
    let c = LocalField::eisenstein_over_qp(5, &parse_poly("x^2-10")?, prec)?;
    println!("Q_5(sqrt 5) vs Q_5(sqrt 20): {:?}", a.is_isomorphic_tame(&b));
    println!("Q_5(sqrt 5) vs Q_5(sqrt 10): {:?}", a.is_isomorphic_tame(&c));
    let w1 = LocalField::eisenstein_over_qp(2, &parse_poly("x^2-2")?, prec)?;
    let w2 = LocalField::eisenstein_over_qp(2, &parse_poly("x^2-6")?, prec)?;
    println!("Q_2(sqrt 2) vs Q_2(sqrt 6): {:?}", w1.is_isomorphic_tame(&w2));
    Ok(())
}
