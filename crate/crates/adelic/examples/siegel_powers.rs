//! Siegel's n-th power decomposition: any scalar with n! invertible is a
//! Z-linear combination of n-th powers, by an explicit identity. Shown
//! over Q and over Q_p with its precision budget.
//!
//! Run with: cargo run -p adelic --example siegel_powers

use num_bigint::BigInt;
use num_rational::BigRational;

use adelic::grouprec::{
    siegel_decompose_padic, siegel_decompose_rational, siegel_evaluate_padic,
    siegel_evaluate_rational,
};
use adelic::padic::PAdicNumber;

fn main() -> Result<(), adelic::Error> {
    // z = 6 as a combination of cubes
    let z = BigRational::from(BigInt::from(6));
    let terms = siegel_decompose_rational(&z, 3)?;
    print!("6 = ");
    for (i, t) in terms.iter().enumerate() {
        if i > 0 {
            print!(" + ");
        }
        print!("({})*({})^3", t.coefficient, t.base);
    }
    println!();
    println!("evaluates back to {}", siegel_evaluate_rational(&terms, 3));

    // over Q_2 the division by n! costs digits; the budget is explicit
    let z = PAdicNumber::from_integer(2, 40, 6)?.add(&PAdicNumber::from_integer(2, 40, 1)?)?;
    let n = 4;
    let terms = siegel_decompose_padic(&z, n)?;
    let back = siegel_evaluate_padic(&terms, n)?;
    let budget = 40 - adelic::arith::factorial_valuation(n as u64, 2) as i64;
    println!(
        "over Q_2 with n = {}: {} terms, agreement to {} digits: {}",
        n,
        terms.len(),
        budget,
        back.agrees_with(&z, budget)
    );
    Ok(())
}
