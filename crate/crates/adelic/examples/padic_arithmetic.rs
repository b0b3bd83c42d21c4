//! Capped-precision arithmetic in Q_p: ring operations with honest
//! precision tracking, Teichmüller lifts, n-th roots with obstruction
//! certificates, and the one-unit logarithm/exponential.
//!
//! Run with: cargo run -p adelic --example padic_arithmetic

use adelic::padic::PAdicNumber;

fn main() -> Result<(), adelic::Error> {
    let p = 5;
    let prec = 8;

    // carries happen in base p: 2 + 3 = 5 has valuation 1
    let two = PAdicNumber::from_integer(p, prec, 2)?;
    let three = PAdicNumber::from_integer(p, prec, 3)?;
    println!("2 + 3 in Q_5          = {}", two.add(&three)?);

    // exact division: 1/2 = 63 mod 125
    let half = PAdicNumber::from_rational(p, 3, 1, 2)?;
    println!("1/2 at 3 digits       = {}", half);

    // cancellation is tracked: (1 + 5^3) - 1 keeps only 3 digits
    let x = PAdicNumber::from_integer(p, 6, 126)?;
    let d = x.sub(&PAdicNumber::one(p, 6))?;
    println!("(1 + 5^3) - 1         = {}", d);

    // Teichmüller lift: the (p-1)-st root of unity above 2
    let w = PAdicNumber::teichmueller(2, p, 6)?;
    println!("teichmueller(2)       = {}", w);
    println!("  its 4th power       = {}", w.pow(4)?);

    // square roots: 6 is a square in Z_5, 2 and 5 are not
    match PAdicNumber::from_integer(p, prec, 6)?.nth_root(2)? {
        Ok(r) => println!("sqrt(6)               = {}", r),
        Err(obs) => println!("sqrt(6) obstructed: {}", obs),
    }
    for bad in [2i64, 5] {
        match PAdicNumber::from_integer(p, prec, bad)?.nth_root(2)? {
            Ok(r) => println!("sqrt({})              = {}", bad, r),
            Err(obs) => println!("sqrt({}) obstructed:   {}", bad, obs),
        }
    }

    // one-unit log/exp: mutually inverse on their domains
    let u = PAdicNumber::from_integer(p, prec, 6)?; // 1 + 5
    let lg = u.one_unit_log()?;
    println!("log(1 + 5)            = {}", lg);
    println!("exp(log(1 + 5))       = {}", lg.one_unit_exp()?);

    // at p = 2 the convergence domain is stricter
    let bad = PAdicNumber::from_integer(2, prec, 3)?;
    match bad.one_unit_log() {
        Err(e) => println!("log(1+2) over Q_2     : {}", e),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
