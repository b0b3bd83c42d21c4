//! Small integer utilities shared across the crate: primality,
//! modular arithmetic on machine words, p-adic valuations of integers.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

/// Deterministic Miller-Rabin, valid for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    // This witness set decides primality for every n < 3.3 * 10^24.
    'outer: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mod_mul(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Iterator over primes `2, 3, 5, ...` up to and including `bound`.
pub fn primes_up_to(bound: u64) -> impl Iterator<Item = u64> {
    (2..=bound).filter(|&n| is_prime(n))
}

pub fn mod_mul(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mod_mul(acc, base, m);
        }
        base = mod_mul(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` mod `m` for gcd(a, m) = 1.
pub fn mod_inv(a: u64, m: u64) -> u64 {
    let (g, x, _) = ext_gcd(a as i128, m as i128);
    assert_eq!(g, 1, "mod_inv: {} not invertible mod {}", a, m);
    (x.rem_euclid(m as i128)) as u64
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Inverse of `a` modulo `m` over big integers; `None` when not coprime.
pub fn big_mod_inv(a: &BigUint, m: &BigUint) -> Option<BigUint> {
    let a = BigInt::from(a.clone());
    let m_int = BigInt::from(m.clone());
    let (g, x, _) = big_ext_gcd(&a, &m_int);
    if !g.is_one() {
        return None;
    }
    let r = ((x % &m_int) + &m_int) % &m_int;
    Some(r.to_biguint().unwrap())
}

fn big_ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    if b.is_zero() {
        if a.is_negative() {
            (-a.clone(), -BigInt::one(), BigInt::zero())
        } else {
            (a.clone(), BigInt::one(), BigInt::zero())
        }
    } else {
        let (g, x, y) = big_ext_gcd(b, &(a % b));
        (g, y.clone(), x - (a / b) * y)
    }
}

/// p-adic valuation of a nonzero big integer.
pub fn big_valuation(n: &BigInt, p: u64) -> u64 {
    assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut v = 0u64;
    let mut m = n.abs();
    while (&m % &p).is_zero() {
        m /= &p;
        v += 1;
    }
    v
}

/// p-adic valuation of n! via Legendre's formula.
pub fn factorial_valuation(n: u64, p: u64) -> u64 {
    let mut total = 0u64;
    let mut q = p;
    while q <= n {
        total += n / q;
        match q.checked_mul(p) {
            Some(next) => q = next,
            None => break,
        }
    }
    total
}

/// p^k as a big integer.
pub fn big_pow(p: u64, k: u32) -> BigUint {
    BigUint::from(p).pow(k)
}

/// Binomial coefficient C(n, k) over big integers.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= BigUint::from(n - i);
        den *= BigUint::from(i + 1);
    }
    num / den
}
