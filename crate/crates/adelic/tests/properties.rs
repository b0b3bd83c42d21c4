//! Property tests for the spec-level invariants: ring axioms at
//! propagated precision, the ultrametric inequality, root/re-power round
//! trips, divisibility profiles of Z_p, and the fundamental identity
//! Σ e_i f_i = n for prime decompositions.

use proptest::prelude::*;

use adelic::numberfield::NumberField;
use adelic::padic::{PAdicNumber, Valuation};
use adelic::zpoly::ZPoly;

const PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

fn arb_prime() -> impl Strategy<Value = u64> {
    prop::sample::select(PRIMES.as_slice())
}

fn arb_padic(p: u64) -> impl Strategy<Value = PAdicNumber> {
    (any::<i32>(), 1i32..1000).prop_map(move |(num, den)| {
        PAdicNumber::from_rational(p, 20, num as i64, den as i64).unwrap()
    })
}

fn arb_triple() -> impl Strategy<Value = (PAdicNumber, PAdicNumber, PAdicNumber)> {
    arb_prime().prop_flat_map(|p| (arb_padic(p), arb_padic(p), arb_padic(p)))
}

fn min_abs(a: &PAdicNumber, b: &PAdicNumber) -> i64 {
    use adelic::padic::AbsPrec;
    let f = |x: &PAdicNumber| match x.abs_precision() {
        AbsPrec::Finite(v) => v,
        AbsPrec::Exact => i64::MAX / 4,
    };
    f(a).min(f(b))
}

proptest! {
    #[test]
    fn addition_associative((a, b, c) in arb_triple()) {
        let lhs = a.add(&b).unwrap().add(&c).unwrap();
        let rhs = a.add(&b.add(&c).unwrap()).unwrap();
        prop_assert!(lhs.agrees_with(&rhs, min_abs(&lhs, &rhs)));
    }

    #[test]
    fn multiplication_distributes((a, b, c) in arb_triple()) {
        let lhs = a.mul(&b.add(&c).unwrap()).unwrap();
        let rhs = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
        prop_assert!(lhs.agrees_with(&rhs, min_abs(&lhs, &rhs)));
    }

    #[test]
    fn subtraction_is_exact((a, b, _c) in arb_triple()) {
        // (a + b) - b = a at the propagated precision
        let back = a.add(&b).unwrap().sub(&b).unwrap();
        prop_assert!(back.agrees_with(&a, min_abs(&back, &a)));
    }

    #[test]
    fn ultrametric_inequality((a, b, _c) in arb_triple()) {
        let s = a.add(&b).unwrap();
        let min = a.valuation().min(b.valuation());
        prop_assert!(s.valuation() >= min);
        if a.valuation() != b.valuation() {
            prop_assert_eq!(s.valuation(), min);
        }
    }

    #[test]
    fn product_valuations_add((a, b, _c) in arb_triple()) {
        prop_assume!(!a.is_zero() && !b.is_zero());
        let va = a.valuation().finite().unwrap();
        let vb = b.valuation().finite().unwrap();
        let prod = a.mul(&b).unwrap();
        prop_assert_eq!(prod.valuation(), Valuation::Finite(va + vb));
    }

    #[test]
    fn root_repowers(p in arb_prime(), num in 1i64..100_000, n in 1u32..7) {
        let x = PAdicNumber::from_integer(p, 24, num).unwrap();
        if let Ok(Ok(root)) = x.nth_root(n) {
            let back = root.pow(n as i64).unwrap();
            prop_assert!(back.agrees_with(&x, min_abs(&back, &x)));
        }
    }

    #[test]
    fn teichmueller_multiplicative(p in arb_prime(), a in 1u64..13, b in 1u64..13) {
        prop_assume!(a < p && b < p);
        let wa = PAdicNumber::teichmueller(a, p, 16).unwrap();
        let wb = PAdicNumber::teichmueller(b, p, 16).unwrap();
        let wab = PAdicNumber::teichmueller(a * b % p, p, 16).unwrap();
        prop_assert!(wa.mul(&wb).unwrap().agrees_with(&wab, 16));
    }

    #[test]
    fn log_additive(p in prop::sample::select(&[3u64, 5, 7, 11][..]),
                    a in 1i64..200, b in 1i64..200) {
        let x = PAdicNumber::from_integer(p, 16, 1 + p as i64 * a).unwrap();
        let y = PAdicNumber::from_integer(p, 16, 1 + p as i64 * b).unwrap();
        let lhs = x.mul(&y).unwrap().one_unit_log().unwrap();
        let rhs = x.one_unit_log().unwrap().add(&y.one_unit_log().unwrap()).unwrap();
        prop_assert!(lhs.agrees_with(&rhs, min_abs(&lhs, &rhs)));
    }

    #[test]
    fn only_zero_is_p_divisible(p in arb_prime(), num in 1i64..1_000_000) {
        // x != 0 in Z_p leaves Z_p after dividing by p^(v(x)+1), while
        // division by a prime q != p keeps x integral forever
        let x = PAdicNumber::from_integer(p, 24, num).unwrap();
        let v = x.valuation().finite().unwrap();
        let pp = PAdicNumber::from_integer(p, 24, p as i64).unwrap();
        let escaped = x.div(&pp.pow(v + 1).unwrap()).unwrap();
        prop_assert!(escaped.valuation() < Valuation::Finite(0));
        let q = PRIMES.iter().copied().find(|&q| q != p).unwrap();
        let mut y = x.clone();
        for _ in 0..6 {
            y = y.div(&PAdicNumber::from_integer(p, 24, q as i64).unwrap()).unwrap();
            prop_assert!(y.valuation() >= Valuation::Finite(v));
        }
    }

    #[test]
    fn one_units_eventually_obstructed(p in prop::sample::select(&[3u64, 5, 7][..]),
                                       a in 1i64..50) {
        // finite-scale shadow of ∩_n (1+pZ_p)^n = {1}: a one-unit x with
        // v(x-1) = w fails the p^w-th root, since (1+pZ_p)^(p^w) sits in
        // the deeper filtration step
        prop_assume!(a % p as i64 != 0);
        let x = PAdicNumber::from_integer(p, 20, 1 + p as i64 * a).unwrap();
        let mut obstructed = false;
        for n in 2..=p as u32 {
            match x.nth_root(n) {
                Ok(Err(_)) => { obstructed = true; break; }
                Ok(Ok(_)) => {}
                Err(_) => {}
            }
        }
        prop_assert!(obstructed);
    }

    #[test]
    fn local_field_axioms(c in prop::sample::select(&[(3u64, 3i64), (5, -5), (7, -7)][..]),
                          a0 in -50i64..50, a1 in -50i64..50,
                          b0 in -50i64..50, b1 in -50i64..50) {
        // ramified quadratic towers: commutativity, associativity spot
        // checks, and division as the inverse of multiplication
        let (p, c0) = c;
        let eis = ZPoly::from_i64(&[c0, if p == 3 { 3 } else { 0 }, 1]);
        let fld = adelic::localfield::LocalField::eisenstein_over_qp(p, &eis, 14).unwrap();
        let pi = fld.pi();
        let x = fld.add(&fld.from_integer(a0), &fld.scalar_mul(
            &PAdicNumber::from_integer(p, 14, a1).unwrap(), &pi));
        let y = fld.add(&fld.from_integer(b0), &fld.scalar_mul(
            &PAdicNumber::from_integer(p, 14, b1).unwrap(), &pi));
        let xy = fld.mul(&x, &y);
        let yx = fld.mul(&y, &x);
        prop_assert_eq!(&xy, &yx);
        if !fld.is_zero_elt(&y) && fld.valuation(&y) != Valuation::Infinite {
            if let Ok(q) = fld.div(&xy, &y) {
                let back = fld.abs_precision_pi(&q).min(fld.abs_precision_pi(&x)) - 4;
                prop_assert!(fld.agrees(&q, &x, back));
            }
        }
    }

    #[test]
    fn fundamental_identity(c0 in -30i64..30, c1 in -10i64..10, p in arb_prime()) {
        // random monic cubics that happen to be irreducible
        let poly = ZPoly::from_i64(&[c0, c1, 0, 1]);
        if let Ok(k) = NumberField::new(poly) {
            if let Ok(d) = k.decompose(p) {
                if d.supported {
                    let total: u32 = d.pairs.iter().map(|&(e, f)| e * f).sum();
                    prop_assert_eq!(total, 3);
                }
            }
        }
    }

    #[test]
    fn equivalence_scan_symmetric_reflexive(c in 1i64..60) {
        let k = NumberField::new(ZPoly::from_i64(&[c, 0, 1]));
        let l = NumberField::new(ZPoly::from_i64(&[c + 1, 0, 1]));
        if let (Ok(k), Ok(l)) = (k, l) {
            let kk = k.arithmetically_equivalent(&k, 40);
            let reflexive = matches!(
                kk.verdict,
                adelic::numberfield::EquivalenceVerdict::EquivalentUpTo { .. }
            );
            prop_assert!(reflexive);
            let kl = k.arithmetically_equivalent(&l, 40);
            let lk = l.arithmetically_equivalent(&k, 40);
            prop_assert_eq!(kl.verdict, lk.verdict);
        }
    }
}
