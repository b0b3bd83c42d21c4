//! Capped-precision exact arithmetic in `Q_p`.
//!
//! A nonzero element is stored as `p^v * u + O(p^(v+n))` with `u` a unit
//! mantissa reduced mod `p^n`; `n` is the relative precision. Zero carries
//! an absolute precision instead (`O(p^a)`), with an exact-zero variant for
//! values known to be zero outright.
//!
//! Precision propagation rule, obeyed by every operation in this module:
//! addition and subtraction intersect absolute precisions (the result's
//! relative precision is recomputed from its valuation, so cancellation is
//! accounted for); multiplication and division take the minimum relative
//! precision and add/subtract valuations. Division by an integer `k`
//! lowers the valuation by `v_p(k)` and keeps relative precision, hence
//! costs `v_p(k)` digits of absolute precision.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{big_mod_inv, big_pow, big_valuation, is_prime};
use crate::error::{Error, Result};

/// Valuation of a p-adic number; zero has infinite valuation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinite)
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
            (Valuation::Infinite, _) => Ordering::Greater,
            (_, Valuation::Infinite) => Ordering::Less,
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{}", v),
            Valuation::Infinite => write!(f, "+inf"),
        }
    }
}

/// Absolute precision: `O(p^a)`, or none at all for exact values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AbsPrec {
    Finite(i64),
    Exact,
}

impl AbsPrec {
    fn min(self, other: AbsPrec) -> AbsPrec {
        match (self, other) {
            (AbsPrec::Exact, o) => o,
            (s, AbsPrec::Exact) => s,
            (AbsPrec::Finite(a), AbsPrec::Finite(b)) => AbsPrec::Finite(a.min(b)),
        }
    }

}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Repr {
    /// Known to vanish to the stated absolute precision.
    Zero(AbsPrec),
    /// p^v * unit with `0 < unit < p^prec`, `gcd(unit, p) = 1`.
    NonZero { v: i64, unit: BigUint, prec: u32 },
}

/// An element of `Q_p` at capped precision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PAdicNumber {
    p: u64,
    repr: Repr,
}

impl PAdicNumber {
    /// Exact zero of `Q_p`.
    pub fn zero(p: u64) -> Self {
        PAdicNumber {
            p,
            repr: Repr::Zero(AbsPrec::Exact),
        }
    }

    /// Zero known only modulo `p^abs`.
    pub fn zero_at(p: u64, abs: i64) -> Self {
        PAdicNumber {
            p,
            repr: Repr::Zero(AbsPrec::Finite(abs)),
        }
    }

    pub fn one(p: u64, prec: u32) -> Self {
        PAdicNumber {
            p,
            repr: Repr::NonZero {
                v: 0,
                unit: BigUint::one(),
                prec,
            },
        }
    }

    /// Construct from raw tower data, reducing the mantissa.
    /// `unit` need not be reduced but must be coprime to `p`.
    pub fn from_unit(p: u64, v: i64, unit: BigUint, prec: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if prec == 0 {
            return Err(Error::DomainViolation("precision must be positive".into()));
        }
        let m = big_pow(p, prec);
        let u = unit % &m;
        if u.is_zero() || (&u % p).is_zero() {
            return Err(Error::DomainViolation(format!(
                "mantissa {} is not a unit mod {}",
                u, p
            )));
        }
        Ok(PAdicNumber {
            p,
            repr: Repr::NonZero { v, unit: u, prec },
        })
    }

    /// Embed an integer at `prec` digits of relative precision.
    pub fn from_integer(p: u64, prec: u32, value: impl Into<BigInt>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if prec == 0 {
            return Err(Error::DomainViolation("precision must be positive".into()));
        }
        let value: BigInt = value.into();
        if value.is_zero() {
            return Ok(PAdicNumber::zero(p));
        }
        let v = big_valuation(&value, p) as i64;
        let unit_int = value / BigInt::from(p).pow(v as u32);
        let m = BigInt::from(big_pow(p, prec));
        let unit = ((unit_int % &m) + &m) % &m;
        Ok(PAdicNumber {
            p,
            repr: Repr::NonZero {
                v,
                unit: unit.to_biguint().unwrap(),
                prec,
            },
        })
    }

    /// Embed a rational `num/den` at `prec` digits of relative precision.
    pub fn from_rational(
        p: u64,
        prec: u32,
        num: impl Into<BigInt>,
        den: impl Into<BigInt>,
    ) -> Result<Self> {
        let num = PAdicNumber::from_integer(p, prec, num)?;
        let den = PAdicNumber::from_integer(p, prec, den)?;
        num.div(&den)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero(_))
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero(AbsPrec::Exact))
    }

    pub fn valuation(&self) -> Valuation {
        match &self.repr {
            Repr::Zero(_) => Valuation::Infinite,
            Repr::NonZero { v, .. } => Valuation::Finite(*v),
        }
    }

    /// Relative precision in digits; `None` for zero.
    pub fn precision(&self) -> Option<u32> {
        match &self.repr {
            Repr::Zero(_) => None,
            Repr::NonZero { prec, .. } => Some(*prec),
        }
    }

    /// Absolute precision `a` in `O(p^a)`.
    pub fn abs_precision(&self) -> AbsPrec {
        match &self.repr {
            Repr::Zero(a) => *a,
            Repr::NonZero { v, prec, .. } => AbsPrec::Finite(v + *prec as i64),
        }
    }

    /// Unit mantissa; zero for zero.
    pub fn unit_mantissa(&self) -> BigUint {
        match &self.repr {
            Repr::Zero(_) => BigUint::zero(),
            Repr::NonZero { unit, .. } => unit.clone(),
        }
    }

    /// The value as an integer mod `p^k`, for elements of non-negative
    /// valuation. `None` when `v < 0` or `k` exceeds known precision.
    pub fn residue_mod(&self, k: u32) -> Option<BigUint> {
        match &self.repr {
            Repr::Zero(AbsPrec::Exact) => Some(BigUint::zero()),
            Repr::Zero(AbsPrec::Finite(a)) => {
                if *a >= k as i64 {
                    Some(BigUint::zero())
                } else {
                    None
                }
            }
            Repr::NonZero { v, unit, prec } => {
                if *v < 0 {
                    return None;
                }
                if *v >= k as i64 {
                    return Some(BigUint::zero());
                }
                if v + (*prec as i64) < k as i64 {
                    return None;
                }
                let val = unit * big_pow(self.p, *v as u32);
                Some(val % big_pow(self.p, k))
            }
        }
    }

    /// Residue class mod p, for elements of non-negative valuation.
    pub fn residue(&self) -> Option<u64> {
        self.residue_mod(1).and_then(|r| r.to_u64())
    }

    fn check_prime(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            Err(Error::PrimeMismatch(self.p, other.p))
        } else {
            Ok(())
        }
    }

    /// Lower the relative precision to `prec` (no-op if already lower).
    pub fn truncate(&self, prec: u32) -> Self {
        match &self.repr {
            Repr::Zero(_) => self.clone(),
            Repr::NonZero { v, unit, prec: n } => {
                if *n <= prec {
                    self.clone()
                } else {
                    PAdicNumber {
                        p: self.p,
                        repr: Repr::NonZero {
                            v: *v,
                            unit: unit % big_pow(self.p, prec),
                            prec,
                        },
                    }
                }
            }
        }
    }

    /// Exact integer value of the known part: `p^v * u` as a rational pair
    /// `(numerator, p-power denominator exponent)`.
    pub fn known_part(&self) -> (BigInt, u32) {
        match &self.repr {
            Repr::Zero(_) => (BigInt::zero(), 0),
            Repr::NonZero { v, unit, .. } => {
                if *v >= 0 {
                    (BigInt::from(unit.clone()) * BigInt::from(self.p).pow(*v as u32), 0)
                } else {
                    (BigInt::from(unit.clone()), (-*v) as u32)
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_prime(other)?;
        let abs = self.abs_precision().min(other.abs_precision());
        match (&self.repr, &other.repr) {
            (Repr::Zero(_), _) => Ok(other.clamp_abs(abs)),
            (_, Repr::Zero(_)) => Ok(self.clamp_abs(abs)),
            (
                Repr::NonZero { v: v1, unit: u1, .. },
                Repr::NonZero { v: v2, unit: u2, .. },
            ) => {
                let a = match abs {
                    AbsPrec::Finite(a) => a,
                    AbsPrec::Exact => unreachable!(),
                };
                let vmin = (*v1).min(*v2);
                // represent both at valuation vmin and reduce mod p^(a - vmin)
                let digits = a - vmin;
                if digits <= 0 {
                    return Ok(PAdicNumber {
                        p: self.p,
                        repr: Repr::Zero(AbsPrec::Finite(a)),
                    });
                }
                let m = big_pow(self.p, digits as u32);
                let t1 = (u1 * big_pow(self.p, (*v1 - vmin) as u32)) % &m;
                let t2 = (u2 * big_pow(self.p, (*v2 - vmin) as u32)) % &m;
                let sum = (t1 + t2) % &m;
                Ok(Self::from_digits(self.p, vmin, sum, a))
            }
        }
    }

    pub fn neg(&self) -> Self {
        match &self.repr {
            Repr::Zero(_) => self.clone(),
            Repr::NonZero { v, unit, prec } => {
                let m = big_pow(self.p, *prec);
                PAdicNumber {
                    p: self.p,
                    repr: Repr::NonZero {
                        v: *v,
                        unit: &m - unit,
                        prec: *prec,
                    },
                }
            }
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_prime(other)?;
        match (&self.repr, &other.repr) {
            (Repr::Zero(AbsPrec::Exact), _) | (_, Repr::Zero(AbsPrec::Exact)) => {
                Ok(PAdicNumber::zero(self.p))
            }
            (Repr::Zero(AbsPrec::Finite(a)), r) | (r, Repr::Zero(AbsPrec::Finite(a))) => {
                // 0 + O(p^a) times x: valuation at least a + v(x)
                let shift = match r {
                    Repr::NonZero { v, .. } => *v,
                    Repr::Zero(AbsPrec::Finite(b)) => *b,
                    Repr::Zero(AbsPrec::Exact) => unreachable!(),
                };
                Ok(PAdicNumber {
                    p: self.p,
                    repr: Repr::Zero(AbsPrec::Finite(a + shift)),
                })
            }
            (
                Repr::NonZero { v: v1, unit: u1, prec: n1 },
                Repr::NonZero { v: v2, unit: u2, prec: n2 },
            ) => {
                let prec = (*n1).min(*n2);
                let m = big_pow(self.p, prec);
                Ok(PAdicNumber {
                    p: self.p,
                    repr: Repr::NonZero {
                        v: v1 + v2,
                        unit: (u1 * u2) % &m,
                        prec,
                    },
                })
            }
        }
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<Self> {
        match &self.repr {
            Repr::Zero(AbsPrec::Exact) => Err(Error::DivisionByZero),
            Repr::Zero(AbsPrec::Finite(a)) => Err(Error::PrecisionExhausted(format!(
                "divisor is indistinguishable from 0 at O({}^{})",
                self.p, a
            ))),
            Repr::NonZero { v, unit, prec } => {
                let m = big_pow(self.p, *prec);
                let inv = big_mod_inv(unit, &m).expect("unit mantissa is invertible");
                Ok(PAdicNumber {
                    p: self.p,
                    repr: Repr::NonZero {
                        v: -v,
                        unit: inv,
                        prec: *prec,
                    },
                })
            }
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.check_prime(other)?;
        self.mul(&other.inv()?)
    }

    /// Integer power (negative allowed for nonzero values).
    pub fn pow(&self, k: i64) -> Result<Self> {
        if k == 0 {
            let prec = self.precision().unwrap_or(1);
            return Ok(PAdicNumber::one(self.p, prec));
        }
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut acc: Option<PAdicNumber> = None;
        let mut sq = base;
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => sq.clone(),
                    Some(a) => a.mul(&sq)?,
                });
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq)?;
            }
        }
        Ok(acc.unwrap())
    }

    /// Dispatch used by the operation-style API.
    pub fn arith(a: &Self, b: &Self, op: ArithOp) -> Result<Self> {
        match op {
            ArithOp::Add => a.add(b),
            ArithOp::Sub => a.sub(b),
            ArithOp::Mul => a.mul(b),
            ArithOp::Div => a.div(b),
        }
    }

    fn clamp_abs(&self, abs: AbsPrec) -> Self {
        match (&self.repr, abs) {
            (_, AbsPrec::Exact) => self.clone(),
            (Repr::Zero(a), AbsPrec::Finite(b)) => PAdicNumber {
                p: self.p,
                repr: Repr::Zero(a.min(AbsPrec::Finite(b))),
            },
            (Repr::NonZero { v, unit, prec }, AbsPrec::Finite(a)) => {
                let digits = a - v;
                if digits <= 0 {
                    PAdicNumber {
                        p: self.p,
                        repr: Repr::Zero(AbsPrec::Finite(a)),
                    }
                } else {
                    let d = (digits as u32).min(*prec);
                    PAdicNumber {
                        p: self.p,
                        repr: Repr::NonZero {
                            v: *v,
                            unit: unit % big_pow(self.p, d),
                            prec: d,
                        },
                    }
                }
            }
        }
    }

    /// Build from `p^v * digits` where `digits` is reduced mod `p^(abs - v)`
    /// but may be divisible by `p`; re-normalizes and recomputes valuation.
    fn from_digits(p: u64, v: i64, digits: BigUint, abs: i64) -> Self {
        if digits.is_zero() {
            return PAdicNumber {
                p,
                repr: Repr::Zero(AbsPrec::Finite(abs)),
            };
        }
        let extra = big_valuation(&BigInt::from(digits.clone()), p) as i64;
        let v2 = v + extra;
        let prec = abs - v2;
        debug_assert!(prec > 0);
        let unit = (digits / big_pow(p, extra as u32)) % big_pow(p, prec as u32);
        PAdicNumber {
            p,
            repr: Repr::NonZero {
                v: v2,
                unit,
                prec: prec as u32,
            },
        }
    }

    /// Do the two values agree modulo `p^abs`?
    pub fn agrees_with(&self, other: &Self, abs: i64) -> bool {
        if self.p != other.p {
            return false;
        }
        match self.sub(other) {
            Ok(d) => match d.valuation() {
                Valuation::Infinite => true,
                Valuation::Finite(v) => v >= abs,
            },
            Err(_) => false,
        }
    }

    // ------------------------------------------------------------------
    // Teichmüller lift
    // ------------------------------------------------------------------

    /// The Teichmüller lift: the unique (p-1)-st root of unity congruent
    /// to `a` mod p, computed to `prec` digits.
    pub fn teichmueller(a: u64, p: u64, prec: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if a == 0 || a >= p {
            return Err(Error::InvalidResidue { residue: a, p });
        }
        let m = big_pow(p, prec);
        let mut x = BigUint::from(a);
        // x -> x^p gains at least one digit of agreement per step
        for _ in 0..=prec {
            let next = x.modpow(&BigUint::from(p), &m);
            if next == x {
                break;
            }
            x = next;
        }
        PAdicNumber::from_unit(p, 0, x, prec)
    }

    // ------------------------------------------------------------------
    // n-th roots via Hensel lifting
    // ------------------------------------------------------------------

    /// Try to extract an n-th root. On failure, returns the obstruction.
    ///
    /// Uses the strengthened Hensel criterion `v(f(a)) > 2 v(f'(a))` with
    /// `f(x) = x^n - u`; the seed search is exhaustive over residues mod
    /// `p^(2 v_p(n) + 1)`, which decides existence whenever the input
    /// carries at least that much relative precision.
    pub fn nth_root(&self, n: u32) -> Result<std::result::Result<Self, RootObstruction>> {
        if n == 0 {
            return Err(Error::DomainViolation("0-th root".into()));
        }
        if n == 1 {
            return Ok(Ok(self.clone()));
        }
        let p = self.p;
        match &self.repr {
            Repr::Zero(AbsPrec::Exact) => Ok(Ok(self.clone())),
            Repr::Zero(AbsPrec::Finite(a)) => {
                // root has valuation >= ceil(a/n)
                Ok(Ok(PAdicNumber::zero_at(p, (a + n as i64 - 1) / n as i64)))
            }
            Repr::NonZero { v, unit, prec } => {
                if v.rem_euclid(n as i64) != 0 {
                    return Ok(Err(RootObstruction::ValuationNotDivisible {
                        valuation: *v,
                        n,
                    }));
                }
                let s = {
                    let mut s = 0u32;
                    let mut m = n;
                    while m % p as u32 == 0 {
                        s += 1;
                        m /= p as u32;
                    }
                    s
                };
                let depth = 2 * s + 1;
                if *prec < depth {
                    return Err(Error::PrecisionExhausted(format!(
                        "need {} digits to decide {}-th roots over Q_{}, have {}",
                        depth, n, p, prec
                    )));
                }
                let modulus = big_pow(p, depth);
                let target = unit % &modulus;
                let mut seed: Option<BigUint> = None;
                let pd = modulus.to_u64();
                // exhaustive over units mod p^depth, ascending, so the
                // returned root is deterministic
                if let Some(pd) = pd {
                    for a in 1..pd {
                        if a % p == 0 {
                            continue;
                        }
                        let a_big = BigUint::from(a);
                        if a_big.modpow(&BigUint::from(n), &modulus) == target {
                            seed = Some(a_big);
                            break;
                        }
                    }
                } else {
                    return Err(Error::PrecisionExhausted(
                        "seed search space exceeds budget".into(),
                    ));
                }
                let seed = match seed {
                    Some(s) => s,
                    None => {
                        return Ok(Err(RootObstruction::ResidueObstruction {
                            p,
                            depth,
                            residue: target,
                            n,
                        }))
                    }
                };
                // Newton iteration x <- x - (x^n - u)/(n x^(n-1)) mod p^prec
                let out_prec = prec - s;
                let work = big_pow(p, prec + s);
                let n_big = BigUint::from(n);
                let mut x = seed;
                for _ in 0..(64 - (out_prec as u64).leading_zeros() + 4) {
                    // fx = x^n - u mod p^work
                    let xn = x.modpow(&n_big, &work);
                    let fx = (&work + &xn - (unit % &work)) % &work;
                    if fx.is_zero() {
                        break;
                    }
                    let fv = big_valuation(&BigInt::from(fx.clone()), p) as u32;
                    if fv >= prec + s {
                        break;
                    }
                    let dfx = (&n_big * x.modpow(&(&n_big - 1u32), &work)) % &work;
                    // dfx = p^s * unit; divide fx by dfx exactly
                    let ps = big_pow(p, s);
                    let dfx_unit = &dfx / &ps;
                    let fx_red = &fx / &ps;
                    let inv = big_mod_inv(&(dfx_unit % &work), &work).expect("derivative unit");
                    let delta = (fx_red * inv) % &work;
                    x = (&work + x - delta) % &work;
                }
                let root_unit = x % big_pow(p, out_prec);
                let root = PAdicNumber::from_unit(p, v / n as i64, root_unit, out_prec)?;
                debug_assert!(root
                    .pow(n as i64)
                    .unwrap()
                    .agrees_with(self, v + out_prec as i64));
                Ok(Ok(root))
            }
        }
    }

    // ------------------------------------------------------------------
    // One-unit logarithm and exponential
    // ------------------------------------------------------------------

    /// `log(x)` for one-units: requires `v(x-1) >= 1` (`>= 2` when p = 2).
    pub fn one_unit_log(&self) -> Result<Self> {
        let p = self.p;
        let prec = self
            .precision()
            .ok_or_else(|| Error::DomainViolation("log of zero".into()))?;
        let one = PAdicNumber::one(p, prec);
        let z = self.sub(&one)?;
        let zv = match z.valuation() {
            Valuation::Infinite => return Ok(PAdicNumber::zero(p)), // log 1 = 0
            Valuation::Finite(v) => v,
        };
        let min_v = if p == 2 { 2 } else { 1 };
        if zv < min_v {
            return Err(Error::DomainViolation(format!(
                "log requires v(x-1) >= {} over Q_{}, got {}",
                min_v, p, zv
            )));
        }
        let target = match z.abs_precision() {
            AbsPrec::Finite(a) => a,
            AbsPrec::Exact => zv + prec as i64,
        };
        // all terms z^k/k with k >= kmax have valuation >= target
        let mut kmax = 1i64;
        while kmax * zv - ilog_floor(kmax as u64, p) < target {
            kmax += 1;
        }
        let mut acc = PAdicNumber::zero_at(p, target);
        let mut zk = z.clone();
        for k in 1..kmax {
            let term = zk.div(&PAdicNumber::from_integer(p, prec + 8, k)?)?;
            let signed = if k % 2 == 1 { term } else { term.neg() };
            acc = acc.add(&signed)?;
            zk = zk.mul(&z)?;
        }
        Ok(acc)
    }

    /// `exp(y)` for `v(y) >= 1` (`>= 2` when p = 2).
    pub fn one_unit_exp(&self) -> Result<Self> {
        let p = self.p;
        let min_v = if p == 2 { 2 } else { 1 };
        let yv = match self.valuation() {
            Valuation::Infinite => {
                // exp 0 = 1; respect the absolute precision of the input
                return Ok(match self.abs_precision() {
                    AbsPrec::Exact => PAdicNumber::one(p, crate::DEFAULT_PRECISION),
                    AbsPrec::Finite(a) => PAdicNumber::one(p, a.max(1) as u32),
                });
            }
            Valuation::Finite(v) => v,
        };
        if yv < min_v {
            return Err(Error::DomainViolation(format!(
                "exp requires v(y) >= {} over Q_{}, got {}",
                min_v, p, yv
            )));
        }
        let prec = self.precision().unwrap();
        let target = match self.abs_precision() {
            AbsPrec::Finite(a) => a,
            AbsPrec::Exact => yv + prec as i64,
        };
        // v(y^k / k!) >= k*yv - (k-1)/(p-1), increasing in k
        let mut kmax = 1i64;
        while kmax * yv - (kmax - 1) / (p as i64 - 1) < target {
            kmax += 1;
        }
        let mut acc = PAdicNumber::one(p, (target - 0).max(1) as u32);
        let mut term = PAdicNumber::one(p, prec + 8);
        for k in 1..kmax {
            term = term
                .mul(self)?
                .div(&PAdicNumber::from_integer(p, prec + 8, k)?)?;
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }
}

fn ilog_floor(k: u64, p: u64) -> i64 {
    let mut d = 0i64;
    let mut q = p;
    while q <= k {
        d += 1;
        match q.checked_mul(p) {
            Some(n) => q = n,
            None => break,
        }
    }
    d
}

/// The four ring operations, for the operation-style entry point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Why an n-th root does not exist.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum RootObstruction {
    /// v(x) is not divisible by n.
    ValuationNotDivisible { valuation: i64, n: u32 },
    /// The unit part is not an n-th power residue mod p^depth.
    ResidueObstruction {
        p: u64,
        depth: u32,
        #[serde(with = "crate::padic::biguint_string")]
        residue: BigUint,
        n: u32,
    },
}

impl RootObstruction {
    /// Re-verify the certificate from scratch.
    pub fn verify(&self, x: &PAdicNumber) -> bool {
        match self {
            RootObstruction::ValuationNotDivisible { valuation, n } => {
                x.valuation() == Valuation::Finite(*valuation)
                    && valuation.rem_euclid(*n as i64) != 0
            }
            RootObstruction::ResidueObstruction {
                p,
                depth,
                residue,
                n,
            } => {
                let m = big_pow(*p, *depth);
                if let Some(md) = m.to_u64() {
                    let r = residue % &m;
                    (1..md)
                        .filter(|a| a % p != 0)
                        .all(|a| BigUint::from(a).modpow(&BigUint::from(*n), &m) != r)
                } else {
                    false
                }
            }
        }
    }
}

impl fmt::Display for RootObstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootObstruction::ValuationNotDivisible { valuation, n } => {
                write!(f, "valuation {} not divisible by {}", valuation, n)
            }
            RootObstruction::ResidueObstruction {
                p,
                depth,
                residue,
                n,
            } => write!(
                f,
                "{} is not a {}-th power residue mod {}^{}",
                residue, n, p, depth
            ),
        }
    }
}

impl fmt::Display for PAdicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Zero(AbsPrec::Exact) => write!(f, "0"),
            Repr::Zero(AbsPrec::Finite(a)) => write!(f, "0 + O({}^{})", self.p, a),
            Repr::NonZero { v, unit, prec } => {
                write!(f, "{}^{} * {} + O({}^{})", self.p, v, unit, self.p, v + *prec as i64)
            }
        }
    }
}

/// JSON form: `{p, v, u (decimal string), N}`. Zero has `v = null`;
/// exact zero additionally has `N = null`.
#[derive(Serialize, Deserialize)]
struct PAdicJson {
    p: u64,
    v: Option<i64>,
    u: String,
    #[serde(rename = "N")]
    n: Option<i64>,
}

impl Serialize for PAdicNumber {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let j = match &self.repr {
            Repr::Zero(AbsPrec::Exact) => PAdicJson {
                p: self.p,
                v: None,
                u: "0".into(),
                n: None,
            },
            Repr::Zero(AbsPrec::Finite(a)) => PAdicJson {
                p: self.p,
                v: None,
                u: "0".into(),
                n: Some(*a),
            },
            Repr::NonZero { v, unit, prec } => PAdicJson {
                p: self.p,
                v: Some(*v),
                u: unit.to_string(),
                n: Some(*prec as i64),
            },
        };
        j.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PAdicNumber {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as DeError;
        let j = PAdicJson::deserialize(d)?;
        match j.v {
            None => {
                if j.u != "0" {
                    return Err(D::Error::custom("zero must have mantissa 0"));
                }
                Ok(match j.n {
                    None => PAdicNumber::zero(j.p),
                    Some(a) => PAdicNumber::zero_at(j.p, a),
                })
            }
            Some(v) => {
                let unit: BigUint = j
                    .u
                    .parse()
                    .map_err(|_| D::Error::custom("bad mantissa"))?;
                let prec = j
                    .n
                    .filter(|&n| n > 0)
                    .ok_or_else(|| D::Error::custom("bad precision"))?
                    as u32;
                PAdicNumber::from_unit(j.p, v, unit, prec).map_err(D::Error::custom)
            }
        }
    }
}

pub(crate) mod biguint_string {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub(crate) mod bigint_string {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q5(x: i64) -> PAdicNumber {
        PAdicNumber::from_integer(5, 6, x).unwrap()
    }

    #[test]
    fn carry_example() {
        // 2 + 3 = 5 over Q_5: valuation 1, mantissa 1
        let s = q5(2).add(&q5(3)).unwrap();
        assert_eq!(s.valuation(), Valuation::Finite(1));
        assert_eq!(s.unit_mantissa(), BigUint::from(1u32));
    }

    #[test]
    fn inverse_of_two_mod_125() {
        let x = PAdicNumber::from_rational(5, 3, 1, 2).unwrap();
        assert_eq!(x.valuation(), Valuation::Finite(0));
        assert_eq!(x.unit_mantissa(), BigUint::from(63u32));
    }

    #[test]
    fn zero_absorbs() {
        let x = PAdicNumber::from_integer(7, 5, 13).unwrap();
        let z = PAdicNumber::zero(7);
        let prod = x.mul(&z).unwrap();
        assert!(prod.is_exact_zero());
        assert_eq!(prod.valuation(), Valuation::Infinite);
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(q5(50).valuation(), Valuation::Finite(2));
        assert_eq!(PAdicNumber::zero(5).valuation(), Valuation::Infinite);
        let third = PAdicNumber::from_rational(3, 4, 1, 3).unwrap();
        assert_eq!(third.valuation(), Valuation::Finite(-1));
    }

    #[test]
    fn valuation_additive_in_products() {
        let a = q5(50);
        let b = PAdicNumber::from_rational(5, 6, 7, 25).unwrap();
        let prod = a.mul(&b).unwrap();
        assert_eq!(prod.valuation(), Valuation::Finite(0));
    }

    #[test]
    fn teichmueller_examples() {
        let w = PAdicNumber::teichmueller(2, 5, 2).unwrap();
        assert_eq!(w.unit_mantissa(), BigUint::from(7u32));
        let w4 = w.pow(4).unwrap();
        assert!(w4.agrees_with(&PAdicNumber::one(5, 2), 2));

        let one = PAdicNumber::teichmueller(1, 5, 6).unwrap();
        assert_eq!(one.unit_mantissa(), BigUint::one());

        let m1 = PAdicNumber::teichmueller(2, 3, 3).unwrap();
        assert_eq!(m1.unit_mantissa(), BigUint::from(26u32)); // -1 mod 27
    }

    #[test]
    fn teichmueller_fixed_under_frobenius() {
        for a in 1..7 {
            let w = PAdicNumber::teichmueller(a, 7, 12).unwrap();
            let wp = w.pow(7).unwrap();
            assert!(wp.agrees_with(&w, 12), "omega({})^7 != omega({})", a, a);
            assert_eq!(w.residue(), Some(a));
        }
    }

    #[test]
    fn sqrt_of_six() {
        let x = q5(6);
        let root = x.nth_root(2).unwrap().unwrap();
        assert_eq!(root.residue_mod(2), Some(BigUint::from(16u32)));
        let sq = root.pow(2).unwrap();
        assert!(sq.agrees_with(&x, 6));
    }

    #[test]
    fn sqrt_of_two_obstructed() {
        let x = q5(2);
        let obs = x.nth_root(2).unwrap().unwrap_err();
        assert!(matches!(obs, RootObstruction::ResidueObstruction { .. }));
        assert!(obs.verify(&x));
    }

    #[test]
    fn sqrt_of_five_obstructed_by_valuation() {
        let x = q5(5);
        let obs = x.nth_root(2).unwrap().unwrap_err();
        assert_eq!(
            obs,
            RootObstruction::ValuationNotDivisible { valuation: 1, n: 2 }
        );
        assert!(obs.verify(&x));
    }

    #[test]
    fn wild_square_root_mod_eight() {
        // squares of units in Q_2 are exactly 1 mod 8
        let x = PAdicNumber::from_integer(2, 10, 17).unwrap();
        let r = x.nth_root(2).unwrap().unwrap();
        assert!(r.pow(2).unwrap().agrees_with(&x, 9));
        let y = PAdicNumber::from_integer(2, 10, 3).unwrap();
        let obs = y.nth_root(2).unwrap().unwrap_err();
        assert!(obs.verify(&y));
    }

    #[test]
    fn wild_root_precision_loss_documented() {
        // p | n costs v_p(n) digits of relative precision
        let x = PAdicNumber::from_integer(2, 10, 17).unwrap();
        let r = x.nth_root(2).unwrap().unwrap();
        assert_eq!(r.precision(), Some(9));
    }

    #[test]
    fn log_of_one_plus_five() {
        // log(1+5) = 5 - 25/2 + 125/3 - ... truncated at O(5^4)
        let p = 5;
        let x = PAdicNumber::from_integer(p, 4, 6).unwrap();
        let lg = x.one_unit_log().unwrap();
        let expected = PAdicNumber::from_integer(p, 8, 5)
            .unwrap()
            .sub(&PAdicNumber::from_rational(p, 8, 25, 2).unwrap())
            .unwrap()
            .add(&PAdicNumber::from_rational(p, 8, 125, 3).unwrap())
            .unwrap();
        assert!(lg.agrees_with(&expected, 4));
        // round trip at one digit of budgeted loss
        let back = lg.one_unit_exp().unwrap();
        assert!(back.agrees_with(&x, 3));
    }

    #[test]
    fn log_of_one_is_zero() {
        let one = PAdicNumber::one(7, 9);
        let lg = one.one_unit_log().unwrap();
        assert!(lg.is_zero());
    }

    #[test]
    fn log_domain_violation_at_two() {
        let x = PAdicNumber::from_integer(2, 8, 3).unwrap(); // 1 + 2
        assert!(matches!(
            x.one_unit_log(),
            Err(Error::DomainViolation(_))
        ));
    }

    #[test]
    fn log_is_additive() {
        let p = 7;
        let a = PAdicNumber::from_integer(p, 12, 1 + 7 * 3).unwrap();
        let b = PAdicNumber::from_integer(p, 12, 1 + 7 * 5).unwrap();
        let lhs = a.mul(&b).unwrap().one_unit_log().unwrap();
        let rhs = a
            .one_unit_log()
            .unwrap()
            .add(&b.one_unit_log().unwrap())
            .unwrap();
        assert!(lhs.agrees_with(&rhs, 12));
    }

    #[test]
    fn exp_log_round_trip() {
        for p in [3u64, 5, 7] {
            let x = PAdicNumber::from_integer(p, 10, 1 + p as i64 * 4).unwrap();
            let rt = x.one_unit_log().unwrap().one_unit_exp().unwrap();
            assert!(rt.agrees_with(&x, 9), "round trip failed at p = {}", p);
        }
        // p = 2 needs v >= 2
        let x = PAdicNumber::from_integer(2, 12, 5).unwrap(); // 1 + 4
        let rt = x.one_unit_log().unwrap().one_unit_exp().unwrap();
        assert!(rt.agrees_with(&x, 10));
    }

    #[test]
    fn prime_mismatch_detected() {
        let a = q5(1);
        let b = PAdicNumber::from_integer(7, 6, 1).unwrap();
        assert!(matches!(
            PAdicNumber::arith(&a, &b, ArithOp::Add),
            Err(Error::PrimeMismatch(5, 7))
        ));
    }

    #[test]
    fn division_by_zero_kinds() {
        let a = q5(1);
        assert!(matches!(
            a.div(&PAdicNumber::zero(5)),
            Err(Error::DivisionByZero)
        ));
        assert!(matches!(
            a.div(&PAdicNumber::zero_at(5, 3)),
            Err(Error::PrecisionExhausted(_))
        ));
    }

    #[test]
    fn json_round_trip_bit_exact() {
        let samples = vec![
            q5(50),
            PAdicNumber::from_rational(5, 7, -3, 10).unwrap(),
            PAdicNumber::zero(5),
            PAdicNumber::zero_at(5, 4),
        ];
        for x in samples {
            let js = serde_json::to_string(&x).unwrap();
            let back: PAdicNumber = serde_json::from_str(&js).unwrap();
            assert_eq!(x, back);
            let js2 = serde_json::to_string(&back).unwrap();
            assert_eq!(js, js2);
        }
    }

    #[test]
    fn display_form() {
        assert_eq!(q5(50).to_string(), "5^2 * 2 + O(5^8)");
        assert_eq!(PAdicNumber::zero(5).to_string(), "0");
        assert_eq!(PAdicNumber::zero_at(5, 3).to_string(), "0 + O(5^3)");
    }

    #[test]
    fn cancellation_tracks_precision() {
        // (1 + 5^3) - 1 has valuation 3 and only 3 remaining digits
        let a = PAdicNumber::from_integer(5, 6, 126).unwrap();
        let b = PAdicNumber::one(5, 6);
        let d = a.sub(&b).unwrap();
        assert_eq!(d.valuation(), Valuation::Finite(3));
        assert_eq!(d.precision(), Some(3));
    }

    #[test]
    fn zp_divisibility_profile() {
        // x != 0 in Z_p: dividing by p^k for k > v(x) leaves Z_p,
        // while division by q != p stays integral for all k.
        let x = q5(50); // v = 2
        for k in 1..=2 {
            let y = x.div(&q5(5).pow(k).unwrap()).unwrap();
            assert!(y.valuation() >= Valuation::Finite(0));
        }
        let y = x.div(&q5(5).pow(3).unwrap()).unwrap();
        assert_eq!(y.valuation(), Valuation::Finite(-1));
        // q-divisibility for q = 2: 1/2^k stays a unit
        let mut z = x.clone();
        for _ in 0..8 {
            z = z.div(&q5(2)).unwrap();
            assert_eq!(z.valuation(), Valuation::Finite(2));
        }
    }

    #[test]
    fn one_units_not_divisible_by_everything() {
        // some n <= p has no n-th root for a non-1 one-unit: the p-th root
        // of 1 + p fails (its p-th roots would generate a ramified ext)
        for p in [3u64, 5, 7] {
            let x = PAdicNumber::from_integer(p, 12, 1 + p as i64).unwrap();
            let mut obstructed = false;
            for n in 2..=(p as u32 + 1) {
                if let Ok(Err(_)) = x.nth_root(n) {
                    obstructed = true;
                    break;
                }
            }
            assert!(obstructed, "1 + {} should fail some n-th root", p);
        }
    }
}
