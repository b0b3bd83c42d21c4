//! Integer polynomials: arithmetic, resultants and discriminants,
//! factorization mod p with Hensel lifting to prime powers, complete
//! factorization over Z (Zassenhaus), Newton polygons, and parsing of the
//! `"x^8 - 15"` / coefficient-list input forms.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{big_mod_inv, big_valuation};
use crate::error::{Error, Result};
use crate::fp::FpPoly;

/// Dense integer polynomial, little-endian coefficients, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZPoly {
    pub coeffs: Vec<BigInt>,
}

impl ZPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        ZPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        ZPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        ZPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        ZPoly::new(vec![BigInt::one()])
    }

    pub fn x() -> Self {
        ZPoly::new(vec![BigInt::zero(), BigInt::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![BigInt::zero(); n];
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = self.coeff(i) + other.coeff(i);
        }
        ZPoly::new(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![BigInt::zero(); n];
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = self.coeff(i) - other.coeff(i);
        }
        ZPoly::new(out)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return ZPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ZPoly::new(out)
    }

    pub fn neg(&self) -> Self {
        ZPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return ZPoly::zero();
        }
        ZPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// Exact division by a monic divisor; None if it does not divide.
    pub fn div_exact_monic(&self, divisor: &Self) -> Option<Self> {
        assert!(divisor.is_monic());
        if self.is_zero() {
            return Some(ZPoly::zero());
        }
        if self.degree() < divisor.degree() {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let dq = self.degree() - divisor.degree();
        let mut quot = vec![BigInt::zero(); dq + 1];
        for k in (0..=dq).rev() {
            let q = rem[k + divisor.degree()].clone();
            if q.is_zero() {
                continue;
            }
            quot[k] = q.clone();
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &q * d;
            }
        }
        if rem.iter().all(|c| c.is_zero()) {
            Some(ZPoly::new(quot))
        } else {
            None
        }
    }

    /// Substitute `x -> x + a`.
    pub fn shift(&self, a: &BigInt) -> Self {
        let mut acc = ZPoly::zero();
        let xa = ZPoly::new(vec![a.clone(), BigInt::one()]);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&xa).add(&ZPoly::new(vec![c.clone()]));
        }
        acc
    }

    /// Reduce mod a machine prime.
    pub fn reduce_mod(&self, p: u64) -> FpPoly {
        let pb = BigInt::from(p);
        FpPoly::new(
            p,
            self.coeffs
                .iter()
                .map(|c| (((c % &pb) + &pb) % &pb).to_u64().unwrap())
                .collect(),
        )
    }

    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
        }
        g
    }

    /// Resultant with another polynomial, via the subresultant PRS.
    pub fn resultant(&self, other: &Self) -> BigInt {
        resultant(self, other)
    }

    /// Discriminant of a monic polynomial.
    pub fn discriminant(&self) -> BigInt {
        assert!(self.is_monic() && self.degree() >= 1);
        let n = self.degree();
        let res = resultant(self, &self.derivative());
        let sign = if (n * (n - 1) / 2) % 2 == 0 { 1 } else { -1 };
        res * BigInt::from(sign)
    }
}

impl std::fmt::Display for ZPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match i {
                0 => write!(f, "{}", mag)?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{}*", mag)?;
                    }
                    if i == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{}", i)?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Subresultant pseudo-remainder sequence resultant.
fn resultant(f: &ZPoly, g: &ZPoly) -> BigInt {
    if f.is_zero() || g.is_zero() {
        return BigInt::zero();
    }
    let (mut a, mut b) = (f.clone(), g.clone());
    let mut sign = BigInt::one();
    if a.degree() < b.degree() {
        if (a.degree() * b.degree()) % 2 == 1 {
            sign = -sign;
        }
        std::mem::swap(&mut a, &mut b);
    }
    let mut acc = BigInt::one();
    let mut den = BigInt::one();
    // plain pseudo-remainder chain with content stripping keeps sizes sane
    loop {
        if b.degree() == 0 {
            let db = a.degree();
            let res = b.leading().pow(db as u32);
            return sign * acc * res / den;
        }
        let da = a.degree();
        let db = b.degree();
        let delta = (da - db) as u32;
        let lb = b.leading();
        // prem(a,b) = lc(b)^(delta+1) * a mod b; the scaling is divided
        // back out of the accumulated product at the end
        let r = pseudo_rem(&a, &b);
        if r.is_zero() {
            return BigInt::zero();
        }
        if (da * db) % 2 == 1 {
            sign = -sign;
        }
        acc *= lb.pow((da - r.degree()) as u32);
        den *= lb.pow(((delta + 1) as usize * db) as u32);
        a = b;
        b = r;
    }
}

fn pseudo_rem(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let delta = a.degree() - b.degree();
    let lb = b.leading();
    let mut r = a.clone();
    for _ in 0..=delta {
        if r.degree() < b.degree() || r.is_zero() {
            r = r.scale_big(&lb);
            continue;
        }
        let k = r.degree() - b.degree();
        let top = r.leading();
        // r = lb * r - top * x^k * b
        let mut out = vec![BigInt::zero(); r.coeffs.len()];
        for (i, c) in r.coeffs.iter().enumerate() {
            out[i] = c * &lb;
        }
        for (j, c) in b.coeffs.iter().enumerate() {
            out[k + j] -= &top * c;
        }
        r = ZPoly::new(out);
    }
    r
}

impl ZPoly {
    fn scale_big(&self, c: &BigInt) -> Self {
        ZPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }
}

// ----------------------------------------------------------------------
// Polynomials with coefficients mod p^k (for Hensel lifting)
// ----------------------------------------------------------------------

/// Polynomial over Z/p^k, little-endian, reduced representatives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZkPoly {
    pub modulus: BigUint,
    pub coeffs: Vec<BigUint>,
}

impl ZkPoly {
    pub fn new(modulus: BigUint, mut coeffs: Vec<BigUint>) -> Self {
        for c in coeffs.iter_mut() {
            *c %= &modulus;
        }
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        ZkPoly { modulus, coeffs }
    }

    pub fn from_zpoly(f: &ZPoly, modulus: &BigUint) -> Self {
        let m = BigInt::from(modulus.clone());
        ZkPoly::new(
            modulus.clone(),
            f.coeffs
                .iter()
                .map(|c| (((c % &m) + &m) % &m).to_biguint().unwrap())
                .collect(),
        )
    }

    pub fn from_fp(f: &FpPoly, modulus: &BigUint) -> Self {
        ZkPoly::new(
            modulus.clone(),
            f.coeffs.iter().map(|&c| BigUint::from(c)).collect(),
        )
    }

    /// Lift representatives to the balanced range (-m/2, m/2].
    pub fn to_zpoly_balanced(&self) -> ZPoly {
        let m = BigInt::from(self.modulus.clone());
        let half = &m / 2;
        ZPoly::new(
            self.coeffs
                .iter()
                .map(|c| {
                    let c = BigInt::from(c.clone());
                    if c > half {
                        c - &m
                    } else {
                        c
                    }
                })
                .collect(),
        )
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn coeff(&self, i: usize) -> BigUint {
        self.coeffs.get(i).cloned().unwrap_or_else(BigUint::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let out = (0..n)
            .map(|i| (self.coeff(i) + other.coeff(i)) % &self.modulus)
            .collect();
        ZkPoly::new(self.modulus.clone(), out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let out = (0..n)
            .map(|i| {
                (&self.modulus + self.coeff(i) - (other.coeff(i) % &self.modulus)) % &self.modulus
            })
            .collect();
        ZkPoly::new(self.modulus.clone(), out)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return ZkPoly::new(self.modulus.clone(), vec![]);
        }
        let mut out = vec![BigUint::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = (&out[i + j] + a * b) % &self.modulus;
            }
        }
        ZkPoly::new(self.modulus.clone(), out)
    }

    /// Division with remainder by a polynomial whose leading coefficient
    /// is a unit mod p^k.
    pub fn divmod(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero());
        let lead_inv = big_mod_inv(divisor.coeffs.last().unwrap(), &self.modulus)
            .expect("divisor leading coefficient must be a unit");
        if self.degree() < divisor.degree() || self.is_zero() {
            return (ZkPoly::new(self.modulus.clone(), vec![]), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let dq = self.degree() - divisor.degree();
        let mut quot = vec![BigUint::zero(); dq + 1];
        for k in (0..=dq).rev() {
            let top = &rem[k + divisor.degree()] % &self.modulus;
            if top.is_zero() {
                continue;
            }
            let q = (&top * &lead_inv) % &self.modulus;
            quot[k] = q.clone();
            for (j, d) in divisor.coeffs.iter().enumerate() {
                let t = (&q * d) % &self.modulus;
                rem[k + j] = (&rem[k + j] + &self.modulus - t) % &self.modulus;
            }
        }
        (
            ZkPoly::new(self.modulus.clone(), quot),
            ZkPoly::new(self.modulus.clone(), rem),
        )
    }
}

// ----------------------------------------------------------------------
// Hensel lifting
// ----------------------------------------------------------------------

/// Lift a coprime factorization `f = g * h (mod p)` to `f = G * H (mod p^k)`,
/// with `G = g`, `H = h (mod p)`. All of f, g, h monic.
fn hensel_lift_pair(f: &ZPoly, g: &FpPoly, h: &FpPoly, p: u64, k: u32) -> (ZkPoly, ZkPoly) {
    // Bezout: s*g + t*h = 1 mod p
    let (s0, t0) = fp_bezout(g, h);
    let mut cur: u32 = 1;
    let m = BigUint::from(p);
    let mut gg = ZkPoly::from_fp(g, &m);
    let mut hh = ZkPoly::from_fp(h, &m);
    let mut ss = ZkPoly::from_fp(&s0, &m);
    let mut tt = ZkPoly::from_fp(&t0, &m);
    while cur < k {
        let next = (cur * 2).min(k.max(cur + 1));
        let m2 = BigUint::from(p).pow(next);
        let fm = ZkPoly::from_zpoly(f, &m2);
        let (g2, h2, s2, t2) = {
            let g = ZkPoly::new(m2.clone(), gg.coeffs.clone());
            let h = ZkPoly::new(m2.clone(), hh.coeffs.clone());
            let s = ZkPoly::new(m2.clone(), ss.coeffs.clone());
            let t = ZkPoly::new(m2.clone(), tt.coeffs.clone());
            // e = f - g h
            let e = fm.sub(&g.mul(&h));
            // q, r = divmod(s e, h)
            let (q, r) = s.mul(&e).divmod(&h);
            let g_star = g.add(&t.mul(&e)).add(&q.mul(&g));
            let h_star = h.add(&r);
            // correction of Bezout pair
            let b = s.mul(&g_star).add(&t.mul(&h_star)).sub(&ZkPoly::new(
                m2.clone(),
                vec![BigUint::one()],
            ));
            let (c, d) = s.mul(&b).divmod(&h_star);
            let s_star = s.sub(&d);
            let t_star = t.sub(&t.mul(&b)).sub(&c.mul(&g_star));
            (g_star, h_star, s_star, t_star)
        };
        gg = g2;
        hh = h2;
        ss = s2;
        tt = t2;

        cur = next;
    }
    let mk = BigUint::from(p).pow(k);
    (
        ZkPoly::new(mk.clone(), gg.coeffs),
        ZkPoly::new(mk, hh.coeffs),
    )
}

fn fp_bezout(g: &FpPoly, h: &FpPoly) -> (FpPoly, FpPoly) {
    // returns (s, t) with s g + t h = 1
    let p = g.p;
    let (mut r0, mut r1) = (g.clone(), h.clone());
    let (mut s0, mut s1) = (FpPoly::constant(p, 1), FpPoly::zero(p));
    let (mut t0, mut t1) = (FpPoly::zero(p), FpPoly::constant(p, 1));
    while !r1.is_zero() {
        let (q, r) = r0.divmod(&r1);
        let s = s0.sub(&q.mul(&s1));
        let t = t0.sub(&q.mul(&t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
        t0 = t1;
        t1 = t;
    }
    debug_assert_eq!(r0.degree(), 0);
    let inv = crate::arith::mod_inv(r0.leading(), p);
    (s0.scale(inv), t0.scale(inv))
}

/// Lift a pairwise-coprime monic factorization of monic `f` mod p to mod p^k.
pub fn hensel_lift_multi(f: &ZPoly, factors: &[FpPoly], p: u64, k: u32) -> Vec<ZkPoly> {
    assert!(!factors.is_empty());
    if factors.len() == 1 {
        let m = BigUint::from(p).pow(k);
        return vec![ZkPoly::from_zpoly(f, &m)];
    }
    // split the list in two halves and recurse on the factor tree
    let mid = factors.len() / 2;
    let left: FpPoly = factors[..mid]
        .iter()
        .fold(FpPoly::constant(p, 1), |acc, g| acc.mul(g));
    let right: FpPoly = factors[mid..]
        .iter()
        .fold(FpPoly::constant(p, 1), |acc, g| acc.mul(g));
    let (lf, rf) = hensel_lift_pair(f, &left, &right, p, k);
    let lz = lf.to_zpoly_balanced();
    let rz = rf.to_zpoly_balanced();
    let mut out = hensel_lift_multi(&lz, &factors[..mid], p, k);
    out.extend(hensel_lift_multi(&rz, &factors[mid..], p, k));
    out
}

// ----------------------------------------------------------------------
// Factorization over Z (monic input), Zassenhaus
// ----------------------------------------------------------------------

/// Complete factorization of a monic squarefree-or-not integer polynomial
/// into monic irreducibles with multiplicities.
pub fn factor_over_z(f: &ZPoly) -> Result<Vec<(ZPoly, u32)>> {
    if !f.is_monic() {
        return Err(Error::InvalidPolynomial("factorization needs monic input".into()));
    }
    if f.degree() == 0 {
        return Ok(vec![]);
    }
    // factor the squarefree part, then read multiplicities off f
    let sqf = squarefree_part(f);
    let irreducibles = factor_squarefree_z(&sqf)?;
    let mut seen: Vec<(ZPoly, u32)> = vec![];
    for g in irreducibles {
        if seen.iter().any(|(h, _)| *h == g) {
            continue;
        }
        let mut e = 0u32;
        let mut cur = f.clone();
        while let Some(q) = cur.div_exact_monic(&g) {
            e += 1;
            cur = q;
        }
        seen.push((g, e));
    }
    seen.sort_by(|a, b| (a.0.degree(), format!("{:?}", a.0.coeffs)).cmp(&(b.0.degree(), format!("{:?}", b.0.coeffs))));
    Ok(seen)
}

fn squarefree_part(f: &ZPoly) -> ZPoly {
    // f / gcd(f, f') computed via modular gcd: use rational gcd through
    // subresultants: cheap desk-scale route is gcd via several primes.
    // Simpler: compute gcd over Q by pseudo-division and primitive parts.
    let g = zpoly_gcd(f, &f.derivative());
    f.div_exact_monic(&monicize(&g)).unwrap_or_else(|| f.clone())
}

fn monicize(f: &ZPoly) -> ZPoly {
    // for gcds of monic polynomials the gcd can be taken monic over Z
    if f.is_zero() || f.is_monic() {
        return f.clone();
    }
    let lead = f.leading();
    let coeffs: Vec<BigInt> = f.coeffs.iter().map(|c| c / &lead).collect();
    let cand = ZPoly::new(coeffs);
    if cand.is_monic() {
        cand
    } else {
        f.clone()
    }
}

fn zpoly_gcd(a: &ZPoly, b: &ZPoly) -> ZPoly {
    if b.is_zero() {
        return a.clone();
    }
    if a.is_zero() {
        return b.clone();
    }
    let mut x = primitive(a);
    let mut y = primitive(b);
    while !y.is_zero() {
        let r = primitive(&pseudo_rem(&x, &y));
        x = y;
        y = r;
    }
    x
}

fn primitive(f: &ZPoly) -> ZPoly {
    if f.is_zero() {
        return f.clone();
    }
    let c = f.content();
    if c.is_zero() || c.is_one() {
        return f.clone();
    }
    let mut g = ZPoly::new(f.coeffs.iter().map(|a| a / &c).collect());
    if g.leading().is_negative() {
        g = g.neg();
    }
    g
}

/// Zassenhaus factorization of a monic squarefree integer polynomial.
fn factor_squarefree_z(f: &ZPoly) -> Result<Vec<ZPoly>> {
    let n = f.degree();
    if n <= 1 {
        return Ok(vec![f.clone()]);
    }
    let disc = f.discriminant();
    if disc.is_zero() {
        return Err(Error::InvalidPolynomial("not squarefree".into()));
    }
    // choose a good prime minimizing the modular factor count
    let mut best: Option<(u64, Vec<FpPoly>)> = None;
    let mut tried = 0;
    let mut p = 2u64;
    while tried < 8 {
        if crate::arith::is_prime(p) && !(&disc % BigInt::from(p)).is_zero() {
            let fp = f.reduce_mod(p);
            let facs: Vec<FpPoly> = fp.factor().into_iter().map(|(g, _)| g).collect();
            if facs.len() == 1 {
                return Ok(vec![f.clone()]);
            }
            if best.as_ref().map(|(_, b)| facs.len() < b.len()).unwrap_or(true) {
                best = Some((p, facs));
            }
            tried += 1;
        }
        p += 1;
        if p > 10_000 {
            break;
        }
    }
    let (p, modular) = best.ok_or_else(|| {
        Error::InvalidPolynomial("no good prime found for factorization".into())
    })?;
    // Mignotte-style bound on factor coefficients of monic f
    let norm: BigInt = f.coeffs.iter().map(|c| c.abs()).sum();
    let bound = norm * BigInt::from(2).pow(n as u32 + 1);
    let mut k = 1u32;
    let mut pk = BigInt::from(p);
    while pk < bound {
        pk *= BigInt::from(p);
        k += 1;
    }
    let lifted = hensel_lift_multi(f, &modular, p, k);
    // subset recombination
    let mut remaining: Vec<ZkPoly> = lifted;
    let mut rest = f.clone();
    let mut out = vec![];
    let mut card = 1usize;
    'outer: while 2 * card <= remaining.len() {
        let idxs: Vec<usize> = (0..remaining.len()).collect();
        for combo in combinations(&idxs, card) {
            let m = remaining[0].modulus.clone();
            let mut prod = ZkPoly::new(m, vec![BigUint::one()]);
            for &i in &combo {
                prod = prod.mul(&remaining[i]);
            }
            let cand = prod.to_zpoly_balanced();
            if let Some(q) = rest.div_exact_monic(&cand) {
                out.push(cand);
                rest = q;
                let keep: Vec<ZkPoly> = remaining
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !combo.contains(i))
                    .map(|(_, g)| g.clone())
                    .collect();
                remaining = keep;
                continue 'outer;
            }
        }
        card += 1;
    }
    if rest.degree() > 0 {
        out.push(rest);
    }
    Ok(out)
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![];
    let n = items.len();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Is this monic integer polynomial irreducible over Q?
pub fn is_irreducible_over_q(f: &ZPoly) -> Result<bool> {
    if f.degree() == 0 {
        return Ok(false);
    }
    if f.degree() == 1 {
        return Ok(true);
    }
    if f.coeff(0).is_zero() {
        return Ok(false); // divisible by x
    }
    // fast path: irreducible mod some small prime not dividing disc
    let disc = f.discriminant();
    if disc.is_zero() {
        return Ok(false);
    }
    let mut checked = 0;
    for p in crate::arith::primes_up_to(200) {
        if (&disc % BigInt::from(p)).is_zero() {
            continue;
        }
        if f.reduce_mod(p).is_irreducible() {
            return Ok(true);
        }
        checked += 1;
        if checked >= 12 {
            break;
        }
    }
    // complete decision
    let facs = factor_over_z(f)?;
    Ok(facs.len() == 1 && facs[0].1 == 1)
}

// ----------------------------------------------------------------------
// Newton polygons
// ----------------------------------------------------------------------

/// A lower-hull segment of the Newton polygon of a monic polynomial,
/// with respect to a prime p. The roots attached to this segment have
/// valuation `h/e` (in lowest terms, e > 0), and there are `length` of them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolygonSegment {
    pub start: usize,
    pub end: usize,
    /// numerator of the root valuation (can be 0 for unit roots)
    pub h: i64,
    /// denominator of the root valuation
    pub e: u64,
    pub length: usize,
    /// residual polynomial over F_p attached to the segment
    pub residual: FpPoly,
}

/// Newton polygon (lower convex hull) of a monic integer polynomial at p.
/// Zero coefficients take valuation +infinity.
pub fn newton_polygon(f: &ZPoly, p: u64) -> Vec<PolygonSegment> {
    assert!(f.is_monic() && f.degree() >= 1);
    let n = f.degree();
    let pts: Vec<Option<i64>> = (0..=n)
        .map(|i| {
            let c = f.coeff(i);
            if c.is_zero() {
                None
            } else {
                Some(big_valuation(&c, p) as i64)
            }
        })
        .collect();
    // lower hull from the leftmost finite point to (n, 0)
    let mut hull: Vec<(usize, i64)> = vec![];
    for (i, v) in pts.iter().enumerate() {
        let v = match v {
            Some(v) => *v,
            None => continue,
        };
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            // keep hull lower-convex: slope from previous must not exceed next
            let lhs = (y2 - y1) as i128 * (i - x1) as i128;
            let rhs = (v - y1) as i128 * (x2 - x1) as i128;
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push((i, v));
    }
    let mut segments = vec![];
    for w in hull.windows(2) {
        let (x1, y1) = w[0];
        let (x2, y2) = w[1];
        let dy = y1 - y2; // positive slope h/e means roots of valuation h/e
        let dx = (x2 - x1) as i64;
        let g = gcd_i64(dy.abs().max(1), dx);
        let (h, e) = if dy == 0 {
            (0, 1u64)
        } else {
            (dy / g, (dx / g) as u64)
        };
        // residual polynomial from the lattice points on this segment
        let step = if dy == 0 { 1 } else { (dx / g) as usize };
        let rdeg = (x2 - x1) / step;
        let mut rc = vec![0u64; rdeg + 1];
        for (j, slot) in rc.iter_mut().enumerate() {
            let i = x1 + j * step;
            let expect_v = y1 - (h * j as i64);
            if let Some(v) = pts[i] {
                if v == expect_v {
                    let c = f.coeff(i);
                    let unit = &c / BigInt::from(p).pow(v as u32);
                    let pb = BigInt::from(p);
                    *slot = (((&unit % &pb) + &pb) % &pb).to_u64().unwrap();
                }
            }
        }
        segments.push(PolygonSegment {
            start: x1,
            end: x2,
            h,
            e,
            length: x2 - x1,
            residual: FpPoly::new(p, rc),
        });
    }
    segments
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a.max(1)
}

// ----------------------------------------------------------------------
// Parsing
// ----------------------------------------------------------------------

/// Parse `"x^8 - 15"`, `"x^2+1"`, or a JSON-ish coefficient list
/// `"[−15,0,1]"` (constant term first).
pub fn parse_poly(input: &str) -> Result<ZPoly> {
    let s = input.trim();
    if s.starts_with('[') {
        let inner = s
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("bad coefficient list: {}", input)))?;
        let mut coeffs = vec![];
        for part in inner.split(',') {
            let part = part.trim().replace('\u{2212}', "-");
            if part.is_empty() {
                continue;
            }
            let c: BigInt = part
                .parse()
                .map_err(|_| Error::Parse(format!("bad coefficient: {}", part)))?;
            coeffs.push(c);
        }
        if coeffs.is_empty() {
            return Err(Error::Parse("empty coefficient list".into()));
        }
        return Ok(ZPoly::new(coeffs));
    }
    parse_poly_text(s)
}

fn parse_poly_text(s: &str) -> Result<ZPoly> {
    let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let cleaned = cleaned.replace('\u{2212}', "-");
    if cleaned.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    // split into signed terms
    let mut terms: Vec<String> = vec![];
    let mut cur = String::new();
    for (i, ch) in cleaned.chars().enumerate() {
        if (ch == '+' || ch == '-') && i > 0 && !cur.ends_with('^') {
            terms.push(cur.clone());
            cur = String::new();
        }
        cur.push(ch);
    }
    terms.push(cur);
    let mut acc: Vec<(usize, BigInt)> = vec![];
    for t in terms {
        let (sign, body) = if let Some(b) = t.strip_prefix('-') {
            (-1, b.to_string())
        } else if let Some(b) = t.strip_prefix('+') {
            (1, b.to_string())
        } else {
            (1, t)
        };
        if body.is_empty() {
            return Err(Error::Parse(format!("dangling sign in: {}", s)));
        }
        let (coeff_str, exp) = if let Some(pos) = body.find('x') {
            let c = &body[..pos];
            let rest = &body[pos + 1..];
            let e = if rest.is_empty() {
                1usize
            } else {
                let estr = rest
                    .strip_prefix('^')
                    .ok_or_else(|| Error::Parse(format!("bad term: {}", body)))?;
                estr.parse()
                    .map_err(|_| Error::Parse(format!("bad exponent: {}", estr)))?
            };
            let cs = c.trim_end_matches('*');
            (if cs.is_empty() { "1".to_string() } else { cs.to_string() }, e)
        } else {
            (body.clone(), 0usize)
        };
        let coeff: BigInt = coeff_str
            .parse()
            .map_err(|_| Error::Parse(format!("bad coefficient: {}", coeff_str)))?;
        acc.push((exp, coeff * BigInt::from(sign)));
    }
    let deg = acc.iter().map(|(e, _)| *e).max().unwrap_or(0);
    let mut coeffs = vec![BigInt::zero(); deg + 1];
    for (e, c) in acc {
        coeffs[e] += c;
    }
    Ok(ZPoly::new(coeffs))
}
