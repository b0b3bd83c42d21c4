//! Dense polynomial arithmetic and factorization over prime fields, and
//! arithmetic in the residue fields `F_{p^f}` presented as `F_p[x]/(g)`.
//!
//! Factorization is squarefree decomposition, then distinct-degree, then
//! Cantor-Zassenhaus equal-degree splitting (trace construction at p = 2).
//! The splitting uses a fixed-seed xorshift generator and all factor lists
//! are sorted canonically, so results are deterministic.

use crate::arith::{mod_inv, mod_mul};

/// Polynomial over F_p, little-endian coefficients, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct FpPoly {
    pub p: u64,
    pub coeffs: Vec<u64>,
}

impl FpPoly {
    pub fn new(p: u64, mut coeffs: Vec<u64>) -> Self {
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FpPoly { p, coeffs }
    }

    pub fn zero(p: u64) -> Self {
        FpPoly { p, coeffs: vec![] }
    }

    pub fn constant(p: u64, c: u64) -> Self {
        FpPoly::new(p, vec![c])
    }

    pub fn x(p: u64) -> Self {
        FpPoly::new(p, vec![0, 1])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> u64 {
        *self.coeffs.last().unwrap_or(&0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    pub fn eval(&self, x: u64) -> u64 {
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = (mod_mul(acc, x, self.p) + c) % self.p;
        }
        acc
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0u64; n];
        for (i, slot) in out.iter_mut().enumerate() {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = other.coeffs.get(i).copied().unwrap_or(0);
            *slot = (a + b) % self.p;
        }
        FpPoly::new(self.p, out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0u64; n];
        for (i, slot) in out.iter_mut().enumerate() {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = other.coeffs.get(i).copied().unwrap_or(0);
            *slot = (a + self.p - b) % self.p;
        }
        FpPoly::new(self.p, out)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return FpPoly::zero(self.p);
        }
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + mod_mul(a, b, self.p)) % self.p;
            }
        }
        FpPoly::new(self.p, out)
    }

    pub fn scale(&self, c: u64) -> Self {
        FpPoly::new(
            self.p,
            self.coeffs.iter().map(|&a| mod_mul(a, c, self.p)).collect(),
        )
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        self.scale(mod_inv(self.leading(), self.p))
    }

    /// Euclidean division: (quotient, remainder).
    pub fn divmod(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let p = self.p;
        if self.degree() < divisor.degree() || self.is_zero() {
            return (FpPoly::zero(p), self.clone());
        }
        let lead_inv = mod_inv(divisor.leading(), p);
        let mut rem = self.coeffs.clone();
        let dq = self.degree() - divisor.degree();
        let mut quot = vec![0u64; dq + 1];
        for k in (0..=dq).rev() {
            let top = rem[k + divisor.degree()];
            if top == 0 {
                continue;
            }
            let q = mod_mul(top, lead_inv, p);
            quot[k] = q;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                let idx = k + j;
                rem[idx] = (rem[idx] + p - mod_mul(q, d, p)) % p;
            }
        }
        (FpPoly::new(p, quot), FpPoly::new(p, rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.divmod(divisor).1
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return FpPoly::zero(self.p);
        }
        let out: Vec<u64> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mod_mul(i as u64 % self.p, c, self.p))
            .collect();
        FpPoly::new(self.p, out)
    }

    /// self^e mod m.
    pub fn pow_mod(&self, mut e: u64, m: &Self) -> Self {
        let mut base = self.rem(m);
        let mut acc = FpPoly::constant(self.p, 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    /// self^(p^k) mod m, by repeated p-th powering.
    fn frobenius_power(&self, k: u32, m: &Self) -> Self {
        let mut acc = self.rem(m);
        for _ in 0..k {
            acc = acc.pow_mod(self.p, m);
        }
        acc
    }

    /// Roots in F_p by direct scan (p is desk-scale).
    pub fn roots(&self) -> Vec<u64> {
        (0..self.p).filter(|&a| self.eval(a) == 0).collect()
    }

    /// Squarefree part decomposition: returns list of (factor, multiplicity)
    /// with factors squarefree and pairwise coprime.
    fn squarefree_decomposition(&self) -> Vec<(FpPoly, u32)> {
        let p = self.p;
        let f = self.monic();
        if f.degree() == 0 {
            return vec![];
        }
        let df = f.derivative();
        if df.is_zero() {
            // f = g(x^p) = g(x)^p in F_p[x]
            let mut g_coeffs = vec![];
            let mut i = 0;
            while i < f.coeffs.len() {
                g_coeffs.push(f.coeffs[i]);
                i += p as usize;
            }
            let g = FpPoly::new(p, g_coeffs);
            return g
                .squarefree_decomposition()
                .into_iter()
                .map(|(h, m)| (h, m * p as u32))
                .collect();
        }
        // Musser's algorithm; the leftover after the loop is a p-th power
        let mut out: Vec<(FpPoly, u32)> = vec![];
        let mut c = f.gcd(&df);
        let mut w = f.divmod(&c).0;
        let mut mult = 1u32;
        while w.degree() > 0 {
            let y = w.gcd(&c);
            let exact = w.divmod(&y).0;
            if exact.degree() > 0 {
                out.push((exact.monic(), mult));
            }
            w = y;
            c = c.divmod(&w).0;
            mult += 1;
        }
        if c.degree() > 0 {
            for (h, m) in c.squarefree_decomposition() {
                merge_factor(&mut out, h, m);
            }
        }
        out
    }

    /// Full factorization into monic irreducibles with multiplicities,
    /// sorted canonically (degree, then coefficients).
    pub fn factor(&self) -> Vec<(FpPoly, u32)> {
        let mut out: Vec<(FpPoly, u32)> = vec![];
        for (sqf, mult) in self.squarefree_decomposition() {
            for irr in factor_squarefree(&sqf) {
                merge_factor(&mut out, irr, mult);
            }
        }
        out.sort_by(|a, b| (a.0.degree(), &a.0.coeffs).cmp(&(b.0.degree(), &b.0.coeffs)));
        out
    }

    pub fn is_irreducible(&self) -> bool {
        if self.degree() == 0 {
            return false;
        }
        if self.degree() == 1 {
            return true;
        }
        let fs = self.factor();
        fs.len() == 1 && fs[0].1 == 1 && fs[0].0.degree() == self.degree()
    }
}

fn merge_factor(out: &mut Vec<(FpPoly, u32)>, f: FpPoly, m: u32) {
    for entry in out.iter_mut() {
        if entry.0 == f {
            entry.1 += m;
            return;
        }
    }
    out.push((f, m));
}

/// Distinct-degree + equal-degree factorization of a squarefree monic poly.
fn factor_squarefree(f: &FpPoly) -> Vec<FpPoly> {
    let p = f.p;
    let mut out = vec![];
    let mut rest = f.monic();
    let x = FpPoly::x(p);
    let mut h = x.clone();
    let mut d = 1u32;
    while rest.degree() >= 2 * d as usize {
        h = h.frobenius_power(1, &rest);
        let g = h.sub(&x).gcd(&rest);
        if g.degree() > 0 {
            split_equal_degree(&g, d as usize, &mut out);
            rest = rest.divmod(&g).0;
            h = h.rem(&rest);
        }
        d += 1;
    }
    if rest.degree() > 0 {
        out.push(rest.monic());
    }
    out
}

/// Cantor-Zassenhaus splitting of a product of irreducibles of degree d.
fn split_equal_degree(f: &FpPoly, d: usize, out: &mut Vec<FpPoly>) {
    if f.degree() == d {
        out.push(f.monic());
        return;
    }
    let p = f.p;
    let mut rng = Xorshift::new(0x5DEECE66D ^ (f.coeffs.len() as u64) << 16 ^ p);
    loop {
        // random polynomial of degree < deg f
        let coeffs: Vec<u64> = (0..f.degree()).map(|_| rng.next() % p).collect();
        let r = FpPoly::new(p, coeffs);
        if r.degree() == 0 && p > 2 {
            continue;
        }
        let g = if p == 2 {
            // trace map sum r^(2^i) over the degree
            let mut t = FpPoly::zero(2);
            let mut acc = r.rem(f);
            for _ in 0..d {
                t = t.add(&acc);
                acc = acc.mul(&acc).rem(f);
            }
            t.gcd(f)
        } else {
            // r^((p^d - 1)/2) - 1
            let mut e = FpPoly::constant(p, 1);
            // compute r^((p^d-1)/2) mod f via exponent by squaring digits of the big exponent
            // (p^d - 1)/2 fits in u128 for desk-scale inputs
            let exp: u128 = (pow_u128(p as u128, d as u32) - 1) / 2;
            let mut base = r.rem(f);
            let mut ex = exp;
            while ex > 0 {
                if ex & 1 == 1 {
                    e = e.mul(&base).rem(f);
                }
                base = base.mul(&base).rem(f);
                ex >>= 1;
            }
            e.sub(&FpPoly::constant(p, 1)).gcd(f)
        };
        if g.degree() > 0 && g.degree() < f.degree() {
            split_equal_degree(&g, d, out);
            split_equal_degree(&f.divmod(&g).0, d, out);
            return;
        }
    }
}

fn pow_u128(b: u128, e: u32) -> u128 {
    let mut acc = 1u128;
    for _ in 0..e {
        acc *= b;
    }
    acc
}

struct Xorshift(u64);

impl Xorshift {
    fn new(seed: u64) -> Self {
        Xorshift(seed | 1)
    }

    fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }
}

// ----------------------------------------------------------------------
// Residue fields F_{p^f} = F_p[x]/(g)
// ----------------------------------------------------------------------

/// The field F_{p^f} presented by a monic irreducible g over F_p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueField {
    pub p: u64,
    pub modulus: FpPoly,
}

/// Element of a residue field: reduced polynomial.
pub type FqElem = FpPoly;

impl ResidueField {
    pub fn new(p: u64, modulus: FpPoly) -> Self {
        debug_assert!(modulus.is_monic());
        ResidueField { p, modulus }
    }

    pub fn prime_field(p: u64) -> Self {
        ResidueField {
            p,
            modulus: FpPoly::x(p),
        }
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree()
    }

    /// Field size p^f, None on overflow.
    pub fn order(&self) -> Option<u64> {
        let mut q: u64 = 1;
        for _ in 0..self.degree() {
            q = q.checked_mul(self.p)?;
        }
        Some(q)
    }

    pub fn zero(&self) -> FqElem {
        FpPoly::zero(self.p)
    }

    pub fn one(&self) -> FqElem {
        FpPoly::constant(self.p, 1)
    }

    pub fn from_u64(&self, c: u64) -> FqElem {
        FpPoly::constant(self.p, c % self.p)
    }

    pub fn reduce(&self, x: &FpPoly) -> FqElem {
        x.rem(&self.modulus)
    }

    pub fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        a.add(b)
    }

    pub fn sub(&self, a: &FqElem, b: &FqElem) -> FqElem {
        a.sub(b)
    }

    pub fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        a.mul(b).rem(&self.modulus)
    }

    pub fn pow(&self, a: &FqElem, e: u64) -> FqElem {
        a.pow_mod(e, &self.modulus)
    }

    pub fn inv(&self, a: &FqElem) -> Option<FqElem> {
        if a.is_zero() {
            return None;
        }
        // extended Euclid in F_p[x]
        let (mut r0, mut r1) = (self.modulus.clone(), a.rem(&self.modulus));
        let (mut t0, mut t1) = (FpPoly::zero(self.p), FpPoly::constant(self.p, 1));
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1);
            let t = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            t0 = t1;
            t1 = t;
        }
        if r0.degree() != 0 {
            return None;
        }
        Some(t0.scale(mod_inv(r0.leading(), self.p)).rem(&self.modulus))
    }

    /// Iterate all elements (desk-scale orders only).
    pub fn elements(&self) -> impl Iterator<Item = FqElem> + '_ {
        let q = self.order().expect("field too large to enumerate");
        (0..q).map(move |idx| {
            let mut digits = vec![];
            let mut i = idx;
            for _ in 0..self.degree() {
                digits.push(i % self.p);
                i /= self.p;
            }
            FpPoly::new(self.p, digits)
        })
    }

    /// A root of a supplied F_p-polynomial inside this field, if any.
    pub fn root_of(&self, g: &FpPoly) -> Option<FqElem> {
        self.elements().find(|e| self.eval_poly(g, e).is_zero())
    }

    /// Evaluate an F_p[x] polynomial at a field element.
    pub fn eval_poly(&self, g: &FpPoly, x: &FqElem) -> FqElem {
        let mut acc = self.zero();
        for &c in g.coeffs.iter().rev() {
            acc = self.add(&self.mul(&acc, x), &self.from_u64(c));
        }
        acc
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, a: &FqElem) -> u64 {
        let q = self.order().expect("field too large");
        let group = q - 1;
        let mut ord = group;
        let mut m = group;
        let mut d = 2;
        // factor the group order and strip unnecessary prime powers
        while d * d <= m {
            if m % d == 0 {
                while m % d == 0 {
                    m /= d;
                }
                while ord % d == 0 && self.pow(a, ord / d) == self.one() {
                    ord /= d;
                }
            }
            d += 1;
        }
        if m > 1 && ord % m == 0 && self.pow(a, ord / m) == self.one() {
            ord /= m;
        }
        ord
    }
}
