//! Finite extensions of `Q_p` as unramified∘Eisenstein towers.
//!
//! A field `F` is presented by a monic integer polynomial `g` of degree f,
//! irreducible mod p (the unramified part, with root ω generating the
//! residue field), and an Eisenstein polynomial `E` of degree e over that
//! unramified subfield (with root π, the uniformizer). Elements are
//! coordinate vectors over the `Z_p`-basis `π^i ω^j` (0 ≤ i < e, 0 ≤ j < f),
//! which is a basis of the valuation ring, so the extension valuation of an
//! element reads directly off its coordinates:
//! `v_F(x) = min (e * v_p(c_ij) + i)`, normalized with `v_F(π) = 1`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::arith::{binomial, is_prime};
use crate::error::{Error, Result};
use crate::fp::{FpPoly, FqElem, ResidueField};
use crate::matrix::solve_padic;
use crate::padic::{AbsPrec, PAdicNumber, Valuation};
use crate::zpoly::ZPoly;

/// Element of the unramified subfield: ω-coordinates, length f.
pub type UCoeff = Vec<PAdicNumber>;

/// A finite extension of `Q_p` as an unramified∘Eisenstein tower.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalField {
    p: u64,
    f: u32,
    e: u32,
    unramified_poly: ZPoly,
    /// Lower coefficients `E_0 .. E_{e-1}` of the monic Eisenstein
    /// polynomial, each an element of the unramified subfield.
    eisenstein: Vec<UCoeff>,
    precision: u32,
}

/// Element of a [`LocalField`]: coordinates over the power basis `π^i ω^j`,
/// stored at index `i * f + j`. Arithmetic goes through the parent field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalFieldElement {
    pub coords: Vec<PAdicNumber>,
}

/// The abstract unit group `O* ≅ k* × Z_p^{ef} × μ_{p^∞}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitGroupDescription {
    /// |k*| = p^f - 1
    pub cyclic_prime_to_p_order: u64,
    /// Z_p-rank of the one-unit group = e*f
    pub free_rank: u32,
    /// |μ_{p^∞}(F)| as a p-power integer
    pub mu_p_power_order: u64,
}

/// Verdict of the tame isomorphism test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IsomorphismVerdict {
    Isomorphic,
    NonIsomorphic,
    /// p divides e: wildly ramified comparison is refused, never guessed.
    Unsupported,
}

impl LocalField {
    // ------------------------------------------------------------------
    // Construction
    // ------------------------------------------------------------------

    /// The base field `Q_p` itself (trivial tower, π = p).
    pub fn qp(p: u64, precision: u32) -> Result<Self> {
        LocalField::new(
            p,
            ZPoly::x(),
            vec![vec![PAdicNumber::from_integer(p, precision, -(p as i64))?]],
            precision,
        )
    }

    /// The unramified extension of degree f, presented by the
    /// lexicographically smallest monic irreducible polynomial mod p.
    pub fn unramified(p: u64, f: u32, precision: u32) -> Result<Self> {
        let g = smallest_irreducible(p, f)?;
        let mut e0 = vec![PAdicNumber::from_integer(p, precision, -(p as i64))?];
        e0.extend(std::iter::repeat(PAdicNumber::zero(p)).take(f as usize - 1));
        LocalField::new(p, g, vec![e0], precision)
    }

    /// A totally ramified extension of `Q_p` cut out by an integer
    /// Eisenstein polynomial.
    pub fn eisenstein_over_qp(p: u64, eis: &ZPoly, precision: u32) -> Result<Self> {
        if !eis.is_monic() || eis.degree() < 1 {
            return Err(Error::InvalidPolynomial(
                "Eisenstein polynomial must be monic of degree >= 1".into(),
            ));
        }
        let coeffs: Vec<UCoeff> = (0..eis.degree())
            .map(|i| Ok(vec![PAdicNumber::from_integer(p, precision, eis.coeff(i))?]))
            .collect::<Result<_>>()?;
        LocalField::new(p, ZPoly::x(), coeffs, precision)
    }

    /// General tower constructor; verifies irreducibility mod p of the
    /// unramified polynomial and the Eisenstein condition.
    pub fn new(
        p: u64,
        unramified_poly: ZPoly,
        eisenstein: Vec<UCoeff>,
        precision: u32,
    ) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if !unramified_poly.is_monic() || unramified_poly.degree() < 1 {
            return Err(Error::InvalidPolynomial(
                "unramified polynomial must be monic of degree >= 1".into(),
            ));
        }
        let f = unramified_poly.degree() as u32;
        if !unramified_poly.reduce_mod(p).is_irreducible() {
            return Err(Error::InvalidPolynomial(format!(
                "{} is not irreducible mod {}",
                unramified_poly, p
            )));
        }
        let e = eisenstein.len() as u32;
        for (i, c) in eisenstein.iter().enumerate() {
            if c.len() != f as usize {
                return Err(Error::InvalidPolynomial(format!(
                    "Eisenstein coefficient {} has {} coordinates, expected {}",
                    i,
                    c.len(),
                    f
                )));
            }
            let v = ucoeff_valuation(c);
            if i == 0 {
                if v != Valuation::Finite(1) {
                    return Err(Error::InvalidPolynomial(format!(
                        "Eisenstein constant term must have valuation exactly 1, got {}",
                        v
                    )));
                }
            } else if v < Valuation::Finite(1) {
                return Err(Error::InvalidPolynomial(format!(
                    "Eisenstein coefficient {} must have positive valuation",
                    i
                )));
            }
        }
        Ok(LocalField {
            p,
            f,
            e,
            unramified_poly,
            eisenstein,
            precision,
        })
    }

    // ------------------------------------------------------------------
    // Invariants
    // ------------------------------------------------------------------

    pub fn prime(&self) -> u64 {
        self.p
    }

    /// (p, e, f)
    pub fn invariants(&self) -> (u64, u32, u32) {
        (self.p, self.e, self.f)
    }

    pub fn ramification_index(&self) -> u32 {
        self.e
    }

    pub fn residue_degree(&self) -> u32 {
        self.f
    }

    /// [F : Q_p] = e * f
    pub fn degree(&self) -> u32 {
        self.e * self.f
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn unramified_poly(&self) -> &ZPoly {
        &self.unramified_poly
    }

    pub fn eisenstein_coeffs(&self) -> &[UCoeff] {
        &self.eisenstein
    }

    pub fn residue_field(&self) -> ResidueField {
        ResidueField::new(self.p, self.unramified_poly.reduce_mod(self.p))
    }

    // ------------------------------------------------------------------
    // Elements
    // ------------------------------------------------------------------

    fn n(&self) -> usize {
        (self.e * self.f) as usize
    }

    pub fn zero(&self) -> LocalFieldElement {
        LocalFieldElement {
            coords: vec![PAdicNumber::zero(self.p); self.n()],
        }
    }

    pub fn one(&self) -> LocalFieldElement {
        let mut z = self.zero();
        z.coords[0] = PAdicNumber::one(self.p, self.precision);
        z
    }

    pub fn from_padic(&self, x: &PAdicNumber) -> LocalFieldElement {
        let mut z = self.zero();
        z.coords[0] = x.clone();
        z
    }

    pub fn from_integer(&self, k: impl Into<BigInt>) -> LocalFieldElement {
        self.from_padic(
            &PAdicNumber::from_integer(self.p, self.precision, k).expect("valid prime"),
        )
    }

    pub fn from_coords(&self, coords: Vec<PAdicNumber>) -> Result<LocalFieldElement> {
        if coords.len() != self.n() {
            return Err(Error::DomainViolation(format!(
                "expected {} coordinates, got {}",
                self.n(),
                coords.len()
            )));
        }
        Ok(LocalFieldElement { coords })
    }

    /// The uniformizer π.
    pub fn pi(&self) -> LocalFieldElement {
        if self.e == 1 {
            // degree-1 Eisenstein part: π = -E_0
            let mut c: Vec<PAdicNumber> = self.eisenstein[0].iter().map(|x| x.neg()).collect();
            c.resize(self.n(), PAdicNumber::zero(self.p));
            return LocalFieldElement { coords: c };
        }
        let mut z = self.zero();
        z.coords[self.f as usize] = PAdicNumber::one(self.p, self.precision);
        z
    }

    /// The residue generator ω (root of the unramified polynomial).
    pub fn omega(&self) -> LocalFieldElement {
        let mut z = self.zero();
        if self.f > 1 {
            z.coords[1] = PAdicNumber::one(self.p, self.precision);
        } else {
            let root = (-self.unramified_poly.coeff(0)).to_i64().unwrap_or(0);
            z.coords[0] =
                PAdicNumber::from_integer(self.p, self.precision, root).expect("valid prime");
        }
        z
    }

    pub fn is_zero_elt(&self, x: &LocalFieldElement) -> bool {
        x.coords.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, a: &LocalFieldElement, b: &LocalFieldElement) -> LocalFieldElement {
        LocalFieldElement {
            coords: a
                .coords
                .iter()
                .zip(&b.coords)
                .map(|(x, y)| x.add(y).expect("same prime"))
                .collect(),
        }
    }

    pub fn sub(&self, a: &LocalFieldElement, b: &LocalFieldElement) -> LocalFieldElement {
        LocalFieldElement {
            coords: a
                .coords
                .iter()
                .zip(&b.coords)
                .map(|(x, y)| x.sub(y).expect("same prime"))
                .collect(),
        }
    }

    pub fn neg(&self, a: &LocalFieldElement) -> LocalFieldElement {
        LocalFieldElement {
            coords: a.coords.iter().map(|x| x.neg()).collect(),
        }
    }

    pub fn scalar_mul(&self, c: &PAdicNumber, a: &LocalFieldElement) -> LocalFieldElement {
        LocalFieldElement {
            coords: a
                .coords
                .iter()
                .map(|x| x.mul(c).expect("same prime"))
                .collect(),
        }
    }

    /// Product, reducing modulo both defining polynomials.
    pub fn mul(&self, a: &LocalFieldElement, b: &LocalFieldElement) -> LocalFieldElement {
        let e = self.e as usize;
        let f = self.f as usize;
        let mut conv: Vec<Vec<PAdicNumber>> =
            vec![vec![PAdicNumber::zero(self.p); 2 * f - 1]; 2 * e - 1];
        for i1 in 0..e {
            for j1 in 0..f {
                let x = &a.coords[i1 * f + j1];
                if x.is_zero() && x.is_exact_zero() {
                    continue;
                }
                for i2 in 0..e {
                    for j2 in 0..f {
                        let y = &b.coords[i2 * f + j2];
                        if (x.is_zero() && y.is_zero()) || y.is_exact_zero() && x.is_exact_zero() {
                            continue;
                        }
                        let prod = x.mul(y).expect("same prime");
                        conv[i1 + i2][j1 + j2] =
                            conv[i1 + i2][j1 + j2].add(&prod).expect("same prime");
                    }
                }
            }
        }
        let mut upoly: Vec<UCoeff> = conv.into_iter().map(|c| self.reduce_omega(c)).collect();
        // reduce mod Eisenstein: π^e = -(E_{e-1} π^{e-1} + ... + E_0)
        while upoly.len() > e {
            let top = upoly.pop().unwrap();
            let k = upoly.len() - e;
            if top.iter().all(|c| c.is_exact_zero()) {
                continue;
            }
            for i in 0..e {
                let prod = self.umul(&top, &self.eisenstein[i]);
                for (j, val) in prod.into_iter().enumerate() {
                    upoly[k + i][j] = upoly[k + i][j].sub(&val).expect("same prime");
                }
            }
        }
        let mut coords = Vec::with_capacity(self.n());
        for row in upoly.into_iter() {
            coords.extend(row);
        }
        LocalFieldElement { coords }
    }

    fn umul(&self, a: &UCoeff, b: &UCoeff) -> UCoeff {
        let f = self.f as usize;
        let mut conv = vec![PAdicNumber::zero(self.p); 2 * f - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                conv[i + j] = conv[i + j]
                    .add(&x.mul(y).expect("same prime"))
                    .expect("same prime");
            }
        }
        self.reduce_omega(conv)
    }

    /// Reduce an ω-polynomial modulo the (integer) unramified polynomial.
    fn reduce_omega(&self, mut c: Vec<PAdicNumber>) -> UCoeff {
        let f = self.f as usize;
        while c.len() > f {
            let top = c.pop().unwrap();
            if top.is_exact_zero() {
                continue;
            }
            let k = c.len() - f;
            for j in 0..f {
                let gj = self.unramified_poly.coeff(j);
                if gj == BigInt::from(0) {
                    continue;
                }
                let gp = PAdicNumber::from_integer(self.p, self.precision + 4, gj)
                    .expect("valid prime");
                c[k + j] = c[k + j]
                    .sub(&top.mul(&gp).expect("same prime"))
                    .expect("same prime");
            }
        }
        c.resize(f, PAdicNumber::zero(self.p));
        c
    }

    pub fn pow(&self, a: &LocalFieldElement, k: u64) -> LocalFieldElement {
        let mut acc = self.one();
        let mut sq = a.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &sq);
            }
            e >>= 1;
            if e > 0 {
                sq = self.mul(&sq, &sq);
            }
        }
        acc
    }

    /// Inverse via the multiplication matrix over `Q_p`.
    pub fn inv(&self, a: &LocalFieldElement) -> Result<LocalFieldElement> {
        if self.is_zero_elt(a) {
            return Err(Error::DivisionByZero);
        }
        let n = self.n();
        let mut cols = Vec::with_capacity(n);
        for k in 0..n {
            let mut basis = self.zero();
            basis.coords[k] = PAdicNumber::one(self.p, self.precision);
            cols.push(self.mul(a, &basis).coords);
        }
        let mat: Vec<Vec<PAdicNumber>> = (0..n)
            .map(|r| (0..n).map(|c| cols[c][r].clone()).collect())
            .collect();
        let mut rhs = vec![PAdicNumber::zero(self.p); n];
        rhs[0] = PAdicNumber::one(self.p, self.precision);
        let sol = solve_padic(mat, rhs)?;
        Ok(LocalFieldElement { coords: sol })
    }

    pub fn div(&self, a: &LocalFieldElement, b: &LocalFieldElement) -> Result<LocalFieldElement> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// Extension valuation, normalized with v(π) = 1, so v(p) = e.
    pub fn valuation(&self, x: &LocalFieldElement) -> Valuation {
        let f = self.f as usize;
        let mut best = Valuation::Infinite;
        for (idx, c) in x.coords.iter().enumerate() {
            if let Valuation::Finite(v) = c.valuation() {
                let i = (idx / f) as i64;
                let cand = Valuation::Finite(self.e as i64 * v + i);
                if cand < best {
                    best = cand;
                }
            }
        }
        best
    }

    /// π-adic absolute precision: the element is known mod π^(this value).
    pub fn abs_precision_pi(&self, x: &LocalFieldElement) -> i64 {
        let f = self.f as usize;
        let mut best = i64::MAX;
        for (idx, c) in x.coords.iter().enumerate() {
            let i = (idx / f) as i64;
            if let AbsPrec::Finite(a) = c.abs_precision() {
                best = best.min(self.e as i64 * a + i);
            }
        }
        if best == i64::MAX {
            self.e as i64 * self.precision as i64
        } else {
            best
        }
    }

    /// Do a and b agree modulo π^k?
    pub fn agrees(&self, a: &LocalFieldElement, b: &LocalFieldElement, k: i64) -> bool {
        match self.valuation(&self.sub(a, b)) {
            Valuation::Infinite => true,
            Valuation::Finite(v) => v >= k,
        }
    }

    /// Image in the residue field, for integral elements.
    pub fn residue(&self, x: &LocalFieldElement) -> Result<FqElem> {
        if self.valuation(x) < Valuation::Finite(0) {
            return Err(Error::DomainViolation(
                "residue of a non-integral element".into(),
            ));
        }
        let f = self.f as usize;
        let mut digits = vec![0u64; f];
        for (j, d) in digits.iter_mut().enumerate() {
            if let Some(r) = x.coords[j].residue() {
                *d = r;
            }
        }
        Ok(FpPoly::new(self.p, digits))
    }

    /// Lift a residue-field element to integral coordinates.
    pub fn lift_residue(&self, r: &FqElem) -> LocalFieldElement {
        let mut z = self.zero();
        for (j, &c) in r.coeffs.iter().enumerate() {
            z.coords[j] =
                PAdicNumber::from_integer(self.p, self.precision, c as i64).expect("valid prime");
        }
        z
    }

    /// Teichmüller lift of a nonzero residue: the unique (p^f - 1)-st root
    /// of unity with that residue.
    pub fn teichmueller(&self, r: &FqElem) -> Result<LocalFieldElement> {
        if r.is_zero() {
            return Err(Error::InvalidResidue {
                residue: 0,
                p: self.p,
            });
        }
        let q = self
            .residue_field()
            .order()
            .ok_or_else(|| Error::PrecisionExhausted("residue field too large".into()))?;
        let mut x = self.lift_residue(r);
        let target = self.e as i64 * self.precision as i64;
        for _ in 0..=(target + 1) {
            let next = self.pow(&x, q);
            if self.agrees(&next, &x, target) {
                return Ok(next);
            }
            x = next;
        }
        Err(Error::PrecisionExhausted(
            "Teichmüller iteration did not stabilize".into(),
        ))
    }

    // ------------------------------------------------------------------
    // One-unit log / exp
    // ------------------------------------------------------------------

    /// Smallest valuation from which exp converges: floor(e/(p-1)) + 1.
    pub fn exp_threshold(&self) -> i64 {
        (self.e as i64) / (self.p as i64 - 1) + 1
    }

    /// log of a one-unit (requires v(x - 1) >= 1).
    pub fn log(&self, x: &LocalFieldElement) -> Result<LocalFieldElement> {
        let z = self.sub(x, &self.one());
        let zv = match self.valuation(&z) {
            Valuation::Infinite => return Ok(self.zero()),
            Valuation::Finite(v) => v,
        };
        if zv < 1 {
            return Err(Error::DomainViolation(format!(
                "log requires v(x-1) >= 1, got {}",
                zv
            )));
        }
        let target = self.abs_precision_pi(&z);
        let mut kmax = 1i64;
        while kmax * zv - self.e as i64 * ilog_floor(kmax as u64, self.p) < target {
            kmax += 1;
        }
        let mut acc = self.zero();
        let mut zk = z.clone();
        for k in 1..kmax {
            let kinv =
                PAdicNumber::from_rational(self.p, self.precision + 6, 1, k).expect("valid prime");
            let term = self.scalar_mul(&kinv, &zk);
            acc = if k % 2 == 1 {
                self.add(&acc, &term)
            } else {
                self.sub(&acc, &term)
            };
            zk = self.mul(&zk, &z);
        }
        Ok(acc)
    }

    /// exp, on its convergence domain v(y) >= exp_threshold().
    pub fn exp(&self, y: &LocalFieldElement) -> Result<LocalFieldElement> {
        let yv = match self.valuation(y) {
            Valuation::Infinite => return Ok(self.one()),
            Valuation::Finite(v) => v,
        };
        let c0 = self.exp_threshold();
        if yv < c0 {
            return Err(Error::DomainViolation(format!(
                "exp requires v(y) >= {}, got {}",
                c0, yv
            )));
        }
        let target = self.abs_precision_pi(y);
        let mut kmax = 1i64;
        while kmax * yv - (self.e as i64) * (kmax - 1) / (self.p as i64 - 1) < target {
            kmax += 1;
        }
        let mut acc = self.one();
        let mut term = self.one();
        for k in 1..kmax {
            let kinv =
                PAdicNumber::from_rational(self.p, self.precision + 6, 1, k).expect("valid prime");
            term = self.scalar_mul(&kinv, &self.mul(&term, y));
            acc = self.add(&acc, &term);
        }
        Ok(acc)
    }

    // ------------------------------------------------------------------
    // Roots of unity
    // ------------------------------------------------------------------

    /// |μ_{p^∞}(F)| as a p-power integer, found by a bounded certified
    /// search for roots of p-power cyclotomic polynomials. The search is
    /// finite because Q_p(ζ_{p^m}) has ramification φ(p^m), which must
    /// divide e.
    pub fn mu_p_power(&self) -> Result<u64> {
        Ok(self.mu_p_power_with_generator()?.0)
    }

    /// (|μ_{p^∞}(F)|, generator); the generator is `None` when μ is trivial.
    pub fn mu_p_power_with_generator(&self) -> Result<(u64, Option<LocalFieldElement>)> {
        let p = self.p;
        let ef = (self.e * self.f) as u64;
        let mut m = 0u32;
        let mut gen: Option<LocalFieldElement> = None;
        loop {
            let next = m + 1;
            let phi = match pow_u64(p, next - 1) {
                Some(x) => x * (p - 1),
                None => break,
            };
            if phi > ef || self.e as u64 % phi != 0 {
                break;
            }
            match self.cyclotomic_root(next)? {
                Some(z) => {
                    gen = Some(z);
                    m = next;
                }
                None => break,
            }
        }
        Ok((pow_u64(p, m).expect("desk-scale p-power"), gen))
    }

    /// A root of the p^m-th cyclotomic polynomial, if one exists. Complete
    /// over the searched window; errors only if the certified seed search
    /// would exceed the enumeration budget.
    fn cyclotomic_root(&self, m: u32) -> Result<Option<LocalFieldElement>> {
        let p = self.p;
        let e = self.e as i64;
        let pm1 = pow_u64(p, m - 1).unwrap();
        let d = (pm1 * (p - 1)) as i64; // φ(p^m)
        if e % d != 0 {
            return Ok(None);
        }
        let c = e / d; // v(ζ - 1)
        // Φ_{p^m}(x) = Σ_{i<p} x^{i p^{m-1}}, expanded at 1 + y
        let mut b = vec![BigInt::from(0); d as usize + 1];
        for i in 0..p {
            let top = i * pm1;
            for (k, slot) in b.iter_mut().enumerate().take(top as usize + 1) {
                *slot += BigInt::from(binomial(top, k as u64));
            }
        }
        // h(z) = π^{-dc} Φ_{p^m}(1 + π^c z): integral, monic, unit constant
        let pi = self.pi();
        let pidc_inv = self.inv(&self.pow(&pi, (d * c) as u64))?;
        let h: Vec<LocalFieldElement> = b
            .iter()
            .enumerate()
            .map(|(k, bk)| {
                let num = self.mul(
                    &self.from_integer(bk.clone()),
                    &self.pow(&pi, (k as i64 * c) as u64),
                );
                self.mul(&num, &pidc_inv)
            })
            .collect();
        // v(h'(root)) = m e - e/(p-1) - (d-1) c, the seed depth bound
        let delta = m as i64 * e - e / (p as i64 - 1) - (d - 1) * c;
        let depth = (2 * delta + 1) as u32;
        let root = match self.find_unit_root(&h, depth)? {
            None => return Ok(None),
            Some(z) => z,
        };
        let zeta = self.add(&self.one(), &self.mul(&self.pow(&pi, c as u64), &root));
        // re-verify the exact multiplicative order at tracked precision
        let order = pow_u64(p, m).unwrap();
        let one = self.one();
        let pw = self.pow(&zeta, order);
        let a = self.abs_precision_pi(&pw).max(1);
        if !self.agrees(&pw, &one, a) {
            return Err(Error::PrecisionExhausted(
                "cyclotomic root failed re-verification".into(),
            ));
        }
        let sub_pw = self.pow(&zeta, order / p);
        match self.valuation(&self.sub(&sub_pw, &one)) {
            Valuation::Finite(v) if v < self.abs_precision_pi(&sub_pw) => Ok(Some(zeta)),
            _ => Err(Error::PrecisionExhausted(
                "cannot certify primitivity of cyclotomic root".into(),
            )),
        }
    }

    /// Exhaustive certified unit-root search: scan unit residues mod
    /// π^depth, accept when v(h(z)) > 2 v(h'(z)), Newton-lift, and return.
    /// Completeness: any true unit root reduces to an accepted candidate
    /// provided depth > 2 v(h'(root)).
    fn find_unit_root(
        &self,
        h: &[LocalFieldElement],
        depth: u32,
    ) -> Result<Option<LocalFieldElement>> {
        let q = self
            .residue_field()
            .order()
            .ok_or_else(|| Error::PrecisionExhausted("residue field too large".into()))?;
        let budget: u64 = 4_000_000;
        let count = match pow_u64_checked(q, depth) {
            Some(c) if c <= budget => c,
            _ => {
                return Err(Error::PrecisionExhausted(format!(
                    "unit-root search needs {}^{} candidates",
                    q, depth
                )))
            }
        };
        let k = self.residue_field();
        let reps: Vec<LocalFieldElement> = k.elements().map(|r| self.lift_residue(&r)).collect();
        let pi = self.pi();
        let mut pipows = Vec::with_capacity(depth as usize);
        let mut cur = self.one();
        for _ in 0..depth {
            pipows.push(cur.clone());
            cur = self.mul(&cur, &pi);
        }
        // derivative coefficients: hp[k] = (k+1) h[k+1]
        let hp: Vec<LocalFieldElement> = h
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| {
                self.scalar_mul(
                    &PAdicNumber::from_integer(self.p, self.precision, k as i64).unwrap(),
                    c,
                )
            })
            .collect();
        for idx in 0..count {
            let mut z = self.zero();
            let mut rem = idx;
            let mut unit_digit = false;
            for (pos, pip) in pipows.iter().enumerate() {
                let digit = (rem % q) as usize;
                rem /= q;
                if pos == 0 && digit != 0 {
                    unit_digit = true;
                }
                if digit != 0 {
                    z = self.add(&z, &self.mul(&reps[digit], pip));
                }
            }
            if !unit_digit {
                continue;
            }
            let hv = self.eval_poly(h, &z);
            let dv = self.eval_poly(&hp, &z);
            let vd = match self.valuation(&dv) {
                Valuation::Finite(v) => v,
                Valuation::Infinite => continue,
            };
            let ok = match self.valuation(&hv) {
                Valuation::Infinite => true,
                Valuation::Finite(v) => v > 2 * vd,
            };
            if !ok {
                continue;
            }
            // Newton iteration in F
            let mut x = z.clone();
            for _ in 0..60 {
                let fx = self.eval_poly(h, &x);
                match self.valuation(&fx) {
                    Valuation::Infinite => break,
                    Valuation::Finite(v) => {
                        if v >= self.e as i64 * self.precision as i64 - 2 * vd {
                            break;
                        }
                    }
                }
                let dfx = self.eval_poly(&hp, &x);
                let step = self.div(&fx, &dfx)?;
                x = self.sub(&x, &step);
            }
            return Ok(Some(x));
        }
        Ok(None)
    }

    fn eval_poly(&self, h: &[LocalFieldElement], x: &LocalFieldElement) -> LocalFieldElement {
        let mut acc = self.zero();
        for c in h.iter().rev() {
            acc = self.add(&self.mul(&acc, x), c);
        }
        acc
    }

    // ------------------------------------------------------------------
    // Unit group structure
    // ------------------------------------------------------------------

    /// `O* ≅ k* × Z_p^{ef} × μ_{p^∞}` realized as (|k*|, rank, |μ|).
    pub fn unit_group_structure(&self) -> Result<UnitGroupDescription> {
        let q = self
            .residue_field()
            .order()
            .ok_or_else(|| Error::PrecisionExhausted("residue field too large".into()))?;
        Ok(UnitGroupDescription {
            cyclic_prime_to_p_order: q - 1,
            free_rank: self.e * self.f,
            mu_p_power_order: self.mu_p_power()?,
        })
    }

    // ------------------------------------------------------------------
    // Tame isomorphism testing
    // ------------------------------------------------------------------

    /// Decide isomorphism for unramified and tamely ramified fields;
    /// wildly ramified comparisons (p | e) are refused with `Unsupported`.
    pub fn is_isomorphic_tame(&self, other: &LocalField) -> IsomorphismVerdict {
        if self.invariants() != other.invariants() {
            return IsomorphismVerdict::NonIsomorphic;
        }
        let (p, e, f) = self.invariants();
        if e == 1 {
            return IsomorphismVerdict::Isomorphic;
        }
        if e as u64 % p == 0 {
            return IsomorphismVerdict::Unsupported;
        }
        // tame classification: classes of u = -E_0/p in k*/(k*)^e up to
        // Frobenius twist
        let r_self = match self.tame_invariant() {
            Some(r) => r,
            None => return IsomorphismVerdict::Unsupported,
        };
        let r_other = match other.tame_invariant() {
            Some(r) => r,
            None => return IsomorphismVerdict::Unsupported,
        };
        let k_other = other.residue_field();
        let g_self = self.unramified_poly.reduce_mod(p);
        let root = match k_other.root_of(&g_self) {
            Some(r) => r,
            None => return IsomorphismVerdict::NonIsomorphic,
        };
        let mapped = k_other.eval_poly(&r_self, &root);
        let q = k_other.order().expect("desk-scale residue field");
        let g = gcd_u64(e as u64, q - 1);
        let exp = (q - 1) / g;
        let inv_other = k_other.inv(&r_other).expect("tame invariant is nonzero");
        let mut frob = mapped;
        for _ in 0..f {
            let ratio = k_other.mul(&frob, &inv_other);
            if k_other.pow(&ratio, exp) == k_other.one() {
                return IsomorphismVerdict::Isomorphic;
            }
            frob = k_other.pow(&frob, p);
        }
        IsomorphismVerdict::NonIsomorphic
    }

    /// Residue of -E_0/p in the residue field (the tame class datum).
    fn tame_invariant(&self) -> Option<FqElem> {
        let pinv = PAdicNumber::from_rational(self.p, self.precision, 1, self.p as i64).ok()?;
        let f = self.f as usize;
        let mut digits = vec![0u64; f];
        for (j, d) in digits.iter_mut().enumerate() {
            let c = self.eisenstein[0][j].neg().mul(&pinv).ok()?;
            match c.valuation() {
                Valuation::Infinite => {}
                Valuation::Finite(v) if v >= 0 => {
                    *d = c.residue()?;
                }
                _ => return None,
            }
        }
        Some(FpPoly::new(self.p, digits))
    }
}

fn ucoeff_valuation(c: &UCoeff) -> Valuation {
    c.iter()
        .map(|x| x.valuation())
        .min()
        .unwrap_or(Valuation::Infinite)
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

fn pow_u64(p: u64, k: u32) -> Option<u64> {
    let mut acc = 1u64;
    for _ in 0..k {
        acc = acc.checked_mul(p)?;
    }
    Some(acc)
}

fn pow_u64_checked(q: u64, k: u32) -> Option<u64> {
    let mut acc = 1u64;
    for _ in 0..k {
        acc = acc.checked_mul(q)?;
        if acc > 1 << 60 {
            return None;
        }
    }
    Some(acc)
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Lexicographically smallest monic irreducible polynomial of degree f
/// mod p, ordered by the coefficient tuple read as a base-p integer.
pub fn smallest_irreducible(p: u64, f: u32) -> Result<ZPoly> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if f == 1 {
        return Ok(ZPoly::x());
    }
    let total = pow_u64_checked(p, f)
        .ok_or_else(|| Error::PrecisionExhausted("residue field too large to enumerate".into()))?;
    for idx in 0..total {
        let mut digits = Vec::with_capacity(f as usize + 1);
        let mut rem = idx;
        for _ in 0..f {
            digits.push((rem % p) as i64);
            rem /= p;
        }
        digits.push(1);
        let cand = ZPoly::from_i64(&digits);
        if cand.reduce_mod(p).is_irreducible() {
            return Ok(cand);
        }
    }
    unreachable!("irreducible polynomials of every degree exist over F_p")
}

impl fmt::Display for LocalField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q_{}(f={}, e={})", self.p, self.f, self.e)
    }
}

/// JSON form of a local field tower:
/// `{p, f, unramified_poly, e, eisenstein_poly, N}`.
#[derive(Serialize, Deserialize)]
struct LocalFieldJson {
    p: u64,
    f: u32,
    unramified_poly: Vec<String>,
    e: u32,
    eisenstein_poly: Vec<Vec<PAdicNumber>>,
    #[serde(rename = "N")]
    n: u32,
}

impl Serialize for LocalField {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LocalFieldJson {
            p: self.p,
            f: self.f,
            unramified_poly: self
                .unramified_poly
                .coeffs
                .iter()
                .map(|c| c.to_string())
                .collect(),
            e: self.e,
            eisenstein_poly: self.eisenstein.clone(),
            n: self.precision,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LocalField {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as DeError;
        let j = LocalFieldJson::deserialize(d)?;
        let coeffs: std::result::Result<Vec<BigInt>, _> =
            j.unramified_poly.iter().map(|s| s.parse::<BigInt>()).collect();
        let poly = ZPoly::new(coeffs.map_err(|_| D::Error::custom("bad coefficient"))?);
        LocalField::new(j.p, poly, j.eisenstein_poly, j.n).map_err(D::Error::custom)
    }
}
