//! Exact linear algebra over `Q_p` and its finite extensions: a scalar
//! structure trait, square matrices, determinants and characteristic
//! polynomials, a valuation-pivoted linear solver, and n-th roots of
//! unipotent matrices by the finite binomial series.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{big_valuation, factorial_valuation};
use crate::error::{Error, Result};
use crate::localfield::{LocalField, LocalFieldElement};
use crate::padic::{AbsPrec, PAdicNumber, Valuation};

/// Structure object for field scalars used in matrix computations.
/// Valuations are normalized so the uniformizer has valuation 1
/// (`v(p) = e`, the ramification index).
pub trait ScalarRing {
    type Elem: Clone + PartialEq + std::fmt::Debug;

    fn prime(&self) -> u64;
    fn ram_index(&self) -> u32;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;
    fn from_rational(&self, num: &BigInt, den: &BigInt) -> Result<Self::Elem>;
    fn valuation(&self, a: &Self::Elem) -> Valuation;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// Absolute precision in uniformizer units.
    fn abs_precision(&self, a: &Self::Elem) -> i64;
    fn agrees(&self, a: &Self::Elem, b: &Self::Elem, prec: i64) -> bool;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }
}

/// `Q_p` at a fixed working precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QpRing {
    pub p: u64,
    pub precision: u32,
}

impl QpRing {
    pub fn new(p: u64, precision: u32) -> Self {
        QpRing { p, precision }
    }
}

impl ScalarRing for QpRing {
    type Elem = PAdicNumber;

    fn prime(&self) -> u64 {
        self.p
    }

    fn ram_index(&self) -> u32 {
        1
    }

    fn zero(&self) -> PAdicNumber {
        PAdicNumber::zero(self.p)
    }

    fn one(&self) -> PAdicNumber {
        PAdicNumber::one(self.p, self.precision)
    }

    fn add(&self, a: &PAdicNumber, b: &PAdicNumber) -> PAdicNumber {
        a.add(b).expect("same prime")
    }

    fn sub(&self, a: &PAdicNumber, b: &PAdicNumber) -> PAdicNumber {
        a.sub(b).expect("same prime")
    }

    fn mul(&self, a: &PAdicNumber, b: &PAdicNumber) -> PAdicNumber {
        a.mul(b).expect("same prime")
    }

    fn inv(&self, a: &PAdicNumber) -> Result<PAdicNumber> {
        a.inv()
    }

    fn from_rational(&self, num: &BigInt, den: &BigInt) -> Result<PAdicNumber> {
        PAdicNumber::from_rational(self.p, self.precision, num.clone(), den.clone())
    }

    fn valuation(&self, a: &PAdicNumber) -> Valuation {
        a.valuation()
    }

    fn is_zero(&self, a: &PAdicNumber) -> bool {
        a.is_zero()
    }

    fn abs_precision(&self, a: &PAdicNumber) -> i64 {
        match a.abs_precision() {
            AbsPrec::Finite(v) => v,
            AbsPrec::Exact => self.precision as i64,
        }
    }

    fn agrees(&self, a: &PAdicNumber, b: &PAdicNumber, prec: i64) -> bool {
        a.agrees_with(b, prec)
    }
}

impl ScalarRing for LocalField {
    type Elem = LocalFieldElement;

    fn prime(&self) -> u64 {
        LocalField::prime(self)
    }

    fn ram_index(&self) -> u32 {
        self.ramification_index()
    }

    fn zero(&self) -> LocalFieldElement {
        LocalField::zero(self)
    }

    fn one(&self) -> LocalFieldElement {
        LocalField::one(self)
    }

    fn add(&self, a: &LocalFieldElement, b: &LocalFieldElement) -> LocalFieldElement {
        LocalField::add(self, a, b)
    }

    fn sub(&self, a: &LocalFieldElement, b: &LocalFieldElement) -> LocalFieldElement {
        LocalField::sub(self, a, b)
    }

    fn mul(&self, a: &LocalFieldElement, b: &LocalFieldElement) -> LocalFieldElement {
        LocalField::mul(self, a, b)
    }

    fn inv(&self, a: &LocalFieldElement) -> Result<LocalFieldElement> {
        LocalField::inv(self, a)
    }

    fn from_rational(&self, num: &BigInt, den: &BigInt) -> Result<LocalFieldElement> {
        let x = PAdicNumber::from_rational(
            LocalField::prime(self),
            self.precision(),
            num.clone(),
            den.clone(),
        )?;
        Ok(self.from_padic(&x))
    }

    fn valuation(&self, a: &LocalFieldElement) -> Valuation {
        LocalField::valuation(self, a)
    }

    fn is_zero(&self, a: &LocalFieldElement) -> bool {
        self.is_zero_elt(a)
    }

    fn abs_precision(&self, a: &LocalFieldElement) -> i64 {
        self.abs_precision_pi(a)
    }

    fn agrees(&self, a: &LocalFieldElement, b: &LocalFieldElement, prec: i64) -> bool {
        LocalField::agrees(self, a, b, prec)
    }
}

/// Square matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix<T> {
    pub n: usize,
    pub entries: Vec<T>,
}

impl<T: Clone> Matrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Matrix {
            n,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn at(&self, i: usize, j: usize) -> &T {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.entries[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.at(i, j).clone()).collect())
            .collect()
    }
}

pub fn identity<R: ScalarRing>(ring: &R, n: usize) -> Matrix<R::Elem> {
    let mut m = Matrix {
        n,
        entries: vec![ring.zero(); n * n],
    };
    for i in 0..n {
        m.set(i, i, ring.one());
    }
    m
}

pub fn mat_add<R: ScalarRing>(ring: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    assert_eq!(a.n, b.n);
    Matrix {
        n: a.n,
        entries: a
            .entries
            .iter()
            .zip(&b.entries)
            .map(|(x, y)| ring.add(x, y))
            .collect(),
    }
}

pub fn mat_sub<R: ScalarRing>(ring: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    assert_eq!(a.n, b.n);
    Matrix {
        n: a.n,
        entries: a
            .entries
            .iter()
            .zip(&b.entries)
            .map(|(x, y)| ring.sub(x, y))
            .collect(),
    }
}

pub fn mat_mul<R: ScalarRing>(ring: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    assert_eq!(a.n, b.n);
    let n = a.n;
    let mut out = Matrix {
        n,
        entries: vec![ring.zero(); n * n],
    };
    for i in 0..n {
        for j in 0..n {
            let mut acc = ring.zero();
            for k in 0..n {
                acc = ring.add(&acc, &ring.mul(a.at(i, k), b.at(k, j)));
            }
            out.set(i, j, acc);
        }
    }
    out
}

pub fn mat_scalar_mul<R: ScalarRing>(ring: &R, c: &R::Elem, a: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    Matrix {
        n: a.n,
        entries: a.entries.iter().map(|x| ring.mul(c, x)).collect(),
    }
}

pub fn mat_pow<R: ScalarRing>(ring: &R, a: &Matrix<R::Elem>, k: u64) -> Matrix<R::Elem> {
    let mut acc = identity(ring, a.n);
    let mut sq = a.clone();
    let mut e = k;
    while e > 0 {
        if e & 1 == 1 {
            acc = mat_mul(ring, &acc, &sq);
        }
        e >>= 1;
        if e > 0 {
            sq = mat_mul(ring, &sq, &sq);
        }
    }
    acc
}

/// Determinant by cofactor expansion (desk-scale sizes).
pub fn det<R: ScalarRing>(ring: &R, a: &Matrix<R::Elem>) -> R::Elem {
    let n = a.n;
    if n == 0 {
        return ring.one();
    }
    if n == 1 {
        return a.at(0, 0).clone();
    }
    let mut acc = ring.zero();
    for j in 0..n {
        let c = a.at(0, j);
        if ring.is_zero(c) {
            continue;
        }
        let minor_rows: Vec<Vec<R::Elem>> = (1..n)
            .map(|i| {
                (0..n)
                    .filter(|&jj| jj != j)
                    .map(|jj| a.at(i, jj).clone())
                    .collect()
            })
            .collect();
        let m = det(ring, &Matrix::from_rows(minor_rows));
        let term = ring.mul(c, &m);
        acc = if j % 2 == 0 {
            ring.add(&acc, &term)
        } else {
            ring.sub(&acc, &term)
        };
    }
    acc
}

/// Coefficients of det(xI - M), constant term first (degree n, monic).
/// Computed by cofactor expansion over the polynomial ring, so there are
/// no divisions and no precision surprises.
pub fn char_poly<R: ScalarRing>(ring: &R, a: &Matrix<R::Elem>) -> Vec<R::Elem> {
    let n = a.n;
    // polynomial entries: x*δ_ij - a_ij, little-endian coefficient vecs
    let entries: Vec<Vec<Vec<R::Elem>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c0 = ring.sub(&ring.zero(), a.at(i, j));
                    if i == j {
                        vec![c0, ring.one()]
                    } else {
                        vec![c0]
                    }
                })
                .collect()
        })
        .collect();
    let mut out = poly_det(ring, &entries);
    out.resize(n + 1, ring.zero());
    out
}

fn poly_det<R: ScalarRing>(ring: &R, m: &[Vec<Vec<R::Elem>>]) -> Vec<R::Elem> {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc: Vec<R::Elem> = vec![ring.zero()];
    for j in 0..n {
        let c = &m[0][j];
        if c.iter().all(|x| ring.is_zero(x)) {
            continue;
        }
        let minor: Vec<Vec<Vec<R::Elem>>> = (1..n)
            .map(|i| {
                (0..n)
                    .filter(|&jj| jj != j)
                    .map(|jj| m[i][jj].clone())
                    .collect()
            })
            .collect();
        let md = poly_det(ring, &minor);
        let term = poly_mul(ring, c, &md);
        acc = if j % 2 == 0 {
            poly_add(ring, &acc, &term)
        } else {
            poly_sub(ring, &acc, &term)
        };
    }
    acc
}

fn poly_add<R: ScalarRing>(ring: &R, a: &[R::Elem], b: &[R::Elem]) -> Vec<R::Elem> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(|| ring.zero());
            let y = b.get(i).cloned().unwrap_or_else(|| ring.zero());
            ring.add(&x, &y)
        })
        .collect()
}

fn poly_sub<R: ScalarRing>(ring: &R, a: &[R::Elem], b: &[R::Elem]) -> Vec<R::Elem> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(|| ring.zero());
            let y = b.get(i).cloned().unwrap_or_else(|| ring.zero());
            ring.sub(&x, &y)
        })
        .collect()
}

fn poly_mul<R: ScalarRing>(ring: &R, a: &[R::Elem], b: &[R::Elem]) -> Vec<R::Elem> {
    let mut out = vec![ring.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = ring.add(&out[i + j], &ring.mul(x, y));
        }
    }
    out
}

// ----------------------------------------------------------------------
// Linear solving over Q_p
// ----------------------------------------------------------------------

/// Solve M y = rhs over `Q_p` by Gaussian elimination with minimal-valuation
/// pivoting (the pivot of smallest valuation keeps the most precision).
pub fn solve_padic(
    mut mat: Vec<Vec<PAdicNumber>>,
    mut rhs: Vec<PAdicNumber>,
) -> Result<Vec<PAdicNumber>> {
    let n = mat.len();
    for row in &mat {
        if row.len() != n {
            return Err(Error::DomainViolation("solver needs a square matrix".into()));
        }
    }
    for col in 0..n {
        // pivot: row >= col with minimal valuation in this column
        let mut best: Option<(usize, i64)> = None;
        for (r, row) in mat.iter().enumerate().skip(col) {
            if let Valuation::Finite(v) = row[col].valuation() {
                if best.map(|(_, bv)| v < bv).unwrap_or(true) {
                    best = Some((r, v));
                }
            }
        }
        let (pr, _) = best.ok_or_else(|| {
            Error::PrecisionExhausted("matrix is singular at working precision".into())
        })?;
        mat.swap(col, pr);
        rhs.swap(col, pr);
        let pivot = mat[col][col].clone();
        let pinv = pivot.inv()?;
        for j in col..n {
            mat[col][j] = mat[col][j].mul(&pinv)?;
        }
        rhs[col] = rhs[col].mul(&pinv)?;
        for r in 0..n {
            if r == col {
                continue;
            }
            let factor = mat[r][col].clone();
            if factor.is_zero() && factor.is_exact_zero() {
                continue;
            }
            for j in col..n {
                let t = factor.mul(&mat[col][j])?;
                mat[r][j] = mat[r][j].sub(&t)?;
            }
            let t = factor.mul(&rhs[col])?;
            rhs[r] = rhs[r].sub(&t)?;
        }
    }
    Ok(rhs)
}

/// Invert a matrix over `Q_p`; errors if singular at working precision.
pub fn invert_padic(mat: &[Vec<PAdicNumber>], p: u64, prec: u32) -> Result<Vec<Vec<PAdicNumber>>> {
    let n = mat.len();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let mut e = vec![PAdicNumber::zero(p); n];
        e[j] = PAdicNumber::one(p, prec);
        cols.push(solve_padic(mat.to_vec(), e)?);
    }
    // cols[j] is the j-th column of the inverse
    Ok((0..n)
        .map(|i| (0..n).map(|j| cols[j][i].clone()).collect())
        .collect())
}

// ----------------------------------------------------------------------
// Unipotent matrices and binomial-series roots
// ----------------------------------------------------------------------

/// Is (M - I) nilpotent at the available precision?
pub fn is_unipotent<R: ScalarRing>(ring: &R, m: &Matrix<R::Elem>) -> bool {
    let z = mat_sub(ring, m, &identity(ring, m.n));
    let zn = mat_pow(ring, &z, m.n as u64);
    zn.entries.iter().all(|x| ring.is_zero(x))
}

/// Worst p-adic valuation loss among the binomial coefficients
/// C(1/n, k), k < size: the exact budget the series costs.
pub fn binomial_series_loss(n: u32, size: usize, p: u64) -> i64 {
    let mut worst = 0i64;
    'terms: for k in 1..size as u64 {
        // C(1/n, k) = ∏_{j<k} (1 - j n) / (n^k k!)
        let mut num_v = 0i64;
        for j in 0..k {
            let t = BigInt::one() - BigInt::from(j) * BigInt::from(n);
            if t.is_zero() {
                // the coefficient vanishes (n = 1); no loss from this term
                continue 'terms;
            }
            num_v += big_valuation(&t, p) as i64;
        }
        let den_v = k as i64 * big_valuation(&BigInt::from(n), p) as i64
            + factorial_valuation(k, p) as i64;
        worst = worst.max(den_v - num_v);
    }
    worst
}

/// n-th root of a unipotent matrix by the finite binomial series
/// `w = Σ_k C(1/n, k) (v - 1)^k`; exact because `v - 1` is nilpotent.
pub fn unipotent_nth_root<R: ScalarRing>(
    ring: &R,
    v: &Matrix<R::Elem>,
    n: u32,
) -> Result<Matrix<R::Elem>> {
    if n == 0 {
        return Err(Error::DomainViolation("0-th root".into()));
    }
    let size = v.n;
    let z = mat_sub(ring, v, &identity(ring, size));
    // exact loss from binomial denominators, computed up front
    let loss = binomial_series_loss(n, size, ring.prime()) * ring.ram_index() as i64;
    let avail = v
        .entries
        .iter()
        .map(|x| ring.abs_precision(x))
        .min()
        .unwrap_or(0);
    if avail - loss < 1 {
        return Err(Error::PrecisionExhausted(format!(
            "binomial series for n = {} costs {} digits, only {} available",
            n, loss, avail
        )));
    }
    let mut acc = identity(ring, size);
    let mut zk = identity(ring, size);
    for k in 1..size as u64 {
        zk = mat_mul(ring, &zk, &z);
        // C(1/n, k) = ∏_{j<k} (1 - j n) / (n^k k!)
        let mut num = BigInt::one();
        for j in 0..k {
            num *= BigInt::one() - BigInt::from(j) * BigInt::from(n);
        }
        let mut den = BigInt::one();
        for j in 1..=k {
            den *= BigInt::from(j) * BigInt::from(n);
        }
        let c = ring.from_rational(&num, &den)?;
        acc = mat_add(ring, &acc, &mat_scalar_mul(ring, &c, &zk));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qp(p: u64, prec: u32) -> QpRing {
        QpRing::new(p, prec)
    }

    fn int_matrix(ring: &QpRing, rows: &[&[i64]]) -> Matrix<PAdicNumber> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| {
                    r.iter()
                        .map(|&x| {
                            PAdicNumber::from_integer(ring.p, ring.precision, x).unwrap()
                        })
                        .collect()
                })
                .collect(),
        )
    }

    #[test]
    fn solve_simple_system() {
        let ring = qp(5, 12);
        let m = int_matrix(&ring, &[&[2, 1], &[1, 1]]);
        let rhs = vec![
            PAdicNumber::from_integer(5, 12, 3).unwrap(),
            PAdicNumber::from_integer(5, 12, 2).unwrap(),
        ];
        let sol = solve_padic(m.rows(), rhs).unwrap();
        // x = 1, y = 1
        assert!(sol[0].agrees_with(&PAdicNumber::one(5, 12), 12));
        assert!(sol[1].agrees_with(&PAdicNumber::one(5, 12), 12));
    }

    #[test]
    fn solve_with_valuation_pivoting() {
        let ring = qp(5, 10);
        // leading entry divisible by p forces a row swap
        let m = int_matrix(&ring, &[&[5, 1], &[1, 0]]);
        let rhs = vec![
            PAdicNumber::from_integer(5, 10, 7).unwrap(),
            PAdicNumber::from_integer(5, 10, 2).unwrap(),
        ];
        let sol = solve_padic(m.rows(), rhs).unwrap();
        // x = 2, y = 7 - 10 = -3
        assert!(sol[0].agrees_with(&PAdicNumber::from_integer(5, 10, 2).unwrap(), 10));
        assert!(sol[1].agrees_with(&PAdicNumber::from_integer(5, 10, -3).unwrap(), 10));
    }

    #[test]
    fn singular_matrix_reported() {
        let ring = qp(3, 8);
        let m = int_matrix(&ring, &[&[1, 2], &[2, 4]]);
        let rhs = vec![PAdicNumber::one(3, 8), PAdicNumber::one(3, 8)];
        assert!(matches!(
            solve_padic(m.rows(), rhs),
            Err(Error::PrecisionExhausted(_))
        ));
    }

    #[test]
    fn determinant_and_charpoly() {
        let ring = qp(7, 10);
        let m = int_matrix(&ring, &[&[1, 2], &[3, 4]]);
        let d = det(&ring, &m);
        assert!(d.agrees_with(&PAdicNumber::from_integer(7, 10, -2).unwrap(), 10));
        let cp = char_poly(&ring, &m);
        // x^2 - 5x - 2
        assert!(cp[0].agrees_with(&PAdicNumber::from_integer(7, 10, -2).unwrap(), 10));
        assert!(cp[1].agrees_with(&PAdicNumber::from_integer(7, 10, -5).unwrap(), 10));
        assert!(cp[2].agrees_with(&PAdicNumber::one(7, 10), 10));
    }

    #[test]
    fn sqrt_of_elementary_unipotent() {
        let ring = qp(5, 20);
        let v = int_matrix(&ring, &[&[1, 1], &[0, 1]]);
        let w = unipotent_nth_root(&ring, &v, 2).unwrap();
        // [[1, 1/2], [0, 1]]
        let half = PAdicNumber::from_rational(5, 20, 1, 2).unwrap();
        assert!(w.at(0, 1).agrees_with(&half, 20));
        let sq = mat_mul(&ring, &w, &w);
        assert!(sq
            .entries
            .iter()
            .zip(&v.entries)
            .all(|(a, b)| a.agrees_with(b, 20)));
    }

    #[test]
    fn identity_roots_are_identity() {
        let ring = qp(3, 15);
        let id = identity(&ring, 3);
        for n in 1..6 {
            let w = unipotent_nth_root(&ring, &id, n).unwrap();
            assert!(w
                .entries
                .iter()
                .zip(&id.entries)
                .all(|(a, b)| a.agrees_with(b, 14)));
        }
    }

    #[test]
    fn heisenberg_cube_root() {
        let ring = qp(5, 24);
        let v = int_matrix(&ring, &[&[1, 1, 0], &[0, 1, 1], &[0, 0, 1]]);
        let w = unipotent_nth_root(&ring, &v, 3).unwrap();
        let cube = mat_mul(&ring, &mat_mul(&ring, &w, &w), &w);
        assert!(cube
            .entries
            .iter()
            .zip(&v.entries)
            .all(|(a, b)| a.agrees_with(b, 22)));
        assert!(is_unipotent(&ring, &w));
    }

    #[test]
    fn budget_precomputed() {
        // over Q_2, C(1/2, k) denominators cost digits; a 5x5 series needs
        // v_2(n^k k!) headroom
        let loss = binomial_series_loss(2, 5, 2);
        assert!(loss >= 7); // 2^4 * 4! = 384 = 2^7 * 3
        let ring = qp(2, 6);
        let v = int_matrix(
            &ring,
            &[
                &[1, 1, 0, 0, 0],
                &[0, 1, 1, 0, 0],
                &[0, 0, 1, 1, 0],
                &[0, 0, 0, 1, 1],
                &[0, 0, 0, 0, 1],
            ],
        );
        assert!(matches!(
            unipotent_nth_root(&ring, &v, 2),
            Err(Error::PrecisionExhausted(_))
        ));
    }

    #[test]
    fn unipotency_detection() {
        let ring = qp(5, 12);
        assert!(is_unipotent(&ring, &int_matrix(&ring, &[&[1, 3], &[0, 1]])));
        assert!(!is_unipotent(&ring, &int_matrix(&ring, &[&[2, 0], &[0, 1]])));
        // conjugated unipotent: [[2, -1], [1, 0]] = P [[1,1],[0,1]] P^-1
        assert!(is_unipotent(&ring, &int_matrix(&ring, &[&[2, -1], &[1, 0]])));
    }
}
