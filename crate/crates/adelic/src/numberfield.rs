//! Number fields from monic irreducible integer polynomials: prime
//! decomposition, decomposition types, arithmetic-equivalence scanning,
//! and extraction of completions as local-field towers.
//!
//! For p not dividing the polynomial discriminant, decomposition is
//! factorization mod p. For p dividing it, one shift-and-Newton-polygon
//! attempt is made (Hensel separation of the repeated part, then Ore's
//! regularity conditions); if that fails the prime is reported
//! unsupported rather than guessed. Skipping finitely many primes is
//! sound for equivalence scans, which are all-but-finitely-many claims.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, primes_up_to};
use crate::error::{Error, Result};
use crate::fp::FpPoly;
use crate::localfield::LocalField;
use crate::zpoly::{self, newton_polygon, ZPoly};

/// A number field `Q[x]/(f)` for a monic irreducible integer polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumberField {
    defining_poly: ZPoly,
    degree: u32,
    poly_discriminant: BigInt,
}

/// How a completion is presented.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CompletionKind {
    /// Unramified of degree f: tower (p, f, e = 1).
    Unramified { unramified_poly: ZPoly },
    /// Totally ramified of degree e: integer Eisenstein polynomial.
    TotallyRamified { eisenstein_poly: ZPoly },
}

/// One certified p-adic factor of the defining polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaceFactor {
    pub e: u32,
    pub f: u32,
    pub kind: CompletionKind,
}

/// The decomposition of a rational prime in a number field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionType {
    pub p: u64,
    /// (e_i, f_i) pairs, sorted by f then e.
    pub pairs: Vec<(u32, u32)>,
    pub supported: bool,
    pub reason: Option<String>,
    pub(crate) factors: Vec<PlaceFactor>,
}

impl DecompositionType {
    fn unsupported(p: u64, reason: impl Into<String>) -> Self {
        DecompositionType {
            p,
            pairs: vec![],
            supported: false,
            reason: Some(reason.into()),
            factors: vec![],
        }
    }

    fn from_factors(p: u64, mut factors: Vec<PlaceFactor>) -> Self {
        factors.sort_by(|a, b| {
            let ka = (a.f, a.e, completion_sort_key(&a.kind));
            let kb = (b.f, b.e, completion_sort_key(&b.kind));
            ka.cmp(&kb)
        });
        DecompositionType {
            p,
            pairs: factors.iter().map(|pf| (pf.e, pf.f)).collect(),
            supported: true,
            reason: None,
            factors,
        }
    }
}

fn completion_sort_key(kind: &CompletionKind) -> Vec<BigInt> {
    match kind {
        CompletionKind::Unramified { unramified_poly } => unramified_poly.coeffs.clone(),
        CompletionKind::TotallyRamified { eisenstein_poly } => eisenstein_poly.coeffs.clone(),
    }
}

/// Verdict of an arithmetic-equivalence scan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum EquivalenceVerdict {
    EquivalentUpTo { bound: u64 },
    Inequivalent { witness: u64 },
    /// Degrees differ; also inequivalent, with the degree pair as witness.
    Incomparable { degrees: (u32, u32) },
}

/// Full scan report: verdict plus the window actually examined.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub verdict: EquivalenceVerdict,
    pub bound: u64,
    pub skipped_primes: Vec<u64>,
}

impl NumberField {
    /// Construct from a monic integer polynomial; rejects reducible input.
    pub fn new(poly: ZPoly) -> Result<Self> {
        if poly.degree() < 1 {
            return Err(Error::InvalidPolynomial("degree must be >= 1".into()));
        }
        if !poly.is_monic() {
            return Err(Error::InvalidPolynomial(
                "defining polynomial must be monic".into(),
            ));
        }
        if !zpoly::is_irreducible_over_q(&poly)? {
            return Err(Error::Reducible(format!("{}", poly)));
        }
        let degree = poly.degree() as u32;
        let poly_discriminant = poly.discriminant();
        Ok(NumberField {
            defining_poly: poly,
            degree,
            poly_discriminant,
        })
    }

    pub fn parse(input: &str) -> Result<Self> {
        NumberField::new(zpoly::parse_poly(input)?)
    }

    pub fn defining_poly(&self) -> &ZPoly {
        &self.defining_poly
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn poly_discriminant(&self) -> &BigInt {
        &self.poly_discriminant
    }

    /// Decompose a rational prime: the multiset of (e_i, f_i) with
    /// Σ e_i f_i = degree, when certifiable.
    pub fn decompose(&self, p: u64) -> Result<DecompositionType> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let n = self.degree as usize;
        let disc_divisible = (&self.poly_discriminant % BigInt::from(p)).is_zero();
        let fp = self.defining_poly.reduce_mod(p);
        let modular = fp.factor();
        if !disc_divisible {
            // squarefree mod p: every factor is unramified
            let factors = modular
                .into_iter()
                .map(|(g, m)| {
                    debug_assert_eq!(m, 1);
                    PlaceFactor {
                        e: 1,
                        f: g.degree() as u32,
                        kind: CompletionKind::Unramified {
                            unramified_poly: lift_fp(&g),
                        },
                    }
                })
                .collect();
            return Ok(DecompositionType::from_factors(p, factors));
        }
        // ramified attempt: Hensel-separate the pairwise-coprime grouped
        // factors φ_i^{m_i}, then analyze each repeated group by a shift
        // and its Newton polygon
        let lift_prec: u32 = 64.max(2 * crate::DEFAULT_PRECISION);
        let groups: Vec<(FpPoly, u32)> = modular;
        let grouped_polys: Vec<FpPoly> = groups
            .iter()
            .map(|(g, m)| {
                let mut acc = FpPoly::constant(p, 1);
                for _ in 0..*m {
                    acc = acc.mul(g);
                }
                acc
            })
            .collect();
        let lifted = if grouped_polys.len() > 1 {
            zpoly::hensel_lift_multi(&self.defining_poly, &grouped_polys, p, lift_prec)
                .into_iter()
                .map(|zk| zk.to_zpoly_balanced())
                .collect()
        } else {
            vec![self.defining_poly.clone()]
        };
        let mut factors: Vec<PlaceFactor> = vec![];
        for ((g, m), lifted_factor) in groups.iter().zip(lifted) {
            if *m == 1 {
                factors.push(PlaceFactor {
                    e: 1,
                    f: g.degree() as u32,
                    kind: CompletionKind::Unramified {
                        unramified_poly: lift_fp(g),
                    },
                });
                continue;
            }
            if g.degree() != 1 {
                return Ok(DecompositionType::unsupported(
                    p,
                    format!(
                        "repeated factor of degree {} mod {}: beyond the one-shift attempt",
                        g.degree(),
                        p
                    ),
                ));
            }
            // φ = x - a: shift so the repeated root sits at 0
            let a = BigInt::from((p - g.coeffs[0] % p) % p);
            let shifted = lifted_factor.shift(&a);
            match analyze_ramified_group(&shifted, p)? {
                Some(mut fs) => factors.append(&mut fs),
                None => {
                    return Ok(DecompositionType::unsupported(
                        p,
                        format!(
                            "Newton polygon of the shifted factor at {} is not regular enough",
                            p
                        ),
                    ))
                }
            }
        }
        let total: usize = factors.iter().map(|pf| (pf.e * pf.f) as usize).sum();
        if total != n {
            return Err(Error::PrecisionExhausted(format!(
                "decomposition bookkeeping failed at {}: got total degree {}, expected {}",
                p, total, n
            )));
        }
        Ok(DecompositionType::from_factors(p, factors))
    }

    /// The decomposition type as the sorted multiset of residue degrees.
    pub fn split_type(&self, p: u64) -> Result<Vec<u32>> {
        let d = self.decompose(p)?;
        if !d.supported {
            return Err(Error::Unsupported(
                d.reason.unwrap_or_else(|| "unsupported prime".into()),
            ));
        }
        let mut fs: Vec<u32> = d.pairs.iter().map(|&(_, f)| f).collect();
        fs.sort();
        Ok(fs)
    }

    /// Compare split types for all primes up to `bound` away from both
    /// discriminants. The witness is always the smallest mismatching prime.
    pub fn arithmetically_equivalent(&self, other: &NumberField, bound: u64) -> ScanReport {
        if self.degree != other.degree {
            return ScanReport {
                verdict: EquivalenceVerdict::Incomparable {
                    degrees: (self.degree, other.degree),
                },
                bound,
                skipped_primes: vec![],
            };
        }
        let mut skipped = vec![];
        for p in primes_up_to(bound) {
            let bad = (&self.poly_discriminant % BigInt::from(p)).is_zero()
                || (&other.poly_discriminant % BigInt::from(p)).is_zero();
            if bad {
                skipped.push(p);
                continue;
            }
            let s = self.split_type(p).expect("good prime is supported");
            let t = other.split_type(p).expect("good prime is supported");
            if s != t {
                return ScanReport {
                    verdict: EquivalenceVerdict::Inequivalent { witness: p },
                    bound,
                    skipped_primes: skipped,
                };
            }
        }
        ScanReport {
            verdict: EquivalenceVerdict::EquivalentUpTo { bound },
            bound,
            skipped_primes: skipped,
        }
    }

    /// The completion at the i-th factor (canonical order) over p.
    pub fn completion(&self, p: u64, index: usize, precision: u32) -> Result<LocalField> {
        let d = self.decompose(p)?;
        if !d.supported {
            return Err(Error::Unsupported(
                d.reason.unwrap_or_else(|| "unsupported prime".into()),
            ));
        }
        let pf = d.factors.get(index).ok_or_else(|| {
            Error::DomainViolation(format!(
                "factor index {} out of range ({} factors over {})",
                index,
                d.factors.len(),
                p
            ))
        })?;
        build_completion(p, pf, precision)
    }

    /// All completions over p in canonical order.
    pub fn completions(&self, p: u64, precision: u32) -> Result<Vec<LocalField>> {
        let d = self.decompose(p)?;
        if !d.supported {
            return Err(Error::Unsupported(
                d.reason.unwrap_or_else(|| "unsupported prime".into()),
            ));
        }
        d.factors
            .iter()
            .map(|pf| build_completion(p, pf, precision))
            .collect()
    }
}

pub(crate) fn build_completion(p: u64, pf: &PlaceFactor, precision: u32) -> Result<LocalField> {
    match &pf.kind {
        CompletionKind::Unramified { unramified_poly } => {
            if pf.f == 1 {
                LocalField::qp(p, precision)
            } else {
                let mut e0 =
                    vec![crate::padic::PAdicNumber::from_integer(p, precision, -(p as i64))?];
                e0.extend(
                    std::iter::repeat(crate::padic::PAdicNumber::zero(p))
                        .take(pf.f as usize - 1),
                );
                LocalField::new(p, unramified_poly.clone(), vec![e0], precision)
            }
        }
        CompletionKind::TotallyRamified { eisenstein_poly } => {
            LocalField::eisenstein_over_qp(p, eisenstein_poly, precision)
        }
    }
}

fn lift_fp(g: &FpPoly) -> ZPoly {
    ZPoly::new(g.coeffs.iter().map(|&c| BigInt::from(c)).collect())
}

/// Ore-style one-level analysis of a shifted repeated factor
/// (G ≡ x^deg mod p). Returns the certified factors, or None when the
/// polygon data is not regular enough to certify towers.
fn analyze_ramified_group(shifted: &ZPoly, p: u64) -> Result<Option<Vec<PlaceFactor>>> {
    let segments = newton_polygon(shifted, p);
    // all-unramified case: every segment has e = 1 (integer root valuations)
    if segments.iter().all(|s| s.e == 1) {
        let mut out = vec![];
        for seg in &segments {
            let facs = seg.residual.factor();
            if facs.iter().any(|(_, m)| *m > 1) {
                return Ok(None); // residual not squarefree: not p-regular
            }
            for (r, _) in facs {
                out.push(PlaceFactor {
                    e: 1,
                    f: r.degree() as u32,
                    kind: CompletionKind::Unramified {
                        unramified_poly: lift_fp(&r),
                    },
                });
            }
        }
        return Ok(Some(out));
    }
    // single totally ramified Eisenstein segment
    if segments.len() == 1 {
        let seg = &segments[0];
        if seg.h == 1 && seg.e as usize == shifted.degree() {
            return Ok(Some(vec![PlaceFactor {
                e: seg.e as u32,
                f: 1,
                kind: CompletionKind::TotallyRamified {
                    eisenstein_poly: shifted.clone(),
                },
            }]));
        }
    }
    Ok(None)
}
