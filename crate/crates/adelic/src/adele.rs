//! Truncated finite adeles of a number field.
//!
//! A [`TruncatedAdele`] stores exact components at a finite window of
//! places and a rational-integer tail default: outside the window every
//! component equals the default, which lies in `O_p` at every place, so
//! the integral-tail assertion is maintained by construction. Ring
//! operations act componentwise on the union window and on the defaults
//! (integers are closed under ring operations, so truncation is exact).
//!
//! Principal maximal ideals are the kernels of the evaluation maps at
//! single places; their quotients are the completions. The additive
//! change of basis realizes `(⊕_{p|p} O_p, +) ≅ (Z_p^n, +)` per prime,
//! and the multiplicative decomposition splits a local unit into
//! uniformizer power, Teichmüller part, one-unit logarithm, and p-power
//! torsion.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::primes_up_to;
use crate::error::{Error, Result};
use crate::localfield::{LocalField, LocalFieldElement};
use crate::matrix::invert_padic;
use crate::numberfield::NumberField;
use crate::padic::{PAdicNumber, Valuation};

/// A finite place: rational prime plus canonical factor index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PlaceId {
    pub p: u64,
    pub index: usize,
}

impl fmt::Display for PlaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.p, self.index)
    }
}

/// Finite-support adele with an exact integer tail.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedAdele {
    field: NumberField,
    window: BTreeMap<PlaceId, LocalFieldElement>,
    /// Every omitted component equals this rational integer (hence is
    /// integral at every omitted place).
    tail_default: BigInt,
    precision: u32,
}

/// The four adele ring operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdeleOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// One place's worth of the multiplicative decomposition
/// `z = π^exponent · ω(teichmueller) · exp(Σ one_unit_log) · ζ^torsion_index`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitDecomposition {
    pub place: PlaceId,
    /// ideal exponent: the extension valuation of the component
    pub exponent: i64,
    /// residue-field coordinates of the Teichmüller part
    pub teichmueller: Vec<u64>,
    /// power-basis coordinates of log of the one-unit part
    pub one_unit_log: Vec<PAdicNumber>,
    /// index into the cyclic group of p-power roots of unity
    pub torsion_index: u32,
    /// |μ_{p^∞}| at this place
    pub torsion_order: u64,
}

/// The additive isomorphism `(⊕_{p|p} K_p, +) ↔ (Q_p^n, +)` at one prime,
/// realized by a block change of basis whose blocks send the power basis
/// of each completion's distinguished generator to tower coordinates.
#[derive(Debug, Clone)]
pub struct AdditiveIsomorphism {
    pub p: u64,
    pub blocks: Vec<AdditiveBlock>,
}

#[derive(Debug, Clone)]
pub struct AdditiveBlock {
    pub field: LocalField,
    /// columns = tower coordinates of generator powers (size d×d)
    pub forward: Vec<Vec<PAdicNumber>>,
    pub inverse: Vec<Vec<PAdicNumber>>,
}

impl AdditiveIsomorphism {
    /// Total matrix size; always the field degree.
    pub fn size(&self) -> usize {
        self.blocks.iter().map(|b| b.forward.len()).sum()
    }

    /// `Q_p^n` coordinates → per-factor tower elements.
    pub fn from_qp_vector(&self, v: &[PAdicNumber]) -> Result<Vec<LocalFieldElement>> {
        if v.len() != self.size() {
            return Err(Error::DomainViolation(format!(
                "expected {} coordinates, got {}",
                self.size(),
                v.len()
            )));
        }
        let mut out = vec![];
        let mut offset = 0;
        for b in &self.blocks {
            let d = b.forward.len();
            let chunk = &v[offset..offset + d];
            let coords: Vec<PAdicNumber> = (0..d)
                .map(|r| {
                    let mut acc = PAdicNumber::zero(self.p);
                    for (c, x) in chunk.iter().enumerate() {
                        acc = acc.add(&b.forward[r][c].mul(x)?)?;
                    }
                    Ok(acc)
                })
                .collect::<Result<_>>()?;
            out.push(LocalFieldElement { coords });
            offset += d;
        }
        Ok(out)
    }

    /// Per-factor tower elements → `Q_p^n` coordinates.
    pub fn to_qp_vector(&self, elts: &[LocalFieldElement]) -> Result<Vec<PAdicNumber>> {
        if elts.len() != self.blocks.len() {
            return Err(Error::DomainViolation(format!(
                "expected {} components, got {}",
                self.blocks.len(),
                elts.len()
            )));
        }
        let mut out = vec![];
        for (b, x) in self.blocks.iter().zip(elts) {
            let d = b.inverse.len();
            if x.coords.len() != d {
                return Err(Error::DomainViolation(
                    "component has wrong coordinate count".into(),
                ));
            }
            for r in 0..d {
                let mut acc = PAdicNumber::zero(self.p);
                for (c, y) in x.coords.iter().enumerate() {
                    acc = acc.add(&b.inverse[r][c].mul(y)?)?;
                }
                out.push(acc);
            }
        }
        Ok(out)
    }
}

impl TruncatedAdele {
    /// The zero adele (empty window, tail 0).
    pub fn zero(field: &NumberField, precision: u32) -> Self {
        TruncatedAdele {
            field: field.clone(),
            window: BTreeMap::new(),
            tail_default: BigInt::zero(),
            precision,
        }
    }

    /// The unit adele 1 (empty window, tail 1).
    pub fn one(field: &NumberField, precision: u32) -> Self {
        TruncatedAdele {
            field: field.clone(),
            window: BTreeMap::new(),
            tail_default: BigInt::one(),
            precision,
        }
    }

    pub fn from_components(
        field: &NumberField,
        components: Vec<(PlaceId, LocalFieldElement)>,
        tail_default: BigInt,
        precision: u32,
    ) -> Result<Self> {
        let mut window = BTreeMap::new();
        for (place, elt) in components {
            // the place must resolve and the element must fit it
            let completion = field.completion(place.p, place.index, precision)?;
            if elt.coords.len() != completion.degree() as usize {
                return Err(Error::DomainViolation(format!(
                    "component at {} has {} coordinates, completion has degree {}",
                    place,
                    elt.coords.len(),
                    completion.degree()
                )));
            }
            if window.insert(place, elt).is_some() {
                return Err(Error::DomainViolation(format!("duplicate place {}", place)));
            }
        }
        Ok(TruncatedAdele {
            field: field.clone(),
            window,
            tail_default,
            precision,
        })
    }

    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn support(&self) -> Vec<PlaceId> {
        self.window.keys().copied().collect()
    }

    pub fn tail_default(&self) -> &BigInt {
        &self.tail_default
    }

    pub fn component(&self, place: PlaceId) -> Option<&LocalFieldElement> {
        self.window.get(&place)
    }

    /// Evaluation at a place: the quotient map onto the completion. The
    /// kernel of this map is the principal maximal ideal at the place.
    pub fn evaluate(&self, place: PlaceId) -> Result<LocalFieldElement> {
        let completion = self.field.completion(place.p, place.index, self.precision)?;
        Ok(match self.window.get(&place) {
            Some(x) => x.clone(),
            None => completion.from_integer(self.tail_default.clone()),
        })
    }

    /// Is every component a unit (window components of valuation 0, tail
    /// default ±1)?
    pub fn is_unit(&self) -> Result<bool> {
        if !(self.tail_default.is_one() || (-&self.tail_default).is_one()) {
            return Ok(false);
        }
        for (place, x) in &self.window {
            let completion = self.field.completion(place.p, place.index, self.precision)?;
            if completion.valuation(x) != Valuation::Finite(0) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Componentwise ring operation on the union window.
    pub fn arith(&self, other: &TruncatedAdele, op: AdeleOp) -> Result<TruncatedAdele> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if op == AdeleOp::Div {
            if !other.is_unit()? {
                return Err(Error::NonUnitDivisor(
                    "division requires a unit adele with unit tail".into(),
                ));
            }
        }
        let precision = self.precision.min(other.precision);
        let mut places: Vec<PlaceId> = self.window.keys().copied().collect();
        for k in other.window.keys() {
            if !places.contains(k) {
                places.push(*k);
            }
        }
        places.sort();
        let mut window = BTreeMap::new();
        for place in places {
            let completion = self.field.completion(place.p, place.index, precision)?;
            let a = match self.window.get(&place) {
                Some(x) => x.clone(),
                None => completion.from_integer(self.tail_default.clone()),
            };
            let b = match other.window.get(&place) {
                Some(x) => x.clone(),
                None => completion.from_integer(other.tail_default.clone()),
            };
            let c = match op {
                AdeleOp::Add => completion.add(&a, &b),
                AdeleOp::Sub => completion.sub(&a, &b),
                AdeleOp::Mul => completion.mul(&a, &b),
                AdeleOp::Div => completion.div(&a, &b)?,
            };
            window.insert(place, c);
        }
        let tail_default = match op {
            AdeleOp::Add => &self.tail_default + &other.tail_default,
            AdeleOp::Sub => &self.tail_default - &other.tail_default,
            AdeleOp::Mul => &self.tail_default * &other.tail_default,
            AdeleOp::Div => {
                // divisor tail is ±1
                &self.tail_default * &other.tail_default
            }
        };
        Ok(TruncatedAdele {
            field: self.field.clone(),
            window,
            tail_default,
            precision,
        })
    }
}

/// JSON form: `{field, places: [{p, index, element}], tail}`.
#[derive(Serialize, Deserialize)]
struct AdeleJson {
    field: String,
    places: Vec<PlaceJson>,
    tail: TailJson,
    #[serde(rename = "N")]
    n: u32,
}

#[derive(Serialize, Deserialize)]
struct PlaceJson {
    p: u64,
    index: usize,
    element: LocalFieldElement,
}

#[derive(Serialize, Deserialize)]
struct TailJson {
    kind: String,
    default: String,
}

impl Serialize for TruncatedAdele {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        AdeleJson {
            field: self.field.defining_poly().to_string(),
            places: self
                .window
                .iter()
                .map(|(pl, elt)| PlaceJson {
                    p: pl.p,
                    index: pl.index,
                    element: elt.clone(),
                })
                .collect(),
            tail: TailJson {
                kind: "integral".into(),
                default: self.tail_default.to_string(),
            },
            n: self.precision,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TruncatedAdele {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as DeError;
        let j = AdeleJson::deserialize(d)?;
        let field = NumberField::parse(&j.field).map_err(D::Error::custom)?;
        let default: BigInt = j.tail.default.parse().map_err(D::Error::custom)?;
        TruncatedAdele::from_components(
            &field,
            j.places
                .into_iter()
                .map(|pl| {
                    (
                        PlaceId {
                            p: pl.p,
                            index: pl.index,
                        },
                        pl.element,
                    )
                })
                .collect(),
            default,
            j.n,
        )
        .map_err(D::Error::custom)
    }
}

/// The quotient of the finite adele ring by the principal maximal ideal
/// at a place: the completion there.
pub fn maximal_ideal_quotient(
    field: &NumberField,
    place: PlaceId,
    precision: u32,
) -> Result<LocalField> {
    field.completion(place.p, place.index, precision)
}

/// All places of the field over a single prime, in canonical order.
pub fn places_over(field: &NumberField, p: u64) -> Result<Vec<PlaceId>> {
    let d = field.decompose(p)?;
    if !d.supported {
        return Err(Error::Unsupported(
            d.reason.unwrap_or_else(|| "unsupported prime".into()),
        ));
    }
    Ok((0..d.pairs.len()).map(|index| PlaceId { p, index }).collect())
}

/// Build the additive change of basis realizing `⊕_{p|p} O_p ≅ Z_p^n`.
///
/// Per factor the distinguished generator is the image of the defining
/// root: ω for unramified factors, `π + shift` for the Eisenstein ones.
/// Its powers form a `Z_p`-basis of the valuation ring, so the block
/// matrices are integral with integral inverses.
pub fn additive_isomorphism(
    field: &NumberField,
    p: u64,
    precision: u32,
) -> Result<AdditiveIsomorphism> {
    let completions = field.completions(p, precision)?;
    let mut blocks = vec![];
    for fld in completions {
        let d = fld.degree() as usize;
        let gen = distinguished_generator(&fld);
        // columns: coordinates of gen^j
        let mut fwd = vec![vec![PAdicNumber::zero(p); d]; d];
        let mut power = fld.one();
        for j in 0..d {
            for r in 0..d {
                fwd[r][j] = power.coords[r].clone();
            }
            if j + 1 < d {
                power = fld.mul(&power, &gen);
            }
        }
        let inv = invert_padic(&fwd, p, precision)?;
        // integrality check: both directions must be integral
        for row in fwd.iter().chain(inv.iter()) {
            for x in row {
                if let Valuation::Finite(v) = x.valuation() {
                    if v < 0 {
                        return Err(Error::PrecisionExhausted(
                            "additive basis matrix is not integral".into(),
                        ));
                    }
                }
            }
        }
        blocks.push(AdditiveBlock {
            field: fld,
            forward: fwd,
            inverse: inv,
        });
    }
    Ok(AdditiveIsomorphism { p, blocks })
}

/// The generator whose powers give the additive basis: the image of the
/// defining root in this completion.
fn distinguished_generator(fld: &LocalField) -> LocalFieldElement {
    if fld.ramification_index() == 1 {
        fld.omega()
    } else {
        // Eisenstein factors arise from a shift x -> x + a, so the root
        // of the defining polynomial is π + a; π alone generates the
        // same ring, and its powers are the canonical integral basis.
        fld.pi()
    }
}

/// Decompose every component of a unit adele at its supported places.
pub fn multiplicative_decomposition(adele: &TruncatedAdele) -> Result<Vec<UnitDecomposition>> {
    let mut out = vec![];
    for place in adele.support() {
        let completion = adele
            .field()
            .completion(place.p, place.index, adele.precision)?;
        let z = adele.evaluate(place)?;
        out.push(decompose_unit(&completion, &z, place)?);
    }
    Ok(out)
}

/// Split one nonzero local element into uniformizer power, Teichmüller
/// part, one-unit logarithm coordinates, and p-power torsion.
pub fn decompose_unit(
    fld: &LocalField,
    z: &LocalFieldElement,
    place: PlaceId,
) -> Result<UnitDecomposition> {
    let v = match fld.valuation(z) {
        Valuation::Infinite => {
            return Err(Error::PrecisionExhausted(
                "cannot decompose (indistinguishable from) zero".into(),
            ))
        }
        Valuation::Finite(v) => v,
    };
    let pi = fld.pi();
    let unit = if v >= 0 {
        fld.div(z, &fld.pow(&pi, v as u64))?
    } else {
        fld.mul(z, &fld.pow(&pi, (-v) as u64))
    };
    let r = fld.residue(&unit)?;
    let teich = fld.teichmueller(&r)?;
    let one_unit = fld.div(&unit, &teich)?;
    let (mu_order, zeta) = fld.mu_p_power_with_generator()?;
    let threshold = fld.exp_threshold();
    // peel a torsion factor so the rest lands in the exp/log range
    let mut candidates: Vec<(u32, LocalFieldElement)> = vec![(0, one_unit.clone())];
    if let Some(zeta) = &zeta {
        let zeta_inv = fld.inv(zeta)?;
        let mut w = one_unit.clone();
        for t in 1..mu_order as u32 {
            w = fld.mul(&w, &zeta_inv);
            candidates.push((t, w.clone()));
        }
    }
    for (t, w) in candidates {
        let wv = fld.valuation(&fld.sub(&w, &fld.one()));
        let in_range = match wv {
            Valuation::Infinite => true,
            Valuation::Finite(x) => x >= threshold,
        };
        if in_range {
            let lg = fld.log(&w)?;
            return Ok(UnitDecomposition {
                place,
                exponent: v,
                teichmueller: r.coeffs.clone(),
                one_unit_log: lg.coords,
                torsion_index: t,
                torsion_order: mu_order,
            });
        }
    }
    Err(Error::Unsupported(
        "one-unit lies outside the certified torsion × exp-range decomposition class"
            .into(),
    ))
}

/// Reassemble `π^exponent · ω(teich) · exp(log) · ζ^torsion`.
pub fn recompose_unit(fld: &LocalField, dec: &UnitDecomposition) -> Result<LocalFieldElement> {
    let pi = fld.pi();
    let pi_pow = if dec.exponent >= 0 {
        fld.pow(&pi, dec.exponent as u64)
    } else {
        fld.inv(&fld.pow(&pi, (-dec.exponent) as u64))?
    };
    let r = crate::fp::FpPoly::new(fld.prime(), dec.teichmueller.clone());
    let teich = fld.teichmueller(&r)?;
    let lg = fld.from_coords(dec.one_unit_log.clone())?;
    let one_unit = fld.exp(&lg)?;
    let mut out = fld.mul(&fld.mul(&pi_pow, &teich), &one_unit);
    if dec.torsion_index > 0 {
        let (_, zeta) = fld.mu_p_power_with_generator()?;
        let zeta = zeta.ok_or_else(|| {
            Error::DomainViolation("torsion index given but μ is trivial".into())
        })?;
        out = fld.mul(&out, &fld.pow(&zeta, dec.torsion_index as u64));
    }
    Ok(out)
}

/// Torsion multiset report over a prime window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionReport {
    /// sorted multiset of cyclic orders: per place, |k*| and |μ_{p^∞}|
    pub orders: Vec<u64>,
    pub bound: u64,
    pub skipped_primes: Vec<u64>,
}

/// The torsion product probe: per supported place over p ≤ bound,
/// contribute `p^f - 1` (the prime-to-p cyclic part) and `|μ_{p^∞}|`.
pub fn torsion_multiset(field: &NumberField, bound: u64, precision: u32) -> Result<TorsionReport> {
    let mut orders = vec![];
    let mut skipped = vec![];
    for p in primes_up_to(bound) {
        let d = field.decompose(p)?;
        if !d.supported {
            skipped.push(p);
            continue;
        }
        for (i, &(e, f)) in d.pairs.iter().enumerate() {
            let q = pow_u64(p, f).ok_or_else(|| {
                Error::PrecisionExhausted("residue field too large".into())
            })?;
            orders.push(q - 1);
            let mu = if e == 1 {
                // unramified places: ζ_p needs ramification p-1, so only
                // p = 2 contributes (μ = {±1})
                if p == 2 {
                    2
                } else {
                    1
                }
            } else {
                field.completion(p, i, precision)?.mu_p_power()?
            };
            orders.push(mu);
        }
    }
    orders.sort();
    Ok(TorsionReport {
        orders,
        bound,
        skipped_primes: skipped,
    })
}

fn pow_u64(p: u64, k: u32) -> Option<u64> {
    let mut acc = 1u64;
    for _ in 0..k {
        acc = acc.checked_mul(p)?;
    }
    Some(acc)
}
