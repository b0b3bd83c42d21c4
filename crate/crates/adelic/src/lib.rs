//! Exact arithmetic in finite adele rings at desk scale.
//!
//! The crate works with finite prime sets and capped p-adic precision
//! throughout. It provides:
//!
//! - [`padic`] — capped-precision elements of `Q_p` with Hensel lifting,
//!   Teichmüller lifts, n-th roots, and one-unit log/exp;
//! - [`localfield`] — finite extensions of `Q_p` as unramified∘Eisenstein
//!   towers, unit-group structure, p-power roots of unity, and tame
//!   isomorphism testing;
//! - [`numberfield`] — number fields from monic irreducible integer
//!   polynomials, prime decomposition, and arithmetic-equivalence scans;
//! - [`adele`] — truncated finite adeles, principal maximal ideals and
//!   their quotients, the additive change of basis to `Z_p^n`, unit
//!   decompositions, and torsion multisets;
//! - [`grouprec`] — fertility of group descriptors, the divisibility ↔
//!   unipotency correspondence, binomial-series roots of unipotent
//!   matrices, Siegel power decompositions, and the pipeline recovering
//!   the multiset of local fields of a number field from the data of a
//!   fertile point group;
//! - [`cli`] — the report types and dispatch behind the `adelic` binary.
//!
//! Every verdict produced here is window-stamped: computations certify
//! statements up to an explicit prime bound or precision and never claim
//! the corresponding unbounded statement.

pub mod adele;
pub mod arith;
pub mod cli;
pub mod error;
pub mod fp;
pub mod grouprec;
pub mod localfield;
pub mod matrix;
pub mod numberfield;
pub mod padic;
pub mod zpoly;

pub use error::Error;
pub use padic::{PAdicNumber, Valuation};

/// Default relative precision (p-adic digits) used when none is given.
pub const DEFAULT_PRECISION: u32 = 40;

/// Default prime bound for equivalence and reconstruction scans.
pub const DEFAULT_BOUND: u64 = 100;

/// Default divisibility search bound.
pub const DEFAULT_NMAX: u32 = 30;
