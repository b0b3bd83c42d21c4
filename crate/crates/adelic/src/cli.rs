//! Command-line front end: one subcommand per pipeline stage, JSON
//! reports by default (golden-file friendly), `--text` for human tables.
//!
//! Exit codes: 0 on success, 1 on domain errors (with a machine-readable
//! error object on stdout), 2 on usage errors.

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::json;

use crate::adele::torsion_multiset;
use crate::error::{Error, Result};
use crate::grouprec::{
    compare_point_groups, is_divisible, reconstruct_local_fields, siegel_decompose_padic,
    siegel_decompose_rational, siegel_evaluate_padic, siegel_evaluate_rational,
    verify_obstruction, DivisibilityVerdict, GroupDescriptor,
};
use crate::localfield::{smallest_irreducible, LocalField};
use crate::matrix::{mat_pow, Matrix, QpRing, ScalarRing};
use crate::numberfield::{EquivalenceVerdict, NumberField};
use crate::padic::PAdicNumber;
use crate::zpoly::parse_poly;

#[derive(Parser)]
#[command(
    name = "adelic",
    version,
    about = "Exact desk-scale arithmetic in finite adele rings",
    max_term_width = 100
)]
struct Cli {
    #[command(flatten)]
    global: GlobalFlags,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args)]
struct GlobalFlags {
    /// Relative p-adic working precision (digits)
    #[arg(long, global = true, env = "ADELIC_PRECISION", default_value_t = crate::DEFAULT_PRECISION)]
    precision: u32,
    /// Prime bound for scans
    #[arg(long, global = true, default_value_t = crate::DEFAULT_BOUND)]
    bound: u64,
    /// Divisibility search bound
    #[arg(long, global = true, default_value_t = crate::DEFAULT_NMAX)]
    nmax: u32,
    /// Seed for randomized demos (reports are deterministic per seed)
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Render a human-readable summary instead of JSON
    #[arg(long, global = true)]
    text: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose a rational prime in a number field
    Decompose {
        /// Defining polynomial, e.g. "x^2+1" or "[1,0,1]"
        #[arg(long)]
        field: String,
        #[arg(long)]
        prime: u64,
    },
    /// Scan split types for arithmetic equivalence
    Equiv {
        #[arg(long = "fieldK")]
        field_k: String,
        #[arg(long = "fieldL")]
        field_l: String,
    },
    /// Unit group structure of a local field tower
    Units {
        #[arg(long)]
        prime: u64,
        /// Residue degree of the unramified part
        #[arg(long, default_value_t = 1)]
        f: u32,
        /// Eisenstein polynomial over Q_p, e.g. "x^2-5" (degree = e)
        #[arg(long)]
        eisenstein: Option<String>,
        /// Alternatively: take a completion of this number field
        #[arg(long)]
        field: Option<String>,
        /// Factor index when --field is given
        #[arg(long, default_value_t = 0)]
        index: usize,
    },
    /// Torsion multiset of a number field over a prime window
    Torsion {
        #[arg(long)]
        field: String,
    },
    /// Siegel's n-th power decomposition of a scalar
    Siegel {
        /// Rational input, e.g. "6" or "7/3"
        #[arg(long)]
        z: String,
        #[arg(long)]
        n: u32,
        /// Work in Q_p instead of Q
        #[arg(long)]
        prime: Option<u64>,
    },
    /// n-th root of a p-adic number, with obstruction certificates
    Root {
        #[arg(long)]
        prime: u64,
        /// Rational input, e.g. "6" or "1/2"
        #[arg(long)]
        x: String,
        #[arg(long)]
        n: u32,
    },
    /// Bounded divisibility test for a matrix over Q_p
    Divisible {
        #[arg(long)]
        prime: u64,
        /// JSON rows, e.g. "[[2,0],[0,1]]"; entries may be "a/b" strings
        #[arg(long)]
        matrix: String,
    },
    /// Fertility of a group descriptor
    Fertile {
        /// GL2, GL3, Borel-GL2, GaGm:a,b, axb:d
        #[arg(long)]
        group: String,
    },
    /// Recover the multiset of local fields from fertile point-group data
    Reconstruct {
        #[arg(long)]
        group: String,
        #[arg(long)]
        field: String,
    },
    /// Compare the recovered multisets of two fields
    Compare {
        #[arg(long)]
        group: String,
        #[arg(long = "fieldK")]
        field_k: String,
        #[arg(long = "fieldL")]
        field_l: String,
    },
}

/// Entry point used by the `adelic` binary; returns the process exit code.
pub fn main() -> i32 {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(output) => {
            println!("{}", output);
            0
        }
        Err(e) => {
            let obj = json!({
                "error": { "name": e.name(), "message": e.to_string() }
            });
            println!("{}", serde_json::to_string_pretty(&obj).unwrap());
            1
        }
    }
}

fn run(cli: &Cli) -> Result<String> {
    let g = &cli.global;
    match &cli.cmd {
        Command::Decompose { field, prime } => {
            let k = NumberField::parse(field)?;
            let d = k.decompose(*prime)?;
            let report = DecomposeReport {
                field: k.defining_poly().to_string(),
                prime: *prime,
                supported: d.supported,
                pairs: d.pairs.clone(),
                reason: d.reason.clone(),
            };
            if g.text {
                Ok(report.render())
            } else {
                Ok(pretty(&report))
            }
        }
        Command::Equiv { field_k, field_l } => {
            let k = NumberField::parse(field_k)?;
            let l = NumberField::parse(field_l)?;
            let scan = k.arithmetically_equivalent(&l, g.bound);
            let (verdict, witness) = match &scan.verdict {
                EquivalenceVerdict::EquivalentUpTo { bound } => (
                    format!("equivalent-up-to-{}", bound),
                    serde_json::Value::Null,
                ),
                EquivalenceVerdict::Inequivalent { witness } => (
                    "inequivalent".to_string(),
                    json!({ "kind": "prime", "value": witness }),
                ),
                EquivalenceVerdict::Incomparable { degrees } => (
                    "incomparable".to_string(),
                    json!({ "kind": "degree-mismatch", "degrees": [degrees.0, degrees.1] }),
                ),
            };
            let report = json!({
                "fieldK": k.defining_poly().to_string(),
                "fieldL": l.defining_poly().to_string(),
                "verdict": verdict,
                "bound": scan.bound,
                "witness": witness,
                "skipped_primes": scan.skipped_primes,
            });
            if g.text {
                Ok(format!(
                    "equivalence scan up to {}\n  verdict: {}\n  skipped: {:?}",
                    scan.bound, verdict, scan.skipped_primes
                ))
            } else {
                Ok(serde_json::to_string_pretty(&report).unwrap())
            }
        }
        Command::Units {
            prime,
            f,
            eisenstein,
            field,
            index,
        } => {
            let fld = match (field, eisenstein) {
                (Some(nf), _) => {
                    let k = NumberField::parse(nf)?;
                    k.completion(*prime, *index, g.precision)?
                }
                (None, Some(eis)) => {
                    let poly = parse_poly(eis)?;
                    if *f == 1 {
                        LocalField::eisenstein_over_qp(*prime, &poly, g.precision)?
                    } else {
                        return Err(Error::Unsupported(
                            "combined --f and --eisenstein towers: supply the Eisenstein \
                             coefficients over the unramified part via the library API"
                                .into(),
                        ));
                    }
                }
                (None, None) => {
                    if *f == 1 {
                        LocalField::qp(*prime, g.precision)?
                    } else {
                        let poly = smallest_irreducible(*prime, *f)?;
                        let e0: Vec<PAdicNumber> = std::iter::once(
                            PAdicNumber::from_integer(*prime, g.precision, -(*prime as i64))?,
                        )
                        .chain(
                            std::iter::repeat(PAdicNumber::zero(*prime)).take(*f as usize - 1),
                        )
                        .collect();
                        LocalField::new(*prime, poly, vec![e0], g.precision)?
                    }
                }
            };
            let u = fld.unit_group_structure()?;
            let (p, e, fdeg) = fld.invariants();
            let report = json!({
                "field": fld.to_string(),
                "p": p,
                "e": e,
                "f": fdeg,
                "cyclic_prime_to_p_order": u.cyclic_prime_to_p_order,
                "free_rank": u.free_rank,
                "mu_p_power_order": u.mu_p_power_order,
            });
            if g.text {
                Ok(format!(
                    "{}\n  O* = C_{} x Z_{}^{} x mu({})",
                    fld, u.cyclic_prime_to_p_order, p, u.free_rank, u.mu_p_power_order
                ))
            } else {
                Ok(serde_json::to_string_pretty(&report).unwrap())
            }
        }
        Command::Torsion { field } => {
            let k = NumberField::parse(field)?;
            let rep = torsion_multiset(&k, g.bound, g.precision)?;
            let report = json!({
                "field": k.defining_poly().to_string(),
                "bound": rep.bound,
                "orders": rep.orders,
                "skipped_primes": rep.skipped_primes,
            });
            if g.text {
                Ok(format!(
                    "torsion multiset up to {}\n  orders: {:?}\n  skipped: {:?}",
                    rep.bound, rep.orders, rep.skipped_primes
                ))
            } else {
                Ok(serde_json::to_string_pretty(&report).unwrap())
            }
        }
        Command::Siegel { z, n, prime } => match prime {
            None => {
                let zr = parse_rational(z)?;
                let terms = siegel_decompose_rational(&zr, *n)?;
                let back = siegel_evaluate_rational(&terms, *n);
                let report = json!({
                    "ring": "Q",
                    "z": zr.to_string(),
                    "n": n,
                    "terms": terms.iter().map(|t| json!({
                        "coefficient": t.coefficient.to_string(),
                        "base": t.base.to_string(),
                    })).collect::<Vec<_>>(),
                    "verified": back == zr,
                });
                if g.text {
                    Ok(format!(
                        "z = {} as a Z-combination of {}-th powers: {} terms, verified: {}",
                        zr,
                        n,
                        terms.len(),
                        back == zr
                    ))
                } else {
                    Ok(serde_json::to_string_pretty(&report).unwrap())
                }
            }
            Some(p) => {
                let (num, den) = parse_rational_parts(z)?;
                let zp = PAdicNumber::from_rational(*p, g.precision, num, den)?;
                let terms = siegel_decompose_padic(&zp, *n)?;
                let back = siegel_evaluate_padic(&terms, *n)?;
                let budget = zp.precision().unwrap_or(g.precision) as i64
                    - crate::arith::factorial_valuation(*n as u64, *p) as i64;
                let verified = back.agrees_with(&zp, budget.max(1));
                let report = json!({
                    "ring": format!("Q_{}", p),
                    "z": zp,
                    "n": n,
                    "terms": terms,
                    "verified": verified,
                    "agreement_digits": budget,
                });
                if g.text {
                    Ok(format!(
                        "z = {} over Q_{}: {} terms, verified to {} digits: {}",
                        zp,
                        p,
                        terms.len(),
                        budget,
                        verified
                    ))
                } else {
                    Ok(serde_json::to_string_pretty(&report).unwrap())
                }
            }
        },
        Command::Root { prime, x, n } => {
            let (num, den) = parse_rational_parts(x)?;
            let xp = PAdicNumber::from_rational(*prime, g.precision, num, den)?;
            let outcome = xp.nth_root(*n)?;
            let report = match &outcome {
                Ok(root) => json!({
                    "p": prime,
                    "x": xp,
                    "n": n,
                    "root": root,
                    "obstruction": serde_json::Value::Null,
                }),
                Err(obs) => json!({
                    "p": prime,
                    "x": xp,
                    "n": n,
                    "root": serde_json::Value::Null,
                    "obstruction": obs,
                }),
            };
            if g.text {
                Ok(match &outcome {
                    Ok(root) => format!("{}-th root of {} = {}", n, xp, root),
                    Err(obs) => format!("no {}-th root of {}: {}", n, xp, obs),
                })
            } else {
                Ok(serde_json::to_string_pretty(&report).unwrap())
            }
        }
        Command::Divisible { prime, matrix } => {
            let ring = QpRing::new(*prime, g.precision);
            let m = parse_matrix(&ring, matrix)?;
            let verdict = is_divisible(&ring, &m, g.nmax)?;
            let report = match &verdict {
                DivisibilityVerdict::Divisible { roots } => {
                    let verified = roots.iter().all(|(n, w)| {
                        let pw = mat_pow(&ring, w, *n as u64);
                        pw.entries
                            .iter()
                            .zip(&m.entries)
                            .all(|(a, b)| ring.agrees(a, b, 1))
                    });
                    json!({
                        "p": prime,
                        "nmax": g.nmax,
                        "verdict": "divisible-up-to-nmax",
                        "roots_constructed": roots.len(),
                        "verified": verified,
                    })
                }
                DivisibilityVerdict::NotDivisible { n, obstruction } => json!({
                    "p": prime,
                    "nmax": g.nmax,
                    "verdict": "not-divisible",
                    "n": n,
                    "certificate": obstruction,
                    "verified": verify_obstruction(&ring, &m, *n, obstruction),
                }),
                DivisibilityVerdict::NoCertificate { n_max } => json!({
                    "p": prime,
                    "nmax": n_max,
                    "verdict": "no-certificate-found",
                }),
            };
            if g.text {
                Ok(match &verdict {
                    DivisibilityVerdict::Divisible { roots } => format!(
                        "divisible up to {} ({} roots constructed)",
                        g.nmax,
                        roots.len()
                    ),
                    DivisibilityVerdict::NotDivisible { n, .. } => {
                        format!("not divisible: obstruction at n = {}", n)
                    }
                    DivisibilityVerdict::NoCertificate { n_max } => {
                        format!("no certificate found up to {}", n_max)
                    }
                })
            } else {
                Ok(serde_json::to_string_pretty(&report).unwrap())
            }
        }
        Command::Fertile { group } => {
            let desc = GroupDescriptor::parse(group)?;
            let rep = desc.is_fertile();
            let report = json!({
                "group": desc.name,
                "fertile": rep.fertile,
                "witness": rep.witness,
                "failure": rep.failure,
            });
            if g.text {
                Ok(format!(
                    "{}: {}",
                    desc.name,
                    if rep.fertile {
                        format!("fertile, witness {:?}", rep.witness.unwrap())
                    } else {
                        format!("not fertile ({})", rep.failure.unwrap_or_default())
                    }
                ))
            } else {
                Ok(serde_json::to_string_pretty(&report).unwrap())
            }
        }
        Command::Reconstruct { group, field } => {
            let desc = GroupDescriptor::parse(group)?;
            let k = NumberField::parse(field)?;
            let rep = reconstruct_local_fields(&desc, &k, g.bound, g.precision)?;
            let report = json!({
                "group": rep.group,
                "field": k.defining_poly().to_string(),
                "bound": rep.window,
                "ell": rep.ell,
                "raw_ideal_count": rep.raw_ideal_count,
                "places": rep.places.iter().map(|pl| json!({
                    "p": pl.place.p,
                    "index": pl.place.index,
                    "e": pl.e,
                    "f": pl.f,
                    "display": pl.tower.to_string(),
                })).collect::<Vec<_>>(),
                "skipped_primes": rep.skipped_primes,
            });
            if g.text {
                let mut lines = vec![format!(
                    "{} over {}: ell = {}, {} ideals over window {}",
                    rep.group,
                    k.defining_poly(),
                    rep.ell,
                    rep.raw_ideal_count,
                    rep.window
                )];
                for pl in &rep.places {
                    lines.push(format!("  {} -> {}", pl.place, pl.tower));
                }
                Ok(lines.join("\n"))
            } else {
                Ok(serde_json::to_string_pretty(&report).unwrap())
            }
        }
        Command::Compare {
            group,
            field_k,
            field_l,
        } => {
            let desc = GroupDescriptor::parse(group)?;
            let k = NumberField::parse(field_k)?;
            let l = NumberField::parse(field_l)?;
            let rep = compare_point_groups(&desc, &k, &l, g.bound, g.precision)?;
            let report = json!({
                "group": rep.group,
                "fieldK": k.defining_poly().to_string(),
                "fieldL": l.defining_poly().to_string(),
                "verdict": rep.verdict,
                "window": rep.window,
                "theorem_backed": rep.theorem_backed,
                "ell": rep.ell,
                "per_place": rep.per_place,
                "skipped_primes": rep.skipped_primes,
                "flags": rep.flags,
            });
            if g.text {
                Ok(format!(
                    "compare {} on {} vs {}: {:?} (window {}, theorem-backed: {})",
                    rep.group,
                    k.defining_poly(),
                    l.defining_poly(),
                    rep.verdict,
                    rep.window,
                    rep.theorem_backed
                ))
            } else {
                Ok(serde_json::to_string_pretty(&report).unwrap())
            }
        }
    }
}

#[derive(Serialize)]
struct DecomposeReport {
    field: String,
    prime: u64,
    supported: bool,
    pairs: Vec<(u32, u32)>,
    reason: Option<String>,
}

impl DecomposeReport {
    fn render(&self) -> String {
        if self.supported {
            format!(
                "{} at {}: pairs (e,f) = {:?}",
                self.field, self.prime, self.pairs
            )
        } else {
            format!(
                "{} at {}: unsupported ({})",
                self.field,
                self.prime,
                self.reason.clone().unwrap_or_default()
            )
        }
    }
}

fn pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).unwrap()
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let (num, den) = parse_rational_parts(s)?;
    if den.is_zero() {
        return Err(Error::Parse("zero denominator".into()));
    }
    Ok(BigRational::new(num, den))
}

fn parse_rational_parts(s: &str) -> Result<(BigInt, BigInt)> {
    let t = s.trim().replace('\u{2212}', "-");
    if let Some((a, b)) = t.split_once('/') {
        let num: BigInt = a
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad numerator: {}", a)))?;
        let den: BigInt = b
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad denominator: {}", b)))?;
        if den.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        Ok((num, den))
    } else {
        let num: BigInt = t
            .parse()
            .map_err(|_| Error::Parse(format!("bad rational: {}", s)))?;
        Ok((num, BigInt::one()))
    }
}

fn parse_matrix(ring: &QpRing, s: &str) -> Result<Matrix<PAdicNumber>> {
    let v: serde_json::Value =
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("bad matrix JSON: {}", e)))?;
    let rows = v
        .as_array()
        .ok_or_else(|| Error::Parse("matrix must be an array of rows".into()))?;
    let n = rows.len();
    let mut out = vec![];
    for row in rows {
        let cells = row
            .as_array()
            .ok_or_else(|| Error::Parse("matrix row must be an array".into()))?;
        if cells.len() != n {
            return Err(Error::Parse("matrix must be square".into()));
        }
        let mut r = vec![];
        for c in cells {
            let x = match c {
                serde_json::Value::Number(k) => {
                    let k = k
                        .as_i64()
                        .ok_or_else(|| Error::Parse(format!("bad entry: {}", c)))?;
                    PAdicNumber::from_integer(ring.p, ring.precision, k)?
                }
                serde_json::Value::String(t) => {
                    let (num, den) = parse_rational_parts(t)?;
                    PAdicNumber::from_rational(ring.p, ring.precision, num, den)?
                }
                _ => return Err(Error::Parse(format!("bad entry: {}", c))),
            };
            r.push(x);
        }
        out.push(r);
    }
    Ok(Matrix::from_rows(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_parsing() {
        assert_eq!(
            parse_rational("7/3").unwrap(),
            BigRational::new(BigInt::from(7), BigInt::from(3))
        );
        assert_eq!(
            parse_rational("-5").unwrap(),
            BigRational::from(BigInt::from(-5))
        );
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn matrix_parsing() {
        let ring = QpRing::new(5, 10);
        let m = parse_matrix(&ring, "[[2,0],[0,\"1/5\"]]").unwrap();
        assert_eq!(m.n, 2);
        assert_eq!(m.at(1, 1).valuation(), crate::padic::Valuation::Finite(-1));
        assert!(parse_matrix(&ring, "[[1,2],[3]]").is_err());
        assert!(parse_matrix(&ring, "nonsense").is_err());
    }
}
