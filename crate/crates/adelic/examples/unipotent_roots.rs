//! Divisibility and unipotency over Q_p: n-th roots of unipotent
//! matrices by the finite binomial series, and certified obstructions
//! for non-unipotent elements.
//!
//! Run with: cargo run -p adelic --example unipotent_roots

use adelic::grouprec::{is_divisible, DivisibilityVerdict};
use adelic::matrix::{mat_pow, unipotent_nth_root, Matrix, QpRing};
use adelic::padic::PAdicNumber;

fn qm(ring: &QpRing, rows: &[&[i64]]) -> Matrix<PAdicNumber> {
    Matrix::from_rows(
        rows.iter()
            .map(|r| {
                r.iter()
                    .map(|&x| PAdicNumber::from_integer(ring.p, ring.precision, x).unwrap())
                    .collect()
            })
            .collect(),
    )
}

fn main() -> Result<(), adelic::Error> {
    let ring = QpRing::new(5, 30);

    // square root of the elementary shear: the 1/2 appears upstairs
    let v = qm(&ring, &[&[1, 1], &[0, 1]]);
    let w = unipotent_nth_root(&ring, &v, 2)?;
    println!("sqrt([[1,1],[0,1]]) top-right entry = {}", w.at(0, 1));

    // cube root of a Heisenberg element re-powers exactly
    let h = qm(&ring, &[&[1, 1, 0], &[0, 1, 1], &[0, 0, 1]]);
    let w = unipotent_nth_root(&ring, &h, 3)?;
    let cube = mat_pow(&ring, &w, 3);
    println!(
        "cube-root round trip on the Heisenberg element: {}",
        cube.entries
            .iter()
            .zip(&h.entries)
            .all(|(a, b)| a.agrees_with(b, 25))
    );

    // the dichotomy: unipotent matrices are divisible with explicit roots
    match is_divisible(&ring, &h, 12)? {
        DivisibilityVerdict::Divisible { roots } => {
            println!("Heisenberg element: divisible (roots for n = 2..12, {} built)", roots.len())
        }
        other => println!("unexpected: {:?}", other),
    }

    // diag(2, 1) has determinant 2, which is not a square mod 5
    let g = qm(&ring, &[&[2, 0], &[0, 1]]);
    match is_divisible(&ring, &g, 30)? {
        DivisibilityVerdict::NotDivisible { n, obstruction } => {
            println!("diag(2,1): not divisible, first obstruction at n = {}", n);
            println!("  certificate: {:?}", obstruction);
        }
        other => println!("unexpected: {:?}", other),
    }

    // diag(5, 1/5) evades the determinant test (det = 1) but not the
    // characteristic-polygon test
    let five = PAdicNumber::from_integer(5, 30, 5)?;
    let fifth = PAdicNumber::from_rational(5, 30, 1, 5)?;
    let zero = PAdicNumber::zero(5);
    let g = Matrix::from_rows(vec![vec![five, zero.clone()], vec![zero, fifth]]);
    match is_divisible(&ring, &g, 30)? {
        DivisibilityVerdict::NotDivisible { n, obstruction } => {
            println!("diag(5,1/5): not divisible at n = {} ({:?})", n, obstruction);
        }
        other => println!("unexpected: {:?}", other),
    }

    // honesty: elements that evade both certificates stay inconclusive
    // (the swap matrix really is a square in GL_2(Q_5), so nothing may
    // fire below n = 4)
    let g = qm(&ring, &[&[0, 1], &[1, 0]]);
    match is_divisible(&ring, &g, 3)? {
        DivisibilityVerdict::NoCertificate { n_max } => {
            println!("swap matrix: no certificate found up to {}", n_max)
        }
        other => println!("{:?}", other),
    }
    Ok(())
}
