//! Random algebra elements for property checks.

use rand::Rng;

use crate::grassmann::{Complex, Parity, Supernumber};
use crate::supermatrix::Supermatrix;

fn coefficient<R: Rng + ?Sized>(rng: &mut R) -> Complex {
    Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Random supernumber with every monomial of the requested parity present.
pub fn supernumber<R: Rng + ?Sized>(rng: &mut R, order: u8, parity: Parity) -> Supernumber {
    let terms = (0u32..1 << order)
        .filter(|m| Parity::of_mask(*m) == parity)
        .map(|m| (m, coefficient(rng)))
        .collect::<Vec<_>>();
    Supernumber::from_terms(order, terms)
}

/// Random supernumber of either parity.
pub fn any_supernumber<R: Rng + ?Sized>(rng: &mut R, order: u8) -> Supernumber {
    let terms = (0u32..1 << order).map(|m| (m, coefficient(rng))).collect::<Vec<_>>();
    Supernumber::from_terms(order, terms)
}

/// Random homogeneous matrix of grade `parity` over the given gradings.
pub fn matrix<R: Rng + ?Sized>(
    rng: &mut R,
    order: u8,
    rows: &[Parity],
    cols: &[Parity],
    parity: Parity,
) -> Supermatrix {
    let mut entries = Vec::with_capacity(rows.len() * cols.len());
    for &r in rows {
        for &c in cols {
            entries.push(supernumber(rng, order, parity + r + c));
        }
    }
    Supermatrix::new(order, rows.to_vec(), cols.to_vec(), entries).expect("shape matches")
}

/// Random homogeneous column supervector.
pub fn column<R: Rng + ?Sized>(
    rng: &mut R,
    order: u8,
    grading: &[Parity],
    parity: Parity,
) -> Supermatrix {
    matrix(rng, order, grading, &[Parity::Even], parity)
}
