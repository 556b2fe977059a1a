//! The superalgebra uosp(1|2) in its fundamental (2|1) representation and
//! closed-form group elements `Z = U(α, β)·S(2pη)`.
//!
//! Matrices act on the basis `(|0⟩, |1⟩, |•⟩)`. Each party owns one
//! generator pair of the ambient algebra; `pair` selects it.

use crate::error::{Error, Result};
use crate::grassmann::{Complex, Parity, Supernumber, CMP_TOL};
use crate::supermatrix::{standard_grading, Supermatrix};

/// Grading of a single superqubit: two even states, one odd.
pub fn qubit_grading() -> Vec<Parity> {
    standard_grading(2, 1)
}

fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

fn complex_matrix(order: u8, values: [[Complex; 3]; 3]) -> Supermatrix {
    let flat: Vec<Complex> = values.iter().flatten().copied().collect();
    Supermatrix::from_complex(order, qubit_grading(), qubit_grading(), &flat)
        .expect("3x3 shape is fixed")
}

/// The five generators of uosp(1|2).
#[derive(Clone, Debug)]
pub struct Generators {
    /// `A_j = (i/2)(σ_j ⊕ 0)`
    pub a: [Supermatrix; 3],
    pub q1: Supermatrix,
    pub q2: Supermatrix,
}

pub fn generators(order: u8) -> Generators {
    let z = c(0.0, 0.0);
    let h = c(0.5, 0.0);
    let ih = c(0.0, 0.5);
    let a1 = complex_matrix(order, [[z, ih, z], [ih, z, z], [z, z, z]]);
    let a2 = complex_matrix(order, [[z, h, z], [-h, z, z], [z, z, z]]);
    let a3 = complex_matrix(order, [[ih, z, z], [z, -ih, z], [z, z, z]]);
    let q1 = complex_matrix(order, [[z, z, z], [z, z, -h], [-h, z, z]]);
    let q2 = complex_matrix(order, [[z, z, -h], [z, z, z], [z, h, z]]);
    Generators {
        a: [a1, a2, a3],
        q1,
        q2,
    }
}

/// `2ζQ₁ + 2ζ^#Q₂` for an odd supernumber `ζ`.
pub fn odd_exponent(zeta: &Supernumber) -> Result<Supermatrix> {
    if !zeta.is_odd() && !zeta.is_zero() {
        return Err(Error::Parity(format!("odd direction expected, got {zeta}")));
    }
    let g = generators(zeta.order());
    let two = Complex::new(2.0, 0.0);
    let first = g.q1.scalar_left(zeta)?;
    let second = g.q2.scalar_left(&zeta.hash())?;
    Ok((&first + &second).scale(two))
}

/// `Σ ξ_j A_j + ζQ₁ + ζ^#Q₂` with `ζ = p η_pair`.
pub fn algebra_element(order: u8, pair: u8, xi: [f64; 3], p: f64) -> Result<Supermatrix> {
    let g = generators(order);
    let zeta = Supernumber::eta(order, pair).scale_real(p);
    let mut s = g.q1.scalar_left(&zeta)? + g.q2.scalar_left(&zeta.hash())?;
    for (x, a) in xi.iter().zip(&g.a) {
        s = &s + &a.scale(c(*x, 0.0));
    }
    Ok(s)
}

/// Graded commutator `[X, Y] = XY − (−1)^{|X||Y|} YX` of homogeneous matrices.
pub fn graded_bracket(x: &Supermatrix, y: &Supermatrix) -> Result<Supermatrix> {
    let px = x
        .parity()
        .homogeneous()
        .ok_or_else(|| Error::Parity("bracket needs homogeneous arguments".into()))?;
    let py = y
        .parity()
        .homogeneous()
        .ok_or_else(|| Error::Parity("bracket needs homogeneous arguments".into()))?;
    let xy = x.checked_mul(y)?;
    let yx = y.checked_mul(x)?;
    Ok(&xy - &yx.scale(c(px.koszul(py), 0.0)))
}

/// Closed form of `exp(2pηQ₁ + 2pη^#Q₂)`:
///
/// ```text
/// [ 1 + p²/2·X   0            −pη^# ]
/// [ 0            1 + p²/2·X   −pη   ]
/// [ pη           −pη^#        1 − p²X ]
/// ```
/// with `X = ηη^#` on the chosen pair.
pub fn s_matrix(order: u8, pair: u8, p: f64) -> Supermatrix {
    let one = Supernumber::one(order);
    let x = Supernumber::pair_product(order, pair);
    let eta = Supernumber::eta(order, pair);
    let eta_h = Supernumber::eta_hash(order, pair);
    let gamma = &one + &x.scale_real(p * p / 2.0);
    let zero = Supernumber::zero(order);
    let entries = vec![
        gamma.clone(),
        zero.clone(),
        eta_h.scale_real(-p),
        zero,
        gamma,
        eta.scale_real(-p),
        eta.scale_real(p),
        eta_h.scale_real(-p),
        &one - &x.scale_real(p * p),
    ];
    Supermatrix::new(order, qubit_grading(), qubit_grading(), entries).expect("3x3 shape is fixed")
}

/// SU(2) block `[[α, −β̄, 0], [β, ᾱ, 0], [0, 0, 1]]`.
pub fn u_matrix(order: u8, alpha: Complex, beta: Complex) -> Supermatrix {
    let z = c(0.0, 0.0);
    complex_matrix(
        order,
        [
            [alpha, -beta.conj(), z],
            [beta, alpha.conj(), z],
            [z, z, c(1.0, 0.0)],
        ],
    )
}

/// Bloch-sphere angles and super displacement of a group element.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GroupElementParams {
    pub theta: f64,
    pub phi: f64,
    pub p: f64,
}

impl GroupElementParams {
    pub fn new(theta: f64, phi: f64, p: f64) -> Self {
        GroupElementParams { theta, phi, p }
    }

    /// `α = cos θ`
    pub fn alpha(&self) -> Complex {
        c(self.theta.cos(), 0.0)
    }

    /// `β = e^{iφ} sin θ`
    pub fn beta(&self) -> Complex {
        Complex::from_polar(self.theta.sin(), self.phi)
    }
}

/// `Z = U(α, β)·S(2pη)` from Bloch angles.
pub fn group_element(order: u8, pair: u8, params: GroupElementParams) -> Supermatrix {
    &u_matrix(order, params.alpha(), params.beta()) * &s_matrix(order, pair, params.p)
}

/// `Z = U(α, β)·S(2pη)` from amplitudes with `|α|² + |β|² = 1`.
pub fn group_element_from_amplitudes(
    order: u8,
    pair: u8,
    alpha: Complex,
    beta: Complex,
    p: f64,
) -> Result<Supermatrix> {
    let norm = alpha.norm_sqr() + beta.norm_sqr();
    if (norm - 1.0).abs() > CMP_TOL || !p.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "amplitudes must satisfy |α|²+|β|² = 1 (got {norm}) and p must be finite"
        )));
    }
    Ok(&u_matrix(order, alpha, beta) * &s_matrix(order, pair, p))
}

/// Superunitarity residual `max(|Z^‡Z − 1|, |ZZ^‡ − 1|)`.
pub fn superunitarity_residual(z: &Supermatrix) -> f64 {
    let id = Supermatrix::identity(z.order(), z.row_grading().to_vec());
    let adj = z.grade_adjoint();
    let left = (&adj * z).max_abs_diff(&id);
    let right = (z * &adj).max_abs_diff(&id);
    left.max(right)
}
