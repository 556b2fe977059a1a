//! Single- and two-party superqubit states.
//!
//! A state over `k` parties is a vector of `3^k` supernumbers indexed by
//! kets `(m₁ … m_k)` with `m ∈ {0, 1, •}` in lexicographic order (party A is
//! the most significant digit). The stored components are right coordinates,
//! i.e. the entries of the column supervector `v = Σ e_I v^I`. For an even
//! state the left coefficient in `v = Σ c_I e_I` is `c_I = (−1)^{|I|} v^I`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grassmann::{Complex, Generator, Parity, Supernumber};
use crate::supermatrix::Supermatrix;
use crate::uosp::{self, GroupElementParams};

/// One basis state of a single superqubit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ket {
    Zero,
    One,
    Bullet,
}

impl Ket {
    pub const ALL: [Ket; 3] = [Ket::Zero, Ket::One, Ket::Bullet];

    pub fn index(self) -> usize {
        match self {
            Ket::Zero => 0,
            Ket::One => 1,
            Ket::Bullet => 2,
        }
    }

    pub fn from_index(i: usize) -> Self {
        Ket::ALL[i]
    }

    pub fn parity(self) -> Parity {
        Parity::from_odd(self == Ket::Bullet)
    }

    /// Announced bit: `0` for `|0⟩`, `1` for `|1⟩` and `|•⟩`.
    pub fn bit(self) -> u8 {
        u8::from(self != Ket::Zero)
    }

    pub fn label(self) -> &'static str {
        match self {
            Ket::Zero => "0",
            Ket::One => "1",
            Ket::Bullet => "•",
        }
    }
}

impl fmt::Display for Ket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Kets of a basis index, most significant party first.
pub fn kets_of(parties: usize, index: usize) -> Vec<Ket> {
    let mut out = vec![Ket::Zero; parties];
    let mut rest = index;
    for slot in out.iter_mut().rev() {
        *slot = Ket::from_index(rest % 3);
        rest /= 3;
    }
    out
}

pub fn index_of(kets: &[Ket]) -> usize {
    kets.iter().fold(0, |acc, k| acc * 3 + k.index())
}

pub fn basis_label(parties: usize, index: usize) -> String {
    kets_of(parties, index).iter().map(|k| k.label()).collect()
}

/// Parity of a basis ket: number of bullets mod 2.
pub fn basis_parity(parties: usize, index: usize) -> Parity {
    kets_of(parties, index)
        .into_iter()
        .fold(Parity::Even, |acc, k| acc + k.parity())
}

/// Diagonal metric entry `⟨I|I⟩`: `(−1)^{n(n−1)/2}` for `n` bullets, so only
/// `|••⟩` has negative norm among two-party kets.
pub fn metric(parties: usize, index: usize) -> f64 {
    let n = kets_of(parties, index)
        .iter()
        .filter(|&&k| k == Ket::Bullet)
        .count();
    if (n * n.saturating_sub(1) / 2) % 2 == 1 {
        -1.0
    } else {
        1.0
    }
}

/// Grading of the `3^k`-dimensional lexicographic basis.
pub fn grading(parties: usize) -> Vec<Parity> {
    (0..3usize.pow(parties as u32))
        .map(|i| basis_parity(parties, i))
        .collect()
}

fn check_parties(parties: usize) -> Result<()> {
    if parties == 1 || parties == 2 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "only one or two parties are supported, got {parties}"
        )))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuperState {
    parties: usize,
    order: u8,
    coeffs: Vec<Supernumber>,
}

impl SuperState {
    /// State from right coordinates; every component must have the parity of
    /// its basis ket.
    pub fn from_right_coords(parties: usize, order: u8, coeffs: Vec<Supernumber>) -> Result<Self> {
        check_parties(parties)?;
        let dim = 3usize.pow(parties as u32);
        if coeffs.len() != dim {
            return Err(Error::Dimension(format!(
                "{} coefficients for a {parties}-party state (need {dim})",
                coeffs.len()
            )));
        }
        for (i, c) in coeffs.iter().enumerate() {
            if c.order() != order {
                return Err(Error::OrderMismatch {
                    left: order,
                    right: c.order(),
                });
            }
            if !c.is_zero() && c.parity() != Some(basis_parity(parties, i)) {
                return Err(Error::Parity(format!(
                    "coefficient of |{}⟩ must be {:?}, got {c}",
                    basis_label(parties, i),
                    basis_parity(parties, i)
                )));
            }
        }
        Ok(SuperState {
            parties,
            order,
            coeffs,
        })
    }

    /// State from left coefficients `c_I` in `Σ c_I |I⟩`.
    pub fn from_left_coeffs(parties: usize, order: u8, coeffs: Vec<Supernumber>) -> Result<Self> {
        let right = coeffs
            .into_iter()
            .enumerate()
            .map(|(i, c)| c.scale_real(basis_parity(parties, i).sign()))
            .collect();
        Self::from_right_coords(parties, order, right)
    }

    /// State from a column supervector over the lexicographic grading.
    pub fn from_column(parties: usize, column: &Supermatrix) -> Result<Self> {
        if column.ncols() != 1 || column.row_grading() != grading(parties).as_slice() {
            return Err(Error::Dimension(format!(
                "expected a {}-row column over the {parties}-party grading",
                3usize.pow(parties as u32)
            )));
        }
        Self::from_right_coords(parties, column.order(), column.entries().to_vec())
    }

    pub fn basis_ket(parties: usize, order: u8, kets: &[Ket]) -> Result<Self> {
        if kets.len() != parties {
            return Err(Error::Dimension(format!(
                "{} kets for a {parties}-party state",
                kets.len()
            )));
        }
        check_parties(parties)?;
        let mut coeffs = vec![Supernumber::zero(order); 3usize.pow(parties as u32)];
        // Right coordinate of a bare ket with unit left coefficient.
        coeffs[index_of(kets)] = Supernumber::one(order);
        Self::from_right_coords(parties, order, coeffs)
    }

    pub fn parties(&self) -> usize {
        self.parties
    }

    pub fn order(&self) -> u8 {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    /// Right coordinates.
    pub fn right_coords(&self) -> &[Supernumber] {
        &self.coeffs
    }

    /// Left coefficients `c_I = (−1)^{|I|} v^I`.
    pub fn left_coeffs(&self) -> Vec<Supernumber> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c.scale_real(basis_parity(self.parties, i).sign()))
            .collect()
    }

    pub fn left_coeff(&self, kets: &[Ket]) -> Supernumber {
        let i = index_of(kets);
        self.coeffs[i].scale_real(basis_parity(self.parties, i).sign())
    }

    pub fn to_column(&self) -> Supermatrix {
        Supermatrix::column(self.order, grading(self.parties), self.coeffs.clone())
            .expect("state shape is consistent")
    }

    /// Bra as a row supervector (`v^‡`).
    pub fn bra(&self) -> Supermatrix {
        self.to_column().grade_adjoint()
    }

    /// `|v⟩⟨v|`
    pub fn density_matrix(&self) -> Supermatrix {
        &self.to_column() * &self.bra()
    }

    /// Applies a matrix acting on the full state space.
    pub fn apply(&self, m: &Supermatrix) -> Result<Self> {
        let out = m.checked_mul(&self.to_column())?;
        Self::from_column(self.parties, &out)
    }

    /// Applies `Z_A ⊗ Z_B` to a two-party state.
    pub fn apply_local(&self, za: &Supermatrix, zb: &Supermatrix) -> Result<Self> {
        if self.parties != 2 {
            return Err(Error::Dimension("local rotations need a two-party state".into()));
        }
        self.apply(&za.graded_kron(zb)?)
    }

    /// Multiplies every component by a complex number.
    pub fn scale(&self, c: Complex) -> Self {
        SuperState {
            parties: self.parties,
            order: self.order,
            coeffs: self.coeffs.iter().map(|x| x.scale(c)).collect(),
        }
    }

    /// Union of generators used by any coefficient.
    pub fn support(&self) -> u32 {
        self.coeffs.iter().fold(0, |acc, c| acc | c.support())
    }

    /// Bodies of the right coordinates.
    pub fn bodies(&self) -> Vec<Complex> {
        self.coeffs.iter().map(Supernumber::body).collect()
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.order != other.order {
            return Err(Error::OrderMismatch {
                left: self.order,
                right: other.order,
            });
        }
        if self.parties != other.parties {
            return Err(Error::Dimension(format!(
                "{}-party vs {}-party state",
                self.parties, other.parties
            )));
        }
        Ok(())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.check_compatible(other).is_err() {
            return f64::INFINITY;
        }
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max)
    }

    /// Exchanges the two parties, picking up `(−1)^{|m||n|}`.
    pub fn swap_parties(&self) -> Result<Self> {
        if self.parties != 2 {
            return Err(Error::Dimension("swap needs a two-party state".into()));
        }
        let mut coeffs = vec![Supernumber::zero(self.order); 9];
        for m in Ket::ALL {
            for n in Ket::ALL {
                let sign = m.parity().koszul(n.parity());
                coeffs[index_of(&[n, m])] = self.coeffs[index_of(&[m, n])].scale_real(sign);
            }
        }
        Ok(SuperState {
            parties: 2,
            order: self.order,
            coeffs,
        })
    }

    /// Structured record of the left coefficients.
    pub fn to_record(&self) -> StateRecord {
        let kets = self
            .left_coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| KetRecord {
                ket: basis_label(self.parties, i),
                terms: c
                    .terms()
                    .iter()
                    .map(|&(mask, z)| TermRecord {
                        monomial: monomial_label(mask),
                        re: z.re,
                        im: z.im,
                    })
                    .collect(),
            })
            .collect();
        StateRecord {
            parties: self.parties,
            order: self.order,
            kets,
        }
    }
}

fn monomial_label(mask: u32) -> String {
    if mask == 0 {
        return "1".into();
    }
    (0..32u8)
        .filter(|s| mask & (1 << s) != 0)
        .map(|s| Generator::from_slot(s).to_string())
        .collect()
}

/// Serializable view of a state: per ket, the monomials of its left
/// coefficient.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateRecord {
    pub parties: usize,
    pub order: u8,
    pub kets: Vec<KetRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KetRecord {
    pub ket: String,
    pub terms: Vec<TermRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermRecord {
    pub monomial: String,
    pub re: f64,
    pub im: f64,
}

impl fmt::Display for SuperState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.left_coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})|{}⟩", basis_label(self.parties, i))?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// `S(2pη)U(α, β)|0⟩` on the given generator pair.
pub fn superqubit_on(order: u8, pair: u8, p: f64, theta: f64, phi: f64) -> SuperState {
    let params = GroupElementParams::new(theta, phi, 0.0);
    let u = uosp::u_matrix(order, params.alpha(), params.beta());
    let z = &uosp::s_matrix(order, pair, p) * &u;
    let zero = SuperState::basis_ket(1, order, &[Ket::Zero]).expect("valid ket");
    zero.apply(&z).expect("3x3 action on a single superqubit")
}

/// Single superqubit over `CΛ₂`.
pub fn superqubit(p: f64, theta: f64, phi: f64) -> SuperState {
    superqubit_on(2, 1, p, theta, phi)
}

/// `⟨u|v⟩ = Σ_I g_I (u^I)^# v^I`.
pub fn inner_product(u: &SuperState, v: &SuperState) -> Result<Supernumber> {
    u.check_compatible(v)?;
    let mut acc = Supernumber::zero(u.order);
    for (i, (a, b)) in u.coeffs.iter().zip(&v.coeffs).enumerate() {
        if a.is_zero() || b.is_zero() {
            continue;
        }
        acc += &(&a.hash() * b).scale_real(metric(u.parties, i));
    }
    Ok(acc)
}

/// `p_Γ(u, v) = ⟨u|v⟩ (⟨u|v⟩)^#`
pub fn grassmann_transition(u: &SuperState, v: &SuperState) -> Result<Supernumber> {
    let a = inner_product(u, v)?;
    Ok(&a * &a.hash())
}

/// Modified Rogers norm of the Grassmann-valued transition probability.
pub fn transition_probability(u: &SuperState, v: &SuperState) -> Result<f64> {
    grassmann_transition(u, v)?.modified_rogers()
}

/// Grassmann-valued probabilities of the standard-basis outcomes:
/// `p_I = (−1)^{|I|} κ_I c_I c_I^#` with `κ_I` the metric sign of the ket.
/// They sum to `⟨v|v⟩` exactly.
pub fn measure_grassmann(state: &SuperState) -> Vec<Supernumber> {
    state
        .left_coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let sign = basis_parity(state.parties, i).sign() * metric(state.parties, i);
            (c * &c.hash()).scale_real(sign)
        })
        .collect()
}

/// Real outcome probabilities after the modified Rogers norm.
pub fn measure_real(state: &SuperState) -> Result<Vec<f64>> {
    measure_grassmann(state)
        .iter()
        .map(Supernumber::modified_rogers)
        .collect()
}

/// Graded tensor product of two single-party states on disjoint generators:
/// `w^{mn} = (−1)^{|m||n|} a^m b^n`.
pub fn tensor(a: &SuperState, b: &SuperState) -> Result<SuperState> {
    a.check_compatible(b)?;
    if a.parties != 1 {
        return Err(Error::Dimension("tensor takes single-party states".into()));
    }
    let shared = a.support() & b.support();
    if shared != 0 {
        return Err(Error::OverlappingGenerators(shared));
    }
    let mut coeffs = Vec::with_capacity(9);
    for m in Ket::ALL {
        for n in Ket::ALL {
            let sign = m.parity().koszul(n.parity());
            coeffs.push((&a.coeffs[m.index()] * &b.coeffs[n.index()]).scale_real(sign));
        }
    }
    SuperState::from_right_coords(2, a.order, coeffs)
}

/// Entangled two-superqubit state over `CΛ₄` with party A on pair 1 and B on
/// pair 2:
///
/// `γ_Aγ_B (|00⟩ + |11⟩)/√2 + p_Bη_Bγ_A|1•⟩ + p_Aη_Aγ_B|•1⟩ − p_Ap_Bη_Aη_B|••⟩`
///
/// with `γ = 1 + (p²/2)ηη^#`.
pub fn upsilon(pa: f64, pb: f64) -> SuperState {
    const N: u8 = 4;
    let one = Supernumber::one(N);
    let gamma_a = &one + &Supernumber::pair_product(N, 1).scale_real(pa * pa / 2.0);
    let gamma_b = &one + &Supernumber::pair_product(N, 2).scale_real(pb * pb / 2.0);
    let eta_a = Supernumber::eta(N, 1);
    let eta_b = Supernumber::eta(N, 2);
    let mut left = vec![Supernumber::zero(N); 9];
    let bell = (&gamma_a * &gamma_b).scale_real(std::f64::consts::FRAC_1_SQRT_2);
    left[index_of(&[Ket::Zero, Ket::Zero])] = bell.clone();
    left[index_of(&[Ket::One, Ket::One])] = bell;
    left[index_of(&[Ket::One, Ket::Bullet])] = (&eta_b * &gamma_a).scale_real(pb);
    left[index_of(&[Ket::Bullet, Ket::One])] = (&eta_a * &gamma_b).scale_real(pa);
    left[index_of(&[Ket::Bullet, Ket::Bullet])] = (&eta_a * &eta_b).scale_real(-pa * pb);
    SuperState::from_left_coeffs(2, N, left).expect("coefficients have ket parity")
}

/// `p/2π − ⌊p/2π⌋ − 1/2`, mapping ℝ onto `[−1/2, 1/2)`.
pub fn compactify(p: f64) -> Result<f64> {
    if !p.is_finite() {
        return Err(Error::InvalidParameter(format!("cannot compactify {p}")));
    }
    let t = p / std::f64::consts::TAU;
    let v = t - t.floor() - 0.5;
    // Rounding can land exactly on the excluded endpoint.
    Ok(if v >= 0.5 { -0.5 } else { v })
}

/// `|p| ≤ 1/2`
pub fn is_physical(p: f64) -> bool {
    p.abs() <= 0.5
}

/// Membership of a displacement pair in the two admissible regions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PhysicalPair {
    /// `|p − q| ≤ 1` and `|p + q| ≤ 1`
    pub s1: bool,
    /// `|p| ≤ 1/2` and `|q| ≤ 1/2`
    pub s2: bool,
}

pub fn physical_pair(p: f64, q: f64) -> PhysicalPair {
    PhysicalPair {
        s1: (p - q).abs() <= 1.0 && (p + q).abs() <= 1.0,
        s2: is_physical(p) && is_physical(q),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-13
    }

    #[test]
    fn plain_qubit_when_p_vanishes() {
        let s = superqubit(0.0, 0.4, 1.1);
        let b = s.bodies();
        assert!((b[0] - Complex::new(0.4f64.cos(), 0.0)).norm() < 1e-15);
        assert!((b[1] - Complex::from_polar(0.4f64.sin(), 1.1)).norm() < 1e-15);
        assert!(s.right_coords()[2].is_zero());
    }

    #[test]
    fn superqubit_norm_is_one() {
        for (p, t, f) in [(0.3, 0.0, 0.0), (0.45, 1.2, -0.4), (2.0, 0.3, 3.0)] {
            let s = superqubit(p, t, f);
            let n = inner_product(&s, &s).unwrap();
            assert!(n.approx_eq(&Supernumber::one(2), 1e-15), "{n}");
        }
    }

    #[test]
    fn single_qubit_probabilities() {
        let p = 0.3;
        let probs = measure_real(&superqubit(p, 0.0, 0.0)).unwrap();
        assert!(close(probs[0], 1.0 - p * p));
        assert!(close(probs[1], 0.0));
        assert!(close(probs[2], p * p));
    }

    #[test]
    fn bullet_bullet_has_negative_norm() {
        let k = SuperState::basis_ket(2, 4, &[Ket::Bullet, Ket::Bullet]).unwrap();
        assert_eq!(inner_product(&k, &k).unwrap(), -Supernumber::one(4));
        let a = SuperState::basis_ket(1, 2, &[Ket::Zero]).unwrap();
        let b = SuperState::basis_ket(1, 2, &[Ket::One]).unwrap();
        assert!(inner_product(&a, &b).unwrap().is_zero());
    }

    #[test]
    fn upsilon_basics() {
        let bell = upsilon(0.0, 0.0);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let bodies = bell.bodies();
        assert!(close(bodies[0].re, r) && close(bodies[4].re, r));
        let u = upsilon(0.4, -0.3);
        let n = inner_product(&u, &u).unwrap();
        assert!(n.approx_eq(&Supernumber::one(4), 1e-15));
    }

    #[test]
    fn upsilon_probability_table() {
        let (pa, pb) = (0.4, 0.25);
        let probs = measure_real(&upsilon(pa, pb)).unwrap();
        let (a2, b2) = (pa * pa, pb * pb);
        let mut expect = [0.0; 9];
        expect[0] = (1.0 - a2) * (1.0 - b2) / 2.0;
        expect[4] = expect[0];
        expect[index_of(&[Ket::One, Ket::Bullet])] = b2 * (1.0 - a2);
        expect[index_of(&[Ket::Bullet, Ket::One])] = a2 * (1.0 - b2);
        expect[8] = a2 * b2;
        for (got, want) in probs.iter().zip(expect) {
            assert!(close(*got, want), "{probs:?}");
        }
    }

    #[test]
    fn odd_state_is_rejected() {
        let bad = vec![
            Supernumber::eta(2, 1),
            Supernumber::zero(2),
            Supernumber::zero(2),
        ];
        assert!(matches!(
            SuperState::from_right_coords(1, 2, bad),
            Err(Error::Parity(_))
        ));
    }

    #[test]
    fn tensor_rejects_shared_generators() {
        let a = superqubit_on(4, 1, 0.3, 0.0, 0.0);
        assert!(matches!(tensor(&a, &a), Err(Error::OverlappingGenerators(_))));
    }

    #[test]
    fn compactify_examples() {
        assert_eq!(compactify(0.0).unwrap(), -0.5);
        assert!(compactify(std::f64::consts::PI).unwrap().abs() < 1e-15);
        assert!(compactify(f64::NAN).is_err());
    }

    #[test]
    fn physical_regions() {
        assert!(is_physical(0.4));
        assert!(!is_physical(0.6));
        assert_eq!(physical_pair(0.7, 0.6), PhysicalPair { s1: false, s2: false });
        assert_eq!(physical_pair(0.7, -0.2), PhysicalPair { s1: true, s2: false });
    }

    #[test]
    fn record_lists_left_coefficients() {
        let rec = superqubit(0.5, 0.0, 0.0).to_record();
        assert_eq!(rec.kets.len(), 3);
        assert_eq!(rec.kets[2].terms[0].monomial, "η1");
        assert_eq!(rec.kets[2].terms[0].re, -0.5);
    }
}
