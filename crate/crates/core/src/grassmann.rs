//! Finite complex Grassmann algebras.
//!
//! Generators come in conjugate pairs. Slot `2k` holds `η_{k+1}` and slot
//! `2k + 1` holds `η_{k+1}^#`, so a monomial is a bitmask over slots and the
//! canonical generator order is ascending slot order. Elements are stored as a
//! sorted list of `(mask, coefficient)` terms with negligible coefficients
//! pruned.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Complex = Complex64;

/// Largest supported algebra order (the width of a monomial mask).
pub const MAX_ORDER: u8 = 16;

/// Coefficients with modulus below this are dropped after every operation.
pub const PRUNE_TOL: f64 = 1e-14;

/// Default tolerance for approximate comparisons.
pub const CMP_TOL: f64 = 1e-12;

/// Z₂ grade of a homogeneous element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_odd(odd: bool) -> Self {
        if odd {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    pub fn of_mask(mask: u32) -> Self {
        Parity::from_odd(mask.count_ones() % 2 == 1)
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    /// `(−1)^{|self|}`
    pub fn sign(self) -> f64 {
        if self.is_odd() {
            -1.0
        } else {
            1.0
        }
    }

    /// `(−1)^{|self||other|}`
    pub fn koszul(self, other: Parity) -> f64 {
        if self.is_odd() && other.is_odd() {
            -1.0
        } else {
            1.0
        }
    }
}

impl Add for Parity {
    type Output = Parity;

    fn add(self, rhs: Parity) -> Parity {
        Parity::from_odd(self.is_odd() ^ rhs.is_odd())
    }
}

/// One anticommuting generator, identified by its slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator(u8);

impl Generator {
    /// `η_pair` (pairs are numbered from 1).
    pub fn eta(pair: u8) -> Self {
        assert!(pair >= 1, "generator pairs are numbered from 1");
        Generator(2 * (pair - 1))
    }

    /// `η_pair^#`
    pub fn eta_hash(pair: u8) -> Self {
        assert!(pair >= 1, "generator pairs are numbered from 1");
        Generator(2 * (pair - 1) + 1)
    }

    pub fn from_slot(slot: u8) -> Self {
        Generator(slot)
    }

    pub fn slot(self) -> u8 {
        self.0
    }

    /// One-based generator index: `2i − 1` for `η_i`, `2i` for `η_i^#`.
    pub fn index(self) -> u8 {
        self.0 + 1
    }

    pub fn pair(self) -> u8 {
        self.0 / 2 + 1
    }

    pub fn is_hashed(self) -> bool {
        self.0 % 2 == 1
    }

    pub fn partner(self) -> Self {
        Generator(self.0 ^ 1)
    }

    pub fn mask(self) -> u32 {
        1 << self.0
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_hashed() {
            write!(f, "η{}#", self.pair())
        } else {
            write!(f, "η{}", self.pair())
        }
    }
}

/// Sign picked up when the ordered product `mono(a)·mono(b)` is sorted.
pub(crate) fn reorder_sign(a: u32, b: u32) -> f64 {
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let bit = rest.trailing_zeros();
        swaps += (a >> bit >> 1).count_ones();
        rest &= rest - 1;
    }
    if swaps % 2 == 1 {
        -1.0
    } else {
        1.0
    }
}

/// Sorts a sequence of slots into a mask; `None` if a slot repeats.
fn canonicalize(slots: &[u8]) -> Option<(u32, f64)> {
    let mut mask = 0u32;
    let mut inversions = 0usize;
    for (i, &s) in slots.iter().enumerate() {
        if mask & (1 << s) != 0 {
            return None;
        }
        mask |= 1 << s;
        inversions += slots[..i].iter().filter(|&&t| t > s).count();
    }
    Some((mask, if inversions % 2 == 1 { -1.0 } else { 1.0 }))
}

fn slots_of(mask: u32) -> impl Iterator<Item = u8> {
    let mut rest = mask;
    std::iter::from_fn(move || {
        if rest == 0 {
            None
        } else {
            let s = rest.trailing_zeros() as u8;
            rest &= rest - 1;
            Some(s)
        }
    })
}

/// Element of the complex Grassmann algebra of a given (even) order.
#[derive(Clone, PartialEq)]
pub struct Supernumber {
    order: u8,
    terms: Vec<(u32, Complex)>,
}

impl Supernumber {
    pub fn zero(order: u8) -> Self {
        assert!(
            order <= MAX_ORDER && order % 2 == 0,
            "algebra order must be even and at most {MAX_ORDER}, got {order}"
        );
        Supernumber {
            order,
            terms: Vec::new(),
        }
    }

    pub fn one(order: u8) -> Self {
        Self::from_complex(order, Complex::new(1.0, 0.0))
    }

    pub fn from_complex(order: u8, c: Complex) -> Self {
        Self::from_terms(order, [(0, c)])
    }

    pub fn from_real(order: u8, x: f64) -> Self {
        Self::from_complex(order, Complex::new(x, 0.0))
    }

    pub fn generator(order: u8, g: Generator) -> Self {
        assert!(g.slot() < order, "generator {g} outside algebra of order {order}");
        Self::from_terms(order, [(g.mask(), Complex::new(1.0, 0.0))])
    }

    pub fn eta(order: u8, pair: u8) -> Self {
        Self::generator(order, Generator::eta(pair))
    }

    pub fn eta_hash(order: u8, pair: u8) -> Self {
        Self::generator(order, Generator::eta_hash(pair))
    }

    /// `η_pair η_pair^#`
    pub fn pair_product(order: u8, pair: u8) -> Self {
        Self::monomial(order, &[Generator::eta(pair), Generator::eta_hash(pair)], Complex::new(1.0, 0.0))
    }

    /// The ordered product `coeff · g₁ g₂ … g_m`, zero if a generator repeats.
    pub fn monomial(order: u8, gens: &[Generator], coeff: Complex) -> Self {
        let slots: Vec<u8> = gens.iter().map(|g| g.slot()).collect();
        assert!(
            slots.iter().all(|&s| s < order),
            "generator outside algebra of order {order}"
        );
        match canonicalize(&slots) {
            Some((mask, sign)) => Self::from_terms(order, [(mask, coeff * sign)]),
            None => Self::zero(order),
        }
    }

    /// Builds an element from raw `(mask, coefficient)` pairs; duplicates are summed.
    pub fn from_terms(order: u8, terms: impl IntoIterator<Item = (u32, Complex)>) -> Self {
        let mut out = Self::zero(order);
        let limit = if order == 32 { u32::MAX } else { (1u32 << order) - 1 };
        let raw: Vec<_> = terms.into_iter().collect();
        assert!(
            raw.iter().all(|(m, _)| m & !limit == 0),
            "monomial outside algebra of order {order}"
        );
        out.terms = normalize(raw);
        out
    }

    pub fn order(&self) -> u8 {
        self.order
    }

    pub fn terms(&self) -> &[(u32, Complex)] {
        &self.terms
    }

    pub fn coefficient(&self, mask: u32) -> Complex {
        match self.terms.binary_search_by_key(&mask, |t| t.0) {
            Ok(i) => self.terms[i].1,
            Err(_) => Complex::new(0.0, 0.0),
        }
    }

    /// Complex part (coefficient of the empty monomial).
    pub fn body(&self) -> Complex {
        self.coefficient(0)
    }

    /// Nilpotent part.
    pub fn soul(&self) -> Self {
        self.filter(|m| m != 0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Union of all generators appearing in any stored monomial.
    pub fn support(&self) -> u32 {
        self.terms.iter().fold(0, |acc, t| acc | t.0)
    }

    /// `Some` for homogeneous elements (zero counts as even), `None` otherwise.
    pub fn parity(&self) -> Option<Parity> {
        let mut seen: Option<Parity> = None;
        for &(m, _) in &self.terms {
            let p = Parity::of_mask(m);
            match seen {
                None => seen = Some(p),
                Some(q) if q != p => return None,
                _ => {}
            }
        }
        Some(seen.unwrap_or(Parity::Even))
    }

    pub fn is_even(&self) -> bool {
        self.parity() == Some(Parity::Even)
    }

    pub fn is_odd(&self) -> bool {
        !self.is_zero() && self.parity() == Some(Parity::Odd)
    }

    /// Splits into `(even, odd)` parts.
    pub fn grade_parts(&self) -> (Self, Self) {
        (
            self.filter(|m| m.count_ones() % 2 == 0),
            self.filter(|m| m.count_ones() % 2 == 1),
        )
    }

    /// Part of the given parity.
    pub fn part(&self, parity: Parity) -> Self {
        self.filter(|m| Parity::of_mask(m) == parity)
    }

    fn filter(&self, keep: impl Fn(u32) -> bool) -> Self {
        Supernumber {
            order: self.order,
            terms: self.terms.iter().copied().filter(|t| keep(t.0)).collect(),
        }
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order != other.order {
            return Err(Error::OrderMismatch {
                left: self.order,
                right: other.order,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let merged = self.terms.iter().chain(other.terms.iter()).copied().collect();
        Ok(Supernumber {
            order: self.order,
            terms: normalize(merged),
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&-other)
    }

    /// Supercommutative product; monomials sharing a generator vanish.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let mut out = Vec::with_capacity(self.terms.len() * other.terms.len());
        for &(ma, ca) in &self.terms {
            for &(mb, cb) in &other.terms {
                if ma & mb == 0 {
                    out.push((ma | mb, ca * cb * reorder_sign(ma, mb)));
                }
            }
        }
        Ok(Supernumber {
            order: self.order,
            terms: normalize(out),
        })
    }

    pub fn scale(&self, c: Complex) -> Self {
        Supernumber {
            order: self.order,
            terms: normalize(self.terms.iter().map(|&(m, z)| (m, z * c)).collect()),
        }
    }

    pub fn scale_real(&self, x: f64) -> Self {
        self.scale(Complex::new(x, 0.0))
    }

    /// `self^n` by repeated multiplication.
    pub fn powi(&self, n: u32) -> Self {
        (0..n).fold(Self::one(self.order), |acc, _| &acc * self)
    }

    /// Grade involution: `η_i ↦ η_i^#`, `η_i^# ↦ −η_i`, order preserving,
    /// antilinear on coefficients.
    pub fn hash(&self) -> Self {
        let mut out = Vec::with_capacity(self.terms.len());
        let mut slots = Vec::with_capacity(self.order as usize);
        for &(m, c) in &self.terms {
            slots.clear();
            let mut sign = 1.0;
            for s in slots_of(m) {
                if s % 2 == 0 {
                    slots.push(s + 1);
                } else {
                    slots.push(s - 1);
                    sign = -sign;
                }
            }
            let (mask, perm) = canonicalize(&slots).expect("hash maps distinct slots to distinct slots");
            out.push((mask, c.conj() * sign * perm));
        }
        Supernumber {
            order: self.order,
            terms: normalize(out),
        }
    }

    /// Star involution: swaps the two slots of each pair, reverses generator
    /// order, antilinear on coefficients.
    pub fn star(&self) -> Self {
        let mut out = Vec::with_capacity(self.terms.len());
        let mut slots = Vec::with_capacity(self.order as usize);
        for &(m, c) in &self.terms {
            slots.clear();
            slots.extend(slots_of(m).map(|s| s ^ 1));
            slots.reverse();
            let (mask, perm) = canonicalize(&slots).expect("star maps distinct slots to distinct slots");
            out.push((mask, c.conj() * perm));
        }
        Supernumber {
            order: self.order,
            terms: normalize(out),
        }
    }

    /// Berezin integral `∫dg`: writing `self = x + g·y` with `x` free of `g`,
    /// returns `y`.
    pub fn berezin(&self, g: Generator) -> Self {
        let bit = g.mask();
        let below = bit - 1;
        let terms = self
            .terms
            .iter()
            .filter(|t| t.0 & bit != 0)
            .map(|&(m, c)| {
                let sign = if (m & below).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
                (m ^ bit, c * sign)
            })
            .collect();
        Supernumber {
            order: self.order,
            terms: normalize(terms),
        }
    }

    /// Rogers norm: sum of coefficient moduli.
    pub fn rogers_r1(&self) -> f64 {
        self.terms.iter().map(|t| t.1.norm()).sum()
    }

    /// Modified Rogers norm as a complex number: the Berezin integral of
    /// `Π_i exp(−η_i η_i^#) · self`, integrating `dη_i^#` then `dη_i`, pair by
    /// pair ascending. Requires an even argument.
    pub fn modified_rogers_complex(&self) -> Result<Complex> {
        if !self.is_even() {
            return Err(Error::Parity(format!(
                "modified Rogers norm needs an even supernumber, got {self}"
            )));
        }
        let pairs = self.order / 2;
        let mut integrand = self.clone();
        for pair in 1..=pairs {
            let weight = &Self::one(self.order) - &Self::pair_product(self.order, pair);
            integrand = &weight * &integrand;
        }
        for pair in 1..=pairs {
            integrand = integrand
                .berezin(Generator::eta_hash(pair))
                .berezin(Generator::eta(pair));
        }
        Ok(integrand.body())
    }

    /// Modified Rogers norm; the result must be real.
    pub fn modified_rogers(&self) -> Result<f64> {
        let z = self.modified_rogers_complex()?;
        if z.im.abs() > CMP_TOL * z.re.abs().max(1.0) {
            return Err(Error::Domain(format!(
                "modified Rogers norm of {self} is not real ({z})"
            )));
        }
        Ok(z.re)
    }

    fn series_around_body(&self, coeffs: impl Fn(u32) -> f64, body_factor: Complex) -> Self {
        let body = self.body();
        let ratio = self.soul().scale(body.inv());
        let mut power = Self::one(self.order);
        let mut sum = Self::zero(self.order);
        let mut k = 0;
        while !power.is_zero() {
            sum += &power.scale_real(coeffs(k));
            power = &power * &ratio;
            k += 1;
        }
        sum.scale(body_factor)
    }

    /// Multiplicative inverse of an even element with nonzero body.
    pub fn invert(&self) -> Result<Self> {
        if !self.is_even() {
            return Err(Error::Parity(format!("invert needs an even supernumber, got {self}")));
        }
        let body = self.body();
        if body.norm() <= PRUNE_TOL {
            return Err(Error::NotInvertible(format!("{self} has zero body")));
        }
        // 1/(b(1+s)) = (1/b) Σ (−s)^k
        Ok(self.series_around_body(|k| if k % 2 == 0 { 1.0 } else { -1.0 }, body.inv()))
    }

    /// `self^{-1/2}` for an even element with real positive body.
    pub fn inv_sqrt(&self) -> Result<Self> {
        if !self.is_even() {
            return Err(Error::Parity(format!("inv_sqrt needs an even supernumber, got {self}")));
        }
        let body = self.body();
        if body.norm() <= PRUNE_TOL {
            return Err(Error::NotInvertible(format!("{self} has zero body")));
        }
        if body.im.abs() > CMP_TOL * body.re.abs().max(1.0) || body.re <= 0.0 {
            return Err(Error::Domain(format!(
                "inv_sqrt needs a real positive body, got {body}"
            )));
        }
        let binom = |k: u32| (0..k).fold(1.0, |acc, j| acc * (-0.5 - j as f64) / (j as f64 + 1.0));
        Ok(self.series_around_body(binom, Complex::new(body.re.sqrt().recip(), 0.0)))
    }

    /// Even and invariant under the hash map.
    pub fn is_real_even(&self) -> bool {
        self.is_even() && self.hash().approx_eq(self, CMP_TOL)
    }

    /// Largest coefficient difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let (mut i, mut j) = (0, 0);
        let mut worst: f64 = 0.0;
        while i < self.terms.len() || j < other.terms.len() {
            let a = self.terms.get(i);
            let b = other.terms.get(j);
            let d = match (a, b) {
                (Some(&(ma, ca)), Some(&(mb, cb))) if ma == mb => {
                    i += 1;
                    j += 1;
                    (ca - cb).norm()
                }
                (Some(&(ma, ca)), Some(&(mb, _))) if ma < mb => {
                    i += 1;
                    ca.norm()
                }
                (Some(&(_, ca)), None) => {
                    i += 1;
                    ca.norm()
                }
                (_, Some(&(_, cb))) => {
                    j += 1;
                    cb.norm()
                }
                (None, None) => unreachable!(),
            };
            worst = worst.max(d);
        }
        if self.order != other.order {
            return f64::INFINITY;
        }
        worst
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    /// Drops coefficients with modulus at or below `tol`.
    pub fn pruned(&self, tol: f64) -> Self {
        Supernumber {
            order: self.order,
            terms: self.terms.iter().copied().filter(|t| t.1.norm() > tol).collect(),
        }
    }
}

/// Sorts by mask, merges duplicates and drops negligible coefficients.
fn normalize(mut terms: Vec<(u32, Complex)>) -> Vec<(u32, Complex)> {
    terms.sort_unstable_by_key(|t| t.0);
    let mut out: Vec<(u32, Complex)> = Vec::with_capacity(terms.len());
    for (m, c) in terms {
        match out.last_mut() {
            Some(last) if last.0 == m => last.1 += c,
            _ => out.push((m, c)),
        }
    }
    out.retain(|t| t.1.norm() > PRUNE_TOL);
    out
}

fn fmt_complex(c: Complex, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if c.im == 0.0 {
        write!(f, "{}", c.re)
    } else if c.re == 0.0 {
        write!(f, "{}i", c.im)
    } else {
        write!(f, "({}{:+}i)", c.re, c.im)
    }
}

impl fmt::Display for Supernumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, &(m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            fmt_complex(c, f)?;
            if m != 0 {
                write!(f, "·")?;
                for s in slots_of(m) {
                    write!(f, "{}", Generator::from_slot(s))?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Supernumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Supernumber[N={}]({})", self.order, self)
    }
}

impl Neg for &Supernumber {
    type Output = Supernumber;

    fn neg(self) -> Supernumber {
        Supernumber {
            order: self.order,
            terms: self.terms.iter().map(|&(m, c)| (m, -c)).collect(),
        }
    }
}

impl Neg for Supernumber {
    type Output = Supernumber;

    fn neg(self) -> Supernumber {
        -&self
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Supernumber> for &Supernumber {
            type Output = Supernumber;

            /// Panics if the algebra orders differ; use the `checked_*` form to
            /// get an error instead.
            fn $method(self, rhs: &Supernumber) -> Supernumber {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }

        impl $trait<Supernumber> for Supernumber {
            type Output = Supernumber;

            fn $method(self, rhs: Supernumber) -> Supernumber {
                (&self).$method(&rhs)
            }
        }

        impl $trait<&Supernumber> for Supernumber {
            type Output = Supernumber;

            fn $method(self, rhs: &Supernumber) -> Supernumber {
                (&self).$method(rhs)
            }
        }

        impl $trait<Supernumber> for &Supernumber {
            type Output = Supernumber;

            fn $method(self, rhs: Supernumber) -> Supernumber {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl AddAssign<&Supernumber> for Supernumber {
    fn add_assign(&mut self, rhs: &Supernumber) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Supernumber> for Supernumber {
    fn sub_assign(&mut self, rhs: &Supernumber) {
        *self = &*self - rhs;
    }
}

impl Mul<Complex> for &Supernumber {
    type Output = Supernumber;

    fn mul(self, rhs: Complex) -> Supernumber {
        self.scale(rhs)
    }
}

impl Mul<f64> for &Supernumber {
    type Output = Supernumber;

    fn mul(self, rhs: f64) -> Supernumber {
        self.scale_real(rhs)
    }
}

impl Mul<f64> for Supernumber {
    type Output = Supernumber;

    fn mul(self, rhs: f64) -> Supernumber {
        self.scale_real(rhs)
    }
}

impl Mul<Complex> for Supernumber {
    type Output = Supernumber;

    fn mul(self, rhs: Complex) -> Supernumber {
        self.scale(rhs)
    }
}
