//! Z₂-graded matrices over a Grassmann algebra.
//!
//! Rows and columns each carry a parity vector. The standard basis puts even
//! vectors first, but arbitrary gradings are allowed so that lexicographic
//! two-party bases fit without permutation. Entries are stored densely in
//! row-major order.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::grassmann::{Complex, Parity, Supernumber};

/// Grade of a supermatrix as a linear map.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixParity {
    Even,
    Odd,
    Inhomogeneous,
}

impl MatrixParity {
    pub fn homogeneous(self) -> Option<Parity> {
        match self {
            MatrixParity::Even => Some(Parity::Even),
            MatrixParity::Odd => Some(Parity::Odd),
            MatrixParity::Inhomogeneous => None,
        }
    }
}

impl From<Parity> for MatrixParity {
    fn from(p: Parity) -> Self {
        match p {
            Parity::Even => MatrixParity::Even,
            Parity::Odd => MatrixParity::Odd,
        }
    }
}

#[derive(Clone, PartialEq)]
pub struct Supermatrix {
    order: u8,
    rows: Vec<Parity>,
    cols: Vec<Parity>,
    entries: Vec<Supernumber>,
}

/// Standard grading with `even` even vectors followed by `odd` odd ones.
pub fn standard_grading(even: usize, odd: usize) -> Vec<Parity> {
    let mut g = vec![Parity::Even; even];
    g.extend(std::iter::repeat(Parity::Odd).take(odd));
    g
}

impl Supermatrix {
    /// Builds a matrix from row-major entries over explicit gradings.
    pub fn new(
        order: u8,
        rows: Vec<Parity>,
        cols: Vec<Parity>,
        entries: Vec<Supernumber>,
    ) -> Result<Self> {
        if entries.len() != rows.len() * cols.len() {
            return Err(Error::Dimension(format!(
                "{} entries for a {}x{} matrix",
                entries.len(),
                rows.len(),
                cols.len()
            )));
        }
        if let Some(e) = entries.iter().find(|e| e.order() != order) {
            return Err(Error::OrderMismatch {
                left: order,
                right: e.order(),
            });
        }
        Ok(Supermatrix {
            order,
            rows,
            cols,
            entries,
        })
    }

    /// Builds a matrix with block dimensions `(p|q) x (s|t)` in standard order.
    pub fn from_blocks(
        order: u8,
        row_dims: (usize, usize),
        col_dims: (usize, usize),
        entries: Vec<Supernumber>,
    ) -> Result<Self> {
        Self::new(
            order,
            standard_grading(row_dims.0, row_dims.1),
            standard_grading(col_dims.0, col_dims.1),
            entries,
        )
    }

    /// Matrix with complex entries (bodies only).
    pub fn from_complex(
        order: u8,
        rows: Vec<Parity>,
        cols: Vec<Parity>,
        values: &[Complex],
    ) -> Result<Self> {
        let entries = values
            .iter()
            .map(|&z| Supernumber::from_complex(order, z))
            .collect();
        Self::new(order, rows, cols, entries)
    }

    pub fn zeros(order: u8, rows: Vec<Parity>, cols: Vec<Parity>) -> Self {
        let n = rows.len() * cols.len();
        Supermatrix {
            order,
            rows,
            cols,
            entries: vec![Supernumber::zero(order); n],
        }
    }

    pub fn identity(order: u8, grading: Vec<Parity>) -> Self {
        let n = grading.len();
        let mut m = Self::zeros(order, grading.clone(), grading);
        for i in 0..n {
            m.entries[i * n + i] = Supernumber::one(order);
        }
        m
    }

    /// Column supervector.
    pub fn column(order: u8, grading: Vec<Parity>, entries: Vec<Supernumber>) -> Result<Self> {
        Self::new(order, grading, vec![Parity::Even], entries)
    }

    /// Row supervector.
    pub fn row(order: u8, grading: Vec<Parity>, entries: Vec<Supernumber>) -> Result<Self> {
        Self::new(order, vec![Parity::Even], grading, entries)
    }

    pub fn order(&self) -> u8 {
        self.order
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn row_grading(&self) -> &[Parity] {
        &self.rows
    }

    pub fn col_grading(&self) -> &[Parity] {
        &self.cols
    }

    pub fn entries(&self) -> &[Supernumber] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &Supernumber {
        &self.entries[i * self.cols.len() + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Supernumber) {
        assert_eq!(value.order(), self.order, "entry order mismatch");
        let n = self.cols.len();
        self.entries[i * n + j] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Supernumber::is_zero)
    }

    /// Inferred grade; the zero matrix counts as even.
    pub fn parity(&self) -> MatrixParity {
        let mut seen: Option<Parity> = None;
        for (i, ri) in self.rows.iter().enumerate() {
            for (j, cj) in self.cols.iter().enumerate() {
                let e = self.get(i, j);
                if e.is_zero() {
                    continue;
                }
                let Some(pe) = e.parity() else {
                    return MatrixParity::Inhomogeneous;
                };
                let p = pe + *ri + *cj;
                match seen {
                    None => seen = Some(p),
                    Some(q) if q != p => return MatrixParity::Inhomogeneous,
                    _ => {}
                }
            }
        }
        seen.unwrap_or(Parity::Even).into()
    }

    /// Checks that the matrix has the declared grade.
    pub fn expect_parity(&self, declared: Parity) -> Result<()> {
        if self.is_zero() || self.parity() == declared.into() {
            Ok(())
        } else {
            Err(Error::Parity(format!(
                "matrix declared {declared:?} but has grade {:?}",
                self.parity()
            )))
        }
    }

    /// Projection onto the part of the given grade.
    pub fn part(&self, grade: Parity) -> Self {
        let mut out = self.clone();
        let n = self.cols.len();
        for (i, ri) in self.rows.iter().enumerate() {
            for (j, cj) in self.cols.iter().enumerate() {
                out.entries[i * n + j] = self.get(i, j).part(grade + *ri + *cj);
            }
        }
        out
    }

    /// Splits into `(even, odd)` parts.
    pub fn grade_parts(&self) -> (Self, Self) {
        (self.part(Parity::Even), self.part(Parity::Odd))
    }

    fn map_entries(&self, f: impl Fn(usize, usize, &Supernumber) -> Supernumber) -> Self {
        let n = self.cols.len();
        let entries = self
            .entries
            .iter()
            .enumerate()
            .map(|(k, e)| f(k / n, k % n, e))
            .collect();
        Supermatrix {
            order: self.order,
            rows: self.rows.clone(),
            cols: self.cols.clone(),
            entries,
        }
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.order != other.order {
            return Err(Error::OrderMismatch {
                left: self.order,
                right: other.order,
            });
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "shape {}x{} vs {}x{} or differing gradings",
                self.nrows(),
                self.ncols(),
                other.nrows(),
                other.ncols()
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(self.map_entries(|i, j, e| e + other.get(i, j)))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(self.map_entries(|i, j, e| e - other.get(i, j)))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.order != other.order {
            return Err(Error::OrderMismatch {
                left: self.order,
                right: other.order,
            });
        }
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{} (or column/row gradings differ)",
                self.nrows(),
                self.ncols(),
                other.nrows(),
                other.ncols()
            )));
        }
        let (n, m, l) = (self.nrows(), self.ncols(), other.ncols());
        let mut entries = Vec::with_capacity(n * l);
        for i in 0..n {
            for j in 0..l {
                let mut acc = Supernumber::zero(self.order);
                for k in 0..m {
                    let a = self.get(i, k);
                    let b = other.get(k, j);
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                entries.push(acc);
            }
        }
        Ok(Supermatrix {
            order: self.order,
            rows: self.rows.clone(),
            cols: other.cols.clone(),
            entries,
        })
    }

    /// Multiplication by a complex number (commutes with everything).
    pub fn scale(&self, c: Complex) -> Self {
        self.map_entries(|_, _, e| e.scale(c))
    }

    /// Left multiplication by a supernumber: entry `(i, j)` becomes
    /// `(−1)^{|ζ||i|} ζ x_ij`.
    pub fn scalar_left(&self, zeta: &Supernumber) -> Result<Self> {
        self.scalar_graded(zeta, true)
    }

    /// Right multiplication by a supernumber: entry `(i, j)` becomes
    /// `(−1)^{|ζ||j|} x_ij ζ`.
    pub fn scalar_right(&self, zeta: &Supernumber) -> Result<Self> {
        self.scalar_graded(zeta, false)
    }

    fn scalar_graded(&self, zeta: &Supernumber, left: bool) -> Result<Self> {
        if zeta.order() != self.order {
            return Err(Error::OrderMismatch {
                left: zeta.order(),
                right: self.order,
            });
        }
        let (even, odd) = zeta.grade_parts();
        let mut out = Self::zeros(self.order, self.rows.clone(), self.cols.clone());
        for (z, pz) in [(even, Parity::Even), (odd, Parity::Odd)] {
            if z.is_zero() {
                continue;
            }
            let part = self.map_entries(|i, j, e| {
                if left {
                    (&z * e).scale_real(pz.koszul(self.rows[i]))
                } else {
                    (e * &z).scale_real(pz.koszul(self.cols[j]))
                }
            });
            out = &out + &part;
        }
        Ok(out)
    }

    /// Supertranspose. For a homogeneous matrix of grade `|X|` the entry
    /// `(j, i)` of the result is `x_ij (−1)^{|X|(|i|+|j|) + |j|(|i|+|j|)}`;
    /// inhomogeneous matrices are transposed part by part.
    pub fn supertranspose(&self) -> Self {
        let (n, m) = (self.nrows(), self.ncols());
        let mut out = Self::zeros(self.order, self.cols.clone(), self.rows.clone());
        for (part, grade) in self.homogeneous_parts() {
            for i in 0..n {
                for j in 0..m {
                    let e = part.get(i, j);
                    if e.is_zero() {
                        continue;
                    }
                    let off = self.rows[i] + self.cols[j];
                    let sign = grade.koszul(off) * self.cols[j].koszul(off);
                    let k = j * n + i;
                    out.entries[k] = &out.entries[k] + &e.scale_real(sign);
                }
            }
        }
        out
    }

    fn homogeneous_parts(&self) -> Vec<(Self, Parity)> {
        match self.parity().homogeneous() {
            Some(p) => vec![(self.clone(), p)],
            None => {
                let (e, o) = self.grade_parts();
                vec![(e, Parity::Even), (o, Parity::Odd)]
            }
        }
    }

    /// Entrywise hash map.
    pub fn hash_entries(&self) -> Self {
        self.map_entries(|_, _, e| e.hash())
    }

    /// Grade adjoint: hash composed with supertranspose.
    pub fn grade_adjoint(&self) -> Self {
        self.supertranspose().hash_entries()
    }

    /// `S^‡ = −S`
    pub fn is_super_antihermitian(&self, tol: f64) -> bool {
        self.grade_adjoint().approx_eq(&-self, tol)
    }

    /// Supertrace `Tr A − (−1)^{|S|} Tr D`, summed over homogeneous parts.
    pub fn supertrace(&self) -> Result<Supernumber> {
        if self.rows != self.cols {
            return Err(Error::Dimension(format!(
                "supertrace needs a square matrix with matching gradings, got {}x{}",
                self.nrows(),
                self.ncols()
            )));
        }
        let mut acc = Supernumber::zero(self.order);
        for (part, grade) in self.homogeneous_parts() {
            for (i, ri) in self.rows.iter().enumerate() {
                let sign = if ri.is_odd() { -grade.sign() } else { 1.0 };
                acc += &part.get(i, i).scale_real(sign);
            }
        }
        Ok(acc)
    }

    /// Graded Kronecker product of two even matrices in lexicographic order:
    /// entry `((i,k),(j,l)) = (−1)^{(|i|+|j|)|k|} a_ij b_kl`.
    pub fn graded_kron(&self, other: &Self) -> Result<Self> {
        if self.order != other.order {
            return Err(Error::OrderMismatch {
                left: self.order,
                right: other.order,
            });
        }
        for (name, m) in [("left", self), ("right", other)] {
            if m.parity() != MatrixParity::Even {
                return Err(Error::UnsupportedParity(format!(
                    "graded Kronecker product needs even factors; {name} factor is {:?}",
                    m.parity()
                )));
            }
        }
        let kron_grading = |a: &[Parity], b: &[Parity]| -> Vec<Parity> {
            a.iter()
                .flat_map(|&x| b.iter().map(move |&y| x + y))
                .collect()
        };
        let rows = kron_grading(&self.rows, &other.rows);
        let cols = kron_grading(&self.cols, &other.cols);
        let (bn, bm) = (other.nrows(), other.ncols());
        let mut out = Self::zeros(self.order, rows, cols);
        let width = self.ncols() * bm;
        for i in 0..self.nrows() {
            for j in 0..self.ncols() {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                let off = self.rows[i] + self.cols[j];
                for k in 0..bn {
                    for l in 0..bm {
                        let b = other.get(k, l);
                        if b.is_zero() {
                            continue;
                        }
                        let sign = off.koszul(other.rows[k]);
                        out.entries[(i * bn + k) * width + j * bm + l] = (a * b).scale_real(sign);
                    }
                }
            }
        }
        Ok(out)
    }

    /// `exp(S)` for a matrix whose entries all have zero body; the series
    /// stops once a power vanishes.
    pub fn exp_nilpotent(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::Dimension("exp needs a square matrix".into()));
        }
        if let Some(e) = self.entries.iter().find(|e| e.body().norm() > 0.0) {
            return Err(Error::NotNilpotent(format!("entry {e} has a nonzero body")));
        }
        let mut sum = Self::identity(self.order, self.rows.clone());
        let mut power = sum.clone();
        let mut k = 1.0;
        loop {
            power = (&power * self).scale(Complex::new(1.0 / k, 0.0));
            if power.is_zero() {
                break;
            }
            sum = &sum + &power;
            k += 1.0;
        }
        Ok(sum)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.order != other.order || self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }
}

impl fmt::Debug for Supermatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "Supermatrix[N={}, {}x{}, {:?}]",
            self.order,
            self.nrows(),
            self.ncols(),
            self.parity()
        )?;
        for i in 0..self.nrows() {
            let row: Vec<String> = (0..self.ncols()).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Supermatrix> for &Supermatrix {
            type Output = Supermatrix;

            fn $method(self, rhs: &Supermatrix) -> Supermatrix {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }

        impl $trait<Supermatrix> for Supermatrix {
            type Output = Supermatrix;

            fn $method(self, rhs: Supermatrix) -> Supermatrix {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &Supermatrix {
    type Output = Supermatrix;

    fn neg(self) -> Supermatrix {
        self.map_entries(|_, _, e| -e)
    }
}

impl Neg for Supermatrix {
    type Output = Supermatrix;

    fn neg(self) -> Supermatrix {
        -&self
    }
}
