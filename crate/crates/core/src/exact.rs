//! Exact rational scalars, vectors, matrices and bilinear tables.
//!
//! Matrices follow the column convention: `m.get(i, j)` is the coefficient of
//! `e_i` in the image of `e_j`. A [`Tensor3`] stores `c(k, i, j)`, the
//! coefficient of `e_k` in the product of `e_i` and `e_j`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Largest dimension accepted for any single sort.
pub const MAX_DIM: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShapeError {
    #[error("shape mismatch in {op}: expected {expected}, found {found}")]
    Mismatch {
        op: &'static str,
        expected: String,
        found: String,
    },
    #[error("matrix must be square for {op}, found {rows}x{cols}")]
    NotSquare {
        op: &'static str,
        rows: usize,
        cols: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid rational literal `{0}`")]
pub struct ParseScalarError(pub String);

/// An exact rational number.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Scalar(BigRational);

impl Scalar {
    pub fn zero() -> Self {
        Scalar(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar(BigRational::from_integer(BigInt::from(n)))
    }

    /// Panics when `den` is zero.
    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Scalar(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Scalar(self.0.abs())
    }

    /// Returns `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Scalar(self.0.recip()))
        }
    }

    pub fn checked_div(&self, other: &Scalar) -> Option<Self> {
        other.recip().map(|r| self * &r)
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Scalar::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// Reduces the value modulo the prime `p`; `None` when the denominator
    /// vanishes mod `p`.
    pub fn mod_prime(&self, p: u64) -> Option<u64> {
        let pb = BigInt::from(p);
        let reduce = |v: &BigInt| -> u64 {
            let r = ((v % &pb) + &pb) % &pb;
            u64::try_from(r).expect("residue fits in u64")
        };
        let n = reduce(self.numer());
        let d = reduce(self.denom());
        if d == 0 {
            return None;
        }
        Some(mulmod(n, powmod(d, p - 2, p), p))
    }
}

pub(crate) fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn powmod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, p);
        }
        base = mulmod(base, base, p);
        exp >>= 1;
    }
    acc
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar(r)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Scalar {
    type Err = ParseScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ParseScalarError(s.to_string());
        let t = s.trim();
        let (num, den) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), Some(d.trim())),
            None => (t, None),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = match den {
            Some(d) => {
                if d.starts_with(['-', '+']) {
                    return Err(bad());
                }
                d.parse().map_err(|_| bad())?
            }
            None => BigInt::one(),
        };
        if den.is_zero() {
            return Err(bad());
        }
        Ok(Scalar(BigRational::new(num, den)))
    }
}

macro_rules! scalar_binop {
    ($tr:ident, $method:ident, $op:tt) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                Scalar(&self.0 $op &rhs.0)
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                Scalar(self.0 $op rhs.0)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                Scalar(self.0 $op &rhs.0)
            }
        }
    };
}

scalar_binop!(Add, add, +);
scalar_binop!(Sub, sub, -);
scalar_binop!(Mul, mul, *);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.0 += &rhs.0;
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-self.0)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-&self.0)
    }
}

/// The standard basis vector `e_i` (0-based) of length `n`.
pub fn basis_vector(n: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); n];
    v[i] = Scalar::one();
    v
}

pub fn is_zero_vector(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

/// `acc += c * v`.
pub fn axpy(acc: &mut [Scalar], c: &Scalar, v: &[Scalar]) {
    debug_assert_eq!(acc.len(), v.len());
    if c.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a += &(c * x);
        }
    }
}

pub fn scale_vector(c: &Scalar, v: &[Scalar]) -> Vec<Scalar> {
    v.iter().map(|x| c * x).collect()
}

/// Dense matrix of exact rationals, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            entries: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![Scalar::one(); n])
    }

    pub fn diagonal(diag: &[Scalar]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, d) in diag.iter().enumerate() {
            m.set(i, i, d.clone());
        }
        m
    }

    pub fn scalar(n: usize, c: Scalar) -> Self {
        Self::diagonal(&vec![c; n])
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self, ShapeError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(ShapeError::Mismatch {
                    op: "from_rows",
                    expected: format!("rows of length {c}"),
                    found: format!("row of length {}", row.len()),
                });
            }
            entries.extend(row);
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            entries,
        })
    }

    /// Builds a matrix from integer rows. Panics on ragged input.
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Scalar::from(x)).collect())
                .collect(),
        )
        .expect("ragged integer matrix")
    }

    /// Builds a matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(rows: usize, columns: &[Vec<Scalar>]) -> Result<Self, ShapeError> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(ShapeError::Mismatch {
                    op: "from_columns",
                    expected: format!("columns of length {rows}"),
                    found: format!("column of length {}", col.len()),
                });
            }
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Scalar) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn apply(&self, v: &[Scalar]) -> Result<Vec<Scalar>, ShapeError> {
        if v.len() != self.cols {
            return Err(ShapeError::Mismatch {
                op: "apply",
                expected: format!("vector of length {}", self.cols),
                found: format!("vector of length {}", v.len()),
            });
        }
        let mut out = vec![Scalar::zero(); self.rows];
        for (j, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                let a = self.get(i, j);
                if !a.is_zero() {
                    *o += &(a * x);
                }
            }
        }
        Ok(out)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Matrix) -> Result<Matrix, ShapeError> {
        if self.cols != other.rows {
            return Err(ShapeError::Mismatch {
                op: "compose",
                expected: format!("inner dimension {}", self.cols),
                found: format!("inner dimension {}", other.rows),
            });
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * other.cols + j] += &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|x| c * x).collect(),
        }
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix, ShapeError> {
        self.same_shape(other, "add")?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix, ShapeError> {
        self.same_shape(other, "sub")?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    fn same_shape(&self, other: &Matrix, op: &'static str) -> Result<(), ShapeError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(ShapeError::Mismatch {
                op,
                expected: format!("{}x{}", self.rows, self.cols),
                found: format!("{}x{}", other.rows, other.cols),
            });
        }
        Ok(())
    }

    /// Repeated squaring; `pow(0)` is the identity.
    pub fn pow(&self, mut exp: u64) -> Result<Matrix, ShapeError> {
        if !self.is_square() {
            return Err(ShapeError::NotSquare {
                op: "pow",
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut acc = Matrix::identity(self.rows);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.compose(&base)?;
            }
            exp >>= 1;
            if exp > 0 {
                base = base.compose(&base)?;
            }
        }
        Ok(acc)
    }

    /// Kronecker product; basis pair `(i, k)` maps to index `i * other.dim + k`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other.get(k, l);
                        if !b.is_zero() {
                            out.set(i * other.rows + k, j * other.cols + l, a * b);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn block_diag(&self, other: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    /// First basis index `j` with `(self∘other)(e_j) ≠ (other∘self)(e_j)`.
    pub fn commutation_witness(&self, other: &Matrix) -> Result<Option<usize>, ShapeError> {
        let ab = self.compose(other)?;
        let ba = other.compose(self)?;
        Ok((0..ab.cols).find(|&j| ab.column(j) != ba.column(j)))
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Bilinear table `c(k, i, j)`: coefficient of `e_k` in `e_i * e_j`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Tensor3 {
    out: usize,
    left: usize,
    right: usize,
    entries: Vec<Scalar>,
}

impl Tensor3 {
    pub fn zeros(out: usize, left: usize, right: usize) -> Self {
        Tensor3 {
            out,
            left,
            right,
            entries: vec![Scalar::zero(); out * left * right],
        }
    }

    /// Square table on a single space of dimension `n`.
    pub fn square(n: usize) -> Self {
        Self::zeros(n, n, n)
    }

    pub fn out_dim(&self) -> usize {
        self.out
    }

    pub fn left_dim(&self) -> usize {
        self.left
    }

    pub fn right_dim(&self) -> usize {
        self.right
    }

    fn index(&self, k: usize, i: usize, j: usize) -> usize {
        (k * self.left + i) * self.right + j
    }

    pub fn get(&self, k: usize, i: usize, j: usize) -> &Scalar {
        &self.entries[self.index(k, i, j)]
    }

    pub fn set(&mut self, k: usize, i: usize, j: usize, value: Scalar) {
        let idx = self.index(k, i, j);
        self.entries[idx] = value;
    }

    /// Coordinates of `e_i * e_j`.
    pub fn image(&self, i: usize, j: usize) -> Vec<Scalar> {
        (0..self.out).map(|k| self.get(k, i, j).clone()).collect()
    }

    pub fn set_image(&mut self, i: usize, j: usize, v: &[Scalar]) {
        for (k, x) in v.iter().enumerate() {
            self.set(k, i, j, x.clone());
        }
    }

    pub fn apply(&self, u: &[Scalar], v: &[Scalar]) -> Result<Vec<Scalar>, ShapeError> {
        if u.len() != self.left || v.len() != self.right {
            return Err(ShapeError::Mismatch {
                op: "tensor apply",
                expected: format!("arguments of length ({}, {})", self.left, self.right),
                found: format!("({}, {})", u.len(), v.len()),
            });
        }
        let mut out = vec![Scalar::zero(); self.out];
        for (i, a) in u.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in v.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.get(k, i, j);
                    if !c.is_zero() {
                        *o += &(c * &ab);
                    }
                }
            }
        }
        Ok(out)
    }

    /// `(x, y) ↦ self(a x, b y)`.
    pub fn precompose(&self, a: &Matrix, b: &Matrix) -> Result<Tensor3, ShapeError> {
        if a.rows() != self.left || b.rows() != self.right {
            return Err(ShapeError::Mismatch {
                op: "precompose",
                expected: format!("maps into ({}, {})", self.left, self.right),
                found: format!("({}, {})", a.rows(), b.rows()),
            });
        }
        let mut out = Tensor3::zeros(self.out, a.cols(), b.cols());
        for i in 0..a.cols() {
            let ai = a.column(i);
            for j in 0..b.cols() {
                let v = self.apply(&ai, &b.column(j))?;
                out.set_image(i, j, &v);
            }
        }
        Ok(out)
    }

    /// `(x, y) ↦ m(self(x, y))`.
    pub fn postcompose(&self, m: &Matrix) -> Result<Tensor3, ShapeError> {
        if m.cols() != self.out {
            return Err(ShapeError::Mismatch {
                op: "postcompose",
                expected: format!("map from dimension {}", self.out),
                found: format!("map from dimension {}", m.cols()),
            });
        }
        let mut out = Tensor3::zeros(m.rows(), self.left, self.right);
        for i in 0..self.left {
            for j in 0..self.right {
                let v = m.apply(&self.image(i, j))?;
                out.set_image(i, j, &v);
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Tensor3) -> Result<Tensor3, ShapeError> {
        if (self.out, self.left, self.right) != (other.out, other.left, other.right) {
            return Err(ShapeError::Mismatch {
                op: "tensor add",
                expected: format!("{}x{}x{}", self.out, self.left, self.right),
                found: format!("{}x{}x{}", other.out, other.left, other.right),
            });
        }
        Ok(Tensor3 {
            out: self.out,
            left: self.left,
            right: self.right,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn scale(&self, c: &Scalar) -> Tensor3 {
        Tensor3 {
            out: self.out,
            left: self.left,
            right: self.right,
            entries: self.entries.iter().map(|x| c * x).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    /// Componentwise product on the tensor product of the underlying spaces.
    pub fn kron(&self, other: &Tensor3) -> Tensor3 {
        let mut out = Tensor3::zeros(
            self.out * other.out,
            self.left * other.left,
            self.right * other.right,
        );
        for k1 in 0..self.out {
            for i1 in 0..self.left {
                for j1 in 0..self.right {
                    let a = self.get(k1, i1, j1);
                    if a.is_zero() {
                        continue;
                    }
                    for k2 in 0..other.out {
                        for i2 in 0..other.left {
                            for j2 in 0..other.right {
                                let b = other.get(k2, i2, j2);
                                if !b.is_zero() {
                                    out.set(
                                        k1 * other.out + k2,
                                        i1 * other.left + i2,
                                        j1 * other.right + j2,
                                        a * b,
                                    );
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Block table on `A ⊕ B` with no mixed products.
    pub fn block_sum(&self, other: &Tensor3) -> Tensor3 {
        let (n1, n2) = (self.out, other.out);
        let mut out = Tensor3::square(n1 + n2);
        for k in 0..self.out {
            for i in 0..self.left {
                for j in 0..self.right {
                    out.set(k, i, j, self.get(k, i, j).clone());
                }
            }
        }
        for k in 0..other.out {
            for i in 0..other.left {
                for j in 0..other.right {
                    out.set(n1 + k, n1 + i, n1 + j, other.get(k, i, j).clone());
                }
            }
        }
        out
    }
}

impl fmt::Debug for Tensor3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tensor3({}x{}x{}", self.out, self.left, self.right)?;
        for i in 0..self.left {
            for j in 0..self.right {
                let v = self.image(i, j);
                if !is_zero_vector(&v) {
                    write!(f, ", ({},{})->{:?}", i + 1, j + 1, v)?;
                }
            }
        }
        write!(f, ")")
    }
}

/// Row-reduced spanning set, used for membership tests.
#[derive(Debug, Clone)]
pub struct Subspace {
    dim: usize,
    rows: Vec<(usize, Vec<Scalar>)>,
}

impl Subspace {
    pub fn new(dim: usize) -> Self {
        Subspace {
            dim,
            rows: Vec::new(),
        }
    }

    pub fn span(dim: usize, vectors: &[Vec<Scalar>]) -> Self {
        let mut s = Self::new(dim);
        for v in vectors {
            s.insert(v);
        }
        s
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// What is left of `v` after eliminating every pivot; zero iff `v` lies in the span.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut r = v.to_vec();
        for (p, row) in &self.rows {
            if !r[*p].is_zero() {
                let c = -r[*p].clone();
                axpy(&mut r, &c, row);
            }
        }
        r
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        is_zero_vector(&self.reduce(v))
    }

    /// Adds `v`; returns whether the rank grew.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[p].recip().expect("pivot is nonzero");
        r = scale_vector(&inv, &r);
        for (_, row) in &mut self.rows {
            if !row[p].is_zero() {
                let c = -row[p].clone();
                axpy(row, &c, &r);
            }
        }
        self.rows.push((p, r));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from(n)
    }

    #[test]
    fn scalar_parse_and_print() {
        assert_eq!("3/6".parse::<Scalar>().unwrap(), Scalar::ratio(1, 2));
        assert_eq!("-4/2".parse::<Scalar>().unwrap().to_string(), "-2");
        assert_eq!(Scalar::ratio(-5, 3).to_string(), "-5/3");
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("x".parse::<Scalar>().is_err());
        assert!("1/-2".parse::<Scalar>().is_err());
    }

    #[test]
    fn apply_follows_column_convention() {
        let m = Matrix::from_ints(&[&[2, -2], &[0, 0]]);
        assert_eq!(m.apply(&[s(0), s(1)]).unwrap(), vec![s(-2), s(0)]);
    }

    #[test]
    fn compose_applies_right_factor_first() {
        let a = Matrix::from_ints(&[&[2, -2], &[0, 0]]);
        let b = Matrix::from_ints(&[&[2, -1], &[0, 0]]);
        let e2 = basis_vector(2, 1);
        assert_eq!(a.compose(&b).unwrap().apply(&e2).unwrap(), vec![s(-2), s(0)]);
        assert_eq!(b.compose(&a).unwrap().apply(&e2).unwrap(), vec![s(-4), s(0)]);
        assert_eq!(a.commutation_witness(&b).unwrap(), Some(1));
    }

    #[test]
    fn shape_errors_are_reported() {
        let a = Matrix::zeros(2, 3);
        assert!(a.apply(&[s(1), s(2)]).is_err());
        assert!(a.compose(&Matrix::zeros(2, 2)).is_err());
        assert!(a.pow(2).is_err());
    }

    #[test]
    fn pow_by_squaring() {
        let m = Matrix::from_ints(&[&[1, 1], &[0, 1]]);
        assert_eq!(m.pow(5).unwrap(), Matrix::from_ints(&[&[1, 5], &[0, 1]]));
        assert_eq!(m.pow(0).unwrap(), Matrix::identity(2));
    }

    #[test]
    fn dual_numbers_product() {
        // e1 unit, e2^2 = 0
        let mut t = Tensor3::square(2);
        t.set(0, 0, 0, s(1));
        t.set(1, 0, 1, s(1));
        t.set(1, 1, 0, s(1));
        let v = t.apply(&[s(1), s(1)], &[s(0), s(1)]).unwrap();
        assert_eq!(v, vec![s(0), s(1)]);
    }

    #[test]
    fn precompose_and_kron() {
        let mut t = Tensor3::square(1);
        t.set(0, 0, 0, s(1));
        let r = Matrix::from_ints(&[&[-2]]);
        let u = t.precompose(&Matrix::identity(1), &r).unwrap();
        assert_eq!(u.get(0, 0, 0), &s(-2));
        let k = u.kron(&t);
        assert_eq!(k.get(0, 0, 0), &s(-2));
        let m = Matrix::from_ints(&[&[1, 2], &[3, 4]]).kron(&Matrix::from_ints(&[&[0, 1], &[1, 0]]));
        assert_eq!(m.get(0, 1), &s(1));
        assert_eq!(m.get(3, 2), &s(4));
    }

    #[test]
    fn subspace_membership() {
        let sp = Subspace::span(3, &[vec![s(1), s(1), s(0)], vec![s(0), s(1), s(1)]]);
        assert_eq!(sp.rank(), 2);
        assert!(sp.contains(&[s(1), s(0), s(-1)]));
        assert!(!sp.contains(&[s(1), s(0), s(0)]));
    }

    #[test]
    fn modular_reduction() {
        let p = 101;
        let half = Scalar::ratio(1, 2).mod_prime(p).unwrap();
        assert_eq!(mulmod(half, 2, p), 1);
        assert_eq!(Scalar::from(-1).mod_prime(p), Some(100));
    }
}
