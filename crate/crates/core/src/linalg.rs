//! Exact rational matrices and subspaces in canonical form.
//!
//! [`Mat`] is a dense row-major matrix over arbitrary-precision rationals.
//! [`Subspace`] stores its basis in reduced column-echelon form, which is
//! unique, so two subspaces are equal iff their representations are equal.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational scalar.
pub type Rat = BigRational;

/// Rational from an integer.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Rational `n/d`. Panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinalgError {
    /// Operand shapes do not match the operation.
    DimensionMismatch { expected: (usize, usize), got: (usize, usize) },
    /// Inversion of a rank-deficient square matrix.
    SingularMatrix,
    /// `solve_unique`: the system has no solution.
    NoSolution,
    /// `solve_unique`: the system has more than one solution.
    NonUniqueSolution,
    /// Subspaces with different ambient dimensions were combined.
    AmbientMismatch { left: usize, right: usize },
}

impl fmt::Display for LinalgError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinalgError::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {}x{}, got {}x{}", expected.0, expected.1, got.0, got.1)
            }
            LinalgError::SingularMatrix => write!(f, "singular matrix"),
            LinalgError::NoSolution => write!(f, "linear system has no solution"),
            LinalgError::NonUniqueSolution => write!(f, "linear system has more than one solution"),
            LinalgError::AmbientMismatch { left, right } => {
                write!(f, "ambient dimensions differ: {left} vs {right}")
            }
        }
    }
}

/// Dense matrix of rationals, row-major. Entries are always fully reduced
/// fractions with positive denominator (maintained by `BigRational` itself).
#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat{}x{}{}", self.rows, self.cols, self)
    }
}

impl fmt::Display for Mat {
    /// Grid of rationals, e.g. `[[1, -1/2], [0, 1]]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.at(r, c))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl Mat {
    pub fn new(rows: usize, cols: usize, data: Vec<Rat>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch { expected: (rows, cols), got: (data.len(), 1) });
        }
        Ok(Mat { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Mat::from_fn(n, n, |r, c| if r == c { Rat::one() } else { Rat::zero() })
    }

    /// Anti-diagonal permutation matrix (reverses coordinate order).
    pub fn reversal(n: usize) -> Self {
        Mat::from_fn(n, n, |r, c| if r + c == n - 1 { Rat::one() } else { Rat::zero() })
    }

    /// Integer test data, row by row.
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat::from_fn(r, c, |i, j| rat(rows[i][j]))
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let data = rows.into_iter().flatten().collect();
        Mat { rows: r, cols: c, data }
    }

    /// Column vector.
    pub fn col_vec(entries: Vec<Rat>) -> Self {
        let rows = entries.len();
        Mat { rows, cols: 1, data: entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Rat {
        assert!(r < self.rows && c < self.cols, "index out of range");
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rat) {
        assert!(r < self.rows && c < self.cols, "index out of range");
        self.data[r * self.cols + c] = v;
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Rat::is_zero)
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |r, c| self.at(c, r).clone())
    }

    pub fn neg(&self) -> Mat {
        Mat::from_fn(self.rows, self.cols, |r, c| -self.at(r, c).clone())
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in add");
        Mat::from_fn(self.rows, self.cols, |r, c| self.at(r, c) + other.at(r, c))
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in sub");
        Mat::from_fn(self.rows, self.cols, |r, c| self.at(r, c) - other.at(r, c))
    }

    pub fn scale(&self, s: &Rat) -> Mat {
        Mat::from_fn(self.rows, self.cols, |r, c| self.at(r, c) * s)
    }

    /// Exact matrix product.
    pub fn mul(&self, other: &Mat) -> Result<Mat, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: (self.cols, other.rows),
                got: (other.rows, other.cols),
            });
        }
        Ok(Mat::from_fn(self.rows, other.cols, |r, c| {
            let mut acc = Rat::zero();
            for k in 0..self.cols {
                if !self.at(r, k).is_zero() && !other.at(k, c).is_zero() {
                    acc += self.at(r, k) * other.at(k, c);
                }
            }
            acc
        }))
    }

    /// Columns `range.0..range.1` as a new matrix.
    pub fn col_slice(&self, start: usize, end: usize) -> Mat {
        assert!(start <= end && end <= self.cols, "column range out of bounds");
        Mat::from_fn(self.rows, end - start, |r, c| self.at(r, start + c).clone())
    }

    pub fn col(&self, j: usize) -> Mat {
        self.col_slice(j, j + 1)
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows, "row mismatch in hstack");
        Mat::from_fn(self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols { self.at(r, c).clone() } else { other.at(r, c - self.cols).clone() }
        })
    }

    /// `[self; other]`.
    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols, "column mismatch in vstack");
        Mat::from_fn(self.rows + other.rows, self.cols, |r, c| {
            if r < self.rows { self.at(r, c).clone() } else { other.at(r - self.rows, c).clone() }
        })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Reduced row echelon form; returns the pivot columns.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let piv = (row..m.rows).find(|&r| !m.at(r, col).is_zero());
            let Some(p) = piv else { continue };
            m.swap_rows(row, p);
            let inv = m.at(row, col).recip();
            for c in 0..m.cols {
                let v = m.at(row, c) * &inv;
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r != row && !m.at(r, col).is_zero() {
                    let factor = m.at(r, col).clone();
                    for c in 0..m.cols {
                        let v = m.at(r, c) - &factor * m.at(row, c);
                        m.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Exact inverse of a square matrix.
    pub fn inv(&self) -> Result<Mat, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::DimensionMismatch { expected: (self.rows, self.rows), got: (self.rows, self.cols) });
        }
        let n = self.rows;
        let aug = self.hstack(&Mat::identity(n));
        let (red, pivots) = aug.rref();
        if pivots.len() != n || pivots.iter().any(|&p| p >= n) {
            return Err(LinalgError::SingularMatrix);
        }
        Ok(red.col_slice(n, 2 * n))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// The unique `X` with `self * X = rhs`; errors if the system is
    /// inconsistent or underdetermined.
    pub fn solve_unique(&self, rhs: &Mat) -> Result<Mat, LinalgError> {
        if self.rows != rhs.rows {
            return Err(LinalgError::DimensionMismatch { expected: (self.rows, rhs.cols), got: (rhs.rows, rhs.cols) });
        }
        let aug = self.hstack(rhs);
        let (red, pivots) = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return Err(LinalgError::NoSolution);
        }
        if pivots.len() != self.cols {
            return Err(LinalgError::NonUniqueSolution);
        }
        // Pivots are exactly the first `cols` columns, so rows 0..cols of the
        // reduced right block carry the solution.
        Ok(Mat::from_fn(self.cols, rhs.cols, |r, c| red.at(r, self.cols + c).clone()))
    }

    /// Some solution `X` of `self * X = rhs`, with free variables set to
    /// zero; errors only if the system is inconsistent.
    pub fn solve_any(&self, rhs: &Mat) -> Result<Mat, LinalgError> {
        if self.rows != rhs.rows {
            return Err(LinalgError::DimensionMismatch { expected: (self.rows, rhs.cols), got: (rhs.rows, rhs.cols) });
        }
        let aug = self.hstack(rhs);
        let (red, pivots) = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return Err(LinalgError::NoSolution);
        }
        let mut x = Mat::zeros(self.cols, rhs.cols);
        for (r, &pc) in pivots.iter().enumerate() {
            for c in 0..rhs.cols {
                x.set(pc, c, red.at(r, self.cols + c).clone());
            }
        }
        Ok(x)
    }

    /// A right inverse of a surjective matrix.
    pub fn right_inverse(&self) -> Result<Mat, LinalgError> {
        self.solve_any(&Mat::identity(self.rows))
    }

    /// Null space, in canonical form.
    pub fn kernel(&self) -> Subspace {
        let (red, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let basis = Mat::from_fn(self.cols, free.len(), |r, j| {
            let fc = free[j];
            if r == fc {
                Rat::one()
            } else if let Some(pi) = pivots.iter().position(|&p| p == r) {
                -red.at(pi, fc).clone()
            } else {
                Rat::zero()
            }
        });
        Subspace::from_cols(self.cols, &basis)
    }

    /// Column space, in canonical form.
    pub fn image(&self) -> Subspace {
        Subspace::from_cols(self.rows, self)
    }

    /// Largest absolute numerator/denominator, for witness diagnostics.
    pub fn entry_complexity(&self) -> BigInt {
        let mut m = BigInt::zero();
        for e in &self.data {
            let n = e.numer().abs();
            let d = e.denom().abs();
            if n > m {
                m = n.clone();
            }
            if d > m {
                m = d;
            }
        }
        m
    }
}

/// A linear subspace of `Q^ambient`, with basis columns in reduced
/// column-echelon form. The form is unique, so `==` decides subspace equality.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Mat,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} of {}, basis {})", self.dim(), self.ambient, self.basis)
    }
}

impl Subspace {
    /// Canonicalize the span of the given columns.
    pub fn from_cols(ambient: usize, cols: &Mat) -> Subspace {
        assert_eq!(cols.rows(), ambient, "basis rows must match ambient dimension");
        // Reduced column echelon form = transposed RREF of the transpose,
        // zero columns dropped. RREF is unique, hence so is this form.
        let (red, pivots) = cols.transpose().rref();
        let basis = Mat::from_fn(ambient, pivots.len(), |r, j| red.at(j, r).clone());
        Subspace { ambient, basis }
    }

    pub fn zero(ambient: usize) -> Subspace {
        Subspace { ambient, basis: Mat::zeros(ambient, 0) }
    }

    pub fn full(ambient: usize) -> Subspace {
        Subspace { ambient, basis: Mat::identity(ambient) }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    /// Canonical basis, one column per dimension.
    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    pub fn contains(&self, v: &Mat) -> bool {
        assert_eq!(v.rows(), self.ambient, "vector has wrong ambient dimension");
        assert_eq!(v.cols(), 1, "expected a column vector");
        if v.is_zero() {
            return true;
        }
        self.basis.hstack(v).rank() == self.dim()
    }

    /// True iff `self ∩ other = 0` and the dimensions add up to the ambient.
    pub fn is_complement(&self, other: &Subspace) -> Result<bool, LinalgError> {
        if self.ambient != other.ambient {
            return Err(LinalgError::AmbientMismatch { left: self.ambient, right: other.ambient });
        }
        if self.dim() + other.dim() != self.ambient {
            return Ok(false);
        }
        Ok(self.basis.hstack(&other.basis).rank() == self.ambient)
    }

    /// `{ ξ : ξ(self) = 0 }` in dual coordinates.
    pub fn annihilator(&self) -> Subspace {
        self.basis.transpose().kernel()
    }

    pub fn describe(&self) -> String {
        format!("span of columns of {}", self.basis)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> Mat {
        Mat::from_int_rows(rows)
    }

    #[test]
    fn mul_identity_and_scalars() {
        let i2 = Mat::identity(2);
        assert_eq!(i2.mul(&i2).unwrap(), i2);
        assert_eq!(m(&[&[2]]).mul(&m(&[&[3]])).unwrap(), m(&[&[6]]));
        let shear = m(&[&[1, 1], &[0, 1]]);
        assert_eq!(shear.mul(&shear).unwrap(), m(&[&[1, 2], &[0, 1]]));
    }

    #[test]
    fn mul_dimension_mismatch() {
        assert!(matches!(m(&[&[1, 2]]).mul(&m(&[&[1, 2]])), Err(LinalgError::DimensionMismatch { .. })));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(Mat::identity(3).inv().unwrap(), Mat::identity(3));
        assert_eq!(m(&[&[2]]).inv().unwrap(), Mat::from_rows(vec![vec![ratio(1, 2)]]));
        assert_eq!(m(&[&[1, 1], &[0, 1]]).inv().unwrap(), m(&[&[1, -1], &[0, 1]]));
        assert_eq!(m(&[&[1, 2], &[2, 4]]).inv(), Err(LinalgError::SingularMatrix));
    }

    #[test]
    fn kernel_and_image_examples() {
        assert_eq!(Mat::identity(2).kernel(), Subspace::zero(2));
        let k = m(&[&[1, 1]]).kernel();
        assert_eq!(k.basis(), &m(&[&[1], &[-1]]));
        let im = m(&[&[1], &[1]]).image();
        assert_eq!(im.basis(), &m(&[&[1], &[1]]));
    }

    #[test]
    fn complement_examples() {
        let e1 = Subspace::from_cols(2, &m(&[&[1], &[0]]));
        let e2 = Subspace::from_cols(2, &m(&[&[0], &[1]]));
        assert!(e1.is_complement(&e2).unwrap());
        assert!(!e1.is_complement(&e1).unwrap());
        let d1 = Subspace::from_cols(2, &m(&[&[1], &[1]]));
        let d2 = Subspace::from_cols(2, &m(&[&[1], &[-1]]));
        assert!(d1.is_complement(&d2).unwrap());
        let bad = Subspace::from_cols(3, &m(&[&[1], &[0], &[0]]));
        assert!(matches!(e1.is_complement(&bad), Err(LinalgError::AmbientMismatch { .. })));
    }

    #[test]
    fn annihilator_examples() {
        assert_eq!(Subspace::zero(2).annihilator(), Subspace::full(2));
        assert_eq!(Subspace::full(2).annihilator(), Subspace::zero(2));
        let diag = Subspace::from_cols(2, &m(&[&[1], &[1]]));
        assert_eq!(diag.annihilator().basis(), &m(&[&[1], &[-1]]));
    }

    #[test]
    fn solve_unique_examples() {
        let b = m(&[&[3], &[4]]);
        assert_eq!(Mat::identity(2).solve_unique(&b).unwrap(), b);
        assert_eq!(m(&[&[2]]).solve_unique(&m(&[&[6]])).unwrap(), m(&[&[3]]));
        assert_eq!(
            m(&[&[1, 1], &[0, 1]]).solve_unique(&m(&[&[1, 2], &[0, 1]])).unwrap(),
            m(&[&[1, 1], &[0, 1]])
        );
        assert_eq!(
            m(&[&[1], &[1]]).solve_unique(&m(&[&[1], &[2]])),
            Err(LinalgError::NoSolution)
        );
        assert_eq!(
            m(&[&[1, 1]]).solve_unique(&m(&[&[1]])),
            Err(LinalgError::NonUniqueSolution)
        );
    }

    #[test]
    fn subspace_equality_is_representation_independent() {
        let a = Subspace::from_cols(2, &m(&[&[2], &[2]]));
        let b = Subspace::from_cols(2, &m(&[&[-5], &[-5]]));
        assert_eq!(a, b);
    }

    fn small_rat() -> impl Strategy<Value = Rat> {
        (-4i64..=4, 1i64..=3).prop_map(|(n, d)| ratio(n, d))
    }

    fn small_mat(rows: usize, cols: usize) -> impl Strategy<Value = Mat> {
        proptest::collection::vec(small_rat(), rows * cols)
            .prop_map(move |data| Mat::new(rows, cols, data).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn inverse_round_trip(a in small_mat(3, 3)) {
            prop_assume!(a.is_invertible());
            let inv = a.inv().unwrap();
            prop_assert_eq!(a.mul(&inv).unwrap(), Mat::identity(3));
            prop_assert_eq!(inv.mul(&a).unwrap(), Mat::identity(3));
        }

        #[test]
        fn rank_nullity(a in small_mat(3, 4)) {
            prop_assert_eq!(a.kernel().dim() + a.image().dim(), a.cols());
        }

        #[test]
        fn double_annihilator(cols in small_mat(4, 2)) {
            let u = Subspace::from_cols(4, &cols);
            prop_assert_eq!(u.annihilator().annihilator(), u);
        }

        #[test]
        fn complement_matches_brute_force(a in small_mat(3, 2), b in small_mat(3, 1)) {
            let u = Subspace::from_cols(3, &a);
            let v = Subspace::from_cols(3, &b);
            let brute = u.dim() + v.dim() == 3 && u.basis().hstack(v.basis()).rank() == 3;
            prop_assert_eq!(u.is_complement(&v).unwrap(), brute);
        }

        #[test]
        fn kernel_vectors_are_killed(a in small_mat(2, 4)) {
            let k = a.kernel();
            for j in 0..k.dim() {
                prop_assert!(a.mul(&k.basis().col(j)).unwrap().is_zero());
            }
        }
    }
}
