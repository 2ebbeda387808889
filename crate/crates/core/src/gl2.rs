//! The general linear 2-groupoid `GL(l,k)`.
//!
//! Points are linear maps `d : Q^l -> Q^k`. One-cells are triples `(d, A, B)`
//! with `A ∈ GL(l)`, `B ∈ GL(k)` acting on points by `d · (A,B) = B⁻¹ d A`.
//! Two-cells are block matrices `[[A, JB], [0, B]]` over a point `d`, subject
//! to `(I + Jd)` and `(I + dJ)` being invertible. Two groupoid structures
//! live on the two-cells: `∘20` over points (block-matrix multiplication) and
//! `∘21` over one-cells (vertical composition); they satisfy the interchange
//! law.

use alloc::format;
use alloc::string::String;
use core::fmt;

use crate::linalg::{LinalgError, Mat};
use crate::rng::SplitMix64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Gl2Error {
    /// Shapes incompatible with the stated (l, k).
    Shape(String),
    /// One of the four invertibility conditions fails.
    NotAMember(String),
    /// Source/target mismatch for the requested composition.
    NotComposable(String),
    Linalg(LinalgError),
}

impl fmt::Display for Gl2Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gl2Error::Shape(m) => write!(f, "shape error: {m}"),
            Gl2Error::NotAMember(m) => write!(f, "not a 2-groupoid element: {m}"),
            Gl2Error::NotComposable(m) => write!(f, "not composable: {m}"),
            Gl2Error::Linalg(e) => write!(f, "linear algebra error: {e}"),
        }
    }
}

impl From<LinalgError> for Gl2Error {
    fn from(e: LinalgError) -> Self {
        Gl2Error::Linalg(e)
    }
}

/// A one-cell `(d, A, B)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GL1Element {
    pub d: Mat,
    pub a: Mat,
    pub b: Mat,
}

impl GL1Element {
    pub fn new(d: Mat, a: Mat, b: Mat) -> Result<Self, Gl2Error> {
        if a.rows() != d.cols() || !a.is_square() || b.rows() != d.rows() || !b.is_square() {
            return Err(Gl2Error::Shape(format!(
                "expected A {0}x{0} and B {1}x{1} for d {1}x{0}",
                d.cols(),
                d.rows()
            )));
        }
        if !a.is_invertible() {
            return Err(Gl2Error::NotAMember(format!("A = {a} is singular")));
        }
        if !b.is_invertible() {
            return Err(Gl2Error::NotAMember(format!("B = {b} is singular")));
        }
        Ok(GL1Element { d, a, b })
    }

    pub fn unit(d: Mat) -> Self {
        let a = Mat::identity(d.cols());
        let b = Mat::identity(d.rows());
        GL1Element { d, a, b }
    }

    /// Target of the action groupoid: the element's own point.
    pub fn target(&self) -> Mat {
        self.d.clone()
    }

    /// Source `B⁻¹ d A`.
    pub fn source(&self) -> Mat {
        self.b.inv().expect("B invertible").mul(&self.d).expect("shapes").mul(&self.a).expect("shapes")
    }

    /// Action-groupoid composition `(d, A1 A2, B1 B2)`.
    pub fn compose(&self, other: &GL1Element) -> Result<GL1Element, Gl2Error> {
        if self.source() != other.target() {
            return Err(Gl2Error::NotComposable(format!(
                "source {} differs from target {}",
                self.source(),
                other.target()
            )));
        }
        Ok(GL1Element {
            d: self.d.clone(),
            a: self.a.mul(&other.a)?,
            b: self.b.mul(&other.b)?,
        })
    }

    pub fn inverse(&self) -> GL1Element {
        GL1Element {
            d: self.source(),
            a: self.a.inv().expect("A invertible"),
            b: self.b.inv().expect("B invertible"),
        }
    }
}

/// A two-cell `(d, [[A, JB], [0, B]])`, stored by its coordinates
/// `(d, A, J, B)`; the block matrix is reconstructed on demand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GL2Element {
    pub d: Mat,
    pub a: Mat,
    pub j: Mat,
    pub b: Mat,
}

impl fmt::Display for GL2Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} | {} | {} | {})", self.d, self.a, self.j, self.b)
    }
}

/// True iff all four invertibility conditions hold for `(d, A, J, B)`.
pub fn is_member(d: &Mat, a: &Mat, j: &Mat, b: &Mat) -> Result<bool, Gl2Error> {
    let (k, l) = (d.rows(), d.cols());
    if a.rows() != l || a.cols() != l || b.rows() != k || b.cols() != k || j.rows() != l || j.cols() != k {
        return Err(Gl2Error::Shape(format!(
            "for d {k}x{l}: expected A {l}x{l}, J {l}x{k}, B {k}x{k}; got A {}x{}, J {}x{}, B {}x{}",
            a.rows(), a.cols(), j.rows(), j.cols(), b.rows(), b.cols()
        )));
    }
    Ok(a.is_invertible()
        && b.is_invertible()
        && Mat::identity(l).add(&j.mul(d)?).is_invertible()
        && Mat::identity(k).add(&d.mul(j)?).is_invertible())
}

impl GL2Element {
    pub fn new(d: Mat, a: Mat, j: Mat, b: Mat) -> Result<Self, Gl2Error> {
        if !is_member(&d, &a, &j, &b)? {
            return Err(Gl2Error::NotAMember(format!("({d} | {a} | {j} | {b})")));
        }
        Ok(GL2Element { d, a, j, b })
    }

    pub fn l(&self) -> usize {
        self.d.cols()
    }

    pub fn k(&self) -> usize {
        self.d.rows()
    }

    /// Unit of `∘20` at the point `d`.
    pub fn unit20(d: Mat) -> Self {
        let (k, l) = (d.rows(), d.cols());
        GL2Element { d, a: Mat::identity(l), j: Mat::zeros(l, k), b: Mat::identity(k) }
    }

    /// Unit of `∘21` over a one-cell.
    pub fn unit21(f: &GL1Element) -> Self {
        GL2Element {
            d: f.d.clone(),
            a: f.a.clone(),
            j: Mat::zeros(f.a.rows(), f.b.rows()),
            b: f.b.clone(),
        }
    }

    /// The block matrix `[[A, JB], [0, B]]`.
    pub fn block(&self) -> Mat {
        let (l, k) = (self.l(), self.k());
        let jb = self.j.mul(&self.b).expect("shapes");
        let top = self.a.hstack(&jb);
        let bottom = Mat::zeros(k, l).hstack(&self.b);
        top.vstack(&bottom)
    }

    /// Recover the coordinates from a point and a block matrix; fails if the
    /// lower-left block is nonzero or membership does not hold.
    pub fn from_block(d: Mat, m: &Mat) -> Result<Self, Gl2Error> {
        let (k, l) = (d.rows(), d.cols());
        if m.rows() != l + k || m.cols() != l + k {
            return Err(Gl2Error::Shape(format!("expected a {}x{} block matrix", l + k, l + k)));
        }
        let lower_left = Mat::from_fn(k, l, |r, c| m.at(l + r, c).clone());
        if !lower_left.is_zero() {
            return Err(Gl2Error::NotAMember(format!("lower-left block {lower_left} is nonzero")));
        }
        let a = Mat::from_fn(l, l, |r, c| m.at(r, c).clone());
        let b = Mat::from_fn(k, k, |r, c| m.at(l + r, l + c).clone());
        if !b.is_invertible() {
            return Err(Gl2Error::NotAMember(format!("B = {b} is singular")));
        }
        let jb = Mat::from_fn(l, k, |r, c| m.at(r, l + c).clone());
        let j = jb.mul(&b.inv()?)?;
        GL2Element::new(d, a, j, b)
    }

    /// Target of `∘20`: the point `d`.
    pub fn t20(&self) -> Mat {
        self.d.clone()
    }

    /// Source of `∘20`: `((I + dJ) B)⁻¹ d A`.
    pub fn s20(&self) -> Mat {
        let k = self.k();
        let idj = Mat::identity(k).add(&self.d.mul(&self.j).expect("shapes"));
        idj.mul(&self.b)
            .expect("shapes")
            .inv()
            .expect("member")
            .mul(&self.d)
            .expect("shapes")
            .mul(&self.a)
            .expect("shapes")
    }

    /// Horizontal composition `∘20`; block-matrix multiplication over the
    /// first element's point.
    pub fn m20(&self, other: &GL2Element) -> Result<GL2Element, Gl2Error> {
        if self.s20() != other.t20() {
            return Err(Gl2Error::NotComposable(format!(
                "s20 = {} but t20 = {}",
                self.s20(),
                other.t20()
            )));
        }
        GL2Element::new(
            self.d.clone(),
            self.a.mul(&other.a)?,
            self.a.mul(&other.j)?.mul(&self.b.inv()?)?.add(&self.j),
            self.b.mul(&other.b)?,
        )
    }

    /// Inverse for `∘20`, based at `s20`.
    pub fn i20(&self) -> GL2Element {
        let a_inv = self.a.inv().expect("member");
        let b_inv = self.b.inv().expect("member");
        let j = a_inv.mul(&self.j).expect("shapes").mul(&self.b).expect("shapes").neg();
        GL2Element { d: self.s20(), a: a_inv, j, b: b_inv }
    }

    /// Target of `∘21`: `(d, A, (I + dJ) B)`.
    pub fn t21(&self) -> GL1Element {
        let k = self.k();
        let idj = Mat::identity(k).add(&self.d.mul(&self.j).expect("shapes"));
        GL1Element { d: self.d.clone(), a: self.a.clone(), b: idj.mul(&self.b).expect("shapes") }
    }

    /// Source of `∘21`: `(d, (I + Jd)⁻¹ A, B)`.
    pub fn s21(&self) -> GL1Element {
        let l = self.l();
        let ijd = Mat::identity(l).add(&self.j.mul(&self.d).expect("shapes"));
        GL1Element { d: self.d.clone(), a: ijd.inv().expect("member").mul(&self.a).expect("shapes"), b: self.b.clone() }
    }

    /// Vertical composition `∘21`: `(d, A, J d J' + J + J', B')`.
    pub fn m21(&self, other: &GL2Element) -> Result<GL2Element, Gl2Error> {
        if self.s21() != other.t21() {
            return Err(Gl2Error::NotComposable("s21 of the first differs from t21 of the second".into()));
        }
        let j = self.j.mul(&self.d)?.mul(&other.j)?.add(&self.j).add(&other.j);
        GL2Element::new(self.d.clone(), self.a.clone(), j, other.b.clone())
    }

    /// Inverse for `∘21`: `J ↦ -(I + Jd)⁻¹ J` with the legs swapped.
    pub fn i21(&self) -> GL2Element {
        let l = self.l();
        let ijd = Mat::identity(l).add(&self.j.mul(&self.d).expect("shapes"));
        let j = ijd.inv().expect("member").mul(&self.j).expect("shapes").neg();
        let s = self.s21();
        let k = self.k();
        let b = Mat::identity(k)
            .add(&self.d.mul(&self.j).expect("shapes"))
            .mul(&self.b)
            .expect("shapes");
        GL2Element { d: self.d.clone(), a: s.a, j, b }
    }

    /// Block transpose into `GL(k,l)`: conjugate the transposed block matrix
    /// by the coordinate reversal. Reverses both compositions.
    pub fn transpose(&self) -> GL2Element {
        let (l, k) = (self.l(), self.k());
        let rl = Mat::reversal(l);
        let rk = Mat::reversal(k);
        // Blocks of T Mᵀ T for M = [[A, JB], [0, B]].
        let a = rk.mul(&self.b.transpose()).expect("shapes").mul(&rk).expect("shapes");
        let b = rl.mul(&self.a.transpose()).expect("shapes").mul(&rl).expect("shapes");
        let j = rk
            .mul(&self.b.transpose())
            .expect("shapes")
            .mul(&self.j.transpose())
            .expect("shapes")
            .mul(&self.a.inv().expect("member").transpose())
            .expect("shapes")
            .mul(&rl)
            .expect("shapes");
        // Base point: minus the reversal-conjugated transpose of s20. The
        // sign makes membership close up ((I + Ĵd̂) = R(I+dJ)⁻ᵀR up to
        // conjugation) and mirrors the sign in the dual source map.
        let d = rl.mul(&self.s20().transpose()).expect("shapes").mul(&rk).expect("shapes").neg();
        GL2Element { d, a, j, b }
    }

    /// Image of `e` under inverse-transpose, an isomorphism
    /// `GL(l,k) -> GL(k,l)` with matrix part `T M⁻ᵀ T`; this is the element
    /// acting on dual frames.
    pub fn inv_transpose(&self) -> GL2Element {
        self.i20().transpose()
    }
}

/// Membership for the general linear 2-groupoid of a 2-graded bundle: a
/// 1-cell `(A, B)` from `d_x` to `d_y` needs `d_y A = B d_x`; a 2-cell `J`
/// between `(A, B)` and `(A', B')` needs `J d_x = A - A'` and
/// `d_y J = B - B'`.
pub fn gle_is_one_cell(d_x: &Mat, d_y: &Mat, a: &Mat, b: &Mat) -> Result<bool, Gl2Error> {
    if a.cols() != d_x.cols() || a.rows() != d_y.cols() || b.cols() != d_x.rows() || b.rows() != d_y.rows() {
        return Err(Gl2Error::Shape("one-cell shapes do not line up".into()));
    }
    Ok(a.is_invertible() && b.is_invertible() && d_y.mul(a)? == b.mul(d_x)?)
}

#[allow(clippy::too_many_arguments)]
pub fn gle_is_two_cell(
    d_x: &Mat,
    d_y: &Mat,
    a: &Mat,
    b: &Mat,
    j: &Mat,
    a_prime: &Mat,
    b_prime: &Mat,
) -> Result<bool, Gl2Error> {
    if !gle_is_one_cell(d_x, d_y, a, b)? || !gle_is_one_cell(d_x, d_y, a_prime, b_prime)? {
        return Ok(false);
    }
    if j.rows() != d_y.cols() || j.cols() != d_x.rows() {
        return Err(Gl2Error::Shape("two-cell J has wrong shape".into()));
    }
    Ok(j.mul(d_x)? == a.sub(a_prime) && d_y.mul(j)? == b.sub(b_prime))
}

/// The crossed module carried by the isotropy 2-group of `GL(l,k)` at `d`.
///
/// `H = { J : (d, I + Jd, J, I) is a two-cell }` with product inherited from
/// `∘20`; the boundary sends `J` to the one-cell `(d, I + Jd, I + dJ)`, and
/// one-cells `(d, A, B)` fixing `d` act on `H` by `∘20`-conjugation with
/// `unit21(d, A, B)`.
pub struct IsotropyCrossedModule {
    d: Mat,
}

impl IsotropyCrossedModule {
    pub fn new(d: Mat) -> Self {
        IsotropyCrossedModule { d }
    }

    pub fn point(&self) -> &Mat {
        &self.d
    }

    pub fn contains(&self, j: &Mat) -> Result<bool, Gl2Error> {
        let l = self.d.cols();
        let a = Mat::identity(l).add(&j.mul(&self.d)?);
        is_member(&self.d, &a, j, &Mat::identity(self.d.rows()))
    }

    /// The two-cell `(d, I + Jd, J, I)` representing `J`.
    pub fn element(&self, j: &Mat) -> Result<GL2Element, Gl2Error> {
        let l = self.d.cols();
        let a = Mat::identity(l).add(&j.mul(&self.d)?);
        GL2Element::new(self.d.clone(), a, j.clone(), Mat::identity(self.d.rows()))
    }

    /// Group law `J · J' = (I + Jd) J' + J`, inherited from `∘20`.
    pub fn mul(&self, j1: &Mat, j2: &Mat) -> Result<Mat, Gl2Error> {
        Ok(self.element(j1)?.m20(&self.element(j2)?)?.j)
    }

    pub fn inverse(&self, j: &Mat) -> Result<Mat, Gl2Error> {
        Ok(self.element(j)?.i20().j)
    }

    /// Boundary `∂(J) = (d, I + Jd, I + dJ)`, a one-cell fixing `d`.
    pub fn boundary(&self, j: &Mat) -> Result<GL1Element, Gl2Error> {
        Ok(self.element(j)?.t21())
    }

    /// Conjugation `C_(A,B)(J)`: `u21(d,A,B) ∘20 element(J) ∘20 i20(u21(d,A,B))`.
    /// The one-cell must fix `d`.
    pub fn conjugate(&self, f: &GL1Element, j: &Mat) -> Result<Mat, Gl2Error> {
        if f.d != self.d || f.source() != self.d {
            return Err(Gl2Error::NotComposable("the one-cell must belong to the isotropy at d".into()));
        }
        let u = GL2Element::unit21(f);
        Ok(u.m20(&self.element(j)?)?.m20(&u.i20())?.j)
    }
}

/// Rejection-sample a two-cell at the point `d`.
pub fn random_element_at(rng: &mut SplitMix64, d: &Mat) -> GL2Element {
    let (k, l) = (d.rows(), d.cols());
    loop {
        let a = rng.next_invertible(l);
        let b = rng.next_invertible(k);
        let j = rng.next_mat(l, k);
        if is_member(d, &a, &j, &b).expect("shapes consistent") {
            return GL2Element { d: d.clone(), a, j, b };
        }
    }
}

/// Rejection-sample a two-cell with both `∘21`-legs prescribed only through
/// its target one-cell: returns an element with `t21 = f`.
pub fn random_element_with_t21(rng: &mut SplitMix64, f: &GL1Element) -> GL2Element {
    let (k, l) = (f.d.rows(), f.d.cols());
    loop {
        let j = rng.next_mat(l, k);
        let idj = Mat::identity(k).add(&f.d.mul(&j).expect("shapes"));
        if !idj.is_invertible() {
            continue;
        }
        let b = idj.inv().expect("checked").mul(&f.b).expect("shapes");
        if let Ok(e) = GL2Element::new(f.d.clone(), f.a.clone(), j, b) {
            return e;
        }
    }
}
