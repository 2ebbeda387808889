//! Elements of the fat groupoid of a VB-groupoid: pairs `(g, H)` of a base
//! arrow and a subspace of its fiber complementary to both structure-map
//! kernels. The set is infinite, so everything here is element-wise; valid
//! subspaces are sampled by perturbing a right inverse of the source map
//! inside the kernel and rejecting on the target-kernel condition.

use alloc::format;
use alloc::string::String;
use core::fmt;

use crate::linalg::{LinalgError, Mat, Subspace};
use crate::rng::SplitMix64;
use crate::vbg::{VBGroupoid, VbgError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FatError {
    /// The subspace fails one of the two complement conditions.
    NotAMember(String),
    NotComposable(String),
    Vbg(VbgError),
    Linalg(LinalgError),
}

impl fmt::Display for FatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FatError::NotAMember(m) => write!(f, "not a fat-groupoid element: {m}"),
            FatError::NotComposable(m) => write!(f, "not composable: {m}"),
            FatError::Vbg(e) => write!(f, "{e}"),
            FatError::Linalg(e) => write!(f, "{e}"),
        }
    }
}

impl From<VbgError> for FatError {
    fn from(e: VbgError) -> Self {
        FatError::Vbg(e)
    }
}

impl From<crate::groupoid::GroupoidError> for FatError {
    fn from(e: crate::groupoid::GroupoidError) -> Self {
        FatError::Vbg(VbgError::Groupoid(e))
    }
}

impl From<LinalgError> for FatError {
    fn from(e: LinalgError) -> Self {
        FatError::Linalg(e)
    }
}

/// A fat-groupoid element `(g, H)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FatElement {
    pub arrow: usize,
    pub h: Subspace,
}

/// True iff `H` is complementary to both `ker(s̃_g)` and `ker(t̃_g)`.
pub fn is_member(v: &VBGroupoid, g: usize, h: &Subspace) -> Result<bool, FatError> {
    if h.ambient_dim() != v.fiber_dim() {
        return Err(FatError::NotAMember(format!(
            "ambient dimension {} differs from fiber dimension {}",
            h.ambient_dim(),
            v.fiber_dim()
        )));
    }
    let ker_s = v.src_map(g).kernel();
    let ker_t = v.tgt_map(g).kernel();
    Ok(h.is_complement(&ker_s)? && h.is_complement(&ker_t)?)
}

pub fn element(v: &VBGroupoid, g: usize, h: Subspace) -> Result<FatElement, FatError> {
    if !is_member(v, g, &h)? {
        return Err(FatError::NotAMember(h.describe()));
    }
    Ok(FatElement { arrow: g, h })
}

/// The unit `(1_x, ũ(E_M)_x)`.
pub fn unit(v: &VBGroupoid, x: usize) -> FatElement {
    let u = v.base().unit_arrow(x);
    FatElement { arrow: u, h: v.unit_map(x).image() }
}

/// The inverse `(g⁻¹, ĩ(H))`.
pub fn inverse(v: &VBGroupoid, a: &FatElement) -> FatElement {
    let gi = v.base().inverse(a.arrow);
    let image = v.inv_map(a.arrow).mul(a.h.basis()).expect("fiber shapes");
    FatElement { arrow: gi, h: Subspace::from_cols(v.fiber_dim(), &image) }
}

/// The product `(gh, m̃(H_g, H_h))` computed as the image of a basis of the
/// fibered subspace `(H_g × H_h) ∩ {s̃ v = t̃ w}` under the multiplication.
pub fn compose(v: &VBGroupoid, a: &FatElement, b: &FatElement) -> Result<FatElement, FatError> {
    let (g, h) = (a.arrow, b.arrow);
    if v.base().src(g) != v.base().tgt(h) {
        return Err(FatError::NotComposable(format!(
            "arrows {} and {}",
            v.base().arrow_id(g),
            v.base().arrow_id(h)
        )));
    }
    let gh = v.base().compose(g, h)?;
    // Parametrize pairs (H_g α, H_h β) with s̃(H_g α) = t̃(H_h β).
    let sa = v.src_map(g).mul(a.h.basis())?;
    let tb = v.tgt_map(h).mul(b.h.basis())?;
    let pair_basis = sa.hstack(&tb.neg()).kernel();
    let pb = pair_basis.basis();
    let alpha = Mat::from_fn(a.h.dim(), pb.cols(), |r, c| pb.at(r, c).clone());
    let beta = Mat::from_fn(b.h.dim(), pb.cols(), |r, c| pb.at(a.h.dim() + r, c).clone());
    let first = a.h.basis().mul(&alpha)?;
    let second = b.h.basis().mul(&beta)?;
    let image = v.mul_apply(g, h, &first, &second)?;
    element(v, gh, Subspace::from_cols(v.fiber_dim(), &image))
}

/// The representation of `(g, H)` on the base bundle:
/// `e ↦ t̃((s̃|_H)⁻¹ e)`, mapping the fiber at `s(g)` to the fiber at `t(g)`.
pub fn act_base(v: &VBGroupoid, a: &FatElement, e: &Mat) -> Result<Mat, FatError> {
    let s_on_h = v.src_map(a.arrow).mul(a.h.basis())?;
    let coords = s_on_h.solve_unique(e)?;
    Ok(v.tgt_map(a.arrow).mul(&a.h.basis().mul(&coords)?)?)
}

/// The representation of `(g, H)` on the core:
/// `c ↦ m̃(α, R̃_(g⁻¹) c)` with `α ∈ H` chosen so `s̃(α) = t̃(c)`. Input and
/// output are in the canonical core bases at `s(g)` and `t(g)`.
pub fn act_core(v: &VBGroupoid, a: &FatElement, c: &Mat) -> Result<Mat, FatError> {
    let g = a.arrow;
    let x = v.base().src(g);
    let y = v.base().tgt(g);
    let ux = v.base().unit_arrow(x);
    let gi = v.base().inverse(g);
    let c_fiber = v.core_basis(x).mul(c)?;
    // α ∈ H with s̃(α) = t̃(c).
    let target = v.tgt_map(ux).mul(&c_fiber)?;
    let s_on_h = v.src_map(g).mul(a.h.basis())?;
    let alpha = a.h.basis().mul(&s_on_h.solve_unique(&target)?)?;
    // R̃_(g⁻¹)(c) lives in ker(s̃) over g⁻¹.
    let translated = v.rt_apply(ux, gi, &c_fiber)?;
    let result = v.mul_apply(g, gi, &alpha, &translated)?;
    Ok(v.core_basis(y).solve_unique(&result)?)
}

/// Rejection-sample a fat element at `g`: a right inverse of the source map
/// perturbed inside its kernel and mixed by an invertible matrix, rejected
/// until transverse to the target kernel.
pub fn random_at(v: &VBGroupoid, g: usize, rng: &mut SplitMix64) -> FatElement {
    let k = v.base_rank();
    if k == 0 {
        return FatElement { arrow: g, h: Subspace::zero(v.fiber_dim()) };
    }
    let right_inv = v.src_map(g).right_inverse().expect("source map is surjective");
    let ker = v.src_kernel_basis(g);
    loop {
        let perturb = ker.mul(&rng.next_mat(v.core_rank(), k)).expect("shapes");
        let cols = right_inv.add(&perturb).mul(&rng.next_invertible(k)).expect("shapes");
        let h = Subspace::from_cols(v.fiber_dim(), &cols);
        if is_member(v, g, &h).expect("fiber dimension matches") {
            return FatElement { arrow: g, h };
        }
    }
}
