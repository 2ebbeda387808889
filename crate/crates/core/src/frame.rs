//! s-bisection and t-bisection frames of a VB-groupoid.
//!
//! An s-bisection frame at an arrow `g` is an invertible matrix whose first
//! `l` columns span `ker(s̃_g)` and whose last `k` columns span a fat-groupoid
//! subspace. These frames form a groupoid over pairs (core frame, base
//! frame); the structure maps `bs, bt, bm, bu, bi` are implemented here
//! together with the moment matrix `d_φ`, the bijection `F` onto the action
//! groupoid of the fat groupoid, and the two duality maps: the flip `Ψ` onto
//! t-bisection frames and the dual-frame map onto t-bisection frames of the
//! dual VB-groupoid.
//!
//! The t-frame groupoid structure is computed through the opposite
//! VB-groupoid: a t-frame of `v` reindexed by the coordinate reversal `T` is
//! an s-frame of `v.opposite()`, and the t-frame structure maps are the
//! s-frame maps of the opposite, with the argument order of the
//! multiplication swapped so that t-frames at `(g, h)` compose exactly when
//! the corresponding s-frames do.

use alloc::format;
use alloc::string::String;
use core::fmt;

use crate::fat::{self, FatElement, FatError};
use crate::linalg::{LinalgError, Mat, Subspace};
use crate::rng::SplitMix64;
use crate::vbg::{VBGroupoid, VbgError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FrameError {
    NotAFrame(String),
    NotComposable(String),
    FatMembership(String),
    Shape(String),
    Vbg(VbgError),
    Linalg(LinalgError),
    Fat(FatError),
}

impl fmt::Display for FrameError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FrameError::NotAFrame(m) => write!(f, "not a bisection frame: {m}"),
            FrameError::NotComposable(m) => write!(f, "frames not composable: {m}"),
            FrameError::FatMembership(m) => write!(f, "fat membership failure: {m}"),
            FrameError::Shape(m) => write!(f, "shape error: {m}"),
            FrameError::Vbg(e) => write!(f, "{e}"),
            FrameError::Linalg(e) => write!(f, "{e}"),
            FrameError::Fat(e) => write!(f, "{e}"),
        }
    }
}

impl From<VbgError> for FrameError {
    fn from(e: VbgError) -> Self {
        FrameError::Vbg(e)
    }
}

impl From<LinalgError> for FrameError {
    fn from(e: LinalgError) -> Self {
        FrameError::Linalg(e)
    }
}

impl From<FatError> for FrameError {
    fn from(e: FatError) -> Self {
        FrameError::Fat(e)
    }
}

impl From<crate::groupoid::GroupoidError> for FrameError {
    fn from(e: crate::groupoid::GroupoidError) -> Self {
        FrameError::Vbg(VbgError::Groupoid(e))
    }
}

/// An s-bisection frame: columns `0..l` frame `ker(s̃_g)`, columns `l..l+k`
/// frame a fat subspace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SFrame {
    pub arrow: usize,
    pub phi: Mat,
}

/// A t-bisection frame: columns `0..k` frame a fat subspace, columns
/// `k..k+l` frame `ker(t̃_g)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TFrame {
    pub arrow: usize,
    pub phi: Mat,
}

/// A point of the frame base: a frame of the core fiber (in the canonical
/// kernel basis) and a frame of the base-bundle fiber at one object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasePair {
    pub object: usize,
    pub core_frame: Mat,
    pub base_frame: Mat,
}

impl SFrame {
    /// First block: the `ker(s̃)` columns.
    pub fn core_block(&self, v: &VBGroupoid) -> Mat {
        self.phi.col_slice(0, v.core_rank())
    }

    /// Second block: the fat columns.
    pub fn fat_block(&self, v: &VBGroupoid) -> Mat {
        self.phi.col_slice(v.core_rank(), v.fiber_dim())
    }

    /// The fat subspace spanned by the second block.
    pub fn fat_subspace(&self, v: &VBGroupoid) -> Subspace {
        Subspace::from_cols(v.fiber_dim(), &self.fat_block(v))
    }
}

/// Decide the two s-bisection conditions exactly.
pub fn is_sbis(v: &VBGroupoid, g: usize, phi: &Mat) -> Result<bool, FrameError> {
    let n = v.fiber_dim();
    if phi.rows() != n || phi.cols() != n {
        return Err(FrameError::Shape(format!("expected a {n}x{n} frame matrix")));
    }
    if !phi.is_invertible() {
        return Ok(false);
    }
    let first = phi.col_slice(0, v.core_rank());
    if !v.src_map(g).mul(&first)?.is_zero() {
        return Ok(false);
    }
    let h = Subspace::from_cols(n, &phi.col_slice(v.core_rank(), n));
    Ok(h.is_complement(&v.tgt_map(g).kernel())?)
}

pub fn sframe(v: &VBGroupoid, g: usize, phi: Mat) -> Result<SFrame, FrameError> {
    if !is_sbis(v, g, &phi)? {
        return Err(FrameError::NotAFrame(format!("{phi} at arrow {}", v.base().arrow_id(g))));
    }
    Ok(SFrame { arrow: g, phi })
}

/// Decide the two t-bisection conditions exactly.
pub fn is_tbis(v: &VBGroupoid, g: usize, phi: &Mat) -> Result<bool, FrameError> {
    let n = v.fiber_dim();
    if phi.rows() != n || phi.cols() != n {
        return Err(FrameError::Shape(format!("expected a {n}x{n} frame matrix")));
    }
    if !phi.is_invertible() {
        return Ok(false);
    }
    let last = phi.col_slice(v.base_rank(), n);
    if !v.tgt_map(g).mul(&last)?.is_zero() {
        return Ok(false);
    }
    let h = Subspace::from_cols(n, &phi.col_slice(0, v.base_rank()));
    Ok(h.is_complement(&v.src_map(g).kernel())?)
}

pub fn tframe(v: &VBGroupoid, g: usize, phi: Mat) -> Result<TFrame, FrameError> {
    if !is_tbis(v, g, &phi)? {
        return Err(FrameError::NotAFrame(format!("{phi} at arrow {}", v.base().arrow_id(g))));
    }
    Ok(TFrame { arrow: g, phi })
}

/// Target-side base pair: core part `w ↦ R̃_(g⁻¹)(φ(w, 0))`, base part
/// `v ↦ t̃(φ(0, v))`.
pub fn bt(v: &VBGroupoid, f: &SFrame) -> Result<BasePair, FrameError> {
    let g = f.arrow;
    let y = v.base().tgt(g);
    let gi = v.base().inverse(g);
    let translated = v.rt_apply(g, gi, &f.core_block(v))?;
    let core_frame = v.core_basis(y).solve_unique(&translated)?;
    let base_frame = v.tgt_map(g).mul(&f.fat_block(v))?;
    Ok(BasePair { object: y, core_frame, base_frame })
}

/// The moment matrix `d_φ = (bt_b)⁻¹ ∘ ρ_(t(g)) ∘ bt_c`, a `k x l` matrix.
pub fn dphi(v: &VBGroupoid, f: &SFrame) -> Result<Mat, FrameError> {
    let p = bt(v, f)?;
    let rho = v.core_anchor(p.object);
    Ok(p.base_frame.solve_unique(&rho.mul(&p.core_frame)?)?)
}

/// Source-side base pair: core part `w ↦ R̃_g(ĩ(φ(-w, d_φ w)))`, base part
/// `v ↦ s̃(φ(0, v))`.
pub fn bs(v: &VBGroupoid, f: &SFrame) -> Result<BasePair, FrameError> {
    let g = f.arrow;
    let x = v.base().src(g);
    let gi = v.base().inverse(g);
    let d = dphi(v, f)?;
    let l = v.core_rank();
    // Columns φ(-e_i, d e_i).
    let steer = Mat::identity(l).neg().vstack(&d);
    let in_ker_t = f.phi.mul(&steer)?;
    let flipped = v.inv_map(g).mul(&in_ker_t)?;
    let translated = v.rt_apply(gi, g, &flipped)?;
    let core_frame = v.core_basis(x).solve_unique(&translated)?;
    let base_frame = v.src_map(g).mul(&f.fat_block(v))?;
    Ok(BasePair { object: x, core_frame, base_frame })
}

/// Moment of a base point: `(base_frame)⁻¹ ∘ ρ_x ∘ core_frame`; equals
/// `d_φ` of the unit frame over it.
pub fn moment(v: &VBGroupoid, p: &BasePair) -> Result<Mat, FrameError> {
    let rho = v.core_anchor(p.object);
    Ok(p.base_frame.solve_unique(&rho.mul(&p.core_frame)?)?)
}

/// Unit frame over a base point: columns `K_x · core_frame` then
/// `U_x · base_frame`.
pub fn bu(v: &VBGroupoid, p: &BasePair) -> Result<SFrame, FrameError> {
    let x = p.object;
    let first = v.core_basis(x).mul(&p.core_frame)?;
    let last = v.unit_map(x).mul(&p.base_frame)?;
    sframe(v, v.base().unit_arrow(x), first.hstack(&last))
}

/// Frame multiplication
/// `bm(φ_g, φ_h)(w, v) = m̃(φ_g(0,v), φ_h(0,v)) + R̃_h(φ_g(w, 0))`,
/// defined when `bs(φ_g) = bt(φ_h)` exactly.
pub fn bm(v: &VBGroupoid, f1: &SFrame, f2: &SFrame) -> Result<SFrame, FrameError> {
    let (g, h) = (f1.arrow, f2.arrow);
    if v.base().src(g) != v.base().tgt(h) {
        return Err(FrameError::NotComposable(format!(
            "arrows {} and {}",
            v.base().arrow_id(g),
            v.base().arrow_id(h)
        )));
    }
    if bs(v, f1)? != bt(v, f2)? {
        return Err(FrameError::NotComposable("bs of the first frame differs from bt of the second".into()));
    }
    let gh = v.base().compose(g, h)?;
    let fat = v.mul_apply(g, h, &f1.fat_block(v), &f2.fat_block(v))?;
    let core = v.rt_apply(g, h, &f1.core_block(v))?;
    sframe(v, gh, core.hstack(&fat))
}

/// Frame inversion `bi(φ)(w, v) = ĩ(φ(-w, v + d_φ w))`, an s-frame at the
/// inverse arrow.
pub fn bi(v: &VBGroupoid, f: &SFrame) -> Result<SFrame, FrameError> {
    let g = f.arrow;
    let gi = v.base().inverse(g);
    let d = dphi(v, f)?;
    let (l, k) = (v.core_rank(), v.base_rank());
    let top = Mat::identity(l).neg().hstack(&Mat::zeros(l, k));
    let bottom = d.hstack(&Mat::identity(k));
    let reparam = top.vstack(&bottom);
    sframe(v, gi, v.inv_map(g).mul(&f.phi.mul(&reparam)?)?)
}

/// `F(φ_g) = ((g, H), bs(φ_g))`: the frame-groupoid element as a
/// fat-groupoid element plus a base point.
pub fn f_map(v: &VBGroupoid, f: &SFrame) -> Result<(FatElement, BasePair), FrameError> {
    let fe = fat::element(v, f.arrow, f.fat_subspace(v))?;
    Ok((fe, bs(v, f)?))
}

/// Inverse of `F`:
/// `φ(w, v) = (s̃|_H)⁻¹(φ_b v) + (s̃|_H)⁻¹(t̃(φ_c w)) - ĩ((R̃_g)⁻¹(φ_c w))`.
pub fn f_inv(v: &VBGroupoid, fe: &FatElement, p: &BasePair) -> Result<SFrame, FrameError> {
    let g = fe.arrow;
    let x = v.base().src(g);
    if p.object != x {
        return Err(FrameError::NotComposable("base point must sit at the source object".into()));
    }
    if !fat::is_member(v, g, &fe.h)? {
        return Err(FrameError::FatMembership(fe.h.describe()));
    }
    let gi = v.base().inverse(g);
    let ux = v.base().unit_arrow(x);
    let h_basis = fe.h.basis();
    let s_on_h = v.src_map(g).mul(h_basis)?;
    // (s̃|_H)⁻¹ composed with an E_M-valued matrix.
    let lift = |target: &Mat| -> Result<Mat, FrameError> { Ok(h_basis.mul(&s_on_h.solve_unique(target)?)?) };

    let core_cols = v.core_basis(x).mul(&p.core_frame)?;
    let fat_cols = lift(&p.base_frame)?;
    let t_of_core = v.tgt_map(ux).mul(&core_cols)?;
    let middle = lift(&t_of_core)?;
    // (R̃_g)⁻¹ on the core at x: solve R̃_g(z) = c over z in ker(s̃_(g⁻¹)).
    let rt_on_kernel = v.rt_apply(gi, g, &v.src_kernel_basis(gi))?;
    let z = v.src_kernel_basis(gi).mul(&rt_on_kernel.solve_unique(&core_cols)?)?;
    let last_term = v.inv_map(gi).mul(&z)?;
    let first_block = middle.sub(&last_term);
    sframe(v, g, first_block.hstack(&fat_cols))
}

/// The coordinate reversal `T` on `Q^(l+k)`.
pub fn flip_t(l: usize, k: usize) -> Mat {
    Mat::reversal(l + k)
}

/// `Ψ(φ_g) = ĩ ∘ φ_g ∘ T`, a t-bisection frame at the inverse arrow.
pub fn psi(v: &VBGroupoid, f: &SFrame) -> Result<TFrame, FrameError> {
    let g = f.arrow;
    let t = flip_t(v.core_rank(), v.base_rank());
    tframe(v, v.base().inverse(g), v.inv_map(g).mul(&f.phi.mul(&t)?)?)
}

/// Inverse of `Ψ`: the same formula read from t-frames back to s-frames.
pub fn psi_inv(v: &VBGroupoid, tf: &TFrame) -> Result<SFrame, FrameError> {
    let g = tf.arrow;
    let t = flip_t(v.core_rank(), v.base_rank());
    sframe(v, v.base().inverse(g), v.inv_map(g).mul(&tf.phi.mul(&t)?)?)
}

/// Dual frame `φ* = φ⁻ᵀ`, a t-bisection frame of the dual VB-groupoid at the
/// same arrow. `dual` must be `v.dual()`.
pub fn dual_frame(_v: &VBGroupoid, dual: &VBGroupoid, f: &SFrame) -> Result<TFrame, FrameError> {
    let phi_star = f.phi.inv()?.transpose();
    tframe(dual, f.arrow, phi_star)
}

/// Reindex a t-frame of `v` as an s-frame of `v.opposite()` (`vop` must be
/// `v.opposite()`).
pub fn tframe_as_op_sframe(v: &VBGroupoid, vop: &VBGroupoid, tf: &TFrame) -> Result<SFrame, FrameError> {
    let t = flip_t(v.core_rank(), v.base_rank());
    sframe(vop, tf.arrow, tf.phi.mul(&t)?)
}

fn op_sframe_as_tframe(v: &VBGroupoid, vop: &VBGroupoid, sf: &SFrame) -> Result<TFrame, FrameError> {
    let t = flip_t(vop.core_rank(), vop.base_rank());
    tframe(v, sf.arrow, sf.phi.mul(&t)?)
}

/// Source-side base pair of a t-frame, computed in the opposite VB-groupoid;
/// its core part is a frame of the opposite core `ker(t̃)|_units`.
pub fn tframe_bs(v: &VBGroupoid, vop: &VBGroupoid, tf: &TFrame) -> Result<BasePair, FrameError> {
    bt(vop, &tframe_as_op_sframe(v, vop, tf)?)
}

/// Target-side base pair of a t-frame, in the opposite VB-groupoid.
pub fn tframe_bt(v: &VBGroupoid, vop: &VBGroupoid, tf: &TFrame) -> Result<BasePair, FrameError> {
    bs(vop, &tframe_as_op_sframe(v, vop, tf)?)
}

/// t-frame multiplication: defined for `s(g) = t(h)` with matching base
/// pairs, through the opposite VB-groupoid with swapped factors.
pub fn tframe_bm(v: &VBGroupoid, vop: &VBGroupoid, t1: &TFrame, t2: &TFrame) -> Result<TFrame, FrameError> {
    let prod = bm(vop, &tframe_as_op_sframe(v, vop, t2)?, &tframe_as_op_sframe(v, vop, t1)?)?;
    op_sframe_as_tframe(v, vop, &prod)
}

/// Unit t-frame over a base pair of the opposite VB-groupoid.
pub fn tframe_bu(v: &VBGroupoid, vop: &VBGroupoid, p: &BasePair) -> Result<TFrame, FrameError> {
    op_sframe_as_tframe(v, vop, &bu(vop, p)?)
}

/// t-frame inversion, through the opposite VB-groupoid.
pub fn tframe_bi(v: &VBGroupoid, vop: &VBGroupoid, tf: &TFrame) -> Result<TFrame, FrameError> {
    op_sframe_as_tframe(v, vop, &bi(vop, &tframe_as_op_sframe(v, vop, tf)?)?)
}

/// Moment of a t-frame: `d_φ` of its opposite s-frame avatar.
pub fn tframe_moment(v: &VBGroupoid, vop: &VBGroupoid, tf: &TFrame) -> Result<Mat, FrameError> {
    dphi(vop, &tframe_as_op_sframe(v, vop, tf)?)
}

/// The canonical identification of the core with the opposite core at `x`:
/// the inversion map at the unit arrow carries `ker(s̃)` onto `ker(t̃)`;
/// returns its matrix between the two canonical kernel bases.
pub fn core_flip(v: &VBGroupoid, vop: &VBGroupoid, x: usize) -> Result<Mat, FrameError> {
    let u = v.base().unit_arrow(x);
    let image = v.inv_map(u).mul(&v.core_basis(x))?;
    Ok(vop.core_basis(x).solve_unique(&image)?)
}

/// Rejection-sample an s-bisection frame at `g`: the kernel block is a
/// random invertible recombination of the canonical kernel basis, the fat
/// block a right inverse of `s̃` perturbed inside the kernel and mixed, with
/// rejection on the `ker(t̃)` transversality.
pub fn random_sframe(v: &VBGroupoid, g: usize, rng: &mut SplitMix64) -> SFrame {
    let (l, k) = (v.core_rank(), v.base_rank());
    let ker = v.src_kernel_basis(g);
    let right_inv = if k > 0 {
        v.src_map(g).right_inverse().expect("source map is surjective")
    } else {
        Mat::zeros(v.fiber_dim(), 0)
    };
    loop {
        let first = ker.mul(&rng.next_invertible(l)).expect("shapes");
        let fat_cols = if k > 0 {
            right_inv
                .add(&ker.mul(&rng.next_mat(l, k)).expect("shapes"))
                .mul(&rng.next_invertible(k))
                .expect("shapes")
        } else {
            right_inv.clone()
        };
        let phi = first.hstack(&fat_cols);
        if is_sbis(v, g, &phi).expect("shape is correct") {
            return SFrame { arrow: g, phi };
        }
    }
}

/// Random base pair at `x`.
pub fn random_basepair(v: &VBGroupoid, x: usize, rng: &mut SplitMix64) -> BasePair {
    BasePair {
        object: x,
        core_frame: rng.next_invertible(v.core_rank()),
        base_frame: rng.next_invertible(v.base_rank()),
    }
}

/// A random frame at `g` with prescribed source base pair (which must sit at
/// `src(g)`): built through `F⁻¹` from a random fat subspace.
pub fn random_sframe_with_bs(
    v: &VBGroupoid,
    g: usize,
    p: &BasePair,
    rng: &mut SplitMix64,
) -> Result<SFrame, FrameError> {
    let fe = fat::random_at(v, g, rng);
    f_inv(v, &fe, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ratio;
    use alloc::vec;
    use alloc::vec::Vec;

    fn canonical_11(ds: &[i64]) -> VBGroupoid {
        let samples = ds.iter().map(|&d| Mat::from_int_rows(&[&[d]])).collect();
        VBGroupoid::canonical(1, 1, samples).unwrap()
    }

    fn identity_frame(v: &VBGroupoid, g: usize) -> SFrame {
        sframe(v, g, Mat::identity(v.fiber_dim())).unwrap()
    }

    #[test]
    fn sbis_examples() {
        let v0 = canonical_11(&[0]);
        assert!(is_sbis(&v0, 0, &Mat::identity(2)).unwrap());
        let v1 = canonical_11(&[1]);
        assert!(is_sbis(&v1, 0, &Mat::identity(2)).unwrap());
        // Second column (1, -1) hits ker(t̃).
        assert!(!is_sbis(&v1, 0, &Mat::from_int_rows(&[&[1, 1], &[0, -1]])).unwrap());
    }

    #[test]
    fn dphi_examples() {
        let v0 = canonical_11(&[0]);
        assert_eq!(dphi(&v0, &identity_frame(&v0, 0)).unwrap(), Mat::zeros(1, 1));
        let v1 = canonical_11(&[1]);
        let f = identity_frame(&v1, 0);
        assert_eq!(dphi(&v1, &f).unwrap(), Mat::identity(1));
        // Sheared frame: d_φ = 1/2.
        let sheared = sframe(&v1, 0, Mat::from_int_rows(&[&[1, 1], &[0, 1]])).unwrap();
        assert_eq!(dphi(&v1, &sheared).unwrap(), Mat::from_rows(vec![vec![ratio(1, 2)]]));
    }

    #[test]
    fn bs_bt_examples() {
        let v0 = canonical_11(&[0]);
        let f0 = identity_frame(&v0, 0);
        let p = bs(&v0, &f0).unwrap();
        assert_eq!((p.core_frame.clone(), p.base_frame.clone()), (Mat::identity(1), Mat::identity(1)));
        assert_eq!(bs(&v0, &f0).unwrap(), bt(&v0, &f0).unwrap());

        let v1 = canonical_11(&[1]);
        let f1 = identity_frame(&v1, 0);
        let pt = bt(&v1, &f1).unwrap();
        assert_eq!((pt.core_frame.clone(), pt.base_frame.clone()), (Mat::identity(1), Mat::identity(1)));
        let ps = bs(&v1, &f1).unwrap();
        assert_eq!((ps.core_frame.clone(), ps.base_frame.clone()), (Mat::identity(1), Mat::identity(1)));

        let sheared = sframe(&v1, 0, Mat::from_int_rows(&[&[1, 1], &[0, 1]])).unwrap();
        let pt2 = bt(&v1, &sheared).unwrap();
        assert_eq!(pt2.core_frame, Mat::identity(1));
        assert_eq!(pt2.base_frame, Mat::from_int_rows(&[&[2]]));
        let ps2 = bs(&v1, &sheared).unwrap();
        assert_eq!(ps2.core_frame, Mat::from_rows(vec![vec![ratio(1, 2)]]));
        assert_eq!(ps2.base_frame, Mat::identity(1));
    }

    #[test]
    fn bm_bu_bi_basic_laws() {
        let v = canonical_11(&[1]);
        let f = sframe(&v, 0, Mat::from_int_rows(&[&[2, 1], &[0, 1]])).unwrap();
        // Right unit law.
        let u = bu(&v, &bs(&v, &f).unwrap()).unwrap();
        assert_eq!(bm(&v, &f, &u).unwrap(), f);
        // Left unit law.
        let ut = bu(&v, &bt(&v, &f).unwrap()).unwrap();
        assert_eq!(bm(&v, &ut, &f).unwrap(), f);
        // Inverse law.
        let fi = bi(&v, &f).unwrap();
        assert_eq!(bm(&v, &f, &fi).unwrap(), ut);
        assert_eq!(bm(&v, &fi, &f).unwrap(), u);
        assert_eq!(bi(&v, &fi).unwrap(), f);
        // The unit frame is its own inverse.
        assert_eq!(bi(&v, &u).unwrap(), u);
        // bu over the identity pair is the identity-built frame.
        let p = BasePair { object: 0, core_frame: Mat::identity(1), base_frame: Mat::identity(1) };
        assert_eq!(bu(&v, &p).unwrap().phi, Mat::identity(2));
    }

    #[test]
    fn bm_endpoint_contract() {
        let v = canonical_11(&[1]);
        let mut rng = SplitMix64::new(21);
        for _ in 0..10 {
            let f2 = random_sframe(&v, 0, &mut rng);
            let f1 = random_sframe_with_bs(&v, 0, &bt(&v, &f2).unwrap(), &mut rng).unwrap();
            let prod = bm(&v, &f1, &f2).unwrap();
            assert_eq!(bs(&v, &prod).unwrap(), bs(&v, &f2).unwrap());
            assert_eq!(bt(&v, &prod).unwrap(), bt(&v, &f1).unwrap());
            // d-constancy on the composable pair.
            let d1 = dphi(&v, &f1).unwrap();
            assert_eq!(d1, dphi(&v, &f2).unwrap());
            assert_eq!(d1, dphi(&v, &prod).unwrap());
        }
    }

    #[test]
    fn f_map_examples_and_round_trip() {
        let v = canonical_11(&[1]);
        let f = identity_frame(&v, 0);
        let (fe, p) = f_map(&v, &f).unwrap();
        assert_eq!(fe.h.basis(), &Mat::from_int_rows(&[&[0], &[1]]));
        assert_eq!((p.core_frame.clone(), p.base_frame.clone()), (Mat::identity(1), Mat::identity(1)));
        assert_eq!(f_inv(&v, &fe, &p).unwrap(), f);

        let mut rng = SplitMix64::new(3);
        for _ in 0..25 {
            let f = random_sframe(&v, 0, &mut rng);
            let (fe, p) = f_map(&v, &f).unwrap();
            assert_eq!(f_inv(&v, &fe, &p).unwrap(), f);
        }
        // Other direction: F(F⁻¹(fe, p)) = (fe, p).
        for _ in 0..25 {
            let fe = fat::random_at(&v, 0, &mut rng);
            let p = random_basepair(&v, 0, &mut rng);
            let f = f_inv(&v, &fe, &p).unwrap();
            let (fe2, p2) = f_map(&v, &f).unwrap();
            assert_eq!(fe2, fe);
            assert_eq!(p2, p);
        }
    }

    #[test]
    fn f_intertwines_bt_with_fat_action() {
        let v = canonical_11(&[1]);
        let mut rng = SplitMix64::new(8);
        for _ in 0..20 {
            let f = random_sframe(&v, 0, &mut rng);
            let (fe, p) = f_map(&v, &f).unwrap();
            let target = bt(&v, &f).unwrap();
            let core_acted = fat::act_core(&v, &fe, &p.core_frame).unwrap();
            let base_acted = fat::act_base(&v, &fe, &p.base_frame).unwrap();
            assert_eq!(target.core_frame, core_acted);
            assert_eq!(target.base_frame, base_acted);
        }
    }

    #[test]
    fn psi_examples() {
        assert_eq!(flip_t(1, 1), Mat::from_int_rows(&[&[0, 1], &[1, 0]]));
        let v0 = canonical_11(&[0]);
        let f = identity_frame(&v0, 0);
        let t = psi(&v0, &f).unwrap();
        // ĩ(w, v) = (-w, v), so the flipped columns are (0,1) and (-1,0).
        assert_eq!(t.phi, Mat::from_int_rows(&[&[0, -1], &[1, 0]]));
        let v1 = canonical_11(&[1]);
        let mut rng = SplitMix64::new(13);
        for _ in 0..20 {
            let f = random_sframe(&v1, 0, &mut rng);
            let t = psi(&v1, &f).unwrap();
            assert!(is_tbis(&v1, t.arrow, &t.phi).unwrap());
            assert_eq!(psi_inv(&v1, &t).unwrap(), f);
        }
    }

    #[test]
    fn dual_frame_examples() {
        let v = canonical_11(&[1]);
        let dual = v.dual().unwrap();
        let f = identity_frame(&v, 0);
        assert_eq!(dual_frame(&v, &dual, &f).unwrap().phi, Mat::identity(2));
        let sheared = sframe(&v, 0, Mat::from_int_rows(&[&[1, 1], &[0, 1]])).unwrap();
        assert_eq!(
            dual_frame(&v, &dual, &sheared).unwrap().phi,
            Mat::from_int_rows(&[&[1, 0], &[-1, 1]])
        );
        let mut rng = SplitMix64::new(17);
        for _ in 0..20 {
            let f = random_sframe(&v, 0, &mut rng);
            let df = dual_frame(&v, &dual, &f).unwrap();
            assert!(is_tbis(&dual, df.arrow, &df.phi).unwrap());
        }
    }

    #[test]
    fn rank_0k_and_l0_degenerations() {
        // Rank (0, k): every invertible matrix is an s-frame and bm reduces
        // to the fiberwise multiplication of the fat blocks.
        let g = crate::groupoid::FiniteGroupoid::pair(2).unwrap();
        let mut rep = vec![Mat::identity(1); 4];
        let a21 = g.arrow_index("(2,1)").unwrap();
        let a12 = g.arrow_index("(1,2)").unwrap();
        rep[a21] = Mat::from_int_rows(&[&[2]]);
        rep[a12] = Mat::from_rows(vec![vec![ratio(1, 2)]]);
        let tc = VBGroupoid::trivial_core(g.clone(), rep.clone()).unwrap();
        let mut rng = SplitMix64::new(30);
        for _ in 0..10 {
            let m = rng.next_invertible(1);
            assert!(is_sbis(&tc, a21, &m).unwrap());
        }
        let f2 = random_sframe(&tc, a12, &mut rng);
        let f1 = random_sframe_with_bs(&tc, a21, &bt(&tc, &f2).unwrap(), &mut rng).unwrap();
        let prod = bm(&tc, &f1, &f2).unwrap();
        let direct = tc.mul_apply(a21, a12, &f1.phi, &f2.phi).unwrap();
        assert_eq!(prod.phi, direct);

        // Rank (l, 0): bm reduces to the right translation of the first
        // frame's block.
        let tb = VBGroupoid::trivial_base(g, rep).unwrap();
        let f2 = random_sframe(&tb, a12, &mut rng);
        let f1 = random_sframe_with_bs(&tb, a21, &bt(&tb, &f2).unwrap(), &mut rng).unwrap();
        let prod = bm(&tb, &f1, &f2).unwrap();
        let direct = tb.rt_apply(a21, a12, &f1.phi).unwrap();
        assert_eq!(prod.phi, direct);
    }

    #[test]
    fn tframe_structure_is_a_groupoid_and_psi_is_a_morphism() {
        let v = canonical_11(&[1]);
        let vop = v.opposite();
        let mut rng = SplitMix64::new(77);
        let q = core_flip(&v, &vop, 0).unwrap();
        for _ in 0..15 {
            let f2 = random_sframe(&v, 0, &mut rng);
            let f1 = random_sframe_with_bs(&v, 0, &bt(&v, &f2).unwrap(), &mut rng).unwrap();
            let t1 = psi(&v, &f1).unwrap();
            let t2 = psi(&v, &f2).unwrap();
            // Ψ swaps the composition order.
            let lhs = psi(&v, &bm(&v, &f1, &f2).unwrap()).unwrap();
            let rhs = tframe_bm(&v, &vop, &t2, &t1).unwrap();
            assert_eq!(lhs, rhs);
            // Ψ inverts arrows, so the source side of ψ(f) carries the target
            // data of f, through the core flip.
            let tb = tframe_bs(&v, &vop, &t1).unwrap();
            let target = bt(&v, &f1).unwrap();
            assert_eq!(tb.base_frame, target.base_frame);
            assert_eq!(tb.core_frame, q.mul(&target.core_frame).unwrap());
            let tt = tframe_bt(&v, &vop, &t1).unwrap();
            let source = bs(&v, &f1).unwrap();
            assert_eq!(tt.base_frame, source.base_frame);
            assert_eq!(tt.core_frame, q.mul(&source.core_frame).unwrap());
            // Inversion intertwines.
            let li = psi(&v, &bi(&v, &f1).unwrap()).unwrap();
            let ri = tframe_bi(&v, &vop, &t1).unwrap();
            assert_eq!(li, ri);
        }
    }

    #[test]
    fn random_frames_vary_and_pass_membership() {
        let d = Mat::from_int_rows(&[&[1, 0], &[0, 1], &[1, 1]]);
        let v = VBGroupoid::canonical(2, 3, vec![d]).unwrap();
        let mut rng = SplitMix64::new(4);
        let mut frames: Vec<SFrame> = Vec::new();
        for _ in 0..6 {
            let f = random_sframe(&v, 0, &mut rng);
            assert!(is_sbis(&v, 0, &f.phi).unwrap());
            frames.push(f);
        }
        assert!(frames.windows(2).any(|w| w[0] != w[1]));
    }
}
