//! VB-groupoids over a finite base groupoid.
//!
//! A VB-groupoid of rank `(l, k)` assigns to every base arrow a fiber
//! `Q^(l+k)` and to every object a fiber `Q^k`, with linear structure maps:
//! per-arrow source and target `S_g, T_g : Q^(l+k) -> Q^k`, a unit section
//! `U_x : Q^k -> Q^(l+k)`, a fiberwise inversion `I_g`, and, per composable
//! pair, one matrix `Mul_(g,h) : Q^(2(l+k)) -> Q^(l+k)` extending the
//! fiberwise multiplication linearly from the fibered subspace
//! `{(v, w) : S_g v = T_h w}` to the full product. All semantics restrict to
//! that subspace; the interchange law is automatic because the restriction of
//! a single linear map is bilinear-free by construction.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::groupoid::{FiniteGroupoid, GroupoidError};
use crate::linalg::{LinalgError, Mat, Subspace};
use crate::report::Violation;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VbgError {
    Groupoid(GroupoidError),
    Linalg(LinalgError),
    /// The supplied representation is not a functor.
    NonFunctorialRep(String),
    /// `to_anchored` needs a unit base groupoid.
    NonUnitBase,
    /// Anchor matrices with different shapes across points.
    NonUniformRank,
    /// The input VB-groupoid failed validation.
    Invalid(Vec<Violation>),
    Shape(String),
}

impl fmt::Display for VbgError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VbgError::Groupoid(e) => write!(f, "base groupoid error: {e}"),
            VbgError::Linalg(e) => write!(f, "linear algebra error: {e}"),
            VbgError::NonFunctorialRep(loc) => write!(f, "representation is not functorial at {loc}"),
            VbgError::NonUnitBase => write!(f, "base groupoid is not a unit groupoid"),
            VbgError::NonUniformRank => write!(f, "anchor matrices must have the same shape at every point"),
            VbgError::Invalid(vs) => write!(f, "VB-groupoid validation failed with {} violation(s)", vs.len()),
            VbgError::Shape(msg) => write!(f, "shape error: {msg}"),
        }
    }
}

impl From<GroupoidError> for VbgError {
    fn from(e: GroupoidError) -> Self {
        VbgError::Groupoid(e)
    }
}

impl From<LinalgError> for VbgError {
    fn from(e: LinalgError) -> Self {
        VbgError::Linalg(e)
    }
}

/// A two-term complex of trivialized vector bundles over a finite point set:
/// at each point an anchor matrix `delta : Q^e1 -> Q^e0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Anchored2VB {
    pub points: Vec<String>,
    pub e1_rank: usize,
    pub e0_rank: usize,
    /// One `e0 x e1` matrix per point.
    pub deltas: Vec<Mat>,
}

impl Anchored2VB {
    pub fn new(points: Vec<String>, e1_rank: usize, e0_rank: usize, deltas: Vec<Mat>) -> Result<Self, VbgError> {
        if points.len() != deltas.len() {
            return Err(VbgError::Shape("one anchor matrix per point required".to_string()));
        }
        if deltas.iter().any(|d| d.rows() != e0_rank || d.cols() != e1_rank) {
            return Err(VbgError::NonUniformRank);
        }
        Ok(Anchored2VB { points, e1_rank, e0_rank, deltas })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VBGroupoid {
    base: FiniteGroupoid,
    /// Core rank `l`.
    core_rank: usize,
    /// Base-bundle rank `k`.
    base_rank: usize,
    /// Per arrow: `k x (l+k)`, lands in the fiber over the source object.
    src_map: Vec<Mat>,
    /// Per arrow: `k x (l+k)`, lands in the fiber over the target object.
    tgt_map: Vec<Mat>,
    /// Per composable pair: `(l+k) x 2(l+k)` linear extension of the
    /// fiberwise multiplication.
    mul_map: BTreeMap<(usize, usize), Mat>,
    /// Per object: `(l+k) x k` unit section.
    unit_map: Vec<Mat>,
    /// Per arrow: `(l+k) x (l+k)` inversion into the fiber over the inverse
    /// arrow.
    inv_map: Vec<Mat>,
}

impl VBGroupoid {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        base: FiniteGroupoid,
        core_rank: usize,
        base_rank: usize,
        src_map: Vec<Mat>,
        tgt_map: Vec<Mat>,
        mul_map: BTreeMap<(usize, usize), Mat>,
        unit_map: Vec<Mat>,
        inv_map: Vec<Mat>,
    ) -> Result<Self, VbgError> {
        let n_arr = base.arrow_count();
        let n_obj = base.object_count();
        if src_map.len() != n_arr || tgt_map.len() != n_arr || inv_map.len() != n_arr || unit_map.len() != n_obj {
            return Err(VbgError::Shape("one matrix per arrow/object required".to_string()));
        }
        let v = VBGroupoid { base, core_rank, base_rank, src_map, tgt_map, mul_map, unit_map, inv_map };
        let n = v.fiber_dim();
        for g in 0..n_arr {
            for (m, rows, cols, name) in [
                (&v.src_map[g], v.base_rank, n, "src"),
                (&v.tgt_map[g], v.base_rank, n, "tgt"),
                (&v.inv_map[g], n, n, "inv"),
            ] {
                if m.rows() != rows || m.cols() != cols {
                    return Err(VbgError::Shape(format!(
                        "{name} map at arrow {} must be {}x{}, got {}x{}",
                        v.base.arrow_id(g), rows, cols, m.rows(), m.cols()
                    )));
                }
            }
        }
        for x in 0..n_obj {
            let m = &v.unit_map[x];
            if m.rows() != n || m.cols() != v.base_rank {
                return Err(VbgError::Shape(format!(
                    "unit map at object {} must be {}x{}, got {}x{}",
                    v.base.object_id(x), n, v.base_rank, m.rows(), m.cols()
                )));
            }
        }
        for (&(a, b), m) in &v.mul_map {
            if a >= n_arr || b >= n_arr {
                return Err(VbgError::Shape("multiplication key out of range".to_string()));
            }
            if m.rows() != n || m.cols() != 2 * n {
                return Err(VbgError::Shape(format!(
                    "mul map at pair ({},{}) must be {}x{}, got {}x{}",
                    v.base.arrow_id(a), v.base.arrow_id(b), n, 2 * n, m.rows(), m.cols()
                )));
            }
        }
        Ok(v)
    }

    pub fn base(&self) -> &FiniteGroupoid {
        &self.base
    }

    pub fn core_rank(&self) -> usize {
        self.core_rank
    }

    pub fn base_rank(&self) -> usize {
        self.base_rank
    }

    pub fn fiber_dim(&self) -> usize {
        self.core_rank + self.base_rank
    }

    pub fn src_map(&self, g: usize) -> &Mat {
        &self.src_map[g]
    }

    pub fn tgt_map(&self, g: usize) -> &Mat {
        &self.tgt_map[g]
    }

    pub fn unit_map(&self, x: usize) -> &Mat {
        &self.unit_map[x]
    }

    pub fn inv_map(&self, g: usize) -> &Mat {
        &self.inv_map[g]
    }

    pub fn mul_map(&self, g: usize, h: usize) -> Result<&Mat, VbgError> {
        self.mul_map.get(&(g, h)).ok_or(VbgError::Groupoid(GroupoidError::NotComposable { first: g, second: h }))
    }

    pub fn mul_table(&self) -> &BTreeMap<(usize, usize), Mat> {
        &self.mul_map
    }

    /// `m̃(v, w)` for column stacks over the composable pair `(g, h)`.
    pub fn mul_apply(&self, g: usize, h: usize, v: &Mat, w: &Mat) -> Result<Mat, VbgError> {
        Ok(self.mul_map(g, h)?.mul(&v.vstack(w))?)
    }

    /// Basis of the fibered subspace `{(v, w) : S_g v = T_h w}` in the
    /// product of the fibers over `g` and `h`.
    pub fn fibered_pair_basis(&self, g: usize, h: usize) -> Mat {
        let constraint = self.src_map[g].hstack(&self.tgt_map[h].neg());
        constraint.kernel().basis().clone()
    }

    /// Right translation by `g` in fiber coordinates: `m̃(x, 0_g)` applied to
    /// kernel vectors of `S_h`, landing in the kernel of `S_{hg}`.
    pub fn rt_apply(&self, h: usize, g: usize, x: &Mat) -> Result<Mat, VbgError> {
        let zero = Mat::zeros(self.fiber_dim(), x.cols());
        self.mul_apply(h, g, x, &zero)
    }

    /// Left translation: `m̃(0_g, x)` for `x` in the kernel of `T_h`.
    pub fn lt_apply(&self, g: usize, h: usize, x: &Mat) -> Result<Mat, VbgError> {
        let zero = Mat::zeros(self.fiber_dim(), x.cols());
        self.mul_apply(g, h, &zero, x)
    }

    /// Canonical basis of `ker(S_g)`, one column per core dimension when the
    /// structure is valid.
    pub fn src_kernel_basis(&self, g: usize) -> Mat {
        self.src_map[g].kernel().basis().clone()
    }

    /// The core fiber at object `x`: the canonically based kernel of the
    /// source map over the unit arrow, together with the core-anchor matrix
    /// (target map restricted to the core, `k x l` in that basis).
    pub fn core(&self, x: usize) -> (Subspace, Mat) {
        let u = self.base.unit_arrow(x);
        let ker = self.src_map[u].kernel();
        let rho = self.tgt_map[u].mul(ker.basis()).expect("core basis has fiber dimension");
        (ker, rho)
    }

    pub fn core_basis(&self, x: usize) -> Mat {
        self.core(x).0.basis().clone()
    }

    pub fn core_anchor(&self, x: usize) -> Mat {
        self.core(x).1
    }

    /// Matrix of the right translation `ker(S_h) -> ker(S_{hg})` in the
    /// canonical kernel bases, for `s(h) = t(g)`. Invertible on valid data.
    pub fn right_translation(&self, h: usize, g: usize) -> Result<Mat, VbgError> {
        let image = self.rt_apply(h, g, &self.src_kernel_basis(h))?;
        let hg = self.base.compose(h, g)?;
        Ok(self.src_kernel_basis(hg).solve_unique(&image)?)
    }

    /// Every violated VB-groupoid axiom instance; empty iff valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let n = self.fiber_dim();
        let k = self.base_rank;
        let aid = |g: usize| self.base.arrow_id(g).to_string();

        for v in self.base.validate() {
            out.push(Violation::new(format!("base_{}", v.law), v.location, v.detail));
        }
        if !out.is_empty() {
            // Fiber checks below assume a valid composition table.
            return out;
        }

        for (a, b) in self.base.composable_pairs() {
            if !self.mul_map.contains_key(&(a, b)) {
                out.push(Violation::new("mul_total", format!("pair ({},{})", aid(a), aid(b)), "missing multiplication matrix"));
            }
        }
        for &(a, b) in self.mul_map.keys() {
            if !self.base.is_composable(a, b) {
                out.push(Violation::new(
                    "mul_domain",
                    format!("pair ({},{})", aid(a), aid(b)),
                    "multiplication defined on a non-composable pair",
                ));
            }
        }
        if !out.is_empty() {
            return out;
        }

        for g in 0..self.base.arrow_count() {
            if self.src_map[g].rank() != k {
                out.push(Violation::new("src_surjective", format!("arrow {}", aid(g)), format!("rank {} < {}", self.src_map[g].rank(), k)));
            }
            if self.tgt_map[g].rank() != k {
                out.push(Violation::new("tgt_surjective", format!("arrow {}", aid(g)), format!("rank {} < {}", self.tgt_map[g].rank(), k)));
            }
            if !self.inv_map[g].is_invertible() {
                out.push(Violation::new("inv_invertible", format!("arrow {}", aid(g)), format!("{}", self.inv_map[g])));
            }
        }

        for x in 0..self.base.object_count() {
            let u = self.base.unit_arrow(x);
            let su = self.src_map[u].mul(&self.unit_map[x]).expect("shapes checked");
            let tu = self.tgt_map[u].mul(&self.unit_map[x]).expect("shapes checked");
            if su != Mat::identity(k) {
                out.push(Violation::new("unit_src_section", format!("object {}", self.base.object_id(x)), format!("S∘U = {su}")));
            }
            if tu != Mat::identity(k) {
                out.push(Violation::new("unit_tgt_section", format!("object {}", self.base.object_id(x)), format!("T∘U = {tu}")));
            }
        }

        // Source/target compatibility of ĩ and the involution law.
        for g in 0..self.base.arrow_count() {
            let gi = self.base.inverse(g);
            let loc = || format!("arrow {}", aid(g));
            let si = self.src_map[gi].mul(&self.inv_map[g]).expect("shapes checked");
            if si != self.tgt_map[g] {
                out.push(Violation::new("inv_src_compat", loc(), format!("S_(g⁻¹)∘ĩ = {si}")));
            }
            let ti = self.tgt_map[gi].mul(&self.inv_map[g]).expect("shapes checked");
            if ti != self.src_map[g] {
                out.push(Violation::new("inv_tgt_compat", loc(), format!("T_(g⁻¹)∘ĩ = {ti}")));
            }
            let ii = self.inv_map[gi].mul(&self.inv_map[g]).expect("shapes checked");
            if ii != Mat::identity(n) {
                out.push(Violation::new("inv_involution", loc(), format!("ĩ∘ĩ = {ii}")));
            }
        }

        // Per composable pair: endpoint compatibility and surjectivity of the
        // multiplication restricted to the fibered subspace.
        for (&(g, h), mul) in &self.mul_map {
            let gh = self.base.compose(g, h).expect("base validated");
            let basis = self.fibered_pair_basis(g, h);
            let first = Mat::from_fn(n, basis.cols(), |r, c| basis.at(r, c).clone());
            let second = Mat::from_fn(n, basis.cols(), |r, c| basis.at(n + r, c).clone());
            let prod = mul.mul(&basis).expect("shapes checked");
            let loc = || format!("pair ({},{})", aid(g), aid(h));
            let s_left = self.src_map[gh].mul(&prod).expect("shapes checked");
            let s_right = self.src_map[h].mul(&second).expect("shapes checked");
            if s_left != s_right {
                out.push(Violation::new("mul_src_compat", loc(), format!("S∘m̃ = {s_left} but S(second) = {s_right}")));
            }
            let t_left = self.tgt_map[gh].mul(&prod).expect("shapes checked");
            let t_right = self.tgt_map[g].mul(&first).expect("shapes checked");
            if t_left != t_right {
                out.push(Violation::new("mul_tgt_compat", loc(), format!("T∘m̃ = {t_left} but T(first) = {t_right}")));
            }
            if prod.rank() != n {
                out.push(Violation::new("mul_surjective", loc(), format!("rank {} < {}", prod.rank(), n)));
            }
        }
        if !out.is_empty() {
            return out;
        }

        // Unit and inverse laws on a basis of each fiber.
        for g in 0..self.base.arrow_count() {
            let loc = || format!("arrow {}", aid(g));
            let id = Mat::identity(n);
            let us = self.base.unit_arrow(self.base.src(g));
            let ut = self.base.unit_arrow(self.base.tgt(g));
            let right_unit = self
                .mul_apply(g, us, &id, &self.unit_map[self.base.src(g)].mul(&self.src_map[g]).expect("shapes"))
                .expect("composable");
            if right_unit != id {
                out.push(Violation::new("fiber_unit_right", loc(), format!("m̃(v, ũ(s̃v)) = {right_unit}")));
            }
            let left_unit = self
                .mul_apply(ut, g, &self.unit_map[self.base.tgt(g)].mul(&self.tgt_map[g]).expect("shapes"), &id)
                .expect("composable");
            if left_unit != id {
                out.push(Violation::new("fiber_unit_left", loc(), format!("m̃(ũ(t̃v), v) = {left_unit}")));
            }
            let gi = self.base.inverse(g);
            let right_inv = self.mul_apply(g, gi, &id, &self.inv_map[g]).expect("composable");
            let want_r = self.unit_map[self.base.tgt(g)].mul(&self.tgt_map[g]).expect("shapes");
            if right_inv != want_r {
                out.push(Violation::new("fiber_inverse_right", loc(), format!("m̃(v, ĩv) = {right_inv} ≠ ũ(t̃v)")));
            }
            let left_inv = self.mul_apply(gi, g, &self.inv_map[g], &id).expect("composable");
            let want_l = self.unit_map[self.base.src(g)].mul(&self.src_map[g]).expect("shapes");
            if left_inv != want_l {
                out.push(Violation::new("fiber_inverse_left", loc(), format!("m̃(ĩv, v) = {left_inv} ≠ ũ(s̃v)")));
            }
        }

        // Associativity on a basis of each triple fibered subspace.
        for (g, h, j) in self.base.composable_triples() {
            let gh = self.base.compose(g, h).expect("base validated");
            let hj = self.base.compose(h, j).expect("base validated");
            let top = self.src_map[g].hstack(&self.tgt_map[h].neg()).hstack(&Mat::zeros(k, n));
            let bottom = Mat::zeros(k, n).hstack(&self.src_map[h]).hstack(&self.tgt_map[j].neg());
            let basis = top.vstack(&bottom).kernel();
            let b = basis.basis();
            let va = Mat::from_fn(n, b.cols(), |r, c| b.at(r, c).clone());
            let vb = Mat::from_fn(n, b.cols(), |r, c| b.at(n + r, c).clone());
            let vc = Mat::from_fn(n, b.cols(), |r, c| b.at(2 * n + r, c).clone());
            let ab = self.mul_apply(g, h, &va, &vb).expect("composable");
            let left = self.mul_apply(gh, j, &ab, &vc).expect("composable");
            let bc = self.mul_apply(h, j, &vb, &vc).expect("composable");
            let right = self.mul_apply(g, hj, &va, &bc).expect("composable");
            if left != right {
                out.push(Violation::new(
                    "fiber_assoc",
                    format!("triple ({},{},{})", aid(g), aid(h), aid(j)),
                    format!("m̃(m̃(a,b),c) = {left} but m̃(a,m̃(b,c)) = {right}"),
                ));
            }
        }

        out
    }

    fn rep_check(base: &FiniteGroupoid, rank: usize, rep: &[Mat]) -> Result<(), VbgError> {
        if rep.len() != base.arrow_count() {
            return Err(VbgError::Shape("one representation matrix per arrow required".to_string()));
        }
        if rep.iter().any(|m| m.rows() != rank || m.cols() != rank) {
            return Err(VbgError::Shape(format!("representation matrices must be {rank}x{rank}")));
        }
        for x in 0..base.object_count() {
            if rep[base.unit_arrow(x)] != Mat::identity(rank) {
                return Err(VbgError::NonFunctorialRep(format!("unit at object {}", base.object_id(x))));
            }
        }
        for (a, b) in base.composable_pairs() {
            let ab = base.compose(a, b)?;
            if rep[ab] != rep[a].mul(&rep[b])? {
                return Err(VbgError::NonFunctorialRep(format!("pair ({},{})", base.arrow_id(a), base.arrow_id(b))));
            }
        }
        Ok(())
    }

    /// Action VB-groupoid of a representation on the base bundle: rank
    /// `(0, k)`, `s̃(g,e) = e`, `t̃(g,e) = rep(g)e`, trivial core.
    pub fn trivial_core(base: FiniteGroupoid, rep: Vec<Mat>) -> Result<Self, VbgError> {
        let k = rep.first().map_or(0, Mat::rows);
        Self::rep_check(&base, k, &rep)?;
        let n_arr = base.arrow_count();
        let src_map = vec![Mat::identity(k); n_arr];
        let tgt_map = rep.clone();
        let unit_map = vec![Mat::identity(k); base.object_count()];
        let inv_map = rep;
        let mut mul_map = BTreeMap::new();
        let pick_second = Mat::zeros(k, k).hstack(&Mat::identity(k));
        for (a, b) in base.composable_pairs() {
            mul_map.insert((a, b), pick_second.clone());
        }
        VBGroupoid::new(base, 0, k, src_map, tgt_map, mul_map, unit_map, inv_map)
    }

    /// VB-groupoid with zero base bundle from a representation on the core:
    /// rank `(l, 0)`, `m̃((g,c1),(h,c2)) = (gh, c1 + rep(g) c2)`.
    pub fn trivial_base(base: FiniteGroupoid, rep: Vec<Mat>) -> Result<Self, VbgError> {
        let l = rep.first().map_or(0, Mat::rows);
        Self::rep_check(&base, l, &rep)?;
        let n_arr = base.arrow_count();
        let src_map = vec![Mat::zeros(0, l); n_arr];
        let tgt_map = vec![Mat::zeros(0, l); n_arr];
        let unit_map = vec![Mat::zeros(l, 0); base.object_count()];
        let inv_map: Vec<Mat> = (0..n_arr)
            .map(|g| rep[base.inverse(g)].neg())
            .collect();
        let mut mul_map = BTreeMap::new();
        for (a, b) in base.composable_pairs() {
            mul_map.insert((a, b), Mat::identity(l).hstack(&rep[a]));
        }
        VBGroupoid::new(base, l, 0, src_map, tgt_map, mul_map, unit_map, inv_map)
    }

    /// Pullback VB-groupoid of rank `(k, k)`: arrow fibers are pairs
    /// (target-side vector, source-side vector), `s̃` and `t̃` the two
    /// projections, core-anchor the identity.
    pub fn pullback(base: FiniteGroupoid, k: usize) -> Result<Self, VbgError> {
        let n_arr = base.arrow_count();
        let zero = Mat::zeros(k, k);
        let id = Mat::identity(k);
        let src_map = vec![zero.hstack(&id); n_arr];
        let tgt_map = vec![id.hstack(&zero); n_arr];
        let unit_map = vec![id.vstack(&id); base.object_count()];
        let swap = zero.hstack(&id).vstack(&id.hstack(&zero));
        let inv_map = vec![swap; n_arr];
        // ((a,b),(c,d)) with b = c composes to (a,d).
        let pick = Mat::from_fn(2 * k, 4 * k, |r, c| {
            let hit = if r < k { c == r } else { c == 2 * k + k + (r - k) };
            if hit { crate::linalg::rat(1) } else { crate::linalg::rat(0) }
        });
        let mut mul_map = BTreeMap::new();
        for (a, b) in base.composable_pairs() {
            mul_map.insert((a, b), pick.clone());
        }
        VBGroupoid::new(base, k, k, src_map, tgt_map, mul_map, unit_map, inv_map)
    }

    /// The rank-`(l,k)` model VB-groupoid sampled at finitely many points
    /// `d : Q^l -> Q^k`: at each point the action groupoid of
    /// `(w, v) ↦ d(w) + v`, over a unit base groupoid.
    pub fn canonical(l: usize, k: usize, samples: Vec<Mat>) -> Result<Self, VbgError> {
        let points: Vec<String> = (0..samples.len()).map(|i| format!("d{i}")).collect();
        Self::from_anchored(&Anchored2VB::new(points, l, k, samples)?)
    }

    /// The action VB-groupoid of an anchored two-term complex, over the unit
    /// groupoid on its points.
    pub fn from_anchored(a: &Anchored2VB) -> Result<Self, VbgError> {
        let base = FiniteGroupoid::unit_groupoid(a.points.clone())?;
        let (l, k) = (a.e1_rank, a.e0_rank);
        let mut src_map = Vec::new();
        let mut tgt_map = Vec::new();
        let mut unit_map = Vec::new();
        let mut inv_map = Vec::new();
        let mut mul_map = BTreeMap::new();
        for (p, d) in a.deltas.iter().enumerate() {
            src_map.push(Mat::zeros(k, l).hstack(&Mat::identity(k)));
            tgt_map.push(d.hstack(&Mat::identity(k)));
            unit_map.push(Mat::zeros(l, k).vstack(&Mat::identity(k)));
            let top = Mat::identity(l).neg().hstack(&Mat::zeros(l, k));
            let bottom = d.hstack(&Mat::identity(k));
            inv_map.push(top.vstack(&bottom));
            // ((w1,v1),(w2,v2)) ↦ (w1+w2, v2)
            let n = l + k;
            let mul = Mat::from_fn(n, 2 * n, |r, c| {
                let hit = if r < l { c == r || c == n + r } else { c == n + r };
                if hit { crate::linalg::rat(1) } else { crate::linalg::rat(0) }
            });
            mul_map.insert((p, p), mul);
        }
        VBGroupoid::new(base, l, k, src_map, tgt_map, mul_map, unit_map, inv_map)
    }

    /// Recover the anchored complex of a VB-groupoid over a unit groupoid:
    /// `E1` = core, `E0` = base bundle, anchor = core-anchor.
    pub fn to_anchored(&self) -> Result<Anchored2VB, VbgError> {
        if !self.base.is_unit_groupoid() {
            return Err(VbgError::NonUnitBase);
        }
        let points: Vec<String> = self.base.objects().to_vec();
        let deltas: Vec<Mat> = (0..self.base.object_count()).map(|x| self.core_anchor(x)).collect();
        Anchored2VB::new(points, self.core_rank, self.base_rank, deltas)
    }

    /// Same fibers with source/target and multiplication order swapped, over
    /// the opposite base groupoid.
    pub fn opposite(&self) -> VBGroupoid {
        let n = self.fiber_dim();
        let mut mul_map = BTreeMap::new();
        for (&(a, b), m) in &self.mul_map {
            // m̃°(v_b, w_a) := m̃(w_a, v_b): swap the two input blocks.
            let swapped = Mat::from_fn(n, 2 * n, |r, c| {
                let c_orig = if c < n { c + n } else { c - n };
                m.at(r, c_orig).clone()
            });
            mul_map.insert((b, a), swapped);
        }
        VBGroupoid {
            base: self.base.opposite(),
            core_rank: self.core_rank,
            base_rank: self.base_rank,
            src_map: self.tgt_map.clone(),
            tgt_map: self.src_map.clone(),
            mul_map,
            unit_map: self.unit_map.clone(),
            inv_map: self.inv_map.clone(),
        }
    }

    /// Extend the columns of `cols` (assumed independent) to a basis of the
    /// ambient space by standard basis vectors.
    fn extend_to_square(cols: &Mat) -> Mat {
        let n = cols.rows();
        let mut acc = cols.clone();
        for j in 0..n {
            if acc.cols() == n {
                break;
            }
            let mut e = Mat::zeros(n, 1);
            e.set(j, 0, crate::linalg::rat(1));
            let cand = acc.hstack(&e);
            if cand.rank() == acc.rank() + 1 {
                acc = cand;
            }
        }
        acc
    }

    /// Dual VB-groupoid of rank `(k, l)` over the same base: arrow fibers are
    /// the dual fibers, object fibers the duals of the cores. Source, target,
    /// unit and inversion have closed forms; the multiplication is recovered
    /// from the pairing identity
    /// `(ξ1∘ξ2)(m̃(v1,v2)) = ξ1(v1) + ξ2(v2)` by solving a linear system on a
    /// basis of each fibered subspace.
    pub fn dual(&self) -> Result<VBGroupoid, VbgError> {
        let violations = self.validate();
        if !violations.is_empty() {
            return Err(VbgError::Invalid(violations));
        }
        let n = self.fiber_dim();
        let (l, k) = (self.core_rank, self.base_rank);
        let n_arr = self.base.arrow_count();
        let n_obj = self.base.object_count();

        let mut src_map = Vec::with_capacity(n_arr);
        let mut tgt_map = Vec::with_capacity(n_arr);
        let mut inv_map = Vec::with_capacity(n_arr);
        for g in 0..n_arr {
            let x = self.base.src(g);
            let y = self.base.tgt(g);
            let ux = self.base.unit_arrow(x);
            let uy = self.base.unit_arrow(y);
            // s̃*(ξ)(c) = -ξ(m̃(0_g, ĩ(c))) for c in the core at s(g).
            let lmat = self.lt_apply(g, ux, &self.inv_map[ux].mul(&self.core_basis(x))?)?;
            src_map.push(lmat.transpose().neg());
            // t̃*(ξ)(c) = ξ(m̃(c, 0_g)) for c in the core at t(g).
            let rmat = self.rt_apply(uy, g, &self.core_basis(y))?;
            tgt_map.push(rmat.transpose());
            // ĩ*(ξ) = -ξ∘ĩ_(g⁻¹).
            let gi = self.base.inverse(g);
            inv_map.push(self.inv_map[gi].transpose().neg());
        }

        let mut unit_map = Vec::with_capacity(n_obj);
        for x in 0..n_obj {
            // ũ*(η) = η ∘ proj_core with proj_core(e) = e - ũ(s̃ e), written in
            // the canonical core basis.
            let ux = self.base.unit_arrow(x);
            let proj = Mat::identity(n).sub(&self.unit_map[x].mul(&self.src_map[ux])?);
            let in_core = self.core_basis(x).solve_unique(&proj)?;
            unit_map.push(in_core.transpose());
        }

        let mut mul_map = BTreeMap::new();
        for &(g, h) in self.mul_map.keys() {
            let w_basis = self.fibered_pair_basis(g, h);
            let mw = self.mul_map[&(g, h)].mul(&w_basis)?;
            // Dual fibered subspace {(ξ1, ξ2) : s̃*(ξ1) = t̃*(ξ2)}.
            let constraint = src_map[g].hstack(&tgt_map[h].neg());
            let wd = constraint.kernel().basis().clone();
            // For each dual basis pair, the composite functional η on the
            // fiber over gh solves  (m̃|_W)ᵀ η = Wᵀ (ξ1; ξ2).
            let rhs = w_basis.transpose().mul(&wd)?;
            let eta = mw.transpose().solve_unique(&rhs)?;
            // Extend linearly from the dual fibered subspace to the full
            // product by zero on a complement.
            let full = Self::extend_to_square(&wd);
            let padded = eta.hstack(&Mat::zeros(n, 2 * n - wd.cols()));
            mul_map.insert((g, h), padded.mul(&full.inv()?)?);
        }

        VBGroupoid::new(self.base.clone(), k, l, src_map, tgt_map, mul_map, unit_map, inv_map)
    }
}
