//! The right 2-action of `GL(l,k)` on s-bisection frames, the induced action
//! on base pairs, changes of coordinates, and the sampled-bundle verification
//! routines (action laws, principality, associated bundle, round trips,
//! section translations).
//!
//! Quotients are never materialized: the associated bundle is certified
//! through its explicit evaluation maps plus well-definedness checks on
//! sampled representative changes.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::frame::{self, BasePair, FrameError, SFrame, TFrame};
use crate::gl2::{self, GL1Element, GL2Element, Gl2Error};
use crate::linalg::{LinalgError, Mat};
use crate::report::Report;
use crate::rng::SplitMix64;
use crate::vbg::{VBGroupoid, VbgError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ActionError {
    /// The frame's moment does not match the element's target point.
    MomentMismatch { frame_moment: String, element_target: String },
    SameArrowRequired,
    SameObjectRequired,
    /// A change of coordinates against a matrix that is not block-triangular:
    /// the input was not an s-bisection frame.
    BlockStructureViolation(String),
    NotASection(String),
    Frame(FrameError),
    Gl2(Gl2Error),
    Vbg(VbgError),
    Linalg(LinalgError),
}

impl fmt::Display for ActionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ActionError::MomentMismatch { frame_moment, element_target } => {
                write!(f, "moment mismatch: frame has {frame_moment}, element targets {element_target}")
            }
            ActionError::SameArrowRequired => write!(f, "frames must sit at the same arrow"),
            ActionError::SameObjectRequired => write!(f, "base pairs must sit at the same object"),
            ActionError::BlockStructureViolation(m) => write!(f, "block structure violation: {m}"),
            ActionError::NotASection(m) => write!(f, "not a section of the target map: {m}"),
            ActionError::Frame(e) => write!(f, "{e}"),
            ActionError::Gl2(e) => write!(f, "{e}"),
            ActionError::Vbg(e) => write!(f, "{e}"),
            ActionError::Linalg(e) => write!(f, "{e}"),
        }
    }
}

impl From<FrameError> for ActionError {
    fn from(e: FrameError) -> Self {
        ActionError::Frame(e)
    }
}

impl From<Gl2Error> for ActionError {
    fn from(e: Gl2Error) -> Self {
        ActionError::Gl2(e)
    }
}

impl From<VbgError> for ActionError {
    fn from(e: VbgError) -> Self {
        ActionError::Vbg(e)
    }
}

impl From<LinalgError> for ActionError {
    fn from(e: LinalgError) -> Self {
        ActionError::Linalg(e)
    }
}

/// Right action of a two-cell on an s-bisection frame: `φ · e = φ ∘ M(e)`,
/// defined when `d_φ = t20(e)`.
pub fn act2(v: &VBGroupoid, f: &SFrame, e: &GL2Element) -> Result<SFrame, ActionError> {
    let d = frame::dphi(v, f)?;
    if d != e.t20() {
        return Err(ActionError::MomentMismatch {
            frame_moment: format!("{d}"),
            element_target: format!("{}", e.t20()),
        });
    }
    Ok(frame::sframe(v, f.arrow, f.phi.mul(&e.block())?)?)
}

/// Right action of a one-cell on a base pair: `(φ_c, φ_b) · (d, A, B) =
/// (φ_c A, φ_b B)`, defined when the pair's moment equals `d`.
pub fn act1(v: &VBGroupoid, p: &BasePair, e: &GL1Element) -> Result<BasePair, ActionError> {
    let m = frame::moment(v, p)?;
    if m != e.target() {
        return Err(ActionError::MomentMismatch {
            frame_moment: format!("{m}"),
            element_target: format!("{}", e.target()),
        });
    }
    Ok(BasePair {
        object: p.object,
        core_frame: p.core_frame.mul(&e.a)?,
        base_frame: p.base_frame.mul(&e.b)?,
    })
}

/// Companion action on t-bisection frames: `ψ ⋆ e = ψ ∘ (T M(e) T)`. Used by
/// the duality equivariance checks; the caller supplies the element in the
/// structural 2-groupoid of the t-frames' VB-groupoid.
pub fn act2_t(host: &VBGroupoid, tf: &TFrame, e: &GL2Element) -> Result<TFrame, ActionError> {
    let t = frame::flip_t(host.core_rank(), host.base_rank());
    let m = t.mul(&e.block())?.mul(&t)?;
    Ok(frame::tframe(host, tf.arrow, tf.phi.mul(&m)?)?)
}

/// The unique two-cell with `act2(f1, e) = f2` for frames at the same arrow:
/// `M = Φ1⁻¹ Φ2` over the point `d_φ1`.
pub fn change_of_coords(v: &VBGroupoid, f1: &SFrame, f2: &SFrame) -> Result<GL2Element, ActionError> {
    if f1.arrow != f2.arrow {
        return Err(ActionError::SameArrowRequired);
    }
    let m = f1.phi.inv()?.mul(&f2.phi)?;
    let d = frame::dphi(v, f1)?;
    GL2Element::from_block(d, &m).map_err(|e| match e {
        Gl2Error::NotAMember(msg) => ActionError::BlockStructureViolation(msg),
        other => ActionError::Gl2(other),
    })
}

/// The unique one-cell with `act1(p1, e) = p2` for base pairs at the same
/// object.
pub fn change_of_coords_base(v: &VBGroupoid, p1: &BasePair, p2: &BasePair) -> Result<GL1Element, ActionError> {
    if p1.object != p2.object {
        return Err(ActionError::SameObjectRequired);
    }
    let a = p1.core_frame.solve_unique(&p2.core_frame)?;
    let b = p1.base_frame.solve_unique(&p2.base_frame)?;
    Ok(GL1Element::new(frame::moment(v, p1)?, a, b)?)
}

/// A finite seeded stand-in for the full frame bundle: a few frames per
/// arrow and base pairs per object.
#[derive(Debug, Clone)]
pub struct SampledPB {
    pub seed: u64,
    pub frames: Vec<Vec<SFrame>>,
    pub basepairs: Vec<Vec<BasePair>>,
}

impl SampledPB {
    pub fn iter_frames(&self) -> impl Iterator<Item = &SFrame> {
        self.frames.iter().flatten()
    }
}

/// Deterministic sample of the frame bundle; every frame passes the
/// s-bisection test by construction.
pub fn sample_frames(v: &VBGroupoid, seed: u64, per_arrow: usize, per_object: usize) -> SampledPB {
    let mut rng = SplitMix64::new(seed);
    let mut frames = Vec::with_capacity(v.base().arrow_count());
    for g in 0..v.base().arrow_count() {
        let mut at_g = Vec::with_capacity(per_arrow);
        for _ in 0..per_arrow {
            at_g.push(frame::random_sframe(v, g, &mut rng));
        }
        frames.push(at_g);
    }
    let mut basepairs = Vec::with_capacity(v.base().object_count());
    for x in 0..v.base().object_count() {
        let mut at_x = Vec::with_capacity(per_object);
        for _ in 0..per_object {
            at_x.push(frame::random_basepair(v, x, &mut rng));
        }
        basepairs.push(at_x);
    }
    SampledPB { seed, frames, basepairs }
}

fn fail_on_error<T>(report: &mut Report, check: &str, trial: u64, r: Result<T, ActionError>) -> Option<T> {
    match r {
        Ok(t) => Some(t),
        Err(e) => {
            report.fail(check, trial, format!("{e}"));
            None
        }
    }
}

/// Random composable frame pair over a random composable base pair: the
/// second frame free, the first one built through `F⁻¹` with prescribed
/// source data.
pub fn random_composable_frames(v: &VBGroupoid, rng: &mut SplitMix64) -> Result<(SFrame, SFrame), FrameError> {
    let pairs = v.base().composable_pairs();
    let idx = rng.next_range(0, pairs.len() as i64 - 1) as usize;
    let (g, h) = pairs[idx];
    let f2 = frame::random_sframe(v, h, rng);
    let f1 = frame::random_sframe_with_bs(v, g, &frame::bt(v, &f2)?, rng)?;
    Ok((f1, f2))
}

/// The two conditions of a 2-action plus the groupoid-morphism identity and
/// the change-of-coordinates laws, on random data.
pub fn verify_2action(v: &VBGroupoid, instance: &str, trials: u64, seed: u64) -> Report {
    let mut report = Report::new("verify_2action", instance, seed);
    let mut rng = SplitMix64::new(seed);
    for trial in 0..trials {
        // Moment compatibility: μ ∘ bs = μ ∘ bt = μ.
        let g = rng.next_range(0, v.base().arrow_count() as i64 - 1) as usize;
        let f = frame::random_sframe(v, g, &mut rng);
        let d = frame::dphi(v, &f).expect("sampled frame is valid");
        let mb = frame::moment(v, &frame::bs(v, &f).expect("valid")).expect("valid");
        let mt = frame::moment(v, &frame::bt(v, &f).expect("valid")).expect("valid");
        if mb == d && mt == d {
            report.pass("moment_compatibility", trial);
        } else {
            report.fail("moment_compatibility", trial, format!("d = {d}, via bs = {mb}, via bt = {mt}"));
        }

        // Moment equivariance: d_φ(f·e) = s20(e), and freeness.
        let e = gl2::random_element_at(&mut rng, &d);
        if let Some(fe) = fail_on_error(&mut report, "act2", trial, act2(v, &f, &e)) {
            let new_d = frame::dphi(v, &fe).expect("acted frame is valid");
            if new_d == e.s20() {
                report.pass("moment_equivariance", trial);
            } else {
                report.fail("moment_equivariance", trial, format!("d_φ = {new_d} but s20 = {}", e.s20()));
            }
            match change_of_coords(v, &f, &fe) {
                Ok(rec) if rec == e => report.pass("freeness_round_trip", trial),
                Ok(rec) => report.fail("freeness_round_trip", trial, format!("recovered {rec} instead of {e}")),
                Err(err) => report.fail("freeness_round_trip", trial, format!("{err}")),
            }
            // Base-level compatibility: bs(f·e) = bs(f)·s21(e), bt(f·e) = bt(f)·t21(e).
            let bs_acted = act1(v, &frame::bs(v, &f).expect("valid"), &e.s21());
            let bt_acted = act1(v, &frame::bt(v, &f).expect("valid"), &e.t21());
            let ok = bs_acted.as_ref().ok() == Some(&frame::bs(v, &fe).expect("valid"))
                && bt_acted.as_ref().ok() == Some(&frame::bt(v, &fe).expect("valid"));
            if ok {
                report.pass("base_compatibility", trial);
            } else {
                report.fail("base_compatibility", trial, "bs/bt of the acted frame differ from the acted bs/bt");
            }
        }

        // Morphism condition: bm(f1·e1, f2·e2) = bm(f1, f2)·(e1 ∘21 e2).
        match random_composable_frames(v, &mut rng) {
            Ok((f1, f2)) => {
                let d1 = frame::dphi(v, &f1).expect("valid");
                let e1 = gl2::random_element_at(&mut rng, &d1);
                let e2 = gl2::random_element_with_t21(&mut rng, &e1.s21());
                let lhs = act2(v, &f1, &e1)
                    .and_then(|a1| act2(v, &f2, &e2).map(|a2| (a1, a2)))
                    .and_then(|(a1, a2)| frame::bm(v, &a1, &a2).map_err(ActionError::from));
                let rhs = frame::bm(v, &f1, &f2)
                    .map_err(ActionError::from)
                    .and_then(|p| e1.m21(&e2).map_err(ActionError::from).map(|e| (p, e)))
                    .and_then(|(p, e)| act2(v, &p, &e));
                match (lhs, rhs) {
                    (Ok(a), Ok(b)) if a == b => report.pass("action_morphism", trial),
                    (Ok(a), Ok(b)) => {
                        report.fail("action_morphism", trial, format!("{} ≠ {}", a.phi, b.phi))
                    }
                    (l, r) => report.fail(
                        "action_morphism",
                        trial,
                        format!("lhs: {:?}, rhs: {:?}", l.err().map(|e| format!("{e}")), r.err().map(|e| format!("{e}"))),
                    ),
                }
            }
            Err(e) => report.fail("action_morphism", trial, format!("sampling failed: {e}")),
        }

        // Successive changes of coordinates compose under ∘20.
        let f_a = frame::random_sframe(v, g, &mut rng);
        let f_b = frame::random_sframe(v, g, &mut rng);
        let f_c = frame::random_sframe(v, g, &mut rng);
        let ab = change_of_coords(v, &f_a, &f_b);
        let bc = change_of_coords(v, &f_b, &f_c);
        let ac = change_of_coords(v, &f_a, &f_c);
        match (ab, bc, ac) {
            (Ok(ab), Ok(bc), Ok(ac)) => match ab.m20(&bc) {
                Ok(comp) if comp == ac => report.pass("coords_compose_20", trial),
                Ok(comp) => report.fail("coords_compose_20", trial, format!("{comp} ≠ {ac}")),
                Err(e) => report.fail("coords_compose_20", trial, format!("{e}")),
            },
            _ => report.fail("coords_compose_20", trial, "change of coordinates failed"),
        }

        // Changes of composable products compose under ∘21.
        if let Ok((f1, f2)) = random_composable_frames(v, &mut rng) {
            let result = (|| -> Result<bool, ActionError> {
                let f2p = frame::random_sframe(v, f2.arrow, &mut rng);
                let f1p = frame::random_sframe_with_bs(v, f1.arrow, &frame::bt(v, &f2p)?, &mut rng)?;
                let m_g = change_of_coords(v, &f1, &f1p)?;
                let m_h = change_of_coords(v, &f2, &f2p)?;
                let m_gh = change_of_coords(v, &frame::bm(v, &f1, &f2)?, &frame::bm(v, &f1p, &f2p)?)?;
                Ok(m_g.m21(&m_h)? == m_gh)
            })();
            match result {
                Ok(true) => report.pass("coords_compose_21", trial),
                Ok(false) => report.fail("coords_compose_21", trial, "∘21 of the factor changes differs"),
                Err(e) => report.fail("coords_compose_21", trial, format!("{e}")),
            }
        }
    }
    report
}

/// Fiberwise bijectivity of the action map: transitivity with unique
/// change-of-coordinates solutions, injectivity of the action, rejection
/// across distinct arrows, and the base-level analogue.
pub fn principality_check(v: &VBGroupoid, instance: &str, trials: u64, seed: u64) -> Report {
    let mut report = Report::new("principality_check", instance, seed);
    let mut rng = SplitMix64::new(seed);
    let n_arr = v.base().arrow_count() as i64;
    for trial in 0..trials {
        let g = rng.next_range(0, n_arr - 1) as usize;
        let f1 = frame::random_sframe(v, g, &mut rng);
        let f2 = frame::random_sframe(v, g, &mut rng);
        // Transitivity: a change of coordinates exists and acts correctly.
        match change_of_coords(v, &f1, &f2) {
            Ok(e) => match act2(v, &f1, &e) {
                Ok(acted) if acted == f2 => report.pass("fiber_transitivity", trial),
                Ok(acted) => report.fail("fiber_transitivity", trial, format!("{} ≠ {}", acted.phi, f2.phi)),
                Err(err) => report.fail("fiber_transitivity", trial, format!("{err}")),
            },
            Err(err) => report.fail("fiber_transitivity", trial, format!("{err}")),
        }
        // Injectivity: distinct elements move the frame differently.
        let d = frame::dphi(v, &f1).expect("valid");
        let e1 = gl2::random_element_at(&mut rng, &d);
        let e2 = gl2::random_element_at(&mut rng, &d);
        let a1 = act2(v, &f1, &e1).expect("moment matches");
        let a2 = act2(v, &f1, &e2).expect("moment matches");
        if (e1 == e2) == (a1 == a2) {
            report.pass("action_injectivity", trial);
        } else {
            report.fail("action_injectivity", trial, format!("e1 = {e1}, e2 = {e2}"));
        }
        // Distinct arrows are rejected, not silently coerced.
        if n_arr > 1 {
            let h = (g + 1) % v.base().arrow_count();
            let fh = frame::random_sframe(v, h, &mut rng);
            match change_of_coords(v, &f1, &fh) {
                Err(ActionError::SameArrowRequired) => report.pass("distinct_arrow_rejected", trial),
                other => report.fail("distinct_arrow_rejected", trial, format!("{other:?}")),
            }
        }
        // Base level: unique one-cell between same-object pairs.
        let x = rng.next_range(0, v.base().object_count() as i64 - 1) as usize;
        let p1 = frame::random_basepair(v, x, &mut rng);
        let p2 = frame::random_basepair(v, x, &mut rng);
        match change_of_coords_base(v, &p1, &p2) {
            Ok(e) => match act1(v, &p1, &e) {
                Ok(acted) if acted == p2 => report.pass("base_transitivity", trial),
                _ => report.fail("base_transitivity", trial, "one-cell does not map p1 to p2"),
            },
            Err(err) => report.fail("base_transitivity", trial, format!("{err}")),
        }
    }
    report
}

/// Certify the associated-bundle evaluation maps: well-definedness under
/// representative changes, full fiber rank, and the base-level analogue.
pub fn associated_vb(v: &VBGroupoid, instance: &str, sp: &SampledPB, changes_per_frame: u64, seed: u64) -> Report {
    let mut report = Report::new("associated_vb", instance, seed);
    let mut rng = SplitMix64::new(seed);
    let n = v.fiber_dim();
    let mut trial = 0;
    for frames_at_g in &sp.frames {
        for f in frames_at_g {
            // Full rank of the evaluation map at this representative.
            if f.phi.rank() == n {
                report.pass("evaluation_rank", trial);
            } else {
                report.fail("evaluation_rank", trial, format!("rank {} < {n}", f.phi.rank()));
            }
            let d = frame::dphi(v, f).expect("sampled frame is valid");
            for _ in 0..changes_per_frame {
                // [φ·e, M(e)⁻¹ z] and [φ, z] evaluate identically.
                let e = gl2::random_element_at(&mut rng, &d);
                let z = rng.next_mat(n, 1);
                let acted = act2(v, f, &e).expect("moment matches");
                let z_moved = e.block().inv().expect("member").mul(&z).expect("shapes");
                let lhs = acted.phi.mul(&z_moved).expect("shapes");
                let rhs = f.phi.mul(&z).expect("shapes");
                if lhs == rhs {
                    report.pass("evaluation_well_defined", trial);
                } else {
                    report.fail("evaluation_well_defined", trial, format!("{lhs} ≠ {rhs}"));
                }
                trial += 1;
            }
        }
    }
    // Base level: [p·e, B(e)⁻¹ w] and [p, w] evaluate identically through the
    // base frame, with full rank k.
    for pairs_at_x in &sp.basepairs {
        for p in pairs_at_x {
            if p.base_frame.rank() == v.base_rank() && p.core_frame.rank() == v.core_rank() {
                report.pass("base_evaluation_rank", trial);
            } else {
                report.fail("base_evaluation_rank", trial, "base pair is not a frame pair");
            }
            let m = frame::moment(v, p).expect("valid");
            for _ in 0..changes_per_frame {
                let e1 = gl2::random_element_at(&mut rng, &m).s21();
                let acted = act1(v, p, &e1).expect("moment matches");
                let w = rng.next_mat(v.base_rank(), 1);
                let w_moved = e1.b.inv().expect("member").mul(&w).expect("shapes");
                let lhs = acted.base_frame.mul(&w_moved).expect("shapes");
                let rhs = p.base_frame.mul(&w).expect("shapes");
                if lhs == rhs {
                    report.pass("base_evaluation_well_defined", trial);
                } else {
                    report.fail("base_evaluation_well_defined", trial, format!("{lhs} ≠ {rhs}"));
                }
                trial += 1;
            }
        }
    }
    if sp.frames.iter().all(|fs| fs.is_empty()) {
        report.warn("empty frame sample: associated-bundle checks are vacuous");
    }
    report
}

/// Both round trips of the frame correspondence on sampled data: sampled
/// bundle points map to s-bisection frames of the associated bundle
/// (numerically: themselves, through the evaluation isomorphism), the map is
/// injective, equivariant, and changes of coordinates recover acting
/// elements; the base-level map is the identity on sampled pairs.
pub fn roundtrip_frames(v: &VBGroupoid, instance: &str, sp: &SampledPB, seed: u64) -> Report {
    let mut report = Report::new("roundtrip_frames", instance, seed);
    let mut rng = SplitMix64::new(seed);
    let mut trial = 0;
    for frames_at_g in &sp.frames {
        for (i, p) in frames_at_g.iter().enumerate() {
            // φ_p is an s-bisection frame of the associated VB-groupoid.
            match frame::is_sbis(v, p.arrow, &p.phi) {
                Ok(true) => report.pass("bundle_point_gives_frame", trial),
                other => report.fail("bundle_point_gives_frame", trial, format!("{other:?}")),
            }
            // Injectivity of p ↦ φ_p on the sample: distinct bundle points
            // give distinct frames (duplicate sample entries are one point).
            if frames_at_g.iter().enumerate().all(|(j, q)| i == j || q == p || q.phi != p.phi) {
                report.pass("frame_map_injective", trial);
            } else {
                report.fail("frame_map_injective", trial, "distinct points with equal frames");
            }
            // Equivariance φ_(p·e) = φ_p · e, with the element recovered by a
            // change of coordinates.
            let d = frame::dphi(v, p).expect("valid");
            let e = gl2::random_element_at(&mut rng, &d);
            let moved = act2(v, p, &e).expect("moment matches");
            match change_of_coords(v, p, &moved) {
                Ok(rec) if rec == e => report.pass("frame_map_equivariant", trial),
                other => report.fail("frame_map_equivariant", trial, format!("{other:?}")),
            }
            trial += 1;
        }
    }
    for pairs_at_x in &sp.basepairs {
        for q in pairs_at_x {
            // Base-level round trip: bs(φ_(bu(q))) = q = bt(φ_(bu(q))).
            let unit = frame::bu(v, q).expect("valid base pair");
            let back_s = frame::bs(v, &unit).expect("valid");
            let back_t = frame::bt(v, &unit).expect("valid");
            if back_s == *q && back_t == *q {
                report.pass("base_round_trip", trial);
            } else {
                report.fail("base_round_trip", trial, "bs/bt of the unit frame differ from the base pair");
            }
            trial += 1;
        }
    }
    report
}

/// Translation by a section `b` of the target point map: `φ ↦ φ · b(μ(φ))`.
/// Verifies bijectivity on the sampled fibers, the affine decomposition
/// through the unit-valued section `b1(d) = u21(t21(b(d)))`, and — when `b`
/// is unit-valued — the groupoid-morphism identity.
pub fn section_translation(
    v: &VBGroupoid,
    instance: &str,
    sp: &SampledPB,
    section: &dyn Fn(&Mat) -> GL2Element,
    seed: u64,
) -> Result<Report, ActionError> {
    let mut report = Report::new("section_translation", instance, seed);
    let translate = |f: &SFrame| -> Result<SFrame, ActionError> {
        let d = frame::dphi(v, f)?;
        let b = section(&d);
        if b.t20() != d {
            return Err(ActionError::NotASection(format!("t20(b({d})) = {}", b.t20())));
        }
        act2(v, f, &b)
    };
    let mut trial = 0;
    let mut unit_valued = true;
    for frames_at_g in &sp.frames {
        for (i, f) in frames_at_g.iter().enumerate() {
            let image = translate(f)?;
            if !section(&frame::dphi(v, f)?).j.is_zero() {
                unit_valued = false;
            }
            // Injectivity on the sampled fiber (distinct frames stay distinct).
            let injective = frames_at_g.iter().enumerate().all(|(jx, other)| {
                if i == jx {
                    return true;
                }
                match translate(other) {
                    Ok(img) => img != image,
                    Err(_) => false,
                }
            });
            if injective {
                report.pass("translation_injective", trial);
            } else {
                report.fail("translation_injective", trial, "two sampled frames collide");
            }
            // Affine decomposition: φ_b(f) = bm(φ_b1(f), σ(bs(f))) with
            // b1 = u21 ∘ t21 ∘ b and σ(p) = act2(bu(p), b(moment(p))).
            let d = frame::dphi(v, f)?;
            let b1 = GL2Element::unit21(&section(&d).t21());
            let first = act2(v, f, &b1)?;
            let p = frame::bs(v, f)?;
            let sigma = act2(v, &frame::bu(v, &p)?, &section(&frame::moment(v, &p)?))?;
            let recomposed = frame::bm(v, &first, &sigma)?;
            if recomposed == image {
                report.pass("affine_decomposition", trial);
            } else {
                report.fail("affine_decomposition", trial, format!("{} ≠ {}", recomposed.phi, image.phi));
            }
            trial += 1;
        }
    }
    // Unit-valued sections are groupoid morphisms.
    if unit_valued {
        let mut rng = SplitMix64::new(seed ^ 0x5ec7);
        for t in 0..16u64 {
            let (f1, f2) = random_composable_frames(v, &mut rng).map_err(ActionError::from)?;
            let lhs = translate(&frame::bm(v, &f1, &f2)?)?;
            let rhs = frame::bm(v, &translate(&f1)?, &translate(&f2)?)?;
            if lhs == rhs {
                report.pass("section_morphism", trial + t);
            } else {
                report.fail("section_morphism", trial + t, format!("{} ≠ {}", lhs.phi, rhs.phi));
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ratio;
    use alloc::vec;

    fn canonical_11(ds: &[i64]) -> VBGroupoid {
        let samples = ds.iter().map(|&d| Mat::from_int_rows(&[&[d]])).collect();
        VBGroupoid::canonical(1, 1, samples).unwrap()
    }

    #[test]
    fn act2_examples() {
        let v = canonical_11(&[1]);
        let f = frame::sframe(&v, 0, Mat::identity(2)).unwrap();
        // Unit acts trivially.
        let u = GL2Element::unit20(Mat::identity(1));
        assert_eq!(act2(&v, &f, &u).unwrap(), f);
        // (d=1, A=1, J=1, B=1): new columns (1,0), (1,1); new moment 1/2.
        let e = GL2Element::new(Mat::identity(1), Mat::identity(1), Mat::identity(1), Mat::identity(1)).unwrap();
        let moved = act2(&v, &f, &e).unwrap();
        assert_eq!(moved.phi, Mat::from_int_rows(&[&[1, 1], &[0, 1]]));
        assert_eq!(frame::dphi(&v, &moved).unwrap(), Mat::from_rows(vec![vec![ratio(1, 2)]]));
        assert_eq!(frame::dphi(&v, &moved).unwrap(), e.s20());
        // Mismatched moment is rejected.
        let bad = GL2Element::unit20(Mat::zeros(1, 1));
        assert!(matches!(act2(&v, &f, &bad), Err(ActionError::MomentMismatch { .. })));
    }

    #[test]
    fn act2_is_an_action() {
        let v = canonical_11(&[1]);
        let mut rng = SplitMix64::new(2);
        for _ in 0..20 {
            let f = frame::random_sframe(&v, 0, &mut rng);
            let d = frame::dphi(&v, &f).unwrap();
            let e1 = gl2::random_element_at(&mut rng, &d);
            let e2 = gl2::random_element_at(&mut rng, &e1.s20());
            let lhs = act2(&v, &act2(&v, &f, &e1).unwrap(), &e2).unwrap();
            let rhs = act2(&v, &f, &e1.m20(&e2).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn act1_examples() {
        let v = canonical_11(&[1]);
        let p = BasePair { object: 0, core_frame: Mat::identity(1), base_frame: Mat::identity(1) };
        let u = GL1Element::unit(Mat::identity(1));
        assert_eq!(act1(&v, &p, &u).unwrap(), p);
        let e = GL1Element::new(Mat::identity(1), Mat::from_int_rows(&[&[2]]), Mat::from_int_rows(&[&[2]])).unwrap();
        let moved = act1(&v, &p, &e).unwrap();
        assert_eq!(moved.core_frame, Mat::from_int_rows(&[&[2]]));
        assert_eq!(moved.base_frame, Mat::from_int_rows(&[&[2]]));
        assert_eq!(frame::moment(&v, &moved).unwrap(), Mat::identity(1));
    }

    #[test]
    fn change_of_coords_examples() {
        let v = canonical_11(&[1]);
        let f = frame::sframe(&v, 0, Mat::identity(2)).unwrap();
        // Same frame: the 20-unit at the moment.
        let self_change = change_of_coords(&v, &f, &f).unwrap();
        assert_eq!(self_change, GL2Element::unit20(Mat::identity(1)));
        // Identity to sheared frame: (1, A=1, J=1, B=1).
        let sheared = frame::sframe(&v, 0, Mat::from_int_rows(&[&[1, 1], &[0, 1]])).unwrap();
        let e = change_of_coords(&v, &f, &sheared).unwrap();
        assert_eq!(e, GL2Element::new(Mat::identity(1), Mat::identity(1), Mat::identity(1), Mat::identity(1)).unwrap());
        // Freeness round trip on random data.
        let mut rng = SplitMix64::new(6);
        for _ in 0..20 {
            let f = frame::random_sframe(&v, 0, &mut rng);
            let e = gl2::random_element_at(&mut rng, &frame::dphi(&v, &f).unwrap());
            let moved = act2(&v, &f, &e).unwrap();
            assert_eq!(change_of_coords(&v, &f, &moved).unwrap(), e);
        }
    }

    #[test]
    fn change_of_coords_base_part3() {
        // The d = 1 shear: bs-side gives C = 1/2, B = 1; bt-side A = 1, D = 2.
        let v = canonical_11(&[1]);
        let f = frame::sframe(&v, 0, Mat::identity(2)).unwrap();
        let sheared = frame::sframe(&v, 0, Mat::from_int_rows(&[&[1, 1], &[0, 1]])).unwrap();
        let s_change = change_of_coords_base(&v, &frame::bs(&v, &f).unwrap(), &frame::bs(&v, &sheared).unwrap()).unwrap();
        assert_eq!(s_change.a, Mat::from_rows(vec![vec![ratio(1, 2)]]));
        assert_eq!(s_change.b, Mat::identity(1));
        let t_change = change_of_coords_base(&v, &frame::bt(&v, &f).unwrap(), &frame::bt(&v, &sheared).unwrap()).unwrap();
        assert_eq!(t_change.a, Mat::identity(1));
        assert_eq!(t_change.b, Mat::from_int_rows(&[&[2]]));
        // These are exactly s21 and t21 of the frame-level change.
        let e = change_of_coords(&v, &f, &sheared).unwrap();
        assert_eq!(s_change, e.s21());
        assert_eq!(t_change, e.t21());
    }

    #[test]
    fn sampling_is_deterministic() {
        let v = canonical_11(&[0, 1]);
        let a = sample_frames(&v, 1, 3, 2);
        let b = sample_frames(&v, 1, 3, 2);
        for (fa, fb) in a.iter_frames().zip(b.iter_frames()) {
            assert_eq!(fa, fb);
        }
        let c = sample_frames(&v, 2, 3, 2);
        assert!(a.iter_frames().zip(c.iter_frames()).any(|(x, y)| x != y));
    }

    #[test]
    fn verification_suites_pass_on_canonical() {
        let v = canonical_11(&[0, 1]);
        let r = verify_2action(&v, "canonical_1_1", 12, 7);
        assert!(r.all_passed(), "failures: {:?}", r.failures().collect::<Vec<_>>());
        let r = principality_check(&v, "canonical_1_1", 12, 7);
        assert!(r.all_passed(), "failures: {:?}", r.failures().collect::<Vec<_>>());
        let sp = sample_frames(&v, 7, 3, 2);
        let r = associated_vb(&v, "canonical_1_1", &sp, 5, 7);
        assert!(r.all_passed(), "failures: {:?}", r.failures().collect::<Vec<_>>());
        let r = roundtrip_frames(&v, "canonical_1_1", &sp, 7);
        assert!(r.all_passed(), "failures: {:?}", r.failures().collect::<Vec<_>>());
    }

    #[test]
    fn section_translation_examples() {
        let v = canonical_11(&[0, 1]);
        let sp = sample_frames(&v, 3, 3, 2);
        // The 20-unit section is the identity translation and a morphism.
        let unit_section = |d: &Mat| GL2Element::unit20(d.clone());
        let r = section_translation(&v, "canonical_1_1", &sp, &unit_section, 3).unwrap();
        assert!(r.all_passed(), "failures: {:?}", r.failures().collect::<Vec<_>>());
        // A unit-valued section with nontrivial one-cells.
        let scaled = |d: &Mat| {
            GL2Element::unit21(
                &GL1Element::new(d.clone(), Mat::identity(1).scale(&crate::linalg::rat(2)), Mat::identity(1).scale(&crate::linalg::rat(2))).unwrap(),
            )
        };
        let r = section_translation(&v, "canonical_1_1", &sp, &scaled, 3).unwrap();
        assert!(r.all_passed(), "failures: {:?}", r.failures().collect::<Vec<_>>());
        assert!(r.records.iter().any(|c| c.check == "section_morphism"));
        // A generic section with J ≠ 0: affine decomposition still passes,
        // and the morphism identity genuinely fails somewhere.
        let generic = |d: &Mat| {
            GL2Element::new(d.clone(), Mat::identity(1), Mat::identity(1), Mat::identity(1)).unwrap()
        };
        let r = section_translation(&v, "canonical_1_1", &sp, &generic, 3).unwrap();
        assert!(r.all_passed(), "failures: {:?}", r.failures().collect::<Vec<_>>());
        assert!(r.records.iter().all(|c| c.check != "section_morphism"));
        let mut rng = SplitMix64::new(40);
        let mut found_violation = false;
        for _ in 0..20 {
            let (f1, f2) = random_composable_frames(&v, &mut rng).unwrap();
            let tr = |f: &SFrame| {
                let d = frame::dphi(&v, f).unwrap();
                act2(&v, f, &generic(&d)).unwrap()
            };
            let lhs = tr(&frame::bm(&v, &f1, &f2).unwrap());
            let rhs = frame::bm(&v, &tr(&f1), &tr(&f2));
            if rhs.as_ref().ok() != Some(&lhs) {
                found_violation = true;
                break;
            }
        }
        assert!(found_violation, "a J ≠ 0 section should not be a morphism");
    }

    #[test]
    fn corrupted_action_is_detected() {
        // Dropping the J block of the acting matrix breaks the morphism
        // condition, and the verifier notices.
        let v = canonical_11(&[1]);
        let mut rng = SplitMix64::new(15);
        let mut detected = false;
        for _ in 0..40 {
            let (f1, f2) = random_composable_frames(&v, &mut rng).unwrap();
            let d = frame::dphi(&v, &f1).unwrap();
            let e1 = gl2::random_element_at(&mut rng, &d);
            let e2 = gl2::random_element_with_t21(&mut rng, &e1.s21());
            let corrupt = |f: &SFrame, e: &GL2Element| -> Option<SFrame> {
                // Forgets J: acts by the block diagonal only.
                let block = e.a.hstack(&Mat::zeros(1, 1)).vstack(&Mat::zeros(1, 1).hstack(&e.b));
                frame::sframe(&v, f.arrow, f.phi.mul(&block).unwrap()).ok()
            };
            let (Some(a1), Some(a2)) = (corrupt(&f1, &e1), corrupt(&f2, &e2)) else { continue };
            let lhs = frame::bm(&v, &a1, &a2);
            let rhs_frame = frame::bm(&v, &f1, &f2).unwrap();
            let rhs = e1.m21(&e2).ok().and_then(|e| corrupt(&rhs_frame, &e));
            match (lhs, rhs) {
                (Ok(a), Some(b)) if a == b => {}
                _ => {
                    detected = true;
                    break;
                }
            }
        }
        assert!(detected, "the corrupted action should violate the morphism condition");
    }
}
