//! Named verification suites producing deterministic reports: the 2-groupoid
//! laws of `GL(l,k)`, the groupoid laws of the frame bundle, the
//! change-of-coordinates laws, the `F` bijection, duality, and the isotropy
//! crossed module. The CLI's `check` command and the acceptance tests both
//! run these.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::action::{self, act2, act2_t, change_of_coords, change_of_coords_base};
use crate::fat;
use crate::frame::{self, BasePair};
use crate::gl2::{self, GL2Element, IsotropyCrossedModule};
use crate::linalg::Mat;
use crate::report::Report;
use crate::rng::SplitMix64;
use crate::vbg::VBGroupoid;

/// Associativity, units, inverses, source/target compatibility and the
/// interchange law for both compositions of `GL(l,k)`, plus the transpose
/// anti-automorphism, on random composable tuples.
pub fn gl2_laws(l: usize, k: usize, tuples: u64, seed: u64) -> Report {
    let mut report = Report::new("gl2_laws", format!("GL({l},{k})"), seed);
    let mut rng = SplitMix64::new(seed);
    for trial in 0..tuples {
        let d = rng.next_mat(k, l);

        // ∘20 laws.
        let e1 = gl2::random_element_at(&mut rng, &d);
        let e2 = gl2::random_element_at(&mut rng, &e1.s20());
        let e3 = gl2::random_element_at(&mut rng, &e2.s20());
        let assoc_l = e1.m20(&e2).and_then(|p| p.m20(&e3));
        let assoc_r = e2.m20(&e3).and_then(|p| e1.m20(&p));
        match (&assoc_l, &assoc_r) {
            (Ok(a), Ok(b)) if a == b => report.pass("m20_assoc", trial),
            _ => report.fail("m20_assoc", trial, format!("{e1}, {e2}, {e3}")),
        }
        if let Ok(p) = &assoc_l {
            if p.t20() == e1.t20() && p.s20() == e3.s20() {
                report.pass("m20_endpoints", trial);
            } else {
                report.fail("m20_endpoints", trial, format!("{p}"));
            }
        }
        let unit_ok = e1.m20(&GL2Element::unit20(e1.s20())).as_ref() == Ok(&e1)
            && GL2Element::unit20(e1.t20()).m20(&e1).as_ref() == Ok(&e1);
        if unit_ok {
            report.pass("m20_unit", trial);
        } else {
            report.fail("m20_unit", trial, format!("{e1}"));
        }
        let inv = e1.i20();
        let inv_ok = e1.m20(&inv).as_ref() == Ok(&GL2Element::unit20(e1.t20()))
            && inv.m20(&e1).as_ref() == Ok(&GL2Element::unit20(e1.s20()))
            && inv.i20() == e1;
        if inv_ok {
            report.pass("m20_inverse", trial);
        } else {
            report.fail("m20_inverse", trial, format!("{e1}"));
        }

        // ∘21 laws.
        let v1 = gl2::random_element_at(&mut rng, &d);
        let v2 = gl2::random_element_with_t21(&mut rng, &v1.s21());
        let v3 = gl2::random_element_with_t21(&mut rng, &v2.s21());
        let assoc_l = v1.m21(&v2).and_then(|p| p.m21(&v3));
        let assoc_r = v2.m21(&v3).and_then(|p| v1.m21(&p));
        match (&assoc_l, &assoc_r) {
            (Ok(a), Ok(b)) if a == b => report.pass("m21_assoc", trial),
            _ => report.fail("m21_assoc", trial, format!("{v1}, {v2}, {v3}")),
        }
        if let Ok(p) = &assoc_l {
            if p.t21() == v1.t21() && p.s21() == v3.s21() {
                report.pass("m21_endpoints", trial);
            } else {
                report.fail("m21_endpoints", trial, format!("{p}"));
            }
        }
        let unit_ok = v1.m21(&GL2Element::unit21(&v1.s21())).as_ref() == Ok(&v1)
            && GL2Element::unit21(&v1.t21()).m21(&v1).as_ref() == Ok(&v1);
        if unit_ok {
            report.pass("m21_unit", trial);
        } else {
            report.fail("m21_unit", trial, format!("{v1}"));
        }
        let inv = v1.i21();
        let inv_ok = v1.m21(&inv).as_ref() == Ok(&GL2Element::unit21(&v1.t21()))
            && inv.m21(&v1).as_ref() == Ok(&GL2Element::unit21(&v1.s21()))
            && inv.i21() == v1;
        if inv_ok {
            report.pass("m21_inverse", trial);
        } else {
            report.fail("m21_inverse", trial, format!("{v1}"));
        }

        // s21 and t21 are morphisms from (GL2, ∘20) to (GL1, compose).
        let morph = e1.m20(&e2).map(|p| {
            p.s21() == e1.s21().compose(&e2.s21()).expect("legs composable")
                && p.t21() == e1.t21().compose(&e2.t21()).expect("legs composable")
        });
        match morph {
            Ok(true) => report.pass("legs_are_morphisms", trial),
            _ => report.fail("legs_are_morphisms", trial, format!("{e1}, {e2}")),
        }

        // GL1 action-groupoid laws.
        let f1 = e1.t21();
        let f2 = f1.inverse();
        let f12 = f1.compose(&f2).expect("composable");
        if f12 == gl2::GL1Element::unit(f1.target()) && f12.source() == f2.source() {
            report.pass("gl1_laws", trial);
        } else {
            report.fail("gl1_laws", trial, "one-cell inverse law failed");
        }

        // Interchange: (g1 ∘20 g2) ∘21 (g3 ∘20 g4) = (g1 ∘21 g3) ∘20 (g2 ∘21 g4).
        let g1 = gl2::random_element_at(&mut rng, &d);
        let g3 = gl2::random_element_with_t21(&mut rng, &g1.s21());
        let g2 = gl2::random_element_at(&mut rng, &g1.s20());
        let g4 = gl2::random_element_with_t21(&mut rng, &g2.s21());
        let lhs = g1.m20(&g2).and_then(|a| g3.m20(&g4).and_then(|b| a.m21(&b)));
        let rhs = g1.m21(&g3).and_then(|a| g2.m21(&g4).and_then(|b| a.m20(&b)));
        match (lhs, rhs) {
            (Ok(a), Ok(b)) if a == b => report.pass("interchange", trial),
            (l, r) => report.fail(
                "interchange",
                trial,
                format!("lhs {:?} rhs {:?}", l.map(|e| format!("{e}")), r.map(|e| format!("{e}"))),
            ),
        }

        // Transpose anti-automorphism reverses both compositions.
        let t_ok = e1.m20(&e2).map(|p| p.transpose() == e2.transpose().m20(&e1.transpose()).expect("composable"));
        match t_ok {
            Ok(true) => report.pass("transpose_reverses_m20", trial),
            _ => report.fail("transpose_reverses_m20", trial, format!("{e1}, {e2}")),
        }
        let t21_ok = v1.m21(&v2).map(|p| {
            v2.transpose()
                .m21(&v1.transpose())
                .map(|q| q == p.transpose())
                .unwrap_or(false)
        });
        match t21_ok {
            Ok(true) => report.pass("transpose_reverses_m21", trial),
            _ => report.fail("transpose_reverses_m21", trial, format!("{v1}, {v2}")),
        }
    }
    report
}

/// Groupoid axioms of the s-bisection frame bundle with `bs, bt, bm, bu, bi`,
/// the invertibility of all induced base frames, moment compatibility and
/// d-constancy, on random composable frame tuples.
pub fn frame_groupoid_laws(v: &VBGroupoid, instance: &str, trials: u64, seed: u64) -> Report {
    let mut report = Report::new("frame_groupoid_laws", instance, seed);
    let mut rng = SplitMix64::new(seed);
    let triples = v.base().composable_triples();
    for trial in 0..trials {
        let Ok((f1, f2)) = action::random_composable_frames(v, &mut rng) else {
            report.fail("sampling", trial, "could not sample a composable pair");
            continue;
        };
        let prod = match frame::bm(v, &f1, &f2) {
            Ok(p) => p,
            Err(e) => {
                report.fail("bm_defined", trial, format!("{e}"));
                continue;
            }
        };
        let (bs1, bt1) = (frame::bs(v, &f1).expect("valid"), frame::bt(v, &f1).expect("valid"));
        let (bs2, bt2) = (frame::bs(v, &f2).expect("valid"), frame::bt(v, &f2).expect("valid"));
        if frame::bs(v, &prod).expect("valid") == bs2 && frame::bt(v, &prod).expect("valid") == bt1 {
            report.pass("bm_endpoints", trial);
        } else {
            report.fail("bm_endpoints", trial, format!("{}", prod.phi));
        }
        // Unit laws.
        let left_unit = frame::bm(v, &frame::bu(v, &bt1).expect("valid"), &f1);
        let right_unit = frame::bm(v, &f1, &frame::bu(v, &bs1).expect("valid"));
        if left_unit.as_ref() == Ok(&f1) && right_unit.as_ref() == Ok(&f1) {
            report.pass("bm_units", trial);
        } else {
            report.fail("bm_units", trial, format!("{}", f1.phi));
        }
        // Inverse laws.
        let f1i = frame::bi(v, &f1).expect("valid");
        let ok = frame::bm(v, &f1, &f1i).as_ref() == Ok(&frame::bu(v, &bt1).expect("valid"))
            && frame::bm(v, &f1i, &f1).as_ref() == Ok(&frame::bu(v, &bs1).expect("valid"))
            && frame::bi(v, &f1i).as_ref() == Ok(&f1)
            && frame::bs(v, &f1i).expect("valid") == bt1
            && frame::bt(v, &f1i).expect("valid") == bs1;
        if ok {
            report.pass("bi_laws", trial);
        } else {
            report.fail("bi_laws", trial, format!("{}", f1.phi));
        }
        // Associativity on a random composable triple.
        if !triples.is_empty() {
            let f3 = {
                let idx = rng.next_range(0, triples.len() as i64 - 1) as usize;
                let (g, h, j) = triples[idx];
                let c = frame::random_sframe(v, j, &mut rng);
                let b = frame::random_sframe_with_bs(v, h, &frame::bt(v, &c).expect("valid"), &mut rng)
                    .expect("prescribed source");
                let a = frame::random_sframe_with_bs(v, g, &frame::bt(v, &b).expect("valid"), &mut rng)
                    .expect("prescribed source");
                (a, b, c)
            };
            let (a, b, c) = f3;
            let left = frame::bm(v, &a, &b).and_then(|ab| frame::bm(v, &ab, &c));
            let right = frame::bm(v, &b, &c).and_then(|bc| frame::bm(v, &a, &bc));
            match (left, right) {
                (Ok(x), Ok(y)) if x == y => report.pass("bm_assoc", trial),
                _ => report.fail("bm_assoc", trial, "associativity failed on a sampled triple"),
            }
        }
        // bu endpoints.
        let x = rng.next_range(0, v.base().object_count() as i64 - 1) as usize;
        let p = frame::random_basepair(v, x, &mut rng);
        let up = frame::bu(v, &p).expect("valid base pair");
        if frame::bs(v, &up).expect("valid") == p && frame::bt(v, &up).expect("valid") == p {
            report.pass("bu_endpoints", trial);
        } else {
            report.fail("bu_endpoints", trial, format!("object {x}"));
        }
        // Induced base frames are invertible.
        let inv_ok = [&bs1, &bt1, &bs2, &bt2]
            .iter()
            .all(|q| q.core_frame.is_invertible() && q.base_frame.is_invertible());
        if inv_ok {
            report.pass("induced_frames_invertible", trial);
        } else {
            report.fail("induced_frames_invertible", trial, "a bs/bt matrix is singular");
        }
        // d-constancy and moment compatibility.
        let d1 = frame::dphi(v, &f1).expect("valid");
        let d_ok = d1 == frame::dphi(v, &f2).expect("valid")
            && d1 == frame::dphi(v, &prod).expect("valid")
            && d1 == frame::moment(v, &bs1).expect("valid")
            && d1 == frame::moment(v, &bt1).expect("valid")
            && d1 == frame::dphi(v, &frame::bu(v, &bs1).expect("valid")).expect("valid")
            && d1 == frame::dphi(v, &frame::bu(v, &bt1).expect("valid")).expect("valid");
        if d_ok {
            report.pass("d_constancy", trial);
        } else {
            report.fail("d_constancy", trial, format!("d = {d1}"));
        }
    }
    report
}

/// The change-of-coordinates laws: every same-arrow frame change is a
/// two-cell whose source point is the second frame's moment; successive
/// changes compose under ∘20; the induced base changes are the two one-cell
/// legs, with closed forms `C = (I+Jd)⁻¹A` and `D = (I+dJ)B` and the inverse
/// identity `(I - J(I+dJ)⁻¹d)(I+Jd) = I`; and changes of composable products
/// compose under ∘21.
pub fn coords_laws(v: &VBGroupoid, instance: &str, trials: u64, seed: u64) -> Report {
    let mut report = Report::new("coords_laws", instance, seed);
    let mut rng = SplitMix64::new(seed);
    let n_arr = v.base().arrow_count() as i64;
    for trial in 0..trials {
        let g = rng.next_range(0, n_arr - 1) as usize;
        let f = frame::random_sframe(v, g, &mut rng);
        let f_prime = frame::random_sframe(v, g, &mut rng);
        let e = match change_of_coords(v, &f, &f_prime) {
            Ok(e) => e,
            Err(err) => {
                report.fail("change_is_two_cell", trial, format!("{err}"));
                continue;
            }
        };
        // The change is a two-cell over d_φ with source point d_φ'.
        if frame::dphi(v, &f_prime).expect("valid") == e.s20() {
            report.pass("change_is_two_cell", trial);
        } else {
            report.fail("change_is_two_cell", trial, format!("{e}"));
        }
        // Successive changes compose under ∘20.
        let f_second = frame::random_sframe(v, g, &mut rng);
        let e2 = change_of_coords(v, &f_prime, &f_second).expect("same arrow");
        let direct = change_of_coords(v, &f, &f_second).expect("same arrow");
        match e.m20(&e2) {
            Ok(p) if p == direct => report.pass("changes_compose_20", trial),
            other => report.fail("changes_compose_20", trial, format!("{other:?}")),
        }
        // Base-level changes are the two one-cell legs, with closed forms.
        let s_change = change_of_coords_base(v, &frame::bs(v, &f).expect("valid"), &frame::bs(v, &f_prime).expect("valid"))
            .expect("same object");
        let t_change = change_of_coords_base(v, &frame::bt(v, &f).expect("valid"), &frame::bt(v, &f_prime).expect("valid"))
            .expect("same object");
        if s_change == e.s21() && t_change == e.t21() {
            report.pass("base_changes_are_legs", trial);
        } else {
            report.fail("base_changes_are_legs", trial, format!("{e}"));
        }
        let l = v.core_rank();
        let k = v.base_rank();
        let ijd = Mat::identity(l).add(&e.j.mul(&e.d).expect("shapes"));
        let idj = Mat::identity(k).add(&e.d.mul(&e.j).expect("shapes"));
        let c_closed = ijd.inv().expect("member").mul(&e.a).expect("shapes");
        let d_closed = idj.mul(&e.b).expect("shapes");
        if s_change.a == c_closed && t_change.b == d_closed {
            report.pass("leg_closed_forms", trial);
        } else {
            report.fail("leg_closed_forms", trial, format!("C = {}, D = {}", s_change.a, t_change.b));
        }
        // The inverse identity used in the closed form for C.
        let lhs = Mat::identity(l)
            .sub(&e.j.mul(&idj.inv().expect("member")).expect("shapes").mul(&e.d).expect("shapes"))
            .mul(&ijd)
            .expect("shapes");
        if lhs == Mat::identity(l) {
            report.pass("inverse_identity", trial);
        } else {
            report.fail("inverse_identity", trial, format!("{lhs}"));
        }
        // Changes of composable products compose under ∘21.
        if let Ok((f1, f2)) = action::random_composable_frames(v, &mut rng) {
            let f2p = frame::random_sframe(v, f2.arrow, &mut rng);
            let f1p = frame::random_sframe_with_bs(v, f1.arrow, &frame::bt(v, &f2p).expect("valid"), &mut rng)
                .expect("prescribed source");
            let m_g = change_of_coords(v, &f1, &f1p).expect("same arrow");
            let m_h = change_of_coords(v, &f2, &f2p).expect("same arrow");
            let prod = frame::bm(v, &f1, &f2).expect("composable");
            let prod_p = frame::bm(v, &f1p, &f2p).expect("composable");
            let m_gh = change_of_coords(v, &prod, &prod_p).expect("same arrow");
            match m_g.m21(&m_h) {
                Ok(p) if p == m_gh => report.pass("product_changes_compose_21", trial),
                other => report.fail("product_changes_compose_21", trial, format!("{other:?}")),
            }
        }
    }
    report
}

/// The bijection between s-bisection frames and fat-groupoid elements paired
/// with base points: both round trips, the intertwining of `bt` with the fat
/// actions, multiplicativity into the action groupoid, and functoriality of
/// the two fat representations.
pub fn f_bijection_laws(v: &VBGroupoid, instance: &str, trials: u64, seed: u64) -> Report {
    let mut report = Report::new("f_bijection_laws", instance, seed);
    let mut rng = SplitMix64::new(seed);
    let n_arr = v.base().arrow_count() as i64;
    for trial in 0..trials {
        let g = rng.next_range(0, n_arr - 1) as usize;
        let f = frame::random_sframe(v, g, &mut rng);
        let (fe, p) = frame::f_map(v, &f).expect("sampled frame is valid");
        match frame::f_inv(v, &fe, &p) {
            Ok(back) if back == f => report.pass("round_trip_frame", trial),
            other => report.fail("round_trip_frame", trial, format!("{other:?}")),
        }
        let fe2 = fat::random_at(v, g, &mut rng);
        let p2 = frame::random_basepair(v, v.base().src(g), &mut rng);
        match frame::f_inv(v, &fe2, &p2).map(|fr| frame::f_map(v, &fr)) {
            Ok(Ok((fe3, p3))) if fe3 == fe2 && p3 == p2 => report.pass("round_trip_data", trial),
            other => report.fail("round_trip_data", trial, format!("{other:?}")),
        }
        // bt = fat action of bs through F.
        let target = frame::bt(v, &f).expect("valid");
        let acted_core = fat::act_core(v, &fe, &p.core_frame);
        let acted_base = fat::act_base(v, &fe, &p.base_frame);
        match (acted_core, acted_base) {
            (Ok(c), Ok(b)) if c == target.core_frame && b == target.base_frame => {
                report.pass("bt_is_fat_action", trial)
            }
            other => report.fail("bt_is_fat_action", trial, format!("{other:?}")),
        }
        // F sends bm to the action-groupoid multiplication.
        if let Ok((f1, f2)) = action::random_composable_frames(v, &mut rng) {
            let prod = frame::bm(v, &f1, &f2).expect("composable");
            let (fe_prod, p_prod) = frame::f_map(v, &prod).expect("valid");
            let (fe1, _) = frame::f_map(v, &f1).expect("valid");
            let (fe2c, p2c) = frame::f_map(v, &f2).expect("valid");
            let fat_prod = fat::compose(v, &fe1, &fe2c).expect("composable arrows");
            if fe_prod == fat_prod && p_prod == p2c {
                report.pass("f_multiplicative", trial);
            } else {
                report.fail("f_multiplicative", trial, "F(bm) differs from the action-groupoid product");
            }
            // Functoriality of the fat representations on this pair.
            let e = rng.next_mat(v.base_rank(), 1);
            let c = rng.next_mat(v.core_rank(), 1);
            let pair_ok = fat::act_base(v, &fat_prod, &e).expect("member")
                == fat::act_base(v, &fe1, &fat::act_base(v, &fe2c, &e).expect("member")).expect("member")
                && fat::act_core(v, &fat_prod, &c).expect("member")
                    == fat::act_core(v, &fe1, &fat::act_core(v, &fe2c, &c).expect("member")).expect("member");
            if pair_ok {
                report.pass("fat_functorial", trial);
            } else {
                report.fail("fat_functorial", trial, "fat representation is not functorial on a sample");
            }
        }
    }
    report
}

/// Duality: `Ψ` is an involutive isomorphism onto t-bisection frames, the
/// dual-frame map lands in t-bisection frames of the dual, both intertwine
/// the five structure maps (through the opposite-transported t-frame
/// structure), both are equivariant for the transpose, and the double dual
/// matches under the canonical identifications.
pub fn duality_laws(v: &VBGroupoid, instance: &str, trials: u64, seed: u64) -> Report {
    let mut report = Report::new("duality_laws", instance, seed);
    let mut rng = SplitMix64::new(seed);
    let vop = v.opposite();
    let vd = v.dual().expect("input validates");
    let vdop = vd.opposite();
    for trial in 0..trials {
        let Ok((f1, f2)) = action::random_composable_frames(v, &mut rng) else {
            report.fail("sampling", trial, "could not sample a composable pair");
            continue;
        };
        let prod = frame::bm(v, &f1, &f2).expect("composable");
        let (g, _h) = (f1.arrow, f2.arrow);

        // Ψ is involutive and lands in t-bisection frames (the constructor
        // inside psi re-checks membership).
        let t1 = match frame::psi(v, &f1) {
            Ok(t) => t,
            Err(e) => {
                report.fail("psi_membership", trial, format!("{e}"));
                continue;
            }
        };
        let t2 = frame::psi(v, &f2).expect("t-membership");
        if frame::psi_inv(v, &t1).as_ref() == Ok(&f1) {
            report.pass("psi_involutive", trial);
        } else {
            report.fail("psi_involutive", trial, format!("{}", f1.phi));
        }
        // Ψ intertwines the structure maps (with the composition order
        // reversed, since it inverts base arrows).
        let psi_bm = frame::psi(v, &prod).expect("t-membership");
        match frame::tframe_bm(v, &vop, &t2, &t1) {
            Ok(p) if p == psi_bm => report.pass("psi_bm", trial),
            other => report.fail("psi_bm", trial, format!("{other:?}")),
        }
        let psi_bi = frame::psi(v, &frame::bi(v, &f1).expect("valid")).expect("t-membership");
        match frame::tframe_bi(v, &vop, &t1) {
            Ok(p) if p == psi_bi => report.pass("psi_bi", trial),
            other => report.fail("psi_bi", trial, format!("{other:?}")),
        }
        let q_t = frame::core_flip(v, &vop, v.base().tgt(g)).expect("unit fibers");
        let q_s = frame::core_flip(v, &vop, v.base().src(g)).expect("unit fibers");
        let bt1 = frame::bt(v, &f1).expect("valid");
        let bs1 = frame::bs(v, &f1).expect("valid");
        let tb = frame::tframe_bs(v, &vop, &t1).expect("valid");
        let tt = frame::tframe_bt(v, &vop, &t1).expect("valid");
        let base_ok = tb.base_frame == bt1.base_frame
            && tb.core_frame == q_t.mul(&bt1.core_frame).expect("shapes")
            && tt.base_frame == bs1.base_frame
            && tt.core_frame == q_s.mul(&bs1.core_frame).expect("shapes");
        if base_ok {
            report.pass("psi_base_pairs", trial);
        } else {
            report.fail("psi_base_pairs", trial, "tframe base pairs differ from the flipped s-frame data");
        }
        let x = v.base().src(g);
        let p = frame::random_basepair(v, x, &mut rng);
        let q_x = frame::core_flip(v, &vop, x).expect("unit fibers");
        let p_op = BasePair { object: x, core_frame: q_x.mul(&p.core_frame).expect("shapes"), base_frame: p.base_frame.clone() };
        let psi_bu = frame::psi(v, &frame::bu(v, &p).expect("valid")).expect("t-membership");
        match frame::tframe_bu(v, &vop, &p_op) {
            Ok(u) if u == psi_bu => report.pass("psi_bu", trial),
            other => report.fail("psi_bu", trial, format!("{other:?}")),
        }
        // Ψ preserves the moment.
        let d1 = frame::dphi(v, &f1).expect("valid");
        match frame::tframe_moment(v, &vop, &t1) {
            Ok(m) if m == d1 => report.pass("psi_moment", trial),
            other => report.fail("psi_moment", trial, format!("{other:?}")),
        }
        // Ψ equivariance: ψ(f · e) = ψ(f) ⋆ e.
        let e = gl2::random_element_at(&mut rng, &d1);
        let lhs = frame::psi(v, &act2(v, &f1, &e).expect("moment matches")).expect("t-membership");
        match act2_t(v, &t1, &e) {
            Ok(r) if r == lhs => report.pass("psi_equivariance", trial),
            other => report.fail("psi_equivariance", trial, format!("{other:?}")),
        }

        // Dual frames land in t-bisection frames of the dual.
        let df1 = match frame::dual_frame(v, &vd, &f1) {
            Ok(t) => t,
            Err(err) => {
                report.fail("dual_membership", trial, format!("{err}"));
                continue;
            }
        };
        let df2 = frame::dual_frame(v, &vd, &f2).expect("t-membership");
        report.pass("dual_membership", trial);
        // The dual-frame map intertwines the structure maps (same order).
        let dual_bm = frame::dual_frame(v, &vd, &prod).expect("t-membership");
        match frame::tframe_bm(&vd, &vdop, &df1, &df2) {
            Ok(p) if p == dual_bm => report.pass("dual_bm", trial),
            other => report.fail("dual_bm", trial, format!("{other:?}")),
        }
        let dual_bi = frame::dual_frame(v, &vd, &frame::bi(v, &f1).expect("valid")).expect("t-membership");
        match frame::tframe_bi(&vd, &vdop, &df1) {
            Ok(p) if p == dual_bi => report.pass("dual_bi", trial),
            other => report.fail("dual_bi", trial, format!("{other:?}")),
        }
        // The dual of a unit frame is a unit t-frame.
        let du = frame::dual_frame(v, &vd, &frame::bu(v, &p).expect("valid")).expect("t-membership");
        let du_base = frame::tframe_bs(&vd, &vdop, &du).expect("valid");
        match frame::tframe_bu(&vd, &vdop, &du_base) {
            Ok(u) if u == du => report.pass("dual_bu", trial),
            other => report.fail("dual_bu", trial, format!("{other:?}")),
        }
        // The source and target data of a dual frame depend only on the
        // source and target data of the original, through the same transform
        // that unit frames undergo.
        let via_bs_unit = frame::dual_frame(v, &vd, &frame::bu(v, &bs1).expect("valid")).expect("t-membership");
        let bs_ok = frame::tframe_bs(&vd, &vdop, &df1).expect("valid")
            == frame::tframe_bs(&vd, &vdop, &via_bs_unit).expect("valid");
        if bs_ok {
            report.pass("dual_bs", trial);
        } else {
            report.fail("dual_bs", trial, "source data of the dual frame is not induced by bs");
        }
        let via_bt_unit = frame::dual_frame(v, &vd, &frame::bu(v, &bt1).expect("valid")).expect("t-membership");
        let bt_ok = frame::tframe_bt(&vd, &vdop, &df1).expect("valid")
            == frame::tframe_bt(&vd, &vdop, &via_bt_unit).expect("valid");
        if bt_ok {
            report.pass("dual_bt", trial);
        } else {
            report.fail("dual_bt", trial, "target data of the dual frame is not induced by bt");
        }
        // Dual equivariance through the inverse transpose.
        let lhs = frame::dual_frame(v, &vd, &act2(v, &f1, &e).expect("moment matches")).expect("t-membership");
        match act2_t(&vd, &df1, &e.inv_transpose()) {
            Ok(r) if r == lhs => report.pass("dual_equivariance", trial),
            other => report.fail("dual_equivariance", trial, format!("{other:?}")),
        }
    }
    report.merge(double_dual_identification(v, instance));
    report
}

/// Structure matrices of the double dual match those of the original under
/// the canonical double-dual identification of each fiber.
pub fn double_dual_identification(v: &VBGroupoid, instance: &str) -> Report {
    let mut report = Report::new("double_dual", instance, 0);
    let dd = match v.dual().and_then(|d| d.dual()) {
        Ok(dd) => dd,
        Err(e) => {
            report.fail("double_dual_builds", 0, format!("{e}"));
            return report;
        }
    };
    if (dd.core_rank(), dd.base_rank()) != (v.core_rank(), v.base_rank()) {
        report.fail("double_dual_rank", 0, "rank does not return to the original");
        return report;
    }
    // Identify object fibers through the unit sections: Q_x = S''_(1_x) U_x.
    let mut q = Vec::new();
    for x in 0..v.base().object_count() {
        let ux = v.base().unit_arrow(x);
        let qx = dd.src_map(ux).mul(v.unit_map(x)).expect("shapes");
        if !qx.is_invertible() {
            report.fail("double_dual_object_identification", x as u64, format!("{qx}"));
            return report;
        }
        q.push(qx);
    }
    let mut ok = true;
    for g in 0..v.base().arrow_count() {
        let (x, y) = (v.base().src(g), v.base().tgt(g));
        ok &= dd.src_map(g) == &q[x].mul(v.src_map(g)).expect("shapes");
        ok &= dd.tgt_map(g) == &q[y].mul(v.tgt_map(g)).expect("shapes");
        ok &= dd.inv_map(g) == v.inv_map(g);
    }
    for (x, qx) in q.iter().enumerate() {
        ok &= &dd.unit_map(x).mul(qx).expect("shapes") == v.unit_map(x);
    }
    for (&(g, h), m) in v.mul_table() {
        let w = v.fibered_pair_basis(g, h);
        ok &= dd.mul_table()[&(g, h)].mul(&w).expect("shapes") == m.mul(&w).expect("shapes");
    }
    if ok {
        report.pass("double_dual_structure_matrices", 0);
    } else {
        report.fail("double_dual_structure_matrices", 0, "a structure matrix differs under the identification");
    }
    report
}

/// Both crossed-module identities of the isotropy of `GL(l,k)` at `points`
/// random base points, on `samples` random pairs each.
pub fn crossed_module_laws(l: usize, k: usize, points: u64, samples: u64, seed: u64) -> Report {
    let mut report = Report::new("crossed_module_laws", format!("GL({l},{k})"), seed);
    let mut rng = SplitMix64::new(seed);
    for point in 0..points {
        let d = rng.next_mat(k, l);
        let cm = IsotropyCrossedModule::new(d.clone());
        let sample_j = |rng: &mut SplitMix64| loop {
            let j = rng.next_mat(l, k);
            if cm.contains(&j).expect("shapes") {
                return j;
            }
        };
        // One-cells fixing d, sampled as boundaries of H composed with
        // (A, B)-pairs commuting with d when available; boundaries always fix
        // d, so products of boundaries do too.
        let sample_f = |rng: &mut SplitMix64| {
            let j1 = sample_j(rng);
            let j2 = sample_j(rng);
            cm.boundary(&j1)
                .expect("member")
                .compose(&cm.boundary(&j2).expect("member"))
                .expect("isotropy one-cells compose")
        };
        for s in 0..samples {
            let trial = point * samples + s;
            let j = sample_j(&mut rng);
            let j2 = sample_j(&mut rng);
            let f = sample_f(&mut rng);
            let equivariance = cm.boundary(&cm.conjugate(&f, &j).expect("isotropy")).expect("member");
            let expected = f
                .compose(&cm.boundary(&j).expect("member"))
                .and_then(|p| p.compose(&f.inverse()))
                .expect("isotropy one-cells compose");
            if equivariance == expected {
                report.pass("boundary_equivariance", trial);
            } else {
                report.fail("boundary_equivariance", trial, format!("d = {d}, J = {j}"));
            }
            let peiffer_l = cm.conjugate(&cm.boundary(&j).expect("member"), &j2).expect("isotropy");
            let peiffer_r = cm
                .mul(&cm.mul(&j, &j2).expect("members"), &cm.inverse(&j).expect("member"))
                .expect("members");
            if peiffer_l == peiffer_r {
                report.pass("peiffer_identity", trial);
            } else {
                report.fail("peiffer_identity", trial, format!("d = {d}, J = {j}, J' = {j2}"));
            }
        }
    }
    report
}

/// A frame sanity suite for sampled bundles: every stored frame passes the
/// membership test and sampling is reproducible for the stored seed.
pub fn sample_integrity(v: &VBGroupoid, instance: &str, sp: &action::SampledPB) -> Report {
    let mut report = Report::new("sample_integrity", instance, sp.seed);
    let mut trial = 0;
    for frames_at_g in &sp.frames {
        for f in frames_at_g {
            match frame::is_sbis(v, f.arrow, &f.phi) {
                Ok(true) => report.pass("sampled_frame_membership", trial),
                other => report.fail("sampled_frame_membership", trial, format!("{other:?}")),
            }
            trial += 1;
        }
    }
    if sp.frames.iter().all(|fs| fs.is_empty()) {
        report.warn("empty frame sample: suites over this sample pass vacuously");
    }
    report
}

/// The named example instances used by the acceptance checks: the sampled
/// model VB-groupoids, the action-groupoid constructions over the pair
/// groupoid, the pullback, and the duals of all of these.
pub fn standard_instances() -> Vec<(String, VBGroupoid)> {
    use crate::groupoid::FiniteGroupoid;
    use crate::linalg::ratio;
    use alloc::string::ToString;
    use alloc::vec;

    let mut out: Vec<(String, VBGroupoid)> = Vec::new();
    out.push((
        "canonical_1_1".to_string(),
        VBGroupoid::canonical(1, 1, vec![Mat::zeros(1, 1), Mat::identity(1)]).unwrap(),
    ));
    out.push((
        "canonical_2_3".to_string(),
        VBGroupoid::canonical(
            2,
            3,
            vec![
                Mat::from_int_rows(&[&[1, 0], &[0, 2], &[1, 1]]),
                Mat::zeros(3, 2),
                Mat::from_int_rows(&[&[1, -1], &[2, 1], &[0, 3]]),
            ],
        )
        .unwrap(),
    ));
    let pair2 = FiniteGroupoid::pair(2).unwrap();
    let mut rep = vec![Mat::identity(1); 4];
    rep[pair2.arrow_index("(2,1)").unwrap()] = Mat::from_int_rows(&[&[2]]);
    rep[pair2.arrow_index("(1,2)").unwrap()] = Mat::from_rows(vec![vec![ratio(1, 2)]]);
    out.push(("trivcore_pair2".to_string(), VBGroupoid::trivial_core(pair2.clone(), rep.clone()).unwrap()));
    out.push(("trivbase_pair2".to_string(), VBGroupoid::trivial_base(pair2.clone(), rep).unwrap()));
    out.push(("pullback_pair2".to_string(), VBGroupoid::pullback(pair2, 1).unwrap()));

    let duals: Vec<(String, VBGroupoid)> = out
        .iter()
        .map(|(name, v)| (format!("dual_of_{name}"), v.dual().expect("examples validate")))
        .collect();
    out.extend(duals);
    out
}
