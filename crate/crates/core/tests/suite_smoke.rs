//! Small-count smoke runs of every verification suite over every bundled
//! instance. The acceptance suite runs the same checks at full size.

use grpd_core::action::{self, sample_frames};
use grpd_core::suite;

#[test]
fn validators_accept_all_standard_instances() {
    for (name, v) in suite::standard_instances() {
        let violations = v.validate();
        assert!(violations.is_empty(), "{name}: {violations:?}");
    }
}

#[test]
fn frame_groupoid_smoke() {
    for (name, v) in suite::standard_instances() {
        let r = suite::frame_groupoid_laws(&v, &name, 6, 101);
        assert!(r.all_passed(), "{name}: {:?}", r.failures().collect::<Vec<_>>());
    }
}

#[test]
fn coords_smoke() {
    for (name, v) in suite::standard_instances() {
        let r = suite::coords_laws(&v, &name, 6, 102);
        assert!(r.all_passed(), "{name}: {:?}", r.failures().collect::<Vec<_>>());
    }
}

#[test]
fn action_smoke() {
    for (name, v) in suite::standard_instances() {
        let r = action::verify_2action(&v, &name, 4, 103);
        assert!(r.all_passed(), "{name}: {:?}", r.failures().collect::<Vec<_>>());
        let r = action::principality_check(&v, &name, 4, 104);
        assert!(r.all_passed(), "{name}: {:?}", r.failures().collect::<Vec<_>>());
    }
}

#[test]
fn f_bijection_smoke() {
    for (name, v) in suite::standard_instances() {
        let r = suite::f_bijection_laws(&v, &name, 6, 105);
        assert!(r.all_passed(), "{name}: {:?}", r.failures().collect::<Vec<_>>());
    }
}

#[test]
fn duality_smoke() {
    for (name, v) in suite::standard_instances() {
        let r = suite::duality_laws(&v, &name, 4, 106);
        assert!(r.all_passed(), "{name}: {:?}", r.failures().collect::<Vec<_>>());
    }
}

#[test]
fn bundle_smoke() {
    for (name, v) in suite::standard_instances() {
        let sp = sample_frames(&v, 107, 2, 2);
        let r = suite::sample_integrity(&v, &name, &sp);
        assert!(r.all_passed(), "{name}: {:?}", r.failures().collect::<Vec<_>>());
        let r = action::associated_vb(&v, &name, &sp, 3, 108);
        assert!(r.all_passed(), "{name}: {:?}", r.failures().collect::<Vec<_>>());
        let r = action::roundtrip_frames(&v, &name, &sp, 109);
        assert!(r.all_passed(), "{name}: {:?}", r.failures().collect::<Vec<_>>());
    }
}

#[test]
fn gl2_smoke() {
    for (l, k) in [(1usize, 1usize), (2, 1), (1, 2)] {
        let r = suite::gl2_laws(l, k, 8, 110);
        assert!(r.all_passed(), "GL({l},{k}): {:?}", r.failures().collect::<Vec<_>>());
    }
    let r = suite::crossed_module_laws(2, 1, 2, 5, 111);
    assert!(r.all_passed(), "{:?}", r.failures().collect::<Vec<_>>());
}
