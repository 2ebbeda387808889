//! Round trips and constructor checks of the spec file format, exercised
//! in-process through the library modules.

use std::path::Path;

use grpd_cli::spec;

use grpd_core::linalg::Mat;
use grpd_core::suite;
use grpd_core::vbg::VBGroupoid;

fn fixture(name: &str) -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

#[test]
fn bundled_fixtures_build_the_expected_instances() {
    let (name, v) = spec::load(&fixture("canonical_1_1.vbg")).unwrap();
    assert_eq!(name, "canonical_1_1");
    assert_eq!(v, VBGroupoid::canonical(1, 1, vec![Mat::zeros(1, 1), Mat::identity(1)]).unwrap());

    let (_, tc) = spec::load(&fixture("trivcore_pair2.vbg")).unwrap();
    let expected = suite::standard_instances()
        .into_iter()
        .find(|(n, _)| n == "trivcore_pair2")
        .unwrap()
        .1;
    assert_eq!(tc, expected);
}

#[test]
fn corrupted_fixture_is_a_validation_error_naming_the_arrow() {
    match spec::load(&fixture("corrupted.vbg")) {
        Err(spec::SpecError::Validation(vs)) => {
            assert!(vs.iter().any(|v| v.law == "inv_invertible" && v.location.contains("d0")));
        }
        other => panic!("expected a validation error, got {other:?}"),
    }
}

#[test]
fn save_load_round_trip_reproduces_equal_instances() {
    let dir = tempfile::tempdir().unwrap();
    for (name, v) in suite::standard_instances() {
        let path = dir.path().join(format!("{name}.vbg"));
        spec::save(&v, &name, &path).unwrap();
        let (back_name, back) = spec::load(&path).unwrap();
        assert_eq!(back_name, name);
        assert_eq!(back, v, "{name} did not survive the round trip");
    }
}

#[test]
fn dual_constructor_matches_in_memory_dual() {
    let text = r#"{
      "format_version": 1,
      "name": "dual_canonical",
      "constructor": {
        "kind": "dual",
        "of": {
          "format_version": 1,
          "name": "inner",
          "constructor": { "kind": "canonical", "l": 1, "k": 1, "samples": [[["1"]]] }
        }
      }
    }"#;
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dual.vbg");
    std::fs::write(&path, text).unwrap();
    let (_, v) = spec::load(&path).unwrap();
    let expected = VBGroupoid::canonical(1, 1, vec![Mat::identity(1)]).unwrap().dual().unwrap();
    assert_eq!(v, expected);
}

#[test]
fn from_anchored_constructor_round_trip() {
    let text = r#"{
      "format_version": 1,
      "name": "anchored",
      "constructor": {
        "kind": "from_anchored",
        "points": ["p", "q"],
        "deltas": [[["1", "2"]], [["0", "-1/3"]]]
      }
    }"#;
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("anchored.vbg");
    std::fs::write(&path, text).unwrap();
    let (_, v) = spec::load(&path).unwrap();
    assert_eq!((v.core_rank(), v.base_rank()), (2, 1));
    let back = v.to_anchored().unwrap();
    assert_eq!(back.points, vec!["p".to_string(), "q".to_string()]);
    assert_eq!(back.deltas[0], Mat::from_int_rows(&[&[1, 2]]));
}

#[test]
fn parse_errors_carry_positions() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.vbg");
    std::fs::write(&path, "{ not json").unwrap();
    match spec::load(&path) {
        Err(spec::SpecError::Parse(msg)) => assert!(msg.contains("line "), "{msg}"),
        other => panic!("expected a parse error, got {other:?}"),
    }
}
