use std::path::PathBuf;

use htforget::properties::{expected_satisfied, read_witness, replay, witness_dirs};

fn shipped() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/witnesses")
}

#[test]
fn shipped_witnesses_replay() {
    let dirs = witness_dirs(&shipped()).unwrap();
    assert_eq!(dirs.len(), 16);
    for dir in dirs {
        let w = read_witness(&dir).unwrap();
        assert!(!expected_satisfied(w.property, w.kind), "{} refutes an expected cell", dir.display());
        assert!(replay(&w).unwrap(), "{} no longer fails", dir.display());
        let name = dir.file_name().unwrap().to_string_lossy().into_owned();
        assert_eq!(name, format!("{}-{}", w.property.name().to_lowercase(), w.kind.name()));
    }
}

#[test]
fn every_expected_violation_has_a_witness() {
    use htforget::properties::Property;
    use htforget::OperatorKind;
    for property in Property::ALL {
        for kind in OperatorKind::MODEL_BASED {
            if expected_satisfied(property, kind) {
                continue;
            }
            let dir = shipped().join(format!("{}-{}", property.name().to_lowercase(), kind.name()));
            assert!(dir.is_dir(), "missing witness {}", dir.display());
        }
    }
}
