use hopfcalc_core::cube::CubeSpec;
use hopfcalc_core::galois::GaloisContext;
use hopfcalc_core::group::{GroupSpec, HomSpec};

#[test]
fn documented_group_specs_build() {
    let cases = [
        (r#"{"named": "C2xC4"}"#, 8),
        (r#"{"cyclic": 6}"#, 6),
        (r#"{"dihedral": 4}"#, 8),
        (r#""quaternion""#, 8),
        (r#"{"symmetric": 4}"#, 24),
        (
            r#"{"permutations": {"degree": 4, "generators": ["(1,2,3)", [2,3,4,1]]}}"#,
            24,
        ),
        (
            r#"{"table": {"table": [[0,1],[1,0]], "labels": ["e","a"]}}"#,
            2,
        ),
        (r#"{"product": [{"cyclic": 2}, {"cyclic": 4}]}"#, 8),
    ];
    for (text, order) in cases {
        let spec: GroupSpec = serde_json::from_str(text).unwrap();
        assert_eq!(spec.build().unwrap().order(), order, "{text}");
    }
}

#[test]
fn documented_square_is_a_double_extension() {
    let text = r#"{
      "n": 2,
      "objects": {"0": {"cyclic": 1}, "1": {"cyclic": 2}, "2": {"cyclic": 2}, "3": {"named": "V4"}},
      "faces": [
        {"from": 3, "drop": 0, "images": [0, 0, 1, 1]},
        {"from": 3, "drop": 1, "images": [0, 1, 0, 1]},
        {"from": 1, "drop": 0, "images": [0, 0]},
        {"from": 2, "drop": 1, "images": [0, 0]}
      ],
      "diagram": false
    }"#;
    let spec: CubeSpec = serde_json::from_str(text).unwrap();
    let cube = spec.build().unwrap();
    assert!(cube.is_n_extension());
    assert_eq!(CubeSpec::from_cube(&cube).build().unwrap(), cube);
}

#[test]
fn shipped_hom_files_parse() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/../cli/data/");
    let q8: HomSpec =
        serde_json::from_str(&std::fs::read_to_string(format!("{dir}q8_to_v4.json")).unwrap())
            .unwrap();
    let f = q8.build().unwrap();
    assert_eq!(
        (f.domain().order(), f.codomain().order(), f.kernel().order()),
        (8, 4, 2)
    );
    let id: HomSpec =
        serde_json::from_str(&std::fs::read_to_string(format!("{dir}id.json")).unwrap()).unwrap();
    let g = id.build().unwrap();
    assert!(g.is_isomorphism());
    assert!(GaloisContext::base().is_normal_ext(&g).unwrap());
    // the same map through quotient_by: -1 is element 1 of Q8
    let by: HomSpec =
        serde_json::from_str(r#"{"domain": "quaternion", "quotient_by": [1]}"#).unwrap();
    assert_eq!(by.build().unwrap().codomain().order(), 4);
}
