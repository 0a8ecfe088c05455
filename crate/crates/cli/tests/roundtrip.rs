//! Round-trip invariant: parsing a serialized instance yields the same
//! membership function and the same objective values over the box.

use jumpsys_cli::gen::{box_instance, filtered_instance, graph_instance, ObjectiveKind};
use jumpsys_cli::instance::{instance_digest, load_instance, LoadedInstance};
use jumpsys_cli::schema::InstanceDoc;
use jumpsys_core::jump_system::JumpSystem;

fn reload(doc: &InstanceDoc) -> LoadedInstance {
    let text = serde_json::to_string_pretty(doc).unwrap();
    load_instance(&text).unwrap()
}

fn assert_semantically_equal(doc: &InstanceDoc) {
    let first = reload(doc);
    let text = serde_json::to_string(doc).unwrap();
    let second = load_instance(&text).unwrap();
    match (&first, &second) {
        (LoadedInstance::Jsc(a), LoadedInstance::Jsc(b)) => {
            assert_eq!(a.system.points(), b.system.points());
            for p in a.system.points() {
                assert!(b.system.contains(p).unwrap());
                assert_eq!(
                    a.objective.eval(p).unwrap(),
                    b.objective.eval(p).unwrap(),
                    "objective differs at {p}"
                );
            }
            assert_eq!(a.digest, b.digest);
        }
        (LoadedInstance::Dm(a), LoadedInstance::Dm(b)) => {
            assert_eq!(a.matroid.family(), b.matroid.family());
            assert_eq!(a.weights, b.weights);
            assert_eq!(a.digest, b.digest);
        }
        _ => panic!("instance kind changed across the round trip"),
    }
}

#[test]
fn generated_instances_round_trip() {
    for seed in 0..5u64 {
        for kind in [
            ObjectiveKind::Linear,
            ObjectiveKind::Quadratic,
            ObjectiveKind::Table,
        ] {
            assert_semantically_equal(&box_instance(2, 2, kind, seed).unwrap());
            assert_semantically_equal(&graph_instance(3, 4, kind, seed, 2).unwrap());
            assert_semantically_equal(&filtered_instance(2, 3, 5, kind, seed).unwrap());
        }
    }
}

#[test]
fn digest_ignores_number_spelling() {
    let a = r#"{"format_version":1,"jump_system":{"type":"explicit","points":[[0],[1]]},
                "objective":{"constant":6,"terms":[{"type":"linear","slope":-2}]}}"#;
    let b = r#"{"format_version":1,"jump_system":{"type":"explicit","points":[[0],[1]]},
                "objective":{"constant":"6","terms":[{"type":"linear","slope":"-2.0"}]}}"#;
    let doc_a: InstanceDoc = serde_json::from_str(a).unwrap();
    let doc_b: InstanceDoc = serde_json::from_str(b).unwrap();
    assert_eq!(
        instance_digest(&doc_a).unwrap(),
        instance_digest(&doc_b).unwrap()
    );
}
