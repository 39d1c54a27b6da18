use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn schema(name: &str) -> jsonschema::Validator {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../schemas")
        .join(name);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).unwrap()
}

fn run(args: &[&str]) -> Value {
    let out = Command::new(env!("CARGO_BIN_EXE_vwave")).args(args).output().unwrap();
    serde_json::from_slice(&out.stdout).unwrap()
}

fn assert_valid(validator: &jsonschema::Validator, doc: &Value) {
    let errors: Vec<String> = validator.iter_errors(doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:#?}");
}

#[test]
fn every_json_output_matches_its_schema() {
    let cases: [(&str, &[&str]); 6] = [
        ("state.schema.json", &["state", "--z", "2", "--n", "3"]),
        ("free.schema.json", &["free", "--v", "0.5", "--mass", "2"]),
        (
            "wave.schema.json",
            &["wave", "--z", "1", "--n", "2", "--samples", "200", "--format", "json"],
        ),
        (
            "nodes.schema.json",
            &["nodes", "--z", "1", "--n", "3", "--format", "json"],
        ),
        (
            "superpose.schema.json",
            &["superpose", "--z", "1", "--time-steps", "4", "--format", "json"],
        ),
        (
            "verify.schema.json",
            &["verify", "--z", "1", "--n-max", "1", "--format", "json"],
        ),
    ];
    for (name, args) in cases {
        assert_valid(&schema(name), &run(args));
    }
}

#[test]
fn schemas_reject_malformed_documents() {
    let nodes = schema("nodes.schema.json");
    let mut doc = run(&["nodes", "--z", "1", "--n", "1", "--format", "json"]);
    doc["nodes"][0]["kind"] = Value::from("saddle");
    assert!(!nodes.is_valid(&doc));

    let state = schema("state.schema.json");
    let mut doc = run(&["state", "--z", "1", "--n", "1"]);
    doc.as_object_mut().unwrap().remove("r_o");
    assert!(!state.is_valid(&doc));
}
