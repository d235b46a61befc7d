use std::path::{Path, PathBuf};
use std::process::Command;

use nest_prohibitor::cli::{run, EXIT_CLOSED, EXIT_OPEN, EXIT_USAGE};
use serde_json::Value;

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("nest-prohibitor").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn load_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn validator(schema_file: &str) -> jsonschema::Validator {
    let dir = crate_dir().join("schemas");
    let common = load_json(&dir.join("common.schema.json"));
    let schema = load_json(&dir.join(schema_file));
    let registry = jsonschema::Registry::new()
        .add("https://nest-prohibitor.invalid/schemas/common.schema.json", common)
        .unwrap()
        .prepare()
        .unwrap();
    jsonschema::options()
        .with_registry(&registry)
        .build(&schema)
        .unwrap()
}

fn assert_valid(v: &jsonschema::Validator, doc: &Value) {
    let errors: Vec<String> = v.iter_errors(doc).map(|e| format!("{} at {}", e, e.instance_path())).collect();
    assert!(errors.is_empty(), "{errors:#?}");
}

#[test]
fn check_reports_valid_scheme() {
    let (code, out, _) = invoke(&["check", "<J + 1<2> + 1<2> + 1<20> + 1>"]);
    assert_eq!(code, EXIT_CLOSED);
    assert!(out.contains("valid: true"));
    assert!(out.contains("nests: 3"));
    assert!(out.contains("all-even: true"));
}

#[test]
fn check_malformed_input_reports_position() {
    let (code, _, err) = invoke(&["check", "<J + 1<2 + 1<2> + 1<20> + 1>"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("byte"), "{err}");
}

#[test]
fn check_wrong_oval_count_is_invariant_error() {
    let (code, _, err) = invoke(&["check", "<J + 1<2> + 1<2> + 1<20> + 3>"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("invariant"), "{err}");
    let (code, _, _) = invoke(&["check", "--lax", "<J + 1<2> + 1<2> + 1<20> + 3>"]);
    assert_eq!(code, EXIT_CLOSED);
}

#[test]
fn check_decides_a_candidate() {
    let scheme = "<J + 1<2> + 1<2> + 1<20> + 1>";
    let (code, out, _) = invoke(&["check", scheme, "--nest", "-:1:1:d", "--nest", "-:1:1:n", "--nest", "-:10:10:n"]);
    assert_eq!(code, EXIT_CLOSED);
    assert!(out.contains("outcome: eliminated"));
    let (code, _, err) = invoke(&["check", scheme, "--nest", "-:1:1:q", "--nest", "-:1:1:n", "--nest", "-:10:10:n"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("nest spec"));
    let (code, _, _) = invoke(&["check", scheme, "--nest", "-:1:1:n"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn enumerate_counts() {
    let last = |args: &[&str]| invoke(args).1.lines().last().unwrap().to_string();
    assert_eq!(last(&["enumerate", "--even"]), "total: 53");
    assert_eq!(last(&["enumerate", "--even", "--beta", "1"]), "total: 12");
    let (_, out, _) = invoke(&["enumerate", "--even"]);
    assert!(out.lines().next().unwrap().starts_with("<J + 1<2> + 1<2> + 1<2>"));
}

#[test]
fn tables_match_golden_files() {
    for f in 16..=22 {
        for (format, ext) in [("text", "txt"), ("tsv", "tsv")] {
            let (code, out, _) = invoke(&["tables", "--figure", &f.to_string(), "--format", format]);
            assert_eq!(code, EXIT_CLOSED);
            let golden = std::fs::read_to_string(crate_dir().join(format!("tests/golden/figure{f}.{ext}"))).unwrap();
            assert_eq!(out, golden, "figure {f} {format}");
        }
    }
}

#[test]
fn figure21_golden_holds_computed_value_and_annotation() {
    let golden = std::fs::read_to_string(crate_dir().join("tests/golden/figure21.tsv")).unwrap();
    let row: Vec<&str> = golden.lines().nth(4).unwrap().split('\t').collect();
    assert_eq!(row[..4], ["+", "+", "(+, +)", "-4"]);
    assert_eq!(row[4], "printed E0=-2");
}

#[test]
fn unknown_figure_is_usage_error() {
    let (code, _, err) = invoke(&["tables", "--figure", "15"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("unknown figure"));
}

#[test]
fn unknown_rule_is_usage_error() {
    let (code, _, _) = invoke(&["prove", "theorem1", "--ablate", "rule_nonsense"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn rules_list_names_every_rule() {
    let (code, out, _) = invoke(&["rules", "list"]);
    assert_eq!(code, EXIT_CLOSED);
    assert_eq!(out.lines().count(), 9);
    assert!(out.lines().next().unwrap().starts_with("rule_jump\tLemma 18"));
}

#[test]
fn proposition2_closes_and_matches_schema() {
    let path = std::env::temp_dir().join(format!("np-prop2-{}.json", std::process::id()));
    let (code, out, _) = invoke(&["prove", "proposition2", "--json", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_CLOSED);
    assert!(out.ends_with("closed: true\n"));
    assert_valid(&validator("proposition2_report.schema.json"), &load_json(&path));
    std::fs::remove_file(path).unwrap();
}

#[test]
fn theorem1_ablation_exit_codes_and_schema() {
    let v = validator("theorem1_report.schema.json");
    let path = std::env::temp_dir().join(format!("np-thm1-{}.json", std::process::id()));
    let (code, out, _) = invoke(&["prove", "theorem1", "--json", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_CLOSED);
    assert!(out.contains("excluded: 53 (41 new, 12 known)"));
    assert_valid(&v, &load_json(&path));

    let (code, out, _) = invoke(&["prove", "theorem1", "--ablate", "lambda0_bound", "--json", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OPEN);
    assert!(out.contains("open: <J + 1<2> + 1<2> + 1<2> + 19>"));
    let doc = load_json(&path);
    assert_valid(&v, &doc);
    assert_eq!(doc["ablated"], serde_json::json!(["rule_lambda0_bound"]));
    std::fs::remove_file(path).unwrap();
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_nest-prohibitor");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code();
    assert_eq!(status(&["prove", "proposition2"]), Some(EXIT_CLOSED));
    assert_eq!(status(&["check", "<J + 1<2>"]), Some(EXIT_USAGE));
    assert_eq!(status(&["frobnicate"]), Some(EXIT_USAGE));
    assert_eq!(status(&["--help"]), Some(EXIT_CLOSED));
}
