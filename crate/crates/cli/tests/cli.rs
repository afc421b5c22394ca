//! End-to-end tests of the gamma4 binary: output shapes, schema conformance,
//! determinism, and the exit-code contract.

use serde_json::Value;
use std::process::{Command, Output};

fn gamma4(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gamma4"))
        .args(args)
        .env_remove("GAMMA4_CACHE_DIR")
        .env_remove("GAMMA4_JOBS")
        .env_remove("GAMMA4_TIMINGS")
        .output()
        .expect("binary runs")
}

fn stdout_json(args: &[&str]) -> Value {
    let out = gamma4(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn fixture_path() -> String {
    format!("{}/../../fixtures/figure8.cfk", env!("CARGO_MANIFEST_DIR"))
}

// --- minimal JSON-schema checker covering the subset the shipped schema uses

fn type_matches(instance: &Value, ty: &str) -> bool {
    match ty {
        "object" => instance.is_object(),
        "array" => instance.is_array(),
        "string" => instance.is_string(),
        "integer" => instance.is_i64() || instance.is_u64(),
        "number" => instance.is_number(),
        "boolean" => instance.is_boolean(),
        "null" => instance.is_null(),
        _ => false,
    }
}

fn validate(instance: &Value, schema: &Value, path: &str) {
    if let Some(types) = schema.get("type") {
        let allowed: Vec<String> = match types {
            Value::String(s) => vec![s.clone()],
            Value::Array(a) => a.iter().map(|s| s.as_str().unwrap().to_string()).collect(),
            _ => panic!("bad schema type at {path}"),
        };
        assert!(
            allowed.iter().any(|t| type_matches(instance, t)),
            "{path}: {instance} is none of {allowed:?}"
        );
        if instance.is_null() && allowed.iter().any(|t| t == "null") {
            return;
        }
    }
    if let Some(e) = schema.get("enum") {
        assert!(
            e.as_array().unwrap().contains(instance),
            "{path}: {instance} not in enum {e}"
        );
    }
    if let (Some(required), Some(obj)) = (schema.get("required"), instance.as_object()) {
        for key in required.as_array().unwrap() {
            let key = key.as_str().unwrap();
            assert!(obj.contains_key(key), "{path}: missing required key {key}");
        }
    }
    if let (Some(props), Some(obj)) = (schema.get("properties"), instance.as_object()) {
        for (key, sub) in props.as_object().unwrap() {
            if let Some(v) = obj.get(key) {
                validate(v, sub, &format!("{path}/{key}"));
            }
        }
    }
    if let (Some(items), Some(arr)) = (schema.get("items"), instance.as_array()) {
        for (i, v) in arr.iter().enumerate() {
            validate(v, items, &format!("{path}[{i}]"));
        }
    }
}

#[test]
fn invariants_t49_match_closed_forms_and_schema() {
    let record = stdout_json(&["invariants", "4", "9"]);
    assert_eq!(record["invariants"]["signature"], -16);
    assert_eq!(record["invariants"]["upsilon"], -8);
    assert_eq!(record["invariants"]["theta"], 2);
    assert_eq!(record["invariants"]["stretch"], Value::Null);
    assert_eq!(record["bounds"]["smooth"]["lo"], 1);
    assert_eq!(record["bounds"]["smooth"]["hi"], 1);

    let schema: Value = serde_json::from_str(include_str!("../schema/record.schema.json")).unwrap();
    validate(&record, &schema, "record");
}

#[test]
fn invariants_t35_alexander_coefficient_map() {
    let record = stdout_json(&["invariants", "3", "5"]);
    let alex = record["invariants"]["alexander"].as_object().unwrap();
    let expected = [
        ("-4", 1i64),
        ("-3", -1),
        ("-1", 1),
        ("0", -1),
        ("1", 1),
        ("3", -1),
        ("4", 1),
    ];
    assert_eq!(alex.len(), expected.len());
    for (k, v) in expected {
        assert_eq!(alex[k], v, "coefficient of t^{k}");
    }
    // both parameters odd: no linking form block
    assert_eq!(record["invariants"]["linking_form"], Value::Null);
}

#[test]
fn non_coprime_input_is_a_structured_validation_error() {
    let out = gamma4(&["invariants", "4", "6", "--format", "json"]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(err["kind"], "validation");
    assert!(err["error"].as_str().unwrap().contains("not a knot"));
}

#[test]
fn factorization_ceiling_exits_3() {
    let out = gamma4(&["obstruct-top", "4", "1000003", "--max-factor-digits", "5"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn odd_odd_linking_form_is_validation_error() {
    let out = gamma4(&["linking-form", "3", "5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bounds_t47_exact_two() {
    let v = stdout_json(&["bounds", "4", "7"]);
    assert_eq!(v["smooth"]["lo"], 2);
    assert_eq!(v["smooth"]["hi"], 2);
    assert_eq!(v["smooth"]["exact"], true);
}

#[test]
fn pinch_t49_lists_two_steps() {
    let v = stdout_json(&["pinch", "4", "9"]);
    assert_eq!(v["theta"], 2);
    let steps = v["steps"].as_array().unwrap();
    assert_eq!(steps.len(), 2);
    assert_eq!(steps[0]["to"], "T(2,5)");
    assert_eq!(steps[1]["to"], "unknot");
}

#[test]
fn linking_form_t45() {
    let v = stdout_json(&["linking-form", "4", "5"]);
    assert_eq!(v["value"], "3/5");
    assert_eq!(v["group_order"], 5);
    assert_eq!(v["matrix_verified"], true);
}

#[test]
fn obstruct_top_verdicts() {
    assert_eq!(
        stdout_json(&["obstruct-top", "4", "35"])["verdict"],
        "obstructed"
    );
    assert_eq!(
        stdout_json(&["obstruct-top", "4", "25"])["verdict"],
        "not_obstructed_by_this_test"
    );
    assert_eq!(
        stdout_json(&["obstruct-top", "3", "5"])["verdict"],
        "inapplicable"
    );
}

#[test]
fn floer_fixture_reproduces_figure_eight() {
    let v = stdout_json(&["floer", &fixture_path()]);
    assert_eq!(v["upsilon"], 0);
    assert_eq!(v["upsilon_bar"], 1);
    assert_eq!(v["upsilon_underbar"], -1);
}

#[test]
fn floer_missing_file_is_validation_error() {
    let out = gamma4(&["floer", "/nonexistent/path.cfk"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn density_csv_row_has_documented_columns() {
    let out = gamma4(&["density", "4", "1000", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "p,N,eligible,obstructed,ratio_num,ratio_den,mertens_num,mertens_den"
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0], "4");
    assert_eq!(row[1], "1000");
    assert_eq!(row[2], "500");
    assert_eq!(row[3], "201");
}

#[test]
fn table_csv_emits_fixed_header_and_rows_in_order() {
    let out = gamma4(&["table", "p=4 q=5..13 odd", "--format", "csv", "--jobs", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("p,q,signature,arf,determinant,genus,theta,stretch"));
    let qs: Vec<&str> = lines[1..]
        .iter()
        .map(|l| l.split(',').nth(1).unwrap())
        .collect();
    assert_eq!(qs, vec!["5", "7", "9", "11", "13"]);
    // T(4,5) row: signature -8, exact smooth [2,2]
    let row5: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(row5[2], "-8");
    assert_eq!((row5[11], row5[12]), ("2", "2"));
}

#[test]
fn identical_invocations_are_bit_identical() {
    let a = gamma4(&["invariants", "6", "7", "--format", "json"]);
    let b = gamma4(&["invariants", "6", "7", "--format", "json"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = gamma4(&["table", "p=5 q=6..16", "--format", "csv", "--jobs", "3"]);
    let d = gamma4(&["table", "p=5 q=6..16", "--format", "csv", "--jobs", "1"]);
    assert_eq!(c.stdout, d.stdout);
}

#[test]
fn cache_roundtrip_preserves_output() {
    let dir = tempfile::tempdir().unwrap();
    let run = |_label: &str| {
        Command::new(env!("CARGO_BIN_EXE_gamma4"))
            .args(["invariants", "4", "11", "--format", "json"])
            .env("GAMMA4_CACHE_DIR", dir.path())
            .output()
            .unwrap()
    };
    let cold = run("cold");
    assert!(cold.status.success());
    assert!(
        dir.path().join("gamma4-cache.json").exists(),
        "cache file written"
    );
    let warm = run("warm");
    assert_eq!(cold.stdout, warm.stdout);
    // and --no-cache must agree too
    let nocache = Command::new(env!("CARGO_BIN_EXE_gamma4"))
        .args(["invariants", "4", "11", "--format", "json", "--no-cache"])
        .env("GAMMA4_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(cold.stdout, nocache.stdout);
}

#[test]
fn skip_flags_null_out_blocks() {
    let v = stdout_json(&["invariants", "4", "7", "--skip-floer", "--skip-linkform"]);
    assert_eq!(v["invariants"]["upsilon"], Value::Null);
    assert_eq!(v["invariants"]["linking_form"], Value::Null);
    assert_eq!(v["diagnostics"]["floer_skipped"], true);
    // bounds stay sound without floer certificates
    assert!(v["bounds"]["smooth"]["lo"].as_u64().unwrap() >= 2); // stretch still fires
}

#[test]
fn acceptance_11_property_suites_and_selftest() {
    let out = gamma4(&["selftest"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(
        out.status.success(),
        "selftest must exit 0, output:\n{text}"
    );
    assert!(
        text.lines().all(|l| l.is_empty() || l.starts_with("ok")),
        "{text}"
    );
    println!("ACCEPTANCE 11 (property suites as automated tests; selftest exits 0): PASS");
}
