use std::path::PathBuf;
use std::process::{Command, Output};

use proptest::prelude::*;

use polycoef::exactalg::{Integer, Rational};
use polycoef_cli::spec::{export, load, parse_spec, same_representation, Loaded};
use polycoef_cli::suite::{run_suite, Suite, SuiteConfig};
use polycoef_cli::CliError;

const TH2: &str = r#"{
  "category": { "kind": "subsets", "max": 5 },
  "functor": { "kind": "th", "h": 2 }
}"#;

const P1: &str = r#"{
  "category": { "kind": "fi_sharp", "max": 4 },
  "functor": { "kind": "representable", "object": 1 }
}"#;

fn loaded(text: &str) -> Loaded<Integer> {
    load("test.json", parse_spec("test.json", text).unwrap()).unwrap()
}

fn random_spec(kind: &str, max: usize, seed: u64) -> String {
    format!(
        r#"{{ "category": {{ "kind": "{kind}", "max": {max} }}, "functor": {{ "kind": "random", "seed": {seed} }} }}"#
    )
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("polycoef-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn polycoef(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polycoef"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn round_trip(text: &str) {
    let first = loaded(text);
    let t = first.functor().unwrap();
    let body = serde_json::to_string(&export(&first.file.category, t)).unwrap();
    let second = loaded(&body);
    assert!(same_representation(t, second.functor().unwrap()), "{body}");
}

#[test]
fn th_spec_builds_six_objects() {
    let l = loaded(TH2);
    assert_eq!(l.cat.object_count(), 6);
    let t = l.functor().unwrap();
    let ranks: Vec<usize> = (0..6)
        .map(|o| t.value(o).unwrap().invariants().free_rank)
        .collect();
    assert_eq!(ranks, [1, 2, 3, 5, 8, 12]);
}

#[test]
fn representable_spec_counts_partial_injections() {
    let l = loaded(P1);
    let t = l.functor().unwrap();
    let ranks: Vec<usize> = (0..5)
        .map(|o| t.value(o).unwrap().invariants().free_rank)
        .collect();
    assert_eq!(ranks, [1, 2, 3, 4, 5]);
}

#[test]
fn corrupted_matrix_names_the_object() {
    let l = loaded(&random_spec("fi_sharp", 3, 11));
    let mut v = serde_json::to_value(export(&l.file.category, l.functor().unwrap())).unwrap();
    let rel = &mut v["functor"]["values"][2]["relations"];
    rel.as_array_mut().unwrap().push(serde_json::json!([]));
    let err = load::<Integer>("bad.json", serde_json::from_value(v.clone()).unwrap())
        .err()
        .unwrap();
    let msg = err.to_string();
    assert!(
        msg.starts_with("bad.json: functor.values[2].relations: object 2"),
        "{msg}"
    );
    assert_eq!(err.exit_code(), 2);

    let path = scratch("bad.json", &v.to_string());
    let out = polycoef(&["degree", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("object 2"));
}

#[test]
fn syntax_errors_report_line_and_column() {
    let err = parse_spec("s.json", "{\n  \"category\": 3,\n}")
        .err()
        .unwrap();
    let msg = err.to_string();
    assert!(msg.starts_with("s.json: line 2, column"), "{msg}");
}

#[test]
fn unknown_fields_are_rejected() {
    let text = r#"{ "category": { "kind": "fi", "max": 2 }, "functr": null }"#;
    assert!(matches!(
        parse_spec("u.json", text),
        Err(CliError::Input { .. })
    ));
}

#[test]
fn non_functorial_maps_are_located() {
    let text = r#"{
      "category": { "kind": "subset_monoid", "n": 1 },
      "functor": {
        "kind": "explicit",
        "values": [ { "generators": 1, "relations": [] } ],
        "maps": [ { "source": 0, "target": 0, "payload": [], "matrix": [[2]] } ]
      }
    }"#;
    let err = load::<Integer>("f.json", parse_spec("f.json", text).unwrap())
        .err()
        .unwrap();
    assert!(err.to_string().starts_with("f.json: functor"), "{err}");
}

#[test]
fn export_round_trips() {
    round_trip(TH2);
    round_trip(P1);
    round_trip(&random_spec("pointed", 3, 4));
    round_trip(&random_spec("monotone", 4, 9));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn random_specs_round_trip(seed in any::<u64>(), kind in prop::sample::select(vec!["fi_sharp", "fi", "subsets"])) {
        round_trip(&random_spec(kind, 3, seed));
    }
}

#[test]
fn rational_ring_agrees_on_free_functors() {
    let z = loaded(TH2);
    let q: Loaded<Rational> = load("q.json", parse_spec("q.json", TH2).unwrap()).unwrap();
    for o in 0..6 {
        assert_eq!(
            z.functor()
                .unwrap()
                .value(o)
                .unwrap()
                .invariants()
                .free_rank,
            q.functor()
                .unwrap()
                .value(o)
                .unwrap()
                .invariants()
                .free_rank
        );
    }
}

#[test]
fn height_command_reports_both_modes() {
    let path = scratch("th2.json", TH2);
    let p = path.to_str().unwrap();
    let i = polycoef(&["height", p]);
    assert!(i.status.success());
    assert!(
        stdout(&i).contains("height (mode I, flavor cr, window 5): 1"),
        "{}",
        stdout(&i)
    );
    let o = polycoef(&["--format", "json", "height", "--mode", "oplus", p]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["results"]["value"], 2);
    assert_eq!(v["passed"], true);
}

#[test]
fn json_output_is_byte_identical() {
    let path = scratch("random.json", &random_spec("fi_sharp", 4, 3));
    let p = path.to_str().unwrap();
    for args in [
        vec!["--format", "json", "degree", p],
        vec!["--format", "json", "cross-effect-functor", p],
        vec![
            "--format",
            "json",
            "--seed",
            "5",
            "verify",
            "--suite",
            "cross-effects",
            "--samples",
            "12",
        ],
    ] {
        let a = polycoef(&args);
        let b = polycoef(&args);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn seed_override_changes_the_digest() {
    let path = scratch("seeded.json", &random_spec("fi_sharp", 3, 3));
    let p = path.to_str().unwrap();
    let digest = |seed: &str| {
        let o = polycoef(&["--format", "json", "--seed", seed, "degree", p]);
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(v["seed"], seed.parse::<u64>().unwrap());
        v["inputs_digest"].as_str().unwrap().to_string()
    };
    assert_ne!(digest("1"), digest("2"));
}

#[test]
fn failed_checks_exit_with_one() {
    let path = scratch(
        "mono.json",
        r#"{ "category": { "kind": "monotone", "max": 3 } }"#,
    );
    let out = polycoef(&["check", "braidable", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("result: FAIL"));
}

#[test]
fn missing_files_exit_with_two() {
    let out = polycoef(&["height", "/nonexistent/spec.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn spec_can_come_from_stdin() {
    use std::io::Write;
    let mut child = Command::new(env!("CARGO_BIN_EXE_polycoef"))
        .args(["degree", "--variant", "deg", "-"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(P1.as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(stdout(&out).contains("deg = 1"), "{}", stdout(&out));
}

#[test]
fn small_suites_pass() {
    for suite in [
        Suite::ThHeights,
        Suite::CrossEffects,
        Suite::Degrees,
        Suite::Subobjects,
    ] {
        let config = SuiteConfig {
            samples: 6,
            max_n: if suite == Suite::ThHeights { 2 } else { 3 },
            seed: 17,
        };
        let report = run_suite::<Integer>(suite, config).unwrap();
        assert!(report.passed, "{suite}: {:?}", report.failures);
    }
}

#[test]
fn transport_failures_carry_the_module_seed() {
    let config = SuiteConfig {
        samples: 20,
        max_n: 2,
        seed: 0,
    };
    let report = run_suite::<Integer>(Suite::Induction, config).unwrap();
    let failure = report
        .failures
        .iter()
        .find(|f| f.check == "transported tensor")
        .expect("the trivial-type module breaks the transported isomorphism");
    assert!(failure.detail["module_seed"].is_u64());
}

#[test]
fn suite_names_parse() {
    for s in Suite::ALL {
        assert_eq!(s.name().parse::<Suite>().unwrap(), s);
    }
    assert!("nope".parse::<Suite>().is_err());
}
