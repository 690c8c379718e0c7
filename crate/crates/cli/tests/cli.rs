use std::process::Command;

use serde_json::Value;

use entwit_cli::{run, RunOutput, EXIT_OK, EXIT_USAGE, EXIT_VERIFY_FAILED};

const LATTICE_5X5: &str = "0,0,0,1,1,2,2,0,1,1,2,2,0,1,1,2,2,2,2,2,2,2,2,2,2";

fn entwit(args: &[&str]) -> RunOutput {
    run(std::iter::once("entwit").chain(args.iter().copied()))
}

fn json_of(out: &RunOutput) -> Value {
    assert_eq!(out.code, EXIT_OK, "stderr: {}", out.stderr);
    serde_json::from_str(&out.stdout).expect("json output")
}

fn schema(name: &str) -> jsonschema::Validator {
    let path = format!("{}/schemas/{name}.schema.json", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(path).unwrap();
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).unwrap()
}

fn assert_valid(name: &str, v: &Value) {
    let s = schema(name);
    let errors: Vec<String> = s.iter_errors(v).map(|e| format!("{} at {}", e, e.instance_path())).collect();
    assert!(errors.is_empty(), "{name} schema: {errors:#?}");
}

fn text(v: &Value) -> &str {
    v["text"].as_str().unwrap()
}

#[test]
fn bounds_reproduce_constants() {
    let cases: &[(&[&str], &str, &str)] = &[
        (&["--graph", "chain:6", "--partition", "0,1,1,2,2,2"], "5/4", "3/2"),
        (&["--graph", "lattice:5x5", "--partition", LATTICE_5X5], "33/32", "17/16"),
        (&["--graph", "ring:5", "--partition", "0,1,1,2,2"], "9/4", "5/2"),
        (
            &[
                "--graph",
                "lattice:4x6",
                "--partition",
                "0,1,1,2,2,2,0,2,2,2,2,2,0,2,2,2,2,2,3,3,3,3,3,3",
                "--keep",
                "0,1,2",
            ],
            "9/8",
            "5/4",
        ),
    ];
    for (args, f, b) in cases {
        let mut all = vec!["bounds"];
        all.extend_from_slice(args);
        let v = json_of(&entwit(&all));
        assert_valid("bounds", &v);
        assert_eq!(text(&v["constants"]["fully_separable"]), *f);
        assert_eq!(text(&v["constants"]["genuine"]), *b);
    }
    let v = json_of(&entwit(&["bounds", "--graph", "ghz:5"]));
    assert_eq!(text(&v["constants"]["gme"]), "3/2");
    assert_valid("bounds", &v);
}

#[test]
fn bounds_m_and_csv() {
    let v = json_of(&entwit(&["bounds", "--graph", "ring:6", "--m", "3"]));
    assert_valid("bounds", &v);
    assert_eq!(v["c_m"]["method"], "exhaustive");
    assert_eq!(v["c_m"]["tightness"], "exact");
    let v = json_of(&entwit(&["bounds", "--graph", "lattice:6x7", "--m", "9"]));
    assert_eq!(v["c_m"]["tightness"], "unknown");

    let out = entwit(&["bounds", "--graph", "chain:6", "--partition", "0,1,1,2,2,2", "--m", "4", "--format", "csv"]);
    assert_eq!(out.code, EXIT_OK);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(lines[0], "quantity,num,den,text,decimal,entropy,p_limit,p_limit_decimal");
    let names: Vec<&str> = lines[1..].iter().map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(names, ["c_min", "c_max", "c_m", "fully_separable", "genuine", "m_separable", "gme"]);
    assert!(lines.contains(&"m_separable,5,4,5/4,1.25,,3/7,0.42857142857142855"));
}

#[test]
fn graph_and_partition_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.json");
    std::fs::write(&g, r#"{"n": 4, "edges": [[0,1],[1,2],[2,3],[3,0]]}"#).unwrap();
    let p = dir.path().join("p.json");
    std::fs::write(&p, r#"{"blocks": [[0,1],[2,3]]}"#).unwrap();
    let v = json_of(&entwit(&["bounds", "--graph", g.to_str().unwrap(), "--partition", p.to_str().unwrap()]));
    assert_eq!(v["n"], 4);
    assert_eq!(v["blocks"], 2);
    assert_eq!(text(&v["c_min"]), "1/4");
    let inline = json_of(&entwit(&["bounds", "--graph", r#"{"n":3,"edges":[[0,1],[1,2]]}"#]));
    assert_eq!(inline["n"], 3);
}

#[test]
fn simulate_examples() {
    let v = json_of(&entwit(&["simulate", "--graph", "chain:6", "--kind", "genuine", "--partition", "0,1,1,2,2,2"]));
    assert_valid("simulate", &v);
    assert_eq!(v["verdict"]["detected"], true);
    assert_eq!(v["verdict"]["value"], -0.5);

    let v = json_of(&entwit(&[
        "simulate", "--graph", "chain:6", "--kind", "genuine", "--partition", "0,1,1,2,2,2", "--noise", "0.5",
    ]));
    assert_eq!(v["verdict"]["detected"], false);

    let v = json_of(&entwit(&["simulate", "--graph", "star:10", "--kind", "gme", "--noise", "0.3", "--shots", "100000"]));
    assert_valid("simulate", &v);
    assert_eq!(text(&v["verdict"]["p_limit"]), "256/767");
    // p = 0.3 sits below p_limit ≈ 0.334
    assert_eq!(v["verdict"]["detected"], true);
    let v = json_of(&entwit(&["simulate", "--graph", "star:10", "--kind", "gme", "--noise", "0.36", "--shots", "100000"]));
    assert_eq!(v["verdict"]["detected"], false);

    let v = json_of(&entwit(&["simulate", "--graph", "lattice:10x10", "--kind", "m-separable", "--m", "4", "--shots", "500"]));
    assert_eq!(v["record"]["sampler"], "tableau");
    assert_eq!(v["verdict"]["detected"], true);

    let v = json_of(&entwit(&["simulate", "--graph", "chain:5", "--shots", "1", "--noise", "1/2"]));
    assert_valid("simulate", &v);
    for e in v["estimates"].as_array().unwrap() {
        assert!(e["value"] == 0.0 || e["value"] == 1.0);
    }
}

#[test]
fn simulate_subsystem_and_csv() {
    let part = "0,1,1,2,2,2,0,2,2,2,2,2,0,2,2,2,2,2,3,3,3,3,3,3";
    let v = json_of(&entwit(&[
        "simulate", "--graph", "lattice:4x6", "--kind", "genuine", "--partition", part, "--keep", "0,1,2", "--shots", "2000",
    ]));
    assert_valid("simulate", &v);
    assert_eq!(v["subsystem"]["kept_qubits"].as_array().unwrap().len(), 18);
    assert_eq!(text(&v["verdict"]["constant"]), "5/4");

    let out = entwit(&["simulate", "--graph", "ring:5", "--shots", "100", "--format", "csv"]);
    assert_eq!(out.code, EXIT_OK);
    let mut lines = out.stdout.lines();
    assert_eq!(
        lines.next().unwrap(),
        "setting,x_set,shots,hits,estimate,stderr,noise,seed,kind,witness_value,witness_stderr,detected"
    );
    assert_eq!(lines.count(), 3);
}

#[test]
fn byte_identical_with_fixed_seed() {
    let dir = tempfile::tempdir().unwrap();
    let runs: Vec<Vec<u8>> = (0..2)
        .map(|i| {
            let path = dir.path().join(format!("run{i}.json"));
            let out = entwit(&[
                "simulate", "--graph", "lattice:3x3", "--noise", "0.2", "--shots", "3000", "--seed", "42", "--out",
                path.to_str().unwrap(),
            ]);
            assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
            assert!(out.stdout.is_empty());
            std::fs::read(path).unwrap()
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
    let other = entwit(&["simulate", "--graph", "lattice:3x3", "--noise", "0.2", "--shots", "3000", "--seed", "43"]);
    assert_ne!(other.stdout.as_bytes(), &runs[0][..]);
    let a = entwit(&["intactness", "--graph", "chain:8", "--noise", "0.2", "--shots", "500", "--seed", "5"]);
    let b = entwit(&["intactness", "--graph", "chain:8", "--noise", "0.2", "--shots", "500", "--seed", "5"]);
    assert_eq!(a, b);
}

#[test]
fn verify_examples() {
    let v = json_of(&entwit(&["verify", "--graph", "chain:8"]));
    assert_valid("verify", &v);
    assert_eq!(v["passed"], true);
    let v = json_of(&entwit(&["verify", "--graph", "ring:5"]));
    assert_eq!(v["k"], 3);
    let prop2 = v["checks"].as_array().unwrap().iter().find(|c| c["name"] == "operator_inequality").unwrap();
    assert_eq!(prop2["status"], "pass");
    // neither a chain nor a lattice, and the smaller class is not maximal
    let v = json_of(&entwit(&["verify", "--graph", "lattice:3x4"]));
    assert_eq!(v["passed"], true);

    let bad = entwit(&["verify", "--graph", "chain:8", "--corrupt-constant"]);
    assert_eq!(bad.code, EXIT_VERIFY_FAILED);
    let v: Value = serde_json::from_str(&bad.stdout).unwrap();
    assert_valid("verify", &v);
    assert_eq!(v["passed"], false);
    assert_eq!(entwit(&["verify", "--graph", "chain:20"]).code, EXIT_USAGE);
}

#[test]
fn intactness_examples() {
    let v = json_of(&entwit(&["intactness", "--graph", "chain:10", "--noise", "0.1"]));
    assert_valid("intactness", &v);
    assert_eq!(v["mode"], "exact");
    assert_eq!(v["smallest_detected"], 2);
    let v = json_of(&entwit(&["intactness", "--graph", "chain:8", "--noise", "2/5"]));
    assert_eq!(v["smallest_detected"], 6);
    assert_eq!(v["intactness_at_most"], 5);
    let v = json_of(&entwit(&["intactness", "--graph", "chain:10", "--noise", "1"]));
    assert_eq!(v["smallest_detected"], Value::Null);
    assert_eq!(v["interpretation"], "no detection for any m");
    let v = json_of(&entwit(&["intactness", "--graph", "lattice:4x4", "--noise", "0.05", "--shots", "2000"]));
    assert_valid("intactness", &v);
    assert_eq!(v["mode"], "sampled");

    let out = entwit(&["intactness", "--graph", "chain:4", "--format", "csv"]);
    assert_eq!(
        out.stdout,
        "m,constant,constant_decimal,tightness,value,stderr,detected\n\
         2,3/2,1.5,tight,-0.5,0,true\n3,3/2,1.5,tight,-0.5,0,true\n4,5/4,1.25,tight,-0.75,0,true\n"
    );
    assert_eq!(entwit(&["intactness", "--graph", "ring:20"]).code, EXIT_USAGE);
}

#[test]
fn usage_errors_exit_2() {
    let bad: &[&[&str]] = &[
        &["bounds", "--graph", "chain:0"],
        &["bounds", "--graph", "hexagon:5"],
        &["bounds", "--graph", "chain:4", "--partition", "0,1,1"],
        &["bounds", "--graph", "chain:4", "--keep", "0"],
        &["simulate", "--graph", "chain:4", "--kind", "m-separable"],
        &["simulate", "--graph", "chain:4", "--kind", "genuine"],
        &["simulate", "--graph", "chain:4", "--kind", "gme", "--m", "2"],
        &["simulate", "--graph", "chain:4", "--noise", "1.5"],
        &["simulate", "--graph", "chain:4", "--shots", "0"],
        &["simulate", "--graph", "chain:4", "--z-threshold", "-1"],
        &["simulate", "--graph", "chain:4", "--format", "xml"],
        &["bounds"],
        &["frobnicate"],
    ];
    for args in bad {
        let out = entwit(args);
        assert_eq!(out.code, EXIT_USAGE, "{args:?}: {}", out.stdout);
        assert!(!out.stderr.is_empty());
    }
    assert_eq!(entwit(&["--help"]).code, EXIT_OK);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_entwit");
    let ok = Command::new(bin).args(["bounds", "--graph", "chain:6", "--partition", "0,1,1,2,2,2"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(text(&v["constants"]["genuine"]), "3/2");
    let bad = Command::new(bin).args(["bounds", "--graph", "chain:x"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    let fail = Command::new(bin).args(["verify", "--graph", "star:5", "--corrupt-constant"]).output().unwrap();
    assert_eq!(fail.status.code(), Some(1));
    let threads = Command::new(bin)
        .env(entwit::THREADS_ENV, "1")
        .args(["simulate", "--graph", "ring:7", "--shots", "200", "--seed", "3"])
        .output()
        .unwrap();
    let many = Command::new(bin)
        .env(entwit::THREADS_ENV, "4")
        .args(["simulate", "--graph", "ring:7", "--shots", "200", "--seed", "3"])
        .output()
        .unwrap();
    assert_eq!(threads.stdout, many.stdout);
}
