mod common;

use std::io::Write;
use std::process::Command;

use qlc_tiling::cli::run;
use qlc_tiling::semantics::{validate_model, ModelFile};
use qlc_tiling::syntax::parse_formula;
use qlc_tiling::tiles::TileSet;
use qlc_tiling::turing::{tm_to_tiles, TuringMachine};
use serde_json::Value;

fn json(args: &[&str]) -> (i32, Value) {
    let mut argv: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    argv.push("--json".into());
    let out = run(argv);
    assert!(out.stderr.is_empty(), "{}", out.stderr);
    (out.code, serde_json::from_str(&out.stdout).unwrap())
}

#[test]
fn grid_ends_at_the_last_label() {
    let out = run(["grid", "--upto", "21"]);
    assert_eq!(out.code, 0);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(lines[0], "k,i,j,right,above,wall,floor");
    assert_eq!(lines.last().unwrap(), &"21,6,0,28,29,false,true");
}

#[test]
fn reduce_prints_a_parsable_formula() {
    let tiles = common::data("checkerboard.json");
    for mode in ["--phi", "--psi"] {
        let out = run(["reduce", "--tiles", &tiles, mode]);
        assert_eq!(out.code, 0);
        assert!(parse_formula(out.stdout.trim()).is_ok());
    }
    let out = run(["reduce", "--tiles", &tiles, "--psi", "--positive"]);
    assert!(!out.stdout.contains("bot"));
    let out = run(["reduce", "--tiles", &tiles, "--conjunct", "Serial_lhd"]);
    assert_eq!(out.stdout.trim(), "forall x. exists y. lhd(x, y)");
    assert_eq!(run(["reduce", "--tiles", &tiles, "--phi", "--psi"]).code, 2);
    assert_eq!(run(["reduce", "--tiles", &tiles, "--conjunct", "Nope"]).code, 2);
}

#[test]
fn lemma1_report_is_partial_with_a_boundary_failure() {
    let tiles = common::data("checkerboard.json");
    let (code, v) = json(&["verify-lemma1", "--tiles", &tiles, "--size", "25"]);
    assert_eq!(code, 0);
    assert_eq!(v["status"], "partial");
    let serial = &v["findings"][0];
    assert_eq!(serial["name"], "Serial_lhd");
    assert_eq!(serial["classification"], "boundary");
    assert_eq!(serial["witness"]["assignment"]["x"], 25);
}

#[test]
fn lemma1_psi_report_fails_on_t4() {
    let tiles = common::data("checkerboard.json");
    let (code, v) = json(&["verify-lemma1", "--tiles", &tiles, "--size", "25", "--psi"]);
    assert_eq!(code, 1);
    let findings = v["findings"].as_array().unwrap();
    let t4 = findings.iter().find(|f| f["name"] == "T4").unwrap();
    assert_eq!(t4["classification"], "interior");
    let refute_q = findings.iter().find(|f| f["name"] == "Refute_Q").unwrap();
    assert_eq!(refute_q["holds"], false);
}

#[test]
fn sublemma_table_agrees() {
    let out = run(["verify-sublemma", "--tiles", &common::data("checkerboard.json"), "--kmax", "12"]);
    assert_eq!(out.code, 0);
    let rows: Vec<&str> = out.stdout.lines().skip(1).take(13).collect();
    for row in rows {
        let f: Vec<&str> = row.split(',').collect();
        assert_eq!((f[1], f[3]), (f[2], f[4]), "{row}");
    }
    assert!(out.stdout.ends_with("PASS (13 findings)\n"));
}

#[test]
fn json_output_is_byte_identical() {
    let tiles = common::data("checkerboard.json");
    let args = ["verify-lemma1", "--tiles", tiles.as_str(), "--size", "12", "--psi", "--json"];
    assert_eq!(run(args).stdout, run(args).stdout);
}

#[test]
fn tm_commands() {
    let demo = common::data("demo_machine.json");
    let out = run(["tm-tiles", &demo]);
    let ts = TileSet::from_json(&out.stdout).unwrap();
    let m = TuringMachine::load(&demo).unwrap();
    assert_eq!(ts, tm_to_tiles(&m).unwrap().set);

    let out = run(["tm-run", &common::data("write_and_return.json"), "--steps", "3"]);
    assert_eq!(out.stdout.lines().last().unwrap(), "3: [q1] # a");

    assert_eq!(run(["verify-tm", &demo, "--rows", "10"]).code, 0);
    assert_eq!(run(["verify-tm", &common::data("looping.json"), "--rows", "50"]).code, 0);
}

#[test]
fn invalid_machine_fails_verification() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(
        f,
        r##"{{"alphabet": ["#", "_"], "blank": "_", "marker": "#", "states": ["q0", "q1"],
            "initial": "q0", "halting": "q1",
            "delta": [{{"from": ["q0", "#"], "to": ["q0", "_", "L"]}}]}}"##
    )
    .unwrap();
    let path = f.path().to_str().unwrap();
    let (code, v) = json(&["verify-tm", path, "--rows", "3"]);
    assert_eq!(code, 1);
    let conditions: Vec<&str> = v["findings"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x["condition"].as_str().unwrap())
        .collect();
    assert!(conditions.contains(&"marker") && conditions.contains(&"left_of_marker") && conditions.contains(&"missing"));
    assert_eq!(run(["tm-run", path, "--steps", "1"]).code, 2);
}

#[test]
fn tile_solve_exit_codes() {
    let out = run(["tile-solve", "--tiles", &common::data("clashing.json"), "--width", "2", "--height", "1"]);
    assert_eq!(out.code, 1);
    let out = run(["tile-solve", "--tiles", &common::data("uniform.json"), "--width", "3", "--height", "2"]);
    assert_eq!((out.code, out.stdout.as_str()), (0, "0 0 0\n0 0 0\nPASS (0 findings)\n"));
    let out = run([
        "tile-solve", "--tiles", &common::data("checkerboard.json"), "--width", "2", "--height", "1", "--fix", "0,0=1",
    ]);
    assert!(out.stdout.starts_with("1 0\n"));
}

#[test]
fn model_build_then_check() {
    let out = run(["model-build", "--tiles", &common::data("checkerboard.json"), "--size", "6"]);
    assert_eq!(out.code, 0);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    std::fs::write(&path, &out.stdout).unwrap();
    let model = ModelFile::load(&path).unwrap().to_model().unwrap();
    assert!(validate_model(&model).is_valid());
    assert_eq!(model.world_count(), 7);

    let p = path.to_str().unwrap();
    assert_eq!(run(["model-check", p, "(exists y. lhd(x, y)) | Q(x)"]).code, 2);
    assert_eq!(run(["model-check", p, "exists x. Q(x)", "--world", "0"]).code, 0);
    let (code, v) = json(&["model-check", p, "forall x. Q(x)"]);
    assert_eq!(code, 1);
    assert_eq!(v["findings"][6]["forced"], true);
    assert_eq!(v["findings"][5]["forced"], false);
}

#[test]
fn model_check_reports_invalid_models() {
    let (code, v) = json(&["model-check", &common::data("sample_model.json"), "forall x. (P(x) | ~P(x))"]);
    assert_eq!(code, 1);
    assert_eq!(v["findings"][0], serde_json::json!({"world": 0, "forced": false, "witness": {"world": 0, "assignment": {"x": 0}}}));

    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(f, r#"{{"worlds": 2, "order": "linear", "domains": [[0], [0]], "interpretation": {{"P": {{"arity": 1, "atoms": [[0, 0]]}}}}}}"#).unwrap();
    let (code, v) = json(&["model-check", f.path().to_str().unwrap(), "forall x. P(x)"]);
    assert_eq!(code, 1);
    assert_eq!(v["findings"][0]["condition"], "heredity");
}

#[test]
fn malformed_input_reports_position() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(f, "{{\"tiles\": [\n  {{\"id\": 0,}}\n]}}").unwrap();
    let out = run(["tile-solve", "--tiles", f.path().to_str().unwrap(), "--width", "1", "--height", "1"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("line 2"), "{}", out.stderr);
    let out = run(["model-check", &common::data("sample_model.json"), "forall x. (P(x) |"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("1:18"), "{}", out.stderr);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_qlc-tiling");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap();
    let ok = status(&["grid", "--upto", "3"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&ok.stdout).lines().count(), 5);
    assert_eq!(status(&["nope"]).status.code(), Some(2));
    assert_eq!(status(&["grid", "--upto", "3", "--json"]).status.code(), Some(0));
    let missing = status(&["tm-run", "/no/such/file.json", "--steps", "1"]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("/no/such/file.json"));
}
