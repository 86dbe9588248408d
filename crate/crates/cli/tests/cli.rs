use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_monoset"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn ok_json(args: &[&str]) -> Value {
    let o = run(args);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    serde_json::from_str(&stdout(&o)).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn ops_identities() {
    for file in ["sample_system.json", "upper_system.json"] {
        let f = fixture(file);
        let f = path(&f);
        assert_eq!(ok_json(&["ops", f, "cut cut"]), ok_json(&["ops", f, "up"]));
        let original: Value = serde_json::from_str(&std::fs::read_to_string(f).unwrap()).unwrap();
        let twice = ok_json(&["ops", f, "comp comp"]);
        assert_eq!(twice["n"], original["n"]);
        let mut got: Vec<Vec<u64>> = serde_json::from_value(twice["members"].clone()).unwrap();
        let mut want: Vec<Vec<u64>> = serde_json::from_value(original["members"].clone()).unwrap();
        got.sort();
        want.sort();
        assert_eq!(got, want);
        assert_eq!(ok_json(&["ops", f, "ecomp cut"]), ok_json(&["ops", f, "cocut ecomp"]));
        assert_eq!(
            ok_json(&["ops", f, "flip:1,3 flip:1,3"]),
            ok_json(&["ops", f, "comp comp"])
        );
    }
}

#[test]
fn ops_usage_errors() {
    let f = fixture("sample_system.json");
    assert_eq!(run(&["ops", path(&f), "up sideways"]).status.code(), Some(2));
    assert_eq!(run(&["ops", path(&f), "flip:9"]).status.code(), Some(2));
    assert_eq!(run(&["ops", path(&f), ""]).status.code(), Some(2));
    assert_eq!(run(&["ops", "/nonexistent.json", "up"]).status.code(), Some(1));
    assert_eq!(run(&["ops", path(&f), "up", "--bogus"]).status.code(), Some(2));
}

#[test]
fn approx_matches_goldens() {
    let f = fixture("sample_system.json");
    for mode in ["upper", "lower", "interval", "bimonotone"] {
        let mut args = vec!["approx", path(&f), "--mode", mode];
        if mode == "bimonotone" {
            args.extend(["--split", "1,3"]);
        }
        let got = ok_json(&args);
        let golden: Value =
            serde_json::from_str(&std::fs::read_to_string(fixture(&format!("approx_{mode}.golden.json"))).unwrap())
                .unwrap();
        for (key, want) in golden.as_object().unwrap() {
            assert_eq!(&got[key], want, "{mode}: field {key}");
        }
    }
}

#[test]
fn approx_flags_and_errors() {
    let up = fixture("upper_system.json");
    let r = ok_json(&["approx", path(&up), "--mode", "upper"]);
    assert_eq!(r["exact_inner"], Value::Bool(true));
    assert_eq!(r["exact_outer"], Value::Bool(true));
    let f = fixture("sample_system.json");
    for split in ["0", "5", "1,1", "x"] {
        let o = run(&["approx", path(&f), "--mode", "bimonotone", "--split", split]);
        assert_eq!(o.status.code(), Some(2), "split {split}");
    }
    assert_eq!(
        run(&["approx", path(&f), "--mode", "bimonotone"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["approx", path(&f), "--mode", "upper", "--split", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["approx", path(&f), "--mode", "sideways"]).status.code(), Some(2));
}

#[test]
fn approx_writes_report_file() {
    let dir = std::env::temp_dir().join(format!("monoset-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("report.json");
    let f = fixture("sample_system.json");
    let o = run(&["approx", path(&f), "--mode", "lower", "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(serde_json::from_str::<Value>(&stdout(&o)).is_err());
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(written, ok_json(&["approx", path(&f), "--mode", "lower"]));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn demos_print_tables() {
    let o = run(&["demo", "shortest-path"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("counterpart  {{e1,e3},{e2,e3}}"), "{text}");
    assert!(text.contains("verdict      EQUAL"));
    let o = run(&["demo", "max-cut"]);
    assert!(stdout(&o).contains("counterpart  {{e1,e2,e3}}"));
    for name in ["dominating", "spanning", "signed-mincut", "bilinear"] {
        let o = run(&["demo", name]);
        assert_eq!(o.status.code(), Some(0), "{name}");
        assert!(!stdout(&o).contains("DIFFER"));
    }
    let g = fixture("dominating_graph.json");
    let o = run(&["demo", "spanning", path(&g)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(run(&["demo", "tsp"]).status.code(), Some(2));
}

#[test]
fn solve_fixtures() {
    let r = ok_json(&["solve", path(&fixture("infeasible_model.json"))]);
    assert_eq!(r["status"], "infeasible");
    assert_eq!(r["objective_value"], "+inf");
    let r = ok_json(&[
        "solve",
        "--problem",
        "dominating",
        "--graph",
        path(&fixture("dominating_graph.json")),
    ]);
    assert_eq!(r["status"], "optimal");
    assert_eq!(r["objective_value"], 1);
    let r = ok_json(&["solve", path(&fixture("knapsack_model.json"))]);
    assert_eq!(r["objective_value"], 6);
    let best = r["best_point"].clone();
    assert!(
        best == serde_json::json!([2, 5]) || best == serde_json::json!([4, 5]),
        "{best}"
    );
    let r = ok_json(&["solve", path(&fixture("knapsack_model.json")), "--node-limit", "1"]);
    assert_eq!(r["status"], "node-limit");
    assert!(r["nodes"].as_u64().unwrap() <= 1);
    assert_eq!(run(&["solve"]).status.code(), Some(2));
    assert_eq!(
        run(&["solve", "--node-limit", "x", path(&fixture("knapsack_model.json"))])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn casestudy_rows() {
    let o = run(&[
        "casestudy",
        "--n",
        "8",
        "--density",
        "0.3",
        "--eps",
        "0.1",
        "--k",
        "20",
        "--seeds",
        "5",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "config,seed,strategy,status,value,nodes,cuts,millis,agrees");
    assert_eq!(lines.len(), 5);
    let values: Vec<&str> = lines[1..].iter().map(|l| l.split(',').nth(4).unwrap()).collect();
    assert!(values.iter().all(|v| *v == values[0]));
    assert!(lines[1..].iter().all(|l| l.ends_with(",true")));

    let o = run(&["casestudy", "--seeds", "1,2,3", "--strategies", "SatCut"]);
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 4);
    assert!(text.lines().skip(1).all(|l| l.split(',').nth(2) == Some("SatCut")));

    for bad in [
        ["--density", "1.5"],
        ["--density", "0"],
        ["--eps", "1"],
        ["--strategies", "Magic"],
        ["--n", "40"],
    ] {
        assert_eq!(run(&["casestudy", bad[0], bad[1]]).status.code(), Some(2), "{bad:?}");
    }
}
