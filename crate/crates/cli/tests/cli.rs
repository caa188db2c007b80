use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn cvrouter(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cvrouter"))
        .current_dir(dir)
        .env_remove("CVROUTER_SEED")
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(path: impl AsRef<Path>) -> Value {
    let text = fs::read_to_string(path).unwrap();
    assert!(text.ends_with('\n'));
    serde_json::from_str(&text).unwrap()
}

fn edges(v: &Value) -> usize {
    v["edges"].as_array().unwrap().len()
}

#[test]
fn generate_examples() {
    let dir = TempDir::new().unwrap();
    let o = cvrouter(
        dir.path(),
        &["generate", "--topology", "grid", "--n", "8", "--out-dir", "g"],
    );
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("vertices 8 edges 10"));
    let g = json(dir.path().join("g/graph.json"));
    assert_eq!((g["n"].as_u64(), edges(&g)), (Some(8), 10));

    let o = cvrouter(
        dir.path(),
        &["generate", "--topology", "complete", "--n", "4", "--out-dir", "k"],
    );
    assert_eq!(code(&o), 0);
    assert_eq!(edges(&json(dir.path().join("k/graph.json"))), 6);
}

#[test]
fn generate_is_deterministic_and_seed_sources_agree() {
    let dir = TempDir::new().unwrap();
    let run = |out: &str, extra: &[&str], env: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_cvrouter"));
        cmd.current_dir(dir.path()).env_remove("CVROUTER_SEED");
        if let Some(seed) = env {
            cmd.env("CVROUTER_SEED", seed);
        }
        let mut args = vec!["generate", "--topology", "ba", "--n", "50", "--out-dir", out];
        args.extend_from_slice(extra);
        assert_eq!(cmd.args(&args).status().unwrap().code(), Some(0));
        fs::read(dir.path().join(out).join("graph.json")).unwrap()
    };
    let a = run("a", &["--seed", "7"], None);
    let b = run("b", &["--seed", "7"], None);
    let c = run("c", &[], Some("7"));
    let d = run("d", &["--seed", "7"], Some("8"));
    let e = run("e", &["--seed", "8"], None);
    assert_eq!(a, b);
    assert_eq!(a, c);
    assert_eq!(a, d);
    assert_ne!(a, e);
    let g: Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(edges(&g), 1 + 2 * 48);
}

#[test]
fn spectrum_examples_and_gate() {
    let dir = TempDir::new().unwrap();
    let p = dir.path();
    cvrouter(
        p,
        &["generate", "--topology", "complete", "--n", "6", "--out-dir", "k6"],
    );
    let o = cvrouter(p, &["spectrum", "k6/graph.json", "--s", "10", "--out-dir", "k6"]);
    assert_eq!(code(&o), 2);
    let r = json(p.join("k6/spectrum.json"));
    assert_eq!(r["count_one"], 2);
    assert_eq!(r["contains_lambda"], false);
    let o = cvrouter(
        p,
        &[
            "spectrum",
            "k6/graph.json",
            "--s",
            "10",
            "--internal",
            "--out-dir",
            "k6",
        ],
    );
    assert_eq!(code(&o), 0);

    cvrouter(p, &["generate", "--topology", "grid", "--n", "6", "--out-dir", "g6"]);
    let o = cvrouter(p, &["spectrum", "g6/graph.json", "--s", "10", "--out-dir", "g6"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(p.join("g6/spectrum.json"))["contains_lambda"], true);

    fs::write(p.join("empty.json"), r#"{"n": 4, "edges": [], "partition_a": [0, 1]}"#).unwrap();
    let o = cvrouter(p, &["spectrum", "empty.json", "--out-dir", "e"]);
    assert_eq!(code(&o), 2);
    let r = json(p.join("e/spectrum.json"));
    assert!(r["eigenvalues_a"]
        .as_array()
        .unwrap()
        .iter()
        .all(|v| (v.as_f64().unwrap() - 1.0).abs() < 1e-12));

    assert_eq!(code(&cvrouter(p, &["spectrum", "missing.json"])), 1);
}

#[test]
fn route_odd_grid_with_both_methods() {
    let dir = TempDir::new().unwrap();
    let p = dir.path();
    let o = cvrouter(
        p,
        &[
            "route",
            "--topology",
            "grid",
            "--n",
            "6",
            "--pair",
            "1,3",
            "--out-dir",
            "cma",
        ],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let cma = json(p.join("cma/outcome.json"));
    assert_eq!(cma["classification"], "ideal");
    assert!(cma["value"]["f_opt"].as_f64().unwrap() <= 1e-5);
    let history = fs::read_to_string(p.join("cma/history.csv")).unwrap();
    assert!(history.starts_with("generation,best_f,sigma_g\n"));
    assert_eq!(
        history.lines().count() - 1,
        cma["generations"].as_u64().unwrap() as usize
    );

    let args = [
        "route",
        "--topology",
        "grid",
        "--n",
        "6",
        "--pair",
        "1,3",
        "--method",
        "constructive",
        "--out-dir",
        "con",
    ];
    assert_eq!(code(&cvrouter(p, &args)), 0);
    let con = json(p.join("con/outcome.json"));
    assert_eq!(con["method"], "constructive");
    for (r1, r2) in cma["routed"]
        .as_array()
        .unwrap()
        .iter()
        .zip(con["routed"].as_array().unwrap())
    {
        for (x, y) in r1.as_array().unwrap().iter().zip(r2.as_array().unwrap()) {
            assert!((x.as_f64().unwrap() - y.as_f64().unwrap()).abs() < 1e-4);
        }
    }
}

#[test]
fn route_even_grid_reports_imperfect_state() {
    let dir = TempDir::new().unwrap();
    let p = dir.path();
    let args = [
        "route",
        "--topology",
        "grid",
        "--n",
        "8",
        "--pair",
        "1,4",
        "--max-generations",
        "3000",
        "--out-dir",
        "r",
    ];
    let o = cvrouter(p, &args);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("routed block"));
    let out = json(p.join("r/outcome.json"));
    assert_eq!(out["classification"], "imperfect");
    assert!(out["value"]["purity"].as_f64().unwrap() > 0.999);

    let args = [
        "route",
        "--topology",
        "grid",
        "--n",
        "8",
        "--pair",
        "1,4",
        "--method",
        "constructive",
        "--out-dir",
        "c",
    ];
    assert_eq!(code(&cvrouter(p, &args)), 2);
}

#[test]
fn route_is_reproducible_from_its_config_and_thread_count() {
    let dir = TempDir::new().unwrap();
    let p = dir.path();
    let base = [
        "route",
        "--topology",
        "ba",
        "--n",
        "10",
        "--seed",
        "3",
        "--scenario",
        "I",
        "--max-generations",
        "200",
    ];
    let mut one = base.to_vec();
    one.extend(["--threads", "1", "--out-dir", "one"]);
    let mut four = base.to_vec();
    four.extend(["--threads", "4", "--out-dir", "four"]);
    cvrouter(p, &one);
    cvrouter(p, &four);
    let a = fs::read(p.join("one/outcome.json")).unwrap();
    assert_eq!(a, fs::read(p.join("four/outcome.json")).unwrap());

    let cfg = json(p.join("one/run_config.json"));
    assert_eq!(cfg["seed"], 3);
    assert_eq!(cfg["topology"]["kind"], "barabasi_albert");
    cvrouter(p, &["route", "--config", "one/run_config.json", "--out-dir", "again"]);
    assert_eq!(a, fs::read(p.join("again/outcome.json")).unwrap());
    let mut again = json(p.join("again/run_config.json"));
    assert_eq!(again["output_dir"], "again");
    again["output_dir"] = cfg["output_dir"].clone();
    assert_eq!(again, cfg);
}

#[test]
fn config_file_and_flag_overrides() {
    let dir = TempDir::new().unwrap();
    let p = dir.path();
    fs::write(
        p.join("cfg.json"),
        r#"{"topology": {"kind": "complete"}, "n": 5, "output_dir": "fromcfg"}"#,
    )
    .unwrap();
    cvrouter(p, &["--config", "cfg.json", "generate"]);
    assert_eq!(edges(&json(p.join("fromcfg/graph.json"))), 10);
    cvrouter(
        p,
        &["--config", "cfg.json", "generate", "--n", "4", "--out-dir", "flag"],
    );
    assert_eq!(edges(&json(p.join("flag/graph.json"))), 6);

    fs::write(p.join("bad.json"), r#"{"n": "six"}"#).unwrap();
    assert_eq!(code(&cvrouter(p, &["--config", "bad.json", "generate"])), 1);
    assert_eq!(code(&cvrouter(p, &["generate", "--topology", "torus"])), 1);
    assert_eq!(code(&cvrouter(p, &["frobnicate"])), 1);
    assert_eq!(code(&cvrouter(p, &["--help"])), 0);
}

#[test]
fn histogram_outputs() {
    let dir = TempDir::new().unwrap();
    let p = dir.path();
    fs::write(
        p.join("edgeless.json"),
        r#"{"topology": {"kind": "explicit", "edges": []}, "n": 4, "s": 10.0, "histogram": {"graphs": 1, "bins": 10}}"#,
    )
    .unwrap();
    assert_eq!(
        code(&cvrouter(
            p,
            &["--config", "edgeless.json", "histogram", "--out-dir", "e"]
        )),
        0
    );
    let csv = fs::read_to_string(p.join("e/histogram.csv")).unwrap();
    let counts: Vec<(f64, u64)> = csv
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].parse().unwrap(), f[2].parse().unwrap())
        })
        .collect();
    let nonzero: Vec<_> = counts.iter().filter(|(_, c)| *c > 0).collect();
    assert_eq!(nonzero.len(), 1);
    assert_eq!(nonzero[0].0, 1.0);
    let s = json(p.join("e/histogram_summary.json"));
    assert_eq!(s["value_one_pct"], 100.0);

    let o = cvrouter(
        p,
        &[
            "histogram",
            "--topology",
            "ba",
            "--reduced",
            "--s",
            "10",
            "--out-dir",
            "r",
        ],
    );
    assert_eq!(code(&o), 0);
    let r = json(p.join("r/histogram_summary.json"));
    let keys = |v: &Value| v.as_object().unwrap().keys().cloned().collect::<Vec<_>>();
    assert_eq!(keys(&r), keys(&s));
    assert_eq!((r["graphs"].as_u64(), r["n"].as_u64()), (Some(10), Some(200)));
}

#[test]
fn square_oracle_outputs() {
    let dir = TempDir::new().unwrap();
    let p = dir.path();
    let o = cvrouter(p, &["square-oracle", "--s", "10", "--steps", "40", "--out-dir", "sq"]);
    assert_eq!(code(&o), 0);
    let s = json(p.join("sq/square_summary.json"));
    assert!(s["scan_min_max_residual"].as_f64().unwrap() > 0.05);
    let mu = (100.0 - 1.0) / (5f64.sqrt() * 10.0);
    assert!((s["closed_form"]["mu"].as_f64().unwrap() - mu).abs() < 1e-12);
    let rows = fs::read_to_string(p.join("sq/square_scan.csv")).unwrap();
    assert_eq!(rows.lines().count(), 1 + 40 * 40);
}
