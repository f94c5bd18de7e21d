//! The `hgineq` binary: exit statuses, validation messages, output files and
//! reproducibility.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use hgineq_cli::config::SuiteConfig;
use hgineq_cli::output::{CURVES_FILE, METADATA_FILE, REPORTS_FILE, SHARPNESS_FILE};
use hgineq_cli::{Scope, Suite};
use tempfile::TempDir;

const SMALL: &str = r#"
seed = 7
profiles = ["gauss_log", "bump"]

[[groups]]
kind = "euclidean"
n = 3

[[groups]]
kind = "heisenberg"

[[theorems]]
id = "sobolev_lp"
p = [2.0, 3.0]

[[theorems]]
id = "weighted_l2"
alpha = [0.0, 1.0]

[[theorems]]
id = "polar"
samples = 20000

[[sharpness]]
group = { kind = "heisenberg" }
family = { family = "power_cutoff", p = 2.0, alpha = 0.0 }
verifier = "sobolev_lp"
parameters = [0.2, 0.1]
"#;

fn hgineq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hgineq")).args(args).env_remove("HGINEQ_JOBS").output().unwrap()
}

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn verify(config: &str, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["verify", "--config", config, "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    hgineq(&args)
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn small_suite_passes_and_writes_every_file() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "small.toml", SMALL);
    let out = tmp.path().join("out");
    let o = verify(&cfg, &out, &[]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    for f in [REPORTS_FILE, CURVES_FILE, SHARPNESS_FILE, METADATA_FILE] {
        assert!(out.join(f).exists(), "{f}");
    }
    let reports = fs::read_to_string(out.join(REPORTS_FILE)).unwrap();
    // 2 groups × (2 p × 2 profiles + 2 α × 2 profiles + 1 polar)
    assert_eq!(reports.lines().count(), 18);
    for line in reports.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["schema_version"], 1);
        assert_eq!(v["status"], "pass");
        for key in ["theorem_id", "group", "Q", "profile", "parameters", "lhs", "rhs", "grid_meta"] {
            assert!(v.get(key).is_some(), "{key} missing in {line}");
        }
    }
    let csv = fs::read_to_string(out.join(CURVES_FILE)).unwrap();
    assert!(csv.starts_with("family,verifier,group,parameter_name,parameter,width,lhs,rhs,ratio,target_constant\n"));
    assert_eq!(csv.lines().count(), 3);
    let meta: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join(METADATA_FILE)).unwrap()).unwrap();
    assert_eq!(meta["seed"], 7);
    assert_eq!(meta["failed"], 0);
}

#[test]
fn reports_are_sorted_and_independent_of_the_worker_count() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "small.toml", SMALL);
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    assert_eq!(verify(&cfg, &a, &["--jobs", "1"]).status.code(), Some(0));
    assert_eq!(verify(&cfg, &b, &["--jobs", "3"]).status.code(), Some(0));
    for f in [REPORTS_FILE, CURVES_FILE, SHARPNESS_FILE] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
    let ids: Vec<String> = fs::read_to_string(a.join(REPORTS_FILE))
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap()["theorem_id"].as_str().unwrap().to_string())
        .collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
}

#[test]
fn seed_changes_only_the_monte_carlo_reports() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "small.toml", SMALL);
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    verify(&cfg, &a, &[]);
    verify(&cfg, &b, &["--seed", "8"]);
    let read = |d: &Path| fs::read_to_string(d.join(REPORTS_FILE)).unwrap();
    let (ra, rb) = (read(&a), read(&b));
    for (la, lb) in ra.lines().zip(rb.lines()) {
        if la.contains("\"theorem_id\":\"polar\"") {
            assert_ne!(la, lb);
        } else {
            assert_eq!(la, lb);
        }
    }
}

#[test]
fn empty_theorem_list_exits_zero_with_an_empty_report() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "empty.toml", "theorems = []\n[[groups]]\nkind = \"heisenberg\"\n");
    let out = tmp.path().join("out");
    let o = verify(&cfg, &out, &[]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(fs::read_to_string(out.join(REPORTS_FILE)).unwrap(), "");
}

#[test]
fn critical_weight_is_rejected_before_execution() {
    let tmp = TempDir::new().unwrap();
    let text = "[[groups]]\nkind = \"heisenberg\"\n[[theorems]]\nid = \"higher_order\"\nalpha = 2.0\nk = 2\n";
    let cfg = write_config(tmp.path(), "critical.toml", text);
    let out = tmp.path().join("out");
    let o = verify(&cfg, &out, &[]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("theorems[0]") && err.contains("alpha"), "{err}");
    assert_eq!(err.matches("configuration error").count(), 1, "{err}");
    assert!(!out.exists());
}

#[test]
fn config_errors_name_the_offending_key() {
    let tmp = TempDir::new().unwrap();
    let cases = [
        ("[[theorems]]\nid = \"sobolev\"\np = 2.0\n", "theorems[0].id"),
        ("[[theorems]]\nid = \"hardy\"\npp = 2.0\n", "pp"),
        ("profiles = [\"nope\"]\n", "nope"),
        ("[[groups]]\nkind = \"heisenberg\"\n[[theorems]]\nid = \"hardy\"\np = 4.0\n", "p"),
        ("[grid]\nN = 1\nu_min = -20.0\nu_max = 20.0\n", "grid"),
        ("[[groups]]\nkind = \"euclidean\"\nn = 0\n", "groups"),
    ];
    for (i, (text, key)) in cases.iter().enumerate() {
        let cfg = write_config(tmp.path(), &format!("bad{i}.toml"), text);
        let o = verify(&cfg, &tmp.path().join(format!("out{i}")), &[]);
        assert_eq!(o.status.code(), Some(2), "{text}: {}", stderr(&o));
        assert!(stderr(&o).contains(key), "{text}: {}", stderr(&o));
    }
    let o = verify(tmp.path().join("missing.toml").to_str().unwrap(), tmp.path(), &[]);
    assert_eq!(o.status.code(), Some(2));
    let o = verify(&write_config(tmp.path(), "ok.toml", SMALL), tmp.path(), &["--tol-identity", "-1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn json_configs_are_accepted() {
    let tmp = TempDir::new().unwrap();
    let text = r#"{"groups": [{"kind": "euclidean", "n": 3}], "profiles": ["gauss_log"],
                   "theorems": [{"id": "hardy", "p": [1.5, 2.0]}]}"#;
    let cfg = write_config(tmp.path(), "suite.json", text);
    let out = tmp.path().join("out");
    let o = verify(&cfg, &out, &[]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(fs::read_to_string(out.join(REPORTS_FILE)).unwrap().lines().count(), 2);
}

#[test]
fn sharpness_subcommand_skips_the_theorems() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "small.toml", SMALL);
    let out = tmp.path().join("out");
    let o = hgineq(&["sharpness", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(fs::read_to_string(out.join(REPORTS_FILE)).unwrap(), "");
    assert_eq!(fs::read_to_string(out.join(SHARPNESS_FILE)).unwrap().lines().count(), 1);
}

#[test]
fn describe_and_list() {
    let o = hgineq(&["describe", "sobolev_lp"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("p/Q"));
    let o = hgineq(&["describe", "slz"]);
    assert!(String::from_utf8_lossy(&o.stdout).contains("q/(γ−1)"));
    let o = hgineq(&["describe", "nope"]);
    assert_eq!(o.status.code(), Some(2));
    let o = hgineq(&["list"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8_lossy(&o.stdout).into_owned();
    for word in ["sobolev_lp", "polar", "gauss_log", "slz_fl"] {
        assert!(text.contains(word), "{word}");
    }
    assert_eq!(hgineq(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn suite_expands_cells_from_the_product_of_grids() {
    let config = SuiteConfig::parse(SMALL, false).unwrap();
    let suite = Suite::new(config).unwrap();
    assert_eq!(suite.len(), 18);
    let outcome = suite.run(Scope::Sharpness);
    assert!(outcome.reports.is_empty());
    assert_eq!(outcome.curves.len(), 1);
    assert_eq!(outcome.exit_code(), 0);
}
