use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toric-deform")).args(args).output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate_reports_flags() {
    let nine_ray = fixture("nine_ray.json");
    let out = run(&["validate", path(&nine_ray)]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    for flag in ["is_simplicial", "is_smooth", "is_complete"] {
        assert_eq!(v[flag], true);
    }
    assert_eq!(v["fan_sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn rigid_fan_has_no_first_order_deformations() {
    let out = run(&["t1", path(&fixture("p3.json"))]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text, "ray\tu\tdim\n# total 0\n");
    let out = run(&["t1", path(&fixture("p3.json")), "--format", "json"]);
    assert_eq!(json(&out)["total"], 0);
    let out = run(&["obstructed", path(&fixture("p3.json"))]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn nine_ray_tables_and_products() {
    let nine_ray = fixture("nine_ray.json");
    let t1 = String::from_utf8(run(&["t1", path(&nine_ray)]).stdout).unwrap();
    assert!(t1.contains("0\t(-1,0,0)\t1\n"));
    assert!(t1.contains("5\t(0,-1,0)\t1\n"));
    let t2 = String::from_utf8(run(&["t2", path(&nine_ray)]).stdout).unwrap();
    assert!(t2.contains("0\t(-1,-1,0)\t1\n"));
    let out = run(&["cup", path(&nine_ray), "--ray", "0", "--deg=-1,0,0", "--ray2", "5", "--deg2=0,-1,0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["vanishes"], false);
    assert_eq!(v["target_label"], "rho1");
    let out = run(&["cup", path(&nine_ray), "--ray", "0", "--deg=-1,0,0", "--ray2", "5", "--deg2=0,-1,0", "--comp", "0", "--comp2", "1"]);
    assert_eq!(json(&out)["selection"]["kind"], "target");
}

#[test]
fn obstruction_exit_code_and_certificates() {
    let nine_ray = fixture("nine_ray.json");
    let out = run(&["obstructed", path(&nine_ray)]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["obstructed"], true);
    let out = run(&["certificate", path(&nine_ray)]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let certs = v["certificates"].as_array().unwrap();
    assert!(!certs.is_empty());
    for c in certs {
        assert_eq!(c["target"]["ray"], 0);
        assert_ne!(c["value"], "0");
        assert!(c["alpha"].as_array().unwrap().len() >= 3);
    }
}

#[test]
fn output_is_byte_stable() {
    let nine_ray = fixture("nine_ray.json");
    for args in [vec!["obstructed", path(&nine_ray)], vec!["t1", path(&nine_ray), "--format", "json"], vec!["certificate", path(&nine_ray)]] {
        assert_eq!(run(&args).stdout, run(&args).stdout);
    }
}

#[test]
fn malformed_input_exits_2_with_location() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(f, "{{\n  \"rank\": 2,\n  \"rays\": [[1, 0], [0, 1]\n  \"max_cones\": []\n}}\n").unwrap();
    let out = run(&["validate", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains(":4:"), "{err}");

    let out = run(&["obstructed", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["cup", path(&fixture("nine_ray.json")), "--ray", "0", "--deg=-1,0", "--ray2", "5", "--deg2=0,-1,0"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["validate", "/nonexistent/fan.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn degree_box_is_flagged() {
    let out = run(&["t1", path(&fixture("hirzebruch2.json")), "--degree-box", "3"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# not certified exhaustive\n"));
    assert!(text.ends_with("# total 1\n"));
    let out = run(&["degrees", path(&fixture("hirzebruch2.json")), "--format", "json"]);
    assert_eq!(json(&out)["certified"], true);
}

#[test]
fn complex_dump_and_oracle_check() {
    let nine_ray = fixture("nine_ray.json");
    let out = run(&["complex", path(&nine_ray), "--ray", "0", "--deg=-1,-1,0"]);
    let v = json(&out);
    assert_eq!(v["edges"].as_array().unwrap().len(), 6);
    let out = run(&["oracle-check", path(&fixture("hirzebruch3.json")), "--random", "3", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert!(text.lines().skip(1).all(|l| l.ends_with("\tpass")));
}
