use std::fs;
use std::path::Path;
use std::process::Command;

use resurgence_cli::{emit, parse_config, run, Overrides};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_resurgence"))
}

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

const SQRT: &str = r#"
vars = 2
[ideals]
m = [[1, 0], [0, 1]]
[families.p]
kind = "powers"
ideal = "m"
[families.sq]
kind = "formula"
expr = "m^ceil_sqrt(n)"
[[tasks]]
op = "beta"
a = "p"
b = "sq"
s_max = 10
"#;

#[test]
fn sqrt_beta_table_as_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "job.toml", SQRT);
    let out = dir.path().join("csv");
    let st = bin().args(["--config", cfg.to_str().unwrap(), "--format", "csv", "--out", out.to_str().unwrap()]).status().unwrap();
    assert!(st.success());
    let text = fs::read_to_string(out.join("task00_beta_beta.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("index,value,tag"));
    for s in 1..=10u64 {
        assert_eq!(lines.next().unwrap(), format!("{s},{},finite", s * s + 1));
    }
    assert!(!text.contains('\r'));
}

#[test]
fn triangle_job_reports_two_thirds() {
    let text = fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/triangle.toml")).unwrap();
    let cfg = parse_config(&text).unwrap();
    let report = run(&cfg, &Overrides::default()).unwrap();
    assert!(!report.failed());
    let first = report.tasks[0].result.as_ref().unwrap();
    assert_eq!(first["value"], serde_json::json!({"num": "2", "den": "3"}));
    assert_eq!(first["certification"], "exact");
}

#[test]
fn empty_task_list_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "job.toml", "vars = 1\n");
    let out = bin().args(["--config", cfg.to_str().unwrap()]).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["tasks"], serde_json::json!([]));
}

#[test]
fn failing_task_does_not_stop_the_rest() {
    // no standard Veronese degree and no equivalence: the Rees route refuses
    let text = SQRT.to_string() + "[[tasks]]\nop = \"rho_hat_rees\"\na = \"p\"\nb = \"sq\"\n" + "[[tasks]]\nop = \"rho_window\"\na = \"p\"\nb = \"sq\"\ns_max = 3\nr_max = 20\n";
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "job.toml", &text);
    let out = bin().args(["--config", cfg.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["tasks"][1]["status"], "error");
    assert_eq!(v["tasks"][2]["status"], "ok");
    assert_eq!(v["tasks"][2]["result"]["value"], serde_json::json!({"num": "1", "den": "2"}));
}

#[test]
fn config_errors_exit_two_and_name_everything() {
    let text = SQRT.replace("b = \"sq\"", "b = \"J\"").replace("kind = \"powers\"", "kind = \"powerz\"");
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "job.toml", &text);
    let out = bin().args(["--config", cfg.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("tasks[0]") && err.contains("'J'"), "{err}");
    assert!(err.contains("powerz"), "{err}");
}

#[test]
fn reports_are_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "job.toml", SQRT);
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        assert!(bin().args(["--config", cfg.to_str().unwrap(), "--out", p.to_str().unwrap()]).status().unwrap().success());
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert!(dir.path().join("a.timings.json").exists());
}

#[test]
fn normalized_config_round_trips() {
    let text = fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/triangle.toml")).unwrap();
    let cfg = parse_config(&text).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "job.toml", &text);
    let out = bin().args(["--config", p.to_str().unwrap(), "--normalize"]).output().unwrap();
    let again = parse_config(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(again, cfg);
    assert_eq!(resurgence_cli::run::digest(&again), resurgence_cli::run::digest(&cfg));
}

#[test]
fn flags_beat_config_and_assertions_are_echoed() {
    let text = SQRT.to_string()
        + "[defaults]\nwindow = 7\n"
        + "[families.t]\nkind = \"table\"\nprefix = [\"m\"]\ntail = \"m^n\"\n"
        + "[[tasks]]\nop = \"rho_hat_beta\"\na = \"p\"\nb = \"t\"\ngrid = [4]\nassert = [\"b:filtration\"]\n";
    let cfg = parse_config(&text).unwrap();
    let r = run(&cfg, &Overrides { cutoff: Some(77), ..Default::default() }).unwrap();
    assert_eq!(r.tasks[1].settings.window, 7);
    assert_eq!(r.tasks[1].settings.cutoff, 77);
    assert_eq!(r.tasks[1].assertions, vec!["b:filtration".to_string()]);
    let hyp = &r.tasks[1].result.as_ref().unwrap()["hypotheses"][0];
    assert_eq!(hyp["status"], "user_asserted");
    let bytes = emit::json_bytes(&r);
    assert!(std::str::from_utf8(&bytes).unwrap().contains("\"b:filtration\""));
}

#[test]
fn exceeds_bound_tag_in_csv() {
    let text = SQRT.replace("s_max = 10", "s_max = 3") + "[defaults]\ncutoff = 5\n";
    let cfg = parse_config(&text).unwrap();
    let r = run(&cfg, &Overrides::default()).unwrap();
    let files = emit::csv_files(&r);
    let table = String::from_utf8(files[1].1.clone()).unwrap();
    assert!(table.contains("3,,>5\n"), "{table}");
}
