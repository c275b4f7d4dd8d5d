use std::process::{Command, Output};

use severi_cli::report::{from_csv, from_json, parse_table};
use severi_cli::verify::CheckRow;
use severi_core::exactalg::{int, rat};

fn severi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_severi"))
        .args(args)
        .env_remove("SEVERI_CACHE_DIR")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn p1xp1_small_classes() {
    let o = severi(&["p1xp1", "--d1", "1", "--d2", "1", "--gmin", "-1", "--gmax", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let (meta, rows) = parse_table(&stdout(&o)).unwrap();
    assert_eq!(meta.convention, "t^n/n!");
    let value = |g: i32, class: &[i32]| rows.iter().find(|r| r.g == g && r.class == class).map(|r| r.value.clone());
    assert_eq!(value(0, &[1, 0]), Some(int(1)));
    assert_eq!(value(0, &[0, 1]), Some(int(1)));
    assert_eq!(value(0, &[1, 1]), Some(int(1)));
    assert_eq!(value(-1, &[1, 1]), Some(int(2)));
    assert!(rows.iter().all(|r| (-1..=1).contains(&r.g)));
}

#[test]
fn hurwitz_degree_two() {
    let (_, rows) = parse_table(&stdout(&severi(&["hurwitz", "--d", "2", "--gmax", "1"]))).unwrap();
    let h = |g: i32, d: i32| rows.iter().find(|r| r.g == g && r.class == [d]).map(|r| r.value.clone());
    assert_eq!(h(0, 1), Some(int(1)));
    assert_eq!(h(0, 2), Some(rat(1, 2)));
    assert_eq!(h(1, 2), Some(rat(1, 2)));
}

#[test]
fn p2_genus_zero() {
    let (meta, rows) = parse_table(&stdout(&severi(&["p2", "--d", "3"]))).unwrap();
    assert_eq!(meta.parameters["connected"], "true");
    let values: Vec<_> = rows.iter().map(|r| (r.g, r.class[0], r.value.clone())).collect();
    assert_eq!(values, vec![(0, 1, int(1)), (0, 2, int(1)), (0, 3, int(12))]);
}

#[test]
fn csv_and_json_round_trip_to_the_same_table() {
    let base = ["p1xp1", "--d1", "2", "--d2", "1", "--gmax", "0"];
    let j = parse_table(&stdout(&severi(&[&base[..], &["--format", "json"]].concat()))).unwrap();
    let c = parse_table(&stdout(&severi(&[&base[..], &["--format", "csv"]].concat()))).unwrap();
    assert!(!j.1.is_empty());
    assert_eq!(j, c);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(severi(&["nonsense"]).status.code(), Some(2));
    assert_eq!(severi(&["p1xp1", "--gmin", "3", "--gmax", "1"]).status.code(), Some(2));
    assert_eq!(severi(&["hurwitz", "--d", "0"]).status.code(), Some(2));
    assert_eq!(severi(&["p1xp1", "--d1", "0", "--d2", "0"]).status.code(), Some(2));
    assert_eq!(severi(&["p1xp1", "--e", "1"]).status.code(), Some(2));
    assert_eq!(severi(&["cache-audit"]).status.code(), Some(2));
    assert_eq!(severi(&["--help"]).status.code(), Some(0));
}

#[test]
fn verify_suite_passes() {
    let o = severi(&["verify", "--prop2", "--nmax", "6", "--commutator", "--smax", "3", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let (meta, rows) = from_csv::<CheckRow>(&stdout(&o)).unwrap();
    assert_eq!(meta.pass, Some(true));
    assert_eq!(rows.iter().filter(|r| r.suite == "prop2").count(), 6);
    assert_eq!(rows.iter().filter(|r| r.suite == "commutator").count(), 4);
}

#[test]
fn small_t_order_is_raised_with_notice() {
    let o = severi(&["p1xp1", "--d1", "1", "--d2", "1", "--gmax", "0", "--t-order", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("raising t-order"));
    let (meta, _) = parse_table(&stdout(&o)).unwrap();
    assert_eq!(meta.parameters["t_order"], "3");
}

#[test]
fn config_file_with_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("severi.conf");
    std::fs::write(&conf, "d1 = 2\nd2 = 2\nformat = csv\n").unwrap();
    let o = severi(&["--config", conf.to_str().unwrap(), "p1xp1", "--d2", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let (meta, _) = parse_table(&stdout(&o)).unwrap();
    assert_eq!(meta.parameters["d1"], "2");
    assert_eq!(meta.parameters["d2"], "1");
    assert!(stdout(&o).starts_with("# schema_version=1"));

    std::fs::write(&conf, "colour = blue\n").unwrap();
    assert_eq!(severi(&["--config", conf.to_str().unwrap(), "p2"]).status.code(), Some(2));
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let o = severi(&["rational", "--a", "1", "--output", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), severi(&["rational", "--a", "1"]).stdout);
}

#[test]
fn cache_is_transparent_and_audited() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let args = ["p1xp1", "--d1", "2", "--d2", "2", "--gmax", "0"];
    let plain = severi(&args).stdout;
    let cold = severi(&[&["--cache-dir", cache][..], &args].concat());
    let warm = severi(&[&["--cache-dir", cache][..], &args].concat());
    assert_eq!(cold.stdout, plain);
    assert_eq!(warm.stdout, plain);

    let audit = severi(&["--cache-dir", cache, "cache-audit"]);
    assert_eq!(audit.status.code(), Some(0));
    let (meta, rows) = from_json::<serde_json::Value>(&stdout(&audit)).unwrap();
    assert_eq!(meta.pass, Some(true));
    assert_eq!(rows.len(), 3);

    // a tampered payload that still parses is caught by the audit
    let entry = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().path())
        .find(|p| std::fs::read_to_string(p).unwrap().starts_with("severi-cache v1 block/MS@v1/2"))
        .unwrap();
    let text = std::fs::read_to_string(&entry).unwrap();
    std::fs::write(&entry, text.replacen("\"1\"", "\"7\"", 1)).unwrap();
    let audit = severi(&["--cache-dir", cache, "cache-audit"]);
    assert_eq!(audit.status.code(), Some(3));
    assert!(stdout(&audit).contains("mismatch"));

    // garbage is ignored and recomputed by ordinary commands
    std::fs::write(&entry, "severi-cache v1 block/MS@v1/2\n{ not json").unwrap();
    let again = severi(&[&["--cache-dir", cache][..], &args].concat());
    assert_eq!(again.stdout, plain);
    assert!(String::from_utf8_lossy(&again.stderr).contains("corrupt"));
}
