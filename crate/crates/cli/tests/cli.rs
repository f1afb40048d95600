use std::process::{Command, Output};

fn symdiff(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symdiff")).args(args).output().expect("binary runs")
}

#[test]
fn q3_table_as_csv() {
    let out = symdiff(&["table", "--q", "3", "--format", "csv"]);
    assert!(out.status.success());
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let header: Vec<String> = reader.headers().unwrap().iter().map(str::to_owned).collect();
    assert_eq!(header, ["r", "lo", "hi", "exact", "witness-hex", "method"]);
    let hi: Vec<usize> = reader.records().map(|row| row.unwrap()[2].parse().unwrap()).collect();
    assert_eq!(hi, [0, 4, 6, 6, 4, 4, 2, 2, 4, 4, 6, 6, 4, 0]);
    let manifest: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(manifest["field"]["p"], 3);
}

#[test]
fn json_envelope_carries_manifest() {
    let out = symdiff(&["bounds", "--q", "5", "--r", "10", "--seed", "4"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["manifest"]["seed"], 4);
    assert!(v["result"].is_object());
}

#[test]
fn out_file_gets_manifest_sidecar() {
    let dir = std::env::temp_dir().join(format!("symdiff-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("t5.csv");
    let out =
        symdiff(&["search", "--q", "5", "--method", "dual-sweep", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = std::fs::read_to_string(&path).unwrap();
    assert_eq!(rows.lines().count(), 1 + 32);
    assert!(dir.join("t5.csv.manifest.json").exists());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn verify_exit_codes() {
    assert_eq!(symdiff(&["verify", "--q", "5", "--suite", "lemma1", "--cases", "50"]).status.code(), Some(0));
    assert_eq!(symdiff(&["verify", "--q", "9", "--suite", "baer"]).status.code(), Some(0));
    assert_eq!(symdiff(&["table", "--q", "4"]).status.code(), Some(2));
    assert_eq!(symdiff(&["construct", "--q", "5", "--name", "no-such-thing"]).status.code(), Some(2));
}

#[test]
fn decomp_infeasible_exits_one() {
    let ok = symdiff(&["decomp", "--r", "8", "--m", "14"]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));
    // M must have the parity of the edge count of K_4.
    assert_eq!(symdiff(&["decomp", "--r", "4", "--m", "1"]).status.code(), Some(1));
}
