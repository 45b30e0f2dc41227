use std::process::{Command, Output};

fn sjc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sjc")).args(args).output().expect("run sjc")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn params_small_ti() {
    let out = sjc(&["params", "--family", "ti", "--n", "2", "--d", "1", "--eps", "+", "--delta", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["k"], 4);
    assert_eq!(v["code_size"], "15");
    assert_eq!(v["params"]["family"], "ti");
}

#[test]
fn mindist_ti_3_1() {
    let out = sjc(&["mindist", "--family", "ti", "--n", "3", "--d", "1", "--eps", "+", "--delta", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["min_distance"], 8);
    assert_eq!(v["agrees"], true);
    assert_eq!(v["witness"].as_array().unwrap().len(), 2);
}

#[test]
fn excluded_parameters_exit_2() {
    let out = sjc(&["build", "--family", "nd", "--n", "2", "--d", "1", "--eps", "+", "--epsprime", "+"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("excluded"));
    let out = sjc(&["params", "--family", "ti", "--n", "3", "--d", "3", "--eps", "-"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn forced_build_is_marked() {
    let out = sjc(&["build", "--family", "nd", "--n", "2", "--d", "1", "--eps", "+", "--force"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["non_conforming"], true);
}

#[test]
fn scale_guard_exit_3() {
    let out = sjc(&["build", "--family", "ti", "--n", "5", "--d", "1", "--eps", "+"]);
    assert_eq!(out.status.code(), Some(3));
    let out = sjc(&["verify-sit", "--family", "ti", "--n", "4", "--d", "1", "--eps", "+"]);
    assert_eq!(out.status.code(), Some(3));
    let out = sjc(&["table", "--nmax", "5"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(sjc(&["nope"]).status.code(), Some(2));
    assert_eq!(sjc(&["params", "--family", "xx", "--n", "2", "--d", "1", "--eps", "+"]).status.code(), Some(2));
    assert_eq!(sjc(&["orbits", "--case", "c2", "--eps", "+"]).status.code(), Some(2));
    assert_eq!(sjc(&["orbits", "--case", "c2", "--n", "3", "--t", "2", "--eps", "+"]).status.code(), Some(2));
}

#[test]
fn build_is_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for t in ["1", "4"] {
        let path = dir.path().join(format!("code{t}.json"));
        let p = path.to_str().unwrap();
        let out = sjc(&["--threads", t, "build", "--family", "nd", "--n", "3", "--d", "1", "--eps", "-", "--epsprime", "+", "--out", p]);
        assert_eq!(out.status.code(), Some(0));
        outputs.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    let v: serde_json::Value = serde_json::from_slice(&outputs[0]).unwrap();
    assert_eq!(v["codewords"].as_array().unwrap().len(), 336);
    assert_eq!(v["index"]["order"].as_array().unwrap().len(), 28);
    let first = &v["codewords"][0];
    assert!(first["subspace"].is_array() && first["bits"].is_string());
}

#[test]
fn env_threads_match_flag() {
    let args = ["mindist", "--family", "nd", "--n", "3", "--d", "2", "--eps", "+", "--epsprime", "-", "--strategy", "exhaustive"];
    let a = Command::new(env!("CARGO_BIN_EXE_sjc")).env("SJC_THREADS", "1").args(args).output().unwrap();
    let b = sjc(&{
        let mut v = vec!["--threads", "3"];
        v.extend_from_slice(&args);
        v
    });
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["min_distance"], 3);
}

#[test]
fn verify_sit_and_orbits() {
    let out = sjc(&["verify-sit", "--family", "ti", "--n", "2", "--d", "1", "--eps", "-", "--delta", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["status"], "pass");
    assert_eq!(v["pair_orbit_size"], 8);

    let out = sjc(&["orbits", "--case", "c8", "--n", "3", "--eps", "-"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["omega1"], 12);
    let out = sjc(&["orbits", "--case", "c3", "--m", "1", "--b", "3", "--eps", "+"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn table_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let out = sjc(&["table", "--nmax", "3", "--csv", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let mut rdr = csv::Reader::from_path(&path).unwrap();
    let header: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        header,
        ["family", "n", "d", "eps", "epsprime_or_delta", "k", "code_size", "min_distance", "conjecture_expected", "agrees"]
    );
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 26);
    assert!(rows.iter().all(|r| &r[9] == "true"));
}
