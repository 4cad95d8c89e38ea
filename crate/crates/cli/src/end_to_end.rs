//! End-to-end runs through [`crate::run`], exactly as `main` sees them:
//! exit codes, output files, config files and byte-identical reruns.

struct Output {
    code: u8,
    stdout: Vec<u8>,
    stderr: Vec<u8>,
}

impl Output {
    fn success(&self) -> bool {
        self.code == 0
    }

    fn code(&self) -> Option<i32> {
        Some(self.code.into())
    }
}

fn polarrep(args: &[&str]) -> Output {
    let o = crate::run(std::iter::once("polarrep").chain(args.iter().copied()));
    Output {
        code: o.code,
        stdout: o.stdout.into_bytes(),
        stderr: o.stderr.into_bytes(),
    }
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr_json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stderr).expect("stderr is JSON")
}

#[test]
fn analyze_reports_exact_capacity() {
    let o = polarrep(&["--reproducible", "analyze", "--family", "reg2", "--assign", "0,1"]);
    assert!(o.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(
        v["report"]["capacity"]["coefficients"],
        serde_json::json!(["1/2", "0/1", "-1/4", "-1/2", "1/4"])
    );
    let o = polarrep(&["--reproducible", "analyze", "--family", "irr4", "--assign", "7,7,7,7"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    for z in v["report"]["per_subword"].as_array().unwrap() {
        assert_eq!(z["text"], "e^4");
    }
}

#[test]
fn reruns_are_byte_identical() {
    let args = ["--reproducible", "simulate", "--r", "2", "--m", "4", "--trials", "500", "--seed", "9"];
    let a = polarrep(&args);
    let b = polarrep(&args);
    assert!(a.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let c = polarrep(&["--reproducible", "--format", "csv", "simulate", "--r", "2", "--m", "4", "--exec", "sequential", "--trials", "500", "--seed", "9"]);
    let d = polarrep(&["--reproducible", "--format", "csv", "simulate", "--r", "2", "--m", "4", "--trials", "500", "--seed", "9"]);
    assert_eq!(c.stdout, d.stdout);
}

#[test]
fn zero_erasure_simulation_has_no_block_errors() {
    let o = polarrep(&["--reproducible", "simulate", "--r", "2", "--m", "5", "--eps", "0", "--trials", "200"]);
    assert!(o.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["report"]["simulation"]["block_errors"], 0);
}

#[test]
fn oracle_mode_matches_analysis() {
    let o = polarrep(&["--reproducible", "simulate", "--oracle", "--r", "2", "--m", "2", "--assign", "0,1"]);
    assert!(o.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["report"]["mode"], "oracle");
    assert_eq!(v["report"]["all_match"], true);
    assert_eq!(v["report"]["bits"].as_array().unwrap().len(), 4);
}

#[test]
fn search_csv_and_requirements() {
    let o = polarrep(&["--format", "csv", "search", "--family", "reg2"]);
    assert!(o.success());
    let csv = stdout(&o);
    assert_eq!(csv.lines().count(), 4);
    assert!(csv.lines().nth(1).unwrap().starts_with("\"{0,1}\",19"));
    let o = polarrep(&["search", "--family", "irr4", "--require-every-point"]);
    assert!(o.success());
    let o = polarrep(&["search", "--family", "reg4", "--require-every-point"]);
    assert_eq!(o.code(), Some(1));
    assert_eq!(stderr_json(&o)["status"], "failed");
}

#[test]
fn curves_csv_header_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("curves.csv");
    let o = polarrep(&["--format", "csv", "--out", path.to_str().unwrap(), "curves"]);
    assert!(o.success());
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(
        text.lines().next().unwrap(),
        "eps,shannon,rep_2,proposed_2,rep_4,proposed_4,irregular_4,rep_8,proposed_8"
    );
    assert_eq!(text.lines().count(), 20);
    let half = text.lines().find(|l| l.starts_with("0.5,")).unwrap();
    let cells: Vec<&str> = half.split(',').collect();
    assert_eq!((cells[2], cells[3]), ("0.375", "0.390625"));
}

#[test]
fn prove_exit_codes() {
    let o = polarrep(&["--reproducible", "prove", "--t", "1,2,3"]);
    assert!(o.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let certs = v["report"]["certificates"].as_array().unwrap();
    assert_eq!(certs.len(), 3);
    assert!(certs.iter().all(|c| c["verdict"] == "certified"));
    let o = polarrep(&["prove", "--custom", "0"]);
    assert_eq!(o.code(), Some(1));
    assert!(stderr_json(&o)["reason"].as_str().unwrap().contains("refuted"));
    let o = polarrep(&["--format", "csv", "prove", "--t", "2"]);
    assert_eq!(stdout(&o).lines().count(), 20);
}

#[test]
fn config_file_under_explicit_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "reproducible = true\n[analyze]\nfamily = \"reg2\"\nassign = \"1,1\"\ngrid = \"1/2\"\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let o = polarrep(&["--config", cfg, "analyze"]);
    assert!(o.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v.get("generated_at").is_none());
    assert_eq!(v["report"]["assignment"], serde_json::json!([1, 1]));
    let o = polarrep(&["--config", cfg, "analyze", "--assign", "0,1"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["report"]["assignment"], serde_json::json!([0, 1]));
    assert_eq!(v["report"]["table"][0]["capacity"]["exact"], "25/64");
}

#[test]
fn bad_input_is_a_json_error() {
    let o = polarrep(&["analyze", "--family", "reg3", "--assign", "0"]);
    assert_eq!(o.code(), Some(2));
    assert_eq!(stderr_json(&o)["status"], "error");
    let o = polarrep(&["curves", "--r", "3"]);
    assert_eq!(o.code(), Some(2));
    let o = polarrep(&["simulate", "--r", "2", "--m", "4", "--oracle"]);
    assert_eq!(o.code(), Some(2), "r·2^m = 32 exceeds the oracle limit");
}
