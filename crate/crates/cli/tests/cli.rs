use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use serde_json::Value;
use tempfile::TempDir;

fn gfstream(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gfstream"))
        .args(args)
        .env_remove("GFSTREAM_ENTRY_BUDGET")
        .output()
        .expect("binary runs")
}

fn with_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_gfstream"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout));
    })
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).trim().to_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn fingerprint_is_reproducible() {
    let args = ["fingerprint", "--n", "4", "--bits", "1011", "--f", "linear", "--seed", "7"];
    let a = gfstream(&args);
    let b = gfstream(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["n"], 4);
    assert_eq!(v["seed"], 7);
    assert_eq!(v["k"], 8);
    assert_eq!(v["t_hex"], "11b");
    assert_eq!(v["paper_sized"], true);
    assert!(v["tool_version"].as_str().unwrap().starts_with("gfstream "));
    assert!(v.get("paper_encoding").is_none());
    assert_eq!(v["profile"]["conversions"], 1);
    assert_eq!(v["profile"]["bit_reads"], 4);
}

#[test]
fn paper_encoding_adds_the_bit_string() {
    let v = json(&gfstream(&["fingerprint", "--bits", "1011", "--seed", "7", "--paper-encoding"]));
    let enc = v["paper_encoding"].as_str().unwrap();
    // <100, 8 bits, 8 bits>
    assert_eq!(enc.len(), 2 * (3 + 8 + 8) + 4);
    assert!(enc.starts_with("111010"));
}

#[test]
fn stdin_requires_n() {
    let out = with_stdin(&["fingerprint", "--input", "-", "--seed", "1"], b"ab");
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--n"));
}

#[test]
fn stdin_file_and_inline_agree() {
    let dir = TempDir::new().unwrap();
    let file = dir.path().join("in.bin");
    std::fs::write(&file, [0xa5u8, 0x0f]).unwrap();
    let piped = with_stdin(&["fingerprint", "--input", "-", "--n", "16", "--seed", "3"], &[0xa5, 0x0f]);
    let from_file = gfstream(&["fingerprint", "--input", path_str(&file), "--seed", "3"]);
    let inline = gfstream(&["fingerprint", "--bits", "1010010100001111", "--seed", "3"]);
    assert_eq!(piped.status.code(), Some(0));
    assert_eq!(piped.stdout, from_file.stdout);
    assert_eq!(piped.stdout, inline.stdout);

    let text = dir.path().join("in.txt");
    std::fs::write(&text, "1010 0101\n0000 1111\n").unwrap();
    let from_text = gfstream(&["fingerprint", "--input", path_str(&text), "--format", "bits", "--seed", "3"]);
    assert_eq!(from_text.stdout, inline.stdout);
}

#[test]
fn partial_bytes_and_length_errors() {
    let dir = TempDir::new().unwrap();
    let file = dir.path().join("in.bin");
    std::fs::write(&file, [0xa5u8, 0xf0]).unwrap();
    let twelve = gfstream(&["fingerprint", "--input", path_str(&file), "--n", "12", "--seed", "3"]);
    let inline = gfstream(&["fingerprint", "--bits", "101001011111", "--seed", "3"]);
    assert_eq!(twelve.stdout, inline.stdout);

    let extra = gfstream(&["fingerprint", "--input", path_str(&file), "--n", "8", "--seed", "3"]);
    assert_eq!(extra.status.code(), Some(3));
    let short = gfstream(&["fingerprint", "--input", path_str(&file), "--n", "24", "--seed", "3"]);
    assert_eq!(short.status.code(), Some(3));
    let mismatch = gfstream(&["fingerprint", "--bits", "1011", "--n", "5"]);
    assert_eq!(mismatch.status.code(), Some(3));
    let missing = gfstream(&["fingerprint", "--input", path_str(&dir.path().join("nope"))]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn build_then_query_singleton() {
    let dir = TempDir::new().unwrap();
    let sk = dir.path().join("s.spsk");
    let build = gfstream(&["sketch", "build", "--lang", "singleton", "--member", "1011", "--n", "4", "--out", path_str(&sk)]);
    assert_eq!(build.status.code(), Some(0), "{}", String::from_utf8_lossy(&build.stderr));
    let summary = json(&build);
    assert_eq!(summary["k"], 6);
    assert_eq!(summary["entries"], 64);
    assert_eq!(summary["paper_sized"], true);
    assert!(&std::fs::read(&sk).unwrap()[..4] == b"SPSK");

    let accept = gfstream(&["sketch", "query", "--sketch", path_str(&sk), "--bits", "1011", "--seed", "5"]);
    assert_eq!(accept.status.code(), Some(0));
    assert_eq!(stdout(&accept), "accept");

    // a nonmember is accepted for at most a quarter of the seeds
    let mut accepted = 0;
    for seed in 0..40 {
        let seed = seed.to_string();
        let out = gfstream(&["sketch", "query", "--sketch", path_str(&sk), "--bits", "0110", "--seed", &seed]);
        match out.status.code() {
            Some(0) => accepted += 1,
            Some(1) => assert_eq!(stdout(&out), "reject"),
            other => panic!("unexpected exit {other:?}"),
        }
    }
    assert!(accepted <= 10, "{accepted}/40 accepted");
}

#[test]
fn query_with_a_fingerprint_record() {
    let dir = TempDir::new().unwrap();
    let sk = dir.path().join("s.spsk");
    let fp = dir.path().join("fp.json");
    gfstream(&["sketch", "build", "--lang", "singleton", "--member", "1011", "--n", "4", "--out", path_str(&sk)]);
    let made = gfstream(&["fingerprint", "--bits", "1011", "--f", "constant:1", "--seed", "9", "--out", path_str(&fp)]);
    assert_eq!(made.status.code(), Some(0));
    assert!(made.stdout.is_empty());
    let q = gfstream(&["sketch", "query", "--sketch", path_str(&sk), "--fingerprint", path_str(&fp)]);
    assert_eq!(stdout(&q), "accept");

    let other = dir.path().join("other.json");
    gfstream(&["fingerprint", "--bits", "1011", "--k", "5", "--seed", "9", "--out", path_str(&other)]);
    let q = gfstream(&["sketch", "query", "--sketch", path_str(&sk), "--fingerprint", path_str(&other)]);
    assert_eq!(q.status.code(), Some(3));
}

#[test]
fn fp_rate_reports_replay_byte_for_byte() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let base = ["sketch", "fp-rate", "--lang", "seeded-random", "--lang-seed", "3", "--n", "12", "--seed", "21", "--nonmembers", "50"];
    for out in [&a, &b] {
        let mut args = base.to_vec();
        args.extend(["--out", path_str(out)]);
        let run = gfstream(&args);
        assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stderr));
    }
    let bytes = std::fs::read(&a).unwrap();
    assert_eq!(bytes, std::fs::read(&b).unwrap());
    let report: Value = serde_json::from_slice(&bytes).unwrap();
    assert_eq!(report["seed"], 21);
    assert_eq!(report["k"], 11);
    assert_eq!(report["paper_sized"], true);
    assert_eq!(report["bound_held"], true);
    assert!(report["t_hex"].is_string());
    assert!(report["tool_version"].is_string());
    assert_eq!(report["nonmembers"].as_array().unwrap().len(), 50);

    let mut csv_args = base.to_vec();
    csv_args.extend(["--report", "csv"]);
    let csv = stdout(&gfstream(&csv_args));
    assert!(csv.starts_with("# tool_version=gfstream "));
    assert_eq!(csv.lines().count(), 52);
}

#[test]
fn fp_rate_sampled_and_overridden() {
    let out = gfstream(&[
        "sketch", "fp-rate", "--lang", "low-weight", "--c", "1", "--n", "10", "--seed", "4", "--nonmembers", "20",
        "--mode", "sampled", "--draws", "16", "--k", "6",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["paper_sized"], false);
    assert_eq!(v["bound_checked"], false);
    assert_eq!(v["bound_held"], Value::Null);
    assert_eq!(v["mode"]["mode"], "sampled");
}

#[test]
fn budget_refusal_exits_4() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("x.spsk");
    let flag = gfstream(&["sketch", "build", "--lang", "seeded-random", "--lang-seed", "1", "--n", "16", "--budget", "100", "--out", path_str(&out)]);
    assert_eq!(flag.status.code(), Some(4));
    assert!(!out.exists());
    let env = Command::new(env!("CARGO_BIN_EXE_gfstream"))
        .args(["sketch", "fp-rate", "--lang", "seeded-random", "--lang-seed", "1", "--n", "16", "--seed", "1"])
        .env("GFSTREAM_ENTRY_BUDGET", "1000")
        .output()
        .unwrap();
    assert_eq!(env.status.code(), Some(4));
}

#[test]
fn language_from_file() {
    let dir = TempDir::new().unwrap();
    let spec = dir.path().join("lang.json");
    std::fs::write(
        &spec,
        r#"{"name":"pair","density":{"family":"constant","c":2},"language":{"kind":"explicit","members":["0000","1111"]}}"#,
    )
    .unwrap();
    let sk = dir.path().join("s.spsk");
    let out = gfstream(&["sketch", "build", "--lang-file", path_str(&spec), "--n", "4", "--k", "2", "--out", path_str(&sk)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["entries"], 7);
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{").unwrap();
    let out = gfstream(&["sketch", "build", "--lang-file", path_str(&bad), "--n", "4", "--out", path_str(&sk)]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn tally_commands() {
    let stable = |n: &str| stdout(&gfstream(&["tally", "--padding-stable", "--family", "iter-exp", "--k", "1", "--n", n]));
    assert_eq!(stable("2"), "true");
    assert_eq!(stable("1"), "false");
    assert_eq!(stable("20"), "true");
    let far = gfstream(&["tally", "--padding-stable", "--family", "iter-exp", "--k", "2", "--n", "4"]);
    assert_eq!(far.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&far.stderr).contains("out of evaluable range"));

    let v = json(&gfstream(&["tally", "--construct-f", "--density", "identity", "--gap", "polynomial:0:0,2", "--count", "3"]));
    assert_eq!(v["values"], serde_json::json!(["1", "3", "7"]));
    assert_eq!(v["modified"], true);

    let v = json(&gfstream(&["tally", "--validate", "--set", r#"["1","2"]"#, "--density", "identity", "--gap", "polynomial:0:0,2"]));
    assert_eq!(v["valid"], false);
    assert_eq!(v["violation"]["lower"], "1");

    let v = json(&gfstream(&["tally", "--pad", "--set", r#"["1","3"]"#]));
    assert_eq!(v, serde_json::json!(["3", "11"]));

    let v = json(&gfstream(&[
        "tally", "--lemma1", "--set", r#"["2"]"#, "--density", "identity", "--gap", r#"{"family":"iter-exp","k":1,"params":["2"]}"#,
    ]));
    assert_eq!(v["valid"], true);
}

#[test]
fn irreducible_prints_hex() {
    assert_eq!(stdout(&gfstream(&["irreducible", "--k", "4"])), "0x13");
    assert_eq!(stdout(&gfstream(&["irreducible", "--k", "64"])), "0x1000000000000001b");
    assert_eq!(gfstream(&["irreducible", "--k", "0"]).status.code(), Some(3));
}

#[test]
fn bench_smoke() {
    let v = json(&gfstream(&["bench", "--k", "64", "--mib", "0.01", "--seed", "2"]));
    let row = &v["results"][0];
    assert_eq!(row["k"], 64);
    assert!(row["segments_per_sec"].as_f64().unwrap() > 0.0);
    assert!(row["field_ops_per_sec"].as_f64().unwrap() > 0.0);
    assert_eq!(v["seed"], 2);
}

#[test]
fn generated_seeds_are_reported() {
    let out = gfstream(&["fingerprint", "--bits", "1011"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let seed = v["seed"].as_u64().unwrap();
    assert!(String::from_utf8_lossy(&out.stderr).contains(&seed.to_string()));
    let again = gfstream(&["fingerprint", "--bits", "1011", "--seed", &seed.to_string()]);
    assert_eq!(again.stdout, out.stdout);
}
