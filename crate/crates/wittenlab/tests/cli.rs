use std::fs;
use std::path::PathBuf;
use std::process::Command;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use wittenlab::cache::HEADER;
use wittenlab::cli::run;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("wittenlab").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn fields(line: &str) -> Vec<&str> {
    line.split('\t').collect()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("wittenlab-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn psi_record() {
    let (code, out, _) = call(&["--no-timestamp", "psi", "--genus", "2", "--exponents", "4"]);
    assert_eq!(code, 0);
    assert_eq!(fields(out.trim()), ["psi", "g=2;k=4", "1/1152", "computed"]);
}

#[test]
fn hurwitz_record_by_both_methods() {
    for method in ["brute", "frobenius"] {
        let args = ["--no-timestamp", "hurwitz", "--nu", "1,1,1", "--mu", "1,1,1", "--r", "4", "--connected", "--method", method];
        let (code, out, _) = call(&args);
        assert_eq!(code, 0);
        assert_eq!(fields(out.trim())[2], "4", "{method}");
    }
    let (_, out, _) = call(&["--no-timestamp", "hurwitz", "--nu", "3", "--mu", "3", "--r", "0"]);
    assert_eq!(fields(out.trim())[2], "1/3");
}

#[test]
fn virasoro_suite_exits_zero() {
    let status = Command::new(env!("CARGO_BIN_EXE_wittenlab"))
        .args(["--no-timestamp", "verify", "virasoro", "--max-index", "7", "--max-degree", "6"])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(0));
    let text = String::from_utf8(status.stdout).unwrap();
    assert!(text.contains("first-term index n+1"), "{text}");
    assert!(text.lines().last().unwrap().starts_with("summary\tvirasoro\t7/7 pass"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(call(&["frobnicate"]).0, 2);
    assert_eq!(call(&["verify", "nonsense"]).0, 2);
    assert_eq!(call(&["psi", "--genus", "1"]).0, 2);
    assert_eq!(call(&["--precision-bits", "64", "verify", "laplace"]).0, 2);
    assert_eq!(call(&["hurwitz", "--nu", "2", "--mu", "1", "--r", "1"]).0, 2);
    assert_eq!(call(&["hurwitz", "--nu", "1,1,1,1,1,1", "--mu", "1,1,1,1,1,1", "--r", "2", "--method", "brute"]).0, 2);
    let (code, out, _) = call(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("verify"));
}

#[test]
fn timestamp_header_is_optional() {
    let (_, with, _) = call(&["psi", "--genus", "1", "--exponents", "1"]);
    assert!(with.starts_with("# wittenlab "));
    let (_, without, _) = call(&["--no-timestamp", "psi", "--genus", "1", "--exponents", "1"]);
    assert!(!without.contains('#'));
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let base = ["--no-timestamp", "verify", "hurwitz", "--max-degree", "3", "--max-r", "3"];
    let one: Vec<&str> = base.iter().copied().chain(["--threads", "1"]).collect();
    let four: Vec<&str> = base.iter().copied().chain(["--threads", "4"]).collect();
    let a = call(&one);
    let b = call(&four);
    assert_eq!(a.0, 0);
    assert_eq!(a, b);
    assert_eq!(call(&one), a);
}

#[test]
fn table_format_has_a_header() {
    let (code, out, _) = call(&["--no-timestamp", "--format", "table", "verify", "stirling"]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert!(lines.next().unwrap().starts_with("KIND"));
    assert!(out.contains("summary"));
}

#[test]
fn empty_cache_file_is_just_the_header() {
    let path = scratch("empty.tsv");
    let (code, _, _) = call(&["--no-timestamp", "export-cache", path.to_str().unwrap(), "--empty"]);
    assert_eq!(code, 0);
    assert_eq!(fs::read_to_string(&path).unwrap(), format!("{HEADER}\n"));
    let (code, out, _) = call(&["--no-timestamp", "import-cache", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("0/0 pass"));
}

#[test]
fn cache_round_trip_is_exact() {
    let path = scratch("full.tsv");
    let p = path.to_str().unwrap();
    let (code, _, err) = call(&["--no-timestamp", "export-cache", p]);
    assert_eq!(code, 0, "{err}");
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.lines().any(|l| l == "psi\tg=1;k=1\t1/24\tcomputed"));
    for kind in ["hurwitz", "hodge", "series"] {
        assert!(text.lines().any(|l| l.starts_with(kind)), "{kind}");
    }

    let (code, out, _) = call(&["--no-timestamp", "import-cache", p]);
    assert_eq!(code, 0, "{out}");
    let exported: Vec<String> = text.lines().skip(1).map(|l| l.replace("\tcomputed", "")).collect();
    let imported: Vec<String> = out
        .lines()
        .filter(|l| !l.starts_with("summary"))
        .map(|l| l.replace("\tcached", ""))
        .collect();
    assert_eq!(exported, imported);

    // a second export from the imported file is byte-identical
    let again = scratch("again.tsv");
    let (code, _, _) = call(&["--no-timestamp", "--cache", p, "export-cache", again.to_str().unwrap(), "--empty"]);
    assert_eq!(code, 0);
    assert_eq!(fs::read_to_string(&again).unwrap(), text);
}

#[test]
fn cached_values_are_marked() {
    let path = scratch("psi-only.tsv");
    let p = path.to_str().unwrap();
    call(&["--no-timestamp", "export-cache", p, "--kinds", "psi"]);
    let (_, out, _) = call(&["--no-timestamp", "--cache", p, "psi", "--genus", "1", "--exponents", "1"]);
    assert_eq!(fields(out.trim()), ["psi", "g=1;k=1", "1/24", "cached"]);
    let (_, out, _) = call(&["--no-timestamp", "--cache", p, "psi", "--genus", "4", "--exponents", "10"]);
    assert_eq!(fields(out.trim())[3], "computed");
}

#[test]
fn tampered_value_fails_with_its_key() {
    let path = scratch("tampered.tsv");
    let p = path.to_str().unwrap();
    call(&["--no-timestamp", "export-cache", p, "--kinds", "psi"]);
    let text = fs::read_to_string(&path).unwrap().replace("g=1;k=1\t1/24", "g=1;k=1\t1/25");
    fs::write(&path, text).unwrap();
    let (code, out, _) = call(&["--no-timestamp", "import-cache", p]);
    assert_eq!(code, 1);
    assert!(out.lines().any(|l| l.starts_with("failure\tpsi:g=1;k=1\tstored 1/25 recomputed 1/24")), "{out}");
}

#[test]
fn corrupted_lines_are_reported_by_number() {
    let path = scratch("corrupt.tsv");
    let p = path.to_str().unwrap();
    call(&["--no-timestamp", "export-cache", p, "--kinds", "psi,hodge"]);
    let clean = fs::read_to_string(&path).unwrap();
    let n_lines = clean.lines().count();
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..8 {
        let target = rng.gen_range(2..=n_lines);
        let damage = match rng.gen_range(0..4) {
            0 => "not a record".to_string(),
            1 => "psi\tg=1;k=1\t1/0\tcomputed".to_string(),
            2 => "psi\tk=1;g=1\t1/24\tcomputed".to_string(),
            _ => "psi\tg=1;k=1\t1/24\tguessed".to_string(),
        };
        let text: Vec<String> = clean
            .lines()
            .enumerate()
            .map(|(i, l)| if i + 1 == target { damage.clone() } else { l.to_string() })
            .collect();
        fs::write(&path, text.join("\n") + "\n").unwrap();
        let (code, out, _) = call(&["--no-timestamp", "import-cache", p]);
        assert_eq!(code, 1);
        let expected = format!("failure\timport-cache:{p}:{target}\t");
        assert!(out.starts_with(&expected), "line {target}: {out}");
    }
    fs::write(&path, "wittenlab-cache v0\n").unwrap();
    let (_, out, _) = call(&["--no-timestamp", "import-cache", p]);
    assert!(out.starts_with(&format!("failure\timport-cache:{p}:1\t")));
}

#[test]
fn missing_cache_file_is_an_io_failure() {
    let (code, out, err) = call(&["--no-timestamp", "import-cache", "/nonexistent/wittenlab.tsv"]);
    assert_eq!(code, 1);
    assert!(err.contains("/nonexistent/wittenlab.tsv"));
    assert!(out.starts_with("failure\terror\t"));
}

#[test]
fn extract_hodge_reports_the_base_value() {
    let (code, out, _) = call(&["--no-timestamp", "extract-hodge", "--points", "3"]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l == "hodge\tg=1;k=0;lambda=1\t1/24\tcomputed"));
    assert!(out.contains("check\textract-hodge:consistent\tpass"));
}
