//! Runs the query corpus in `tests/golden` through the binary and compares
//! with the recorded outputs. Set `FATF_BLESS=1` to re-record.

use std::path::Path;
use std::process::Command;

#[test]
fn golden_outputs() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let dir_str = dir.to_str().unwrap();
    let bless = std::env::var_os("FATF_BLESS").is_some();
    let queries = std::fs::read_to_string(dir.join("queries.jsonl")).unwrap();
    let mut mismatches = Vec::new();
    for (i, line) in queries.lines().filter(|l| !l.trim().is_empty()).enumerate() {
        let args: Vec<String> = serde_json::from_str(line).unwrap();
        let args: Vec<String> = args.iter().map(|a| a.replace("{dir}", dir_str)).collect();
        let out = Command::new(env!("CARGO_BIN_EXE_fatf"))
            .args(&args)
            .env_remove("FATF_BOUND")
            .env_remove("FATF_MAXLEN")
            .env_remove("FATF_GRID")
            .output()
            .unwrap();
        let got = format!(
            "exit {}\n{}",
            out.status.code().unwrap(),
            String::from_utf8(out.stdout).unwrap().replace(dir_str, "{dir}")
        );
        let path = dir.join("expected").join(format!("{:03}.out", i + 1));
        if bless {
            std::fs::write(&path, &got).unwrap();
            continue;
        }
        let want = std::fs::read_to_string(&path).unwrap_or_default();
        if want != got {
            mismatches.push(format!("query {} {line}\n--- expected\n{want}--- got\n{got}", i + 1));
        }
    }
    assert!(mismatches.is_empty(), "{}", mismatches.join("\n"));
}

#[test]
fn exit_codes_follow_answers() {
    let endo = r#"{"type":"I","n":2,"m":1,"phi":["x2","x1"],"Q":[[1]],"P":[[1],[1]]}"#;
    let run = |args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_fatf")).args(args).output().unwrap().status.code().unwrap()
    };
    assert_eq!(run(&["brp", endo, "x1 t^(0)", "x2 t^(1)"]), 0);
    assert_eq!(run(&["brp", endo, "x1 t^(0)", "x2 t^(2)"]), 1);
    assert_eq!(run(&["--bound", "2", "orbit", "--M", "[[1,1],[1,0]]", "--x", "(1,0)", "--y", "(89,55)"]), 2);
    assert_eq!(run(&["brp", endo, "x1 t^(0)", "x3"]), 3);
}
