//! Runs the `leray` binary on every fixture and compares its output with
//! the files in `tests/golden/`. Set `UPDATE_GOLDEN=1` to rewrite them.

mod common;

use std::path::Path;

use common::{golden_path, rendered, run, CASES};
use leray_cli::Report;

fn check_golden(path: &Path, actual: &str) {
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(path, actual).expect("write golden file");
        return;
    }
    let expected = std::fs::read_to_string(path)
        .unwrap_or_else(|_| panic!("missing golden file {}; run with UPDATE_GOLDEN=1", path.display()));
    assert_eq!(actual, expected, "output differs from {}", path.display());
}

/// The table output (plus stderr when the command fails) must match.
#[test]
fn tables_match_golden_files() {
    for case in CASES {
        let (code, text) = rendered(case.args);
        assert_eq!(code, case.exit, "{}: exit code, output: {text}", case.name);
        check_golden(&golden_path(case.name, "txt"), &text);
    }
}

/// Records re-parse to the same data and serialize back to the same text.
#[test]
fn records_round_trip() {
    for case in CASES.iter().filter(|c| c.exit == 0) {
        let mut args = vec!["--format", "records"];
        args.extend_from_slice(case.args);
        let (code, stdout, _) = run(&args);
        assert_eq!(code, 0, "{}", case.name);
        let parsed: Report = serde_json::from_str(&stdout).unwrap_or_else(|e| panic!("{}: {e}", case.name));
        assert_eq!(parsed.to_json() + "\n", stdout, "{}", case.name);
        let again: Report = serde_json::from_str(&parsed.to_json()).unwrap();
        assert_eq!(again, parsed, "{}", case.name);
        check_golden(&golden_path(case.name, "json"), &stdout);
    }
}
