//! Command lines exercised by the golden-file and acceptance tests.

use std::path::PathBuf;
use std::process::Command;

pub struct Case {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub exit: i32,
}

pub const CASES: &[Case] = &[
    Case { name: "cohomology_rp2", args: &["cohomology", "fixtures/rp2.json"], exit: 0 },
    Case { name: "cohomology_rp2_q", args: &["--coefficients", "q", "cohomology", "fixtures/rp2.json"], exit: 0 },
    Case { name: "cohomology_torus", args: &["cohomology", "fixtures/torus.json"], exit: 0 },
    Case { name: "cohomology_klein", args: &["cohomology", "fixtures/klein.json"], exit: 0 },
    Case { name: "cohomology_klein_z2", args: &["cohomology", "fixtures/klein.json", "--sheaf", "fixtures/constant_z2.json"], exit: 0 },
    Case { name: "cohomology_sphere", args: &["cohomology", "fixtures/sphere.json"], exit: 0 },
    Case { name: "cohomology_circle", args: &["cohomology", "fixtures/circle.json"], exit: 0 },
    Case { name: "cohomology_twisted_circle", args: &["cohomology", "fixtures/circle.json", "--sheaf", "fixtures/twisted_circle_sheaf.json"], exit: 0 },
    Case { name: "cohomology_point", args: &["cohomology", "fixtures/point.json"], exit: 0 },
    Case { name: "cohomology_empty", args: &["cohomology", "fixtures/empty.json"], exit: 0 },
    Case { name: "cohomology_bad_incidence", args: &["cohomology", "fixtures/bad_incidence.json"], exit: 2 },
    Case { name: "cohomology_malformed", args: &["cohomology", "fixtures/malformed.json"], exit: 2 },
    Case { name: "cohomology_missing_file", args: &["cohomology", "fixtures/does_not_exist.json"], exit: 2 },
    Case { name: "pages_d2", args: &["pages", "fixtures/d2_complex.json", "fixtures/d2_filtration.json"], exit: 0 },
    Case { name: "pages_d2_generators", args: &["pages", "fixtures/d2_complex.json", "fixtures/d2_generators.json"], exit: 0 },
    Case { name: "pages_d2_dec", args: &["pages", "fixtures/d2_complex.json", "fixtures/d2_filtration.json", "--dec"], exit: 0 },
    Case { name: "pages_trivial", args: &["pages", "fixtures/d2_complex.json", "fixtures/trivial_filtration.json"], exit: 0 },
    Case { name: "pages_pair", args: &["pages", "fixtures/pair_complex.json", "fixtures/pair_filtration.json"], exit: 0 },
    Case { name: "pages_pair_q", args: &["--coefficients", "q", "pages", "fixtures/pair_complex.json", "fixtures/pair_filtration.json"], exit: 0 },
    Case { name: "pages_bad_filtration", args: &["pages", "fixtures/d2_complex.json", "fixtures/skeleta.json"], exit: 2 },
    Case { name: "couple_d2", args: &["couple", "fixtures/d2_complex.json", "fixtures/d2_filtration.json"], exit: 0 },
    Case { name: "couple_trivial", args: &["couple", "fixtures/d2_complex.json", "fixtures/trivial_filtration.json"], exit: 0 },
    Case { name: "couple_pair", args: &["couple", "fixtures/pair_complex.json", "fixtures/pair_filtration.json"], exit: 0 },
    Case { name: "leray_klein", args: &["leray", "fixtures/klein_over_circle.json"], exit: 0 },
    Case { name: "leray_klein_verify", args: &["leray", "fixtures/klein_over_circle.json", "--verify"], exit: 0 },
    Case { name: "leray_klein_vertex_filtration", args: &["leray", "fixtures/klein_over_circle.json", "--filtration", "fixtures/circle_vertex_levels.json", "--verify"], exit: 0 },
    Case { name: "leray_klein_z2", args: &["leray", "fixtures/klein_over_circle.json", "--sheaf", "fixtures/constant_z2.json", "--verify"], exit: 0 },
    Case { name: "leray_torus_verify", args: &["leray", "fixtures/torus_over_circle.json", "--verify"], exit: 0 },
    Case { name: "leray_torus_q", args: &["--coefficients", "q", "leray", "fixtures/torus_over_circle.json", "--verify"], exit: 0 },
    Case { name: "leray_rp2_identity", args: &["leray", "fixtures/rp2_identity.json", "--verify"], exit: 0 },
    Case { name: "leray_annulus_pair", args: &["leray", "fixtures/annulus_over_interval.json", "--pairs", "v0,v1", "--verify"], exit: 0 },
    Case { name: "leray_annulus_pair_empty", args: &["leray", "fixtures/annulus_over_interval.json", "--pairs", "", "--verify"], exit: 0 },
    Case { name: "leray_annulus_pair_all", args: &["leray", "fixtures/annulus_over_interval.json", "--pairs", "v0,v1,e", "--verify"], exit: 0 },
    Case { name: "leray_annulus_not_member", args: &["leray", "fixtures/annulus_over_interval.json", "--pairs", "v0", "--verify"], exit: 2 },
    Case { name: "leray_sphere_not_cellular", args: &["leray", "fixtures/sphere_identity.json", "--filtration", "fixtures/sphere_vertex_levels.json", "--verify"], exit: 2 },
    Case { name: "leray_wrong_document", args: &["leray", "fixtures/rp2.json"], exit: 2 },
    Case { name: "verify_dec_d2", args: &["verify-dec", "fixtures/d2_complex.json", "fixtures/d2_filtration.json"], exit: 0 },
    Case { name: "verify_dec_pair", args: &["verify-dec", "fixtures/pair_complex.json", "fixtures/pair_filtration.json"], exit: 0 },
    Case { name: "verify_dec_random", args: &["verify-dec", "--random", "20", "--seed", "1"], exit: 0 },
    Case { name: "verify_dec_nothing", args: &["verify-dec"], exit: 2 },
    Case { name: "unknown_command", args: &["frobnicate"], exit: 2 },
];

pub fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_leray"))
        .args(args)
        .current_dir(manifest_dir())
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).expect("utf-8"),
        String::from_utf8(out.stderr).expect("utf-8"),
    )
}

/// Stdout, followed by the first stderr line when the command failed: what
/// the golden `.txt` files record.
pub fn rendered(args: &[&str]) -> (i32, String) {
    let (code, stdout, stderr) = run(args);
    let mut text = stdout;
    if code != 0 {
        // clap's usage text is long; keep its first line only.
        let first = stderr.lines().next().unwrap_or_default();
        text.push_str(&format!("[stderr] {first}\n"));
    }
    (code, text)
}

pub fn golden_path(name: &str, extension: &str) -> PathBuf {
    manifest_dir().join("tests/golden").join(format!("{name}.{extension}"))
}
