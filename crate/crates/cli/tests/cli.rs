use std::process::Command;

use mcmullen_cli::{run, EXIT_FAIL, EXIT_OK, EXIT_USAGE};

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("mcm").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn value<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
        .unwrap_or_else(|| panic!("no {key} in {text}"))
}

#[test]
fn centers_report_the_overlap_parameter() {
    let (code, out, _) = call(&["centers", "--n", "11"]);
    assert_eq!(code, EXIT_OK);
    let a: f64 = value(&out, "overlap_a").parse().unwrap();
    assert!((a - 0.25f64.powf(1.1)).abs() < 1e-15);
    let c: f64 = value(&out, "c_plus(overlap_a)").parse().unwrap();
    assert!(c.abs() < 1e-12);

    let (code, out, _) = call(&["centers", "--n", "11", "--a", "0.6"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(value(&out, "ordering"), "I1_left_of_I2");
}

#[test]
fn verify_suites_pass_on_defaults() {
    for suite in ["escape", "symmetries", "main-theorem-a"] {
        let (code, out, err) = call(&["verify", "--suite", suite]);
        assert_eq!(code, EXIT_OK, "{suite}: {err}");
        let summary = out.lines().last().unwrap();
        assert!(
            summary.starts_with(&format!("SUMMARY suite={suite} ")),
            "{summary}"
        );
        assert!(summary.ends_with("failed=0 inconclusive=0"), "{summary}");
    }
}

#[test]
fn verify_accepts_degree_ranges_and_json() {
    let (code, out, _) = call(&[
        "verify",
        "--suite",
        "main-theorem-b1",
        "--n",
        "5..6",
        "--a",
        "2",
        "--k",
        "0",
        "--samples",
        "2",
        "--json",
    ]);
    assert_eq!(code, EXIT_OK);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    let reports = doc.as_array().unwrap();
    // per degree: winding plus center and two boundary parameters
    assert_eq!(reports.len(), 2 * 4);
    assert!(reports.iter().all(|r| r["passed"] == true));
}

#[test]
fn out_of_regime_requests_are_usage_errors() {
    let cases: [(&[&str], &str); 5] = [
        (
            &["verify", "--suite", "main-theorem-b1", "--a", "0.5"],
            "1 ≤ a ≤ 4",
        ),
        (
            &["verify", "--suite", "main-theorem-b2", "--a", "2"],
            "0.1 ≤ a ≤ 1",
        ),
        (
            &["verify", "--suite", "main-theorem-b2", "--n", "9"],
            "n ≥ 11",
        ),
        (
            &["verify", "--suite", "main-theorem-a", "--c", "0.5"],
            "-1 ≤ c ≤ 0",
        ),
        (
            &[
                "verify",
                "--suite",
                "main-theorem-b1",
                "--k",
                "5",
                "--n",
                "5",
            ],
            "k ≤ n - 1",
        ),
    ];
    for (args, needle) in cases {
        let (code, _, err) = call(args);
        assert_eq!(code, EXIT_USAGE, "{args:?}");
        assert!(err.contains(needle), "{args:?}: {err}");
    }
    let (code, _, _) = call(&["verify", "--suite", "nonsense"]);
    assert_eq!(code, EXIT_USAGE);
    let (code, _, _) = call(&["render-julia", "--n", "3", "--a", "1", "--out", "x.ppm"]);
    assert_eq!(code, EXIT_USAGE);
    let (code, _, _) = call(&["scan", "--n", "5"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn failing_escape_certificate_exits_one() {
    let (code, out, _) = call(&[
        "verify",
        "--suite",
        "escape",
        "--n",
        "3",
        "--a",
        "0.01",
        "--c",
        "-1.1576",
        "--escape-radius",
        "1.05",
    ]);
    assert_eq!(code, EXIT_FAIL);
    assert!(out.contains("failed=1"));
}

#[test]
fn help_goes_to_stdout() {
    let (code, out, _) = call(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("render-cplane"));
}

#[test]
fn render_writes_a_ppm_with_negative_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("j.ppm");
    let (code, _, err) = call(&[
        "render-julia",
        "--n",
        "5",
        "--a",
        "0.7",
        "--c",
        "-0.75,0",
        "--re",
        "-1.5",
        "--re2",
        "1.5",
        "--im",
        "-1.5",
        "--im2",
        "1.5",
        "--w",
        "24",
        "--h",
        "16",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    let bytes = std::fs::read(&path).unwrap();
    assert!(bytes.starts_with(b"P6\n24 16\n255\n"));
    assert_eq!(bytes.len(), 13 + 24 * 16 * 3);
}

#[test]
fn custom_palette_changes_the_image() {
    let dir = tempfile::tempdir().unwrap();
    let render = |name: &str, extra: &[&str]| {
        let path = dir.path().join(name);
        let mut args = vec![
            "render-cplane",
            "--n",
            "3",
            "--a",
            "0.5",
            "--w",
            "16",
            "--h",
            "16",
            "--out",
            path.to_str().unwrap(),
        ];
        args.extend_from_slice(extra);
        assert_eq!(call(&args).0, EXIT_OK);
        std::fs::read(path).unwrap()
    };
    let default = render("d.ppm", &[]);
    assert_eq!(default, render("e.ppm", &["--plus-color", "0,255,0"]));
    assert_ne!(default, render("f.ppm", &["--plus-color", "255,0,0"]));
}

#[test]
fn scan_writes_csv_and_finds_the_center() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.csv");
    let (code, out, _) = call(&[
        "scan",
        "--n",
        "5",
        "--a",
        "1",
        "--k",
        "0",
        "--samples",
        "32",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("nonempty=true"), "{out}");
    assert!(out.contains("contains_center=true"), "{out}");
    let csv = std::fs::read_to_string(&path).unwrap();
    assert_eq!(csv.lines().count(), 1 + 32 * 32);
}

#[test]
fn binary_exit_codes_and_thread_cap() {
    let bin = env!("CARGO_BIN_EXE_mcm");
    let status = Command::new(bin)
        .args(["centers", "--n", "5"])
        .output()
        .unwrap()
        .status;
    assert_eq!(status.code(), Some(EXIT_OK));
    let status = Command::new(bin).arg("frobnicate").output().unwrap().status;
    assert_eq!(status.code(), Some(EXIT_USAGE));
    let out = Command::new(bin)
        .args(["centers", "--n", "5"])
        .env("MCM_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_USAGE));

    let dir = tempfile::tempdir().unwrap();
    let render = |threads: &str, name: &str| {
        let path = dir.path().join(name);
        let status = Command::new(bin)
            .args([
                "render-aplane",
                "--n",
                "5",
                "--c",
                "0.5",
                "--w",
                "40",
                "--h",
                "40",
                "--out",
            ])
            .arg(&path)
            .env("MCM_THREADS", threads)
            .status()
            .unwrap();
        assert_eq!(status.code(), Some(EXIT_OK));
        std::fs::read(path).unwrap()
    };
    assert_eq!(render("1", "one.ppm"), render("4", "four.ppm"));
}

#[test]
fn readme_figures_regenerate_bit_identically() {
    use sha2::{Digest, Sha256};

    let readme =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../README.md")).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let lines: Vec<&str> = readme.lines().collect();
    let mut checked = 0;
    for pair in lines.windows(2) {
        let (Some(cmd), Some(digest)) = (
            pair[0].strip_prefix("mcm render-"),
            pair[1].strip_prefix("# sha256 "),
        ) else {
            continue;
        };
        let mut args: Vec<String> = format!("render-{cmd}")
            .split_whitespace()
            .map(String::from)
            .collect();
        let out = args.iter().position(|a| a == "--out").unwrap() + 1;
        let path = dir.path().join(&args[out]);
        args[out] = path.to_str().unwrap().to_string();
        let argv: Vec<&str> = args.iter().map(String::as_str).collect();
        assert_eq!(call(&argv).0, EXIT_OK, "{cmd}");
        let bytes = std::fs::read(&path).unwrap();
        let hex: String = Sha256::digest(&bytes)
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect();
        assert_eq!(hex, digest.trim(), "{cmd}");
        checked += 1;
    }
    assert_eq!(checked, 4);
}
