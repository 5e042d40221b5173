use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn bwdisc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bwdisc")).args(args).output().expect("spawn bwdisc")
}

fn bwdisc_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_bwdisc"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn bwdisc");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Failures are a single `error: <kind>: ...` line with a nonzero status.
fn assert_one_line_error(o: &Output, kind: &str) {
    assert!(!o.status.success(), "expected failure, got {}", stdout(o));
    let err = stderr(o);
    assert_eq!(err.lines().count(), 1, "stderr: {err}");
    assert!(err.starts_with(&format!("error: {kind}: ")), "stderr: {err}");
}

#[test]
fn family_file_for_the_degree_nine_example() {
    let o = bwdisc(&["family", "--D", "3", "--k", "9", "--e", "1", "--f", "4"]);
    assert!(o.status.success());
    let text = stdout(&o);
    // p = (x^8 + x^7 + x^6 + x^5 + 4x^4 + x^3 + x^2 + x + 1) / 3
    assert!(text.lines().any(|l| l == "p: 1/3,1/3,1/3,1/3,4/3,1/3,1/3,1/3,1/3"), "{text}");
    assert!(text.lines().any(|l| l == "t: 1,0,0,0,1"));
    assert_eq!(text, std::fs::read_to_string(fixture("generic.family")).unwrap());
}

#[test]
fn family_written_to_a_file_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fam.txt");
    let o = bwdisc(&[
        "family", "--D", "7", "--k", "14", "--e", "2", "--f", "3", "--y-lift", "-2", "--output",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("y_lift: -2"));
    let fam: bwdisc::Family = text.parse().unwrap();
    assert_eq!(fam.to_string(), text);
}

#[test]
fn classnum_values() {
    for (disc, h) in [("-2312", "16"), ("-70901505867", "51244"), ("-68928579723", "50526"), ("-3", "1")] {
        let o = bwdisc(&["classnum", "--disc", disc]);
        assert!(o.status.success(), "{}", stderr(&o));
        assert_eq!(stdout(&o).trim(), h, "disc {disc}");
    }
    assert_one_line_error(&bwdisc(&["classnum", "--disc", "-6"]), "number-theory");
}

#[test]
fn verify_accepts_the_published_curves() {
    for name in ["bn.curve", "generic.curve", "toy.curve"] {
        let o = bwdisc(&["verify", "--curve-file", fixture(name).to_str().unwrap(), "--samples", "8"]);
        assert!(o.status.success(), "{name}: {}", stderr(&o));
        assert_eq!(stdout(&o).trim(), "ok");
    }
}

#[test]
fn verify_rejects_a_perturbed_curve() {
    let text = std::fs::read_to_string(fixture("bn.curve")).unwrap();
    let t_line = text.lines().find(|l| l.starts_with("t: ")).unwrap();
    let t: num_bigint::BigInt = t_line[3..].parse().unwrap();
    let bad = text.replace(t_line, &format!("t: {}", t + 6));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.curve");
    std::fs::write(&path, bad).unwrap();
    let o = bwdisc(&["verify", "--curve-file", path.to_str().unwrap()]);
    assert_one_line_error(&o, "verify");
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn malformed_inputs_fail_with_one_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("junk");
    std::fs::write(&path, "p: 7\nq: 1\n").unwrap();
    assert_one_line_error(&bwdisc(&["verify", "--curve-file", path.to_str().unwrap()]), "cm");
    assert_one_line_error(&bwdisc(&["search", "--family-file", path.to_str().unwrap(), "--from", "1", "--to", "2"]), "family");
    assert_one_line_error(&bwdisc(&["verify", "--curve-file", "/nonexistent/curve"]), "io");
    let o = bwdisc(&["classnum", "--disk", "-3"]);
    assert_one_line_error(&o, "usage");
    assert_eq!(o.status.code(), Some(2));
    assert_one_line_error(&bwdisc(&["family", "--D", "3", "--k", "9", "--e", "1", "--f", "3"]), "family");
    assert_one_line_error(&bwdisc(&["verify", "--curve-file", fixture("bn.curve").to_str().unwrap(), "--samples", "0"]), "usage");
}

#[test]
fn search_improve_verify_pipeline() {
    let fam = fixture("generic.family");
    let o = bwdisc(&["search", "--family-file", fam.to_str().unwrap(), "--from", "134499600", "--to", "134499700"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let records = stdout(&o);
    assert_eq!(records.lines().count(), 1);
    assert!(records.starts_with("p=35698341005790839038787210375794985673959363094188344177147207303 "));
    assert!(records.contains(" cofactor_r=3 "));
    assert!(stderr(&o).contains("progress: 101/101"));

    let o = bwdisc_stdin(&["improve", "--record", "-", "--n", "auto"], &records);
    assert!(o.status.success(), "{}", stderr(&o));
    let improved = stdout(&o);
    assert!(improved.contains(" D_eff=70901505867 k=9 n=153733 "), "{improved}");
    let o = bwdisc_stdin(&["verify", "--record", "-"], &improved);
    assert!(o.status.success(), "{}", stderr(&o));

    let o = bwdisc_stdin(&["improve", "--record", "-", "--n", "7"], &records);
    assert_one_line_error(&o, "search");
}

#[test]
fn search_output_is_independent_of_worker_count() {
    let fam = fixture("toy.family");
    let args = |w: &'static str| {
        bwdisc(&[
            "search", "--family-file", fam.to_str().unwrap(), "--from", "-3000", "--to", "40000", "--min-r-bits", "1",
            "--min-kp-bits", "1", "--workers", w,
        ])
    };
    let (one, two) = (args("1"), args("2"));
    assert!(one.status.success() && two.status.success());
    assert_eq!(one.stdout, two.stdout);
    assert!(!one.stdout.is_empty());
}

#[test]
fn toy_curve_from_the_command_line() {
    let fam = fixture("toy.family");
    let o = bwdisc(&["search", "--family-file", fam.to_str().unwrap(), "--from", "137", "--to", "137"]);
    assert!(o.status.success());
    assert!(stdout(&o).is_empty(), "the toy instance is below the default size bounds");

    let o = bwdisc(&["search", "--family-file", fam.to_str().unwrap(), "--from", "137", "--to", "137", "--min-r-bits", "100"]);
    let o = bwdisc_stdin(&["improve", "--record", "-", "--n", "17"], &stdout(&o));
    assert!(stdout(&o).contains(" D_eff=2312 "));
    let dir = tempfile::tempdir().unwrap();
    let rec = dir.path().join("toy.rec");
    std::fs::write(&rec, stdout(&o)).unwrap();
    let o = bwdisc(&["build-curve", "--record", rec.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let curve = dir.path().join("toy.curve");
    std::fs::write(&curve, stdout(&o)).unwrap();
    let o = bwdisc(&["verify", "--curve-file", curve.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
}

#[test]
fn delta_table_smoke() {
    let o = bwdisc(&["delta-table", "--max", "8", "--workers", "1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("\n1.0 81\n"), "{text}");
    assert!(text.contains("\ntotal 230\n"));
    assert!(text.contains("\nundefined 24\n"));
}

#[test]
fn cocks_pinch_instance() {
    let o = bwdisc(&["cocks-pinch", "--D", "3", "--k", "12", "--r", "1000000003237", "--seed", "0"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let value = |key: &str| -> num_bigint::BigInt {
        text.lines().find_map(|l| l.strip_prefix(&format!("{key}: "))).unwrap().parse().unwrap()
    };
    let (p, t, y) = (value("p"), value("t"), value("y"));
    assert_eq!(&p * 4u32, &t * &t + &y * &y * 3u32);
    assert_one_line_error(&bwdisc(&["cocks-pinch", "--D", "3", "--k", "12", "--r", "1000000003235"]), "family");
}

#[test]
fn density_estimates() {
    let o = bwdisc(&["density", "--family-file", fixture("bn.family").to_str().unwrap(), "--N", "100000"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.starts_with("gcd 1\n"), "{text}");
    assert!(text.lines().last().unwrap().starts_with("expected "));
    // x ≡ 1 (mod 3) is forced by integrality and makes 3 | r(x)
    let o = bwdisc(&["density", "--family-file", fixture("generic.family").to_str().unwrap(), "--N", "100000"]);
    assert!(stdout(&o).starts_with("gcd 3\n"));
}
