use std::path::PathBuf;
use std::process::{Command, Output};

use orbitkit::catalog;
use orbitkit::report::{parse_structured, STRUCTURED_HEADER};
use orbitkit::spec_format::parse_spec;
use proptest::prelude::*;

fn spec_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/specs")
        .join(format!("{name}.spec"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orbitkit"))
        .args(args)
        .env_remove("ORBITKIT_SEED")
        .output()
        .expect("binary runs")
}

fn run_spec(cmd: &str, name: &str, extra: &[&str]) -> Output {
    let path = spec_path(name);
    let mut args = vec![cmd, path.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn temp_spec(text: &str) -> tempfile::NamedTempFile {
    let f = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(f.path(), text).unwrap();
    f
}

#[test]
fn orbit_on_heisenberg() {
    let o = run_spec("orbit", "heisenberg", &[]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("e = {2,3}; j = {3}; d = 1; P = λ1"));
}

#[test]
fn classify_expansive_heisenberg() {
    let o = run_spec("classify", "heisenberg_expansive", &[]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("case 1 (NontrivialAction)"), "{text}");
    assert!(text.contains("irreducibility: Irreducible (expansive)"), "{text}");
}

#[test]
fn tiling_monte_carlo() {
    let o = run_spec("tiling", "heisenberg", &["--samples", "10000", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("0 failures / 10000"));
}

#[test]
fn parse_errors_exit_2_with_location() {
    let f = temp_spec("dim 3\nbasis X1 X2 X3\n[X3, X2] = X4\n");
    let o = run(&["orbit", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("3:12") && err.contains("undeclared X4"), "{err}");
}

#[test]
fn validation_failures_exit_3() {
    let f = temp_spec("dim 3\nbasis X1 X2 X3\n[X3, X2] = X1\ndilation 2 2 2\n");
    assert_eq!(run(&["validate", f.path().to_str().unwrap()]).status.code(), Some(3));
    let f = temp_spec("dim 3\nbasis X1 X2 X3\n[X1, X2] = X3\n");
    assert_eq!(run(&["validate", f.path().to_str().unwrap()]).status.code(), Some(3));
}

#[test]
fn precondition_failures_exit_4() {
    let f = temp_spec("dim 3\nbasis X1 X2 X3\n[X3, X2] = X1\n");
    assert_eq!(run(&["classify", f.path().to_str().unwrap()]).status.code(), Some(4));
    assert_eq!(run_spec("tiling", "heisenberg_trivial", &[]).status.code(), Some(4));
    assert_eq!(run(&["orbit", "/nonexistent/file.spec"]).status.code(), Some(4));
}

#[test]
fn every_golden_file_validates() {
    for (name, _) in catalog::ALL {
        let o = run_spec("validate", name, &[]);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{name}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
}

#[test]
fn reports_are_byte_identical() {
    let args = ["--format", "structured", "--samples", "2000", "--seed", "11"];
    let a = run_spec("report", "five_dim", &args);
    let b = run_spec("report", "five_dim", &args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with(STRUCTURED_HEADER));
}

#[test]
fn env_seed_overrides_flag() {
    let path = spec_path("heisenberg");
    let o = Command::new(env!("CARGO_BIN_EXE_orbitkit"))
        .args(["tiling", path.to_str().unwrap(), "--samples", "100", "--seed", "1"])
        .env("ORBITKIT_SEED", "42")
        .output()
        .unwrap();
    assert!(stdout(&o).contains("seed: 42"));
}

#[test]
fn structured_report_round_trips() {
    for name in ["heisenberg", "heisenberg_trivial", "free2step"] {
        let args = ["--format", "structured", "--samples", "1000"];
        let first = run_spec("report", name, &args);
        let f = temp_spec(&stdout(&first));
        let mut again = vec!["report", f.path().to_str().unwrap()];
        again.extend_from_slice(&args);
        let second = run(&again);
        assert_eq!(first.stdout, second.stdout, "{name}");
        let map = parse_structured(&stdout(&second)).unwrap();
        let case = &map["decomposition.case"];
        let irr = &map["irreducibility.verdict"];
        let classify = stdout(&run_spec("classify", name, &[]));
        assert!(classify.starts_with(&format!("case {case} ")), "{name}");
        assert!(classify.contains(&format!("irreducibility: {irr} ")), "{name}");
    }
}

#[test]
fn text_report_lists_sections() {
    let o = run_spec("report", "heisenberg", &["--samples", "500"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for head in [
        "algebra",
        "orbit",
        "dilation",
        "decomposition",
        "irreducibility",
        "tiling",
        "verification",
    ] {
        assert!(text.lines().any(|l| l == head), "missing {head}");
    }
    assert!(text.contains("  verdict: ReducibleLikely"));
}

const EDIT_CHARS: &[char] = &[
    ' ', '\n', '[', ']', ',', '=', '+', '-', '*', '/', '#', '0', '1', '2', '9', 'X', 'Z', 'a', 'x', '?', '.', 'λ',
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(600))]

    #[test]
    fn single_character_edits_never_crash(
        file in 0..catalog::ALL.len(),
        pos in 0usize..10_000,
        op in 0u8..3,
        ch in proptest::sample::select(EDIT_CHARS),
    ) {
        let original = catalog::ALL[file].1;
        let chars: Vec<char> = original.chars().collect();
        let i = pos % (chars.len() + 1);
        let mut edited = chars.clone();
        match op {
            0 => edited.insert(i, ch),
            1 if i < edited.len() => { edited.remove(i); }
            _ if i < edited.len() => edited[i] = ch,
            _ => edited.push(ch),
        }
        let text: String = edited.into_iter().collect();
        match parse_spec(&text) {
            Err(e) => {
                prop_assert!(e.line >= 1 && e.line <= text.lines().count() + 1, "{e}");
                prop_assert!(e.column >= 1, "{e}");
            }
            Ok(doc) => {
                let canon = doc.to_canonical_text();
                prop_assert_eq!(parse_spec(&canon).unwrap(), doc);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn edited_documents_analyse_without_panicking(
        file in 0..catalog::ALL.len(),
        pos in 0usize..10_000,
        ch in proptest::sample::select(&['0', '1', '2', '3', '-', '/', ' '][..]),
    ) {
        let original = catalog::ALL[file].1;
        let mut chars: Vec<char> = original.chars().collect();
        let i = pos % chars.len();
        chars[i] = ch;
        let text: String = chars.into_iter().collect();
        if let Ok(a) = orbitkit::report::Analysis::from_text(&text) {
            let _ = a.orbit_text();
            let _ = a.dilation_text();
            let _ = a.classify_text();
            let _ = a.irreducibility_text();
        }
    }
}
