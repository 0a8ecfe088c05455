//! Binary-level tests: exit code contract, trace replay determinism,
//! and instance round-trips.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn jumpsys(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jumpsys"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn validate_fixtures_exit_zero() {
    for name in ["j1.json", "j2.json", "k3.json", "dm_chain.json"] {
        let out = jumpsys(&["validate", fixture(name).to_str().unwrap()]);
        assert_eq!(code(&out), 0, "{name}: {}", stdout(&out));
    }
}

#[test]
fn validate_reports_the_exchange_counterexample() {
    let dir = tempdir();
    let path = dir.join("gap.json");
    std::fs::write(
        &path,
        r#"{"format_version":1,"jump_system":{"type":"explicit","points":[[0,0],[3,0]]},
           "objective":{"constant":6,"terms":[{"type":"linear","slope":-2},{"type":"linear","slope":-1}]}}"#,
    )
    .unwrap();
    let out = jumpsys(&["validate", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains("(x=(0,0), y=(3,0), s=+x1)"), "{text}");
}

#[test]
fn malformed_input_exits_two() {
    let dir = tempdir();
    let path = dir.join("trunc.json");
    std::fs::write(&path, "{\"format_version\":1, \"jump").unwrap();
    let out = jumpsys(&["validate", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    // start outside the system is an input error as well
    let out = jumpsys(&[
        "solve",
        fixture("j1.json").to_str().unwrap(),
        "--algo",
        "refined",
        "--start",
        "2,0",
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn solve_reproduces_the_worked_examples() {
    let out = jumpsys(&[
        "solve",
        fixture("j1.json").to_str().unwrap(),
        "--algo",
        "refined",
    ]);
    assert_eq!(code(&out), 0);
    assert!(
        stdout(&out).contains("final (3,0) value 0 steps 2"),
        "{}",
        stdout(&out)
    );

    let out = jumpsys(&[
        "solve",
        fixture("j2.json").to_str().unwrap(),
        "--algo",
        "refined2",
    ]);
    assert!(stdout(&out).contains("steps 4"), "{}", stdout(&out));

    let out = jumpsys(&[
        "solve",
        fixture("j2.json").to_str().unwrap(),
        "--algo",
        "refined",
    ]);
    assert!(stdout(&out).contains("steps 2"), "{}", stdout(&out));
}

#[test]
fn tpolicy_is_greedy_only() {
    let out = jumpsys(&[
        "solve",
        fixture("j1.json").to_str().unwrap(),
        "--algo",
        "refined",
        "--tpolicy",
        "worst",
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn trace_replay_is_bit_identical() {
    let dir = tempdir();
    let a = dir.join("a.json");
    let b = dir.join("b.json");
    for path in [&a, &b] {
        let out = jumpsys(&[
            "solve",
            fixture("j2.json").to_str().unwrap(),
            "--algo",
            "refined",
            "--out",
            path.to_str().unwrap(),
            "--annotate-mu",
        ]);
        assert_eq!(code(&out), 0);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    // the recorded 2-step refined run sits inside the [⌈µ/2⌉, µ] = [2, 3]
    // bounds
    let out = jumpsys(&[
        "verify",
        fixture("j2.json").to_str().unwrap(),
        "--trace",
        a.to_str().unwrap(),
        "--checks",
        "cor2",
    ]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
}

#[test]
fn verify_checks_pass_on_fixtures() {
    let out = jumpsys(&[
        "verify",
        fixture("j1.json").to_str().unwrap(),
        "--checks",
        "all",
    ]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    for line in stdout(&out).lines() {
        assert!(line.ends_with("pass"), "{line}");
    }
    let out = jumpsys(&[
        "verify",
        fixture("dm_chain.json").to_str().unwrap(),
        "--checks",
        "cor3",
    ]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
}

#[test]
fn verify_flags_the_adversarial_trace() {
    let dir = tempdir();
    let trace = dir.join("worst.json");
    let out = jumpsys(&[
        "solve",
        fixture("j1.json").to_str().unwrap(),
        "--algo",
        "greedy",
        "--tpolicy",
        "worst",
        "--out",
        trace.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let out = jumpsys(&[
        "verify",
        fixture("j1.json").to_str().unwrap(),
        "--trace",
        trace.to_str().unwrap(),
        "--checks",
        "cor1",
    ]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains("µ 3 -> 3"), "{text}");
    // the detour still respects the Ψ bound of the original algorithm
    let out = jumpsys(&[
        "verify",
        fixture("j1.json").to_str().unwrap(),
        "--trace",
        trace.to_str().unwrap(),
        "--checks",
        "thm2",
    ]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
}

#[test]
fn verify_rejects_a_trace_from_another_instance() {
    let dir = tempdir();
    let trace = dir.join("t.json");
    jumpsys(&[
        "solve",
        fixture("j2.json").to_str().unwrap(),
        "--algo",
        "refined",
        "--out",
        trace.to_str().unwrap(),
    ]);
    let out = jumpsys(&[
        "verify",
        fixture("j1.json").to_str().unwrap(),
        "--trace",
        trace.to_str().unwrap(),
        "--checks",
        "cor1",
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn cor3_is_inapplicable_to_jump_systems() {
    let out = jumpsys(&[
        "verify",
        fixture("j1.json").to_str().unwrap(),
        "--checks",
        "cor3",
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn enumerating_solve_refuses_trace_output() {
    let dir = tempdir();
    let out = jumpsys(&[
        "solve",
        fixture("j1.json").to_str().unwrap(),
        "--algo",
        "greedy",
        "--tie",
        "all",
        "--tpolicy",
        "all",
        "--out",
        dir.join("x.json").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
    let out = jumpsys(&[
        "solve",
        fixture("j1.json").to_str().unwrap(),
        "--algo",
        "greedy",
        "--tie",
        "all",
        "--tpolicy",
        "all",
    ]);
    assert_eq!(code(&out), 0);
    // three legal executions: the geodesic, the (1,1) detour, and the
    // (1,0) -> (2,1) detour; all end at the optimum
    assert!(stdout(&out).contains("branches 3"), "{}", stdout(&out));
    assert!(
        stdout(&out).contains("final points (3,0)"),
        "{}",
        stdout(&out)
    );
}

#[test]
fn gen_is_deterministic_and_validates() {
    let dir = tempdir();
    let kinds: [&[&str]; 3] = [
        &["--kind", "graph", "--vertices", "4", "--edges", "6"],
        &["--kind", "box", "--n", "2", "--side", "2"],
        &[
            "--kind", "filtered", "--n", "3", "--side", "2", "--points", "5",
        ],
    ];
    for (k, extra) in kinds.iter().enumerate() {
        let a = dir.join(format!("a{k}.json"));
        let b = dir.join(format!("b{k}.json"));
        for path in [&a, &b] {
            let mut args = vec!["gen", "--seed", "11", "--out", path.to_str().unwrap()];
            args.extend_from_slice(extra);
            let out = jumpsys(&args);
            assert_eq!(code(&out), 0, "{}", stdout(&out));
        }
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
        let out = jumpsys(&["validate", a.to_str().unwrap()]);
        assert_eq!(code(&out), 0, "{}", stdout(&out));
    }
}

#[test]
fn gen_dm_enum_streams_valid_instances() {
    let out = jumpsys(&["gen", "--kind", "dm-enum", "--n", "2"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let dir = tempdir();
    let mut count = 0;
    for line in text.lines() {
        let path = dir.join(format!("dm{count}.json"));
        std::fs::write(&path, line).unwrap();
        let out = jumpsys(&["validate", path.to_str().unwrap()]);
        assert_eq!(code(&out), 0, "line {count}");
        count += 1;
    }
    assert_eq!(count, 15);
}

fn tempdir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!(
        "jumpsys-cli-test-{}-{}",
        std::process::id(),
        std::thread::current()
            .name()
            .unwrap_or("t")
            .replace("::", "-")
    ));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
