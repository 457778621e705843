use std::process::{Command, Output};

fn rego(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rego"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn lists_the_whole_catalogue() {
    let text = stdout(&rego(&["list-problems"]));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 20);
    assert!(lines[0].starts_with("name,display_name,de,f_star"));
    assert!(lines.iter().any(|l| l.starts_with("shubert,")));
}

#[test]
fn curve_rows_follow_the_grid() {
    let text = stdout(&rego(&[
        "curves",
        "--de",
        "2",
        "--d-offsets",
        "1",
        "--points",
        "5",
        "--trials",
        "100",
    ]));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "de,d,delta_bar,L_hat,R_star,trials");
    assert_eq!(lines.len(), 6);
    assert!(lines[1..].iter().all(|l| l.starts_with("2,3,")));
}

#[test]
fn writes_json_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("v.json");
    let out = rego(&[
        "verify",
        "--de",
        "2",
        "--d",
        "5",
        "--samples",
        "1000",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(stdout(&out).is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.trim_start().starts_with('['));
    assert!(text.contains("\"ks_statistic\""));
}

#[test]
fn config_file_sets_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(
        &cfg,
        "# small run\ntrials = 2\nmax-evals = 200\nsummary = true\nseed = 3\n",
    )
    .unwrap();
    let cfg = cfg.to_str().unwrap();
    let text = stdout(&rego(&[
        "compare",
        "--problem",
        "branin",
        "--D",
        "10",
        "--config",
        cfg,
    ]));
    assert!(text.starts_with("problem,D,solver,trials,"));
    assert!(text
        .lines()
        .nth(1)
        .unwrap()
        .starts_with("branin,10,direct,2,"));

    let text = stdout(&rego(&[
        "compare",
        "--problem",
        "branin",
        "--D",
        "10",
        "--config",
        cfg,
        "--trials",
        "3",
    ]));
    assert!(text
        .lines()
        .nth(1)
        .unwrap()
        .starts_with("branin,10,direct,3,"));
}

#[test]
fn unknown_config_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "trails = 2\n").unwrap();
    let out = rego(&["list-problems", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("trails"));
}

#[test]
fn bad_input_exits_with_an_error() {
    let out = rego(&["compare", "--problem", "no-such-problem", "--D", "10"]);
    assert_eq!(out.status.code(), Some(2));
    let out = rego(&["success-table", "--pairs", "1:2.2:xyz"]);
    assert!(!out.status.success());
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let args = [
        "success-table",
        "--problems",
        "branin,hartmann3",
        "--D",
        "10,30",
        "--embeddings",
        "15",
        "--seed",
        "9",
        "--cells",
    ];
    let run = |threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_rego"))
            .args(args)
            .env("REGO_THREADS", threads)
            .output()
            .unwrap();
        stdout(&out)
    };
    assert_eq!(run("1"), run("4"));
}
