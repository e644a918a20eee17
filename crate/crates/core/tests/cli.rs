use std::path::PathBuf;
use std::process::Command as Proc;

use defhull::cli::{fixture, fixtures, run, Command, JobDescription};

fn corpus() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn command_for(name: &str) -> Command {
    match name {
        "torus-rank1" | "wedge" | "twisted-torus" => Command::Cohomology,
        "free-group" | "torus-rank2" => Command::Hull,
        n if n.starts_with("oracle") => Command::Oracle,
        _ => Command::Weights,
    }
}

/// Set `DEFHULL_BLESS=1` to rewrite the corpus from the built-in fixtures.
fn bless() -> bool {
    std::env::var_os("DEFHULL_BLESS").is_some()
}

#[test]
fn jobs_round_trip_through_json() {
    for (name, job) in fixtures() {
        let text = job.to_json();
        assert_eq!(JobDescription::from_json(&text).unwrap(), job, "{name}");
        job.validate().unwrap();
    }
}

#[test]
fn corpus_matches_builtin_fixtures_and_goldens() {
    let dir = corpus();
    for (name, job) in fixtures() {
        let job_path = dir.join(format!("{name}.json"));
        let golden_path = dir.join("golden").join(format!("{name}.json"));
        let report = run(command_for(name), &job).unwrap();
        if bless() {
            std::fs::create_dir_all(dir.join("golden")).unwrap();
            std::fs::write(&job_path, job.to_json() + "\n").unwrap();
            std::fs::write(&golden_path, report.json_string() + "\n").unwrap();
            continue;
        }
        let on_disk = JobDescription::from_json(&std::fs::read_to_string(&job_path).unwrap()).unwrap();
        assert_eq!(on_disk, job, "{name}");
        let golden = std::fs::read_to_string(&golden_path).unwrap();
        assert_eq!(report.json_string() + "\n", golden, "{name}");
    }
}

#[test]
fn output_is_deterministic() {
    for (name, job) in fixtures() {
        let a = run(command_for(name), &job).unwrap();
        let b = run(command_for(name), &job).unwrap();
        assert_eq!(a.json_string(), b.json_string(), "{name}");
    }
}

#[test]
fn corrupted_relator_is_a_mismatch() {
    let r = run(Command::Oracle, &fixture("oracle-corrupted").unwrap()).unwrap();
    assert!(!r.passed);
    assert_eq!(r.exit_code(), 5);
    assert!(r.text.contains("mismatch"));
}

fn bin(args: &[&str], job: Option<&str>) -> (i32, String, String) {
    let dir = std::env::temp_dir().join(format!("defhull-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let mut cmd = Proc::new(env!("CARGO_BIN_EXE_defhull"));
    cmd.args(args);
    if let Some(text) = job {
        let path = dir.join(format!("job-{}.json", args.join("-")));
        std::fs::write(&path, text).unwrap();
        cmd.arg("--input").arg(&path);
    }
    let out = cmd.output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn binary_exit_codes() {
    let torus = fixture("torus-rank1").unwrap().to_json();
    let (code, out, _) = bin(&["cohomology"], Some(&torus));
    assert_eq!((code, out.lines().next()), (0, Some("1 2 1")));

    let (code, _, err) = bin(&["hull"], Some("{\"input\": {\"kind\": \"nonsense\"}}"));
    assert_eq!(code, 2, "{err}");

    let non_flat = r#"{"input": {"kind": "presentation", "generators": ["a"], "relators": ["a^3"]},
                       "transport": [[["2"]]]}"#;
    let (code, _, err) = bin(&["cohomology"], Some(non_flat));
    assert_eq!(code, 3, "{err}");

    let non_mixed = r#"{"input": {"kind": "delta-complex", "fixture": "torus"},
                        "frobenius": {"q": 5, "cell_maps": [[["1"]], [["3","0","0"],["0","3","0"],["-6","-6","9"]], [["9","0"],["0","9"]]]}}"#;
    let (code, _, err) = bin(&["weights"], Some(non_mixed));
    assert_eq!(code, 3, "{err}");
    assert!(err.contains("not mixed"), "{err}");

    let corrupted = fixture("oracle-corrupted").unwrap().to_json();
    let (code, out, _) = bin(&["oracle"], Some(&corrupted));
    assert_eq!(code, 5, "{out}");

    let big = r#"{"input": {"kind": "presentation", "generators": ["a", "b"]}, "field": "F3", "rank": 2,
                  "rings": [{"kind": "truncated", "n": 3}]}"#;
    let (code, _, err) = bin(&["oracle", "--budget", "10"], Some(big));
    assert_eq!(code, 4, "{err}");

    let (code, out, _) = bin(&["selftest"], None);
    assert_eq!(code, 0, "{out}");
    assert!(!out.contains("FAIL"));
}
