//! End-to-end checks of the `divpart` binary: flag handling, exit codes,
//! JSON round-trips and golden-output stability.

use std::process::{Command, Output};

use divpart_cli::report::SolveReport;
use divpart_core::diversity::{epsilon_of_partition, TypeVector};

fn divpart(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_divpart"))
        .args(args)
        .env_remove("DIVPART_GUARD")
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 output")
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

#[test]
fn diversity_reproduces_island_values() {
    let out = divpart(&["diversity", "--counts", "12,16,20"]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("2.88000 (exact 72/25)"));

    let out = divpart(&["diversity", "--counts", "16,20"]);
    assert!(stdout(&out).contains("1.97561 (exact 81/41)"));

    let out = divpart(&["diversity", "--counts", "9,12,15"]);
    assert!(stdout(&out).contains("2.88000 (exact 72/25)"));
}

#[test]
fn diversity_hill_orders() {
    let out = divpart(&["diversity", "--counts", "1,1,2", "--order", "inf"]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("order inf: 2.00000"));

    let out = divpart(&["diversity", "--counts", "3,0,5", "--order", "0"]);
    assert!(stdout(&out).contains("order 0: 2.00000"));

    let out = divpart(&["diversity", "--counts", "1,2", "--order", "-1"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn malformed_input_exits_2() {
    assert_eq!(exit_code(&divpart(&["diversity", "--counts", "1,x,3"])), 2);
    assert_eq!(exit_code(&divpart(&["diversity", "--counts", "0,0"])), 2);
    assert_eq!(exit_code(&divpart(&["solve", "--budget", "5,7"])), 2); // missing --parts
    assert_eq!(
        exit_code(&divpart(&["solve", "--budget", "5,7", "--parts", "2", "--format", "csv"])),
        2
    );
    assert_eq!(exit_code(&divpart(&["scenario", "unknown"])), 2);
}

#[test]
fn solve_examples_and_exit_codes() {
    let out = divpart(&["solve", "--budget", "5,7", "--parts", "3"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("branch: alg2"));
    assert!(text.contains("(2, 3)"));
    assert!(text.contains("(1, 1)"));
    assert!(text.contains("exact 11/936"));

    let out = divpart(&["solve", "--budget", "6,15", "--parts", "2"]);
    assert!(stdout(&out).contains("branch: perfect"));
    assert!(stdout(&out).contains("exact 0/1"));

    let out = divpart(&["solve", "--budget", "5,7", "--parts", "9"]);
    assert_eq!(exit_code(&out), 3);
    let message = String::from_utf8(out.stderr).unwrap();
    assert!(message.contains("at most 5"), "{message}");
}

#[test]
fn solve_single_type_budget_uses_perfect_branch() {
    let out = divpart(&["solve", "--budget", "7", "--parts", "3"]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("branch: perfect"));

    let out = divpart(&["solve", "--budget", "7", "--parts", "9"]);
    assert_eq!(exit_code(&out), 3);
}

#[test]
fn solve_routes_wide_budgets_to_oracle() {
    let out = divpart(&["solve", "--budget", "6,14,21", "--parts", "2"]);
    assert_eq!(exit_code(&out), 0);
    assert!(String::from_utf8(out.stderr.clone())
        .unwrap()
        .contains("routing"));
    assert!(stdout(&out).contains("branch: oracle"));
    assert!(stdout(&out).contains("exact 792/243745"));
}

#[test]
fn perfect_examples_and_exit_codes() {
    let out = divpart(&["perfect", "--budget", "6,15,21", "--parts", "2"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("feasible"));
    assert!(text.contains("(2, 5, 7)"));
    assert!(text.contains("(4, 10, 14)"));

    let out = divpart(&["perfect", "--budget", "5,7", "--parts", "2"]);
    assert_eq!(exit_code(&out), 3);
    assert!(stdout(&out).contains("max perfect parts (gcd): 1"));

    let out = divpart(&["perfect", "--budget", "8,8,8", "--parts", "8"]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(stdout(&out).matches("(1, 1, 1)").count(), 8);
}

#[test]
fn oracle_examples_and_guard() {
    let out = divpart(&["oracle", "--budget", "1,1", "--parts", "2"]);
    assert!(stdout(&out).contains("exact 1/2"));

    let out = divpart(&["oracle", "--budget", "30,40,50", "--parts", "4"]);
    assert_eq!(exit_code(&out), 4);

    // An explicit guard above the estimate lets the search run; the budget
    // is ten times (3,4,5), so a perfect split exists and is found fast.
    let out = divpart(&[
        "oracle",
        "--budget",
        "30,40,50",
        "--parts",
        "4",
        "--guard",
        "2000000000000",
    ]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("exact 0/1"));

    let out = divpart(&["oracle", "--budget", "1,1", "--parts", "3"]);
    assert_eq!(exit_code(&out), 3);
}

#[test]
fn guard_env_variable_is_honored() {
    let out = Command::new(env!("CARGO_BIN_EXE_divpart"))
        .args(["oracle", "--budget", "30,40,50", "--parts", "4"])
        .env("DIVPART_GUARD", "2000000000000")
        .output()
        .expect("binary runs");
    assert_eq!(exit_code(&out), 0);

    // The explicit flag wins over the environment.
    let out = Command::new(env!("CARGO_BIN_EXE_divpart"))
        .args(["oracle", "--budget", "30,40,50", "--parts", "4", "--guard", "10"])
        .env("DIVPART_GUARD", "2000000000000")
        .output()
        .expect("binary runs");
    assert_eq!(exit_code(&out), 4);
}

#[test]
fn json_report_round_trips_and_reverifies() {
    for args in [
        ["solve", "--budget", "5,7", "--parts", "3"],
        ["solve", "--budget", "6,15", "--parts", "2"],
        ["oracle", "--budget", "6,14,21", "--parts", "2"],
    ] {
        let mut full: Vec<&str> = args.to_vec();
        full.extend(["--format", "json"]);
        let out = divpart(&full);
        assert_eq!(exit_code(&out), 0);
        let report: SolveReport = serde_json::from_str(&stdout(&out)).expect("parses back");
        let budget = TypeVector::new(report.budget.clone()).unwrap();
        let parts: Vec<TypeVector> = report
            .parts
            .iter()
            .map(|p| TypeVector::new(p.clone()).unwrap())
            .collect();
        let eps = epsilon_of_partition(&parts, &budget).unwrap();
        assert_eq!(eps.numer().to_string(), report.epsilon.num, "{args:?}");
        assert_eq!(eps.denom().to_string(), report.epsilon.den, "{args:?}");
    }
}

#[test]
fn scenario_outputs_are_byte_stable() {
    for name in ["islands", "table1", "tentative"] {
        let first = divpart(&["scenario", name]);
        let second = divpart(&["scenario", name]);
        assert_eq!(exit_code(&first), 0);
        assert_eq!(first.stdout, second.stdout, "scenario {name} not stable");
    }
}

#[test]
fn out_flag_writes_the_report_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = divpart(&[
        "solve",
        "--budget",
        "5,7",
        "--parts",
        "2",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).is_empty());
    let body = std::fs::read_to_string(&path).unwrap();
    let report: SolveReport = serde_json::from_str(&body).unwrap();
    assert_eq!(report.epsilon.num, "11");
    assert_eq!(report.epsilon.den, "936");
}

#[test]
fn bench_emits_csv_rows() {
    let out = divpart(&[
        "bench",
        "--max-bits",
        "16",
        "--k-max",
        "8",
        "--trials",
        "5",
        "--seed",
        "42",
    ]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("trial,b1,b2,k,branch,nanos"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 5);
    for row in rows {
        assert_eq!(row.split(',').count(), 6);
    }

    assert_eq!(exit_code(&divpart(&["bench", "--max-bits", "80"])), 2);
    assert_eq!(
        exit_code(&divpart(&["bench", "--format", "json"])),
        2,
        "bench is csv-only"
    );
}
