//! End-to-end tests of the `mfl` binary: exit codes, piping, manifests,
//! trace files, and the documented command examples.

use std::path::Path;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn mfl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mfl"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn mfl_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mfl"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn mfl_stdin(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_mfl"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary spawns");
    use std::io::Write;
    child
        .stdin
        .take()
        .expect("stdin piped")
        .write_all(stdin.as_bytes())
        .expect("stdin writes");
    child.wait_with_output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

/// A small connected instance used across tests.
fn gen_fixture(dir: &Path) -> String {
    let path = dir.join("inst.json").to_str().unwrap().to_string();
    let out = mfl(&[
        "gen",
        "random-graph",
        "--n",
        "10",
        "--k",
        "3",
        "--clients",
        "5",
        "--weights",
        "1,1",
        "--demands",
        "1,2",
        "--seed",
        "7",
        "--out",
        &path,
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    path
}

#[test]
fn gen_then_exact_reproduces_the_documented_trap_total() {
    let gen = mfl(&["gen", "locality-gap", "--p", "1", "--D", "7", "--M", "100000000"]);
    assert_eq!(code(&gen), 0);
    let instance = String::from_utf8(gen.stdout).unwrap();
    let exact = mfl_stdin(&["exact", "--in", "-"], &instance);
    assert_eq!(code(&exact), 0, "{}", String::from_utf8_lossy(&exact.stderr));
    let solution = stdout_json(&exact);
    assert_eq!(solution["total"], 2);
    assert_eq!(solution["destinations"], serde_json::json!([0, 1]));
}

#[test]
fn solving_the_trap_from_the_client_set_is_certified_with_no_moves() {
    let dir = tempfile::tempdir().unwrap();
    let gap = dir.path().join("gap.json");
    let gap = gap.to_str().unwrap();
    assert_eq!(
        code(&mfl(&["gen", "locality-gap", "--p", "4", "--D", "1000", "--out", gap])),
        0
    );
    let trace = dir.path().join("trace.csv");
    let out = mfl(&[
        "solve",
        "--in",
        gap,
        "--init",
        "list:5,6,7,8,9",
        "--swaps",
        "4",
        "--trace",
        trace.to_str().unwrap(),
        "--out",
        "-",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let solution = stdout_json(&out);
    assert_eq!(solution["total"], 5000, "(p+1)·D with no escape");
    let trace = std::fs::read_to_string(trace).unwrap();
    assert_eq!(
        trace.lines().count(),
        1,
        "header only — the trap admits no improving move: {trace}"
    );
}

#[test]
fn solve_writes_solution_trace_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let inst = gen_fixture(dir.path());
    let sol_path = dir.path().join("sol.json");
    let sol_path = sol_path.to_str().unwrap();
    let trace_path = dir.path().join("trace.csv");
    let trace_path = trace_path.to_str().unwrap();
    let out = mfl(&[
        "solve", "--in", &inst, "--swaps", "2", "--out", sol_path, "--trace", trace_path,
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));

    let solution: Value =
        serde_json::from_str(&std::fs::read_to_string(sol_path).unwrap()).unwrap();
    assert!(solution["total"].is_u64());

    let trace = std::fs::read_to_string(trace_path).unwrap();
    assert!(trace.starts_with("iter,delta,total_before,total_after,X,Y,candidates,millis"));

    let manifest: Value = serde_json::from_str(
        &std::fs::read_to_string(format!("{sol_path}.manifest.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(manifest["command"], "solve");
    assert!(manifest["inputs"][&inst].is_string(), "input hash recorded");
    assert!(manifest["outputs"][sol_path].is_string(), "output hash recorded");
    assert_eq!(manifest["timing_outputs"], serde_json::json!([trace_path]));
    let hash = manifest["outputs"][sol_path].as_str().unwrap();
    assert_eq!(hash.len(), 64, "sha-256 hex");
}

#[test]
fn manifest_goes_to_stderr_when_piping() {
    let dir = tempfile::tempdir().unwrap();
    let inst = gen_fixture(dir.path());
    let out = mfl(&["solve", "--in", &inst]);
    assert_eq!(code(&out), 0);
    assert!(stdout_json(&out)["total"].is_u64(), "stdout stays pure JSON");
    let stderr = String::from_utf8(out.stderr).unwrap();
    let manifest: Value = serde_json::from_str(&stderr)
        .unwrap_or_else(|e| panic!("stderr is not a manifest ({e}): {stderr}"));
    assert_eq!(manifest["command"], "solve");
    assert!(manifest["outputs"]["<stdout>"].is_string());
}

#[test]
fn solve_exit_codes_follow_the_contract() {
    let dir = tempfile::tempdir().unwrap();
    let inst = gen_fixture(dir.path());

    // Flag validation failure → 1.
    let bad = mfl(&["solve", "--in", &inst, "--swaps", "0"]);
    assert_eq!(code(&bad), 1);
    assert!(String::from_utf8_lossy(&bad.stderr).contains("rho must be ≥ 1"));

    // First-improvement runs never certify → 2.
    let fi = mfl(&["solve", "--in", &inst, "--first-improvement", "--out", "-"]);
    assert_eq!(code(&fi), 2);
    assert!(String::from_utf8_lossy(&fi.stderr).contains("not certified"));

    // Iteration cap → 2, on an instance known to need several moves.
    let multi = dir.path().join("multi.json");
    let multi = multi.to_str().unwrap();
    assert_eq!(
        code(&mfl(&[
            "gen",
            "random-graph",
            "--n",
            "14",
            "--k",
            "4",
            "--clients",
            "8",
            "--weights",
            "1,3",
            "--demands",
            "1,3",
            "--seed",
            "4",
            "--out",
            multi,
        ])),
        0
    );
    let free = mfl(&["solve", "--in", multi, "--out", "-"]);
    assert_eq!(code(&free), 0, "uncapped run certifies");
    let capped = mfl(&["solve", "--in", multi, "--max-iters", "1", "--out", "-"]);
    assert_eq!(code(&capped), 2);
    assert!(String::from_utf8_lossy(&capped.stderr).contains("iteration cap"));

    // Unparseable instance → 1.
    let garbage = mfl_stdin(&["solve", "--in", "-"], "{\"version\": 99}");
    assert_eq!(code(&garbage), 1);
}

#[test]
fn exact_refuses_oversized_enumerations_with_exit_3() {
    let gen = mfl(&[
        "gen",
        "random-euclidean",
        "--n",
        "30",
        "--k",
        "10",
        "--clients",
        "5",
        "--seed",
        "1",
    ]);
    assert_eq!(code(&gen), 0);
    let instance = String::from_utf8(gen.stdout).unwrap();
    let refused = mfl_stdin(&["exact", "--in", "-", "--max-subsets", "1000"], &instance);
    assert_eq!(code(&refused), 3);
    assert!(String::from_utf8_lossy(&refused.stderr).contains("refused"));
}

#[test]
fn verify_passes_a_self_pair_and_rejects_a_false_optimality_claim() {
    let dir = tempfile::tempdir().unwrap();
    let inst_path = dir.path().join("inst.json");
    let inst_path = inst_path.to_str().unwrap();

    // A one-facility line instance: the facility at location 0, a heavy
    // client at location 1. Staying put is not swap-optimal.
    let instance = r#"{
        "version": 1, "n": 2,
        "assign_matrix": [[0, 5], [5, 0]],
        "facilities": [{"loc": 0, "weight": 1}],
        "clients": [{"loc": 1, "demand": 3}]
    }"#;
    std::fs::write(inst_path, instance).unwrap();

    let opt_path = dir.path().join("opt.json");
    let opt_path = opt_path.to_str().unwrap();
    assert_eq!(code(&mfl(&["exact", "--in", inst_path, "--out", opt_path])), 0);

    // Self pair: everything holds, exit 0.
    let self_pair = mfl(&[
        "verify",
        "--in",
        inst_path,
        "--local",
        opt_path,
        "--reference",
        opt_path,
        "--reference-optimal",
        "--out",
        "-",
    ]);
    assert_eq!(code(&self_pair), 0, "{}", String::from_utf8_lossy(&self_pair.stderr));
    let report = stdout_json(&self_pair);
    assert_eq!(report["pass"], true);
    assert_eq!(report["variant"], "both");

    // Stationary solution, falsely claimed single-swap optimal: the swap
    // lower bound is emitted under the claim and fails, exit 1.
    let stay_path = dir.path().join("stay.json");
    let stay_path = stay_path.to_str().unwrap();
    let stay = r#"{
        "destinations": [0],
        "matching_cost": 0,
        "assignment_cost": 15,
        "total": 15,
        "sigma": [0]
    }"#;
    std::fs::write(stay_path, stay).unwrap();
    let report_path = dir.path().join("report.json");
    let report_path = report_path.to_str().unwrap();
    let lied = mfl(&[
        "verify",
        "--in",
        inst_path,
        "--local",
        stay_path,
        "--reference",
        opt_path,
        "--t",
        "2",
        "--swaps",
        "1",
        "--out",
        report_path,
    ]);
    assert_eq!(code(&lied), 1);
    assert!(String::from_utf8_lossy(&lied.stderr).contains("verification failed"));
    let report: Value =
        serde_json::from_str(&std::fs::read_to_string(report_path).unwrap()).unwrap();
    assert_eq!(report["pass"], false);
    let failing: Vec<&str> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["pass"] == false)
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(failing, ["s2_swap_lower"], "exactly the falsely-claimed bound fails");

    // A tampered solution file is rejected before any check runs.
    let tampered = stay.replace("\"total\": 15", "\"total\": 14");
    let bad_path = dir.path().join("bad.json");
    let bad_path = bad_path.to_str().unwrap();
    std::fs::write(bad_path, tampered).unwrap();
    let rejected = mfl(&[
        "verify", "--in", inst_path, "--local", bad_path, "--reference", opt_path,
    ]);
    assert_eq!(code(&rejected), 1);
    assert!(String::from_utf8_lossy(&rejected.stderr).contains("total"));
}

#[test]
fn kmedian_generation_multiplies_demands_and_rehomes_facilities() {
    let dir = tempfile::tempdir().unwrap();
    let carrier = gen_fixture(dir.path());
    let out = mfl(&["gen", "kmedian", "--in", &carrier, "--D", "7", "--k", "2"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let reduced = stdout_json(&out);
    let facilities = reduced["facilities"].as_array().unwrap();
    assert_eq!(facilities.len(), 2);
    for (i, f) in facilities.iter().enumerate() {
        assert_eq!(f["loc"], i as u64, "facilities sit on the first k locations");
        assert_eq!(f["weight"], 1);
    }
    let carrier: Value =
        serde_json::from_str(&std::fs::read_to_string(&carrier).unwrap()).unwrap();
    let base: Vec<u64> = carrier["clients"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["demand"].as_u64().unwrap())
        .collect();
    let scaled: Vec<u64> = reduced["clients"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["demand"].as_u64().unwrap())
        .collect();
    assert_eq!(scaled.len(), base.len());
    for (b, s) in base.iter().zip(&scaled) {
        assert_eq!(*s, b * 7);
    }
}

#[test]
fn bench_rows_cover_the_grid_and_ratios_never_dip_below_one() {
    let out = mfl(&[
        "bench", "--count", "5", "--n", "10", "--k", "3", "--clients", "5", "--rhos",
        "1,2", "--seed", "3",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let csv = String::from_utf8(out.stdout).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "instance,rho,local_total,exact_total,ratio,iterations,wall_ms"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 10, "5 instances × 2 swap sizes");
    for row in rows {
        let cols: Vec<&str> = row.split(',').collect();
        let local: u64 = cols[2].parse().unwrap();
        let exact: u64 = cols[3].parse().unwrap();
        assert!(local >= exact, "local search can never beat the oracle: {row}");
        let ratio: f64 = cols[4].parse().unwrap();
        assert!(ratio >= 1.0, "{row}");
    }
}

#[test]
fn jobs_env_var_is_honored_and_thread_count_never_changes_results() {
    let dir = tempfile::tempdir().unwrap();
    let inst = gen_fixture(dir.path());

    let serial = mfl(&["solve", "--in", &inst, "--swaps", "2", "--jobs", "1"]);
    assert_eq!(code(&serial), 0);

    let threaded = Command::new(env!("CARGO_BIN_EXE_mfl"))
        .args(["solve", "--in", &inst, "--swaps", "2"])
        .env("MFL_JOBS", "4")
        .output()
        .expect("binary runs");
    assert_eq!(code(&threaded), 0);
    assert_eq!(serial.stdout, threaded.stdout, "scan parallelism is invisible");

    let zero = Command::new(env!("CARGO_BIN_EXE_mfl"))
        .args(["solve", "--in", &inst])
        .env("MFL_JOBS", "zero")
        .output()
        .expect("binary runs");
    assert_eq!(code(&zero), 1);
    assert!(String::from_utf8_lossy(&zero.stderr).contains("MFL_JOBS"));
}

#[test]
fn rho_clamping_warns_but_solves() {
    let dir = tempfile::tempdir().unwrap();
    let inst = gen_fixture(dir.path());
    // k = 3, n − k = 7 → anything above 3 is clamped.
    let out = mfl(&["solve", "--in", &inst, "--swaps", "5", "--out", "-"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stderr).contains("clamped to 3"));
}

#[test]
fn relative_output_paths_work_from_other_directories() {
    let dir = tempfile::tempdir().unwrap();
    let inst = gen_fixture(dir.path());
    let out = mfl_in(
        dir.path(),
        &["solve", "--in", &inst, "--out", "rel.json", "--trace", "rel.csv"],
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("rel.json").exists());
    assert!(dir.path().join("rel.csv").exists());
    assert!(dir.path().join("rel.json.manifest.json").exists());
}
