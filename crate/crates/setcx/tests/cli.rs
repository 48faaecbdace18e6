//! End-to-end tests of the `setcx` binary: exit codes, reproducibility
//! headers, config-file handling, and determinism. All invocations use
//! deliberately tiny workloads.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn setcx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_setcx"))
        .args(args)
        .output()
        .expect("failed to launch setcx")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write(path: &Path, content: &str) {
    fs::write(path, content).unwrap();
}

const STRINGS: &str = "0110100110010110\n1111000011110000\n0101010101010101\n1001011001101001\n";

#[test]
fn psi_happy_path_emits_headers_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("strings.txt");
    write(&input, STRINGS);

    let out = setcx(&["psi", "--input", input.to_str().unwrap(), "--seed", "7"]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], format!("#version={}", env!("CARGO_PKG_VERSION")));
    assert_eq!(lines[1], "#seed=7");
    assert_eq!(lines[2], "#compressor=deflate/9");
    assert_eq!(lines[3], "#norm=xi");
    assert_eq!(lines[4], "n,norm,theta,theta_pair,lambda,phi,psi,delta_sq");
    assert!(lines[5].starts_with("4,xi,"), "report row: {}", lines[5]);
}

#[test]
fn ncd_emits_distance_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("strings.txt");
    write(&input, STRINGS);

    let out = setcx(&["ncd", "--input", input.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("\ni,j,d\n"));
    // 4 strings -> 6 unordered pairs.
    assert_eq!(text.lines().filter(|l| l.chars().next() == Some('0') || l.starts_with(['1', '2', '3'])).count(), 6);
}

#[test]
fn measures_lists_per_pair_contributions() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("strings.txt");
    write(&input, STRINGS);

    let out = setcx(&["measures", "--input", input.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("#pairs\ni,j,c_max,d,contribution\n"));
    let pair_rows = text
        .lines()
        .skip_while(|l| *l != "i,j,c_max,d,contribution")
        .skip(1)
        .count();
    assert_eq!(pair_rows, 6);
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let out = setcx(&["--bogus"]);
    assert_eq!(out.status.code(), Some(2));
    let out = setcx(&["psi"]); // missing required --input
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_enum_value_is_a_usage_error() {
    let out = setcx(&["psi", "--input", "x.txt", "--norm", "nope"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_input_file_is_a_runtime_error() {
    let out = setcx(&["psi", "--input", "/nonexistent/strings.txt"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error:"));
}

#[test]
fn malformed_graph_reports_the_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("graph.txt");
    // Dense 2x2 with a diagonal 1 on line 2.
    write(&input, "0 1\n1 1\n");

    let out = setcx(&["graph-psi", "--input", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.contains("line 2"), "stderr: {err}");
}

#[test]
fn graph_psi_scores_a_graph_file() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("graph.txt");
    write(&input, "0 1\n1 2\n2 3\n3 4\n4 0\n0 2\n"); // 5-node edge list

    let out = setcx(&["graph-psi", "--input", input.to_str().unwrap(), "--mode", "pairmax"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("n,edges,psi,mode"));
    assert!(text.contains("5,6,"), "row missing: {text}");
    assert!(text.trim_end().ends_with("pairmax"));
}

#[test]
fn out_flag_writes_the_same_bytes_as_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("strings.txt");
    write(&input, STRINGS);
    let outfile = dir.path().join("report.csv");

    let direct = setcx(&["psi", "--input", input.to_str().unwrap(), "--seed", "3"]);
    let to_file = setcx(&[
        "psi",
        "--input",
        input.to_str().unwrap(),
        "--seed",
        "3",
        "--out",
        outfile.to_str().unwrap(),
    ]);
    assert!(direct.status.success() && to_file.status.success());
    assert!(to_file.stdout.is_empty());
    assert_eq!(fs::read(&outfile).unwrap(), direct.stdout);
}

#[test]
fn curves_are_deterministic_and_thread_count_independent() {
    let base = [
        "fig2",
        "--set-size",
        "4",
        "--length",
        "120",
        "--replicates",
        "2",
        "--seed",
        "9",
    ];
    let a = setcx(&base);
    let b = setcx(&base);
    let mut with_threads = base.to_vec();
    with_threads.extend_from_slice(&["--threads", "1"]);
    let c = setcx(&with_threads);

    assert!(a.status.success() && b.status.success() && c.status.success());
    assert_eq!(a.stdout, b.stdout, "same seed must reproduce bytes");
    assert_eq!(a.stdout, c.stdout, "thread count must not change results");
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    write(
        &conf,
        "# tiny curve\nN = 4\nL = 120\nreplicates = 2\nseed = 9\n",
    );

    let from_config = setcx(&["fig2", "--config", conf.to_str().unwrap()]);
    let from_flags = setcx(&[
        "fig2",
        "--set-size",
        "4",
        "--length",
        "120",
        "--replicates",
        "2",
        "--seed",
        "9",
    ]);
    assert!(from_config.status.success(), "stderr: {}", stderr(&from_config));
    assert_eq!(from_config.stdout, from_flags.stdout);

    // A flag wins over the config value: changing the seed changes bytes.
    let overridden = setcx(&["fig2", "--config", conf.to_str().unwrap(), "--seed", "10"]);
    assert!(overridden.status.success());
    assert_ne!(overridden.stdout, from_config.stdout);
    assert!(stdout(&overridden).contains("#seed=10"));
}

#[test]
fn config_file_rejects_unknown_keys_with_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("bad.conf");
    write(&conf, "N = 4\nbogus_key = 1\n");

    let out = setcx(&["fig1", "--config", conf.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.contains("line 2") && err.contains("bogus_key"), "stderr: {err}");
    assert!(err.contains("valid keys"), "stderr: {err}");
}

#[test]
fn rbn_sweep_emits_one_row_per_bias() {
    let out = setcx(&[
        "rbn-sweep", "--n", "20", "--k", "2", "--p-min", "0.2", "--p-max", "0.3",
        "--p-step", "0.05", "--networks", "2", "--traj-len", "4", "--burn-in", "2",
        "--seed", "5",
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("p,s,lambda,mean_psi,std_psi,n,k,networks,traj_len,burn_in,seed"));
    let rows: Vec<&str> = text.lines().filter(|l| l.starts_with("0.")).collect();
    assert_eq!(rows.len(), 3, "expected biases 0.2, 0.25, 0.3: {text}");

    // fig4 is the same command under the figure's name.
    let fig4 = setcx(&[
        "fig4", "--n", "20", "--k", "2", "--p-min", "0.2", "--p-max", "0.3",
        "--p-step", "0.05", "--networks", "2", "--traj-len", "4", "--burn-in", "2",
        "--seed", "5",
    ]);
    assert_eq!(fig4.stdout, out.stdout);
}

#[test]
fn graph_max_writes_a_reloadable_graph() {
    let dir = tempfile::tempdir().unwrap();
    let best = dir.path().join("best.txt");
    let out = setcx(&[
        "graph-max", "--n", "5", "--restarts", "2", "--iterations", "30",
        "--seed", "5", "--graph-out", best.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));

    // The saved graph rescored by graph-psi reports the same value.
    let row = stdout(&out).lines().last().unwrap().to_string();
    let rescored = setcx(&["graph-psi", "--input", best.to_str().unwrap()]);
    assert!(rescored.status.success());
    assert_eq!(stdout(&rescored).lines().last().unwrap(), row);
}

#[test]
fn fig5_compares_baseline_conjugate_and_search() {
    let out = setcx(&["fig5", "--restarts", "2", "--iterations", "40", "--seed", "4"]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("label,n,edges,psi,mode"));
    for label in ["two-cliques,", "two-cliques-conjugate,", "search-best,"] {
        assert!(text.contains(label), "missing {label} in: {text}");
    }
    // The baseline and its conjugate score identically.
    let value_of = |label: &str| -> f64 {
        text.lines()
            .find(|l| l.starts_with(label))
            .unwrap()
            .split(',')
            .nth(3)
            .unwrap()
            .parse()
            .unwrap()
    };
    assert_eq!(value_of("two-cliques,"), value_of("two-cliques-conjugate,"));
}

#[test]
fn calibrated_psi_differs_from_raw_and_stays_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("strings.txt");
    // Long-enough strings that calibration has signal.
    let mut content = String::new();
    let mut x: u64 = 0x9E37_79B9_7F4A_7C15;
    for _ in 0..5 {
        for _ in 0..200 {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            content.push(if x >> 63 == 1 { '1' } else { '0' });
        }
        content.push('\n');
    }
    write(&input, &content);

    let raw = setcx(&["psi", "--input", input.to_str().unwrap(), "--seed", "7"]);
    let cal1 = setcx(&["psi", "--input", input.to_str().unwrap(), "--seed", "7", "--calibrate"]);
    let cal2 = setcx(&["psi", "--input", input.to_str().unwrap(), "--seed", "7", "--calibrate"]);
    assert!(raw.status.success() && cal1.status.success() && cal2.status.success());
    assert_eq!(cal1.stdout, cal2.stdout);
    assert_ne!(raw.stdout, cal1.stdout);
}
