//! End-to-end tests of the snlse binary: exit codes, artifact layout,
//! precedence, and byte-level determinism of its outputs.

use std::fs;
use std::path::Path;
use std::process::Output;

fn snlse(dir: &Path, args: &[&str]) -> Output {
    std::process::Command::new(env!("CARGO_BIN_EXE_snlse"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary should launch")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

/// CSV text with the timestamp comment stripped, for byte comparison.
fn stable_csv(path: &Path) -> String {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with("# generated-at-unix"))
        .collect::<Vec<_>>()
        .join("\n")
}

const TINY_EVOLVE: &[&str] = &[
    "evolve", "--a", "0", "--b", "6.4", "--N", "8", "--tau", "0.01", "--T", "0.1",
    "--epsilon", "0.01",
];

#[test]
fn config_errors_exit_2_and_name_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let out = snlse(dir.path(), &["evolve", "--alpha", "-0.5"]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
    assert!(stderr(&out).contains("alpha"));
    assert!(stderr(&out).contains("(-1/3, 0)"));

    let cfg = dir.path().join("bad.cfg");
    fs::write(&cfg, "lambdas=2\n").unwrap();
    let out = snlse(dir.path(), &["evolve", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("lambdas"));

    let out = snlse(dir.path(), &["evolve", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn tiny_evolution_writes_its_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = TINY_EVOLVE.to_vec();
    args.extend(["--out-dir", "out", "--snapshots", "0,0.05"]);
    let out = snlse(dir.path(), &args);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));

    let final_field = dir.path().join("out/final.fld");
    // 4 magic + 4 version + 4 dim + 24 axis + 8 * 16 payload
    assert_eq!(fs::metadata(&final_field).unwrap().len(), 164);
    assert!(dir.path().join("out/snapshot-0.fld").is_file());
    assert!(dir.path().join("out/snapshot-1.fld").is_file());

    let resolved = fs::read_to_string(dir.path().join("out/resolved.cfg")).unwrap();
    assert!(resolved.contains("command=evolve\n"));
    assert!(resolved.contains("tau=0.01\n"));
    assert!(resolved.contains("snapshots=0,0.05\n"));
}

#[test]
fn identical_configs_produce_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    for out_dir in ["one", "two"] {
        let mut args = TINY_EVOLVE.to_vec();
        args.extend(["--out-dir", out_dir]);
        let out = snlse(dir.path(), &args);
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    }
    let a = fs::read(dir.path().join("one/final.fld")).unwrap();
    let b = fs::read(dir.path().join("two/final.fld")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn flags_take_precedence_over_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(
        &cfg,
        "a=0\nb=6.4\nN=8\ntau=1e-2   # overridden below\nT=0.1\nepsilon=0.01\nout-dir=from-file\n",
    )
    .unwrap();
    let out = snlse(
        dir.path(),
        &[
            "evolve", "--config", cfg.to_str().unwrap(), "--tau", "0.005", "--out-dir", "out",
        ],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let resolved = fs::read_to_string(dir.path().join("out/resolved.cfg")).unwrap();
    assert!(resolved.contains("tau=0.005\n"), "{resolved}");
    assert!(!dir.path().join("from-file").exists());
}

#[test]
fn numerical_aborts_exit_3() {
    // the exact singular kernel meets a zero-density node of the vortex
    // pair on the very first Lawson step
    let dir = tempfile::tempdir().unwrap();
    let out = snlse(
        dir.path(),
        &[
            "evolve", "--dim", "2", "--ic", "vortex-pair", "--reg", "exact", "--integrator",
            "eifp", "--N", "64", "--tau", "0.01", "--T", "0.1", "--out-dir", "out",
        ],
    );
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
    assert!(stderr(&out).contains("zero density"), "{}", stderr(&out));
}

#[test]
fn io_failures_exit_4() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("blocker"), b"a file, not a directory").unwrap();
    let mut args = TINY_EVOLVE.to_vec();
    args.extend(["--out-dir", "blocker/out"]);
    let out = snlse(dir.path(), &args);
    assert_eq!(out.status.code(), Some(4), "{}", stderr(&out));
}

#[test]
fn tau_sweep_emits_a_deterministic_self_describing_table() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "sweep-tau", "--a", "-4", "--b", "4", "--N", "128", "--T", "0.1", "--epsilon", "0.01",
    ];
    for out_dir in ["one", "two"] {
        let mut argv = args.to_vec();
        argv.extend(["--out-dir", out_dir]);
        let out = snlse(dir.path(), &argv);
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    }
    let text = fs::read_to_string(dir.path().join("one/sweep-tau.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("# generated-at-unix "));
    assert_eq!(
        lines[1],
        "reg,alpha,epsilon,n,integrator,tau,err_wave_l2,err_density_l1,err_energy"
    );
    let rows: Vec<&str> = lines.iter().filter(|l| !l.starts_with('#')).skip(1).copied().collect();
    assert_eq!(rows.len(), 4);
    let slope_line = lines.iter().find(|l| l.starts_with("# slope,shift,")).expect("slope line");
    let slope: f64 = slope_line.rsplit(',').next().unwrap().parse().unwrap();
    assert!((0.7..=1.3).contains(&slope), "slope {slope}");

    // identical configs, identical bytes (timestamp aside)
    assert_eq!(
        stable_csv(&dir.path().join("one/sweep-tau.csv")),
        stable_csv(&dir.path().join("two/sweep-tau.csv"))
    );

    // every data row's parameters re-parse into a valid configuration
    let fields: Vec<&str> = rows[0].split(',').collect();
    let reparse = snlse(
        dir.path(),
        &[
            "evolve",
            "--reg", fields[0],
            "--alpha", fields[1],
            "--epsilon", fields[2],
            "--n", fields[3],
            "--integrator", fields[4],
            "--tau", fields[5],
            "--T", "0",
            "--out-dir", "reparse",
        ],
    );
    assert_eq!(reparse.status.code(), Some(0), "{}", stderr(&reparse));
}

#[test]
fn epsilon_sweep_recovers_the_model_error_slope() {
    let dir = tempfile::tempdir().unwrap();
    let out = snlse(
        dir.path(),
        &[
            "sweep-eps", "--a", "-4", "--b", "4", "--N", "128", "--T", "0.05", "--out-dir",
            "out",
        ],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = fs::read_to_string(dir.path().join("out/sweep-eps.csv")).unwrap();
    let rows = text.lines().filter(|l| !l.starts_with('#') && l.contains("rational")).count();
    assert_eq!(rows, 5);
    let slope_line = text
        .lines()
        .find(|l| l.starts_with("# slope,rational,"))
        .expect("slope line");
    let slope: f64 = slope_line.rsplit(',').next().unwrap().parse().unwrap();
    assert!((0.5..=1.5).contains(&slope), "slope {slope}");
}

#[test]
fn regularization_comparison_lists_all_three_kernels() {
    let dir = tempfile::tempdir().unwrap();
    let out = snlse(
        dir.path(),
        &[
            "compare-reg", "--a", "-4", "--b", "4", "--N", "128", "--T", "0.05", "--out-dir",
            "out",
        ],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = fs::read_to_string(dir.path().join("out/compare-reg.csv")).unwrap();
    for kind in ["ler", "shift", "rational"] {
        assert_eq!(
            text.lines().filter(|l| l.starts_with(&format!("{kind},"))).count(),
            1,
            "{text}"
        );
    }
}

#[test]
fn dynamics_smoke_run_tracks_the_dipole() {
    let dir = tempfile::tempdir().unwrap();
    let out = snlse(
        dir.path(),
        &[
            "dynamics2d", "--ic", "vortex-dipole", "--alpha", "-0.1", "--snapshots", "0,0.1",
            "--out-dir", "out",
        ],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(dir.path().join("out/snapshot-0.fld").is_file());
    assert!(dir.path().join("out/snapshot-1.fld").is_file());
    let vortices = fs::read_to_string(dir.path().join("out/vortices.csv")).unwrap();
    let rows: Vec<Vec<String>> = vortices
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect();
    // two opposite unit charges at each of the two snapshot times
    assert_eq!(rows.len(), 4, "{vortices}");
    for time in ["0", "0.1"] {
        let mut charges: Vec<i32> =
            rows.iter().filter(|r| r[0] == time).map(|r| r[3].parse().unwrap()).collect();
        charges.sort_unstable();
        assert_eq!(charges, [-1, 1], "t={time}: {vortices}");
    }
    let resolved = fs::read_to_string(dir.path().join("out/resolved.cfg")).unwrap();
    assert!(resolved.contains("lambda=1\n"));
    assert!(resolved.contains("a=-16\n"));
    assert!(resolved.contains("N=512\n"));
}

#[test]
fn dynamics_gausson_pins_case_parameters_and_starts_vortex_free() {
    let dir = tempfile::tempdir().unwrap();
    let out = snlse(
        dir.path(),
        &["dynamics2d", "--ic", "gausson", "--alpha", "-0.3", "--snapshots", "0", "--out-dir", "out"],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let vortices = fs::read_to_string(dir.path().join("out/vortices.csv")).unwrap();
    let data_rows = vortices.lines().filter(|l| !l.starts_with('#')).skip(1).count();
    assert_eq!(data_rows, 0, "{vortices}");
    let resolved = fs::read_to_string(dir.path().join("out/resolved.cfg")).unwrap();
    assert!(resolved.contains("lambda=-10\n"));
    assert!(resolved.contains("a=-8\n"));
    assert!(resolved.contains("N=256\n"));
}
