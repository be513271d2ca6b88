use purity_core::closed_forms::bb84_ensemble;
use purity_core::io;
use purity_core::tradeoff::CurveKind;
use std::path::Path;
use std::process::{Command, Output};

fn purity(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_purity")).args(args).env_remove("PURITY_SEED").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn bb84_curve_reaches_full_qubit() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("curve.csv");
    let o = purity(&["bb84", "--theta", "0.3927", "--mu-grid", "0:1:41", "--restarts", "8", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let (kind, rows) = io::parse_curve_csv(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(kind, CurveKind::Purity);
    assert_eq!(rows.len(), 41);
    let (_, env) = io::parse_envelope_csv(&std::fs::read_to_string(dir.path().join("curve.envelope.csv")).unwrap()).unwrap();
    assert!((env.eval(2.0) - 1.0).abs() < 1e-6);
    assert!(env.vertices().iter().any(|v| (v.0 - 2.0).abs() < 1e-6 && (v.1 - 1.0).abs() < 1e-6));
}

#[test]
fn uniform_closed_form_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("u.csv");
    let o = purity(&["uniform", "--closed-form", "--lambdas", "0.1:30:100", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let rows = io::parse_uniform_csv(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(rows.len(), 100);
    assert!((rows[0].0 - 0.1).abs() < 1e-15 && (rows[99].0 - 30.0).abs() < 1e-12);
    assert!(rows[0].1 < 1e-3 && rows[0].2 < 1e-3);
    assert!(rows.windows(2).all(|w| w[1].1 > w[0].1 && w[1].2 > w[0].2));
}

#[test]
fn typicality_example() {
    let o = purity(&["typicality", "--p", "0.3,0.7", "--n", "1000", "--delta", "0.05"]);
    assert!(o.status.success());
    let p: f64 = stdout(&o).trim().strip_prefix("probability=").unwrap().parse().unwrap();
    assert!(p >= 0.999);
}

#[test]
fn typicality_of_state_file() {
    let dir = tempfile::tempdir().unwrap();
    let state = write(dir.path(), "rho.txt", "2\n0.9 0\n0 0\n0 0\n0.1 0\n");
    let o = purity(&["typicality", "--state", &state, "--n", "200", "--delta", "0.05"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("rate_bits=0.5928"));
    assert!(text.contains("mass=0.9869"));
}

#[test]
fn entropy_reports() {
    let dir = tempfile::tempdir().unwrap();
    let state = write(dir.path(), "rho.txt", "# mixed qubit\n2\n0.5 0\n0 0\n0 0\n0.5 0\n");
    let o = purity(&["entropy", "--state", &state]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "dim=2\nentropy_bits=1\nkappa_bits=0\n");

    let ens = write(dir.path(), "bb.txt", &io::format_ensemble(&bb84_ensemble(std::f64::consts::FRAC_PI_8).unwrap()));
    let o = purity(&["entropy", "--ensemble", &ens]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("labels=4\ndim=2\nH_X_bits=2\n"));
}

#[test]
fn ledger_round_trips_through_file() {
    let dir = tempfile::tempdir().unwrap();
    let channel = write(dir.path(), "id.txt", "4 4\n1 0 0 0\n0 1 0 0\n0 0 1 0\n0 0 0 1\n");
    let out = dir.path().join("ledger.txt");
    let o = purity(&["ledger", "--bb84", "0.39269908169872414", "--channel", &channel, "--n", "100", "--delta", "0.01", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let keys: Vec<&str> = text.lines().map(|l| l.split('=').next().unwrap()).collect();
    assert_eq!(keys, purity_core::asymptotics::ResourceLedger::KEYS);
    let l = purity_core::asymptotics::ResourceLedger::parse(&text).unwrap();
    assert!((l.classical_r - 2.0).abs() < 1e-9 && (l.net_p - 1.0).abs() < 1e-9);
}

#[test]
fn oracle_command() {
    let dir = tempfile::tempdir().unwrap();
    let ens = write(dir.path(), "pair.txt", "2 2\n0.5 1 0 0 0 0 0 0 0\n0.5 0 0 0 0 0 0 1 0\n");
    let o = purity(&["oracle", "--ensemble", &ens, "--rate", "1", "--grid-step", "0.05"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let v: f64 = text.lines().nth(1).unwrap().strip_prefix("value_bits=").unwrap().parse().unwrap();
    assert!((v - 1.0).abs() < 1e-9);
    let channel: String = text.lines().skip(2).map(|l| format!("{l}\n")).collect();
    assert!(io::parse_channel(&channel).is_ok());
}

#[test]
fn seed_comes_from_environment_unless_flag_given() {
    let dir = tempfile::tempdir().unwrap();
    let ens = write(dir.path(), "e.txt", &io::format_ensemble(&{
        let mut rng = purity_core::sampling::rng_from_seed(3);
        purity_core::sampling::random_ensemble(3, 2, &mut rng)
    }));
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_purity"));
        c.args(["curve", "--ensemble", &ens, "--mu-grid", "0.3:0.5:3", "--restarts", "2", "--y-size", "7"]);
        c.env_remove("PURITY_SEED");
        if let Some(e) = env {
            c.env("PURITY_SEED", e);
        }
        if let Some(f) = flag {
            c.args(["--seed", f]);
        }
        let o = c.output().unwrap();
        assert!(o.status.success());
        o.stdout
    };
    assert_eq!(run(Some("5"), None), run(None, Some("5")));
    assert_eq!(run(Some("9"), Some("5")), run(None, Some("5")));
    assert_eq!(run(None, None), run(None, Some("0")));
}

#[test]
fn malformed_inputs_exit_with_documented_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let bad_number = write(d, "a.txt", "2 1\n0.5 1 0\n0.5 one 0\n");
    let short = write(d, "b.txt", "2 1\n1 1 0\n");
    let not_state = write(d, "c.txt", "1 2\n1 1 0 0 0 0 0 -1 0\n");
    let bad_probs = write(d, "d.txt", "2 1\n0.7 1 0\n0.7 1 0\n");
    let bad_channel = write(d, "e.txt", "2 2\n1 0\n0.3 0.3\n");
    let good_pair = write(d, "f.txt", "2 1\n0.5 1 0\n0.5 1 0\n");

    for (file, line) in [(&bad_number, "line 3"), (&short, "line 3"), (&not_state, "line 2")] {
        let o = purity(&["entropy", "--ensemble", file]);
        assert_eq!(o.status.code(), Some(2), "{file}");
        assert!(String::from_utf8_lossy(&o.stderr).contains(line), "{}", String::from_utf8_lossy(&o.stderr));
    }
    assert_eq!(purity(&["entropy", "--ensemble", &bad_probs]).status.code(), Some(2));
    let o = purity(&["ledger", "--ensemble", &good_pair, "--channel", &bad_channel, "--n", "10"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));

    assert_eq!(purity(&["entropy", "--state", "/no/such/file"]).status.code(), Some(2));
    assert_eq!(purity(&["bb84", "--theta", "3.0"]).status.code(), Some(2));
    assert_eq!(purity(&["bb84", "--theta", "0.3", "--mu-grid", "0:2:5"]).status.code(), Some(2));
    assert_eq!(purity(&["curve", "--bb84", "0.3", "--mu-grid", "1:2"]).status.code(), Some(2));
    assert_eq!(purity(&["frobnicate"]).status.code(), Some(2));
    // Guard refusals and failed verifications exit 1.
    assert_eq!(purity(&["oracle", "--bb84", "0.3", "--rate", "1", "--y-size", "6"]).status.code(), Some(1));
    let o = purity(&["verify-pd", "--bb84", "0.3927", "--restarts", "1", "--refine", "0", "--p-grid", "0:1:2", "--tolerance", "0"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn failed_write_leaves_no_partial_file() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("no_dir").join("u.csv");
    let o = purity(&["uniform", "--closed-form", "--lambdas", "1:2:2", "--out", missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!missing.exists());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}
