use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn resonance(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_resonance")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("run.cfg");
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn rows(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut rdr = csv::Reader::from_path(path).unwrap();
    let header = rdr.headers().unwrap().iter().map(String::from).collect();
    let data = rdr
        .records()
        .map(|r| {
            r.unwrap()
                .iter()
                .map(|f| match f {
                    "true" => 1.0,
                    "false" => 0.0,
                    _ => f.parse().unwrap(),
                })
                .collect()
        })
        .collect();
    (header, data)
}

#[test]
fn summit_prints_barrier_top() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "# BBJS benchmark\npotential = bbjs\nV0 = 15\nlambda = 1\n");
    let o = resonance(&["summit", "--config", &cfg]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "r_top=2, v_max=8.12012\n");
}

#[test]
fn count_prints_number_of_resonances() {
    let o = resonance(&["count", "--V0", "15"]);
    assert_eq!(stdout(&o), "1\n");
    let o = resonance(&["count", "--V0", "350"]);
    assert_eq!(stdout(&o), "5\n");
}

#[test]
fn overrides_win_over_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "V0 = 15\n");
    let o = resonance(&["count", "--config", &cfg, "--V0", "250"]);
    assert_eq!(stdout(&o), "4\n");
}

#[test]
fn wkb_table_and_spectrum_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = resonance(&["wkb", "--V0", "350", "--out", out]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 6);
    assert!(text.lines().next().unwrap().contains("tau_gamma"));
    let (header, data) = rows(&dir.path().join("spectrum.csv"));
    assert_eq!(header, ["n", "re_e", "half_width", "tau", "tau_gamma", "valid"]);
    assert_eq!(data.len(), 5);
    assert!((data[0][1] / 46.4430 - 1.0).abs() < 1e-3);
    assert!((data[4][2] / 0.71602 - 1.0).abs() < 1e-2);
    assert!(data.iter().all(|r| r[5] == 1.0 && r[4] < 8.0));
}

#[test]
fn refine_reports_seed_and_refined_value() {
    let o = resonance(&["refine", "--V0", "15"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("n=0 wkb=7.01129 - i0.0371716 -> siegert=6.85278 - i0.025549"), "{text}");
}

#[test]
fn siegert_and_darboux_files_reparse() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = resonance(&["siegert", "--V0", "15", "--h", "0.01", "--out", out]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (header, data) = rows(&dir.path().join("wavefunction.csv"));
    assert_eq!(header, ["r", "re_psi", "im_psi", "log_norm"]);
    assert_eq!(data.len(), 4001);
    let peak = data.iter().map(|r| r[1].hypot(r[2])).fold(0.0, f64::max);
    assert!((peak - 1.0).abs() < 1e-12);

    let o = resonance(&["darboux", "--V0", "15", "--h", "0.01", "--out", out]);
    assert!(o.status.success());
    let (header, data) = rows(&dir.path().join("partner.csv"));
    assert_eq!(header, ["r", "V", "re_V1", "im_V1", "V2"]);
    assert!((data[0][0] - 0.05).abs() < 1e-12);
    let last = data.last().unwrap();
    assert!((last[4] - last[1]).abs() < 1e-5);
}

#[test]
fn identical_configs_give_identical_files() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let o = resonance(&["tables", "--out", dir.path().to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    for name in ["table1.csv", "table2.csv", "table3.csv", "mur_popov.csv"] {
        let x = fs::read(a.path().join(name)).unwrap();
        let y = fs::read(b.path().join(name)).unwrap();
        assert!(!x.is_empty());
        assert_eq!(x, y, "{name} differs between runs");
    }
    let (header, data) = rows(&a.path().join("table3.csv"));
    assert_eq!(header, ["V0", "n", "v_max", "re_e", "half_width"]);
    let counts: Vec<f64> = data.iter().map(|r| r[1]).collect();
    assert_eq!(counts, [1.0, 2.0, 3.0, 4.0, 5.0]);
    let (_, t1) = rows(&a.path().join("table1.csv"));
    assert!((t1[0][2] / 7.01129 - 1.0).abs() < 1e-3);
    assert!((t1[0][5] + 0.025549).abs() < 5e-3);
    let (_, mp) = rows(&a.path().join("mur_popov.csv"));
    assert_eq!(mp.len(), 1);
    assert!((mp[0][3] / 59.25925 - 1.0).abs() < 1e-5);
}

#[test]
fn errors_exit_nonzero_with_one_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "V0 = 15\nbogus = 3\n");
    let o = resonance(&["count", "--config", &cfg]);
    assert!(!o.status.success());
    let err = String::from_utf8(o.stderr).unwrap();
    assert_eq!(err.lines().count(), 1);
    assert!(err.contains("bogus"), "{err}");

    let o = resonance(&["count", "--V0", "-3"]);
    assert!(!o.status.success());
    let o = resonance(&["wkb", "--h", "0"]);
    assert!(!o.status.success());
    let o = resonance(&["launch"]);
    assert!(!o.status.success());
    let o = resonance(&["wkb", "--V0", "15", "--n", "3"]);
    assert!(o.status.success());
    let o = resonance(&["refine", "--V0", "15", "--n", "3"]);
    assert!(!o.status.success());
}
