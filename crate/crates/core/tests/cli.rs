use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use optomech::cli::{cmd_budget, cmd_design_pendulum, cmd_levitation_check, BudgetArgs, DesignArgs};
use optomech::config::{load_config, parse_config};

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn optomech(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_optomech")).args(args).output().expect("binary runs")
}

fn config_arg(name: &str) -> String {
    configs().join(name).display().to_string()
}

#[test]
fn shipped_configs_parse_and_round_trip() {
    for entry in std::fs::read_dir(configs()).unwrap() {
        let path = entry.unwrap().path();
        let cfg = load_config(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let again = parse_config(&cfg.to_toml().unwrap()).unwrap();
        assert_eq!(cfg, again, "{}", path.display());
    }
}

#[test]
fn budget_csv_shape() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("budget.csv");
    let o = optomech(&["budget", "--config", &config_arg("reference.toml"), "--out", out.to_str().unwrap(), "--quiet"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(!text.contains('\r'));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "f_hz,shot_asd_m,rad_asd_m,thermal_asd_m,total_asd_m,shot_asd_n,rad_asd_n,thermal_asd_n,total_asd_n"
    );
    assert_eq!(lines.len(), 501);
    assert!(lines[1].starts_with("1.000000e0,"));
    assert!(lines[500].starts_with("1.000000e4,"));
    for l in &lines[1..] {
        assert_eq!(l.split(',').count(), 9);
    }
}

#[test]
fn single_point_budget() {
    let cfg = load_config(&configs().join("reference.toml")).unwrap();
    let args = BudgetArgs {
        points: 1,
        f_min_hz: 100.0,
        f_max_hz: 100.0,
        ..BudgetArgs::default()
    };
    let (budget, _) = cmd_budget(&cfg, &args).unwrap();
    let mut buf = Vec::new();
    optomech::cli::write_budget_csv(&budget, &mut buf).unwrap();
    assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 2);
}

#[test]
fn all_mechanisms_off_fails() {
    let o = optomech(&["budget", "--no-shot", "--no-rad", "--no-thermal", "--config", &config_arg("reference.toml")]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("at least one mechanism"));
}

#[test]
fn reports_are_deterministic() {
    for (cmd, cfg) in [
        ("criteria", "reference.toml"),
        ("compare-torsion", "torsion.toml"),
        ("levitation-check", "levitation.toml"),
    ] {
        let a = optomech(&[cmd, "--config", &config_arg(cfg)]);
        let b = optomech(&[cmd, "--config", &config_arg(cfg)]);
        assert!(a.status.success(), "{cmd}: {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout);
        let text = String::from_utf8(a.stdout).unwrap();
        assert!(text.lines().all(|l| l.contains(": ")), "{text}");
    }
}

#[test]
fn criteria_report_names_formulas_and_assumptions() {
    let o = optomech(&["criteria", "--config", &config_arg("trapped_fq.toml")]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("fq_verdict: PASS"));
    assert!(text.contains("fq_margin: 1.343788e0"));
    assert!(text.contains("[C_qu = C / n_th]"));
    assert!(text.contains("assumption: laser efficiency = 1"));
}

#[test]
fn levitation_report() {
    let cfg = load_config(&configs().join("levitation.toml")).unwrap();
    let r = cmd_levitation_check(&cfg).unwrap();
    let p = r.get_f64("levitation_power_w").unwrap();
    assert!((p / 1470.0 - 1.0).abs() < 0.01);
    assert_eq!(r.get("trap_verdict"), Some("PASS"));
    assert!(r.to_string().contains("assumption: environment shape constant C = 1"));
}

#[test]
fn pendulum_design_report() {
    let cfg = load_config(&configs().join("pendulum.toml")).unwrap();
    let args = DesignArgs {
        f_v_min_hz: 200.0,
        r_min_m: None,
        r_max_m: None,
        l_max_m: Some(0.5),
    };
    let r = cmd_design_pendulum(&cfg, &args).unwrap();
    assert_eq!(r.get("length_limit"), Some("maximum length"));
    assert_eq!(r.get_f64("length_m"), Some(0.5));
    assert!(r.get_f64("violin_frequency_hz").unwrap() > 200.0);
}

#[test]
fn simulate_is_byte_identical_and_writes_psd() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("osc.toml");
    std::fs::write(
        &cfg,
        "[oscillator]\nmass_kg = 1e-6\nf_m_hz = 1.0\nq = 10.0\ntemperature_k = 300.0\n",
    )
    .unwrap();
    let run = |out: &Path, psd: &Path| {
        optomech(&[
            "simulate",
            "--config",
            cfg.to_str().unwrap(),
            "--dt",
            "0.01",
            "--duration",
            "200",
            "--seed",
            "9",
            "--out",
            out.to_str().unwrap(),
            "--psd-out",
            psd.to_str().unwrap(),
            "--quiet",
        ])
    };
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    let (pa, pb) = (dir.path().join("pa.csv"), dir.path().join("pb.csv"));
    assert!(run(&a, &pa).status.success());
    assert!(run(&b, &pb).status.success());
    let ta = std::fs::read(&a).unwrap();
    assert_eq!(ta, std::fs::read(&b).unwrap());
    assert_eq!(std::fs::read(&pa).unwrap(), std::fs::read(&pb).unwrap());
    let text = String::from_utf8(ta).unwrap();
    assert!(text.starts_with("t,x,v\n"));
    assert_eq!(text.lines().count(), 20_002);
    assert!(std::fs::read_to_string(&pa).unwrap().starts_with("f_hz,psd\n"));
}

#[test]
fn validation_errors_exit_nonzero_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(
        &cfg,
        "[oscillator]\nmass_kg = 1e-6\nf_m_hz = 1.0\nq = 10.0\ntemperature_k = 300.0\n\n[laser]\nwavelength_m = 1e-6\npower_in_w = 1\np_circ_w = 1\n",
    )
    .unwrap();
    let o = optomech(&["criteria", "--config", cfg.to_str().unwrap()]);
    assert!(!o.status.success());
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("mutually exclusive") && err.contains("line 10"), "{err}");

    // a resolution violation in the simulation
    std::fs::write(&cfg, "[oscillator]\nmass_kg = 1e-6\nf_m_hz = 10.0\nq = 10.0\ntemperature_k = 300.0\n").unwrap();
    let o = optomech(&["simulate", "--config", cfg.to_str().unwrap(), "--dt", "0.01", "--duration", "1"]);
    assert!(!o.status.success());

    let o = optomech(&["criteria", "--config", dir.path().join("missing.toml").to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing.toml"));
}
