use std::process::Command;

fn dpod() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dpod"))
}

const SMALL: &str = r#"
fft_size = 64
data_size = 48
lower_guard = 8
upper_guard = 8
qam_order = 16

[training]
num_symbols = 2

[sweep]
snr_db = [10.0]
trials = 2

[[algorithms]]
id = "uncompensated"
kind = "none"
placement = "time-domain-eq"

[[algorithms]]
id = "v"
kind = "volterra"
placement = "time-domain-eq"
memory = [-1, 0, 1]
degree = 3
"#;

#[test]
fn selftest_passes() {
    let out = dpod().arg("selftest").output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(!String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}

#[test]
fn errors_exit_with_code_two() {
    let out = dpod().args(["simulate", "--preset", "nope"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nope"));
    let out = dpod().args(["simulate", "--config", "/nonexistent.toml"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn simulate_and_train_from_a_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("small.toml");
    std::fs::write(&cfg, SMALL).unwrap();
    let csv = dir.path().join("ber.csv");
    let status = dpod()
        .args(["simulate", "--config", cfg.to_str().unwrap(), "--snr", "8:2:10", "--seed", "3", "--output"])
        .arg(&csv)
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 1 + 2 * 2);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",2,3")));

    let stdout = dpod()
        .args(["simulate", "--config", cfg.to_str().unwrap(), "--algorithms", "v", "--trials", "1"])
        .output()
        .unwrap();
    assert!(stdout.status.success());
    let text = String::from_utf8(stdout.stdout).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(text.lines().nth(1).unwrap().starts_with("10,v,time-domain-eq,192,"));

    let models = dir.path().join("models.json");
    let status = dpod()
        .args(["train", "--config", cfg.to_str().unwrap(), "--model-out"])
        .arg(&models)
        .status()
        .unwrap();
    assert!(status.success());
    let file = dpod_sim::model_io::load_models(&models).unwrap();
    assert_eq!(file.models.len(), 1);
    assert_eq!(file.models[0].id, "v");
    file.models[0].body.to_model().unwrap();
}
