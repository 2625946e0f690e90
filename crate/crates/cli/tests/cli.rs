use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const SMALL: &str = r#"
[experiment]
seeds = [1, 2]
episodes = 2
warmup_episodes = 1
defenses = ["HD-HT", "NoDefense"]
attacks = ["A-Fixed"]

[scenario]
grid_width = 3
grid_height = 3
num_mds = 4
num_hds = 1
zeta = 2

[attack]
fixed_band = 5
"#;

fn cli(args: &[&str], seed_env: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_honeydrone"));
    cmd.args(args).env_remove("HDS_SEED");
    if let Some(s) = seed_env {
        cmd.env("HDS_SEED", s);
    }
    cmd.output().unwrap()
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("cfg.toml");
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

fn seeds_in(csv: &Path) -> Vec<u64> {
    let mut seeds: Vec<u64> = fs::read_to_string(csv)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
        .collect();
    seeds.dedup();
    seeds
}

#[test]
fn run_writes_metric_files() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let out = dir.path().join("out");
    let o = cli(&["run", "--config", &cfg, "--out", out.to_str().unwrap()], None);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for name in ["r_mc.csv", "ec.csv", "n_ac.csv", "g_a.csv", "g_d.csv", "rewards.csv", "summary.csv", "manifest.json"] {
        assert!(out.join(name).exists(), "{name} missing");
    }
    // 2 schemes x 2 seeds x 2 episodes
    assert_eq!(fs::read_to_string(out.join("r_mc.csv")).unwrap().lines().count(), 9);
    assert!(String::from_utf8_lossy(&o.stdout).contains("HD-HT vs A-Fixed"));
}

#[test]
fn scheme_and_seed_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let out = dir.path().join("out");
    let o = cli(
        &["run", "--config", &cfg, "--out", out.to_str().unwrap(), "--seeds", "9", "--scheme", "NoDefense", "--attack", "A-HT"],
        None,
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(out.join("r_mc.csv")).unwrap();
    assert!(text.lines().skip(1).all(|l| l.starts_with("NoDefense,A-HT,9,")));
}

#[test]
fn seed_environment_variable_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let out = dir.path().join("out");
    let o = cli(&["run", "--config", &cfg, "--out", out.to_str().unwrap()], Some("42"));
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(seeds_in(&out.join("g_d.csv")), vec![42]);
}

#[test]
fn sweep_writes_one_directory_per_budget() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let out = dir.path().join("sweep");
    let o = cli(&["sweep-zeta", "--config", &cfg, "--values", "1,3", "--out", out.to_str().unwrap()], None);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(out.join("zeta_1/r_mc.csv").exists());
    assert!(out.join("zeta_3/r_mc.csv").exists());
    let o = cli(&["sweep-zeta", "--config", &cfg, "--values", "0", "--out", out.to_str().unwrap()], None);
    assert!(!o.status.success());
}

#[test]
fn validate_accepts_shipped_configs() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    for entry in fs::read_dir(root).unwrap() {
        let path = entry.unwrap().path();
        let o = cli(&["validate", "--config", path.to_str().unwrap()], None);
        assert!(o.status.success(), "{}: {}", path.display(), String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn bad_configs_fail() {
    let dir = tempfile::tempdir().unwrap();
    for text in [
        "[scenario]\nzeta = 0\n",
        "[experiment]\nepisodes = 0\n",
        "[experiment]\nseeds = []\n",
        "[experiment]\ndefenses = [\"HD-XYZ\"]\n",
        "[scenario]\nno_such_key = 1\n",
        "not toml at all [",
    ] {
        let cfg = write_config(dir.path(), text);
        let o = cli(&["validate", "--config", &cfg], None);
        assert!(!o.status.success(), "accepted {text:?}");
        assert!(!o.stderr.is_empty());
    }
    let o = cli(&["validate", "--config", "/nonexistent/cfg.toml"], None);
    assert!(!o.status.success());
}
