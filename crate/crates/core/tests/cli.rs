use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use sasc::cli::{builtin, config_hash, load_config, TaskKind, BUILTIN};

fn sasc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sasc")).args(args).output().expect("binary runs")
}

fn asset(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("assets").join(format!("{name}.json"))
}

/// Built-in config with its task block dropped, written to `dir`.
fn taskless(dir: &Path, name: &str) -> PathBuf {
    let mut v: serde_json::Value = serde_json::from_str(&fs::read_to_string(asset(name)).unwrap()).unwrap();
    v.as_object_mut().unwrap().remove("task");
    let path = dir.join(format!("{name}_bare.json"));
    fs::write(&path, serde_json::to_string_pretty(&v).unwrap()).unwrap();
    path
}

fn listing(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> = fs::read_dir(dir)
        .map(|r| r.map(|e| e.unwrap().file_name().to_string_lossy().into_owned()).collect())
        .unwrap_or_default();
    names.sort();
    names
}

#[test]
fn unknown_key_is_a_config_error_naming_the_key() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let cfg = asset("fig2");
    let o = sasc(&["spectrum", "--config", cfg.to_str().unwrap(), "--set", "system.modes.0.kapa=1", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("kapa"));
    assert!(listing(&out).is_empty());
}

#[test]
fn bad_values_are_config_errors() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = asset("fig2");
    for set in ["system.modes.0.kappa=-1", "system.temperature=-0.1", "system.modes.5.kappa=1"] {
        let o = sasc(&["spectrum", "--config", cfg.to_str().unwrap(), "--set", set, "--out", tmp.path().to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2), "{set}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let o = sasc(&["snr", "--config", cfg.to_str().unwrap(), "--out", tmp.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(listing(tmp.path()).is_empty());
}

#[test]
fn unstable_system_exits_3_without_output() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let o = sasc(&["spectrum", "--config", asset("unstable").to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unstable"));
    assert!(listing(&out).is_empty());
}

#[test]
fn builtin_figure_configs_are_stable() {
    for (name, _) in BUILTIN {
        let (model, _) = builtin(name).unwrap().build_model().unwrap();
        assert_eq!(model.stability().unwrap().stable, *name != "unstable", "{name}");
    }
}

#[test]
fn oracle_runs_are_byte_identical_per_seed() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = taskless(tmp.path(), "fig2");
    let sets = ["task.ensemble=4", "task.segments=4", "task.segment_len=1024", "task.min_pass_fraction=0"];
    let run = |dir: &str, seed: &str| {
        let out = tmp.path().join(dir);
        let mut args = vec!["oracle", "--config", cfg.to_str().unwrap(), "--seed", seed, "--format", "json", "--out", out.to_str().unwrap()];
        for s in &sets {
            args.extend(["--set", s]);
        }
        let o = sasc(&args);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let files = listing(&out);
        assert!(!files.is_empty());
        files.iter().map(|f| fs::read(out.join(f)).unwrap()).collect::<Vec<_>>()
    };
    let a = run("a", "11");
    assert_eq!(a, run("b", "11"));
    assert_ne!(a, run("c", "12"));

    // the recorded hash is reproducible from the config and the overrides
    let doc: serde_json::Value = serde_json::from_slice(&a[0]).unwrap();
    let recorded = doc["metadata"]["config_sha256"].as_str().unwrap();
    let sets: Vec<String> = sets.iter().map(|s| s.to_string()).collect();
    let loaded = load_config(&cfg, &sets, TaskKind::Oracle, Some(11)).unwrap();
    assert_eq!(recorded, config_hash(&loaded));
    let other = load_config(&cfg, &sets, TaskKind::Oracle, Some(12)).unwrap();
    assert_ne!(recorded, config_hash(&other));
}

#[test]
fn csv_output_carries_the_config_hash() {
    let tmp = tempfile::tempdir().unwrap();
    let o = sasc(&["snr", "--config", asset("fig4c").to_str().unwrap(), "--out", tmp.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(tmp.path().join("fig4c.csv")).unwrap();
    let loaded = load_config(&asset("fig4c"), &[], TaskKind::Snr, None).unwrap();
    assert!(text.lines().any(|l| l == format!("# config_sha256 {}", config_hash(&loaded))));
}

#[test]
fn figures_subcommand_writes_every_panel() {
    let tmp = tempfile::tempdir().unwrap();
    let o = sasc(&["figures", "all", "--out", tmp.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let files = listing(tmp.path());
    for want in ["fig2.csv", "fig2.gp", "fig3.gp", "fig4.csv", "fig4c.csv", "fig4.gp"] {
        assert!(files.iter().any(|f| f == want), "{want} missing from {files:?}");
    }
    let printed = String::from_utf8_lossy(&o.stdout).lines().count();
    assert_eq!(printed, files.len());
}
