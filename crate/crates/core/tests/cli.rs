mod common;

use std::path::Path;
use std::process::{Command, Output};

use ordlab::config::{RunConfig, COMMANDS, SCHEMA};

use common::strip_timestamps;

fn ordlab(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ordlab"));
    cmd.args(args).arg("--quiet").env_remove("ORDLAB_THREADS");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn write_config(dir: &Path, json: &serde_json::Value) -> String {
    let p = dir.join("cfg.json");
    std::fs::write(&p, serde_json::to_vec_pretty(json).unwrap()).unwrap();
    p.to_string_lossy().into_owned()
}

fn default_json(command: &str) -> serde_json::Value {
    serde_json::to_value(RunConfig::default_for(command).unwrap()).unwrap()
}

#[test]
fn missing_beta_is_a_validation_error_naming_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = default_json("verify-quantum");
    cfg["verify-quantum"]
        .as_object_mut()
        .unwrap()
        .remove("beta");
    let path = write_config(dir.path(), &cfg);
    let out = ordlab(
        &[
            "verify-quantum",
            "--config",
            &path,
            "--out",
            dir.path().to_str().unwrap(),
        ],
        &[],
    );
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("verify-quantum.beta"), "{err}");
}

#[test]
fn unknown_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = default_json("probe-divergence");
    cfg["probe-divergence"]["halving"] = serde_json::json!(3);
    let path = write_config(dir.path(), &cfg);
    let out = ordlab(
        &[
            "probe-divergence",
            "--config",
            &path,
            "--out",
            dir.path().to_str().unwrap(),
        ],
        &[],
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("halving"));
}

#[test]
fn config_for_another_command_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), &default_json("schrodinger"));
    let out = ordlab(
        &[
            "probe-divergence",
            "--config",
            &path,
            "--out",
            dir.path().to_str().unwrap(),
        ],
        &[],
    );
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bad_thread_count_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = ordlab(
        &["probe-divergence", "--out", dir.path().to_str().unwrap()],
        &[("ORDLAB_THREADS", "zero")],
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("ORDLAB_THREADS"));
    let ok = ordlab(
        &["probe-divergence", "--out", dir.path().to_str().unwrap()],
        &[("ORDLAB_THREADS", "1")],
    );
    assert_eq!(ok.status.code(), Some(0));
}

#[test]
fn failed_exponent_window_exits_with_verification_code() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = default_json("scaling");
    cfg["scaling"]["local_alpha_window"] = serde_json::json!([3.0, 4.0]);
    let path = write_config(dir.path(), &cfg);
    let out = ordlab(
        &[
            "scaling",
            "--config",
            &path,
            "--out",
            dir.path().to_str().unwrap(),
        ],
        &[],
    );
    assert_eq!(
        out.status.code(),
        Some(2),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    // the report is still written
    assert!(dir.path().join("report.json").exists());
}

#[test]
fn reruns_are_identical_apart_from_the_timestamp() {
    for command in ["probe-divergence", "schrodinger", "verify-bounds"] {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        for d in [&a, &b] {
            let out = ordlab(
                &[command, "--seed", "11", "--out", d.path().to_str().unwrap()],
                &[],
            );
            assert_eq!(out.status.code(), Some(0), "{command}");
        }
        let mut names: Vec<_> = std::fs::read_dir(a.path())
            .unwrap()
            .map(|e| e.unwrap().file_name())
            .collect();
        names.sort();
        assert!(names.len() >= 2);
        for name in names {
            let x = std::fs::read(a.path().join(&name)).unwrap();
            let y = std::fs::read(b.path().join(&name)).unwrap();
            assert_eq!(
                strip_timestamps(&x),
                strip_timestamps(&y),
                "{command}: {name:?}"
            );
            let text = String::from_utf8_lossy(&x);
            for field in ["config_hash", "seed", "version", "timestamp"] {
                assert!(text.contains(field), "{command}: {name:?} lacks {field}");
            }
        }
    }
}

#[test]
fn seed_override_changes_the_hash() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    ordlab(
        &[
            "probe-divergence",
            "--seed",
            "1",
            "--out",
            a.path().to_str().unwrap(),
        ],
        &[],
    );
    ordlab(
        &[
            "probe-divergence",
            "--seed",
            "2",
            "--out",
            b.path().to_str().unwrap(),
        ],
        &[],
    );
    let hash = |d: &Path| {
        let v: serde_json::Value =
            serde_json::from_slice(&std::fs::read(d.join("config.json")).unwrap()).unwrap();
        v["meta"]["config_hash"].as_str().unwrap().to_string()
    };
    assert_ne!(hash(a.path()), hash(b.path()));
}

#[test]
fn schema_accepts_every_default_and_rejects_strays() {
    let schema: serde_json::Value = serde_json::from_str(SCHEMA).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    for command in COMMANDS {
        let cfg = default_json(command);
        let errors: Vec<String> = validator.iter_errors(&cfg).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{command}: {errors:?}");
        let mut stray = cfg.clone();
        stray[command]["stray"] = serde_json::json!(1);
        assert!(!validator.is_valid(&stray), "{command}");
        assert!(RunConfig::parse(&stray.to_string()).is_err());
    }
    let top: Vec<&String> = schema["properties"].as_object().unwrap().keys().collect();
    for command in COMMANDS {
        assert!(top.iter().any(|k| k.as_str() == command));
    }
}
