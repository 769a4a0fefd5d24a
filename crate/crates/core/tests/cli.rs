use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use elle::frontal::{assemble, embed_case, Case, PipelineParams};
use elle::imgseq::{frame_path, load_subject, write_pgm, GrayImage, Provenance, YawSpec};
use elle::lle::read_embedding_csv;
use tempfile::TempDir;

fn elle(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_elle")).args(args).output().unwrap()
}

fn ok(args: &[&str]) -> Output {
    let out = elle(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out
}

fn synth(dir: &Path, extra: &[&str]) {
    let mut args = vec!["synth", "--out", dir.to_str().unwrap()];
    args.extend_from_slice(extra);
    ok(&args);
}

fn tree(root: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut files = BTreeMap::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in fs::read_dir(&dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let rel = path.strip_prefix(root).unwrap().to_string_lossy().into_owned();
                files.insert(rel, fs::read(&path).unwrap());
            }
        }
    }
    files
}

#[test]
fn synth_writes_full_sweep_reproducibly() {
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    synth(a.path(), &[]);
    synth(b.path(), &[]);
    let ta = tree(a.path());
    let pgm = ta.keys().filter(|k| k.ends_with(".pgm")).count();
    assert_eq!(pgm, 30 * 181);
    assert!(ta.contains_key("manifest.json"));
    assert!(ta.contains_key("s000/s000_yaw-090.pgm") && ta.contains_key("s029/s029_yaw+090.pgm"));
    assert!(ta == tree(b.path()), "reruns differ");
}

#[test]
fn synth_truncated_spec() {
    let dir = TempDir::new().unwrap();
    synth(dir.path(), &["--spec", "-90:1:30", "--subjects", "2", "--size", "32"]);
    for s in ["s000", "s001"] {
        assert_eq!(fs::read_dir(dir.path().join(s)).unwrap().count(), 121);
    }
}

#[test]
fn embed_rows_and_round_trip() {
    let dir = TempDir::new().unwrap();
    let root = dir.path();
    synth(root, &["--spec", "-90:3:30", "--subjects", "2", "--size", "40"]);
    let ds = root.to_str().unwrap();
    let spec: YawSpec = "-90:3:30".parse().unwrap();
    let (images, yaws) = load_subject(root, "s001", &spec).unwrap();
    for (case, rows) in [("I", 41), ("II", 82), ("III", 82)] {
        let csv = root.join(format!("emb_{case}.csv"));
        ok(&["embed", "--dataset", ds, "--subject", "s001", "--case", case, "--out", csv.to_str().unwrap()]);
        let table = read_embedding_csv(fs::File::open(&csv).unwrap()).unwrap();
        assert_eq!(table.coords.nrows(), rows);
        assert_eq!(table.coords.ncols(), 2);
        let case: Case = case.parse().unwrap();
        if case != Case::III {
            let set = assemble(&images, Some(&yaws), case, None).unwrap();
            let emb = embed_case(&set, case, &PipelineParams::default()).unwrap();
            assert_eq!(&table.coords, emb.coords());
        }
        assert_eq!(table.provenance[0], Provenance::Original);
        assert_eq!(table.yaw[0], Some(-90.0));
        if rows == 82 {
            assert_eq!(table.provenance[41], Provenance::Flipped);
            assert_eq!(table.yaw[41], Some(90.0));
        }
    }
    let stdout = ok(&["embed", "--dataset", ds, "--spec", "-90:3:30"]).stdout;
    assert!(String::from_utf8(stdout).unwrap().starts_with("index,provenance,yaw,e1,e2\n"));
}

#[test]
fn identify_report_schema() {
    let dir = TempDir::new().unwrap();
    synth(dir.path(), &["--spec", "-90:1:30", "--subjects", "1"]);
    let ds = dir.path().to_str().unwrap();
    let out = ok(&["identify", "--dataset", ds, "--spec", "-90:2:30", "--case", "II"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let obj = v.as_object().unwrap();
    for key in ["identified_index", "identified_yaw", "true_frontal_yaw", "abs_error", "vertex_coords", "mode"] {
        assert!(obj.contains_key(key), "missing {key}");
    }
    assert_eq!(v["true_frontal_yaw"], 0.0);
    assert!(v["identified_index"].as_u64().unwrap() < 61);
    assert_eq!(v["vertex_coords"].as_array().unwrap().len(), 2);

    let no_frontal = ok(&["identify", "--dataset", ds, "--spec", "-90:1:-10", "--case", "II"]);
    let v: serde_json::Value = serde_json::from_slice(&no_frontal.stdout).unwrap();
    assert!(v["true_frontal_yaw"].is_null() && v["abs_error"].is_null());
    assert!(!v["identified_yaw"].is_null());
}

#[test]
fn exit_codes_by_failure_class() {
    let dir = TempDir::new().unwrap();
    let ds = dir.path().to_str().unwrap();
    assert_eq!(elle(&["identify", "--dataset", ds, "--spec", "-90:2:30", "--case", "II", "--kt", "7"]).status.code(), Some(2));
    assert_eq!(elle(&["identify", "--dataset", ds, "--spec", "-90:2:30", "--kt", "8"]).status.code(), Some(2));
    assert_eq!(elle(&["synth", "--spec", "-90:1:30"]).status.code(), Some(2));
    assert_eq!(elle(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(elle(&["identify", "--dataset", ds, "--spec", "-90:2:30"]).status.code(), Some(3));

    // three well separated pairs of frames give a three-component graph at K = 1
    let levels = [0.0, 0.02, 0.4, 0.42, 0.8, 0.82];
    fs::create_dir(dir.path().join("p")).unwrap();
    for (k, yaw) in (-90..=60).step_by(30).enumerate() {
        let img = GrayImage::from_fn(4, 4, |_, _| levels[k]);
        write_pgm(frame_path(dir.path(), "p", yaw), &img).unwrap();
    }
    let degenerate = elle(&["embed", "--dataset", ds, "--spec", "-90:30:60", "--k", "1", "--dim", "4"]);
    assert_eq!(degenerate.status.code(), Some(4), "{}", String::from_utf8_lossy(&degenerate.stderr));
    assert_eq!(ok(&["embed", "--dataset", ds, "--spec", "-90:30:60", "--k", "1", "--dim", "3"]).status.code(), Some(0));
    assert_eq!(elle(&["embed", "--dataset", ds, "--spec", "-90:30:60", "--dim", "5"]).status.code(), Some(2));
    // a frame missing from disk is a data error
    assert_eq!(elle(&["embed", "--dataset", ds, "--spec", "-90:30:90"]).status.code(), Some(3));
}

#[test]
fn compare_outputs_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let ds = dir.path().join("data");
    synth(&ds, &["--spec", "-90:3:60", "--subjects", "3", "--size", "40"]);
    let ds = ds.to_str().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let o = ok(&["compare", "--dataset", ds, "--spec", "-90:6:60", "--spec", "-90:6:30", "--out", out.to_str().unwrap()]);
        (fs::read(out.join("compare.csv")).unwrap(), fs::read(out.join("compare.json")).unwrap(), o.stdout)
    };
    let first = run("a");
    assert!(first == run("b"));
    let csv = String::from_utf8(first.0).unwrap();
    assert!(csv.starts_with("spec,case,u,sigma,count,failed\n"));
    assert_eq!(csv.lines().count(), 7);
}
