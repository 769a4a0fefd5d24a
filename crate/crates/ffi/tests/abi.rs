use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use elle_ffi::*;

fn last_error() -> String {
    let p = elle_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn render_sweep(seed: u64, yaws: &[f64], size: usize) -> Vec<*mut ElleImage> {
    yaws.iter()
        .map(|&y| {
            let mut img = ptr::null_mut();
            assert_eq!(unsafe { elle_synth_render(seed, y, size, &mut img) }, ElleStatus::Ok);
            img
        })
        .collect()
}

#[test]
fn pipeline_through_the_c_surface() {
    let yaws: Vec<f64> = (-45..=15).map(|k| f64::from(2 * k)).collect();
    let images = render_sweep(3, &yaws, 64);
    let handles: Vec<*const ElleImage> = images.iter().map(|&p| p as *const _).collect();
    for (case, rows) in [(ELLE_CASE_I, 61), (ELLE_CASE_II, 122)] {
        let mut set = ptr::null_mut();
        let st = unsafe { elle_image_set_new(handles.as_ptr(), handles.len(), yaws.as_ptr(), case, ptr::null(), &mut set) };
        assert_eq!(st, ElleStatus::Ok);
        assert_eq!(unsafe { elle_image_set_len(set) }, rows);
        let mut emb = ptr::null_mut();
        assert_eq!(unsafe { elle_embed(set, ptr::null(), &mut emb) }, ElleStatus::Ok);
        assert!(elle_last_error().is_null());
        assert_eq!(unsafe { (elle_embedding_rows(emb), elle_embedding_dim(emb)) }, (rows, 2));
        let mut coords = vec![0.0; rows * 2];
        assert_eq!(unsafe { elle_embedding_coords(emb, coords.as_mut_ptr(), coords.len()) }, ElleStatus::Ok);
        assert!(coords.iter().all(|v| v.is_finite()));
        let mut short = vec![0.0; 3];
        assert_eq!(unsafe { elle_embedding_coords(emb, short.as_mut_ptr(), short.len()) }, ElleStatus::InvalidArgument);

        let mut report = std::mem::MaybeUninit::<ElleReport>::uninit();
        assert_eq!(unsafe { elle_identify(emb, set, ELLE_MODE_DISCRETE, report.as_mut_ptr()) }, ElleStatus::Ok);
        let report = unsafe { report.assume_init() };
        assert!(report.identified_index < 61);
        assert!(report.has_abs_error && report.has_true_frontal_yaw);
        assert_eq!(report.abs_error, report.identified_yaw.abs());
        if case == ELLE_CASE_II {
            assert!(report.abs_error <= 10.0, "{report:?}");
        }
        unsafe {
            elle_embedding_free(emb);
            elle_image_set_free(set);
        }
    }
    for img in images {
        unsafe { elle_image_free(img) };
    }
}

#[test]
fn images_round_trip_and_load() {
    let px: Vec<f64> = (0..12).map(|v| f64::from(v) / 11.0).collect();
    let mut img = ptr::null_mut();
    assert_eq!(unsafe { elle_image_new(4, 3, px.as_ptr(), &mut img) }, ElleStatus::Ok);
    assert_eq!(unsafe { (elle_image_width(img), elle_image_height(img)) }, (4, 3));
    let mut back = vec![0.0; 12];
    assert_eq!(unsafe { elle_image_pixels(img, back.as_mut_ptr(), back.len()) }, ElleStatus::Ok);
    assert_eq!(back, px);
    unsafe { elle_image_free(img) };

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.pgm");
    std::fs::write(&path, b"P2\n2 1\n255\n0 255\n").unwrap();
    let c = CString::new(path.to_str().unwrap()).unwrap();
    let mut loaded = ptr::null_mut();
    assert_eq!(unsafe { elle_image_load_pgm(c.as_ptr(), &mut loaded) }, ElleStatus::Ok);
    let mut two = [0.0; 2];
    assert_eq!(unsafe { elle_image_pixels(loaded, two.as_mut_ptr(), 2) }, ElleStatus::Ok);
    assert_eq!(two, [0.0, 1.0]);
    unsafe { elle_image_free(loaded) };

    let missing = CString::new(dir.path().join("nope.pgm").to_str().unwrap()).unwrap();
    let mut none = ptr::null_mut();
    assert_eq!(unsafe { elle_image_load_pgm(missing.as_ptr(), &mut none) }, ElleStatus::Data);
    assert!(none.is_null());
    assert!(last_error().contains("nope.pgm"));
}

#[test]
fn errors_are_reported_not_raised() {
    let mut img = ptr::null_mut();
    assert_eq!(unsafe { elle_synth_render(0, 120.0, 64, &mut img) }, ElleStatus::InvalidArgument);
    assert!(last_error().contains("120"));
    assert_eq!(unsafe { elle_synth_render(0, 0.0, 64, ptr::null_mut()) }, ElleStatus::NullPointer);
    assert_eq!(unsafe { elle_image_new(2, 2, ptr::null(), &mut img) }, ElleStatus::NullPointer);
    let bad = [0.0, 2.0, 0.0, 0.0];
    assert_eq!(unsafe { elle_image_new(2, 2, bad.as_ptr(), &mut img) }, ElleStatus::InvalidArgument);

    let images = render_sweep(1, &[-10.0, 0.0, 10.0, 20.0], 32);
    let handles: Vec<*const ElleImage> = images.iter().map(|&p| p as *const _).collect();
    let mut set = ptr::null_mut();
    assert_eq!(unsafe { elle_image_set_new(handles.as_ptr(), 4, ptr::null(), 9, ptr::null(), &mut set) }, ElleStatus::InvalidArgument);
    assert_eq!(unsafe { elle_image_set_new(handles.as_ptr(), 4, ptr::null(), ELLE_CASE_III, ptr::null(), &mut set) }, ElleStatus::InvalidArgument);
    assert_eq!(unsafe { elle_image_set_new(handles.as_ptr(), 4, ptr::null(), ELLE_CASE_II, ptr::null(), &mut set) }, ElleStatus::Ok);
    let mut emb = ptr::null_mut();
    let odd = ElleParams { kt: 3, ..elle_params_default() };
    assert_eq!(unsafe { elle_embed(set, &odd, &mut emb) }, ElleStatus::InvalidArgument);
    assert!(emb.is_null());
    unsafe {
        elle_image_set_free(set);
        elle_image_free(ptr::null_mut());
    }
    for img in images {
        unsafe { elle_image_free(img) };
    }
}

#[test]
fn defaults_match_the_library() {
    let p = elle_params_default();
    assert_eq!((p.k, p.kt, p.dim, p.reg), (8, 8, 2, elle::lle::DEFAULT_REG));
}

#[test]
fn header_compiles_as_c99() {
    let crate_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = crate_dir.join("include").join("elle.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in ["elle_embed", "elle_identify", "elle_last_error", "ElleReport", "ELLE_STATUS_PIPELINE"] {
        assert!(text.contains(name), "header lacks {name}");
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    std::fs::write(
        &src,
        r#"#include "elle.h"
int main(void) {
    ElleImage *img = NULL;
    if (elle_synth_render(2, 30.0, 32, &img) != ELLE_STATUS_OK) return 1;
    if (elle_image_width(img) != 32) return 2;
    elle_image_free(img);
    if (elle_synth_render(2, 95.0, 32, &img) != ELLE_STATUS_INVALID_ARGUMENT) return 3;
    if (elle_last_error() == NULL) return 4;
    ElleParams p = elle_params_default();
    return p.kt == 8 ? 0 : 5;
}
"#,
    )
    .unwrap();
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-c"])
        .arg(&src)
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg("-o")
        .arg(dir.path().join("smoke.o"))
        .status()
        .expect("a C compiler named cc is required for this test");
    assert!(status.success());
}
