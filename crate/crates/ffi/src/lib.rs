//! C ABI over the `elle` library.
//!
//! Every function returns an [`ElleStatus`]; on failure the message is kept per thread and
//! read with [`elle_last_error`]. Handles are opaque, created by `*_new`/`*_load`/`elle_embed`
//! and released with the matching `*_free`. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use elle::frontal::{assemble, embed_case, identify, Case, FrontalError, Mode, PipelineError, PipelineParams};
use elle::graph::GraphError;
use elle::imgseq::{load_pgm, CropRect, GrayImage, ImageSet};
use elle::lle::{Embedding, LleError, DEFAULT_REG};
use elle::synth::{make_identity, render_head};

/// Result code of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElleStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A parameter was out of range (case, mode, K, dimension, buffer length, ...).
    InvalidArgument = 2,
    /// Input data could not be read or is inconsistent.
    Data = 3,
    /// The pipeline hit a numerical degeneracy.
    Pipeline = 4,
    /// An internal panic was caught.
    Panic = 5,
}

/// Plain LLE on the original frames.
pub const ELLE_CASE_I: u32 = 1;
/// Dual-protocol LLE on the originals and their mirrors.
pub const ELLE_CASE_II: u32 = 2;
/// As case II, on frames cropped to the head.
pub const ELLE_CASE_III: u32 = 3;

pub const ELLE_MODE_DISCRETE: u32 = 0;
pub const ELLE_MODE_QUADRATIC_VERTEX: u32 = 1;

/// Grayscale image with intensities in `[0, 1]`.
pub struct ElleImage(GrayImage);

/// Feature vectors of one sequence, possibly flip-augmented.
pub struct ElleImageSet {
    set: ImageSet,
    case: Case,
}

/// Embedding coordinates, one row per point.
pub struct ElleEmbedding(Embedding);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElleParams {
    pub k: usize,
    pub kt: usize,
    pub dim: usize,
    pub reg: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElleCrop {
    pub left: usize,
    pub top: usize,
    pub width: usize,
    pub height: usize,
}

/// Frontal identification result. Optional values come with a `has_*` flag.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElleReport {
    pub identified_index: usize,
    pub has_identified_yaw: bool,
    pub identified_yaw: f64,
    pub has_true_frontal_yaw: bool,
    pub true_frontal_yaw: f64,
    pub has_abs_error: bool,
    pub abs_error: f64,
    pub vertex_coords: [f64; 2],
    pub mode: u32,
    /// True when a vertex fit failed and the discrete rule was used instead.
    pub used_fallback: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(ElleStatus, String);

fn fail(status: ElleStatus, message: impl Into<String>) -> Failure {
    Failure(status, message.into())
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> ElleStatus {
    let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err(fail(ElleStatus::Panic, "internal panic")));
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = match &result {
            Ok(()) => None,
            Err(Failure(_, msg)) => Some(CString::new(msg.replace('\0', " ")).expect("nul bytes replaced")),
        }
    });
    match result {
        Ok(()) => ElleStatus::Ok,
        Err(Failure(status, _)) => status,
    }
}

fn non_null<'a, T>(p: *const T, name: &str) -> Result<&'a T, Failure> {
    // SAFETY: callers pass pointers obtained from this library or valid for reads.
    unsafe { p.as_ref() }.ok_or_else(|| fail(ElleStatus::NullPointer, format!("{name} is null")))
}

fn out_ptr<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, Failure> {
    // SAFETY: as above, for writes.
    unsafe { p.as_mut() }.ok_or_else(|| fail(ElleStatus::NullPointer, format!("{name} is null")))
}

fn parse_case(case: u32) -> Result<Case, Failure> {
    match case {
        ELLE_CASE_I => Ok(Case::I),
        ELLE_CASE_II => Ok(Case::II),
        ELLE_CASE_III => Ok(Case::III),
        other => Err(fail(ElleStatus::InvalidArgument, format!("unknown case {other}"))),
    }
}

fn pipeline_failure(e: PipelineError) -> Failure {
    let status = match &e {
        PipelineError::MissingCrop => ElleStatus::InvalidArgument,
        PipelineError::Crop(_) | PipelineError::Set(_) => ElleStatus::Data,
        PipelineError::Lle(LleError::Graph(GraphError::KOutOfRange { .. } | GraphError::KtOutOfRange { .. } | GraphError::OddKt(_)))
        | PipelineError::Lle(LleError::DimOutOfRange { .. } | LleError::Regularization(_))
        | PipelineError::Frontal(FrontalError::Dimension(_)) => ElleStatus::InvalidArgument,
        PipelineError::Frontal(FrontalError::SizeMismatch { .. }) => ElleStatus::InvalidArgument,
        _ => ElleStatus::Pipeline,
    };
    fail(status, e.to_string())
}

/// Message of the last failed call on this thread, or null after a success. The pointer is
/// valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn elle_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Default pipeline parameters.
#[no_mangle]
pub extern "C" fn elle_params_default() -> ElleParams {
    let p = PipelineParams::default();
    ElleParams {
        k: p.k,
        kt: p.kt,
        dim: p.dim,
        reg: DEFAULT_REG,
    }
}

/// Copies `width * height` row-major intensities in `[0, 1]` into a new image.
///
/// # Safety
/// `pixels` must point to `width * height` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn elle_image_new(width: usize, height: usize, pixels: *const f64, out: *mut *mut ElleImage) -> ElleStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        non_null(pixels, "pixels")?;
        let count = width
            .checked_mul(height)
            .ok_or_else(|| fail(ElleStatus::InvalidArgument, "image size overflows"))?;
        let data = slice::from_raw_parts(pixels, count).to_vec();
        let img = GrayImage::new(width, height, data).map_err(|e| fail(ElleStatus::InvalidArgument, e.to_string()))?;
        *out = Box::into_raw(Box::new(ElleImage(img)));
        Ok(())
    })
}

/// Reads a P2 or P5 graymap.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn elle_image_load_pgm(path: *const c_char, out: *mut *mut ElleImage) -> ElleStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        non_null(path, "path")?;
        let path = CStr::from_ptr(path)
            .to_str()
            .map_err(|_| fail(ElleStatus::InvalidArgument, "path is not UTF-8"))?;
        let img = load_pgm(path).map_err(|e| fail(ElleStatus::Data, format!("{path}: {e}")))?;
        *out = Box::into_raw(Box::new(ElleImage(img)));
        Ok(())
    })
}

/// Renders one synthetic head: identity `seed`, `yaw` in `[-90, 90]` degrees, `size >= 32`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn elle_synth_render(seed: u64, yaw: f64, size: usize, out: *mut *mut ElleImage) -> ElleStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let img = render_head(&make_identity(seed), yaw, size).map_err(|e| fail(ElleStatus::InvalidArgument, e.to_string()))?;
        *out = Box::into_raw(Box::new(ElleImage(img)));
        Ok(())
    })
}

/// # Safety
/// `image` must be null or a live image handle.
#[no_mangle]
pub unsafe extern "C" fn elle_image_width(image: *const ElleImage) -> usize {
    image.as_ref().map_or(0, |i| i.0.width())
}

/// # Safety
/// `image` must be null or a live image handle.
#[no_mangle]
pub unsafe extern "C" fn elle_image_height(image: *const ElleImage) -> usize {
    image.as_ref().map_or(0, |i| i.0.height())
}

/// Copies the row-major intensities into `out`, which holds `len >= width * height` doubles.
///
/// # Safety
/// `image` must be a live handle and `out` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn elle_image_pixels(image: *const ElleImage, out: *mut f64, len: usize) -> ElleStatus {
    guard(|| {
        let img = &non_null(image, "image")?.0;
        non_null(out, "out")?;
        let px = img.pixels();
        if len < px.len() {
            return Err(fail(ElleStatus::InvalidArgument, format!("buffer holds {len} values, need {}", px.len())));
        }
        slice::from_raw_parts_mut(out, px.len()).copy_from_slice(px);
        Ok(())
    })
}

/// # Safety
/// `image` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn elle_image_free(image: *mut ElleImage) {
    if !image.is_null() {
        drop(Box::from_raw(image));
    }
}

/// Builds the point set for `case` from `count` equally sized images. `yaws` (nullable)
/// holds `count` ground-truth angles. `crop` is required for case III and ignored otherwise.
///
/// # Safety
/// `images` must hold `count` live image handles, `yaws` null or `count` readable doubles,
/// `crop` null or readable, and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn elle_image_set_new(
    images: *const *const ElleImage,
    count: usize,
    yaws: *const f64,
    case: u32,
    crop: *const ElleCrop,
    out: *mut *mut ElleImageSet,
) -> ElleStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        non_null(images, "images")?;
        let case = parse_case(case)?;
        let frames = slice::from_raw_parts(images, count)
            .iter()
            .enumerate()
            .map(|(i, &p)| non_null(p, &format!("images[{i}]")).map(|h| h.0.clone()))
            .collect::<Result<Vec<_>, _>>()?;
        let yaws = (!yaws.is_null()).then(|| slice::from_raw_parts(yaws, count));
        let crop = crop.as_ref().map(|c| CropRect {
            left: c.left,
            top: c.top,
            width: c.width,
            height: c.height,
        });
        let set = assemble(&frames, yaws, case, crop).map_err(pipeline_failure)?;
        *out = Box::into_raw(Box::new(ElleImageSet { set, case }));
        Ok(())
    })
}

/// Number of points (twice the frame count for cases II and III).
///
/// # Safety
/// `set` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn elle_image_set_len(set: *const ElleImageSet) -> usize {
    set.as_ref().map_or(0, |s| s.set.len())
}

/// # Safety
/// `set` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn elle_image_set_free(set: *mut ElleImageSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Embeds the set with the LLE variant matching its case. `params` may be null for defaults.
///
/// # Safety
/// `set` must be a live handle, `params` null or readable, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn elle_embed(set: *const ElleImageSet, params: *const ElleParams, out: *mut *mut ElleEmbedding) -> ElleStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let s = non_null(set, "set")?;
        let p = params.as_ref().copied().unwrap_or_else(|| elle_params_default());
        let params = PipelineParams {
            k: p.k,
            kt: p.kt,
            dim: p.dim,
            reg: p.reg,
        };
        let emb = embed_case(&s.set, s.case, &params).map_err(|e| pipeline_failure(e.into()))?;
        *out = Box::into_raw(Box::new(ElleEmbedding(emb)));
        Ok(())
    })
}

/// # Safety
/// `emb` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn elle_embedding_rows(emb: *const ElleEmbedding) -> usize {
    emb.as_ref().map_or(0, |e| e.0.n())
}

/// # Safety
/// `emb` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn elle_embedding_dim(emb: *const ElleEmbedding) -> usize {
    emb.as_ref().map_or(0, |e| e.0.dim())
}

/// Copies coordinates row-major into `out`, which holds `len >= rows * dim` doubles.
///
/// # Safety
/// `emb` must be a live handle and `out` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn elle_embedding_coords(emb: *const ElleEmbedding, out: *mut f64, len: usize) -> ElleStatus {
    guard(|| {
        let e = &non_null(emb, "emb")?.0;
        non_null(out, "out")?;
        let need = e.n() * e.dim();
        if len < need {
            return Err(fail(ElleStatus::InvalidArgument, format!("buffer holds {len} values, need {need}")));
        }
        let dst = slice::from_raw_parts_mut(out, need);
        for i in 0..e.n() {
            for c in 0..e.dim() {
                dst[i * e.dim() + c] = e.get(i, c);
            }
        }
        Ok(())
    })
}

/// # Safety
/// `emb` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn elle_embedding_free(emb: *mut ElleEmbedding) {
    if !emb.is_null() {
        drop(Box::from_raw(emb));
    }
}

/// Identifies the frontal frame of a two-dimensional embedding of `set`.
///
/// # Safety
/// `emb` and `set` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn elle_identify(emb: *const ElleEmbedding, set: *const ElleImageSet, mode: u32, out: *mut ElleReport) -> ElleStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let e = &non_null(emb, "emb")?.0;
        let s = &non_null(set, "set")?.set;
        let mode = match mode {
            ELLE_MODE_DISCRETE => Mode::Discrete,
            ELLE_MODE_QUADRATIC_VERTEX => Mode::QuadraticVertex,
            other => return Err(fail(ElleStatus::InvalidArgument, format!("unknown mode {other}"))),
        };
        let r = identify(e, s, mode).map_err(|e| pipeline_failure(e.into()))?;
        *out = ElleReport {
            identified_index: r.identified_index,
            has_identified_yaw: r.identified_yaw.is_some(),
            identified_yaw: r.identified_yaw.unwrap_or(f64::NAN),
            has_true_frontal_yaw: r.true_frontal_yaw.is_some(),
            true_frontal_yaw: r.true_frontal_yaw.unwrap_or(f64::NAN),
            has_abs_error: r.abs_error.is_some(),
            abs_error: r.abs_error.unwrap_or(f64::NAN),
            vertex_coords: r.vertex_coords,
            mode: match r.mode {
                Mode::Discrete => ELLE_MODE_DISCRETE,
                Mode::QuadraticVertex => ELLE_MODE_QUADRATIC_VERTEX,
            },
            used_fallback: r.fallback.is_some(),
        };
        Ok(())
    })
}
