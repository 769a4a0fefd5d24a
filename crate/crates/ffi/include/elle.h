/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#ifndef ELLE_H
#define ELLE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Plain LLE on the original frames.
#define ELLE_CASE_I 1

// Dual-protocol LLE on the originals and their mirrors.
#define ELLE_CASE_II 2

// As case II, on frames cropped to the head.
#define ELLE_CASE_III 3

#define ELLE_MODE_DISCRETE 0

#define ELLE_MODE_QUADRATIC_VERTEX 1

// Result code of every call.
typedef enum ElleStatus {
  ELLE_STATUS_OK = 0,
  // A required pointer argument was null.
  ELLE_STATUS_NULL_POINTER = 1,
  // A parameter was out of range (case, mode, K, dimension, buffer length, ...).
  ELLE_STATUS_INVALID_ARGUMENT = 2,
  // Input data could not be read or is inconsistent.
  ELLE_STATUS_DATA = 3,
  // The pipeline hit a numerical degeneracy.
  ELLE_STATUS_PIPELINE = 4,
  // An internal panic was caught.
  ELLE_STATUS_PANIC = 5,
} ElleStatus;

// Embedding coordinates, one row per point.
typedef struct ElleEmbedding ElleEmbedding;

// Grayscale image with intensities in `[0, 1]`.
typedef struct ElleImage ElleImage;

// Feature vectors of one sequence, possibly flip-augmented.
typedef struct ElleImageSet ElleImageSet;

typedef struct ElleParams {
  size_t k;
  size_t kt;
  size_t dim;
  double reg;
} ElleParams;

typedef struct ElleCrop {
  size_t left;
  size_t top;
  size_t width;
  size_t height;
} ElleCrop;

// Frontal identification result. Optional values come with a `has_*` flag.
typedef struct ElleReport {
  size_t identified_index;
  bool has_identified_yaw;
  double identified_yaw;
  bool has_true_frontal_yaw;
  double true_frontal_yaw;
  bool has_abs_error;
  double abs_error;
  double vertex_coords[2];
  uint32_t mode;
  // True when a vertex fit failed and the discrete rule was used instead.
  bool used_fallback;
} ElleReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null after a success. The pointer is
// valid until the next call into this library on the same thread.
const char *elle_last_error(void);

// Default pipeline parameters.
struct ElleParams elle_params_default(void);

// Copies `width * height` row-major intensities in `[0, 1]` into a new image.
//
// # Safety
// `pixels` must point to `width * height` readable doubles; `out` must be writable.
enum ElleStatus elle_image_new(size_t width,
                               size_t height,
                               const double *pixels,
                               struct ElleImage **out);

// Reads a P2 or P5 graymap.
//
// # Safety
// `path` must be a NUL-terminated string; `out` must be writable.
enum ElleStatus elle_image_load_pgm(const char *path, struct ElleImage **out);

// Renders one synthetic head: identity `seed`, `yaw` in `[-90, 90]` degrees, `size >= 32`.
//
// # Safety
// `out` must be writable.
enum ElleStatus elle_synth_render(uint64_t seed, double yaw, size_t size, struct ElleImage **out);

// # Safety
// `image` must be null or a live image handle.
size_t elle_image_width(const struct ElleImage *image);

// # Safety
// `image` must be null or a live image handle.
size_t elle_image_height(const struct ElleImage *image);

// Copies the row-major intensities into `out`, which holds `len >= width * height` doubles.
//
// # Safety
// `image` must be a live handle and `out` must point to `len` writable doubles.
enum ElleStatus elle_image_pixels(const struct ElleImage *image, double *out, size_t len);

// # Safety
// `image` must be null or a handle not yet freed.
void elle_image_free(struct ElleImage *image);

// Builds the point set for `case` from `count` equally sized images. `yaws` (nullable)
// holds `count` ground-truth angles. `crop` is required for case III and ignored otherwise.
//
// # Safety
// `images` must hold `count` live image handles, `yaws` null or `count` readable doubles,
// `crop` null or readable, and `out` writable.
enum ElleStatus elle_image_set_new(const struct ElleImage *const *images,
                                   size_t count,
                                   const double *yaws,
                                   uint32_t case_,
                                   const struct ElleCrop *crop,
                                   struct ElleImageSet **out);

// Number of points (twice the frame count for cases II and III).
//
// # Safety
// `set` must be null or a live handle.
size_t elle_image_set_len(const struct ElleImageSet *set);

// # Safety
// `set` must be null or a handle not yet freed.
void elle_image_set_free(struct ElleImageSet *set);

// Embeds the set with the LLE variant matching its case. `params` may be null for defaults.
//
// # Safety
// `set` must be a live handle, `params` null or readable, `out` writable.
enum ElleStatus elle_embed(const struct ElleImageSet *set,
                           const struct ElleParams *params,
                           struct ElleEmbedding **out);

// # Safety
// `emb` must be null or a live handle.
size_t elle_embedding_rows(const struct ElleEmbedding *emb);

// # Safety
// `emb` must be null or a live handle.
size_t elle_embedding_dim(const struct ElleEmbedding *emb);

// Copies coordinates row-major into `out`, which holds `len >= rows * dim` doubles.
//
// # Safety
// `emb` must be a live handle and `out` must point to `len` writable doubles.
enum ElleStatus elle_embedding_coords(const struct ElleEmbedding *emb, double *out, size_t len);

// # Safety
// `emb` must be null or a handle not yet freed.
void elle_embedding_free(struct ElleEmbedding *emb);

// Identifies the frontal frame of a two-dimensional embedding of `set`.
//
// # Safety
// `emb` and `set` must be live handles and `out` writable.
enum ElleStatus elle_identify(const struct ElleEmbedding *emb,
                              const struct ElleImageSet *set,
                              uint32_t mode,
                              struct ElleReport *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ELLE_H */
