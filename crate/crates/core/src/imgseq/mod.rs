//! Image loading, flipping, cropping, yaw sweeps and dataset assembly.

mod dataset;
mod image;
mod pgm;
mod set;
mod yaw;

pub use dataset::{frame_file_name, frame_path, list_subjects, load_subject, parse_frame_file_name, DatasetError};
pub use image::{quantize, CropRect, GrayImage, ImageError};
pub use pgm::{encode_pgm, load_pgm, parse_pgm, write_pgm, PgmError};
pub use set::{build_image_set, ImageSet, Point, Provenance, SetError};
pub use yaw::{YawSpec, YawSpecError};
