//! Word similarity descriptors.

mod align;
mod length;
mod lis;
mod shape;
mod ssd;
mod ulam;

pub use align::align_blocks;
pub use length::{length_filter, tolerance_for_dpi, DEFAULT_DPI, DEFAULT_TOLERANCE};
pub use lis::lis_length;
pub use shape::{
    shape_code, shape_code_with, shape_mismatch, SectorPriority, ShapeCode, ShapeParams,
    DEFAULT_SECTOR_WIDTH,
};
pub use ssd::{max_dissimilar, ssd};
pub use ulam::{
    composition_permutation, rank_window, ulam_from_permutation, ulam_tau, ulam_word_similarity,
    RankMatrix, UlamResult, UlamSimilarity, DEFAULT_WINDOW_CAP,
};
