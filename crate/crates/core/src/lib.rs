//! Word spotting for degraded, binarized document pages.
//!
//! Pages are cut into lines with the horizontal projection profile, lines
//! into words with the histogram of white-space run lengths, and word images
//! are compared with four descriptors: a width filter, a normalized sum of
//! squared differences, an ascender/descender shape code, and an ordinal
//! correlation based on Ulam's distance.
//!
//! The real-valued parts are generic over [`Scalar`] (and
//! [`num_traits::Float`] for the SSD); the aliases below fix the common
//! choices.

pub mod binarize;
pub mod cli;
pub mod error;
pub mod font;
pub mod image;
pub mod index;
pub mod lines;
pub mod matchers;
pub mod pnm;
pub mod profiles;
pub mod ranking;
pub mod scalar;
pub mod synth;
pub mod words;

pub use binarize::{binarize, otsu_threshold, Threshold};
pub use error::{Error, PnmError, Result};
pub use image::{BinaryImage, BoundingBox, GrayImage};
pub use index::WordIndex;
pub use lines::{
    detect_bands, estimate_reference_lines, segment_lines, vote_heights, LineCandidate,
    SegmentParams, TextLine,
};
pub use matchers::{
    align_blocks, composition_permutation, length_filter, lis_length, rank_window, shape_code,
    shape_mismatch, ssd, ulam_tau, ulam_word_similarity, RankMatrix, ShapeCode, UlamResult,
};
pub use pnm::{load_pnm, save_pbm, save_pgm, PnmImage};
pub use profiles::{
    gap_histogram, horizontal_profile, mvpl, vertical_profile, GapHistogram, Profile,
};
pub use ranking::{fuse_ranks, match_word, MatchParams, MatchScore, Ordering, RankedMatches};
pub use scalar::Scalar;
pub use synth::{render_synthetic_page, GroundTruth, SyntheticPageSpec};
pub use words::{
    count_characters, segment_page, segment_words, word_gap_threshold, WordBlock, WordId,
};

/// Exact rational used for reproducible correlation values.
pub type Rational = num_rational::Ratio<i64>;

/// Ordinal correlation in double precision.
pub type UlamResultF64 = UlamResult<f64>;
/// Ordinal correlation in single precision.
pub type UlamResultF32 = UlamResult<f32>;
/// Ordinal correlation computed exactly.
pub type ExactUlamResult = UlamResult<Rational>;
