//! Ordinal correlation of two windows through Ulam's distance.
//!
//! Each window is ranked (ties in raster order), the second window's ranks
//! are read off in the order of the first window's ranks, and the distance of
//! that composition permutation to the identity and to the reverse identity
//! is `n` minus the longest increasing subsequence.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::align::align_blocks;
use super::lis::lis_length;
use crate::error::{Error, Result};
use crate::image::BinaryImage;
use crate::scalar::Scalar;
use crate::words::WordBlock;

/// 64 x 256 pixels.
pub const DEFAULT_WINDOW_CAP: usize = 64 * 256;

/// Ranks `1..=n` of a window's values in raster order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankMatrix {
    pub ranks: Vec<u32>,
}

impl RankMatrix {
    pub fn n(&self) -> usize {
        self.ranks.len()
    }
}

/// Ranks by ascending value; equal values are ranked in raster order
/// (row-major, top-left first). Incomparable values (NaN) count as equal.
pub fn rank_window<T: PartialOrd>(values: &[T]) -> RankMatrix {
    let mut order: Vec<usize> = (0..values.len()).collect();
    // Stable sort keeps raster order within ties.
    order.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).unwrap_or(Ordering::Equal));
    let mut ranks = vec![0u32; values.len()];
    for (rank, &pos) in order.iter().enumerate() {
        ranks[pos] = rank as u32 + 1;
    }
    RankMatrix { ranks }
}

/// `s[i]` is the rank in the second window of the pixel holding rank `i + 1`
/// in the first.
pub fn composition_permutation(first: &RankMatrix, second: &RankMatrix) -> Result<Vec<u32>> {
    if first.n() != second.n() {
        return Err(Error::SizeMismatch(first.n(), second.n()));
    }
    let mut position_of_rank = vec![0usize; first.n()];
    for (pos, &r) in first.ranks.iter().enumerate() {
        position_of_rank[r as usize - 1] = pos;
    }
    Ok(position_of_rank
        .into_iter()
        .map(|pos| second.ranks[pos])
        .collect())
}

/// Distances and correlations derived from one composition permutation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UlamResult<S> {
    pub n: usize,
    /// Composition permutation.
    pub s: Vec<u32>,
    /// `s` reversed; its distance to the identity equals the distance of `s`
    /// to the reverse identity.
    pub s_reversed: Vec<u32>,
    /// Distance of `s` to the identity.
    pub delta1: usize,
    /// Distance of `s` to the reverse identity.
    pub delta2: usize,
    pub tau_u: S,
    pub tau_r: S,
    /// `(tau_u - tau_r) / 2`.
    pub tau: S,
}

/// Correlations for a composition permutation of length `n >= 2`.
pub fn ulam_from_permutation<S: Scalar>(s: Vec<u32>) -> Result<UlamResult<S>> {
    let n = s.len();
    if n < 2 {
        return Err(Error::WindowTooSmall(n));
    }
    let s_reversed: Vec<u32> = s.iter().rev().copied().collect();
    let delta1 = n - lis_length(&s);
    let delta2 = n - lis_length(&s_reversed);
    let one = S::one();
    let two = one + one;
    let denom = S::from_count(n as u64 - 1);
    let tau_u = one - two * S::from_count(delta1 as u64) / denom;
    let tau_r = one - two * S::from_count(delta2 as u64) / denom;
    let tau = (tau_u - tau_r) / two;
    Ok(UlamResult {
        n,
        s,
        s_reversed,
        delta1,
        delta2,
        tau_u,
        tau_r,
        tau,
    })
}

/// Ordinal correlation of two equally sized windows given in raster order.
pub fn ulam_tau<S: Scalar, T: PartialOrd>(first: &[T], second: &[T]) -> Result<UlamResult<S>> {
    if first.len() != second.len() {
        return Err(Error::SizeMismatch(first.len(), second.len()));
    }
    if first.len() < 2 {
        return Err(Error::WindowTooSmall(first.len()));
    }
    let s = composition_permutation(&rank_window(first), &rank_window(second))?;
    ulam_from_permutation(s)
}

/// Result of comparing two word images as single binary windows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UlamSimilarity {
    pub tau: f64,
    /// Set when the aligned frame exceeded the cap and was block-reduced.
    pub downsampled: bool,
}

/// Aligns the two words and computes `tau` over the whole frame, ink = 1.
/// Frames with more than `cap` pixels are reduced by an integer block
/// factor first (a block is ink if any of its pixels is).
pub fn ulam_word_similarity(a: &WordBlock, b: &WordBlock, cap: usize) -> UlamSimilarity {
    let (fa, fb) = align_blocks(a, b);
    let cap = cap.max(2);
    let mut factor = 1;
    while fa.width().div_ceil(factor) * fa.height().div_ceil(factor) > cap {
        factor += 1;
    }
    let (fa, fb) = if factor > 1 {
        (reduce(&fa, factor), reduce(&fb, factor))
    } else {
        (fa, fb)
    };
    let wa: Vec<u8> = fa.pixels().iter().map(|&p| p as u8).collect();
    let wb: Vec<u8> = fb.pixels().iter().map(|&p| p as u8).collect();
    let tau = if wa.len() < 2 {
        // A single pixel carries no ordering; equal pixels count as agreement.
        if wa == wb {
            1.0
        } else {
            -1.0
        }
    } else {
        ulam_tau::<f64, u8>(&wa, &wb).expect("equal frames").tau
    };
    UlamSimilarity {
        tau,
        downsampled: factor > 1,
    }
}

fn reduce(img: &BinaryImage, factor: usize) -> BinaryImage {
    let w = img.width().div_ceil(factor);
    let h = img.height().div_ceil(factor);
    let mut out = BinaryImage::blank(w, h).expect("non-empty");
    for y in 0..img.height() {
        for x in 0..img.width() {
            if img.get(x, y) {
                out.set(x / factor, y / factor, true);
            }
        }
    }
    out
}
