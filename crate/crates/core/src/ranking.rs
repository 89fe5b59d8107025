//! Candidate scoring, ordering and Borda rank fusion.

use std::cmp::Ordering as CmpOrdering;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::matchers::{
    align_blocks, length_filter, shape_code, shape_mismatch, ssd, ulam_word_similarity, ShapeCode,
    DEFAULT_SECTOR_WIDTH, DEFAULT_TOLERANCE, DEFAULT_WINDOW_CAP,
};
use crate::words::{WordBlock, WordId};

/// All descriptor values of one candidate against the query.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchScore {
    pub candidate: WordId,
    /// Candidate width minus query width.
    pub width_delta: i64,
    pub ssd: f64,
    pub shape_mismatches: usize,
    pub ulam_tau: f64,
    /// Candidate character count minus query character count.
    pub char_count_delta: i64,
    /// 1-based position under Borda fusion.
    pub fused_rank: usize,
    /// The ordinal comparison ran on a block-reduced frame.
    pub ulam_downsampled: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ordering {
    #[default]
    Ssd,
    Fused,
}

impl FromStr for Ordering {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "ssd" => Ok(Ordering::Ssd),
            "fused" => Ok(Ordering::Fused),
            other => Err(format!(
                "unknown ordering {other:?} (expected ssd or fused)"
            )),
        }
    }
}

impl fmt::Display for Ordering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ordering::Ssd => "ssd",
            Ordering::Fused => "fused",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedMatches {
    /// `None` when the query came from outside the index.
    pub query: Option<WordId>,
    pub ordering: Ordering,
    pub rows: Vec<MatchScore>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatchParams {
    pub tolerance: usize,
    pub sector_width: usize,
    pub top_k: usize,
    pub ordering: Ordering,
    pub window_cap: usize,
}

impl Default for MatchParams {
    fn default() -> Self {
        MatchParams {
            tolerance: DEFAULT_TOLERANCE,
            sector_width: DEFAULT_SECTOR_WIDTH,
            top_k: 10,
            ordering: Ordering::Ssd,
            window_cap: DEFAULT_WINDOW_CAP,
        }
    }
}

fn code_for(word: &WordBlock, sector_width: usize) -> ShapeCode {
    match &word.shape_code {
        Some(c) if c.sector_width == sector_width => c.clone(),
        _ => shape_code(word, sector_width),
    }
}

/// Scores one candidate on every descriptor. `fused_rank` is left at 0.
pub fn score_candidate(
    query: &WordBlock,
    query_code: &ShapeCode,
    cand: &WordBlock,
    params: &MatchParams,
) -> MatchScore {
    let (fq, fc) = align_blocks(query, cand);
    let ssd: f64 = ssd(&fq, &fc).expect("aligned frames share dimensions");
    let ulam = ulam_word_similarity(query, cand, params.window_cap);
    MatchScore {
        candidate: cand.id,
        width_delta: cand.width as i64 - query.width as i64,
        ssd,
        shape_mismatches: shape_mismatch(query_code, &code_for(cand, params.sector_width)),
        ulam_tau: ulam.tau,
        char_count_delta: cand.char_count as i64 - query.char_count as i64,
        fused_rank: 0,
        ulam_downsampled: ulam.downsampled,
    }
}

/// Ranks `candidates` against `query`. Only candidates passing the length
/// filter are scored; the query itself is not excluded. Scoring runs on the
/// current rayon pool; the ordering does not depend on it.
pub fn match_word(
    query: &WordBlock,
    candidates: &[WordBlock],
    params: &MatchParams,
) -> RankedMatches {
    let query_code = code_for(query, params.sector_width);
    let mut rows: Vec<MatchScore> = candidates
        .par_iter()
        .filter(|c| length_filter(query.width, c.width, params.tolerance))
        .map(|c| score_candidate(query, &query_code, c, params))
        .collect();
    fuse_ranks(&mut rows);
    sort_rows(&mut rows, params.ordering);
    rows.truncate(params.top_k);
    RankedMatches {
        query: Some(query.id),
        ordering: params.ordering,
        rows,
    }
}

pub fn sort_rows(rows: &mut [MatchScore], ordering: Ordering) {
    match ordering {
        Ordering::Ssd => {
            rows.sort_by(|a, b| a.ssd.total_cmp(&b.ssd).then(a.candidate.cmp(&b.candidate)))
        }
        Ordering::Fused => rows.sort_by(|a, b| {
            a.fused_rank
                .cmp(&b.fused_rank)
                .then(a.candidate.cmp(&b.candidate))
        }),
    }
}

/// Competition ranks (1 + number of strictly better rows) under `cmp`.
fn descriptor_ranks<F>(rows: &[MatchScore], cmp: F) -> Vec<usize>
where
    F: Fn(&MatchScore, &MatchScore) -> CmpOrdering,
{
    let mut sorted: Vec<&MatchScore> = rows.iter().collect();
    sorted.sort_by(|a, b| cmp(a, b));
    rows.iter()
        .map(|r| 1 + sorted.partition_point(|s| cmp(s, r) == CmpOrdering::Less))
        .collect()
}

/// Borda fusion. Each descriptor ranks the set (ssd ascending, shape
/// mismatches ascending, tau descending, |char count delta| ascending);
/// `fused_rank` orders rows by rank sum, ties by candidate id.
pub fn fuse_ranks(rows: &mut [MatchScore]) {
    if rows.is_empty() {
        return;
    }
    let sums = borda_sums(rows);
    let mut order: Vec<(usize, usize)> = sums
        .into_iter()
        .enumerate()
        .map(|(i, sum)| (sum, i))
        .collect();
    order.sort_by(|a, b| {
        a.0.cmp(&b.0)
            .then(rows[a.1].candidate.cmp(&rows[b.1].candidate))
    });
    for (pos, (_, i)) in order.into_iter().enumerate() {
        rows[i].fused_rank = pos + 1;
    }
}

/// Rank sums behind [`fuse_ranks`], exposed for inspection.
pub fn borda_sums(rows: &[MatchScore]) -> Vec<usize> {
    let by_ssd = descriptor_ranks(rows, |a, b| a.ssd.total_cmp(&b.ssd));
    let by_shape = descriptor_ranks(rows, |a, b| a.shape_mismatches.cmp(&b.shape_mismatches));
    let by_tau = descriptor_ranks(rows, |a, b| b.ulam_tau.total_cmp(&a.ulam_tau));
    let by_chars = descriptor_ranks(rows, |a, b| {
        a.char_count_delta.abs().cmp(&b.char_count_delta.abs())
    });
    (0..rows.len())
        .map(|i| by_ssd[i] + by_shape[i] + by_tau[i] + by_chars[i])
        .collect()
}
