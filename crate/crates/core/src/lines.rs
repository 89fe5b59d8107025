//! Text line extraction from the horizontal projection profile.
//!
//! Rows whose ink count reaches the page mean ("full" rows) form the body of
//! each line, roughly the band between x-line and baseline. Lines that are
//! too short to reach the page mean are recovered by re-running the same
//! detection on the uncovered parts of the page, and bands whose height
//! disagrees with the majority are dropped.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::{BinaryImage, BoundingBox};
use crate::profiles::{horizontal_profile, mvpl, Profile};
use crate::scalar::Scalar;

/// A maximal run of full rows, inclusive on both ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LineCandidate {
    pub first_row: usize,
    pub last_row: usize,
}

impl LineCandidate {
    pub fn new(first_row: usize, last_row: usize) -> Self {
        debug_assert!(first_row <= last_row);
        LineCandidate {
            first_row,
            last_row,
        }
    }

    pub fn height(&self) -> usize {
        self.last_row - self.first_row + 1
    }

    fn rows(&self) -> Range<usize> {
        self.first_row..self.last_row + 1
    }

    fn offset(self, by: usize) -> Self {
        LineCandidate::new(self.first_row + by, self.last_row + by)
    }
}

/// A text line with its four reference rows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TextLine {
    /// Full-width band holding the line.
    pub band: BoundingBox,
    pub top_line: usize,
    pub x_line: usize,
    pub baseline: usize,
    pub bottom_line: usize,
    /// Spacing between consecutive reference rows.
    pub k: f64,
}

impl TextLine {
    pub fn rows(&self) -> Range<usize> {
        self.band.top..self.band.bottom()
    }
}

/// Segmentation tunables shared by line and word extraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentParams {
    /// Drop isolated ink pixels before profiling.
    pub despeckle: bool,
    /// How many times uncovered regions are re-scanned for short lines.
    pub max_recursion: usize,
    /// Column runs carrying fewer ink pixels than this are treated as blank.
    pub min_run_mass: u32,
}

impl Default for SegmentParams {
    fn default() -> Self {
        SegmentParams {
            despeckle: true,
            max_recursion: 2,
            min_run_mass: 3,
        }
    }
}

/// Maximal runs of rows with `count >= threshold`, top to bottom.
pub fn detect_bands<S: Scalar>(profile: &Profile, threshold: S) -> Vec<LineCandidate> {
    let mut bands = Vec::new();
    let mut start = None;
    for (i, &c) in profile.counts.iter().enumerate() {
        let full = S::from_count(c as u64) >= threshold;
        match (full, start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                bands.push(LineCandidate::new(s, i - 1));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        bands.push(LineCandidate::new(s, profile.len() - 1));
    }
    bands
}

/// Outcome of the height vote.
#[derive(Debug, Clone, PartialEq)]
pub struct Vote {
    pub representative: f64,
    pub kept: Vec<LineCandidate>,
    pub discarded: Vec<LineCandidate>,
}

/// Ink per row, as a fraction of the representative height, that a band found
/// by recursion must average: roughly one stroke width. Keeps leftover
/// noise in margins from passing as a short line.
pub const MIN_RECOVERED_DENSITY: f64 = 0.2;

/// Relative deviation above which a candidate is discarded.
pub const MAX_HEIGHT_DEVIATION: f64 = 0.5;

/// Elects a representative line height and discards candidates deviating
/// from it by more than 50%.
///
/// Heights are sorted and grouped greedily; a height joins the current group
/// while it is within 25% of the group's smallest member. Every row votes
/// for the group of the band it lies in, so the winner is the group covering
/// the most rows (ties go to the group with more bands). The representative
/// is that group's median.
pub fn vote_heights(candidates: &[LineCandidate]) -> Result<Vote> {
    if candidates.is_empty() {
        return Err(Error::EmptyInput("line candidates"));
    }
    let mut heights: Vec<usize> = candidates.iter().map(|c| c.height()).collect();
    heights.sort_unstable();

    let mut clusters: Vec<&[usize]> = Vec::new();
    let mut start = 0;
    for i in 1..=heights.len() {
        if i == heights.len() || 4 * heights[i] > 5 * heights[start] {
            clusters.push(&heights[start..i]);
            start = i;
        }
    }
    let best = clusters
        .iter()
        .max_by(|a, b| {
            a.iter()
                .sum::<usize>()
                .cmp(&b.iter().sum::<usize>())
                .then_with(|| a.len().cmp(&b.len()))
        })
        .expect("at least one cluster");
    let mid = best.len() / 2;
    let representative = if best.len() % 2 == 1 {
        best[mid] as f64
    } else {
        (best[mid - 1] + best[mid]) as f64 / 2.0
    };

    let (kept, discarded) = candidates.iter().partition(|c| {
        (c.height() as f64 - representative).abs() / representative <= MAX_HEIGHT_DEVIATION
    });
    Ok(Vote {
        representative,
        kept,
        discarded,
    })
}

/// Locates x-line and baseline inside `band` and derives the other two
/// reference rows from their spacing.
///
/// Rows reaching the band's own mean are "full". Runs of full rows joined by
/// rows holding at least half the mean form regions; the x-line and baseline
/// are the first and last row of the region carrying the most ink, so an
/// isolated descender bar or ascender serif cannot stretch the body. Bands
/// under four rows, or whose best region is a single row, get a degenerate
/// line with `k = height / 3`.
pub fn estimate_reference_lines(img: &BinaryImage, band: LineCandidate) -> TextLine {
    let bbox = BoundingBox::new(0, band.first_row, img.width(), band.height());
    let degenerate = || TextLine {
        band: bbox,
        top_line: band.first_row,
        x_line: band.first_row,
        baseline: band.last_row,
        bottom_line: band.last_row,
        k: band.height() as f64 / 3.0,
    };
    if band.height() < 4 {
        return degenerate();
    }
    let local = Profile {
        axis: crate::profiles::Axis::Horizontal,
        counts: band
            .rows()
            .map(|y| img.row(y).iter().filter(|&&p| p).count() as u32)
            .collect(),
    };
    let mean: f64 = mvpl(&local);
    let (x_line, baseline) = match strongest_full_region(&local.counts, mean) {
        Some((x, b)) if b > x => (band.first_row + x, band.first_row + b),
        _ => return degenerate(),
    };
    let k = baseline - x_line;
    TextLine {
        band: bbox,
        top_line: x_line.saturating_sub(k).max(band.first_row),
        x_line,
        baseline,
        bottom_line: (baseline + k).min(band.last_row),
        k: k as f64,
    }
}

/// First and last index of the heaviest region of full rows.
fn strongest_full_region(counts: &[u32], mean: f64) -> Option<(usize, usize)> {
    let full = |c: u32| c > 0 && c as f64 >= mean;
    let bridge = |c: u32| c > 0 && 2.0 * c as f64 >= mean;
    let mut best: Option<(u64, usize, usize)> = None;
    let mut i = 0;
    while i < counts.len() {
        if !full(counts[i]) {
            i += 1;
            continue;
        }
        let start = i;
        let mut end = i;
        let mut j = i;
        while j < counts.len() && bridge(counts[j]) {
            if full(counts[j]) {
                end = j;
            }
            j += 1;
        }
        let mass: u64 = counts[start..=end].iter().map(|&c| c as u64).sum();
        if best.is_none_or(|(m, _, _)| mass > m) {
            best = Some((mass, start, end));
        }
        i = end + 1;
    }
    best.map(|(_, s, e)| (s, e))
}

pub fn segment_lines(img: &BinaryImage) -> Vec<TextLine> {
    segment_lines_with(img, &SegmentParams::default())
}

/// Full line extraction: mean-threshold detection, recursive recovery of
/// short lines in uncovered regions, height voting, reference-line
/// estimation.
pub fn segment_lines_with(img: &BinaryImage, params: &SegmentParams) -> Vec<TextLine> {
    let cleaned;
    let img = if params.despeckle {
        cleaned = img.remove_isolated_pixels();
        &cleaned
    } else {
        img
    };
    let profile = horizontal_profile(img);
    if profile.total() == 0 {
        return Vec::new();
    }

    let threshold: f64 = mvpl(&profile);
    let first = detect_bands(&profile, threshold);
    let Ok(vote) = vote_heights(&first) else {
        return Vec::new();
    };
    let mut vote = revote_merged(&profile, &first, vote.representative);

    for _ in 0..params.max_recursion {
        let mut found = Vec::new();
        for region in uncovered_regions(&vote.kept, profile.len()) {
            if (region.len() as f64) * 2.0 <= vote.representative {
                continue;
            }
            let local = profile.slice(region.clone());
            if local.total() == 0 {
                continue;
            }
            let t: f64 = mvpl(&local);
            let min_mass =
                |c: &LineCandidate| c.height() as f64 * vote.representative * MIN_RECOVERED_DENSITY;
            found.extend(
                detect_bands(&local, t)
                    .into_iter()
                    .map(|c| c.offset(region.start))
                    .filter(|c| profile.slice(c.rows()).total() as f64 >= min_mass(c)),
            );
        }
        if found.is_empty() {
            break;
        }
        let mut all = vote.kept.clone();
        all.extend(found);
        all.sort();
        let before = vote.kept.len();
        vote = revote_merged(&profile, &all, vote.representative);
        if vote.kept.len() == before {
            break;
        }
    }

    let mut cores = vote.kept;
    cores.sort();
    let bands = expand_cores(&cores, profile.len());
    bands
        .into_iter()
        .map(|b| estimate_reference_lines(img, b))
        .collect()
}

fn revote_merged(profile: &Profile, candidates: &[LineCandidate], representative: f64) -> Vote {
    let merged = merge_fragments(profile, candidates, representative);
    vote_heights(&merged).expect("non-empty")
}

/// Joins neighbouring candidates when every row between them carries ink
/// and the joined band stays within the vote tolerance of `representative`.
/// A line whose body rows straddle the threshold splits into such pieces.
///
/// Taller candidates absorb their neighbours first, so ascender and
/// descender fragments attach to the body rather than to each other.
pub fn merge_fragments(
    profile: &Profile,
    candidates: &[LineCandidate],
    representative: f64,
) -> Vec<LineCandidate> {
    let mut slots: Vec<Option<LineCandidate>> = {
        let mut sorted = candidates.to_vec();
        sorted.sort();
        sorted.into_iter().map(Some).collect()
    };
    let limit = representative * (1.0 + MAX_HEIGHT_DEVIATION);
    let bridged = |a: &LineCandidate, b: &LineCandidate| {
        (a.last_row + 1..b.first_row).all(|y| profile.counts[y] > 0)
    };

    let mut order: Vec<usize> = (0..slots.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(slots[i].map_or(0, |c| c.height())));
    for i in order {
        let Some(mut anchor) = slots[i] else { continue };
        loop {
            let left = slots[..i].iter().rposition(Option::is_some);
            let right = slots[i + 1..]
                .iter()
                .position(Option::is_some)
                .map(|p| p + i + 1);
            let joinable = |j: usize| {
                let other = slots[j].expect("occupied");
                let (lo, hi) = if j < i {
                    (other, anchor)
                } else {
                    (anchor, other)
                };
                let joined = LineCandidate::new(lo.first_row, hi.last_row.max(lo.last_row));
                (bridged(&lo, &hi) && joined.height() as f64 <= limit).then_some((j, joined))
            };
            let best = [left, right]
                .into_iter()
                .flatten()
                .filter_map(joinable)
                .min_by_key(|(_, joined)| joined.height());
            let Some((j, joined)) = best else { break };
            slots[j] = None;
            anchor = joined;
        }
        slots[i] = Some(anchor);
    }
    slots.into_iter().flatten().collect()
}

/// Row ranges not claimed by any core and its one-core-height halo.
fn uncovered_regions(cores: &[LineCandidate], rows: usize) -> Vec<Range<usize>> {
    let mut sorted = cores.to_vec();
    sorted.sort();
    let mut regions = Vec::new();
    let mut cursor = 0;
    for c in &sorted {
        let start = c.first_row.saturating_sub(c.height());
        if start > cursor {
            regions.push(cursor..start);
        }
        cursor = cursor.max((c.last_row + 1 + c.height()).min(rows));
    }
    if cursor < rows {
        regions.push(cursor..rows);
    }
    regions
}

/// Grows each core by its own height on both sides, without crossing the
/// page edge or the midpoint to a neighbouring core.
fn expand_cores(cores: &[LineCandidate], rows: usize) -> Vec<LineCandidate> {
    cores
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let h = c.height();
            let mut first = c.first_row.saturating_sub(h);
            let mut last = (c.last_row + h).min(rows - 1);
            if i > 0 {
                let prev = cores[i - 1];
                first = first.max((prev.last_row + c.first_row) / 2 + 1);
            }
            if let Some(next) = cores.get(i + 1) {
                last = last.min((c.last_row + next.first_row) / 2);
            }
            LineCandidate::new(first.min(c.first_row), last.max(c.last_row))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::Axis;
    use crate::synth::{render_synthetic_page, SyntheticPageSpec};
    use proptest::prelude::*;

    fn profile(counts: &[u32]) -> Profile {
        Profile {
            axis: Axis::Horizontal,
            counts: counts.to_vec(),
        }
    }

    fn cands(heights: &[usize]) -> Vec<LineCandidate> {
        let mut row = 0;
        heights
            .iter()
            .map(|&h| {
                let c = LineCandidate::new(row, row + h - 1);
                row += h + 3;
                c
            })
            .collect()
    }

    #[test]
    fn bands_at_threshold() {
        let p = profile(&[0, 5, 5, 0, 4, 0]);
        assert_eq!(
            detect_bands(&p, 2.0),
            vec![LineCandidate::new(1, 2), LineCandidate::new(4, 4)]
        );
        assert_eq!(detect_bands(&p, 0.0), vec![LineCandidate::new(0, 5)]);
        // Ties count as full.
        assert_eq!(
            detect_bands(&p, 4.0),
            vec![LineCandidate::new(1, 2), LineCandidate::new(4, 4)]
        );
    }

    #[test]
    fn vote_discards_short_fragment() {
        let c = cands(&[12, 12, 12, 5]);
        let v = vote_heights(&c).unwrap();
        assert_eq!(v.representative, 12.0);
        assert_eq!(v.kept.len(), 3);
        assert_eq!(v.discarded, vec![c[3]]);
    }

    #[test]
    fn vote_keeps_equal_and_close_heights() {
        let v = vote_heights(&cands(&[9, 9, 9, 9])).unwrap();
        assert!(v.discarded.is_empty());
        let v = vote_heights(&cands(&[10, 11, 12])).unwrap();
        assert_eq!(v.representative, 11.0);
        assert_eq!(v.kept.len(), 3);
        assert!(vote_heights(&[]).is_err());
    }

    #[test]
    fn fragments_merge_only_across_inked_rows() {
        let profile = Profile {
            axis: crate::profiles::Axis::Horizontal,
            counts: vec![5, 5, 1, 5, 5, 5, 0, 5, 5, 5, 5, 5, 5, 5, 5],
        };
        let c = vec![
            LineCandidate::new(0, 1),
            LineCandidate::new(3, 5),
            LineCandidate::new(7, 14),
        ];
        let merged = merge_fragments(&profile, &c, 6.0);
        assert_eq!(
            merged,
            vec![LineCandidate::new(0, 5), LineCandidate::new(7, 14)]
        );
        // Too tall once joined.
        assert_eq!(merge_fragments(&profile, &c, 3.0), c);
    }

    #[test]
    fn fragments_attach_to_the_body_first() {
        let mut counts = vec![3u32; 18];
        counts[..2].fill(6);
        counts[8..].fill(20);
        let profile = Profile {
            axis: crate::profiles::Axis::Horizontal,
            counts,
        };
        let c = vec![
            LineCandidate::new(0, 1),
            LineCandidate::new(4, 5),
            LineCandidate::new(8, 17),
        ];
        let merged = merge_fragments(&profile, &c, 10.0);
        assert_eq!(
            merged,
            vec![LineCandidate::new(0, 1), LineCandidate::new(4, 17)]
        );
    }

    #[test]
    fn vote_weighs_rows_not_bands() {
        let v = vote_heights(&cands(&[4, 4, 20, 20])).unwrap();
        assert_eq!(v.representative, 20.0);
        // Ascender fragments outnumber the body but cover fewer rows.
        let v = vote_heights(&cands(&[2, 2, 10])).unwrap();
        assert_eq!(v.representative, 10.0);
        assert_eq!(v.kept.len(), 1);
        let v = vote_heights(&cands(&[3, 3, 3, 6])).unwrap();
        assert_eq!(v.representative, 3.0);
    }

    fn striped(rows: &[(usize, usize)], width: usize) -> BinaryImage {
        let mut img = BinaryImage::blank(width, rows.len()).unwrap();
        for (y, &(start, len)) in rows.iter().enumerate() {
            for x in start..start + len {
                img.set(x, y, true);
            }
        }
        img
    }

    #[test]
    fn reference_lines_follow_spacing_rule() {
        // 50-row band: sparse rows 10..20, dense 20..=30, sparse 31..=40.
        let rows: Vec<(usize, usize)> = (0..50)
            .map(|y| match y {
                10..=19 => (0, 2),
                20..=30 => (0, 30),
                31..=40 => (0, 2),
                _ => (0, 0),
            })
            .collect();
        let img = striped(&rows, 40);
        let line = estimate_reference_lines(&img, LineCandidate::new(0, 49));
        assert_eq!((line.x_line, line.baseline), (20, 30));
        assert_eq!(line.k, 10.0);
        assert_eq!((line.top_line, line.bottom_line), (10, 40));
    }

    #[test]
    fn descender_bar_does_not_move_baseline() {
        // Body 10..=19 with a shallow dip, thin stem 20..=25, heavy bar 26..=27.
        let rows: Vec<(usize, usize)> = (0..30)
            .map(|y| match y {
                14 => (0, 9),
                10..=19 => (0, 14),
                20..=25 => (0, 2),
                26..=27 => (0, 10),
                _ => (0, 0),
            })
            .collect();
        let img = striped(&rows, 20);
        let line = estimate_reference_lines(&img, LineCandidate::new(0, 29));
        assert_eq!((line.x_line, line.baseline), (10, 19));
    }

    #[test]
    fn reference_lines_clamped_to_band() {
        let rows: Vec<(usize, usize)> = (0..8)
            .map(|y| if (2..=5).contains(&y) { (0, 9) } else { (0, 1) })
            .collect();
        let img = striped(&rows, 10);
        let line = estimate_reference_lines(&img, LineCandidate::new(0, 7));
        assert_eq!((line.x_line, line.baseline), (2, 5));
        assert_eq!((line.top_line, line.bottom_line), (0, 7));
    }

    #[test]
    fn short_band_is_degenerate() {
        let img = BinaryImage::from_ascii(&["####", "####", "...."]).unwrap();
        let line = estimate_reference_lines(&img, LineCandidate::new(0, 1));
        assert!((line.k - 2.0 / 3.0).abs() < 1e-12);
        assert!(line.x_line < line.baseline);
    }

    #[test]
    fn blank_page_has_no_lines() {
        assert!(segment_lines(&BinaryImage::blank(50, 40).unwrap()).is_empty());
    }

    fn page(lines: &[&str]) -> (BinaryImage, crate::synth::GroundTruth) {
        let spec = SyntheticPageSpec::new(lines.iter().map(|s| s.to_string()).collect(), 2, 10, 6);
        render_synthetic_page(&spec).unwrap()
    }

    const EIGHT: [&str; 8] = [
        "sobre a unica fenix virgem pura",
        "quando da bella vista e doce riso",
        "tomando vao as fontes do parnaso",
        "cantando espalharei por toda parte",
        "se a tanto me ajudar o engenho e arte",
        "as armas e os baroes assinalados",
        "que da ocidental praia lusitana",
        "por mares nunca dantes navegados",
    ];

    #[test]
    fn eight_line_page() {
        let (img, gt) = page(&EIGHT);
        let p = horizontal_profile(&img);
        let t: f64 = mvpl(&p);
        assert_eq!(detect_bands(&p, t).len(), 8);
        let lines = segment_lines(&img);
        assert_eq!(lines.len(), 8);
        for (line, truth) in lines.iter().zip(&gt.lines) {
            assert!(line.band.top <= truth.top_line && line.band.bottom() > truth.bottom_line);
            assert_eq!(line.x_line, truth.x_line);
            assert_eq!(line.baseline, truth.baseline);
        }
    }

    #[test]
    fn short_line_recovered_by_recursion() {
        let mut text = EIGHT.to_vec();
        text[4] = "se a tanto";
        let (img, _) = page(&text);
        let p = horizontal_profile(&img);
        let t: f64 = mvpl(&p);
        let first_pass = vote_heights(&detect_bands(&p, t)).unwrap().kept.len();
        assert!(first_pass < 8, "short line should be missed at page mean");
        assert_eq!(segment_lines(&img).len(), 8);
    }

    #[test]
    fn x_height_only_line() {
        let (img, gt) = page(&["mean son ran curse", "nomao ceases to move"]);
        let lines = segment_lines(&img);
        assert_eq!(lines.len(), 2);
        for (line, truth) in lines.iter().zip(&gt.lines) {
            assert_eq!((line.x_line, line.baseline), (truth.x_line, truth.baseline));
            assert!(line.top_line >= line.band.top && line.bottom_line < line.band.bottom());
        }
    }

    proptest! {
        #[test]
        fn bands_disjoint_sorted_and_complete(counts in proptest::collection::vec(0u32..20, 1..120), t in 0u32..20) {
            let p = profile(&counts);
            let bands = detect_bands(&p, t as f64);
            for w in bands.windows(2) {
                prop_assert!(w[0].last_row + 1 < w[1].first_row);
            }
            for (row, &c) in counts.iter().enumerate() {
                let hits = bands.iter().filter(|b| b.first_row <= row && row <= b.last_row).count();
                prop_assert_eq!(hits, usize::from(c >= t));
            }
        }

        #[test]
        fn vote_is_scale_invariant(heights in proptest::collection::vec(1usize..40, 1..12), scale in 2usize..5) {
            let a = vote_heights(&cands(&heights)).unwrap();
            let scaled: Vec<usize> = heights.iter().map(|h| h * scale).collect();
            let b = vote_heights(&cands(&scaled)).unwrap();
            prop_assert_eq!(a.kept.len(), b.kept.len());
            prop_assert!((a.representative * scale as f64 - b.representative).abs() < 1e-9);
        }

        #[test]
        fn vote_keeps_everything_within_half(base in 4usize..40, offsets in proptest::collection::vec(0usize..100, 1..10)) {
            // All heights within 20% of each other.
            let heights: Vec<usize> = offsets.iter().map(|o| base + (o * base) / 500).collect();
            let v = vote_heights(&cands(&heights)).unwrap();
            prop_assert!(v.discarded.is_empty());
        }
    }
}
