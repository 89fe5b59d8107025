//! Word and character segmentation inside a text line.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::{BinaryImage, BoundingBox};
use crate::lines::{segment_lines_with, SegmentParams, TextLine};
use crate::matchers::ShapeCode;
use crate::profiles::{gap_histogram, vertical_profile, vertical_profile_rows, GapHistogram};

/// Word position: page, line on the page, word within the line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WordId {
    pub page: usize,
    pub line: usize,
    pub position: usize,
}

impl fmt::Display for WordId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.page, self.line, self.position)
    }
}

impl std::str::FromStr for WordId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [page, line, position] = parts.as_slice() else {
            return Err(format!("expected PAGE:LINE:POSITION, got {s:?}"));
        };
        let num = |v: &str| v.parse::<usize>().map_err(|e| format!("{v:?}: {e}"));
        Ok(WordId {
            page: num(page)?,
            line: num(line)?,
            position: num(position)?,
        })
    }
}

/// Reference rows expressed relative to a word box's top edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineRef {
    pub top_line: usize,
    pub x_line: usize,
    pub baseline: usize,
    pub bottom_line: usize,
}

impl LineRef {
    /// Rebases a line's rows onto a box starting at `box_top`.
    pub fn relative_to(line: &TextLine, box_top: usize) -> Self {
        LineRef {
            top_line: line.top_line - box_top,
            x_line: line.x_line - box_top,
            baseline: line.baseline - box_top,
            bottom_line: line.bottom_line - box_top,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WordBlock {
    pub id: WordId,
    pub bbox: BoundingBox,
    pub bitmap: BinaryImage,
    pub line_ref: LineRef,
    pub width: usize,
    pub char_count: usize,
    pub shape_code: Option<ShapeCode>,
}

impl WordBlock {
    /// Wraps a standalone word image. Reference rows are estimated from the
    /// image's own row profile.
    pub fn from_image(id: WordId, bitmap: BinaryImage) -> Self {
        let band = crate::lines::LineCandidate::new(0, bitmap.height() - 1);
        let line = crate::lines::estimate_reference_lines(&bitmap, band);
        let mut word = WordBlock {
            id,
            bbox: bitmap.full_box(),
            line_ref: LineRef::relative_to(&line, 0),
            width: bitmap.width(),
            char_count: 0,
            bitmap,
            shape_code: None,
        };
        word.char_count = count_characters(&word).max(1);
        word
    }
}

/// Split point between character gaps and word gaps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordGapThreshold {
    /// Gaps at least this long separate words.
    pub threshold: usize,
    /// Set when no empty bin was found and the min/max midpoint was used.
    pub fallback: bool,
}

/// Pushes the mean gap rightwards in unit steps until it lands on an empty
/// bin. The walk starts at the first integer strictly above the mean.
///
/// A histogram with a single distinct gap length yields that length plus
/// one: every gap is a character gap. Otherwise, if every bin from the
/// mean up to the largest gap is occupied, the midpoint of the smallest and
/// largest gap is returned with `fallback` set.
pub fn word_gap_threshold(hist: &GapHistogram) -> Result<WordGapThreshold> {
    let (Some(min), Some(max)) = (hist.min_gap(), hist.max_gap()) else {
        return Err(Error::EmptyInput("gap histogram"));
    };
    if min == max {
        return Ok(WordGapThreshold {
            threshold: max + 1,
            fallback: false,
        });
    }
    let start = hist.mean_gap().floor() as usize + 1;
    match (start..=max).find(|&g| hist.count(g) == 0) {
        Some(threshold) => Ok(WordGapThreshold {
            threshold,
            fallback: false,
        }),
        None => Ok(WordGapThreshold {
            threshold: (min + max) / 2,
            fallback: true,
        }),
    }
}

/// Number of ink column runs in the word bitmap, ignoring runs lighter than
/// the default noise floor.
pub fn count_characters(word: &WordBlock) -> usize {
    count_characters_with(word, SegmentParams::default().min_run_mass)
}

pub fn count_characters_with(word: &WordBlock, min_run_mass: u32) -> usize {
    vertical_profile(&word.bitmap)
        .suppress_light_runs(min_run_mass)
        .ink_runs()
        .len()
}

/// Splits `line` into words using page 0 / line 0 ids.
pub fn segment_words(img: &BinaryImage, line: &TextLine) -> Vec<WordBlock> {
    segment_words_with(img, line, 0, 0, &SegmentParams::default())
}

/// Word extraction for one line. `img` is expected to be already cleaned
/// as the caller sees fit; only the light-run floor is applied here.
pub fn segment_words_with(
    img: &BinaryImage,
    line: &TextLine,
    page: usize,
    line_index: usize,
    params: &SegmentParams,
) -> Vec<WordBlock> {
    let profile = vertical_profile_rows(img, line.rows()).suppress_light_runs(params.min_run_mass);
    let runs = profile.ink_runs();
    if runs.is_empty() {
        return Vec::new();
    }
    let hist = gap_histogram(&profile);
    let threshold = word_gap_threshold(&hist)
        .map(|t| t.threshold)
        .unwrap_or(usize::MAX);

    let mut groups: Vec<(usize, usize, usize)> = Vec::new(); // (start, end, runs)
    for run in &runs {
        match groups.last_mut() {
            Some(g) if run.start - g.1 < threshold => {
                g.1 = run.end;
                g.2 += 1;
            }
            _ => groups.push((run.start, run.end, 1)),
        }
    }

    groups
        .into_iter()
        .enumerate()
        .map(|(position, (start, end, char_count))| {
            let bbox = BoundingBox::new(start, line.band.top, end - start, line.band.height);
            WordBlock {
                id: WordId {
                    page,
                    line: line_index,
                    position,
                },
                bitmap: img.crop(&bbox).expect("word box inside line band"),
                line_ref: LineRef::relative_to(line, bbox.top),
                width: bbox.width,
                char_count,
                bbox,
                shape_code: None,
            }
        })
        .collect()
}

/// A line together with its words.
#[derive(Debug, Clone)]
pub struct SegmentedLine {
    pub line: TextLine,
    pub words: Vec<WordBlock>,
}

/// Lines and words of one page. Cleaning is applied once, up front.
pub fn segment_page(img: &BinaryImage, page: usize, params: &SegmentParams) -> Vec<SegmentedLine> {
    let cleaned = if params.despeckle {
        img.remove_isolated_pixels()
    } else {
        img.clone()
    };
    let line_params = SegmentParams {
        despeckle: false,
        ..*params
    };
    segment_lines_with(&cleaned, &line_params)
        .into_iter()
        .enumerate()
        .map(|(i, line)| SegmentedLine {
            words: segment_words_with(&cleaned, &line, page, i, params),
            line,
        })
        .collect()
}
