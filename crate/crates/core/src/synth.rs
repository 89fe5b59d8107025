//! Synthetic page renderer with exact ground-truth geometry.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::font::GlyphSet;
use crate::image::{BinaryImage, BoundingBox};

fn default_glyph_set() -> String {
    "block2".to_string()
}

fn default_margin() -> usize {
    8
}

/// Description of a page to render.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyntheticPageSpec {
    #[serde(default = "default_glyph_set")]
    pub glyph_set: String,
    /// One string per text line; words are separated by whitespace.
    pub lines: Vec<String>,
    pub char_gap: usize,
    pub word_gap: usize,
    pub line_gap: usize,
    /// Probability of flipping each pixel, in [0, 0.5).
    #[serde(default)]
    pub noise: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_margin")]
    pub margin: usize,
    /// Fixed page width; derived from the widest line when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub page_width: Option<usize>,
}

impl SyntheticPageSpec {
    pub fn new(lines: Vec<String>, char_gap: usize, word_gap: usize, line_gap: usize) -> Self {
        SyntheticPageSpec {
            glyph_set: default_glyph_set(),
            lines,
            char_gap,
            word_gap,
            line_gap,
            noise: 0.0,
            seed: 0,
            margin: default_margin(),
            page_width: None,
        }
    }

    pub fn validate(&self) -> Result<GlyphSet> {
        let set = GlyphSet::from_id(&self.glyph_set)?;
        if self.word_gap <= self.char_gap {
            return Err(Error::InvalidSpec {
                field: "word_gap",
                reason: format!(
                    "must exceed char_gap ({} <= {})",
                    self.word_gap, self.char_gap
                ),
            });
        }
        if !(0.0..0.5).contains(&self.noise) {
            return Err(Error::InvalidSpec {
                field: "noise",
                reason: format!("{} is outside [0, 0.5)", self.noise),
            });
        }
        for line in &self.lines {
            for c in line.chars().filter(|c| !c.is_whitespace()) {
                set.glyph_width(c)?;
            }
        }
        Ok(set)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordTruth {
    pub text: String,
    #[serde(rename = "box")]
    pub bbox: BoundingBox,
    pub char_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineTruth {
    #[serde(rename = "box")]
    pub bbox: BoundingBox,
    pub top_line: usize,
    pub x_line: usize,
    pub baseline: usize,
    pub bottom_line: usize,
    pub words: Vec<WordTruth>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub width: usize,
    pub height: usize,
    pub lines: Vec<LineTruth>,
}

impl GroundTruth {
    pub fn word_count(&self) -> usize {
        self.lines.iter().map(|l| l.words.len()).sum()
    }
}

/// Renders `spec` into a bitmap plus its ground truth. Lines without words
/// still take vertical space but produce no ground-truth entry.
pub fn render_synthetic_page(spec: &SyntheticPageSpec) -> Result<(BinaryImage, GroundTruth)> {
    let set = spec.validate()?;
    let cell = set.cell_height();

    let mut layouts = Vec::with_capacity(spec.lines.len());
    let mut max_width = 0;
    for line in &spec.lines {
        let words: Vec<&str> = line.split_whitespace().collect();
        let mut widths = Vec::with_capacity(words.len());
        for w in &words {
            widths.push(set.word_width(w, spec.char_gap)?);
        }
        let total = widths.iter().sum::<usize>() + spec.word_gap * words.len().saturating_sub(1);
        max_width = max_width.max(total);
        layouts.push((words, widths, total));
    }

    let page_width = match spec.page_width {
        Some(w) => {
            for (i, (_, _, total)) in layouts.iter().enumerate() {
                if total + 2 * spec.margin > w {
                    return Err(Error::WordTooWide {
                        line: i,
                        width: *total,
                        page_width: w,
                    });
                }
            }
            w
        }
        None => max_width + 2 * spec.margin,
    }
    .max(1);
    let n = spec.lines.len();
    let page_height = (2 * spec.margin + n * cell + n.saturating_sub(1) * spec.line_gap).max(1);

    let mut page = BinaryImage::blank(page_width, page_height)?;
    let mut lines = Vec::new();
    for (i, (words, widths, total)) in layouts.iter().enumerate() {
        let top = spec.margin + i * (cell + spec.line_gap);
        if words.is_empty() {
            continue;
        }
        let mut x = spec.margin;
        let mut word_truths = Vec::with_capacity(words.len());
        for (w, &width) in words.iter().zip(widths) {
            let img = set.render_word(w, spec.char_gap)?;
            page.paste(&img, x, top);
            word_truths.push(WordTruth {
                text: w.to_string(),
                bbox: BoundingBox::new(x, top, width, cell),
                char_count: w.chars().count(),
            });
            x += width + spec.word_gap;
        }
        lines.push(LineTruth {
            bbox: BoundingBox::new(spec.margin, top, *total, cell),
            top_line: top,
            x_line: top + set.x_line(),
            baseline: top + set.baseline(),
            bottom_line: top + cell - 1,
            words: word_truths,
        });
    }

    if spec.noise > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        page.flip_pixels(spec.noise, &mut rng);
    }

    Ok((
        page,
        GroundTruth {
            width: page_width,
            height: page_height,
            lines,
        },
    ))
}
