use std::fmt;

use serde::{Deserialize, Serialize};

use crate::words::WordBlock;

/// Roughly one character at 300 dpi.
pub const DEFAULT_SECTOR_WIDTH: usize = 15;

/// Per-sector ascender/descender signature over the alphabet {A, x, D}.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ShapeCode {
    pub sectors: String,
    pub sector_width: usize,
}

impl ShapeCode {
    pub fn len(&self) -> usize {
        self.sectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sectors.is_empty()
    }
}

impl fmt::Display for ShapeCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.sectors)
    }
}

/// Which code wins in a sector holding both ascender and descender ink.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum SectorPriority {
    #[default]
    Ascender,
    Descender,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeParams {
    pub sector_width: usize,
    pub priority: SectorPriority,
    /// Minimum ink pixels in a zone for the sector to count as A or D.
    pub noise_floor: usize,
}

impl Default for ShapeParams {
    fn default() -> Self {
        ShapeParams {
            sector_width: DEFAULT_SECTOR_WIDTH,
            priority: SectorPriority::Ascender,
            noise_floor: 1,
        }
    }
}

pub fn shape_code(word: &WordBlock, sector_width: usize) -> ShapeCode {
    shape_code_with(
        word,
        &ShapeParams {
            sector_width,
            ..ShapeParams::default()
        },
    )
}

/// Codes each `sector_width`-wide slice of the word: `A` for ink above the
/// x-line, `D` for ink below the baseline, `x` otherwise. The last sector
/// may be narrower.
pub fn shape_code_with(word: &WordBlock, params: &ShapeParams) -> ShapeCode {
    let sector_width = params.sector_width.max(1);
    let img = &word.bitmap;
    let x_line = word.line_ref.x_line;
    let baseline = word.line_ref.baseline;
    let floor = params.noise_floor.max(1);

    let sectors = (0..img.width())
        .step_by(sector_width)
        .map(|left| {
            let right = (left + sector_width).min(img.width());
            let mut above = 0;
            let mut below = 0;
            for y in 0..img.height() {
                let ink = img.row(y)[left..right].iter().filter(|&&p| p).count();
                if y < x_line {
                    above += ink;
                } else if y > baseline {
                    below += ink;
                }
            }
            match (above >= floor, below >= floor, params.priority) {
                (true, true, SectorPriority::Descender) => 'D',
                (true, _, _) => 'A',
                (false, true, _) => 'D',
                (false, false, _) => 'x',
            }
        })
        .collect();
    ShapeCode {
        sectors,
        sector_width,
    }
}

/// Positionwise mismatches over the shorter code plus the length
/// difference.
pub fn shape_mismatch(a: &ShapeCode, b: &ShapeCode) -> usize {
    let positional = a
        .sectors
        .chars()
        .zip(b.sectors.chars())
        .filter(|(x, y)| x != y)
        .count();
    positional + a.len().abs_diff(b.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::image::{BinaryImage, BoundingBox};
    use crate::words::{LineRef, WordId};
    use proptest::prelude::*;

    fn code(s: &str) -> ShapeCode {
        ShapeCode {
            sectors: s.to_string(),
            sector_width: DEFAULT_SECTOR_WIDTH,
        }
    }

    fn word(bitmap: BinaryImage, x_line: usize, baseline: usize) -> WordBlock {
        WordBlock {
            id: WordId {
                page: 0,
                line: 0,
                position: 0,
            },
            bbox: BoundingBox::new(0, 0, bitmap.width(), bitmap.height()),
            line_ref: LineRef {
                top_line: 0,
                x_line,
                baseline,
                bottom_line: bitmap.height() - 1,
            },
            width: bitmap.width(),
            char_count: 1,
            shape_code: None,
            bitmap,
        }
    }

    fn fill(img: &mut BinaryImage, xs: std::ops::Range<usize>, ys: std::ops::Range<usize>) {
        for y in ys {
            for x in xs.clone() {
                img.set(x, y, true);
            }
        }
    }

    #[test]
    fn mismatch_examples() {
        assert_eq!(shape_mismatch(&code("AAx"), &code("AAx")), 0);
        assert_eq!(shape_mismatch(&code("AAxxxxx"), &code("AxDxxxx")), 2);
        assert_eq!(shape_mismatch(&code("AA"), &code("AAxx")), 2);
    }

    #[test]
    fn x_height_word_is_all_x() {
        let mut img = BinaryImage::blank(40, 30).unwrap();
        fill(&mut img, 0..40, 10..21);
        assert_eq!(shape_code(&word(img, 10, 20), 15).sectors, "xxx");
    }

    #[test]
    fn descender_in_last_sector() {
        let mut img = BinaryImage::blank(45, 30).unwrap();
        fill(&mut img, 0..45, 10..21);
        fill(&mut img, 40..42, 21..28);
        assert_eq!(shape_code(&word(img, 10, 20), 15).sectors, "xxD");
    }

    #[test]
    fn mixed_sector_priority_and_partial_sector() {
        let mut img = BinaryImage::blank(20, 30).unwrap();
        fill(&mut img, 0..20, 10..21);
        fill(&mut img, 2..3, 2..10);
        fill(&mut img, 5..6, 21..29);
        fill(&mut img, 17..18, 21..29);
        let w = word(img, 10, 20);
        assert_eq!(shape_code(&w, 15).sectors, "AD");
        let p = ShapeParams {
            priority: SectorPriority::Descender,
            ..ShapeParams::default()
        };
        assert_eq!(shape_code_with(&w, &p).sectors, "DD");
        let p = ShapeParams {
            noise_floor: 9,
            ..ShapeParams::default()
        };
        assert_eq!(shape_code_with(&w, &p).sectors, "xx");
    }

    fn arb_code() -> impl Strategy<Value = ShapeCode> {
        proptest::collection::vec(prop_oneof![Just('A'), Just('x'), Just('D')], 0..12)
            .prop_map(|v| code(&v.into_iter().collect::<String>()))
    }

    proptest! {
        #[test]
        fn mismatch_is_a_metric(a in arb_code(), b in arb_code(), c in arb_code()) {
            prop_assert_eq!(shape_mismatch(&a, &a), 0);
            prop_assert_eq!(shape_mismatch(&a, &b), shape_mismatch(&b, &a));
            prop_assert!(shape_mismatch(&a, &c) <= shape_mismatch(&a, &b) + shape_mismatch(&b, &c));
        }

        #[test]
        fn code_length_is_sector_count(width in 1usize..120, sw in 1usize..30) {
            let img = BinaryImage::blank(width, 12).unwrap();
            let c = shape_code(&word(img, 3, 8), sw);
            prop_assert_eq!(c.len(), width.div_ceil(sw));
            prop_assert!(c.sectors.chars().all(|ch| ch == 'x'));
        }
    }
}
