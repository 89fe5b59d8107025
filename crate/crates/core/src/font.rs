//! Built-in lowercase bitmap font for synthetic pages.
//!
//! Every glyph sits on a 13-row cell: rows 0..4 ascender zone, rows 4..9
//! x-height zone, rows 9..13 descender zone. Each glyph column carries ink
//! and each glyph is 8-connected, so column runs map one-to-one onto glyphs.

use crate::error::{Error, Result};
use crate::image::BinaryImage;

pub const CELL_ROWS: usize = 13;
pub const X_LINE_ROW: usize = 4;
pub const BASELINE_ROW: usize = 8;

const GLYPHS: &[(char, usize, &[&str])] = &[
    ('a', 4, &[".###.", "....#", ".####", "#...#", ".####"]),
    (
        'b',
        0,
        &[
            "#....", "#....", "#....", "#....", "####.", "#...#", "#...#", "#...#", "####.",
        ],
    ),
    ('c', 4, &[".####", "#....", "#....", "#....", ".####"]),
    (
        'd',
        0,
        &[
            "....#", "....#", "....#", "....#", ".####", "#...#", "#...#", "#...#", ".####",
        ],
    ),
    ('e', 4, &[".###.", "#...#", "#####", "#....", ".####"]),
    (
        'f',
        0,
        &[
            "..##", ".#..", ".#..", ".#..", "####", ".#..", ".#..", ".#..", ".#..",
        ],
    ),
    (
        'g',
        4,
        &[
            ".####", "#...#", "#...#", "#...#", ".####", "....#", "....#", "....#", "####.",
        ],
    ),
    (
        'h',
        0,
        &[
            "#....", "#....", "#....", "#....", "####.", "#...#", "#...#", "#...#", "#...#",
        ],
    ),
    ('i', 2, &[".#.", "...", "##.", ".#.", ".#.", ".#.", "###"]),
    (
        'j',
        2,
        &[
            "..#", "...", ".##", "..#", "..#", "..#", "..#", "..#", "..#", "#.#", ".#.",
        ],
    ),
    (
        'k',
        0,
        &[
            "#...", "#...", "#...", "#...", "#..#", "#.#.", "##..", "#.#.", "#..#",
        ],
    ),
    (
        'l',
        0,
        &["#.", "#.", "#.", "#.", "#.", "#.", "#.", "#.", ".#"],
    ),
    (
        'm',
        4,
        &["######.", "#..#..#", "#..#..#", "#..#..#", "#..#..#"],
    ),
    ('n', 4, &["####.", "#...#", "#...#", "#...#", "#...#"]),
    ('o', 4, &[".###.", "#...#", "#...#", "#...#", ".###."]),
    (
        'p',
        4,
        &[
            "####.", "#...#", "#...#", "#...#", "####.", "#....", "#....", "#....", "#....",
        ],
    ),
    (
        'q',
        4,
        &[
            ".####", "#...#", "#...#", "#...#", ".####", "....#", "....#", "....#", "....#",
        ],
    ),
    ('r', 4, &["#.##", "##..", "#...", "#...", "#..."]),
    ('s', 4, &[".####", "#....", ".###.", "....#", "####."]),
    (
        't',
        1,
        &[
            ".#..", ".#..", ".#..", "####", ".#..", ".#..", ".#..", "..##",
        ],
    ),
    ('u', 4, &["#...#", "#...#", "#...#", "#...#", ".####"]),
    ('v', 4, &["#...#", "#...#", ".#.#.", ".#.#.", "..#.."]),
    (
        'w',
        4,
        &["#.....#", "#.....#", "#..#..#", "#..#..#", ".##.##."],
    ),
    ('x', 4, &["#...#", ".#.#.", "..#..", ".#.#.", "#...#"]),
    (
        'y',
        4,
        &[
            "#...#", "#...#", "#...#", "#...#", ".####", "....#", "....#", "....#", "####.",
        ],
    ),
    ('z', 4, &["#####", "...#.", "..#..", ".#...", "#####"]),
];

/// Characters whose ink stays between the x-line and the baseline.
pub const X_HEIGHT_ONLY: &str = "acemnorsuvwxz";
/// Characters with ink above the x-line (`j` carries both).
pub const ASCENDERS: &str = "bdfhijklt";
/// Characters with ink below the baseline.
pub const DESCENDERS: &str = "gjpqy";

/// A scaled instance of the built-in font.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GlyphSet {
    scale: usize,
}

impl GlyphSet {
    /// Resolves ids `block1`, `block2`, `block3` (integer pixel scale).
    pub fn from_id(id: &str) -> Result<Self> {
        let scale = id
            .strip_prefix("block")
            .and_then(|s| s.parse::<usize>().ok())
            .filter(|s| (1..=3).contains(s))
            .ok_or_else(|| Error::InvalidSpec {
                field: "glyph_set",
                reason: format!("unknown glyph set {id:?} (expected block1, block2 or block3)"),
            })?;
        Ok(GlyphSet { scale })
    }

    pub fn scale(&self) -> usize {
        self.scale
    }

    /// Height of every glyph bitmap.
    pub fn cell_height(&self) -> usize {
        CELL_ROWS * self.scale
    }

    /// First row of the x-height zone.
    pub fn x_line(&self) -> usize {
        X_LINE_ROW * self.scale
    }

    /// Last row of the x-height zone.
    pub fn baseline(&self) -> usize {
        (BASELINE_ROW + 1) * self.scale - 1
    }

    pub fn glyph(&self, c: char) -> Result<BinaryImage> {
        let (_, top, rows) = GLYPHS
            .iter()
            .find(|(g, _, _)| *g == c)
            .ok_or(Error::UnknownGlyph(c))?;
        let w = rows[0].len();
        let s = self.scale;
        let mut img = BinaryImage::blank(w * s, CELL_ROWS * s)?;
        for (r, row) in rows.iter().enumerate() {
            for (col, ch) in row.chars().enumerate() {
                if ch == '#' {
                    for dy in 0..s {
                        for dx in 0..s {
                            img.set(col * s + dx, (top + r) * s + dy, true);
                        }
                    }
                }
            }
        }
        Ok(img)
    }

    pub fn glyph_width(&self, c: char) -> Result<usize> {
        GLYPHS
            .iter()
            .find(|(g, _, _)| *g == c)
            .map(|(_, _, rows)| rows[0].len() * self.scale)
            .ok_or(Error::UnknownGlyph(c))
    }

    /// Width of `word` rendered with `char_gap` pixels between glyphs.
    pub fn word_width(&self, word: &str, char_gap: usize) -> Result<usize> {
        let mut total = 0;
        for (i, c) in word.chars().enumerate() {
            if i > 0 {
                total += char_gap;
            }
            total += self.glyph_width(c)?;
        }
        Ok(total)
    }

    /// Renders one word on a cell-height canvas exactly as wide as its ink.
    pub fn render_word(&self, word: &str, char_gap: usize) -> Result<BinaryImage> {
        let width = self.word_width(word, char_gap)?;
        if width == 0 {
            return Err(Error::EmptyInput("word"));
        }
        let mut img = BinaryImage::blank(width, self.cell_height())?;
        let mut x = 0;
        for c in word.chars() {
            let g = self.glyph(c)?;
            img.paste(&g, x, 0);
            x += g.width() + char_gap;
        }
        Ok(img)
    }
}

pub fn supported_chars() -> impl Iterator<Item = char> {
    GLYPHS.iter().map(|(c, _, _)| *c)
}
