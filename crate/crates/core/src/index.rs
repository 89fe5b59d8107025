//! Persistent word index over a set of page images.
//!
//! Word bitmaps are not stored; they are re-cropped from the source pages,
//! whose SHA-256 digests guard against stale indexes.

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::binarize::Threshold;
use crate::error::{Error, Result};
use crate::image::{BinaryImage, BoundingBox};
use crate::lines::SegmentParams;
use crate::matchers::{shape_code, ShapeCode};
use crate::pnm::load_pnm;
use crate::words::{segment_page, LineRef, WordBlock, WordId};

pub const INDEX_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageEntry {
    pub path: String,
    pub sha256: String,
    pub width: usize,
    pub height: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordRecord {
    pub id: WordId,
    #[serde(rename = "box")]
    pub bbox: BoundingBox,
    pub line_ref: LineRef,
    pub width: usize,
    pub char_count: usize,
    pub shape_code: ShapeCode,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WordIndex {
    pub version: u32,
    pub segment: SegmentParams,
    pub pages: Vec<PageEntry>,
    pub words: Vec<WordRecord>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn read(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| Error::io(path, e))
}

/// Decodes a page; greyscale pages are binarized with Otsu's threshold.
pub fn decode_page(bytes: &[u8]) -> Result<BinaryImage> {
    Ok(load_pnm(bytes)?.into_binary(Threshold::Auto))
}

impl WordIndex {
    pub fn empty(segment: SegmentParams) -> Self {
        WordIndex {
            version: INDEX_VERSION,
            segment,
            pages: Vec::new(),
            words: Vec::new(),
        }
    }

    /// Segments every page (in parallel on the current rayon pool) and
    /// records its words in page order.
    pub fn build(paths: &[PathBuf], segment: SegmentParams, sector_width: usize) -> Result<Self> {
        let mut seen = HashSet::new();
        for p in paths {
            if !seen.insert(p) {
                return Err(Error::DuplicatePage(p.clone()));
            }
        }
        let pages: Vec<(PageEntry, Vec<WordRecord>)> = paths
            .par_iter()
            .enumerate()
            .map(|(page_no, path)| {
                let bytes = read(path)?;
                let img = decode_page(&bytes)?;
                let entry = PageEntry {
                    path: path.to_string_lossy().into_owned(),
                    sha256: sha256_hex(&bytes),
                    width: img.width(),
                    height: img.height(),
                };
                let words = segment_page(&img, page_no, &segment)
                    .into_iter()
                    .flat_map(|l| l.words)
                    .map(|w| WordRecord {
                        id: w.id,
                        bbox: w.bbox,
                        line_ref: w.line_ref,
                        width: w.width,
                        char_count: w.char_count,
                        shape_code: shape_code(&w, sector_width),
                    })
                    .collect();
                Ok((entry, words))
            })
            .collect::<Result<_>>()?;

        let mut index = WordIndex::empty(segment);
        for (entry, words) in pages {
            index.pages.push(entry);
            index.words.extend(words);
        }
        Ok(index)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("index serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let index: WordIndex = serde_json::from_str(text)?;
        if index.version != INDEX_VERSION {
            return Err(Error::IndexVersion(index.version));
        }
        index.validate()?;
        Ok(index)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let bytes = read(path)?;
        let text = String::from_utf8(bytes).map_err(|e| {
            Error::io(
                path,
                std::io::Error::new(std::io::ErrorKind::InvalidData, e),
            )
        })?;
        Self::from_json(&text)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }

    /// Unique ids and boxes inside their pages.
    pub fn validate(&self) -> Result<()> {
        let mut ids = HashSet::new();
        for w in &self.words {
            if !ids.insert(w.id) {
                return Err(Error::InvalidSpec {
                    field: "words",
                    reason: format!("duplicate word id {}", w.id),
                });
            }
            let page = self
                .pages
                .get(w.id.page)
                .ok_or_else(|| Error::InvalidSpec {
                    field: "words",
                    reason: format!("word {} names a missing page", w.id),
                })?;
            if !w.bbox.fits_within(page.width, page.height) {
                return Err(Error::InvalidSpec {
                    field: "words",
                    reason: format!("box of word {} exceeds its page", w.id),
                });
            }
        }
        Ok(())
    }

    pub fn find(&self, id: WordId) -> Option<&WordRecord> {
        self.words.iter().find(|w| w.id == id)
    }

    /// Re-reads the source pages (checking digests) and crops every word.
    pub fn load_blocks(&self) -> Result<Vec<WordBlock>> {
        let pages: Vec<BinaryImage> = self
            .pages
            .par_iter()
            .map(|p| {
                let path = PathBuf::from(&p.path);
                let bytes = read(&path)?;
                if sha256_hex(&bytes) != p.sha256 {
                    return Err(Error::ChecksumMismatch(path));
                }
                let img = decode_page(&bytes)?;
                Ok(if self.segment.despeckle {
                    img.remove_isolated_pixels()
                } else {
                    img
                })
            })
            .collect::<Result<_>>()?;

        self.words
            .iter()
            .map(|w| {
                Ok(WordBlock {
                    id: w.id,
                    bbox: w.bbox,
                    bitmap: pages[w.id.page].crop(&w.bbox)?,
                    line_ref: w.line_ref,
                    width: w.width,
                    char_count: w.char_count,
                    shape_code: Some(w.shape_code.clone()),
                })
            })
            .collect()
    }
}
