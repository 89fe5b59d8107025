//! Netpbm PBM (P1/P4) and PGM (P2/P5) codecs.

use crate::error::{Error, PnmError, Result};
use crate::image::{BinaryImage, GrayImage};

/// A decoded Netpbm image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PnmImage {
    Binary(BinaryImage),
    Gray(GrayImage),
}

impl PnmImage {
    /// Converts to a bitmap, thresholding greyscale at `threshold`
    /// (pixels darker than it become ink).
    pub fn into_binary(self, threshold: crate::binarize::Threshold) -> BinaryImage {
        match self {
            PnmImage::Binary(b) => b,
            PnmImage::Gray(g) => crate::binarize::binarize(&g, threshold),
        }
    }
}

/// Sample encoding used when writing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Encoding {
    /// ASCII samples (P1/P2).
    Plain,
    /// Packed binary samples (P4/P5).
    Raw,
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_whitespace_and_comments(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                b if b.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    fn header_uint(&mut self, what: &str) -> Result<u32, PnmError> {
        self.skip_whitespace_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(PnmError::MalformedHeader(format!("expected {what}")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| PnmError::MalformedHeader(format!("{what} out of range")))
    }

    /// Raw payloads start after exactly one whitespace byte.
    fn single_whitespace(&mut self) -> Result<(), PnmError> {
        match self.bytes.get(self.pos) {
            Some(b) if b.is_ascii_whitespace() => {
                self.pos += 1;
                Ok(())
            }
            Some(_) => Err(PnmError::MalformedHeader(
                "missing whitespace before raster".into(),
            )),
            None => Err(PnmError::TruncatedPayload),
        }
    }

    /// Plain sample; `None` at end of input.
    fn plain_uint(&mut self) -> Result<Option<u32>, PnmError> {
        self.skip_whitespace_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return if self.pos >= self.bytes.len() {
                Ok(None)
            } else {
                Err(PnmError::MalformedHeader(format!(
                    "unexpected byte 0x{:02x} in plain raster",
                    self.bytes[self.pos]
                )))
            };
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .map(Some)
            .ok_or(PnmError::InvalidSample {
                value: u32::MAX,
                max: u16::MAX as u32,
            })
    }

    /// Plain PBM bit; digits need not be separated.
    fn plain_bit(&mut self) -> Result<Option<bool>, PnmError> {
        self.skip_whitespace_and_comments();
        match self.bytes.get(self.pos) {
            None => Ok(None),
            Some(b'0') => {
                self.pos += 1;
                Ok(Some(false))
            }
            Some(b'1') => {
                self.pos += 1;
                Ok(Some(true))
            }
            Some(&b) => Err(PnmError::InvalidSample {
                value: b as u32,
                max: 1,
            }),
        }
    }

    fn rest(&self) -> &'a [u8] {
        &self.bytes[self.pos..]
    }
}

fn dimensions(cur: &mut Cursor<'_>) -> Result<(usize, usize), PnmError> {
    let width = cur.header_uint("width")? as usize;
    let height = cur.header_uint("height")? as usize;
    if width == 0 || height == 0 {
        return Err(PnmError::MalformedHeader(format!(
            "zero dimension {width}x{height}"
        )));
    }
    Ok((width, height))
}

fn maxval(cur: &mut Cursor<'_>) -> Result<u32, PnmError> {
    let max = cur.header_uint("maxval")?;
    if max == 0 || max > u16::MAX as u32 {
        return Err(PnmError::MalformedHeader(format!(
            "maxval {max} outside 1..=65535"
        )));
    }
    Ok(max)
}

fn scale_sample(value: u32, max: u32) -> Result<u8, PnmError> {
    if value > max {
        return Err(PnmError::InvalidSample { value, max });
    }
    if max == 255 {
        return Ok(value as u8);
    }
    Ok(((value as u64 * 255 + max as u64 / 2) / max as u64) as u8)
}

/// Decodes a PBM or PGM file. PBM `1` bits become foreground.
pub fn load_pnm(bytes: &[u8]) -> Result<PnmImage> {
    if bytes.len() < 2 {
        return Err(PnmError::MalformedHeader("missing magic number".into()).into());
    }
    let magic = &bytes[..2];
    let mut cur = Cursor { bytes, pos: 2 };
    let img = match magic {
        b"P1" => {
            let (w, h) = dimensions(&mut cur)?;
            let mut pixels = Vec::with_capacity(w * h);
            for _ in 0..w * h {
                pixels.push(cur.plain_bit()?.ok_or(PnmError::TruncatedPayload)?);
            }
            PnmImage::Binary(BinaryImage::new(w, h, pixels)?)
        }
        b"P4" => {
            let (w, h) = dimensions(&mut cur)?;
            cur.single_whitespace()?;
            let stride = w.div_ceil(8);
            let raster = cur.rest();
            if raster.len() < stride * h {
                return Err(PnmError::TruncatedPayload.into());
            }
            let mut pixels = Vec::with_capacity(w * h);
            for y in 0..h {
                let row = &raster[y * stride..(y + 1) * stride];
                pixels.extend((0..w).map(|x| row[x / 8] & (0x80 >> (x % 8)) != 0));
            }
            PnmImage::Binary(BinaryImage::new(w, h, pixels)?)
        }
        b"P2" => {
            let (w, h) = dimensions(&mut cur)?;
            let max = maxval(&mut cur)?;
            let mut pixels = Vec::with_capacity(w * h);
            for _ in 0..w * h {
                let v = cur.plain_uint()?.ok_or(PnmError::TruncatedPayload)?;
                pixels.push(scale_sample(v, max)?);
            }
            PnmImage::Gray(GrayImage::new(w, h, pixels)?)
        }
        b"P5" => {
            let (w, h) = dimensions(&mut cur)?;
            let max = maxval(&mut cur)?;
            cur.single_whitespace()?;
            let raster = cur.rest();
            let bytes_per = if max < 256 { 1 } else { 2 };
            if raster.len() < w * h * bytes_per {
                return Err(PnmError::TruncatedPayload.into());
            }
            let pixels = (0..w * h)
                .map(|i| {
                    let v = if bytes_per == 1 {
                        raster[i] as u32
                    } else {
                        u16::from_be_bytes([raster[2 * i], raster[2 * i + 1]]) as u32
                    };
                    scale_sample(v, max)
                })
                .collect::<Result<Vec<_>, _>>()?;
            PnmImage::Gray(GrayImage::new(w, h, pixels)?)
        }
        other => {
            return Err(
                PnmError::UnsupportedMagic(String::from_utf8_lossy(other).into_owned()).into(),
            )
        }
    };
    Ok(img)
}

/// Encodes a bitmap as PBM. Raw rows are padded to whole bytes.
pub fn save_pbm(img: &BinaryImage, encoding: Encoding) -> Vec<u8> {
    let (w, h) = (img.width(), img.height());
    match encoding {
        Encoding::Plain => {
            let mut out = format!("P1\n{w} {h}\n").into_bytes();
            for y in 0..h {
                // Plain PBM lines should stay under 70 characters.
                for (i, chunk) in img.row(y).chunks(34).enumerate() {
                    if i > 0 {
                        out.push(b'\n');
                    }
                    let line: Vec<&str> =
                        chunk.iter().map(|&p| if p { "1" } else { "0" }).collect();
                    out.extend_from_slice(line.join(" ").as_bytes());
                }
                out.push(b'\n');
            }
            out
        }
        Encoding::Raw => {
            let mut out = format!("P4\n{w} {h}\n").into_bytes();
            let stride = w.div_ceil(8);
            for y in 0..h {
                let mut row = vec![0u8; stride];
                for (x, &p) in img.row(y).iter().enumerate() {
                    if p {
                        row[x / 8] |= 0x80 >> (x % 8);
                    }
                }
                out.extend_from_slice(&row);
            }
            out
        }
    }
}

/// Encodes a greyscale image as PGM with maxval 255.
pub fn save_pgm(img: &GrayImage, encoding: Encoding) -> Vec<u8> {
    let (w, h) = (img.width(), img.height());
    match encoding {
        Encoding::Plain => {
            let mut out = format!("P2\n{w} {h}\n255\n").into_bytes();
            for y in 0..h {
                let row = &img.pixels()[y * w..(y + 1) * w];
                for (i, chunk) in row.chunks(16).enumerate() {
                    if i > 0 {
                        out.push(b'\n');
                    }
                    let line: Vec<String> = chunk.iter().map(|v| v.to_string()).collect();
                    out.extend_from_slice(line.join(" ").as_bytes());
                }
                out.push(b'\n');
            }
            out
        }
        Encoding::Raw => {
            let mut out = format!("P5\n{w} {h}\n255\n").into_bytes();
            out.extend_from_slice(img.pixels());
            out
        }
    }
}

/// Reads and decodes a file from disk.
pub fn read_pnm_file(path: &std::path::Path) -> Result<PnmImage> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    load_pnm(&bytes)
}
