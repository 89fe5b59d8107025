use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum PnmError {
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("truncated payload")]
    TruncatedPayload,
    #[error("unsupported magic number {0:?}")]
    UnsupportedMagic(String),
    #[error("invalid sample value {value} (max {max})")]
    InvalidSample { value: u32, max: u32 },
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Pnm(#[from] PnmError),
    #[error("invalid image dimensions {width}x{height}")]
    InvalidDimensions { width: usize, height: usize },
    #[error("pixel buffer holds {actual} pixels, expected {expected}")]
    PixelCount { expected: usize, actual: usize },
    #[error(
        "box {left},{top} {width}x{height} does not fit in a {image_width}x{image_height} image"
    )]
    BoxOutOfRange {
        left: usize,
        top: usize,
        width: usize,
        height: usize,
        image_width: usize,
        image_height: usize,
    },
    #[error("invalid synthetic page spec: {field}: {reason}")]
    InvalidSpec { field: &'static str, reason: String },
    #[error("no glyph for character {0:?}")]
    UnknownGlyph(char),
    #[error("line {line} is {width}px wide, page allows {page_width}px")]
    WordTooWide {
        line: usize,
        width: usize,
        page_width: usize,
    },
    #[error("empty input: {0}")]
    EmptyInput(&'static str),
    #[error("window size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("window too small: n = {0}, need at least 2")]
    WindowTooSmall(usize),
    #[error("word {0} not found in index")]
    UnknownWord(String),
    #[error("checksum mismatch for {}", .0.display())]
    ChecksumMismatch(PathBuf),
    #[error("duplicate page path {}", .0.display())]
    DuplicatePage(PathBuf),
    #[error("unsupported index format version {0}")]
    IndexVersion(u32),
    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
