//! Command-line surface: `segment`, `index`, `match`, `synth`.

use std::collections::HashMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::Error;
use crate::image::BoundingBox;
use crate::index::{decode_page, WordIndex};
use crate::lines::{SegmentParams, TextLine};
use crate::matchers::{DEFAULT_SECTOR_WIDTH, DEFAULT_TOLERANCE};
use crate::pnm::{save_pbm, Encoding};
use crate::profiles::{
    gap_histogram, horizontal_profile, vertical_profile_rows, GapHistogram, Profile,
};
use crate::ranking::{match_word, MatchParams, Ordering, RankedMatches};
use crate::synth::{render_synthetic_page, GroundTruth, SyntheticPageSpec};
use crate::words::{segment_page, WordBlock, WordId};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PROCESSING: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "wordspot",
    version,
    about = "Line/word segmentation and word spotting on binarized page images"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Emit JSON instead of TSV (match)
    #[arg(long, global = true)]
    pub json: bool,
    /// Worker threads; 0 uses every core
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    /// Noise seed (synth); overrides the page spec's seed
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Shape-code sector width in pixels
    #[arg(long, global = true, default_value_t = DEFAULT_SECTOR_WIDTH)]
    pub sector_width: usize,
    /// Width tolerance in pixels at 300 dpi
    #[arg(long, global = true, default_value_t = DEFAULT_TOLERANCE)]
    pub tolerance: usize,
    /// Scan resolution; scales the tolerance
    #[arg(long, global = true, default_value_t = 300)]
    pub dpi: u32,
    /// Number of matches to print
    #[arg(long, global = true, default_value_t = 10)]
    pub top: usize,
    /// Result ordering: ssd or fused
    #[arg(long, global = true, default_value_t = Ordering::Ssd)]
    pub ordering: Ordering,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Segment pages into lines and words, printed as JSON
    Segment {
        #[arg(required = true)]
        pages: Vec<PathBuf>,
        /// Include projection profiles and gap histograms
        #[arg(long)]
        dump_profile: bool,
    },
    /// Build a word index over pages
    Index {
        pages: Vec<PathBuf>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Rank indexed words against a query word
    Match {
        index: PathBuf,
        /// Indexed word as PAGE:LINE:POSITION
        #[arg(
            long,
            conflicts_with = "query_image",
            required_unless_present = "query_image"
        )]
        query: Option<WordId>,
        /// External word image (PBM/PGM)
        #[arg(long)]
        query_image: Option<PathBuf>,
        /// Ground-truth files from `synth`, used to label candidates
        #[arg(long)]
        truth: Vec<PathBuf>,
    },
    /// Render a synthetic page and its ground truth
    Synth { spec: PathBuf, output_dir: PathBuf },
}

/// Failure carrying its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::ChecksumMismatch(_) | Error::Json(_) => EXIT_PROCESSING,
            Error::Io { source, .. }
                if source.kind() != std::io::ErrorKind::NotFound
                    && source.kind() != std::io::ErrorKind::PermissionDenied =>
            {
                EXIT_PROCESSING
            }
            _ => EXIT_USAGE,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

fn processing(message: impl Into<String>) -> CliError {
    CliError {
        code: EXIT_PROCESSING,
        message: message.into(),
    }
}

/// Parses `args`, runs the command and returns the exit code.
pub fn run_from_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    match run(&cli, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "wordspot: {}", e.message);
            e.code
        }
    }
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.common.jobs)
        .build()
        .map_err(|e| processing(format!("thread pool: {e}")))?;
    let text = pool.install(|| match &cli.command {
        Command::Segment {
            pages,
            dump_profile,
        } => cmd_segment(pages, *dump_profile),
        Command::Index { pages, output } => {
            cmd_index(pages, output, &cli.common).map(|()| String::new())
        }
        Command::Match {
            index,
            query,
            query_image,
            truth,
        } => cmd_match(index, *query, query_image.as_deref(), truth, &cli.common),
        Command::Synth { spec, output_dir } => {
            cmd_synth(spec, output_dir, cli.common.seed).map(|()| String::new())
        }
    })?;
    out.write_all(text.as_bytes())
        .map_err(|e| processing(format!("writing output: {e}")))
}

#[derive(Serialize)]
struct WordJson {
    id: WordId,
    #[serde(rename = "box")]
    bbox: BoundingBox,
    width: usize,
    char_count: usize,
}

#[derive(Serialize)]
struct LineJson {
    #[serde(flatten)]
    line: TextLine,
    words: Vec<WordJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    vertical_profile: Option<Profile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gap_histogram: Option<HistogramJson>,
}

#[derive(Serialize)]
struct HistogramJson {
    bins: std::collections::BTreeMap<usize, usize>,
    mean_gap: f64,
}

impl From<GapHistogram> for HistogramJson {
    fn from(h: GapHistogram) -> Self {
        HistogramJson {
            mean_gap: h.mean_gap(),
            bins: h.bins,
        }
    }
}

#[derive(Serialize)]
struct PageJson {
    path: String,
    width: usize,
    height: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    horizontal_profile: Option<Profile>,
    lines: Vec<LineJson>,
}

pub fn cmd_segment(pages: &[PathBuf], dump_profile: bool) -> Result<String, CliError> {
    let params = SegmentParams::default();
    let mut result = Vec::with_capacity(pages.len());
    for (page_no, path) in pages.iter().enumerate() {
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        let img = decode_page(&bytes).map_err(|e| CliError {
            code: EXIT_USAGE,
            message: format!("{}: {e}", path.display()),
        })?;
        let cleaned = if params.despeckle {
            img.remove_isolated_pixels()
        } else {
            img.clone()
        };
        let lines = segment_page(&img, page_no, &params)
            .into_iter()
            .map(|seg| {
                let (vp, hist) = if dump_profile {
                    let p = vertical_profile_rows(&cleaned, seg.line.rows())
                        .suppress_light_runs(params.min_run_mass);
                    let h = gap_histogram(&p);
                    (Some(p), Some(h.into()))
                } else {
                    (None, None)
                };
                LineJson {
                    line: seg.line,
                    words: seg
                        .words
                        .iter()
                        .map(|w| WordJson {
                            id: w.id,
                            bbox: w.bbox,
                            width: w.width,
                            char_count: w.char_count,
                        })
                        .collect(),
                    vertical_profile: vp,
                    gap_histogram: hist,
                }
            })
            .collect();
        result.push(PageJson {
            path: path.to_string_lossy().into_owned(),
            width: img.width(),
            height: img.height(),
            horizontal_profile: dump_profile.then(|| horizontal_profile(&cleaned)),
            lines,
        });
    }
    let mut text = serde_json::to_string_pretty(&serde_json::json!({ "pages": result }))
        .map_err(Error::from)?;
    text.push('\n');
    Ok(text)
}

pub fn cmd_index(pages: &[PathBuf], output: &Path, common: &CommonArgs) -> Result<(), CliError> {
    let index = WordIndex::build(pages, SegmentParams::default(), common.sector_width)?;
    std::fs::write(output, index.to_json())
        .map_err(|e| processing(format!("{}: {e}", output.display())))
}

fn match_params(common: &CommonArgs) -> MatchParams {
    MatchParams {
        tolerance: effective_tolerance(common.tolerance, common.dpi),
        sector_width: common.sector_width,
        top_k: common.top,
        ordering: common.ordering,
        ..MatchParams::default()
    }
}

/// Word labels keyed by word id, from ground-truth files whose page file
/// name matches an indexed page.
fn labels(
    index: &WordIndex,
    blocks: &[WordBlock],
    truth: &[PathBuf],
) -> Result<HashMap<WordId, String>, CliError> {
    let mut by_name: HashMap<String, GroundTruth> = HashMap::new();
    for path in truth {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let file: TruthFile = serde_json::from_str(&text).map_err(|e| CliError {
            code: EXIT_USAGE,
            message: format!("{}: {e}", path.display()),
        })?;
        by_name.insert(file.page, file.truth);
    }
    let mut out = HashMap::new();
    for block in blocks {
        let page = &index.pages[block.id.page];
        let name = Path::new(&page.path)
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        let Some(gt) = by_name.get(&name) else {
            continue;
        };
        let best = gt
            .lines
            .iter()
            .flat_map(|l| &l.words)
            .map(|w| (overlap(&w.bbox, &block.bbox), w))
            .filter(|(o, _)| *o > 0)
            .max_by_key(|(o, _)| *o);
        if let Some((_, w)) = best {
            out.insert(block.id, w.text.clone());
        }
    }
    Ok(out)
}

fn overlap(a: &BoundingBox, b: &BoundingBox) -> usize {
    let w = a.right().min(b.right()).saturating_sub(a.left.max(b.left));
    let h = a.bottom().min(b.bottom()).saturating_sub(a.top.max(b.top));
    w * h
}

#[derive(Serialize, serde::Deserialize)]
struct TruthFile {
    page: String,
    #[serde(flatten)]
    truth: GroundTruth,
}

#[derive(Serialize)]
struct MatchRowJson<'a> {
    rank: usize,
    #[serde(flatten)]
    score: &'a crate::ranking::MatchScore,
    #[serde(skip_serializing_if = "Option::is_none")]
    label: Option<&'a str>,
}

fn fmt_ssd(v: f64) -> String {
    if v == f64::MAX {
        "MAX_DISSIMILAR".to_string()
    } else {
        format!("{v:.6}")
    }
}

/// TSV rendering: one header line, one row per match.
pub fn render_tsv(matches: &RankedMatches, labels: &HashMap<WordId, String>) -> String {
    let with_labels = !labels.is_empty();
    let mut s = String::from(
        "rank\tword_id\twidth_delta\tssd\tshape_mismatches\tulam_tau\tchar_count_delta\tfused_rank",
    );
    if with_labels {
        s.push_str("\tlabel");
    }
    s.push('\n');
    for (i, r) in matches.rows.iter().enumerate() {
        s.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{:.6}\t{}\t{}",
            i + 1,
            r.candidate,
            r.width_delta,
            fmt_ssd(r.ssd),
            r.shape_mismatches,
            r.ulam_tau,
            r.char_count_delta,
            r.fused_rank
        ));
        if with_labels {
            s.push('\t');
            s.push_str(labels.get(&r.candidate).map(String::as_str).unwrap_or("-"));
        }
        s.push('\n');
    }
    s
}

pub fn render_json(matches: &RankedMatches, labels: &HashMap<WordId, String>) -> String {
    let rows: Vec<MatchRowJson<'_>> = matches
        .rows
        .iter()
        .enumerate()
        .map(|(i, r)| MatchRowJson {
            rank: i + 1,
            score: r,
            label: labels.get(&r.candidate).map(String::as_str),
        })
        .collect();
    let doc = serde_json::json!({
        "query": matches.query,
        "ordering": matches.ordering,
        "rows": rows,
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
    s.push('\n');
    s
}

pub fn cmd_match(
    index_path: &Path,
    query: Option<WordId>,
    query_image: Option<&Path>,
    truth: &[PathBuf],
    common: &CommonArgs,
) -> Result<String, CliError> {
    let index = WordIndex::load(index_path)?;
    let blocks = index.load_blocks()?;
    let params = match_params(common);

    let matches = match (query, query_image) {
        (Some(id), _) => {
            let q = blocks
                .iter()
                .find(|b| b.id == id)
                .ok_or_else(|| Error::UnknownWord(id.to_string()))?;
            match_word(q, &blocks, &params)
        }
        (None, Some(path)) => {
            let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
            let img = decode_page(&bytes)?;
            let img = if index.segment.despeckle {
                img.remove_isolated_pixels()
            } else {
                img
            };
            let (first, last) = img.ink_columns().ok_or_else(|| CliError {
                code: EXIT_USAGE,
                message: format!("{}: query image has no ink", path.display()),
            })?;
            let cropped = img.crop(&BoundingBox::new(first, 0, last - first + 1, img.height()))?;
            let q = WordBlock::from_image(
                WordId {
                    page: usize::MAX,
                    line: 0,
                    position: 0,
                },
                cropped,
            );
            let mut m = match_word(&q, &blocks, &params);
            m.query = None;
            m
        }
        (None, None) => {
            return Err(CliError {
                code: EXIT_USAGE,
                message: "either --query or --query-image is required".into(),
            })
        }
    };

    let labels = if truth.is_empty() {
        HashMap::new()
    } else {
        labels(&index, &blocks, truth)?
    };
    Ok(if common.json {
        render_json(&matches, &labels)
    } else {
        render_tsv(&matches, &labels)
    })
}

pub fn cmd_synth(spec_path: &Path, output_dir: &Path, seed: Option<u64>) -> Result<(), CliError> {
    let text = std::fs::read_to_string(spec_path).map_err(|e| Error::io(spec_path, e))?;
    let mut spec: SyntheticPageSpec = serde_json::from_str(&text).map_err(|e| CliError {
        code: EXIT_USAGE,
        message: format!("{}: invalid spec: {e}", spec_path.display()),
    })?;
    if let Some(seed) = seed {
        spec.seed = seed;
    }
    let (page, truth) = render_synthetic_page(&spec)?;
    std::fs::create_dir_all(output_dir)
        .map_err(|e| processing(format!("{}: {e}", output_dir.display())))?;
    let page_path = output_dir.join("page.pbm");
    std::fs::write(&page_path, save_pbm(&page, Encoding::Raw))
        .map_err(|e| processing(format!("{}: {e}", page_path.display())))?;
    let truth_file = TruthFile {
        page: "page.pbm".into(),
        truth,
    };
    let mut json = serde_json::to_string_pretty(&truth_file).map_err(Error::from)?;
    json.push('\n');
    let truth_path = output_dir.join("page.truth.json");
    std::fs::write(&truth_path, json)
        .map_err(|e| processing(format!("{}: {e}", truth_path.display())))
}

/// Width tolerance scaled from 300 dpi to the scan resolution.
pub fn effective_tolerance(tolerance: usize, dpi: u32) -> usize {
    (tolerance as f64 * dpi as f64 / 300.0).round() as usize
}
