use std::path::PathBuf;

use wordspot::pnm::Encoding;
use wordspot::{
    load_pnm, match_word, render_synthetic_page, save_pbm, save_pgm, segment_page, Error,
    GrayImage, MatchParams, Ordering, SegmentParams, SyntheticPageSpec, WordIndex,
};

fn spec(lines: &[&str]) -> SyntheticPageSpec {
    SyntheticPageSpec::new(lines.iter().map(|s| s.to_string()).collect(), 2, 12, 8)
}

#[test]
fn six_word_line() {
    let (img, truth) =
        render_synthetic_page(&spec(&["quando os olhos se alevantam agora"])).unwrap();
    let lines = segment_page(&img, 0, &SegmentParams::default());
    assert_eq!(lines.len(), 1);
    assert_eq!(lines[0].words.len(), 6);
    for (w, t) in lines[0].words.iter().zip(&truth.lines[0].words) {
        assert_eq!((w.bbox.left, w.width), (t.bbox.left, t.bbox.width));
        assert_eq!(w.char_count, t.char_count, "{}", t.text);
    }
}

#[test]
fn two_pages_of_ten_words_index_twenty() {
    let dir = tempfile::tempdir().unwrap();
    let mut paths = Vec::new();
    for (i, text) in [
        [
            "alpha beta gamma delta epsilon",
            "zeta eta theta iota kappa",
        ],
        ["one two three four five", "six seven eight nine ten"],
    ]
    .iter()
    .enumerate()
    {
        let (img, _) = render_synthetic_page(&spec(text)).unwrap();
        let p = dir.path().join(format!("p{i}.pbm"));
        std::fs::write(&p, save_pbm(&img, Encoding::Plain)).unwrap();
        paths.push(p);
    }
    let index = WordIndex::build(&paths, SegmentParams::default(), 15).unwrap();
    assert_eq!(index.words.len(), 20);
    let reparsed = WordIndex::from_json(&index.to_json()).unwrap();
    assert_eq!(reparsed.to_json(), index.to_json());

    let blocks = index.load_blocks().unwrap();
    assert_eq!(blocks.len(), 20);
    let q = &blocks[7];
    let fused = match_word(
        q,
        &blocks,
        &MatchParams {
            ordering: Ordering::Fused,
            ..MatchParams::default()
        },
    );
    assert_eq!(fused.rows[0].candidate, q.id);
    assert_eq!(fused.rows[0].fused_rank, 1);
}

#[test]
fn grayscale_pages_are_binarized_automatically() {
    let dir = tempfile::tempdir().unwrap();
    let (img, _) = render_synthetic_page(&spec(&["gray scale page", "second line here"])).unwrap();
    let gray = GrayImage::from(&img);
    let p = dir.path().join("page.pgm");
    std::fs::write(&p, save_pgm(&gray, Encoding::Raw)).unwrap();
    let decoded = load_pnm(&std::fs::read(&p).unwrap()).unwrap();
    assert!(matches!(decoded, wordspot::PnmImage::Gray(_)));
    let index = WordIndex::build(&[p], SegmentParams::default(), 15).unwrap();
    assert_eq!(index.words.len(), 6);
}

#[test]
fn stale_page_is_detected() {
    let dir = tempfile::tempdir().unwrap();
    let (img, _) = render_synthetic_page(&spec(&["stale page"])).unwrap();
    let p: PathBuf = dir.path().join("page.pbm");
    std::fs::write(&p, save_pbm(&img, Encoding::Raw)).unwrap();
    let index = WordIndex::build(std::slice::from_ref(&p), SegmentParams::default(), 15).unwrap();
    let mut altered = img.clone();
    altered.set(0, 0, !altered.get(0, 0));
    std::fs::write(&p, save_pbm(&altered, Encoding::Raw)).unwrap();
    assert!(matches!(
        index.load_blocks(),
        Err(Error::ChecksumMismatch(_))
    ));
}
