use crate::image::BinaryImage;
use crate::words::WordBlock;

/// Places both word bitmaps in one frame with left edges and baselines
/// coincident. The frame is tall enough for the larger extent above and
/// below the baseline of either word; padding is background.
pub fn align_blocks(a: &WordBlock, b: &WordBlock) -> (BinaryImage, BinaryImage) {
    let above = a.line_ref.baseline.max(b.line_ref.baseline);
    let below_a = a.bitmap.height() - a.line_ref.baseline;
    let below_b = b.bitmap.height() - b.line_ref.baseline;
    let height = above + below_a.max(below_b);
    let width = a.bitmap.width().max(b.bitmap.width());

    let place = |w: &WordBlock| {
        if (w.bitmap.width(), w.bitmap.height()) == (width, height) {
            return w.bitmap.clone();
        }
        let mut frame = BinaryImage::blank(width, height).expect("non-empty frame");
        frame.paste(&w.bitmap, 0, above - w.line_ref.baseline);
        frame
    };
    (place(a), place(b))
}
