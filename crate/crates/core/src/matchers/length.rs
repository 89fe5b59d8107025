/// Width tolerance at the reference resolution.
pub const DEFAULT_TOLERANCE: usize = 10;
pub const DEFAULT_DPI: u32 = 300;

/// True iff the two widths differ by at most `tolerance` pixels.
pub fn length_filter(query_width: usize, candidate_width: usize, tolerance: usize) -> bool {
    query_width.abs_diff(candidate_width) <= tolerance
}

/// The 10 px tolerance scaled linearly from 300 dpi and rounded.
pub fn tolerance_for_dpi(dpi: u32) -> usize {
    ((DEFAULT_TOLERANCE as f64) * dpi as f64 / DEFAULT_DPI as f64).round() as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn ten_pixel_rule() {
        assert!(length_filter(100, 109, 10));
        assert!(length_filter(100, 110, 10));
        assert!(!length_filter(100, 111, 10));
        assert!(length_filter(57, 57, 0));
    }

    #[test]
    fn dpi_scaling() {
        assert_eq!(tolerance_for_dpi(300), 10);
        assert_eq!(tolerance_for_dpi(600), 20);
        assert_eq!(tolerance_for_dpi(150), 5);
        assert_eq!(tolerance_for_dpi(200), 7);
    }

    proptest! {
        #[test]
        fn symmetric(a in 1usize..5000, b in 1usize..5000, t in 0usize..50) {
            prop_assert_eq!(length_filter(a, b, t), length_filter(b, a, t));
            prop_assert!(length_filter(a, a, 0));
        }
    }
}
