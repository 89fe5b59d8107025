//! Greyscale to bitmap conversion (dark ink on a light page).

use crate::image::{BinaryImage, GrayImage};

/// Binarization threshold. A pixel becomes ink iff its intensity is strictly
/// below the threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Threshold {
    Fixed(u16),
    /// Otsu's between-class variance maximum.
    Auto,
}

pub fn binarize(img: &GrayImage, threshold: Threshold) -> BinaryImage {
    let t = match threshold {
        Threshold::Fixed(t) => t,
        Threshold::Auto => otsu_threshold(img),
    };
    let pixels = img.pixels().iter().map(|&v| (v as u16) < t).collect();
    BinaryImage::new(img.width(), img.height(), pixels).expect("dimensions carried over")
}

/// Smallest `t` in 1..=255 maximizing the between-class variance of the
/// split {v < t} / {v >= t}. Returns 0 (no ink) for a constant image.
pub fn otsu_threshold(img: &GrayImage) -> u16 {
    let mut hist = [0u64; 256];
    for &v in img.pixels() {
        hist[v as usize] += 1;
    }
    let total = img.pixels().len() as f64;
    let sum_all: f64 = hist
        .iter()
        .enumerate()
        .map(|(v, &c)| v as f64 * c as f64)
        .sum();

    let mut best_t = 0u16;
    let mut best = 0.0f64;
    let mut n0 = 0.0f64;
    let mut s0 = 0.0f64;
    for t in 1..=255u16 {
        n0 += hist[t as usize - 1] as f64;
        s0 += (t as f64 - 1.0) * hist[t as usize - 1] as f64;
        let n1 = total - n0;
        if n0 == 0.0 || n1 == 0.0 {
            continue;
        }
        let mean0 = s0 / n0;
        let mean1 = (sum_all - s0) / n1;
        let between = n0 * n1 * (mean0 - mean1) * (mean0 - mean1);
        if between > best {
            best = between;
            best_t = t;
        }
    }
    best_t
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gray(w: usize, h: usize, px: Vec<u8>) -> GrayImage {
        GrayImage::new(w, h, px).unwrap()
    }

    #[test]
    fn fixed_threshold_extremes() {
        let black = gray(3, 2, vec![0; 6]);
        assert!(binarize(&black, Threshold::Fixed(128))
            .pixels()
            .iter()
            .all(|&p| p));
        let white = gray(3, 2, vec![255; 6]);
        assert!(binarize(&white, Threshold::Fixed(128)).is_blank());
    }

    #[test]
    fn constant_image_auto_is_background() {
        for v in [0u8, 77, 255] {
            assert!(binarize(&gray(4, 4, vec![v; 16]), Threshold::Auto).is_blank());
        }
    }

    /// Exhaustive scan over all thresholds, computing class statistics from
    /// scratch for each candidate.
    fn otsu_oracle(px: &[u8]) -> u16 {
        let mut best = (0.0f64, 0u16);
        for t in 1..=255u16 {
            let (lo, hi): (Vec<f64>, Vec<f64>) = {
                let lo = px
                    .iter()
                    .filter(|&&v| (v as u16) < t)
                    .map(|&v| v as f64)
                    .collect();
                let hi = px
                    .iter()
                    .filter(|&&v| (v as u16) >= t)
                    .map(|&v| v as f64)
                    .collect();
                (lo, hi)
            };
            if lo.is_empty() || hi.is_empty() {
                continue;
            }
            let n = px.len() as f64;
            let (w0, w1) = (lo.len() as f64 / n, hi.len() as f64 / n);
            let m0 = lo.iter().sum::<f64>() / lo.len() as f64;
            let m1 = hi.iter().sum::<f64>() / hi.len() as f64;
            let var = w0 * w1 * (m0 - m1).powi(2);
            if var > best.0 + 1e-9 {
                best = (var, t);
            }
        }
        best.1
    }

    #[test]
    fn bimodal_auto_selects_dark_half() {
        let px: Vec<u8> = (0..64).map(|i| if i < 32 { 10 } else { 240 }).collect();
        let img = gray(8, 8, px.clone());
        let t = otsu_threshold(&img);
        assert_eq!(t, otsu_oracle(&px));
        assert_eq!(t, 11);
        let b = binarize(&img, Threshold::Auto);
        for (i, &p) in b.pixels().iter().enumerate() {
            assert_eq!(p, i < 32);
        }
    }

    #[test]
    fn otsu_agrees_with_exhaustive_scan() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let px: Vec<u8> = (0..200)
                .map(|_| {
                    if rng.gen_bool(0.3) {
                        rng.gen_range(0..90)
                    } else {
                        rng.gen_range(150..=255)
                    }
                })
                .collect();
            let img = gray(20, 10, px.clone());
            let ours = otsu_threshold(&img);
            let oracle = otsu_oracle(&px);
            // Both pick the first maximum; allow for float ties on flat plateaus.
            let b1 = binarize(&img, Threshold::Fixed(ours));
            let b2 = binarize(&img, Threshold::Fixed(oracle));
            assert_eq!(b1, b2, "ours {ours} oracle {oracle}");
        }
    }
}
