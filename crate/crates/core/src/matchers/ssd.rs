use num_traits::Float;

use crate::error::{Error, Result};
use crate::image::BinaryImage;

/// Score given when exactly one of the blocks has no ink.
pub fn max_dissimilar<S: Float>() -> S {
    S::max_value()
}

/// Normalized sum of squared differences between two equally sized bitmaps,
/// with ink as 1 and background as 0:
///
/// `sum (a - b)^2 / sqrt(sum a^2 * sum b^2)`
///
/// Zero for identical blocks, larger is less similar. Two blank blocks score
/// zero; one blank block scores [`max_dissimilar`].
pub fn ssd<S: Float>(a: &BinaryImage, b: &BinaryImage) -> Result<S> {
    if (a.width(), a.height()) != (b.width(), b.height()) {
        return Err(Error::SizeMismatch(a.pixels().len(), b.pixels().len()));
    }
    let mut diff = 0u64;
    let mut mass_a = 0u64;
    let mut mass_b = 0u64;
    for (&pa, &pb) in a.pixels().iter().zip(b.pixels()) {
        diff += u64::from(pa != pb);
        mass_a += u64::from(pa);
        mass_b += u64::from(pb);
    }
    let scalar = |v: u64| S::from(v).expect("count fits scalar");
    match (mass_a, mass_b) {
        (0, 0) => Ok(S::zero()),
        (0, _) | (_, 0) => Ok(max_dissimilar()),
        _ => Ok(scalar(diff) / (scalar(mass_a) * scalar(mass_b)).sqrt()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two_example() {
        let a = BinaryImage::from_ascii(&["#.", ".#"]).unwrap();
        let b = BinaryImage::from_ascii(&["#.", ".."]).unwrap();
        let v: f64 = ssd(&a, &b).unwrap();
        assert!((v - 1.0 / 2f64.sqrt()).abs() < 1e-12);
        let v32: f32 = ssd(&a, &b).unwrap();
        assert!((v32 - std::f32::consts::FRAC_1_SQRT_2).abs() < 1e-6);
    }

    #[test]
    fn identical_and_blank() {
        let a = BinaryImage::from_ascii(&["##.", ".##"]).unwrap();
        assert_eq!(ssd::<f64>(&a, &a).unwrap(), 0.0);
        let blank = BinaryImage::blank(3, 2).unwrap();
        assert_eq!(ssd::<f64>(&blank, &blank).unwrap(), 0.0);
        assert_eq!(ssd::<f64>(&a, &blank).unwrap(), f64::MAX);
        assert_eq!(ssd::<f64>(&blank, &a).unwrap(), f64::MAX);
    }

    #[test]
    fn size_mismatch() {
        let a = BinaryImage::blank(3, 2).unwrap();
        let b = BinaryImage::blank(2, 3).unwrap();
        assert!(ssd::<f64>(&a, &b).is_err());
    }
}
