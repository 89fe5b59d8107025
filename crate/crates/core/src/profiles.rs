//! Projection profiles and white-space run statistics.

use std::collections::BTreeMap;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::image::BinaryImage;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    /// One count per row.
    Horizontal,
    /// One count per column.
    Vertical,
}

/// Foreground-pixel counts along one axis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Profile {
    pub axis: Axis,
    pub counts: Vec<u32>,
}

impl Profile {
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().map(|&c| c as u64).sum()
    }

    /// Sub-profile over `range`.
    pub fn slice(&self, range: Range<usize>) -> Profile {
        Profile {
            axis: self.axis,
            counts: self.counts[range].to_vec(),
        }
    }

    /// Maximal runs of nonzero positions as half-open ranges.
    pub fn ink_runs(&self) -> Vec<Range<usize>> {
        let mut runs = Vec::new();
        let mut start = None;
        for (i, &c) in self.counts.iter().enumerate() {
            match (c > 0, start) {
                (true, None) => start = Some(i),
                (false, Some(s)) => {
                    runs.push(s..i);
                    start = None;
                }
                _ => {}
            }
        }
        if let Some(s) = start {
            runs.push(s..self.counts.len());
        }
        runs
    }

    /// Zeroes every ink run whose summed count is below `min_mass`.
    pub fn suppress_light_runs(&self, min_mass: u32) -> Profile {
        let mut out = self.clone();
        if min_mass <= 1 {
            return out;
        }
        for run in self.ink_runs() {
            let mass: u64 = self.counts[run.clone()].iter().map(|&c| c as u64).sum();
            if mass < min_mass as u64 {
                out.counts[run].iter_mut().for_each(|c| *c = 0);
            }
        }
        out
    }
}

pub fn horizontal_profile(img: &BinaryImage) -> Profile {
    let counts = (0..img.height())
        .map(|y| img.row(y).iter().filter(|&&p| p).count() as u32)
        .collect();
    Profile {
        axis: Axis::Horizontal,
        counts,
    }
}

pub fn vertical_profile(img: &BinaryImage) -> Profile {
    vertical_profile_rows(img, 0..img.height())
}

/// Column counts restricted to the rows in `rows`.
pub fn vertical_profile_rows(img: &BinaryImage, rows: Range<usize>) -> Profile {
    let mut counts = vec![0u32; img.width()];
    for y in rows {
        for (x, &p) in img.row(y).iter().enumerate() {
            if p {
                counts[x] += 1;
            }
        }
    }
    Profile {
        axis: Axis::Vertical,
        counts,
    }
}

/// Mean value of pixels per line: the arithmetic mean of the counts.
/// An empty profile yields zero.
pub fn mvpl<S: Scalar>(profile: &Profile) -> S {
    if profile.is_empty() {
        return S::zero();
    }
    S::from_count(profile.total()) / S::from_count(profile.len() as u64)
}

/// Histogram of interior white-space run lengths.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapHistogram {
    /// Run length -> number of runs with that length.
    pub bins: BTreeMap<usize, usize>,
}

impl GapHistogram {
    pub fn from_gaps(gaps: impl IntoIterator<Item = usize>) -> Self {
        let mut bins = BTreeMap::new();
        for g in gaps.into_iter().filter(|&g| g > 0) {
            *bins.entry(g).or_insert(0) += 1;
        }
        GapHistogram { bins }
    }

    pub fn is_empty(&self) -> bool {
        self.bins.is_empty()
    }

    pub fn run_count(&self) -> usize {
        self.bins.values().sum()
    }

    /// Summed length of all runs.
    pub fn total_length(&self) -> usize {
        self.bins.iter().map(|(len, n)| len * n).sum()
    }

    pub fn count(&self, len: usize) -> usize {
        self.bins.get(&len).copied().unwrap_or(0)
    }

    pub fn min_gap(&self) -> Option<usize> {
        self.bins.keys().next().copied()
    }

    pub fn max_gap(&self) -> Option<usize> {
        self.bins.keys().next_back().copied()
    }

    /// Count-weighted mean run length; 0 when empty.
    pub fn mean_gap(&self) -> f64 {
        let runs = self.run_count();
        if runs == 0 {
            return 0.0;
        }
        self.total_length() as f64 / runs as f64
    }
}

/// Zero runs strictly between the first and last nonzero positions.
pub fn gap_histogram(profile: &Profile) -> GapHistogram {
    let runs = profile.ink_runs();
    GapHistogram::from_gaps(runs.windows(2).map(|w| w[1].start - w[0].end))
}

/// JSON-friendly snapshot of a histogram including its mean.
#[derive(Debug, Clone, Serialize)]
pub struct GapHistogramSummary<'a> {
    pub bins: &'a BTreeMap<usize, usize>,
    pub mean_gap: f64,
}

impl GapHistogram {
    pub fn summary(&self) -> GapHistogramSummary<'_> {
        GapHistogramSummary {
            bins: &self.bins,
            mean_gap: self.mean_gap(),
        }
    }
}
