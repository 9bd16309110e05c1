//! Sampled real-valued paths.
//!
//! A [`SamplePath`] stands for the piecewise-constant càdlàg function
//! `f(t) = values[i]` for `t` in `[times[i], times[i+1])`. Every supremum over
//! partitions of such a function is attained on sample indices, so all path
//! functionals in this crate are evaluated exactly on the samples.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Strictly time-ordered, finite, non-empty sample of a path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPath", into = "RawPath")]
pub struct SamplePath {
    times: Vec<f64>,
    values: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawPath {
    times: Vec<f64>,
    values: Vec<f64>,
}

impl TryFrom<RawPath> for SamplePath {
    type Error = Error;

    fn try_from(raw: RawPath) -> Result<Self> {
        SamplePath::new(raw.times, raw.values)
    }
}

impl From<SamplePath> for RawPath {
    fn from(p: SamplePath) -> Self {
        RawPath {
            times: p.times,
            values: p.values,
        }
    }
}

/// Checks the path invariants and builds a [`SamplePath`].
pub fn validate_path(times: &[f64], values: &[f64]) -> Result<SamplePath> {
    SamplePath::new(times.to_vec(), values.to_vec())
}

impl SamplePath {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::LengthMismatch {
                times: times.len(),
                values: values.len(),
            });
        }
        if times.is_empty() {
            return Err(Error::EmptyPath);
        }
        for (index, (t, v)) in times.iter().zip(&values).enumerate() {
            if !t.is_finite() || !v.is_finite() {
                return Err(Error::NonFinite { index });
            }
        }
        check_increasing(&times)?;
        Ok(Self { times, values })
    }

    /// Path sampled at integer times `0, 1, ..., n-1`.
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        let times = (0..values.len()).map(|i| i as f64).collect();
        Self::new(times, values)
    }

    /// Builds a path from parts the caller already knows to be valid.
    pub(crate) fn from_parts_unchecked(times: Vec<f64>, values: Vec<f64>) -> Self {
        debug_assert_eq!(times.len(), values.len());
        debug_assert!(!times.is_empty());
        Self { times, values }
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false; a valid path holds at least one sample.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Interval start `a`.
    pub fn start(&self) -> f64 {
        self.times[0]
    }

    /// Interval end `b`.
    pub fn end(&self) -> f64 {
        self.times[self.times.len() - 1]
    }

    pub fn first_value(&self) -> f64 {
        self.values[0]
    }

    pub fn last_value(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// The path `-f`.
    pub fn negate(&self) -> SamplePath {
        Self {
            times: self.times.clone(),
            values: self.values.iter().map(|v| -v).collect(),
        }
    }

    /// Samples whose times lie in the closed interval `[from, to]`.
    pub fn restrict(&self, from: f64, to: f64) -> Result<SamplePath> {
        let lo = self.times.partition_point(|&t| t < from);
        let hi = self.times.partition_point(|&t| t <= to);
        if lo >= hi {
            return Err(Error::EmptyPath);
        }
        Ok(self.slice(lo, hi))
    }

    /// Samples with indices in `lo..hi`.
    pub fn slice(&self, lo: usize, hi: usize) -> SamplePath {
        assert!(lo < hi && hi <= self.len(), "slice {lo}..{hi} out of range");
        Self {
            times: self.times[lo..hi].to_vec(),
            values: self.values[lo..hi].to_vec(),
        }
    }

    /// First `len` samples.
    pub fn prefix(&self, len: usize) -> SamplePath {
        self.slice(0, len)
    }

    /// Replaces the sample times by `new_times` (the images `s(times)` under a
    /// strictly increasing map `s`); values are untouched.
    pub fn time_change(&self, new_times: &[f64]) -> Result<SamplePath> {
        if new_times.len() != self.len() {
            return Err(Error::LengthMismatch {
                times: new_times.len(),
                values: self.len(),
            });
        }
        Self::new(new_times.to_vec(), self.values.clone())
    }

    /// [`time_change`](Self::time_change) with the map given as a closure.
    pub fn time_change_with(&self, s: impl Fn(f64) -> f64) -> Result<SamplePath> {
        let new_times: Vec<f64> = self.times.iter().map(|&t| s(t)).collect();
        self.time_change(&new_times)
    }

    /// Pointwise sum of two paths on the same time grid.
    pub fn add(&self, other: &SamplePath) -> Result<SamplePath> {
        if self.times != other.times {
            return Err(Error::InvalidArgument(
                "paths must share the same time grid".into(),
            ));
        }
        Ok(Self {
            times: self.times.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }
}

fn check_increasing(times: &[f64]) -> Result<()> {
    for (i, w) in times.windows(2).enumerate() {
        if w[1] <= w[0] {
            return Err(Error::NotIncreasing {
                index: i + 1,
                prev: w[0],
                next: w[1],
            });
        }
    }
    Ok(())
}

/// Truncation parameter `c` of `phi_c(x) = max(x - c, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Threshold(f64);

impl Threshold {
    /// Accepts any finite `c >= 0`.
    pub fn new(c: f64) -> Result<Self> {
        if !c.is_finite() {
            return Err(Error::InvalidThreshold(c, "must be finite"));
        }
        if c < 0.0 {
            return Err(Error::InvalidThreshold(c, "must be nonnegative"));
        }
        Ok(Self(c))
    }

    /// Accepts finite `c > 0`, as required by the streaming engine.
    pub fn positive(c: f64) -> Result<Self> {
        let t = Self::new(c)?;
        if c == 0.0 {
            return Err(Error::InvalidThreshold(c, "must be strictly positive"));
        }
        Ok(t)
    }

    pub fn get(self) -> f64 {
        self.0
    }

    /// `phi_c(x) = max(x - c, 0)`.
    #[inline]
    pub fn truncate(self, x: f64) -> f64 {
        (x - self.0).max(0.0)
    }
}

impl TryFrom<f64> for Threshold {
    type Error = Error;

    fn try_from(c: f64) -> Result<Self> {
        Self::new(c)
    }
}

impl From<Threshold> for f64 {
    fn from(t: Threshold) -> f64 {
        t.0
    }
}

/// Sum of absolute increments, `TV^0`.
pub fn total_variation(p: &SamplePath) -> f64 {
    total_variation_of(p.values())
}

pub(crate) fn total_variation_of(values: &[f64]) -> f64 {
    values.windows(2).map(|w| (w[1] - w[0]).abs()).sum()
}
