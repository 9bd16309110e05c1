//! Moment and normality diagnostics for Monte Carlo samples.

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::error::{Error, Result};

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

pub fn compensated_sum(xs: impl IntoIterator<Item = f64>) -> f64 {
    let mut s = CompensatedSum::default();
    for x in xs {
        s.add(x);
    }
    s.value()
}

pub fn mean(xs: &[f64]) -> f64 {
    compensated_sum(xs.iter().copied()) / xs.len() as f64
}

/// Summary of a real sample; standard errors use the Gaussian large-sample
/// formulas.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub n: usize,
    pub mean: f64,
    pub mean_se: f64,
    /// Unbiased (n - 1) variance.
    pub variance: f64,
    pub variance_se: f64,
    /// `None` when the sample is degenerate.
    pub skewness: Option<f64>,
    pub skewness_se: f64,
    pub excess_kurtosis: Option<f64>,
    pub excess_kurtosis_se: f64,
    /// Kolmogorov–Smirnov distance to `N(mean, variance)`; 1 for a
    /// degenerate sample.
    pub ks_distance: f64,
    /// Zero variance: the fitted Gaussian does not exist.
    pub degenerate: bool,
}

/// 1% critical value coefficient of the one-sample KS statistic,
/// `D_n <= 1.63 / sqrt(n)`.
pub const KS_COEFF_1PCT: f64 = 1.63;

pub fn summary_stats(xs: &[f64]) -> Result<SummaryStats> {
    let n = xs.len();
    if n < 2 {
        return Err(Error::TooFewSamples { needed: 2, got: n });
    }
    if let Some(index) = xs.iter().position(|x| !x.is_finite()) {
        return Err(Error::NonFinite { index });
    }
    let nf = n as f64;
    let m = mean(xs);
    let (mut s2, mut s3, mut s4) = (
        CompensatedSum::default(),
        CompensatedSum::default(),
        CompensatedSum::default(),
    );
    for &x in xs {
        let d = x - m;
        let d2 = d * d;
        s2.add(d2);
        s3.add(d2 * d);
        s4.add(d2 * d2);
    }
    let (m2, m3, m4) = (s2.value() / nf, s3.value() / nf, s4.value() / nf);
    let variance = s2.value() / (nf - 1.0);
    let degenerate = m2.is_nan() || m2 <= 0.0;
    let (skewness, excess_kurtosis, ks_distance) = if degenerate {
        (None, None, 1.0)
    } else {
        (
            Some(m3 / m2.powf(1.5)),
            Some(m4 / (m2 * m2) - 3.0),
            ks_to_gaussian(xs, m, variance.sqrt()),
        )
    };
    Ok(SummaryStats {
        n,
        mean: m,
        mean_se: (variance / nf).sqrt(),
        variance,
        variance_se: variance * (2.0 / (nf - 1.0)).sqrt(),
        skewness,
        skewness_se: (6.0 / nf).sqrt(),
        excess_kurtosis,
        excess_kurtosis_se: (24.0 / nf).sqrt(),
        ks_distance,
        degenerate,
    })
}

pub fn normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / std::f64::consts::SQRT_2)
}

/// `sup_x |F_n(x) - Phi((x - mean) / sd)|` for `sd > 0`.
pub fn ks_to_gaussian(xs: &[f64], mean: f64, sd: f64) -> f64 {
    let mut sorted = xs.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = normal_cdf((x - mean) / sd);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

/// Pearson correlation; `None` if either sample has zero variance.
pub fn correlation(xs: &[f64], ys: &[f64]) -> Option<f64> {
    assert_eq!(xs.len(), ys.len());
    let (mx, my) = (mean(xs), mean(ys));
    let (mut sxy, mut sxx, mut syy) = (
        CompensatedSum::default(),
        CompensatedSum::default(),
        CompensatedSum::default(),
    );
    for (&x, &y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxy.add(dx * dy);
        sxx.add(dx * dx);
        syy.add(dy * dy);
    }
    let den = (sxx.value() * syy.value()).sqrt();
    (den > 0.0).then(|| sxy.value() / den)
}
