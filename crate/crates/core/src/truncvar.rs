//! Exact single-pass evaluation of truncated variation.
//!
//! The engine walks the samples once, tracking the running extremum since the
//! last detected crossing. A crossing is registered at the first sample where
//! the move from that extremum reaches `c` (non-strict). Between crossings the
//! cumulative upward and downward truncated variations are closed-form in the
//! running extremum:
//!
//! ```text
//! up phase   [T_U,k ; T_D,k):    UTV = sum_{i<k} (M_i - m_i - c) + M_k(s) - m_k - c
//!                                DTV = sum_{i<k} (M_i - m_{i+1} - c)
//! down phase [T_D,k ; T_U,k+1):  UTV = sum_{i<=k} (M_i - m_i - c)
//!                                DTV = sum_{i<k} (M_i - m_{i+1} - c) + M_k - m_{k+1}(s) - c
//! ```
//!
//! The formulas assume the first `c`-sized rise comes no later than the first
//! `c`-sized fall. Otherwise the engine runs on `-f` and swaps UTV and DTV on
//! output.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::path::{total_variation_of, SamplePath, Threshold};

/// Which function the crossing decomposition was computed on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// On `f` itself (first `c`-rise no later than first `c`-fall).
    Direct,
    /// On `-f`; extrema are reported for `-f`.
    Negated,
}

impl Orientation {
    fn sign(self) -> f64 {
        match self {
            Orientation::Direct => 1.0,
            Orientation::Negated => -1.0,
        }
    }
}

/// Alternating up/down crossing times with the local extrema between them.
///
/// All values (`local_mins`, `local_maxes`) are in the frame given by
/// `orientation`. `local_mins[k]` is `m_k`, the infimum on
/// `[T_D,k-1 ; T_U,k)`; `local_maxes[k]` is `M_k`, the supremum on
/// `[T_U,k ; T_D,k)`. Only completed extrema are listed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossingDecomposition {
    pub orientation: Orientation,
    pub up_times: Vec<f64>,
    pub down_times: Vec<f64>,
    pub up_indices: Vec<usize>,
    pub down_indices: Vec<usize>,
    pub local_mins: Vec<f64>,
    pub local_maxes: Vec<f64>,
}

/// Cumulative UTV^c, DTV^c and TV^c over `[a; t_i]` at every sample time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncVarCurve {
    pub times: Vec<f64>,
    pub utv: Vec<f64>,
    pub dtv: Vec<f64>,
    pub tv: Vec<f64>,
}

/// Totals over the whole path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncVarTotals {
    pub utv: f64,
    pub dtv: f64,
    pub tv: f64,
}

/// The optimal tube approximants of a path.
///
/// `g0` has minimal total variation among functions starting at `f(a)` whose
/// difference from `f` oscillates by at most `c`; `g = alpha0 + g0` has minimal
/// total variation among functions within uniform distance `c/2` of `f`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LazyTube {
    pub g0: Vec<f64>,
    pub g: Vec<f64>,
    pub alpha0: f64,
}

#[derive(Debug, Clone, Copy)]
enum Phase {
    /// No `c`-sized move yet: running min and max of `f`.
    Undecided { lo: f64, hi: f64 },
    /// After `T_U,k`: running max `M_k(s)`.
    Up { max: f64 },
    /// After `T_D,k`: running min `m_{k+1}(s)`.
    Down { min: f64 },
}

/// Streaming truncated-variation accumulator.
///
/// Feed samples in time order with [`push`](Self::push); the current
/// cumulative values are available after every step in `O(1)`.
#[derive(Debug, Clone)]
pub struct TruncVarStream {
    c: f64,
    orientation: Orientation,
    phase: Phase,
    /// `m_k` while going up, `M_k` while going down (oriented frame).
    anchor: f64,
    utv_done: f64,
    dtv_done: f64,
    /// Completed up and down crossings, oriented frame.
    crossings: (usize, usize),
    index: usize,
    record: Option<CrossingDecomposition>,
}

impl TruncVarStream {
    pub fn new(c: Threshold) -> Result<Self> {
        let c = Threshold::positive(c.get())?.get();
        Ok(Self {
            c,
            orientation: Orientation::Direct,
            phase: Phase::Undecided {
                lo: f64::INFINITY,
                hi: f64::NEG_INFINITY,
            },
            anchor: 0.0,
            utv_done: 0.0,
            dtv_done: 0.0,
            crossings: (0, 0),
            index: 0,
            record: None,
        })
    }

    /// Like [`new`](Self::new) but also records the crossing decomposition.
    pub fn recording(c: Threshold) -> Result<Self> {
        let mut s = Self::new(c)?;
        s.record = Some(CrossingDecomposition {
            orientation: Orientation::Direct,
            up_times: Vec::new(),
            down_times: Vec::new(),
            up_indices: Vec::new(),
            down_indices: Vec::new(),
            local_mins: Vec::new(),
            local_maxes: Vec::new(),
        });
        Ok(s)
    }

    #[inline]
    pub fn push(&mut self, t: f64, v: f64) {
        let c = self.c;
        match self.phase {
            Phase::Undecided { lo, hi } => {
                let lo = lo.min(v);
                let hi = hi.max(v);
                if v - lo >= c {
                    self.orientation = Orientation::Direct;
                    self.start_up(t, lo, v);
                } else if hi - v >= c {
                    self.orientation = Orientation::Negated;
                    self.start_up(t, -hi, -v);
                } else {
                    self.phase = Phase::Undecided { lo, hi };
                }
            }
            Phase::Up { max } => {
                let g = self.orientation.sign() * v;
                if g > max {
                    self.phase = Phase::Up { max: g };
                } else if max - g >= c {
                    self.utv_done += max - self.anchor - c;
                    self.anchor = max;
                    self.phase = Phase::Down { min: g };
                    self.crossings.1 += 1;
                    if let Some(r) = self.record.as_mut() {
                        r.down_times.push(t);
                        r.down_indices.push(self.index);
                        r.local_maxes.push(max);
                    }
                }
            }
            Phase::Down { min } => {
                let g = self.orientation.sign() * v;
                if g < min {
                    self.phase = Phase::Down { min: g };
                } else if g - min >= c {
                    self.dtv_done += self.anchor - min - c;
                    self.anchor = min;
                    self.phase = Phase::Up { max: g };
                    self.crossings.0 += 1;
                    if let Some(r) = self.record.as_mut() {
                        r.up_times.push(t);
                        r.up_indices.push(self.index);
                        r.local_mins.push(min);
                    }
                }
            }
        }
        self.index += 1;
    }

    fn start_up(&mut self, t: f64, m0: f64, g: f64) {
        self.anchor = m0;
        self.phase = Phase::Up { max: g };
        self.crossings.0 += 1;
        if let Some(r) = self.record.as_mut() {
            r.orientation = self.orientation;
            r.up_times.push(t);
            r.up_indices.push(self.index);
            r.local_mins.push(m0);
        }
    }

    /// Current `(UTV, DTV)` of the original (un-negated) path.
    #[inline]
    pub fn current(&self) -> (f64, f64) {
        let (u, d) = match self.phase {
            Phase::Undecided { .. } => (0.0, 0.0),
            Phase::Up { max } => (self.utv_done + (max - self.anchor - self.c), self.dtv_done),
            Phase::Down { min } => (self.utv_done, self.dtv_done + (self.anchor - min - self.c)),
        };
        match self.orientation {
            Orientation::Direct => (u, d),
            Orientation::Negated => (d, u),
        }
    }

    pub fn totals(&self) -> TruncVarTotals {
        let (utv, dtv) = self.current();
        TruncVarTotals {
            utv,
            dtv,
            tv: utv + dtv,
        }
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// Number of completed `(upward, downward)` crossings of the original
    /// path so far, i.e. how many `T_U,k` and `T_D,k` have been passed.
    pub fn crossing_counts(&self) -> (usize, usize) {
        match self.orientation {
            Orientation::Direct => self.crossings,
            Orientation::Negated => (self.crossings.1, self.crossings.0),
        }
    }

    /// Number of samples pushed so far.
    pub fn samples_seen(&self) -> usize {
        self.index
    }

    /// The recorded decomposition, if this stream was created with
    /// [`recording`](Self::recording).
    pub fn into_decomposition(self) -> Option<CrossingDecomposition> {
        self.record
    }
}

/// Crossing times `T_U,k`, `T_D,k` and local extrema `m_k`, `M_k`.
pub fn decompose(p: &SamplePath, c: Threshold) -> Result<CrossingDecomposition> {
    let mut s = TruncVarStream::recording(c)?;
    for (&t, &v) in p.times().iter().zip(p.values()) {
        s.push(t, v);
    }
    Ok(s.into_decomposition().expect("recording stream"))
}

/// Cumulative UTV^c, DTV^c, TV^c at every sample time.
pub fn truncvar_curve(p: &SamplePath, c: Threshold) -> Result<TruncVarCurve> {
    let mut s = TruncVarStream::new(c)?;
    let n = p.len();
    let mut utv = Vec::with_capacity(n);
    let mut dtv = Vec::with_capacity(n);
    let mut tv = Vec::with_capacity(n);
    for (&t, &v) in p.times().iter().zip(p.values()) {
        s.push(t, v);
        let (u, d) = s.current();
        utv.push(u);
        dtv.push(d);
        tv.push(u + d);
    }
    Ok(TruncVarCurve {
        times: p.times().to_vec(),
        utv,
        dtv,
        tv,
    })
}

/// Totals over the whole path in `O(n)` time and `O(1)` space.
pub fn truncvar_total(p: &SamplePath, c: Threshold) -> Result<TruncVarTotals> {
    let mut s = TruncVarStream::new(c)?;
    for (&t, &v) in p.times().iter().zip(p.values()) {
        s.push(t, v);
    }
    Ok(s.totals())
}

/// The lazy tube functions `g0 = f(a) + UTV - DTV` and `g = alpha0 + g0`.
pub fn tube_functions(p: &SamplePath, c: Threshold) -> Result<LazyTube> {
    let curve = truncvar_curve(p, c)?;
    let fa = p.first_value();
    let g0: Vec<f64> = curve
        .utv
        .iter()
        .zip(&curve.dtv)
        .map(|(u, d)| fa + u - d)
        .collect();
    let (lo, hi) = g0
        .iter()
        .zip(p.values())
        .map(|(g, f)| g - f)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| {
            (lo.min(x), hi.max(x))
        });
    // -inf(g0 - f) - osc(g0 - f) / 2
    let alpha0 = -lo - 0.5 * (hi - lo);
    let g = g0.iter().map(|x| alpha0 + x).collect();
    Ok(LazyTube { g0, g, alpha0 })
}

impl LazyTube {
    /// `sup |g0 - f|`.
    pub fn g0_sup_distance(&self, p: &SamplePath) -> f64 {
        sup_distance(&self.g0, p.values())
    }

    /// `sup |g - f|`.
    pub fn g_sup_distance(&self, p: &SamplePath) -> f64 {
        sup_distance(&self.g, p.values())
    }

    /// Oscillation of `g0 - f`.
    pub fn g0_oscillation(&self, p: &SamplePath) -> f64 {
        let (lo, hi) = self
            .g0
            .iter()
            .zip(p.values())
            .map(|(g, f)| g - f)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| {
                (lo.min(x), hi.max(x))
            });
        hi - lo
    }

    pub fn g0_total_variation(&self) -> f64 {
        total_variation_of(&self.g0)
    }

    pub fn g_total_variation(&self) -> f64 {
        total_variation_of(&self.g)
    }
}

fn sup_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
