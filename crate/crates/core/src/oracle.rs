//! Quadratic-time dynamic programs evaluating TV^c, UTV^c and DTV^c straight
//! from their partition definitions. These are the reference oracles for the
//! streaming engine in [`crate::truncvar`]; they accept `c = 0`.

use crate::path::{SamplePath, Threshold};

/// Cumulative oracle values at every sample index.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleCurves {
    pub utv: Vec<f64>,
    pub dtv: Vec<f64>,
    pub tv: Vec<f64>,
}

/// Supremum over index subsequences of `sum phi_c(|v[j+1] - v[j]|)`.
pub fn brute_force_tv(p: &SamplePath, c: Threshold) -> f64 {
    tv_prefix(p.values(), c).last().copied().unwrap_or(0.0)
}

/// Supremum over disjoint ordered pairs `t_1 < s_1 < t_2 < ...` of
/// `sum phi_c(v[s_i] - v[t_i])`.
pub fn brute_force_utv(p: &SamplePath, c: Threshold) -> f64 {
    utv_prefix(p.values(), c).last().copied().unwrap_or(0.0)
}

/// `DTV^c(f) = UTV^c(-f)`.
pub fn brute_force_dtv(p: &SamplePath, c: Threshold) -> f64 {
    brute_force_utv(&p.negate(), c)
}

/// Oracle values for every prefix `[a; t_i]` of the path, in `O(n^2)`.
pub fn brute_force_curves(p: &SamplePath, c: Threshold) -> OracleCurves {
    let neg: Vec<f64> = p.values().iter().map(|v| -v).collect();
    OracleCurves {
        utv: utv_prefix(p.values(), c),
        dtv: utv_prefix(&neg, c),
        tv: tv_prefix(p.values(), c),
    }
}

// best[i]: optimal sum over subsequences ending at i; the prefix value is the
// running maximum of best.
fn tv_prefix(v: &[f64], c: Threshold) -> Vec<f64> {
    let n = v.len();
    let mut best = vec![0.0; n];
    let mut out = vec![0.0; n];
    let mut running = 0.0f64;
    for i in 0..n {
        let mut b = 0.0f64;
        for j in 0..i {
            b = b.max(best[j] + c.truncate((v[i] - v[j]).abs()));
        }
        best[i] = b;
        running = running.max(b);
        out[i] = running;
    }
    out
}

// a[i]: optimal sum over pair sets whose last index is <= i.
fn utv_prefix(v: &[f64], c: Threshold) -> Vec<f64> {
    let n = v.len();
    let mut a = vec![0.0; n];
    for i in 0..n {
        let mut b: f64 = if i > 0 { a[i - 1] } else { 0.0 };
        for j in 0..i {
            let before = if j > 0 { a[j - 1] } else { 0.0 };
            b = b.max(before + c.truncate(v[i] - v[j]));
        }
        a[i] = b;
    }
    a
}
