//! Closed-form constants for Brownian motion with drift `X_t = W_t + mu t`
//! observed through truncated variation at threshold `c`.
//!
//! Every formula is a function of `x = c * mu` that is singular-looking but
//! analytic at `mu = 0`. For `|c mu| < SERIES_CUTOFF` the functions switch to
//! Taylor polynomials through order `x^8`; at the cutoff both branches agree to
//! better than `1e-10` relative.
//!
//! Renewal quantities refer to the cycles between successive up-crossing times
//! `T_U,i`: the duration `D_i`, the TV increment `G_i` and the signed increment
//! `H_i` (UTV increment minus DTV increment), with `Z_i = a G_i + b H_i`.

use crate::error::{Error, Result};

/// Below this `|c mu|` the series branches are used.
pub const SERIES_CUTOFF: f64 = 1e-2;

fn check_c(c: f64) -> Result<()> {
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::InvalidThreshold(c, "must be finite and positive"));
    }
    Ok(())
}

fn check_finite(name: &str, v: f64) -> Result<()> {
    if !v.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "{name} must be finite, got {v}"
        )));
    }
    Ok(())
}

fn poly(x: f64, coeffs: &[f64]) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &k| acc * x + k)
}

/// `x coth x`.
fn x_coth_x(x: f64) -> f64 {
    if x.abs() < SERIES_CUTOFF {
        let x2 = x * x;
        poly(
            x2,
            &[1.0, 1.0 / 3.0, -1.0 / 45.0, 2.0 / 945.0, -1.0 / 4725.0],
        )
    } else {
        x / x.tanh()
    }
}

/// `sinh(x) / x`.
fn sinhc(x: f64) -> f64 {
    if x.abs() < SERIES_CUTOFF {
        let x2 = x * x;
        poly(
            x2,
            &[1.0, 1.0 / 6.0, 1.0 / 120.0, 1.0 / 5040.0, 1.0 / 362880.0],
        )
    } else {
        x.sinh() / x
    }
}

/// `(e^{2x} - 1) / (2x)`.
fn expm1c(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        (2.0 * x).exp_m1() / (2.0 * x)
    }
}

/// Large-time TV drift `m = mu coth(c mu)` (`1/c` at `mu = 0`).
pub fn m_mu_c(mu: f64, c: f64) -> Result<f64> {
    check_c(c)?;
    check_finite("mu", mu)?;
    Ok(x_coth_x(c * mu) / c)
}

/// Large-time UTV drift (times two): `n = mu coth(c mu) + mu`.
pub fn n_mu_c(mu: f64, c: f64) -> Result<f64> {
    Ok(m_mu_c(mu, c)? + mu)
}

/// Variance rate `sigma^2` of the large-time TV fluctuation.
pub fn sigma2_mu_c(mu: f64, c: f64) -> Result<f64> {
    check_c(c)?;
    check_finite("mu", mu)?;
    let x = c * mu;
    if x.abs() < SERIES_CUTOFF {
        let x2 = x * x;
        return Ok(poly(
            x2,
            &[
                1.0 / 3.0,
                4.0 / 15.0,
                -4.0 / 63.0,
                8.0 / 675.0,
                -4.0 / 2079.0,
            ],
        ));
    }
    let s = x.sinh();
    Ok((2.0 - 2.0 * x_coth_x(x)) / (s * s) + 1.0)
}

/// Variance rate `rho^2` of the large-time UTV fluctuation.
///
/// Not even in `mu`. Since `DTV(X) = UTV(-X)` and `-X` has drift `-mu`, the
/// DTV fluctuation variance rate is `rho2_mu_c(-mu, c)`.
pub fn rho2_mu_c(mu: f64, c: f64) -> Result<f64> {
    check_c(c)?;
    check_finite("mu", mu)?;
    let x = c * mu;
    if x.abs() < SERIES_CUTOFF {
        return Ok(poly(
            x,
            &[
                1.0 / 3.0,
                1.0 / 3.0,
                1.0 / 15.0,
                -2.0 / 45.0,
                -1.0 / 63.0,
                2.0 / 315.0,
                2.0 / 675.0,
                -4.0 / 4725.0,
                -1.0 / 2079.0,
            ],
        ));
    }
    let em1 = (2.0 * x).exp_m1();
    Ok(2.0 * (4.0 * x).exp() * ((2.0 * x).sinh() - 2.0 * x) / (em1 * em1 * em1))
}

/// Mean cycle length `E[D_i] = 2 sinh^2(c mu) / mu^2` (`2 c^2` at `mu = 0`).
pub fn mean_renewal_time(mu: f64, c: f64) -> Result<f64> {
    check_c(c)?;
    check_finite("mu", mu)?;
    let s = sinhc(c * mu);
    Ok(2.0 * c * c * s * s)
}

/// Laplace transform `E[exp(-beta D_i)]` of the cycle length.
pub fn laplace_d(beta: f64, mu: f64, c: f64) -> Result<f64> {
    check_c(c)?;
    check_finite("mu", mu)?;
    if !(beta >= 0.0 && beta.is_finite()) {
        return Err(Error::OutOfDomain(format!("beta must be >= 0, got {beta}")));
    }
    if beta == 0.0 {
        return Ok(1.0);
    }
    let d2 = 2.0 * beta + mu * mu;
    let ch = (2.0 * c * d2.sqrt()).cosh();
    Ok(d2 / (beta + mu * mu + beta * ch))
}

/// Which half of a renewal cycle [`laplace_phase`] describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CyclePhase {
    /// `(T_D,i - T_U,i, M_i - m_i - c)`: the rise.
    Up,
    /// `(T_U,i+1 - T_D,i, M_i - m_{i+1} - c)`: the fall; same law as the rise
    /// with drift `-mu`.
    Down,
}

/// Joint transform `E[exp(alpha * increment - beta * duration)]` of one phase
/// of a renewal cycle, where the increment is the phase's contribution to UTV
/// (up) or DTV (down).
///
/// Valid for `beta > 0`, or `beta = 0` with `mu != 0`, and
/// `alpha < delta coth(delta c) -+ mu` with `delta = sqrt(mu^2 + 2 beta)`.
pub fn laplace_phase(alpha: f64, beta: f64, mu: f64, c: f64, phase: CyclePhase) -> Result<f64> {
    check_c(c)?;
    check_finite("mu", mu)?;
    check_finite("alpha", alpha)?;
    if !(beta >= 0.0 && beta.is_finite()) {
        return Err(Error::OutOfDomain(format!("beta must be >= 0, got {beta}")));
    }
    let m = match phase {
        CyclePhase::Up => mu,
        CyclePhase::Down => -mu,
    };
    let delta = (m * m + 2.0 * beta).sqrt();
    // delta e^{-m c} / (delta cosh(delta c) - (alpha + m) sinh(delta c)), divided through by delta
    let denom = (delta * c).cosh() - (alpha + m) * c * sinhc(delta * c);
    if denom <= 0.0 {
        return Err(Error::OutOfDomain(format!(
            "alpha = {alpha} outside the validity domain for beta = {beta}, mu = {mu}, c = {c}"
        )));
    }
    Ok((-m * c).exp() / denom)
}

/// Moment generating function `E[exp(alpha Z_i)]` of `Z_i = a G_i + b H_i`.
///
/// Written as the product of the two independent phase transforms at
/// `beta = 0`. Rejects `alpha` for which either factor is non-positive.
/// At `mu = 0` the continuous limit is returned.
pub fn laplace_z(alpha: f64, a: f64, b: f64, mu: f64, c: f64) -> Result<f64> {
    check_c(c)?;
    for (name, v) in [("alpha", alpha), ("a", a), ("b", b), ("mu", mu)] {
        check_finite(name, v)?;
    }
    let x = c * mu;
    // (a+b) weights the rise, (a-b) the fall.
    let up = 1.0 - (a + b) * alpha * c * expm1c(x);
    let down = 1.0 - (a - b) * alpha * c * expm1c(-x);
    if up <= 0.0 || down <= 0.0 {
        return Err(Error::OutOfDomain(format!(
            "alpha = {alpha} outside the validity domain for a = {a}, b = {b}, mu = {mu}, c = {c}"
        )));
    }
    Ok(1.0 / (up * down))
}

/// `E[Z_i] = 2 sinh(c mu)(a cosh(c mu) + b sinh(c mu)) / mu` (`2 a c` at `mu = 0`).
pub fn mean_z(a: f64, b: f64, mu: f64, c: f64) -> Result<f64> {
    check_c(c)?;
    check_finite("mu", mu)?;
    let x = c * mu;
    Ok(2.0 * c * sinhc(x) * (a * x.cosh() + b * x.sinh()))
}

/// `E[Z_i] / E[D_i] = mu (b + a coth(c mu))`.
pub fn drift_ratio(a: f64, b: f64, mu: f64, c: f64) -> Result<f64> {
    check_c(c)?;
    check_finite("mu", mu)?;
    Ok(b * mu + a * x_coth_x(c * mu) / c)
}

/// `E[X_i^2]` for the centred cycle variable `X_i = Z_i - (E Z / E D) D_i`.
pub fn centered_second_moment(a: f64, b: f64, mu: f64, c: f64) -> Result<f64> {
    check_c(c)?;
    check_finite("mu", mu)?;
    let x = c * mu;
    if x.abs() < SERIES_CUTOFF {
        let aa = poly(
            x * x,
            &[
                2.0 / 3.0,
                34.0 / 45.0,
                76.0 / 945.0,
                34.0 / 4725.0,
                92.0 / 467775.0,
            ],
        );
        let ab = x * poly(x * x, &[8.0 / 3.0, 8.0 / 15.0, 16.0 / 315.0, 8.0 / 2835.0]);
        let bb = poly(
            x * x,
            &[2.0, 2.0 / 3.0, 4.0 / 45.0, 2.0 / 315.0, 4.0 / 14175.0],
        );
        return Ok(c * c * (a * a * aa + a * b * ab + b * b * bb));
    }
    Ok(centered_numerator(a, b, x) / (mu * mu))
}

/// `E[X_i^2] / E[D_i]`; equals `sigma2_mu_c` at `(a, b) = (1, 0)` and tends to
/// `a^2/3 + b^2` as `c mu -> 0`.
pub fn centered_second_moment_rate(a: f64, b: f64, mu: f64, c: f64) -> Result<f64> {
    check_c(c)?;
    check_finite("mu", mu)?;
    let x = c * mu;
    if x.abs() < SERIES_CUTOFF {
        let aa = poly(
            x * x,
            &[
                1.0 / 3.0,
                4.0 / 15.0,
                -4.0 / 63.0,
                8.0 / 675.0,
                -4.0 / 2079.0,
            ],
        );
        let ab = x * poly(
            x * x,
            &[4.0 / 3.0, -8.0 / 45.0, 8.0 / 315.0, -16.0 / 4725.0],
        );
        return Ok(a * a * aa + a * b * ab + b * b);
    }
    let s = x.sinh();
    Ok(0.5 * centered_numerator(a, b, x) / (s * s))
}

fn centered_numerator(a: f64, b: f64, x: f64) -> f64 {
    3.0 * a * a - b * b - 4.0 * a * b * x + (a * a + b * b) * (2.0 * x).cosh()
        - 4.0 * a * a * x_coth_x(x)
        + 2.0 * a * b * (2.0 * x).sinh()
}

/// Per-unit-time variance of the centred TV cycle variable,
/// `(3 + cosh(2 c mu) - 4 c mu coth(c mu)) / mu^2` (`2 c^2 / 3` at `mu = 0`).
pub fn var_large_time_tv(mu: f64, c: f64) -> Result<f64> {
    centered_second_moment(1.0, 0.0, mu, c)
}
