//! Reproducible path generation on uniform grids.
//!
//! Paths solve `dX = sigma(X) dW + mu(X) dt`, `X_0 = 0`, by the Euler–Maruyama
//! recursion `X_{k+1} = X_k + sigma(X_k) dW_k + mu(X_k) dt`. For Brownian motion
//! with drift the recursion is exact at the grid points.
//!
//! Randomness comes from ChaCha8 keyed by the 64-bit seed; path `i` of an
//! ensemble reads ChaCha stream `i`, so paths can be generated independently
//! and in any order. Standard normals use the ziggurat sampler of `rand_distr`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::path::SamplePath;

/// Identifier of the generator and normal transform, recorded in reports.
pub const ALGORITHM_ID: &str = "chacha8-stream+ziggurat-normal/rand_chacha-0.9+rand_distr-0.5";

/// Uniform grid `0, dt, 2 dt, ..., n dt` with `n = ceil(horizon / dt)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub horizon: f64,
    pub dt: f64,
}

impl GridSpec {
    pub fn new(horizon: f64, dt: f64) -> Result<Self> {
        let g = Self { horizon, dt };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.horizon.is_finite() && self.horizon > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "horizon must be positive, got {}",
                self.horizon
            )));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "dt must be positive, got {}",
                self.dt
            )));
        }
        if self.dt > self.horizon {
            return Err(Error::InvalidArgument(format!(
                "dt = {} exceeds horizon = {}",
                self.dt, self.horizon
            )));
        }
        Ok(())
    }

    /// Number of steps after time 0.
    pub fn steps(&self) -> usize {
        let r = self.horizon / self.dt;
        // absorb representation error such as 1 / 0.001 = 1000.0000000000001
        (r * (1.0 - 1e-12)).ceil() as usize
    }

    pub fn time(&self, k: usize) -> f64 {
        k as f64 * self.dt
    }
}

/// Coefficients of a one-dimensional diffusion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum DiffusionSpec {
    /// `sigma = 1`, `mu(x) = mu`.
    BmDrift { mu: f64 },
    /// Ornstein–Uhlenbeck: `sigma = 1`, `mu(x) = theta (mean - x)`.
    Ou { theta: f64, mean: f64 },
    /// `sigma(x) = sigma0 + eps sin(x)`, `mu(x) = mu`; requires `|eps| < sigma0`.
    BoundedSine { sigma0: f64, eps: f64, mu: f64 },
}

impl DiffusionSpec {
    pub fn validate(&self) -> Result<()> {
        let finite = |name: &str, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidArgument(format!(
                    "{name} must be finite, got {v}"
                )))
            }
        };
        match *self {
            DiffusionSpec::BmDrift { mu } => finite("mu", mu),
            DiffusionSpec::Ou { theta, mean } => {
                finite("theta", theta)?;
                finite("mean", mean)
            }
            DiffusionSpec::BoundedSine { sigma0, eps, mu } => {
                finite("sigma0", sigma0)?;
                finite("eps", eps)?;
                finite("mu", mu)?;
                if sigma0 <= 0.0 {
                    return Err(Error::InvalidArgument(format!(
                        "bounded_sine needs sigma0 > 0, got {sigma0}"
                    )));
                }
                if eps.abs() >= sigma0 {
                    return Err(Error::InvalidArgument(format!(
                        "bounded_sine needs |eps| < sigma0 so that sigma stays positive \
                         (eps = {eps}, sigma0 = {sigma0})"
                    )));
                }
                Ok(())
            }
        }
    }

    #[inline]
    pub fn sigma(&self, x: f64) -> f64 {
        match *self {
            DiffusionSpec::BmDrift { .. } | DiffusionSpec::Ou { .. } => 1.0,
            DiffusionSpec::BoundedSine { sigma0, eps, .. } => sigma0 + eps * x.sin(),
        }
    }

    #[inline]
    pub fn drift(&self, x: f64) -> f64 {
        match *self {
            DiffusionSpec::BmDrift { mu } | DiffusionSpec::BoundedSine { mu, .. } => mu,
            DiffusionSpec::Ou { theta, mean } => theta * (mean - x),
        }
    }

    /// `Some(sigma)` when the diffusion coefficient does not depend on `x`.
    pub fn constant_sigma(&self) -> Option<f64> {
        match *self {
            DiffusionSpec::BmDrift { .. } | DiffusionSpec::Ou { .. } => Some(1.0),
            DiffusionSpec::BoundedSine {
                eps: 0.0, sigma0, ..
            } => Some(sigma0),
            DiffusionSpec::BoundedSine { .. } => None,
        }
    }

    /// `(inf sigma, sup sigma)` over the real line.
    pub fn sigma_bounds(&self) -> (f64, f64) {
        match *self {
            DiffusionSpec::BmDrift { .. } | DiffusionSpec::Ou { .. } => (1.0, 1.0),
            DiffusionSpec::BoundedSine { sigma0, eps, .. } => {
                (sigma0 - eps.abs(), sigma0 + eps.abs())
            }
        }
    }

    pub fn family_name(&self) -> &'static str {
        match self {
            DiffusionSpec::BmDrift { .. } => "bm_drift",
            DiffusionSpec::Ou { .. } => "ou",
            DiffusionSpec::BoundedSine { .. } => "bounded_sine",
        }
    }
}

/// Seed plus the identifier of the algorithm that consumes it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RngSeed {
    pub seed: u64,
    /// Defaults to [`ALGORITHM_ID`] when omitted from a config document.
    #[serde(default = "default_algorithm_id")]
    pub algorithm_id: String,
}

fn default_algorithm_id() -> String {
    ALGORITHM_ID.to_string()
}

impl RngSeed {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            algorithm_id: ALGORITHM_ID.to_string(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.algorithm_id != ALGORITHM_ID {
            return Err(Error::InvalidArgument(format!(
                "unsupported algorithm_id {:?}; this build provides {ALGORITHM_ID:?}",
                self.algorithm_id
            )));
        }
        Ok(())
    }

    /// Generator for path `index` of an ensemble.
    pub fn rng_for(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        rng
    }
}

/// Lazily generated Euler–Maruyama path, yielding `(t_k, X_k)`
/// for `k = 0..=n`.
pub struct EulerSteps<R> {
    spec: DiffusionSpec,
    grid: GridSpec,
    sqrt_dt: f64,
    rng: R,
    k: usize,
    n: usize,
    x: f64,
}

impl<R: Rng> EulerSteps<R> {
    pub fn new(spec: DiffusionSpec, grid: GridSpec, rng: R) -> Result<Self> {
        spec.validate()?;
        grid.validate()?;
        Ok(Self {
            spec,
            grid,
            sqrt_dt: grid.dt.sqrt(),
            rng,
            k: 0,
            n: grid.steps(),
            x: 0.0,
        })
    }
}

impl<R: Rng> Iterator for EulerSteps<R> {
    type Item = (f64, f64);

    #[inline]
    fn next(&mut self) -> Option<(f64, f64)> {
        if self.k > self.n {
            return None;
        }
        let out = (self.grid.time(self.k), self.x);
        if self.k < self.n {
            let z: f64 = self.rng.sample(StandardNormal);
            let dw = self.sqrt_dt * z;
            let x = self.x;
            self.x = x + self.spec.sigma(x) * dw + self.spec.drift(x) * self.grid.dt;
        }
        self.k += 1;
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let rem = (self.n + 1).saturating_sub(self.k);
        (rem, Some(rem))
    }
}

/// Path `index` of an ensemble (stream `index` of the seed).
pub fn sample_path(
    spec: DiffusionSpec,
    grid: GridSpec,
    seed: &RngSeed,
    index: u64,
) -> Result<SamplePath> {
    let steps = EulerSteps::new(spec, grid, seed.rng_for(index))?;
    let (times, values): (Vec<f64>, Vec<f64>) = steps.unzip();
    Ok(SamplePath::from_parts_unchecked(times, values))
}

/// Brownian motion with drift `X_t = W_t + mu t` on the grid.
pub fn sample_bm_drift(mu: f64, grid: GridSpec, seed: &RngSeed) -> Result<SamplePath> {
    if !mu.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "mu must be finite, got {mu}"
        )));
    }
    grid.validate()?;
    let n = grid.steps();
    let sqrt_dt = grid.dt.sqrt();
    let mut rng = seed.rng_for(0);
    let mut times = Vec::with_capacity(n + 1);
    let mut values = Vec::with_capacity(n + 1);
    let mut x = 0.0f64;
    for k in 0..=n {
        times.push(grid.time(k));
        values.push(x);
        if k < n {
            let z: f64 = rng.sample(StandardNormal);
            x = x + sqrt_dt * z + mu * grid.dt;
        }
    }
    Ok(SamplePath::from_parts_unchecked(times, values))
}

/// Euler–Maruyama path of `spec` on the grid.
pub fn sample_diffusion_euler(
    spec: DiffusionSpec,
    grid: GridSpec,
    seed: &RngSeed,
) -> Result<SamplePath> {
    sample_path(spec, grid, seed, 0)
}

/// Left-Riemann quadratic variation `<X>_{t_k} = sum_{j<k} sigma(X_{t_j})^2 (t_{j+1} - t_j)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadraticVariationCurve {
    pub times: Vec<f64>,
    pub qv: Vec<f64>,
}

/// Quadratic-variation clock of a path generated under `spec`.
pub fn quadratic_variation_grid(spec: &DiffusionSpec, p: &SamplePath) -> QuadraticVariationCurve {
    let mut clock = QvClock::new(spec);
    let qv = p
        .times()
        .iter()
        .zip(p.values())
        .map(|(&t, &x)| clock.advance(t, x))
        .collect();
    QuadraticVariationCurve {
        times: p.times().to_vec(),
        qv,
    }
}

/// Streaming form of [`quadratic_variation_grid`]: feed `(t_k, X_k)` in order,
/// get `<X>_{t_k}` back.
#[derive(Debug, Clone)]
pub struct QvClock {
    spec: DiffusionSpec,
    constant: Option<f64>,
    start: Option<f64>,
    prev: (f64, f64),
    acc: f64,
}

impl QvClock {
    pub fn new(spec: &DiffusionSpec) -> Self {
        Self {
            spec: *spec,
            constant: spec.constant_sigma(),
            start: None,
            prev: (0.0, 0.0),
            acc: 0.0,
        }
    }

    #[inline]
    pub fn advance(&mut self, t: f64, x: f64) -> f64 {
        let t0 = *self.start.get_or_insert(t);
        let out = match self.constant {
            // exact, so that sigma = 1 gives <X>_t = t on the grid
            Some(s) => s * s * (t - t0),
            None => {
                if t != t0 {
                    let s = self.spec.sigma(self.prev.1);
                    self.acc += s * s * (t - self.prev.0);
                }
                self.acc
            }
        };
        self.prev = (t, x);
        out
    }
}
