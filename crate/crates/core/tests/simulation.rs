use truncvar_core::experiments::stats::summary_stats;
use truncvar_core::simulate::{
    quadratic_variation_grid, sample_bm_drift, sample_diffusion_euler, sample_path, DiffusionSpec,
    GridSpec, RngSeed,
};

const N: usize = 10_000;

fn endpoints(spec: DiffusionSpec, grid: GridSpec) -> Vec<f64> {
    let seed = RngSeed::new(99);
    (0..N as u64)
        .map(|i| sample_path(spec, grid, &seed, i).unwrap().last_value())
        .collect()
}

#[test]
fn brownian_moments_at_one() {
    let grid = GridSpec::new(1.0, 0.01).unwrap();
    let s = summary_stats(&endpoints(DiffusionSpec::BmDrift { mu: 0.0 }, grid)).unwrap();
    assert!(s.mean.abs() < 4.0 / (N as f64).sqrt(), "{s:?}");
    assert!((s.variance - 1.0).abs() < 0.1, "{s:?}");

    let s = summary_stats(&endpoints(DiffusionSpec::BmDrift { mu: 2.0 }, grid)).unwrap();
    assert!((s.mean - 2.0).abs() < 4.0 * s.mean_se, "{s:?}");
}

#[test]
fn ornstein_uhlenbeck_variance() {
    let grid = GridSpec::new(1.0, 1e-3).unwrap();
    let spec = DiffusionSpec::Ou {
        theta: 1.0,
        mean: 0.0,
    };
    let s = summary_stats(&endpoints(spec, grid)).unwrap();
    let target = (1.0 - (-2.0f64).exp()) / 2.0;
    assert!((s.variance - target).abs() < 0.1 * target, "{s:?}");
}

#[test]
fn bounded_sine_increments_are_bounded_by_sigma_max() {
    let spec = DiffusionSpec::BoundedSine {
        sigma0: 1.0,
        eps: 0.25,
        mu: 0.0,
    };
    let grid = GridSpec::new(1.0, 1e-3).unwrap();
    let p = sample_diffusion_euler(spec, grid, &RngSeed::new(5)).unwrap();
    let bm = sample_bm_drift(0.0, grid, &RngSeed::new(5)).unwrap();
    assert!(p.values().iter().all(|x| x.is_finite()));
    // same normals drive both paths; |sigma| <= 1.25 and no drift
    for (w, b) in p.values().windows(2).zip(bm.values().windows(2)) {
        assert!((w[1] - w[0]).abs() <= 1.25 * (b[1] - b[0]).abs() + 1e-15);
    }
    let qv = quadratic_variation_grid(&spec, &p);
    for (q, t) in qv.qv.iter().zip(&qv.times) {
        assert!(*q >= 0.75 * 0.75 * t - 1e-12 && *q <= 1.25 * 1.25 * t + 1e-12);
    }
}

#[test]
fn rejects_invalid_specs() {
    let grid = GridSpec::new(1.0, 0.1).unwrap();
    let bad = DiffusionSpec::BoundedSine {
        sigma0: 1.0,
        eps: 1.0,
        mu: 0.0,
    };
    assert!(sample_diffusion_euler(bad, grid, &RngSeed::new(0)).is_err());
    assert!(GridSpec::new(0.1, 1.0).is_err());
    assert!(GridSpec::new(1.0, 0.0).is_err());
}
