use proptest::prelude::*;

use truncvar_core::{
    brute_force_curves, brute_force_dtv, brute_force_tv, brute_force_utv, decompose,
    truncvar_curve, truncvar_total, tube_functions, Orientation, SamplePath, Threshold,
};

fn th(c: f64) -> Threshold {
    Threshold::positive(c).unwrap()
}

fn values() -> impl Strategy<Value = Vec<f64>> {
    prop_oneof![
        prop::collection::vec(-3.0f64..3.0, 1..32),
        // small lattice: lots of exact ties and exact c-sized moves
        prop::collection::vec((-4i32..=4).prop_map(|k| k as f64 * 0.25), 1..32),
    ]
}

fn threshold() -> impl Strategy<Value = f64> {
    prop_oneof![0.01f64..2.5, Just(0.25), Just(0.5), Just(1.0)]
}

fn path(v: Vec<f64>) -> SamplePath {
    SamplePath::from_values(v).unwrap()
}

proptest! {
    #[test]
    fn stream_matches_oracle_on_every_prefix(v in values(), c in threshold()) {
        let p = path(v);
        let fast = truncvar_curve(&p, th(c)).unwrap();
        let slow = brute_force_curves(&p, th(c));
        for k in 0..p.len() {
            prop_assert!((fast.utv[k] - slow.utv[k]).abs() <= 1e-9);
            prop_assert!((fast.dtv[k] - slow.dtv[k]).abs() <= 1e-9);
            prop_assert!((fast.tv[k] - slow.tv[k]).abs() <= 1e-9);
        }
    }

    #[test]
    fn tv_splits_and_negation_swaps(v in values(), c in threshold()) {
        let p = path(v);
        let t = truncvar_total(&p, th(c)).unwrap();
        let n = truncvar_total(&p.negate(), th(c)).unwrap();
        prop_assert!((t.tv - t.utv - t.dtv).abs() <= 1e-12);
        prop_assert!((t.dtv - n.utv).abs() <= 1e-12);
        prop_assert!((t.utv - n.dtv).abs() <= 1e-12);
        let o = brute_force_tv(&p, th(c));
        prop_assert!((o - brute_force_utv(&p, th(c)) - brute_force_dtv(&p, th(c))).abs() <= 1e-9);
    }

    #[test]
    fn curves_are_nondecreasing(v in values(), c in threshold()) {
        let p = path(v);
        let curve = truncvar_curve(&p, th(c)).unwrap();
        for w in curve.tv.windows(2) {
            prop_assert!(w[1] >= w[0]);
        }
        for w in curve.utv.windows(2).chain(curve.dtv.windows(2)) {
            prop_assert!(w[1] >= w[0]);
        }
    }

    #[test]
    fn nonincreasing_in_c(v in values(), c in 0.01f64..2.0, dc in 0.0f64..1.0) {
        let p = path(v);
        let a = truncvar_total(&p, th(c)).unwrap();
        let b = truncvar_total(&p, th(c + dc)).unwrap();
        prop_assert!(b.tv <= a.tv + 1e-12);
        prop_assert!(b.utv <= a.utv + 1e-12);
        prop_assert!(b.dtv <= a.dtv + 1e-12);
    }

    #[test]
    fn tube_invariants(v in values(), c in threshold()) {
        let p = path(v);
        let tube = tube_functions(&p, th(c)).unwrap();
        let tv = truncvar_total(&p, th(c)).unwrap().tv;
        prop_assert!((tube.g0_total_variation() - tv).abs() <= 1e-9);
        prop_assert!((tube.g_total_variation() - tv).abs() <= 1e-9);
        prop_assert!(tube.g0_sup_distance(&p) <= c + 1e-12);
        prop_assert!(tube.g0_oscillation(&p) <= c + 1e-12);
        prop_assert!(tube.g_sup_distance(&p) <= c / 2.0 + 1e-12);
        prop_assert_eq!(tube.g0[0], p.first_value());
    }

    #[test]
    fn decomposition_alternates(v in values(), c in threshold()) {
        let p = path(v);
        let d = decompose(&p, th(c)).unwrap();
        let (u, dn) = (&d.up_indices, &d.down_indices);
        // T_U,1 < T_D,1 < T_U,2 < ...
        prop_assert!(u.len() == dn.len() || u.len() == dn.len() + 1);
        for k in 0..dn.len() {
            prop_assert!(u[k] < dn[k]);
            if k + 1 < u.len() {
                prop_assert!(dn[k] < u[k + 1]);
            }
        }
        prop_assert_eq!(d.local_mins.len(), u.len());
        prop_assert_eq!(d.local_maxes.len(), dn.len());
        for k in 0..d.local_maxes.len() {
            prop_assert!(d.local_maxes[k] - d.local_mins[k] >= c);
            if k + 1 < d.local_mins.len() {
                prop_assert!(d.local_maxes[k] - d.local_mins[k + 1] >= c);
            }
        }
        let t: Vec<f64> = u.iter().map(|&i| p.times()[i]).collect();
        prop_assert_eq!(&t, &d.up_times);
        let s = if d.orientation == Orientation::Direct { 1.0 } else { -1.0 };
        // the crossing sample completes a move of at least c from m_k
        for (k, &i) in u.iter().enumerate() {
            prop_assert!(s * p.values()[i] - d.local_mins[k] >= c);
        }
    }

    #[test]
    fn time_change_and_shift_invariance(v in values(), c in threshold(), shift in -5.0f64..5.0) {
        let p = path(v.clone());
        let t = truncvar_total(&p, th(c)).unwrap();
        let warped = p.time_change_with(|s| (0.3 * s).exp()).unwrap();
        prop_assert_eq!(truncvar_total(&warped, th(c)).unwrap(), t);
        let moved = path(v.iter().map(|x| x + shift).collect());
        let m = truncvar_total(&moved, th(c)).unwrap();
        prop_assert!((m.tv - t.tv).abs() <= 1e-9);
    }

    #[test]
    fn interval_additivity(v in values(), c in threshold(), split in 0usize..32) {
        let p = path(v);
        let n = p.len();
        let k = split % n;
        let whole = truncvar_total(&p, th(c)).unwrap();
        let l = truncvar_total(&p.slice(0, k + 1), th(c)).unwrap();
        let r = truncvar_total(&p.slice(k, n), th(c)).unwrap();
        prop_assert!(l.tv + r.tv <= whole.tv + 1e-9);
        prop_assert!(whole.tv <= l.tv + r.tv + c + 1e-9);
        prop_assert!(l.utv + r.utv <= whole.utv + 1e-9);
        prop_assert!(whole.utv <= l.utv + r.utv + c + 1e-9);
    }

    #[test]
    fn path_serde_round_trip(v in values()) {
        let p = path(v);
        let json = serde_json::to_string(&p).unwrap();
        let back: SamplePath = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, p);
    }
}
