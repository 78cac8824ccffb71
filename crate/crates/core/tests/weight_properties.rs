use num_complex::Complex64;
use polybesov::experiments::fixture_weights;
use polybesov::weights::{check_condition, eval_weight, ConditionCheck, ConditionGrid, WeightSpec};
use polybesov::Domain;
use proptest::prelude::*;

fn domain() -> impl Strategy<Value = Domain> {
    prop_oneof![Just(Domain::UnitDisk), Just(Domain::UpperHalfPlane)]
}

/// Interior point of `domain` with modulus below 1.
fn interior(domain: Domain) -> impl Strategy<Value = Complex64> {
    let span = match domain {
        Domain::UnitDisk => std::f64::consts::TAU,
        Domain::UpperHalfPlane => std::f64::consts::PI,
    };
    (0.001f64..0.999, 0.001f64..0.999).prop_map(move |(s, t)| Complex64::from_polar(s, t * span))
}

fn small_grid() -> ConditionGrid<f64> {
    ConditionGrid {
        n_r: 16,
        n_z: 256,
        ..Default::default()
    }
}

proptest! {
    #[test]
    fn catalog_weights_are_positive(
        (d, zs) in domain().prop_flat_map(|d| (Just(d), prop::collection::vec(interior(d), 1000)))
    ) {
        for w in fixture_weights::<f64>(d) {
            for &z in &zs {
                let v = eval_weight(&w, d, z).unwrap();
                prop_assert!(v > 0.0 && v.is_finite(), "{w} at {z}: {v}");
            }
        }
    }

    /// `r w(z/r)` increases with `r` for `w = e^{|z|}` and `|z| < r`.
    #[test]
    fn exp_abs_dilation_is_monotone(s in 0.0f64..0.99, a in 0.0f64..1.0, b in 0.0f64..1.0, t in 0.0f64..std::f64::consts::TAU) {
        let lo = s + (1.0 - s) * a.min(b);
        let hi = s + (1.0 - s) * a.max(b);
        prop_assume!(lo > s);
        let z = Complex64::from_polar(s, t);
        let at = |r: f64| r * eval_weight(&WeightSpec::ExpAbs, Domain::UnitDisk, z / r).unwrap();
        prop_assert!(at(lo) <= at(hi) * (1.0 + 1e-15));
    }

    /// Angular weights do not see the modulus.
    #[test]
    fn angular_weights_ignore_modulus(d in domain(), s in 0.01f64..0.99, u in 0.01f64..1.0, alpha in 0.1f64..3.0) {
        let span = match d {
            Domain::UnitDisk => std::f64::consts::TAU,
            Domain::UpperHalfPlane => std::f64::consts::PI,
        };
        let w = WeightSpec::AngularPoly { alpha, theta_max: span };
        let theta = u * span * 0.999;
        let a = eval_weight(&w, d, Complex64::from_polar(s, theta)).unwrap();
        let far = if d == Domain::UnitDisk { 0.99 } else { 50.0 };
        for t in [0.001, 0.5, 0.9, far] {
            let b = eval_weight(&w, d, Complex64::from_polar(t, theta)).unwrap();
            prop_assert!((a - b).abs() <= 4.0 * f64::EPSILON * a, "{a} vs {b}");
        }
    }
}

/// `r^{k+1} <= r^k`, so the grid constant cannot grow with `k`.
#[test]
fn witness_constant_is_monotone_in_k() {
    for d in [Domain::UnitDisk, Domain::UpperHalfPlane] {
        for w in fixture_weights::<f64>(d) {
            let mut prev: Option<f64> = None;
            for k in 0..4 {
                let c = match check_condition(&w, d, k, 0.5, &small_grid()).unwrap() {
                    ConditionCheck::Holds(wit) => wit.c,
                    ConditionCheck::Diverges { .. } => f64::INFINITY,
                };
                if let Some(p) = prev {
                    assert!(c <= p + 1e-12, "{d}/{w}: C_{k} = {c} > C_{} = {p}", k - 1);
                }
                prev = Some(c);
            }
        }
    }
}

#[test]
fn condition_check_is_deterministic() {
    let w = WeightSpec::ExpAbs;
    let a = check_condition(&w, Domain::UnitDisk, 1, 0.5, &ConditionGrid::default()).unwrap();
    let b = check_condition(&w, Domain::UnitDisk, 1, 0.5, &ConditionGrid::default()).unwrap();
    assert_eq!(a, b);
}
