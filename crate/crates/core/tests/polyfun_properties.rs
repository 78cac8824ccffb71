use num_complex::{Complex, Complex64};
use num_rational::Ratio;
use polybesov::experiments::corpus_functions;
use polybesov::function_file::{parse_function, write_function};
use polybesov::polyfun::{DilationFactor, PolyFunction};
use proptest::prelude::*;

type Q = Ratio<i64>;

fn poly_f64() -> impl Strategy<Value = PolyFunction<f64>> {
    (1usize..5, 0usize..7).prop_flat_map(|(q, deg)| {
        prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), q * (deg + 1)).prop_map(move |cs| {
            let entries = cs
                .into_iter()
                .enumerate()
                .map(|(i, (re, im))| ((i / (deg + 1), i % (deg + 1)), Complex64::new(re, im)));
            PolyFunction::from_monomials(entries, q).unwrap()
        })
    })
}

fn poly_exact() -> impl Strategy<Value = PolyFunction<Q>> {
    (1usize..4, 0usize..5).prop_flat_map(|(q, deg)| {
        prop::collection::vec((-9i64..10, -9i64..10), q * (deg + 1)).prop_map(move |cs| {
            let entries = cs.into_iter().enumerate().map(|(i, (re, im))| {
                (
                    (i / (deg + 1), i % (deg + 1)),
                    Complex::new(Q::from(re), Q::from(im)),
                )
            });
            PolyFunction::from_monomials(entries, q).unwrap()
        })
    })
}

fn ratio() -> impl Strategy<Value = Q> {
    (1i64..=12, 1i64..=12).prop_map(|(a, b)| Q::new(a.min(b), a.max(b)))
}

fn point() -> impl Strategy<Value = Complex64> {
    (-1.5f64..1.5, -1.5f64..1.5).prop_map(|(x, y)| Complex64::new(x, y))
}

fn rel_close(a: Complex64, b: Complex64, tol: f64, scale: f64) -> bool {
    (a - b).norm() <= tol * scale.max(f64::MIN_POSITIVE)
}

/// Sum of |terms| in a Horner evaluation, used as the rounding scale.
fn magnitude(f: &PolyFunction<f64>, z: Complex64) -> f64 {
    let (zn, zbn) = (z.norm().max(1.0), z.norm().max(1.0));
    f.monomials()
        .map(|(k, j, c)| c.norm() * zbn.powi(k as i32) * zn.powi(j as i32))
        .sum::<f64>()
        .max(1.0)
}

proptest! {
    #[test]
    fn q_fold_antiderivative_vanishes_exactly(f in poly_exact()) {
        let mut g = f.clone();
        for _ in 0..f.q() {
            g = g.d_zbar();
        }
        prop_assert!(g.is_zero());
    }

    #[test]
    fn q_fold_vanishes_in_floating_point(f in poly_f64()) {
        let mut g = f.clone();
        for _ in 0..f.q() {
            g = g.d_zbar();
        }
        prop_assert!(g.components().iter().all(|h| h.coeffs().iter().all(|c| *c == Complex64::new(0.0, 0.0))));
    }

    #[test]
    fn dilation_semigroup_exact(f in poly_exact(), r in ratio(), s in ratio()) {
        let a = f.dilate(&DilationFactor::new(r).unwrap()).dilate(&DilationFactor::new(s).unwrap());
        let b = f.dilate(&DilationFactor::new(r * s).unwrap());
        prop_assert_eq!(a, b);
    }

    #[test]
    fn dilation_semigroup_float(f in poly_f64(), r in 0.05f64..1.0, s in 0.05f64..1.0, z in point()) {
        let a = f.dilate(&DilationFactor::new(r).unwrap()).dilate(&DilationFactor::new(s).unwrap());
        let b = f.dilate(&DilationFactor::new(r * s).unwrap());
        prop_assert!(rel_close(a.eval(z), b.eval(z), 1e-13, magnitude(&f, z)));
    }

    #[test]
    fn mixed_partials_commute(f in poly_exact()) {
        prop_assert_eq!(f.d_z().d_zbar(), f.d_zbar().d_z());
    }

    #[test]
    fn derivative_dilation_commutation_exact(f in poly_exact(), r in ratio()) {
        let d = DilationFactor::new(r).unwrap();
        let lhs = f.dilate(&d).d_z();
        let rhs = f.d_z().dilate(&d).scale(&Complex::new(r, Q::from(0)));
        prop_assert_eq!(lhs, rhs);
        let lhs = f.dilate(&d).d_zbar();
        let rhs = f.d_zbar().dilate(&d).scale(&Complex::new(r, Q::from(0)));
        prop_assert!(lhs.same_function(&rhs));
    }

    #[test]
    fn derivative_dilation_commutation_pointwise(
        f in poly_f64(),
        r in 0.05f64..1.0,
        zs in prop::collection::vec(point(), 100),
    ) {
        let d = DilationFactor::new(r).unwrap();
        let lhs = f.dilate(&d).d_z();
        let df = f.d_z();
        for z in zs {
            let want = df.eval(z * r) * r;
            prop_assert!(rel_close(lhs.eval(z), want, 1e-12, magnitude(&df, z)));
        }
    }

    #[test]
    fn evaluation_is_linear(f in poly_f64(), g in poly_f64(), z in point(), a in point()) {
        let combo = f.scale(&a).add(&g);
        let want = a * f.eval(z) + g.eval(z);
        let scale = a.norm().max(1.0) * magnitude(&f, z) + magnitude(&g, z);
        prop_assert!(rel_close(combo.eval(z), want, 1e-13, scale));
    }

    #[test]
    fn difference_with_self_is_zero(f in poly_exact()) {
        prop_assert!(f.sub(&f).is_zero());
    }

    #[test]
    fn truncation_keeps_low_z_degrees(f in poly_exact(), m in 0usize..6) {
        let t = f.truncate(m);
        prop_assert!(t.monomials().all(|(_, j, _)| j <= m));
        for (k, j, c) in f.monomials().filter(|&(_, j, _)| j <= m) {
            prop_assert_eq!(t.component(k).unwrap().coeff(j), *c);
        }
    }

    #[test]
    fn function_file_round_trip(f in poly_f64()) {
        let back: PolyFunction<f64> = parse_function(&write_function(&f)).unwrap();
        prop_assert!(back.same_function(&f));
    }
}

#[test]
fn corpus_round_trips_through_function_files() {
    for named in corpus_functions::<f64>() {
        let back: PolyFunction<f64> = parse_function(&write_function(&named.function)).unwrap();
        assert!(back.same_function(&named.function), "{}", named.name);
    }
}
