use std::f64::consts::PI;

use num_complex::Complex64;
use polybesov::quadrature::{disk_grid, gauss_legendre, halfplane_grid};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// The midpoint rule in angle annihilates `e^{imθ}` for `0 < |m| < n_θ`.
    #[test]
    fn angular_harmonics_vanish(n_theta in 4usize..200, m_frac in 0.0f64..1.0, sign in prop::bool::ANY) {
        let m = 1 + ((n_theta - 2) as f64 * m_frac) as i32;
        let m = if sign { m } else { -m };
        let grid = disk_grid::<f64>(8, n_theta).unwrap();
        let re = grid.integrate(|z: Complex64| (m as f64 * z.arg()).cos()).unwrap();
        let im = grid.integrate(|z: Complex64| (m as f64 * z.arg()).sin()).unwrap();
        prop_assert!(re.abs() < 1e-13 && im.abs() < 1e-13, "m={m}: {re} {im}");
    }

    /// `∫_𝔻 |z|^{2m} dA = π/(m+1)` to machine precision for `m <= n_r - 1`.
    /// The radial rule is Gauss-Legendre after `s = sin φ`, so this is
    /// accuracy rather than algebraic exactness and needs `n_r >= 24`.
    #[test]
    fn radial_moments(n_r in 24usize..160, m_frac in 0.0f64..1.0) {
        let m = ((n_r - 1) as f64 * m_frac) as i32;
        let got = disk_grid::<f64>(n_r, 8).unwrap().integrate(|z: Complex64| z.norm_sqr().powi(m)).unwrap();
        let want = PI / (m as f64 + 1.0);
        prop_assert!((got - want).abs() < 1e-12 * want, "n_r={n_r} m={m}: {got} vs {want}");
    }

    #[test]
    fn gauss_legendre_weights_positive_and_sum_to_two(n in 1usize..200) {
        let (x, w) = gauss_legendre::<f64>(n);
        prop_assert!(w.iter().all(|&w| w > 0.0));
        prop_assert!(x.iter().all(|&x| x > -1.0 && x < 1.0));
        prop_assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13);
    }

    /// Half-disk nodes stay strictly inside the truncated region.
    #[test]
    fn halfplane_nodes_interior(radius in 0.5f64..20.0, n_r in 1usize..40, n_theta in 2usize..40) {
        let grid = halfplane_grid::<f64>(radius, n_r, n_theta).unwrap();
        prop_assert!(grid.nodes().iter().all(|z| z.im > 0.0 && z.norm() < radius));
        prop_assert!(grid.node_weights().iter().all(|&w| w > 0.0));
        let area = grid.node_weights().iter().sum::<f64>();
        prop_assert!((area - PI * radius * radius / 2.0).abs() < 1e-10 * area);
    }
}
