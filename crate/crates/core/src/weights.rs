//! Weight catalog and a grid certificate for the dilation growth condition
//! `r^k w(z/r) <= C w(z)` for `|z| < r`, `r0 <= r < 1`.

use std::fmt;

use num_complex::Complex;
use rayon::prelude::*;

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Scalar};

/// Radial factor `ω(s)` of a product weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadialProfile<T> {
    /// `(1 - s)^γ` on the disk, `s^γ` on the half-plane.
    PowerLaw { gamma: T },
    /// `exp(-β s^n)`
    ExpAbsPow { beta: T, n: u32 },
}

/// Angular factor `v(θ)` of a product weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AngularProfile<T> {
    Uniform,
    /// `(θ_max² - θ²)^α` for `θ ∈ [0, θ_max)`.
    AngularPoly {
        alpha: T,
        theta_max: T,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightSpec<T> {
    Uniform,
    /// `exp(-β |z|^n)`
    ExpAbsPow {
        beta: T,
        n: u32,
    },
    /// `exp(-β |Re z|^n)`
    ExpRePow {
        beta: T,
        n: u32,
    },
    /// `exp(|z|)`
    ExpAbs,
    /// `(θ_max² - θ²)^α`, depending on `arg z` only.
    AngularPoly {
        alpha: T,
        theta_max: T,
    },
    /// `ω(|z|) · v(arg z)`
    Product {
        radial: RadialProfile<T>,
        angular: AngularProfile<T>,
    },
}

impl<T: Scalar> WeightSpec<T> {
    /// Checks catalog parameters, and that angular profiles cover the
    /// domain's full range of `arg z`.
    pub fn validate(&self, domain: Domain) -> Result<()> {
        let positive = |name: &str, v: T| {
            if v > T::zero() && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!(
                    "{name} must be positive, got {v}"
                )))
            }
        };
        let exponent = |n: u32| {
            if n >= 1 {
                Ok(())
            } else {
                Err(Error::InvalidParameter(
                    "n must be a positive integer".into(),
                ))
            }
        };
        let theta_range = |alpha: T, theta_max: T| -> Result<()> {
            positive("alpha", alpha)?;
            if !(theta_max >= domain.angular_span::<T>()) || !theta_max.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "theta_max = {theta_max} does not cover arg z on the {domain}"
                )));
            }
            Ok(())
        };
        match *self {
            WeightSpec::Uniform | WeightSpec::ExpAbs => Ok(()),
            WeightSpec::ExpAbsPow { beta, n } | WeightSpec::ExpRePow { beta, n } => {
                positive("beta", beta)?;
                exponent(n)
            }
            WeightSpec::AngularPoly { alpha, theta_max } => theta_range(alpha, theta_max),
            WeightSpec::Product { radial, angular } => {
                match radial {
                    RadialProfile::PowerLaw { gamma } => {
                        if !(gamma >= T::zero()) || !gamma.is_finite() {
                            return Err(Error::InvalidParameter(format!(
                                "gamma must be >= 0, got {gamma}"
                            )));
                        }
                    }
                    RadialProfile::ExpAbsPow { beta, n } => {
                        positive("beta", beta)?;
                        exponent(n)?;
                    }
                }
                match angular {
                    AngularProfile::Uniform => Ok(()),
                    AngularProfile::AngularPoly { alpha, theta_max } => {
                        theta_range(alpha, theta_max)
                    }
                }
            }
        }
    }

    /// Short tag used in reports and on the command line.
    pub fn tag(&self) -> &'static str {
        match self {
            WeightSpec::Uniform => "uniform",
            WeightSpec::ExpAbsPow { .. } => "exp-abs-pow",
            WeightSpec::ExpRePow { .. } => "exp-re-pow",
            WeightSpec::ExpAbs => "exp-abs",
            WeightSpec::AngularPoly { .. } => "angular-poly",
            WeightSpec::Product { .. } => "product",
        }
    }

    pub fn is_angular(&self) -> bool {
        matches!(
            self,
            WeightSpec::AngularPoly { .. }
                | WeightSpec::Product {
                    angular: AngularProfile::AngularPoly { .. },
                    ..
                }
        )
    }
}

impl<T: Scalar> fmt::Display for WeightSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightSpec::Uniform | WeightSpec::ExpAbs => write!(f, "{}", self.tag()),
            WeightSpec::ExpAbsPow { beta, n } | WeightSpec::ExpRePow { beta, n } => {
                write!(f, "{}(beta={beta};n={n})", self.tag())
            }
            WeightSpec::AngularPoly { alpha, theta_max } => {
                write!(f, "angular-poly(alpha={alpha};theta_max={theta_max})")
            }
            WeightSpec::Product { radial, angular } => {
                write!(f, "product(")?;
                match radial {
                    RadialProfile::PowerLaw { gamma } => write!(f, "power-law(gamma={gamma})")?,
                    RadialProfile::ExpAbsPow { beta, n } => {
                        write!(f, "exp-abs-pow(beta={beta};n={n})")?
                    }
                }
                match angular {
                    AngularProfile::Uniform => write!(f, "*uniform)"),
                    AngularProfile::AngularPoly { alpha, theta_max } => {
                        write!(f, "*angular-poly(alpha={alpha};theta_max={theta_max}))")
                    }
                }
            }
        }
    }
}

/// Principal argument shifted into `[0, 2π)`.
pub fn argument<T: Scalar>(z: Complex<T>) -> T {
    let theta = z.im.atan2(z.re);
    if theta < T::zero() {
        theta + T::TAU()
    } else {
        theta
    }
}

fn angular_poly<T: Scalar>(theta: T, alpha: T, theta_max: T) -> Result<T> {
    if !(theta >= T::zero() && theta < theta_max) {
        return Err(Error::AngleOutOfRange {
            theta: to_f64(theta),
            theta_max: to_f64(theta_max),
        });
    }
    Ok((theta_max * theta_max - theta * theta).powf(alpha))
}

fn radial_value<T: Scalar>(profile: &RadialProfile<T>, domain: Domain, s: T) -> T {
    match *profile {
        RadialProfile::PowerLaw { gamma } => match domain {
            Domain::UnitDisk => (T::one() - s).powf(gamma),
            Domain::UpperHalfPlane => s.powf(gamma),
        },
        RadialProfile::ExpAbsPow { beta, n } => (-beta * s.powi(n as i32)).exp(),
    }
}

/// `w(z)` for `z` strictly inside `domain`.
pub fn eval_weight<T: Scalar>(w: &WeightSpec<T>, domain: Domain, z: Complex<T>) -> Result<T> {
    if !domain.contains(z) {
        return Err(Error::OutsideDomain {
            re: to_f64(z.re),
            im: to_f64(z.im),
            domain: domain.name(),
        });
    }
    weight_formula(w, domain, z)
}

/// Catalog formula without the domain check; angular range is still enforced.
pub(crate) fn weight_formula<T: Scalar>(
    w: &WeightSpec<T>,
    domain: Domain,
    z: Complex<T>,
) -> Result<T> {
    Ok(match *w {
        WeightSpec::Uniform => T::one(),
        WeightSpec::ExpAbsPow { beta, n } => (-beta * z.norm().powi(n as i32)).exp(),
        WeightSpec::ExpRePow { beta, n } => (-beta * z.re.abs().powi(n as i32)).exp(),
        WeightSpec::ExpAbs => z.norm().exp(),
        WeightSpec::AngularPoly { alpha, theta_max } => {
            angular_poly(argument(z), alpha, theta_max)?
        }
        WeightSpec::Product { radial, angular } => {
            let radial = radial_value(&radial, domain, z.norm());
            let angular = match angular {
                AngularProfile::Uniform => T::one(),
                AngularProfile::AngularPoly { alpha, theta_max } => {
                    angular_poly(argument(z), alpha, theta_max)?
                }
            };
            radial * angular
        }
    })
}

/// Resolution and cap for [`check_condition`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionGrid<T> {
    /// Number of `r` values in `[r0, 1)`.
    pub n_r: usize,
    /// Number of `z` samples inside `|z| < r`, split into radius × angle strata.
    pub n_z: usize,
    /// Ratio above which the condition is declared to fail.
    pub divergence_cap: T,
}

impl<T: Scalar> Default for ConditionGrid<T> {
    fn default() -> Self {
        ConditionGrid {
            n_r: 64,
            n_z: 4096,
            divergence_cap: lit(1e6),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionWitness<T> {
    pub k: u32,
    /// Grid supremum of `r^k w(z/r) / w(z)`.
    pub c: T,
    pub r0: T,
    pub grid_size: usize,
    /// `(z, r)` attaining the supremum.
    pub sup_at: (Complex<T>, T),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConditionCheck<T> {
    Holds(ConditionWitness<T>),
    /// The ratio exceeded the cap (or stopped being finite) at `at`.
    Diverges {
        k: u32,
        ratio: T,
        at: (Complex<T>, T),
    },
}

impl<T> ConditionCheck<T> {
    pub fn witness(&self) -> Option<&ConditionWitness<T>> {
        match self {
            ConditionCheck::Holds(w) => Some(w),
            ConditionCheck::Diverges { .. } => None,
        }
    }
}

/// Sample point of the stratified grid: `(radius index, angle index)`.
fn sample_point<T: Scalar>(
    domain: Domain,
    r: T,
    a: usize,
    b: usize,
    n_rad: usize,
    n_ang: usize,
) -> Complex<T> {
    let half = lit::<T>(0.5);
    let s = r * (T::from_usize(a).unwrap() + half) / T::from_usize(n_rad).unwrap();
    let theta = domain.angular_span::<T>() * (T::from_usize(b).unwrap() + half)
        / T::from_usize(n_ang).unwrap();
    Complex::from_polar(s, theta)
}

/// Grid certificate for the growth condition with exponent `k`.
///
/// `r` runs over `r0 + (1 - r0) i / n_r`, `i < n_r`; for each `r` the disk
/// `|z| < r` (its upper half on the half-plane) is sampled at cell centres
/// of an `n_rad × n_ang` polar stratification. The supremum is found by a
/// max-reduction that breaks ties by grid index, so it does not depend on
/// how the work is split.
pub fn check_condition<T: Scalar>(
    w: &WeightSpec<T>,
    domain: Domain,
    k: u32,
    r0: T,
    grid: &ConditionGrid<T>,
) -> Result<ConditionCheck<T>> {
    if !(r0 > T::zero() && r0 < T::one()) {
        return Err(Error::InvalidParameter(format!(
            "r0 must lie in (0, 1), got {r0}"
        )));
    }
    if grid.n_r == 0 || grid.n_z == 0 {
        return Err(Error::InvalidParameter(
            "condition grid must be nonempty".into(),
        ));
    }
    w.validate(domain)?;

    let n_rad = ((grid.n_z as f64).sqrt().floor() as usize).max(1);
    let n_ang = (grid.n_z / n_rad).max(1);
    let n_r = T::from_usize(grid.n_r).unwrap();

    // (ratio, r index, flat z index); NaN ratios are mapped to +inf.
    let best = (0..grid.n_r)
        .into_par_iter()
        .map(|i| -> Result<(T, usize, usize)> {
            let r = r0 + (T::one() - r0) * T::from_usize(i).unwrap() / n_r;
            let rk = r.powi(k as i32);
            let mut best = (T::neg_infinity(), i, 0usize);
            for a in 0..n_rad {
                for b in 0..n_ang {
                    let z = sample_point(domain, r, a, b, n_rad, n_ang);
                    let num = weight_formula(w, domain, z / r)?;
                    let den = weight_formula(w, domain, z)?;
                    let mut ratio = rk * num / den;
                    if ratio.is_nan() {
                        ratio = T::infinity();
                    }
                    if ratio > best.0 {
                        best = (ratio, i, a * n_ang + b);
                    }
                }
            }
            Ok(best)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold((T::neg_infinity(), 0, 0), |acc, cand| {
            if cand.0 > acc.0 || (cand.0 == acc.0 && (cand.1, cand.2) < (acc.1, acc.2)) {
                cand
            } else {
                acc
            }
        });

    let (ratio, i, flat) = best;
    let r = r0 + (T::one() - r0) * T::from_usize(i).unwrap() / n_r;
    let z = sample_point(domain, r, flat / n_ang, flat % n_ang, n_rad, n_ang);
    if !(ratio <= grid.divergence_cap) {
        return Ok(ConditionCheck::Diverges {
            k,
            ratio,
            at: (z, r),
        });
    }
    Ok(ConditionCheck::Holds(ConditionWitness {
        k,
        c: ratio,
        r0,
        grid_size: grid.n_r * n_rad * n_ang,
        sup_at: (z, r),
    }))
}

/// Smallest `k <= k_max` for which [`check_condition`] certifies a finite constant.
pub fn find_min_k<T: Scalar>(
    w: &WeightSpec<T>,
    domain: Domain,
    k_max: u32,
    r0: T,
    grid: &ConditionGrid<T>,
) -> Result<Option<ConditionWitness<T>>> {
    for k in 0..=k_max {
        if let ConditionCheck::Holds(witness) = check_condition(w, domain, k, r0, grid)? {
            return Ok(Some(witness));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, TAU};

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn catalog_values() {
        let d = Domain::UnitDisk;
        let w = WeightSpec::ExpAbsPow { beta: 1.0, n: 2 };
        assert_eq!(eval_weight(&w, d, c(0.0, 0.0)).unwrap(), 1.0);

        let w = WeightSpec::AngularPoly {
            alpha: 1.0,
            theta_max: TAU,
        };
        let v = eval_weight(&w, d, c(0.4, 0.0)).unwrap();
        assert!((v - 4.0 * PI * PI).abs() < 1e-12);
        assert!((v - 39.478).abs() < 1e-3);

        let w = WeightSpec::ExpRePow { beta: 1.0, n: 1 };
        let v = eval_weight(&w, d, c(-0.5, 0.1)).unwrap();
        assert!((v - (-0.5f64).exp()).abs() < 1e-15);
        assert!((v - 0.60653).abs() < 1e-5);
    }

    #[test]
    fn rejects_points_outside() {
        let w = WeightSpec::<f64>::Uniform;
        assert!(matches!(
            eval_weight(&w, Domain::UnitDisk, c(1.0, 0.0)),
            Err(Error::OutsideDomain { .. })
        ));
        assert!(eval_weight(&w, Domain::UpperHalfPlane, c(3.0, 0.0)).is_err());
        assert!(eval_weight(&w, Domain::UpperHalfPlane, c(3.0, -1.0)).is_err());
        assert!(eval_weight(&w, Domain::UpperHalfPlane, c(3.0, 1e-9)).is_ok());
    }

    #[test]
    fn rejects_angle_beyond_theta_max() {
        let w = WeightSpec::AngularPoly {
            alpha: 1.0,
            theta_max: PI,
        };
        // θ = 3π/2 on the disk lies outside [0, π).
        assert!(matches!(
            eval_weight(&w, Domain::UnitDisk, c(0.0, -0.5)),
            Err(Error::AngleOutOfRange { .. })
        ));
        assert!(eval_weight(&w, Domain::UpperHalfPlane, c(-2.0, 0.5)).unwrap() > 0.0);
    }

    #[test]
    fn validation() {
        let d = Domain::UnitDisk;
        assert!(WeightSpec::ExpAbsPow { beta: 0.0, n: 2 }
            .validate(d)
            .is_err());
        assert!(WeightSpec::ExpRePow { beta: 1.0, n: 0 }
            .validate(d)
            .is_err());
        assert!(WeightSpec::AngularPoly {
            alpha: 1.0,
            theta_max: PI
        }
        .validate(d)
        .is_err());
        assert!(WeightSpec::AngularPoly {
            alpha: 1.0,
            theta_max: PI
        }
        .validate(Domain::UpperHalfPlane)
        .is_ok());
        assert!(WeightSpec::Product {
            radial: RadialProfile::PowerLaw { gamma: -1.0 },
            angular: AngularProfile::Uniform
        }
        .validate(d)
        .is_err());
    }

    #[test]
    fn uniform_condition_constant_is_one() {
        let grid = ConditionGrid {
            n_r: 8,
            n_z: 64,
            ..Default::default()
        };
        let w = find_min_k(&WeightSpec::Uniform, Domain::UnitDisk, 3, 0.5, &grid)
            .unwrap()
            .unwrap();
        assert_eq!(w.k, 0);
        assert_eq!(w.c, 1.0);
        assert_eq!(w.grid_size, 8 * 64);
    }

    #[test]
    fn invalid_r0() {
        let grid = ConditionGrid::default();
        for r0 in [0.0, 1.0, -0.5, f64::NAN] {
            assert!(check_condition(&WeightSpec::Uniform, Domain::UnitDisk, 0, r0, &grid).is_err());
        }
    }

    #[test]
    fn divergence_reported_not_raised() {
        // (1 - s)^γ on the disk against a growing weight: exp(|z|) with a huge
        // radial PowerLaw on the half-plane gives r^{-γ} blow-up for large γ.
        let w = WeightSpec::Product {
            radial: RadialProfile::PowerLaw { gamma: 40.0 },
            angular: AngularProfile::Uniform,
        };
        let grid = ConditionGrid {
            n_r: 8,
            n_z: 64,
            ..Default::default()
        };
        let out = check_condition(&w, Domain::UpperHalfPlane, 0, 0.5, &grid).unwrap();
        assert!(matches!(out, ConditionCheck::Diverges { .. }));
        let found = find_min_k(&w, Domain::UpperHalfPlane, 40, 0.5, &grid)
            .unwrap()
            .unwrap();
        assert!(found.k > 0 && found.k <= 40);
    }
}
