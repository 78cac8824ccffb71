//! Weighted poly-Bergman, poly-Dirichlet and poly-Besov norms.
//!
//! Disk:
//! - Bergman   `∫ |f|^p w dA`
//! - Dirichlet `|f(0)|^p + ∫ (|∂f|^p + |∂̄f|^p) w dA`
//! - Besov     `|f(0)|^p + ∫ (1-|z|²)^{p-2} (|∂f|^p + |∂̄f|^p) w dA`, `p >= 2`
//!
//! Half-plane: `dA` carries `Im(z)^α e^{-β|z|²}` (exponent `α + p - 2` for
//! Besov) and the point term is taken at `i`.
//!
//! Derivatives are exact coefficient operations; only the area integral is
//! numerical. For a fixed space the weighted node masses are computed once per
//! resolution level and shared across every function evaluated against it.

use std::fmt;
use std::sync::OnceLock;

use num_complex::Complex;
use rayon::prelude::*;

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::polyfun::PolyFunction;
use crate::quadrature::{
    default_halfplane_radius, monte_carlo_disk, monte_carlo_halfplane, pairwise_sum,
    relative_change, McEstimate, Resolution,
};
use crate::scalar::{lit, to_f64, Scalar};
use crate::weights::{weight_formula, WeightSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SpaceKind {
    Bergman,
    Dirichlet,
    Besov,
}

impl SpaceKind {
    pub fn name(self) -> &'static str {
        match self {
            SpaceKind::Bergman => "bergman",
            SpaceKind::Dirichlet => "dirichlet",
            SpaceKind::Besov => "besov",
        }
    }
}

impl fmt::Display for SpaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `Im(z)^α e^{-β|z|²}` parameters of the half-plane measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlaneParams<T> {
    pub alpha: T,
    pub beta: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceSpec<T> {
    domain: Domain,
    kind: SpaceKind,
    p: T,
    weight: WeightSpec<T>,
    halfplane: Option<HalfPlaneParams<T>>,
}

impl<T: Scalar> SpaceSpec<T> {
    pub fn disk(kind: SpaceKind, p: T, weight: WeightSpec<T>) -> Result<Self> {
        Self::validated(SpaceSpec {
            domain: Domain::UnitDisk,
            kind,
            p,
            weight,
            halfplane: None,
        })
    }

    pub fn halfplane(
        kind: SpaceKind,
        p: T,
        weight: WeightSpec<T>,
        alpha: T,
        beta: T,
    ) -> Result<Self> {
        Self::validated(SpaceSpec {
            domain: Domain::UpperHalfPlane,
            kind,
            p,
            weight,
            halfplane: Some(HalfPlaneParams { alpha, beta }),
        })
    }

    fn validated(spec: Self) -> Result<Self> {
        if !(spec.p > T::zero()) || !spec.p.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "p must be positive, got {}",
                spec.p
            )));
        }
        if spec.kind == SpaceKind::Besov && spec.p < lit(2.0) {
            return Err(Error::BesovExponent(to_f64(spec.p)));
        }
        if let Some(HalfPlaneParams { alpha, beta }) = spec.halfplane {
            for (name, v) in [("alpha", alpha), ("beta", beta)] {
                if !(v >= T::zero()) || !v.is_finite() {
                    return Err(Error::InvalidParameter(format!(
                        "{name} must be >= 0, got {v}"
                    )));
                }
            }
        }
        spec.weight.validate(spec.domain)?;
        Ok(spec)
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn p(&self) -> T {
        self.p
    }

    pub fn weight(&self) -> &WeightSpec<T> {
        &self.weight
    }

    pub fn halfplane_params(&self) -> Option<HalfPlaneParams<T>> {
        self.halfplane
    }

    pub fn base_point(&self) -> Complex<T> {
        self.domain.base_point()
    }

    /// Same space with another kind and exponent.
    pub fn with_kind(&self, kind: SpaceKind, p: T) -> Result<Self> {
        Self::validated(SpaceSpec { kind, p, ..*self })
    }

    /// Density of the measure against `dA`, excluding the weight.
    fn measure_factor(&self, z: Complex<T>) -> T {
        let besov_shift = match self.kind {
            SpaceKind::Besov => self.p - lit(2.0),
            _ => T::zero(),
        };
        match self.halfplane {
            None => match self.kind {
                SpaceKind::Besov => (T::one() - z.norm_sqr()).powf(besov_shift),
                _ => T::one(),
            },
            Some(HalfPlaneParams { alpha, beta }) => {
                let exponent = alpha + besov_shift;
                let im_factor = if exponent == T::zero() {
                    T::one()
                } else {
                    z.im.powf(exponent)
                };
                im_factor * (-beta * z.norm_sqr()).exp()
            }
        }
    }
}

impl<T: Scalar> fmt::Display for SpaceSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}/{}/p={}/{}",
            self.domain, self.kind, self.p, self.weight
        )?;
        if let Some(h) = self.halfplane {
            write!(f, "/alpha={}/beta={}", h.alpha, h.beta)?;
        }
        Ok(())
    }
}

/// Quadrature resolution and refinement policy for norm evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions<T> {
    pub n_r: usize,
    pub n_theta: usize,
    /// Half-plane truncation radius; `None` picks `max(8, √(40/β))`.
    pub radius: Option<T>,
    pub rel_tol: T,
    /// Number of resolution doublings allowed after the base grid.
    pub max_level: u32,
}

impl<T: Scalar> Default for QuadOptions<T> {
    fn default() -> Self {
        QuadOptions {
            n_r: 128,
            n_theta: 256,
            radius: None,
            rel_tol: lit(1e-9),
            max_level: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadFlags<T> {
    /// Successive levels agreed to `rel_tol`.
    pub converged: bool,
    pub rel_change: T,
    pub level: u32,
    /// Half-plane integral cut at an explicit radius with `β = 0`.
    pub truncated: bool,
}

impl<T: Scalar> QuadFlags<T> {
    pub fn merge(self, other: Self) -> Self {
        QuadFlags {
            converged: self.converged && other.converged,
            rel_change: if other.rel_change > self.rel_change || other.rel_change.is_nan() {
                other.rel_change
            } else {
                self.rel_change
            },
            level: self.level.max(other.level),
            truncated: self.truncated || other.truncated,
        }
    }

    pub fn describe(&self) -> String {
        let mut parts = Vec::new();
        if !self.converged {
            parts.push("unrefined");
        }
        if self.truncated {
            parts.push("truncated");
        }
        if parts.is_empty() {
            "ok".to_string()
        } else {
            parts.join("+")
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormResult<T> {
    pub full_norm: T,
    pub seminorm: T,
    /// `|f(base)|^p`; zero for Bergman.
    pub point_term: T,
    pub flags: QuadFlags<T>,
}

/// Both derivative integrals of a Dirichlet/Besov seminorm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativeIntegrals<T> {
    /// `∫ |∂_z f|^p dμ`
    pub dz: T,
    /// `∫ |∂_z̄ f|^p dμ`
    pub dzbar: T,
    pub flags: QuadFlags<T>,
}

/// `|c|^p`, with the `p = 2` case kept free of `powf`.
#[inline]
pub fn abs_pow<T: Scalar>(c: Complex<T>, p: T) -> T {
    if p == lit(2.0) {
        c.norm_sqr()
    } else {
        c.norm().powf(p)
    }
}

/// Nodes with masses `node_weight · w(z) · measure_factor(z)`.
#[derive(Debug)]
struct MeasureGrid<T> {
    nodes: Vec<Complex<T>>,
    masses: Vec<T>,
}

/// Evaluates norms for one space, caching weighted grids per refinement level.
#[derive(Debug)]
pub struct NormEvaluator<T> {
    spec: SpaceSpec<T>,
    base: Resolution<T>,
    rel_tol: T,
    max_level: u32,
    truncated: bool,
    levels: Vec<OnceLock<Result<MeasureGrid<T>>>>,
}

impl<T: Scalar> NormEvaluator<T> {
    pub fn new(spec: SpaceSpec<T>, opts: &QuadOptions<T>) -> Result<Self> {
        if !(opts.rel_tol > T::zero()) {
            return Err(Error::InvalidParameter("rel_tol must be positive".into()));
        }
        let (base, truncated) = match spec.halfplane {
            None => (
                Resolution::Disk {
                    n_r: opts.n_r,
                    n_theta: opts.n_theta,
                },
                false,
            ),
            Some(HalfPlaneParams { beta, .. }) => {
                let radius = match (opts.radius, beta > T::zero()) {
                    (Some(r), _) => r,
                    (None, true) => default_halfplane_radius(beta).expect("beta > 0"),
                    (None, false) => return Err(Error::TruncationRequired),
                };
                (
                    Resolution::HalfPlane {
                        radius,
                        n_r: opts.n_r,
                        n_theta: opts.n_theta,
                    },
                    beta == T::zero(),
                )
            }
        };
        let evaluator = NormEvaluator {
            spec,
            base,
            rel_tol: opts.rel_tol,
            max_level: opts.max_level,
            truncated,
            levels: (0..=opts.max_level).map(|_| OnceLock::new()).collect(),
        };
        let mass = evaluator.total_mass()?;
        if !(mass > T::zero()) || !mass.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "weighted measure of {} has total mass {mass}",
                evaluator.spec
            )));
        }
        Ok(evaluator)
    }

    pub fn spec(&self) -> &SpaceSpec<T> {
        &self.spec
    }

    /// `∫ w · factor dA` on the base grid.
    pub fn total_mass(&self) -> Result<T> {
        Ok(pairwise_sum(&self.level(0)?.masses))
    }

    fn level(&self, level: u32) -> Result<&MeasureGrid<T>> {
        self.levels[level as usize]
            .get_or_init(|| self.build_level(level))
            .as_ref()
            .map_err(Clone::clone)
    }

    fn build_level(&self, level: u32) -> Result<MeasureGrid<T>> {
        let grid = self.base.at_level(level).build()?;
        let masses = grid
            .nodes()
            .par_iter()
            .zip(grid.node_weights())
            .enumerate()
            .map(|(index, (&z, &w))| -> Result<T> {
                let mass = w
                    * weight_formula(&self.spec.weight, self.spec.domain, z)?
                    * self.spec.measure_factor(z);
                if mass.is_finite() {
                    Ok(mass)
                } else {
                    Err(Error::NonFinite {
                        index,
                        re: to_f64(z.re),
                        im: to_f64(z.im),
                    })
                }
            })
            .collect::<Result<Vec<T>>>()?;
        Ok(MeasureGrid {
            nodes: grid.nodes().to_vec(),
            masses,
        })
    }

    /// Sums `mass_i · integrand(z_i)` for a pair-valued integrand.
    fn integrate_pair<G>(&self, level: u32, integrand: &G) -> Result<(T, T)>
    where
        G: Fn(Complex<T>) -> (T, T) + Sync,
    {
        let grid = self.level(level)?;
        let pairs: Vec<(T, T)> = grid
            .nodes
            .par_iter()
            .zip(&grid.masses)
            .map(|(&z, &m)| {
                let (a, b) = integrand(z);
                (a * m, b * m)
            })
            .collect();
        if let Some(index) = pairs
            .iter()
            .position(|(a, b)| !a.is_finite() || !b.is_finite())
        {
            let z = grid.nodes[index];
            return Err(Error::NonFinite {
                index,
                re: to_f64(z.re),
                im: to_f64(z.im),
            });
        }
        let first: Vec<T> = pairs.iter().map(|p| p.0).collect();
        let second: Vec<T> = pairs.iter().map(|p| p.1).collect();
        Ok((pairwise_sum(&first), pairwise_sum(&second)))
    }

    /// Refines until the sum of both parts settles.
    fn refine_pair<G>(&self, integrand: G) -> Result<(T, T, QuadFlags<T>)>
    where
        G: Fn(Complex<T>) -> (T, T) + Sync,
    {
        let (mut a, mut b) = self.integrate_pair(0, &integrand)?;
        let mut flags = QuadFlags {
            converged: false,
            rel_change: T::infinity(),
            level: 0,
            truncated: self.truncated,
        };
        for level in 1..=self.max_level {
            let (na, nb) = self.integrate_pair(level, &integrand)?;
            flags.rel_change = relative_change(na + nb, a + b);
            flags.level = level;
            a = na;
            b = nb;
            if flags.rel_change < self.rel_tol {
                flags.converged = true;
                break;
            }
        }
        Ok((a, b, flags))
    }

    /// `∫ |∂_z f|^p dμ` and `∫ |∂_z̄ f|^p dμ`, whatever the space kind
    /// (`dμ` includes the Besov boundary factor when the kind is Besov).
    pub fn derivative_integrals(&self, f: &PolyFunction<T>) -> Result<DerivativeIntegrals<T>> {
        let p = self.spec.p;
        let dz = f.d_z();
        let dzbar = f.d_zbar();
        let dz_zero = dz.is_zero();
        let dzbar_zero = dzbar.is_zero();
        let (a, b, flags) = self.refine_pair(|z| {
            let a = if dz_zero {
                T::zero()
            } else {
                abs_pow(dz.eval(z), p)
            };
            let b = if dzbar_zero {
                T::zero()
            } else {
                abs_pow(dzbar.eval(z), p)
            };
            (a, b)
        })?;
        Ok(DerivativeIntegrals {
            dz: a,
            dzbar: b,
            flags,
        })
    }

    /// `∫ |f|^p dμ`.
    pub fn function_integral(&self, f: &PolyFunction<T>) -> Result<(T, QuadFlags<T>)> {
        let p = self.spec.p;
        let (a, _, flags) = self.refine_pair(|z| (abs_pow(f.eval(z), p), T::zero()))?;
        Ok((a, flags))
    }

    /// Norm of the configured kind.
    pub fn norm(&self, f: &PolyFunction<T>) -> Result<NormResult<T>> {
        let p = self.spec.p;
        let inv_p = T::one() / p;
        match self.spec.kind {
            SpaceKind::Bergman => {
                let (integral, flags) = self.function_integral(f)?;
                let seminorm = integral.powf(inv_p);
                Ok(NormResult {
                    full_norm: seminorm,
                    seminorm,
                    point_term: T::zero(),
                    flags,
                })
            }
            SpaceKind::Dirichlet | SpaceKind::Besov => {
                let parts = self.derivative_integrals(f)?;
                let integral = parts.dz + parts.dzbar;
                let point_term = abs_pow(f.eval(self.spec.base_point()), p);
                Ok(NormResult {
                    full_norm: (point_term + integral).powf(inv_p),
                    seminorm: integral.powf(inv_p),
                    point_term,
                    flags: parts.flags,
                })
            }
        }
    }

    /// Norm of `f - g`.
    pub fn norm_of_difference(
        &self,
        f: &PolyFunction<T>,
        g: &PolyFunction<T>,
    ) -> Result<NormResult<T>> {
        self.norm(&f.sub(g))
    }
}

/// Monte Carlo estimate of the seminorm integral (`seminorm^p`), independent
/// of the quadrature grids. The half-plane sampler needs `β > 0`.
pub fn monte_carlo_seminorm<T: Scalar>(
    f: &PolyFunction<T>,
    spec: &SpaceSpec<T>,
    samples: usize,
    seed: u64,
) -> Result<McEstimate> {
    if samples < 2 {
        return Err(Error::InvalidParameter(
            "Monte Carlo needs at least 2 samples".into(),
        ));
    }
    let p = spec.p;
    let (dz, dzbar) = (f.d_z(), f.d_zbar());
    let integrand = |z: Complex<T>| -> T {
        let value = match spec.kind {
            SpaceKind::Bergman => abs_pow(f.eval(z), p),
            SpaceKind::Dirichlet | SpaceKind::Besov => {
                abs_pow(dz.eval(z), p) + abs_pow(dzbar.eval(z), p)
            }
        };
        let w = weight_formula(&spec.weight, spec.domain, z).unwrap_or(T::zero());
        value * w * spec.measure_factor(z)
    };
    match spec.halfplane {
        None => Ok(monte_carlo_disk(integrand, samples, seed)),
        Some(HalfPlaneParams { beta, .. }) => {
            monte_carlo_halfplane(integrand, to_f64(beta), samples, seed)
        }
    }
}

fn expect_kind<T: Scalar>(spec: &SpaceSpec<T>, kind: SpaceKind) -> Result<()> {
    if spec.kind == kind {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "expected a {kind} space, got {}",
            spec.kind
        )))
    }
}

pub fn bergman_norm<T: Scalar>(
    f: &PolyFunction<T>,
    spec: &SpaceSpec<T>,
    opts: &QuadOptions<T>,
) -> Result<NormResult<T>> {
    expect_kind(spec, SpaceKind::Bergman)?;
    NormEvaluator::new(*spec, opts)?.norm(f)
}

pub fn dirichlet_norm<T: Scalar>(
    f: &PolyFunction<T>,
    spec: &SpaceSpec<T>,
    opts: &QuadOptions<T>,
) -> Result<NormResult<T>> {
    expect_kind(spec, SpaceKind::Dirichlet)?;
    NormEvaluator::new(*spec, opts)?.norm(f)
}

pub fn besov_norm<T: Scalar>(
    f: &PolyFunction<T>,
    spec: &SpaceSpec<T>,
    opts: &QuadOptions<T>,
) -> Result<NormResult<T>> {
    expect_kind(spec, SpaceKind::Besov)?;
    NormEvaluator::new(*spec, opts)?.norm(f)
}

/// Norm of the kind named by `spec`.
pub fn norm<T: Scalar>(
    f: &PolyFunction<T>,
    spec: &SpaceSpec<T>,
    opts: &QuadOptions<T>,
) -> Result<NormResult<T>> {
    NormEvaluator::new(*spec, opts)?.norm(f)
}

pub fn norm_of_difference<T: Scalar>(
    f: &PolyFunction<T>,
    g: &PolyFunction<T>,
    spec: &SpaceSpec<T>,
    opts: &QuadOptions<T>,
) -> Result<NormResult<T>> {
    NormEvaluator::new(*spec, opts)?.norm_of_difference(f, g)
}
