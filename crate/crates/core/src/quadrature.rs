//! Product quadrature for the area measure on the unit disk and on the
//! (truncated) upper half-plane, plus a Monte Carlo cross-check.
//!
//! Disk: the radius is parametrised as `s = sin φ`, `φ ∈ (0, π/2)`, with
//! Gauss–Legendre nodes in `φ`; the angle uses the midpoint rule on
//! `[0, 2π)`. The substitution turns `s ds` into `sin φ cos φ dφ`, which keeps
//! factors such as `(1 - s²)^{1/2}` smooth at the rim while still integrating
//! radial polynomials to machine precision.
//!
//! Half-plane: polar coordinates on the half-disk `|z| <= R`, Gauss–Legendre
//! in the radius on `(0, R)` and two Gauss–Legendre panels in angle,
//! `(0, π/2)` and `(π/2, π)`. The panel break sits on the imaginary axis,
//! where `|Re z|`-type weights have their kink.

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Uniform};
use rayon::prelude::*;

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Scalar};

/// Gauss–Legendre nodes (ascending) and weights on `[-1, 1]`.
pub fn gauss_legendre<T: Scalar>(n: usize) -> (Vec<T>, Vec<T>) {
    let mut nodes = vec![T::zero(); n];
    let mut weights = vec![T::zero(); n];
    if n == 0 {
        return (nodes, weights);
    }
    let nf = T::from_usize(n).unwrap();
    let two = lit::<T>(2.0);
    let tol = T::epsilon() * lit(4.0);

    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess for the i-th largest root.
        let mut x = (T::PI() * (T::from_usize(i).unwrap() + lit(0.75)) / (nf + lit(0.5))).cos();
        let mut dp = T::one();
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x = x - dx;
            if dx.abs() <= tol {
                let (_, d) = legendre_with_derivative(n, x);
                dp = d;
                break;
            }
        }
        let w = two / ((T::one() - x * x) * dp * dp);
        nodes[n - 1 - i] = x;
        nodes[i] = -x;
        weights[n - 1 - i] = w;
        weights[i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = T::zero();
    }
    (nodes, weights)
}

/// `P_n(x)` and `P_n'(x)` by the three-term recurrence.
fn legendre_with_derivative<T: Scalar>(n: usize, x: T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = x;
    for k in 2..=n {
        let kf = T::from_usize(k).unwrap();
        let p2 = ((lit::<T>(2.0) * kf - T::one()) * x * p1 - (kf - T::one()) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (T::one(), T::zero());
    }
    let nf = T::from_usize(n).unwrap();
    let d = nf * (x * p1 - p0) / (x * x - T::one());
    (p1, d)
}

/// Gauss–Legendre rule mapped to `(a, b)`.
fn gauss_legendre_on<T: Scalar>(n: usize, a: T, b: T) -> impl Iterator<Item = (T, T)> {
    let (x, w) = gauss_legendre::<T>(n);
    let half = (b - a) / lit(2.0);
    let mid = (a + b) / lit(2.0);
    x.into_iter()
        .zip(w)
        .map(move |(x, w)| (mid + half * x, half * w))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Resolution<T> {
    Disk {
        n_r: usize,
        n_theta: usize,
    },
    HalfPlane {
        radius: T,
        n_r: usize,
        n_theta: usize,
    },
}

impl<T: Scalar> Resolution<T> {
    /// Both node counts doubled.
    pub fn refined(&self) -> Self {
        match *self {
            Resolution::Disk { n_r, n_theta } => Resolution::Disk {
                n_r: 2 * n_r,
                n_theta: 2 * n_theta,
            },
            Resolution::HalfPlane {
                radius,
                n_r,
                n_theta,
            } => Resolution::HalfPlane {
                radius,
                n_r: 2 * n_r,
                n_theta: 2 * n_theta,
            },
        }
    }

    pub fn at_level(&self, level: u32) -> Self {
        (0..level).fold(*self, |r, _| r.refined())
    }

    pub fn build(&self) -> Result<QuadratureGrid<T>> {
        match *self {
            Resolution::Disk { n_r, n_theta } => disk_grid(n_r, n_theta),
            Resolution::HalfPlane {
                radius,
                n_r,
                n_theta,
            } => halfplane_grid(radius, n_r, n_theta),
        }
    }
}

/// Interior nodes with positive weights realizing `∫ · dA`.
#[derive(Debug, Clone)]
pub struct QuadratureGrid<T> {
    nodes: Vec<Complex<T>>,
    weights: Vec<T>,
    domain: Domain,
    resolution: Resolution<T>,
}

pub fn disk_grid<T: Scalar>(n_r: usize, n_theta: usize) -> Result<QuadratureGrid<T>> {
    if n_r == 0 || n_theta == 0 {
        return Err(Error::InvalidParameter(
            "disk grid needs n_r >= 1 and n_theta >= 1".into(),
        ));
    }
    let dtheta = T::TAU() / T::from_usize(n_theta).unwrap();
    let angles: Vec<Complex<T>> = (0..n_theta)
        .map(|j| {
            let theta = dtheta * (T::from_usize(j).unwrap() + lit(0.5));
            Complex::new(theta.cos(), theta.sin())
        })
        .collect();

    let mut nodes = Vec::with_capacity(n_r * n_theta);
    let mut weights = Vec::with_capacity(n_r * n_theta);
    for (phi, w) in gauss_legendre_on(n_r, T::zero(), T::FRAC_PI_2()) {
        let (s, ds) = phi.sin_cos();
        let radial_weight = w * s * ds * dtheta;
        for e in &angles {
            nodes.push(e.scale(s));
            weights.push(radial_weight);
        }
    }
    Ok(QuadratureGrid {
        nodes,
        weights,
        domain: Domain::UnitDisk,
        resolution: Resolution::Disk { n_r, n_theta },
    })
}

/// Truncation radius for the Gaussian factor `e^{-β|z|²}`: `max(8, √(40/β))`.
pub fn default_halfplane_radius<T: Scalar>(beta: T) -> Option<T> {
    if beta > T::zero() {
        Some(lit::<T>(8.0).max((lit::<T>(40.0) / beta).sqrt()))
    } else {
        None
    }
}

/// Half-disk `{|z| <= radius, Im z > 0}`. `n_theta` is split across the two
/// angular panels (rounded up to even).
pub fn halfplane_grid<T: Scalar>(
    radius: T,
    n_r: usize,
    n_theta: usize,
) -> Result<QuadratureGrid<T>> {
    if !(radius > T::zero()) || !radius.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "truncation radius must be positive, got {radius}"
        )));
    }
    if n_r == 0 || n_theta == 0 {
        return Err(Error::InvalidParameter(
            "half-plane grid needs n_r >= 1 and n_theta >= 1".into(),
        ));
    }
    let per_panel = n_theta.div_ceil(2);
    let angles: Vec<(Complex<T>, T)> = gauss_legendre_on(per_panel, T::zero(), T::FRAC_PI_2())
        .chain(gauss_legendre_on(per_panel, T::FRAC_PI_2(), T::PI()))
        .map(|(theta, w)| (Complex::new(theta.cos(), theta.sin()), w))
        .collect();

    let mut nodes = Vec::with_capacity(n_r * angles.len());
    let mut weights = Vec::with_capacity(n_r * angles.len());
    for (s, w) in gauss_legendre_on(n_r, T::zero(), radius) {
        for &(e, wt) in &angles {
            nodes.push(e.scale(s));
            weights.push(w * s * wt);
        }
    }
    Ok(QuadratureGrid {
        nodes,
        weights,
        domain: Domain::UpperHalfPlane,
        resolution: Resolution::HalfPlane {
            radius,
            n_r,
            n_theta,
        },
    })
}

impl<T: Scalar> QuadratureGrid<T> {
    pub fn nodes(&self) -> &[Complex<T>] {
        &self.nodes
    }

    pub fn node_weights(&self) -> &[T] {
        &self.weights
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn resolution(&self) -> Resolution<T> {
        self.resolution
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `Σ g(z_i) w_i`; a non-finite `g(z_i)` is an error naming the node.
    pub fn integrate<G>(&self, g: G) -> Result<T>
    where
        G: Fn(Complex<T>) -> T + Sync,
    {
        let values: Vec<T> = self.nodes.par_iter().map(|&z| g(z)).collect();
        self.integrate_values(&values)
    }

    /// Quadrature sum for integrand values already sampled at the nodes.
    pub fn integrate_values(&self, values: &[T]) -> Result<T> {
        assert_eq!(values.len(), self.nodes.len(), "one value per node");
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            let z = self.nodes[index];
            return Err(Error::NonFinite {
                index,
                re: to_f64(z.re),
                im: to_f64(z.im),
            });
        }
        let products: Vec<T> = values
            .iter()
            .zip(&self.weights)
            .map(|(&v, &w)| v * w)
            .collect();
        Ok(pairwise_sum(&products))
    }
}

/// Tree summation; the association order depends only on the length.
pub fn pairwise_sum<T: Scalar>(values: &[T]) -> T {
    const LEAF: usize = 16;
    if values.len() <= LEAF {
        return values.iter().fold(T::zero(), |acc, &v| acc + v);
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Refinement<T> {
    pub value: T,
    /// `|I_ℓ - I_{ℓ-1}| / |I_ℓ|` at the last level (0 when both vanish).
    pub rel_change: T,
    pub converged: bool,
    pub level: u32,
}

pub fn relative_change<T: Scalar>(new: T, old: T) -> T {
    let diff = (new - old).abs();
    if diff == T::zero() {
        T::zero()
    } else {
        diff / new.abs().max(old.abs())
    }
}

/// Integrates on `base`, then on successively doubled grids until two
/// consecutive values agree to `rel_tol` or `max_level` refinements are used.
pub fn refine_until<T, G>(
    g: G,
    base: Resolution<T>,
    rel_tol: T,
    max_level: u32,
) -> Result<Refinement<T>>
where
    T: Scalar,
    G: Fn(Complex<T>) -> T + Sync,
{
    if !(rel_tol > T::zero()) {
        return Err(Error::InvalidParameter("rel_tol must be positive".into()));
    }
    let mut value = base.build()?.integrate(&g)?;
    let mut rel_change = T::infinity();
    for level in 1..=max_level {
        let next = base.at_level(level).build()?.integrate(&g)?;
        rel_change = relative_change(next, value);
        value = next;
        if rel_change < rel_tol {
            return Ok(Refinement {
                value,
                rel_change,
                converged: true,
                level,
            });
        }
    }
    Ok(Refinement {
        value,
        rel_change,
        converged: false,
        level: max_level,
    })
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub value: f64,
    pub std_error: f64,
}

fn summarize(samples: impl Iterator<Item = f64>, scale: f64) -> McEstimate {
    let (mut n, mut mean, mut m2) = (0.0f64, 0.0f64, 0.0f64);
    for x in samples {
        n += 1.0;
        let delta = x - mean;
        mean += delta / n;
        m2 += delta * (x - mean);
    }
    let var = if n > 1.0 { m2 / (n - 1.0) } else { 0.0 };
    McEstimate {
        value: scale * mean,
        std_error: scale * (var / n).sqrt(),
    }
}

/// `∫_𝔻 g dA` from uniform samples in the disk.
pub fn monte_carlo_disk<T, G>(g: G, samples: usize, seed: u64) -> McEstimate
where
    T: Scalar,
    G: Fn(Complex<T>) -> T,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let unit = Uniform::new(0.0f64, 1.0);
    let draws = (0..samples).map(|_| {
        let s = unit.sample(&mut rng).sqrt();
        let theta = std::f64::consts::TAU * unit.sample(&mut rng);
        let z = Complex::new(lit::<T>(s * theta.cos()), lit::<T>(s * theta.sin()));
        to_f64(g(z))
    });
    summarize(draws, std::f64::consts::PI)
}

/// `∫_{ℂ⁺} g dA` by importance sampling from the density
/// `(2β/π) e^{-β|z|²}` on the upper half-plane.
pub fn monte_carlo_halfplane<T, G>(g: G, beta: f64, samples: usize, seed: u64) -> Result<McEstimate>
where
    T: Scalar,
    G: Fn(Complex<T>) -> T,
{
    if !(beta > 0.0) {
        return Err(Error::InvalidParameter(
            "Monte Carlo on the half-plane needs beta > 0".into(),
        ));
    }
    let sigma = (0.5 / beta).sqrt();
    let normal = Normal::new(0.0, sigma).expect("positive sigma");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws = (0..samples).map(|_| {
        let x: f64 = normal.sample(&mut rng);
        let y: f64 = normal.sample(&mut rng);
        let y = if y == 0.0 { f64::MIN_POSITIVE } else { y.abs() };
        let z = Complex::new(lit::<T>(x), lit::<T>(y));
        to_f64(g(z)) * (beta * (x * x + y * y)).exp()
    });
    Ok(summarize(draws, std::f64::consts::PI / (2.0 * beta)))
}
