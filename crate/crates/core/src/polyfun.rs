//! Polyanalytic functions stored through their analytic components.
//!
//! `PolyFunction { components: [h_0, ..., h_{q-1}] }` represents
//! `f(z) = Σ_k z̄^k h_k(z)`. The monomial `z̄^k z^j` sits at
//! `components[k].coeffs()[j]`. Every operation here is coefficient-level and
//! works for any `T: Clone + Num`, so exact rational coefficients are
//! supported alongside floats.

use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use num_complex::Complex;
use num_traits::{Num, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Polynomial in `z` with complex coefficients; `coeffs[j]` multiplies `z^j`.
#[derive(Debug, Clone)]
pub struct PowerSeries<T> {
    coeffs: Vec<Complex<T>>,
}

impl<T: Clone + Num> PowerSeries<T> {
    pub fn new(coeffs: Vec<Complex<T>>) -> Self {
        if coeffs.is_empty() {
            return Self::zero();
        }
        PowerSeries { coeffs }
    }

    pub fn from_real(coeffs: impl IntoIterator<Item = T>) -> Self {
        Self::new(
            coeffs
                .into_iter()
                .map(|c| Complex::new(c, T::zero()))
                .collect(),
        )
    }

    pub fn zero() -> Self {
        PowerSeries {
            coeffs: vec![Complex::zero()],
        }
    }

    pub fn constant(c: Complex<T>) -> Self {
        PowerSeries { coeffs: vec![c] }
    }

    /// `c · z^j`
    pub fn monomial(j: usize, c: Complex<T>) -> Self {
        let mut coeffs = vec![Complex::zero(); j + 1];
        coeffs[j] = c;
        PowerSeries { coeffs }
    }

    /// Taylor polynomial of `e^z` through `z^degree`.
    pub fn exp_taylor(degree: usize) -> Self {
        let mut coeffs = Vec::with_capacity(degree + 1);
        let mut c = T::one();
        let mut j = T::zero();
        coeffs.push(Complex::new(c.clone(), T::zero()));
        for _ in 0..degree {
            j = j + T::one();
            c = c / j.clone();
            coeffs.push(Complex::new(c.clone(), T::zero()));
        }
        PowerSeries { coeffs }
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    /// Stored length minus one; trailing zeros count.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, j: usize) -> Complex<T> {
        self.coeffs.get(j).cloned().unwrap_or_else(Complex::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Length once trailing zero coefficients are dropped (0 for the zero series).
    pub fn significant_len(&self) -> usize {
        self.coeffs
            .iter()
            .rposition(|c| !c.is_zero())
            .map_or(0, |i| i + 1)
    }

    pub fn trimmed(&self) -> Self {
        let n = self.significant_len().max(1);
        PowerSeries {
            coeffs: self.coeffs[..n].to_vec(),
        }
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        let mut acc = Complex::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * z.clone() + c.clone();
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let mut factor = T::zero();
        let coeffs = self.coeffs[1..]
            .iter()
            .map(|c| {
                factor = factor.clone() + T::one();
                c.scale(factor.clone())
            })
            .collect();
        PowerSeries { coeffs }
    }

    /// Multiplies the coefficient of `z^j` by `r^(offset + j)`.
    fn scale_powers(&self, r: &T, offset: usize) -> Self {
        let mut power = num_traits::pow(r.clone(), offset);
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let scaled = c.scale(power.clone());
                power = power.clone() * r.clone();
                scaled
            })
            .collect();
        PowerSeries { coeffs }
    }

    /// Keeps coefficients of `z^j` for `j <= m`.
    pub fn truncate(&self, m: usize) -> Self {
        let n = (m + 1).min(self.coeffs.len());
        PowerSeries {
            coeffs: self.coeffs[..n].to_vec(),
        }
    }

    pub fn scale(&self, c: &Complex<T>) -> Self {
        PowerSeries {
            coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect(),
        }
    }

    fn zip_with(&self, other: &Self, op: impl Fn(Complex<T>, Complex<T>) -> Complex<T>) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        PowerSeries {
            coeffs: (0..n).map(|j| op(self.coeff(j), other.coeff(j))).collect(),
        }
    }
}

impl<T: Clone + Num> PartialEq for PowerSeries<T> {
    fn eq(&self, other: &Self) -> bool {
        let n = self.significant_len();
        n == other.significant_len() && self.coeffs[..n] == other.coeffs[..n]
    }
}

/// Dilation parameter `r ∈ (0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DilationFactor<T>(T);

impl<T: Clone + Num + PartialOrd + ToPrimitive> DilationFactor<T> {
    pub fn new(r: T) -> Result<Self> {
        if r > T::zero() && r <= T::one() {
            Ok(DilationFactor(r))
        } else {
            Err(Error::InvalidDilation(r.to_f64().unwrap_or(f64::NAN)))
        }
    }

    pub fn value(&self) -> T {
        self.0.clone()
    }
}

/// q-analytic function `Σ_{k<q} z̄^k h_k(z)` with polynomial components.
///
/// `q` is declared, not inferred: a vanishing top component is kept.
#[derive(Debug, Clone)]
pub struct PolyFunction<T> {
    components: Vec<PowerSeries<T>>,
}

/// Equal declared `q` and equal components up to trailing zeros.
impl<T: Clone + Num> PartialEq for PolyFunction<T> {
    fn eq(&self, other: &Self) -> bool {
        self.components == other.components
    }
}

impl<T: Clone + Num> PolyFunction<T> {
    pub fn new(components: Vec<PowerSeries<T>>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::ZeroDegree);
        }
        Ok(PolyFunction { components })
    }

    /// Analytic function (q = 1).
    pub fn analytic(h: PowerSeries<T>) -> Self {
        PolyFunction {
            components: vec![h],
        }
    }

    pub fn zero(q: usize) -> Result<Self> {
        if q == 0 {
            return Err(Error::ZeroDegree);
        }
        Ok(PolyFunction {
            components: vec![PowerSeries::zero(); q],
        })
    }

    pub fn constant(c: Complex<T>) -> Self {
        Self::analytic(PowerSeries::constant(c))
    }

    /// Builds `Σ c_{kj} z̄^k z^j` from `(k, j) -> c` entries.
    pub fn from_monomials<I>(entries: I, q: usize) -> Result<Self>
    where
        I: IntoIterator<Item = ((usize, usize), Complex<T>)>,
    {
        if q == 0 {
            return Err(Error::ZeroDegree);
        }
        let mut per_component: Vec<BTreeMap<usize, Complex<T>>> = vec![BTreeMap::new(); q];
        for ((k, j), c) in entries {
            if k >= q {
                return Err(Error::ComponentOutOfRange { k, j, q });
            }
            let slot = per_component[k].entry(j).or_insert_with(Complex::zero);
            *slot = slot.clone() + c;
        }
        let components = per_component
            .into_iter()
            .map(|m| {
                let len = m.keys().next_back().map_or(1, |&j| j + 1);
                let mut coeffs = vec![Complex::zero(); len];
                for (j, c) in m {
                    coeffs[j] = c;
                }
                PowerSeries::new(coeffs)
            })
            .collect();
        Ok(PolyFunction { components })
    }

    /// `z̄^k · h(z)` inside a q-analytic function.
    pub fn antiholomorphic_times(k: usize, h: PowerSeries<T>, q: usize) -> Result<Self> {
        if k >= q {
            return Err(Error::ComponentOutOfRange { k, j: 0, q });
        }
        let mut components = vec![PowerSeries::zero(); q];
        components[k] = h;
        Ok(PolyFunction { components })
    }

    pub fn q(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[PowerSeries<T>] {
        &self.components
    }

    pub fn component(&self, k: usize) -> Option<&PowerSeries<T>> {
        self.components.get(k)
    }

    /// Largest stored power of `z` over all components.
    pub fn z_degree(&self) -> usize {
        self.components
            .iter()
            .map(|h| h.degree())
            .max()
            .unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|h| h.is_zero())
    }

    /// Nonzero monomials as `(k, j, c)`, ordered by `k` then `j`.
    pub fn monomials(&self) -> impl Iterator<Item = (usize, usize, &Complex<T>)> + '_ {
        self.components.iter().enumerate().flat_map(|(k, h)| {
            h.coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(move |(j, c)| (k, j, c))
        })
    }

    /// Same function regardless of declared `q` (zero components padded).
    pub fn same_function(&self, other: &Self) -> bool {
        let q = self.q().max(other.q());
        let zero = PowerSeries::zero();
        (0..q).all(|k| {
            self.components.get(k).unwrap_or(&zero) == other.components.get(k).unwrap_or(&zero)
        })
    }

    /// `∂_z f`: differentiates every component, keeps `q`.
    pub fn d_z(&self) -> Self {
        PolyFunction {
            components: self.components.iter().map(|h| h.derivative()).collect(),
        }
    }

    /// `∂_z̄ f`: component `k` becomes `(k+1) h_{k+1}`; `q` drops by one
    /// (never below 1).
    pub fn d_zbar(&self) -> Self {
        let q = self.q();
        if q == 1 {
            return PolyFunction {
                components: vec![PowerSeries::zero()],
            };
        }
        let mut factor = T::zero();
        let components = self.components[1..]
            .iter()
            .map(|h| {
                factor = factor.clone() + T::one();
                h.scale(&Complex::new(factor.clone(), T::zero()))
            })
            .collect();
        PolyFunction { components }
    }

    /// `f_r(z) = f(rz)`: the coefficient of `z̄^k z^j` picks up `r^(k+j)`.
    pub fn dilate(&self, r: &DilationFactor<T>) -> Self {
        let r = &r.0;
        if r.is_one() {
            return self.clone();
        }
        PolyFunction {
            components: self
                .components
                .iter()
                .enumerate()
                .map(|(k, h)| h.scale_powers(r, k))
                .collect(),
        }
    }

    /// Drops every `z^j` with `j > m`; the `z̄` degree is untouched.
    pub fn truncate(&self, m: usize) -> Self {
        PolyFunction {
            components: self.components.iter().map(|h| h.truncate(m)).collect(),
        }
    }

    pub fn scale(&self, c: &Complex<T>) -> Self {
        PolyFunction {
            components: self.components.iter().map(|h| h.scale(c)).collect(),
        }
    }

    fn zip_with(
        &self,
        other: &Self,
        op: impl Fn(Complex<T>, Complex<T>) -> Complex<T> + Copy,
    ) -> Self {
        let q = self.q().max(other.q());
        let zero = PowerSeries::zero();
        let components = (0..q)
            .map(|k| {
                let a = self.components.get(k).unwrap_or(&zero);
                let b = other.components.get(k).unwrap_or(&zero);
                a.zip_with(b, op)
            })
            .collect();
        PolyFunction { components }
    }

    /// Coefficient-wise `f - g`, `q = max(q_f, q_g)`.
    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }
}

impl<T: Clone + Num + Neg<Output = T>> PolyFunction<T> {
    /// `Σ_k conj(z)^k h_k(z)`, outer Horner in `z̄`.
    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        let zbar = z.conj();
        let mut acc = Complex::zero();
        for h in self.components.iter().rev() {
            acc = acc * zbar.clone() + h.eval(z.clone());
        }
        acc
    }
}

impl<T: Clone + Num> Sub for &PolyFunction<T> {
    type Output = PolyFunction<T>;
    fn sub(self, rhs: Self) -> PolyFunction<T> {
        PolyFunction::sub(self, rhs)
    }
}

impl<T: Clone + Num> Add for &PolyFunction<T> {
    type Output = PolyFunction<T>;
    fn add(self, rhs: Self) -> PolyFunction<T> {
        PolyFunction::add(self, rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    type C = Complex<f64>;
    type Q = Ratio<i64>;

    fn c(re: f64, im: f64) -> C {
        Complex::new(re, im)
    }

    fn mono(entries: &[((usize, usize), f64)], q: usize) -> PolyFunction<f64> {
        PolyFunction::from_monomials(entries.iter().map(|&(kj, v)| (kj, c(v, 0.0))), q).unwrap()
    }

    #[test]
    fn eval_conjugation() {
        let f = mono(&[((1, 0), 1.0)], 2);
        assert_eq!(f.eval(c(0.0, 0.5)), c(0.0, -0.5));
    }

    #[test]
    fn eval_constant_and_modulus_squared() {
        let one = PolyFunction::constant(c(1.0, 0.0));
        assert_eq!(one.eval(c(0.3, -0.7)), c(1.0, 0.0));
        let zz = mono(&[((1, 1), 1.0)], 2);
        assert_eq!(zz.eval(c(1.0, 1.0)), c(2.0, 0.0));
    }

    #[test]
    fn d_z_examples() {
        let zz = mono(&[((1, 1), 1.0)], 2);
        assert!(zz.d_z().same_function(&mono(&[((1, 0), 1.0)], 2)));

        let z2 = mono(&[((0, 2), 1.0)], 1);
        assert!(z2.d_z().same_function(&mono(&[((0, 1), 2.0)], 1)));

        let zbar2 = mono(&[((2, 0), 1.0)], 3);
        let d = zbar2.d_z();
        assert_eq!(d.q(), 3);
        assert!(d.is_zero());
    }

    #[test]
    fn d_zbar_examples() {
        let zbar2 = mono(&[((2, 0), 1.0)], 3);
        let d = zbar2.d_zbar();
        assert_eq!(d.q(), 2);
        assert!(d.same_function(&mono(&[((1, 0), 2.0)], 2)));

        let z = mono(&[((0, 1), 1.0)], 1);
        let d = z.d_zbar();
        assert_eq!(d.q(), 1);
        assert!(d.is_zero());

        let zbar_z2 = mono(&[((1, 2), 1.0)], 2);
        assert!(zbar_z2.d_zbar().same_function(&mono(&[((0, 2), 1.0)], 1)));
    }

    #[test]
    fn dilate_examples() {
        let zz = mono(&[((1, 1), 1.0)], 2);
        let half = DilationFactor::new(0.5).unwrap();
        assert!(zz.dilate(&half).same_function(&mono(&[((1, 1), 0.25)], 2)));

        let f = mono(&[((2, 0), 1.0), ((0, 3), 1.0)], 3);
        let expected = mono(&[((2, 0), 0.25), ((0, 3), 0.125)], 3);
        assert_eq!(f.dilate(&half), expected);

        let one = DilationFactor::new(1.0).unwrap();
        assert_eq!(f.dilate(&one), f);
    }

    #[test]
    fn dilation_factor_range() {
        assert!(DilationFactor::new(0.0).is_err());
        assert!(DilationFactor::new(1.5).is_err());
        assert!(DilationFactor::new(-0.1).is_err());
        assert!(DilationFactor::new(f64::NAN).is_err());
        assert!(DilationFactor::new(1.0).is_ok());
    }

    #[test]
    fn truncate_examples() {
        let f = PolyFunction::analytic(PowerSeries::from_real([1.0, 1.0, 1.0]));
        let t = f.truncate(1);
        assert_eq!(
            t,
            PolyFunction::analytic(PowerSeries::from_real([1.0, 1.0]))
        );
        assert_eq!(t.truncate(1), t);

        let g = mono(&[((1, 0), 1.0), ((1, 3), 1.0)], 2);
        assert!(g.truncate(2).same_function(&mono(&[((1, 0), 1.0)], 2)));
    }

    #[test]
    fn from_monomials_rejects_high_k() {
        let err = PolyFunction::from_monomials([((2usize, 0usize), c(1.0, 0.0))], 2).unwrap_err();
        assert_eq!(err, Error::ComponentOutOfRange { k: 2, j: 0, q: 2 });
        assert_eq!(
            PolyFunction::<f64>::from_monomials([], 0).unwrap_err(),
            Error::ZeroDegree
        );
    }

    #[test]
    fn sub_examples() {
        let zz = mono(&[((1, 1), 1.0)], 2);
        assert!(zz.sub(&zz).is_zero());

        let zbar = mono(&[((1, 0), 1.0)], 2);
        let expected = mono(&[((1, 1), 1.0), ((1, 0), -1.0)], 2);
        assert!((&zz - &zbar).same_function(&expected));

        let r = 0.3;
        let diff = zz.dilate(&DilationFactor::new(r).unwrap()).sub(&zz);
        assert!(diff.same_function(&mono(&[((1, 1), r * r - 1.0)], 2)));
    }

    #[test]
    fn sub_pads_to_larger_q() {
        let a = mono(&[((0, 1), 1.0)], 1);
        let b = mono(&[((2, 0), 1.0)], 3);
        assert_eq!(a.sub(&b).q(), 3);
    }

    #[test]
    fn exact_rational_calculus() {
        let q = |n: i64, d: i64| Complex::new(Q::new(n, d), Q::from_integer(0));
        let f = PolyFunction::from_monomials(
            [((0, 3), q(1, 3)), ((1, 2), q(-2, 5)), ((2, 0), q(7, 1))],
            3,
        )
        .unwrap();
        let r = DilationFactor::new(Q::new(2, 3)).unwrap();
        let s = DilationFactor::new(Q::new(5, 7)).unwrap();
        let rs = DilationFactor::new(Q::new(10, 21)).unwrap();
        assert_eq!(f.dilate(&r).dilate(&s), f.dilate(&rs));

        let mut g = f.clone();
        for _ in 0..3 {
            g = g.d_zbar();
        }
        assert!(g.is_zero());
        assert!(f.d_z().d_zbar().same_function(&f.d_zbar().d_z()));
    }

    #[test]
    fn exp_taylor_coefficients() {
        let e = PowerSeries::<f64>::exp_taylor(4);
        let expect = [1.0, 1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0];
        for (a, b) in e.coeffs().iter().zip(expect) {
            assert!((a.re - b).abs() < 1e-16);
        }
        let v = PowerSeries::<f64>::exp_taylor(30).eval(c(0.3, 0.4));
        let exact = c(0.3, 0.4).exp();
        assert!((v - exact).norm() < 1e-15);
    }

    #[test]
    fn series_equality_ignores_trailing_zeros() {
        let a = PowerSeries::from_real([1.0, 2.0, 0.0, 0.0]);
        let b = PowerSeries::from_real([1.0, 2.0]);
        assert_eq!(a, b);
        assert_eq!(a.degree(), 3);
        assert_eq!(a.trimmed().degree(), 1);
    }
}
