use std::fmt;

use num_complex::Complex;

use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Domain {
    UnitDisk,
    UpperHalfPlane,
}

impl Domain {
    /// Open-domain membership: `|z| < 1` or `Im z > 0`.
    pub fn contains<T: Scalar>(self, z: Complex<T>) -> bool {
        match self {
            Domain::UnitDisk => z.norm_sqr() < T::one(),
            Domain::UpperHalfPlane => z.im > T::zero() && z.re.is_finite(),
        }
    }

    /// Point used for the evaluation term `|f(base)|^p`.
    pub fn base_point<T: Scalar>(self) -> Complex<T> {
        match self {
            Domain::UnitDisk => Complex::new(T::zero(), T::zero()),
            Domain::UpperHalfPlane => Complex::new(T::zero(), T::one()),
        }
    }

    /// Length of the range of `arg z` over the domain.
    pub fn angular_span<T: Scalar>(self) -> T {
        match self {
            Domain::UnitDisk => T::TAU(),
            Domain::UpperHalfPlane => T::PI(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Domain::UnitDisk => "disk",
            Domain::UpperHalfPlane => "halfplane",
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
