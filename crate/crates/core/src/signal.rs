//! Value vectors indexed by lattice elements.
//!
//! Every vector stores its values in the lattice's topological order together
//! with the [`LatticeKey`] of the lattice it was created for, so that mixing
//! vectors from different lattices is caught at the call site.

use std::fmt::Debug;
use std::ops::{AddAssign, Index, IndexMut, Neg, SubAssign};

use num_complex::Complex64;
use num_traits::{Num, NumAssign};

use crate::error::{Error, Result};

/// Which half of the lattice structure drives shifts and transforms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Meet,
    Join,
}

impl Variant {
    pub fn flip(self) -> Variant {
        match self {
            Variant::Meet => Variant::Join,
            Variant::Join => Variant::Meet,
        }
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Variant::Meet => "meet",
            Variant::Join => "join",
        })
    }
}

impl std::str::FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "meet" => Ok(Variant::Meet),
            "join" => Ok(Variant::Join),
            other => Err(format!("unknown variant `{other}` (expected meet or join)")),
        }
    }
}

/// Fingerprint of a lattice: element ids in order plus cover structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LatticeKey(pub u64);

/// Anything that can index a signal.
pub trait Domain {
    fn key(&self) -> LatticeKey;
    fn size(&self) -> usize;
}

/// Field elements used for signal values.
pub trait Scalar:
    Copy + Debug + PartialEq + Num + NumAssign + Neg<Output = Self> + AddAssign + SubAssign + Send + Sync + 'static
{
    fn from_i64(v: i64) -> Self;
    fn from_f64(v: f64) -> Self;
    fn magnitude(self) -> f64;
    fn to_complex(self) -> Complex64;
}

impl Scalar for f64 {
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_f64(v: f64) -> Self {
        v
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
    fn to_complex(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }
}

impl Scalar for i64 {
    fn from_i64(v: i64) -> Self {
        v
    }
    fn from_f64(v: f64) -> Self {
        v.round() as i64
    }
    fn magnitude(self) -> f64 {
        self.unsigned_abs() as f64
    }
    fn to_complex(self) -> Complex64 {
        Complex64::new(self as f64, 0.0)
    }
}

impl Scalar for Complex64 {
    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }
    fn from_f64(v: f64) -> Self {
        Complex64::new(v, 0.0)
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
    fn to_complex(self) -> Complex64 {
        self
    }
}

macro_rules! lattice_vector {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, Debug, PartialEq)]
        pub struct $name<T = f64> {
            key: LatticeKey,
            values: Vec<T>,
        }

        impl<T: Scalar> $name<T> {
            pub fn new(domain: &impl Domain, values: Vec<T>) -> Result<Self> {
                if values.len() != domain.size() {
                    return Err(Error::DimensionMismatch {
                        expected: domain.size(),
                        actual: values.len(),
                    });
                }
                Ok($name { key: domain.key(), values })
            }

            pub fn zeros(domain: &impl Domain) -> Self {
                $name { key: domain.key(), values: vec![T::zero(); domain.size()] }
            }

            /// Unit vector at position `i`.
            pub fn unit(domain: &impl Domain, i: usize) -> Self {
                let mut v = Self::zeros(domain);
                v.values[i] = T::one();
                v
            }

            pub(crate) fn from_parts(key: LatticeKey, values: Vec<T>) -> Self {
                $name { key, values }
            }

            pub fn key(&self) -> LatticeKey {
                self.key
            }

            pub fn len(&self) -> usize {
                self.values.len()
            }

            pub fn is_empty(&self) -> bool {
                self.values.is_empty()
            }

            pub fn values(&self) -> &[T] {
                &self.values
            }

            pub fn into_values(self) -> Vec<T> {
                self.values
            }

            pub fn iter(&self) -> std::slice::Iter<'_, T> {
                self.values.iter()
            }

            pub fn iter_mut(&mut self) -> std::slice::IterMut<'_, T> {
                self.values.iter_mut()
            }

            pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> $name<U> {
                $name { key: self.key, values: self.values.iter().map(|&v| f(v)).collect() }
            }

            pub fn check(&self, domain: &impl Domain) -> Result<()> {
                if self.key != domain.key() || self.values.len() != domain.size() {
                    return Err(Error::LatticeMismatch);
                }
                Ok(())
            }

            pub fn norm2(&self) -> f64 {
                self.values.iter().map(|v| v.magnitude().powi(2)).sum::<f64>().sqrt()
            }
        }

        impl<T: Scalar> $name<T> {
            pub fn to_complex(&self) -> $name<Complex64> {
                self.map(Scalar::to_complex)
            }
        }

        impl<T> Index<usize> for $name<T> {
            type Output = T;
            fn index(&self, i: usize) -> &T {
                &self.values[i]
            }
        }

        impl<T> IndexMut<usize> for $name<T> {
            fn index_mut(&mut self, i: usize) -> &mut T {
                &mut self.values[i]
            }
        }
    };
}

lattice_vector!(
    /// Values `s_x` at each element.
    Signal
);
lattice_vector!(
    /// Fourier coefficients, one per element (frequency).
    Spectrum
);
lattice_vector!(
    /// Filter coefficients `h_a`, one per shift.
    Filter
);
lattice_vector!(
    /// Per-frequency gain of a filter.
    FrequencyResponse
);

macro_rules! reinterpret {
    ($from:ident => $to:ident, $fn:ident) => {
        impl<T: Scalar> $from<T> {
            /// Same values viewed with another role.
            pub fn $fn(self) -> $to<T> {
                $to {
                    key: self.key,
                    values: self.values,
                }
            }
        }
    };
}

reinterpret!(Signal => Filter, into_filter);
reinterpret!(Filter => Signal, into_signal);
reinterpret!(Spectrum => FrequencyResponse, into_response);
reinterpret!(FrequencyResponse => Spectrum, into_spectrum);
