//! Signal processing on finite meet and join semilattices.
//!
//! Signals are indexed by the elements of a [`Lattice`]; shifts are
//! `s ↦ (s_{x∧a})_x`, the Fourier transform is Moebius inversion, and the
//! remaining modules build sampling, concept-lattice, multiset and Wiener
//! filtering tools on top of that.

pub mod bitset;
pub mod concepts;
pub mod dot;
pub mod error;
pub mod fast;
pub mod filtering;
pub mod fixtures;
pub mod io;
pub mod lattice;
pub mod multiset;
pub mod sampling;
pub mod signal;
pub mod transforms;
pub mod wiener;

pub use bitset::BitSet;
pub use error::{Error, Result};
pub use lattice::{ElementSet, Kind, Lattice, Structure, Verdict};
pub use signal::{Domain, Filter, FrequencyResponse, LatticeKey, Scalar, Signal, Spectrum, Variant};
