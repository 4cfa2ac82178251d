//! Small reference lattices, signals and contexts shipped with the crate.

use crate::concepts::Context;
use crate::io::{self, EdgePolicy};
use crate::lattice::Lattice;

pub const SEMILATTICE8: &str = include_str!("../fixtures/semilattice8.lat");
pub const CUBE3: &str = include_str!("../fixtures/cube3.lat");
pub const BOWTIE: &str = include_str!("../fixtures/bowtie.lat");
pub const SEMILATTICE8_SIGNAL: &str = include_str!("../fixtures/semilattice8_signal.csv");
pub const SEMILATTICE8_LOWPASS: &str = include_str!("../fixtures/semilattice8_lowpass.csv");
pub const TELCO_CONTEXT: &str = include_str!("../fixtures/telco_context.csv");
pub const TELCO_CHURN: &str = include_str!("../fixtures/telco_churn.csv");

/// Meet-semilattice `a..h` with maximal elements `g` and `h`.
pub fn eight_element_semilattice() -> Lattice {
    io::parse_lattice(SEMILATTICE8, EdgePolicy::Strict).expect("fixture parses")
}

/// Powerset of a three-element set.
pub fn boolean_cube() -> Lattice {
    io::parse_lattice(CUBE3, EdgePolicy::Strict).expect("fixture parses")
}

/// Poset where `d` and `e` have two maximal common lower bounds.
pub fn bowtie() -> Lattice {
    io::parse_lattice(BOWTIE, EdgePolicy::Strict).expect("fixture parses")
}

/// Total order `c0 < c1 < ... < c{n-1}`.
pub fn chain(n: usize) -> Lattice {
    let ids: Vec<String> = (0..n).map(|i| format!("c{i}")).collect();
    let covers: Vec<(String, String)> = (1..n).map(|i| (ids[i].clone(), ids[i - 1].clone())).collect();
    Lattice::from_covers(&ids, &covers).expect("chain is valid")
}

/// Signal `(2,1,2,5,5,4,5,8)` on [`eight_element_semilattice`].
pub fn sparse_signal_values() -> Vec<f64> {
    vec![2.0, 1.0, 2.0, 5.0, 5.0, 4.0, 5.0, 8.0]
}

/// Seven users with eight binary properties.
pub fn telco_context() -> Context {
    io::parse_context(TELCO_CONTEXT).expect("fixture parses")
}

/// Churn label per user of [`telco_context`].
pub fn telco_churn() -> Vec<(String, f64)> {
    io::parse_labels(TELCO_CHURN).expect("fixture parses")
}
