//! Fast zeta/Moebius transforms in `O(k·n)` using one in-place pass per
//! join-irreducible generator.
//!
//! Work in the variant order, completed by an artificial top `⊤` if needed.
//! Let `g_1 < ... < g_k` be the join-irreducibles (elements with exactly one
//! lower cover) in topological order and `φ(x) = {i : g_i ≤ x}`. Pass `j`
//! moves the value of every `z` with `g_j ≰ z` onto `x = z ∨ g_j`, provided
//! `x ≠ ⊤` and `φ(x)`, `φ(z)` agree on all generators after `g_j`. Running
//! the passes for `j = k, …, 1` with `+=` gives the zeta transform
//! (down-set sums); running them for `j = 1, …, k` with `-=` inverts it.
//! Targets are never sources within one pass, so updates are in place.

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::signal::{LatticeKey, Scalar, Signal, Spectrum, Variant};

const NONE: u32 = u32::MAX;

/// Precomputed pass targets for one lattice and variant.
#[derive(Clone, Debug)]
pub struct FastPlan {
    key: LatticeKey,
    variant: Variant,
    n: usize,
    passes: Passes,
}

#[derive(Clone, Debug)]
enum Passes {
    /// `targets[j*n + z]` is the element receiving `z` in pass `j`.
    Table { k: usize, targets: Vec<u32> },
    /// Product of chains, computed from coordinates.
    Grid(GridPasses),
}

/// Product-of-chains lattice in graded order (elements sorted by coordinate
/// sum, ties by mixed-radix value with the first coordinate most significant).
#[derive(Clone, Debug)]
pub(crate) struct GridPasses {
    /// Mixed-radix place value of each coordinate.
    strides: Vec<usize>,
    radices: Vec<usize>,
    graded_to_lex: Vec<u32>,
    lex_to_graded: Vec<u32>,
    /// `(coordinate, level)` per generator `level·e_i`, topological order.
    generators: Vec<(usize, usize)>,
    /// Join variant: indices are reversed (`a ↦ m − a`).
    reversed: bool,
}

impl GridPasses {
    pub(crate) fn new(capacities: &[usize], graded_to_lex: Vec<u32>, reversed: bool) -> Self {
        let radices: Vec<usize> = capacities.iter().map(|&m| m + 1).collect();
        let f = radices.len();
        let mut strides = vec![1; f];
        for i in (0..f.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * radices[i + 1];
        }
        let mut lex_to_graded = vec![0u32; graded_to_lex.len()];
        for (g, &l) in graded_to_lex.iter().enumerate() {
            lex_to_graded[l as usize] = g as u32;
        }
        // generator c·e_i has grade c and lex value c·stride_i
        let mut generators: Vec<(usize, usize)> = (0..f).flat_map(|i| (1..radices[i]).map(move |c| (i, c))).collect();
        generators.sort_by_key(|&(i, c)| lex_to_graded[c * strides[i]]);
        GridPasses {
            strides,
            radices,
            graded_to_lex,
            lex_to_graded,
            generators,
            reversed,
        }
    }

    fn run<T: Scalar>(&self, values: &mut [T], inverse: bool) {
        let n = values.len();
        if self.reversed {
            values.reverse();
        }
        let order: Box<dyn Iterator<Item = &(usize, usize)>> = if inverse {
            Box::new(self.generators.iter())
        } else {
            Box::new(self.generators.iter().rev())
        };
        for &(i, c) in order {
            let (stride, radix) = (self.strides[i], self.radices[i]);
            for z in 0..n {
                let lz = self.graded_to_lex[z] as usize;
                let zi = (lz / stride) % radix;
                if zi < c {
                    let x = self.lex_to_graded[lz + (c - zi) * stride] as usize;
                    let v = values[z];
                    if inverse {
                        values[x] -= v;
                    } else {
                        values[x] += v;
                    }
                }
            }
        }
        if self.reversed {
            values.reverse();
        }
    }
}

impl FastPlan {
    pub fn new(lattice: &Lattice, variant: Variant) -> Result<FastPlan> {
        let emb = lattice.embed_subsets_v(variant)?;
        let n = lattice.len();
        let k = emb.generators.len();
        let mut targets = vec![NONE; k * n];
        for (j, &g) in emb.generators.iter().enumerate() {
            let above_g = lattice.above_v(variant, g);
            for z in 0..n {
                if lattice.leq_v(variant, g, z) {
                    continue;
                }
                let above_z = lattice.above_v(variant, z);
                // least common upper bound in the variant order, if any
                let x = match variant {
                    Variant::Meet => above_z.first_common(above_g),
                    Variant::Join => above_z.last_common(above_g),
                };
                if let Some(x) = x {
                    if emb.codes[x].agrees_above(&emb.codes[z], j) {
                        targets[j * n + z] = x as u32;
                    }
                }
            }
        }
        Ok(FastPlan {
            key: lattice.key(),
            variant,
            n,
            passes: Passes::Table { k, targets },
        })
    }

    pub(crate) fn from_grid(key: LatticeKey, variant: Variant, grid: GridPasses) -> FastPlan {
        FastPlan {
            key,
            variant,
            n: grid.graded_to_lex.len(),
            passes: Passes::Grid(grid),
        }
    }

    pub fn key(&self) -> LatticeKey {
        self.key
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Number of generators `k` (passes per transform).
    pub fn passes(&self) -> usize {
        match &self.passes {
            Passes::Table { k, .. } => *k,
            Passes::Grid(g) => g.generators.len(),
        }
    }

    /// Elementary steps per transform: every element is visited once per pass.
    pub fn steps(&self) -> usize {
        self.passes() * self.n
    }

    /// In-place zeta transform (spectrum to signal). Returns the step count.
    pub fn zeta_in_place<T: Scalar>(&self, values: &mut [T]) -> Result<usize> {
        self.run(values, false)
    }

    /// In-place Moebius transform (signal to spectrum). Returns the step count.
    pub fn moebius_in_place<T: Scalar>(&self, values: &mut [T]) -> Result<usize> {
        self.run(values, true)
    }

    fn run<T: Scalar>(&self, values: &mut [T], inverse: bool) -> Result<usize> {
        if values.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: values.len(),
            });
        }
        match &self.passes {
            Passes::Table { k, targets } => {
                let n = self.n;
                let mut pass = |j: usize| {
                    let row = &targets[j * n..(j + 1) * n];
                    for (z, &x) in row.iter().enumerate() {
                        if x != NONE {
                            let v = values[z];
                            if inverse {
                                values[x as usize] -= v;
                            } else {
                                values[x as usize] += v;
                            }
                        }
                    }
                };
                if inverse {
                    (0..*k).for_each(&mut pass);
                } else {
                    (0..*k).rev().for_each(&mut pass);
                }
            }
            Passes::Grid(g) => g.run(values, inverse),
        }
        Ok(self.steps())
    }

    pub fn dlt<T: Scalar>(&self, s: &Signal<T>) -> Result<Spectrum<T>> {
        if s.key() != self.key {
            return Err(Error::LatticeMismatch);
        }
        let mut v = s.values().to_vec();
        self.moebius_in_place(&mut v)?;
        Ok(Spectrum::from_parts(self.key, v))
    }

    pub fn idlt<T: Scalar>(&self, spectrum: &Spectrum<T>) -> Result<Signal<T>> {
        if spectrum.key() != self.key {
            return Err(Error::LatticeMismatch);
        }
        let mut v = spectrum.values().to_vec();
        self.zeta_in_place(&mut v)?;
        Ok(Signal::from_parts(self.key, v))
    }
}

/// Fast forward transform; builds a plan on every call.
pub fn dlt_fast<T: Scalar>(lattice: &Lattice, s: &Signal<T>, variant: Variant) -> Result<Spectrum<T>> {
    s.check(lattice)?;
    FastPlan::new(lattice, variant)?.dlt(s)
}

pub fn idlt_fast<T: Scalar>(lattice: &Lattice, spectrum: &Spectrum<T>, variant: Variant) -> Result<Signal<T>> {
    spectrum.check(lattice)?;
    FastPlan::new(lattice, variant)?.idlt(spectrum)
}
