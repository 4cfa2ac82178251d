//! Moebius function and the discrete lattice transform.
//!
//! For the meet variant the spectrum is `ŝ_y = Σ_{x ≤ y} μ(x,y) s_x` and the
//! inverse is the zeta transform `s_x = Σ_{y ≤ x} ŝ_y`. The join variant is
//! the same construction on the reversed order.

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::signal::{Domain, LatticeKey, Scalar, Signal, Spectrum, Variant};

/// Integer matrix as rows.
pub type IntMatrix = Vec<Vec<i64>>;

/// Largest lattice for which dense matrices are materialized; set
/// `LATTICE_DSP_MAX_N` to override.
pub fn dense_cap() -> usize {
    std::env::var("LATTICE_DSP_MAX_N")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(4096)
}

pub(crate) fn check_dense(n: usize) -> Result<()> {
    let cap = dense_cap();
    if n > cap {
        return Err(Error::TooLarge { size: n, cap });
    }
    Ok(())
}

/// Nonzero Moebius values `μ_v(x,y)` for `x ≤_v y`, stored by column `y`.
#[derive(Clone, Debug)]
pub struct MoebiusTable {
    key: LatticeKey,
    variant: Variant,
    columns: Vec<Vec<(usize, i64)>>,
}

impl MoebiusTable {
    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn key(&self) -> LatticeKey {
        self.key
    }

    /// `μ_v(x,y)`; zero for incomparable pairs.
    pub fn get(&self, x: usize, y: usize) -> i64 {
        let col = &self.columns[y];
        col.binary_search_by_key(&x, |&(i, _)| i).map(|p| col[p].1).unwrap_or(0)
    }

    /// Nonzero entries `(x, μ_v(x,y))` of column `y`, ascending in `x`.
    pub fn column(&self, y: usize) -> &[(usize, i64)] {
        &self.columns[y]
    }

    pub fn nonzeros(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    /// `out_y = Σ_x μ_v(x,y) v_x`: the forward transform.
    pub fn apply<T: Scalar>(&self, values: &[T]) -> Vec<T> {
        self.columns
            .iter()
            .map(|col| {
                col.iter()
                    .fold(T::zero(), |acc, &(x, m)| acc + T::from_i64(m) * values[x])
            })
            .collect()
    }

    /// `out_x = Σ_y μ_v(x,y) v_y`: the transposed action.
    pub fn apply_transpose<T: Scalar>(&self, values: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); values.len()];
        for (y, col) in self.columns.iter().enumerate() {
            let v = values[y];
            for &(x, m) in col {
                out[x] += T::from_i64(m) * v;
            }
        }
        out
    }
}

/// Moebius function of the variant order.
pub fn moebius(lattice: &Lattice, variant: Variant) -> Result<MoebiusTable> {
    let n = lattice.len();
    let mut columns: Vec<Vec<(usize, i64)>> = vec![Vec::new(); n];
    let mut row = vec![0i64; n];
    for x in 0..n {
        // μ(x, ·) over the up-set of x, in the variant's topological order
        let above: Vec<usize> = lattice.above_v(variant, x).iter().collect();
        let ordered: Box<dyn Iterator<Item = &usize>> = match variant {
            Variant::Meet => Box::new(above.iter()),
            Variant::Join => Box::new(above.iter().rev()),
        };
        for &y in ordered {
            let m = if y == x {
                1
            } else {
                let mut acc: i64 = 0;
                for z in lattice.above_v(variant, x).iter_common(lattice.below_v(variant, y)) {
                    if z != y {
                        acc = acc.checked_add(row[z]).ok_or(Error::MoebiusOverflow)?;
                    }
                }
                acc.checked_neg().ok_or(Error::MoebiusOverflow)?
            };
            row[y] = m;
            if m != 0 {
                columns[y].push((x, m));
            }
        }
    }
    Ok(MoebiusTable {
        key: lattice.key(),
        variant,
        columns,
    })
}

/// Zeta transform `out_x = Σ_{y ≤_v x} v_y`.
pub fn zeta<T: Scalar>(lattice: &Lattice, variant: Variant, values: &[T]) -> Vec<T> {
    (0..lattice.len())
        .map(|x| {
            lattice
                .below_v(variant, x)
                .iter()
                .fold(T::zero(), |acc, y| acc + values[y])
        })
        .collect()
}

/// Upper sums `out_y = Σ_{x ≥_v y} v_x` (transpose of [`zeta`]).
pub fn zeta_transpose<T: Scalar>(lattice: &Lattice, variant: Variant, values: &[T]) -> Vec<T> {
    (0..lattice.len())
        .map(|y| {
            lattice
                .above_v(variant, y)
                .iter()
                .fold(T::zero(), |acc, x| acc + values[x])
        })
        .collect()
}

/// Forward transform by sparse Moebius accumulation.
pub fn dlt<T: Scalar>(lattice: &Lattice, s: &Signal<T>, variant: Variant) -> Result<Spectrum<T>> {
    lattice.require(variant)?;
    s.check(lattice)?;
    let table = moebius(lattice, variant)?;
    Ok(Spectrum::from_parts(lattice.key(), table.apply(s.values())))
}

/// Inverse transform: sum of coefficients over each down-set.
pub fn idlt<T: Scalar>(lattice: &Lattice, spectrum: &Spectrum<T>, variant: Variant) -> Result<Signal<T>> {
    lattice.require(variant)?;
    spectrum.check(lattice)?;
    Ok(Signal::from_parts(
        lattice.key(),
        zeta(lattice, variant, spectrum.values()),
    ))
}

/// Reusable forward/inverse transform for one lattice and variant.
#[derive(Clone, Debug)]
pub struct Dlt<'a> {
    lattice: &'a Lattice,
    table: MoebiusTable,
}

impl<'a> Dlt<'a> {
    pub fn new(lattice: &'a Lattice, variant: Variant) -> Result<Self> {
        lattice.require(variant)?;
        Ok(Dlt {
            lattice,
            table: moebius(lattice, variant)?,
        })
    }

    pub fn lattice(&self) -> &'a Lattice {
        self.lattice
    }

    pub fn variant(&self) -> Variant {
        self.table.variant
    }

    pub fn table(&self) -> &MoebiusTable {
        &self.table
    }

    pub fn forward<T: Scalar>(&self, s: &Signal<T>) -> Result<Spectrum<T>> {
        s.check(self.lattice)?;
        Ok(Spectrum::from_parts(s.key(), self.table.apply(s.values())))
    }

    pub fn inverse<T: Scalar>(&self, spectrum: &Spectrum<T>) -> Result<Signal<T>> {
        spectrum.check(self.lattice)?;
        Ok(Signal::from_parts(
            spectrum.key(),
            zeta(self.lattice, self.variant(), spectrum.values()),
        ))
    }
}

/// Dense transform matrix, rows indexed by frequency `y`, columns by `x`.
pub fn dlt_matrix(lattice: &Lattice, variant: Variant) -> Result<IntMatrix> {
    check_dense(lattice.size())?;
    let table = moebius(lattice, variant)?;
    let n = lattice.len();
    Ok((0..n)
        .map(|y| {
            let mut row = vec![0; n];
            for &(x, m) in table.column(y) {
                row[x] = m;
            }
            row
        })
        .collect())
}

/// Dense inverse matrix; column `y` is the Fourier basis vector `f^y`.
pub fn idlt_matrix(lattice: &Lattice, variant: Variant) -> Result<IntMatrix> {
    check_dense(lattice.size())?;
    let n = lattice.len();
    Ok((0..n)
        .map(|x| (0..n).map(|y| lattice.leq_v(variant, y, x) as i64).collect())
        .collect())
}

/// Fourier basis vector `f^y = (χ[y ≤_v x])_x`.
pub fn basis_vector(lattice: &Lattice, variant: Variant, y: usize) -> Signal {
    let values = (0..lattice.len())
        .map(|x| if lattice.leq_v(variant, y, x) { 1.0 } else { 0.0 })
        .collect();
    Signal::from_parts(lattice.key(), values)
}
