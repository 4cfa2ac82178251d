//! Shifts, convolution, frequency responses and total-variation ordering.
//!
//! In the meet variant the shift by `a` is `(T_a s)_x = s_{x∧a}`, a filter is
//! `Σ_a h_a T_a`, and its frequency response is `ĥ_y = Σ_{a ≥ y} h_a`.

use crate::error::Result;
use crate::lattice::Lattice;
use crate::signal::{Filter, FrequencyResponse, Scalar, Signal, Variant};
use crate::transforms::{self, check_dense, IntMatrix};

/// `(T_a s)_x = s_{x ∧_v a}`.
pub fn shift<T: Scalar>(lattice: &Lattice, s: &Signal<T>, a: usize, variant: Variant) -> Result<Signal<T>> {
    lattice.require(variant)?;
    s.check(lattice)?;
    let values = (0..lattice.len())
        .map(|x| s[lattice.meet_v_unchecked(variant, x, a)])
        .collect();
    Ok(Signal::from_parts(lattice.key(), values))
}

pub fn shift_by_id<T: Scalar>(lattice: &Lattice, s: &Signal<T>, a: &str, variant: Variant) -> Result<Signal<T>> {
    shift(lattice, s, lattice.index_of(a)?, variant)
}

/// 0/1 matrix of `T_a`: row `x` has its single 1 in column `x ∧_v a`.
pub fn shift_matrix(lattice: &Lattice, a: usize, variant: Variant) -> Result<IntMatrix> {
    lattice.require(variant)?;
    check_dense(lattice.len())?;
    let n = lattice.len();
    Ok((0..n)
        .map(|x| {
            let mut row = vec![0; n];
            row[lattice.meet_v_unchecked(variant, x, a)] = 1;
            row
        })
        .collect())
}

/// `(h ∗ s)_x = Σ_a h_a s_{x ∧_v a}`, evaluated directly.
pub fn convolve<T: Scalar>(lattice: &Lattice, h: &Filter<T>, s: &Signal<T>, variant: Variant) -> Result<Signal<T>> {
    lattice.require(variant)?;
    h.check(lattice)?;
    s.check(lattice)?;
    let taps: Vec<(usize, T)> = h
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != T::zero())
        .map(|(a, &c)| (a, c))
        .collect();
    let values = (0..lattice.len())
        .map(|x| {
            taps.iter().fold(T::zero(), |acc, &(a, c)| {
                acc + c * s[lattice.meet_v_unchecked(variant, x, a)]
            })
        })
        .collect();
    Ok(Signal::from_parts(lattice.key(), values))
}

/// Dense matrix `Σ_a h_a T_a`.
pub fn filter_matrix<T: Scalar>(lattice: &Lattice, h: &Filter<T>, variant: Variant) -> Result<Vec<Vec<T>>> {
    lattice.require(variant)?;
    h.check(lattice)?;
    check_dense(lattice.len())?;
    let n = lattice.len();
    Ok((0..n)
        .map(|x| {
            let mut row = vec![T::zero(); n];
            for (a, &c) in h.iter().enumerate() {
                row[lattice.meet_v_unchecked(variant, x, a)] += c;
            }
            row
        })
        .collect())
}

/// `ĥ_y = Σ_{a ≥_v y} h_a`.
pub fn freq_response<T: Scalar>(lattice: &Lattice, h: &Filter<T>, variant: Variant) -> Result<FrequencyResponse<T>> {
    lattice.require(variant)?;
    h.check(lattice)?;
    Ok(FrequencyResponse::from_parts(
        lattice.key(),
        transforms::zeta_transpose(lattice, variant, h.values()),
    ))
}

/// Inverse of [`freq_response`]: `h_x = Σ_{y ≥_v x} μ_v(x,y) ĥ_y`.
pub fn filter_from_response<T: Scalar>(
    lattice: &Lattice,
    response: &FrequencyResponse<T>,
    variant: Variant,
) -> Result<Filter<T>> {
    lattice.require(variant)?;
    response.check(lattice)?;
    let table = transforms::moebius(lattice, variant)?;
    Ok(Filter::from_parts(
        lattice.key(),
        table.apply_transpose(response.values()),
    ))
}

/// Filter acting as the identity (frequency response ≡ 1).
pub fn trivial_filter(lattice: &Lattice, variant: Variant) -> Result<Filter> {
    let ones = FrequencyResponse::from_parts(lattice.key(), vec![1.0; lattice.len()]);
    filter_from_response(lattice, &ones, variant)
}

/// Trivial filter plus all generating shifts.
pub fn lowpass_filter(lattice: &Lattice, variant: Variant) -> Result<Filter> {
    let mut h = trivial_filter(lattice, variant)?;
    for &g in lattice.generators(variant) {
        h[g] += 1.0;
    }
    Ok(h)
}

/// Norm used inside the total variation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Norm {
    L1,
    #[default]
    L2,
}

impl Norm {
    pub fn of<T: Scalar>(self, values: impl Iterator<Item = T>) -> f64 {
        match self {
            Norm::L1 => values.map(Scalar::magnitude).sum(),
            Norm::L2 => values.map(|v| v.magnitude().powi(2)).sum::<f64>().sqrt(),
        }
    }
}

/// Per-generator variation `‖s − T_g s‖` and its sum.
#[derive(Clone, Debug, PartialEq)]
pub struct TotalVariation {
    /// Generators in topological order.
    pub generators: Vec<usize>,
    pub components: Vec<f64>,
    pub stv: f64,
}

impl TotalVariation {
    /// Componentwise `self ≤ other` within `tol`.
    pub fn leq(&self, other: &TotalVariation, tol: f64) -> bool {
        self.components
            .iter()
            .zip(&other.components)
            .all(|(a, b)| *a <= *b + tol)
    }
}

pub fn total_variation<T: Scalar>(lattice: &Lattice, s: &Signal<T>, variant: Variant) -> Result<TotalVariation> {
    total_variation_with(lattice, s, variant, Norm::L2)
}

pub fn total_variation_with<T: Scalar>(
    lattice: &Lattice,
    s: &Signal<T>,
    variant: Variant,
    norm: Norm,
) -> Result<TotalVariation> {
    lattice.require(variant)?;
    s.check(lattice)?;
    let generators = lattice.generators(variant).to_vec();
    let components: Vec<f64> = generators
        .iter()
        .map(|&g| norm.of((0..lattice.len()).map(|x| s[x] - s[lattice.meet_v_unchecked(variant, x, g)])))
        .collect();
    let stv = components.iter().sum();
    Ok(TotalVariation {
        generators,
        components,
        stv,
    })
}

/// Fourier basis vector `f^y` scaled to unit norm.
pub fn normalized_basis(lattice: &Lattice, variant: Variant, y: usize, norm: Norm) -> Signal {
    let f = transforms::basis_vector(lattice, variant, y);
    let scale = norm.of(f.iter().copied());
    f.map(|v| v / scale)
}

#[derive(Clone, Debug, PartialEq)]
pub struct FrequencyEntry {
    pub element: usize,
    pub tv: TotalVariation,
}

/// Frequencies sorted by total variation of their normalized basis vectors.
#[derive(Clone, Debug)]
pub struct FrequencyOrder {
    /// Ascending by STV; ties by position in the variant's topological order.
    pub entries: Vec<FrequencyEntry>,
}

impl FrequencyOrder {
    /// TV tuple of frequency `y`.
    pub fn tv_of(&self, y: usize) -> &TotalVariation {
        &self
            .entries
            .iter()
            .find(|e| e.element == y)
            .expect("every element is a frequency")
            .tv
    }

    /// Componentwise comparison of the TV tuples of two frequencies.
    pub fn tv_leq(&self, x: usize, y: usize) -> bool {
        self.tv_of(x).leq(self.tv_of(y), 1e-9)
    }
}

pub fn frequency_order(lattice: &Lattice, variant: Variant) -> Result<FrequencyOrder> {
    lattice.require(variant)?;
    let mut entries = (0..lattice.len())
        .map(|y| {
            let f = normalized_basis(lattice, variant, y, Norm::L2);
            Ok(FrequencyEntry {
                element: y,
                tv: total_variation(lattice, &f, variant)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    // quantized so rounding noise in the norms cannot break ties
    let key = |e: &FrequencyEntry| ((e.tv.stv * 1e9).round() as i64, lattice.rank_v(variant, e.element));
    entries.sort_by_key(key);
    Ok(FrequencyOrder { entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::fixtures;
    use crate::transforms::{basis_vector, dlt};

    fn l8() -> Lattice {
        fixtures::eight_element_semilattice()
    }

    #[test]
    fn shift_by_e() {
        let l = l8();
        let s = Signal::new(&l, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0]).unwrap();
        let t = shift_by_id(&l, &s, "e", Variant::Meet).unwrap();
        // (s_a, s_b, s_a, s_a, s_e, s_b, s_a, s_e)
        assert_eq!(t.values(), &[1.0, 2.0, 1.0, 1.0, 5.0, 2.0, 1.0, 5.0]);
        let m = shift_matrix(&l, l.index_of("e").unwrap(), Variant::Meet).unwrap();
        for row in &m {
            assert_eq!(row.iter().sum::<i64>(), 1);
        }
        let bottom = shift(&l, &s, 0, Variant::Meet).unwrap();
        assert_eq!(bottom.values(), &[1.0; 8]);
    }

    #[test]
    fn shift_by_top_is_identity() {
        let l = fixtures::boolean_cube();
        let top = l.maximum().unwrap();
        let m = shift_matrix(&l, top, Variant::Meet).unwrap();
        for (i, row) in m.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                assert_eq!(v, (i == j) as i64);
            }
        }
    }

    #[test]
    fn worked_example_filters() {
        let l = l8();
        let trivial = trivial_filter(&l, Variant::Meet).unwrap();
        // T = T_g + T_h - T_d
        assert_eq!(trivial.values(), &[0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 1.0, 1.0]);
        let low = lowpass_filter(&l, Variant::Meet).unwrap();
        assert_eq!(low.values(), &[0.0, 0.0, 1.0, -1.0, 1.0, 1.0, 2.0, 2.0]);
        let resp = freq_response(&l, &low, Variant::Meet).unwrap();
        // d lies below f, g and h, so its response is h_d + h_f + h_g + h_h = 4
        assert_eq!(resp.values(), &[6.0, 4.0, 4.0, 4.0, 3.0, 3.0, 2.0, 2.0]);
        let te = Filter::<f64>::unit(&l, l.index_of("e").unwrap());
        let resp = freq_response(&l, &te, Variant::Meet).unwrap();
        assert_eq!(resp.values(), &[1.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0]);
        let ones = Signal::new(&l, vec![1.0; 8]).unwrap();
        assert_eq!(convolve(&l, &low, &ones, Variant::Meet).unwrap().values(), &[6.0; 8]);
    }

    #[test]
    fn trivial_filter_with_maximum_is_delta_at_top() {
        let l = fixtures::boolean_cube();
        let t = trivial_filter(&l, Variant::Meet).unwrap();
        assert_eq!(t, Filter::unit(&l, l.maximum().unwrap()));
        let low = lowpass_filter(&l, Variant::Meet).unwrap();
        assert_eq!(low.values(), &[0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0]);
    }

    #[test]
    fn response_of_delta_at_maximal_element() {
        let l = l8();
        let g = l.index_of("g").unwrap();
        let resp = freq_response(&l, &Filter::<i64>::unit(&l, g), Variant::Meet).unwrap();
        let expected: Vec<i64> = (0..8).map(|y| l.leq(y, g) as i64).collect();
        assert_eq!(resp.values(), expected.as_slice());
    }

    #[test]
    fn shifts_compose_by_meet() {
        let l = l8();
        let s = Signal::new(&l, (0..8).map(|i| (i * i) as i64).collect()).unwrap();
        for a in 0..8 {
            for b in 0..8 {
                let ab = shift(&l, &shift(&l, &s, b, Variant::Meet).unwrap(), a, Variant::Meet).unwrap();
                let m = l.meet(a, b).unwrap();
                assert_eq!(ab, shift(&l, &s, m, Variant::Meet).unwrap());
            }
        }
    }

    #[test]
    fn basis_vectors_are_eigenvectors() {
        let l = l8();
        for y in 0..8 {
            let f = basis_vector(&l, Variant::Meet, y);
            for a in 0..8 {
                let t = shift(&l, &f, a, Variant::Meet).unwrap();
                let expected = if l.leq(y, a) { f.clone() } else { Signal::zeros(&l) };
                assert_eq!(t, expected);
            }
        }
    }

    #[test]
    fn convolution_theorem_on_example() {
        let l = l8();
        let h = Filter::new(&l, vec![1.0, -2.0, 0.5, 3.0, 0.0, 1.0, -1.0, 2.0]).unwrap();
        let s = Signal::new(&l, fixtures::sparse_signal_values()).unwrap();
        let lhs = dlt(&l, &convolve(&l, &h, &s, Variant::Meet).unwrap(), Variant::Meet).unwrap();
        let resp = freq_response(&l, &h, Variant::Meet).unwrap();
        let ss = dlt(&l, &s, Variant::Meet).unwrap();
        for y in 0..8 {
            assert!((lhs[y] - resp[y] * ss[y]).abs() < 1e-12);
        }
        let back = filter_from_response(&l, &resp, Variant::Meet).unwrap();
        assert_eq!(back, h);
    }

    #[test]
    fn tv_of_basis_vectors() {
        let l = l8();
        let order = frequency_order(&l, Variant::Meet).unwrap();
        assert_eq!(order.entries[0].element, 0);
        assert_eq!(order.entries[0].tv.stv, 0.0);
        for name in ["g", "h"] {
            let y = l.index_of(name).unwrap();
            assert!((order.tv_of(y).stv - 4.0).abs() < 1e-12);
        }
        for y in 0..8 {
            let tv = order.tv_of(y);
            for (k, &g) in tv.generators.iter().enumerate() {
                let expected = if l.leq(y, g) { 0.0 } else { 1.0 };
                assert!((tv.components[k] - expected).abs() < 1e-12);
            }
            let f1 = normalized_basis(&l, Variant::Meet, y, Norm::L1);
            let tv1 = total_variation_with(&l, &f1, Variant::Meet, Norm::L1).unwrap();
            for (a, b) in tv1.components.iter().zip(&tv.components) {
                assert!((a - b).abs() < 1e-12);
            }
        }
        for x in 0..8 {
            for y in 0..8 {
                assert_eq!(l.leq(x, y), order.tv_leq(x, y));
            }
        }
    }

    #[test]
    fn join_variant_order_is_reversed() {
        let l = fixtures::boolean_cube();
        let order = frequency_order(&l, Variant::Join).unwrap();
        assert_eq!(order.entries[0].element, l.maximum().unwrap());
        for x in 0..8 {
            for y in 0..8 {
                assert_eq!(l.leq(x, y), order.tv_leq(y, x));
            }
        }
    }

    #[test]
    fn singleton_frequency() {
        let l = fixtures::chain(1);
        let order = frequency_order(&l, Variant::Meet).unwrap();
        assert_eq!(order.entries.len(), 1);
        assert_eq!(order.entries[0].tv.stv, 0.0);
    }

    #[test]
    fn mismatched_filter_is_rejected() {
        let l = l8();
        let h = Filter::<f64>::zeros(&fixtures::boolean_cube());
        let s = Signal::<f64>::zeros(&l);
        assert!(matches!(
            convolve(&l, &h, &s, Variant::Meet),
            Err(Error::LatticeMismatch)
        ));
    }
}
