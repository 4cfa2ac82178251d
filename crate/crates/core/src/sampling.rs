//! Sampling and perfect reconstruction of Fourier-sparse signals.
//!
//! A signal whose spectrum vanishes outside `B` is determined by its values
//! on `B`: the `(B,B)` block of the inverse transform is unit triangular in
//! topological order, so the coefficients follow by forward substitution.

use crate::error::{Error, Result};
use crate::lattice::{ElementSet, Lattice};
use crate::signal::{Scalar, Signal, Spectrum, Variant};
use crate::transforms::Dlt;

/// Absolute floor for support detection.
pub const SUPPORT_FLOOR: f64 = 1e-12;

/// Elements whose coefficient magnitude exceeds `max(tol·max|ŝ|, 1e-12)`.
pub fn support_of_spectrum<T: Scalar>(lattice: &Lattice, spectrum: &Spectrum<T>, tol: f64) -> Result<ElementSet> {
    spectrum.check(lattice)?;
    let peak = spectrum.iter().map(|v| v.magnitude()).fold(0.0, f64::max);
    let threshold = (tol * peak).max(SUPPORT_FLOOR);
    Ok(ElementSet::from_indices(
        lattice,
        spectrum
            .iter()
            .enumerate()
            .filter(|(_, v)| v.magnitude() > threshold)
            .map(|(i, _)| i),
    ))
}

pub fn fourier_support<T: Scalar>(lattice: &Lattice, s: &Signal<T>, variant: Variant, tol: f64) -> Result<ElementSet> {
    let spectrum = Dlt::new(lattice, variant)?.forward(s)?;
    support_of_spectrum(lattice, &spectrum, tol)
}

/// Union of the supports of all reference signals.
pub fn transfer_support<T: Scalar>(
    lattice: &Lattice,
    references: &[Signal<T>],
    variant: Variant,
    tol: f64,
) -> Result<ElementSet> {
    let dlt = Dlt::new(lattice, variant)?;
    let mut out = ElementSet::empty(lattice);
    for s in references {
        let supp = support_of_spectrum(lattice, &dlt.forward(s)?, tol)?;
        out.union_with(&supp)?;
    }
    Ok(out)
}

/// Sampling set `B` with its triangular system.
#[derive(Clone, Debug)]
pub struct SamplingPlan<'a> {
    lattice: &'a Lattice,
    variant: Variant,
    /// Support in the variant's topological order.
    support: Vec<usize>,
    /// `lower[i]` lists `j < i` with `support[j] ≤_v support[i]`.
    lower: Vec<Vec<usize>>,
}

pub fn make_plan<'a>(lattice: &'a Lattice, support: &ElementSet, variant: Variant) -> Result<SamplingPlan<'a>> {
    lattice.require(variant)?;
    if support.key() != lattice.key() {
        return Err(Error::LatticeMismatch);
    }
    if support.is_empty() {
        return Err(Error::EmptySupport);
    }
    let mut b = support.to_vec();
    b.sort_by_key(|&x| lattice.rank_v(variant, x));
    let lower = (0..b.len())
        .map(|i| (0..i).filter(|&j| lattice.leq_v(variant, b[j], b[i])).collect())
        .collect();
    Ok(SamplingPlan {
        lattice,
        variant,
        support: b,
        lower,
    })
}

impl<'a> SamplingPlan<'a> {
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn support_ids(&self) -> Vec<&'a str> {
        self.support.iter().map(|&b| self.lattice.id(b)).collect()
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// Values of `s` at the support, in plan order.
    pub fn sample<T: Scalar>(&self, s: &Signal<T>) -> Result<Vec<T>> {
        s.check(self.lattice)?;
        Ok(self.support.iter().map(|&b| s[b]).collect())
    }

    /// Fourier coefficients on the support that reproduce the samples.
    pub fn solve<T: Scalar>(&self, samples: &[T]) -> Result<Vec<T>> {
        if samples.len() != self.support.len() {
            return Err(Error::DimensionMismatch {
                expected: self.support.len(),
                actual: samples.len(),
            });
        }
        let mut coeffs: Vec<T> = Vec::with_capacity(samples.len());
        for (i, &v) in samples.iter().enumerate() {
            let c = self.lower[i].iter().fold(v, |acc, &j| acc - coeffs[j]);
            coeffs.push(c);
        }
        Ok(coeffs)
    }

    /// Signal with spectrum supported on `B` matching the samples.
    pub fn reconstruct<T: Scalar>(&self, samples: &[T]) -> Result<Signal<T>> {
        let coeffs = self.solve(samples)?;
        let n = self.lattice.len();
        let values = (0..n)
            .map(|x| {
                self.support
                    .iter()
                    .zip(&coeffs)
                    .filter(|&(&b, _)| self.lattice.leq_v(self.variant, b, x))
                    .fold(T::zero(), |acc, (_, &c)| acc + c)
            })
            .collect();
        Signal::new(self.lattice, values)
    }

    /// Dense `n × k` interpolation operator: column `j` reconstructs a unit
    /// sample at `support[j]`.
    pub fn interpolation_matrix(&self) -> Result<Vec<Vec<f64>>> {
        crate::transforms::check_dense(self.lattice.len())?;
        let k = self.support.len();
        let mut m = vec![vec![0.0; k]; self.lattice.len()];
        for j in 0..k {
            let mut e = vec![0.0; k];
            e[j] = 1.0;
            for (x, v) in self.reconstruct(&e)?.iter().enumerate() {
                m[x][j] = *v;
            }
        }
        Ok(m)
    }
}

/// Values of `s` on the plan's support.
pub fn sample<T: Scalar>(s: &Signal<T>, plan: &SamplingPlan) -> Result<Vec<T>> {
    plan.sample(s)
}

pub fn reconstruct<'a, T: Scalar>(samples: &[T], plan: &SamplingPlan<'a>) -> Result<Signal<T>> {
    plan.reconstruct(samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn worked_example_pipeline() {
        let l = fixtures::eight_element_semilattice();
        let s = Signal::new(&l, fixtures::sparse_signal_values()).unwrap();
        let supp = fourier_support(&l, &s, Variant::Meet, 1e-9).unwrap();
        assert_eq!(supp.ids(&l), ["a", "b", "d", "e"]);
        let plan = make_plan(&l, &supp, Variant::Meet).unwrap();
        let samples = plan.sample(&s).unwrap();
        assert_eq!(samples, vec![2.0, 1.0, 5.0, 5.0]);
        assert_eq!(plan.reconstruct(&samples).unwrap(), s);
        let interp = plan.interpolation_matrix().unwrap();
        let expected = vec![
            vec![1.0, 0.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0, 0.0],
            vec![0.0, 0.0, 1.0, 0.0],
            vec![0.0, 0.0, 0.0, 1.0],
            vec![-1.0, 1.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0, 0.0],
            vec![-1.0, 0.0, 1.0, 1.0],
        ];
        assert_eq!(interp, expected);
    }

    #[test]
    fn full_and_singleton_plans() {
        let l = fixtures::eight_element_semilattice();
        let s = Signal::new(&l, vec![3.0, -1.0, 2.0, 0.5, 7.0, 1.0, 2.0, 9.0]).unwrap();
        let all = ElementSet::from_indices(&l, 0..8);
        let plan = make_plan(&l, &all, Variant::Meet).unwrap();
        assert_eq!(plan.sample(&s).unwrap(), s.values());
        assert_eq!(plan.reconstruct(s.values()).unwrap(), s);
        let bottom = ElementSet::from_indices(&l, [0]);
        let plan = make_plan(&l, &bottom, Variant::Meet).unwrap();
        let interp = plan.interpolation_matrix().unwrap();
        assert!(interp.iter().all(|row| row == &vec![1.0]));
    }

    #[test]
    fn errors() {
        let l = fixtures::eight_element_semilattice();
        assert!(matches!(
            make_plan(&l, &ElementSet::empty(&l), Variant::Meet),
            Err(Error::EmptySupport)
        ));
        let plan = make_plan(&l, &ElementSet::from_indices(&l, [0, 1]), Variant::Meet).unwrap();
        assert!(matches!(plan.reconstruct(&[1.0]), Err(Error::DimensionMismatch { .. })));
        let zero = Signal::<f64>::zeros(&l);
        assert!(fourier_support(&l, &zero, Variant::Meet, 1e-9).unwrap().is_empty());
    }

    #[test]
    fn transfer_is_union() {
        let l = fixtures::boolean_cube();
        let dlt = Dlt::new(&l, Variant::Join).unwrap();
        let mk = |idx: &[usize]| {
            let mut spec = Spectrum::<f64>::zeros(&l);
            for &i in idx {
                spec[i] = 1.0 + i as f64;
            }
            dlt.inverse(&spec).unwrap()
        };
        let refs = vec![mk(&[7, 2]), mk(&[2, 4, 0])];
        let supp = transfer_support(&l, &refs, Variant::Join, 1e-9).unwrap();
        assert_eq!(supp.to_vec(), vec![0, 2, 4, 7]);
        let single = transfer_support(&l, &refs[..1], Variant::Join, 1e-9).unwrap();
        assert_eq!(single.to_vec(), vec![2, 7]);
    }
}
