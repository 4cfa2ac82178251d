//! Energy-preserving shift, white lattice noise and least-squares
//! polynomial (Wiener) filters.
//!
//! The shift `T_e` is diagonal in the frequency domain with the distinct
//! unit-modulus values `Λ_k = exp(−2πik/n)`, where `k` is the position of
//! the frequency in the variant's topological order. Every computation
//! here runs in the frequency domain through the fast transform.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fast::FastPlan;
use crate::filtering;
use crate::lattice::Lattice;
use crate::signal::{Domain, Filter, LatticeKey, Scalar, Signal, Spectrum, Variant};

/// Relative threshold on the diagonal of `R` below which a fit falls back to
/// the pseudo-inverse.
const RANK_TOL: f64 = 1e-10;

/// `T_e` for one lattice and variant, with a cached fast transform.
#[derive(Clone, Debug)]
pub struct EnergyShift {
    plan: FastPlan,
    lambda: Vec<Complex64>,
}

impl Domain for EnergyShift {
    fn key(&self) -> LatticeKey {
        self.plan.key()
    }

    fn size(&self) -> usize {
        self.plan.len()
    }
}

impl EnergyShift {
    pub fn new(lattice: &Lattice, variant: Variant) -> Result<EnergyShift> {
        Ok(EnergyShift::from_plan(FastPlan::new(lattice, variant)?))
    }

    /// Uses an existing plan, e.g. one built from multiset coordinates.
    pub fn from_plan(plan: FastPlan) -> EnergyShift {
        let n = plan.len();
        let join = plan.variant() == Variant::Join;
        let lambda = (0..n)
            .map(|y| {
                let k = if join { n - 1 - y } else { y };
                Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * k as f64 / n as f64)
            })
            .collect();
        EnergyShift { plan, lambda }
    }

    pub fn variant(&self) -> Variant {
        self.plan.variant()
    }

    pub fn len(&self) -> usize {
        self.plan.len()
    }

    pub fn is_empty(&self) -> bool {
        self.plan.is_empty()
    }

    /// Diagonal of `Λ`, indexed by element.
    pub fn lambda(&self) -> &[Complex64] {
        &self.lambda
    }

    pub fn dlt(&self, s: &Signal<Complex64>) -> Result<Spectrum<Complex64>> {
        self.plan.dlt(s)
    }

    pub fn idlt(&self, spectrum: &Spectrum<Complex64>) -> Result<Signal<Complex64>> {
        self.plan.idlt(spectrum)
    }

    /// `T_e^k s`.
    pub fn apply(&self, s: &Signal<Complex64>, k: u64) -> Result<Signal<Complex64>> {
        let n = self.len() as u64;
        let r = (k % n.max(1)) as i32;
        self.apply_diagonal(s, |y| self.lambda[y].powi(r))
    }

    fn apply_diagonal(&self, s: &Signal<Complex64>, d: impl Fn(usize) -> Complex64) -> Result<Signal<Complex64>> {
        let mut v = self.dlt(s)?.into_values();
        for (y, c) in v.iter_mut().enumerate() {
            *c *= d(y);
        }
        self.idlt(&Spectrum::from_parts(self.key(), v))
    }

    /// Circularly symmetric complex Gaussian spectrum with `E|n̂_y|² = σ²`,
    /// transformed to the lattice domain.
    pub fn white_noise(&self, sigma: f64, seed: u64) -> Result<Signal<Complex64>> {
        self.idlt(&self.white_spectrum(sigma, seed)?)
    }

    pub fn white_spectrum(&self, sigma: f64, seed: u64) -> Result<Spectrum<Complex64>> {
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return Err(Error::OutOfBounds(format!(
                "sigma must be a finite nonnegative number, got {sigma}"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let normal = Normal::new(0.0, sigma / std::f64::consts::SQRT_2).expect("valid deviation");
        let v = (0..self.len())
            .map(|_| Complex64::new(normal.sample(&mut rng), normal.sample(&mut rng)))
            .collect();
        Ok(Spectrum::from_parts(self.key(), v))
    }

    /// `s` plus white noise scaled to a frequency-domain SNR of `snr_db`.
    pub fn add_noise_at_snr(&self, s: &Signal<Complex64>, snr_db: f64, seed: u64) -> Result<Signal<Complex64>> {
        let mut spectrum = self.dlt(s)?;
        let noise = self.white_spectrum(sigma_for_snr(&spectrum, snr_db), seed)?;
        for (c, n) in spectrum.iter_mut().zip(noise.iter()) {
            *c += n;
        }
        self.idlt(&spectrum)
    }

    pub fn fit(&self, y: &Signal<Complex64>, s_ref: &Signal<Complex64>, order: usize) -> Result<WienerFit> {
        if y.key() != self.key() || s_ref.key() != self.key() {
            return Err(Error::LatticeMismatch);
        }
        let n = self.len();
        if order >= n {
            return Err(Error::OutOfBounds(format!("filter order {order} must be below {n}")));
        }
        let y_hat = self.dlt(y)?;
        let mut b = DMatrix::<Complex64>::zeros(n, order + 1);
        let mut power = vec![Complex64::new(1.0, 0.0); n];
        for k in 0..=order {
            let col: Vec<Complex64> = y_hat.iter().zip(&power).map(|(a, p)| a * p).collect();
            let col = self.idlt(&Spectrum::from_parts(self.key(), col))?;
            b.set_column(k, &DVector::from_column_slice(col.values()));
            for (p, l) in power.iter_mut().zip(&self.lambda) {
                *p *= l;
            }
        }
        let target = DVector::from_column_slice(s_ref.values());
        let (h, rank_deficient) = least_squares(b.clone(), &target);
        let residual = (&b * &h - &target).norm();
        if rank_deficient {
            log::warn!("Wiener design matrix is rank deficient; using the pseudo-inverse");
        }
        Ok(WienerFit {
            model: WienerModel {
                order,
                coefficients: h.iter().copied().collect(),
            },
            residual,
            rank_deficient,
        })
    }

    /// `Σ_k h_k T_e^k y`, one transform pair.
    pub fn apply_model(&self, model: &WienerModel, y: &Signal<Complex64>) -> Result<Signal<Complex64>> {
        if y.key() != self.key() {
            return Err(Error::LatticeMismatch);
        }
        self.apply_diagonal(y, |k| model.eval(self.lambda[k]))
    }
}

/// Minimizes `‖Bh − s‖₂` by QR, or by SVD when `B` is numerically rank deficient.
fn least_squares(b: DMatrix<Complex64>, s: &DVector<Complex64>) -> (DVector<Complex64>, bool) {
    let qr = b.clone().qr();
    let r = qr.r();
    let diag: Vec<f64> = r.diagonal().iter().map(|c| c.norm()).collect();
    let peak = diag.iter().copied().fold(0.0, f64::max);
    if peak > 0.0 && diag.iter().all(|&d| d > RANK_TOL * peak) {
        let rhs = qr.q().adjoint() * s;
        if let Some(h) = r.solve_upper_triangular(&rhs) {
            return (h, false);
        }
    }
    let eps = RANK_TOL * peak.max(f64::MIN_POSITIVE);
    let h = b
        .svd(true, true)
        .solve(s, eps)
        .unwrap_or_else(|_| DVector::zeros(diag.len()));
    (h, true)
}

/// Polynomial filter `H = Σ_{k=0}^{ℓ} h_k T_e^k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ModelRepr", into = "ModelRepr")]
pub struct WienerModel {
    pub order: usize,
    pub coefficients: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct ModelRepr {
    order: usize,
    coefficients: Vec<[f64; 2]>,
}

impl TryFrom<ModelRepr> for WienerModel {
    type Error = String;

    fn try_from(r: ModelRepr) -> std::result::Result<Self, String> {
        if r.coefficients.len() != r.order + 1 {
            return Err(format!(
                "order {} needs {} coefficients, found {}",
                r.order,
                r.order + 1,
                r.coefficients.len()
            ));
        }
        Ok(WienerModel {
            order: r.order,
            coefficients: r.coefficients.iter().map(|&[re, im]| Complex64::new(re, im)).collect(),
        })
    }
}

impl From<WienerModel> for ModelRepr {
    fn from(m: WienerModel) -> Self {
        ModelRepr {
            order: m.order,
            coefficients: m.coefficients.iter().map(|c| [c.re, c.im]).collect(),
        }
    }
}

impl WienerModel {
    /// The identity filter.
    pub fn identity(order: usize) -> WienerModel {
        let mut coefficients = vec![Complex64::new(0.0, 0.0); order + 1];
        coefficients[0] = Complex64::new(1.0, 0.0);
        WienerModel { order, coefficients }
    }

    /// `p(z)` by Horner's rule.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coefficients
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serializes")
    }

    pub fn from_json(text: &str) -> Result<WienerModel> {
        Ok(serde_json::from_str(text)?)
    }
}

#[derive(Clone, Debug)]
pub struct WienerFit {
    pub model: WienerModel,
    /// `‖Bh − s_ref‖₂` on the training pair.
    pub residual: f64,
    /// Fit used the pseudo-inverse.
    pub rank_deficient: bool,
}

pub fn apply_energy_shift(
    lattice: &Lattice,
    s: &Signal<Complex64>,
    variant: Variant,
    k: u64,
) -> Result<Signal<Complex64>> {
    s.check(lattice)?;
    EnergyShift::new(lattice, variant)?.apply(s, k)
}

/// Degree `n − 1` polynomial in `T_e` equal to the filter `h`.
pub fn filter_to_polynomial<T: Scalar>(lattice: &Lattice, h: &Filter<T>, variant: Variant) -> Result<WienerModel> {
    let response = filtering::freq_response(lattice, &h.to_complex(), variant)?;
    let n = lattice.len();
    // p(ω^k) = r_k with ω = exp(−2πi/n) is a forward DFT of the coefficients
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for y in 0..n {
        buf[lattice.rank_v(variant, y)] = response[y];
    }
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    for c in buf.iter_mut() {
        *c /= n as f64;
    }
    Ok(WienerModel {
        order: n - 1,
        coefficients: buf,
    })
}

pub fn white_noise(lattice: &Lattice, variant: Variant, sigma: f64, seed: u64) -> Result<Signal<Complex64>> {
    EnergyShift::new(lattice, variant)?.white_noise(sigma, seed)
}

pub fn wiener_fit(
    lattice: &Lattice,
    y: &Signal<Complex64>,
    s_ref: &Signal<Complex64>,
    order: usize,
    variant: Variant,
) -> Result<WienerFit> {
    y.check(lattice)?;
    EnergyShift::new(lattice, variant)?.fit(y, s_ref, order)
}

pub fn wiener_apply(
    lattice: &Lattice,
    model: &WienerModel,
    y: &Signal<Complex64>,
    variant: Variant,
) -> Result<Signal<Complex64>> {
    y.check(lattice)?;
    EnergyShift::new(lattice, variant)?.apply_model(model, y)
}

/// Noise level giving a frequency-domain SNR of `snr_db` for a signal with
/// spectrum `s_hat`: `σ² = ‖ŝ‖² / (n·10^{snr/10})`.
pub fn sigma_for_snr<T: Scalar>(s_hat: &Spectrum<T>, snr_db: f64) -> f64 {
    let energy = s_hat.norm2().powi(2);
    (energy / (s_hat.len() as f64 * 10f64.powf(snr_db / 10.0))).sqrt()
}

/// `10·log₁₀(‖ŝ‖² / ‖n̂‖²)`.
pub fn snr_db<T: Scalar, U: Scalar>(s_hat: &Spectrum<T>, noise_hat: &Spectrum<U>) -> f64 {
    10.0 * (s_hat.norm2().powi(2) / noise_hat.norm2().powi(2)).log10()
}
