//! Multiset (bounded count vector) lattices under componentwise min/max.
//!
//! Elements are vectors `a` with `0 ≤ a_i ≤ m_i`, named `a1.a2...af`. The
//! topological order is graded: by total count, ties by mixed-radix value
//! with the first coordinate most significant. [`rank`] and [`unrank`]
//! convert between vectors and positions in that order without building a
//! lattice.

use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fast::{FastPlan, GridPasses};
use crate::lattice::Lattice;
use crate::signal::{Domain, LatticeKey, Signal, Spectrum, Variant};

/// Largest multiset lattice materialized as a [`Lattice`].
pub const DENSE_CAP: usize = 1 << 14;
/// Largest grid handled in latticeless mode (fast transforms, rank/unrank).
pub const GRID_CAP: usize = 1 << 20;

/// Capacity vector `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultisetSpec {
    m: Vec<usize>,
    size: usize,
    /// `suffix[i][t]`: number of ways coordinates `i..f` sum to `t`.
    suffix: Vec<Vec<u64>>,
    /// Number of elements with total count below `t`.
    grade_start: Vec<u64>,
}

/// Count vector of one element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultisetElement(pub Vec<usize>);

impl fmt::Display for MultisetElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        f.write_str(&parts.join("."))
    }
}

impl FromStr for MultisetElement {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        s.split('.')
            .map(|p| {
                p.parse::<usize>()
                    .map_err(|_| format!("invalid multiset element `{s}`"))
            })
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(MultisetElement)
    }
}

impl MultisetSpec {
    pub fn new(m: Vec<usize>) -> Result<MultisetSpec> {
        if m.is_empty() {
            return Err(Error::OutOfBounds("capacity vector must be non-empty".into()));
        }
        let size = m
            .iter()
            .try_fold(1usize, |acc, &mi| acc.checked_mul(mi + 1))
            .filter(|&s| s <= GRID_CAP)
            .ok_or(Error::TooLarge {
                size: usize::MAX,
                cap: GRID_CAP,
            })?;
        let f = m.len();
        let total: usize = m.iter().sum();
        let mut suffix = vec![vec![0u64; total + 1]; f + 1];
        suffix[f][0] = 1;
        for i in (0..f).rev() {
            for t in 0..=total {
                suffix[i][t] = (0..=m[i].min(t)).map(|v| suffix[i + 1][t - v]).sum();
            }
        }
        let mut grade_start = vec![0u64; total + 2];
        for t in 0..=total {
            grade_start[t + 1] = grade_start[t] + suffix[0][t];
        }
        Ok(MultisetSpec {
            m,
            size,
            suffix,
            grade_start,
        })
    }

    pub fn capacities(&self) -> &[usize] {
        &self.m
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn total(&self) -> usize {
        self.m.iter().sum()
    }

    pub fn check(&self, a: &MultisetElement) -> Result<()> {
        if a.0.len() != self.m.len() || a.0.iter().zip(&self.m).any(|(x, m)| x > m) {
            return Err(Error::OutOfBounds(format!(
                "{a} not within {}",
                MultisetElement(self.m.clone())
            )));
        }
        Ok(())
    }

    fn lex_value(&self, a: &[usize]) -> usize {
        a.iter().zip(&self.m).fold(0, |acc, (&x, &m)| acc * (m + 1) + x)
    }

    /// Graded position of every element, indexed by mixed-radix value.
    fn graded_to_lex(&self) -> Vec<u32> {
        let n = self.size;
        let radices: Vec<usize> = self.m.iter().map(|&m| m + 1).collect();
        let mut grade = vec![0u32; n];
        let mut digits = vec![0usize; radices.len()];
        for g in grade.iter_mut().skip(1) {
            // increment mixed-radix counter
            for i in (0..digits.len()).rev() {
                digits[i] += 1;
                if digits[i] < radices[i] {
                    break;
                }
                digits[i] = 0;
            }
            *g = digits.iter().sum::<usize>() as u32;
        }
        let mut order: Vec<u32> = (0..n as u32).collect();
        order.sort_by_key(|&l| (grade[l as usize], l));
        order
    }
}

impl Domain for MultisetSpec {
    fn key(&self) -> LatticeKey {
        let mut h = DefaultHasher::new();
        "multiset".hash(&mut h);
        self.m.hash(&mut h);
        LatticeKey(h.finish())
    }

    fn size(&self) -> usize {
        self.size
    }
}

/// Position of `a` in the graded topological order.
pub fn rank(a: &MultisetElement, spec: &MultisetSpec) -> Result<usize> {
    spec.check(a)?;
    let t: usize = a.0.iter().sum();
    let mut r = spec.grade_start[t];
    let mut rest = t;
    for (i, &x) in a.0.iter().enumerate() {
        // vectors agreeing on the prefix with a smaller coordinate i
        for v in (0..x).rev() {
            if rest >= v {
                r += spec.suffix[i + 1].get(rest - v).copied().unwrap_or(0);
            }
        }
        rest -= x;
    }
    Ok(r as usize)
}

pub fn unrank(index: usize, spec: &MultisetSpec) -> Result<MultisetElement> {
    if index >= spec.size {
        return Err(Error::OutOfBounds(format!("rank {index} ≥ {}", spec.size)));
    }
    let idx = index as u64;
    let t = spec.grade_start.partition_point(|&s| s <= idx) - 1;
    let mut offset = idx - spec.grade_start[t];
    let mut rest = t;
    let mut out = Vec::with_capacity(spec.m.len());
    for i in 0..spec.m.len() {
        let mut v = 0;
        loop {
            let count = if rest >= v {
                spec.suffix[i + 1].get(rest - v).copied().unwrap_or(0)
            } else {
                0
            };
            if offset < count {
                break;
            }
            offset -= count;
            v += 1;
        }
        out.push(v);
        rest -= v;
    }
    Ok(MultisetElement(out))
}

pub fn mmeet(a: &MultisetElement, b: &MultisetElement, spec: &MultisetSpec) -> Result<MultisetElement> {
    spec.check(a)?;
    spec.check(b)?;
    Ok(MultisetElement(a.0.iter().zip(&b.0).map(|(x, y)| *x.min(y)).collect()))
}

pub fn mjoin(a: &MultisetElement, b: &MultisetElement, spec: &MultisetSpec) -> Result<MultisetElement> {
    spec.check(a)?;
    spec.check(b)?;
    Ok(MultisetElement(a.0.iter().zip(&b.0).map(|(x, y)| *x.max(y)).collect()))
}

/// Grid lattice with covers "increment one coordinate by 1".
pub fn build_multiset_lattice(spec: &MultisetSpec) -> Result<Lattice> {
    if spec.size > DENSE_CAP {
        return Err(Error::TooLarge {
            size: spec.size,
            cap: DENSE_CAP,
        });
    }
    let g2l = spec.graded_to_lex();
    let mut l2g = vec![0usize; g2l.len()];
    for (g, &l) in g2l.iter().enumerate() {
        l2g[l as usize] = g;
    }
    let mut ids = Vec::with_capacity(spec.size);
    let mut lower = Vec::with_capacity(spec.size);
    for g in 0..spec.size {
        let a = unrank(g, spec)?;
        let mut covers: Vec<usize> = (0..a.0.len())
            .filter(|&i| a.0[i] > 0)
            .map(|i| {
                let mut b = a.0.clone();
                b[i] -= 1;
                l2g[spec.lex_value(&b)]
            })
            .collect();
        covers.sort_unstable();
        ids.push(a.to_string());
        lower.push(covers);
    }
    Ok(Lattice::from_trusted_lattice(ids, lower).with_key(spec.key()))
}

/// Fast transform plan computed from coordinates (no order relation stored).
pub fn grid_fast_plan(spec: &MultisetSpec, variant: Variant) -> FastPlan {
    let grid = GridPasses::new(&spec.m, spec.graded_to_lex(), variant == Variant::Join);
    FastPlan::from_grid(spec.key(), variant, grid)
}

/// Sum total variation of the normalized basis vector at `y`.
pub fn grid_stv(a: &MultisetElement, spec: &MultisetSpec, variant: Variant) -> usize {
    match variant {
        Variant::Meet => a.0.iter().sum(),
        Variant::Join => spec.m.iter().zip(&a.0).map(|(m, x)| m - x).sum(),
    }
}

/// Frequencies ordered by total variation, ties by topological position in
/// the variant order.
pub fn grid_frequency_order(spec: &MultisetSpec, variant: Variant) -> Vec<usize> {
    // graded order is already sorted by Σa; the join variant reverses it
    match variant {
        Variant::Meet => (0..spec.size).collect(),
        Variant::Join => (0..spec.size).rev().collect(),
    }
}

/// Synthetic bidder profile.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BidderType {
    Small,
    HighFrequency,
    Secondary,
    Primary,
}

impl BidderType {
    pub const ALL: [BidderType; 4] = [
        BidderType::Small,
        BidderType::HighFrequency,
        BidderType::Secondary,
        BidderType::Primary,
    ];

    /// Number of nonzero Fourier coefficients planted for this type.
    pub fn sparsity(self, variant: Variant) -> usize {
        match (variant, self) {
            (Variant::Join, BidderType::Small) => 20,
            (Variant::Join, BidderType::HighFrequency) => 48,
            (Variant::Join, _) => 60,
            (Variant::Meet, BidderType::Small) => 36,
            (Variant::Meet, BidderType::HighFrequency) => 90,
            (Variant::Meet, _) => 111,
        }
    }

    fn scale(self) -> f64 {
        match self {
            BidderType::Small => 1.0,
            BidderType::HighFrequency => 4.0,
            BidderType::Secondary => 16.0,
            BidderType::Primary => 64.0,
        }
    }
}

impl fmt::Display for BidderType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BidderType::Small => "small",
            BidderType::HighFrequency => "highfreq",
            BidderType::Secondary => "secondary",
            BidderType::Primary => "primary",
        })
    }
}

impl FromStr for BidderType {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "small" => Ok(BidderType::Small),
            "highfreq" => Ok(BidderType::HighFrequency),
            "secondary" => Ok(BidderType::Secondary),
            "primary" => Ok(BidderType::Primary),
            other => Err(format!(
                "unknown bidder type `{other}` (small, highfreq, secondary, primary)"
            )),
        }
    }
}

/// A synthetic bidder and the spectrum it was generated from.
#[derive(Clone, Debug)]
pub struct Bidder {
    pub values: Signal,
    pub spectrum: Spectrum,
    /// Planted support in frequency order.
    pub support: Vec<usize>,
}

/// Magnitude ratio between coefficients whose total variation differs by one.
const INTERACTION_DECAY: f64 = 0.5;

/// Nonnegative, monotone value function with exactly `sparsity` nonzero
/// coefficients at the lowest frequencies of the variant. Magnitudes are
/// drawn uniformly in `[0.5, 1.5)·scale` and shrink geometrically with total
/// variation (higher-order interactions are weaker). In the join variant the
/// constant term is positive and dominates the negative corrections; in the
/// meet variant all coefficients are positive. Coefficients are multiples of
/// 2^-10 so transforms and reconstruction are exact.
pub fn synth_bidder(spec: &MultisetSpec, kind: BidderType, variant: Variant, seed: u64) -> Result<Bidder> {
    let k = kind.sparsity(variant).min(spec.size);
    let support: Vec<usize> = grid_frequency_order(spec, variant).into_iter().take(k).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = kind.scale();
    let quantize = |x: f64| (x * 1024.0).round().max(1.0) / 1024.0;
    let mut coeffs = Vec::with_capacity(k);
    for &y in &support {
        let stv = grid_stv(&unrank(y, spec)?, spec, variant) as i32;
        coeffs.push(quantize(
            rng.random_range(0.5..1.5) * scale * INTERACTION_DECAY.powi(stv),
        ));
    }
    if variant == Variant::Join {
        let rest: f64 = coeffs[1..].iter().sum();
        for c in coeffs[1..].iter_mut() {
            *c = -*c;
        }
        coeffs[0] = quantize(rest * 1.25 + scale);
    }
    let mut spectrum = Spectrum::zeros(spec);
    for (&y, &c) in support.iter().zip(&coeffs) {
        spectrum[y] = c;
    }
    let mut values = spectrum.values().to_vec();
    grid_fast_plan(spec, variant).zeta_in_place(&mut values)?;
    Ok(Bidder {
        values: Signal::new(spec, values)?,
        spectrum,
        support,
    })
}
