//! Random lattices and signals shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use lattice_dsp::{Lattice, Signal, Spectrum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Subsets of a small ground set closed under intersection, ordered by
/// inclusion: a meet-semilattice, and a lattice when `with_top` adds the
/// ground set. At most `max_n` elements.
pub fn random_closure_family(rng: &mut impl Rng, max_n: usize, with_top: bool) -> Lattice {
    let ground = rng.random_range(2..=6u32);
    let full = (1u32 << ground) - 1;
    let mut family: BTreeSet<u32> = BTreeSet::new();
    if with_top {
        family.insert(full);
    }
    let target = rng.random_range(1..=max_n);
    for _ in 0..4 * max_n {
        if family.len() >= target {
            break;
        }
        let s = rng.random_range(0..=full);
        let mut next = family.clone();
        next.insert(s);
        // close under intersection
        loop {
            let items: Vec<u32> = next.iter().copied().collect();
            let before = next.len();
            for &a in &items {
                for &b in &items {
                    next.insert(a & b);
                }
            }
            if next.len() == before {
                break;
            }
        }
        if next.len() <= max_n {
            family = next;
        }
    }
    if family.is_empty() {
        family.insert(0);
    }
    from_sets(&family.into_iter().collect::<Vec<_>>())
}

/// Poset of bitmask sets ordered by inclusion.
pub fn from_sets(sets: &[u32]) -> Lattice {
    let ids: Vec<String> = sets.iter().map(|s| format!("s{s}")).collect();
    let mut edges = Vec::new();
    for (i, &a) in sets.iter().enumerate() {
        for (j, &b) in sets.iter().enumerate() {
            if i != j && a & b == b {
                edges.push((ids[i].clone(), ids[j].clone()));
            }
        }
    }
    Lattice::from_edges_reduced(&ids, &edges).expect("inclusion order is acyclic")
}

pub fn random_values(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

pub fn random_signal(rng: &mut impl Rng, l: &Lattice) -> Signal {
    Signal::new(l, random_values(rng, l.len())).unwrap()
}

pub fn random_int_signal(rng: &mut impl Rng, l: &Lattice) -> Signal<i64> {
    Signal::new(l, (0..l.len()).map(|_| rng.random_range(-9..=9)).collect()).unwrap()
}

/// Spectrum with `k` random nonzero coefficients (magnitude ≥ 0.5).
pub fn planted_spectrum(rng: &mut impl Rng, l: &Lattice, k: usize) -> (Spectrum, Vec<usize>) {
    let mut idx: Vec<usize> = (0..l.len()).collect();
    for i in 0..idx.len() {
        let j = rng.random_range(i..idx.len());
        idx.swap(i, j);
    }
    let mut support: Vec<usize> = idx.into_iter().take(k.clamp(1, l.len())).collect();
    support.sort_unstable();
    let mut s = Spectrum::zeros(l);
    for &y in &support {
        let m = rng.random_range(0.5..2.0);
        s[y] = if rng.random_bool(0.5) { m } else { -m };
    }
    (s, support)
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn rel_diff(a: &[f64], b: &[f64]) -> f64 {
    let scale = b.iter().map(|x| x.abs()).fold(1.0, f64::max);
    max_abs_diff(a, b) / scale
}
