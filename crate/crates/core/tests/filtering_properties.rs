mod common;

use common::*;
use lattice_dsp::filtering::{convolve, filter_from_response, freq_response, frequency_order, shift, total_variation};
use lattice_dsp::transforms::basis_vector;
use lattice_dsp::{fixtures, Filter, Lattice, Signal, Variant};
use proptest::prelude::*;
use rand::Rng;

fn fixtures_small() -> Vec<(Lattice, Variant)> {
    let l8 = fixtures::eight_element_semilattice();
    vec![
        (l8.add_top("t").unwrap(), Variant::Join),
        (l8.dual(), Variant::Join),
        (fixtures::boolean_cube(), Variant::Meet),
        (fixtures::boolean_cube(), Variant::Join),
        (fixtures::chain(5), Variant::Meet),
        (l8, Variant::Meet),
    ]
}

#[test]
fn basis_vectors_are_shift_eigenvectors() {
    for (l, v) in fixtures_small() {
        for y in 0..l.len() {
            let f = basis_vector(&l, v, y);
            for a in 0..l.len() {
                let expected = if l.leq_v(v, y, a) { f.clone() } else { Signal::zeros(&l) };
                assert_eq!(shift(&l, &f, a, v).unwrap(), expected, "y={y} a={a} {v}");
            }
        }
    }
}

#[test]
fn tv_tuples_are_order_isomorphic_on_fixtures() {
    for (l, v) in fixtures_small() {
        let order = frequency_order(&l, v).unwrap();
        for x in 0..l.len() {
            for y in 0..l.len() {
                assert_eq!(order.tv_leq(x, y), l.leq_v(v, x, y), "{x} {y} {v}");
            }
        }
        let bottom = l.bottom_v(v).unwrap();
        assert_eq!(order.entries[0].element, bottom);
        assert_eq!(order.entries[0].tv.stv, 0.0);
        let k = l.generators(v).len() as f64;
        assert!(order.entries.iter().all(|e| e.tv.stv >= 0.0 && e.tv.stv <= k + 1e-9));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn shifts_compose_by_meet(seed in any::<u64>(), top in any::<bool>()) {
        let mut r = rng(seed);
        let l = random_closure_family(&mut r, 20, top);
        let s = random_signal(&mut r, &l);
        let a = r.random_range(0..l.len());
        let b = r.random_range(0..l.len());
        let ab = l.meet(a, b).unwrap();
        let lhs = shift(&l, &shift(&l, &s, b, Variant::Meet).unwrap(), a, Variant::Meet).unwrap();
        prop_assert_eq!(lhs, shift(&l, &s, ab, Variant::Meet).unwrap());
    }

    #[test]
    fn response_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let l = random_closure_family(&mut r, 24, false);
        let h = Filter::new(&l, random_values(&mut r, l.len())).unwrap();
        let resp = freq_response(&l, &h, Variant::Meet).unwrap();
        let back = filter_from_response(&l, &resp, Variant::Meet).unwrap();
        prop_assert!(max_abs_diff(back.values(), h.values()) < 1e-10);
    }

    #[test]
    fn filters_commute(seed in any::<u64>()) {
        let mut r = rng(seed);
        let l = random_closure_family(&mut r, 16, true);
        let s = random_signal(&mut r, &l);
        let g = Filter::new(&l, random_values(&mut r, l.len())).unwrap();
        let h = Filter::new(&l, random_values(&mut r, l.len())).unwrap();
        let gh = convolve(&l, &g, &convolve(&l, &h, &s, Variant::Join).unwrap(), Variant::Join).unwrap();
        let hg = convolve(&l, &h, &convolve(&l, &g, &s, Variant::Join).unwrap(), Variant::Join).unwrap();
        prop_assert!(max_abs_diff(gh.values(), hg.values()) < 1e-10);
    }

    #[test]
    fn tv_tuples_are_order_isomorphic(seed in any::<u64>(), top in any::<bool>()) {
        let mut r = rng(seed);
        let l = random_closure_family(&mut r, 16, top);
        let order = frequency_order(&l, Variant::Meet).unwrap();
        for x in 0..l.len() {
            for y in 0..l.len() {
                prop_assert_eq!(order.tv_leq(x, y), l.leq(x, y));
            }
        }
    }

    #[test]
    fn tv_of_basis_counts_generators_not_above(seed in any::<u64>()) {
        let mut r = rng(seed);
        let l = random_closure_family(&mut r, 16, false);
        let y = r.random_range(0..l.len());
        let f = basis_vector(&l, Variant::Meet, y);
        let tv = total_variation(&l, &f.map(|v| v / f.norm2()), Variant::Meet).unwrap();
        for (g, c) in tv.generators.iter().zip(&tv.components) {
            let expected = if l.leq(y, *g) { 0.0 } else { 1.0 };
            prop_assert!((c - expected).abs() < 1e-12);
        }
    }
}
