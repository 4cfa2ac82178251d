mod common;

use std::collections::BTreeSet;

use common::rng;
use lattice_dsp::concepts::{build_concept_lattice, enumerate_concepts, reconstruct_context, Context};
use lattice_dsp::io::{context_to_csv, parse_context};
use proptest::prelude::*;
use rand::Rng;

fn random_context(r: &mut impl Rng, max: usize) -> Context {
    let g = r.random_range(0..=max);
    let m = r.random_range(0..=max);
    let density = r.random_range(0.1..0.9);
    let incidence: Vec<Vec<bool>> = (0..g)
        .map(|_| (0..m).map(|_| r.random_bool(density)).collect())
        .collect();
    Context::new(
        (0..g).map(|i| format!("o{i}")).collect(),
        (0..m).map(|j| format!("a{j}")).collect(),
        &incidence,
    )
    .unwrap()
}

/// Oracle: closures of every attribute subset.
fn brute_force_intents(ctx: &Context) -> BTreeSet<Vec<usize>> {
    let g = ctx.objects().len();
    let m = ctx.attributes().len();
    let mut out = BTreeSet::new();
    for mask in 0u32..(1 << m) {
        let extent: Vec<usize> = (0..g)
            .filter(|&o| (0..m).all(|a| mask >> a & 1 == 0 || ctx.has(o, a)))
            .collect();
        let intent: Vec<usize> = (0..m).filter(|&a| extent.iter().all(|&o| ctx.has(o, a))).collect();
        out.insert(intent);
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn concepts_match_brute_force(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ctx = random_context(&mut r, 10);
        let found: BTreeSet<Vec<usize>> = enumerate_concepts(&ctx).iter().map(|c| c.intent.iter().collect()).collect();
        prop_assert_eq!(found, brute_force_intents(&ctx));
    }

    #[test]
    fn lattice_order_is_intent_inclusion(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ctx = random_context(&mut r, 7);
        let cl = build_concept_lattice(&ctx);
        let l = cl.lattice();
        prop_assert!(l.kind().meet && l.kind().join);
        for x in 0..l.len() {
            for y in 0..l.len() {
                let (cx, cy) = (cl.concept(x), cl.concept(y));
                prop_assert_eq!(l.leq(x, y), cx.intent.is_subset(&cy.intent));
                prop_assert_eq!(l.leq(x, y), cy.extent.is_subset(&cx.extent));
                let m = cl.concept(l.meet(x, y).unwrap());
                let mut common = cx.intent.clone();
                common.intersect_with(&cy.intent);
                prop_assert_eq!(&m.intent, &common);
            }
        }
    }

    #[test]
    fn context_survives_lattice_and_csv(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ctx = random_context(&mut r, 8);
        prop_assert_eq!(reconstruct_context(&build_concept_lattice(&ctx)), ctx.clone());
        prop_assert_eq!(parse_context(&context_to_csv(&ctx)).unwrap(), ctx);
    }
}
