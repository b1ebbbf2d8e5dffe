use proptest::prelude::*;
use triplex_core::cube::{build_cube, collapse, verify, verify_mixed, MixedFactorization};
use triplex_core::detach::{detach, detach_with, verify_detachment, DetachOptions, DetachmentTask};
use triplex_core::extension::{
    census_of_factorization, check_ryser, extend, extend_traced, ExtensionInstance,
};
use triplex_core::factorize::{chromatic_index, counting_bound, min_coloring};
use triplex_core::hypergraph::{verify_one_factorization, verify_proper};
use triplex_core::oracle::{brute_extend, Limits};
use triplex_core::{binomial, complete_triples, Coloring, Edge, Hypergraph};

/// Replaces the vertices `n-m+1..=n` of every edge by the single vertex
/// `n-m+1`.
fn amalgamate_tail(c: &Coloring, m: u32) -> Coloring {
    let n = c.ground();
    let alpha = n - m + 1;
    let mut out = Coloring::empty(alpha, c.k());
    for (color, class) in c.iter() {
        for (e, mult) in class.iter() {
            out.add_edge(color, e.map(|v| v.min(alpha)), mult).unwrap();
        }
    }
    out
}

/// Colors the instances of `λ·C({1..nx},3)` in order with `colors`, which
/// must be distinct.
fn one_per_class(nx: u32, lambda: u32, colors: &[u32], k: u32) -> Coloring {
    let mut c = Coloring::empty(nx, k);
    let instances: Vec<Edge> = complete_triples(nx, lambda).unwrap().instances().collect();
    for (e, &color) in instances.iter().zip(colors) {
        c.add_edge(color, *e, 1).unwrap();
    }
    c
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn min_colorings_are_balanced(n in 3u32..=13, lambda in 1u32..=2) {
        let c = min_coloring(n, lambda).unwrap();
        prop_assert_eq!(c.k() as u64, chromatic_index(n, lambda));
        prop_assert_eq!(chromatic_index(n, lambda), counting_bound(n, lambda));
        prop_assert!(verify_proper(&c).is_ok());
        prop_assert!(c.host().same_edges(&complete_triples(n, lambda).unwrap()));
        let sizes: Vec<u64> = c.classes().iter().map(Hypergraph::size).collect();
        let (lo, hi) = (*sizes.iter().min().unwrap(), *sizes.iter().max().unwrap());
        prop_assert!(hi <= (n / 3) as u64 && hi - lo <= 1);
    }

    #[test]
    fn amalgamated_factorizations_detach(n in prop::sample::select(vec![6u32, 9]), m in 2u32..=4, lambda in 1u32..=2) {
        let f = min_coloring(n, lambda).unwrap();
        let task = DetachmentTask::even(amalgamate_tail(&f, m), n - m + 1, m).unwrap();
        let out = detach(&task).unwrap();
        prop_assert!(verify_detachment(&task, &out).is_ok());
        prop_assert!(verify_one_factorization(&out).is_ok());
        prop_assert!(out.host().same_edges(&complete_triples(n, lambda).unwrap()));
    }

    #[test]
    fn search_fallback_agrees(m in 2u32..=3, seed in any::<u64>()) {
        let f = min_coloring(6, 1).unwrap();
        let task = DetachmentTask::even(amalgamate_tail(&f, m), 7 - m, m).unwrap();
        let opts = DetachOptions { seed: Some(seed), search_only: true, ..DetachOptions::default() };
        let out = detach_with(&task, &opts).unwrap();
        prop_assert!(verify_detachment(&task, &out).is_ok());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// `C(X,3)` on four or five points has pairwise intersecting triples, so
    /// a proper coloring puts each triple in its own class.
    #[test]
    fn pipeline_agrees_with_oracle(
        nx in 4u32..=5,
        lambda in 1u32..=2,
        perm in Just((1u32..=20).collect::<Vec<u32>>()).prop_shuffle(),
    ) {
        let k = lambda * binomial(5, 2) as u32;
        let needed = (lambda as u64 * binomial(nx as u64, 3)) as usize;
        let colors: Vec<u32> = perm.into_iter().filter(|&c| c <= k).take(needed).collect();
        prop_assume!(colors.len() == needed);
        let inst = ExtensionInstance::new(nx, 6, lambda, one_per_class(nx, lambda, &colors, k)).unwrap();
        let witness = brute_extend(&inst, Limits::default()).unwrap();
        match extend_traced(&inst) {
            Ok(trace) => {
                prop_assert!(witness.is_some());
                let out = &trace.factorization;
                prop_assert!(verify_one_factorization(out).is_ok());
                prop_assert!(out.contains_classwise(inst.coloring()));
                prop_assert!(verify_detachment(&trace.task, out).is_ok());
                prop_assert!(census_of_factorization(nx, out).identities_hold(nx, 6));
            }
            Err(_) => prop_assert!(witness.is_none()),
        }
        if let Some(w) = witness {
            prop_assert!(verify_one_factorization(&w).is_ok());
            prop_assert!(check_ryser(&inst).ryser_ok);
        }
    }

    #[test]
    fn relabelled_mixed_factorizations_give_cubes(perm in Just(vec![1u32, 2, 3, 4, 5]).prop_shuffle()) {
        let base = triplex_core::cube::find_mixed_factorization(5, 7, 1_000_000).unwrap();
        let classes: Vec<Hypergraph> = base
            .classes()
            .iter()
            .map(|c| {
                let mut h = Hypergraph::new(5);
                for (e, m) in c.iter() {
                    h.add(e.map(|v| perm[v as usize - 1]), m).unwrap();
                }
                h
            })
            .collect();
        let mf = MixedFactorization::new(5, classes).unwrap();
        prop_assert!(verify_mixed(&mf).is_ok());
        let cube = build_cube(&mf).unwrap();
        prop_assert!(verify(&cube).is_ok());
        prop_assert_eq!(collapse(&cube).unwrap(), mf);
    }
}

#[test]
fn extension_of_seven_into_twenty_one() {
    let f = min_coloring(7, 1).unwrap().padded(190).unwrap();
    let inst = ExtensionInstance::new(7, 21, 1, f).unwrap();
    let out = extend(&inst).unwrap();
    assert!(verify_one_factorization(&out).is_ok());
    assert!(out.contains_classwise(inst.coloring()));
}
