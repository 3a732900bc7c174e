mod common;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;
use symsets::cycles::{
    brute_force_fillers, construct_degenerate_filler, cycle_stats, propagate_filler_in_order, reduction_graph,
    restrict_to_cycle, seed_filler, FillerSearch,
};
use symsets::ez::{ez_congruence, face, mass, reduces};
use symsets::finset::{EquivRel, FinFn};
use symsets::levels::DegenerateSampler;
use symsets::propagraph::{is_propagative, phi, phi_closure, phi_trace, UGraph, VertexSet};
use symsets::symset::{eq_exact_symset, eq_symset, graph_symset, SymSet};

fn arb_fn(dom: usize, cod: usize) -> impl Strategy<Value = FinFn> {
    proptest::collection::vec(0..cod, dom).prop_map(move |images| FinFn::new(cod, images).unwrap())
}

fn arb_graph(sizes: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = UGraph> {
    sizes.prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        (Just(n), 0..(1u64 << pairs))
    })
    .prop_map(|(n, mask)| UGraph::from_pair_mask(n, mask))
}

fn arb_partition(sizes: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = EquivRel> {
    sizes.prop_flat_map(|n| proptest::collection::vec(0..n, n)).prop_map(|labels| EquivRel::from_labels(&labels))
}

/// A graph together with a map into its vertex set.
fn graph_and_map() -> impl Strategy<Value = (UGraph, FinFn)> {
    arb_graph(1..=6).prop_flat_map(|g| {
        let n = g.num_vertices();
        (Just(g), (1..=6usize).prop_flat_map(move |a| arb_fn(a, n)))
    })
}

fn partition_and_map() -> impl Strategy<Value = (EquivRel, FinFn)> {
    arb_partition(1..=6).prop_flat_map(|r| {
        let n = r.size();
        (Just(r), (1..=6usize).prop_flat_map(move |a| arb_fn(a, n)))
    })
}

fn vertex_subset(n: usize) -> impl Strategy<Value = VertexSet> {
    (0..(1u64 << n)).prop_map(VertexSet)
}

fn lax_congruence<M: SymSet>(m: &M, x: &M::Structure, phi: &FinFn) -> Result<(), TestCaseError> {
    let cx = ez_congruence(m, x).unwrap();
    let cy = ez_congruence(m, &m.pullback(x, phi)).unwrap();
    for a in 0..phi.dom() {
        for b in 0..phi.dom() {
            if cx.related(phi.apply(a), phi.apply(b)) {
                prop_assert!(cy.related(a, b));
            }
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn composition_is_associative(
        (f, g, h) in (1..=6usize, 1..=6usize, 1..=6usize, 1..=6usize)
            .prop_flat_map(|(a, b, c, d)| (arb_fn(c, d), arb_fn(b, c), arb_fn(a, b)))
    ) {
        let left = f.after(&g).unwrap().after(&h).unwrap();
        let right = f.after(&g.after(&h).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn factorization_recomposes(f in (1..=9usize, 1..=9usize).prop_flat_map(|(a, b)| arb_fn(a, b))) {
        let (e, m) = f.epi_mono_factorize();
        prop_assert!(e.is_surjective());
        prop_assert!(m.is_injective());
        prop_assert_eq!(e.cod(), f.image_size());
        prop_assert_eq!(m.after(&e).unwrap(), f);
    }

    #[test]
    fn graph_lax_congruence_and_monotone_mass((g, phi) in graph_and_map()) {
        let m = graph_symset();
        lax_congruence(&m, &g, &phi)?;
        prop_assert!(mass(&m, &m.pullback(&g, &phi)).unwrap() <= mass(&m, &g).unwrap());
    }

    #[test]
    fn partition_lax_congruence_and_monotone_mass((r, phi) in partition_and_map()) {
        let m = eq_symset();
        lax_congruence(&m, &r, &phi)?;
        prop_assert!(mass(&m, &m.pullback(&r, &phi)).unwrap() <= mass(&m, &r).unwrap());
    }

    #[test]
    fn congruence_restricts_along_reducing_points(g in arb_graph(2..=7)) {
        let m = graph_symset();
        let c = ez_congruence(&m, &g).unwrap();
        for a in 0..g.num_vertices() {
            prop_assert_eq!(reduces(&m, &g, a).unwrap(), c.class_size(a) >= 2);
            if reduces(&m, &g, a).unwrap() {
                let restricted = c.pullback(&FinFn::delta(g.num_vertices(), a).unwrap()).unwrap();
                prop_assert_eq!(ez_congruence(&m, &face(&m, &g, a).unwrap()).unwrap(), restricted);
                prop_assert_eq!(mass(&m, &face(&m, &g, a).unwrap()).unwrap(), c.num_classes());
            }
        }
    }

    #[test]
    fn phi_is_extensive_monotone_and_naive(
        (g, s, t) in arb_graph(1..=8).prop_flat_map(|g| {
            let n = g.num_vertices();
            (Just(g), vertex_subset(n), vertex_subset(n))
        })
    ) {
        let adj = adjacency(&g);
        let n = g.num_vertices();
        prop_assert!(s.is_subset(phi(&g, s)));
        let u = VertexSet(s.0 | t.0);
        prop_assert!(phi(&g, s).is_subset(phi(&g, u)));
        let member: Vec<bool> = (0..n).map(|v| s.contains(v)).collect();
        let naive: Vec<bool> = naive_phi(&adj, &member);
        prop_assert_eq!((0..n).map(|v| phi(&g, s).contains(v)).collect::<Vec<_>>(), naive);
        let trace = phi_trace(&g, s);
        prop_assert!(trace.len() <= n + 1);
        let closure = phi_closure(&g, s);
        prop_assert_eq!(*trace.last().unwrap(), closure);
        prop_assert_eq!(phi(&g, closure), closure);
    }

    #[test]
    fn reduction_graph_laws_hold(g in arb_graph(3..=7)) {
        let m = graph_symset();
        let cycle = restrict_to_cycle(&m, &g).unwrap();
        let st = cycle_stats(&m, &cycle).unwrap();
        let rg = reduction_graph(&m, &cycle).unwrap();
        let upper: VertexSet = st.upper.iter().copied().collect();
        for &(p, q) in &rg.edges {
            prop_assert!(!(upper.contains(q) && !upper.contains(p)));
            if upper.contains(p) && upper.contains(q) {
                prop_assert!(rg.has_edge(q, p));
            }
        }
        if st.d >= 2 {
            prop_assert!(st.upper.len() > st.d);
            for p in 0..cycle.size() {
                prop_assert!(rg.indegree(p) >= st.d);
            }
        }
        if st.satisfies_filling_inequalities() {
            prop_assert!(is_propagative(&rg.upper_graph().unwrap()).unwrap());
        }
    }

    #[test]
    fn propagation_is_order_independent(seed in any::<u64>(), size in 5..=7usize, start in any::<u64>()) {
        let m = graph_symset();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = DegenerateSampler::new(&m, size - 1).sample(size, &mut rng).unwrap();
        let cycle = restrict_to_cycle(&m, &f).unwrap();
        let start = VertexSet(start & ((1 << size) - 1));
        let mut order: Vec<usize> = (0..size).collect();
        let forward = propagate_filler_in_order(&m, &cycle, &f, start, &order).unwrap();
        order.reverse();
        prop_assert_eq!(propagate_filler_in_order(&m, &cycle, &f, start, &order).unwrap(), forward);
        order.shuffle(&mut rng);
        prop_assert_eq!(propagate_filler_in_order(&m, &cycle, &f, start, &order).unwrap(), forward);
    }

    #[test]
    fn seeds_agree_with_generator(seed in any::<u64>(), size in 4..=7usize) {
        let m = graph_symset();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = DegenerateSampler::new(&m, size - 1).sample(size, &mut rng).unwrap();
        let cycle = restrict_to_cycle(&m, &f).unwrap();
        let rg = reduction_graph(&m, &cycle).unwrap();
        for (p, q) in rg.upper_edges() {
            prop_assert_eq!(seed_filler(&m, &cycle, p, q).unwrap(), f.clone());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn constructive_filler_matches_brute_force_in_eq(seed in any::<u64>(), size in 4..=7usize) {
        let m = eq_symset();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = DegenerateSampler::new(&m, size - 1).sample(size, &mut rng).unwrap();
        let cycle = restrict_to_cycle(&m, &f).unwrap();
        let st = cycle_stats(&m, &cycle).unwrap();
        prop_assume!(st.constructible());
        let built = construct_degenerate_filler(&m, &cycle).unwrap();
        let all = brute_force_fillers(&m, &cycle, &FillerSearch::default()).unwrap();
        let degenerate: Vec<_> = all.iter().filter(|x| mass(&m, x).unwrap() < size).collect();
        prop_assert_eq!(degenerate, vec![&built]);
        prop_assert_eq!(built, f);
    }

    #[test]
    fn constructive_filler_matches_brute_force_in_graphs(seed in any::<u64>(), size in 4..=6usize) {
        let m = graph_symset();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = DegenerateSampler::new(&m, size - 1).sample(size, &mut rng).unwrap();
        let cycle = restrict_to_cycle(&m, &f).unwrap();
        prop_assume!(cycle_stats(&m, &cycle).unwrap().constructible());
        let built = construct_degenerate_filler(&m, &cycle).unwrap();
        let all = brute_force_fillers(&m, &cycle, &FillerSearch::default()).unwrap();
        let degenerate: Vec<_> = all.iter().filter(|x| mass(&m, x).unwrap() < size).collect();
        prop_assert_eq!(degenerate, vec![&built]);
    }

    #[test]
    fn exact_partitions_fill_uniquely(seed in any::<u64>(), l in 1..=3usize, extra in 1..=3usize) {
        let m = eq_exact_symset(l).unwrap();
        let size = symsets::levels::claimed_aufhebung(l) + 1 + extra;
        prop_assume!(size <= 8);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = DegenerateSampler::new(&m, l + 1).sample(size, &mut rng).unwrap();
        let cycle = restrict_to_cycle(&m, &f).unwrap();
        prop_assert!(cycle_stats(&m, &cycle).unwrap().constructible());
        let built = construct_degenerate_filler(&m, &cycle).unwrap();
        prop_assert_eq!(brute_force_fillers(&m, &cycle, &FillerSearch::default()).unwrap(), vec![built]);
    }
}
