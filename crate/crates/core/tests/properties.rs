mod common;

use edgeglue::bounds::rational;
use edgeglue::constructions::{almost_regular, delete_per_copy, disjoint_blowup, sample_gnp, SeededSampler};
use edgeglue::embedding::{count_copies, count_embeddings, EmbeddingSearch};
use edgeglue::extremal::{exact_turan, Method};
use edgeglue::gluing::{glue_copies_along_forest, glue_oriented, RootedPattern};
use edgeglue::graph::{automorphism_count, canonical_form, decode_graph6, encode_graph6, DecodedLabel};
use edgeglue::supersat::{build_balanced_family, heavy_light_split, verify_family, BuildOptions, FamilyConstraints};
use edgeglue::{Graph, SignedBipartiteGraph};
use proptest::prelude::*;
use proptest::sample::subsequence;

use common::{naive_contains, naive_embeddings, turan_brute};

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
            let all = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)));
            Graph::from_edges(n, all.zip(bits).filter(|(_, keep)| *keep).map(|(e, _)| e)).unwrap()
        })
    })
}

fn with_edge(max_n: usize) -> impl Strategy<Value = Graph> {
    graph(max_n).prop_filter("needs an edge", |g| g.edge_count() > 0)
}

fn permuted(max_n: usize) -> impl Strategy<Value = (Graph, Vec<usize>)> {
    graph(max_n).prop_flat_map(|g| {
        let n = g.vertex_count();
        (Just(g), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_form_ignores_labels((g, perm) in permuted(9)) {
        let h = g.relabel(&perm);
        let (a, b) = (canonical_form(&g).unwrap(), canonical_form(&h).unwrap());
        prop_assert_eq!(&a, &b);
        match a.decode().unwrap() {
            DecodedLabel::Unsigned(c) => {
                prop_assert_eq!(c.edge_count(), g.edge_count());
                prop_assert_eq!(canonical_form(&c).unwrap(), a);
            }
            DecodedLabel::Signed(_) => prop_assert!(false, "unsigned input decoded as signed"),
        }
    }

    #[test]
    fn canonical_form_separates(g in graph(6), h in graph(6)) {
        let same = canonical_form(&g).unwrap() == canonical_form(&h).unwrap();
        let iso = g.vertex_count() == h.vertex_count()
            && g.edge_count() == h.edge_count()
            && naive_embeddings(&g, &h, None).len() as u64 > 0;
        prop_assert_eq!(same, iso);
    }

    #[test]
    fn graph6_and_json_round_trip(g in graph(70)) {
        prop_assert_eq!(&decode_graph6(&encode_graph6(&g)).unwrap(), &g);
        prop_assert_eq!(&Graph::from_json(&g.to_json()).unwrap(), &g);
    }

    #[test]
    fn embeddings_split_by_edge_image(h in with_edge(4), g in graph(7)) {
        let f = h.edges()[0];
        let total = count_embeddings(&h, &g).unwrap();
        let mut sum = 0;
        for (u, v) in g.edges() {
            for (x, y) in [(u, v), (v, u)] {
                sum += EmbeddingSearch::new(&h, &g).fix(f.0, x).fix(f.1, y).count().unwrap();
            }
        }
        prop_assert_eq!(sum, total);
        let aut = automorphism_count(&h).unwrap();
        prop_assert_eq!(total % aut, 0);
        prop_assert_eq!(count_copies(&h, &g).unwrap(), total / aut);
    }

    #[test]
    fn oriented_gluing_sizes(h1 in with_edge(5), h2 in with_edge(5), i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let (e1, e2) = (*i.get(&h1.edges()), *j.get(&h2.edges()));
        let g = glue_oriented(&h1, e1, &h2, e2).unwrap();
        prop_assert_eq!(g.vertex_count(), h1.vertex_count() + h2.vertex_count() - 2);
        prop_assert_eq!(g.edge_count(), h1.edge_count() + h2.edge_count() - 1);
    }

    #[test]
    fn forest_gluing_sizes(h in with_edge(6), roots in subsequence((0..6).collect::<Vec<_>>(), 1..5), s in 1usize..4) {
        let roots: Vec<usize> = roots.into_iter().filter(|&r| r < h.vertex_count()).collect();
        prop_assume!(!roots.is_empty() && roots.len() < h.vertex_count());
        let induced = h.induced(&roots);
        prop_assume!(induced.is_forest());
        let root_edges: Vec<(usize, usize)> = induced.edges().into_iter().map(|(a, b)| (roots[a], roots[b])).collect();
        let p = RootedPattern::new(h.clone(), roots.clone(), root_edges.clone(), None);
        prop_assume!(p.is_ok());
        let glued = glue_copies_along_forest(&p.unwrap(), s).unwrap();
        let (v, e, l, ef) = (h.vertex_count(), h.edge_count(), roots.len(), root_edges.len());
        prop_assert_eq!(glued.vertex_count(), l + s * (v - l));
        prop_assert_eq!(glued.edge_count(), ef + s * (e - ef));
    }

    #[test]
    fn per_copy_deletion(g in graph(8), f in with_edge(4)) {
        let (out, deleted) = delete_per_copy(&g, &f).unwrap();
        prop_assert!(!naive_contains(&out, &f));
        prop_assert!(deleted as u64 <= count_copies(&f, &g).unwrap());
        prop_assert_eq!(out.edge_count() + deleted, g.edge_count());
        prop_assert!(out.edges().iter().all(|&(a, b)| g.has_edge(a, b)));
    }

    #[test]
    fn builder_respects_caps(g in graph(8), pair in proptest::option::of(1u64..4), edge in proptest::option::of(1u64..4), seed in proptest::option::of(any::<u64>())) {
        let p = RootedPattern::edge_rooted(Graph::path(4), (1, 2)).unwrap();
        let c = FamilyConstraints::with_caps(pair, edge);
        let opts = BuildOptions { shuffle: seed.map(SeededSampler::new), unlabeled: false };
        let fam = build_balanced_family(&g, &p, &c, &opts).unwrap();
        prop_assert_eq!(verify_family(&fam, &c, None).unwrap().violation_count(), 0);
        let again = build_balanced_family(&g, &p, &c, &opts).unwrap();
        prop_assert_eq!(fam.members, again.members);
    }

    #[test]
    fn heavy_light_conserves(degrees in proptest::collection::btree_map(0usize..50, 0u64..20, 0..30), num in 0i64..25, den in 1i64..4) {
        let split = heavy_light_split(&degrees, &rational(num, den));
        prop_assert_eq!(split.heavy.len() + split.light.len(), degrees.len());
        prop_assert_eq!(split.heavy_mass + split.light_mass, degrees.values().sum::<u64>());
        for k in &split.heavy {
            prop_assert!(rational(degrees[k] as i64, 1) >= rational(num, den));
        }
    }

    #[test]
    fn gnp_is_reproducible(n in 0usize..40, num in 0i64..=8, seed in any::<u64>()) {
        let p = rational(num, 8);
        let s = SeededSampler::new(seed);
        let a = sample_gnp(n, &p, &s).unwrap();
        prop_assert_eq!(encode_graph6(&a), encode_graph6(&sample_gnp(n, &p, &s).unwrap()));
        if num == 0 {
            prop_assert_eq!(a.edge_count(), 0);
        }
        if num == 8 {
            prop_assert_eq!(a.edge_count(), n * n.saturating_sub(1) / 2);
        }
    }

    #[test]
    fn blowup_edge_count(g in graph(6), k1 in 1usize..4, k2 in 1usize..4) {
        prop_assume!(g.is_bipartite());
        let base = SignedBipartiteGraph::from_bipartite(&g).unwrap();
        let (pm, pn) = (base.plus_count(), base.minus_count());
        prop_assume!(pm > 0 && pn > 0);
        let out = disjoint_blowup(&base, &rational(1, k1 as i64), &rational(1, k2 as i64), pm * k1, pn * k2).unwrap();
        let copies = k1.min(k2);
        prop_assert_eq!(out.edge_count(), copies * base.edge_count());
        prop_assert_eq!((out.plus_count(), out.minus_count()), (pm * k1, pn * k2));
    }

    #[test]
    fn regular_graphs_are_almost_regular(n in 3usize..12) {
        prop_assert!(almost_regular(&Graph::cycle(n), &rational(1, 1)));
        prop_assert!(almost_regular(&Graph::complete(n), &rational(1, 1)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn search_matches_brute_force(h in with_edge(4), n in 3usize..=6) {
        let h = h.induced(&(0..h.vertex_count()).filter(|&v| h.degree(v) > 0).collect::<Vec<_>>());
        let got = exact_turan(n, std::slice::from_ref(&h), Method::BranchAndBound).unwrap();
        prop_assert_eq!(got.value, turan_brute(n, &h));
        let witness = decode_graph6(&got.witness).unwrap();
        prop_assert!(!naive_contains(&witness, &h));
        prop_assert_eq!(witness.edge_count(), got.value);
    }
}
