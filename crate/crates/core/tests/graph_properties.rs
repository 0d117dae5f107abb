use proptest::prelude::*;
use torushom_core::graph_model::{common_neighborhood, delta, dominant_patterns, Pattern};
use torushom_core::rational::rat;
use torushom_core::WeightedGraph;

fn graph_strategy() -> impl Strategy<Value = WeightedGraph> {
    (2usize..=7).prop_flat_map(|q| {
        let pairs: Vec<(usize, usize)> = (0..q).flat_map(|u| (u..q).map(move |v| (u, v))).collect();
        let n = pairs.len();
        (
            proptest::collection::vec(any::<bool>(), n),
            proptest::collection::vec((1i64..5, 1i64..4), q),
            0..n,
        )
            .prop_map(move |(mask, acts, forced)| {
                let mut edges: Vec<(usize, usize)> = pairs
                    .iter()
                    .zip(&mask)
                    .filter(|(_, &keep)| keep)
                    .map(|(&e, _)| e)
                    .collect();
                edges.push(pairs[forced]);
                let activities = acts.into_iter().map(|(p, d)| rat(p, d)).collect();
                WeightedGraph::new(q, &edges, activities).unwrap()
            })
    })
}

fn permutation(q: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..q).collect::<Vec<_>>()).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn dominant_sides_are_closed(g in graph_strategy()) {
        for p in dominant_patterns(&g).unwrap().patterns {
            prop_assert_eq!(common_neighborhood(&g, p.b), p.a);
            prop_assert_eq!(common_neighborhood(&g, p.a), p.b);
        }
    }

    #[test]
    fn delta_below_one(g in graph_strategy()) {
        for p in dominant_patterns(&g).unwrap().patterns {
            prop_assert!(delta(&g, &p).unwrap() < rat(1, 1));
        }
    }

    #[test]
    fn relabelling_maps_patterns(
        (g, perm) in graph_strategy().prop_flat_map(|g| { let q = g.q(); (Just(g), permutation(q)) })
    ) {
        let before = dominant_patterns(&g).unwrap();
        let after = dominant_patterns(&g.permute(&perm)).unwrap();
        prop_assert_eq!(&before.eta, &after.eta);
        prop_assert_eq!(before.patterns.len(), after.patterns.len());
        let map = |s: torushom_core::VertexSet| {
            torushom_core::VertexSet::from_vertices(s.iter().map(|v| perm[v]))
        };
        for p in before.patterns {
            prop_assert!(after.contains(&Pattern::new(map(p.a), map(p.b))));
        }
    }

    #[test]
    fn bipartite_swap_closure(g in graph_strategy()) {
        if g.bipartition().is_some() {
            let dominant = dominant_patterns(&g).unwrap();
            for p in &dominant.patterns {
                prop_assert!(dominant.contains(&p.swapped()));
            }
        }
    }
}
