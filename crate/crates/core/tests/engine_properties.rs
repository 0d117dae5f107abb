use torushom_core::formulas::{qcolor_f, qcolor_l2};
use torushom_core::graph_model::{delta, dominant_patterns, pattern_classes};
use torushom_core::rational::{int, pow, rat};
use torushom_core::{cayley_graph, l1_closed, l_terms, z_formula, WeightedGraph};

fn battery() -> Vec<WeightedGraph> {
    let mut out: Vec<WeightedGraph> = (3..=6).map(WeightedGraph::complete).collect();
    for x in [rat(1, 1), rat(2, 1), rat(1, 2)] {
        out.push(WeightedGraph::hard_core(x).unwrap());
    }
    out.push(cayley_graph(5, &[1]));
    out.push(cayley_graph(9, &[0, 2]));
    out.push(
        WeightedGraph::new(
            3,
            &[(0, 1), (1, 2), (0, 2)],
            vec![rat(1, 1), rat(2, 1), rat(3, 2)],
        )
        .unwrap(),
    );
    out
}

#[test]
fn first_term_matches_closed_form() {
    for g in battery() {
        for p in dominant_patterns(&g).unwrap().patterns {
            for m in [2, 4] {
                assert_eq!(
                    l_terms(&g, &p, m, 1).unwrap()[0],
                    l1_closed(&g, &p, m).unwrap()
                );
            }
        }
    }
}

#[test]
fn degrees_and_bases_are_bounded() {
    for g in battery() {
        let p = dominant_patterns(&g).unwrap().patterns[0];
        let d = delta(&g, &p).unwrap();
        for m in [2u32, 4] {
            let c = if m > 2 { 2 } else { 1 };
            let terms = l_terms(&g, &p, m, 3).unwrap();
            for (i, t) in terms.iter().enumerate() {
                let k = i as u32 + 1;
                assert!(t.max_npow().unwrap_or(0) <= 2 * (k - 1));
                assert!(t.bases().iter().all(|b| *b < int(m as i64)));
            }
            let cap = int(m as i64) * pow(&d, c);
            assert!(terms[0].bases().iter().all(|b| *b <= cap));
        }
    }
}

#[test]
fn symmetric_patterns_share_terms() {
    for g in battery() {
        let dominant = dominant_patterns(&g).unwrap();
        for class in pattern_classes(&g, &dominant.patterns) {
            let reference = l_terms(&g, &dominant.patterns[class[0]], 2, 2).unwrap();
            for &i in &class[1..] {
                assert_eq!(l_terms(&g, &dominant.patterns[i], 2, 2).unwrap(), reference);
            }
        }
    }
}

#[test]
fn complete_graph_closed_forms() {
    for q in 3..=8 {
        let g = WeightedGraph::complete(q);
        let p = dominant_patterns(&g).unwrap().patterns[0];
        let k = if q >= 4 { 2 } else { 1 };
        let terms = l_terms(&g, &p, 2, k).unwrap();
        assert_eq!(terms[0], qcolor_f(q).unwrap(), "K_{q}");
        if q >= 4 {
            assert_eq!(terms[1], qcolor_l2(q).unwrap(), "K_{q}");
        }
    }
}

#[test]
fn pattern_counts_of_complete_graphs() {
    for q in 3..=8usize {
        let z = z_formula(&WeightedGraph::complete(q), 2, 1).unwrap();
        let binom = (1..=q / 2).fold(1usize, |acc, i| acc * (q + 1 - i) / i);
        let odd = if q % 2 == 1 { 2 } else { 1 };
        assert_eq!(z.pattern_count(), odd * binom, "K_{q}");
    }
}
