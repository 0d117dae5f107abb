//! Polymer weights as exponential polynomials in the dimension.

use num_traits::{One, Zero};

use super::support::{closure_and_codegrees, LocalVertex};
use crate::exp_poly::ExpPoly;
use crate::graph_model::{Pattern, VertexSet, WeightedGraph};
use crate::rational::{powi, Rational};

/// Whether the root is treated as an even (`𝓔`) or odd (`𝓞`) vertex.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum RootParity {
    Even,
    Odd,
}

impl RootParity {
    pub const BOTH: [RootParity; 2] = [RootParity::Even, RootParity::Odd];

    pub fn is_odd(self, v: &LocalVertex) -> bool {
        v.parity_offset() ^ (self == RootParity::Odd)
    }
}

/// Weight of the polymer `vertices` on `Z_m^n` as a function of `n`.
///
/// Every colouring `f` of the set that disagrees with `(A, B)` everywhere
/// contributes `β_f · (α_f^c)ⁿ`. Vertices of `S̄∖S` are handled exactly;
/// each remaining neighbour of `x ∈ S` sees only `x` and contributes the ratio
/// `r_x`, which gives `α_f = Π r_x` and the correction `Π r_x^{−d_S̄(x)}` in
/// `β_f`. Colourings with a zero ratio or an empty available set are dropped.
pub fn polymer_weight_symbolic(
    vertices: &[LocalVertex],
    graph: &WeightedGraph,
    pattern: &Pattern,
    rp: RootParity,
    m: u32,
) -> ExpPoly {
    let m8 = m as u8;
    let c = if m > 2 { 2 } else { 1 };
    let (closure, codegrees) = closure_and_codegrees(vertices, m);
    let outer: Vec<&LocalVertex> = closure.iter().filter(|u| !vertices.contains(u)).collect();
    let la = graph.weight(pattern.a);
    let lb = graph.weight(pattern.b);
    let side = |v: &LocalVertex| if rp.is_odd(v) { pattern.a } else { pattern.b };

    let denom = closure.iter().fold(Rational::one(), |acc, v| {
        acc * if rp.is_odd(v) { &la } else { &lb }
    });
    // neighbours of S̄∖S inside S, by index
    let outer_links: Vec<Vec<usize>> = outer
        .iter()
        .map(|u| {
            (0..vertices.len())
                .filter(|&i| vertices[i].adjacent(u, m8))
                .collect()
        })
        .collect();
    let earlier: Vec<Vec<usize>> = (0..vertices.len())
        .map(|i| {
            (0..i)
                .filter(|&j| vertices[i].adjacent(&vertices[j], m8))
                .collect()
        })
        .collect();

    let mut out = ExpPoly::zero();
    let mut colours = vec![0usize; vertices.len()];

    let mut emit = |colours: &[usize]| {
        let mut beta = colours
            .iter()
            .fold(Rational::one(), |acc, &col| acc * graph.activity(col));
        for (u, links) in outer.iter().zip(&outer_links) {
            let avail = links.iter().fold(side(u), |acc, &i| {
                acc.intersection(graph.neighbors(colours[i]))
            });
            if avail.is_empty() {
                return;
            }
            beta *= graph.weight(avail);
        }
        beta /= &denom;
        let mut alpha = Rational::one();
        for (i, x) in vertices.iter().enumerate() {
            // the outside neighbours of x are on the opposite parity class
            let (other_side, other_weight) = if rp.is_odd(x) {
                (pattern.b, &lb)
            } else {
                (pattern.a, &la)
            };
            let r =
                graph.weight(graph.neighbors(colours[i]).intersection(other_side)) / other_weight;
            if r.is_zero() {
                return;
            }
            beta *= powi(&r, -(codegrees[i] as i64));
            alpha *= r;
        }
        let base = if c == 2 { &alpha * &alpha } else { alpha };
        out.add_term(beta, 0, base);
    };

    fn extend(
        i: usize,
        vertices: &[LocalVertex],
        earlier: &[Vec<usize>],
        graph: &WeightedGraph,
        side: &dyn Fn(&LocalVertex) -> VertexSet,
        colours: &mut Vec<usize>,
        emit: &mut dyn FnMut(&[usize]),
    ) {
        if i == vertices.len() {
            emit(colours);
            return;
        }
        let allowed = earlier[i]
            .iter()
            .fold(side(&vertices[i]).complement(graph.q()), |acc, &j| {
                acc.intersection(graph.neighbors(colours[j]))
            });
        for col in allowed.iter() {
            colours[i] = col;
            extend(i + 1, vertices, earlier, graph, side, colours, emit);
        }
    }
    extend(0, vertices, &earlier, graph, &side, &mut colours, &mut emit);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph_model::{dominant_patterns, Pattern};
    use crate::rational::{int, pow, rat};

    fn lv(c: &[u8]) -> LocalVertex {
        LocalVertex::from_coords(c)
    }

    fn side_pattern(q: usize, a: usize) -> Pattern {
        Pattern::new(
            VertexSet::from_vertices(0..a),
            VertexSet::from_vertices(a..q),
        )
    }

    #[test]
    fn single_vertex_complete_graph() {
        for (q, a) in [(3usize, 1usize), (5, 2), (5, 3), (8, 4)] {
            let g = WeightedGraph::complete(q);
            let p = side_pattern(q, a);
            let b = q - a;
            for m in [2u32, 4] {
                let c = if m > 2 { 2 } else { 1 };
                let ratio = int(1) - rat(1, b as i64);
                let w = polymer_weight_symbolic(&[LocalVertex::ROOT], &g, &p, RootParity::Odd, m);
                let expected = ExpPoly::term(rat(b as i64, a as i64), 0, pow(&ratio, c));
                assert_eq!(w, expected, "K_{q} a={a} m={m}");
            }
        }
    }

    #[test]
    fn single_vertex_hard_core() {
        let x = rat(3, 2);
        let g = WeightedGraph::hard_core(x.clone()).unwrap();
        let p = Pattern::new(
            VertexSet::from_vertices([1]),
            VertexSet::from_vertices([0, 1]),
        );
        assert!(dominant_patterns(&g).unwrap().contains(&p));
        // an odd root may take v_in; its neighbours must be v_out
        let odd = polymer_weight_symbolic(&[LocalVertex::ROOT], &g, &p, RootParity::Odd, 2);
        let one_plus = int(1) + &x;
        assert_eq!(odd, ExpPoly::term(x.clone(), 0, one_plus.recip()));
        // an even root cannot disagree with B = {v_in, v_out}
        let even = polymer_weight_symbolic(&[LocalVertex::ROOT], &g, &p, RootParity::Even, 2);
        assert!(even.is_zero());
    }

    #[test]
    fn tree_shaped_odd_sets() {
        // odd vertices whose G²-graph is a path, each consecutive pair sharing
        // two common neighbours
        let shapes: Vec<Vec<LocalVertex>> = vec![
            vec![lv(&[1])],
            vec![lv(&[1, 0]), lv(&[0, 1])],
            vec![lv(&[1, 0, 0, 0]), lv(&[0, 1, 0, 0]), lv(&[0, 1, 1, 1])],
        ];
        for (q, a) in [(5usize, 2usize), (6, 3), (8, 4)] {
            let g = WeightedGraph::complete(q);
            let p = side_pattern(q, a);
            let (ar, b) = (a as i64, (q - a) as i64);
            let ratio = int(1) - rat(1, b);
            for (i, shape) in shapes.iter().enumerate() {
                let t = i as u32 + 1;
                let w = polymer_weight_symbolic(shape, &g, &p, RootParity::Even, 2);
                // per tree edge: Σ over the two endpoint colours of the
                // choices left for both common neighbours
                let edge = int((b - 1) * (b - 2) * (b - 2) + (b - 1) * (b - 1));
                let coeff = int(b) * pow(&edge, t - 1) * pow(&int(b), 2 * (t - 1))
                    / pow(&int(b - 1), 4 * (t - 1))
                    / pow(&int(ar), t);
                assert_eq!(w, ExpPoly::term(coeff, 0, pow(&ratio, t)), "q={q} t={t}");
            }
        }
    }
}
