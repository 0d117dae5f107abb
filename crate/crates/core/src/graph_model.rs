//! Weighted target graphs `(H, λ)`, patterns and dominant patterns.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, Rational};

/// Largest supported number of vertices in `H` (the dominant pattern scan is `2^q`).
pub const MAX_VERTICES: usize = 24;

/// A subset of `V(H)` as a bitmask over 0-indexed vertices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VertexSet(pub u32);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn full(q: usize) -> VertexSet {
        VertexSet(if q >= 32 { u32::MAX } else { (1u32 << q) - 1 })
    }

    pub fn singleton(v: usize) -> VertexSet {
        VertexSet(1 << v)
    }

    pub fn from_vertices<I: IntoIterator<Item = usize>>(vs: I) -> VertexSet {
        VertexSet(vs.into_iter().fold(0, |acc, v| acc | (1 << v)))
    }

    pub fn contains(self, v: usize) -> bool {
        self.0 >> v & 1 == 1
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn union(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & other.0)
    }

    pub fn complement(self, q: usize) -> VertexSet {
        VertexSet(!self.0 & VertexSet::full(q).0)
    }

    pub fn is_subset(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..32).filter(move |v| bits >> v & 1 == 1)
    }

    /// 1-indexed vertex labels, as used in files and reports.
    pub fn labels(self) -> Vec<usize> {
        self.iter().map(|v| v + 1).collect()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.labels().into_iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// The target graph `H` (loops allowed) with positive rational activities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGraph {
    q: usize,
    /// `adj[v]` is the neighbourhood of `v`; contains `v` iff `v` carries a loop.
    adj: Vec<VertexSet>,
    activities: Vec<Rational>,
}

impl WeightedGraph {
    /// Builds a graph from 0-indexed edges; the adjacency is symmetrized.
    pub fn new(q: usize, edges: &[(usize, usize)], activities: Vec<Rational>) -> Result<Self> {
        if q == 0 || q > MAX_VERTICES {
            return Err(Error::InvalidArgument(format!(
                "vertex count {q} outside 1..={MAX_VERTICES}"
            )));
        }
        if activities.len() != q {
            return Err(Error::InvalidArgument(format!(
                "expected {q} activities, got {}",
                activities.len()
            )));
        }
        if let Some(v) = activities.iter().position(|l| !l.is_positive()) {
            return Err(Error::NonPositiveActivity {
                line: 0,
                vertex: v + 1,
            });
        }
        let mut adj = vec![VertexSet::EMPTY; q];
        for &(u, v) in edges {
            if u >= q || v >= q {
                return Err(Error::InvalidArgument(format!(
                    "edge ({u},{v}) out of range"
                )));
            }
            adj[u].0 |= 1 << v;
            adj[v].0 |= 1 << u;
        }
        Ok(WeightedGraph { q, adj, activities })
    }

    /// Unit activities.
    pub fn unweighted(q: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Self::new(q, edges, vec![Rational::one(); q])
    }

    /// The complete graph `K_q` without loops.
    pub fn complete(q: usize) -> Self {
        let edges: Vec<_> = (0..q)
            .flat_map(|u| (u + 1..q).map(move |v| (u, v)))
            .collect();
        Self::unweighted(q, &edges).expect("valid complete graph")
    }

    /// The hard-core graph: vertex 1 is `v_in` with activity `fugacity`,
    /// vertex 2 is `v_out` with a loop and activity 1.
    pub fn hard_core(fugacity: Rational) -> Result<Self> {
        Self::new(2, &[(0, 1), (1, 1)], vec![fugacity, Rational::one()])
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn neighbors(&self, v: usize) -> VertexSet {
        self.adj[v]
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn has_loop(&self, v: usize) -> bool {
        self.adj[v].contains(v)
    }

    pub fn activity(&self, v: usize) -> &Rational {
        &self.activities[v]
    }

    pub fn activities(&self) -> &[Rational] {
        &self.activities
    }

    /// `λ_X = Σ_{v∈X} λ_v`.
    pub fn weight(&self, set: VertexSet) -> Rational {
        set.iter()
            .fold(Rational::zero(), |acc, v| acc + &self.activities[v])
    }

    pub fn all(&self) -> VertexSet {
        VertexSet::full(self.q)
    }

    pub fn has_adjacency(&self) -> bool {
        self.adj.iter().any(|n| !n.is_empty())
    }

    /// Edges as 0-indexed pairs `u <= v`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.q)
            .flat_map(|u| (u..self.q).map(move |v| (u, v)))
            .filter(|&(u, v)| self.adjacent(u, v))
            .collect()
    }

    /// Relabels vertices: vertex `v` becomes `perm[v]`.
    pub fn permute(&self, perm: &[usize]) -> WeightedGraph {
        let mut activities = vec![Rational::zero(); self.q];
        for v in 0..self.q {
            activities[perm[v]] = self.activities[v].clone();
        }
        let edges: Vec<_> = self
            .edges()
            .into_iter()
            .map(|(u, v)| (perm[u], perm[v]))
            .collect();
        WeightedGraph::new(self.q, &edges, activities).expect("permutation of a valid graph")
    }

    /// Two-colouring of a connected bipartite graph, or `None`.
    pub fn bipartition(&self) -> Option<(VertexSet, VertexSet)> {
        let mut side = vec![None; self.q];
        side[0] = Some(false);
        let mut stack = vec![0];
        while let Some(u) = stack.pop() {
            for v in self.adj[u].iter() {
                match side[v] {
                    None => {
                        side[v] = Some(!side[u].unwrap());
                        stack.push(v);
                    }
                    Some(s) if s == side[u].unwrap() => return None,
                    _ => {}
                }
            }
        }
        if side.iter().any(Option::is_none) {
            return None;
        }
        let plus = VertexSet::from_vertices((0..self.q).filter(|&v| side[v] == Some(false)));
        Some((plus, plus.complement(self.q)))
    }

    /// Renders the graph in the line-oriented file format.
    pub fn to_file_string(&self) -> String {
        let mut out = format!("q {}\n", self.q);
        for (v, l) in self.activities.iter().enumerate() {
            out.push_str(&format!("lambda {} {}\n", v + 1, format_rational(l)));
        }
        for (u, v) in self.edges() {
            out.push_str(&format!("edge {} {}\n", u + 1, v + 1));
        }
        out
    }
}

/// Parses the graph file format:
///
/// ```text
/// # comment
/// q 3
/// lambda 1 1/1
/// edge 1 2
/// edge 2 2     # a loop
/// ```
pub fn load_graph(text: &str) -> Result<WeightedGraph> {
    let mut q: Option<usize> = None;
    let mut activities: Vec<Option<Rational>> = Vec::new();
    let mut edges = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let malformed = |msg: &str| Error::Malformed {
            line,
            msg: format!("{msg}: {content:?}"),
        };
        let fields: Vec<&str> = content.split_whitespace().collect();
        let Some(count) = q else {
            if fields.len() != 2 || fields[0] != "q" {
                return Err(malformed("expected `q <integer>` first"));
            }
            let value: usize = fields[1]
                .parse()
                .map_err(|_| malformed("vertex count is not an integer"))?;
            if value == 0 || value > MAX_VERTICES {
                return Err(malformed("vertex count out of range"));
            }
            q = Some(value);
            activities = vec![None; value];
            continue;
        };
        let vertex = |token: &str| -> Result<usize> {
            let index: i64 = token
                .parse()
                .map_err(|_| malformed("vertex index is not an integer"))?;
            if index < 1 || index as usize > count {
                return Err(Error::VertexOutOfRange {
                    line,
                    index,
                    q: count,
                });
            }
            Ok(index as usize - 1)
        };
        match fields.as_slice() {
            ["lambda", v, value] => {
                let v = vertex(v)?;
                let value = parse_rational(value).map_err(|e| malformed(&e.to_string()))?;
                if !value.is_positive() {
                    return Err(Error::NonPositiveActivity {
                        line,
                        vertex: v + 1,
                    });
                }
                if activities[v].is_some() {
                    return Err(Error::DuplicateActivity {
                        line,
                        vertex: v + 1,
                    });
                }
                activities[v] = Some(value);
            }
            ["edge", u, v] => edges.push((vertex(u)?, vertex(v)?)),
            ["q", _] => return Err(malformed("vertex count declared twice")),
            _ => return Err(malformed("unrecognised directive")),
        }
    }

    let q = q.ok_or(Error::Malformed {
        line: 0,
        msg: "missing `q <integer>` line".into(),
    })?;
    let activities = activities
        .into_iter()
        .map(|l| l.unwrap_or_else(Rational::one))
        .collect();
    WeightedGraph::new(q, &edges, activities)
}

/// `C(N; S)`: vertices `Z_N`, `u ~ v` iff `u - v = ±x` for some `x ∈ S`.
pub fn cayley_graph(modulus: usize, steps: &[usize]) -> WeightedGraph {
    assert!(modulus >= 1, "modulus must be positive");
    let mut edges = Vec::new();
    for u in 0..modulus {
        for &s in steps {
            let s = s % modulus;
            edges.push((u, (u + s) % modulus));
        }
    }
    WeightedGraph::unweighted(modulus, &edges).expect("valid Cayley graph")
}

/// Ordered pair `(A, B)` of nonempty vertex sets with `A ~ B`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Pattern {
    pub a: VertexSet,
    pub b: VertexSet,
}

impl Pattern {
    pub fn new(a: VertexSet, b: VertexSet) -> Pattern {
        Pattern { a, b }
    }

    pub fn swapped(self) -> Pattern {
        Pattern {
            a: self.b,
            b: self.a,
        }
    }

    pub fn is_pattern_of(&self, graph: &WeightedGraph) -> bool {
        !self.a.is_empty()
            && !self.b.is_empty()
            && self.a.iter().all(|u| self.b.is_subset(graph.neighbors(u)))
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

/// Common neighbourhood `n(A) = {v : v ~ a for all a ∈ A}`; `n(∅) = V(H)`.
pub fn common_neighborhood(graph: &WeightedGraph, set: VertexSet) -> VertexSet {
    set.iter()
        .fold(graph.all(), |acc, v| acc.intersection(graph.neighbors(v)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominantPatternSet {
    pub eta: Rational,
    pub patterns: Vec<Pattern>,
}

impl DominantPatternSet {
    pub fn contains(&self, pattern: &Pattern) -> bool {
        self.patterns.contains(pattern)
    }

    pub fn index_of(&self, pattern: &Pattern) -> Option<usize> {
        self.patterns.iter().position(|p| p == pattern)
    }
}

/// All patterns maximizing `λ_A λ_B`, ordered by the bitmask of `A`.
pub fn dominant_patterns(graph: &WeightedGraph) -> Result<DominantPatternSet> {
    let q = graph.q();
    let mut best: Option<Rational> = None;
    let mut patterns = Vec::new();
    for bits in 1u32..(1u32 << q) {
        let a = VertexSet(bits);
        let b = common_neighborhood(graph, a);
        if b.is_empty() {
            continue;
        }
        let value = graph.weight(a) * graph.weight(b);
        match &best {
            Some(eta) if &value < eta => {}
            Some(eta) if &value == eta => patterns.push(Pattern::new(a, b)),
            _ => {
                best = Some(value);
                patterns.clear();
                patterns.push(Pattern::new(a, b));
            }
        }
    }
    let eta = best.ok_or(Error::NoPattern)?;
    Ok(DominantPatternSet { eta, patterns })
}

pub(crate) fn ensure_dominant(
    graph: &WeightedGraph,
    pattern: &Pattern,
) -> Result<DominantPatternSet> {
    let dominant = dominant_patterns(graph)?;
    if dominant.contains(pattern) {
        Ok(dominant)
    } else {
        Err(Error::NotDominant(pattern.to_string()))
    }
}

/// `δ_{A,B}`: the largest relative weight of a side's neighbourhood seen from
/// a vertex outside the other side. A max over an empty set contributes 0.
pub fn delta(graph: &WeightedGraph, pattern: &Pattern) -> Result<Rational> {
    ensure_dominant(graph, pattern)?;
    Ok(delta_unchecked(graph, pattern))
}

pub(crate) fn delta_unchecked(graph: &WeightedGraph, pattern: &Pattern) -> Rational {
    let q = graph.q();
    let la = graph.weight(pattern.a);
    let lb = graph.weight(pattern.b);
    let from_a_side = pattern
        .b
        .complement(q)
        .iter()
        .map(|v| graph.weight(graph.neighbors(v).intersection(pattern.a)) / &la);
    let from_b_side = pattern
        .a
        .complement(q)
        .iter()
        .map(|u| graph.weight(graph.neighbors(u).intersection(pattern.b)) / &lb);
    from_a_side
        .chain(from_b_side)
        .max()
        .unwrap_or_else(Rational::zero)
}

/// Finds a permutation `σ` of `V(H)` preserving adjacency and activities with
/// `σ(from.a) = to.a` and `σ(from.b) = to.b`.
pub fn pattern_automorphism(
    graph: &WeightedGraph,
    from: &Pattern,
    to: &Pattern,
) -> Option<Vec<usize>> {
    let q = graph.q();
    let class = |p: &Pattern, v: usize| (p.a.contains(v), p.b.contains(v));
    let mut image = vec![usize::MAX; q];
    let mut used = vec![false; q];

    fn extend(
        v: usize,
        graph: &WeightedGraph,
        from: &Pattern,
        to: &Pattern,
        class: &dyn Fn(&Pattern, usize) -> (bool, bool),
        image: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        let q = graph.q();
        if v == q {
            return true;
        }
        for w in 0..q {
            if used[w]
                || class(from, v) != class(to, w)
                || graph.activity(v) != graph.activity(w)
                || graph.has_loop(v) != graph.has_loop(w)
                || graph.neighbors(v).len() != graph.neighbors(w).len()
            {
                continue;
            }
            if (0..v).any(|u| graph.adjacent(u, v) != graph.adjacent(image[u], w)) {
                continue;
            }
            image[v] = w;
            used[w] = true;
            if extend(v + 1, graph, from, to, class, image, used) {
                return true;
            }
            used[w] = false;
        }
        false
    }

    if from.a.len() != to.a.len() || from.b.len() != to.b.len() {
        return None;
    }
    extend(0, graph, from, to, &class, &mut image, &mut used).then_some(image)
}

/// Groups patterns into classes with equal cluster-expansion terms: related by
/// an automorphism of `(H, λ)`, possibly after swapping the two sides.
pub fn pattern_classes(graph: &WeightedGraph, patterns: &[Pattern]) -> Vec<Vec<usize>> {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, p) in patterns.iter().enumerate() {
        let home = classes.iter_mut().find(|class| {
            let rep = &patterns[class[0]];
            pattern_automorphism(graph, rep, p).is_some()
                || pattern_automorphism(graph, rep, &p.swapped()).is_some()
        });
        match home {
            Some(class) => class.push(i),
            None => classes.push(vec![i]),
        }
    }
    classes
}

/// Serializable view of a pattern with 1-indexed labels.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct PatternView {
    #[serde(rename = "A")]
    pub a: Vec<usize>,
    #[serde(rename = "B")]
    pub b: Vec<usize>,
}

impl From<&Pattern> for PatternView {
    fn from(p: &Pattern) -> Self {
        PatternView {
            a: p.a.labels(),
            b: p.b.labels(),
        }
    }
}
