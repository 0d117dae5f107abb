//! Rooted G²-connected supports inside a window of coordinates.

use std::collections::{BTreeSet, HashSet};

use super::MAX_ORDER;

/// Largest window: a support of size `j` touches at most `2(j−1)` coordinates.
pub const MAX_WINDOW: usize = 2 * (MAX_ORDER - 1);

/// A torus vertex with all coordinates outside the window equal to 0.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct LocalVertex {
    pub coords: [u8; MAX_WINDOW],
}

impl LocalVertex {
    pub const ROOT: LocalVertex = LocalVertex {
        coords: [0; MAX_WINDOW],
    };

    pub fn from_coords(coords: &[u8]) -> LocalVertex {
        let mut v = LocalVertex::ROOT;
        v.coords[..coords.len()].copy_from_slice(coords);
        v
    }

    /// Coordinate-sum parity relative to the root.
    pub fn parity_offset(&self) -> bool {
        self.coords.iter().map(|&c| c as u32).sum::<u32>() % 2 == 1
    }

    pub fn active_mask(&self) -> u32 {
        (0..MAX_WINDOW)
            .filter(|&i| self.coords[i] != 0)
            .fold(0, |acc, i| acc | 1 << i)
    }

    /// Neighbours with every changed coordinate below `width`.
    pub fn neighbors(&self, m: u8, width: usize) -> Vec<LocalVertex> {
        let mut out = Vec::with_capacity(2 * width);
        for i in 0..width {
            let mut up = *self;
            up.coords[i] = (self.coords[i] + 1) % m;
            out.push(up);
            if m > 2 {
                let mut down = *self;
                down.coords[i] = (self.coords[i] + m - 1) % m;
                out.push(down);
            }
        }
        out
    }

    pub fn adjacent(&self, other: &LocalVertex, m: u8) -> bool {
        let mut diff = None;
        for i in 0..MAX_WINDOW {
            if self.coords[i] != other.coords[i] {
                if diff.is_some() {
                    return false;
                }
                diff = Some(i);
            }
        }
        match diff {
            None => false,
            Some(i) => {
                let d = (self.coords[i] + m - other.coords[i]) % m;
                d == 1 || d == m - 1
            }
        }
    }

    /// Torus distance at most 2 (including equality).
    pub fn within_two(&self, other: &LocalVertex, m: u8) -> bool {
        let mut total = 0;
        for i in 0..MAX_WINDOW {
            let d = (self.coords[i] + m - other.coords[i]) % m;
            total += d.min(m - d) as u32;
            if total > 2 {
                return false;
            }
        }
        true
    }
}

/// A G²-connected set containing the root whose active coordinates are
/// exactly `0..a`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct LocalSet {
    /// Sorted; the root is always the first element.
    pub vertices: Vec<LocalVertex>,
    pub a: usize,
}

impl LocalSet {
    pub fn root() -> LocalSet {
        LocalSet {
            vertices: vec![LocalVertex::ROOT],
            a: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

pub(crate) fn active_count(vertices: &[LocalVertex]) -> usize {
    vertices
        .iter()
        .fold(0u32, |acc, v| acc | v.active_mask())
        .count_ones() as usize
}

/// Moves the active coordinates onto `0..a`, keeping their order.
fn compress(vertices: &mut [LocalVertex]) -> usize {
    let active = vertices.iter().fold(0u32, |acc, v| acc | v.active_mask());
    let kept: Vec<usize> = (0..MAX_WINDOW).filter(|&i| active >> i & 1 == 1).collect();
    for v in vertices.iter_mut() {
        let mut c = [0u8; MAX_WINDOW];
        for (to, &from) in kept.iter().enumerate() {
            c[to] = v.coords[from];
        }
        v.coords = c;
    }
    vertices.sort_unstable();
    kept.len()
}

/// Vertices at distance 1 or 2 from `v`, changing coordinates below `width`.
pub(crate) fn ball2(v: &LocalVertex, m: u8, width: usize) -> BTreeSet<LocalVertex> {
    let mut out = BTreeSet::new();
    for u in v.neighbors(m, width) {
        out.insert(u);
        for w in u.neighbors(m, width) {
            out.insert(w);
        }
    }
    out.remove(v);
    out
}

/// Every order-preserving placement of the `a` active coordinates of `set`
/// into `0..width`.
fn spread(set: &[LocalVertex], a: usize, width: usize) -> Vec<Vec<LocalVertex>> {
    (0u32..1 << width)
        .filter(|slots| slots.count_ones() as usize == a)
        .map(|slots| {
            let targets: Vec<usize> = (0..width).filter(|&i| slots >> i & 1 == 1).collect();
            set.iter()
                .map(|v| {
                    let mut c = [0u8; MAX_WINDOW];
                    for (from, &to) in targets.iter().enumerate() {
                        c[to] = v.coords[from];
                    }
                    LocalVertex { coords: c }
                })
                .collect()
        })
        .collect()
}

/// All rooted G²-connected sets of size `j` whose active coordinates are
/// exactly `0..a`, sorted by `a` and then by vertices.
///
/// Every such set minus a suitable non-root vertex is again one of these after
/// compression, so sets are grown one vertex at a time and recompressed.
pub fn enumerate_supports(m: u32, j: usize) -> Vec<LocalSet> {
    assert!((1..=MAX_ORDER).contains(&j), "support size out of range");
    let m = u8::try_from(m).expect("torus side fits in u8");
    let mut level: HashSet<Vec<LocalVertex>> = HashSet::from([vec![LocalVertex::ROOT]]);
    for _ in 1..j {
        let mut next = HashSet::new();
        for set in &level {
            let a = active_count(set);
            let width = (a + 2).min(MAX_WINDOW);
            // the new vertex may add up to two coordinates anywhere in the order
            for placed in spread(set, a, width) {
                let candidates: BTreeSet<LocalVertex> =
                    placed.iter().flat_map(|v| ball2(v, m, width)).collect();
                for u in candidates {
                    if placed.contains(&u) {
                        continue;
                    }
                    let mut grown = placed.clone();
                    grown.push(u);
                    compress(&mut grown);
                    next.insert(grown);
                }
            }
        }
        level = next;
    }
    let mut out: Vec<LocalSet> = level
        .into_iter()
        .map(|vertices| LocalSet {
            a: active_count(&vertices),
            vertices,
        })
        .collect();
    out.sort_by(|x, y| (x.a, &x.vertices).cmp(&(y.a, &y.vertices)));
    out
}

/// `S̄ = S ∪ {x : x has at least two neighbours in S}` and, for each `x ∈ S`
/// in order, the number of its neighbours in `S̄`.
///
/// Common neighbours of two vertices only change coordinates where those two
/// differ, so searching up to the last active coordinate is exhaustive.
pub fn closure_and_codegrees(vertices: &[LocalVertex], m: u32) -> (Vec<LocalVertex>, Vec<usize>) {
    let m = u8::try_from(m).expect("torus side fits in u8");
    let active = vertices.iter().fold(0u32, |acc, v| acc | v.active_mask());
    let width = (32 - active.leading_zeros()) as usize;
    let members: BTreeSet<LocalVertex> = vertices.iter().copied().collect();
    let mut extra: BTreeSet<LocalVertex> = BTreeSet::new();
    for v in vertices {
        for u in v.neighbors(m, width) {
            if members.contains(&u) || extra.contains(&u) {
                continue;
            }
            let count = vertices.iter().filter(|x| x.adjacent(&u, m)).count();
            if count >= 2 {
                extra.insert(u);
            }
        }
    }
    let closure: Vec<LocalVertex> = members.iter().chain(extra.iter()).copied().collect();
    let codegrees = vertices
        .iter()
        .map(|x| closure.iter().filter(|y| x.adjacent(y, m)).count())
        .collect();
    (closure, codegrees)
}

/// Whether the vertices form a connected set in the square of the torus.
pub fn g2_connected(vertices: &[LocalVertex], m: u32) -> bool {
    let m = m as u8;
    if vertices.is_empty() {
        return false;
    }
    let mut reached = vec![false; vertices.len()];
    reached[0] = true;
    let mut stack = vec![0];
    while let Some(i) = stack.pop() {
        for j in 0..vertices.len() {
            if !reached[j] && vertices[i].within_two(&vertices[j], m) {
                reached[j] = true;
                stack.push(j);
            }
        }
    }
    reached.iter().all(|&r| r)
}
