//! `k`-bounded functions on the Boolean lattice and their bijections to
//! Lipschitz functions and to homomorphisms into `C(4k+1; S_k)`.
//!
//! A vertex of `Q_n` is a bitmask with bit `i` for coordinate `i + 1`, so the
//! subsets of a set are numerically smaller and ascending order is a valid
//! evaluation order.

use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph_model::cayley_graph;
use crate::torus::{partition_function, Caps, TorusSpec};

/// Largest dimension accepted by the exhaustive enumeration.
pub const MAX_BK_DIMENSION: u32 = 4;

/// `f : 2^[n] → ℕ` with `f(∅) = 0` and increments in `0..=k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KBoundedFunction {
    pub n: u32,
    pub k: u32,
    pub values: Vec<i64>,
}

/// `g : V(Q_n) → ℤ` with `g(0) = 0` and `|g(u) − g(v)| ∈ steps` on every edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LipFunction {
    pub n: u32,
    pub steps: Vec<i64>,
    pub values: Vec<i64>,
}

fn edges(n: u32) -> impl Iterator<Item = (usize, usize)> {
    (0..1usize << n).flat_map(move |v| {
        (0..n as usize)
            .filter(move |&i| v >> i & 1 == 0)
            .map(move |i| (v, v | 1 << i))
    })
}

fn check_len(n: u32, len: usize) -> Result<()> {
    if len != 1 << n {
        return Err(Error::InvalidArgument(format!(
            "expected {} values for n={n}, got {len}",
            1usize << n
        )));
    }
    Ok(())
}

impl KBoundedFunction {
    pub fn new(n: u32, k: u32, values: Vec<i64>) -> Result<KBoundedFunction> {
        check_len(n, values.len())?;
        if values[0] != 0 {
            return Err(Error::InvalidArgument("f(∅) must be 0".into()));
        }
        for (lo, hi) in edges(n) {
            let step = values[hi] - values[lo];
            if !(0..=k as i64).contains(&step) {
                return Err(Error::InvalidArgument(format!(
                    "increment {step} from vertex {lo:b} to {hi:b} is outside 0..={k}"
                )));
            }
        }
        Ok(KBoundedFunction { n, k, values })
    }
}

impl LipFunction {
    pub fn new(n: u32, steps: Vec<i64>, values: Vec<i64>) -> Result<LipFunction> {
        check_len(n, values.len())?;
        if values[0] != 0 {
            return Err(Error::InvalidArgument("g(0) must be 0".into()));
        }
        for (u, v) in edges(n) {
            let diff = (values[u] - values[v]).abs();
            if !steps.contains(&diff) {
                return Err(Error::InvalidArgument(format!(
                    "|g({u:b}) − g({v:b})| = {diff} is not an allowed step"
                )));
            }
        }
        Ok(LipFunction { n, steps, values })
    }
}

/// `S_k = {0,…,k} ∩ (k + 2ℤ)`.
pub fn steps_k(k: u32) -> Vec<i64> {
    (0..=k as i64).filter(|s| (k as i64 - s) % 2 == 0).collect()
}

fn check_dimension(n: u32) -> Result<()> {
    if n > MAX_BK_DIMENSION {
        return Err(Error::CapExceeded {
            what: "k-bounded enumeration dimension",
            size: n as usize,
            cap: MAX_BK_DIMENSION as usize,
        });
    }
    Ok(())
}

/// Calls `visit` on every `k`-bounded function on `2^[n]`, in lexicographic
/// order of the value vectors.
pub fn for_each_bk(n: u32, k: u32, mut visit: impl FnMut(&[i64])) -> Result<()> {
    check_dimension(n)?;
    let mut values = vec![0i64; 1 << n];
    fn extend(v: usize, n: u32, k: i64, values: &mut Vec<i64>, visit: &mut dyn FnMut(&[i64])) {
        if v == values.len() {
            visit(values);
            return;
        }
        let (lo, hi) = bounds(v, n, k, values);
        for x in lo..=hi {
            values[v] = x;
            extend(v + 1, n, k, values, visit);
        }
    }
    extend(1, n, k as i64, &mut values, &mut visit);
    Ok(())
}

/// Range allowed for `f(v)` given its lower covers.
fn bounds(v: usize, n: u32, k: i64, values: &[i64]) -> (i64, i64) {
    (0..n as usize)
        .filter(|&i| v >> i & 1 == 1)
        .map(|i| values[v ^ 1 << i])
        .fold((i64::MIN, i64::MAX), |(lo, hi), x| {
            (lo.max(x), hi.min(x + k))
        })
}

/// `|𝓑_k(n)|` by depth-first search, branching on the singleton values in parallel.
pub fn enumerate_bk(n: u32, k: u32) -> Result<u64> {
    check_dimension(n)?;
    if n == 0 {
        return Ok(1);
    }
    let k = k as i64;
    fn count(v: usize, n: u32, k: i64, values: &mut Vec<i64>) -> u64 {
        if v == values.len() {
            return 1;
        }
        let (lo, hi) = bounds(v, n, k, values);
        let mut total = 0;
        for x in lo..=hi {
            values[v] = x;
            total += count(v + 1, n, k, values);
        }
        total
    }
    Ok((0..=k)
        .into_par_iter()
        .map(|first| {
            let mut values = vec![0i64; 1 << n];
            values[1] = first;
            count(2, n, k, &mut values)
        })
        .sum())
}

/// All of `𝓑_k(n)`.
pub fn bk_functions(n: u32, k: u32) -> Result<Vec<KBoundedFunction>> {
    let mut out = Vec::new();
    for_each_bk(n, k, |values| {
        out.push(KBoundedFunction {
            n,
            k,
            values: values.to_vec(),
        })
    })?;
    Ok(out)
}

/// `φ(f)(v) = 2f(v) − k|v|`.
pub fn phi_bijection(f: &KBoundedFunction) -> LipFunction {
    let k = f.k as i64;
    LipFunction {
        n: f.n,
        steps: steps_k(f.k),
        values: f
            .values
            .iter()
            .enumerate()
            .map(|(v, &x)| 2 * x - k * v.count_ones() as i64)
            .collect(),
    }
}

/// `φ⁻¹(g)(v) = (g(v) + k|v|)/2`.
pub fn phi_inverse(g: &LipFunction, k: u32) -> Result<KBoundedFunction> {
    if g.steps != steps_k(k) {
        return Err(Error::Bijection(format!(
            "step set {:?} is not S_{k}",
            g.steps
        )));
    }
    let k64 = k as i64;
    let values = g
        .values
        .iter()
        .enumerate()
        .map(|(v, &x)| {
            let twice = x + k64 * v.count_ones() as i64;
            if twice.is_odd() {
                Err(Error::Bijection(format!(
                    "g({v:b}) = {x} has the wrong parity"
                )))
            } else {
                Ok(twice / 2)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    KBoundedFunction::new(g.n, k, values).map_err(|e| Error::Bijection(e.to_string()))
}

fn check_modulus(steps: &[i64], modulus: u32) -> Result<()> {
    let s = steps.iter().copied().max().unwrap_or(0);
    if (modulus as i64) < 4 * s + 1 {
        return Err(Error::InvalidArgument(format!(
            "modulus {modulus} is below 4·max S + 1 = {}",
            4 * s + 1
        )));
    }
    Ok(())
}

/// `Mod_N(g)`, a homomorphism `Q_n → C(N; S)` sending `0` to `0`.
pub fn mod_bijection(g: &LipFunction, modulus: u32) -> Result<Vec<u32>> {
    check_modulus(&g.steps, modulus)?;
    Ok(g.values
        .iter()
        .map(|&x| x.rem_euclid(modulus as i64) as u32)
        .collect())
}

/// Parent in the spanning tree: the first nonzero coordinate is cleared.
pub fn tree_parent(v: usize) -> usize {
    v & (v - 1)
}

/// Lifts a rooted homomorphism back to a Lipschitz function along the tree,
/// then checks every edge.
pub fn mod_inverse(h: &[u32], n: u32, steps: &[i64], modulus: u32) -> Result<LipFunction> {
    check_len(n, h.len())?;
    check_modulus(steps, modulus)?;
    if h[0] != 0 {
        return Err(Error::Bijection("the homomorphism must send 0 to 0".into()));
    }
    let big_n = modulus as i64;
    let mut values = vec![0i64; h.len()];
    // ascending order visits every parent first
    for v in 1..h.len() {
        let parent = values[tree_parent(v)];
        let candidates: Vec<i64> = steps
            .iter()
            .flat_map(|&s| [parent - s, parent + s])
            .filter(|z| z.rem_euclid(big_n) == h[v] as i64)
            .collect();
        let Some(&z) = candidates.first() else {
            return Err(Error::Bijection(format!(
                "no lift of {} at vertex {v:b} next to {parent}",
                h[v]
            )));
        };
        if candidates.iter().any(|&c| c != z) {
            return Err(Error::Internal(format!("ambiguous lift at vertex {v:b}")));
        }
        values[v] = z;
    }
    LipFunction::new(n, steps.to_vec(), values).map_err(|e| Error::Bijection(e.to_string()))
}

/// `|Hom(Q_n, C(4k+1; S_k))| / (4k+1)`.
pub fn count_via_hom(n: u32, k: u32, caps: Caps) -> Result<u64> {
    let modulus = 4 * k + 1;
    let steps: Vec<usize> = steps_k(k).into_iter().map(|s| s as usize).collect();
    let target = cayley_graph(modulus as usize, &steps);
    let spec = TorusSpec::new(2, n)?;
    let z = partition_function(spec, &target, caps)?;
    if !z.is_integer() {
        return Err(Error::Internal(format!(
            "non-integer homomorphism count {z}"
        )));
    }
    let (quot, rem) = z.to_integer().div_rem(&modulus.into());
    if rem != 0.into() {
        return Err(Error::Internal(format!(
            "homomorphism count {z} is not divisible by {modulus}"
        )));
    }
    quot.to_u64()
        .ok_or_else(|| Error::Internal(format!("count {quot} does not fit in u64")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        assert_eq!(enumerate_bk(1, 1).unwrap(), 2);
        assert_eq!(enumerate_bk(2, 1).unwrap(), 6);
        assert_eq!(enumerate_bk(1, 2).unwrap(), 3);
        assert_eq!(bk_functions(2, 1).unwrap().len(), 6);
        assert!(enumerate_bk(5, 1).is_err());
    }

    #[test]
    fn step_sets() {
        assert_eq!(steps_k(1), vec![1]);
        assert_eq!(steps_k(2), vec![0, 2]);
        assert_eq!(steps_k(3), vec![1, 3]);
    }

    #[test]
    fn phi_examples() {
        let rank = KBoundedFunction::new(2, 1, vec![0, 1, 1, 2]).unwrap();
        assert_eq!(phi_bijection(&rank).values, vec![0, 1, 1, 2]);
        let zero = KBoundedFunction::new(2, 2, vec![0; 4]).unwrap();
        assert_eq!(phi_bijection(&zero).values, vec![0, -2, -2, -4]);
    }

    #[test]
    fn mod_examples() {
        let zero = LipFunction::new(3, vec![0, 2], vec![0; 8]).unwrap();
        assert_eq!(mod_bijection(&zero, 9).unwrap(), vec![0; 8]);
        assert!(mod_bijection(&zero, 8).is_err());
        assert_eq!(tree_parent(0b110), 0b100);
    }

    #[test]
    fn hom_count_matches_enumeration() {
        assert_eq!(count_via_hom(2, 1, Caps::default()).unwrap(), 6);
    }

    #[test]
    fn inverse_rejects_bad_input() {
        let bad = LipFunction {
            n: 1,
            steps: steps_k(2),
            values: vec![0, 1],
        };
        assert!(matches!(phi_inverse(&bad, 2), Err(Error::Bijection(_))));
        assert!(matches!(
            mod_inverse(&[0, 3], 1, &[1], 5),
            Err(Error::Bijection(_))
        ));
    }
}
