//! Dissection diagrams: validation, enumeration, the triple bijection, faces.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::sync::{Mutex, OnceLock};

pub const DEFAULT_MAX_DEGREE: usize = 8;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("degree {0} exceeds the enumeration bound {1}")]
    BoundExceeded(usize, usize),
    #[error("triple decomposition needs degree at least 1")]
    DegreeZero,
    #[error("chord index {0} out of range for degree {1}")]
    InvalidChord(usize, usize),
    #[error("side index {0} out of range for degree {1}")]
    InvalidSide(usize, usize),
    #[error("index sets overlap")]
    Overlap,
    #[error("expected {expected} sides, got {got}")]
    Cardinality { expected: usize, got: usize },
    #[error("invalid diagram: {0}")]
    Invalid(InvalidReason),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvalidReason {
    TargetOutOfRange(usize),
    SelfLoop(usize),
    Cycle(usize),
    Crossing(usize, usize),
}

impl std::fmt::Display for InvalidReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            InvalidReason::TargetOutOfRange(i) => write!(f, "chord {i} targets a missing vertex"),
            InvalidReason::SelfLoop(i) => write!(f, "chord {i} is a loop"),
            InvalidReason::Cycle(i) => write!(f, "chord {i} lies on a cycle"),
            InvalidReason::Crossing(i, j) => write!(f, "chords {i} and {j} cross"),
        }
    }
}

/// A rooted (n+1)-gon with n noncrossing chords forming a spanning tree
/// oriented toward the root. Vertex 0 is the root; chord `i` leaves vertex `i`
/// and ends at `parent(i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DissectionDiagram {
    parent: Vec<usize>,
}

impl Ord for DissectionDiagram {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.parent.cmp(&other.parent))
    }
}

impl PartialOrd for DissectionDiagram {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Chords {a,b} and {c,d} cross iff their endpoints interleave strictly.
pub fn chords_cross(a: usize, b: usize, c: usize, d: usize) -> bool {
    let (a, b) = (a.min(b), a.max(b));
    let (c, d) = (c.min(d), c.max(d));
    (a < c && c < b && b < d) || (c < a && a < d && d < b)
}

impl DissectionDiagram {
    /// Build from the parent list `[parent(1), …, parent(n)]`, validating.
    pub fn new(parent: Vec<usize>) -> Result<Self, DiagramError> {
        let d = DissectionDiagram { parent };
        d.validate().map_err(DiagramError::Invalid)?;
        Ok(d)
    }

    /// Build without validation; `validate` reports problems later.
    pub fn from_parents_unchecked(parent: Vec<usize>) -> Self {
        DissectionDiagram { parent }
    }

    pub fn empty() -> Self {
        DissectionDiagram { parent: Vec::new() }
    }

    pub fn degree(&self) -> usize {
        self.parent.len()
    }

    /// Target of chord `i` (1-based).
    pub fn parent(&self, i: usize) -> usize {
        self.parent[i - 1]
    }

    pub fn parents(&self) -> &[usize] {
        &self.parent
    }

    /// Chords as (source, target) pairs, indexed by chord label minus one.
    pub fn chords(&self) -> Vec<(usize, usize)> {
        self.parent.iter().enumerate().map(|(i, &p)| (i + 1, p)).collect()
    }

    /// Side `j` goes from vertex `j` to vertex `j+1`, side `n` returns to the root.
    pub fn side_endpoints(&self, j: usize) -> (usize, usize) {
        let n = self.degree();
        (j, if j == n { 0 } else { j + 1 })
    }

    pub fn validate(&self) -> Result<(), InvalidReason> {
        let n = self.degree();
        for (i, &p) in self.parent.iter().enumerate() {
            let i = i + 1;
            if p > n {
                return Err(InvalidReason::TargetOutOfRange(i));
            }
            if p == i {
                return Err(InvalidReason::SelfLoop(i));
            }
        }
        // Following parents must reach the root: this gives acyclicity and
        // root orientation together.
        for i in 1..=n {
            let mut v = i;
            let mut steps = 0;
            while v != 0 {
                v = self.parent[v - 1];
                steps += 1;
                if steps > n {
                    return Err(InvalidReason::Cycle(i));
                }
            }
        }
        for i in 1..=n {
            for j in i + 1..=n {
                if chords_cross(i, self.parent(i), j, self.parent(j)) {
                    return Err(InvalidReason::Crossing(i, j));
                }
            }
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// Corolla X_n: every chord goes to the root.
    pub fn corolla(n: usize) -> Self {
        DissectionDiagram { parent: vec![0; n] }
    }

    /// Path tree Y_n: chord i goes to i+1, chord n to the root.
    pub fn path_tree(n: usize) -> Self {
        DissectionDiagram {
            parent: (1..=n).map(|i| if i == n { 0 } else { i + 1 }).collect(),
        }
    }

    /// Vertices reached from `v` along chords in `set`, starting with `v`.
    pub fn chord_path(&self, v: usize, set: &BTreeSet<usize>) -> Vec<usize> {
        let mut path = vec![v];
        let mut cur = v;
        while cur != 0 && set.contains(&cur) {
            cur = self.parent(cur);
            path.push(cur);
        }
        path
    }

    /// Split into the triple (D1, D2, D3) of the counting bijection.
    pub fn decompose_triple(&self) -> Result<(Self, Self, Self), DiagramError> {
        let n = self.degree();
        if n == 0 {
            return Err(DiagramError::DegreeZero);
        }
        let rho = (1..=n).find(|&i| self.parent(i) == 0).expect("some chord reaches the root");
        // D1 lives on vertices 1..rho with root rho.
        let d1: Vec<usize> = (1..rho)
            .map(|j| {
                let p = self.parent(j);
                if p == rho {
                    0
                } else {
                    p
                }
            })
            .collect();
        // D2 is the component of rho to the right of the chord rho -> root.
        let mut m = rho;
        for v in rho + 1..=n {
            let mut w = v;
            while w != 0 && w != rho {
                w = self.parent(w);
            }
            if w == rho {
                m = v;
            } else {
                break;
            }
        }
        let d2: Vec<usize> = (rho + 1..=m)
            .map(|v| {
                let p = self.parent(v);
                if p == rho {
                    0
                } else {
                    p - rho
                }
            })
            .collect();
        let d3: Vec<usize> = (m + 1..=n)
            .map(|v| {
                let p = self.parent(v);
                if p == 0 {
                    0
                } else {
                    p - m
                }
            })
            .collect();
        Ok((
            DissectionDiagram { parent: d1 },
            DissectionDiagram { parent: d2 },
            DissectionDiagram { parent: d3 },
        ))
    }

    /// Inverse of [`decompose_triple`].
    pub fn compose_triple(d1: &Self, d2: &Self, d3: &Self) -> Self {
        let rho = d1.degree() + 1;
        let m = rho + d2.degree();
        let mut parent = Vec::with_capacity(m + d3.degree());
        for &p in &d1.parent {
            parent.push(if p == 0 { rho } else { p });
        }
        parent.push(0);
        for &p in &d2.parent {
            parent.push(if p == 0 { rho } else { rho + p });
        }
        for &p in &d3.parent {
            parent.push(if p == 0 { 0 } else { m + p });
        }
        DissectionDiagram { parent }
    }

    /// Relabel vertices by `v -> v - 1 mod (n+1)` and reorient chords toward
    /// the new root. Returns the new parent list together with, for each new
    /// chord label, the old chord label it comes from and whether it flipped.
    pub fn rotated(&self) -> (Self, Vec<(usize, bool)>) {
        let n = self.degree();
        let m = n + 1;
        let relabel = |v: usize| (v + m - 1) % m;
        let edges: Vec<(usize, usize)> = self.chords().iter().map(|&(s, t)| (relabel(s), relabel(t))).collect();
        let (parent, origin) = orient_tree(m, &edges);
        (DissectionDiagram { parent }, origin)
    }
}

/// Orient an undirected spanning tree on `0..nv` toward vertex 0. Returns the
/// parent list and, for each new chord label, (edge index + 1, flipped).
pub fn orient_tree(nv: usize, edges: &[(usize, usize)]) -> (Vec<usize>, Vec<(usize, bool)>) {
    let mut adj = vec![Vec::new(); nv];
    for (k, &(a, b)) in edges.iter().enumerate() {
        adj[a].push((b, k));
        adj[b].push((a, k));
    }
    let mut parent = vec![usize::MAX; nv.saturating_sub(1)];
    let mut origin = vec![(0, false); nv.saturating_sub(1)];
    let mut seen = vec![false; nv];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &(w, k) in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                parent[w - 1] = v;
                // edge k runs w -> v after orientation; flipped if stored v -> w
                origin[w - 1] = (k + 1, edges[k].0 != w);
                stack.push(w);
            }
        }
    }
    (parent, origin)
}

fn binom_big(n: u64, k: u64) -> BigUint {
    let mut r = BigUint::one();
    for i in 0..k {
        r = r * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    r
}

/// d_n = C(3n,n)/(2n+1).
pub fn count_closed(n: usize) -> BigUint {
    binom_big(3 * n as u64, n as u64) / BigUint::from(2 * n as u64 + 1)
}

/// d_n from d_0 = 1 and d_n = sum over i1+i2+i3 = n-1 of d_{i1} d_{i2} d_{i3}.
pub fn count_recurrence(n: usize) -> BigUint {
    let mut d: Vec<BigUint> = vec![BigUint::one()];
    for k in 1..=n {
        let mut s = BigUint::zero();
        for i1 in 0..k {
            for i2 in 0..k - i1 {
                let i3 = k - 1 - i1 - i2;
                s += &d[i1] * &d[i2] * &d[i3];
            }
        }
        d.push(s);
    }
    d[n].clone()
}

fn enum_cache() -> &'static Mutex<Vec<std::sync::Arc<Vec<DissectionDiagram>>>> {
    static CACHE: OnceLock<Mutex<Vec<std::sync::Arc<Vec<DissectionDiagram>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(vec![std::sync::Arc::new(vec![DissectionDiagram::empty()])]))
}

fn enumerate_shared(n: usize) -> std::sync::Arc<Vec<DissectionDiagram>> {
    {
        let cache = enum_cache().lock().expect("enumeration cache");
        if let Some(v) = cache.get(n) {
            return v.clone();
        }
    }
    let lower: Vec<_> = (0..n).map(enumerate_shared).collect();
    let mut out = Vec::new();
    for i1 in 0..n {
        for i2 in 0..n - i1 {
            let i3 = n - 1 - i1 - i2;
            for d1 in lower[i1].iter() {
                for d2 in lower[i2].iter() {
                    for d3 in lower[i3].iter() {
                        out.push(DissectionDiagram::compose_triple(d1, d2, d3));
                    }
                }
            }
        }
    }
    let arc = std::sync::Arc::new(out);
    let mut cache = enum_cache().lock().expect("enumeration cache");
    if cache.len() == n {
        cache.push(arc.clone());
    }
    cache[n].clone()
}

/// All dissection diagrams of degree `n`, in a deterministic order.
pub fn enumerate(n: usize) -> Result<Vec<DissectionDiagram>, DiagramError> {
    enumerate_bounded(n, DEFAULT_MAX_DEGREE)
}

pub fn enumerate_bounded(n: usize, bound: usize) -> Result<Vec<DissectionDiagram>, DiagramError> {
    if n > bound {
        return Err(DiagramError::BoundExceeded(n, bound));
    }
    Ok(enumerate_shared(n).as_ref().clone())
}

/// Sign of the shuffle sorting the concatenation `I·J`.
pub fn try_sgn(i: &[usize], j: &[usize]) -> Result<i32, DiagramError> {
    let mut inv = 0usize;
    for a in i {
        for b in j {
            match a.cmp(b) {
                Ordering::Greater => inv += 1,
                Ordering::Equal => return Err(DiagramError::Overlap),
                Ordering::Less => {}
            }
        }
    }
    Ok(if inv % 2 == 0 { 1 } else { -1 })
}

/// [`try_sgn`] for sets known to be disjoint.
pub fn sgn(i: &[usize], j: &[usize]) -> i32 {
    try_sgn(i, j).expect("disjoint index sets")
}

/// Sign of the permutation given as a sequence of distinct keys.
pub fn perm_sign<T: Ord>(seq: &[T]) -> i32 {
    let mut inv = 0usize;
    for a in 0..seq.len() {
        for b in a + 1..seq.len() {
            if seq[a] > seq[b] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// One face of the dissection cut out by the chords of C.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    /// Sides bounding the face, increasing.
    pub sides: Vec<usize>,
    /// Chords of the complement of C lying inside the face, increasing.
    pub chords: Vec<usize>,
}

/// The |C|+1 faces, ordered by their smallest side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacePartition {
    pub blocks: Vec<Face>,
}

fn check_chords(d: &DissectionDiagram, c: &BTreeSet<usize>) -> Result<(), DiagramError> {
    for &i in c {
        if i == 0 || i > d.degree() {
            return Err(DiagramError::InvalidChord(i, d.degree()));
        }
    }
    Ok(())
}

fn interval(d: &DissectionDiagram, i: usize) -> (usize, usize) {
    let p = d.parent(i);
    (i.min(p), i.max(p))
}

/// Faces of D cut by the chords in C, via interval nesting.
pub fn faces(d: &DissectionDiagram, c: &BTreeSet<usize>) -> Result<FacePartition, DiagramError> {
    check_chords(d, c)?;
    let n = d.degree();
    // owner(x) = innermost C-chord whose interval contains x, or None (outer face)
    let innermost = |lo: usize, hi: usize, strict_chord: Option<usize>| -> Option<usize> {
        let mut best: Option<(usize, usize)> = None;
        for &ch in c {
            if Some(ch) == strict_chord {
                continue;
            }
            let (a, b) = interval(d, ch);
            if a <= lo && hi <= b {
                let len = b - a;
                if best.map_or(true, |(_, l)| len < l) {
                    best = Some((ch, len));
                }
            }
        }
        best.map(|(ch, _)| ch)
    };
    let mut keys: Vec<Option<usize>> = vec![None];
    keys.extend(c.iter().map(|&x| Some(x)));
    let mut blocks: Vec<Face> = keys.iter().map(|_| Face { sides: vec![], chords: vec![] }).collect();
    let pos = |k: Option<usize>| keys.iter().position(|&x| x == k).expect("face key");
    for j in 0..=n {
        // side j spans positions j..j+1; side n is never covered
        let owner = if j == n { None } else { innermost(j, j + 1, None) };
        blocks[pos(owner)].sides.push(j);
    }
    for i in 1..=n {
        if c.contains(&i) {
            continue;
        }
        let (a, b) = interval(d, i);
        let owner = innermost(a, b, Some(i));
        blocks[pos(owner)].chords.push(i);
    }
    blocks.sort_by_key(|f| f.sides[0]);
    Ok(FacePartition { blocks })
}

/// S_C^+: every face's sides minus the face's smallest side.
pub fn s_c_plus(d: &DissectionDiagram, c: &BTreeSet<usize>) -> Result<BTreeSet<usize>, DiagramError> {
    let f = faces(d, c)?;
    Ok(f.blocks.iter().flat_map(|b| b.sides[1..].iter().copied()).collect())
}

fn find(uf: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while uf[r] != r {
        r = uf[r];
    }
    let mut y = x;
    while uf[y] != r {
        let nx = uf[y];
        uf[y] = r;
        y = nx;
    }
    r
}

/// Whether the chords of C together with the sides of J form a forest.
pub fn forest_with_sides(d: &DissectionDiagram, c: &BTreeSet<usize>, j: &BTreeSet<usize>) -> Result<bool, DiagramError> {
    check_chords(d, c)?;
    let n = d.degree();
    if c.len() + j.len() != n {
        return Err(DiagramError::Cardinality { expected: n - c.len().min(n), got: j.len() });
    }
    let mut uf: Vec<usize> = (0..=n).collect();
    let mut edges: Vec<(usize, usize)> = c.iter().map(|&i| (i, d.parent(i))).collect();
    for &s in j {
        if s > n {
            return Err(DiagramError::InvalidSide(s, n));
        }
        edges.push(d.side_endpoints(s));
    }
    for (a, b) in edges {
        let (ra, rb) = (find(&mut uf, a), find(&mut uf, b));
        if ra == rb {
            return Ok(false);
        }
        uf[ra] = rb;
    }
    Ok(true)
}

/// Face-wise characterization: J misses exactly one side of every face.
pub fn forest_characterization(d: &DissectionDiagram, c: &BTreeSet<usize>, j: &BTreeSet<usize>) -> Result<bool, DiagramError> {
    let f = faces(d, c)?;
    Ok(f.blocks
        .iter()
        .all(|b| b.sides.iter().filter(|s| j.contains(s)).count() + 1 == b.sides.len()))
}

/// All subsets of {1..n} as sorted sets, in bitmask order.
pub fn subsets(n: usize) -> Vec<BTreeSet<usize>> {
    (0u32..(1u32 << n))
        .map(|mask| (1..=n).filter(|i| mask & (1 << (i - 1)) != 0).collect())
        .collect()
}

/// All k-element subsets of `items`, lexicographic.
pub fn k_subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    fn rec(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            rec(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= items.len() {
        rec(items, k, 0, &mut Vec::new(), &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> BTreeSet<usize> {
        v.iter().copied().collect()
    }

    #[test]
    fn validate_examples() {
        assert!(DissectionDiagram::empty().is_valid());
        assert!(DissectionDiagram::corolla(2).is_valid());
        let bad = DissectionDiagram::from_parents_unchecked(vec![2, 1]);
        assert!(matches!(bad.validate(), Err(InvalidReason::Cycle(_))));
        assert!(DissectionDiagram::from_parents_unchecked(vec![3, 3, 0]).is_valid());
        assert!(DissectionDiagram::from_parents_unchecked(vec![0, 4, 4, 0]).is_valid());
        assert!(!DissectionDiagram::from_parents_unchecked(vec![3, 0, 0]).is_valid());
        let crossing = DissectionDiagram::from_parents_unchecked(vec![3, 4, 0, 0]);
        assert!(matches!(crossing.validate(), Err(InvalidReason::Crossing(1, 2))));
    }

    #[test]
    fn small_counts() {
        let counts: Vec<usize> = (0..=5).map(|n| enumerate(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 3, 12, 55, 273]);
        assert_eq!(count_recurrence(6), BigUint::from(1428u32));
        assert!(enumerate(9).is_err());
    }

    #[test]
    fn example_faces() {
        let d = DissectionDiagram::new(vec![0, 1, 1]).unwrap();
        let f = faces(&d, &set(&[3])).unwrap();
        assert_eq!(f.blocks[0].sides, vec![0, 3]);
        assert_eq!(f.blocks[0].chords, vec![1]);
        assert_eq!(f.blocks[1].sides, vec![1, 2]);
        assert_eq!(f.blocks[1].chords, vec![2]);
        assert_eq!(s_c_plus(&d, &set(&[3])).unwrap(), set(&[2, 3]));
    }

    #[test]
    fn sgn_examples() {
        assert_eq!(sgn(&[], &[1, 2]), 1);
        assert_eq!(sgn(&[2], &[1, 3]), -1);
        assert_eq!(try_sgn(&[1], &[1]), Err(DiagramError::Overlap));
    }

    #[test]
    fn triple_of_x1_is_empty() {
        let (a, b, c) = DissectionDiagram::corolla(1).decompose_triple().unwrap();
        assert_eq!((a.degree(), b.degree(), c.degree()), (0, 0, 0));
    }
}
