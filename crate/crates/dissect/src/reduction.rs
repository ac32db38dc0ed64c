//! Translation, rotation, Stokes and Orlik–Solomon rewrites of decorated
//! diagrams, and the reduction of a generic diagram to an integer combination
//! of iterated-integral symbols.

use crate::decoration::{DecoratedDiagram, DecoratedGraph, DecorationError, Edge, EdgeTag};
use crate::diagram::{chords_cross, orient_tree, perm_sign, sgn, DissectionDiagram};
use crate::scalar::{Mode, Scalar, ScalarError};
use crate::symbol::ItIntSymbol;
use std::collections::BTreeMap;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum ReductionError {
    #[error("vertex {0} is not a non-root vertex")]
    BadIndex(usize),
    #[error("decorations are not generic")]
    NotGeneric,
    #[error("float decorations cannot be certified generic; reduce symbolically and substitute")]
    FloatMode,
    #[error("invalid augmented diagram: {0}")]
    InvalidAugmented(String),
    #[error("the chord cycle is not the only cycle with zero total decoration")]
    ExtraZeroCycle,
    #[error("genericity lost while linking vertex {0} to the root")]
    LostGenericity(usize),
    #[error("internal rewriting check failed: {0}")]
    Internal(String),
    #[error(transparent)]
    Decoration(#[from] DecorationError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// τ_i(λ): add λ to every edge entering i, subtract it from every edge leaving i.
pub fn translate(d: &DecoratedDiagram, i: usize, lambda: &Scalar) -> Result<DecoratedDiagram, ReductionError> {
    let n = d.degree();
    if i == 0 || i > n {
        return Err(ReductionError::BadIndex(i));
    }
    let mut p = vec![lambda.zero_like(); n + 1];
    p[i] = lambda.clone();
    Ok(d.translated(&p))
}

/// D⁺ together with the sign (−1)^n ε of I(D) = (−1)^n ε I(D⁺).
pub fn rotate(d: &DecoratedDiagram) -> (DecoratedDiagram, i32) {
    let n = d.degree();
    let (diagram, origin) = d.diagram.rotated();
    let a = origin
        .iter()
        .map(|&(old, flipped)| if flipped { d.a[old - 1].neg() } else { d.a[old - 1].clone() })
        .collect();
    let b = (0..=n).map(|j| d.b[(j + 1) % (n + 1)].clone()).collect();
    let labels: Vec<usize> = origin.iter().map(|o| o.0).collect();
    let sign = if n % 2 == 0 { 1 } else { -1 } * perm_sign(&labels);
    (DecoratedDiagram { diagram, a, b }, sign)
}

/// Integer combination of iterated-integral symbols. Zero coefficients are dropped.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FormalSum {
    terms: BTreeMap<ItIntSymbol, i64>,
}

impl FormalSum {
    pub fn new() -> Self {
        FormalSum::default()
    }

    pub fn add_term(&mut self, s: ItIntSymbol, c: i64) {
        let e = self.terms.entry(s.clone()).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.remove(&s);
        }
    }

    pub fn terms(&self) -> &BTreeMap<ItIntSymbol, i64> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ItIntSymbol, &i64)> {
        self.terms.iter()
    }

    /// Substitute values for formal symbols, merging terms that coincide.
    pub fn substitute(&self, values: &BTreeMap<String, Scalar>, mode: Mode) -> Result<FormalSum, ScalarError> {
        let mut out = FormalSum::new();
        for (s, &c) in &self.terms {
            out.add_term(s.substitute(values, mode)?, c);
        }
        Ok(out)
    }
}

impl std::fmt::Display for FormalSum {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (s, c)) in self.terms.iter().enumerate() {
            let sign = match (k, *c < 0) {
                (0, true) => "-".to_string(),
                (0, false) => String::new(),
                (_, true) => " - ".to_string(),
                (_, false) => " + ".to_string(),
            };
            match c.unsigned_abs() {
                1 => write!(f, "{sign}{s}")?,
                m => write!(f, "{sign}{m}*{s}")?,
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AugmentedKind {
    /// n acyclic chords on n+2 vertices.
    Stokes,
    /// n+1 chords on n+1 vertices with exactly one cycle.
    OrlikSolomon,
}

/// A polygon on `nv` vertices (root 0, side s from s to s+1 mod nv) with an
/// ordered list of directed decorated chords.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AugmentedDiagram {
    pub nv: usize,
    pub chords: Vec<(usize, usize, Scalar)>,
    pub sides: Vec<Scalar>,
}

/// One face of a Stokes diagram that is a dissection diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Boundary {
    pub side: usize,
    pub eps: i32,
    pub diagram: DecoratedDiagram,
}

/// One term ε(c) I(Ŵ∖c) of an Orlik–Solomon relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OsTerm {
    /// Index of the deleted chord in the chord list.
    pub chord: usize,
    pub eps: i32,
    pub diagram: DecoratedDiagram,
}

fn find(uf: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while uf[r] != r {
        r = uf[r];
    }
    uf[x] = r;
    r
}

/// Number of chords that close a cycle when added in order.
fn cycle_rank(nv: usize, chords: &[(usize, usize, Scalar)]) -> usize {
    let mut uf: Vec<usize> = (0..nv).collect();
    let mut rank = 0;
    for &(u, v, _) in chords {
        let (ru, rv) = (find(&mut uf, u), find(&mut uf, v));
        if ru == rv {
            rank += 1;
        } else {
            uf[ru] = rv;
        }
    }
    rank
}

/// Orient a chord list into a dissection diagram, if it is one. Returns the
/// diagram and the signature relating the list order to the label order.
fn to_dissection(nv: usize, chords: &[(usize, usize, Scalar)], sides: Vec<Scalar>) -> Option<(DecoratedDiagram, i32)> {
    if nv == 0 || chords.len() + 1 != nv || chords.iter().any(|c| c.0 == c.1) || cycle_rank(nv, chords) != 0 {
        return None;
    }
    let edges: Vec<(usize, usize)> = chords.iter().map(|c| (c.0, c.1)).collect();
    let (parent, origin) = orient_tree(nv, &edges);
    let diagram = DissectionDiagram::new(parent).ok()?;
    let a = origin
        .iter()
        .map(|&(k, flipped)| if flipped { chords[k - 1].2.neg() } else { chords[k - 1].2.clone() })
        .collect();
    let labels: Vec<usize> = origin.iter().map(|o| o.0).collect();
    Some((DecoratedDiagram { diagram, a, b: sides }, perm_sign(&labels)))
}

impl AugmentedDiagram {
    pub fn new(nv: usize, chords: Vec<(usize, usize, Scalar)>, sides: Vec<Scalar>) -> Result<Self, ReductionError> {
        let bad = |m: String| Err(ReductionError::InvalidAugmented(m));
        if sides.len() != nv {
            return bad(format!("expected {nv} sides, got {}", sides.len()));
        }
        for (k, &(u, v, _)) in chords.iter().enumerate() {
            if u >= nv || v >= nv || u == v {
                return bad(format!("chord {} has endpoints {u}, {v}", k + 1));
            }
        }
        for x in 0..chords.len() {
            for y in x + 1..chords.len() {
                let (p, q) = (&chords[x], &chords[y]);
                if chords_cross(p.0, p.1, q.0, q.1) {
                    return bad(format!("chords {} and {} cross", x + 1, y + 1));
                }
                if (p.0.min(p.1), p.0.max(p.1)) == (q.0.min(q.1), q.0.max(q.1)) {
                    return bad(format!("chords {} and {} are parallel", x + 1, y + 1));
                }
            }
        }
        let w = AugmentedDiagram { nv, chords, sides };
        let rank = cycle_rank(nv, &w.chords);
        match (w.chords.len() + 2 == nv && rank == 0, w.chords.len() == nv && rank == 1) {
            (true, _) | (_, true) => Ok(w),
            _ => bad(format!("{} chords on {nv} vertices with {rank} cycles", w.chords.len())),
        }
    }

    pub fn kind(&self) -> AugmentedKind {
        if self.chords.len() + 2 == self.nv {
            AugmentedKind::Stokes
        } else {
            AugmentedKind::OrlikSolomon
        }
    }

    /// Chords first (tag Chord(k+1) for list index k), then sides.
    pub fn total_graph(&self) -> DecoratedGraph {
        let mut edges: Vec<Edge> = self
            .chords
            .iter()
            .enumerate()
            .map(|(k, (u, v, d))| Edge { src: *u, dst: *v, dec: d.clone(), tag: EdgeTag::Chord(k + 1) })
            .collect();
        for (s, d) in self.sides.iter().enumerate() {
            edges.push(Edge { src: s, dst: (s + 1) % self.nv, dec: d.clone(), tag: EdgeTag::Side(s) });
        }
        DecoratedGraph { num_vertices: self.nv, edges }
    }

    /// Contract side s. Side 0 is flipped first so the root survives.
    fn contract_side(&self, s: usize) -> (Vec<(usize, usize, Scalar)>, Vec<Scalar>) {
        let nv = self.nv;
        let (src, dst, beta) = if s == 0 {
            (1, 0, self.sides[0].neg())
        } else {
            (s, (s + 1) % nv, self.sides[s].clone())
        };
        let relabel = |v: usize| {
            let v = if v == src { dst } else { v };
            if v > src {
                v - 1
            } else {
                v
            }
        };
        let shift = |u: usize, v: usize, d: &Scalar| {
            let mut d = d.clone();
            if v == src {
                d = d.add(&beta);
            }
            if u == src {
                d = d.sub(&beta);
            }
            d
        };
        let chords = self.chords.iter().map(|(u, v, d)| (relabel(*u), relabel(*v), shift(*u, *v, d))).collect();
        let sides = (0..nv)
            .filter(|&t| t != s)
            .map(|t| shift(t, (t + 1) % nv, &self.sides[t]))
            .collect();
        (chords, sides)
    }

    /// The contraction ∂_s if it is a dissection diagram, with its chord signature.
    pub fn boundary(&self, s: usize) -> Option<(DecoratedDiagram, i32)> {
        if s >= self.nv || self.kind() != AugmentedKind::Stokes {
            return None;
        }
        let (chords, sides) = self.contract_side(s);
        to_dissection(self.nv - 1, &chords, sides)
    }

    /// The chords on the unique cycle (list indices, increasing).
    pub fn chord_cycle(&self) -> Vec<usize> {
        (0..self.chords.len())
            .filter(|&c| {
                let rest: Vec<_> = self.chords.iter().enumerate().filter(|&(k, _)| k != c).map(|(_, x)| x.clone()).collect();
                cycle_rank(self.nv, &rest) == 0
            })
            .collect()
    }
}

/// The two sides i, j whose contraction yields dissection diagrams; then
/// (−1)^i ε_i I(∂_i W) + (−1)^j ε_j I(∂_j W) = 0.
pub fn stokes_boundaries(w: &AugmentedDiagram) -> Result<[Boundary; 2], ReductionError> {
    if w.kind() != AugmentedKind::Stokes {
        return Err(ReductionError::InvalidAugmented("not a Stokes diagram".into()));
    }
    let found: Vec<Boundary> = (0..w.nv)
        .filter_map(|s| w.boundary(s).map(|(diagram, eps)| Boundary { side: s, eps, diagram }))
        .collect();
    match <[Boundary; 2]>::try_from(found) {
        Ok(pair) => Ok(pair),
        Err(v) => Err(ReductionError::Internal(format!("{} dissection faces instead of 2", v.len()))),
    }
}

/// The terms ε(c) I(Ŵ∖c), c on the chord cycle, of a vanishing Orlik–Solomon sum.
pub fn orlik_solomon_family(w: &AugmentedDiagram) -> Result<Vec<OsTerm>, ReductionError> {
    if w.kind() != AugmentedKind::OrlikSolomon {
        return Err(ReductionError::InvalidAugmented("not an Orlik-Solomon diagram".into()));
    }
    let g = w.total_graph();
    if g.mode()? == Some(Mode::Float) {
        return Err(ReductionError::FloatMode);
    }
    let cycle = w.chord_cycle();
    let mut zero_cycles = g.simple_cycles().into_iter().filter(|c| g.total_decoration(c).is_zero());
    match (zero_cycles.next(), zero_cycles.next()) {
        (Some(c), None) if c.edge_set().into_iter().collect::<Vec<_>>() == cycle => {}
        _ => return Err(ReductionError::ExtraZeroCycle),
    }
    let rest: Vec<usize> = (0..w.chords.len()).filter(|k| !cycle.contains(k)).collect();
    let mut out = Vec::with_capacity(cycle.len());
    for &c in &cycle {
        let others: Vec<usize> = cycle.iter().copied().filter(|&x| x != c).collect();
        let chords: Vec<_> = w.chords.iter().enumerate().filter(|&(k, _)| k != c).map(|(_, x)| x.clone()).collect();
        let (diagram, reorder) =
            to_dissection(w.nv, &chords, w.sides.clone()).ok_or_else(|| ReductionError::Internal("deletion is not a tree".into()))?;
        let eps = sgn(&[c], &others) * sgn(&others, &rest) * reorder;
        out.push(OsTerm { chord: c, eps, diagram });
    }
    Ok(out)
}

fn check_generic(d: &DecoratedDiagram, k: usize) -> Result<(), ReductionError> {
    if d.is_generic()? {
        Ok(())
    } else {
        Err(ReductionError::LostGenericity(k))
    }
}

/// The Stokes diagram obtained by opening the angle at k between the chord
/// k→0 and the chords entering k from vertices above k; the new side
/// carries decoration 0.
pub fn open_angle(d: &DecoratedDiagram, k: usize) -> Result<AugmentedDiagram, ReductionError> {
    let n = d.degree();
    if k == 0 || k > n || d.diagram.parent(k) != 0 {
        return Err(ReductionError::BadIndex(k));
    }
    let up = |v: usize| if v > k { v + 1 } else { v };
    let chords = d
        .diagram
        .chords()
        .into_iter()
        .map(|(i, p)| (up(i), if p == k && i > k { k + 1 } else { up(p) }, d.a[i - 1].clone()))
        .collect();
    let mut sides: Vec<Scalar> = d.b.clone();
    sides.insert(k, d.b[0].zero_like());
    AugmentedDiagram::new(n + 2, chords, sides)
}

/// One inductive step: vertices 1..=k are linked to the root; returns
/// diagrams with 1..=k+1 linked, and their coefficients.
fn link_next(d: &DecoratedDiagram, k: usize) -> Result<Vec<(DecoratedDiagram, i64)>, ReductionError> {
    let n = d.degree();
    if d.diagram.parent(k + 1) == 0 {
        return Ok(vec![(d.clone(), 1)]);
    }
    if (1..=n).any(|j| d.diagram.parent(j) == k) {
        // Case 2: a Stokes relation moves the chords entering k away from it.
        let w = open_angle(d, k)?;
        let [x, y] = stokes_boundaries(&w)?;
        let (here, other) = if x.side == k { (x, y) } else { (y, x) };
        if here.side != k || here.diagram != *d {
            return Err(ReductionError::Internal(format!("opening the angle at {k} does not restore the diagram")));
        }
        let e = &other.diagram;
        if (1..=n).any(|j| e.diagram.parent(j) == k) {
            return Err(ReductionError::Internal(format!("chords still enter {k}")));
        }
        check_generic(e, k)?;
        let parity = if (here.side + other.side) % 2 == 0 { 1 } else { -1 };
        let c = -(parity * here.eps * other.eps) as i64;
        return Ok(link_next(e, k)?.into_iter().map(|(x, m)| (x, c * m)).collect());
    }
    // Case 1: close the path from k+1 to the root with a new chord and expand
    // with the Orlik–Solomon relation.
    let mut chords: Vec<(usize, usize, Scalar)> = d.diagram.chords().into_iter().map(|(i, p)| (i, p, d.a[i - 1].clone())).collect();
    let mut total = d.b[0].zero_like();
    let mut v = k + 1;
    while v != 0 {
        total = total.add(&d.a[v - 1]);
        v = d.diagram.parent(v);
    }
    chords.push((k + 1, 0, total));
    let w = AugmentedDiagram::new(n + 1, chords, d.b.clone())?;
    let terms = orlik_solomon_family(&w).map_err(|e| match e {
        ReductionError::ExtraZeroCycle => ReductionError::LostGenericity(k),
        e => e,
    })?;
    let added = n;
    let base = terms
        .iter()
        .find(|t| t.chord == added)
        .ok_or_else(|| ReductionError::Internal("added chord is not on the cycle".into()))?;
    if base.diagram != *d {
        return Err(ReductionError::Internal("deleting the added chord does not restore the diagram".into()));
    }
    let mut out = Vec::new();
    for t in terms.iter().filter(|t| t.chord != added) {
        check_generic(&t.diagram, k)?;
        out.push((t.diagram.clone(), -(base.eps * t.eps) as i64));
    }
    Ok(out)
}

/// Number of rotations bringing a chord between vertex 1 and the root.
fn rotations_needed(d: &DissectionDiagram) -> usize {
    let m = d.degree() + 1;
    let pair = |x: usize, y: usize| (x.min(y), x.max(y));
    (0..m).find(|&r| d.chords().iter().any(|&(i, p)| pair(i, p) == pair(r, (r + 1) % m))).unwrap_or(0)
}

/// Write I(D) as an integer combination of corollas, each normalized to an
/// iterated-integral symbol.
pub fn reduce(d: &DecoratedDiagram) -> Result<FormalSum, ReductionError> {
    Ok(reduce_to_corollas(d)?
        .into_iter()
        .fold(FormalSum::new(), |mut acc, (x, c)| {
            acc.add_term(ItIntSymbol::from_corolla(&x).expect("terminal diagrams are corollas"), c);
            acc
        }))
}

/// The corollas X and integer coefficients with I(D) = Σ c_X I(X).
pub fn reduce_to_corollas(d: &DecoratedDiagram) -> Result<Vec<(DecoratedDiagram, i64)>, ReductionError> {
    if d.mode() == Mode::Float {
        return Err(ReductionError::FloatMode);
    }
    if !d.is_generic()? {
        return Err(ReductionError::NotGeneric);
    }
    let n = d.degree();
    let mut cur = d.clone();
    let mut sign = 1i64;
    for _ in 0..rotations_needed(&d.diagram) {
        let (r, s) = rotate(&cur);
        cur = r;
        sign *= s as i64;
    }
    let mut work: BTreeMap<DecoratedDiagram, i64> = BTreeMap::from([(cur, sign)]);
    for k in 1..n {
        let mut next: BTreeMap<DecoratedDiagram, i64> = BTreeMap::new();
        for (x, c) in work {
            for (y, m) in link_next(&x, k)? {
                *next.entry(y).or_insert(0) += c * m;
            }
        }
        next.retain(|_, c| *c != 0);
        work = next;
    }
    let corolla = DissectionDiagram::corolla(n);
    if let Some((x, _)) = work.iter().find(|(x, _)| x.diagram != corolla) {
        return Err(ReductionError::Internal(format!("terminal diagram {:?} is not a corolla", x.diagram)));
    }
    Ok(work.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_one_symbol() {
        let d = DecoratedDiagram::symbolic(DissectionDiagram::corolla(1));
        let s = reduce(&d).unwrap();
        let want = ItIntSymbol::new(Scalar::symbol("b0").neg(), vec![Scalar::symbol("a1")], Scalar::symbol("b1"));
        assert_eq!(s.terms().get(&want), Some(&1));
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn open_angle_restores_diagram() {
        let d = DecoratedDiagram::symbolic(DissectionDiagram::new(vec![0, 1, 1]).unwrap());
        let w = open_angle(&d, 1).unwrap();
        assert_eq!(w.boundary(1).unwrap(), (d, 1));
    }
}
