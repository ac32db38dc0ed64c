//! Decorated directed graphs: flips, contractions, cycles and genericity.

use crate::diagram::{DiagramError, DissectionDiagram};
use crate::scalar::{uniform_mode, Mode, Scalar, ScalarError};
use rand::Rng;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum DecorationError {
    #[error("edge {0} does not exist")]
    MissingEdge(usize),
    #[error("contracted edge set contains a loop at edge {0}")]
    LoopInContraction(usize),
    #[error("genericity is an exact predicate; float decorations are rejected")]
    FloatMode,
    #[error("expected {expected} decorations, got {got}")]
    Arity { expected: usize, got: usize },
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// What an edge of a total graph stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeTag {
    Chord(usize),
    Side(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub dec: Scalar,
    pub tag: EdgeTag,
}

/// A directed multigraph with one scalar per edge. Vertices are `0..num_vertices`;
/// contraction keeps ids and records the merge map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecoratedGraph {
    pub num_vertices: usize,
    pub edges: Vec<Edge>,
}

/// Result of contracting a set of edges.
#[derive(Clone, Debug)]
pub struct Contracted {
    pub graph: DecoratedGraph,
    /// Representative vertex of every original vertex.
    pub class: Vec<usize>,
}

impl DecoratedGraph {
    pub fn flip_edge(&self, e: usize) -> Result<DecoratedGraph, DecorationError> {
        let mut g = self.clone();
        let edge = g.edges.get_mut(e).ok_or(DecorationError::MissingEdge(e))?;
        std::mem::swap(&mut edge.src, &mut edge.dst);
        edge.dec = edge.dec.neg();
        Ok(g)
    }

    /// Contract the edges with the given indices, in the given order. Each
    /// contracted edge v⁻→v⁺ of decoration α merges v⁻ into v⁺, adding α to
    /// the edges entering v⁻ and subtracting it from the edges leaving v⁻.
    pub fn contract_edges(&self, which: &[usize]) -> Result<Contracted, DecorationError> {
        let mut edges: Vec<Option<Edge>> = self.edges.iter().cloned().map(Some).collect();
        let mut class: Vec<usize> = (0..self.num_vertices).collect();
        for &e in which {
            let edge = edges
                .get(e)
                .ok_or(DecorationError::MissingEdge(e))?
                .clone()
                .ok_or(DecorationError::MissingEdge(e))?;
            let (u, v) = (edge.src, edge.dst);
            if u == v {
                return Err(DecorationError::LoopInContraction(e));
            }
            edges[e] = None;
            for f in edges.iter_mut().flatten() {
                if f.dst == u {
                    f.dec = f.dec.try_add(&edge.dec)?;
                    f.dst = v;
                }
                if f.src == u {
                    f.dec = f.dec.try_sub(&edge.dec)?;
                    f.src = v;
                }
            }
            for c in class.iter_mut() {
                if *c == u {
                    *c = v;
                }
            }
        }
        Ok(Contracted {
            graph: DecoratedGraph {
                num_vertices: self.num_vertices,
                edges: edges.into_iter().flatten().collect(),
            },
            class,
        })
    }

    /// Every simple cycle (including loops and 2-cycles of parallel edges),
    /// each listed once, starting at its smallest vertex.
    pub fn simple_cycles(&self) -> Vec<Cycle> {
        let mut adj: Vec<Vec<(usize, usize, bool)>> = vec![Vec::new(); self.num_vertices];
        for (k, e) in self.edges.iter().enumerate() {
            if e.src == e.dst {
                continue;
            }
            adj[e.src].push((e.dst, k, true));
            adj[e.dst].push((e.src, k, false));
        }
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut out = Vec::new();
        for (k, e) in self.edges.iter().enumerate() {
            if e.src == e.dst {
                seen.insert(vec![k]);
                out.push(Cycle { steps: vec![(k, true)] });
            }
        }
        for s in 0..self.num_vertices {
            let mut on_path = vec![false; self.num_vertices];
            on_path[s] = true;
            let mut steps: Vec<(usize, bool)> = Vec::new();
            dfs_cycles(s, s, &adj, &mut on_path, &mut steps, &mut seen, &mut out);
        }
        out
    }

    /// Signed sum of decorations along a cycle.
    pub fn total_decoration(&self, cycle: &Cycle) -> Scalar {
        let mut acc = self.edges[cycle.steps[0].0].dec.zero_like();
        for &(k, fwd) in &cycle.steps {
            let d = &self.edges[k].dec;
            acc = if fwd { acc.add(d) } else { acc.sub(d) };
        }
        acc
    }

    pub fn mode(&self) -> Result<Option<Mode>, ScalarError> {
        uniform_mode(self.edges.iter().map(|e| &e.dec))
    }

    /// True iff every simple cycle has nonzero total decoration.
    pub fn is_generic(&self) -> Result<bool, DecorationError> {
        if self.mode()? == Some(Mode::Float) {
            return Err(DecorationError::FloatMode);
        }
        Ok(self.simple_cycles().iter().all(|c| !self.total_decoration(c).is_zero()))
    }
}

fn dfs_cycles(
    start: usize,
    v: usize,
    adj: &[Vec<(usize, usize, bool)>],
    on_path: &mut [bool],
    steps: &mut Vec<(usize, bool)>,
    seen: &mut BTreeSet<Vec<usize>>,
    out: &mut Vec<Cycle>,
) {
    for &(w, k, fwd) in &adj[v] {
        if steps.last().map_or(false, |&(last, _)| last == k) {
            continue;
        }
        if w == start && !steps.is_empty() {
            let mut c = steps.clone();
            c.push((k, fwd));
            let mut key: Vec<usize> = c.iter().map(|&(e, _)| e).collect();
            key.sort_unstable();
            if seen.insert(key) {
                // orient so the first edge id is smaller than the last
                if c.first().map(|x| x.0) > c.last().map(|x| x.0) {
                    c.reverse();
                    for s in c.iter_mut() {
                        s.1 = !s.1;
                    }
                }
                out.push(Cycle { steps: c });
            }
            continue;
        }
        if w > start && !on_path[w] {
            on_path[w] = true;
            steps.push((k, fwd));
            dfs_cycles(start, w, adj, on_path, steps, seen, out);
            steps.pop();
            on_path[w] = false;
        }
    }
}

/// A simple cycle as a sequence of (edge index, traversed forward).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cycle {
    pub steps: Vec<(usize, bool)>,
}

impl Cycle {
    pub fn reversed(&self) -> Cycle {
        Cycle {
            steps: self.steps.iter().rev().map(|&(k, f)| (k, !f)).collect(),
        }
    }

    pub fn edge_set(&self) -> BTreeSet<usize> {
        self.steps.iter().map(|s| s.0).collect()
    }
}

/// A dissection diagram with chord decorations a_1..a_n and side decorations b_0..b_n.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DecoratedDiagram {
    pub diagram: DissectionDiagram,
    pub a: Vec<Scalar>,
    pub b: Vec<Scalar>,
}

impl DecoratedDiagram {
    pub fn new(diagram: DissectionDiagram, a: Vec<Scalar>, b: Vec<Scalar>) -> Result<Self, DecorationError> {
        diagram.validate().map_err(DiagramError::Invalid)?;
        let n = diagram.degree();
        if a.len() != n {
            return Err(DecorationError::Arity { expected: n, got: a.len() });
        }
        if b.len() != n + 1 {
            return Err(DecorationError::Arity { expected: n + 1, got: b.len() });
        }
        uniform_mode(a.iter().chain(b.iter()))?;
        Ok(DecoratedDiagram { diagram, a, b })
    }

    /// All decorations zero (the undecorated case).
    pub fn undecorated(diagram: DissectionDiagram) -> Self {
        let n = diagram.degree();
        DecoratedDiagram {
            diagram,
            a: vec![Scalar::int(0); n],
            b: vec![Scalar::int(0); n + 1],
        }
    }

    /// Distinct formal symbols a1..an, b0..bn.
    pub fn symbolic(diagram: DissectionDiagram) -> Self {
        let n = diagram.degree();
        DecoratedDiagram {
            diagram,
            a: (1..=n).map(|i| Scalar::symbol(&format!("a{i}"))).collect(),
            b: (0..=n).map(|j| Scalar::symbol(&format!("b{j}"))).collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.diagram.degree()
    }

    pub fn is_undecorated(&self) -> bool {
        self.a.iter().chain(self.b.iter()).all(|s| s.is_zero())
    }

    pub fn mode(&self) -> Mode {
        self.b[0].mode()
    }

    /// Γ(D): chord edges first (edge i-1 is chord i), then sides (edge n+j is side j).
    pub fn total_graph(&self) -> DecoratedGraph {
        let n = self.degree();
        let mut edges = Vec::with_capacity(2 * n + 1);
        for (i, p) in self.diagram.chords() {
            edges.push(Edge { src: i, dst: p, dec: self.a[i - 1].clone(), tag: EdgeTag::Chord(i) });
        }
        for j in 0..=n {
            let (s, t) = self.diagram.side_endpoints(j);
            edges.push(Edge { src: s, dst: t, dec: self.b[j].clone(), tag: EdgeTag::Side(j) });
        }
        DecoratedGraph { num_vertices: n + 1, edges }
    }

    pub fn is_generic(&self) -> Result<bool, DecorationError> {
        self.total_graph().is_generic()
    }

    /// Vertex translation by potentials `p` (p_0 must be zero for a non-root
    /// shift): edge u→v gets decoration + p_v − p_u. Cycle totals are unchanged.
    pub fn translated(&self, p: &[Scalar]) -> Self {
        let n = self.degree();
        let a = (1..=n)
            .map(|i| self.a[i - 1].add(&p[self.diagram.parent(i)]).sub(&p[i]))
            .collect();
        let b = (0..=n)
            .map(|j| {
                let (u, v) = self.diagram.side_endpoints(j);
                self.b[j].add(&p[v]).sub(&p[u])
            })
            .collect();
        DecoratedDiagram { diagram: self.diagram.clone(), a, b }
    }

    /// Representative of the translation class with b_1 = ⋯ = b_n = 0.
    pub fn normalized(&self) -> Self {
        let n = self.degree();
        if n == 0 {
            return self.clone();
        }
        let mut p = vec![self.b[0].zero_like(); n + 1];
        p[n] = self.b[n].clone();
        for j in (1..n).rev() {
            p[j] = self.b[j].add(&p[j + 1]);
        }
        self.translated(&p)
    }

    /// Substitute values for formal symbols.
    pub fn substitute(&self, values: &BTreeMap<String, Scalar>, mode: Mode) -> Result<Self, DecorationError> {
        let a = self.a.iter().map(|s| s.substitute(values, mode)).collect::<Result<Vec<_>, _>>()?;
        let b = self.b.iter().map(|s| s.substitute(values, mode)).collect::<Result<Vec<_>, _>>()?;
        Ok(DecoratedDiagram { diagram: self.diagram.clone(), a, b })
    }
}

/// Large primes for random generic decorations.
const PRIMES: [i64; 24] = [
    10007, 10009, 10037, 10039, 10061, 10067, 10069, 10079, 10091, 10093, 10099, 10103, 10111, 10133, 10139,
    10141, 10151, 10159, 10163, 10169, 10177, 10181, 10193, 10211,
];

/// Random rational decorations built from distinct signed primes and
/// certified generic (redrawn until certified).
pub fn random_generic_rational<R: Rng>(d: &DissectionDiagram, rng: &mut R) -> DecoratedDiagram {
    let n = d.degree();
    assert!(2 * n + 1 <= PRIMES.len(), "degree too large for the prime table");
    loop {
        let mut pool: Vec<i64> = PRIMES.to_vec();
        let mut take = || {
            let k = rng.gen_range(0..pool.len());
            let p = pool.swap_remove(k);
            let sgn = if rng.gen_bool(0.5) { 1 } else { -1 };
            let den = rng.gen_range(1..=3);
            Scalar::Rational(crate::scalar::ratio(sgn * p, den))
        };
        let a: Vec<Scalar> = (0..n).map(|_| take()).collect();
        let b: Vec<Scalar> = (0..=n).map(|_| take()).collect();
        let dd = DecoratedDiagram { diagram: d.clone(), a, b };
        if dd.is_generic().unwrap_or(false) {
            return dd;
        }
    }
}
