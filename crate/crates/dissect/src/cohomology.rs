//! Weight-graded pieces of the relative cohomology of affinely generic
//! bi-arrangements, the functorial maps between them, and the geometric
//! computation of the coproduct of a decorated diagram.

use crate::arrangement::{
    contract_to_q, contract_to_r, q_product, q_relabeling, r_relabeling, ArrangementError, BiArrangement, Side,
};
use crate::decoration::DecoratedDiagram;
use crate::diagram::{faces, k_subsets, perm_sign, s_c_plus, sgn, DiagramError, DissectionDiagram};
use crate::hopf::{k_c_direct, q_c, q_faces, r_c, sigma_c, HopfError, Monomial, Poly, TensorElement};
use crate::linalg::{rank, Reducer};
use crate::scalar::{rat, Rational};
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::collections::{BTreeSet, HashMap};

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum CohomologyError {
    #[error("bi-arrangement is not affinely generic")]
    NotGeneric,
    #[error("{0:?} map is not well defined: source relation {1} leaves the target relation span")]
    IllDefined(MapKind, usize),
    #[error("{0:?} map: generator image ({1:?}, {2:?}) is not a target generator")]
    Shape(MapKind, Vec<usize>, Vec<usize>),
    #[error("framing mismatch: {0}")]
    Framing(String),
    #[error(transparent)]
    Arrangement(#[from] ArrangementError),
    #[error(transparent)]
    Hopf(#[from] HopfError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// A generator e_I ⊗ f_J: sorted L-indices and sorted M-indices.
pub type Generator = (Vec<usize>, Vec<usize>);

/// gr^W_{2k} of an affinely generic bi-arrangement as generators modulo relations.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub dim: usize,
    pub l: usize,
    pub m: usize,
    pub k: usize,
    pub generators: Vec<Generator>,
    index: HashMap<Generator, usize>,
    pub relations: Vec<Vec<Rational>>,
    reducer: Reducer,
    /// Generators whose classes form the chosen quotient basis.
    pub basis: Vec<usize>,
}

impl Presentation {
    pub fn new(a: &BiArrangement, k: usize) -> Result<Self, CohomologyError> {
        if !a.is_affinely_generic()? {
            return Err(CohomologyError::NotGeneric);
        }
        Self::build(a, k)
    }

    /// All weights 0..=dim with one genericity check.
    pub fn all(a: &BiArrangement) -> Result<Vec<Self>, CohomologyError> {
        if !a.is_affinely_generic()? {
            return Err(CohomologyError::NotGeneric);
        }
        (0..=a.dim).map(|k| Self::build(a, k)).collect()
    }

    /// Like [`Presentation::new`] without the genericity check.
    pub fn build(a: &BiArrangement, k: usize) -> Result<Self, CohomologyError> {
        let (n, l, m) = (a.dim, a.l.len(), a.m.len());
        let ls: Vec<usize> = (0..l).collect();
        let ms: Vec<usize> = (0..m).collect();
        let mut generators = Vec::new();
        if k <= n {
            for i in k_subsets(&ls, k) {
                for j in k_subsets(&ms, n - k) {
                    generators.push((i.clone(), j));
                }
            }
        }
        let index: HashMap<Generator, usize> = generators.iter().cloned().enumerate().map(|(p, g)| (g, p)).collect();
        let ng = generators.len();
        let mut relations = Vec::new();
        let mut empty: HashMap<Generator, bool> = HashMap::new();
        for (p, (i, j)) in generators.iter().enumerate() {
            let st = a.stratum(&i.iter().copied().collect(), &j.iter().copied().collect())?;
            let is_empty = st == crate::arrangement::Stratum::Empty;
            empty.insert((i.clone(), j.clone()), is_empty);
            if is_empty {
                let mut row = vec![Rational::zero(); ng];
                row[p] = Rational::one();
                relations.push(row);
            }
        }
        if k <= n && n > k {
            for i in k_subsets(&ls, k) {
                for jp in k_subsets(&ms, n - k - 1) {
                    let mut row = vec![Rational::zero(); ng];
                    for j in (0..m).filter(|j| !jp.contains(j)) {
                        let mut full = jp.clone();
                        full.push(j);
                        full.sort_unstable();
                        row[index[&(i.clone(), full)]] += rat(sgn(&[j], &jp) as i64);
                    }
                    relations.push(row);
                }
            }
        }
        let order: Vec<usize> = (0..ng).rev().collect();
        let reducer = Reducer::from_rows(&relations, ng, &order);
        let pivots: BTreeSet<usize> = reducer.pivots().into_iter().collect();
        let basis = (0..ng).filter(|c| !pivots.contains(c)).collect();
        Ok(Presentation { dim: n, l, m, k, generators, index, relations, reducer, basis })
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generator_index(&self, i: &[usize], j: &[usize]) -> Option<usize> {
        self.index.get(&(i.to_vec(), j.to_vec())).copied()
    }

    /// The generator e_I ⊗ f_J as a vector (I, J sorted).
    pub fn unit(&self, i: &[usize], j: &[usize]) -> Result<Vec<Rational>, CohomologyError> {
        let p = self
            .generator_index(i, j)
            .ok_or_else(|| CohomologyError::Framing(format!("({i:?}, {j:?}) is not a generator at k = {}", self.k)))?;
        let mut v = vec![Rational::zero(); self.len()];
        v[p] = Rational::one();
        Ok(v)
    }

    /// Coordinates of the class of `v` in the chosen basis.
    pub fn coords(&self, v: &[Rational]) -> Vec<Rational> {
        let r = self.reducer.reduce(v);
        self.basis.iter().map(|&b| r[b].clone()).collect()
    }

    pub fn is_relation(&self, v: &[Rational]) -> bool {
        self.reducer.contains(v)
    }

    pub fn relation_rank(&self) -> usize {
        self.reducer.rank()
    }
}

/// The scalar μ with [x] = μ·[y] in the quotient; errors when [y] = 0 or the
/// classes are not proportional.
pub fn class_ratio(p: &Presentation, x: &[Rational], y: &[Rational]) -> Result<Rational, CohomologyError> {
    let (cx, cy) = (p.coords(x), p.coords(y));
    let Some(piv) = cy.iter().position(|c| !c.is_zero()) else {
        return Err(CohomologyError::Framing("reference class vanishes".into()));
    };
    let mu = &cx[piv] / &cy[piv];
    if cx.iter().zip(&cy).any(|(a, b)| *a != b * &mu) {
        return Err(CohomologyError::Framing("classes are not proportional".into()));
    }
    Ok(mu)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MapKind {
    MDeletion,
    MContraction,
    LDeletion,
    LContraction,
    Kunneth,
    /// Reordering of the hyperplanes of an isomorphic arrangement.
    Relabel,
}

/// A linear map on generators that descends to the quotients.
#[derive(Clone, Debug)]
pub struct PresMap {
    pub kind: MapKind,
    pub source_len: usize,
    pub target_len: usize,
    /// Image of each source generator, sparse over target generators.
    pub columns: Vec<Vec<(usize, Rational)>>,
    /// Number of source relations whose images were checked to be relations.
    pub certified: usize,
}

impl PresMap {
    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.target_len];
        for (x, col) in v.iter().zip(&self.columns) {
            if x.is_zero() {
                continue;
            }
            for (t, c) in col {
                out[*t] += x * c;
            }
        }
        out
    }

    fn certify(mut self, source_relations: &[Vec<Rational>], target: &Presentation) -> Result<Self, CohomologyError> {
        for (r, row) in source_relations.iter().enumerate() {
            if !target.is_relation(&self.apply(row)) {
                return Err(CohomologyError::IllDefined(self.kind, r));
            }
        }
        self.certified = source_relations.len();
        Ok(self)
    }
}

type GenImage = Option<(i32, Vec<usize>, Vec<usize>)>;

fn generator_map<F: Fn(&[usize], &[usize]) -> GenImage>(
    kind: MapKind,
    source: &Presentation,
    target: &Presentation,
    f: F,
) -> Result<PresMap, CohomologyError> {
    let mut columns = Vec::with_capacity(source.len());
    for (i, j) in &source.generators {
        columns.push(match f(i, j) {
            None => vec![],
            Some((s, i2, j2)) => {
                let t = target.generator_index(&i2, &j2).ok_or(CohomologyError::Shape(kind, i2, j2))?;
                vec![(t, rat(s as i64))]
            }
        });
    }
    PresMap { kind, source_len: source.len(), target_len: target.len(), columns, certified: 0 }
        .certify(&source.relations, target)
}

fn positions(of: &[usize], within: &[usize]) -> Option<Vec<usize>> {
    of.iter().map(|x| within.iter().position(|y| y == x)).collect()
}

/// H(L;M) → H(L;M(J_0)): e_I⊗f_J ↦ e_I⊗f_J if J ⊆ J_0, else 0.
pub fn m_deletion(source: &Presentation, j0: &BTreeSet<usize>, target: &Presentation) -> Result<PresMap, CohomologyError> {
    let j0v: Vec<usize> = j0.iter().copied().collect();
    generator_map(MapKind::MDeletion, source, target, |i, j| Some((1, i.to_vec(), positions(j, &j0v)?)))
}

/// H(M_{J_0}|L;M(J̄_0)) → H(L;M): e_I⊗f_J ↦ sgn(J_0,J) e_I⊗f_{J_0∪J}.
pub fn m_contraction(source: &Presentation, j0: &BTreeSet<usize>, target: &Presentation) -> Result<PresMap, CohomologyError> {
    let j0v: Vec<usize> = j0.iter().copied().collect();
    let rest: Vec<usize> = (0..target.m).filter(|x| !j0.contains(x)).collect();
    generator_map(MapKind::MContraction, source, target, |i, j| {
        let orig: Vec<usize> = j.iter().map(|&p| rest[p]).collect();
        let mut full = [j0v.clone(), orig.clone()].concat();
        full.sort_unstable();
        Some((sgn(&j0v, &orig), i.to_vec(), full))
    })
}

/// H(L(I_0);M) → H(L;M): e_I⊗f_J ↦ e_I⊗f_J.
pub fn l_deletion(source: &Presentation, i0: &BTreeSet<usize>, target: &Presentation) -> Result<PresMap, CohomologyError> {
    let i0v: Vec<usize> = i0.iter().copied().collect();
    generator_map(MapKind::LDeletion, source, target, |i, j| Some((1, i.iter().map(|&p| i0v[p]).collect(), j.to_vec())))
}

/// H(L;M)(|I_0|) → H(L_{I_0}|L(Ī_0);M): e_{I∪I_0}⊗f_J ↦ sgn(I,I_0) e_I⊗f_J,
/// and 0 when I_0 ⊄ I.
pub fn l_contraction(source: &Presentation, i0: &BTreeSet<usize>, target: &Presentation) -> Result<PresMap, CohomologyError> {
    let i0v: Vec<usize> = i0.iter().copied().collect();
    let rest: Vec<usize> = (0..source.l).filter(|x| !i0.contains(x)).collect();
    generator_map(MapKind::LContraction, source, target, |i, j| {
        if !i0v.iter().all(|x| i.contains(x)) {
            return None;
        }
        let kept: Vec<usize> = i.iter().copied().filter(|x| !i0.contains(x)).collect();
        Some((sgn(&kept, &i0v), positions(&kept, &rest)?, j.to_vec()))
    })
}

/// Isomorphic arrangements with L-form p of the source matching L-form
/// `l_map[p]` of the target (likewise M): e_I⊗f_J ↦ e_{π(I)}⊗f_{ρ(J)}, with
/// the signs of sorting π(I) and ρ(J).
pub fn relabel(source: &Presentation, l_map: &[usize], m_map: &[usize], target: &Presentation) -> Result<PresMap, CohomologyError> {
    generator_map(MapKind::Relabel, source, target, |i, j| {
        let pi: Vec<usize> = i.iter().map(|&x| l_map[x]).collect();
        let rho: Vec<usize> = j.iter().map(|&x| m_map[x]).collect();
        let s = perm_sign(&pi) * perm_sign(&rho);
        let (mut pi, mut rho) = (pi, rho);
        pi.sort_unstable();
        rho.sort_unstable();
        Some((s, pi, rho))
    })
}

/// Tensor of two generator vectors, indexed by g1·len2 + g2.
pub fn tensor(v1: &[Rational], v2: &[Rational]) -> Vec<Rational> {
    let mut out = Vec::with_capacity(v1.len() * v2.len());
    for a in v1 {
        for b in v2 {
            out.push(a * b);
        }
    }
    out
}

/// H(L¹;M¹) ⊗ H(L²;M²) → H(L¹×L²;M¹×M²):
/// (e_{I₁}⊗f_{J₁}) ⊗ (e_{I₂}⊗f_{J₂}) ↦ e_{I₁⊔I₂}⊗f_{J₁⊔J₂}.
pub fn kunneth(p1: &Presentation, p2: &Presentation, target: &Presentation) -> Result<PresMap, CohomologyError> {
    let kind = MapKind::Kunneth;
    let mut columns = Vec::with_capacity(p1.len() * p2.len());
    for (i1, j1) in &p1.generators {
        for (i2, j2) in &p2.generators {
            let i: Vec<usize> = i1.iter().copied().chain(i2.iter().map(|x| x + p1.l)).collect();
            let j: Vec<usize> = j1.iter().copied().chain(j2.iter().map(|x| x + p1.m)).collect();
            let t = target.generator_index(&i, &j).ok_or_else(|| CohomologyError::Shape(kind, i.clone(), j.clone()))?;
            columns.push(vec![(t, Rational::one())]);
        }
    }
    let unit = |len: usize, p: usize| {
        let mut v = vec![Rational::zero(); len];
        v[p] = Rational::one();
        v
    };
    let mut rels = Vec::new();
    for r in &p1.relations {
        for g in 0..p2.len() {
            rels.push(tensor(r, &unit(p2.len(), g)));
        }
    }
    for g in 0..p1.len() {
        for r in &p2.relations {
            rels.push(tensor(&unit(p1.len(), g), r));
        }
    }
    PresMap { kind, source_len: p1.len() * p2.len(), target_len: target.len(), columns, certified: 0 }.certify(&rels, target)
}

fn idx(range: std::ops::Range<usize>) -> Vec<usize> {
    range.collect()
}

fn to_sign(x: &Rational) -> Result<i32, CohomologyError> {
    if x.abs() != Rational::one() {
        return Err(CohomologyError::Framing(format!("framing ratio {x} is not a sign")));
    }
    Ok(if x.is_positive() { 1 } else { -1 })
}

/// b_C = e_C ⊗ f_{S_C^+} for every |C| = k, in quotient coordinates.
#[derive(Clone, Debug)]
pub struct BcBasis {
    pub chord_sets: Vec<Vec<usize>>,
    pub matrix: Vec<Vec<Rational>>,
    pub dimension: usize,
    pub invertible: bool,
}

pub fn b_c_basis(d: &DecoratedDiagram, k: usize) -> Result<BcBasis, CohomologyError> {
    if !d.is_generic().map_err(HopfError::from)? {
        return Err(CohomologyError::NotGeneric);
    }
    let n = d.degree();
    let p = Presentation::build(&BiArrangement::from_diagram(d)?, k)?;
    let chords: Vec<usize> = (1..=n).collect();
    let mut chord_sets = Vec::new();
    let mut matrix = Vec::new();
    for c in k_subsets(&chords, k) {
        let cs: BTreeSet<usize> = c.iter().copied().collect();
        let sp: Vec<usize> = s_c_plus(&d.diagram, &cs)?.into_iter().collect();
        let ci: Vec<usize> = c.iter().map(|x| x - 1).collect();
        matrix.push(p.coords(&p.unit(&ci, &sp)?));
        chord_sets.push(c);
    }
    let dimension = p.dimension();
    let invertible = matrix.len() == dimension && rank(&matrix, dimension) == dimension;
    Ok(BcBasis { chord_sets, matrix, dimension, invertible })
}

/// Signs on the graph of side choices (u_0,…,u_k), u_α ∈ S_C(α): the three
/// loop families (trivial loops, triangles, squares) have sign product 1, and
/// a consistent ±1 labeling of all vertices exists.
pub fn sign_graph_check(d: &DissectionDiagram, c: &BTreeSet<usize>) -> Result<bool, CohomologyError> {
    let blocks: Vec<Vec<usize>> = faces(d, c)?.blocks.into_iter().map(|f| f.sides).collect();
    let edge_sign = |u: &[usize], i: usize, a: usize, b: usize| -> i32 {
        let mut jp: Vec<usize> = Vec::new();
        for (beta, blk) in blocks.iter().enumerate() {
            for &s in blk {
                let drop = if beta == i { s == a || s == b } else { s == u[beta] };
                if !drop {
                    jp.push(s);
                }
            }
        }
        jp.sort_unstable();
        -sgn(&[a], &jp) * sgn(&[b], &jp)
    };
    let mut tuples: Vec<Vec<usize>> = vec![vec![]];
    for blk in &blocks {
        tuples = tuples.into_iter().flat_map(|t| blk.iter().map(move |&s| [t.clone(), vec![s]].concat())).collect();
    }
    let with = |u: &[usize], i: usize, v: usize| {
        let mut w = u.to_vec();
        w[i] = v;
        w
    };
    for u in &tuples {
        for (i, blk) in blocks.iter().enumerate() {
            for &a in blk {
                for &b in blk {
                    if a == b {
                        continue;
                    }
                    if edge_sign(u, i, a, b) != edge_sign(u, i, b, a) {
                        return Ok(false);
                    }
                    for &cc in blk {
                        if cc == a || cc == b {
                            continue;
                        }
                        let p = edge_sign(u, i, a, b) * edge_sign(u, i, b, cc) * edge_sign(u, i, cc, a);
                        if p != 1 {
                            return Ok(false);
                        }
                    }
                }
            }
            for (jj, blk2) in blocks.iter().enumerate().skip(i + 1) {
                for &a in blk {
                    for &b in blk {
                        for &cc in blk2 {
                            for &dd in blk2 {
                                if a == b || cc == dd {
                                    continue;
                                }
                                let base = with(&with(u, i, a), jj, cc);
                                let p = edge_sign(&base, i, a, b)
                                    * edge_sign(&with(&base, i, b), jj, cc, dd)
                                    * edge_sign(&with(&with(&base, i, b), jj, dd), i, b, a)
                                    * edge_sign(&with(&base, jj, dd), jj, dd, cc);
                                if p != 1 {
                                    return Ok(false);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    // global consistency by propagation
    let mut label: HashMap<Vec<usize>, i32> = HashMap::new();
    let Some(start) = tuples.first() else { return Ok(true) };
    label.insert(start.clone(), 1);
    let mut stack = vec![start.clone()];
    while let Some(u) = stack.pop() {
        let lu = label[&u];
        for (i, blk) in blocks.iter().enumerate() {
            for &b in blk {
                if b == u[i] {
                    continue;
                }
                let v = with(&u, i, b);
                let lv = lu * edge_sign(&u, i, u[i], b);
                match label.get(&v) {
                    Some(&x) if x != lv => return Ok(false),
                    Some(_) => {}
                    None => {
                        label.insert(v.clone(), lv);
                        stack.push(v);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Sign of the bijection between two sorted sets given as pairs (x, y).
fn bijection_sign(pairs: &[(usize, usize)]) -> i32 {
    let mut p = pairs.to_vec();
    p.sort_unstable();
    perm_sign(&p.iter().map(|x| x.1).collect::<Vec<_>>())
}

/// The four relabeling signs of a chord subset and (−1)^{k_C}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProductSigns {
    pub complement_shuffle: i32,
    pub nu: i32,
    pub side_shuffle: i32,
    pub eta: i32,
    pub sigma: i32,
    pub k_c: usize,
}

impl ProductSigns {
    pub fn holds(&self) -> bool {
        let expected = if self.k_c % 2 == 0 { 1 } else { -1 };
        self.complement_shuffle * self.nu * self.side_shuffle * self.eta == expected && self.sigma == expected
    }
}

pub fn product_signs(d: &DecoratedDiagram, c: &BTreeSet<usize>) -> Result<ProductSigns, CohomologyError> {
    let n = d.degree();
    let cv: Vec<usize> = c.iter().copied().collect();
    let cbar: Vec<usize> = (1..=n).filter(|i| !c.contains(i)).collect();
    let splus = s_c_plus(&d.diagram, c)?;
    let sp: Vec<usize> = splus.iter().copied().collect();
    let sbar: Vec<usize> = (1..=n).filter(|s| !splus.contains(s)).collect();
    let mut nu_pairs = Vec::new();
    for f in q_faces(d, c)? {
        for (j, &ch) in f.chords.iter().enumerate() {
            nu_pairs.push((ch, f.sides[j + 1]));
        }
    }
    let r = r_c(d, c)?;
    let eta_pairs: Vec<(usize, usize)> = r.chords.iter().enumerate().map(|(j, &ch)| (ch, r.sides[j + 1])).collect();
    let sigma = sigma_c(d, c)?;
    Ok(ProductSigns {
        complement_shuffle: sgn(&cbar, &cv),
        nu: bijection_sign(&nu_pairs),
        side_shuffle: sgn(&sp, &sbar),
        eta: bijection_sign(&eta_pairs),
        sigma: perm_sign(&sigma),
        k_c: k_c_direct(&d.diagram, c)?.len(),
    })
}

pub fn product_signs_check(d: &DecoratedDiagram, c: &BTreeSet<usize>) -> Result<bool, CohomologyError> {
    Ok(product_signs(d, c)?.holds())
}

/// One term of the geometric coproduct, with the framing ratios that
/// produced its sign.
#[derive(Clone, Debug)]
pub struct GeometricTerm {
    pub chords: BTreeSet<usize>,
    /// (H(D)(k), v(D), b_C^∨) = sign_q · Π_α I(q_C^α(D))
    pub sign_q: i32,
    /// (H(D), b_C, φ(D)) = sign_r · I(r_C(D))
    pub sign_r: i32,
    pub left: Monomial,
    pub right: Monomial,
    /// Kinds of the certified maps used, with the number of relations checked.
    pub maps: Vec<(MapKind, usize)>,
}

impl GeometricTerm {
    pub fn sign(&self) -> i32 {
        self.sign_q * self.sign_r
    }
}

struct DiagramPresentations {
    arrangement: BiArrangement,
    by_weight: Vec<Presentation>,
}

impl DiagramPresentations {
    fn new(d: &DecoratedDiagram) -> Result<Self, CohomologyError> {
        let arrangement = BiArrangement::from_diagram(d)?;
        let by_weight = Presentation::all(&arrangement)?;
        Ok(DiagramPresentations { arrangement, by_weight })
    }
}

fn geometric_term_with(d: &DecoratedDiagram, c: &BTreeSet<usize>, dp: &DiagramPresentations) -> Result<GeometricTerm, CohomologyError> {
    let n = d.degree();
    let k = c.len();
    let a = &dp.arrangement;
    let (p_top, p_k, p_0) = (&dp.by_weight[n], &dp.by_weight[k], &dp.by_weight[0]);
    let ci: BTreeSet<usize> = c.iter().map(|i| i - 1).collect();
    let civ: Vec<usize> = ci.iter().copied().collect();
    let splus = s_c_plus(&d.diagram, c)?;
    let spv: Vec<usize> = splus.iter().copied().collect();
    let mut maps = Vec::new();
    let mut used = |m: &PresMap| maps.push((m.kind, m.certified));

    // residue onto L_C, then identification with the product of the faces
    let t_arr = contract_to_q(d, c)?;
    let t_top = Presentation::build(&t_arr, n - k)?;
    let t_0 = Presentation::build(&t_arr, 0)?;
    let lc_top = l_contraction(p_top, &ci, &t_top)?;
    let lc_k = l_contraction(p_k, &ci, &t_0)?;
    used(&lc_top);
    used(&lc_k);
    let v = p_top.unit(&idx(0..n), &[])?;
    let w = t_top.unit(&idx(0..n - k), &[])?;
    let mu_q1 = class_ratio(&t_top, &lc_top.apply(&v), &w)?;
    let fs_t = t_0.unit(&[], &spv)?;
    let b_c = p_k.unit(&civ, &spv)?;
    let lambda_q1 = class_ratio(&t_0, &lc_k.apply(&b_c), &fs_t)?;
    let chords: Vec<usize> = (0..n).collect();
    for other in k_subsets(&chords, k) {
        if other == civ {
            continue;
        }
        let os: BTreeSet<usize> = other.iter().map(|x| x + 1).collect();
        let osp: Vec<usize> = s_c_plus(&d.diagram, &os)?.into_iter().collect();
        let img = lc_k.apply(&p_k.unit(&other, &osp)?);
        if t_0.coords(&img).iter().any(|x| !x.is_zero()) {
            return Err(CohomologyError::Framing(format!("b_{other:?} survives the residue onto L_{c:?}")));
        }
    }

    let qp = q_product(d, c)?;
    let (l_map, m_map) = q_relabeling(d, c)?;
    // framings of the face product, assembled by Künneth
    let mut acc = BiArrangement { dim: 0, l: vec![], m: vec![] };
    let mut acc_top = Presentation::build(&acc, 0)?;
    let mut acc_bot = acc_top.clone();
    let mut v_acc = vec![Rational::one()];
    let mut phi_acc = vec![Rational::one()];
    for f in q_faces(d, c)? {
        let fa = BiArrangement::from_diagram(&f.diagram)?;
        let m_a = fa.dim;
        let f_top = Presentation::build(&fa, m_a)?;
        let f_bot = Presentation::build(&fa, 0)?;
        let next = acc.product(&fa);
        let n_top = Presentation::build(&next, next.dim)?;
        let n_bot = Presentation::build(&next, 0)?;
        let kt = kunneth(&acc_top, &f_top, &n_top)?;
        let kb = kunneth(&acc_bot, &f_bot, &n_bot)?;
        used(&kt);
        used(&kb);
        v_acc = kt.apply(&tensor(&v_acc, &f_top.unit(&idx(0..m_a), &[])?));
        phi_acc = kb.apply(&tensor(&phi_acc, &f_bot.unit(&[], &idx(1..m_a + 1))?));
        acc = next;
        acc_top = n_top;
        acc_bot = n_bot;
    }
    if acc != qp.product {
        return Err(CohomologyError::Framing("face product assembled inconsistently".into()));
    }
    let rl_top = relabel(&t_top, &l_map, &m_map, &acc_top)?;
    let rl_0 = relabel(&t_0, &l_map, &m_map, &acc_bot)?;
    used(&rl_top);
    used(&rl_0);
    let mu_q2 = class_ratio(&acc_top, &rl_top.apply(&w), &v_acc)?;
    let lambda_q2 = class_ratio(&acc_bot, &rl_0.apply(&fs_t), &phi_acc)?;
    let sign_q = to_sign(&(mu_q1 * mu_q2 / (lambda_q1 * lambda_q2)))?;

    // the face M_{S_C^+} of (L(C);M), mapped into H(D), then identified with r_C(D)
    let r_arr = contract_to_r(d, c)?;
    let r_top = Presentation::build(&r_arr, k)?;
    let r_0 = Presentation::build(&r_arr, 0)?;
    let del = a.delete(Side::L, &ci)?;
    let d_k = Presentation::build(&del, k)?;
    let d_0 = Presentation::build(&del, 0)?;
    let mc_k = m_contraction(&r_top, &splus, &d_k)?;
    let mc_0 = m_contraction(&r_0, &splus, &d_0)?;
    let ld_k = l_deletion(&d_k, &ci, p_k)?;
    let ld_0 = l_deletion(&d_0, &ci, p_0)?;
    for m in [&mc_k, &mc_0, &ld_k, &ld_0] {
        used(m);
    }
    let v_r = r_top.unit(&idx(0..k), &[])?;
    let mu_r = class_ratio(p_k, &ld_k.apply(&mc_k.apply(&v_r)), &b_c)?;
    let phi_r = r_0.unit(&[], &idx(1..k + 1))?;
    let phi_d = p_0.unit(&[], &idx(1..n + 1))?;
    let lambda_r = class_ratio(p_0, &ld_0.apply(&mc_0.apply(&phi_r)), &phi_d)?;
    let rd = r_c(d, c)?;
    let rr = BiArrangement::from_diagram(&rd.diagram)?;
    let rr_top = Presentation::build(&rr, k)?;
    let rr_0 = Presentation::build(&rr, 0)?;
    let (rl_map, rm_map) = r_relabeling(d, c)?;
    let g_top = relabel(&r_top, &rl_map, &rm_map, &rr_top)?;
    let g_0 = relabel(&r_0, &rl_map, &rm_map, &rr_0)?;
    used(&g_top);
    used(&g_0);
    let mu_r2 = class_ratio(&rr_top, &g_top.apply(&v_r), &rr_top.unit(&idx(0..k), &[])?)?;
    let lambda_r2 = class_ratio(&rr_0, &g_0.apply(&phi_r), &rr_0.unit(&[], &idx(1..k + 1))?)?;
    let sign_r = to_sign(&(lambda_r * mu_r2 / (mu_r * lambda_r2)))?;

    Ok(GeometricTerm {
        chords: c.clone(),
        sign_q,
        sign_r,
        left: q_c(d, c)?,
        right: Monomial::from_diagram(rd.diagram),
        maps,
    })
}

pub fn geometric_term(d: &DecoratedDiagram, c: &BTreeSet<usize>) -> Result<GeometricTerm, CohomologyError> {
    if !d.is_generic().map_err(HopfError::from)? {
        return Err(CohomologyError::NotGeneric);
    }
    geometric_term_with(d, c, &DiagramPresentations::new(d)?)
}

/// All terms with |C| = k.
pub fn geometric_terms(d: &DecoratedDiagram, k: usize) -> Result<Vec<GeometricTerm>, CohomologyError> {
    if !d.is_generic().map_err(HopfError::from)? {
        return Err(CohomologyError::NotGeneric);
    }
    let dp = DiagramPresentations::new(d)?;
    let chords: Vec<usize> = (1..=d.degree()).collect();
    k_subsets(&chords, k)
        .into_iter()
        .map(|c| geometric_term_with(d, &c.into_iter().collect(), &dp))
        .collect()
}

/// The (n−k, k) component of the coproduct, computed from the framings.
pub fn motivic_coproduct_geometric(d: &DecoratedDiagram, k: usize) -> Result<TensorElement, CohomologyError> {
    let mut t = TensorElement::zero();
    for term in geometric_terms(d, k)? {
        t.add_term(term.left.clone(), term.right.clone(), &Poly::int(term.sign() as i64));
    }
    Ok(t)
}

/// For an acyclic set of chords in a polygon with one more side (the Stokes
/// setting), e_{all chords} ⊗ (f_i + f_j) is a relation, where i, j are the
/// sides whose contraction gives dissection diagrams. Returns whether that
/// holds and f_i alone is not a relation.
pub fn stokes_class_vanishes(a: &BiArrangement, i: usize, j: usize) -> Result<bool, CohomologyError> {
    let l = a.l.len();
    let p = Presentation::new(a, l)?;
    let all = idx(0..l);
    let fi = p.unit(&all, &[i])?;
    let fj = p.unit(&all, &[j])?;
    let sum: Vec<Rational> = fi.iter().zip(&fj).map(|(x, y)| x + y).collect();
    Ok(p.is_relation(&sum) && !p.is_relation(&fi))
}

/// Degree-p relations of the Orlik–Solomon algebra of the L-forms of `a`:
/// e_S with L_S empty, and e_U ∧ ∂e_T for dependent T with L_T nonempty.
pub fn orlik_solomon_relations(a: &BiArrangement, p: usize) -> Result<(Vec<Vec<usize>>, Vec<Vec<Rational>>), CohomologyError> {
    let l = a.l.len();
    let all = idx(0..l);
    let gens = k_subsets(&all, p);
    let index: HashMap<Vec<usize>, usize> = gens.iter().cloned().enumerate().map(|(i, g)| (g, i)).collect();
    let none = BTreeSet::new();
    let mut rows = Vec::new();
    for s in &gens {
        if a.stratum(&s.iter().copied().collect(), &none)? == crate::arrangement::Stratum::Empty {
            let mut row = vec![Rational::zero(); gens.len()];
            row[index[s]] = Rational::one();
            rows.push(row);
        }
    }
    for size in 2..=(p + 1).min(l) {
        for t in k_subsets(&all, size) {
            match a.stratum(&t.iter().copied().collect(), &none)? {
                crate::arrangement::Stratum::Codim(c) if c < size => {}
                _ => continue,
            }
            let rest: Vec<usize> = all.iter().copied().filter(|x| !t.contains(x)).collect();
            for u in k_subsets(&rest, p + 1 - size) {
                let mut row = vec![Rational::zero(); gens.len()];
                for (pos, _) in t.iter().enumerate() {
                    let mut tk = t.clone();
                    tk.remove(pos);
                    let s = if pos % 2 == 0 { 1 } else { -1 } * sgn(&u, &tk);
                    let mut full = [u.clone(), tk].concat();
                    full.sort_unstable();
                    row[index[&full]] += rat(s as i64);
                }
                rows.push(row);
            }
        }
    }
    Ok((gens, rows))
}

/// Whether Σ_{c∈C} sgn({c},C∖{c})·sgn(C∖{c}, Ĉ)·e_{all∖{c}} lies in the
/// Orlik–Solomon relations, for a dependent cycle C of L-indices (Ĉ its
/// complement).
pub fn orlik_solomon_cycle_vanishes(a: &BiArrangement, cycle: &BTreeSet<usize>) -> Result<bool, CohomologyError> {
    let l = a.l.len();
    let p = l - 1;
    let (gens, rows) = orlik_solomon_relations(a, p)?;
    let cv: Vec<usize> = cycle.iter().copied().collect();
    let others: Vec<usize> = (0..l).filter(|x| !cycle.contains(x)).collect();
    let mut v = vec![Rational::zero(); gens.len()];
    for &c in &cv {
        let rest: Vec<usize> = cv.iter().copied().filter(|&x| x != c).collect();
        let s = sgn(&[c], &rest) * sgn(&rest, &others);
        let mut full = [rest, others.clone()].concat();
        full.sort_unstable();
        let at = gens.iter().position(|g| *g == full).expect("generator");
        v[at] += rat(s as i64);
    }
    let order: Vec<usize> = (0..gens.len()).collect();
    let red = Reducer::from_rows(&rows, gens.len(), &order);
    Ok(red.contains(&v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> DecoratedDiagram {
        DecoratedDiagram::symbolic(DissectionDiagram::new(vec![0, 1, 1]).unwrap())
    }

    #[test]
    fn dimensions_are_binomial() {
        let a = BiArrangement::from_diagram(&example()).unwrap();
        let dims: Vec<usize> = Presentation::all(&a).unwrap().iter().map(|p| p.dimension()).collect();
        assert_eq!(dims, vec![1, 3, 3, 1]);
        assert_eq!(Presentation::build(&a, 4).unwrap().dimension(), 0);
    }

    #[test]
    fn chord_three_has_negative_sign() {
        let t = geometric_term(&example(), &[3].into()).unwrap();
        assert_eq!(t.sign(), -1);
    }
}
