//! Affine hyperplane bi-arrangements over exact scalars.

use crate::decoration::{DecoratedDiagram, DecorationError};
use crate::hopf::{q_faces, r_c, HopfError};
use crate::linalg::{eliminate, solve};
use crate::scalar::{Mode, Rational, Scalar};
use num_traits::{One, Zero};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum ArrangementError {
    #[error("arrangements need exact scalars; float mode is rejected")]
    FloatMode,
    #[error("contraction onto an empty stratum")]
    EmptyStratum,
    #[error("variables {0:?} cannot be eliminated on this stratum")]
    NotEliminable(Vec<usize>),
    #[error("index {0} out of range")]
    BadIndex(usize),
    #[error("non-generic input: {0}")]
    NonGeneric(String),
    #[error("forms do not match: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Decoration(#[from] DecorationError),
    #[error(transparent)]
    Hopf(#[from] HopfError),
}

/// The hyperplane c_1 t_1 + ⋯ + c_n t_n + c_0 = 0. A zero coefficient vector
/// with nonzero constant stands for the empty hyperplane (it arises when a
/// form is restricted to a stratum it does not meet).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineForm {
    pub coeffs: Vec<Rational>,
    pub constant: Scalar,
}

impl AffineForm {
    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_degenerate(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Whether `self = λ·other` for some nonzero rational λ.
    pub fn proportional(&self, other: &AffineForm) -> bool {
        if self.coeffs.len() != other.coeffs.len() {
            return false;
        }
        let lambda = match self.coeffs.iter().zip(&other.coeffs).find(|(_, b)| !b.is_zero()) {
            Some((a, b)) => a / b,
            None => {
                // both degenerate: compare constants up to a rational factor
                if !self.is_degenerate() {
                    return false;
                }
                return match (&self.constant, &other.constant) {
                    (Scalar::Rational(a), Scalar::Rational(b)) => a.is_zero() == b.is_zero(),
                    (a, b) => proportional_scalars(a, b),
                };
            }
        };
        if lambda.is_zero() {
            return false;
        }
        self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| *a == b * &lambda)
            && self.constant.sub(&other.constant.scale(&lambda)).is_zero()
    }

    fn rhs(&self) -> (Vec<Rational>, Scalar) {
        (self.coeffs.clone(), self.constant.clone())
    }
}

fn proportional_scalars(a: &Scalar, b: &Scalar) -> bool {
    match (a.formal_terms(), b.formal_terms()) {
        (Some(x), Some(y)) => {
            if x.is_empty() || y.is_empty() {
                return x.is_empty() && y.is_empty();
            }
            let (k, v) = x.iter().next().expect("nonempty");
            let Some(w) = y.get(k) else { return false };
            let lambda = v / w;
            a.sub(&b.scale(&lambda)).is_zero()
        }
        _ => a.is_zero() == b.is_zero(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    L,
    M,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiArrangement {
    pub dim: usize,
    pub l: Vec<AffineForm>,
    pub m: Vec<AffineForm>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stratum {
    Empty,
    Codim(usize),
}

/// Form of the edge u→v with decoration α: t_u − t_v − α (t_0 = 0 is omitted).
fn edge_form(n: usize, u: usize, v: usize, alpha: &Scalar) -> AffineForm {
    let mut coeffs = vec![Rational::zero(); n];
    if u > 0 {
        coeffs[u - 1] += Rational::one();
    }
    if v > 0 {
        coeffs[v - 1] -= Rational::one();
    }
    AffineForm { coeffs, constant: alpha.neg() }
}

impl BiArrangement {
    /// L_i from chord i, M_j from side j.
    pub fn from_diagram(d: &DecoratedDiagram) -> Result<Self, ArrangementError> {
        let n = d.degree();
        let chords: Vec<(usize, usize, Scalar)> = (1..=n).map(|i| (i, d.diagram.parent(i), d.a[i - 1].clone())).collect();
        let sides: Vec<(usize, usize, Scalar)> = (0..=n)
            .map(|j| {
                let (u, v) = d.diagram.side_endpoints(j);
                (u, v, d.b[j].clone())
            })
            .collect();
        Self::from_edges(n + 1, &chords, &sides)
    }

    /// Arrangement of a decorated graph on vertices 0..nv (vertex 0 is the
    /// origin): chords give L, sides give M, each edge u→v the form t_u − t_v − α.
    pub fn from_edges(
        nv: usize,
        chords: &[(usize, usize, Scalar)],
        sides: &[(usize, usize, Scalar)],
    ) -> Result<Self, ArrangementError> {
        if chords.iter().chain(sides).any(|e| e.2.mode() == Mode::Float) {
            return Err(ArrangementError::FloatMode);
        }
        if let Some(e) = chords.iter().chain(sides).find(|e| e.0 >= nv || e.1 >= nv) {
            return Err(ArrangementError::BadIndex(e.0.max(e.1)));
        }
        let n = nv - 1;
        Ok(BiArrangement {
            dim: n,
            l: chords.iter().map(|(u, v, a)| edge_form(n, *u, *v, a)).collect(),
            m: sides.iter().map(|(u, v, b)| edge_form(n, *u, *v, b)).collect(),
        })
    }

    fn zero(&self) -> Scalar {
        self.l.iter().chain(&self.m).next().map(|f| f.constant.zero_like()).unwrap_or_else(|| Scalar::int(0))
    }

    fn forms(&self, side: Side) -> &[AffineForm] {
        match side {
            Side::L => &self.l,
            Side::M => &self.m,
        }
    }

    fn check(&self, side: Side, idx: &BTreeSet<usize>) -> Result<(), ArrangementError> {
        let len = self.forms(side).len();
        match idx.iter().find(|&&i| i >= len) {
            Some(&i) => Err(ArrangementError::BadIndex(i)),
            None => Ok(()),
        }
    }

    fn mode_ok(&self) -> Result<(), ArrangementError> {
        if self.l.iter().chain(&self.m).any(|f| f.constant.mode() == Mode::Float) {
            return Err(ArrangementError::FloatMode);
        }
        Ok(())
    }

    /// L_I ∩ M_J: empty, or its codimension.
    pub fn stratum(&self, i: &BTreeSet<usize>, j: &BTreeSet<usize>) -> Result<Stratum, ArrangementError> {
        self.mode_ok()?;
        self.check(Side::L, i)?;
        self.check(Side::M, j)?;
        let rows: Vec<(Vec<Rational>, Scalar)> = i
            .iter()
            .map(|&k| self.l[k].rhs())
            .chain(j.iter().map(|&k| self.m[k].rhs()))
            .collect();
        if rows.is_empty() {
            return Ok(Stratum::Codim(0));
        }
        let e = eliminate(&rows, self.dim);
        Ok(if e.consistent { Stratum::Codim(e.rank) } else { Stratum::Empty })
    }

    /// Every stratum of L ∪ M is empty or has codimension equal to its size.
    pub fn is_affinely_generic(&self) -> Result<bool, ArrangementError> {
        let (nl, nm) = (self.l.len(), self.m.len());
        let total = nl + nm;
        assert!(total < 26, "too many hyperplanes for exhaustive strata");
        let mut empty: Vec<u32> = Vec::new();
        for mask in 0u32..(1 << total) {
            // supersets of empty strata are empty
            if empty.iter().any(|&e| mask & e == e) {
                continue;
            }
            let i: BTreeSet<usize> = (0..nl).filter(|k| mask & (1 << k) != 0).collect();
            let j: BTreeSet<usize> = (0..nm).filter(|k| mask & (1 << (nl + k)) != 0).collect();
            match self.stratum(&i, &j)? {
                Stratum::Empty => empty.push(mask),
                Stratum::Codim(c) if c != i.len() + j.len() => return Ok(false),
                Stratum::Codim(_) => {}
            }
        }
        Ok(true)
    }

    /// Keep only the forms of `side` with index in `keep` (in order).
    pub fn delete(&self, side: Side, keep: &BTreeSet<usize>) -> Result<Self, ArrangementError> {
        self.check(side, keep)?;
        let kept: Vec<AffineForm> = keep.iter().map(|&k| self.forms(side)[k].clone()).collect();
        let mut out = self.clone();
        match side {
            Side::L => out.l = kept,
            Side::M => out.m = kept,
        }
        Ok(out)
    }

    /// Restrict to the stratum of the forms `onto` of `side`, solving for the
    /// lowest-index variables.
    pub fn contract(&self, side: Side, onto: &BTreeSet<usize>) -> Result<Self, ArrangementError> {
        let order: Vec<usize> = (0..self.dim).collect();
        self.contract_with(side, onto, &order)
    }

    /// Restrict to the stratum of `onto`, choosing pivot variables by scanning
    /// `order`. The surviving variables keep their relative order.
    pub fn contract_with(&self, side: Side, onto: &BTreeSet<usize>, order: &[usize]) -> Result<Self, ArrangementError> {
        self.mode_ok()?;
        self.check(side, onto)?;
        let rows: Vec<(Vec<Rational>, Scalar)> = onto.iter().map(|&k| self.forms(side)[k].rhs()).collect();
        let sol = solve(&rows, self.dim, order).ok_or(ArrangementError::EmptyStratum)?;
        let mut expr: Vec<(Vec<Rational>, Scalar)> = Vec::with_capacity(self.dim);
        let zero = self.zero();
        for v in 0..self.dim {
            if let Some(p) = sol.pivots.iter().position(|&q| q == v) {
                expr.push(sol.expr[p].clone());
            } else {
                let f = sol.free.iter().position(|&q| q == v).expect("free variable");
                let mut c = vec![Rational::zero(); sol.free.len()];
                c[f] = Rational::one();
                expr.push((c, zero.clone()));
            }
        }
        let restricted = self.substitute(&expr, sol.free.len());
        let mut out = restricted;
        let rest: Vec<AffineForm> = (0..self.forms(side).len())
            .filter(|k| !onto.contains(k))
            .map(|k| out.forms(side)[k].clone())
            .collect();
        match side {
            Side::L => out.l = rest,
            Side::M => out.m = rest,
        }
        Ok(out)
    }

    /// Change of variables: old variable v becomes `map[v].0 · y + map[v].1`.
    pub fn substitute(&self, map: &[(Vec<Rational>, Scalar)], new_dim: usize) -> Self {
        let sub = |f: &AffineForm| {
            let mut coeffs = vec![Rational::zero(); new_dim];
            let mut constant = f.constant.clone();
            for (v, c) in f.coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for (k, x) in map[v].0.iter().enumerate() {
                    coeffs[k] += c * x;
                }
                constant = constant.add(&map[v].1.scale(c));
            }
            AffineForm { coeffs, constant }
        };
        BiArrangement { dim: new_dim, l: self.l.iter().map(sub).collect(), m: self.m.iter().map(sub).collect() }
    }

    /// Product arrangement: coordinates stacked, L-forms of `self` then `other`, likewise M.
    pub fn product(&self, other: &Self) -> Self {
        let pad_left = |f: &AffineForm| {
            let mut coeffs = f.coeffs.clone();
            coeffs.extend(std::iter::repeat_n(Rational::zero(), other.dim));
            AffineForm { coeffs, constant: f.constant.clone() }
        };
        let pad_right = |f: &AffineForm| {
            let mut coeffs = vec![Rational::zero(); self.dim];
            coeffs.extend(f.coeffs.iter().cloned());
            AffineForm { coeffs, constant: f.constant.clone() }
        };
        BiArrangement {
            dim: self.dim + other.dim,
            l: self.l.iter().map(pad_left).chain(other.l.iter().map(pad_right)).collect(),
            m: self.m.iter().map(pad_left).chain(other.m.iter().map(pad_right)).collect(),
        }
    }

    /// Form-by-form comparison up to nonzero scaling, with `l_map[i]` and
    /// `m_map[j]` giving the index in `other` matched with form i, j of `self`.
    pub fn matches(&self, other: &Self, l_map: &[usize], m_map: &[usize]) -> Result<(), ArrangementError> {
        if self.dim != other.dim || self.l.len() != other.l.len() || self.m.len() != other.m.len() {
            return Err(ArrangementError::Mismatch(format!(
                "shapes differ: dim {} vs {}, |L| {} vs {}, |M| {} vs {}",
                self.dim,
                other.dim,
                self.l.len(),
                other.l.len(),
                self.m.len(),
                other.m.len()
            )));
        }
        for (i, &k) in l_map.iter().enumerate() {
            if !self.l[i].proportional(&other.l[k]) {
                return Err(ArrangementError::Mismatch(format!("L{i} vs L{k}")));
            }
        }
        for (j, &k) in m_map.iter().enumerate() {
            if !self.m[j].proportional(&other.m[k]) {
                return Err(ArrangementError::Mismatch(format!("M{j} vs M{k}")));
            }
        }
        Ok(())
    }
}

/// Emptiness of L_I ∩ M_J read off the graph Γ(D): empty iff the chords I
/// and sides J contain an undirected cycle.
pub fn graph_cycle_criterion(d: &DecoratedDiagram, i: &BTreeSet<usize>, j: &BTreeSet<usize>) -> Result<Stratum, ArrangementError> {
    if !d.is_generic()? {
        return Err(ArrangementError::NonGeneric("decorations are not generic".into()));
    }
    let n = d.degree();
    let mut uf: Vec<usize> = (0..=n).collect();
    fn find(uf: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while uf[r] != r {
            r = uf[r];
        }
        uf[x] = r;
        r
    }
    let mut edges = Vec::new();
    for &c in i {
        if c == 0 || c > n {
            return Err(ArrangementError::BadIndex(c));
        }
        edges.push((c, d.diagram.parent(c)));
    }
    for &s in j {
        if s > n {
            return Err(ArrangementError::BadIndex(s));
        }
        edges.push(d.diagram.side_endpoints(s));
    }
    for (a, b) in edges {
        let (ra, rb) = (find(&mut uf, a), find(&mut uf, b));
        if ra == rb {
            return Ok(Stratum::Empty);
        }
        uf[ra] = rb;
    }
    Ok(Stratum::Codim(i.len() + j.len()))
}

/// Index maps between chord labels 1..n and L positions 0..n-1.
fn chord_set_to_l(c: &BTreeSet<usize>) -> BTreeSet<usize> {
    c.iter().map(|&i| i - 1).collect()
}

/// The product of the face arrangements of q_C(D), in face order (degree-0
/// faces included), together with: for each chord of C̄ its L-index in the
/// product, for each side its M-index in the product, and the change of
/// variables from the contracted coordinates (sinks of C-classes) to the
/// product coordinates.
pub struct QProduct {
    pub product: BiArrangement,
    pub l_index: BTreeMap<usize, usize>,
    pub m_index: BTreeMap<usize, usize>,
}

pub fn q_product(d: &DecoratedDiagram, c: &BTreeSet<usize>) -> Result<QProduct, ArrangementError> {
    let faces = q_faces(d, c)?;
    let mut product = BiArrangement { dim: 0, l: vec![], m: vec![] };
    let mut l_index = BTreeMap::new();
    let mut m_index = BTreeMap::new();
    for f in &faces {
        let a = BiArrangement::from_diagram(&f.diagram)?;
        for (k, &ch) in f.chords.iter().enumerate() {
            l_index.insert(ch, product.l.len() + k);
        }
        for (k, &s) in f.sides.iter().enumerate() {
            m_index.insert(s, product.m.len() + k);
        }
        product = product.product(&a);
    }
    Ok(QProduct { product, l_index, m_index })
}

/// Contract from_diagram(D) onto L_C (solving for the chord sources) and
/// rewrite it in the coordinates of the q_C faces.
pub fn contract_to_q(d: &DecoratedDiagram, c: &BTreeSet<usize>) -> Result<BiArrangement, ArrangementError> {
    let n = d.degree();
    let a = BiArrangement::from_diagram(d)?;
    let order: Vec<usize> = c.iter().map(|&i| i - 1).chain((1..=n).filter(|i| !c.contains(i)).map(|i| i - 1)).collect();
    let contracted = a.contract_with(Side::L, &chord_set_to_l(c), &order)?;
    // surviving variables: t_v for v ∉ C, in increasing order
    let survivors: Vec<usize> = (1..=n).filter(|v| !c.contains(v)).collect();
    let faces = q_faces(d, c)?;
    // class sink -> (face-product coordinate, sink of the face root)
    let mut coord: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    let mut offset = 0;
    let graph = d.total_graph();
    let ct = graph.contract_edges(&c.iter().map(|&i| i - 1).collect::<Vec<_>>())?;
    for f in &faces {
        let root = ct.class[f.sides[0]];
        for (j, &s) in f.sides.iter().enumerate().skip(1) {
            coord.insert(ct.class[s], (offset + j - 1, root));
        }
        offset += f.sides.len() - 1;
    }
    // t_v = y_(v) + t_(root of v's face), unrolled to the global root
    let m = offset;
    let mut map = Vec::with_capacity(survivors.len());
    let zero = d.b[0].zero_like();
    for &v in &survivors {
        let mut c = vec![Rational::zero(); m];
        let mut cur = v;
        while cur != 0 {
            let (k, root) = *coord.get(&cur).ok_or_else(|| ArrangementError::Mismatch(format!("vertex {cur} has no face")))?;
            c[k] += Rational::one();
            cur = root;
        }
        map.push((c, zero.clone()));
    }
    Ok(contracted.substitute(&map, m))
}

/// Position in the q_C face product of each chord of C̄ (in increasing order)
/// and of each side.
pub fn q_relabeling(d: &DecoratedDiagram, c: &BTreeSet<usize>) -> Result<(Vec<usize>, Vec<usize>), ArrangementError> {
    let n = d.degree();
    let qp = q_product(d, c)?;
    let l_map = (1..=n).filter(|i| !c.contains(i)).map(|i| qp.l_index[&i]).collect();
    let m_map = (0..=n).map(|s| qp.m_index[&s]).collect();
    Ok((l_map, m_map))
}

/// Check that the restriction to L_C is the product of the q_C face
/// arrangements after the change of variables.
pub fn check_q_isomorphism(d: &DecoratedDiagram, c: &BTreeSet<usize>) -> Result<(), ArrangementError> {
    let lhs = contract_to_q(d, c)?;
    let qp = q_product(d, c)?;
    let (l_map, m_map) = q_relabeling(d, c)?;
    lhs.matches(&qp.product, &l_map, &m_map)
}

/// Delete L(C̄), contract onto M_{S_C^+} solving for the side sources, and
/// compare with from_diagram(r_C(D)) under t_{s_j} = y_j.
pub fn contract_to_r(d: &DecoratedDiagram, c: &BTreeSet<usize>) -> Result<BiArrangement, ArrangementError> {
    let n = d.degree();
    let splus = crate::diagram::s_c_plus(&d.diagram, c).map_err(HopfError::from)?;
    let a = BiArrangement::from_diagram(d)?.delete(Side::L, &chord_set_to_l(c))?;
    let order: Vec<usize> = splus.iter().map(|&s| s - 1).chain((1..=n).filter(|s| !splus.contains(s)).map(|s| s - 1)).collect();
    a.contract_with(Side::M, &splus, &order)
}

/// Position in r_C(D) of each chord of C (increasing) and of each side
/// outside S_C^+ (increasing).
pub fn r_relabeling(d: &DecoratedDiagram, c: &BTreeSet<usize>) -> Result<(Vec<usize>, Vec<usize>), ArrangementError> {
    let n = d.degree();
    let r = r_c(d, c)?;
    let splus = crate::diagram::s_c_plus(&d.diagram, c).map_err(HopfError::from)?;
    let l_map = c.iter().map(|ch| r.chords.iter().position(|x| x == ch).expect("chord")).collect();
    let m_map = (0..=n)
        .filter(|s| !splus.contains(s))
        .map(|s| r.sides.iter().position(|&x| x == s).expect("side"))
        .collect();
    Ok((l_map, m_map))
}

pub fn check_r_isomorphism(d: &DecoratedDiagram, c: &BTreeSet<usize>) -> Result<(), ArrangementError> {
    let lhs = contract_to_r(d, c)?;
    let rhs = BiArrangement::from_diagram(&r_c(d, c)?.diagram)?;
    let (l_map, m_map) = r_relabeling(d, c)?;
    lhs.matches(&rhs, &l_map, &m_map)
}
