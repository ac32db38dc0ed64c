//! Monomials, algebra and tensor elements, the coproduct family and the antipode.

use super::ops::{q_c, r_c};
use super::HopfError;
use crate::decoration::DecoratedDiagram;
use crate::diagram::{subsets, DissectionDiagram};
use crate::scalar::Rational;
use num_traits::{One, Pow, Zero};
use std::collections::{BTreeMap, HashMap};
use std::fmt;

/// Polynomial in the coproduct parameter x with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Poly(Vec<Rational>);

impl Poly {
    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn constant(c: Rational) -> Self {
        Poly(vec![c]).trimmed()
    }

    pub fn int(c: i64) -> Self {
        Poly::constant(Rational::from_integer(c.into()))
    }

    /// x^k
    pub fn monomial(k: usize) -> Self {
        let mut v = vec![Rational::zero(); k + 1];
        v[k] = Rational::one();
        Poly(v)
    }

    fn trimmed(mut self) -> Self {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.0
    }

    pub fn from_coefficients(v: Vec<Rational>) -> Self {
        Poly(v).trimmed()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// The constant value, if the polynomial has degree ≤ 0.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.0.len() {
            0 => Some(Rational::zero()),
            1 => Some(self.0[0].clone()),
            _ => None,
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        let v = (0..n)
            .map(|i| {
                let a = self.0.get(i).cloned().unwrap_or_else(Rational::zero);
                let b = o.0.get(i).cloned().unwrap_or_else(Rational::zero);
                a + b
            })
            .collect();
        Poly(v).trimmed()
    }

    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![Rational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Poly(v).trimmed()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*x")?,
                _ => write!(f, "{c}*x^{k}")?,
            }
        }
        Ok(())
    }
}

/// The coproduct parameter: a rational value or the formal variable x.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum XParam {
    Value(Rational),
    Formal,
}

impl XParam {
    pub fn motivic() -> Self {
        XParam::Value(-Rational::one())
    }

    /// x^k as a polynomial coefficient (0^0 = 1).
    pub fn pow(&self, k: usize) -> Poly {
        match self {
            XParam::Formal => Poly::monomial(k),
            XParam::Value(v) => Poly::constant(Pow::pow(v, k as u32)),
        }
    }

    /// Parse "-1", "1/2" or "formal".
    pub fn parse(s: &str) -> Option<Self> {
        if s == "formal" || s == "x" {
            return Some(XParam::Formal);
        }
        crate::scalar::parse_rational(s).map(XParam::Value)
    }
}

/// A commutative product of positive-degree diagrams, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<DecoratedDiagram>);

impl Monomial {
    pub fn unit() -> Self {
        Monomial(Vec::new())
    }

    /// Factors are stored as their translation-class representatives.
    pub fn from_factors<I: IntoIterator<Item = DecoratedDiagram>>(it: I) -> Self {
        let mut v: Vec<DecoratedDiagram> = it.into_iter().filter(|d| d.degree() > 0).map(|d| d.normalized()).collect();
        v.sort();
        Monomial(v)
    }

    pub fn from_diagram(d: DecoratedDiagram) -> Self {
        Monomial::from_factors([d])
    }

    pub fn factors(&self) -> &[DecoratedDiagram] {
        &self.0
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|d| d.degree()).sum()
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let mut v: Vec<DecoratedDiagram> = self.0.iter().chain(o.0.iter()).cloned().collect();
        v.sort();
        Monomial(v)
    }

    pub fn map<F: FnMut(&DecoratedDiagram) -> DecoratedDiagram>(&self, f: F) -> Monomial {
        Monomial::from_factors(self.0.iter().map(f))
    }
}

fn diagram_name(d: &DissectionDiagram) -> String {
    let n = d.degree();
    if *d == DissectionDiagram::corolla(n) {
        format!("X{n}")
    } else if *d == DissectionDiagram::path_tree(n) {
        format!("Y{n}")
    } else {
        let p: Vec<String> = d.parents().iter().map(|x| x.to_string()).collect();
        format!("D[{}]", p.join(","))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|d| {
                let name = diagram_name(&d.diagram);
                if d.is_undecorated() {
                    name
                } else {
                    let a: Vec<String> = d.a.iter().map(|s| s.to_string()).collect();
                    let b: Vec<String> = d.b.iter().map(|s| s.to_string()).collect();
                    format!("{name}(a=[{}]; b=[{}])", a.join(", "), b.join(", "))
                }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

fn add_into<K: Ord>(map: &mut BTreeMap<K, Poly>, key: K, c: &Poly) {
    if c.is_zero() {
        return;
    }
    let entry = map.entry(key).or_default();
    *entry = entry.add(c);
    // drop cancelled entries lazily below
}

fn prune<K: Ord + Clone>(map: &mut BTreeMap<K, Poly>) {
    map.retain(|_, v| !v.is_zero());
}

/// A finite linear combination of monomials.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct AlgebraElement {
    pub terms: BTreeMap<Monomial, Poly>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn unit() -> Self {
        Self::from_monomial(Monomial::unit())
    }

    pub fn from_monomial(m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(m, Poly::int(1));
        AlgebraElement { terms }
    }

    pub fn from_diagram(d: DecoratedDiagram) -> Self {
        Self::from_monomial(Monomial::from_diagram(d))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: &Poly) {
        add_into(&mut self.terms, m, c);
        prune(&mut self.terms);
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            add_into(&mut out.terms, m.clone(), c);
        }
        prune(&mut out.terms);
        out
    }

    pub fn scale(&self, c: &Poly) -> Self {
        let mut out = Self::zero();
        for (m, d) in &self.terms {
            add_into(&mut out.terms, m.clone(), &d.mul(c));
        }
        prune(&mut out.terms);
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&Poly::int(-1))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                add_into(&mut out.terms, m1.mul(m2), &c1.mul(c2));
            }
        }
        prune(&mut out.terms);
        out
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("({c}) {m}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A finite linear combination of tensor pairs of monomials.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TensorElement {
    pub terms: BTreeMap<(Monomial, Monomial), Poly>,
}

impl TensorElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn unit() -> Self {
        let mut t = Self::zero();
        t.add_term(Monomial::unit(), Monomial::unit(), &Poly::int(1));
        t
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, l: Monomial, r: Monomial, c: &Poly) {
        add_into(&mut self.terms, (l, r), c);
        prune(&mut self.terms);
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &o.terms {
            add_into(&mut out.terms, k.clone(), c);
        }
        prune(&mut out.terms);
        out
    }

    pub fn scale(&self, c: &Poly) -> Self {
        let mut out = Self::zero();
        for (k, d) in &self.terms {
            add_into(&mut out.terms, k.clone(), &d.mul(c));
        }
        prune(&mut out.terms);
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        for ((l1, r1), c1) in &self.terms {
            for ((l2, r2), c2) in &o.terms {
                add_into(&mut out.terms, (l1.mul(l2), r1.mul(r2)), &c1.mul(c2));
            }
        }
        prune(&mut out.terms);
        out
    }

    /// Terms of bidegree (p, q).
    pub fn component(&self, p: usize, q: usize) -> TensorElement {
        TensorElement {
            terms: self
                .terms
                .iter()
                .filter(|((l, r), _)| l.degree() == p && r.degree() == q)
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    /// Apply a diagram map to both tensor factors.
    pub fn map_diagrams<F: FnMut(&DecoratedDiagram) -> DecoratedDiagram>(&self, mut f: F) -> TensorElement {
        let mut out = Self::zero();
        for ((l, r), c) in &self.terms {
            add_into(&mut out.terms, (l.map(&mut f), r.map(&mut f)), c);
        }
        prune(&mut out.terms);
        out
    }
}

impl fmt::Display for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|((l, r), c)| format!("({c}) {l} ⊗ {r}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Elements of the triple tensor power, for coassociativity.
pub type TripleElement = BTreeMap<(Monomial, Monomial, Monomial), Poly>;

/// Δ^(x)(D) = Σ_C x^{k_C(D)} q_C(D) ⊗ r_C(D).
pub fn coproduct_diagram(x: &XParam, d: &DecoratedDiagram) -> Result<TensorElement, HopfError> {
    let n = d.degree();
    let mut out = TensorElement::zero();
    if n == 0 {
        return Ok(TensorElement::unit());
    }
    for c in subsets(n) {
        let q = q_c(d, &c)?;
        let r = r_c(d, &c)?;
        add_into(&mut out.terms, (q, Monomial::from_diagram(r.diagram)), &x.pow(r.k));
    }
    prune(&mut out.terms);
    Ok(out)
}

/// Δ extended multiplicatively to a monomial.
pub fn coproduct_monomial(x: &XParam, m: &Monomial) -> Result<TensorElement, HopfError> {
    let mut acc = TensorElement::unit();
    for d in m.factors() {
        acc = acc.mul(&coproduct_diagram(x, d)?);
    }
    Ok(acc)
}

/// Δ extended linearly to algebra elements.
pub fn coproduct(x: &XParam, e: &AlgebraElement) -> Result<TensorElement, HopfError> {
    let mut out = TensorElement::zero();
    for (m, c) in &e.terms {
        out = out.add(&coproduct_monomial(x, m)?.scale(c));
    }
    Ok(out)
}

/// (Δ ⊗ id) applied to a tensor element.
pub fn delta_tensor_id(x: &XParam, t: &TensorElement) -> Result<TripleElement, HopfError> {
    let mut out = TripleElement::new();
    for ((l, r), c) in &t.terms {
        for ((a, b), c2) in &coproduct_monomial(x, l)?.terms {
            add_into(&mut out, (a.clone(), b.clone(), r.clone()), &c.mul(c2));
        }
    }
    prune(&mut out);
    Ok(out)
}

/// (id ⊗ Δ) applied to a tensor element.
pub fn id_tensor_delta(x: &XParam, t: &TensorElement) -> Result<TripleElement, HopfError> {
    let mut out = TripleElement::new();
    for ((l, r), c) in &t.terms {
        for ((a, b), c2) in &coproduct_monomial(x, r)?.terms {
            add_into(&mut out, (l.clone(), a.clone(), b.clone()), &c.mul(c2));
        }
    }
    prune(&mut out);
    Ok(out)
}

fn antipode_diagram(
    x: &XParam,
    d: &DecoratedDiagram,
    memo: &mut HashMap<DecoratedDiagram, AlgebraElement>,
) -> Result<AlgebraElement, HopfError> {
    if d.degree() == 0 {
        return Ok(AlgebraElement::unit());
    }
    if let Some(s) = memo.get(d) {
        return Ok(s.clone());
    }
    let me = Monomial::from_diagram(d.clone());
    let mut s = AlgebraElement::from_monomial(me.clone()).neg();
    for ((l, r), c) in &coproduct_diagram(x, d)?.terms {
        // the two extreme terms D⊗1 and 1⊗D are stripped
        if l.is_unit() || r.is_unit() {
            continue;
        }
        let sl = antipode_monomial_memo(x, l, memo)?;
        let term = sl.mul(&AlgebraElement::from_monomial(r.clone())).scale(c);
        s = s.add(&term.neg());
    }
    memo.insert(d.clone(), s.clone());
    Ok(s)
}

fn antipode_monomial_memo(
    x: &XParam,
    m: &Monomial,
    memo: &mut HashMap<DecoratedDiagram, AlgebraElement>,
) -> Result<AlgebraElement, HopfError> {
    let mut acc = AlgebraElement::unit();
    for d in m.factors() {
        acc = acc.mul(&antipode_diagram(x, d, memo)?);
    }
    Ok(acc)
}

pub fn antipode_monomial(x: &XParam, m: &Monomial) -> Result<AlgebraElement, HopfError> {
    antipode_monomial_memo(x, m, &mut HashMap::new())
}

/// The antipode of Δ^(x), by the graded-connected recursion.
pub fn antipode(x: &XParam, e: &AlgebraElement) -> Result<AlgebraElement, HopfError> {
    let mut memo = HashMap::new();
    let mut out = AlgebraElement::zero();
    for (m, c) in &e.terms {
        out = out.add(&antipode_monomial_memo(x, m, &mut memo)?.scale(c));
    }
    Ok(out)
}

/// m ∘ (S ⊗ id) ∘ Δ applied to a diagram.
pub fn convolution_s_id(x: &XParam, d: &DecoratedDiagram) -> Result<AlgebraElement, HopfError> {
    let mut memo = HashMap::new();
    let mut out = AlgebraElement::zero();
    for ((l, r), c) in &coproduct_diagram(x, d)?.terms {
        let sl = antipode_monomial_memo(x, l, &mut memo)?;
        out = out.add(&sl.mul(&AlgebraElement::from_monomial(r.clone())).scale(c));
    }
    Ok(out)
}

/// m ∘ (id ⊗ S) ∘ Δ applied to a diagram.
pub fn convolution_id_s(x: &XParam, d: &DecoratedDiagram) -> Result<AlgebraElement, HopfError> {
    let mut memo = HashMap::new();
    let mut out = AlgebraElement::zero();
    for ((l, r), c) in &coproduct_diagram(x, d)?.terms {
        let sr = antipode_monomial_memo(x, r, &mut memo)?;
        out = out.add(&AlgebraElement::from_monomial(l.clone()).mul(&sr).scale(c));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn und(d: DissectionDiagram) -> Monomial {
        Monomial::from_diagram(DecoratedDiagram::undecorated(d))
    }

    #[test]
    fn coproduct_of_x3() {
        let x3 = DecoratedDiagram::undecorated(DissectionDiagram::corolla(3));
        let got = coproduct_diagram(&XParam::motivic(), &x3).unwrap();
        let x1 = und(DissectionDiagram::corolla(1));
        let x2 = und(DissectionDiagram::corolla(2));
        let x3m = und(DissectionDiagram::corolla(3));
        let mut want = TensorElement::zero();
        want.add_term(Monomial::unit(), x3m.clone(), &Poly::int(1));
        want.add_term(x1.clone(), x2.clone(), &Poly::int(3));
        want.add_term(x2.clone(), x1.clone(), &Poly::int(2));
        want.add_term(x1.mul(&x1), x1.clone(), &Poly::int(1));
        want.add_term(x3m, Monomial::unit(), &Poly::int(1));
        assert_eq!(got, want);
    }

    #[test]
    fn antipode_small_cases() {
        let x = XParam::motivic();
        assert_eq!(antipode(&x, &AlgebraElement::unit()).unwrap(), AlgebraElement::unit());
        let x1 = AlgebraElement::from_diagram(DecoratedDiagram::undecorated(DissectionDiagram::corolla(1)));
        assert_eq!(antipode(&x, &x1).unwrap(), x1.neg());
    }

    #[test]
    fn poly_arithmetic() {
        let p = Poly::monomial(1).add(&Poly::int(1));
        let sq = p.mul(&p);
        assert_eq!(sq.coefficients().len(), 3);
        assert_eq!(sq.eval(&Rational::from_integer(2.into())), Rational::from_integer(9.into()));
        assert!(p.add(&p.neg()).is_zero());
        assert_eq!(XParam::Value(Rational::zero()).pow(0), Poly::int(1));
    }
}
