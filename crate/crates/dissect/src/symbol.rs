//! Iterated-integral symbols I(a_0; a_1, …, a_n; a_{n+1}) and J-symbols
//! J(a_1, …, a_n; b), with their normalizations from corollas and path trees.

use crate::decoration::DecoratedDiagram;
use crate::diagram::DissectionDiagram;
use crate::scalar::{Mode, Scalar};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ItIntSymbol {
    pub a0: Scalar,
    pub word: Vec<Scalar>,
    pub a_end: Scalar,
}

impl ItIntSymbol {
    pub fn new(a0: Scalar, word: Vec<Scalar>, a_end: Scalar) -> Self {
        ItIntSymbol { a0, word, a_end }
    }

    pub fn weight(&self) -> usize {
        self.word.len()
    }

    /// All entries a_0, …, a_{n+1} in order.
    pub fn entries(&self) -> Vec<Scalar> {
        let mut v = Vec::with_capacity(self.word.len() + 2);
        v.push(self.a0.clone());
        v.extend(self.word.iter().cloned());
        v.push(self.a_end.clone());
        v
    }

    pub fn from_entries(e: &[Scalar]) -> Self {
        let n = e.len();
        assert!(n >= 2, "a symbol has at least two entries");
        ItIntSymbol { a0: e[0].clone(), word: e[1..n - 1].to_vec(), a_end: e[n - 1].clone() }
    }

    /// Pairwise distinct entries (exact modes only; float entries are never certified).
    pub fn is_generic(&self) -> bool {
        let e = self.entries();
        if e.iter().any(|s| s.mode() == Mode::Float) {
            return false;
        }
        for i in 0..e.len() {
            for j in i + 1..e.len() {
                if e[i].sub(&e[j]).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// The symbol of a decorated corolla: I(−b_0; a_1, a_2+b_1, …, a_n+b_1+⋯+b_{n−1}; b_1+⋯+b_n).
    /// Returns `None` if the diagram is not a corolla.
    pub fn from_corolla(d: &DecoratedDiagram) -> Option<Self> {
        let n = d.degree();
        if d.diagram != DissectionDiagram::corolla(n) {
            return None;
        }
        let mut acc = d.b[0].zero_like();
        let mut word = Vec::with_capacity(n);
        for i in 1..=n {
            word.push(d.a[i - 1].add(&acc));
            acc = acc.add(&d.b[i]);
        }
        Some(ItIntSymbol { a0: d.b[0].neg(), word, a_end: acc })
    }

    /// The corolla with chord decorations a_1..a_n, b_0 = −a_0, b_n = a_{n+1}
    /// and all other side decorations zero.
    pub fn to_corolla(&self) -> DecoratedDiagram {
        let n = self.weight();
        let zero = self.a0.zero_like();
        let mut b = vec![zero; n + 1];
        b[0] = self.a0.neg();
        if n == 0 {
            // degree 0: the single side carries a_end − a_0
            b[0] = self.a_end.sub(&self.a0);
        } else {
            b[n] = self.a_end.clone();
        }
        DecoratedDiagram { diagram: DissectionDiagram::corolla(n), a: self.word.clone(), b }
    }

    /// The same integral written with a_{n+1} = 0 (all entries shifted by −a_{n+1}).
    pub fn shifted_to_zero_end(&self) -> Self {
        let e: Vec<Scalar> = self.entries().iter().map(|x| x.sub(&self.a_end)).collect();
        ItIntSymbol::from_entries(&e)
    }

    pub fn substitute(&self, values: &BTreeMap<String, Scalar>, mode: Mode) -> Result<Self, crate::scalar::ScalarError> {
        Ok(ItIntSymbol {
            a0: self.a0.substitute(values, mode)?,
            word: self.word.iter().map(|s| s.substitute(values, mode)).collect::<Result<_, _>>()?,
            a_end: self.a_end.substitute(values, mode)?,
        })
    }
}

impl fmt::Display for ItIntSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w: Vec<String> = self.word.iter().map(|s| s.to_string()).collect();
        write!(f, "I({}; {}; {})", self.a0, w.join(", "), self.a_end)
    }
}

/// J(a_1, …, a_n; b).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JSymbol {
    pub a: Vec<Scalar>,
    pub b: Scalar,
}

impl JSymbol {
    pub fn weight(&self) -> usize {
        self.a.len()
    }

    /// a_i ≠ 0 for all i and a_I ≠ b for all I.
    pub fn is_generic(&self) -> bool {
        let n = self.a.len();
        if self.b.mode() == Mode::Float {
            return false;
        }
        if self.a.iter().any(|x| x.is_zero()) {
            return false;
        }
        for mask in 0u32..(1 << n) {
            let mut s = self.b.zero_like();
            for (i, x) in self.a.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    s = s.add(x);
                }
            }
            if s.sub(&self.b).is_zero() {
                return false;
            }
        }
        true
    }

    /// The symbol of a decorated path tree, after the change of variables that
    /// sets b_1 = ⋯ = b_n = 0: a_i ↦ a_i − b_i and b = −(b_0 + ⋯ + b_n).
    pub fn from_path_tree(d: &DecoratedDiagram) -> Option<Self> {
        let n = d.degree();
        if d.diagram != DissectionDiagram::path_tree(n) {
            return None;
        }
        let a = (1..=n).map(|i| d.a[i - 1].sub(&d.b[i])).collect();
        let mut b = d.b[0].zero_like();
        for x in &d.b {
            b = b.sub(x);
        }
        Some(JSymbol { a, b })
    }

    /// The path tree with b_0 = −b and all other sides zero.
    pub fn to_path_tree(&self) -> DecoratedDiagram {
        let n = self.weight();
        let mut b = vec![self.b.zero_like(); n + 1];
        b[0] = self.b.neg();
        DecoratedDiagram { diagram: DissectionDiagram::path_tree(n), a: self.a.clone(), b }
    }
}

impl fmt::Display for JSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w: Vec<String> = self.a.iter().map(|s| s.to_string()).collect();
        write!(f, "J({}; {})", w.join(", "), self.b)
    }
}

/// Tensor of symbol products: left and right are sorted lists of positive-weight
/// symbols (empty = unit), with integer coefficients.
pub type SymbolTensor<S> = BTreeMap<(Vec<S>, Vec<S>), i64>;

pub(crate) fn add_symbol_term<S: Ord>(t: &mut SymbolTensor<S>, mut l: Vec<S>, mut r: Vec<S>, c: i64) {
    l.sort();
    r.sort();
    let key = (l, r);
    let v = t.get(&key).copied().unwrap_or(0) + c;
    if v == 0 {
        t.remove(&key);
    } else {
        t.insert(key, v);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corolla_round_trip() {
        let s = ItIntSymbol::new(
            Scalar::symbol("z0"),
            vec![Scalar::symbol("z1"), Scalar::symbol("z2")],
            Scalar::symbol("z3"),
        );
        assert!(s.is_generic());
        assert_eq!(ItIntSymbol::from_corolla(&s.to_corolla()).unwrap(), s);
    }

    #[test]
    fn degree_one_normalization() {
        let d = DecoratedDiagram::symbolic(DissectionDiagram::corolla(1));
        let s = ItIntSymbol::from_corolla(&d).unwrap();
        assert_eq!(s.to_string(), "I(-b0; a1; b1)");
    }

    #[test]
    fn path_tree_round_trip() {
        let j = JSymbol { a: vec![Scalar::symbol("u1"), Scalar::symbol("u2")], b: Scalar::symbol("v") };
        assert!(j.is_generic());
        assert_eq!(JSymbol::from_path_tree(&j.to_path_tree()).unwrap(), j);
    }
}
