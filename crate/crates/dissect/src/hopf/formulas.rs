//! Closed coproduct formulas: corollas, path trees, iterated integrals and
//! J-polylogarithms. None of these call the general coproduct.

use super::algebra::{Monomial, Poly, TensorElement};
use super::HopfError;
use crate::decoration::DecoratedDiagram;
use crate::diagram::{subsets, DissectionDiagram};
use crate::scalar::Scalar;
use crate::symbol::{add_symbol_term, ItIntSymbol, JSymbol};

pub use crate::symbol::SymbolTensor;

fn check_arity(n: usize, a: &[Scalar], b: &[Scalar]) -> Result<(), HopfError> {
    if a.len() != n || b.len() != n + 1 {
        return Err(crate::decoration::DecorationError::Arity { expected: n, got: a.len() }.into());
    }
    Ok(())
}

/// The corolla X_n with the given decorations.
pub fn corolla_decorated(a: Vec<Scalar>, b: Vec<Scalar>) -> Result<DecoratedDiagram, HopfError> {
    check_arity(a.len(), &a, &b)?;
    Ok(DecoratedDiagram::new(DissectionDiagram::corolla(a.len()), a, b)?)
}

/// The path tree Y_n with the given decorations.
pub fn path_tree_decorated(a: Vec<Scalar>, b: Vec<Scalar>) -> Result<DecoratedDiagram, HopfError> {
    check_arity(a.len(), &a, &b)?;
    Ok(DecoratedDiagram::new(DissectionDiagram::path_tree(a.len()), a, b)?)
}

fn weak_compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in weak_compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn undecorated(d: DissectionDiagram) -> DecoratedDiagram {
    DecoratedDiagram::undecorated(d)
}

/// Δ(X_n) = Σ_k Σ_{i_0+⋯+i_k = n−k} X_{i_0}⋯X_{i_k} ⊗ X_k (undecorated).
pub fn x_closed_formula(n: usize) -> TensorElement {
    let mut t = TensorElement::zero();
    for k in 0..=n {
        for comp in weak_compositions(n - k, k + 1) {
            let left = Monomial::from_factors(comp.iter().map(|&i| undecorated(DissectionDiagram::corolla(i))));
            let right = Monomial::from_diagram(undecorated(DissectionDiagram::corolla(k)));
            t.add_term(left, right, &Poly::int(1));
        }
    }
    t
}

/// Δ(Y_n) = Σ_k C(n,k) Y_{n−k} ⊗ Y_k (undecorated).
pub fn y_closed_formula(n: usize) -> TensorElement {
    let mut t = TensorElement::zero();
    let mut binom: i64 = 1;
    for k in 0..=n {
        let left = Monomial::from_diagram(undecorated(DissectionDiagram::path_tree(n - k)));
        let right = Monomial::from_diagram(undecorated(DissectionDiagram::path_tree(k)));
        t.add_term(left, right, &Poly::int(binom));
        binom = binom * (n - k) as i64 / (k + 1) as i64;
    }
    t
}

/// Goncharov's formula: Σ over 0 = i_0 < i_1 < ⋯ < i_k < i_{k+1} = n+1 of
/// Π_s I(a_{i_s}; …; a_{i_{s+1}}) ⊗ I(a_0; a_{i_1}, …, a_{i_k}; a_{n+1}).
pub fn goncharov_coproduct(sym: &ItIntSymbol) -> Result<SymbolTensor<ItIntSymbol>, HopfError> {
    if !sym.is_generic() {
        return Err(HopfError::NonGeneric(sym.to_string()));
    }
    let e = sym.entries();
    let n = sym.weight();
    let mut out = SymbolTensor::new();
    for c in subsets(n) {
        let mut cuts = vec![0usize];
        cuts.extend(c.iter().copied());
        cuts.push(n + 1);
        let left: Vec<ItIntSymbol> = cuts
            .windows(2)
            .filter(|w| w[1] - w[0] >= 2)
            .map(|w| ItIntSymbol::from_entries(&e[w[0]..=w[1]]))
            .collect();
        let right = if c.is_empty() {
            vec![]
        } else {
            let ent: Vec<Scalar> = cuts.iter().map(|&i| e[i].clone()).collect();
            vec![ItIntSymbol::from_entries(&ent)]
        };
        add_symbol_term(&mut out, left, right, 1);
    }
    Ok(out)
}

/// Σ_{I ⊆ {1..n}} J(a(Ī); b − a_I) ⊗ J(a(I); b).
pub fn j_coproduct(a: &[Scalar], b: &Scalar) -> Result<SymbolTensor<JSymbol>, HopfError> {
    let whole = JSymbol { a: a.to_vec(), b: b.clone() };
    if !whole.is_generic() {
        return Err(HopfError::NonGeneric(whole.to_string()));
    }
    let n = a.len();
    let mut out = SymbolTensor::new();
    for i in subsets(n) {
        let inside: Vec<Scalar> = i.iter().map(|&k| a[k - 1].clone()).collect();
        let outside: Vec<Scalar> = (1..=n).filter(|k| !i.contains(k)).map(|k| a[k - 1].clone()).collect();
        let mut a_i = b.zero_like();
        for x in &inside {
            a_i = a_i.add(x);
        }
        let left = if outside.is_empty() { vec![] } else { vec![JSymbol { a: outside, b: b.sub(&a_i) }] };
        let right = if inside.is_empty() { vec![] } else { vec![JSymbol { a: inside, b: b.clone() }] };
        add_symbol_term(&mut out, left, right, 1);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn x3_formula_has_five_terms() {
        assert_eq!(x_closed_formula(3).terms.len(), 5);
    }

    #[test]
    fn degree_one_goncharov_is_primitive() {
        let s = ItIntSymbol::new(Scalar::symbol("p"), vec![Scalar::symbol("q")], Scalar::symbol("r"));
        let t = goncharov_coproduct(&s).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t[&(vec![], vec![s.clone()])], 1);
        assert_eq!(t[&(vec![s.clone()], vec![])], 1);
    }

    #[test]
    fn j_degree_one() {
        let t = j_coproduct(&[Scalar::symbol("u")], &Scalar::symbol("v")).unwrap();
        assert_eq!(t.len(), 2);
    }
}
