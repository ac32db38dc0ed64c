//! Exact linear algebra: fraction-free elimination for ranks and consistency,
//! and a rational row-reduced basis for quotient computations.

use crate::scalar::{Rational, Scalar};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

/// Outcome of eliminating a linear system `A t = rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Elimination {
    pub rank: usize,
    pub consistent: bool,
}

/// Clear denominators of a rational row, scaling the right-hand side alike.
fn integer_row(row: &[Rational], rhs: &Scalar) -> (Vec<BigInt>, Scalar) {
    let mut l = BigInt::one();
    for x in row {
        l = l.lcm(x.denom());
    }
    let lr = Rational::from_integer(l.clone());
    let ints = row.iter().map(|x| (x * &lr).to_integer()).collect();
    (ints, rhs.scale(&lr))
}

/// Bareiss fraction-free echelon reduction of an augmented system.
pub fn eliminate(rows: &[(Vec<Rational>, Scalar)], ncols: usize) -> Elimination {
    let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(rows.len());
    let mut b: Vec<Scalar> = Vec::with_capacity(rows.len());
    for (row, rhs) in rows {
        debug_assert_eq!(row.len(), ncols);
        let (r, s) = integer_row(row, rhs);
        a.push(r);
        b.push(s);
    }
    let m = a.len();
    let mut prev = BigInt::one();
    let mut r = 0;
    for col in 0..ncols {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        b.swap(r, p);
        let piv = a[r][col].clone();
        let prev_r = Rational::from_integer(prev.clone());
        for i in r + 1..m {
            let f = a[i][col].clone();
            for j in col + 1..ncols {
                let num = &piv * &a[i][j] - &f * &a[r][j];
                let (q, rem) = num.div_rem(&prev);
                debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                a[i][j] = q;
            }
            a[i][col] = BigInt::zero();
            let t = b[i]
                .scale(&Rational::from_integer(piv.clone()))
                .sub(&b[r].scale(&Rational::from_integer(f)));
            b[i] = t.scale(&(Rational::one() / &prev_r));
        }
        prev = piv;
        r += 1;
    }
    let consistent = b[r..].iter().all(|s| s.is_zero());
    Elimination { rank: r, consistent }
}

/// Rank of a rational matrix by fraction-free elimination.
pub fn rank(rows: &[Vec<Rational>], ncols: usize) -> usize {
    let aug: Vec<(Vec<Rational>, Scalar)> = rows
        .iter()
        .map(|r| (r.clone(), Scalar::Rational(Rational::zero())))
        .collect();
    eliminate(&aug, ncols).rank
}

/// Row-reduced echelon data over the rationals, with columns processed in a
/// caller-chosen priority order.
#[derive(Clone, Debug)]
pub struct Reducer {
    pub ncols: usize,
    /// (pivot column, row with 1 at pivot and 0 at every other pivot column)
    pub rows: Vec<(usize, Vec<Rational>)>,
}

impl Reducer {
    pub fn new(ncols: usize) -> Self {
        Reducer { ncols, rows: Vec::new() }
    }

    /// Build from rows, choosing pivots by scanning `order`.
    pub fn from_rows(rows: &[Vec<Rational>], ncols: usize, order: &[usize]) -> Self {
        let mut red = Reducer::new(ncols);
        for row in rows {
            red.insert(row.clone(), order);
        }
        red
    }

    /// Reduce `v` against the stored rows; returns the remainder.
    pub fn reduce(&self, v: &[Rational]) -> Vec<Rational> {
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            for (x, y) in v.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        v
    }

    /// Add a row; returns false when it was already in the span.
    pub fn insert(&mut self, row: Vec<Rational>, order: &[usize]) -> bool {
        let v = self.reduce(&row);
        let Some(&p) = order.iter().find(|&&c| !v[c].is_zero()) else {
            return false;
        };
        let inv = Rational::one() / &v[p];
        let v: Vec<Rational> = v.into_iter().map(|x| x * &inv).collect();
        for (_, r) in self.rows.iter_mut() {
            if r[p].is_zero() {
                continue;
            }
            let f = r[p].clone();
            for (x, y) in r.iter_mut().zip(&v) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        self.rows.push((p, v));
        true
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|(p, _)| *p).collect()
    }
}

/// Solve a consistent augmented system for the variables in `pivot_order`
/// priority. Returns, for each pivot variable, its expression
/// `t_p = sum_f coef_f t_f + constant` over the free variables, or `None` when
/// the system is inconsistent.
pub struct Solution {
    pub pivots: Vec<usize>,
    pub free: Vec<usize>,
    /// Indexed like `pivots`: (coefficients indexed like `free`, constant).
    pub expr: Vec<(Vec<Rational>, Scalar)>,
}

pub fn solve(rows: &[(Vec<Rational>, Scalar)], ncols: usize, order: &[usize]) -> Option<Solution> {
    // Work on rows with the constant carried alongside.
    let mut work: Vec<(usize, Vec<Rational>, Scalar)> = Vec::new();
    for (row, c) in rows {
        let mut v = row.clone();
        let mut k = c.clone();
        for (p, r, rc) in &work {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            for (x, y) in v.iter_mut().zip(r) {
                *x -= &f * y;
            }
            k = k.sub(&rc.scale(&f));
        }
        match order.iter().find(|&&col| !v[col].is_zero()) {
            None => {
                if !k.is_zero() {
                    return None;
                }
            }
            Some(&p) => {
                let inv = Rational::one() / &v[p];
                let v: Vec<Rational> = v.into_iter().map(|x| x * &inv).collect();
                let k = k.scale(&inv);
                for (_, r, rc) in work.iter_mut() {
                    if r[p].is_zero() {
                        continue;
                    }
                    let f = r[p].clone();
                    for (x, y) in r.iter_mut().zip(&v) {
                        *x -= &f * y;
                    }
                    *rc = rc.sub(&k.scale(&f));
                }
                work.push((p, v, k));
            }
        }
    }
    let pivots: Vec<usize> = work.iter().map(|(p, _, _)| *p).collect();
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    // Row reads t_p + sum_f r_f t_f + k = 0 with the convention form = coeffs.t + const.
    let expr = work
        .iter()
        .map(|(_, r, k)| (free.iter().map(|&f| -r[f].clone()).collect(), k.neg()))
        .collect();
    Some(Solution { pivots, free, expr })
}
