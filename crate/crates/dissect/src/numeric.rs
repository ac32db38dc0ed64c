//! Numerical evaluation of iterated integrals along explicit polylines in ℂ.

use crate::decoration::DecoratedDiagram;
use crate::reduction::{reduce, ReductionError};
use crate::scalar::{Mode, Scalar, ScalarError};
use crate::symbol::ItIntSymbol;
use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::num::NonZeroUsize;

type C = Complex64;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum NumericError {
    #[error("endpoint {0} is too close to a singularity for the requested clearance")]
    EndpointTooClose(C),
    #[error("path comes within {distance:e} of singularity {point}, below the clearance {clearance:e}")]
    ClearanceViolation { point: C, distance: f64, clearance: f64 },
    #[error("quadrature did not converge after {0} refinements")]
    NonConvergence(usize),
    #[error("degenerate arguments: {0}")]
    Degenerate(String),
    #[error("path runs from {start} to {end}, the symbol from {a0} to {a_end}")]
    EndpointMismatch { start: C, end: C, a0: C, a_end: C },
    #[error("entry {0} has no numeric value")]
    NotNumeric(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// A polyline in ℂ with a declared clearance from the singularities it avoids.
#[derive(Clone, Debug, PartialEq)]
pub struct CPath {
    pub waypoints: Vec<C>,
    pub clearance: f64,
}

fn segment_distance(p: C, a: C, b: C) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = (((p - a) * d.conj()).re / len2).clamp(0.0, 1.0);
    (p - (a + d * t)).norm()
}

impl CPath {
    /// A path through the given waypoints, checked against the singularities.
    pub fn new(waypoints: Vec<C>, clearance: f64, singularities: &[C]) -> Result<Self, NumericError> {
        if waypoints.is_empty() || !(clearance > 0.0) {
            return Err(NumericError::Config("a path needs waypoints and a positive clearance".into()));
        }
        let p = CPath { waypoints, clearance };
        p.check(singularities)?;
        Ok(p)
    }

    pub fn start(&self) -> C {
        self.waypoints[0]
    }

    pub fn end(&self) -> C {
        *self.waypoints.last().expect("nonempty path")
    }

    pub fn segments(&self) -> impl Iterator<Item = (C, C)> + '_ {
        self.waypoints.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn distance_to(&self, p: C) -> f64 {
        if self.waypoints.len() == 1 {
            return (p - self.waypoints[0]).norm();
        }
        self.segments().map(|(a, b)| segment_distance(p, a, b)).fold(f64::INFINITY, f64::min)
    }

    pub fn check(&self, singularities: &[C]) -> Result<(), NumericError> {
        for &s in singularities {
            let distance = self.distance_to(s);
            if distance < self.clearance * (1.0 - 1e-12) {
                return Err(NumericError::ClearanceViolation { point: s, distance, clearance: self.clearance });
            }
        }
        Ok(())
    }

    /// Number of turns of the path around `a` beyond the principal argument
    /// of (a − end)/(a − start), the ratio used by [`eval_degree1_closed`].
    pub fn winding_about(&self, a: C) -> i64 {
        let total: f64 = self.segments().map(|(u, v)| ((v - a) / (u - a)).arg()).sum();
        let principal = ((a - self.end()) / (a - self.start())).arg();
        ((total - principal) / (2.0 * PI)).round() as i64
    }

    /// γ1·γ2; the end of `self` must be the start of `other`.
    pub fn concat(&self, other: &CPath) -> Result<CPath, NumericError> {
        if (self.end() - other.start()).norm() > 1e-12 * (1.0 + self.end().norm()) {
            return Err(NumericError::Config("paths do not compose".into()));
        }
        let mut w = self.waypoints.clone();
        w.extend_from_slice(&other.waypoints[1..]);
        Ok(CPath { waypoints: w, clearance: self.clearance.min(other.clearance) })
    }
}

/// Half the distance from the segment z0–z1 to the nearest singularity,
/// floored at 1e−3.
pub fn default_clearance(z0: C, z1: C, singularities: &[C]) -> f64 {
    let d = singularities.iter().map(|&s| segment_distance(s, z0, z1)).fold(f64::INFINITY, f64::min);
    if d.is_infinite() {
        1.0
    } else {
        (0.5 * d).max(1e-3)
    }
}

const ARC_STEPS: usize = 12;

/// Straight segment z0→z1, with a polyline half-circle of radius 2δ around
/// every singularity closer than δ. The detour passes on the side away from
/// the singularity (to the left when it lies on the segment).
pub fn build_path(z0: C, z1: C, singularities: &[C], delta: f64) -> Result<CPath, NumericError> {
    if !(delta > 0.0) {
        return Err(NumericError::Config("clearance must be positive".into()));
    }
    for &s in singularities {
        if (z0 - s).norm() < delta {
            return Err(NumericError::EndpointTooClose(z0));
        }
        if (z1 - s).norm() < delta {
            return Err(NumericError::EndpointTooClose(z1));
        }
    }
    let len = (z1 - z0).norm();
    if len == 0.0 {
        return CPath::new(vec![z0, z1], delta, singularities);
    }
    let u = (z1 - z0) / len;
    let r = 2.0 * delta;
    // (along, across) coordinates of the violating singularities
    let mut hits: Vec<(f64, f64, C)> = singularities
        .iter()
        .filter(|&&s| segment_distance(s, z0, z1) < delta)
        .map(|&s| {
            let w = (s - z0) * u.conj();
            (w.re, w.im, s)
        })
        .collect();
    hits.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut pts = vec![z0];
    for (x, h, s) in hits {
        let half = (r * r - h * h).sqrt();
        if x - half <= 0.0 {
            return Err(NumericError::EndpointTooClose(z0));
        }
        if x + half >= len {
            return Err(NumericError::EndpointTooClose(z1));
        }
        let side = if h > 0.0 { -1.0 } else { 1.0 };
        let t_in = (z0 + u * (x - half) - s).arg();
        let t_out = (z0 + u * (x + half) - s).arg();
        let mid = (u * C::new(0.0, side)).arg();
        let ccw = |from: f64, to: f64| (to - from).rem_euclid(2.0 * PI);
        let sweep = if ccw(t_in, mid) < ccw(t_in, t_out) { ccw(t_in, t_out) } else { ccw(t_in, t_out) - 2.0 * PI };
        for k in 0..=ARC_STEPS {
            let th = t_in + sweep * k as f64 / ARC_STEPS as f64;
            pts.push(s + C::from_polar(r, th));
        }
    }
    pts.push(z1);
    CPath::new(pts, delta, singularities)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureConfig {
    /// Gauss–Legendre nodes per panel.
    pub nodes: usize,
    /// Relative tolerance between successive refinements.
    pub tol: f64,
    /// Maximum number of panel doublings.
    pub max_depth: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig { nodes: 16, tol: 1e-12, max_depth: 14 }
    }
}

impl QuadratureConfig {
    fn validate(&self) -> Result<(), NumericError> {
        if self.nodes == 0 || !(self.tol > 0.0) || self.max_depth == 0 {
            return Err(NumericError::Config("nodes, tol and max_depth must be positive".into()));
        }
        Ok(())
    }
}

/// Nodes, weights and the spectral integration matrix on [−1, 1]:
/// s[i][k] = ∫_{−1}^{x_i} ℓ_k.
struct Rule {
    x: Vec<f64>,
    w: Vec<f64>,
    s: Vec<Vec<f64>>,
}

fn legendre_values(x: f64, m: usize) -> Vec<f64> {
    let mut p = vec![1.0, x];
    for k in 1..m {
        let next = ((2 * k + 1) as f64 * x * p[k] - k as f64 * p[k - 1]) / (k + 1) as f64;
        p.push(next);
    }
    p.truncate(m + 1);
    p
}

impl Rule {
    fn new(p: usize) -> Rule {
        let gl = GaussLegendre::new(NonZeroUsize::new(p).expect("positive node count"));
        let (x, w): (Vec<f64>, Vec<f64>) = gl.as_node_weight_pairs().iter().copied().unzip();
        let px: Vec<Vec<f64>> = x.iter().map(|&t| legendre_values(t, p)).collect();
        let s = (0..p)
            .map(|i| {
                (0..p)
                    .map(|k| {
                        let mut acc = px[i][1] + 1.0;
                        for m in 1..p {
                            acc += px[k][m] * (px[i][m + 1] - px[i][m - 1]);
                        }
                        0.5 * w[k] * acc
                    })
                    .collect()
            })
            .collect();
        Rule { x, w, s }
    }
}

fn complex_entry(s: &Scalar) -> Result<C, NumericError> {
    s.to_complex().ok_or_else(|| NumericError::NotNumeric(s.to_string()))
}

/// G_n(1) for the letters `a` along the polyline. A segment gets `refine`
/// times (length / distance to the letters) panels.
fn propagate(path: &CPath, a: &[C], rule: &Rule, refine: usize) -> C {
    let n = a.len();
    let p = rule.x.len();
    let mut g = vec![C::new(0.0, 0.0); n + 1];
    g[0] = C::new(1.0, 0.0);
    let mut prev = vec![C::new(0.0, 0.0); p];
    let mut cur = vec![C::new(0.0, 0.0); p];
    let mut f = vec![C::new(0.0, 0.0); p];
    for (za, zb) in path.segments() {
        let dz = zb - za;
        let near = a.iter().map(|&s| segment_distance(s, za, zb)).fold(f64::INFINITY, f64::min);
        let base = if near.is_finite() { (dz.norm() / near).ceil().max(1.0) as usize } else { 1 };
        let m = base * refine;
        let h = 0.5 / m as f64;
        for panel in 0..m {
            let mid = (panel as f64 + 0.5) / m as f64;
            let z: Vec<C> = rule.x.iter().map(|&x| za + dz * (mid + h * x)).collect();
            prev.iter_mut().for_each(|v| *v = g[0]);
            for j in 1..=n {
                for i in 0..p {
                    f[i] = prev[i] * dz / (z[i] - a[j - 1]);
                }
                let mut total = C::new(0.0, 0.0);
                for i in 0..p {
                    let mut acc = C::new(0.0, 0.0);
                    for k in 0..p {
                        acc += f[k] * rule.s[i][k];
                    }
                    cur[i] = g[j] + acc * h;
                    total += f[i] * rule.w[i];
                }
                g[j] += total * h;
                std::mem::swap(&mut prev, &mut cur);
            }
        }
    }
    g[n]
}

fn two_pi_i_pow(n: usize) -> C {
    C::new(0.0, 2.0 * PI).powu(n as u32)
}

/// (2πi)^{−n} ∫ over {0 ≤ s_1 ≤ ⋯ ≤ s_n ≤ 1} of Π dγ(s_k)/(γ(s_k) − a_k).
pub fn eval_iterint(sym: &ItIntSymbol, path: &CPath, cfg: &QuadratureConfig) -> Result<C, NumericError> {
    cfg.validate()?;
    let a0 = complex_entry(&sym.a0)?;
    let a_end = complex_entry(&sym.a_end)?;
    let word: Vec<C> = sym.word.iter().map(complex_entry).collect::<Result<_, _>>()?;
    let scale = 1.0 + a0.norm() + a_end.norm();
    if (path.start() - a0).norm() > 1e-12 * scale || (path.end() - a_end).norm() > 1e-12 * scale {
        return Err(NumericError::EndpointMismatch { start: path.start(), end: path.end(), a0, a_end });
    }
    if word.is_empty() {
        return Ok(C::new(1.0, 0.0));
    }
    path.check(&word)?;
    let rule = Rule::new(cfg.nodes);
    let mut last = propagate(path, &word, &rule, 1);
    let mut refine = 1;
    for _ in 0..cfg.max_depth {
        refine *= 2;
        let next = propagate(path, &word, &rule, refine);
        if (next - last).norm() <= cfg.tol * next.norm().max(1.0) {
            return Ok(next / two_pi_i_pow(word.len()));
        }
        last = next;
    }
    Err(NumericError::NonConvergence(cfg.max_depth))
}

/// (1/2πi)·Log((a_1 − b_1)/(a_1 + b_0)) + winding.
pub fn eval_degree1_closed(a1: C, b0: C, b1: C, winding: i64) -> Result<C, NumericError> {
    if a1 + b0 == C::new(0.0, 0.0) || a1 - b1 == C::new(0.0, 0.0) {
        return Err(NumericError::Degenerate("a_1 + b_0 and a_1 − b_1 must be nonzero".into()));
    }
    Ok(((a1 - b1) / (a1 + b0)).ln() / C::new(0.0, 2.0 * PI) + winding as f64)
}

/// How the paths of a dissection evaluation are chosen.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PathPlan {
    /// Fixed clearance; per-symbol default when absent.
    pub clearance: Option<f64>,
    pub quadrature: QuadratureConfig,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvalTerm {
    pub coeff: i64,
    pub symbol: ItIntSymbol,
    pub path: CPath,
    pub value: C,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvalRecord {
    pub value: C,
    pub terms: Vec<EvalTerm>,
}

/// Statement of the homology class an evaluation stands for.
pub const CLASS_NOTE: &str =
    "each symbol is integrated along its recorded polyline from a_0 to a_{n+1}; the total is the value for that choice of classes";

/// Reduce D symbolically, substitute its decorations and integrate every
/// symbol along `build_path` from a_0 to a_{n+1}.
pub fn eval_dissection(d: &DecoratedDiagram, plan: &PathPlan) -> Result<EvalRecord, NumericError> {
    let mode = d.mode();
    if mode == Mode::Formal {
        return Err(NumericError::NotNumeric("formal decorations".into()));
    }
    let symbolic = DecoratedDiagram::symbolic(d.diagram.clone());
    let mut values = BTreeMap::new();
    for (i, a) in d.a.iter().enumerate() {
        values.insert(format!("a{}", i + 1), a.clone());
    }
    for (j, b) in d.b.iter().enumerate() {
        values.insert(format!("b{j}"), b.clone());
    }
    let sum = reduce(&symbolic)?.substitute(&values, mode)?;
    let mut value = C::new(0.0, 0.0);
    let mut terms = Vec::with_capacity(sum.len());
    for (sym, &coeff) in sum.iter() {
        let a0 = complex_entry(&sym.a0)?;
        let a_end = complex_entry(&sym.a_end)?;
        let word: Vec<C> = sym.word.iter().map(complex_entry).collect::<Result<_, _>>()?;
        let delta = plan.clearance.unwrap_or_else(|| default_clearance(a0, a_end, &word));
        let path = build_path(a0, a_end, &word, delta)?;
        let v = eval_iterint(sym, &path, &plan.quadrature)?;
        value += v * coeff as f64;
        terms.push(EvalTerm { coeff, symbol: sym.clone(), path, value: v });
    }
    Ok(EvalRecord { value, terms })
}

/// ∫ of ω_D over the affine simplex t(s) whose faces lie on the side
/// hyperplanes: t_j = b_j + ⋯ + b_n − B(1 − s_j), B the sum of all side
/// decorations, 0 ≤ s_1 ≤ ⋯ ≤ s_n ≤ 1. Nested Gauss–Legendre with `panels`
/// panels per variable; degree at most 3.
pub fn straight_simplex_integral(d: &DecoratedDiagram, nodes: usize, panels: usize) -> Result<C, NumericError> {
    let n = d.degree();
    if n > 3 || nodes == 0 || panels == 0 {
        return Err(NumericError::Config("degree at most 3 with positive nodes and panels".into()));
    }
    let a: Vec<C> = d.a.iter().map(complex_entry).collect::<Result<_, _>>()?;
    let b: Vec<C> = d.b.iter().map(complex_entry).collect::<Result<_, _>>()?;
    let total: C = b.iter().sum();
    if total.norm() == 0.0 {
        return Err(NumericError::Degenerate("the side decorations sum to zero".into()));
    }
    let tail: Vec<C> = (0..=n).map(|j| b[j..].iter().sum()).collect();
    let parents: Vec<usize> = (1..=n).map(|i| d.diagram.parent(i)).collect();
    let gl = GaussLegendre::new(NonZeroUsize::new(nodes).expect("positive"));
    let pairs = gl.as_node_weight_pairs().to_vec();
    let integrand = |s: &[f64]| {
        let t = |j: usize| if j == 0 { C::new(0.0, 0.0) } else { tail[j] - total * (1.0 - s[j - 1]) };
        let mut prod = C::new(1.0, 0.0);
        for i in 1..=n {
            prod *= t(i) - t(parents[i - 1]) - a[i - 1];
        }
        total.powu(n as u32) / prod
    };
    // integrate s_k over [0, upper] given s_{k+1..n}
    fn nest(k: usize, upper: f64, s: &mut Vec<f64>, pairs: &[(f64, f64)], panels: usize, f: &dyn Fn(&[f64]) -> C) -> C {
        if k == 0 {
            return f(s);
        }
        let mut acc = C::new(0.0, 0.0);
        let h = upper / panels as f64;
        for p in 0..panels {
            let mid = (p as f64 + 0.5) * h;
            for &(x, w) in pairs {
                s[k - 1] = mid + 0.5 * h * x;
                let lim = s[k - 1];
                acc += nest(k - 1, lim, s, pairs, panels, f) * (0.5 * h * w);
            }
        }
        acc
    }
    let mut s = vec![0.0; n];
    Ok(nest(n, 1.0, &mut s, &pairs, panels, &integrand) / two_pi_i_pow(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectral_matrix_integrates_polynomials() {
        let r = Rule::new(8);
        // ∫_{−1}^{x} 3t² dt = x³ + 1
        for i in 0..8 {
            let v: f64 = (0..8).map(|k| r.s[i][k] * 3.0 * r.x[k] * r.x[k]).sum();
            assert!((v - (r.x[i].powi(3) + 1.0)).abs() < 1e-13);
        }
    }

    #[test]
    fn straight_segment_without_singularities() {
        let p = build_path(C::new(0.0, 0.0), C::new(1.0, 0.0), &[C::new(0.5, 3.0)], 0.1).unwrap();
        assert_eq!(p.waypoints.len(), 2);
    }
}
