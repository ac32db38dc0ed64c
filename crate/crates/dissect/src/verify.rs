//! Named check suites. Each suite runs a family of exhaustive or seeded
//! random checks and reports how many passed and which failed.

use crate::arrangement::{graph_cycle_criterion, BiArrangement, Side};
use crate::cohomology::{
    b_c_basis, l_contraction, l_deletion, m_contraction, m_deletion, motivic_coproduct_geometric, product_signs,
    sign_graph_check, Presentation,
};
use crate::decoration::random_generic_rational;
use crate::diagram::{count_closed, count_recurrence, enumerate, s_c_plus, subsets};
use crate::hopf::*;
use crate::numeric::*;
use crate::reduction::{reduce, translate};
use crate::scalar::{rat, ratio};
use crate::symbol::{ItIntSymbol, JSymbol};
use crate::{DecoratedDiagram, DissectionDiagram, Mode, Rational, Scalar};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Display;

pub const SUITES: &[&str] = &[
    "enumeration",
    "hopf",
    "formulas",
    "k-oracles",
    "composition",
    "signs",
    "arrangement",
    "cohomology",
    "geometric",
    "reduction",
    "numerics",
];

pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Debug, thiserror::Error)]
pub enum VerifyError {
    #[error("unknown suite `{0}` (known: {list})", list = SUITES.join(", "))]
    UnknownSuite(String),
    #[error("max degree {got} exceeds the supported bound {bound} for suite `{suite}`")]
    DegreeTooLarge { suite: &'static str, got: usize, bound: usize },
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Overrides the suite's default degree bound.
    pub max_degree: Option<usize>,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { max_degree: None, seed: DEFAULT_SEED }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub name: &'static str,
    pub max_degree: usize,
    pub passed: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(name: &'static str, max_degree: usize) -> Self {
        SuiteReport { name, max_degree, passed: 0, failures: Vec::new() }
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn total(&self) -> usize {
        self.passed + self.failures.len()
    }

    fn check(&mut self, cond: bool, what: impl FnOnce() -> String) {
        if cond {
            self.passed += 1;
        } else {
            self.failures.push(what());
        }
    }

    fn check_ok<T, E: Display>(&mut self, r: Result<T, E>, what: impl FnOnce() -> String) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.check(false, || format!("{}: error {e}", what()));
                None
            }
        }
    }
}

/// (suite, default degree, largest degree the suite accepts)
fn bounds(name: &str) -> Option<(&'static str, usize, usize)> {
    let i = SUITES.iter().position(|s| *s == name)?;
    let (d, b) = match SUITES[i] {
        "enumeration" => (6, 9),
        "hopf" => (4, 5),
        "formulas" => (5, 7),
        "k-oracles" => (5, 6),
        "composition" => (4, 5),
        "signs" => (5, 6),
        "arrangement" => (4, 5),
        "cohomology" => (4, 5),
        "geometric" => (3, 4),
        "reduction" => (4, 5),
        _ => (3, 3),
    };
    Some((SUITES[i], d, b))
}

pub fn run_suite(name: &str, opts: &VerifyOptions) -> Result<SuiteReport, VerifyError> {
    let (suite, default, bound) = bounds(name).ok_or_else(|| VerifyError::UnknownSuite(name.to_string()))?;
    let n = opts.max_degree.unwrap_or(default);
    if n > bound {
        return Err(VerifyError::DegreeTooLarge { suite, got: n, bound });
    }
    let mut r = SuiteReport::new(suite, n);
    let seed = opts.seed;
    match suite {
        "enumeration" => enumeration(&mut r, n),
        "hopf" => hopf_axioms(&mut r, n, seed),
        "formulas" => closed_formulas(&mut r, n),
        "k-oracles" => k_oracles(&mut r, n),
        "composition" => composition_identities(&mut r, n),
        "signs" => signs(&mut r, n),
        "arrangement" => arrangement(&mut r, n, seed),
        "cohomology" => cohomology(&mut r, n, seed),
        "geometric" => geometric_coproduct(&mut r, n),
        "reduction" => reduction(&mut r, n),
        _ => numerics(&mut r, seed),
    }
    Ok(r)
}

const CATALAN_3: [u64; 10] = [1, 1, 3, 12, 55, 273, 1428, 7752, 43263, 246675];

fn enumeration(r: &mut SuiteReport, max: usize) {
    for n in 0..=max {
        let closed = count_closed(n);
        r.check(closed == CATALAN_3[n].into(), || format!("closed count n={n}: {closed}"));
        let rec = count_recurrence(n);
        r.check(rec == closed, || format!("recurrence n={n}: {rec} vs {closed}"));
        if let Some(all) = r.check_ok(enumerate(n), || format!("enumerate {n}")) {
            r.check(all.len() as u64 == CATALAN_3[n], || format!("enumerated n={n}: {}", all.len()));
            let distinct: BTreeSet<&DissectionDiagram> = all.iter().collect();
            r.check(distinct.len() == all.len() && all.iter().all(|d| d.is_valid()), || {
                format!("duplicates or invalid diagrams at n={n}")
            });
        }
    }
}

fn xs() -> Vec<XParam> {
    vec![XParam::motivic(), XParam::Value(rat(0)), XParam::Value(rat(1)), XParam::Formal]
}

fn coassociative(x: &XParam, d: &DecoratedDiagram) -> Result<bool, HopfError> {
    let t = coproduct_diagram(x, d)?;
    Ok(delta_tensor_id(x, &t)? == id_tensor_delta(x, &t)?)
}

fn hopf_axioms(r: &mut SuiteReport, max: usize, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dec = max.min(3);
    for x in xs() {
        for n in 0..=max {
            for d in enumerate(n).unwrap_or_default() {
                let dd = DecoratedDiagram::undecorated(d.clone());
                if let Some(ok) = r.check_ok(coassociative(&x, &dd), || format!("coproduct {x:?} {d:?}")) {
                    r.check(ok, || format!("coassociativity {x:?} {d:?}"));
                }
            }
        }
        for n in 1..=dec {
            for d in enumerate(n).unwrap_or_default() {
                for _ in 0..10 {
                    let dd = random_generic_rational(&d, &mut rng);
                    if let Some(ok) = r.check_ok(coassociative(&x, &dd), || format!("coproduct {x:?} {dd:?}")) {
                        r.check(ok, || format!("decorated coassociativity {x:?} {dd:?}"));
                    }
                }
            }
        }
        for n in 1..=dec {
            for d in enumerate(n).unwrap_or_default() {
                let dd = DecoratedDiagram::symbolic(d.clone());
                for (side, f) in [("S*id", convolution_s_id as fn(&_, &_) -> _), ("id*S", convolution_id_s)] {
                    if let Some(e) = r.check_ok(f(&x, &dd), || format!("{side} {x:?} {d:?}")) {
                        r.check(e.is_zero(), || format!("{side} nonzero for {x:?} {d:?}"));
                    }
                }
            }
        }
    }
}

fn closed_formulas(r: &mut SuiteReport, max: usize) {
    let x = XParam::motivic();
    for n in 0..=max {
        for (name, d, want) in [
            ("X", DissectionDiagram::corolla(n), x_closed_formula(n)),
            ("Y", DissectionDiagram::path_tree(n), y_closed_formula(n)),
        ] {
            if let Some(t) = r.check_ok(coproduct_diagram(&x, &DecoratedDiagram::undecorated(d)), || format!("{name}_{n}")) {
                r.check(t == want, || format!("closed formula {name}_{n}"));
            }
        }
    }
}

fn k_oracles(r: &mut SuiteReport, max: usize) {
    for n in 0..=max {
        for d in enumerate(n).unwrap_or_default() {
            let dd = DecoratedDiagram::undecorated(d.clone());
            for c in subsets(n) {
                let Some(direct) = r.check_ok(k_c_direct(&d, &c), || format!("k_C {d:?} {c:?}")) else { continue };
                r.check(direct == k_c_k123(&d, &c), || format!("K123 oracle {d:?} {c:?}"));
                let path = k_c_path(&d, &c);
                r.check(path.as_ref().ok() == Some(&direct), || format!("path oracle {d:?} {c:?}"));
                if let (Ok(flip), Ok(splus)) = (r_c(&dd, &c), s_c_plus(&d, &c)) {
                    r.check(flip.flipped == direct, || format!("flipped chords {d:?} {c:?}"));
                    let paths = k_paths(&d, &direct);
                    // a path lists vertices; its chords are all but the last
                    let chords: Vec<usize> = paths.iter().flat_map(|p| p[..p.len() - 1].iter().copied()).collect();
                    let covered: BTreeSet<usize> = chords.iter().copied().collect();
                    let structured = paths.iter().all(|p| p.windows(2).all(|w| w[0] > w[1]) && splus.contains(&p[0]))
                        && covered == direct
                        && covered.len() == chords.len();
                    r.check(structured, || format!("K_C path structure {d:?} {c:?}"));
                }
            }
        }
    }
}

fn relabel_into(chords: &[usize], within: &BTreeSet<usize>) -> BTreeSet<usize> {
    chords.iter().enumerate().filter(|(_, ch)| within.contains(ch)).map(|(j, _)| j + 1).collect()
}

fn composition_identities(r: &mut SuiteReport, max: usize) {
    for n in 0..=max {
        for d in enumerate(n).unwrap_or_default() {
            let dd = DecoratedDiagram::symbolic(d.clone());
            for cp in subsets(n) {
                for c in subsets(n).into_iter().filter(|c| c.is_subset(&cp)) {
                    let res = composition_case(&dd, &c, &cp);
                    if let Some(ok) = r.check_ok(res, || format!("composition {d:?} C={c:?} C'={cp:?}")) {
                        r.check(ok, || format!("composition identity {d:?} C={c:?} C'={cp:?}"));
                    }
                }
            }
        }
    }
}

/// For C ⊆ C': q_{C'} factors over the faces of C, q_C ∘ r_{C'} = Π r_{C'_α} ∘ q_C^α,
/// r_C ∘ r_{C'} = r_C, the flip counts add up, and S^+ and the flipped chords split accordingly.
fn composition_case(dd: &DecoratedDiagram, c: &BTreeSet<usize>, cp: &BTreeSet<usize>) -> Result<bool, HopfError> {
    let d = &dd.diagram;
    let rcp = r_c(dd, cp)?;
    let faces = q_faces(dd, c)?;
    let mut prod_q = Monomial::unit();
    let mut prod_r = Monomial::unit();
    let mut k_faces = 0;
    let mut s_from_faces = BTreeSet::new();
    let mut k_from_faces = BTreeSet::new();
    let mut disjoint = true;
    for f in &faces {
        let local = relabel_into(&f.chords, cp);
        prod_q = prod_q.mul(&q_c(&f.diagram, &local)?);
        let rr = r_c(&f.diagram, &local)?;
        k_faces += rr.k;
        for ch in &rr.flipped {
            disjoint &= k_from_faces.insert(f.chords[ch - 1]);
        }
        prod_r = prod_r.mul(&Monomial::from_diagram(rr.diagram));
        for s in s_c_plus(&f.diagram.diagram, &local)? {
            disjoint &= s_from_faces.insert(f.sides[s]);
        }
    }
    let c_in_r = relabel_into(&rcp.chords, c);
    let rr = r_c(&rcp.diagram, &c_in_r)?;
    let rc = r_c(dd, c)?;
    let mut split = s_c_plus(d, cp)?;
    for s in s_c_plus(&rcp.diagram.diagram, &c_in_r)? {
        disjoint &= split.insert(rcp.sides[s]);
    }
    let mut lhs = rcp.flipped.clone();
    for ch in &rr.flipped {
        disjoint &= lhs.insert(rcp.chords[ch - 1]);
    }
    let mut rhs = rc.flipped.clone();
    for ch in k_from_faces {
        disjoint &= rhs.insert(ch);
    }
    Ok(disjoint
        && q_c(dd, cp)? == prod_q
        && q_c(&rcp.diagram, &c_in_r)? == prod_r
        && rr.diagram.normalized() == rc.diagram.normalized()
        && rcp.k + rr.k == rc.k + k_faces
        && s_c_plus(d, cp)? == s_from_faces
        && split == s_c_plus(d, c)?
        && lhs == rhs)
}

fn signs(r: &mut SuiteReport, max: usize) {
    for n in 0..=max {
        for d in enumerate(n).unwrap_or_default() {
            let dd = DecoratedDiagram::undecorated(d.clone());
            for c in subsets(n) {
                if let Some(s) = r.check_ok(product_signs(&dd, &c), || format!("signs {d:?} {c:?}")) {
                    r.check(s.holds(), || format!("product signs {d:?} {c:?}: {s:?}"));
                }
                if n <= 4 {
                    if let Some(ok) = r.check_ok(sign_graph_check(&d, &c), || format!("sign graph {d:?} {c:?}")) {
                        r.check(ok, || format!("sign graph {d:?} {c:?}"));
                    }
                }
            }
        }
    }
}

fn zero_based(s: &BTreeSet<usize>) -> BTreeSet<usize> {
    s.iter().map(|x| x - 1).collect()
}

fn arrangement(r: &mut SuiteReport, max: usize, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for n in 0..=max {
        for d in enumerate(n).unwrap_or_default() {
            for _ in 0..5 {
                let dd = random_generic_rational(&d, &mut rng);
                let Some(a) = r.check_ok(BiArrangement::from_diagram(&dd), || format!("arrangement {dd:?}")) else {
                    continue;
                };
                for i in subsets(n) {
                    for j in subsets(n + 1) {
                        let j = zero_based(&j);
                        let lin = a.stratum(&zero_based(&i), &j);
                        let gr = graph_cycle_criterion(&dd, &i, &j);
                        r.check(matches!((&lin, &gr), (Ok(x), Ok(y)) if x == y), || {
                            format!("stratum {d:?} I={i:?} J={j:?}: {lin:?} vs {gr:?}")
                        });
                    }
                }
            }
            // small integer decorations hit both generic and non-generic cases
            for _ in 0..5 {
                let mut draw = || Scalar::int(rng.gen_range(-2..=2));
                let a = (0..n).map(|_| draw()).collect();
                let b = (0..=n).map(|_| draw()).collect();
                let dd = DecoratedDiagram { diagram: d.clone(), a, b };
                let g = dd.is_generic();
                let ag = BiArrangement::from_diagram(&dd).map(|a| a.is_affinely_generic());
                r.check(matches!((&g, &ag), (Ok(x), Ok(Ok(y))) if x == y), || format!("genericity {dd:?}"));
            }
        }
    }
}

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn cohomology(r: &mut SuiteReport, max: usize, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for n in 0..=max {
        for d in enumerate(n).unwrap_or_default() {
            let dd = random_generic_rational(&d, &mut rng);
            let Some(a) = r.check_ok(BiArrangement::from_diagram(&dd), || format!("arrangement {d:?}")) else { continue };
            let Some(ps) = r.check_ok(Presentation::all(&a), || format!("presentations {d:?}")) else { continue };
            for (k, p) in ps.iter().enumerate() {
                r.check(p.dimension() == binom(n, k), || format!("dim gr_{k} {d:?}: {}", p.dimension()));
                if let Some(b) = r.check_ok(b_c_basis(&dd, k), || format!("b_C {d:?} k={k}")) {
                    r.check(b.invertible, || format!("b_C matrix singular {d:?} k={k}"));
                }
            }
        }
    }
    for n in 1..=max.min(3) {
        for d in enumerate(n).unwrap_or_default() {
            let Ok(a) = BiArrangement::from_diagram(&DecoratedDiagram::symbolic(d.clone())) else { continue };
            let Some(ps) = r.check_ok(Presentation::all(&a), || format!("presentations {d:?}")) else { continue };
            for (k, p) in ps.iter().enumerate() {
                for j0 in subsets(n + 1) {
                    let j0 = zero_based(&j0);
                    let res = a
                        .delete(Side::M, &j0)
                        .map_err(|e| e.to_string())
                        .and_then(|del| Presentation::new(&del, k).map_err(|e| e.to_string()))
                        .and_then(|t| m_deletion(p, &j0, &t).map_err(|e| e.to_string()));
                    r.check(res.is_ok(), || format!("M-deletion {d:?} {j0:?} k={k}: {res:?}"));
                    if let Ok(con) = a.contract(Side::M, &j0) {
                        if j0.len() <= k {
                            let res = Presentation::new(&con, k).map_err(|e| e.to_string()).and_then(|s| {
                                m_contraction(&s, &j0, p).map_err(|e| e.to_string())
                            });
                            r.check(res.is_ok(), || format!("M-contraction {d:?} {j0:?} k={k}: {res:?}"));
                        }
                    }
                }
                for i0 in subsets(n) {
                    let i0 = zero_based(&i0);
                    let res = a
                        .delete(Side::L, &i0)
                        .map_err(|e| e.to_string())
                        .and_then(|del| Presentation::new(&del, k).map_err(|e| e.to_string()))
                        .and_then(|s| l_deletion(&s, &i0, p).map_err(|e| e.to_string()));
                    r.check(res.is_ok(), || format!("L-deletion {d:?} {i0:?} k={k}: {res:?}"));
                    if i0.len() <= k {
                        let res = a
                            .contract(Side::L, &i0)
                            .map_err(|e| e.to_string())
                            .and_then(|con| Presentation::new(&con, k - i0.len()).map_err(|e| e.to_string()))
                            .and_then(|t| l_contraction(p, &i0, &t).map_err(|e| e.to_string()));
                        r.check(res.is_ok(), || format!("L-contraction {d:?} {i0:?} k={k}: {res:?}"));
                    }
                }
            }
        }
    }
}

/// Integer symbol tensor of a tensor element whose factors all map to symbols.
pub fn symbol_tensor<S: Ord, F: Fn(&DecoratedDiagram) -> Option<S>>(t: &TensorElement, f: F) -> Option<SymbolTensor<S>> {
    let mut out = SymbolTensor::new();
    for ((l, rr), c) in &t.terms {
        let c = c.as_constant()?;
        if !c.is_integer() {
            return None;
        }
        let mut ls: Vec<S> = l.factors().iter().map(&f).collect::<Option<_>>()?;
        let mut rs: Vec<S> = rr.factors().iter().map(&f).collect::<Option<_>>()?;
        ls.sort();
        rs.sort();
        *out.entry((ls, rs)).or_insert(0) += i64::try_from(c.to_integer()).ok()?;
    }
    out.retain(|_, v| *v != 0);
    Some(out)
}

fn geometric_coproduct(r: &mut SuiteReport, max: usize) {
    let x = XParam::motivic();
    for n in 0..=max {
        for d in enumerate(n).unwrap_or_default() {
            let dd = DecoratedDiagram::symbolic(d.clone());
            let Some(full) = r.check_ok(coproduct_diagram(&x, &dd), || format!("coproduct {d:?}")) else { continue };
            for k in 0..=n {
                if let Some(geo) = r.check_ok(motivic_coproduct_geometric(&dd, k), || format!("geometric {d:?} k={k}")) {
                    r.check(geo == full.component(n - k, k), || format!("geometric coproduct {d:?} k={k}"));
                }
            }
        }
    }
    for n in 0..=(max + 1).min(4) {
        let dd = DecoratedDiagram::symbolic(DissectionDiagram::corolla(n));
        let Some(sym) = ItIntSymbol::from_corolla(&dd) else { continue };
        let lhs = coproduct_diagram(&x, &dd).ok().and_then(|t| symbol_tensor(&t, ItIntSymbol::from_corolla));
        let rhs = goncharov_coproduct(&sym).ok().map(|g| {
            let mut out = SymbolTensor::new();
            for ((l, rr), c) in g {
                let mut l: Vec<ItIntSymbol> = l.iter().map(|s| s.shifted_to_zero_end()).collect();
                let mut rr: Vec<ItIntSymbol> = rr.iter().map(|s| s.shifted_to_zero_end()).collect();
                l.sort();
                rr.sort();
                *out.entry((l, rr)).or_insert(0) += c;
            }
            out.retain(|_, v| *v != 0);
            out
        });
        r.check(lhs.is_some() && lhs == rhs, || format!("Goncharov coproduct n={n}"));
    }
    for n in 0..=max.min(3) {
        let a: Vec<Scalar> = (1..=n).map(|i| Scalar::symbol(&format!("a{i}"))).collect();
        let b = Scalar::symbol("b");
        let mut sides = vec![b.zero_like(); n + 1];
        sides[0] = b.neg();
        let lhs = path_tree_decorated(a.clone(), sides)
            .ok()
            .and_then(|dd| coproduct_diagram(&x, &dd).ok())
            .and_then(|t| symbol_tensor(&t, JSymbol::from_path_tree));
        let rhs = j_coproduct(&a, &b).ok();
        r.check(lhs.is_some() && lhs == rhs, || format!("J coproduct n={n}"));
    }
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

fn reduction(r: &mut SuiteReport, max: usize) {
    for n in 1..=max {
        let x = DecoratedDiagram::symbolic(DissectionDiagram::corolla(n));
        if let Some(s) = r.check_ok(reduce(&x), || format!("reduce X_{n}")) {
            let own = ItIntSymbol::from_corolla(&x);
            r.check(s.len() == 1 && s.terms().iter().next().map(|(k, c)| (Some(k), *c)) == Some((own.as_ref(), 1)), || {
                format!("X_{n} reduces to {s}")
            });
        }
        let y = DecoratedDiagram::symbolic(DissectionDiagram::path_tree(n));
        if let Some(s) = r.check_ok(reduce(&y), || format!("reduce Y_{n}")) {
            r.check(s.len() <= factorial(n - 1), || format!("Y_{n} has {} terms", s.len()));
        }
        for d in enumerate(n).unwrap_or_default() {
            let dd = DecoratedDiagram::symbolic(d.clone());
            let Some(s) = r.check_ok(reduce(&dd), || format!("reduce {d:?}")) else { continue };
            let good = !s.is_empty()
                && s.iter().all(|(sym, _)| {
                    sym.weight() == n && sym.is_generic() && sym.entries().iter().all(|e| e.has_integer_coefficients())
                });
            r.check(good, || format!("reduction of {d:?} not generic/integral: {s}"));
        }
    }
}

type C = Complex64;

fn gaussian<R: Rng>(rng: &mut R, range: i64, im: Option<i64>) -> Scalar {
    let re = ratio(rng.gen_range(-range..=range), 4);
    let im = match im {
        Some(v) => rat(v),
        None => ratio(rng.gen_range(-range..=range), 4),
    };
    Scalar::gaussian(re, im)
}

/// Real sides and chords with imaginary parts ±1, ±3, ±9, so every signed
/// sum of distinct chord decorations stays at least 1 away from the real axis.
pub fn numeric_decoration<R: Rng>(d: &DissectionDiagram, rng: &mut R) -> DecoratedDiagram {
    let n = d.degree();
    let a: Vec<Scalar> = (0..n)
        .map(|i| {
            let s = if rng.gen_bool(0.5) { 1 } else { -1 };
            gaussian(rng, 8, Some(s * 3i64.pow(i as u32)))
        })
        .collect();
    loop {
        let b: Vec<Scalar> = (0..=n).map(|_| Scalar::gaussian(ratio(rng.gen_range(-8..=8), 4), Rational::default())).collect();
        let total = b.iter().fold(Scalar::zero(Mode::Gaussian), |x, y| x.add(y));
        if total.to_complex().is_some_and(|z| z.norm() >= 0.5) {
            return DecoratedDiagram { diagram: d.clone(), a, b };
        }
    }
}

fn fl(z: C) -> Scalar {
    Scalar::float(z.re, z.im)
}

fn numerics(r: &mut SuiteReport, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = QuadratureConfig::default();

    // degree one against the closed form, 1e-10
    let mut done = 0;
    while done < 100 {
        let (a1, b0, b1) = (gaussian(&mut rng, 12, None), gaussian(&mut rng, 12, None), gaussian(&mut rng, 12, None));
        let cx = |s: &Scalar| s.to_complex().unwrap_or_default();
        let (za, z0, z1) = (cx(&a1), -cx(&b0), cx(&b1));
        let delta = default_clearance(z0, z1, &[za]);
        if delta < 0.05 || (z1 - z0).norm() < 0.1 {
            continue;
        }
        done += 1;
        let s = ItIntSymbol::new(b0.neg(), vec![a1.clone()], b1.clone());
        let v = build_path(z0, z1, &[za], delta).and_then(|p| {
            let w = p.winding_about(za);
            Ok((eval_iterint(&s, &p, &cfg)?, eval_degree1_closed(za, cx(&b0), z1, w)?))
        });
        r.check(matches!(v, Ok((q, c)) if (q - c).norm() < 1e-10), || format!("degree one {s}: {v:?}"));
    }

    // shuffle, 1e-8
    let mut done = 0;
    while done < 10 {
        let pts: Vec<C> = (0..5).map(|_| C::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))).collect();
        let (z0, z1, w) = (pts[0], pts[1], &pts[2..]);
        let delta = default_clearance(z0, z1, w);
        let Ok(path) = build_path(z0, z1, w, delta) else { continue };
        done += 1;
        let ev = |word: &[C]| {
            let s = ItIntSymbol::new(fl(z0), word.iter().map(|&v| fl(v)).collect(), fl(z1));
            eval_iterint(&s, &path, &cfg)
        };
        let (x, y, z) = (w[0], w[1], w[2]);
        let res: Result<(C, C), NumericError> = (|| {
            Ok((
                ev(&[x])? * ev(&[y])? - ev(&[x, y])? - ev(&[y, x])?,
                ev(&[x])? * ev(&[y, z])? - ev(&[x, y, z])? - ev(&[y, x, z])? - ev(&[y, z, x])?,
            ))
        })();
        r.check(matches!(res, Ok((u, v)) if u.norm() < 1e-8 && v.norm() < 1e-8), || format!("shuffle {pts:?}: {res:?}"));
    }

    // path composition, 1e-8
    for _ in 0..5 {
        let w: Vec<C> = (0..3).map(|_| C::new(rng.gen_range(-1.0..3.0), rng.gen_range(-1.0..2.0))).collect();
        let (z0, zm, z1) = (C::new(0.0, 0.0), C::new(1.0, 1.5), C::new(2.0, -0.5));
        let res: Result<(C, C), NumericError> = (|| {
            let g1 = build_path(z0, zm, &w, 0.1)?;
            let g2 = build_path(zm, z1, &w, 0.1)?;
            let g = g1.concat(&g2)?;
            let ev = |p: &CPath, word: &[C]| {
                let s = ItIntSymbol::new(fl(p.start()), word.iter().map(|&v| fl(v)).collect(), fl(p.end()));
                eval_iterint(&s, p, &cfg)
            };
            let mut conv = C::new(0.0, 0.0);
            for k in 0..=3 {
                conv += ev(&g1, &w[..k])? * ev(&g2, &w[k..])?;
            }
            Ok((ev(&g, &w)?, conv))
        })();
        match res {
            Err(NumericError::EndpointTooClose(_)) => {}
            _ => r.check(matches!(res, Ok((a, b)) if (a - b).norm() < 1e-8), || format!("composition {w:?}: {res:?}")),
        }
    }

    // degree-2 corolla against brute-force simplex quadrature, 1e-6
    for _ in 0..5 {
        let re = |rng: &mut ChaCha8Rng| ratio(rng.gen_range(1..=7), 4);
        let a = vec![
            Scalar::gaussian(re(&mut rng), ratio(rng.gen_range(2..=6), 4)),
            Scalar::gaussian(re(&mut rng), ratio(-rng.gen_range(2..=6), 4)),
        ];
        let b = vec![Scalar::zero(Mode::Gaussian), Scalar::zero(Mode::Gaussian), Scalar::gaussian(rat(2), Rational::default())];
        let d = DecoratedDiagram { diagram: DissectionDiagram::corolla(2), a, b };
        let res = eval_dissection(&d, &PathPlan::default())
            .and_then(|e| Ok((e.value, straight_simplex_integral(&d, 24, 8)?)));
        r.check(matches!(res, Ok((v, w)) if (v - w).norm() < 1e-6), || format!("degree-2 corolla {d:?}: {res:?}"));
    }

    // translation invariance, 1e-8
    for n in 1..=3 {
        for d in enumerate(n).unwrap_or_default() {
            let dd = numeric_decoration(&d, &mut rng);
            let i = rng.gen_range(1..=n);
            let lam = Scalar::gaussian(ratio(rng.gen_range(-6..6), 5), Rational::default());
            let res = translate(&dd, i, &lam).map_err(NumericError::from).and_then(|t| {
                Ok((eval_dissection(&dd, &PathPlan::default())?.value, eval_dissection(&t, &PathPlan::default())?.value))
            });
            r.check(matches!(res, Ok((x, y)) if (x - y).norm() < 1e-8), || format!("translation {dd:?} i={i}: {res:?}"));
        }
    }
}

/// The variable assignment a{i}, b{j} for a concrete decoration.
pub fn assignment(d: &DecoratedDiagram) -> BTreeMap<String, Scalar> {
    let mut v = BTreeMap::new();
    for (i, x) in d.a.iter().enumerate() {
        v.insert(format!("a{}", i + 1), x.clone());
    }
    for (j, x) in d.b.iter().enumerate() {
        v.insert(format!("b{j}"), x.clone());
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_rejected() {
        assert!(matches!(run_suite("nope", &VerifyOptions::default()), Err(VerifyError::UnknownSuite(_))));
        let too_big = VerifyOptions { max_degree: Some(12), ..Default::default() };
        assert!(matches!(run_suite("signs", &too_big), Err(VerifyError::DegreeTooLarge { .. })));
    }

    #[test]
    fn small_suites_pass() {
        let opts = VerifyOptions { max_degree: Some(2), ..Default::default() };
        for s in ["enumeration", "signs", "formulas", "reduction"] {
            let r = run_suite(s, &opts).unwrap();
            assert!(r.ok() && r.passed > 0, "{s}: {:?}", r.failures);
        }
    }
}
