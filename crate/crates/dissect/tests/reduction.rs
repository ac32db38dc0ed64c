use dissect::arrangement::BiArrangement;
use dissect::cohomology::{orlik_solomon_cycle_vanishes, stokes_class_vanishes};
use dissect::diagram::{chords_cross, enumerate};
use dissect::hopf::goncharov_coproduct;
use dissect::reduction::*;
use dissect::scalar::{rat, ratio};
use dissect::{DecoratedDiagram, DissectionDiagram, ItIntSymbol, Mode, Rational, Scalar};
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet};

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

fn sym(s: &str) -> Scalar {
    Scalar::symbol(s)
}

#[test]
fn corollas_reduce_to_their_own_symbol() {
    for n in 0..=5 {
        let d = DecoratedDiagram::symbolic(DissectionDiagram::corolla(n));
        let s = reduce(&d).unwrap();
        let own = ItIntSymbol::from_corolla(&d).unwrap();
        assert_eq!(s.terms(), &BTreeMap::from([(own.clone(), 1)]), "n = {n}");
        // the terminal objects are the ones the Goncharov formula applies to
        goncharov_coproduct(&own).unwrap();
    }
}

#[test]
fn degree_one_gives_the_logarithm_symbol() {
    let d = DecoratedDiagram::symbolic(DissectionDiagram::corolla(1));
    let want = ItIntSymbol::new(sym("b0").neg(), vec![sym("a1")], sym("b1"));
    assert_eq!(reduce(&d).unwrap().terms(), &BTreeMap::from([(want, 1)]));
}

#[test]
fn term_counts_and_integrality_degree_4() {
    for n in 1..=4 {
        for d in enumerate(n).unwrap() {
            let dd = DecoratedDiagram::symbolic(d.clone());
            let s = reduce(&dd).unwrap_or_else(|e| panic!("{d:?}: {e}"));
            assert!(!s.is_empty() && s.len() <= factorial(n - 1).max(1), "{d:?}: {} terms", s.len());
            for (x, _) in s.iter() {
                assert_eq!(x.weight(), n);
                assert!(x.is_generic(), "{d:?}: {x}");
                assert!(x.entries().iter().all(|e| e.has_integer_coefficients()), "{d:?}: {x}");
            }
        }
    }
}

#[test]
fn path_tree_three_has_at_most_two_terms() {
    let d = DecoratedDiagram::symbolic(DissectionDiagram::path_tree(3));
    let s = reduce(&d).unwrap();
    assert!(s.len() <= 2 && !s.is_empty(), "{s}");
}

#[test]
fn non_generic_and_float_inputs_are_rejected() {
    let d = DecoratedDiagram::undecorated(DissectionDiagram::corolla(2));
    assert_eq!(reduce(&d).unwrap_err(), ReductionError::NotGeneric);
    let f = DecoratedDiagram::new(
        DissectionDiagram::corolla(1),
        vec![Scalar::float(0.5, 0.1)],
        vec![Scalar::float(1.0, 0.0), Scalar::float(2.0, 0.0)],
    )
    .unwrap();
    assert_eq!(reduce(&f).unwrap_err(), ReductionError::FloatMode);
}

#[test]
fn translation_by_zero_and_bad_index() {
    let d = DecoratedDiagram::symbolic(DissectionDiagram::new(vec![0, 1, 1]).unwrap());
    assert_eq!(translate(&d, 2, &Scalar::zero(Mode::Formal)).unwrap(), d);
    assert_eq!(translate(&d, 0, &sym("x")).unwrap_err(), ReductionError::BadIndex(0));
    assert_eq!(translate(&d, 4, &sym("x")).unwrap_err(), ReductionError::BadIndex(4));
}

#[test]
fn corolla_translations_normalize_the_sides() {
    let n = 4;
    let orig = DecoratedDiagram::symbolic(DissectionDiagram::corolla(n));
    let mut d = orig.clone();
    let mut acc = Scalar::zero(Mode::Formal);
    for j in 2..=n {
        acc = acc.add(&orig.b[j - 1]);
        d = translate(&d, j, &acc.neg()).unwrap();
    }
    assert!(d.b[1..n].iter().all(|b| b.is_zero()), "{:?}", d.b);
    assert!(d.is_generic().unwrap());
    let s = ItIntSymbol::from_corolla(&d).unwrap();
    assert_eq!(s, ItIntSymbol::new(d.b[0].neg(), d.a.clone(), d.b[n].clone()));
    assert_eq!(s, ItIntSymbol::from_corolla(&orig).unwrap());
}

#[test]
fn rotating_degree_one() {
    let d = DecoratedDiagram::symbolic(DissectionDiagram::corolla(1));
    let (r, s) = rotate(&d);
    assert_eq!(r.diagram, DissectionDiagram::corolla(1));
    // the chord 1→0 becomes 0→1 and is flipped back
    assert_eq!(r.a, vec![sym("a1").neg()]);
    assert_eq!(r.b, vec![sym("b1"), sym("b0")]);
    assert_eq!(s, -1);
}

fn undirected_graph(d: &DecoratedDiagram, shift: usize) -> BTreeSet<(usize, usize, Scalar)> {
    let m = d.degree() + 1;
    let g = d.total_graph();
    g.edges
        .iter()
        .map(|e| {
            let (u, v) = ((e.src + shift) % m, (e.dst + shift) % m);
            if u < v {
                (u, v, e.dec.clone())
            } else {
                (v, u, e.dec.neg())
            }
        })
        .collect()
}

#[test]
fn rotation_cycles_back_and_preserves_the_total_graph() {
    for n in 0..=4 {
        for d in enumerate(n).unwrap() {
            let dd = DecoratedDiagram::symbolic(d.clone());
            let mut cur = dd.clone();
            let mut signs = 1;
            for step in 1..=n + 1 {
                let (r, s) = rotate(&cur);
                assert_eq!(r.is_generic().unwrap(), cur.is_generic().unwrap());
                // relabelling v → v−1 back by +step recovers Γ(D) up to flips
                assert_eq!(undirected_graph(&r, step), undirected_graph(&dd, 0), "{d:?}");
                cur = r;
                signs *= s;
            }
            assert_eq!(cur, dd, "{d:?}");
            assert!(signs == 1 || signs == -1);
        }
    }
}

/// All Stokes diagrams with n chords: spanning trees on n+2 vertices minus a
/// chord, with chords in random order and directions.
fn stokes_diagrams<R: Rng>(n: usize, rng: &mut R) -> Vec<AugmentedDiagram> {
    let mut out = Vec::new();
    for t in enumerate(n + 1).unwrap() {
        for drop in 1..=n + 1 {
            let mut chords: Vec<(usize, usize, Scalar)> = t
                .chords()
                .into_iter()
                .filter(|&(i, _)| i != drop)
                .enumerate()
                .map(|(k, (i, p))| {
                    let c = sym(&format!("c{}", k + 1));
                    if rng.gen_bool(0.5) {
                        (p, i, c.neg())
                    } else {
                        (i, p, c)
                    }
                })
                .collect();
            // shuffle the chord order
            for k in (1..chords.len()).rev() {
                chords.swap(k, rng.gen_range(0..=k));
            }
            let sides = (0..n + 2).map(|s| sym(&format!("s{s}"))).collect();
            out.push(AugmentedDiagram::new(n + 2, chords, sides).unwrap());
        }
    }
    out
}

#[test]
fn stokes_diagrams_have_exactly_two_dissection_faces() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for n in 0..=3 {
        for w in stokes_diagrams(n, &mut rng) {
            assert_eq!(w.kind(), AugmentedKind::Stokes);
            let count = (0..w.nv).filter(|&s| w.boundary(s).is_some()).count();
            assert_eq!(count, 2, "{w:?}");
            let [x, y] = stokes_boundaries(&w).unwrap();
            assert!(x.side < y.side);
            assert!(w.total_graph().is_generic().unwrap());
            assert!(x.diagram.is_generic().unwrap() && y.diagram.is_generic().unwrap());
        }
    }
}

fn arrangement_of(w: &AugmentedDiagram) -> BiArrangement {
    let sides: Vec<_> = w.sides.iter().enumerate().map(|(s, d)| (s, (s + 1) % w.nv, d.clone())).collect();
    BiArrangement::from_edges(w.nv, &w.chords, &sides).unwrap()
}

#[test]
fn stokes_faces_vanish_in_cohomology_degree_2() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for n in 1..=2 {
        for w in stokes_diagrams(n, &mut rng) {
            let [x, y] = stokes_boundaries(&w).unwrap();
            assert!(stokes_class_vanishes(&arrangement_of(&w), x.side, y.side).unwrap(), "{w:?}");
        }
    }
}

#[test]
fn opening_an_angle_restores_the_diagram() {
    for n in 2..=4 {
        for d in enumerate(n).unwrap() {
            let dd = DecoratedDiagram::symbolic(d.clone());
            for k in 1..=n {
                if d.parent(k) != 0 || !(1..=n).any(|j| d.parent(j) == k) {
                    continue;
                }
                let w = open_angle(&dd, k).unwrap();
                let [x, y] = stokes_boundaries(&w).unwrap();
                let here = if x.side == k { x } else { y };
                assert_eq!(here.side, k);
                assert_eq!(here.diagram, dd);
                assert_eq!(here.eps, 1);
            }
        }
    }
}

/// D plus a chord u→v decorated by the tree-path sum from u to v, closing a
/// zero-total cycle.
fn orlik_solomon_diagrams(n: usize) -> Vec<(AugmentedDiagram, DecoratedDiagram)> {
    let mut out = Vec::new();
    for d in enumerate(n).unwrap() {
        let dd = DecoratedDiagram::symbolic(d.clone());
        let path = |v: usize| {
            let mut p = vec![v];
            let mut x = v;
            while x != 0 {
                x = d.parent(x);
                p.push(x);
            }
            p
        };
        for u in 0..=n {
            for v in u + 1..=n {
                let chords: Vec<(usize, usize, Scalar)> =
                    d.chords().into_iter().map(|(i, p)| (i, p, dd.a[i - 1].clone())).collect();
                if chords.iter().any(|&(i, p, _)| (i.min(p), i.max(p)) == (u, v)) {
                    continue;
                }
                if chords.iter().any(|&(i, p, _)| chords_cross(i, p, u, v)) {
                    continue;
                }
                // potential t_x = Σ of decorations on the path x → root
                let pot = |x: usize| {
                    let p = path(x);
                    p.windows(2).fold(Scalar::zero(Mode::Formal), |acc, w| acc.add(&dd.a[w[0] - 1]))
                };
                let mut all = chords.clone();
                all.push((v, u, pot(v).sub(&pot(u))));
                out.push((AugmentedDiagram::new(n + 1, all, dd.b.clone()).unwrap(), dd.clone()));
            }
        }
    }
    out
}

fn eval_scalar(s: &Scalar, vals: &BTreeMap<String, Scalar>) -> Rational {
    match s.substitute(vals, Mode::Rational).unwrap() {
        Scalar::Rational(r) => r,
        other => panic!("{other:?}"),
    }
}

/// 1/Π φ_i at the point t (t_0 = 0); the numerator dφ_1∧⋯∧dφ_n is dt_1∧⋯∧dt_n.
fn form_value(d: &DecoratedDiagram, t: &[Rational], vals: &BTreeMap<String, Scalar>) -> Rational {
    let mut prod = Rational::one();
    for (i, p) in d.diagram.chords() {
        prod *= &t[i] - &t[p] - eval_scalar(&d.a[i - 1], vals);
    }
    prod.recip()
}

#[test]
fn orlik_solomon_families_degree_3() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for n in 1..=3 {
        for (w, _) in orlik_solomon_diagrams(n) {
            let fam = orlik_solomon_family(&w).unwrap();
            let cycle: BTreeSet<usize> = w.chord_cycle().into_iter().collect();
            assert_eq!(fam.len(), cycle.len());
            assert!(cycle.len() >= 3, "{w:?}");
            // the class relation
            assert!(orlik_solomon_cycle_vanishes(&arrangement_of(&w), &cycle).unwrap(), "{w:?}");
            // the form identity Σ ε(c) ω_{Ŵ∖c} = 0 at rational points
            for _ in 0..3 {
                let mut vals = BTreeMap::new();
                for i in 1..=n {
                    vals.insert(format!("a{i}"), Scalar::Rational(ratio(rng.gen_range(-50..50), rng.gen_range(1..7))));
                }
                for j in 0..=n {
                    vals.insert(format!("b{j}"), Scalar::int(0));
                }
                let mut t = vec![rat(0)];
                t.extend((0..n).map(|_| ratio(rng.gen_range(-500..500), rng.gen_range(1..11))));
                let total: Rational =
                    fam.iter().map(|x| Rational::from_integer(x.eps.into()) * form_value(&x.diagram, &t, &vals)).sum();
                assert!(total.is_zero(), "{w:?}");
            }
        }
    }
}

#[test]
fn case_one_construction_recovers_the_diagram() {
    // X = chords 1→0, 2→3, 3→0: vertex 2 is not linked to the root
    let d = DecoratedDiagram::symbolic(DissectionDiagram::new(vec![0, 3, 0]).unwrap());
    let mut chords: Vec<_> = d.diagram.chords().into_iter().map(|(i, p)| (i, p, d.a[i - 1].clone())).collect();
    chords.push((2, 0, sym("a2").add(&sym("a3"))));
    let w = AugmentedDiagram::new(4, chords, d.b.clone()).unwrap();
    let fam = orlik_solomon_family(&w).unwrap();
    let base = fam.iter().find(|t| t.chord == 3).unwrap();
    assert_eq!(base.diagram, d);
    assert_eq!(w.chord_cycle(), vec![1, 2, 3]);
}

#[test]
fn extra_zero_cycle_is_reported() {
    // the added chord closes a zero cycle, and a1 = 0-decorations make a second one
    let d = DecoratedDiagram::new(
        DissectionDiagram::new(vec![0, 3, 0]).unwrap(),
        vec![Scalar::int(1), Scalar::int(2), Scalar::int(3)],
        vec![Scalar::int(-1), Scalar::int(0), Scalar::int(0), Scalar::int(0)],
    )
    .unwrap();
    let mut chords: Vec<_> = d.diagram.chords().into_iter().map(|(i, p)| (i, p, d.a[i - 1].clone())).collect();
    chords.push((2, 0, Scalar::int(5)));
    let w = AugmentedDiagram::new(4, chords, d.b.clone()).unwrap();
    assert_eq!(orlik_solomon_family(&w).unwrap_err(), ReductionError::ExtraZeroCycle);
}

#[test]
fn invalid_augmented_diagrams_are_rejected() {
    let z = || Scalar::int(0);
    assert!(AugmentedDiagram::new(4, vec![(0, 2, z()), (1, 3, z())], vec![z(); 4]).is_err());
    assert!(AugmentedDiagram::new(4, vec![(0, 2, z())], vec![z(); 4]).is_err());
    assert!(AugmentedDiagram::new(3, vec![(0, 1, z())], vec![z(); 2]).is_err());
    assert!(AugmentedDiagram::new(3, vec![(0, 1, z())], vec![z(); 3]).is_ok());
}

#[test]
fn substituted_reduction_matches_rational_substitution_of_symbols() {
    let d = DecoratedDiagram::symbolic(DissectionDiagram::path_tree(3));
    let s = reduce(&d).unwrap();
    let mut vals = BTreeMap::new();
    for (k, name) in ["a1", "a2", "a3", "b0", "b1", "b2", "b3"].iter().enumerate() {
        vals.insert(name.to_string(), Scalar::int(10007 * (k as i64 + 1) * (k as i64 + 1)));
    }
    let sub = s.substitute(&vals, Mode::Rational).unwrap();
    let direct = reduce(&d.substitute(&vals, Mode::Rational).unwrap()).unwrap();
    assert_eq!(sub, direct);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn translation_preserves_genericity(which in 0usize..12, i in 1usize..=3, num in -6i64..6, seed in any::<u64>()) {
        let d = enumerate(3).unwrap()[which].clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = (0..3).map(|_| Scalar::int(rng.gen_range(-3..=3))).collect();
        let b = (0..4).map(|_| Scalar::int(rng.gen_range(-3..=3))).collect();
        let dd = DecoratedDiagram::new(d, a, b).unwrap();
        let t = translate(&dd, i, &Scalar::Rational(ratio(num, 5))).unwrap();
        prop_assert_eq!(t.is_generic().unwrap(), dd.is_generic().unwrap());
    }
}
