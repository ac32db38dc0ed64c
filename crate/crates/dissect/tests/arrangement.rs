use dissect::arrangement::*;
use dissect::decoration::random_generic_rational;
use dissect::diagram::{enumerate, subsets};
use dissect::scalar::rat;
use dissect::{DecoratedDiagram, DissectionDiagram, Scalar};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

fn shift(s: &BTreeSet<usize>) -> BTreeSet<usize> {
    s.iter().map(|i| i - 1).collect()
}

fn agree(d: &DecoratedDiagram) {
    let n = d.degree();
    let a = BiArrangement::from_diagram(d).unwrap();
    for i in subsets(n) {
        for j in subsets(n + 1) {
            let j: BTreeSet<usize> = shift(&j);
            let lin = a.stratum(&shift(&i), &j).unwrap();
            let gr = graph_cycle_criterion(d, &i, &j).unwrap();
            assert_eq!(lin, gr, "{:?} I={i:?} J={j:?}", d.diagram);
        }
    }
}

#[test]
fn stratum_matches_cycle_criterion_degree_4() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 0..=4 {
        for d in enumerate(n).unwrap() {
            for _ in 0..5 {
                agree(&random_generic_rational(&d, &mut rng));
            }
        }
    }
}

#[test]
fn stratum_matches_cycle_criterion_formal_degree_3() {
    for n in 0..=3 {
        for d in enumerate(n).unwrap() {
            agree(&DecoratedDiagram::symbolic(d));
        }
    }
}

#[test]
fn full_chord_set_has_full_codimension() {
    for n in 1..=4 {
        for d in enumerate(n).unwrap() {
            let a = BiArrangement::from_diagram(&DecoratedDiagram::symbolic(d)).unwrap();
            let all: BTreeSet<usize> = (0..n).collect();
            assert_eq!(a.stratum(&all, &BTreeSet::new()).unwrap(), Stratum::Codim(n));
        }
    }
}

fn small_decorations<R: Rng>(d: &DissectionDiagram, rng: &mut R) -> DecoratedDiagram {
    let n = d.degree();
    let mut draw = || Scalar::int(rng.gen_range(-2..=2));
    let a = (0..n).map(|_| draw()).collect();
    let b = (0..=n).map(|_| draw()).collect();
    DecoratedDiagram::new(d.clone(), a, b).unwrap()
}

#[test]
fn affine_genericity_iff_diagram_genericity() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let (mut yes, mut no) = (0, 0);
    for n in 0..=4 {
        for d in enumerate(n).unwrap() {
            for _ in 0..5 {
                let dd = small_decorations(&d, &mut rng);
                let g = dd.is_generic().unwrap();
                let a = BiArrangement::from_diagram(&dd).unwrap();
                assert_eq!(a.is_affinely_generic().unwrap(), g, "{dd:?}");
                if g {
                    yes += 1
                } else {
                    no += 1
                }
            }
            let dd = random_generic_rational(&d, &mut rng);
            assert!(BiArrangement::from_diagram(&dd).unwrap().is_affinely_generic().unwrap());
        }
    }
    assert!(yes > 10 && no > 10, "both outcomes exercised: {yes} {no}");
}

#[test]
fn worked_examples() {
    let d1 = DecoratedDiagram::symbolic(DissectionDiagram::corolla(1));
    let a = BiArrangement::from_diagram(&d1).unwrap();
    assert_eq!(a.l[0].coeffs, vec![rat(1)]);
    assert_eq!(a.m[0].constant, Scalar::symbol("b0").neg());
    assert_eq!(a.m[1].constant, Scalar::symbol("b1").neg());
    // triangle root–1 with the chord closes a cycle
    let i: BTreeSet<usize> = [1].into();
    let j: BTreeSet<usize> = [0, 1].into();
    assert_eq!(graph_cycle_criterion(&d1, &i, &j).unwrap(), Stratum::Empty);
    assert_eq!(a.stratum(&[0].into(), &j).unwrap(), Stratum::Empty);
    for n in 1..=5 {
        let c = BiArrangement::from_diagram(&DecoratedDiagram::symbolic(DissectionDiagram::corolla(n))).unwrap();
        for (i, f) in c.l.iter().enumerate() {
            let mut e = vec![rat(0); n];
            e[i] = rat(1);
            assert_eq!(f.coeffs, e);
            assert_eq!(f.constant, Scalar::symbol(&format!("a{}", i + 1)).neg());
        }
    }
    let all = BiArrangement::from_diagram(&DecoratedDiagram::symbolic(DissectionDiagram::corolla(3))).unwrap();
    let none = all.delete(Side::L, &BTreeSet::new()).unwrap().delete(Side::M, &BTreeSet::new()).unwrap();
    assert!(none.l.is_empty() && none.m.is_empty());
}

#[test]
fn float_mode_is_rejected() {
    let d = DecoratedDiagram::new(DissectionDiagram::corolla(1), vec![Scalar::float(0.5, 0.0)], vec![Scalar::float(1.0, 0.0), Scalar::float(2.0, 0.0)]).unwrap();
    assert_eq!(BiArrangement::from_diagram(&d).unwrap_err(), ArrangementError::FloatMode);
}

#[test]
fn q_and_r_isomorphisms_degree_4() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for n in 0..=4 {
        for d in enumerate(n).unwrap() {
            let sym = DecoratedDiagram::symbolic(d.clone());
            let num = random_generic_rational(&d, &mut rng);
            for c in subsets(n) {
                for dd in [&sym, &num] {
                    check_q_isomorphism(dd, &c).unwrap_or_else(|e| panic!("q {d:?} {c:?}: {e}"));
                    check_r_isomorphism(dd, &c).unwrap_or_else(|e| panic!("r {d:?} {c:?}: {e}"));
                }
            }
        }
    }
}

#[test]
fn deletion_and_contraction_commute_degree_3() {
    for n in 1..=3 {
        for d in enumerate(n).unwrap() {
            let a = BiArrangement::from_diagram(&DecoratedDiagram::symbolic(d)).unwrap();
            for keep in subsets(n) {
                let keep = shift(&keep);
                for onto in subsets(n + 1) {
                    let onto = shift(&onto);
                    let Ok(x) = a.delete(Side::L, &keep).unwrap().contract(Side::M, &onto) else {
                        continue;
                    };
                    let y = a.contract(Side::M, &onto).unwrap().delete(Side::L, &keep).unwrap();
                    assert_eq!(x, y);
                }
                // deleting M-forms commutes with contracting L-forms
                let l_onto = keep.clone();
                for mkeep in subsets(n + 1) {
                    let mkeep = shift(&mkeep);
                    let x = a.delete(Side::M, &mkeep).unwrap().contract(Side::L, &l_onto).unwrap();
                    let y = a.contract(Side::L, &l_onto).unwrap().delete(Side::M, &mkeep).unwrap();
                    assert_eq!(x, y);
                }
            }
        }
    }
}

#[test]
fn products_stay_generic_degree_2() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let mut all = Vec::new();
    for n in 0..=2 {
        for d in enumerate(n).unwrap() {
            all.push(BiArrangement::from_diagram(&random_generic_rational(&d, &mut rng)).unwrap());
        }
    }
    for x in &all {
        for y in &all {
            let p = x.product(y);
            assert_eq!(p.dim, x.dim + y.dim);
            assert!(p.is_affinely_generic().unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cycle_criterion_on_random_degree_3(seed in any::<u64>(), which in 0usize..12) {
        let d = enumerate(3).unwrap()[which].clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        agree(&random_generic_rational(&d, &mut rng));
    }
}
