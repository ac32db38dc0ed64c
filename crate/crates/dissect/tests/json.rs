use dissect::arrangement::BiArrangement;
use dissect::decoration::random_generic_rational;
use dissect::diagram::enumerate;
use dissect::hopf::{antipode_monomial, coproduct_diagram, Monomial, XParam};
use dissect::json::*;
use dissect::reduction::reduce;
use dissect::{render, DecoratedDiagram, DissectionDiagram};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn reparse(v: &serde_json::Value) -> serde_json::Value {
    serde_json::from_str(&v.to_string()).unwrap()
}

#[test]
fn every_diagram_of_degree_5_round_trips() {
    for n in 0..=5 {
        for d in enumerate(n).unwrap() {
            assert_eq!(diagram_from_json(&reparse(&diagram_to_json(&d))).unwrap(), d);
            let dd = DecoratedDiagram::symbolic(d);
            assert_eq!(decorated_from_json(&reparse(&decorated_to_json(&dd))).unwrap(), dd);
        }
    }
}

#[test]
fn invalid_diagrams_are_rejected() {
    // chords 2→0 and 3→1 cross
    let bad = serde_json::json!({"degree": 3, "parent": {"1": 0, "2": 0, "3": 1}});
    assert!(diagram_from_json(&bad).is_err());
    let short = serde_json::json!({"degree": 2, "parent": {"1": 0}});
    assert!(diagram_from_json(&short).is_err());
    let half = serde_json::json!({"degree": 1, "parent": {"1": 0}, "a": []});
    assert!(decorated_from_json(&half).is_err());
}

#[test]
fn algebra_and_tensor_elements_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for d in enumerate(3).unwrap() {
        for dd in [DecoratedDiagram::symbolic(d.clone()), random_generic_rational(&d, &mut rng)] {
            for x in [XParam::motivic(), XParam::Formal] {
                let t = coproduct_diagram(&x, &dd).unwrap();
                assert_eq!(tensor_from_json(&reparse(&tensor_to_json(&t))).unwrap(), t);
                let s = antipode_monomial(&x, &Monomial::from_diagram(dd.clone())).unwrap();
                assert_eq!(algebra_from_json(&reparse(&algebra_to_json(&s))).unwrap(), s);
            }
        }
    }
}

#[test]
fn arrangements_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for n in 0..=4 {
        for d in enumerate(n).unwrap() {
            for dd in [DecoratedDiagram::symbolic(d.clone()), random_generic_rational(&d, &mut rng)] {
                let a = BiArrangement::from_diagram(&dd).unwrap();
                assert_eq!(arrangement_from_json(&reparse(&arrangement_to_json(&a))).unwrap(), a);
            }
        }
    }
}

#[test]
fn formal_sums_round_trip_with_the_documented_schema() {
    let s = reduce(&DecoratedDiagram::symbolic(DissectionDiagram::path_tree(3))).unwrap();
    let v = formal_sum_to_json(&s);
    for t in v.as_array().unwrap() {
        assert!(t["coeff"].is_i64());
        assert!(t["symbol"]["a0"].is_object() && t["symbol"]["word"].is_array() && t["symbol"]["a_end"].is_object());
    }
    assert_eq!(formal_sum_from_json(&reparse(&v)).unwrap(), s);
}

#[test]
fn tikz_marks_the_root_hollow() {
    let t = render::to_tikz(&DecoratedDiagram::undecorated(DissectionDiagram::corolla(3)));
    assert_eq!(t.matches("fill=white, inner sep=1.5pt").count(), 1);
    assert_eq!(t.matches("\\draw[thick]").count(), 3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_decorations_round_trip(seed in any::<u64>(), n in 0usize..=5, which in any::<prop::sample::Index>()) {
        let all = enumerate(n).unwrap();
        let d = all[which.index(all.len())].clone();
        let dd = random_generic_rational(&d, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(decorated_from_json(&reparse(&decorated_to_json(&dd))).unwrap(), dd);
    }
}
