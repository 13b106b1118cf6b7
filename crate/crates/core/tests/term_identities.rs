use mvtensor::terms::{grid_equal, parse_term};
use mvtensor::Signature;

/// MV identities as pairs of terms with their arity.
const MV_LAWS: &[(&str, &str, usize)] = &[
    ("(oplus x1 x2)", "(oplus x2 x1)", 2),
    ("(oplus x1 0)", "x1", 1),
    ("(neg (neg x1))", "x1", 1),
    ("(oplus x1 (neg 0))", "(neg 0)", 1),
    ("(oplus (neg (oplus (neg x1) x2)) x2)", "(oplus (neg (oplus (neg x2) x1)) x1)", 2),
    ("(odot x1 x2)", "(neg (oplus (neg x1) (neg x2)))", 2),
    ("(oplus x1 (oplus x2 x3))", "(oplus (oplus x1 x2) x3)", 3),
];

#[test]
fn mv_laws_hold_on_small_grids() {
    for &(l, r, arity) in MV_LAWS {
        for k in arity.max(1)..=arity.max(2) {
            let (a, b) = (parse_term(l, Signature::Mv, k).unwrap(), parse_term(r, Signature::Mv, k).unwrap());
            for d in 1..=6 {
                let v = grid_equal(&a, &b, k, d).unwrap();
                assert!(v.equal, "{l} = {r} fails on k={k}, d={d}: {:?}", v.witness);
            }
        }
    }
}

#[test]
fn product_laws_hold_on_small_grids() {
    let laws = [
        ("(prod x1 x2)", "(prod x2 x1)"),
        ("(prod x1 1)", "x1"),
        // Left distributivity over ⊕ when the summands are disjoint: x·(y ⊙ z*) ⊕ x·(y ∧ z) = x·y.
        ("(oplus (prod x1 (odot x2 (neg x1))) (prod x1 (neg (oplus (neg x2) (odot x2 (neg x1))))))", "(prod x1 x2)"),
    ];
    for (l, r) in laws {
        let (a, b) = (parse_term(l, Signature::Pmv, 2).unwrap(), parse_term(r, Signature::Pmv, 2).unwrap());
        for d in 1..=6 {
            assert!(grid_equal(&a, &b, 2, d).unwrap().equal, "{l} = {r} at d={d}");
        }
    }
}

#[test]
fn non_identities_are_refuted() {
    let a = parse_term("(oplus x1 x1)", Signature::Mv, 1).unwrap();
    let b = parse_term("x1", Signature::Mv, 1).unwrap();
    assert!(grid_equal(&a, &b, 1, 1).unwrap().equal);
    assert!(!grid_equal(&a, &b, 1, 2).unwrap().equal);
}
