use num_bigint::BigInt;
use num_rational::BigRational;

use super::*;

fn q(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

fn w(s: &str) -> Word {
    Word::from(s)
}

#[test]
fn int_encoding_examples() {
    let g = make_int_group();
    assert_eq!(g.identity(), &[w("0")]);
    assert_eq!(g.encode_int(0).unwrap(), vec![w("0")]);
    assert_eq!(g.encode_int(3).unwrap(), vec![w("110")]);
    assert_eq!(g.encode_int(-6).unwrap(), vec![w("0101")]);
    for v in -64..=64 {
        let e = g.encode_int(v).unwrap();
        assert!(g.contains(&e), "{v}");
        assert_eq!(g.decode_int(&e), Some(BigInt::from(v)));
    }
}

#[test]
fn int_addition_matches_arithmetic() {
    let g = make_int_group();
    let enc = |v: i64| g.encode_int(v).unwrap();
    assert_eq!(g.sum(&enc(3), &enc(5)).unwrap(), Some(enc(8)));
    assert_eq!(g.negate(&enc(7)).unwrap(), Some(enc(-7)));
    for a in -20..=20 {
        for b in -20..=20 {
            assert_eq!(g.sum(&enc(a), &enc(b)).unwrap(), Some(enc(a + b)), "{a}+{b}");
        }
        assert_eq!(g.negate(&enc(a)).unwrap(), Some(enc(-a)));
    }
}

#[test]
fn domains_are_canonical() {
    for g in [make_int_group(), make_separated_int_group(3).unwrap(), make_madic_group(3).unwrap()] {
        let elems = g.domain().enumerate(6);
        let mut values: Vec<_> = elems.iter().map(|e| g.decode(e).expect("decodes")).collect();
        for (e, v) in elems.iter().zip(&values) {
            assert_eq!(&g.encode(v).unwrap(), e);
        }
        values.sort();
        values.dedup();
        assert_eq!(values.len(), elems.len(), "{}", g.kind());
    }
}

#[test]
fn separated_examples() {
    let g = make_separated_int_group(6).unwrap();
    assert_eq!(g.encode_int(3).unwrap(), vec![w("1000001000000")]);
    let enc = |v: i64| g.encode_int(v).unwrap();
    assert_eq!(g.sum(&enc(32), &enc(32)).unwrap(), Some(enc(64)));
    assert_eq!(g.sum(&enc(5), &enc(-9)).unwrap(), Some(enc(-4)));
    for v in -64..=64 {
        assert_eq!(g.decode_int(&enc(v)), Some(BigInt::from(v)));
    }
    let one = make_separated_int_group(1).unwrap();
    let int = make_int_group();
    assert_eq!(one.domain(), int.domain());
    assert_eq!(one.add(), int.add());
    assert!(make_separated_int_group(0).is_err());
}

#[test]
fn madic_examples() {
    let g2 = make_madic_group(2).unwrap();
    assert_eq!(g2.identity(), g2.encode(&[q(0, 1)]).unwrap().as_slice());
    let half = g2.encode(&[q(1, 2)]).unwrap();
    assert_eq!(g2.sum(&half, &half).unwrap(), Some(g2.encode(&[q(1, 1)]).unwrap()));
    let g3 = make_madic_group(3).unwrap();
    let a = g3.encode(&[q(1, 3)]).unwrap();
    let b = g3.encode(&[q(5, 9)]).unwrap();
    assert_eq!(g3.sum(&a, &b).unwrap(), Some(g3.encode(&[q(8, 9)]).unwrap()));
    assert!(g3.encode(&[q(1, 2)]).is_err());
    assert!(make_madic_group(1).is_err());
}

#[test]
fn madic_addition_matches_arithmetic() {
    let g = make_madic_group(3).unwrap();
    let mut vals = Vec::new();
    for l in 0..=2 {
        for a in [-13i64, -5, -1, 0, 1, 2, 7, 30] {
            vals.push(q(a, 3i64.pow(l)));
        }
    }
    for x in &vals {
        for y in &vals {
            let s = g.sum(&g.encode(std::slice::from_ref(x)).unwrap(), &g.encode(std::slice::from_ref(y)).unwrap()).unwrap();
            assert_eq!(s, Some(g.encode(&[x + y]).unwrap()), "{x} + {y}");
        }
        let n = g.negate(&g.encode(std::slice::from_ref(x)).unwrap()).unwrap();
        assert_eq!(n, Some(g.encode(&[-x]).unwrap()));
    }
}

#[test]
fn product_of_integers() {
    let z = make_int_group();
    let g = product_group(&z, &z).unwrap();
    assert_eq!(g.width(), 2);
    assert_eq!(g.identity(), &[w("0"), w("0")]);
    let a = g.encode(&[q(3, 1), q(-1, 1)]).unwrap();
    let b = g.encode(&[q(-3, 1), q(1, 1)]).unwrap();
    assert_eq!(g.sum(&a, &b).unwrap(), Some(g.identity().to_vec()));
    assert_eq!("product(int,separated(6))".parse::<GroupKind>().unwrap().width(), 2);
}

#[test]
fn constant_multiplication() {
    let g = make_madic_group(2).unwrap();
    let id = mult_by_constant(&g, 1, 0).unwrap();
    let diag = g.structure(DEFAULT_BUDGET).compile(
        &Formula::and(Formula::atom("D", &["a", "b"]), Formula::and(Formula::eq("a", "c"), Formula::eq("b", "d"))),
        &["a", "b", "c", "d"],
    );
    assert_eq!(id, diag.unwrap());
    let f = mult_by_constant(&g, 3, 1).unwrap();
    let ap = |v: BigRational| f.apply(&g.encode(&[v]).unwrap(), &[2, 3]).unwrap();
    assert_eq!(ap(q(4, 1)), Some(g.encode(&[q(6, 1)]).unwrap()));
    assert_eq!(ap(q(1, 2)), Some(g.encode(&[q(3, 4)]).unwrap()));
    let double = mult_by_constant(&g, 2, 0).unwrap();
    for t in 0..=2 {
        for b in -16..=16 {
            let x = q(b, 1 << t);
            let y = double.apply(&g.encode(std::slice::from_ref(&x)).unwrap(), &[2, 3]).unwrap();
            assert_eq!(y, Some(g.encode(&[x * q(2, 1)]).unwrap()));
        }
    }
    assert!(double.is_function(&[2, 3]).unwrap());
}

#[test]
fn integer_group_axioms_hold() {
    let report = verify_group_axioms(&make_int_group(), 6).unwrap();
    assert!(report.passed(), "{report}");
}

#[test]
fn corrupted_adder_breaks_identity() {
    let g = make_int_group();
    // x + y + 1 instead of x + y
    let bad = linear_relation(IntLayout::binary(), 4, &int_terms(&[1, 1, 1, -1]), DEFAULT_BUDGET).unwrap();
    let one = AutomaticRelation::singleton(&[w("10")]).cylindrify(0).unwrap().cylindrify(0).unwrap().cylindrify(3).unwrap();
    let st = {
        let mut st = Structure::new();
        st.insert("B", bad);
        st.insert("One", one);
        st.insert("D", g.domain().clone());
        st
    };
    let f = Formula::exists(
        "o",
        Formula::and_all(vec![
            Formula::atom("B", &["x", "y", "o", "z"]),
            Formula::atom("One", &["x", "y", "o", "z"]),
            Formula::atom("D", &["x"]),
            Formula::atom("D", &["y"]),
            Formula::atom("D", &["z"]),
        ]),
    );
    let add = st.compile(&f, &["x", "y", "z"]).unwrap();
    let corrupted =
        FaGroup::from_parts(GroupKind::Int, g.domain().clone(), add, g.neg().clone(), g.identity().to_vec()).unwrap();
    let report = verify_group_axioms(&corrupted, 4).unwrap();
    assert!(report.failures().contains(&"identity"), "{report}");
}
