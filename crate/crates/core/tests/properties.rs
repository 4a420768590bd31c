use proptest::prelude::*;

use bihom_core::axioms::{builtin_identity_set, builtin_tags, parse_identity_set, print_identity_set, Variant};
use bihom_core::constructions::yau_twist;
use bihom_core::eval::{check_random_rational, ModelBinding};
use bihom_core::exact::{Matrix, Scalar, Tensor3};
use bihom_core::model::{parse_matrix, print_model, Item, ModelFile, OperatorDecl};
use bihom_core::structures::fixtures::n2;
use bihom_core::structures::{AlgebraPresentation, BimodulePresentation, OperatorKind, Variety};

fn scalar() -> impl Strategy<Value = Scalar> {
    (-30i64..=30, 1i64..=7).prop_map(|(n, d)| Scalar::ratio(n, d))
}

fn vector(n: usize) -> impl Strategy<Value = Vec<Scalar>> {
    prop::collection::vec(scalar(), n)
}

fn matrix(n: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(vector(n), n).prop_map(|rows| Matrix::from_rows(rows).unwrap())
}

fn tensor(n: usize) -> impl Strategy<Value = Tensor3> {
    prop::collection::vec(scalar(), n * n * n).prop_map(move |cs| {
        let mut t = Tensor3::square(n);
        for (idx, c) in cs.into_iter().enumerate() {
            t.set(idx / (n * n), (idx / n) % n, idx % n, c);
        }
        t
    })
}

fn algebra() -> impl Strategy<Value = AlgebraPresentation> {
    (1usize..=3, 0usize..Variety::ALL.len()).prop_flat_map(|(n, v)| {
        let variety = Variety::ALL[v];
        let np = variety.products().len();
        (matrix(n), matrix(n), prop::collection::vec(tensor(n), np)).prop_map(move |(a, b, ts)| {
            let products = variety.products().iter().map(|p| p.to_string()).zip(ts).collect();
            AlgebraPresentation::new("A x", variety, a, b, products).unwrap()
        })
    })
}

fn bimodule() -> impl Strategy<Value = BimodulePresentation> {
    (algebra(), 1usize..=2).prop_flat_map(|(base, d)| {
        let names = base.variety.action_names();
        let fams = prop::collection::vec(prop::collection::vec(matrix(d), base.dim), names.len());
        (Just(base), matrix(d), matrix(d), fams).prop_map(move |(base, b1, b2, fams)| {
            let actions = names.iter().cloned().zip(fams).collect();
            BimodulePresentation::new("M", base, b1, b2, actions).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn addition_and_multiplication_are_associative(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn scalar_text_round_trips(a in scalar()) {
        prop_assert_eq!(a.to_string().parse::<Scalar>().unwrap(), a);
    }

    #[test]
    fn composition_is_associative(a in matrix(3), b in matrix(3), c in matrix(3)) {
        let left = a.compose(&b).unwrap().compose(&c).unwrap();
        let right = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn products_are_bilinear(t in tensor(3), u in vector(3), v in vector(3), w in vector(3), c in scalar()) {
        let uv: Vec<Scalar> = u.iter().zip(&v).map(|(x, y)| x + &(&c * y)).collect();
        let lhs = t.apply(&uv, &w).unwrap();
        let a = t.apply(&u, &w).unwrap();
        let b = t.apply(&v, &w).unwrap();
        let rhs: Vec<Scalar> = a.iter().zip(&b).map(|(x, y)| x + &(&c * y)).collect();
        prop_assert_eq!(lhs, rhs);
        let lhs = t.apply(&w, &uv).unwrap();
        let a = t.apply(&w, &u).unwrap();
        let b = t.apply(&w, &v).unwrap();
        let rhs: Vec<Scalar> = a.iter().zip(&b).map(|(x, y)| x + &(&c * y)).collect();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn precompose_matches_pointwise(t in tensor(2), a in matrix(2), b in matrix(2), u in vector(2), v in vector(2)) {
        let p = t.precompose(&a, &b).unwrap();
        let direct = t.apply(&a.apply(&u).unwrap(), &b.apply(&v).unwrap()).unwrap();
        prop_assert_eq!(p.apply(&u, &v).unwrap(), direct);
    }

    #[test]
    fn algebra_files_round_trip(a in algebra()) {
        let m = ModelFile::single(Item::Algebra(a));
        let text = print_model(&m);
        let back = ModelFile::parse(&text).unwrap();
        prop_assert_eq!(print_model(&back), text);
        prop_assert_eq!(back, m);
    }

    #[test]
    fn bimodule_files_round_trip(b in bimodule(), op in matrix(2), w in scalar()) {
        let mut m = ModelFile::single(Item::Bimodule(b));
        m.push(Item::Operator(OperatorDecl {
            name: "R".into(),
            base: None,
            kind: Some(OperatorKind::RotaBaxter { weight: w }),
            op,
        }));
        let back = ModelFile::parse(&print_model(&m)).unwrap();
        prop_assert_eq!(back, m);
    }

    #[test]
    fn matrix_literals_round_trip(a in matrix(3)) {
        let rows: Vec<String> = (0..3)
            .map(|i| format!("[{}]", a.row(i).iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")))
            .collect();
        prop_assert_eq!(parse_matrix(&format!("[{}]", rows.join(", ")), 3).unwrap(), a);
    }

    /// A twist by diag(1, c) of N2 stays associative for every nonzero c,
    /// including at non-basis rational points.
    #[test]
    fn twisted_n2_is_associative_at_rational_points(c in scalar().prop_filter("nonzero", |c| !c.is_zero()), seed in any::<u64>()) {
        let sig = Matrix::diagonal(&[Scalar::one(), c]);
        let t = yau_twist(&n2(), &sig, &sig, 1).unwrap();
        let (set, _) = builtin_identity_set("bihom-associative", Variant::AsPrinted).unwrap();
        let bad = check_random_rational(set, &t.binding(), 5, seed).unwrap();
        prop_assert!(bad.is_empty(), "{:?}", bad);
    }
}

#[test]
fn builtin_sets_round_trip_through_text() {
    for tag in builtin_tags() {
        for v in [Variant::AsPrinted, Variant::Corrected] {
            let (set, _) = builtin_identity_set(tag, v).unwrap();
            let back = parse_identity_set(&print_identity_set(set).unwrap()).unwrap();
            assert_eq!(&back, set, "{tag}");
        }
    }
}

#[test]
fn binding_rejects_missing_symbols() {
    let (set, _) = builtin_identity_set("bihom-associative", Variant::AsPrinted).unwrap();
    let b = ModelBinding::new().with_dim("A", 1);
    assert!(check_random_rational(set, &b, 1, 0).is_err());
}
