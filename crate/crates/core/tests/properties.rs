use gradlie::algebra::{Tower, Vector};
use gradlie::catalog::Fixture;
use gradlie::cohomology::{coboundary, h1_via_complex};
use gradlie::derivations::{derivations_at, h1, in_span, inner_at, GradedOperator};
use gradlie::exactla::{format_scalar, nullspace, parse_scalar, rank, Scalar, SparseMatrix};
use proptest::prelude::*;

fn fixture() -> impl Strategy<Value = Fixture> {
    prop::sample::select(Fixture::ALL.to_vec())
}

fn matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..6, 1usize..7).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-3i64..=3, c), r)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn nullspace_is_annihilated(rows in matrix()) {
        let m = SparseMatrix::from_dense(&rows);
        let ns = nullspace(&m);
        prop_assert_eq!(ns.len() + rank(&m), m.cols());
        for v in &ns {
            prop_assert!(m.mul_vec(v).iter().all(|x| *x == Scalar::from_integer(0.into())));
        }
    }

    #[test]
    fn scalars_round_trip(p in -1000i64..1000, q in 1i64..1000) {
        let s = Scalar::new(p.into(), q.into());
        prop_assert_eq!(parse_scalar(&format_scalar(&s)).unwrap(), s);
    }

    #[test]
    fn computed_derivations_satisfy_leibniz(f in fixture(), n in 6u32..11, w in -3i64..5) {
        let l = f.build(n.max(f.min_truncation())).unwrap();
        for d in derivations_at(&l, w).unwrap() {
            prop_assert_eq!(d.leibniz_failure(&l).unwrap(), None);
            prop_assert!(coboundary(&l, &d, w).unwrap().is_zero());
        }
    }

    #[test]
    fn inner_derivations_are_derivations(f in fixture(), n in 6u32..11, w in 0i64..5) {
        let l = f.build(n.max(f.min_truncation())).unwrap();
        let space = derivations_at(&l, w).unwrap();
        for ad in inner_at(&l, w).unwrap() {
            prop_assert!(in_span(&l, w, &space, &ad));
        }
    }
}

#[test]
fn ad_of_a_sum_is_the_sum_of_ads() {
    let l = Fixture::WittPos.build(10).unwrap();
    let two = parse_scalar("2").unwrap();
    let mut v = Vector::basis(1);
    v.add_term(2, &two);
    let lhs = GradedOperator::ad(&l, &v).unwrap();
    let rhs = GradedOperator::ad(&l, &Vector::basis(1))
        .unwrap()
        .add(&GradedOperator::ad(&l, &Vector::basis(2)).unwrap().scale(&two));
    assert_eq!(lhs, rhs);
}

#[test]
fn two_routes_to_first_cohomology_agree() {
    for (f, n, m) in [(Fixture::N1, 12, 3), (Fixture::N2, 12, 8), (Fixture::Rn1, 12, 3)] {
        let t = Tower::from_top(f.build(n + m).unwrap(), m).unwrap();
        let a = h1(&t).unwrap();
        let b = h1_via_complex(&t).unwrap();
        for (x, y) in a.records.iter().zip(&b.records) {
            assert_eq!((x.weight, x.dim_lo()), (y.weight, y.dim_lo()), "{f}");
        }
    }
}
