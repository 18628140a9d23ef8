use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::catalog::{abelian, Fixture};
use crate::derivations::derivations_at;
use crate::exactla::int;

fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<Scalar> {
    (0..n)
        .map(|_| match rng.gen_range(0..3) {
            0 => Scalar::zero(),
            _ => Scalar::new(rng.gen_range(-5..=5).into(), rng.gen_range(1..=3).into()),
        })
        .collect()
}

fn window_triples(l: &TruncatedAlgebra, w: i64) -> Vec<(u32, u32, u32)> {
    let b = l.basis();
    let mut out = Vec::new();
    for i in 0..b.len() {
        for j in i + 1..b.len() {
            for k in j + 1..b.len() {
                let s = i64::from(b[i].degree + b[j].degree + b[k].degree);
                if in_window(l, s, w) {
                    out.push((b[i].index, b[j].index, b[k].index));
                }
            }
        }
    }
    out
}

#[test]
fn abelian_plane() {
    let l = abelian(2);
    let total: usize = weights_2(&l).into_iter().map(|w| h2_at(&l, w).unwrap().h()).sum();
    assert_eq!(total, 2);
    let s = h2_at(&l, -1).unwrap();
    assert_eq!((s.z(), s.coboundary_dim, s.h()), (2, 0, 2));
    assert!(d1_matrix(&l, 0).2.is_zero());
    assert_eq!(cocycles_1(&l, 0), 4);
}

#[test]
fn inner_derivations_are_cocycles() {
    let l = Fixture::N1.build(12).unwrap();
    let ad = GradedOperator::ad(&l, &Vector::basis(1)).unwrap();
    assert!(coboundary(&l, &ad, 1).unwrap().is_zero());
    let (c1, _, d1) = d1_matrix(&l, 1);
    assert_eq!(rank(&d1), c1.len() - derivations_at(&l, 1).unwrap().len());
}

#[test]
fn d1_matrix_matches_direct_coboundary() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for f in [Fixture::N1, Fixture::Rn2] {
        let l = f.build(12).unwrap();
        for w in [-2, 0, 3] {
            let (c1, c2, d1) = d1_matrix(&l, w);
            let x = random_vector(&mut rng, c1.len());
            let op = c1.to_operator(&l, &x);
            let direct = coboundary(&l, &op, w).unwrap();
            assert_eq!(c2.to_cochain(&l, &d1.mul_vec(&x)), direct, "{f} weight {w}");
        }
    }
}

#[test]
fn d_squared_vanishes() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for f in [Fixture::N1, Fixture::N2, Fixture::Rn1, Fixture::WittPos] {
        let l = f.build(10).unwrap();
        for w in [-1, 0, 2] {
            let c1 = CochainSlice::new(&l, 1, w);
            let op = c1.to_operator(&l, &random_vector(&mut rng, c1.len()));
            let phi = coboundary(&l, &op, w).unwrap();
            for t in window_triples(&l, w) {
                assert!(d2_residual(&l, &phi, t).unwrap().is_zero(), "{f} {t:?}");
            }
        }
    }
}

#[test]
fn residual_detects_non_cocycles() {
    let l = Fixture::N1.build(8).unwrap();
    let mut phi = Cochain2::zero(0);
    phi.add(1, 2, &Vector::basis(3));
    let hit = window_triples(&l, 0)
        .into_iter()
        .any(|t| !d2_residual(&l, &phi, t).unwrap().is_zero());
    assert!(hit);
    assert!(matches!(
        d2_residual(&l, &phi, (6, 7, 8)),
        Err(Error::OutOfWindow { .. })
    ));
}

#[test]
fn sliced_dimensions_add_up() {
    let l = Fixture::N1.build(8).unwrap();
    let full = nullspace(&cocycle_system(&l, &CochainSlice::unsliced(&l, 2))).len();
    let sliced: usize = weights_2(&l).into_iter().map(|w| h2_at(&l, w).unwrap().z()).sum();
    assert_eq!(full, sliced);
}

#[test]
fn rn1_second_cohomology_vanishes_on_stable_weights() {
    let t = Tower::from_top(Fixture::Rn1.build(15).unwrap(), 3).unwrap();
    let r = h2(&t).unwrap();
    assert!(r.stable().count() >= 8);
    for rec in r.stable() {
        assert_eq!(rec.h_lo(), 0, "weight {}", rec.weight);
    }
}

#[test]
fn h1_from_the_complex() {
    let t = Tower::from_top(Fixture::N1.build(15).unwrap(), 3).unwrap();
    let r = h1_via_complex(&t).unwrap();
    assert_eq!(r.record(0).unwrap().dim_lo(), 2);
}

#[test]
fn cochain_coordinates_round_trip() {
    let l = Fixture::N1.build(9).unwrap();
    let c2 = CochainSlice::new(&l, 2, 1);
    let mut phi = Cochain2::zero(1);
    phi.add(3, 1, &Vector::basis(5).scale(&int(2)));
    let x = c2.coords(&l, &phi).unwrap();
    assert_eq!(c2.to_cochain(&l, &x), phi);
    assert_eq!(phi.value(1, 3), Vector::basis(5).scale(&int(-2)));
}
