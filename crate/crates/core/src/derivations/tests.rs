use super::*;
use crate::catalog::{
    abelian, closed_form_derivation, closed_form_derivations, ClosedForm, ExtensionParams, Fixture, Param, Reading,
};
use crate::exactla::int;

fn tower(f: Fixture, n: u32, margin: u32) -> Tower {
    Tower::from_top(f.build(n + margin).unwrap(), margin).unwrap()
}

fn flat(n: u32, truncation: u32) -> TruncatedAlgebra {
    let basis = (1..=n).map(|i| BasisElement::new(i, 1)).collect();
    TruncatedAlgebra::new("flat", basis, StructureTable::new(), truncation, 1).unwrap()
}

#[test]
fn abelian_derivations_are_all_maps() {
    let l = abelian(3);
    assert_eq!(derivations_at(&l, 0).unwrap().len(), 9);
    assert!(inner_space(&l).unwrap().is_empty());
}

#[test]
fn n1_stable_pattern() {
    let r = derivation_space(&tower(Fixture::N1, 18, 3)).unwrap();
    let dims: Vec<(i64, usize)> = r
        .stable()
        .filter(|w| w.weight >= 0)
        .map(|w| (w.weight, w.dim_lo))
        .collect();
    assert!(dims.len() >= 10);
    for (w, d) in dims {
        assert_eq!(d, if w % 3 == 0 { 2 } else { 1 }, "weight {w}");
    }
    for rec in r.stable().filter(|w| w.weight < 0) {
        assert_eq!(rec.dim_lo, 0, "weight {}", rec.weight);
    }
}

#[test]
fn oracle_agrees_with_full_system() {
    for f in [Fixture::N1, Fixture::N2] {
        let l = f.build(15).unwrap();
        for w in slice::weight_range(&l) {
            let full = derivations_at(&l, w).unwrap();
            let gen = derivations_by_generators(&l, w).unwrap();
            assert_eq!(full.len(), gen.len(), "{f} weight {w}");
            assert!(same_span(&l, w, &full, &gen), "{f} weight {w}");
        }
    }
}

#[test]
fn closed_forms_lie_in_computed_spaces() {
    for form in ClosedForm::ALL {
        let n = 20;
        let l = form.fixture().build(n).unwrap();
        for (p, d) in closed_form_derivations(form, n).unwrap() {
            assert_eq!(d.leibniz_failure(&l).unwrap(), None, "{} {p}", form.name());
            let w = form.weight(p).unwrap();
            let space = derivations_at(&l, w).unwrap();
            assert!(in_span(&l, w, &space, &d), "{} {p}", form.name());
        }
    }
}

#[test]
fn literal_n2_readings_fail_leibniz() {
    let l = Fixture::N2.build(24).unwrap();
    for p in [Param::Alpha(1), Param::Alpha(8)] {
        let d = closed_form_derivation(ClosedForm::N2, p, Reading::Literal, &l).unwrap();
        assert!(d.leibniz_failure(&l).unwrap().is_some(), "{p}");
    }
}

#[test]
fn inner_derivations() {
    let l = Fixture::N1.build(12).unwrap();
    let ad = GradedOperator::ad(&l, &Vector::basis(1)).unwrap();
    assert_eq!(ad.image(3), Vector::basis(4));
    let inner = inner_at(&l, 1).unwrap();
    assert_eq!(inner.len(), 1);
    assert!(in_span(&l, 1, &derivations_at(&l, 1).unwrap(), &inner[0]));

    let r = Fixture::Rn1.build(12).unwrap();
    let adx = GradedOperator::ad(&r, &Vector::basis(1)).unwrap();
    // [x, e_{3i-2}] = -i e_{3i-2}, e4 has index 6
    assert_eq!(adx.image(6), Vector::basis(6).scale(&int(-2)));
}

#[test]
fn h1_and_completeness() {
    let t = tower(Fixture::N1, 15, 3);
    let h = h1(&t).unwrap();
    assert_eq!(h.record(0).unwrap().dim_lo(), 2);
    assert!(!completeness_check(&t).unwrap().complete);

    let t = tower(Fixture::Rn1, 15, 3);
    let c = completeness_check(&t).unwrap();
    assert!(c.complete, "{:?}", c.obstructions());
    assert!(c.stable_weights() >= 10);
}

#[test]
fn potential_nilpotency() {
    let l = Fixture::N1.build(12).unwrap();
    let ad = GradedOperator::ad(&l, &Vector::basis(1)).unwrap();
    assert!(is_potentially_nilpotent(&l, &ad).unwrap().nilpotent);
    assert!(is_potentially_nilpotent(&l, &GradedOperator::zero()).unwrap().nilpotent);

    let r = Fixture::Rn1.build(12).unwrap();
    let adx = GradedOperator::ad(&r, &Vector::basis(1)).unwrap();
    let res = is_potentially_nilpotent(&r, &adx).unwrap();
    assert!(!res.nilpotent);
    assert!(res.eventual_image.contains(&Vector::basis(3)));
}

#[test]
fn nil_independence() {
    assert_eq!(nil_independent_count(&tower(Fixture::N1, 15, 3)).unwrap(), 2);
    assert_eq!(nil_independent_count(&tower(Fixture::N2, 16, 8)).unwrap(), 2);
    let t = Tower::new(flat(1, 2), flat(1, 3), 1).unwrap();
    assert_eq!(nil_independent_count(&t).unwrap(), 1);
}

fn rn1_generators(l: &TruncatedAlgebra) -> Vec<(String, GradedOperator)> {
    let a = closed_form_derivation(ClosedForm::N1, Param::Alpha(1), Reading::Corrected, l).unwrap();
    let b = closed_form_derivation(ClosedForm::N1, Param::Beta(2), Reading::Corrected, l).unwrap();
    vec![("x".into(), a.clone()), ("y".into(), b.add(&a.scale(&int(-1))))]
}

#[test]
fn extension_reproduces_rn1() {
    let n = 15;
    let base = Fixture::N1.build(n).unwrap();
    let ext = build_extension(&base, &ExtensionSpec::new(rn1_generators(&base))).unwrap();
    let moved = ext
        .reindexed(|i| if i <= n { i + 2 } else { i - n })
        .unwrap()
        .with_name("Rn1");
    assert_eq!(moved, Fixture::Rn1.build_with(&ExtensionParams::zero(), n).unwrap());
}

#[test]
fn extension_rejects_non_derivations() {
    let base = Fixture::N1.build(9).unwrap();
    let bad = GradedOperator::from_images([(1, Vector::basis(1))]);
    let err = build_extension(&base, &ExtensionSpec::new(vec![("g".into(), bad)])).unwrap_err();
    assert!(matches!(err, Error::NotADerivation { position: 0, .. }));

    let mut spec = ExtensionSpec::new(rn1_generators(&base));
    spec.brackets.insert((0, 1), Vector::basis(3));
    spec.brackets.insert((1, 0), Vector::basis(3));
    assert!(matches!(build_extension(&base, &spec), Err(Error::NonAntisymmetricBracket(0, 1))));
}

#[test]
fn extension_of_n2_by_diagonal_operators() {
    let base = Fixture::N2.build(32).unwrap();
    let a = closed_form_derivation(ClosedForm::N2, Param::Alpha(1), Reading::Corrected, &base).unwrap();
    let b = closed_form_derivation(ClosedForm::N2, Param::Beta(2), Reading::Corrected, &base).unwrap();
    let spec = ExtensionSpec::new(vec![("x".into(), a), ("y".into(), b)]);
    assert!(build_extension(&base, &spec).is_ok());
}

#[test]
fn non_graded_input_is_rejected() {
    let r = Fixture::Rn1
        .build_with(&ExtensionParams::zero().with(2, int(1)), 12);
    if let Ok(r) = r {
        assert!(matches!(derivations_at(&r, 0), Err(Error::NotGraded { .. })));
    }
}
