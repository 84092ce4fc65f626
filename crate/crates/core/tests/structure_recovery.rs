use ordplanes::generators::{perturb, random_projectivity, random_set};
use ordplanes::geometry::Projectivity;
use ordplanes::linalg;
use ordplanes::poly::HPoly;
use ordplanes::quadrics::QForm;
use ordplanes::structure::*;
use ordplanes::{plane_census, Error, ExtremalKind, ExtremalSpec, PointSet, ProjPoint, Scalar};
use proptest::prelude::*;

fn build(kind: ExtremalKind, m: usize, apex: (i64, i64), removed: Option<usize>) -> PointSet {
    let mut spec = ExtremalSpec::new(kind, m).with_apex_ints(apex.0, apex.1);
    if let Some(r) = removed {
        spec = spec.removing(r);
    }
    spec.build().unwrap()
}

fn form(terms: &[([u32; 4], i64)]) -> QForm {
    let t = terms.iter().map(|(e, c)| (e.to_vec(), Scalar::from_int(*c))).collect();
    QForm::from_hpoly(&HPoly::from_terms(4, 2, t).unwrap()).unwrap()
}

fn span_rank(forms: &[&QForm]) -> usize {
    linalg::rank(&forms.iter().map(|f| f.coefficient_vector()).collect())
}

/// The expected verdict kind: odd anti-prisms are prisms up to projectivity.
fn expected(kind: ExtremalKind, m: usize, minus: bool) -> VerdictKind {
    match (kind, m % 2 == 1, minus) {
        (ExtremalKind::Prism, _, false) | (ExtremalKind::AntiPrism, true, false) => VerdictKind::Prism,
        (ExtremalKind::Prism, _, true) | (ExtremalKind::AntiPrism, true, true) => VerdictKind::PrismMinusPoint,
        (ExtremalKind::AntiPrism, false, false) => VerdictKind::AntiPrism,
        (ExtremalKind::AntiPrism, false, true) => VerdictKind::AntiPrismMinusPoint,
    }
}

#[test]
fn prism_six_pencil() {
    let s = build(ExtremalKind::Prism, 6, (0, 0), None);
    let r = recover_pencil(&s, RecoverOptions::default()).unwrap();
    assert_eq!(r.fit, FitMethod::Global { dim: 2 });
    assert_eq!(r.inliers, (0..12).collect::<Vec<_>>());
    assert!(r.outliers.is_empty());
    for p in &s.points {
        assert!(r.pencil.contains(p));
    }
    // X3 X4, and X1^2 + X2^2 - X3^2 - X4^2 for apex (0, 0)
    let pair = form(&[([0, 0, 1, 1], 1)]);
    let cone = form(&[([2, 0, 0, 0], 1), ([0, 2, 0, 0], 1), ([0, 0, 2, 0], -1), ([0, 0, 0, 2], -1)]);
    for f in [&pair, &cone] {
        assert_eq!(span_rank(&[&r.pencil.psi1, &r.pencil.psi2, f]), 2);
    }

    let minus = s.without(4);
    let r2 = recover_pencil(&minus, RecoverOptions::default()).unwrap();
    assert_eq!((r2.inliers.len(), r2.outliers.len()), (11, 0));
    let [a, b, c, d] = [&r.pencil.psi1, &r.pencil.psi2, &r2.pencil.psi1, &r2.pencil.psi2];
    assert_eq!(span_rank(&[a, b, c, d]), 2);
}

#[test]
fn recovered_pencils_on_all_extremal_instances() {
    for kind in [ExtremalKind::Prism, ExtremalKind::AntiPrism] {
        for m in 3..=10 {
            let removals: Vec<Option<usize>> = if m == 3 { vec![None] } else { vec![None, Some(1), Some(m + 2)] };
            for rem in removals {
                let s = build(kind, m, (1, 2), rem);
                let r = recover_pencil(&s, RecoverOptions::default()).unwrap();
                assert!(r.outliers.is_empty(), "{kind:?} {m} {rem:?}");
                assert_eq!(span_rank(&[&r.pencil.psi1, &r.pencil.psi2]), 2);
                for &i in &r.inliers {
                    assert!(r.pencil.psi1.eval(s.points[i].coords()).is_zero());
                    assert!(r.pencil.psi2.eval(s.points[i].coords()).is_zero());
                }
            }
        }
    }
}

#[test]
fn generic_sets_have_no_long_segment() {
    for seed in 0..4 {
        let s = random_set(12, seed, 40).unwrap();
        let r = recover_pencil(&s, RecoverOptions::default());
        assert!(matches!(r, Err(Error::NoSegmentLongEnough(13))), "seed {seed}: {r:?}");
    }
}

#[test]
fn outlier_budget_is_enforced() {
    // a prism plus one generic point: the pencil survives on 20 of 21 points
    let mut pts = build(ExtremalKind::Prism, 10, (0, 0), None).points;
    pts.push(ProjPoint::from_ints([3, 5, 7, 11]));
    let s = PointSet::from_points(pts).unwrap();
    let loose = RecoverOptions {
        outlier_budget: 1,
        min_segment: 1,
        jobs: 2,
    };
    let r = recover_pencil(&s, loose).unwrap();
    assert!(matches!(r.fit, FitMethod::Segment { .. }));
    assert_eq!(r.outliers, vec![20]);
    assert_eq!(r.inliers, (0..20).collect::<Vec<_>>());
    let tight = RecoverOptions { outlier_budget: 0, ..loose };
    assert!(matches!(
        recover_pencil(&s, tight),
        Err(Error::BudgetExceeded { outliers: 1, budget: 0 })
    ));
}

fn check_cover(s: &PointSet, c: &PencilCover) {
    assert!(c.uncovered.is_empty());
    let mut seen = vec![false; s.len()];
    for comp in &c.components {
        let p = comp.pencil();
        assert_eq!(span_rank(&[&p.psi1, &p.psi2]), 2);
        for &i in comp.covered() {
            assert!(p.contains(&s.points[i]));
            seen[i] = true;
        }
    }
    assert!(seen.iter().all(|&b| b));
}

#[test]
fn weak_cover_of_extremal_sets_is_one_pencil() {
    for (kind, m) in [(ExtremalKind::Prism, 6), (ExtremalKind::AntiPrism, 5)] {
        let s = build(kind, m, (0, 0), None);
        let c = weak_structure_cover(&s, DEFAULT_COVER_CAP, 1).unwrap();
        assert_eq!(c.components.len(), 1);
        assert!(matches!(c.components[0], CoverComponent::Pencil { .. }));
        assert_eq!(c.plane_pair_vertices, 0);
        check_cover(&s, &c);
    }
}

#[test]
fn weak_cover_of_generic_sets() {
    // eight generic points still lie on a pencil; ten do not
    for seed in 0..5 {
        let s = random_set(8, seed, 20).unwrap();
        let c = weak_structure_cover(&s, DEFAULT_COVER_CAP, 1).unwrap();
        check_cover(&s, &c);
        assert_eq!((c.carrier, c.components.len()), (None, 1));
    }
    for seed in 0..5 {
        let s = random_set(10, seed, 20).unwrap();
        let c = weak_structure_cover(&s, DEFAULT_COVER_CAP, 1).unwrap();
        check_cover(&s, &c);
        assert!(c.carrier.is_some());
        assert!(c.components.len() <= c.segments + 2 * c.plane_pair_vertices);
        assert_eq!(c, weak_structure_cover(&s, DEFAULT_COVER_CAP, 4).unwrap());
    }
    let big = random_set(30, 1, 50).unwrap();
    assert!(matches!(
        weak_structure_cover(&big, DEFAULT_COVER_CAP, 1),
        Err(Error::CapExceeded { n: 30, cap: 24 })
    ));
}

#[test]
fn classifies_every_prism_and_anti_prism() {
    for kind in [ExtremalKind::Prism, ExtremalKind::AntiPrism] {
        for m in 3..=10 {
            for apex in [(0, 0), (1, 2)] {
                let s = build(kind, m, apex, None);
                let v = classify_extremal(&s).unwrap();
                assert_eq!((v.kind, v.m), (expected(kind, m, false), Some(m)), "{kind:?} {m} {apex:?}");
            }
        }
    }
}

#[test]
fn classifies_minus_point_variants() {
    for kind in [ExtremalKind::Prism, ExtremalKind::AntiPrism] {
        for m in 4..=10 {
            for rem in [0, m - 1, m, 2 * m - 1] {
                let s = build(kind, m, (1, 2), Some(rem));
                let v = classify_extremal(&s).unwrap();
                assert_eq!((v.kind, v.m), (expected(kind, m, true), Some(m)), "{kind:?} {m} {rem}");
            }
        }
    }
    let s = build(ExtremalKind::AntiPrism, 6, (0, 0), Some(3));
    let v = classify_extremal(&s).unwrap();
    assert_eq!(v.kind, VerdictKind::AntiPrismMinusPoint);
    assert_eq!(v.delta, Some(Delta::Half));
}

#[test]
fn witness_regenerates_the_census() {
    let cases = [
        (ExtremalKind::Prism, 7, None),
        (ExtremalKind::AntiPrism, 6, Some(3)),
        (ExtremalKind::AntiPrism, 8, Some(11)),
        (ExtremalKind::Prism, 6, Some(8)),
        (ExtremalKind::AntiPrism, 5, None),
    ];
    for (kind, m, rem) in cases {
        let s = build(kind, m, (1, 2), rem);
        let v = classify_extremal(&s).unwrap();
        let w = v.witness.as_ref().unwrap();
        let regen = v.regenerate().unwrap().build().unwrap();
        assert_eq!(plane_census(&regen).unwrap().tau, plane_census(&s).unwrap().tau);
        // every labelled point is on its plane
        for (side, plane) in w.planes.iter().enumerate() {
            for i in w.conics[side].iter().flatten() {
                assert!(plane.contains(&s.points[*i]));
            }
        }
        assert_eq!(w.conics[1].iter().filter(|x| x.is_none()).count(), usize::from(rem.is_some()));
    }
}

/// `e3 -> (2a, 2b, -1, 0)` fixes `X3 = 0` pointwise and reflects the second
/// polygon through the apex, which for odd `m` turns a prism into an
/// anti-prism.
#[test]
fn odd_anti_prisms_are_projective_prisms() {
    for m in [3, 5, 7, 9] {
        for (a, b) in [(0, 0), (1, 2)] {
            let i = |v: i64| Scalar::from_int(v);
            let t = Projectivity::new(vec![
                vec![i(1), i(0), i(2 * a), i(0)],
                vec![i(0), i(1), i(2 * b), i(0)],
                vec![i(0), i(0), i(-1), i(0)],
                vec![i(0), i(0), i(0), i(1)],
            ])
            .unwrap();
            let prism = build(ExtremalKind::Prism, m, (a, b), None).transformed(&t);
            let anti = build(ExtremalKind::AntiPrism, m, (a, b), None);
            let mut x = prism.points.clone();
            let mut y = anti.points.clone();
            x.sort_by_key(|p| format!("{p:?}"));
            y.sort_by_key(|p| format!("{p:?}"));
            assert_eq!(x, y, "m = {m}");
        }
    }
}

#[test]
fn perturbed_and_generic_sets_are_not_extremal() {
    let s = build(ExtremalKind::Prism, 6, (0, 0), None);
    let v = classify_extremal(&perturb(&s, 1, 1, 7).unwrap()).unwrap();
    assert_eq!((v.kind, v.stage), (VerdictKind::NotExtremal, Some(2)));
    for (kind, m, idx) in [(ExtremalKind::Prism, 8, 9), (ExtremalKind::AntiPrism, 7, 2), (ExtremalKind::AntiPrism, 10, 13)] {
        let s = build(kind, m, (1, 2), None);
        let v = classify_extremal(&perturb(&s, idx, 1, 3).unwrap()).unwrap();
        assert_eq!(v.kind, VerdictKind::NotExtremal, "{kind:?} {m}");
    }
    let v = classify_extremal(&random_set(10, 3, 30).unwrap()).unwrap();
    assert_eq!((v.kind, v.stage), (VerdictKind::NotExtremal, Some(1)));
}

#[test]
fn verdict_report_shape() {
    let v = classify_extremal(&build(ExtremalKind::AntiPrism, 4, (0, 0), None)).unwrap();
    let j = serde_json::to_value(&v).unwrap();
    assert_eq!(j["kind"], "anti_prism");
    assert_eq!(j["m"], 4);
    assert_eq!(j["delta"], "1/2");
    assert!(j["witness"]["planes"].is_array());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn classification_is_projectively_invariant(seed in 0u64..10_000, m in 4usize..8, anti: bool, rem: bool) {
        let kind = if anti { ExtremalKind::AntiPrism } else { ExtremalKind::Prism };
        let s = build(kind, m, (1, 2), rem.then_some(m + 1));
        let a = classify_extremal(&s).unwrap();
        let b = classify_extremal(&s.transformed(&random_projectivity(seed, 4))).unwrap();
        prop_assert_eq!((a.kind, a.m, a.delta), (b.kind, b.m, b.delta));
    }
}
