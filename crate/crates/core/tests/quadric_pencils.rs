use ordplanes::dual::{build_gamma, classify_edges, extract_double_diamond};
use ordplanes::generators::{random_projectivity, ExtremalKind, ExtremalSpec};
use ordplanes::geometry::plane_through;
use ordplanes::linalg;
use ordplanes::poly::HPoly;
use ordplanes::quadrics::*;
use ordplanes::{ProjPlane, ProjPoint, Scalar};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rand_point(r: &mut ChaCha8Rng, b: i64) -> ProjPoint {
    loop {
        let c = [0; 4].map(|_| r.gen_range(-b..=b));
        if c.iter().any(|&x| x != 0) {
            return ProjPoint::from_ints(c);
        }
    }
}

fn rand_form(r: &mut ChaCha8Rng, b: i64) -> QForm {
    let c: Vec<Scalar> = (0..10).map(|_| Scalar::from_int(r.gen_range(-b..=b))).collect();
    QForm::from_hpoly(&HPoly::from_coefficients(4, 2, &c)).unwrap()
}

/// A pencil through seven random points, returned with those points.
fn pencil_through_points(seed: u64) -> (Pencil, Vec<ProjPoint>) {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let pts: Vec<ProjPoint> = (0..7).map(|_| rand_point(&mut r, 4)).collect();
        let refs: Vec<&ProjPoint> = pts.iter().collect();
        let sp = interpolation_space_of(&refs, 2);
        if sp.dim != 3 {
            continue;
        }
        let f = |a: i64, b: i64, c: i64| {
            sp.basis[0]
                .scale(&Scalar::from_int(a))
                .try_add(&sp.basis[1].scale(&Scalar::from_int(b)))
                .unwrap()
                .try_add(&sp.basis[2].scale(&Scalar::from_int(c)))
                .unwrap()
        };
        let psi1 = QForm::from_hpoly(&f(1, r.gen_range(-3..=3), r.gen_range(-3..=3))).unwrap();
        let psi2 = QForm::from_hpoly(&f(0, 1, r.gen_range(-3..=3))).unwrap();
        if let Ok(p) = Pencil::new(psi1, psi2) {
            return (p, pts);
        }
    }
}

#[test]
fn polarization_is_linear() {
    let mut r = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let (a, b) = (rand_form(&mut r, 5), rand_form(&mut r, 5));
        let (s, t) = (Scalar::from_int(r.gen_range(-4..=4)), Scalar::from_int(r.gen_range(-4..=4)));
        let x = rand_point(&mut r, 5);
        let y = rand_point(&mut r, 5);
        let lhs = polarize(&a.combine(&s, &b, &t)).eval(x.coords(), y.coords());
        let rhs = &s * &polarize(&a).eval(x.coords(), y.coords())
            + &t * &polarize(&b).eval(x.coords(), y.coords());
        assert_eq!(lhs, rhs);
        assert_eq!(
            polarize(&a).eval(x.coords(), x.coords()),
            &a.eval(x.coords()) * &Scalar::from_int(2)
        );
    }
}

#[test]
fn cubic_vanishes_on_base_locus_and_cone_property() {
    for seed in 0..25 {
        let (pencil, pts) = pencil_through_points(seed);
        for q in &pts {
            let phi = phi_p(&pencil, q).unwrap();
            assert!(phi.eval(q.coords()).is_zero());
            for y in &pts {
                assert!(phi.eval(y.coords()).is_zero());
                assert!(verify_cone(&pencil, q, y).unwrap());
            }
            if let Ok(l) = line_ell_p(&pencil, q) {
                for y in l.points() {
                    assert!(verify_cone(&pencil, q, y).unwrap());
                }
            }
        }
    }
}

#[test]
fn tangent_projection() {
    let mut checked = 0;
    for seed in 0..25 {
        let (pencil, pts) = pencil_through_points(seed);
        let (p, q) = (&pts[0], &pts[1]);
        let Ok(l) = line_ell_p(&pencil, p) else { continue };
        let phi_p_form = phi_p(&pencil, p).unwrap();
        let phi_q_form = phi_p(&pencil, q).unwrap();
        for y in l.points() {
            assert!(phi_p_form.eval(y.coords()).is_zero());
        }
        if let Ok(t) = tangent_plane(&phi_q_form, p) {
            assert!(l.lies_in(&t));
            checked += 1;
        }
    }
    assert!(checked > 10);
}

#[test]
fn phi_pq_identity_and_dichotomy() {
    let mut r = ChaCha8Rng::seed_from_u64(11);
    for seed in 0..20 {
        let (pencil, pts) = pencil_through_points(seed + 100);
        let (p, q) = (&pts[0], &pts[1]);
        let fpq = phi_pq(&pencil, p, q).unwrap().to_hpoly();
        let fp = phi_p(&pencil, p).unwrap();
        let fq = phi_p(&pencil, q).unwrap();
        let b2 = polarize(&pencil.psi2);
        let lhs = fpq.try_mul(&pencil.psi2.to_hpoly()).unwrap();
        let rhs = HPoly::linear(&b2.at(q.coords()))
            .try_mul(&fp)
            .unwrap()
            .try_sub(&HPoly::linear(&b2.at(p.coords())).try_mul(&fq).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
        let mut candidates: Vec<ProjPoint> = pts.clone();
        candidates.extend((0..5).map(|_| rand_point(&mut r, 6)));
        for x in &candidates {
            let c = x.coords();
            if fp.eval(c).is_zero() && fq.eval(c).is_zero() && !fpq.eval(c).is_zero() {
                assert!(pencil.contains(x));
            }
        }
    }
}

#[test]
fn plane_pair_pencils_have_few_singular_members() {
    let mut r = ChaCha8Rng::seed_from_u64(3);
    let psi2 = QForm::from_hpoly(&HPoly::var(4, 2).try_mul(&HPoly::var(4, 3)).unwrap()).unwrap();
    let mut tried = 0;
    while tried < 50 {
        let psi1 = rand_form(&mut r, 6);
        // both planes must cut psi1 in non-degenerate conics
        let minor = |drop: usize| -> Scalar {
            let keep: Vec<usize> = (0..4).filter(|&i| i != drop).collect();
            let m: linalg::Matrix = keep
                .iter()
                .map(|&i| keep.iter().map(|&j| psi1.matrix()[i][j].clone()).collect())
                .collect();
            linalg::det(&m)
        };
        if minor(2).is_zero() || minor(3).is_zero() {
            continue;
        }
        tried += 1;
        let d = pencil_degenerate_members(&Pencil::new(psi1, psi2.clone()).unwrap()).unwrap();
        assert!(!d.identically_degenerate);
        assert!(d.psi2_degenerate);
        assert!(d.real_root_count <= 2);
        assert!(d.rational_roots.len() <= d.real_root_count);
    }
}

fn rand_plane(r: &mut ChaCha8Rng, b: i64) -> ProjPlane {
    rand_point(r, b).dual()
}

#[test]
fn eight_points_skew_lines() {
    let mut r = ChaCha8Rng::seed_from_u64(21);
    let mut done = 0;
    while done < 10 {
        let pairs = [0; 3].map(|_| [rand_plane(&mut r, 5), rand_plane(&mut r, 5)]);
        let Ok(res) = eight_associated_points(&pairs) else { continue };
        assert_eq!(res.configuration, LineConfiguration::Skew);
        assert!(res.verified);
        assert_eq!(res.kernel_vector.len(), 8);
        done += 1;
    }
}

/// Three lines in one plane meeting pairwise in three distinct points.
#[test]
fn eight_points_coplanar_lines() {
    let mut r = ChaCha8Rng::seed_from_u64(22);
    let want: Vec<Scalar> = [-1, 1, 1, 1, -1, -1, -1, 1].iter().map(|&v| Scalar::from_int(v)).collect();
    let mut done = 0;
    while done < 10 {
        let c = [0; 3].map(|_| rand_point(&mut r, 5));
        let ends = [(0, 1), (0, 2), (1, 2)];
        let planes: Vec<Option<[ProjPlane; 2]>> = ends
            .iter()
            .map(|&(a, b)| {
                let x = plane_through(&c[a], &c[b], &rand_point(&mut r, 5)).ok()?;
                let y = plane_through(&c[a], &c[b], &rand_point(&mut r, 5)).ok()?;
                (x != y).then_some([x, y])
            })
            .collect();
        let Some(pairs) = planes.into_iter().collect::<Option<Vec<_>>>() else { continue };
        let pairs: [[ProjPlane; 2]; 3] = pairs.try_into().unwrap();
        let Ok(res) = eight_associated_points(&pairs) else { continue };
        assert_eq!(res.configuration, LineConfiguration::Coplanar);
        assert!(res.verified);
        assert_eq!(res.kernel_vector, want);
        done += 1;
    }
}

#[test]
fn random_chasles_configurations() {
    let mut r = ChaCha8Rng::seed_from_u64(8);
    let mut done = 0;
    while done < 50 {
        let line = |r: &mut ChaCha8Rng| -> Vec<Scalar> {
            (0..3).map(|_| Scalar::from_int(r.gen_range(-7..=7))).collect()
        };
        let ls = [line(&mut r), line(&mut r), line(&mut r)];
        let ms = [line(&mut r), line(&mut r), line(&mut r)];
        let Ok(pts) = grid_points(&ls, &ms) else { continue };
        let Ok(ok) = chasles_nine(&pts) else { continue };
        assert!(ok);
        done += 1;
    }
}

#[test]
fn double_diamond_spans_a_pencil() {
    let s = ExtremalSpec::new(ExtremalKind::Prism, 8).build().unwrap();
    let g = classify_edges(build_gamma(&s).unwrap());
    let e = (0..g.edges.len())
        .find(|&e| g.edges[e].class.unwrap().rather_good)
        .unwrap();
    let dd = extract_double_diamond(&g, &s, e).unwrap();
    let pts: Vec<&ProjPoint> = dd.points().iter().map(|&i| &s.points[i]).collect();
    assert_eq!(interpolation_space_of(&pts, 2).dim, 2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn interpolation_dimension_is_projectively_invariant(seed in 0u64..10_000, n in 4usize..10) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let pts: Vec<ProjPoint> = (0..n).map(|_| rand_point(&mut r, 3)).collect();
        let t = random_projectivity(seed, 4);
        let moved: Vec<ProjPoint> = pts.iter().map(|p| t.apply(p)).collect();
        let a = interpolation_space_of(&pts.iter().collect::<Vec<_>>(), 2).dim;
        let b = interpolation_space_of(&moved.iter().collect::<Vec<_>>(), 2).dim;
        prop_assert_eq!(a, b);
    }

    #[test]
    fn cone_property_random(seed in 0u64..10_000) {
        let (pencil, pts) = pencil_through_points(seed);
        for y in &pts[1..] {
            prop_assert!(verify_cone(&pencil, &pts[0], y).unwrap());
        }
    }
}
