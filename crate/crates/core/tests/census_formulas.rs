use ordplanes::census::{binom3, plane_census, predicted_extremal_count};
use ordplanes::generators::{ExtremalKind, ExtremalSpec};
use ordplanes::{det4, PointSet};

fn closed_form(kind: ExtremalKind, m: usize) -> usize {
    let n = 2 * m;
    match (kind, m % 2 == 1) {
        (_, true) => n * n / 4 - n / 2,
        (ExtremalKind::Prism, false) => n * n / 4 - n,
        (ExtremalKind::AntiPrism, false) => n * n / 4,
    }
}

/// Ordinary planes by brute force: a triple spans an ordinary plane iff no
/// fourth point is coplanar with it, and then it is the plane's only triple.
fn ordinary_oracle(s: &PointSet) -> usize {
    let p = &s.points;
    let n = p.len();
    let mut count = 0;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if (0..n)
                    .filter(|&l| l != i && l != j && l != k)
                    .all(|l| !det4([&p[i], &p[j], &p[k], &p[l]]).is_zero())
                {
                    count += 1;
                }
            }
        }
    }
    count
}

#[test]
fn extremal_counts_match_closed_forms() {
    for m in 4..=12 {
        for kind in [ExtremalKind::Prism, ExtremalKind::AntiPrism] {
            assert_eq!(predicted_extremal_count(kind, m), closed_form(kind, m));
            for (a, b) in [(0, 0), (1, 2)] {
                let s = ExtremalSpec::new(kind, m).with_apex_ints(a, b).build().unwrap();
                let c = plane_census(&s).unwrap();
                assert_eq!(c.ordinary_count(), closed_form(kind, m), "{kind:?} m={m} apex=({a},{b})");
                assert_eq!(c.weighted_triple_count(), binom3(2 * m));
                assert_eq!(c.per_point_ordinary.iter().sum::<usize>(), 3 * c.ordinary_count());
            }
        }
    }
}

#[test]
fn census_agrees_with_brute_force() {
    for m in 3..=6 {
        for kind in [ExtremalKind::Prism, ExtremalKind::AntiPrism] {
            let s = ExtremalSpec::new(kind, m).with_apex_ints(1, 2).build().unwrap();
            assert_eq!(plane_census(&s).unwrap().ordinary_count(), ordinary_oracle(&s));
        }
    }
}

/// At m = 3 the polygon plane and the plane at infinity carry only three
/// points each, so both are ordinary on top of the closed form.
#[test]
fn triangle_case_has_two_extra_planes() {
    for kind in [ExtremalKind::Prism, ExtremalKind::AntiPrism] {
        for (a, b) in [(0, 0), (1, 2)] {
            let s = ExtremalSpec::new(kind, 3).with_apex_ints(a, b).build().unwrap();
            let c = plane_census(&s).unwrap();
            assert_eq!(c.tau, vec![(3, 8), (4, 3)]);
            assert_eq!(c.ordinary_count(), closed_form(kind, 3) + 2);
            assert_eq!(ordinary_oracle(&s), 8);
        }
    }
}
