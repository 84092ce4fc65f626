//! Seeded random instances for the batch checks.

use std::collections::HashSet;

use ordplanes::geometry::plane_through;
use ordplanes::poly::HPoly;
use ordplanes::quadrics::{
    eight_associated_points, grid_points, interpolation_space_of, EightPoints, LineConfiguration, Pencil,
    QForm,
};
use ordplanes::{ProjPlane, ProjPoint, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Stream `i` of the generator seeded by `seed`, so trial `i` does not
/// depend on how many trials run before it or on which worker.
pub fn trial_rng(seed: u64, i: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(i);
    r
}

pub fn rand_point(r: &mut ChaCha8Rng, b: i64) -> ProjPoint {
    loop {
        let c = [0; 4].map(|_| r.gen_range(-b..=b));
        if c.iter().any(|&x| x != 0) {
            return ProjPoint::from_ints(c);
        }
    }
}

pub fn rand_form(r: &mut ChaCha8Rng, b: i64) -> QForm {
    let c: Vec<Scalar> = (0..10).map(|_| Scalar::from_int(r.gen_range(-b..=b))).collect();
    QForm::from_hpoly(&HPoly::from_coefficients(4, 2, &c)).expect("degree 2 in 4 variables")
}

/// Three random plane pairs whose axes are in general position.
pub fn skew_pairs(r: &mut ChaCha8Rng) -> ([[ProjPlane; 2]; 3], EightPoints) {
    loop {
        let pairs = [0; 3].map(|_| [rand_point(r, 5).dual(), rand_point(r, 5).dual()]);
        if let Ok(e) = eight_associated_points(&pairs) {
            if e.configuration == LineConfiguration::Skew {
                return (pairs, e);
            }
        }
    }
}

/// Three plane pairs whose axes lie in one plane and meet pairwise.
pub fn coplanar_pairs(r: &mut ChaCha8Rng) -> ([[ProjPlane; 2]; 3], EightPoints) {
    loop {
        let c = [0; 3].map(|_| rand_point(r, 5));
        let mut pairs = Vec::with_capacity(3);
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            let x = plane_through(&c[a], &c[b], &rand_point(r, 5));
            let y = plane_through(&c[a], &c[b], &rand_point(r, 5));
            match (x, y) {
                (Ok(x), Ok(y)) if x != y => pairs.push([x, y]),
                _ => break,
            }
        }
        let Ok(pairs) = <[[ProjPlane; 2]; 3]>::try_from(pairs) else { continue };
        if let Ok(e) = eight_associated_points(&pairs) {
            if e.configuration == LineConfiguration::Coplanar {
                return (pairs, e);
            }
        }
    }
}

/// Nine grid points `l_i ∩ m_j` of two random line triples in the plane.
pub fn chasles_grid(r: &mut ChaCha8Rng) -> Vec<Vec<Scalar>> {
    loop {
        let mut line = || -> Vec<Scalar> { (0..3).map(|_| Scalar::from_int(r.gen_range(-7..=7))).collect() };
        let ls = [line(), line(), line()];
        let ms = [line(), line(), line()];
        let Ok(pts) = grid_points(&ls, &ms) else { continue };
        if pts.iter().collect::<HashSet<_>>().len() == 9 {
            return pts;
        }
    }
}

/// A random pencil through seven random points, with the points.
pub fn pencil_through_points(r: &mut ChaCha8Rng) -> (Pencil, Vec<ProjPoint>) {
    loop {
        let pts: Vec<ProjPoint> = (0..7).map(|_| rand_point(r, 4)).collect();
        let sp = interpolation_space_of(&pts.iter().collect::<Vec<_>>(), 2);
        if sp.dim != 3 {
            continue;
        }
        let mut mix = |lead: i64| {
            let c = [lead, r.gen_range(-3..=3), r.gen_range(-3..=3)];
            let f = sp.basis.iter().zip(c).try_fold(HPoly::zero(4, 2), |acc, (b, c)| {
                acc.try_add(&b.scale(&Scalar::from_int(c)))
            });
            QForm::from_hpoly(&f.expect("same shape")).expect("quadric")
        };
        let psi1 = mix(1);
        let psi2 = mix(0);
        if let Ok(p) = Pencil::new(psi1, psi2) {
            return (p, pts);
        }
    }
}
