//! Quadratic forms in four variables, their polarizations, the cubic and
//! quadratic forms attached to a pencil, interpolation spaces, and the
//! eight-point and nine-point incidence theorems.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{canonicalize, cross3, det4, plane_through, ProjLine, ProjPlane, ProjPoint};
use crate::linalg::{self, Matrix};
use crate::poly::{monomials, HPoly, UPoly};
use crate::roots;
use crate::scalar::Scalar;

type Vec4 = [Scalar; 4];

fn zero4() -> Vec4 {
    [Scalar::zero(), Scalar::zero(), Scalar::zero(), Scalar::zero()]
}

/// A quadratic form `x^T M x` with `M` symmetric.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QForm {
    m: [Vec4; 4],
}

impl QForm {
    pub fn from_matrix(m: [Vec4; 4]) -> Result<Self> {
        for i in 0..4 {
            for j in 0..i {
                if m[i][j] != m[j][i] {
                    return Err(Error::InvalidInput("matrix is not symmetric".into()));
                }
            }
        }
        Ok(QForm { m })
    }

    pub fn from_hpoly(f: &HPoly) -> Result<Self> {
        if f.k() != 4 || f.degree() != 2 {
            return Err(Error::InvalidInput(
                "a quadratic form needs degree 2 in 4 variables".into(),
            ));
        }
        let mut m = [zero4(), zero4(), zero4(), zero4()];
        let half = Scalar::from_ratio(1, 2);
        for (e, c) in f.terms() {
            let idx: Vec<usize> = (0..4).flat_map(|i| std::iter::repeat_n(i, e[i] as usize)).collect();
            let (i, j) = (idx[0], idx[1]);
            if i == j {
                m[i][i] = c.clone();
            } else {
                m[i][j] = c * &half;
                m[j][i] = m[i][j].clone();
            }
        }
        Ok(QForm { m })
    }

    /// Parses a polynomial given as JSON in the `{"k","d","terms"}` shape.
    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let f: HPoly =
            serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        QForm::from_hpoly(&f)
    }

    pub fn to_hpoly(&self) -> HPoly {
        let two = Scalar::from_int(2);
        let terms = monomials(4, 2)
            .into_iter()
            .map(|e| {
                let idx: Vec<usize> =
                    (0..4).flat_map(|i| std::iter::repeat_n(i, e[i] as usize)).collect();
                let c = if idx[0] == idx[1] {
                    self.m[idx[0]][idx[0]].clone()
                } else {
                    &self.m[idx[0]][idx[1]] * &two
                };
                (e, c)
            })
            .collect();
        HPoly::from_terms(4, 2, terms).expect("degree-2 monomials")
    }

    pub fn matrix(&self) -> &[Vec4; 4] {
        &self.m
    }

    fn as_matrix(&self) -> Matrix {
        self.m.iter().map(|r| r.to_vec()).collect()
    }

    pub fn eval(&self, x: &[Scalar; 4]) -> Scalar {
        linalg::dot(x, &linalg::mat_vec(&self.as_matrix(), x))
    }

    /// The ten coefficients in the order of [`monomials`]`(4, 2)`.
    pub fn coefficient_vector(&self) -> Vec<Scalar> {
        self.to_hpoly().coefficients()
    }

    /// `(a . x)(b . x)`.
    pub fn product_of_linear(a: &Vec4, b: &Vec4) -> QForm {
        let half = Scalar::from_ratio(1, 2);
        let mut m = [zero4(), zero4(), zero4(), zero4()];
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] = (&a[i] * &b[j] + &a[j] * &b[i]) * &half;
            }
        }
        QForm { m }
    }

    pub fn try_sub(&self, o: &QForm) -> QForm {
        let mut m = self.m.clone();
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] = &self.m[i][j] - &o.m[i][j];
            }
        }
        QForm { m }
    }

    pub fn combine(&self, a: &Scalar, o: &QForm, b: &Scalar) -> QForm {
        let mut m = self.m.clone();
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] = a * &self.m[i][j] + b * &o.m[i][j];
            }
        }
        QForm { m }
    }

    pub fn is_zero(&self) -> bool {
        self.m.iter().flatten().all(Scalar::is_zero)
    }
}

impl Serialize for QForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_hpoly().serialize(s)
    }
}

impl<'de> Deserialize<'de> for QForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let f = HPoly::deserialize(d)?;
        QForm::from_hpoly(&f).map_err(serde::de::Error::custom)
    }
}

/// A symmetric bilinear form `b(x, y) = x^T B y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bilinear {
    m: [Vec4; 4],
}

impl Bilinear {
    pub fn matrix(&self) -> &[Vec4; 4] {
        &self.m
    }

    pub fn eval(&self, x: &Vec4, y: &Vec4) -> Scalar {
        linalg::dot(x, &self.at(y))
    }

    /// Coefficients of the linear form `b(p, X)`.
    pub fn at(&self, p: &Vec4) -> Vec4 {
        let v = linalg::mat_vec(&self.m.iter().map(|r| r.to_vec()).collect(), p);
        v.try_into().expect("four coordinates")
    }
}

/// `b(x, y) = psi(x + y) - psi(x) - psi(y)`, with matrix `2M`.
pub fn polarize(psi: &QForm) -> Bilinear {
    let two = Scalar::from_int(2);
    let mut m = zero4_matrix();
    for i in 0..4 {
        for j in 0..4 {
            m[i][j] = &psi.m[i][j] * &two;
        }
    }
    Bilinear { m }
}

fn zero4_matrix() -> [Vec4; 4] {
    [zero4(), zero4(), zero4(), zero4()]
}

/// Two linearly independent quadratic forms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pencil {
    pub psi1: QForm,
    pub psi2: QForm,
}

impl Pencil {
    pub fn new(psi1: QForm, psi2: QForm) -> Result<Self> {
        let m: Matrix = vec![psi1.coefficient_vector(), psi2.coefficient_vector()];
        if linalg::rank(&m) < 2 {
            return Err(Error::DependentForms);
        }
        Ok(Pencil { psi1, psi2 })
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.psi1.eval(p.coords()).is_zero() && self.psi2.eval(p.coords()).is_zero()
    }

    fn require(&self, p: &ProjPoint) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::PointNotOnBaseLocus)
        }
    }

    fn linear_parts(&self, p: &ProjPoint) -> (Vec4, Vec4) {
        (
            polarize(&self.psi1).at(p.coords()),
            polarize(&self.psi2).at(p.coords()),
        )
    }
}

/// `phi_p(X) = b1(p, X) psi2(X) - b2(p, X) psi1(X)`.
pub fn phi_p(pencil: &Pencil, p: &ProjPoint) -> Result<HPoly> {
    pencil.require(p)?;
    let (l1, l2) = pencil.linear_parts(p);
    let a = HPoly::linear(&l1).try_mul(&pencil.psi2.to_hpoly())?;
    let b = HPoly::linear(&l2).try_mul(&pencil.psi1.to_hpoly())?;
    a.try_sub(&b)
}

/// Checks symbolically that `phi_q(y + t q)` vanishes identically in `t`.
pub fn verify_cone(pencil: &Pencil, q: &ProjPoint, y: &ProjPoint) -> Result<bool> {
    let phi = phi_p(pencil, q)?;
    if !phi.eval(y.coords()).is_zero() {
        return Err(Error::InvalidInput("the point is not on the cubic surface".into()));
    }
    Ok(phi.along_line(y.coords(), q.coords()).is_zero())
}

/// The line `ker b1(p, X) ∩ ker b2(p, X)`.
pub fn line_ell_p(pencil: &Pencil, p: &ProjPoint) -> Result<ProjLine> {
    pencil.require(p)?;
    let (l1, l2) = pencil.linear_parts(p);
    let h1 = ProjPlane::new(l1).map_err(|_| Error::EqualOrDegenerateKernels)?;
    let h2 = ProjPlane::new(l2).map_err(|_| Error::EqualOrDegenerateKernels)?;
    ProjLine::meet(&h1, &h2).map_err(|_| Error::EqualOrDegenerateKernels)
}

/// The plane `sum df/dX_i(p) X_i`.
pub fn tangent_plane(f: &HPoly, p: &ProjPoint) -> Result<ProjPlane> {
    if f.k() != 4 {
        return Err(Error::InvalidInput("tangent planes need 4 variables".into()));
    }
    if !f.eval(p.coords()).is_zero() {
        return Err(Error::InvalidInput("the point is not on the surface".into()));
    }
    let g: Vec4 = f.gradient_at(p.coords()).try_into().expect("four partials");
    ProjPlane::new(g).map_err(|_| Error::SingularPoint)
}

/// `phi_pq(X) = b1(p, X) b2(q, X) - b1(q, X) b2(p, X)`.
pub fn phi_pq(pencil: &Pencil, p: &ProjPoint, q: &ProjPoint) -> Result<QForm> {
    pencil.require(p)?;
    pencil.require(q)?;
    let (p1, p2) = pencil.linear_parts(p);
    let (q1, q2) = pencil.linear_parts(q);
    Ok(QForm::product_of_linear(&p1, &q2).try_sub(&QForm::product_of_linear(&q1, &p2)))
}

/// The radical `{u : M u = 0}` of a quadratic form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Radical {
    pub rank: usize,
    pub basis: Vec<Vec<Scalar>>,
}

pub fn radical_analysis(psi: &QForm) -> Radical {
    let m = psi.as_matrix();
    let mut basis = linalg::nullspace(&m, 4);
    for v in &mut basis {
        canonicalize(v);
    }
    Radical {
        rank: 4 - basis.len(),
        basis,
    }
}

/// The singular members `psi1 + t psi2` of a pencil.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegenerateMembers {
    /// Coefficients of `det(M1 + t M2)`, constant term first.
    pub det_poly: Vec<Scalar>,
    /// Every member is singular.
    pub identically_degenerate: bool,
    /// `psi2` itself (the member at infinity) is singular.
    pub psi2_degenerate: bool,
    #[serde(with = "rational_list")]
    pub rational_roots: Vec<BigRational>,
    /// Number of distinct real `t`, rational or not.
    pub real_root_count: usize,
}

mod rational_list {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::scalar::{format_rational, parse_rational};

    pub fn serialize<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(format_rational)
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|x| parse_rational(x).map_err(serde::de::Error::custom))
            .collect()
    }
}

pub fn pencil_degenerate_members(pencil: &Pencil) -> Result<DegenerateMembers> {
    let xs: Vec<Scalar> = (0..5).map(Scalar::from_int).collect();
    let ys: Vec<Scalar> = xs
        .iter()
        .map(|t| linalg::det(&pencil.psi1.combine(&Scalar::one(), &pencil.psi2, t).as_matrix()))
        .collect();
    let det = UPoly::interpolate(&xs, &ys);
    let psi2_degenerate = linalg::det(&pencil.psi2.as_matrix()).is_zero();
    if det.is_zero() {
        return Ok(DegenerateMembers {
            det_poly: Vec::new(),
            identically_degenerate: true,
            psi2_degenerate,
            rational_roots: Vec::new(),
            real_root_count: 0,
        });
    }
    Ok(DegenerateMembers {
        det_poly: det.coeffs().to_vec(),
        identically_degenerate: false,
        psi2_degenerate,
        rational_roots: roots::rational_roots(&det)?,
        real_root_count: roots::count_real_roots(&det)?,
    })
}

/// The homogeneous polynomials of a fixed degree vanishing on a point set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InterpolationSpace {
    pub k: usize,
    pub t: u32,
    pub dim: usize,
    pub basis: Vec<HPoly>,
}

impl InterpolationSpace {
    pub fn vanishes_at(&self, x: &[Scalar]) -> bool {
        self.basis.iter().all(|f| f.eval(x).is_zero())
    }
}

pub fn veronese_row(x: &[Scalar], t: u32) -> Vec<Scalar> {
    let f = |e: &Vec<u32>| {
        let mut v = Scalar::one();
        for (ei, xi) in e.iter().zip(x) {
            for _ in 0..*ei {
                v = v * xi;
            }
        }
        v
    };
    monomials(x.len(), t).iter().map(f).collect()
}

pub fn interpolation_space(points: &[Vec<Scalar>], k: usize, t: u32) -> Result<InterpolationSpace> {
    if let Some(p) = points.iter().find(|p| p.len() != k) {
        return Err(Error::InvalidInput(format!(
            "point with {} coordinates, expected {k}",
            p.len()
        )));
    }
    let cols = monomials(k, t).len();
    let m: Matrix = points.iter().map(|p| veronese_row(p, t)).collect();
    let basis: Vec<HPoly> = linalg::nullspace(&m, cols)
        .iter()
        .map(|c| HPoly::from_coefficients(k, t, c))
        .collect();
    Ok(InterpolationSpace {
        k,
        t,
        dim: basis.len(),
        basis,
    })
}

/// Convenience for projective points in space.
pub fn interpolation_space_of(points: &[&ProjPoint], t: u32) -> InterpolationSpace {
    let pts: Vec<Vec<Scalar>> = points.iter().map(|p| p.coords().to_vec()).collect();
    interpolation_space(&pts, 4, t).expect("four coordinates")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LineConfiguration {
    /// Two of the lines `pi_1 ∩ pi_2`, `pi'_1 ∩ pi'_2`, `pi''_1 ∩ pi''_2` are skew.
    Skew,
    /// The three lines meet pairwise, in three distinct points of one plane.
    Coplanar,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EightPoints {
    /// Ordered `111, 112, 121, 211, 122, 212, 221, 222`, where digit `i` picks
    /// the plane of pair `i`.
    pub points: Vec<ProjPoint>,
    pub configuration: LineConfiguration,
    pub verified: bool,
    /// The relation among the Veronese rows of the points, scaled so its
    /// first entry is `-1`. For coplanar lines each point is first scaled to
    /// `w . x = 1`, `w` the plane of the lines; otherwise canonical
    /// coordinates are used.
    pub kernel_vector: Vec<Scalar>,
}

pub const EIGHT_POINT_ORDER: [[usize; 3]; 8] = [
    [0, 0, 0],
    [0, 0, 1],
    [0, 1, 0],
    [1, 0, 0],
    [0, 1, 1],
    [1, 0, 1],
    [1, 1, 0],
    [1, 1, 1],
];

fn meets(a: &ProjLine, b: &ProjLine) -> bool {
    let [p, q] = a.points();
    let [r, s] = b.points();
    det4([p, q, r, s]).is_zero()
}

/// The eight points `pi_i ∩ pi'_j ∩ pi''_k` of three plane pairs, and the
/// check that any quadric through seven of them passes through the eighth.
pub fn eight_associated_points(pairs: &[[ProjPlane; 2]; 3]) -> Result<EightPoints> {
    let lines: Vec<ProjLine> = pairs
        .iter()
        .map(|[a, b]| ProjLine::meet(a, b).map_err(|_| Error::CoincidentIntersectionPoints))
        .collect::<Result<_>>()?;
    let mut points = Vec::with_capacity(8);
    for [i, j, k] in EIGHT_POINT_ORDER {
        let mut w = cross3(
            pairs[0][i].coords(),
            pairs[1][j].coords(),
            pairs[2][k].coords(),
        );
        if !canonicalize(&mut w) {
            return Err(Error::CoincidentIntersectionPoints);
        }
        points.push(ProjPoint::new(w)?);
    }
    for a in 0..8 {
        for b in a + 1..8 {
            if points[a] == points[b] {
                return Err(Error::CoincidentIntersectionPoints);
            }
        }
    }
    let coplanar =
        meets(&lines[0], &lines[1]) && meets(&lines[0], &lines[2]) && meets(&lines[1], &lines[2]);
    let configuration = if coplanar {
        LineConfiguration::Coplanar
    } else {
        LineConfiguration::Skew
    };
    let rows: Matrix = points.iter().map(|p| veronese_row(p.coords(), 2)).collect();
    let mut verified = true;
    for skip in 0..8 {
        let sub: Matrix = (0..8).filter(|&r| r != skip).map(|r| rows[r].clone()).collect();
        if linalg::rank(&sub) != 7 {
            verified = false;
            break;
        }
        let basis = linalg::nullspace(&sub, 10);
        let ok = basis.len() == 3
            && basis
                .iter()
                .all(|c| linalg::dot(c, &rows[skip]).is_zero());
        if !ok {
            verified = false;
            break;
        }
    }
    let scaled: Matrix = if coplanar {
        let [p, q] = lines[0].points();
        let r = lines[1]
            .points()
            .iter()
            .find(|x| !lines[0].contains(x))
            .expect("distinct lines");
        let w = plane_through(p, q, r)?;
        points
            .iter()
            .map(|x| {
                let s = w.eval(x).inverse()?;
                let y: Vec<Scalar> = x.coords().iter().map(|c| c * &s).collect();
                Ok(veronese_row(&y, 2))
            })
            .collect::<Result<_>>()?
    } else {
        rows
    };
    let kernel = linalg::left_kernel(&scaled);
    let kernel_vector = match kernel.as_slice() {
        [v] => {
            let first = v.iter().find(|x| !x.is_zero()).expect("nonzero kernel vector");
            let f = -first.inverse()?;
            v.iter().map(|x| x * &f).collect()
        }
        _ => {
            verified = false;
            Vec::new()
        }
    };
    Ok(EightPoints {
        points,
        configuration,
        verified,
        kernel_vector,
    })
}

/// The nine points `l_i ∩ m_j` of two triples of lines in a plane, in the
/// order `(1,1), (1,2), ..., (3,3)`.
pub fn grid_points(ls: &[Vec<Scalar>; 3], ms: &[Vec<Scalar>; 3]) -> Result<Vec<Vec<Scalar>>> {
    let cross = |a: &[Scalar], b: &[Scalar]| -> Vec<Scalar> {
        vec![
            &a[1] * &b[2] - &a[2] * &b[1],
            &a[2] * &b[0] - &a[0] * &b[2],
            &a[0] * &b[1] - &a[1] * &b[0],
        ]
    };
    let mut out = Vec::with_capacity(9);
    for l in ls {
        for m in ms {
            let mut p = cross(l, m);
            if !canonicalize(&mut p) {
                return Err(Error::DegenerateIntersections);
            }
            out.push(p);
        }
    }
    Ok(out)
}

/// Checks that every cubic through the first eight points passes through
/// the ninth.
pub fn chasles_nine(points: &[Vec<Scalar>]) -> Result<bool> {
    if points.len() != 9 || points.iter().any(|p| p.len() != 3) {
        return Err(Error::InvalidInput("nine points of the plane are required".into()));
    }
    let mut canon: Vec<Vec<Scalar>> = points.to_vec();
    for p in &mut canon {
        if !canonicalize(p) {
            return Err(Error::DegenerateIntersections);
        }
    }
    for a in 0..9 {
        for b in a + 1..9 {
            if canon[a] == canon[b] {
                return Err(Error::DegenerateIntersections);
            }
        }
    }
    let space = interpolation_space(&canon[..8], 3, 3)?;
    Ok(space.vanishes_at(&canon[8]))
}
