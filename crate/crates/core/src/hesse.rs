//! The Hesse pencil of plane cubics
//! `X^3 + Y^3 + Z^3 + lambda XYZ = 0` with its chord-tangent group law.
//!
//! Every smooth member (`lambda^3 != -27`) is an elliptic curve with origin
//! `O = (1 : -1 : 0)`; the nine base points of the pencil are its flexes
//! and form the full 3-torsion. The distinguished torsion points
//! `S = (1 : -zeta : 0)` and `T = (1 : 0 : -1)` are translated by the
//! matrices `D = diag(1, zeta, zeta^2)` and the cyclic shift `M`, with
//! `D O = S` and `M O = T`.

use std::collections::BTreeSet;

use num::{BigInt, ToPrimitive};
use rayon::prelude::*;

use crate::cyclo::{CycloElement, Prime};
use crate::error::{Error, Result};
use crate::forms::Form;
use crate::matrix::{translation_diag, translation_shift, Matrix, TorsionMatrix};
use crate::point::ProjectivePoint;
use crate::rational::{rat, rat_int, Rational};
use crate::smallint::{z3add, z3cube, z3mul};

/// A smooth member of the Hesse pencil.
#[derive(Clone, Debug)]
pub struct HesseCurve {
    lambda: CycloElement,
    form: Form,
}

impl HesseCurve {
    /// Build the curve; fails when `lambda^3 = -27` (the singular members).
    pub fn new(lambda: CycloElement) -> Result<Self> {
        assert!(lambda.prime() == Prime::Three, "lambda lives in Q(zeta_3)");
        let minus27 = CycloElement::from_int(Prime::Three, -27);
        if lambda.pow(3) == minus27 {
            return Err(Error::Degenerate {
                reason: format!("lambda = {lambda} has lambda^3 = -27, the cubic is singular"),
            });
        }
        let one = CycloElement::one(Prime::Three);
        let mut form = Form::zero(3);
        form.add_term(vec![3, 0, 0], one.clone());
        form.add_term(vec![0, 3, 0], one.clone());
        form.add_term(vec![0, 0, 3], one);
        form.add_term(vec![1, 1, 1], lambda.clone());
        Ok(HesseCurve { lambda, form })
    }

    /// Pencil parameter.
    #[must_use]
    pub fn lambda(&self) -> &CycloElement {
        &self.lambda
    }

    /// The defining cubic form.
    #[must_use]
    pub fn form(&self) -> &Form {
        &self.form
    }

    /// The origin `O = (1 : -1 : 0)`.
    #[must_use]
    pub fn origin(&self) -> ProjectivePoint {
        ProjectivePoint::from_ints(Prime::Three, &[1, -1, 0]).expect("nonzero")
    }

    /// The 3-torsion point `S = (1 : -zeta : 0)`.
    #[must_use]
    pub fn s_point(&self) -> ProjectivePoint {
        let one = CycloElement::one(Prime::Three);
        let z = CycloElement::zeta(Prime::Three);
        ProjectivePoint::new(vec![one, -&z, CycloElement::zero(Prime::Three)]).expect("nonzero")
    }

    /// The 3-torsion point `T = (1 : 0 : -1)`.
    #[must_use]
    pub fn t_point(&self) -> ProjectivePoint {
        ProjectivePoint::from_ints(Prime::Three, &[1, 0, -1]).expect("nonzero")
    }

    /// Translation matrices `(D, M)` for `S` and `T`.
    #[must_use]
    pub fn translation_matrices(&self) -> (TorsionMatrix, TorsionMatrix) {
        let d = translation_diag(Prime::Three);
        let m = translation_shift(Prime::Three, &CycloElement::one(Prime::Three));
        (d, m)
    }

    /// Membership test.
    #[must_use]
    pub fn contains(&self, p: &ProjectivePoint) -> bool {
        self.form.eval(p.coords()).is_zero()
    }

    /// The nine flexes: the orbit of `O` under the torsion translations.
    #[must_use]
    pub fn flexes(&self) -> Vec<ProjectivePoint> {
        let (d, m) = self.translation_matrices();
        let o = self.origin();
        let mut out = Vec::with_capacity(9);
        for i in 0..3 {
            for j in 0..3 {
                let mat = d.matrix().pow(i).mul(&m.matrix().pow(j));
                out.push(o.transformed(&mat).expect("torsion matrices are invertible"));
            }
        }
        out
    }

    /// Third intersection of the line through `p` and `q` with the curve.
    /// For `p = q` the line is the tangent at `p`. Both points must lie on
    /// the curve.
    pub fn third_intersection(
        &self,
        p: &ProjectivePoint,
        q: &ProjectivePoint,
    ) -> Result<ProjectivePoint> {
        if !self.contains(p) || !self.contains(q) {
            return Err(Error::Invalid("third_intersection needs points on the curve".into()));
        }
        if p == q {
            return self.tangent_third(p);
        }
        // F(s p + t q) = s t (c2 s + c1 t) since both cubic terms vanish.
        let (c2, c1) = self.chord_coefficients(p.coords(), q.coords());
        assert!(
            !(c1.is_zero() && c2.is_zero()),
            "a line cannot lie on a smooth cubic"
        );
        let combo: Vec<CycloElement> = p
            .coords()
            .iter()
            .zip(q.coords())
            .map(|(a, b)| &(a * &c1) - &(b * &c2))
            .collect();
        ProjectivePoint::new(combo)
    }

    /// Coefficients `(c2, c1)` of `F(s p + t q) = c2 s^2 t + c1 s t^2` for
    /// `p, q` on the curve.
    fn chord_coefficients(
        &self,
        p: &[CycloElement],
        q: &[CycloElement],
    ) -> (CycloElement, CycloElement) {
        // Restrict F to the line by substituting x_i = s p_i + t q_i and
        // reading off the two mixed coefficients via four evaluations:
        // F(p + q) = c2 + c1 and F(p - q) = -c2 + c1.
        let plus: Vec<CycloElement> = p.iter().zip(q).map(|(a, b)| a + b).collect();
        let minus: Vec<CycloElement> = p.iter().zip(q).map(|(a, b)| a - b).collect();
        let f_plus = self.form.eval(&plus);
        let f_minus = self.form.eval(&minus);
        let half = Rational::new(BigInt::from(1), BigInt::from(2));
        let c2 = (&f_plus - &f_minus).scale(&half);
        let c1 = (&f_plus + &f_minus).scale(&half);
        (c2, c1)
    }

    /// Third intersection of the tangent line at `p` with the curve.
    fn tangent_third(&self, p: &ProjectivePoint) -> Result<ProjectivePoint> {
        let g = self.form.gradient_at(p.coords());
        assert!(
            g.iter().any(|c| !c.is_zero()),
            "smooth curve has nonzero gradient"
        );
        let v = tangent_direction(p.coords(), &g);
        // F(s p + t v) = c1 s t^2 + c0 t^3 (tangency kills s^3 and s^2 t).
        let pv: Vec<CycloElement> = p.coords().iter().zip(&v).map(|(a, b)| a + b).collect();
        let f_v = self.form.eval(&v);
        let f_pv = self.form.eval(&pv);
        // F(p + v) = c1 + c0, F(v) = c0.
        let c0 = f_v;
        let c1 = &f_pv - &c0;
        assert!(
            !(c0.is_zero() && c1.is_zero()),
            "a line cannot lie on a smooth cubic"
        );
        let combo: Vec<CycloElement> = p
            .coords()
            .iter()
            .zip(&v)
            .map(|(a, b)| &(a * &c0) - &(b * &c1))
            .collect();
        ProjectivePoint::new(combo)
    }

    /// Group addition with origin `O`: `p + q = (p * q) * O` where `*` is
    /// the third-intersection. `O` is a flex, so negation is `-p = p * O`.
    pub fn add(&self, p: &ProjectivePoint, q: &ProjectivePoint) -> Result<ProjectivePoint> {
        let chord = self.third_intersection(p, q)?;
        self.third_intersection(&chord, &self.origin())
    }

    /// Group negation.
    pub fn neg(&self, p: &ProjectivePoint) -> Result<ProjectivePoint> {
        self.third_intersection(p, &self.origin())
    }

    /// Scalar multiple `n p` by double-and-add.
    pub fn mul(&self, n: i64, p: &ProjectivePoint) -> Result<ProjectivePoint> {
        if n == 0 {
            return Ok(self.origin());
        }
        let base = if n < 0 { self.neg(p)? } else { p.clone() };
        let mut n = n.unsigned_abs();
        let mut acc: Option<ProjectivePoint> = None;
        let mut pw = base;
        loop {
            if n & 1 == 1 {
                acc = Some(match acc {
                    None => pw.clone(),
                    Some(a) => self.add(&a, &pw)?,
                });
            }
            n >>= 1;
            if n == 0 {
                break;
            }
            pw = self.add(&pw, &pw)?;
        }
        Ok(acc.expect("n is nonzero"))
    }

    /// The j-invariant of the curve, computed from first principles by
    /// projecting from the flex `(1 : -1 : 0)`.
    ///
    /// In coordinates where that flex sits at infinity and its tangent
    /// `3X + 3Y - lambda Z` is the line at infinity, the cubic takes the
    /// shape `a y^2 z + b_1 xyz + b_2 y z^2 + (cubic in x, z)`. Completing
    /// the square in `y` and rescaling to a monic model
    /// `v^2 = u^3 + a_2 u^2 + a_4 u + a_6` gives the standard
    /// `j = c_4^3 / Delta`.
    #[must_use]
    pub fn j_invariant(&self) -> CycloElement {
        let prime = Prime::Three;
        let one = CycloElement::one(prime);
        let zero = CycloElement::zero(prime);
        let three = CycloElement::from_int(prime, 3);
        // New coordinate rows: x is any extra line, y is a line through the
        // flex only, z is the tangent at the flex.
        let tangent = vec![three.clone(), three, -&self.lambda];
        let x_row = if self.lambda.is_zero() {
            // The tangent is then proportional to X + Y; take Z instead.
            vec![zero.clone(), zero, one.clone()]
        } else {
            vec![one.clone(), one.clone(), zero]
        };
        let y_row = vec![one, CycloElement::zero(prime), CycloElement::zero(prime)];
        let m = Matrix::from_rows(vec![x_row, y_row, tangent]);
        let back = m.inverse().expect("the three lines are independent");
        let f = self.form.apply_matrix(&back);

        // The flex maps to (0 : 1 : 0) and meets z = 0 triply there, so no
        // y^3, x y^2, or x^2 y terms survive.
        debug_assert!(f.coeff(&[0, 3, 0]).is_zero());
        debug_assert!(f.coeff(&[1, 2, 0]).is_zero());
        debug_assert!(f.coeff(&[2, 1, 0]).is_zero());
        let a1 = f.coeff(&[0, 2, 1]);
        debug_assert!(!a1.is_zero());
        let b1 = f.coeff(&[1, 1, 1]);
        let b2 = f.coeff(&[0, 1, 2]);
        let c0 = f.coeff(&[3, 0, 0]);
        let c1 = f.coeff(&[2, 0, 1]);
        let c2 = f.coeff(&[1, 0, 2]);
        let c3 = f.coeff(&[0, 0, 3]);

        // Multiply by 4 a and substitute w = 2 a y + b_1 x + b_2 z:
        // w^2 = d_3 x^3 + d_2 x^2 + d_1 x + d_0 on the affine chart z = 1.
        let four = CycloElement::from_int(prime, 4);
        let two = CycloElement::from_int(prime, 2);
        let d3 = -&(&four * &(&a1 * &c0));
        let d2 = &b1.pow(2) - &(&four * &(&a1 * &c1));
        let d1 = &(&two * &(&b1 * &b2)) - &(&four * &(&a1 * &c2));
        let d0 = &b2.pow(2) - &(&four * &(&a1 * &c3));

        // Monic model via u = d_3 x, v = d_3 w.
        let a2 = d2;
        let a4 = &d1 * &d3;
        let a6 = &d0 * &d3.pow(2);

        let c4 = &a2.pow(2).scale(&rat_int(16)) - &a4.scale(&rat_int(48));
        let c6 = &(&(-&a2.pow(3).scale(&rat_int(64))) + &(&a2 * &a4).scale(&rat_int(288)))
            - &a6.scale(&rat_int(864));
        let disc = (&c4.pow(3) - &c6.pow(2)).scale(&rat(1, 1728));
        c4.pow(3)
            .div(&disc)
            .expect("smooth member has nonzero discriminant")
    }

    /// All curve points whose primitive integral representative over
    /// `Z[zeta]` has coefficients bounded by `bound`, sorted by height and
    /// then by coordinates. Exhaustive within the bound.
    #[must_use]
    pub fn point_search(&self, bound: u32) -> Vec<ProjectivePoint> {
        let h = bound as i64;
        let (lam_nums, lam_den) = self.lambda.cleared();
        let ln0 = lam_nums[0].to_i128().expect("small lambda");
        let ln1 = lam_nums[1].to_i128().expect("small lambda");
        let ld = lam_den.to_i128().expect("small lambda");

        let xs: Vec<i64> = (-h..=h).collect();
        let mut raw: Vec<[i64; 6]> = xs
            .par_iter()
            .flat_map_iter(|&x0| {
                let mut local = Vec::new();
                for x1 in -h..=h {
                    for y0 in -h..=h {
                        for y1 in -h..=h {
                            for z0 in -h..=h {
                                for z1 in -h..=h {
                                    if cleared_hesse_eval(
                                        [x0, x1, y0, y1, z0, z1],
                                        ln0,
                                        ln1,
                                        ld,
                                    ) {
                                        local.push([x0, x1, y0, y1, z0, z1]);
                                    }
                                }
                            }
                        }
                    }
                }
                local
            })
            .collect();
        raw.retain(|c| c.iter().any(|&v| v != 0));

        let mut seen = BTreeSet::new();
        for c in raw {
            let coords = vec![
                zeta_int_elem(c[0], c[1]),
                zeta_int_elem(c[2], c[3]),
                zeta_int_elem(c[4], c[5]),
            ];
            let p = ProjectivePoint::new(coords).expect("nonzero vector");
            debug_assert!(self.contains(&p));
            seen.insert(p);
        }
        let mut points: Vec<ProjectivePoint> = seen.into_iter().collect();
        points.sort_by_key(|p| (p.height(), p.clone()));
        points
    }
}

fn zeta_int_elem(re: i64, im: i64) -> CycloElement {
    CycloElement::new(
        Prime::Three,
        vec![
            Rational::from_integer(BigInt::from(re)),
            Rational::from_integer(BigInt::from(im)),
        ],
    )
}

/// Machine-integer test of `den (X^3+Y^3+Z^3) + num XYZ = 0` over
/// `Z[zeta_3]`, with `lambda = num/den` cleared.
fn cleared_hesse_eval(c: [i64; 6], ln0: i128, ln1: i128, ld: i128) -> bool {
    let x = [c[0] as i128, c[1] as i128];
    let y = [c[2] as i128, c[3] as i128];
    let z = [c[4] as i128, c[5] as i128];
    let cubes = z3add(z3add(z3cube(x), z3cube(y)), z3cube(z));
    let xyz = z3mul(z3mul(x, y), z);
    let lam_xyz = z3mul([ln0, ln1], xyz);
    let total = z3add([ld * cubes[0], ld * cubes[1]], lam_xyz);
    total == [0, 0]
}

/// A direction spanning the tangent line at `p` together with `p`: the first
/// coordinate pair pattern orthogonal to the gradient and independent of
/// `p`.
fn tangent_direction(p: &[CycloElement], g: &[CycloElement]) -> Vec<CycloElement> {
    let prime = p[0].prime();
    let zero = CycloElement::zero(prime);
    for (i, j) in [(0usize, 1usize), (0, 2), (1, 2)] {
        if g[i].is_zero() && g[j].is_zero() {
            continue;
        }
        let mut v = vec![zero.clone(); 3];
        v[i] = g[j].clone();
        v[j] = -&g[i];
        // Independence from p: some 2x2 minor of the pair must survive.
        let mut independent = false;
        for (r, s) in [(0usize, 1usize), (0, 2), (1, 2)] {
            let minor = &(&p[r] * &v[s]) - &(&p[s] * &v[r]);
            if !minor.is_zero() {
                independent = true;
                break;
            }
        }
        if independent {
            return v;
        }
    }
    unreachable!("gradient is nonzero and p is orthogonal to it by Euler's relation")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat_int;

    fn curve(lam: i64) -> HesseCurve {
        HesseCurve::new(CycloElement::from_int(Prime::Three, lam)).unwrap()
    }

    #[test]
    fn singular_members_rejected() {
        assert!(HesseCurve::new(CycloElement::from_int(Prime::Three, -3)).is_err());
        assert!(HesseCurve::new(CycloElement::from_int(Prime::Three, 1)).is_ok());
    }

    #[test]
    fn distinguished_points_lie_on_every_member() {
        for lam in [-5, 0, 1, 2, 7] {
            let e = curve(lam);
            assert!(e.contains(&e.origin()));
            assert!(e.contains(&e.s_point()));
            assert!(e.contains(&e.t_point()));
        }
    }

    #[test]
    fn wrong_sign_s_variant_is_not_on_the_curve() {
        // (1 : zeta : 0) has 1 + zeta^3 = 2 != 0.
        let e = curve(2);
        let z = CycloElement::zeta(Prime::Three);
        let wrong = ProjectivePoint::new(vec![
            CycloElement::one(Prime::Three),
            z,
            CycloElement::zero(Prime::Three),
        ])
        .unwrap();
        assert!(!e.contains(&wrong));
        assert!(e.contains(&e.s_point()));
    }

    #[test]
    fn translations_move_origin_to_s_and_t() {
        let e = curve(2);
        let (d, m) = e.translation_matrices();
        assert_eq!(e.origin().transformed(d.matrix()).unwrap(), e.s_point());
        assert_eq!(e.origin().transformed(m.matrix()).unwrap(), e.t_point());
    }

    #[test]
    fn flexes_are_nine_distinct_curve_points() {
        let e = curve(1);
        let fl = e.flexes();
        assert_eq!(fl.len(), 9);
        let set: BTreeSet<_> = fl.iter().cloned().collect();
        assert_eq!(set.len(), 9);
        for p in &fl {
            assert!(e.contains(p));
            // A flex is its own tangent-third.
            assert_eq!(e.third_intersection(p, p).unwrap(), *p);
        }
    }

    #[test]
    fn s_plus_t_matches_matrix_translation() {
        // Adding the torsion points via the group law agrees with applying
        // both translation matrices to the origin.
        let e = curve(2);
        let (d, m) = e.translation_matrices();
        let via_law = e.add(&e.s_point(), &e.t_point()).unwrap();
        let via_matrices = e
            .origin()
            .transformed(&d.matrix().mul(m.matrix()))
            .unwrap();
        assert_eq!(via_law, via_matrices);
        // Frozen value: S + T = (1 : 0 : -zeta^2).
        let z2 = CycloElement::zeta_pow(Prime::Three, 2);
        let expected = ProjectivePoint::new(vec![
            CycloElement::one(Prime::Three),
            CycloElement::zero(Prime::Three),
            -&z2,
        ])
        .unwrap();
        assert_eq!(via_law, expected);
    }

    #[test]
    fn group_law_basics() {
        let e = curve(1);
        let p = ProjectivePoint::from_ints(Prime::Three, &[1, 1, -1]).unwrap();
        assert!(e.contains(&p));
        let o = e.origin();
        assert_eq!(e.add(&p, &o).unwrap(), p, "O is the identity");
        let np = e.neg(&p).unwrap();
        assert_eq!(e.add(&p, &np).unwrap(), o, "p + (-p) = O");
        // Associativity spot check: (p + s) + t = p + (s + t).
        let s = e.s_point();
        let t = e.t_point();
        let lhs = e.add(&e.add(&p, &s).unwrap(), &t).unwrap();
        let rhs = e.add(&p, &e.add(&s, &t).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn torsion_points_have_order_three() {
        let e = curve(2);
        for q in [e.s_point(), e.t_point()] {
            assert_eq!(e.mul(3, &q).unwrap(), e.origin());
            assert_ne!(e.mul(1, &q).unwrap(), e.origin());
        }
    }

    #[test]
    fn point_search_finds_flexes() {
        let e = curve(2);
        let pts = e.point_search(1);
        assert!(pts.len() >= 9, "at least the nine flexes, got {}", pts.len());
        for f in e.flexes() {
            assert!(pts.contains(&f), "missing flex {f}");
        }
        for p in &pts {
            assert!(e.contains(p));
        }
    }

    #[test]
    fn point_search_sees_integer_points() {
        let e = curve(1);
        let p = ProjectivePoint::from_ints(Prime::Three, &[1, 1, -1]).unwrap();
        let pts = e.point_search(1);
        assert!(pts.contains(&p));
        let rt = ProjectivePoint::new(vec![
            CycloElement::from_rational(Prime::Three, rat_int(1)),
            CycloElement::from_rational(Prime::Three, rat_int(1)),
            CycloElement::from_rational(Prime::Three, rat_int(-1)),
        ])
        .unwrap();
        assert_eq!(p, rt);
    }

    #[test]
    fn j_invariant_of_fermat_cubic_is_zero() {
        assert!(curve(0).j_invariant().is_zero());
    }

    #[test]
    fn j_invariant_is_the_expected_rational_function() {
        // j (lambda^3 + 27)^3 = lambda^3 (216 - lambda^3)^3, checked
        // cross-multiplied so no test-side division is needed.
        let check = |lam: CycloElement| {
            let e = HesseCurve::new(lam.clone()).unwrap();
            let j = e.j_invariant();
            let l3 = lam.pow(3);
            let lhs = &j * &(&l3 + &CycloElement::from_int(Prime::Three, 27)).pow(3);
            let rhs = &l3 * &(&CycloElement::from_int(Prime::Three, 216) - &l3).pow(3);
            assert_eq!(lhs, rhs, "mismatch at lambda = {lam}");
        };
        for lam in [1, 2, 5, 7, -4] {
            check(CycloElement::from_int(Prime::Three, lam));
        }
        // A parameter with a zeta component.
        check(&CycloElement::from_int(Prime::Three, 2) + &CycloElement::zeta(Prime::Three));
        // And a non-integral one.
        check(CycloElement::from_rational(Prime::Three, rat(3, 2)));
    }

    #[test]
    fn equivalent_hesse_parameters_share_a_j_invariant() {
        // lambda and 3 (6 - lambda) / (3 + lambda) present the same curve.
        let lam = CycloElement::from_int(Prime::Three, 7);
        let partner = CycloElement::from_rational(Prime::Three, rat(-3, 10));
        let e1 = HesseCurve::new(lam).unwrap();
        let e2 = HesseCurve::new(partner).unwrap();
        assert_eq!(e1.j_invariant(), e2.j_invariant());
        assert_ne!(e1.j_invariant(), curve(1).j_invariant());
    }
}
