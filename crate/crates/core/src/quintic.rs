//! The family of elliptic normal quintics in `P^4` cut out by five
//! quadrics, with the Heisenberg torsion action.
//!
//! For a parameter `lambda` the curve `E_lambda` is the intersection of
//! `eq_i = lambda x_i^2 + lambda^2 x_(i-2) x_(i+2) - x_(i-1) x_(i+1)`
//! for `i mod 5`. Its origin is `(0 : lambda : -1 : 1 : -lambda)`, and the
//! translations by the distinguished 5-torsion points `S` and `T` are the
//! diagonal matrix `D = diag(zeta^i)` and the cyclic shift `M`, acting on
//! the equation set by `eq_i -> zeta^(2i) eq_i` and `eq_i -> eq_(i+1)`.

use std::collections::BTreeSet;

use num::{BigInt, ToPrimitive};
use rayon::prelude::*;

use crate::cyclo::{CycloElement, Prime};
use crate::error::{Error, Result};
use crate::forms::Form;
use crate::matrix::{translation_diag, translation_shift, TorsionMatrix};
use crate::point::ProjectivePoint;
use crate::smallint::{z5_elem, z5add, z5mul, z5scale, z5sub, Z5Divisor};

/// A member of the quintic family; smooth for every nonzero rational
/// `lambda`.
#[derive(Clone, Debug)]
pub struct QuinticCurve {
    lambda: CycloElement,
    equations: Vec<Form>,
}

impl QuinticCurve {
    /// Build the curve; `lambda` must be nonzero.
    pub fn new(lambda: CycloElement) -> Result<Self> {
        assert!(lambda.prime() == Prime::Five, "lambda lives in Q(zeta_5)");
        if lambda.is_zero() {
            return Err(Error::Degenerate {
                reason: "lambda = 0 degenerates the quintic family".into(),
            });
        }
        let lambda2 = &lambda * &lambda;
        let mut equations = Vec::with_capacity(5);
        for i in 0..5usize {
            let mut f = Form::zero(5);
            let mut sq = vec![0u8; 5];
            sq[i] = 2;
            f.add_term(sq, lambda.clone());
            let mut far = vec![0u8; 5];
            far[(i + 3) % 5] += 1; // index i - 2
            far[(i + 2) % 5] += 1; // index i + 2
            f.add_term(far, lambda2.clone());
            let mut near = vec![0u8; 5];
            near[(i + 4) % 5] += 1; // index i - 1
            near[(i + 1) % 5] += 1;
            f.add_term(near, -&CycloElement::one(Prime::Five));
            equations.push(f);
        }
        Ok(QuinticCurve { lambda, equations })
    }

    /// Family parameter.
    #[must_use]
    pub fn lambda(&self) -> &CycloElement {
        &self.lambda
    }

    /// The five defining quadrics, `eq_0 .. eq_4`.
    #[must_use]
    pub fn equations(&self) -> &[Form] {
        &self.equations
    }

    /// The origin `(0 : lambda : -1 : 1 : -lambda)`.
    #[must_use]
    pub fn origin(&self) -> ProjectivePoint {
        let one = CycloElement::one(Prime::Five);
        ProjectivePoint::new(vec![
            CycloElement::zero(Prime::Five),
            self.lambda.clone(),
            -&one,
            one,
            -&self.lambda,
        ])
        .expect("lambda is nonzero")
    }

    /// Translation matrices `(D, M)` for the two 5-torsion generators.
    #[must_use]
    pub fn translation_matrices(&self) -> (TorsionMatrix, TorsionMatrix) {
        let d = translation_diag(Prime::Five);
        let m = translation_shift(Prime::Five, &CycloElement::one(Prime::Five));
        (d, m)
    }

    /// Membership test against all five quadrics.
    #[must_use]
    pub fn contains(&self, p: &ProjectivePoint) -> bool {
        self.equations.iter().all(|f| f.eval(p.coords()).is_zero())
    }

    /// The 25 torsion points: the orbit of the origin under `D` and `M`.
    #[must_use]
    pub fn torsion_points(&self) -> Vec<ProjectivePoint> {
        let (d, m) = self.translation_matrices();
        let o = self.origin();
        let mut out = Vec::with_capacity(25);
        for i in 0..5 {
            for j in 0..5 {
                let mat = d.matrix().pow(i).mul(&m.matrix().pow(j));
                out.push(o.transformed(&mat).expect("torsion matrices are invertible"));
            }
        }
        out
    }

    /// All curve points whose canonical primitive integral representative
    /// has coefficients bounded by `bound`.
    ///
    /// Exhaustive within the bound: the first four coordinates range over
    /// the full box, the fifth is solved from a quadric linear in it
    /// (`eq_0` when `x_1 != 0`, else `eq_3` when `x_2 != 0`; when both
    /// vanish all coordinates are forced to zero, so nothing is missed),
    /// and every candidate is then verified against all five equations
    /// exactly.
    #[must_use]
    pub fn point_search(&self, bound: u32) -> Vec<ProjectivePoint> {
        let h = bound as i64;
        let (lam_nums, lam_den) = self.lambda.cleared();
        let mut lam = [0i128; 4];
        for (slot, n) in lam.iter_mut().zip(&lam_nums) {
            *slot = n.to_i128().expect("small lambda");
        }
        let ld = lam_den.to_i128().expect("small lambda");

        let width = (2 * h + 1) as usize;
        let keys = width.pow(4);
        let decode = move |key: usize| -> [i128; 4] {
            let mut k = key;
            let mut out = [0i128; 4];
            for slot in &mut out {
                *slot = (k % width) as i128 - h as i128;
                k /= width;
            }
            out
        };

        let raw: Vec<[[i128; 4]; 5]> = (0..keys)
            .into_par_iter()
            .flat_map_iter(|k0| {
                let x0 = decode(k0);
                let mut local = Vec::new();
                for k1 in 0..keys {
                    let x1 = decode(k1);
                    search_tail(&lam, ld, &decode, keys, x0, x1, &mut local);
                }
                local
            })
            .collect();

        let mut seen = BTreeSet::new();
        for c in raw {
            let coords: Vec<CycloElement> = c.iter().map(z5_elem).collect();
            if coords.iter().all(CycloElement::is_zero) {
                continue;
            }
            let p = ProjectivePoint::new(coords).expect("nonzero vector");
            if self.contains(&p) && p.height() <= BigInt::from(h) {
                seen.insert(p);
            }
        }
        let mut points: Vec<ProjectivePoint> = seen.into_iter().collect();
        points.sort_by_key(|p| (p.height(), p.clone()));
        points
    }
}

/// Inner two coordinate loops of the point search, pushing unverified
/// candidate vectors. `x_4` is solved from `eq_0` (preferred) or `eq_3`.
fn search_tail(
    lam: &[i128; 4],
    ld: i128,
    decode: &impl Fn(usize) -> [i128; 4],
    keys: usize,
    x0: [i128; 4],
    x1: [i128; 4],
    out: &mut Vec<[[i128; 4]; 5]>,
) {
    let lam2 = z5mul(lam, lam);
    let zero = [0i128; 4];
    let x1_zero = x1 == zero;
    // eq_0 * ld^2: ld L x0^2 + L^2 x2 x3 - ld^2 x1 x4 = 0.
    let eq0_const = z5scale(&z5mul(lam, &z5mul(&x0, &x0)), ld);
    let div1 = if x1_zero {
        None
    } else {
        Some(Z5Divisor::new(z5scale(&x1, ld * ld)))
    };

    for k2 in 0..keys {
        let x2 = decode(k2);
        let x2_zero = x2 == zero;
        if x1_zero && x2_zero {
            // eq_0 forces x0 = 0, then eq_3, eq_4 force x3 = x4 = 0.
            continue;
        }
        let div2 = if x1_zero {
            Some(Z5Divisor::new(z5scale(&x2, ld * ld)))
        } else {
            None
        };
        for k3 in 0..keys {
            let x3 = decode(k3);
            let x4 = if let Some(d1) = &div1 {
                let num = z5add(&eq0_const, &z5mul(&lam2, &z5mul(&x2, &x3)));
                d1.divide(&num)
            } else {
                // eq_3 * ld^2: ld L x3^2 + L^2 x0 x1 - ld^2 x2 x4 = 0,
                // and x1 = 0 here.
                let num = z5scale(&z5mul(lam, &z5mul(&x3, &x3)), ld);
                div2.as_ref().expect("x2 nonzero on this path").divide(&num)
            };
            let Some(x4) = x4 else { continue };
            let xs = [x0, x1, x2, x3, x4];
            if verify_cleared(lam, &lam2, ld, &xs) {
                out.push(xs);
            }
        }
    }
}

/// Check all five cleared quadrics
/// `ld L x_i^2 + L^2 x_(i-2) x_(i+2) - ld^2 x_(i-1) x_(i+1) = 0`.
fn verify_cleared(lam: &[i128; 4], lam2: &[i128; 4], ld: i128, xs: &[[i128; 4]; 5]) -> bool {
    for i in 0..5usize {
        let sq = z5scale(&z5mul(lam, &z5mul(&xs[i], &xs[i])), ld);
        let far = z5mul(lam2, &z5mul(&xs[(i + 3) % 5], &xs[(i + 2) % 5]));
        let near = z5scale(&z5mul(&xs[(i + 4) % 5], &xs[(i + 1) % 5]), ld * ld);
        let total = z5sub(&z5add(&sq, &far), &near);
        if total != [0, 0, 0, 0] {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(lam: i64) -> QuinticCurve {
        QuinticCurve::new(CycloElement::from_int(Prime::Five, lam)).unwrap()
    }

    #[test]
    fn origin_satisfies_all_five_quadrics() {
        for lam in [1, 2, -3] {
            let e = curve(lam);
            assert!(e.contains(&e.origin()), "lambda = {lam}");
        }
    }

    #[test]
    fn sign_flipped_origin_variant_fails() {
        // (0 : lambda : 1 : -1 : -lambda) violates eq_1.
        let e = curve(2);
        let one = CycloElement::one(Prime::Five);
        let wrong = ProjectivePoint::new(vec![
            CycloElement::zero(Prime::Five),
            e.lambda().clone(),
            one.clone(),
            -&one,
            -e.lambda(),
        ])
        .unwrap();
        assert!(!e.contains(&wrong));
        let bad = e.equations()[1].eval(wrong.coords());
        assert!(!bad.is_zero());
    }

    #[test]
    fn equations_transform_under_torsion() {
        let e = curve(3);
        let (d, m) = e.translation_matrices();
        // eq_i composed with D is zeta^(2i) eq_i.
        for (i, eq) in e.equations().iter().enumerate() {
            let moved = eq.apply_matrix(d.matrix());
            let scaled = eq.scale(&CycloElement::zeta_pow(Prime::Five, 2 * i as i64));
            assert_eq!(moved, scaled, "diagonal action on eq_{i}");
        }
        // eq_i composed with M is eq_(i+1).
        for (i, eq) in e.equations().iter().enumerate() {
            let moved = eq.apply_matrix(m.matrix());
            assert_eq!(moved, e.equations()[(i + 1) % 5], "shift action on eq_{i}");
        }
    }

    #[test]
    fn torsion_orbit_is_25_curve_points() {
        let e = curve(1);
        let pts = e.torsion_points();
        assert_eq!(pts.len(), 25);
        let set: BTreeSet<_> = pts.iter().cloned().collect();
        assert_eq!(set.len(), 25);
        for p in &pts {
            assert!(e.contains(p));
        }
    }

    #[test]
    fn point_search_recovers_torsion() {
        let e = curve(1);
        let pts = e.point_search(1);
        assert!(pts.len() >= 25, "found {}", pts.len());
        for t in e.torsion_points() {
            assert!(pts.contains(&t), "missing torsion point {t}");
        }
        for p in &pts {
            assert!(e.contains(p));
        }
    }

}
