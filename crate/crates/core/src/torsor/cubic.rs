//! The plane cubic torsor attached to `(a, beta)` for `p = 3`.
//!
//! With `u = beta / sigma(beta)` and `Tr` the algebra trace, the model is
//!
//! ```text
//! (Tr(u) + lambda) (a^2 X^3 + a Y^3 + Z^3)
//!   + 3 Tr(alpha u) (a X^2 Z + a Y^2 X + Z^2 Y)
//!   + 3 Tr(alpha^2 u) (a X^2 Y + Y^2 Z + Z^2 X)
//!   + 3 a (2 Tr(u) - lambda) XYZ.
//! ```
//!
//! It transforms with scalar `a` under `M_S = M_(a,3)` and scalar
//! `b = norm(beta)` under the squared-diagonal twist
//! `M_T = D_3^2 (beta_0 I + beta_1 M_S + beta_2 M_S^2)`, takes the values
//! `27 a^2 sigma^i(u)` at the eigenvectors `v_i`, and has symmetrized
//! trilinear value `27 a^2 lambda` at `(v_0, v_1, v_2)`, which is how the
//! Jacobian parameter is read back off the model.

use serde::{Deserialize, Serialize};

use super::{eigenvectors, search, twist_matrix, EigenProfile, TorsorReport};
use crate::cyclo::{CycloElement, Prime};
use crate::error::{Error, Result};
use crate::forms::{monomials_of_degree, polarize_cubic, Form};
use crate::kummer::{KummerAlgebra, KummerElement};
use crate::matrix::{translation_shift, Matrix, TorsionMatrix};
use crate::point::ProjectivePoint;
use crate::rational::rat_int;

/// Plane cubic torsor model for a descent class `(a, norm(beta))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubicTorsor {
    lambda: CycloElement,
    a: CycloElement,
    beta: KummerElement,
    form: Form,
    m_s: TorsionMatrix,
    m_t: TorsionMatrix,
}

impl CubicTorsor {
    /// Build the model from the Jacobian parameter and the Kummer datum.
    /// Requires `lambda^3 != -27`, `a != 0`, and `norm(beta) != 0`.
    pub fn build(lambda: CycloElement, a: CycloElement, beta: KummerElement) -> Result<Self> {
        assert!(
            lambda.prime() == Prime::Three && a.prime() == Prime::Three,
            "cubic torsors live over Q(zeta_3)"
        );
        if lambda.pow(3) == CycloElement::from_int(Prime::Three, -27) {
            return Err(Error::Degenerate {
                reason: format!("lambda = {lambda} has lambda^3 = -27, the Jacobian is singular"),
            });
        }
        let alg = KummerAlgebra::new(Prime::Three, a.clone())?;
        let u = unit_of(&alg, &beta)?;
        let tr_u = alg.trace(&u);
        let tr_au = alg.trace(&alg.mul(&alg.alpha_pow(1), &u));
        let tr_a2u = alg.trace(&alg.mul(&alg.alpha_pow(2), &u));
        let three = rat_int(3);
        let coeff_a = &tr_u + &lambda;
        let coeff_b = tr_au.scale(&three);
        let coeff_c = tr_a2u.scale(&three);
        let coeff_xyz = (&(&tr_u.scale(&rat_int(2)) - &lambda) * &a).scale(&three);
        let form = assemble(&a, &coeff_a, &coeff_b, &coeff_c, &coeff_xyz);
        let m_s = translation_shift(Prime::Three, &a);
        let m_t = twist_matrix(&beta, &m_s, 2);
        Ok(CubicTorsor {
            lambda,
            a,
            beta,
            form,
            m_s,
            m_t,
        })
    }

    /// Reassemble a model from stored parts without validation; `verify`
    /// decides afterwards whether the parts are coherent.
    #[must_use]
    pub fn from_parts(
        lambda: CycloElement,
        a: CycloElement,
        beta: KummerElement,
        form: Form,
        m_s: TorsionMatrix,
        m_t: TorsionMatrix,
    ) -> Self {
        CubicTorsor {
            lambda,
            a,
            beta,
            form,
            m_s,
            m_t,
        }
    }

    /// Hesse parameter of the Jacobian.
    #[must_use]
    pub fn lambda(&self) -> &CycloElement {
        &self.lambda
    }

    /// First class coordinate.
    #[must_use]
    pub fn a(&self) -> &CycloElement {
        &self.a
    }

    /// The chosen norm preimage; `norm(beta)` is the second class
    /// coordinate.
    #[must_use]
    pub fn beta(&self) -> &KummerElement {
        &self.beta
    }

    /// The cubic form cutting out the torsor in `P^2`.
    #[must_use]
    pub fn form(&self) -> &Form {
        &self.form
    }

    /// Translation matrix for the first torsion generator.
    #[must_use]
    pub fn m_s(&self) -> &TorsionMatrix {
        &self.m_s
    }

    /// Translation matrix for the second torsion generator.
    #[must_use]
    pub fn m_t(&self) -> &TorsionMatrix {
        &self.m_t
    }

    /// The ambient algebra `K[alpha]/(alpha^3 - a)`, rebuilt on demand.
    pub fn algebra(&self) -> Result<KummerAlgebra> {
        KummerAlgebra::new(Prime::Three, self.a.clone())
    }

    /// `b = norm(beta)`.
    pub fn b(&self) -> Result<CycloElement> {
        Ok(self.algebra()?.norm(&self.beta))
    }

    /// The fixed scalar `27 a^2` relating eigenvector values to the unit
    /// `u` and the trilinear value to `lambda`.
    #[must_use]
    pub fn eigen_scalar(&self) -> CycloElement {
        self.a.pow(2).scale(&rat_int(27))
    }

    /// Values of the form and its full polarization at the eigenvectors.
    pub fn eigen_profile(&self) -> Result<EigenProfile> {
        let alg = self.algebra()?;
        let vs = eigenvectors(&alg);
        let form_values: Vec<KummerElement> = vs
            .iter()
            .map(|v| self.form.eval_kummer(&alg, v))
            .collect();
        let trilinear = polarize_cubic(&alg, &self.form, &vs[0], &vs[1], &vs[2]);
        Ok(EigenProfile {
            form_values,
            trilinear: Some(trilinear),
            bilinear: Default::default(),
        })
    }

    /// Recover the Hesse parameter of the Jacobian from the model alone:
    /// the trilinear eigenvalue divided by `27 a^2`, after checking that
    /// the three form values multiply to `(27 a^2)^3`.
    pub fn jacobian_lambda(&self) -> Result<CycloElement> {
        let alg = self.algebra()?;
        let profile = self.eigen_profile()?;
        let s = self.eigen_scalar();
        let mut prod = alg.one();
        for i in 0..3 {
            let fv = profile.form_value(i);
            if fv.is_zero() {
                return Err(Error::Degenerate {
                    reason: format!("F(v_{i}) = 0: the model has a torsion-fixed point"),
                });
            }
            prod = alg.mul(&prod, fv);
        }
        if prod != alg.scalar(&s.pow(3)) {
            return Err(Error::Invalid(
                "eigenvector values do not multiply to (27 a^2)^3".into(),
            ));
        }
        let trilinear = profile
            .trilinear()
            .expect("cubic profiles carry the trilinear value")
            .as_scalar()
            .ok_or_else(|| Error::Invalid("trilinear eigenvalue is not a scalar".into()))?;
        trilinear.div(&s)
    }

    /// Run every structural check; failures land in the report rather than
    /// panicking, so damaged models can be diagnosed.
    #[must_use]
    pub fn verify(&self) -> TorsorReport {
        let mut report = TorsorReport::default();
        let alg = match self.algebra() {
            Ok(alg) => alg,
            Err(e) => {
                report.record("algebra", false, format!("cannot build K[alpha]/(alpha^3 - a): {e}"));
                return report;
            }
        };
        let b = alg.norm(&self.beta);
        if b.is_zero() {
            report.record("beta_unit", false, "norm(beta) = 0, beta is not a unit");
            return report;
        }
        report.record("beta_unit", true, "norm(beta) is nonzero");

        match Self::build(self.lambda.clone(), self.a.clone(), self.beta.clone()) {
            Ok(fresh) => {
                let same = fresh.form == self.form && fresh.m_s == self.m_s && fresh.m_t == self.m_t;
                report.record(
                    "rebuild",
                    same,
                    if same {
                        "stored form and matrices match a fresh build from (lambda, a, beta)"
                    } else {
                        "stored parts differ from a fresh build from (lambda, a, beta)"
                    },
                );
            }
            Err(e) => report.record("rebuild", false, format!("rebuild failed: {e}")),
        }

        let moved_s = self.form.apply_matrix(self.m_s.matrix());
        report.record(
            "ms_invariance",
            moved_s == self.form.scale(&self.a),
            "F composed with M_S equals a F",
        );
        let moved_t = self.form.apply_matrix(self.m_t.matrix());
        report.record(
            "mt_invariance",
            moved_t == self.form.scale(&b),
            "F composed with M_T equals norm(beta) F",
        );

        let dets_ok = self.m_s.det() == &self.a
            && self.m_t.det() == &b
            && self.m_s.det_consistent()
            && self.m_t.det_consistent();
        report.record(
            "determinants",
            dets_ok,
            "det M_S = a and det M_T = norm(beta)",
        );
        let comm_ok = Matrix::commutator(self.m_t.matrix(), self.m_s.matrix())
            .ok()
            .and_then(|c| c.as_scalar())
            .is_some_and(|c| c == CycloElement::zeta(Prime::Three));
        report.record("commutator", comm_ok, "M_T M_S M_T^-1 M_S^-1 = zeta I");

        match (self.eigen_profile(), unit_of(&alg, &self.beta)) {
            (Ok(profile), Ok(u)) => {
                let s = self.eigen_scalar();
                let values_ok = (0..3).all(|i| {
                    profile.form_value(i) == &alg.scale(&alg.sigma(&u, i), &s)
                });
                report.record("eigen_values", values_ok, "F(v_i) = 27 a^2 sigma^i(u)");

                let vs = eigenvectors(&alg);
                let translation_ok = (0..3).all(|i| {
                    let lhs = moved_t.eval_kummer(&alg, &vs[i]);
                    let factor = alg.pow(&alg.sigma(&self.beta, i), 3);
                    lhs == alg.mul(&factor, profile.form_value((i + 2) % 3))
                });
                report.record(
                    "eigen_translation",
                    translation_ok,
                    "F(M_T v_i) = sigma^i(beta)^3 F(v_(i+2))",
                );

                let trilinear_ok = profile
                    .trilinear()
                    .and_then(KummerElement::as_scalar)
                    .is_some_and(|t| t == &s * &self.lambda);
                report.record("trilinear", trilinear_ok, "T(v_0, v_1, v_2) = 27 a^2 lambda");
            }
            _ => report.record("eigen_values", false, "eigen profile could not be computed"),
        }

        match self.jacobian_lambda() {
            Ok(l) => report.record(
                "jacobian",
                l == self.lambda,
                "recovered Jacobian parameter equals lambda",
            ),
            Err(e) => report.record("jacobian", false, format!("jacobian recovery failed: {e}")),
        }

        report.record(
            "smoothness",
            smooth_by_elimination(&self.form),
            "the partial derivatives have no common projective zero",
        );

        if alg.is_split() {
            report
                .notes
                .push(format!("a = {} is a cube, the algebra splits as K^3", self.a));
        }
        report
    }

    /// Small K-points on the model: exhaustive over primitive coordinate
    /// vectors whose `Z[zeta_3]` coefficients are bounded by `bound` in the
    /// first two coordinates, with the third solved per candidate. Sorted
    /// by height, then by coordinates.
    #[must_use]
    pub fn points(&self, bound: u32) -> Vec<ProjectivePoint> {
        search::cubic_form_points(&self.form, bound)
    }
}

/// `u = beta / sigma(beta)`, the unit invariant driving the coefficients.
fn unit_of(alg: &KummerAlgebra, beta: &KummerElement) -> Result<KummerElement> {
    if alg.norm(beta).is_zero() {
        return Err(Error::Invalid("beta must have nonzero norm".into()));
    }
    Ok(alg.unit_invariants(beta)?.remove(0))
}

/// Lay down the ten monomials from the coefficient four-tuple.
fn assemble(
    a: &CycloElement,
    coeff_a: &CycloElement,
    coeff_b: &CycloElement,
    coeff_c: &CycloElement,
    coeff_xyz: &CycloElement,
) -> Form {
    let a2 = a.pow(2);
    let mut f = Form::zero(3);
    f.add_term(vec![3, 0, 0], coeff_a * &a2);
    f.add_term(vec![0, 3, 0], coeff_a * a);
    f.add_term(vec![0, 0, 3], coeff_a.clone());
    f.add_term(vec![2, 0, 1], coeff_b * a);
    f.add_term(vec![1, 2, 0], coeff_b * a);
    f.add_term(vec![0, 1, 2], coeff_b.clone());
    f.add_term(vec![2, 1, 0], coeff_c * a);
    f.add_term(vec![0, 2, 1], coeff_c.clone());
    f.add_term(vec![1, 0, 2], coeff_c.clone());
    f.add_term(vec![1, 1, 1], coeff_xyz.clone());
    f
}

/// Exact smoothness certificate for a plane cubic: the three partial
/// quadrics have no common zero over the algebraic closure exactly when
/// their degree-4 multiples span all 15 quartic monomials (a regular
/// sequence of three quadrics in three variables has no quotient in degree
/// 4, and conversely a common zero keeps every degree alive).
fn smooth_by_elimination(form: &Form) -> bool {
    let partials: Vec<Form> = (0..3).map(|i| form.derivative(i)).collect();
    if partials.iter().any(Form::is_empty) {
        return false;
    }
    let quartics = monomials_of_degree(3, 4);
    let quadratics = monomials_of_degree(3, 2);
    let mut rows = Vec::with_capacity(partials.len() * quadratics.len());
    for p in &partials {
        for m in &quadratics {
            let shifted = p.mul(&Form::monomial(m.clone(), CycloElement::one(Prime::Three)));
            rows.push(shifted.coefficient_vector(&quartics));
        }
    }
    Matrix::rank_of(rows) == quartics.len()
}
