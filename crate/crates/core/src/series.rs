//! Truncated power series over `Q(zeta_p)` and local branch expansions of
//! the two curve families at their origin.
//!
//! A [`Series`] holds coefficients of `t^0 .. t^(order-1)`; all operations
//! truncate at that order, so a value represents its jet modulo
//! `t^order`. A [`BranchSeries`] is a parametrization of a curve branch
//! through a chosen point: each ambient coordinate becomes a series in the
//! local parameter `t`, and every defining equation vanishes modulo
//! `t^order` (checked at construction).

use num::BigInt;

use crate::cyclo::{CycloElement, Prime};
use crate::error::{Error, Result};
use crate::forms::Form;
use crate::hesse::HesseCurve;
use crate::quintic::QuinticCurve;
use crate::rational::Rational;

/// Truncated power series with exact cyclotomic coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct Series {
    prime: Prime,
    /// Coefficient of `t^i` at index `i`; length is the truncation order.
    coeffs: Vec<CycloElement>,
}

impl Series {
    /// The zero series truncated at `order`.
    #[must_use]
    pub fn zero(prime: Prime, order: usize) -> Self {
        assert!(order > 0, "order must be positive");
        Series {
            prime,
            coeffs: vec![CycloElement::zero(prime); order],
        }
    }

    /// Constant series.
    #[must_use]
    pub fn constant(c: CycloElement, order: usize) -> Self {
        let mut s = Series::zero(c.prime(), order);
        s.coeffs[0] = c;
        s
    }

    /// The series `t`.
    #[must_use]
    pub fn parameter(prime: Prime, order: usize) -> Self {
        let mut s = Series::zero(prime, order);
        if order > 1 {
            s.coeffs[1] = CycloElement::one(prime);
        }
        s
    }

    /// Build from explicit coefficients.
    #[must_use]
    pub fn from_coeffs(prime: Prime, coeffs: Vec<CycloElement>) -> Self {
        assert!(!coeffs.is_empty(), "order must be positive");
        Series { prime, coeffs }
    }

    /// Ambient prime.
    #[must_use]
    pub fn prime(&self) -> Prime {
        self.prime
    }

    /// Truncation order.
    #[must_use]
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient of `t^i`.
    #[must_use]
    pub fn coeff(&self, i: usize) -> &CycloElement {
        &self.coeffs[i]
    }

    /// All coefficients.
    #[must_use]
    pub fn coeffs(&self) -> &[CycloElement] {
        &self.coeffs
    }

    /// `t`-adic valuation: index of the first nonzero coefficient, `None`
    /// for the (truncated) zero series.
    #[must_use]
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// True when every stored coefficient vanishes.
    #[must_use]
    pub fn is_zero(&self) -> bool {
        self.valuation().is_none()
    }

    fn check(&self, other: &Series) {
        assert!(self.prime == other.prime, "mixed primes");
        assert!(self.order() == other.order(), "mixed truncation orders");
    }

    /// Sum.
    #[must_use]
    pub fn add(&self, other: &Series) -> Series {
        self.check(other);
        Series {
            prime: self.prime,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// Difference.
    #[must_use]
    pub fn sub(&self, other: &Series) -> Series {
        self.check(other);
        Series {
            prime: self.prime,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// Product, truncated.
    #[must_use]
    pub fn mul(&self, other: &Series) -> Series {
        self.check(other);
        let n = self.order();
        let mut out = vec![CycloElement::zero(self.prime); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= n {
                    break;
                }
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        Series {
            prime: self.prime,
            coeffs: out,
        }
    }

    /// Scale by a scalar.
    #[must_use]
    pub fn scale(&self, c: &CycloElement) -> Series {
        Series {
            prime: self.prime,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Multiply by `t^k`.
    #[must_use]
    pub fn shift_up(&self, k: usize) -> Series {
        let n = self.order();
        let mut out = vec![CycloElement::zero(self.prime); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i + k < n {
                out[i + k] = a.clone();
            }
        }
        Series {
            prime: self.prime,
            coeffs: out,
        }
    }

    /// Multiplicative inverse; requires a unit constant term.
    pub fn invert(&self) -> Result<Series> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(Error::DivisionByZero {
                p: self.prime.p() as u32,
            });
        }
        let a0_inv = a0.inv().expect("constant term is nonzero");
        let n = self.order();
        let mut out = vec![CycloElement::zero(self.prime); n];
        out[0] = a0_inv.clone();
        for k in 1..n {
            let mut acc = CycloElement::zero(self.prime);
            for i in 1..=k {
                if !self.coeffs[i].is_zero() && !out[k - i].is_zero() {
                    acc = &acc + &(&self.coeffs[i] * &out[k - i]);
                }
            }
            out[k] = &(-&acc) * &a0_inv;
        }
        Ok(Series {
            prime: self.prime,
            coeffs: out,
        })
    }
}

impl std::fmt::Debug for Series {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("({c})*t^{i}"))
            .collect();
        if terms.is_empty() {
            write!(f, "O(t^{})", self.order())
        } else {
            write!(f, "{} + O(t^{})", terms.join(" + "), self.order())
        }
    }
}

/// A branch of a curve through a marked point: all ambient coordinates as
/// series in a local parameter.
#[derive(Clone, Debug)]
pub struct BranchSeries {
    prime: Prime,
    lambda: CycloElement,
    /// Ambient coordinates, one series per coordinate, including the chart
    /// constant.
    coords: Vec<Series>,
    /// Which coordinate is the local parameter `t`.
    parameter_index: usize,
}

impl BranchSeries {
    /// Ambient prime.
    #[must_use]
    pub fn prime(&self) -> Prime {
        self.prime
    }

    /// Family parameter.
    #[must_use]
    pub fn lambda(&self) -> &CycloElement {
        &self.lambda
    }

    /// The coordinate series.
    #[must_use]
    pub fn coords(&self) -> &[Series] {
        &self.coords
    }

    /// Index of the coordinate used as the local parameter.
    #[must_use]
    pub fn parameter_index(&self) -> usize {
        self.parameter_index
    }

    /// Truncation order.
    #[must_use]
    pub fn order(&self) -> usize {
        self.coords[0].order()
    }

    /// Evaluate a form along the branch.
    #[must_use]
    pub fn eval_form(&self, f: &Form) -> Series {
        f.eval_series(&self.coords)
    }

    /// Vanishing order of a form along the branch: the `t`-adic valuation of
    /// its restriction, `None` when it vanishes identically to this order.
    #[must_use]
    pub fn vanishing_order(&self, f: &Form) -> Option<usize> {
        self.eval_form(f).valuation()
    }
}

/// Branch of the Hesse cubic through its origin `(1 : -1 : 0)`, in the
/// chart `X = 1` with parameter `t = Z`.
///
/// Writing `Y = -1 + y(t)`, the curve equation determines `y` by Newton
/// iteration from `y(0) = 0`; the tangent direction there is
/// `3(1 + Y) = lambda Z + O(Z^2)`.
pub fn hesse_branch(curve: &HesseCurve, order: usize) -> BranchSeries {
    let prime = Prime::Three;
    let lambda = curve.lambda().clone();
    let t = Series::parameter(prime, order);
    let x = Series::constant(CycloElement::one(prime), order);
    let mut y = Series::constant(CycloElement::from_int(prime, -1), order);

    let f = curve.form();
    let fy = f.derivative(1);
    // Newton: y <- y - F(1, y, t)/F_Y(1, y, t); each step at least doubles
    // the contact order, so ceil(log2(order)) + 1 steps suffice.
    let steps = usize::BITS - order.leading_zeros() + 1;
    for _ in 0..steps {
        let pt = [x.clone(), y.clone(), t.clone()];
        let val = f.eval_series(&pt);
        let der = fy.eval_series(&pt);
        let delta = val.mul(&der.invert().expect("F_Y is a unit at the origin"));
        y = y.sub(&delta);
    }

    let branch = BranchSeries {
        prime,
        lambda,
        coords: vec![x, y, t],
        parameter_index: 2,
    };
    let residual = branch.eval_form(f);
    assert!(
        residual.is_zero(),
        "branch fails the curve equation: {residual:?}"
    );
    branch
}

/// Branch of the quintic normal curve through its origin
/// `(0 : lambda : -1 : 1 : -lambda)`, in the chart `x_3 = 1` with parameter
/// `t = x_0`.
///
/// The three unknown coordinate series are determined by Newton iteration
/// on three of the five quadrics whose Jacobian in the unknowns is
/// invertible at the origin (the first such triple in lexicographic order);
/// the remaining two quadrics are checked as residuals.
pub fn quintic_branch(curve: &QuinticCurve, order: usize) -> Result<BranchSeries> {
    let prime = Prime::Five;
    let lambda = curve.lambda().clone();
    let eqs = curve.equations();
    let origin = curve.origin();

    // Unknown coordinates are x_1, x_2, x_4; x_0 = t and x_3 = 1.
    let unknowns = [1usize, 2, 4];
    let t = Series::parameter(prime, order);
    let one = Series::constant(CycloElement::one(prime), order);

    // Starting values: the origin's affine coordinates in this chart.
    let o = origin.coords();
    let chart_scale = o[3].inv().expect("origin has x_3 != 0");
    let mut current: Vec<Series> = vec![
        t.clone(),
        Series::constant(&o[1] * &chart_scale, order),
        Series::constant(&o[2] * &chart_scale, order),
        one.clone(),
        Series::constant(&o[4] * &chart_scale, order),
    ];

    // Pick the equation triple with invertible Jacobian at t = 0.
    let triple = select_newton_triple(&eqs, &current, &unknowns)?;

    // Precompute the symbolic Jacobian entries of the chosen triple.
    let jac_forms: Vec<Vec<Form>> = triple
        .iter()
        .map(|&ei| unknowns.iter().map(|&ui| eqs[ei].derivative(ui)).collect())
        .collect();

    let steps = usize::BITS - order.leading_zeros() + 1;
    for _ in 0..steps {
        let vals: Vec<Series> = triple.iter().map(|&ei| eqs[ei].eval_series(&current)).collect();
        let jac: Vec<Vec<Series>> = jac_forms
            .iter()
            .map(|row| row.iter().map(|f| f.eval_series(&current)).collect())
            .collect();
        let delta = solve_3x3_series(&jac, &vals)?;
        for (k, &ui) in unknowns.iter().enumerate() {
            current[ui] = current[ui].sub(&delta[k]);
        }
    }

    let branch = BranchSeries {
        prime,
        lambda,
        coords: current,
        parameter_index: 0,
    };
    for (i, eq) in eqs.iter().enumerate() {
        let residual = branch.eval_form(eq);
        assert!(
            residual.is_zero(),
            "quadric {i} fails along the branch: {residual:?}"
        );
    }
    Ok(branch)
}

/// First (lexicographic) triple of equation indices whose Jacobian in the
/// unknowns is invertible at the branch point.
fn select_newton_triple(
    eqs: &[Form],
    start: &[Series],
    unknowns: &[usize; 3],
) -> Result<[usize; 3]> {
    let point: Vec<CycloElement> = start.iter().map(|s| s.coeff(0).clone()).collect();
    for a in 0..eqs.len() {
        for b in (a + 1)..eqs.len() {
            for c in (b + 1)..eqs.len() {
                let rows: Vec<Vec<CycloElement>> = [a, b, c]
                    .iter()
                    .map(|&ei| {
                        unknowns
                            .iter()
                            .map(|&ui| eqs[ei].derivative(ui).eval(&point))
                            .collect()
                    })
                    .collect();
                let m = crate::matrix::Matrix::from_rows(rows);
                if !m.det().is_zero() {
                    return Ok([a, b, c]);
                }
            }
        }
    }
    Err(Error::Degenerate {
        reason: "no invertible Jacobian triple at the branch point".into(),
    })
}

/// Solve a 3x3 linear system over the series ring by Cramer's rule; the
/// determinant must be a unit series.
fn solve_3x3_series(jac: &[Vec<Series>], rhs: &[Series]) -> Result<Vec<Series>> {
    let det3 = |m: &[Vec<Series>]| -> Series {
        let a = m[0][0].mul(&m[1][1].mul(&m[2][2]).sub(&m[1][2].mul(&m[2][1])));
        let b = m[0][1].mul(&m[1][0].mul(&m[2][2]).sub(&m[1][2].mul(&m[2][0])));
        let c = m[0][2].mul(&m[1][0].mul(&m[2][1]).sub(&m[1][1].mul(&m[2][0])));
        a.sub(&b).add(&c)
    };
    let d = det3(jac);
    let d_inv = d.invert()?;
    let mut out = Vec::with_capacity(3);
    for col in 0..3 {
        let mut m: Vec<Vec<Series>> = jac.to_vec();
        for (row, r) in rhs.iter().enumerate() {
            m[row][col] = r.clone();
        }
        out.push(det3(&m).mul(&d_inv));
    }
    Ok(out)
}

/// Scale the local parameter: substitute `t -> r t` in every coordinate.
#[must_use]
pub fn rescale_parameter(branch: &BranchSeries, r: &CycloElement) -> BranchSeries {
    let order = branch.order();
    let mut powers = Vec::with_capacity(order);
    let mut acc = CycloElement::one(branch.prime);
    for _ in 0..order {
        powers.push(acc.clone());
        acc = &acc * r;
    }
    let coords = branch
        .coords
        .iter()
        .map(|s| {
            Series::from_coeffs(
                branch.prime,
                s.coeffs()
                    .iter()
                    .zip(&powers)
                    .map(|(c, pw)| c * pw)
                    .collect(),
            )
        })
        .collect();
    BranchSeries {
        prime: branch.prime,
        lambda: branch.lambda.clone(),
        coords,
        parameter_index: branch.parameter_index,
    }
}

/// Height of the largest coefficient appearing in the branch, a cheap
/// blow-up diagnostic for tests.
#[must_use]
pub fn branch_coefficient_height(branch: &BranchSeries) -> BigInt {
    branch
        .coords
        .iter()
        .flat_map(|s| s.coeffs().iter().map(CycloElement::height))
        .max()
        .expect("nonempty branch")
}

/// Convenience: the rational `1/n` as a scalar.
#[must_use]
pub fn one_over(prime: Prime, n: i64) -> CycloElement {
    CycloElement::from_rational(prime, Rational::new(BigInt::from(1), BigInt::from(n)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat_int;

    #[test]
    fn geometric_series_inverts() {
        // (1 - t)^-1 = 1 + t + t^2 + ...
        let prime = Prime::Three;
        let one = Series::constant(CycloElement::one(prime), 6);
        let s = one.sub(&Series::parameter(prime, 6));
        let inv = s.invert().unwrap();
        for i in 0..6 {
            assert!(inv.coeff(i).is_one(), "coefficient {i}");
        }
        assert!(s.mul(&inv).sub(&one).is_zero());
    }

    #[test]
    fn valuation_sees_leading_zeros() {
        let prime = Prime::Five;
        let t = Series::parameter(prime, 5);
        let t3 = t.mul(&t).mul(&t);
        assert_eq!(t3.valuation(), Some(3));
        assert_eq!(Series::zero(prime, 5).valuation(), None);
        assert!(t3.shift_up(3).is_zero(), "shifting past the order truncates");
    }

    #[test]
    fn non_unit_inversion_fails() {
        let t = Series::parameter(Prime::Three, 4);
        assert!(t.invert().is_err());
    }

    #[test]
    fn rescale_substitutes_powers() {
        let prime = Prime::Three;
        let two = CycloElement::from_int(prime, 2);
        let t = Series::parameter(prime, 4);
        let branch = BranchSeries {
            prime,
            lambda: CycloElement::one(prime),
            coords: vec![t.mul(&t)],
            parameter_index: 0,
        };
        let scaled = rescale_parameter(&branch, &two);
        assert_eq!(
            scaled.coords()[0].coeff(2),
            &CycloElement::from_rational(prime, rat_int(4))
        );
    }
}
