//! Sparse multivariate forms over `Q(zeta_p)`.
//!
//! A [`Form`] is a finite sum of monomials with cyclotomic coefficients,
//! keyed by exponent vectors. Every model in this crate (Hesse cubics,
//! quintic quadrics, torsor equations) is such a form, and the group of
//! ambient linear substitutions acts by [`Form::apply_matrix`] with the
//! convention `F^M(x) = F(M x)`.

use std::collections::BTreeMap;

use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize, Serializer};

use crate::cyclo::{CycloElement, Prime};
use crate::kummer::{KummerAlgebra, KummerElement};
use crate::matrix::Matrix;
use crate::series::Series;

/// Sparse form in `nvars` variables. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct Form {
    nvars: usize,
    terms: BTreeMap<Vec<u8>, CycloElement>,
}

impl Form {
    /// The zero form.
    #[must_use]
    pub fn zero(nvars: usize) -> Self {
        Form {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    /// A single monomial `c * prod x_i^(exps_i)`.
    #[must_use]
    pub fn monomial(exps: Vec<u8>, coeff: CycloElement) -> Self {
        let mut f = Form::zero(exps.len());
        f.add_term(exps, coeff);
        f
    }

    /// The linear form `sum coeffs_i x_i`.
    #[must_use]
    pub fn linear(coeffs: &[CycloElement]) -> Self {
        let mut f = Form::zero(coeffs.len());
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0u8; coeffs.len()];
            e[i] = 1;
            f.add_term(e, c.clone());
        }
        f
    }

    /// Number of variables.
    #[must_use]
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Monomials in deterministic (exponent-lexicographic) order.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u8>, &CycloElement)> {
        self.terms.iter()
    }

    /// Number of stored monomials.
    #[must_use]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// True for the zero form.
    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of an exponent vector (zero when absent).
    #[must_use]
    pub fn coeff(&self, exps: &[u8]) -> CycloElement {
        match self.terms.get(exps) {
            Some(c) => c.clone(),
            None => CycloElement::zero(self.prime_or(Prime::Three)),
        }
    }

    fn prime_or(&self, fallback: Prime) -> Prime {
        self.terms
            .values()
            .next()
            .map_or(fallback, CycloElement::prime)
    }

    /// Add one term, dropping the entry if the sum cancels.
    pub fn add_term(&mut self, exps: Vec<u8>, coeff: CycloElement) {
        assert!(exps.len() == self.nvars, "exponent vector length mismatch");
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = &*e.get() + &coeff;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// Sum of forms.
    #[must_use]
    pub fn add(&self, other: &Form) -> Form {
        assert!(self.nvars == other.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    /// Difference of forms.
    #[must_use]
    pub fn sub(&self, other: &Form) -> Form {
        self.add(&other.scale_neg())
    }

    fn scale_neg(&self) -> Form {
        Form {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    /// Scale by a scalar from `K`.
    #[must_use]
    pub fn scale(&self, c: &CycloElement) -> Form {
        if c.is_zero() {
            return Form::zero(self.nvars);
        }
        Form {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, t)| (e.clone(), t * c)).collect(),
        }
    }

    /// Product of forms.
    #[must_use]
    pub fn mul(&self, other: &Form) -> Form {
        assert!(self.nvars == other.nvars, "variable count mismatch");
        let mut out = Form::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u8> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    /// `self^e`.
    #[must_use]
    pub fn pow(&self, e: u32) -> Form {
        let mut acc = Form::monomial(vec![0; self.nvars], CycloElement::one(self.prime_or(Prime::Three)));
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Total degree of each monomial, if uniform.
    #[must_use]
    pub fn homogeneous_degree(&self) -> Option<u8> {
        let mut degs = self
            .terms
            .keys()
            .map(|e| e.iter().map(|&x| x as u32).sum::<u32>());
        let first = degs.next()?;
        if degs.all(|d| d == first) {
            Some(first as u8)
        } else {
            None
        }
    }

    /// Evaluate at a point of `K^nvars`.
    #[must_use]
    pub fn eval(&self, point: &[CycloElement]) -> CycloElement {
        assert!(point.len() == self.nvars, "point length mismatch");
        let prime = point[0].prime();
        let mut acc = CycloElement::zero(prime);
        for (exps, coeff) in &self.terms {
            let mut term = coeff.clone();
            for (x, &e) in point.iter().zip(exps) {
                if e > 0 {
                    term = &term * &x.pow(e as u32);
                }
            }
            acc = &acc + &term;
        }
        acc
    }

    /// Evaluate at a vector over a Kummer algebra, coefficients acting as
    /// scalars.
    #[must_use]
    pub fn eval_kummer(&self, alg: &KummerAlgebra, point: &[KummerElement]) -> KummerElement {
        assert!(point.len() == self.nvars, "point length mismatch");
        let mut acc = alg.zero();
        for (exps, coeff) in &self.terms {
            let mut term = alg.one();
            for (x, &e) in point.iter().zip(exps) {
                if e > 0 {
                    term = alg.mul(&term, &alg.pow(x, e as u32));
                }
            }
            acc = alg.add(&acc, &alg.scale(&term, coeff));
        }
        acc
    }

    /// Evaluate at a vector of power series.
    #[must_use]
    pub fn eval_series(&self, point: &[Series]) -> Series {
        assert!(point.len() == self.nvars, "point length mismatch");
        let prime = point[0].prime();
        let order = point[0].order();
        let mut acc = Series::zero(prime, order);
        for (exps, coeff) in &self.terms {
            let mut term = Series::constant(CycloElement::one(prime), order);
            for (x, &e) in point.iter().zip(exps) {
                for _ in 0..e {
                    term = term.mul(x);
                }
            }
            acc = acc.add(&term.scale(coeff));
        }
        acc
    }

    /// Substitute `x -> M x`: the form `F^M` with `F^M(x) = F(M x)`.
    #[must_use]
    pub fn apply_matrix(&self, m: &Matrix) -> Form {
        assert!(m.size() == self.nvars, "matrix size mismatch");
        let rows: Vec<Form> = m.rows().map(Form::linear).collect();
        let mut out = Form::zero(self.nvars);
        for (exps, coeff) in &self.terms {
            let mut term = Form::monomial(vec![0; self.nvars], coeff.clone());
            for (row, &e) in rows.iter().zip(exps) {
                for _ in 0..e {
                    term = term.mul(row);
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Partial derivative with respect to variable `i`.
    #[must_use]
    pub fn derivative(&self, i: usize) -> Form {
        assert!(i < self.nvars, "variable index out of range");
        let mut out = Form::zero(self.nvars);
        for (exps, coeff) in &self.terms {
            if exps[i] == 0 {
                continue;
            }
            let mut e = exps.clone();
            e[i] -= 1;
            let factor = CycloElement::from_int(coeff.prime(), exps[i] as i64);
            out.add_term(e, coeff * &factor);
        }
        out
    }

    /// Gradient at a point.
    #[must_use]
    pub fn gradient_at(&self, point: &[CycloElement]) -> Vec<CycloElement> {
        (0..self.nvars)
            .map(|i| self.derivative(i).eval(point))
            .collect()
    }

    /// Coefficients on a fixed monomial list, in list order. The form must
    /// be nonzero and every stored term must appear in the list.
    #[must_use]
    pub fn coefficient_vector(&self, monomials: &[Vec<u8>]) -> Vec<CycloElement> {
        assert!(!self.is_empty(), "coefficient vector of the zero form");
        let prime = self.prime_or(Prime::Three);
        let mut covered = 0;
        let out: Vec<CycloElement> = monomials
            .iter()
            .map(|m| match self.terms.get(m) {
                Some(c) => {
                    covered += 1;
                    c.clone()
                }
                None => CycloElement::zero(prime),
            })
            .collect();
        assert!(
            covered == self.terms.len(),
            "form has a monomial outside the basis list"
        );
        out
    }
}

/// Every exponent vector of total degree `degree` in `nvars` variables, in
/// ascending lexicographic order.
#[must_use]
pub fn monomials_of_degree(nvars: usize, degree: u8) -> Vec<Vec<u8>> {
    assert!(nvars > 0, "need at least one variable");
    let mut out = Vec::new();
    let mut cur = vec![0u8; nvars];
    fill_monomials(degree, 0, &mut cur, &mut out);
    out
}

fn fill_monomials(remaining: u8, pos: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
    if pos + 1 == cur.len() {
        cur[pos] = remaining;
        out.push(cur.clone());
        cur[pos] = 0;
        return;
    }
    for e in 0..=remaining {
        cur[pos] = e;
        fill_monomials(remaining - e, pos + 1, cur, out);
    }
    cur[pos] = 0;
}

/// Full polarization of a cubic form as a symmetric trilinear sum:
/// `T(u, v, w) = sum over permutations of F's trilinear kernel`, computed by
/// inclusion-exclusion so that `T(x, x, x) = 6 F(x)`.
#[must_use]
pub fn polarize_cubic(
    alg: &KummerAlgebra,
    f: &Form,
    u: &[KummerElement],
    v: &[KummerElement],
    w: &[KummerElement],
) -> KummerElement {
    let add3 = |a: &[KummerElement], b: &[KummerElement], c: Option<&[KummerElement]>| {
        a.iter()
            .zip(b)
            .enumerate()
            .map(|(i, (x, y))| {
                let mut s = alg.add(x, y);
                if let Some(c) = c {
                    s = alg.add(&s, &c[i]);
                }
                s
            })
            .collect::<Vec<_>>()
    };
    let fuvw = f.eval_kummer(alg, &add3(u, v, Some(w)));
    let fuv = f.eval_kummer(alg, &add3(u, v, None));
    let fuw = f.eval_kummer(alg, &add3(u, w, None));
    let fvw = f.eval_kummer(alg, &add3(v, w, None));
    let fu = f.eval_kummer(alg, u);
    let fv = f.eval_kummer(alg, v);
    let fw = f.eval_kummer(alg, w);
    let mut acc = fuvw;
    for s in [&fuv, &fuw, &fvw] {
        acc = alg.sub(&acc, s);
    }
    for s in [&fu, &fv, &fw] {
        acc = alg.add(&acc, s);
    }
    acc
}

/// The symmetric bilinear form of a quadric: `B(u, v) = Q(u+v) - Q(u) - Q(v)`.
#[must_use]
pub fn polarize_quadric(
    alg: &KummerAlgebra,
    q: &Form,
    u: &[KummerElement],
    v: &[KummerElement],
) -> KummerElement {
    let sum: Vec<KummerElement> = u.iter().zip(v).map(|(x, y)| alg.add(x, y)).collect();
    let quv = q.eval_kummer(alg, &sum);
    let qu = q.eval_kummer(alg, u);
    let qv = q.eval_kummer(alg, v);
    alg.sub(&alg.sub(&quv, &qu), &qv)
}

impl std::fmt::Debug for Form {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = ["x0", "x1", "x2", "x3", "x4", "x5"];
        let mut first = true;
        for (exps, coeff) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({coeff})")?;
            for (i, &e) in exps.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*{}", names[i])?,
                    _ => write!(f, "*{}^{}", names[i], e)?,
                }
            }
        }
        Ok(())
    }
}

impl Serialize for Form {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        // [[exponents, coefficient], ...] in deterministic order.
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for (exps, coeff) in &self.terms {
            seq.serialize_element(&(exps, coeff))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Form {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let pairs = Vec::<(Vec<u8>, CycloElement)>::deserialize(deserializer)?;
        let Some(nvars) = pairs.first().map(|(e, _)| e.len()) else {
            return Err(D::Error::custom("form needs at least one monomial"));
        };
        let mut f = Form::zero(nvars);
        for (e, c) in pairs {
            if e.len() != nvars {
                return Err(D::Error::custom("inconsistent exponent vector lengths"));
            }
            f.add_term(e, c);
        }
        Ok(f)
    }
}
