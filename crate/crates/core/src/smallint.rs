//! Fixed-width integer arithmetic in `Z[zeta_p]` for the hot loops of the
//! point and norm searches.
//!
//! Everything here is exact `i128` arithmetic on coordinate vectors over
//! the power basis; callers are responsible for staying within
//! overflow-safe magnitudes and for confirming hits with full field
//! arithmetic where it matters.

use num::BigInt;

use crate::cyclo::{CycloElement, Prime};
use crate::rational::Rational;

/// Product in `Z[zeta_3]` on the basis `1, zeta` with `zeta^2 = -1 - zeta`.
pub(crate) fn z3mul(a: [i128; 2], b: [i128; 2]) -> [i128; 2] {
    let cross = a[0] * b[1] + a[1] * b[0];
    let sq = a[1] * b[1];
    [a[0] * b[0] - sq, cross - sq]
}

pub(crate) fn z3add(a: [i128; 2], b: [i128; 2]) -> [i128; 2] {
    [a[0] + b[0], a[1] + b[1]]
}

pub(crate) fn z3cube(a: [i128; 2]) -> [i128; 2] {
    z3mul(a, z3mul(a, a))
}

pub(crate) fn z3_elem(v: [i128; 2]) -> CycloElement {
    CycloElement::new(
        Prime::Three,
        v.iter()
            .map(|&n| Rational::from_integer(BigInt::from(n)))
            .collect(),
    )
}

/// Product in `Z[zeta_5]` on the basis `1, zeta, zeta^2, zeta^3` with
/// `zeta^4 = -(1 + zeta + zeta^2 + zeta^3)`.
pub(crate) fn z5mul(a: &[i128; 4], b: &[i128; 4]) -> [i128; 4] {
    let mut acc = [0i128; 7];
    for i in 0..4 {
        if a[i] == 0 {
            continue;
        }
        for j in 0..4 {
            acc[i + j] += a[i] * b[j];
        }
    }
    // Fold exponents 6, 5, then 4.
    acc[1] += acc[6];
    acc[0] += acc[5];
    let c = acc[4];
    [acc[0] - c, acc[1] - c, acc[2] - c, acc[3] - c]
}

pub(crate) fn z5add(a: &[i128; 4], b: &[i128; 4]) -> [i128; 4] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
}

pub(crate) fn z5sub(a: &[i128; 4], b: &[i128; 4]) -> [i128; 4] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]]
}

pub(crate) fn z5scale(a: &[i128; 4], c: i128) -> [i128; 4] {
    [a[0] * c, a[1] * c, a[2] * c, a[3] * c]
}

/// Galois map `zeta -> zeta^j` on integer coordinates.
pub(crate) fn z5galois(a: &[i128; 4], j: usize) -> [i128; 4] {
    let mut out = [0i128; 4];
    for (i, &c) in a.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let e = (i * j) % 5;
        if e < 4 {
            out[e] += c;
        } else {
            for slot in &mut out {
                *slot -= c;
            }
        }
    }
    out
}

pub(crate) fn z5_elem(v: &[i128; 4]) -> CycloElement {
    CycloElement::new(
        Prime::Five,
        v.iter()
            .map(|&n| Rational::from_integer(BigInt::from(n)))
            .collect(),
    )
}

/// Exact division by a fixed nonzero element of `Z[zeta_5]`, via the
/// conjugate product and integer norm.
pub(crate) struct Z5Divisor {
    conj: [i128; 4],
    norm: i128,
}

impl Z5Divisor {
    pub(crate) fn new(w: [i128; 4]) -> Self {
        let s2 = z5galois(&w, 2);
        let s3 = z5galois(&w, 3);
        let s4 = z5galois(&w, 4);
        let conj = z5mul(&s2, &z5mul(&s3, &s4));
        let full = z5mul(&w, &conj);
        debug_assert!(full[1] == 0 && full[2] == 0 && full[3] == 0, "norm is rational");
        Z5Divisor {
            conj,
            norm: full[0],
        }
    }

    /// `Some(num / w)` when the quotient lies in `Z[zeta_5]`.
    pub(crate) fn divide(&self, num: &[i128; 4]) -> Option<[i128; 4]> {
        let t = z5mul(num, &self.conj);
        let mut out = [0i128; 4];
        for (slot, v) in out.iter_mut().zip(&t) {
            if v % self.norm != 0 {
                return None;
            }
            *slot = v / self.norm;
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_helpers_match_field_arithmetic() {
        let a = [3i128, -1, 0, 2];
        let b = [-2i128, 5, 1, 1];
        let fa = z5_elem(&a);
        let fb = z5_elem(&b);
        assert_eq!(z5_elem(&z5mul(&a, &b)), &fa * &fb);
        for j in 1..5 {
            assert_eq!(z5_elem(&z5galois(&a, j)), fa.galois(j as i64).unwrap());
        }
        let x = [4i128, -7];
        let y = [2i128, 3];
        assert_eq!(z3_elem(z3mul(x, y)), &z3_elem(x) * &z3_elem(y));
        assert_eq!(z3_elem(z3cube(x)), z3_elem(x).pow(3));
    }

    #[test]
    fn exact_division_detects_nondivisibility() {
        let w = [2i128, 1, 0, 0];
        let d = Z5Divisor::new(w);
        let prod = z5mul(&w, &[3, 0, -2, 1]);
        assert_eq!(d.divide(&prod), Some([3, 0, -2, 1]));
        assert_eq!(d.divide(&[1, 0, 0, 0]), None);
    }
}
