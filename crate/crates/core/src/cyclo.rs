//! Exact arithmetic in the cyclotomic fields `K = Q(zeta_p)` for `p = 3, 5`.
//!
//! Elements are stored on the power basis `1, zeta, ..., zeta^(p-2)` with
//! rational coefficients. The relation `1 + zeta + ... + zeta^(p-1) = 0`
//! folds `zeta^(p-1)` back onto the basis, so every product reduces to a
//! unique representative and equality is plain coefficient equality.
//!
//! ```
//! use descent_core::cyclo::{CycloElement, Prime};
//!
//! let z = CycloElement::zeta(Prime::Three);
//! let z2 = z.pow(2);
//! // zeta^2 = -1 - zeta once reduced.
//! assert_eq!(&z * &z2, CycloElement::one(Prime::Three));
//! ```

use std::fmt;

use num::{BigInt, Integer, One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, rational_height, Rational};

/// The two primes this crate works over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Prime {
    /// `p = 3`, `K = Q(zeta_3)`.
    Three,
    /// `p = 5`, `K = Q(zeta_5)`.
    Five,
}

impl Prime {
    /// The prime itself.
    #[must_use]
    pub fn p(self) -> usize {
        match self {
            Prime::Three => 3,
            Prime::Five => 5,
        }
    }

    /// Degree of `K/Q`, which is `p - 1`.
    #[must_use]
    pub fn phi(self) -> usize {
        self.p() - 1
    }

    /// Parse from a numeric value; only 3 and 5 are admitted.
    pub fn from_u32(p: u32) -> Result<Self> {
        match p {
            3 => Ok(Prime::Three),
            5 => Ok(Prime::Five),
            other => Err(Error::Invalid(format!("unsupported prime {other}, use 3 or 5"))),
        }
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.p())
    }
}

/// An element of `Q(zeta_p)` on the power basis.
///
/// The derived `Ord` is lexicographic on `(prime, coefficients)`; it is a
/// canonical representation order used for deterministic sorting and sets,
/// not a field-compatible order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycloElement {
    prime: Prime,
    /// Coefficients `c_0 + c_1 zeta + ... + c_(p-2) zeta^(p-2)`.
    coeffs: Vec<Rational>,
}

impl CycloElement {
    /// Build from explicit basis coefficients; `coeffs.len()` must be `p - 1`.
    #[must_use]
    pub fn new(prime: Prime, coeffs: Vec<Rational>) -> Self {
        assert!(
            coeffs.len() == prime.phi(),
            "need {} coefficients for p = {}, got {}",
            prime.phi(),
            prime,
            coeffs.len()
        );
        CycloElement { prime, coeffs }
    }

    /// The zero element.
    #[must_use]
    pub fn zero(prime: Prime) -> Self {
        CycloElement::new(prime, vec![Rational::zero(); prime.phi()])
    }

    /// The unit element.
    #[must_use]
    pub fn one(prime: Prime) -> Self {
        CycloElement::from_rational(prime, Rational::one())
    }

    /// Embed a rational into `K`.
    #[must_use]
    pub fn from_rational(prime: Prime, r: Rational) -> Self {
        let mut coeffs = vec![Rational::zero(); prime.phi()];
        coeffs[0] = r;
        CycloElement { prime, coeffs }
    }

    /// Embed a machine integer into `K`.
    #[must_use]
    pub fn from_int(prime: Prime, n: i64) -> Self {
        Self::from_rational(prime, Rational::from_integer(BigInt::from(n)))
    }

    /// The generator `zeta`.
    #[must_use]
    pub fn zeta(prime: Prime) -> Self {
        Self::zeta_pow(prime, 1)
    }

    /// `zeta^k` for any integer exponent, reduced onto the basis.
    #[must_use]
    pub fn zeta_pow(prime: Prime, k: i64) -> Self {
        let p = prime.p() as i64;
        let k = k.rem_euclid(p) as usize;
        let mut coeffs = vec![Rational::zero(); prime.phi()];
        if k < prime.phi() {
            coeffs[k] = Rational::one();
        } else {
            // zeta^(p-1) = -(1 + zeta + ... + zeta^(p-2))
            for c in &mut coeffs {
                *c = -Rational::one();
            }
        }
        CycloElement { prime, coeffs }
    }

    /// The ambient prime.
    #[must_use]
    pub fn prime(&self) -> Prime {
        self.prime
    }

    /// Basis coefficients, low degree first.
    #[must_use]
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `zeta^i`; `i` must be below `p - 1`.
    #[must_use]
    pub fn coeff(&self, i: usize) -> &Rational {
        &self.coeffs[i]
    }

    /// True for the zero element.
    #[must_use]
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }

    /// True for the unit element.
    #[must_use]
    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Rational::is_zero)
    }

    /// `Some(r)` when the element lies in `Q`.
    #[must_use]
    pub fn as_rational(&self) -> Option<Rational> {
        if self.coeffs[1..].iter().all(Rational::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Multiply by a rational scalar.
    #[must_use]
    pub fn scale(&self, r: &Rational) -> Self {
        CycloElement {
            prime: self.prime,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// `self^e` by repeated squaring.
    #[must_use]
    pub fn pow(&self, e: u32) -> Self {
        let mut acc = CycloElement::one(self.prime);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Galois automorphism `zeta -> zeta^j`; `j` must be invertible mod `p`.
    pub fn galois(&self, j: i64) -> Result<Self> {
        let p = self.prime.p() as i64;
        if j.rem_euclid(p) == 0 {
            return Err(Error::BadAutomorphism { j, p: p as u32 });
        }
        let mut out = CycloElement::zero(self.prime);
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let term = CycloElement::zeta_pow(self.prime, (i as i64) * j).scale(c);
                out = &out + &term;
            }
        }
        Ok(out)
    }

    /// Field norm `N(x) = prod_j sigma_j(x)`, always a rational number.
    #[must_use]
    pub fn field_norm(&self) -> Rational {
        let mut prod = self.clone();
        for j in 2..self.prime.p() as i64 {
            prod = &prod * &self.galois(j).expect("unit indices are coprime to p");
        }
        prod.as_rational()
            .expect("product over the full Galois orbit is rational")
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero {
                p: self.prime.p() as u32,
            });
        }
        // x * (product of the other conjugates) = N(x), a nonzero rational.
        let mut conj_prod = CycloElement::one(self.prime);
        for j in 2..self.prime.p() as i64 {
            conj_prod = &conj_prod * &self.galois(j).expect("unit indices are coprime to p");
        }
        let norm = (self * &conj_prod)
            .as_rational()
            .expect("product over the full Galois orbit is rational");
        Ok(conj_prod.scale(&norm.recip()))
    }

    /// Exact division.
    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    /// Height after clearing the common denominator: with
    /// `x = (n_0 + n_1 zeta + ...) / d` in lowest terms, the height is
    /// `max(|n_i|, d)`.
    #[must_use]
    pub fn height(&self) -> BigInt {
        let (nums, den) = self.cleared();
        let mut h = den;
        for n in nums {
            let a = n.abs();
            if a > h {
                h = a;
            }
        }
        h
    }

    /// Integer numerator vector and minimal positive common denominator.
    #[must_use]
    pub fn cleared(&self) -> (Vec<BigInt>, BigInt) {
        let mut den = BigInt::one();
        for c in &self.coeffs {
            den = den.lcm(c.denom());
        }
        let nums = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        (nums, den)
    }
}

fn binary_op(a: &CycloElement, b: &CycloElement, f: impl Fn(&Rational, &Rational) -> Rational) -> CycloElement {
    assert!(a.prime == b.prime, "mixed primes {} and {}", a.prime, b.prime);
    CycloElement {
        prime: a.prime,
        coeffs: a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(x, y)| f(x, y))
            .collect(),
    }
}

impl std::ops::Add for &CycloElement {
    type Output = CycloElement;
    fn add(self, rhs: &CycloElement) -> CycloElement {
        binary_op(self, rhs, |x, y| x + y)
    }
}

impl std::ops::Sub for &CycloElement {
    type Output = CycloElement;
    fn sub(self, rhs: &CycloElement) -> CycloElement {
        binary_op(self, rhs, |x, y| x - y)
    }
}

impl std::ops::Neg for &CycloElement {
    type Output = CycloElement;
    fn neg(self) -> CycloElement {
        CycloElement {
            prime: self.prime,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl std::ops::Mul for &CycloElement {
    type Output = CycloElement;
    fn mul(self, rhs: &CycloElement) -> CycloElement {
        assert!(
            self.prime == rhs.prime,
            "mixed primes {} and {}",
            self.prime,
            rhs.prime
        );
        let phi = self.prime.phi();
        let p = self.prime.p();
        let mut acc = vec![Rational::zero(); 2 * phi - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in rhs.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    acc[i + j] += x * y;
                }
            }
        }
        // Fold exponents >= p-1 back down, highest first so each coefficient
        // lands at most once below p-1.
        for e in (phi..acc.len()).rev() {
            let c = std::mem::replace(&mut acc[e], Rational::zero());
            if c.is_zero() {
                continue;
            }
            if e >= p {
                acc[e - p] += c;
            } else {
                // e == p-1: zeta^(p-1) = -(1 + zeta + ... + zeta^(p-2))
                for slot in acc.iter_mut().take(phi) {
                    *slot -= &c;
                }
            }
        }
        acc.truncate(phi);
        CycloElement {
            prime: self.prime,
            coeffs: acc,
        }
    }
}

impl fmt::Display for CycloElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = format_rational(&c.abs());
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {sign} ")?;
            }
            match i {
                0 => write!(f, "{mag}")?,
                1 if mag == "1" => write!(f, "zeta")?,
                1 => write!(f, "{mag}*zeta")?,
                _ if mag == "1" => write!(f, "zeta^{i}")?,
                _ => write!(f, "{mag}*zeta^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CycloElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloElement(p={}, {})", self.prime, self)
    }
}

impl Serialize for CycloElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let strings: Vec<String> = self.coeffs.iter().map(format_rational).collect();
        strings.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CycloElement {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let strings = Vec::<String>::deserialize(deserializer)?;
        let prime = match strings.len() {
            2 => Prime::Three,
            4 => Prime::Five,
            n => {
                return Err(D::Error::custom(format!(
                    "field element needs 2 (p = 3) or 4 (p = 5) coefficients, got {n}"
                )))
            }
        };
        let mut coeffs = Vec::with_capacity(strings.len());
        for (i, s) in strings.iter().enumerate() {
            let r = parse_rational(s)
                .map_err(|e| D::Error::custom(format!("coefficient {i}: {e}")))?;
            coeffs.push(r);
        }
        Ok(CycloElement::new(prime, coeffs))
    }
}

/// Height of a rational as a `BigInt`, re-exported here for convenience.
#[must_use]
pub fn rat_height(r: &Rational) -> BigInt {
    rational_height(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn z3(c0: i64, c1: i64) -> CycloElement {
        CycloElement::new(Prime::Three, vec![rat_int(c0), rat_int(c1)])
    }

    #[test]
    fn zeta_square_reduces() {
        let z = CycloElement::zeta(Prime::Three);
        assert_eq!(&z * &z, z3(-1, -1));
    }

    #[test]
    fn zeta_pow_cycles() {
        for prime in [Prime::Three, Prime::Five] {
            let p = prime.p() as i64;
            assert_eq!(CycloElement::zeta_pow(prime, p), CycloElement::one(prime));
            assert_eq!(
                CycloElement::zeta_pow(prime, -1),
                CycloElement::zeta_pow(prime, p - 1)
            );
            let mut s = CycloElement::zero(prime);
            for k in 0..p {
                s = &s + &CycloElement::zeta_pow(prime, k);
            }
            assert!(s.is_zero(), "p-th roots of unity sum to zero");
        }
    }

    #[test]
    fn height_clears_common_denominator() {
        let x = CycloElement::new(Prime::Three, vec![rat(1, 2), rat_int(3)]);
        // (1 + 6 zeta)/2: heights max(|1|, |6|, 2) = 6
        assert_eq!(x.height(), BigInt::from(6));
        assert_eq!(z3(-1, -1).height(), BigInt::from(1));
    }

    #[test]
    fn inverse_multiplies_to_one() {
        for prime in [Prime::Three, Prime::Five] {
            let mut x = CycloElement::zero(prime);
            for i in 0..prime.phi() {
                x = &x + &CycloElement::zeta_pow(prime, i as i64).scale(&rat(i as i64 + 2, 3));
            }
            let inv = x.inv().unwrap();
            assert!((&x * &inv).is_one());
        }
    }

    #[test]
    fn inverse_of_zero_fails() {
        assert!(matches!(
            CycloElement::zero(Prime::Five).inv(),
            Err(Error::DivisionByZero { p: 5 })
        ));
    }

    #[test]
    fn galois_is_a_ring_map() {
        let x = CycloElement::new(Prime::Five, vec![rat_int(1), rat(1, 2), rat_int(0), rat_int(-3)]);
        let y = CycloElement::new(Prime::Five, vec![rat_int(2), rat_int(-1), rat(5, 7), rat_int(1)]);
        for j in 1..5 {
            let lhs = (&x * &y).galois(j).unwrap();
            let rhs = &x.galois(j).unwrap() * &y.galois(j).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn galois_rejects_zero_index() {
        let x = CycloElement::zeta(Prime::Three);
        assert!(matches!(x.galois(0), Err(Error::BadAutomorphism { .. })));
        assert!(matches!(x.galois(6), Err(Error::BadAutomorphism { .. })));
    }

    #[test]
    fn norm_is_rational_and_multiplicative() {
        let x = CycloElement::new(Prime::Five, vec![rat_int(2), rat_int(1), rat_int(0), rat_int(-1)]);
        let y = CycloElement::new(Prime::Five, vec![rat(1, 3), rat_int(0), rat_int(4), rat_int(1)]);
        assert_eq!(
            (&x * &y).field_norm(),
            x.field_norm() * y.field_norm()
        );
        // Norm of 1 - zeta over Q(zeta_p) is p.
        for prime in [Prime::Three, Prime::Five] {
            let x = &CycloElement::one(prime) - &CycloElement::zeta(prime);
            assert_eq!(x.field_norm(), rat_int(prime.p() as i64));
        }
    }

    #[test]
    fn serde_round_trip_infers_prime() {
        let x = CycloElement::new(Prime::Three, vec![rat(3, 2), rat_int(-1)]);
        let json = serde_json::to_string(&x).unwrap();
        assert_eq!(json, r#"["3/2","-1"]"#);
        let back: CycloElement = serde_json::from_str(&json).unwrap();
        assert_eq!(back, x);
        assert!(serde_json::from_str::<CycloElement>(r#"["1","2","3"]"#).is_err());
    }
}
