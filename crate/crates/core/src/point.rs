//! Projective points with coordinates in `Q(zeta_p)`.

use num::{BigInt, Integer, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cyclo::CycloElement;
use crate::cyclo::Prime;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// A point of `P^(n-1)(K)`, stored in the canonical normalization where the
/// first nonzero coordinate is 1. Equality of normalized representatives is
/// equality of points.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ProjectivePoint {
    coords: Vec<CycloElement>,
}

impl ProjectivePoint {
    /// Build from any nonzero coordinate vector; scales so the first
    /// nonzero coordinate becomes 1.
    pub fn new(coords: Vec<CycloElement>) -> Result<Self> {
        let lead = coords.iter().find(|c| !c.is_zero());
        let Some(lead) = lead else {
            return Err(Error::ZeroPoint);
        };
        let inv = lead.inv().expect("leading coordinate is nonzero");
        Ok(ProjectivePoint {
            coords: coords.iter().map(|c| c * &inv).collect(),
        })
    }

    /// Build from machine integers, for fixed reference points.
    pub fn from_ints(prime: Prime, coords: &[i64]) -> Result<Self> {
        Self::new(
            coords
                .iter()
                .map(|&n| CycloElement::from_int(prime, n))
                .collect(),
        )
    }

    /// Normalized coordinates.
    #[must_use]
    pub fn coords(&self) -> &[CycloElement] {
        &self.coords
    }

    /// Number of coordinates (dimension of the ambient space plus one).
    #[must_use]
    pub fn len(&self) -> usize {
        self.coords.len()
    }

    /// Always false; a projective point has at least one coordinate.
    #[must_use]
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Ambient prime.
    #[must_use]
    pub fn prime(&self) -> Prime {
        self.coords[0].prime()
    }

    /// Apply a matrix, landing on a new point.
    pub fn transformed(&self, m: &crate::matrix::Matrix) -> Result<Self> {
        ProjectivePoint::new(m.apply(&self.coords))
    }

    /// Height of the primitive integral representative: clear all
    /// denominators, divide out the rational content, take the largest
    /// integer coefficient magnitude.
    #[must_use]
    pub fn height(&self) -> BigInt {
        let mut den = BigInt::one();
        for c in &self.coords {
            let (_, d) = c.cleared();
            den = den.lcm(&d);
        }
        let mut ints: Vec<BigInt> = Vec::new();
        for c in &self.coords {
            let (nums, d) = c.cleared();
            let scale = &den / &d;
            for n in nums {
                ints.push(n * &scale);
            }
        }
        let mut content = BigInt::zero();
        for v in &ints {
            content = content.gcd(v);
        }
        assert!(!content.is_zero(), "projective point has a nonzero coordinate");
        ints.iter()
            .map(|v| (v / &content).abs())
            .max()
            .expect("nonempty coordinates")
    }

    /// The primitive integral coordinate vector used by [`Self::height`].
    #[must_use]
    pub fn primitive_integral(&self) -> Vec<CycloElement> {
        let mut den = BigInt::one();
        for c in &self.coords {
            let (_, d) = c.cleared();
            den = den.lcm(&d);
        }
        let scaled: Vec<CycloElement> = self
            .coords
            .iter()
            .map(|c| c.scale(&Rational::from_integer(den.clone())))
            .collect();
        let mut content = BigInt::zero();
        for c in &scaled {
            let (nums, _) = c.cleared();
            for n in nums {
                content = content.gcd(&n);
            }
        }
        let inv = Rational::new(BigInt::one(), content);
        scaled.iter().map(|c| c.scale(&inv)).collect()
    }
}

impl std::fmt::Debug for ProjectivePoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| format!("{c}")).collect();
        write!(f, "({})", parts.join(" : "))
    }
}

impl std::fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        std::fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn normalization_is_canonical() {
        let z = CycloElement::zeta(Prime::Three);
        let a = ProjectivePoint::new(vec![z.clone(), CycloElement::one(Prime::Three)]).unwrap();
        let z2 = &z * &z;
        let b = ProjectivePoint::new(vec![&z * &z2, z2]).unwrap();
        assert_eq!(a, b, "scalar multiples define the same point");
    }

    #[test]
    fn zero_vector_rejected() {
        let zero = CycloElement::zero(Prime::Five);
        assert!(matches!(
            ProjectivePoint::new(vec![zero.clone(), zero]),
            Err(Error::ZeroPoint)
        ));
    }

    #[test]
    fn height_uses_primitive_representative() {
        // (1/2 : 3) ~ (1 : 6): height 6.
        let p = ProjectivePoint::new(vec![
            CycloElement::from_rational(Prime::Three, rat(1, 2)),
            CycloElement::from_int(Prime::Three, 3),
        ])
        .unwrap();
        assert_eq!(p.height(), BigInt::from(6));
        // (2 : 4) ~ (1 : 2): content is divided out.
        let q = ProjectivePoint::from_ints(Prime::Three, &[2, 4]).unwrap();
        assert_eq!(q.height(), BigInt::from(2));
    }

    #[test]
    fn leading_zeros_are_preserved() {
        let p = ProjectivePoint::from_ints(Prime::Three, &[0, 5, 10]).unwrap();
        assert!(p.coords()[0].is_zero());
        assert!(p.coords()[1].is_one());
    }
}
