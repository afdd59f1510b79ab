//! Complex embeddings of `Q(zeta_p)` and the exact p-th power test.
//!
//! The embeddings send `zeta` to `e^(2 pi i k / p)`; they are computed in
//! software fixed-point arithmetic (a `BigInt` mantissa at scale `2^-bits`)
//! so precision can grow without bound. Floating point appears only as the
//! seed of a Newton iteration.
//!
//! The p-th power test is exact despite the numerics, by the following
//! scheme. Write `x = v / d` with `v` integral and `d` the common
//! denominator. If `r^p = x` with `r` in `K`, then `(d r)^p = d^(p-1) (d x)`
//! is integral, and since `Z[zeta_p]` is the full ring of integers of `K`
//! (so in particular integrally closed), `d r` has *integer* coordinates.
//! Each candidate root is therefore found by rounding `d r` to the integer
//! lattice and every candidate is confirmed by exact re-powering; rounding
//! at a precision comfortably beyond the proven error bound also certifies
//! absence when no candidate verifies. The working precision starts at a
//! floor derived from the input size and doubles on numerical failure up to
//! a configurable ceiling, at which point the distinct error
//! [`Error::Inconclusive`] is returned instead of a wrong answer.

use num::{BigInt, Integer, One, Signed, ToPrimitive, Zero};

use crate::cyclo::{CycloElement, Prime};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rational::Rational;

/// Environment variable overriding the precision ceiling (in bits).
pub const PRECISION_ENV_VAR: &str = "DESCENT_KIT_PRECISION_BITS";

/// Default precision ceiling in bits.
pub const DEFAULT_PRECISION_CEILING: u32 = 4096;

/// One complex embedding value of a field element.
///
/// `re` and `im` are dyadic rationals with denominator `2^precision_bits`.
/// Approximations are used only for magnitude heuristics and root seeds;
/// no equality of field elements is ever decided from them.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingApprox {
    /// Real part.
    pub re: Rational,
    /// Imaginary part.
    pub im: Rational,
    /// Scale of the underlying fixed-point value.
    pub precision_bits: u32,
}

/// Evaluate the k-th embedding (`zeta -> e^(2 pi i k / p)`, `1 <= k < p`)
/// of `x` at the given precision.
pub fn embed(x: &CycloElement, k: usize, precision_bits: u32) -> Result<EmbeddingApprox> {
    let p = x.prime().p();
    if k == 0 || k >= p {
        return Err(Error::BadAutomorphism {
            j: k as i64,
            p: p as u32,
        });
    }
    let bits = precision_bits.max(8);
    let omegas = roots_of_unity(x.prime(), bits);
    let v = embed_fixed(x, &omegas[k - 1], bits);
    let denom = BigInt::one() << bits;
    Ok(EmbeddingApprox {
        re: Rational::new(v.re, denom.clone()),
        im: Rational::new(v.im, denom),
        precision_bits: bits,
    })
}

/// Exact p-th power test in `K = Q(zeta_p)`: returns a root when `x` is a
/// p-th power, `None` when it provably is not, using the ceiling configured
/// through [`PRECISION_ENV_VAR`].
pub fn is_pth_power(x: &CycloElement) -> Result<Option<CycloElement>> {
    is_pth_power_with_ceiling(x, precision_ceiling())
}

/// The active precision ceiling in bits.
#[must_use]
pub fn precision_ceiling() -> u32 {
    std::env::var(PRECISION_ENV_VAR)
        .ok()
        .and_then(|s| s.trim().parse::<u32>().ok())
        .map_or(DEFAULT_PRECISION_CEILING, |v| v.clamp(256, 1 << 24))
}

/// [`is_pth_power`] with an explicit precision ceiling.
pub fn is_pth_power_with_ceiling(
    x: &CycloElement,
    ceiling_bits: u32,
) -> Result<Option<CycloElement>> {
    let prime = x.prime();
    if x.is_zero() {
        return Ok(Some(CycloElement::zero(prime)));
    }
    if let Some(r) = x.as_rational() {
        // Complete for rational x: T^p - x with x not a p-th power in Q is
        // irreducible of degree p, which does not divide [K : Q] = p - 1,
        // so any root in K would already be rational.
        return Ok(rational_pth_root(prime, &r).map(|r| CycloElement::from_rational(prime, r)));
    }

    let (nums, d) = x.cleared();
    // Precision floor: the rounding step must recover integers from values
    // carrying the error of the embedding pipeline. The scaled root d*r has
    // magnitude at most d^(1-1/p) |v|_1^(1/p) per embedding; 160 slack bits
    // absorb every constant of the pipeline (Vandermonde row norms, Newton
    // residual, conversion round-off) many times over.
    let mag_bits: u64 = nums
        .iter()
        .fold(BigInt::zero(), |acc, n| acc + n.abs())
        .bits()
        .div_ceil(prime.p() as u64)
        + 1;
    let floor = 160 + (d.bits() as u32) + (mag_bits as u32);
    let mut bits = floor.next_power_of_two().max(256);

    loop {
        if bits > ceiling_bits {
            return Err(Error::Inconclusive {
                ceiling_bits,
            });
        }
        match attempt(x, &d, bits) {
            Attempt::Found(r) => return Ok(Some(r)),
            Attempt::Absent => return Ok(None),
            Attempt::NeedMorePrecision => bits *= 2,
        }
    }
}

enum Attempt {
    Found(CycloElement),
    Absent,
    NeedMorePrecision,
}

/// One pass at a fixed precision: compute all embeddings, take a p-th root
/// in each independent embedding, and for every choice of root-of-unity
/// multipliers solve for the candidate coordinates, round, and verify.
fn attempt(x: &CycloElement, d: &BigInt, bits: u32) -> Attempt {
    let prime = x.prime();
    let p = prime.p();
    let phi = prime.phi();
    let half = phi / 2;

    let omegas = roots_of_unity(prime, bits);
    let vals: Vec<Cx> = (1..=phi)
        .map(|k| embed_fixed(x, &omegas[k - 1], bits))
        .collect();

    // p-th roots in the independent embeddings k = 1..=half; the embeddings
    // k and p-k are complex conjugates, so the rest are determined.
    let mut roots = Vec::with_capacity(half);
    for v in vals.iter().take(half) {
        match pth_root(v, p as u32, bits) {
            Some(r) => roots.push(r),
            None => return Attempt::NeedMorePrecision,
        }
    }

    // Exact inverse Vandermonde over K, embedded under k = 1.
    let winv = vandermonde_inverse(prime);
    let winv_emb: Vec<Vec<Cx>> = winv
        .rows()
        .map(|row| {
            row.iter()
                .map(|e| embed_fixed(e, &omegas[0], bits))
                .collect()
        })
        .collect();

    // Root-of-unity multipliers: e^(2 pi i j / p) = omega_1^j.
    let mut unit_pows = Vec::with_capacity(p);
    let one = Cx {
        re: BigInt::one() << bits,
        im: BigInt::zero(),
    };
    unit_pows.push(one);
    for j in 1..p {
        let prev = &unit_pows[j - 1];
        unit_pows.push(cx_mul(prev, &omegas[0], bits));
    }

    let mut combos = vec![0usize; half];
    loop {
        // Assemble the candidate embedding vector for this combination.
        let mut val_full: Vec<Cx> = vec![
            Cx {
                re: BigInt::zero(),
                im: BigInt::zero()
            };
            phi
        ];
        for k in 1..=half {
            let v = cx_mul(&roots[k - 1], &unit_pows[combos[k - 1]], bits);
            val_full[p - k - 1] = cx_conj(&v);
            val_full[k - 1] = v;
        }

        // Candidate coordinates c_i = sum_k Winv[i][k] val_k, scaled by d
        // and rounded to integers.
        let mut int_coords = Vec::with_capacity(phi);
        for row in &winv_emb {
            let mut acc = Cx {
                re: BigInt::zero(),
                im: BigInt::zero(),
            };
            for (w, v) in row.iter().zip(&val_full) {
                let t = cx_mul(w, v, bits);
                acc.re += t.re;
                acc.im += t.im;
            }
            let scaled = acc.re * d;
            int_coords.push(round_fixed(&scaled, bits));
        }

        let candidate = CycloElement::new(
            prime,
            int_coords
                .iter()
                .map(|n| Rational::new(n.clone(), d.clone()))
                .collect(),
        );
        if candidate.pow(p as u32) == *x {
            return Attempt::Found(candidate);
        }

        // Advance the combination odometer.
        let mut pos = 0;
        loop {
            if pos == half {
                // All combinations failed exact verification. At this
                // precision the rounding error is far below 1/2, so absence
                // is certified.
                return Attempt::Absent;
            }
            combos[pos] += 1;
            if combos[pos] < p {
                break;
            }
            combos[pos] = 0;
            pos += 1;
        }
    }
}

/// p-th root of a nonnegative rational, if it exists.
fn rational_pth_root(prime: Prime, r: &Rational) -> Option<Rational> {
    let p = prime.p() as u32;
    let num = r.numer();
    let den = r.denom();
    let rn = nth_root_exact(&num.abs(), p)?;
    let rd = nth_root_exact(den, p)?;
    // p is odd, so the sign passes through the root.
    let signed = if num.is_negative() { -rn } else { rn };
    Some(Rational::new(signed, rd))
}

fn nth_root_exact(n: &BigInt, p: u32) -> Option<BigInt> {
    let mag = n.magnitude();
    let root = mag.nth_root(p);
    if root.pow(p) == *mag {
        Some(BigInt::from_biguint(num::bigint::Sign::Plus, root))
    } else {
        None
    }
}

// Fixed-point complex arithmetic: values are v / 2^bits.

#[derive(Clone)]
struct Cx {
    re: BigInt,
    im: BigInt,
}

fn cx_mul(a: &Cx, b: &Cx, bits: u32) -> Cx {
    Cx {
        re: (&a.re * &b.re - &a.im * &b.im) >> bits,
        im: (&a.re * &b.im + &a.im * &b.re) >> bits,
    }
}

fn cx_conj(a: &Cx) -> Cx {
    Cx {
        re: a.re.clone(),
        im: -&a.im,
    }
}

fn cx_sub(a: &Cx, b: &Cx) -> Cx {
    Cx {
        re: &a.re - &b.re,
        im: &a.im - &b.im,
    }
}

/// `a / b`; `None` when `b` is zero.
fn cx_div(a: &Cx, b: &Cx, bits: u32) -> Option<Cx> {
    let den = &b.re * &b.re + &b.im * &b.im; // scale 2^(2 bits)
    if den.is_zero() {
        return None;
    }
    let nre = &a.re * &b.re + &a.im * &b.im;
    let nim = &a.im * &b.re - &a.re * &b.im;
    Some(Cx {
        re: (nre << bits) / &den,
        im: (nim << bits) / &den,
    })
}

fn cx_pow(a: &Cx, e: u32, bits: u32) -> Cx {
    let mut acc = Cx {
        re: BigInt::one() << bits,
        im: BigInt::zero(),
    };
    for _ in 0..e {
        acc = cx_mul(&acc, a, bits);
    }
    acc
}

/// Round a fixed-point value to the nearest integer.
fn round_fixed(v: &BigInt, bits: u32) -> BigInt {
    let half = BigInt::one() << (bits - 1);
    (v + half) >> bits
}

/// Floor square root of a nonnegative fixed-point value at scale `bits`,
/// returned at the same scale.
fn sqrt_fixed(v: &BigInt, bits: u32) -> BigInt {
    debug_assert!(!v.is_negative());
    (v << bits).sqrt()
}

/// The primitive p-th roots of unity `omega^k`, `k = 1..p-1`, at scale
/// `bits`, from exact integer square roots of the defining radicals.
fn roots_of_unity(prime: Prime, bits: u32) -> Vec<Cx> {
    let one = BigInt::one() << bits;
    match prime {
        Prime::Three => {
            // omega = (-1 + i sqrt 3) / 2
            let s3 = sqrt_fixed(&(BigInt::from(3) << bits), bits);
            let w1 = Cx {
                re: -(&one >> 1u32),
                im: &s3 >> 1u32,
            };
            let w2 = cx_conj(&w1);
            vec![w1, w2]
        }
        Prime::Five => {
            // cos(2 pi/5) = (sqrt 5 - 1)/4, sin(2 pi/5) = sqrt(10 + 2 sqrt 5)/4
            // cos(4 pi/5) = -(sqrt 5 + 1)/4, sin(4 pi/5) = sqrt(10 - 2 sqrt 5)/4
            let r5 = sqrt_fixed(&(BigInt::from(5) << bits), bits);
            let c1 = (&r5 - &one) >> 2u32;
            let c2 = -((&r5 + &one) >> 2u32);
            let inner_plus = (BigInt::from(10) << bits) + 2 * &r5;
            let inner_minus = (BigInt::from(10) << bits) - 2 * &r5;
            let s1 = sqrt_fixed(&inner_plus, bits) >> 2u32;
            let s2 = sqrt_fixed(&inner_minus, bits) >> 2u32;
            let w1 = Cx {
                re: c1.clone(),
                im: s1.clone(),
            };
            let w2 = Cx { re: c2.clone(), im: s2.clone() };
            let w3 = cx_conj(&w2);
            let w4 = cx_conj(&w1);
            vec![w1, w2, w3, w4]
        }
    }
}

/// Horner evaluation of `x` at the root of unity `omega`, in fixed point.
fn embed_fixed(x: &CycloElement, omega: &Cx, bits: u32) -> Cx {
    let mut acc = Cx {
        re: BigInt::zero(),
        im: BigInt::zero(),
    };
    for c in x.coeffs().iter().rev() {
        acc = cx_mul(&acc, omega, bits);
        acc.re += rat_to_fixed(c, bits);
    }
    acc
}

fn rat_to_fixed(r: &Rational, bits: u32) -> BigInt {
    (r.numer() << bits).div_floor(r.denom())
}

/// Bit length of the integer part of a fixed-point magnitude.
fn magnitude_bits(v: &Cx, bits: u32) -> i64 {
    let m = v.re.abs().max(v.im.abs());
    m.bits() as i64 - bits as i64
}

fn fixed_to_f64(v: &BigInt, bits: u32) -> f64 {
    // Take the top 53 bits and rescale; exponents here are small because
    // callers normalize magnitudes first.
    let bl = v.bits() as i64;
    if bl == 0 {
        return 0.0;
    }
    let shift = (bl - 53).max(0);
    let top = (v >> shift).to_i64().expect("53-bit window fits") as f64;
    top * 2f64.powi((shift - bits as i64) as i32)
}

fn f64_to_fixed(f: f64, bits: u32) -> BigInt {
    // Split to mantissa and exponent through a 2^52 scale to stay exact.
    let scaled = (f * 2f64.powi(52)).round();
    let mant = BigInt::from(scaled as i128);
    if bits >= 52 {
        mant << (bits - 52)
    } else {
        mant >> (52 - bits)
    }
}

/// A p-th root of the fixed-point complex number `x`: seeded in `f64` after
/// power-of-two magnitude normalization, sharpened by Newton iteration at
/// full precision, and residual-checked. `None` requests more precision.
fn pth_root(x: &Cx, p: u32, bits: u32) -> Option<Cx> {
    if x.re.is_zero() && x.im.is_zero() {
        return Some(x.clone());
    }
    // Normalize by 2^(p t) so the f64 seed is comfortable.
    let t = magnitude_bits(x, bits).div_euclid(p as i64);
    let shift_in = |v: &BigInt| -> BigInt {
        let s = t * p as i64;
        if s >= 0 {
            v >> (s as u32)
        } else {
            v << ((-s) as u32)
        }
    };
    let xn = Cx {
        re: shift_in(&x.re),
        im: shift_in(&x.im),
    };

    let (fre, fim) = (fixed_to_f64(&xn.re, bits), fixed_to_f64(&xn.im, bits));
    let r = fre.hypot(fim);
    let theta = fim.atan2(fre);
    let root_mag = r.powf(1.0 / p as f64);
    let (s, c) = (theta / p as f64).sin_cos();
    let mut z = Cx {
        re: f64_to_fixed(root_mag * c, bits),
        im: f64_to_fixed(root_mag * s, bits),
    };

    // Newton: z <- z - (z^p - x)/(p z^(p-1)); quadratic convergence from
    // roughly 45 seed bits.
    let steps = {
        let mut need = 1usize;
        let mut acc = 40u64;
        while acc < bits as u64 + 16 {
            acc *= 2;
            need += 1;
        }
        need + 2
    };
    let p_fixed = Cx {
        re: BigInt::from(p) << bits,
        im: BigInt::zero(),
    };
    for _ in 0..steps {
        let zp1 = cx_pow(&z, p - 1, bits);
        let zp = cx_mul(&zp1, &z, bits);
        let num = cx_sub(&zp, &xn);
        let den = cx_mul(&p_fixed, &zp1, bits);
        let delta = cx_div(&num, &den, bits)?;
        z = cx_sub(&z, &delta);
    }

    // Residual check: |z^p - xn| must be tiny relative to |xn|.
    let zp = cx_pow(&z, p, bits);
    let res = cx_sub(&zp, &xn);
    let res2 = &res.re * &res.re + &res.im * &res.im;
    let mag2 = (&xn.re * &xn.re + &xn.im * &xn.im).max(BigInt::one() << (2 * bits));
    // Demand |res|^2 <= |xn|^2 / 2^(bits - 48).
    if &res2 << (bits.saturating_sub(48)) > mag2 {
        return None;
    }

    // Undo the normalization: multiply by 2^t.
    let shift_out = |v: &BigInt| -> BigInt {
        if t >= 0 {
            v << (t as u32)
        } else {
            v >> ((-t) as u32)
        }
    };
    Some(Cx {
        re: shift_out(&z.re),
        im: shift_out(&z.im),
    })
}

/// Exact inverse of the embedding Vandermonde matrix `V[k][i] =
/// zeta^(k i)` (`k = 1..p-1` rows, `i = 0..p-2` columns), over `K` itself.
fn vandermonde_inverse(prime: Prime) -> Matrix {
    let phi = prime.phi();
    let rows: Vec<Vec<CycloElement>> = (1..=phi)
        .map(|k| {
            (0..phi)
                .map(|i| CycloElement::zeta_pow(prime, (k * i) as i64))
                .collect()
        })
        .collect();
    Matrix::from_rows(rows)
        .inverse()
        .expect("Vandermonde at distinct roots of unity is invertible")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn rational_fast_path() {
        let x = CycloElement::from_int(Prime::Three, 8);
        assert_eq!(
            is_pth_power(&x).unwrap().unwrap(),
            CycloElement::from_int(Prime::Three, 2)
        );
        let y = CycloElement::from_int(Prime::Three, 9);
        assert_eq!(is_pth_power(&y).unwrap(), None);
        let neg = CycloElement::from_rational(Prime::Five, rat(-32, 243));
        assert_eq!(
            is_pth_power(&neg).unwrap().unwrap(),
            CycloElement::from_rational(Prime::Five, rat(-2, 3))
        );
    }

    #[test]
    fn detects_cube_with_zeta_coordinates() {
        for prime in [Prime::Three, Prime::Five] {
            let mut base = CycloElement::zeta(prime);
            base = &base + &CycloElement::from_rational(prime, rat(3, 2));
            let cube = base.pow(prime.p() as u32);
            let root = is_pth_power(&cube).unwrap().expect("is a p-th power");
            assert_eq!(root.pow(prime.p() as u32), cube);
        }
    }

    #[test]
    fn rejects_near_miss() {
        for prime in [Prime::Three, Prime::Five] {
            let base = &CycloElement::zeta(prime) + &CycloElement::from_int(prime, 2);
            let almost = &base.pow(prime.p() as u32) + &CycloElement::one(prime);
            if let Some(r) = is_pth_power(&almost).unwrap() {
                panic!("claimed root {r} for non-power");
            }
        }
    }

    #[test]
    fn embedding_magnitudes_are_sane() {
        // |embedding of zeta| = 1 under every embedding.
        for prime in [Prime::Three, Prime::Five] {
            let z = CycloElement::zeta(prime);
            for k in 1..prime.p() {
                let e = embed(&z, k, 128).unwrap();
                let norm2 = &e.re * &e.re + &e.im * &e.im;
                let err = (norm2 - Rational::from_integer(BigInt::one())).abs();
                assert!(
                    err < rat(1, 1 << 30),
                    "embedding {k} of zeta off the unit circle by {err}"
                );
            }
        }
    }

    #[test]
    fn embed_rejects_bad_index() {
        let z = CycloElement::zeta(Prime::Three);
        assert!(embed(&z, 0, 64).is_err());
        assert!(embed(&z, 3, 64).is_err());
    }

    #[test]
    fn ceiling_reports_inconclusive() {
        // A non-rational input forces the numeric path; a ceiling below the
        // floor precision cannot even start.
        let x = &CycloElement::zeta(Prime::Three) + &CycloElement::from_int(Prime::Three, 2);
        let res = is_pth_power_with_ceiling(&x.pow(3), 16);
        assert!(matches!(res, Err(Error::Inconclusive { .. })));
    }

    #[test]
    fn zero_and_units() {
        let zero = CycloElement::zero(Prime::Five);
        assert!(is_pth_power(&zero).unwrap().unwrap().is_zero());
        // zeta itself is not a 5th power in Q(zeta_5).
        let z = CycloElement::zeta(Prime::Five);
        assert_eq!(is_pth_power(&z).unwrap(), None);
        // but zeta^5 = 1 is.
        assert!(is_pth_power(&CycloElement::one(Prime::Five)).unwrap().is_some());
    }

    #[test]
    fn roots_of_unity_satisfy_minimal_polynomial() {
        for prime in [Prime::Three, Prime::Five] {
            let bits = 192u32;
            for w in roots_of_unity(prime, bits) {
                // 1 + w + ... + w^(p-1) should be ~0.
                let mut acc = Cx {
                    re: BigInt::one() << bits,
                    im: BigInt::zero(),
                };
                let mut pw = Cx {
                    re: BigInt::one() << bits,
                    im: BigInt::zero(),
                };
                for _ in 1..prime.p() {
                    pw = cx_mul(&pw, &w, bits);
                    acc.re += &pw.re;
                    acc.im += &pw.im;
                }
                let err = acc.re.abs().max(acc.im.abs());
                assert!(
                    err < (BigInt::one() << (bits - 150)),
                    "cyclotomic sum residual too large: {err} at {bits} bits"
                );
            }
        }
    }

    #[test]
    fn pth_root_squares_back() {
        let bits = 256u32;
        let x = Cx {
            re: BigInt::from(-7) << bits,
            im: BigInt::from(3) << bits,
        };
        let r = pth_root(&x, 3, bits).expect("converges");
        let cube = cx_pow(&r, 3, bits);
        let err = (&cube.re - &x.re).abs().max((&cube.im - &x.im).abs());
        assert!(err < (BigInt::one() << (bits - 200)), "residual {err}");
    }

    #[test]
    fn large_denominator_roots() {
        let base = CycloElement::new(Prime::Three, vec![rat(22, 7), rat(-5, 3)]);
        let cube = base.pow(3);
        let r = is_pth_power(&cube).unwrap().expect("cube by construction");
        assert_eq!(r.pow(3), cube);
        // The recovered root is the chosen one up to a root of unity.
        let ratio = r.div(&base).unwrap();
        let is_unit = (0..3).any(|k| ratio == CycloElement::zeta_pow(Prime::Three, k));
        assert!(is_unit, "ratio {ratio} is not a root of unity");
    }

    #[test]
    fn precision_ceiling_env_parses() {
        assert!(precision_ceiling() >= 256);
    }

    #[test]
    fn vandermonde_inverse_is_exact() {
        for prime in [Prime::Three, Prime::Five] {
            let phi = prime.phi();
            let v = Matrix::from_rows(
                (1..=phi)
                    .map(|k| {
                        (0..phi)
                            .map(|i| CycloElement::zeta_pow(prime, (k * i) as i64))
                            .collect()
                    })
                    .collect(),
            );
            let w = vandermonde_inverse(prime);
            assert_eq!(v.mul(&w), Matrix::identity(prime, phi));
        }
    }

    #[test]
    fn frozen_descent_constant_has_cube_root() {
        // (lambda^3 + 27)^3 at lambda = 2 is 35^3; its cube root is 35.
        let c = CycloElement::from_int(Prime::Three, 35 * 35 * 35);
        assert_eq!(
            is_pth_power(&c).unwrap().unwrap(),
            CycloElement::from_int(Prime::Three, 35)
        );
    }
}
