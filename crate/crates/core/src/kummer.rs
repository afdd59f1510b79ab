//! The rank-p algebras `L = K[alpha]/(alpha^p - a)` and their norm
//! equations.
//!
//! For `a` not a p-th power in `K` this is the Kummer field extension
//! `K(a^(1/p))`; for `a` a p-th power it splits as a product of p copies of
//! `K`. Either way the same coordinate formulas apply: elements are
//! `x = x_0 + x_1 alpha + ... + x_(p-1) alpha^(p-1)` with `x_i` in `K`, the
//! K-linear map `sigma` sends `alpha^i` to `zeta^i alpha^i`, and
//! `norm(x) = prod_k sigma^k(x)` always lands in the scalar copy of `K`.
//! An element is a unit exactly when its norm is nonzero, including in the
//! split case.

use num::{BigInt, Integer, One, Signed, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cyclo::{CycloElement, Prime};
use crate::embed::is_pth_power;
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::smallint::{z3cube, z3mul};

/// The algebra `K[alpha]/(alpha^p - a)`.
#[derive(Clone, Debug)]
pub struct KummerAlgebra {
    prime: Prime,
    a: CycloElement,
    /// A p-th root of `a` in `K` when one exists, making the algebra split.
    split_root: Option<CycloElement>,
}

/// Element of a Kummer algebra: coordinates on `1, alpha, ..., alpha^(p-1)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct KummerElement {
    coords: Vec<CycloElement>,
}

impl KummerElement {
    /// Build from coordinates; length must be `p`.
    #[must_use]
    pub fn new(coords: Vec<CycloElement>) -> Self {
        let prime = coords[0].prime();
        assert!(
            coords.len() == prime.p(),
            "need {} coordinates, got {}",
            prime.p(),
            coords.len()
        );
        KummerElement { coords }
    }

    /// Coordinates, constant term first.
    #[must_use]
    pub fn coords(&self) -> &[CycloElement] {
        &self.coords
    }

    /// Coordinate of `alpha^i`.
    #[must_use]
    pub fn coord(&self, i: usize) -> &CycloElement {
        &self.coords[i]
    }

    /// Ambient prime.
    #[must_use]
    pub fn prime(&self) -> Prime {
        self.coords[0].prime()
    }

    /// True when every coordinate vanishes.
    #[must_use]
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(CycloElement::is_zero)
    }

    /// `Some(c)` when the element lies in the scalar copy of `K`.
    #[must_use]
    pub fn as_scalar(&self) -> Option<CycloElement> {
        if self.coords[1..].iter().all(CycloElement::is_zero) {
            Some(self.coords[0].clone())
        } else {
            None
        }
    }

    /// Height: with `x = (integer vector over Z[zeta]) / q` in lowest terms
    /// across all coordinates jointly, the maximum of `q` and the integer
    /// coordinate magnitudes.
    #[must_use]
    pub fn height(&self) -> BigInt {
        let mut den = BigInt::one();
        for c in &self.coords {
            let (_, d) = c.cleared();
            den = den.lcm(&d);
        }
        let mut h = den.clone();
        for c in &self.coords {
            let (nums, d) = c.cleared();
            let scale = &den / &d;
            for n in nums {
                let a = (n * &scale).abs();
                if a > h {
                    h = a;
                }
            }
        }
        h
    }
}

impl std::fmt::Debug for KummerElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .coords
            .iter()
            .enumerate()
            .map(|(i, c)| format!("({c})*alpha^{i}"))
            .collect();
        write!(f, "KummerElement[{}]", parts.join(" + "))
    }
}

impl KummerAlgebra {
    /// Construct `K[alpha]/(alpha^p - a)`; `a` must be nonzero.
    ///
    /// Whether `a` is a p-th power (the split case) is decided here once, so
    /// construction can fail with [`Error::Inconclusive`] for gigantic `a`.
    pub fn new(prime: Prime, a: CycloElement) -> Result<Self> {
        assert!(a.prime() == prime, "parameter lives in the wrong field");
        if a.is_zero() {
            return Err(Error::Invalid("Kummer parameter a must be nonzero".into()));
        }
        let split_root = is_pth_power(&a)?;
        Ok(KummerAlgebra {
            prime,
            a,
            split_root,
        })
    }

    /// Ambient prime.
    #[must_use]
    pub fn prime(&self) -> Prime {
        self.prime
    }

    /// The defining parameter `a`.
    #[must_use]
    pub fn a(&self) -> &CycloElement {
        &self.a
    }

    /// True when `a` is a p-th power in `K`, so `L` splits as `K^p`.
    #[must_use]
    pub fn is_split(&self) -> bool {
        self.split_root.is_some()
    }

    /// A p-th root of `a` in `K` when the algebra splits.
    #[must_use]
    pub fn split_root(&self) -> Option<&CycloElement> {
        self.split_root.as_ref()
    }

    /// The zero element.
    #[must_use]
    pub fn zero(&self) -> KummerElement {
        KummerElement::new(vec![CycloElement::zero(self.prime); self.prime.p()])
    }

    /// The unit element.
    #[must_use]
    pub fn one(&self) -> KummerElement {
        self.scalar(&CycloElement::one(self.prime))
    }

    /// Embed a scalar from `K`.
    #[must_use]
    pub fn scalar(&self, c: &CycloElement) -> KummerElement {
        let mut coords = vec![CycloElement::zero(self.prime); self.prime.p()];
        coords[0] = c.clone();
        KummerElement::new(coords)
    }

    /// `alpha^k` for `0 <= k < p`.
    #[must_use]
    pub fn alpha_pow(&self, k: usize) -> KummerElement {
        assert!(k < self.prime.p(), "exponent out of range");
        let mut coords = vec![CycloElement::zero(self.prime); self.prime.p()];
        coords[k] = CycloElement::one(self.prime);
        KummerElement::new(coords)
    }

    /// `alpha^(-k) = alpha^(p-k) / a` for `1 <= k < p`; `k = 0` gives 1.
    #[must_use]
    pub fn alpha_inv_pow(&self, k: usize) -> KummerElement {
        assert!(k < self.prime.p(), "exponent out of range");
        if k == 0 {
            return self.one();
        }
        let a_inv = self.a.inv().expect("a is nonzero");
        self.scale(&self.alpha_pow(self.prime.p() - k), &a_inv)
    }

    fn check(&self, x: &KummerElement) {
        assert!(x.prime() == self.prime, "element from another algebra");
    }

    /// Sum.
    #[must_use]
    pub fn add(&self, x: &KummerElement, y: &KummerElement) -> KummerElement {
        self.check(x);
        self.check(y);
        KummerElement::new(
            x.coords
                .iter()
                .zip(&y.coords)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// Difference.
    #[must_use]
    pub fn sub(&self, x: &KummerElement, y: &KummerElement) -> KummerElement {
        self.check(x);
        self.check(y);
        KummerElement::new(
            x.coords
                .iter()
                .zip(&y.coords)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    /// Negation.
    #[must_use]
    pub fn neg(&self, x: &KummerElement) -> KummerElement {
        KummerElement::new(x.coords.iter().map(|c| -c).collect())
    }

    /// Scale by an element of `K`.
    #[must_use]
    pub fn scale(&self, x: &KummerElement, c: &CycloElement) -> KummerElement {
        self.check(x);
        KummerElement::new(x.coords.iter().map(|v| v * c).collect())
    }

    /// Product, folding `alpha^p` down to `a`.
    #[must_use]
    pub fn mul(&self, x: &KummerElement, y: &KummerElement) -> KummerElement {
        self.check(x);
        self.check(y);
        let p = self.prime.p();
        let mut coords = vec![CycloElement::zero(self.prime); p];
        for (i, xi) in x.coords.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.coords.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let prod = xi * yj;
                let e = i + j;
                if e < p {
                    coords[e] = &coords[e] + &prod;
                } else {
                    coords[e - p] = &coords[e - p] + &(&prod * &self.a);
                }
            }
        }
        KummerElement::new(coords)
    }

    /// `x^e` by repeated squaring.
    #[must_use]
    pub fn pow(&self, x: &KummerElement, e: u32) -> KummerElement {
        let mut acc = self.one();
        let mut base = x.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// The K-linear twist `sigma^k`: `alpha^i -> zeta^(ik) alpha^i`.
    #[must_use]
    pub fn sigma(&self, x: &KummerElement, k: usize) -> KummerElement {
        self.check(x);
        KummerElement::new(
            x.coords
                .iter()
                .enumerate()
                .map(|(i, c)| c * &CycloElement::zeta_pow(self.prime, (i * k) as i64))
                .collect(),
        )
    }

    /// `norm(x) = prod_(k=0..p-1) sigma^k(x)`, an element of `K`.
    #[must_use]
    pub fn norm(&self, x: &KummerElement) -> CycloElement {
        let mut prod = x.clone();
        for k in 1..self.prime.p() {
            prod = self.mul(&prod, &self.sigma(x, k));
        }
        prod.as_scalar()
            .expect("sigma-invariant product lies in the scalar copy of K")
    }

    /// `trace(x) = sum_k sigma^k(x) = p * x_0`.
    #[must_use]
    pub fn trace(&self, x: &KummerElement) -> CycloElement {
        self.check(x);
        x.coords[0].scale(&Rational::from_integer(BigInt::from(self.prime.p())))
    }

    /// Inverse; fails with [`Error::NonUnit`] exactly when `norm(x) = 0`.
    pub fn inv(&self, x: &KummerElement) -> Result<KummerElement> {
        self.check(x);
        let mut cofactor = self.one();
        for k in 1..self.prime.p() {
            cofactor = self.mul(&cofactor, &self.sigma(x, k));
        }
        let norm = self
            .mul(x, &cofactor)
            .as_scalar()
            .expect("sigma-invariant product lies in the scalar copy of K");
        if norm.is_zero() {
            return Err(Error::NonUnit);
        }
        let norm_inv = norm.inv().expect("nonzero scalar");
        Ok(self.scale(&cofactor, &norm_inv))
    }

    /// Exact division.
    pub fn div(&self, x: &KummerElement, y: &KummerElement) -> Result<KummerElement> {
        Ok(self.mul(x, &self.inv(y)?))
    }

    /// The unit invariant(s) attached to `beta`: for `p = 3` the single unit
    /// `u = beta / sigma(beta)`, for `p = 5` the pair
    /// `u_1 = sigma^4(beta)/beta`, `u_2 = sigma^3(beta) sigma^4(beta) /
    /// (beta sigma(beta))`. All have norm 1.
    ///
    /// The sigma power in the `p = 3` case is load bearing. The opposite
    /// orientation `beta / sigma^2(beta)` is also a norm-1 unit, but it is the
    /// invariant of an element of norm `norm(beta)^-1`, so every construction
    /// fed with it lands in the inverse class and the descent round trip
    /// breaks.
    pub fn unit_invariants(&self, beta: &KummerElement) -> Result<Vec<KummerElement>> {
        match self.prime {
            Prime::Three => {
                let u = self.div(beta, &self.sigma(beta, 1))?;
                Ok(vec![u])
            }
            Prime::Five => {
                let s1 = self.sigma(beta, 1);
                let s3 = self.sigma(beta, 3);
                let s4 = self.sigma(beta, 4);
                let u1 = self.div(&s4, beta)?;
                let u2 = self.div(&self.mul(&s3, &s4), &self.mul(beta, &s1))?;
                Ok(vec![u1, u2])
            }
        }
    }

    /// Closed-form solution of `norm(beta) = b` in the split cube case
    /// `p = 3`, `a = 1`.
    #[must_use]
    pub fn cube_case_beta(&self, b: &CycloElement) -> KummerElement {
        assert!(self.prime == Prime::Three && self.a.is_one(), "needs p = 3, a = 1");
        let third = Rational::new(BigInt::one(), BigInt::from(3));
        let two = CycloElement::from_int(self.prime, 2);
        let one = CycloElement::one(self.prime);
        let b0 = (b + &two).scale(&third);
        let b1 = (b - &one).scale(&third);
        KummerElement::new(vec![b0, b1.clone(), b1])
    }
}

/// Search for `beta` with `norm(beta) = b`, enumerating candidates of
/// height at most `bound` in a fixed deterministic order.
///
/// Candidates are `beta = v / q` with `v` a vector of `p` elements of
/// `Z[zeta]` (so `p (p-1)` integer coordinates) and `q >= 1` coprime to the
/// content of `v`. The height of such a candidate is `max(|v|_inf, q)`,
/// matching [`KummerElement::height`], and candidates are visited in shells
/// of increasing height. Within one shell the order is: `q` ascending, then
/// support size ascending, then support positions lexicographic, then
/// coordinate values in the order `1, -1, 2, -2, ...`. The first match
/// wins, so results are reproducible.
///
/// Sparse vectors come first, which finds the typical small solutions
/// (scalars, `alpha + c`, ...) quickly even for `p = 5` where a full shell
/// is combinatorially out of reach.
pub fn solve_norm(
    alg: &KummerAlgebra,
    b: &CycloElement,
    bound: u32,
) -> Result<Option<KummerElement>> {
    assert!(b.prime() == alg.prime(), "target lives in the wrong field");
    if b.is_zero() {
        return Err(Error::Invalid("norm target must be nonzero".into()));
    }
    let dim = alg.prime().p() * alg.prime().phi();
    for shell in 1..=bound as i64 {
        for q in 1..=shell {
            // norm(v/q) = norm(v)/q^p, so the integral target is b * q^p.
            let qp = Rational::from_integer(BigInt::from(q).pow(alg.prime().p() as u32));
            let target = b.scale(&qp);
            let (target_nums, target_den) = target.cleared();
            if !target_den.is_one() {
                continue;
            }
            let hit = search_shell(alg, &target_nums, shell, q, dim);
            if let Some(v) = hit {
                let q_inv = Rational::new(BigInt::one(), BigInt::from(q));
                let beta = KummerElement::new(
                    v.iter().map(|c| c.scale(&q_inv)).collect::<Vec<_>>(),
                );
                debug_assert_eq!(&alg.norm(&beta), b);
                return Ok(Some(beta));
            }
        }
    }
    Ok(None)
}

/// One `(shell, q)` slice of the search. `target` is the cleared integer
/// coefficient vector of `b * q^p` on the basis `alpha^i zeta^j`.
fn search_shell(
    alg: &KummerAlgebra,
    target: &[BigInt],
    shell: i64,
    q: i64,
    dim: usize,
) -> Option<Vec<CycloElement>> {
    // Values in first-hit order: 1, -1, 2, -2, ..., shell, -shell.
    let values: Vec<i64> = (1..=shell).flat_map(|m| [m, -m]).collect();
    let need_max = q < shell;

    let mut supports: Vec<Vec<usize>> = Vec::new();
    for size in 1..=dim {
        // The empty support is the zero vector, whose norm is 0.
        collect_supports(dim, size, &mut Vec::new(), &mut supports);
    }

    let fast = FastNorm::build(alg, target, shell);

    for support in supports {
        let hit = enumerate_support(alg, target, &support, &values, shell, q, need_max, fast.as_ref());
        if let Some(v) = hit {
            return Some(v);
        }
    }
    None
}

fn collect_supports(dim: usize, size: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if prefix.len() == size {
        out.push(prefix.clone());
        return;
    }
    let start = prefix.last().map_or(0, |&l| l + 1);
    let remaining = size - prefix.len();
    for i in start..=dim.saturating_sub(remaining) {
        prefix.push(i);
        collect_supports(dim, size, prefix, out);
        prefix.pop();
    }
}

/// Odometer over value assignments for one support pattern. Parallelises
/// over the first position's value; the winner is the lexicographically
/// first hit, independent of thread scheduling.
#[allow(clippy::too_many_arguments)]
fn enumerate_support(
    alg: &KummerAlgebra,
    target: &[BigInt],
    support: &[usize],
    values: &[i64],
    shell: i64,
    q: i64,
    need_max: bool,
    fast: Option<&FastNorm>,
) -> Option<Vec<CycloElement>> {
    let width = support.len();
    let hits: Vec<(usize, Vec<i64>)> = (0..values.len())
        .into_par_iter()
        .filter_map(|first| {
            let mut assign = vec![0usize; width];
            assign[0] = first;
            let mut coords = vec![values[0]; width];
            coords[0] = values[first];
            let found = odometer_scan(
                alg, target, support, values, shell, q, need_max, fast, &mut assign, &mut coords,
            );
            found.map(|c| (first, c))
        })
        .collect();
    let best = hits.into_iter().min_by_key(|(first, _)| *first)?;
    Some(build_vector(alg, support, &best.1))
}

/// Scan all assignments with `assign[0]` fixed, in lexicographic odometer
/// order over the remaining positions. Returns the winning coordinates.
#[allow(clippy::too_many_arguments)]
fn odometer_scan(
    alg: &KummerAlgebra,
    target: &[BigInt],
    support: &[usize],
    values: &[i64],
    shell: i64,
    q: i64,
    need_max: bool,
    fast: Option<&FastNorm>,
    assign: &mut [usize],
    coords: &mut [i64],
) -> Option<Vec<i64>> {
    let width = support.len();
    loop {
        let max_abs = coords.iter().map(|c| c.abs()).max().unwrap_or(0);
        let shell_ok = !need_max || max_abs == shell;
        let coprime_ok = q == 1 || content_coprime(coords, q);
        if shell_ok && coprime_ok && norm_matches(alg, target, support, coords, fast) {
            return Some(coords.to_vec());
        }
        // Advance the odometer on positions 1.. (position 0 is fixed).
        let mut pos = width - 1;
        loop {
            if pos == 0 {
                return None;
            }
            assign[pos] += 1;
            if assign[pos] < values.len() {
                coords[pos] = values[assign[pos]];
                break;
            }
            assign[pos] = 0;
            coords[pos] = values[0];
            pos -= 1;
        }
    }
}

fn content_coprime(coords: &[i64], q: i64) -> bool {
    let mut g: i64 = 0;
    for &c in coords {
        g = g.gcd(&c);
    }
    g.gcd(&q) == 1
}

fn build_vector(alg: &KummerAlgebra, support: &[usize], coords: &[i64]) -> Vec<CycloElement> {
    let prime = alg.prime();
    let phi = prime.phi();
    let mut flat = vec![0i64; prime.p() * phi];
    for (s, &pos) in support.iter().enumerate() {
        flat[pos] = coords[s];
    }
    (0..prime.p())
        .map(|i| {
            let co = flat[i * phi..(i + 1) * phi]
                .iter()
                .map(|&n| Rational::from_integer(BigInt::from(n)))
                .collect();
            CycloElement::new(prime, co)
        })
        .collect()
}

fn norm_matches(
    alg: &KummerAlgebra,
    target: &[BigInt],
    support: &[usize],
    coords: &[i64],
    fast: Option<&FastNorm>,
) -> bool {
    if let Some(f) = fast {
        return f.matches(support, coords);
    }
    let v = build_vector(alg, support, coords);
    let x = KummerElement::new(v);
    let norm = alg.norm(&x);
    let (nums, den) = norm.cleared();
    den.is_one() && nums == target
}

/// Machine-integer norm evaluation for `p = 3` with small integral `a`.
///
/// Over `Z[zeta_3]` the norm of `s_0 + s_1 alpha + s_2 alpha^2` is the
/// closed cubic `s_0^3 + a s_1^3 + a^2 s_2^3 - 3 a s_0 s_1 s_2`. With the
/// shell bound `B` each `s_i` has coordinates at most `B`, so every
/// intermediate fits comfortably in `i128` for the bounds this crate uses.
struct FastNorm {
    a: [i128; 2],
    target: [i128; 2],
}

impl FastNorm {
    fn build(alg: &KummerAlgebra, target: &[BigInt], shell: i64) -> Option<Self> {
        if alg.prime() != Prime::Three {
            return None;
        }
        let (a_nums, a_den) = alg.a().cleared();
        if !a_den.is_one() {
            return None;
        }
        let a0 = a_nums[0].to_i128()?;
        let a1 = a_nums[1].to_i128()?;
        // Coarse overflow guard: intermediates are bounded by a few times
        // |a|^2 * shell^3, far below i128 range for these limits.
        if a0.abs().max(a1.abs()) > 1 << 20 || shell > 1 << 20 {
            return None;
        }
        let t0 = target[0].to_i128()?;
        let t1 = target[1].to_i128()?;
        Some(FastNorm {
            a: [a0, a1],
            target: [t0, t1],
        })
    }

    fn matches(&self, support: &[usize], coords: &[i64]) -> bool {
        let mut s = [[0i128; 2]; 3];
        for (k, &pos) in support.iter().enumerate() {
            s[pos / 2][pos % 2] = coords[k] as i128;
        }
        let a = self.a;
        let a2 = z3mul(a, a);
        let c0 = z3cube(s[0]);
        let c1 = z3mul(a, z3cube(s[1]));
        let c2 = z3mul(a2, z3cube(s[2]));
        let mixed = z3mul(a, z3mul(s[0], z3mul(s[1], s[2])));
        let norm = [
            c0[0] + c1[0] + c2[0] - 3 * mixed[0],
            c0[1] + c1[1] + c2[1] - 3 * mixed[1],
        ];
        norm == self.target
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn alg3(a: i64) -> KummerAlgebra {
        KummerAlgebra::new(Prime::Three, CycloElement::from_int(Prime::Three, a)).unwrap()
    }

    #[test]
    fn alpha_cubes_to_a() {
        let alg = alg3(2);
        let alpha = alg.alpha_pow(1);
        assert_eq!(
            alg.pow(&alpha, 3).as_scalar().unwrap(),
            CycloElement::from_int(Prime::Three, 2)
        );
    }

    #[test]
    fn split_detection() {
        assert!(alg3(8).is_split());
        assert_eq!(
            alg3(8).split_root().unwrap(),
            &CycloElement::from_int(Prime::Three, 2)
        );
        assert!(!alg3(2).is_split());
    }

    #[test]
    fn norm_of_alpha_plus_scalar() {
        // N(3 + alpha) over K[alpha]/(alpha^3 - 2) is 3^3 + 2 = 29.
        let alg = alg3(2);
        let x = alg.add(&alg.scalar(&CycloElement::from_int(Prime::Three, 3)), &alg.alpha_pow(1));
        assert_eq!(alg.norm(&x), CycloElement::from_int(Prime::Three, 29));
    }

    #[test]
    fn norm_is_multiplicative() {
        let alg = alg3(5);
        let z = CycloElement::zeta(Prime::Three);
        let x = KummerElement::new(vec![
            CycloElement::from_int(Prime::Three, 1),
            z.clone(),
            CycloElement::from_int(Prime::Three, -2),
        ]);
        let y = KummerElement::new(vec![
            CycloElement::new(Prime::Three, vec![rat(1, 2), rat_int(0)]),
            CycloElement::from_int(Prime::Three, 3),
            z,
        ]);
        assert_eq!(
            alg.norm(&alg.mul(&x, &y)),
            &alg.norm(&x) * &alg.norm(&y)
        );
    }

    #[test]
    fn unit_iff_norm_nonzero_in_split_case() {
        // In K[alpha]/(alpha^3 - 1) the element alpha - 1 is a zero divisor.
        let alg = alg3(1);
        let x = alg.sub(&alg.alpha_pow(1), &alg.one());
        assert!(alg.norm(&x).is_zero());
        assert!(matches!(alg.inv(&x), Err(Error::NonUnit)));
        // alpha + 3 has norm 28 and is invertible even though L is split.
        let y = alg.add(&alg.alpha_pow(1), &alg.scalar(&CycloElement::from_int(Prime::Three, 3)));
        assert_eq!(alg.norm(&y), CycloElement::from_int(Prime::Three, 28));
        let inv = alg.inv(&y).unwrap();
        assert_eq!(alg.mul(&y, &inv), alg.one());
    }

    #[test]
    fn trace_is_p_times_constant_coordinate() {
        let alg = alg3(7);
        let x = KummerElement::new(vec![
            CycloElement::from_int(Prime::Three, 4),
            CycloElement::from_int(Prime::Three, 1),
            CycloElement::from_int(Prime::Three, 2),
        ]);
        assert_eq!(alg.trace(&x), CycloElement::from_int(Prime::Three, 12));
    }

    #[test]
    fn cube_case_closed_form() {
        let alg = alg3(1);
        let b = CycloElement::from_int(Prime::Three, 10);
        let beta = alg.cube_case_beta(&b);
        assert_eq!(beta.coord(0), &CycloElement::from_rational(Prime::Three, rat(12, 3)));
        assert_eq!(alg.norm(&beta), b);
    }

    #[test]
    fn unit_invariants_have_norm_one() {
        let alg = alg3(2);
        let beta = alg.add(&alg.alpha_pow(1), &alg.scalar(&CycloElement::from_int(Prime::Three, 3)));
        let us = alg.unit_invariants(&beta).unwrap();
        assert_eq!(us.len(), 1);
        assert!(alg.norm(&us[0]).is_one());

        let alg5 = KummerAlgebra::new(Prime::Five, CycloElement::from_int(Prime::Five, 2)).unwrap();
        let beta5 = alg5.add(&alg5.alpha_pow(2), &alg5.scalar(&CycloElement::from_int(Prime::Five, 2)));
        let us5 = alg5.unit_invariants(&beta5).unwrap();
        assert_eq!(us5.len(), 2);
        assert!(alg5.norm(&us5[0]).is_one());
        assert!(alg5.norm(&us5[1]).is_one());
    }

    #[test]
    fn solve_norm_finds_alpha_shift() {
        // N(alpha + 3) = 29 in K[alpha]/(alpha^3 - 2).
        let alg = alg3(2);
        let b = CycloElement::from_int(Prime::Three, 29);
        let beta = solve_norm(&alg, &b, 4).unwrap().expect("solution in range");
        assert_eq!(alg.norm(&beta), b);
        assert!(beta.height() <= BigInt::from(3));
    }

    #[test]
    fn solve_norm_finds_unit_target() {
        let alg5 = KummerAlgebra::new(Prime::Five, CycloElement::from_int(Prime::Five, 2)).unwrap();
        let beta = solve_norm(&alg5, &CycloElement::one(Prime::Five), 1)
            .unwrap()
            .expect("1 has norm 1");
        assert_eq!(alg5.norm(&beta), CycloElement::one(Prime::Five));
    }

    #[test]
    fn solve_norm_respects_denominators() {
        // norm((alpha + 3)/2) = 29/8.
        let alg = alg3(2);
        let b = CycloElement::from_rational(Prime::Three, rat(29, 8));
        let beta = solve_norm(&alg, &b, 3).unwrap().expect("solution in range");
        assert_eq!(alg.norm(&beta), b);
    }

    #[test]
    fn solve_norm_reports_absence() {
        // Tiny bound, awkward target: nothing of height 1 has norm 377.
        let alg = alg3(2);
        let b = CycloElement::from_int(Prime::Three, 377);
        assert_eq!(solve_norm(&alg, &b, 1).unwrap(), None);
    }
}
