//! Small-point searches on torsor models.
//!
//! The cubic search enumerates the first two coordinates over an exact
//! `Z[zeta_3]` box, locates the third numerically per candidate, and keeps
//! only roots that verify against the exact form, so every returned point
//! is a true point; a root the iteration fails to pin down is silently
//! skipped, which is the one heuristic gap. The quintic search is exact
//! throughout: two independent combinations of the quadrics are linear in
//! the last two variables, which are solved by Cramer's rule over
//! `Z[zeta_5]` for every assignment of the first three.

use std::collections::BTreeSet;

use num::{BigInt, Integer, One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::cyclo::{CycloElement, Prime};
use crate::forms::Form;
use crate::matrix::Matrix;
use crate::point::ProjectivePoint;
use crate::smallint::{z3_elem, z3add, z3mul, z5_elem};

/// All points of the plane cubic whose primitive integral coordinates have
/// `Z[zeta_3]` components bounded by `bound`, sorted by height and then by
/// coordinates.
pub(crate) fn cubic_form_points(form: &Form, bound: u32) -> Vec<ProjectivePoint> {
    assert!(form.nvars() == 3, "expected a plane cubic");
    assert!((1..=64).contains(&bound), "bound must be between 1 and 64");
    let h = bound as i64;
    let cleared = clear_terms_3(form);

    // Complex embedding zeta -> (-1 + i sqrt 3) / 2 of every coefficient.
    let embedded: Vec<([u8; 3], Cpx)> = form
        .terms()
        .map(|(e, c)| {
            let c0 = c.coeff(0).to_f64().unwrap_or(0.0);
            let c1 = c.coeff(1).to_f64().unwrap_or(0.0);
            (
                [e[0], e[1], e[2]],
                (c0 - c1 / 2.0, c1 * SQRT3_HALF),
            )
        })
        .collect();

    let xs: Vec<i64> = (-h..=h).collect();
    let hits: Vec<[i64; 6]> = xs
        .par_iter()
        .flat_map_iter(|&x0| {
            let mut local = Vec::new();
            for x1 in -h..=h {
                let xe = embed3(x0, x1);
                let xp = cpows(xe);
                for y0 in -h..=h {
                    for y1 in -h..=h {
                        if x0 == 0 && x1 == 0 && y0 == 0 && y1 == 0 {
                            continue;
                        }
                        let yp = cpows(embed3(y0, y1));
                        let mut poly = [(0.0, 0.0); 4];
                        for (e, c) in &embedded {
                            let m = cmul(*c, cmul(xp[e[0] as usize], yp[e[1] as usize]));
                            let slot = &mut poly[e[2] as usize];
                            *slot = cadd(*slot, m);
                        }
                        for root in poly_roots(&poly) {
                            let z1f = root.1 / SQRT3_HALF;
                            let z0f = root.0 + z1f / 2.0;
                            if !z0f.is_finite() || !z1f.is_finite() {
                                continue;
                            }
                            let (z0, z1) = (z0f.round(), z1f.round());
                            if z0.abs() > h as f64 || z1.abs() > h as f64 {
                                continue;
                            }
                            let cand = [x0, x1, y0, y1, z0 as i64, z1 as i64];
                            if cubic_vanishes(&cleared, form, cand) {
                                local.push(cand);
                            }
                        }
                    }
                }
            }
            local
        })
        .collect();

    let mut seen = BTreeSet::new();
    // The one point invisible to (X, Y) enumeration.
    if form.coeff(&[0, 0, 3]).is_zero() {
        seen.insert(ProjectivePoint::from_ints(Prime::Three, &[0, 0, 1]).expect("nonzero"));
    }
    for c in hits {
        let coords = vec![
            z3_elem([c[0] as i128, c[1] as i128]),
            z3_elem([c[2] as i128, c[3] as i128]),
            z3_elem([c[4] as i128, c[5] as i128]),
        ];
        seen.insert(ProjectivePoint::new(coords).expect("nonzero vector"));
    }
    let mut points: Vec<ProjectivePoint> = seen.into_iter().collect();
    points.sort_by_key(|p| (p.height(), p.clone()));
    points
}

const SQRT3_HALF: f64 = 0.866_025_403_784_438_6;

type Cpx = (f64, f64);

fn cadd(a: Cpx, b: Cpx) -> Cpx {
    (a.0 + b.0, a.1 + b.1)
}

fn csub(a: Cpx, b: Cpx) -> Cpx {
    (a.0 - b.0, a.1 - b.1)
}

fn cmul(a: Cpx, b: Cpx) -> Cpx {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

fn cdiv(a: Cpx, b: Cpx) -> Cpx {
    let d = b.0 * b.0 + b.1 * b.1;
    ((a.0 * b.0 + a.1 * b.1) / d, (a.1 * b.0 - a.0 * b.1) / d)
}

fn cabs2(a: Cpx) -> f64 {
    a.0 * a.0 + a.1 * a.1
}

fn embed3(re: i64, zc: i64) -> Cpx {
    (re as f64 - zc as f64 / 2.0, zc as f64 * SQRT3_HALF)
}

fn cpows(x: Cpx) -> [Cpx; 4] {
    let x2 = cmul(x, x);
    [(1.0, 0.0), x, x2, cmul(x2, x)]
}

/// Roots of `c[0] + c[1] t + c[2] t^2 + c[3] t^3` after trimming
/// numerically negligible leading coefficients, by simultaneous iteration.
fn poly_roots(c: &[Cpx; 4]) -> Vec<Cpx> {
    let scale = c.iter().map(|&x| cabs2(x).sqrt()).fold(0.0, f64::max);
    if scale <= 1e-9 {
        return Vec::new();
    }
    let mut deg = 3;
    while deg > 0 && cabs2(c[deg]).sqrt() < 1e-10 * scale {
        deg -= 1;
    }
    if deg == 0 {
        return Vec::new();
    }
    let monic: Vec<Cpx> = (0..deg).map(|k| cdiv(c[k], c[deg])).collect();
    let eval = |t: Cpx| {
        let mut v = (1.0, 0.0);
        for k in (0..deg).rev() {
            v = cadd(cmul(v, t), monic[k]);
        }
        v
    };
    let seed = (0.4, 0.9);
    let mut roots: Vec<Cpx> = Vec::with_capacity(deg);
    let mut acc = seed;
    for _ in 0..deg {
        roots.push(acc);
        acc = cmul(acc, seed);
    }
    for _ in 0..80 {
        let mut shift = 0.0f64;
        for i in 0..deg {
            let mut den = (1.0, 0.0);
            for j in 0..deg {
                if j != i {
                    den = cmul(den, csub(roots[i], roots[j]));
                }
            }
            if cabs2(den) < 1e-30 {
                den = (1e-15, 0.0);
            }
            let step = cdiv(eval(roots[i]), den);
            roots[i] = csub(roots[i], step);
            shift = shift.max(cabs2(step));
        }
        if shift < 1e-26 {
            break;
        }
    }
    roots
}

/// Exact-integer image of a cubic over `Z[zeta_3]`, cleared of
/// denominators; `None` when a coefficient overflows the fast range.
fn clear_terms_3(form: &Form) -> Option<Vec<([u8; 3], [i128; 2])>> {
    let mut lcm = BigInt::one();
    for (_, c) in form.terms() {
        lcm = lcm.lcm(&c.cleared().1);
    }
    let cap = BigInt::from(1i128 << 80);
    let mut out = Vec::with_capacity(form.len());
    for (e, c) in form.terms() {
        let (nums, den) = c.cleared();
        let s = &lcm / &den;
        let mut pair = [0i128; 2];
        for (slot, n) in pair.iter_mut().zip(&nums) {
            let v = n * &s;
            if v.abs() > cap {
                return None;
            }
            *slot = v.to_i128()?;
        }
        out.push(([e[0], e[1], e[2]], pair));
    }
    Some(out)
}

/// Exact test of `form = 0` at integer `Z[zeta_3]` coordinates, through the
/// cleared table when it exists and full field arithmetic otherwise.
fn cubic_vanishes(
    cleared: &Option<Vec<([u8; 3], [i128; 2])>>,
    form: &Form,
    c: [i64; 6],
) -> bool {
    let x = [c[0] as i128, c[1] as i128];
    let y = [c[2] as i128, c[3] as i128];
    let z = [c[4] as i128, c[5] as i128];
    match cleared {
        Some(table) => {
            let xp = zpows3(x);
            let yp = zpows3(y);
            let zp = zpows3(z);
            let mut acc = [0i128; 2];
            for (e, co) in table {
                let m = z3mul(
                    *co,
                    z3mul(xp[e[0] as usize], z3mul(yp[e[1] as usize], zp[e[2] as usize])),
                );
                acc = z3add(acc, m);
            }
            acc == [0, 0]
        }
        None => form.eval(&[z3_elem(x), z3_elem(y), z3_elem(z)]).is_zero(),
    }
}

fn zpows3(x: [i128; 2]) -> [[i128; 2]; 4] {
    let x2 = z3mul(x, x);
    [[1, 0], x, x2, z3mul(x2, x)]
}

/// All common zeros of the five quadrics whose primitive integral
/// coordinates have `Z[zeta_5]` components bounded by `bound`, sorted by
/// height and then by coordinates. Exhaustive within the bound.
pub(crate) fn quintic_system_points(quadrics: &[Form], bound: u32) -> Vec<ProjectivePoint> {
    assert!(quadrics.len() == 5, "expected five quadrics");
    assert!(quadrics.iter().all(|q| q.nvars() == 5), "quadrics live in P^4");
    assert!((1..=2).contains(&bound), "bound must be 1 or 2");
    let h = bound as i64;

    // Exact combinations with no x3^2, x3 x4, or x4^2 part: right kernel
    // of the 3 x 5 matrix of those coefficients.
    let tails: [[u8; 5]; 3] = [[0, 0, 0, 2, 0], [0, 0, 0, 1, 1], [0, 0, 0, 0, 2]];
    let rows: Vec<Vec<CycloElement>> = tails
        .iter()
        .map(|t| quadrics.iter().map(|q| q.coeff(t)).collect())
        .collect();
    let kernel = Matrix::kernel_basis(&rows);
    assert!(kernel.len() >= 2, "tail elimination needs two combinations");
    let lins: Vec<LinearizedPair> = kernel
        .iter()
        .take(2)
        .map(|c| {
            let mut g = Form::zero(5);
            for (coeff, q) in c.iter().zip(quadrics) {
                g = g.add(&q.scale(coeff));
            }
            linearize(&g)
        })
        .collect();

    let verifier: Vec<QuadricTable> = quadrics.iter().map(quadric_table).collect();

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

    // Head case: the first three coordinates all vanish.
    let mut raw: Vec<[[i128; 4]; 5]> = Vec::new();
    let zero4 = [0i128; 4];
    for k3 in 0..keys {
        let x3 = decode(k3);
        for k4 in 0..keys {
            let x4 = decode(k4);
            if x3 == zero4 && x4 == zero4 {
                continue;
            }
            let xs = [zero4, zero4, zero4, x3, x4];
            if verify_all(&verifier, quadrics, &xs) {
                raw.push(xs);
            }
        }
    }

    // Main case: Cramer solve for (x3, x4) per head assignment.
    let head_keys: Vec<usize> = (0..keys).collect();
    let found: Vec<[[i128; 4]; 5]> = head_keys
        .par_iter()
        .flat_map_iter(|&k0| {
            let x0 = decode(k0);
            let mut local = Vec::new();
            for k1 in 0..keys {
                let x1 = decode(k1);
                for k2 in 0..keys {
                    let x2 = decode(k2);
                    if x0 == zero4 && x1 == zero4 && x2 == zero4 {
                        continue;
                    }
                    let head = [b4_from(&x0), b4_from(&x1), b4_from(&x2)];
                    solve_tail(
                        &lins, &verifier, quadrics, &head, [x0, x1, x2], h, keys, &decode,
                        &mut local,
                    );
                }
            }
            local
        })
        .collect();
    raw.extend(found);

    let mut seen = BTreeSet::new();
    for xs in raw {
        let coords: Vec<CycloElement> = xs.iter().map(z5_elem).collect();
        seen.insert(ProjectivePoint::new(coords).expect("nonzero vector"));
    }
    let mut points: Vec<ProjectivePoint> = seen.into_iter().collect();
    points.sort_by_key(|p| (p.height(), p.clone()));
    points
}

type B4 = [BigInt; 4];

fn b4zero() -> B4 {
    core::array::from_fn(|_| BigInt::zero())
}

fn b4_from(x: &[i128; 4]) -> B4 {
    core::array::from_fn(|i| BigInt::from(x[i]))
}

fn b4add(a: &B4, b: &B4) -> B4 {
    core::array::from_fn(|i| &a[i] + &b[i])
}

fn b4sub(a: &B4, b: &B4) -> B4 {
    core::array::from_fn(|i| &a[i] - &b[i])
}

fn b4neg(a: &B4) -> B4 {
    core::array::from_fn(|i| -&a[i])
}

fn b4is_zero(a: &B4) -> bool {
    a.iter().all(BigInt::is_zero)
}

/// Product in `Z[zeta_5]` with arbitrary-precision coordinates.
fn b4mul(a: &B4, b: &B4) -> B4 {
    let mut acc: [BigInt; 7] = core::array::from_fn(|_| BigInt::zero());
    for i in 0..4 {
        if a[i].is_zero() {
            continue;
        }
        for j in 0..4 {
            acc[i + j] += &a[i] * &b[j];
        }
    }
    let high6 = acc[6].clone();
    acc[1] += high6;
    let high5 = acc[5].clone();
    acc[0] += high5;
    let c = acc[4].clone();
    core::array::from_fn(|i| &acc[i] - &c)
}

fn b4galois(a: &B4, j: usize) -> B4 {
    let mut out = b4zero();
    for (i, c) in a.iter().enumerate() {
        if c.is_zero() {
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

/// Exact division in `Z[zeta_5]`: `Some(num / w)` when the quotient is
/// integral, via the conjugate product and rational norm of `w`.
fn b4divide(num: &B4, w: &B4) -> Option<B4> {
    let conj = b4mul(&b4galois(w, 2), &b4mul(&b4galois(w, 3), &b4galois(w, 4)));
    let full = b4mul(w, &conj);
    debug_assert!(full[1..].iter().all(BigInt::is_zero), "norm is rational");
    let norm = full[0].clone();
    if norm.is_zero() {
        return None;
    }
    let t = b4mul(num, &conj);
    let mut out = b4zero();
    for (slot, v) in out.iter_mut().zip(&t) {
        let (q, r) = v.div_rem(&norm);
        if !r.is_zero() {
            return None;
        }
        *slot = q;
    }
    Some(out)
}

/// One tail-free combination `G = x3 L3 + x4 L4 + R` with every part a
/// polynomial in the head variables only, cleared to integer coefficients.
struct LinearizedPair {
    l3: Vec<(Vec<u8>, B4)>,
    l4: Vec<(Vec<u8>, B4)>,
    rest: Vec<(Vec<u8>, B4)>,
}

fn linearize(g: &Form) -> LinearizedPair {
    let mut lcm = BigInt::one();
    for (_, c) in g.terms() {
        lcm = lcm.lcm(&c.cleared().1);
    }
    let mut out = LinearizedPair {
        l3: Vec::new(),
        l4: Vec::new(),
        rest: Vec::new(),
    };
    for (e, c) in g.terms() {
        let (nums, den) = c.cleared();
        let s = &lcm / &den;
        let mut v = b4zero();
        for (slot, n) in v.iter_mut().zip(&nums) {
            *slot = n * &s;
        }
        let mut head = e.clone();
        match (e[3], e[4]) {
            (0, 0) => out.rest.push((head, v)),
            (1, 0) => {
                head[3] = 0;
                out.l3.push((head, v));
            }
            (0, 1) => {
                head[4] = 0;
                out.l4.push((head, v));
            }
            _ => unreachable!("tail quadratic part was eliminated"),
        }
    }
    out
}

/// Evaluate a head-variable polynomial table at `(x0, x1, x2)`.
fn eval_head(terms: &[(Vec<u8>, B4)], xs: &[B4; 3]) -> B4 {
    let mut acc = b4zero();
    for (e, c) in terms {
        let mut m = c.clone();
        for (v, x) in xs.iter().enumerate() {
            for _ in 0..e[v] {
                m = b4mul(&m, x);
            }
        }
        acc = b4add(&acc, &m);
    }
    acc
}

/// Cleared integer table of one quadric for candidate verification;
/// `None` when a coefficient is too large for the machine path.
type QuadricTable = Option<Vec<(Vec<u8>, [i128; 4])>>;

fn quadric_table(q: &Form) -> QuadricTable {
    let mut lcm = BigInt::one();
    for (_, c) in q.terms() {
        lcm = lcm.lcm(&c.cleared().1);
    }
    let cap = BigInt::from(10i128.pow(30));
    let mut out = Vec::with_capacity(q.len());
    for (e, c) in q.terms() {
        let (nums, den) = c.cleared();
        let s = &lcm / &den;
        let mut v = [0i128; 4];
        for (slot, n) in v.iter_mut().zip(&nums) {
            let big = n * &s;
            if big.abs() > cap {
                return None;
            }
            *slot = big.to_i128()?;
        }
        out.push((e.clone(), v));
    }
    Some(out)
}

/// Exact vanishing of all five quadrics at small integer coordinates.
fn verify_all(tables: &[QuadricTable], quadrics: &[Form], xs: &[[i128; 4]; 5]) -> bool {
    use crate::smallint::{z5add, z5mul};
    for (table, q) in tables.iter().zip(quadrics) {
        let ok = match table {
            Some(terms) => {
                let mut acc = [0i128; 4];
                for (e, c) in terms {
                    let mut m = *c;
                    for (v, x) in xs.iter().enumerate() {
                        for _ in 0..e[v] {
                            m = z5mul(&m, x);
                        }
                    }
                    acc = z5add(&acc, &m);
                }
                acc == [0, 0, 0, 0]
            }
            None => {
                let coords: Vec<CycloElement> = xs.iter().map(z5_elem).collect();
                q.eval(&coords).is_zero()
            }
        };
        if !ok {
            return false;
        }
    }
    true
}

/// Solve the two tail-linear equations at one head assignment and push
/// every in-box, fully verified completion.
#[allow(clippy::too_many_arguments)]
fn solve_tail(
    lins: &[LinearizedPair],
    verifier: &[QuadricTable],
    quadrics: &[Form],
    head: &[B4; 3],
    head_ints: [[i128; 4]; 3],
    h: i64,
    keys: usize,
    decode: &impl Fn(usize) -> [i128; 4],
    out: &mut Vec<[[i128; 4]; 5]>,
) {
    let a1 = eval_head(&lins[0].l3, head);
    let b1 = eval_head(&lins[0].l4, head);
    let c1 = eval_head(&lins[0].rest, head);
    let a2 = eval_head(&lins[1].l3, head);
    let b2 = eval_head(&lins[1].l4, head);
    let c2 = eval_head(&lins[1].rest, head);
    let det = b4sub(&b4mul(&a1, &b2), &b4mul(&a2, &b1));

    let bound_ok = |v: &B4| v.iter().all(|c| c.abs() <= BigInt::from(h));
    let to_small = |v: &B4| -> Option<[i128; 4]> {
        let mut out = [0i128; 4];
        for (slot, c) in out.iter_mut().zip(v) {
            *slot = c.to_i128()?;
        }
        Some(out)
    };
    let mut push = |x3: [i128; 4], x4: [i128; 4]| {
        let xs = [head_ints[0], head_ints[1], head_ints[2], x3, x4];
        if verify_all(verifier, quadrics, &xs) {
            out.push(xs);
        }
    };

    if !b4is_zero(&det) {
        // Unique candidate: x3 = (C2 B1 - C1 B2) / det,
        // x4 = (A2 C1 - A1 C2) / det.
        let n3 = b4sub(&b4mul(&c2, &b1), &b4mul(&c1, &b2));
        let n4 = b4sub(&b4mul(&a2, &c1), &b4mul(&a1, &c2));
        let (Some(x3), Some(x4)) = (b4divide(&n3, &det), b4divide(&n4, &det)) else {
            return;
        };
        if bound_ok(&x3) && bound_ok(&x4) {
            if let (Some(x3), Some(x4)) = (to_small(&x3), to_small(&x4)) {
                push(x3, x4);
            }
        }
        return;
    }

    // Singular system: fall back to the line cut out by one nontrivial
    // equation, or to the full tail box when both equations are free of
    // the tail variables here.
    let line = if !b4is_zero(&a1) || !b4is_zero(&b1) {
        Some((&a1, &b1, &c1))
    } else if !b4is_zero(&a2) || !b4is_zero(&b2) {
        Some((&a2, &b2, &c2))
    } else {
        None
    };
    match line {
        Some((a, b, c)) => {
            if !b4is_zero(b) {
                // x4 = -(c + a x3) / b for each x3 in the box.
                for k3 in 0..keys {
                    let x3 = decode(k3);
                    let num = b4neg(&b4add(c, &b4mul(a, &b4_from(&x3))));
                    let Some(x4) = b4divide(&num, b) else { continue };
                    if bound_ok(&x4) {
                        if let Some(x4) = to_small(&x4) {
                            push(x3, x4);
                        }
                    }
                }
            } else {
                // a x3 = -c with a != 0; x4 ranges over the box.
                let Some(x3) = b4divide(&b4neg(c), a) else {
                    return;
                };
                if !bound_ok(&x3) {
                    return;
                }
                let Some(x3) = to_small(&x3) else { return };
                for k4 in 0..keys {
                    push(x3, decode(k4));
                }
            }
        }
        None => {
            // Both combinations are constant here; they must vanish for
            // any completion to exist.
            if !b4is_zero(&c1) || !b4is_zero(&c2) {
                return;
            }
            for k3 in 0..keys {
                let x3 = decode(k3);
                for k4 in 0..keys {
                    push(x3, decode(k4));
                }
            }
        }
    }
}
