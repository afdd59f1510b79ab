//! Temporary diagnostic for the descent round trip at lambda = 2.

use rayon::prelude::*;

use descent_core::kummer::solve_norm;
use descent_core::rational::rat_int;
use descent_core::{
    CubicTorsor, CycloElement, DescentFunctions, Form, HesseCurve, KummerAlgebra, KummerElement,
    Prime,
};

fn k3(n: i64) -> CycloElement {
    CycloElement::from_int(Prime::Three, n)
}

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

fn model_from_unit(
    lambda: &CycloElement,
    a: &CycloElement,
    alg: &KummerAlgebra,
    u: &KummerElement,
) -> Form {
    let tr_u = alg.trace(u);
    let tr_au = alg.trace(&alg.mul(&alg.alpha_pow(1), u));
    let tr_a2u = alg.trace(&alg.mul(&alg.alpha_pow(2), u));
    let three = rat_int(3);
    let coeff_a = &tr_u + lambda;
    let coeff_b = tr_au.scale(&three);
    let coeff_c = tr_a2u.scale(&three);
    let coeff_xyz = (&(&tr_u.scale(&rat_int(2)) - lambda) * a).scale(&three);
    assemble(a, &coeff_a, &coeff_b, &coeff_c, &coeff_xyz)
}

fn swap_bc(a: &CycloElement, lambda: &CycloElement, alg: &KummerAlgebra, u: &KummerElement) -> Form {
    let tr_u = alg.trace(u);
    let tr_au = alg.trace(&alg.mul(&alg.alpha_pow(1), u));
    let tr_a2u = alg.trace(&alg.mul(&alg.alpha_pow(2), u));
    let three = rat_int(3);
    let coeff_a = &tr_u + lambda;
    let coeff_b = tr_a2u.scale(&three);
    let coeff_c = tr_au.scale(&three);
    let coeff_xyz = (&(&tr_u.scale(&rat_int(2)) - lambda) * a).scale(&three);
    assemble(a, &coeff_a, &coeff_b, &coeff_c, &coeff_xyz)
}

fn small_point(form: &Form, h: i64) -> Option<[i64; 6]> {
    let range: Vec<i64> = (-h..=h).collect();
    range
        .par_iter()
        .filter_map(|&c0| {
            for c1 in -h..=h {
                for c2 in -h..=h {
                    for c3 in -h..=h {
                        for c4 in -h..=h {
                            for c5 in -h..=h {
                                if c0 == 0 && c1 == 0 && c2 == 0 && c3 == 0 && c4 == 0 && c5 == 0 {
                                    continue;
                                }
                                let x =
                                    CycloElement::new(Prime::Three, vec![rat_int(c0), rat_int(c1)]);
                                let y =
                                    CycloElement::new(Prime::Three, vec![rat_int(c2), rat_int(c3)]);
                                let z =
                                    CycloElement::new(Prime::Three, vec![rat_int(c4), rat_int(c5)]);
                                if form.eval(&[x, y, z]).is_zero() {
                                    return Some([c0, c1, c2, c3, c4, c5]);
                                }
                            }
                        }
                    }
                }
            }
            None
        })
        .find_any(|_| true)
}

#[test]
fn probe_orientation_variants() {
    let lambda = k3(2);
    let curve = HesseCurve::new(lambda.clone()).unwrap();
    let functions = DescentFunctions::for_cubic(&curve).unwrap();
    let points = curve.point_search(8);

    let mut seen: Vec<(CycloElement, CycloElement)> = Vec::new();
    for point in &points {
        let image = functions.image(point).unwrap();
        let a = image.s.representative().clone();
        let b = image.t.representative().clone();
        if seen.iter().any(|(pa, pb)| *pa == a && *pb == b) {
            continue;
        }
        seen.push((a.clone(), b.clone()));
        if a.is_one() && b.is_one() {
            continue;
        }
        let algebra = KummerAlgebra::new(Prime::Three, a.clone()).unwrap();
        let Some(beta) = solve_norm(&algebra, &b, 10).unwrap() else {
            continue;
        };
        println!("=== class from {point:?}: a = {a}, b = {b}");
        let u = algebra.div(&beta, &algebra.sigma(&beta, 2)).unwrap();
        let u_rev = algebra.div(&beta, &algebra.sigma(&beta, 1)).unwrap();

        let crate_form = CubicTorsor::build(lambda.clone(), a.clone(), beta.clone())
            .unwrap()
            .form()
            .clone();
        let orig = model_from_unit(&lambda, &a, &algebra, &u);
        assert_eq!(orig, crate_form, "hand assembly must match the crate");
        let flipped = model_from_unit(&lambda, &a, &algebra, &u_rev);
        let swapped = swap_bc(&a, &lambda, &algebra, &u);
        println!("  slot swap equals u reversal: {}", flipped == swapped);

        for (name, form) in [("orig", &orig), ("u_rev", &flipped), ("swap_bc", &swapped)] {
            match small_point(form, 5) {
                Some(c) => println!("  {name}: point {c:?}"),
                None => println!("  {name}: no point with coefficients up to 5"),
            }
        }
    }
}
