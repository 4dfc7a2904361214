//! Model operators: normalized solutions, determinant ratios and the t-function against
//! finite differences, eigenvalue products and closed-form spectra.

use conetorsion_core::model_operators::oracle::{det_ratio_oracle, eigenvalues_oracle, h_det_oracle};
use conetorsion_core::model_operators::{
    ab_constant, det_ratio_full_cone, det_ratio_truncated, det_ratio_truncated_display, h_det, normalized_solution,
    t_function, t_function_from_determinants, t_function_large_nu, BoundaryCondition, Interval, ModelOperator, Variant,
};
use conetorsion_core::precision_math::{rel_diff, Precision};
use rug::{Complex, Float, Rational};

fn q(n: i64, d: u64) -> Rational {
    Rational::from((n, d))
}

fn f(p: Precision, x: f64) -> Float {
    Float::with_val(p.bits(), x)
}

fn c(p: Precision, re: f64, im: f64) -> Complex {
    Complex::with_val(p.bits(), (re, im))
}

fn one_minus(v: &Complex) -> f64 {
    Complex::with_val(v.prec().0, v - 1u32).abs().real().to_f64()
}

#[test]
fn normalized_solution_is_one_at_the_right_end() {
    let p = Precision::new(40).unwrap();
    for (sign, nu, a, z) in [(1, 1.5, q(1, 2), (0.7, 0.2)), (-1, 3.0, q(-2, 1), (4.0, 0.0)), (1, 0.25, q(0, 1), (0.0, 0.0))] {
        let v = normalized_solution(sign, &f(p, nu), &a, &f(p, 1.0), &c(p, z.0, z.1), p).unwrap();
        assert!(one_minus(&v) < 1e-35);
    }
}

#[test]
fn normalized_solution_at_zero_argument() {
    let p = Precision::new(40).unwrap();
    let v = normalized_solution(1, &f(p, 1.0), &q(0, 1), &f(p, 0.25), &c(p, 0.0, 0.0), p).unwrap();
    assert!(rel_diff(&v, &c(p, (0.125 + 2.0) / 2.0, 0.0)) < 1e-35);
}

#[test]
fn small_argument_limit_matches_the_closed_form() {
    let p = Precision::new(50).unwrap();
    let nu = f(p, 1.5);
    let x = f(p, 0.5);
    let a = q(1, 1);
    for sign in [1, -1] {
        let limit = normalized_solution(sign, &nu, &a, &x, &c(p, 0.0, 0.0), p).unwrap();
        let near = normalized_solution(sign, &nu, &a, &x, &c(p, 1e-14, 0.0), p).unwrap();
        assert!(rel_diff(&near, &limit) < 1e-25);
    }
}

#[test]
fn normalized_solution_solves_the_equation_and_the_robin_condition() {
    let p = Precision::new(50).unwrap();
    let b = p.bits();
    let h = Float::with_val(b, 1e-12);
    for (sign, nu, a, z) in [(1, 2.5, q(1, 2), 1.3), (-1, 1.25, q(3, 2), 0.6)] {
        let nuf = f(p, nu);
        let zc = c(p, z, 0.0);
        let at = |x: &Float| normalized_solution(sign, &nuf, &a, x, &zc, p).unwrap().real().clone();
        let x0 = f(p, 0.6);
        let xm = Float::with_val(b, &x0 - &h);
        let xp = Float::with_val(b, &x0 + &h);
        let (fm, f0, fp) = (at(&xm), at(&x0), at(&xp));
        let second = Float::with_val(b, Float::with_val(b, &fp + &fm) - Float::with_val(b, &f0 * 2u32)) / Float::with_val(b, h.square_ref());
        let potential = Float::with_val(b, nu * nu - 0.25) / Float::with_val(b, x0.square_ref()) + z * z;
        let residual = Float::with_val(b, -second + Float::with_val(b, &potential * &f0)).abs().to_f64();
        assert!(residual < 1e-12 * f0.to_f64().abs().max(1.0), "residual {residual}");
        // Relative condition at x = 1: f'(1) + (±A − 1/2) f(1) = 0 up to the normalization.
        let one = f(p, 1.0);
        let below = Float::with_val(b, &one - &h);
        let below2 = Float::with_val(b, &one - Float::with_val(b, &h * 2u32));
        let deriv = (Float::with_val(b, at(&one) * 3u32) - Float::with_val(b, at(&below) * 4u32) + at(&below2)) / Float::with_val(b, &h * 2u32);
        let shift = Float::with_val(b, &a) * sign;
        let robin = (deriv + (shift - 0.5f64)).abs().to_f64();
        assert!(robin < 1e-10, "robin {robin}");
    }
}

#[test]
fn boundary_tags() {
    let p = Precision::new(30).unwrap();
    let eps = Interval::Truncated(f(p, 0.25));
    let psi2 = ModelOperator::new(Variant::Psi2, f(p, 2.0), q(1, 2), eps.clone()).unwrap();
    assert_eq!(psi2.boundary_tags(), (BoundaryCondition::Dirichlet, BoundaryCondition::Robin { coefficient: q(0, 1) }));
    let phi0 = ModelOperator::new(Variant::Phi0, f(p, 2.0), q(1, 2), eps.clone()).unwrap();
    assert_eq!(phi0.boundary_tags(), (BoundaryCondition::Robin { coefficient: q(0, 1) }, BoundaryCondition::Dirichlet));
    let full = ModelOperator::new(Variant::Psi0, f(p, 2.0), q(1, 2), Interval::Full).unwrap();
    assert_eq!(full.boundary_tags().0, BoundaryCondition::Regular);
    assert!(ModelOperator::new(Variant::Psi2, f(p, 2.0), q(0, 1), Interval::Truncated(f(p, 1.0))).is_err());
    assert!(ModelOperator::new(Variant::H0, f(p, 1.0), q(1, 1), Interval::Full).is_err());
}

#[test]
fn ratios_tend_to_one_at_zero() {
    let p = Precision::new(40).unwrap();
    let nu = f(p, 2.5);
    let a = q(1, 2);
    let z = c(p, 1e-15, 0.0);
    let eps = f(p, 0.3);
    for v in [Variant::Psi2, Variant::Phi2, Variant::Psi0, Variant::Phi0] {
        assert!(one_minus(&det_ratio_full_cone(v, &nu, &a, &z, p).unwrap().value) < 1e-20, "{v:?}");
        assert!(one_minus(&det_ratio_truncated(v, &nu, &a, &z, &eps, p).unwrap().value) < 1e-20, "{v:?}");
    }
}

#[test]
fn full_cone_dirichlet_ratios_ignore_the_shift_sign() {
    let p = Precision::new(40).unwrap();
    for (nu, a, z) in [(1.5, q(1, 2), (2.0, 0.0)), (3.25, q(-2, 1), (0.4, 1.1))] {
        let x = det_ratio_full_cone(Variant::Psi0, &f(p, nu), &a, &c(p, z.0, z.1), p).unwrap().value;
        let y = det_ratio_full_cone(Variant::Phi0, &f(p, nu), &a, &c(p, z.0, z.1), p).unwrap().value;
        assert!(rel_diff(&x, &y) < 1e-35);
    }
}

#[test]
fn degenerate_normalization_is_rejected() {
    let p = Precision::new(30).unwrap();
    let z = c(p, 1.0, 0.0);
    assert!(det_ratio_full_cone(Variant::Psi2, &f(p, 1.0), &q(-1, 1), &z, p).is_err());
    assert!(det_ratio_full_cone(Variant::Phi2, &f(p, 1.0), &q(1, 1), &z, p).is_err());
}

#[test]
fn full_cone_ratio_matches_eigenvalue_product() {
    let p = Precision::new(25).unwrap();
    let b = p.bits();
    for (variant, nu, a) in [(Variant::Psi2, 1.0, q(0, 1)), (Variant::Psi0, 1.0, q(0, 1)), (Variant::Phi2, 2.5, q(1, 2))] {
        let nuf = f(p, nu);
        let z = c(p, 2.0, 0.0);
        let closed = det_ratio_full_cone(variant, &nuf, &a, &z, p).unwrap().value;
        let op = ModelOperator::new(variant, nuf.clone(), a.clone(), Interval::Full).unwrap();
        let mu = Complex::with_val(b, &z * &nuf).square();
        let oracle = det_ratio_oracle(&op, &mu, 200, p).unwrap();
        assert!(rel_diff(&closed, &oracle) < 1e-6, "{variant:?}: {} vs {}", closed.real().to_f64(), oracle.real().to_f64());
    }
}

#[test]
fn truncated_ratio_matches_eigenvalue_product() {
    let p = Precision::new(25).unwrap();
    let b = p.bits();
    let nu = f(p, 1.5);
    let a = q(1, 2);
    let eps = f(p, 1.0 / 3.0);
    let z = c(p, 1.0, 0.0);
    for variant in [Variant::Psi2, Variant::Phi2, Variant::Psi0, Variant::Phi0] {
        let closed = det_ratio_truncated(variant, &nu, &a, &z, &eps, p).unwrap().value;
        let op = ModelOperator::new(variant, nu.clone(), a.clone(), Interval::Truncated(eps.clone())).unwrap();
        let mu = Complex::with_val(b, &z * &nu).square();
        let oracle = det_ratio_oracle(&op, &mu, 200, p).unwrap();
        assert!(rel_diff(&closed, &oracle) < 1e-6, "{variant:?}");
    }
}

#[test]
fn truncated_ratios_agree_with_displayed_combinations() {
    let p = Precision::new(40).unwrap();
    for (nu, a, eps, z) in [(1.5, q(1, 2), 0.25, (1.0, 0.0)), (4.0, q(-1, 1), 0.5, (0.3, 0.8)), (2.25, q(3, 2), 0.1, (6.0, -1.0))] {
        for variant in [Variant::Psi2, Variant::Phi2, Variant::Psi0, Variant::Phi0] {
            let x = det_ratio_truncated(variant, &f(p, nu), &a, &c(p, z.0, z.1), &f(p, eps), p).unwrap().value;
            let y = det_ratio_truncated_display(variant, &f(p, nu), &a, &c(p, z.0, z.1), &f(p, eps), p).unwrap();
            assert!(rel_diff(&x, &y) < 1e-30, "{variant:?} nu={nu} A={a}");
        }
    }
}

#[test]
fn half_order_dirichlet_spectrum_is_explicit() {
    let p = Precision::new(25).unwrap();
    let eps = 0.2;
    let op = ModelOperator::new(Variant::H1, f(p, 0.5), q(1, 2), Interval::Truncated(f(p, eps))).unwrap();
    let eig = eigenvalues_oracle(&op, 60, p).unwrap();
    let step = std::f64::consts::PI / (1.0 - eps);
    for (i, lam) in eig.iter().enumerate() {
        let expect = ((i + 1) as f64 * step).powi(2);
        assert!((lam.to_f64() / expect - 1.0).abs() < 1e-15, "i={i}");
    }
}

#[test]
fn dirichlet_spectrum_matches_a_dense_cross_product_scan() {
    use conetorsion_core::precision_math::bessel_jy;
    let p = Precision::new(25).unwrap();
    let b = p.bits();
    let eps = f(p, 0.25);
    let nu = f(p, 1.0);
    let op = ModelOperator::new(Variant::H1, nu.clone(), q(1, 1), Interval::Truncated(eps.clone())).unwrap();
    let eig = eigenvalues_oracle(&op, 10, p).unwrap();
    let cross = |k: f64| {
        let kf = Float::with_val(b, k);
        let ke = Float::with_val(b, &kf * &eps);
        let a = bessel_jy(&nu, &kf, p).unwrap();
        let e = bessel_jy(&nu, &ke, p).unwrap();
        (Float::with_val(b, &a.j * &e.y) - Float::with_val(b, &e.j * &a.y)).to_f64()
    };
    let mut roots = Vec::new();
    let mut k = 0.05;
    let mut prev = cross(k);
    while roots.len() < 10 {
        let next = k + 0.01;
        let v = cross(next);
        if v.signum() != prev.signum() {
            roots.push(k + 0.01 * prev / (prev - v));
        }
        prev = v;
        k = next;
    }
    for (lam, r) in eig.iter().zip(&roots) {
        assert!((lam.to_f64().sqrt() - r).abs() < 1e-4);
    }
}

#[test]
fn eigenvalues_increase_and_follow_the_weyl_law() {
    let p = Precision::new(25).unwrap();
    let eps = 0.3;
    let op = ModelOperator::new(Variant::Psi2, f(p, 2.5), q(1, 2), Interval::Truncated(f(p, eps))).unwrap();
    let eig = eigenvalues_oracle(&op, 120, p).unwrap();
    assert!(eig.windows(2).all(|w| w[0] < w[1]));
    let weyl = (100.0 * std::f64::consts::PI / (1.0 - eps)).powi(2);
    assert!((eig[99].to_f64() / weyl - 1.0).abs() < 0.05);
    assert!(eigenvalues_oracle(&op, 501, p).is_err());
}

#[test]
fn harmonic_determinant() {
    let p = Precision::new(40).unwrap();
    let b = p.bits();
    let v = h_det(0, 1, &f(p, 0.25), p).unwrap();
    assert!((v.to_f64() - 4.0).abs() < 1e-30);
    assert!(h_det(0, 2, &f(p, 0.25), p).is_err());
    for (k, n) in [(0usize, 1usize), (1, 1), (0, 3), (2, 3), (5, 5)] {
        for e in [0.5, 0.25] {
            let closed = h_det(k, n, &f(p, e), p).unwrap().to_f64();
            let oracle = h_det_oracle(k, n, e, 20_000).unwrap();
            assert!(((closed - oracle) / closed).abs() < 1e-8, "k={k} n={n} eps={e}");
            let hh = 1e-10;
            let up = h_det(k, n, &f(p, e + hh), p).unwrap();
            let dn = h_det(k, n, &f(p, e - hh), p).unwrap();
            let dlog = (Float::with_val(b, up.ln()) - Float::with_val(b, dn.ln())).to_f64() / (2.0 * hh);
            let expect = (k as f64 - n as f64 / 2.0) / e;
            assert!((dlog - expect).abs() < 1e-6, "log-derivative k={k} n={n}");
        }
    }
}

#[test]
fn harmonic_ratio_matches_eigenvalue_product() {
    let p = Precision::new(25).unwrap();
    let b = p.bits();
    let eps = f(p, 0.5);
    let op = ModelOperator::harmonic(Variant::H0, 0, 3, eps.clone(), p).unwrap();
    let z = c(p, 1.5, 0.0);
    let closed = det_ratio_truncated(Variant::H0, &op.nu, &op.a, &z, &eps, p).unwrap().value;
    let oracle = det_ratio_oracle(&op, &Complex::with_val(b, z.square_ref()), 200, p).unwrap();
    assert!(rel_diff(&closed, &oracle) < 1e-6);
}

#[test]
fn t_function_vanishes_at_zero() {
    let p = Precision::new(50).unwrap();
    let zero = c(p, 0.0, 0.0);
    for nu in [1.5, 3.0, 7.25] {
        for (a, e) in [(q(1, 2), 0.5), (q(0, 1), 0.25), (q(-1, 1), 0.1)] {
            let t = t_function(&f(p, nu), &a, &f(p, e), &zero, p).unwrap();
            assert!(t.abs().real().to_f64() < 1e-40);
        }
    }
}

#[test]
fn t_function_limit_at_zero_is_continuous() {
    let p = Precision::new(50).unwrap();
    let t = t_function(&f(p, 2.5), &q(1, 2), &f(p, 0.5), &c(p, -1e-20, 0.0), p).unwrap();
    assert!(t.abs().real().to_f64() < 1e-15);
}

#[test]
fn two_forms_of_the_t_function_agree() {
    let p = Precision::new(50).unwrap();
    for (nu, a, e, lam) in [(1.5, q(1, 2), 0.5, (-1.0, 0.0)), (3.0, q(-1, 1), 0.25, (-10.0, 3.0)), (5.5, q(2, 1), 0.4, (2.0, 5.0))] {
        let x = t_function(&f(p, nu), &a, &f(p, e), &c(p, lam.0, lam.1), p).unwrap();
        let y = t_function_from_determinants(&f(p, nu), &a, &f(p, e), &c(p, lam.0, lam.1), p).unwrap();
        let gap = Complex::with_val(p.bits(), &x - &y).abs().real().to_f64();
        assert!(gap < 1e-20, "gap {gap}");
    }
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

#[test]
fn t_function_large_lambda_decay() {
    let p = Precision::new(50).unwrap();
    for (nu, a, e) in [(1.5, q(1, 2), 0.5), (2.5, q(1, 1), 0.25), (4.0, q(0, 1), 0.3)] {
        let nuf = f(p, nu);
        let ef = f(p, e);
        let bc = ab_constant(&nuf, &a, &ef, p).to_f64();
        let expect_b = 2.0 * e.ln() - (1.0 - (a.to_f64() / nu).powi(2)).ln();
        assert!((bc - expect_b).abs() < 1e-14);
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for i in 0..=8 {
            let x = 10f64.powf(2.0 + 0.5 * i as f64);
            let t = t_function(&nuf, &a, &ef, &c(p, -x, 0.0), p).unwrap();
            xs.push(x.ln());
            ys.push((t.real().to_f64() - x.ln() - bc).abs().ln());
        }
        let s = slope(&xs, &ys);
        assert!((s + 0.5).abs() <= 0.1, "nu={nu} slope {s}");
    }
}

#[test]
fn t_function_large_order_remainders() {
    let p = Precision::new(50).unwrap();
    let b = p.bits();
    let a = q(1, 2);
    let e = f(p, 0.5);
    let lam = c(p, -1.0, 0.0);
    for r in 1..=5usize {
        let mut rems = Vec::new();
        for nu in [20.0, 40.0, 80.0] {
            let nuf = f(p, nu);
            let t = t_function(&nuf, &a, &e, &lam, p).unwrap();
            let s = t_function_large_nu(&nuf, &a, &e, &lam, r, p).unwrap();
            rems.push(Complex::with_val(b, &t - &s).abs().real().to_f64());
        }
        let order = (rems[1] / rems[2]).log2();
        assert!((order - (r + 1) as f64).abs() <= 0.2, "R={r} order {order}");
    }
}

#[test]
fn t_function_rejects_the_cut() {
    let p = Precision::new(30).unwrap();
    assert!(t_function(&f(p, 2.0), &q(0, 1), &f(p, 0.5), &c(p, 3.0, 0.0), p).is_err());
    assert!(t_function(&f(p, 1.0), &q(1, 1), &f(p, 0.5), &c(p, -1.0, 0.0), p).is_err());
}
