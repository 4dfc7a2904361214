//! Torsion assembly: closed forms on spheres, ε-independence and agreement of both residual routes.

use conetorsion_core::base_spectrum::BaseManifold;
use conetorsion_core::model_operators::h_det;
use conetorsion_core::precision_math::Precision;
use conetorsion_core::torsion::{
    cone_torsion, harmonic_log_eps_coefficient, harmonic_term, harmonic_term_from_determinants, product_metric_norm_shift,
    residual, top_term, torsion_difference, torsion_report, truncated_cone_torsion, zeta_k_prime_zero,
};
use conetorsion_core::zeta_engine::{base_torsion, zeta_ccl_at_zero};
use conetorsion_core::Error;
use rug::float::Constant;
use rug::{Float, Rational};

fn p30() -> Precision {
    Precision::new(30).unwrap()
}

fn f(p: Precision, x: f64) -> Float {
    Float::with_val(p.bits(), x)
}

fn gap(a: &Float, b: &Float) -> f64 {
    Float::with_val(a.prec().max(b.prec()), a - b).abs().to_f64()
}

#[test]
fn top_term_on_spheres_and_tori() {
    let p = p30();
    let ln2 = Float::with_val(p.bits(), Constant::Log2);
    let s1 = BaseManifold::sphere(1, 1).unwrap();
    assert!(gap(&top_term(&s1, p), &Float::with_val(p.bits(), &ln2 / 2u32)) < 1e-28);
    let s3 = BaseManifold::sphere(3, 1).unwrap();
    assert!(gap(&top_term(&s3, p), &ln2) < 1e-28);
    let s5 = BaseManifold::sphere(5, 2).unwrap();
    let expect = Float::with_val(p.bits(), 6u32).ln();
    assert!(gap(&top_term(&s5, p), &expect) < 1e-28);
    // b0 = 1, b1 = 3: ½ log 4 − (3/2) log 2.
    let t3 = BaseManifold::parse("torus:3", 1).unwrap();
    let expect = Float::with_val(p.bits(), -&ln2) / 2u32;
    assert!(gap(&top_term(&t3, p), &expect) < 1e-28);
}

#[test]
fn harmonic_term_two_ways() {
    let p = p30();
    let eps = f(p, 0.25);
    let s1 = BaseManifold::sphere(1, 1).unwrap();
    // Betti (1, 1): −½ log ε − ½ log 2.
    let ln2 = Float::with_val(p.bits(), Constant::Log2);
    let expect = Float::with_val(p.bits(), &ln2 * 2u32) / 2u32 - Float::with_val(p.bits(), &ln2 / 2u32);
    assert!(gap(&harmonic_term(&s1, &eps, p).unwrap(), &expect) < 1e-28);
    for d in ["sphere:1", "sphere:3", "sphere:5", "torus:3"] {
        let base = BaseManifold::parse(d, 1).unwrap();
        for e in [0.5, 0.25, 0.1] {
            let a = harmonic_term(&base, &f(p, e), p).unwrap();
            let b = harmonic_term_from_determinants(&base, &f(p, e), p).unwrap();
            assert!(gap(&a, &b) < 1e-25, "{d} eps={e}");
        }
    }
    let n = 3;
    let eps = f(p, 0.3);
    for k in 0..=n {
        let expect = Float::with_val(p.bits(), (k as f64 - n as f64 / 2.0) * eps.clone().ln()).exp() * 2u32;
        assert!(gap(&h_det(k, n, &eps, p).unwrap(), &expect) < 1e-25);
    }
    assert_eq!(harmonic_log_eps_coefficient(&BaseManifold::parse("torus:3", 1).unwrap()), Rational::from(0));
}

#[test]
fn zeta_derivative_depends_on_log_eps_through_zeta_at_zero() {
    let p = p30();
    for d in ["sphere:1", "sphere:3"] {
        let base = BaseManifold::parse(d, 1).unwrap();
        for k in 0..=base.half_dim() {
            let a = zeta_k_prime_zero(&base, k, &f(p, 0.5), p).unwrap();
            let b = zeta_k_prime_zero(&base, k, &f(p, 0.25), p).unwrap();
            let (z0, _) = zeta_ccl_at_zero(&base, k, p).unwrap();
            let ln2 = Float::with_val(p.bits(), Constant::Log2);
            // log(½) − log(¼) = log 2.
            let expect = Float::with_val(p.bits(), -Float::with_val(p.bits(), &z0 * &ln2) * 2u32);
            assert!(gap(&Float::with_val(p.bits(), &a - &b), &expect) < 1e-25, "{d} k={k}");
        }
    }
    assert!(zeta_k_prime_zero(&BaseManifold::sphere(3, 1).unwrap(), 0, &f(p, 1.0), p).is_err());
}

#[test]
fn difference_is_independent_of_eps() {
    let p = p30();
    for d in ["sphere:1", "sphere:3", "sphere:5"] {
        let base = BaseManifold::parse(d, 1).unwrap();
        let a = torsion_difference(&base, &f(p, 0.5), p).unwrap();
        let b = torsion_difference(&base, &f(p, 0.25), p).unwrap();
        assert!(gap(&a.difference, &b.difference) < 1e-10, "{d}");
        let sum = Float::with_val(p.bits(), &a.log_eps_coefficient_zeta + &a.log_eps_coefficient_harmonic);
        assert!(sum.abs().to_f64() < 1e-25, "{d}");
    }
}

#[test]
fn circle_difference_closed_form() {
    let p = p30();
    let s1 = BaseManifold::sphere(1, 1).unwrap();
    let r = torsion_difference(&s1, &f(p, 0.5), p).unwrap();
    let t = base_torsion(&s1, p).unwrap();
    let ln2 = Float::with_val(p.bits(), Constant::Log2);
    let (res, _) = residual(&s1, 0, p).unwrap();
    // ¼(2 log 2π + 2 log ε + ½R₀) − ½ log ε − ½ log 2.
    let expect =
        Float::with_val(p.bits(), &t / 2u32) + Float::with_val(p.bits(), &res / 8u32) - Float::with_val(p.bits(), &ln2 / 2u32);
    assert!(gap(&r.difference, &expect) < 1e-25, "{} vs {}", r.difference.to_f64(), expect.to_f64());
}

#[test]
fn spectral_residual_matches_anomaly_on_spheres() {
    let p = p30();
    for (d, q) in [("sphere:1", Rational::from(-1)), ("sphere:3", Rational::from((-4, 3))), ("sphere:5", Rational::from((-23, 15)))] {
        let base = BaseManifold::parse(d, 1).unwrap();
        let t = truncated_cone_torsion(&base, p).unwrap();
        assert_eq!(t.anomaly_exact.as_ref().unwrap().as_rational(), Some(q.clone()), "{d}");
        let exact = Float::with_val(p.bits(), &q);
        assert!(gap(&t.spectral, &exact) < 1e-6, "{d}: {}", t.spectral.to_f64());
        assert!(t.gap().unwrap() < 1e-6);
        assert!(!t.approximate);
    }
}

#[test]
fn breakdown_is_additive() {
    let p = p30();
    let t3 = BaseManifold::parse("torus:3", 1).unwrap();
    assert!(matches!(cone_torsion(&t3, p), Err(Error::Unsupported(_))));
    for d in ["sphere:1", "sphere:3", "sphere:5"] {
        let base = BaseManifold::parse(d, 1).unwrap();
        let c = cone_torsion(&base, p).unwrap();
        let sum = Float::with_val(p.bits(), &c.top + &c.tors) + &c.res_anomaly;
        assert!(gap(&c.total, &sum) < 1e-27, "{d}");
        let t = base_torsion(&base, p).unwrap();
        assert!(gap(&c.tors, &Float::with_val(p.bits(), -t / 2u32)) < 1e-27);
    }
}

#[test]
fn cone_torsion_on_three_sphere() {
    let p = p30();
    let s3 = BaseManifold::sphere(3, 1).unwrap();
    let c = cone_torsion(&s3, p).unwrap();
    let pi = Float::with_val(p.bits(), Constant::Pi);
    let vol = Float::with_val(p.bits(), pi.square_ref()) * 2u32;
    let ln2 = Float::with_val(p.bits(), Constant::Log2);
    let expect = ln2 - vol.ln() / 2u32 - Float::with_val(p.bits(), &Rational::from((2, 3)));
    assert!(gap(&c.total, &expect) < 1e-25, "{}", c.total.to_f64());
    assert!(gap(&c.res_spectral, &c.res_anomaly) < 1e-6);
}

#[test]
fn product_metric_shift() {
    let p = p30();
    let s3 = BaseManifold::sphere(3, 1).unwrap();
    let h = f(p, 0.75);
    let v = product_metric_norm_shift(&s3, &h, p).unwrap();
    let expect = top_term(&s3, p) - base_torsion(&s3, p).unwrap() / 2u32 + &h;
    assert!(gap(&v, &expect) < 1e-27);
}

#[test]
fn report_schema() {
    let p = Precision::new(25).unwrap();
    let s3 = BaseManifold::sphere(3, 1).unwrap();
    let rep = torsion_report(&s3, &[f(p, 0.5), f(p, 0.25)], p).unwrap();
    let json = serde_json::to_value(&rep).unwrap();
    for key in ["top", "tors", "res_spectral", "res_anomaly", "total"] {
        assert!(json["breakdown"][key].is_string(), "{key}");
    }
    assert_eq!(json["n"], 3);
    assert_eq!(json["audits"]["passed"], true);
    assert!(rep.unavailable.is_empty());
    let again = serde_json::to_string(&torsion_report(&s3, &[f(p, 0.5), f(p, 0.25)], p).unwrap()).unwrap();
    assert_eq!(serde_json::to_string(&rep).unwrap(), again);
}
