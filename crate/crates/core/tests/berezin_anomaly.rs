//! Boundary anomaly class against an independent floating-point Grassmann expansion.

use conetorsion_core::base_spectrum::BaseManifold;
use conetorsion_core::berezin_anomaly::{
    anomaly_sides, b_class, b_class_report, b_form, berezin_normalization, integrated_anomaly, r_dot, s_dot,
    scaling_invariant, CollarMetric, ExactScalar, GradedElement,
};
use conetorsion_core::precision_math::Precision;
use rug::Rational;
use std::collections::BTreeMap;

fn q(n: i64, d: u64) -> Rational {
    Rational::from((n, d))
}

fn p30() -> Precision {
    Precision::new(30).unwrap()
}

/// Grassmann element keyed by sorted generator lists; generator i < n is e*_{i+1}, n+i is ê*_{i+1}.
#[derive(Clone, Default)]
struct Grass(BTreeMap<Vec<usize>, f64>);

impl Grass {
    fn scalar(c: f64) -> Self {
        Grass(BTreeMap::from([(vec![], c)]))
    }

    fn mul_list(&self, gens: &[usize]) -> Self {
        let mut out = self.clone();
        for &g in gens {
            out = out.mul(&Grass(BTreeMap::from([(vec![g], 1.0)])));
        }
        out
    }

    fn add(&self, o: &Self) -> Self {
        let mut out = self.0.clone();
        for (k, v) in &o.0 {
            *out.entry(k.clone()).or_insert(0.0) += v;
        }
        Grass(out)
    }

    fn scale(&self, c: f64) -> Self {
        Grass(self.0.iter().map(|(k, v)| (k.clone(), v * c)).collect())
    }

    fn mul(&self, o: &Self) -> Self {
        let mut out = BTreeMap::new();
        for (a, x) in &self.0 {
            for (b, y) in &o.0 {
                let mut seq: Vec<usize> = a.iter().chain(b.iter()).copied().collect();
                let mut sign = 1.0;
                for i in 0..seq.len() {
                    for j in 0..seq.len() - 1 - i {
                        if seq[j] > seq[j + 1] {
                            seq.swap(j, j + 1);
                            sign = -sign;
                        }
                    }
                }
                if seq.windows(2).any(|w| w[0] == w[1]) {
                    continue;
                }
                *out.entry(seq).or_insert(0.0) += sign * x * y;
            }
        }
        Grass(out)
    }

    fn pow(&self, k: usize) -> Self {
        (0..k).fold(Grass::scalar(1.0), |acc, _| acc.mul(self))
    }

    fn top(&self, n: usize) -> f64 {
        self.0.get(&(0..2 * n).collect::<Vec<_>>()).copied().unwrap_or(0.0)
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

fn gamma_half_plus_one(k: usize) -> f64 {
    if k % 2 == 0 {
        factorial(k / 2)
    } else {
        let mut g = std::f64::consts::PI.sqrt() / 2.0;
        let mut x = 0.5;
        while x < k as f64 / 2.0 {
            x += 1.0;
            g *= x;
        }
        g
    }
}

/// −∫₀¹ du/u ∫^B exp(−½Ṙ − u²Ṡ²) Σ_k (uṠ)^k/(2Γ(k/2+1)), expanded term by term in u.
fn oracle_b(n: usize, kappa: f64, f_prime: f64) -> f64 {
    let mut s = Grass::default();
    for k in 0..n {
        s = s.add(&Grass::scalar(f_prime / 4.0).mul_list(&[k, n + k]));
    }
    let mut r = Grass::default();
    for k in 0..n {
        for l in k + 1..n {
            r = r.add(&Grass::scalar(kappa).mul_list(&[k, l, n + k, n + l]));
        }
    }
    let half_r = r.scale(-0.5);
    let s2 = s.mul(&s).scale(-1.0);
    let mut total = 0.0;
    for k in 1..=n {
        for a in 0..=n {
            for b in 0..=n {
                let t = half_r.pow(a).mul(&s2.pow(b)).mul(&s.pow(k));
                let c = t.top(n) / (factorial(a) * factorial(b) * 2.0 * gamma_half_plus_one(k) * (2 * b + k) as f64);
                total += c;
            }
        }
    }
    let sign = if (n * (n + 1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
    -total * sign * std::f64::consts::PI.powf(-(n as f64) / 2.0)
}

fn eval(x: &ExactScalar) -> f64 {
    eval_at(x, &Rational::from(1))
}

fn eval_at(x: &ExactScalar, s: &Rational) -> f64 {
    x.evaluate(s, p30()).unwrap().to_f64()
}

#[test]
fn generators_anticommute_and_square_to_zero() {
    let n = 3;
    let mut gens = Vec::new();
    for i in 1..=n {
        gens.push(GradedElement::form_generator(n, i).unwrap());
        gens.push(GradedElement::hatted_generator(n, i).unwrap());
    }
    for a in &gens {
        assert!(a.mul(a).is_zero());
        for b in &gens {
            assert_eq!(a.mul(b), b.mul(a).scale_rational(&Rational::from(-1)));
        }
    }
    assert!(GradedElement::form_generator(3, 4).is_err());
    assert!(GradedElement::zero(0).is_err());
}

#[test]
fn even_elements_commute_and_exponentiate() {
    let n = 3;
    let x = GradedElement::form_generator(n, 1).unwrap().mul(&GradedElement::hatted_generator(n, 1).unwrap());
    let y = GradedElement::form_generator(n, 2).unwrap().mul(&GradedElement::hatted_generator(n, 3).unwrap());
    assert_eq!(x.mul(&y), y.mul(&x));
    assert!(x.is_homogeneous_parity(true));
    let e = x.exp_nilpotent().unwrap();
    assert_eq!(e, GradedElement::one(n).unwrap().add(&x));
}

#[test]
fn connection_derivatives() {
    let flat = CollarMetric::new(3, Rational::from(1), Rational::from(0)).unwrap();
    assert!(s_dot(&flat).unwrap().is_zero());
    let circle = CollarMetric::cone_outer(1, Rational::from(1)).unwrap();
    let s = s_dot(&circle).unwrap();
    let terms = s.terms();
    assert_eq!(terms.len(), 1);
    assert_eq!((terms[0].0, terms[0].1), (1, 1));
    assert_eq!(eval(terms[0].2), -0.5);
    assert!(r_dot(&CollarMetric::new(3, Rational::from(0), Rational::from(-2)).unwrap()).unwrap().is_zero());
    assert!(r_dot(&circle).unwrap().is_zero());
    let r = r_dot(&CollarMetric::new(3, Rational::from(1), Rational::from(-2)).unwrap()).unwrap();
    assert_eq!(r.bidegrees(), vec![(2, 2); 3]);
    let coefs: Vec<_> = r.terms().iter().map(|t| t.2.clone()).collect();
    assert!(coefs.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn berezin_integral_reads_the_top_hatted_part() {
    let n = 3;
    let low = GradedElement::form_generator(n, 1).unwrap().mul(&GradedElement::hatted_generator(n, 2).unwrap());
    assert!(low.berezin_form().is_zero());
    let mut hat = GradedElement::one(n).unwrap();
    for i in 1..=n {
        hat = hat.mul(&GradedElement::hatted_generator(n, i).unwrap());
    }
    let image = hat.berezin_form();
    let terms = image.terms();
    assert_eq!(terms.len(), 1);
    assert_eq!((terms[0].0, terms[0].1), (0, 0));
    assert_eq!(*terms[0].2, berezin_normalization(n));
    assert!(hat.berezin().is_err());
}

#[test]
fn class_matches_independent_expansion() {
    for (n, kappa, fp) in [(1usize, 1i64, -2i64), (3, 1, -2), (3, 0, -2), (5, 1, -2), (3, 1, 2), (5, 0, 3)] {
        let cm = CollarMetric::new(n, Rational::from(kappa), Rational::from(fp)).unwrap();
        let got = eval(&b_form(&cm).unwrap());
        let want = oracle_b(n, kappa as f64, fp as f64);
        assert!((got - want).abs() < 1e-12 * want.abs().max(1.0), "n={n} κ={kappa} f'={fp}: {got} vs {want}");
    }
}

#[test]
fn circle_class_in_closed_form() {
    let cm = CollarMetric::cone_outer(1, Rational::from(1)).unwrap();
    let got = eval(&b_form(&cm).unwrap());
    assert!((got + 1.0 / (2.0 * std::f64::consts::PI)).abs() < 1e-15);
}

#[test]
fn flat_collar_has_no_class() {
    let cm = CollarMetric::new(3, Rational::from(1), Rational::from(0)).unwrap();
    assert!(b_class(&cm).unwrap().is_zero());
    assert!(b_form(&cm).unwrap().is_zero());
}

#[test]
fn scaling_invariance() {
    for n in [1usize, 3, 5] {
        let cm = CollarMetric::cone_outer(n, Rational::from(1)).unwrap();
        let base = eval(&b_class(&cm).unwrap());
        for s in [Rational::from(2), q(1, 3), Rational::from(10)] {
            assert!(scaling_invariant(&cm, &s).unwrap(), "n={n} s={s}");
            let scaled = eval_at(&b_class(&cm.rescale(&s).unwrap()).unwrap(), &s);
            let expect = base * s.to_f64().powf(-(n as f64) / 2.0);
            assert!((scaled - expect).abs() < 1e-12 * expect.abs().max(1e-12), "n={n} s={s}");
        }
    }
}

#[test]
fn cone_sides_cancel_for_any_eps() {
    for n in [1usize, 3, 5] {
        let (b1, be) = anomaly_sides(n, &Rational::from(1), &q(1, 2)).unwrap();
        assert!(b1.add(&be).is_zero());
        let (_, be4) = anomaly_sides(n, &Rational::from(1), &q(1, 4)).unwrap();
        assert_eq!(be, be4);
    }
    assert!(CollarMetric::cone_inner(3, Rational::from(1), &Rational::from(1)).is_err());
}

#[test]
fn integrated_class_on_spheres() {
    let s1 = BaseManifold::sphere(1, 1).unwrap();
    assert_eq!(integrated_anomaly(&s1).unwrap().as_rational(), Some(Rational::from(-1)));
    let s3 = BaseManifold::sphere(3, 1).unwrap();
    assert_eq!(integrated_anomaly(&s3).unwrap().as_rational(), Some(q(-4, 3)));
    let s3r = BaseManifold::sphere(3, 2).unwrap();
    assert_eq!(integrated_anomaly(&s3r).unwrap().as_rational(), Some(q(-8, 3)));
    let t3 = BaseManifold::parse("torus:3", 1).unwrap();
    let t = eval(&integrated_anomaly(&t3).unwrap());
    assert!(t.is_finite());
}

#[test]
fn report_serializes() {
    let cm = CollarMetric::cone_outer(3, Rational::from(1)).unwrap();
    let rep = b_class_report(&cm).unwrap();
    let json = serde_json::to_value(&rep).unwrap();
    assert_eq!(json["n"], 3);
    assert!(json["terms"].as_array().unwrap().len() >= 1);
    assert!(json["total"].is_string());
}
