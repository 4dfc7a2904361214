//! Hurwitz zeta function and its s-derivative by Euler–Maclaurin summation.
//!
//! ζ(s,a) = Σ_{j<N} (a+j)^(−s) + x^(1−s)/(s−1) + x^(−s)/2
//!          + Σ_{k=1}^{M} B_{2k}/(2k)! (s)_{2k−1} x^(−s−2k+1) + R_M,  x = a+N,
//! with |R_M| ≤ |T_{M+1}|·|s+2M+1|/(Re s+2M+1). The derivative is carried along
//! with first-order dual numbers and the same bound shape is applied to the
//! differentiated terms. N is increased until the bound meets the target.

use super::{log2_abs_c, Precision, MAX_BITS};
use crate::error::{Error, Result};
use rug::{Complex, Float, Integer, Rational};
use std::sync::{Mutex, OnceLock};

#[derive(Clone)]
struct Dual {
    v: Complex,
    d: Complex,
}

impl Dual {
    fn zero(w: u32) -> Self {
        Dual { v: Complex::new(w), d: Complex::new(w) }
    }

    fn add_assign(&mut self, o: &Dual) {
        self.v += &o.v;
        self.d += &o.d;
    }

    fn mul(&self, o: &Dual, w: u32) -> Dual {
        let v = Complex::with_val(w, &self.v * &o.v);
        let d = Complex::with_val(w, &self.v * &o.d) + Complex::with_val(w, &self.d * &o.v);
        Dual { v, d }
    }

    fn scale(&self, f: &Float, w: u32) -> Dual {
        Dual { v: Complex::with_val(w, &self.v * f), d: Complex::with_val(w, &self.d * f) }
    }
}

/// x^(−s−c) as a dual number in s, for real x > 0.
fn pow_neg(x: &Float, s: &Complex, c: i64, w: u32) -> Dual {
    let lx = Float::with_val(w, x.ln_ref());
    let mut e = Complex::with_val(w, s + Float::with_val(w, c));
    e *= &lx;
    e = -e;
    e.exp_mut();
    let d = Complex::with_val(w, &e * &lx);
    Dual { d: -d, v: e }
}

struct BernoulliCache {
    work: Vec<Rational>,
    values: Vec<Rational>,
}

fn bernoulli_cache() -> &'static Mutex<BernoulliCache> {
    static CACHE: OnceLock<Mutex<BernoulliCache>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(BernoulliCache { work: Vec::new(), values: Vec::new() }))
}

/// Bernoulli number B_n as an exact rational (B_1 = −1/2).
pub fn bernoulli(n: usize) -> Rational {
    let mut c = bernoulli_cache().lock().unwrap_or_else(|e| e.into_inner());
    while c.values.len() <= n {
        let m = c.values.len();
        c.work.push(Rational::from((1, m as u64 + 1)));
        for j in (1..=m).rev() {
            let diff = Rational::from(&c.work[j - 1] - &c.work[j]);
            c.work[j - 1] = diff * Integer::from(j);
        }
        let b = c.work[0].clone();
        c.values.push(b);
    }
    if n == 1 {
        Rational::from((-1, 2))
    } else {
        c.values[n].clone()
    }
}

/// Hurwitz zeta ζ(s, a) for complex s ≠ 1 and real a > 0.
pub fn hurwitz_zeta(s: &Complex, a: &Float, p: Precision) -> Result<Complex> {
    Ok(hurwitz_zeta_with_derivative(s, a, p)?.0)
}

/// Riemann zeta ζ(s) = ζ(s, 1).
pub fn riemann_zeta(s: &Complex, p: Precision) -> Result<Complex> {
    hurwitz_zeta(s, &Float::with_val(p.bits(), 1u32), p)
}

/// Hurwitz zeta ζ(s, a) together with ∂ζ/∂s.
pub fn hurwitz_zeta_with_derivative(s: &Complex, a: &Float, p: Precision) -> Result<(Complex, Complex)> {
    if !a.is_finite() || *a <= 0 {
        return Err(Error::Domain(format!("Hurwitz zeta requires a > 0, got {}", a.to_f64())));
    }
    if s.imag().is_zero() && *s.real() == 1 {
        return Err(Error::Pole { location: "1".into(), residue: "1".into() });
    }
    let target = p.bits() + 16;
    let s_abs = Float::with_val(53, s.abs_ref()).to_f64();
    let sigma = s.real().to_f64();
    let mut n_terms = ((s_abs + target as f64) / std::f64::consts::PI).ceil() as u64 + 8;
    loop {
        let x_bits = ((n_terms as f64) + a.to_f64()).log2();
        let w = target + 32 + (n_terms as f64).log2() as u32 + ((-sigma).max(0.0) * x_bits).ceil() as u32;
        if w > MAX_BITS || n_terms > 10_000_000 {
            return Err(Error::Precision("Hurwitz zeta summation exceeded internal limits".into()));
        }
        if let Some((v, d)) = em_sum(s, a, n_terms, sigma, w, target)? {
            return Ok((Complex::with_val(p.bits(), &v), Complex::with_val(p.bits(), &d)));
        }
        n_terms *= 2;
    }
}

fn em_sum(s: &Complex, a: &Float, n_terms: u64, sigma: f64, w: u32, target: u32) -> Result<Option<(Complex, Complex)>> {
    let sw = Complex::with_val(w, s);
    let aw = Float::with_val(w, a);
    let mut total = Dual::zero(w);
    let mut base = aw.clone();
    for _ in 0..n_terms {
        total.add_assign(&pow_neg(&base, &sw, 0, w));
        base += 1u32;
    }
    let x = base;
    // x^(1−s)/(s−1)
    let xs1 = pow_neg(&x, &sw, -1, w);
    let sm1 = Complex::with_val(w, &sw - 1u32);
    let inv = Complex::with_val(w, sm1.recip_ref());
    let inv2 = Complex::with_val(w, &inv * &inv);
    let tail_v = Complex::with_val(w, &xs1.v * &inv);
    let tail_d = Complex::with_val(w, &xs1.d * &inv) - Complex::with_val(w, &xs1.v * &inv2);
    total.add_assign(&Dual { v: tail_v, d: tail_d });
    // x^(−s)/2
    let half = Float::with_val(w, 0.5f64);
    total.add_assign(&pow_neg(&x, &sw, 0, w).scale(&half, w));

    // Pochhammer (s)_{2k−1} as a dual, starting with (s)_1 = s.
    let mut poch = Dual { v: sw.clone(), d: Complex::with_val(w, 1u32) };
    let mut fact = Integer::from(2u32);
    let max_k = (target as u64) * 2 + 64;
    let mut k: u64 = 1;
    loop {
        let b = bernoulli(2 * k as usize);
        let coef = Float::with_val(w, Rational::from(&b / &fact));
        let term = poch.mul(&pow_neg(&x, &sw, 2 * k as i64 - 1, w), w).scale(&coef, w);
        let factor = {
            let m = 2.0 * k as f64 - 1.0;
            let den = sigma + m;
            if den <= 0.0 {
                None
            } else {
                let num = Float::with_val(53, Complex::with_val(53, &sw + m).abs_ref()).to_f64();
                Some((num / den).log2())
            }
        };
        if let Some(fl) = factor {
            let tv = log2_abs_c(&term.v).unwrap_or(f64::NEG_INFINITY) + fl;
            let td = log2_abs_c(&term.d).unwrap_or(f64::NEG_INFINITY) + fl;
            let sv = log2_abs_c(&total.v).unwrap_or(0.0).max(-(target as f64));
            let sd = log2_abs_c(&total.d).unwrap_or(0.0).max(-(target as f64));
            if tv < sv - target as f64 - 4.0 && td < sd - target as f64 - 4.0 {
                break;
            }
        }
        total.add_assign(&term);
        k += 1;
        if k > max_k {
            return Ok(None);
        }
        // (s)_{2k−1} = (s)_{2k−3} (s+2k−3)(s+2k−2)
        for j in [2 * k - 3, 2 * k - 2] {
            let f = Dual { v: Complex::with_val(w, &sw + j), d: Complex::with_val(w, 1u32) };
            poch = poch.mul(&f, w);
        }
        fact *= Integer::from(2 * k - 1) * Integer::from(2 * k);
    }
    Ok(Some((total.v, total.d)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_small_values() {
        assert_eq!(bernoulli(0), Rational::from(1));
        assert_eq!(bernoulli(1), Rational::from((-1, 2)));
        assert_eq!(bernoulli(2), Rational::from((1, 6)));
        assert_eq!(bernoulli(3), Rational::from(0));
        assert_eq!(bernoulli(4), Rational::from((-1, 30)));
        assert_eq!(bernoulli(12), Rational::from((-691, 2730)));
    }

    #[test]
    fn negative_integer_values_are_bernoulli_polynomials() {
        let p = Precision::new(40).unwrap();
        let b = p.bits();
        let s = Complex::with_val(b, (-3, 0));
        let a = Float::with_val(b, 1u32);
        let v = hurwitz_zeta(&s, &a, p).unwrap();
        let expected = Float::with_val(b, 1u32) / 120u32;
        assert!((Float::with_val(b, v.real() - &expected)).abs().to_f64() < 1e-38);
    }

    #[test]
    fn pole_is_reported() {
        let p = Precision::new(30).unwrap();
        let s = Complex::with_val(p.bits(), (1, 0));
        let a = Float::with_val(p.bits(), 0.5f64);
        assert!(matches!(hurwitz_zeta(&s, &a, p), Err(Error::Pole { .. })));
    }
}
