//! Modified Bessel functions I_ν, K_ν and their derivatives for real ν ≥ 0 and
//! complex z in the right half-plane.
//!
//! Algorithms and switchover rules:
//! * I_ν: ascending series. The working precision is raised until the measured
//!   cancellation (largest term against the sum) leaves the target bits intact.
//! * K_ν: large-argument Hankel expansion whenever its rigorous remainder bound
//!   `2χ(ℓ)·exp(|ν²−¼|/|z|)·|a_ℓ(ν) z^(−ℓ)|` (valid for Re z ≥ 0, ℓ ≥ max(1, ν−½))
//!   drops below the target before the terms start to grow; otherwise the
//!   reflection formula (non-integer ν) or the logarithmic series (integer ν),
//!   both under the same measured-cancellation guard.
//! * Derivatives through I'_ν = I_{ν+1} + (ν/z)I_ν and K'_ν = −K_{ν+1} + (ν/z)K_ν.

use super::{log2_abs, log2_abs_c, with_adaptive_guard, Precision, MAX_BITS};
use crate::error::{Error, Result};
use rug::float::Constant;
use rug::ops::PowAssign;
use rug::{Assign, Complex, Float};

const LOG2_E: f64 = std::f64::consts::LOG2_E;

/// I_ν, I'_ν, K_ν, K'_ν evaluated together at one argument.
#[derive(Clone, Debug)]
pub struct BesselIK {
    /// I_ν(z).
    pub i: Complex,
    /// I'_ν(z).
    pub ip: Complex,
    /// K_ν(z).
    pub k: Complex,
    /// K'_ν(z).
    pub kp: Complex,
}

impl BesselIK {
    /// Evaluates all four functions at precision `p`.
    pub fn new(nu: &Float, z: &Complex, p: Precision) -> Result<Self> {
        check_args(nu, z)?;
        let target = p.bits() + 16;
        let nu1 = Float::with_val(nu.prec() + 8, nu + 1u32);
        let i0 = i_value(nu, z, target)?;
        let i1 = i_value(&nu1, z, target)?;
        let k0 = k_value(nu, z, target)?;
        let k1 = k_value(&nu1, z, target)?;
        let ratio = Complex::with_val(target, Complex::with_val(target, nu) / z);
        let ip = Complex::with_val(target, &i1 + &ratio * &i0);
        let kp = Complex::with_val(target, &ratio * &k0 - &k1);
        let b = p.bits();
        Ok(BesselIK {
            i: Complex::with_val(b, &i0),
            ip: Complex::with_val(b, &ip),
            k: Complex::with_val(b, &k0),
            kp: Complex::with_val(b, &kp),
        })
    }
}

/// Modified Bessel function of the first kind I_ν(z).
pub fn bessel_i(nu: &Float, z: &Complex, p: Precision) -> Result<Complex> {
    check_args(nu, z)?;
    let v = i_value(nu, z, p.bits() + 16)?;
    Ok(Complex::with_val(p.bits(), &v))
}

/// Derivative I'_ν(z).
pub fn bessel_i_prime(nu: &Float, z: &Complex, p: Precision) -> Result<Complex> {
    Ok(BesselIK::new(nu, z, p)?.ip)
}

/// Modified Bessel function of the second kind K_ν(z).
pub fn bessel_k(nu: &Float, z: &Complex, p: Precision) -> Result<Complex> {
    check_args(nu, z)?;
    let v = k_value(nu, z, p.bits() + 16)?;
    Ok(Complex::with_val(p.bits(), &v))
}

/// Derivative K'_ν(z).
pub fn bessel_k_prime(nu: &Float, z: &Complex, p: Precision) -> Result<Complex> {
    Ok(BesselIK::new(nu, z, p)?.kp)
}

fn check_args(nu: &Float, z: &Complex) -> Result<()> {
    if !nu.is_finite() || *nu < 0 {
        return Err(Error::Domain(format!("order must be real and nonnegative, got {}", nu.to_f64())));
    }
    if z.real().is_zero() && z.imag().is_zero() {
        return Err(Error::Domain("argument z = 0".into()));
    }
    if !z.real().is_finite() || !z.imag().is_finite() {
        return Err(Error::Domain("non-finite argument".into()));
    }
    if *z.real() <= 0 {
        return Err(Error::Branch(format!(
            "argument {} + {}i is outside |arg z| < π/2",
            z.real().to_f64(),
            z.imag().to_f64()
        )));
    }
    Ok(())
}

fn abs_f64(z: &Complex) -> f64 {
    log2_abs_c(z).map(|l| 2f64.powf(l)).unwrap_or(0.0)
}

/// Ascending series (z/2)^ν Σ_m (σ z²/4)^m / (m! Γ(m+ν+1)) at working precision `w`.
///
/// Returns the value and the measured loss in bits (largest term over the sum,
/// plus the logarithm of the number of terms).
pub(crate) fn ascending_series(nu: &Float, z: &Complex, sigma: i32, w: u32) -> Result<(Complex, f64)> {
    let nu_w = Float::with_val(w, nu);
    let nu1 = Float::with_val(w, &nu_w + 1u32);
    if nu1.is_integer() && nu1 <= 0 {
        return Err(Error::Domain("ascending series at a negative integer order".into()));
    }
    let mut q = Complex::with_val(w, z * z);
    q /= 4u32;
    if sigma < 0 {
        q = -q;
    }
    let q_abs = abs_f64(&q);
    let mut term = Complex::with_val(w, nu1.gamma().recip());
    let mut sum = term.clone();
    let mut max_log = log2_abs_c(&term).unwrap_or(f64::NEG_INFINITY);
    let mut m: u64 = 0;
    let mut denom = Float::new(w);
    loop {
        m += 1;
        if m > 50_000_000 {
            return Err(Error::Precision("ascending Bessel series did not converge".into()));
        }
        denom.assign(&nu_w);
        denom += m;
        denom *= m;
        term *= &q;
        term /= &denom;
        sum += &term;
        let tl = log2_abs_c(&term).unwrap_or(f64::NEG_INFINITY);
        if tl > max_log {
            max_log = tl;
        }
        if (m as f64) * ((m as f64) + nu.to_f64()).abs() > 2.0 * q_abs {
            let sl = log2_abs_c(&sum).unwrap_or(max_log);
            if tl < sl - w as f64 - 4.0 {
                break;
            }
        }
    }
    let sum_log = log2_abs_c(&sum).unwrap_or(f64::NEG_INFINITY);
    let loss = (max_log - sum_log).max(0.0) + (m as f64).log2() + 1.0;
    if nu.is_zero() {
        return Ok((sum, loss));
    }
    let mut half = Complex::with_val(w, z / 2u32);
    half.ln_mut();
    half *= &nu_w;
    half.exp_mut();
    sum *= &half;
    Ok((sum, loss))
}

pub(crate) fn i_value(nu: &Float, z: &Complex, target: u32) -> Result<Complex> {
    let abs = abs_f64(z);
    let re = z.real().to_f64();
    let initial = ((abs - re) * LOG2_E) as u32 + 24;
    with_adaptive_guard(target, initial, |w| ascending_series(nu, z, 1, w))
}

pub(crate) fn k_value(nu: &Float, z: &Complex, target: u32) -> Result<Complex> {
    let abs = abs_f64(z);
    let nuf = nu.to_f64();
    if abs > 2.0 && abs * 2.0 * LOG2_E > target as f64 * 0.5 && abs > nuf * nuf / 16.0 {
        if let Some(v) = k_hankel(nu, z, target)? {
            return Ok(v);
        }
    }
    if nu.is_integer() {
        let n = nu.to_u32_saturating().unwrap_or(u32::MAX);
        let initial = (2.0 * abs * LOG2_E) as u32 + 24;
        with_adaptive_guard(target, initial, |w| k_integer(n, z, w))
    } else {
        let initial = (2.0 * abs * LOG2_E) as u32 + 24 + near_integer_bits(nu);
        with_adaptive_guard(target, initial, |w| k_reflection(nu, z, w))
    }
}

fn near_integer_bits(nu: &Float) -> u32 {
    let frac = Float::with_val(nu.prec(), nu - Float::with_val(nu.prec(), nu.round_ref()));
    match log2_abs(&frac) {
        Some(l) if l < 0.0 => (-l) as u32,
        _ => 0,
    }
}

/// K_ν by the reflection formula π/(2 sin νπ)·(I_{−ν} − I_ν) for non-integer ν.
fn k_reflection(nu: &Float, z: &Complex, w: u32) -> Result<(Complex, f64)> {
    let neg = Float::with_val(w, -nu);
    let (im, loss_m) = ascending_series(&neg, z, 1, w)?;
    let (ip, loss_p) = ascending_series(nu, z, 1, w)?;
    let big = log2_abs_c(&im).unwrap_or(0.0).max(log2_abs_c(&ip).unwrap_or(0.0));
    let diff = Complex::with_val(w, &im - &ip);
    let dl = log2_abs_c(&diff).unwrap_or(f64::NEG_INFINITY);
    let loss = loss_m.max(loss_p) + (big - dl).max(0.0);
    let pi = Float::with_val(w, Constant::Pi);
    let mut s = Float::with_val(w, nu * &pi);
    s.sin_mut();
    s *= 2u32;
    let factor = Float::with_val(w, &pi / &s);
    Ok((diff * factor, loss))
}

/// K_n for integer n ≥ 0 by the logarithmic series.
fn k_integer(n: u32, z: &Complex, w: u32) -> Result<(Complex, f64)> {
    let half = Complex::with_val(w, z / 2u32);
    let q = Complex::with_val(w, &half * &half);
    let mut max_log = f64::NEG_INFINITY;
    let mut note = |c: &Complex| {
        if let Some(l) = log2_abs_c(c) {
            if l > max_log {
                max_log = l;
            }
        }
    };

    // ½(z/2)^{−n} Σ_{k<n} (n−k−1)!/k! (−z²/4)^k
    let mut part_a = Complex::new(w);
    if n > 0 {
        let mut pow_neg = half.clone();
        pow_neg.pow_assign(-(n as i32));
        let mut term = Complex::with_val(w, Float::with_val(w, rug::Integer::from(rug::Integer::factorial(n - 1))));
        term *= &pow_neg;
        term /= 2u32;
        part_a += &term;
        note(&term);
        let neg_q = Complex::with_val(w, -&q);
        for k in 1..n {
            term *= &neg_q;
            term /= (k as u64) * ((n - k) as u64);
            part_a += &term;
            note(&term);
        }
    }

    // (−1)^{n+1} ln(z/2) I_n(z)
    let nu = Float::with_val(w, n);
    let (i_n, loss_i) = ascending_series(&nu, z, 1, w)?;
    let mut part_b = Complex::with_val(w, half.ln_ref());
    part_b *= &i_n;
    if n % 2 == 0 {
        part_b = -part_b;
    }
    note(&part_b);

    // (−1)^n ½ (z/2)^n Σ_k (ψ(k+1)+ψ(n+k+1)) (z²/4)^k/(k!(n+k)!)
    let gamma = Float::with_val(w, Constant::Euler);
    let mut pow_n = half.clone();
    pow_n.pow_assign(n as i32);
    let mut t = Complex::with_val(w, Float::with_val(w, rug::Integer::from(rug::Integer::factorial(n))).recip());
    t *= &pow_n;
    t /= 2u32;
    if n % 2 == 1 {
        t = -t;
    }
    let mut h_k = Float::new(w);
    let mut h_nk = Float::new(w);
    for j in 1..=n {
        h_nk += Float::with_val(w, j).recip();
    }
    let mut part_c = Complex::new(w);
    let q_abs = abs_f64(&q);
    let mut k: u64 = 0;
    loop {
        let psi_sum = Float::with_val(w, &h_k + &h_nk) - Float::with_val(w, &gamma * 2u32);
        let contrib = Complex::with_val(w, &t * &psi_sum);
        part_c += &contrib;
        note(&contrib);
        k += 1;
        if k > 50_000_000 {
            return Err(Error::Precision("logarithmic K series did not converge".into()));
        }
        t *= &q;
        t /= k * (n as u64 + k);
        h_k += Float::with_val(w, k).recip();
        h_nk += Float::with_val(w, n as u64 + k).recip();
        if (k as f64) * (k as f64 + n as f64) > 2.0 * q_abs {
            let tl = log2_abs_c(&t).unwrap_or(f64::NEG_INFINITY) + (k as f64 + 2.0).log2() + 2.0;
            let sl = log2_abs_c(&part_c).unwrap_or(tl);
            if tl < sl - w as f64 - 4.0 {
                break;
            }
        }
    }
    let total = Complex::with_val(w, &part_a + &part_b) + &part_c;
    let tl = log2_abs_c(&total).unwrap_or(f64::NEG_INFINITY);
    let loss = (max_log - tl).max(0.0) + loss_i + (k as f64 + 1.0).log2();
    Ok((total, loss))
}

/// Hankel expansion of K_ν; `None` when the remainder bound cannot reach the target.
fn k_hankel(nu: &Float, z: &Complex, target: u32) -> Result<Option<Complex>> {
    let w = target + 24;
    if w > MAX_BITS {
        return Err(Error::Precision("Hankel expansion precision limit".into()));
    }
    let nu_w = Float::with_val(w, nu);
    let mu = Float::with_val(w, &nu_w * &nu_w) * 4u32;
    let z_abs = abs_f64(z);
    let nuf = nu.to_f64();
    let sector = (nuf * nuf - 0.25).abs() / z_abs * LOG2_E;
    let zinv = Complex::with_val(w, z.clone().recip());
    let mut term = Complex::with_val(w, 1u32);
    let mut sum = term.clone();
    let mut prev_log = 0.0f64;
    let l_min = (nuf - 0.5).max(1.0).ceil() as u64;
    let mut l: u64 = 0;
    loop {
        l += 1;
        if l > 4 * target as u64 + 64 {
            return Ok(None);
        }
        let odd = Float::with_val(w, 2 * l - 1);
        let factor = Float::with_val(w, &mu - Float::with_val(w, &odd * &odd));
        term *= &zinv;
        term *= &factor;
        term /= 8 * l;
        let tl = match log2_abs_c(&term) {
            Some(v) => v,
            None => {
                // Terminating series (half-integer order): exact.
                break;
            }
        };
        if l >= l_min {
            let chi = (std::f64::consts::PI * (l as f64 / 2.0 + 1.0)).sqrt().log2();
            let bound = 1.0 + chi + sector + tl;
            if bound < -(target as f64) - 2.0 {
                break;
            }
            if tl > prev_log && l > l_min + 1 {
                return Ok(None);
            }
        }
        prev_log = tl;
        sum += &term;
    }
    let pi = Float::with_val(w, Constant::Pi);
    let mut pref = Complex::with_val(w, z * 2u32);
    pref = Complex::with_val(w, &pi / &pref);
    pref.sqrt_mut();
    let mut e = Complex::with_val(w, -z);
    e.exp_mut();
    pref *= &e;
    sum *= &pref;
    Ok(Some(sum))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Precision {
        Precision::new(50).unwrap()
    }

    #[test]
    fn half_integer_closed_forms() {
        let p = p();
        let b = p.bits();
        let nu = Float::with_val(b, 0.5);
        let z = Complex::with_val(b, (1, 0));
        let i = bessel_i(&nu, &z, p).unwrap();
        let pi = p.pi();
        let expected = Float::with_val(b, Float::with_val(b, 2u32 / &pi).sqrt() * Float::with_val(b, 1u32).sinh());
        assert!(crate::precision_math::rel_diff(&i, &Complex::with_val(b, &expected)) < 1e-45);
        let k = bessel_k(&nu, &z, p).unwrap();
        let expected_k = Float::with_val(b, Float::with_val(b, &pi / 2u32).sqrt() * Float::with_val(b, -1i32).exp());
        assert!(crate::precision_math::rel_diff(&k, &Complex::with_val(b, &expected_k)) < 1e-45);
    }

    #[test]
    fn integer_and_reflection_paths_are_continuous_in_order() {
        let p = p();
        let b = p.bits();
        let z = Complex::with_val(b, (1.5, 0.5));
        let nu_int = Float::with_val(b, 2);
        let mut nu_near = Float::with_val(b, 2);
        nu_near += Float::with_val(b, 1e-30);
        let a = bessel_k(&nu_int, &z, p).unwrap();
        let c = bessel_k(&nu_near, &z, p).unwrap();
        assert!(crate::precision_math::rel_diff(&a, &c) < 1e-28);
    }

    #[test]
    fn rejects_branch_and_zero() {
        let p = p();
        let nu = Float::with_val(p.bits(), 1);
        let z0 = Complex::with_val(p.bits(), (0, 0));
        assert!(matches!(bessel_i(&nu, &z0, p), Err(Error::Domain(_))));
        let zneg = Complex::with_val(p.bits(), (-1, 0));
        assert!(matches!(bessel_k(&nu, &zneg, p), Err(Error::Branch(_))));
    }
}
