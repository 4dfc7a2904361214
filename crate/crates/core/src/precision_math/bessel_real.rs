//! Ordinary Bessel functions J_ν, Y_ν of real order and positive real argument.
//!
//! Used by the eigenvalue oracles, which need the oscillatory solutions of the
//! model operators. Small arguments use the ascending series (and the
//! reflection or logarithmic formula for Y) under the measured-cancellation
//! guard; large arguments use the Hankel P/Q expansion, whose remainders are
//! bounded by the first neglected term once ℓ ≥ max(1, ν−½). Errors are
//! relative to the envelope sqrt(2/(πx)), which is what root isolation needs.

use super::{log2_abs, with_adaptive_guard, Precision, MAX_BITS};
use crate::error::{Error, Result};
use rug::float::Constant;
use rug::ops::PowAssign;
use rug::{Assign, Float};

const LOG2_E: f64 = std::f64::consts::LOG2_E;

/// J_ν, J'_ν, Y_ν, Y'_ν evaluated together at one argument.
#[derive(Clone, Debug)]
pub struct BesselJY {
    /// J_ν(x).
    pub j: Float,
    /// J'_ν(x).
    pub jp: Float,
    /// Y_ν(x).
    pub y: Float,
    /// Y'_ν(x).
    pub yp: Float,
}

/// Bessel function J_ν(x).
pub fn bessel_j(nu: &Float, x: &Float, p: Precision) -> Result<Float> {
    check(nu, x)?;
    let (j, _) = jy_value(nu, x, p.bits() + 16, false)?;
    Ok(Float::with_val(p.bits(), &j))
}

/// Bessel function Y_ν(x).
pub fn bessel_y(nu: &Float, x: &Float, p: Precision) -> Result<Float> {
    check(nu, x)?;
    let (_, y) = jy_value(nu, x, p.bits() + 16, true)?;
    Ok(Float::with_val(p.bits(), &y.expect("requested")))
}

/// J_ν, J'_ν, Y_ν, Y'_ν at `x` through the orders ν and ν+1.
pub fn bessel_jy(nu: &Float, x: &Float, p: Precision) -> Result<BesselJY> {
    check(nu, x)?;
    let target = p.bits() + 16;
    let nu1 = Float::with_val(nu.prec() + 8, nu + 1u32);
    let (j0, y0) = jy_value(nu, x, target, true)?;
    let (j1, y1) = jy_value(&nu1, x, target, true)?;
    let (y0, y1) = (y0.expect("requested"), y1.expect("requested"));
    let ratio = Float::with_val(target, nu / x);
    let jp = Float::with_val(target, &ratio * &j0) - &j1;
    let yp = Float::with_val(target, &ratio * &y0) - &y1;
    let b = p.bits();
    Ok(BesselJY {
        j: Float::with_val(b, &j0),
        jp: Float::with_val(b, &jp),
        y: Float::with_val(b, &y0),
        yp: Float::with_val(b, &yp),
    })
}

fn check(nu: &Float, x: &Float) -> Result<()> {
    if !nu.is_finite() || *nu < 0 {
        return Err(Error::Domain(format!("order must be real and nonnegative, got {}", nu.to_f64())));
    }
    if !x.is_finite() || *x <= 0 {
        return Err(Error::Domain(format!("argument must be positive, got {}", x.to_f64())));
    }
    Ok(())
}

fn jy_value(nu: &Float, x: &Float, target: u32, want_y: bool) -> Result<(Float, Option<Float>)> {
    let xf = x.to_f64();
    let nuf = nu.to_f64();
    if xf > 0.4 * target as f64 + nuf * nuf {
        if let Some((j, y)) = hankel(nu, x, target)? {
            return Ok((j, Some(y)));
        }
    }
    let initial = (xf * LOG2_E) as u32 + 24;
    let j = with_adaptive_guard(target, initial, |w| series_real(nu, x, w))?;
    if !want_y {
        return Ok((j, None));
    }
    let y = if nu.is_integer() {
        let n = nu.to_u32_saturating().unwrap_or(u32::MAX);
        with_adaptive_guard(target, initial, |w| y_integer(n, x, w))?
    } else {
        with_adaptive_guard(target, initial + near_integer_bits(nu), |w| y_reflection(nu, x, w))?
    };
    Ok((j, Some(y)))
}

fn near_integer_bits(nu: &Float) -> u32 {
    let frac = Float::with_val(nu.prec(), nu - Float::with_val(nu.prec(), nu.round_ref()));
    match log2_abs(&frac) {
        Some(l) if l < 0.0 => (-l) as u32,
        _ => 0,
    }
}

/// (x/2)^ν Σ_m (−x²/4)^m/(m! Γ(m+ν+1)) with measured loss.
fn series_real(nu: &Float, x: &Float, w: u32) -> Result<(Float, f64)> {
    let nu_w = Float::with_val(w, nu);
    let nu1 = Float::with_val(w, &nu_w + 1u32);
    if nu1.is_integer() && nu1 <= 0 {
        return Err(Error::Domain("ascending series at a negative integer order".into()));
    }
    let mut q = Float::with_val(w, x * x);
    q /= 4u32;
    q = -q;
    let q_abs = q.to_f64().abs();
    let mut term = nu1.gamma().recip();
    let mut sum = term.clone();
    let mut max_log = log2_abs(&term).unwrap_or(f64::NEG_INFINITY);
    let mut denom = Float::new(w);
    let mut m: u64 = 0;
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
        let tl = log2_abs(&term).unwrap_or(f64::NEG_INFINITY);
        if tl > max_log {
            max_log = tl;
        }
        if (m as f64) * ((m as f64) + nu.to_f64()).abs() > 2.0 * q_abs {
            let sl = log2_abs(&sum).unwrap_or(max_log);
            if tl < sl - w as f64 - 4.0 {
                break;
            }
        }
    }
    let sl = log2_abs(&sum).unwrap_or(f64::NEG_INFINITY);
    let loss = (max_log - sl).max(0.0) + (m as f64).log2() + 1.0;
    if !nu.is_zero() {
        let mut half = Float::with_val(w, x / 2u32);
        half.ln_mut();
        half *= &nu_w;
        half.exp_mut();
        sum *= &half;
    }
    Ok((sum, loss))
}

/// Y_ν = (J_ν cos νπ − J_{−ν}) / sin νπ for non-integer ν.
fn y_reflection(nu: &Float, x: &Float, w: u32) -> Result<(Float, f64)> {
    let (jp, lp) = series_real(nu, x, w)?;
    let neg = Float::with_val(w, -nu);
    let (jm, lm) = series_real(&neg, x, w)?;
    let pi = Float::with_val(w, Constant::Pi);
    let angle = Float::with_val(w, nu * &pi);
    let (s, c) = angle.sin_cos(Float::new(w));
    let a = Float::with_val(w, &jp * &c);
    let num = Float::with_val(w, &a - &jm);
    let big = log2_abs(&a).unwrap_or(0.0).max(log2_abs(&jm).unwrap_or(0.0));
    let nl = log2_abs(&num).unwrap_or(f64::NEG_INFINITY);
    let loss = lp.max(lm) + (big - nl).max(0.0);
    Ok((num / s, loss))
}

/// Y_n for integer n ≥ 0 by the logarithmic series.
fn y_integer(n: u32, x: &Float, w: u32) -> Result<(Float, f64)> {
    let pi = Float::with_val(w, Constant::Pi);
    let half = Float::with_val(w, x / 2u32);
    let q = Float::with_val(w, &half * &half);
    let mut max_log = f64::NEG_INFINITY;
    let mut note = |v: &Float| {
        if let Some(l) = log2_abs(v) {
            if l > max_log {
                max_log = l;
            }
        }
    };

    // −((x/2)^{−n}/π) Σ_{k<n} (n−k−1)!/k! (x²/4)^k
    let mut part_a = Float::new(w);
    if n > 0 {
        let mut term = Float::with_val(w, rug::Integer::from(rug::Integer::factorial(n - 1)));
        let mut hp = half.clone();
        hp.pow_assign(-(n as i32));
        term *= &hp;
        term /= &pi;
        term = -term;
        part_a += &term;
        note(&term);
        for k in 1..n {
            term *= &q;
            term /= (k as u64) * ((n - k) as u64);
            part_a += &term;
            note(&term);
        }
    }

    // (2/π) ln(x/2) J_n(x)
    let nu = Float::with_val(w, n);
    let (jn, lj) = series_real(&nu, x, w)?;
    let mut part_b = Float::with_val(w, half.ln_ref());
    part_b *= &jn;
    part_b *= 2u32;
    part_b /= &pi;
    note(&part_b);

    // −((x/2)^n/π) Σ_k (ψ(k+1)+ψ(n+k+1)) (−x²/4)^k/(k!(n+k)!)
    let gamma = Float::with_val(w, Constant::Euler);
    let mut hp = half.clone();
    hp.pow_assign(n as i32);
    let mut t = Float::with_val(w, rug::Integer::from(rug::Integer::factorial(n))).recip();
    t *= &hp;
    t /= &pi;
    t = -t;
    let neg_q = Float::with_val(w, -&q);
    let mut h_k = Float::new(w);
    let mut h_nk = Float::new(w);
    for j in 1..=n {
        h_nk += Float::with_val(w, j).recip();
    }
    let mut part_c = Float::new(w);
    let q_abs = q.to_f64();
    let mut k: u64 = 0;
    loop {
        let psi_sum = Float::with_val(w, &h_k + &h_nk) - Float::with_val(w, &gamma * 2u32);
        let contrib = Float::with_val(w, &t * &psi_sum);
        part_c += &contrib;
        note(&contrib);
        k += 1;
        if k > 50_000_000 {
            return Err(Error::Precision("logarithmic Y series did not converge".into()));
        }
        t *= &neg_q;
        t /= k * (n as u64 + k);
        h_k += Float::with_val(w, k).recip();
        h_nk += Float::with_val(w, n as u64 + k).recip();
        if (k as f64) * (k as f64 + n as f64) > 2.0 * q_abs {
            let tl = log2_abs(&t).unwrap_or(f64::NEG_INFINITY) + (k as f64 + 2.0).log2() + 2.0;
            let sl = log2_abs(&part_c).unwrap_or(tl);
            if tl < sl - w as f64 - 4.0 {
                break;
            }
        }
    }
    let total = Float::with_val(w, &part_a + &part_b) + &part_c;
    let tl = log2_abs(&total).unwrap_or(f64::NEG_INFINITY);
    let loss = (max_log - tl).max(0.0) + lj + (k as f64 + 1.0).log2();
    Ok((total, loss))
}

/// Hankel P/Q expansion; `None` if the first neglected term cannot reach the target.
fn hankel(nu: &Float, x: &Float, target: u32) -> Result<Option<(Float, Float)>> {
    let xf = x.to_f64();
    let w = target + 24 + xf.log2().max(0.0) as u32;
    if w > MAX_BITS {
        return Err(Error::Precision("Hankel expansion precision limit".into()));
    }
    let nu_w = Float::with_val(w, nu);
    let mu = Float::with_val(w, &nu_w * &nu_w) * 4u32;
    let xw = Float::with_val(w, x);
    let mut term = Float::with_val(w, 1u32);
    let mut p_sum = Float::with_val(w, 1u32);
    let mut q_sum = Float::new(w);
    let l_min = (nu.to_f64() - 0.5).max(1.0).ceil() as u64;
    let mut prev = 0.0f64;
    let mut k: u64 = 0;
    loop {
        k += 1;
        if k > 4 * target as u64 + 64 {
            return Ok(None);
        }
        let odd = Float::with_val(w, 2 * k - 1);
        let factor = Float::with_val(w, &mu - Float::with_val(w, &odd * &odd));
        term *= &factor;
        term /= &xw;
        term /= 8 * k;
        let tl = match log2_abs(&term) {
            Some(v) => v,
            None => break,
        };
        if k >= l_min {
            if tl < -(target as f64) - 4.0 {
                break;
            }
            if tl > prev && k > l_min + 1 {
                return Ok(None);
            }
        }
        prev = tl;
        let signed = if (k / 2) % 2 == 0 { term.clone() } else { Float::with_val(w, -&term) };
        if k % 2 == 0 {
            p_sum += &signed;
        } else {
            q_sum += &signed;
        }
    }
    let pi = Float::with_val(w, Constant::Pi);
    let shift = Float::with_val(w, Float::with_val(w, &nu_w / 2u32) + 0.25f64) * &pi;
    let omega = Float::with_val(w, &xw - &shift);
    let (s, c) = omega.sin_cos(Float::new(w));
    let mut amp = Float::with_val(w, &pi * &xw);
    amp = Float::with_val(w, 2u32 / &amp);
    amp.sqrt_mut();
    let j = Float::with_val(w, &p_sum * &c) - Float::with_val(w, &q_sum * &s);
    let y = Float::with_val(w, &p_sum * &s) + Float::with_val(w, &q_sum * &c);
    Ok(Some((j * &amp, y * &amp)))
}
