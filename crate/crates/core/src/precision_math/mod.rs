//! Arbitrary-precision arithmetic and special functions.
//!
//! Every routine takes its working precision as an explicit [`Precision`]
//! argument; nothing depends on ambient state. Values are `rug` floats and
//! complexes rounded to the requested precision on return.

mod bessel;
mod bessel_real;
mod zeta;

pub use bessel::{bessel_i, bessel_i_prime, bessel_k, bessel_k_prime, BesselIK};
pub use bessel_real::{bessel_j, bessel_jy, bessel_y, BesselJY};
pub use zeta::{bernoulli, hurwitz_zeta, hurwitz_zeta_with_derivative, riemann_zeta};

use crate::error::{Error, Result};
use rug::float::Constant;
use rug::{Complex, Float};
use serde::{Deserialize, Serialize};

/// Real number at a stated working precision.
pub type BigReal = Float;
/// Complex number at a stated working precision.
pub type BigComplex = Complex;

/// Hard ceiling on internal working precision in bits.
pub(crate) const MAX_BITS: u32 = 1 << 20;

/// Working precision in decimal digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Precision {
    digits: u32,
}

impl Precision {
    /// Default working precision of 50 decimal digits.
    pub const DEFAULT: Precision = Precision { digits: 50 };

    /// Precision of `digits` decimal digits; at least 20 digits are required.
    pub fn new(digits: u32) -> Result<Self> {
        if digits < 20 {
            return Err(Error::Domain(format!("precision {digits} digits is below the minimum of 20")));
        }
        if digits > 100_000 {
            return Err(Error::Precision(format!("precision {digits} digits exceeds the internal limit")));
        }
        Ok(Precision { digits })
    }

    /// Number of decimal digits.
    pub fn digits(self) -> u32 {
        self.digits
    }

    /// Binary precision used for values at this precision (digits plus 16 guard bits).
    pub fn bits(self) -> u32 {
        (self.digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 16
    }

    /// Precision raised by `extra` digits.
    pub fn plus(self, extra: u32) -> Precision {
        Precision { digits: self.digits + extra }
    }

    /// The value 10^(-digits), the nominal unit roundoff in decimal terms.
    pub fn epsilon(self) -> Float {
        let mut e = Float::with_val(self.bits(), 10);
        e.pow_assign(-(self.digits as i32));
        e
    }

    /// Real constant from an `f64`.
    pub fn real(self, x: f64) -> Float {
        Float::with_val(self.bits(), x)
    }

    /// Exact rational as a real at this precision.
    pub fn rational(self, q: &rug::Rational) -> Float {
        Float::with_val(self.bits(), q)
    }

    /// π at this precision.
    pub fn pi(self) -> Float {
        Float::with_val(self.bits(), Constant::Pi)
    }

    /// Euler's constant γ at this precision.
    pub fn euler_gamma(self) -> Float {
        Float::with_val(self.bits(), Constant::Euler)
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision::DEFAULT
    }
}

use rug::ops::PowAssign;

/// Digamma ψ(x) = Γ'(x)/Γ(x) for real x > 0.
pub fn digamma(x: &Float, p: Precision) -> Result<Float> {
    if !x.is_finite() || *x <= 0 {
        return Err(Error::Domain(format!("digamma requires x > 0, got {}", x.to_f64())));
    }
    let mut v = Float::with_val(p.bits() + 32, x);
    v.digamma_mut();
    Ok(Float::with_val(p.bits(), &v))
}

/// log Γ(x) for real x > 0.
pub fn gamma_ln(x: &Float, p: Precision) -> Result<Float> {
    if !x.is_finite() || *x <= 0 {
        return Err(Error::Domain(format!("log-gamma requires x > 0, got {}", x.to_f64())));
    }
    let mut v = Float::with_val(p.bits() + 32, x);
    v.ln_gamma_mut();
    Ok(Float::with_val(p.bits(), &v))
}

/// Γ(x) for real x that is not a non-positive integer.
pub fn gamma(x: &Float, p: Precision) -> Result<Float> {
    if x.is_integer() && *x <= 0 {
        return Err(Error::Domain("gamma has poles at non-positive integers".into()));
    }
    let mut v = Float::with_val(p.bits() + 32, x);
    v.gamma_mut();
    Ok(Float::with_val(p.bits(), &v))
}

/// Euler's constant γ.
pub fn euler_gamma(p: Precision) -> Float {
    p.euler_gamma()
}

/// Base-2 logarithm of |x| estimated from the binary exponent; `None` for zero.
pub(crate) fn log2_abs(x: &Float) -> Option<f64> {
    if x.is_zero() || !x.is_finite() {
        return None;
    }
    let (mant, e) = x.to_f64_exp();
    Some(e as f64 + mant.abs().log2())
}

/// Base-2 logarithm of |z| estimated from the component exponents; `None` for zero.
pub(crate) fn log2_abs_c(z: &Complex) -> Option<f64> {
    match (log2_abs(z.real()), log2_abs(z.imag())) {
        (None, None) => None,
        (Some(a), None) | (None, Some(a)) => Some(a),
        (Some(a), Some(b)) => {
            let (hi, lo) = if a > b { (a, b) } else { (b, a) };
            Some(hi + 0.5 * (1.0 + 2f64.powf(2.0 * (lo - hi))).log2())
        }
    }
}

/// Relative distance |a - b| / max(|b|, tiny) as an `f64`.
pub fn rel_diff(a: &Complex, b: &Complex) -> f64 {
    let prec = a.prec().0.max(b.prec().0);
    let d = Complex::with_val(prec, a - b);
    let num = Float::with_val(prec, d.abs_ref());
    let den = Float::with_val(prec, b.abs_ref());
    if den.is_zero() {
        return num.to_f64();
    }
    Float::with_val(prec, &num / &den).to_f64()
}

/// Relative distance for reals.
pub fn rel_diff_real(a: &Float, b: &Float) -> f64 {
    let prec = a.prec().max(b.prec());
    let d = Float::with_val(prec, a - b).abs();
    if b.is_zero() {
        return d.to_f64();
    }
    Float::with_val(prec, &d / b).abs().to_f64()
}

/// log10 of |x|, with -inf for zero; convenient for tolerance checks on tiny gaps.
pub fn log10_abs(x: &Float) -> f64 {
    match log2_abs(x) {
        Some(l) => l * std::f64::consts::LOG10_2,
        None => f64::NEG_INFINITY,
    }
}

/// Runs `f` at increasing guard precision until the measured cancellation loss fits.
///
/// `f(w)` evaluates at working precision `w` bits and returns the value together with
/// the number of bits lost to cancellation. The loop stops once the loss leaves at
/// least `target` correct bits.
pub(crate) fn with_adaptive_guard<T, F>(target: u32, initial_guard: u32, mut f: F) -> Result<T>
where
    F: FnMut(u32) -> Result<(T, f64)>,
{
    let mut guard = initial_guard.max(24);
    loop {
        let w = target.checked_add(guard).filter(|w| *w <= MAX_BITS).ok_or_else(|| {
            Error::Precision(format!("working precision {target}+{guard} bits exceeds the internal limit"))
        })?;
        let (v, loss) = f(w)?;
        if loss.is_finite() && loss + 12.0 <= guard as f64 {
            return Ok(v);
        }
        let needed = if loss.is_finite() { loss.ceil() as u32 + 40 } else { guard * 2 };
        guard = needed.max(guard * 2);
    }
}
