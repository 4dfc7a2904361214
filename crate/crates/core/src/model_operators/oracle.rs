//! Brute-force eigenvalue oracles for the model operators.
//!
//! Eigenvalues μ = k² are zeros in k of the boundary determinant built from the
//! oscillatory basis √x J_ν(kx), √x Y_ν(kx) (only √x J_ν(kx) on the full cone).
//! Roots are bracketed by a sign scan at step π/(8L), refined by the Illinois
//! method, and audited: consecutive gaps in the oscillatory regime must lie in
//! [π/(2L), 3π/(2L)] and the last root's index must match its McMahon phase, so a
//! missed root is reported instead of silently shifting the product.

use super::{Interval, ModelOperator, Variant};
use crate::error::{Error, Result};
use crate::precision_math::{bessel_jy, hurwitz_zeta, Precision};
use rug::{Complex, Float};

/// Largest number of eigenvalues the oracle computes.
pub const MAX_COUNT: usize = 500;

fn length(op: &ModelOperator) -> f64 {
    match &op.interval {
        Interval::Full => 1.0,
        Interval::Truncated(e) => 1.0 - e.to_f64(),
    }
}

/// Phase offset δ with k_i L ≈ (i + δ)π for large i.
pub fn expected_offset(op: &ModelOperator) -> f64 {
    let nu = op.nu.to_f64();
    match (&op.interval, op.variant) {
        (Interval::Full, Variant::Psi0 | Variant::Phi0) => nu / 2.0 - 0.25,
        (Interval::Full, _) => nu / 2.0 - 0.75,
        (Interval::Truncated(_), Variant::H1) => 0.0,
        (Interval::Truncated(_), _) => -0.5,
    }
}

/// Boundary determinant whose zeros in k are the square roots of the eigenvalues.
pub fn characteristic(op: &ModelOperator, k: &Float, p: Precision) -> Result<Float> {
    let b = p.bits() + 16;
    let a = Float::with_val(b, &op.effective_shift());
    let one = bessel_jy(&op.nu, k, p)?;
    match &op.interval {
        Interval::Full => Ok(match op.variant {
            Variant::Psi0 | Variant::Phi0 => Float::with_val(p.bits(), &one.j),
            Variant::Psi2 | Variant::Phi2 => {
                Float::with_val(p.bits(), Float::with_val(b, k * &one.jp) + Float::with_val(b, &a * &one.j))
            }
            _ => return Err(Error::Domain("harmonic operators live on [ε,1]".into())),
        }),
        Interval::Truncated(eps) => {
            let ke = Float::with_val(b, k * eps);
            let at_e = bessel_jy(&op.nu, &ke, p)?;
            let v = match op.variant {
                Variant::Psi2 | Variant::Phi2 => {
                    let cj = Float::with_val(b, k * &one.jp) + Float::with_val(b, &a * &one.j);
                    let cy = Float::with_val(b, k * &one.yp) + Float::with_val(b, &a * &one.y);
                    Float::with_val(b, &at_e.y * &cj) - Float::with_val(b, &at_e.j * &cy)
                }
                Variant::Psi0 | Variant::Phi0 | Variant::H0 => {
                    let ry = Float::with_val(b, &ke * &at_e.yp) - Float::with_val(b, &a * &at_e.y);
                    let rj = Float::with_val(b, &ke * &at_e.jp) - Float::with_val(b, &a * &at_e.j);
                    Float::with_val(b, &one.j * &ry) - Float::with_val(b, &one.y * &rj)
                }
                Variant::H1 => Float::with_val(b, &one.j * &at_e.y) - Float::with_val(b, &one.y * &at_e.j),
            };
            Ok(Float::with_val(p.bits(), &v))
        }
    }
}

fn refine(op: &ModelOperator, mut lo: Float, mut flo: Float, mut hi: Float, mut fhi: Float, p: Precision) -> Result<Float> {
    let b = p.bits() + 16;
    let tol_bits = p.bits() as i32 - 8;
    let mut side = 0i32;
    for _ in 0..200 {
        let width = Float::with_val(b, &hi - &lo);
        let scale = Float::with_val(b, hi.abs_ref());
        if width.is_zero() || (width.get_exp().unwrap_or(i32::MIN) < scale.get_exp().unwrap_or(0) - tol_bits) {
            break;
        }
        // Illinois variant of regula falsi, with a bisection fallback.
        let denom = Float::with_val(b, &fhi - &flo);
        let mut mid = if denom.is_zero() {
            Float::with_val(b, &lo + &hi) / 2u32
        } else {
            Float::with_val(b, &hi - Float::with_val(b, &fhi * &width) / &denom)
        };
        if !(mid > lo && mid < hi) {
            mid = Float::with_val(b, &lo + &hi) / 2u32;
        }
        let fm = characteristic(op, &mid, p)?;
        if fm.is_zero() {
            return Ok(mid);
        }
        if (fm.is_sign_negative()) == (flo.is_sign_negative()) {
            lo = mid;
            flo = fm;
            if side == -1 {
                fhi /= 2u32;
            }
            side = -1;
        } else {
            hi = mid;
            fhi = fm;
            if side == 1 {
                flo /= 2u32;
            }
            side = 1;
        }
    }
    Ok(Float::with_val(p.bits(), &lo + &hi) / 2u32)
}

/// The first `count` eigenvalues of the operator in increasing order.
pub fn eigenvalues_oracle(op: &ModelOperator, count: usize, p: Precision) -> Result<Vec<Float>> {
    if count == 0 || count > MAX_COUNT {
        return Err(Error::OutOfRange(format!("eigenvalue count must lie in 1..={MAX_COUNT}, got {count}")));
    }
    let b = p.bits() + 16;
    let l = length(op);
    let step = std::f64::consts::PI / (8.0 * l);
    let k_limit = (count as f64 + 4.0 + op.nu.to_f64()) * std::f64::consts::PI / l + 10.0;
    let mut ks: Vec<Float> = Vec::with_capacity(count);
    let mut lo = Float::with_val(b, 1e-3);
    let mut flo = characteristic(op, &lo, p)?;
    while ks.len() < count {
        let hi = Float::with_val(b, &lo + step);
        if hi.to_f64() > k_limit {
            return Err(Error::RootIsolation {
                lo: "0".into(),
                hi: format!("{k_limit}"),
                message: format!("found {} of {count} roots", ks.len()),
            });
        }
        let fhi = characteristic(op, &hi, p)?;
        if fhi.is_zero() {
            ks.push(hi.clone());
        } else if fhi.is_sign_negative() != flo.is_sign_negative() && !flo.is_zero() {
            ks.push(refine(op, lo.clone(), flo.clone(), hi.clone(), fhi.clone(), p)?);
        }
        lo = hi;
        flo = fhi;
    }
    audit(op, &ks)?;
    Ok(ks.into_iter().map(|k| Float::with_val(p.bits(), &k * &k)).collect())
}

fn audit(op: &ModelOperator, ks: &[Float]) -> Result<()> {
    let l = length(op);
    let pi_l = std::f64::consts::PI / l;
    let left = match &op.interval {
        Interval::Full => 1.0,
        Interval::Truncated(e) => e.to_f64(),
    };
    let oscillatory = 2.0 * op.nu.to_f64() / left + 5.0;
    for i in 1..ks.len() {
        let (a, b) = (ks[i - 1].to_f64(), ks[i].to_f64());
        if b <= a {
            return Err(Error::RootIsolation { lo: format!("{a}"), hi: format!("{b}"), message: "roots not increasing".into() });
        }
        if a > oscillatory && !(0.5 * pi_l..=1.5 * pi_l).contains(&(b - a)) {
            return Err(Error::RootIsolation { lo: format!("{a}"), hi: format!("{b}"), message: "gap outside [π/2L, 3π/2L]".into() });
        }
    }
    let n = ks.len();
    let last = ks[n - 1].to_f64();
    if last > oscillatory {
        let index = last / pi_l - expected_offset(op);
        if (index - n as f64).abs() > 0.25 {
            return Err(Error::RootIsolation {
                lo: format!("{}", ks[0].to_f64()),
                hi: format!("{last}"),
                message: format!("last root has phase index {index:.3}, expected {n}"),
            });
        }
    }
    Ok(())
}

/// log Π_i (1 + μ/λ_i) over the given eigenvalues plus a modelled tail.
///
/// The tail uses λ_i ≈ a(i+δ)² + C with a = (π/L)² and δ, C fitted on the last two
/// eigenvalues, and sums Σ_m (−1)^(m+1) μ^m/m · a^(−m) Σ_j C(−m,j) (C/a)^j ζ_H(2m+2j, N+1+δ).
pub fn log_det_ratio_from_eigenvalues(op: &ModelOperator, eigenvalues: &[Float], mu: &Complex, p: Precision) -> Result<Complex> {
    let n = eigenvalues.len();
    if n < 2 {
        return Err(Error::Domain("at least two eigenvalues are required".into()));
    }
    let b = p.bits() + 16;
    let mut acc = Complex::new(b);
    for lam in eigenvalues {
        let q = Complex::with_val(b, mu / lam) + 1u32;
        acc += q.ln();
    }
    let l = length(op);
    let pi = Float::with_val(b, rug::float::Constant::Pi);
    let a = Float::with_val(b, Float::with_val(b, &pi / l).square());
    let ln = &eigenvalues[n - 1];
    let ln1 = &eigenvalues[n - 2];
    let delta = (Float::with_val(b, Float::with_val(b, ln - ln1) / &a) + 1u32) / 2u32 - n as u32;
    let nd = Float::with_val(b, &delta + n as u32);
    let cc = Float::with_val(b, ln - Float::with_val(b, &a * Float::with_val(b, nd.square_ref())));
    let c = Float::with_val(b, &cc / &a);
    let shift = Float::with_val(b, &nd + 1u32);
    let tol = Float::with_val(b, Float::u_exp(1, 0)) >> (p.bits() + 4);
    let mut mu_pow = Complex::with_val(b, (1, 0));
    let mut tail = Complex::new(b);
    for m in 1..=400u32 {
        mu_pow *= mu;
        mu_pow /= &a;
        let mut inner = Float::new(b);
        let mut binom = Float::with_val(b, 1u32);
        let mut cpow = Float::with_val(b, 1u32);
        for j in 0..=400u32 {
            let s = Complex::with_val(b, (2 * (m + j), 0));
            let z = hurwitz_zeta(&s, &shift, p)?;
            let term = Float::with_val(b, z.real() * &binom) * &cpow;
            inner += &term;
            if Float::with_val(b, term.abs_ref()) < Float::with_val(b, &tol * inner.clone().abs()) {
                break;
            }
            binom *= -(Float::with_val(b, m + j));
            binom /= j + 1;
            cpow *= &c;
        }
        let mut term = Complex::with_val(b, &mu_pow * &inner) / m;
        if m % 2 == 0 {
            term = -term;
        }
        tail += &term;
        if Float::with_val(b, term.abs_ref()) < tol {
            break;
        }
    }
    Ok(Complex::with_val(p.bits(), acc + tail))
}

/// Oracle for det(L + μ)/det(L) from `count` eigenvalues with tail correction.
pub fn det_ratio_oracle(op: &ModelOperator, mu: &Complex, count: usize, p: Precision) -> Result<Complex> {
    let eig = eigenvalues_oracle(op, count, p)?;
    Ok(log_det_ratio_from_eigenvalues(op, &eig, mu, p)?.exp())
}

/// det(H^k_{0,ε}) by integrating f'' = ((A² − 1/4)/x²) f from x = 1 (f = 0, f' = 1) to ε
/// with classical Runge–Kutta in double precision; returns 2(f'(ε) + (k − n/2) f(ε)/ε).
pub fn h_det_oracle(k: usize, n: usize, eps: f64, steps: usize) -> Result<f64> {
    if n % 2 == 0 || k > n {
        return Err(Error::Domain("odd n and k ≤ n required".into()));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Domain("ε must lie in (0,1)".into()));
    }
    let a = (n as f64 - 1.0) / 2.0 - k as f64;
    let q = a * a - 0.25;
    let rhs = |x: f64, y: [f64; 2]| [y[1], q / (x * x) * y[0]];
    // Integrate in u = log x for uniform resolution near ε.
    let u_end = eps.ln();
    let h = u_end / steps as f64;
    let mut u = 0.0f64;
    let mut y = [0.0f64, 1.0f64];
    let g = |u: f64, y: [f64; 2]| {
        let x = u.exp();
        let d = rhs(x, y);
        [d[0] * x, d[1] * x]
    };
    for _ in 0..steps {
        let k1 = g(u, y);
        let k2 = g(u + h / 2.0, [y[0] + h / 2.0 * k1[0], y[1] + h / 2.0 * k1[1]]);
        let k3 = g(u + h / 2.0, [y[0] + h / 2.0 * k2[0], y[1] + h / 2.0 * k2[1]]);
        let k4 = g(u + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
        y[0] += h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
        y[1] += h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
        u += h;
    }
    let c = k as f64 - n as f64 / 2.0;
    Ok(2.0 * (y[1] + c * y[0] / eps))
}
