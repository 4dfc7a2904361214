//! Shifted zeta functions ζ_{k,N}(s) = Σ_{ν∈F_k} ν^(−s) of the base, their poles,
//! values at zero, and the base torsion.
//!
//! On spheres ν = l + m and the multiplicity is a polynomial P(ν) = Σ c_p ν^p, so
//! ζ_{k,N}(s) = Σ_p c_p ζ_H(s − p, m + 1) exactly. Tori get exact residues from the
//! Epstein zeta pole and direct summation for Re s > n. File-backed spectra are
//! approximate: direct summation plus a least-squares Weyl fit of the counting function.

use crate::base_spectrum::{
    degree_data, nu_stream, sphere_multiplicity_polynomial, BaseFamily, BaseManifold, NuLine,
};
use crate::error::{Error, Result};
use crate::olver::RationalPolynomial;
use crate::precision_math::{digamma, gamma, hurwitz_zeta, hurwitz_zeta_with_derivative, Precision};
use rug::ops::Pow;
use rug::{Complex, Float, Integer, Rational};
use serde::Serialize;

/// Cutoff in ν used for direct summation on bases without a closed form.
pub const DEFAULT_APPROXIMATE_CUTOFF: f64 = 40.0;

/// Number of sphere levels split off exactly when evaluating ζ'(0, Δ_{k,ccl,N}).
const HEAD_LEVELS: u64 = 40;

/// Location, residue and finite part of a shifted zeta function at an integer point.
#[derive(Clone, Debug)]
pub struct MeromorphicPoint {
    /// Location s₀.
    pub location: i64,
    /// Residue at s₀ (zero at regular points).
    pub residue: Float,
    /// Constant term of the Laurent expansion, when available.
    pub finite_part: Option<Float>,
    /// True when the values come from a fitted tail rather than an exact representation.
    pub approximate: bool,
}

/// Smooth counting-function model N(ν) ≈ Σ C_p ν^p fitted on the supplied spectrum.
#[derive(Clone, Debug)]
pub struct WeylFit {
    /// (power p, coefficient C_p) pairs.
    pub coefficients: Vec<(u32, f64)>,
    /// Largest ν included in the direct sum.
    pub cutoff: f64,
}

/// Continuation vehicle for ζ_{k,N}.
#[derive(Clone, Debug)]
pub enum ZetaRepresentation {
    /// Σ_p c_p ζ_H(s − p, shift).
    Hurwitz {
        /// Multiplicity polynomial Σ c_p ν^p.
        weights: RationalPolynomial,
        /// Smallest ν of the ladder ν = shift + j.
        shift: Rational,
    },
    /// Direct sum over `lines` plus a Weyl tail beyond the cutoff.
    Approximate {
        /// Frequencies with ν ≤ cutoff.
        lines: Vec<NuLine>,
        /// Counting-function fit.
        fit: WeylFit,
    },
}

impl ZetaRepresentation {
    /// Builds the representation for degree k; `cutoff` applies to bases without closed form.
    pub fn build(base: &BaseManifold, k: usize, cutoff: f64) -> Result<Self> {
        if k > base.dim() {
            return Err(Error::OutOfRange(format!("degree {k} exceeds dimension {}", base.dim())));
        }
        match base.family() {
            BaseFamily::Sphere => Ok(ZetaRepresentation::Hurwitz {
                weights: sphere_multiplicity_polynomial(base, k)?,
                shift: Rational::from(base.half_dim() as u64 + 1),
            }),
            BaseFamily::Torus { .. } => {
                let cutoff = if cutoff > 0.0 { cutoff } else { DEFAULT_APPROXIMATE_CUTOFF };
                let lines = nu_stream(base, k, cutoff)?;
                let fit = weyl_fit(&lines, base.dim(), cutoff)?;
                Ok(ZetaRepresentation::Approximate { lines, fit })
            }
            BaseFamily::File { lines } => {
                let dd = degree_data(base.dim(), k);
                let a2 = Rational::from(&dd.a * &dd.a);
                let max_nu2 = lines
                    .iter()
                    .filter(|l| l.degree == k)
                    .map(|l| Rational::from(&l.eta + &a2))
                    .max()
                    .unwrap_or_default();
                let cut = max_nu2.to_f64().sqrt();
                if cut <= 0.0 {
                    return Ok(ZetaRepresentation::Approximate {
                        lines: Vec::new(),
                        fit: WeylFit { coefficients: Vec::new(), cutoff: 0.0 },
                    });
                }
                let lines = nu_stream(base, k, cut * (1.0 + 1e-12))?;
                let fit = weyl_fit(&lines, base.dim(), cut)?;
                Ok(ZetaRepresentation::Approximate { lines, fit })
            }
        }
    }

    /// True for the fitted representation.
    pub fn is_approximate(&self) -> bool {
        matches!(self, ZetaRepresentation::Approximate { .. })
    }
}

/// Least-squares fit of the counting function sampled between consecutive distinct ν.
fn weyl_fit(lines: &[NuLine], n: usize, cutoff: f64) -> Result<WeylFit> {
    let powers: Vec<u32> = (0..=n as u32).rev().step_by(2).chain(std::iter::once(0)).collect();
    let nus: Vec<f64> = lines.iter().map(|l| l.nu_squared.to_f64().sqrt()).collect();
    let mut cum = Vec::with_capacity(lines.len());
    let mut acc = 0.0;
    for l in lines {
        acc += l.multiplicity as f64;
        cum.push(acc);
    }
    let mut rows = Vec::new();
    for i in 0..nus.len().saturating_sub(1) {
        let mid = 0.5 * (nus[i] + nus[i + 1]);
        if mid >= 0.5 * cutoff {
            rows.push((mid, cum[i]));
        }
    }
    if rows.len() < powers.len() + 2 {
        return Err(Error::Domain(format!(
            "spectrum too short for a Weyl fit: {} samples for {} coefficients",
            rows.len(),
            powers.len()
        )));
    }
    let scale = cutoff.max(1.0);
    let a = nalgebra::DMatrix::from_fn(rows.len(), powers.len(), |i, j| (rows[i].0 / scale).powi(powers[j] as i32));
    let b = nalgebra::DVector::from_iterator(rows.len(), rows.iter().map(|r| r.1));
    let svd = a.svd(true, true);
    let x = svd.solve(&b, 1e-12).map_err(|e| Error::Domain(format!("Weyl fit failed: {e}")))?;
    let coefficients = powers.iter().zip(x.iter()).map(|(p, c)| (*p, c / scale.powi(*p as i32))).collect();
    Ok(WeylFit { coefficients, cutoff })
}

fn is_real_integer(s: &Complex, v: i64) -> bool {
    s.imag().is_zero() && *s.real() == v
}

fn hurwitz_sum(
    weights: &RationalPolynomial,
    shift: &Float,
    s: &Complex,
    p: Precision,
) -> Result<(Complex, Complex)> {
    let w = p.plus(10);
    let mut v = Complex::new(w.bits());
    let mut d = Complex::new(w.bits());
    for (pw, c) in weights.terms() {
        let arg = Complex::with_val(w.bits(), s - pw);
        if is_real_integer(&arg, 1) {
            return Err(Error::Pole { location: format!("{}", pw + 1), residue: c.to_string() });
        }
        let (z, dz) = hurwitz_zeta_with_derivative(&arg, shift, w)?;
        let cf = Float::with_val(w.bits(), c);
        v += Complex::with_val(w.bits(), &z * &cf);
        d += Complex::with_val(w.bits(), &dz * &cf);
    }
    Ok((Complex::with_val(p.bits(), &v), Complex::with_val(p.bits(), &d)))
}

fn approximate_sum(lines: &[NuLine], fit: &WeylFit, s: &Complex, n: usize, p: Precision) -> Result<Complex> {
    if s.real().to_f64() <= n as f64 {
        return Err(Error::Domain(format!(
            "approximate zeta is available only for Re s > {n}, got {}",
            s.real().to_f64()
        )));
    }
    let w = p.bits() + 16;
    let mut acc = Complex::new(w);
    for l in lines {
        let lnu = Float::with_val(w, &l.nu_squared).ln() / 2u32;
        let mut t = Complex::with_val(w, s * &lnu);
        t = -t;
        t.exp_mut();
        acc += t * l.multiplicity;
    }
    // ∫_Λ^∞ ν^(−s) dN(ν) with N(ν) = Σ C_p ν^p gives Σ p C_p Λ^(p−s)/(s−p).
    let lam = Float::with_val(w, fit.cutoff);
    let llam = Float::with_val(w, lam.ln_ref());
    for (pw, c) in &fit.coefficients {
        if *pw == 0 {
            continue;
        }
        let mut e = Complex::with_val(w, s - *pw);
        let denom = e.clone();
        e *= &llam;
        e = -e;
        e.exp_mut();
        acc += e * Float::with_val(w, *c * *pw as f64) / denom;
    }
    Ok(Complex::with_val(p.bits(), &acc))
}

/// ζ_{k,N}(s) by analytic continuation.
pub fn zeta_shifted(base: &BaseManifold, k: usize, s: &Complex, p: Precision) -> Result<Complex> {
    let rep = ZetaRepresentation::build(base, k, DEFAULT_APPROXIMATE_CUTOFF)?;
    zeta_from_representation(&rep, base.dim(), s, p)
}

/// ζ_{k,N}(s) from a prebuilt representation.
pub fn zeta_from_representation(rep: &ZetaRepresentation, n: usize, s: &Complex, p: Precision) -> Result<Complex> {
    match rep {
        ZetaRepresentation::Hurwitz { weights, shift } => {
            Ok(hurwitz_sum(weights, &Float::with_val(p.bits() + 32, shift), s, p)?.0)
        }
        ZetaRepresentation::Approximate { lines, fit } => approximate_sum(lines, fit, s, n, p),
    }
}

/// ζ_{k,N}(s) and its derivative in s (closed-form bases only).
pub fn zeta_shifted_with_derivative(base: &BaseManifold, k: usize, s: &Complex, p: Precision) -> Result<(Complex, Complex)> {
    match ZetaRepresentation::build(base, k, DEFAULT_APPROXIMATE_CUTOFF)? {
        ZetaRepresentation::Hurwitz { weights, shift } => {
            hurwitz_sum(&weights, &Float::with_val(p.bits() + 32, &shift), s, p)
        }
        ZetaRepresentation::Approximate { .. } => {
            Err(Error::Unsupported(format!("derivative of the shifted zeta of {} needs a closed form", base.label())))
        }
    }
}

/// Residue and finite part of ζ_{k,N} at s = 2r + 1 ≤ n.
pub fn zeta_shifted_residue(base: &BaseManifold, k: usize, r: usize, p: Precision) -> Result<MeromorphicPoint> {
    let n = base.dim();
    let loc = 2 * r + 1;
    if loc > n {
        return Err(Error::OutOfRange(format!("s = {loc} exceeds the dimension {n}")));
    }
    let w = p.plus(10);
    match base.family() {
        BaseFamily::Sphere => {
            let ZetaRepresentation::Hurwitz { weights, shift } = ZetaRepresentation::build(base, k, 0.0)? else {
                unreachable!("spheres have a Hurwitz representation")
            };
            let a = Float::with_val(w.bits(), &shift);
            let residue = Float::with_val(p.bits(), &weights.coefficient(2 * r as u32));
            let mut finite = Float::new(w.bits());
            for (pw, c) in weights.terms() {
                let cf = Float::with_val(w.bits(), c);
                if pw as usize == 2 * r {
                    // ζ_H(1 + δ, a) = 1/δ − ψ(a) + O(δ)
                    finite -= cf * digamma(&a, w)?;
                } else {
                    let s = Complex::with_val(w.bits(), (loc as i64 - pw as i64, 0));
                    let z = hurwitz_zeta(&s, &a, w)?;
                    finite += cf * z.real();
                }
            }
            Ok(MeromorphicPoint {
                location: loc as i64,
                residue,
                finite_part: Some(Float::with_val(p.bits(), &finite)),
                approximate: false,
            })
        }
        BaseFamily::Torus { radii } => Ok(MeromorphicPoint {
            location: loc as i64,
            residue: torus_residue(base, radii, k, r, p)?,
            finite_part: None,
            approximate: false,
        }),
        BaseFamily::File { .. } => {
            let ZetaRepresentation::Approximate { fit, .. } = ZetaRepresentation::build(base, k, 0.0)? else {
                unreachable!("file bases are approximate")
            };
            let c = fit.coefficients.iter().find(|(pw, _)| *pw as usize == loc).map(|(_, c)| *c).unwrap_or(0.0);
            Ok(MeromorphicPoint {
                location: loc as i64,
                residue: Float::with_val(p.bits(), c * loc as f64),
                finite_part: None,
                approximate: true,
            })
        }
    }
}

/// Exact residue of ζ_{k,N} at s = 2r+1 on a flat torus from the Epstein zeta pole.
fn torus_residue(base: &BaseManifold, radii: &[Rational], k: usize, r: usize, p: Precision) -> Result<Float> {
    let n = base.dim();
    if k == n {
        return Ok(Float::new(p.bits()));
    }
    let w = p.plus(10).bits();
    let j = (n - 2 * r - 1) / 2;
    let mult = Integer::from(Integer::binomial_u(n as u32 - 1, k as u32)) * base.rank();
    let mut vol = Rational::from(1);
    for rho in radii {
        vol *= rho;
    }
    let pi = Float::with_val(w, rug::float::Constant::Pi);
    let half_n = Float::with_val(w, n as f64 / 2.0);
    let sphere_area = Float::with_val(w, pi.pow(&half_n)) * 2u32 / gamma(&half_n, p.plus(10))?;
    // C(−(n−2j)/2, j) A^{2j}
    let dd = degree_data(n, k);
    let x = Rational::from((-((n - 2 * j) as i64), 2u64));
    let mut binom = Rational::from(1);
    for i in 0..j {
        binom *= Rational::from(&x - Integer::from(i));
        binom /= Integer::from(i + 1);
    }
    let mut a_pow = Rational::from(1);
    for _ in 0..2 * j {
        a_pow *= &dd.a;
    }
    let factor = Rational::from(binom * a_pow) * Rational::from(mult) * vol;
    Ok(Float::with_val(p.bits(), sphere_area * Float::with_val(w, &factor)))
}

/// Second continuation: Hurwitz zetas in l with the binomial series in m = (n−1)/2.
///
/// ν = l + m, P(ν) = Q(l); for l > L₀ expand (l+m)^(−s) = Σ_j C(−s,j) m^j l^(−s−j).
pub fn zeta_shifted_binomial(base: &BaseManifold, k: usize, s: &Complex, p: Precision) -> Result<Complex> {
    let ZetaRepresentation::Hurwitz { weights, .. } = ZetaRepresentation::build(base, k, 0.0)? else {
        return Err(Error::Unsupported("binomial continuation needs a closed-form spectrum".into()));
    };
    let w = p.plus(20);
    let bits = w.bits();
    let m = base.half_dim() as i64;
    let q = weights_in_l(&weights, m);
    let l0: i64 = 8 * (m + 1);
    let mut head = Complex::new(bits);
    for l in 1..=l0 {
        let nu = Float::with_val(bits, l + m);
        let mult = Float::with_val(bits, q.evaluate_rational(&Rational::from(l)));
        let mut t = Complex::with_val(bits, s * Float::with_val(bits, nu.ln_ref()));
        t = -t;
        t.exp_mut();
        head += t * mult;
    }
    if m == 0 {
        let shift = Float::with_val(bits, l0 + 1);
        let (tail, _) = hurwitz_sum(&q, &shift, s, w)?;
        return Ok(Complex::with_val(p.bits(), head + tail));
    }
    let shift = Float::with_val(bits, l0 + 1);
    let s_is_zero = s.real().is_zero() && s.imag().is_zero();
    let mut tail = Complex::new(bits);
    // C(−s, j) built incrementally; at s = 0 the pole terms contribute (−1)^j / j.
    let mut binom = Complex::with_val(bits, 1u32);
    let mut mj = Float::with_val(bits, 1u32);
    let tol = Float::with_val(bits, Float::u_exp(1, 0)) >> (p.bits() + 8);
    for j in 0..=400i64 {
        let mut term = Complex::new(bits);
        for (i, c) in q.terms() {
            let arg = Complex::with_val(bits, s + (j - i as i64));
            let cf = Float::with_val(bits, c);
            if is_real_integer(&arg, 1) {
                if s_is_zero && j >= 1 {
                    let lim = Float::with_val(bits, if j % 2 == 0 { 1 } else { -1 }) / j;
                    term += Complex::with_val(bits, (lim * &cf, 0)) * &mj;
                    continue;
                }
                return Err(Error::Pole { location: "binomial term".into(), residue: "non-zero".into() });
            }
            if s_is_zero && j >= 1 {
                continue;
            }
            let z = hurwitz_zeta(&arg, &shift, w)?;
            term += Complex::with_val(bits, &z * &binom) * &cf * &mj;
        }
        tail += &term;
        let small = Float::with_val(53, term.abs_ref()) < Float::with_val(53, &tol) && j > 2;
        if small {
            break;
        }
        // C(−s, j+1) = C(−s, j)(−s − j)/(j + 1)
        let f = Complex::with_val(bits, -s.clone() - j);
        binom *= f;
        binom /= j + 1;
        mj *= m;
    }
    Ok(Complex::with_val(p.bits(), head + tail))
}

/// Rewrites P(ν) as Q(l) = P(l + m).
fn weights_in_l(weights: &RationalPolynomial, m: i64) -> RationalPolynomial {
    let shift = RationalPolynomial::from_terms([(1, Rational::from(1)), (0, Rational::from(m))]);
    let mut out = RationalPolynomial::zero();
    let mut pw = RationalPolynomial::one();
    let top = weights.degree().unwrap_or(0);
    for e in 0..=top {
        out = out.add(&pw.scale(&weights.coefficient(e)));
        pw = pw.mul(&shift);
    }
    out
}

/// ζ(0, Δ_{k,ccl,N}) and ζ'(0, Δ_{k,ccl,N}).
///
/// ζ(u, Δ_ccl) = Σ_j C(−u, j)(−A²)^j ζ_{k,N}(2u + 2j), hence ζ(0) = ζ_{k,N}(0) and
/// ζ'(0) = 2ζ'_{k,N}(0) + Σ_{j≥1} A^{2j}/j ζ_{k,N}(2j). The first levels are split off exactly
/// so that the series converges geometrically in (A/ν_min)².
pub fn zeta_ccl_at_zero(base: &BaseManifold, k: usize, p: Precision) -> Result<(Float, Float)> {
    let ZetaRepresentation::Hurwitz { weights, shift } = ZetaRepresentation::build(base, k, 0.0)? else {
        return Err(Error::Unsupported(format!("ζ'(0) of the coclosed Laplacian of {} needs a closed form", base.label())));
    };
    let w = p.plus(15);
    let bits = w.bits();
    let zero = Complex::with_val(bits, (0, 0));
    let full_shift = Float::with_val(bits, &shift);
    let (z0, _) = hurwitz_sum(&weights, &full_shift, &zero, w)?;
    let dd = degree_data(base.dim(), k);
    let a2 = Rational::from(&dd.a * &dd.a);
    let mut head = Float::new(bits);
    for l in 0..HEAD_LEVELS {
        let nu = Rational::from(&shift + Integer::from(l));
        let mult = weights.evaluate_rational(&nu);
        if mult == 0 {
            continue;
        }
        let eta = Rational::from(&nu * &nu) - &a2;
        head -= Float::with_val(bits, &mult) * Float::with_val(bits, &eta).ln();
    }
    let tail_shift = Float::with_val(bits, Rational::from(&shift + Integer::from(HEAD_LEVELS)));
    let (_, dtail) = hurwitz_sum(&weights, &tail_shift, &zero, w)?;
    let mut deriv = head + Float::with_val(bits, dtail.real()) * 2u32;
    if a2 != 0 {
        let a2f = Float::with_val(bits, &a2);
        let mut apow = Float::with_val(bits, 1u32);
        let tol = Float::with_val(bits, Float::u_exp(1, 0)) >> (p.bits() + 10);
        for j in 1..=2000u32 {
            apow *= &a2f;
            let s = Complex::with_val(bits, (2 * j, 0));
            let (zt, _) = hurwitz_sum(&weights, &tail_shift, &s, w)?;
            let term = Float::with_val(bits, zt.real() * &apow) / j;
            deriv += &term;
            if Float::with_val(bits, term.abs_ref()) < tol {
                break;
            }
        }
    }
    Ok((Float::with_val(p.bits(), z0.real()), Float::with_val(p.bits(), &deriv)))
}

/// ζ(0, Δ_{k,ccl,N}) counted independently: head multiplicities plus the tail ζ_{k,N}(0).
pub fn zeta_ccl_value_at_zero_split(base: &BaseManifold, k: usize, p: Precision) -> Result<Float> {
    let ZetaRepresentation::Hurwitz { weights, shift } = ZetaRepresentation::build(base, k, 0.0)? else {
        return Err(Error::Unsupported("closed form required".into()));
    };
    let w = p.plus(15);
    let mut count = Rational::new();
    for l in 0..HEAD_LEVELS {
        count += weights.evaluate_rational(&Rational::from(&shift + Integer::from(l)));
    }
    let tail_shift = Float::with_val(w.bits(), Rational::from(&shift + Integer::from(HEAD_LEVELS)));
    let (zt, _) = hurwitz_sum(&weights, &tail_shift, &Complex::with_val(w.bits(), (0, 0)), w)?;
    Ok(Float::with_val(p.bits(), Float::with_val(w.bits(), &count) + zt.real()))
}

/// log T(N, E_N, g^N) = −Σ_{k≤(n−1)/2} (−1)^k δ_k ζ'(0, Δ_{k,ccl,N}).
pub fn base_torsion(base: &BaseManifold, p: Precision) -> Result<Float> {
    let m = base.half_dim();
    let mut acc = Float::new(p.bits() + 16);
    for k in 0..=m {
        let dd = degree_data(base.dim(), k);
        let (_, d) = zeta_ccl_at_zero(base, k, p)?;
        let term = d * Float::with_val(p.bits() + 16, &dd.delta);
        if k % 2 == 0 {
            acc -= term;
        } else {
            acc += term;
        }
    }
    Ok(Float::with_val(p.bits(), &acc))
}

/// log T(N) = ½ Σ_{k=0}^{n} (−1)^k k ζ'(0, Δ_k) with ζ(Δ_k) = ζ(Δ_{k,ccl}) + ζ(Δ_{k−1,ccl}).
pub fn base_torsion_full_forms(base: &BaseManifold, p: Precision) -> Result<Float> {
    let n = base.dim();
    let ccl: Vec<Float> = (0..=n)
        .map(|k| {
            if k == n {
                Ok(Float::new(p.bits()))
            } else {
                let kk = if k <= base.half_dim() { k } else { n - 1 - k };
                zeta_ccl_at_zero(base, kk, p).map(|v| v.1)
            }
        })
        .collect::<Result<_>>()?;
    let mut acc = Float::new(p.bits() + 16);
    for k in 1..=n {
        let full = Float::with_val(p.bits() + 16, &ccl[k] + &ccl[k - 1]) * k as u32;
        if k % 2 == 0 {
            acc += full;
        } else {
            acc -= full;
        }
    }
    Ok(Float::with_val(p.bits(), acc / 2u32))
}

/// Partial sum Σ_{ν ≤ cutoff} mult·ν^(−s) and an upper bound for the omitted tail at real s.
pub fn direct_sum_with_tail_bound(base: &BaseManifold, k: usize, s: f64, cutoff: f64, p: Precision) -> Result<(Float, Float)> {
    let bits = p.bits() + 16;
    let lines = nu_stream(base, k, cutoff)?;
    let sf = Float::with_val(bits, s);
    let mut acc = Float::new(bits);
    for l in &lines {
        let lnu = Float::with_val(bits, &l.nu_squared).ln() / 2u32;
        acc += Float::with_val(bits, -(lnu * &sf)).exp() * l.multiplicity;
    }
    let bound = match base.family() {
        BaseFamily::Sphere => {
            let weights = sphere_multiplicity_polynomial(base, k)?;
            let first = lines.last().map(|l| Float::with_val(bits, &l.nu_squared).sqrt() + 1u32)
                .unwrap_or_else(|| Float::with_val(bits, base.half_dim() as u64 + 1));
            let mut b = Float::new(bits);
            for (pw, c) in weights.terms() {
                let arg = Complex::with_val(bits, (s - pw as f64, 0));
                let z = hurwitz_zeta(&arg, &first, p)?;
                b += Float::with_val(bits, &rug::Rational::from(c.abs_ref())) * z.real();
            }
            b
        }
        _ => {
            let lam = Float::with_val(bits, cutoff);
            let n = base.dim() as f64;
            let rep = ZetaRepresentation::build(base, k, cutoff)?;
            let ZetaRepresentation::Approximate { fit, .. } = rep else { unreachable!("non-sphere bases are approximate") };
            let mut b = Float::new(bits);
            for (pw, c) in &fit.coefficients {
                if *pw > 0 {
                    let term = Float::with_val(bits, lam.clone().pow(*pw as f64 - s)) * (c.abs() * *pw as f64) / (s - *pw as f64);
                    b += term;
                }
            }
            b * 2u32 + Float::with_val(bits, lam.pow(n - s))
        }
    };
    Ok((Float::with_val(p.bits(), acc), Float::with_val(p.bits(), bound)))
}

/// Per-degree zeta data for the JSON report.
#[derive(Clone, Debug, Serialize)]
pub struct DegreeZetaReport {
    /// Degree k.
    pub k: usize,
    /// ζ(0, Δ_{k,ccl,N}) as a decimal string.
    pub zeta0: Option<String>,
    /// ζ'(0, Δ_{k,ccl,N}) as a decimal string.
    pub zeta_prime0: Option<String>,
    /// Residues of ζ_{k,N} at s = 2r+1 ≤ n, keyed by location.
    pub residues: Vec<(i64, String)>,
    /// True when any value is approximate.
    pub approximate: bool,
}

/// Decimal string of a real value with `digits` significant digits.
pub fn decimal_string(x: &Float, digits: u32) -> String {
    if x.is_zero() {
        return "0".into();
    }
    x.to_string_radix(10, Some(digits as usize))
}

/// JSON report of ζ(0), ζ'(0) and residues for degrees 0 ≤ k ≤ (n−1)/2.
pub fn zeta_report(base: &BaseManifold, p: Precision) -> Result<Vec<DegreeZetaReport>> {
    let n = base.dim();
    let mut out = Vec::new();
    for k in 0..=base.half_dim() {
        let (zeta0, zeta_prime0) = match zeta_ccl_at_zero(base, k, p) {
            Ok((a, b)) => (Some(decimal_string(&a, p.digits())), Some(decimal_string(&b, p.digits()))),
            Err(Error::Unsupported(_)) => (None, None),
            Err(e) => return Err(e),
        };
        let mut residues = Vec::new();
        let mut approximate = zeta0.is_none();
        for r in 0..=(n - 1) / 2 {
            let mp = zeta_shifted_residue(base, k, r, p)?;
            approximate |= mp.approximate;
            residues.push((mp.location, decimal_string(&mp.residue, p.digits())));
        }
        out.push(DegreeZetaReport { k, zeta0, zeta_prime0, residues, approximate });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_values() {
        let p = Precision::new(30).unwrap();
        let s1 = BaseManifold::sphere(1, 1).unwrap();
        let z0 = zeta_shifted(&s1, 0, &Complex::with_val(p.bits(), (0, 0)), p).unwrap();
        assert!((z0.real().to_f64() + 1.0).abs() < 1e-25);
        let (v, d) = zeta_ccl_at_zero(&s1, 0, p).unwrap();
        assert!((v.to_f64() + 1.0).abs() < 1e-25);
        let expected = -2.0 * (2.0 * std::f64::consts::PI).ln();
        assert!((d.to_f64() - expected).abs() < 1e-12);
    }
}
