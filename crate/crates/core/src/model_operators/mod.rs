//! One-dimensional Bessel-type model operators −∂_x² + (ν² − 1/4)/x² on (0,1] and [ε,1].
//!
//! The ψ-type operators carry the shift A and the φ-type operators carry −A. Index 2
//! denotes the operators with a relative (Robin) condition at x = 1 and a Dirichlet
//! condition at x = ε; index 0 denotes a Dirichlet condition at x = 1 and the Robin
//! condition f' − (A + 1/2) f/x = 0 at x = ε. The harmonic operators H₀, H₁ have
//! ν = |A|. Determinant ratios det(L + ν²z²)/det(L) follow from normalized solutions
//! and are checked against eigenvalue products in [`oracle`].

pub mod oracle;

use crate::error::{Error, Result};
use crate::olver::{d_poly, m_poly, t_epsilon};
use crate::precision_math::{gamma, BesselIK, Precision};
use rug::ops::Pow;
use rug::{Complex, Float, Rational};

/// Which model operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    /// ψ-type, Dirichlet at 1 (truncated: Robin at ε).
    Psi0,
    /// ψ-type, Robin at 1 (truncated: Dirichlet at ε).
    Psi2,
    /// φ-type analogue of [`Variant::Psi0`] with A → −A.
    Phi0,
    /// φ-type analogue of [`Variant::Psi2`] with A → −A.
    Phi2,
    /// Harmonic operator: Dirichlet at 1, Robin f' + (k − n/2) f/x at ε, ν = |A|.
    H0,
    /// Harmonic operator with Dirichlet conditions at both ends, ν = |A|.
    H1,
}

impl Variant {
    /// Sign applied to A by this variant.
    pub fn shift_sign(self) -> i32 {
        match self {
            Variant::Phi0 | Variant::Phi2 => -1,
            _ => 1,
        }
    }

    /// True for the variants with a Robin condition at x = 1.
    pub fn robin_at_one(self) -> bool {
        matches!(self, Variant::Psi2 | Variant::Phi2)
    }
}

/// Interval of definition.
#[derive(Clone, Debug, PartialEq)]
pub enum Interval {
    /// The full cone (0, 1].
    Full,
    /// The truncated cone [ε, 1].
    Truncated(Float),
}

/// Endpoint condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundaryCondition {
    /// f = 0.
    Dirichlet,
    /// f' + c f / x = 0 at the endpoint x.
    Robin {
        /// Coefficient c.
        coefficient: Rational,
    },
    /// Square-integrable Frobenius branch x^(ν+1/2) at x = 0.
    Regular,
}

/// Descriptor of a model operator.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelOperator {
    /// Variant.
    pub variant: Variant,
    /// Order ν > 0 (ν = |A| for the harmonic variants).
    pub nu: Float,
    /// Shift A (before the variant's sign).
    pub a: Rational,
    /// Interval.
    pub interval: Interval,
}

impl ModelOperator {
    /// Operator with validation of ν, ε and the normalization condition.
    pub fn new(variant: Variant, nu: Float, a: Rational, interval: Interval) -> Result<Self> {
        if let Interval::Truncated(eps) = &interval {
            if !(*eps > 0 && *eps < 1) {
                return Err(Error::Domain("ε must lie in (0,1)".into()));
            }
        }
        match variant {
            Variant::H0 | Variant::H1 => {
                if !matches!(interval, Interval::Truncated(_)) {
                    return Err(Error::Domain("harmonic operators live on [ε,1]".into()));
                }
            }
            _ => {
                if !(nu > 0) {
                    return Err(Error::Domain("ν must be positive".into()));
                }
            }
        }
        Ok(Self { variant, nu, a, interval })
    }

    /// Harmonic operator for degree k of an n-dimensional base.
    pub fn harmonic(variant: Variant, k: usize, n: usize, eps: Float, p: Precision) -> Result<Self> {
        if n % 2 == 0 {
            return Err(Error::Domain("base dimension must be odd".into()));
        }
        let a = Rational::from((n as i64 - 1, 2u64)) - rug::Integer::from(k);
        let nu = Float::with_val(p.bits(), a.clone().abs());
        Self::new(variant, nu, a, Interval::Truncated(eps))
    }

    /// Shift seen by the differential expression: ±A.
    pub fn effective_shift(&self) -> Rational {
        if self.variant.shift_sign() < 0 {
            Rational::from(-&self.a)
        } else {
            self.a.clone()
        }
    }

    /// Boundary conditions at (left endpoint, x = 1).
    pub fn boundary_tags(&self) -> (BoundaryCondition, BoundaryCondition) {
        let a = self.effective_shift();
        let robin_one = BoundaryCondition::Robin { coefficient: Rational::from(&a - Rational::from((1, 2))) };
        let robin_eps = BoundaryCondition::Robin { coefficient: -(a + Rational::from((1, 2))) };
        let left_robin = matches!(self.variant, Variant::Psi0 | Variant::Phi0 | Variant::H0);
        let left = match self.interval {
            Interval::Full => BoundaryCondition::Regular,
            Interval::Truncated(_) if left_robin => robin_eps,
            Interval::Truncated(_) => BoundaryCondition::Dirichlet,
        };
        let right = if self.variant.robin_at_one() { robin_one } else { BoundaryCondition::Dirichlet };
        (left, right)
    }
}

fn check_z(z: &Complex) -> Result<()> {
    if !(*z.real() > 0) {
        return Err(Error::Branch("spectral argument must satisfy Re z > 0".into()));
    }
    Ok(())
}

/// Principal square root z = √(−λ); λ on the positive real axis lies on the cut.
pub fn z_of_lambda(lambda: &Complex, p: Precision) -> Result<Complex> {
    if lambda.imag().is_zero() && *lambda.real() > 0 {
        return Err(Error::Branch(format!("λ = {} lies on the cut", lambda.real().to_f64())));
    }
    let mut z = Complex::with_val(p.bits() + 32, -lambda.clone());
    z.sqrt_mut();
    Ok(z)
}

/// Normalized solution f_{ψ,ν}(x, z) (sign +1) or f_{φ,ν}(x, z) (sign −1) with f(1, z) = 1.
pub fn normalized_solution(sign: i32, nu: &Float, a: &Rational, x: &Float, z: &Complex, p: Precision) -> Result<Complex> {
    if !(*nu > 0) {
        return Err(Error::Domain("ν must be positive".into()));
    }
    if !(*x > 0 && *x <= 1) {
        return Err(Error::Domain("x must lie in (0,1]".into()));
    }
    let w = p.bits() + 32;
    let wp = p.plus(10);
    let af = Float::with_val(w, a) * sign;
    let sx = Float::with_val(w, x.sqrt_ref());
    if z.real().is_zero() && z.imag().is_zero() {
        let up = Float::with_val(w, x.clone().pow(Float::with_val(w, nu + 0.5f64)));
        let down = Float::with_val(w, x.clone().pow(Float::with_val(w, 0.5f64 - nu)));
        let v = (Float::with_val(w, nu - &af) * up + Float::with_val(w, nu + &af) * down) / Float::with_val(w, nu * 2u32);
        return Ok(Complex::with_val(p.bits(), (v, 0)));
    }
    check_z(z)?;
    let at1 = BesselIK::new(nu, z, wp)?;
    let zx = Complex::with_val(w, z * x);
    let atx = BesselIK::new(nu, &zx, wp)?;
    let ci = Complex::with_val(w, z * &at1.ip) + Complex::with_val(w, &at1.i * &af);
    let ck = Complex::with_val(w, z * &at1.kp) + Complex::with_val(w, &at1.k * &af);
    let v = (ci * &atx.k - ck * &atx.i) * &sx;
    Ok(Complex::with_val(p.bits(), &v))
}

/// Dirichlet-normalized solution g(x, z) = √x [K_ν(z) I_ν(zx) − I_ν(z) K_ν(zx)], g(1)=0, g'(1)=1.
/// Returns (g(x), g'(x)).
pub fn dirichlet_solution(nu: &Float, x: &Float, z: &Complex, p: Precision) -> Result<(Complex, Complex)> {
    let w = p.bits() + 32;
    let wp = p.plus(10);
    let sx = Float::with_val(w, x.sqrt_ref());
    if z.real().is_zero() && z.imag().is_zero() {
        if nu.is_zero() {
            let lx = Float::with_val(w, x.ln_ref());
            let g = Float::with_val(w, &sx * &lx);
            let gp = (Float::with_val(w, &lx / 2u32) + 1u32) / &sx;
            return Ok((Complex::with_val(p.bits(), (g, 0)), Complex::with_val(p.bits(), (gp, 0))));
        }
        let e_up = Float::with_val(w, nu + 0.5f64);
        let e_dn = Float::with_val(w, 0.5f64 - nu);
        let up = Float::with_val(w, x.clone().pow(&e_up));
        let dn = Float::with_val(w, x.clone().pow(&e_dn));
        let two_nu = Float::with_val(w, nu * 2u32);
        let g = Float::with_val(w, &up - &dn) / &two_nu;
        let gp = (Float::with_val(w, &up * &e_up) - Float::with_val(w, &dn * &e_dn)) / x / &two_nu;
        return Ok((Complex::with_val(p.bits(), (g, 0)), Complex::with_val(p.bits(), (gp, 0))));
    }
    check_z(z)?;
    let at1 = BesselIK::new(nu, z, wp)?;
    let zx = Complex::with_val(w, z * x);
    let atx = BesselIK::new(nu, &zx, wp)?;
    let f = Complex::with_val(w, &at1.k * &atx.i) - Complex::with_val(w, &at1.i * &atx.k);
    let fp = Complex::with_val(w, &at1.k * &atx.ip) - Complex::with_val(w, &at1.i * &atx.kp);
    let g = Complex::with_val(w, &f * &sx);
    let gp = Complex::with_val(w, &f / 2u32) / &sx + Complex::with_val(w, &fp * z) * &sx;
    Ok((Complex::with_val(p.bits(), &g), Complex::with_val(p.bits(), &gp)))
}

/// A determinant ratio det(L + ν²z²)/det(L) together with its operator.
#[derive(Clone, Debug)]
pub struct DeterminantRatio {
    /// Operator.
    pub operator: ModelOperator,
    /// Spectral parameter z.
    pub z: Complex,
    /// Value of the ratio.
    pub value: Complex,
}

/// Full-cone ratios from the closed forms.
pub fn det_ratio_full_cone(variant: Variant, nu: &Float, a: &Rational, z: &Complex, p: Precision) -> Result<DeterminantRatio> {
    let op = ModelOperator::new(variant, nu.clone(), a.clone(), Interval::Full)?;
    let w = p.bits() + 32;
    let af = Float::with_val(w, &op.effective_shift());
    let value = match variant {
        Variant::Psi2 | Variant::Phi2 => {
            let denom_factor = Float::with_val(w, &af / nu) + 1u32;
            if denom_factor.is_zero() {
                return Err(Error::Domain("degenerate normalization: ν = ∓A".into()));
            }
            if z.is_zero() {
                Complex::with_val(w, (1, 0))
            } else {
                check_z(z)?;
                let nz = Complex::with_val(w, z * nu);
                let b = BesselIK::new(nu, &nz, p.plus(10))?;
                let pref = full_prefactor(nu, &nz, w, false)?;
                let core = Complex::with_val(w, &nz * &b.ip) + Complex::with_val(w, &b.i * &af);
                pref * core / denom_factor
            }
        }
        Variant::Psi0 | Variant::Phi0 => {
            if z.is_zero() {
                Complex::with_val(w, (1, 0))
            } else {
                check_z(z)?;
                let nz = Complex::with_val(w, z * nu);
                let b = BesselIK::new(nu, &nz, p.plus(10))?;
                full_prefactor(nu, &nz, w, true)? * b.i
            }
        }
        _ => return Err(Error::Domain("harmonic operators have no full-cone ratio".into())),
    };
    Ok(DeterminantRatio { operator: op, z: z.clone(), value: Complex::with_val(p.bits(), &value) })
}

/// 2^ν Γ(ν) (νz)^(−ν), or 2^ν Γ(ν+1) (νz)^(−ν) when `plus_one`.
fn full_prefactor(nu: &Float, nz: &Complex, w: u32, plus_one: bool) -> Result<Complex> {
    let wp = Precision::new(((w as f64) / std::f64::consts::LOG2_10) as u32).unwrap_or(Precision::DEFAULT);
    let g = if plus_one { gamma(&Float::with_val(w, nu + 1u32), wp)? } else { gamma(nu, wp)? };
    let two_nu = Float::with_val(w, Float::with_val(w, 2u32).pow(nu));
    let mut pw = Complex::with_val(w, nz.ln_ref());
    pw *= nu;
    pw = -pw;
    pw.exp_mut();
    Ok(pw * g * two_nu)
}

/// Truncated-cone ratio from normalized solutions.
///
/// Index 2: f(ε, νz)/f(ε, 0). Index 0: B_ε g(·, νz)/B_ε g(·, 0) with B_ε g = g' − (A+1/2) g/x.
/// Harmonic variants use ν = |A| and the unscaled spectral shift z², i.e. det(H + z²)/det(H).
pub fn det_ratio_truncated(variant: Variant, nu: &Float, a: &Rational, z: &Complex, eps: &Float, p: Precision) -> Result<DeterminantRatio> {
    let op = ModelOperator::new(variant, nu.clone(), a.clone(), Interval::Truncated(eps.clone()))?;
    let w = p.bits() + 32;
    let nz = match variant {
        Variant::H0 | Variant::H1 => Complex::with_val(w, z),
        _ => Complex::with_val(w, z * nu),
    };
    let zero = Complex::with_val(w, (0, 0));
    let value = match variant {
        Variant::Psi2 | Variant::Phi2 => {
            let s = variant.shift_sign();
            let num = normalized_solution(s, nu, a, eps, &nz, p.plus(10))?;
            let den = normalized_solution(s, nu, a, eps, &zero, p.plus(10))?;
            if den.is_zero() {
                return Err(Error::Domain("f(ε, 0) vanishes".into()));
            }
            num / den
        }
        Variant::Psi0 | Variant::Phi0 | Variant::H0 => {
            let shift = op.effective_shift();
            let num = robin_eps_value(nu, &shift, eps, &nz, p)?;
            let den = robin_eps_value(nu, &shift, eps, &zero, p)?;
            num / den
        }
        Variant::H1 => {
            let (num, _) = dirichlet_solution(nu, eps, &nz, p.plus(10))?;
            let (den, _) = dirichlet_solution(nu, eps, &zero, p.plus(10))?;
            num / den
        }
    };
    Ok(DeterminantRatio { operator: op, z: z.clone(), value: Complex::with_val(p.bits(), &value) })
}

/// B_ε g = g'(ε) − (A + 1/2) g(ε)/ε for the Dirichlet-normalized solution at spectral argument z.
fn robin_eps_value(nu: &Float, a: &Rational, eps: &Float, z: &Complex, p: Precision) -> Result<Complex> {
    let w = p.bits() + 32;
    let (g, gp) = dirichlet_solution(nu, eps, z, p.plus(10))?;
    let c = Float::with_val(w, a) + 0.5f64;
    Ok(gp - g * c / eps)
}

/// Truncated-cone ratios transcribed from the displayed K/I combinations.
pub fn det_ratio_truncated_display(variant: Variant, nu: &Float, a: &Rational, z: &Complex, eps: &Float, p: Precision) -> Result<Complex> {
    check_z(z)?;
    let w = p.bits() + 32;
    let s = variant.shift_sign();
    let af = Float::with_val(w, a) * s;
    let nz = Complex::with_val(w, z * nu);
    let nze = Complex::with_val(w, &nz * eps);
    let b1 = BesselIK::new(nu, &nz, p.plus(10))?;
    let be = BesselIK::new(nu, &nze, p.plus(10))?;
    let eps_up = Float::with_val(w, eps.clone().pow(nu));
    let eps_dn = Float::with_val(w, eps_up.recip_ref());
    let two_nu = Float::with_val(w, nu * 2u32);
    let nu_p = Float::with_val(w, nu + &af);
    let nu_m = Float::with_val(w, nu - &af);
    let den = Float::with_val(w, &nu_p * &eps_dn) + Float::with_val(w, &nu_m * &eps_up);
    let v = match variant {
        Variant::Psi2 | Variant::Phi2 => {
            let ci = Complex::with_val(w, &nz * &b1.ip) + Complex::with_val(w, &b1.i * &af);
            let ck = Complex::with_val(w, &nz * &b1.kp) + Complex::with_val(w, &b1.k * &af);
            let x = Complex::with_val(w, &ck / &ci) * Complex::with_val(w, &be.i / &be.k);
            Complex::with_val(w, &ci * &be.k) * &two_nu / &den * (Complex::with_val(w, 1u32) - x)
        }
        Variant::Psi0 | Variant::Phi0 => {
            let kk = Complex::with_val(w, -Complex::with_val(w, &nze * &be.kp)) + Complex::with_val(w, &be.k * &af);
            let ie = Complex::with_val(w, &nze * &be.ip) - Complex::with_val(w, &be.i * &af);
            let ke = Complex::with_val(w, &nze * &be.kp) - Complex::with_val(w, &be.k * &af);
            let x = Complex::with_val(w, &b1.k / &b1.i) * Complex::with_val(w, &ie / &ke);
            Complex::with_val(w, &kk * &b1.i) * &two_nu / &den * (Complex::with_val(w, 1u32) - x)
        }
        _ => return Err(Error::Domain("no displayed form for harmonic operators".into())),
    };
    Ok(Complex::with_val(p.bits(), &v))
}

/// det_ζ(H^k_{0,ε}) = 2 ε^(k − n/2).
pub fn h_det(k: usize, n: usize, eps: &Float, p: Precision) -> Result<Float> {
    if n % 2 == 0 {
        return Err(Error::Domain("base dimension must be odd".into()));
    }
    if k > n {
        return Err(Error::OutOfRange(format!("degree {k} exceeds dimension {n}")));
    }
    if !(*eps > 0 && *eps < 1) {
        return Err(Error::Domain("ε must lie in (0,1)".into()));
    }
    let w = p.bits() + 16;
    let e = Float::with_val(w, k as f64 - n as f64 / 2.0);
    Ok(Float::with_val(p.bits(), Float::with_val(w, eps.clone().pow(&e)) * 2u32))
}

struct TParts {
    r: Complex,
    x: [Complex; 4],
}

fn t_parts(nu: &Float, a: &Float, eps: &Float, z: &Complex, p: Precision) -> Result<TParts> {
    let w = p.bits() + 32;
    let wp = p.plus(10);
    let nz = Complex::with_val(w, z * nu);
    let nze = Complex::with_val(w, &nz * eps);
    let b1 = BesselIK::new(nu, &nz, wp)?;
    let be = BesselIK::new(nu, &nze, wp)?;
    let r = Complex::with_val(w, -Complex::with_val(w, &nze * &be.kp)) / &be.k;
    let ratio_e = Complex::with_val(w, &be.i / &be.k);
    let ratio_1 = Complex::with_val(w, &b1.k / &b1.i);
    let mut x = [Complex::new(w), Complex::new(w), Complex::new(w), Complex::new(w)];
    for (idx, sgn) in [(0usize, 1i32), (1, -1)] {
        let af = Float::with_val(w, a * sgn);
        let ck = Complex::with_val(w, &nz * &b1.kp) + Complex::with_val(w, &b1.k * &af);
        let ci = Complex::with_val(w, &nz * &b1.ip) + Complex::with_val(w, &b1.i * &af);
        x[idx] = Complex::with_val(w, &ck / &ci) * &ratio_e;
        let ie = Complex::with_val(w, &nze * &be.ip) + Complex::with_val(w, &be.i * &af);
        let ke = Complex::with_val(w, &nze * &be.kp) + Complex::with_val(w, &be.k * &af);
        x[idx + 2] = Complex::with_val(w, &ie / &ke) * &ratio_1;
    }
    Ok(TParts { r, x })
}

/// t^k_{ν,ε}(λ) from the cancelled Bessel representation, z = √(−λ).
///
/// The first three displayed terms are combined as log((r+A)(r−A)) − log(ν² − A²) with
/// r = −w K'_ν(w)/K_ν(w), w = νzε, which is the same quantity written without the
/// exponentially large factors. At λ = 0 the exact small-argument limits are used.
pub fn t_function(nu: &Float, a: &Rational, eps: &Float, lambda: &Complex, p: Precision) -> Result<Complex> {
    if !(*eps > 0 && *eps < 1) {
        return Err(Error::Domain("ε must lie in (0,1)".into()));
    }
    let w = p.bits() + 32;
    let af = Float::with_val(w, a);
    let nu2 = Float::with_val(w, nu * nu);
    let a2 = Float::with_val(w, &af * &af);
    if !(nu2 > a2) {
        return Err(Error::Domain("t-function requires ν > |A|".into()));
    }
    let one = Complex::with_val(w, (1, 0));
    let (r, x) = if lambda.is_zero() {
        let e2n = Float::with_val(w, eps.clone().pow(Float::with_val(w, nu * 2u32)));
        let nu_p = Float::with_val(w, nu + &af);
        let nu_m = Float::with_val(w, nu - &af);
        let q1 = Float::with_val(w, &nu_m / &nu_p) * &e2n;
        let q2 = Float::with_val(w, &nu_p / &nu_m) * &e2n;
        let r = Complex::with_val(w, (nu, 0));
        (r, [Complex::with_val(w, -q1.clone()), Complex::with_val(w, -q2.clone()), Complex::with_val(w, -q2), Complex::with_val(w, -q1)])
    } else {
        let z = z_of_lambda(lambda, p)?;
        let parts = t_parts(nu, &af, eps, &z, p)?;
        (parts.r, parts.x)
    };
    let rp = Complex::with_val(w, &r + &af);
    let rm = Complex::with_val(w, &r - &af);
    let mut t = Complex::with_val(w, rp.ln_ref()) + Complex::with_val(w, rm.ln_ref());
    t -= Float::with_val(w, &nu2 - &a2).ln();
    for (i, xi) in x.iter().enumerate() {
        let l = Complex::with_val(w, Complex::with_val(w, &one - xi).ln_ref());
        if i < 2 {
            t -= l;
        } else {
            t += l;
        }
    }
    Ok(Complex::with_val(p.bits(), &t))
}

/// t^k_{ν,ε}(λ) assembled from the eight determinant ratios.
pub fn t_function_from_determinants(nu: &Float, a: &Rational, eps: &Float, lambda: &Complex, p: Precision) -> Result<Complex> {
    let z = z_of_lambda(lambda, p)?;
    let w = p.bits() + 32;
    let mut t = Complex::new(w);
    let log = |c: Complex| Complex::with_val(w, c.ln_ref());
    for v in [Variant::Psi2, Variant::Phi2] {
        t -= log(det_ratio_truncated(v, nu, a, &z, eps, p)?.value);
        t += log(det_ratio_full_cone(v, nu, a, &z, p)?.value);
    }
    for v in [Variant::Psi0, Variant::Phi0] {
        t += log(det_ratio_truncated(v, nu, a, &z, eps, p)?.value);
        t -= log(det_ratio_full_cone(v, nu, a, &z, p)?.value);
    }
    Ok(Complex::with_val(p.bits(), &t))
}

/// Partial sum of the large-order expansion of t^k_{ν,ε}(λ) through (−ν)^(−R):
/// log(1 − ε²λ) + Σ_{r=1}^{R} (−ν)^(−r) [M_r(t_ε,−A) + M_r(t_ε,A) − 2D_r(t_ε) + (A^r + (−A)^r)/r].
pub fn t_function_large_nu(nu: &Float, a: &Rational, eps: &Float, lambda: &Complex, terms: usize, p: Precision) -> Result<Complex> {
    let w = p.bits() + 32;
    let te = t_epsilon(eps, lambda, p.plus(10))?;
    let e2 = Float::with_val(w, eps * eps);
    let base = Complex::with_val(w, Complex::with_val(w, lambda * &e2) - 1u32);
    let mut acc = Complex::with_val(w, (-base).ln_ref());
    let inv = Float::with_val(w, -Float::with_val(w, nu.recip_ref()));
    let mut pw = Float::with_val(w, 1u32);
    let minus_a = Rational::from(-a);
    for r in 1..=terms {
        pw *= &inv;
        let m = m_poly(r);
        let poly = m.at_shift(&minus_a).add(&m.at_shift(a)).sub(&d_poly(r).scale(&Rational::from(2)));
        let mut val = poly.evaluate_complex(&te, p.plus(10));
        if r % 2 == 0 {
            let mut ar = Rational::from(1);
            for _ in 0..r {
                ar *= a;
            }
            val += Float::with_val(w, Rational::from(ar * 2u32) / rug::Integer::from(r));
        }
        acc += val * &pw;
    }
    Ok(Complex::with_val(p.bits(), &acc))
}

/// b^k_ν = 2 log ε − log(1 − A²/ν²).
pub fn ab_constant(nu: &Float, a: &Rational, eps: &Float, p: Precision) -> Float {
    let w = p.bits() + 16;
    let af = Float::with_val(w, a);
    let q = Float::with_val(w, 1u32) - Float::with_val(w, &af * &af) / Float::with_val(w, nu * nu);
    Float::with_val(p.bits(), Float::with_val(w, eps.ln_ref()) * 2u32 - q.ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_at_one() {
        let p = Precision::new(30).unwrap();
        let nu = Float::with_val(p.bits(), 1.5);
        let z = Complex::with_val(p.bits(), (0.7, 0.2));
        let one = Float::with_val(p.bits(), 1u32);
        let v = normalized_solution(1, &nu, &Rational::from((1, 2)), &one, &z, p).unwrap();
        assert!((v.real().to_f64() - 1.0).abs() < 1e-25 && v.imag().to_f64().abs() < 1e-25);
    }

    #[test]
    fn zero_z_closed_form() {
        let p = Precision::new(30).unwrap();
        let nu = Float::with_val(p.bits(), 1u32);
        let x = Float::with_val(p.bits(), 0.25);
        let z = Complex::with_val(p.bits(), (0, 0));
        let v = normalized_solution(1, &nu, &Rational::from(0), &x, &z, p).unwrap();
        assert!((v.real().to_f64() - (0.125 + 2.0) / 2.0).abs() < 1e-25);
    }

    #[test]
    fn t_vanishes_at_zero() {
        let p = Precision::new(40).unwrap();
        let nu = Float::with_val(p.bits(), 2.5);
        let eps = Float::with_val(p.bits(), 0.5);
        let lam = Complex::with_val(p.bits(), (0, 0));
        let t = t_function(&nu, &Rational::from((1, 2)), &eps, &lam, p).unwrap();
        assert!(t.real().to_f64().abs() < 1e-35);
    }

    #[test]
    fn h_det_circle() {
        let p = Precision::new(30).unwrap();
        let v = h_det(0, 1, &Float::with_val(p.bits(), 0.25), p).unwrap();
        assert!((v.to_f64() - 4.0).abs() < 1e-25);
    }
}
