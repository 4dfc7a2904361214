//! Assembly of the cone, truncated-cone and difference torsions from the base data.
//!
//! With m = (n−1)/2, A_k = m − k and δ_k as in [`degree_data`], the per-degree residual is
//! R_k = Σ_{r=0}^{m} Res_{s=2r+1} ζ_{k,N}(s) · Σ_b w_{r,b}(A_k) ψ(b + r + ½), and
//! * ζ'_k(0, ε) = −ζ'(0, Δ_{k,ccl}) − 2 log ε · ζ(0, Δ_{k,ccl}) + ½ R_k,
//! * log T(truncated cone) = ½ Σ_k (−1)^k δ_k R_k,
//! * log T(cone) = Top − ½ log T(N) + ½ log T(truncated cone).

use crate::base_spectrum::{degree_data, BaseManifold};
use crate::berezin_anomaly::{integrated_anomaly, ExactScalar};
use crate::error::{Error, Result};
use crate::model_operators::h_det;
use crate::olver::residual_weights;
use crate::precision_math::{digamma, Precision};
use crate::zeta_engine::{base_torsion, decimal_string, zeta_ccl_at_zero, zeta_shifted_residue};
use rayon::prelude::*;
use rug::{Float, Rational};
use serde::Serialize;

/// Tolerance of the headline identity between the spectral and anomaly sides.
pub const HEADLINE_TOLERANCE: f64 = 1e-6;

/// Tolerance of the ε-independence audit.
pub const EPS_TOLERANCE: f64 = 1e-10;

/// Three-term decomposition of the cone torsion.
#[derive(Clone, Debug)]
pub struct TorsionBreakdown {
    /// Topological term Σ_{k≤m} ((−1)^k/2) b_k log(n − 2k + 1).
    pub top: Float,
    /// −½ log T(N).
    pub tors: Float,
    /// (rank/2) ∫_N B from the Berezin side.
    pub res_anomaly: Float,
    /// ½ log T(truncated cone) from the spectral residues.
    pub res_spectral: Float,
    /// top + tors + res_anomaly.
    pub total: Float,
}

/// ε-dependent pieces of the cone/truncated-cone difference.
#[derive(Clone, Debug)]
pub struct EpsilonReport {
    /// ε.
    pub eps: Float,
    /// ζ'_k(0, ε) for k = 0..=m.
    pub zeta_prime: Vec<Float>,
    /// Harmonic term.
    pub harmonic: Float,
    /// ½ Σ_k (−1)^k δ_k ζ'_k(0, ε) + harmonic.
    pub difference: Float,
    /// Coefficient of log ε in the ζ' part; must cancel the harmonic one.
    pub log_eps_coefficient_zeta: Float,
    /// Coefficient of log ε in the harmonic part.
    pub log_eps_coefficient_harmonic: Float,
}

/// Spectral and anomaly sides of the truncated-cone torsion.
#[derive(Clone, Debug)]
pub struct TruncatedTorsion {
    /// ½ Σ_k (−1)^k δ_k R_k.
    pub spectral: Float,
    /// rank · ∫_N B as an exact scalar, when the base has constant curvature.
    pub anomaly_exact: Option<ExactScalar>,
    /// Numerical value of the anomaly side.
    pub anomaly: Option<Float>,
    /// Whether the residues are approximate (file bases).
    pub approximate: bool,
}

impl TruncatedTorsion {
    /// |spectral − anomaly| when both sides are available.
    pub fn gap(&self) -> Option<f64> {
        self.anomaly.as_ref().map(|a| Float::with_val(a.prec(), &self.spectral - a).abs().to_f64())
    }
}

/// Top(N) = Σ_{k=0}^{m} ((−1)^k/2) b_k log(n − 2k + 1).
pub fn top_term(base: &BaseManifold, p: Precision) -> Float {
    let n = base.dim();
    let b = p.bits() + 16;
    let mut acc = Float::new(b);
    for k in 0..=base.half_dim() {
        let bk = base.betti_numbers()[k];
        if bk == 0 {
            continue;
        }
        let term = Float::with_val(b, (n - 2 * k + 1) as u32).ln() * bk / 2u32;
        if k % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Float::with_val(p.bits(), acc)
}

/// Residual R_k = Σ_{r=0}^{m} Res_{2r+1} ζ_{k,N} · Σ_b w_{r,b}(A_k) ψ(b + r + ½), and
/// whether any residue is approximate.
pub fn residual(base: &BaseManifold, k: usize, p: Precision) -> Result<(Float, bool)> {
    let m = base.half_dim();
    if k > m {
        return Err(Error::OutOfRange(format!("degree {k} exceeds (n−1)/2 = {m}")));
    }
    let dd = degree_data(base.dim(), k);
    let w = p.plus(10);
    let b = w.bits();
    let mut acc = Float::new(b);
    let mut approximate = false;
    for r in 0..=m {
        let point = zeta_shifted_residue(base, k, r, w)?;
        approximate |= point.approximate;
        if point.residue.is_zero() {
            continue;
        }
        let weights = residual_weights(r, &dd.a)?;
        let mut inner = Float::new(b);
        for (bi, wb) in weights.iter().enumerate() {
            if *wb == 0 {
                continue;
            }
            let arg = Float::with_val(b, Rational::from((2 * (bi + r) + 1, 2u32)));
            inner += digamma(&arg, w)? * Float::with_val(b, wb);
        }
        acc += inner * &point.residue;
    }
    Ok((Float::with_val(p.bits(), acc), approximate))
}

fn check_eps(eps: &Float) -> Result<()> {
    if !(*eps > 0 && *eps < 1) {
        return Err(Error::Domain("ε must lie in (0,1)".into()));
    }
    Ok(())
}

/// ζ'_k(0, ε) = −ζ'(0, Δ_{k,ccl}) − 2 log ε · ζ(0, Δ_{k,ccl}) + ½ R_k.
pub fn zeta_k_prime_zero(base: &BaseManifold, k: usize, eps: &Float, p: Precision) -> Result<Float> {
    check_eps(eps)?;
    let w = p.plus(10);
    let b = w.bits();
    let (z0, dz0) = zeta_ccl_at_zero(base, k, w)?;
    let (res, _) = residual(base, k, w)?;
    let log_eps = Float::with_val(b, eps.ln_ref());
    let v = -dz0 - Float::with_val(b, &log_eps * &z0) * 2u32 + res / 2u32;
    Ok(Float::with_val(p.bits(), v))
}

/// Harmonic term ½ log ε Σ_{k=0}^{n} (−1)^k k b_k − ½ Σ_{k≤m} (−1)^k b_k log(n − 2k + 1).
pub fn harmonic_term(base: &BaseManifold, eps: &Float, p: Precision) -> Result<Float> {
    check_eps(eps)?;
    let b = p.bits() + 16;
    let log_eps = Float::with_val(b, eps.ln_ref());
    let h2 = Float::with_val(b, &log_eps * harmonic_log_eps_coefficient(base));
    Ok(Float::with_val(p.bits(), h2 - top_term(base, p.plus(5))))
}

/// The H2 part recomputed from the determinants det(H^k) = 2ε^(k−n/2):
/// ½ Σ_{k=0}^{n} (−1)^k b_k log det(H^k), minus the H1 part.
pub fn harmonic_term_from_determinants(base: &BaseManifold, eps: &Float, p: Precision) -> Result<Float> {
    check_eps(eps)?;
    let n = base.dim();
    let b = p.bits() + 16;
    let mut acc = Float::new(b);
    for k in 0..=n {
        let bk = base.betti_numbers()[k];
        if bk == 0 {
            continue;
        }
        let term = h_det(k, n, eps, p.plus(5))?.ln() * bk / 2u32;
        if k % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(Float::with_val(p.bits(), acc - top_term(base, p.plus(5))))
}

/// ½ Σ_{k=0}^{n} (−1)^k k b_k.
pub fn harmonic_log_eps_coefficient(base: &BaseManifold) -> Rational {
    let mut acc = Rational::new();
    for (k, bk) in base.betti_numbers().iter().enumerate() {
        let t = Rational::from(k as u64 * bk);
        if k % 2 == 0 {
            acc += t;
        } else {
            acc -= t;
        }
    }
    acc / 2u32
}

/// Difference log T(truncated cone) − log T(cone) assembled at one ε.
pub fn torsion_difference(base: &BaseManifold, eps: &Float, p: Precision) -> Result<EpsilonReport> {
    check_eps(eps)?;
    let w = p.plus(10);
    let b = w.bits();
    let m = base.half_dim();
    let zeta_prime: Vec<Float> =
        (0..=m).into_par_iter().map(|k| zeta_k_prime_zero(base, k, eps, w)).collect::<Result<_>>()?;
    let mut sum = Float::new(b);
    let mut coef = Float::new(b);
    for (k, z) in zeta_prime.iter().enumerate() {
        let dd = degree_data(base.dim(), k);
        let delta = Float::with_val(b, &dd.delta);
        let (z0, _) = zeta_ccl_at_zero(base, k, w)?;
        // ½ δ_k ζ'_k and its log ε coefficient ½ δ_k (−2 ζ(0)).
        let t = Float::with_val(b, z * &delta) / 2u32;
        let c = -Float::with_val(b, &z0 * &delta);
        if k % 2 == 0 {
            sum += t;
            coef += c;
        } else {
            sum -= t;
            coef -= c;
        }
    }
    let harmonic = harmonic_term(base, eps, w)?;
    let difference = Float::with_val(b, &sum + &harmonic);
    Ok(EpsilonReport {
        eps: eps.clone(),
        zeta_prime: zeta_prime.into_iter().map(|z| Float::with_val(p.bits(), z)).collect(),
        harmonic: Float::with_val(p.bits(), harmonic),
        difference: Float::with_val(p.bits(), difference),
        log_eps_coefficient_zeta: Float::with_val(p.bits(), coef),
        log_eps_coefficient_harmonic: Float::with_val(p.bits(), harmonic_log_eps_coefficient(base)),
    })
}

/// Spectral side ½ Σ_k (−1)^k δ_k R_k and, for constant-curvature bases, rank · ∫_N B.
pub fn truncated_cone_torsion(base: &BaseManifold, p: Precision) -> Result<TruncatedTorsion> {
    let w = p.plus(10);
    let b = w.bits();
    let m = base.half_dim();
    let residuals: Vec<(Float, bool)> = (0..=m).into_par_iter().map(|k| residual(base, k, w)).collect::<Result<_>>()?;
    let mut acc = Float::new(b);
    let mut approximate = false;
    for (k, (r, a)) in residuals.iter().enumerate() {
        approximate |= a;
        let dd = degree_data(base.dim(), k);
        let t = Float::with_val(b, r * Float::with_val(b, &dd.delta)) / 2u32;
        if k % 2 == 0 {
            acc += t;
        } else {
            acc -= t;
        }
    }
    let (anomaly_exact, anomaly) = match integrated_anomaly(base) {
        Ok(x) => {
            let v = x.evaluate(&Rational::from(1), p)?;
            (Some(x), Some(v))
        }
        Err(Error::Unsupported(_)) => (None, None),
        Err(e) => return Err(e),
    };
    Ok(TruncatedTorsion { spectral: Float::with_val(p.bits(), acc), anomaly_exact, anomaly, approximate })
}

/// Cone torsion Top − ½ log T(N) + (rank/2) ∫_N B, with the residual term computed both ways.
pub fn cone_torsion(base: &BaseManifold, p: Precision) -> Result<TorsionBreakdown> {
    let w = p.plus(10);
    let b = w.bits();
    let top = top_term(base, w);
    let tors = -base_torsion(base, w)? / 2u32;
    let trunc = truncated_cone_torsion(base, w)?;
    let anomaly = trunc
        .anomaly
        .ok_or_else(|| Error::Unsupported(format!("anomaly side of {} needs constant curvature", base.label())))?;
    let res_anomaly = anomaly / 2u32;
    let res_spectral = Float::with_val(b, &trunc.spectral / 2u32);
    let total = Float::with_val(b, &top + &tors) + &res_anomaly;
    Ok(TorsionBreakdown {
        top: Float::with_val(p.bits(), top),
        tors: Float::with_val(p.bits(), tors),
        res_anomaly: Float::with_val(p.bits(), res_anomaly),
        res_spectral: Float::with_val(p.bits(), res_spectral),
        total: Float::with_val(p.bits(), total),
    })
}

/// Torsion norm of the cone with product metric near the boundary:
/// Top − ½ log T(N) + harmonic_norm_log.
pub fn product_metric_norm_shift(base: &BaseManifold, harmonic_norm_log: &Float, p: Precision) -> Result<Float> {
    let w = p.plus(10);
    let v = top_term(base, w) - base_torsion(base, w)? / 2u32 + harmonic_norm_log;
    Ok(Float::with_val(p.bits(), v))
}

/// Breakdown values as decimal strings.
#[derive(Clone, Debug, Serialize)]
pub struct BreakdownJson {
    /// Topological term.
    pub top: Option<String>,
    /// −½ log T(N).
    pub tors: Option<String>,
    /// Spectral residual ½ log T(truncated cone).
    pub res_spectral: Option<String>,
    /// Anomaly residual (rank/2) ∫ B.
    pub res_anomaly: Option<String>,
    /// Total cone torsion.
    pub total: Option<String>,
}

/// Audit values.
#[derive(Clone, Debug, Serialize)]
pub struct AuditJson {
    /// |difference(ε=1/2) − difference(ε=1/4)|.
    pub eps_cancel: Option<String>,
    /// |spectral − anomaly| of the truncated-cone torsion.
    pub headline_gap: Option<String>,
    /// Whether every available audit is within tolerance.
    pub passed: bool,
}

/// Full torsion report.
#[derive(Clone, Debug, Serialize)]
pub struct TorsionReport {
    /// Base label.
    pub base: String,
    /// Base dimension.
    pub n: usize,
    /// Bundle rank.
    pub rank: u64,
    /// Working precision in digits.
    pub precision: u32,
    /// Whether residues come from a fitted (approximate) spectrum.
    pub approximate: bool,
    /// Pieces that could not be computed, with the reason.
    pub unavailable: Vec<String>,
    /// Breakdown.
    pub breakdown: BreakdownJson,
    /// Audits.
    pub audits: AuditJson,
}

fn fmt(x: &Float, p: Precision) -> String {
    decimal_string(x, p.digits())
}

/// Computes every available piece for a base and audits the internal identities.
pub fn torsion_report(base: &BaseManifold, eps_values: &[Float], p: Precision) -> Result<TorsionReport> {
    let mut unavailable = Vec::new();
    let top = top_term(base, p);
    let tors = match base_torsion(base, p) {
        Ok(t) => Some(-t / 2u32),
        Err(Error::Unsupported(msg)) => {
            unavailable.push(format!("tors: {msg}"));
            None
        }
        Err(e) => return Err(e),
    };
    let trunc = match truncated_cone_torsion(base, p) {
        Ok(t) => Some(t),
        Err(Error::Unsupported(msg)) => {
            unavailable.push(format!("res_spectral: {msg}"));
            None
        }
        Err(e) => return Err(e),
    };
    let approximate = trunc.as_ref().map(|t| t.approximate).unwrap_or(false);
    let res_spectral = trunc.as_ref().map(|t| Float::with_val(p.bits(), &t.spectral / 2u32));
    let res_anomaly = trunc.as_ref().and_then(|t| t.anomaly.as_ref()).map(|a| Float::with_val(p.bits(), a / 2u32));
    if res_anomaly.is_none() {
        unavailable.push("res_anomaly: no constant-curvature anomaly formula".into());
    }
    let total = match (&tors, &res_anomaly) {
        (Some(t), Some(r)) => Some(Float::with_val(p.bits(), &top + t) + r),
        _ => None,
    };
    let headline_gap = trunc.as_ref().and_then(|t| t.gap());
    let mut passed = headline_gap.map(|g| g <= HEADLINE_TOLERANCE).unwrap_or(true);
    let eps_cancel = if base.has_closed_form() && eps_values.len() >= 2 {
        let reports: Vec<EpsilonReport> =
            eps_values.iter().map(|e| torsion_difference(base, e, p)).collect::<Result<_>>()?;
        let mut worst = 0.0f64;
        for r in &reports[1..] {
            let d = Float::with_val(p.bits(), &r.difference - &reports[0].difference).abs().to_f64();
            worst = worst.max(d);
        }
        passed &= worst <= EPS_TOLERANCE;
        Some(worst)
    } else {
        None
    };
    Ok(TorsionReport {
        base: base.label(),
        n: base.dim(),
        rank: base.rank(),
        precision: p.digits(),
        approximate,
        unavailable,
        breakdown: BreakdownJson {
            top: Some(fmt(&top, p)),
            tors: tors.as_ref().map(|x| fmt(x, p)),
            res_spectral: res_spectral.as_ref().map(|x| fmt(x, p)),
            res_anomaly: res_anomaly.as_ref().map(|x| fmt(x, p)),
            total: total.as_ref().map(|x| fmt(x, p)),
        },
        audits: AuditJson {
            eps_cancel: eps_cancel.map(|g| format!("{g:.3e}")),
            headline_gap: headline_gap.map(|g| format!("{g:.3e}")),
            passed,
        },
    })
}
