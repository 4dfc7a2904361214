//! Verification suites run by `conetorsion verify`.

use anyhow::{bail, Result};
use conetorsion_core::base_spectrum::{coclosed_spectrum, BaseManifold};
use conetorsion_core::berezin_anomaly::{anomaly_sides, scaling_invariant, CollarMetric};
use conetorsion_core::model_operators::oracle::{det_ratio_oracle, h_det_oracle};
use conetorsion_core::model_operators::{
    ab_constant, det_ratio_truncated, h_det, t_function, t_function_large_nu, ModelOperator, Interval, Variant,
};
use conetorsion_core::olver::{d_poly, dm_shift_term, m_poly};
use conetorsion_core::precision_math::{BesselIK, Precision};
use conetorsion_core::torsion::{torsion_difference, truncated_cone_torsion};
use rug::{Complex, Float, Rational};
use serde_json::{json, Value};

/// Names of all suites in run order.
pub const SUITES: [&str; 11] =
    ["dm", "wronskian", "detratio", "hdet", "prop-p", "prop-ab", "large-nu", "eps", "headline", "scaling", "duality"];

/// One verification outcome.
pub struct Check {
    /// Suite name.
    pub suite: &'static str,
    /// Check label.
    pub check: String,
    /// Measured value.
    pub value: String,
    /// Tolerance or expected value.
    pub tolerance: String,
    /// Outcome.
    pub pass: bool,
}

impl Check {
    /// JSON line for the check.
    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite,
            "check": self.check,
            "value": self.value,
            "tolerance": self.tolerance,
            "pass": self.pass,
        })
    }
}

/// Options shared by the suites.
pub struct SuiteOptions {
    /// Working precision.
    pub precision: Precision,
    /// Largest Olver index for the DM suite.
    pub rmax: usize,
    /// Full detratio grid instead of the small one.
    pub full_grid: bool,
}

/// Runs one suite by name.
pub fn run(name: &str, opts: &SuiteOptions) -> Result<Vec<Check>> {
    match name {
        "dm" => dm(opts),
        "wronskian" => wronskian(opts),
        "detratio" => detratio(opts),
        "hdet" => hdet(opts),
        "prop-p" => prop_p(opts),
        "prop-ab" => prop_ab(opts),
        "large-nu" => large_nu(opts),
        "eps" => eps(opts),
        "headline" => headline(opts),
        "scaling" => scaling(),
        "duality" => duality(),
        other => bail!("unknown suite '{other}'; expected one of {}", SUITES.join(", ")),
    }
}

fn le(suite: &'static str, check: String, value: f64, tol: f64) -> Check {
    Check { suite, check, value: format!("{value:.3e}"), tolerance: format!("{tol:.0e}"), pass: value <= tol }
}

fn dm(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let shifts = [Rational::from(0), Rational::from(1), Rational::from(-1), Rational::from(2), Rational::from(-2), Rational::from((7, 2))];
    let one = Rational::from(1);
    let mut out = Vec::new();
    for r in 1..=opts.rmax {
        for a in &shifts {
            let m = m_poly(r).evaluate_rational(&one, a);
            let d = d_poly(r).evaluate_rational(&one);
            let gap = m - d + dm_shift_term(a, r);
            out.push(Check {
                suite: "dm",
                check: format!("r={r} A={a}"),
                value: gap.to_string(),
                tolerance: "0".into(),
                pass: gap == 0,
            });
        }
    }
    Ok(out)
}

fn wronskian(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let p = opts.precision;
    let b = p.bits();
    let grid = [
        (0.5, (0.3, 0.0)),
        (1.0, (1.0, 0.0)),
        (1.5, (2.0, 0.5)),
        (2.5, (0.7, -1.2)),
        (3.0, (5.0, 3.0)),
        (4.25, (0.1, 0.05)),
        (0.0, (1.5, 0.0)),
        (7.0, (12.0, 1.0)),
        (10.5, (3.0, 2.0)),
        (2.0, (30.0, -10.0)),
        (0.75, (0.01, 0.0)),
        (20.0, (20.0, 5.0)),
    ];
    let mut out = Vec::new();
    for (nu, (x, y)) in grid {
        let nuf = Float::with_val(b, nu);
        let z = Complex::with_val(b, (x, y));
        let f = BesselIK::new(&nuf, &z, p)?;
        let w = Complex::with_val(b, &f.k * &f.ip) - Complex::with_val(b, &f.kp * &f.i);
        let gap = (Complex::with_val(b, &z * &w) - 1u32).abs().real().to_f64();
        out.push(le("wronskian", format!("nu={nu} z={x}{y:+}i"), gap, 1e-40));
    }
    Ok(out)
}

fn detratio(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let p = Precision::new(25)?;
    let b = p.bits();
    let (nus, shifts, epss, zs): (Vec<f64>, Vec<Rational>, Vec<f64>, Vec<f64>) = if opts.full_grid {
        (
            vec![1.5, 2.5, 4.0],
            vec![Rational::from((-1, 2)), Rational::from((1, 2)), Rational::from(1)],
            vec![0.25, 1.0 / 3.0, 0.5],
            vec![0.5, 2.0],
        )
    } else {
        (vec![1.5], vec![Rational::from((1, 2))], vec![1.0 / 3.0], vec![1.0])
    };
    let variants = [Variant::Psi2, Variant::Phi2, Variant::Psi0, Variant::Phi0];
    let mut out = Vec::new();
    let mut idx = 0usize;
    for nu in &nus {
        for a in &shifts {
            for e in &epss {
                for z in &zs {
                    let variant = variants[idx % variants.len()];
                    idx += 1;
                    let nuf = Float::with_val(b, *nu);
                    let ef = Float::with_val(b, *e);
                    let zc = Complex::with_val(b, (*z, 0));
                    let closed = det_ratio_truncated(variant, &nuf, a, &zc, &ef, p)?.value;
                    let op = ModelOperator::new(variant, nuf.clone(), a.clone(), Interval::Truncated(ef.clone()))?;
                    let mu = Complex::with_val(b, &zc * &nuf).square();
                    let oracle = det_ratio_oracle(&op, &mu, 200, p)?;
                    let gap = conetorsion_core::precision_math::rel_diff(&closed, &oracle);
                    out.push(le("detratio", format!("{variant:?} nu={nu} A={a} eps={e:.4} z={z}"), gap, 1e-6));
                }
            }
        }
    }
    Ok(out)
}

fn hdet(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let p = opts.precision;
    let mut out = Vec::new();
    for n in [1usize, 3] {
        for k in 0..=n {
            for e in [0.5, 0.25] {
                let closed = h_det(k, n, &Float::with_val(p.bits(), e), p)?.to_f64();
                let oracle = h_det_oracle(k, n, e, 20_000)?;
                out.push(le("hdet", format!("n={n} k={k} eps={e}"), ((closed - oracle) / closed).abs(), 1e-8));
            }
        }
    }
    Ok(out)
}

fn prop_p(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let p = opts.precision;
    let b = p.bits();
    let zero = Complex::with_val(b, (0, 0));
    let mut out = Vec::new();
    for nu in [1.5, 3.0, 7.25] {
        for (a, e) in [(Rational::from((1, 2)), 0.5), (Rational::from(0), 0.25), (Rational::from(-1), 0.1)] {
            let t = t_function(&Float::with_val(b, nu), &a, &Float::with_val(b, e), &zero, p)?;
            out.push(le("prop-p", format!("nu={nu} A={a} eps={e}"), t.abs().real().to_f64(), 1e-20));
        }
    }
    Ok(out)
}

fn prop_ab(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let p = opts.precision;
    let b = p.bits();
    let mut out = Vec::new();
    for (nu, a, e) in [(1.5, Rational::from((1, 2)), 0.5), (2.5, Rational::from(1), 0.25)] {
        let nuf = Float::with_val(b, nu);
        let ef = Float::with_val(b, e);
        let bc = ab_constant(&nuf, &a, &ef, p).to_f64();
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for i in 0..=8 {
            let x = 10f64.powf(2.0 + 0.5 * i as f64);
            let t = t_function(&nuf, &a, &ef, &Complex::with_val(b, (-x, 0)), p)?;
            xs.push(x.ln());
            ys.push((t.real().to_f64() - x.ln() - bc).abs().ln());
        }
        let slope = least_squares_slope(&xs, &ys);
        out.push(Check {
            suite: "prop-ab",
            check: format!("nu={nu} A={a} eps={e}"),
            value: format!("{slope:.4}"),
            tolerance: "-0.5±0.1".into(),
            pass: (slope + 0.5).abs() <= 0.1,
        });
    }
    Ok(out)
}

/// Ordinary least-squares slope.
pub fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

fn large_nu(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let p = opts.precision;
    let b = p.bits();
    let a = Rational::from((1, 2));
    let e = Float::with_val(b, 0.5);
    let lam = Complex::with_val(b, (-1, 0));
    let mut out = Vec::new();
    for r in 1..=4usize {
        let mut rems = Vec::new();
        for nu in [20.0, 40.0, 80.0] {
            let nuf = Float::with_val(b, nu);
            let t = t_function(&nuf, &a, &e, &lam, p)?;
            let s = t_function_large_nu(&nuf, &a, &e, &lam, r, p)?;
            rems.push(Complex::with_val(b, &t - &s).abs().real().to_f64());
        }
        let order = (rems[1] / rems[2]).log2();
        out.push(Check {
            suite: "large-nu",
            check: format!("R={r}"),
            value: format!("{order:.4}"),
            tolerance: format!("{}±0.2", r + 1),
            pass: (order - (r + 1) as f64).abs() <= 0.2,
        });
    }
    Ok(out)
}

fn eps(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let p = opts.precision;
    let mut out = Vec::new();
    for d in ["sphere:1", "sphere:3"] {
        let base = BaseManifold::parse(d, 1)?;
        let a = torsion_difference(&base, &Float::with_val(p.bits(), 0.5), p)?;
        let c = torsion_difference(&base, &Float::with_val(p.bits(), 0.25), p)?;
        let gap = Float::with_val(p.bits(), &a.difference - &c.difference).abs().to_f64();
        out.push(le("eps", d.to_string(), gap, 1e-10));
    }
    Ok(out)
}

fn headline(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let p = opts.precision;
    let mut out = Vec::new();
    for d in ["sphere:1", "sphere:3"] {
        let base = BaseManifold::parse(d, 1)?;
        let t = truncated_cone_torsion(&base, p)?;
        let gap = t.gap().unwrap_or(f64::INFINITY);
        out.push(le("headline", format!("{d} spectral={:.12} anomaly={}", t.spectral.to_f64(), t.anomaly_exact.map(|x| x.to_string()).unwrap_or_default()), gap, 1e-6));
    }
    Ok(out)
}

fn scaling() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for n in [1usize, 3, 5] {
        let cm = CollarMetric::cone_outer(n, Rational::from(1))?;
        for s in [Rational::from(2), Rational::from((1, 3)), Rational::from(10)] {
            let ok = scaling_invariant(&cm, &s)?;
            out.push(Check {
                suite: "scaling",
                check: format!("n={n} s={s}"),
                value: if ok { "equal".into() } else { "different".into() },
                tolerance: "exact".into(),
                pass: ok,
            });
        }
        let (b1, be) = anomaly_sides(n, &Rational::from(1), &Rational::from((1, 4)))?;
        out.push(Check {
            suite: "scaling",
            check: format!("n={n} antisymmetry"),
            value: format!("{b1} | {be}"),
            tolerance: "exact".into(),
            pass: b1.add(&be).is_zero(),
        });
    }
    Ok(out)
}

fn duality() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for d in ["sphere:1", "sphere:3", "torus:3"] {
        let base = BaseManifold::parse(d, 1)?;
        let n = base.dim();
        for k in 0..n {
            let a = coclosed_spectrum(&base, k, 50.0)?;
            let b = coclosed_spectrum(&base, n - 1 - k, 50.0)?;
            let same = a.len() == b.len() && a.iter().zip(&b).all(|(x, y)| x.eta == y.eta && x.multiplicity == y.multiplicity);
            out.push(Check {
                suite: "duality",
                check: format!("{d} k={k} vs {}", n - 1 - k),
                value: format!("{} lines", a.len()),
                tolerance: "exact".into(),
                pass: same,
            });
        }
    }
    Ok(out)
}
