//! Exact-rational Olver polynomials u_r, v_r and the coefficients D_r, M_r of
//! the logarithms of the uniform large-order Bessel expansions.
//!
//! For I_ν(νz) ~ e^{νη}/√(2πν)(1+z²)^{-1/4} Σ u_r(t)/ν^r with t = (1+z²)^{-1/2},
//! log(1 + Σ_{r≥1} u_r/(±ν)^r) ~ Σ D_r(t)/(±ν)^r and
//! log(1 + Σ_{r≥1} v_r/(±ν)^r + (A/(±ν)) t (1 + Σ u_r/(±ν)^r)) ~ Σ M_r(t,A)/(±ν)^r.

use crate::error::{Error, Result};
use crate::precision_math::Precision;
use rug::{Complex, Float, Integer, Rational};
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::{OnceLock, RwLock};

/// Polynomial in one variable with exact rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RationalPolynomial {
    coeffs: BTreeMap<u32, Rational>,
}

impl RationalPolynomial {
    /// The zero polynomial.
    pub fn zero() -> Self {
        Self::default()
    }

    /// The constant polynomial 1.
    pub fn one() -> Self {
        Self::monomial(0, Rational::from(1))
    }

    /// c·t^e.
    pub fn monomial(e: u32, c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(e, c);
        p
    }

    /// Polynomial from (exponent, coefficient) pairs; repeated exponents are summed.
    pub fn from_terms<I: IntoIterator<Item = (u32, Rational)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: u32, c: Rational) {
        if c == 0 {
            return;
        }
        let entry = self.coeffs.entry(e).or_insert_with(Rational::new);
        *entry += c;
        if *entry == 0 {
            self.coeffs.remove(&e);
        }
    }

    /// Coefficient of t^e.
    pub fn coefficient(&self, e: u32) -> Rational {
        self.coeffs.get(&e).cloned().unwrap_or_default()
    }

    /// Nonzero (exponent, coefficient) pairs in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (u32, &Rational)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    /// Exponents carrying a nonzero coefficient.
    pub fn support(&self) -> Vec<u32> {
        self.coeffs.keys().copied().collect()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    /// True for the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Sum.
    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (e, c) in &o.coeffs {
            r.add_term(*e, c.clone());
        }
        r
    }

    /// Difference.
    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&Rational::from(-1)))
    }

    /// Product.
    pub fn mul(&self, o: &Self) -> Self {
        let mut r = Self::zero();
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &o.coeffs {
                r.add_term(e1 + e2, Rational::from(c1 * c2));
            }
        }
        r
    }

    /// Multiplication by a rational scalar.
    pub fn scale(&self, s: &Rational) -> Self {
        Self::from_terms(self.coeffs.iter().map(|(e, c)| (*e, Rational::from(c * s))))
    }

    /// Multiplication by t^k.
    pub fn shift(&self, k: u32) -> Self {
        Self { coeffs: self.coeffs.iter().map(|(e, c)| (e + k, c.clone())).collect() }
    }

    /// Derivative in t.
    pub fn derivative(&self) -> Self {
        Self::from_terms(
            self.coeffs.iter().filter(|(e, _)| **e > 0).map(|(e, c)| (e - 1, Rational::from(c * *e))),
        )
    }

    /// Antiderivative vanishing at t = 0.
    pub fn integral(&self) -> Self {
        Self::from_terms(self.coeffs.iter().map(|(e, c)| (e + 1, Rational::from(c / (e + 1)))))
    }

    /// Substitution t → −t.
    pub fn reflect(&self) -> Self {
        Self::from_terms(
            self.coeffs.iter().map(|(e, c)| (*e, if e % 2 == 1 { Rational::from(-c) } else { c.clone() })),
        )
    }

    /// Exact value at a rational point.
    pub fn evaluate_rational(&self, t: &Rational) -> Rational {
        let mut acc = Rational::new();
        let mut last = self.degree().unwrap_or(0);
        for (e, c) in self.coeffs.iter().rev() {
            for _ in *e..last {
                acc *= t;
            }
            acc += c;
            last = *e;
        }
        for _ in 0..last {
            acc *= t;
        }
        acc
    }

    /// Value at a real point.
    pub fn evaluate_real(&self, t: &Float, p: Precision) -> Float {
        let w = p.bits() + 32;
        let c = Complex::with_val(w, (t, 0));
        Float::with_val(p.bits(), self.evaluate_complex(&c, p).real())
    }

    /// Value at a complex point by Horner's scheme.
    pub fn evaluate_complex(&self, t: &Complex, p: Precision) -> Complex {
        let w = p.bits() + 32;
        let mut acc = Complex::new(w);
        let top = match self.degree() {
            Some(d) => d,
            None => return Complex::new(p.bits()),
        };
        for e in (0..=top).rev() {
            acc *= t;
            if let Some(c) = self.coeffs.get(&e) {
                acc += Float::with_val(w, c);
            }
        }
        Complex::with_val(p.bits(), &acc)
    }
}

impl std::fmt::Display for RationalPolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match e {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*t")?,
                _ => write!(f, "({c})*t^{e}")?,
            }
        }
        Ok(())
    }
}

/// Polynomial in t whose coefficients are exact polynomials in the shift A.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ShiftPolynomial {
    coeffs: BTreeMap<u32, RationalPolynomial>,
}

impl ShiftPolynomial {
    fn from_bivariate(b: &Bivariate) -> Self {
        let mut coeffs: BTreeMap<u32, RationalPolynomial> = BTreeMap::new();
        for ((te, ae), c) in &b.0 {
            let entry = coeffs.entry(*te).or_default();
            *entry = entry.add(&RationalPolynomial::monomial(*ae, c.clone()));
        }
        coeffs.retain(|_, v| !v.is_zero());
        Self { coeffs }
    }

    /// Coefficient of t^e as a polynomial in A.
    pub fn coefficient(&self, e: u32) -> RationalPolynomial {
        self.coeffs.get(&e).cloned().unwrap_or_default()
    }

    /// Exponents of t carrying a nonzero coefficient.
    pub fn support(&self) -> Vec<u32> {
        self.coeffs.keys().copied().collect()
    }

    /// The polynomial in t obtained by fixing A.
    pub fn at_shift(&self, a: &Rational) -> RationalPolynomial {
        RationalPolynomial::from_terms(self.coeffs.iter().map(|(e, c)| (*e, c.evaluate_rational(a))))
    }

    /// Exact value at rational (t, A).
    pub fn evaluate_rational(&self, t: &Rational, a: &Rational) -> Rational {
        self.at_shift(a).evaluate_rational(t)
    }
}

/// Internal bivariate polynomial keyed by (t exponent, A exponent).
#[derive(Clone, Debug, Default)]
struct Bivariate(BTreeMap<(u32, u32), Rational>);

impl Bivariate {
    fn from_t(p: &RationalPolynomial, a_exp: u32) -> Self {
        let mut b = Bivariate::default();
        for (e, c) in p.terms() {
            b.add_term((e, a_exp), c.clone());
        }
        b
    }

    fn add_term(&mut self, k: (u32, u32), c: Rational) {
        if c == 0 {
            return;
        }
        let entry = self.0.entry(k).or_insert_with(Rational::new);
        *entry += c;
        if *entry == 0 {
            self.0.remove(&k);
        }
    }

    fn add_scaled(&mut self, o: &Bivariate, s: &Rational) {
        for (k, c) in &o.0 {
            self.add_term(*k, Rational::from(c * s));
        }
    }

    fn mul(&self, o: &Bivariate) -> Bivariate {
        let mut r = Bivariate::default();
        for ((t1, a1), c1) in &self.0 {
            for ((t2, a2), c2) in &o.0 {
                r.add_term((t1 + t2, a1 + a2), Rational::from(c1 * c2));
            }
        }
        r
    }

    fn a_free(&self) -> RationalPolynomial {
        RationalPolynomial::from_terms(self.0.iter().filter(|((_, a), _)| *a == 0).map(|((t, _), c)| (*t, c.clone())))
    }
}

/// Coefficients L_r of log(1 + Σ_{r≥1} s_r ε^r), from r L_r = r s_r − Σ_{j<r} j L_j s_{r−j}.
fn formal_log(s: &[Bivariate]) -> Vec<Bivariate> {
    let mut l: Vec<Bivariate> = vec![Bivariate::default()];
    for r in 1..s.len() {
        let mut acc = s[r].clone();
        for j in 1..r {
            let prod = l[j].mul(&s[r - j]);
            acc.add_scaled(&prod, &Rational::from((-(j as i64), r as u64)));
        }
        l.push(acc);
    }
    l
}

#[derive(Default)]
struct Tables {
    u: Vec<RationalPolynomial>,
    v: Vec<RationalPolynomial>,
    d: Vec<RationalPolynomial>,
    m: Vec<ShiftPolynomial>,
}

impl Tables {
    fn extend_uv(&mut self, r: usize) {
        if self.u.is_empty() {
            self.u.push(RationalPolynomial::one());
            self.v.push(RationalPolynomial::one());
        }
        let half_t2_one_minus_t2 = RationalPolynomial::from_terms([(2, Rational::from((1, 2))), (4, Rational::from((-1, 2)))]);
        let weight = RationalPolynomial::from_terms([(0, Rational::from((1, 8))), (2, Rational::from((-5, 8)))]);
        let t3_minus_t = RationalPolynomial::from_terms([(3, Rational::from(1)), (1, Rational::from(-1))]);
        while self.u.len() <= r {
            let k = self.u.len();
            let prev = &self.u[k - 1];
            let next = half_t2_one_minus_t2.mul(&prev.derivative()).add(&weight.mul(prev).integral());
            // v_k = u_k + t(t²−1)(½u_{k−1} + t u'_{k−1})
            let inner = prev.scale(&Rational::from((1, 2))).add(&prev.derivative().shift(1));
            let v = next.add(&t3_minus_t.mul(&inner));
            self.u.push(next);
            self.v.push(v);
        }
    }

    fn extend_dm(&mut self, r: usize) {
        if self.d.len() > r {
            return;
        }
        self.extend_uv(r);
        let mut su = vec![Bivariate::default()];
        let mut sm = vec![Bivariate::default()];
        for k in 1..=r {
            su.push(Bivariate::from_t(&self.u[k], 0));
            let mut s = Bivariate::from_t(&self.v[k], 0);
            let at = Bivariate::from_t(&self.u[k - 1].shift(1), 1);
            s.add_scaled(&at, &Rational::from(1));
            sm.push(s);
        }
        let ld = formal_log(&su);
        let lm = formal_log(&sm);
        self.d = ld.iter().map(|b| b.a_free()).collect();
        self.m = lm.iter().map(ShiftPolynomial::from_bivariate).collect();
    }
}

fn tables() -> &'static RwLock<Tables> {
    static T: OnceLock<RwLock<Tables>> = OnceLock::new();
    T.get_or_init(|| RwLock::new(Tables::default()))
}

fn with_uv<R>(r: usize, f: impl Fn(&Tables) -> R) -> R {
    {
        let g = tables().read().unwrap_or_else(|e| e.into_inner());
        if g.u.len() > r {
            return f(&g);
        }
    }
    let mut g = tables().write().unwrap_or_else(|e| e.into_inner());
    g.extend_uv(r);
    f(&g)
}

fn with_dm<R>(r: usize, f: impl Fn(&Tables) -> R) -> R {
    {
        let g = tables().read().unwrap_or_else(|e| e.into_inner());
        if g.d.len() > r {
            return f(&g);
        }
    }
    let mut g = tables().write().unwrap_or_else(|e| e.into_inner());
    g.extend_dm(r);
    f(&g)
}

/// Olver polynomial u_r(t).
pub fn u_poly(r: usize) -> RationalPolynomial {
    with_uv(r, |t| t.u[r].clone())
}

/// Olver polynomial v_r(t).
pub fn v_poly(r: usize) -> RationalPolynomial {
    with_uv(r, |t| t.v[r].clone())
}

/// D_r(t), the ν^(−r) coefficient of log(1 + Σ u_k(t)/ν^k); D_0 = 0.
pub fn d_poly(r: usize) -> RationalPolynomial {
    with_dm(r, |t| t.d[r].clone())
}

/// M_r(t, A), the ν^(−r) coefficient of log(1 + Σ v_k/ν^k + (A/ν) t (1 + Σ u_k/ν^k)); M_0 = 0.
pub fn m_poly(r: usize) -> ShiftPolynomial {
    with_dm(r, |t| t.m[r].clone())
}

/// Coefficient arrays x_{r,b} and z_{r,b}(A) of t^{r+2b}, 0 ≤ b ≤ r.
pub fn xz_coefficients(r: usize) -> Result<(Vec<Rational>, Vec<RationalPolynomial>)> {
    if r == 0 {
        return Err(Error::Domain("coefficient arrays are defined for r ≥ 1".into()));
    }
    let d = d_poly(r);
    let m = m_poly(r);
    let allowed = |e: u32| e as usize >= r && e as usize <= 3 * r && (e as usize - r) % 2 == 0;
    for e in d.support().into_iter().chain(m.support()) {
        if !allowed(e) {
            return Err(Error::Structural(format!("exponent {e} outside the support of index {r}")));
        }
    }
    let x = (0..=r).map(|b| d.coefficient((r + 2 * b) as u32)).collect();
    let z = (0..=r).map(|b| m.coefficient((r + 2 * b) as u32)).collect();
    Ok((x, z))
}

/// Weights w_{r,b}(A) = 2x_{2r+1,b} − z_{2r+1,b}(−A) − z_{2r+1,b}(A), 0 ≤ b ≤ 2r+1.
pub fn residual_weights(r: usize, a: &Rational) -> Result<Vec<Rational>> {
    let (x, z) = xz_coefficients(2 * r + 1)?;
    let minus_a = Rational::from(-a);
    Ok(x
        .iter()
        .zip(&z)
        .map(|(xb, zb)| Rational::from(xb * 2u32) - zb.evaluate_rational(&minus_a) - zb.evaluate_rational(a))
        .collect())
}

/// The subtraction polynomial 2D_{2r+1}(t) − M_{2r+1}(t,−A) − M_{2r+1}(t,A) for fixed A.
pub fn f_r_polynomial(r: usize, a: &Rational) -> RationalPolynomial {
    let d = d_poly(2 * r + 1);
    let m = m_poly(2 * r + 1);
    d.scale(&Rational::from(2)).sub(&m.at_shift(&Rational::from(-a))).sub(&m.at_shift(a))
}

/// t_ε(λ) = (1 − ε²λ)^(−1/2) on the principal branch.
pub fn t_epsilon(eps: &Float, lambda: &Complex, p: Precision) -> Result<Complex> {
    let w = p.bits() + 32;
    let e2 = Float::with_val(w, eps * eps);
    let mut base = Complex::with_val(w, lambda * &e2);
    base = -base + 1u32;
    if base.imag().is_zero() && *base.real() <= 0 {
        return Err(Error::Branch(format!("1 − ε²λ = {} lies on the cut", base.real().to_f64())));
    }
    base.sqrt_mut();
    base.recip_mut();
    Ok(Complex::with_val(p.bits(), &base))
}

/// f_{r,ε}(λ) = 2D_{2r+1}(t_ε) − M_{2r+1}(t_ε,−A) − M_{2r+1}(t_ε,A).
pub fn f_r_epsilon(r: usize, a: &Rational, eps: &Float, lambda: &Complex, p: Precision) -> Result<Complex> {
    if !(*eps > 0 && *eps < 1) {
        return Err(Error::Domain("ε must lie in (0,1)".into()));
    }
    let t = t_epsilon(eps, lambda, p.plus(4))?;
    let v = f_r_polynomial(r, a).evaluate_complex(&t, p.plus(4));
    Ok(Complex::with_val(p.bits(), &v))
}

fn uniform_parts(nu: &Float, z: &Float, w: u32) -> Result<(Float, Float, Float)> {
    if *nu <= 0 || *z <= 0 {
        return Err(Error::Domain("uniform expansion requires ν > 0 and z > 0".into()));
    }
    let root = Float::with_val(w, Float::with_val(w, z * z) + 1u32).sqrt();
    let t = Float::with_val(w, root.recip_ref());
    let eta = Float::with_val(w, &root + Float::with_val(w, z / Float::with_val(w, &root + 1u32)).ln());
    Ok((t, eta, root))
}

/// Truncated uniform expansion of I_ν(νz) using u_0, …, u_{terms−1}.
pub fn uniform_i_approximation(nu: &Float, z: &Float, terms: usize, p: Precision) -> Result<Float> {
    let w = p.bits() + 32;
    let (t, eta, root) = uniform_parts(nu, z, w)?;
    let series = uniform_series(nu, &t, terms, false, p);
    let two_pi_nu = Float::with_val(w, Float::with_val(w, rug::float::Constant::Pi) * nu) * 2u32;
    let pref = Float::with_val(w, Float::with_val(w, nu * &eta).exp() / two_pi_nu.sqrt()) / root.sqrt();
    Ok(Float::with_val(p.bits(), pref * series))
}

/// Truncated uniform expansion of K_ν(νz) using u_0, …, u_{terms−1}.
pub fn uniform_k_approximation(nu: &Float, z: &Float, terms: usize, p: Precision) -> Result<Float> {
    let w = p.bits() + 32;
    let (t, eta, root) = uniform_parts(nu, z, w)?;
    let series = uniform_series(nu, &t, terms, true, p);
    let pi = Float::with_val(w, rug::float::Constant::Pi);
    let pref = Float::with_val(w, Float::with_val(w, pi / Float::with_val(w, nu * 2u32)).sqrt())
        * Float::with_val(w, (-Float::with_val(w, nu * &eta)).exp() / root.sqrt());
    Ok(Float::with_val(p.bits(), pref * series))
}

fn uniform_series(nu: &Float, t: &Float, terms: usize, alternate: bool, p: Precision) -> Float {
    let w = p.bits() + 32;
    let mut acc = Float::new(w);
    let mut pw = Float::with_val(w, 1u32);
    let inv = Float::with_val(w, nu.recip_ref());
    for r in 0..terms {
        let mut term = u_poly(r).evaluate_real(t, p.plus(10));
        term *= &pw;
        if alternate && r % 2 == 1 {
            acc -= term;
        } else {
            acc += term;
        }
        pw *= &inv;
    }
    acc
}

/// Serializable coefficient table for one index r.
#[derive(Clone, Debug, Serialize)]
pub struct OlverTableEntry {
    /// Index r.
    pub r: usize,
    /// u_r as (exponent, coefficient) pairs.
    pub u: Vec<(u32, String)>,
    /// v_r as (exponent, coefficient) pairs.
    pub v: Vec<(u32, String)>,
    /// D_r as (exponent, coefficient) pairs.
    pub d: Vec<(u32, String)>,
    /// M_r as (t exponent, A exponent, coefficient) triples.
    pub m: Vec<(u32, u32, String)>,
}

fn pairs(p: &RationalPolynomial) -> Vec<(u32, String)> {
    p.terms().map(|(e, c)| (e, c.to_string())).collect()
}

/// Coefficient tables for 1 ≤ r ≤ rmax as JSON.
pub fn coefficient_table_json(rmax: usize) -> serde_json::Value {
    let entries: Vec<OlverTableEntry> = (1..=rmax)
        .map(|r| {
            let m = m_poly(r);
            let mut mt = Vec::new();
            for te in m.support() {
                for (ae, c) in m.coefficient(te).terms() {
                    mt.push((te, ae, c.to_string()));
                }
            }
            OlverTableEntry { r, u: pairs(&u_poly(r)), v: pairs(&v_poly(r)), d: pairs(&d_poly(r)), m: mt }
        })
        .collect();
    serde_json::to_value(entries).unwrap_or(serde_json::Value::Null)
}

/// (−a)^r / r as an exact rational.
pub fn dm_shift_term(a: &Rational, r: usize) -> Rational {
    let mut v = Rational::from(1);
    for _ in 0..r {
        v *= Rational::from(-a);
    }
    v / Integer::from(r)
}
