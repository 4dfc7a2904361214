//! Secondary boundary class of a conformal collar metric, computed symbolically.
//!
//! The graded tensor product Λ T*∂X ⊗̂ Λ̂ T*∂X is the exterior algebra on 2n odd
//! generators e*_1..e*_n (form factor) and ê*_1..ê*_n (hatted factor). Monomials are
//! bitmasks with form generators in the low n bits and hatted generators in the high
//! n bits, so the canonical order is (form part) ∧ (hatted part).
//!
//! Coefficients are exact: a rational number times powers of √s (metric scale),
//! √π (from Γ at half-integers and the Berezin normalization) and the auxiliary
//! integration variable u.

use crate::base_spectrum::{BaseFamily, BaseManifold};
use crate::error::{Error, Result};
use crate::precision_math::Precision;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::Serialize;
use std::collections::BTreeMap;

/// Largest supported boundary dimension (2n generators must fit in a 64-bit mask).
pub const MAX_DIM: usize = 31;

/// Symbolic monomial √s^sqrt_s · √π^sqrt_pi · u^u.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Monomial {
    /// Power of √s.
    pub sqrt_s: i32,
    /// Power of √π.
    pub sqrt_pi: i32,
    /// Power of u.
    pub u: u32,
}

impl Monomial {
    /// The constant monomial.
    pub const ONE: Monomial = Monomial { sqrt_s: 0, sqrt_pi: 0, u: 0 };

    fn mul(self, o: Monomial) -> Monomial {
        Monomial { sqrt_s: self.sqrt_s + o.sqrt_s, sqrt_pi: self.sqrt_pi + o.sqrt_pi, u: self.u + o.u }
    }
}

/// Finite sum of rational multiples of symbolic monomials.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExactScalar {
    terms: BTreeMap<Monomial, Rational>,
}

impl ExactScalar {
    /// Zero.
    pub fn zero() -> Self {
        Self::default()
    }

    /// A rational constant.
    pub fn rational(q: Rational) -> Self {
        Self::term(Monomial::ONE, q)
    }

    /// A single term.
    pub fn term(m: Monomial, q: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if q != 0 {
            terms.insert(m, q);
        }
        ExactScalar { terms }
    }

    /// Iterates over the nonzero terms.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// Whether every coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sum.
    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (m, q) in &o.terms {
            out.add_term(*m, q);
        }
        out
    }

    /// Difference.
    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&Rational::from(-1)))
    }

    /// Product.
    pub fn mul(&self, o: &Self) -> Self {
        let mut out = ExactScalar::zero();
        for (ma, qa) in &self.terms {
            for (mb, qb) in &o.terms {
                out.add_term(ma.mul(*mb), &Rational::from(qa * qb));
            }
        }
        out
    }

    /// Multiplication by a rational.
    pub fn scale(&self, q: &Rational) -> Self {
        let mut out = ExactScalar::zero();
        for (m, c) in &self.terms {
            out.add_term(*m, &Rational::from(c * q));
        }
        out
    }

    /// Multiplication by a monomial.
    pub fn shift(&self, by: Monomial) -> Self {
        ExactScalar { terms: self.terms.iter().map(|(m, q)| (m.mul(by), q.clone())).collect() }
    }

    fn add_term(&mut self, m: Monomial, q: &Rational) {
        if *q == 0 {
            return;
        }
        let e = self.terms.entry(m).or_insert_with(Rational::new);
        *e += q;
        if *e == 0 {
            self.terms.remove(&m);
        }
    }

    /// Replaces u^m by 1/m (∫₀¹ u^(m−1) du); fails on a u⁰ term.
    pub fn integrate_du_over_u(&self) -> Result<Self> {
        let mut out = ExactScalar::zero();
        for (m, q) in &self.terms {
            if m.u == 0 {
                return Err(Error::Structural("u-integral of a u^(-1) term diverges".into()));
            }
            out.add_term(Monomial { u: 0, ..*m }, &Rational::from(q / m.u));
        }
        Ok(out)
    }

    /// Substitutes a numeric scale s into even powers of √s, leaving at most √s¹.
    pub fn reduce_scale(&self, s: &Rational) -> Result<Self> {
        if *s <= 0 {
            return Err(Error::Domain("scale must be positive".into()));
        }
        let mut out = ExactScalar::zero();
        for (m, q) in &self.terms {
            let odd = m.sqrt_s.rem_euclid(2);
            let half = (m.sqrt_s - odd) / 2;
            out.add_term(Monomial { sqrt_s: odd, ..*m }, &Rational::from(q * rational_pow(s, half)));
        }
        Ok(out)
    }

    /// Numerical value at scale s (u must be absent).
    pub fn evaluate(&self, s: &Rational, p: Precision) -> Result<Float> {
        let b = p.bits() + 16;
        let sqrt_s = Float::with_val(b, s).sqrt();
        let sqrt_pi = p.plus(5).pi().sqrt();
        let mut acc = Float::new(b);
        for (m, q) in &self.terms {
            if m.u != 0 {
                return Err(Error::Structural("cannot evaluate a u-dependent scalar".into()));
            }
            let mut t = Float::with_val(b, q);
            t *= Float::with_val(b, (&sqrt_s).pow(m.sqrt_s));
            t *= Float::with_val(b, (&sqrt_pi).pow(m.sqrt_pi));
            acc += t;
        }
        Ok(Float::with_val(p.bits(), acc))
    }

    /// The scalar as a single rational when it has no symbolic part.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::new()),
            1 => self.terms.get(&Monomial::ONE).cloned(),
            _ => None,
        }
    }
}

impl std::fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, q) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({q})")?;
            if m.sqrt_s != 0 {
                write!(f, "·√s^{}", m.sqrt_s)?;
            }
            if m.sqrt_pi != 0 {
                write!(f, "·√π^{}", m.sqrt_pi)?;
            }
            if m.u != 0 {
                write!(f, "·u^{}", m.u)?;
            }
        }
        Ok(())
    }
}

fn rational_pow(q: &Rational, e: i32) -> Rational {
    let mut out = Rational::from(1);
    for _ in 0..e.unsigned_abs() {
        out *= q;
    }
    if e < 0 {
        out.recip_mut();
    }
    out
}

/// Element of Λ T*∂X ⊗̂ Λ̂ T*∂X with exact coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedElement {
    n: usize,
    terms: BTreeMap<u64, ExactScalar>,
}

/// Sign of moving the generators of `b` past those of `a` into canonical order.
fn merge_sign(a: u64, b: u64) -> i32 {
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        swaps += (a >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    if swaps % 2 == 0 {
        1
    } else {
        -1
    }
}

impl GradedElement {
    /// The zero element over an n-dimensional boundary.
    pub fn zero(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_DIM {
            return Err(Error::OutOfRange(format!("boundary dimension must lie in 1..={MAX_DIM}")));
        }
        Ok(GradedElement { n, terms: BTreeMap::new() })
    }

    /// The unit.
    pub fn one(n: usize) -> Result<Self> {
        let mut e = Self::zero(n)?;
        e.terms.insert(0, ExactScalar::rational(Rational::from(1)));
        Ok(e)
    }

    /// Form generator e*_i (1-based).
    pub fn form_generator(n: usize, i: usize) -> Result<Self> {
        Self::generator(n, i, false)
    }

    /// Hatted generator ê*_i (1-based).
    pub fn hatted_generator(n: usize, i: usize) -> Result<Self> {
        Self::generator(n, i, true)
    }

    fn generator(n: usize, i: usize, hatted: bool) -> Result<Self> {
        let mut e = Self::zero(n)?;
        if i == 0 || i > n {
            return Err(Error::OutOfRange(format!("generator index {i} outside 1..={n}")));
        }
        let bit = (i - 1) + if hatted { n } else { 0 };
        e.terms.insert(1u64 << bit, ExactScalar::rational(Rational::from(1)));
        Ok(e)
    }

    /// Boundary dimension n.
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Whether the element vanishes.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero terms as (form mask, hatted mask, coefficient); bit i−1 stands for index i.
    pub fn terms(&self) -> Vec<(u64, u64, &ExactScalar)> {
        let low = (1u64 << self.n) - 1;
        self.terms.iter().map(|(m, c)| (m & low, m >> self.n, c)).collect()
    }

    /// Bidegree (form, hatted) of each term.
    pub fn bidegrees(&self) -> Vec<(u32, u32)> {
        self.terms().into_iter().map(|(f, h, _)| (f.count_ones(), h.count_ones())).collect()
    }

    /// Whether every term has total degree of the given parity.
    pub fn is_homogeneous_parity(&self, even: bool) -> bool {
        self.terms.keys().all(|m| (m.count_ones() % 2 == 0) == even)
    }

    fn insert(&mut self, mask: u64, c: ExactScalar) {
        if c.is_zero() {
            return;
        }
        let merged = match self.terms.remove(&mask) {
            Some(prev) => prev.add(&c),
            None => c,
        };
        if !merged.is_zero() {
            self.terms.insert(mask, merged);
        }
    }

    /// Sum.
    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.insert(*m, c.clone());
        }
        out
    }

    /// Multiplication by an exact scalar.
    pub fn scale(&self, c: &ExactScalar) -> Self {
        let mut out = GradedElement { n: self.n, terms: BTreeMap::new() };
        for (m, v) in &self.terms {
            out.insert(*m, v.mul(c));
        }
        out
    }

    /// Multiplication by a rational.
    pub fn scale_rational(&self, q: &Rational) -> Self {
        self.scale(&ExactScalar::rational(q.clone()))
    }

    /// Graded-commutative product.
    pub fn mul(&self, o: &Self) -> Self {
        let mut out = GradedElement { n: self.n, terms: BTreeMap::new() };
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                if ma & mb != 0 {
                    continue;
                }
                let prod = ca.mul(cb);
                let prod = if merge_sign(*ma, *mb) < 0 { prod.scale(&Rational::from(-1)) } else { prod };
                out.insert(ma | mb, prod);
            }
        }
        out
    }

    /// exp of an even nilpotent element (finite series).
    pub fn exp_nilpotent(&self) -> Result<Self> {
        if !self.is_homogeneous_parity(true) {
            return Err(Error::Structural("exp requires an even element".into()));
        }
        if self.terms.contains_key(&0) {
            return Err(Error::Structural("exp requires a nilpotent element".into()));
        }
        let mut out = Self::one(self.n)?;
        let mut power = Self::one(self.n)?;
        for j in 1..=self.n {
            power = power.mul(self).scale_rational(&Rational::from((1, j as u32)));
            if power.is_zero() {
                break;
            }
            out = out.add(&power);
        }
        Ok(out)
    }

    /// Berezin integral as a pure form: c_n times the form parts multiplying ê*_1…ê*_n.
    pub fn berezin_form(&self) -> GradedElement {
        let n = self.n;
        let low = (1u64 << n) - 1;
        let top_hat = low << n;
        let c = berezin_normalization(n);
        let mut out = GradedElement { n, terms: BTreeMap::new() };
        for (m, v) in &self.terms {
            if m & top_hat == top_hat {
                out.insert(m & low, v.mul(&c));
            }
        }
        out
    }

    /// Berezin integral as the coefficient of e*_1…e*_n (other form degrees must vanish).
    pub fn berezin(&self) -> Result<ExactScalar> {
        let n = self.n;
        let low = (1u64 << n) - 1;
        let mut acc = ExactScalar::zero();
        for (m, c) in &self.berezin_form().terms {
            if *m != low {
                return Err(Error::Structural(format!("Berezin image has form degree {} instead of {n}", m.count_ones())));
            }
            acc = acc.add(c);
        }
        Ok(acc)
    }
}

/// Berezin normalization c_n = (−1)^(n(n+1)/2) π^(−n/2).
pub fn berezin_normalization(n: usize) -> ExactScalar {
    let sign = if (n * (n + 1) / 2) % 2 == 0 { 1 } else { -1 };
    ExactScalar::term(Monomial { sqrt_s: 0, sqrt_pi: -(n as i32), u: 0 }, Rational::from(sign))
}

/// Conformal collar f(x)(dx² + g^∂X) over a constant-curvature boundary, scaled by s.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollarMetric {
    /// Boundary dimension (odd).
    pub n: usize,
    /// Sectional curvature of the unscaled boundary metric.
    pub kappa: Rational,
    /// f'(0) of the unscaled collar.
    pub f_prime: Rational,
    /// Overall metric scale s > 0.
    pub scale: Rational,
}

impl CollarMetric {
    /// A collar with unit scale.
    pub fn new(n: usize, kappa: Rational, f_prime: Rational) -> Result<Self> {
        Self::scaled(n, kappa, f_prime, Rational::from(1))
    }

    /// A collar with explicit scale.
    pub fn scaled(n: usize, kappa: Rational, f_prime: Rational, scale: Rational) -> Result<Self> {
        if n % 2 == 0 || n > MAX_DIM {
            return Err(Error::Domain(format!("boundary dimension must be odd and at most {MAX_DIM}, got {n}")));
        }
        if scale <= 0 {
            return Err(Error::Domain("scale must be positive".into()));
        }
        Ok(CollarMetric { n, kappa, f_prime, scale })
    }

    /// The collar at x = 1 of the cone: f(y) = e^(−2y).
    pub fn cone_outer(n: usize, kappa: Rational) -> Result<Self> {
        Self::new(n, kappa, Rational::from(-2))
    }

    /// The collar at x = ε: f(z) = ε² e^(2z), i.e. scale ε² of e^(2z).
    pub fn cone_inner(n: usize, kappa: Rational, eps: &Rational) -> Result<Self> {
        if !(*eps > 0 && *eps < 1) {
            return Err(Error::Domain("ε must lie in (0,1)".into()));
        }
        Self::scaled(n, kappa, Rational::from(2), Rational::from(eps * eps))
    }

    /// The same collar with its metric multiplied by s.
    pub fn rescale(&self, s: &Rational) -> Result<Self> {
        Self::scaled(self.n, self.kappa.clone(), self.f_prime.clone(), Rational::from(&self.scale * s))
    }

    /// Collar of the expected boundary geometry for a base manifold.
    pub fn for_base(base: &BaseManifold, f_prime: Rational) -> Result<Self> {
        let kappa = match base.family() {
            BaseFamily::Sphere => Rational::from(1),
            BaseFamily::Torus { .. } => Rational::new(),
            BaseFamily::File { .. } => {
                return Err(Error::Unsupported("anomaly side needs a constant-curvature base".into()));
            }
        };
        Self::new(base.dim(), kappa, f_prime)
    }
}

/// Multiplies each monomial by √s^(degree), converting frame components of the
/// scaled metric into components in the unscaled coframe.
fn to_reference_frame(e: &GradedElement) -> GradedElement {
    let mut out = GradedElement { n: e.n, terms: BTreeMap::new() };
    for (m, c) in &e.terms {
        out.insert(*m, c.shift(Monomial { sqrt_s: m.count_ones() as i32, sqrt_pi: 0, u: 0 }));
    }
    out
}

/// Ṡ = (f'(0)/4) Σ_k e*_k ∧ ê*_k in the orthonormal coframe of the scaled metric.
///
/// Under g → s·g the coefficient becomes f'(0)/(4√s); the returned element is written
/// in the unscaled coframe, so it carries an overall √s.
pub fn s_dot(cm: &CollarMetric) -> Result<GradedElement> {
    let n = cm.n;
    let mut out = GradedElement::zero(n)?;
    let c = ExactScalar::term(Monomial { sqrt_s: -1, sqrt_pi: 0, u: 0 }, Rational::from(&cm.f_prime / 4u32));
    for k in 1..=n {
        let t = GradedElement::form_generator(n, k)?.mul(&GradedElement::hatted_generator(n, k)?);
        out = out.add(&t.scale(&c));
    }
    Ok(to_reference_frame(&out))
}

/// Ṙ = κ Σ_{k<l} e*_k ∧ e*_l ∧ ê*_k ∧ ê*_l for constant curvature κ (κ/s when scaled).
pub fn r_dot(cm: &CollarMetric) -> Result<GradedElement> {
    let n = cm.n;
    let mut out = GradedElement::zero(n)?;
    let c = ExactScalar::term(Monomial { sqrt_s: -2, sqrt_pi: 0, u: 0 }, cm.kappa.clone());
    for k in 1..=n {
        for l in k + 1..=n {
            let t = GradedElement::form_generator(n, k)?
                .mul(&GradedElement::form_generator(n, l)?)
                .mul(&GradedElement::hatted_generator(n, k)?)
                .mul(&GradedElement::hatted_generator(n, l)?);
            out = out.add(&t.scale(&c));
        }
    }
    Ok(to_reference_frame(&out))
}

/// 1/(2Γ(k/2+1)) as an exact scalar.
fn half_inverse_gamma(k: usize) -> ExactScalar {
    if k % 2 == 0 {
        let f = Integer::from(Integer::factorial((k / 2) as u32));
        ExactScalar::rational(Rational::from((1, f * 2u32)))
    } else {
        // Γ(k/2+1) = k!! √π / 2^((k+1)/2).
        let mut dfact = Integer::from(1);
        let mut j = k;
        while j > 1 {
            dfact *= j as u32;
            j -= 2;
        }
        let two = Integer::from(1) << ((k + 1) / 2) as u32;
        ExactScalar::term(Monomial { sqrt_s: 0, sqrt_pi: -1, u: 0 }, Rational::from((two, dfact * 2u32)))
    }
}

/// One expanded contribution to the class: the k-th summand with its u-power.
#[derive(Clone, Debug, Serialize)]
pub struct BClassTerm {
    /// Index k of the sum Σ_k (uṠ)^k / (2Γ(k/2+1)).
    pub k: usize,
    /// Contribution to the volume-form coefficient after Berezin integration and the u-integral.
    pub value: String,
}

/// Full symbolic expansion of −∫₀¹ du/u ∫^B exp(−½Ṙ − u²Ṡ²) Σ_k (uṠ)^k/(2Γ(k/2+1)).
fn b_class_terms(cm: &CollarMetric) -> Result<Vec<(usize, ExactScalar)>> {
    let n = cm.n;
    let s = s_dot(cm)?;
    let r = r_dot(cm)?;
    let u = |p: u32| ExactScalar::term(Monomial { sqrt_s: 0, sqrt_pi: 0, u: p }, Rational::from(1));
    let s2 = s.mul(&s).scale(&u(2));
    let exponent = r.scale_rational(&Rational::from((-1, 2))).add(&s2.scale_rational(&Rational::from(-1)));
    let e = exponent.exp_nilpotent()?;
    let mut out = Vec::new();
    let mut s_pow = GradedElement::one(n)?;
    for k in 1..=n {
        s_pow = s_pow.mul(&s).scale(&u(1));
        if s_pow.is_zero() {
            break;
        }
        let summand = e.mul(&s_pow.scale(&half_inverse_gamma(k)));
        // The Berezin integral is taken against the hatted coframe of s·g: ê'_top = √s^n ê_top.
        let ber = summand.berezin()?.shift(Monomial { sqrt_s: -(n as i32), sqrt_pi: 0, u: 0 });
        let integrated = ber.integrate_du_over_u()?.scale(&Rational::from(-1));
        out.push((k, integrated));
    }
    Ok(out)
}

/// Coefficient of B(∇) with respect to the volume form of the unscaled boundary metric.
///
/// This is the class itself as a top form; scaling invariance means it is independent of s.
pub fn b_form(cm: &CollarMetric) -> Result<ExactScalar> {
    let mut acc = ExactScalar::zero();
    for (_, t) in b_class_terms(cm)? {
        acc = acc.add(&t);
    }
    acc.reduce_scale(&cm.scale)
}

/// Coefficient of B(∇) with respect to the Riemannian volume form of the collar's own
/// boundary metric s·g, so that ∫ B = b_class · vol(s·g).
pub fn b_class(cm: &CollarMetric) -> Result<ExactScalar> {
    let shift = Monomial { sqrt_s: -(cm.n as i32), sqrt_pi: 0, u: 0 };
    b_form(cm)?.shift(shift).reduce_scale(&cm.scale)
}

/// Both sides (B₁, B_ε) of the cone anomaly as volume-form coefficients in the unscaled frame.
pub fn anomaly_sides(n: usize, kappa: &Rational, eps: &Rational) -> Result<(ExactScalar, ExactScalar)> {
    let outer = b_form(&CollarMetric::cone_outer(n, kappa.clone())?)?;
    let inner = b_form(&CollarMetric::cone_inner(n, kappa.clone(), eps)?)?;
    if !outer.add(&inner).is_zero() {
        return Err(Error::Structural(format!("anomaly sides are not antisymmetric: {outer} vs {inner}")));
    }
    Ok((outer, inner))
}

/// Whether b_form is exactly unchanged by g → s·g.
pub fn scaling_invariant(cm: &CollarMetric, s: &Rational) -> Result<bool> {
    Ok(b_form(&cm.rescale(s)?)? == b_form(cm)?)
}

/// Exact volume of the base with its unscaled metric, when available.
pub fn exact_volume(base: &BaseManifold) -> Option<ExactScalar> {
    let n = base.dim();
    match base.family() {
        BaseFamily::Sphere => {
            // vol Sⁿ = 2π^(m+1)/m!, m = (n−1)/2.
            let m = (n - 1) / 2;
            let f = Integer::from(Integer::factorial(m as u32));
            Some(ExactScalar::term(Monomial { sqrt_s: 0, sqrt_pi: 2 * (m as i32 + 1), u: 0 }, Rational::from((2, f))))
        }
        BaseFamily::Torus { radii } => {
            let mut q = Rational::from(1);
            for r in radii {
                q *= Rational::from(r * 2u32);
            }
            Some(ExactScalar::term(Monomial { sqrt_s: 0, sqrt_pi: 2 * n as i32, u: 0 }, q))
        }
        BaseFamily::File { .. } => None,
    }
}

/// rank · ∫_N B(g^N) using the outer cone collar, as an exact scalar.
pub fn integrated_anomaly(base: &BaseManifold) -> Result<ExactScalar> {
    let cm = CollarMetric::for_base(base, Rational::from(-2))?;
    let vol = exact_volume(base).ok_or_else(|| Error::Unsupported("no exact volume".into()))?;
    Ok(b_form(&cm)?.mul(&vol).scale(&Rational::from(base.rank())))
}

/// JSON dump of the expanded class.
#[derive(Clone, Debug, Serialize)]
pub struct BClassReport {
    /// Boundary dimension.
    pub n: usize,
    /// Curvature.
    pub kappa: String,
    /// f'(0).
    pub f_prime: String,
    /// Scale.
    pub scale: String,
    /// Per-k contributions.
    pub terms: Vec<BClassTerm>,
    /// Total volume-form coefficient in the unscaled frame.
    pub total: String,
}

/// Expanded class as a serializable report.
pub fn b_class_report(cm: &CollarMetric) -> Result<BClassReport> {
    let terms = b_class_terms(cm)?
        .into_iter()
        .map(|(k, v)| -> Result<BClassTerm> { Ok(BClassTerm { k, value: v.reduce_scale(&cm.scale)?.to_string() }) })
        .collect::<Result<Vec<_>>>()?;
    Ok(BClassReport {
        n: cm.n,
        kappa: cm.kappa.to_string(),
        f_prime: cm.f_prime.to_string(),
        scale: cm.scale.to_string(),
        terms,
        total: b_form(cm)?.to_string(),
    })
}
