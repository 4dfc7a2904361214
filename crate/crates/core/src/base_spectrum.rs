//! Coclosed-form spectra and Betti numbers of the supported closed odd-dimensional bases.
//!
//! Round spheres S^n (odd n ≤ 7): coclosed k-forms, k ≤ m = (n−1)/2, have eigenvalues
//! η = (l+k)(l+n−1−k), l ≥ 1, so that ν = √(η + A_k²) = l + m. Multiplicities come from
//! the Weyl dimension formula of so(n+1) with highest weight (l, 1^k, 0, …), doubled in
//! the middle degree k = m where the weight and its conjugate both occur. Degrees
//! k > m mirror degree n−1−k and degree n carries no nonzero coclosed spectrum.
//!
//! Flat tori R^n / Π 2πρ_i Z with rational radii: each nonzero dual lattice vector ξ gives
//! η = |ξ|² with multiplicity C(n−1, k) in degree k < n.
//!
//! File-backed bases hold the spectrum verbatim.

use crate::error::{Error, Result};
use crate::olver::RationalPolynomial;
use crate::precision_math::Precision;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

/// One nonzero eigenvalue of the coclosed k-form Laplacian with its multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpectralLine {
    /// Form degree k.
    pub degree: usize,
    /// Eigenvalue η > 0.
    pub eta: Rational,
    /// Multiplicity, already including the bundle rank.
    pub multiplicity: u64,
}

/// The family a base manifold belongs to.
#[derive(Clone, Debug, PartialEq)]
pub enum BaseFamily {
    /// Unit round sphere.
    Sphere,
    /// Flat torus with the given rational radii.
    Torus {
        /// Radii ρ_i; the circle factors have length 2πρ_i.
        radii: Vec<Rational>,
    },
    /// Spectrum read from a file.
    File {
        /// All spectral lines, in file order.
        lines: Vec<SpectralLine>,
    },
}

/// Closed odd-dimensional Riemannian base with a trivial flat bundle of rank R.
#[derive(Clone, Debug, PartialEq)]
pub struct BaseManifold {
    family: BaseFamily,
    dim: usize,
    rank: u64,
    betti: Vec<u64>,
}

/// Degree-dependent constants A_k, δ_k and c_k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeData {
    /// Form degree k.
    pub k: usize,
    /// A_k = (n−1)/2 − k.
    pub a: Rational,
    /// δ_k = 1/2 in the middle degree k = (n−1)/2, 1 otherwise.
    pub delta: Rational,
    /// c_k = (−1)^k (k − n/2).
    pub c: Rational,
}

/// Shifted frequency ν = √(η + A_k²) stored exactly through ν².
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NuLine {
    /// ν² = η + A_k².
    pub nu_squared: Rational,
    /// Multiplicity.
    pub multiplicity: u64,
}

impl NuLine {
    /// ν at the given precision.
    pub fn nu(&self, p: Precision) -> Float {
        Float::with_val(p.bits(), &self.nu_squared).sqrt()
    }
}

/// Degree data for degree k of an n-dimensional base.
pub fn degree_data(n: usize, k: usize) -> DegreeData {
    let a = Rational::from((n as i64 - 1, 2u64)) - Integer::from(k);
    let delta = if 2 * k + 1 == n { Rational::from((1, 2)) } else { Rational::from(1) };
    let sign = if k % 2 == 0 { 1 } else { -1 };
    let c = (Rational::from(k as i64) - Rational::from((n as i64, 2u64))) * sign;
    DegreeData { k, a, delta, c }
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    Integer::from(Integer::binomial_u(n as u32, k as u32)).to_u64().unwrap_or(u64::MAX)
}

impl BaseManifold {
    /// Unit round sphere S^n, odd n ≤ 7, with a trivial bundle of rank `rank`.
    pub fn sphere(n: usize, rank: u64) -> Result<Self> {
        if n % 2 == 0 {
            return Err(Error::Domain(format!("base dimension must be odd, got {n}")));
        }
        if n > 7 {
            return Err(Error::Unsupported(format!("spheres are supported up to dimension 7, got {n}")));
        }
        check_rank(rank)?;
        let mut betti = vec![0; n + 1];
        betti[0] = rank;
        betti[n] = rank;
        Ok(Self { family: BaseFamily::Sphere, dim: n, rank, betti })
    }

    /// Flat torus with rational radii, odd dimension, trivial bundle of rank `rank`.
    pub fn torus(radii: Vec<Rational>, rank: u64) -> Result<Self> {
        let n = radii.len();
        if n % 2 == 0 {
            return Err(Error::Domain(format!("base dimension must be odd, got {n}")));
        }
        if radii.iter().any(|r| *r <= 0) {
            return Err(Error::Domain("torus radii must be positive".into()));
        }
        check_rank(rank)?;
        let betti = (0..=n).map(|k| binomial(n as u64, k as u64) * rank).collect();
        Ok(Self { family: BaseFamily::Torus { radii }, dim: n, rank, betti })
    }

    /// Base defined by an explicit spectrum and Betti numbers.
    pub fn from_lines(n: usize, rank: u64, betti: Vec<u64>, lines: Vec<SpectralLine>) -> Result<Self> {
        if n % 2 == 0 {
            return Err(Error::Domain(format!("base dimension must be odd, got {n}")));
        }
        check_rank(rank)?;
        if betti.len() != n + 1 {
            return Err(Error::Domain(format!("expected {} Betti numbers, got {}", n + 1, betti.len())));
        }
        for l in &lines {
            if l.degree > n {
                return Err(Error::Domain(format!("degree {} exceeds the dimension {n}", l.degree)));
            }
            if l.eta <= 0 {
                return Err(Error::Domain("eigenvalues must be positive".into()));
            }
            if l.multiplicity == 0 {
                return Err(Error::Domain("multiplicities must be positive".into()));
            }
        }
        Ok(Self { family: BaseFamily::File { lines }, dim: n, rank, betti })
    }

    /// Parses "sphere:n", "torus:n" (unit radii) or "torus:r1,r2,…" with rational radii.
    pub fn parse(descriptor: &str, rank: u64) -> Result<Self> {
        let (name, params) = descriptor
            .split_once(':')
            .ok_or_else(|| Error::Domain(format!("base descriptor '{descriptor}' lacks ':'")))?;
        match name.trim() {
            "sphere" => {
                let n = params.trim().parse::<usize>().map_err(|_| Error::Domain(format!("bad sphere dimension '{params}'")))?;
                Self::sphere(n, rank)
            }
            "torus" => {
                if !params.contains(',') {
                    let n = params.trim().parse::<usize>().map_err(|_| Error::Domain(format!("bad torus dimension '{params}'")))?;
                    return Self::torus(vec![Rational::from(1); n], rank);
                }
                let radii = params.split(',').map(|s| parse_rational(s.trim())).collect::<Result<Vec<_>>>()?;
                Self::torus(radii, rank)
            }
            other => Err(Error::Unsupported(format!("unknown base family '{other}'"))),
        }
    }

    /// Dimension n.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Bundle rank.
    pub fn rank(&self) -> u64 {
        self.rank
    }

    /// Family descriptor.
    pub fn family(&self) -> &BaseFamily {
        &self.family
    }

    /// m = (n−1)/2.
    pub fn half_dim(&self) -> usize {
        (self.dim - 1) / 2
    }

    /// All Betti numbers b_0, …, b_n (times the rank).
    pub fn betti_numbers(&self) -> &[u64] {
        &self.betti
    }

    /// Short human-readable label.
    pub fn label(&self) -> String {
        match &self.family {
            BaseFamily::Sphere => format!("sphere:{}", self.dim),
            BaseFamily::Torus { radii } => {
                format!("torus:{}", radii.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(","))
            }
            BaseFamily::File { .. } => format!("file:dim={}", self.dim),
        }
    }

    /// True when the spectrum has an exact Hurwitz-zeta representation.
    pub fn has_closed_form(&self) -> bool {
        matches!(self.family, BaseFamily::Sphere)
    }

    /// Riemannian volume of the base.
    pub fn volume(&self, p: Precision) -> Result<Float> {
        let w = p.bits() + 16;
        match &self.family {
            BaseFamily::Sphere => {
                let m = self.half_dim() as u32;
                let pi = Float::with_val(w, rug::float::Constant::Pi);
                let num = Float::with_val(w, pi.pow(m + 1)) * 2u32;
                let fact = Float::with_val(w, Integer::from(Integer::factorial(m)));
                Ok(Float::with_val(p.bits(), num / fact))
            }
            BaseFamily::Torus { radii } => {
                let two_pi = Float::with_val(w, rug::float::Constant::Pi) * 2u32;
                let mut v = Float::with_val(w, 1u32);
                for r in radii {
                    v *= Float::with_val(w, &two_pi * Float::with_val(w, r));
                }
                Ok(Float::with_val(p.bits(), v))
            }
            BaseFamily::File { .. } => Err(Error::Unsupported("volume of a file-backed base is unknown".into())),
        }
    }
}

fn check_rank(rank: u64) -> Result<()> {
    if rank == 0 {
        return Err(Error::Domain("bundle rank must be positive".into()));
    }
    Ok(())
}

/// b_k(N, E) for the trivial flat bundle, including the rank.
pub fn betti(base: &BaseManifold, k: usize) -> Result<u64> {
    base.betti.get(k).copied().ok_or_else(|| Error::OutOfRange(format!("degree {k} exceeds dimension {}", base.dim)))
}

/// Dimension of the so(2N) representation with the given highest weight.
fn so_even_dimension(weight: &[i64]) -> Integer {
    let n = weight.len();
    let rho: Vec<i64> = (0..n).map(|i| (n - 1 - i) as i64).collect();
    let x: Vec<i64> = weight.iter().zip(&rho).map(|(l, r)| l + r).collect();
    let mut num = Integer::from(1);
    let mut den = Integer::from(1);
    for i in 0..n {
        for j in i + 1..n {
            num *= Integer::from(x[i] * x[i] - x[j] * x[j]);
            den *= Integer::from(rho[i] * rho[i] - rho[j] * rho[j]);
        }
    }
    num / den
}

/// Multiplicity of ν = l + m in degree k ≤ m on the unit sphere S^n for the trivial line bundle.
fn sphere_multiplicity(n: usize, k: usize, l: u64) -> Integer {
    let m = (n - 1) / 2;
    let rank = m + 1;
    let mut w = vec![0i64; rank];
    w[0] = l as i64;
    for item in w.iter_mut().skip(1).take(k) {
        *item = 1;
    }
    let d = so_even_dimension(&w);
    if k == m {
        d * 2u32
    } else {
        d
    }
}

/// Degree mirrored into the range k ≤ m, or `None` for the top degree.
fn mirrored_degree(n: usize, k: usize) -> Option<usize> {
    let m = (n - 1) / 2;
    if k >= n {
        None
    } else if k <= m {
        Some(k)
    } else {
        Some(n - 1 - k)
    }
}

/// Multiplicity in degree k as an exact polynomial in ν (sphere bases, including rank).
pub fn sphere_multiplicity_polynomial(base: &BaseManifold, k: usize) -> Result<RationalPolynomial> {
    if !matches!(base.family, BaseFamily::Sphere) {
        return Err(Error::Unsupported("multiplicity polynomials exist for spheres only".into()));
    }
    let n = base.dim;
    if k > n {
        return Err(Error::OutOfRange(format!("degree {k} exceeds dimension {n}")));
    }
    let kk = match mirrored_degree(n, k) {
        Some(kk) => kk,
        None => return Ok(RationalPolynomial::zero()),
    };
    let m = base.half_dim() as u64;
    // Lagrange interpolation through n nodes ν = l + m, l = 1..n (degree n−1).
    let nodes: Vec<(Rational, Rational)> = (1..=n as u64)
        .map(|l| (Rational::from(l + m), Rational::from(sphere_multiplicity(n, kk, l) * base.rank)))
        .collect();
    let mut poly = RationalPolynomial::zero();
    for (i, (xi, yi)) in nodes.iter().enumerate() {
        let mut basis = RationalPolynomial::one();
        let mut denom = Rational::from(1);
        for (j, (xj, _)) in nodes.iter().enumerate() {
            if i != j {
                basis = basis.mul(&RationalPolynomial::from_terms([(1, Rational::from(1)), (0, Rational::from(-xj))]));
                denom *= Rational::from(xi - xj);
            }
        }
        poly = poly.add(&basis.scale(&Rational::from(yi / &denom)));
    }
    Ok(poly)
}

/// Coclosed k-form spectrum with ν = √(η + A_k²) ≤ cutoff.
pub fn coclosed_spectrum(base: &BaseManifold, k: usize, cutoff: f64) -> Result<Vec<SpectralLine>> {
    let n = base.dim;
    if k > n {
        return Err(Error::OutOfRange(format!("degree {k} exceeds dimension {n}")));
    }
    if !(cutoff > 0.0) || !cutoff.is_finite() {
        return Err(Error::Domain("cutoff must be a positive finite number".into()));
    }
    let cut = Rational::from_f64(cutoff).ok_or_else(|| Error::Domain("cutoff is not finite".into()))?;
    let cut2 = Rational::from(&cut * &cut);
    let a = degree_data(n, k).a;
    let a2 = Rational::from(&a * &a);
    let eta_max = Rational::from(&cut2 - &a2);
    let mut lines = Vec::new();
    match &base.family {
        BaseFamily::Sphere => {
            let Some(kk) = mirrored_degree(n, k) else { return Ok(lines) };
            let m = base.half_dim() as u64;
            let mut l = 1u64;
            loop {
                let nu = Rational::from(l + m);
                if Rational::from(&nu * &nu) > cut2 {
                    break;
                }
                let eta = Rational::from((l + kk as u64) * (l + (n - 1 - kk) as u64));
                let mult = (sphere_multiplicity(n, kk, l) * base.rank)
                    .to_u64()
                    .ok_or_else(|| Error::OutOfRange("multiplicity exceeds 64 bits".into()))?;
                lines.push(SpectralLine { degree: k, eta, multiplicity: mult });
                l += 1;
            }
        }
        BaseFamily::Torus { radii } => {
            if k == n || eta_max <= 0 {
                return Ok(lines);
            }
            let mult = binomial(n as u64 - 1, k as u64) * base.rank;
            // η·L is an integer for L = lcm of the squared radius numerators.
            let mut scale = Integer::from(1);
            for r in radii {
                let num2 = Integer::from(r.numer() * r.numer());
                scale = scale.lcm(&num2);
            }
            let weights: Vec<i128> = radii
                .iter()
                .map(|r| {
                    let q2 = Integer::from(r.denom() * r.denom());
                    let p2 = Integer::from(r.numer() * r.numer());
                    (Integer::from(&scale / &p2) * q2).to_i128().unwrap_or(i128::MAX)
                })
                .collect();
            let limit = Integer::from(Rational::from(&eta_max * &scale).floor_ref()).to_i128().unwrap_or(i128::MAX);
            let bound = eta_max.to_f64().sqrt();
            let ranges: Vec<i64> = radii.iter().map(|r| (r.to_f64() * bound).floor() as i64 + 1).collect();
            let mut counts: BTreeMap<i128, u64> = BTreeMap::new();
            let mut idx: Vec<i64> = ranges.iter().map(|r| -r).collect();
            'outer: loop {
                let scaled: i128 = idx.iter().zip(&weights).map(|(m, w)| (*m as i128) * (*m as i128) * w).sum();
                if scaled > 0 && scaled <= limit {
                    *counts.entry(scaled).or_insert(0) += mult;
                }
                let mut pos = 0;
                loop {
                    if pos == idx.len() {
                        break 'outer;
                    }
                    idx[pos] += 1;
                    if idx[pos] > ranges[pos] {
                        idx[pos] = -ranges[pos];
                        pos += 1;
                    } else {
                        break;
                    }
                }
            }
            lines = counts
                .into_iter()
                .map(|(v, multiplicity)| SpectralLine {
                    degree: k,
                    eta: Rational::from((Integer::from(v), scale.clone())),
                    multiplicity,
                })
                .filter(|l| l.eta <= eta_max)
                .collect();
        }
        BaseFamily::File { lines: all } => {
            let mut sel: Vec<SpectralLine> =
                all.iter().filter(|l| l.degree == k && l.eta <= eta_max).cloned().collect();
            sel.sort();
            lines = sel;
        }
    }
    Ok(lines)
}

/// Shifted frequencies ν = √(η + A_k²) ≤ cutoff with multiplicities, in increasing order.
pub fn nu_stream(base: &BaseManifold, k: usize, cutoff: f64) -> Result<Vec<NuLine>> {
    let a = degree_data(base.dim, k).a;
    let a2 = Rational::from(&a * &a);
    let mut out: Vec<NuLine> = Vec::new();
    for l in coclosed_spectrum(base, k, cutoff)? {
        let nu_squared = Rational::from(&l.eta + &a2);
        match out.last_mut() {
            Some(last) if last.nu_squared == nu_squared => last.multiplicity += l.multiplicity,
            _ => out.push(NuLine { nu_squared, multiplicity: l.multiplicity }),
        }
    }
    Ok(out)
}

/// Parses a terminating decimal ("1.25") or a fraction ("5/4") into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Domain(format!("cannot parse '{s}' as an exact rational"));
    if let Some((p, q)) = s.split_once('/') {
        let p: Integer = p.trim().parse().map_err(|_| bad())?;
        let q: Integer = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        return Ok(Rational::from((p, q)));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !int.chars().all(|c| c.is_ascii_digit()) || !frac.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: Integer = format!("{int}{frac}").trim_start_matches('0').parse().unwrap_or_default();
    let den = Integer::from(Integer::u_pow_u(10, frac.len() as u32));
    let q = Rational::from((digits, den));
    Ok(if neg { -q } else { q })
}

/// Exact decimal text for rationals whose denominator divides a power of ten, "p/q" otherwise.
pub fn format_rational(q: &Rational) -> String {
    let mut den = q.denom().clone();
    let mut twos = 0u32;
    let mut fives = 0u32;
    while den.is_divisible_u(2) {
        den /= 2u32;
        twos += 1;
    }
    while den.is_divisible_u(5) {
        den /= 5u32;
        fives += 1;
    }
    if den != 1 {
        return q.to_string();
    }
    let digits = twos.max(fives);
    if digits == 0 {
        return q.numer().to_string();
    }
    let scaled = Integer::from(q.numer() * Integer::from(Integer::u_pow_u(10, digits))) / q.denom();
    let neg = scaled < 0;
    let mut s = Integer::from(scaled.abs_ref()).to_string();
    while s.len() <= digits as usize {
        s.insert(0, '0');
    }
    let split = s.len() - digits as usize;
    let mut out = format!("{}.{}", &s[..split], &s[split..]);
    if neg {
        out.insert(0, '-');
    }
    out
}

/// Reads a spectrum file: header "dim=n rank=R", a line "betti=b_0,…,b_n", then "k,eta,mult" records.
pub fn read_spectrum_file(path: &Path) -> Result<BaseManifold> {
    let text = std::fs::read_to_string(path)?;
    parse_spectrum_text(&text)
}

/// Parses spectrum file contents; see [`read_spectrum_file`].
pub fn parse_spectrum_text(text: &str) -> Result<BaseManifold> {
    let malformed = |line: usize, message: String| Error::Malformed { line, message };
    let mut dim = None;
    let mut rank = None;
    let mut betti_line = None;
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if line.starts_with("dim=") {
            for part in line.split_whitespace() {
                let (key, val) = part.split_once('=').ok_or_else(|| malformed(ln, format!("bad header field '{part}'")))?;
                let v: u64 = val.parse().map_err(|_| malformed(ln, format!("bad header value '{val}'")))?;
                match key {
                    "dim" => dim = Some(v as usize),
                    "rank" => rank = Some(v),
                    _ => return Err(malformed(ln, format!("unknown header key '{key}'"))),
                }
            }
        } else if let Some(rest) = line.strip_prefix("betti=") {
            let b = rest
                .split(',')
                .map(|s| s.trim().parse::<u64>().map_err(|_| malformed(ln, format!("bad Betti number '{s}'"))))
                .collect::<Result<Vec<_>>>()?;
            betti_line = Some(b);
        } else {
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 3 {
                return Err(malformed(ln, "expected 'k,eta,mult'".into()));
            }
            let degree: usize = fields[0].parse().map_err(|_| malformed(ln, format!("bad degree '{}'", fields[0])))?;
            let eta = parse_rational(fields[1]).map_err(|e| malformed(ln, e.to_string()))?;
            let multiplicity: u64 = fields[2].parse().map_err(|_| malformed(ln, format!("bad multiplicity '{}'", fields[2])))?;
            if eta <= 0 {
                return Err(malformed(ln, "eigenvalue must be positive".into()));
            }
            if multiplicity == 0 {
                return Err(malformed(ln, "multiplicity must be positive".into()));
            }
            lines.push(SpectralLine { degree, eta, multiplicity });
        }
    }
    let dim = dim.ok_or_else(|| malformed(0, "missing header 'dim=n rank=R'".into()))?;
    let rank = rank.unwrap_or(1);
    let betti = betti_line.ok_or_else(|| malformed(0, "missing 'betti=' line".into()))?;
    BaseManifold::from_lines(dim, rank, betti, lines).map_err(|e| malformed(0, e.to_string()))
}

/// Serializes the coclosed spectra of all degrees up to `cutoff` in the spectrum file format.
pub fn spectrum_file_text(base: &BaseManifold, cutoff: f64) -> Result<String> {
    let mut s = String::new();
    let _ = writeln!(s, "dim={} rank={}", base.dim, base.rank);
    let b: Vec<String> = base.betti.iter().map(|x| x.to_string()).collect();
    let _ = writeln!(s, "betti={}", b.join(","));
    for k in 0..=base.dim {
        for l in coclosed_spectrum(base, k, cutoff)? {
            let _ = writeln!(s, "{},{},{}", l.degree, format_rational(&l.eta), l.multiplicity);
        }
    }
    Ok(s)
}

/// Writes the spectrum file for `base` up to `cutoff`.
pub fn write_spectrum_file(base: &BaseManifold, cutoff: f64, path: &Path) -> Result<()> {
    std::fs::write(path, spectrum_file_text(base, cutoff)?)?;
    Ok(())
}
