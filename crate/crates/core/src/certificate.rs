//! Prime sums with explicit tails, André and Arakelov verdicts, the CM
//! height identity, and coefficient-height diagnostics.

use std::collections::BTreeSet;

use rayon::prelude::*;
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactmath::{
    valuation, FieldElem, GroundField, PlaceId, Scalar, TruncSeries, Valuation,
};
use crate::hyperbolic::capacity_lower_bound;
use crate::modular::{
    cm_constant, decimal, lambda_fn, lambda_prime, theta, CmConstant, ThetaKind, UpperHalfPoint,
};

const GUARD: u32 = 32;
const CHUNK: usize = 4096;

fn work(prec: u32) -> u32 {
    prec + GUARD
}

/// `Σ log p/(p(p−1))` over primes `p ≤ pmax` outside `exclusions`.
///
/// The true value of the full sum lies in `[partial, partial + tail_bound]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PrimeSum {
    pub exclusions: BTreeSet<u64>,
    pub pmax: u64,
    /// Lower bound for the finite sum.
    pub partial: Float,
    /// `(log pmax + 2)/pmax` plus the rounding slack of `partial`.
    pub tail_bound: Float,
    pub prec: u32,
}

impl PrimeSum {
    pub fn upper(&self) -> Float {
        Float::with_val(self.partial.prec(), &self.partial + &self.tail_bound)
    }
}

/// Primes up to `n`, ascending.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if sieve[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
    }
    out
}

/// `(log n + 2)/n`, an antiderivative bound: for `u ≥ 3` the summand
/// `log u/(u(u−1))` is decreasing and at most `(log u + 1)/u²`.
pub fn tail_bound(pmax: u64) -> f64 {
    ((pmax as f64).ln() + 2.0) / pmax as f64
}

/// Numeric check of the tail bound over `(pmax, 10·pmax]`: the sum over all
/// integers in that range plus the bound at `10·pmax` stays below the bound
/// at `pmax`.
pub fn tail_bound_check(pmax: u64) -> bool {
    let hi = pmax.saturating_mul(10);
    let s: f64 = (pmax + 1..=hi)
        .into_par_iter()
        .map(|n| {
            let n = n as f64;
            n.ln() / (n * (n - 1.0))
        })
        .sum();
    s + tail_bound(hi) <= tail_bound(pmax) * (1.0 - 1e-9)
}

/// Partial sum with tail bound.
///
/// ```
/// use pcurve::certificate::prime_sum;
///
/// let s = prime_sum(&[], 1000, 64).unwrap();
/// assert!(s.partial.to_f64() < 0.7554 && s.upper().to_f64() > 0.7553);
/// ```
pub fn prime_sum(exclusions: &[u64], pmax: u64, prec: u32) -> Result<PrimeSum> {
    if pmax < 100 {
        return Err(Error::Domain(format!(
            "pmax must be at least 100, got {pmax}"
        )));
    }
    if !tail_bound_check(pmax) {
        return Err(Error::Inconsistent(format!(
            "tail bound fails its numeric check at {pmax}"
        )));
    }
    let w = work(prec);
    let excl: BTreeSet<u64> = exclusions.iter().copied().collect();
    let primes: Vec<u64> = primes_up_to(pmax)
        .into_iter()
        .filter(|p| !excl.contains(p))
        .collect();
    // fixed chunks summed in parallel, combined in ascending order
    let chunks: Vec<Float> = primes
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut s = Float::new(w);
            for &p in chunk {
                let den = Integer::from(p) * (p - 1);
                s += Float::with_val(w, p).ln() / den;
            }
            s
        })
        .collect();
    let mut partial = Float::new(w);
    for c in chunks {
        partial += c;
    }
    // each term and each addition carries relative error ≤ 2^{−w}
    let slack = Float::with_val(w, 4 * primes.len() as u64 + 8) >> (w - 1);
    partial -= &slack;
    let mut tail = Float::with_val(w, pmax).ln() + 2u32;
    tail /= pmax;
    tail += Float::with_val(w, &slack * 2u32);
    Ok(PrimeSum {
        exclusions: excl,
        pmax,
        partial,
        tail_bound: tail,
        prec,
    })
}

/// Curve of an André-criterion certificate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Case {
    /// `P¹ − {0, 1, ∞}`.
    P1,
    /// The affine curve `y² = x³ − x`.
    Elliptic,
    /// `A¹` minus the fourth roots of unity.
    A1m4,
}

impl Case {
    pub const ALL: [Case; 3] = [Case::P1, Case::Elliptic, Case::A1m4];

    pub fn tag(&self) -> &'static str {
        match self {
            Case::P1 => "p1",
            Case::Elliptic => "elliptic",
            Case::A1m4 => "a1m4",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.tag() == tag)
    }
}

/// Finite-place radius policy: `p^{−1/(p(p−1))}` everywhere except at the
/// excluded primes, where the radius is `1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadiusPolicy {
    pub radius_one_at: Vec<u64>,
}

impl RadiusPolicy {
    pub fn for_case(case: Case) -> Self {
        let radius_one_at = match case {
            Case::A1m4 => vec![3, 5],
            _ => vec![],
        };
        RadiusPolicy { radius_one_at }
    }
}

/// `margin = archimedean − (partial + tail)`, a lower bound for `log Π R_v`.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub case: Case,
    pub archimedean: Float,
    pub finite: PrimeSum,
    pub capacity: Option<Float>,
    pub margin: Float,
    pub pass: bool,
    pub prec: u32,
}

impl Certificate {
    fn new(
        case: Case,
        archimedean: Float,
        finite: PrimeSum,
        capacity: Option<Float>,
        prec: u32,
    ) -> Self {
        let margin = Float::with_val(archimedean.prec(), &archimedean - finite.upper());
        let pass = margin > 0;
        Certificate {
            case,
            archimedean,
            finite,
            capacity,
            margin,
            pass,
            prec,
        }
    }

    pub fn to_json(&self, digits: usize) -> Value {
        let d = |x: &Float| decimal(x, digits, self.prec);
        let mut components = json!({
            "archimedean": d(&self.archimedean),
            "finite": [d(&self.finite.partial), d(&self.finite.upper())],
        });
        if let Some(c) = &self.capacity {
            components["capacity"] = json!(d(c));
        }
        json!({
            "case": self.case.tag(),
            "margin_decimal": d(&self.margin),
            "tail_bound": format!("{:e}", self.finite.tail_bound.to_f64()),
            "pmax": self.finite.pmax,
            "prec": self.prec,
            "pass": self.pass,
            "components": components,
        })
    }
}

/// `log R_∞` lower bound for a case.
pub fn archimedean_term(case: Case, prec: u32) -> Result<Float> {
    let v = match case {
        Case::P1 => cm_constant(CmConstant::Rinf, prec)?.value,
        Case::Elliptic => cm_constant(CmConstant::EcRinf, prec)?.value,
        Case::A1m4 => cm_constant(CmConstant::Eremenko, prec)?.value * 2u32,
    };
    Ok(v.ln())
}

/// André-criterion verdict with the default policy of the case.
pub fn andre_verdict(case: Case, prec: u32, pmax: u64) -> Result<Certificate> {
    andre_verdict_with(case, &RadiusPolicy::for_case(case), prec, pmax)
}

pub fn andre_verdict_with(
    case: Case,
    policy: &RadiusPolicy,
    prec: u32,
    pmax: u64,
) -> Result<Certificate> {
    let arch = archimedean_term(case, prec)?;
    let finite = prime_sum(&policy.radius_one_at, pmax, prec)?;
    Ok(Certificate::new(case, arch, finite, None, prec))
}

/// `log(capacity bound) − Σ_{p ∉ exclusions} log p/(p(p−1))`.
pub fn arakelov_capacity_verdict(prec: u32, pmax: u64) -> Result<Certificate> {
    arakelov_capacity_verdict_with(&[], prec, pmax)
}

pub fn arakelov_capacity_verdict_with(
    exclusions: &[u64],
    prec: u32,
    pmax: u64,
) -> Result<Certificate> {
    let cap = capacity_lower_bound(prec)?.value;
    let finite = prime_sum(exclusions, pmax, prec)?;
    Ok(Certificate::new(
        Case::P1,
        Float::with_val(cap.prec(), cap.ln_ref()),
        finite,
        Some(cap),
        prec,
    ))
}

/// The two sides of `deg T = −2h_F + log 2/3` at `λ₀ = (1 + √3 i)/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct HeightReport {
    /// `log|2 Im t₀ · λ'(t₀)|`, averaged over the embeddings.
    pub deg_t: Float,
    /// `h_F` from the theta expression.
    pub h_f_direct: Float,
    /// `h_F` solved from the identity.
    pub h_f_identity: Float,
    /// `|deg T − (−2h_F + log 2/3)|`.
    pub residual: Float,
    pub prec: u32,
}

/// `t_σ` in `{(±1 + √3 i)/2}` with `λ(t_σ) = σ(λ₀)` for both embeddings.
fn embedding_points(prec: u32) -> Result<[UpperHalfPoint; 2]> {
    let w = work(prec);
    let s3 = Float::with_val(w, 3).sqrt() / 2u32;
    let cand = |re: f64| UpperHalfPoint::from_parts(Float::with_val(w, re), s3.clone());
    let candidates = [cand(0.5)?, cand(-0.5)?];
    let lambda0 = rug::Complex::with_val(w, (0.5, s3.clone()));
    let targets = [lambda0.clone(), lambda0.conj()];
    let mut out = Vec::with_capacity(2);
    for target in &targets {
        let mut best: Option<(Float, &UpperHalfPoint)> = None;
        for c in &candidates {
            let d = lambda_fn(c, prec)?.distance(target);
            if best.as_ref().is_none_or(|(b, _)| d < *b) {
                best = Some((d, c));
            }
        }
        let (d, c) = best.expect("two candidates");
        if d > 1e-20 {
            return Err(Error::Inconsistent(
                "no candidate maps to the CM point".into(),
            ));
        }
        out.push(c.clone());
    }
    Ok([out[0].clone(), out[1].clone()])
}

/// Faltings height of the CM curve and the degree of the tangent line.
///
/// ```
/// let r = pcurve::certificate::faltings_height_cm(128).unwrap();
/// assert!(r.residual < 1e-30);
/// assert!((r.deg_t.to_f64() - 1.72855).abs() < 1e-4);
/// ```
pub fn faltings_height_cm(prec: u32) -> Result<HeightReport> {
    let w = work(prec);
    let pi = Float::with_val(w, Constant::Pi);
    let log2 = Float::with_val(w, Constant::Log2);
    let pts = embedding_points(prec)?;
    let mut h = Float::new(w);
    let mut deg = Float::new(w);
    for t in &pts {
        // ||(dx/2y)^{⊗2}||_σ = |π θ₀₁⁴(t_σ) Im t_σ|
        let th = theta(ThetaKind::T01, t, prec)?.abs().pow(4u32) * &pi * t.im();
        h -= th.ln() / 2u32;
        let lp = lambda_prime(t, prec)?.abs() * Float::with_val(w, t.im() * 2u32);
        deg += lp.ln();
    }
    h /= 2u32;
    deg /= 2u32;
    // Deuring: ||dx/2y||_v = ||2||_v^{−1/3} at the places over 2
    h -= Float::with_val(w, &log2 / 3u32);
    let third = Float::with_val(w, &log2 / 3u32);
    let h_identity = Float::with_val(w, &third - &deg) / 2u32;
    let rhs = Float::with_val(w, &h * -2i32) + &third;
    let residual = Float::with_val(w, &deg - &rhs).abs();
    Ok(HeightReport {
        deg_t: deg,
        h_f_direct: h,
        h_f_identity: h_identity,
        residual,
        prec,
    })
}

/// `|deg T − (−2h_F + log 2/3)|`.
pub fn lem2_check(prec: u32) -> Result<Float> {
    Ok(faltings_height_cm(prec)?.residual)
}

/// Finite-truncation proxies for the coefficient heights.
#[derive(Clone, Debug, PartialEq)]
pub struct HeightDiagnostics {
    /// Finite places over `p ≥ l`, maximized over `n ∈ [N/2, N]`.
    pub tau_hat: f64,
    /// All places, maximized over `n ∈ [N/2, N]`.
    pub rho_hat: f64,
    /// The all-places sum at `n = N/2` and `n = N`.
    pub rho_half: f64,
    pub rho_full: f64,
    /// `rho_full − rho_half ≥ log 2/2`.
    pub unbounded: bool,
    /// Primes with a negative valuation somewhere in the series.
    pub primes: Vec<u64>,
}

fn log_abs(x: &rug::Rational) -> Option<f64> {
    (*x != 0).then(|| Float::with_val(64, x).abs().ln().to_f64())
}

/// `log |σ(a)|` for each archimedean place with its weight.
fn archimedean_logs(a: &FieldElem) -> Vec<(f64, f64)> {
    match a.field() {
        GroundField::Rationals => vec![(log_abs(a.a()).unwrap_or(f64::NEG_INFINITY), 1.0)],
        GroundField::Quadratic { d } => {
            let w = 128;
            let x = Float::with_val(w, a.a());
            let y = Float::with_val(w, a.b());
            if d < 0 {
                let n = x.square() + y.square() * Integer::from(-d);
                vec![(
                    if n == 0 {
                        f64::NEG_INFINITY
                    } else {
                        n.ln().to_f64() / 2.0
                    },
                    1.0,
                )]
            } else {
                let r = Float::with_val(w, d).sqrt() * y;
                let l = |v: Float| {
                    if v == 0 {
                        f64::NEG_INFINITY
                    } else {
                        v.abs().ln().to_f64()
                    }
                };
                vec![(l(Float::with_val(w, &x + &r)), 0.5), (l(x - r), 0.5)]
            }
        }
        GroundField::PrimeField { .. } => vec![],
    }
}

/// `τ̂` and `ρ̂` for a truncated series with coefficients in `Q` or `Q(√d)`.
///
/// For each place `v` with weight `[K_v:Q_p]/[K:Q]`, the profile
/// `(1/n)·Σ_v sup_{j≤n} log⁺|a_j|_v` is evaluated for `n ∈ [N/2, N]`.
pub fn coeff_height_diagnostics(
    series: &TruncSeries<FieldElem>,
    l: u64,
) -> Result<HeightDiagnostics> {
    let n_max = series.order();
    if n_max < 64 {
        return Err(Error::Domain(format!(
            "diagnostics need N >= 64, got {n_max}"
        )));
    }
    let field = series.center().field();
    if matches!(field, GroundField::PrimeField { .. }) {
        return Err(Error::InvalidField(
            "diagnostics need Q or Q(sqrt d)".into(),
        ));
    }
    let degree = field.degree() as f64;
    let mut primes = BTreeSet::new();
    for c in series.coeffs() {
        for q in [c.a(), c.b()] {
            prime_factors(q.denom(), &mut primes)?;
        }
    }
    // running sup of log⁺|a_j|_v per place, weighted
    let mut places: Vec<(u64, PlaceId, f64)> = Vec::new();
    for &p in &primes {
        for place in PlaceId::above(field, p)? {
            let (f, e) = place.local_degrees()?;
            places.push((p, place, (f * e) as f64 / degree));
        }
    }
    let mut finite_sup = vec![0.0f64; places.len()];
    let arch_w: Vec<f64> = archimedean_logs(&FieldElem::from_rational(field, 1))
        .iter()
        .map(|x| x.1)
        .collect();
    let mut arch_sup = vec![0.0f64; arch_w.len()];
    let mut tau_hat = 0.0f64;
    let mut rho_hat = 0.0f64;
    let (mut rho_half, mut rho_full) = (0.0, 0.0);
    let half = n_max.div_ceil(2);
    for (j, a) in series.coeffs().iter().enumerate() {
        if !a.is_zero() {
            for (k, (p, place, _)) in places.iter().enumerate() {
                if let Valuation::Finite(v) = valuation(a, place)? {
                    let lp = -v.to_f64() * (*p as f64).ln();
                    finite_sup[k] = finite_sup[k].max(lp);
                }
            }
            for (k, (lg, _)) in archimedean_logs(a).into_iter().enumerate() {
                arch_sup[k] = arch_sup[k].max(lg);
            }
        }
        if j >= half.max(1) {
            let n = j as f64;
            let mut tau = 0.0;
            let mut rho = 0.0;
            for (k, (p, _, wgt)) in places.iter().enumerate() {
                rho += wgt * finite_sup[k];
                if *p >= l {
                    tau += wgt * finite_sup[k];
                }
            }
            for (k, s) in arch_sup.iter().enumerate() {
                rho += arch_w[k] * s;
            }
            tau_hat = tau_hat.max(tau / n);
            rho_hat = rho_hat.max(rho / n);
            if j == half.max(1) {
                rho_half = rho / n;
            }
            if j == n_max {
                rho_full = rho / n;
            }
        }
    }
    let unbounded = rho_full - rho_half >= std::f64::consts::LN_2 / 2.0;
    Ok(HeightDiagnostics {
        tau_hat,
        rho_hat,
        rho_half,
        rho_full,
        unbounded,
        primes: primes.into_iter().collect(),
    })
}

fn prime_factors(n: &Integer, out: &mut BTreeSet<u64>) -> Result<()> {
    let mut n = n.clone();
    let mut p = 2u32;
    while Integer::from(p) * p <= n {
        if n.is_divisible_u(p) {
            out.insert(p as u64);
            while n.is_divisible_u(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.insert(
            n.to_u64()
                .ok_or_else(|| Error::Domain("denominator prime too large".into()))?,
        );
    }
    Ok(())
}
