//! Theta constants, eta, λ and the CM constants at arbitrary precision.
//!
//! Conventions: `q = e^{πit}`,
//! `θ₀₀ = Σ q^{n²}`, `θ₀₁ = Σ (−1)ⁿ q^{n²}`, `θ₁₀ = Σ q^{(n+1/2)²}`,
//! `η = e^{πit/12} Σ (−1)ⁿ q^{n(3n−1)}` and `λ = θ₀₀⁴/θ₀₁⁴`.
//! Everything is evaluated with 32 guard bits; a returned value of
//! precision `prec` is accurate to `2^{1−prec}` relative.

use std::f64::consts::{LN_2, PI};
use std::fmt;

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float, Integer, Rational};

use crate::error::{Error, Result};

const GUARD: u32 = 32;
const MIN_IM: f64 = 0.05;

fn work(prec: u32) -> u32 {
    prec + GUARD
}

fn pi(w: u32) -> Float {
    Float::with_val(w, Constant::Pi)
}

/// A complex value together with the precision it is accurate to.
#[derive(Clone, Debug, PartialEq)]
pub struct BigComplex {
    value: Complex,
    prec: u32,
}

impl BigComplex {
    pub fn new(value: Complex, prec: u32) -> Self {
        BigComplex { value, prec }
    }

    pub fn value(&self) -> &Complex {
        &self.value
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn re(&self) -> &Float {
        self.value.real()
    }

    pub fn im(&self) -> &Float {
        self.value.imag()
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.value.prec().0, self.value.abs_ref())
    }

    /// `2^{1−prec}·|z|`.
    pub fn error_bound(&self) -> Float {
        self.abs() << (1 - self.prec as i32)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re().to_f64(), self.im().to_f64())
    }

    /// `|self − other|`.
    pub fn distance(&self, other: &Complex) -> Float {
        let d = Complex::with_val(self.value.prec().0, &self.value - other);
        Float::with_val(self.value.prec().0, d.abs_ref())
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = digits_for(self.prec);
        let re = decimal(self.re(), digits, self.prec);
        let im = decimal(self.im(), digits, self.prec);
        write!(f, "({re}) + ({im})i")
    }
}

/// A point `t` with `Im t > 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct UpperHalfPoint {
    t: Complex,
}

impl UpperHalfPoint {
    pub fn new(t: Complex) -> Result<Self> {
        if t.imag().is_sign_negative()
            || t.imag().is_zero()
            || !t.imag().is_finite()
            || !t.real().is_finite()
        {
            return Err(Error::Domain("Im t must be positive".into()));
        }
        Ok(UpperHalfPoint { t })
    }

    pub fn from_parts(re: Float, im: Float) -> Result<Self> {
        let w = re.prec().max(im.prec());
        Self::new(Complex::with_val(w, (re, im)))
    }

    /// `(−1 + √3 i)/2`.
    pub fn hexagonal(prec: u32) -> Self {
        let w = work(prec);
        let s3 = Float::with_val(w, 3).sqrt() / 2u32;
        UpperHalfPoint {
            t: Complex::with_val(w, (Float::with_val(w, -0.5), s3)),
        }
    }

    /// `i`.
    pub fn i(prec: u32) -> Self {
        UpperHalfPoint {
            t: Complex::with_val(work(prec), (0, 1)),
        }
    }

    /// `(1 + i)/2`.
    pub fn square_half(prec: u32) -> Self {
        UpperHalfPoint {
            t: Complex::with_val(work(prec), (0.5, 0.5)),
        }
    }

    /// Parses `t0`, `i`, `(1+i)/2`, or a decimal pair `re,im`.
    pub fn parse(text: &str, prec: u32) -> Result<Self> {
        let w = work(prec);
        match text.trim() {
            "t0" | "(-1+sqrt3*i)/2" => Ok(Self::hexagonal(prec)),
            "i" => Ok(Self::i(prec)),
            "(1+i)/2" => Ok(Self::square_half(prec)),
            other => {
                let (re, im) = other.split_once(',').ok_or_else(|| {
                    Error::Domain(format!("cannot read point `{other}`; use re,im"))
                })?;
                let f = |s: &str| {
                    Float::parse(s.trim())
                        .map(|v| Float::with_val(w, v))
                        .map_err(|_| Error::Domain(format!("not a decimal: `{s}`")))
                };
                Self::from_parts(f(re)?, f(im)?)
            }
        }
    }

    pub fn value(&self) -> &Complex {
        &self.t
    }

    pub fn im(&self) -> &Float {
        self.t.imag()
    }

    fn checked(&self) -> Result<&Self> {
        if self.t.imag().to_f64() < MIN_IM {
            return Err(Error::Region(format!(
                "Im t = {} is below {MIN_IM}",
                self.t.imag().to_f64()
            )));
        }
        Ok(self)
    }

    /// `e^{πi·t·num/den}` at precision `w`.
    fn nome_power(&self, num: i64, den: i64, w: u32) -> Complex {
        let mut z = Complex::with_val(w, &self.t * Complex::with_val(w, (0, pi(w))));
        z *= num;
        z /= den;
        z.exp()
    }

    /// Number of terms `N` with `e^{−π·Im t·N²} < 2^{−prec−40}`.
    fn terms(&self, prec: u32) -> i64 {
        let im = self.t.imag().to_f64();
        ((prec as f64 + 40.0) * LN_2 / (PI * im)).sqrt().ceil() as i64 + 1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThetaKind {
    T00,
    T01,
    T10,
}

impl ThetaKind {
    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "00" => Some(ThetaKind::T00),
            "01" => Some(ThetaKind::T01),
            "10" => Some(ThetaKind::T10),
            _ => None,
        }
    }
}

/// `(θ₀₀, θ₀₁, θ₁₀)` at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct Thetas {
    pub t00: BigComplex,
    pub t01: BigComplex,
    pub t10: BigComplex,
}

/// All three theta constants.
pub fn thetas(t: &UpperHalfPoint, prec: u32) -> Result<Thetas> {
    let t = t.checked()?;
    let w = work(prec);
    let n = t.terms(prec);
    let mut s00 = Complex::with_val(w, 1);
    let mut s01 = Complex::with_val(w, 1);
    for k in 1..=n {
        let q = t.nome_power(k * k, 1, w) * 2u32;
        s00 += &q;
        if k % 2 == 0 {
            s01 += &q;
        } else {
            s01 -= &q;
        }
    }
    let mut s10 = Complex::with_val(w, 0);
    for k in 0..=n {
        s10 += t.nome_power(k * (k + 1), 1, w);
    }
    let s10 = s10 * t.nome_power(1, 4, w) * 2u32;
    Ok(Thetas {
        t00: BigComplex::new(s00, prec),
        t01: BigComplex::new(s01, prec),
        t10: BigComplex::new(s10, prec),
    })
}

/// One theta constant.
///
/// ```
/// use pcurve::modular::{theta, ThetaKind, UpperHalfPoint};
///
/// let t = UpperHalfPoint::i(128);
/// let a = theta(ThetaKind::T00, &t, 128).unwrap().to_f64().0;
/// let b = theta(ThetaKind::T01, &t, 128).unwrap().to_f64().0;
/// assert!((a.powi(4) / b.powi(4) - 2.0).abs() < 1e-12);
/// ```
pub fn theta(kind: ThetaKind, t: &UpperHalfPoint, prec: u32) -> Result<BigComplex> {
    let th = thetas(t, prec)?;
    Ok(match kind {
        ThetaKind::T00 => th.t00,
        ThetaKind::T01 => th.t01,
        ThetaKind::T10 => th.t10,
    })
}

/// Dedekind eta.
pub fn eta(t: &UpperHalfPoint, prec: u32) -> Result<BigComplex> {
    let t = t.checked()?;
    let w = work(prec);
    let n = t.terms(prec);
    let mut s = Complex::with_val(w, 0);
    for k in -n..=n {
        let q = t.nome_power(k * (3 * k - 1), 1, w);
        if k % 2 == 0 {
            s += q;
        } else {
            s -= q;
        }
    }
    Ok(BigComplex::new(s * t.nome_power(1, 12, w), prec))
}

/// `λ = θ₀₀⁴/θ₀₁⁴`.
pub fn lambda_fn(t: &UpperHalfPoint, prec: u32) -> Result<BigComplex> {
    let th = thetas(t, prec)?;
    let r = Complex::with_val(work(prec), th.t00.value() / th.t01.value());
    Ok(BigComplex::new(r.pow(4u32), prec))
}

/// `dλ/dt = πi·(θ₀₀θ₁₀/θ₀₁)⁴`.
pub fn lambda_prime(t: &UpperHalfPoint, prec: u32) -> Result<BigComplex> {
    let w = work(prec);
    let th = thetas(t, prec)?;
    let r = Complex::with_val(w, th.t00.value() * th.t10.value()) / th.t01.value();
    let pii = Complex::with_val(w, (0, pi(w)));
    Ok(BigComplex::new(r.pow(4u32) * pii, prec))
}

/// `Γ(q)` at a rational argument.
///
/// ```
/// use pcurve::modular::gamma_rational;
/// use rug::Rational;
///
/// let g = gamma_rational(&Rational::from((1, 2)), 64).unwrap();
/// assert!((g.to_f64() - std::f64::consts::PI.sqrt()).abs() < 1e-15);
/// ```
pub fn gamma_rational(q: &Rational, prec: u32) -> Result<Float> {
    if *q.denom() == 1 && *q.numer() <= 0 {
        return Err(Error::Domain(format!("Gamma has a pole at {q}")));
    }
    Ok(Float::with_val(work(prec), q).gamma())
}

/// `B(a, b) = Γ(a)Γ(b)/Γ(a + b)`.
pub fn beta(a: &Rational, b: &Rational, prec: u32) -> Result<Float> {
    let s = Rational::from(a + b);
    Ok(gamma_rational(a, prec)? * gamma_rational(b, prec)? / gamma_rational(&s, prec)?)
}

/// `(g₂, g₃)` of the lattice `Z + tZ`.
pub fn eisenstein_g2_g3(t: &UpperHalfPoint, prec: u32) -> Result<(BigComplex, BigComplex)> {
    let w = work(prec);
    let th = thetas(t, prec)?;
    let a = th.t00.value().clone().pow(4u32);
    let b = th.t01.value().clone().pow(4u32);
    let c = th.t10.value().clone().pow(4u32);
    let e4 =
        (Complex::with_val(w, a.square_ref()) + b.clone().square() + c.clone().square()) / 2u32;
    let e6 = Complex::with_val(w, &a + &b)
        * Complex::with_val(w, &a + &c)
        * Complex::with_val(w, &b - &c)
        / 2u32;
    let p = pi(w);
    let g2 = e4 * (p.clone().pow(4u32) * 4u32 / 3u32);
    let g3 = e6 * (p.clone().pow(6u32) * 8u32 / 27u32);
    Ok((BigComplex::new(g2, prec), BigComplex::new(g3, prec)))
}

/// `(℘(1/2), ℘''(1/2))` for the lattice `Z + tZ`.
pub fn wp_half_period(t: &UpperHalfPoint, prec: u32) -> Result<(BigComplex, BigComplex)> {
    let w = work(prec);
    let th = thetas(t, prec)?;
    let (g2, _) = eisenstein_g2_g3(t, prec)?;
    let p2 = Float::with_val(w, pi(w).square_ref());
    let wp = (th.t00.value().clone().pow(4u32) + th.t01.value().clone().pow(4u32)) * p2 / 3u32;
    let wpdd =
        Complex::with_val(w, wp.square_ref()) * 6u32 - Complex::with_val(w, g2.value() / 2u32);
    Ok((BigComplex::new(wp, prec), BigComplex::new(wpdd, prec)))
}

/// The three CM constants.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CmConstant {
    /// `3Γ(1/3)⁶/(2^{8/3}π³)`: `2·Im t₀·|λ'(t₀)|` at the hexagonal point.
    Rinf,
    /// `2^{−3/2}π^{−3/2}Γ(1/4)²`.
    Eremenko,
    /// `2^{−5/2}π^{−2}Γ(1/4)⁴`.
    EcRinf,
}

impl CmConstant {
    pub const ALL: [CmConstant; 3] = [CmConstant::Rinf, CmConstant::Eremenko, CmConstant::EcRinf];

    pub fn tag(&self) -> &'static str {
        match self {
            CmConstant::Rinf => "rinf",
            CmConstant::Eremenko => "eremenko",
            CmConstant::EcRinf => "ec_rinf",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.tag() == tag)
    }
}

/// A CM constant from its Γ closed form, with the theta/eta route alongside.
#[derive(Clone, Debug, PartialEq)]
pub struct CmValue {
    pub which: CmConstant,
    pub value: Float,
    pub theta_route: Float,
    pub prec: u32,
}

impl CmValue {
    /// Rounded decimal with an error annotation.
    pub fn decimal(&self, digits: usize) -> String {
        format!(
            "{} ± 2^-{}",
            decimal(&self.value, digits, self.prec),
            error_exponent(&self.value, digits, self.prec)
        )
    }
}

fn gamma_frac(n: i32, d: u32, prec: u32) -> Float {
    gamma_rational(&Rational::from((n, d)), prec).expect("positive argument")
}

fn closed_form(which: CmConstant, prec: u32) -> Float {
    let w = work(prec);
    let p = pi(w);
    let pow2 = |n: i32, d: u32| Float::with_val(w, Rational::from((n, d))).exp2();
    match which {
        CmConstant::Rinf => gamma_frac(1, 3, prec).pow(6u32) * 3u32 / pow2(8, 3) / p.pow(3u32),
        CmConstant::Eremenko => {
            gamma_frac(1, 4, prec).square() * pow2(-3, 2) / p.clone().pow(3u32).sqrt()
        }
        CmConstant::EcRinf => gamma_frac(1, 4, prec).pow(4u32) * pow2(-5, 2) / p.square(),
    }
}

fn theta_route(which: CmConstant, prec: u32) -> Result<Float> {
    let w = work(prec);
    let p = pi(w);
    match which {
        CmConstant::Rinf => {
            // π·|2⁸η(t₀)²⁴|^{1/6}·2 Im t₀
            let t0 = UpperHalfPoint::hexagonal(prec);
            let e4 = eta(&t0, prec)?.abs().pow(4u32);
            let two43 = Float::with_val(w, Rational::from((4, 3))).exp2();
            Ok(e4 * two43 * p * Float::with_val(w, t0.im() * 2u32))
        }
        CmConstant::Eremenko => {
            // 2^{5/2}·π·|η(i)|⁴/B(1/4, 1/4)
            let e4 = eta(&UpperHalfPoint::i(prec), prec)?.abs().pow(4u32);
            let q = Rational::from((1, 4));
            let two52 = Float::with_val(w, Rational::from((5, 2))).exp2();
            Ok(e4 * two52 * p / beta(&q, &q, prec)?)
        }
        CmConstant::EcRinf => {
            // π·|θ₀₁((1+i)/2)|²·(eremenko constant)
            let th = theta(ThetaKind::T01, &UpperHalfPoint::square_half(prec), prec)?;
            Ok(th.abs().square() * p * theta_route(CmConstant::Eremenko, prec)?)
        }
    }
}

/// Evaluates a CM constant both ways and checks that the routes agree to
/// `2^{−prec}` relative.
///
/// ```
/// use pcurve::modular::{cm_constant, CmConstant};
///
/// let r = cm_constant(CmConstant::Rinf, 128).unwrap();
/// assert!(r.decimal(10).starts_with("5.6325035928"));
/// ```
pub fn cm_constant(which: CmConstant, prec: u32) -> Result<CmValue> {
    let value = closed_form(which, prec);
    let route = theta_route(which, prec)?;
    let diff = Float::with_val(value.prec(), &value - &route).abs();
    if diff > Float::with_val(value.prec(), &value >> prec) {
        return Err(Error::Inconsistent(format!(
            "{}: closed form and theta route differ by {}",
            which.tag(),
            diff.to_f64()
        )));
    }
    Ok(CmValue {
        which,
        value,
        theta_route: route,
        prec,
    })
}

/// Default number of decimal digits supported by `prec` bits.
pub fn digits_for(prec: u32) -> usize {
    ((prec.saturating_sub(4)) as f64 * 2f64.log10()).floor() as usize
}

/// `x` rounded to nearest with `digits` decimals.
pub fn decimal(x: &Float, digits: usize, prec: u32) -> String {
    let w = x.prec().max(prec) + 4 * digits as u32 + 8;
    let scaled = Float::with_val(w, x * Integer::from(Integer::u_pow_u(10, digits as u32)));
    let n = scaled.to_integer().unwrap_or_default();
    let neg = n < 0;
    let mut s = n.abs().to_string();
    if s.len() <= digits {
        s = format!("{}{s}", "0".repeat(digits + 1 - s.len()));
    }
    if digits > 0 {
        s.insert(s.len() - digits, '.');
    }
    if neg {
        s.insert(0, '-');
    }
    s
}

/// `k` such that `2^{−k}` bounds the rounding plus evaluation error of
/// [`decimal`].
pub fn error_exponent(x: &Float, digits: usize, prec: u32) -> i64 {
    let rounding = 0.5 * 10f64.powi(-(digits as i32));
    let eval = x.to_f64().abs() * 2f64.powi(1 - prec as i32);
    (-(rounding + eval).log2()).floor() as i64
}
