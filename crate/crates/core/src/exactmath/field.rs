//! Ground fields and their elements.
//!
//! Two element types implement [`Scalar`]:
//!
//! * [`FieldElem`]: `a + b·√d` with exact rational `a`, `b` (the rationals are
//!   the case `b = 0`);
//! * [`Residue`]: elements of `F_p` or `F_p[s]/(s² − n)` with word-sized
//!   representatives.
//!
//! Every element carries its [`GroundField`], so polynomials and rational
//! functions never need a separate context object.

use std::fmt;

use rug::{Integer, Rational};

use crate::error::{Error, Result};

/// The field coefficients live in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroundField {
    Rationals,
    /// `Q(√d)`, `d` squarefree and not 0 or 1.
    Quadratic {
        d: i64,
    },
    /// `F_p` when `ext` is `None`, otherwise `F_p[s]/(s² − n)` with `n` a
    /// non-residue mod `p`.
    PrimeField {
        p: u64,
        ext: Option<u64>,
    },
}

impl GroundField {
    pub fn quadratic(d: i64) -> Result<Self> {
        if d == 0 || d == 1 || !is_squarefree(d) {
            return Err(Error::InvalidField(format!(
                "{d} is not a squarefree integer other than 0, 1"
            )));
        }
        Ok(GroundField::Quadratic { d })
    }

    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime(p) || p >= 1 << 32 {
            return Err(Error::InvalidField(format!("{p} is not a supported prime")));
        }
        Ok(GroundField::PrimeField { p, ext: None })
    }

    /// `F_{p²}` presented as `F_p[s]/(s² − n)`.
    pub fn prime_square(p: u64, n: u64) -> Result<Self> {
        let field = Self::prime(p)?;
        let n = n % p;
        if p == 2 || legendre(n, p) != -1 {
            return Err(Error::InvalidField(format!(
                "{n} is not a non-residue mod {p}"
            )));
        }
        let _ = field;
        Ok(GroundField::PrimeField { p, ext: Some(n) })
    }

    pub fn characteristic(&self) -> u64 {
        match *self {
            GroundField::PrimeField { p, .. } => p,
            _ => 0,
        }
    }

    /// Degree over the prime field.
    pub fn degree(&self) -> u32 {
        match *self {
            GroundField::Rationals => 1,
            GroundField::Quadratic { .. } => 2,
            GroundField::PrimeField { ext: None, .. } => 1,
            GroundField::PrimeField { ext: Some(_), .. } => 2,
        }
    }

    /// The integer whose square root `sqrtd` denotes, if the field has one.
    pub fn radicand(&self) -> Option<i64> {
        match *self {
            GroundField::Quadratic { d } => Some(d),
            GroundField::PrimeField { ext: Some(n), .. } => Some(n as i64),
            _ => None,
        }
    }
}

/// Field operations shared by number-field elements and residues.
pub trait Scalar: Clone + PartialEq + Eq + fmt::Debug + fmt::Display + Send + Sync {
    fn field(&self) -> GroundField;
    fn zero(field: GroundField) -> Self;
    fn one(field: GroundField) -> Self;
    fn from_integer(field: GroundField, n: &Integer) -> Self;
    /// The distinguished square root `sqrtd`, when the field has one.
    fn sqrt_d(field: GroundField) -> Option<Self>;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Option<Self>;

    fn from_i64(field: GroundField, n: i64) -> Self {
        Self::from_integer(field, &Integer::from(n))
    }

    fn is_one(&self) -> bool {
        *self == Self::one(self.field())
    }

    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.mul(&i))
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.field());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Text that the expression parser reads back as this element.
    fn to_expr(&self) -> String;

    /// `Some(|x|)` when the element is a negative rational, used by printers
    /// to emit binary minus instead of a unary sign.
    fn negative_part(&self) -> Option<Self> {
        None
    }
}

/// `a + b·√d` over `Q` or `Q(√d)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElem {
    a: Rational,
    b: Rational,
    field: GroundField,
}

impl FieldElem {
    pub fn new(field: GroundField, a: Rational, b: Rational) -> Result<Self> {
        match field {
            GroundField::Rationals if b != 0 => {
                Err(Error::InvalidField("irrational part in Q".into()))
            }
            GroundField::PrimeField { .. } => Err(Error::InvalidField(
                "FieldElem lives over Q or Q(sqrt d)".into(),
            )),
            _ => Ok(FieldElem { a, b, field }),
        }
    }

    pub fn rational(q: impl Into<Rational>) -> Self {
        FieldElem {
            a: q.into(),
            b: Rational::new(),
            field: GroundField::Rationals,
        }
    }

    /// `a` as an element of `field` (which must be `Q` or quadratic).
    pub fn from_rational(field: GroundField, a: impl Into<Rational>) -> Self {
        debug_assert!(!matches!(field, GroundField::PrimeField { .. }));
        FieldElem {
            a: a.into(),
            b: Rational::new(),
            field,
        }
    }

    pub fn ratio(field: GroundField, n: i64, d: i64) -> Self {
        Self::from_rational(field, Rational::from((n, d)))
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    fn d(&self) -> i64 {
        self.field.radicand().unwrap_or(0)
    }

    /// `a² − d b²`.
    pub fn norm(&self) -> Rational {
        let a2 = Rational::from(&self.a * &self.a);
        let b2 = Rational::from(&self.b * &self.b);
        a2 - b2 * self.d()
    }

    pub fn conj(&self) -> Self {
        FieldElem {
            a: self.a.clone(),
            b: Rational::from(-&self.b),
            field: self.field,
        }
    }

    pub fn is_rational(&self) -> bool {
        self.b == 0
    }

    /// Complex value under the embedding `√d ↦ +i√|d|` (or `+√d` when `d > 0`).
    pub fn to_complex_f64(&self) -> (f64, f64) {
        let a = self.a.to_f64();
        let b = self.b.to_f64();
        let d = self.d();
        if d < 0 {
            (a, b * ((-d) as f64).sqrt())
        } else {
            (a + b * (d as f64).sqrt(), 0.0)
        }
    }
}

impl Scalar for FieldElem {
    fn field(&self) -> GroundField {
        self.field
    }

    fn zero(field: GroundField) -> Self {
        FieldElem::from_rational(field, Rational::new())
    }

    fn one(field: GroundField) -> Self {
        FieldElem::from_rational(field, Rational::from(1))
    }

    fn from_integer(field: GroundField, n: &Integer) -> Self {
        FieldElem::from_rational(field, Rational::from(n))
    }

    fn sqrt_d(field: GroundField) -> Option<Self> {
        match field {
            GroundField::Quadratic { .. } => Some(FieldElem {
                a: Rational::new(),
                b: Rational::from(1),
                field,
            }),
            _ => None,
        }
    }

    fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    fn add(&self, o: &Self) -> Self {
        debug_assert_eq!(self.field, o.field);
        FieldElem {
            a: Rational::from(&self.a + &o.a),
            b: Rational::from(&self.b + &o.b),
            field: self.field,
        }
    }

    fn sub(&self, o: &Self) -> Self {
        debug_assert_eq!(self.field, o.field);
        FieldElem {
            a: Rational::from(&self.a - &o.a),
            b: Rational::from(&self.b - &o.b),
            field: self.field,
        }
    }

    fn mul(&self, o: &Self) -> Self {
        debug_assert_eq!(self.field, o.field);
        if self.b == 0 && o.b == 0 {
            return FieldElem::from_rational(self.field, Rational::from(&self.a * &o.a));
        }
        let ac = Rational::from(&self.a * &o.a);
        let bd = Rational::from(&self.b * &o.b) * self.d();
        let ad = Rational::from(&self.a * &o.b);
        let bc = Rational::from(&self.b * &o.a);
        FieldElem {
            a: ac + bd,
            b: ad + bc,
            field: self.field,
        }
    }

    fn neg(&self) -> Self {
        FieldElem {
            a: Rational::from(-&self.a),
            b: Rational::from(-&self.b),
            field: self.field,
        }
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.b == 0 {
            return Some(FieldElem::from_rational(self.field, self.a.clone().recip()));
        }
        let n = self.norm();
        let c = self.conj();
        Some(FieldElem {
            a: c.a / &n,
            b: c.b / &n,
            field: self.field,
        })
    }

    fn to_expr(&self) -> String {
        if self.b == 0 {
            return self.a.to_string();
        }
        let b = if self.b == 1 {
            "sqrtd".to_string()
        } else if self.b == -1 {
            "-1*sqrtd".to_string()
        } else {
            format!("{}*sqrtd", self.b)
        };
        if self.a == 0 {
            format!("({b})")
        } else if self.b < 0 {
            let nb = Rational::from(-&self.b);
            let nb = if nb == 1 {
                "sqrtd".to_string()
            } else {
                format!("{nb}*sqrtd")
            };
            format!("({} - {nb})", self.a)
        } else {
            format!("({} + {b})", self.a)
        }
    }

    fn negative_part(&self) -> Option<Self> {
        if self.b == 0 && self.a < 0 {
            Some(self.neg())
        } else {
            None
        }
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr())
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_expr())
    }
}

/// Element `a + b·s` of `F_p` (`n = 0`, `b = 0`) or `F_p[s]/(s² − n)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Residue {
    a: u64,
    b: u64,
    p: u64,
    n: u64,
}

impl Residue {
    pub fn new(field: GroundField, a: u64, b: u64) -> Self {
        match field {
            GroundField::PrimeField { p, ext: None } => Residue {
                a: a % p,
                b: 0,
                p,
                n: 0,
            },
            GroundField::PrimeField { p, ext: Some(n) } => Residue {
                a: a % p,
                b: b % p,
                p,
                n,
            },
            _ => panic!("Residue requires a prime field"),
        }
    }

    pub fn parts(&self) -> (u64, u64) {
        (self.a, self.b)
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn mk(&self, a: u64, b: u64) -> Self {
        Residue {
            a,
            b,
            p: self.p,
            n: self.n,
        }
    }

    /// Value of a rational under reduction; `None` if `p` divides the denominator.
    pub fn from_rational(field: GroundField, q: &Rational) -> Option<Self> {
        let p = field.characteristic();
        let pi = Integer::from(p);
        let den = Integer::from(q.denom() % &pi);
        if den == 0 {
            return None;
        }
        let num = Integer::from(q.numer() % &pi);
        let num = if num < 0 { num + &pi } else { num };
        let den = den.to_u64().unwrap();
        let num = num.to_u64().unwrap();
        let dinv = mod_inv(den, p)?;
        Some(Residue::new(field, mulmod(num, dinv, p), 0))
    }
}

pub(crate) fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    acc
}

pub(crate) fn mod_inv(a: u64, p: u64) -> Option<u64> {
    let (mut r0, mut r1) = (p as i128, (a % p) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(p as i128) as u64)
}

/// Legendre symbol `(a|p)` for odd prime `p`.
pub fn legendre(a: u64, p: u64) -> i32 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if powmod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Square root of a quadratic residue mod an odd prime (Tonelli–Shanks).
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if legendre(a, p) != 1 {
        return None;
    }
    let (mut q, mut s) = (p - 1, 0u32);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let z = (2..p).find(|&z| legendre(z, p) == -1)?;
    let mut m = s;
    let mut c = powmod(z, q, p);
    let mut t = powmod(a, q, p);
    let mut r = powmod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mulmod(tt, tt, p);
            i += 1;
        }
        let b = powmod(c, 1 << (m - i - 1), p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    Some(r.min(p - r))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut i = 2u64;
    while i * i <= n {
        if n.is_multiple_of(i) {
            return false;
        }
        i += 1;
    }
    true
}

fn is_squarefree(d: i64) -> bool {
    let n = d.unsigned_abs();
    let mut i = 2u64;
    while i * i <= n {
        if n.is_multiple_of(i * i) {
            return false;
        }
        i += 1;
    }
    true
}

impl Scalar for Residue {
    fn field(&self) -> GroundField {
        GroundField::PrimeField {
            p: self.p,
            ext: if self.n == 0 { None } else { Some(self.n) },
        }
    }

    fn zero(field: GroundField) -> Self {
        Residue::new(field, 0, 0)
    }

    fn one(field: GroundField) -> Self {
        Residue::new(field, 1, 0)
    }

    fn from_integer(field: GroundField, n: &Integer) -> Self {
        let p = field.characteristic();
        let r = Integer::from(n % p).to_i64().unwrap();
        Residue::new(field, r.rem_euclid(p as i64) as u64, 0)
    }

    fn sqrt_d(field: GroundField) -> Option<Self> {
        match field {
            GroundField::PrimeField { ext: Some(_), .. } => Some(Residue::new(field, 0, 1)),
            _ => None,
        }
    }

    fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    fn add(&self, o: &Self) -> Self {
        debug_assert_eq!((self.p, self.n), (o.p, o.n));
        let p = self.p;
        self.mk((self.a + o.a) % p, (self.b + o.b) % p)
    }

    fn sub(&self, o: &Self) -> Self {
        debug_assert_eq!((self.p, self.n), (o.p, o.n));
        let p = self.p;
        self.mk((self.a + p - o.a) % p, (self.b + p - o.b) % p)
    }

    fn mul(&self, o: &Self) -> Self {
        debug_assert_eq!((self.p, self.n), (o.p, o.n));
        let p = self.p;
        if self.n == 0 {
            return self.mk(mulmod(self.a, o.a, p), 0);
        }
        let ac = mulmod(self.a, o.a, p);
        let bd = mulmod(mulmod(self.b, o.b, p), self.n, p);
        let ad = mulmod(self.a, o.b, p);
        let bc = mulmod(self.b, o.a, p);
        self.mk((ac + bd) % p, (ad + bc) % p)
    }

    fn neg(&self) -> Self {
        let p = self.p;
        self.mk((p - self.a) % p, (p - self.b) % p)
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let p = self.p;
        if self.b == 0 {
            return Some(self.mk(mod_inv(self.a, p)?, 0));
        }
        // (a + bs)^{-1} = (a - bs) / (a² - n b²)
        let norm =
            (mulmod(self.a, self.a, p) + p - mulmod(mulmod(self.b, self.b, p), self.n, p)) % p;
        let ni = mod_inv(norm, p)?;
        Some(self.mk(mulmod(self.a, ni, p), mulmod((p - self.b) % p, ni, p)))
    }

    fn to_expr(&self) -> String {
        match (self.a, self.b) {
            (a, 0) => a.to_string(),
            (0, 1) => "(sqrtd)".to_string(),
            (0, b) => format!("({b}*sqrtd)"),
            (a, 1) => format!("({a} + sqrtd)"),
            (a, b) => format!("({a} + {b}*sqrtd)"),
        }
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr())
    }
}

impl fmt::Debug for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.to_expr(), self.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_field_validation() {
        assert!(GroundField::quadratic(-1).is_ok());
        assert!(GroundField::quadratic(-3).is_ok());
        assert!(GroundField::quadratic(1).is_err());
        assert!(GroundField::quadratic(0).is_err());
        assert!(GroundField::quadratic(12).is_err());
        assert!(GroundField::prime(9).is_err());
        assert!(GroundField::prime_square(7, 3).is_ok());
        assert!(GroundField::prime_square(7, 2).is_err());
    }

    #[test]
    fn gaussian_inverse() {
        let k = GroundField::quadratic(-1).unwrap();
        let z = FieldElem::new(k, Rational::from(1), Rational::from(1)).unwrap();
        let w = z.inv().unwrap();
        assert_eq!(w.a(), &Rational::from((1, 2)));
        assert_eq!(w.b(), &Rational::from((-1, 2)));
        assert!(z.mul(&w).is_one());
    }

    #[test]
    fn residue_square_field() {
        let f = GroundField::prime_square(7, 3).unwrap();
        let s = Residue::sqrt_d(f).unwrap();
        assert_eq!(s.mul(&s), Residue::from_i64(f, 3));
        let x = Residue::new(f, 2, 5);
        assert!(x.mul(&x.inv().unwrap()).is_one());
        // Frobenius has order two on F_49
        assert_eq!(x.pow(49), x);
    }

    #[test]
    fn tonelli_shanks() {
        for p in [3u64, 5, 13, 17, 41, 97, 193] {
            for a in 1..p {
                if let Some(r) = sqrt_mod(a, p) {
                    assert_eq!(mulmod(r, r, p), a);
                } else {
                    assert_eq!(legendre(a, p), -1);
                }
            }
        }
    }

    #[test]
    fn expr_of_negative_parts() {
        let k = GroundField::quadratic(-1).unwrap();
        let z = FieldElem::new(k, Rational::from(2), Rational::from(-3)).unwrap();
        assert_eq!(z.to_expr(), "(2 - 3*sqrtd)");
        assert_eq!(
            FieldElem::rational(-3).negative_part(),
            Some(FieldElem::rational(3))
        );
    }
}
