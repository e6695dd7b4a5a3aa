//! Dense univariate polynomials.

use std::fmt;

use super::field::{GroundField, Scalar};
use crate::error::{Error, Result};

/// Dense polynomial with ascending coefficients and no trailing zeros.
///
/// The variable is not stored; printers take its name as an argument.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly<S: Scalar> {
    field: GroundField,
    coeffs: Vec<S>,
}

impl<S: Scalar> Poly<S> {
    pub fn new(field: GroundField, mut coeffs: Vec<S>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    pub fn zero(field: GroundField) -> Self {
        Poly {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: GroundField) -> Self {
        Self::constant(S::one(field))
    }

    pub fn constant(c: S) -> Self {
        Poly::new(c.field(), vec![c])
    }

    /// `c·x^k`.
    pub fn monomial(c: S, k: usize) -> Self {
        let field = c.field();
        let mut coeffs = vec![S::zero(field); k];
        coeffs.push(c);
        Poly::new(field, coeffs)
    }

    /// The polynomial `x`.
    pub fn x(field: GroundField) -> Self {
        Self::monomial(S::one(field), 1)
    }

    /// `x − c`.
    pub fn linear_root(c: &S) -> Self {
        let field = c.field();
        Poly::new(field, vec![c.neg(), S::one(field)])
    }

    pub fn from_i64s(field: GroundField, cs: &[i64]) -> Self {
        Poly::new(field, cs.iter().map(|&c| S::from_i64(field, c)).collect())
    }

    pub fn field(&self) -> GroundField {
        self.field
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> S {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| S::zero(self.field))
    }

    pub fn lead(&self) -> Option<&S> {
        self.coeffs.last()
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i).add(&o.coeff(i))).collect();
        Poly::new(self.field, coeffs)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i).sub(&o.coeff(i))).collect();
        Poly::new(self.field, coeffs)
    }

    pub fn neg(&self) -> Self {
        Poly {
            field: self.field,
            coeffs: self.coeffs.iter().map(S::neg).collect(),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Poly::zero(self.field);
        }
        Poly::new(self.field, self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(self.field);
        }
        let mut out = vec![S::zero(self.field); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Poly::new(self.field, out)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Poly::one(self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Multiplication by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![S::zero(self.field); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly {
            field: self.field,
            coeffs,
        }
    }

    /// Euclidean division `self = q·d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        let dl = d.lead().ok_or(Error::DivisionByZero)?;
        let inv = dl.inv().expect("nonzero leading coefficient");
        let dd = d.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((Poly::zero(self.field), self.clone()));
        }
        let mut q = vec![S::zero(self.field); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = r[k + dd].mul(&inv);
            if c.is_zero() {
                continue;
            }
            for (j, b) in d.coeffs.iter().enumerate() {
                r[k + j] = r[k + j].sub(&c.mul(b));
            }
            q[k] = c;
        }
        r.truncate(dd);
        Ok((Poly::new(self.field, q), Poly::new(self.field, r)))
    }

    /// Quotient of a division known to be exact.
    pub fn exact_div(&self, d: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(d)?;
        debug_assert!(r.is_zero(), "inexact polynomial division");
        Ok(q)
    }

    /// Scales to leading coefficient one (the zero polynomial is returned as is).
    pub fn monic(&self) -> Self {
        match self.lead() {
            Some(l) if !l.is_one() => self.scale(&l.inv().unwrap()),
            _ => self.clone(),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).unwrap().1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, u, v)` with `u·self + v·o = g = gcd(self, o)` monic.
    pub fn ext_gcd(&self, o: &Self) -> (Self, Self, Self) {
        let f = self.field;
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Poly::one(f), Poly::zero(f));
        let (mut t0, mut t1) = (Poly::zero(f), Poly::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1).unwrap();
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        match r0.lead() {
            Some(l) => {
                let li = l.inv().unwrap();
                (r0.scale(&li), s0.scale(&li), t0.scale(&li))
            }
            None => (r0, s0, t0),
        }
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.mul(&S::from_i64(self.field, i as i64)))
            .collect();
        Poly::new(self.field, coeffs)
    }

    pub fn eval(&self, x: &S) -> S {
        let mut acc = S::zero(self.field);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    /// `self(x + c)`.
    pub fn taylor_shift(&self, c: &S) -> Self {
        let mut a = self.coeffs.clone();
        let n = a.len();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let t = a[j + 1].mul(c);
                a[j] = a[j].add(&t);
            }
        }
        Poly::new(self.field, a)
    }

    /// `self(g)`.
    pub fn compose(&self, g: &Self) -> Self {
        let mut acc = Poly::zero(self.field);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(g).add(&Poly::constant(c.clone()));
        }
        acc
    }

    /// Applies `f` to every coefficient.
    pub fn map<T: Scalar>(&self, field: GroundField, f: impl Fn(&S) -> T) -> Poly<T> {
        Poly::new(field, self.coeffs.iter().map(f).collect())
    }

    /// Text readable by the expression parser, highest degree first.
    pub fn to_expr(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let first = out.is_empty();
            let (neg, mag) = match c.negative_part() {
                Some(m) => (true, m),
                None => (false, c.clone()),
            };
            let body = term(&mag, k, var);
            match (first, neg) {
                // a leading unary minus would bind to the variable before `^`
                (true, true) if k > 0 => out.push_str(&format!("-{}", term_explicit(&mag, k, var))),
                (true, true) => out.push_str(&format!("-{body}")),
                (true, false) => out.push_str(&body),
                (false, true) => out.push_str(&format!(" - {body}")),
                (false, false) => out.push_str(&format!(" + {body}")),
            }
        }
        out
    }
}

fn power(k: usize, var: &str) -> String {
    match k {
        1 => var.to_string(),
        _ => format!("{var}^{k}"),
    }
}

fn term<S: Scalar>(c: &S, k: usize, var: &str) -> String {
    if k == 0 {
        c.to_expr()
    } else if c.is_one() {
        power(k, var)
    } else {
        format!("{}*{}", c.to_expr(), power(k, var))
    }
}

fn term_explicit<S: Scalar>(c: &S, k: usize, var: &str) -> String {
    format!("{}*{}", c.to_expr(), power(k, var))
}

impl<S: Scalar> fmt::Display for Poly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr("x"))
    }
}

impl<S: Scalar> fmt::Debug for Poly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self.to_expr("x"))
    }
}
